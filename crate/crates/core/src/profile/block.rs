//! Key-value text form of a profile.
//!
//! ```text
//! family = "schwarzschild"
//! kind = "ode-integrated"
//! n = 3
//! B = 1.0000000000000000e0
//! m = 2.0000000000000000e0
//! kappa = 0.0000000000000000e0
//! r_max = 2.0000000000000000e1
//! r = [0.0000000000000000e0, ...]
//! lambda = [...]
//! dlambda = [...]
//! ```
//!
//! Reals are written with 17 significant digits so the text round-trips
//! bit-exactly. The block is valid TOML.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{CoshProfile, EuclideanProfile, HorizonProfile, ProfileKind, SharedProfile};
use crate::error::{Error, Result};

pub use crate::export::fmt_real;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileBlock {
    pub family: String,
    pub kind: ProfileKind,
    pub n: usize,
    pub b: f64,
    pub r_max: f64,
    pub m: Option<f64>,
    pub kappa: Option<f64>,
    pub scale: Option<f64>,
    /// `(r, λ, λ')` node arrays for integrated profiles.
    pub nodes: Option<(Vec<f64>, Vec<f64>, Vec<f64>)>,
}

impl Default for ProfileBlock {
    fn default() -> Self {
        Self {
            family: String::new(),
            kind: ProfileKind::ClosedForm,
            n: 3,
            b: 1.0,
            r_max: 1.0,
            m: None,
            kappa: None,
            scale: None,
            nodes: None,
        }
    }
}

fn write_array(out: &mut String, key: &str, values: &[f64]) {
    out.push_str(key);
    out.push_str(" = [");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_real(*v));
    }
    out.push_str("]\n");
}

impl ProfileBlock {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family = \"{}\"", self.family);
        let _ = writeln!(out, "kind = \"{}\"", self.kind);
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "B = {}", fmt_real(self.b));
        if let Some(m) = self.m {
            let _ = writeln!(out, "m = {}", fmt_real(m));
        }
        if let Some(k) = self.kappa {
            let _ = writeln!(out, "kappa = {}", fmt_real(k));
        }
        if let Some(a) = self.scale {
            let _ = writeln!(out, "scale = {}", fmt_real(a));
        }
        let _ = writeln!(out, "r_max = {}", fmt_real(self.r_max));
        if let Some((r, l, d)) = &self.nodes {
            write_array(&mut out, "r", r);
            write_array(&mut out, "lambda", l);
            write_array(&mut out, "dlambda", d);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::ProfileBlock(e.message().to_string()))?;
        const KNOWN: [&str; 11] = [
            "family", "kind", "n", "B", "m", "kappa", "scale", "r_max", "r", "lambda", "dlambda",
        ];
        if let Some(k) = table.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(Error::ProfileBlock(format!("unknown key `{k}`")));
        }
        let string = |key: &str| -> Result<String> {
            table
                .get(key)
                .and_then(|v| v.as_str())
                .map(str::to_string)
                .ok_or_else(|| Error::ProfileBlock(format!("missing string `{key}`")))
        };
        let real = |key: &str| -> Result<Option<f64>> {
            match table.get(key) {
                None => Ok(None),
                Some(v) => v
                    .as_float()
                    .or_else(|| v.as_integer().map(|i| i as f64))
                    .map(Some)
                    .ok_or_else(|| Error::ProfileBlock(format!("`{key}` must be a number"))),
            }
        };
        let array = |key: &str| -> Result<Option<Vec<f64>>> {
            match table.get(key) {
                None => Ok(None),
                Some(v) => {
                    let arr = v
                        .as_array()
                        .ok_or_else(|| Error::ProfileBlock(format!("`{key}` must be an array")))?;
                    arr.iter()
                        .map(|x| {
                            x.as_float()
                                .or_else(|| x.as_integer().map(|i| i as f64))
                                .ok_or_else(|| Error::ProfileBlock(format!("non-numeric entry in `{key}`")))
                        })
                        .collect::<Result<Vec<_>>>()
                        .map(Some)
                }
            }
        };
        let kind_text = string("kind")?;
        let kind = ProfileKind::parse(&kind_text)
            .ok_or_else(|| Error::ProfileBlock(format!("unknown kind `{kind_text}`")))?;
        let n = table
            .get("n")
            .and_then(|v| v.as_integer())
            .filter(|&n| n >= 0)
            .ok_or_else(|| Error::ProfileBlock("missing integer `n`".into()))? as usize;
        let nodes = match (array("r")?, array("lambda")?, array("dlambda")?) {
            (Some(r), Some(l), Some(d)) => Some((r, l, d)),
            (None, None, None) => None,
            _ => return Err(Error::ProfileBlock("node arrays r, lambda, dlambda go together".into())),
        };
        Ok(Self {
            family: string("family")?,
            kind,
            n,
            b: real("B")?.unwrap_or(1.0),
            r_max: real("r_max")?.ok_or_else(|| Error::ProfileBlock("missing `r_max`".into()))?,
            m: real("m")?,
            kappa: real("kappa")?,
            scale: real("scale")?,
            nodes,
        })
    }

    /// Reconstructs the profile this block describes.
    pub fn build(&self) -> Result<SharedProfile> {
        match self.family.as_str() {
            "euclidean" => Ok(Arc::new(EuclideanProfile::new(self.n, self.r_max)?)),
            "cosh" => Ok(Arc::new(CoshProfile::new(
                self.n,
                self.b,
                self.scale.unwrap_or_else(|| self.b.sqrt()),
                self.r_max,
            )?)),
            "schwarzschild" | "desitter-schwarzschild" => {
                let m = self
                    .m
                    .ok_or_else(|| Error::ProfileBlock("integrated profile needs `m`".into()))?;
                let kappa = self.kappa.unwrap_or(0.0);
                let profile = match &self.nodes {
                    Some((r, l, d)) => HorizonProfile::from_nodes(self.n, m, kappa, r, l, d)?,
                    None => HorizonProfile::integrate(self.n, m, kappa, self.r_max)?,
                };
                Ok(Arc::new(profile))
            }
            other => Err(Error::UnknownProfile(other.to_string())),
        }
    }
}
