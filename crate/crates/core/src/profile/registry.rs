use std::collections::BTreeMap;
use std::sync::Arc;

use super::{make_ds_schwarzschild, CoshProfile, EuclideanProfile, SharedProfile};
use crate::error::{Error, Result};

/// Parameters a profile family may read. Families ignore what they do not use.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileParams {
    pub n: usize,
    pub b: f64,
    pub m: f64,
    pub kappa: f64,
    pub r_max: f64,
    pub scale: Option<f64>,
}

impl Default for ProfileParams {
    fn default() -> Self {
        Self {
            n: 3,
            b: 1.0,
            m: 1.0,
            kappa: 0.0,
            r_max: 20.0,
            scale: None,
        }
    }
}

/// Constructs one family of warping profiles from [`ProfileParams`].
pub trait ProfileBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, params: &ProfileParams) -> Result<SharedProfile>;
}

struct Euclidean;
struct Cosh;
struct Schwarzschild;
struct DeSitterSchwarzschild;

impl ProfileBuilder for Euclidean {
    fn name(&self) -> &'static str {
        "euclidean"
    }
    fn summary(&self) -> &'static str {
        "lambda(r) = r, flat space (geometry-only)"
    }
    fn build(&self, p: &ProfileParams) -> Result<SharedProfile> {
        Ok(Arc::new(EuclideanProfile::new(p.n, p.r_max)?))
    }
}

impl ProfileBuilder for Cosh {
    fn name(&self) -> &'static str {
        "cosh"
    }
    fn summary(&self) -> &'static str {
        "lambda(r) = a cosh r over an Einstein fiber with constant B (a defaults to sqrt B)"
    }
    fn build(&self, p: &ProfileParams) -> Result<SharedProfile> {
        if p.b <= 0.0 && p.scale.is_none() {
            return Err(Error::InvalidProfile("cosh profile with B <= 0 needs an explicit scale".into()));
        }
        let scale = p.scale.unwrap_or_else(|| p.b.sqrt());
        Ok(Arc::new(CoshProfile::new(p.n, p.b, scale, p.r_max)?))
    }
}

impl ProfileBuilder for Schwarzschild {
    fn name(&self) -> &'static str {
        "schwarzschild"
    }
    fn summary(&self) -> &'static str {
        "lambda'^2 = 1 - m lambda^(2-n), integrated from the horizon"
    }
    fn build(&self, p: &ProfileParams) -> Result<SharedProfile> {
        Ok(Arc::new(make_ds_schwarzschild(p.n, p.m, 0.0, p.r_max)?))
    }
}

impl ProfileBuilder for DeSitterSchwarzschild {
    fn name(&self) -> &'static str {
        "desitter-schwarzschild"
    }
    fn summary(&self) -> &'static str {
        "lambda'^2 = 1 - m lambda^(2-n) - kappa lambda^2, integrated from the horizon"
    }
    fn build(&self, p: &ProfileParams) -> Result<SharedProfile> {
        Ok(Arc::new(make_ds_schwarzschild(p.n, p.m, p.kappa, p.r_max)?))
    }
}

/// Profile families addressable by name.
pub struct ProfileRegistry {
    builders: BTreeMap<&'static str, Box<dyn ProfileBuilder>>,
}

impl ProfileRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(Euclidean));
        reg.register(Box::new(Cosh));
        reg.register(Box::new(Schwarzschild));
        reg.register(Box::new(DeSitterSchwarzschild));
        reg
    }

    pub fn register(&mut self, builder: Box<dyn ProfileBuilder>) {
        self.builders.insert(builder.name(), builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.keys().copied()
    }

    pub fn get(&self, name: &str) -> Option<&dyn ProfileBuilder> {
        self.builders.get(name).map(|b| b.as_ref())
    }

    pub fn build(&self, name: &str, params: &ProfileParams) -> Result<SharedProfile> {
        self.get(name)
            .ok_or_else(|| Error::UnknownProfile(name.to_string()))?
            .build(params)
    }
}

impl Default for ProfileRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_registered() {
        let reg = ProfileRegistry::with_builtins();
        let names: Vec<_> = reg.names().collect();
        assert_eq!(names, ["cosh", "desitter-schwarzschild", "euclidean", "schwarzschild"]);
    }

    #[test]
    fn builds_by_name() {
        let reg = ProfileRegistry::default();
        let params = ProfileParams {
            kappa: 0.05,
            ..ProfileParams::default()
        };
        let p = reg.build("desitter-schwarzschild", &params).unwrap();
        assert_eq!(p.family(), "desitter-schwarzschild");
        let p = reg.build("schwarzschild", &params).unwrap();
        assert_eq!(p.family(), "schwarzschild");
        assert!(matches!(reg.build("kerr", &params), Err(Error::UnknownProfile(_))));
    }
}
