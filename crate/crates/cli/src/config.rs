//! TOML run configuration.
//!
//! ```toml
//! seed = 7
//! tol = 1e-8
//! out = "results"
//!
//! [profile]
//! kind = "schwarzschild"
//! n = 3
//! m = 1.0
//! r_max = 20.0
//!
//! [grid]
//! mode = "axisym"
//! N = 256
//!
//! [surface]
//! kind = "perturbed"
//! r0 = 3.6
//! amplitude = 0.1
//! modes = 3
//!
//! [ineq]
//! p = [1, 2]
//!
//! [rigidity]
//! p = [1, 2]
//! r0 = 5.0
//! amplitudes = [0.05, 0.1]
//! draws = 2
//! ```
//!
//! Unknown keys are rejected. Command-line flags override file keys.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use warpgeom::fiber::{FiberGrid, GridMode};
use warpgeom::profile::{ProfileParams, ProfileRegistry, SharedProfile};
use warpgeom::surface::{Perturbation, SurfaceSpec};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub grid: GridConfig,
    pub surface: Option<SurfaceConfig>,
    #[serde(default)]
    pub ineq: IneqConfig,
    pub rigidity: Option<RigidityConfig>,
    /// Directory of the config file; relative surface paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub kind: String,
    pub n: usize,
    #[serde(rename = "B")]
    pub b: f64,
    pub m: f64,
    pub kappa: f64,
    pub r_max: f64,
    pub scale: Option<f64>,
    /// Sample count for the condition checker.
    pub samples: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        let p = ProfileParams::default();
        Self {
            kind: "schwarzschild".into(),
            n: p.n,
            b: p.b,
            m: p.m,
            kappa: p.kappa,
            r_max: p.r_max,
            scale: p.scale,
            samples: 1024,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub mode: String,
    #[serde(rename = "N")]
    pub n_theta: usize,
    /// Longitude count for full-s2 grids; defaults to `2N`.
    pub n_psi: Option<usize>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            mode: "axisym".into(),
            n_theta: 128,
            n_psi: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Slice {
        r0: f64,
    },
    /// Explicit `coeffs`, or `amplitude` and `modes` drawn from the seed.
    Perturbed {
        r0: f64,
        amplitude: Option<f64>,
        modes: Option<usize>,
        seed: Option<u64>,
        coeffs: Option<Vec<f64>>,
    },
    Ellipsoid {
        equatorial: f64,
        polar: f64,
    },
    OffCentreSphere {
        radius: f64,
        offset: [f64; 3],
    },
    /// CSV with an `r` column listing the nodal radii in grid order.
    Csv {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IneqConfig {
    /// Orders to check; empty means every admissible `p`.
    #[serde(default)]
    pub p: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RigidityConfig {
    pub p: Vec<usize>,
    pub r0: f64,
    pub amplitudes: Vec<f64>,
    #[serde(default = "one")]
    pub draws: usize,
    #[serde(default = "three")]
    pub modes: usize,
    pub max_iter: Option<usize>,
    pub solver_tol: Option<f64>,
}

fn one() -> usize {
    1
}

fn three() -> usize {
    3
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub grid: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }

    /// Reads `path`, or returns the defaults when no file is given.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        if o.tol.is_some() {
            self.tol = o.tol;
        }
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if let Some(n) = o.n {
            self.profile.n = n;
        }
        if let Some(g) = o.grid {
            self.grid.n_theta = g;
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn build_profile(&self) -> CliResult<SharedProfile> {
        let p = &self.profile;
        let params = ProfileParams {
            n: p.n,
            b: p.b,
            m: p.m,
            kappa: p.kappa,
            r_max: p.r_max,
            scale: p.scale,
        };
        ProfileRegistry::with_builtins()
            .build(&p.kind, &params)
            .map_err(CliError::config)
    }

    pub fn build_grid(&self) -> CliResult<Arc<FiberGrid>> {
        let g = &self.grid;
        let grid = match GridMode::parse(&g.mode) {
            Some(GridMode::Axisym) => FiberGrid::axisym(self.profile.n, g.n_theta),
            Some(GridMode::FullS2) => FiberGrid::full_s2(g.n_theta, g.n_psi.unwrap_or(2 * g.n_theta)),
            None => return Err(CliError::Config(format!("unknown grid mode `{}`", g.mode))),
        };
        grid.map(Arc::new).map_err(CliError::config)
    }

    pub fn surface_spec(&self, grid: &FiberGrid) -> CliResult<SurfaceSpec> {
        let surface = self
            .surface
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [surface] table".into()))?;
        Ok(match surface {
            SurfaceConfig::Slice { r0 } => SurfaceSpec::Slice { r0: *r0 },
            SurfaceConfig::Perturbed {
                r0,
                amplitude,
                modes,
                seed,
                coeffs,
            } => match (coeffs, amplitude) {
                (Some(c), None) => SurfaceSpec::Perturbed(Perturbation {
                    r0: *r0,
                    coeffs: c.clone(),
                }),
                (None, Some(a)) => SurfaceSpec::Perturbed(Perturbation::random(
                    *r0,
                    *a,
                    modes.unwrap_or(3),
                    seed.unwrap_or(self.seed()),
                )),
                _ => {
                    return Err(CliError::Config(
                        "perturbed surface needs exactly one of `coeffs` and `amplitude`".into(),
                    ))
                }
            },
            SurfaceConfig::Ellipsoid { equatorial, polar } => SurfaceSpec::Ellipsoid {
                equatorial: *equatorial,
                polar: *polar,
            },
            SurfaceConfig::OffCentreSphere { radius, offset } => SurfaceSpec::OffCentreSphere {
                radius: *radius,
                offset: *offset,
            },
            SurfaceConfig::Csv { path } => SurfaceSpec::Nodes(read_radii(&self.base_dir.join(path), grid.len())?),
        })
    }
}

fn read_radii(path: &Path, expected: usize) -> CliResult<Vec<f64>> {
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let column = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .position(|h| h.trim() == "r")
        .ok_or_else(|| bad("no `r` column".into()))?;
    let mut radii = Vec::with_capacity(expected);
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let cell = record.get(column).unwrap_or("").trim();
        radii.push(cell.parse::<f64>().map_err(|_| bad(format!("bad radius `{cell}`")))?);
    }
    if radii.len() != expected {
        return Err(bad(format!("{} radii for a grid of {expected} nodes", radii.len())));
    }
    Ok(radii)
}
