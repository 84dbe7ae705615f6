use super::{reference_radius, ProfileBlock, ProfileKind, Warp, WarpingProfile};
use crate::error::{Error, Result};

/// `λ(r) = r`: flat space in polar coordinates.
#[derive(Clone, Debug)]
pub struct EuclideanProfile {
    n: usize,
    r_max: f64,
}

impl EuclideanProfile {
    pub fn new(n: usize, r_max: f64) -> Result<Self> {
        check_dim(n)?;
        check_r_max(r_max)?;
        Ok(Self { n, r_max })
    }
}

impl WarpingProfile for EuclideanProfile {
    fn family(&self) -> &'static str {
        "euclidean"
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::GeometryOnly
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn r_max(&self) -> f64 {
        self.r_max
    }

    fn eval_raw(&self, r: f64) -> Warp {
        Warp {
            lambda: r,
            dlambda: 1.0,
            d2lambda: 0.0,
        }
    }

    fn inverse_primitive(&self, r: f64) -> f64 {
        (r / reference_radius(self.r_max)).ln()
    }

    fn to_block(&self) -> ProfileBlock {
        ProfileBlock {
            family: self.family().into(),
            kind: self.kind(),
            n: self.n,
            b: 1.0,
            r_max: self.r_max,
            ..ProfileBlock::default()
        }
    }
}

/// `λ(r) = a·cosh r` over a fiber with Einstein constant `B`.
///
/// With `a = √B` this is the hyperbolic-type model used for the Einstein-fiber
/// conditions; `a = 1, B = 1` is the round-fiber case.
#[derive(Clone, Debug)]
pub struct CoshProfile {
    n: usize,
    b: f64,
    scale: f64,
    r_max: f64,
}

impl CoshProfile {
    pub fn new(n: usize, b: f64, scale: f64, r_max: f64) -> Result<Self> {
        check_dim(n)?;
        check_r_max(r_max)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidProfile(format!("scale must be positive, got {scale}")));
        }
        if !b.is_finite() {
            return Err(Error::InvalidProfile("B must be finite".into()));
        }
        Ok(Self { n, b, scale, r_max })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

fn gudermannian(r: f64) -> f64 {
    2.0 * (0.5 * r).tanh().atan()
}

impl WarpingProfile for CoshProfile {
    fn family(&self) -> &'static str {
        "cosh"
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::ClosedForm
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn einstein_constant(&self) -> f64 {
        self.b
    }

    fn r_max(&self) -> f64 {
        self.r_max
    }

    fn eval_raw(&self, r: f64) -> Warp {
        let c = self.scale * r.cosh();
        Warp {
            lambda: c,
            dlambda: self.scale * r.sinh(),
            d2lambda: c,
        }
    }

    fn inverse_primitive(&self, r: f64) -> f64 {
        (gudermannian(r) - gudermannian(reference_radius(self.r_max))) / self.scale
    }

    fn to_block(&self) -> ProfileBlock {
        ProfileBlock {
            family: self.family().into(),
            kind: self.kind(),
            n: self.n,
            b: self.b,
            r_max: self.r_max,
            scale: Some(self.scale),
            ..ProfileBlock::default()
        }
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidProfile(format!("dimension n must be >= 3, got {n}")));
    }
    Ok(())
}

pub(crate) fn check_r_max(r_max: f64) -> Result<()> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidProfile(format!("r_max must be positive, got {r_max}")));
    }
    Ok(())
}
