//! Warping functions `λ` of the metric `dr² + λ(r)² g_N` and the structural
//! conditions they are required to satisfy.
//!
//! Every profile family implements [`WarpingProfile`]; families are selected
//! by name through [`ProfileRegistry`].

mod block;
mod closed;
mod conditions;
mod horizon;
mod registry;

pub use block::ProfileBlock;
pub use closed::{CoshProfile, EuclideanProfile};
pub use conditions::{
    check_conditions, curvature_quantity, monotone_quantity, ConditionResult, ProfileReport, Verdict,
    DEFAULT_CONDITION_TOL, H1_TOL,
};
pub use horizon::{make_ds_schwarzschild, DomainEnd, HorizonProfile, Potential};
pub use registry::{ProfileBuilder, ProfileParams, ProfileRegistry};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Value and first two derivatives of `λ` at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Warp {
    pub lambda: f64,
    pub dlambda: f64,
    pub d2lambda: f64,
}

impl Warp {
    /// `λ'/λ`, the principal curvature of the slice through this radius.
    pub fn slice_curvature(&self) -> f64 {
        self.dlambda / self.lambda
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    ClosedForm,
    OdeIntegrated,
    /// Profiles used only as geometric sanity checks (e.g. `λ = r`); the
    /// horizon condition is not checked for them.
    GeometryOnly,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::ClosedForm => "closed-form",
            ProfileKind::OdeIntegrated => "ode-integrated",
            ProfileKind::GeometryOnly => "geometry-only",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "closed-form" => Some(ProfileKind::ClosedForm),
            "ode-integrated" => Some(ProfileKind::OdeIntegrated),
            "geometry-only" => Some(ProfileKind::GeometryOnly),
            _ => None,
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A warping function on `[0, r̄)` together with the ambient dimension `n`
/// and the Einstein constant `B` of the fiber (`B = 1` for the round sphere).
pub trait WarpingProfile: fmt::Debug + Send + Sync {
    /// Registry name of the family this profile belongs to.
    fn family(&self) -> &'static str;

    fn kind(&self) -> ProfileKind;

    /// Ambient dimension `n ≥ 3`.
    fn dim(&self) -> usize;

    fn einstein_constant(&self) -> f64 {
        1.0
    }

    /// Right end `r̄` of the domain.
    fn r_max(&self) -> f64;

    /// Raw evaluation; callers normally go through [`WarpingProfile::eval`].
    fn eval_raw(&self, r: f64) -> Warp;

    /// Primitive `Φ` of `1/λ`, normalised by `Φ(r̄/2) = 0`.
    fn inverse_primitive(&self, r: f64) -> f64;

    /// Serializable description of this profile.
    fn to_block(&self) -> ProfileBlock;

    /// Evaluates `(λ, λ', λ'')`, rejecting radii outside `[0, r̄]` and
    /// non-positive or non-finite values.
    fn eval(&self, r: f64) -> Result<Warp> {
        if !(r.is_finite() && r >= 0.0 && r <= self.r_max()) {
            return Err(Error::ProfileDomain {
                r,
                reason: format!("outside [0, {}]", self.r_max()),
            });
        }
        let w = self.eval_raw(r);
        if !(w.lambda.is_finite() && w.dlambda.is_finite() && w.d2lambda.is_finite()) {
            return Err(Error::ProfileDomain {
                r,
                reason: "non-finite value".into(),
            });
        }
        if w.lambda <= 0.0 {
            return Err(Error::ProfileDomain {
                r,
                reason: format!("lambda = {} is not positive", w.lambda),
            });
        }
        Ok(w)
    }

    /// `Φ(r)` with the same domain checks as [`WarpingProfile::eval`].
    fn phi(&self, r: f64) -> Result<f64> {
        self.eval(r)?;
        Ok(self.inverse_primitive(r))
    }
}

pub type SharedProfile = Arc<dyn WarpingProfile>;

/// Midpoint of the domain, where `Φ` vanishes.
pub(crate) fn reference_radius(r_max: f64) -> f64 {
    0.5 * r_max
}

/// `R(r) = (n−2)(λ''/λ + (B − λ'²)/λ²)`.
///
/// The mixed Ricci term of a hypersurface is `Ric(e_j, ν) = −R(r)·(ξ_j/λ)·⟨∂_r, ν⟩`.
pub fn ricci_radial_coefficient(profile: &dyn WarpingProfile, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < profile.r_max()) {
        return Err(Error::ProfileDomain {
            r,
            reason: format!("outside (0, {})", profile.r_max()),
        });
    }
    let w = profile.eval(r)?;
    Ok(ricci_coefficient_from(profile.dim(), profile.einstein_constant(), &w))
}

pub(crate) fn ricci_coefficient_from(n: usize, b: f64, w: &Warp) -> f64 {
    (n as f64 - 2.0) * (w.d2lambda / w.lambda + (b - w.dlambda * w.dlambda) / (w.lambda * w.lambda))
}

/// Radius at which `λ(r) = target`, by bisection; requires `λ` increasing.
pub fn radius_for_lambda(profile: &dyn WarpingProfile, target: f64) -> Result<f64> {
    let r_max = profile.r_max();
    let lam = |r: f64| profile.eval_raw(r).lambda;
    let (mut lo, mut hi) = (0.0, r_max);
    if !(lam(lo) <= target && lam(hi) >= target) {
        return Err(Error::ProfileDomain {
            r: f64::NAN,
            reason: format!("lambda = {target} not attained on [0, {r_max}]"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lam(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ricci_coefficient_schwarzschild_at_lambda_four() {
        let p = make_ds_schwarzschild(3, 2.0, 0.0, 20.0).unwrap();
        let r = radius_for_lambda(&p, 4.0).unwrap();
        let got = ricci_radial_coefficient(&p, r).unwrap();
        assert!((got - 3.0 / 64.0).abs() < 1e-12, "{got}");
    }

    #[test]
    fn ricci_coefficient_flat_is_zero() {
        let p = EuclideanProfile::new(3, 10.0).unwrap();
        for r in [0.1, 1.0, 5.5, 9.9] {
            assert_eq!(ricci_radial_coefficient(&p, r).unwrap(), 0.0);
        }
    }

    #[test]
    fn ricci_coefficient_cosh() {
        let p = CoshProfile::new(3, 1.0, 1.0, 2.0).unwrap();
        for r in [0.1f64, 0.7, 1.9] {
            let expected = 2.0 / r.cosh().powi(2);
            let got = ricci_radial_coefficient(&p, r).unwrap();
            assert!((got - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn ricci_coefficient_rejects_out_of_domain() {
        let p = EuclideanProfile::new(3, 10.0).unwrap();
        assert!(ricci_radial_coefficient(&p, 0.0).is_err());
        assert!(ricci_radial_coefficient(&p, 10.5).is_err());
    }

    #[test]
    fn eval_rejects_nonpositive_lambda() {
        let p = EuclideanProfile::new(3, 10.0).unwrap();
        assert!(matches!(p.eval(0.0), Err(Error::ProfileDomain { .. })));
        assert!(p.eval(-1.0).is_err());
    }
}
