//! Checks of the four structural conditions on `λ`:
//!
//! - H1: `λ'(0) = 0`, `λ''(0) > 0`
//! - H2: `λ' > 0` on `(0, r̄)`
//! - H3: `Q(r) = 2λ''/λ − (n−2)(B − λ'²)/λ²` non-decreasing
//! - H4: `λ''/λ + (B − λ'²)/λ² > 0`
//!
//! With `B ≠ 1` these are the Einstein-fiber variants of the same conditions.

use std::fmt;

use super::{ProfileKind, Warp, WarpingProfile};
use crate::error::{Error, Result};

/// Tolerance on `|λ'(0)|` for the horizon condition.
pub const H1_TOL: f64 = 1e-8;

/// Default `tol` for [`check_conditions`].
pub const DEFAULT_CONDITION_TOL: f64 = 1e-10;

const H1_EXTRAPOLATION_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        })
    }
}

/// Outcome of one condition.
///
/// `margin` is the worst value of the quantity whose sign decides the
/// condition: `min λ''(0), tol − |λ'(0)|` for H1, `min λ'` for H2, the most
/// negative consecutive increment of `Q` for H3 and `min` of the H4
/// expression. `at` is where that worst value occurs; `witness` is set
/// whenever the verdict is a failure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionResult {
    pub verdict: Verdict,
    pub margin: f64,
    pub at: f64,
    pub witness: Option<f64>,
}

impl ConditionResult {
    fn skipped() -> Self {
        Self {
            verdict: Verdict::Skipped,
            margin: f64::NAN,
            at: f64::NAN,
            witness: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileReport {
    pub family: String,
    pub n: usize,
    pub b: f64,
    /// True when `B ≠ 1`, i.e. the Einstein-fiber variants were checked.
    pub primed: bool,
    pub h1: ConditionResult,
    pub h2: ConditionResult,
    pub h3: ConditionResult,
    pub h4: ConditionResult,
    pub samples: usize,
    pub r_max: f64,
    /// Extrapolated `λ'(0)` and `λ''(0)` (NaN when H1 is skipped).
    pub h1_values: (f64, f64),
    pub domain_note: String,
}

impl ProfileReport {
    pub fn conditions(&self) -> [(&'static str, &ConditionResult); 4] {
        [("H1", &self.h1), ("H2", &self.h2), ("H3", &self.h3), ("H4", &self.h4)]
    }

    /// True when every non-skipped condition passes.
    pub fn all_pass(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.verdict != Verdict::Fail)
    }
}

impl fmt::Display for ProfileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.primed { "'" } else { "" };
        writeln!(
            f,
            "profile {} (n = {}, B = {}), r_max = {} [{}], {} samples",
            self.family, self.n, self.b, self.r_max, self.domain_note, self.samples
        )?;
        for (name, c) in self.conditions() {
            write!(f, "  {name}{prime}: {:<7} margin {:+.6e}", c.verdict.to_string(), c.margin)?;
            if c.at.is_finite() {
                write!(f, " at r = {:.6}", c.at)?;
            }
            if let Some(w) = c.witness {
                write!(f, " (violated at r = {w:.6})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `Q(r) = 2λ''/λ − (n−2)(B − λ'²)/λ²`.
pub fn monotone_quantity(n: usize, b: f64, w: &Warp) -> f64 {
    2.0 * w.d2lambda / w.lambda - (n as f64 - 2.0) * (b - w.dlambda * w.dlambda) / (w.lambda * w.lambda)
}

/// `λ''/λ + (B − λ'²)/λ²`.
pub fn curvature_quantity(b: f64, w: &Warp) -> f64 {
    w.d2lambda / w.lambda + (b - w.dlambda * w.dlambda) / (w.lambda * w.lambda)
}

/// Checks H1–H4 on `samples` uniformly spaced radii in `[ε, r̄ − ε]`.
///
/// H3 allows a consecutive decrease of `Q` up to `tol·(1 + |Q|)`; H4 requires
/// the expression to exceed `tol`.
pub fn check_conditions(profile: &dyn WarpingProfile, samples: usize, tol: f64) -> Result<ProfileReport> {
    if samples < 16 {
        return Err(Error::InvalidProfile(format!("need at least 16 samples, got {samples}")));
    }
    let n = profile.dim();
    let b = profile.einstein_constant();
    let r_max = profile.r_max();
    let eps = 1e-4 * r_max;
    let radii: Vec<f64> = (0..samples)
        .map(|i| eps + (r_max - 2.0 * eps) * i as f64 / (samples - 1) as f64)
        .collect();
    let warps = radii
        .iter()
        .map(|&r| profile.eval(r))
        .collect::<Result<Vec<_>>>()?;

    let (h1, h1_values) = if profile.kind() == ProfileKind::GeometryOnly {
        (ConditionResult::skipped(), (f64::NAN, f64::NAN))
    } else {
        check_h1(profile)?
    };

    let h2 = worst_of(&radii, warps.iter().map(|w| w.dlambda), |m| m > 0.0);
    let h4 = worst_of(&radii, warps.iter().map(|w| curvature_quantity(b, w)), |m| m > tol);

    let q: Vec<f64> = warps.iter().map(|w| monotone_quantity(n, b, w)).collect();
    let mut h3 = ConditionResult {
        verdict: Verdict::Pass,
        margin: f64::INFINITY,
        at: f64::NAN,
        witness: None,
    };
    let mut worst_violation = f64::INFINITY;
    for i in 0..samples - 1 {
        let inc = q[i + 1] - q[i];
        if inc < h3.margin {
            h3.margin = inc;
            h3.at = radii[i + 1];
        }
        let slack = tol * (1.0 + q[i].abs());
        if inc < -slack {
            h3.verdict = Verdict::Fail;
            if inc < worst_violation {
                worst_violation = inc;
                h3.witness = Some(radii[i + 1]);
            }
        }
    }

    let domain_note = match profile.kind() {
        ProfileKind::OdeIntegrated => {
            "integration stops where f(lambda) < 1e-12 or at r_max_hint".to_string()
        }
        _ => "closed form".to_string(),
    };
    Ok(ProfileReport {
        family: profile.family().to_string(),
        n,
        b,
        primed: b != 1.0,
        h1,
        h2,
        h3,
        h4,
        samples,
        r_max,
        h1_values,
        domain_note,
    })
}

fn worst_of<I: Iterator<Item = f64>>(radii: &[f64], values: I, ok: impl Fn(f64) -> bool) -> ConditionResult {
    let mut out = ConditionResult {
        verdict: Verdict::Pass,
        margin: f64::INFINITY,
        at: f64::NAN,
        witness: None,
    };
    for (&r, v) in radii.iter().zip(values) {
        if v < out.margin {
            out.margin = v;
            out.at = r;
        }
    }
    if !ok(out.margin) {
        out.verdict = Verdict::Fail;
        out.witness = Some(out.at);
    }
    out
}

/// One-sided quadratic extrapolation of `λ'` and `λ''` to `r = 0`.
fn check_h1(profile: &dyn WarpingProfile) -> Result<(ConditionResult, (f64, f64))> {
    let h = H1_EXTRAPOLATION_STEP.min(profile.r_max() / 100.0);
    let w1 = profile.eval(h)?;
    let w2 = profile.eval(2.0 * h)?;
    let w3 = profile.eval(3.0 * h)?;
    let d1 = 3.0 * w1.dlambda - 3.0 * w2.dlambda + w3.dlambda;
    let d2 = 3.0 * w1.d2lambda - 3.0 * w2.d2lambda + w3.d2lambda;
    let margin = (H1_TOL - d1.abs()).min(d2);
    let pass = d1.abs() <= H1_TOL && d2 > H1_TOL;
    Ok((
        ConditionResult {
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            margin,
            at: 0.0,
            witness: if pass { None } else { Some(0.0) },
        },
        (d1, d2),
    ))
}
