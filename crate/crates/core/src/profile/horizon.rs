//! deSitter–Schwarzschild type profiles, integrated from the horizon.
//!
//! The potential `f(s) = 1 − m·s^{2−n} − κ·s²` is the standard one from the
//! literature on these manifolds; `λ` solves `λ'² = f(λ)` with `λ(0)` at the
//! horizon root `s₀`. Integration runs on the regular second-order form
//! `λ'' = f'(λ)/2`, `λ(0) = s₀`, `λ'(0) = 0`, which avoids the square-root
//! degeneracy at the horizon. Between nodes `λ` is cubic Hermite in
//! `(λ, λ')`; `λ'` and `λ''` are then recovered from the first integral so
//! that `λ'² = f(λ)` holds at every evaluation point.

use super::closed::{check_dim, check_r_max};
use super::{reference_radius, ProfileBlock, ProfileKind, Warp, WarpingProfile};
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre5, hermite};

/// Integration stops once `f(λ)` drops below this value.
pub const FIRST_INTEGRAL_FLOOR: f64 = 1e-12;

const TARGET_STEP: f64 = 1e-3;

/// `f(s) = 1 − m·s^{2−n} − κ·s²` together with its horizon root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Potential {
    pub n: usize,
    pub m: f64,
    pub kappa: f64,
    horizon: f64,
}

impl Potential {
    pub fn new(n: usize, m: f64, kappa: f64) -> Result<Self> {
        check_dim(n)?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::NoHorizon(format!("mass m must be positive, got {m}")));
        }
        if !kappa.is_finite() {
            return Err(Error::InvalidProfile("kappa must be finite".into()));
        }
        let horizon = find_horizon(n, m, kappa)?;
        Ok(Self {
            n,
            m,
            kappa,
            horizon,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn value(&self, s: f64) -> f64 {
        raw_value(self.n, self.m, self.kappa, s)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        raw_derivative(self.n, self.m, self.kappa, s)
    }

    /// `f(s₀ + δ)` written without cancellation, so that it vanishes exactly
    /// at `δ = 0` and keeps relative accuracy near the horizon.
    pub fn value_from_horizon(&self, delta: f64) -> f64 {
        let s0 = self.horizon;
        let k = self.n as f64 - 2.0;
        let mass_term = self.m * s0.powf(-k) * -(-k * (delta / s0).ln_1p()).exp_m1();
        mass_term - self.kappa * delta * (2.0 * s0 + delta)
    }
}

fn raw_value(n: usize, m: f64, kappa: f64, s: f64) -> f64 {
    1.0 - m * s.powi(2 - n as i32) - kappa * s * s
}

fn raw_derivative(n: usize, m: f64, kappa: f64, s: f64) -> f64 {
    (n as f64 - 2.0) * m * s.powi(1 - n as i32) - 2.0 * kappa * s
}

fn find_horizon(n: usize, m: f64, kappa: f64) -> Result<f64> {
    let k = n as f64 - 2.0;
    if kappa == 0.0 {
        return Ok(m.powf(1.0 / k));
    }
    let f = |s: f64| raw_value(n, m, kappa, s);
    let upper = if kappa > 0.0 {
        // f' vanishes at s*; f must be positive there for a horizon to exist.
        let s_star = (k * m / (2.0 * kappa)).powf(1.0 / n as f64);
        if f(s_star) <= 0.0 {
            return Err(Error::KappaTooLarge { kappa });
        }
        s_star
    } else {
        let mut s = m.powf(1.0 / k).max(1.0);
        while f(s) <= 0.0 {
            s *= 2.0;
            if !s.is_finite() {
                return Err(Error::NoHorizon("potential never becomes positive".into()));
            }
        }
        s
    };
    let (mut lo, mut hi) = (upper, upper);
    while f(lo) >= 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NoHorizon("potential positive down to s = 0".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    let mut root = 0.5 * (lo + hi);
    // One Newton polish step on the bracketed root.
    let d = raw_derivative(n, m, kappa, root);
    if d > 0.0 {
        let polished = root - f(root) / d;
        if polished > lo && polished < hi {
            root = polished;
        }
    }
    if raw_derivative(n, m, kappa, root) <= 0.0 {
        return Err(Error::NoHorizon(format!("f'(s0) <= 0 at s0 = {root}")));
    }
    Ok(root)
}

/// Why the domain of an integrated profile ends where it does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainEnd {
    /// Integration reached the requested `r_max_hint`.
    Hint,
    /// `f(λ)` fell below [`FIRST_INTEGRAL_FLOOR`] (cosmological horizon).
    FirstIntegralVanishes,
}

impl DomainEnd {
    pub fn describe(&self) -> &'static str {
        match self {
            DomainEnd::Hint => "r_max_hint reached",
            DomainEnd::FirstIntegralVanishes => "f(lambda) < 1e-12 (cosmological horizon)",
        }
    }
}

/// Profile obtained by integrating `λ'' = f'(λ)/2` from the horizon.
#[derive(Clone, Debug)]
pub struct HorizonProfile {
    potential: Potential,
    step: f64,
    /// `λ − s₀` at the nodes `r_i = i·step`.
    delta: Vec<f64>,
    /// `λ'` at the nodes.
    slope: Vec<f64>,
    /// `Φ` at the nodes, before normalisation.
    phi_nodes: Vec<f64>,
    phi_offset: f64,
    r_max: f64,
    end: DomainEnd,
}

/// Integrates the deSitter–Schwarzschild profile with mass `m` and
/// cosmological constant `kappa` (`kappa = 0` gives Schwarzschild).
pub fn make_ds_schwarzschild(n: usize, m: f64, kappa: f64, r_max_hint: f64) -> Result<HorizonProfile> {
    HorizonProfile::integrate(n, m, kappa, r_max_hint)
}

impl HorizonProfile {
    pub fn integrate(n: usize, m: f64, kappa: f64, r_max_hint: f64) -> Result<Self> {
        check_r_max(r_max_hint)?;
        let potential = Potential::new(n, m, kappa)?;
        let s0 = potential.horizon();
        let steps = (r_max_hint / TARGET_STEP).ceil().max(16.0) as usize;
        let h = r_max_hint / steps as f64;

        let accel = |d: f64| 0.5 * potential.derivative(s0 + d);
        let mut delta = vec![0.0];
        let mut slope = vec![0.0];
        let mut end = DomainEnd::Hint;
        for _ in 0..steps {
            let (d, mu) = (*delta.last().unwrap(), *slope.last().unwrap());
            let (k1d, k1m) = (mu, accel(d));
            let (k2d, k2m) = (mu + 0.5 * h * k1m, accel(d + 0.5 * h * k1d));
            let (k3d, k3m) = (mu + 0.5 * h * k2m, accel(d + 0.5 * h * k2d));
            let (k4d, k4m) = (mu + h * k3m, accel(d + h * k3d));
            let nd = d + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            let nm = mu + h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
            if nm <= 0.0 || potential.value_from_horizon(nd) < FIRST_INTEGRAL_FLOOR {
                end = DomainEnd::FirstIntegralVanishes;
                break;
            }
            delta.push(nd);
            slope.push(nm);
        }
        if delta.len() < 16 {
            return Err(Error::InvalidProfile(
                "domain with f > 0 is too short to resolve".into(),
            ));
        }
        Self::from_parts(potential, h, delta, slope, end)
    }

    fn from_parts(
        potential: Potential,
        step: f64,
        delta: Vec<f64>,
        slope: Vec<f64>,
        end: DomainEnd,
    ) -> Result<Self> {
        let r_max = step * (delta.len() - 1) as f64;
        let mut profile = Self {
            potential,
            step,
            delta,
            slope,
            phi_nodes: Vec::new(),
            phi_offset: 0.0,
            r_max,
            end,
        };
        let mut phi = Vec::with_capacity(profile.delta.len());
        phi.push(0.0);
        for i in 1..profile.delta.len() {
            let (a, b) = ((i - 1) as f64 * step, i as f64 * step);
            let cell = gauss_legendre5(a, b, |r| 1.0 / profile.lambda_at(r));
            phi.push(phi[i - 1] + cell);
        }
        profile.phi_nodes = phi;
        profile.phi_offset = profile.phi_unnormalised(reference_radius(r_max));
        Ok(profile)
    }

    /// Rebuilds a profile from serialized nodes `(r_i, λ_i, λ'_i)`.
    pub fn from_nodes(n: usize, m: f64, kappa: f64, r: &[f64], lambda: &[f64], dlambda: &[f64]) -> Result<Self> {
        if r.len() != lambda.len() || r.len() != dlambda.len() || r.len() < 16 {
            return Err(Error::ProfileBlock("node arrays must have equal length >= 16".into()));
        }
        let potential = Potential::new(n, m, kappa)?;
        let step = r[1] - r[0];
        if r[0] != 0.0 || !(step > 0.0) {
            return Err(Error::ProfileBlock("nodes must start at r = 0 and increase".into()));
        }
        for (i, ri) in r.iter().enumerate() {
            if (ri - i as f64 * step).abs() > 1e-9 * step.max(1.0) * (i as f64 + 1.0) {
                return Err(Error::ProfileBlock("nodes must be uniformly spaced".into()));
            }
        }
        let s0 = potential.horizon();
        let delta = lambda.iter().map(|l| l - s0).collect();
        let last = lambda[lambda.len() - 1];
        let end = if potential.value(last) < 1e-6 && kappa > 0.0 {
            DomainEnd::FirstIntegralVanishes
        } else {
            DomainEnd::Hint
        };
        Self::from_parts(potential, step, delta, dlambda.to_vec(), end)
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn domain_end(&self) -> DomainEnd {
        self.end
    }

    pub fn node_count(&self) -> usize {
        self.delta.len()
    }

    pub fn node(&self, i: usize) -> (f64, f64, f64) {
        (
            i as f64 * self.step,
            self.potential.horizon() + self.delta[i],
            self.slope[i],
        )
    }

    fn cell(&self, r: f64) -> (usize, f64) {
        let last = self.delta.len() - 2;
        let i = ((r / self.step).floor().max(0.0) as usize).min(last);
        (i, (r - i as f64 * self.step) / self.step)
    }

    fn delta_at(&self, r: f64) -> f64 {
        let (i, t) = self.cell(r);
        hermite(
            t,
            self.step,
            self.delta[i],
            self.slope[i],
            self.delta[i + 1],
            self.slope[i + 1],
        )
        .0
    }

    fn lambda_at(&self, r: f64) -> f64 {
        self.potential.horizon() + self.delta_at(r)
    }

    fn phi_unnormalised(&self, r: f64) -> f64 {
        let (i, _) = self.cell(r);
        let a = i as f64 * self.step;
        self.phi_nodes[i] + gauss_legendre5(a, r, |s| 1.0 / self.lambda_at(s))
    }
}

impl WarpingProfile for HorizonProfile {
    fn family(&self) -> &'static str {
        if self.potential.kappa == 0.0 {
            "schwarzschild"
        } else {
            "desitter-schwarzschild"
        }
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::OdeIntegrated
    }

    fn dim(&self) -> usize {
        self.potential.n
    }

    fn r_max(&self) -> f64 {
        self.r_max
    }

    fn eval_raw(&self, r: f64) -> Warp {
        let d = self.delta_at(r).max(0.0);
        let lambda = self.potential.horizon() + d;
        let f = self.potential.value_from_horizon(d).max(0.0);
        Warp {
            lambda,
            dlambda: f.sqrt(),
            d2lambda: 0.5 * self.potential.derivative(lambda),
        }
    }

    fn inverse_primitive(&self, r: f64) -> f64 {
        self.phi_unnormalised(r) - self.phi_offset
    }

    fn to_block(&self) -> ProfileBlock {
        let count = self.delta.len();
        let mut r = Vec::with_capacity(count);
        let mut lambda = Vec::with_capacity(count);
        let mut dlambda = Vec::with_capacity(count);
        for i in 0..count {
            let (ri, li, di) = self.node(i);
            r.push(ri);
            lambda.push(li);
            dlambda.push(di);
        }
        ProfileBlock {
            family: self.family().into(),
            kind: self.kind(),
            n: self.potential.n,
            b: 1.0,
            r_max: self.r_max,
            m: Some(self.potential.m),
            kappa: Some(self.potential.kappa),
            scale: None,
            nodes: Some((r, lambda, dlambda)),
        }
    }
}
