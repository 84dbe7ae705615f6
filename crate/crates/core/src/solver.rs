//! Damped Newton iteration for axisymmetric graphs with constant `σ_p`.
//!
//! The unknown is the nodal radius vector. The residual `F(r) = σ_p(r) − c` is
//! differentiated column by column with forward differences; because each
//! node only sees its two neighbours, columns three apart are perturbed
//! together.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::fiber::{FiberField, GridMode};
use crate::profile::{SharedProfile, WarpingProfile};
use crate::quad::binomial;
use crate::surface::{
    admissible_amplitude, make_slice, second_fundamental_form, GraphSurface, Perturbation, DOMAIN_MARGIN,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative finite-difference step for the Jacobian.
    pub fd_step: f64,
    /// Line-search halvings before giving up.
    pub max_halvings: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            fd_step: 1e-6,
            max_halvings: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub converged: bool,
    pub iterations: usize,
    /// `‖σ_p − c‖_∞` at the final iterate.
    pub residual: f64,
    /// `max r − min r`.
    pub dev: f64,
    /// Mean radius of the final iterate.
    pub r_star: f64,
    pub surface: GraphSurface,
    /// Accepted step lengths, one per iteration.
    pub steps: Vec<f64>,
    pub residual_history: Vec<f64>,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// `σ_p − c` at every node.
fn residual(s: &GraphSurface, p: usize, c: f64) -> Result<Vec<f64>> {
    let field = second_fundamental_form(s)?;
    Ok(field.sigma(p).into_iter().map(|x| x - c).collect())
}

/// Builds the trial surface, or `None` if it leaves the domain or loses
/// `σ_p > 0`.
fn admissible(profile: &SharedProfile, s: &GraphSurface, r: Vec<f64>, p: usize, c: f64) -> Option<(GraphSurface, Vec<f64>)> {
    let trial = GraphSurface::new(profile.clone(), s.shared_grid(), FiberField::new(r)).ok()?;
    let f = residual(&trial, p, c).ok()?;
    if f.iter().any(|x| !(x + c > 0.0)) {
        return None;
    }
    Some((trial, f))
}

fn jacobian(s: &GraphSurface, f0: &[f64], p: usize, c: f64, opts: &SolverOptions) -> Result<DMatrix<f64>> {
    let r = s.radii().values();
    let len = r.len();
    let mut jac = DMatrix::zeros(len, len);
    for color in 0..3 {
        let mut bumped = r.to_vec();
        let mut steps = vec![0.0; len];
        for j in (color..len).step_by(3) {
            steps[j] = opts.fd_step * (1.0 + r[j].abs());
            bumped[j] += steps[j];
        }
        let trial = GraphSurface::new(s.profile().clone(), s.shared_grid(), FiberField::new(bumped))?;
        let f1 = residual(&trial, p, c)?;
        for j in (color..len).step_by(3) {
            for i in j.saturating_sub(1)..(j + 2).min(len) {
                jac[(i, j)] = (f1[i] - f0[i]) / steps[j];
            }
        }
    }
    Ok(jac)
}

/// Drives `σ_p` of `init` to the constant `c`.
pub fn solve_constant_sigma_p(init: &GraphSurface, p: usize, c: f64, opts: &SolverOptions) -> Result<SolveResult> {
    let n = init.ambient_dim();
    if init.grid().mode() != GridMode::Axisym {
        return Err(Error::NotAxisymmetric);
    }
    if p == 0 || p > n - 1 {
        return Err(Error::InvalidOrder { p, n });
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::SolverInput(format!("target c = {c} must be positive")));
    }
    let profile = init.profile().clone();
    let mut s = init.clone();
    let mut f = residual(&s, p, c)?;
    if let Some((node, &x)) = f.iter().enumerate().find(|(_, &x)| !(x + c > 0.0)) {
        return Err(Error::SigmaNotPositive { p, node, value: x + c });
    }
    let mut norm = sup(&f);
    let mut history = vec![norm];
    let mut steps = Vec::new();
    let mut iterations = 0;
    while norm > opts.tol && iterations < opts.max_iter {
        let jac = jacobian(&s, &f, p, c, opts)?;
        let lu = jac.lu();
        let u = lu.u();
        let diag = u.diagonal();
        let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x.abs()), hi.max(x.abs())));
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        let delta = match lu.solve(&DVector::from_column_slice(&f)) {
            Some(d) if condition < 1e14 && d.iter().all(|x| x.is_finite()) => d,
            _ => return Err(Error::SingularJacobian { iteration: iterations, condition }),
        };
        let r = s.radii().values();
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = r.iter().zip(delta.iter()).map(|(a, d)| a - t * d).collect();
            if let Some((next, fn_)) = admissible(&profile, &s, trial, p, c) {
                let nn = sup(&fn_);
                if nn < norm {
                    accepted = Some((next, fn_, nn));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((next, fn_, nn)) = accepted else {
            return Err(Error::NoAdmissibleStep { iteration: iterations });
        };
        s = next;
        f = fn_;
        norm = nn;
        iterations += 1;
        steps.push(t);
        history.push(norm);
    }
    let r = s.radii();
    let (rmin, rmax) = (r.min(), r.max());
    let r_star = r.values().iter().sum::<f64>() / r.len() as f64;
    Ok(SolveResult {
        converged: norm <= opts.tol,
        iterations,
        residual: norm,
        dev: rmax - rmin,
        r_star,
        surface: s,
        steps,
        residual_history: history,
    })
}

/// `σ_p` of the slice at `r`: `C(n−1, p) (λ'/λ)^p`.
pub fn slice_sigma(profile: &dyn WarpingProfile, p: usize, r: f64) -> Result<f64> {
    let w = profile.eval(r)?;
    Ok(binomial(profile.dim() - 1, p) * w.slice_curvature().powi(p as i32))
}

/// Every radius whose slice has `σ_p = c`, ascending.
///
/// The slice-value map need not be monotone, so the domain is scanned for sign
/// changes and each bracket is bisected.
pub fn slice_locator(profile: &dyn WarpingProfile, p: usize, c: f64) -> Result<Vec<f64>> {
    const SCAN: usize = 4000;
    let n = profile.dim();
    if p == 0 || p > n - 1 {
        return Err(Error::InvalidOrder { p, n });
    }
    let (a, b) = (DOMAIN_MARGIN, profile.r_max() - DOMAIN_MARGIN);
    let g = |r: f64| slice_sigma(profile, p, r).map(|s| s - c);
    let mut roots = Vec::new();
    let mut prev_r = a;
    let mut prev_g = g(a)?;
    for i in 1..=SCAN {
        let r = a + (b - a) * i as f64 / SCAN as f64;
        let gr = g(r)?;
        if prev_g == 0.0 {
            roots.push(prev_r);
        } else if prev_g * gr < 0.0 {
            let (mut lo, mut hi, mut glo) = (prev_r, r, prev_g);
            while hi - lo > 1e-14 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid)?;
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm < 0.0) == (glo < 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_r = r;
        prev_g = gr;
    }
    if prev_g == 0.0 {
        roots.push(prev_r);
    }
    if roots.is_empty() {
        return Err(Error::NoSliceRoot { p, c });
    }
    Ok(roots)
}

/// One row of a rigidity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityRow {
    pub amplitude: f64,
    pub seed: u64,
    pub p: usize,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub dev: f64,
    pub r_star: f64,
    /// Distance from `r_star` to the nearest slice root.
    pub locator_gap: f64,
    /// Set when the run stopped on an error.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityTable {
    pub r0: f64,
    pub target: f64,
    pub roots: Vec<f64>,
    pub rows: Vec<RigidityRow>,
}

impl RigidityTable {
    pub const CSV_HEADER: &'static str = "amplitude,seed,p,converged,iterations,residual,dev,r_star,locator_gap";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                fmt_real(row.amplitude),
                row.seed,
                row.p,
                row.converged,
                row.iterations,
                fmt_real(row.residual),
                fmt_real(row.dev),
                fmt_real(row.r_star),
                fmt_real(row.locator_gap)
            );
        }
        out
    }

    /// True when every converged run ended on a slice to within `dev_tol`.
    pub fn all_slices(&self, dev_tol: f64) -> bool {
        self.rows.iter().filter(|r| r.converged).all(|r| r.dev <= dev_tol)
    }
}

/// Setup of a rigidity sweep.
#[derive(Clone, Debug)]
pub struct RigiditySetup {
    pub profile: SharedProfile,
    pub grid_size: usize,
    pub p: usize,
    /// Radius of the reference slice; its `σ_p` is the target value.
    pub r0: f64,
    pub amplitudes: Vec<f64>,
    /// Random draws per amplitude.
    pub draws: usize,
    pub seed: u64,
    /// Number of cosine modes in each perturbation.
    pub modes: usize,
    pub options: SolverOptions,
}

/// Perturbs the slice at `r0` with seeded cosine modes, solves for
/// `σ_p = σ_p(slice)`, and records how far each solution is from a slice.
pub fn rigidity_experiment(setup: &RigiditySetup) -> Result<RigidityTable> {
    let profile = &setup.profile;
    let grid = std::sync::Arc::new(crate::fiber::FiberGrid::axisym(profile.dim(), setup.grid_size)?);
    // Rejects reference radii too close to the domain ends.
    make_slice(profile.clone(), grid.clone(), setup.r0)?;
    let target = slice_sigma(profile.as_ref(), setup.p, setup.r0)?;
    let roots = slice_locator(profile.as_ref(), setup.p, target)?;
    let cap = admissible_amplitude(setup.r0, profile.r_max());
    let mut rows = Vec::new();
    for (k, &requested) in setup.amplitudes.iter().enumerate() {
        let amplitude = requested.min(cap);
        for d in 0..setup.draws.max(1) {
            let seed = setup.seed.wrapping_add((k * setup.draws.max(1) + d) as u64);
            let pert = Perturbation::random(setup.r0, amplitude, setup.modes, seed);
            let outcome = GraphSurface::new(profile.clone(), grid.clone(), grid.sample(|t, _| pert.eval(t)))
                .and_then(|init| solve_constant_sigma_p(&init, setup.p, target, &setup.options));
            let row = match outcome {
                Ok(res) => RigidityRow {
                    amplitude,
                    seed,
                    p: setup.p,
                    converged: res.converged,
                    iterations: res.iterations,
                    residual: res.residual,
                    dev: res.dev,
                    r_star: res.r_star,
                    locator_gap: roots.iter().map(|r| (r - res.r_star).abs()).fold(f64::INFINITY, f64::min),
                    failure: None,
                },
                Err(e) => RigidityRow {
                    amplitude,
                    seed,
                    p: setup.p,
                    converged: false,
                    iterations: 0,
                    residual: f64::NAN,
                    dev: f64::NAN,
                    r_star: f64::NAN,
                    locator_gap: f64::NAN,
                    failure: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }
    Ok(RigidityTable {
        r0: setup.r0,
        target,
        roots,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fiber::FiberGrid;
    use crate::inequalities::full_report;
    use crate::profile::{make_ds_schwarzschild, radius_for_lambda, EuclideanProfile};
    use crate::surface::SurfaceSpec;

    fn schwarzschild(n: usize, m: f64, kappa: f64) -> SharedProfile {
        Arc::new(make_ds_schwarzschild(n, m, kappa, 20.0).unwrap())
    }

    #[test]
    fn slice_is_a_fixed_point() {
        let p = schwarzschild(3, 1.0, 0.0);
        let r0 = radius_for_lambda(p.as_ref(), 4.0).unwrap();
        let s = make_slice(p.clone(), FiberGrid::axisym(3, 64).unwrap(), r0).unwrap();
        let c = slice_sigma(p.as_ref(), 1, r0).unwrap();
        let res = solve_constant_sigma_p(&s, 1, c, &SolverOptions::default()).unwrap();
        assert!(res.converged);
        assert!(res.iterations <= 1);
        assert!(res.dev <= 1e-12);
    }

    #[test]
    fn perturbed_schwarzschild_returns_to_slice() {
        let p = schwarzschild(3, 1.0, 0.0);
        let r0 = radius_for_lambda(p.as_ref(), 4.0).unwrap();
        let grid = FiberGrid::axisym(3, 96).unwrap();
        let init = SurfaceSpec::Perturbed(Perturbation {
            r0,
            coeffs: vec![0.1],
        })
        .build(p.clone(), grid)
        .unwrap();
        let c = slice_sigma(p.as_ref(), 1, r0).unwrap();
        let res = solve_constant_sigma_p(&init, 1, c, &SolverOptions::default()).unwrap();
        assert!(res.converged, "{:?}", res.residual_history);
        assert!(res.iterations <= 20);
        assert!(res.dev <= 1e-8, "{}", res.dev);
        assert!((res.r_star - r0).abs() < 1e-8);
        // The limit is a slice, so both integral inequalities are equalities.
        for q in 1..3 {
            let rep = full_report(&res.surface, q).unwrap();
            assert!(rep.hk.gap.abs() <= 1e-10 * rep.hk.scale());
            assert!(rep.mk.gap.abs() <= 1e-10 * rep.mk.scale());
        }
    }

    #[test]
    fn euclidean_sphere_uniqueness() {
        let p: SharedProfile = Arc::new(EuclideanProfile::new(4, 10.0).unwrap());
        let radius = 2.0;
        let grid = FiberGrid::axisym(4, 96).unwrap();
        let c = 3.0 / (radius * radius);
        // Even modes: translations are excluded, so the limit is r ≡ R.
        let init = SurfaceSpec::Perturbed(Perturbation {
            r0: radius,
            coeffs: vec![0.0, 0.15, 0.0, -0.05],
        })
        .build(p.clone(), grid.clone())
        .unwrap();
        let res = solve_constant_sigma_p(&init, 2, c, &SolverOptions::default()).unwrap();
        assert!(res.converged);
        assert!(res.dev < 1e-8, "{}", res.dev);
        assert!((res.r_star - radius).abs() < 1e-8);
    }

    #[test]
    fn locator_values() {
        let e = EuclideanProfile::new(3, 10.0).unwrap();
        let roots = slice_locator(&e, 1, 2.0 / 1.25).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.25).abs() < 1e-12);

        let s = make_ds_schwarzschild(3, 2.0, 0.0, 40.0).unwrap();
        let roots = slice_locator(&s, 1, 2f64.sqrt() / 4.0).unwrap();
        let expected = radius_for_lambda(&s, 4.0).unwrap();
        assert!(roots.iter().any(|r| (r - expected).abs() < 1e-10), "{roots:?} vs {expected}");
        // The slice map rises from 0 at the horizon, so a second root exists
        // on the inner side of its maximum.
        assert_eq!(roots.len(), 2);

        assert!(matches!(slice_locator(&s, 1, 10.0), Err(Error::NoSliceRoot { .. })));
    }

    #[test]
    fn rigidity_sweep() {
        let profile = schwarzschild(3, 1.0, 0.0);
        let r0 = radius_for_lambda(profile.as_ref(), 4.0).unwrap();
        let setup = RigiditySetup {
            profile,
            grid_size: 64,
            p: 1,
            r0,
            amplitudes: vec![0.0, 0.05, 0.1, 0.2],
            draws: 1,
            seed: 7,
            modes: 3,
            options: SolverOptions::default(),
        };
        let table = rigidity_experiment(&setup).unwrap();
        assert_eq!(table.rows[0].dev, 0.0);
        for row in &table.rows {
            assert!(row.converged, "{row:?}");
            assert!(row.dev <= 1e-8);
            assert!(row.locator_gap <= 1e-8);
        }
        assert!(table.all_slices(1e-8));
        let again = rigidity_experiment(&setup).unwrap();
        assert_eq!(table.to_csv(), again.to_csv());
        assert!(table.to_csv().starts_with(RigidityTable::CSV_HEADER));
    }

    #[test]
    fn desitter_rigidity() {
        let profile = schwarzschild(3, 1.0, 0.05);
        let r0 = radius_for_lambda(profile.as_ref(), 2.5).unwrap();
        let setup = RigiditySetup {
            profile,
            grid_size: 64,
            p: 1,
            r0,
            amplitudes: vec![0.1],
            draws: 1,
            seed: 7,
            modes: 3,
            options: SolverOptions::default(),
        };
        let row = &rigidity_experiment(&setup).unwrap().rows[0];
        assert!(row.converged && row.dev <= 1e-8, "{row:?}");
    }

    #[test]
    fn input_validation() {
        let p = schwarzschild(3, 1.0, 0.0);
        let s = make_slice(p.clone(), FiberGrid::full_s2(8, 8).unwrap(), 2.0).unwrap();
        assert!(matches!(
            solve_constant_sigma_p(&s, 1, 0.1, &SolverOptions::default()),
            Err(Error::NotAxisymmetric)
        ));
        let s = make_slice(p, FiberGrid::axisym(3, 8).unwrap(), 2.0).unwrap();
        assert!(solve_constant_sigma_p(&s, 3, 0.1, &SolverOptions::default()).is_err());
        assert!(solve_constant_sigma_p(&s, 1, -1.0, &SolverOptions::default()).is_err());
    }
}
