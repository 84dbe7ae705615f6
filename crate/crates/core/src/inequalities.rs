//! Integral inequalities for star-shaped graphs.
//!
//! - Heintze–Karcher type: `(n−1) ∫ λ'/H dμ ≥ ∫ u dμ` for mean-convex `Σ`,
//!   with `H = σ_1`.
//! - Minkowski type: `p ∫ u σ_p dμ ≥ (n−p) ∫ λ' σ_{p−1} dμ` when `σ_p > 0`.
//! - The divergence identity behind the latter,
//!   `div(T^{(p)} ξ) = λ'(n−p)σ_{p−1} − pσ_p u + ξ_j ∇_i T^{(p)}_ij`, whose
//!   integral over a closed `Σ` vanishes.
//!
//! Gaps are reported as `lhs − rhs`, so a non-negative gap means the
//! inequality holds.

use std::fmt;

use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::fiber::GridMode;
use crate::quad::binomial;
use crate::surface::{second_fundamental_form, CurvatureField, GraphSurface, NodeCurvature};

/// Left side, right side and gap of one integral inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl Gap {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, gap: lhs - rhs }
    }

    /// Magnitude used to scale tolerances.
    pub fn scale(&self) -> f64 {
        1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }

    /// `gap ≥ −tol·scale`.
    pub fn holds(&self, tol: f64) -> bool {
        self.gap >= -tol * self.scale()
    }
}

fn check_order(c: &CurvatureField, p: usize) -> Result<usize> {
    let n = c.ambient_dim();
    if p == 0 || p > n - 1 {
        return Err(Error::InvalidOrder { p, n });
    }
    Ok(n)
}

/// Heintze–Karcher-type integrals. Fails unless `σ_1 > 0` at every node.
pub fn heintze_karcher(c: &CurvatureField) -> Result<Gap> {
    let n = c.ambient_dim();
    let h: Vec<f64> = c.sigma(1);
    if let Some((node, &value)) = h.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::NotMeanConvex { node, value });
    }
    let lhs = (n as f64 - 1.0) * c.integrate_indexed(|i, node| node.warp.dlambda / h[i]);
    let rhs = c.integrate(|node| node.support);
    Ok(Gap::new(lhs, rhs))
}

/// Minkowski-type integrals of order `p`. Fails unless `σ_p > 0` everywhere.
pub fn minkowski(c: &CurvatureField, p: usize) -> Result<Gap> {
    let n = check_order(c, p)?;
    let sp = c.sigma(p);
    if let Some((node, &value)) = sp.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::SigmaNotPositive { p, node, value });
    }
    let sp1 = c.sigma(p - 1);
    let lhs = p as f64 * c.integrate_indexed(|i, node| node.support * sp[i]);
    let rhs = (n - p) as f64 * c.integrate_indexed(|i, node| node.warp.dlambda * sp1[i]);
    Ok(Gap::new(lhs, rhs))
}

/// `Σ_j ξ_j Ric(e_j, ν) = −R |ξ|² ⟨∂_r, ν⟩ / λ` at one node.
pub fn ricci_term(node: &NodeCurvature) -> f64 {
    -node.ricci * node.xi * node.xi * node.radial_normal / node.warp.lambda
}

/// Largest value of `ξ_j Ric(e_j, ν)` over all nodes.
pub fn ricci_term_max(c: &CurvatureField) -> f64 {
    c.nodes.iter().map(ricci_term).fold(f64::NEG_INFINITY, f64::max)
}

/// Pointwise right side of the divergence identity on an axisymmetric grid.
///
/// The `ξ·div T` term is `−((n−p)/(n−2)) σ_{p−2;θ} ξ_θ Ric(e_θ, ν)`, where the
/// truncated polynomial drops the meridian curvature. For `p = 1` it vanishes.
pub fn divergence_integrand(node: &NodeCurvature, n: usize, p: usize) -> f64 {
    let sp = node.sigma(p);
    let sp1 = node.sigma(p - 1);
    let mut rhs = node.warp.dlambda * (n - p) as f64 * sp1 - p as f64 * sp * node.support;
    if p >= 2 {
        let truncated = binomial(n - 2, p - 2) * node.frame_kappa[1].powi(p as i32 - 2);
        rhs -= (n - p) as f64 / (n - 2) as f64 * truncated * ricci_term(node);
    }
    rhs
}

/// Divergence-identity check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceResidual {
    /// Largest `|RHS|` over the nodes (zero on slices).
    pub pointwise_max: f64,
    /// `|∫ RHS dμ|`, which vanishes for a closed surface.
    pub integral: f64,
}

pub fn divergence_identity_residual(c: &CurvatureField, p: usize) -> Result<DivergenceResidual> {
    let n = check_order(c, p)?;
    if c.grid().mode() != GridMode::Axisym {
        return Err(Error::NotAxisymmetric);
    }
    let values: Vec<f64> = c.nodes.iter().map(|node| divergence_integrand(node, n, p)).collect();
    Ok(DivergenceResidual {
        pointwise_max: values.iter().fold(0.0, |a, x| a.max(x.abs())),
        integral: c.integrate_indexed(|i, _| values[i]).abs(),
    })
}

/// All checks for one surface and one order `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub p: usize,
    pub n: usize,
    pub grid_size: usize,
    pub hk: Gap,
    pub mk: Gap,
    /// `None` on full-s2 grids, where the identity is not assembled.
    pub divergence: Option<DivergenceResidual>,
    pub ricci_term_max: f64,
}

impl InequalityReport {
    pub const CSV_HEADER: &'static str =
        "p,n,N,hk_lhs,hk_rhs,hk_gap,mk_lhs,mk_rhs,mk_gap,div_pointwise,div_integral,ricci_term_max";

    /// True when both gaps are at least `−tol` scaled by their magnitudes.
    pub fn holds(&self, tol: f64) -> bool {
        self.hk.holds(tol) && self.mk.holds(tol)
    }

    pub fn csv_row(&self) -> String {
        let (dp, di) = match self.divergence {
            Some(d) => (fmt_real(d.pointwise_max), fmt_real(d.integral)),
            None => ("skipped".to_string(), "skipped".to_string()),
        };
        [
            self.p.to_string(),
            self.n.to_string(),
            self.grid_size.to_string(),
            fmt_real(self.hk.lhs),
            fmt_real(self.hk.rhs),
            fmt_real(self.hk.gap),
            fmt_real(self.mk.lhs),
            fmt_real(self.mk.rhs),
            fmt_real(self.mk.gap),
            dp,
            di,
            fmt_real(self.ricci_term_max),
        ]
        .join(",")
    }
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}, n = {}, N = {}", self.p, self.n, self.grid_size)?;
        writeln!(
            f,
            "  heintze-karcher  lhs {}  rhs {}  gap {}",
            fmt_real(self.hk.lhs),
            fmt_real(self.hk.rhs),
            fmt_real(self.hk.gap)
        )?;
        writeln!(
            f,
            "  minkowski        lhs {}  rhs {}  gap {}",
            fmt_real(self.mk.lhs),
            fmt_real(self.mk.rhs),
            fmt_real(self.mk.gap)
        )?;
        match self.divergence {
            Some(d) => writeln!(f, "  divergence       |int| {}  max {}", fmt_real(d.integral), fmt_real(d.pointwise_max))?,
            None => writeln!(f, "  divergence       skipped (full-s2 grid)")?,
        }
        write!(f, "  max xi.Ric       {}", fmt_real(self.ricci_term_max))
    }
}

pub fn full_report(s: &GraphSurface, p: usize) -> Result<InequalityReport> {
    let c = second_fundamental_form(s)?;
    report_from_field(&c, p)
}

pub fn report_from_field(c: &CurvatureField, p: usize) -> Result<InequalityReport> {
    let n = check_order(c, p)?;
    let hk = heintze_karcher(c)?;
    let mk = minkowski(c, p)?;
    let divergence = match c.grid().mode() {
        GridMode::Axisym => Some(divergence_identity_residual(c, p)?),
        GridMode::FullS2 => None,
    };
    Ok(InequalityReport {
        p,
        n,
        grid_size: c.grid().n_theta(),
        hk,
        mk,
        divergence,
        ricci_term_max: ricci_term_max(c),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fiber::FiberGrid;
    use crate::profile::{make_ds_schwarzschild, CoshProfile, EuclideanProfile, SharedProfile};
    use crate::surface::{make_slice, Perturbation, SurfaceSpec};
    use crate::symfunc::cone_level;

    fn profiles() -> Vec<SharedProfile> {
        vec![
            Arc::new(make_ds_schwarzschild(3, 1.0, 0.0, 20.0).unwrap()),
            Arc::new(make_ds_schwarzschild(3, 2.0, 0.0, 20.0).unwrap()),
            Arc::new(make_ds_schwarzschild(3, 1.0, 0.05, 20.0).unwrap()),
            Arc::new(make_ds_schwarzschild(4, 1.0, 0.0, 20.0).unwrap()),
            Arc::new(EuclideanProfile::new(5, 10.0).unwrap()),
            Arc::new(CoshProfile::new(4, 2.0, 2f64.sqrt(), 2.0).unwrap()),
        ]
    }

    fn schwarzschild(n: usize) -> SharedProfile {
        Arc::new(make_ds_schwarzschild(n, 1.0, 0.0, 20.0).unwrap())
    }

    #[test]
    fn slice_equality_for_every_order() {
        for prof in profiles() {
            let n = prof.dim();
            let grid = FiberGrid::axisym(n, 64).unwrap();
            for frac in [0.2, 0.5, 0.8] {
                let s = make_slice(prof.clone(), grid.clone(), frac * prof.r_max()).unwrap();
                for p in 1..n {
                    let rep = full_report(&s, p).unwrap();
                    assert!(rep.hk.gap.abs() <= 1e-10 * rep.hk.scale(), "{rep}");
                    assert!(rep.mk.gap.abs() <= 1e-10 * rep.mk.scale(), "{rep}");
                    let d = rep.divergence.unwrap();
                    assert!(d.pointwise_max <= 1e-12 * rep.mk.scale(), "{rep}");
                    assert_eq!(rep.ricci_term_max, 0.0);
                }
            }
        }
    }

    #[test]
    fn round_sphere_values() {
        let radius = 1.5;
        let s = make_slice(
            Arc::new(EuclideanProfile::new(3, 10.0).unwrap()),
            FiberGrid::axisym(3, 64).unwrap(),
            radius,
        )
        .unwrap();
        let rep = full_report(&s, 1).unwrap();
        let exact = 4.0 * std::f64::consts::PI * radius.powi(3);
        assert!((rep.hk.lhs - exact).abs() < 1e-12 * exact);
        assert!((rep.hk.rhs - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn gaps_positive_on_random_perturbations() {
        let grid = FiberGrid::axisym(3, 256).unwrap();
        let prof = schwarzschild(3);
        let mut tested = 0;
        for seed in 0..20 {
            let pert = Perturbation::random(2.0, 0.2 * 1.0, 3, seed);
            let s = SurfaceSpec::Perturbed(pert).build(prof.clone(), grid.clone()).unwrap();
            let c = second_fundamental_form(&s).unwrap();
            for p in 1..3 {
                if let Ok(rep) = report_from_field(&c, p) {
                    assert!(rep.hk.gap >= -1e-8, "{rep}");
                    assert!(rep.mk.gap >= -1e-8, "{rep}");
                    assert!(rep.ricci_term_max <= 1e-12);
                    tested += 1;
                }
            }
        }
        assert!(tested >= 20);
    }

    #[test]
    fn perturbed_gaps_are_strictly_positive() {
        let grid = FiberGrid::axisym(3, 512).unwrap();
        let pert = Perturbation {
            r0: 2.0,
            coeffs: vec![0.15],
        };
        let s = SurfaceSpec::Perturbed(pert).build(schwarzschild(3), grid).unwrap();
        // For p = 1 the Minkowski relation is an identity, so only
        // discretization error remains.
        let rep = full_report(&s, 1).unwrap();
        assert!(rep.hk.gap > 1e-4, "{rep}");
        assert!(rep.mk.gap.abs() < 1e-5, "{rep}");
        let rep = full_report(&s, 2).unwrap();
        assert!(rep.hk.gap > 1e-4, "{rep}");
        assert!(rep.mk.gap > 1e-4, "{rep}");
        assert!(rep.ricci_term_max <= 0.0);
    }

    #[test]
    fn divergence_residual_second_order() {
        for (n, p) in [(3, 1), (3, 2), (4, 2), (4, 3)] {
            let prof = schwarzschild(n);
            let pert = Perturbation {
                r0: 1.5,
                coeffs: vec![0.1, -0.05, 0.02],
            };
            let res: Vec<f64> = [128, 256]
                .iter()
                .map(|&count| {
                    let s = SurfaceSpec::Perturbed(pert.clone())
                        .build(prof.clone(), FiberGrid::axisym(n, count).unwrap())
                        .unwrap();
                    full_report(&s, p).unwrap().divergence.unwrap().integral
                })
                .collect();
            let ratio = res[0] / res[1];
            assert!(ratio > 3.5 && ratio < 4.5, "n={n} p={p} {res:?}");
        }
    }

    #[test]
    fn euclidean_minkowski_identity() {
        let prof: SharedProfile = Arc::new(EuclideanProfile::new(3, 10.0).unwrap());
        let spec = SurfaceSpec::Ellipsoid {
            equatorial: 1.0,
            polar: 1.5,
        };
        let res: Vec<f64> = [128, 256]
            .iter()
            .map(|&count| {
                let s = spec.build(prof.clone(), FiberGrid::axisym(3, count).unwrap()).unwrap();
                let c = second_fundamental_form(&s).unwrap();
                divergence_identity_residual(&c, 2).unwrap().integral
            })
            .collect();
        assert!(res[1] < 1e-3, "{res:?}");
        assert!(res[0] / res[1] > 3.5, "{res:?}");
    }

    #[test]
    fn ricci_term_sign() {
        for prof in profiles() {
            let n = prof.dim();
            let grid = FiberGrid::axisym(n, 128).unwrap();
            let r0 = 0.5 * prof.r_max();
            let amp = 0.2 * crate::surface::admissible_amplitude(r0, prof.r_max());
            for seed in 0..5 {
                let pert = Perturbation::random(r0, amp, 3, seed);
                let s = SurfaceSpec::Perturbed(pert).build(prof.clone(), grid.clone()).unwrap();
                let c = second_fundamental_form(&s).unwrap();
                assert!(ricci_term_max(&c) <= 1e-12, "{}", prof.family());
            }
        }
    }

    #[test]
    fn minkowski_gap_sign_invariant_under_dilation() {
        let prof: SharedProfile = Arc::new(EuclideanProfile::new(4, 50.0).unwrap());
        let grid = FiberGrid::axisym(4, 128).unwrap();
        let base = Perturbation {
            r0: 1.0,
            coeffs: vec![0.1, 0.08, -0.03],
        };
        for p in 1..4 {
            let mut signs = Vec::new();
            let mut scaled = Vec::new();
            for scale in [0.5, 1.0, 3.0, 10.0] {
                let pert = Perturbation {
                    r0: base.r0 * scale,
                    coeffs: base.coeffs.iter().map(|c| c * scale).collect(),
                };
                let s = SurfaceSpec::Perturbed(pert).build(prof.clone(), grid.clone()).unwrap();
                let rep = full_report(&s, p).unwrap();
                signs.push(rep.mk.gap > 0.0);
                scaled.push(rep.mk.gap / scale.powi(4 - p as i32));
            }
            assert!(signs.iter().all(|&x| x == signs[0]), "p={p}");
            for v in &scaled {
                assert!((v - scaled[0]).abs() < 1e-9 * scaled[0].abs().max(1.0), "p={p} {scaled:?}");
            }
        }
    }

    #[test]
    fn positive_sigma_implies_cone_membership() {
        let prof = schwarzschild(4);
        let grid = FiberGrid::axisym(4, 128).unwrap();
        for seed in 0..30 {
            let pert = Perturbation::random(1.2, 0.3, 3, seed);
            let Ok(s) = SurfaceSpec::Perturbed(pert).build(prof.clone(), grid.clone()) else {
                continue;
            };
            let c = second_fundamental_form(&s).unwrap();
            for p in 1..4 {
                if c.sigma(p).iter().all(|&x| x > 0.0) {
                    for node in &c.nodes {
                        assert!(cone_level(&node.curvature_vector()) >= p, "seed {seed} p {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn hypotheses_are_enforced() {
        // A dented sphere in flat space is not mean convex near the dent.
        let prof: SharedProfile = Arc::new(EuclideanProfile::new(3, 10.0).unwrap());
        let pert = Perturbation {
            r0: 1.0,
            coeffs: vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.3],
        };
        let s = SurfaceSpec::Perturbed(pert).build(prof, FiberGrid::axisym(3, 128).unwrap()).unwrap();
        let c = second_fundamental_form(&s).unwrap();
        let e = heintze_karcher(&c).unwrap_err();
        assert!(e.is_hypothesis_violation());
        assert!(matches!(minkowski(&c, 2), Err(Error::SigmaNotPositive { p: 2, .. })));
        assert!(matches!(minkowski(&c, 3), Err(Error::InvalidOrder { .. })));
        assert!(matches!(minkowski(&c, 0), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn full_grid_skips_divergence() {
        let prof = schwarzschild(3);
        let s = make_slice(prof, FiberGrid::full_s2(16, 16).unwrap(), 2.0).unwrap();
        let rep = full_report(&s, 2).unwrap();
        assert!(rep.divergence.is_none());
        assert!(rep.csv_row().contains("skipped"));
        assert!(rep.hk.gap.abs() < 1e-10 * rep.hk.scale());
        let c = second_fundamental_form(&s).unwrap();
        assert_eq!(divergence_identity_residual(&c, 1), Err(Error::NotAxisymmetric));
    }
}
