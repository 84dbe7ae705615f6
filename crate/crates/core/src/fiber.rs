//! Finite-difference calculus on the round fiber `S^{n−1}`.
//!
//! Two discretizations are provided:
//!
//! - **axisymmetric** (any `n`): fields depend on the polar angle `θ` only.
//!   Nodes sit at cell centres `θ_k = (k + ½)π/N`; the Hessian in an
//!   orthonormal frame is `diag(f'', cot θ·f', …, cot θ·f')` with the second
//!   entry repeated `n − 2` times.
//! - **full-s2** (`n = 3` only): a latitude–longitude grid with interior
//!   latitudes and `N_ψ` (even) longitudes.
//!
//! Both use second-order central differences. Values beyond a pole come from
//! the point reached by continuing the meridian through the pole, which for
//! axisymmetric fields is the even reflection `f(−θ) = f(θ)`.
//!
//! Quadrature weights are exact cell integrals of the round measure, so
//! constants integrate exactly and the weights are mirror-symmetric.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::quad::{sin_power_primitive, sphere_area};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    Axisym,
    FullS2,
}

impl GridMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridMode::Axisym => "axisym",
            GridMode::FullS2 => "full-s2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "axisym" => Some(GridMode::Axisym),
            "full-s2" => Some(GridMode::FullS2),
            _ => None,
        }
    }
}

/// Nodes and quadrature weights on `S^{n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberGrid {
    mode: GridMode,
    n: usize,
    theta: Vec<f64>,
    psi: Vec<f64>,
    weights: Vec<f64>,
}

impl FiberGrid {
    /// Axisymmetric grid with `count` interior polar nodes.
    pub fn axisym(n: usize, count: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("ambient dimension must be >= 3, got {n}")));
        }
        if count < 4 {
            return Err(Error::InvalidGrid(format!("need at least 4 nodes, got {count}")));
        }
        let theta = mirrored_latitudes(count);
        let ring = sphere_area(n - 2);
        let m = n - 2;
        let dt = PI / count as f64;
        let mut weights = vec![0.0; count];
        for k in 0..count.div_ceil(2) {
            let a = k as f64 * dt;
            let w = ring * (sin_power_primitive(m, a + dt) - sin_power_primitive(m, a));
            weights[k] = w;
            weights[count - 1 - k] = w;
        }
        Ok(Self {
            mode: GridMode::Axisym,
            n,
            theta,
            psi: vec![0.0],
            weights,
        })
    }

    /// Latitude–longitude grid on `S²` (`n = 3`).
    pub fn full_s2(n_theta: usize, n_psi: usize) -> Result<Self> {
        if n_theta < 4 || n_psi < 4 || !n_psi.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "full-s2 grid needs n_theta >= 4 and even n_psi >= 4, got {n_theta} x {n_psi}"
            )));
        }
        let theta = mirrored_latitudes(n_theta);
        let dpsi = 2.0 * PI / n_psi as f64;
        let psi: Vec<f64> = (0..n_psi).map(|l| l as f64 * dpsi).collect();
        let dt = PI / n_theta as f64;
        let mut band = vec![0.0; n_theta];
        for j in 0..n_theta.div_ceil(2) {
            let a = j as f64 * dt;
            let w = ((a).cos() - (a + dt).cos()) * dpsi;
            band[j] = w;
            band[n_theta - 1 - j] = w;
        }
        let weights = band
            .iter()
            .flat_map(|&w| std::iter::repeat_n(w, n_psi))
            .collect();
        Ok(Self {
            mode: GridMode::FullS2,
            n: 3,
            theta,
            psi,
            weights,
        })
    }

    pub fn mode(&self) -> GridMode {
        self.mode
    }

    /// Ambient dimension `n`; the fiber is `S^{n−1}`.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_psi(&self) -> usize {
        self.psi.len()
    }

    pub fn len(&self) -> usize {
        self.theta.len() * self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dtheta(&self) -> f64 {
        PI / self.theta.len() as f64
    }

    pub fn dpsi(&self) -> f64 {
        2.0 * PI / self.psi.len() as f64
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn psis(&self) -> &[f64] {
        &self.psi
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(θ, ψ)` of node `idx`; `ψ = 0` on axisymmetric grids.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let np = self.psi.len();
        (self.theta[idx / np], self.psi[idx % np])
    }

    /// Multiplicity of the second frame direction (`n − 2`).
    pub fn second_multiplicity(&self) -> usize {
        self.n - 2
    }

    /// Samples `f(θ, ψ)` at every node.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> FiberField {
        FiberField::new((0..self.len()).map(|i| {
            let (t, p) = self.coords(i);
            f(t, p)
        }).collect())
    }

    fn check_len(&self, f: &FiberField) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::FieldLength {
                expected: self.len(),
                got: f.len(),
            });
        }
        Ok(())
    }
}

fn mirrored_latitudes(count: usize) -> Vec<f64> {
    let dt = PI / count as f64;
    let mut theta = vec![0.0; count];
    for k in 0..count.div_ceil(2) {
        let t = (k as f64 + 0.5) * dt;
        theta[k] = t;
        theta[count - 1 - k] = PI - t;
    }
    theta
}

/// Scalar values at the nodes of a [`FiberGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct FiberField(Vec<f64>);

impl FiberField {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn constant(len: usize, c: f64) -> Self {
        Self(vec![c; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl From<Vec<f64>> for FiberField {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Gradient and covariant Hessian at one node, in the orthonormal frame
/// `(e_θ, e_2)` of the round metric. On axisymmetric grids `e_2` stands for
/// each of the `n − 2` directions tangent to the latitude sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeDerivatives {
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl NodeDerivatives {
    pub fn grad_norm_sq(&self) -> f64 {
        self.grad[0] * self.grad[0] + self.grad[1] * self.grad[1]
    }
}

/// Covariant derivatives of a field at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberHessian {
    pub nodes: Vec<NodeDerivatives>,
    multiplicity: usize,
}

impl FiberHessian {
    /// Trace of the Hessian, i.e. the Laplace–Beltrami operator.
    pub fn trace(&self) -> Vec<f64> {
        let m = self.multiplicity as f64;
        self.nodes
            .iter()
            .map(|d| d.hess[0][0] + m * d.hess[1][1])
            .collect()
    }
}

/// Neighbour lookup along a meridian: index `j` may run one past either pole,
/// in which case the value comes from the antipodal longitude.
fn meridian(f: &[f64], n_theta: usize, n_psi: usize, j: isize, l: usize) -> f64 {
    let half = n_psi / 2;
    if j < 0 {
        f[(l + half) % n_psi]
    } else if j as usize >= n_theta {
        f[(n_theta - 1) * n_psi + (l + half) % n_psi]
    } else {
        f[j as usize * n_psi + l]
    }
}

/// Gradient and orthonormal-frame Hessian of `f`.
pub fn covariant_hessian(grid: &FiberGrid, f: &FiberField) -> Result<FiberHessian> {
    grid.check_len(f)?;
    let nodes = match grid.mode {
        GridMode::Axisym => axisym_derivatives(grid, f.values()),
        GridMode::FullS2 => full_derivatives(grid, f.values()),
    };
    if let Some(node) = nodes.iter().position(|d| {
        !(d.grad.iter().all(|x| x.is_finite()) && d.hess.iter().flatten().all(|x| x.is_finite()))
    }) {
        return Err(Error::PoleSingularity { node });
    }
    Ok(FiberHessian {
        nodes,
        multiplicity: grid.second_multiplicity(),
    })
}

/// First and second central differences in `θ` on an axisymmetric grid.
pub(crate) fn axisym_differences(values: &[f64], dt: f64) -> Vec<(f64, f64)> {
    let count = values.len();
    (0..count)
        .map(|k| {
            let lo = values[k.saturating_sub(1)];
            let hi = values[(k + 1).min(count - 1)];
            let c = values[k];
            ((hi - lo) / (2.0 * dt), (hi - 2.0 * c + lo) / (dt * dt))
        })
        .collect()
}

fn axisym_derivatives(grid: &FiberGrid, f: &[f64]) -> Vec<NodeDerivatives> {
    axisym_differences(f, grid.dtheta())
        .into_iter()
        .zip(&grid.theta)
        .map(|((d1, d2), &t)| NodeDerivatives {
            grad: [d1, 0.0],
            hess: [[d2, 0.0], [0.0, d1 * t.cos() / t.sin()]],
        })
        .collect()
}

fn full_derivatives(grid: &FiberGrid, f: &[f64]) -> Vec<NodeDerivatives> {
    let (nt, np) = (grid.n_theta(), grid.n_psi());
    let (dt, dp) = (grid.dtheta(), grid.dpsi());
    let mut out = Vec::with_capacity(nt * np);
    for j in 0..nt {
        let (s, c) = grid.theta[j].sin_cos();
        let cot = c / s;
        for l in 0..np {
            let ji = j as isize;
            let (lp, lm) = ((l + 1) % np, (l + np - 1) % np);
            let at = |jj: isize, ll: usize| meridian(f, nt, np, jj, ll);
            let f0 = at(ji, l);
            let f_t = (at(ji + 1, l) - at(ji - 1, l)) / (2.0 * dt);
            let f_tt = (at(ji + 1, l) - 2.0 * f0 + at(ji - 1, l)) / (dt * dt);
            let f_p = (at(ji, lp) - at(ji, lm)) / (2.0 * dp);
            let f_pp = (at(ji, lp) - 2.0 * f0 + at(ji, lm)) / (dp * dp);
            let f_tp = (at(ji + 1, lp) - at(ji + 1, lm) - at(ji - 1, lp) + at(ji - 1, lm)) / (4.0 * dt * dp);
            let h12 = (f_tp - cot * f_p) / s;
            out.push(NodeDerivatives {
                grad: [f_t, f_p / s],
                hess: [[f_tt, h12], [h12, f_pp / (s * s) + cot * f_t]],
            });
        }
    }
    out
}

/// Laplace–Beltrami operator in conservative flux form, independent of the
/// Hessian stencil.
pub fn laplace_beltrami(grid: &FiberGrid, f: &FiberField) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    let (nt, np) = (grid.n_theta(), grid.n_psi());
    let dt = grid.dtheta();
    let m = match grid.mode {
        GridMode::Axisym => grid.n as i32 - 2,
        GridMode::FullS2 => 1,
    };
    let v = f.values();
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..nt {
        let t = grid.theta[j];
        let s_up = (t + 0.5 * dt).sin().max(0.0).powi(m);
        let s_dn = (t - 0.5 * dt).sin().max(0.0).powi(m);
        // Cell-averaged measure keeps the pole cells consistent.
        let s_c = (sin_power_primitive(m as usize, t + 0.5 * dt)
            - sin_power_primitive(m as usize, t - 0.5 * dt))
            / dt;
        for l in 0..np {
            let ji = j as isize;
            let c = v[j * np + l];
            let (up, dn) = match grid.mode {
                GridMode::Axisym => (v[(j + 1).min(nt - 1)], v[j.saturating_sub(1)]),
                GridMode::FullS2 => (meridian(v, nt, np, ji + 1, l), meridian(v, nt, np, ji - 1, l)),
            };
            // At a pole the face area vanishes, so the ghost value drops out.
            let up = if j + 1 == nt { c } else { up };
            let dn = if j == 0 { c } else { dn };
            let mut lap = (s_up * (up - c) - s_dn * (c - dn)) / (s_c * dt * dt);
            if grid.mode == GridMode::FullS2 {
                let dp = grid.dpsi();
                let (lp, lm) = ((l + 1) % np, (l + np - 1) % np);
                lap += (v[j * np + lp] - 2.0 * c + v[j * np + lm]) / (dp * dp * t.sin().powi(2));
            }
            out.push(lap);
        }
    }
    Ok(out)
}

/// `∫_{S^{n−1}} f` with the grid weights, summing mirror-image latitudes in
/// pairs so odd fields cancel.
pub fn integrate(grid: &FiberGrid, f: &FiberField) -> f64 {
    debug_assert_eq!(f.len(), grid.len());
    integrate_values(grid, f.values())
}

pub(crate) fn integrate_values(grid: &FiberGrid, f: &[f64]) -> f64 {
    let w = &grid.weights;
    paired_sum(grid, |i| w[i] * f[i])
}

/// Sums `term(i)` over all nodes, adding mirror-image latitudes in pairs so
/// that odd integrands cancel to rounding.
pub(crate) fn paired_sum(grid: &FiberGrid, term: impl Fn(usize) -> f64) -> f64 {
    let (nt, np) = (grid.n_theta(), grid.n_psi());
    let mut total = 0.0;
    for j in 0..nt / 2 {
        let jm = nt - 1 - j;
        let mut band = 0.0;
        for l in 0..np {
            band += term(j * np + l) + term(jm * np + l);
        }
        total += band;
    }
    if nt % 2 == 1 {
        let j = nt / 2;
        for l in 0..np {
            total += term(j * np + l);
        }
    }
    total
}

/// CSV with columns `theta[,psi],value`.
pub fn field_csv(grid: &FiberGrid, f: &FiberField) -> String {
    let mut out = String::new();
    match grid.mode {
        GridMode::Axisym => out.push_str("theta,value\n"),
        GridMode::FullS2 => out.push_str("theta,psi,value\n"),
    }
    for (i, v) in f.values().iter().enumerate() {
        let (t, p) = grid.coords(i);
        match grid.mode {
            GridMode::Axisym => {
                let _ = writeln!(out, "{},{}", fmt_real(t), fmt_real(*v));
            }
            GridMode::FullS2 => {
                let _ = writeln!(out, "{},{},{}", fmt_real(t), fmt_real(p), fmt_real(*v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
        v.into_iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        for n in 3..7 {
            for count in [64, 65, 200] {
                let g = FiberGrid::axisym(n, count).unwrap();
                let total: f64 = integrate(&g, &FiberField::constant(count, 1.0));
                let exact = sphere_area(n - 1);
                assert!((total - exact).abs() < 1e-12 * exact, "n={n} N={count}");
            }
        }
        let g = FiberGrid::full_s2(32, 64).unwrap();
        let total = integrate(&g, &FiberField::constant(g.len(), 1.0));
        assert!((total - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn odd_fields_integrate_to_zero() {
        let g = FiberGrid::axisym(3, 64).unwrap();
        let f = g.sample(|t, _| t.cos());
        assert!(integrate(&g, &f).abs() < 1e-12);
        let g = FiberGrid::axisym(5, 101).unwrap();
        let f = g.sample(|t, _| t.cos().powi(3) + 0.3 * t.cos());
        assert!(integrate(&g, &f).abs() < 1e-12);
    }

    #[test]
    fn cos_squared_integral_converges_second_order() {
        // Exact: 2π ∫ cos²θ sin θ dθ = 4π/3.
        let exact = 4.0 * PI / 3.0;
        let err = |count| {
            let g = FiberGrid::axisym(3, count).unwrap();
            (integrate(&g, &g.sample(|t, _| t.cos().powi(2))) - exact).abs()
        };
        let (e1, e2) = (err(64), err(128));
        assert!(e1 < 1e-3 * exact);
        assert!((e1 / e2 - 4.0).abs() < 0.1, "ratio {}", e1 / e2);
        assert!(err(4096) < 1e-6);
    }

    #[test]
    fn hessian_of_constant_vanishes() {
        for g in [FiberGrid::axisym(4, 32).unwrap(), FiberGrid::full_s2(16, 32).unwrap()] {
            let h = covariant_hessian(&g, &FiberField::constant(g.len(), 2.5)).unwrap();
            for d in &h.nodes {
                assert_eq!(d.grad, [0.0, 0.0]);
                assert_eq!(d.hess, [[0.0, 0.0], [0.0, 0.0]]);
            }
        }
    }

    #[test]
    fn first_harmonic_is_eigenfunction() {
        // Hess(cos θ) = −cos θ · g on S²; error O(N^{-2}).
        let errs: Vec<f64> = [64, 128]
            .iter()
            .map(|&count| {
                let g = FiberGrid::axisym(3, count).unwrap();
                let f = g.sample(|t, _| t.cos());
                let h = covariant_hessian(&g, &f).unwrap();
                max_abs(h.nodes.iter().zip(f.values()).flat_map(|(d, v)| {
                    [d.hess[0][0] + v, d.hess[1][1] + v]
                }))
            })
            .collect();
        assert!(errs[0] < 1e-3);
        assert!(errs[0] / errs[1] > 3.5 && errs[0] / errs[1] < 4.5, "{errs:?}");
    }

    #[test]
    fn coordinate_functions_full_s2() {
        // x, y, z restricted to S² satisfy Hess f = −f·g.
        let coords: [fn(f64, f64) -> f64; 3] = [
            |t, p| t.sin() * p.cos(),
            |t, p| t.sin() * p.sin(),
            |t, _| t.cos(),
        ];
        for f in coords {
            // Away from the poles the stencil is second order; on the polar
            // rows the ψψ term degrades to first order.
            let (mut interior, mut all) = (Vec::new(), Vec::new());
            for nt in [32, 64] {
                let g = FiberGrid::full_s2(nt, 2 * nt).unwrap();
                let field = g.sample(f);
                let h = covariant_hessian(&g, &field).unwrap();
                let errs: Vec<(f64, f64)> = h.nodes.iter().zip(field.values()).enumerate().map(|(i, (d, v))| {
                    let e = [d.hess[0][0] + v, d.hess[1][1] + v, d.hess[0][1]];
                    (g.coords(i).0.sin(), max_abs(e))
                }).collect();
                interior.push(errs.iter().filter(|e| e.0 > 0.3).fold(0.0f64, |a, e| a.max(e.1)));
                all.push(errs.iter().fold(0.0f64, |a, e| a.max(e.1)));
            }
            assert!(interior[0] < 5e-3, "{interior:?}");
            assert!(interior[0] / interior[1] > 3.5, "{interior:?}");
            assert!(all[0] / all[1] > 1.8, "{all:?}");
        }
    }

    /// Second derivative of `f ∘ γ` along a unit-speed great circle leaving
    /// the point at polar angle `θ` in a latitude direction. Along such a
    /// circle the polar angle is `arccos(cos t · cos θ)`.
    fn latitude_second_derivative(f: impl Fn(f64) -> f64, theta: f64) -> f64 {
        let h = 1e-3;
        let along = |t: f64| f((t.cos() * theta.cos()).clamp(-1.0, 1.0).acos());
        (along(h) - 2.0 * along(0.0) + along(-h)) / (h * h)
    }

    #[test]
    fn axisym_n4_theta_squared_matches_embedded_oracle() {
        let f = |t: f64| t * t;
        let g = FiberGrid::axisym(4, 256).unwrap();
        let field = g.sample(|t, _| f(t));
        let h = covariant_hessian(&g, &field).unwrap();
        // Node closest to the equator.
        let k = g.thetas().iter().enumerate().min_by(|a, b| {
            (a.1 - PI / 2.0).abs().partial_cmp(&(b.1 - PI / 2.0).abs()).unwrap()
        }).unwrap().0;
        let t = g.thetas()[k];
        assert!((h.nodes[k].hess[0][0] - 2.0).abs() < 1e-9);
        let oracle = latitude_second_derivative(f, t);
        assert!((h.nodes[k].hess[1][1] - oracle).abs() < 1e-5, "{} vs {oracle}", h.nodes[k].hess[1][1]);
        assert!(h.nodes[k].hess[1][1].abs() < 0.02);
        // Everywhere else, compare with the same oracle.
        for (i, &t) in g.thetas().iter().enumerate().step_by(17).filter(|(_, t)| t.sin() > 0.2) {
            let oracle = latitude_second_derivative(f, t);
            let exact_cot = 2.0 * t * t.cos() / t.sin();
            assert!((oracle - exact_cot).abs() < 1e-5 * (1.0 + exact_cot.abs()), "{t} {oracle} {exact_cot}");
            assert!((h.nodes[i].hess[1][1] - exact_cot).abs() < 1e-3 * (1.0 + exact_cot.abs()));
        }
    }

    #[test]
    fn trace_matches_flux_laplacian() {
        let f = |t: f64, _p: f64| (2.0 * t).cos() + 0.3 * t.cos().powi(3);
        for n in [3, 5] {
            let mut errs = Vec::new();
            for count in [64, 128] {
                let g = FiberGrid::axisym(n, count).unwrap();
                let field = g.sample(f);
                let tr = covariant_hessian(&g, &field).unwrap().trace();
                let lap = laplace_beltrami(&g, &field).unwrap();
                errs.push(max_abs(tr.iter().zip(&lap).map(|(a, b)| a - b)));
            }
            assert!(errs[0] < 5e-2, "n={n} {errs:?}");
            assert!(errs[0] / errs[1] > 3.0, "n={n} {errs:?}");
        }
        let g = FiberGrid::full_s2(64, 128).unwrap();
        let field = g.sample(|t, p| t.sin() * p.cos() + t.cos().powi(2));
        let tr = covariant_hessian(&g, &field).unwrap().trace();
        let lap = laplace_beltrami(&g, &field).unwrap();
        assert!(max_abs(tr.iter().zip(&lap).map(|(a, b)| a - b)) < 2e-2);
    }

    #[test]
    fn full_and_axisym_agree_on_axisymmetric_fields() {
        let ga = FiberGrid::axisym(3, 64).unwrap();
        let gf = FiberGrid::full_s2(64, 16).unwrap();
        let f = |t: f64, _p: f64| (t.cos() * 1.3).exp();
        let ha = covariant_hessian(&ga, &ga.sample(f)).unwrap();
        let hf = covariant_hessian(&gf, &gf.sample(f)).unwrap();
        for j in 0..64 {
            for l in 0..16 {
                let a = &ha.nodes[j];
                let b = &hf.nodes[j * 16 + l];
                assert!((a.hess[0][0] - b.hess[0][0]).abs() < 1e-12);
                assert!((a.hess[1][1] - b.hess[1][1]).abs() < 1e-9);
                assert!(b.hess[0][1].abs() < 1e-9);
            }
        }
    }

    #[test]
    fn grid_validation() {
        assert!(FiberGrid::axisym(2, 10).is_err());
        assert!(FiberGrid::axisym(3, 2).is_err());
        assert!(FiberGrid::full_s2(8, 7).is_err());
        let g = FiberGrid::axisym(3, 8).unwrap();
        assert!(matches!(
            covariant_hessian(&g, &FiberField::constant(7, 1.0)),
            Err(Error::FieldLength { .. })
        ));
    }

    #[test]
    fn csv_columns() {
        let g = FiberGrid::full_s2(4, 4).unwrap();
        let csv = field_csv(&g, &FiberField::constant(16, 1.0));
        assert!(csv.starts_with("theta,psi,value\n"));
        assert_eq!(csv.lines().count(), 17);
    }
}
