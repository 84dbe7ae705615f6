//! Radial graphs `Σ = {(r(θ), θ)}` over the fiber and their extrinsic
//! curvature.
//!
//! With `φ = Φ(r)`, `Φ' = 1/λ`, and covariant derivatives of `φ` taken on the
//! round sphere,
//!
//! ```text
//! v    = sqrt(1 + |∇φ|²)
//! g_ij = λ² (σ_ij + φ_i φ_j)
//! h_ij = (λ'/(vλ)) g_ij − (λ/v) φ_ij
//! ```
//!
//! and the principal curvatures are the eigenvalues of the pencil `(h, g)`.
//! The normal is the outward one, `⟨∂_r, ν⟩ = 1/v > 0`.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::fiber::{axisym_differences, covariant_hessian, paired_sum, FiberField, FiberGrid, GridMode, NodeDerivatives};
use crate::profile::{ricci_coefficient_from, SharedProfile, Warp};
use crate::symfunc::{sigma, CurvatureVector};

/// Radii closer than this to `0` or `r̄` are rejected.
pub const DOMAIN_MARGIN: f64 = 1e-6;

/// A star-shaped radial graph in a warped product.
#[derive(Clone, Debug)]
pub struct GraphSurface {
    profile: SharedProfile,
    grid: Arc<FiberGrid>,
    r: FiberField,
    phi: FiberField,
    warp: Vec<Warp>,
    derivs: Vec<NodeDerivatives>,
    v: FiberField,
}

impl GraphSurface {
    pub fn new(profile: SharedProfile, grid: impl Into<Arc<FiberGrid>>, r: FiberField) -> Result<Self> {
        let grid = grid.into();
        if profile.dim() != grid.ambient_dim() {
            return Err(Error::InvalidSurface(format!(
                "profile dimension {} does not match grid dimension {}",
                profile.dim(),
                grid.ambient_dim()
            )));
        }
        if r.len() != grid.len() {
            return Err(Error::FieldLength {
                expected: grid.len(),
                got: r.len(),
            });
        }
        let (lo, hi) = (DOMAIN_MARGIN, profile.r_max() - DOMAIN_MARGIN);
        if let Some((node, &rk)) = r
            .values()
            .iter()
            .enumerate()
            .find(|(_, &rk)| !(rk > lo && rk < hi))
        {
            return Err(Error::OutOfDomain { node, r: rk, lo, hi });
        }
        let warp = r
            .values()
            .iter()
            .map(|&rk| profile.eval(rk))
            .collect::<Result<Vec<_>>>()?;
        let phi = FiberField::new(
            r.values()
                .iter()
                .map(|&rk| profile.inverse_primitive(rk))
                .collect(),
        );
        let derivs = covariant_hessian(&grid, &phi)?.nodes;
        let v = FiberField::new(derivs.iter().map(|d| (1.0 + d.grad_norm_sq()).sqrt()).collect());
        Ok(Self {
            profile,
            grid,
            r,
            phi,
            warp,
            derivs,
            v,
        })
    }

    /// Builds `r` by sampling `f(θ, ψ)` at the grid nodes.
    pub fn from_fn(
        profile: SharedProfile,
        grid: impl Into<Arc<FiberGrid>>,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let grid = grid.into();
        let r = grid.sample(f);
        Self::new(profile, grid, r)
    }

    pub fn profile(&self) -> &SharedProfile {
        &self.profile
    }

    pub fn grid(&self) -> &FiberGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<FiberGrid> {
        Arc::clone(&self.grid)
    }

    pub fn radii(&self) -> &FiberField {
        &self.r
    }

    pub fn phi(&self) -> &FiberField {
        &self.phi
    }

    pub fn v(&self) -> &FiberField {
        &self.v
    }

    pub fn warp(&self) -> &[Warp] {
        &self.warp
    }

    /// Gradient and Hessian of `φ` on the round sphere.
    pub fn phi_derivatives(&self) -> &[NodeDerivatives] {
        &self.derivs
    }

    pub fn ambient_dim(&self) -> usize {
        self.grid.ambient_dim()
    }

    /// Smallest `⟨∂_r, ν⟩ = 1/v`; positive for every constructible graph.
    pub fn star_shapedness(&self) -> f64 {
        1.0 / self.v.max()
    }
}

/// Constant graph `r ≡ r0`.
pub fn make_slice(profile: SharedProfile, grid: impl Into<Arc<FiberGrid>>, r0: f64) -> Result<GraphSurface> {
    let grid = grid.into();
    let len = grid.len();
    GraphSurface::new(profile, grid, FiberField::constant(len, r0))
}

/// Curvature data at one node.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeCurvature {
    /// Principal curvatures, ascending, with multiplicities (length `n − 1`).
    pub kappa: Vec<f64>,
    /// Eigenvalues in frame order. On axisymmetric grids these are the
    /// meridian curvature and the latitude curvature (multiplicity `n − 2`).
    pub frame_kappa: [f64; 2],
    /// Induced metric and second fundamental form in the orthonormal frame of
    /// the round fiber metric.
    pub metric: [[f64; 2]; 2],
    pub sff: [[f64; 2]; 2],
    /// Support function `u = ⟨X, ν⟩ = λ/v`.
    pub support: f64,
    /// `⟨∂_r, ν⟩ = 1/v`.
    pub radial_normal: f64,
    /// Area weight `sqrt(det g)` times the fiber weight.
    pub dmu: f64,
    /// Component of `ξ = X − uν` along the unit meridian direction
    /// (axisymmetric grids); `|ξ|` on full grids.
    pub xi: f64,
    pub warp: Warp,
    /// Radial Ricci coefficient `R(r)` at this node.
    pub ricci: f64,
}

impl NodeCurvature {
    pub fn curvature_vector(&self) -> CurvatureVector {
        CurvatureVector::new(self.kappa.clone())
    }

    pub fn sigma(&self, k: usize) -> f64 {
        sigma(k, &CurvatureVector::new(self.kappa.clone()))
    }
}

/// Per-node curvature data of a [`GraphSurface`].
#[derive(Clone, Debug)]
pub struct CurvatureField {
    grid: Arc<FiberGrid>,
    pub nodes: Vec<NodeCurvature>,
}

impl CurvatureField {
    pub fn grid(&self) -> &FiberGrid {
        &self.grid
    }

    pub fn ambient_dim(&self) -> usize {
        self.grid.ambient_dim()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `σ_k` at every node.
    pub fn sigma(&self, k: usize) -> Vec<f64> {
        self.nodes.iter().map(|c| c.sigma(k)).collect()
    }

    /// `∫_Σ f dμ` with deterministic mirror-paired summation.
    pub fn integrate(&self, f: impl Fn(&NodeCurvature) -> f64) -> f64 {
        paired_sum(&self.grid, |i| f(&self.nodes[i]) * self.nodes[i].dmu)
    }

    /// Like [`CurvatureField::integrate`], with the node index passed along.
    pub fn integrate_indexed(&self, f: impl Fn(usize, &NodeCurvature) -> f64) -> f64 {
        paired_sum(&self.grid, |i| f(i, &self.nodes[i]) * self.nodes[i].dmu)
    }

    /// Total area of `Σ`.
    pub fn area(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    /// CSV with columns `theta[,psi],r,v,kappa_1..kappa_{n-1},u,dmu`.
    pub fn to_csv(&self, surface: &GraphSurface) -> String {
        let n = self.ambient_dim();
        let full = self.grid.mode() == GridMode::FullS2;
        let mut out = String::from("theta");
        if full {
            out.push_str(",psi");
        }
        out.push_str(",r,v");
        for i in 1..n {
            let _ = write!(out, ",kappa_{i}");
        }
        out.push_str(",u,dmu\n");
        for (i, c) in self.nodes.iter().enumerate() {
            let (t, p) = self.grid.coords(i);
            let mut cells = vec![fmt_real(t)];
            if full {
                cells.push(fmt_real(p));
            }
            cells.push(fmt_real(surface.r.values()[i]));
            cells.push(fmt_real(surface.v.values()[i]));
            cells.extend(c.kappa.iter().map(|&k| fmt_real(k)));
            cells.push(fmt_real(c.support));
            cells.push(fmt_real(c.dmu));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Eigenvalues of the symmetric-definite 2×2 pencil `(h, g)`, ascending.
pub fn pencil_eigenvalues(h: &[[f64; 2]; 2], g: &[[f64; 2]; 2]) -> [f64; 2] {
    // det(h − κ g) = a κ² − b κ + c
    let a = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let b = g[0][0] * h[1][1] + g[1][1] * h[0][0] - g[0][1] * h[1][0] - g[1][0] * h[0][1];
    let c = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let mid = b / (2.0 * a);
    let disc = (mid * mid - c / a).max(0.0).sqrt();
    [mid - disc, mid + disc]
}

/// Metric, second fundamental form and principal curvatures at every node.
pub fn second_fundamental_form(s: &GraphSurface) -> Result<CurvatureField> {
    let grid = &s.grid;
    let n = grid.ambient_dim();
    let weights = grid.weights();
    let einstein = s.profile.einstein_constant();
    let mut nodes = Vec::with_capacity(grid.len());
    for (i, (d, w)) in s.derivs.iter().zip(&s.warp).enumerate() {
        let v = s.v.values()[i];
        let lam = w.lambda;
        let [p1, p2] = d.grad;
        let metric = [
            [lam * lam * (1.0 + p1 * p1), lam * lam * p1 * p2],
            [lam * lam * p1 * p2, lam * lam * (1.0 + p2 * p2)],
        ];
        let a = w.dlambda / (v * lam);
        let c = lam / v;
        let sff = [
            [a * metric[0][0] - c * d.hess[0][0], a * metric[0][1] - c * d.hess[0][1]],
            [a * metric[1][0] - c * d.hess[1][0], a * metric[1][1] - c * d.hess[1][1]],
        ];
        let frame_kappa = match grid.mode() {
            GridMode::Axisym => [sff[0][0] / metric[0][0], sff[1][1] / metric[1][1]],
            GridMode::FullS2 => pencil_eigenvalues(&sff, &metric),
        };
        if !(frame_kappa[0].is_finite() && frame_kappa[1].is_finite()) {
            return Err(Error::PoleSingularity { node: i });
        }
        let mut kappa = Vec::with_capacity(n - 1);
        kappa.push(frame_kappa[0]);
        kappa.extend(std::iter::repeat_n(frame_kappa[1], n - 2));
        kappa.sort_by(f64::total_cmp);
        let xi = match grid.mode() {
            GridMode::Axisym => lam * p1 / v,
            GridMode::FullS2 => lam * (p1 * p1 + p2 * p2).sqrt() / v,
        };
        nodes.push(NodeCurvature {
            kappa,
            frame_kappa,
            metric,
            sff,
            support: lam / v,
            radial_normal: 1.0 / v,
            dmu: lam.powi(n as i32 - 1) * v * weights[i],
            xi,
            warp: *w,
            ricci: ricci_coefficient_from(n, einstein, w),
        });
    }
    Ok(CurvatureField {
        grid: Arc::clone(&s.grid),
        nodes,
    })
}

/// Outcome of the maximum-principle check at the highest point of `Σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticPointReport {
    pub node: usize,
    /// Polar angle of the located maximum.
    pub theta: f64,
    pub r: f64,
    pub min_kappa: f64,
    /// `λ'/λ` at the maximum.
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
    /// Sup-norm residual of the height-function Hessian identity over
    /// interior nodes; axisymmetric grids only.
    pub hessian_residual: Option<f64>,
}

impl std::fmt::Display for EllipticPointReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "argmax node     {}", self.node)?;
        writeln!(f, "theta at max    {}", fmt_real(self.theta))?;
        writeln!(f, "r at max        {}", fmt_real(self.r))?;
        writeln!(f, "min kappa       {}", fmt_real(self.min_kappa))?;
        writeln!(f, "lambda'/lambda  {}", fmt_real(self.bound))?;
        writeln!(f, "margin          {}", fmt_real(self.margin))?;
        match self.hessian_residual {
            Some(res) => writeln!(f, "hessian residual {}", fmt_real(res))?,
            None => writeln!(f, "hessian residual skipped (full-s2 grid)")?,
        }
        write!(f, "elliptic point  {}", if self.pass { "yes" } else { "no" })
    }
}

/// Checks `min κ_i ≥ λ'/λ − tol` at the highest point of `Σ`, and evaluates
/// the residual of `∇²h + (λ'/λ) ∇h ⊗ ∇h − (1/λ)(λ' − u κ_i) δ_ij` for the
/// height `h = r`.
///
/// On axisymmetric grids the maximum is located by a parabola through the
/// largest node and its neighbours, and `r` and the curvatures are
/// interpolated there. Full-S² grids use the first largest node.
pub fn height_hessian_at_max(s: &GraphSurface, c: &CurvatureField, tol: f64) -> EllipticPointReport {
    let r = s.r.values();
    let node = (0..r.len()).fold(0, |best, i| if r[i] > r[best] { i } else { best });
    let (theta, r_max, kappa) = match s.grid.mode() {
        GridMode::Axisym => {
            let h = s.grid.dtheta();
            let last = r.len() - 1;
            // Mirror ghosts at the poles.
            let (lo, hi) = (node.saturating_sub(1), (node + 1).min(last));
            let vertex = {
                let curv = r[lo] - 2.0 * r[node] + r[hi];
                if curv < 0.0 {
                    (h * (r[lo] - r[hi]) / (2.0 * curv)).clamp(-0.5 * h, 0.5 * h)
                } else {
                    0.0
                }
            };
            let interp = |f: &dyn Fn(usize) -> f64| {
                let (a, b, d) = (f(lo), f(node), f(hi));
                b + vertex * (d - a) / (2.0 * h) + vertex * vertex * (d - 2.0 * b + a) / (2.0 * h * h)
            };
            let k_t = interp(&|i| c.nodes[i].frame_kappa[0]);
            let k_a = interp(&|i| c.nodes[i].frame_kappa[1]);
            (s.grid.thetas()[node] + vertex, interp(&|i| r[i]), k_t.min(k_a))
        }
        GridMode::FullS2 => (s.grid.coords(node).0, r[node], c.nodes[node].kappa[0]),
    };
    let bound = s
        .profile
        .eval(r_max.min(s.profile.r_max()))
        .map(|w| w.slice_curvature())
        .unwrap_or(c.nodes[node].warp.slice_curvature());
    let margin = kappa - bound;
    EllipticPointReport {
        node,
        theta,
        r: r_max,
        min_kappa: kappa,
        bound,
        margin,
        pass: margin >= -tol,
        hessian_residual: match s.grid.mode() {
            GridMode::Axisym => Some(height_hessian_residual(s, c)),
            GridMode::FullS2 => None,
        },
    }
}

fn height_hessian_residual(s: &GraphSurface, c: &CurvatureField) -> f64 {
    let grid = &s.grid;
    let diffs = axisym_differences(s.r.values(), grid.dtheta());
    let count = grid.n_theta();
    let mut worst: f64 = 0.0;
    for k in 1..count - 1 {
        let (r1, r2) = diffs[k];
        let w = s.warp[k];
        let (lam, dlam) = (w.lambda, w.dlambda);
        let node = &c.nodes[k];
        let e = r1 * r1 + lam * lam;
        let de = 2.0 * r1 * (r2 + lam * dlam);
        let cot = grid.thetas()[k].cos() / grid.thetas()[k].sin();
        let dg_over_g = 2.0 * dlam * r1 / lam + 2.0 * cot;
        let hess_tt = (r2 - de * r1 / (2.0 * e)) / e;
        let hess_aa = dg_over_g * r1 / (2.0 * e);
        let u = node.support;
        let [k_t, k_a] = node.frame_kappa;
        let res_t = hess_tt + (dlam / lam) * r1 * r1 / e - (dlam - u * k_t) / lam;
        let res_a = hess_aa - (dlam - u * k_a) / lam;
        worst = worst.max(res_t.abs()).max(res_a.abs());
    }
    worst
}

/// Largest perturbation amplitude kept inside the domain around `r0`.
pub fn admissible_amplitude(r0: f64, r_max: f64) -> f64 {
    0.5 * r0.min(r_max - r0)
}

/// Cosine perturbation `r(θ) = r0 + Σ_ℓ c_ℓ cos(ℓθ)`, `ℓ = 1, 2, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub r0: f64,
    pub coeffs: Vec<f64>,
}

impl Perturbation {
    /// Random coefficients on modes `1..=modes` with `Σ|c_ℓ| = amplitude`.
    pub fn random(r0: f64, amplitude: f64, modes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let total: f64 = raw.iter().map(|c| c.abs()).sum();
        let coeffs = if total > 0.0 {
            raw.iter().map(|c| amplitude * c / total).collect()
        } else {
            vec![0.0; modes]
        };
        Self { r0, coeffs }
    }

    pub fn amplitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.r0
            + self
                .coeffs
                .iter()
                .enumerate()
                .map(|(l, c)| c * ((l + 1) as f64 * theta).cos())
                .sum::<f64>()
    }
}

/// Surfaces that can be generated from a short description.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceSpec {
    Slice { r0: f64 },
    Perturbed(Perturbation),
    /// Ellipsoid of revolution centred at the origin, `r = 1/sqrt(sin²θ/a² + cos²θ/c²)`.
    Ellipsoid { equatorial: f64, polar: f64 },
    /// Round sphere of the given radius whose centre sits at `offset` (Euclidean
    /// coordinates). Axisymmetric grids accept offsets along the polar axis only.
    OffCentreSphere { radius: f64, offset: [f64; 3] },
    /// Explicit nodal radii.
    Nodes(Vec<f64>),
}

impl SurfaceSpec {
    pub fn radii(&self, grid: &FiberGrid) -> Result<FiberField> {
        match self {
            SurfaceSpec::Slice { r0 } => Ok(FiberField::constant(grid.len(), *r0)),
            SurfaceSpec::Perturbed(p) => Ok(grid.sample(|t, _| p.eval(t))),
            SurfaceSpec::Ellipsoid { equatorial: a, polar: c } => {
                if !(*a > 0.0 && *c > 0.0) {
                    return Err(Error::InvalidSurface("ellipsoid axes must be positive".into()));
                }
                Ok(grid.sample(|t, _| 1.0 / ((t.sin() / a).powi(2) + (t.cos() / c).powi(2)).sqrt()))
            }
            SurfaceSpec::OffCentreSphere { radius, offset } => {
                let d2: f64 = offset.iter().map(|x| x * x).sum();
                if !(*radius > 0.0 && d2.sqrt() < *radius) {
                    return Err(Error::InvalidSurface(
                        "sphere must contain the origin in its interior".into(),
                    ));
                }
                if grid.mode() == GridMode::Axisym && (offset[0] != 0.0 || offset[1] != 0.0) {
                    return Err(Error::NotAxisymmetric);
                }
                Ok(grid.sample(|t, p| {
                    let dir = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
                    let proj: f64 = dir.iter().zip(offset).map(|(a, b)| a * b).sum();
                    proj + (radius * radius - d2 + proj * proj).sqrt()
                }))
            }
            SurfaceSpec::Nodes(values) => {
                if values.len() != grid.len() {
                    return Err(Error::FieldLength {
                        expected: grid.len(),
                        got: values.len(),
                    });
                }
                Ok(FiberField::new(values.clone()))
            }
        }
    }

    pub fn build(&self, profile: SharedProfile, grid: impl Into<Arc<FiberGrid>>) -> Result<GraphSurface> {
        let grid = grid.into();
        let r = self.radii(&grid)?;
        GraphSurface::new(profile, grid, r)
    }
}
