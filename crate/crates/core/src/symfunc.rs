//! Elementary symmetric functions of principal curvatures.
//!
//! `σ_k` is computed with the one-variable-at-a-time recurrence
//! `e_k ← e_k + κ_m·e_{k−1}`, which needs no divisions and is stable for
//! mixed-sign input. The Gårding cone `Γ_k^+` uses strict inequalities, so a
//! boundary point reports the lower cone level.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::quad::binomial;

/// Principal curvatures `κ ∈ R^{n−1}` at one point of a hypersurface in an
/// `n`-dimensional ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureVector(Vec<f64>);

impl CurvatureVector {
    pub fn new(kappa: Vec<f64>) -> Self {
        Self(kappa)
    }

    /// All `n − 1` curvatures equal to `c`.
    pub fn umbilic(n: usize, c: f64) -> Self {
        Self(vec![c; n - 1])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ambient dimension `n = len + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.0.len() + 1
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|k| k.is_finite())
    }

    /// All `σ_0..σ_{n−1}` in one pass.
    pub fn all_sigmas(&self) -> Vec<f64> {
        elementary_symmetric(self.0.iter().copied(), self.0.len())
    }
}

impl From<Vec<f64>> for CurvatureVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

fn elementary_symmetric<I: Iterator<Item = f64>>(values: I, max_k: usize) -> Vec<f64> {
    let mut e = vec![0.0; max_k + 1];
    e[0] = 1.0;
    let mut seen = 0;
    for x in values {
        seen += 1;
        for k in (1..=seen.min(max_k)).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e
}

/// `σ_k(κ)`, with `σ_0 = 1` and `σ_k = 0` for `k > n − 1`.
pub fn sigma(k: usize, kappa: &CurvatureVector) -> f64 {
    if k > kappa.len() {
        return 0.0;
    }
    elementary_symmetric(kappa.0.iter().copied(), k)[k]
}

/// `σ_{k;i}(κ)`: `σ_k` of `κ` with entry `i` removed.
pub fn sigma_truncated(k: usize, i: usize, kappa: &CurvatureVector) -> Result<f64> {
    if i >= kappa.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: kappa.len(),
        });
    }
    if k + 1 > kappa.len() {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let rest = kappa
        .0
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &x)| x);
    Ok(elementary_symmetric(rest, k)[k])
}

/// All truncated `σ_{k;i}` for `i = 0..n−2`.
fn truncated_all(k: usize, kappa: &CurvatureVector) -> Vec<f64> {
    (0..kappa.len())
        .map(|i| sigma_truncated(k, i, kappa).expect("index in range"))
        .collect()
}

/// Diagonal of the Newton tensor `T^{(p)} = ∂σ_p/∂h` in the principal frame:
/// `T^{(p)}_{ii} = σ_{p−1;i}(κ)`.
pub fn newton_tensor_diag(p: usize, kappa: &CurvatureVector) -> Result<Vec<f64>> {
    let n = kappa.ambient_dim();
    if p == 0 || p > n - 1 {
        return Err(Error::InvalidOrder { p, n });
    }
    Ok(truncated_all(p - 1, kappa))
}

/// Largest `k` with `σ_1, …, σ_k > 0`; zero when `σ_1 ≤ 0`.
pub fn cone_level(kappa: &CurvatureVector) -> usize {
    kappa
        .all_sigmas()
        .iter()
        .skip(1)
        .take_while(|&&s| s > 0.0)
        .count()
}

/// Right-hand side `(j/(n−j))·C(n−1, j)^{1/j}·σ_j^{(j−1)/j}` of the
/// Newton–Maclaurin inequality.
pub fn maclaurin_bound(j: usize, n: usize, sigma_j: f64) -> f64 {
    let jf = j as f64;
    jf / (n as f64 - jf) * binomial(n - 1, j).powf(1.0 / jf) * sigma_j.max(0.0).powf((jf - 1.0) / jf)
}

/// Margins `M_j = σ_{j−1} − (j/(n−j))·C(n−1,j)^{1/j}·σ_j^{(j−1)/j}` for
/// `1 ≤ j ≤ k`.
///
/// Only defined on `Γ_k^+`; also verifies that `σ_{k−1;i} > 0` for every `i`,
/// the other half of the classical statement. Returns [`Error::NotInCone`]
/// when either fails the precondition.
pub fn maclaurin_margins(kappa: &CurvatureVector, k: usize) -> Result<Vec<f64>> {
    let n = kappa.ambient_dim();
    if k == 0 || k > n - 1 {
        return Err(Error::InvalidOrder { p: k, n });
    }
    let level = cone_level(kappa);
    if level < k {
        return Err(Error::NotInCone { k, level });
    }
    let sig = kappa.all_sigmas();
    let margins = (1..=k)
        .map(|j| sig[j - 1] - maclaurin_bound(j, n, sig[j]))
        .collect();
    if truncated_all(k - 1, kappa).iter().any(|&t| t <= 0.0) {
        return Err(Error::NotInCone { k, level });
    }
    Ok(margins)
}

/// Draws `κ ∈ Γ_k^+` by rejection from independent `N(mean, sd²)` entries.
///
/// `mean` should be positive, otherwise acceptance becomes rare for large `k`.
pub fn sample_in_cone<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, mean: f64, sd: f64) -> CurvatureVector {
    let normal = Normal::new(mean, sd).expect("finite, non-negative spread");
    loop {
        let kappa = CurvatureVector::new((0..n - 1).map(|_| normal.sample(rng)).collect());
        if cone_level(&kappa) >= k {
            return kappa;
        }
    }
}

/// Tolerance scale `max(1, |σ_{j−1}|, bound_j)` for margin `M_j`.
pub fn margin_scale(kappa: &CurvatureVector, j: usize) -> f64 {
    let n = kappa.ambient_dim();
    let sig = kappa.all_sigmas();
    1f64.max(sig[j - 1].abs()).max(maclaurin_bound(j, n, sig[j]))
}

/// Symmetric-function summary of one curvature vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SymReport {
    pub kappa: CurvatureVector,
    /// `σ_0..σ_{n−1}`.
    pub sigmas: Vec<f64>,
    pub cone_level: usize,
    /// `M_1..M_level`, empty when the level is zero.
    pub margins: Vec<f64>,
}

impl SymReport {
    pub fn new(kappa: &CurvatureVector) -> Self {
        let level = cone_level(kappa);
        let margins = if level > 0 {
            maclaurin_margins(kappa, level).unwrap_or_default()
        } else {
            Vec::new()
        };
        Self {
            kappa: kappa.clone(),
            sigmas: kappa.all_sigmas(),
            cone_level: level,
            margins,
        }
    }

    /// `σ_{k;i}` on demand.
    pub fn truncated(&self, k: usize, i: usize) -> Result<f64> {
        sigma_truncated(k, i, &self.kappa)
    }

    pub fn csv_header(n: usize) -> String {
        let mut h = String::new();
        for i in 1..n {
            let _ = write!(h, "kappa_{i},");
        }
        for k in 0..n {
            let _ = write!(h, "sigma_{k},");
        }
        h.push_str("cone_level");
        for j in 1..n {
            let _ = write!(h, ",margin_{j}");
        }
        h
    }

    /// One CSV row; missing margins are left empty.
    pub fn csv_row(&self) -> String {
        use crate::export::fmt_real as f;
        let n = self.kappa.ambient_dim();
        let mut row = String::new();
        for k in self.kappa.as_slice() {
            let _ = write!(row, "{},", f(*k));
        }
        for s in &self.sigmas {
            let _ = write!(row, "{},", f(*s));
        }
        let _ = write!(row, "{}", self.cone_level);
        for j in 1..n {
            row.push(',');
            if let Some(m) = self.margins.get(j - 1) {
                row.push_str(&f(*m));
            }
        }
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(v: &[f64]) -> CurvatureVector {
        CurvatureVector::new(v.to_vec())
    }

    #[test]
    fn sigma_small_example() {
        let k = kv(&[1.0, 2.0, 3.0]);
        assert_eq!(sigma(0, &k), 1.0);
        assert_eq!(sigma(1, &k), 6.0);
        assert_eq!(sigma(2, &k), 11.0);
        assert_eq!(sigma(3, &k), 6.0);
        assert_eq!(sigma(4, &k), 0.0);
        assert_eq!(sigma(9, &k), 0.0);
    }

    #[test]
    fn sigma_umbilic_is_binomial() {
        for n in 3..8 {
            let c = 0.7;
            let k = CurvatureVector::umbilic(n, c);
            for p in 0..n {
                let expected = binomial(n - 1, p) * c.powi(p as i32);
                assert!((sigma(p, &k) - expected).abs() < 1e-14 * expected.max(1.0));
            }
        }
    }

    #[test]
    fn truncated_examples() {
        let k = kv(&[1.0, 2.0, 3.0]);
        // Entry with value 2 sits at index 1.
        assert_eq!(sigma_truncated(2, 1, &k).unwrap(), 3.0);
        assert_eq!(sigma_truncated(1, 1, &k).unwrap(), 4.0);
        assert_eq!(sigma(2, &k), sigma_truncated(2, 1, &k).unwrap() + 2.0 * sigma_truncated(1, 1, &k).unwrap());
        assert_eq!(sigma_truncated(0, 2, &k).unwrap(), 1.0);
        assert_eq!(sigma_truncated(3, 0, &k).unwrap(), 0.0);
        assert!(matches!(sigma_truncated(1, 3, &k), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn truncated_umbilic() {
        let n = 6;
        let c = 1.3;
        let k = CurvatureVector::umbilic(n, c);
        for p in 0..n - 1 {
            let expected = binomial(n - 2, p) * c.powi(p as i32);
            assert!((sigma_truncated(p, 2, &k).unwrap() - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn newton_tensor_identities_small() {
        let k = kv(&[1.0, 2.0, 3.0]);
        let t = newton_tensor_diag(2, &k).unwrap();
        assert_eq!(t, vec![5.0, 4.0, 3.0]);
        assert_eq!(t.iter().sum::<f64>(), 12.0);
        let contraction: f64 = t.iter().zip(k.as_slice()).map(|(a, b)| a * b).sum();
        assert_eq!(contraction, 22.0);
        let t1 = newton_tensor_diag(1, &k).unwrap();
        assert_eq!(t1, vec![1.0, 1.0, 1.0]);
        assert!(newton_tensor_diag(0, &k).is_err());
        assert!(newton_tensor_diag(4, &k).is_err());
    }

    #[test]
    fn cone_levels() {
        assert_eq!(cone_level(&kv(&[1.0, 2.0, 3.0])), 3);
        assert_eq!(cone_level(&kv(&[3.0, 1.0, -1.0])), 1);
        // σ_2 = 4 − 2 − 2 = 0 sits on the boundary.
        assert_eq!(cone_level(&kv(&[2.0, 2.0, -1.0])), 1);
        assert_eq!(cone_level(&kv(&[-1.0, 0.5, 0.2])), 0);
    }

    #[test]
    fn maclaurin_examples() {
        let c = CurvatureVector::umbilic(5, 0.4);
        for m in maclaurin_margins(&c, 4).unwrap() {
            assert!(m.abs() < 1e-14, "{m}");
        }
        let k = kv(&[1.0, 2.0, 3.0]);
        let m = maclaurin_margins(&k, 3).unwrap();
        assert_eq!(m[0], 0.0);
        assert!((m[1] - (6.0 - 33f64.sqrt())).abs() < 1e-14);
        assert!((m[1] - 0.255_437_353_461_4).abs() < 1e-12);
    }

    #[test]
    fn maclaurin_requires_cone() {
        let k = kv(&[3.0, 1.0, -1.0]);
        assert!(maclaurin_margins(&k, 1).is_ok());
        assert!(matches!(
            maclaurin_margins(&k, 2),
            Err(Error::NotInCone { k: 2, level: 1 })
        ));
    }

    #[test]
    fn report_row_shape() {
        let r = SymReport::new(&kv(&[1.0, 2.0, 3.0]));
        assert_eq!(r.cone_level, 3);
        assert_eq!(r.sigmas, vec![1.0, 6.0, 11.0, 6.0]);
        let header_cols = SymReport::csv_header(4).split(',').count();
        assert_eq!(r.csv_row().split(',').count(), header_cols);
        assert_eq!(r.truncated(1, 0).unwrap(), 5.0);
    }
}
