//! Dense complex SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns are orthogonalised pairwise in a fixed cyclic order until every
//! pair satisfies `|aᵢᴴaⱼ| ≤ tol·‖aᵢ‖‖aⱼ‖`. The sweep order never depends on
//! the data, so results are bit-reproducible.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOL: f64 = 4.0 * f64::EPSILON;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin SVD `A = U·diag(σ)·Vᴴ` with `σ` non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
    pub sweeps: usize,
}

impl Svd {
    /// `U·diag(σ)·Vᴴ`.
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singular_values.len();
        let us = CMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.singular_values[j]);
        us.matmul(&self.v.conj_transpose())
    }
}

struct JacobiOutcome {
    columns: Vec<Vec<Complex64>>,
    right: Option<Vec<Vec<Complex64>>>,
    sweeps: usize,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // aᴴb
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

fn energy(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Plane rotation of the column pair `(x, y)` that zeroes `xᴴy`, where
/// `xᴴy = |xᴴy|·phase` before the update.
fn rotate(x: &mut [Complex64], y: &mut [Complex64], c: f64, s: f64, phase: Complex64) {
    // y ← y·e^{−iφ}, then a real rotation mixing x and y.
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let yp = *yi * phase.conj();
        let xn = *xi * c - yp * s;
        let yn = *xi * s + yp * c;
        *xi = xn;
        *yi = yn;
    }
}

fn one_sided_jacobi(mut columns: Vec<Vec<Complex64>>, want_right: bool) -> Result<JacobiOutcome> {
    let n = columns.len();
    let mut right = want_right.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect::<Vec<_>>()
    });
    let mut norms: Vec<f64> = columns.iter().map(|c| energy(c)).collect();

    let mut sweeps = 0;
    let mut worst = 0.0_f64;
    loop {
        if sweeps == MAX_SWEEPS {
            let sig: Vec<f64> = norms.iter().map(|e| e.sqrt()).collect();
            let max = sig.iter().cloned().fold(0.0, f64::max);
            let min = sig.iter().cloned().fold(f64::INFINITY, f64::min);
            return Err(Error::SvdNonConvergence {
                sweeps,
                off_diagonal: worst,
                condition: if min > 0.0 { max / min } else { f64::INFINITY },
            });
        }
        sweeps += 1;
        worst = 0.0;
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = norms[i];
                let beta = norms[j];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = inner(&columns[i], &columns[j]);
                let g = gamma.norm();
                let ratio = g / (alpha.sqrt() * beta.sqrt());
                if !(ratio > ORTHOGONALITY_TOL) {
                    continue;
                }
                worst = worst.max(ratio);
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                let (lo, hi) = columns.split_at_mut(j);
                rotate(&mut lo[i], &mut hi[0], c, s, phase);
                if let Some(v) = right.as_mut() {
                    let (lo, hi) = v.split_at_mut(j);
                    rotate(&mut lo[i], &mut hi[0], c, s, phase);
                }
                norms[i] = energy(&columns[i]);
                norms[j] = energy(&columns[j]);
            }
        }
        if !rotated {
            break;
        }
    }
    Ok(JacobiOutcome {
        columns,
        right,
        sweeps,
    })
}

fn check_input(m: &CMatrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::validation("matrix", "entries must be finite"));
    }
    Ok(())
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort keeps the cyclic column order among ties.
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// Singular values in non-increasing order; `min(rows, cols)` of them.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let work = if m.rows >= m.cols { m.clone() } else { m.conj_transpose() };
    let columns = (0..work.cols).map(|j| work.column(j)).collect();
    let outcome = one_sided_jacobi(columns, false)?;
    let mut sigma: Vec<f64> = outcome.columns.iter().map(|c| energy(c).sqrt()).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    Ok(sigma)
}

/// Full thin SVD with singular vectors.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    check_input(m)?;
    if m.rows < m.cols {
        // A = U Σ Vᴴ  ⇔  Aᴴ = V Σ Uᴴ
        let t = svd(&m.conj_transpose())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
            sweeps: t.sweeps,
        });
    }
    let columns = (0..m.cols).map(|j| m.column(j)).collect();
    let outcome = one_sided_jacobi(columns, true)?;
    let right = outcome.right.expect("right vectors requested");
    let sigma: Vec<f64> = outcome.columns.iter().map(|c| energy(c).sqrt()).collect();
    let order = sorted_order(&sigma);

    let k = m.cols;
    let mut u = CMatrix::zeros(m.rows, k);
    let mut v = CMatrix::zeros(k, k);
    let mut values = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        let s = sigma[src];
        values.push(s);
        for i in 0..m.rows {
            u[(i, dst)] = if s > 0.0 { outcome.columns[src][i] / s } else { ZERO };
        }
        for i in 0..k {
            v[(i, dst)] = right[src][i];
        }
    }
    Ok(Svd {
        u,
        singular_values: values,
        v,
        sweeps: outcome.sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| c(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0)))
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(singular_values(&CMatrix::identity(2)).unwrap(), vec![1.0, 1.0]);
        assert_eq!(singular_values(&CMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn anti_diagonal_has_unit_singular_values() {
        for n in [1, 2, 5, 16, 33] {
            let m = CMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let s = singular_values(&m).unwrap();
            assert_eq!(s.len(), n);
            for v in s {
                assert!((v - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[1,1],[1,0]] has singular values φ and 1/φ.
        let m = CMatrix::from_fn(2, 2, |i, j| if i + j <= 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let s = singular_values(&m).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s[0] - phi).abs() < 1e-15);
        assert!((s[1] - 1.0 / phi).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut rng = SeededRng::new(5);
        for (r, k) in [(6, 6), (9, 4), (4, 9), (20, 20)] {
            let m = random_matrix(&mut rng, r, k);
            let d = svd(&m).unwrap();
            let back = d.reconstruct();
            let mut diff = back.clone();
            for i in 0..r {
                for j in 0..k {
                    diff[(i, j)] -= m[(i, j)];
                }
            }
            assert!(diff.frobenius_norm() <= 1e-12 * m.frobenius_norm(), "{r}x{k}");
            let vhv = d.v.conj_transpose().matmul(&d.v);
            let eye = CMatrix::identity(vhv.rows());
            let mut e = vhv.clone();
            for i in 0..e.rows() {
                for j in 0..e.cols() {
                    e[(i, j)] -= eye[(i, j)];
                }
            }
            assert!(e.frobenius_norm() < 1e-12);
            assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn matches_nalgebra_on_random_matrices() {
        let mut rng = SeededRng::new(9);
        for n in [3, 8, 17] {
            let m = random_matrix(&mut rng, n, n);
            let ours = singular_values(&m).unwrap();
            let nm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
            let mut theirs: Vec<f64> = nm.singular_values().iter().copied().collect();
            theirs.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() <= 1e-12 * theirs[0], "{a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(singular_values(&m).is_err());
    }

    #[test]
    fn deterministic_output() {
        let mut rng = SeededRng::new(21);
        let m = random_matrix(&mut rng, 12, 12);
        let a = singular_values(&m).unwrap();
        let b = singular_values(&m).unwrap();
        assert_eq!(
            a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }
}
