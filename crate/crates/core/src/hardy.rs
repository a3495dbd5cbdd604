//! Truncated Hardy-space series and the norms used throughout the crate.
//!
//! A [`HardySeries`] of degree `N` stores the Fourier coefficients
//! `û(0), …, û(N)` of `u(θ) = Σ û(k) e^{ikθ}`. Negative frequencies are zero
//! by construction. Trailing zero coefficients are kept: the declared degree
//! is part of the value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, MAX_EXP_ARG};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct HardySeries {
    coeffs: Vec<Complex64>,
}

/// Wire form: `{"coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawSeries {
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<RawSeries> for HardySeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        HardySeries::new(raw.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<HardySeries> for RawSeries {
    fn from(u: HardySeries) -> Self {
        RawSeries {
            coeffs: u.coeffs.into_iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl HardySeries {
    /// Builds a series from `û(0..=N)`. Fails on an empty vector or non-finite entries.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::validation("coeffs", "a series needs at least one coefficient"));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::validation("coeffs", format!("coefficient {k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    /// Builds a series from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    /// `c·e^{ikθ}` as a series of degree `max(k, degree)`.
    pub fn monomial(k: usize, c: Complex64, degree: usize) -> Self {
        let mut u = Self::zeros(degree.max(k));
        u.coeffs[k] = c;
        u
    }

    /// Constructs from coefficients already known to be finite.
    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `û(k)`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Zero-pads or truncates to the given degree (truncation is `P_N`).
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&z| z * c).collect(),
        }
    }

    /// Largest index with a non-zero coefficient, if any.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.re != 0.0 || c.im != 0.0)
    }

    /// `(Σ|û(k)|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        compensated_sum(self.coeffs.iter().map(|c| c.norm_sqr())).sqrt()
    }

    /// `Σ k|û(k)|²`, the squared `H^{1/2}` seminorm (not square-rooted).
    pub fn momentum(&self) -> f64 {
        compensated_sum(self.coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.norm_sqr()))
    }

    /// `(Σ (k^{2s}+1)|û(k)|²)^{1/2}` with `0^{2s} = 0` for `s > 0` and `0⁰ = 1`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        assert!(s >= 0.0, "hs_norm requires s >= 0");
        compensated_sum(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| ((k as f64).powf(2.0 * s) + 1.0) * c.norm_sqr()),
        )
        .sqrt()
    }

    /// Wiener norm `Σ|û(k)|`.
    pub fn wiener_norm(&self) -> f64 {
        compensated_sum(self.coeffs.iter().map(|c| c.norm()))
    }

    /// `Σ e^{σk^γ}|û(k)|`. With `σ = 0` this is bit-identical to [`wiener_norm`](Self::wiener_norm).
    ///
    /// Fails with [`Error::Range`] when a weight overflows against a non-zero
    /// coefficient; zero coefficients contribute nothing regardless of weight.
    pub fn gevrey_wiener_norm(&self, order: GevreyOrder) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            let modulus = c.norm();
            if modulus == 0.0 {
                terms.push(0.0);
                continue;
            }
            let exponent = order.exponent(k);
            let term = exponent.exp() * modulus;
            if exponent > MAX_EXP_ARG || !term.is_finite() {
                return Err(Error::Range { mode: k, exponent });
            }
            terms.push(term);
        }
        Ok(compensated_sum(terms))
    }

    /// Norm of `Aˢe^{σA}u` in `L²` with `A = (I−Δ)^{1/2}`:
    /// `(Σ (1+k²)^s e^{2σ(1+k²)^{1/2}} |û(k)|²)^{1/2}`.
    pub fn classical_gevrey_norm(&self, s: f64, sigma: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::validation("s", "must be non-negative"));
        }
        if !(sigma >= 0.0) {
            return Err(Error::validation("sigma", "must be non-negative"));
        }
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            let energy = c.norm_sqr();
            if energy == 0.0 {
                terms.push(0.0);
                continue;
            }
            let jk2 = 1.0 + (k as f64) * (k as f64);
            let exponent = 2.0 * sigma * jk2.sqrt();
            let term = jk2.powf(s) * exponent.exp() * energy;
            if exponent > MAX_EXP_ARG || !term.is_finite() {
                return Err(Error::Range { mode: k, exponent });
            }
            terms.push(term);
        }
        Ok(compensated_sum(terms).sqrt())
    }

    /// Exact Cauchy product; the result has degree `N_u + N_v`.
    pub fn multiply(&self, other: &HardySeries) -> HardySeries {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        HardySeries { coeffs: out }
    }

    /// `|u|²` as a two-sided slice of half-width `N`, by exact convolution.
    pub fn modulus_squared(&self) -> LaurentSlice {
        let n = self.degree();
        let mut slice = LaurentSlice::zeros(n);
        for d in 0..=n {
            // w(d) = Σ_j û(j+d) conj(û(j)); w(−d) = conj(w(d)).
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=(n - d) {
                acc += self.coeffs[j + d] * self.coeffs[j].conj();
            }
            slice.set(d as isize, acc);
            slice.set(-(d as isize), acc.conj());
        }
        slice
    }
}

/// Gevrey parameters `(σ, γ)` with `σ ≥ 0` and `0 < γ ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyOrder {
    pub sigma: f64,
    pub gamma: f64,
}

impl GevreyOrder {
    pub fn new(sigma: f64, gamma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::validation("sigma", "must be finite and non-negative"));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::validation("gamma", "must lie in (0, 1]"));
        }
        Ok(Self { sigma, gamma })
    }

    /// The analytic class `γ = 1`.
    pub fn analytic(sigma: f64) -> Result<Self> {
        Self::new(sigma, 1.0)
    }

    /// `σ k^γ`.
    pub fn exponent(&self, k: usize) -> f64 {
        if self.gamma == 1.0 {
            self.sigma * k as f64
        } else {
            self.sigma * (k as f64).powf(self.gamma)
        }
    }
}

/// Two-sided coefficients `v(−M..=M)`; the intermediate products before projection.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSlice {
    coeffs: Vec<Complex64>,
    halfwidth: usize,
}

impl LaurentSlice {
    pub fn zeros(halfwidth: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * halfwidth + 1],
            halfwidth,
        }
    }

    /// Builds from a vector ordered `v(−M), …, v(M)`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::validation("coeffs", "a Laurent slice needs an odd number of entries"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::validation("coeffs", "entries must be finite"));
        }
        let halfwidth = coeffs.len() / 2;
        Ok(Self { coeffs, halfwidth })
    }

    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    /// `v(k)`, zero outside `−M..=M`.
    pub fn get(&self, k: isize) -> Complex64 {
        let idx = k + self.halfwidth as isize;
        if idx < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(idx as usize).copied().unwrap_or_default()
    }

    pub fn set(&mut self, k: isize, value: Complex64) {
        let idx = k + self.halfwidth as isize;
        assert!(idx >= 0 && (idx as usize) < self.coeffs.len(), "mode {k} outside slice");
        self.coeffs[idx as usize] = value;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Product with a Hardy series, as a slice of half-width `M + N`.
    pub fn multiply_series(&self, u: &HardySeries) -> LaurentSlice {
        let m = self.halfwidth as isize;
        let n = u.degree() as isize;
        let mut out = LaurentSlice::zeros((m + n) as usize);
        for d in -m..=m {
            let w = self.get(d);
            if w.re == 0.0 && w.im == 0.0 {
                continue;
            }
            for (j, c) in u.coeffs().iter().enumerate() {
                let k = d + j as isize;
                let idx = (k + m + n) as usize;
                out.coeffs[idx] += w * c;
            }
        }
        out
    }

    /// `P_N ∘ Π`: keep modes `0..=N`, drop negative modes and modes above `N`.
    pub fn szego_project(&self, degree: usize) -> Result<HardySeries> {
        if degree > self.halfwidth {
            return Err(Error::Precondition(format!(
                "projection degree {degree} exceeds slice half-width {}",
                self.halfwidth
            )));
        }
        let coeffs = (0..=degree as isize).map(|k| self.get(k)).collect();
        Ok(HardySeries { coeffs })
    }
}

/// Free-function form of [`LaurentSlice::szego_project`].
pub fn szego_project(w: &LaurentSlice, degree: usize) -> Result<HardySeries> {
    w.szego_project(degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(v: &[(f64, f64)]) -> HardySeries {
        HardySeries::new(v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn l2_norm_examples() {
        assert_eq!(HardySeries::zeros(2).l2_norm(), 0.0);
        assert_eq!(series(&[(3.0, 0.0), (0.0, 4.0)]).l2_norm(), 5.0);
        assert_eq!(HardySeries::from_real(&[1.0; 4]).unwrap().l2_norm(), 2.0);
    }

    #[test]
    fn momentum_examples() {
        assert_eq!(HardySeries::from_real(&[7.0]).unwrap().momentum(), 0.0);
        assert_eq!(HardySeries::from_real(&[0.0, 1.0]).unwrap().momentum(), 1.0);
        assert_eq!(HardySeries::from_real(&[1.0, 2.0, 3.0]).unwrap().momentum(), 22.0);
    }

    #[test]
    fn hs_norm_examples() {
        let one = HardySeries::from_real(&[1.0]).unwrap();
        for s in [0.0, 0.3, 1.0, 2.5] {
            let expected = if s == 0.0 { 2f64.sqrt() } else { 1.0 };
            assert_eq!(one.hs_norm(s), expected, "s = {s}");
        }
        assert_relative_eq!(
            HardySeries::from_real(&[0.0, 1.0]).unwrap().hs_norm(1.0),
            2f64.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            HardySeries::from_real(&[0.0, 0.0, 2.0]).unwrap().hs_norm(0.5),
            2.0 * 3f64.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn wiener_norm_examples() {
        assert_eq!(series(&[(2.0, 0.0), (0.0, 3.0)]).wiener_norm(), 5.0);
        let eps = 0.125;
        assert_eq!(HardySeries::from_real(&[eps, 1.0]).unwrap().wiener_norm(), 1.0 + eps);
        assert_eq!(HardySeries::zeros(5).wiener_norm(), 0.0);
    }

    #[test]
    fn gevrey_wiener_norm_examples() {
        let u = HardySeries::from_real(&[1.0, 1.0]).unwrap();
        let g = u.gevrey_wiener_norm(GevreyOrder::new(1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(g, 1.0 + std::f64::consts::E, max_relative = 1e-15);

        let v = HardySeries::from_real(&[0.0, 1.0]).unwrap();
        let g = v.gevrey_wiener_norm(GevreyOrder::new(2.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(g, 7.389_056_098_930_65, max_relative = 1e-14);

        let w = series(&[(0.3, -0.2), (1.0, 2.0), (-0.5, 0.1)]);
        for gamma in [0.25, 0.5, 1.0] {
            let g = w.gevrey_wiener_norm(GevreyOrder::new(0.0, gamma).unwrap()).unwrap();
            assert_eq!(g, w.wiener_norm());
        }
    }

    #[test]
    fn gevrey_overflow_names_mode() {
        let mut coeffs = vec![c(0.0, 0.0); 101];
        coeffs[100] = c(1.0, 0.0);
        let u = HardySeries::new(coeffs).unwrap();
        match u.gevrey_wiener_norm(GevreyOrder::analytic(8.0).unwrap()) {
            Err(Error::Range { mode, .. }) => assert_eq!(mode, 100),
            other => panic!("expected range error, got {other:?}"),
        }
        // Zero coefficients never trip the overflow guard.
        let z = HardySeries::zeros(100);
        assert_eq!(z.gevrey_wiener_norm(GevreyOrder::analytic(8.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn gevrey_order_validation() {
        assert!(GevreyOrder::new(-0.1, 1.0).is_err());
        assert!(GevreyOrder::new(0.1, 0.0).is_err());
        assert!(GevreyOrder::new(0.1, 1.5).is_err());
        assert!(GevreyOrder::new(f64::NAN, 1.0).is_err());
        assert!(GevreyOrder::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn classical_gevrey_examples() {
        let one = HardySeries::from_real(&[1.0]).unwrap();
        assert_eq!(one.classical_gevrey_norm(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(one.classical_gevrey_norm(1.0, 0.0).unwrap(), 1.0);
        let wave = HardySeries::from_real(&[0.0, 1.0]).unwrap();
        // e^{√2}
        assert_relative_eq!(
            wave.classical_gevrey_norm(0.0, 1.0).unwrap(),
            4.113_250_378_782_927,
            max_relative = 1e-14
        );
        let far = HardySeries::monomial(400, c(1.0, 0.0), 400);
        assert!(matches!(far.classical_gevrey_norm(0.0, 1.0), Err(Error::Range { mode: 400, .. })));
    }

    #[test]
    fn multiply_examples() {
        let a = HardySeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(a.multiply(&a), HardySeries::from_real(&[1.0, 2.0, 1.0]).unwrap());
        let u = series(&[(0.5, 1.0), (2.0, -1.0), (0.0, 3.0)]);
        assert_eq!(u.multiply(&HardySeries::from_real(&[1.0]).unwrap()), u);
        let z = HardySeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(z.multiply(&z), HardySeries::from_real(&[0.0, 0.0, 1.0]).unwrap());
    }

    #[test]
    fn szego_project_examples() {
        // v(−1)=5, v(0)=1, v(1)=2
        let w = LaurentSlice::new(vec![c(5.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(w.szego_project(1).unwrap(), HardySeries::from_real(&[1.0, 2.0]).unwrap());
        assert!(LaurentSlice::zeros(3).szego_project(2).unwrap().is_zero());
        let mut w = LaurentSlice::zeros(2);
        w.set(0, c(4.0, 0.0));
        w.set(1, c(0.0, 1.0));
        w.set(2, c(9.0, 0.0));
        assert_eq!(w.szego_project(1).unwrap(), series(&[(4.0, 0.0), (0.0, 1.0)]));
        assert!(w.szego_project(3).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(HardySeries::new(vec![]).is_err());
        assert!(HardySeries::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(HardySeries::new(vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(LaurentSlice::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn modulus_squared_of_one_plus_z() {
        let u = HardySeries::from_real(&[1.0, 1.0]).unwrap();
        let w = u.modulus_squared();
        assert_eq!(w.get(-1), c(1.0, 0.0));
        assert_eq!(w.get(0), c(2.0, 0.0));
        assert_eq!(w.get(1), c(1.0, 0.0));
    }

    #[test]
    fn json_wire_format() {
        let u = series(&[(0.1, -0.2), (1.0 / 3.0, 2.0e-300)]);
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.starts_with("{\"coeffs\":[["), "{text}");
        let back: HardySeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<HardySeries>("{\"coeffs\":[]}").is_err());
    }

    fn arb_series(max_degree: usize) -> impl Strategy<Value = HardySeries> {
        prop::collection::vec((-1.0e3..1.0e3f64, -1.0e3..1.0e3f64), 1..=max_degree + 1).prop_map(|v| {
            HardySeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    }

    fn arb_bits_series() -> impl Strategy<Value = HardySeries> {
        prop::collection::vec((any::<f64>(), any::<f64>()), 1..12).prop_map(|v| {
            let coeffs = v
                .into_iter()
                .map(|(a, b)| {
                    let fix = |x: f64| if x.is_finite() { x } else { 0.0 };
                    Complex64::new(fix(a), fix(b))
                })
                .collect();
            HardySeries::new(coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(u in arb_bits_series()) {
            let text = serde_json::to_string(&u).unwrap();
            let back: HardySeries = serde_json::from_str(&text).unwrap();
            for (a, b) in u.coeffs().iter().zip(back.coeffs()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }

        #[test]
        fn gevrey_norm_monotone_in_sigma(
            u in arb_series(24),
            s1 in 0.0..2.0f64,
            ds in 0.0..2.0f64,
            gamma in 0.05..=1.0f64,
        ) {
            let lo = u.gevrey_wiener_norm(GevreyOrder::new(s1, gamma).unwrap()).unwrap();
            let hi = u.gevrey_wiener_norm(GevreyOrder::new(s1 + ds, gamma).unwrap()).unwrap();
            prop_assert!(lo <= hi * (1.0 + 1e-15));
        }

        #[test]
        fn wiener_algebra(u in arb_series(16), v in arb_series(16)) {
            let lhs = u.multiply(&v).wiener_norm();
            let rhs = u.wiener_norm() * v.wiener_norm();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn hs_growth_chain(u in arb_series(40), tau in 0.01..3.0f64, s in 0.51..3.0f64) {
            let w = u.wiener_norm();
            let g = u.gevrey_wiener_norm(GevreyOrder::analytic(tau).unwrap()).unwrap();
            let lhs = u.hs_norm(s).powi(2);
            let rhs = w * ((-2.0 * s).exp() * (2.0 * s / tau).powf(2.0 * s) * g + w);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12), "lhs {} rhs {}", lhs, rhs);
        }
    }
}
