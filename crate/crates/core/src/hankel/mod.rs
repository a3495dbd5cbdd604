//! Hankel matrices of Hardy symbols and their trace (nuclear) norm.
//!
//! The Hankel operator `H_u(h) = Π(u·h̄)` is antilinear; in the monomial basis
//! it is represented by the complex symmetric matrix `Γ_{kℓ} = û(k+ℓ)`. Since
//! `H_u²` corresponds to `ΓΓᴴ`, the eigenvalues of `|H_u|` are the singular
//! values of `Γ`, and `Tr|H_u|` is the nuclear norm of `Γ`.

mod svd;

pub use svd::{singular_values, svd, CMatrix, Svd};

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::hardy::HardySeries;
use crate::numeric::compensated_sum;

/// Absolute slack (on `max(rhs, 1)`-normalised sides) tolerated in the inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-10;

/// `(N+1)×(N+1)` matrix with entry `(k, ℓ) = û(k+ℓ)`, zero for `k+ℓ > N`.
pub fn hankel_matrix(u: &HardySeries) -> CMatrix {
    let n = u.degree() + 1;
    CMatrix::from_fn(n, n, |k, l| u.coeff(k + l))
}

/// `Tr|H_u|`, the sum of the singular values of the Hankel matrix.
pub fn trace_norm(u: &HardySeries) -> Result<f64> {
    Ok(compensated_sum(singular_values(&hankel_matrix(u))?))
}

/// `Σ_k (Σ_ℓ |û(k+ℓ)|²)^{1/2}`, the upper bound of the double inequality.
pub fn column_energy(u: &HardySeries) -> f64 {
    let mut tail = 0.0;
    let mut roots = Vec::with_capacity(u.degree() + 1);
    for c in u.coeffs().iter().rev() {
        tail += c.norm_sqr();
        roots.push(tail.sqrt());
    }
    compensated_sum(roots)
}

/// `(Σ|û(2k)|, Σ|û(2k+1)|)`.
pub fn parity_sums(u: &HardySeries) -> (f64, f64) {
    let even = compensated_sum(u.coeffs().iter().step_by(2).map(|c| c.norm()));
    let odd = compensated_sum(u.coeffs().iter().skip(1).step_by(2).map(|c| c.norm()));
    (even, odd)
}

/// `√(s/(s−1))·(Σ_n (1+n)^{2s}|û(n)|²)^{1/2}` for `s > 1`.
pub fn hs_chain_bound(u: &HardySeries, s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::validation("s", format!("chain exponent must exceed 1, got {s}")));
    }
    let sum = compensated_sum(
        u.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| (1.0 + n as f64).powf(2.0 * s) * c.norm_sqr()),
    );
    Ok((s / (s - 1.0)).sqrt() * sum.sqrt())
}

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `(rhs − lhs) / max(rhs, 1)`.
    pub slack: f64,
    pub holds: bool,
}

impl InequalityCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let slack = (rhs - lhs) / rhs.abs().max(1.0);
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            holds: slack >= -INEQUALITY_SLACK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainValue {
    pub s: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelReport {
    pub singular_values: Vec<f64>,
    pub trace_norm: f64,
    pub wiener_half: f64,
    pub parity_even: f64,
    pub parity_odd: f64,
    pub column_energy: f64,
    pub hs_chain: Vec<ChainValue>,
    pub checks: Vec<InequalityCheck>,
}

impl HankelReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// Smallest slack over all checks (0 when there are none).
    pub fn min_slack(&self) -> f64 {
        self.checks.iter().map(|c| c.slack).reduce(f64::min).unwrap_or(0.0)
    }

    pub fn check(&self, name: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// CSV `i,sigma_i`.
    pub fn singular_values_csv(&self) -> String {
        let mut out = String::from("i,sigma_i\n");
        for (i, s) in self.singular_values.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", crate::export::fmt_f64(*s)));
        }
        out
    }
}

/// Singular spectrum, trace norm and all trace-norm bounds for one symbol.
pub fn hankel_report(u: &HardySeries, s_list: &[f64]) -> Result<HankelReport> {
    if let Some(&bad) = s_list.iter().find(|&&s| !(s > 1.0) || !s.is_finite()) {
        return Err(Error::validation("s_list", format!("every s must exceed 1, got {bad}")));
    }
    let singular_values = singular_values(&hankel_matrix(u))?;
    let trace = compensated_sum(singular_values.iter().copied());
    let wiener = u.wiener_norm();
    let (parity_even, parity_odd) = parity_sums(u);
    let energy = column_energy(u);
    let hs_chain = s_list
        .iter()
        .map(|&s| Ok(ChainValue { s, bound: hs_chain_bound(u, s)? }))
        .collect::<Result<Vec<_>>>()?;

    let mut checks = vec![
        InequalityCheck::new("half_wiener_le_trace", 0.5 * wiener, trace),
        InequalityCheck::new("trace_le_column_energy", trace, energy),
        InequalityCheck::new("parity_even_le_trace", parity_even, trace),
        InequalityCheck::new("parity_odd_le_trace", parity_odd, trace),
        InequalityCheck::new("wiener_le_parity_sum", wiener, parity_even + parity_odd),
    ];
    for c in &hs_chain {
        checks.push(InequalityCheck::new(format!("trace_le_hs_chain(s={})", c.s), trace, c.bound));
    }
    Ok(HankelReport {
        singular_values,
        trace_norm: trace,
        wiener_half: 0.5 * wiener,
        parity_even,
        parity_odd,
        column_energy: energy,
        hs_chain,
        checks,
    })
}

/// Number of leading singular values tracked by [`isospectral_drift`].
pub const ISOSPECTRAL_TOP: usize = 10;

/// `max_{t,i≤10} |σᵢ(t) − σᵢ(0)| / max(σ₁(0), 1e−300)` over the samples.
pub fn isospectral_drift(traj: &Trajectory) -> Result<f64> {
    let Some(first) = traj.states.first() else {
        return Err(Error::Precondition("isospectral drift needs a non-empty trajectory".into()));
    };
    let top = |u: &HardySeries| -> Result<Vec<f64>> {
        let mut s = singular_values(&hankel_matrix(u))?;
        s.truncate(ISOSPECTRAL_TOP);
        Ok(s)
    };
    let reference = top(first)?;
    let scale = reference.first().copied().unwrap_or(0.0).max(1e-300);
    let mut drift = 0.0_f64;
    for u in traj.states.iter().skip(1) {
        let s = top(u)?;
        for (a, b) in s.iter().zip(&reference) {
            drift = drift.max((a - b).abs() / scale);
        }
    }
    Ok(drift)
}
