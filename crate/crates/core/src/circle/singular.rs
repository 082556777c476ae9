//! The truncated singular series `𝔖_{Q₀}(n)`.

use super::functions::ramanujan_sum;
use crate::congruence::{residue_distribution, QuotientLimits};
use crate::error::Result;
use crate::matgroup::GroupSpec;

/// Which form of the series to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesOptions {
    /// Sum over `a` coprime to `q` (the form produced by integrating the
    /// spike against `ℛ̂_N`) rather than over every residue.
    pub primed: bool,
    /// `q ≤ Q₀` rather than `q < Q₀`.
    pub inclusive: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { primed: true, inclusive: true }
    }
}

/// `𝔖_{Q₀}(n) = Σ_q (1/#Λ_q) Σ_{a (q)} Σ_{γ₀ ∈ Λ_q} e((⟨v γ₀, w⟩ − n) a/q)`,
/// tabulated by `n mod q` for every `q` in range.
///
/// The `a`-sum is done in closed form: with `P_q(r)` the fraction of `Λ_q`
/// sending `v` to pairing `r`, the `q`-th term is `Σ_r P_q(r) c_q(r − n)` in
/// the primed case and `q · P_q(n mod q)` otherwise. Both are real.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSeries {
    pub q_max: u64,
    pub options: SeriesOptions,
    /// `terms[q − 1][r]` is the `q`-th term at `n ≡ r (mod q)`.
    terms: Vec<Vec<f64>>,
}

impl SingularSeries {
    /// Series over `1 ≤ q ≤ q_max`.
    pub fn new(g: &GroupSpec, q_max: u64, options: SeriesOptions) -> Result<Self> {
        Self::new_with(g, q_max, options, &QuotientLimits::default())
    }

    /// Series with `q ≤ Q₀` or `q < Q₀` as selected by `options.inclusive`.
    pub fn from_q0(g: &GroupSpec, q0: f64, options: SeriesOptions) -> Result<Self> {
        let q_max = if options.inclusive { q0.floor() } else { q0.ceil() - 1.0 };
        Self::new(g, q_max.max(0.0) as u64, options)
    }

    pub fn new_with(g: &GroupSpec, q_max: u64, options: SeriesOptions, limits: &QuotientLimits) -> Result<Self> {
        let mut terms = Vec::with_capacity(q_max as usize);
        for q in 1..=q_max {
            let dist = residue_distribution(g, q, limits)?;
            let total = dist.orbit_len as f64;
            let row: Vec<f64> = (0..q as i64)
                .map(|n| {
                    if options.primed {
                        dist.counts
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c > 0)
                            .map(|(r, &c)| c as f64 * ramanujan_sum(q, r as i64 - n) as f64)
                            .sum::<f64>()
                            / total
                    } else {
                        q as f64 * dist.counts[n as usize] as f64 / total
                    }
                })
                .collect();
            terms.push(row);
        }
        Ok(SingularSeries { q_max, options, terms })
    }

    pub fn term(&self, q: u64, n: i64) -> f64 {
        self.terms[(q - 1) as usize][n.rem_euclid(q as i64) as usize]
    }

    pub fn value(&self, n: i64) -> f64 {
        (1..=self.q_max).map(|q| self.term(q, n)).sum()
    }
}

/// `𝔖_{Q₀}(n)` with the default options (primed, `q ≤ Q₀`).
pub fn singular_series(g: &GroupSpec, n: i64, q0: f64) -> Result<f64> {
    Ok(SingularSeries::from_q0(g, q0, SeriesOptions::default())?.value(n))
}
