//! `ℛ̂_N(θ)`: direct evaluation, the FFT grid, and the Poisson-summed form
//! near a rational `a/q`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rustfft::FftPlanner;

use super::params::CircleParams;
use crate::error::{Error, Result};
use crate::repr::{psi_eval, psi_hat, x_range, Ensemble, RnTable};

/// `e(t) = exp(2πi t)` for `t = num/den` reduced first, so large integers
/// keep their precision.
fn e_frac(num: i128, den: i128) -> Complex64 {
    let r = num.rem_euclid(den) as f64 / den as f64;
    Complex64::from_polar(1.0, TAU * r)
}

fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (t - t.round()))
}

/// `ℛ̂_N(θ) = Σ_{γ ∈ B_T} Σ_x ψ(x/X) e(𝔣_γ(x) θ)`, summed directly.
pub fn rhat(ens: &Ensemble, x_scale: f64, theta: f64) -> Complex64 {
    let xs: Vec<(i64, f64)> = x_range(x_scale).map(|x| (x, psi_eval(x as f64 / x_scale))).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for f in &ens.forms {
        for &(x, w) in &xs {
            // Reduce 𝔣 θ modulo 1 in two steps to keep the phase accurate.
            let n = f.a as i128 * x as i128 + f.b as i128;
            let phase = (n as f64 * theta).rem_euclid(1.0);
            acc += w * e(phase);
        }
    }
    acc
}

/// `ℛ̂_N` sampled at `θ_j = j / size`, `0 ≤ j < size`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid {
    pub size: usize,
    pub values: Vec<Complex64>,
}

impl SpectrumGrid {
    /// Inverse FFT of the zero-padded `ℛ_N` table. `size` is the next power of
    /// two at or above `max(min_size, table length)`, so every sample is exact
    /// up to floating-point error.
    pub fn from_table(table: &RnTable, min_size: usize) -> Result<Self> {
        let size = min_size.max(table.values.len()).max(1).next_power_of_two();
        if size > 1 << 28 {
            return Err(Error::Capacity { what: "spectrum grid size", limit: 1 << 28 });
        }
        let mut buf: Vec<Complex64> = table.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        buf.resize(size, Complex64::new(0.0, 0.0));
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(size).process(&mut buf);
        // Shift by e(lo θ_j) since the table starts at n = lo.
        let lo = table.lo as i128;
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= e_frac(lo * j as i128, size as i128);
        }
        Ok(SpectrumGrid { size, values: buf })
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 / self.size as f64
    }

    pub fn resolution(&self) -> f64 {
        1.0 / self.size as f64
    }

    /// `∫₀¹ |ℛ̂_N|²` by the grid rule.
    pub fn l2_mass(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.size as f64
    }
}

/// `Σ_n ℛ_N(n)²`.
pub fn l2_direct(table: &RnTable) -> f64 {
    table.values.iter().map(|v| v * v).sum()
}

/// The `y = 0` Poisson term
/// `X Σ_{γ} 1{q | A_γ} e(a B_γ / q) ψ̂(A_γ X β) e(B_γ β)`.
pub fn poisson_main(ens: &Ensemble, x_scale: f64, a: i64, q: i64, beta: f64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for f in &ens.forms {
        if f.a % q != 0 {
            continue;
        }
        let ph = e_frac(a as i128 * f.b as i128, q as i128) * e((f.b as f64 * beta).rem_euclid(1.0));
        acc += ph * psi_hat(f.a as f64 * x_scale * beta)?;
    }
    Ok(acc * x_scale)
}

/// Every Poisson term with `|A X β + y X / q| ≤ cutoff`:
/// `X Σ_γ Σ_{y ≡ a A_γ (q)} e(a B_γ / q) ψ̂(A_γ X β + y X / q) e(B_γ β)`.
pub fn poisson_full(ens: &Ensemble, x_scale: f64, a: i64, q: i64, beta: f64, cutoff: f64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let step = x_scale / q as f64;
    for f in &ens.forms {
        let base = f.a as f64 * x_scale * beta;
        let r = (a as i128 * f.a as i128).rem_euclid(q as i128) as i64;
        let ph = e_frac(a as i128 * f.b as i128, q as i128) * e((f.b as f64 * beta).rem_euclid(1.0));
        // y = r + k q.
        let k_lo = ((-cutoff - base) / step - r as f64).div_euclid(q as f64) as i64 - 1;
        let k_hi = ((cutoff - base) / step - r as f64).div_euclid(q as f64) as i64 + 1;
        for k in k_lo..=k_hi {
            let y = r + k * q;
            let z = base + y as f64 * step;
            if z.abs() <= cutoff {
                acc += ph * psi_hat(z)?;
            }
        }
    }
    Ok(acc * x_scale)
}

/// `|ℛ̂_N(a/q + β) − (y = 0 term)| / (1 + |ℛ̂_N(a/q + β)|)`, without range checks.
pub fn poisson_residual(ens: &Ensemble, x_scale: f64, a: i64, q: i64, beta: f64) -> Result<f64> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("denominator {q} must be positive")));
    }
    let theta = (a as f64 / q as f64 + beta).rem_euclid(1.0);
    let direct = rhat(ens, x_scale, theta);
    let main = poisson_main(ens, x_scale, a, q, beta)?;
    Ok((direct - main).norm() / (1.0 + direct.norm()))
}

/// [`poisson_residual`] after checking `gcd(a, q) = 1`, `q ≤ M`, `|β| < 1/(qM)`.
pub fn poisson_check(ens: &Ensemble, p: &CircleParams, a: i64, q: i64, beta: f64) -> Result<f64> {
    if q < 1 || a.gcd(&q) != 1 {
        return Err(Error::InvalidArgument(format!("{a}/{q} is not a reduced fraction")));
    }
    if q as f64 > p.m {
        return Err(Error::InvalidArgument(format!("q = {q} exceeds M = {}", p.m)));
    }
    if beta.abs() >= 1.0 / (q as f64 * p.m) {
        return Err(Error::InvalidArgument(format!("|β| = {} is not below 1/(qM)", beta.abs())));
    }
    poisson_residual(ens, p.x, a, q, beta)
}
