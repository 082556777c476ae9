//! Grid quadrature of the four minor-arc integrals and the dyadic split of `I₄`.

use std::fmt::Write as _;

use num_integer::Integer;

use super::functions::spike_grid;
use super::mainterm::CircleModel;
use super::spectrum::SpectrumGrid;
use crate::error::{Error, Result};

/// `I₁ … I₄`, the pieces `I_Q` of `I₄`, and `∫ |1 − 𝔗|² |ℛ̂_N|²` on the same grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorArcProfile {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    /// `(Q, I_Q)` with `q ∈ (Q, 2Q]`, `Q = Q₀ 2^k`.
    pub dyadic: Vec<(f64, f64)>,
    pub dominated: f64,
    pub grid_size: usize,
}

impl MinorArcProfile {
    pub fn total(&self) -> f64 {
        self.i1 + self.i2 + self.i3 + self.i4
    }

    pub fn integrals(&self) -> [f64; 4] {
        [self.i1, self.i2, self.i3, self.i4]
    }
}

/// Relative disagreement with the half-resolution grid above which the
/// profile is rejected.
pub const RESOLUTION_TOLERANCE: f64 = 0.1;

/// Evaluates the profile on `grid` and on every other point of it, and
/// returns the full-resolution result if the two agree within
/// [`RESOLUTION_TOLERANCE`].
pub fn minor_arc_profile(model: &CircleModel, grid: &SpectrumGrid) -> Result<MinorArcProfile> {
    if grid.size < 4 || !grid.size.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("grid size {} must be a power of two ≥ 4", grid.size)));
    }
    let fine = profile_on(model, &grid.values, grid.size, 1);
    let coarse = profile_on(model, &grid.values, grid.size, 2);
    let floor = 1e-12 * (fine.total() + fine.dominated);
    let pairs = fine.integrals().into_iter().zip(coarse.integrals()).chain([(fine.dominated, coarse.dominated)]);
    for (f, c) in pairs {
        if (f - c).abs() > RESOLUTION_TOLERANCE * f.abs() + floor {
            return Err(Error::Numeric(format!(
                "grid of {} points too coarse: {f:.6e} against {c:.6e} at half resolution",
                grid.size
            )));
        }
    }
    Ok(fine)
}

/// The profile using samples `values[stride · k]`, i.e. a grid of `size / stride` points.
fn profile_on(model: &CircleModel, values: &[num_complex::Complex64], size: usize, stride: usize) -> MinorArcProfile {
    let p = &model.params;
    let s = (size / stride) as f64;
    let h = 1.0 / s;
    let sample = |j: i64| values[(j.rem_euclid(s as i64) as usize) * stride].norm_sqr();

    let q_max = model.series.q_max;
    let m = p.m_int();
    let width = p.arc_width();
    let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
    let mut dyadic: Vec<(f64, f64)> = Vec::new();
    for q in 1..=m {
        let dirichlet = 1.0 / (q as f64 * p.m);
        let major = q <= q_max;
        let reach = if major { width.max(dirichlet) } else { dirichlet };
        let slot = if major {
            None
        } else {
            // q ∈ (Q₀ 2^k, Q₀ 2^{k+1}].
            let k = ((q as f64 / p.q0).log2().ceil() as i32 - 1).max(0);
            let big_q = p.q0 * 2f64.powi(k);
            if dyadic.last().is_none_or(|&(b, _)| b != big_q) {
                dyadic.push((big_q, 0.0));
            }
            Some(dyadic.len() - 1)
        };
        for a in 0..q {
            if a.gcd(&q) != 1 {
                continue;
            }
            let c = a as f64 / q as f64;
            let lo = ((c - reach) * s).ceil() as i64;
            let hi = ((c + reach) * s).floor() as i64;
            for j in lo..=hi {
                let beta = j as f64 * h - c;
                let b = beta.abs();
                let v = sample(j) * h;
                match slot {
                    None => {
                        if b <= width {
                            i1 += (beta / width).powi(2) * v;
                        } else if b <= dirichlet {
                            i2 += v;
                        }
                    }
                    Some(k) => {
                        if b < 1.0 / p.n {
                            dyadic[k].1 += v;
                        } else {
                            i3 += v;
                        }
                    }
                }
            }
        }
    }
    let i4 = dyadic.iter().fold(0.0, |acc, d| acc + d.1);

    let spike = spike_grid(size / stride, p, model.series.options.inclusive);
    let dominated = spike
        .iter()
        .enumerate()
        .map(|(j, t)| (1.0 - t).powi(2) * sample(j as i64))
        .sum::<f64>()
        * h;
    MinorArcProfile { i1, i2, i3, i4, dyadic, dominated, grid_size: size / stride }
}

/// `q,I_Q` lines, `q` being the lower end `Q` of each dyadic block.
pub fn dyadic_csv(profile: &MinorArcProfile) -> String {
    let mut out = String::from("q,I_Q\n");
    for (q, v) in &profile.dyadic {
        let _ = writeln!(out, "{:.16e},{:.16e}", q, v);
    }
    out
}
