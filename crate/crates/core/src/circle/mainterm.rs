//! The main term `ℳ_N`, the error term `ℰ_N = ℛ_N − ℳ_N`, and window sweeps.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::functions::{hat_t_fourier, ramanujan_sum, spike_grid};
use super::params::CircleParams;
use super::singular::{SeriesOptions, SingularSeries};
use super::spectrum::SpectrumGrid;
use crate::congruence::{is_admissible, ObstructionReport};
use crate::error::{Error, Result};
use crate::matgroup::{EnumLimits, GroupSpec, DEFAULT_ANGULAR_DIVISOR};
use crate::repr::{precompose_fix, rn_table, Ensemble, RnTable};

/// Everything the circle-method quantities at one parameter point share.
#[derive(Clone, Debug)]
pub struct CircleModel {
    pub params: CircleParams,
    /// The normalized spec (`v₁ ≠ 0`, `w₂ ≠ 0`).
    pub spec: GroupSpec,
    pub ensemble: Ensemble,
    pub table: RnTable,
    pub series: SingularSeries,
    /// Nonzero entries of `ℛ_N`.
    support: Vec<(i64, f64)>,
}

/// One row of a window sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub n: i64,
    pub r: f64,
    pub m: f64,
    pub e: f64,
    pub admissible: bool,
}

impl CircleModel {
    pub fn new(g: &GroupSpec, params: CircleParams) -> Result<Self> {
        Self::new_with(g, params, SeriesOptions::default(), &EnumLimits::default())
    }

    pub fn new_with(g: &GroupSpec, params: CircleParams, options: SeriesOptions, limits: &EnumLimits) -> Result<Self> {
        let spec = precompose_fix(g)?;
        let ensemble = Ensemble::build_with(&spec, params.t, DEFAULT_ANGULAR_DIVISOR, limits)?;
        Self::from_ensemble(spec, params, ensemble, options)
    }

    /// Uses a prebuilt ensemble; `spec` must already be normalized.
    pub fn from_ensemble(spec: GroupSpec, params: CircleParams, ensemble: Ensemble, options: SeriesOptions) -> Result<Self> {
        if !spec.is_normalized() {
            return Err(Error::InvalidArgument("spec needs v₁ ≠ 0 and w₂ ≠ 0".into()));
        }
        let table = rn_table(&ensemble, params.x)?;
        let series = SingularSeries::from_q0(&spec, params.q0, options)?;
        let support = table.iter().filter(|&(_, v)| v != 0.0).collect();
        Ok(CircleModel { params, spec, ensemble, table, series, support })
    }

    fn q_max(&self) -> u64 {
        self.series.q_max
    }

    pub fn representation(&self, n: i64) -> f64 {
        self.table.get(n)
    }

    /// `Σ_m ℛ_N(m) 𝔱̂(K₀(m − n)/N)`, summed directly.
    fn tent_sum(&self, n: i64) -> f64 {
        let s = self.params.arc_width();
        self.support.iter().map(|&(m, r)| r * hat_t_fourier(s * (m - n) as f64)).sum()
    }

    /// `ℳ_N(n) = (K₀/N) 𝔖_{Q₀}(n) Σ_m ℛ_N(m) 𝔱̂(K₀(m − n)/N)`.
    pub fn main_term(&self, n: i64) -> f64 {
        if self.support.is_empty() {
            return 0.0;
        }
        self.params.arc_width() * self.series.value(n) * self.tent_sum(n)
    }

    pub fn error_term(&self, n: i64) -> f64 {
        self.representation(n) - self.main_term(n)
    }

    /// `∫₀¹ 𝔗(θ) ℛ̂_N(θ) e(−nθ) dθ` in closed form:
    /// `(K₀/N) Σ_m ℛ_N(m) 𝔱̂(K₀(m − n)/N) Σ_q c_q(m − n)`.
    pub fn main_term_integral(&self, n: i64) -> f64 {
        let s = self.params.arc_width();
        let q_max = self.q_max();
        s * self
            .support
            .iter()
            .map(|&(m, r)| {
                let c: i64 = (1..=q_max).map(|q| ramanujan_sum(q, m - n)).sum();
                r * hat_t_fourier(s * (m - n) as f64) * c as f64
            })
            .sum::<f64>()
    }

    /// Main terms on `lo..=hi` by FFT convolution.
    pub fn main_terms(&self, lo: i64, hi: i64) -> Result<Vec<f64>> {
        let s = self.params.arc_width();
        let conv = self.correlate(lo, hi, |d| hat_t_fourier(s * d as f64))?;
        Ok((lo..=hi).zip(conv).map(|(n, c)| s * self.series.value(n) * c).collect())
    }

    /// [`Self::main_term_integral`] on `lo..=hi` by FFT convolution.
    pub fn main_term_integrals(&self, lo: i64, hi: i64) -> Result<Vec<f64>> {
        let s = self.params.arc_width();
        let rows: Vec<Vec<i64>> = (1..=self.q_max())
            .map(|q| (0..q as i64).map(|r| ramanujan_sum(q, r)).collect())
            .collect();
        let conv = self.correlate(lo, hi, |d| {
            let c: i64 = rows.iter().map(|row| row[d.rem_euclid(row.len() as i64) as usize]).sum();
            hat_t_fourier(s * d as f64) * c as f64
        })?;
        Ok(conv.into_iter().map(|c| s * c).collect())
    }

    /// `c(n) = Σ_m ℛ_N(m) k(m − n)` for `n ∈ lo..=hi`.
    fn correlate<K: Fn(i64) -> f64 + Sync>(&self, lo: i64, hi: i64, kernel: K) -> Result<Vec<f64>> {
        if hi < lo {
            return Ok(vec![]);
        }
        let width = (hi - lo + 1) as usize;
        let len = self.table.values.len();
        if len == 0 {
            return Ok(vec![0.0; width]);
        }
        let size = (len + width).next_power_of_two();
        if size > 1 << 27 {
            return Err(Error::Capacity { what: "main-term convolution size", limit: 1 << 27 });
        }
        // With j = n − lo and i = m − table.lo the lag is m − n = base + (i − j).
        let base = self.table.lo - lo;
        let mut a: Vec<Complex64> = self.table.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        a.resize(size, Complex64::new(0.0, 0.0));
        let mut g = vec![Complex64::new(0.0, 0.0); size];
        g.par_iter_mut().enumerate().for_each(|(idx, z)| {
            // idx stands for i − j in −(width − 1) ..= len − 1.
            let d = if idx < len { idx as i64 } else { idx as i64 - size as i64 };
            if d > -(width as i64) {
                *z = Complex64::new(kernel(base + d), 0.0);
            }
        });
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(size);
        fwd.process(&mut a);
        fwd.process(&mut g);
        for (x, y) in a.iter_mut().zip(&g) {
            *x *= y.conj();
        }
        planner.plan_fft_inverse(size).process(&mut a);
        Ok(a[..width].iter().map(|z| z.re / size as f64).collect())
    }

    /// Grid quadrature of `∫ 𝔗 ℛ̂_N e(−nθ)` for `n ∈ lo..=hi` on `grid`.
    pub fn main_term_quadrature(&self, grid: &SpectrumGrid, lo: i64, hi: i64) -> Vec<f64> {
        let spike = spike_grid(grid.size, &self.params, self.series.options.inclusive);
        let mut buf: Vec<Complex64> = grid.values.iter().zip(&spike).map(|(z, &t)| z * t).collect();
        FftPlanner::new().plan_fft_forward(grid.size).process(&mut buf);
        let size = grid.size as i64;
        (lo..=hi).map(|n| buf[n.rem_euclid(size) as usize].re / size as f64).collect()
    }

    /// `(n, ℛ_N, ℳ_N, ℰ_N, admissible)` for `n ∈ lo..=hi`.
    pub fn sweep(&self, lo: i64, hi: i64, report: &ObstructionReport) -> Result<Vec<SweepRow>> {
        let mains = self.main_terms(lo, hi)?;
        Ok((lo..=hi)
            .zip(mains)
            .map(|(n, m)| {
                let r = self.representation(n);
                SweepRow { n, r, m, e: r - m, admissible: is_admissible(report, n) }
            })
            .collect())
    }

    /// `Σ_{|n| ≤ N} ℰ_N(n)²`.
    pub fn error_l2(&self) -> Result<f64> {
        let n = self.params.n.floor() as i64;
        let rows = self.main_terms(-n, n)?;
        Ok((-n..=n).zip(rows).map(|(k, m)| (self.representation(k) - m).powi(2)).sum())
    }
}

/// `n,R_N,M_N,E_N,admissible` with 17 significant digits.
pub fn sweep_csv(rows: &[SweepRow], meta: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out.push_str("n,R_N,M_N,E_N,admissible\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.16e},{:.16e},{:.16e},{}", r.n, r.r, r.m, r.e, r.admissible as u8);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::discover_z;
    use crate::matgroup::Mat2;

    fn model_with(w: (i64, i64), q0: f64, k0: f64) -> CircleModel {
        let g = GroupSpec::new(vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), w).unwrap();
        CircleModel::new(&g, CircleParams::explicit(2500.0, 50.0, q0, k0, 0.0).unwrap()).unwrap()
    }

    fn model(w: (i64, i64)) -> CircleModel {
        model_with(w, 9.0, 81.0)
    }

    #[test]
    fn empty_ensemble_gives_zero() {
        let g = precompose_fix(&GroupSpec::new(vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), (7, 5)).unwrap())
            .unwrap();
        let p = CircleParams::explicit(2500.0, 50.0, 9.0, 81.0, 0.0).unwrap();
        let m = CircleModel::from_ensemble(g, p, Ensemble::empty(1.0), SeriesOptions::default()).unwrap();
        assert_eq!(m.main_term(7), 0.0);
        assert_eq!(m.error_term(7), 0.0);
        assert!(m.main_terms(-3, 3).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fft_matches_direct_sums() {
        let m = model((7, 5));
        let (lo, hi) = (1200, 1300);
        let fast = m.main_terms(lo, hi).unwrap();
        let fast_int = m.main_term_integrals(lo, hi).unwrap();
        for (k, n) in (lo..=hi).enumerate().step_by(9) {
            let d = m.main_term(n);
            assert!((fast[k] - d).abs() <= 1e-9 * (1.0 + d.abs()), "n = {n}: {} vs {d}", fast[k]);
            let di = m.main_term_integral(n);
            assert!((fast_int[k] - di).abs() <= 1e-9 * (1.0 + di.abs()), "n = {n}");
        }
    }

    #[test]
    fn integral_form_matches_quadrature() {
        let m = model((7, 5));
        let grid = SpectrumGrid::from_table(&m.table, 8 * 5001).unwrap();
        let quad = m.main_term_quadrature(&grid, 1250, 2500);
        let exact = m.main_term_integrals(1250, 2500).unwrap();
        let scale = exact.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for (q, e) in quad.iter().zip(&exact) {
            assert!((q - e).abs() <= 1e-6 * scale, "{q} vs {e}");
        }
    }

    #[test]
    fn decomposition_identity() {
        let m = model((7, 5));
        let report = discover_z(&m.spec, 13, 3).unwrap();
        let rows = m.sweep(-2500, 2500, &report).unwrap();
        for r in &rows {
            assert!((r.m + r.e - r.r).abs() <= 1e-8 * (1.0 + r.r.abs()));
        }
        let csv = sweep_csv(&rows[..2], &[("N", "2500".into())]);
        assert!(csv.starts_with("# N: 2500\nn,R_N,M_N,E_N,admissible\n-2500,"));
        assert!(m.error_l2().unwrap() >= 0.0);
    }

    #[test]
    fn main_term_separates_admissible_classes() {
        let m = model_with((7, 5), 54.0, 9.0);
        let report = discover_z(&m.spec, 13, 3).unwrap();
        let rows = m.sweep(1250, 2500, &report).unwrap();
        let adm = rows.iter().filter(|r| r.admissible).map(|r| r.m).fold(f64::INFINITY, f64::min);
        let non = rows.iter().filter(|r| !r.admissible).map(|r| r.m).fold(f64::NEG_INFINITY, f64::max);
        assert!(adm > 0.0 && adm >= 5.0 * non, "admissible min {adm}, non-admissible max {non}");
    }
}
