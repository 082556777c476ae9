//! The smooth weight `ψ` and its Fourier transform.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `ψ(u) = e^{4/3} exp(−1/(1 − s²))` with `s = u − 3/2` on `|s| < 1`, else 0.
///
/// Supported on `(0.5, 2.5)`; the prefactor makes `min_{[1,2]} ψ = 1`.
pub fn psi_eval(u: f64) -> f64 {
    let s = u - 1.5;
    if s.abs() >= 1.0 {
        return 0.0;
    }
    (4.0 / 3.0 - 1.0 / (1.0 - s * s)).exp()
}

const NODES: usize = 24;
const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-10;
const MAX_PANELS: usize = 1 << 14;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(NODES).unwrap()))
}

fn composite(y: f64, panels: usize) -> Complex64 {
    let h = 2.0 / panels as f64;
    let q = rule();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let a = 0.5 + k as f64 * h;
        let re = q.integrate(a, a + h, |u| psi_eval(u) * (TAU * u * y).cos());
        let im = q.integrate(a, a + h, |u| psi_eval(u) * (TAU * u * y).sin());
        acc += Complex64::new(re, im);
    }
    acc
}

/// `ψ̂(y) = ∫ ψ(u) e(u y) du`, with `e(t) = exp(2πi t)`.
///
/// Composite Gauss–Legendre; the panel count doubles until two successive
/// estimates agree to a relative `1e-10`. Near zeros the absolute floor is
/// `1e-14`, raised to the phase roundoff `~ ε·|y|` for large arguments.
pub fn psi_hat(y: f64) -> Result<Complex64> {
    if !y.is_finite() {
        return Err(Error::Numeric(format!("ψ̂ evaluated at {y}")));
    }
    let mut panels = 8 + 4 * y.abs().ceil() as usize;
    let floor = ABS_TOL.max(16.0 * f64::EPSILON * y.abs());
    let mut prev = composite(y, panels);
    let cap = MAX_PANELS.max(4 * panels);
    while panels < cap {
        panels *= 2;
        let cur = composite(y, panels);
        if (cur - prev).norm() <= floor.max(REL_TOL * cur.norm()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numeric(format!("ψ̂ quadrature did not converge at y = {y}")))
}

/// `ψ̂(0) = ∫ ψ`.
pub fn psi_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| psi_hat(0.0).map(|z| z.re).unwrap_or(f64::NAN))
}

/// A crude super-polynomial envelope for `|ψ̂(y)|`: the bump's transform is
/// `O(exp(−c √|y|))`. Used only to report whether a dropped tail is negligible.
pub fn psi_hat_tail_negligible(y: f64, tol: f64) -> bool {
    psi_mass() * (-(PI * y.abs()).sqrt()).exp() < tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(psi_eval(0.4), 0.0);
        assert_eq!(psi_eval(2.5), 0.0);
        assert!((psi_eval(1.5) - (1.0f64 / 3.0).exp()).abs() < 1e-15);
        assert!((psi_eval(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bump_contract() {
        for i in 0..=1000 {
            assert!(psi_eval(1.0 + i as f64 * 1e-3) >= 1.0 - 1e-15);
        }
        for i in 0..=4000 {
            let u = -1.0 + i as f64 * 1e-3;
            assert!(psi_eval(u) >= 0.0);
            if !(0.5 < u && u < 2.5) {
                assert_eq!(psi_eval(u), 0.0);
            }
        }
    }

    #[test]
    fn transform_at_zero_matches_independent_quadrature() {
        // Trapezoid rule on a very fine grid; ψ vanishes to all orders at the
        // ends, so the rule is spectrally accurate.
        let n = 200_000;
        let h = 2.0 / n as f64;
        let trap: f64 = (1..n).map(|i| psi_eval(0.5 + i as f64 * h)).sum::<f64>() * h;
        let z = psi_hat(0.0).unwrap();
        assert!((z.re - trap).abs() < 1e-10, "{} vs {trap}", z.re);
        assert!(z.im.abs() < 1e-15);
    }

    #[test]
    fn transform_symmetries() {
        // ψ is symmetric about 3/2, so e(−3y/2) ψ̂(y) is real and even.
        for y in [0.1, 0.7, 2.3, 5.0, 11.5] {
            let z = psi_hat(y).unwrap();
            let centred = z * Complex64::from_polar(1.0, -TAU * 1.5 * y);
            assert!(centred.im.abs() < 1e-12, "y = {y}: {centred}");
            let w = psi_hat(-y).unwrap();
            assert!((w - z.conj()).norm() < 1e-13);
        }
        assert!(psi_hat(f64::NAN).is_err());
    }

    #[test]
    fn transform_decays() {
        let a = psi_hat(5.0).unwrap().norm();
        let b = psi_hat(20.0).unwrap().norm();
        assert!(b < a && b < 1e-3, "{a} {b}");
        assert!(psi_hat_tail_negligible(1e6, 1e-6));
        assert!(!psi_hat_tail_negligible(0.0, 1e-6));
    }

    #[test]
    fn large_arguments_converge_to_roundoff() {
        for y in [-1567.5782641542605, 3000.7, -9000.1] {
            let z = psi_hat(y).unwrap();
            assert!(z.norm() < 1e-10, "{y}: {z}");
        }
    }
}
