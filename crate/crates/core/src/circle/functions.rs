//! Closed-form pieces: the tent `𝔱`, its transform, the spike `𝔗`, and
//! Ramanujan sums.

use std::f64::consts::PI;

use num_integer::Integer;

use super::params::CircleParams;
use crate::arith::{divisors, mobius};

/// `𝔱(x) = min(1 + x, 1 − x)⁺`.
pub fn hat_t(x: f64) -> f64 {
    (1.0 - x.abs()).max(0.0)
}

/// `𝔱̂(y) = (sin πy / πy)²`, equal to 1 at `y = 0`.
pub fn hat_t_fourier(y: f64) -> f64 {
    let z = PI * y;
    if z.abs() < 1e-6 {
        // Two terms of the series keep full precision near zero.
        let s = 1.0 - z * z / 6.0;
        return s * s;
    }
    let s = z.sin() / z;
    s * s
}

/// `𝔗(θ) = Σ_{q ≤ Q₀} Σ′_{a (q)} Σ_m 𝔱((N/K₀)(θ + m − a/q))`.
pub fn spike(theta: f64, p: &CircleParams) -> f64 {
    spike_with(theta, p, true)
}

pub fn spike_with(theta: f64, p: &CircleParams, inclusive: bool) -> f64 {
    let w = p.arc_width();
    let mut total = 0.0;
    for q in 1..=p.q_max(inclusive) {
        for a in 0..q {
            if a.gcd(&q) != 1 {
                continue;
            }
            let d = theta - a as f64 / q as f64;
            // Integers m with |d + m| < w.
            let lo = (-d - w).ceil() as i64;
            let hi = (-d + w).floor() as i64;
            for m in lo..=hi {
                total += hat_t((d + m as f64) / w);
            }
        }
    }
    total
}

/// `𝔗` sampled at `θ_j = j / size`. Only the grid points inside an arc are
/// visited, so the cost is proportional to the arcs' total width.
pub fn spike_grid(size: usize, p: &CircleParams, inclusive: bool) -> Vec<f64> {
    let mut out = vec![0.0; size];
    let w = p.arc_width();
    let s = size as f64;
    for q in 1..=p.q_max(inclusive) {
        for a in 0..q {
            if a.gcd(&q) != 1 {
                continue;
            }
            let c = a as f64 / q as f64 * s;
            let lo = (c - w * s).floor() as i64;
            let hi = (c + w * s).ceil() as i64;
            for j in lo..=hi {
                let t = hat_t((j as f64 / s - a as f64 / q as f64) / w);
                if t > 0.0 {
                    out[j.rem_euclid(size as i64) as usize] += t;
                }
            }
        }
    }
    out
}

/// `c_q(n) = Σ_{d | (q, n)} d μ(q/d)`.
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    assert!(q >= 1, "Ramanujan sum needs q ≥ 1");
    let g = q.gcd(&n.unsigned_abs());
    divisors(g)
        .into_iter()
        .map(|d| d as i64 * mobius(q / d))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn direct_ramanujan(q: u64, n: i64) -> f64 {
        (0..q)
            .filter(|a| a.gcd(&q) == 1)
            .map(|a| Complex64::from_polar(1.0, TAU * (a as f64) * (n as f64) / q as f64))
            .sum::<Complex64>()
            .re
    }

    #[test]
    fn tent_values() {
        assert_eq!(hat_t(0.0), 1.0);
        assert_eq!(hat_t(1.0), 0.0);
        assert_eq!(hat_t(-1.0), 0.0);
        assert_eq!(hat_t(0.5), 0.5);
        assert!((hat_t_fourier(0.5) - (2.0 / PI).powi(2)).abs() < 1e-15);
        assert_eq!(hat_t_fourier(0.0), 1.0);
        assert!(hat_t_fourier(3.0) < 1e-30);
    }

    #[test]
    fn tent_transform_on_half_interval_and_sign() {
        for i in 0..200 {
            let y = -0.4975 + i as f64 * 0.005;
            assert!(hat_t_fourier(y) > 0.4, "y = {y}");
        }
        for i in 0..10_000 {
            assert!(hat_t_fourier(-50.0 + i as f64 * 0.01) >= 0.0);
        }
    }

    #[test]
    fn tent_transform_matches_quadrature() {
        // ∫ 𝔱(x) cos(2π x y) dx by the midpoint rule.
        let n = 20_000;
        for y in [0.1, 0.37, 1.5, 2.25] {
            let h = 2.0 / n as f64;
            let q: f64 = (0..n)
                .map(|i| {
                    let x = -1.0 + (i as f64 + 0.5) * h;
                    hat_t(x) * (TAU * x * y).cos()
                })
                .sum::<f64>()
                * h;
            assert!((q - hat_t_fourier(y)).abs() < 1e-8, "y = {y}");
        }
    }

    #[test]
    fn ramanujan_examples() {
        assert!((-20..20).all(|n| ramanujan_sum(1, n) == 1));
        assert_eq!(ramanujan_sum(4, 0), 2);
        assert_eq!(ramanujan_sum(6, 4), -1);
        for q in 1..=30u64 {
            for n in -30..=30 {
                assert!((ramanujan_sum(q, n) as f64 - direct_ramanujan(q, n)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spike_examples() {
        let p = CircleParams::explicit(1e6, 100.0, 5.0, 10.0, 0.0).unwrap();
        assert!(spike(0.0, &p) >= 1.0);
        // Between 1/5 and 1/4 with arcs of half-width 1e-5.
        assert_eq!(spike(0.225, &p), 0.0);
        for i in 0..100 {
            let th = i as f64 * 0.0137 - 0.6;
            assert!((spike(th, &p) - spike(th + 1.0, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn spike_integrates_to_arc_mass() {
        use crate::arith::euler_phi;
        let p = CircleParams::explicit(2500.0, 50.0, 6.0, 20.0, 0.0).unwrap();
        let n = 400_000;
        let h = 1.0 / n as f64;
        let integral: f64 = (0..n).map(|j| spike((j as f64 + 0.5) * h, &p)).sum::<f64>() * h;
        let expect = p.arc_width() * (1..=6).map(euler_phi).sum::<u64>() as f64;
        assert!(((integral - expect) / expect).abs() < 1e-6, "{integral} vs {expect}");
    }

    #[test]
    fn spike_grid_matches_pointwise() {
        let p = CircleParams::explicit(2500.0, 50.0, 9.0, 81.0, 0.0).unwrap();
        let size = 1 << 14;
        let g = spike_grid(size, &p, true);
        for j in (0..size).step_by(7) {
            assert!((g[j] - spike(j as f64 / size as f64, &p)).abs() < 1e-12, "j = {j}");
        }
    }
}
