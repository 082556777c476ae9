//! The circle-method parameters and their exponent constraints.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// `(N, T, X, M, Q₀, K₀, ε₀, ε₁, δ)` with `T X = N` and `M = T^{1+ε₀}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleParams {
    pub n: f64,
    pub t: f64,
    pub x: f64,
    pub m: f64,
    pub q0: f64,
    pub k0: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub delta: f64,
}

impl CircleParams {
    /// Explicit desk-scale parameters. Only positivity is checked: at this
    /// scale the asymptotic constraints are not meaningful.
    pub fn explicit(n: f64, t: f64, q0: f64, k0: f64, eps0: f64) -> Result<Self> {
        for (name, v) in [("N", n), ("T", t), ("Q0", q0), ("K0", k0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
            }
        }
        if !(eps0.is_finite() && eps0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("eps0 = {eps0} must be non-negative")));
        }
        Ok(CircleParams { n, t, x: n / t, m: t.powf(1.0 + eps0), q0, k0, eps0, eps1: 0.0, delta: 1.0 })
    }

    /// Largest denominator in the major arcs: `⌊Q₀⌋`, or the largest integer
    /// strictly below `Q₀` when `inclusive` is false.
    pub fn q_max(&self, inclusive: bool) -> u64 {
        let f = self.q0.floor();
        if inclusive || f < self.q0 {
            f as u64
        } else {
            (f as u64).saturating_sub(1)
        }
    }

    /// Depth of approximation as an integer bound on denominators.
    pub fn m_int(&self) -> u64 {
        self.m.floor().max(1.0) as u64
    }

    /// Half-width `K₀ / N` of a major arc.
    pub fn arc_width(&self) -> f64 {
        self.k0 / self.n
    }
}

/// One inequality between exponents of `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// Exponents of `K₀ = T^κ` and `Q₀ = T^ρ` and the four constraints, in exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentReport {
    pub delta: BigRational,
    pub eps1: BigRational,
    pub kappa: BigRational,
    pub rho: BigRational,
    pub checks: Vec<ConstraintCheck>,
}

impl ExponentReport {
    pub fn feasible(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_violation(&self) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

pub const CONSTRAINT_ERROR_BUDGET: &str = "Q0^5 K0 <= T^(2δ/7 - 5/21)";
pub const CONSTRAINT_SHIFT_COUNT: &str = "K0 <= T^(3δ/2 - 3/4)";
pub const CONSTRAINT_MINOR_I1: &str = "Q0^2 <= K0";
pub const CONSTRAINT_MINOR_IQ: &str = "Q0 >= T^(4 - 4δ)";

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact(v: f64, name: &str) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::InvalidArgument(format!("{name} = {v} is not finite")))
}

/// `κ = 4δ/49 − 10/147`, `ρ = 2δ/49 − 5/147 − ε₁`, and the constraint table.
pub fn parameter_exponents(delta: &BigRational, eps1: &BigRational) -> ExponentReport {
    let kappa = rat(4, 49) * delta - rat(10, 147);
    let rho = rat(2, 49) * delta - rat(5, 147) - eps1;
    let five = rat(5, 1);
    let two = rat(2, 1);
    let check = |name, lhs: BigRational, rhs: BigRational| {
        let holds = lhs <= rhs;
        ConstraintCheck { name, lhs, rhs, holds }
    };
    let checks = vec![
        check(CONSTRAINT_ERROR_BUDGET, &five * &rho + &kappa, rat(2, 7) * delta - rat(5, 21)),
        check(CONSTRAINT_SHIFT_COUNT, kappa.clone(), rat(3, 2) * delta - rat(3, 4)),
        check(CONSTRAINT_MINOR_I1, &two * &rho, kappa.clone()),
        check(CONSTRAINT_MINOR_IQ, rat(4, 1) - rat(4, 1) * delta, rho.clone()),
    ];
    ExponentReport { delta: delta.clone(), eps1: eps1.clone(), kappa, rho, checks }
}

/// Least `δ` for which `Q₀ ≥ T^{4−4δ}` holds with `Q₀` as chosen above:
/// `(2/49 + 4) δ = 4 + 5/147 + ε₁`.
pub fn delta_boundary(eps1: &BigRational) -> BigRational {
    (rat(4, 1) + rat(5, 147) + eps1) / (rat(2, 49) + rat(4, 1))
}

/// Sets `T = N^α`, `X = N/T`, `M = T^{1+ε₀}`, `K₀ = T^κ`, `Q₀ = T^ρ` and checks
/// every constraint exactly.
pub fn choose_parameters(n: f64, delta: f64, eps0: f64, eps1: f64, t_exponent: f64) -> Result<CircleParams> {
    let (params, report) = choose_parameters_report(n, delta, eps0, eps1, t_exponent)?;
    match report.first_violation() {
        Some(c) => Err(Error::Infeasible {
            constraint: c.name,
            detail: format!(
                "exponent {} vs {} (≈ {:.6} vs {:.6})",
                c.lhs,
                c.rhs,
                c.lhs.to_f64().unwrap_or(f64::NAN),
                c.rhs.to_f64().unwrap_or(f64::NAN)
            ),
        }),
        None => Ok(params),
    }
}

/// As [`choose_parameters`] but returns the exponent table even when a
/// constraint fails.
pub fn choose_parameters_report(
    n: f64,
    delta: f64,
    eps0: f64,
    eps1: f64,
    t_exponent: f64,
) -> Result<(CircleParams, ExponentReport)> {
    if !(n.is_finite() && n > 1.0) {
        return Err(Error::InvalidArgument(format!("N = {n} must exceed 1")));
    }
    if !(delta > 5.0 / 6.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("δ = {delta} must lie in (5/6, 1]")));
    }
    if !(t_exponent > 0.0 && t_exponent < 0.5) {
        return Err(Error::InvalidArgument(format!("T exponent {t_exponent} must lie in (0, 1/2)")));
    }
    if !(eps0 > 0.0 && eps1 > 0.0) {
        return Err(Error::InvalidArgument("ε₀ and ε₁ must be positive".into()));
    }
    let d = exact(delta, "δ")?;
    let e1 = exact(eps1, "ε₁")?;
    let report = parameter_exponents(&d, &e1);
    let t = n.powf(t_exponent);
    let kappa = report.kappa.to_f64().unwrap_or(f64::NAN);
    let rho = report.rho.to_f64().unwrap_or(f64::NAN);
    let params = CircleParams {
        n,
        t,
        x: n / t,
        m: t.powf(1.0 + eps0),
        q0: t.powf(rho),
        k0: t.powf(kappa),
        eps0,
        eps1,
        delta,
    };
    Ok((params, report))
}
