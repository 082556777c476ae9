use super::mat2::{Mat2, ENTRY_GUARD};
use super::spec::GroupSpec;
use crate::error::{Error, Result};

fn checked(v: i128, entry: &'static str) -> Result<i64> {
    if v.unsigned_abs() > ENTRY_GUARD as u128 {
        return Err(Error::Overflow { entry, guard: ENTRY_GUARD });
    }
    Ok(v as i64)
}

/// `(A_γ, B_γ)` with `A_γ = v₁(c w₁ + d w₂)J` and
/// `B_γ = v₁(a w₁ + b w₂) + v₂(c w₁ + d w₂)`, so that
/// `⟨v·(1, Jx; 0, 1)·γ, w⟩ = A_γ x + B_γ`.
#[inline]
pub fn form_coefficients(x: &Mat2, g: &GroupSpec) -> Result<(i64, i64)> {
    let (v1, v2) = (g.v.0 as i128, g.v.1 as i128);
    let (w1, w2) = (g.w.0 as i128, g.w.1 as i128);
    let top = x.a as i128 * w1 + x.b as i128 * w2;
    let bottom = x.c as i128 * w1 + x.d as i128 * w2;
    let a = checked(v1 * bottom * g.j as i128, "A_γ")?;
    let b = checked(v1 * top + v2 * bottom, "B_γ")?;
    Ok((a, b))
}

/// `|A_γ| ≥ T / divisor`, evaluated without rounding the integer side.
pub fn angular_ok(x: &Mat2, g: &GroupSpec, t: f64, divisor: f64) -> Result<bool> {
    let (a, _) = form_coefficients(x, g)?;
    Ok((a.unsigned_abs() as f64) * divisor >= t)
}

/// `⟨v γ, w⟩`.
pub fn pairing(x: &Mat2, v: (i64, i64), w: (i64, i64)) -> Result<i64> {
    let vg = x.act_row(v)?;
    checked(vg.0 as i128 * w.0 as i128 + vg.1 as i128 * w.1 as i128, "⟨vγ, w⟩")
}
