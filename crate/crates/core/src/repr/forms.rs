use crate::error::{Error, Result};
use crate::matgroup::{form_coefficients, mat_mul, norm_sq, pairing, visit_ball, EnumLimits, GroupSpec, Mat2};

/// `𝔣_γ(x) = A x + B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub a: i64,
    pub b: i64,
}

impl LinearForm {
    /// `A x + B`, checked.
    pub fn eval(&self, x: i64) -> Option<i64> {
        self.a.checked_mul(x)?.checked_add(self.b)
    }
}

pub fn linear_form(g: &GroupSpec, x: &Mat2) -> Result<LinearForm> {
    let (a, b) = form_coefficients(x, g)?;
    Ok(LinearForm { a, b })
}

/// `⟨v (1, J k; 0, 1) γ, w⟩` computed through matrix products, independent of
/// the form coefficients.
pub fn orbit_value(g: &GroupSpec, gamma: &Mat2, k: i64) -> Result<i64> {
    let shift = Mat2::upper(
        g.j.checked_mul(k)
            .ok_or(Error::Overflow { entry: "J·k", guard: i64::MAX })?,
    );
    pairing(&mat_mul(&shift, gamma)?, g.v, g.w)
}

/// Largest radius searched by [`precompose_fix`] for a repairing element.
pub const PRECOMPOSE_RADIUS: f64 = 1024.0;

/// Replaces `v` by `v γ` and `w` by `γ′ w` so that `v₁ ≠ 0` and `w₂ ≠ 0`.
///
/// `⟨v γ Λ, w⟩ = ⟨v Λ, w⟩` and `⟨v Λ, γ′ w⟩ = ⟨v Λ γ′, w⟩`, so the represented
/// set is unchanged. `γ` and `γ′` are the first elements of least norm found
/// by the ball search that do the job.
pub fn precompose_fix(g: &GroupSpec) -> Result<GroupSpec> {
    if g.is_normalized() {
        return Ok(g.clone());
    }
    let mut radius = 8.0;
    loop {
        match precompose_within(g, radius) {
            Err(Error::Elementary(_)) if radius < PRECOMPOSE_RADIUS => radius *= 4.0,
            other => return other,
        }
    }
}

fn precompose_within(g: &GroupSpec, radius: f64) -> Result<GroupSpec> {
    let limits = EnumLimits { max_states: 10_000_000 };
    let mut best_v: Option<(u128, (i64, i64))> = None;
    let mut best_w: Option<(u128, (i64, i64))> = None;
    let mut failure = None;
    visit_ball(g, radius, &limits, |x| {
        if failure.is_some() {
            return;
        }
        let n = norm_sq(x);
        if g.v.0 == 0 && best_v.is_none_or(|(m, _)| n < m) {
            match x.act_row(g.v) {
                Ok(u) if u.0 != 0 => best_v = Some((n, u)),
                Ok(_) => {}
                Err(e) => failure = Some(e),
            }
        }
        if g.w.1 == 0 && best_w.is_none_or(|(m, _)| n < m) {
            match x.act_col(g.w) {
                Ok(u) if u.1 != 0 => best_w = Some((n, u)),
                Ok(_) => {}
                Err(e) => failure = Some(e),
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let v = if g.v.0 == 0 {
        best_v.map(|(_, u)| u).ok_or_else(|| {
            Error::Elementary(format!("no element below norm {radius} moves v = {:?} off the axis", g.v))
        })?
    } else {
        g.v
    };
    let w = if g.w.1 == 0 {
        best_w.map(|(_, u)| u).ok_or_else(|| {
            Error::Elementary(format!("no element below norm {radius} moves w = {:?} off the axis", g.w))
        })?
    } else {
        g.w
    };
    GroupSpec::with_prune_factor(g.generators.clone(), g.j, v, w, g.prune_factor)
}
