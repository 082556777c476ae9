//! Word-level helpers for `Γ(2) = ⟨A, B⟩`, `A = (1,2;0,1)`, `B = (1,0;2,1)`,
//! and its commutator subgroup.

use super::mat2::{mat_mul, Mat2};
use crate::error::{Error, Result};

pub const GEN_A: Mat2 = Mat2 { a: 1, b: 2, c: 0, d: 1 };
pub const GEN_B: Mat2 = Mat2 { a: 1, b: 0, c: 2, d: 1 };

/// A signed letter over the alphabet `{A, B}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::A => GEN_A,
            Letter::AInv => GEN_A.inverse(),
            Letter::B => GEN_B,
            Letter::BInv => GEN_B.inverse(),
        }
    }
}

/// Evaluates a word in `A^{±1}, B^{±1}`.
pub fn word_matrix(word: &[Letter]) -> Result<Mat2> {
    word.iter()
        .try_fold(Mat2::IDENTITY, |acc, l| mat_mul(&acc, &l.matrix()))
}

/// True iff the `A`-exponent sum and the `B`-exponent sum both vanish, which
/// characterizes words representing elements of `[Γ(2), Γ(2)]`.
pub fn word_exponent_test(word: &[Letter]) -> bool {
    let (mut ea, mut eb) = (0i64, 0i64);
    for l in word {
        match l {
            Letter::A => ea += 1,
            Letter::AInv => ea -= 1,
            Letter::B => eb += 1,
            Letter::BInv => eb -= 1,
        }
    }
    ea == 0 && eb == 0
}

pub fn in_gamma2(x: &Mat2) -> bool {
    x.a.rem_euclid(2) == 1 && x.b.rem_euclid(2) == 0 && x.c.rem_euclid(2) == 0 && x.d.rem_euclid(2) == 1
}

/// `Γ₀(P)` membership: `c ≡ 0 (mod P)`.
pub fn in_gamma0(x: &Mat2, p: i64) -> bool {
    p != 0 && x.c.rem_euclid(p) == 0
}

/// Result of [`primitive_reduce`]: `reduced = A^m · x · B^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub reduced: Mat2,
    pub m: i64,
    pub n: i64,
}

/// Brings `x ∈ Γ(2)` to the unique primitive representative of `A^ℤ x B^ℤ`:
/// `d` unchanged and `|b|, |c| < |d|`.
pub fn primitive_reduce(x: &Mat2) -> Result<Reduction> {
    if !in_gamma2(x) {
        return Err(Error::NotReducible("matrix is not in Γ(2)"));
    }
    if x.d == 0 {
        return Err(Error::NotReducible("d = 0"));
    }
    // A^m x has b + 2md in the top-right corner; x B^n has c + 2nd bottom-left.
    // b is even and d odd, so exactly one value in (−|d|, |d|) is reachable.
    let m = centered_shift(x.b, x.d);
    let n = centered_shift(x.c, x.d);
    let left = Mat2::upper(2 * m);
    let right = Mat2::lower(2 * n);
    let reduced = mat_mul(&mat_mul(&left, x)?, &right)?;
    debug_assert!(reduced.b.abs() < reduced.d.abs() && reduced.c.abs() < reduced.d.abs());
    Ok(Reduction { reduced, m, n })
}

/// The integer `k` with `|e + 2kd| < |d|`.
fn centered_shift(e: i64, d: i64) -> i64 {
    let step = 2 * d as i128;
    let e = e as i128;
    let k = (-e).div_euclid(step.abs()) * step.signum();
    let mut best = k;
    for cand in [k - 1, k, k + 1] {
        if (e + cand * step).abs() < (e + best * step).abs() {
            best = cand;
        }
    }
    best as i64
}
