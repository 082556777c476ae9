use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest entry magnitude allowed in any [`Mat2`].
pub const ENTRY_GUARD: i64 = i64::MAX / 8;

/// An integer 2×2 matrix `(a, b; c, d)` of determinant one.
///
/// Ordering is lexicographic on `(a, b, c, d)`, which is the canonical
/// serialization order for ball listings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        for (name, e) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if e.unsigned_abs() > ENTRY_GUARD as u64 {
                return Err(Error::Overflow { entry: name, guard: ENTRY_GUARD });
            }
        }
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::Determinant { a, b, c, d, det });
        }
        Ok(Mat2 { a, b, c, d })
    }

    /// Upper unipotent `(1, n; 0, 1)`.
    pub fn upper(n: i64) -> Self {
        Mat2 { a: 1, b: n, c: 0, d: 1 }
    }

    /// Lower unipotent `(1, 0; n, 1)`.
    pub fn lower(n: i64) -> Self {
        Mat2 { a: 1, b: 0, c: n, d: 1 }
    }

    pub fn inverse(&self) -> Self {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Checked product `self · rhs`.
    pub fn mul(&self, rhs: &Mat2) -> Result<Mat2> {
        mat_mul(self, rhs)
    }

    /// Row vector times matrix: `(x, y) · self`.
    pub fn act_row(&self, v: (i64, i64)) -> Result<(i64, i64)> {
        let x = dot2(v.0, self.a, v.1, self.c, "row action")?;
        let y = dot2(v.0, self.b, v.1, self.d, "row action")?;
        Ok((x, y))
    }

    /// Matrix times column vector: `self · (x, y)ᵀ`.
    pub fn act_col(&self, w: (i64, i64)) -> Result<(i64, i64)> {
        let x = dot2(self.a, w.0, self.b, w.1, "column action")?;
        let y = dot2(self.c, w.0, self.d, w.1, "column action")?;
        Ok((x, y))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "expected a,b,c,d but got {s:?}"
            )));
        }
        let mut e = [0i64; 4];
        for (slot, p) in e.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad matrix entry {p:?}")))?;
        }
        Mat2::new(e[0], e[1], e[2], e[3])
    }
}

#[inline]
fn dot2(x1: i64, y1: i64, x2: i64, y2: i64, entry: &'static str) -> Result<i64> {
    let v = x1
        .checked_mul(y1)
        .and_then(|p| x2.checked_mul(y2).and_then(|q| p.checked_add(q)))
        .ok_or(Error::Overflow { entry, guard: ENTRY_GUARD })?;
    if v.unsigned_abs() > ENTRY_GUARD as u64 {
        return Err(Error::Overflow { entry, guard: ENTRY_GUARD });
    }
    Ok(v)
}

/// Checked matrix product. Fails if any entry of the result leaves the guard.
#[inline]
pub fn mat_mul(x: &Mat2, y: &Mat2) -> Result<Mat2> {
    Ok(Mat2 {
        a: dot2(x.a, y.a, x.b, y.c, "a")?,
        b: dot2(x.a, y.b, x.b, y.d, "b")?,
        c: dot2(x.c, y.a, x.d, y.c, "c")?,
        d: dot2(x.c, y.b, x.d, y.d, "d")?,
    })
}

/// `a² + b² + c² + d²`, the squared Frobenius norm. Exact for every guarded matrix.
#[inline]
pub fn norm_sq(x: &Mat2) -> u128 {
    x.entries()
        .iter()
        .map(|&e| (e as i128 * e as i128) as u128)
        .sum()
}

/// Product of a word given as generator indices.
pub fn word_product(gens: &[Mat2], word: &[usize]) -> Result<Mat2> {
    word.iter()
        .try_fold(Mat2::IDENTITY, |acc, &i| mat_mul(&acc, &gens[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(a, b, c, d).unwrap()
    }

    #[test]
    fn products() {
        let i = Mat2::IDENTITY;
        assert_eq!(mat_mul(&i, &i).unwrap(), i);
        let p = mat_mul(&m(1, 3, 0, 1), &m(1, 0, 3, 1)).unwrap();
        assert_eq!(p, m(10, 3, 3, 1));
        assert_eq!(mat_mul(&p, &m(1, -3, -3, 10)).unwrap(), i);
        assert_eq!(p.inverse(), m(1, -3, -3, 10));
    }

    #[test]
    fn norms() {
        assert_eq!(norm_sq(&Mat2::IDENTITY), 2);
        assert_eq!(norm_sq(&m(1, 3, 0, 1)), 11);
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(matches!(Mat2::new(2, 0, 0, 1), Err(Error::Determinant { .. })));
        assert!(matches!(
            Mat2::new(ENTRY_GUARD + 1, 0, 0, 1),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let big = Mat2::upper(ENTRY_GUARD / 2 + 1);
        let err = mat_mul(&big, &big).unwrap_err();
        assert_eq!(err, Error::Overflow { entry: "b", guard: ENTRY_GUARD });
    }

    #[test]
    fn parse_and_display() {
        let x: Mat2 = "10, 3,3,1".parse().unwrap();
        assert_eq!(x.to_string(), "10,3,3,1");
        assert!("1,2,3".parse::<Mat2>().is_err());
        assert!("1,1,1,1".parse::<Mat2>().is_err());
    }

    fn word_strategy() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(0usize..4, 0..14)
    }

    fn lubotzky() -> Vec<Mat2> {
        vec![Mat2::upper(3), Mat2::upper(-3), Mat2::lower(3), Mat2::lower(-3)]
    }

    proptest! {
        #[test]
        fn determinant_is_preserved(w1 in word_strategy(), w2 in word_strategy()) {
            let g = lubotzky();
            let x = word_product(&g, &w1).unwrap();
            let y = word_product(&g, &w2).unwrap();
            let p = mat_mul(&x, &y).unwrap();
            prop_assert_eq!(p.a as i128 * p.d as i128 - p.b as i128 * p.c as i128, 1);
        }

        #[test]
        fn inverse_has_same_norm(w in word_strategy()) {
            let x = word_product(&lubotzky(), &w).unwrap();
            prop_assert_eq!(norm_sq(&x), norm_sq(&x.inverse()));
            prop_assert!(mat_mul(&x, &x.inverse()).unwrap().is_identity());
        }
    }
}
