//! The smoothed representation function `ℛ_N`.

use super::forms::{linear_form, LinearForm};
use super::psi::psi_eval;
use crate::error::{Error, Result};
use crate::matgroup::{
    enumerate_ball_with, filter_angular_with, Ball, EnumLimits, GroupSpec, Mat2, DEFAULT_ANGULAR_DIVISOR,
};

/// `B_T` together with the linear forms of its elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub t: f64,
    pub elements: Vec<Mat2>,
    pub forms: Vec<LinearForm>,
}

impl Ensemble {
    pub fn build(g: &GroupSpec, t: f64) -> Result<Self> {
        Self::build_with(g, t, DEFAULT_ANGULAR_DIVISOR, &EnumLimits::default())
    }

    pub fn build_with(g: &GroupSpec, t: f64, divisor: f64, limits: &EnumLimits) -> Result<Self> {
        if t < std::f64::consts::SQRT_2 {
            return Ok(Ensemble { t, elements: vec![], forms: vec![] });
        }
        let ball = filter_angular_with(enumerate_ball_with(g, t, limits)?, g, divisor)?;
        Self::from_ball(g, &ball)
    }

    pub fn from_ball(g: &GroupSpec, ball: &Ball) -> Result<Self> {
        if !ball.angular_filtered {
            return Err(Error::InvalidArgument("ensemble needs an angular-filtered ball".into()));
        }
        let forms = ball
            .elements
            .iter()
            .map(|x| linear_form(g, x))
            .collect::<Result<_>>()?;
        Ok(Ensemble { t: ball.radius, elements: ball.elements.clone(), forms })
    }

    pub fn empty(t: f64) -> Self {
        Ensemble { t, elements: vec![], forms: vec![] }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// Integers `x` with `ψ(x / X) ≠ 0`, i.e. `X/2 < x < 5X/2`.
pub fn x_range(x_scale: f64) -> std::ops::RangeInclusive<i64> {
    let lo = (0.5 * x_scale).floor() as i64 + 1;
    let hi = (2.5 * x_scale).ceil() as i64 - 1;
    lo..=hi
}

/// `ℛ_N(n) = Σ_{γ ∈ B_T} Σ_x ψ(x/X) 1{𝔣_γ(x) = n}`.
pub fn representation_function(ens: &Ensemble, x_scale: f64, n: i64) -> f64 {
    let mut total = 0.0;
    for f in &ens.forms {
        if f.a == 0 {
            if f.b == n {
                total += x_range(x_scale).map(|x| psi_eval(x as f64 / x_scale)).sum::<f64>();
            }
            continue;
        }
        let diff = n as i128 - f.b as i128;
        if diff % f.a as i128 == 0 {
            let x = diff / f.a as i128;
            total += psi_eval(x as f64 / x_scale);
        }
    }
    total
}

/// `ℛ_N` on the whole of its support, as a dense array starting at `lo`.
#[derive(Clone, Debug, PartialEq)]
pub struct RnTable {
    pub lo: i64,
    pub values: Vec<f64>,
}

impl RnTable {
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> f64 {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.values.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.lo + i as i64, *v))
    }
}

/// Capacity for the dense `ℛ_N` table.
pub const RN_TABLE_LIMIT: usize = 1 << 28;

pub fn rn_table(ens: &Ensemble, x_scale: f64) -> Result<RnTable> {
    let xs = x_range(x_scale);
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for f in &ens.forms {
        for x in [*xs.start(), *xs.end()] {
            let n = f
                .eval(x)
                .ok_or(Error::Overflow { entry: "𝔣_γ(x)", guard: i64::MAX })?;
            lo = lo.min(n);
            hi = hi.max(n);
        }
    }
    if ens.is_empty() || xs.is_empty() {
        return Ok(RnTable { lo: 0, values: vec![] });
    }
    let len = (hi - lo + 1) as usize;
    if len > RN_TABLE_LIMIT {
        return Err(Error::Capacity { what: "ℛ_N table length", limit: RN_TABLE_LIMIT });
    }
    let weights: Vec<f64> = xs.clone().map(|x| psi_eval(x as f64 / x_scale)).collect();
    let mut values = vec![0.0; len];
    for f in &ens.forms {
        for (x, w) in xs.clone().zip(&weights) {
            values[(f.a * x + f.b - lo) as usize] += w;
        }
    }
    Ok(RnTable { lo, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::precompose_fix;

    fn fixture() -> GroupSpec {
        let g = GroupSpec::new(vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), (7, 5)).unwrap();
        precompose_fix(&g).unwrap()
    }

    #[test]
    fn empty_ensemble_gives_zero() {
        let e = Ensemble::empty(1.0);
        assert_eq!(representation_function(&e, 10.0, 5), 0.0);
        assert!(rn_table(&e, 10.0).unwrap().values.is_empty());
    }

    #[test]
    fn agrees_with_double_loop() {
        let g = fixture();
        let ens = Ensemble::build(&g, 50.0).unwrap();
        assert!(!ens.is_empty());
        let x_scale = 50.0;
        let table = rn_table(&ens, x_scale).unwrap();
        // Naive: every γ, every integer x in a generous range.
        let mut naive = std::collections::BTreeMap::new();
        for f in &ens.forms {
            for x in -10..200 {
                let w = psi_eval(x as f64 / x_scale);
                if w != 0.0 {
                    *naive.entry(f.a * x + f.b).or_insert(0.0) += w;
                }
            }
        }
        for (n, v) in &naive {
            assert!((table.get(*n) - v).abs() < 1e-12);
            assert!((representation_function(&ens, x_scale, *n) - v).abs() < 1e-12);
        }
        let total: f64 = table.values.iter().sum();
        assert!((total - naive.values().sum::<f64>()).abs() < 1e-9);
        // Off-progression integers get nothing.
        for (n, v) in table.iter() {
            if v == 0.0 {
                assert_eq!(representation_function(&ens, x_scale, n), 0.0);
            }
        }
    }
}
