//! Coincidences among the linear forms and shifted counts near `n`.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use super::params::CircleParams;
use crate::error::{Error, Result};
use crate::matgroup::{GroupSpec, Mat2};
use crate::repr::{precompose_fix, Ensemble, LinearForm};

/// Indices of ensemble elements sharing each pair `(A_γ, B_γ)`.
pub fn form_classes(ens: &Ensemble) -> FxHashMap<LinearForm, Vec<usize>> {
    let mut classes: FxHashMap<LinearForm, Vec<usize>> = FxHashMap::default();
    for (i, f) in ens.forms.iter().enumerate() {
        classes.entry(*f).or_default().push(i);
    }
    classes
}

/// Multiplicity → number of `(A, B)` pairs with that many elements of `B_T`.
pub fn multiplicity_histogram(g: &GroupSpec, t: f64) -> Result<BTreeMap<usize, usize>> {
    let g = precompose_fix(g)?;
    Ok(histogram_of(&Ensemble::build(&g, t)?))
}

pub fn histogram_of(ens: &Ensemble) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for members in form_classes(ens).values() {
        *hist.entry(members.len()).or_insert(0) += 1;
    }
    hist
}

pub fn max_multiplicity(hist: &BTreeMap<usize, usize>) -> usize {
    hist.keys().next_back().copied().unwrap_or(0)
}

/// Checks that any two elements with the same form satisfy `γ′⁻¹ γ w = w`.
///
/// Since `v₁ ≠ 0`, `(A_γ, B_γ)` determines the column `γ w`, so the two
/// statements are equivalent; this verifies it exactly on every class.
pub fn stabilizer_check(g: &GroupSpec, ens: &Ensemble) -> Result<bool> {
    for members in form_classes(ens).values() {
        let first = ens.elements[members[0]];
        let inv = first.inverse();
        for &i in &members[1..] {
            let s: Mat2 = inv.mul(&ens.elements[i])?;
            if s.act_col(g.w)? != g.w {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A `T`-independent bound on the class size: `2 ⌊200 |v₁| J / |w|⌋ + 1`.
///
/// Within a class the elements are `γ₀ s^k` with `s` generating the
/// stabilizer of `w`; `‖γ₀ s^k − γ₀‖ ≥ |k| |γ₀ w| |w|` and the angular
/// condition forces `|γ₀ w| ≥ T / (100 |v₁| J)`, while both norms are `< T`.
pub fn multiplicity_bound(g: &GroupSpec) -> u64 {
    let w = ((g.w.0 as f64).powi(2) + (g.w.1 as f64).powi(2)).sqrt();
    let k = (200.0 * g.v.0.unsigned_abs() as f64 * g.j as f64 / w).floor() as u64;
    2 * k + 1
}

/// `#{γ ∈ B_T : |⟨v (1, x; 0, 1) γ, w⟩ − n| ≤ N / (2K₀)}`.
pub fn shifted_count(g: &GroupSpec, ens: &Ensemble, p: &CircleParams, x: i64, n: i64) -> Result<usize> {
    if (x as f64) < p.x || (x as f64) > 2.0 * p.x {
        return Err(Error::InvalidArgument(format!("x = {x} is outside [X, 2X] with X = {}", p.x)));
    }
    let an = n.unsigned_abs() as f64;
    if an <= p.n / 2.0 || an >= p.n {
        return Err(Error::InvalidArgument(format!("|n| = {an} is outside (N/2, N)")));
    }
    if !g.is_normalized() {
        return Err(Error::InvalidArgument("spec needs v₁ ≠ 0 and w₂ ≠ 0".into()));
    }
    let half = p.n / (2.0 * p.k0);
    let j = g.j as i128;
    let mut count = 0;
    for f in &ens.forms {
        // ⟨v (1, x; 0, 1) γ, w⟩ = B + x A / J, and J divides A.
        let value = f.b as i128 + x as i128 * (f.a as i128 / j);
        if ((value - n as i128) as f64).abs() <= half {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{ensemble_ball, mat_mul, pairing};

    fn lub(w: (i64, i64)) -> GroupSpec {
        precompose_fix(&GroupSpec::new(vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), w).unwrap()).unwrap()
    }

    #[test]
    fn empty_below_sqrt_two() {
        assert!(multiplicity_histogram(&lub((7, 5)), 1.0).unwrap().is_empty());
    }

    #[test]
    fn histogram_counts_every_element() {
        let g = lub((7, 5));
        let ens = Ensemble::build(&g, 200.0).unwrap();
        let hist = histogram_of(&ens);
        assert_eq!(hist.iter().map(|(m, c)| m * c).sum::<usize>(), ens.len());
        assert!(stabilizer_check(&g, &ens).unwrap());
        assert!(max_multiplicity(&hist) as u64 <= multiplicity_bound(&g));
    }

    #[test]
    fn stabilizer_classes_along_the_unipotent() {
        // w = (0, 1) is fixed by every (1, 0; 3k, 1), so those all share a form
        // as long as the angular condition lets them in.
        let g = lub((0, 1));
        let ens = Ensemble::build(&g, 200.0).unwrap();
        assert!(stabilizer_check(&g, &ens).unwrap());
        let hist = histogram_of(&ens);
        assert!(max_multiplicity(&hist) > 1);
        assert!(max_multiplicity(&hist) as u64 <= multiplicity_bound(&g));
    }

    #[test]
    fn shifted_count_matches_matrix_scan() {
        let g = lub((7, 5));
        let p = CircleParams::explicit(2500.0, 50.0, 9.0, 81.0, 0.0).unwrap();
        let ens = Ensemble::build(&g, 50.0).unwrap();
        let ball = ensemble_ball(&g, 50.0).unwrap();
        let half = p.n / (2.0 * p.k0);
        for (x, n) in [(50i64, 1300i64), (77, -2000), (100, 2499)] {
            let naive = ball
                .elements
                .iter()
                .filter(|gm| {
                    let v = pairing(&mat_mul(&Mat2::upper(x), gm).unwrap(), g.v, g.w).unwrap();
                    ((v - n) as f64).abs() <= half
                })
                .count();
            assert_eq!(shifted_count(&g, &ens, &p, x, n).unwrap(), naive);
        }
    }

    #[test]
    fn wide_window_counts_everything() {
        let g = lub((7, 5));
        let p = CircleParams::explicit(2500.0, 50.0, 9.0, 1e-9, 0.0).unwrap();
        let ens = Ensemble::build(&g, 50.0).unwrap();
        assert_eq!(shifted_count(&g, &ens, &p, 60, 2000).unwrap(), ens.len());
        assert!(shifted_count(&g, &ens, &p, 10, 2000).is_err());
        assert!(shifted_count(&g, &ens, &p, 60, 100).is_err());
    }
}
