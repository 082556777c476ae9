//! Represented integers in a window `[−N, N]` and the exceptional set.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use bitvec::prelude::*;

use super::forms::{linear_form, orbit_value};
use crate::congruence::{is_admissible, ObstructionReport};
use crate::error::{Error, Result};
use crate::matgroup::{norm_sq, visit_ball, word_ball_monotone, EnumLimits, GroupSpec, Mat2};

/// Evidence that `n = ⟨v (1, J x; 0, 1) γ, w⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub gamma: Mat2,
    pub x: i64,
}

impl Witness {
    fn key(&self) -> (u128, u64) {
        (norm_sq(&self.gamma), self.x.unsigned_abs())
    }
}

/// Integers of `[−N, N]` found in `𝒮` using ball elements of norm `< T`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepWindow {
    pub n_max: i64,
    pub t: f64,
    bits: BitVec,
    witnesses: Vec<Option<Witness>>,
}

impl RepWindow {
    fn new(n_max: i64, t: f64) -> Self {
        let len = (2 * n_max + 1) as usize;
        RepWindow { n_max, t, bits: bitvec![0; len], witnesses: vec![None; len] }
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n.abs() <= self.n_max).then(|| (n + self.n_max) as usize)
    }

    pub fn contains(&self, n: i64) -> bool {
        self.index(n).is_some_and(|i| self.bits[i])
    }

    /// The stored witness: least `(‖γ‖, |x|)` among those seen.
    pub fn witness(&self, n: i64) -> Option<Witness> {
        self.index(n).and_then(|i| self.witnesses[i])
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    /// Represented integers in increasing order.
    pub fn represented(&self) -> impl Iterator<Item = i64> + '_ {
        self.bits.iter_ones().map(move |i| i as i64 - self.n_max)
    }

    fn mark(&mut self, n: i64, w: Witness) {
        let i = (n + self.n_max) as usize;
        self.bits.set(i, true);
        match &mut self.witnesses[i] {
            Some(old) if old.key() <= w.key() => {}
            slot => *slot = Some(w),
        }
    }
}

/// Marks every `n ∈ [−N, N]` of the form `A_γ k + B_γ` for `γ` in the
/// (unfiltered) norm ball of radius `T`. Direct values `⟨v γ, w⟩ = B_γ` are the
/// `k = 0` terms.
pub fn represent_set(g: &GroupSpec, n_max: i64, t: f64) -> Result<RepWindow> {
    represent_set_with(g, n_max, t, &EnumLimits::default())
}

pub fn represent_set_with(g: &GroupSpec, n_max: i64, t: f64, limits: &EnumLimits) -> Result<RepWindow> {
    if n_max < 0 {
        return Err(Error::InvalidArgument(format!("window bound {n_max} is negative")));
    }
    let mut window = RepWindow::new(n_max, t);
    let mut failure = None;
    visit_ball(g, t, limits, |gamma| {
        if failure.is_some() {
            return;
        }
        match linear_form(g, gamma) {
            Ok(f) => fill(&mut window, *gamma, f.a, f.b),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(window),
    }
}

fn fill(window: &mut RepWindow, gamma: Mat2, a: i64, b: i64) {
    let n_max = window.n_max;
    if a == 0 {
        if b.abs() <= n_max {
            window.mark(b, Witness { gamma, x: 0 });
        }
        return;
    }
    let step = a.unsigned_abs() as i128;
    let (a, b, lo) = (a as i128, b as i128, -(n_max as i128));
    let mut n = lo + (b - lo).rem_euclid(step);
    while n <= n_max as i128 {
        let x = ((n - b) / a) as i64;
        window.mark(n as i64, Witness { gamma, x });
        n += step;
    }
}

/// Recomputes `⟨v (1, J x; 0, 1) γ, w⟩` from scratch and compares with `n`.
pub fn verify_witness(g: &GroupSpec, n: i64, w: &Witness) -> Result<bool> {
    Ok(orbit_value(g, &w.gamma, w.x)? == n)
}

/// Admissible integers of the window that were not represented, ascending.
pub fn exceptional_in(window: &RepWindow, report: &ObstructionReport) -> Vec<i64> {
    (-window.n_max..=window.n_max)
        .filter(|&n| is_admissible(report, n) && !window.contains(n))
        .collect()
}

/// `{n ∈ [−N, N] : n admissible, n not found below norm T}`.
pub fn exceptional_set(g: &GroupSpec, report: &ObstructionReport, n_max: i64, t: f64) -> Result<Vec<i64>> {
    Ok(exceptional_in(&represent_set(g, n_max, t)?, report))
}

/// Values `⟨v (1, J k; 0, 1) γ, w⟩` in `[−N, N]` for the given elements,
/// each recomputed by matrix multiplication. The step in `k` is read off
/// from the values at `k = 0` and `k = 1`.
pub fn represented_by_products(g: &GroupSpec, elements: &[Mat2], n_max: i64) -> Result<BTreeSet<i64>> {
    let mut out = BTreeSet::new();
    for gamma in elements {
        let b = orbit_value(g, gamma, 0)?;
        let step = orbit_value(g, gamma, 1)? - b;
        if step == 0 {
            if b.abs() <= n_max {
                out.insert(b);
            }
            continue;
        }
        let s = step.abs();
        let k_lo = (-n_max - b).div_euclid(s) - 1;
        let k_hi = (n_max - b).div_euclid(s) + 1;
        for k in k_lo..=k_hi {
            let n = orbit_value(g, gamma, k * step.signum())?;
            if n.abs() <= n_max {
                out.insert(n);
            }
        }
    }
    Ok(out)
}

/// [`exceptional_set`] computed from the reduced-word oracle ball and
/// [`represented_by_products`]. Exact for groups whose norm grows along
/// reduced words (see [`word_ball_monotone`]).
pub fn exceptional_oracle(g: &GroupSpec, report: &ObstructionReport, n_max: i64, t: f64) -> Result<Vec<i64>> {
    let elements = word_ball_monotone(g, t)?;
    let found = represented_by_products(g, &elements, n_max)?;
    Ok((-n_max..=n_max).filter(|&n| is_admissible(report, n) && !found.contains(&n)).collect())
}

/// Exceptional counts along `T, 2T, 4T, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stabilization {
    /// `(T, count)` for every radius evaluated.
    pub samples: Vec<(f64, usize)>,
    /// The count once it has stayed fixed across the requested number of doublings.
    pub stable_count: Option<usize>,
    /// Exceptional list at the last radius.
    pub exceptional: Vec<i64>,
}

impl Stabilization {
    pub fn non_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

/// Doubles `T` from `t0` until the exceptional count is unchanged over
/// `doublings` consecutive doublings, or `t_max` is passed.
pub fn stabilize_exceptional(
    g: &GroupSpec,
    report: &ObstructionReport,
    n_max: i64,
    t0: f64,
    t_max: f64,
    doublings: usize,
    limits: &EnumLimits,
) -> Result<Stabilization> {
    let mut samples = Vec::new();
    let mut exceptional = Vec::new();
    let mut t = t0;
    while t <= t_max {
        exceptional = exceptional_in(&represent_set_with(g, n_max, t, limits)?, report);
        samples.push((t, exceptional.len()));
        let k = samples.len();
        if k > doublings && samples[k - 1 - doublings..].iter().all(|s| s.1 == samples[k - 1].1) {
            return Ok(Stabilization { stable_count: Some(samples[k - 1].1), samples, exceptional });
        }
        t *= 2.0;
    }
    Ok(Stabilization { samples, stable_count: None, exceptional })
}

/// One integer per line, preceded by `# key: value` metadata lines.
pub fn exceptional_csv(list: &[i64], meta: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}: {v}");
    }
    for n in list {
        let _ = writeln!(out, "{n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{discover_z, DEFAULT_POWER_BOUND, DEFAULT_PRIME_BOUND};
    use crate::matgroup::{mat_mul, pairing};
    use crate::repr::precompose_fix;
    use std::collections::BTreeSet;

    fn lub(v: (i64, i64), w: (i64, i64)) -> GroupSpec {
        let g = GroupSpec::new(vec![Mat2::upper(3), Mat2::lower(3)], 3, v, w).unwrap();
        precompose_fix(&g).unwrap()
    }

    /// Direct values over the freely reduced words up to `max_len`, together
    /// with their parabolic progressions.
    fn word_oracle(g: &GroupSpec, n_max: i64, t: f64, max_len: usize) -> BTreeSet<i64> {
        let steps = g.steps();
        let mut elems = BTreeSet::new();
        let mut stack = vec![(Mat2::IDENTITY, usize::MAX, 0usize)];
        while let Some((m, last, len)) = stack.pop() {
            if (norm_sq(&m) as f64) < t * t {
                elems.insert(m);
            }
            if len == max_len {
                continue;
            }
            for (i, s) in steps.iter().enumerate() {
                if last != usize::MAX && steps[last].inverse() == *s {
                    continue;
                }
                stack.push((mat_mul(&m, s).unwrap(), i, len + 1));
            }
        }
        let mut out = BTreeSet::new();
        for gamma in elems {
            let direct = pairing(&gamma, g.v, g.w).unwrap();
            let step = g.v.0 * g.j * (gamma.c * g.w.0 + gamma.d * g.w.1);
            for k in -(2 * n_max + 1)..=(2 * n_max + 1) {
                let n = direct + step * k;
                if n.abs() <= n_max {
                    out.insert(n);
                }
                if step == 0 {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn nine_n_plus_one() {
        let g = lub((0, 1), (0, 1));
        let w = represent_set(&g, 100, 30.0).unwrap();
        let expect: Vec<i64> = (-100..=100).filter(|n: &i64| n.rem_euclid(9) == 1).collect();
        assert_eq!(w.represented().collect::<Vec<_>>(), expect);
    }

    #[test]
    fn matches_word_oracle() {
        for g in [lub((0, 1), (0, 1)), lub((0, 1), (7, 5))] {
            for t in [5.0, 12.0, 25.0] {
                let w = represent_set(&g, 200, t).unwrap();
                let got: BTreeSet<i64> = w.represented().collect();
                assert_eq!(got, word_oracle(&g, 200, t, 12), "T = {t}");
            }
        }
    }

    #[test]
    fn witnesses_are_sound() {
        let g = lub((0, 1), (7, 5));
        let w = represent_set(&g, 3000, 200.0).unwrap();
        for n in w.represented() {
            let wit = w.witness(n).unwrap();
            assert!(verify_witness(&g, n, &wit).unwrap(), "n = {n}");
        }
        assert!(w.witness(0).is_none());
    }

    #[test]
    fn monotone_in_t_and_contained_in_admissible() {
        let g = lub((0, 1), (7, 5));
        let report = discover_z(&g, DEFAULT_PRIME_BOUND, DEFAULT_POWER_BOUND).unwrap();
        let small = represent_set(&g, 10_000, 100.0).unwrap();
        let big = represent_set(&g, 10_000, 400.0).unwrap();
        assert!(small.represented().all(|n| big.contains(n)));
        assert!(big.represented().all(|n| is_admissible(&report, n)));

        let e1 = exceptional_in(&represent_set(&g, 2000, 50.0).unwrap(), &report);
        let e2 = exceptional_in(&represent_set(&g, 2000, 200.0).unwrap(), &report);
        assert!(e2.iter().all(|n| e1.contains(n)));
    }

    #[test]
    fn precompose_preserves_the_represented_set() {
        let raw =
            GroupSpec::with_prune_factor(vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), (7, 5), 1.0).unwrap();
        let fixed = precompose_fix(&raw).unwrap();
        let a = represent_set(&raw, 500, 3000.0).unwrap();
        let b = represent_set(&fixed, 500, 3000.0).unwrap();
        assert_eq!(a.represented().collect::<Vec<_>>(), b.represented().collect::<Vec<_>>());
    }

    #[test]
    fn full_coverage_fixture_has_no_exceptions() {
        let g = lub((0, 1), (0, 1));
        let report = discover_z(&g, DEFAULT_PRIME_BOUND, DEFAULT_POWER_BOUND).unwrap();
        assert!(exceptional_set(&g, &report, 5000, 30.0).unwrap().is_empty());
    }

    #[test]
    fn csv_layout() {
        let s = exceptional_csv(&[-4, 2], &[("N", "10".into())]);
        assert_eq!(s, "# N: 10\n-4\n2\n");
    }

    #[test]
    fn oracle_route_agrees() {
        let g = lub((0, 1), (7, 5));
        let report = discover_z(&g, DEFAULT_PRIME_BOUND, DEFAULT_POWER_BOUND).unwrap();
        for t in [50.0, 400.0] {
            assert_eq!(exceptional_oracle(&g, &report, 2000, t).unwrap(), exceptional_set(&g, &report, 2000, t).unwrap());
        }
        let elems = crate::matgroup::word_ball_monotone(&g, 300.0).unwrap();
        let direct: Vec<i64> = represented_by_products(&g, &elems, 500).unwrap().into_iter().collect();
        let window: Vec<i64> = represent_set(&g, 500, 300.0).unwrap().represented().collect();
        assert_eq!(direct, window);
    }
}
