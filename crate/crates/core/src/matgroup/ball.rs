//! Enumeration of `{γ ∈ Λ : ‖γ‖ < T}`.
//!
//! The search is a breadth-first walk over the Cayley graph of the
//! generators and their inverses, restricted to states whose norm is at most
//! `prune_factor · T`. Because the step set is symmetric, every neighbour of
//! the current sphere lies in the previous, current or next sphere, so only
//! three spheres are ever held in memory. That makes deep radii (hundreds of
//! millions of elements) feasible as long as the caller streams the result.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::linear::angular_ok;
use super::mat2::{mat_mul, norm_sq, Mat2};
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// Denominator of the angular condition `|A_γ| ≥ T / divisor`.
pub const DEFAULT_ANGULAR_DIVISOR: f64 = 100.0;

/// Resource limits for a pruned search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumLimits {
    /// Cap on the number of states explored (inside the prune radius).
    pub max_states: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_states: 1_000_000_000 }
    }
}

/// A finite piece of the orbit: elements of norm below `radius`, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub radius: f64,
    pub elements: Vec<Mat2>,
    pub angular_filtered: bool,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Mat2) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// Smallest integer strictly above every admissible `norm_sq` for radius `t`,
/// i.e. `norm_sq(γ) < T²  ⇔  norm_sq(γ) < ball_bound(T)`.
pub fn ball_bound(t: f64) -> u128 {
    if t <= 0.0 {
        return 0;
    }
    (t * t).ceil() as u128
}

fn prune_bound(t: f64, prune_factor: f64) -> u128 {
    let r = prune_factor * t;
    (r * r).floor() as u128
}

/// Visits every element of norm `< t` exactly once, in a deterministic order
/// (by sphere, then by generation order inside a sphere). Returns the number
/// of visited elements.
pub fn visit_ball<F>(g: &GroupSpec, t: f64, limits: &EnumLimits, mut visit: F) -> Result<usize>
where
    F: FnMut(&Mat2),
{
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {t} must be positive")));
    }
    let steps = g.steps();
    let inside = ball_bound(t);
    let keep = prune_bound(t, g.prune_factor);

    let mut visited = 0usize;
    let mut explored = 0usize;
    let mut prev: FxHashSet<Mat2> = FxHashSet::default();
    let mut cur: FxHashSet<Mat2> = FxHashSet::default();
    let mut frontier: Vec<Mat2> = Vec::new();

    let id = Mat2::IDENTITY;
    if norm_sq(&id) <= keep {
        cur.insert(id);
        frontier.push(id);
        explored += 1;
        if norm_sq(&id) < inside {
            visit(&id);
            visited += 1;
        }
    }

    while !frontier.is_empty() {
        let candidates: Vec<Result<Option<Mat2>>> = frontier
            .par_iter()
            .flat_map_iter(|m| {
                steps.iter().map(move |s| {
                    let p = mat_mul(m, s)?;
                    Ok((norm_sq(&p) <= keep).then_some(p))
                })
            })
            .collect();

        let mut next: FxHashSet<Mat2> = FxHashSet::default();
        let mut next_frontier = Vec::new();
        for cand in candidates {
            let Some(p) = cand? else { continue };
            if prev.contains(&p) || cur.contains(&p) || !next.insert(p) {
                continue;
            }
            explored += 1;
            if explored > limits.max_states {
                return Err(Error::Capacity { what: "ball enumeration states", limit: limits.max_states });
            }
            if norm_sq(&p) < inside {
                visit(&p);
                visited += 1;
            }
            next_frontier.push(p);
        }
        prev = std::mem::replace(&mut cur, next);
        frontier = next_frontier;
    }
    Ok(visited)
}

/// Returns `{γ ∈ Λ : ‖γ‖ < t}` as found by the pruned search, sorted by `(a, b, c, d)`.
pub fn enumerate_ball(g: &GroupSpec, t: f64) -> Result<Ball> {
    enumerate_ball_with(g, t, &EnumLimits::default())
}

pub fn enumerate_ball_with(g: &GroupSpec, t: f64, limits: &EnumLimits) -> Result<Ball> {
    if t < std::f64::consts::SQRT_2 {
        return Err(Error::InvalidArgument(format!("radius {t} is below √2")));
    }
    let mut elements = Vec::new();
    visit_ball(g, t, limits, |m| elements.push(*m))?;
    elements.sort_unstable();
    Ok(Ball { radius: t, elements, angular_filtered: false })
}

/// Number of elements of norm `< t`, without storing them.
pub fn count_ball(g: &GroupSpec, t: f64, limits: &EnumLimits) -> Result<usize> {
    visit_ball(g, t, limits, |_| {})
}

/// Keeps the elements with `|A_γ| ≥ T / 100`.
pub fn filter_angular(ball: Ball, g: &GroupSpec) -> Result<Ball> {
    filter_angular_with(ball, g, DEFAULT_ANGULAR_DIVISOR)
}

pub fn filter_angular_with(ball: Ball, g: &GroupSpec, divisor: f64) -> Result<Ball> {
    if ball.angular_filtered {
        return Err(Error::InvalidArgument("ball is already angular-filtered".into()));
    }
    let mut kept = Vec::with_capacity(ball.elements.len());
    for x in ball.elements {
        if angular_ok(&x, g, ball.radius, divisor)? {
            kept.push(x);
        }
    }
    Ok(Ball { radius: ball.radius, elements: kept, angular_filtered: true })
}

/// `B_T` itself: the norm ball with the angular condition applied.
pub fn ensemble_ball(g: &GroupSpec, t: f64) -> Result<Ball> {
    filter_angular(enumerate_ball(g, t)?, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn lub(pf: Option<f64>) -> GroupSpec {
        let gens = vec![Mat2::upper(3), Mat2::lower(3)];
        match pf {
            Some(pf) => GroupSpec::with_prune_factor(gens, 3, (3, 1), (0, 1), pf).unwrap(),
            None => GroupSpec::new(gens, 3, (3, 1), (0, 1)).unwrap(),
        }
    }

    /// Unpruned enumeration of all freely reduced words up to `max_len`.
    fn word_oracle(g: &GroupSpec, t: f64, max_len: usize) -> BTreeSet<Mat2> {
        let steps = g.steps();
        let inv: Vec<Option<usize>> = steps
            .iter()
            .map(|s| steps.iter().position(|u| *u == s.inverse()))
            .collect();
        let bound = ball_bound(t);
        let mut out = BTreeSet::new();
        let mut stack = vec![(Mat2::IDENTITY, usize::MAX, 0usize)];
        while let Some((m, last, len)) = stack.pop() {
            if norm_sq(&m) < bound {
                out.insert(m);
            }
            if len == max_len {
                continue;
            }
            for (i, s) in steps.iter().enumerate() {
                if last != usize::MAX && inv[last] == Some(i) {
                    continue;
                }
                stack.push((mat_mul(&m, s).unwrap(), i, len + 1));
            }
        }
        out
    }

    #[test]
    fn tiny_radii() {
        let g = lub(None);
        let b = enumerate_ball(&g, 2.0).unwrap();
        assert_eq!(b.elements, vec![Mat2::IDENTITY]);

        let b = enumerate_ball(&g, 11f64.sqrt() + 0.5).unwrap();
        let mut expect = vec![
            Mat2::IDENTITY,
            Mat2::upper(3),
            Mat2::upper(-3),
            Mat2::lower(3),
            Mat2::lower(-3),
        ];
        expect.sort();
        assert_eq!(b.elements, expect);
        assert!(enumerate_ball(&g, 1.0).is_err());
    }

    #[test]
    fn matches_word_oracle_small_radius() {
        for pf in [None, Some(1.0)] {
            let g = lub(pf);
            for t in [2.0, 5.0, 12.0, 20.0, 30.0] {
                let b = enumerate_ball(&g, t).unwrap();
                let oracle: Vec<Mat2> = word_oracle(&g, t, 12).into_iter().collect();
                assert_eq!(b.elements, oracle, "T = {t}, pf = {pf:?}");
            }
        }
    }

    #[test]
    fn ball_is_monotone_and_inverse_closed() {
        let g = lub(Some(1.0));
        let small = enumerate_ball(&g, 40.0).unwrap();
        let big = enumerate_ball(&g, 80.0).unwrap();
        assert!(small.elements.iter().all(|x| big.contains(x)));
        assert!(big.elements.iter().all(|x| big.contains(&x.inverse())));
        assert!(big.elements.iter().all(|x| (norm_sq(x) as f64) < 80.0 * 80.0));
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let g = lub(Some(2.0));
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| enumerate_ball(&g, 300.0).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn capacity_is_enforced() {
        let g = lub(Some(1.0));
        let err = enumerate_ball_with(&g, 500.0, &EnumLimits { max_states: 100 }).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn angular_filter() {
        let g = GroupSpec::new(vec![Mat2::upper(1), Mat2::lower(1)], 1, (1, 0), (0, 1)).unwrap();
        let empty = Ball { radius: 200.0, elements: vec![], angular_filtered: false };
        assert!(filter_angular(empty, &g).unwrap().is_empty());

        // A_I = 1 < 200 / 100.
        let only_id = Ball { radius: 200.0, elements: vec![Mat2::IDENTITY], angular_filtered: false };
        let f = filter_angular(only_id, &g).unwrap();
        assert!(f.is_empty() && f.angular_filtered);
        assert!(filter_angular(f, &g).is_err());
    }
}
