//! Brute-force ball enumeration over freely reduced words, used as an
//! independent check on the breadth-first search.

use std::collections::BTreeSet;

use super::ball::ball_bound;
use super::mat2::{mat_mul, norm_sq, Mat2};
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// Cap on the number of words visited by [`word_ball`].
pub const WORD_ORACLE_LIMIT: usize = 200_000_000;

/// Every product of at most `max_len` letters (no letter followed by its
/// inverse) with norm `< t`, deduplicated and sorted. No norm pruning.
pub fn word_ball(g: &GroupSpec, t: f64, max_len: usize) -> Result<Vec<Mat2>> {
    walk(g, t, Some(max_len))
}

/// Like [`word_ball`] but stops extending a word once its norm reaches `t`.
///
/// Exact whenever the norm grows along every reduced word, as it does for
/// `⟨(1, m; 0, 1), (1, 0; m, 1)⟩` with `m ≥ 2`.
pub fn word_ball_monotone(g: &GroupSpec, t: f64) -> Result<Vec<Mat2>> {
    walk(g, t, None)
}

fn walk(g: &GroupSpec, t: f64, max_len: Option<usize>) -> Result<Vec<Mat2>> {
    let steps = g.steps();
    let inverse: Vec<Option<usize>> =
        steps.iter().map(|s| steps.iter().position(|u| *u == s.inverse())).collect();
    let bound = ball_bound(t);
    let mut out = BTreeSet::new();
    let mut stack = vec![(Mat2::IDENTITY, usize::MAX, 0usize)];
    let mut visited = 0usize;
    while let Some((m, last, len)) = stack.pop() {
        visited += 1;
        if visited > WORD_ORACLE_LIMIT {
            return Err(Error::Capacity { what: "word oracle nodes", limit: WORD_ORACLE_LIMIT });
        }
        let inside = norm_sq(&m) < bound;
        if inside {
            out.insert(m);
        }
        match max_len {
            Some(l) if len == l => continue,
            None if !inside => continue,
            _ => {}
        }
        for (i, s) in steps.iter().enumerate() {
            if last != usize::MAX && inverse[last] == Some(i) {
                continue;
            }
            stack.push((mat_mul(&m, s)?, i, len + 1));
        }
    }
    Ok(out.into_iter().collect())
}
