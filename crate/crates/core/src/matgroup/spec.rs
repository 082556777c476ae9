use num_integer::Integer;

use super::mat2::{norm_sq, Mat2};
use crate::error::{Error, Result};

/// One problem instance: the group `Λ = ⟨generators⟩`, the parabolic step `J`
/// with `(1, J; 0, 1) ∈ Λ`, and the primitive vectors `v`, `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub generators: Vec<Mat2>,
    pub j: i64,
    pub v: (i64, i64),
    pub w: (i64, i64),
    /// Frontier states with norm above `prune_factor · T` are discarded
    /// during ball enumeration.
    pub prune_factor: f64,
}

impl GroupSpec {
    /// Builds a spec with the default prune factor `16 · max‖g‖`.
    pub fn new(generators: Vec<Mat2>, j: i64, v: (i64, i64), w: (i64, i64)) -> Result<Self> {
        let pf = default_prune_factor(&generators);
        Self::with_prune_factor(generators, j, v, w, pf)
    }

    pub fn with_prune_factor(
        generators: Vec<Mat2>,
        j: i64,
        v: (i64, i64),
        w: (i64, i64),
        prune_factor: f64,
    ) -> Result<Self> {
        let spec = GroupSpec { generators, j, v, w, prune_factor };
        spec.validate()?;
        Ok(spec)
    }

    /// Structural checks that do not depend on `v₁ ≠ 0` / `w₂ ≠ 0`; those are
    /// repaired by `repr::precompose_fix` rather than rejected.
    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidSpec("generator list is empty".into()));
        }
        for g in &self.generators {
            // Re-run the determinant and guard checks; fields are public.
            Mat2::new(g.a, g.b, g.c, g.d)?;
        }
        if self.generators.iter().all(Mat2::is_identity) {
            return Err(Error::InvalidSpec("all generators are the identity".into()));
        }
        if self.j <= 0 {
            return Err(Error::InvalidSpec(format!("parabolic step J = {} must be positive", self.j)));
        }
        if !is_primitive(self.v) {
            return Err(Error::InvalidSpec(format!("v = {:?} is not primitive", self.v)));
        }
        if !is_primitive(self.w) {
            return Err(Error::InvalidSpec(format!("w = {:?} is not primitive", self.w)));
        }
        if !(self.prune_factor.is_finite() && self.prune_factor >= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "prune factor {} must be finite and at least 1",
                self.prune_factor
            )));
        }
        Ok(())
    }

    /// `v₁ ≠ 0` and `w₂ ≠ 0`, the normalization the linear forms rely on.
    pub fn is_normalized(&self) -> bool {
        self.v.0 != 0 && self.w.1 != 0
    }

    /// Generators followed by those inverses not already present.
    pub fn steps(&self) -> Vec<Mat2> {
        let mut out = self.generators.clone();
        for g in &self.generators {
            let inv = g.inverse();
            if !out.contains(&inv) {
                out.push(inv);
            }
        }
        out.retain(|g| !g.is_identity());
        out
    }

    pub fn parabolic(&self) -> Mat2 {
        Mat2::upper(self.j)
    }
}

pub fn is_primitive(v: (i64, i64)) -> bool {
    v.0.gcd(&v.1) == 1
}

pub fn default_prune_factor(generators: &[Mat2]) -> f64 {
    let max = generators
        .iter()
        .map(|g| (norm_sq(g) as f64).sqrt())
        .fold(1.0f64, f64::max);
    16.0 * max
}
