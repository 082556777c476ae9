use std::fmt;

use num_integer::Integer;
use rustc_hash::FxHashSet;

use super::residue_set::ResidueSet;
use crate::arith::{factorize, sl2_order};
use crate::error::{Error, Result};
use crate::matgroup::{GroupSpec, Mat2};

/// Resource caps for finite-quotient computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientLimits {
    /// Largest `|SL(2, ℤ/qℤ)|` for which the quotient is closed explicitly.
    pub max_group: u64,
    /// Largest `q²` for which the orbit of `v` in `(ℤ/qℤ)²` is computed.
    pub max_orbit_space: u64,
}

impl Default for QuotientLimits {
    fn default() -> Self {
        QuotientLimits { max_group: 10_000_000, max_orbit_space: 1 << 28 }
    }
}

/// A matrix over `ℤ/qℤ` with entries in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMat {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub q: u64,
}

impl ModMat {
    pub fn identity(q: u64) -> Self {
        ModMat { a: 1 % q, b: 0, c: 0, d: 1 % q, q }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.q)
    }

    pub fn det(&self) -> u64 {
        let q = self.q as u128;
        let ad = self.a as u128 * self.d as u128 % q;
        let bc = self.b as u128 * self.c as u128 % q;
        ((ad + q - bc) % q) as u64
    }

    fn pack(&self) -> u64 {
        (self.a << 48) | (self.b << 32) | (self.c << 16) | self.d
    }

    fn unpack(key: u64, q: u64) -> Self {
        let m = 0xffff;
        ModMat { a: key >> 48, b: (key >> 32) & m, c: (key >> 16) & m, d: key & m, q }
    }
}

impl fmt::Display for ModMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{} mod {}", self.a, self.b, self.c, self.d, self.q)
    }
}

pub fn reduce_mod(x: &Mat2, q: u64) -> Result<ModMat> {
    if q == 0 {
        return Err(Error::InvalidModulus(q));
    }
    let r = |e: i64| e.rem_euclid(q as i64) as u64;
    Ok(ModMat { a: r(x.a), b: r(x.b), c: r(x.c), d: r(x.d), q })
}

pub fn modmat_mul(x: &ModMat, y: &ModMat) -> ModMat {
    assert_eq!(x.q, y.q, "moduli differ");
    let q = x.q as u128;
    let dot = |p: u64, r: u64, s: u64, t: u64| {
        ((p as u128 * r as u128 + s as u128 * t as u128) % q) as u64
    };
    ModMat {
        a: dot(x.a, y.a, x.b, y.c),
        b: dot(x.a, y.b, x.b, y.d),
        c: dot(x.c, y.a, x.d, y.c),
        d: dot(x.c, y.b, x.d, y.d),
        q: x.q,
    }
}

/// The image `Λ_q` of `Λ` in `SL(2, ℤ/qℤ)` together with the residues it represents.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceTable {
    pub q: u64,
    /// Elements of `Λ_q`, sorted.
    pub quotient: Vec<ModMat>,
    /// `{⟨v γ₀, w⟩ mod q : γ₀ ∈ Λ_q}`.
    pub admissible: ResidueSet,
    /// Whether `Λ_q = SL(2, ℤ/qℤ)`.
    pub full_quotient: bool,
}

impl CongruenceTable {
    /// `[SL(2, ℤ/qℤ) : Λ_q]`.
    pub fn index(&self) -> u64 {
        sl2_order(self.q) / self.quotient.len() as u64
    }
}

pub fn subgroup_closure(g: &GroupSpec, q: u64) -> Result<CongruenceTable> {
    subgroup_closure_with(g, q, &QuotientLimits::default())
}

/// Closes the reduced generators under multiplication. The quotient is
/// finite, so inverses are reached as powers and need not be added.
pub fn subgroup_closure_with(g: &GroupSpec, q: u64, limits: &QuotientLimits) -> Result<CongruenceTable> {
    if q == 0 {
        return Err(Error::InvalidModulus(q));
    }
    let order = sl2_order(q);
    if order > limits.max_group || q > 1 << 16 {
        return Err(Error::Capacity { what: "|SL(2, Z/qZ)|", limit: limits.max_group as usize });
    }
    let gens: Vec<ModMat> = g
        .generators
        .iter()
        .map(|x| reduce_mod(x, q))
        .collect::<Result<_>>()?;

    let id = ModMat::identity(q);
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.insert(id.pack());
    let mut frontier = vec![id];
    while let Some(m) = frontier.pop() {
        for s in &gens {
            let p = modmat_mul(&m, s);
            if seen.insert(p.pack()) {
                frontier.push(p);
            }
        }
    }
    let mut quotient: Vec<ModMat> = seen.into_iter().map(|k| ModMat::unpack(k, q)).collect();
    quotient.sort_unstable();

    let mut admissible = ResidueSet::empty(q);
    for m in &quotient {
        admissible.insert(pair_mod(row_times(g.v, m), g.w, q));
    }
    let full_quotient = quotient.len() as u64 == order;
    Ok(CongruenceTable { q, quotient, admissible, full_quotient })
}

fn row_times(v: (i64, i64), m: &ModMat) -> (u64, u64) {
    let q = m.q as i128;
    let (x, y) = (v.0 as i128, v.1 as i128);
    let r = |e: i128| e.rem_euclid(q) as u64;
    (r(x * m.a as i128 + y * m.c as i128), r(x * m.b as i128 + y * m.d as i128))
}

fn pair_mod(u: (u64, u64), w: (i64, i64), q: u64) -> u64 {
    let q = q as i128;
    (u.0 as i128 * w.0 as i128 + u.1 as i128 * w.1 as i128).rem_euclid(q) as u64
}

/// The orbit `v · Λ` reduced mod `q`, as points of `(ℤ/qℤ)²` in discovery order.
pub fn vector_orbit(g: &GroupSpec, q: u64, limits: &QuotientLimits) -> Result<Vec<(u64, u64)>> {
    if q == 0 {
        return Err(Error::InvalidModulus(q));
    }
    let space = (q as u128) * (q as u128);
    if space > limits.max_orbit_space as u128 {
        return Err(Error::Capacity { what: "orbit space q²", limit: limits.max_orbit_space as usize });
    }
    let gens: Vec<ModMat> = g
        .generators
        .iter()
        .map(|x| reduce_mod(x, q))
        .collect::<Result<_>>()?;
    let start = row_times(g.v, &ModMat::identity(q));
    let idx = |u: (u64, u64)| (u.0 * q + u.1) as usize;
    let mut seen = bitvec::bitvec![0; space as usize];
    seen.set(idx(start), true);
    let mut orbit = vec![start];
    let mut i = 0;
    while i < orbit.len() {
        let u = orbit[i];
        i += 1;
        for m in &gens {
            let p = row_times((u.0 as i64, u.1 as i64), m);
            if !seen[idx(p)] {
                seen.set(idx(p), true);
                orbit.push(p);
            }
        }
    }
    Ok(orbit)
}

/// `{⟨v γ₀, w⟩ mod q : γ₀ ∈ Λ_q}`, computed from the orbit of `v` in
/// `(ℤ/qℤ)²` rather than from the whole quotient.
pub fn admissible_residues(g: &GroupSpec, q: u64) -> Result<ResidueSet> {
    admissible_residues_with(g, q, &QuotientLimits::default())
}

pub fn admissible_residues_with(g: &GroupSpec, q: u64, limits: &QuotientLimits) -> Result<ResidueSet> {
    let orbit = vector_orbit(g, q, limits)?;
    Ok(ResidueSet::from_iter(q, orbit.into_iter().map(|u| pair_mod(u, g.w, q))))
}

/// Number of `γ₀ ∈ Λ_q` with `⟨v γ₀, w⟩ ≡ r`, scaled to the orbit: entry `r`
/// counts orbit points `u` with `⟨u, w⟩ ≡ r`. Since `Λ_q` acts transitively on
/// the orbit with equal fibres, `counts[r] / orbit_len` is the fraction of the
/// quotient landing on `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueDistribution {
    pub q: u64,
    pub counts: Vec<u64>,
    pub orbit_len: u64,
}

pub fn residue_distribution(g: &GroupSpec, q: u64, limits: &QuotientLimits) -> Result<ResidueDistribution> {
    let orbit = vector_orbit(g, q, limits)?;
    let mut counts = vec![0u64; q as usize];
    for u in &orbit {
        counts[pair_mod(*u, g.w, q) as usize] += 1;
    }
    Ok(ResidueDistribution { q, counts, orbit_len: orbit.len() as u64 })
}

/// One row of the bad-modulus probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeEntry {
    pub q: u64,
    pub full: bool,
    /// `[SL(2, ℤ/qℤ) : Λ_q]`.
    pub index: u64,
}

pub fn bad_modulus_probe(g: &GroupSpec, qs: &[u64]) -> Result<Vec<ProbeEntry>> {
    bad_modulus_probe_with(g, qs, &QuotientLimits::default())
}

pub fn bad_modulus_probe_with(g: &GroupSpec, qs: &[u64], limits: &QuotientLimits) -> Result<Vec<ProbeEntry>> {
    qs.iter()
        .map(|&q| {
            let t = subgroup_closure_with(g, q, limits)?;
            Ok(ProbeEntry { q, full: t.full_quotient, index: t.index() })
        })
        .collect()
}

/// Least common multiple of the probed prime powers whose quotient is not full.
pub fn bad_modulus_candidate(entries: &[ProbeEntry]) -> u64 {
    entries
        .iter()
        .filter(|e| !e.full && factorize(e.q).len() == 1)
        .fold(1u64, |acc, e| acc.lcm(&e.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisors;
    use crate::matgroup::{mat_mul, word_product};
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lub(v: (i64, i64), w: (i64, i64)) -> GroupSpec {
        GroupSpec::new(vec![Mat2::upper(3), Mat2::lower(3)], 3, v, w).unwrap()
    }

    fn sl2z(v: (i64, i64), w: (i64, i64)) -> GroupSpec {
        GroupSpec::new(vec![Mat2::upper(1), Mat2::lower(1)], 1, v, w).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let m = reduce_mod(&Mat2::upper(3), 3).unwrap();
        assert!(m.is_identity());
        let m = reduce_mod(&Mat2::new(10, 3, 3, 1).unwrap(), 2).unwrap();
        assert_eq!((m.a, m.b, m.c, m.d), (0, 1, 1, 1));
        assert_eq!(reduce_mod(&Mat2::IDENTITY, 0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gens = [Mat2::upper(1), Mat2::lower(1), Mat2::upper(-1), Mat2::lower(-1)];
        for _ in 0..1000 {
            let w1: Vec<usize> = (0..rng.random_range(0..12)).map(|_| rng.random_range(0..4)).collect();
            let w2: Vec<usize> = (0..rng.random_range(0..12)).map(|_| rng.random_range(0..4)).collect();
            let x = word_product(&gens, &w1).unwrap();
            let y = word_product(&gens, &w2).unwrap();
            let q = rng.random_range(1..50u64);
            let lhs = reduce_mod(&mat_mul(&x, &y).unwrap(), q).unwrap();
            let rhs = modmat_mul(&reduce_mod(&x, q).unwrap(), &reduce_mod(&y, q).unwrap());
            assert_eq!(lhs, rhs);
            assert_eq!(lhs.det(), 1 % q);
        }
    }

    #[test]
    fn closure_sizes() {
        let g = lub((0, 1), (0, 1));
        assert_eq!(subgroup_closure(&g, 3).unwrap().quotient.len(), 1);
        let t2 = subgroup_closure(&g, 2).unwrap();
        assert_eq!(t2.quotient.len(), 6);
        assert!(t2.full_quotient);
        assert_eq!(subgroup_closure(&g, 1).unwrap().quotient.len(), 1);
    }

    #[test]
    fn closure_is_a_group() {
        let g = lub((0, 1), (7, 5));
        for q in [4u64, 6, 9, 10, 12] {
            let t = subgroup_closure(&g, q).unwrap();
            let set: FxHashSet<ModMat> = t.quotient.iter().copied().collect();
            assert!(set.contains(&ModMat::identity(q)));
            for x in &t.quotient {
                for y in &t.quotient {
                    assert!(set.contains(&modmat_mul(x, y)));
                }
            }
        }
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_residues(&lub((0, 1), (0, 1)), 9).unwrap().to_vec(), vec![1]);
        assert_eq!(admissible_residues(&lub((0, 1), (7, 5)), 3).unwrap().to_vec(), vec![2]);
        assert_eq!(admissible_residues(&sl2z((1, 0), (0, 1)), 5).unwrap().len(), 5);
    }

    #[test]
    fn orbit_route_matches_quotient_route() {
        for g in [lub((0, 1), (0, 1)), lub((0, 1), (7, 5)), lub((3, 1), (0, 1)), sl2z((2, 3), (1, 1))] {
            for q in 1..=30u64 {
                let t = subgroup_closure(&g, q).unwrap();
                assert_eq!(admissible_residues(&g, q).unwrap(), t.admissible, "q = {q}");
            }
        }
    }

    #[test]
    fn projection_compatibility() {
        let g = lub((0, 1), (7, 5));
        for q in [12u64, 18, 27, 36, 45] {
            let big = admissible_residues(&g, q).unwrap();
            for d in divisors(q) {
                assert_eq!(big.project(d), admissible_residues(&g, d).unwrap(), "{d} | {q}");
            }
        }
    }

    #[test]
    fn crt_consistency() {
        let g = lub((0, 1), (7, 5));
        for (q1, q2) in [(2u64, 3u64), (4, 9), (5, 9), (7, 4)] {
            let a1 = admissible_residues(&g, q1).unwrap();
            let a2 = admissible_residues(&g, q2).unwrap();
            let joint = admissible_residues(&g, q1 * q2).unwrap();
            let joined: Vec<u64> = (0..q1 * q2)
                .filter(|r| a1.contains_residue(r % q1) && a2.contains_residue(r % q2))
                .collect();
            assert!(joint.iter().all(|r| joined.contains(&r)));
            let full = |q| subgroup_closure(&g, q).unwrap().full_quotient;
            if full(q1) && full(q2) {
                assert_eq!(joint.to_vec(), joined);
            }
        }
    }

    #[test]
    fn probe() {
        let g = lub((0, 1), (0, 1));
        let p = bad_modulus_probe(&g, &[1, 2, 3]).unwrap();
        assert_eq!(p[0], ProbeEntry { q: 1, full: true, index: 1 });
        assert_eq!(p[1], ProbeEntry { q: 2, full: true, index: 1 });
        assert_eq!(p[2], ProbeEntry { q: 3, full: false, index: 24 });
        assert_eq!(bad_modulus_candidate(&p), 3);
    }

    #[test]
    fn capacity_guard() {
        let g = lub((0, 1), (0, 1));
        let tight = QuotientLimits { max_group: 100, max_orbit_space: 100 };
        assert!(matches!(subgroup_closure_with(&g, 7, &tight), Err(Error::Capacity { .. })));
        assert!(matches!(admissible_residues_with(&g, 11, &tight), Err(Error::Capacity { .. })));
    }
}
