use std::fmt::Write as _;

use num_rational::Ratio;

use super::quotient::{admissible_residues_with, QuotientLimits};
use super::residue_set::ResidueSet;
use crate::arith::{crt_pair, primes_up_to};
use crate::error::{Error, Result};
use crate::matgroup::GroupSpec;

/// Where the admissible set at one prime stopped changing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeStability {
    pub p: u64,
    /// Least `k` with `𝒜 mod p^{k+1}` the full preimage of `𝒜 mod p^k`.
    pub k: u32,
}

/// Bounds used by [`discover_z`]; reported back so a result can be reproduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    pub prime_bound: u64,
    pub power_bound: u32,
    /// Largest modulus whose admissible set was computed.
    pub largest_modulus: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub z: u64,
    pub admissible_classes: ResidueSet,
    /// `|admissible_classes| / z`.
    pub density_c: Ratio<u64>,
    pub search_bound: SearchBound,
    /// One entry per prime examined, including those with `k = 0`.
    pub per_prime: Vec<PrimeStability>,
}

pub const DEFAULT_PRIME_BOUND: u64 = 50;
pub const DEFAULT_POWER_BOUND: u32 = 4;

/// Finds the obstruction modulus `𝒵 = ∏ p^{k_p}` over primes `p ≤ prime_bound`,
/// where `k_p ≤ power_bound` is the first level at which the admissible set
/// mod `p^{k+1}` is pulled back from level `k`.
pub fn discover_z(g: &GroupSpec, prime_bound: u64, power_bound: u32) -> Result<ObstructionReport> {
    discover_z_with(g, prime_bound, power_bound, &QuotientLimits::default())
}

pub fn discover_z_with(
    g: &GroupSpec,
    prime_bound: u64,
    power_bound: u32,
    limits: &QuotientLimits,
) -> Result<ObstructionReport> {
    let mut per_prime = Vec::new();
    let mut largest = 1u64;
    let mut z = 1u64;
    let mut classes = ResidueSet::full(1);

    for p in primes_up_to(prime_bound) {
        let mut lower = ResidueSet::full(1);
        let mut pk = 1u64;
        let mut found = None;
        for k in 0..=power_bound {
            let next = pk
                .checked_mul(p)
                .ok_or(Error::Capacity { what: "prime power modulus", limit: u64::MAX as usize })?;
            let upper = admissible_residues_with(g, next, limits)?;
            largest = largest.max(next);
            if upper == lower.lift(next) {
                found = Some(k);
                break;
            }
            lower = upper;
            pk = next;
        }
        let Some(k) = found else {
            return Err(Error::UnstablePrime { p, power_bound });
        };
        per_prime.push(PrimeStability { p, k });
        if k > 0 {
            // `lower` is the admissible set mod p^k.
            classes = crt_join(&classes, &lower);
            z *= pk;
        }
    }

    let density_c = Ratio::new(classes.len() as u64, z);
    Ok(ObstructionReport {
        z,
        admissible_classes: classes,
        density_c,
        search_bound: SearchBound { prime_bound, power_bound, largest_modulus: largest },
        per_prime,
    })
}

/// Residues mod `q₁q₂` (coprime) reducing into both sets.
fn crt_join(a: &ResidueSet, b: &ResidueSet) -> ResidueSet {
    let (m1, m2) = (a.modulus(), b.modulus());
    let mut out = ResidueSet::empty(m1 * m2);
    for r1 in a.iter() {
        for r2 in b.iter() {
            out.insert(crt_pair(r1, m1, r2, m2));
        }
    }
    out
}

pub fn is_admissible(report: &ObstructionReport, n: i64) -> bool {
    report.admissible_classes.contains(n)
}

/// Two CSV blocks: `prime,power,stabilized_k` per prime with a nontrivial
/// obstruction, then the summary `Z,<int>,classes,<r1;r2;...>,c,<num>/<den>`.
pub fn obstruction_csv(report: &ObstructionReport) -> String {
    let mut out = String::from("prime,power,stabilized_k\n");
    for s in &report.per_prime {
        if s.k > 0 {
            let _ = writeln!(out, "{},{},{}", s.p, s.p.pow(s.k), s.k);
        }
    }
    let classes: Vec<String> = report.admissible_classes.iter().map(|r| r.to_string()).collect();
    let _ = writeln!(
        out,
        "Z,{},classes,{},c,{}/{}",
        report.z,
        classes.join(";"),
        report.density_c.numer(),
        report.density_c.denom()
    );
    out
}
