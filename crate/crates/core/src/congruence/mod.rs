//! Finite quotients `Λ_q`, admissible residues, and the local-obstruction
//! modulus with its density constant.

pub mod obstruction;
pub mod quotient;
pub mod residue_set;

pub use obstruction::{
    discover_z, discover_z_with, is_admissible, obstruction_csv, ObstructionReport, PrimeStability,
    SearchBound, DEFAULT_POWER_BOUND, DEFAULT_PRIME_BOUND,
};
pub use quotient::{
    admissible_residues, admissible_residues_with, bad_modulus_candidate, bad_modulus_probe,
    bad_modulus_probe_with, modmat_mul, reduce_mod, residue_distribution, subgroup_closure,
    subgroup_closure_with, vector_orbit, CongruenceTable, ModMat, ProbeEntry, QuotientLimits,
    ResidueDistribution,
};
pub use residue_set::ResidueSet;
