//! Built-in problem instances, addressable by name.

use thinrep::matgroup::Mat2;

use crate::config::RunConfig;

pub const FIXTURE_NAMES: &[&str] = &["lubotzky3-01-01", "lubotzky3-01-75", "gamma2"];

/// Desk-scale circle parameters shared by the fixtures.
pub const DESK_N: f64 = 2500.0;
pub const DESK_T: f64 = 50.0;
pub const DESK_Q0: f64 = 54.0;
pub const DESK_K0: f64 = 9.0;

/// The named fixture, with the desk-scale circle parameters filled in.
///
/// Both groups are free on their two generators and the norm grows along
/// reduced words, so a prune factor of 1 is exact.
pub fn fixture(name: &str) -> Option<RunConfig> {
    let (gens, j, v, w) = match name {
        "lubotzky3-01-01" => (vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), (0, 1)),
        "lubotzky3-01-75" => (vec![Mat2::upper(3), Mat2::lower(3)], 3, (0, 1), (7, 5)),
        "gamma2" => (vec![Mat2::upper(2), Mat2::lower(2)], 2, (0, 1), (0, 1)),
        _ => return None,
    };
    let mut cfg = RunConfig::for_group(gens, j, v, w);
    cfg.prune_factor = Some(1.0);
    cfg.n = Some(DESK_N);
    cfg.t = Some(DESK_T);
    cfg.q0 = Some(DESK_Q0);
    cfg.k0 = Some(DESK_K0);
    Some(cfg)
}
