//! Flat `key = value` run configuration.
//!
//! ```text
//! # Lubotzky-3 with w = (7, 5)
//! generators = 1,3,0,1; 1,0,3,1
//! J = 3
//! v = 0,1
//! w = 7,5
//! N = 2500
//! T = 50
//! ```
//!
//! Blank lines and `#` comments are ignored. [`RunConfig::to_canonical`]
//! writes every set key in a fixed order; parsing that text gives back an
//! identical config.

use std::fmt::Write as _;
use std::path::PathBuf;

use thinrep::matgroup::{GroupSpec, Mat2};

use crate::error::{CliError, CliResult};

/// A parsed and validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub generators: Vec<Mat2>,
    pub j: i64,
    pub v: (i64, i64),
    pub w: (i64, i64),
    pub prune_factor: Option<f64>,
    pub n: Option<f64>,
    pub t: Option<f64>,
    pub t_exponent: Option<f64>,
    pub delta: Option<f64>,
    /// Unset means 0 for explicit desk parameters and 10⁻³ for derived ones.
    pub eps0: Option<f64>,
    pub eps1: f64,
    pub q0: Option<f64>,
    pub k0: Option<f64>,
    pub max_states: usize,
    pub max_group: u64,
    pub max_orbit_space: u64,
    pub prime_bound: u64,
    pub power_bound: u32,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

const KEYS: &[&str] = &[
    "generators",
    "J",
    "v",
    "w",
    "prune_factor",
    "N",
    "T",
    "T_exponent",
    "delta",
    "eps0",
    "eps1",
    "Q0",
    "K0",
    "max_states",
    "max_group",
    "max_orbit_space",
    "prime_bound",
    "power_bound",
    "out",
    "seed",
];

impl RunConfig {
    /// A config for `generators` with every optional field at its default.
    pub fn for_group(generators: Vec<Mat2>, j: i64, v: (i64, i64), w: (i64, i64)) -> Self {
        let quotient = thinrep::congruence::QuotientLimits::default();
        RunConfig {
            generators,
            j,
            v,
            w,
            prune_factor: None,
            n: None,
            t: None,
            t_exponent: None,
            delta: None,
            eps0: None,
            eps1: 1e-3,
            q0: None,
            k0: None,
            max_states: thinrep::matgroup::EnumLimits::default().max_states,
            max_group: quotient.max_group,
            max_orbit_space: quotient.max_orbit_space,
            prime_bound: thinrep::congruence::DEFAULT_PRIME_BOUND,
            power_bound: thinrep::congruence::DEFAULT_POWER_BOUND,
            out: None,
            seed: 0,
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut raw: Vec<(&str, &str)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("line {}: unknown key `{k}`", lineno + 1)));
            }
            if raw.iter().any(|(seen, _)| *seen == k) {
                return Err(CliError::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
            raw.push((k, v));
        }
        let get = |k: &str| raw.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
        let need = |k: &str| get(k).ok_or_else(|| CliError::Config(format!("missing key `{k}`")));

        let mut cfg = RunConfig::for_group(
            parse_generators(need("generators")?)?,
            parse_num(need("J")?, "J")?,
            parse_pair(need("v")?, "v")?,
            parse_pair(need("w")?, "w")?,
        );
        cfg.prune_factor = get("prune_factor").map(|s| parse_num(s, "prune_factor")).transpose()?;
        cfg.n = get("N").map(|s| parse_num(s, "N")).transpose()?;
        cfg.t = get("T").map(|s| parse_num(s, "T")).transpose()?;
        cfg.t_exponent = get("T_exponent").map(|s| parse_num(s, "T_exponent")).transpose()?;
        cfg.delta = get("delta").map(|s| parse_num(s, "delta")).transpose()?;
        cfg.eps0 = get("eps0").map(|s| parse_num(s, "eps0")).transpose()?;
        if let Some(s) = get("eps1") {
            cfg.eps1 = parse_num(s, "eps1")?;
        }
        cfg.q0 = get("Q0").map(|s| parse_num(s, "Q0")).transpose()?;
        cfg.k0 = get("K0").map(|s| parse_num(s, "K0")).transpose()?;
        if let Some(s) = get("max_states") {
            cfg.max_states = parse_num(s, "max_states")?;
        }
        if let Some(s) = get("max_group") {
            cfg.max_group = parse_num(s, "max_group")?;
        }
        if let Some(s) = get("max_orbit_space") {
            cfg.max_orbit_space = parse_num(s, "max_orbit_space")?;
        }
        if let Some(s) = get("prime_bound") {
            cfg.prime_bound = parse_num(s, "prime_bound")?;
        }
        if let Some(s) = get("power_bound") {
            cfg.power_bound = parse_num(s, "power_bound")?;
        }
        cfg.out = get("out").map(PathBuf::from);
        if let Some(s) = get("seed") {
            cfg.seed = parse_num(s, "seed")?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Cross-field checks, re-run after every override.
    pub fn validate(&self) -> CliResult<()> {
        self.group()?;
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => Err(CliError::Config(format!("{name} = {x} must be positive"))),
            _ => Ok(()),
        };
        positive("N", self.n)?;
        positive("T", self.t)?;
        positive("Q0", self.q0)?;
        positive("K0", self.k0)?;
        if self.t.is_some() && self.t_exponent.is_some() {
            return Err(CliError::Config("set either T or T_exponent, not both".into()));
        }
        if let Some(a) = self.t_exponent {
            if !(a > 0.0 && a < 0.5) {
                return Err(CliError::Config(format!("T_exponent = {a} must lie in (0, 1/2)")));
            }
        }
        if let Some(d) = self.delta {
            if !(d > 5.0 / 6.0 && d <= 1.0) {
                return Err(CliError::Config(format!("delta = {d} must lie in (5/6, 1]")));
            }
        }
        for (name, e) in [("eps0", self.eps0.unwrap_or(0.0)), ("eps1", self.eps1)] {
            if !(e.is_finite() && e >= 0.0) {
                return Err(CliError::Config(format!("{name} = {e} must be non-negative")));
            }
        }
        if self.prime_bound < 2 || self.power_bound < 1 {
            return Err(CliError::Config("prime_bound must be ≥ 2 and power_bound ≥ 1".into()));
        }
        Ok(())
    }

    pub fn group(&self) -> CliResult<GroupSpec> {
        let g = match self.prune_factor {
            Some(pf) => GroupSpec::with_prune_factor(self.generators.clone(), self.j, self.v, self.w, pf),
            None => GroupSpec::new(self.generators.clone(), self.j, self.v, self.w),
        };
        g.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn enum_limits(&self) -> thinrep::matgroup::EnumLimits {
        thinrep::matgroup::EnumLimits { max_states: self.max_states }
    }

    pub fn quotient_limits(&self) -> thinrep::congruence::QuotientLimits {
        thinrep::congruence::QuotientLimits {
            max_group: self.max_group,
            max_orbit_space: self.max_orbit_space,
        }
    }

    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        let gens: Vec<String> =
            self.generators.iter().map(|g| format!("{},{},{},{}", g.a, g.b, g.c, g.d)).collect();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("generators", gens.join("; "));
        put("J", self.j.to_string());
        put("v", format!("{},{}", self.v.0, self.v.1));
        put("w", format!("{},{}", self.w.0, self.w.1));
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}"));
        for (k, v) in [
            ("prune_factor", opt(self.prune_factor)),
            ("N", opt(self.n)),
            ("T", opt(self.t)),
            ("T_exponent", opt(self.t_exponent)),
            ("delta", opt(self.delta)),
            ("eps0", opt(self.eps0)),
        ] {
            if let Some(v) = v {
                put(k, v);
            }
        }
        put("eps1", format!("{:?}", self.eps1));
        for (k, v) in [("Q0", opt(self.q0)), ("K0", opt(self.k0))] {
            if let Some(v) = v {
                put(k, v);
            }
        }
        put("max_states", self.max_states.to_string());
        put("max_group", self.max_group.to_string());
        put("max_orbit_space", self.max_orbit_space.to_string());
        put("prime_bound", self.prime_bound.to_string());
        put("power_bound", self.power_bound.to_string());
        if let Some(p) = &self.out {
            put("out", p.display().to_string());
        }
        put("seed", self.seed.to_string());
        out
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, key: &str) -> CliResult<T> {
    s.trim().parse().map_err(|_| CliError::Config(format!("`{key}`: cannot parse `{s}`")))
}

fn parse_ints(s: &str, key: &str) -> CliResult<Vec<i64>> {
    s.split(',').map(|p| parse_num(p, key)).collect()
}

fn parse_pair(s: &str, key: &str) -> CliResult<(i64, i64)> {
    match parse_ints(s, key)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Config(format!("`{key}` needs two integers, got `{s}`"))),
    }
}

fn parse_generators(s: &str) -> CliResult<Vec<Mat2>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match parse_ints(p, "generators")?[..] {
            [a, b, c, d] => Mat2::new(a, b, c, d).map_err(|e| CliError::Config(format!("generator `{}`: {e}", p.trim()))),
            _ => Err(CliError::Config(format!("generator `{}` needs four integers", p.trim()))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# comment\ngenerators = 1,3,0,1; 1,0,3,1\nJ = 3\nv = 0,1\nw = 7,5 # trailing\n\nN = 2500\nT = 50\nQ0 = 54\n";

    #[test]
    fn parses_and_round_trips() {
        let c = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.generators, vec![Mat2::upper(3), Mat2::lower(3)]);
        assert_eq!((c.j, c.v, c.w), (3, (0, 1), (7, 5)));
        assert_eq!((c.n, c.t, c.q0, c.k0), (Some(2500.0), Some(50.0), Some(54.0), None));
        let text = c.to_canonical();
        let again = RunConfig::parse(&text).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_canonical(), text);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "generators = 1,3,0,1\nJ = 3\nv = 0,1\n",
            "generators = 1,3,0,1\nJ = 3\nv = 0,1\nw = 0,1\nfoo = 1\n",
            "generators = 1,3,0,1\nJ = 3\nJ = 4\nv = 0,1\nw = 0,1\n",
            "generators = 1,3,0,2\nJ = 3\nv = 0,1\nw = 0,1\n",
            "generators = 1,3,0,1\nJ = 3\nv = 0,2\nw = 0,1\n",
            "generators = 1,0,0,1\nJ = 1\nv = 0,1\nw = 0,1\n",
            "generators = 1,3,0,1\nJ = 3\nv = 0,1\nw = 0,1\nT = 5\nT_exponent = 0.25\n",
            "generators = 1,3,0,1\nJ = 3\nv = 0,1\nw = 0,1\ndelta = 0.5\n",
            "generators = 1,3,0,1\nJ = 3\nv = 0,1\nw = 0,1\nT = -1\n",
            "generators = 1,3,0,1\nJ three\n",
        ] {
            assert!(matches!(RunConfig::parse(bad), Err(CliError::Config(_))), "{bad}");
        }
    }
}
