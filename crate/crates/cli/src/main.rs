use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thinrep::circle::SeriesOptions;
use thinrep_cli::commands::{
    cmd_ball, cmd_circle, cmd_delta, cmd_exceptional, cmd_obstruction, cmd_params, CircleOpts, ExceptionalOpts,
    ParamsInput,
};
use thinrep_cli::fixtures::{fixture, FIXTURE_NAMES};
use thinrep_cli::{CliError, CliResult, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "thinrep", version, about = "Orbits of thin subgroups of SL(2, Z): obstructions, exceptional sets, circle-method diagnostics")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in instance: lubotzky3-01-01, lubotzky3-01-75 or gamma2.
    #[arg(long, global = true, value_name = "NAME")]
    fixture: Option<String>,
    #[arg(long = "T", global = true)]
    t: Option<f64>,
    #[arg(long = "N", global = true)]
    n: Option<f64>,
    #[arg(long = "Q0", global = true)]
    q0: Option<f64>,
    #[arg(long = "K0", global = true)]
    k0: Option<f64>,
    #[arg(long, global = true)]
    eps0: Option<f64>,
    #[arg(long, global = true)]
    eps1: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// `T = N^a`, used when T itself is not given.
    #[arg(long = "T-exponent", global = true)]
    t_exponent: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Use the brute-force word enumeration instead of the fast paths.
    #[arg(long, global = true)]
    oracle: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the elements of B_T with their linear forms.
    Ball,
    /// Admissible integers in [-N, N] not represented below norm T.
    Exceptional {
        /// Double T until the count is unchanged this many times in a row.
        #[arg(long)]
        doublings: Option<usize>,
        #[arg(long = "T-max")]
        t_max: Option<f64>,
    },
    /// Sweep R_N, M_N and E_N over a window, with diagnostics.
    Circle {
        #[arg(long, allow_hyphen_values = true)]
        from: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<i64>,
        /// Sum over every residue a (mod q) in the singular series.
        #[arg(long)]
        unprimed: bool,
        /// Use q < Q0 instead of q <= Q0.
        #[arg(long)]
        exclusive: bool,
        #[arg(long, default_value_t = 100)]
        poisson_samples: usize,
        /// Also compute the minor-arc integrals and write `q,I_Q` here.
        #[arg(long, value_name = "PATH")]
        minor_out: Option<PathBuf>,
    },
    /// Exponent feasibility report for given delta and N.
    Params,
    /// Obstruction modulus Z and admissible classes.
    Obstruction,
    /// Growth exponent fitted on radii T/32 .. T.
    Delta,
    /// Print the canonical form of the effective configuration.
    Config,
}

fn load(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match (&cli.config, &cli.fixture) {
        (Some(_), Some(_)) => return Err(CliError::Config("use either --config or --fixture".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            RunConfig::parse(&text)?
        }
        (None, Some(name)) => fixture(name).ok_or_else(|| {
            CliError::Config(format!("unknown fixture `{name}`; known: {}", FIXTURE_NAMES.join(", ")))
        })?,
        (None, None) => return Err(CliError::Config("a group is required: pass --config or --fixture".into())),
    };
    if let Some(t) = cli.t {
        cfg.t = Some(t);
        cfg.t_exponent = None;
    }
    if let Some(a) = cli.t_exponent {
        cfg.t_exponent = Some(a);
        if cli.t.is_none() {
            cfg.t = None;
        }
    }
    cfg.n = cli.n.or(cfg.n);
    cfg.q0 = cli.q0.or(cfg.q0);
    cfg.k0 = cli.k0.or(cfg.k0);
    cfg.eps0 = cli.eps0.or(cfg.eps0);
    cfg.eps1 = cli.eps1.unwrap_or(cfg.eps1);
    cfg.delta = cli.delta.or(cfg.delta);
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn params_input(cli: &Cli) -> CliResult<ParamsInput> {
    // A config or fixture is optional here; flags win over it.
    let base = if cli.config.is_some() || cli.fixture.is_some() { Some(load(cli)?) } else { None };
    let pick = |flag: Option<f64>, cfg: Option<f64>, what: &str| {
        flag.or(cfg).ok_or_else(|| CliError::Config(format!("params needs --{what}")))
    };
    let n = pick(cli.n, base.as_ref().and_then(|c| c.n), "N")?;
    let delta = pick(cli.delta, base.as_ref().and_then(|c| c.delta), "delta")?;
    let mut input = ParamsInput::new(n, delta);
    if let Some(e) = cli.eps0.or(base.as_ref().and_then(|c| c.eps0)) {
        input.eps0 = e;
    }
    if let Some(e) = cli.eps1.or(base.as_ref().map(|c| c.eps1)) {
        input.eps1 = e;
    }
    if let Some(a) = cli.t_exponent.or(base.as_ref().and_then(|c| c.t_exponent)) {
        input.t_exponent = a;
    }
    Ok(input)
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    if let Command::Params = cli.cmd {
        let input = params_input(cli)?;
        let outcome = cmd_params(&input)?;
        emit(&outcome.text, cli.out.as_deref())?;
        return match outcome.violation {
            Some(e) => Err(e.into()),
            None => Ok(()),
        };
    }
    let cfg = load(cli)?;
    let out = cfg.out.clone();
    let text = match &cli.cmd {
        Command::Ball => cmd_ball(&cfg, cli.oracle)?,
        Command::Exceptional { doublings, t_max } => cmd_exceptional(
            &cfg,
            ExceptionalOpts { oracle: cli.oracle, doublings: *doublings, t_max: *t_max },
        )?,
        Command::Circle { from, to, unprimed, exclusive, poisson_samples, minor_out } => {
            let opts = CircleOpts {
                from: *from,
                to: *to,
                series: SeriesOptions { primed: !unprimed, inclusive: !exclusive },
                poisson_samples: *poisson_samples,
                minor: minor_out.is_some(),
            };
            let (sweep, dyadic) = cmd_circle(&cfg, &opts)?;
            if let (Some(path), Some(d)) = (minor_out, dyadic) {
                emit(&d, Some(path))?;
            }
            sweep
        }
        Command::Obstruction => cmd_obstruction(&cfg)?,
        Command::Delta => cmd_delta(&cfg)?,
        Command::Config => cfg.to_canonical(),
        Command::Params => unreachable!("handled above"),
    };
    emit(&text, out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
