//! Command-line front end: argument parsing, the subcommands, and output.
//!
//! [`run`] is the whole program; the `specnorm` binary only forwards its
//! arguments and exit code.

mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};

use crate::asymptotics::{expansion_terms, growth_report, semiclassical_comparison, semiclassical_mu, sigma_from};
use crate::error::Error;
use crate::numerics::{agreement_digits, Domain, PrecisionPolicy};
use crate::projnorm::{projection_norm, projection_norms, quadrature_norm_oracle, NormResult};
use crate::weights::{Classical, WeightFamily, WeightSpec};
use crate::Angle;

pub use render::{format_f64, format_float, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SECTOR: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;
pub const EXIT_THEOREM: i32 = 5;

/// Rows of the classical growth table, in units of π/40.
const TABLE1_ROWS: [i64; 6] = [0, 1, 2, 4, 6, 8];

/// Bits for analytic columns that need no certification.
const ANALYTIC_BITS: u32 = 256;

#[derive(Parser, Debug)]
#[command(
    name = "specnorm",
    version,
    about = "Spectral projection norms for complex-scaled orthogonal polynomial weights"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm of a single spectral projection, with its bounds.
    Norm {
        #[command(flatten)]
        common: CommonArgs,
        /// Angle: radians, or multiples of pi such as 0.1pi or pi/8.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long)]
        n: usize,
    },
    /// sigma_n(theta) with the analytic comparison columns.
    Table1 {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Norms and both bounds over a range of degrees.
    Bounds {
        #[command(flatten)]
        common: CommonArgs,
        /// Angle: radians, or multiples of pi such as 0.1pi or pi/8.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        /// Step between degrees (default 2 for hermite, 1 otherwise).
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Per-index growth exponent and its fitted limit.
    Growth {
        #[command(flatten)]
        common: CommonArgs,
        /// Angle: radians, or multiples of pi such as 0.1pi or pi/8.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        /// Step between degrees (default 2 for hermite, 1 otherwise).
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Term norms of the expansion of exp(-Ht) and a convergence verdict.
    Expansion {
        #[command(flatten)]
        common: CommonArgs,
        /// Angle: radians, or multiples of pi such as 0.1pi or pi/8.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        /// Step between degrees (default 2 for hermite, 1 otherwise).
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Bound sandwich plus an independent quadrature cross-check.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Angle: radians, or multiples of pi such as 0.1pi or pi/8.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Step between degrees.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Largest degree checked against quadrature.
        #[arg(long, default_value_t = 20)]
        oracle_max: usize,
    },
    /// Semiclassical growth predictions next to the computed norm.
    Semiclassical {
        #[command(flatten)]
        common: CommonArgs,
        /// Angle: radians, or multiples of pi such as 0.1pi or pi/8.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Hermite,
    Laguerre,
    Gammabeta,
    Polyexp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Half,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Hermite)]
    pub family: FamilyArg,
    /// Power of x in the gammabeta weight.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Exponent power in the gammabeta weight.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Decay rate in the gammabeta weight.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Polynomial exponent coefficients c_1,...,c_n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub domain: Option<DomainArg>,
    /// Target certified decimal digits.
    #[arg(long, env = "SPECNORM_DIGITS", default_value_t = 30)]
    pub digits: u32,
    /// Ceiling on working precision, in decimal digits.
    #[arg(long, default_value_t = 2000)]
    pub max_digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write a gnuplot script and the CSV it reads.
    #[arg(long)]
    pub plot: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything a subcommand needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub spec: WeightSpec,
    pub theta: Option<Angle>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub stride: usize,
    pub t: Option<f64>,
    pub policy: PrecisionPolicy,
    pub format: Format,
    pub plot: bool,
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("bound violated: {0}")]
    Theorem(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_FAILURE,
            CliError::Theorem(_) => EXIT_THEOREM,
            CliError::Compute(e) => match e {
                Error::SectorViolation { .. } => EXIT_SECTOR,
                Error::PrecisionBudget { .. } | Error::PivotLoss { .. } => EXIT_PRECISION,
                Error::Domain(_)
                | Error::InvalidWeight(_)
                | Error::InvalidPolicy(_)
                | Error::UnsupportedParity(_)
                | Error::Divergent(_) => EXIT_USAGE,
            },
        }
    }
}

pub fn parse_angle(text: &str) -> Result<Angle, crate::angle::ParseAngleError> {
    text.parse()
}

/// Parse `args` (program name first), run, write results, return the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn build_spec(common: &CommonArgs) -> Result<WeightSpec, CliError> {
    let domain = common.domain.map(|d| match d {
        DomainArg::Half => Domain::HalfLine,
        DomainArg::Full => Domain::FullLine,
    });
    let reject =
        |flag: &str| CliError::Usage(format!("--{flag} does not apply to --family {:?}", common.family).to_lowercase());
    let tau = common.tau.unwrap_or(0.5);
    let spec = match common.family {
        FamilyArg::Hermite | FamilyArg::Laguerre => {
            if common.gamma.is_some() {
                return Err(reject("gamma"));
            }
            if common.beta.is_some() {
                return Err(reject("beta"));
            }
            if common.coeffs.is_some() {
                return Err(reject("coeffs"));
            }
            if common.family == FamilyArg::Hermite {
                WeightSpec::gamma_beta(0.0, 2.0, tau, domain.unwrap_or(Domain::FullLine))
            } else {
                WeightSpec::gamma_beta(0.0, 1.0, tau, domain.unwrap_or(Domain::HalfLine))
            }
        }
        FamilyArg::Gammabeta => {
            if common.coeffs.is_some() {
                return Err(reject("coeffs"));
            }
            let beta = common
                .beta
                .ok_or_else(|| CliError::Usage("--family gammabeta needs --beta".into()))?;
            WeightSpec::gamma_beta(
                common.gamma.unwrap_or(0.0),
                beta,
                tau,
                domain.unwrap_or(Domain::HalfLine),
            )
        }
        FamilyArg::Polyexp => {
            for (flag, given) in [
                ("gamma", common.gamma.is_some()),
                ("beta", common.beta.is_some()),
                ("tau", common.tau.is_some()),
            ] {
                if given {
                    return Err(reject(flag));
                }
            }
            let coeffs = common
                .coeffs
                .clone()
                .ok_or_else(|| CliError::Usage("--family polyexp needs --coeffs".into()))?;
            WeightSpec::poly_exp(coeffs, domain.unwrap_or(Domain::HalfLine))
        }
    };
    spec.map_err(|e| CliError::Usage(e.to_string()))
}

impl RunConfig {
    fn new(
        command: &'static str,
        common: &CommonArgs,
        theta: Option<Angle>,
        n: Option<usize>,
        n_max: Option<usize>,
        stride: Option<usize>,
        t: Option<f64>,
    ) -> Result<Self, CliError> {
        if common.digits < 4 {
            return Err(CliError::Usage(format!(
                "--digits must be at least 4, got {}",
                common.digits
            )));
        }
        let policy = PrecisionPolicy {
            target_digits: common.digits,
            max_digits: common.max_digits,
            ..PrecisionPolicy::default()
        };
        policy.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let spec = build_spec(common)?;
        if let Some(theta) = &theta {
            spec.check_in_sector(theta)?;
        }
        let default_stride = if spec.classical() == Some(Classical::Hermite) {
            2
        } else {
            1
        };
        let stride = stride.unwrap_or(default_stride);
        if stride == 0 {
            return Err(CliError::Usage("--stride must be positive".into()));
        }
        Ok(RunConfig {
            command,
            spec,
            theta,
            n,
            n_max,
            stride,
            t,
            policy,
            format: common.format,
            plot: common.plot,
            out: common.out.clone(),
        })
    }

    fn theta(&self) -> &Angle {
        self.theta.as_ref().expect("subcommand takes --theta")
    }

    fn grid(&self) -> Vec<usize> {
        crate::asymptotics::index_grid(self.n_max.unwrap_or(0), self.stride)
    }

    fn require_hermite(&self) -> Result<(), CliError> {
        match self.spec.family() {
            WeightFamily::GammaBeta { tau, .. } if self.spec.classical() == Some(Classical::Hermite) && *tau == 0.5 => {
                Ok(())
            }
            _ => Err(CliError::Usage(format!(
                "{} is defined for --family hermite only",
                self.command
            ))),
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (cfg, extra) = match command {
        Command::Norm { common, theta, n } => (
            RunConfig::new("norm", &common, Some(theta), Some(n), None, None, None)?,
            0,
        ),
        Command::Table1 { common, n } => (RunConfig::new("table1", &common, None, Some(n), None, None, None)?, 0),
        Command::Bounds {
            common,
            theta,
            n_max,
            stride,
        } => (
            RunConfig::new("bounds", &common, Some(theta), None, Some(n_max), stride, None)?,
            0,
        ),
        Command::Growth {
            common,
            theta,
            n_max,
            stride,
        } => (
            RunConfig::new("growth", &common, Some(theta), None, Some(n_max), stride, None)?,
            0,
        ),
        Command::Expansion {
            common,
            theta,
            t,
            n_max,
            stride,
        } => (
            RunConfig::new("expansion", &common, Some(theta), None, Some(n_max), stride, Some(t))?,
            0,
        ),
        Command::Verify {
            common,
            theta,
            n_max,
            stride,
            oracle_max,
        } => (
            RunConfig::new(
                "verify",
                &common,
                Some(theta),
                None,
                Some(n_max),
                Some(stride),
                None,
            )?,
            oracle_max,
        ),
        Command::Semiclassical { common, theta, n } => (
            RunConfig::new("semiclassical", &common, Some(theta), Some(n), None, None, None)?,
            0,
        ),
    };
    let outcome = match cfg.command {
        "norm" => cmd_norm(&cfg)?,
        "table1" => cmd_table1(&cfg)?,
        "bounds" => cmd_bounds(&cfg)?,
        "growth" => cmd_growth(&cfg)?,
        "expansion" => cmd_expansion(&cfg)?,
        "verify" => cmd_verify(&cfg, extra)?,
        "semiclassical" => cmd_semiclassical(&cfg)?,
        other => unreachable!("unknown command {other}"),
    };
    emit(&cfg, &outcome.table, stdout)?;
    match outcome.violation {
        Some(msg) => Err(CliError::Theorem(msg)),
        None => Ok(()),
    }
}

/// A rendered table and, if a bound or cross-check failed, what failed.
pub struct Outcome {
    pub table: Table,
    pub violation: Option<String>,
}

impl Outcome {
    fn clean(table: Table) -> Self {
        Outcome { table, violation: None }
    }
}

fn provenance(cfg: &RunConfig, results: &[&NormResult]) -> Value {
    let theta = cfg.theta.as_ref().map(|t| {
        json!({
            "text": t.to_string(),
            "radians": format_float(&t.to_float(ANALYTIC_BITS), 40),
            "pi_units": t.pi_units_f64(),
        })
    });
    json!({
        "tool": "specnorm",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command,
        "weight": {
            "label": cfg.spec.label(),
            "family": cfg.spec.family(),
            "domain": cfg.spec.domain(),
        },
        "theta": theta,
        "digits_requested": cfg.policy.target_digits,
        "digits_certified": results.iter().map(|r| r.norm.certified_digits).min(),
        "precision_bits": results.iter().map(|r| r.norm.precision_used).max(),
    })
}

fn theta_pi_cell(theta: &Angle) -> Cell {
    match theta.pi_units_text() {
        Some(text) => Cell::Text(text),
        None => Cell::Approx(theta.pi_units_f64()),
    }
}

fn upper_ok_cell(r: &NormResult) -> Cell {
    r.upper_ok.map_or(Cell::Text("na".into()), Cell::Bool)
}

fn sandwich_violations(results: &[NormResult]) -> Option<String> {
    let bad: Vec<String> = results
        .iter()
        .filter(|r| !r.sandwich_ok())
        .map(|r| r.n.to_string())
        .collect();
    (!bad.is_empty()).then(|| format!("bounds fail at n = {}", bad.join(", ")))
}

pub fn cmd_norm(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let theta = cfg.theta();
    let r = projection_norm(&cfg.spec, cfg.n.expect("norm takes --n"), theta, &cfg.policy)?;
    let mut table = Table::new(
        vec![
            "n",
            "theta_rad",
            "theta_pi",
            "N",
            "lower",
            "upper",
            "lower_ok",
            "upper_ok",
            "certified_digits",
            "precision_bits",
            "cancellation_log10",
        ],
        provenance(cfg, &[&r]),
    );
    table.push(vec![
        r.n.into(),
        (&theta.to_float(ANALYTIC_BITS)).into(),
        theta_pi_cell(theta),
        (&r.norm.value).into(),
        (&r.lower).into(),
        r.upper.as_ref().into(),
        r.lower_ok.into(),
        upper_ok_cell(&r),
        r.norm.certified_digits.into(),
        r.norm.precision_used.into(),
        r.norm.cancellation_magnitude.into(),
    ]);
    let violation = sandwich_violations(std::slice::from_ref(&r));
    Ok(Outcome { table, violation })
}

pub fn cmd_table1(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.require_hermite()?;
    let n = cfg.n.expect("table1 takes --n");
    if n < 2 {
        return Err(CliError::Usage("table1 needs --n >= 2".into()));
    }
    let rows: Vec<(Angle, NormResult, NormResult)> = TABLE1_ROWS
        .par_iter()
        .map(|&k| {
            let theta = Angle::pi_times(k, 40);
            let hi = projection_norm(&cfg.spec, n, &theta, &cfg.policy)?;
            let lo = projection_norm(&cfg.spec, n - 2, &theta, &cfg.policy)?;
            Ok((theta, hi, lo))
        })
        .collect::<Result<_, Error>>()?;
    let all: Vec<&NormResult> = rows.iter().flat_map(|(_, a, b)| [a, b]).collect();
    let mut table = Table::new(
        vec!["theta_pi", "sec_2theta", "sigma_n", "four_sec_2theta", "mu"],
        provenance(cfg, &all),
    );
    table.note("n", n);
    for (theta, hi, lo) in &rows {
        let c = Float::with_val(ANALYTIC_BITS, theta.to_float(ANALYTIC_BITS) * 2u32).cos();
        let sec = c.recip();
        let four_sec = Float::with_val(ANALYTIC_BITS, &sec * 4u32);
        table.push(vec![
            theta_pi_cell(theta),
            (&sec).into(),
            (&sigma_from(hi, lo)).into(),
            (&four_sec).into(),
            (&semiclassical_mu(theta, ANALYTIC_BITS)?).into(),
        ]);
    }
    Ok(Outcome::clean(table))
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let theta = cfg.theta();
    let results = projection_norms(&cfg.spec, &cfg.grid(), theta, &cfg.policy)?;
    let refs: Vec<&NormResult> = results.iter().collect();
    let mut table = Table::new(
        vec![
            "n",
            "theta_rad",
            "N",
            "lower",
            "upper",
            "lower_ok",
            "upper_ok",
            "certified_digits",
            "cancellation_log10",
        ],
        provenance(cfg, &refs),
    );
    let theta_rad = theta.to_float(ANALYTIC_BITS);
    for r in &results {
        table.push(vec![
            r.n.into(),
            (&theta_rad).into(),
            (&r.norm.value).into(),
            (&r.lower).into(),
            r.upper.as_ref().into(),
            r.lower_ok.into(),
            upper_ok_cell(r),
            r.norm.certified_digits.into(),
            r.norm.cancellation_magnitude.into(),
        ]);
    }
    let violation = sandwich_violations(&results);
    Ok(Outcome { table, violation })
}

pub fn cmd_growth(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let theta = cfg.theta();
    let report = growth_report(&cfg.spec, theta, cfg.n_max.unwrap_or(0), cfg.stride, &cfg.policy)?;
    let refs: Vec<&NormResult> = report.entries.iter().map(|e| &e.result).collect();
    let mut table = Table::new(
        vec!["n", "N", "log_N_over_n", "sigma_n", "certified_digits"],
        provenance(cfg, &refs),
    );
    table.note("theta_rad", theta.to_f64());
    table.note("s_lower", report.s_lower);
    table.note("s_upper", report.s_upper);
    table.note("s_estimate", report.s_estimate);
    for e in &report.entries {
        table.push(vec![
            e.result.n.into(),
            (&e.result.norm.value).into(),
            e.per_index.into(),
            e.sigma.as_ref().into(),
            e.result.norm.certified_digits.into(),
        ]);
    }
    let results: Vec<NormResult> = report.entries.into_iter().map(|e| e.result).collect();
    let violation = sandwich_violations(&results);
    Ok(Outcome { table, violation })
}

pub fn cmd_expansion(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.require_hermite()?;
    let theta = cfg.theta();
    let t = cfg.t.unwrap_or(0.0);
    let report = expansion_terms(theta, t, cfg.n_max.unwrap_or(0), cfg.stride, &cfg.policy)?;
    let mut table = Table::new(vec!["n", "term", "ln_term"], provenance(cfg, &[]));
    table.note("t", t);
    table.note("t_z_lower", report.t_z_bracket.0);
    table.note("t_z_upper", report.t_z_bracket.1);
    table.note("tail_slope", report.tail_slope);
    table.note("verdict", Cell::Text(report.verdict.to_string()));
    for term in &report.terms {
        table.push(vec![term.n.into(), (&term.value).into(), term.ln_value.into()]);
    }
    Ok(Outcome::clean(table))
}

pub fn cmd_verify(cfg: &RunConfig, oracle_max: usize) -> Result<Outcome, CliError> {
    let theta = cfg.theta();
    let grid = cfg.grid();
    let results = projection_norms(&cfg.spec, &grid, theta, &cfg.policy)?;
    let oracles: Vec<Option<(Float, u32)>> = results
        .par_iter()
        .map(|r| {
            if r.n > oracle_max {
                return Ok(None);
            }
            let q = quadrature_norm_oracle(&cfg.spec, r.n, theta, None, &cfg.policy)?;
            let agree = agreement_digits(&q.value, &r.norm.value, q.precision_used.min(r.norm.precision_used));
            Ok(Some((q.value, agree)))
        })
        .collect::<Result<_, Error>>()?;
    let refs: Vec<&NormResult> = results.iter().collect();
    let mut table = Table::new(
        vec![
            "n",
            "N",
            "lower_ok",
            "upper_ok",
            "oracle",
            "agreement_digits",
            "oracle_ok",
        ],
        provenance(cfg, &refs),
    );
    let needed = cfg.policy.target_digits.saturating_sub(1);
    let mut failures = Vec::new();
    for (r, o) in results.iter().zip(&oracles) {
        let oracle_ok = o.as_ref().map(|(_, d)| *d >= needed);
        if !r.sandwich_ok() || oracle_ok == Some(false) {
            failures.push(r.n.to_string());
        }
        table.push(vec![
            r.n.into(),
            (&r.norm.value).into(),
            r.lower_ok.into(),
            upper_ok_cell(r),
            o.as_ref().map(|(v, _)| v).into(),
            o.as_ref().map(|(_, d)| *d).into(),
            oracle_ok.map_or(Cell::Text("na".into()), Cell::Bool),
        ]);
    }
    table.note("checked", results.len());
    table.note("failed", failures.len());
    let violation = (!failures.is_empty()).then(|| format!("verification fails at n = {}", failures.join(", ")));
    Ok(Outcome { table, violation })
}

pub fn cmd_semiclassical(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.require_hermite()?;
    let theta = cfg.theta();
    let n = cfg.n.expect("semiclassical takes --n");
    let cmp = semiclassical_comparison(theta, n, Some(&cfg.policy))?;
    let mut table = Table::new(
        vec!["n", "theta_rad", "n_tan_2theta", "log_gaussian_ratio", "log_norm"],
        provenance(cfg, &[]),
    );
    table.push(vec![
        n.into(),
        cmp.theta_rad.into(),
        cmp.n_tan_2theta.into(),
        cmp.log_gaussian_ratio.into(),
        cmp.log_norm.into(),
    ]);
    Ok(Outcome::clean(table))
}

fn emit(cfg: &RunConfig, table: &Table, stdout: &mut dyn Write) -> Result<(), CliError> {
    let digits = cfg.policy.target_digits;
    let text = match cfg.format {
        Format::Csv => table.to_csv(digits),
        Format::Json => table.to_json(digits),
        Format::Plain => table.to_plain(digits),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if cfg.plot {
        let stem = match &cfg.out {
            Some(path) => path.with_extension(""),
            None => PathBuf::from(format!("specnorm-{}", cfg.command)),
        };
        write_plot(cfg.command, table, digits, &stem)?;
    }
    Ok(())
}

/// `<stem>.plot.csv` with the data and `<stem>.gp` plotting it.
fn write_plot(command: &str, table: &Table, digits: u32, stem: &Path) -> std::io::Result<()> {
    let csv_path = stem.with_extension("plot.csv");
    let gp_path = stem.with_extension("gp");
    std::fs::write(&csv_path, table.to_csv(digits))?;

    let (x, ys, log_y): (&str, &[&str], bool) = match command {
        "table1" => ("theta_pi", &["sec_2theta", "sigma_n", "four_sec_2theta", "mu"], false),
        "growth" => ("n", &["log_N_over_n"], false),
        "expansion" => ("n", &["ln_term"], false),
        "bounds" => ("n", &["N", "lower", "upper"], true),
        "verify" => ("n", &["N", "oracle"], true),
        _ => ("n", &["N"], true),
    };
    let column = |name: &str| table.columns.iter().position(|c| *c == name).map(|i| i + 1);
    let data_name = csv_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut gp = String::new();
    gp.push_str("set datafile separator ','\n");
    gp.push_str(&format!("set xlabel '{x}'\n"));
    if log_y {
        gp.push_str("set logscale y\n");
    }
    gp.push_str("set key left top\n");
    let xi = column(x).unwrap_or(1);
    let plots: Vec<String> = ys
        .iter()
        .filter_map(|y| {
            column(y).map(|yi| format!("'{data_name}' using {xi}:{yi} skip 1 with linespoints title '{y}'"))
        })
        .collect();
    gp.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    std::fs::write(gp_path, gp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["specnorm"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn self_adjoint_norm_is_one() {
        let (code, out, _) = run_args(&["norm", "--family", "hermite", "--theta", "0", "--n", "7"]);
        assert_eq!(code, EXIT_OK);
        let row = out.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[3], "1");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run_args(&["norm", "--family", "laguerre", "--theta", "pi/2", "--n", "3"]).0,
            EXIT_SECTOR
        );
        assert_eq!(run_args(&["norm", "--theta", "zzz", "--n", "3"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["norm", "--theta", "0.1", "--n", "3", "--digits", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["norm", "--family", "gammabeta", "--theta", "0.1", "--n", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn expansion_at_time_zero_diverges() {
        let (code, out, _) = run_args(&[
            "expansion",
            "--theta",
            "0.1pi",
            "--t",
            "0",
            "--n-max",
            "40",
            "--digits",
            "10",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("# verdict=divergent"));
    }
}
