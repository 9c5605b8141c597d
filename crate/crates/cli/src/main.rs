//! `jenfi` — divergences between probability densities from the command
//! line: pairwise measures, single-density functionals, figure sweeps, and
//! deBruijn identity checks, emitted as CSV or JSON.

mod config;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jenfi::divergence::{
    debruijn_check, directed_jfd, fisher_divergence_g, fisher_information, jfd, jsd,
    kl_divergence, relative_fisher, shannon_entropy, DivergenceReport,
};
use jenfi::experiments::{
    sweep_gamma, sweep_hermite_pair_rules, sweep_hermite_vs_reference,
    sweep_sinusoidal_vs_reference, PairingRule, SweepTable,
};
use jenfi::{Density, DensityRef, Error, QuadConfig};

use output::{Format, MeasureRow, OutputConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad specs, parameters, flags: exit 2.
    Validation(String),
    /// Quadrature failed to settle: exit 3.
    NotConverged(String),
    /// Output plumbing: exit 1.
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "jenfi", version, about = "Jensen-Shannon and Jensen-Fisher divergences between probability densities", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Decimal digits in CSV values (4..=17)
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,

    /// Absolute quadrature tolerance (default 1e-10)
    #[arg(long, global = true)]
    abs_tol: Option<f64>,

    /// Relative quadrature tolerance (default 1e-8)
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Config file with key=value overrides (abs_tol, rel_tol,
    /// max_subdivisions, divergence_cap); JENFI_CONFIG is honored when the
    /// flag is absent, and command-line flags win over the file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    Jsd,
    Jfd,
    Kl,
    Klrev,
    Frel,
    Frelrev,
    G,
    Fbar,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Measure::Jsd => "jsd",
            Measure::Jfd => "jfd",
            Measure::Kl => "kl",
            Measure::Klrev => "klrev",
            Measure::Frel => "frel",
            Measure::Frelrev => "frelrev",
            Measure::G => "g",
            Measure::Fbar => "fbar",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InfoMeasure {
    Entropy,
    Fisher,
}

impl std::fmt::Display for InfoMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InfoMeasure::Entropy => "entropy",
            InfoMeasure::Fisher => "fisher",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Subcommand)]
enum Command {
    /// Divergences between two densities
    Divergence {
        /// First density, e.g. sinusoidal:n=10
        spec1: String,
        /// Second density, e.g. gaussian:mean=0,sigma=1
        spec2: String,
        /// Comma-separated subset of jsd,jfd,kl,klrev,frel,frelrev,g,fbar
        #[arg(long, value_delimiter = ',', default_values_t = [Measure::Jsd, Measure::Jfd])]
        measures: Vec<Measure>,
    },
    /// Entropy and Fisher information of one density
    Info {
        spec: String,
        /// Comma-separated subset of entropy,fisher
        #[arg(long, value_delimiter = ',', default_values_t = [InfoMeasure::Entropy, InfoMeasure::Fisher])]
        measures: Vec<InfoMeasure>,
    },
    /// Reproduce a figure sweep (fig1..fig7)
    Sweep {
        #[arg(value_enum)]
        figure: Figure,
        /// Parameter overrides as key=value (reference_n, n_max, beta_min,
        /// beta_max, steps, jfd_cap, depending on the figure)
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Verify d/deps JSD[p*G_eps, q*G_eps] at 0 against -JFD[p,q]/2
    Debruijn {
        spec1: String,
        spec2: String,
        /// Strictly decreasing smoothing variances (need at least 3)
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 5e-3, 2.5e-3])]
        epsilons: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = OutputConfig {
        format: cli.format,
        destination: cli.out.clone(),
        precision: cli.precision,
    };
    let result = out.validate().and_then(|()| {
        let quad = config::resolve_quad_config(cli.config.as_deref(), cli.abs_tol, cli.rel_tol)?;
        run(cli.command, &quad, &out)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::NotConverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, quad: &QuadConfig, out: &OutputConfig) -> Result<(), CliError> {
    match command {
        Command::Divergence {
            spec1,
            spec2,
            measures,
        } => cmd_divergence(&spec1, &spec2, &measures, quad, out),
        Command::Info { spec, measures } => cmd_info(&spec, &measures, quad, out),
        Command::Sweep { figure, overrides } => cmd_sweep(figure, &overrides, quad, out),
        Command::Debruijn {
            spec1,
            spec2,
            epsilons,
        } => cmd_debruijn(&spec1, &spec2, &epsilons, quad, out),
    }
}

fn row_from_report(measure: &str, report: DivergenceReport) -> MeasureRow {
    if report.is_divergent() {
        MeasureRow {
            measure: measure.to_string(),
            value: None,
            error_estimate: None,
            status: "divergent",
        }
    } else {
        MeasureRow {
            measure: measure.to_string(),
            value: Some(report.value),
            error_estimate: Some(report.error_estimate),
            status: "finite",
        }
    }
}

fn cmd_divergence(
    spec1: &str,
    spec2: &str,
    measures: &[Measure],
    quad: &QuadConfig,
    out: &OutputConfig,
) -> Result<(), CliError> {
    if measures.is_empty() {
        return Err(CliError::Validation("no measures requested".into()));
    }
    let d1: DensityRef = spec::parse_density(spec1)?;
    let d2: DensityRef = spec::parse_density(spec2)?;
    let a: &dyn Density = &*d1;
    let b: &dyn Density = &*d2;

    let mut rows = Vec::new();
    for m in measures {
        let (name, report) = match m {
            Measure::Jsd => ("jsd", jsd(a, b, quad)?),
            Measure::Jfd => ("jfd", jfd(a, b, quad)?),
            Measure::Kl => ("kl", kl_divergence(a, b, quad)?),
            Measure::Klrev => ("klrev", kl_divergence(b, a, quad)?),
            Measure::Frel => ("frel", relative_fisher(a, b, quad)?),
            Measure::Frelrev => ("frelrev", relative_fisher(b, a, quad)?),
            Measure::G => ("g", fisher_divergence_g(a, b, quad)?),
            Measure::Fbar => ("fbar", directed_jfd(a, b, quad)?),
        };
        rows.push(row_from_report(name, report));
    }
    let metadata = [
        ("density1", spec1.to_string()),
        ("density2", spec2.to_string()),
        ("abs_tol", format!("{:e}", quad.abs_tol)),
        ("rel_tol", format!("{:e}", quad.rel_tol)),
    ];
    out.write(&output::render_measures(&rows, &metadata, out))
}

fn cmd_info(
    spec: &str,
    measures: &[InfoMeasure],
    quad: &QuadConfig,
    out: &OutputConfig,
) -> Result<(), CliError> {
    if measures.is_empty() {
        return Err(CliError::Validation("no measures requested".into()));
    }
    let d: DensityRef = spec::parse_density(spec)?;
    let mut rows = Vec::new();
    for m in measures {
        let (name, report) = match m {
            InfoMeasure::Entropy => ("entropy", shannon_entropy(&*d, quad)?),
            InfoMeasure::Fisher => ("fisher", fisher_information(&*d, quad)?),
        };
        rows.push(row_from_report(name, report));
    }
    let metadata = [
        ("density", spec.to_string()),
        ("abs_tol", format!("{:e}", quad.abs_tol)),
        ("rel_tol", format!("{:e}", quad.rel_tol)),
    ];
    out.write(&output::render_measures(&rows, &metadata, out))
}

/// Figure parameter overrides: `--set key=value`.
struct Overrides {
    reference_n: Option<u32>,
    n_max: Option<u32>,
    beta_min: Option<f64>,
    beta_max: Option<f64>,
    steps: Option<usize>,
    jfd_cap: Option<f64>,
}

fn parse_overrides(pairs: &[String]) -> Result<Overrides, CliError> {
    let mut o = Overrides {
        reference_n: None,
        n_max: None,
        beta_min: None,
        beta_max: None,
        steps: None,
        jfd_cap: None,
    };
    for p in pairs {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("override `{p}` is not key=value")))?;
        let bad = |e: String| CliError::Validation(format!("override `{p}`: {e}"));
        match k.trim() {
            "reference_n" => o.reference_n = Some(v.parse().map_err(|e| bad(format!("{e}")))?),
            "n_max" => o.n_max = Some(v.parse().map_err(|e| bad(format!("{e}")))?),
            "beta_min" => o.beta_min = Some(v.parse().map_err(|e| bad(format!("{e}")))?),
            "beta_max" => o.beta_max = Some(v.parse().map_err(|e| bad(format!("{e}")))?),
            "steps" => o.steps = Some(v.parse().map_err(|e| bad(format!("{e}")))?),
            "jfd_cap" => o.jfd_cap = Some(v.parse().map_err(|e| bad(format!("{e}")))?),
            other => {
                return Err(CliError::Validation(format!(
                    "unknown override key `{other}`"
                )))
            }
        }
    }
    Ok(o)
}

fn cmd_sweep(
    figure: Figure,
    overrides: &[String],
    quad: &QuadConfig,
    out: &OutputConfig,
) -> Result<(), CliError> {
    let o = parse_overrides(overrides)?;
    let (name, table): (&str, SweepTable) = match figure {
        Figure::Fig1 => (
            "fig1",
            sweep_sinusoidal_vs_reference(o.reference_n.unwrap_or(1), o.n_max.unwrap_or(50), quad)?,
        ),
        Figure::Fig2 => (
            "fig2",
            sweep_sinusoidal_vs_reference(o.reference_n.unwrap_or(10), o.n_max.unwrap_or(50), quad)?,
        ),
        Figure::Fig3 | Figure::Fig4 => (
            if figure == Figure::Fig3 { "fig3" } else { "fig4" },
            sweep_gamma(
                o.beta_min.unwrap_or(1.05),
                o.beta_max.unwrap_or(80.0),
                o.steps.unwrap_or(100),
                quad,
            )?,
        ),
        Figure::Fig5 => (
            "fig5",
            sweep_hermite_vs_reference(o.reference_n.unwrap_or(10), o.n_max.unwrap_or(50), quad)?,
        ),
        Figure::Fig6 => {
            let rules = [
                PairingRule::FixedReference(0),
                PairingRule::FixedReference(10),
                PairingRule::FixedReference(40),
            ];
            (
                "fig6",
                sweep_hermite_pair_rules(&rules, o.n_max.unwrap_or(60), f64::INFINITY, quad)?,
            )
        }
        Figure::Fig7 => {
            let rules = [
                PairingRule::Offset(1),
                PairingRule::Offset(10),
                PairingRule::Multiple(2),
                PairingRule::MultipleOffset(2, 10),
                PairingRule::Multiple(3),
                PairingRule::Multiple(4),
            ];
            (
                "fig7",
                sweep_hermite_pair_rules(
                    &rules,
                    o.n_max.unwrap_or(100),
                    o.jfd_cap.unwrap_or(240.0),
                    quad,
                )?,
            )
        }
    };
    let metadata = [
        ("abs_tol", format!("{:e}", quad.abs_tol)),
        ("rel_tol", format!("{:e}", quad.rel_tol)),
    ];
    out.write(&output::render_sweep(&table, name, &metadata, out))
}

fn cmd_debruijn(
    spec1: &str,
    spec2: &str,
    epsilons: &[f64],
    quad: &QuadConfig,
    out: &OutputConfig,
) -> Result<(), CliError> {
    let d1 = spec::parse_density(spec1)?;
    let d2 = spec::parse_density(spec2)?;
    let report = debruijn_check(&*d1, &*d2, epsilons, quad)?;

    let content = match out.format {
        Format::Csv => format!(
            "lhs_slope,rhs,relative_gap\n{},{},{}\n",
            format_args!("{:.*e}", out.precision, report.lhs_slope),
            format_args!("{:.*e}", out.precision, report.rhs),
            format_args!("{:.*e}", out.precision, report.relative_gap),
        ),
        Format::Json => {
            let doc = serde_json::json!({
                "metadata": {
                    "density1": spec1,
                    "density2": spec2,
                    "epsilons": epsilons,
                },
                "records": [{
                    "lhs_slope": report.lhs_slope,
                    "rhs": report.rhs,
                    "relative_gap": report.relative_gap,
                }],
            });
            format!("{:#}\n", doc)
        }
    };
    out.write(&content)
}
