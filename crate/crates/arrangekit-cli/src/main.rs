//! `arrangekit` — arrangement calculus for N-body systems on the command
//! line.
//!
//! Exit codes: 0 on success, 2 on validation errors (bad notation, bad
//! config, missing catalog energies), 3 when a resource cap is exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use arrangekit::combinatorics::{
    bell_asymptotic, bell_capped, bell_sequence, hardy_ramanujan, ln_big, partition_count_capped,
    partition_sequence, AsymptoticEstimate, CombinatoricsError, DEFAULT_BELL_CAP,
    DEFAULT_PARTITION_CAP,
};
use arrangekit::enumeration::{
    count_arrangements_capped, enumerate_arrangements_capped, EnumerationError,
    DEFAULT_ENUMERATION_CAP,
};
use arrangekit::notation::{self, NotationError};
use arrangekit::separability::{
    confinement_check, default_sweep_scales, fit_slope, mean_spectator_distance, scale_sweep,
    subsystem_geometry, SeparabilityError,
};
use arrangekit::spectrum::{
    assign_g_capped, export_spectrum, SpectrumError, DEFAULT_LADDER_CAP,
};

mod config;
mod output;

use config::ConfigDocument;
use output::{aligned_table, to_stable_json};

/// A classified command-line failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<CombinatoricsError> for CliError {
    fn from(e: CombinatoricsError) -> Self {
        match e {
            CombinatoricsError::CapExceeded { .. } => CliError::resource(e.to_string()),
            CombinatoricsError::BelowMinimum { .. } => CliError::validation(e.to_string()),
        }
    }
}

impl From<EnumerationError> for CliError {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::CapExceeded { .. }
            | EnumerationError::Combinatorics(CombinatoricsError::CapExceeded { .. }) => {
                CliError::resource(e.to_string())
            }
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::CapExceeded { .. } => CliError::resource(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<SeparabilityError> for CliError {
    fn from(e: SeparabilityError) -> Self {
        CliError::validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Bell-number asymptotic (K ln K = N).
    Bell,
    /// Hardy-Ramanujan partition asymptotic.
    Hr,
}

#[derive(Parser)]
#[command(
    name = "arrangekit",
    version,
    about = "Arrangement calculus for N-body systems: notation, enumeration, counts, spectrum structure, separability geometry"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Override the subcommand's resource cap (enumeration candidates,
    /// exact-count index, or ladder combinations).
    #[arg(long, global = true)]
    cap: Option<u64>,

    /// Random seed, reserved for randomized diagnostics. Every current
    /// command is deterministic, so this flag has no effect on output.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an arrangement string and print its canonical form.
    Parse {
        /// Arrangement in text notation, e.g. "(A)(B,C)".
        text: String,
        /// Config declaring the species; without it any well-formed species
        /// token is accepted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List (or count) every arrangement of the configured system.
    Enumerate {
        /// Config document (or use --config).
        config_path: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Print only the arrangement count M, using closed-form fast paths
        /// where available.
        #[arg(long)]
        count_only: bool,
    },
    /// Exact arrangement-count sequences: Bell numbers and partition numbers.
    #[command(group(ArgGroup::new("which").required(true).args(["bell", "partitions", "table"])))]
    Counts {
        /// Print B(N), the number of arrangements of N distinguishable
        /// particles binding in all configurations.
        #[arg(long, value_name = "N")]
        bell: Option<u64>,
        /// Print p(N), the number of arrangements of N identical particles
        /// binding in all configurations.
        #[arg(long, value_name = "N")]
        partitions: Option<u64>,
        /// Print the p/B table for 1..=N.
        #[arg(long, value_name = "N")]
        table: Option<u64>,
    },
    /// Asymptotic estimates against the exact counts.
    Asymptotics {
        /// The N to estimate at (omit when using --series).
        n: Option<u64>,
        /// Which asymptotic form to evaluate.
        #[arg(long, value_enum)]
        method: Method,
        /// Emit (N, ln value) rows over an inclusive range, e.g. 1..50.
        #[arg(long, value_name = "A..B")]
        series: Option<String>,
    },
    /// Threshold structure of the spectrum: g-numbering, ladders, open
    /// arrangements. An energy exactly at a threshold counts as open.
    Spectrum {
        /// Config document (or use --config).
        config_path: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report the arrangements open at this total energy (zero is all
        /// particles free and at rest).
        #[arg(long, value_name = "E", allow_hyphen_values = true)]
        at_energy: Option<f64>,
    },
    /// Subsystem mass geometry and the separable-limit residual.
    Separability {
        /// Config document (or use --config).
        config_path: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Evaluate the residual over K halving scales from 2^-4 and fit the
        /// decay exponent q.
        #[arg(long, value_name = "K")]
        scale_sweep: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message);
            ExitCode::from(error.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Parse { text, config } => cmd_parse(&cli, text, config.as_deref())?,
        Command::Enumerate {
            config_path,
            config,
            count_only,
        } => {
            let document = load_config(config_path, config)?;
            cmd_enumerate(&cli, &document, *count_only)?
        }
        Command::Counts {
            bell,
            partitions,
            table,
        } => cmd_counts(&cli, *bell, *partitions, *table)?,
        Command::Asymptotics { n, method, series } => {
            cmd_asymptotics(&cli, *n, *method, series.as_deref())?
        }
        Command::Spectrum {
            config_path,
            config,
            at_energy,
        } => {
            let document = load_config(config_path, config)?;
            cmd_spectrum(&cli, &document, *at_energy)?
        }
        Command::Separability {
            config_path,
            config,
            scale_sweep,
        } => {
            let document = load_config(config_path, config)?;
            cmd_separability(&cli, &document, *scale_sweep)?
        }
    };
    emit(&cli.out, &text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::validation(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(
    positional: &Option<PathBuf>,
    flag: &Option<PathBuf>,
) -> Result<ConfigDocument, CliError> {
    let path = match (positional, flag) {
        (Some(_), Some(_)) => {
            return Err(CliError::validation(
                "give the config path either positionally or via --config, not both",
            ))
        }
        (Some(path), None) | (None, Some(path)) => path,
        (None, None) => {
            return Err(CliError::validation(
                "a config document is required (positional path or --config)",
            ))
        }
    };
    ConfigDocument::load(path)
}

/// Renders a notation error with a caret marking the offending byte offset.
fn caret_error(text: &str, error: &NotationError) -> CliError {
    let offset = match error {
        NotationError::Syntax(e) => Some(e.offset),
        NotationError::UnknownSpecies { offset, .. } => Some(*offset),
        NotationError::InfinityNotEnumerable { offset } => Some(*offset),
        NotationError::Model(_) => None,
    };
    let mut message = error.to_string();
    if let Some(offset) = offset {
        let column = text
            .get(..offset)
            .map(|prefix| prefix.chars().count())
            .unwrap_or(offset);
        message.push_str(&format!("\n  {text}\n  {}^", " ".repeat(column)));
    }
    CliError::validation(message)
}

fn cmd_parse(
    cli: &Cli,
    text: &str,
    config: Option<&std::path::Path>,
) -> Result<String, CliError> {
    let arrangement = match config {
        Some(path) => {
            let document = ConfigDocument::load(path)?;
            let table = document.species_table()?;
            notation::parse(text, &table).map_err(|e| caret_error(text, &e))?
        }
        None => notation::parse_lenient(text).map_err(|e| caret_error(text, &e))?,
    };
    let canonical = notation::print(&arrangement);
    match cli.format {
        Format::Table => {
            let mut out = canonical.clone();
            out.push('\n');
            for (name, count) in arrangement.composition().counts() {
                out.push_str(&format!("{name}: {count}\n"));
            }
            Ok(out)
        }
        Format::Json => {
            let composition: serde_json::Map<String, serde_json::Value> = arrangement
                .composition()
                .counts()
                .map(|(name, count)| (name.as_str().to_owned(), json!(count)))
                .collect();
            Ok(to_stable_json(json!({
                "canonical": canonical,
                "composition": composition,
            })))
        }
    }
}

fn cmd_enumerate(
    cli: &Cli,
    document: &ConfigDocument,
    count_only: bool,
) -> Result<String, CliError> {
    let spec = document.system_spec()?;
    let cap = cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    if count_only {
        let count = count_arrangements_capped(&spec, cap)?;
        return Ok(match cli.format {
            Format::Table => format!("{count}\n"),
            Format::Json => to_stable_json(json!({ "count": count.to_string() })),
        });
    }
    let set = enumerate_arrangements_capped(&spec, cap)?;
    let strings: Vec<String> = set.iter().map(notation::print).collect();
    Ok(match cli.format {
        Format::Table => {
            let mut out = String::new();
            for line in &strings {
                out.push_str(line);
                out.push('\n');
            }
            out
        }
        Format::Json => to_stable_json(json!({
            "count": set.count().to_string(),
            "has_all_bound": set.has_all_bound(),
            "has_all_free": set.has_all_free(),
            "arrangements": strings,
        })),
    })
}

fn cmd_counts(
    cli: &Cli,
    bell: Option<u64>,
    partitions: Option<u64>,
    table: Option<u64>,
) -> Result<String, CliError> {
    if let Some(n) = bell {
        let value = bell_capped(n, cli.cap.unwrap_or(DEFAULT_BELL_CAP))?;
        return Ok(match cli.format {
            Format::Table => format!("{value}\n"),
            Format::Json => to_stable_json(json!({
                "kind": "bell", "n": n, "value": value.to_string(),
            })),
        });
    }
    if let Some(n) = partitions {
        let value = partition_count_capped(n, cli.cap.unwrap_or(DEFAULT_PARTITION_CAP))?;
        return Ok(match cli.format {
            Format::Table => format!("{value}\n"),
            Format::Json => to_stable_json(json!({
                "kind": "partitions", "n": n, "value": value.to_string(),
            })),
        });
    }
    let n = table.expect("clap group guarantees one option");
    if n == 0 {
        return Err(CliError::validation("--table expects N >= 1"));
    }
    let bells = bell_sequence(n, cli.cap.unwrap_or(DEFAULT_BELL_CAP))?;
    let parts = partition_sequence(n, cli.cap.unwrap_or(DEFAULT_PARTITION_CAP))?;
    Ok(match cli.format {
        Format::Table => {
            let rows: Vec<Vec<String>> = (1..=n as usize)
                .map(|i| {
                    vec![i.to_string(), parts[i].to_string(), bells[i].to_string()]
                })
                .collect();
            aligned_table(&["N", "p(N)", "B(N)"], &rows)
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = (1..=n as usize)
                .map(|i| {
                    json!({
                        "n": i,
                        "partitions": parts[i].to_string(),
                        "bell": bells[i].to_string(),
                    })
                })
                .collect();
            to_stable_json(json!({ "rows": rows }))
        }
    })
}

struct ExactSide {
    value: Option<BigUint>,
}

impl ExactSide {
    fn compute(method: Method, n: u64, cap: u64) -> Result<Self, CliError> {
        let result = match method {
            Method::Bell => bell_capped(n, cap),
            Method::Hr => partition_count_capped(n, cap),
        };
        match result {
            Ok(value) => Ok(ExactSide { value: Some(value) }),
            Err(CombinatoricsError::CapExceeded { .. }) => Ok(ExactSide { value: None }),
            Err(other) => Err(other.into()),
        }
    }
}

fn estimate_for(method: Method, n: u64) -> AsymptoticEstimate {
    match method {
        Method::Bell => bell_asymptotic(n),
        Method::Hr => hardy_ramanujan(n),
    }
}

fn exact_cap(cli: &Cli, method: Method) -> u64 {
    cli.cap.unwrap_or(match method {
        Method::Bell => DEFAULT_BELL_CAP,
        Method::Hr => DEFAULT_PARTITION_CAP,
    })
}

fn cmd_asymptotics(
    cli: &Cli,
    n: Option<u64>,
    method: Method,
    series: Option<&str>,
) -> Result<String, CliError> {
    if let Some(series) = series {
        return cmd_asymptotics_series(cli, method, series);
    }
    let n = n.ok_or_else(|| {
        CliError::validation("give N as a positional argument or use --series A..B")
    })?;
    if n == 0 {
        return Err(CliError::validation("asymptotic forms require N >= 1"));
    }
    let estimate = estimate_for(method, n);
    let exact = ExactSide::compute(method, n, exact_cap(cli, method))?;
    let log_exact = exact.value.as_ref().map(ln_big);
    let ratio = log_exact.map(|le| (estimate.log_value - le).exp());

    Ok(match cli.format {
        Format::Table => {
            let mut out = format!("n = {n}\nmethod = {}\n", estimate.method.name());
            match estimate.value {
                Some(value) => out.push_str(&format!("estimate = {value}\n")),
                None => out.push_str("estimate = (beyond f64 range; see log_estimate)\n"),
            }
            out.push_str(&format!("log_estimate = {}\n", estimate.log_value));
            match (&exact.value, log_exact, ratio) {
                (Some(value), Some(le), Some(r)) => {
                    out.push_str(&format!("exact = {value}\n"));
                    out.push_str(&format!("log_exact = {le}\n"));
                    out.push_str(&format!("ratio = {r}\n"));
                }
                _ => out.push_str("exact = (above cap; omitted)\n"),
            }
            out
        }
        Format::Json => to_stable_json(json!({
            "n": n,
            "method": estimate.method.name(),
            "estimate": estimate.value,
            "log_estimate": estimate.log_value,
            "exact": exact.value.as_ref().map(|v| v.to_string()),
            "log_exact": log_exact,
            "ratio": ratio,
        })),
    })
}

fn cmd_asymptotics_series(cli: &Cli, method: Method, series: &str) -> Result<String, CliError> {
    let (from, to) = series
        .split_once("..")
        .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
        .ok_or_else(|| {
            CliError::validation(format!("--series expects A..B with integers, got `{series}`"))
        })?;
    if from == 0 || to < from {
        return Err(CliError::validation(
            "--series expects 1 <= A <= B (asymptotic forms require N >= 1)",
        ));
    }
    let cap = exact_cap(cli, method);
    let exact_to = to.min(cap);
    let exact_logs: Vec<Option<f64>> = {
        let sequence = match method {
            Method::Bell => bell_sequence(exact_to, cap)?,
            Method::Hr => partition_sequence(exact_to, cap)?,
        };
        (from..=to)
            .map(|n| {
                if n <= exact_to {
                    Some(ln_big(&sequence[n as usize]))
                } else {
                    None
                }
            })
            .collect()
    };
    let estimates: Vec<AsymptoticEstimate> =
        (from..=to).map(|n| estimate_for(method, n)).collect();

    Ok(match cli.format {
        Format::Table => {
            let rows: Vec<Vec<String>> = (from..=to)
                .enumerate()
                .map(|(i, n)| {
                    vec![
                        n.to_string(),
                        exact_logs[i]
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| "-".to_owned()),
                        estimates[i].log_value.to_string(),
                    ]
                })
                .collect();
            aligned_table(&["N", "ln exact", "ln estimate"], &rows)
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = (from..=to)
                .enumerate()
                .map(|(i, n)| {
                    json!({
                        "n": n,
                        "log_exact": exact_logs[i],
                        "log_estimate": estimates[i].log_value,
                    })
                })
                .collect();
            to_stable_json(json!({ "method": estimates[0].method.name(), "series": rows }))
        }
    })
}

fn format_ladder(ladder: &[(f64, u64)]) -> String {
    ladder
        .iter()
        .map(|(energy, multiplicity)| format!("{energy} (x{multiplicity})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_spectrum(
    cli: &Cli,
    document: &ConfigDocument,
    at_energy: Option<f64>,
) -> Result<String, CliError> {
    let spec = document.system_spec()?;
    let catalog = document.energy_catalog(spec.species())?;
    let set = enumerate_arrangements_capped(&spec, DEFAULT_ENUMERATION_CAP)?;
    let layout = assign_g_capped(&set, &catalog, cli.cap.unwrap_or(DEFAULT_LADDER_CAP))?;
    for diagnostic in layout.diagnostics() {
        eprintln!("warning: {diagnostic}");
    }

    if let Some(energy) = at_energy {
        let open = layout.open_arrangements(energy);
        let names: Vec<String> = open.open.iter().map(notation::print).collect();
        return Ok(match cli.format {
            Format::Table => {
                let mut out = format!("open arrangements at E = {energy}: {}\n", open.count);
                for name in &names {
                    out.push_str(name);
                    out.push('\n');
                }
                out
            }
            Format::Json => to_stable_json(json!({
                "energy": energy,
                "count": open.count,
                "open": names,
            })),
        });
    }

    let exported = export_spectrum(&layout, &catalog);
    Ok(match cli.format {
        Format::Table => {
            let mut out = String::new();
            for record in &exported.arrangements {
                match (&record.lowest_threshold, &record.ladder) {
                    (Some(threshold), Some(ladder)) => {
                        out.push_str(&format!(
                            "g={}  {}  T = {}  ladder: {}\n",
                            record.g,
                            record.arrangement,
                            threshold,
                            format_ladder(ladder)
                        ));
                    }
                    _ => {
                        let levels = record
                            .bound_levels
                            .as_ref()
                            .map(|levels| {
                                levels
                                    .iter()
                                    .map(f64::to_string)
                                    .collect::<Vec<_>>()
                                    .join(", ")
                            })
                            .unwrap_or_else(|| "(not in catalog)".to_owned());
                        out.push_str(&format!(
                            "g={}  {}  bound levels: {}\n",
                            record.g, record.arrangement, levels
                        ));
                    }
                }
                for note in &record.annotations {
                    out.push_str(&format!("      note: {note}\n"));
                }
            }
            out
        }
        Format::Json => to_stable_json(&exported),
    })
}

fn cmd_separability(
    cli: &Cli,
    document: &ConfigDocument,
    sweep: Option<usize>,
) -> Result<String, CliError> {
    let (configuration, potentials) = document.separability_inputs()?;
    let geometry = subsystem_geometry(&configuration);
    let confinement = confinement_check(&geometry);
    let spectator_scale = mean_spectator_distance(&configuration);
    let samples = match sweep {
        Some(k) if k > 0 => Some(scale_sweep(
            &configuration,
            &potentials,
            &default_sweep_scales(k),
        )?),
        Some(_) => {
            return Err(CliError::validation("--scale-sweep expects K >= 1"))
        }
        None => None,
    };
    let fitted_q = samples.as_deref().and_then(fit_slope);

    Ok(match cli.format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("subsystem = {:?}\n", configuration.subsystem()));
            out.push_str(&format!("total mass = {}\n", geometry.total_mass));
            out.push_str(&format!("reduced mass = {}\n", geometry.reduced_mass));
            out.push_str(&format!(
                "center = ({}, {}, {})\n",
                geometry.center[0], geometry.center[1], geometry.center[2]
            ));
            out.push_str(&format!("hyperradius = {}\n", geometry.hyperradius));
            if let Some(scale) = spectator_scale {
                out.push_str(&format!(
                    "mean spectator distance (diagnostic r_rho) = {scale}\n"
                ));
            }
            out.push_str(&format!(
                "confinement: {}\n",
                if confinement.holds { "holds" } else { "VIOLATED" }
            ));
            for ((index, distance), margin) in configuration
                .subsystem()
                .iter()
                .zip(&geometry.distances_to_center)
                .zip(&confinement.margins)
            {
                out.push_str(&format!(
                    "  particle {index}: r_c = {distance}, margin = {margin}\n"
                ));
            }
            if let Some(samples) = &samples {
                out.push_str("sweep:\n");
                for sample in samples {
                    out.push_str(&format!(
                        "  s = {}  residual = {:e}\n",
                        sample.scale, sample.residual
                    ));
                }
                match fitted_q {
                    Some(q) => out.push_str(&format!("fitted q = {q}\n")),
                    None => out.push_str("fitted q = (not enough usable samples)\n"),
                }
            }
            out
        }
        Format::Json => {
            let sweep_rows: Option<Vec<serde_json::Value>> = samples.as_ref().map(|samples| {
                samples
                    .iter()
                    .map(|s| {
                        json!({
                            "scale": s.scale,
                            "hyperradius": s.hyperradius,
                            "cross_potential": s.cross_potential,
                            "separable_potential": s.separable_potential,
                            "residual": s.residual,
                        })
                    })
                    .collect()
            });
            to_stable_json(json!({
                "subsystem": configuration.subsystem(),
                "geometry": {
                    "center": geometry.center,
                    "total_mass": geometry.total_mass,
                    "reduced_mass": geometry.reduced_mass,
                    "hyperradius": geometry.hyperradius,
                    "distances_to_center": geometry.distances_to_center,
                    "mean_spectator_distance": spectator_scale,
                },
                "confinement": {
                    "holds": confinement.holds,
                    "margins": confinement.margins,
                },
                "sweep": sweep_rows,
                "fitted_q": fitted_q,
            }))
        }
    })
}
