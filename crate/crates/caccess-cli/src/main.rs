//! caccess - spatial access inequality toolkit.
//!
//! One binary, five subcommands, one workflow: describe a region in a JSON
//! scenario file, then
//!
//! - `simulate` writes the full per-LGA results table,
//! - `lorenz` emits the sorted Lorenz coordinates and/or an SVG chart,
//! - `gini` prints scalar inequality indices,
//! - `compare` diffs two scenarios over the same region,
//! - `plan` ranks candidate sites for additional facilities.
//!
//! Exit codes: 0 success, 1 usage error, 2 scenario parse/validation error,
//! 3 domain or output error. Output files are written atomically.

use std::fmt;
use std::fs;
use std::io::{IsTerminal, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use caccess::inequality::{atkinson, lorenz_curve, sort_ratios};
use caccess::io::{
    parse_candidate_sites, parse_ratio_overrides, parse_scenario, ratio_pairs, render_lorenz_svg,
    write_lorenz_csv, write_results_csv, ResultsTable,
};
use caccess::model::simulate_region;
use caccess::planner::{compare, evaluate_with_epsilons, plan_additional, PlanStrategy};
use caccess::{LorenzCurve, Scenario, SortedRatios};

#[derive(Parser)]
#[command(
    name = "caccess",
    version,
    about = "Spatial inequality analytics for health-service access",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and emit the full results table as CSV
    Simulate {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Write the CSV here instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Emit sorted Lorenz coordinates as CSV and/or an SVG chart
    Lorenz {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Write the coordinate CSV here
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Write the SVG chart here
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        ratios: RatioSource,
    },
    /// Print inequality indices to 4 decimal places
    Gini {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Also print Atkinson indices for these aversion values
        #[arg(long, value_name = "EPS[,EPS...]", value_delimiter = ',')]
        atkinson: Vec<f64>,
        #[command(flatten)]
        ratios: RatioSource,
    },
    /// Evaluate two scenarios over the same region and print the deltas
    Compare {
        /// Baseline scenario JSON file
        baseline: PathBuf,
        /// Variant scenario JSON file
        variant: PathBuf,
    },
    /// Rank placements of additional facilities by resulting Gini
    Plan {
        /// Scenario JSON file
        scenario: PathBuf,
        /// JSON array of [x_km, y_km] candidate sites
        #[arg(long, value_name = "FILE")]
        candidates: PathBuf,
        /// How many facilities to add
        #[arg(long, value_name = "K")]
        add: usize,
        /// Search strategy
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
        /// Print only the best M placements
        #[arg(long, value_name = "M")]
        top: Option<usize>,
    },
}

#[derive(Args)]
struct RatioSource {
    /// JSON object mapping LGA name to an observed utilisation ratio,
    /// used instead of the scenario's own pipeline
    #[arg(long, value_name = "FILE")]
    observed_ratios: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Greedy,
}

// ---------------------------------------------------------------------------
// Error handling and exit codes
// ---------------------------------------------------------------------------

enum CliError {
    /// Unreadable or invalid input files (exit 2).
    Input(String),
    /// Model, inequality or planning failures, and output I/O (exit 3).
    Run(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Run(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Run(m) => f.write_str(m),
        }
    }
}

impl From<caccess::io::ParseError> for CliError {
    fn from(e: caccess::io::ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<caccess::model::ModelError> for CliError {
    fn from(e: caccess::model::ModelError) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<caccess::inequality::InequalityError> for CliError {
    fn from(e: caccess::inequality::InequalityError) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<caccess::planner::PlanError> for CliError {
    fn from(e: caccess::planner::PlanError) -> Self {
        CliError::Run(e.to_string())
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pager closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("caccess: error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { scenario, out } => run_simulate(&scenario, out.as_deref()),
        Command::Lorenz {
            scenario,
            csv,
            svg,
            ratios,
        } => run_lorenz(&scenario, csv.as_deref(), svg.as_deref(), &ratios),
        Command::Gini {
            scenario,
            atkinson,
            ratios,
        } => run_gini(&scenario, &atkinson, &ratios),
        Command::Compare { baseline, variant } => run_compare(&baseline, &variant),
        Command::Plan {
            scenario,
            candidates,
            add,
            strategy,
            top,
        } => run_plan(&scenario, &candidates, add, strategy, top),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run_simulate(scenario_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let scenario = load_scenario(scenario_path)?;
    let evaluation = evaluate_with_epsilons(&scenario, &[])?;
    let table = ResultsTable::new(
        &scenario,
        &evaluation.results,
        &evaluation.sorted,
        &evaluation.report.curve,
    );
    let csv = write_results_csv(&table);
    match out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())?;
            println!(
                "simulated {} ({} LGAs, gini {}); results -> {}",
                scenario.name,
                scenario.lgas.len(),
                fmt4(evaluation.report.gini),
                path.display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_lorenz(
    scenario_path: &Path,
    csv: Option<&Path>,
    svg: Option<&Path>,
    ratios: &RatioSource,
) -> Result<(), CliError> {
    let scenario = load_scenario(scenario_path)?;
    let (sorted, curve) = lorenz_inputs(&scenario, ratios)?;
    let coordinate_csv = write_lorenz_csv(&scenario, &sorted, &curve);
    let mut wrote_any = false;
    if let Some(path) = csv {
        write_atomic(path, coordinate_csv.as_bytes())?;
        println!("lorenz coordinates -> {}", path.display());
        wrote_any = true;
    }
    if let Some(path) = svg {
        let chart = render_lorenz_svg(&curve);
        write_atomic(path, chart.as_bytes())?;
        println!("lorenz chart -> {}", path.display());
        wrote_any = true;
    }
    if !wrote_any {
        print!("{coordinate_csv}");
    }
    Ok(())
}

fn run_gini(
    scenario_path: &Path,
    epsilons: &[f64],
    ratios: &RatioSource,
) -> Result<(), CliError> {
    let scenario = load_scenario(scenario_path)?;
    let (sorted, curve) = lorenz_inputs(&scenario, ratios)?;
    let gini_value = caccess::inequality::gini(&curve);
    println!("gini {}", emphasise(&fmt4(gini_value)));
    if !epsilons.is_empty() {
        let ratio_values: Vec<f64> = sorted.ratios().collect();
        for &epsilon in epsilons {
            let value = atkinson(&ratio_values, epsilon)?;
            println!("atkinson({epsilon}) {}", emphasise(&fmt4(value)));
        }
    }
    Ok(())
}

fn run_compare(baseline_path: &Path, variant_path: &Path) -> Result<(), CliError> {
    let baseline = load_scenario(baseline_path)?;
    let variant = load_scenario(variant_path)?;
    let comparison = compare(&baseline, &variant)?;
    let baseline_results = simulate_region(&baseline)?;
    println!("baseline gini {}", emphasise(&fmt4(comparison.baseline_report.gini)));
    println!("variant gini  {}", emphasise(&fmt4(comparison.variant_report.gini)));
    println!("delta gini    {}", emphasise(&fmt4_signed(comparison.delta_gini)));
    println!();
    println!("lga,baseline_t,variant_t,delta_t");
    for (result, &(index, delta)) in baseline_results.iter().zip(&comparison.delta_ratios) {
        let name = baseline
            .lgas
            .iter()
            .find(|l| l.index == index)
            .map(|l| l.name.as_str())
            .unwrap_or("?");
        println!(
            "{name},{},{},{}",
            fmt4(result.ratio),
            fmt4(result.ratio + delta),
            fmt4_signed(delta)
        );
    }
    Ok(())
}

fn run_plan(
    scenario_path: &Path,
    candidates_path: &Path,
    add: usize,
    strategy: StrategyArg,
    top: Option<usize>,
) -> Result<(), CliError> {
    let scenario = load_scenario(scenario_path)?;
    let candidates_text = read_input(candidates_path)?;
    let candidates = parse_candidate_sites(&candidates_text)?;
    let baseline = evaluate_with_epsilons(&scenario, &[])?.report.gini;
    let strategy = match strategy {
        StrategyArg::Exhaustive => PlanStrategy::Exhaustive,
        StrategyArg::Greedy => PlanStrategy::Greedy,
    };
    let ranked = plan_additional(&scenario, &candidates, add, strategy)?;
    println!("baseline gini {}", emphasise(&fmt4(baseline)));
    println!("rank,sites,gini,delta_gini");
    let shown = top.unwrap_or(ranked.len());
    for (i, result) in ranked.iter().take(shown).enumerate() {
        let sites: Vec<String> = result
            .placement
            .iter()
            .map(|l| format!("({}, {})", l.x_km, l.y_km))
            .collect();
        println!(
            "{},{},{},{}",
            i + 1,
            sites.join("; "),
            fmt4(result.gini),
            fmt4_signed(result.gini - baseline)
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = read_input(path)?;
    Ok(parse_scenario(&text)?)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Sorted ratios and curve, either simulated or taken from an overrides file.
fn lorenz_inputs(
    scenario: &Scenario,
    ratios: &RatioSource,
) -> Result<(SortedRatios, LorenzCurve), CliError> {
    let sorted = match &ratios.observed_ratios {
        Some(path) => {
            let text = read_input(path)?;
            let overrides = parse_ratio_overrides(&text)?;
            let pairs = ratio_pairs(scenario, &overrides)?;
            sort_ratios(pairs)
        }
        None => {
            let evaluation = evaluate_with_epsilons(scenario, &[])?;
            evaluation.sorted
        }
    };
    let curve = lorenz_curve(&sorted)?;
    Ok((sorted, curve))
}

/// Writes via a temporary file in the target directory plus a rename, so a
/// failed run never leaves a partial file behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let write = || -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&parent)?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    };
    write().map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display())))
}

fn fmt4(value: f64) -> String {
    format!("{value:.4}")
}

fn fmt4_signed(value: f64) -> String {
    format!("{value:+.4}")
}

/// Bolds a headline value on interactive terminals. `CACCESS_NO_COLOR`
/// forces plain text; piped output is always plain.
fn emphasise(text: &str) -> String {
    let styled = std::env::var_os("CACCESS_NO_COLOR").is_none() && std::io::stdout().is_terminal();
    if styled {
        format!("\x1b[1m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}
