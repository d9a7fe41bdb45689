//! Command-line driver.
//!
//! One JSON config document describes a run; flags override config
//! fields (flag beats file, file beats built-in default). Every
//! output file embeds the seed, a hash of the effective config, and
//! the package version, so any run can be reproduced from its own
//! header. Exit codes: 0 success, 1 hard verification failure,
//! 2 config error, 3 runtime abort.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aggregation::{
    normalize, simulate_panel_fdd, AggregationError, AlphaSource, Normalization, PanelSpec,
    TimeGrid,
};
use crate::mixing::{MixingLaw, PsiProfile};
use crate::processes::{Ar1Params, Inar1Params, ModelParams, ProcessError};
use crate::stats::{sweep_copies_first, sweep_time_first, SweepRow};
use crate::verify::{self, Budget, CriterionReport};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Mean-cap aborts are runtime failures; everything else wrong with a
/// panel description is a config problem.
fn map_agg_err(e: AggregationError) -> CliError {
    match e {
        AggregationError::Process(ProcessError::MeanOverflow { .. }) => {
            CliError::Runtime(format!("simulation aborted: {e}"))
        }
        other => CliError::Config(format!("invalid run description: {other}")),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "aggrlim",
    version,
    about = "Panel simulation and verification for randomized-coefficient processes",
    after_help = "Precedence: flag > config file > built-in default.\n\
                  Outputs land in --out (default aggrlim-out/); every file header\n\
                  records seed, config hash, and version."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file; missing fields take built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed (overrides config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (fallback: AGGRLIM_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, default_value = "aggrlim-out")]
    out: PathBuf,

    /// Monte Carlo effort: small is a smoke mode with doubled
    /// tolerances, large triples replicate counts.
    #[arg(long, global = true, default_value = "default")]
    budget: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate panel replicates and write raw plus normalized
    /// aggregates as CSV.
    SimulatePanel,
    /// Run a verification suite and write its summary JSON and
    /// per-check CSV.
    Verify {
        /// exact | mc | slope | tail | cf | all
        #[arg(long)]
        suite: String,
    },
    /// Run a convergence sweep and write its rows as CSV.
    Sweep {
        /// copies-first | time-first | both
        #[arg(long, default_value = "both")]
        regime: String,
    },
    /// Summarize existing outputs (never recomputes).
    Report,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileConfig {
    Named(String),
    Poly { poly: Vec<f64> },
    Grid { grid: GridProfile },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridProfile {
    pub nodes: Vec<(f64, f64)>,
    pub limit: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    Times { times: Vec<(u64, u64)> },
    Steps { steps: Vec<u64> },
}

/// Effective run description after merging defaults, file, and flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// "inar" (integer counts) or "ar" (continuous).
    pub model: String,
    pub lambda: f64,
    pub sigma2: f64,
    pub beta: f64,
    pub profile: ProfileConfig,
    pub n_copies: u64,
    pub time_scale: u64,
    pub grid: GridConfig,
    pub replicates: u64,
    pub seed: u64,
    pub blocks: usize,
    /// Frozen per-copy coefficients; omit to draw from the mixing law.
    pub alphas: Option<Vec<f64>>,
    /// Copies-first sweep: fixed copy count, growing time scales.
    pub sweep_n_copies: u64,
    pub sweep_time_scales: Vec<u64>,
    /// Time-first sweep: fixed time scale, growing copy counts.
    pub sweep_time_scale: u64,
    pub sweep_copy_counts: Vec<u64>,
    pub sweep_replicates: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: "inar".into(),
            lambda: 1.0,
            sigma2: 1.0,
            beta: 1.0,
            profile: ProfileConfig::Named("constant".into()),
            n_copies: 1_000,
            time_scale: 1_000,
            grid: GridConfig::Times { times: vec![(1, 2), (1, 1)] },
            replicates: 400,
            seed: verify::DEFAULT_SEED,
            blocks: 100,
            alphas: None,
            sweep_n_copies: 1_000,
            sweep_time_scales: vec![100, 1_000, 10_000],
            sweep_time_scale: 10_000,
            sweep_copy_counts: vec![100, 1_000, 10_000],
            sweep_replicates: 100,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let params = match self.model.as_str() {
            "inar" => ModelParams::Inar1(Inar1Params { lambda: self.lambda }),
            "ar" => ModelParams::Ar1(Ar1Params { sigma2: self.sigma2 }),
            other => return Err(config_err(format!("unknown model {other:?} (inar | ar)"))),
        };
        params.validate().map_err(|e| config_err(e.to_string()))?;
        Ok(params)
    }

    pub fn mixing_law(&self) -> Result<MixingLaw, CliError> {
        let profile = match &self.profile {
            ProfileConfig::Named(name) if name == "constant" => PsiProfile::Constant,
            ProfileConfig::Named(other) => {
                return Err(config_err(format!(
                    "unknown profile {other:?} (constant, or poly/grid objects)"
                )))
            }
            ProfileConfig::Poly { poly } => PsiProfile::Poly(poly.clone()),
            ProfileConfig::Grid { grid } => {
                PsiProfile::Grid { nodes: grid.nodes.clone(), limit: grid.limit }
            }
        };
        MixingLaw::new(profile, self.beta).map_err(|e| config_err(e.to_string()))
    }

    pub fn time_grid(&self) -> Result<TimeGrid, CliError> {
        let grid = match &self.grid {
            GridConfig::Times { times } => TimeGrid::Times(times.clone()),
            GridConfig::Steps { steps } => TimeGrid::Steps(steps.clone()),
        };
        grid.validate().map_err(map_agg_err)?;
        Ok(grid)
    }

    pub fn panel_spec(&self) -> Result<PanelSpec, CliError> {
        let alphas = match &self.alphas {
            Some(list) => AlphaSource::Fixed(list.clone()),
            None => AlphaSource::Mixing(self.mixing_law()?),
        };
        let spec = PanelSpec {
            params: self.params()?,
            alphas,
            n_copies: self.n_copies,
            time_scale: self.time_scale,
            grid: self.time_grid()?,
            seed: self.seed,
        };
        spec.validate().map_err(map_agg_err)?;
        Ok(spec)
    }

    /// Hex digest of the effective config, for output headers.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let hash = Sha256::digest(&bytes);
        hash.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| config_err(format!("bad config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn parse_budget(cli: &Cli) -> Result<Budget, CliError> {
    cli.budget.parse::<Budget>().map_err(config_err)
}

fn configure_threads(cli: &Cli) -> Result<(), CliError> {
    let from_env = std::env::var("AGGRLIM_THREADS").ok().map(|v| {
        v.parse::<usize>()
            .map_err(|_| config_err(format!("AGGRLIM_THREADS must be an integer, got {v:?}")))
    });
    let threads = match (cli.threads, from_env) {
        (Some(k), _) => Some(k),
        (None, Some(parsed)) => Some(parsed?),
        (None, None) => None,
    };
    if let Some(k) = threads {
        if k == 0 {
            return Err(config_err("thread count must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| config_err(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn file_header(cfg: &RunConfig) -> String {
    format!(
        "# aggrlim v{} seed={} config={}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.seed,
        cfg.digest()
    )
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match run_inner(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn run_inner(cli: &Cli) -> Result<i32, CliError> {
    configure_threads(cli)?;
    let cfg = load_config(cli)?;
    let budget = parse_budget(cli)?;
    match &cli.command {
        Command::SimulatePanel => cmd_simulate_panel(&cfg, &cli.out),
        Command::Verify { suite } => cmd_verify(&cfg, suite, budget, &cli.out),
        Command::Sweep { regime } => cmd_sweep(&cfg, regime, budget, &cli.out),
        Command::Report => cmd_report(&cli.out),
    }
}

fn cmd_simulate_panel(cfg: &RunConfig, out: &Path) -> Result<i32, CliError> {
    if cfg.replicates == 0 {
        return Err(config_err("replicates must be positive"));
    }
    let spec = cfg.panel_spec()?;
    let times = spec.grid.times(spec.time_scale);

    let mut csv = file_header(cfg);
    csv.push_str("replicate,t,raw,normalized_copies_first,normalized_time_first\n");
    for r in 0..cfg.replicates {
        let sample = simulate_panel_fdd(&spec, r).map_err(map_agg_err)?;
        // undefined normalizations (n < 2 or N < 2) are recorded as NaN
        let ncf = normalize(&sample, Normalization::CopiesFirst)
            .unwrap_or_else(|_| vec![f64::NAN; times.len()]);
        let ntf = normalize(&sample, Normalization::TimeFirst)
            .unwrap_or_else(|_| vec![f64::NAN; times.len()]);
        for (g, &t) in times.iter().enumerate() {
            csv.push_str(&format!(
                "{r},{t:.16e},{:.16e},{:.16e},{:.16e}\n",
                sample.values[g], ncf[g], ntf[g]
            ));
        }
    }
    ensure_out_dir(out)?;
    let path = out.join("panel.csv");
    write_file(&path, &csv)?;
    println!(
        "wrote {} ({} replicates x {} grid points)",
        path.display(),
        cfg.replicates,
        times.len()
    );
    Ok(0)
}

fn suite_reports(cfg: &RunConfig, suite: &str, budget: Budget) -> Result<Vec<CriterionReport>, CliError> {
    let seed = cfg.seed;
    Ok(match suite {
        "exact" => verify::exact_suite(),
        "mc" => verify::mc_suite(seed, budget),
        "slope" => verify::slope_suite(seed, budget),
        "tail" => verify::tail_suite(seed, budget),
        "cf" => verify::cf_suite(seed, budget),
        "all" => {
            let mut all = verify::exact_suite();
            all.extend(verify::mc_suite(seed, budget));
            all.extend(verify::slope_suite(seed, budget));
            all.extend(verify::tail_suite(seed, budget));
            all.extend(verify::cf_suite(seed, budget));
            all
        }
        other => {
            return Err(config_err(format!(
                "unknown suite {other:?} (exact | mc | slope | tail | cf | all)"
            )))
        }
    })
}

fn cmd_verify(cfg: &RunConfig, suite: &str, budget: Budget, out: &Path) -> Result<i32, CliError> {
    let reports = suite_reports(cfg, suite, budget)?;
    for report in &reports {
        println!("{}", report.line());
    }

    ensure_out_dir(out)?;
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    write_file(&out.join(format!("verify_{suite}.json")), &json)?;

    let mut csv = file_header(cfg);
    csv.push_str("criterion,check,reference,estimate,band_lo,band_hi,pass\n");
    for report in &reports {
        for c in &report.checks {
            csv.push_str(&format!(
                "{},\"{}\",{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                report.id, c.name, c.reference, c.estimate, c.band.0, c.band.1, c.pass
            ));
        }
    }
    write_file(&out.join(format!("verify_{suite}_checks.csv")), &csv)?;

    let hard_fail = reports.iter().any(|r| !r.soft && !r.pass);
    Ok(if hard_fail { 1 } else { 0 })
}

fn sweep_csv(cfg: &RunConfig, rows: &[SweepRow]) -> String {
    let mut csv = file_header(cfg);
    csv.push_str(
        "regime,n_copies,time_scale,replicates,seed,t_i,t_j,estimate,estimate_se,\
         exact_reference,limit_reference,max_rel_dev_exact,max_rel_dev_limit\n",
    );
    for row in rows {
        let d = row.times.len();
        for i in 0..d {
            for j in i..d {
                csv.push_str(&format!(
                    "{},{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    row.regime,
                    row.n_copies,
                    row.time_scale,
                    row.replicates,
                    row.seed,
                    row.times[i],
                    row.times[j],
                    row.estimate[i][j],
                    row.estimate_se[i][j],
                    row.exact_reference[i][j],
                    row.limit_reference[i][j],
                    row.max_rel_dev_exact,
                    row.max_rel_dev_limit,
                ));
            }
        }
    }
    csv
}

fn cmd_sweep(cfg: &RunConfig, regime: &str, budget: Budget, out: &Path) -> Result<i32, CliError> {
    let params = cfg.params()?;
    let law = cfg.mixing_law()?;
    let grid = cfg.time_grid()?;
    let replicates = budget.replicates(cfg.sweep_replicates);

    let mut rows = Vec::new();
    if regime == "copies-first" || regime == "both" {
        rows.extend(
            sweep_copies_first(
                &params,
                &law,
                cfg.sweep_n_copies,
                &cfg.sweep_time_scales,
                &grid,
                replicates,
                cfg.seed,
                cfg.blocks.min(replicates as usize / 2).max(2),
            )
            .map_err(map_agg_err)?,
        );
    }
    if regime == "time-first" || regime == "both" {
        rows.extend(
            sweep_time_first(
                &params,
                &law,
                &cfg.sweep_copy_counts,
                cfg.sweep_time_scale,
                &grid,
                replicates,
                cfg.seed,
                cfg.blocks.min(replicates as usize / 2).max(2),
            )
            .map_err(map_agg_err)?,
        );
    }
    if rows.is_empty() {
        return Err(config_err(format!(
            "unknown regime {regime:?} (copies-first | time-first | both)"
        )));
    }

    for row in &rows {
        println!(
            "{} N={} n={} R={}: max dev vs exact {:.3}, vs limit {:.3}",
            row.regime,
            row.n_copies,
            row.time_scale,
            row.replicates,
            row.max_rel_dev_exact,
            row.max_rel_dev_limit
        );
    }
    ensure_out_dir(out)?;
    let name = format!("sweep_{}.csv", regime.replace('-', "_"));
    write_file(&out.join(name), &sweep_csv(cfg, &rows))?;
    Ok(0)
}

/// Minimal CSV reader for our own files: skips '#' comments, returns
/// the header and data cells.
fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| config_err(format!("{} has no header", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    Ok((header, rows))
}

fn cmd_report(out: &Path) -> Result<i32, CliError> {
    let entries = match fs::read_dir(out) {
        Ok(iter) => iter.filter_map(Result::ok).map(|e| e.path()).collect::<Vec<_>>(),
        Err(_) => return Err(config_err(format!("no output directory {}", out.display()))),
    };
    let mut found = false;

    let mut names: Vec<&PathBuf> = entries.iter().collect();
    names.sort();
    for path in names {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("verify_") && name.ends_with(".json") {
            found = true;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            let reports: Vec<CriterionReport> = serde_json::from_str(&text)
                .map_err(|e| config_err(format!("bad report {}: {e}", path.display())))?;
            println!("== {name}");
            for r in &reports {
                println!("{}", r.line());
            }
        } else if name.starts_with("sweep_") && name.ends_with(".csv") {
            found = true;
            let (_, rows) = read_csv(path)?;
            println!("== {name}");
            let mut plot = String::from("t,empirical,exact_reference,limit_reference\n");
            for cells in &rows {
                // columns: regime,N,n,R,seed,t_i,t_j,est,se,exact,limit,...
                if cells.len() >= 11 && cells[5] == cells[6] {
                    plot.push_str(&format!(
                        "{},{},{},{}\n",
                        cells[5], cells[7], cells[9], cells[10]
                    ));
                    println!(
                        "  {} N={} n={} t={}: estimate {} (exact {}, limit {})",
                        cells[0], cells[1], cells[2], cells[5], cells[7], cells[9], cells[10]
                    );
                }
            }
            write_file(&out.join("report_plot.csv"), &plot)?;
            println!("  plot data: {}", out.join("report_plot.csv").display());
        } else if name == "panel.csv" {
            found = true;
            let (_, rows) = read_csv(path)?;
            println!("== panel.csv: {} rows", rows.len());
        }
    }

    if !found {
        return Err(config_err(format!("no outputs found in {}", out.display())));
    }
    Ok(0)
}
