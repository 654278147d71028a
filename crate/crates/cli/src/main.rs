use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dgetc_core::algorithms::dg_repeated;
use dgetc_core::harness::{run_experiment, sweep, ExperimentConfig, RunOptions, SweepGrid};
use dgetc_core::setfn::{
    brute_force_optimum, check_lemma3, check_submodular, compute_hardness, validate_range, zone_hardness,
    MAX_BRUTE_FORCE_ITEMS,
};
use dgetc_core::{FunctionDescriptor, RngStream, SetFunction};

/// Online submodular maximization experiments.
#[derive(Parser)]
#[command(name = "dgetc", version)]
struct Cli {
    /// Base seed; overrides the config's.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Maximum concurrent replications.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Do not write per-round trace files.
    #[arg(long, global = true)]
    no_trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the replications of one experiment config.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a config field, e.g. `--set noise.sigma=0.2`.
        #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_override)]
        overrides: Vec<(String, String)>,
    },
    /// Run every cell of a sweep grid.
    Sweep {
        grid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-item DG-hardness, DG-gaps and zone thresholds.
    Hardness(FunctionArgs),
    /// Best of repeated offline double-greedy runs.
    Solve {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
    },
    /// Submodularity, range and marginal-sum checks.
    Check(FunctionArgs),
}

#[derive(Args)]
struct FunctionArgs {
    /// Function descriptor file, or an experiment config with a `[function]` table.
    #[arg(long, conflicts_with = "xi", required_unless_present = "xi")]
    function: Option<PathBuf>,
    /// Weights of the power-sum family, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0, requires = "xi")]
    nu: f64,
}

impl FunctionArgs {
    fn descriptor(&self) -> Result<FunctionDescriptor> {
        if let Some(xi) = &self.xi {
            return Ok(FunctionDescriptor::example(xi.clone(), self.nu));
        }
        let path = self.function.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        if let Ok(d) = FunctionDescriptor::from_toml_str(&text) {
            return Ok(d);
        }
        let table: toml::Table = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        match table.get("function") {
            Some(v) => Ok(v.clone().try_into().with_context(|| format!("[function] in {}", path.display()))?),
            None => bail!("{} holds neither a function descriptor nor a [function] table", path.display()),
        }
    }
}

fn parse_override(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected KEY=VALUE, got {s:?}")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Returns `false` when a check failed.
fn execute(cli: &Cli) -> Result<bool> {
    let opts = |out: &Option<PathBuf>| RunOptions {
        out_dir: out.clone(),
        no_trace: cli.no_trace,
        jobs: cli.jobs,
    };
    let mut stdout = std::io::stdout().lock();
    match &cli.command {
        Command::Run { config, out, overrides } => {
            let mut overrides = overrides.clone();
            if let Some(seed) = cli.seed {
                overrides.push(("seed".into(), seed.to_string()));
            }
            let cfg = ExperimentConfig::load(config, &overrides)?;
            let s = run_experiment(&cfg, &opts(out))?;
            let a = &s.aggregates;
            writeln!(stdout, "algorithm {}", cfg.algorithm.as_str())?;
            writeln!(stdout, "optimum {}", s.optimum)?;
            writeln!(stdout, "replications {}", a.replications)?;
            writeln!(stdout, "mean_regret {} (stderr {})", a.mean_regret, a.stderr_regret)?;
            writeln!(stdout, "median_regret {}", a.median)?;
            writeln!(stdout, "mean_exploration {}", a.mean_exploration)?;
            writeln!(stdout, "truncated {}", a.truncated)?;
        }
        Command::Sweep { grid, out } => {
            let mut grid = SweepGrid::load(grid)?;
            if let (Some(seed), Some(base)) = (cli.seed, grid.base.as_table_mut()) {
                base.insert("seed".into(), toml::Value::Integer(seed as i64));
            }
            let table = sweep(&grid, &opts(out))?;
            writeln!(stdout, "cell,label,mean_regret,stderr_regret,mean_exploration")?;
            for (n, label, a) in &table.cells {
                writeln!(
                    stdout,
                    "{n},{label},{},{},{}",
                    a.mean_regret, a.stderr_regret, a.mean_exploration
                )?;
            }
            let failed: Vec<_> = table.rows.iter().filter(|r| r.error.is_some()).collect();
            for r in &failed {
                eprintln!("cell {} ({}) failed: {}", r.cell, r.label, r.error.as_deref().unwrap_or_default());
            }
            return Ok(failed.is_empty());
        }
        Command::Hardness(args) => {
            let f = args.descriptor()?.build()?;
            let report = compute_hardness(f.as_ref())?;
            let zones = zone_hardness(f.as_ref())?;
            writeln!(stdout, "item,h,gap,zone")?;
            for (i, ((h, gap), z)) in report.per_item.iter().zip(&report.gaps).zip(&zones).enumerate() {
                writeln!(stdout, "{i},{h},{gap},{z}")?;
            }
            writeln!(stdout, "global,{}", report.global)?;
        }
        Command::Solve { function, repeats } => {
            let f = function.descriptor()?.build()?;
            let stream = RngStream::new(cli.seed.unwrap_or(0), 0);
            let (set, value) = dg_repeated(f.as_ref(), *repeats, stream)?;
            writeln!(stdout, "set {set}")?;
            writeln!(stdout, "value {value}")?;
            if f.num_items() <= MAX_BRUTE_FORCE_ITEMS {
                let (_, opt) = brute_force_optimum(f.as_ref())?;
                writeln!(stdout, "optimum {opt}")?;
                if opt > 0.0 {
                    writeln!(stdout, "ratio {}", value / opt)?;
                }
            }
        }
        Command::Check(args) => {
            let f = args.descriptor()?.build()?;
            let results = [
                ("submodular", check_submodular(f.as_ref())?),
                ("range", validate_range(f.as_ref()).is_ok()),
                ("lemma3", check_lemma3(f.as_ref())?),
            ];
            for (name, ok) in results {
                writeln!(stdout, "{name}: {}", if ok { "pass" } else { "fail" })?;
            }
            return Ok(results.iter().all(|(_, ok)| *ok));
        }
    }
    Ok(true)
}
