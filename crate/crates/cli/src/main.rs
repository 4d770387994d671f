use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use kinhy::config::{Preset, ScenarioConfig, ScenarioId, SolverMode};
use kinhy::convergence::{halving_sequence, run_convergence_study, ConvergenceRow};
use kinhy::imex::{ars233, check_order_conditions};
use kinhy::output::{run_and_write, write_convergence, RunManifest};
use kinhy::Simulation64;

#[derive(Parser, Debug)]
#[command(name = "kinhy", version, about = "Hybrid ES-BGK / Euler solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario and write snapshots, statistics and a manifest.
    Run {
        /// TOML config file, or a built-in scenario id
        config: String,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cell whose velocity slice is dumped with every snapshot
        #[arg(long, value_parser = parse_probe)]
        probe: Vec<[usize; 2]>,
        /// Preset used when `config` is a scenario id
        #[arg(long, default_value = "paper")]
        preset: String,
    },
    /// Temporal convergence study by step halving.
    Convergence {
        config: String,
        /// Comma-separated decreasing time steps
        #[arg(long, value_delimiter = ',')]
        dts: Option<Vec<f64>>,
        /// Comma-separated solver modes
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<String>>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "paper")]
        preset: String,
    },
    /// List the built-in scenarios.
    Scenarios,
    /// Check the IMEX order conditions of the ARS(2,3,3) pair.
    CheckTableau {
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
}

fn parse_probe(s: &str) -> std::result::Result<[usize; 2], String> {
    let (i, j) = s.split_once(',').ok_or_else(|| format!("expected i,j, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok([p(i)?, p(j)?])
}

fn load_config(arg: &str, preset: &str) -> Result<ScenarioConfig> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(ScenarioConfig::parse(&text)?);
    }
    let preset = match preset {
        "paper" => Preset::Paper,
        "desk" => Preset::Desk,
        other => bail!("unknown preset `{other}` (expected paper or desk)"),
    };
    match ScenarioId::parse(arg) {
        Ok(id) => Ok(ScenarioConfig::preset(id, preset)),
        Err(_) => bail!("`{arg}` is neither a config file nor a built-in scenario"),
    }
}

fn workers(threads: Option<usize>) -> Result<usize> {
    if let Some(n) = threads {
        return Ok(n);
    }
    match std::env::var("KINHY_THREADS") {
        Ok(v) => v.trim().parse().with_context(|| format!("KINHY_THREADS = `{v}`")),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn with_pool<R: Send>(n: usize, job: impl FnOnce() -> R + Send) -> Result<R> {
    if n == 0 {
        bail!("--threads must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
    Ok(pool.install(job))
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { config, mode, threads, out, probe, preset } => {
            let mut cfg = load_config(&config, &preset)?;
            if let Some(m) = mode {
                cfg.mode = SolverMode::parse(&m)?;
            }
            cfg.output.probes.extend(probe);
            if let Some(o) = &out {
                cfg.output.dir = o.to_string_lossy().into_owned();
            }
            cfg.validate()?;
            let n = workers(threads)?;
            let dir = PathBuf::from(&cfg.output.dir);
            let manifest = with_pool(n, || -> kinhy::Result<RunManifest> {
                let mut sim = Simulation64::new(cfg)?;
                run_and_write(&mut sim, &dir, n)
            })??;
            println!(
                "{} steps to t = {:.6}, {} files in {}",
                manifest.steps,
                manifest.final_time,
                manifest.outputs.len() + 1,
                dir.display()
            );
        }
        Command::Convergence { config, dts, modes, threads, out, preset } => {
            let cfg = load_config(&config, &preset)?;
            let dts = dts.unwrap_or_else(|| halving_sequence(cfg.time.t_end / 64.0, 4));
            let modes = match modes {
                Some(ms) => ms.iter().map(|m| SolverMode::parse(m)).collect::<kinhy::Result<Vec<_>>>()?,
                None => vec![cfg.mode],
            };
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
            fs::create_dir_all(&dir)?;
            let n = workers(threads)?;
            let mut rows: Vec<ConvergenceRow> = Vec::new();
            for mode in modes {
                let c = cfg.clone().with_mode(mode);
                let r = with_pool(n, || run_convergence_study::<f64>(&c, &dts))??;
                for row in &r {
                    println!(
                        "{:<12} dt = {:.6e}  err = {:>13}  order = {}",
                        row.mode.as_str(),
                        row.dt,
                        row.err.map(|e| format!("{e:.6e}")).unwrap_or_default(),
                        row.order.map(|o| format!("{o:.3}")).unwrap_or_default()
                    );
                }
                rows.extend(r);
            }
            write_convergence(&rows, &dir.join("convergence.csv"))?;
            let mut manifest = RunManifest::new(&cfg, n);
            manifest.outputs.push("convergence.csv".into());
            manifest.write(&dir.join("manifest.json"))?;
        }
        Command::Scenarios => {
            println!(
                "{:<18} {:>9} {:>9} {:>4} {:>5} {:>5} {:>6} {:>9}",
                "id", "paper", "desk", "Nv", "vmax", "cfl", "t_end", "eta/eps"
            );
            for id in ScenarioId::ALL {
                let p = ScenarioConfig::preset(id, Preset::Paper);
                let d = ScenarioConfig::preset(id, Preset::Desk);
                println!(
                    "{:<18} {:>9} {:>9} {:>4} {:>5} {:>5} {:>6} {:>9}",
                    id.as_str(),
                    format!("{}x{}", p.grid.nx, p.grid.ny),
                    format!("{}x{}", d.grid.nx, d.grid.ny),
                    p.velocity.nv,
                    p.velocity.vmax,
                    p.time.cfl,
                    p.time.t_end,
                    ScenarioConfig::eta_factor(id)
                );
            }
        }
        Command::CheckTableau { order } => {
            let pair = ars233();
            let report = check_order_conditions(&pair, order)?;
            for c in &report.conditions {
                let mark = if c.residual.abs() < report.tolerance { "ok" } else { "FAIL" };
                println!("order {}  {:<22} residual {:+.3e}  {mark}", c.order, c.description, c.residual);
            }
            println!(
                "{}: {} conditions, max residual {:.3e}",
                pair.name,
                report.conditions.len(),
                report.max_residual()
            );
            if !report.passed() {
                bail!("order conditions violated");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
