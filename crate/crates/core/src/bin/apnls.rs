use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use apnls::harness::plotdata::{emit_plotdata, PlotMode};
use apnls::harness::selftest::run_selftest;
use apnls::harness::studies::{eikonal_verify, reconstruct_run, reconstruction_errors};
use apnls::harness::sweep::{nls_reference, run_sweep, SweepTable};
use apnls::harness::{run_and_write, Equation, ExperimentConfig, ReferenceCache};
use apnls::snapshot::Snapshot;
use apnls::{Error, Result};

#[derive(Parser)]
#[command(name = "apnls", version, about = "Asymptotic-preserving semiclassical NLS experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment file; the 1D desk sweep when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads for sweeps (all cores by default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the randomized self-test inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every (epsilon, J) cell and write snapshots.
    Run,
    /// Build and cache the reference solutions.
    Reference,
    /// Error tables against the references, one CSV per output time.
    Sweep,
    /// Log-log series with fitted slopes from existing tables.
    Plotdata {
        #[arg(long, value_parser = ["vs-J", "vs-eps"])]
        mode: Option<String>,
    },
    /// Phase accumulation and u = a exp(i phi / eps) output.
    Reconstruct,
    /// Viscous eikonal solver against the Cole-Hopf solution.
    EikonalVerify {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        points: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        viscosity: f64,
        #[arg(long, default_value_t = 0.1)]
        time: f64,
    },
    /// Fast invariant checks.
    Selftest,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::desk_1d(),
    };
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    if let Some(cache) = &cli.cache {
        config.cache_dir = cache.clone();
    }
    Ok(config)
}

fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Run => {
            let config = load_config(cli)?;
            for &eps in &config.epsilons {
                for &j in &config.points {
                    let s = run_and_write(&config, eps, j, &config.out_dir)?;
                    println!("eps={eps} J={j} steps={} files={}", s.steps, s.files.len());
                }
            }
        }
        Command::Reference => {
            let config = load_config(cli)?;
            if config.equation == Equation::Eikonal {
                return Err(Error::Config("the eikonal equation uses its closed-form oracle".into()));
            }
            let cache = ReferenceCache::new(&config.cache_dir);
            for &eps in &config.epsilons {
                let (snaps, cached) = nls_reference(&config, eps, Some(&cache))?;
                println!(
                    "eps={eps} J_ref={} snapshots={} {}",
                    config.reference_points,
                    snaps.len(),
                    if cached { "cached" } else { "computed" }
                );
            }
        }
        Command::Sweep => {
            let config = load_config(cli)?;
            let cache = ReferenceCache::new(&config.cache_dir);
            let table = run_sweep(&config, Some(&cache), cli.threads)?;
            for path in table.write(&config.out_dir, &config)? {
                println!("wrote {}", path.display());
            }
            let failed = table.records.iter().filter(|r| !r.status.is_ok()).count();
            if failed > 0 {
                eprintln!("{failed} rows did not complete; see the status column");
            }
        }
        Command::Plotdata { mode } => {
            let config = load_config(cli)?;
            let table = SweepTable::read_dir(&config.out_dir)?;
            let modes = match mode {
                Some(m) => vec![m.parse::<PlotMode>()?],
                None => vec![PlotMode::VsJ, PlotMode::VsEps],
            };
            for m in modes {
                for path in emit_plotdata(&table.records, m, config.out_dir.join("plotdata"))? {
                    println!("wrote {}", path.display());
                }
            }
        }
        Command::Reconstruct => {
            let config = load_config(cli)?;
            std::fs::create_dir_all(&config.out_dir)?;
            let cache = ReferenceCache::new(&config.cache_dir);
            for &eps in &config.epsilons {
                for &j in &config.points {
                    for (t, u) in reconstruct_run(&config, eps, j)? {
                        let path = config.out_dir.join(format!("u-eps{eps}-J{j}-t{t}.dat"));
                        Snapshot::from_complex(&u, eps, t).write(&path)?;
                        println!("wrote {}", path.display());
                    }
                    match reconstruction_errors(&config, eps, j, Some(&cache)) {
                        Ok(errs) => {
                            for (t, e) in errs {
                                println!("eps={eps} J={j} t={t} rel_l1(Re u)={e:.4e}");
                            }
                        }
                        Err(e) => eprintln!("eps={eps} J={j}: no reference comparison ({e})"),
                    }
                }
            }
        }
        Command::EikonalVerify { points, viscosity, time } => {
            let rows = eikonal_verify(points, *viscosity, *time, 0.1)?;
            let mut csv = String::from("J,rel_linf_error,order\n");
            println!("{:>6} {:>12} {:>7}", "J", "error", "order");
            for r in &rows {
                let order = r.order.map(|o| format!("{o:.3}")).unwrap_or_default();
                println!("{:>6} {:>12.4e} {:>7}", r.points, r.error, order);
                csv.push_str(&format!("{},{:.10e},{order}\n", r.points, r.error));
            }
            if let Some(out) = &cli.out {
                std::fs::create_dir_all(out)?;
                std::fs::write(out.join("eikonal-order.csv"), csv)?;
            }
        }
        Command::Selftest => {
            let checks = run_selftest(cli.seed)?;
            for c in &checks {
                println!("{c}");
            }
            return Ok(checks.iter().all(|c| c.passed()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_blow_up() { 1 } else { 2 })
        }
    }
}
