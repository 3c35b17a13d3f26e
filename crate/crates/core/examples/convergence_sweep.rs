// A small error sweep of the hydrodynamic scheme against splitting
// references, written as CSV tables with fitted log-log slopes.

use apnls::harness::plotdata::{series, PlotMode};
use apnls::harness::{run_sweep, ExperimentConfig, ReferenceCache};
use apnls::Result;

pub struct Summary {
    pub csv: String,
    /// Fitted slope of `err_ρ` against `J`, per ε.
    pub slopes: Vec<(f64, f64)>,
}

pub fn run_example() -> Result<Summary> {
    let config: ExperimentConfig = "
        [sweep]
        epsilons = 0.1, 0.05
        points = 64, 128, 256
        times = 0.05
        [reference]
        points = 1024
    "
    .parse()?;
    let dir = std::env::temp_dir().join(format!("apnls-sweep-example-{}", std::process::id()));
    let cache = ReferenceCache::new(dir.join("cache"));
    let table = run_sweep(&config, Some(&cache), None)?;
    table.write(dir.join("tables"), &config)?;
    let slopes = series(&table.records, PlotMode::VsJ)
        .iter()
        .filter_map(|s| s.slope_rho.map(|k| (s.fixed, k)))
        .collect();
    let _ = std::fs::remove_dir_all(&dir);
    Ok(Summary {
        csv: table.to_csv(None),
        slopes,
    })
}

fn main() -> Result<()> {
    let s = run_example()?;
    print!("{}", s.csv);
    for (eps, k) in s.slopes {
        println!("eps={eps}: err_rho ~ J^{k:.2}");
    }
    Ok(())
}
