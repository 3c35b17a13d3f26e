// Experiment files round-trip through text, and reference solutions are
// reused from the on-disk cache on the second request.

use std::time::Instant;

use apnls::harness::sweep::nls_reference;
use apnls::harness::{ExperimentConfig, ReferenceCache};
use apnls::Result;

pub struct Summary {
    pub text: String,
    pub round_trips: bool,
    pub second_from_cache: bool,
    pub first_s: f64,
    pub second_s: f64,
}

pub fn run_example() -> Result<Summary> {
    let config = ExperimentConfig {
        epsilons: vec![0.05],
        points: vec![64, 128],
        times: vec![0.02, 0.05],
        reference_points: 512,
        ..ExperimentConfig::desk_1d()
    };
    let text = config.to_string();
    let round_trips = text.parse::<ExperimentConfig>()? == config;

    let dir = std::env::temp_dir().join(format!("apnls-cache-example-{}", std::process::id()));
    let cache = ReferenceCache::new(&dir);
    let t0 = Instant::now();
    let (first, _) = nls_reference(&config, 0.05, Some(&cache))?;
    let first_s = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let (second, cached) = nls_reference(&config, 0.05, Some(&cache))?;
    let second_s = t1.elapsed().as_secs_f64();
    let _ = std::fs::remove_dir_all(&dir);
    Ok(Summary {
        text,
        round_trips,
        second_from_cache: cached && first == second,
        first_s,
        second_s,
    })
}

fn main() -> Result<()> {
    let s = run_example()?;
    print!("{}", s.text);
    println!("\nround trip: {}", s.round_trips);
    println!(
        "reference: computed in {:.3}s, reloaded in {:.3}s (cache hit: {})",
        s.first_s, s.second_s, s.second_from_cache
    );
    Ok(())
}
