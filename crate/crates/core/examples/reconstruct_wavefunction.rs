// Rebuild `u = a e^{iφ/ε}` from the hydrodynamic variables and compare
// `Re u` with the splitting solution, before and after the caustic.

use apnls::harness::studies::reconstruction_errors;
use apnls::harness::ExperimentConfig;
use apnls::observables::PhaseRule;
use apnls::Result;

pub struct Summary {
    /// `(rule, J, t, relative ℓ¹ error of Re u)`.
    pub rows: Vec<(PhaseRule, usize, f64, f64)>,
}

pub fn run_example() -> Result<Summary> {
    let eps = 0.02;
    let mut rows = Vec::new();
    for rule in [PhaseRule::LeftRectangle, PhaseRule::Trapezoid] {
        let config = ExperimentConfig {
            epsilons: vec![eps],
            times: vec![0.05, 0.13],
            reference_points: 1024,
            phase_rule: rule,
            ..ExperimentConfig::desk_1d()
        };
        for j in [128, 256] {
            for (t, err) in reconstruction_errors(&config, eps, j, None)? {
                rows.push((rule, j, t, err));
            }
        }
    }
    Ok(Summary { rows })
}

fn main() -> Result<()> {
    for (rule, j, t, err) in run_example()?.rows {
        println!("{rule:?} J={j} t={t}: {err:.3e}");
    }
    Ok(())
}
