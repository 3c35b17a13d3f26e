//! Every example runs and reports what it claims.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(semiclassical_1d);
example!(splitting_reference);
example!(convergence_sweep);
example!(reconstruct_wavefunction);
example!(eikonal_cole_hopf);
example!(general_nonlinearity);
example!(two_dimensional);
example!(euler_limit);
example!(config_and_cache);

#[test]
fn semiclassical_1d_runs() {
    let s = semiclassical_1d::run_example().unwrap();
    assert_eq!(s.rows.len(), 4);
    for (eps, steps, mid, peak) in &s.rows {
        assert!(*steps > 0 && mid.is_finite() && *peak >= *mid, "eps {eps}");
        // the focusing velocity field compresses the bump
        assert!(*peak > 1.0, "eps {eps}: {peak}");
    }
}

#[test]
fn splitting_reference_conserves_mass() {
    let s = splitting_reference::run_example().unwrap();
    assert!(s.mass_drift < 1e-12, "{}", s.mass_drift);
    let order = (s.energy[1].1 / s.energy[2].1).log2();
    assert!(order > 1.7, "energy drift order {order}");
}

#[test]
fn convergence_sweep_shows_second_order() {
    let s = convergence_sweep::run_example().unwrap();
    assert_eq!(s.csv.lines().count(), 7);
    for (eps, k) in s.slopes {
        assert!((-2.4..-1.6).contains(&k), "eps {eps}: slope {k}");
    }
}

#[test]
fn reconstruct_wavefunction_is_close() {
    let s = reconstruct_wavefunction::run_example().unwrap();
    assert_eq!(s.rows.len(), 8);
    for (rule, j, t, err) in &s.rows {
        assert!(*err < 0.5, "{rule:?} J={j} t={t}: {err}");
    }
}

#[test]
fn eikonal_cole_hopf_converges() {
    let s = eikonal_cole_hopf::run_example().unwrap();
    let last = s.orders.last().unwrap().2.unwrap();
    assert!((1.7..2.3).contains(&last), "{last}");
    assert!((s.mass_after - s.mass_before).abs() < 1e-2 * s.mass_before);
}

#[test]
fn general_nonlinearity_closure_matches_cubic() {
    let s = general_nonlinearity::run_example().unwrap();
    assert!(s.cubic_matches_closure);
    assert_eq!(s.peaks.len(), 4);
}

#[test]
fn two_dimensional_is_symmetric() {
    let s = two_dimensional::run_example().unwrap();
    assert!(s.midline_gap < 1e-10, "{}", s.midline_gap);
    assert!(s.peak_rho.is_finite() && s.steps > 0);
    assert!(s.curl.1 <= s.curl.0);
}

#[test]
fn euler_limit_gap_shrinks() {
    let s = euler_limit::run_example().unwrap();
    for w in s.gaps.windows(2) {
        assert!(w[1].1 < w[0].1);
    }
}

#[test]
fn config_and_cache_reuses_references() {
    let s = config_and_cache::run_example().unwrap();
    assert!(s.round_trips);
    assert!(s.second_from_cache);
}
