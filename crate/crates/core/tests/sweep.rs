use num_complex::Complex64;
use ptspec_core::sweep::{compose, eps_grid, sweep_circle, sweep_real, SolverConfig, SweepResult};

fn conjugation_closed(res: &SweepResult) -> bool {
    (0..res.eps_grid.len()).all(|i| {
        let vals: Vec<Complex64> = res.trajectories.iter().filter_map(|t| t.values[i]).collect();
        vals.iter()
            .all(|z| vals.iter().any(|w| (w - z.conj()).norm() <= 1e-6 * (1.0 + z.norm())))
    })
}

#[test]
fn last_merge_above_minus_one() {
    let cfg = SolverConfig::default();
    let coarse = sweep_real(-0.62, -0.54, 0.01, &cfg).unwrap();
    assert!(coarse.failures.is_empty(), "{:?}", coarse.failures);
    assert_eq!(coarse.merges.len(), 1, "{:?}", coarse.merges);
    let m = coarse.merges[0];
    assert!((m.eps.re + 0.57793).abs() < 1e-3, "{}", m.eps);
    assert!(m.e.re > 3.0 && m.e.re < 4.5, "{}", m.e);
    assert!(conjugation_closed(&coarse));

    let fine = sweep_real(-0.62, -0.54, 0.005, &cfg).unwrap();
    assert_eq!(fine.merges.len(), 1);
    assert!((fine.merges[0].eps.re - m.eps.re).abs() <= 1e-4);
}

#[test]
fn unbroken_region_has_no_merges() {
    let cfg = SolverConfig::default();
    let res = sweep_real(0.0, 0.5, 0.05, &cfg).unwrap();
    assert!(res.merges.is_empty());
    assert!(res.failures.is_empty());
    // every level is real and followed across the whole grid
    let full: Vec<_> = res
        .trajectories
        .iter()
        .filter(|t| t.values.iter().all(|v| v.is_some_and(|z| z.im == 0.0)))
        .collect();
    assert!(full.len() >= 4, "{}", full.len());
    for t in full {
        let re: Vec<f64> = t.values.iter().map(|v| v.unwrap().re).collect();
        assert!(re.windows(2).all(|w| w[1] > w[0]), "{re:?}");
    }
}

#[test]
fn degenerate_circle_is_trivial() {
    let cfg = SolverConfig {
        n_interior: 600,
        ..SolverConfig::default()
    };
    let res = sweep_circle(Complex64::new(-1.0, 0.0), 0.0, 64, false, &cfg).unwrap();
    assert_eq!(res.eps_grid.len(), 65);
    assert!(res.eps_grid.iter().all(|e| *e == Complex64::new(-1.0, 0.0)));
    let mono = res.monodromy.unwrap();
    assert!(mono.iter().enumerate().all(|(i, m)| *m == Some(i)), "{mono:?}");
    assert_eq!(compose(&mono, &mono), mono);
}

#[test]
fn grid_spacing_limits() {
    let g = eps_grid(-2.1, -1.9, 0.01).unwrap();
    let near: Vec<f64> = g.windows(2).filter(|w| (w[0] + 2.0).abs() < 0.05).map(|w| w[1] - w[0]).collect();
    assert!(near.iter().all(|h| *h <= 0.001 + 1e-12));
}
