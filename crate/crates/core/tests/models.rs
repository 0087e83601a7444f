use specdiff::ddprec::disc_error;
use specdiff::errmodel::bound_ur;
use specdiff::experiment::{run_transition, ExperimentConfig, FunctionKind};
use specdiff::{fd_apply, fd_weights, ChebGrid, DiffBackend, TestFunction, UNIT_ROUNDOFF as U};

#[test]
fn measured_error_is_model_plus_rounding() {
    let f = TestFunction::sin_fixed();
    for m in 1..=4 {
        for n in 10..=26 {
            let grid = ChebGrid::new(n).unwrap();
            let samples = f.samples(grid.nodes());
            let fabs = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let ws = fd_weights(grid.as_grid(), m, 1.0).unwrap();
            let approx = fd_apply(&ws, &samples).unwrap();
            let exact = f.derivative(1.0, m).unwrap();
            let ud = disc_error(&f, &grid, m).unwrap().value;
            let ur = bound_ur(grid.as_grid(), m, 1.0, fabs, U).unwrap();
            let gap = ((exact - approx) - ud).abs();
            assert!(
                gap <= ur + 4.0 * U * exact.abs(),
                "m={m} n={n}: {gap:e} vs {ur:e}"
            );
        }
    }
}

#[test]
fn reported_errors_respect_bounds() {
    for m in 1..=4 {
        let cfg = ExperimentConfig {
            m,
            nmin: 8,
            nmax: 96,
            nstride: 4,
            ..Default::default()
        };
        let report = run_transition(&cfg).unwrap();
        for row in &report.rows {
            let (a, ur, ud) = (row.actual.unwrap(), row.ur.unwrap(), row.ud.unwrap());
            assert!(
                a <= ur + ud.abs() + 8.0 * U * a,
                "m={m} n={}: {a:e} > {ur:e} + {ud:e}",
                row.n
            );
            if ud.abs() > 100.0 * ur {
                assert!(
                    a >= ud.abs() / 50.0 && a <= 50.0 * ud.abs(),
                    "m={m} n={}",
                    row.n
                );
            }
        }
    }
}

#[test]
fn polynomial_has_rounding_level_error_only() {
    let report = run_transition(&ExperimentConfig {
        nmin: 4,
        nmax: 40,
        nstride: 6,
        ..Default::default()
    })
    .unwrap();
    assert!(!report.rows.is_empty());
    let f = TestFunction::Monomial(vec![0.0, 1.0]);
    for n in [4, 16, 64, 256] {
        let grid = ChebGrid::new(n).unwrap();
        let ws = fd_weights(grid.as_grid(), 1, 1.0).unwrap();
        let d = fd_apply(&ws, &f.samples(grid.nodes())).unwrap();
        assert!((d - 1.0).abs() <= bound_ur(grid.as_grid(), 1, 1.0, 1.0, U).unwrap());
        assert!(disc_error(&f, &grid, 1).unwrap().value.abs() < 1e-28);
    }
}

#[test]
fn scaled_sine_decays_geometrically() {
    let cfg = ExperimentConfig {
        function: FunctionKind::SinScaled { eta: 4.0 },
        nmin: 8,
        nmax: 40,
        nstride: 8,
        method: DiffBackend::Dct,
        ..Default::default()
    };
    let report = run_transition(&cfg).unwrap();
    let ud: Vec<f64> = report.rows.iter().map(|r| r.ud.unwrap().abs()).collect();
    assert!(ud.windows(2).all(|p| p[1] < p[0]), "{ud:?}");
    let ratio = (ud[ud.len() - 1] / ud[0]).powf(1.0 / 32.0);
    assert!(ratio < 0.95, "per-point decay {ratio}");
}
