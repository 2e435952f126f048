use stirl_interp::coeff::row_product;
use stirl_interp::grid::{product_grid, Execution};
use stirl_interp::limits::{clt_check, kolmogorov_distance, llt_check, local_ratio_deviation};
use stirl_interp::moments::{mu, sigma2};
use stirl_interp::modes::{darroch_check, darroch_grid, taylor_mu_check};
use stirl_interp::{grid, Error, ScaleParam};

#[test]
fn kolmogorov_distance_shrinks_with_n() {
    for s in [0.0, 0.5, 1.0] {
        let small = clt_check(100, s).unwrap().sup_distance;
        let large = clt_check(4000, s).unwrap().sup_distance;
        assert!(large < small, "s = {s}: {large} !< {small}");
    }
}

#[test]
fn certificates_hold_on_a_dense_grid() {
    let ss: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let points = product_grid(&[2, 3, 5, 17, 64, 300, 1200], &ss);
    let reports = grid::try_map(&points, Execution::default(), |&(n, s)| clt_check(n, s)).unwrap();
    for r in reports {
        assert!(r.passed, "{r:?}");
        assert!(r.sup_distance <= r.coarse_bound);
    }
}

// At s = 1 sigma grows like sqrt(ln n) and the set of lattice points inside
// mu +- 2 sigma shifts, so the window deviation is only compared end to end.
#[test]
fn uniform_window_ratio_tightens() {
    for s in [0.0, 0.5, 1.0] {
        let deltas: Vec<f64> = [100, 400, 1600]
            .iter()
            .map(|&n| {
                let row = row_product(n, ScaleParam::new(s).unwrap()).unwrap();
                local_ratio_deviation(&row, mu(n, s), sigma2(n, s).sqrt(), 2.0)
            })
            .collect();
        if s < 1.0 {
            assert!(deltas.windows(2).all(|w| w[1] < w[0]), "s = {s}: {deltas:?}");
        } else {
            assert!(deltas[2] < deltas[0] && deltas.iter().all(|&d| d < 0.2), "{deltas:?}");
        }
    }
}

#[test]
fn local_limit_constant_is_stable_per_s() {
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let ks: Vec<f64> = [100, 400, 1600].iter().map(|&n| llt_check(n, s).unwrap().empirical_k).collect();
        let spread = ks.iter().cloned().fold(0.0, f64::max) / ks.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread <= 10.0, "s = {s}: {ks:?}");
    }
}

#[test]
fn negative_and_large_s_rows_are_well_behaved() {
    // s > 1 keeps sigma bounded; only well-definedness is checked
    for s in [-1.0, 1.5, 3.0] {
        let r = llt_check(500, s).unwrap();
        assert!(r.max_dev.is_finite() && r.max_dev >= 0.0);
        let row = row_product(500, ScaleParam::new(s).unwrap()).unwrap();
        let d = kolmogorov_distance(&row, mu(500, s), sigma2(500, s).sqrt()).unwrap();
        assert!((0.0..=1.0).contains(&d));
    }
}

#[test]
fn darroch_holds_sequentially_and_in_parallel() {
    let ss: Vec<f64> = (0..25).map(|i| -2.0 + i as f64 * 0.2).collect();
    let points = product_grid(&[1, 2, 8, 40, 250], &ss);
    let seq = grid::map(&points, Execution::Sequential, |&(n, s)| darroch_check(n, s));
    let par = grid::map(&points, Execution::Parallel, |&(n, s)| darroch_check(n, s));
    assert_eq!(seq, par);
    // near-plateaux that floats cannot split are refused, never misreported
    for r in &seq {
        assert!(matches!(r, Ok(m) if m.darroch_ok) || matches!(r, Err(Error::AmbiguousModes(_))));
    }
    assert!(seq.iter().filter(|r| r.is_ok()).count() >= points.len() - 4);
    let shifted: Vec<(usize, f64)> = points.iter().map(|&(n, s)| (n, s + 0.013)).collect();
    assert!(darroch_grid(&shifted, Execution::Parallel).unwrap().iter().all(|m| m.darroch_ok));
}

#[test]
fn taylor_bound_on_a_grid() {
    for n in [3, 6, 20, 100, 1000] {
        for i in 0..=10 {
            let r = taylor_mu_check(n, i as f64 / 10.0).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
