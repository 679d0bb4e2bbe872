use mfdma_core::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_surface(rows: usize, cols: usize, seed: u64) -> Surface {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(0.0f64..1.0)).collect())
        .collect();
    Surface::from_rows(&x).unwrap()
}

fn assert_tables_close(a: &FluctuationTable, b: &FluctuationTable, factor: f64, rel: f64) {
    for (u, v) in a.values().iter().zip(b.values()) {
        assert!((v - factor * u).abs() <= rel * v.abs(), "{u} vs {v}");
    }
}

#[test]
fn surface_transpose_leaves_fluctuations_unchanged() {
    let s = random_surface(48, 64, 1);
    let t = s.transpose();
    let scales = ScaleGrid::new(vec![3, 4, 6, 8, 12]).unwrap();
    let qs = QGrid::uniform(-3.0, 3.0, 1.0).unwrap();
    for theta in [0.0, 0.5, 1.0] {
        let a = mfdma_fluctuations_2d(&s, &scales, &qs, theta).unwrap();
        let b = mfdma_fluctuations_2d(&t, &scales, &qs, theta).unwrap();
        assert_tables_close(&a, &b, 1.0, 1e-12);
    }
    let a = mfdfa_fluctuations_2d(&s, &scales, &qs).unwrap();
    let b = mfdfa_fluctuations_2d(&t, &scales, &qs).unwrap();
    assert_tables_close(&a, &b, 1.0, 1e-12);
}

#[test]
fn surface_scaling_equivariance() {
    let s = random_surface(40, 40, 2);
    let scales = ScaleGrid::new(vec![3, 5, 10]).unwrap();
    let qs = QGrid::new(vec![-2.0, 0.0, 2.0]).unwrap();
    for lambda in [1e-3, 0.5, 7.0, 1e4] {
        let scaled = Surface::new(s.matrix().map(|v| v * lambda)).unwrap();
        let a = mfdma_fluctuations_2d(&s, &scales, &qs, 0.0).unwrap();
        let b = mfdma_fluctuations_2d(&scaled, &scales, &qs, 0.0).unwrap();
        assert_tables_close(&a, &b, lambda, 1e-9);
        let a = mfdfa_fluctuations_2d(&s, &scales, &qs).unwrap();
        let b = mfdfa_fluctuations_2d(&scaled, &scales, &qs).unwrap();
        assert_tables_close(&a, &b, lambda, 1e-9);
    }
}

#[test]
fn series_shape_arithmetic() {
    let x = gaussian_noise(101, 3).unwrap();
    let p = profile(&x);
    for n in 2..=16 {
        for theta in [0.0, 0.5, 1.0] {
            let cfg = DetrendConfig::new(n, theta).unwrap();
            assert_eq!(cfg.lead() + cfg.lag(), n - 1);
            let (first, last) = cfg.domain(101).unwrap();
            assert_eq!(last - first + 1, 101 - n + 1);
            let eps = residual_series(&p, &cfg).unwrap();
            assert_eq!(eps.len(), 101 - n + 1);
            assert_eq!(segment_rms(&eps, n).unwrap().len(), (101 - n + 1) / n);
        }
    }
}

#[test]
fn surface_shape_arithmetic() {
    let s = random_surface(37, 29, 4);
    for n in 2..=7 {
        for theta in [0.0, 0.5, 1.0] {
            let cfg = DetrendConfig2D::isotropic(n, theta).unwrap();
            let agg = window_aggregates(&s, &cfg).unwrap();
            assert_eq!((agg.rows(), agg.cols()), (37 - n + 1, 29 - n + 1));
            let delta = ((n as f64 * theta) as usize).min(n - 1);
            assert_eq!(cfg.shifts(), (delta, delta));
            let eps = residual_matrix_2d(&agg, &cfg).unwrap();
            assert_eq!((eps.rows(), eps.cols()), (37 - n + 1 - delta, 29 - n + 1 - delta));
            let seg = segment_rms_2d(&eps, n).unwrap();
            assert_eq!(seg.len(), (eps.rows() / n) * (eps.cols() / n));
        }
    }
}

#[test]
fn q_near_zero_is_continuous() {
    let series = binomial_measure_1d(&CascadeSpec1D::new(0.3, 12).unwrap()).unwrap();
    let p = profile(&series);
    for n in [10, 50, 200, 1000] {
        let eps = residual_series(&p, &DetrendConfig::new(n, 0.0).unwrap()).unwrap();
        let seg = segment_rms(&eps, n).unwrap();
        let f0 = overall_fluctuation(&seg, 0.0).unwrap();
        for q in [-1e-8, 1e-8] {
            let f = overall_fluctuation(&seg, q).unwrap();
            assert!(((f - f0) / f0).abs() < 1e-6, "n {n} q {q}: {f} vs {f0}");
        }
    }
}

#[test]
fn mfdfa_underestimates_tau_for_positive_q() {
    let series = binomial_measure_1d(&CascadeSpec1D::new(0.3, 14).unwrap()).unwrap();
    let qs = QGrid::uniform(-4.0, 4.0, 0.1).unwrap();
    let table = mfdfa_fluctuations_1d(&series, &build_scale_grid(10, 1000, 30).unwrap(), &qs, 1).unwrap();
    let est = fit_scaling(&table, None, 1.0).unwrap();
    let delta = tau_error_with(&est, |q| analytic_tau_1d(0.3, q));
    for (q, d) in qs.values().iter().zip(&delta) {
        if *q > 0.0 {
            assert!(*d < 0.0, "q {q}: delta tau {d}");
        }
    }
}

#[test]
fn backward_estimates_beat_centred_on_the_surface() {
    let spec = CascadeSpec2D::new([0.1, 0.2, 0.3, 0.4], 8).unwrap();
    let surface = cascade_measure_2d(&spec).unwrap();
    let scales = build_scale_grid(8, 64, 10).unwrap();
    let qs = QGrid::uniform(-4.0, 4.0, 0.5).unwrap();
    let total = |theta: f64| -> f64 {
        let table = mfdma_fluctuations_2d(&surface, &scales, &qs, theta).unwrap();
        let est = fit_scaling(&table, None, 2.0).unwrap();
        tau_error_with(&est, |q| analytic_tau_2d(&[0.1, 0.2, 0.3, 0.4], q))
            .iter()
            .map(|d| d.abs())
            .sum()
    };
    let (backward, centred) = (total(0.0), total(0.5));
    assert!(backward < centred, "backward {backward}, centred {centred}");
}

#[test]
fn shuffling_keeps_values() {
    let series = binomial_measure_1d(&CascadeSpec1D::new(0.3, 10).unwrap()).unwrap();
    let shuffled = shuffle_surrogate(&series, 9);
    let mut a = series.values().to_vec();
    let mut b = shuffled.values().to_vec();
    assert_ne!(a, b);
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    assert_eq!(a, b);
}
