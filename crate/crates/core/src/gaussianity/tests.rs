use super::*;
use crate::floquet::{build_ensemble, ParameterPoint};
use crate::linalg::haar_unitary;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn set(values: Vec<f64>) -> SampleSet {
    SampleSet {
        values,
        source: SampleSource { rows: vec![], cols: vec![], m: 0, members: 0, part: Part::Pooled },
    }
}

fn normal_sample(n: usize, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    set((0..n).map(|_| rng.sample(StandardNormal)).collect())
}

#[test]
fn collection_sizes_and_layout() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let us: Vec<ComplexMatrix> = (0..3).map(|_| haar_unitary(6, &mut rng).unwrap()).collect();
    let rows = [0, 1];
    let cols = [0, 1, 2];
    let pooled = collect_submatrix_elements(&us, &rows, &cols, 0, Part::Pooled).unwrap();
    assert_eq!(pooled.len(), 2 * 6 * 3);
    assert_eq!(pooled.values[0], us[0][(0, 0)].re);
    assert_eq!(pooled.values[1], us[0][(0, 0)].im);
    assert_eq!(pooled.values[2], us[0][(0, 1)].re);
    let im = collect_submatrix_elements(&us, &rows, &cols, 0, Part::Imaginary).unwrap();
    assert_eq!(im.len(), 18);
    assert_eq!(im.values[17], us[2][(1, 2)].im);
    assert!(collect_submatrix_elements(&us, &[6], &cols, 0, Part::Real).is_err());
}

#[test]
fn identity_samples_are_binary() {
    let us = vec![ComplexMatrix::identity(5); 4];
    let s = collect_submatrix_elements(&us, &[0, 1, 2], &[0, 1, 2], 0, Part::Pooled).unwrap();
    assert!(s.values.iter().all(|&v| v == 0.0 || v == 1.0));
}

#[test]
fn ensemble_collection_is_deterministic_and_matches_power() {
    let p = ParameterPoint::ChaoticWeakDisorder.params(10);
    let ens = build_ensemble(&p, 4, 3).unwrap();
    let a = collect_from_ensemble(&ens, &[0, 1], &[0, 1], 7, Part::Pooled).unwrap();
    let b = collect_from_ensemble(&build_ensemble(&p, 4, 3).unwrap(), &[0, 1], &[0, 1], 7, Part::Pooled).unwrap();
    assert_eq!(a, b);
    let full = crate::linalg::matrix_power(&ens.members[1].matrix, 7).unwrap();
    let rows = rows_of_power(&ens.members[1].matrix, &[3, 8], 7).unwrap();
    for c in 0..10 {
        assert!((rows[(0, c)] - full[(3, c)]).norm() < 1e-12);
        assert!((rows[(1, c)] - full[(8, c)]).norm() < 1e-12);
    }
    assert_eq!(a.source.rows, vec![0, 1]);
}

#[test]
fn standardize_moments_and_idempotence() {
    let s = set(vec![3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0]);
    let z = standardize(&s).unwrap();
    assert!(z.mean().abs() < 1e-12);
    assert!((z.variance() - 1.0).abs() < 1e-12);
    let zz = standardize(&z).unwrap();
    for (a, b) in z.values.iter().zip(&zz.values) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(standardize(&set(vec![2.0, 2.0, 2.0])).is_err());
    assert!(standardize(&set(vec![1.0])).is_err());
}

#[test]
fn linear_sample_rejected_at_large_n() {
    let s = set((1..=2000).map(f64::from).collect());
    let r = shapiro_wilk(&s, 0.05, 0).unwrap();
    assert!(r.w_statistic < 1.0);
    assert!(r.p_value < 1e-6);
    assert!(!r.normal);
}

#[test]
fn normal_samples_pass_most_of_the_time() {
    let passes = (0..100)
        .filter(|&seed| shapiro_wilk(&normal_sample(500, seed), 0.05, 0).unwrap().normal)
        .count();
    assert!(passes >= 90, "{passes}");
}

#[test]
fn heavy_tails_and_uniform_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let uniform = set((0..3000).map(|_| rng.random::<f64>()).collect());
    assert!(!shapiro_wilk(&uniform, 0.05, 0).unwrap().normal);
    let cauchy = set((0..1000).map(|_| (std::f64::consts::PI * (rng.random::<f64>() - 0.5)).tan()).collect());
    assert!(!shapiro_wilk(&cauchy, 0.05, 0).unwrap().normal);
}

#[test]
fn oversized_samples_are_subsampled_reproducibly() {
    let s = normal_sample(7000, 3);
    let a = shapiro_wilk(&s, 0.05, 11).unwrap();
    let b = shapiro_wilk(&s, 0.05, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.n, MAX_SAMPLES);
    assert_eq!(a.subsampled_from, Some(7000));
    assert!(shapiro_wilk(&s, 1.5, 0).is_err());
}

#[test]
fn qq_on_exact_quantiles_is_identity_line() {
    let n = 400;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let s = set((0..n).rev().map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64)).collect());
    let qq = qq_points(&s).unwrap();
    for (t, v) in &qq.points {
        assert!((t - v).abs() < 1e-9);
    }
    assert!(qq.points.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(qq_points(&set(vec![1.0])).is_err());
}

#[test]
fn qq_uniform_has_light_tails() {
    let n = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = standardize(&set((0..n).map(|_| rng.random::<f64>()).collect())).unwrap();
    let qq = qq_points(&s).unwrap();
    assert!(qq.last().1 < qq.last().0);
    assert!(qq.first().1 > qq.first().0);
}

#[test]
fn quantile_function_reference_values() {
    let normal = Normal::new(0.0, 1.0).unwrap();
    for (p, q) in [
        (0.975, 1.959963984540054),
        (0.5, 0.0),
        (1e-10, -6.361340902404056),
        (0.3, -0.5244005127080409),
    ] {
        assert!((normal.inverse_cdf(p) - q).abs() < 1e-9, "{p}");
    }
}

#[test]
fn histogram_normalized_and_symmetric() {
    let mut vals: Vec<f64> = normal_sample(5000, 6).values;
    let mirrored: Vec<f64> = vals.iter().map(|v| -v).collect();
    vals.extend(mirrored);
    let h = element_histogram(&set(vals), 20).unwrap();
    assert!((h.integral() - 1.0).abs() < 1e-12);
    for k in 0..10 {
        assert!((h.density[k] - h.density[19 - k]).abs() < 1e-12);
    }
    assert!(element_histogram(&set(vec![]), 10).is_err());
    assert!(element_histogram(&set(vec![1.0, 2.0]), 1).is_err());
}

#[test]
fn writers() {
    let s = normal_sample(10, 1);
    let qq = qq_points(&s).unwrap();
    let mut buf = Vec::new();
    write_qq_csv(&mut buf, &qq).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 11);
    let h = element_histogram(&s, 4).unwrap();
    let mut buf = Vec::new();
    write_hist_csv(&mut buf, &h).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("bin_center,density\n"));
    let rep = shapiro_wilk(&s, 0.05, 0).unwrap();
    let rec = NormalityRecord::new("test", &rep, &s.source, None);
    let mut buf = Vec::new();
    write_normality_json(&mut buf, &[rec]).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v[0]["n"], 10);
    assert!(v[0]["W"].as_f64().unwrap() <= 1.0);
}

#[test]
fn complex_gaussian_entries_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m: Vec<ComplexMatrix> = (0..50)
        .map(|_| {
            ComplexMatrix::from_fn(5, 5, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
        })
        .collect();
    let s = collect_submatrix_elements(&m, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4], 0, Part::Pooled).unwrap();
    assert!(shapiro_wilk(&standardize(&s).unwrap(), 0.05, 0).unwrap().normal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn standardize_is_affine_invariant(seed in any::<u64>(), scale in 0.1..50.0f64, shift in -100.0..100.0f64) {
        let s = normal_sample(50, seed);
        let moved = set(s.values.iter().map(|v| scale * v + shift).collect());
        let a = standardize(&s).unwrap();
        let b = standardize(&moved).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn w_in_unit_interval(seed in any::<u64>(), n in 3usize..300) {
        let (w, p) = shapiro_wilk_statistic(&normal_sample(n, seed).values).unwrap();
        prop_assert!(w > 0.0 && w <= 1.0);
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
