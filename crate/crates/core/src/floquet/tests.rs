use super::*;
use crate::linalg::TOLERANCES;

fn shift(m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |i, j| {
        if j == (i + 1) % m {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    multiply(a, b).unwrap().max_abs_diff(&multiply(b, a).unwrap())
}

/// exp(X) by scaling and squaring a truncated Taylor series.
fn expm_taylor(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.rows();
    let norm = x.frobenius_norm();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let xs = x.scale(Complex64::new(2f64.powi(-squarings), 0.0));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..30 {
        term = multiply(&term, &xs).unwrap().scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = ComplexMatrix::from_fn(n, n, |i, j| sum[(i, j)] + term[(i, j)]);
    }
    for _ in 0..squarings {
        sum = multiply(&sum, &sum).unwrap();
    }
    sum
}

fn adjacency(m: usize, periodic: bool) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(m, m);
    for j in 0..m - 1 {
        a[(j, j + 1)] += Complex64::new(1.0, 0.0);
        a[(j + 1, j)] += Complex64::new(1.0, 0.0);
    }
    if periodic {
        a[(m - 1, 0)] += Complex64::new(1.0, 0.0);
        a[(0, m - 1)] += Complex64::new(1.0, 0.0);
    }
    a
}

#[test]
fn phase_profile_values() {
    let p = ModelParams::new(300, 0.0, PI / 4.0, 0.0).unwrap();
    let phi = phase_profile(&p);
    assert_eq!(phi.len(), 300);
    assert_eq!(phi[149], 0.0); // j = M/2
    assert!((phi[299] - PI / 4.0).abs() < 1e-15); // j = M
    let flat = phase_profile(&ModelParams::new(10, 0.3, 0.0, 0.0).unwrap());
    assert!(flat.iter().all(|&x| x == 0.0));
}

#[test]
fn params_validation() {
    assert!(ModelParams::new(1, 0.1, 0.1, 0.0).is_err());
    assert!(ModelParams::new(4, 0.1, 0.1, -1.0).is_err());
    assert!(ModelParams::new(4, f64::NAN, 0.1, 0.0).is_err());
    let p = ModelParams::in_kick_units(10, PI / 4.0, 2.0, 7.4).unwrap();
    assert!((16.0 * p.theta * p.trap - 7.4).abs() < 1e-12);
}

#[test]
fn disorder_is_deterministic_and_bounded() {
    let p = ModelParams::new(50, 0.1, 0.2, 0.7).unwrap();
    let a = sample_disorder(&p, 42, 3);
    let b = sample_disorder(&p, 42, 3);
    assert_eq!(a, b);
    assert_ne!(a.deltas, sample_disorder(&p, 42, 4).deltas);
    assert!(a.deltas.iter().all(|d| d.abs() <= 0.7));
    let clean = sample_disorder(&ModelParams::new(50, 0.1, 0.2, 0.0).unwrap(), 42, 3);
    assert!(clean.deltas.iter().all(|&d| d == 0.0));
}

#[test]
fn disorder_moments_are_uniform() {
    // uniform on [-1, 1]: mean 0, variance 1/3
    let p = ModelParams::new(1000, 0.0, 0.0, 1.0).unwrap();
    let xs: Vec<f64> = (0..100).flat_map(|w| sample_disorder(&p, 9, w).deltas).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 0.01, "mean {mean}");
    assert!((var - 1.0 / 3.0).abs() < 0.02 / 3.0, "var {var}");
}

#[test]
fn u1_entries() {
    let p = ModelParams::new(12, 0.0, 0.9, 0.4).unwrap();
    let r = sample_disorder(&p, 1, 0);
    let u1 = build_u1(&p, &r).unwrap();
    let phi = phase_profile(&p);
    let j = 7;
    let want = Complex64::from_polar(1.0, -(phi[j] + r.deltas[j]));
    assert!((u1[(j, j)] - want).norm() < 1e-15);
    assert!(u1.unitarity_error() < 1e-14);
    let trivial = ModelParams::new(12, 0.0, 0.0, 0.0).unwrap();
    assert_eq!(build_u1(&trivial, &sample_disorder(&trivial, 1, 0)).unwrap(), ComplexMatrix::identity(12));
}

#[test]
fn u2_matches_taylor_exponential() {
    for (m, boundary) in [(4, Boundary::Periodic), (5, Boundary::Open), (7, Boundary::Periodic)] {
        let p = ModelParams::new(m, 0.3, 0.0, 0.0).unwrap().with_boundary(boundary);
        let a = adjacency(m, boundary == Boundary::Periodic);
        let oracle = expm_taylor(&a.scale(Complex64::new(0.0, -0.3)));
        let got = build_u2(&p);
        assert!(got.max_abs_diff(&oracle) < 1e-10, "M={m} {boundary:?}");
        assert!(got.unitarity_error() < TOLERANCES.unitary);
    }
}

#[test]
fn u2_two_modes_double_bond() {
    // for M = 2 the wrap-around term repeats the single bond
    let p = ModelParams::new(2, 0.2, 0.0, 0.0).unwrap();
    let oracle = expm_taylor(&adjacency(2, true).scale(Complex64::new(0.0, -0.2)));
    assert!(build_u2(&p).max_abs_diff(&oracle) < 1e-12);
    assert!((build_u2(&p)[(0, 0)].re - (0.4f64).cos()).abs() < 1e-12);
}

#[test]
fn u2_zero_angle_is_identity() {
    for b in [Boundary::Periodic, Boundary::Open] {
        let p = ModelParams::new(9, 0.0, 1.0, 0.0).unwrap().with_boundary(b);
        assert!(build_u2(&p).max_abs_diff(&ComplexMatrix::identity(9)) < 1e-14);
    }
}

#[test]
fn periodic_u2_is_translation_invariant() {
    let p = ModelParams::new(11, 0.83, 0.0, 0.0).unwrap();
    assert!(commutator_norm(&build_u2(&p), &shift(11)) < 1e-10);
}

#[test]
fn clean_untrapped_floquet_conserves_momentum() {
    let p = ModelParams::new(10, 0.5, 0.0, 0.0).unwrap();
    let f = build_floquet(&p, &sample_disorder(&p, 0, 0)).unwrap();
    assert!(commutator_norm(&f.matrix, &shift(10)) < 1e-10);
}

#[test]
fn floquet_special_cases() {
    let p = ModelParams::new(6, 0.0, 0.0, 0.0).unwrap();
    let f = build_floquet(&p, &sample_disorder(&p, 0, 0)).unwrap();
    assert!(f.matrix.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-14);

    let p = ModelParams::new(6, 0.0, 0.8, 0.3).unwrap();
    let r = sample_disorder(&p, 5, 2);
    let f = build_floquet(&p, &r).unwrap();
    assert!(f.matrix.max_abs_diff(&build_u1(&p, &r).unwrap()) < 1e-14);
}

#[test]
fn floquet_unitary_on_grid_corners() {
    for (w, th) in [(0.0, 0.0), (0.0, 20.0), (8.0, 0.0), (8.0, 20.0), (2.0, 7.4)] {
        let p = ModelParams::in_kick_units(40, PI / 4.0, w, th).unwrap();
        let f = build_floquet(&p, &sample_disorder(&p, 77, 0)).unwrap();
        assert!(f.matrix.unitarity_error() < TOLERANCES.unitary, "W={w} θ={th}");
    }
}

#[test]
fn ensemble_properties() {
    let p = ModelParams::new(8, 0.4, 0.5, 0.3).unwrap();
    let single = build_ensemble(&p, 1, 1).unwrap();
    assert_eq!(single.len(), 1);
    assert!(build_ensemble(&p, 1, 0).is_err());

    let e = build_ensemble(&p, 1, 4).unwrap();
    let idx: Vec<u64> = e.members.iter().map(|f| f.realization.index).collect();
    assert_eq!(idx, vec![0, 1, 2, 3]);
    assert!(e.members[0].matrix.max_abs_diff(&e.members[1].matrix) > 1e-6);

    let clean = build_ensemble(&ModelParams::new(8, 0.4, 0.5, 0.0).unwrap(), 1, 3).unwrap();
    assert_eq!(clean.members[0].matrix, clean.members[2].matrix);
}

#[test]
fn ensemble_independent_of_thread_count() {
    let p = ModelParams::new(16, 0.4, 0.5, 0.3).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| build_ensemble(&p, 3, 6).unwrap());
    let b = four.install(|| build_ensemble(&p, 3, 6).unwrap());
    for (x, y) in a.members.iter().zip(&b.members) {
        assert_eq!(x.matrix, y.matrix);
    }
}

#[test]
fn stroboscopic_powers() {
    let p = ModelParams::new(7, 0.6, 0.9, 0.2).unwrap();
    let f = build_floquet(&p, &sample_disorder(&p, 2, 0)).unwrap();
    assert_eq!(stroboscopic_unitary(&f, 0), ComplexMatrix::identity(7));
    assert_eq!(stroboscopic_unitary(&f, 1), f.matrix);
    let sq = multiply(&f.matrix, &f.matrix).unwrap();
    assert!(stroboscopic_unitary(&f, 2).max_abs_diff(&sq) < 1e-14);
}
