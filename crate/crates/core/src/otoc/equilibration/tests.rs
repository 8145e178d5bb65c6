use super::*;
use crate::floquet::{build_floquet, sample_disorder, ParameterPoint};
use crate::linalg::haar_unitary;
use crate::spectral::{quasienergies_of, QuasienergySpectrum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn haar(m: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn generic_diagonal(m: usize) -> ComplexMatrix {
    let d: Vec<Complex64> = (0..m).map(|k| Complex64::from_polar(1.0, 0.37 + 1.1 * (k as f64).sqrt())).collect();
    ComplexMatrix::from_diagonal(&d)
}

fn pair(m: usize, a: usize, b: usize) -> FockConfiguration {
    FockConfiguration::from_photon_modes(m, &[a, b]).unwrap()
}

#[test]
fn identity_and_single_step_averages() {
    let input = pair(5, 1, 3);
    let prof = time_average_profile(&ComplexMatrix::identity(5), &input, 10).unwrap();
    let got: Vec<f64> = prof.iter().map(|t| t.value).collect();
    assert_eq!(got, vec![0.0, 1.0, 0.0, 1.0, 0.0]);

    let f = haar(5, 1);
    let t = time_average_mean_photon(&f, &input, 3, 1).unwrap();
    assert_eq!(t.value, 1.0);
    assert!(time_average_mean_photon(&f, &input, 3, 0).is_err());
}

#[test]
fn averages_stay_in_envelope() {
    let f = haar(6, 2);
    let input = pair(6, 0, 4);
    for t in time_average_profile(&f, &input, 200).unwrap() {
        assert!(t.min - 1e-15 <= t.value && t.value <= t.max + 1e-15);
    }
}

#[test]
fn single_particle_prediction_limits() {
    let spec = quasienergies_of(&generic_diagonal(6)).unwrap();
    for i in 0..6 {
        for l in 0..6 {
            let v = diagonal_ensemble_single(&spec, i, l).unwrap().value;
            assert!((v - if i == l { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    let spec = quasienergies_of(&haar(9, 3)).unwrap();
    let total: f64 = (0..9).map(|l| diagonal_ensemble_single(&spec, 4, l).unwrap().value).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn single_particle_time_average_converges() {
    let p = ParameterPoint::ChaoticStrongKick.params(40);
    let f = build_floquet(&p, &sample_disorder(&p, 2, 0)).unwrap();
    let spec = quasienergies_of(&f.matrix).unwrap();
    let i = 20;
    let input = FockConfiguration::single(40, i).unwrap();
    let avg = time_average_profile(&f.matrix, &input, 20 * 40 * 10).unwrap();
    for (l, t) in avg.iter().enumerate() {
        let pred = diagonal_ensemble_single(&spec, i, l).unwrap().value;
        assert!((t.value - pred).abs() / pred < 0.05, "l={l}: {} vs {pred}", t.value);
    }
}

#[test]
fn two_particle_prediction_on_diagonal_unitary() {
    let spec = quasienergies_of(&generic_diagonal(4)).unwrap();
    assert!((diagonal_ensemble_two(&spec, 0, 2, 0, 2).unwrap().value - 1.0).abs() < 1e-12);
    assert!((diagonal_ensemble_two(&spec, 1, 1, 1, 1).unwrap().value - 1.0).abs() < 1e-12);
    assert!(diagonal_ensemble_two(&spec, 0, 2, 1, 2).unwrap().value.abs() < 1e-12);
    let spec = quasienergies_of(&ComplexMatrix::identity(3)).unwrap();
    assert!(diagonal_ensemble_two(&spec, 0, 1, 0, 1).unwrap().near_degenerate);
}

fn all_outputs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|r| (r..m).map(move |s| (r, s))).collect()
}

#[test]
fn two_particle_prediction_is_normalized_and_gauge_invariant() {
    let spec = quasienergies_of(&haar(6, 4)).unwrap();
    let total: f64 = all_outputs(6)
        .into_iter()
        .map(|(r, s)| diagonal_ensemble_two(&spec, 1, 3, r, s).unwrap().value)
        .sum();
    assert!((total - 1.0).abs() < 1e-10);

    let phases: Vec<Complex64> = (0..6).map(|a| Complex64::from_polar(1.0, 0.9 * a as f64)).collect();
    let rotated = QuasienergySpectrum {
        xis: spec.xis.clone(),
        overlaps: ComplexMatrix::from_fn(6, 6, |i, a| spec.overlaps[(i, a)] * phases[a]),
    };
    for (r, s) in [(0, 5), (2, 2)] {
        let a = diagonal_ensemble_two(&spec, 1, 3, r, s).unwrap().value;
        let b = diagonal_ensemble_two(&rotated, 1, 3, r, s).unwrap().value;
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn two_particle_matches_brute_force_average() {
    let m = 8;
    let f = haar(m, 5);
    let spec = quasienergies_of(&f).unwrap();
    let input = pair(m, 2, 5);
    let space = crate::fock::enumerate_configurations(m, 2).unwrap();
    let avg = time_average_probabilities(&f, &input, &space, 50 * m as u64 * 20).unwrap();
    for (c, t) in space.configurations().iter().zip(&avg) {
        let modes = c.photon_modes();
        let pred = diagonal_ensemble_two(&spec, 2, 5, modes[0], modes[1]).unwrap();
        assert!((t.value - pred.value).abs() / pred.value < 0.05, "{c}: {} vs {}", t.value, pred.value);
    }
}

#[test]
fn collision_term_is_needed() {
    let spec = quasienergies_of(&haar(6, 6)).unwrap();
    let pred = diagonal_ensemble_two(&spec, 0, 1, 2, 3).unwrap();
    let collision = pred.terms.iter().find(|(k, _)| k.starts_with("collision")).unwrap().1;
    assert!(collision < 0.0);
    let without: f64 = pred.value - collision;
    let total_without: f64 = all_outputs(6)
        .into_iter()
        .map(|(r, s)| {
            let p = diagonal_ensemble_two(&spec, 0, 1, r, s).unwrap();
            p.value - p.terms.last().unwrap().1
        })
        .sum();
    assert!(without > pred.value);
    assert!(total_without > 1.0 + 1e-3);
}

#[test]
fn two_particle_mean_photon_grouping() {
    let m = 7;
    let f = haar(m, 7);
    let spec = quasienergies_of(&f).unwrap();
    for (i, j) in [(1, 4), (3, 3)] {
        let total: f64 = (0..m).map(|l| mean_photon_two_particle(&spec, i, j, l).unwrap().value).sum();
        assert!((total - 2.0).abs() < 1e-10);
        let from_tables: Vec<f64> = {
            let mut out = vec![0.0; m];
            for (r, s) in all_outputs(m) {
                let p = diagonal_ensemble_two(&spec, i, j, r, s).unwrap().value;
                out[r] += p;
                out[s] += p;
            }
            out
        };
        let brute = time_average_profile(&f, &pair(m, i, j), 20_000).unwrap();
        for l in 0..m {
            let v = mean_photon_two_particle(&spec, i, j, l).unwrap().value;
            assert!((v - from_tables[l]).abs() < 1e-10, "({i},{j}) l={l}");
            assert!((v - brute[l].value).abs() / v < 0.03, "({i},{j}) l={l}: {v} vs {}", brute[l].value);
        }
    }
}

#[test]
fn probability_scales_as_inverse_square() {
    let mean_p = |m: usize| {
        let mut acc = 0.0;
        for seed in 0..4 {
            let spec = quasienergies_of(&haar(m, 100 + seed)).unwrap();
            for (r, s) in [(0, 1), (2, 5), (3, 7)] {
                acc += diagonal_ensemble_two(&spec, 4, 6, r, s).unwrap().value;
            }
        }
        acc / 12.0
    };
    let (p8, p16, p32) = (mean_p(8), mean_p(16), mean_p(32));
    for ratio in [p8 / p16, p16 / p32] {
        assert!((4.0 / 1.5..4.0 * 1.5).contains(&ratio), "{p8} {p16} {p32}");
    }
}

#[test]
fn q_average_identities() {
    let xis = [-2.0, -0.3, 0.4, 1.9];
    for horizon in [1, 7, 1000] {
        assert_eq!(q_average(&xis, &[1], &[1], horizon).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(q_average(&xis, &[0, 2], &[2, 0], horizon).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(q_average(&xis, &[3, 1], &[3, 1], horizon).unwrap(), Complex64::new(1.0, 0.0));
    }
    let delta: f64 = xis[2] - xis[0];
    for horizon in [10u64, 100, 10_000] {
        let q = q_average(&xis, &[2], &[0], horizon).unwrap().norm();
        let bound = 2.0 / (horizon as f64 * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, delta)).norm());
        assert!(q <= bound + 1e-15);
    }
    assert!(q_average(&xis, &[4], &[0], 5).is_err());
    assert!(q_average(&xis, &[0], &[0], 0).is_err());
}

#[test]
fn equilibration_json() {
    let spec = quasienergies_of(&haar(4, 8)).unwrap();
    let pred = diagonal_ensemble_single(&spec, 0, 1).unwrap();
    let avg = TimeAverage { observable: "n_2".into(), horizon: 10, value: pred.value * 1.01, min: 0.0, max: 1.0 };
    let rec = EquilibrationRecord::new(&avg, &pred);
    assert!((rec.relative_gap - 0.01).abs() < 1e-12);
    let mut buf = Vec::new();
    write_equilibration_json(&mut buf, &[rec]).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v[0]["observable"], "n_2");
}

#[test]
fn linear_profile_matches_enumerated_tables() {
    let m = 6;
    let f = haar(m, 11);
    let space = std::sync::Arc::new(crate::fock::enumerate_configurations(m, 3).unwrap());
    let input = FockConfiguration::new(vec![0, 2, 0, 1, 0, 0]).unwrap();
    let horizon = 15;
    let tables = crate::fock::photon_dynamics(&f, &input, &space, horizon - 1).unwrap();
    let mut expect = vec![0.0; m];
    for t in &tables {
        for (e, n) in expect.iter_mut().zip(crate::fock::mean_photon_profile(t)) {
            *e += n / horizon as f64;
        }
    }
    let got = time_average_profile(&f, &input, horizon).unwrap();
    for (g, e) in got.iter().zip(&expect) {
        assert!((g.value - e).abs() < 1e-12, "{} vs {e}", g.value);
    }
}

#[test]
fn single_configuration_average_matches_table() {
    let m = 5;
    let f = haar(m, 12);
    let input = pair(m, 0, 0);
    let space = crate::fock::enumerate_configurations(m, 2).unwrap();
    let all = time_average_probabilities(&f, &input, &space, 40).unwrap();
    for (c, t) in space.configurations().iter().zip(&all) {
        let one = time_average_probability(&f, &input, c, 40).unwrap();
        assert!((one.value - t.value).abs() < 1e-14);
        assert_eq!(one.observable, t.observable);
    }
    assert!(time_average_probability(&f, &input, &pair(m, 1, 1).clone(), 0).is_err());
    let three = FockConfiguration::from_photon_modes(m, &[0, 1, 2]).unwrap();
    assert!(time_average_probability(&f, &input, &three, 5).is_err());
}
