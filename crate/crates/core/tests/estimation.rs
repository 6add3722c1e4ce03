use isa_core::estimator::{
    bootstrap_se, estimate_isa, fit_conditional, BootstrapConfig, ConditionalMatrix,
};
use isa_core::linalg::DenseMatrix;
use isa_core::simlab::{brute_force_simplex, generate_corpus, run_monte_carlo, SyntheticSpec};
use isa_core::{ConditionalMatrix32, ConditionalMatrix64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("D{i}")).collect()
}

fn residual(cond: &ConditionalMatrix<f64>, ps: &[f64], p: &[f64]) -> f64 {
    cond.forward(p).iter().zip(ps).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Random instance: `cats` categories, `k` patterns, columns and `ps` drawn
/// uniformly and normalized.
fn random_instance(rng: &mut ChaCha8Rng, cats: usize, k: usize) -> (ConditionalMatrix<f64>, Vec<f64>) {
    let mut draw = |n: usize| {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect::<Vec<f64>>()
    };
    let cols: Vec<Vec<f64>> = (0..cats).map(|_| draw(k)).collect();
    let ps = draw(k);
    let cond = ConditionalMatrix::from_matrix(labels(cats), DenseMatrix::from_columns(&cols).unwrap(), 0.0).unwrap();
    (cond, ps)
}

#[test]
fn brute_force_agrees_on_the_two_by_two_example() {
    let cond = ConditionalMatrix64::from_matrix(
        labels(2),
        DenseMatrix::from_columns(&[vec![0.8, 0.2], vec![0.1, 0.9]]).unwrap(),
        0.0,
    )
    .unwrap();
    let ps = [0.45, 0.55];
    let isa = estimate_isa(&cond, &ps).unwrap();
    let grid = brute_force_simplex(&cond, &ps, 1e-4).unwrap();
    for (a, b) in isa.probs().iter().zip(grid.probs()) {
        assert!((a - b).abs() <= 1e-4 + 1e-6, "{:?} vs {:?}", isa.probs(), grid.probs());
        assert!((a - 0.5).abs() < 1e-9);
    }
}

#[test]
fn brute_force_agrees_on_random_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let step = 1e-3;
    for case in 0..100 {
        let cats = rng.random_range(2..=3);
        let k = rng.random_range(cats..=8);
        let (cond, ps) = random_instance(&mut rng, cats, k);
        let isa = estimate_isa(&cond, &ps).unwrap();
        let grid = brute_force_simplex(&cond, &ps, step).unwrap();
        // the solver is never worse than the best grid point
        assert!(residual(&cond, &ps, isa.probs()) <= residual(&cond, &ps, grid.probs()) + 1e-15);
        let dist = isa
            .probs()
            .iter()
            .zip(grid.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dist <= step + 1e-6, "case {case}: {:?} vs {:?}", isa.probs(), grid.probs());
    }
}

/// Moderately informative interior spec used for the uncertainty checks.
fn interior_spec() -> SyntheticSpec {
    SyntheticSpec {
        true_p: vec![0.5, 0.3, 0.2],
        emission: vec![
            vec![0.6, 0.2, 0.3, 0.5],
            vec![0.2, 0.7, 0.3, 0.4],
            vec![0.3, 0.3, 0.8, 0.2],
        ],
        n_total: 10_000,
        train_fraction: 0.1,
        seed: 77,
    }
}

/// The bootstrap resamples the training set only, so the comparison uses a
/// test set much larger than the training set, where training noise dominates.
#[test]
fn bootstrap_se_tracks_monte_carlo_spread() {
    let spec = interior_spec();
    let mc = run_monte_carlo(&spec, 200, 0.5).unwrap();
    assert_eq!(mc.summary.failed, 0);

    // average bootstrap se over a few independent corpora to tame its own noise
    let corpora = 5;
    let mut se = vec![0.0; 3];
    for r in 0..corpora {
        let syn = generate_corpus(&spec.with_seed(1000 + r)).unwrap();
        let ps: Vec<f64> = syn.corpus.test_distribution().unwrap();
        let est = bootstrap_se(
            &syn.corpus,
            &ps,
            &BootstrapConfig {
                replications: 200,
                seed: 5 + r,
                alpha: 0.5,
            },
        )
        .unwrap();
        for (acc, s) in se.iter_mut().zip(est.se().unwrap()) {
            *acc += s / corpora as f64;
        }
    }
    for (i, (b, m)) in se.iter().zip(&mc.summary.isa.coord_sd).enumerate() {
        let rel = (b - m).abs() / m;
        println!("D{i}: bootstrap se {b:.5}, Monte Carlo sd {m:.5}, relative gap {rel:.3}");
        assert!(rel <= 0.20, "D{i}: bootstrap se {b} vs Monte Carlo sd {m}");
    }
}

#[test]
fn bias_ordering_under_noise() {
    // D0 dominant, weak diffuse signal
    let spec = SyntheticSpec {
        true_p: vec![0.75, 0.1, 0.15],
        emission: vec![vec![0.3, 0.3, 0.3, 0.3], vec![0.5, 0.2, 0.4, 0.3], vec![0.2, 0.45, 0.3, 0.4]],
        n_total: 5000,
        train_fraction: 0.1,
        seed: 8,
    };
    let s = run_monte_carlo(&spec, 200, 0.5).unwrap().summary;
    assert!(s.cc.mae_mean > s.isa.mae_mean, "cc {} vs isa {}", s.cc.mae_mean, s.isa.mae_mean);
}

#[test]
fn monte_carlo_is_bit_identical_across_thread_counts() {
    let spec = SyntheticSpec {
        n_total: 800,
        ..interior_spec()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_monte_carlo(&spec, 24, 0.5).unwrap())
    };
    let a = run(1);
    let b = run(5);
    assert_eq!(a.outcomes, b.outcomes);
    assert_eq!(a.summary, b.summary);
}

#[test]
fn f32_and_f64_agree() {
    let syn = generate_corpus(&interior_spec()).unwrap();
    let c64: ConditionalMatrix64 = fit_conditional(&syn.corpus, 0.5).unwrap();
    let c32: ConditionalMatrix32 = fit_conditional(&syn.corpus, 0.5f32).unwrap();
    let p64 = estimate_isa(&c64, &syn.corpus.test_distribution::<f64>().unwrap()).unwrap();
    let p32 = estimate_isa(&c32, &syn.corpus.test_distribution::<f32>().unwrap()).unwrap();
    assert!((p32.probs().iter().sum::<f32>() - 1.0).abs() < 1e-5);
    for (a, b) in p64.probs().iter().zip(p32.probs()) {
        assert!((a - *b as f64).abs() < 1e-4, "{a} vs {b}");
    }
}
