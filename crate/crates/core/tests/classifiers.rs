mod common;

use common::{nb_oracle, nb_oracle_jll, random_sparse};
use grafia_core::classifiers::{argmax, softmax, train_logreg_traced};
use grafia_core::{
    balanced_class_weights, train_nb, train_svm, LogRegParams, NbParams, OrthographyClass,
    SparseVector, SvmParams,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn labels(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<OrthographyClass> {
    (0..n)
        .map(|i| OrthographyClass::TAGGABLE[if i < k { i } else { rng.gen_range(0..k) }])
        .collect()
}

/// Separable-ish clusters: each class shifts one coordinate.
fn clustered(seed: u64, n: usize, k: usize, d: usize) -> (Vec<SparseVector>, Vec<OrthographyClass>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = labels(n, k, &mut rng);
    let x = y
        .iter()
        .map(|c| {
            let mut dense: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..0.3)).collect();
            dense[(*c as usize) % d] += 1.0;
            SparseVector::from_dense(&dense).unwrap()
        })
        .collect();
    (x, y)
}

proptest! {
    #[test]
    fn softmax_is_a_distribution(scores in prop::collection::vec(-50.0f64..50.0, 1..10)) {
        let p = softmax(&scores);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert_eq!(argmax(&p), argmax(&scores));
    }

    #[test]
    fn argmax_and_softmax_shift_invariant(scores in prop::collection::vec(-50.0f64..50.0, 1..10), c in -100.0f64..100.0) {
        let shifted: Vec<f64> = scores.iter().map(|s| s + c).collect();
        prop_assert_eq!(argmax(&scores), argmax(&shifted));
        for (a, b) in softmax(&scores).iter().zip(softmax(&shifted)) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn balanced_weights_sum_to_n(seed in any::<u64>(), n in 1usize..200, k in 1usize..=9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = labels(n.max(k), k, &mut rng);
        let w = balanced_class_weights(&y).unwrap();
        let total: f64 = y.iter().map(|c| w.get(*c).unwrap()).sum();
        prop_assert!((total - y.len() as f64).abs() < 1e-9 * y.len() as f64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn nb_matches_dense_oracle(seed in any::<u64>(), k in 1usize..=4, d in 1usize..=20, n in 4usize..40, alpha in 0.01f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = n.max(k);
        let x: Vec<SparseVector> = (0..n).map(|_| random_sparse(&mut rng, d, 0.5, 0.0, 3.0)).collect();
        let y = labels(n, k, &mut rng);
        let model = train_nb(&x, &y, &NbParams { alpha, weighted: false }).unwrap();
        let yi: Vec<usize> = y.iter().map(|c| model.classes.iter().position(|m| m == c).unwrap()).collect();
        let dense: Vec<Vec<f64>> = x.iter().map(|v| v.to_dense()).collect();
        let (prior, theta) = nb_oracle(&dense, &yi, k, alpha);
        let q = random_sparse(&mut rng, d, 0.7, 0.0, 2.0);
        for (a, b) in model.joint_log_likelihood(&q).iter().zip(nb_oracle_jll(&prior, &theta, &q.to_dense())) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn logreg_objective_trace_is_monotone(seed in any::<u64>()) {
        let (x, y) = clustered(seed, 40, 3, 6);
        let (_, trace) = train_logreg_traced(&x, &y, &LogRegParams::default()).unwrap();
        prop_assert!(trace.objective.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn svm_is_insensitive_to_sample_order() {
    let (x, y) = clustered(5, 60, 3, 5);
    let params = SvmParams { tol: 1e-10, max_iter: 100_000, ..SvmParams::default() };
    let a = train_svm(&x, &y, &params).unwrap();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(99));
    let xp: Vec<SparseVector> = order.iter().map(|&i| x[i].clone()).collect();
    let yp: Vec<OrthographyClass> = order.iter().map(|&i| y[i]).collect();
    let b = train_svm(&xp, &yp, &params).unwrap();
    assert_eq!(a.classes, b.classes);
    for (u, v) in a.weights.iter().chain(&a.bias).zip(b.weights.iter().chain(&b.bias)) {
        assert!((u - v).abs() < 1e-4, "{u} vs {v}");
    }
}

#[test]
fn nb_rejects_negative_features() {
    let x = vec![
        SparseVector::from_dense(&[1.0, 0.5]).unwrap(),
        SparseVector::from_dense(&[-0.2, 1.0]).unwrap(),
    ];
    let y = [OrthographyClass::Sl, OrthographyClass::Nol];
    let err = train_nb(&x, &y, &NbParams::default()).unwrap_err();
    assert!(err.to_string().contains("non-negative"), "{err}");
}
