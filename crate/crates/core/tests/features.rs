mod common;

use std::collections::HashSet;

use common::{oracle_ngrams, OracleTfidf};
use grafia_core::features::idf_weight;
use grafia_core::{fit_union, fit_vectorizer, tokenize, Analyzer, NgramConfig};
use proptest::prelude::*;

fn analyzer() -> impl Strategy<Value = Analyzer> {
    prop_oneof![Just(Analyzer::Byte), Just(Analyzer::Char), Just(Analyzer::Word)]
}

fn text() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[abcöüèÉA' ]{0,16}").unwrap()
}

fn config() -> impl Strategy<Value = NgramConfig> {
    (analyzer(), 1usize..=4, 0usize..=3, 1usize..=50, any::<bool>()).prop_map(|(a, lo, extra, cap, lower)| {
        NgramConfig::new(a).with_range(lo, lo + extra).with_max_features(cap).with_lowercase(lower)
    })
}

proptest! {
    #[test]
    fn char_unigrams_count_scalars(t in "\\PC{0,40}") {
        let cfg = NgramConfig::new(Analyzer::Char).with_range(1, 1);
        prop_assert_eq!(tokenize(&t, &cfg).len(), t.to_lowercase().chars().count());
    }

    #[test]
    fn tokenize_matches_definition(t in text(), cfg in config()) {
        let mut got = tokenize(&t, &cfg);
        let mut want = oracle_ngrams(&t, &cfg);
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn transform_matches_dense_oracle(docs in prop::collection::vec(text(), 1..=5), probe in text(), cfg in config()) {
        let v = fit_vectorizer(&docs, cfg).unwrap();
        let oracle = OracleTfidf::fit(&docs, cfg);
        prop_assert_eq!(v.terms(), &oracle.terms[..]);
        for t in docs.iter().chain(std::iter::once(&probe)) {
            let got = v.transform(t).to_dense();
            let want = oracle.dense(t);
            for (a, b) in got.iter().zip(&want) {
                prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn transform_is_unit_or_zero(docs in prop::collection::vec(text(), 1..=6), probe in text(), cfg in config()) {
        let v = fit_vectorizer(&docs, cfg).unwrap();
        let x = v.transform(&probe);
        let n = x.norm();
        prop_assert!(n == 0.0 || (n - 1.0).abs() <= 1e-9);
        prop_assert!(x.indices().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(x.indices().iter().all(|&i| (i as usize) < v.dim()));
        prop_assert!(x.values().iter().all(|&f| f != 0.0 && f.is_finite()));
    }

    #[test]
    fn vocabulary_invariants_and_determinism(docs in prop::collection::vec(text(), 1..=6), cfg in config()) {
        let a = fit_vectorizer(&docs, cfg).unwrap();
        let b = fit_vectorizer(&docs, cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.dim() <= cfg.max_features);
        prop_assert!(a.idf().iter().all(|&w| w >= 1.0));
        let distinct: HashSet<_> = a.terms().iter().collect();
        prop_assert_eq!(distinct.len(), a.dim());
        for (i, t) in a.terms().iter().enumerate() {
            prop_assert_eq!(a.index_of(t), Some(i));
        }
    }

    #[test]
    fn idf_decreases_with_df(n in 1usize..1000, df in 0usize..999) {
        prop_assume!(df < n);
        prop_assert!(idf_weight(n, df + 1) < idf_weight(n, df));
    }

    #[test]
    fn union_blocks_equal_member_transforms(
        docs in prop::collection::vec(text(), 1..=5),
        probe in text(),
        configs in prop::collection::vec(config(), 1..=3),
    ) {
        let u = fit_union(&docs, &configs).unwrap();
        prop_assert_eq!(u.total_dim(), u.members().iter().map(|m| m.dim()).sum::<usize>());
        let whole = u.transform(&probe);
        for (i, m) in u.members().iter().enumerate() {
            let lo = u.offset(i);
            let block: Vec<(usize, u64)> = whole
                .iter()
                .filter(|(j, _)| *j >= lo && *j < lo + m.dim())
                .map(|(j, f)| (j - lo, f.to_bits()))
                .collect();
            let alone: Vec<(usize, u64)> = m.transform(&probe).iter().map(|(j, f)| (j, f.to_bits())).collect();
            prop_assert_eq!(block, alone);
        }
    }
}

#[test]
fn union_of_two_unit_blocks_has_norm_sqrt_two() {
    let docs = ["el vent", "la cà"];
    let u = fit_union(&docs, &[NgramConfig::new(Analyzer::Char), NgramConfig::new(Analyzer::Word)]).unwrap();
    assert!((u.transform("el vent").norm() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(u.transform("").nnz(), 0);
}

#[test]
fn vocabulary_cap_is_exact() {
    let docs: Vec<String> = (0..400).map(|i| format!("w{i} x{} y{}", i * 7, i * 13)).collect();
    let v = fit_vectorizer(&docs, NgramConfig::new(Analyzer::Word).with_range(1, 1).with_max_features(1000)).unwrap();
    assert_eq!(v.dim(), 1000);
}
