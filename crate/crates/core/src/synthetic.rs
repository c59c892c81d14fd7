//! Artificial orthographies for end-to-end checks without the real corpus.
//!
//! Base sentences are drawn from a small lexicon written with grapheme
//! markers; each orthography spells the markers differently, so the same
//! sentence appears once per class and only spelling separates them.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{OrthographyClass, Sample};

/// Marker graphemes used in the lexicon.
const MARKERS: [char; 5] = ['Ö', 'C', 'K', 'U', 'Z'];

const ROUNDED: &[&str] = &["fÖg", "cÖr", "nÖv", "vÖja", "mÖr", "sÖl", "fiÖl", "pÖr", "lÖc", "tÖ"];
const AFFRICATE: &[&str] = &["tuC", "laC", "faC", "diC", "noC", "scriC", "aC", "veC", "liC", "broC"];
const OTHER: &[&str] = &[
    "Kes", "Kiesa", "Kilo", "Kerb", "sKena", "lUna", "fUm", "mUr", "dUr", "pUra", "scUr", "caZa",
    "roZa", "spoZ", "Zio", "la", "el", "de", "in", "cà", "mi", "ti", "l'è", "a", "che", "per", "sò",
    "gent", "temp", "bel", "grand", "vecc", "sira", "mattin", "strada", "pan", "vin", "dona", "om",
];

/// Spelling of each marker, in `MARKERS` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orthography {
    pub class: OrthographyClass,
    pub spellings: [&'static str; 5],
}

pub const ORTHOGRAPHIES: [Orthography; 3] = [
    Orthography { class: OrthographyClass::Milclass, spellings: ["oeu", "cc", "ch", "u", "s"] },
    Orthography { class: OrthographyClass::Locc, spellings: ["ö", "c", "ch", "ü", "z"] },
    Orthography { class: OrthographyClass::Sl, spellings: ["o", "ç", "c", "ü", "s"] },
];

impl Orthography {
    pub fn render(&self, base: &str) -> String {
        let mut out = String::with_capacity(base.len() + 8);
        for c in base.chars() {
            match MARKERS.iter().position(|&m| m == c) {
                Some(i) => out.push_str(self.spellings[i]),
                None => out.push(c),
            }
        }
        let mut chars = out.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => out,
        }
    }
}

/// `n` distinct marker-form sentences, each with at least one rounded
/// vowel and one final affricate.
pub fn base_sentences(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut words: Vec<&str> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            words.push(ROUNDED.choose(&mut rng).unwrap());
        }
        for _ in 0..rng.gen_range(1..=2) {
            words.push(AFFRICATE.choose(&mut rng).unwrap());
        }
        for _ in 0..rng.gen_range(4..=7) {
            words.push(OTHER.choose(&mut rng).unwrap());
        }
        words.shuffle(&mut rng);
        let sentence = format!("{}.", words.join(" "));
        if seen.insert(sentence.clone()) {
            out.push(sentence);
        }
    }
    out
}

/// `lines_per_class` samples for each orthography, grouped by base
/// sentence so that every sentence appears in every class.
pub fn synthetic_corpus(lines_per_class: usize, seed: u64) -> Vec<Sample> {
    base_sentences(lines_per_class, seed)
        .iter()
        .flat_map(|base| {
            ORTHOGRAPHIES
                .iter()
                .map(move |o| Sample::new(o.render(base), o.class).expect("rendered sentences are valid"))
        })
        .collect()
}
