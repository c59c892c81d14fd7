use std::borrow::Cow;

use super::{Analyzer, Ngram, NgramConfig};

fn normalize<'a>(text: &'a str, config: &NgramConfig) -> Cow<'a, str> {
    if config.lowercase {
        Cow::Owned(text.to_lowercase())
    } else {
        Cow::Borrowed(text)
    }
}

/// Calls `f` once per n-gram occurrence, for every n in `n_min..=n_max`.
///
/// Byte and char n-grams are windows over the (optionally lowercased) text;
/// char windows run across spaces and are not padded. Word n-grams join
/// whitespace-separated tokens with a single space.
pub fn for_each_ngram<F: FnMut(&[u8])>(text: &str, config: &NgramConfig, mut f: F) {
    let text = normalize(text, config);
    let bytes = text.as_bytes();
    match config.analyzer {
        Analyzer::Byte => {
            for n in config.n_min..=config.n_max {
                for window in bytes.windows(n) {
                    f(window);
                }
            }
        }
        Analyzer::Char => {
            let bounds: Vec<usize> = text
                .char_indices()
                .map(|(i, _)| i)
                .chain(std::iter::once(bytes.len()))
                .collect();
            let chars = bounds.len() - 1;
            for n in config.n_min..=config.n_max {
                if n > chars {
                    break;
                }
                for start in 0..=chars - n {
                    f(&bytes[bounds[start]..bounds[start + n]]);
                }
            }
        }
        Analyzer::Word => {
            let words: Vec<&str> = text.split_whitespace().collect();
            let mut buf = Vec::new();
            for n in config.n_min..=config.n_max {
                for window in words.windows(n) {
                    buf.clear();
                    for (i, w) in window.iter().enumerate() {
                        if i > 0 {
                            buf.push(b' ');
                        }
                        buf.extend_from_slice(w.as_bytes());
                    }
                    f(&buf);
                }
            }
        }
    }
}

/// All n-gram occurrences of `text` (a multiset, in generation order).
pub fn tokenize(text: &str, config: &NgramConfig) -> Vec<Ngram> {
    let mut out = Vec::new();
    for_each_ngram(text, config, |g| out.push(g.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Ngram>) -> Vec<Ngram> {
        v.sort();
        v
    }

    fn grams(items: &[&str]) -> Vec<Ngram> {
        sorted(items.iter().map(|s| s.as_bytes().to_vec()).collect())
    }

    #[test]
    fn char_unigrams_and_bigrams() {
        let cfg = NgramConfig::new(Analyzer::Char).with_range(1, 2);
        assert_eq!(sorted(tokenize("abc", &cfg)), grams(&["a", "ab", "b", "bc", "c"]));
    }

    #[test]
    fn bytes_versus_chars_on_accented_text() {
        let bytes = tokenize("né", &NgramConfig::new(Analyzer::Byte).with_range(1, 1));
        assert_eq!(bytes, vec![vec![0x6E], vec![0xC3], vec![0xA9]]);
        let chars = tokenize("né", &NgramConfig::new(Analyzer::Char).with_range(1, 1));
        assert_eq!(chars, grams(&["n", "é"]));
    }

    #[test]
    fn word_bigrams_count_repeats() {
        let cfg = NgramConfig::new(Analyzer::Word).with_range(2, 2);
        let got = sorted(tokenize("el vent el vent", &cfg));
        assert_eq!(got, grams(&["el vent", "el vent", "vent el"]));
    }

    #[test]
    fn word_tokens_split_on_whitespace_runs() {
        let cfg = NgramConfig::new(Analyzer::Word).with_range(2, 2);
        assert_eq!(tokenize("a \t  b", &cfg), grams(&["a b"]));
    }

    #[test]
    fn lowercasing_is_optional() {
        let on = NgramConfig::new(Analyzer::Char).with_range(1, 1);
        let off = on.with_lowercase(false);
        assert_eq!(tokenize("À", &on), grams(&["à"]));
        assert_eq!(tokenize("À", &off), grams(&["À"]));
    }

    #[test]
    fn n_longer_than_text_yields_nothing() {
        let cfg = NgramConfig::new(Analyzer::Char).with_range(4, 4);
        assert!(tokenize("abc", &cfg).is_empty());
        assert!(tokenize("", &NgramConfig::new(Analyzer::Byte)).is_empty());
    }

    #[test]
    fn char_windows_cross_spaces() {
        let cfg = NgramConfig::new(Analyzer::Char).with_range(3, 3);
        assert_eq!(tokenize("a b", &cfg), grams(&["a b"]));
    }
}
