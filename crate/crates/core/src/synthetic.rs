//! Zipf-like synthetic dictionaries for experiments without leaked data.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dictionary::{Corpus, Dictionary, Word};
use crate::error::{Error, Result};

/// Dictionary whose `r`-th word has count `max(1, round(top_count / r^exponent))`.
pub fn zipf_dictionary(
    name: &str,
    words: &[Word],
    exponent: f64,
    top_count: u64,
) -> Result<Dictionary> {
    if words.is_empty() {
        return Err(Error::EmptyInput);
    }
    let counts = words.iter().enumerate().map(|(r, w)| {
        let c = (top_count as f64 / ((r + 1) as f64).powf(exponent)).round();
        (w.clone(), (c as u64).max(1))
    });
    Dictionary::from_counts(name, counts)
}

/// Shape of a family of overlapping Zipf dictionaries.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpusSpec {
    pub dictionaries: usize,
    pub words_per_dictionary: usize,
    /// Words present in every dictionary, at independently shuffled ranks.
    pub shared_words: usize,
    pub exponent: f64,
    pub top_count: u64,
    pub seed: u64,
}

impl Default for SyntheticCorpusSpec {
    fn default() -> Self {
        SyntheticCorpusSpec {
            dictionaries: 3,
            words_per_dictionary: 1000,
            shared_words: 200,
            exponent: 1.0,
            top_count: 100_000,
            seed: 0,
        }
    }
}

/// Builds dictionaries `dict1..dictN`. Shared words are `shared<k>`; the rest
/// of dictionary `i` is `d<i>_<k>`. Each dictionary ranks its words in an
/// independent random order.
pub fn synthetic_corpus(spec: &SyntheticCorpusSpec) -> Result<Corpus> {
    if spec.dictionaries == 0 || spec.words_per_dictionary == 0 {
        return Err(Error::EmptyInput);
    }
    if spec.shared_words > spec.words_per_dictionary {
        return Err(Error::InvalidConfig(
            "shared_words exceeds words_per_dictionary".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dictionaries = (1..=spec.dictionaries)
        .map(|i| {
            let mut words: Vec<Word> = (0..spec.shared_words)
                .map(|k| format!("shared{k}"))
                .chain((spec.shared_words..spec.words_per_dictionary).map(|k| format!("d{i}_{k}")))
                .map(Word::new)
                .collect::<Result<_>>()?;
            words.shuffle(&mut rng);
            zipf_dictionary(&format!("dict{i}"), &words, spec.exponent, spec.top_count)
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(dictionaries)
}
