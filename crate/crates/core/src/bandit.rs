//! Attack state carried across guesses, plus the policies that pick the
//! starting point of each re-estimation and the next word to guess.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::dictionary::{Corpus, Word};
use crate::error::{Error, Result};
use crate::mle::{estimate, DescentConfig, Estimate, GuessHistory, MixtureWeights};
use crate::scalar::Scalar;

/// Where each gradient ascent starts after a new observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitPolicy {
    /// A uniform draw from the simplex.
    Random,
    /// `(1/n, ..., 1/n)`.
    Average,
    /// The previous estimate; `Average` when there is none yet.
    Best,
}

/// How the next word is chosen from the current estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuessPolicy {
    /// Next word of a uniformly chosen non-exhausted dictionary.
    #[serde(rename = "random-dict")]
    RandomDictionary,
    /// Next word of the dictionary with the largest weight.
    #[serde(rename = "best-dict")]
    BestDictionary,
    /// The unguessed word with the largest mixture probability.
    #[serde(rename = "by-q")]
    ByQ,
}

impl InitPolicy {
    pub const ALL: [InitPolicy; 3] = [InitPolicy::Random, InitPolicy::Average, InitPolicy::Best];

    pub fn as_str(self) -> &'static str {
        match self {
            InitPolicy::Random => "random",
            InitPolicy::Average => "average",
            InitPolicy::Best => "best",
        }
    }
}

impl GuessPolicy {
    pub const ALL: [GuessPolicy; 3] = [
        GuessPolicy::RandomDictionary,
        GuessPolicy::BestDictionary,
        GuessPolicy::ByQ,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GuessPolicy::RandomDictionary => "random-dict",
            GuessPolicy::BestDictionary => "best-dict",
            GuessPolicy::ByQ => "by-q",
        }
    }
}

impl fmt::Display for InitPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for GuessPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        InitPolicy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown init policy {s:?} (expected random, average or best)"))
    }
}

impl FromStr for GuessPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GuessPolicy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                format!("unknown guess policy {s:?} (expected random-dict, best-dict or by-q)")
            })
    }
}

/// Starting weights for a descent under `policy`.
pub fn initialize_weights<T: Scalar, R: Rng + ?Sized>(
    policy: InitPolicy,
    n: usize,
    prev: Option<&MixtureWeights<T>>,
    rng: &mut R,
) -> MixtureWeights<T> {
    match (policy, prev) {
        (InitPolicy::Random, _) => {
            // normalized i.i.d. exponentials are uniform on the simplex
            let draws: Vec<T> = (0..n).map(|_| T::lit(rng.sample::<f64, _>(Exp1))).collect();
            if draws.iter().all(|x| x.is_zero()) {
                MixtureWeights::uniform(n)
            } else {
                MixtureWeights::normalized(draws)
            }
        }
        (InitPolicy::Best, Some(prev)) if prev.len() == n => prev.clone(),
        _ => MixtureWeights::uniform(n),
    }
}

/// Single-attack state: observations so far, the current and previous
/// estimates, and the seeded random stream used by the random policies.
#[derive(Debug, Clone)]
pub struct BanditState<T: Scalar = f64> {
    history: GuessHistory,
    current_estimate: MixtureWeights<T>,
    previous_estimate: Option<MixtureWeights<T>>,
    guessed: HashSet<Word>,
    /// guessed flag per corpus vocabulary index
    guessed_vocab: Vec<bool>,
    seed: u64,
    rng: ChaCha8Rng,
}

impl<T: Scalar> BanditState<T> {
    /// Fresh state for an attack on `population` users. The estimate starts
    /// at the barycenter.
    pub fn new(corpus: &Corpus, population: u64, seed: u64) -> Result<Self> {
        Ok(BanditState {
            history: GuessHistory::new(population)?,
            current_estimate: MixtureWeights::uniform(corpus.len()),
            previous_estimate: None,
            guessed: HashSet::new(),
            guessed_vocab: vec![false; corpus.union_vocabulary().len()],
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn history(&self) -> &GuessHistory {
        &self.history
    }

    pub fn current_estimate(&self) -> &MixtureWeights<T> {
        &self.current_estimate
    }

    pub fn previous_estimate(&self) -> Option<&MixtureWeights<T>> {
        self.previous_estimate.as_ref()
    }

    pub fn guessed(&self) -> &HashSet<Word> {
        &self.guessed
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Chooses the next word, or `None` once every vocabulary word has been
    /// guessed.
    pub fn select_guess(&mut self, policy: GuessPolicy, corpus: &Corpus) -> Option<Word> {
        match policy {
            GuessPolicy::RandomDictionary => {
                let open: Vec<&Word> = corpus
                    .dictionaries()
                    .iter()
                    .filter_map(|d| d.next_unguessed(&self.guessed))
                    .collect();
                if open.is_empty() {
                    return None;
                }
                let pick = self.rng.random_range(0..open.len());
                Some(open[pick].clone())
            }
            GuessPolicy::BestDictionary => {
                let mut best: Option<(T, &Word)> = None;
                for (d, &q) in corpus
                    .dictionaries()
                    .iter()
                    .zip(self.current_estimate.as_slice())
                {
                    if let Some(word) = d.next_unguessed(&self.guessed) {
                        // strict comparison keeps the lowest index on ties
                        if best.is_none_or(|(bq, _)| q > bq) {
                            best = Some((q, word));
                        }
                    }
                }
                best.map(|(_, w)| w.clone())
            }
            GuessPolicy::ByQ => self.best_by_mixture_probability(corpus),
        }
    }

    fn best_by_mixture_probability(&self, corpus: &Corpus) -> Option<Word> {
        let q = self.current_estimate.as_slice();
        let totals: Vec<T> = corpus
            .dictionaries()
            .iter()
            .map(|d| T::from_count(d.total_count()))
            .collect();
        let vocab = corpus.union_vocabulary();
        let mut best: Option<(T, usize)> = None;
        for (v, word) in vocab.iter().enumerate() {
            if self.guessed_vocab[v] {
                continue;
            }
            let score = corpus.counts_at(v).iter().zip(&totals).zip(q).fold(
                T::zero(),
                |acc, ((&c, &t), &qi)| {
                    if c == 0 {
                        acc
                    } else {
                        acc + qi * (T::from_count(c) / t)
                    }
                },
            );
            let better = match best {
                None => true,
                Some((bs, bv)) => score > bs || (score == bs && *word < vocab[bv]),
            };
            if better {
                best = Some((score, v));
            }
        }
        best.map(|(_, v)| vocab[v].clone())
    }

    /// Records that guessing `word` compromised `successes` users, then
    /// re-estimates the mixture starting from the point chosen by `init`.
    pub fn record_observation(
        &mut self,
        word: Word,
        successes: u64,
        corpus: &Corpus,
        init: InitPolicy,
        cfg: &DescentConfig<T>,
    ) -> Result<Estimate<T>> {
        if self.guessed.contains(&word) {
            return Err(Error::DuplicateGuess(word.into_string()));
        }
        let had_estimate = !self.history.is_empty();
        self.history.push(word.clone(), successes)?;
        if let Some(v) = corpus.vocabulary_index(word.as_str()) {
            self.guessed_vocab[v] = true;
        }
        self.guessed.insert(word);

        let prev = had_estimate.then_some(&self.current_estimate);
        let start = initialize_weights(init, corpus.len(), prev, &mut self.rng);
        let est = estimate(corpus, &self.history, &start, cfg)?;
        self.previous_estimate = Some(std::mem::replace(
            &mut self.current_estimate,
            est.weights.clone(),
        ));
        Ok(est)
    }
}
