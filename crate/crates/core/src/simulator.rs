//! Synthetic target sets, the guess oracle, full attack runs and the
//! optimal-order baseline they are measured against.

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bandit::{BanditState, GuessPolicy, InitPolicy};
use crate::dictionary::{Corpus, Word};
use crate::error::{Error, Result};
use crate::mle::{DescentConfig, MixtureWeights};
use crate::scalar::Scalar;

/// The multiset of user passwords under attack.
#[derive(Debug, Clone, PartialEq)]
pub struct PasswordSet<T: Scalar = f64> {
    passwords: Vec<Word>,
    counts: HashMap<Word, u64>,
    true_mixture: Option<MixtureWeights<T>>,
    source_labels: Option<Vec<usize>>,
}

impl<T: Scalar> PasswordSet<T> {
    /// A password set with no known provenance.
    pub fn from_passwords(passwords: Vec<Word>) -> Result<Self> {
        if passwords.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut counts = HashMap::new();
        for pw in &passwords {
            *counts.entry(pw.clone()).or_insert(0) += 1;
        }
        Ok(PasswordSet {
            passwords,
            counts,
            true_mixture: None,
            source_labels: None,
        })
    }

    /// Number of users, `N`.
    pub fn len(&self) -> usize {
        self.passwords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passwords.is_empty()
    }

    pub fn population(&self) -> u64 {
        self.passwords.len() as u64
    }

    /// One password per user, grouped by source for composed sets.
    pub fn passwords(&self) -> &[Word] {
        &self.passwords
    }

    pub fn true_mixture(&self) -> Option<&MixtureWeights<T>> {
        self.true_mixture.as_ref()
    }

    /// Source dictionary index of each user, parallel to `passwords`.
    pub fn source_labels(&self) -> Option<&[usize]> {
        self.source_labels.as_deref()
    }

    /// Users drawn from each dictionary, for composed sets.
    pub fn source_counts(&self) -> Option<Vec<u64>> {
        let n = self.true_mixture.as_ref()?.len();
        let mut counts = vec![0; n];
        for &label in self.source_labels.as_ref()? {
            counts[label] += 1;
        }
        Some(counts)
    }

    /// Distinct passwords with multiplicities, most common first, ties in
    /// byte order.
    pub fn frequency_table(&self) -> Vec<(&Word, u64)> {
        let mut table: Vec<(&Word, u64)> = self.counts.iter().map(|(w, c)| (w, *c)).collect();
        table.sort_by(|(wa, ca), (wb, cb)| cb.cmp(ca).then_with(|| wa.cmp(wb)));
        table
    }
}

/// Multiplicity of `word` in the password set.
pub fn oracle_count<T: Scalar>(ps: &PasswordSet<T>, word: &str) -> u64 {
    ps.counts.get(word).copied().unwrap_or(0)
}

/// Splits `total` into integer parts proportional to `weights` by the
/// largest-remainder rule; remainder ties go to the lower index.
pub fn largest_remainder<T: Scalar>(weights: &[T], total: u64) -> Vec<u64> {
    let total_t = T::from_count(total);
    let quotas: Vec<T> = weights.iter().map(|&q| q * total_t).collect();
    let mut parts: Vec<u64> = quotas
        .iter()
        .map(|x| x.floor().to_u64().unwrap_or(0).min(total))
        .collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    let remainder = |i: usize| quotas[i] - quotas[i].floor();
    order.sort_by(|&a, &b| {
        remainder(b)
            .partial_cmp(&remainder(a))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let assigned: u64 = parts.iter().sum();
    if assigned <= total {
        for &i in order.iter().cycle().take((total - assigned) as usize) {
            parts[i] += 1;
        }
    } else {
        // only reachable when the weights overshoot 1 by rounding
        let mut excess = assigned - total;
        for &i in order.iter().rev() {
            let take = excess.min(parts[i]);
            parts[i] -= take;
            excess -= take;
            if excess == 0 {
                break;
            }
        }
    }
    parts
}

/// Draws `users` passwords: `largest_remainder(proportions, users)[i]` of
/// them independently from dictionary `i`'s frequency distribution.
pub fn compose_password_set<T: Scalar>(
    corpus: &Corpus,
    proportions: &MixtureWeights<T>,
    users: u64,
    seed: u64,
) -> Result<PasswordSet<T>> {
    if proportions.len() != corpus.len() {
        return Err(Error::DimensionMismatch {
            expected: corpus.len(),
            found: proportions.len(),
        });
    }
    if users == 0 {
        return Err(Error::EmptyInput);
    }
    let allocation = largest_remainder(proportions.as_slice(), users);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passwords = Vec::with_capacity(users as usize);
    let mut labels = Vec::with_capacity(users as usize);
    for (i, (dict, &count)) in corpus.dictionaries().iter().zip(&allocation).enumerate() {
        if count == 0 {
            continue;
        }
        let sampler = WeightedIndex::new(dict.entries().iter().map(|(_, c)| *c))
            .expect("dictionary counts are positive");
        for _ in 0..count {
            passwords.push(dict.entries()[sampler.sample(&mut rng)].0.clone());
            labels.push(i);
        }
    }
    let mut ps = PasswordSet::from_passwords(passwords)?;
    ps.true_mixture = Some(proportions.clone());
    ps.source_labels = Some(labels);
    Ok(ps)
}

/// One guess of an attack.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T: Scalar = f64> {
    pub word: Word,
    pub successes: u64,
    pub cumulative: u64,
    /// Estimate after incorporating this guess.
    pub estimate: MixtureWeights<T>,
}

/// Per-guess record of an attack run together with its settings.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackTrace<T: Scalar = f64> {
    pub records: Vec<TraceRecord<T>>,
    pub init: InitPolicy,
    pub guess: GuessPolicy,
    pub seed: u64,
    /// Guess budget `m`; `records` is shorter if candidates ran out.
    pub budget: usize,
}

impl<T: Scalar> AttackTrace<T> {
    pub fn cumulative_curve(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.cumulative).collect()
    }

    /// Cumulative successes extended to `len` guesses with the final value.
    pub fn padded_curve(&self, len: usize) -> Vec<u64> {
        let mut curve = self.cumulative_curve();
        let last = curve.last().copied().unwrap_or(0);
        curve.resize(len.max(curve.len()), last);
        curve
    }

    pub fn total_successes(&self) -> u64 {
        self.records.last().map_or(0, |r| r.cumulative)
    }
}

/// Runs `budget` rounds of select, query, re-estimate.
pub fn run_attack<T: Scalar>(
    corpus: &Corpus,
    ps: &PasswordSet<T>,
    init: InitPolicy,
    guess: GuessPolicy,
    budget: usize,
    cfg: &DescentConfig<T>,
    seed: u64,
) -> Result<AttackTrace<T>> {
    cfg.validate()?;
    let mut state = BanditState::new(corpus, ps.population(), seed)?;
    let mut records = Vec::with_capacity(budget);
    let mut cumulative = 0;
    for _ in 0..budget {
        let Some(word) = state.select_guess(guess, corpus) else {
            break;
        };
        let successes = oracle_count(ps, word.as_str());
        let est = state.record_observation(word.clone(), successes, corpus, init, cfg)?;
        cumulative += successes;
        records.push(TraceRecord {
            word,
            successes,
            cumulative,
            estimate: est.weights,
        });
    }
    Ok(AttackTrace {
        records,
        init,
        guess,
        seed,
        budget,
    })
}

/// Cumulative successes of guessing the set's own passwords from most to
/// least common, padded to `budget` entries.
pub fn optimal_baseline<T: Scalar>(ps: &PasswordSet<T>, budget: usize) -> Vec<u64> {
    let mut total = 0;
    let mut curve: Vec<u64> = ps
        .frequency_table()
        .into_iter()
        .take(budget)
        .map(|(_, c)| {
            total += c;
            total
        })
        .collect();
    curve.resize(budget, total);
    curve
}

/// Mean cumulative successes per guess index across runs.
pub fn average_traces<T: Scalar>(traces: &[AttackTrace<T>]) -> Result<Vec<f64>> {
    if traces.is_empty() {
        return Err(Error::EmptyInput);
    }
    let len = traces
        .iter()
        .map(|t| t.budget.max(t.records.len()))
        .max()
        .unwrap_or(0);
    let mut sums = vec![0.0; len];
    for trace in traces {
        for (acc, c) in sums.iter_mut().zip(trace.padded_curve(len)) {
            *acc += c as f64;
        }
    }
    let runs = traces.len() as f64;
    Ok(sums.into_iter().map(|s| s / runs).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::Dictionary;

    fn w(s: &str) -> Word {
        Word::new(s).unwrap()
    }

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| w(s)).collect()
    }

    fn dict(name: &str, entries: &[(&str, u64)]) -> Dictionary {
        Dictionary::from_counts(name, entries.iter().map(|(s, c)| (w(s), *c))).unwrap()
    }

    fn weights(q: &[f64]) -> MixtureWeights {
        MixtureWeights::new(q.to_vec()).unwrap()
    }

    #[test]
    fn largest_remainder_examples() {
        assert_eq!(
            largest_remainder(&[0.6, 0.3, 0.1], 10_000),
            vec![6000, 3000, 1000]
        );
        assert_eq!(
            largest_remainder(&[0.55, 0.30, 0.10, 0.05], 10),
            vec![6, 3, 1, 0]
        );
        assert_eq!(largest_remainder(&[1.0 / 3.0; 3], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[1.0], 7), vec![7]);
    }

    #[test]
    fn oracle_counts_multiplicities() {
        let ps = PasswordSet::<f64>::from_passwords(words(&["a", "a", "b"])).unwrap();
        assert_eq!(oracle_count(&ps, "a"), 2);
        assert_eq!(oracle_count(&ps, "z"), 0);
        let total: u64 = ps.frequency_table().iter().map(|(_, c)| c).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn baseline_examples() {
        let ps =
            PasswordSet::<f64>::from_passwords(words(&["a", "a", "a", "b", "b", "c"])).unwrap();
        assert_eq!(optimal_baseline(&ps, 2), vec![3, 5]);
        assert_eq!(optimal_baseline(&ps, 5), vec![3, 5, 6, 6, 6]);
    }

    #[test]
    fn average_examples() {
        let trace = |curve: &[u64]| AttackTrace::<f64> {
            records: curve
                .iter()
                .map(|&c| TraceRecord {
                    word: w("x"),
                    successes: 0,
                    cumulative: c,
                    estimate: MixtureWeights::uniform(1),
                })
                .collect(),
            init: InitPolicy::Average,
            guess: GuessPolicy::ByQ,
            seed: 0,
            budget: 2,
        };
        assert_eq!(average_traces(&[trace(&[2, 4])]).unwrap(), vec![2.0, 4.0]);
        assert_eq!(
            average_traces(&[trace(&[2, 4]), trace(&[4, 4])]).unwrap(),
            vec![3.0, 4.0]
        );
        // a truncated run is padded with its final value
        assert_eq!(
            average_traces(&[trace(&[2]), trace(&[4, 6])]).unwrap(),
            vec![3.0, 4.0]
        );
        assert_eq!(average_traces::<f64>(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn compose_allocates_exact_counts() {
        let c = Corpus::new(vec![
            dict("d1", &[("a", 3), ("b", 1)]),
            dict("d2", &[("c", 1)]),
            dict("d3", &[("d", 5), ("e", 5)]),
        ])
        .unwrap();
        let ps = compose_password_set(&c, &weights(&[0.6, 0.3, 0.1]), 10_000, 11).unwrap();
        assert_eq!(ps.len(), 10_000);
        assert_eq!(ps.source_counts(), Some(vec![6000, 3000, 1000]));
        assert_eq!(oracle_count(&ps, "c"), 3000);
        let labels = ps.source_labels().unwrap();
        for (pw, &label) in ps.passwords().iter().zip(labels) {
            assert!(c.dictionary(label).rank_of(pw.as_str()).is_some());
        }
        let again = compose_password_set(&c, &weights(&[0.6, 0.3, 0.1]), 10_000, 11).unwrap();
        assert_eq!(ps, again);
    }

    #[test]
    fn compose_single_source() {
        let c = Corpus::new(vec![dict("d1", &[("a", 3), ("b", 1)])]).unwrap();
        let ps = compose_password_set(&c, &weights(&[1.0]), 1, 0).unwrap();
        assert_eq!(ps.len(), 1);
        assert!(["a", "b"].contains(&ps.passwords()[0].as_str()));
        assert!(matches!(
            compose_password_set(&c, &weights(&[0.5, 0.5]), 5, 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_dictionary_attack_follows_rank_order() {
        let d = dict("d", &[("a", 8), ("b", 2), ("c", 1)]);
        let ps = PasswordSet::<f64>::from_passwords(
            d.entries()
                .iter()
                .flat_map(|(w, c)| std::iter::repeat_n(w.clone(), *c as usize))
                .collect(),
        )
        .unwrap();
        let c = Corpus::new(vec![d]).unwrap();
        for guess in GuessPolicy::ALL {
            let t = run_attack(
                &c,
                &ps,
                InitPolicy::Average,
                guess,
                3,
                &DescentConfig::default(),
                9,
            )
            .unwrap();
            let order: Vec<&str> = t.records.iter().map(|r| r.word.as_str()).collect();
            assert_eq!(order, ["a", "b", "c"]);
            assert_eq!(t.cumulative_curve(), optimal_baseline(&ps, 3));
        }
    }

    #[test]
    fn attack_truncates_when_vocabulary_runs_out() {
        let c = Corpus::new(vec![dict("d", &[("a", 1), ("b", 1)])]).unwrap();
        let ps = PasswordSet::<f64>::from_passwords(words(&["a", "q"])).unwrap();
        let t = run_attack(
            &c,
            &ps,
            InitPolicy::Best,
            GuessPolicy::ByQ,
            5,
            &DescentConfig::default(),
            0,
        )
        .unwrap();
        assert_eq!(t.records.len(), 2);
        assert_eq!(t.budget, 5);
        assert_eq!(t.padded_curve(5), vec![1, 1, 1, 1, 1]);
    }
}
