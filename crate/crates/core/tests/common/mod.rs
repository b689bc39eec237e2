//! Test-only oracles and fixtures. Nothing here calls the optimizer or the
//! projection under test.
#![allow(dead_code)]

use pwbandit::{
    optimal_baseline, run_attack, AttackTrace, Corpus, DescentConfig, Dictionary, GuessHistory,
    GuessPolicy, InitPolicy, MixtureWeights, Objective, PasswordSet, Word,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FLOOR: f64 = 1e-12;

pub fn w(s: &str) -> Word {
    Word::new(s).unwrap()
}

pub fn dict(name: &str, entries: &[(&str, u64)]) -> Dictionary {
    Dictionary::from_counts(name, entries.iter().map(|(s, c)| (w(s), *c))).unwrap()
}

/// Random corpus of `n` dictionaries, each with up to `max_words` words
/// drawn from a shared pool so supports overlap partially.
pub fn random_corpus(rng: &mut ChaCha8Rng, n: usize, max_words: usize) -> Corpus {
    let pool: Vec<String> = (0..(max_words * n).max(4))
        .map(|k| format!("w{k}"))
        .collect();
    let dictionaries = (0..n)
        .map(|i| {
            let size = rng.random_range(2..=max_words);
            let mut words = pool.clone();
            words.shuffle(rng);
            let entries = words
                .into_iter()
                .take(size)
                .map(|s| (w(&s), rng.random_range(1..=50u64)));
            Dictionary::from_counts(&format!("d{i}"), entries).unwrap()
        })
        .collect();
    Corpus::new(dictionaries).unwrap()
}

/// Uniform simplex draw, independent of the library sampler.
pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let sum: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / sum).collect()
}

/// Random history over the corpus vocabulary with multinomial-like counts.
pub fn random_history(rng: &mut ChaCha8Rng, corpus: &Corpus, max_guesses: usize) -> GuessHistory {
    let population = rng.random_range(20..=2000u64);
    let mut vocab = corpus.union_vocabulary().to_vec();
    vocab.shuffle(rng);
    let guesses = rng.random_range(1..=max_guesses.min(vocab.len()));
    let q = random_simplex(rng, corpus.len());
    let mut history = GuessHistory::new(population).unwrap();
    let mut left = population;
    for word in vocab.into_iter().take(guesses) {
        let p: f64 = corpus
            .probabilities::<f64>(word.as_str())
            .iter()
            .zip(&q)
            .map(|(a, b)| a * b)
            .sum();
        let expected = p * population as f64;
        let jitter = rng.random_range(0.5..1.5);
        let hits = ((expected * jitter).round() as u64).min(left);
        left -= hits;
        history.push(word, hits).unwrap();
    }
    history
}

/// Every point of the simplex grid with the given number of divisions.
pub fn simplex_grid(n: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn rec(
        n: usize,
        left: usize,
        divisions: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(
                prefix
                    .iter()
                    .map(|&k| k as f64 / divisions as f64)
                    .collect(),
            );
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(n, left - k, divisions, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, divisions, divisions, &mut Vec::new(), &mut out);
    out
}

/// Maximum of the log-likelihood over the simplex grid.
pub fn grid_max_log_likelihood(
    objective: &Objective,
    n: usize,
    divisions: usize,
) -> (f64, Vec<f64>) {
    simplex_grid(n, divisions)
        .into_iter()
        .map(|q| (objective.value_at(&q).unwrap(), q))
        .fold((f64::NEG_INFINITY, Vec::new()), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        })
}

/// Smallest Euclidean distance from `v` to a simplex grid point, for n = 2
/// or 3, pitch `1 / divisions`.
pub fn grid_min_distance(v: &[f64], divisions: usize) -> f64 {
    let pitch = 1.0 / divisions as f64;
    let mut best = f64::INFINITY;
    match v.len() {
        2 => {
            for a in 0..=divisions {
                let x = a as f64 * pitch;
                let d = (x - v[0]).powi(2) + (1.0 - x - v[1]).powi(2);
                best = best.min(d);
            }
        }
        3 => {
            for a in 0..=divisions {
                let x = a as f64 * pitch;
                let dx = (x - v[0]).powi(2);
                for b in 0..=(divisions - a) {
                    let y = b as f64 * pitch;
                    let z = 1.0 - x - y;
                    let d = dx + (y - v[1]).powi(2) + (z - v[2]).powi(2);
                    best = best.min(d);
                }
            }
        }
        _ => panic!("grid search only for n = 2, 3"),
    }
    best.sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Central finite-difference gradient of `f` at `x`.
pub fn finite_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[i] += h;
            down[i] -= h;
            (f(&up) - f(&down)) / (2.0 * h)
        })
        .collect()
}

/// The password set a dictionary describes, user by user.
pub fn expand(d: &Dictionary) -> PasswordSet {
    PasswordSet::from_passwords(
        d.entries()
            .iter()
            .flat_map(|(w, c)| std::iter::repeat_n(w.clone(), *c as usize))
            .collect(),
    )
    .unwrap()
}

/// Runs an attack and checks the baseline-dominance and monotonicity
/// invariants every trace must satisfy.
pub fn checked_attack(
    corpus: &Corpus,
    ps: &PasswordSet,
    init: InitPolicy,
    guess: GuessPolicy,
    budget: usize,
    cfg: &DescentConfig,
    seed: u64,
) -> AttackTrace {
    let trace = run_attack(corpus, ps, init, guess, budget, cfg, seed).unwrap();
    assert_trace_invariants(&trace, ps);
    trace
}

pub fn assert_trace_invariants(trace: &AttackTrace, ps: &PasswordSet) {
    let baseline = optimal_baseline(ps, trace.budget.max(1));
    let mut running = 0;
    let mut seen = std::collections::HashSet::new();
    for (j, rec) in trace.records.iter().enumerate() {
        running += rec.successes;
        assert_eq!(rec.cumulative, running, "cumulative is the running sum");
        assert!(
            rec.cumulative <= baseline[j],
            "guess {j} beats the optimal baseline"
        );
        assert!(
            seen.insert(rec.word.clone()),
            "word {} guessed twice",
            rec.word
        );
        let sum: f64 = rec.estimate.as_slice().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9 && rec.estimate.as_slice().iter().all(|q| *q >= 0.0));
    }
    assert!(running <= ps.population());
}

pub fn weights(q: &[f64]) -> MixtureWeights {
    MixtureWeights::new(q.to_vec()).unwrap()
}

/// Direct evaluation of the floored log-likelihood from per-dictionary
/// probabilities, written without the library's cached objective.
pub fn reference_log_likelihood(
    corpus: &Corpus,
    q: &[f64],
    history: &GuessHistory,
    floor: f64,
) -> f64 {
    let mut guessed_mass = 0.0;
    let mut total = 0.0;
    for (word, hits) in history.observations() {
        let mass: f64 = corpus
            .dictionaries()
            .iter()
            .zip(q)
            .map(|(d, qi)| qi * d.probability_of::<f64>(word.as_str()))
            .sum();
        guessed_mass += mass;
        total += *hits as f64 * mass.max(floor).ln();
    }
    let rest = (history.population() - history.total_successes()) as f64;
    total + rest * (1.0 - guessed_mass).max(floor).ln()
}
