//! Maximum likelihood estimation of mixture weights.
//!
//! The target password set is modelled as a mixture of the corpus
//! dictionaries with weights `q` on the probability simplex. A word `k` then
//! appears with probability `Q_k = sum_i q_i p_i(k)`. After guesses
//! `k_1..k_m` compromised `N_1..N_m` of `N` users, the log-likelihood of `q`
//! (dropping the multinomial coefficient, which does not depend on `q`) is
//!
//! ```text
//! sum_j N_j ln Q_{k_j} + (N - sum_j N_j) ln(1 - sum_j Q_{k_j})
//! ```
//!
//! Both logarithms are taken of `max(x, floor)` so the objective stays finite
//! on the whole simplex. The objective is concave in `q` and is maximized by
//! projected gradient ascent ([`estimate`]).

mod descent;
mod projection;

pub use descent::{estimate, estimate_traced, DescentConfig, Estimate};
pub use projection::project_to_simplex;

use std::collections::HashSet;

use crate::dictionary::{Corpus, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point on the probability simplex: `q_i >= 0`, `sum q_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureWeights<T: Scalar = f64> {
    q: Vec<T>,
}

impl<T: Scalar> MixtureWeights<T> {
    pub fn new(q: Vec<T>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::EmptyInput);
        }
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(x) = q.iter().find(|x| **x < T::zero()) {
            return Err(Error::NotOnSimplex(format!("negative component {x}")));
        }
        let sum: T = q.iter().copied().sum();
        if (sum - T::one()).abs() > T::simplex_tolerance() {
            return Err(Error::NotOnSimplex(format!("components sum to {sum}")));
        }
        Ok(MixtureWeights { q })
    }

    /// The barycenter `(1/n, ..., 1/n)`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "simplex dimension must be at least 1");
        let v = T::one() / T::from_usize(n).unwrap();
        MixtureWeights { q: vec![v; n] }
    }

    /// Normalizes non-negative finite values with a positive sum.
    pub(crate) fn normalized(mut q: Vec<T>) -> Self {
        let sum: T = q.iter().copied().sum();
        debug_assert!(sum > T::zero());
        for x in &mut q {
            *x = *x / sum;
        }
        MixtureWeights { q }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.q
    }

    pub fn into_vec(self) -> Vec<T> {
        self.q
    }

    /// Index of the largest weight; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, x) in self.q.iter().enumerate() {
            if *x > self.q[best] {
                best = i;
            }
        }
        best
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.q
            .iter()
            .zip(&other.q)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T: Scalar> std::ops::Index<usize> for MixtureWeights<T> {
    type Output = T;

    fn index(&self, index: usize) -> &T {
        &self.q[index]
    }
}

/// Observations `(k_j, N_j)` made against `N` users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessHistory {
    population: u64,
    observations: Vec<(Word, u64)>,
    seen: HashSet<Word>,
    total_successes: u64,
}

impl GuessHistory {
    pub fn new(population: u64) -> Result<Self> {
        if population == 0 {
            return Err(Error::InvalidHistory("population must be positive".into()));
        }
        Ok(GuessHistory {
            population,
            observations: Vec::new(),
            seen: HashSet::new(),
            total_successes: 0,
        })
    }

    pub fn with_observations(
        population: u64,
        observations: impl IntoIterator<Item = (Word, u64)>,
    ) -> Result<Self> {
        let mut h = Self::new(population)?;
        for (word, successes) in observations {
            h.push(word, successes)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, word: Word, successes: u64) -> Result<()> {
        if self.seen.contains(&word) {
            return Err(Error::DuplicateGuess(word.into_string()));
        }
        let remaining = self.remaining();
        if successes > remaining {
            return Err(Error::SuccessExceedsPopulation {
                successes,
                remaining,
            });
        }
        self.seen.insert(word.clone());
        self.observations.push((word, successes));
        self.total_successes += successes;
        Ok(())
    }

    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn observations(&self) -> &[(Word, u64)] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.seen.contains(word)
    }

    pub fn total_successes(&self) -> u64 {
        self.total_successes
    }

    /// Users not yet compromised.
    pub fn remaining(&self) -> u64 {
        self.population - self.total_successes
    }
}

/// The floored log-likelihood with per-observation probabilities cached.
#[derive(Debug, Clone)]
pub struct Objective<T: Scalar = f64> {
    n: usize,
    /// rows[j][i] = p_i(k_j)
    rows: Vec<Vec<T>>,
    successes: Vec<T>,
    remainder_users: T,
    /// remainder_coeffs[i] = sum_j p_i(k_j)
    remainder_coeffs: Vec<T>,
    floor: T,
}

impl<T: Scalar> Objective<T> {
    pub fn new(corpus: &Corpus, history: &GuessHistory, floor: T) -> Self {
        let n = corpus.len();
        let rows: Vec<Vec<T>> = history
            .observations()
            .iter()
            .map(|(w, _)| corpus.probabilities(w.as_str()))
            .collect();
        let mut remainder_coeffs = vec![T::zero(); n];
        for row in &rows {
            for (acc, p) in remainder_coeffs.iter_mut().zip(row) {
                *acc = *acc + *p;
            }
        }
        Objective {
            n,
            rows,
            successes: history
                .observations()
                .iter()
                .map(|(_, s)| T::from_count(*s))
                .collect(),
            remainder_users: T::from_count(history.remaining()),
            remainder_coeffs,
            floor,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    fn check(&self, q: &[T]) -> Result<()> {
        if q.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.len(),
            });
        }
        Ok(())
    }

    fn remainder_mass(&self, q: &[T]) -> T {
        T::one() - dot(&self.remainder_coeffs, q)
    }

    /// Log-likelihood at `q`. `q` need not lie on the simplex, which lets
    /// finite-difference checks step off it.
    pub fn value_at(&self, q: &[T]) -> Result<T> {
        self.check(q)?;
        let mut total = T::zero();
        for (row, &nj) in self.rows.iter().zip(&self.successes) {
            if nj > T::zero() {
                total = total + nj * dot(row, q).max(self.floor).ln();
            }
        }
        if self.remainder_users > T::zero() {
            total = total + self.remainder_users * self.remainder_mass(q).max(self.floor).ln();
        }
        Ok(total)
    }

    /// Gradient of [`Objective::value_at`]. Where a floor is active the
    /// floored value is kept in the denominator, so the direction still
    /// points toward raising the floored probability.
    pub fn gradient_at(&self, q: &[T]) -> Result<Vec<T>> {
        self.check(q)?;
        let mut grad = vec![T::zero(); self.n];
        for (row, &nj) in self.rows.iter().zip(&self.successes) {
            if nj > T::zero() {
                let scale = nj / dot(row, q).max(self.floor);
                for (g, p) in grad.iter_mut().zip(row) {
                    *g = *g + scale * *p;
                }
            }
        }
        if self.remainder_users > T::zero() {
            let scale = self.remainder_users / self.remainder_mass(q).max(self.floor);
            for (g, c) in grad.iter_mut().zip(&self.remainder_coeffs) {
                *g = *g - scale * *c;
            }
        }
        Ok(grad)
    }

    pub fn value(&self, w: &MixtureWeights<T>) -> Result<T> {
        self.value_at(w.as_slice())
    }

    pub fn gradient(&self, w: &MixtureWeights<T>) -> Result<Vec<T>> {
        self.gradient_at(w.as_slice())
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

fn check_dimension<T: Scalar>(corpus: &Corpus, w: &MixtureWeights<T>) -> Result<()> {
    if w.len() != corpus.len() {
        return Err(Error::DimensionMismatch {
            expected: corpus.len(),
            found: w.len(),
        });
    }
    Ok(())
}

/// `Q_k = sum_i q_i p_i(k)`.
pub fn mixture_probability<T: Scalar>(
    corpus: &Corpus,
    weights: &MixtureWeights<T>,
    word: &str,
) -> Result<T> {
    check_dimension(corpus, weights)?;
    Ok(dot(&corpus.probabilities(word), weights.as_slice()))
}

pub fn log_likelihood<T: Scalar>(
    corpus: &Corpus,
    weights: &MixtureWeights<T>,
    history: &GuessHistory,
    floor: T,
) -> Result<T> {
    check_dimension(corpus, weights)?;
    Objective::new(corpus, history, floor).value(weights)
}

pub fn gradient<T: Scalar>(
    corpus: &Corpus,
    weights: &MixtureWeights<T>,
    history: &GuessHistory,
    floor: T,
) -> Result<Vec<T>> {
    check_dimension(corpus, weights)?;
    Objective::new(corpus, history, floor).gradient(weights)
}
