use super::{dot, project_to_simplex, GuessHistory, MixtureWeights, Objective};
use crate::dictionary::Corpus;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Settings for projected gradient ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig<T: Scalar = f64> {
    pub max_steps: usize,
    pub initial_step: T,
    /// Step shrink factor while backtracking, in (0, 1).
    pub backtrack_factor: T,
    /// Backtracking gives up once a trial move is smaller than this in
    /// every coordinate.
    pub min_step: T,
    /// Floor applied to probabilities before taking logarithms.
    pub probability_floor: T,
    /// Stop once an accepted step improves the log-likelihood by less.
    pub convergence_tol: T,
}

impl<T: Scalar> Default for DescentConfig<T> {
    fn default() -> Self {
        DescentConfig {
            max_steps: 100,
            initial_step: T::lit(0.1),
            backtrack_factor: T::lit(0.5),
            min_step: T::lit(1e-12),
            probability_floor: T::lit(1e-12),
            convergence_tol: T::lit(1e-10),
        }
    }
}

impl<T: Scalar> DescentConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: T| x.is_finite() && x > T::zero();
        let fail = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if self.max_steps == 0 {
            return fail("max_steps must be positive");
        }
        if !positive(self.initial_step) {
            return fail("initial_step must be positive");
        }
        if !(positive(self.backtrack_factor) && self.backtrack_factor < T::one()) {
            return fail("backtrack_factor must lie in (0, 1)");
        }
        if !positive(self.min_step) {
            return fail("min_step must be positive");
        }
        if !positive(self.probability_floor) {
            return fail("probability_floor must be positive");
        }
        if !positive(self.convergence_tol) {
            return fail("convergence_tol must be positive");
        }
        Ok(())
    }
}

/// Result of [`estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<T: Scalar = f64> {
    pub weights: MixtureWeights<T>,
    pub log_likelihood: T,
    /// Number of accepted ascent steps.
    pub steps: usize,
}

/// Maximizes the log-likelihood over the simplex starting from `init`.
pub fn estimate<T: Scalar>(
    corpus: &Corpus,
    history: &GuessHistory,
    init: &MixtureWeights<T>,
    cfg: &DescentConfig<T>,
) -> Result<Estimate<T>> {
    estimate_traced(corpus, history, init, cfg, |_, _, _| {})
}

/// Like [`estimate`], calling `observer(step, weights, log_likelihood)` for
/// the starting point (step 0) and after every accepted step.
pub fn estimate_traced<T, F>(
    corpus: &Corpus,
    history: &GuessHistory,
    init: &MixtureWeights<T>,
    cfg: &DescentConfig<T>,
    mut observer: F,
) -> Result<Estimate<T>>
where
    T: Scalar,
    F: FnMut(usize, &MixtureWeights<T>, T),
{
    cfg.validate()?;
    if init.len() != corpus.len() {
        return Err(Error::DimensionMismatch {
            expected: corpus.len(),
            found: init.len(),
        });
    }
    let objective = Objective::new(corpus, history, cfg.probability_floor);
    let max_step = T::one() / cfg.min_step;

    let mut current = init.clone();
    let mut value = objective.value(&current)?;
    let mut step = cfg.initial_step;
    let mut steps = 0;
    let mut last: Option<(Vec<T>, Vec<T>)> = None;
    observer(0, &current, value);

    while steps < cfg.max_steps {
        let grad = objective.gradient(&current)?;
        // Barzilai-Borwein guess from the last accepted move; backtracking
        // below still guarantees the ascent never goes downhill
        if let Some((prev_w, prev_g)) = &last {
            let s: Vec<T> = current
                .as_slice()
                .iter()
                .zip(prev_w)
                .map(|(a, b)| *a - *b)
                .collect();
            let y: Vec<T> = grad.iter().zip(prev_g).map(|(a, b)| *a - *b).collect();
            let curvature = -dot(&s, &y);
            if curvature > T::zero() {
                let bb = dot(&s, &s) / curvature;
                if bb.is_finite() {
                    step = bb.max(cfg.min_step).min(max_step);
                }
            }
        }
        let mut trial = step;
        let mut accepted = None;
        loop {
            let moved: Vec<T> = current
                .as_slice()
                .iter()
                .zip(&grad)
                .map(|(q, g)| *q + trial * *g)
                .collect();
            let candidate = project_to_simplex(&moved)?;
            if candidate.as_slice() == current.as_slice() {
                // projected gradient vanishes: stationary for every step size
                break;
            }
            let candidate_value = objective.value(&candidate)?;
            if candidate_value >= value {
                accepted = Some((candidate, candidate_value));
                break;
            }
            // floored terms can make the gradient enormous, so judge the
            // move rather than the multiplier
            if candidate.max_abs_diff(&current) < cfg.min_step {
                break;
            }
            trial = trial * cfg.backtrack_factor;
        }

        let Some((candidate, candidate_value)) = accepted else {
            break;
        };
        let improvement = candidate_value - value;
        last = Some((current.as_slice().to_vec(), grad));
        current = candidate;
        value = candidate_value;
        steps += 1;
        observer(steps, &current, value);
        if improvement < cfg.convergence_tol {
            break;
        }
        // without curvature information, try a longer step next time
        step = (trial / cfg.backtrack_factor).min(max_step);
    }

    Ok(Estimate {
        weights: current,
        log_likelihood: value,
        steps,
    })
}
