//! Multi-armed bandit password guessing.
//!
//! Each dictionary is an arm. After every guess the mixture of dictionaries
//! that best explains the observed successes is re-estimated by projected
//! gradient ascent on the probability simplex, and the estimate drives the
//! choice of the next guess.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`). The generic
//! types live in their modules; the crate root names the `f64` versions
//! directly and the `f32` versions with an `F32` suffix.

pub mod bandit;
pub mod cli;
pub mod dictionary;
pub mod error;
pub mod mle;
pub mod scalar;
pub mod simulator;
pub mod synthetic;

pub use bandit::{initialize_weights, GuessPolicy, InitPolicy};
pub use dictionary::{Corpus, Dictionary, Word};
pub use error::{Error, Result};
pub use mle::{
    estimate, estimate_traced, gradient, log_likelihood, mixture_probability, project_to_simplex,
    GuessHistory,
};
pub use scalar::Scalar;
pub use simulator::{
    average_traces, compose_password_set, optimal_baseline, oracle_count, run_attack,
};

pub type MixtureWeights = mle::MixtureWeights<f64>;
pub type DescentConfig = mle::DescentConfig<f64>;
pub type Estimate = mle::Estimate<f64>;
pub type Objective = mle::Objective<f64>;
pub type BanditState = bandit::BanditState<f64>;
pub type PasswordSet = simulator::PasswordSet<f64>;
pub type AttackTrace = simulator::AttackTrace<f64>;
pub type TraceRecord = simulator::TraceRecord<f64>;

pub type MixtureWeightsF32 = mle::MixtureWeights<f32>;
pub type DescentConfigF32 = mle::DescentConfig<f32>;
pub type EstimateF32 = mle::Estimate<f32>;
pub type ObjectiveF32 = mle::Objective<f32>;
pub type BanditStateF32 = bandit::BanditState<f32>;
pub type PasswordSetF32 = simulator::PasswordSet<f32>;
pub type AttackTraceF32 = simulator::AttackTrace<f32>;
pub type TraceRecordF32 = simulator::TraceRecord<f32>;
