//! Experiment configuration file.
//!
//! TOML with one section per concern. Relative paths are resolved against
//! the directory holding the config file.
//!
//! ```toml
//! [[dictionary]]
//! name = "forum"
//! path = "dicts/forum.tsv"
//!
//! [[dictionary]]
//! name = "webmail"
//! path = "dicts/webmail.tsv"
//!
//! [composition]          # or: password_set = "passwords.txt"
//! proportions = [0.7, 0.3]
//! users = 10000
//! seed = 1
//!
//! [policies]
//! init = "average"       # random | average | best
//! guess = "by-q"         # random-dict | best-dict | by-q
//!
//! [attack]
//! guesses = 100
//! runs = 50
//! seed = 0
//!
//! [descent]              # any subset of the descent settings
//! max_steps = 100
//!
//! [estimate]
//! words = ["123456"]
//!
//! [output]
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::bandit::{GuessPolicy, InitPolicy};
use crate::mle::{DescentConfig, MixtureWeights};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "dictionary")]
    pub dictionaries: Vec<DictionarySource>,
    pub composition: Composition,
    #[serde(default)]
    pub policies: Policies,
    #[serde(default)]
    pub attack: AttackSettings,
    #[serde(default)]
    pub descent: DescentOverrides,
    #[serde(default)]
    pub estimate: EstimateSettings,
    #[serde(default)]
    pub output: OutputSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionarySource {
    pub name: String,
    pub path: PathBuf,
}

/// Either a synthetic mixture (`proportions`, `users`, `seed`) or an
/// existing password-set file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Composition {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proportions: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub users: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub password_set: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Policies {
    pub init: InitPolicy,
    pub guess: GuessPolicy,
}

impl Default for Policies {
    fn default() -> Self {
        Policies {
            init: InitPolicy::Average,
            guess: GuessPolicy::ByQ,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttackSettings {
    /// Guess budget `m`.
    pub guesses: usize,
    pub runs: usize,
    /// Run `r` (0-based) is seeded with `seed + r`.
    pub seed: u64,
}

impl Default for AttackSettings {
    fn default() -> Self {
        AttackSettings {
            guesses: 100,
            runs: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backtrack_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_tol: Option<f64>,
}

impl DescentOverrides {
    pub fn resolve(&self) -> DescentConfig {
        let d = DescentConfig::default();
        DescentConfig {
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            initial_step: self.initial_step.unwrap_or(d.initial_step),
            backtrack_factor: self.backtrack_factor.unwrap_or(d.backtrack_factor),
            min_step: self.min_step.unwrap_or(d.min_step),
            probability_floor: self.probability_floor.unwrap_or(d.probability_floor),
            convergence_tol: self.convergence_tol.unwrap_or(d.convergence_tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSettings {
    #[serde(default)]
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: PathBuf,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings { dir: "out".into() }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub runs: Option<usize>,
    pub guesses: Option<usize>,
    pub init: Option<InitPolicy>,
    pub guess: Option<GuessPolicy>,
    pub words: Vec<String>,
}

fn config_error(path: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = toml::Deserializer::parse(text).map_err(|e| config_error("", e.to_string()))?;
        let config: ExperimentConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| config_error(&e.path().to_string(), e.inner().message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Reads the file and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.rebase(base);
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        for d in &mut self.dictionaries {
            d.path = base.join(&d.path);
        }
        if let Some(p) = &mut self.composition.password_set {
            *p = base.join(&*p);
        }
        self.output.dir = base.join(&self.output.dir);
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<(), CliError> {
        if let Some(seed) = overrides.seed {
            self.composition.seed = seed;
            self.attack.seed = seed;
        }
        if let Some(out) = &overrides.out {
            self.output.dir = out.clone();
        }
        if let Some(runs) = overrides.runs {
            self.attack.runs = runs;
        }
        if let Some(m) = overrides.guesses {
            self.attack.guesses = m;
        }
        if let Some(init) = overrides.init {
            self.policies.init = init;
        }
        if let Some(guess) = overrides.guess {
            self.policies.guess = guess;
        }
        if !overrides.words.is_empty() {
            self.estimate.words = overrides.words.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.dictionaries.is_empty() {
            return Err(config_error(
                "dictionary",
                "at least one dictionary is required",
            ));
        }
        for (i, d) in self.dictionaries.iter().enumerate() {
            if d.name.is_empty() {
                return Err(config_error(
                    &format!("dictionary[{i}].name"),
                    "must not be empty",
                ));
            }
            if self.dictionaries[..i].iter().any(|o| o.name == d.name) {
                return Err(config_error(
                    &format!("dictionary[{i}].name"),
                    format!("duplicate name {:?}", d.name),
                ));
            }
        }
        let c = &self.composition;
        match (&c.proportions, c.users, &c.password_set) {
            (Some(_), Some(_), None) => {
                self.true_proportions()?;
            }
            (None, None, Some(_)) => {}
            (Some(_), None, None) => {
                return Err(config_error(
                    "composition.users",
                    "required with proportions",
                ))
            }
            (None, Some(_), None) => {
                return Err(config_error(
                    "composition.proportions",
                    "required with users",
                ))
            }
            (None, None, None) => {
                return Err(config_error(
                    "composition",
                    "give either proportions and users or password_set",
                ))
            }
            _ => {
                return Err(config_error(
                    "composition.password_set",
                    "cannot be combined with proportions/users",
                ))
            }
        }
        if c.users == Some(0) {
            return Err(config_error("composition.users", "must be at least 1"));
        }
        if self.attack.guesses == 0 {
            return Err(config_error("attack.guesses", "must be at least 1"));
        }
        if self.attack.runs == 0 {
            return Err(config_error("attack.runs", "must be at least 1"));
        }
        self.descent
            .resolve()
            .validate()
            .map_err(|e| config_error("descent", e.to_string()))?;
        Ok(())
    }

    /// Mixture proportions, if the password set is synthetic.
    pub fn true_proportions(&self) -> Result<Option<MixtureWeights>, CliError> {
        let Some(p) = &self.composition.proportions else {
            return Ok(None);
        };
        if p.len() != self.dictionaries.len() {
            return Err(config_error(
                "composition.proportions",
                format!(
                    "{} proportions for {} dictionaries",
                    p.len(),
                    self.dictionaries.len()
                ),
            ));
        }
        MixtureWeights::new(p.clone())
            .map(Some)
            .map_err(|e| config_error("composition.proportions", e.to_string()))
    }
}
