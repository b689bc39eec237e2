use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::output::{csv_err, csv_writer, finish, format_real, write_text};
use super::CliError;
use crate::bandit::initialize_weights;
use crate::dictionary::{Corpus, Dictionary, Word};
use crate::mle::{estimate_traced, GuessHistory};
use crate::simulator::{
    average_traces, compose_password_set, optimal_baseline, oracle_count, run_attack, AttackTrace,
    PasswordSet,
};

pub fn load_corpus(config: &ExperimentConfig) -> Result<Corpus, CliError> {
    let dictionaries = config
        .dictionaries
        .iter()
        .enumerate()
        .map(|(i, src)| {
            let file = File::open(&src.path).map_err(|e| CliError::io(&src.path, e))?;
            Dictionary::load_frequency_list(&src.name, BufReader::new(file)).map_err(|e| {
                CliError::Config {
                    path: format!("dictionary[{i}].path"),
                    message: format!("{}: {e}", src.path.display()),
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Corpus::new(dictionaries)?)
}

/// Composes the configured mixture or reads the configured password file.
pub fn load_password_set(
    config: &ExperimentConfig,
    corpus: &Corpus,
) -> Result<PasswordSet, CliError> {
    if let Some(path) = &config.composition.password_set {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let mut passwords = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| CliError::io(path, e))?;
            if line.is_empty() {
                continue;
            }
            passwords.push(Word::new(line).map_err(|e| CliError::Config {
                path: "composition.password_set".into(),
                message: format!("{} line {}: {e}", path.display(), i + 1),
            })?);
        }
        return PasswordSet::from_passwords(passwords).map_err(|_| CliError::Config {
            path: "composition.password_set".into(),
            message: format!("{} contains no passwords", path.display()),
        });
    }
    let proportions = config
        .true_proportions()?
        .expect("validated config has proportions when it has no password file");
    let users = config
        .composition
        .users
        .expect("validated with proportions");
    Ok(compose_password_set(
        corpus,
        &proportions,
        users,
        config.composition.seed,
    )?)
}

fn output_dir(config: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let dir = config.output.dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

fn qhat_headers(n: usize) -> impl Iterator<Item = String> {
    (1..=n).map(|i| format!("qhat_{i}"))
}

#[derive(Serialize)]
struct CompositionMetadata {
    users: u64,
    seed: u64,
    dictionaries: Vec<String>,
    proportions: Vec<f64>,
    counts: Vec<u64>,
}

/// Writes `passwords.txt` (one password per user) and
/// `passwords.meta.toml`.
pub fn cmd_compose(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    if config.composition.proportions.is_none() {
        return Err(CliError::Config {
            path: "composition.proportions".into(),
            message: "compose needs proportions and users".into(),
        });
    }
    let corpus = load_corpus(config)?;
    let ps = load_password_set(config, &corpus)?;
    let dir = output_dir(config)?;

    let mut text = String::with_capacity(ps.len() * 8);
    for pw in ps.passwords() {
        text.push_str(pw.as_str());
        text.push('\n');
    }
    let passwords = write_text(&dir.join("passwords.txt"), &text)?;

    let meta = CompositionMetadata {
        users: ps.population(),
        seed: config.composition.seed,
        dictionaries: config.dictionaries.iter().map(|d| d.name.clone()).collect(),
        proportions: ps
            .true_mixture()
            .map(|q| q.as_slice().to_vec())
            .unwrap_or_default(),
        counts: ps.source_counts().unwrap_or_default(),
    };
    let meta_text = toml::to_string(&meta).expect("metadata serializes");
    let meta = write_text(&dir.join("passwords.meta.toml"), &meta_text)?;
    eprintln!(
        "composed {} passwords, per-source counts {:?}",
        ps.len(),
        ps.source_counts().unwrap_or_default()
    );
    Ok(vec![passwords, meta])
}

/// Runs `attack.runs` seeded attacks and writes `trace.csv` and
/// `summary.csv`.
pub fn cmd_attack(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let corpus = load_corpus(config)?;
    let ps = load_password_set(config, &corpus)?;
    let cfg = config.descent.resolve();
    let budget = config.attack.guesses;
    let seed = config.attack.seed;
    let policies = config.policies;

    let traces: Vec<AttackTrace> = (0..config.attack.runs)
        .into_par_iter()
        .map(|run| {
            run_attack(
                &corpus,
                &ps,
                policies.init,
                policies.guess,
                budget,
                &cfg,
                seed.wrapping_add(run as u64),
            )
        })
        .collect::<Result<_, _>>()?;

    let baseline = optimal_baseline(&ps, budget);
    for trace in &traces {
        let within = trace
            .cumulative_curve()
            .iter()
            .zip(&baseline)
            .all(|(c, b)| c <= b);
        if !within {
            return Err(CliError::Internal(crate::error::Error::Invariant(
                "attack exceeded the optimal baseline".into(),
            )));
        }
    }
    let dir = output_dir(config)?;

    let trace_path = dir.join("trace.csv");
    let mut w = csv_writer(&trace_path)?;
    let header: Vec<String> = ["run", "guess_index", "word", "successes", "cumulative"]
        .into_iter()
        .map(String::from)
        .chain(qhat_headers(corpus.len()))
        .collect();
    w.write_record(&header)
        .map_err(|e| csv_err(&trace_path, e))?;
    for (run, trace) in traces.iter().enumerate() {
        for (j, rec) in trace.records.iter().enumerate() {
            let mut row = vec![
                run.to_string(),
                (j + 1).to_string(),
                rec.word.to_string(),
                rec.successes.to_string(),
                rec.cumulative.to_string(),
            ];
            row.extend(rec.estimate.as_slice().iter().map(|q| format_real(*q)));
            w.write_record(&row).map_err(|e| csv_err(&trace_path, e))?;
        }
    }
    let trace_path = finish(&trace_path, w)?;

    let means = average_traces(&traces)?;
    let summary_path = dir.join("summary.csv");
    let mut w = csv_writer(&summary_path)?;
    w.write_record(["guess_index", "mean_cumulative", "baseline"])
        .map_err(|e| csv_err(&summary_path, e))?;
    for (j, (mean, best)) in means.iter().zip(&baseline).enumerate() {
        w.write_record([(j + 1).to_string(), format_real(*mean), best.to_string()])
            .map_err(|e| csv_err(&summary_path, e))?;
    }
    let summary_path = finish(&summary_path, w)?;

    eprintln!(
        "{} runs of {}/{}: mean {} vs optimal {} after {} guesses",
        traces.len(),
        policies.init,
        policies.guess,
        format_real(means.last().copied().unwrap_or(0.0)),
        baseline.last().copied().unwrap_or(0),
        budget
    );
    Ok(vec![trace_path, summary_path])
}

/// Queries the oracle for a fixed guess list and writes the ascent
/// trajectory to `estimate.csv`.
pub fn cmd_estimate(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let words = &config.estimate.words;
    if words.is_empty() {
        return Err(CliError::Config {
            path: "estimate.words".into(),
            message: "at least one guess is required".into(),
        });
    }
    let mut seen = HashSet::new();
    let mut guesses = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let word = Word::new(w.as_str()).map_err(|e| CliError::Config {
            path: format!("estimate.words[{i}]"),
            message: e.to_string(),
        })?;
        if !seen.insert(word.clone()) {
            return Err(CliError::Config {
                path: format!("estimate.words[{i}]"),
                message: format!("duplicate guess {w:?}"),
            });
        }
        guesses.push(word);
    }

    let corpus = load_corpus(config)?;
    let ps = load_password_set(config, &corpus)?;
    let observations = guesses.into_iter().map(|w| {
        let hits = oracle_count(&ps, w.as_str());
        (w, hits)
    });
    let history = GuessHistory::with_observations(ps.population(), observations)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.attack.seed);
    let init = initialize_weights(config.policies.init, corpus.len(), None, &mut rng);
    let cfg = config.descent.resolve();
    let mut rows = Vec::new();
    let est = estimate_traced(&corpus, &history, &init, &cfg, |step, q, ll| {
        rows.push((step, q.clone(), ll));
    })?;

    let dir = output_dir(config)?;
    let path = dir.join("estimate.csv");
    let mut w = csv_writer(&path)?;
    let header: Vec<String> = std::iter::once("step".to_string())
        .chain(qhat_headers(corpus.len()))
        .chain(std::iter::once("loglik".to_string()))
        .collect();
    w.write_record(&header).map_err(|e| csv_err(&path, e))?;
    for (step, q, ll) in &rows {
        let mut row = vec![step.to_string()];
        row.extend(q.as_slice().iter().map(|x| format_real(*x)));
        row.push(format_real(*ll));
        w.write_record(&row).map_err(|e| csv_err(&path, e))?;
    }
    let path = finish(&path, w)?;
    let names: Vec<&str> = corpus.dictionaries().iter().map(|d| d.name()).collect();
    eprintln!(
        "estimate after {} steps: {:?} over {:?}",
        est.steps,
        est.weights.as_slice(),
        names
    );
    Ok(vec![path])
}

/// Writes the optimal-order curve to `baseline.csv`.
pub fn cmd_baseline(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let corpus = load_corpus(config)?;
    let ps = load_password_set(config, &corpus)?;
    let baseline = optimal_baseline(&ps, config.attack.guesses);
    let dir = output_dir(config)?;
    let path = dir.join("baseline.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(["guess_index", "cumulative"])
        .map_err(|e| csv_err(&path, e))?;
    for (j, c) in baseline.iter().enumerate() {
        w.write_record([(j + 1).to_string(), c.to_string()])
            .map_err(|e| csv_err(&path, e))?;
    }
    Ok(vec![finish(&path, w)?])
}
