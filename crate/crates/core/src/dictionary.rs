//! Word-frequency dictionaries and the corpus of dictionaries a guesser draws
//! from.
//!
//! A [`Dictionary`] keeps its entries sorted by count descending, ties broken
//! by ascending byte order of the word, so rank 1 is always the most popular
//! word. Probabilities are `count / total_count`, where `total_count` is the
//! number of users behind the list rather than the number of distinct words.
//!
//! The on-disk frequency-list format is one `word<TAB>count` per line with
//! `\n` line endings and no header. Blank lines are ignored.

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A candidate password. Compared byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(String);

impl Word {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() || token.contains(['\t', '\n']) {
            return Err(Error::InvalidWord(token));
        }
        Ok(Word(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Word {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Word {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for Word {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Word::new(value)
    }
}

/// A named, rank-ordered word-frequency distribution.
#[derive(Debug, Clone)]
pub struct Dictionary {
    name: String,
    entries: Vec<(Word, u64)>,
    total_count: u64,
    /// word -> 1-based rank
    rank_index: HashMap<Word, usize>,
}

impl PartialEq for Dictionary {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.entries == other.entries
    }
}

impl Eq for Dictionary {}

impl Dictionary {
    /// Builds a dictionary from `(word, count, line)` triples. `line` is only
    /// used for error reporting.
    fn from_numbered_entries(
        name: &str,
        raw: impl IntoIterator<Item = (Word, u64, usize)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for (word, count, line) in raw {
            if count == 0 {
                return Err(Error::NonPositiveCount { line });
            }
            if !seen.insert(word.clone()) {
                return Err(Error::DuplicateWord {
                    line,
                    word: word.into_string(),
                });
            }
            entries.push((word, count));
        }
        if entries.is_empty() {
            return Err(Error::EmptyDictionary {
                name: name.to_string(),
            });
        }
        entries.sort_by(|(wa, ca), (wb, cb)| cb.cmp(ca).then_with(|| wa.cmp(wb)));
        let total_count = entries.iter().map(|(_, c)| *c).sum();
        let rank_index = entries
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i + 1))
            .collect();
        Ok(Dictionary {
            name: name.to_string(),
            entries,
            total_count,
            rank_index,
        })
    }

    /// Builds a dictionary from explicit `(word, count)` pairs in any order.
    pub fn from_counts(name: &str, counts: impl IntoIterator<Item = (Word, u64)>) -> Result<Self> {
        Self::from_numbered_entries(
            name,
            counts
                .into_iter()
                .enumerate()
                .map(|(i, (w, c))| (w, c, i + 1)),
        )
    }

    /// Parses a frequency list (`word<TAB>count` per line).
    pub fn load_frequency_list(name: &str, source: impl BufRead) -> Result<Self> {
        let mut parsed = Vec::new();
        for (idx, line) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::MalformedLine {
                line: line_no,
                reason: e.to_string(),
            })?;
            if line.is_empty() {
                continue;
            }
            let (word, count) = line.split_once('\t').ok_or_else(|| Error::MalformedLine {
                line: line_no,
                reason: "missing tab separator".into(),
            })?;
            let word = Word::new(word).map_err(|_| Error::MalformedLine {
                line: line_no,
                reason: "empty word".into(),
            })?;
            let count = parse_count(count.trim_end_matches('\r'), line_no)?;
            parsed.push((word, count, line_no));
        }
        Self::from_numbered_entries(name, parsed)
    }

    /// Counts a raw list of passwords, one entry per user.
    pub fn from_password_multiset(
        name: &str,
        passwords: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        let mut counts: HashMap<Word, u64> = HashMap::new();
        for pw in passwords {
            *counts.entry(pw).or_default() += 1;
        }
        if counts.is_empty() {
            return Err(Error::EmptyInput);
        }
        Self::from_counts(name, counts)
    }

    /// Writes the entries in rank order using the frequency-list format.
    pub fn write_frequency_list(&self, mut out: impl Write) -> std::io::Result<()> {
        for (word, count) in &self.entries {
            writeln!(out, "{word}\t{count}")?;
        }
        Ok(())
    }

    pub fn to_frequency_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_frequency_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("words are valid UTF-8")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Entries in rank order.
    pub fn entries(&self) -> &[(Word, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    /// 1-based popularity rank of `word`, if present.
    pub fn rank_of(&self, word: &str) -> Option<usize> {
        self.rank_index.get(word).copied()
    }

    pub fn count_of(&self, word: &str) -> u64 {
        self.rank_of(word).map_or(0, |r| self.entries[r - 1].1)
    }

    /// `count(word) / total_count`, or exactly zero for absent words.
    pub fn probability_of<T: Scalar>(&self, word: &str) -> T {
        match self.count_of(word) {
            0 => T::zero(),
            c => T::from_count(c) / T::from_count(self.total_count),
        }
    }

    /// Most popular word not yet in `guessed`.
    pub fn next_unguessed<S>(&self, guessed: &HashSet<Word, S>) -> Option<&Word>
    where
        S: std::hash::BuildHasher,
    {
        self.entries
            .iter()
            .map(|(w, _)| w)
            .find(|w| !guessed.contains(*w))
    }
}

fn parse_count(text: &str, line: usize) -> Result<u64> {
    match text.parse::<i128>() {
        Ok(v) if v <= 0 => Err(Error::NonPositiveCount { line }),
        Ok(v) => u64::try_from(v).map_err(|_| Error::MalformedLine {
            line,
            reason: format!("count {v} out of range"),
        }),
        Err(_) => Err(Error::MalformedLine {
            line,
            reason: format!("count {text:?} is not an integer"),
        }),
    }
}

/// An ordered collection of dictionaries plus their union vocabulary.
#[derive(Debug, Clone)]
pub struct Corpus {
    dictionaries: Vec<Dictionary>,
    union_vocabulary: Vec<Word>,
    vocab_index: HashMap<Word, usize>,
    /// counts[v][i]: count of vocabulary word v in dictionary i
    counts: Vec<Vec<u64>>,
}

impl Corpus {
    /// The union vocabulary lists words by first appearance, scanning the
    /// dictionaries in order and each dictionary in rank order.
    pub fn new(dictionaries: Vec<Dictionary>) -> Result<Self> {
        if dictionaries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut names = HashSet::new();
        for d in &dictionaries {
            if !names.insert(d.name()) {
                return Err(Error::DuplicateDictionaryName(d.name().to_string()));
            }
        }
        let n = dictionaries.len();
        let mut union_vocabulary = Vec::new();
        let mut vocab_index: HashMap<Word, usize> = HashMap::new();
        let mut counts: Vec<Vec<u64>> = Vec::new();
        for (i, d) in dictionaries.iter().enumerate() {
            for (word, count) in d.entries() {
                let v = *vocab_index.entry(word.clone()).or_insert_with(|| {
                    union_vocabulary.push(word.clone());
                    counts.push(vec![0; n]);
                    union_vocabulary.len() - 1
                });
                counts[v][i] = *count;
            }
        }
        Ok(Corpus {
            dictionaries,
            union_vocabulary,
            vocab_index,
            counts,
        })
    }

    /// Number of dictionaries, `n`.
    pub fn len(&self) -> usize {
        self.dictionaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dictionaries.is_empty()
    }

    pub fn dictionaries(&self) -> &[Dictionary] {
        &self.dictionaries
    }

    pub fn dictionary(&self, index: usize) -> &Dictionary {
        &self.dictionaries[index]
    }

    pub fn union_vocabulary(&self) -> &[Word] {
        &self.union_vocabulary
    }

    pub fn vocabulary_index(&self, word: &str) -> Option<usize> {
        self.vocab_index.get(word).copied()
    }

    /// Per-dictionary counts of the vocabulary word with the given index.
    pub fn counts_at(&self, vocab_index: usize) -> &[u64] {
        &self.counts[vocab_index]
    }

    /// `probability_of(d_i, word)` for every dictionary `i`.
    pub fn probabilities<T: Scalar>(&self, word: &str) -> Vec<T> {
        match self.vocabulary_index(word) {
            Some(v) => self.probabilities_at(v),
            None => vec![T::zero(); self.len()],
        }
    }

    pub fn probabilities_at<T: Scalar>(&self, vocab_index: usize) -> Vec<T> {
        self.counts[vocab_index]
            .iter()
            .zip(&self.dictionaries)
            .map(|(&c, d)| T::from_count(c) / T::from_count(d.total_count()))
            .collect()
    }
}
