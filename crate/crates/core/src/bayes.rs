//! Multinomial Naive Bayes trained by emoticon distant supervision.
//!
//! Each tweet whose emoticons agree on a polarity becomes a labeled training
//! document; its emoticons are removed and the remaining word tokens are the
//! features. Scoring is done in the log domain:
//!
//! ```text
//! score(C) = ln P(C) + Σ_w ln((count(w|C) + alpha) / (total(C) + alpha·|V|))
//! ```
//!
//! `P(D)` is the same for every class and is dropped.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::corpus::Corpus;
use crate::text::{emoticon_polarity, strip_emoticons, Polarity, Token, TokenKind, Tokenizer};

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error("smoothing alpha must be a finite value > 0, got {0}")]
    BadAlpha(f64),
    #[error("no {0} training examples: need at least one tweet labeled {0} by its emoticons")]
    NoExamples(Polarity),
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("alpha must be finite and > 0")]
    BadAlpha,
    #[error("tie epsilon must be finite and >= 0")]
    BadTieEpsilon,
    #[error("class priors must sum to 1")]
    PriorSum,
    #[error("{0} total does not equal the sum of its word counts")]
    TotalMismatch(Polarity),
    #[error("word `{0}` is counted but missing from the vocabulary")]
    UnknownWord(String),
}

/// Per-class statistics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassStats {
    /// Labeled training documents of this class.
    pub documents: u64,
    pub prior: f64,
    /// Total word occurrences.
    pub total: u64,
    pub counts: HashMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesModel {
    positive: ClassStats,
    negative: ClassStats,
    vocabulary: BTreeSet<String>,
    alpha: f64,
    tie_epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScores {
    pub positive: f64,
    pub negative: f64,
}

impl LogScores {
    pub fn get(&self, class: Polarity) -> f64 {
        match class {
            Polarity::Positive => self.positive,
            Polarity::Negative => self.negative,
            Polarity::Neutral => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub polarity: Polarity,
    pub scores: LogScores,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrainingReport {
    pub positive: usize,
    pub negative: usize,
    /// Tweets without any listed emoticon.
    pub unlabeled: usize,
    /// Tweets carrying both happy and sad emoticons.
    pub conflicting: usize,
}

impl TrainingReport {
    pub fn excluded(&self) -> usize {
        self.unlabeled + self.conflicting
    }
}

impl BayesModel {
    pub const CLASSES: [Polarity; 2] = [Polarity::Positive, Polarity::Negative];

    pub fn from_parts(
        positive: ClassStats,
        negative: ClassStats,
        vocabulary: BTreeSet<String>,
        alpha: f64,
        tie_epsilon: f64,
    ) -> Result<Self, ModelError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ModelError::BadAlpha);
        }
        if !(tie_epsilon.is_finite() && tie_epsilon >= 0.0) {
            return Err(ModelError::BadTieEpsilon);
        }
        if ((positive.prior + negative.prior) - 1.0).abs() > 1e-12 {
            return Err(ModelError::PriorSum);
        }
        for (class, stats) in [(Polarity::Positive, &positive), (Polarity::Negative, &negative)] {
            if stats.counts.values().sum::<u64>() != stats.total {
                return Err(ModelError::TotalMismatch(class));
            }
            if let Some(w) = stats.counts.keys().find(|w| !vocabulary.contains(*w)) {
                return Err(ModelError::UnknownWord(w.clone()));
            }
        }
        Ok(BayesModel { positive, negative, vocabulary, alpha, tie_epsilon })
    }

    pub fn with_tie_epsilon(mut self, tie_epsilon: f64) -> Result<Self, ModelError> {
        if !(tie_epsilon.is_finite() && tie_epsilon >= 0.0) {
            return Err(ModelError::BadTieEpsilon);
        }
        self.tie_epsilon = tie_epsilon;
        Ok(self)
    }

    pub fn stats(&self, class: Polarity) -> &ClassStats {
        match class {
            Polarity::Positive => &self.positive,
            Polarity::Negative => &self.negative,
            Polarity::Neutral => panic!("the model has no neutral class"),
        }
    }

    pub fn prior(&self, class: Polarity) -> f64 {
        self.stats(class).prior
    }

    pub fn count(&self, word: &str, class: Polarity) -> u64 {
        self.stats(class).counts.get(word).copied().unwrap_or(0)
    }

    pub fn class_total(&self, class: Polarity) -> u64 {
        self.stats(class).total
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tie_epsilon(&self) -> f64 {
        self.tie_epsilon
    }

    /// ln P(w | C) with Laplace smoothing; unseen words get count 0.
    pub fn log_likelihood(&self, word: &str, class: Polarity) -> f64 {
        let stats = self.stats(class);
        let count = stats.counts.get(word).copied().unwrap_or(0) as f64;
        let denom = stats.total as f64 + self.alpha * self.vocabulary.len() as f64;
        (count + self.alpha).ln() - denom.ln()
    }

    /// Unnormalized log posterior of each class over the word tokens.
    pub fn log_posterior(&self, tokens: &[Token]) -> LogScores {
        self.log_posterior_words(tokens.iter().filter(|t| t.is_word()).map(|t| t.normalized.as_str()))
    }

    pub fn log_posterior_words<'a>(&self, words: impl IntoIterator<Item = &'a str>) -> LogScores {
        let mut scores = LogScores { positive: self.positive.prior.ln(), negative: self.negative.prior.ln() };
        for w in words {
            scores.positive += self.log_likelihood(w, Polarity::Positive);
            scores.negative += self.log_likelihood(w, Polarity::Negative);
        }
        scores
    }

    /// Argmax class; `Neutral` on a tie within `tie_epsilon` or when there
    /// are no word tokens at all.
    pub fn classify(&self, tokens: &[Token]) -> Classification {
        let scores = self.log_posterior(tokens);
        let has_words = tokens.iter().any(|t| t.kind == TokenKind::Word);
        let polarity = if !has_words || (scores.positive - scores.negative).abs() <= self.tie_epsilon {
            Polarity::Neutral
        } else if scores.positive > scores.negative {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Classification { polarity, scores }
    }
}

/// Trains on every tweet of `corpus`.
pub fn train(corpus: &Corpus, tokenizer: &Tokenizer, alpha: f64) -> Result<(BayesModel, TrainingReport), TrainError> {
    train_texts(corpus.tweets.iter().map(|t| t.text.as_str()), tokenizer, alpha)
}

pub fn train_texts<'a>(
    texts: impl IntoIterator<Item = &'a str>,
    tokenizer: &Tokenizer,
    alpha: f64,
) -> Result<(BayesModel, TrainingReport), TrainError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(TrainError::BadAlpha(alpha));
    }
    let lex = tokenizer.lexicon();
    let mut report = TrainingReport::default();
    let mut positive = ClassStats::default();
    let mut negative = ClassStats::default();
    let mut vocabulary = BTreeSet::new();

    for text in texts {
        let tokens = tokenizer.tokenize(text);
        let stats = match emoticon_polarity(&tokens, lex) {
            Some(Polarity::Positive) => {
                report.positive += 1;
                &mut positive
            }
            Some(_) => {
                report.negative += 1;
                &mut negative
            }
            None => {
                let any_listed = tokens.iter().any(|t| t.kind == TokenKind::Emoticon && lex.get(&t.surface).is_some());
                if any_listed {
                    report.conflicting += 1;
                } else {
                    report.unlabeled += 1;
                }
                continue;
            }
        };
        stats.documents += 1;
        for t in strip_emoticons(&tokens).into_iter().filter(Token::is_word) {
            stats.total += 1;
            *stats.counts.entry(t.normalized.clone()).or_insert(0) += 1;
            vocabulary.insert(t.normalized);
        }
    }

    if positive.documents == 0 {
        return Err(TrainError::NoExamples(Polarity::Positive));
    }
    if negative.documents == 0 {
        return Err(TrainError::NoExamples(Polarity::Negative));
    }
    let labeled = (positive.documents + negative.documents) as f64;
    positive.prior = positive.documents as f64 / labeled;
    negative.prior = 1.0 - positive.prior;

    let model = BayesModel::from_parts(positive, negative, vocabulary, alpha, DEFAULT_TIE_EPSILON)
        .expect("trained statistics satisfy model invariants");
    Ok((model, report))
}
