//! Running both classifiers over corpora and tabulating the outcome.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bayes::BayesModel;
use crate::corpus::Corpus;
use crate::pos::{tag, TaggerLexicon};
use crate::so::{SoScorer, TweetOrientation};
use crate::text::{Polarity, Tokenizer};

/// Column layout of a polarity report, one row per corpus and method.
pub const REPORT_HEADER: [&str; 7] = ["corpus", "tweets", "positive", "negative", "neutral", "time_s", "method"];

pub const AGREEMENT_HEADER: [&str; 13] = [
    "corpus",
    "tweets",
    "agree",
    "agreement",
    "pos_pos",
    "pos_neg",
    "pos_neu",
    "neg_pos",
    "neg_neg",
    "neg_neu",
    "neu_pos",
    "neu_neg",
    "neu_neu",
];

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("corpus `{0}` has no tweets")]
    EmptyCorpus(String),
    #[error("writing report: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing report: {0}")]
    Io(#[from] io::Error),
}

pub trait PolarityClassifier {
    /// Short method name used in reports.
    fn method(&self) -> &str;

    fn classify_text(&self, text: &str) -> Polarity;
}

pub struct BayesPipeline<'a> {
    pub model: &'a BayesModel,
    pub tokenizer: &'a Tokenizer,
}

impl PolarityClassifier for BayesPipeline<'_> {
    fn method(&self) -> &str {
        "bayes"
    }

    fn classify_text(&self, text: &str) -> Polarity {
        self.model.classify(&self.tokenizer.tokenize(text)).polarity
    }
}

pub struct TurneyPipeline<'a> {
    pub scorer: SoScorer<'a>,
    pub tokenizer: &'a Tokenizer,
    pub tagger: &'a TaggerLexicon,
}

impl TurneyPipeline<'_> {
    pub fn orientation(&self, text: &str) -> TweetOrientation {
        let tagged = tag(&self.tokenizer.tokenize(text), self.tagger);
        self.scorer.classify_tagged(&tagged)
    }
}

impl PolarityClassifier for TurneyPipeline<'_> {
    fn method(&self) -> &str {
        "turney"
    }

    fn classify_text(&self, text: &str) -> Polarity {
        self.orientation(text).polarity
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub corpus_name: String,
    pub method: String,
    pub n_tweets: u64,
    pub n_positive: u64,
    pub n_negative: u64,
    pub n_neutral: u64,
    pub elapsed: Duration,
}

impl ClassificationReport {
    pub fn count(&self, p: Polarity) -> u64 {
        match p {
            Polarity::Positive => self.n_positive,
            Polarity::Negative => self.n_negative,
            Polarity::Neutral => self.n_neutral,
        }
    }

    pub fn is_partition(&self) -> bool {
        self.n_positive + self.n_negative + self.n_neutral == self.n_tweets
    }

    pub fn csv_record(&self) -> [String; 7] {
        [
            self.corpus_name.clone(),
            self.n_tweets.to_string(),
            self.n_positive.to_string(),
            self.n_negative.to_string(),
            self.n_neutral.to_string(),
            format!("{:.3}", self.elapsed.as_secs_f64()),
            self.method.clone(),
        ]
    }
}

/// Classifies every tweet of `corpus`. Timing covers classification only.
pub fn run_report(corpus: &Corpus, classifier: &dyn PolarityClassifier) -> Result<ClassificationReport, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus(corpus.name.clone()));
    }
    let start = Instant::now();
    let mut counts = [0u64; 3];
    for tweet in &corpus.tweets {
        counts[classifier.classify_text(&tweet.text).index()] += 1;
    }
    let elapsed = start.elapsed();
    Ok(ClassificationReport {
        corpus_name: corpus.name.clone(),
        method: classifier.method().to_string(),
        n_tweets: corpus.len() as u64,
        n_positive: counts[Polarity::Positive.index()],
        n_negative: counts[Polarity::Negative.index()],
        n_neutral: counts[Polarity::Neutral.index()],
        elapsed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub corpus_name: String,
    pub n_tweets: u64,
    pub n_agree: u64,
    /// Rows: first classifier, columns: second; indexed by [`Polarity::index`].
    pub confusion: [[u64; 3]; 3],
}

impl AgreementReport {
    pub fn agreement(&self) -> f64 {
        if self.n_tweets == 0 {
            return 0.0;
        }
        self.n_agree as f64 / self.n_tweets as f64
    }

    pub fn cell(&self, first: Polarity, second: Polarity) -> u64 {
        self.confusion[first.index()][second.index()]
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut row = vec![
            self.corpus_name.clone(),
            self.n_tweets.to_string(),
            self.n_agree.to_string(),
            format!("{:.4}", self.agreement()),
        ];
        row.extend(self.confusion.iter().flatten().map(u64::to_string));
        row
    }
}

/// Pairs the decisions of two classifiers tweet by tweet.
pub fn compare(
    corpus: &Corpus,
    first: &dyn PolarityClassifier,
    second: &dyn PolarityClassifier,
) -> Result<AgreementReport, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus(corpus.name.clone()));
    }
    let mut confusion = [[0u64; 3]; 3];
    for tweet in &corpus.tweets {
        let a = first.classify_text(&tweet.text);
        let b = second.classify_text(&tweet.text);
        confusion[a.index()][b.index()] += 1;
    }
    let n_agree = (0..3).map(|i| confusion[i][i]).sum();
    Ok(AgreementReport { corpus_name: corpus.name.clone(), n_tweets: corpus.len() as u64, n_agree, confusion })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Accuracy {
    pub correct: u64,
    /// Non-neutral decisions.
    pub decided: u64,
    pub neutral: u64,
}

impl Accuracy {
    /// Fraction correct among non-neutral decisions.
    pub fn decided_accuracy(&self) -> f64 {
        if self.decided == 0 {
            0.0
        } else {
            self.correct as f64 / self.decided as f64
        }
    }

    /// Fraction correct over everything, counting neutral as wrong.
    pub fn overall_accuracy(&self) -> f64 {
        let n = self.decided + self.neutral;
        if n == 0 {
            0.0
        } else {
            self.correct as f64 / n as f64
        }
    }
}

/// Scores a classifier against gold labels (Positive / Negative).
pub fn accuracy<'t>(
    classifier: &dyn PolarityClassifier,
    labeled: impl IntoIterator<Item = (&'t str, Polarity)>,
) -> Accuracy {
    let mut acc = Accuracy::default();
    for (text, gold) in labeled {
        match classifier.classify_text(text) {
            Polarity::Neutral => acc.neutral += 1,
            p => {
                acc.decided += 1;
                if p == gold {
                    acc.correct += 1;
                }
            }
        }
    }
    acc
}

pub fn write_reports_csv<W: Write>(reports: &[ClassificationReport], out: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_agreement_csv<W: Write>(reports: &[AgreementReport], out: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGREEMENT_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}
