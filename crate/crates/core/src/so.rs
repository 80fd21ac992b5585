//! PMI-IR semantic orientation over a [`ReferenceIndex`].
//!
//! A phrase's orientation compares how often it appears near a positive
//! reference word against a negative one:
//!
//! ```text
//! SO(phrase) = log2( (near(phrase, pos) + s) · hits(neg)
//!                  / ((near(phrase, neg) + s) · hits(pos)) )
//! ```
//!
//! with `s = 0.01` added to the two proximity counts only. A tweet is
//! classified by the sign of the mean SO of its candidate phrases; tweets
//! without candidate phrases, and exact-zero means, are neutral.

use thiserror::Error;

use crate::index::{ReferenceIndex, Term};
use crate::phrase::{extract, CandidatePhrase};
use crate::pos::TaggedToken;
use crate::text::Polarity;

pub const DEFAULT_POSITIVE_REF: &str = "excellent";
pub const DEFAULT_NEGATIVE_REF: &str = "poor";
pub const DEFAULT_NEAR_SMOOTHING: f64 = 0.01;

#[derive(Debug, Error, PartialEq)]
pub enum SoError {
    #[error(
        "reference word `{0}` never occurs in the reference index; \
         supply a background corpus that contains both `{1}` and `{2}`"
    )]
    MissingReference(String, String, String),
    #[error("reference words must be two distinct non-empty single words")]
    BadReferences,
    #[error("PMI undefined: `{0}` has no hits")]
    UndefinedPmi(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceWords {
    positive: String,
    negative: String,
}

impl Default for ReferenceWords {
    fn default() -> Self {
        ReferenceWords { positive: DEFAULT_POSITIVE_REF.into(), negative: DEFAULT_NEGATIVE_REF.into() }
    }
}

impl ReferenceWords {
    pub fn new(positive: &str, negative: &str) -> Result<Self, SoError> {
        let single = |w: &str| !w.is_empty() && !w.contains(char::is_whitespace);
        let (p, n) = (positive.trim().to_lowercase(), negative.trim().to_lowercase());
        if !single(&p) || !single(&n) || p == n {
            return Err(SoError::BadReferences);
        }
        Ok(ReferenceWords { positive: p, negative: n })
    }

    pub fn positive(&self) -> &str {
        &self.positive
    }

    pub fn negative(&self) -> &str {
        &self.negative
    }

    pub fn swapped(&self) -> Self {
        ReferenceWords { positive: self.negative.clone(), negative: self.positive.clone() }
    }
}

/// Semantic orientation in log2 units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SoScore(pub f64);

impl SoScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Pointwise mutual information of `a` and `b`, with probabilities taken
/// as document frequencies and co-occurrence as proximity hits.
pub fn pmi(index: &ReferenceIndex, a: &Term, b: &Term) -> Result<f64, SoError> {
    let n = index.doc_count() as f64;
    let ha = index.hits(a);
    if ha == 0 {
        return Err(SoError::UndefinedPmi(a.to_string()));
    }
    let hb = index.hits(b);
    if hb == 0 {
        return Err(SoError::UndefinedPmi(b.to_string()));
    }
    let joint = index.hits_near(a, b) as f64 / n;
    Ok((joint / ((ha as f64 / n) * (hb as f64 / n))).log2())
}

#[derive(Debug, Clone)]
pub struct PhraseScore {
    pub phrase: CandidatePhrase,
    pub score: SoScore,
}

#[derive(Debug, Clone)]
pub struct TweetOrientation {
    pub polarity: Polarity,
    /// Mean phrase SO; 0 when there are no phrases.
    pub average: f64,
    pub has_phrases: bool,
    pub phrases: Vec<PhraseScore>,
}

/// Scores phrases against one index and one pair of reference words.
#[derive(Debug, Clone)]
pub struct SoScorer<'a> {
    index: &'a ReferenceIndex,
    refs: ReferenceWords,
    pos_term: Term,
    neg_term: Term,
    pos_hits: u64,
    neg_hits: u64,
    smoothing: f64,
}

impl<'a> SoScorer<'a> {
    /// Fails when either reference word has no hits in `index`.
    pub fn new(index: &'a ReferenceIndex, refs: ReferenceWords) -> Result<Self, SoError> {
        let pos_term = Term::word(refs.positive());
        let neg_term = Term::word(refs.negative());
        let pos_hits = index.hits(&pos_term);
        let neg_hits = index.hits(&neg_term);
        for (word, hits) in [(refs.positive(), pos_hits), (refs.negative(), neg_hits)] {
            if hits == 0 {
                return Err(SoError::MissingReference(
                    word.to_string(),
                    refs.positive().to_string(),
                    refs.negative().to_string(),
                ));
            }
        }
        Ok(SoScorer { index, refs, pos_term, neg_term, pos_hits, neg_hits, smoothing: DEFAULT_NEAR_SMOOTHING })
    }

    /// Overrides the pseudo-count added to the proximity hits. Zero gives the
    /// unsmoothed ratio, which is -inf/+inf/NaN when a proximity count is 0.
    pub fn with_smoothing(mut self, smoothing: f64) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn refs(&self) -> &ReferenceWords {
        &self.refs
    }

    pub fn index(&self) -> &ReferenceIndex {
        self.index
    }

    pub fn so_term(&self, phrase: &Term) -> SoScore {
        let near_pos = self.index.hits_near(phrase, &self.pos_term) as f64;
        let near_neg = self.index.hits_near(phrase, &self.neg_term) as f64;
        // written as a difference of sums so that swapping the reference
        // words negates the result bit-for-bit
        let up = (near_pos + self.smoothing).log2() + (self.neg_hits as f64).log2();
        let down = (near_neg + self.smoothing).log2() + (self.pos_hits as f64).log2();
        SoScore(up - down)
    }

    pub fn so_phrase(&self, phrase: &CandidatePhrase) -> SoScore {
        self.so_term(&Term::Phrase(phrase.word1.clone(), phrase.word2.clone()))
    }

    pub fn classify_tagged(&self, tagged: &[TaggedToken]) -> TweetOrientation {
        let phrases: Vec<PhraseScore> = extract(tagged)
            .into_iter()
            .map(|phrase| {
                let score = self.so_phrase(&phrase);
                PhraseScore { phrase, score }
            })
            .collect();
        if phrases.is_empty() {
            return TweetOrientation { polarity: Polarity::Neutral, average: 0.0, has_phrases: false, phrases };
        }
        let average = phrases.iter().map(|p| p.score.0).sum::<f64>() / phrases.len() as f64;
        TweetOrientation { polarity: polarity_of_average(average), average, has_phrases: true, phrases }
    }
}

/// Sign rule; exact zero (and NaN) is neutral.
pub fn polarity_of_average(average: f64) -> Polarity {
    if average > 0.0 {
        Polarity::Positive
    } else if average < 0.0 {
        Polarity::Negative
    } else {
        Polarity::Neutral
    }
}

pub fn so_phrase(index: &ReferenceIndex, phrase: &Term, refs: &ReferenceWords) -> Result<SoScore, SoError> {
    Ok(SoScorer::new(index, refs.clone())?.so_term(phrase))
}

pub fn classify_tweet(
    index: &ReferenceIndex,
    tagged: &[TaggedToken],
    refs: &ReferenceWords,
) -> Result<TweetOrientation, SoError> {
    Ok(SoScorer::new(index, refs.clone())?.classify_tagged(tagged))
}
