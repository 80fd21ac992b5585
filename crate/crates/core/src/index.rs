//! Positional inverted index over a reference corpus.
//!
//! Stands in for web hit counts: `hits` counts documents containing a word
//! or an adjacent two-word phrase, `hits_near` counts documents where two
//! terms occur within [`NEAR_WINDOW`] words of each other in either order.
//! One tweet is one document; only word tokens are indexed, at their
//! position among the tweet's words.

use std::collections::HashMap;

use thiserror::Error;

use crate::corpus::Corpus;
use crate::text::{Token, Tokenizer};

/// Maximum word distance for two terms to count as near each other.
pub const NEAR_WINDOW: u32 = 10;

pub type DocId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Posting {
    pub doc: DocId,
    /// Strictly increasing word positions.
    pub positions: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("cannot build an index from zero documents")]
    Empty,
    #[error("invalid index: {0}")]
    Invalid(String),
}

/// A query term: one word, or two adjacent words in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Word(String),
    Phrase(String, String),
}

impl Term {
    /// Parses whitespace-separated text into a one- or two-word term (lowercased).
    /// Anything longer is not a valid term.
    pub fn parse(text: &str) -> Option<Term> {
        let mut words = text.split_whitespace().map(str::to_lowercase);
        let first = words.next()?;
        match (words.next(), words.next()) {
            (None, _) => Some(Term::Word(first)),
            (Some(second), None) => Some(Term::Phrase(first, second)),
            _ => None,
        }
    }

    pub fn word(w: &str) -> Term {
        Term::Word(w.to_lowercase())
    }

    pub fn phrase(a: &str, b: &str) -> Term {
        Term::Phrase(a.to_lowercase(), b.to_lowercase())
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Word(w) => f.write_str(w),
            Term::Phrase(a, b) => write!(f, "{a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceIndex {
    postings: HashMap<String, Vec<Posting>>,
    doc_count: u32,
    total_tokens: u64,
}

#[derive(Default)]
pub struct IndexBuilder {
    postings: HashMap<String, Vec<Posting>>,
    doc_count: u32,
    total_tokens: u64,
}

impl IndexBuilder {
    pub fn new() -> Self {
        IndexBuilder::default()
    }

    /// Adds one document given its word forms in order.
    pub fn add_words<S: AsRef<str>>(&mut self, words: &[S]) -> DocId {
        let doc = self.doc_count;
        self.doc_count += 1;
        for (pos, w) in words.iter().enumerate() {
            let list = self.postings.entry(w.as_ref().to_string()).or_default();
            match list.last_mut() {
                Some(p) if p.doc == doc => p.positions.push(pos as u32),
                _ => list.push(Posting { doc, positions: vec![pos as u32] }),
            }
        }
        self.total_tokens += words.len() as u64;
        doc
    }

    pub fn add_tokens(&mut self, tokens: &[Token]) -> DocId {
        let words: Vec<&str> = tokens.iter().filter(|t| t.is_word()).map(|t| t.normalized.as_str()).collect();
        self.add_words(&words)
    }

    pub fn finish(self) -> Result<ReferenceIndex, IndexError> {
        if self.doc_count == 0 {
            return Err(IndexError::Empty);
        }
        Ok(ReferenceIndex { postings: self.postings, doc_count: self.doc_count, total_tokens: self.total_tokens })
    }
}

impl ReferenceIndex {
    /// Indexes every tweet of every corpus as one document, in order.
    pub fn build(corpora: &[Corpus], tokenizer: &Tokenizer) -> Result<ReferenceIndex, IndexError> {
        let mut builder = IndexBuilder::new();
        for tweet in corpora.iter().flat_map(|c| c.tweets.iter()) {
            builder.add_tokens(&tokenizer.tokenize(&tweet.text));
        }
        builder.finish()
    }

    /// Reassembles an index from raw parts, checking its invariants.
    pub fn from_parts(
        postings: HashMap<String, Vec<Posting>>,
        doc_count: u32,
        total_tokens: u64,
    ) -> Result<ReferenceIndex, IndexError> {
        if doc_count == 0 {
            return Err(IndexError::Empty);
        }
        for (word, list) in &postings {
            if list.is_empty() {
                return Err(IndexError::Invalid(format!("`{word}` has no postings")));
            }
            if !list.windows(2).all(|w| w[0].doc < w[1].doc) {
                return Err(IndexError::Invalid(format!("`{word}`: documents not strictly increasing")));
            }
            for p in list {
                if p.doc >= doc_count {
                    return Err(IndexError::Invalid(format!("`{word}`: document {} out of range", p.doc)));
                }
                if p.positions.is_empty() || !p.positions.windows(2).all(|w| w[0] < w[1]) {
                    return Err(IndexError::Invalid(format!("`{word}`: bad position list")));
                }
            }
        }
        Ok(ReferenceIndex { postings, doc_count, total_tokens })
    }

    pub fn doc_count(&self) -> u32 {
        self.doc_count
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn postings(&self, word: &str) -> &[Posting] {
        self.postings.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    /// Occurrences of a term as (document, start position) lists, one entry
    /// per document that contains it.
    fn occurrences(&self, term: &Term) -> Vec<(DocId, Vec<u32>)> {
        match term {
            Term::Word(w) => self.postings(w).iter().map(|p| (p.doc, p.positions.clone())).collect(),
            Term::Phrase(a, b) => {
                let mut out = Vec::new();
                for_each_common_doc(self.postings(a), self.postings(b), |pa, pb| {
                    let starts: Vec<u32> = pa
                        .positions
                        .iter()
                        .copied()
                        .filter(|&p| pb.positions.binary_search(&(p + 1)).is_ok())
                        .collect();
                    if !starts.is_empty() {
                        out.push((pa.doc, starts));
                    }
                });
                out
            }
        }
    }

    /// Number of documents containing `term`.
    pub fn hits(&self, term: &Term) -> u64 {
        match term {
            Term::Word(w) => self.postings(w).len() as u64,
            Term::Phrase(..) => self.occurrences(term).len() as u64,
        }
    }

    /// Number of documents where `a` and `b` occur within [`NEAR_WINDOW`]
    /// words of each other, in either order. A phrase is located by its
    /// first word.
    pub fn hits_near(&self, a: &Term, b: &Term) -> u64 {
        let occ_a = self.occurrences(a);
        let occ_b = self.occurrences(b);
        let mut count = 0;
        let (mut i, mut j) = (0, 0);
        while i < occ_a.len() && j < occ_b.len() {
            match occ_a[i].0.cmp(&occ_b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if min_distance(&occ_a[i].1, &occ_b[j].1) <= NEAR_WINDOW {
                        count += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub(crate) fn raw_postings(&self) -> &HashMap<String, Vec<Posting>> {
        &self.postings
    }
}

fn for_each_common_doc(a: &[Posting], b: &[Posting], mut f: impl FnMut(&Posting, &Posting)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].doc.cmp(&b[j].doc) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(&a[i], &b[j]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Smallest |x - y| over two sorted position lists.
fn min_distance(xs: &[u32], ys: &[u32]) -> u32 {
    let (mut i, mut j) = (0, 0);
    let mut best = u32::MAX;
    while i < xs.len() && j < ys.len() {
        let (x, y) = (xs[i], ys[j]);
        best = best.min(x.abs_diff(y));
        if x < y {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}
