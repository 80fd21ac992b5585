//! Independent oracles and synthetic corpus generators shared by the
//! integration tests. Nothing here calls into the code paths it checks.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------------------
// Phrase patterns, transcribed literally with string tags.

pub const TAGS: [&str; 15] =
    ["JJ", "JJR", "JJS", "NN", "NNS", "NNP", "NNPS", "RB", "RBR", "RBS", "VB", "VBD", "VBN", "VBG", "OTHER"];

enum Third {
    Anything,
    NotNnNorNns,
}

const PATTERNS: [(&[&str], &[&str], Third); 5] = [
    (&["JJ"], &["NN", "NNS"], Third::Anything),
    (&["RB", "RBR", "RBS"], &["JJ"], Third::NotNnNorNns),
    (&["JJ"], &["JJ"], Third::NotNnNorNns),
    (&["NN", "NNS"], &["JJ"], Third::NotNnNorNns),
    (&["RB", "RBR", "RBS"], &["VB", "VBD", "VBN", "VBG"], Third::Anything),
];

/// First pattern row matching the window, 1-based. `None` third = end of text.
pub fn pattern_oracle(first: &str, second: &str, third: Option<&str>) -> Option<u8> {
    if ["NNP", "NNPS"].contains(&first) || ["NNP", "NNPS"].contains(&second) {
        return None;
    }
    for (i, (a, b, c)) in PATTERNS.iter().enumerate() {
        let third_ok = match c {
            Third::Anything => true,
            Third::NotNnNorNns => !matches!(third, Some("NN") | Some("NNS")),
        };
        if a.contains(&first) && b.contains(&second) && third_ok {
            return Some(i as u8 + 1);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// brute-force hit counting over whitespace-split documents

pub struct ScanOracle {
    docs: Vec<Vec<String>>,
}

pub enum Query<'a> {
    Word(&'a str),
    Phrase(&'a str, &'a str),
}

impl ScanOracle {
    pub fn new(texts: &[String]) -> Self {
        ScanOracle { docs: texts.iter().map(|t| t.split_whitespace().map(str::to_lowercase).collect()).collect() }
    }

    fn starts(doc: &[String], q: &Query) -> Vec<usize> {
        match q {
            Query::Word(w) => (0..doc.len()).filter(|&i| doc[i] == *w).collect(),
            Query::Phrase(a, b) => {
                (0..doc.len().saturating_sub(1)).filter(|&i| doc[i] == *a && doc[i + 1] == *b).collect()
            }
        }
    }

    pub fn hits(&self, q: &Query) -> u64 {
        self.docs.iter().filter(|d| !Self::starts(d, q).is_empty()).count() as u64
    }

    pub fn hits_near(&self, a: &Query, b: &Query, window: usize) -> u64 {
        self.docs
            .iter()
            .filter(|d| {
                let xs = Self::starts(d, a);
                let ys = Self::starts(d, b);
                xs.iter().any(|&x| ys.iter().any(|&y| x.abs_diff(y) <= window))
            })
            .count() as u64
    }
}

pub fn random_word_corpus(rng: &mut impl Rng, max_docs: usize, vocab: usize, max_len: usize) -> Vec<String> {
    let n = rng.gen_range(1..=max_docs);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect::<Vec<_>>().join(" ")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// exact-arithmetic Naive Bayes

pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive());
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

pub struct LabeledDoc {
    pub positive: bool,
    pub words: Vec<String>,
}

/// Posterior numerators P(C)·Π P(w|C) as exact rationals, counted straight
/// from the labeled word lists.
pub struct RationalBayes {
    alpha: BigRational,
    docs: [u64; 2],
    totals: [u64; 2],
    counts: [HashMap<String, u64>; 2],
    vocab: BTreeSet<String>,
}

impl RationalBayes {
    pub fn fit(docs: &[LabeledDoc], alpha: f64) -> Self {
        let mut rb = RationalBayes {
            alpha: BigRational::from_float(alpha).unwrap(),
            docs: [0; 2],
            totals: [0; 2],
            counts: [HashMap::new(), HashMap::new()],
            vocab: BTreeSet::new(),
        };
        for d in docs {
            let c = if d.positive { 0 } else { 1 };
            rb.docs[c] += 1;
            for w in &d.words {
                rb.totals[c] += 1;
                *rb.counts[c].entry(w.clone()).or_default() += 1;
                rb.vocab.insert(w.clone());
            }
        }
        rb
    }

    fn int(n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Exact numerator for class 0 (positive) or 1 (negative).
    pub fn numerator(&self, class: usize, words: &[String]) -> BigRational {
        let mut p = Self::int(self.docs[class]) / Self::int(self.docs[0] + self.docs[1]);
        let denom = Self::int(self.totals[class]) + &self.alpha * Self::int(self.vocab.len() as u64);
        for w in words {
            let count = self.counts[class].get(w).copied().unwrap_or(0);
            p *= (Self::int(count) + &self.alpha) / &denom;
        }
        p
    }

    pub fn log_scores(&self, words: &[String]) -> (f64, f64) {
        (ln_rational(&self.numerator(0, words)), ln_rational(&self.numerator(1, words)))
    }

    /// Some(true) positive wins, Some(false) negative wins, None exact tie.
    pub fn argmax(&self, words: &[String]) -> Option<bool> {
        let (p, n) = (self.numerator(0, words), self.numerator(1, words));
        match p.cmp(&n) {
            std::cmp::Ordering::Greater => Some(true),
            std::cmp::Ordering::Less => Some(false),
            std::cmp::Ordering::Equal => None,
        }
    }
}

// ---------------------------------------------------------------------------
// planted-sentiment tweets

pub const POS_ADJ: [&str; 12] = [
    "great",
    "wonderful",
    "amazing",
    "beautiful",
    "lovely",
    "fantastic",
    "awesome",
    "brilliant",
    "perfect",
    "nice",
    "delightful",
    "fabulous",
];
pub const NEG_ADJ: [&str; 12] = [
    "terrible",
    "horrible",
    "awful",
    "bad",
    "ugly",
    "boring",
    "stupid",
    "disgusting",
    "pathetic",
    "miserable",
    "dreadful",
    "nasty",
];
pub const NOUNS: [&str; 15] = [
    "food", "movie", "game", "day", "team", "music", "service", "book", "city", "weather", "album", "song", "phone",
    "hotel", "trip",
];
/// Words the shipped tagger files under OTHER.
pub const FILLER: [&str; 14] =
    ["the", "a", "this", "my", "our", "with", "and", "i", "we", "it", "is", "to", "for", "at"];
/// Verbs and nouns only: no adjective or adverb can be extracted from these.
pub const PLAIN_VERBS: [&str; 8] = ["watch", "play", "visit", "call", "read", "text", "join", "follow"];

#[derive(Debug, Clone)]
pub struct PlantedTweet {
    pub text: String,
    pub positive: bool,
    /// False for tweets built without adjectives or adverbs.
    pub opinionated: bool,
}

pub struct PlantedConfig {
    /// Chance that a tweet also carries one phrase of the opposite polarity.
    pub noise: f64,
    /// Chance that the class reference word is inserted.
    pub reference_rate: f64,
    pub emoticons: bool,
}

fn filler(rng: &mut impl Rng, n: usize) -> Vec<String> {
    (0..n).map(|_| FILLER.choose(rng).unwrap().to_string()).collect()
}

pub fn planted_tweet(rng: &mut impl Rng, positive: bool, cfg: &PlantedConfig) -> PlantedTweet {
    let (own, other) = if positive { (&POS_ADJ, &NEG_ADJ) } else { (&NEG_ADJ, &POS_ADJ) };
    let mut chunks: Vec<Vec<String>> = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        chunks.push(vec![own.choose(rng).unwrap().to_string(), NOUNS.choose(rng).unwrap().to_string()]);
    }
    if rng.gen_bool(cfg.noise) {
        chunks.push(vec![other.choose(rng).unwrap().to_string(), NOUNS.choose(rng).unwrap().to_string()]);
    }
    chunks.shuffle(rng);
    let mut words = {
        let n = rng.gen_range(0..=2);
        filler(rng, n)
    };
    for c in chunks {
        words.extend(c);
        words.extend({
            let n = rng.gen_range(1..=2);
            filler(rng, n)
        });
    }
    if rng.gen_bool(cfg.reference_rate) {
        words.push(if positive { "excellent" } else { "poor" }.to_string());
    }
    if cfg.emoticons {
        let faces: &[&str] = if positive { &[":)", ":-)", ":D", "=)"] } else { &[":(", ":-(", "=(", ";("] };
        words.push(faces.choose(rng).unwrap().to_string());
    }
    PlantedTweet { text: words.join(" "), positive, opinionated: true }
}

/// A tweet with nouns, verbs and function words only, plus an emoticon.
pub fn plain_tweet(rng: &mut impl Rng, positive: bool) -> PlantedTweet {
    let mut words = vec![
        FILLER.choose(rng).unwrap().to_string(),
        PLAIN_VERBS.choose(rng).unwrap().to_string(),
        FILLER.choose(rng).unwrap().to_string(),
        NOUNS.choose(rng).unwrap().to_string(),
    ];
    words.extend({
        let n = rng.gen_range(0..=2);
        filler(rng, n)
    });
    words.push(if positive { ":)" } else { ":(" }.to_string());
    PlantedTweet { text: words.join(" "), positive, opinionated: false }
}

pub fn planted_corpus(rng: &mut impl Rng, n: usize, cfg: &PlantedConfig) -> Vec<PlantedTweet> {
    (0..n).map(|i| planted_tweet(rng, i % 2 == 0, cfg)).collect()
}
