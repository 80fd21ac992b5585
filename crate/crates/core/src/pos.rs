//! Lexicon + suffix-rule part-of-speech tagger.
//!
//! Resolution order for a word token: lexicon lookup on the lowercased form,
//! then proper-noun detection for capitalized words that do not start a
//! sentence, then the first matching suffix rule, then `NN`.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::text::{Token, TokenKind};

const SHIPPED_LEXICON: &str = include_str!("../data/tagger_lexicon.tsv");

/// A suffix rule only fires when at least this many characters remain in front of it.
const MIN_STEM_CHARS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosTag {
    JJ,
    JJR,
    JJS,
    NN,
    NNS,
    NNP,
    NNPS,
    RB,
    RBR,
    RBS,
    VB,
    VBD,
    VBN,
    VBG,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 15] = [
        PosTag::JJ,
        PosTag::JJR,
        PosTag::JJS,
        PosTag::NN,
        PosTag::NNS,
        PosTag::NNP,
        PosTag::NNPS,
        PosTag::RB,
        PosTag::RBR,
        PosTag::RBS,
        PosTag::VB,
        PosTag::VBD,
        PosTag::VBN,
        PosTag::VBG,
        PosTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::JJ => "JJ",
            PosTag::JJR => "JJR",
            PosTag::JJS => "JJS",
            PosTag::NN => "NN",
            PosTag::NNS => "NNS",
            PosTag::NNP => "NNP",
            PosTag::NNPS => "NNPS",
            PosTag::RB => "RB",
            PosTag::RBR => "RBR",
            PosTag::RBS => "RBS",
            PosTag::VB => "VB",
            PosTag::VBD => "VBD",
            PosTag::VBN => "VBN",
            PosTag::VBG => "VBG",
            PosTag::Other => "OTHER",
        }
    }

    pub fn is_proper_noun(self) -> bool {
        matches!(self, PosTag::NNP | PosTag::NNPS)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown tag `{}`", s.trim()))
    }
}

#[derive(Debug, Error)]
pub enum TaggerLexiconError {
    #[error("failed to read tagger lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct TaggerLexicon {
    entries: HashMap<String, PosTag>,
    suffix_rules: Vec<(String, PosTag)>,
}

impl TaggerLexicon {
    /// The lexicon bundled with the crate.
    pub fn shipped() -> Self {
        TaggerLexicon::parse(SHIPPED_LEXICON).expect("bundled tagger lexicon is well-formed")
    }

    /// Parses `word<TAB>tag` lines, followed by an optional `[suffix]`
    /// section of `suffix<TAB>tag` lines. `#` starts a comment line.
    pub fn parse(source: &str) -> Result<Self, TaggerLexiconError> {
        let mut lex = TaggerLexicon::default();
        let mut in_suffix = false;
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with('[') {
                in_suffix = match line {
                    "[suffix]" => true,
                    "[words]" => false,
                    other => {
                        return Err(TaggerLexiconError::Parse {
                            line: idx + 1,
                            message: format!("unknown section {other}"),
                        })
                    }
                };
                continue;
            }
            let (key, tag) = line.split_once('\t').ok_or_else(|| TaggerLexiconError::Parse {
                line: idx + 1,
                message: "expected `entry<TAB>tag`".into(),
            })?;
            let tag: PosTag = tag.parse().map_err(|message| TaggerLexiconError::Parse { line: idx + 1, message })?;
            let key = key.trim().to_lowercase();
            if key.is_empty() {
                return Err(TaggerLexiconError::Parse { line: idx + 1, message: "empty entry".into() });
            }
            if in_suffix {
                lex.suffix_rules.push((key, tag));
            } else {
                lex.entries.insert(key, tag);
            }
        }
        Ok(lex)
    }

    pub fn from_file(path: &Path) -> Result<Self, TaggerLexiconError> {
        let text = fs::read_to_string(path)
            .map_err(|source| TaggerLexiconError::Io { path: path.display().to_string(), source })?;
        TaggerLexicon::parse(&text)
    }

    pub fn insert(&mut self, word: &str, tag: PosTag) {
        self.entries.insert(word.to_lowercase(), tag);
    }

    pub fn push_suffix_rule(&mut self, suffix: &str, tag: PosTag) {
        self.suffix_rules.push((suffix.to_lowercase(), tag));
    }

    pub fn lookup(&self, word: &str) -> Option<PosTag> {
        self.entries.get(word).copied()
    }

    pub fn suffix_rules(&self) -> &[(String, PosTag)] {
        &self.suffix_rules
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, PosTag)> {
        self.entries.iter().map(|(w, &t)| (w.as_str(), t))
    }

    /// Tag of a single word given whether it opens a sentence.
    pub fn tag_word(&self, surface: &str, sentence_initial: bool) -> PosTag {
        if !surface.chars().any(char::is_alphabetic) {
            return PosTag::Other;
        }
        let lower = surface.to_lowercase();
        if let Some(tag) = self.lookup(&lower) {
            return tag;
        }
        if !sentence_initial && surface.chars().next().is_some_and(char::is_uppercase) {
            return PosTag::NNP;
        }
        let chars = lower.chars().count();
        self.suffix_rules
            .iter()
            .find(|(suffix, _)| lower.ends_with(suffix.as_str()) && chars >= suffix.chars().count() + MIN_STEM_CHARS)
            .map(|&(_, tag)| tag)
            .unwrap_or(PosTag::NN)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: PosTag,
}

fn ends_sentence(token: &Token) -> bool {
    token.kind == TokenKind::Punct && matches!(token.surface.as_str(), "." | "!" | "?")
}

/// Tags every token; non-word tokens are `Other`.
///
/// A word is sentence-initial when no word precedes it, or when the last
/// non-word token since the previous word ends a sentence.
pub fn tag(tokens: &[Token], lex: &TaggerLexicon) -> Vec<TaggedToken> {
    let mut sentence_initial = true;
    tokens
        .iter()
        .map(|token| {
            let tag = if token.kind == TokenKind::Word {
                let t = lex.tag_word(&token.surface, sentence_initial);
                sentence_initial = false;
                t
            } else {
                if ends_sentence(token) {
                    sentence_initial = true;
                }
                PosTag::Other
            };
            TaggedToken { token: token.clone(), tag }
        })
        .collect()
}
