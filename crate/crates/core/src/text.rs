//! Tweet tokenization and emoticon polarity.
//!
//! The tokenizer recognises emoticons from an [`EmoticonLexicon`] as atomic
//! tokens, even when glued to a word (`thing:)`), and splits everything else
//! on whitespace and punctuation. Hashtags, mentions and URLs get their own
//! token kinds so downstream stages can ignore them.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// Opinion class of a tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl Polarity {
    pub const ALL: [Polarity; 3] = [Polarity::Positive, Polarity::Negative, Polarity::Neutral];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
        }
    }

    /// Positive <-> Negative, Neutral stays put.
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Neutral => Polarity::Neutral,
        }
    }

    /// Row/column index used by confusion matrices.
    pub fn index(self) -> usize {
        match self {
            Polarity::Positive => 0,
            Polarity::Negative => 1,
            Polarity::Neutral => 2,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "happy" | "+" => Ok(Polarity::Positive),
            "negative" | "neg" | "sad" | "-" => Ok(Polarity::Negative),
            "neutral" | "neu" => Ok(Polarity::Neutral),
            other => Err(format!("unknown polarity `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Emoticon,
    Hashtag,
    Mention,
    Url,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Lowercased surface for words, hashtags and mentions; unchanged otherwise.
    pub normalized: String,
    pub position: usize,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("emoticon `{0}` listed as both positive and negative")]
    Conflict(String),
    #[error("emoticon `{0}` must be positive or negative")]
    NeutralEntry(String),
    #[error("emoticon entry must be non-empty and contain no whitespace")]
    BadEmoticon,
}

/// Emoticon → polarity table. Entries are case-sensitive literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmoticonLexicon {
    entries: HashMap<String, Polarity>,
    // longest first, so `:-)` wins over `:-`-prefixed shorter entries
    by_length: Vec<String>,
}

pub const DEFAULT_HAPPY: [&str; 4] = [":-)", ":)", "=)", ":D"];
pub const DEFAULT_SAD: [&str; 4] = [":-(", ":(", "=(", ";("];

impl Default for EmoticonLexicon {
    fn default() -> Self {
        let mut lex = EmoticonLexicon::empty();
        for e in DEFAULT_HAPPY {
            lex.insert(e, Polarity::Positive).expect("default lexicon is consistent");
        }
        for e in DEFAULT_SAD {
            lex.insert(e, Polarity::Negative).expect("default lexicon is consistent");
        }
        lex
    }
}

impl EmoticonLexicon {
    pub fn empty() -> Self {
        EmoticonLexicon { entries: HashMap::new(), by_length: Vec::new() }
    }

    pub fn insert(&mut self, emoticon: &str, polarity: Polarity) -> Result<(), LexiconError> {
        if emoticon.is_empty() || emoticon.chars().any(char::is_whitespace) {
            return Err(LexiconError::BadEmoticon);
        }
        if polarity == Polarity::Neutral {
            return Err(LexiconError::NeutralEntry(emoticon.to_string()));
        }
        match self.entries.get(emoticon) {
            Some(&existing) if existing != polarity => return Err(LexiconError::Conflict(emoticon.to_string())),
            Some(_) => return Ok(()),
            None => {}
        }
        self.entries.insert(emoticon.to_string(), polarity);
        self.by_length.push(emoticon.to_string());
        self.by_length.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        Ok(())
    }

    pub fn get(&self, emoticon: &str) -> Option<Polarity> {
        self.entries.get(emoticon).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Polarity)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Parses `emoticon<TAB>polarity` lines. Blank lines and `#` comments are ignored.
    pub fn parse(source: &str) -> Result<Self, LexiconError> {
        let mut lex = EmoticonLexicon::empty();
        lex.extend_from_str(source)?;
        Ok(lex)
    }

    pub fn extend_from_str(&mut self, source: &str) -> Result<(), LexiconError> {
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with("# ") || line.trim() == "#" {
                continue;
            }
            let (emo, pol) = line.split_once('\t').ok_or_else(|| LexiconError::Parse {
                line: idx + 1,
                message: "expected `emoticon<TAB>polarity`".into(),
            })?;
            let polarity: Polarity = pol.parse().map_err(|message| LexiconError::Parse { line: idx + 1, message })?;
            self.insert(emo.trim(), polarity)?;
        }
        Ok(())
    }

    pub fn extend_from_file(&mut self, path: &Path) -> Result<(), LexiconError> {
        let text =
            fs::read_to_string(path).map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
        self.extend_from_str(&text)
    }

    fn match_at(&self, text: &str, start: usize) -> Option<&str> {
        let rest = &text[start..];
        let prev = text[..start].chars().next_back();
        self.by_length
            .iter()
            .find(|e| {
                if !rest.starts_with(e.as_str()) {
                    return false;
                }
                // an alphanumeric edge must not be glued to a word (`:Dog` is not `:D`)
                let first = e.chars().next().unwrap();
                let last = e.chars().next_back().unwrap();
                let next = rest[e.len()..].chars().next();
                let left_ok = !first.is_alphanumeric() || !prev.is_some_and(char::is_alphanumeric);
                let right_ok = !last.is_alphanumeric() || !next.is_some_and(char::is_alphanumeric);
                left_ok && right_ok
            })
            .map(String::as_str)
    }
}

/// Tokenizer bound to an emoticon lexicon.
#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    lexicon: EmoticonLexicon,
}

impl Tokenizer {
    pub fn new(lexicon: EmoticonLexicon) -> Self {
        Tokenizer { lexicon }
    }

    pub fn lexicon(&self) -> &EmoticonLexicon {
        &self.lexicon
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let mut out = Vec::new();
        let mut push = |surface: &str, kind: TokenKind| {
            let normalized = match kind {
                TokenKind::Word | TokenKind::Hashtag | TokenKind::Mention => surface.to_lowercase(),
                _ => surface.to_string(),
            };
            out.push(Token { surface: surface.to_string(), normalized, position: out.len(), kind });
        };

        let mut i = 0;
        while i < text.len() {
            let rest = &text[i..];
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() {
                i += c.len_utf8();
                continue;
            }
            if rest.starts_with("http://") || rest.starts_with("https://") {
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                push(&rest[..end], TokenKind::Url);
                i += end;
                continue;
            }
            if let Some(emo) = self.lexicon.match_at(text, i) {
                let len = emo.len();
                push(emo, TokenKind::Emoticon);
                i += len;
                continue;
            }
            if (c == '#' || c == '@') && rest[1..].starts_with(is_tag_char) {
                let len = 1 + rest[1..].find(|ch: char| !is_tag_char(ch)).unwrap_or(rest.len() - 1);
                let kind = if c == '#' { TokenKind::Hashtag } else { TokenKind::Mention };
                push(&rest[..len], kind);
                i += len;
                continue;
            }
            if c.is_alphanumeric() {
                let len = word_len(text, i, &self.lexicon);
                push(&rest[..len], TokenKind::Word);
                i += len;
                continue;
            }
            push(&rest[..c.len_utf8()], TokenKind::Punct);
            i += c.len_utf8();
        }
        out
    }
}

fn is_tag_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Length in bytes of the word starting at `start`: alphanumerics with
/// internal apostrophes (`can't`). Stops early where an emoticon begins.
fn word_len(text: &str, start: usize, lex: &EmoticonLexicon) -> usize {
    let mut end = start;
    let mut chars = text[start..].char_indices().peekable();
    while let Some((off, c)) = chars.next() {
        let at = start + off;
        if at > start && lex.match_at(text, at).is_some() {
            break;
        }
        if c.is_alphanumeric() {
            end = at + c.len_utf8();
        } else if is_apostrophe(c) && at > start {
            match chars.peek() {
                Some(&(_, n)) if n.is_alphanumeric() => end = at + c.len_utf8(),
                _ => break,
            }
        } else {
            break;
        }
    }
    end - start
}

/// Tokenizes with the default emoticon lexicon.
pub fn tokenize(text: &str) -> Vec<Token> {
    Tokenizer::default().tokenize(text)
}

/// Distant-supervision label of a token sequence: one polarity if all listed
/// emoticons agree, `None` if there are none or they conflict.
pub fn emoticon_polarity(tokens: &[Token], lex: &EmoticonLexicon) -> Option<Polarity> {
    let mut happy = false;
    let mut sad = false;
    for t in tokens.iter().filter(|t| t.kind == TokenKind::Emoticon) {
        match lex.get(&t.surface) {
            Some(Polarity::Positive) => happy = true,
            Some(Polarity::Negative) => sad = true,
            _ => {}
        }
    }
    match (happy, sad) {
        (true, false) => Some(Polarity::Positive),
        (false, true) => Some(Polarity::Negative),
        _ => None,
    }
}

pub fn strip_emoticons(tokens: &[Token]) -> Vec<Token> {
    tokens.iter().filter(|t| t.kind != TokenKind::Emoticon).cloned().collect()
}
