//! Corpus loading and on-disk formats for trained models and indexes.
//!
//! Corpus files come in two layouts:
//!
//! * plain text, one tweet per line; ids are assigned `"0"`, `"1"`, ... in order;
//! * JSON lines (`.jsonl` / `.ndjson`), one `{"id": ..., "text": ...}` object per line.
//!
//! Blank lines are skipped in both. A bad record is reported with its line
//! number and loading carries on with the next one.
//!
//! Models and indexes are stored as tab-separated text with a version line.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::bayes::{BayesModel, ClassStats};
use crate::index::{Posting, ReferenceIndex};
use crate::text::Polarity;

pub const MODEL_HEADER: &str = "tweetsense-model v1";
pub const INDEX_HEADER: &str = "tweetsense-index v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    pub text: String,
    pub corpus: String,
}

impl Tweet {
    pub fn new(id: impl Into<String>, text: impl Into<String>, corpus: impl Into<String>) -> Self {
        Tweet { id: id.into(), text: text.into(), corpus: corpus.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub name: String,
    pub tweets: Vec<Tweet>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, tweets: Vec<Tweet>) -> Result<Self, CorpusError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(CorpusError::EmptyName);
        }
        let mut seen = HashSet::new();
        for t in &tweets {
            if t.text.trim().is_empty() {
                return Err(CorpusError::EmptyText(t.id.clone()));
            }
            if !seen.insert(t.id.as_str()) {
                return Err(CorpusError::DuplicateId(t.id.clone()));
            }
        }
        Ok(Corpus { name, tweets })
    }

    /// Builds a corpus from raw texts with sequential ids, skipping blanks.
    pub fn from_texts<S: AsRef<str>>(name: &str, texts: &[S]) -> Result<Self, CorpusError> {
        let tweets = texts
            .iter()
            .map(AsRef::as_ref)
            .filter(|t| !t.trim().is_empty())
            .enumerate()
            .map(|(i, t)| Tweet::new(i.to_string(), t, name))
            .collect();
        Corpus::new(name, tweets)
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("corpus name must be non-empty")]
    EmptyName,
    #[error("tweet `{0}` has empty text")]
    EmptyText(String),
    #[error("duplicate tweet id `{0}`")]
    DuplicateId(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("incompatible file: expected header `{expected}`, found `{found}`")]
    Version { expected: &'static str, found: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io { path: path.display().to_string(), source }
}

fn format_err(line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Format { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    /// JSON lines for `.jsonl` / `.ndjson`, plain text otherwise.
    #[default]
    Auto,
    PlainText,
    JsonLines,
}

impl CorpusFormat {
    fn resolve(self, path: &Path) -> CorpusFormat {
        match self {
            CorpusFormat::Auto => match path.extension().and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("ndjson") => {
                    CorpusFormat::JsonLines
                }
                _ => CorpusFormat::PlainText,
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub skipped_blank: usize,
    pub errors: Vec<RecordError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub report: LoadReport,
}

#[derive(Deserialize)]
struct Record {
    id: serde_json::Value,
    text: String,
}

pub fn load_corpus(path: &Path, name: &str) -> Result<LoadedCorpus, CorpusError> {
    load_corpus_with(path, name, CorpusFormat::Auto)
}

pub fn load_corpus_with(path: &Path, name: &str, format: CorpusFormat) -> Result<LoadedCorpus, CorpusError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    parse_corpus(&bytes, name, format.resolve(path))
}

/// Parses corpus bytes in an already-resolved layout.
pub fn parse_corpus(bytes: &[u8], name: &str, format: CorpusFormat) -> Result<LoadedCorpus, CorpusError> {
    if name.trim().is_empty() {
        return Err(CorpusError::EmptyName);
    }
    let json = format == CorpusFormat::JsonLines;
    let mut report = LoadReport::default();
    let mut tweets = Vec::new();
    let mut seen = HashSet::new();

    let mut lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    for (idx, raw) in lines.into_iter().enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let text = match std::str::from_utf8(raw) {
            Ok(t) => t,
            Err(e) => {
                report.errors.push(RecordError { line: line_no, message: format!("invalid UTF-8: {e}") });
                continue;
            }
        };
        if text.trim().is_empty() {
            report.skipped_blank += 1;
            continue;
        }
        let (id, text) = if json {
            match serde_json::from_str::<Record>(text) {
                Ok(rec) => {
                    let id = match rec.id {
                        serde_json::Value::String(s) => s,
                        serde_json::Value::Number(n) => n.to_string(),
                        other => {
                            report.errors.push(RecordError {
                                line: line_no,
                                message: format!("id must be a string or number, got {other}"),
                            });
                            continue;
                        }
                    };
                    if rec.text.trim().is_empty() {
                        report.skipped_blank += 1;
                        continue;
                    }
                    (id, rec.text)
                }
                Err(e) => {
                    report.errors.push(RecordError { line: line_no, message: e.to_string() });
                    continue;
                }
            }
        } else {
            (tweets.len().to_string(), text.to_string())
        };
        if !seen.insert(id.clone()) {
            report.errors.push(RecordError { line: line_no, message: format!("duplicate id `{id}`") });
            continue;
        }
        tweets.push(Tweet { id, text, corpus: name.to_string() });
    }
    Ok(LoadedCorpus { corpus: Corpus { name: name.to_string(), tweets }, report })
}

// ---------------------------------------------------------------------------
// models

pub fn save_model(model: &BayesModel, path: &Path) -> Result<(), CorpusError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_model(model, &mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

fn check_field(s: &str) -> io::Result<()> {
    if s.is_empty() || s.contains(['\t', '\n', '\r']) {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, format!("unstorable word {s:?}")));
    }
    Ok(())
}

pub fn write_model(model: &BayesModel, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{MODEL_HEADER}")?;
    writeln!(w, "alpha\t{}", model.alpha())?;
    writeln!(w, "tie_epsilon\t{}", model.tie_epsilon())?;
    for class in BayesModel::CLASSES {
        let s = model.stats(class);
        writeln!(w, "class\t{class}\t{}\t{}\t{}", s.documents, s.prior, s.total)?;
    }
    writeln!(w, "vocabulary\t{}", model.vocabulary().len())?;
    for word in model.vocabulary() {
        check_field(word)?;
        writeln!(w, "v\t{word}")?;
    }
    for class in BayesModel::CLASSES {
        let mut counts: Vec<_> = model.stats(class).counts.iter().collect();
        counts.sort();
        for (word, n) in counts {
            check_field(word)?;
            writeln!(w, "count\t{class}\t{word}\t{n}")?;
        }
    }
    writeln!(w, "end")
}

pub fn load_model(path: &Path) -> Result<BayesModel, CorpusError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_model(&text)
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, CorpusError> {
    s.parse().map_err(|_| format_err(line, format!("bad {what} `{s}`")))
}

fn parse_class(s: &str, line: usize) -> Result<Polarity, CorpusError> {
    match s {
        "positive" => Ok(Polarity::Positive),
        "negative" => Ok(Polarity::Negative),
        other => Err(format_err(line, format!("unknown class `{other}`"))),
    }
}

fn check_header(first: Option<&str>, expected: &'static str) -> Result<(), CorpusError> {
    match first {
        Some(h) if h == expected => Ok(()),
        Some(h) => Err(CorpusError::Version { expected, found: h.to_string() }),
        None => Err(format_err(1, "empty file")),
    }
}

pub fn parse_model(text: &str) -> Result<BayesModel, CorpusError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    check_header(lines.next().map(|(_, l)| l), MODEL_HEADER)?;

    let mut alpha = None;
    let mut tie_epsilon = None;
    let mut stats: HashMap<Polarity, ClassStats> = HashMap::new();
    let mut declared_vocab = None;
    let mut vocabulary = BTreeSet::new();
    let mut ended = false;
    let mut last_line = 1;

    for (no, line) in lines {
        last_line = no;
        if ended {
            return Err(format_err(no, "content after `end`"));
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["alpha", v] => alpha = Some(parse_num::<f64>(v, no, "alpha")?),
            ["tie_epsilon", v] => tie_epsilon = Some(parse_num::<f64>(v, no, "tie_epsilon")?),
            ["class", c, docs, prior, total] => {
                let class = parse_class(c, no)?;
                let entry = ClassStats {
                    documents: parse_num(docs, no, "document count")?,
                    prior: parse_num(prior, no, "prior")?,
                    total: parse_num(total, no, "total")?,
                    counts: HashMap::new(),
                };
                if stats.insert(class, entry).is_some() {
                    return Err(format_err(no, format!("duplicate class `{c}`")));
                }
            }
            ["vocabulary", n] => declared_vocab = Some(parse_num::<usize>(n, no, "vocabulary size")?),
            ["v", word] => {
                vocabulary.insert(word.to_string());
            }
            ["count", c, word, n] => {
                let class = parse_class(c, no)?;
                let n: u64 = parse_num(n, no, "count")?;
                let s = stats
                    .get_mut(&class)
                    .ok_or_else(|| format_err(no, format!("count before class line for `{c}`")))?;
                s.counts.insert(word.to_string(), n);
            }
            ["end"] => ended = true,
            _ => return Err(format_err(no, format!("unrecognised line `{line}`"))),
        }
    }
    if !ended {
        return Err(format_err(last_line, "truncated model: missing `end`"));
    }
    let alpha = alpha.ok_or_else(|| format_err(last_line, "missing alpha"))?;
    let tie_epsilon = tie_epsilon.ok_or_else(|| format_err(last_line, "missing tie_epsilon"))?;
    if declared_vocab != Some(vocabulary.len()) {
        return Err(format_err(last_line, "vocabulary size does not match entries"));
    }
    let pos = stats.remove(&Polarity::Positive).ok_or_else(|| format_err(last_line, "missing positive class"))?;
    let neg = stats.remove(&Polarity::Negative).ok_or_else(|| format_err(last_line, "missing negative class"))?;
    BayesModel::from_parts(pos, neg, vocabulary, alpha, tie_epsilon).map_err(|e| format_err(last_line, e.to_string()))
}

// ---------------------------------------------------------------------------
// indexes

pub fn save_index(index: &ReferenceIndex, path: &Path) -> Result<(), CorpusError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_index(index, &mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

/// One `t` line per word: `t<TAB>word<TAB>doc:pos,pos;doc:pos`.
pub fn write_index(index: &ReferenceIndex, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{INDEX_HEADER}")?;
    writeln!(w, "docs\t{}", index.doc_count())?;
    writeln!(w, "tokens\t{}", index.total_tokens())?;
    let mut words: Vec<_> = index.raw_postings().iter().collect();
    words.sort_by(|a, b| a.0.cmp(b.0));
    writeln!(w, "terms\t{}", words.len())?;
    for (word, list) in words {
        check_field(word)?;
        let encoded: Vec<String> = list
            .iter()
            .map(|p| {
                let pos: Vec<String> = p.positions.iter().map(u32::to_string).collect();
                format!("{}:{}", p.doc, pos.join(","))
            })
            .collect();
        writeln!(w, "t\t{word}\t{}", encoded.join(";"))?;
    }
    writeln!(w, "end")
}

pub fn load_index(path: &Path) -> Result<ReferenceIndex, CorpusError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_index(&text)
}

pub fn parse_index(text: &str) -> Result<ReferenceIndex, CorpusError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    check_header(lines.next().map(|(_, l)| l), INDEX_HEADER)?;
    let mut docs = None;
    let mut tokens = None;
    let mut terms = None;
    let mut postings = HashMap::new();
    let mut ended = false;
    let mut last_line = 1;
    for (no, line) in lines {
        last_line = no;
        if ended {
            return Err(format_err(no, "content after `end`"));
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["docs", n] => docs = Some(parse_num::<u32>(n, no, "document count")?),
            ["tokens", n] => tokens = Some(parse_num::<u64>(n, no, "token count")?),
            ["terms", n] => terms = Some(parse_num::<usize>(n, no, "term count")?),
            ["t", word, encoded] => {
                let mut list = Vec::new();
                for entry in encoded.split(';') {
                    let (doc, pos) = entry.split_once(':').ok_or_else(|| format_err(no, "expected doc:positions"))?;
                    let positions =
                        pos.split(',').map(|p| parse_num::<u32>(p, no, "position")).collect::<Result<Vec<_>, _>>()?;
                    list.push(Posting { doc: parse_num(doc, no, "document id")?, positions });
                }
                if postings.insert(word.to_string(), list).is_some() {
                    return Err(format_err(no, format!("duplicate term `{word}`")));
                }
            }
            ["end"] => ended = true,
            _ => return Err(format_err(no, format!("unrecognised line `{line}`"))),
        }
    }
    if !ended {
        return Err(format_err(last_line, "truncated index: missing `end`"));
    }
    if terms != Some(postings.len()) {
        return Err(format_err(last_line, "term count does not match entries"));
    }
    let docs = docs.ok_or_else(|| format_err(last_line, "missing docs"))?;
    let tokens = tokens.ok_or_else(|| format_err(last_line, "missing tokens"))?;
    ReferenceIndex::from_parts(postings, docs, tokens).map_err(|e| format_err(last_line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::train;
    use crate::index::{IndexBuilder, Term};
    use crate::text::Tokenizer;

    fn plain(src: &str) -> LoadedCorpus {
        parse_corpus(src.as_bytes(), "Test", CorpusFormat::PlainText).unwrap()
    }

    #[test]
    fn blank_lines_skipped() {
        let loaded = plain("Democracy is a beautiful thing :)\n\n");
        assert_eq!(loaded.corpus.len(), 1);
        assert_eq!(loaded.report.skipped_blank, 1);
        assert_eq!(loaded.corpus.tweets[0].id, "0");
        assert_eq!(loaded.corpus.tweets[0].corpus, "Test");
    }

    #[test]
    fn json_lines_keep_file_order() {
        let src = concat!(
            r#"{"id": "b", "text": "second :)"}"#,
            "\n",
            r#"{"id": "a", "text": "first :("}"#,
            "\n",
            r#"{"id": 7, "text": "third"}"#,
            "\n"
        );
        let loaded = parse_corpus(src.as_bytes(), "J", CorpusFormat::JsonLines).unwrap();
        let ids: Vec<_> = loaded.corpus.tweets.iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["b", "a", "7"]);
        assert!(loaded.report.errors.is_empty());
    }

    #[test]
    fn bad_records_reported_and_skipped() {
        let src = concat!(
            r#"{"id": "1", "text": "ok"}"#,
            "\n",
            "not json\n",
            r#"{"id": "1", "text": "dup"}"#,
            "\n",
            r#"{"id": "2", "text": "   "}"#,
            "\n",
            r#"{"id": "3", "text": "fine"}"#,
        );
        let loaded = parse_corpus(src.as_bytes(), "J", CorpusFormat::JsonLines).unwrap();
        assert_eq!(loaded.corpus.len(), 2);
        let lines: Vec<_> = loaded.report.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, [2, 3]);
        assert_eq!(loaded.report.skipped_blank, 1);
    }

    #[test]
    fn invalid_utf8_is_a_record_error() {
        let loaded = parse_corpus(b"good\n\xff\xfe\nbad\n", "X", CorpusFormat::PlainText).unwrap();
        assert_eq!(loaded.corpus.len(), 2);
        assert_eq!(loaded.report.errors[0].line, 2);
        // ids stay dense
        assert_eq!(loaded.corpus.tweets[1].id, "1");
    }

    #[test]
    fn missing_file() {
        let err = load_corpus(Path::new("/definitely/not/here.txt"), "X").unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn deterministic() {
        let src = "a :)\nb :(\n\nc\n";
        assert_eq!(plain(src), plain(src));
    }

    #[test]
    fn corpus_validation() {
        assert!(matches!(Corpus::from_texts("", &["x"]), Err(CorpusError::EmptyName)));
        let dup = vec![Tweet::new("1", "a", "c"), Tweet::new("1", "b", "c")];
        assert!(matches!(Corpus::new("c", dup), Err(CorpusError::DuplicateId(_))));
    }

    fn small_model() -> BayesModel {
        let corpus = Corpus::from_texts("T", &["good fun :)", "bad sad :("]).unwrap();
        train(&corpus, &Tokenizer::default(), 1.0).unwrap().0
    }

    #[test]
    fn model_round_trip() {
        let model = small_model();
        let mut buf = Vec::new();
        write_model(&model, &mut buf).unwrap();
        let back = parse_model(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.stats(Polarity::Positive).documents, 1);
        let a: BTreeSet<_> = model.vocabulary().iter().collect();
        let b: BTreeSet<_> = back.vocabulary().iter().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn model_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.model");
        let model = small_model();
        save_model(&model, &path).unwrap();
        assert_eq!(load_model(&path).unwrap(), model);
    }

    #[test]
    fn truncated_model_is_format_error() {
        let mut buf = Vec::new();
        write_model(&small_model(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let cut: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_model(&cut), Err(CorpusError::Format { .. })));
    }

    #[test]
    fn version_mismatch() {
        let err = parse_model("tweetsense-model v2\nend\n").unwrap_err();
        assert!(matches!(err, CorpusError::Version { .. }));
        let err = parse_index("tweetsense-model v1\nend\n").unwrap_err();
        assert!(matches!(err, CorpusError::Version { .. }));
    }

    #[test]
    fn index_round_trip() {
        let mut b = IndexBuilder::new();
        b.add_words(&["good", "food", "good"]);
        b.add_words(&["poor", "service"]);
        let idx = b.finish().unwrap();
        let mut buf = Vec::new();
        write_index(&idx, &mut buf).unwrap();
        let back = parse_index(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.hits(&Term::word("good")), 1);
    }

    #[test]
    fn truncated_index_is_format_error() {
        let text = "tweetsense-index v1\ndocs\t1\ntokens\t1\nterms\t1\nt\ta\t0:0\n";
        assert!(matches!(parse_index(text), Err(CorpusError::Format { .. })));
    }
}
