use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tweetsense::bayes::{train_texts, DEFAULT_ALPHA, DEFAULT_TIE_EPSILON};
use tweetsense::eval::{
    compare, run_report, write_agreement_csv, write_reports_csv, BayesPipeline, PolarityClassifier, TurneyPipeline,
};
use tweetsense::so::{SoScorer, DEFAULT_NEGATIVE_REF, DEFAULT_POSITIVE_REF};
use tweetsense::text::Tokenizer;
use tweetsense::{
    load_corpus, load_index, load_model, save_index, save_model, BayesModel, Corpus, EmoticonLexicon, ReferenceIndex,
    ReferenceWords, TaggerLexicon,
};

const LEXICON_DIR_ENV: &str = "TWEETSENSE_LEXICON_DIR";

/// Tweet polarity detection with emoticon-trained Naive Bayes and
/// PMI-based semantic orientation.
#[derive(Parser, Debug)]
#[command(name = "tweetsense", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every tweet of each corpus and print one CSV row per corpus and method.
    Classify(ClassifyArgs),
    /// Train a Naive Bayes model from emoticon-labeled tweets and save it.
    Train(TrainArgs),
    /// Build a positional reference index for semantic orientation and save it.
    Index(IndexArgs),
    /// Run both methods and print a per-corpus agreement table.
    Compare(CompareArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Bayes,
    Turney,
    Both,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Corpus file, as PATH or NAME=PATH (repeatable; name defaults to the file stem).
    /// `.jsonl`/`.ndjson` files hold {"id","text"} records, anything else one tweet per line.
    #[arg(long = "corpus", value_name = "[NAME=]PATH", required = true, value_parser = parse_corpus_spec)]
    corpora: Vec<CorpusSpec>,

    /// Extra emoticons, one `emoticon<TAB>positive|negative` per line, added to the built-in eight.
    #[arg(long, value_name = "PATH")]
    emoticons: Option<PathBuf>,

    /// Tagger lexicon replacing the shipped one (`word<TAB>TAG` lines, then a `[suffix]` section).
    #[arg(long, value_name = "PATH")]
    tagger_lexicon: Option<PathBuf>,

    /// Directory searched for `emoticons.tsv` and `tagger.tsv` when the flags above are absent.
    #[arg(long, value_name = "DIR", env = LEXICON_DIR_ENV)]
    lexicon_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BayesArgs {
    /// Laplace smoothing constant, must be > 0.
    #[arg(long, default_value_t = DEFAULT_ALPHA, value_parser = parse_alpha)]
    alpha: f64,

    /// Score gap at or below which Naive Bayes answers neutral.
    #[arg(long, default_value_t = DEFAULT_TIE_EPSILON, value_parser = parse_non_negative)]
    tie_epsilon: f64,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    bayes: BayesArgs,

    /// Saved model to use instead of training on the corpora.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,

    /// Saved reference index to use instead of indexing the corpora.
    #[arg(long, value_name = "PATH", conflicts_with = "background")]
    index: Option<PathBuf>,

    /// Background corpus to index for semantic orientation (repeatable; default: the corpora themselves).
    #[arg(long, value_name = "[NAME=]PATH", value_parser = parse_corpus_spec)]
    background: Vec<CorpusSpec>,

    /// Positive reference word.
    #[arg(long, default_value = DEFAULT_POSITIVE_REF)]
    pos_ref: String,

    /// Negative reference word.
    #[arg(long, default_value = DEFAULT_NEGATIVE_REF)]
    neg_ref: String,

    /// Fraction of each corpus, taken from its end, kept out of Bayes training and reported on alone.
    #[arg(long, default_value_t = 0.0, value_parser = parse_fraction)]
    holdout: f64,

    /// Write CSV here instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Which classifier(s) to run.
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,

    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    bayes: BayesArgs,

    /// Where to write the model.
    #[arg(long, short, value_name = "PATH", default_value = "tweetsense.model")]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct IndexArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Where to write the index.
    #[arg(long, short, value_name = "PATH", default_value = "tweetsense.index")]
    output: PathBuf,
}

#[derive(Clone, Debug)]
struct CorpusSpec {
    name: String,
    path: PathBuf,
}

fn parse_corpus_spec(s: &str) -> Result<CorpusSpec, String> {
    if let Some((name, path)) = s.split_once('=') {
        if name.is_empty() || path.is_empty() {
            return Err("expected PATH or NAME=PATH".into());
        }
        return Ok(CorpusSpec { name: name.to_string(), path: PathBuf::from(path) });
    }
    if s.is_empty() {
        return Err("empty path".into());
    }
    let path = PathBuf::from(s);
    let name = path
        .file_stem()
        .and_then(|n| n.to_str())
        .filter(|n| !n.is_empty())
        .ok_or_else(|| format!("cannot derive a corpus name from `{s}`; use NAME=PATH"))?
        .to_string();
    Ok(CorpusSpec { name, path })
}

fn parse_float(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let v = parse_float(s)?;
    if v <= 0.0 {
        return Err("alpha must be > 0".into());
    }
    Ok(v)
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v = parse_float(s)?;
    if v < 0.0 {
        return Err("must be >= 0".into());
    }
    Ok(v)
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v = parse_float(s)?;
    if !(0.0..1.0).contains(&v) {
        return Err("must be in [0, 1)".into());
    }
    Ok(v)
}

struct Lexicons {
    tokenizer: Tokenizer,
    tagger: TaggerLexicon,
}

impl InputArgs {
    fn fallback(&self, explicit: &Option<PathBuf>, file: &str) -> Option<PathBuf> {
        explicit.clone().or_else(|| {
            let p = self.lexicon_dir.as_ref()?.join(file);
            p.is_file().then_some(p)
        })
    }

    fn lexicons(&self) -> Result<Lexicons> {
        let mut emoticons = EmoticonLexicon::default();
        if let Some(p) = self.fallback(&self.emoticons, "emoticons.tsv") {
            emoticons.extend_from_file(&p).with_context(|| format!("loading emoticons from {}", p.display()))?;
        }
        let tagger = match self.fallback(&self.tagger_lexicon, "tagger.tsv") {
            Some(p) => {
                TaggerLexicon::from_file(&p).with_context(|| format!("loading tagger lexicon from {}", p.display()))?
            }
            None => TaggerLexicon::shipped(),
        };
        Ok(Lexicons { tokenizer: Tokenizer::new(emoticons), tagger })
    }
}

fn load_all(specs: &[CorpusSpec]) -> Result<Vec<Corpus>> {
    specs
        .iter()
        .map(|spec| {
            let loaded =
                load_corpus(&spec.path, &spec.name).with_context(|| format!("loading corpus `{}`", spec.name))?;
            for e in &loaded.report.errors {
                eprintln!("warning: {}:{}: {} (record skipped)", spec.path.display(), e.line, e.message);
            }
            if loaded.corpus.is_empty() {
                bail!("corpus `{}` ({}) has no tweets", spec.name, spec.path.display());
            }
            Ok(loaded.corpus)
        })
        .collect()
}

/// Splits off the trailing `fraction` of the tweets. With 0 the test part is the whole corpus.
fn split(corpus: &Corpus, fraction: f64) -> Result<(Corpus, Corpus)> {
    if fraction == 0.0 {
        return Ok((corpus.clone(), corpus.clone()));
    }
    let n = corpus.len();
    let held = ((n as f64) * fraction).round() as usize;
    if held == 0 || held == n {
        bail!("holdout {fraction} leaves corpus `{}` ({n} tweets) without a train or test part", corpus.name);
    }
    let cut = n - held;
    let train = Corpus::new(corpus.name.clone(), corpus.tweets[..cut].to_vec())?;
    let test = Corpus::new(corpus.name.clone(), corpus.tweets[cut..].to_vec())?;
    Ok((train, test))
}

fn train_model(corpora: &[Corpus], lex: &Lexicons, bayes: &BayesArgs) -> Result<BayesModel> {
    let texts = corpora.iter().flat_map(|c| c.tweets.iter().map(|t| t.text.as_str()));
    let (model, report) = train_texts(texts, &lex.tokenizer, bayes.alpha).context("training Naive Bayes")?;
    eprintln!(
        "trained on {} positive and {} negative tweets ({} without emoticons, {} conflicting; excluded)",
        report.positive, report.negative, report.unlabeled, report.conflicting
    );
    Ok(model.with_tie_epsilon(bayes.tie_epsilon)?)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Everything a classify or compare run needs, prepared once.
struct Prepared {
    lex: Lexicons,
    tests: Vec<Corpus>,
    model: Option<BayesModel>,
    index: Option<ReferenceIndex>,
    refs: ReferenceWords,
}

impl Prepared {
    fn new(run: &RunArgs, want_bayes: bool, want_turney: bool) -> Result<Self> {
        let lex = run.input.lexicons()?;
        let corpora = load_all(&run.input.corpora)?;
        let mut trains = Vec::new();
        let mut tests = Vec::new();
        for c in &corpora {
            let (train, test) = split(c, run.holdout)?;
            trains.push(train);
            tests.push(test);
        }
        let refs = ReferenceWords::new(&run.pos_ref, &run.neg_ref)?;

        let model = if !want_bayes {
            None
        } else if let Some(p) = &run.model {
            let m = load_model(p).with_context(|| format!("loading model {}", p.display()))?;
            Some(m.with_tie_epsilon(run.bayes.tie_epsilon)?)
        } else {
            Some(train_model(&trains, &lex, &run.bayes)?)
        };

        let index = if !want_turney {
            None
        } else if let Some(p) = &run.index {
            Some(load_index(p).with_context(|| format!("loading index {}", p.display()))?)
        } else {
            let reference = if run.background.is_empty() { corpora } else { load_all(&run.background)? };
            Some(ReferenceIndex::build(&reference, &lex.tokenizer).context("building reference index")?)
        };

        Ok(Prepared { lex, tests, model, index, refs })
    }

    fn bayes(&self) -> Option<BayesPipeline<'_>> {
        self.model.as_ref().map(|model| BayesPipeline { model, tokenizer: &self.lex.tokenizer })
    }

    fn turney(&self) -> Result<Option<TurneyPipeline<'_>>> {
        let Some(index) = &self.index else { return Ok(None) };
        let scorer = SoScorer::new(index, self.refs.clone())?;
        Ok(Some(TurneyPipeline { scorer, tokenizer: &self.lex.tokenizer, tagger: &self.lex.tagger }))
    }
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let want_bayes = args.method != Method::Turney;
    let want_turney = args.method != Method::Bayes;
    let prep = Prepared::new(&args.run, want_bayes, want_turney)?;
    let bayes = prep.bayes();
    let turney = prep.turney()?;
    let mut methods: Vec<&dyn PolarityClassifier> = Vec::new();
    if let Some(b) = &bayes {
        methods.push(b);
    }
    if let Some(t) = &turney {
        methods.push(t);
    }

    let mut reports = Vec::new();
    for corpus in &prep.tests {
        for m in &methods {
            reports.push(run_report(corpus, *m).with_context(|| format!("classifying `{}`", corpus.name))?);
        }
    }
    write_reports_csv(&reports, open_output(&args.run.output)?)?;
    Ok(())
}

fn compare_cmd(args: CompareArgs) -> Result<()> {
    let prep = Prepared::new(&args.run, true, true)?;
    let bayes = prep.bayes().expect("model prepared");
    let turney = prep.turney()?.expect("index prepared");
    let reports = prep
        .tests
        .iter()
        .map(|c| compare(c, &bayes, &turney).with_context(|| format!("comparing on `{}`", c.name)))
        .collect::<Result<Vec<_>>>()?;
    write_agreement_csv(&reports, open_output(&args.run.output)?)?;
    Ok(())
}

fn train_cmd(args: TrainArgs) -> Result<()> {
    let lex = args.input.lexicons()?;
    let corpora = load_all(&args.input.corpora)?;
    let model = train_model(&corpora, &lex, &args.bayes)?;
    save_model(&model, &args.output).with_context(|| format!("saving model to {}", args.output.display()))?;
    eprintln!("model written to {}", args.output.display());
    Ok(())
}

fn index_cmd(args: IndexArgs) -> Result<()> {
    let lex = args.input.lexicons()?;
    let corpora = load_all(&args.input.corpora)?;
    let index = ReferenceIndex::build(&corpora, &lex.tokenizer).context("building reference index")?;
    save_index(&index, &args.output).with_context(|| format!("saving index to {}", args.output.display()))?;
    eprintln!(
        "indexed {} tweets, {} terms, written to {}",
        index.doc_count(),
        index.vocabulary().count(),
        args.output.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(a) => classify(a),
        Command::Train(a) => train_cmd(a),
        Command::Index(a) => index_cmd(a),
        Command::Compare(a) => compare_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
