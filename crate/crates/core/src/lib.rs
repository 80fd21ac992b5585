//! Opinion polarity detection for tweets.
//!
//! Two classifiers share one tokenizer:
//!
//! * [`bayes`]: multinomial Naive Bayes whose training labels come from the
//!   emoticons in each tweet;
//! * [`so`]: unsupervised semantic orientation. Adjective/adverb phrases are
//!   pulled out with a rule-based tagger ([`pos`], [`phrase`]) and scored by
//!   their proximity to "excellent" versus "poor" in a local
//!   co-occurrence index ([`index`]).
//!
//! [`eval`] runs either method over corpora and tabulates the results.

pub mod bayes;
pub mod corpus;
pub mod eval;
pub mod index;
pub mod phrase;
pub mod pos;
pub mod so;
pub mod text;

pub use bayes::{train, BayesModel, TrainingReport};
pub use corpus::{load_corpus, load_index, load_model, save_index, save_model, Corpus, Tweet};
pub use eval::{compare, run_report, AgreementReport, ClassificationReport};
pub use index::{ReferenceIndex, Term};
pub use phrase::{extract, CandidatePhrase};
pub use pos::{tag, PosTag, TaggerLexicon};
pub use so::{classify_tweet, pmi, so_phrase, ReferenceWords, SoScore};
pub use text::{emoticon_polarity, strip_emoticons, tokenize, EmoticonLexicon, Polarity, Token, TokenKind};
