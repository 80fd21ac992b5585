//! Two-word candidate phrase extraction over a sliding tag window.
//!
//! | row | first word       | second word          | third word (not extracted) |
//! |-----|------------------|----------------------|----------------------------|
//! | 1   | JJ               | NN, NNS              | anything                   |
//! | 2   | RB, RBR, RBS     | JJ                   | not NN nor NNS             |
//! | 3   | JJ               | JJ                   | not NN nor NNS             |
//! | 4   | NN, NNS          | JJ                   | not NN nor NNS             |
//! | 5   | RB, RBR, RBS     | VB, VBD, VBN, VBG    | anything                   |
//!
//! A missing third word (end of tweet) satisfies both third-word columns.
//! Windows slide by one token; matches may overlap.

use crate::pos::{PosTag, TaggedToken};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePhrase {
    pub word1: String,
    pub word2: String,
    /// Table row, 1..=5.
    pub pattern_row: u8,
    /// Token index of `word1`.
    pub position: usize,
}

impl CandidatePhrase {
    /// Normalized words joined by one space.
    pub fn text(&self) -> String {
        format!("{} {}", self.word1, self.word2)
    }
}

fn is_noun(t: PosTag) -> bool {
    matches!(t, PosTag::NN | PosTag::NNS)
}

fn is_adverb(t: PosTag) -> bool {
    matches!(t, PosTag::RB | PosTag::RBR | PosTag::RBS)
}

fn is_verb(t: PosTag) -> bool {
    matches!(t, PosTag::VB | PosTag::VBD | PosTag::VBN | PosTag::VBG)
}

/// Pattern row matched by a tag window, if any. `third` is `None` past the end.
pub fn match_row(first: PosTag, second: PosTag, third: Option<PosTag>) -> Option<u8> {
    if first.is_proper_noun() || second.is_proper_noun() {
        return None;
    }
    let third_not_noun = !third.is_some_and(is_noun);
    let row = if first == PosTag::JJ && is_noun(second) {
        1
    } else if is_adverb(first) && second == PosTag::JJ && third_not_noun {
        2
    } else if first == PosTag::JJ && second == PosTag::JJ && third_not_noun {
        3
    } else if is_noun(first) && second == PosTag::JJ && third_not_noun {
        4
    } else if is_adverb(first) && is_verb(second) {
        5
    } else {
        return None;
    };
    Some(row)
}

pub fn extract(tagged: &[TaggedToken]) -> Vec<CandidatePhrase> {
    tagged
        .windows(2)
        .enumerate()
        .filter_map(|(i, pair)| {
            let third = tagged.get(i + 2).map(|t| t.tag);
            match_row(pair[0].tag, pair[1].tag, third).map(|row| CandidatePhrase {
                word1: pair[0].token.normalized.clone(),
                word2: pair[1].token.normalized.clone(),
                pattern_row: row,
                position: pair[0].token.position,
            })
        })
        .collect()
}
