//! `(ADJ)*(NOUN)+` candidate phrase chunking.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Pos, StopWords, Token};

/// A candidate keyphrase, merged over all its occurrences by stem key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePhrase {
    pub stems: Vec<String>,
    /// Surface form of the first occurrence.
    pub surface: String,
    /// Half-open token ranges `[start, end)`, sorted by start.
    pub occurrences: Vec<(usize, usize)>,
}

impl CandidatePhrase {
    /// Space-joined stems; the identity of the candidate.
    pub fn key(&self) -> String {
        self.stems.join(" ")
    }

    pub fn first_position(&self) -> usize {
        self.occurrences[0].0
    }

    pub fn len(&self) -> usize {
        self.stems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }
}

/// Chunks tokens into candidate phrases.
///
/// Within a sentence, runs of non-stopword ADJ/NOUN tokens are matched
/// greedily left to right against `(ADJ)*(NOUN)+`. Candidates are returned in
/// order of first occurrence.
pub fn extract_candidates(tokens: &[Token], stopwords: &StopWords) -> Vec<CandidatePhrase> {
    let eligible = |t: &Token| t.pos != Pos::Other && !stopwords.contains(&t.surface);

    let mut out: Vec<CandidatePhrase> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut emit = |span: &[Token]| {
        let stems: Vec<String> = span.iter().map(|t| t.stem.clone()).collect();
        let key = stems.join(" ");
        let range = (span[0].position, span[span.len() - 1].position + 1);
        match index.get(&key) {
            Some(&i) => out[i].occurrences.push(range),
            None => {
                index.insert(key, out.len());
                out.push(CandidatePhrase {
                    stems,
                    surface: span.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "),
                    occurrences: vec![range],
                });
            }
        }
    };

    let mut i = 0;
    while i < tokens.len() {
        if !eligible(&tokens[i]) {
            i += 1;
            continue;
        }
        let sentence = tokens[i].sentence_index;
        let same_run = |j: usize| j < tokens.len() && tokens[j].sentence_index == sentence && eligible(&tokens[j]);
        let start = i;
        let mut j = i;
        while same_run(j) && tokens[j].pos == Pos::Adj {
            j += 1;
        }
        let nouns_start = j;
        while same_run(j) && tokens[j].pos == Pos::Noun {
            j += 1;
        }
        if j > nouns_start {
            emit(&tokens[start..j]);
            i = j;
        } else {
            // adjectives not followed by a noun; resume after them
            i = nouns_start.max(start + 1);
        }
    }
    out
}

/// True when `tags` is in the language `(ADJ)*(NOUN)+`.
pub fn matches_pattern(tags: &[Pos]) -> bool {
    let adjs = tags.iter().take_while(|&&t| t == Pos::Adj).count();
    let rest = &tags[adjs..];
    !rest.is_empty() && rest.iter().all(|&t| t == Pos::Noun)
}
