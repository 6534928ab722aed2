//! Preprocessing: tokenization, stemming, tagging and candidate extraction.

mod candidates;
mod porter;
mod pos;
mod stopwords;
mod tokenize;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use candidates::{extract_candidates, matches_pattern, CandidatePhrase};
pub use porter::porter_stem;
pub use pos::{pos_tag, tag_word, Lexicon, LexiconTagger, Pos, PosTagger};
pub use stopwords::StopWords;
pub use tokenize::tokenize;

use crate::corpus::{filter_gold, RawDocument};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Porter stem of the lowercased surface.
    pub stem: String,
    pub pos: Pos,
    /// 0-based index in the document's token sequence.
    pub position: usize,
    pub sentence_index: usize,
}

/// A token coming from an external tagger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub pos: Pos,
    pub sentence_index: usize,
}

/// A fully preprocessed document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessedDocument {
    pub id: String,
    pub tokens: Vec<Token>,
    /// Per-token stopword flag, aligned with `tokens`.
    pub stopword: Vec<bool>,
    /// Candidates in order of first occurrence, unique by stem key.
    pub candidates: Vec<CandidatePhrase>,
    /// All gold keyphrases, normalized to stem keys and deduplicated.
    pub gold: BTreeSet<String>,
    /// Gold keys that match a candidate key.
    pub filtered_gold: BTreeSet<String>,
}

impl ProcessedDocument {
    /// Stems of non-stopword tokens, in document order.
    pub fn content_stems(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().zip(&self.stopword).filter(|(_, &sw)| !sw).map(|(t, _)| t.stem.as_str())
    }

    /// Raw in-document counts over non-stopword stems.
    pub fn term_counts(&self) -> BTreeMap<&str, u64> {
        let mut counts = BTreeMap::new();
        for stem in self.content_stems() {
            *counts.entry(stem).or_insert(0) += 1;
        }
        counts
    }

    /// Number of non-stopword tokens (the document length used by the corpus statistics).
    pub fn stat_len(&self) -> u64 {
        self.stopword.iter().filter(|&&sw| !sw).count() as u64
    }

    pub fn candidate_keys(&self) -> impl Iterator<Item = String> + '_ {
        self.candidates.iter().map(CandidatePhrase::key)
    }
}

/// The preprocessing pipeline: stoplist plus tagger.
#[derive(Clone)]
pub struct Pipeline {
    stopwords: Arc<StopWords>,
    tagger: Arc<dyn PosTagger>,
}

impl std::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pipeline").field("stopwords", &self.stopwords.len()).finish_non_exhaustive()
    }
}

impl Default for Pipeline {
    fn default() -> Self {
        Self::english()
    }
}

impl Pipeline {
    pub fn new(stopwords: Arc<StopWords>, tagger: Arc<dyn PosTagger>) -> Self {
        Pipeline { stopwords, tagger }
    }

    /// Bundled YAKE stoplist and lexicon tagger.
    pub fn english() -> Self {
        Self::new(StopWords::english(), Arc::new(LexiconTagger::english()))
    }

    pub fn stopwords(&self) -> &StopWords {
        &self.stopwords
    }

    /// Tokenizes, tags and stems `text`.
    pub fn tokens(&self, text: &str) -> Vec<Token> {
        let raw = tokenize(text);
        let mut tokens = Vec::with_capacity(raw.len());
        let mut start = 0;
        while start < raw.len() {
            let sentence = raw[start].0;
            let end = start + raw[start..].iter().take_while(|(s, _)| *s == sentence).count();
            let words: Vec<&str> = raw[start..end].iter().map(|(_, w)| w.as_str()).collect();
            let tags = self.tagger.tag_sentence(&words);
            for (word, pos) in words.into_iter().zip(tags) {
                tokens.push(Token {
                    surface: word.to_string(),
                    stem: porter_stem(&word.to_lowercase()),
                    pos,
                    position: tokens.len(),
                    sentence_index: sentence,
                });
            }
            start = end;
        }
        tokens
    }

    /// Lowercased, stemmed, whitespace-normalized form of a phrase.
    pub fn normalize_phrase(&self, phrase: &str) -> String {
        tokenize(phrase).into_iter().map(|(_, w)| porter_stem(&w.to_lowercase())).collect::<Vec<_>>().join(" ")
    }

    fn assemble(&self, id: &str, tokens: Vec<Token>, gold: &[String]) -> ProcessedDocument {
        let stopword = tokens.iter().map(|t| self.stopwords.contains(&t.surface)).collect();
        let candidates = extract_candidates(&tokens, &self.stopwords);
        let gold: BTreeSet<String> = gold.iter().map(|g| self.normalize_phrase(g)).filter(|g| !g.is_empty()).collect();
        let mut doc = ProcessedDocument {
            id: id.to_string(),
            tokens,
            stopword,
            candidates,
            gold,
            filtered_gold: BTreeSet::new(),
        };
        doc.filtered_gold = filter_gold(&doc);
        doc
    }

    pub fn process(&self, doc: &RawDocument) -> ProcessedDocument {
        let tokens = self.tokens(&doc.text);
        self.assemble(&doc.id, tokens, &doc.gold)
    }

    /// Builds a document from externally tagged tokens.
    pub fn process_tagged(&self, id: &str, tagged: &[TaggedToken], gold: &[String]) -> ProcessedDocument {
        let tokens = tagged
            .iter()
            .enumerate()
            .map(|(i, t)| Token {
                surface: t.surface.clone(),
                stem: porter_stem(&t.surface.to_lowercase()),
                pos: t.pos,
                position: i,
                sentence_index: t.sentence_index,
            })
            .collect();
        self.assemble(id, tokens, gold)
    }
}
