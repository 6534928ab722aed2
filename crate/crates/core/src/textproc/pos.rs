//! Coarse part-of-speech tagging: lexicon lookup with suffix fallbacks.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static ENGLISH_LEXICON: &str = include_str!("../../data/lexicon_en.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Adj,
    Other,
}

impl Pos {
    /// Maps a Penn Treebank tag onto the coarse tag set (`NN*` nouns, `JJ*` adjectives).
    pub fn from_penn(tag: &str) -> Pos {
        if tag.starts_with("NN") {
            Pos::Noun
        } else if tag.starts_with("JJ") {
            Pos::Adj
        } else {
            Pos::Other
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pos::Noun => "NOUN",
            Pos::Adj => "ADJ",
            Pos::Other => "OTHER",
        })
    }
}

impl FromStr for Pos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NOUN" => Ok(Pos::Noun),
            "ADJ" => Ok(Pos::Adj),
            "OTHER" => Ok(Pos::Other),
            other => Err(Error::InvalidArgument(format!("unknown tag `{other}`"))),
        }
    }
}

/// Word to coarse tag table, read from `word<TAB>tag` lines.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, Pos>,
}

impl Lexicon {
    /// Parses TSV content. Blank lines and `#` comments are ignored; the first
    /// entry for a word wins.
    pub fn parse(content: &str, origin: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tag) = line.split_once('\t').ok_or_else(|| Error::Parse {
                path: origin.to_path_buf(),
                line: lineno + 1,
                message: "expected `word<TAB>tag`".into(),
            })?;
            let tag = tag.trim().parse::<Pos>().map_err(|e| Error::Parse {
                path: origin.to_path_buf(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
            entries.entry(word.to_string()).or_insert(tag);
        }
        Ok(Lexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content, path)
    }

    /// The bundled English lexicon (derived from the Brill tagger lexicon).
    pub fn english() -> Arc<Lexicon> {
        static CELL: OnceLock<Arc<Lexicon>> = OnceLock::new();
        CELL.get_or_init(|| {
            Arc::new(
                Lexicon::parse(ENGLISH_LEXICON, Path::new("<bundled lexicon>"))
                    .expect("bundled lexicon is well formed"),
            )
        })
        .clone()
    }

    /// Exact lookup first, then lowercase.
    pub fn get(&self, word: &str) -> Option<Pos> {
        self.entries.get(word).copied().or_else(|| {
            let lower = word.to_lowercase();
            if lower != word {
                self.entries.get(&lower).copied()
            } else {
                None
            }
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Assigns coarse tags to the words of one sentence.
pub trait PosTagger: Send + Sync {
    fn tag_sentence(&self, words: &[&str]) -> Vec<Pos>;
}

const NOUN_SUFFIXES: &[&str] = &["ness", "tion", "ity", "ment", "er", "ism"];
const ADJ_SUFFIXES: &[&str] = &["ous", "ful", "ive", "able", "al", "ic"];

fn suffix_tag(lower: &str) -> Option<Pos> {
    let fits = |suf: &&str| lower.len() > suf.len() + 1 && lower.ends_with(*suf);
    if NOUN_SUFFIXES.iter().any(fits) {
        Some(Pos::Noun)
    } else if ADJ_SUFFIXES.iter().any(fits) {
        Some(Pos::Adj)
    } else {
        None
    }
}

/// Tags a single word given whether it starts its sentence.
pub fn tag_word(lexicon: &Lexicon, word: &str, sentence_initial: bool) -> Pos {
    if let Some(tag) = lexicon.get(word) {
        return tag;
    }
    let lower = word.to_lowercase();
    if let Some(tag) = suffix_tag(&lower) {
        return tag;
    }
    let capitalized = word.chars().next().is_some_and(char::is_uppercase);
    let has_digit = word.chars().any(|c| c.is_ascii_digit());
    let has_alpha = word.chars().any(char::is_alphabetic);
    if (capitalized && !sentence_initial) || (has_digit && has_alpha) {
        Pos::Noun
    } else {
        Pos::Other
    }
}

/// Tags `words`, treating the first one as sentence-initial.
pub fn pos_tag(lexicon: &Lexicon, words: &[&str]) -> Vec<Pos> {
    words.iter().enumerate().map(|(i, w)| tag_word(lexicon, w, i == 0)).collect()
}

#[derive(Debug, Clone)]
pub struct LexiconTagger {
    lexicon: Arc<Lexicon>,
}

impl LexiconTagger {
    pub fn new(lexicon: Arc<Lexicon>) -> Self {
        LexiconTagger { lexicon }
    }

    pub fn english() -> Self {
        Self::new(Lexicon::english())
    }
}

impl PosTagger for LexiconTagger {
    fn tag_sentence(&self, words: &[&str]) -> Vec<Pos> {
        pos_tag(&self.lexicon, words)
    }
}
