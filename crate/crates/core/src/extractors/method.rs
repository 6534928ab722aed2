use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The eleven extraction methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MethodId {
    FirstN,
    Tf,
    Tfidf,
    LexSpec,
    TextRank,
    SingleRank,
    PositionRank,
    TopicRank,
    SingleTpr,
    TfidfRank,
    LexRank,
}

/// Corpus prior a method depends on, as grouped in timing reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PriorFamily {
    Tf,
    Tfidf,
    Lda,
    None,
}

impl PriorFamily {
    pub fn label(self) -> &'static str {
        match self {
            PriorFamily::Tf => "tf",
            PriorFamily::Tfidf => "tf-idf",
            PriorFamily::Lda => "LDA",
            PriorFamily::None => "-",
        }
    }
}

impl MethodId {
    pub const ALL: [MethodId; 11] = [
        MethodId::FirstN,
        MethodId::Tf,
        MethodId::Tfidf,
        MethodId::LexSpec,
        MethodId::TextRank,
        MethodId::SingleRank,
        MethodId::PositionRank,
        MethodId::TopicRank,
        MethodId::SingleTpr,
        MethodId::TfidfRank,
        MethodId::LexRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::FirstN => "FirstN",
            MethodId::Tf => "TF",
            MethodId::Tfidf => "TFIDF",
            MethodId::LexSpec => "LexSpec",
            MethodId::TextRank => "TextRank",
            MethodId::SingleRank => "SingleRank",
            MethodId::PositionRank => "PositionRank",
            MethodId::TopicRank => "TopicRank",
            MethodId::SingleTpr => "SingleTPR",
            MethodId::TfidfRank => "TFIDFRank",
            MethodId::LexRank => "LexRank",
        }
    }

    /// Needs corpus term statistics.
    pub fn needs_term_stats(self) -> bool {
        matches!(self, MethodId::Tfidf | MethodId::LexSpec | MethodId::TfidfRank | MethodId::LexRank)
    }

    /// Needs a fitted topic model.
    pub fn needs_topics(self) -> bool {
        self == MethodId::SingleTpr
    }

    pub fn is_graph_based(self) -> bool {
        matches!(
            self,
            MethodId::TextRank
                | MethodId::SingleRank
                | MethodId::PositionRank
                | MethodId::TopicRank
                | MethodId::SingleTpr
                | MethodId::TfidfRank
                | MethodId::LexRank
        )
    }

    pub fn prior_family(self) -> PriorFamily {
        match self {
            MethodId::Tf | MethodId::LexSpec | MethodId::LexRank => PriorFamily::Tf,
            MethodId::Tfidf | MethodId::TfidfRank => PriorFamily::Tfidf,
            MethodId::SingleTpr => PriorFamily::Lda,
            _ => PriorFamily::None,
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are ignored.
    fn from_str(s: &str) -> Result<Self, Error> {
        let norm: String = s.chars().filter(|c| !matches!(c, '-' | '_')).collect::<String>().to_ascii_lowercase();
        MethodId::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

impl TryFrom<String> for MethodId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<MethodId> for String {
    fn from(m: MethodId) -> String {
        m.name().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for m in MethodId::ALL {
            assert_eq!(m.to_string().parse::<MethodId>().unwrap(), m);
            let j = serde_json::to_string(&m).unwrap();
            assert_eq!(serde_json::from_str::<MethodId>(&j).unwrap(), m);
        }
        assert_eq!("single-tpr".parse::<MethodId>().unwrap(), MethodId::SingleTpr);
        assert_eq!("lexspec".parse::<MethodId>().unwrap(), MethodId::LexSpec);
        assert!("pagerank".parse::<MethodId>().is_err());
    }

    #[test]
    fn families() {
        assert_eq!(MethodId::LexRank.prior_family().label(), "tf");
        assert_eq!(MethodId::TfidfRank.prior_family().label(), "tf-idf");
        assert_eq!(MethodId::SingleTpr.prior_family().label(), "LDA");
        assert_eq!(MethodId::TopicRank.prior_family().label(), "-");
        assert!(!MethodId::Tf.needs_term_stats());
    }
}
