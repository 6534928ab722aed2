//! Versioned binary priors file.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! "KEXP" | u16 version | u8 flags (bit 0: topic model present)
//! term stats: u64 doc_count | u64 total_tokens
//!             u32 n | n × str doc_id
//!             u32 n | n × (str stem, u64 df, u64 corpus_tf)
//! topics:     u32 K | f64 alpha | f64 beta | u32 iterations | u64 seed
//!             u32 V | V × (str stem, K × u32 count)
//!             u32 D | D × (str doc_id, K × f64)
//! ```
//!
//! `str` is a u32 byte length followed by UTF-8. Maps are written in key order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lda::{LdaConfig, TopicModel};
use super::term_stats::TermStats;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"KEXP";
pub const VERSION: u16 = 1;
const FLAG_TOPICS: u8 = 1;

/// Everything fitted on a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub term_stats: TermStats,
    pub topics: Option<TopicModel>,
}

impl Priors {
    pub fn new(term_stats: TermStats) -> Self {
        Priors { term_stats, topics: None }
    }

    pub fn with_topics(mut self, topics: TopicModel) -> Self {
        self.topics = Some(topics);
        self
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(MAGIC);
        w.u16(VERSION);
        w.u8(if self.topics.is_some() { FLAG_TOPICS } else { 0 });

        let s = &self.term_stats;
        w.u64(s.doc_count);
        w.u64(s.total_tokens);
        w.len(s.doc_ids.len());
        for id in &s.doc_ids {
            w.str(id);
        }
        w.len(s.df.len());
        for (stem, &df) in &s.df {
            w.str(stem);
            w.u64(df);
            w.u64(s.corpus_tf(stem));
        }

        if let Some(t) = &self.topics {
            let c = &t.config;
            w.len(c.num_topics);
            w.f64(c.alpha);
            w.f64(c.beta);
            w.len(c.iterations);
            w.u64(c.seed);
            w.len(t.word_counts.len());
            for (stem, row) in &t.word_counts {
                w.str(stem);
                row.iter().for_each(|&x| w.u32(x));
            }
            w.len(t.doc_topic.len());
            for (id, row) in &t.doc_topic {
                w.str(id);
                row.iter().for_each(|&x| w.f64(x));
            }
        }
        w.0
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("missing KEXP magic".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let flags = r.u8()?;
        if flags & !FLAG_TOPICS != 0 {
            return Err(Error::Format(format!("unknown flags {flags:#04x}")));
        }

        let doc_count = r.u64()?;
        let total_tokens = r.u64()?;
        let mut doc_ids = BTreeSet::new();
        for _ in 0..r.u32()? {
            doc_ids.insert(r.str()?);
        }
        let mut df = BTreeMap::new();
        let mut corpus_tf = BTreeMap::new();
        for _ in 0..r.u32()? {
            let stem = r.str()?;
            let d = r.u64()?;
            let f = r.u64()?;
            if d == 0 || d > doc_count || f < d {
                return Err(Error::Format(format!(
                    "inconsistent counts for `{stem}`: df={d}, tf={f}, docs={doc_count}"
                )));
            }
            df.insert(stem.clone(), d);
            corpus_tf.insert(stem, f);
        }
        let term_stats = TermStats { doc_count, df, corpus_tf, total_tokens, doc_ids };

        let topics = if flags & FLAG_TOPICS != 0 {
            let k = r.u32()? as usize;
            let alpha = r.f64()?;
            let beta = r.f64()?;
            let iterations = r.u32()? as usize;
            let seed = r.u64()?;
            let config = LdaConfig { num_topics: k, alpha, beta, iterations, seed };
            let mut word_counts = BTreeMap::new();
            for _ in 0..r.u32()? {
                let stem = r.str()?;
                let row = (0..k).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
                word_counts.insert(stem, row);
            }
            let mut doc_topic = BTreeMap::new();
            for _ in 0..r.u32()? {
                let id = r.str()?;
                let row = (0..k).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
                doc_topic.insert(id, row);
            }
            Some(TopicModel::from_parts(config, word_counts, doc_topic)?)
        } else {
            None
        };
        if r.pos != bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Priors { term_stats, topics })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// Human-readable export; not read back.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn len(&mut self, n: usize) {
        self.u32(u32::try_from(n).expect("length fits in u32"));
    }
    fn str(&mut self, s: &str) {
        self.len(s.len());
        self.0.extend_from_slice(s.as_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }
    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("slice of length N"))
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array()?))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let at = self.pos;
        String::from_utf8(self.take(n)?.to_vec())
            .map_err(|_| Error::Format(format!("invalid UTF-8 string at byte {at}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats() -> TermStats {
        TermStats {
            doc_count: 2,
            df: BTreeMap::from([("appl".into(), 1), ("banana".into(), 2)]),
            corpus_tf: BTreeMap::from([("appl".into(), 2), ("banana".into(), 2)]),
            total_tokens: 5,
            doc_ids: BTreeSet::from(["d1".into(), "d2".into()]),
        }
    }

    fn topics() -> TopicModel {
        TopicModel::from_parts(
            LdaConfig::with_topics(2),
            BTreeMap::from([("appl".into(), vec![3, 0]), ("banana".into(), vec![1, 2])]),
            BTreeMap::from([("d1".into(), vec![0.75, 0.25]), ("d2".into(), vec![0.1, 0.9])]),
        )
        .unwrap()
    }

    #[test]
    fn header_bytes() {
        let b = Priors::new(stats()).to_bytes();
        assert_eq!(&b[..4], b"KEXP");
        assert_eq!(&b[4..6], &[1, 0]);
        assert_eq!(b[6], 0);
        assert_eq!(Priors::new(stats()).with_topics(topics()).to_bytes()[6], 1);
    }

    #[test]
    fn round_trip() {
        for p in [Priors::new(stats()), Priors::new(stats()).with_topics(topics())] {
            assert_eq!(Priors::from_bytes(&p.to_bytes()).unwrap(), p);
        }
    }

    #[test]
    fn file_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("p.kexp");
        let p = Priors::new(stats()).with_topics(topics());
        p.save(&path).unwrap();
        assert_eq!(Priors::load(&path).unwrap(), p);
        assert!(matches!(Priors::load(&tmp.path().join("missing")), Err(Error::Io { .. })));
    }

    #[test]
    fn rejects_corruption() {
        let good = Priors::new(stats()).with_topics(topics()).to_bytes();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(Priors::from_bytes(&bad), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[4] = 9;
        assert!(matches!(Priors::from_bytes(&bad), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[6] = 0x80;
        assert!(matches!(Priors::from_bytes(&bad), Err(Error::Format(_))));
        for cut in [3, 7, 20, good.len() - 1] {
            assert!(matches!(Priors::from_bytes(&good[..cut]), Err(Error::Format(_))));
        }
        let mut long = good.clone();
        long.push(0);
        assert!(matches!(Priors::from_bytes(&long), Err(Error::Format(_))));
    }

    #[test]
    fn json_export() {
        let j = Priors::new(stats()).with_topics(topics()).to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["term_stats"]["df"]["banana"], 2);
        assert_eq!(v["topics"]["config"]["num_topics"], 2);
    }
}
