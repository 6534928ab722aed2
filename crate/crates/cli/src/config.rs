//! Run configuration: defaults, JSON config file, environment and flags.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Args;
use kex_core::extractors::{ExtractorConfig, MethodId};
use kex_core::priors::LdaConfig;
use kex_core::textproc::{Lexicon, LexiconTagger, Pipeline, StopWords};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming a stopword file.
pub const STOPWORDS_ENV: &str = "KEX_STOPWORDS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub datasets: Vec<PathBuf>,
    pub methods: Vec<MethodId>,
    pub top_n: usize,
    pub extractor: ExtractorConfig,
    pub lda_topics: usize,
    /// Defaults to `50 / lda_topics`.
    pub lda_alpha: Option<f64>,
    pub lda_beta: f64,
    pub lda_iterations: usize,
    pub seed: u64,
    pub stopwords: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Worker threads; all cores when unset.
    pub jobs: Option<usize>,
    /// Significance level for the analysis tables.
    pub alpha: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let lda = LdaConfig::default();
        RunConfig {
            datasets: Vec::new(),
            methods: MethodId::ALL.to_vec(),
            top_n: 10,
            extractor: ExtractorConfig::default(),
            lda_topics: lda.num_topics,
            lda_alpha: None,
            lda_beta: lda.beta,
            lda_iterations: lda.iterations,
            seed: lda.seed,
            stopwords: None,
            lexicon: None,
            output_dir: PathBuf::from("kex-out"),
            jobs: None,
            alpha: 0.05,
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Random seed (LDA); echoed into report headers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Stopword file, one word per line.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// POS lexicon, `word<TAB>TAG` per line.
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
    /// Co-occurrence window of the count-weighted graph methods.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Co-occurrence window of TextRank.
    #[arg(long, global = true)]
    pub textrank_window: Option<usize>,
    /// PageRank teleport weight.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// PageRank convergence tolerance (L1).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// PageRank iteration cap.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Keep stopwords as graph nodes.
    #[arg(long, global = true)]
    pub graph_all_words: bool,
    /// TopicRank clustering threshold.
    #[arg(long, global = true)]
    pub topic_threshold: Option<f64>,
    /// Number of LDA topics.
    #[arg(long, global = true)]
    pub topics: Option<usize>,
    /// Gibbs sweeps of the LDA sampler.
    #[arg(long, global = true)]
    pub lda_iterations: Option<usize>,
    /// Number of phrases kept per document.
    #[arg(long = "top", global = true)]
    pub top_n: Option<usize>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::error::io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Defaults, then the config file, then `KEX_STOPWORDS`, then flags.
    pub fn resolve(args: &CommonArgs, env_stopwords: Option<PathBuf>) -> CliResult<Self> {
        let mut c = match &args.config {
            Some(p) => Self::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(p) = env_stopwords {
            c.stopwords = Some(p);
        }
        macro_rules! set {
            ($flag:expr => $field:expr) => {
                if let Some(v) = $flag.clone() {
                    $field = v;
                }
            };
        }
        set!(args.seed => c.seed);
        set!(args.top_n => c.top_n);
        set!(args.window => c.extractor.window);
        set!(args.textrank_window => c.extractor.textrank_window);
        set!(args.lambda => c.extractor.pagerank.lambda);
        set!(args.tol => c.extractor.pagerank.tol);
        set!(args.max_iter => c.extractor.pagerank.max_iter);
        set!(args.topic_threshold => c.extractor.topic_threshold);
        set!(args.topics => c.lda_topics);
        set!(args.lda_iterations => c.lda_iterations);
        if args.jobs.is_some() {
            c.jobs = args.jobs;
        }
        if args.stopwords.is_some() {
            c.stopwords = args.stopwords.clone();
        }
        if args.lexicon.is_some() {
            c.lexicon = args.lexicon.clone();
        }
        if args.graph_all_words {
            c.extractor.graph_all_words = true;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Usage(m));
        let e = &self.extractor;
        if !(0.0..=1.0).contains(&e.pagerank.lambda) {
            return bad(format!("lambda must lie in [0, 1], got {}", e.pagerank.lambda));
        }
        if e.window < 2 || e.textrank_window < 2 {
            return bad("windows must be at least 2".into());
        }
        if !(e.topic_threshold > 0.0 && e.topic_threshold <= 1.0) {
            return bad(format!("topic threshold must lie in (0, 1], got {}", e.topic_threshold));
        }
        if self.top_n == 0 {
            return bad("--top must be at least 1".into());
        }
        if self.lda_topics < 2 || self.lda_iterations == 0 {
            return bad("LDA needs at least 2 topics and 1 iteration".into());
        }
        if self.jobs == Some(0) {
            return bad("--jobs must be at least 1".into());
        }
        Ok(())
    }

    pub fn lda(&self) -> LdaConfig {
        LdaConfig {
            num_topics: self.lda_topics,
            alpha: self.lda_alpha.unwrap_or(50.0 / self.lda_topics as f64),
            beta: self.lda_beta,
            iterations: self.lda_iterations,
            seed: self.seed,
        }
    }

    pub fn pipeline(&self) -> CliResult<Pipeline> {
        let stopwords = match &self.stopwords {
            Some(p) => Arc::new(StopWords::load(p)?),
            None => StopWords::english(),
        };
        let tagger = match &self.lexicon {
            Some(p) => LexiconTagger::new(Arc::new(Lexicon::load(p)?)),
            None => LexiconTagger::english(),
        };
        Ok(Pipeline::new(stopwords, Arc::new(tagger)))
    }

    /// `# key: value` lines heading every report.
    pub fn header(&self, command: &str) -> Vec<String> {
        vec![
            format!("kex {} {command}", env!("CARGO_PKG_VERSION")),
            format!("seed: {}", self.seed),
            format!(
                "lambda: {}, tol: {}, max_iter: {}, window: {}, textrank_window: {}",
                self.extractor.pagerank.lambda,
                self.extractor.pagerank.tol,
                self.extractor.pagerank.max_iter,
                self.extractor.window,
                self.extractor.textrank_window
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(c.methods.len(), 11);
        assert_eq!(c.extractor.textrank_window, 2);
        assert_eq!(c.extractor.window, 10);
        assert_eq!(c.lda().alpha, 1.0);
        assert_eq!(c.lda().seed, 42);
    }

    #[test]
    fn precedence() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tmp.path().join("c.json");
        std::fs::write(&cfg, r#"{"seed": 7, "stopwords": "file.txt", "extractor": {"window": 4}}"#).unwrap();
        let args = CommonArgs { config: Some(cfg.clone()), ..Default::default() };
        let c = RunConfig::resolve(&args, None).unwrap();
        assert_eq!((c.seed, c.extractor.window), (7, 4));
        assert_eq!(c.extractor.textrank_window, 2);
        let c = RunConfig::resolve(&args, Some("env.txt".into())).unwrap();
        assert_eq!(c.stopwords.unwrap(), PathBuf::from("env.txt"));
        let args =
            CommonArgs { config: Some(cfg), seed: Some(9), stopwords: Some("flag.txt".into()), ..Default::default() };
        let c = RunConfig::resolve(&args, Some("env.txt".into())).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.stopwords.unwrap(), PathBuf::from("flag.txt"));
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tmp.path().join("c.json");
        std::fs::write(&cfg, r#"{"sed": 7}"#).unwrap();
        let e = RunConfig::from_file(&cfg).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        std::fs::write(&cfg, r#"{"extractor": {"windw": 3}}"#).unwrap();
        assert_eq!(RunConfig::from_file(&cfg).unwrap_err().exit_code(), 1);
    }
}
