//! Dataset-level priors: term statistics, tf-idf, lexical specificity and
//! an LDA topic model.

mod io;
mod lda;
mod specificity;
mod term_stats;

pub use io::{Priors, MAGIC, VERSION};
pub use lda::{fit_lda, LdaConfig, TopicModel};
pub use specificity::{ln_choose, ln_gamma, ln_hypergeom_pmf, ln_hypergeom_sf, specificity};
pub use term_stats::{tfidf, StatsView, TermStats};
