//! Author alias disambiguation from name and email alone.
//!
//! Raw `(id, name, email)` records are cleaned into [`Alias`]es, every pair
//! is scored by one of three matchers (gambit's ten rules, Bird et al.'s
//! conditions, or exact name/email-base equality), and matched pairs are
//! closed transitively into a [`Partition`] of authors. The [`eval`] module
//! scores partitions against ground truth.
//!
//! ```
//! use gambit_core::{disambiguate, Alias, MatcherConfig, Method, RawAlias, StopWords};
//!
//! let stop = StopWords::default();
//! let aliases: Vec<Alias> = [
//!     RawAlias::new("a1", "Jane Q. Public", "jane.public@example.org"),
//!     RawAlias::new("a2", "Public Jane", "jpublic@mail.example.com"),
//!     RawAlias::new("a3", "John Smith", "smithy@example.net"),
//! ]
//! .iter()
//! .map(|r| Alias::from_raw(r, &stop))
//! .collect();
//!
//! let authors = disambiguate(&aliases, Method::Gambit, &MatcherConfig::default()).unwrap();
//! assert!(authors.same_author("a1", "a2"));
//! assert_eq!(authors.num_authors(), 2);
//! ```

pub mod baselines;
pub mod cluster;
pub mod error;
pub mod eval;
pub mod io;
pub mod normalize;
pub mod rules;
pub mod similarity;

pub use baselines::{bird_match, bird_score, simple_match};
pub use cluster::{disambiguate, matched_pairs, merge_partitions, DisjointSet, Method, Partition};
pub use error::{Error, Result};
pub use eval::{
    cohen_kappa, evaluate, sweep, triage, EvalReport, SweepResult, SweepRow, TriageResult,
};
pub use normalize::{extract_entities, preprocess, Alias, RawAlias, StopWords};
pub use rules::{gambit_match, is_match, score_pair, MatcherConfig, SimilarityVector};
pub use similarity::{
    jaro_breakdown, jaro_winkler_similarity, levenshtein_similarity, JaroBreakdown, Measure,
};
