//! The ten-rule similarity vector and the top-two-average match decision.

use crate::error::{Error, Result};
use crate::normalize::Alias;
use crate::similarity::Measure;

pub const DEFAULT_THRESHOLD: f64 = 0.95;
pub const DEFAULT_MIN_LEN: usize = 3;

/// Parameters shared by the threshold-based matchers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatcherConfig {
    pub threshold: f64,
    pub measure: Measure,
    /// Strings shorter than this never count as similar.
    pub min_len: usize,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            measure: Measure::Levenshtein,
            min_len: DEFAULT_MIN_LEN,
        }
    }
}

impl MatcherConfig {
    pub fn new(threshold: f64, measure: Measure, min_len: usize) -> Result<Self> {
        let cfg = Self {
            threshold,
            measure,
            min_len,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_threshold(self, threshold: f64) -> Result<Self> {
        Self::new(threshold, self.measure, self.min_len)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidConfig(format!(
                "threshold {} is outside [0, 1]",
                self.threshold
            )));
        }
        if self.min_len == 0 {
            return Err(Error::InvalidConfig("min_len must be at least 1".into()));
        }
        Ok(())
    }

    fn long_enough(&self, s: &str) -> bool {
        // Cheap byte check first; cleaned strings are ASCII.
        s.len() >= self.min_len && (s.is_ascii() || s.chars().count() >= self.min_len)
    }

    /// Similarity of two strings, or 0 if either is too short.
    pub(crate) fn gated_sim(&self, a: &str, b: &str) -> f64 {
        if !self.long_enough(a) || !self.long_enough(b) {
            0.0
        } else if a == b {
            1.0
        } else {
            self.measure.similarity(a, b)
        }
    }

    pub(crate) fn gated_eq(&self, a: &str, b: &str) -> bool {
        a == b && self.long_enough(a)
    }

    /// `FN[0] + LN` of `x` occurs in the email base of `y`.
    pub(crate) fn initial_last_in(&self, x: &Alias, y: &Alias) -> bool {
        let Some(initial) = x.first_name.chars().next() else {
            return false;
        };
        if x.last_name.is_empty() {
            return false;
        }
        let mut needle = String::with_capacity(x.last_name.len() + 1);
        needle.push(initial);
        needle.push_str(&x.last_name);
        self.gated_contains(&y.email_base, &needle)
    }

    /// `FN + LN[0]` of `x` occurs in the email base of `y`.
    pub(crate) fn first_initial_in(&self, x: &Alias, y: &Alias) -> bool {
        let Some(initial) = x.last_name.chars().next() else {
            return false;
        };
        if x.first_name.is_empty() {
            return false;
        }
        let mut needle = String::with_capacity(x.first_name.len() + 1);
        needle.push_str(&x.first_name);
        needle.push(initial);
        self.gated_contains(&y.email_base, &needle)
    }

    /// Both `FN` and `LN` of `x` occur in the email base of `y`.
    pub(crate) fn names_in(&self, x: &Alias, y: &Alias) -> bool {
        self.gated_contains(&y.email_base, &x.first_name)
            && self.gated_contains(&y.email_base, &x.last_name)
    }

    fn gated_contains(&self, haystack: &str, needle: &str) -> bool {
        self.long_enough(needle) && self.long_enough(haystack) && haystack.contains(needle)
    }
}

/// Scores of the ten rules for one alias pair; rule `k` sits at index `k - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityVector(pub [f64; 10]);

impl SimilarityVector {
    /// Score of rule `k`, counted from 1.
    pub fn rule(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    /// Mean of the two largest rule scores.
    pub fn top_two_average(&self) -> f64 {
        let mut first = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        for &s in &self.0 {
            if s > first {
                second = first;
                first = s;
            } else if s > second {
                second = s;
            }
        }
        (first + second) / 2.0
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Evaluates the ten rules for aliases `i` and `j`.
///
/// 1. similarity of the full names
/// 2. full names equal
/// 3. first names alike and last names alike (last vs penultimate allowed)
/// 4. and 5. the same with first and last name swapped on one side
/// 6. `FN[0] + LN` of one alias inside the other's email base
/// 7. `FN + LN[0]` of one alias inside the other's email base
/// 8. both `FN` and `LN` of one alias inside the other's email base, doubled
/// 9. full emails equal, doubled
/// 10. similarity of the email bases
///
/// Every comparison involving a string shorter than `cfg.min_len` scores 0.
pub fn score_pair(i: &Alias, j: &Alias, cfg: &MatcherConfig) -> SimilarityVector {
    let sim = |a: &str, b: &str| cfg.gated_sim(a, b);

    let ff = sim(&i.first_name, &j.first_name);
    let ll = sim(&i.last_name, &j.last_name);
    let lp = sim(&i.last_name, &j.penultimate_name);
    let pl = sim(&i.penultimate_name, &j.last_name);
    let fl = sim(&i.first_name, &j.last_name);
    let lf = sim(&i.last_name, &j.first_name);
    let pf = sim(&i.penultimate_name, &j.first_name);
    let fp = sim(&i.first_name, &j.penultimate_name);

    let either =
        |rule: fn(&MatcherConfig, &Alias, &Alias) -> bool| rule(cfg, i, j) || rule(cfg, j, i);

    SimilarityVector([
        sim(&i.name, &j.name),
        flag(cfg.gated_eq(&i.name, &j.name)),
        ff.min(ll.max(lp).max(pl)),
        fl.min(pf.max(lp).max(lf)),
        lf.min(pl.max(fp).max(fl)),
        flag(either(MatcherConfig::initial_last_in)),
        flag(either(MatcherConfig::first_initial_in)),
        2.0 * flag(either(MatcherConfig::names_in)),
        2.0 * flag(cfg.gated_eq(&i.email, &j.email)),
        sim(&i.email_base, &j.email_base),
    ])
}

/// True when the mean of the two largest rule scores reaches the threshold.
pub fn is_match(v: &SimilarityVector, cfg: &MatcherConfig) -> bool {
    v.top_two_average() >= cfg.threshold
}

/// Shortcut for `is_match(&score_pair(i, j, cfg), cfg)`.
pub fn gambit_match(i: &Alias, j: &Alias, cfg: &MatcherConfig) -> bool {
    is_match(&score_pair(i, j, cfg), cfg)
}
