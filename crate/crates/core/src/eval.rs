//! Pairwise evaluation against ground truth, threshold sweeps, inter-rater
//! agreement, and pre-labelling of pairs for building ground truth.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{disambiguate, DisjointSet, Method, Partition};
use crate::error::{Error, Result};
use crate::normalize::Alias;
use crate::rules::MatcherConfig;
use crate::similarity::{levenshtein_similarity, Measure};

/// Pair-counting comparison of a predicted partition with the truth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    /// Derives precision, recall and F1 from the counts; undefined ratios are 0.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

fn pairs_in(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Counts agreement over all unordered alias pairs, where a pair is positive
/// when both aliases belong to the same author.
pub fn evaluate(predicted: &Partition, truth: &Partition) -> Result<EvalReport> {
    predicted.check_same_universe(truth)?;
    // Pair counts from the contingency table of (predicted author, true author).
    let mut cells: HashMap<(&str, &str), u64> = HashMap::new();
    let mut pred_sizes: HashMap<&str, u64> = HashMap::new();
    let mut true_sizes: HashMap<&str, u64> = HashMap::new();
    for (alias, pred) in predicted.iter() {
        let truth_author = truth
            .author_of(alias)
            .ok_or_else(|| Error::Invariant(format!("`{alias}` vanished from truth")))?;
        *cells.entry((pred, truth_author)).or_default() += 1;
        *pred_sizes.entry(pred).or_default() += 1;
        *true_sizes.entry(truth_author).or_default() += 1;
    }
    let tp: u64 = cells.values().map(|&n| pairs_in(n)).sum();
    let predicted_pos: u64 = pred_sizes.values().map(|&n| pairs_in(n)).sum();
    let true_pos: u64 = true_sizes.values().map(|&n| pairs_in(n)).sum();
    Ok(EvalReport::from_counts(
        tp,
        predicted_pos - tp,
        true_pos - tp,
    ))
}

/// Cohen's kappa for two raters labelling the same pairs as match / no match.
pub fn cohen_kappa(labels_a: &[bool], labels_b: &[bool]) -> Result<f64> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    if labels_a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = labels_a.len() as f64;
    let agree = labels_a
        .iter()
        .zip(labels_b)
        .filter(|(a, b)| a == b)
        .count() as f64;
    let yes_a = labels_a.iter().filter(|x| **x).count() as f64 / n;
    let yes_b = labels_b.iter().filter(|x| **x).count() as f64 / n;
    let observed = agree / n;
    let chance = yes_a * yes_b + (1.0 - yes_a) * (1.0 - yes_b);
    if chance == 1.0 {
        // Both raters used a single, identical label throughout.
        return Ok(1.0);
    }
    Ok((observed - chance) / (1.0 - chance))
}

/// One disambiguation run inside a sweep. `measure` and `threshold` are
/// `None` for methods without hyper-parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub method: Method,
    pub measure: Option<Measure>,
    pub threshold: Option<f64>,
    pub report: EvalReport,
    pub wall_time_ms: u128,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// Rounds away binary noise from thresholds built by repeated addition.
fn tidy(t: f64) -> f64 {
    (t * 1e9).round() / 1e9
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.6}")
}

impl SweepResult {
    pub const CSV_HEADER: [&'static str; 10] = [
        "method",
        "measure",
        "threshold",
        "tp",
        "fp",
        "fn",
        "precision",
        "recall",
        "f1",
        "wall_time_ms",
    ];

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Invariant(format!("writing sweep: {e}"));
        w.write_record(Self::CSV_HEADER).map_err(io)?;
        for row in &self.rows {
            let r = &row.report;
            w.write_record([
                row.method.to_string(),
                row.measure.map(|m| m.to_string()).unwrap_or_default(),
                row.threshold
                    .map(|t| tidy(t).to_string())
                    .unwrap_or_default(),
                r.tp.to_string(),
                r.fp.to_string(),
                r.fn_.to_string(),
                fmt_f64(r.precision),
                fmt_f64(r.recall),
                fmt_f64(r.f1),
                row.wall_time_ms.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Invariant(format!("writing sweep: {e}")))?;
        Ok(())
    }

    /// Wide precision/recall/F1 table: one line per threshold, three columns
    /// per `(method, measure)` series. Threshold-free methods repeat their
    /// single result on every line.
    pub fn write_pr_table(&self, out: impl Write) -> Result<()> {
        let mut series: Vec<(Method, Option<Measure>)> = Vec::new();
        let mut thresholds: Vec<f64> = Vec::new();
        for row in &self.rows {
            if !series.contains(&(row.method, row.measure)) {
                series.push((row.method, row.measure));
            }
            if let Some(t) = row.threshold.map(tidy) {
                if !thresholds.contains(&t) {
                    thresholds.push(t);
                }
            }
        }
        thresholds.sort_by(f64::total_cmp);

        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Invariant(format!("writing table: {e}"));
        let mut header = vec!["threshold".to_owned()];
        for (method, measure) in &series {
            let name = match measure {
                Some(m) => format!("{method}_{m}"),
                None => method.to_string(),
            };
            for metric in ["precision", "recall", "f1"] {
                header.push(format!("{name}_{metric}"));
            }
        }
        w.write_record(&header).map_err(io)?;
        for &t in &thresholds {
            let mut record = vec![t.to_string()];
            for (method, measure) in &series {
                let hit = self.rows.iter().find(|r| {
                    r.method == *method
                        && r.measure == *measure
                        && r.threshold.is_none_or(|x| tidy(x) == t)
                });
                match hit {
                    Some(r) => record
                        .extend([r.report.precision, r.report.recall, r.report.f1].map(fmt_f64)),
                    None => record.extend(std::iter::repeat_n(String::new(), 3)),
                }
            }
            w.write_record(&record).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Invariant(format!("writing table: {e}")))?;
        Ok(())
    }
}

/// Runs and scores every combination of method, measure and threshold.
///
/// Thresholds are sorted and de-duplicated. Methods without hyper-parameters
/// run once. An empty threshold list yields an empty result.
pub fn sweep(
    aliases: &[Alias],
    truth: &Partition,
    methods: &[Method],
    measures: &[Measure],
    thresholds: &[f64],
    min_len: usize,
) -> Result<SweepResult> {
    let mut ts: Vec<f64> = thresholds.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut rows = Vec::new();
    if ts.is_empty() {
        return Ok(SweepResult { rows });
    }
    for &t in &ts {
        MatcherConfig::new(t, Measure::default(), min_len)?;
    }

    let mut run =
        |method: Method, measure: Option<Measure>, threshold: Option<f64>| -> Result<()> {
            let cfg = MatcherConfig::new(
                threshold.unwrap_or(ts[0]),
                measure.unwrap_or_default(),
                min_len,
            )?;
            let start = Instant::now();
            let predicted = disambiguate(aliases, method, &cfg)?;
            let wall_time_ms = start.elapsed().as_millis();
            rows.push(SweepRow {
                method,
                measure,
                threshold,
                report: evaluate(&predicted, truth)?,
                wall_time_ms,
            });
            Ok(())
        };

    let mut done: Vec<Method> = Vec::new();
    for &method in methods {
        if done.contains(&method) {
            continue;
        }
        done.push(method);
        if !method.uses_threshold() {
            run(method, None, None)?;
            continue;
        }
        for &measure in measures {
            for &t in &ts {
                run(method, Some(measure), Some(t))?;
            }
        }
    }
    Ok(SweepResult { rows })
}

/// Alias pairs pre-sorted for manual labelling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriageResult {
    pub auto_match: Vec<(String, String)>,
    pub auto_differ: Vec<(String, String)>,
    pub undecided: Vec<(String, String)>,
}

impl TriageResult {
    pub fn total(&self) -> usize {
        self.auto_match.len() + self.auto_differ.len() + self.undecided.len()
    }
}

/// Sorts every unordered alias pair into one of three buckets.
///
/// Pairs linked through identical non-empty names or emails (closed
/// transitively) are matches. Of the rest, pairs whose normalised Levenshtein
/// similarity is below `auto_differ_cutoff` for both name and email are
/// marked different; everything else is left for a human. Pairs are written
/// as `(smaller id, larger id)` and each list is sorted.
pub fn triage(aliases: &[Alias], auto_differ_cutoff: f64) -> TriageResult {
    let n = aliases.len();
    let mut sets = DisjointSet::new(n);
    let mut first_with_name: HashMap<&str, usize> = HashMap::new();
    let mut first_with_email: HashMap<&str, usize> = HashMap::new();
    for (k, a) in aliases.iter().enumerate() {
        if !a.name.is_empty() {
            let first = *first_with_name.entry(a.name.as_str()).or_insert(k);
            sets.union(first, k);
        }
        if !a.email.is_empty() {
            let first = *first_with_email.entry(a.email.as_str()).or_insert(k);
            sets.union(first, k);
        }
    }
    let roots: Vec<usize> = (0..n).map(|k| sets.find(k)).collect();

    #[derive(Clone, Copy)]
    enum Bucket {
        Match,
        Differ,
        Undecided,
    }

    let decided: Vec<(usize, usize, Bucket)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let roots = &roots;
            (i + 1..n).map(move |j| {
                let (a, b) = (&aliases[i], &aliases[j]);
                let bucket = if roots[i] == roots[j] {
                    Bucket::Match
                } else if levenshtein_similarity(&a.name, &b.name) < auto_differ_cutoff
                    && levenshtein_similarity(&a.email, &b.email) < auto_differ_cutoff
                {
                    Bucket::Differ
                } else {
                    Bucket::Undecided
                };
                (i, j, bucket)
            })
        })
        .collect();

    let mut out = TriageResult::default();
    for (i, j, bucket) in decided {
        let (a, b) = (aliases[i].id.clone(), aliases[j].id.clone());
        let pair = if a <= b { (a, b) } else { (b, a) };
        match bucket {
            Bucket::Match => out.auto_match.push(pair),
            Bucket::Differ => out.auto_differ.push(pair),
            Bucket::Undecided => out.undecided.push(pair),
        }
    }
    out.auto_match.sort_unstable();
    out.auto_differ.sort_unstable();
    out.undecided.sort_unstable();
    out
}
