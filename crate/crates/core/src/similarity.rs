//! Normalised Levenshtein and Jaro-Winkler string similarity.
//!
//! Both functions compare Unicode scalar values; pure-ASCII inputs (everything
//! produced by [`crate::normalize`]) take a byte-slice fast path.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which string similarity the matchers use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    #[default]
    Levenshtein,
    JaroWinkler,
}

impl Measure {
    pub fn similarity(self, a: &str, b: &str) -> f64 {
        match self {
            Measure::Levenshtein => levenshtein_similarity(a, b),
            Measure::JaroWinkler => jaro_winkler_similarity(a, b),
        }
    }

    /// Short name used on the command line and in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Levenshtein => "lev",
            Measure::JaroWinkler => "jw",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lev" | "levenshtein" => Ok(Measure::Levenshtein),
            "jw" | "jaro-winkler" | "jarowinkler" => Ok(Measure::JaroWinkler),
            other => Err(format!(
                "unknown similarity measure `{other}` (expected lev or jw)"
            )),
        }
    }
}

fn with_units<R>(
    a: &str,
    b: &str,
    f: impl Fn(&[u32], &[u32]) -> R,
    g: impl Fn(&[u8], &[u8]) -> R,
) -> R {
    if a.is_ascii() && b.is_ascii() {
        g(a.as_bytes(), b.as_bytes())
    } else {
        let a: Vec<u32> = a.chars().map(u32::from).collect();
        let b: Vec<u32> = b.chars().map(u32::from).collect();
        f(&a, &b)
    }
}

/// Levenshtein edit distance counted in Unicode scalar values.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    with_units(a, b, edit_distance, edit_distance)
}

/// `1 - d(a, b) / max(|a|, |b|)`, with two empty strings counted as identical.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    with_units(a, b, normalized_edit, normalized_edit)
}

fn normalized_edit<T: Eq>(a: &[T], b: &[T]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_distance(a, b) as f64 / longest as f64
}

const STACK_ROW: usize = 64;

fn edit_distance<T: Eq>(a: &[T], b: &[T]) -> usize {
    // Keep the row over the shorter string.
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }
    let mut stack = [0usize; STACK_ROW + 1];
    let mut heap;
    let row: &mut [usize] = if b.len() <= STACK_ROW {
        &mut stack[..=b.len()]
    } else {
        heap = vec![0usize; b.len() + 1];
        &mut heap
    };
    for (j, cell) in row.iter_mut().enumerate() {
        *cell = j;
    }
    for (i, ca) in a.iter().enumerate() {
        let mut diagonal = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            let substitute = diagonal + usize::from(ca != cb);
            row[j + 1] = substitute.min(above + 1).min(row[j] + 1);
            diagonal = above;
        }
    }
    row[b.len()]
}

/// The intermediate quantities of a Jaro-Winkler comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JaroBreakdown {
    /// Characters matched within the search window.
    pub common: usize,
    /// Half the number of matched characters that appear in a different
    /// order, rounded down as in Winkler's reference code.
    pub transpositions: usize,
    /// Shared prefix length, capped at four.
    pub prefix_len: usize,
    /// Plain Jaro similarity.
    pub jaro: f64,
}

impl JaroBreakdown {
    pub fn jaro_winkler(&self) -> f64 {
        self.jaro + 0.1 * self.prefix_len as f64 * (1.0 - self.jaro)
    }
}

pub fn jaro_breakdown(a: &str, b: &str) -> JaroBreakdown {
    with_units(a, b, jaro_parts, jaro_parts)
}

pub fn jaro_similarity(a: &str, b: &str) -> f64 {
    jaro_breakdown(a, b).jaro
}

/// Jaro similarity boosted by `0.1 * l` of the remaining gap, where `l` is
/// the common prefix length up to four. Two empty strings score 1.
pub fn jaro_winkler_similarity(a: &str, b: &str) -> f64 {
    jaro_breakdown(a, b).jaro_winkler()
}

fn jaro_parts<T: Ord>(a: &[T], b: &[T]) -> JaroBreakdown {
    // Greedy window matching is order-sensitive; fix the order so the score
    // is symmetric.
    let (a, b) = if b < a { (b, a) } else { (a, b) };
    let prefix_len = a.iter().zip(b).take(4).take_while(|(x, y)| x == y).count();
    if a.is_empty() && b.is_empty() {
        return JaroBreakdown {
            common: 0,
            transpositions: 0,
            prefix_len,
            jaro: 1.0,
        };
    }

    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = vec![false; a.len()];
    let mut b_matched = vec![false; b.len()];
    let mut common = 0usize;
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == *ca {
                a_matched[i] = true;
                b_matched[j] = true;
                common += 1;
                break;
            }
        }
    }
    if common == 0 {
        return JaroBreakdown {
            common,
            transpositions: 0,
            prefix_len,
            jaro: 0.0,
        };
    }

    let in_a = a
        .iter()
        .zip(&a_matched)
        .filter(|(_, m)| **m)
        .map(|(c, _)| c);
    let in_b = b
        .iter()
        .zip(&b_matched)
        .filter(|(_, m)| **m)
        .map(|(c, _)| c);
    let out_of_order = in_a.zip(in_b).filter(|(x, y)| x != y).count();
    let transpositions = out_of_order / 2;

    let c = common as f64;
    let jaro = (c / a.len() as f64 + c / b.len() as f64 + (c - transpositions as f64) / c) / 3.0;
    JaroBreakdown {
        common,
        transpositions,
        prefix_len,
        jaro,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kitten_sitting() {
        assert_eq!(levenshtein_distance("kitten", "sitting"), 3);
        assert!((levenshtein_similarity("kitten", "sitting") - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn levenshtein_edges() {
        assert_eq!(levenshtein_similarity("", ""), 1.0);
        assert_eq!(levenshtein_similarity("abc", ""), 0.0);
        assert_eq!(levenshtein_similarity("", "abc"), 0.0);
        assert_eq!(levenshtein_similarity("john doe", "john doe"), 1.0);
    }

    #[test]
    fn long_strings_use_heap_row() {
        let a = "a".repeat(100);
        let b = "b".repeat(70);
        assert_eq!(levenshtein_distance(&a, &b), 100);
    }

    #[test]
    fn unicode_counts_scalars() {
        assert_eq!(levenshtein_distance("José", "Jose"), 1);
        assert!((levenshtein_similarity("José", "Jose") - 0.75).abs() < 1e-12);
    }

    #[test]
    fn martha_breakdown() {
        let b = jaro_breakdown("martha", "marhta");
        assert_eq!(b.common, 6);
        assert_eq!(b.transpositions, 1);
        assert_eq!(b.prefix_len, 3);
        assert!((b.jaro - 17.0 / 18.0).abs() < 1e-12);
        assert!((jaro_winkler_similarity("martha", "marhta") - 0.9611).abs() < 1e-4);
    }

    #[test]
    fn jaro_winkler_edges() {
        assert_eq!(jaro_winkler_similarity("", ""), 1.0);
        assert_eq!(jaro_winkler_similarity("abc", "xyz"), 0.0);
        assert_eq!(jaro_winkler_similarity("abc", ""), 0.0);
        assert_eq!(jaro_winkler_similarity("gnome", "gnome"), 1.0);
    }

    #[test]
    fn dixon_reference() {
        // c = 4, no transpositions, shared prefix "di".
        let b = jaro_breakdown("dixon", "dicksonx");
        assert_eq!(b.common, 4);
        assert_eq!(b.prefix_len, 2);
        let jaro = (4.0 / 5.0 + 4.0 / 8.0 + 1.0) / 3.0;
        assert!((b.jaro - jaro).abs() < 1e-12);
        assert!((b.jaro_winkler() - (jaro + 0.2 * (1.0 - jaro))).abs() < 1e-12);
        assert!((b.jaro_winkler() - 0.813).abs() < 1e-3);
    }

    #[test]
    fn measure_parsing() {
        assert_eq!("lev".parse::<Measure>().unwrap(), Measure::Levenshtein);
        assert_eq!("JW".parse::<Measure>().unwrap(), Measure::JaroWinkler);
        assert!("cosine".parse::<Measure>().is_err());
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in "[a-e ]{0,12}", b in "[a-e ]{0,12}") {
            for m in [Measure::Levenshtein, Measure::JaroWinkler] {
                let ab = m.similarity(&a, &b);
                prop_assert_eq!(ab, m.similarity(&b, &a));
                prop_assert!((0.0..=1.0).contains(&ab));
            }
        }

        #[test]
        fn winkler_boost_only_with_prefix(a in "[a-d]{0,10}", b in "[a-d]{0,10}") {
            let br = jaro_breakdown(&a, &b);
            prop_assert!(br.transpositions <= br.common);
            prop_assert!(br.prefix_len <= 4);
            if br.prefix_len == 0 {
                prop_assert_eq!(br.jaro_winkler(), br.jaro);
            } else {
                prop_assert!(br.jaro_winkler() >= br.jaro);
            }
        }

        #[test]
        fn jaro_agrees_with_strsim(a in "[a-f]{1,15}", b in "[a-f]{1,15}") {
            prop_assert!((jaro_similarity(&a, &b) - strsim::jaro(&a, &b)).abs() < 1e-12);
        }
    }
}
