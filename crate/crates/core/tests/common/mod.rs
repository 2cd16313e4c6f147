//! Shared test support: a synthetic alias generator with known authors and
//! brute-force oracles that do not reuse library code paths.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use gambit_core::{Alias, Partition, RawAlias, StopWords};
use rand::seq::SliceRandom;
use rand::Rng;

const FIRST: &[&str] = &[
    "john",
    "james",
    "michael",
    "david",
    "robert",
    "maria",
    "anna",
    "peter",
    "paul",
    "thomas",
    "daniel",
    "matthias",
    "christian",
    "alexander",
    "benjamin",
    "emmanuele",
    "sebastien",
    "carlos",
    "owen",
    "kristian",
    "jane",
    "richard",
    "sarah",
    "laura",
    "martin",
    "stefan",
    "andrea",
    "lucas",
    "elena",
    "mark",
    "simon",
    "jonas",
    "felix",
    "hannah",
    "olivia",
    "ivan",
    "yuki",
    "chen",
    "ahmed",
    "fatima",
];

const LAST: &[&str] = &[
    "smith",
    "johnson",
    "miller",
    "doe",
    "roe",
    "bird",
    "clasen",
    "otte",
    "bassi",
    "wilmet",
    "garnacho",
    "larsson",
    "taylor",
    "rietveld",
    "schmidt",
    "mueller",
    "garcia",
    "martinez",
    "rossi",
    "bianchi",
    "nakamura",
    "wang",
    "li",
    "kowalski",
    "novak",
    "dubois",
    "moreau",
    "jensen",
    "hansen",
    "nielsen",
    "andersson",
    "berg",
    "kim",
    "park",
    "silva",
    "santos",
    "costa",
    "ivanov",
    "petrov",
    "fischer",
    "weber",
    "wagner",
    "becker",
    "hoffmann",
    "koch",
    "richter",
    "klein",
    "wolf",
    "neumann",
    "schwarz",
    "zimmermann",
    "braun",
    "hartmann",
    "lange",
    "werner",
    "krause",
    "lehmann",
    "kaiser",
    "fuchs",
    "vogel",
];

const DOMAINS: &[&str] = &[
    "gnome.org",
    "gmail.com",
    "redhat.com",
    "users.sourceforge.net",
    "example.org",
    "kde.org",
    "yahoo.com",
    "intel.com",
    "debian.org",
    "suse.de",
    "web.de",
    "posteo.net",
    "fastmail.fm",
    "collabora.com",
    "igalia.com",
    "mozilla.com",
    "canonical.com",
    "outlook.com",
];

struct Person {
    first: String,
    middle: Option<String>,
    last: String,
    emails: Vec<String>,
}

fn typo(rng: &mut impl Rng, s: &str) -> String {
    let mut chars: Vec<char> = s.chars().collect();
    if chars.len() < 4 {
        return s.to_owned();
    }
    let k = rng.gen_range(1..chars.len() - 1);
    match rng.gen_range(0..3) {
        0 => {
            chars.remove(k);
        }
        1 => chars.swap(k, k + 1),
        _ => chars.insert(k, chars[k]),
    }
    chars.into_iter().collect()
}

fn capitalise(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

const SYLLABLES: &[&str] = &[
    "ka", "ro", "mi", "len", "tor", "sa", "vel", "an", "dri", "bo", "nes", "ha", "ul", "gar", "ti",
    "mo", "ser", "el", "quin", "ba", "dor", "fa", "lis", "pe", "ran", "zu", "wen", "ko",
];

fn invented(rng: &mut impl Rng, syllables: std::ops::RangeInclusive<usize>) -> String {
    let n = rng.gen_range(syllables);
    (0..n).map(|_| *SYLLABLES.choose(rng).unwrap()).collect()
}

fn person(rng: &mut impl Rng) -> Person {
    let first = if rng.gen_bool(0.7) {
        FIRST.choose(rng).unwrap().to_string()
    } else {
        invented(rng, 2..=3)
    };
    let last = if rng.gen_bool(0.2) {
        LAST.choose(rng).unwrap().to_string()
    } else {
        invented(rng, 2..=4)
    };
    let middle = rng
        .gen_bool(0.2)
        .then(|| FIRST.choose(rng).unwrap().to_string());
    let f0 = &first[..1];
    let l0 = &last[..1];
    let n_emails = rng.gen_range(1..=3);
    let emails = (0..n_emails)
        .map(|_| {
            let local = match rng.gen_range(0..12) {
                0 | 1 => format!("{first}.{last}"),
                2 | 3 => format!("{f0}{last}"),
                4 | 5 => format!("{first}{l0}"),
                6 => first.clone(),
                7 => last.clone(),
                8 | 9 => format!("{first}_{last}{}", rng.gen_range(1..99)),
                // Digits are stripped during cleaning, so use letters for uniqueness.
                _ => format!("{}{}", &first[..first.len().min(3)], invented(rng, 2..=3)),
            };
            format!("{local}@{}", DOMAINS.choose(rng).unwrap())
        })
        .collect();
    Person {
        first,
        middle,
        last,
        emails,
    }
}

fn alias_name(rng: &mut impl Rng, p: &Person) -> String {
    let (f, l) = (capitalise(&p.first), capitalise(&p.last));
    match rng.gen_range(0..20) {
        0..=7 => format!("{f} {l}"),
        8 | 9 => format!("{l}, {f}"),
        10 => format!("{}. {l}", &f[..1]),
        11 | 12 => match &p.middle {
            Some(m) => format!("{f} {} {l}", capitalise(m)),
            None => format!("{f} {l}"),
        },
        13 | 14 => format!("{f}{l}"),
        15 | 16 => format!("{} {l}", typo(rng, &f)),
        17 | 18 => format!("{f} {}", typo(rng, &l)),
        // Bare first names bridge everyone sharing that first name; keep them rare.
        _ if rng.gen_bool(0.1) => p.first.clone(),
        _ => format!("{f} {l}"),
    }
}

/// `n` raw aliases drawn from roughly `n / 3` people, with the generating
/// person as ground truth. Ids are `s00000`, `s00001`, ...
pub fn synthetic_corpus(rng: &mut impl Rng, n: usize) -> (Vec<RawAlias>, Partition) {
    let people: Vec<Person> = (0..(n / 3).max(1)).map(|_| person(rng)).collect();
    let mut raws = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        let owner = rng.gen_range(0..people.len());
        let p = &people[owner];
        let name = alias_name(rng, p);
        let email = p.emails.choose(rng).unwrap().clone();
        let id = format!("s{k:05}");
        labels.push((id.clone(), format!("p{owner}")));
        raws.push(RawAlias::new(id, name, email));
    }
    (raws, Partition::from_labels(labels).unwrap())
}

pub fn clean_all(raws: &[RawAlias]) -> Vec<Alias> {
    let sw = StopWords::default();
    raws.iter().map(|r| Alias::from_raw(r, &sw)).collect()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

/// Full-matrix Levenshtein distance over Unicode scalars.
pub fn dp_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            d[i][j] = (d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1)
                .min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

pub fn dp_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        1.0
    } else {
        1.0 - dp_levenshtein(a, b) as f64 / longest as f64
    }
}

/// Same-author pairs, enumerated one pair at a time.
pub fn brute_pairs(p: &Partition) -> BTreeSet<(String, String)> {
    let ids: Vec<&str> = p.alias_ids().collect();
    let mut out = BTreeSet::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            if p.author_of(ids[i]) == p.author_of(ids[j]) {
                out.insert((ids[i].to_owned(), ids[j].to_owned()));
            }
        }
    }
    out
}

/// Pairwise counts and ratios computed by direct enumeration.
pub fn brute_eval(pred: &Partition, truth: &Partition) -> (u64, u64, u64, f64, f64, f64) {
    let ids: Vec<&str> = pred.alias_ids().collect();
    let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let p = pred.author_of(ids[i]) == pred.author_of(ids[j]);
            let t = truth.author_of(ids[i]) == truth.author_of(ids[j]);
            match (p, t) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                _ => {}
            }
        }
    }
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fn_ > 0 {
        tp as f64 / (tp + fn_) as f64
    } else {
        0.0
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    (tp, fp, fn_, precision, recall, f1)
}

/// Reflexive-transitive closure of a boolean match matrix by Floyd-Warshall;
/// returns, for every index, the smallest index it is connected to.
pub fn closure_labels(matrix: &[Vec<bool>]) -> Vec<usize> {
    let n = matrix.len();
    let mut reach: Vec<Vec<bool>> = matrix.to_vec();
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n)
        .map(|i| (0..n).find(|&j| reach[i][j]).unwrap())
        .collect()
}

/// A random partition of `ids` into at most `ids.len()` labelled groups.
pub fn random_partition(rng: &mut impl Rng, ids: &[String]) -> Partition {
    let k = rng.gen_range(1..=ids.len().max(1));
    Partition::from_labels(
        ids.iter()
            .map(|id| (id.clone(), rng.gen_range(0..k).to_string())),
    )
    .unwrap()
}
