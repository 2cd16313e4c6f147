//! Cleaning of recorded names and emails, and extraction of the name and
//! email entities every matcher works on.

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// An alias exactly as recorded in a repository or input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAlias {
    pub id: String,
    pub name: String,
    pub email: String,
}

impl RawAlias {
    pub fn new(id: impl Into<String>, name: impl Into<String>, email: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            email: email.into(),
        }
    }
}

/// A cleaned alias with its derived matching entities.
///
/// `name` holds lowercase ASCII letters separated by single spaces; `email`
/// may additionally contain `@`. The name parts are whitespace-free tokens of
/// `name` (all empty when `name` is empty) and `email_base` is the part of
/// `email` before the first `@`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alias {
    pub id: String,
    pub name: String,
    pub email: String,
    pub first_name: String,
    pub penultimate_name: String,
    pub last_name: String,
    pub email_base: String,
}

impl Alias {
    /// Cleans `raw` and extracts its entities in one step.
    pub fn from_raw(raw: &RawAlias, stop_words: &StopWords) -> Self {
        let (name, email) = preprocess(raw, stop_words);
        extract_entities(name, email, raw.id.clone())
    }
}

// Zone abbreviations that double as common given names or surnames
// ("art", "west", "ist", ...) are deliberately absent.
const DEFAULT_STOP_WORDS: &[&str] = &[
    "jr", "sr", "admin", "unknown", "noreply", // common filler
    "utc", "gmt", "cet", "cest", "eet", "eest", "wet", "bst", "msk", "est", "edt", "cst", "cdt",
    "mst", "mdt", "pst", "pdt", "akst", "akdt", "hst", "jst", "kst", "aest", "aedt", "acst",
    "acdt", "awst", "nzst", "nzdt", "sast", "wat", "hkt", "sgt", "pht", "wib", "brt", "nst", "ndt",
    "adt", "chst", "sst", "idt", "pkt", "npt",
];

/// Tokens removed from cleaned names and emails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StopWords {
    words: HashSet<String>,
}

impl Default for StopWords {
    fn default() -> Self {
        Self::new(DEFAULT_STOP_WORDS.iter().copied())
    }
}

impl StopWords {
    /// Builds a list from arbitrary tokens; they are lowercased and anything
    /// that is not an ASCII letter is discarded so the list can only match
    /// tokens that survive cleaning.
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .map(|w| {
                w.as_ref()
                    .chars()
                    .filter(char::is_ascii_alphabetic)
                    .map(|c| c.to_ascii_lowercase())
                    .collect::<String>()
            })
            .filter(|w| !w.is_empty())
            .collect();
        Self { words }
    }

    pub fn empty() -> Self {
        Self {
            words: HashSet::new(),
        }
    }

    /// Parses one token per line. Blank lines and text after `#` are ignored.
    pub fn from_reader(reader: impl BufRead) -> std::io::Result<Self> {
        let mut words = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let token = line.split('#').next().unwrap_or("").trim();
            if !token.is_empty() {
                words.push(token.to_owned());
            }
        }
        Ok(Self::new(words))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::io(path, e))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Cleans the recorded name and email of `raw`, returning `(name, email)`.
pub fn preprocess(raw: &RawAlias, stop_words: &StopWords) -> (String, String) {
    (
        clean(&raw.name, false, stop_words),
        clean(&raw.email, true, stop_words),
    )
}

/// Runs the cleaning pipeline on a single string. `@` survives only when
/// `keep_at` is set.
pub fn clean(text: &str, keep_at: bool, stop_words: &StopWords) -> String {
    let ascii = transliterate(text);
    let split = split_camel_case(&ascii);

    let mut letters = String::with_capacity(split.len());
    for c in split.chars() {
        match c {
            '+' | '-' | ',' | '.' | '_' | ';' => letters.push(' '),
            '@' if keep_at => letters.push('@'),
            c if c.is_ascii_alphabetic() => letters.push(c.to_ascii_lowercase()),
            c if c.is_ascii_whitespace() => letters.push(' '),
            _ => {}
        }
    }

    let mut out = String::with_capacity(letters.len());
    for token in letters
        .split_ascii_whitespace()
        .filter(|t| !stop_words.contains(t))
    {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(token);
    }
    out
}

fn supplementary(c: char) -> Option<&'static str> {
    Some(match c {
        'ß' => "ss",
        'ẞ' => "SS",
        'æ' => "ae",
        'Æ' => "AE",
        'œ' => "oe",
        'Œ' => "OE",
        'ø' => "o",
        'Ø' => "O",
        'đ' | 'ð' => "d",
        'Đ' | 'Ð' => "D",
        'ł' => "l",
        'Ł' => "L",
        'þ' => "th",
        'Þ' => "TH",
        'ı' => "i",
        'ĸ' => "k",
        'ŋ' => "ng",
        'Ŋ' => "NG",
        'ħ' => "h",
        'Ħ' => "H",
        'ŧ' => "t",
        'Ŧ' => "T",
        _ => return None,
    })
}

/// Maps text onto ASCII: compatibility decomposition (combining marks and
/// other non-ASCII leftovers dropped) plus a small table for letters that do
/// not decompose.
pub fn transliterate(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if c.is_ascii() {
            out.push(c);
        } else if let Some(s) = supplementary(c) {
            out.push_str(s);
        } else {
            for d in std::iter::once(c).nfkd() {
                if d.is_ascii() {
                    out.push(d);
                } else if let Some(s) = supplementary(d) {
                    out.push_str(s);
                } else if d.is_whitespace() {
                    out.push(' ');
                }
            }
        }
    }
    out
}

/// Inserts a space before every uppercase letter that directly follows a
/// lowercase one.
fn split_camel_case(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 4);
    let mut prev_lower = false;
    for c in text.chars() {
        if prev_lower && c.is_ascii_uppercase() {
            out.push(' ');
        }
        out.push(c);
        prev_lower = c.is_ascii_lowercase();
    }
    out
}

/// Derives first, penultimate and last name from the cleaned name, and the
/// email base from the cleaned email.
pub fn extract_entities(name: String, email: String, id: String) -> Alias {
    let tokens: Vec<&str> = name.split_whitespace().collect();
    let (first, penultimate, last) = match tokens.as_slice() {
        [] => ("", "", ""),
        [only] => (*only, *only, *only),
        [first, last] => (*first, *first, *last),
        [first, .., penultimate, last] => (*first, *penultimate, *last),
    };
    let email_base = email.split('@').next().unwrap_or("").to_owned();
    Alias {
        first_name: first.to_owned(),
        penultimate_name: penultimate.to_owned(),
        last_name: last.to_owned(),
        email_base,
        id,
        name,
        email,
    }
}
