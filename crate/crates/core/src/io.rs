//! CSV alias and partition files, and alias harvesting from VCS log dumps.
//!
//! Alias files carry the header `id,name,email`; partition files carry
//! `alias_id,author_id`. Both are UTF-8 and accept LF or CRLF line endings.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, Read, Write};
use std::path::Path;

use crate::cluster::Partition;
use crate::error::{Error, Result};
use crate::normalize::RawAlias;

pub const ALIAS_HEADER: [&str; 3] = ["id", "name", "email"];
pub const PARTITION_HEADER: [&str; 2] = ["alias_id", "author_id"];
pub const PAIR_HEADER: [&str; 2] = ["alias_a", "alias_b"];

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        csv::ErrorKind::Utf8 { err, .. } => Error::Malformed {
            path: path.into(),
            line,
            message: format!("invalid UTF-8: {err}"),
        },
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Malformed {
            path: path.into(),
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Malformed {
            path: path.into(),
            line,
            message: format!("{other:?}"),
        },
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

/// Reads rows after checking the header matches `expected`.
fn read_rows<const N: usize>(
    input: impl Read,
    path: &Path,
    expected: [&str; N],
) -> Result<Vec<(u64, [String; N])>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let found: Vec<&str> = header
        .iter()
        .enumerate()
        .map(|(k, h)| {
            if k == 0 {
                h.trim_start_matches('\u{feff}')
            } else {
                h
            }
        })
        .map(str::trim)
        .collect();
    if found != expected {
        return Err(Error::Malformed {
            path: path.into(),
            line: 1,
            message: format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                found.join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: [String; N] = std::array::from_fn(|k| record[k].to_owned());
        rows.push((line, fields));
    }
    Ok(rows)
}

/// Parses an alias CSV from any reader; `path` is only used in messages.
pub fn read_aliases_from(input: impl Read, path: &Path) -> Result<Vec<RawAlias>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, [id, name, email]) in read_rows(input, path, ALIAS_HEADER)? {
        if id.is_empty() {
            return Err(Error::Malformed {
                path: path.into(),
                line,
                message: "empty alias id".into(),
            });
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        out.push(RawAlias { id, name, email });
    }
    Ok(out)
}

pub fn read_aliases(path: impl AsRef<Path>) -> Result<Vec<RawAlias>> {
    let path = path.as_ref();
    read_aliases_from(open(path)?, path)
}

pub fn write_aliases_to(out: impl Write, aliases: &[RawAlias]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ALIAS_HEADER)?;
    for a in aliases {
        w.write_record([&a.id, &a.name, &a.email])?;
    }
    w.flush()
}

pub fn write_aliases(path: impl AsRef<Path>, aliases: &[RawAlias]) -> Result<()> {
    let path = path.as_ref();
    write_aliases_to(create(path)?, aliases).map_err(|e| Error::io(path, e))
}

/// Aliases harvested from a log dump, plus the number of lines that had no tab.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogExtract {
    pub aliases: Vec<RawAlias>,
    pub skipped: usize,
}

/// Collects distinct `name<TAB>email` lines in first-seen order, e.g. from
/// `git log --format='%an%x09%ae'`. Ids are `a0001`, `a0002`, ...
pub fn extract_from_log(input: impl BufRead) -> std::io::Result<LogExtract> {
    let mut seen = HashSet::new();
    let mut out = LogExtract::default();
    for line in input.lines() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let Some((name, email)) = line.split_once('\t') else {
            out.skipped += 1;
            continue;
        };
        if seen.insert((name.to_owned(), email.to_owned())) {
            let id = format!("a{:04}", out.aliases.len() + 1);
            out.aliases.push(RawAlias::new(id, name, email));
        }
    }
    Ok(out)
}

pub fn write_partition_to(out: impl Write, p: &Partition) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PARTITION_HEADER)?;
    for (alias, author) in p.iter() {
        w.write_record([alias, author])?;
    }
    w.flush()
}

/// Writes one row per alias, sorted by alias id.
pub fn write_partition(path: impl AsRef<Path>, p: &Partition) -> Result<()> {
    let path = path.as_ref();
    write_partition_to(create(path)?, p).map_err(|e| Error::io(path, e))
}

/// Reads a partition; author ids may be arbitrary cluster labels and are
/// canonicalised on load.
pub fn read_partition_from(input: impl Read, path: &Path) -> Result<Partition> {
    let rows = read_rows(input, path, PARTITION_HEADER)?;
    let mut seen = HashSet::new();
    for (line, [alias, _]) in &rows {
        if alias.is_empty() {
            return Err(Error::Malformed {
                path: path.into(),
                line: *line,
                message: "empty alias id".into(),
            });
        }
        if !seen.insert(alias.as_str()) {
            return Err(Error::Malformed {
                path: path.into(),
                line: *line,
                message: format!("alias `{alias}` is assigned more than once"),
            });
        }
    }
    Partition::from_labels(rows.into_iter().map(|(_, [a, b])| (a, b)))
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    read_partition_from(open(path)?, path)
}

pub fn write_pairs_to(out: impl Write, pairs: &[(String, String)]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PAIR_HEADER)?;
    for (a, b) in pairs {
        w.write_record([a, b])?;
    }
    w.flush()
}

pub fn write_pairs(path: impl AsRef<Path>, pairs: &[(String, String)]) -> Result<()> {
    let path = path.as_ref();
    write_pairs_to(create(path)?, pairs).map_err(|e| Error::io(path, e))
}
