//! File formats.
//!
//! * TripleSet, JSON lines: `{"type":"tcsfs","n":N,"count":m}` followed by
//!   `m` rows `{"a":"<bits>","b":"<bits>","c":"<bits>"}`.
//! * Perfectly matched sequence, JSON lines: `{"type":"pms","n":N,"count":m}`
//!   followed by `m` rows `{"a":"<bits>","b":"<bits>"}`.
//! * ApFreeSet, JSON: `{"M":M,"elements":[…]}`.
//! * Construction stats, JSON: `{"params":…,"trials":[…],"predicted_EY":"p/q"}`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::apfree::ApFreeSet;
use crate::construction::{format_rational, ConstructionParams, ConstructionResult, TrialStats};
use crate::error::{Error, Result};
use crate::group::{BitVec, Triple, TripleSet};

#[derive(Serialize, Deserialize)]
struct Header {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleRow {
    a: String,
    b: String,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRow {
    a: String,
    b: String,
}

fn json_line<T: Serialize>(w: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, value).map_err(|e| Error::Format(e.to_string()))?;
    w.write_all(b"\n")?;
    Ok(())
}

fn parse_line<T: for<'de> Deserialize<'de>>(line: &str, lineno: usize) -> Result<T> {
    serde_json::from_str(line).map_err(|e| Error::Format(format!("line {lineno}: {e}")))
}

fn parse_bits(s: &str, n: usize, lineno: usize) -> Result<BitVec> {
    let v: BitVec = s
        .parse()
        .map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
    if v.len() != n {
        return Err(Error::Format(format!(
            "line {lineno}: vector {s:?} has length {}, header says n = {n}",
            v.len()
        )));
    }
    Ok(v)
}

/// Non-blank lines with 1-based line numbers.
fn lines(r: impl BufRead) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|l| !matches!(l, Ok((_, s)) if s.trim().is_empty()))
}

fn read_jsonl<R: for<'de> Deserialize<'de>>(
    r: impl BufRead,
    expected_kind: &str,
) -> Result<(usize, Vec<(usize, R)>)> {
    let mut it = lines(r);
    let (lineno, first) = it
        .next()
        .ok_or_else(|| Error::Format("empty input".into()))??;
    let header: Header = parse_line(&first, lineno)?;
    if header.kind != expected_kind {
        return Err(Error::Format(format!(
            "expected type {expected_kind:?}, found {:?}",
            header.kind
        )));
    }
    let mut rows = Vec::with_capacity(header.count);
    for line in it {
        let (lineno, text) = line?;
        rows.push((lineno, parse_line(&text, lineno)?));
    }
    if rows.len() != header.count {
        return Err(Error::Format(format!(
            "header promises {} rows, found {}",
            header.count,
            rows.len()
        )));
    }
    Ok((header.n, rows))
}

pub fn write_triple_set(w: &mut impl Write, set: &TripleSet) -> Result<()> {
    json_line(
        w,
        &Header {
            kind: "tcsfs".into(),
            n: set.dim(),
            count: set.len(),
        },
    )?;
    for t in set {
        json_line(
            w,
            &TripleRow {
                a: t.a().to_string(),
                b: t.b().to_string(),
                c: t.c().to_string(),
            },
        )?;
    }
    Ok(())
}

pub fn read_triple_set(r: impl BufRead) -> Result<TripleSet> {
    let (n, rows) = read_jsonl::<TripleRow>(r, "tcsfs")?;
    let triples = rows
        .into_iter()
        .map(|(lineno, row)| {
            Triple::new(
                parse_bits(&row.a, n, lineno)?,
                parse_bits(&row.b, n, lineno)?,
                parse_bits(&row.c, n, lineno)?,
            )
        })
        .collect::<Result<_>>()?;
    TripleSet::new(n, triples)
}

pub fn write_pms(w: &mut impl Write, n: usize, pairs: &[(BitVec, BitVec)]) -> Result<()> {
    json_line(
        w,
        &Header {
            kind: "pms".into(),
            n,
            count: pairs.len(),
        },
    )?;
    for (a, b) in pairs {
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: if a.len() != n { a.len() } else { b.len() },
            });
        }
        json_line(
            w,
            &PairRow {
                a: a.to_string(),
                b: b.to_string(),
            },
        )?;
    }
    Ok(())
}

pub fn read_pms(r: impl BufRead) -> Result<(usize, Vec<(BitVec, BitVec)>)> {
    let (n, rows) = read_jsonl::<PairRow>(r, "pms")?;
    let pairs = rows
        .into_iter()
        .map(|(lineno, row)| {
            Ok((
                parse_bits(&row.a, n, lineno)?,
                parse_bits(&row.b, n, lineno)?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok((n, pairs))
}

pub fn write_apfree(w: &mut impl Write, set: &ApFreeSet) -> Result<()> {
    json_line(w, set)
}

/// Parses and validates an ApFreeSet; structural problems are
/// [`Error::Format`], a set that fails the AP check is [`Error::NotApFree`].
pub fn read_apfree(r: impl BufRead) -> Result<ApFreeSet> {
    let raw: ApFreeSet = serde_json::from_reader(r).map_err(|e| Error::Format(e.to_string()))?;
    raw.validated()
}

/// Parses an ApFreeSet file without the AP check, for verification.
pub fn read_apfree_unchecked(r: impl BufRead) -> Result<(u64, Vec<u64>)> {
    let v: Value = serde_json::from_reader(r).map_err(|e| Error::Format(e.to_string()))?;
    let m = v
        .get("M")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Format("missing integer field \"M\"".into()))?;
    let elements = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing array field \"elements\"".into()))?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| Error::Format(format!("non-integer element {x}")))
        })
        .collect::<Result<_>>()?;
    Ok((m, elements))
}

#[derive(Serialize)]
struct StatsFile<'a> {
    params: &'a ConstructionParams,
    trials: &'a [TrialStats],
    #[serde(rename = "predicted_EY")]
    predicted_ey: String,
}

pub fn write_stats(w: &mut impl Write, result: &ConstructionResult) -> Result<()> {
    json_line(
        w,
        &StatsFile {
            params: &result.params,
            trials: &result.trials,
            predicted_ey: format_rational(&result.predicted_ey),
        },
    )
}
