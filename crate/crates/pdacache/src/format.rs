//! File formats for placement delivery arrays.
//!
//! Text format, version 1:
//!
//! ```text
//! pda 1
//! K F Z S
//! <F rows of K space-separated tokens, each `*` or an integer>
//! # optional trailing comment lines
//! ```
//!
//! The JSON variant carries the same grid plus row/column labels and the
//! symbol-label table when present.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pda::{ColLabel, PdaArray, PdaEntry, RawLabel, RowLabel};
use crate::verify;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Column (1-based, in characters) at which `token` starts within `line`.
fn token_column(line: &str, token: &str) -> usize {
    line.find(token).map(|p| p + 1).unwrap_or(1)
}

fn parse_count(line_no: usize, line: &str, token: &str, what: &str) -> Result<usize> {
    token.parse::<usize>().map_err(|_| {
        parse_err(
            line_no,
            token_column(line, token),
            format!("malformed {what} `{token}`"),
        )
    })
}

/// Parses the text format.
///
/// The declared `K`, `F`, `Z`, `S` are taken at face value here; the
/// verifier cross-checks them against the grid.
pub fn read_pda(input: &str) -> Result<PdaArray> {
    let mut lines = input.lines().enumerate();

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty input, expected `pda 1` header"))?;
    if header.trim() != "pda 1" {
        return Err(parse_err(
            header_no + 1,
            1,
            format!("expected `pda 1` header, found `{}`", header.trim()),
        ));
    }

    let (counts_no, counts_line) = lines
        .next()
        .ok_or_else(|| parse_err(2, 1, "missing `K F Z S` line"))?;
    let counts: Vec<&str> = counts_line.split_whitespace().collect();
    if counts.len() != 4 {
        return Err(parse_err(
            counts_no + 1,
            1,
            format!("expected `K F Z S`, found {} values", counts.len()),
        ));
    }
    let k = parse_count(counts_no + 1, counts_line, counts[0], "user count K")?;
    let f = parse_count(counts_no + 1, counts_line, counts[1], "row count F")?;
    let z = parse_count(counts_no + 1, counts_line, counts[2], "star count Z")?;
    let s = parse_count(counts_no + 1, counts_line, counts[3], "symbol count S")?;
    if k == 0 || f == 0 {
        return Err(parse_err(counts_no + 1, 1, "K and F must be positive"));
    }

    let mut entries = Vec::with_capacity(f * k);
    let mut rows_read = 0usize;
    for (line_no, line) in &mut lines {
        if rows_read == f {
            // Only comments may follow the grid.
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            return Err(parse_err(
                line_no + 1,
                1,
                "unexpected content after the grid",
            ));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(parse_err(line_no + 1, 1, "blank line inside the grid"));
        }
        if tokens.len() != k {
            return Err(Error::DimensionMismatch {
                line: line_no + 1,
                found: tokens.len(),
                expected: k,
            });
        }
        for token in tokens {
            if token == "*" {
                entries.push(PdaEntry::Star);
            } else {
                let value = token.parse::<u32>().map_err(|_| {
                    parse_err(
                        line_no + 1,
                        token_column(line, token),
                        format!("malformed token `{token}`, expected `*` or an integer"),
                    )
                })?;
                entries.push(PdaEntry::Symbol(value));
            }
        }
        rows_read += 1;
    }
    if rows_read != f {
        return Err(Error::DimensionMismatch {
            line: rows_read + 3,
            found: rows_read,
            expected: f,
        });
    }

    PdaArray::new(entries, f, k, z, s)
}

fn entry_token(entry: &PdaEntry) -> Result<String> {
    match entry {
        PdaEntry::Star => Ok("*".to_string()),
        PdaEntry::Symbol(v) => Ok(v.to_string()),
        PdaEntry::Raw(_) => Err(Error::RawLabels),
    }
}

/// Serializes a canonicalized array to the text format.
///
/// Errors if the array still carries raw labels. `read_pda` of the
/// output reproduces the grid entry for entry.
pub fn write_pda(pda: &PdaArray) -> Result<String> {
    let mut out = String::from("pda 1\n");
    out.push_str(&format!(
        "{} {} {} {}\n",
        pda.k(),
        pda.f(),
        pda.z(),
        pda.s()
    ));
    for row in 0..pda.f() {
        let tokens: Result<Vec<String>> = (0..pda.k())
            .map(|col| entry_token(pda.entry(row, col)))
            .collect();
        out.push_str(&tokens?.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct LabelJson {
    v: Vec<u32>,
    o: u32,
}

#[derive(Serialize, Deserialize)]
struct RowLabelJson {
    f: Vec<u32>,
    g: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ColLabelJson {
    i: Vec<usize>,
    c: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    k: u64,
    f: u64,
    z: u64,
    s: u64,
    memory_ratio: String,
    rate: String,
}

#[derive(Serialize, Deserialize)]
struct PdaJson {
    format: String,
    k: usize,
    f: usize,
    z: usize,
    s: usize,
    grid: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_labels: Option<Vec<RowLabelJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<ColLabelJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symbol_labels: Option<Vec<LabelJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ParamsJson>,
}

/// Serializes a canonicalized array to the JSON variant, including any
/// labels and, when the grid supports it, the derived scheme metrics.
pub fn write_pda_json(pda: &PdaArray) -> Result<String> {
    let mut grid = Vec::with_capacity(pda.f());
    for row in 0..pda.f() {
        let tokens: Result<Vec<String>> = (0..pda.k())
            .map(|col| entry_token(pda.entry(row, col)))
            .collect();
        grid.push(tokens?);
    }
    let params = verify::scheme_metrics(pda).ok().map(|p| ParamsJson {
        k: p.k,
        f: p.f,
        z: p.z,
        s: p.s,
        memory_ratio: crate::ratio::exact_string(&p.memory_ratio),
        rate: crate::ratio::exact_string(&p.rate),
    });
    let doc = PdaJson {
        format: "pda-json-1".to_string(),
        k: pda.k(),
        f: pda.f(),
        z: pda.z(),
        s: pda.s(),
        grid,
        row_labels: pda.row_labels.as_ref().map(|labels| {
            labels
                .iter()
                .map(|l| RowLabelJson {
                    f: l.f.clone(),
                    g: l.g.clone(),
                })
                .collect()
        }),
        col_labels: pda.col_labels.as_ref().map(|labels| {
            labels
                .iter()
                .map(|l| ColLabelJson {
                    i: l.i.clone(),
                    c: l.c.clone(),
                })
                .collect()
        }),
        symbol_labels: pda.symbol_labels.as_ref().map(|labels| {
            labels
                .iter()
                .map(|l| LabelJson {
                    v: l.vector.clone(),
                    o: l.order,
                })
                .collect()
        }),
        params,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidParams(e.to_string()))
}

/// Parses the JSON variant.
pub fn read_pda_json(input: &str) -> Result<PdaArray> {
    let doc: PdaJson =
        serde_json::from_str(input).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    if doc.format != "pda-json-1" {
        return Err(parse_err(1, 1, format!("unknown format `{}`", doc.format)));
    }
    if doc.grid.len() != doc.f {
        return Err(Error::DimensionMismatch {
            line: 1,
            found: doc.grid.len(),
            expected: doc.f,
        });
    }
    let mut entries = Vec::with_capacity(doc.f * doc.k);
    for (row_no, row) in doc.grid.iter().enumerate() {
        if row.len() != doc.k {
            return Err(Error::DimensionMismatch {
                line: row_no + 1,
                found: row.len(),
                expected: doc.k,
            });
        }
        for token in row {
            if token == "*" {
                entries.push(PdaEntry::Star);
            } else {
                let value = token.parse::<u32>().map_err(|_| {
                    parse_err(row_no + 1, 1, format!("malformed grid token `{token}`"))
                })?;
                entries.push(PdaEntry::Symbol(value));
            }
        }
    }
    let mut pda = PdaArray::new(entries, doc.f, doc.k, doc.z, doc.s)?;
    pda.row_labels = doc.row_labels.map(|labels| {
        labels
            .into_iter()
            .map(|l| RowLabel { f: l.f, g: l.g })
            .collect()
    });
    pda.col_labels = doc.col_labels.map(|labels| {
        labels
            .into_iter()
            .map(|l| ColLabel { i: l.i, c: l.c })
            .collect()
    });
    pda.symbol_labels = doc.symbol_labels.map(|labels| {
        labels
            .into_iter()
            .map(|l| RawLabel::new(l.v, l.o))
            .collect()
    });
    Ok(pda)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EQ1: &str = "pda 1\n4 4 2 4\n0 * 2 *\n* 0 * 2\n* 1 * 3\n1 * 3 *\n";

    #[test]
    fn reads_the_four_by_four_grid() {
        let pda = read_pda(EQ1).unwrap();
        assert_eq!(pda.k(), 4);
        assert_eq!(pda.f(), 4);
        assert_eq!(pda.z(), 2);
        assert_eq!(pda.s(), 4);
        assert_eq!(*pda.entry(0, 0), PdaEntry::Symbol(0));
        assert_eq!(*pda.entry(0, 1), PdaEntry::Star);
        assert_eq!(*pda.entry(3, 2), PdaEntry::Symbol(3));
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        assert!(matches!(read_pda(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn short_row_is_a_dimension_mismatch() {
        let text = "pda 1\n4 2 2 4\n0 * 2\n* 0 * 2\n";
        assert!(matches!(
            read_pda(text),
            Err(Error::DimensionMismatch {
                line: 3,
                found: 3,
                expected: 4
            })
        ));
    }

    #[test]
    fn malformed_token_reports_position() {
        let text = "pda 1\n2 1 0 2\n0 x\n";
        match read_pda(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_rows_are_detected() {
        let text = "pda 1\n2 3 1 2\n0 *\n* 1\n";
        assert!(matches!(
            read_pda(text),
            Err(Error::DimensionMismatch {
                found: 2,
                expected: 3,
                ..
            })
        ));
    }

    #[test]
    fn round_trip_preserves_the_grid() {
        let pda = read_pda(EQ1).unwrap();
        let text = write_pda(&pda).unwrap();
        let back = read_pda(&text).unwrap();
        assert!(pda.same_grid(&back));
    }

    #[test]
    fn one_by_one_star_grid() {
        let pda = PdaArray::new(vec![PdaEntry::Star], 1, 1, 1, 0).unwrap();
        let text = write_pda(&pda).unwrap();
        assert_eq!(text, "pda 1\n1 1 1 0\n*\n");
        assert!(read_pda(&text).unwrap().same_grid(&pda));
    }

    #[test]
    fn raw_arrays_cannot_be_written() {
        let entries = vec![PdaEntry::Raw(RawLabel::new(vec![0], 0))];
        let pda = PdaArray::new(entries, 1, 1, 0, 1).unwrap();
        assert!(matches!(write_pda(&pda), Err(Error::RawLabels)));
    }

    #[test]
    fn trailing_comments_are_allowed() {
        let text = format!("{EQ1}# built by hand\n\n# two comments\n");
        assert!(read_pda(&text).is_ok());
    }

    #[test]
    fn transformed_array_round_trips() {
        let pda =
            crate::pda::canonicalize(&crate::construct::transform_theorem2(5, 3, 2, 1).unwrap())
                .unwrap();
        let back = read_pda(&write_pda(&pda).unwrap()).unwrap();
        assert!(pda.same_grid(&back));
        assert_eq!(back.k(), 15);
        assert_eq!(back.f(), 5);
        let from_json = read_pda_json(&write_pda_json(&pda).unwrap()).unwrap();
        assert_eq!(pda, from_json);
    }

    #[test]
    fn json_round_trip_keeps_labels() {
        let mut pda = read_pda(EQ1).unwrap();
        pda.col_labels = Some(
            (0..4)
                .map(|j| ColLabel {
                    i: vec![j % 2],
                    c: vec![(j / 2) as u32],
                })
                .collect(),
        );
        pda.symbol_labels = Some(
            (0..4)
                .map(|s| RawLabel::new(vec![s as u32, 0], 0))
                .collect(),
        );
        let json = write_pda_json(&pda).unwrap();
        let back = read_pda_json(&json).unwrap();
        assert_eq!(pda, back);
    }
}
