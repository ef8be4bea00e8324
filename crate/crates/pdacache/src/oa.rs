//! Orthogonal arrays and proper orthogonal arrays.
//!
//! An OA of strength `t` over `[0, q-1]` shows every t-tuple equally
//! often in every t-column projection. A proper OA (strength `m-1`,
//! constant row sum mod q) supplies the row indices for the stacked
//! construction in [`crate::construct`].

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lex;

/// An `l x m` matrix over `[0, q-1]` with declared strength metadata.
///
/// Duplicate rows are representable (the verifier must be able to fail
/// them); the constructions only ever emit all-distinct rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    rows: Vec<Vec<u32>>,
    q: u32,
    m: usize,
    strength: usize,
}

impl OrthogonalArray {
    pub fn new(rows: Vec<Vec<u32>>, q: u32, strength: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams("alphabet size q must be >= 2".into()));
        }
        let m = rows.first().map(Vec::len).unwrap_or(0);
        if m == 0 {
            return Err(Error::InvalidParams(
                "array must have at least one column".into(),
            ));
        }
        for row in &rows {
            if row.len() != m {
                return Err(Error::InvalidParams("rows have differing lengths".into()));
            }
            if row.iter().any(|&v| v >= q) {
                return Err(Error::InvalidParams(format!(
                    "entry out of range for alphabet [0, {}]",
                    q - 1
                )));
            }
        }
        Ok(OrthogonalArray {
            rows,
            q,
            m,
            strength,
        })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn columns(&self) -> usize {
        self.m
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    /// Index lambda = l / q^strength.
    pub fn index(&self) -> usize {
        let qt = lex::checked_pow(self.q, self.strength).expect("index overflow") as usize;
        self.len() / qt
    }

    pub fn has_distinct_rows(&self) -> bool {
        let mut sorted = self.rows.clone();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

/// Builds the proper orthogonal array of strength `m-1`: the q^(m-1)
/// rows `(f_0, .., f_{m-2}, row_sum - sum(f_i) mod q)`, enumerated with
/// the first `m-1` coordinates in ascending lexicographic order.
pub fn build_poa(m: usize, q: u32, row_sum: u32) -> Result<OrthogonalArray> {
    if m < 2 {
        return Err(Error::InvalidParams("m must be >= 2".into()));
    }
    if q < 2 {
        return Err(Error::InvalidParams("q must be >= 2".into()));
    }
    if row_sum >= q {
        return Err(Error::InvalidParams(format!(
            "row sum {row_sum} out of range [0, {}]",
            q - 1
        )));
    }
    let rows = lex::all_vectors(m - 1, q)
        .map(|mut prefix| {
            let sum: u32 = prefix.iter().sum();
            prefix.push((row_sum + q - sum % q) % q);
            prefix
        })
        .collect();
    OrthogonalArray::new(rows, q, m - 1)
}

/// First violation found by [`verify_oa`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaViolation {
    pub columns: Vec<usize>,
    pub tuple: Vec<u32>,
    pub count: usize,
    pub expected: usize,
}

/// Outcome of a strength check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaReport {
    pub strength: usize,
    pub index: usize,
    pub violation: Option<OaViolation>,
}

impl OaReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks strength `t` by brute force: for every t-subset of columns,
/// every t-tuple must occur exactly `l / q^t` times.
pub fn verify_oa(arr: &OrthogonalArray, t: usize) -> Result<OaReport> {
    if t == 0 || t > arr.columns() {
        return Err(Error::InvalidParams(format!(
            "strength {t} out of range [1, {}]",
            arr.columns()
        )));
    }
    let qt = lex::checked_pow(arr.q(), t)
        .filter(|&v| v <= usize::MAX as u128)
        .ok_or_else(|| Error::InvalidParams("q^t too large".into()))? as usize;
    if !arr.len().is_multiple_of(qt) {
        return Err(Error::IndexNotIntegral {
            rows: arr.len(),
            q: arr.q(),
            t,
        });
    }
    let expected = arr.len() / qt;

    for columns in (0..arr.columns()).combinations(t) {
        let mut counts = vec![0usize; qt];
        for row in arr.rows() {
            let restricted: Vec<u32> = columns.iter().map(|&c| row[c]).collect();
            counts[lex::rank_of_vector(&restricted, arr.q())] += 1;
        }
        for (rank, &count) in counts.iter().enumerate() {
            if count != expected {
                return Ok(OaReport {
                    strength: t,
                    index: expected,
                    violation: Some(OaViolation {
                        columns,
                        tuple: lex::vector_of_rank(rank, t, arr.q()),
                        count,
                        expected,
                    }),
                });
            }
        }
    }
    Ok(OaReport {
        strength: t,
        index: expected,
        violation: None,
    })
}

/// Returns the constant row sum mod q when one exists.
pub fn is_proper(arr: &OrthogonalArray) -> Option<u32> {
    let mut sums = arr
        .rows()
        .iter()
        .map(|row| row.iter().sum::<u32>() % arr.q());
    let first = sums.next()?;
    sums.all(|s| s == first).then_some(first)
}

/// Parses the OA text format: header `oa 1`, then `l m q t`, then `l`
/// rows of `m` space-separated values.
pub fn read_oa(input: &str) -> Result<OrthogonalArray> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty input, expected `oa 1` header".into(),
    })?;
    if header.trim() != "oa 1" {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected `oa 1` header, found `{}`", header.trim()),
        });
    }
    let (counts_no, counts_line) = lines.next().ok_or(Error::Parse {
        line: 2,
        column: 1,
        message: "missing `l m q t` line".into(),
    })?;
    let counts: Vec<usize> = counts_line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: counts_no + 1,
                column: 1,
                message: format!("malformed count `{tok}`"),
            })
        })
        .collect::<Result<_>>()?;
    if counts.len() != 4 {
        return Err(Error::Parse {
            line: counts_no + 1,
            column: 1,
            message: format!("expected `l m q t`, found {} values", counts.len()),
        });
    }
    let (l, m, q, t) = (counts[0], counts[1], counts[2] as u32, counts[3]);
    let mut rows = Vec::with_capacity(l);
    for (line_no, line) in lines {
        if rows.len() == l {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            return Err(Error::Parse {
                line: line_no + 1,
                column: 1,
                message: "unexpected content after the array".into(),
            });
        }
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    column: 1,
                    message: format!("malformed value `{tok}`"),
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != m {
            return Err(Error::DimensionMismatch {
                line: line_no + 1,
                found: row.len(),
                expected: m,
            });
        }
        rows.push(row);
    }
    if rows.len() != l {
        return Err(Error::DimensionMismatch {
            line: rows.len() + 3,
            found: rows.len(),
            expected: l,
        });
    }
    OrthogonalArray::new(rows, q, t)
}

/// Serializes to the OA text format.
pub fn write_oa(arr: &OrthogonalArray) -> String {
    let mut out = String::from("oa 1\n");
    out.push_str(&format!(
        "{} {} {} {}\n",
        arr.len(),
        arr.columns(),
        arr.q(),
        arr.strength()
    ));
    for row in arr.rows() {
        let tokens: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows_as_set(arr: &OrthogonalArray) -> Vec<Vec<u32>> {
        let mut rows = arr.rows().to_vec();
        rows.sort();
        rows
    }

    #[test]
    fn poa_3_2_matches_known_row_set() {
        // The strength-2 binary array with constant row sum 0 has rows
        // {000, 011, 101, 110}, here compared as a set.
        let poa = build_poa(3, 2, 0).unwrap();
        assert_eq!(
            rows_as_set(&poa),
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        assert!(verify_oa(&poa, 2).unwrap().pass());
        assert_eq!(is_proper(&poa), Some(0));
    }

    #[test]
    fn poa_2_5_exact_rows() {
        let zero = build_poa(2, 5, 0).unwrap();
        assert_eq!(
            zero.rows(),
            &[vec![0, 0], vec![1, 4], vec![2, 3], vec![3, 2], vec![4, 1]]
        );
        let two = build_poa(2, 5, 2).unwrap();
        assert_eq!(
            two.rows(),
            &[vec![0, 2], vec![1, 1], vec![2, 0], vec![3, 4], vec![4, 3]]
        );
    }

    #[test]
    fn ternary_strength_two_array_passes_but_is_not_proper() {
        let rows = vec![
            vec![0, 0, 0],
            vec![0, 1, 1],
            vec![0, 2, 2],
            vec![1, 0, 1],
            vec![1, 1, 2],
            vec![1, 2, 0],
            vec![2, 0, 2],
            vec![2, 1, 0],
            vec![2, 2, 1],
        ];
        let arr = OrthogonalArray::new(rows, 3, 2).unwrap();
        assert!(verify_oa(&arr, 2).unwrap().pass());
        assert_eq!(is_proper(&arr), None);
    }

    #[test]
    fn detects_a_strength_violation() {
        let rows = vec![vec![0, 0], vec![0, 0], vec![1, 1], vec![1, 0]];
        let arr = OrthogonalArray::new(rows, 2, 1).unwrap();
        let report = verify_oa(&arr, 1).unwrap();
        let violation = report.violation.expect("must fail");
        assert_eq!(violation.columns, vec![1]);
        assert_eq!(violation.tuple, vec![0]);
        assert_eq!(violation.count, 3);
        assert_eq!(violation.expected, 2);
    }

    #[test]
    fn index_must_divide() {
        let rows = vec![vec![0, 0], vec![1, 1], vec![0, 1]];
        let arr = OrthogonalArray::new(rows, 2, 1).unwrap();
        assert!(matches!(
            verify_oa(&arr, 1),
            Err(Error::IndexNotIntegral {
                rows: 3,
                q: 2,
                t: 1
            })
        ));
    }

    #[test]
    fn single_row_is_proper() {
        let arr = OrthogonalArray::new(vec![vec![0, 0]], 2, 1).unwrap();
        assert_eq!(is_proper(&arr), Some(0));
    }

    #[test]
    fn strength_cascade_holds_for_all_small_parameters() {
        // A strength m-1 array is also strength t at index q^(m-1-t).
        for q in 2..=5u32 {
            for m in 2..=4usize {
                for x in 0..q {
                    let poa = build_poa(m, q, x).unwrap();
                    assert_eq!(poa.len(), (q as usize).pow(m as u32 - 1));
                    assert!(poa.has_distinct_rows());
                    assert_eq!(is_proper(&poa), Some(x));
                    for t in 1..m {
                        let report = verify_oa(&poa, t).unwrap();
                        assert!(report.pass(), "q={q} m={m} x={x} t={t}");
                        assert_eq!(report.index, (q as usize).pow((m - 1 - t) as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let poa = build_poa(3, 3, 1).unwrap();
        let text = write_oa(&poa);
        let back = read_oa(&text).unwrap();
        assert_eq!(poa, back);
    }
}
