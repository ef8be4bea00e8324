//! Brute-force verification of the placement-delivery-array conditions,
//! useless-star detection, and scheme metric extraction.
//!
//! Everything here treats the array as an untrusted input and checks it
//! exhaustively: C1 by counting stars per column, C2 by collecting the
//! symbol set, C3 by testing every pair of equal symbols. Quadratic in
//! the worst case, which is fine at the scales this crate targets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pda::{PdaArray, PdaEntry, SchemeParams};
use crate::ratio::ratio;

/// C1: the star count of every column against the declared Z.
#[derive(Debug, Clone, Serialize)]
pub struct C1Report {
    pub pass: bool,
    pub declared_z: usize,
    pub column_stars: Vec<usize>,
}

/// C2: the symbol set must be exactly `[0, S-1]`.
#[derive(Debug, Clone, Serialize)]
pub struct C2Report {
    pub pass: bool,
    pub missing: Vec<u32>,
    pub out_of_range: Vec<u32>,
}

/// How a pair of equal symbols violated C3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum C3ViolationKind {
    SameRow,
    SameColumn,
    MissingStar,
}

#[derive(Debug, Clone, Serialize)]
pub struct C3Violation {
    pub symbol: u32,
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub kind: C3ViolationKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct C3Report {
    pub pass: bool,
    pub violation: Option<C3Violation>,
}

/// Outcome of the full check plus the per-symbol occurrence counts
/// (the coding gain of each broadcast).
#[derive(Debug, Clone, Serialize)]
pub struct PdaReport {
    pub c1: C1Report,
    pub c2: C2Report,
    pub c3: C3Report,
    pub gain_histogram: Vec<u64>,
}

impl PdaReport {
    pub fn pass(&self) -> bool {
        self.c1.pass && self.c2.pass && self.c3.pass
    }
}

/// Checks the three array conditions by brute force.
///
/// Failures are report content, not errors; only a raw-labelled array
/// is rejected outright.
pub fn verify_pda(pda: &PdaArray) -> Result<PdaReport> {
    if !pda.is_canonical() {
        return Err(Error::RawLabels);
    }
    let s = pda.s();

    // C1
    let column_stars: Vec<usize> = (0..pda.k()).map(|c| pda.column_stars(c)).collect();
    let c1_pass = column_stars.iter().all(|&count| count == pda.z());

    // C2 and the gain histogram share one pass over the grid.
    let mut gain = vec![0u64; s];
    let mut out_of_range = Vec::new();
    let mut positions_by_symbol: Vec<Vec<(usize, usize)>> = vec![Vec::new(); s];
    for row in 0..pda.f() {
        for col in 0..pda.k() {
            if let PdaEntry::Symbol(sym) = pda.entry(row, col) {
                let sym = *sym;
                if (sym as usize) < s {
                    gain[sym as usize] += 1;
                    positions_by_symbol[sym as usize].push((row, col));
                } else if !out_of_range.contains(&sym) {
                    out_of_range.push(sym);
                }
            }
        }
    }
    let missing: Vec<u32> = (0..s as u32)
        .filter(|&sym| gain[sym as usize] == 0)
        .collect();
    let c2_pass = missing.is_empty() && out_of_range.is_empty();

    // C3: every pair of equal symbols needs distinct rows, distinct
    // columns, and stars at both cross positions.
    let mut violation = None;
    'outer: for (sym, positions) in positions_by_symbol.iter().enumerate() {
        for (a, &(r1, c1)) in positions.iter().enumerate() {
            for &(r2, c2) in &positions[a + 1..] {
                let kind = if r1 == r2 {
                    Some(C3ViolationKind::SameRow)
                } else if c1 == c2 {
                    Some(C3ViolationKind::SameColumn)
                } else if !pda.entry(r1, c2).is_star() || !pda.entry(r2, c1).is_star() {
                    Some(C3ViolationKind::MissingStar)
                } else {
                    None
                };
                if let Some(kind) = kind {
                    violation = Some(C3Violation {
                        symbol: sym as u32,
                        first: (r1, c1),
                        second: (r2, c2),
                        kind,
                    });
                    break 'outer;
                }
            }
        }
    }

    Ok(PdaReport {
        c1: C1Report {
            pass: c1_pass,
            declared_z: pda.z(),
            column_stars,
        },
        c2: C2Report {
            pass: c2_pass,
            missing,
            out_of_range,
        },
        c3: C3Report {
            pass: violation.is_none(),
            violation,
        },
        gain_histogram: gain,
    })
}

/// Stars that create no multicast opportunity.
#[derive(Debug, Clone, Serialize)]
pub struct UselessStarReport {
    /// Useless positions in row-major order.
    pub positions: Vec<(usize, usize)>,
    /// Useless count per column.
    pub per_column: Vec<usize>,
}

impl UselessStarReport {
    /// The shared per-column count, when uniform.
    pub fn uniform_count(&self) -> Result<usize> {
        let first = self.per_column.first().copied().unwrap_or(0);
        for &count in &self.per_column {
            if count != first {
                return Err(Error::NonUniformUseless {
                    first,
                    second: count,
                });
            }
        }
        Ok(first)
    }
}

/// Finds every star that takes part in no 2x2 symbol subarray: a star
/// at (i, j) is useless exactly when no symbol occurs both in row i and
/// in column j.
#[allow(clippy::needless_range_loop)]
pub fn find_useless_stars(pda: &PdaArray) -> Result<UselessStarReport> {
    if !pda.is_canonical() {
        return Err(Error::RawLabels);
    }
    let words = pda.s().div_ceil(64);
    let mut row_sets = vec![vec![0u64; words]; pda.f()];
    let mut col_sets = vec![vec![0u64; words]; pda.k()];
    for row in 0..pda.f() {
        for col in 0..pda.k() {
            if let PdaEntry::Symbol(sym) = pda.entry(row, col) {
                let sym = *sym as usize;
                if sym < pda.s() {
                    row_sets[row][sym / 64] |= 1 << (sym % 64);
                    col_sets[col][sym / 64] |= 1 << (sym % 64);
                }
            }
        }
    }

    let mut positions = Vec::new();
    let mut per_column = vec![0usize; pda.k()];
    for row in 0..pda.f() {
        for col in 0..pda.k() {
            if !pda.entry(row, col).is_star() {
                continue;
            }
            let shares_symbol = row_sets[row]
                .iter()
                .zip(&col_sets[col])
                .any(|(a, b)| a & b != 0);
            if !shares_symbol {
                positions.push((row, col));
                per_column[col] += 1;
            }
        }
    }
    Ok(UselessStarReport {
        positions,
        per_column,
    })
}

/// Extracts the counted (K, F, Z, S) and the exact memory ratio and
/// rate. Rejects arrays whose columns disagree on the star count,
/// since no single Z exists for them.
pub fn scheme_metrics(pda: &PdaArray) -> Result<SchemeParams> {
    if !pda.is_canonical() {
        return Err(Error::RawLabels);
    }
    let first = pda.column_stars(0);
    for col in 1..pda.k() {
        let count = pda.column_stars(col);
        if count != first {
            return Err(Error::NonUniformStars {
                first,
                second: count,
            });
        }
    }
    let mut seen = vec![false; pda.s()];
    let mut distinct = 0usize;
    for entry in pda.entries() {
        if let PdaEntry::Symbol(sym) = entry {
            let sym = *sym as usize;
            if sym >= seen.len() {
                seen.resize(sym + 1, false);
            }
            if !seen[sym] {
                seen[sym] = true;
                distinct += 1;
            }
        }
    }
    Ok(SchemeParams {
        k: pda.k() as u64,
        f: pda.f() as u64,
        z: first as u64,
        s: distinct as u64,
        memory_ratio: ratio(first as i128, pda.f() as i128),
        rate: ratio(distinct as i128, pda.f() as i128),
    })
}
