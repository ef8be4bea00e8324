//! Placement delivery array constructions.
//!
//! Three baseline families (`partition`, `hypergraph`, `flexible`) index
//! their rows by a full vector space, so their subpacketization grows as
//! q^m. The `theorem1` construction instead stacks blocks indexed by
//! proper orthogonal arrays of strength m-1, one block per g-vector,
//! cutting the row count by a factor of q at the same user count, memory
//! ratio, and rate. The `theorem2` transform then relabels the blocks so
//! they can sit side by side instead of stacked, trading extra users for
//! an r^t-fold smaller subpacketization.
//!
//! Every constructor returns a raw-labelled array together with its row
//! and column labels; callers canonicalize before verification or
//! delivery. Closed-form parameter evaluators live alongside the
//! builders so tests can cross-check counted grids against formulas.

use std::collections::HashMap;

use itertools::Itertools;
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::lex;
use crate::oa::build_poa;
use crate::pda::{ColLabel, PdaArray, PdaEntry, RawLabel, RowLabel, SchemeParams};
use crate::ratio::ratio;

/// Upper bound on F*K for materialized grids.
const MAX_ENTRIES: u128 = 1 << 24;

/// floor((q-1) / (q-z)): the block-count base r.
pub fn floor_ratio(q: u32, z: u32) -> u32 {
    (q - 1) / (q - z)
}

fn check_common(q: u32, m: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("q must be >= 2, got {q}")));
    }
    if m < 1 {
        return Err(Error::InvalidParams("m must be >= 1".into()));
    }
    Ok(())
}

fn check_zt(q: u32, z: u32, m: usize, t: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("m must be >= 2, got {m}")));
    }
    if z == 0 || z >= q {
        return Err(Error::InvalidParams(format!(
            "z must lie in [1, {}], got {z}",
            q - 1
        )));
    }
    if t == 0 || t >= m {
        return Err(Error::InvalidParams(format!(
            "t must lie in [1, {}], got {t}",
            m - 1
        )));
    }
    Ok(())
}

fn check_scale(f: u128, k: u128) -> Result<()> {
    let entries = f
        .checked_mul(k)
        .ok_or_else(|| Error::InvalidParams("grid size overflows".into()))?;
    if entries > MAX_ENTRIES {
        return Err(Error::InvalidParams(format!(
            "grid of {entries} entries exceeds the supported scale ({MAX_ENTRIES})"
        )));
    }
    Ok(())
}

fn to_u64(value: u128, what: &str) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::InvalidParams(format!("{what} overflows u64")))
}

fn pow_u128(q: u32, exp: usize) -> Result<u128> {
    lex::checked_pow(q, exp).ok_or_else(|| Error::InvalidParams("power overflows".into()))
}

/// True when `value` falls in the covered window `{c, c-1, .., c-(z-1)}` mod q.
fn covered(value: u32, c: u32, z: u32, q: u32) -> bool {
    (c + q - value) % q < z
}

fn mod_sub(a: u32, b: u32, q: u32) -> u32 {
    (a % q + q - b % q) % q
}

/// Column labels `(I, c)`: size-t index sets in lexicographic order of
/// their sorted tuples, then c in lexicographic order.
fn column_labels(m: usize, t: usize, q: u32) -> Vec<ColLabel> {
    let mut cols = Vec::new();
    for i_set in (0..m).combinations(t) {
        for c in lex::all_vectors(t, q) {
            cols.push(ColLabel {
                i: i_set.clone(),
                c,
            });
        }
    }
    cols
}

/// Occurrence-order counter for one column, keyed by the packed vector.
#[derive(Default)]
struct OrderCounter(HashMap<u64, u32>);

impl OrderCounter {
    fn next(&mut self, v: &[u32], q: u32) -> u32 {
        let key = v.iter().fold(0u64, |acc, &d| acc * q as u64 + d as u64);
        let slot = self.0.entry(key).or_insert(0);
        let order = *slot;
        *slot += 1;
        order
    }
}

/// Builds the (m+1)q-user partition array over the full vector space:
/// rows are all of `[0, q-1]^m`, columns pair a coordinate (or the row
/// sum) with a target value.
pub fn construct_partition_pda(q: u32, m: usize) -> Result<PdaArray> {
    check_common(q, m)?;
    let f = pow_u128(q, m)?;
    let k = (m as u128 + 1) * q as u128;
    check_scale(f, k)?;
    let (f, k) = (f as usize, k as usize);

    let mut cols = Vec::with_capacity(k);
    for coordinate in 0..=m {
        for c in 0..q {
            cols.push(ColLabel {
                i: vec![coordinate],
                c: vec![c],
            });
        }
    }

    let mut entries = Vec::with_capacity(f * k);
    let mut row_labels = Vec::with_capacity(f);
    for row in lex::all_vectors(m, q) {
        for col in &cols {
            let coordinate = col.i[0];
            let c = col.c[0];
            let entry = if coordinate < m {
                if row[coordinate] == c {
                    PdaEntry::Star
                } else {
                    let mut v = row.clone();
                    v[coordinate] = c;
                    v.push(mod_sub(row[coordinate], c + 1, q));
                    PdaEntry::Raw(RawLabel::new(v, 0))
                }
            } else {
                let sum: u32 = row.iter().copied().reduce(|a, b| (a + b) % q).unwrap_or(0);
                if sum == c {
                    PdaEntry::Star
                } else {
                    let mut v = row.clone();
                    v.push(mod_sub(c, sum + 1, q));
                    PdaEntry::Raw(RawLabel::new(v, 0))
                }
            };
            entries.push(entry);
        }
        row_labels.push(RowLabel { f: row, g: vec![] });
    }

    finish_raw(entries, f, k, row_labels, cols)
}

/// Builds the C(m,t) q^t-user array over the full vector space with
/// star rule `f[xi_h] == c_h` for some h.
pub fn construct_hypergraph_pda(q: u32, m: usize, t: usize) -> Result<PdaArray> {
    check_common(q, m)?;
    if t == 0 || t >= m {
        return Err(Error::InvalidParams(format!(
            "t must lie in [1, {}], got {t}",
            m.saturating_sub(1)
        )));
    }
    let f = pow_u128(q, m)?;
    let k = binomial(m as u128, t as u128) * pow_u128(q, t)?;
    check_scale(f, k)?;
    let (f, k) = (f as usize, k as usize);

    let cols = column_labels(m, t, q);
    let mut entries = Vec::with_capacity(f * k);
    let mut row_labels = Vec::with_capacity(f);
    for row in lex::all_vectors(m, q) {
        for col in &cols {
            let star = col.i.iter().zip(&col.c).any(|(&xi, &c)| row[xi] == c);
            let entry = if star {
                PdaEntry::Star
            } else {
                let mut v = row.clone();
                for (&xi, &c) in col.i.iter().zip(&col.c) {
                    v[xi] = c;
                }
                for (&xi, &c) in col.i.iter().zip(&col.c) {
                    v.push(mod_sub(row[xi], c + 1, q));
                }
                PdaEntry::Raw(RawLabel::new(v, 0))
            };
            entries.push(entry);
        }
        row_labels.push(RowLabel { f: row, g: vec![] });
    }

    finish_raw(entries, f, k, row_labels, cols)
}

/// Builds the flexible-memory generalization: rows replicate the full
/// vector space once per g-vector, and the star rule widens to a window
/// of z values per covered coordinate.
pub fn construct_flexible_pda(q: u32, z: u32, m: usize, t: usize) -> Result<PdaArray> {
    check_common(q, m)?;
    check_zt(q, z, m, t)?;
    let r = floor_ratio(q, z);
    let l = pow_u128(r, t)?;
    let f = l * pow_u128(q, m)?;
    let k = binomial(m as u128, t as u128) * pow_u128(q, t)?;
    check_scale(f, k)?;
    let (f, k) = (f as usize, k as usize);

    let cols = column_labels(m, t, q);
    let mut entries = Vec::with_capacity(f * k);
    let mut row_labels = Vec::with_capacity(f);
    for g in lex::all_vectors(t, r) {
        for row in lex::all_vectors(m, q) {
            for col in &cols {
                let star = col
                    .i
                    .iter()
                    .zip(&col.c)
                    .any(|(&xi, &c)| covered(row[xi], c, z, q));
                let entry = if star {
                    PdaEntry::Star
                } else {
                    let mut v = row.clone();
                    for (h, (&xi, &c)) in col.i.iter().zip(&col.c).enumerate() {
                        let shift = (g[h] as u64 * (q - z) as u64 % q as u64) as u32;
                        v[xi] = mod_sub(c, shift, q);
                    }
                    for (&xi, &c) in col.i.iter().zip(&col.c) {
                        v.push(mod_sub(row[xi], c + 1, q));
                    }
                    PdaEntry::Raw(RawLabel::new(v, 0))
                };
                entries.push(entry);
            }
            row_labels.push(RowLabel {
                f: row,
                g: g.clone(),
            });
        }
    }

    finish_raw(entries, f, k, row_labels, cols)
}

/// Validated parameters of the stacked-POA construction, with the
/// g-vector list enumerated lexicographically (all-zeros first).
#[derive(Debug, Clone)]
pub struct Theorem1Params {
    pub q: u32,
    pub z: u32,
    pub m: usize,
    pub t: usize,
    pub r: u32,
    pub block_count: usize,
    pub g_vectors: Vec<Vec<u32>>,
}

impl Theorem1Params {
    pub fn new(q: u32, z: u32, m: usize, t: usize) -> Result<Self> {
        check_common(q, m)?;
        check_zt(q, z, m, t)?;
        let r = floor_ratio(q, z);
        let block_count = pow_u128(r, t)? as usize;
        let g_vectors: Vec<Vec<u32>> = lex::all_vectors(t, r).collect();
        debug_assert_eq!(g_vectors.len(), block_count);
        Ok(Theorem1Params {
            q,
            z,
            m,
            t,
            r,
            block_count,
            g_vectors,
        })
    }

    /// Row sum (mod q) shared by every row of block `j`.
    fn block_row_sum(&self, j: usize) -> u32 {
        let x: u64 = self.g_vectors[j].iter().map(|&g| g as u64).sum();
        (x * (self.q - self.z) as u64 % self.q as u64) as u32
    }
}

/// Builds the stacked-POA array: block j's rows come from the proper
/// orthogonal array whose rows sum to `(sum of g_j)(q-z)` mod q, and a
/// non-star entry records the vector of covered values together with
/// its occurrence order in the column.
pub fn construct_theorem1(q: u32, z: u32, m: usize, t: usize) -> Result<PdaArray> {
    let params = Theorem1Params::new(q, z, m, t)?;
    let f0 = pow_u128(q, m - 1)?;
    let f = f0 * params.block_count as u128;
    let k = binomial(m as u128, t as u128) * pow_u128(q, t)?;
    check_scale(f, k)?;
    let (f, k) = (f as usize, k as usize);

    let cols = column_labels(m, t, q);
    let mut entries = Vec::with_capacity(f * k);
    let mut row_labels = Vec::with_capacity(f);
    let mut counters: Vec<OrderCounter> = (0..k).map(|_| OrderCounter::default()).collect();

    for j in 0..params.block_count {
        let g = &params.g_vectors[j];
        let poa = build_poa(m, q, params.block_row_sum(j))?;
        for row in poa.rows() {
            for (cidx, col) in cols.iter().enumerate() {
                let star = col
                    .i
                    .iter()
                    .zip(&col.c)
                    .any(|(&xi, &c)| covered(row[xi], c, z, q));
                let entry = if star {
                    PdaEntry::Star
                } else {
                    let mut v = row.clone();
                    for (h, (&xi, &c)) in col.i.iter().zip(&col.c).enumerate() {
                        let shift = (g[h] as u64 * (q - z) as u64 % q as u64) as u32;
                        v[xi] = mod_sub(c, shift, q);
                    }
                    let order = counters[cidx].next(&v, q);
                    PdaEntry::Raw(RawLabel::new(v, order))
                };
                entries.push(entry);
            }
            row_labels.push(RowLabel {
                f: row.clone(),
                g: g.clone(),
            });
        }
    }

    finish_raw(entries, f, k, row_labels, cols)
}

/// Applies the column-selection transform to the stacked-POA array.
///
/// Block 0 is kept whole. For every other block, each non-star entry of
/// block 0 is copied to its arithmetic image: the row shifted by
/// `g_h (q-z)` at each covered coordinate and the column shifted the
/// same way. The relabelled blocks keep only the columns whose index
/// set avoids the last coordinate, and all blocks line up side by side,
/// so the result has block 0's row count.
pub fn transform_theorem2(q: u32, z: u32, m: usize, t: usize) -> Result<PdaArray> {
    let params = Theorem1Params::new(q, z, m, t)?;
    let stacked = construct_theorem1(q, z, m, t)?;
    let f0 = (pow_u128(q, m - 1)?) as usize;
    let k = stacked.k();
    let cols = stacked
        .col_labels
        .clone()
        .expect("construction attaches labels");

    // Columns surviving into the appended blocks: I within [0, m-2].
    let kept: Vec<usize> = (0..k)
        .filter(|&c| cols[c].i.iter().all(|&xi| xi + 1 < m))
        .collect();
    let qt = (pow_u128(q, t)?) as usize;
    let k_hat = k + (params.block_count - 1) * kept.len();
    check_scale(f0 as u128, k_hat as u128)?;

    // Relabelled non-star entries of each appended block, indexed
    // (row within block) * k + column.
    let mut relabelled: Vec<Vec<Option<RawLabel>>> =
        vec![vec![None; f0 * k]; params.block_count - 1];

    for src_row in 0..f0 {
        let row_f = &stacked.row_labels.as_ref().unwrap()[src_row].f;
        for (cidx, col) in cols.iter().enumerate() {
            let label = match stacked.entry(src_row, cidx) {
                PdaEntry::Raw(label) => label,
                _ => continue,
            };
            for j in 1..params.block_count {
                let g = &params.g_vectors[j];
                // Target row: shift the covered coordinates of f by g_h(q-z).
                let mut shifted = row_f.clone();
                for (h, &xi) in col.i.iter().enumerate() {
                    let shift = (g[h] as u64 * (q - z) as u64 % q as u64) as u32;
                    shifted[xi] = (shifted[xi] + shift) % q;
                }
                let target_row = lex::rank_of_vector(&shifted[..m - 1], q);
                // Target column: same I, c shifted the same way.
                let mut c_shift = col.c.clone();
                for (h, value) in c_shift.iter_mut().enumerate() {
                    let shift = (g[h] as u64 * (q - z) as u64 % q as u64) as u32;
                    *value = (*value + shift) % q;
                }
                let target_col = (cidx / qt) * qt + lex::rank_of_vector(&c_shift, q);
                if stacked.entry(j * f0 + target_row, target_col).is_star() {
                    return Err(Error::RelabelTargetStar {
                        row: j * f0 + target_row,
                        col: target_col,
                    });
                }
                relabelled[j - 1][target_row * k + target_col] = Some(label.clone());
            }
        }
    }

    let mut entries = Vec::with_capacity(f0 * k_hat);
    for row in 0..f0 {
        for col in 0..k {
            entries.push(stacked.entry(row, col).clone());
        }
        for j in 1..params.block_count {
            for &col in &kept {
                let entry = if stacked.entry(j * f0 + row, col).is_star() {
                    PdaEntry::Star
                } else {
                    let label = relabelled[j - 1][row * k + col].take().ok_or_else(|| {
                        Error::InvalidParams("internal: relabel left an entry uncovered".into())
                    })?;
                    PdaEntry::Raw(label)
                };
                entries.push(entry);
            }
        }
    }

    let row_labels = stacked.row_labels.as_ref().unwrap()[..f0].to_vec();
    let mut col_labels = cols.clone();
    for _ in 1..params.block_count {
        for &col in &kept {
            col_labels.push(cols[col].clone());
        }
    }

    finish_raw(entries, f0, k_hat, row_labels, col_labels)
}

/// Attaches labels and the counted per-column star count.
fn finish_raw(
    entries: Vec<PdaEntry>,
    f: usize,
    k: usize,
    row_labels: Vec<RowLabel>,
    col_labels: Vec<ColLabel>,
) -> Result<PdaArray> {
    let z = (0..f).filter(|&row| entries[row * k].is_star()).count();
    let mut pda = PdaArray::new(entries, f, k, z, 0)?;
    pda.row_labels = Some(row_labels);
    pda.col_labels = Some(col_labels);
    Ok(pda)
}

fn params_from(k: u128, f: u128, z: u128, s: u128) -> Result<SchemeParams> {
    Ok(SchemeParams {
        k: to_u64(k, "K")?,
        f: to_u64(f, "F")?,
        z: to_u64(z, "Z")?,
        s: to_u64(s, "S")?,
        memory_ratio: ratio(z as i128, f as i128),
        rate: ratio(s as i128, f as i128),
    })
}

/// Closed-form parameters of the partition construction.
pub fn partition_params(q: u32, m: usize) -> Result<SchemeParams> {
    check_common(q, m)?;
    let f = pow_u128(q, m)?;
    params_from(
        (m as u128 + 1) * q as u128,
        f,
        pow_u128(q, m - 1)?,
        pow_u128(q, m + 1)? - f,
    )
}

/// Closed-form parameters of the hypergraph construction.
pub fn hypergraph_params(q: u32, m: usize, t: usize) -> Result<SchemeParams> {
    check_common(q, m)?;
    if t == 0 || t >= m {
        return Err(Error::InvalidParams(format!(
            "t must lie in [1, {}]",
            m - 1
        )));
    }
    let f = pow_u128(q, m)?;
    let deleted = pow_u128(q, m - t)? * pow_u128(q - 1, t)?;
    params_from(
        binomial(m as u128, t as u128) * pow_u128(q, t)?,
        f,
        f - deleted,
        f * pow_u128(q - 1, t)?,
    )
}

/// Closed-form parameters of the flexible-memory construction.
pub fn flexible_params(q: u32, z: u32, m: usize, t: usize) -> Result<SchemeParams> {
    check_zt(q, z, m, t)?;
    let l = pow_u128(floor_ratio(q, z), t)?;
    let qm = pow_u128(q, m)?;
    let survivors = pow_u128(q, m - t)? * pow_u128(q - z, t)?;
    params_from(
        binomial(m as u128, t as u128) * pow_u128(q, t)?,
        l * qm,
        l * (qm - survivors),
        qm * pow_u128(q - z, t)?,
    )
}

/// Closed-form parameters of the stacked-POA construction.
pub fn theorem1_params(q: u32, z: u32, m: usize, t: usize) -> Result<SchemeParams> {
    check_zt(q, z, m, t)?;
    let l = pow_u128(floor_ratio(q, z), t)?;
    let f0 = pow_u128(q, m - 1)?;
    let survivors = pow_u128(q, m - 1 - t)? * pow_u128(q - z, t)?;
    params_from(
        binomial(m as u128, t as u128) * pow_u128(q, t)?,
        l * f0,
        l * (f0 - survivors),
        f0 * pow_u128(q - z, t)?,
    )
}

/// Closed-form parameters of the column-selection transform.
pub fn theorem2_params(q: u32, z: u32, m: usize, t: usize) -> Result<SchemeParams> {
    check_zt(q, z, m, t)?;
    let l = pow_u128(floor_ratio(q, z), t)?;
    let f0 = pow_u128(q, m - 1)?;
    let survivors = pow_u128(q, m - 1 - t)? * pow_u128(q - z, t)?;
    let users = (binomial(m as u128 - 1, t as u128) * l + binomial(m as u128, t as u128)
        - binomial(m as u128 - 1, t as u128))
        * pow_u128(q, t)?;
    params_from(users, f0, f0 - survivors, f0 * pow_u128(q - z, t)?)
}
