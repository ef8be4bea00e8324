//! Core data model: the placement delivery array, its labels, and
//! canonical symbol numbering.
//!
//! Constructions emit entries labelled `(v, o(v))`: a vector over
//! `[0, q-1]` plus the occurrence order of that vector in its column.
//! Delivery and verification work on canonical integer symbols, so
//! [`canonicalize`] assigns `0..S-1` to the distinct labels in a fixed
//! order (lexicographic on the vector, then on the occurrence order).
//! Arrays are immutable after construction; every operation here is a
//! pure function.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{ratio, Rational};

/// Raw symbol label `(v, o(v))` attached by a construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RawLabel {
    /// Vector over `[0, q-1]`; its length depends on the construction.
    pub vector: Vec<u32>,
    /// Occurrence order of `vector` in its column, counted from the top
    /// row starting at 0.
    pub order: u32,
}

impl RawLabel {
    pub fn new(vector: Vec<u32>, order: u32) -> Self {
        RawLabel { vector, order }
    }

    /// Compact display used by fixtures and examples: digits of the
    /// vector followed by the occurrence order, e.g. `040`.
    pub fn compact(&self) -> String {
        let mut s = String::new();
        for &d in &self.vector {
            s.push_str(&d.to_string());
        }
        s.push_str(&self.order.to_string());
        s
    }
}

/// One cell of a placement delivery array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PdaEntry {
    /// The cached position `*`.
    Star,
    /// A construction-time label, not yet numbered.
    Raw(RawLabel),
    /// A canonical symbol in `[0, S-1]`.
    Symbol(u32),
}

impl PdaEntry {
    pub fn is_star(&self) -> bool {
        matches!(self, PdaEntry::Star)
    }
}

/// Row label `(f, g)` attached by the constructions; `g` is empty for
/// schemes without a block index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    pub f: Vec<u32>,
    pub g: Vec<u32>,
}

/// Column label `(I, c)`: a sorted set of coordinate indices and the
/// values covered at those coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColLabel {
    pub i: Vec<usize>,
    pub c: Vec<u32>,
}

/// An F x K placement delivery array.
///
/// Rows index packets, columns index users. The grid is stored
/// row-major. `z` and `s` are the declared star count per column and
/// symbol count; the verifier cross-checks them against the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdaArray {
    entries: Vec<PdaEntry>,
    f: usize,
    k: usize,
    z: usize,
    s: usize,
    pub row_labels: Option<Vec<RowLabel>>,
    pub col_labels: Option<Vec<ColLabel>>,
    /// For canonicalized arrays built from raw labels: the label that
    /// became each symbol, indexed by symbol.
    pub symbol_labels: Option<Vec<RawLabel>>,
}

impl PdaArray {
    /// Builds an array from a row-major entry grid.
    pub fn new(entries: Vec<PdaEntry>, f: usize, k: usize, z: usize, s: usize) -> Result<Self> {
        if f == 0 || k == 0 {
            return Err(Error::InvalidParams(
                "array must have at least one row and one column".into(),
            ));
        }
        if entries.len() != f * k {
            return Err(Error::InvalidParams(format!(
                "grid holds {} entries, expected {}x{}",
                entries.len(),
                f,
                k
            )));
        }
        Ok(PdaArray {
            entries,
            f,
            k,
            z,
            s,
            row_labels: None,
            col_labels: None,
            symbol_labels: None,
        })
    }

    /// Number of users (columns).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Subpacketization level (rows).
    pub fn f(&self) -> usize {
        self.f
    }

    /// Declared stars per column.
    pub fn z(&self) -> usize {
        self.z
    }

    /// Declared number of distinct symbols.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn entry(&self, row: usize, col: usize) -> &PdaEntry {
        &self.entries[row * self.k + col]
    }

    pub fn entries(&self) -> &[PdaEntry] {
        &self.entries
    }

    /// True when no entry carries a raw label.
    pub fn is_canonical(&self) -> bool {
        !self.entries.iter().any(|e| matches!(e, PdaEntry::Raw(_)))
    }

    /// Star count of one column.
    pub fn column_stars(&self, col: usize) -> usize {
        (0..self.f)
            .filter(|&r| self.entry(r, col).is_star())
            .count()
    }

    /// Grid equality ignoring labels: dimensions, declared parameters,
    /// and every entry.
    pub fn same_grid(&self, other: &PdaArray) -> bool {
        self.f == other.f
            && self.k == other.k
            && self.z == other.z
            && self.s == other.s
            && self.entries == other.entries
    }
}

/// Assigns canonical integers `0..S-1` to the distinct raw labels of
/// `pda`, ordered lexicographically on `(vector, order)`.
///
/// The star mask is preserved exactly, `S` is recorded on the result,
/// and the label-to-symbol table is kept in `symbol_labels`. Two runs
/// on the same input produce identical grids.
pub fn canonicalize(pda: &PdaArray) -> Result<PdaArray> {
    let mut labels: Vec<&RawLabel> = Vec::new();
    for (idx, entry) in pda.entries.iter().enumerate() {
        match entry {
            PdaEntry::Star => {}
            PdaEntry::Raw(label) => labels.push(label),
            PdaEntry::Symbol(_) => {
                return Err(Error::MissingRawLabel {
                    row: idx / pda.k,
                    col: idx % pda.k,
                })
            }
        }
    }
    labels.sort();
    labels.dedup();
    let index_of = |label: &RawLabel| labels.binary_search(&label).expect("label collected");

    let entries = pda
        .entries
        .iter()
        .map(|entry| match entry {
            PdaEntry::Star => PdaEntry::Star,
            PdaEntry::Raw(label) => PdaEntry::Symbol(index_of(label) as u32),
            PdaEntry::Symbol(_) => unreachable!(),
        })
        .collect();

    let mut out = PdaArray::new(entries, pda.f, pda.k, pda.z, labels.len())?;
    out.row_labels = pda.row_labels.clone();
    out.col_labels = pda.col_labels.clone();
    out.symbol_labels = Some(labels.into_iter().cloned().collect());
    Ok(out)
}

/// Closed-form parameters of a scheme: counts plus exact memory ratio
/// `Z/F` and rate `S/F` (or their coded-placement variants).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeParams {
    pub k: u64,
    pub f: u64,
    pub z: u64,
    pub s: u64,
    #[serde(serialize_with = "crate::ratio::serde_exact")]
    pub memory_ratio: Rational,
    #[serde(serialize_with = "crate::ratio::serde_exact")]
    pub rate: Rational,
}

impl SchemeParams {
    /// Derives the ratios from the counts.
    pub fn from_counts(k: u64, f: u64, z: u64, s: u64) -> Self {
        SchemeParams {
            k,
            f,
            z,
            s,
            memory_ratio: ratio(z as i128, f as i128),
            rate: ratio(s as i128, f as i128),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vector: &[u32], order: u32) -> PdaEntry {
        PdaEntry::Raw(RawLabel::new(vector.to_vec(), order))
    }

    #[test]
    fn canonicalize_two_label_array() {
        // {(040), (030)} each appearing twice -> S = 2, labels {0, 1}.
        let entries = vec![
            raw(&[0, 4], 0),
            PdaEntry::Star,
            PdaEntry::Star,
            raw(&[0, 3], 0),
            raw(&[0, 3], 0),
            raw(&[0, 4], 0),
        ];
        let pda = PdaArray::new(entries, 3, 2, 1, 0).unwrap();
        let canon = canonicalize(&pda).unwrap();
        assert_eq!(canon.s(), 2);
        // (03.) sorts before (04.)
        assert_eq!(*canon.entry(0, 0), PdaEntry::Symbol(1));
        assert_eq!(*canon.entry(1, 1), PdaEntry::Symbol(0));
        assert_eq!(*canon.entry(2, 0), PdaEntry::Symbol(0));
        assert_eq!(
            canon.symbol_labels.as_ref().unwrap()[0],
            RawLabel::new(vec![0, 3], 0)
        );
    }

    #[test]
    fn canonicalize_all_star_grid() {
        let entries = vec![PdaEntry::Star; 6];
        let pda = PdaArray::new(entries, 3, 2, 3, 0).unwrap();
        let canon = canonicalize(&pda).unwrap();
        assert_eq!(canon.s(), 0);
        assert!(canon.entries().iter().all(PdaEntry::is_star));
    }

    #[test]
    fn canonicalize_preserves_star_mask() {
        let entries = vec![
            PdaEntry::Star,
            raw(&[1, 0], 0),
            raw(&[1, 0], 1),
            PdaEntry::Star,
        ];
        let pda = PdaArray::new(entries, 2, 2, 1, 0).unwrap();
        let canon = canonicalize(&pda).unwrap();
        for (a, b) in pda.entries().iter().zip(canon.entries()) {
            assert_eq!(a.is_star(), b.is_star());
        }
    }

    #[test]
    fn canonicalize_rejects_integer_entries() {
        let entries = vec![PdaEntry::Symbol(0), PdaEntry::Star];
        let pda = PdaArray::new(entries, 1, 2, 0, 1).unwrap();
        assert!(matches!(
            canonicalize(&pda),
            Err(Error::MissingRawLabel { row: 0, col: 0 })
        ));
    }

    #[test]
    fn canonicalize_is_deterministic() {
        let entries = vec![
            raw(&[2, 1], 0),
            raw(&[0, 4], 1),
            raw(&[0, 4], 0),
            raw(&[2, 1], 0),
        ];
        let pda = PdaArray::new(entries, 2, 2, 0, 0).unwrap();
        let a = canonicalize(&pda).unwrap();
        let b = canonicalize(&pda).unwrap();
        assert_eq!(a, b);
        // ordering: (04,0) < (04,1) < (21,0)
        assert_eq!(*a.entry(1, 0), PdaEntry::Symbol(0));
        assert_eq!(*a.entry(0, 1), PdaEntry::Symbol(1));
        assert_eq!(*a.entry(0, 0), PdaEntry::Symbol(2));
    }

    #[test]
    fn scheme_params_ratios() {
        let p = SchemeParams::from_counts(4, 4, 2, 4);
        assert_eq!(p.memory_ratio, ratio(1, 2));
        assert_eq!(p.rate, ratio(1, 1));
    }
}
