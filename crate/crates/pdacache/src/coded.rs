//! Coded placement: strip useless stars and wrap packets in a
//! systematic MDS erasure code so the lost cache positions can be
//! reconstructed from any sufficient subset.
//!
//! The closed-form evaluators for the two coded schemes live here too:
//! both divide out the useless stars of the underlying array, shrinking
//! the subpacketization and the memory ratio while keeping every
//! broadcast's coding gain.

use serde::Serialize;

use crate::construct::floor_ratio;
use crate::error::{Error, Result};
use crate::gf256;
use crate::lex;
use crate::pda::{PdaArray, SchemeParams};
use crate::ratio::ratio;
use crate::verify::{find_useless_stars, UselessStarReport};
use num_integer::binomial;

/// Largest code length: evaluation points are the field elements
/// 0..n-1, and one point is reserved.
pub const MAX_CODE_LENGTH: usize = 255;

/// A systematic [n, k] MDS code over GF(2^8).
///
/// Symbols 0..k-1 are the data; symbols k..n-1 are parity rows of a
/// Vandermonde-derived matrix, column-scaled so that the first parity
/// row is the plain field sum of the data.
#[derive(Debug, Clone, Serialize)]
pub struct MdsSpec {
    pub n: usize,
    pub k: usize,
    parity: Vec<Vec<u8>>,
}

fn invert_matrix(mut m: Vec<Vec<u8>>) -> Option<Vec<Vec<u8>>> {
    let n = m.len();
    let mut inv: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = gf256::inv(m[col][col])?;
        for j in 0..n {
            m[col][j] = gf256::mul(m[col][j], scale);
            inv[col][j] = gf256::mul(inv[col][j], scale);
        }
        for row in 0..n {
            if row != col && m[row][col] != 0 {
                let factor = m[row][col];
                for j in 0..n {
                    m[row][j] = gf256::add(m[row][j], gf256::mul(factor, m[col][j]));
                    inv[row][j] = gf256::add(inv[row][j], gf256::mul(factor, inv[col][j]));
                }
            }
        }
    }
    Some(inv)
}

impl MdsSpec {
    /// Derives the generator for an [n, k] code.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!(
                "code dimension {k} out of range [1, {n}]"
            )));
        }
        if n > MAX_CODE_LENGTH {
            return Err(Error::MdsTooLong {
                n,
                max: MAX_CODE_LENGTH,
            });
        }
        if n == k {
            return Ok(MdsSpec {
                n,
                k,
                parity: Vec::new(),
            });
        }
        // Vandermonde rows at points 0..n-1, systematized by the inverse
        // of the top k x k block. Any k rows of the result stay
        // invertible because row scaling and the shared right factor
        // preserve that property of the Vandermonde matrix.
        let vrow = |point: usize| -> Vec<u8> {
            (0..k).map(|j| gf256::pow(point as u8, j as u32)).collect()
        };
        let top: Vec<Vec<u8>> = (0..k).map(vrow).collect();
        let top_inv = invert_matrix(top).expect("distinct points invert");
        let systematized = |point: usize| -> Vec<u8> {
            let row = vrow(point);
            (0..k)
                .map(|j| {
                    let mut acc = 0u8;
                    for (idx, &value) in row.iter().enumerate() {
                        acc = gf256::add(acc, gf256::mul(value, top_inv[idx][j]));
                    }
                    acc
                })
                .collect()
        };
        let reference = systematized(k);
        debug_assert!(reference.iter().all(|&v| v != 0));
        let mut parity = Vec::with_capacity(n - k);
        for point in k..n {
            let row = systematized(point);
            parity.push(
                row.iter()
                    .zip(&reference)
                    .map(|(&value, &scale)| gf256::div(value, scale).expect("nonzero"))
                    .collect(),
            );
        }
        Ok(MdsSpec { n, k, parity })
    }

    pub fn parity_rows(&self) -> &[Vec<u8>] {
        &self.parity
    }

    /// The full k x k system for a set of symbol indices: identity rows
    /// for data symbols, parity rows otherwise.
    fn rows_for(&self, indices: &[usize]) -> Vec<Vec<u8>> {
        indices
            .iter()
            .map(|&i| {
                if i < self.k {
                    (0..self.k).map(|j| u8::from(i == j)).collect()
                } else {
                    self.parity[i - self.k].clone()
                }
            })
            .collect()
    }
}

/// Systematic encode: the first k output symbols are the data, the rest
/// are parity combinations, byte by byte.
pub fn mds_encode(spec: &MdsSpec, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    if data.len() != spec.k {
        return Err(Error::MdsShape(format!(
            "expected {} data packets, got {}",
            spec.k,
            data.len()
        )));
    }
    let len = data.first().map(Vec::len).unwrap_or(0);
    if data.iter().any(|p| p.len() != len) {
        return Err(Error::MdsShape("data packets differ in length".into()));
    }
    let mut out: Vec<Vec<u8>> = data.to_vec();
    for row in &spec.parity {
        let mut sym = vec![0u8; len];
        for (coeff, packet) in row.iter().zip(data) {
            if *coeff == 0 {
                continue;
            }
            for (acc, &byte) in sym.iter_mut().zip(packet) {
                *acc = gf256::add(*acc, gf256::mul(*coeff, byte));
            }
        }
        out.push(sym);
    }
    Ok(out)
}

/// Recovers the k data packets from any k of the coded symbols.
///
/// The first k distinct indices provided are used; any two choices of k
/// symbols give the same result.
pub fn mds_decode(spec: &MdsSpec, symbols: &[(usize, Vec<u8>)]) -> Result<Vec<Vec<u8>>> {
    let mut seen = vec![false; spec.n];
    for &(index, _) in symbols {
        if index >= spec.n {
            return Err(Error::MdsShape(format!(
                "symbol index {index} out of range [0, {})",
                spec.n
            )));
        }
        if seen[index] {
            return Err(Error::MdsDuplicateIndex { index });
        }
        seen[index] = true;
    }
    if symbols.len() < spec.k {
        return Err(Error::MdsInsufficientSymbols {
            have: symbols.len(),
            need: spec.k,
        });
    }
    let chosen = &symbols[..spec.k];
    let len = chosen.first().map(|(_, p)| p.len()).unwrap_or(0);
    if chosen.iter().any(|(_, p)| p.len() != len) {
        return Err(Error::MdsShape("coded packets differ in length".into()));
    }
    let indices: Vec<usize> = chosen.iter().map(|&(i, _)| i).collect();
    let system = spec.rows_for(&indices);
    let inverse =
        invert_matrix(system).ok_or_else(|| Error::MdsShape("singular decode system".into()))?;
    let mut data = vec![vec![0u8; len]; spec.k];
    for (j, packet) in data.iter_mut().enumerate() {
        for (r, (_, sym)) in chosen.iter().enumerate() {
            let coeff = inverse[j][r];
            if coeff == 0 {
                continue;
            }
            for (acc, &byte) in packet.iter_mut().zip(sym) {
                *acc = gf256::add(*acc, gf256::mul(coeff, byte));
            }
        }
    }
    Ok(data)
}

/// A verified array with its useless stars stripped and the erasure
/// code that replaces them.
///
/// Row j of the array corresponds to coded symbol j; the mapping is the
/// identity.
#[derive(Debug, Clone)]
pub struct CodedPda {
    pub base: PdaArray,
    pub useless: UselessStarReport,
    pub z_prime: usize,
    pub spec: MdsSpec,
    useless_mask: Vec<bool>,
}

impl CodedPda {
    /// MDS symbol index of a row (identity).
    pub fn row_symbol(&self, row: usize) -> usize {
        row
    }

    /// A star the user actually caches: present and not useless.
    pub fn is_useful_star(&self, row: usize, col: usize) -> bool {
        self.base.entry(row, col).is_star() && !self.useless_mask[row * self.base.k() + col]
    }

    pub fn is_useless_star(&self, row: usize, col: usize) -> bool {
        self.useless_mask[row * self.base.k() + col]
    }

    /// Division count after stripping: F - Z'.
    pub fn division(&self) -> usize {
        self.spec.k
    }

    /// Scheme parameters after stripping: ratio (Z-Z')/(F-Z') and rate
    /// S/(F-Z').
    pub fn params(&self) -> SchemeParams {
        let f = (self.base.f() - self.z_prime) as u64;
        let z = (self.base.z() - self.z_prime) as u64;
        let s = self.base.s() as u64;
        SchemeParams {
            k: self.base.k() as u64,
            f,
            z,
            s,
            memory_ratio: ratio(z as i128, f as i128),
            rate: ratio(s as i128, f as i128),
        }
    }
}

/// Builds the coded scheme from a verified array: detects the useless
/// stars, demands a uniform per-column count, and attaches the
/// [F, F-Z'] code. The symbol grid itself is untouched.
pub fn strip_useless(pda: PdaArray) -> Result<CodedPda> {
    if !pda.is_canonical() {
        return Err(Error::RawLabels);
    }
    let useless = find_useless_stars(&pda)?;
    let z_prime = useless.uniform_count()?;
    if z_prime > pda.z() {
        return Err(Error::InvalidParams(
            "useless stars exceed the declared star count".into(),
        ));
    }
    let spec = MdsSpec::new(pda.f(), pda.f() - z_prime)?;
    let mut useless_mask = vec![false; pda.f() * pda.k()];
    for &(row, col) in &useless.positions {
        useless_mask[row * pda.k() + col] = true;
    }
    Ok(CodedPda {
        base: pda,
        useless,
        z_prime,
        spec,
        useless_mask,
    })
}

/// Minimal z whose floor class equals r: min { z : floor((q-1)/(q-z)) = r }.
pub fn zr_star(q: u32, r: u32) -> Result<u32> {
    if q < 2 || r == 0 {
        return Err(Error::InvalidParams(format!(
            "need q >= 2 and r >= 1, got q={q}, r={r}"
        )));
    }
    (1..q)
        .find(|&z| floor_ratio(q, z) == r)
        .ok_or(Error::EmptyFloorClass { q, r, max_z: q - 1 })
}

/// Parameters of a coded scheme derived from a stacked or transformed
/// array: the floor class, its minimal member, and the resulting
/// counts.
#[derive(Debug, Clone)]
pub struct Theorem34Params {
    pub q: u32,
    pub z: u32,
    pub m: usize,
    pub t: usize,
    pub r: u32,
    pub z_star: u32,
    pub params: SchemeParams,
}

fn check_coded_ranges(q: u32, z: u32, m: usize, t: usize) -> Result<()> {
    if q < 2 || z == 0 || z >= q || m < 2 || t == 0 || t >= m {
        return Err(Error::InvalidParams(format!(
            "need q >= 2, z in [1, q-1], m >= 2, t in [1, m-1]; got q={q}, z={z}, m={m}, t={t}"
        )));
    }
    Ok(())
}

fn pow_u128(base: u32, exp: usize) -> Result<u128> {
    lex::checked_pow(base, exp).ok_or_else(|| Error::InvalidParams("power overflows".into()))
}

/// Useless stars per column of the stacked construction:
/// r^t q^(m-1-t) [ (q-z*)^t - (q-z)^t ].
pub fn useless_per_column(q: u32, z: u32, m: usize, t: usize) -> Result<u128> {
    check_coded_ranges(q, z, m, t)?;
    let r = floor_ratio(q, z);
    let z_star = zr_star(q, r)?;
    Ok(
        pow_u128(r, t)?
            * pow_u128(q, m - 1 - t)?
            * (pow_u128(q - z_star, t)? - pow_u128(q - z, t)?),
    )
}

fn to_u64(value: u128, what: &str) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::InvalidParams(format!("{what} overflows u64")))
}

fn coded_params(
    q: u32,
    z: u32,
    m: usize,
    t: usize,
    users: u128,
    block_count: u128,
) -> Result<Theorem34Params> {
    let r = floor_ratio(q, z);
    let z_star = zr_star(q, r)?;
    let f0 = pow_u128(q, m - 1)?;
    let survivors = pow_u128(q, m - 1 - t)? * pow_u128(q - z, t)?;
    let f_old = block_count * f0;
    let z_old = block_count * (f0 - survivors);
    let z_prime =
        block_count * pow_u128(q, m - 1 - t)? * (pow_u128(q - z_star, t)? - pow_u128(q - z, t)?);
    let s = f0 * pow_u128(q - z, t)?;
    let f_new = f_old - z_prime;
    let z_new = z_old - z_prime;
    Ok(Theorem34Params {
        q,
        z,
        m,
        t,
        r,
        z_star,
        params: SchemeParams {
            k: to_u64(users, "K")?,
            f: to_u64(f_new, "F")?,
            z: to_u64(z_new, "Z")?,
            s: to_u64(s, "S")?,
            memory_ratio: ratio(z_new as i128, f_new as i128),
            rate: ratio(s as i128, f_new as i128),
        },
    })
}

/// Closed form for the coded scheme built on the stacked construction.
pub fn theorem3_params(q: u32, z: u32, m: usize, t: usize) -> Result<Theorem34Params> {
    check_coded_ranges(q, z, m, t)?;
    let r = floor_ratio(q, z);
    let block_count = pow_u128(r, t)?;
    let users = binomial(m as u128, t as u128) * pow_u128(q, t)?;
    coded_params(q, z, m, t, users, block_count)
}

/// Closed form for the coded scheme built on the transformed array.
pub fn theorem4_params(q: u32, z: u32, m: usize, t: usize) -> Result<Theorem34Params> {
    check_coded_ranges(q, z, m, t)?;
    let r = floor_ratio(q, z);
    let l = pow_u128(r, t)?;
    let users = (binomial(m as u128 - 1, t as u128) * l + binomial(m as u128, t as u128)
        - binomial(m as u128 - 1, t as u128))
        * pow_u128(q, t)?;
    coded_params(q, z, m, t, users, 1)
}
