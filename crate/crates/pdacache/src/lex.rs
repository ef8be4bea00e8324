//! Base-q vector enumeration shared by the array constructions.

/// The vector of `len` base-`q` digits of `rank`, most significant first.
pub(crate) fn vector_of_rank(rank: usize, len: usize, q: u32) -> Vec<u32> {
    let mut v = vec![0u32; len];
    let mut rest = rank;
    for slot in v.iter_mut().rev() {
        *slot = (rest % q as usize) as u32;
        rest /= q as usize;
    }
    debug_assert_eq!(rest, 0);
    v
}

/// Lexicographic rank of `v` among all base-`q` vectors of its length.
pub(crate) fn rank_of_vector(v: &[u32], q: u32) -> usize {
    v.iter()
        .fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// `q^exp` with overflow checking.
pub(crate) fn checked_pow(q: u32, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

/// All base-`q` vectors of length `len` in ascending lexicographic order.
pub(crate) fn all_vectors(len: usize, q: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = checked_pow(q, len).expect("vector space too large") as usize;
    (0..total).map(move |rank| vector_of_rank(rank, len, q))
}
