//! End-to-end simulation of the placement and delivery protocol.
//!
//! Placement splits every file into packets and fills each user's cache
//! from the stars of its column (useful stars only, after coded
//! placement). Delivery sends one XOR broadcast per symbol, in symbol
//! order. Decoding peels each broadcast with cached packets, applies
//! erasure decoding in the coded case, and byte-compares the result
//! with the demanded file. A run is deterministic given its seed.

use std::collections::BTreeMap;
use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coded::{mds_decode, mds_encode, CodedPda};
use crate::error::{Error, Result};
use crate::pda::{PdaArray, PdaEntry};
use crate::ratio::{ratio, Rational};

/// N equal-length files, optionally seeded pseudo-random.
#[derive(Debug, Clone)]
pub struct FileLibrary {
    files: Vec<Vec<u8>>,
    file_size: usize,
    pub seed: Option<u64>,
}

impl FileLibrary {
    /// Deterministic pseudo-random library.
    pub fn synthetic(num_files: usize, file_size: usize, seed: u64) -> Result<Self> {
        if num_files == 0 || file_size == 0 {
            return Err(Error::InvalidParams(
                "library needs at least one file of positive size".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let files = (0..num_files)
            .map(|_| {
                let mut buf = vec![0u8; file_size];
                rng.fill_bytes(&mut buf);
                buf
            })
            .collect();
        Ok(FileLibrary {
            files,
            file_size,
            seed: Some(seed),
        })
    }

    pub fn from_files(files: Vec<Vec<u8>>) -> Result<Self> {
        let file_size = files.first().map(Vec::len).unwrap_or(0);
        if files.is_empty() || file_size == 0 {
            return Err(Error::InvalidParams(
                "library needs at least one file of positive size".into(),
            ));
        }
        if files.iter().any(|f| f.len() != file_size) {
            return Err(Error::InvalidParams("files differ in length".into()));
        }
        Ok(FileLibrary {
            files,
            file_size,
            seed: None,
        })
    }

    pub fn num_files(&self) -> usize {
        self.files.len()
    }

    pub fn file_size(&self) -> usize {
        self.file_size
    }

    pub fn file(&self, n: usize) -> &[u8] {
        &self.files[n]
    }
}

/// The array driving a run, with or without coded placement.
#[derive(Debug, Clone)]
pub enum CachingScheme {
    Uncoded(PdaArray),
    Coded(CodedPda),
}

impl CachingScheme {
    pub fn pda(&self) -> &PdaArray {
        match self {
            CachingScheme::Uncoded(pda) => pda,
            CachingScheme::Coded(coded) => &coded.base,
        }
    }

    /// Packets per file: F uncoded, F - Z' coded.
    pub fn division(&self) -> usize {
        match self {
            CachingScheme::Uncoded(pda) => pda.f(),
            CachingScheme::Coded(coded) => coded.division(),
        }
    }

    /// Whether user `col` caches row `row`.
    fn caches_position(&self, row: usize, col: usize) -> bool {
        match self {
            CachingScheme::Uncoded(pda) => pda.entry(row, col).is_star(),
            CachingScheme::Coded(coded) => coded.is_useful_star(row, col),
        }
    }

    /// Closed-form rate: S/F, or S/(F-Z') after stripping.
    pub fn expected_rate(&self) -> Rational {
        ratio(self.pda().s() as i128, self.division() as i128)
    }

    /// Closed-form memory ratio: Z/F, or (Z-Z')/(F-Z').
    pub fn expected_ratio(&self) -> Rational {
        match self {
            CachingScheme::Uncoded(pda) => ratio(pda.z() as i128, pda.f() as i128),
            CachingScheme::Coded(coded) => {
                let p = coded.params();
                p.memory_ratio
            }
        }
    }

    /// The packet (or coded symbol) grid of one file: `division` data
    /// packets, expanded to F coded symbols under coded placement.
    fn symbols_of_file(&self, library: &FileLibrary, n: usize) -> Result<Vec<Vec<u8>>> {
        let packet_len = library.file_size() / self.division();
        let data: Vec<Vec<u8>> = library
            .file(n)
            .chunks(packet_len)
            .map(<[u8]>::to_vec)
            .collect();
        match self {
            CachingScheme::Uncoded(_) => Ok(data),
            CachingScheme::Coded(coded) => mds_encode(&coded.spec, &data),
        }
    }

    fn check_divisible(&self, library: &FileLibrary) -> Result<()> {
        let division = self.division();
        if !library.file_size().is_multiple_of(division) {
            return Err(Error::SizeNotDivisible {
                file_size: library.file_size(),
                division,
            });
        }
        Ok(())
    }
}

/// Every user's cached packets: (file, row) to payload.
#[derive(Debug, Clone)]
pub struct CacheState {
    per_user: Vec<BTreeMap<(usize, usize), Vec<u8>>>,
}

impl CacheState {
    pub fn users(&self) -> usize {
        self.per_user.len()
    }

    pub fn cached(&self, user: usize, file: usize, row: usize) -> Option<&Vec<u8>> {
        self.per_user[user].get(&(file, row))
    }

    /// Total bytes held by one user.
    pub fn user_bytes(&self, user: usize) -> usize {
        self.per_user[user].values().map(Vec::len).sum()
    }
}

/// Fills every cache from the stars of its column, across all files.
pub fn place(scheme: &CachingScheme, library: &FileLibrary) -> Result<CacheState> {
    scheme.check_divisible(library)?;
    let pda = scheme.pda();
    let symbols: Vec<Vec<Vec<u8>>> = (0..library.num_files())
        .map(|n| scheme.symbols_of_file(library, n))
        .collect::<Result<_>>()?;
    let mut per_user = vec![BTreeMap::new(); pda.k()];
    for (col, cache) in per_user.iter_mut().enumerate() {
        for row in 0..pda.f() {
            if scheme.caches_position(row, col) {
                for (n, file_symbols) in symbols.iter().enumerate() {
                    cache.insert((n, row), file_symbols[row].clone());
                }
            }
        }
    }
    Ok(CacheState { per_user })
}

/// One time slot: the XOR of the demanded packets of every entry
/// holding this symbol.
#[derive(Debug, Clone)]
pub struct Broadcast {
    pub symbol: u32,
    /// (row, user) pairs served, in user order.
    pub participants: Vec<(usize, usize)>,
    pub payload: Vec<u8>,
}

/// The full delivery: one broadcast per symbol, in symbol order.
#[derive(Debug, Clone)]
pub struct BroadcastPlan {
    pub broadcasts: Vec<Broadcast>,
    pub demand: Vec<usize>,
}

impl BroadcastPlan {
    pub fn bytes_sent(&self) -> u64 {
        self.broadcasts.iter().map(|b| b.payload.len() as u64).sum()
    }
}

/// Builds the broadcast plan for a demand vector. Demands may repeat.
pub fn deliver(
    scheme: &CachingScheme,
    caches: &CacheState,
    library: &FileLibrary,
    demand: &[usize],
) -> Result<BroadcastPlan> {
    let pda = scheme.pda();
    if demand.len() != pda.k() {
        return Err(Error::InvalidParams(format!(
            "demand vector has {} entries, expected {}",
            demand.len(),
            pda.k()
        )));
    }
    for (user, &d) in demand.iter().enumerate() {
        if d >= library.num_files() {
            return Err(Error::DemandOutOfRange {
                user,
                demand: d,
                num_files: library.num_files(),
            });
        }
    }
    debug_assert_eq!(caches.users(), pda.k());
    scheme.check_divisible(library)?;

    let packet_len = library.file_size() / scheme.division();
    let mut demanded_symbols: HashMap<usize, Vec<Vec<u8>>> = HashMap::new();
    for &d in demand {
        if let std::collections::hash_map::Entry::Vacant(e) = demanded_symbols.entry(d) {
            e.insert(scheme.symbols_of_file(library, d)?);
        }
    }

    let mut participants: Vec<Vec<(usize, usize)>> = vec![Vec::new(); pda.s()];
    for row in 0..pda.f() {
        for col in 0..pda.k() {
            if let PdaEntry::Symbol(sym) = pda.entry(row, col) {
                participants[*sym as usize].push((row, col));
            }
        }
    }

    let mut broadcasts = Vec::with_capacity(pda.s());
    for (sym, mut served) in participants.into_iter().enumerate() {
        served.sort_by_key(|&(_, col)| col);
        let mut payload = vec![0u8; packet_len];
        for &(row, col) in &served {
            let packet = &demanded_symbols[&demand[col]][row];
            for (acc, &byte) in payload.iter_mut().zip(packet) {
                *acc ^= byte;
            }
        }
        broadcasts.push(Broadcast {
            symbol: sym as u32,
            participants: served,
            payload,
        });
    }
    Ok(BroadcastPlan {
        broadcasts,
        demand: demand.to_vec(),
    })
}

/// Outcome of one simulated run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub demand: Vec<usize>,
    pub seed: Option<u64>,
    pub per_user_success: Vec<bool>,
    pub broadcasts: usize,
    pub bytes_sent: u64,
    pub file_size: u64,
    #[serde(serialize_with = "crate::ratio::serde_exact")]
    pub measured_rate: Rational,
    #[serde(serialize_with = "crate::ratio::serde_exact")]
    pub expected_rate: Rational,
}

impl RunReport {
    pub fn all_succeeded(&self) -> bool {
        self.per_user_success.iter().all(|&ok| ok)
    }
}

/// Reconstructs every user's demanded file from its cache and the
/// broadcasts, then byte-compares against the library.
///
/// Peeling only ever subtracts packets the user holds; a missing packet
/// marks the user as failed rather than panicking.
pub fn decode_all(
    scheme: &CachingScheme,
    caches: &CacheState,
    plan: &BroadcastPlan,
    library: &FileLibrary,
) -> RunReport {
    let demand = &plan.demand;
    let per_user_success = demand
        .iter()
        .enumerate()
        .map(|(user, &wanted)| decode_user(scheme, caches, plan, library, user, wanted))
        .collect();

    let bytes_sent = plan.bytes_sent();
    RunReport {
        demand: demand.clone(),
        seed: library.seed,
        per_user_success,
        broadcasts: plan.broadcasts.len(),
        bytes_sent,
        file_size: library.file_size() as u64,
        measured_rate: ratio(bytes_sent as i128, library.file_size() as i128),
        expected_rate: scheme.expected_rate(),
    }
}

/// Peels the broadcast carrying `(row, user)` down to that user's
/// demanded packet. Returns None when a needed cached packet is absent.
fn peel(
    plan: &BroadcastPlan,
    caches: &CacheState,
    symbol: u32,
    row: usize,
    user: usize,
) -> Option<Vec<u8>> {
    let broadcast = &plan.broadcasts[symbol as usize];
    debug_assert_eq!(broadcast.symbol, symbol);
    let mut payload = broadcast.payload.clone();
    for &(other_row, other_user) in &broadcast.participants {
        if (other_row, other_user) == (row, user) {
            continue;
        }
        // The cross position is a useful star, so the packet must be
        // cached; a miss means the array violated its contract.
        let cached = caches.cached(user, plan.demand[other_user], other_row)?;
        for (acc, &byte) in payload.iter_mut().zip(cached) {
            *acc ^= byte;
        }
    }
    Some(payload)
}

fn decode_user(
    scheme: &CachingScheme,
    caches: &CacheState,
    plan: &BroadcastPlan,
    library: &FileLibrary,
    user: usize,
    wanted: usize,
) -> bool {
    let pda = scheme.pda();
    match scheme {
        CachingScheme::Uncoded(_) => {
            let mut assembled = Vec::with_capacity(library.file_size());
            for row in 0..pda.f() {
                let packet = match pda.entry(row, user) {
                    PdaEntry::Star => caches.cached(user, wanted, row).cloned(),
                    PdaEntry::Symbol(sym) => peel(plan, caches, *sym, row, user),
                    PdaEntry::Raw(_) => None,
                };
                match packet {
                    Some(bytes) => assembled.extend_from_slice(&bytes),
                    None => return false,
                }
            }
            assembled == library.file(wanted)
        }
        CachingScheme::Coded(coded) => {
            let mut collected: Vec<(usize, Vec<u8>)> = Vec::new();
            for row in 0..pda.f() {
                if coded.is_useless_star(row, user) {
                    continue;
                }
                let symbol = match pda.entry(row, user) {
                    PdaEntry::Star => caches.cached(user, wanted, row).cloned(),
                    PdaEntry::Symbol(sym) => peel(plan, caches, *sym, row, user),
                    PdaEntry::Raw(_) => None,
                };
                match symbol {
                    Some(bytes) => collected.push((coded.row_symbol(row), bytes)),
                    None => return false,
                }
            }
            let Ok(data) = mds_decode(&coded.spec, &collected) else {
                return false;
            };
            let assembled: Vec<u8> = data.concat();
            assembled == library.file(wanted)
        }
    }
}

/// How the demand vector of a run is chosen.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub num_files: usize,
    pub file_size: usize,
    pub seed: u64,
    /// Explicit demand; sampled from the seed when absent.
    pub demand: Option<Vec<usize>>,
}

/// Places, delivers, and decodes one full run. Deterministic given the
/// seed: the library bytes and (when not explicit) the demand both
/// derive from it.
pub fn run_end_to_end(scheme: &CachingScheme, config: &RunConfig) -> Result<RunReport> {
    let library = FileLibrary::synthetic(config.num_files, config.file_size, config.seed)?;
    let demand = match &config.demand {
        Some(d) => d.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
            (0..scheme.pda().k())
                .map(|_| rng.gen_range(0..config.num_files))
                .collect()
        }
    };
    let caches = place(scheme, &library)?;
    let plan = deliver(scheme, &caches, &library, &demand)?;
    Ok(decode_all(scheme, &caches, &plan, &library))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coded::strip_useless;
    use crate::construct::construct_theorem1;
    use crate::format::read_pda;
    use crate::pda::canonicalize;
    use crate::verify::verify_pda;

    const EQ1: &str = "pda 1\n4 4 2 4\n0 * 2 *\n* 0 * 2\n* 1 * 3\n1 * 3 *\n";

    fn eq1_scheme() -> CachingScheme {
        CachingScheme::Uncoded(read_pda(EQ1).unwrap())
    }

    #[test]
    fn placement_caches_star_rows() {
        let scheme = eq1_scheme();
        let library = FileLibrary::synthetic(4, 16, 0).unwrap();
        let caches = place(&scheme, &library).unwrap();
        // User 0's column has stars at rows 1 and 2, so it caches
        // packets 1 and 2 of every file.
        for n in 0..4 {
            assert!(caches.cached(0, n, 1).is_some());
            assert!(caches.cached(0, n, 2).is_some());
            assert!(caches.cached(0, n, 0).is_none());
            assert!(caches.cached(0, n, 3).is_none());
        }
        // Cache holds N * Z packets of file_size / F bytes each.
        assert_eq!(caches.user_bytes(0), 4 * 2 * 4);
    }

    #[test]
    fn delivery_on_the_worked_grid() {
        let scheme = eq1_scheme();
        let library = FileLibrary::synthetic(4, 16, 7).unwrap();
        let caches = place(&scheme, &library).unwrap();
        let plan = deliver(&scheme, &caches, &library, &[0, 1, 2, 3]).unwrap();
        assert_eq!(plan.broadcasts.len(), 4);
        // Symbol 0 serves users 0 and 1: W_{0,0} xor W_{1,1}.
        assert_eq!(plan.broadcasts[0].participants, vec![(0, 0), (1, 1)]);
        let expect: Vec<u8> = library.file(0)[0..4]
            .iter()
            .zip(&library.file(1)[4..8])
            .map(|(a, b)| a ^ b)
            .collect();
        assert_eq!(plan.broadcasts[0].payload, expect);
        // Symbol 1 serves (3,0) and (2,1): W_{0,3} xor W_{1,2}.
        assert_eq!(plan.broadcasts[1].participants, vec![(3, 0), (2, 1)]);
        // Symbol 2: (0,2), (1,3); symbol 3: (2,3) and (3,2).
        assert_eq!(plan.broadcasts[2].participants, vec![(0, 2), (1, 3)]);
        assert_eq!(plan.broadcasts[3].participants, vec![(3, 2), (2, 3)]);

        let report = decode_all(&scheme, &caches, &plan, &library);
        assert!(report.all_succeeded());
        assert_eq!(report.measured_rate, ratio(1, 1));
    }

    #[test]
    fn exhaustive_demands_on_the_worked_grid() {
        let scheme = eq1_scheme();
        let library = FileLibrary::synthetic(2, 8, 3).unwrap();
        let caches = place(&scheme, &library).unwrap();
        for code in 0..(2usize.pow(4)) {
            let demand: Vec<usize> = (0..4).map(|u| (code >> u) & 1).collect();
            let plan = deliver(&scheme, &caches, &library, &demand).unwrap();
            let report = decode_all(&scheme, &caches, &plan, &library);
            assert!(report.all_succeeded(), "demand {demand:?}");
            assert_eq!(report.measured_rate, ratio(1, 1));
        }
    }

    #[test]
    fn coded_run_matches_the_worked_coded_example() {
        let pda = canonicalize(&construct_theorem1(5, 2, 2, 1).unwrap()).unwrap();
        assert!(verify_pda(&pda).unwrap().pass());
        let coded = strip_useless(pda).unwrap();
        let scheme = CachingScheme::Coded(coded);
        let library = FileLibrary::synthetic(10, 40, 11).unwrap();
        let caches = place(&scheme, &library).unwrap();
        // Memory ratio (Z - Z') / (F - Z') = 1/4.
        assert_eq!(caches.user_bytes(0), 10 * 40 / 4);

        // User 4 caches only the parity symbol (row 4); user 5 only the
        // first data symbol.
        for n in 0..10 {
            assert!(caches.cached(4, n, 4).is_some());
            assert!(caches.cached(5, n, 0).is_some());
            for row in 0..4 {
                assert!(caches.cached(4, n, row).is_none());
            }
        }

        let demand: Vec<usize> = (0..10).collect();
        let plan = deliver(&scheme, &caches, &library, &demand).unwrap();
        assert_eq!(plan.broadcasts.len(), 15);
        let report = decode_all(&scheme, &caches, &plan, &library);
        assert!(report.all_succeeded());
        assert_eq!(report.measured_rate, ratio(15, 4));

        // The broadcast for the symbol labelled (040) serves users 0
        // and 9: W_{0,1} xor W_{9,0}.
        let sym_040 = 2u32; // labels sort (020) < (030) < (040) < ...
        let b = &plan.broadcasts[sym_040 as usize];
        assert_eq!(b.participants, vec![(1, 0), (0, 9)]);
    }

    #[test]
    fn repeated_demands_still_decode() {
        let pda = canonicalize(&construct_theorem1(5, 3, 2, 1).unwrap()).unwrap();
        let scheme = CachingScheme::Uncoded(pda);
        let report = run_end_to_end(
            &scheme,
            &RunConfig {
                num_files: 3,
                file_size: 30,
                seed: 5,
                demand: Some(vec![0; 10]),
            },
        )
        .unwrap();
        assert!(report.all_succeeded());
        assert_eq!(report.measured_rate, ratio(1, 1));
        assert_eq!(report.expected_rate, ratio(1, 1));
    }

    #[test]
    fn all_star_single_column_grid_needs_no_broadcast_payloads() {
        let pda = read_pda("pda 1\n1 3 3 0\n*\n*\n*\n").unwrap();
        let scheme = CachingScheme::Uncoded(pda);
        let library = FileLibrary::synthetic(2, 9, 0).unwrap();
        let caches = place(&scheme, &library).unwrap();
        let plan = deliver(&scheme, &caches, &library, &[1]).unwrap();
        assert!(plan.broadcasts.is_empty());
        let report = decode_all(&scheme, &caches, &plan, &library);
        assert!(report.all_succeeded());
        assert_eq!(report.measured_rate, ratio(0, 1));
    }

    #[test]
    fn divisibility_and_demand_errors() {
        let scheme = eq1_scheme();
        let library = FileLibrary::synthetic(4, 10, 0).unwrap();
        assert!(matches!(
            place(&scheme, &library),
            Err(Error::SizeNotDivisible {
                file_size: 10,
                division: 4
            })
        ));
        let library = FileLibrary::synthetic(2, 8, 0).unwrap();
        let caches = place(&scheme, &library).unwrap();
        assert!(matches!(
            deliver(&scheme, &caches, &library, &[0, 1, 2, 0]),
            Err(Error::DemandOutOfRange { user: 2, .. })
        ));
        assert!(deliver(&scheme, &caches, &library, &[0, 1]).is_err());
    }

    #[test]
    fn ternary_three_coordinate_run_has_rate_two() {
        let pda = canonicalize(&construct_theorem1(3, 1, 3, 1).unwrap()).unwrap();
        let scheme = CachingScheme::Uncoded(pda);
        let report = run_end_to_end(
            &scheme,
            &RunConfig {
                num_files: 9,
                file_size: 9 * 4,
                seed: 7,
                demand: None,
            },
        )
        .unwrap();
        assert!(report.all_succeeded());
        assert_eq!(report.measured_rate, ratio(2, 1));
    }

    #[test]
    fn runs_are_deterministic_for_a_seed() {
        let pda = canonicalize(&construct_theorem1(4, 2, 2, 1).unwrap()).unwrap();
        let scheme = CachingScheme::Uncoded(pda);
        let config = RunConfig {
            num_files: 5,
            file_size: 5 * 8,
            seed: 42,
            demand: None,
        };
        let a = run_end_to_end(&scheme, &config).unwrap();
        let b = run_end_to_end(&scheme, &config).unwrap();
        assert_eq!(a.demand, b.demand);
        assert_eq!(a.bytes_sent, b.bytes_sent);
        assert!(a.all_succeeded());
    }
}
