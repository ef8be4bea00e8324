//! Coded placement: trade useless stars for an erasure code.
//!
//! A star is useless when it never completes a 2x2 symbol subarray —
//! the cached packet creates no multicast opportunity. Deleting a
//! uniform count of them per column and caching MDS-coded symbols
//! instead shrinks both the memory ratio and the subpacketization.

use pdacache::coded::{strip_useless, theorem3_params};
use pdacache::construct::construct_theorem1;
use pdacache::pda::canonicalize;
use pdacache::sim::{run_end_to_end, CachingScheme, RunConfig};
use pdacache::verify::{find_useless_stars, verify_pda};

fn main() {
    let pda = canonicalize(&construct_theorem1(5, 2, 2, 1).unwrap()).unwrap();
    assert!(verify_pda(&pda).unwrap().pass());
    println!(
        "uncoded scheme: K={} F={} Z={}  ratio {}/{}",
        pda.k(),
        pda.f(),
        pda.z(),
        pda.z(),
        pda.f()
    );

    let useless = find_useless_stars(&pda).unwrap();
    println!(
        "useless stars: {} total, per column {:?}",
        useless.positions.len(),
        useless.per_column
    );

    let coded = strip_useless(pda).unwrap();
    println!(
        "code: [{}, {}] over GF(256), parity rows {:?}",
        coded.spec.n,
        coded.spec.k,
        coded.spec.parity_rows()
    );
    let params = coded.params();
    println!(
        "coded scheme: division {}  ratio {}  rate {}",
        coded.division(),
        params.memory_ratio,
        params.rate
    );

    let closed = theorem3_params(5, 2, 2, 1).unwrap();
    assert_eq!(params.memory_ratio, closed.params.memory_ratio);
    assert_eq!(params.rate, closed.params.rate);
    println!(
        "closed forms agree (z* = {} for this window class)",
        closed.z_star
    );

    let run = run_end_to_end(
        &CachingScheme::Coded(coded),
        &RunConfig {
            num_files: 10,
            file_size: 4 * 16,
            seed: 0,
            demand: Some((0..10).collect()),
        },
    )
    .unwrap();
    println!(
        "\nrun: {} broadcasts, all recovered: {}, measured rate {}",
        run.broadcasts,
        run.all_succeeded(),
        run.measured_rate
    );
}
