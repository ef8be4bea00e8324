//! The column-selection transform: more users, fewer packets.
//!
//! Starting from the stacked array, the transform relabels every block
//! against block 0, keeps only the columns whose index set avoids the
//! last coordinate, and lays the blocks side by side. The row count
//! drops from L * q^(m-1) to q^(m-1) while the rate moves from
//! (q-z)^t / L to (q-z)^t.

use pdacache::construct::{construct_theorem1, theorem2_params, transform_theorem2};
use pdacache::pda::canonicalize;
use pdacache::verify::{scheme_metrics, verify_pda};

fn show(label: &str, pda: &pdacache::PdaArray) {
    let metrics = scheme_metrics(pda).expect("uniform columns");
    println!(
        "{label}: K={} F={} Z={} S={}  ratio {}  rate {}",
        metrics.k, metrics.f, metrics.z, metrics.s, metrics.memory_ratio, metrics.rate
    );
}

fn main() {
    for (q, z, m, t) in [(5u32, 3u32, 2usize, 1usize), (7, 5, 4, 1), (5, 4, 3, 2)] {
        println!("parameters q={q} z={z} m={m} t={t}");
        let stacked = canonicalize(&construct_theorem1(q, z, m, t).unwrap()).unwrap();
        let transformed = canonicalize(&transform_theorem2(q, z, m, t).unwrap()).unwrap();
        show("  stacked    ", &stacked);
        show("  transformed", &transformed);
        assert!(verify_pda(&transformed).unwrap().pass());

        let closed = theorem2_params(q, z, m, t).unwrap();
        assert_eq!(scheme_metrics(&transformed).unwrap(), closed);
        println!("  closed forms match the counted grid\n");
    }

    // The transformed 5x15 grid at the first parameter point.
    let transformed = canonicalize(&transform_theorem2(5, 3, 2, 1).unwrap()).unwrap();
    println!(
        "transformed grid ({}x{}):",
        transformed.f(),
        transformed.k()
    );
    for row in 0..transformed.f() {
        let cells: Vec<String> = (0..transformed.k())
            .map(|col| match transformed.entry(row, col) {
                pdacache::PdaEntry::Star => " *".to_string(),
                pdacache::PdaEntry::Symbol(s) => format!("{s:2}"),
                pdacache::PdaEntry::Raw(_) => unreachable!(),
            })
            .collect();
        println!("  {}", cells.join(" "));
    }
}
