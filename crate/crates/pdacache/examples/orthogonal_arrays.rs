//! Building and checking proper orthogonal arrays.
//!
//! A proper orthogonal array of strength m-1 keeps every (m-1)-column
//! projection balanced while all rows share one sum mod q. These arrays
//! index the rows of the stacked placement construction.

use pdacache::oa::{build_poa, is_proper, verify_oa, write_oa, OrthogonalArray};

fn main() {
    // The two 5-row arrays with row sums 0 and 2.
    for row_sum in [0u32, 2] {
        let poa = build_poa(2, 5, row_sum).expect("valid parameters");
        println!("POA(2, 5, 1) with row sum {row_sum}:");
        for row in poa.rows() {
            println!("  {row:?}");
        }
        println!("  proper: row sum = {:?}", is_proper(&poa).unwrap());
        println!();
    }

    // Strength cascades: a strength m-1 array is strength t for every
    // smaller t, with index q^(m-1-t).
    let poa = build_poa(4, 3, 1).expect("valid parameters");
    println!(
        "POA(4, 3, 3): {} rows over [0, 2], row sum {}",
        poa.len(),
        is_proper(&poa).unwrap()
    );
    for t in 1..4 {
        let report = verify_oa(&poa, t).expect("index divides");
        println!(
            "  strength {t}: {} (index {})",
            if report.pass() { "pass" } else { "fail" },
            report.index
        );
    }
    println!();

    // Orthogonal does not imply proper: this ternary array passes
    // strength 2 but its row sums vary.
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
    let oa = OrthogonalArray::new(rows, 3, 2).unwrap();
    println!(
        "9x3 ternary array: strength 2 {}, proper: {:?}",
        if verify_oa(&oa, 2).unwrap().pass() {
            "pass"
        } else {
            "fail"
        },
        is_proper(&oa)
    );
    println!();

    println!("text form of POA(3, 2, 2):");
    print!("{}", write_oa(&build_poa(3, 2, 0).unwrap()));
}
