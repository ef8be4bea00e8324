//! The text and JSON array formats.

use pdacache::construct::transform_theorem2;
use pdacache::format::{read_pda, read_pda_json, write_pda, write_pda_json};
use pdacache::pda::canonicalize;

fn main() {
    let pda = canonicalize(&transform_theorem2(5, 3, 2, 1).unwrap()).unwrap();

    let text = write_pda(&pda).unwrap();
    println!("text format:\n{text}");
    let back = read_pda(&text).unwrap();
    assert!(pda.same_grid(&back));
    println!("text round trip: grids equal\n");

    let json = write_pda_json(&pda).unwrap();
    println!("JSON variant (labels and derived metrics included):");
    for line in json.lines().take(14) {
        println!("{line}");
    }
    println!("...");
    let back = read_pda_json(&json).unwrap();
    assert_eq!(pda, back);
    println!("JSON round trip: arrays equal, labels preserved");
}
