//! Loads the bundled building block catalog and prints a summary of each
//! table together with the full record of one block.
//!
//! Usage: `cargo run --example catalog [BLOCK_ID]` (default `Ex7.7`).

use tcs_lattice::blocks::{describe, Catalog};

fn main() {
    let id = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "Ex7.7".to_string());
    for name in [
        "rank1.blocks",
        "table2.blocks",
        "rank2.blocks",
        "table6.polytopes",
    ] {
        let table = Catalog::bundled_table(name).expect("bundled table parses");
        println!("{name}: {} records", table.len());
    }
    let cat = Catalog::bundled().expect("bundled catalog");
    println!();
    println!(
        "{:<10} {:<20} {:>4} {:>5} {:>12}",
        "id", "kind", "rank", "b3_Z", "disc"
    );
    for r in cat.records().iter().filter(|r| !r.is_gramless()) {
        let disc = r
            .lattice()
            .discriminant_group()
            .map(|d| d.group().torsion_string())
            .unwrap_or_default();
        let b3 = r.b3_z.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        println!(
            "{:<10} {:<20} {:>4} {:>5} {:>12}",
            r.id,
            r.kind.to_string(),
            r.rank,
            b3,
            disc
        );
    }
    println!();
    match cat.get(&id) {
        Ok(rec) => print!("{}", describe(rec)),
        Err(e) => eprintln!("{e}"),
    }
}
