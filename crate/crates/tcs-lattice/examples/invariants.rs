//! Computes the topology of the twisted connected sums described by the
//! checked-in gluing configs: Betti numbers, torsion, divisibility of p₁
//! and the classification of the 2-connected ones.
//!
//! Usage: `cargo run --example invariants [CONFIG...]` (default: all of `examples/configs`).

use std::path::PathBuf;

use tcs_lattice::blocks::Catalog;
use tcs_lattice::tcs::{
    compute_invariants, report_tsv_header, report_tsv_row, torsion_linking, GluingConfig,
};

fn main() {
    let cat = Catalog::bundled().expect("bundled catalog");
    let mut paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
        paths = std::fs::read_dir(dir)
            .expect("configs directory")
            .map(|e| e.expect("entry").path())
            .collect();
        paths.sort();
    }
    println!("{}\tclassification", report_tsv_header());
    let mut with_torsion = Vec::new();
    for path in &paths {
        let cfg =
            GluingConfig::load(path, &cat).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let inv = compute_invariants(&cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let class = match &inv.classification {
            Ok(c) if c.diffeo_class_count == 1 => {
                format!("{} (one diffeomorphism class)", c.realization)
            }
            Ok(c) => format!(
                "{} ({} diffeomorphism classes)",
                c.realization, c.diffeo_class_count
            ),
            Err(n) => n.reason.clone(),
        };
        println!("{}\t{class}", report_tsv_row(&inv));
        if !inv.tor_h4().is_empty() {
            with_torsion.push(cfg);
        }
    }
    for cfg in with_torsion {
        let table = torsion_linking(&cfg);
        println!();
        println!("torsion linking form of {}:", cfg.label);
        for row in &table.values {
            println!(
                "  {}",
                row.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("  ")
            );
        }
    }
}
