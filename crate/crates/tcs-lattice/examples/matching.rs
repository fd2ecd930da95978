//! Builds a matching certificate for a pair of building blocks: the lattice
//! W, its embedding into the K3 lattice, the signature and ample cone checks,
//! and a matching triple of Kähler classes.
//!
//! Usage: `cargo run --example matching [PLUS MINUS]` (default `7.1_4^1 Ex7.8`).

use tcs_lattice::blocks::Catalog;
use tcs_lattice::matching::{
    build_certificate, dump_certificate, verify_triple, MatchMode, MatchOptions,
};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (plus, minus) = match args.as_slice() {
        [a, b] => (a.as_str(), b.as_str()),
        _ => ("7.1_4^1", "Ex7.8"),
    };
    let cat = Catalog::bundled().expect("bundled catalog");
    let (p, m) = (
        cat.get(plus).expect("known block"),
        cat.get(minus).expect("known block"),
    );
    match build_certificate(
        p,
        m,
        &MatchMode::PerpendicularPrimitive,
        &MatchOptions::default(),
    ) {
        Ok(cert) => {
            print!("{}", dump_certificate(&cert));
            if let Some(t) = &cert.triple {
                println!(
                    "triple verified: {}",
                    verify_triple(t, &cert.emb_plus, &cert.emb_minus).ok
                );
            }
            println!();
            print!("{}", cert.to_config().to_text());
        }
        Err(e) => println!("no certificate: {} ({e})", e.code()),
    }
}
