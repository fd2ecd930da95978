//! Decides whether lattices embed primitively into the K3 lattice
//! U³ ⊥ E₈(−1)², first by Nikulin's criteria and then constructively.
//!
//! Usage: `cargo run --example embed_k3`

use tcs_lattice::embed::{
    assess, builtin_large_cotorsion_gram, construct_embedding, EmbeddingStatus, Strategy,
};
use tcs_lattice::lattice::Lattice;

fn report(name: &str, w: &Lattice) {
    let verdict = assess(w);
    println!(
        "{name}: rank {}, criterion verdict {}",
        w.rank(),
        verdict.status.tag()
    );
    if verdict.status == EmbeddingStatus::ImpossibleByNecessary {
        return;
    }
    for strategy in [Strategy::Library, Strategy::Backtracking] {
        let v = construct_embedding(w, strategy, 3, &[w.rank()]).expect("rank fits");
        if let EmbeddingStatus::ExistsConstructed(c) = &v.status {
            let cot: Vec<String> = c.cotorsion.iter().map(|x| x.to_string()).collect();
            println!(
                "  {:?} via {}: primitive {}, cotorsion [{}]",
                strategy,
                c.method,
                c.primitive,
                cot.join(", ")
            );
            println!("  rows {}", c.basis);
            return;
        }
    }
    println!("  no explicit embedding found");
}

fn main() {
    report("<4> ⊥ <4>", &Lattice::diagonal(&[4, 4]));
    report("<2> ⊥ <-2>", &Lattice::diagonal(&[2, -2]));
    report(
        "two copies of [[4, 4], [4, 0]]",
        &Lattice::new(builtin_large_cotorsion_gram()).expect("symmetric"),
    );
    report(
        "<-2>^21 ⊥ <2>^2",
        &Lattice::diagonal(&[[-2; 21].as_slice(), &[2, 2]].concat()),
    );
}
