//! Census of twisted connected sums over pairs of catalog blocks, counted by
//! b³ and the divisibility of p₁.
//!
//! Usage: `cargo run --example geography`

use tcs_lattice::blocks::Catalog;
use tcs_lattice::matching::{
    geography_general, geography_human, geography_rank1, PairFilter, Resolutions,
};

fn main() {
    let cat = Catalog::bundled().expect("bundled catalog");
    println!("Pairs of rank-one Fano blocks (b³(M) = b + 23):");
    print!("{}", geography_human(&geography_rank1(&cat)));
    println!();
    println!("All catalog pairs with rk N+ + rk N- + ℓ < 22, every resolution:");
    let report = geography_general(&cat, PairFilter::RankEll22, Resolutions::All);
    print!("{}", geography_human(&report));
}
