//! Exact lattice arithmetic for twisted connected sum G₂-manifolds.

pub mod blocks;
pub mod embed;
pub mod exactalg;
pub mod g2alg;
pub mod glue;
pub mod lattice;
pub mod matching;
pub mod tcs;
