//! Forms the lattices W that contain both polarising lattices: the
//! orthogonal pushout of two blocks along a common sublattice R, and the
//! overlattices of a perpendicular sum.
//!
//! Usage: `cargo run --example pushout`

use tcs_lattice::exactalg::{int, Int};
use tcs_lattice::glue::{
    enumerate_overlattices, orthogonal_pushout, pushout_signature_check, PushoutSpec,
};
use tcs_lattice::lattice::Lattice;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

fn main() {
    // two copies of [[2, 4], [4, 2]] glued along x = (1, -1), which is orthogonal to A = (1, 1)
    let n = Lattice::from_i64(&[[2, 4], [4, 2]]);
    let x = ints(&[1, -1]);
    let spec = PushoutSpec::rank_one(n.clone(), &x, n.clone(), &x);
    let po = orthogonal_pushout(&spec).expect("R embeds in both blocks");
    println!("W = N+ ⊥_R N- with R = <{}>", n.norm(&x));
    println!("  Gram        {}", po.w.gram());
    println!("  N+ basis    {}", po.plus_basis);
    println!("  N- basis    {}", po.minus_basis);
    println!("  signature   {}", po.w.signature().expect("nondegenerate"));
    println!(
        "  check (1, rk - 2): {}",
        pushout_signature_check(&po.w, 2, 2, 1)
    );

    let four = Lattice::diagonal(&[4]);
    let overs = enumerate_overlattices(&four, &four, 4).expect("small search");
    println!();
    println!("overlattices of <4> ⊥ <4>:");
    for o in &overs {
        let glue: Vec<String> = o.glue_type.iter().map(|g| g.to_string()).collect();
        println!(
            "  index {}  glue [{}]  Gram {}",
            o.index,
            glue.join(", "),
            o.lattice.gram()
        );
    }
}
