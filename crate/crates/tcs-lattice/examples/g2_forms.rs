//! Pointwise G₂ linear algebra on ℝ⁷: the model 3-form, cross products,
//! the metric recovered from a 3-form, the SU(3)-structure on a hyperplane
//! and calibrated subspaces.
//!
//! Usage: `cargo run --example g2_forms [SAMPLES SEED]`

use tcs_lattice::exactalg::rat;
use tcs_lattice::g2alg::*;

fn main() {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let (phi, psi, g) = (phi0(), psi0(), g0());
    println!("phi0 = {phi}");
    println!("psi0 = {psi}");
    let e = |i| basis(7, i);
    println!(
        "e1 x e2 = {:?}",
        cross(&e(1), &e(2), &phi, &g)
            .expect("definite")
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "chi(e5, e6, e7) = {:?}",
        chi(&e(5), &e(6), &e(7), &psi, &g)
            .expect("definite")
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
    );

    let scaled = metric_from_3form(&phi.scale(&rat(8, 1))).expect("nondegenerate");
    println!(
        "metric of 8 phi0: 4 id = {}",
        scaled.metric().expect("exact").matrix().get(0, 0) == &rat(4, 1)
    );
    let split = metric_from_3form(&phi.sub(&Form::dx(7, &[2, 4, 6]).scale(&rat(2, 1))))
        .expect("nondegenerate");
    println!("flipping dx^246 gives signature {:?}", split.signature);

    let su3 = su3_from_unit_vector(&phi, &e(2)).expect("unit vector");
    println!("SU(3) on e2-perp: omega = {}", su3.omega);
    println!("  Re Omega = {}", su3.re_omega);
    println!("  Im Omega = {}", su3.im_omega);

    println!(
        "<e1, e2, e3> associative: {}",
        is_associative(&e(1), &e(2), &e(3), &phi, &g).expect("independent")
    );
    println!(
        "<e4, e5, e6, e7> coassociative: {}",
        is_coassociative(&e(4), &e(5), &e(6), &e(7), &psi, &g).expect("independent")
    );
    println!();
    print!("{}", verify_identity_suite(samples, seed));
}
