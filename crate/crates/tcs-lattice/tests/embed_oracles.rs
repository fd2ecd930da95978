use tcs_lattice::embed::*;
use tcs_lattice::exactalg::{int, Int, IntMat};
use tcs_lattice::glue::perpendicular_sum;
use tcs_lattice::lattice::*;

fn constructed(v: &EmbeddingVerdict) -> &ConstructedEmbedding {
    match &v.status {
        EmbeddingStatus::ExistsConstructed(c) => c,
        other => panic!("expected a construction, got {other:?}"),
    }
}

#[test]
fn four_four_library_rows() {
    let w = Lattice::diagonal(&[4, 4]);
    let v = construct_embedding(&w, Strategy::Library, 3, &[1, 1]).unwrap();
    let c = constructed(&v);
    assert_eq!(&c.basis.row(0)[..4], &[int(1), int(2), int(0), int(0)]);
    assert_eq!(&c.basis.row(1)[..4], &[int(0), int(0), int(1), int(2)]);
    assert!(c.primitive);
    assert_eq!(v.unique, Some(true));
}

#[test]
fn large_cotorsion_builtin() {
    let n = Lattice::from_i64(&[[4, 4], [4, 0]]);
    let w = perpendicular_sum(&n, &n);
    let v = construct_embedding(&w, Strategy::Library, 3, &[2, 2]).unwrap();
    let c = constructed(&v);
    assert!(!c.primitive);
    assert_eq!(c.cotorsion, vec![int(4), int(4)]);
    assert_eq!(c.block_primitive, vec![true, true]);
}

#[test]
fn two_n0_builtin_cotorsion_8() {
    let n = Lattice::direct_sum(&[&e8_neg(), &Lattice::diagonal(&[8, -16])]);
    let w = perpendicular_sum(&n, &n);
    let v = construct_embedding(&w, Strategy::Library, 3, &[10, 10]).unwrap();
    let c = constructed(&v);
    assert_eq!(c.cotorsion, vec![int(8)]);
    assert_eq!(c.block_primitive, vec![true, true]);
}

#[test]
fn no4_w_residual_in_e8() {
    let a = Lattice::diagonal(&[4, -2]);
    let b = Lattice::direct_sum(&[&e8_neg(), &Lattice::diagonal(&[8, -16])]);
    let w = perpendicular_sum(&a, &b);
    assert_eq!(w.ell().unwrap(), 4);
    assert!(matches!(
        assess(&w).status,
        EmbeddingStatus::ExistsPrimitiveByCriterion(Criterion::RankPlusEll)
    ));
    let v = construct_embedding(&w, Strategy::Library, 3, &[2, 10]).unwrap();
    assert!(constructed(&v).primitive);
}

#[test]
fn backtracking_finds_4_22() {
    let w = Lattice::diagonal(&[4, 22]);
    let v = construct_embedding(&w, Strategy::Backtracking, 3, &[1, 1]).unwrap();
    assert!(constructed(&v).primitive);
}

#[test]
fn burkhardt_complement_obstruction() {
    let u3 = u().scaled(3);
    let t = Lattice::direct_sum(&[&a2_neg(), &u3, &u3]);
    assert!(mod_obstruction(&t, &int(2), 3).unwrap());
    assert!(mod_obstruction(&t, &int(8), 3).unwrap());
    assert!(!mod_obstruction(&t, &int(4), 3).unwrap());
    let x = embed_into_complement(&t, &int(4), 3).unwrap();
    assert_eq!(t.norm(&x), int(4));
    assert!(
        x.iter()
            .fold(Int::from(0), |a, b| num_integer::Integer::gcd(&a, b))
            == int(1)
    );
    let _ = IntMat::identity(1);
}
