use tcs_lattice::exactalg::{int, rat, Int, IntMat};
use tcs_lattice::glue::*;
use tcs_lattice::lattice::*;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn quartic_with_line_pushout_is_not_integral() {
    let n = Lattice::from_i64(&[[4, 1], [1, -2]]);
    let x = ints(&[-1, 4]);
    assert_eq!(n.norm(&x), int(-36));
    let spec = PushoutSpec::rank_one(n.clone(), &x, n, &x);
    match orthogonal_pushout(&spec) {
        Err(GlueError::IntegralityFailure {
            plus_index,
            minus_index,
            value,
        }) => {
            assert_eq!((plus_index, minus_index), (1, 1));
            assert_eq!(value, rat(-9, 4));
        }
        other => panic!("expected integrality failure, got {other:?}"),
    }
}

#[test]
fn block6_self_glued_along_minus4() {
    let n = Lattice::from_i64(&[[2, 4], [4, 2]]);
    let x = ints(&[1, -1]);
    assert_eq!(n.norm(&x), int(-4));
    let p = orthogonal_pushout(&PushoutSpec::rank_one(n.clone(), &x, n, &x)).unwrap();
    assert_eq!(p.w.rank(), 3);
    assert!(p.w.is_even());
    assert!(pushout_signature_check(&p.w, 2, 2, 1));
    assert_eq!(intersect(&p.n_plus(), &p.n_minus()).rank(), 1);
}

#[test]
fn ex74_along_minus12_is_integral() {
    let n = Lattice::from_i64(&[[-2, 2], [2, 4]]);
    let x = ints(&[2, -1]);
    assert_eq!(n.norm(&x), int(-12));
    assert!(orthogonal_pushout(&PushoutSpec::rank_one(n.clone(), &x, n, &x)).is_ok());
}

#[test]
fn zero_r_pushout_is_perpendicular_sum() {
    let a = Lattice::diagonal(&[4]);
    let b = Lattice::diagonal(&[22]);
    let p = orthogonal_pushout(&PushoutSpec::perpendicular(a.clone(), b.clone())).unwrap();
    assert_eq!(p.w, perpendicular_sum(&a, &b));
    assert!(pushout_signature_check(&p.w, 1, 1, 0));
}

#[test]
fn overlattices_of_4_4() {
    let a = Lattice::diagonal(&[4]);
    let ov = enumerate_overlattices(&a, &a, 16).unwrap();
    assert_eq!(ov.len(), 2);
    assert_eq!(ov.iter().map(|o| o.index).collect::<Vec<_>>(), vec![1, 2]);
    for o in &ov {
        assert!(determinant_bookkeeping(o));
        assert!(glue_is_isotropic(o));
    }
}

#[test]
fn overlattices_of_ex76_self() {
    let a = Lattice::from_i64(&[[0, 4], [4, 4]]);
    let ov = enumerate_overlattices(&a, &a, 16).unwrap();
    let types: std::collections::BTreeSet<Vec<Int>> =
        ov.iter().map(|o| o.glue_type.clone()).collect();
    println!(
        "{} overlattices, {} glue types: {:?}",
        ov.len(),
        types.len(),
        types
    );
    assert_eq!(types.len(), 6);
}

#[test]
fn unimodular_only_trivial() {
    let ov = enumerate_overlattices(&e8(), &Lattice::diagonal(&[4]), 16).unwrap();
    assert_eq!(ov.len(), 1);
    let _ = IntMat::identity(1);
}
