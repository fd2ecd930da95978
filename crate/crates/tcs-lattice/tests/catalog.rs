use tcs_lattice::blocks::*;
use tcs_lattice::exactalg::int;

#[test]
fn bundled_tables_load() {
    assert_eq!(Catalog::rank1().unwrap().len(), 17);
    assert_eq!(Catalog::bundled_table("table2.blocks").unwrap().len(), 10);
    assert_eq!(Catalog::bundled_table("rank2.blocks").unwrap().len(), 6);
    assert_eq!(
        Catalog::bundled_table("table6.polytopes").unwrap().len(),
        12
    );
    let all = Catalog::bundled().unwrap();
    assert_eq!(all.len(), 45);
    let b = all.get("Ex7.7").unwrap();
    assert_eq!(
        b.lattice().discriminant_group().unwrap().invariant_factors,
        vec![int(3); 5]
    );
    assert_eq!(
        all.get("7.1_22^1").unwrap().lattice().gram().get(0, 0),
        &int(22)
    );
}

#[test]
fn odd_diagonal_rejected() {
    let text = "schema = 1\n\nid = bad\nkind = fano_rank2\nn_gram = [[1, 2], [2, 2]]\n";
    assert!(matches!(
        Catalog::parse(text, "t"),
        Err(CatalogError::Invariant { .. })
    ));
}

#[test]
fn burkhardt_complement_basis_is_reduced() {
    let rec = Catalog::bundled().unwrap().get("Ex7.7").unwrap().clone();
    let basis = rec.complement_basis.clone().unwrap();
    let t = tcs_lattice::lattice::Sublattice::new(tcs_lattice::lattice::k3(), basis).unwrap();
    let expected = tcs_lattice::exactalg::IntMat::from_i64(&[
        [-2, 1, 0, 0, 0, 0],
        [1, -2, 0, 0, 0, 0],
        [0, 0, 0, 3, 0, 0],
        [0, 0, 3, 0, 0, 0],
        [0, 0, 0, 0, 0, 3],
        [0, 0, 0, 0, 3, 0],
    ]);
    assert_eq!(t.gram(), expected);
}

#[test]
fn wrong_complement_basis_rejected() {
    let mut rec = Catalog::bundled().unwrap().get("Ex7.7").unwrap().clone();
    let mut rows: Vec<Vec<i64>> = vec![vec![0; 22]; 6];
    for (i, r) in rows.iter_mut().enumerate() {
        r[i] = 1;
    }
    rec.complement_basis = Some(tcs_lattice::exactalg::IntMat::from_i64(&rows));
    assert!(rec.validate().is_err());
}
