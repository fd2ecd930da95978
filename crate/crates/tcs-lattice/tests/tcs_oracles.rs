use std::path::PathBuf;

use tcs_lattice::blocks::Catalog;
use tcs_lattice::exactalg::{int, rat, Int, IntMat};
use tcs_lattice::tcs::*;

fn catalog() -> Catalog {
    Catalog::bundled().unwrap()
}

fn config(name: &str) -> GluingConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/configs")
        .join(format!("{name}.cfg"));
    GluingConfig::load(path, &catalog()).unwrap()
}

fn k3_rows(rows: &[&[(usize, i64)]]) -> IntMat {
    let mut m = vec![vec![0i64; 22]; rows.len()];
    for (i, r) in rows.iter().enumerate() {
        for &(c, v) in r.iter() {
            m[i][c] = v;
        }
    }
    IntMat::from_i64(&m)
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn quartic_self_pair_primitive() {
    let inv = compute_invariants(&config("no01")).unwrap();
    assert_eq!((inv.b2, inv.b3, inv.b4), (0, 155, 155));
    assert!(inv.tor_h3.is_empty());
    assert_eq!(
        inv.div_p1,
        DivP1::Value {
            value: 8,
            mod_torsion: false
        }
    );
    assert!(inv.two_connected && inv.h4_torsion_free && inv.betti_identity_holds);
    let c = inv.classification.unwrap();
    assert_eq!(c.almost_diffeo, (155, 8));
    assert_eq!(c.homotopy, (155, 8));
    assert_eq!(c.diffeo_class_count, 1);
}

#[test]
fn quartic_self_pair_index_two() {
    let inv = compute_invariants(&config("no01-overlattice")).unwrap();
    assert_eq!(inv.tor_h3, ints(&[2]));
    assert_eq!((inv.b2, inv.b3), (0, 155));
    assert!(!inv.two_connected);
    assert!(inv.classification.is_err());
}

#[test]
fn hand_written_perpendicular_config() {
    let text = "schema = 1\nblock_plus = 7.1_4^1\nblock_minus = 7.1_22^1\n\
                emb_plus = [[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n\
                emb_minus = [[0, 0, 1, 11, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n";
    let cfg = GluingConfig::parse(text, &catalog()).unwrap();
    let inv = compute_invariants(&cfg).unwrap();
    // b³(Z) = 66 and 24 for the quartic and the degree 22 threefold
    assert_eq!(inv.b3, 66 + 24 + 23);
    assert_eq!(inv.div_p1.value(), Some(4));
    assert!(torsion_linking(&cfg).generators.is_empty());
    let kv = report_kv(&inv);
    assert!(kv.contains("b3 = 113\n"));
    assert!(kv.contains("realization = M_{1,0} # 112(S3xS4)\n"));
}

#[test]
fn config_rejects_non_primitive_and_non_isometric() {
    let cat = catalog();
    let base = "schema = 1\nblock_plus = 7.1_4^1\nblock_minus = 7.1_4^1\n\
                emb_minus = [[0, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n";
    let fine = format!(
        "{base}emb_plus = [[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n"
    );
    assert!(GluingConfig::parse(&fine, &cat).is_ok());
    let wrong_norm = format!(
        "{base}emb_plus = [[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n"
    );
    assert_eq!(
        GluingConfig::parse(&wrong_norm, &cat),
        Err(TcsError::NotIsometric(Side::Plus))
    );
    let text = "schema = 1\nblock_plus = 7.1_2^2\nblock_minus = 7.1_4^1\n\
                emb_plus = [[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n\
                emb_minus = [[0, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n";
    assert!(GluingConfig::parse(text, &cat).is_ok());
    let text = "schema = 1\nblock_plus = 7.1_1^4\nblock_minus = 7.1_4^1\n\
                emb_plus = [[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n\
                emb_minus = [[0, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n";
    assert_eq!(
        GluingConfig::parse(text, &cat),
        Err(TcsError::NotIsometric(Side::Plus))
    );
    // 2(e1 + f1) has norm 8 but is divisible by 2
    let text = "schema = 1\nblock_plus = 7.1_8^1\nblock_minus = 7.1_4^1\n\
                emb_plus = [[2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n\
                emb_minus = [[0, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]]\n";
    assert_eq!(
        GluingConfig::parse(text, &cat),
        Err(TcsError::NotPrimitive(Side::Plus))
    );
}

#[test]
fn config_parse_errors_name_the_line() {
    let cat = catalog();
    let text = "schema = 1\nblock_plus = 7.1_4^1\nblock_minus = 7.1_4^1\nbogus = 3\n";
    match GluingConfig::parse(text, &cat) {
        Err(TcsError::Config(tcs_lattice::blocks::CatalogError::Parse { line, .. })) => {
            assert_eq!(line, 4)
        }
        other => panic!("unexpected {other:?}"),
    }
    let text = "schema = 1\nblock_plus = nope\nblock_minus = 7.1_4^1\n";
    assert!(matches!(
        GluingConfig::parse(text, &cat),
        Err(TcsError::Config(_))
    ));
}

#[test]
fn resolution_choices() {
    let mut cfg = config("no02a");
    let inv = compute_invariants(&cfg).unwrap();
    assert_eq!(
        inv.div_p1,
        DivP1::Choices {
            values: vec![4, 8],
            mod_torsion: false
        }
    );
    cfg.resolution_plus = Some(4);
    cfg.resolution_minus = Some(4);
    assert_eq!(compute_invariants(&cfg).unwrap().div_p1.value(), Some(8));
    cfg.resolution_minus = Some(2);
    assert_eq!(compute_invariants(&cfg).unwrap().div_p1.value(), Some(4));
    cfg.resolution_minus = Some(6);
    assert!(matches!(
        compute_invariants(&cfg),
        Err(TcsError::ResolutionChoice {
            side: Side::Minus,
            value: 6,
            ..
        })
    ));
}

#[test]
fn burkhardt_with_sextic_partner_has_three_torsion() {
    let inv = compute_invariants(&config("no06a")).unwrap();
    assert_eq!(inv.tor_h3, ints(&[3]));
    assert_eq!(inv.b3, 77);
    let inv = compute_invariants(&config("no05a")).unwrap();
    assert_eq!((inv.b3, inv.a0, inv.div_p1.value()), (95, 45, Some(4)));
}

#[test]
fn kernel_contributes_to_b2() {
    let inv = compute_invariants(&config("no07")).unwrap();
    assert_eq!((inv.b2, inv.b3, inv.a0), (24, 47, 66));
    assert_eq!(inv.tor_h3, ints(&[8]));
    assert!(inv.betti_identity_holds);
}

#[test]
fn torsion_in_h4_and_linking() {
    let cfg = config("no10");
    let inv = compute_invariants(&cfg).unwrap();
    assert_eq!((inv.b2, inv.b3), (1, 82));
    assert_eq!(
        (inv.tor_h4_plus.clone(), inv.tor_h4_minus.clone()),
        (ints(&[2]), ints(&[2]))
    );
    assert_eq!(
        inv.div_p1,
        DivP1::Value {
            value: 8,
            mod_torsion: true
        }
    );
    let table = torsion_linking(&cfg);
    assert_eq!(table.generators.len(), 2);
    assert!(table.is_block_antidiagonal());
    assert_eq!(table.values[0][1], rat(1, 2));
    assert_eq!(table.values[1][0], rat(1, 2));
}

#[test]
fn synthetic_order_three_linking() {
    // a = e1 + f1 and b = e1 + 2f1 + e2 - f2 have norm 2 and ⟨a, b⟩ = 3,
    // so L/(N∓ + T±) ≅ ℤ/⟨a, b⟩ = ℤ/3 on both sides
    let a = k3_rows(&[&[(0, 1), (1, 1)]]);
    let b = k3_rows(&[&[(0, 1), (1, 2), (2, 1), (3, -1)]]);
    let cat = catalog();
    let mut cfg = GluingConfig::new(
        cat.get("7.1_2^1").unwrap().clone(),
        cat.get("7.1_2^1").unwrap().clone(),
        a,
        b,
    )
    .unwrap();
    cfg.mode = GluingMode::Handcrafted;
    let inv = compute_invariants(&cfg).unwrap();
    assert_eq!(
        (inv.tor_h4_plus.clone(), inv.tor_h4_minus.clone()),
        (ints(&[3]), ints(&[3]))
    );
    let table = torsion_linking(&cfg);
    assert!(table.is_block_antidiagonal());
    let v = &table.values[0][1];
    assert!(*v == rat(1, 3) || *v == rat(2, 3), "pairing {v}");
    assert_eq!(table.values[1][0], table.values[0][1]);
    // brute force: k = 3, 3α = n + t with n ∈ N₋, t ∈ T₊ recomputed by hand
    let (alpha, beta) = (&table.generators[0].1, &table.generators[1].1);
    let l = tcs_lattice::lattice::k3();
    let (va, vb) = (cfg.emb_plus.row(0).to_vec(), cfg.emb_minus.row(0).to_vec());
    // t = 3α − c·b with ⟨t, a⟩ = 0, i.e. c = 3⟨α, a⟩/⟨b, a⟩
    let c = l.pair(alpha, &va) * int(3) / l.pair(&vb, &va);
    let t: Vec<Int> = alpha
        .iter()
        .zip(&vb)
        .map(|(x, y)| int(3) * x - &c * y)
        .collect();
    assert_eq!(l.pair(&t, &va), int(0));
    let expected = tcs_lattice::exactalg::rat_mod(
        &num_rational::BigRational::new(l.pair(&t, beta), int(3)),
        &rat(1, 1),
    );
    assert_eq!(*v, expected);
}

#[test]
fn non_orthogonal_gluing_breaks_betti_identity() {
    let inv = compute_invariants(&config("no11")).unwrap();
    assert_eq!((inv.b2, inv.b3), (0, 93));
    assert!(!inv.betti_identity_holds);
    // the orthogonal value would be 36 + 36 + 23
    assert_eq!(95 - inv.b2 - inv.b3, 2);
    assert_eq!(inv.div_p1.value(), Some(48));
    assert_eq!(inv.classification.as_ref().unwrap().diffeo_class_count, 2);
    assert!(sanity_suite(&inv).iter().all(|c| c.passed));
}

fn fake(b4: usize, d: u64) -> TcsInvariants {
    let mut inv = compute_invariants(&config("no01")).unwrap();
    inv.b3 = b4;
    inv.b4 = b4;
    inv.div_p1 = DivP1::Value {
        value: d,
        mod_torsion: false,
    };
    inv
}

#[test]
fn classification_examples() {
    let c = classify_2connected(&fake(71, 4)).unwrap();
    assert_eq!(c.realization, "M_{1,0} # 70(S3xS4)");
    assert_eq!(c.diffeo_class_count, 1);
    assert_eq!(
        classify_2connected(&fake(99, 16))
            .unwrap()
            .diffeo_class_count,
        2
    );
    assert_eq!(
        classify_2connected(&fake(99, 48)).unwrap().homotopy,
        (99, 0)
    );
    let mut torsion = fake(99, 8);
    torsion.h4_torsion_free = false;
    assert_eq!(
        classify_2connected(&torsion).unwrap_err().reason,
        "H4 has torsion"
    );
}

#[test]
fn sanity_suite_flags_bad_values() {
    let inv = fake(155, 20);
    let failed: Vec<&str> = sanity_suite(&inv)
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    assert_eq!(failed, vec!["div_p1_admissible"]);
    let mut inv = fake(155, 8);
    inv.b4 = 154;
    let failed: Vec<&str> = sanity_suite(&inv)
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    assert_eq!(failed, vec!["poincare_duality"]);
}

#[test]
fn forged_odd_div_c2_is_rejected_by_the_catalog() {
    let text = "schema = 1\n\nid = X\nkind = fano_rank1\nrank = 1\nn_gram = [[4]]\nanticanonical_class = [1]\n\
                minus_k3 = 4\nb3_Z = 66\nrk_K = 0\ndiv_c2 = 5\ne_rigid = 0\n";
    assert!(Catalog::parse(text, "forged").is_err());
}

#[test]
fn tsv_row_has_every_column() {
    let inv = compute_invariants(&config("no08")).unwrap();
    let row = report_tsv_row(&inv);
    assert_eq!(row.split('\t').count(), TSV_COLUMNS.len());
    assert!(row.contains("\t4,4\t"));
    assert_eq!(report_tsv_header().split('\t').count(), TSV_COLUMNS.len());
}
