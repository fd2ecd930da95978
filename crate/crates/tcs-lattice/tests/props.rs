use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tcs_lattice::blocks::{BlockRecord, Catalog};
use tcs_lattice::exactalg::{int, rat, snf, Int, IntMat, Rat};
use tcs_lattice::g2alg::{cross, g0, metric_from_3form, phi0, Form, Metric};
use tcs_lattice::lattice::{k3, sum, DiscGroup, Sublattice};
use tcs_lattice::tcs::{compute_invariants, GluingConfig, GluingMode, ADMISSIBLE_DIV_P1};

const E8_PLUS: usize = 6;
const E8_MINUS: usize = 14;

fn rank_one_blocks() -> Vec<BlockRecord> {
    Catalog::rank1().unwrap().records().to_vec()
}

fn block_norm(b: &BlockRecord) -> i64 {
    b.n_gram.as_ref().unwrap().get(0, 0).try_into().unwrap()
}

/// A primitive vector of norm `n` with a unit coordinate at `unit`, its partner
/// `f` fixing the norm, and the given values elsewhere.
fn vector_with_norm(
    n: i64,
    unit: usize,
    partner: usize,
    extra: &[(usize, i64)],
    e8_at: usize,
    e8: &[i64],
) -> Vec<Int> {
    let mut v = vec![Int::zero(); 22];
    v[unit] = int(1);
    for &(i, x) in extra {
        v[i] = int(x);
    }
    for (i, x) in e8.iter().enumerate() {
        v[e8_at + i] = int(*x);
    }
    let rest = k3().norm(&v);
    let gap = int(n) - rest;
    debug_assert!(gap.is_even());
    // ⟨e, f⟩ = 1 inside U, so raising the f-coordinate by a adds 2a to the norm
    v[partner] += gap / int(2);
    v
}

fn config(plus: &BlockRecord, minus: &BlockRecord, vp: Vec<Int>, vm: Vec<Int>) -> GluingConfig {
    let mut cfg = GluingConfig::new(
        plus.clone(),
        minus.clone(),
        IntMat::row_vector(&vp),
        IntMat::row_vector(&vm),
    )
    .unwrap();
    if !cfg.is_perpendicular() {
        cfg.mode = GluingMode::Handcrafted;
    }
    cfg
}

fn small() -> impl Strategy<Value = i64> {
    -2i64..=2
}

fn e8_part() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1i64..=1, 8)
}

/// Rank-one pairs in general position: `v₊` uses `e₁`, `v₋` uses `e₂` with no `e₁` part.
fn generic_pair() -> impl Strategy<Value = GluingConfig> {
    let blocks = rank_one_blocks();
    let n = blocks.len();
    (0..n, 0..n, small(), small(), small(), e8_part(), e8_part()).prop_map(
        move |(i, j, x, y, b, wp, wm)| {
            let (p, m) = (&blocks[i], &blocks[j]);
            let vp = vector_with_norm(block_norm(p), 0, 1, &[(2, x), (3, y)], E8_PLUS, &wp);
            let vm = vector_with_norm(block_norm(m), 2, 3, &[(1, b)], E8_PLUS, &wm);
            config(p, m, vp, vm)
        },
    )
}

/// Rank-one pairs with disjoint supports, hence perpendicular.
fn perpendicular_pair() -> impl Strategy<Value = GluingConfig> {
    let blocks = rank_one_blocks();
    let n = blocks.len();
    (0..n, 0..n, small(), small(), e8_part(), e8_part()).prop_map(move |(i, j, x, y, wp, wm)| {
        let (p, m) = (&blocks[i], &blocks[j]);
        let vp = vector_with_norm(block_norm(p), 0, 1, &[(2, x)], E8_PLUS, &wp);
        let vm = vector_with_norm(block_norm(m), 4, 5, &[(5, y)], E8_MINUS, &wm);
        config(p, m, vp, vm)
    })
}

fn minors(a: &IntMat, k: usize) -> Vec<Int> {
    let n = a.rows();
    let subsets: Vec<Vec<usize>> = (0..1usize << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    subsets
        .iter()
        .flat_map(|r| {
            subsets
                .iter()
                .map(move |c| a.select_rows(r).select_cols(c).det())
        })
        .collect()
}

fn gcd_of(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn rat_vector() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), 7)
}

fn random_form(degree: usize) -> impl Strategy<Value = Form> {
    prop::collection::vec(
        (
            -3i64..=3,
            prop::sample::subsequence((1..=7).collect::<Vec<usize>>(), degree),
        ),
        0..5,
    )
    .prop_map(move |terms| {
        let refs: Vec<(i64, &[usize])> =
            terms.iter().map(|(c, idx)| (*c, idx.as_slice())).collect();
        Form::from_terms(7, degree, &refs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cohomology_routes_agree(cfg in generic_pair()) {
        let inv = compute_invariants(&cfg);
        prop_assert!(inv.is_ok(), "{:?}", inv.err());
        let inv = inv.unwrap();
        prop_assert_eq!(inv.b3, inv.b4);
    }

    #[test]
    fn perpendicular_pairs_obey_the_betti_identity(cfg in perpendicular_pair()) {
        let inv = compute_invariants(&cfg).unwrap();
        prop_assert!(inv.perpendicular);
        prop_assert!(inv.betti_identity_holds);
        prop_assert_eq!(inv.b3, inv.b4);
        prop_assert_eq!(inv.b2, 0);
        for v in inv.div_p1.values() {
            prop_assert!(ADMISSIBLE_DIV_P1.contains(&v), "div p1 = {}", v);
        }
    }

    #[test]
    fn primitive_sublattice_and_complement_share_discriminant(cfg in generic_pair()) {
        let l = k3();
        let w = sum(&cfg.n_plus(), &cfg.n_minus()).saturation();
        let wl = w.lattice();
        prop_assume!(wl.is_nondegenerate());
        let t = w.orthogonal_complement();
        let dw = DiscGroup::of(&wl).unwrap();
        let dt = DiscGroup::of(&t.lattice()).unwrap();
        prop_assert_eq!(&dw.invariant_factors, &dt.invariant_factors);
        prop_assert_eq!(dw.order(), wl.det().abs());
        prop_assert!(Sublattice::new(l, w.basis().clone()).unwrap().is_primitive());
    }

    #[test]
    fn smith_form_matches_determinantal_divisors(entries in prop::collection::vec(-2i64..=2, 9)) {
        let a = IntMat::from_i64(&[&entries[0..3], &entries[3..6], &entries[6..9]]);
        let d = snf(&a).diagonal();
        let mut expected = Vec::new();
        let mut previous = int(1);
        for k in 1..=3 {
            let dk = gcd_of(&minors(&a, k));
            expected.push(if dk.is_zero() { Int::zero() } else { &dk / &previous });
            previous = dk;
            if previous.is_zero() {
                break;
            }
        }
        expected.resize(3, Int::zero());
        let d: Vec<Int> = d.iter().map(|x| x.abs()).collect();
        prop_assert_eq!(d, expected);
    }

    #[test]
    fn cross_product_is_orthogonal_to_its_factors(u in rat_vector(), v in rat_vector()) {
        let (phi, g) = (phi0(), g0());
        let w = cross(&u, &v, &phi, &g).unwrap();
        prop_assert!(g.pair(&w, &u).is_zero());
        prop_assert!(g.pair(&w, &v).is_zero());
        // |u × v|² = |u|²|v|² − ⟨u, v⟩²
        let uv = g.pair(&u, &v);
        prop_assert_eq!(g.norm2(&w), g.norm2(&u) * g.norm2(&v) - &uv * &uv);
    }

    #[test]
    fn metric_scales_quadratically(p in 1i64..=6, q in 1i64..=6) {
        let c = rat(p, q);
        let m = metric_from_3form(&phi0().scale(&(&c * &c * &c))).unwrap();
        prop_assert!(m.positive);
        let expected = Metric::new(tcs_lattice::exactalg::RatMat::identity(7).scale(&(&c * &c))).unwrap();
        prop_assert_eq!(m.metric().unwrap(), expected);
    }

    #[test]
    fn wedge_is_graded_commutative(a in random_form(2), b in random_form(3)) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a));
        prop_assert!(b.wedge(&b).is_zero());
    }
}
