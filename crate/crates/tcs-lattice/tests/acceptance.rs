//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//!
//! Every numerical comparison is exact; the only tolerances are wall-clock
//! budgets, pinned below.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcs_lattice::blocks::{BlockRecord, Catalog};
use tcs_lattice::embed::{
    builtin_large_cotorsion_gram, builtin_large_cotorsion_matrix, builtin_two_n0_gram,
    builtin_two_n0_matrix, mod_obstruction,
};
use tcs_lattice::exactalg::{int, rat, snf, Int, IntMat, RatMat};
use tcs_lattice::g2alg::{metric_from_3form, phi0, verify_identity_suite};
use tcs_lattice::glue::{orthogonal_pushout, GlueError, PushoutSpec};
use tcs_lattice::lattice::{cokernel, k3, u, DiscGroup, Lattice, Sublattice};
use tcs_lattice::matching::{
    build_certificate, disc_factors, geography_general, geography_rank1, GeographyReport,
    MatchMode, MatchOptions, PairFilter, Resolutions, DIV_COLUMNS,
};
use tcs_lattice::tcs::{
    compute_invariants, GluingConfig, GluingMode, TcsInvariants, ADMISSIBLE_DIV_P1,
};

const CENSUS_BUDGET: Duration = Duration::from_secs(1);
const INVARIANT_SUITE_BUDGET: Duration = Duration::from_secs(60);
const G2_BUDGET: Duration = Duration::from_secs(5);
const RANDOM_CONFIGS: usize = 200;
const SNF_SAMPLES: usize = 1000;
const SEED: u64 = 20_260_101;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("took {took:.2?}, budget {budget:?}")
    })
}

fn catalog() -> Catalog {
    Catalog::bundled().expect("bundled catalog loads")
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

fn load_config(file: &str, cat: &Catalog) -> GluingConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/configs")
        .join(format!("{file}.cfg"));
    GluingConfig::load(&path, cat).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn census() -> Outcome {
    let start = Instant::now();
    let r = geography_rank1(&catalog());
    within(CENSUS_BUDGET, start)?;
    ensure(r.total_pairs == 153, || format!("{} pairs", r.total_pairs))?;
    ensure(r.distinct_b == 46, || {
        format!("{} distinct b", r.distinct_b)
    })?;
    ensure(r.distinct_types == 82, || {
        format!("{} distinct types", r.distinct_types)
    })?;
    ensure(r.column_totals == [101, 28, 7, 14, 2, 1], || {
        format!("column totals {:?}", r.column_totals)
    })?;
    let row = |b: u64| {
        r.rows
            .iter()
            .find(|x| x.b == b)
            .ok_or(format!("no row b = {b}"))
    };
    let r48 = row(48)?;
    ensure((r48.count, r48.by_div) == (6, [4, 0, 1, 1, 0, 0]), || {
        format!("row 48 = {r48:?}")
    })?;
    ensure(row(72)?.by_div[5] == 1 && r.column_totals[5] == 1, || {
        "div p1 = 48 is not unique to row 72".into()
    })?;
    ensure(row(216)?.count == 1, || "row 216".into())?;
    Ok(format!(
        "153 pairs, 46 b values, 82 types in {:.2?}",
        start.elapsed()
    ))
}

/// `(config, b², b³, Tor H³, a₀, div p₁ values)`; `Tor H⁴` is blank in every row.
type Golden = (
    &'static str,
    usize,
    usize,
    &'static [i64],
    u64,
    &'static [u64],
);

const TABLE5: &[Golden] = &[
    ("no01-overlattice", 0, 155, &[2], 0, &[8]),
    ("no02a", 0, 123, &[], 18, &[4, 8]),
    ("no02b", 0, 117, &[], 21, &[4]),
    ("no02c", 0, 107, &[], 26, &[4, 8]),
    ("no02d", 0, 109, &[], 25, &[4, 8]),
    ("no03", 3, 116, &[], 24, &[4]),
    ("no04", 0, 93, &[], 21, &[4]),
    ("no05a", 0, 95, &[], 45, &[4]),
    ("no05b", 0, 61, &[], 45, &[4]),
    ("no05c", 0, 53, &[], 45, &[4]),
    ("no05d", 0, 53, &[], 45, &[4]),
    ("no05e", 0, 67, &[], 45, &[4]),
    ("no05f", 0, 71, &[], 45, &[4]),
    ("no05g", 0, 95, &[], 45, &[4]),
    ("no06a", 0, 77, &[3], 45, &[4]),
    ("no06b", 0, 57, &[3], 45, &[4]),
    ("no06c", 0, 53, &[3], 45, &[4]),
    ("no06d", 0, 65, &[3], 45, &[4]),
    ("no06e", 0, 85, &[3], 45, &[4]),
    ("no07", 24, 47, &[8], 66, &[4]),
    ("no08", 0, 95, &[4, 4], 32, &[8]),
    // printed as 82; the Betti identity with the block data forces 102
    ("no09a", 1, 102, &[], 0, &[12]),
    ("no09b", 1, 86, &[], 0, &[24]),
    ("no09c", 1, 70, &[], 0, &[16]),
    ("no09d", 1, 78, &[], 0, &[8]),
    ("no09e", 1, 82, &[], 0, &[8]),
    ("no09f", 1, 82, &[], 0, &[8]),
    ("no09g", 1, 84, &[], 0, &[8]),
    ("no09h", 1, 80, &[], 0, &[8]),
    ("no10", 1, 82, &[], 40, &[8]),
    ("no11", 0, 93, &[], 32, &[48]),
];

fn table5_invariants(cat: &Catalog) -> Result<Vec<(&'static str, TcsInvariants)>, String> {
    TABLE5
        .iter()
        .map(|(file, ..)| {
            compute_invariants(&load_config(file, cat))
                .map(|inv| (*file, inv))
                .map_err(|e| format!("{file}: {e}"))
        })
        .collect()
}

fn table5() -> Outcome {
    let cat = catalog();
    let computed = table5_invariants(&cat)?;
    for ((file, b2, b3, th3, a0, p1), (_, inv)) in TABLE5.iter().zip(&computed) {
        let got = (
            inv.b2,
            inv.b3,
            inv.tor_h3.clone(),
            inv.a0,
            inv.div_p1.values(),
        );
        let want = (*b2, *b3, ints(th3), *a0, p1.to_vec());
        ensure(got == want, || {
            format!("{file}: got {got:?}, want {want:?}")
        })?;
    }
    Ok(format!(
        "{} configs match; No 9a checked at b3 = 102",
        TABLE5.len()
    ))
}

fn pushout_failure() -> Outcome {
    let n = Lattice::from_i64(&[[4, 1], [1, -2]]);
    let x = ints(&[-1, 4]);
    ensure(n.norm(&x) == int(-36), || {
        "R vector does not have norm -36".into()
    })?;
    match orthogonal_pushout(&PushoutSpec::rank_one(n.clone(), &x, n, &x)) {
        Err(GlueError::IntegralityFailure { value, .. }) if value == rat(-9, 4) => {
            Ok("IntegralityFailure, pairing -9/4".into())
        }
        other => Err(format!("expected IntegralityFailure(-9/4), got {other:?}")),
    }
}

fn explicit_embedding(
    name: &str,
    gram: IntMat,
    image: IntMat,
    slots: usize,
    cotorsion: (usize, &[i64]),
) -> Result<(), String> {
    let target = Lattice::direct_sum(&vec![&u(); slots]);
    ensure(image.congruence(target.gram()) == gram, || {
        format!("{name}: not isometric")
    })?;
    let q = cokernel(&image);
    ensure(
        (q.free_rank, q.torsion.clone()) == (cotorsion.0, ints(cotorsion.1)),
        || format!("{name}: cotorsion {q:?}"),
    )?;
    for half in [0..2, 2..4] {
        let rows = image.select_rows(&half.collect::<Vec<_>>());
        let s = Sublattice::new(target.clone(), rows).map_err(|e| e.to_string())?;
        ensure(s.is_primitive(), || {
            format!("{name}: a block is not primitive")
        })?;
    }
    Ok(())
}

fn explicit_embeddings() -> Outcome {
    explicit_embedding(
        "N0 + N0 into 3U",
        builtin_two_n0_gram(),
        builtin_two_n0_matrix(),
        3,
        (2, &[8]),
    )?;
    explicit_embedding(
        "B into 2U",
        builtin_large_cotorsion_gram(),
        builtin_large_cotorsion_matrix(),
        2,
        (0, &[4, 4]),
    )?;
    let cat = catalog();
    for (file, glue) in [("no07", ints(&[8])), ("no08", ints(&[4, 4]))] {
        let inv = compute_invariants(&load_config(file, &cat)).map_err(|e| e.to_string())?;
        ensure(inv.tor_h3 == glue, || {
            format!("{file}: Tor H3 = {:?}", inv.tor_h3)
        })?;
    }
    Ok("Z^2 + Z/8 in 3U, (Z/4)^2 in 2U, all blocks primitive".into())
}

fn burkhardt() -> Outcome {
    let cat = catalog();
    let burkhardt = cat.get("Ex7.7").map_err(|e| e.to_string())?;
    let t = Sublattice::new(
        k3(),
        burkhardt
            .complement_basis
            .clone()
            .ok_or("no complement basis")?,
    )
    .map_err(|e| e.to_string())?
    .lattice();
    let norm = |id: &str| {
        cat.get(id)
            .unwrap()
            .n_gram
            .as_ref()
            .unwrap()
            .get(0, 0)
            .clone()
    };
    for id in ["7.1_2^1", "7.1_8^1", "7.1_14^1", "7.1_1^2", "7.1_4^2"] {
        let m = norm(id);
        ensure(m.mod_floor(&int(3)) == int(2), || {
            format!("{id}: norm {m} is not 2 mod 3")
        })?;
        ensure(
            mod_obstruction(&t, &m, 3).map_err(|e| e.to_string())?,
            || format!("{id}: no mod-3 obstruction"),
        )?;
        let err = build_certificate(
            burkhardt,
            cat.get(id).unwrap(),
            &MatchMode::PerpendicularPrimitive,
            &MatchOptions::default(),
        );
        ensure(
            matches!(&err, Err(e) if e.code() == "EmbeddingImpossible"),
            || format!("{id}: {err:?}"),
        )?;
    }
    let ones = [
        "7.1_4^1", "7.1_10^1", "7.1_16^1", "7.1_22^1", "7.1_2^2", "7.1_5^2", "7.1_1^4",
    ];
    let threes = ["7.1_6^1", "7.1_12^1", "7.1_18^1", "7.1_3^2", "7.1_2^3"];
    for (ids, residue, torsion) in [(&ones[..], 1, vec![]), (&threes[..], 0, ints(&[3]))] {
        for id in ids {
            ensure(norm(id).mod_floor(&int(3)) == int(residue), || {
                format!("{id}: wrong residue")
            })?;
            let cert = build_certificate(
                burkhardt,
                cat.get(id).unwrap(),
                &MatchMode::PerpendicularPrimitive,
                &MatchOptions::default(),
            )
            .map_err(|e| format!("{id}: {e}"))?;
            let inv = compute_invariants(&cert.to_config()).map_err(|e| e.to_string())?;
            ensure(inv.tor_h3 == torsion, || {
                format!("{id}: Tor H3 = {:?}", inv.tor_h3)
            })?;
        }
    }
    Ok("5 partners obstructed mod 3, 7 + 5 partners matched".into())
}

/// Saturated span of random vectors supported on `U ⊥ U ⊥ E8(−1)` (columns 0..4 and 6..14).
fn random_primitive(rng: &mut ChaCha8Rng, rank: usize) -> Option<Sublattice> {
    let cols: Vec<usize> = (0..4).chain(6..14).collect();
    let rows: Vec<Vec<Int>> = (0..rank)
        .map(|_| {
            let mut v = vec![Int::zero(); 22];
            for &c in &cols {
                v[c] = int(rng.gen_range(-2..=2));
            }
            v
        })
        .collect();
    let m = IntMat::from_rows(rows, 22).ok()?;
    let s = Sublattice::generated_by(k3(), &m).saturation();
    (s.rank() == rank && s.lattice().is_nondegenerate()).then_some(s)
}

fn synthetic_block(template: &BlockRecord, id: String, s: &Sublattice) -> BlockRecord {
    BlockRecord {
        id,
        rank: s.rank(),
        n_gram: Some(s.gram()),
        l_embedding: None,
        complement_basis: None,
        ..template.clone()
    }
}

fn random_configs(n: usize) -> Vec<GluingConfig> {
    let template = catalog().get("7.1_4^1").unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    while out.len() < n {
        let (rp, rm) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (Some(p), Some(m)) = (
            random_primitive(&mut rng, rp),
            random_primitive(&mut rng, rm),
        ) else {
            continue;
        };
        let k = out.len();
        let mut cfg = GluingConfig::new(
            synthetic_block(&template, format!("random{k}+"), &p),
            synthetic_block(&template, format!("random{k}-"), &m),
            p.basis().clone(),
            m.basis().clone(),
        )
        .expect("saturated spans are primitive and isometric");
        if !cfg.is_perpendicular() {
            cfg.mode = GluingMode::Handcrafted;
        }
        out.push(cfg);
    }
    out
}

fn determinantal_snf(a: &IntMat) -> Vec<Int> {
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        (0u32..8)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..3).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    };
    let mut out = Vec::new();
    let mut previous = Int::one();
    for k in 1..=3 {
        let dk = subsets(k)
            .iter()
            .flat_map(|r| {
                subsets(k)
                    .into_iter()
                    .map(move |c| a.select_rows(r).select_cols(&c).det())
            })
            .fold(Int::zero(), |g, x| g.gcd(&x));
        if dk.is_zero() {
            break;
        }
        out.push(&dk / &previous);
        previous = dk;
    }
    out.resize(3, Int::zero());
    out
}

fn same_discriminant(n: &Sublattice) -> Result<(), String> {
    let dn = DiscGroup::of(&n.lattice()).map_err(|e| e.to_string())?;
    let dt = DiscGroup::of(&n.orthogonal_complement().lattice()).map_err(|e| e.to_string())?;
    ensure(dn.invariant_factors == dt.invariant_factors, || {
        format!("{:?} vs {:?}", dn.invariant_factors, dt.invariant_factors)
    })
}

fn invariant_suites() -> Outcome {
    let start = Instant::now();
    let cat = catalog();

    let random = random_configs(RANDOM_CONFIGS);
    let mut computed = Vec::new();
    for cfg in &random {
        computed.push(compute_invariants(cfg).map_err(|e| format!("(a) {}: {e}", cfg.label))?);
    }
    let table5 = table5_invariants(&cat)?;
    computed.extend(table5.iter().map(|(_, inv)| inv.clone()));

    for inv in &computed {
        ensure(inv.b3 == inv.b4, || {
            format!("(b) {}: b3 = {}, b4 = {}", inv.label, inv.b3, inv.b4)
        })?;
        for v in inv.div_p1.values() {
            ensure(ADMISSIBLE_DIV_P1.contains(&v) && v % 4 == 0, || {
                format!("(c) {}: div p1 = {v}", inv.label)
            })?;
        }
    }

    for (file, inv) in &table5 {
        let cfg = load_config(file, &cat);
        let rk_k = (cfg.plus.rk_k + cfg.minus.rk_k) as usize;
        let predicted =
            23 + 2 * rk_k + (cfg.plus.b3_z.unwrap_or(0) + cfg.minus.b3_z.unwrap_or(0)) as usize;
        if *file == "no11" {
            ensure(
                !inv.betti_identity_holds && predicted - inv.b2 == 95 && inv.b3 == 93,
                || format!("(d) no11: b3 = {}", inv.b3),
            )?;
        } else {
            ensure(inv.betti_identity_holds, || {
                format!("(d) {file}: identity fails")
            })?;
        }
    }

    let mut embeddings = 0;
    for rec in cat.records() {
        if let Some(e) = &rec.l_embedding {
            same_discriminant(&Sublattice::new(k3(), e.clone()).map_err(|e| e.to_string())?)
                .map_err(|e| format!("(e) {}: {e}", rec.id))?;
            embeddings += 1;
        }
    }
    for (file, _) in &table5 {
        let cfg = load_config(file, &cat);
        for n in [cfg.n_plus(), cfg.n_minus()] {
            same_discriminant(&n).map_err(|e| format!("(e) {file}: {e}"))?;
            embeddings += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for _ in 0..SNF_SAMPLES {
        let a = IntMat::from_rows(
            (0..3)
                .map(|_| (0..3).map(|_| int(rng.gen_range(-2..=2))).collect())
                .collect(),
            3,
        )
        .unwrap();
        let got: Vec<Int> = snf(&a).diagonal().iter().map(|x| x.abs()).collect();
        let want = determinantal_snf(&a);
        ensure(got == want, || {
            format!("(f) SNF of {a:?}: {got:?} vs {want:?}")
        })?;
    }

    within(INVARIANT_SUITE_BUDGET, start)?;
    Ok(format!(
        "{} configs, {embeddings} primitive embeddings, {SNF_SAMPLES} SNF samples in {:.2?}",
        computed.len(),
        start.elapsed()
    ))
}

fn g2_suite() -> Outcome {
    let start = Instant::now();
    let report = verify_identity_suite(100, 0);
    ensure(report.passed(), || report.to_string())?;
    let calib = report
        .checks
        .iter()
        .find(|c| c.name == "associator_calibration")
        .ok_or("missing identity check")?;
    ensure(calib.cases == 343 + 100, || {
        format!("{} identity cases", calib.cases)
    })?;
    let m = metric_from_3form(&phi0().scale(&rat(8, 1))).ok_or("8 phi0 is degenerate")?;
    let g = m.metric().ok_or("metric of 8 phi0 is not rational")?;
    ensure(g.matrix() == &RatMat::identity(7).scale(&rat(4, 1)), || {
        "g of 8 phi0 is not 4 id".into()
    })?;
    within(G2_BUDGET, start)?;
    Ok(format!(
        "{} checks in {:.2?}",
        report.checks.len(),
        start.elapsed()
    ))
}

/// Independent recount of `geography general`: plain loops, `ℓ` from the Gram
/// matrix of the direct sum when both lattices are known.
fn brute_force(cat: &Catalog, filter: PairFilter) -> GeographyReport {
    let recs = cat.records();
    let mut rows: BTreeMap<u64, (u64, [u64; 6])> = BTreeMap::new();
    let mut report = GeographyReport::default();
    let mut types = std::collections::BTreeSet::new();
    for i in 0..recs.len() {
        for j in i..recs.len() {
            let (a, b) = (&recs[i], &recs[j]);
            let keep = match filter {
                PairFilter::None => true,
                PairFilter::Rank11 => a.rank + b.rank <= 11,
                PairFilter::RankEll22 => ell_direct(a, b).is_some_and(|l| a.rank + b.rank + l < 22),
            };
            if !keep {
                continue;
            }
            let (Some(za), Some(zb)) = (a.b3_z, b.b3_z) else {
                report.skipped_no_b3 += 1;
                continue;
            };
            report.total_pairs += 1;
            let key = za + zb + a.rk_k + b.rk_k;
            let row = rows.entry(key).or_insert((0, [0; 6]));
            row.0 += 1;
            let best = a
                .div_c2
                .iter()
                .flat_map(|x| b.div_c2.iter().map(move |y| 2 * x.gcd(y)))
                .max();
            match best {
                Some(v) => {
                    types.insert((key, v));
                    if let Some(c) = DIV_COLUMNS.iter().position(|d| *d == v) {
                        row.1[c] += 1;
                        report.column_totals[c] += 1;
                    }
                }
                None => report.unknown_div_p1 += 1,
            }
        }
    }
    report.distinct_b = rows.len();
    report.distinct_types = types.len();
    report.rows = rows
        .into_iter()
        .map(|(b, (count, by_div))| tcs_lattice::matching::GeographyRow { b, count, by_div })
        .collect();
    report
}

fn ell_direct(a: &BlockRecord, b: &BlockRecord) -> Option<usize> {
    match (a.try_lattice(), b.try_lattice()) {
        (Some(x), Some(y)) => Lattice::direct_sum(&[&x, &y]).ell().ok(),
        _ => {
            // ℓ is the largest p-rank of the combined cyclic factors
            let mut f = disc_factors(a)?;
            f.extend(disc_factors(b)?);
            let primes: Vec<u64> = (2..=f.iter().copied().max().unwrap_or(1))
                .filter(|p| (2..*p).all(|d| p % d != 0))
                .collect();
            Some(
                primes
                    .iter()
                    .map(|p| f.iter().filter(|x| *x % p == 0).count())
                    .max()
                    .unwrap_or(0),
            )
        }
    }
}

fn geography_oracle() -> Outcome {
    let cat = catalog();
    for filter in [PairFilter::None, PairFilter::Rank11, PairFilter::RankEll22] {
        let got = geography_general(&cat, filter, Resolutions::Best);
        let want = brute_force(&cat, filter);
        ensure(got == want, || format!("{filter:?}: {got:?} vs {want:?}"))?;
    }
    Ok(format!(
        "{} records, 3 filters agree with the brute-force count",
        cat.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("rank-one census", census),
        ("Table 5 golden values", table5),
        ("non-integral pushout", pushout_failure),
        ("explicit embeddings of No 7 and No 8", explicit_embeddings),
        ("Burkhardt matchability", burkhardt),
        ("invariant suites", invariant_suites),
        ("G2 identity suite", g2_suite),
        ("geography against a brute-force oracle", geography_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => println!("PASS {} {name}: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {} {name}: panicked", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
