//! Builds a matching certificate for every gluing of the Table 5 census and
//! writes the resulting configs, one file per entry.
//!
//! Usage: `cargo run --example table5_configs [OUTPUT_DIR]`
//! (default: the crate's `examples/configs`).

use std::path::PathBuf;

use tcs_lattice::blocks::{BlockRecord, Catalog};
use tcs_lattice::exactalg::{int, Int, IntMat};
use tcs_lattice::lattice::{Lattice, Sublattice};
use tcs_lattice::matching::{build_certificate, MatchMode, MatchOptions};
use tcs_lattice::tcs::{compute_invariants, report_tsv_header, report_tsv_row, GluingConfig};

struct Entry {
    file: &'static str,
    label: &'static str,
    plus: &'static str,
    minus: &'static str,
    mode: Recipe,
    div_c2_mod_image: Option<(u64, u64)>,
}

enum Recipe {
    Perpendicular,
    Overlattice(Vec<i64>),
    /// Glue along `A⊥` in both blocks.
    AlongAPerp,
    /// Glue along the given vector of both copies of the same block.
    AlongVector(Vec<i64>),
    NonOrthogonalQuartics,
}

fn entry(
    file: &'static str,
    label: &'static str,
    plus: &'static str,
    minus: &'static str,
    mode: Recipe,
) -> Entry {
    Entry {
        file,
        label,
        plus,
        minus,
        mode,
        div_c2_mod_image: None,
    }
}

fn entries() -> Vec<Entry> {
    use Recipe::*;
    let mut v = vec![
        entry("no01", "No 1", "7.1_4^1", "7.1_4^1", Perpendicular),
        entry(
            "no01-overlattice",
            "No 1 (index 2)",
            "7.1_4^1",
            "7.1_4^1",
            Overlattice(vec![2]),
        ),
        entry("no02a", "No 2a", "Ex7.3", "Ex7.3", Perpendicular),
        entry("no02b", "No 2b", "Ex7.3", "Ex7.4", Perpendicular),
        entry("no02c", "No 2c", "Ex7.3", "Ex7.5", Perpendicular),
        entry("no02d", "No 2d", "Ex7.3", "Ex7.6", Perpendicular),
        entry("no03", "No 3", "7.1_4^1", "Ex7.8", Perpendicular),
        entry("no04", "No 4", "Ex7.12", "Ex7.10", Perpendicular),
    ];
    let five = [
        ("a", "7.1_4^1"),
        ("b", "7.1_10^1"),
        ("c", "7.1_16^1"),
        ("d", "7.1_22^1"),
        ("e", "7.1_2^2"),
        ("f", "7.1_5^2"),
        ("g", "7.1_1^4"),
    ];
    let six = [
        ("a", "7.1_6^1"),
        ("b", "7.1_12^1"),
        ("c", "7.1_18^1"),
        ("d", "7.1_3^2"),
        ("e", "7.1_2^3"),
    ];
    for (n, list) in [("5", &five[..]), ("6", &six[..])] {
        for (s, partner) in list {
            let file: &'static str = Box::leak(format!("no0{n}{s}").into_boxed_str());
            let label: &'static str = Box::leak(format!("No {n}{s}").into_boxed_str());
            v.push(entry(file, label, "Ex7.7", partner, Perpendicular));
        }
    }
    v.push(entry(
        "no07",
        "No 7",
        "Ex7.11",
        "Ex7.11",
        Overlattice(vec![8]),
    ));
    v.push(entry(
        "no08",
        "No 8",
        "Ex7.6",
        "Ex7.6",
        Overlattice(vec![4, 4]),
    ));
    for (s, a, b) in [
        ("a", "MM2-2", "MM2-24"),
        ("b", "MM2-6", "MM2-6"),
        ("c", "MM2-10", "MM2-10"),
        ("d", "MM2-12", "MM2-12"),
        ("e", "MM2-21", "MM2-21"),
        ("f", "MM2-6", "MM2-12"),
        ("g", "MM2-6", "MM2-21"),
        ("h", "MM2-12", "MM2-21"),
    ] {
        let file: &'static str = Box::leak(format!("no09{s}").into_boxed_str());
        let label: &'static str = Box::leak(format!("No 9{s}").into_boxed_str());
        v.push(entry(file, label, a, b, AlongAPerp));
    }
    // A - C1 - C2 in the basis C1, C2, A
    let mut ten = entry(
        "no10",
        "No 10",
        "Ex7.9",
        "Ex7.9",
        AlongVector(vec![-1, -1, 1]),
    );
    ten.div_c2_mod_image = Some((4, 4));
    v.push(ten);
    let mut eleven = entry("no11", "No 11", "Ex7.6", "Ex7.6", NonOrthogonalQuartics);
    eleven.div_c2_mod_image = Some((24, 24));
    v.push(eleven);
    v
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

/// Primitive generator of `A⊥` inside a rank-two block.
fn a_perp(rec: &BlockRecord) -> Vec<Int> {
    let n = rec.lattice();
    let a = IntMat::row_vector(&rec.a_class().expect("rank-two blocks record A"));
    let perp = Sublattice::new(n, a)
        .expect("A is nonzero")
        .orthogonal_complement();
    perp.basis().row(0).to_vec()
}

/// `W` with basis `H₊, E₊, H₋, E₋` where `H = A + E`, `E₊·E₋ = 1` and all
/// other cross pairings vanish; `H±` is orthogonal to the other block.
fn non_orthogonal_quartics() -> MatchMode {
    let w = Lattice::from_i64(&[[12, 4, 0, 0], [4, 0, 0, 1], [0, 0, 12, 4], [0, 1, 4, 0]]);
    // block basis (E, A) with A = H - E
    let plus_coords = IntMat::from_i64(&[[0, 1, 0, 0], [1, -1, 0, 0]]);
    let minus_coords = IntMat::from_i64(&[[0, 0, 0, 1], [0, 0, 1, -1]]);
    let mut rows = vec![vec![0i64; 22]; 4];
    // H+ = e1 + 6f1, E+ = 4f1 + e2, H- = e3 + 6f3, E- = f2 + 4f3
    rows[0][0] = 1;
    rows[0][1] = 6;
    rows[1][1] = 4;
    rows[1][2] = 1;
    rows[2][4] = 1;
    rows[2][5] = 6;
    rows[3][3] = 1;
    rows[3][5] = 4;
    let embedding = IntMat::from_i64(&rows);
    MatchMode::Handcrafted {
        w,
        plus_coords,
        minus_coords,
        embedding,
    }
}

fn config_for(cat: &Catalog, e: &Entry) -> GluingConfig {
    let plus = cat.get(e.plus).expect("bundled block");
    let minus = cat.get(e.minus).expect("bundled block");
    let mut opts = MatchOptions::default();
    let mode = match &e.mode {
        Recipe::Perpendicular => MatchMode::PerpendicularPrimitive,
        Recipe::Overlattice(t) => MatchMode::PerpendicularOverlattice { glue_type: ints(t) },
        Recipe::AlongAPerp => {
            let (xp, xm) = (a_perp(plus), a_perp(minus));
            MatchMode::orthogonal_rank_one(&plus.lattice(), &xp, &xm)
        }
        Recipe::AlongVector(x) => {
            // the ample cone meets R⊥ here: A + λ(C2 − C1) is ample for small λ > 0
            opts.ample_cone_asserted = true;
            MatchMode::orthogonal_rank_one(&plus.lattice(), &ints(x), &ints(x))
        }
        Recipe::NonOrthogonalQuartics => {
            // projective models of the generic polarised K3s are checked by hand
            opts.ample_cone_asserted = true;
            non_orthogonal_quartics()
        }
    };
    let cert = build_certificate(plus, minus, &mode, &opts)
        .unwrap_or_else(|err| panic!("{}: {err}", e.label));
    let mut cfg = cert.to_config();
    cfg.label = e.label.to_string();
    cfg.div_c2_mod_image = e.div_c2_mod_image;
    cfg
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs"));
    std::fs::create_dir_all(&out).expect("create output directory");
    let cat = Catalog::bundled().expect("bundled catalog");
    println!("{}", report_tsv_header());
    for e in entries() {
        let cfg = config_for(&cat, &e);
        let inv = compute_invariants(&cfg).expect("config is valid");
        println!("{}", report_tsv_row(&inv));
        let text = format!("# {}: {} x {}\n{}", e.label, e.plus, e.minus, cfg.to_text());
        // round trip through the parser before writing
        assert_eq!(GluingConfig::parse(&text, &cat).expect("parses"), cfg);
        std::fs::write(out.join(format!("{}.cfg", e.file)), text).expect("write config");
    }
}
