//! Topological invariants of a twisted connected sum from its lattice-level
//! gluing data, with the 2-connected classification and self-checks.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::blocks::{
    gcd_u64, parse_records, BlockRecord, Catalog, CatalogError, RawRecord, SCHEMA_VERSION,
};
use crate::exactalg::{rat_mod, snf, solve_integer, unimodular_inverse, vec_mat, Int, IntMat, Rat};
use crate::lattice::{coker_map, intersect, k3, sum, GroupStructure, Sublattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TcsError {
    #[error(transparent)]
    Config(#[from] CatalogError),
    #[error("block {0} has no Gram matrix")]
    Gramless(String),
    #[error("no embedding given for the {0} block and the catalog records none")]
    MissingEmbedding(Side),
    #[error("{side} embedding has shape {rows}x{cols}, expected {expected}x22")]
    EmbeddingShape {
        side: Side,
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("{0} embedding is not isometric to the block's polarising lattice")]
    NotIsometric(Side),
    #[error("{0} embedding is not primitive in the K3 lattice")]
    NotPrimitive(Side),
    #[error("resolution choice {value} for the {side} block is not one of {allowed:?}")]
    ResolutionChoice {
        side: Side,
        value: u64,
        allowed: Vec<u64>,
    },
    #[error("the two computations of {group} disagree: {first} vs {second}")]
    RouteMismatch {
        group: &'static str,
        first: GroupStructure,
        second: GroupStructure,
    },
}

/// Which of the two building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

/// How the two polarising lattices were glued; only affects diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum GluingMode {
    #[default]
    Perpendicular,
    Overlattice,
    Orthogonal,
    Handcrafted,
}

impl GluingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            GluingMode::Perpendicular => "perpendicular",
            GluingMode::Overlattice => "overlattice",
            GluingMode::Orthogonal => "orthogonal",
            GluingMode::Handcrafted => "handcrafted",
        }
    }
}

impl FromStr for GluingMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "perpendicular" | "perp" => Ok(GluingMode::Perpendicular),
            "overlattice" | "perp-over" => Ok(GluingMode::Overlattice),
            "orthogonal" | "orth" => Ok(GluingMode::Orthogonal),
            "handcrafted" => Ok(GluingMode::Handcrafted),
            other => Err(format!("unknown gluing mode `{other}`")),
        }
    }
}

impl fmt::Display for GluingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two blocks together with explicit images of their polarising lattices in
/// the K3 lattice. Embedding rows are in the coordinates of [`k3`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingConfig {
    pub label: String,
    pub mode: GluingMode,
    pub plus: BlockRecord,
    pub minus: BlockRecord,
    pub emb_plus: IntMat,
    pub emb_minus: IntMat,
    pub resolution_plus: Option<u64>,
    pub resolution_minus: Option<u64>,
    /// `div c₂(Z±)` modulo the image of the other block's lattice.
    pub div_c2_mod_image: Option<(u64, u64)>,
    pub ample_cone_asserted: bool,
    pub notes: String,
}

const CONFIG_KEYS: &[&str] = &[
    "schema",
    "label",
    "mode",
    "block_plus",
    "block_minus",
    "emb_plus",
    "emb_minus",
    "resolution_plus",
    "resolution_minus",
    "div_c2_mod_image",
    "ample_cone_asserted",
    "notes",
];

impl GluingConfig {
    /// Builds a config from explicit data and checks it.
    pub fn new(
        plus: BlockRecord,
        minus: BlockRecord,
        emb_plus: IntMat,
        emb_minus: IntMat,
    ) -> Result<Self, TcsError> {
        let cfg = GluingConfig {
            label: format!("{} x {}", plus.id, minus.id),
            mode: GluingMode::Perpendicular,
            plus,
            minus,
            emb_plus,
            emb_minus,
            resolution_plus: None,
            resolution_minus: None,
            div_c2_mod_image: None,
            ample_cone_asserted: false,
            notes: String::new(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    /// Parses a config file: one `key = value` record, block ids resolved in `cat`.
    pub fn parse(text: &str, cat: &Catalog) -> Result<Self, TcsError> {
        let records = parse_records(text)?;
        let raw = match records.as_slice() {
            [r] => r,
            [] => {
                return Err(CatalogError::Parse {
                    line: 1,
                    msg: "empty config".into(),
                }
                .into())
            }
            [_, r, ..] => {
                return Err(CatalogError::Parse {
                    line: r.line,
                    msg: "a config holds exactly one record".into(),
                }
                .into())
            }
        };
        Self::from_raw(raw, cat)
    }

    pub fn load(path: impl AsRef<std::path::Path>, cat: &Catalog) -> Result<Self, TcsError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text, cat)
    }

    fn from_raw(raw: &RawRecord, cat: &Catalog) -> Result<Self, TcsError> {
        raw.check_keys(CONFIG_KEYS)?;
        if let Some(v) = raw.parse::<u32>("schema")? {
            if v != SCHEMA_VERSION {
                return Err(CatalogError::Parse {
                    line: raw.line_of("schema"),
                    msg: format!("unsupported schema {v}"),
                }
                .into());
            }
        }
        let plus = cat.get(raw.require("block_plus")?.trim())?.clone();
        let minus = cat.get(raw.require("block_minus")?.trim())?.clone();
        let emb_plus = match raw.matrix("emb_plus")? {
            Some(m) => m,
            None => plus
                .l_embedding
                .clone()
                .ok_or(TcsError::MissingEmbedding(Side::Plus))?,
        };
        let emb_minus = match raw.matrix("emb_minus")? {
            Some(m) => m,
            None => minus
                .l_embedding
                .clone()
                .ok_or(TcsError::MissingEmbedding(Side::Minus))?,
        };
        let mode = match raw.get("mode") {
            None => GluingMode::Perpendicular,
            Some(m) => m.parse().map_err(|e: String| CatalogError::Parse {
                line: raw.line_of("mode"),
                msg: e,
            })?,
        };
        let div_c2_mod_image = match raw.u64_set("div_c2_mod_image")? {
            None => None,
            Some(v) if v.len() == 2 => Some((v[0], v[1])),
            Some(_) => {
                return Err(CatalogError::Parse {
                    line: raw.line_of("div_c2_mod_image"),
                    msg: "`div_c2_mod_image` takes two values".into(),
                }
                .into())
            }
        };
        let cfg = GluingConfig {
            label: raw
                .get("label")
                .map(|s| s.trim().to_string())
                .unwrap_or_else(|| format!("{} x {}", plus.id, minus.id)),
            mode,
            plus,
            minus,
            emb_plus,
            emb_minus,
            resolution_plus: raw.parse("resolution_plus")?,
            resolution_minus: raw.parse("resolution_minus")?,
            div_c2_mod_image,
            ample_cone_asserted: raw.bool("ample_cone_asserted")?.unwrap_or(false),
            notes: raw.get("notes").unwrap_or("").trim().to_string(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn side(&self, side: Side) -> (&BlockRecord, &IntMat, Option<u64>) {
        match side {
            Side::Plus => (&self.plus, &self.emb_plus, self.resolution_plus),
            Side::Minus => (&self.minus, &self.emb_minus, self.resolution_minus),
        }
    }

    /// Checks shapes, isometry, primitivity and resolution choices.
    pub fn check(&self) -> Result<(), TcsError> {
        let l = k3();
        for side in [Side::Plus, Side::Minus] {
            let (block, emb, res) = self.side(side);
            let gram = block
                .n_gram
                .as_ref()
                .ok_or_else(|| TcsError::Gramless(block.id.clone()))?;
            if emb.rows() != block.rank || emb.cols() != l.rank() {
                return Err(TcsError::EmbeddingShape {
                    side,
                    rows: emb.rows(),
                    cols: emb.cols(),
                    expected: block.rank,
                });
            }
            if &emb.congruence(l.gram()) != gram {
                return Err(TcsError::NotIsometric(side));
            }
            let s = Sublattice::new(l.clone(), emb.clone())
                .map_err(|_| TcsError::NotIsometric(side))?;
            if !s.is_primitive() {
                return Err(TcsError::NotPrimitive(side));
            }
            if let Some(v) = res {
                if !block.div_c2.contains(&v) {
                    return Err(TcsError::ResolutionChoice {
                        side,
                        value: v,
                        allowed: block.div_c2.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n_plus(&self) -> Sublattice {
        Sublattice::new(k3(), self.emb_plus.clone()).expect("checked config")
    }

    pub fn n_minus(&self) -> Sublattice {
        Sublattice::new(k3(), self.emb_minus.clone()).expect("checked config")
    }

    /// Whether `N₊ ⊥ N₋` inside the K3 lattice.
    pub fn is_perpendicular(&self) -> bool {
        self.emb_plus
            .mul(k3().gram())
            .mul(&self.emb_minus.transpose())
            .is_zero()
    }

    /// Serializes back to the config text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema = {SCHEMA_VERSION}");
        let _ = writeln!(s, "label = {}", self.label);
        let _ = writeln!(s, "mode = {}", self.mode);
        let _ = writeln!(s, "block_plus = {}", self.plus.id);
        let _ = writeln!(s, "block_minus = {}", self.minus.id);
        let _ = writeln!(s, "emb_plus = {}", matrix_text(&self.emb_plus));
        let _ = writeln!(s, "emb_minus = {}", matrix_text(&self.emb_minus));
        if let Some(v) = self.resolution_plus {
            let _ = writeln!(s, "resolution_plus = {v}");
        }
        if let Some(v) = self.resolution_minus {
            let _ = writeln!(s, "resolution_minus = {v}");
        }
        if let Some((a, b)) = self.div_c2_mod_image {
            let _ = writeln!(s, "div_c2_mod_image = {a}, {b}");
        }
        let _ = writeln!(s, "ample_cone_asserted = {}", self.ample_cone_asserted);
        if !self.notes.is_empty() {
            let _ = writeln!(s, "notes = {}", self.notes);
        }
        s
    }
}

/// One row per line so that 22-column embeddings stay readable.
fn matrix_text(m: &IntMat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            format!(
                "[{}]",
                m.row(i)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    format!("[{}]", rows.join(",\n  "))
}

/// Divisibility of the first Pontrjagin class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivP1 {
    /// `mod_torsion` is set when `H⁴` has torsion and the value is taken modulo it.
    Value {
        value: u64,
        mod_torsion: bool,
    },
    /// No resolution was selected: one value per selection, sorted and deduplicated.
    Choices {
        values: Vec<u64>,
        mod_torsion: bool,
    },
    InsufficientC2Data {
        reason: String,
    },
}

impl DivP1 {
    pub fn value(&self) -> Option<u64> {
        match self {
            DivP1::Value { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// Every value this record can take.
    pub fn values(&self) -> Vec<u64> {
        match self {
            DivP1::Value { value, .. } => vec![*value],
            DivP1::Choices { values, .. } => values.clone(),
            DivP1::InsufficientC2Data { .. } => vec![],
        }
    }

    pub fn mod_torsion(&self) -> bool {
        matches!(
            self,
            DivP1::Value {
                mod_torsion: true,
                ..
            } | DivP1::Choices {
                mod_torsion: true,
                ..
            }
        )
    }
}

impl fmt::Display for DivP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivP1::Value { value, .. } => write!(f, "{value}"),
            DivP1::Choices { values, .. } => {
                write!(
                    f,
                    "{}",
                    values
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
            DivP1::InsufficientC2Data { .. } => write!(f, "insufficient"),
        }
    }
}

/// The values `div p₁` can take for a closed 2-connected 7-manifold of this type.
pub const ADMISSIBLE_DIV_P1: [u64; 6] = [4, 8, 12, 16, 24, 48];

/// Almost-diffeomorphism data of a 2-connected, torsion-free result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub almost_diffeo: (usize, u64),
    pub diffeo_class_count: u8,
    pub homotopy: (usize, u64),
    pub realization: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("classification not applicable: {reason}")]
pub struct NotApplicable {
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcsInvariants {
    pub label: String,
    pub block_plus: String,
    pub block_minus: String,
    pub mode: GluingMode,
    pub perpendicular: bool,
    pub pi1_trivial: bool,
    pub b2: usize,
    pub b3: usize,
    pub b4: usize,
    pub tor_h3: Vec<Int>,
    pub tor_h4_plus: Vec<Int>,
    pub tor_h4_minus: Vec<Int>,
    /// `coker(N₋ → N₊*)`: how the image of `N₋` sits in the dual of `N₊`.
    pub image_coker_plus: GroupStructure,
    /// `coker(N₊ → N₋*)`.
    pub image_coker_minus: GroupStructure,
    pub rk_intersection: usize,
    pub rk_sum: usize,
    pub div_p1: DivP1,
    pub two_connected: bool,
    pub h4_torsion_free: bool,
    pub a0: u64,
    /// `b² + b³ = b³(Z₊) + b³(Z₋) + 2rk K₊ + 2rk K₋ + 23`, which holds for orthogonal gluing.
    pub betti_identity_holds: bool,
    pub classification: Result<Classification, NotApplicable>,
}

impl TcsInvariants {
    /// All torsion of `H⁴`, both summands.
    pub fn tor_h4(&self) -> Vec<Int> {
        let mut all = self.tor_h4_plus.clone();
        all.extend(self.tor_h4_minus.iter().cloned());
        all
    }
}

fn free_rank(s: &Sublattice) -> usize {
    s.quotient().free_rank
}

fn torsion_group(v: Vec<Int>) -> GroupStructure {
    GroupStructure {
        free_rank: 0,
        torsion: v,
    }
}

/// Checks that two computations of the same group agree.
fn agree(
    group: &'static str,
    first: GroupStructure,
    second: GroupStructure,
) -> Result<GroupStructure, TcsError> {
    if first != second {
        return Err(TcsError::RouteMismatch {
            group,
            first,
            second,
        });
    }
    Ok(first)
}

/// The complements and sums the invariant formulas need.
struct Pieces {
    n_plus: Sublattice,
    n_minus: Sublattice,
    t_plus: Sublattice,
    t_minus: Sublattice,
}

impl Pieces {
    fn of(cfg: &GluingConfig) -> Self {
        let (n_plus, n_minus) = (cfg.n_plus(), cfg.n_minus());
        let (t_plus, t_minus) = (
            n_plus.orthogonal_complement(),
            n_minus.orthogonal_complement(),
        );
        Pieces {
            n_plus,
            n_minus,
            t_plus,
            t_minus,
        }
    }
}

/// Computes the full invariant record.
pub fn compute_invariants(cfg: &GluingConfig) -> Result<TcsInvariants, TcsError> {
    cfg.check()?;
    let Pieces {
        n_plus,
        n_minus,
        t_plus,
        t_minus,
    } = Pieces::of(cfg);
    let (p, m) = (&cfg.plus, &cfg.minus);
    let b3z = p.b3_z.unwrap_or(0) as usize + m.b3_z.unwrap_or(0) as usize;
    let rk_k = (p.rk_k + m.rk_k) as usize;

    let nn_cap = intersect(&n_plus, &n_minus);
    let nn_sum = sum(&n_plus, &n_minus);
    let b2 = nn_cap.rank() + rk_k;
    let b3 = 1
        + (22 - nn_sum.rank())
        + intersect(&n_minus, &t_plus).rank()
        + intersect(&n_plus, &t_minus).rank()
        + b3z
        + rk_k;
    let minus_t_plus = sum(&n_minus, &t_plus);
    let plus_t_minus = sum(&n_plus, &t_minus);
    let b4 = 1
        + intersect(&t_plus, &t_minus).rank()
        + free_rank(&minus_t_plus)
        + free_rank(&plus_t_minus)
        + b3z
        + rk_k;

    // L/(N₊+N₋) ≅ coker(N₊ → T₋*) ≅ coker(N₋ → T₊*) as full groups
    let h3 = agree(
        "L/(N+ + N-)",
        nn_sum.quotient(),
        coker_map(&n_plus, &t_minus),
    )?;
    agree("L/(N+ + N-)", h3.clone(), coker_map(&n_minus, &t_plus))?;
    let image_coker_plus = coker_map(&n_minus, &n_plus);
    let image_coker_minus = coker_map(&n_plus, &n_minus);
    let h4p = agree(
        "L/(N- + T+)",
        minus_t_plus.quotient(),
        image_coker_plus.clone(),
    )?;
    agree("L/(N- + T+)", h4p.clone(), coker_map(&t_plus, &t_minus))?;
    let h4m = agree(
        "L/(N+ + T-)",
        plus_t_minus.quotient(),
        image_coker_minus.clone(),
    )?;
    agree("L/(N+ + T-)", h4m.clone(), coker_map(&t_minus, &t_plus))?;

    let tor_h4_free = h4p.torsion.is_empty() && h4m.torsion.is_empty();
    let perpendicular = cfg.is_perpendicular();
    let div_p1 = div_p1(cfg, perpendicular, !tor_h4_free);
    let two_connected = rk_k == 0 && nn_cap.rank() == 0 && h3.torsion.is_empty();
    let betti_identity_holds = b2 + b3 == b3z + 2 * rk_k + 23;
    let mut inv = TcsInvariants {
        label: cfg.label.clone(),
        block_plus: p.id.clone(),
        block_minus: m.id.clone(),
        mode: cfg.mode,
        perpendicular,
        pi1_trivial: true,
        b2,
        b3,
        b4,
        tor_h3: h3.torsion,
        tor_h4_plus: h4p.torsion,
        tor_h4_minus: h4m.torsion,
        image_coker_plus,
        image_coker_minus,
        rk_intersection: nn_cap.rank(),
        rk_sum: nn_sum.rank(),
        div_p1,
        two_connected,
        h4_torsion_free: tor_h4_free,
        a0: p.e_rigid + m.e_rigid,
        betti_identity_holds,
        classification: Err(NotApplicable {
            reason: String::new(),
        }),
    };
    inv.classification = classify_2connected(&inv);
    Ok(inv)
}

fn div_p1(cfg: &GluingConfig, perpendicular: bool, mod_torsion: bool) -> DivP1 {
    if perpendicular {
        let choices = |b: &BlockRecord, r: Option<u64>| match r {
            Some(v) => vec![v],
            None => b.div_c2.clone(),
        };
        let (cp, cm) = (
            choices(&cfg.plus, cfg.resolution_plus),
            choices(&cfg.minus, cfg.resolution_minus),
        );
        if cp.is_empty() || cm.is_empty() {
            let missing = if cp.is_empty() {
                &cfg.plus.id
            } else {
                &cfg.minus.id
            };
            return DivP1::InsufficientC2Data {
                reason: format!("div c2 of {missing} is not recorded"),
            };
        }
        let values: BTreeSet<u64> = cp
            .iter()
            .flat_map(|a| cm.iter().map(move |b| 2 * gcd_u64(&[*a, *b])))
            .collect();
        let values: Vec<u64> = values.into_iter().collect();
        return match values.as_slice() {
            [v] => DivP1::Value {
                value: *v,
                mod_torsion,
            },
            _ => DivP1::Choices {
                values,
                mod_torsion,
            },
        };
    }
    let image = cfg.div_c2_mod_image.or(
        match (
            cfg.mode,
            cfg.plus.div_c2_mod_aperp,
            cfg.minus.div_c2_mod_aperp,
        ) {
            // orthogonal gluing along A⊥ uses the blocks' own c₂ modulo A⊥
            (GluingMode::Orthogonal, Some(a), Some(b)) => Some((a, b)),
            _ => None,
        },
    );
    match image {
        Some((a, b)) => DivP1::Value {
            value: 2 * gcd_u64(&[a, b]),
            mod_torsion,
        },
        None => DivP1::InsufficientC2Data {
            reason: "non-perpendicular gluing needs div c2 modulo the image of the other lattice"
                .into(),
        },
    }
}

/// Almost-diffeomorphism classification of 2-connected, torsion-free results.
pub fn classify_2connected(inv: &TcsInvariants) -> Result<Classification, NotApplicable> {
    let fail = |reason: &str| {
        Err(NotApplicable {
            reason: reason.into(),
        })
    };
    if inv.b2 != 0 || !inv.two_connected {
        return fail("not 2-connected");
    }
    if !inv.h4_torsion_free {
        return fail("H4 has torsion");
    }
    let Some(d) = inv.div_p1.value() else {
        return fail("div p1 is not determined");
    };
    if d == 0 || d % 4 != 0 {
        return fail("div p1 is not a positive multiple of 4");
    }
    let k = inv.b4;
    Ok(Classification {
        almost_diffeo: (k, d),
        diffeo_class_count: if d == 16 || d == 48 { 2 } else { 1 },
        homotopy: (k, d % 48),
        realization: format!("M_{{{},0}} # {}(S3xS4)", d / 4, k - 1),
    })
}

/// One generator per nontrivial invariant factor of `L/S`, with its order.
fn quotient_generators(s: &Sublattice) -> Vec<(Vec<Int>, Int)> {
    let f = snf(s.basis());
    let vinv = unimodular_inverse(&f.v);
    f.diagonal()
        .into_iter()
        .enumerate()
        .filter(|(_, d)| *d > Int::one())
        .map(|(i, d)| (vinv.row(i).to_vec(), d))
        .collect()
}

/// `t` with `kx = n + t`, `n ∈ span(n_rows)`, `t ∈ span(t_rows)`.
fn split(k: &Int, x: &[Int], n_rows: &IntMat, t_rows: &IntMat) -> Vec<Int> {
    let kx: Vec<Int> = x.iter().map(|v| v * k).collect();
    let stacked = IntMat::vstack(&[n_rows, t_rows]).expect("same ambient rank");
    let c = solve_integer(&stacked, &kx).expect("kx lies in N + T by the choice of k");
    vec_mat(&c[n_rows.rows()..], t_rows)
}

/// Linking form on `Tor H⁴ = Tor L/(N₋+T₊) ⊕ Tor L/(N₊+T₋)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingTable {
    /// Generators of the plus summand, then the minus summand.
    pub generators: Vec<(Side, Vec<Int>, Int)>,
    /// Values in `[0, 1)`.
    pub values: Vec<Vec<Rat>>,
}

impl LinkingTable {
    pub fn plus_count(&self) -> usize {
        self.generators.iter().filter(|g| g.0 == Side::Plus).count()
    }

    /// Whether both diagonal blocks vanish, i.e. each summand is isotropic.
    pub fn is_block_antidiagonal(&self) -> bool {
        let p = self.plus_count();
        let n = self.generators.len();
        (0..n).all(|i| (0..n).all(|j| (i < p) != (j < p) || self.values[i][j].is_zero()))
    }
}

/// The torsion linking form: for `α` of order `k` write `kα = n + t` and
/// pair `⟨t, β⟩/k` modulo 1 against `β` from the other summand.
pub fn torsion_linking(cfg: &GluingConfig) -> LinkingTable {
    let Pieces {
        n_plus,
        n_minus,
        t_plus,
        t_minus,
    } = Pieces::of(cfg);
    let l = k3();
    let mut generators = Vec::new();
    let mut lifts = Vec::new();
    for (side, n, t) in [
        (Side::Plus, &n_minus, &t_plus),
        (Side::Minus, &n_plus, &t_minus),
    ] {
        for (x, k) in quotient_generators(&sum(n, t)) {
            lifts.push(split(&k, &x, n.basis(), t.basis()));
            generators.push((side, x, k));
        }
    }
    let values = generators
        .iter()
        .zip(&lifts)
        .map(|((side, _, k), t)| {
            generators
                .iter()
                .map(|(other, y, _)| {
                    // each summand is isotropic; the formula only pairs across sides
                    if other == side {
                        Rat::zero()
                    } else {
                        rat_mod(&Rat::new(l.pair(t, y), k.clone()), &Rat::one())
                    }
                })
                .collect()
        })
        .collect();
    LinkingTable { generators, values }
}

/// Result of one self-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Structural checks every computed record must pass.
pub fn sanity_suite(inv: &TcsInvariants) -> Vec<CheckResult> {
    let vals = inv.div_p1.values();
    let check = |name, passed: bool, detail: String| CheckResult {
        name,
        passed,
        detail,
    };
    vec![
        check(
            "div_p1_admissible",
            vals.iter().all(|v| ADMISSIBLE_DIV_P1.contains(v)),
            format!("div p1 = {} must lie in {{4,8,12,16,24,48}}", inv.div_p1),
        ),
        check(
            "div_p1_multiple_of_4",
            vals.iter().all(|v| v % 4 == 0),
            format!("div p1 = {}", inv.div_p1),
        ),
        check(
            "poincare_duality",
            inv.b3 == inv.b4,
            format!("b3 = {}, b4 = {}", inv.b3, inv.b4),
        ),
        check(
            "betti_identity",
            inv.betti_identity_holds || inv.mode == GluingMode::Handcrafted,
            format!("fails only for non-orthogonal gluing; mode {}", inv.mode),
        ),
        check(
            "h4_torsion_split",
            true,
            format!(
                "Tor H4 = {} + {}",
                torsion_group(inv.tor_h4_plus.clone()).torsion_string(),
                torsion_group(inv.tor_h4_minus.clone()).torsion_string()
            ),
        ),
    ]
}

fn factors(v: &[Int]) -> String {
    if v.is_empty() {
        "0".into()
    } else {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Column names of the TSV report, in order.
pub const TSV_COLUMNS: &[&str] = &[
    "label",
    "block_plus",
    "block_minus",
    "mode",
    "b2",
    "b3",
    "b4",
    "tor_h3",
    "tor_h4_plus",
    "tor_h4_minus",
    "a0",
    "div_p1",
    "div_p1_mod_torsion",
    "two_connected",
    "betti_identity",
];

/// Key-value report; field names are documented in `docs/report-format.md`.
pub fn report_kv(inv: &TcsInvariants) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("label", inv.label.clone());
    kv("block_plus", inv.block_plus.clone());
    kv("block_minus", inv.block_minus.clone());
    kv("mode", inv.mode.to_string());
    kv("perpendicular", inv.perpendicular.to_string());
    kv("pi1_trivial", inv.pi1_trivial.to_string());
    kv("b2", inv.b2.to_string());
    kv("b3", inv.b3.to_string());
    kv("b4", inv.b4.to_string());
    kv("tor_h3", factors(&inv.tor_h3));
    kv("tor_h4_plus", factors(&inv.tor_h4_plus));
    kv("tor_h4_minus", factors(&inv.tor_h4_minus));
    kv("image_coker_plus", inv.image_coker_plus.to_string());
    kv("image_coker_minus", inv.image_coker_minus.to_string());
    kv("rk_intersection", inv.rk_intersection.to_string());
    kv("rk_sum", inv.rk_sum.to_string());
    kv("a0", inv.a0.to_string());
    kv("div_p1", inv.div_p1.to_string());
    kv("div_p1_mod_torsion", inv.div_p1.mod_torsion().to_string());
    if let DivP1::InsufficientC2Data { reason } = &inv.div_p1 {
        kv("div_p1_reason", reason.clone());
    }
    kv("two_connected", inv.two_connected.to_string());
    kv("h4_torsion_free", inv.h4_torsion_free.to_string());
    kv("betti_identity", inv.betti_identity_holds.to_string());
    match &inv.classification {
        Ok(c) => {
            kv(
                "almost_diffeo",
                format!("{},{}", c.almost_diffeo.0, c.almost_diffeo.1),
            );
            kv("diffeo_class_count", c.diffeo_class_count.to_string());
            kv("homotopy", format!("{},{}", c.homotopy.0, c.homotopy.1));
            kv("realization", c.realization.clone());
        }
        Err(e) => kv("classification", format!("not applicable: {}", e.reason)),
    }
    s
}

pub fn report_tsv_header() -> String {
    TSV_COLUMNS.join("\t")
}

pub fn report_tsv_row(inv: &TcsInvariants) -> String {
    [
        inv.label.clone(),
        inv.block_plus.clone(),
        inv.block_minus.clone(),
        inv.mode.to_string(),
        inv.b2.to_string(),
        inv.b3.to_string(),
        inv.b4.to_string(),
        factors(&inv.tor_h3),
        factors(&inv.tor_h4_plus),
        factors(&inv.tor_h4_minus),
        inv.a0.to_string(),
        inv.div_p1.to_string(),
        inv.div_p1.mod_torsion().to_string(),
        inv.two_connected.to_string(),
        inv.betti_identity_holds.to_string(),
    ]
    .join("\t")
}

/// Convenience for tests and reports: small torsion factors as `i64`.
pub fn small(v: &[Int]) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("small factor"))
        .collect()
}
