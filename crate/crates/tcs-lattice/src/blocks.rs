//! The building-block catalog: a line-oriented `key = value` record format,
//! the bundled table transcriptions and their validators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

use crate::exactalg::{int, parse_int_list, Int, IntMat};
use crate::lattice::{Lattice, Signature, Sublattice};

/// Version accepted in the `schema` field of catalog headers.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("record {id} (line {line}): {invariant}")]
    Invariant {
        id: String,
        line: usize,
        invariant: String,
    },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("unknown block id {0}")]
    UnknownId(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

/// One `key = value` record with the line number of each key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawRecord {
    pub line: usize,
    pub fields: BTreeMap<String, (String, usize)>,
}

impl RawRecord {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(|(v, _)| v.as_str())
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.fields.get(key).map(|(_, l)| *l).unwrap_or(self.line)
    }

    fn err(&self, key: &str, msg: impl Into<String>) -> CatalogError {
        CatalogError::Parse {
            line: self.line_of(key),
            msg: msg.into(),
        }
    }

    pub fn require(&self, key: &str) -> Result<&str, CatalogError> {
        self.get(key).ok_or_else(|| CatalogError::Parse {
            line: self.line,
            msg: format!("missing key `{key}`"),
        })
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, CatalogError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| self.err(key, format!("invalid value for `{key}`: {v}"))),
        }
    }

    pub fn parse_required<T: FromStr>(&self, key: &str) -> Result<T, CatalogError> {
        self.parse(key)?.ok_or_else(|| CatalogError::Parse {
            line: self.line,
            msg: format!("missing key `{key}`"),
        })
    }

    pub fn matrix(&self, key: &str) -> Result<Option<IntMat>, CatalogError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => IntMat::parse(v)
                .map(Some)
                .map_err(|e| self.err(key, format!("`{key}`: {e}"))),
        }
    }

    pub fn int_list(&self, key: &str) -> Result<Option<Vec<Int>>, CatalogError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse_int_list(v)
                .map(Some)
                .map_err(|e| self.err(key, format!("`{key}`: {e}"))),
        }
    }

    /// Comma-separated unsigned integers, e.g. `2, 4`.
    pub fn u64_set(&self, key: &str) -> Result<Option<Vec<u64>>, CatalogError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v.trim().is_empty() => Ok(Some(vec![])),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| self.err(key, format!("`{key}`: expected comma-separated integers"))),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CatalogError> {
        self.parse::<bool>(key)
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CatalogError> {
        for (k, (_, line)) in &self.fields {
            if !allowed.contains(&k.as_str()) {
                return Err(CatalogError::Parse {
                    line: *line,
                    msg: format!("unknown key `{k}`"),
                });
            }
        }
        Ok(())
    }
}

/// Splits text into blank-line separated records. `#` starts a comment; a
/// value with unbalanced `[` continues on following lines until balanced.
pub fn parse_records(text: &str) -> Result<Vec<RawRecord>, CatalogError> {
    let mut out = Vec::new();
    let mut cur = RawRecord::default();
    let mut pending: Option<(String, String, usize)> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        if let Some((key, mut value, start)) = pending.take() {
            value.push(' ');
            value.push_str(line.trim());
            if depth(&value) > 0 {
                pending = Some((key, value, start));
            } else {
                insert(&mut cur, key, value, start)?;
            }
            continue;
        }
        if line.trim().is_empty() {
            if raw_line.trim().is_empty() && !cur.fields.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CatalogError::Parse {
            line: line_no,
            msg: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if key.is_empty() {
            return Err(CatalogError::Parse {
                line: line_no,
                msg: "empty key".into(),
            });
        }
        if cur.fields.is_empty() {
            cur.line = line_no;
        }
        if depth(&value) > 0 {
            pending = Some((key, value, line_no));
        } else {
            insert(&mut cur, key, value, line_no)?;
        }
    }
    if let Some((key, _, start)) = pending {
        return Err(CatalogError::Parse {
            line: start,
            msg: format!("unterminated bracket in `{key}`"),
        });
    }
    if !cur.fields.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn depth(s: &str) -> i64 {
    s.chars()
        .map(|c| match c {
            '[' => 1,
            ']' => -1,
            _ => 0,
        })
        .sum()
}

fn insert(
    rec: &mut RawRecord,
    key: String,
    value: String,
    line: usize,
) -> Result<(), CatalogError> {
    if rec.fields.contains_key(&key) {
        return Err(CatalogError::Parse {
            line,
            msg: format!("duplicate key `{key}`"),
        });
    }
    rec.fields.insert(key, (value, line));
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    FanoRank1,
    FanoRank2,
    SemifanoSmallRes,
    SemifanoCrepant,
    NongenericPencil,
    Nonsymplectic,
}

impl BlockKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BlockKind::FanoRank1 => "fano_rank1",
            BlockKind::FanoRank2 => "fano_rank2",
            BlockKind::SemifanoSmallRes => "semifano_small_res",
            BlockKind::SemifanoCrepant => "semifano_crepant",
            BlockKind::NongenericPencil => "nongeneric_pencil",
            BlockKind::Nonsymplectic => "nonsymplectic",
        }
    }

    /// Blocks built from a generic anticanonical pencil on a (semi-)Fano, which have `K = 0`.
    pub fn is_semi_fano_type(&self) -> bool {
        matches!(
            self,
            BlockKind::FanoRank1
                | BlockKind::FanoRank2
                | BlockKind::SemifanoSmallRes
                | BlockKind::SemifanoCrepant
        )
    }
}

impl FromStr for BlockKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "fano_rank1" => BlockKind::FanoRank1,
            "fano_rank2" => BlockKind::FanoRank2,
            "semifano_small_res" => BlockKind::SemifanoSmallRes,
            "semifano_crepant" => BlockKind::SemifanoCrepant,
            "nongeneric_pencil" => BlockKind::NongenericPencil,
            "nonsymplectic" => BlockKind::Nonsymplectic,
            other => return Err(format!("unknown block kind `{other}`")),
        })
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index, degree and `b³(Y)` of a Picard rank one Fano.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanoData {
    pub r: u64,
    pub d: u64,
    pub b3_y: u64,
}

/// Polytope data for a toric semi-Fano family known only through its lattice invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeData {
    pub disc_factors: Vec<u64>,
    pub resolutions: u64,
    pub genus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRecord {
    pub id: String,
    pub kind: BlockKind,
    pub rank: usize,
    /// Absent for gramless records.
    pub n_gram: Option<IntMat>,
    pub anticanonical_class: Option<Vec<Int>>,
    /// False when the stored class is a chosen ample class rather than `−K`.
    pub a_is_anticanonical: bool,
    pub minus_k3: Option<Int>,
    pub b3_z: Option<u64>,
    pub b3_y: Option<u64>,
    pub rk_k: u64,
    /// Possible values of `div c₂(Z)`, one per small resolution; empty if unknown.
    pub div_c2: Vec<u64>,
    pub div_c2_mod_aperp: Option<u64>,
    pub e_rigid: u64,
    pub ell_n: Option<usize>,
    pub fano: Option<FanoData>,
    pub polytope: Option<PolytopeData>,
    /// A fixed primitive embedding of N into the K3 lattice, when recorded.
    pub l_embedding: Option<IntMat>,
    /// A reduced basis of the complement of `l_embedding`, when recorded.
    pub complement_basis: Option<IntMat>,
    pub notes: String,
    pub source: String,
    pub line: usize,
}

const BLOCK_KEYS: &[&str] = &[
    "id",
    "kind",
    "rank",
    "n_gram",
    "anticanonical_class",
    "a_is_anticanonical",
    "minus_k3",
    "b3_Z",
    "b3_Y",
    "rk_K",
    "div_c2",
    "div_c2_mod_Aperp",
    "e_rigid",
    "ell",
    "r",
    "d",
    "gramless",
    "disc_factors",
    "resolutions",
    "genus",
    "l_embedding",
    "complement_basis",
    "notes",
];

impl BlockRecord {
    pub fn from_raw(raw: &RawRecord, source: &str) -> Result<Self, CatalogError> {
        raw.check_keys(BLOCK_KEYS)?;
        let id = raw.require("id")?.trim().to_string();
        let kind: BlockKind =
            raw.require("kind")?
                .trim()
                .parse()
                .map_err(|e: String| CatalogError::Parse {
                    line: raw.line_of("kind"),
                    msg: e,
                })?;
        let gramless = raw.bool("gramless")?.unwrap_or(false);
        let n_gram = raw.matrix("n_gram")?;
        if gramless == n_gram.is_some() {
            return Err(CatalogError::Parse {
                line: raw.line,
                msg: "exactly one of `n_gram` and `gramless = true` must be given".into(),
            });
        }
        let rank = match (&n_gram, raw.parse::<usize>("rank")?) {
            (Some(g), Some(r)) if g.rows() != r => {
                return Err(raw.err(
                    "rank",
                    format!("rank {r} disagrees with Gram size {}", g.rows()),
                ))
            }
            (Some(g), _) => g.rows(),
            (None, Some(r)) => r,
            (None, None) => return Err(raw.err("rank", "gramless records need `rank`")),
        };
        let fano = match (raw.parse::<u64>("r")?, raw.parse::<u64>("d")?) {
            (Some(r), Some(d)) => Some(FanoData {
                r,
                d,
                b3_y: raw.parse_required("b3_Y")?,
            }),
            (None, None) => None,
            _ => return Err(raw.err("r", "`r` and `d` must be given together")),
        };
        let polytope = if gramless {
            Some(PolytopeData {
                disc_factors: raw.u64_set("disc_factors")?.unwrap_or_default(),
                resolutions: raw.parse("resolutions")?.unwrap_or(0),
                genus: raw.parse_required("genus")?,
            })
        } else {
            None
        };
        Ok(BlockRecord {
            kind,
            rank,
            anticanonical_class: raw.int_list("anticanonical_class")?,
            a_is_anticanonical: raw.bool("a_is_anticanonical")?.unwrap_or(true),
            minus_k3: raw.parse::<Int>("minus_k3")?,
            b3_z: raw.parse("b3_Z")?,
            b3_y: raw.parse("b3_Y")?,
            rk_k: raw.parse("rk_K")?.unwrap_or(0),
            div_c2: raw.u64_set("div_c2")?.unwrap_or_default(),
            div_c2_mod_aperp: raw.parse("div_c2_mod_Aperp")?,
            e_rigid: raw.parse("e_rigid")?.unwrap_or(0),
            ell_n: raw.parse("ell")?,
            fano,
            polytope,
            l_embedding: raw.matrix("l_embedding")?,
            complement_basis: raw.matrix("complement_basis")?,
            notes: raw.get("notes").unwrap_or("").trim().to_string(),
            source: source.to_string(),
            line: raw.line,
            n_gram,
            id,
        })
    }

    pub fn is_gramless(&self) -> bool {
        self.n_gram.is_none()
    }

    /// The polarising lattice N; panics on gramless records.
    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.n_gram.clone().expect("record has a Gram matrix"))
            .expect("validated symmetric")
    }

    pub fn try_lattice(&self) -> Option<Lattice> {
        self.n_gram
            .clone()
            .map(|g| Lattice::new(g).expect("validated symmetric"))
    }

    /// The class A, when recorded.
    pub fn a_class(&self) -> Option<Vec<Int>> {
        self.anticanonical_class.clone()
    }

    /// `ℓ(N)`, from the Gram matrix when present.
    pub fn ell(&self) -> Option<usize> {
        match &self.n_gram {
            Some(_) => self.lattice().ell().ok(),
            None => self.ell_n,
        }
    }

    /// Single `div c₂(Z)` value, or `None` when resolution-dependent or unknown.
    pub fn unique_div_c2(&self) -> Option<u64> {
        match self.div_c2.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    fn invariant(&self, msg: impl Into<String>) -> CatalogError {
        CatalogError::Invariant {
            id: self.id.clone(),
            line: self.line,
            invariant: msg.into(),
        }
    }

    /// Checks every record-level invariant.
    pub fn validate(&self) -> Result<(), CatalogError> {
        if let Some(g) = &self.n_gram {
            let l = Lattice::new(g.clone())
                .map_err(|_| self.invariant("Gram matrix is not symmetric"))?;
            if !l.is_even() {
                return Err(self.invariant("Gram matrix has an odd diagonal entry"));
            }
            match l.signature() {
                Ok(s) if s == Signature::new(1, self.rank - 1) => {}
                Ok(s) => return Err(self.invariant(format!("signature {s} is not (1, rank-1)"))),
                Err(_) => return Err(self.invariant("Gram matrix is degenerate")),
            }
            if let Some(a) = &self.anticanonical_class {
                if a.len() != self.rank {
                    return Err(self.invariant("class A has the wrong length"));
                }
                let a2 = l.norm(a);
                if !a2.is_positive() {
                    return Err(self.invariant("A·A is not positive"));
                }
                if self.a_is_anticanonical {
                    if let Some(k3) = &self.minus_k3 {
                        if &a2 != k3 {
                            return Err(self.invariant(format!("A·A = {a2} but -K^3 = {k3}")));
                        }
                    }
                }
            }
            if let Some(emb) = &self.l_embedding {
                let k3 = crate::lattice::k3();
                if emb.rows() != self.rank || emb.cols() != 22 || &emb.congruence(k3.gram()) != g {
                    return Err(
                        self.invariant("l_embedding is not an isometry into the K3 lattice")
                    );
                }
                let n = Sublattice::new(k3.clone(), emb.clone())
                    .map_err(|_| self.invariant("l_embedding rows are dependent"))?;
                if !n.is_primitive() {
                    return Err(self.invariant("l_embedding is not primitive"));
                }
                if let Some(t) = &self.complement_basis {
                    let given = Sublattice::new(k3, t.clone())
                        .map_err(|_| self.invariant("complement_basis is malformed"))?;
                    if !given.same_module(&n.orthogonal_complement()) {
                        return Err(self.invariant(
                            "complement_basis does not span the complement of l_embedding",
                        ));
                    }
                }
            }
            if let Some(e) = self.ell_n {
                if l.ell().ok() != Some(e) {
                    return Err(self.invariant("stored ell disagrees with the discriminant group"));
                }
            }
        }
        if let Some(b) = self.b3_z {
            if b % 2 != 0 {
                return Err(self.invariant("b3_Z is odd"));
            }
        }
        if let Some(v) = self.div_c2.iter().find(|v| *v % 2 != 0) {
            return Err(self.invariant(format!("div_c2 value {v} is odd")));
        }
        if matches!(
            self.kind,
            BlockKind::SemifanoSmallRes
                | BlockKind::SemifanoCrepant
                | BlockKind::FanoRank1
                | BlockKind::FanoRank2
        ) && self.rk_k != 0
        {
            return Err(self.invariant("blocks from generic pencils have rk K = 0"));
        }
        if self.kind == BlockKind::FanoRank1 {
            validate_rank1(self).map_err(|m| self.invariant(m))?;
        }
        if let Some(p) = &self.polytope {
            if let Some(k3) = &self.minus_k3 {
                if k3 != &int(2 * p.genus as i64 - 2) {
                    return Err(self.invariant("-K^3 differs from 2g - 2"));
                }
            }
            if let Some(ell) = self.ell_n {
                if !p.disc_factors.is_empty() && ell_of_factors(&p.disc_factors) != ell {
                    return Err(self.invariant("stored ell disagrees with disc_factors"));
                }
            }
        }
        Ok(())
    }
}

/// Rank one Fano checks: `N = ⟨rd⟩`, `A = r·generator`, `b³(Z) = b³(Y) + 2g`
/// with `2g − 2 = r³d`.
pub fn validate_rank1(rec: &BlockRecord) -> Result<(), String> {
    let f = rec.fano.ok_or("missing r, d, b3_Y")?;
    let g = rec.n_gram.as_ref().ok_or("missing Gram")?;
    let rd = int((f.r * f.d) as i64);
    if g.rows() != 1 || g.get(0, 0) != &rd {
        return Err(format!("N is not <{}>", f.r * f.d));
    }
    if let Some(a) = &rec.anticanonical_class {
        if a != &[int(f.r as i64)] {
            return Err("A is not r times the generator".into());
        }
    }
    let k3 = f.r * f.r * f.r * f.d;
    if let Some(m) = &rec.minus_k3 {
        if m != &int(k3 as i64) {
            return Err(format!("-K^3 = {m}, expected r^3 d = {k3}"));
        }
    }
    let genus = k3 / 2 + 1;
    let b3_z = rec.b3_z.ok_or("missing b3_Z")?;
    if b3_z != f.b3_y + 2 * genus {
        return Err(format!(
            "b3_Z = {b3_z}, expected b3_Y + 2g = {}",
            f.b3_y + 2 * genus
        ));
    }
    Ok(())
}

/// A validated set of block records with unique ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    records: Vec<BlockRecord>,
    index: BTreeMap<String, usize>,
    /// Source tag of each loaded file.
    pub sources: Vec<String>,
}

const HEADER_KEYS: &[&str] = &["schema", "source", "notes"];

/// Bundled table files, in load order.
pub const BUNDLED_TABLES: &[(&str, &str)] = &[
    (
        "rank1.blocks",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../tables/rank1.blocks"
        )),
    ),
    (
        "table2.blocks",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../tables/table2.blocks"
        )),
    ),
    (
        "rank2.blocks",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../tables/rank2.blocks"
        )),
    ),
    (
        "table6.polytopes",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../tables/table6.polytopes"
        )),
    ),
];

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    /// Parses and validates one catalog file's text.
    pub fn parse(text: &str, name: &str) -> Result<Catalog, CatalogError> {
        let mut cat = Catalog::new();
        cat.add_text(text, name)?;
        Ok(cat)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Catalog::parse(&text, &name)
    }

    /// One bundled table by file name, honouring `TCS_TABLES_DIR`.
    pub fn bundled_table(name: &str) -> Result<Catalog, CatalogError> {
        if let Ok(dir) = std::env::var("TCS_TABLES_DIR") {
            return Catalog::load(Path::new(&dir).join(name));
        }
        let (_, text) = BUNDLED_TABLES
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| CatalogError::Io {
                path: name.to_string(),
                msg: "no such bundled table".into(),
            })?;
        Catalog::parse(text, name)
    }

    /// The union of all bundled tables.
    pub fn bundled() -> Result<Catalog, CatalogError> {
        let mut cat = Catalog::new();
        for (name, _) in BUNDLED_TABLES {
            cat.merge(Catalog::bundled_table(name)?)?;
        }
        Ok(cat)
    }

    pub fn rank1() -> Result<Catalog, CatalogError> {
        Catalog::bundled_table("rank1.blocks")
    }

    pub fn add_text(&mut self, text: &str, name: &str) -> Result<(), CatalogError> {
        let records = parse_records(text)?;
        let mut iter = records.into_iter().peekable();
        let mut source = name.to_string();
        if let Some(first) = iter.peek() {
            if first.get("schema").is_some() {
                let header = iter.next().expect("peeked");
                header.check_keys(HEADER_KEYS)?;
                let v: u32 = header.parse_required("schema")?;
                if v != SCHEMA_VERSION {
                    return Err(header.err("schema", format!("unsupported schema version {v}")));
                }
                if let Some(s) = header.get("source") {
                    source = s.trim().to_string();
                }
            } else {
                return Err(CatalogError::Parse {
                    line: first.line,
                    msg: "missing `schema = 1` header record".into(),
                });
            }
        }
        for raw in iter {
            let rec = BlockRecord::from_raw(&raw, &source)?;
            rec.validate()?;
            self.push(rec)?;
        }
        self.sources.push(source);
        Ok(())
    }

    pub fn push(&mut self, rec: BlockRecord) -> Result<(), CatalogError> {
        if self.index.contains_key(&rec.id) {
            return Err(CatalogError::DuplicateId(rec.id));
        }
        self.index.insert(rec.id.clone(), self.records.len());
        self.records.push(rec);
        Ok(())
    }

    pub fn merge(&mut self, other: Catalog) -> Result<(), CatalogError> {
        for r in other.records {
            self.push(r)?;
        }
        self.sources.extend(other.sources);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&BlockRecord, CatalogError> {
        self.index
            .get(id)
            .map(|&i| &self.records[i])
            .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    pub fn records(&self) -> &[BlockRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.id.as_str()).collect()
    }

    /// Records restricted to those with the given kinds.
    pub fn filter_kinds(&self, kinds: &BTreeSet<BlockKind>) -> Catalog {
        let mut out = Catalog::new();
        for r in self.records.iter().filter(|r| kinds.contains(&r.kind)) {
            out.push(r.clone()).expect("ids already unique");
        }
        out.sources = self.sources.clone();
        out
    }
}

/// Human-readable multi-line description of a record.
pub fn describe(rec: &BlockRecord) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        s.push_str(&format!("{k:<20} {v}\n"));
    };
    line("id", rec.id.clone());
    line("kind", rec.kind.to_string());
    line("source", rec.source.clone());
    line("rank", rec.rank.to_string());
    if let Some(g) = &rec.n_gram {
        line("n_gram", g.to_string());
        let l = rec.lattice();
        if let Ok(d) = l.discriminant_group() {
            let f: Vec<String> = d.invariant_factors.iter().map(|x| x.to_string()).collect();
            line(
                "discriminant",
                if f.is_empty() {
                    "trivial".into()
                } else {
                    format!("[{}]", f.join(", "))
                },
            );
        }
    }
    if let Some(e) = rec.ell() {
        line("ell", e.to_string());
    }
    if let Some(a) = &rec.anticanonical_class {
        line("anticanonical_class", crate::exactalg::format_int_list(a));
    }
    if let Some(k) = &rec.minus_k3 {
        line("minus_k3", k.to_string());
    }
    if let Some(b) = rec.b3_z {
        line("b3_Z", b.to_string());
    }
    line("rk_K", rec.rk_k.to_string());
    line(
        "div_c2",
        if rec.div_c2.is_empty() {
            "unknown".into()
        } else {
            rec.div_c2
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        },
    );
    if let Some(v) = rec.div_c2_mod_aperp {
        line("div_c2_mod_Aperp", v.to_string());
    }
    line("e_rigid", rec.e_rigid.to_string());
    if let Some(p) = &rec.polytope {
        line(
            "disc_factors",
            p.disc_factors
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        );
        line("resolutions", p.resolutions.to_string());
        line("genus", p.genus.to_string());
    }
    if !rec.notes.is_empty() {
        line("notes", rec.notes.clone());
    }
    s
}

/// `ℓ` of a finite abelian group given by cyclic factor orders.
pub fn ell_of_factors(factors: &[u64]) -> usize {
    let mut primes = BTreeMap::<u64, usize>::new();
    for &f in factors {
        let mut n = f;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                *primes.entry(p).or_default() += 1;
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            *primes.entry(n).or_default() += 1;
        }
    }
    primes.values().copied().max().unwrap_or(0)
}

/// `gcd` of a list of positive integers.
pub fn gcd_u64(values: &[u64]) -> u64 {
    values.iter().fold(0u64, |a, b| a.gcd(b))
}
