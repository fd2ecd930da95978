//! Matching certificates for pairs of building blocks, pair enumeration over
//! a catalog and geography statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::blocks::{ell_of_factors, gcd_u64, BlockKind, BlockRecord, Catalog};
use crate::embed::{
    assess, construct_embedding, embed_into_complement, mod_obstruction, ConstructedEmbedding,
    EmbedError, EmbeddingStatus, EmbeddingVerdict, Strategy,
};
use crate::exactalg::{inertia, int, rat_from_int, vec_mat, Int, IntMat, Rat, RatMat};
use crate::glue::{
    enumerate_overlattices, orthogonal_pushout, perpendicular_sum, GlueError, PushoutSpec,
};
use crate::lattice::{
    find_primitive_vector, intersect, k3, positive_vector, short_vectors, sum, Lattice, Sublattice,
};
use crate::tcs::{GluingConfig, GluingMode};

/// Default coordinate bound for constructive searches.
pub const DEFAULT_SEARCH_BOUND: u64 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("block {0} has no Gram matrix")]
    Gramless(String),
    #[error("mode does not fit the blocks: {0}")]
    Incompatible(String),
    #[error("pushout failed: {0}")]
    Pushout(#[from] GlueError),
    #[error("no embedding into the K3 lattice exists: {0}")]
    EmbeddingImpossible(String),
    #[error("no embedding into the K3 lattice was found: {0}")]
    EmbeddingUnknown(String),
    #[error("signature check failed: {0}")]
    SignatureMismatch(String),
    #[error("the ample cone condition must be asserted for {0}")]
    AmpleConeUnasserted(String),
    #[error("R contains a vector of norm -2")]
    RContainsMinusTwo,
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

impl MatchError {
    /// Stable machine-readable reason.
    pub fn code(&self) -> &'static str {
        match self {
            MatchError::Gramless(_) => "Gramless",
            MatchError::Incompatible(_) => "IncompatibleMode",
            MatchError::Pushout(_) => "PushoutFailure",
            MatchError::EmbeddingImpossible(_) => "EmbeddingImpossible",
            MatchError::EmbeddingUnknown(_) => "EmbeddingUnknown",
            MatchError::SignatureMismatch(_) => "SignatureMismatch",
            MatchError::AmpleConeUnasserted(_) => "AmpleConeUnasserted",
            MatchError::RContainsMinusTwo => "RContainsMinusTwo",
            MatchError::Embed(_) => "EmbeddingError",
        }
    }
}

/// How `W ⊇ N₊ + N₋` is formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchMode {
    /// `W = N₊ ⊥ N₋`, each block primitive in L.
    PerpendicularPrimitive,
    /// `W` is the overlattice of `N₊ ⊥ N₋` with the given glue group type.
    PerpendicularOverlattice { glue_type: Vec<Int> },
    /// `W = N₊ ⊥_R N₋`; `x_plus`, `x_minus` are bases of R in block coordinates.
    Orthogonal {
        r: Lattice,
        x_plus: IntMat,
        x_minus: IntMat,
    },
    /// Explicit W: block bases in W coordinates and an embedding of W.
    Handcrafted {
        w: Lattice,
        plus_coords: IntMat,
        minus_coords: IntMat,
        embedding: IntMat,
    },
}

impl MatchMode {
    /// Rank-one R spanned by `x_plus` and `x_minus`, which must have equal norm.
    pub fn orthogonal_rank_one(n_plus: &Lattice, x_plus: &[Int], x_minus: &[Int]) -> MatchMode {
        let r = Lattice::new(IntMat::from_rows(vec![vec![n_plus.norm(x_plus)]], 1).expect("1x1"))
            .expect("symmetric");
        MatchMode::Orthogonal {
            r,
            x_plus: IntMat::row_vector(x_plus),
            x_minus: IntMat::row_vector(x_minus),
        }
    }

    pub fn gluing_mode(&self) -> GluingMode {
        match self {
            MatchMode::PerpendicularPrimitive => GluingMode::Perpendicular,
            MatchMode::PerpendicularOverlattice { .. } => GluingMode::Overlattice,
            MatchMode::Orthogonal { .. } => GluingMode::Orthogonal,
            MatchMode::Handcrafted { .. } => GluingMode::Handcrafted,
        }
    }
}

/// Search limits and user assertions for [`build_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchOptions {
    pub ample_cone_asserted: bool,
    pub search_bound: u64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            ample_cone_asserted: false,
            search_bound: DEFAULT_SEARCH_BOUND,
        }
    }
}

/// How the ample-cone hypothesis was discharged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmpleCheck {
    /// Perpendicular gluing: nothing to check.
    AutoSatisfied,
    /// Fano-type blocks whose ample class A is orthogonal to R.
    AmpleClassOrthogonalToR,
    /// Nonsymplectic blocks: R has no vectors of norm −2.
    NoMinusTwoInR,
    /// Taken from the user's assertion.
    Asserted,
}

/// Inertia `(positive, negative, zero)` of the pieces the matching argument needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Positivity {
    pub w_plus: (usize, usize, usize),
    pub w_minus: (usize, usize, usize),
    pub t: (usize, usize, usize),
    /// Each of `W₊`, `W₋`, `T` has exactly one positive direction.
    pub ok: bool,
}

/// Rational classes `(k₊, k₋, k₀)` with their square norms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingTriple {
    pub k_plus: Vec<Rat>,
    pub k_minus: Vec<Rat>,
    pub k_0: Vec<Rat>,
    pub norms: [Rat; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchCertificate {
    pub plus: BlockRecord,
    pub minus: BlockRecord,
    pub mode: GluingMode,
    pub w: Lattice,
    pub embedding: EmbeddingVerdict,
    /// Images of the block bases in K3 coordinates.
    pub emb_plus: IntMat,
    pub emb_minus: IntMat,
    /// Torsion of `L / (N₊ + N₋)`.
    pub cotorsion: Vec<Int>,
    /// W has signature `(2, rk W − 2)`.
    pub sig_check: bool,
    /// `N₊ ∩ T₋`.
    pub w_plus: Sublattice,
    /// `N₋ ∩ T₊`.
    pub w_minus: Sublattice,
    /// `(N₊ + N₋)⊥`.
    pub t: Sublattice,
    pub positivity: Positivity,
    pub ample: AmpleCheck,
    pub ample_cone_asserted: bool,
    pub triple: Option<MatchingTriple>,
}

impl MatchCertificate {
    /// The gluing config this certificate describes.
    pub fn to_config(&self) -> GluingConfig {
        let mut cfg = GluingConfig::new(
            self.plus.clone(),
            self.minus.clone(),
            self.emb_plus.clone(),
            self.emb_minus.clone(),
        )
        .expect("certificate embeddings are checked");
        cfg.mode = self.mode;
        cfg.ample_cone_asserted = self.ample_cone_asserted;
        cfg
    }
}

fn gram_of(rec: &BlockRecord) -> Result<Lattice, MatchError> {
    rec.try_lattice()
        .ok_or_else(|| MatchError::Gramless(rec.id.clone()))
}

fn constructed(v: &EmbeddingVerdict) -> Option<&ConstructedEmbedding> {
    match &v.status {
        EmbeddingStatus::ExistsConstructed(c) => Some(c),
        _ => None,
    }
}

/// Library patterns first, then the bounded search.
fn embed_w(w: &Lattice, blocks: &[usize], bound: u64) -> Result<EmbeddingVerdict, MatchError> {
    let verdict = assess(w);
    if verdict.status == EmbeddingStatus::ImpossibleByNecessary {
        return Err(MatchError::EmbeddingImpossible(
            "rk W + l(W) exceeds 22 or the signature does not fit".into(),
        ));
    }
    let lib = construct_embedding(w, Strategy::Library, bound, blocks)?;
    if constructed(&lib).is_some() {
        return Ok(lib);
    }
    if w.rank() <= 6 {
        let bt = construct_embedding(w, Strategy::Backtracking, bound, blocks)?;
        if constructed(&bt).is_some() {
            return Ok(bt);
        }
    }
    Err(MatchError::EmbeddingUnknown(format!(
        "no construction within bound {bound}; criterion verdict: {}",
        verdict.status.tag()
    )))
}

/// Moduli worth testing for norm obstructions: primes dividing `det T` and their squares.
fn obstruction_moduli(t: &Lattice) -> Vec<u64> {
    let mut d = t.det().abs().to_u64().unwrap_or(0);
    let mut out = Vec::new();
    let mut p = 2;
    while d > 1 && p <= 13 {
        if d % p == 0 {
            out.push(p);
            if p * p <= 16 {
                out.push(p * p);
            }
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    out
}

/// A rank-one block placed in the recorded complement of a block with a fixed embedding.
fn complement_embedding(
    fixed: &BlockRecord,
    other: &BlockRecord,
    bound: u64,
) -> Result<(IntMat, IntMat), MatchError> {
    let l = k3();
    let emb = fixed.l_embedding.clone().expect("caller checked");
    let t_sub = match &fixed.complement_basis {
        Some(b) => Sublattice::new(l.clone(), b.clone())
            .map_err(|e| MatchError::Incompatible(e.to_string()))?,
        None => Sublattice::new(l.clone(), emb.clone())
            .map_err(|e| MatchError::Incompatible(e.to_string()))?
            .orthogonal_complement(),
    };
    let t = t_sub.lattice();
    let m = gram_of(other)?.gram().get(0, 0).clone();
    for k in obstruction_moduli(&t) {
        if mod_obstruction(&t, &m, k).unwrap_or(false) {
            let residue = m.mod_floor(&int(k as i64)).to_u64().expect("small");
            return Err(MatchError::EmbeddingImpossible(format!(
                "the complement of {} represents no norm = {residue} mod {k}",
                fixed.id
            )));
        }
    }
    let x = embed_into_complement(&t, &m, bound).ok_or_else(|| {
        MatchError::EmbeddingUnknown(format!("no primitive norm {m} vector within bound {bound}"))
    })?;
    let image = vec_mat(&x, t_sub.basis());
    Ok((emb, IntMat::row_vector(&image)))
}

/// Assembles and checks all arithmetic hypotheses for matching `plus` with `minus`.
pub fn build_certificate(
    plus: &BlockRecord,
    minus: &BlockRecord,
    mode: &MatchMode,
    opts: &MatchOptions,
) -> Result<MatchCertificate, MatchError> {
    let (np, nm) = (gram_of(plus)?, gram_of(minus)?);
    let (rp, rm) = (np.rank(), nm.rank());
    let l = k3();
    let mut ample = AmpleCheck::AutoSatisfied;
    let (w, verdict, emb_plus, emb_minus) = match mode {
        MatchMode::PerpendicularPrimitive => {
            let w = perpendicular_sum(&np, &nm);
            if plus.l_embedding.is_some() && rm == 1 {
                let (ep, em) = complement_embedding(plus, minus, opts.search_bound)?;
                let basis = IntMat::vstack(&[&ep, &em]).expect("22 columns");
                let c = ConstructedEmbedding::verify(&w, basis, &[rp, rm], "complement")?;
                (
                    w,
                    EmbeddingVerdict {
                        status: EmbeddingStatus::ExistsConstructed(c),
                        unique: None,
                    },
                    ep,
                    em,
                )
            } else if minus.l_embedding.is_some() && rp == 1 {
                let (em, ep) = complement_embedding(minus, plus, opts.search_bound)?;
                let basis = IntMat::vstack(&[&ep, &em]).expect("22 columns");
                let c = ConstructedEmbedding::verify(&w, basis, &[rp, rm], "complement")?;
                (
                    w,
                    EmbeddingVerdict {
                        status: EmbeddingStatus::ExistsConstructed(c),
                        unique: None,
                    },
                    ep,
                    em,
                )
            } else {
                let v = embed_w(&w, &[rp, rm], opts.search_bound)?;
                let basis = constructed(&v).expect("constructed").basis.clone();
                let (ep, em) = split_rows(&basis, rp);
                (w, v, ep, em)
            }
        }
        MatchMode::PerpendicularOverlattice { glue_type } => {
            let w = perpendicular_sum(&np, &nm);
            let (v, basis) = overlattice_embedding(&np, &nm, &w, glue_type, opts.search_bound)?;
            let (ep, em) = split_rows(&basis, rp);
            (w, v, ep, em)
        }
        MatchMode::Orthogonal { r, x_plus, x_minus } => {
            let spec = PushoutSpec {
                n_plus: np.clone(),
                n_minus: nm.clone(),
                r: r.clone(),
                emb_plus: x_plus.clone(),
                emb_minus: x_minus.clone(),
            };
            let p = orthogonal_pushout(&spec)?;
            ample =
                orthogonal_ample_check(plus, minus, r, x_plus, x_minus, opts.ample_cone_asserted)?;
            let v = embed_w(&p.w, &[p.w.rank()], opts.search_bound)?;
            let c = constructed(&v).expect("constructed");
            if !c.primitive {
                return Err(MatchError::EmbeddingUnknown(
                    "only a non-primitive embedding of the pushout was found".into(),
                ));
            }
            let ep = p.plus_basis.mul(&c.basis);
            let em = p.minus_basis.mul(&c.basis);
            (p.w.clone(), v, ep, em)
        }
        MatchMode::Handcrafted {
            w,
            plus_coords,
            minus_coords,
            embedding,
        } => {
            if plus_coords.congruence(w.gram()) != *np.gram()
                || minus_coords.congruence(w.gram()) != *nm.gram()
            {
                return Err(MatchError::Incompatible(
                    "block coordinates are not isometric to the blocks".into(),
                ));
            }
            if !opts.ample_cone_asserted {
                return Err(MatchError::AmpleConeUnasserted("handcrafted gluing".into()));
            }
            ample = AmpleCheck::Asserted;
            let c = ConstructedEmbedding::verify(w, embedding.clone(), &[w.rank()], "handcrafted")?;
            let ep = plus_coords.mul(embedding);
            let em = minus_coords.mul(embedding);
            (
                w.clone(),
                EmbeddingVerdict {
                    status: EmbeddingStatus::ExistsConstructed(c),
                    unique: None,
                },
                ep,
                em,
            )
        }
    };
    let n_plus = Sublattice::new(l.clone(), emb_plus.clone())
        .map_err(|e| MatchError::Incompatible(e.to_string()))?;
    let n_minus = Sublattice::new(l.clone(), emb_minus.clone())
        .map_err(|e| MatchError::Incompatible(e.to_string()))?;
    for (s, id) in [(&n_plus, &plus.id), (&n_minus, &minus.id)] {
        if !s.is_primitive() {
            return Err(MatchError::EmbeddingUnknown(format!(
                "the image of {id} is not primitive"
            )));
        }
    }
    let sig_check = match w.signature() {
        Ok(s) => s.positives == 2 && s.negatives + 2 == w.rank(),
        Err(_) => false,
    };
    if !sig_check {
        return Err(MatchError::SignatureMismatch(format!(
            "W must have signature (2, {})",
            w.rank().saturating_sub(2)
        )));
    }
    let (t_plus, t_minus) = (
        n_plus.orthogonal_complement(),
        n_minus.orthogonal_complement(),
    );
    let w_plus = intersect(&n_plus, &t_minus);
    let w_minus = intersect(&n_minus, &t_plus);
    let nn = sum(&n_plus, &n_minus);
    let t = nn.orthogonal_complement();
    let positivity = positivity(&w_plus, &w_minus, &t);
    if !positivity.ok {
        return Err(MatchError::SignatureMismatch(format!(
            "positive directions in W+, W-, T: {}, {}, {}",
            positivity.w_plus.0, positivity.w_minus.0, positivity.t.0
        )));
    }
    let mut cert = MatchCertificate {
        plus: plus.clone(),
        minus: minus.clone(),
        mode: mode.gluing_mode(),
        w,
        embedding: verdict,
        emb_plus,
        emb_minus,
        cotorsion: nn.quotient_torsion(),
        sig_check,
        w_plus,
        w_minus,
        t,
        positivity,
        ample,
        ample_cone_asserted: opts.ample_cone_asserted,
        triple: None,
    };
    cert.triple = Some(propose_triple(&cert)?);
    Ok(cert)
}

fn split_rows(basis: &IntMat, first: usize) -> (IntMat, IntMat) {
    let a: Vec<usize> = (0..first).collect();
    let b: Vec<usize> = (first..basis.rows()).collect();
    (basis.select_rows(&a), basis.select_rows(&b))
}

/// Embeds `N₊ ⊥ N₋` so that its saturation has the requested glue group.
fn overlattice_embedding(
    np: &Lattice,
    nm: &Lattice,
    w: &Lattice,
    glue_type: &[Int],
    bound: u64,
) -> Result<(EmbeddingVerdict, IntMat), MatchError> {
    let blocks = [np.rank(), nm.rank()];
    // a direct construction of the sum may already have the right cotorsion
    if let Ok(v) = construct_embedding(w, Strategy::Library, bound, &blocks) {
        if let Some(c) = constructed(&v) {
            if c.cotorsion == glue_type && c.block_primitive.iter().all(|b| *b) {
                let basis = c.basis.clone();
                return Ok((v, basis));
            }
        }
    }
    let order: Int = glue_type.iter().fold(int(1), |a, b| a * b);
    let max_index = order
        .to_u64()
        .ok_or_else(|| MatchError::Incompatible("glue group too large".into()))?;
    let candidates = enumerate_overlattices(np, nm, max_index)?;
    for ov in candidates.iter().filter(|o| o.glue_type == glue_type) {
        let Ok(v) = embed_w(&ov.lattice, &[ov.lattice.rank()], bound) else {
            continue;
        };
        let c = constructed(&v).expect("constructed");
        if !c.primitive {
            continue;
        }
        // base basis vectors in overlattice coordinates: rows of the inverse of the overlattice basis
        let inv = RatMat::from_rows(ov.basis.clone())
            .inverse()
            .expect("overlattice basis is invertible");
        let coords = inv
            .to_int()
            .expect("the base lattice sits inside its overlattice");
        let basis = coords.mul(&c.basis);
        let checked = ConstructedEmbedding::verify(w, basis.clone(), &blocks, "overlattice")?;
        if checked.cotorsion == glue_type && checked.block_primitive.iter().all(|b| *b) {
            return Ok((
                EmbeddingVerdict {
                    status: EmbeddingStatus::ExistsConstructed(checked),
                    unique: None,
                },
                basis,
            ));
        }
    }
    Err(MatchError::EmbeddingUnknown(format!(
        "no overlattice with glue group {glue_type:?} could be embedded"
    )))
}

/// The ample-cone hypothesis for orthogonal gluing, checked per block.
fn orthogonal_ample_check(
    plus: &BlockRecord,
    minus: &BlockRecord,
    r: &Lattice,
    x_plus: &IntMat,
    x_minus: &IntMat,
    asserted: bool,
) -> Result<AmpleCheck, MatchError> {
    let fano = |b: &BlockRecord| matches!(b.kind, BlockKind::FanoRank1 | BlockKind::FanoRank2);
    let a_perp_r = |b: &BlockRecord, x: &IntMat| -> bool {
        match b.a_class() {
            Some(a) => {
                let n = b.lattice();
                (0..x.rows()).all(|i| n.pair(&a, x.row(i)).is_zero())
            }
            None => false,
        }
    };
    if fano(plus) && fano(minus) && a_perp_r(plus, x_plus) && a_perp_r(minus, x_minus) {
        return Ok(AmpleCheck::AmpleClassOrthogonalToR);
    }
    if plus.kind == BlockKind::Nonsymplectic && minus.kind == BlockKind::Nonsymplectic {
        let neg = r.scaled(-1);
        let roots = short_vectors(&neg, &int(2), true)
            .map_err(|e| MatchError::Incompatible(e.to_string()))?;
        if roots.iter().any(|(_, n)| *n == int(2)) {
            return Err(MatchError::RContainsMinusTwo);
        }
        return Ok(AmpleCheck::NoMinusTwoInR);
    }
    if asserted {
        Ok(AmpleCheck::Asserted)
    } else {
        Err(MatchError::AmpleConeUnasserted(format!(
            "{} and {}",
            plus.id, minus.id
        )))
    }
}

fn inertia_of(s: &Sublattice) -> (usize, usize, usize) {
    if s.rank() == 0 {
        return (0, 0, 0);
    }
    inertia(&s.gram().to_rat())
}

fn positivity(w_plus: &Sublattice, w_minus: &Sublattice, t: &Sublattice) -> Positivity {
    let (a, b, c) = (inertia_of(w_plus), inertia_of(w_minus), inertia_of(t));
    Positivity {
        ok: a.0 == 1 && b.0 == 1 && c.0 == 1,
        w_plus: a,
        w_minus: b,
        t: c,
    }
}

fn rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(rat_from_int).collect()
}

fn pair_rat(x: &[Rat], y: &[Rat]) -> Rat {
    k3().pair_rat(x, y)
}

/// Deterministic positive classes: the image of A when it lies in `W±` and
/// has positive norm, otherwise the first positive basis combination.
pub fn propose_triple(cert: &MatchCertificate) -> Result<MatchingTriple, MatchError> {
    let l = k3();
    let pick = |rec: &BlockRecord, emb: &IntMat, w_side: &Sublattice| -> Option<Vec<Rat>> {
        if let Some(a) = rec.a_class() {
            let img = vec_mat(&a, emb);
            if l.norm(&img).is_positive() && w_side.spans_rationally(&rat_vec(&img)) {
                return Some(rat_vec(&img));
            }
        }
        positive_vector(l.gram(), w_side.basis())
    };
    let none = |what: &str| MatchError::SignatureMismatch(format!("no positive vector in {what}"));
    let k_plus = pick(&cert.plus, &cert.emb_plus, &cert.w_plus).ok_or_else(|| none("W+"))?;
    let k_minus = pick(&cert.minus, &cert.emb_minus, &cert.w_minus).ok_or_else(|| none("W-"))?;
    let k_0 = positive_vector(l.gram(), cert.t.basis()).ok_or_else(|| none("T"))?;
    let norms = [
        pair_rat(&k_plus, &k_plus),
        pair_rat(&k_minus, &k_minus),
        pair_rat(&k_0, &k_0),
    ];
    Ok(MatchingTriple {
        k_plus,
        k_minus,
        k_0,
        norms,
    })
}

/// Outcome of [`verify_triple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCheck {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// Exact membership, orthogonality and positivity checks over ℚ.
pub fn verify_triple(t: &MatchingTriple, emb_plus: &IntMat, emb_minus: &IntMat) -> TripleCheck {
    let l = k3();
    let n_plus = Sublattice::new(l.clone(), emb_plus.clone()).expect("independent rows");
    let n_minus = Sublattice::new(l.clone(), emb_minus.clone()).expect("independent rows");
    let orth_to = |v: &[Rat], s: &Sublattice| {
        (0..s.rank()).all(|i| pair_rat(v, &rat_vec(s.basis().row(i))).is_zero())
    };
    let mut reasons = Vec::new();
    if !(n_plus.spans_rationally(&t.k_plus) && orth_to(&t.k_plus, &n_minus)) {
        reasons.push("k+ is not in span(N+) ∩ span(T-)".to_string());
    }
    if !(n_minus.spans_rationally(&t.k_minus) && orth_to(&t.k_minus, &n_plus)) {
        reasons.push("k- is not in span(N-) ∩ span(T+)".to_string());
    }
    if !(orth_to(&t.k_0, &n_plus) && orth_to(&t.k_0, &n_minus)) {
        reasons.push("k0 is not in span(T+) ∩ span(T-)".to_string());
    }
    for (name, x, y) in [
        ("k+, k-", &t.k_plus, &t.k_minus),
        ("k+, k0", &t.k_plus, &t.k_0),
        ("k-, k0", &t.k_minus, &t.k_0),
    ] {
        if !pair_rat(x, y).is_zero() {
            reasons.push(format!("{name} are not orthogonal"));
        }
    }
    for (name, v) in [("k+", &t.k_plus), ("k-", &t.k_minus), ("k0", &t.k_0)] {
        if !pair_rat(v, v).is_positive() {
            reasons.push(format!("{name} does not have positive norm"));
        }
    }
    TripleCheck {
        ok: reasons.is_empty(),
        reasons,
    }
}

fn rat_list(v: &[Rat]) -> String {
    format!(
        "[{}]",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// Structured text dump of a certificate, including the explicit embedding.
pub fn dump_certificate(cert: &MatchCertificate) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("block_plus", cert.plus.id.clone());
    kv("block_minus", cert.minus.id.clone());
    kv("mode", cert.mode.to_string());
    kv("w_gram", cert.w.gram().to_string());
    kv("embedding_status", cert.embedding.status.tag().to_string());
    if let Some(c) = constructed(&cert.embedding) {
        kv("embedding_method", c.method.to_string());
    }
    kv("emb_plus", cert.emb_plus.to_string());
    kv("emb_minus", cert.emb_minus.to_string());
    kv(
        "cotorsion",
        if cert.cotorsion.is_empty() {
            "0".into()
        } else {
            cert.cotorsion
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        },
    );
    kv("sig_check", cert.sig_check.to_string());
    let fmt3 = |x: (usize, usize, usize)| format!("({}, {}, {})", x.0, x.1, x.2);
    kv("inertia_w_plus", fmt3(cert.positivity.w_plus));
    kv("inertia_w_minus", fmt3(cert.positivity.w_minus));
    kv("inertia_t", fmt3(cert.positivity.t));
    kv("ample_check", format!("{:?}", cert.ample));
    if let Some(t) = &cert.triple {
        kv("k_plus", rat_list(&t.k_plus));
        kv("k_minus", rat_list(&t.k_minus));
        kv("k_0", rat_list(&t.k_0));
        kv("triple_norms", rat_list(&t.norms));
    }
    s
}

/// Restriction applied by [`enumerate_pairs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PairFilter {
    #[default]
    None,
    /// `rk N₊ + rk N₋ ≤ 11`.
    Rank11,
    /// `rk N₊ + rk N₋ + ℓ(N₊ ⊥ N₋) < 22`.
    RankEll22,
}

impl std::str::FromStr for PairFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(PairFilter::None),
            "rank11" | "rank_11" => Ok(PairFilter::Rank11),
            "rankell22" | "rank_ell_22" => Ok(PairFilter::RankEll22),
            other => Err(format!("unknown filter `{other}`")),
        }
    }
}

/// Cyclic factors of the discriminant group, from the Gram matrix or the stored data.
pub fn disc_factors(rec: &BlockRecord) -> Option<Vec<u64>> {
    match rec.try_lattice() {
        Some(l) => l.discriminant_group().ok().map(|d| d.orders()),
        None => rec.polytope.as_ref().map(|p| p.disc_factors.clone()),
    }
}

/// `ℓ(N₊ ⊥ N₋)`, exact from the combined cyclic factors.
pub fn ell_of_sum(a: &BlockRecord, b: &BlockRecord) -> Option<usize> {
    let mut f = disc_factors(a)?;
    f.extend(disc_factors(b)?);
    Some(ell_of_factors(&f))
}

pub fn pair_passes(a: &BlockRecord, b: &BlockRecord, filter: PairFilter) -> bool {
    match filter {
        PairFilter::None => true,
        PairFilter::Rank11 => a.rank + b.rank <= 11,
        PairFilter::RankEll22 => match ell_of_sum(a, b) {
            Some(ell) => a.rank + b.rank + ell < 22,
            None => false,
        },
    }
}

/// Unordered pairs with repetition `(i, j)`, `i ≤ j`, of catalog indices.
pub fn enumerate_pairs(cat: &Catalog, filter: PairFilter) -> Vec<(usize, usize)> {
    let recs = cat.records();
    (0..recs.len())
        .flat_map(|i| (i..recs.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| pair_passes(&recs[i], &recs[j], filter))
        .collect()
}

/// Which `div c₂` selections the geography counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Resolutions {
    /// The selection maximizing `div p₁`.
    #[default]
    Best,
    /// Every distinct value of `div p₁` over all selections.
    All,
}

impl std::str::FromStr for Resolutions {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "best" => Ok(Resolutions::Best),
            "all" => Ok(Resolutions::All),
            other => Err(format!("unknown resolution policy `{other}`")),
        }
    }
}

/// The `div p₁` columns of a geography row.
pub const DIV_COLUMNS: [u64; 6] = [4, 8, 12, 16, 24, 48];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeographyRow {
    pub b: u64,
    pub count: u64,
    /// Counts per entry of [`DIV_COLUMNS`].
    pub by_div: [u64; 6],
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeographyReport {
    pub rows: Vec<GeographyRow>,
    pub total_pairs: u64,
    pub column_totals: [u64; 6],
    pub distinct_b: usize,
    pub distinct_types: usize,
    /// Pairs counted in a row whose `div p₁` is unknown.
    pub unknown_div_p1: u64,
    /// Pairs left out because `b³(Z)` is not recorded.
    pub skipped_no_b3: u64,
}

/// Per-pair contribution: `b` (or `None` if unknown) and the `div p₁` values.
fn pair_entry(a: &BlockRecord, b: &BlockRecord, res: Resolutions) -> Option<(u64, Vec<u64>)> {
    let key = a.b3_z? + b.b3_z? + a.rk_k + b.rk_k;
    let vals: BTreeSet<u64> = a
        .div_c2
        .iter()
        .flat_map(|x| b.div_c2.iter().map(move |y| 2 * gcd_u64(&[*x, *y])))
        .collect();
    let vals: Vec<u64> = match res {
        Resolutions::All => vals.into_iter().collect(),
        Resolutions::Best => vals.into_iter().next_back().into_iter().collect(),
    };
    Some((key, vals))
}

/// Statistics keyed by `b = b³(Z₊) + b³(Z₋) + rk K₊ + rk K₋`, so `b³(M) = b + 23`
/// for perpendicular gluing. Parallel over pairs, aggregated deterministically.
pub fn geography_general(cat: &Catalog, filter: PairFilter, res: Resolutions) -> GeographyReport {
    let recs = cat.records();
    let pairs = enumerate_pairs(cat, filter);
    let entries: Vec<Option<(u64, Vec<u64>)>> = pairs
        .par_iter()
        .map(|&(i, j)| pair_entry(&recs[i], &recs[j], res))
        .collect();
    let mut rows: BTreeMap<u64, GeographyRow> = BTreeMap::new();
    let mut report = GeographyReport::default();
    let mut types = BTreeSet::new();
    for e in entries {
        let Some((b, vals)) = e else {
            report.skipped_no_b3 += 1;
            continue;
        };
        report.total_pairs += 1;
        let row = rows.entry(b).or_insert(GeographyRow {
            b,
            count: 0,
            by_div: [0; 6],
        });
        row.count += 1;
        if vals.is_empty() {
            report.unknown_div_p1 += 1;
        }
        for v in vals {
            types.insert((b, v));
            if let Some(k) = DIV_COLUMNS.iter().position(|c| *c == v) {
                row.by_div[k] += 1;
                report.column_totals[k] += 1;
            }
        }
    }
    report.distinct_b = rows.len();
    report.distinct_types = types.len();
    report.rows = rows.into_values().collect();
    report
}

/// Table of the rank-one Fano census: all unordered pairs of rank-one blocks.
pub fn geography_rank1(cat: &Catalog) -> GeographyReport {
    let rank1 = cat.filter_kinds(&BTreeSet::from([BlockKind::FanoRank1]));
    geography_general(&rank1, PairFilter::None, Resolutions::Best)
}

pub fn geography_tsv(report: &GeographyReport) -> String {
    let mut s = String::from("b\tcount\td4\td8\td12\td16\td24\td48\n");
    for r in &report.rows {
        let cols: Vec<String> = r.by_div.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}\t{}\t{}", r.b, r.count, cols.join("\t"));
    }
    s
}

pub fn geography_summary(report: &GeographyReport) -> String {
    let mut s = String::new();
    let totals: Vec<String> = report.column_totals.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "total_pairs = {}", report.total_pairs);
    let _ = writeln!(s, "column_totals = {}", totals.join(", "));
    let _ = writeln!(s, "distinct_b = {}", report.distinct_b);
    let _ = writeln!(s, "distinct_types = {}", report.distinct_types);
    if let (Some(lo), Some(hi)) = (report.rows.first(), report.rows.last()) {
        let _ = writeln!(s, "b3_range = {}..{}", lo.b + 23, hi.b + 23);
    }
    let _ = writeln!(s, "unknown_div_p1 = {}", report.unknown_div_p1);
    let _ = writeln!(s, "skipped_no_b3 = {}", report.skipped_no_b3);
    s
}

/// Human-readable table.
pub fn geography_human(report: &GeographyReport) -> String {
    let mut s = format!(
        "{:>5} {:>6} {:>4} {:>4} {:>4} {:>4} {:>4} {:>4}\n",
        "b", "count", "4", "8", "12", "16", "24", "48"
    );
    for r in &report.rows {
        let _ = write!(s, "{:>5} {:>6}", r.b, r.count);
        for v in r.by_div {
            let _ = write!(s, " {v:>4}");
        }
        s.push('\n');
    }
    s.push_str(&geography_summary(report));
    s
}

/// A primitive vector of norm `norm` in `n`, for rank-one gluing along `⟨norm⟩`.
pub fn rank_one_r_vector(n: &Lattice, norm: &Int, bound: u64) -> Option<Vec<Int>> {
    find_primitive_vector(n, norm, bound)
}
