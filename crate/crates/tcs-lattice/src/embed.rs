//! Embeddings of even lattices into the K3 lattice: Nikulin's existence and
//! uniqueness criteria, the necessary rank condition, residue obstructions and
//! explicit constructions.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{int, Int, IntMat};
use crate::lattice::{
    e8, e8_neg, find_primitive_vector, for_each_shell, k3, norm_residues, short_vectors, u,
    Lattice, LatticeError, Signature, Sublattice,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("lattice of rank {0} cannot embed in rank 22")]
    Dimension(usize),
    #[error("block sizes sum to {got}, expected {expected}")]
    BlockSizes { expected: usize, got: usize },
    #[error("embedding matrix is not an isometry")]
    NotIsometric,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Rank of the K3 lattice.
pub const K3_RANK: usize = 22;

/// Signature of the K3 lattice.
pub const K3_SIGNATURE: Signature = Signature {
    positives: 3,
    negatives: 19,
};

/// Which sufficient condition of Nikulin's existence theorem applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// `2 rk W ≤ rk L`.
    RankHalf,
    /// `rk W + ℓ(W) < rk L`.
    RankPlusEll,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::RankHalf => write!(f, "i"),
            Criterion::RankPlusEll => write!(f, "ii"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingStatus {
    ExistsPrimitiveByCriterion(Criterion),
    ExistsConstructed(ConstructedEmbedding),
    ImpossibleByNecessary,
    ImpossibleByObstruction { modulus: u64, residue: u64 },
    Unknown,
}

impl EmbeddingStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            EmbeddingStatus::ExistsPrimitiveByCriterion(_) => "exists-primitive-by-criterion",
            EmbeddingStatus::ExistsConstructed(_) => "exists-constructed",
            EmbeddingStatus::ImpossibleByNecessary => "impossible-by-necessary",
            EmbeddingStatus::ImpossibleByObstruction { .. } => "impossible-by-obstruction",
            EmbeddingStatus::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingVerdict {
    pub status: EmbeddingStatus,
    /// `Some(true)` when uniqueness up to `O(L)` is certified; `None` when not assessed.
    pub unique: Option<bool>,
}

/// An explicit isometric embedding into the K3 lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedEmbedding {
    /// Rows are images of the basis of W in K3 coordinates.
    pub basis: IntMat,
    pub primitive: bool,
    /// Primitivity of each designated block of consecutive basis rows.
    pub block_primitive: Vec<bool>,
    /// Invariant factors of the torsion of `L / W`.
    pub cotorsion: Vec<Int>,
    pub method: &'static str,
}

impl ConstructedEmbedding {
    /// Verifies the embedding against `W` and fills in the primitivity data.
    pub fn verify(
        w: &Lattice,
        basis: IntMat,
        blocks: &[usize],
        method: &'static str,
    ) -> Result<Self, EmbedError> {
        let l = k3();
        if basis.cols() != K3_RANK {
            return Err(EmbedError::Dimension(basis.cols()));
        }
        if &basis.congruence(l.gram()) != w.gram() {
            return Err(EmbedError::NotIsometric);
        }
        let total: usize = blocks.iter().sum();
        if total != w.rank() {
            return Err(EmbedError::BlockSizes {
                expected: w.rank(),
                got: total,
            });
        }
        let sub = Sublattice::new(l.clone(), basis.clone())?;
        let cotorsion = sub.quotient_torsion();
        let mut block_primitive = Vec::new();
        let mut start = 0;
        for &b in blocks {
            let rows: Vec<usize> = (start..start + b).collect();
            block_primitive
                .push(Sublattice::new(l.clone(), basis.select_rows(&rows))?.is_primitive());
            start += b;
        }
        Ok(ConstructedEmbedding {
            primitive: cotorsion.is_empty(),
            basis,
            block_primitive,
            cotorsion,
            method,
        })
    }
}

fn signature_fits(w: &Lattice, target: Signature) -> bool {
    matches!(w.signature(), Ok(s) if s.positives <= target.positives && s.negatives <= target.negatives)
}

/// Nikulin's sufficient conditions for a primitive embedding into an even
/// unimodular lattice of the given signature. `None` means the criterion is silent.
pub fn nikulin_sufficient(
    w: &Lattice,
    target_sig: Signature,
    target_rank: usize,
) -> Option<Criterion> {
    if !w.is_even() || !w.is_nondegenerate() || !signature_fits(w, target_sig) {
        return None;
    }
    if 2 * w.rank() <= target_rank {
        return Some(Criterion::RankHalf);
    }
    let ell = w.ell().ok()?;
    (w.rank() + ell < target_rank).then_some(Criterion::RankPlusEll)
}

/// `rk W + ℓ(W) ≤ rk L`; false rules out primitive embeddings.
pub fn necessary_condition(w: &Lattice, target_rank: usize) -> bool {
    match w.ell() {
        Ok(ell) => w.rank() + ell <= target_rank,
        Err(_) => false,
    }
}

/// `rk W + ℓ(W) + 2 ≤ rk L`, which makes a primitive embedding unique up to `O(L)`.
/// False means undetermined.
pub fn uniqueness(w: &Lattice, target_rank: usize) -> bool {
    match w.ell() {
        Ok(ell) => w.rank() + ell + 2 <= target_rank,
        Err(_) => false,
    }
}

/// Criterion-only verdict for a primitive embedding into the K3 lattice.
pub fn assess(w: &Lattice) -> EmbeddingVerdict {
    if !necessary_condition(w, K3_RANK) || !signature_fits(w, K3_SIGNATURE) {
        return EmbeddingVerdict {
            status: EmbeddingStatus::ImpossibleByNecessary,
            unique: None,
        };
    }
    match nikulin_sufficient(w, K3_SIGNATURE, K3_RANK) {
        Some(c) => EmbeddingVerdict {
            status: EmbeddingStatus::ExistsPrimitiveByCriterion(c),
            unique: Some(uniqueness(w, K3_RANK)),
        },
        None => EmbeddingVerdict {
            status: EmbeddingStatus::Unknown,
            unique: None,
        },
    }
}

/// True iff `m mod k` is not a norm residue of `T`, so `T` has no vector of norm `m`.
pub fn mod_obstruction(t: &Lattice, m: &Int, k: u64) -> Result<bool, LatticeError> {
    let residues = norm_residues(t, k)?;
    let r = m
        .mod_floor(&Int::from(k))
        .to_u64()
        .expect("residue below modulus");
    Ok(!residues.contains(&r))
}

/// A primitive vector of norm `m` in `T`, searched with coordinates in `[−bound, bound]`.
pub fn embed_into_complement(t: &Lattice, m: &Int, bound: u64) -> Option<Vec<Int>> {
    find_primitive_vector(t, m, bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Hand patterns: orthogonal E₈(−1) and U blocks placed directly, the two
    /// built-in matrices, and a triangular pattern in 3U with residual vectors
    /// realised in a free E₈(−1) slot.
    Library,
    /// Bounded search for images in 3U.
    Backtracking,
}

/// Gram of `N₀ ⊥ N₀` with `N₀ = ⟨8⟩ ⊥ ⟨−16⟩`.
pub fn builtin_two_n0_gram() -> IntMat {
    IntMat::from_i64(&[[8, 0, 0, 0], [0, -16, 0, 0], [0, 0, 8, 0], [0, 0, 0, -16]])
}

/// Images of `N₀ ⊥ N₀` in 3U (six coordinates), one row per basis vector.
pub fn builtin_two_n0_matrix() -> IntMat {
    IntMat::from_i64(&[
        [4, 1, 0, 0, 0, 0],
        [0, 0, -8, 1, 0, 0],
        [0, 0, 0, 0, 4, 1],
        [-4, 1, 0, 0, -4, 1],
    ])
}

/// Gram `B` of two copies of `[[4,4],[4,0]]`.
pub fn builtin_large_cotorsion_gram() -> IntMat {
    IntMat::from_i64(&[[4, 4, 0, 0], [4, 0, 0, 0], [0, 0, 4, 4], [0, 0, 4, 0]])
}

/// Images of `B` in 2U (four coordinates), one row per basis vector; the
/// cotorsion in 2U is `(ℤ/4)²`.
pub fn builtin_large_cotorsion_matrix() -> IntMat {
    IntMat::from_i64(&[[2, 1, 2, 0], [0, 1, 0, 1], [-2, 0, 2, 1], [0, -1, 0, 1]])
}

/// Builds an explicit embedding. `blocks` partitions the basis rows of `W`
/// into consecutive designated sub-blocks whose primitivity is reported.
pub fn construct_embedding(
    w: &Lattice,
    strategy: Strategy,
    bound: u64,
    blocks: &[usize],
) -> Result<EmbeddingVerdict, EmbedError> {
    if w.rank() > K3_RANK {
        return Err(EmbedError::Dimension(w.rank()));
    }
    let total: usize = blocks.iter().sum();
    if total != w.rank() {
        return Err(EmbedError::BlockSizes {
            expected: w.rank(),
            got: total,
        });
    }
    let found = match strategy {
        Strategy::Library => library_embedding(w),
        Strategy::Backtracking => backtracking_embedding(w, bound),
    };
    let status = match found {
        Some((basis, method)) => EmbeddingStatus::ExistsConstructed(ConstructedEmbedding::verify(
            w, basis, blocks, method,
        )?),
        None => EmbeddingStatus::Unknown,
    };
    let unique = match &status {
        EmbeddingStatus::ExistsConstructed(c) if c.primitive => Some(uniqueness(w, K3_RANK)),
        _ => None,
    };
    Ok(EmbeddingVerdict { status, unique })
}

/// Column offset of the i-th U summand and of the i-th E₈(−1) summand in K3 coordinates.
fn u_slot(i: usize) -> usize {
    2 * i
}

fn e8_slot(i: usize) -> usize {
    6 + 8 * i
}

/// Connected components of the graph on basis indices with an edge where the Gram entry is nonzero.
fn orthogonal_components(g: &IntMat) -> Vec<Vec<usize>> {
    let n = g.rows();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        let mut members = Vec::new();
        comp[s] = out.len();
        while let Some(i) = stack.pop() {
            members.push(i);
            for (j, slot) in comp.iter_mut().enumerate() {
                if *slot == usize::MAX && !g.get(i, j).is_zero() {
                    *slot = out.len();
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn library_embedding(w: &Lattice) -> Option<(IntMat, &'static str)> {
    let g = w.gram();
    let n = w.rank();
    let mut basis = IntMat::zeros(n, K3_RANK);
    let mut free_u: Vec<usize> = (0..3).collect();
    let mut free_e8: Vec<usize> = (0..2).collect();
    let mut rest = Vec::new();
    let (e8g, ug) = (e8_neg(), u());
    for comp in orthogonal_components(g) {
        let sub = g.select_rows(&comp).select_cols(&comp);
        if comp.len() == 8 && &sub == e8g.gram() && !free_e8.is_empty() {
            let slot = e8_slot(free_e8.remove(0));
            for (k, &i) in comp.iter().enumerate() {
                basis.set(i, slot + k, int(1));
            }
        } else if comp.len() == 2 && &sub == ug.gram() && !free_u.is_empty() {
            let slot = u_slot(free_u.remove(0));
            for (k, &i) in comp.iter().enumerate() {
                basis.set(i, slot + k, int(1));
            }
        } else {
            rest.extend(comp);
        }
    }
    rest.sort_unstable();
    if rest.is_empty() {
        return Some((basis, "library"));
    }
    let sub = g.select_rows(&rest).select_cols(&rest);
    for (builtin_gram, matrix, slots) in [
        (builtin_two_n0_gram(), builtin_two_n0_matrix(), 3usize),
        (
            builtin_large_cotorsion_gram(),
            builtin_large_cotorsion_matrix(),
            2,
        ),
    ] {
        if sub == builtin_gram && free_u.len() >= slots {
            for (k, &i) in rest.iter().enumerate() {
                for (s, &slot) in free_u.iter().take(slots).enumerate() {
                    for c in 0..2 {
                        basis.set(i, u_slot(slot) + c, matrix.get(k, 2 * s + c).clone());
                    }
                }
            }
            return Some((basis, "library-builtin"));
        }
    }
    if (0..rest.len()).any(|k| sub.get(k, k).is_odd()) {
        return None;
    }
    // Place as many vectors as possible in U slots, largest |norm| first.
    let mut order: Vec<usize> = (0..rest.len()).collect();
    order.sort_by(|&a, &b| {
        sub.get(b, b)
            .abs()
            .cmp(&sub.get(a, a).abs())
            .then(a.cmp(&b))
    });
    let k_u = free_u.len().min(rest.len());
    for chosen in combinations_in_order(&order, k_u) {
        let residual: Vec<usize> = order
            .iter()
            .copied()
            .filter(|x| !chosen.contains(x))
            .collect();
        if !residual.is_empty() && free_e8.is_empty() {
            continue;
        }
        let r_gram = sub.select_rows(&residual).select_cols(&residual);
        let realised = if residual.is_empty() {
            Some(vec![])
        } else {
            realise_in_e8(&r_gram)
        };
        let Some(rvecs) = realised else { continue };
        let mut b = basis.clone();
        for (pos, &ci) in chosen.iter().enumerate() {
            let i = rest[ci];
            let slot = u_slot(free_u[pos]);
            b.set(i, slot, int(1));
            b.set(i, slot + 1, sub.get(ci, ci) / int(2));
            for (q, &cj) in chosen.iter().enumerate().take(pos) {
                b.set(i, u_slot(free_u[q]) + 1, sub.get(ci, cj).clone());
            }
        }
        for (ri, &ci) in residual.iter().enumerate() {
            let i = rest[ci];
            for (q, &cj) in chosen.iter().enumerate() {
                b.set(i, u_slot(free_u[q]) + 1, sub.get(ci, cj).clone());
            }
            let slot = e8_slot(free_e8[0]);
            for (k, x) in rvecs[ri].iter().enumerate() {
                b.set(i, slot + k, x.clone());
            }
        }
        return Some((b, "library"));
    }
    None
}

/// k-subsets of `items` in lexicographic order of positions.
fn combinations_in_order(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Vectors in E₈(−1) with prescribed Gram matrix, by backtracking over short vectors.
fn realise_in_e8(g: &IntMat) -> Option<Vec<Vec<Int>>> {
    let k = g.rows();
    if k > 8 || (0..k).any(|i| !g.get(i, i).is_negative()) {
        return None;
    }
    let max = (0..k).map(|i| -g.get(i, i)).max()?;
    if max > int(16) {
        return None;
    }
    let e = e8();
    let mut by_norm: BTreeMap<Int, Vec<Vec<Int>>> = BTreeMap::new();
    for (v, nv) in short_vectors(&e, &max, false).ok()? {
        by_norm.entry(nv).or_default().push(v);
    }
    let mut chosen: Vec<Vec<Int>> = Vec::new();
    fn rec(
        g: &IntMat,
        e: &Lattice,
        by_norm: &BTreeMap<Int, Vec<Vec<Int>>>,
        chosen: &mut Vec<Vec<Int>>,
    ) -> bool {
        let i = chosen.len();
        if i == g.rows() {
            return true;
        }
        let Some(cands) = by_norm.get(&-g.get(i, i)) else {
            return false;
        };
        for c in cands {
            if (0..i).all(|j| -e.pair(c, &chosen[j]) == *g.get(i, j)) {
                chosen.push(c.clone());
                if rec(g, e, by_norm, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(g, &e, &by_norm, &mut chosen).then_some(chosen)
}

fn backtracking_embedding(w: &Lattice, bound: u64) -> Option<(IntMat, &'static str)> {
    let n = w.rank();
    if n > 6 {
        return None;
    }
    let three_u = Lattice::direct_sum(&[&u(), &u(), &u()]);
    let g = w.gram();
    // candidate images by norm, ordered by max-abs coordinate then lexicographically
    let b = bound as i64;
    let mut by_norm: BTreeMap<Int, Vec<Vec<Int>>> = BTreeMap::new();
    let wanted: Vec<Int> = (0..n).map(|i| g.get(i, i).clone()).collect();
    let wanted_i: Vec<i64> = wanted.iter().filter_map(|x| x.to_i64()).collect();
    for r in 1..=b {
        for_each_shell(6, r, &mut |v| {
            let nv = 2 * (v[0] * v[1] + v[2] * v[3] + v[4] * v[5]);
            if wanted_i.contains(&nv) {
                by_norm
                    .entry(int(nv))
                    .or_default()
                    .push(v.iter().map(|&c| int(c)).collect());
            }
            false
        });
    }
    let mut chosen: Vec<Vec<Int>> = Vec::new();
    fn rec(
        g: &IntMat,
        l: &Lattice,
        by_norm: &BTreeMap<Int, Vec<Vec<Int>>>,
        chosen: &mut Vec<Vec<Int>>,
    ) -> bool {
        let i = chosen.len();
        if i == g.rows() {
            return true;
        }
        let Some(cands) = by_norm.get(g.get(i, i)) else {
            return false;
        };
        for c in cands {
            if (0..i).all(|j| l.pair(c, &chosen[j]) == *g.get(i, j)) {
                chosen.push(c.clone());
                if rec(g, l, by_norm, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if !rec(g, &three_u, &by_norm, &mut chosen) {
        return None;
    }
    let mut basis = IntMat::zeros(n, K3_RANK);
    for (i, v) in chosen.iter().enumerate() {
        for (k, c) in v.iter().enumerate() {
            basis.set(i, k, c.clone());
        }
    }
    Some((basis, "backtracking"))
}
