//! Integer lattices, sublattices, discriminant groups and vector search.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{
    bilinear, hnf_nonzero, inertia, int, kernel_basis, rat_dot, rat_from_int, rat_mod, snf,
    solve_integer, vec_mat, Int, IntMat, MatError, Rat, RatMat,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate lattice")]
    Degenerate,
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("basis has {got} columns but the ambient lattice has rank {expected}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("indefinite: use find_primitive_vector")]
    Indefinite,
    #[error("enumeration budget exceeded: {needed} vectors needed, budget {budget}")]
    Budget { needed: String, budget: u64 },
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// A free ℤ-module with a symmetric integral bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMat,
}

/// Sylvester signature of a nondegenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
}

impl Signature {
    pub fn new(positives: usize, negatives: usize) -> Self {
        Signature {
            positives,
            negatives,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.positives, self.negatives)
    }
}

impl Lattice {
    pub fn new(gram: IntMat) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    /// Literal constructor; panics on a non-symmetric matrix.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Lattice::new(IntMat::from_i64(rows)).expect("symmetric literal Gram matrix")
    }

    /// Diagonal lattice ⟨a₁⟩ ⊥ ⟨a₂⟩ ⊥ …
    pub fn diagonal(entries: &[i64]) -> Self {
        let d: Vec<Int> = entries.iter().map(|&x| int(x)).collect();
        Lattice {
            gram: IntMat::diagonal(&d),
        }
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> Int {
        self.gram.det()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn pair(&self, x: &[Int], y: &[Int]) -> Int {
        bilinear(x, &self.gram, y)
    }

    pub fn norm(&self, x: &[Int]) -> Int {
        self.pair(x, x)
    }

    /// Rational pairing `x·G·yᵀ`.
    pub fn pair_rat(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let g = self.gram.to_rat();
        let xg: Vec<Rat> = (0..self.rank())
            .map(|j| x.iter().enumerate().map(|(i, xi)| xi * g.get(i, j)).sum())
            .collect();
        rat_dot(&xg, y)
    }

    /// The lattice with form multiplied by `k`, written `L(k)`.
    pub fn scaled(&self, k: i64) -> Lattice {
        Lattice {
            gram: self.gram.scale(&int(k)),
        }
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Lattice {
        let grams: Vec<&IntMat> = parts.iter().map(|p| &p.gram).collect();
        Lattice {
            gram: IntMat::block_diag(&grams),
        }
    }

    pub fn signature(&self) -> Result<Signature, LatticeError> {
        let (p, n, z) = inertia(&self.gram.to_rat());
        if z > 0 {
            return Err(LatticeError::Degenerate);
        }
        Ok(Signature::new(p, n))
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.signature(), Ok(s) if s.negatives == 0)
    }

    pub fn is_negative_definite(&self) -> bool {
        matches!(self.signature(), Ok(s) if s.positives == 0)
    }

    pub fn discriminant_group(&self) -> Result<DiscGroup, LatticeError> {
        DiscGroup::of(self)
    }

    /// Minimal number of generators of the discriminant group.
    pub fn ell(&self) -> Result<usize, LatticeError> {
        Ok(self.discriminant_group()?.ell())
    }

    /// The lattice as a sublattice of itself.
    pub fn full(&self) -> Sublattice {
        Sublattice {
            ambient: self.clone(),
            basis: IntMat::identity(self.rank()),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram)
    }
}

/// The hyperbolic plane.
pub fn u() -> Lattice {
    Lattice::from_i64(&[[0, 1], [1, 0]])
}

/// Cartan matrix of E₈ in Bourbaki numbering (node 2 attached to node 4).
pub fn e8() -> Lattice {
    cartan(8, &[(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)])
}

/// Cartan matrix of E₆ in Bourbaki numbering.
pub fn e6() -> Lattice {
    cartan(6, &[(1, 3), (3, 4), (2, 4), (4, 5), (5, 6)])
}

/// E₈(−1), the negative definite E₈ lattice.
pub fn e8_neg() -> Lattice {
    e8().scaled(-1)
}

/// A₂(−1) with Gram `[[−2,1],[1,−2]]`.
pub fn a2_neg() -> Lattice {
    Lattice::from_i64(&[[-2, 1], [1, -2]])
}

fn cartan(n: usize, edges: &[(usize, usize)]) -> Lattice {
    let mut g = IntMat::zeros(n, n);
    for i in 0..n {
        g.set(i, i, int(2));
    }
    for &(a, b) in edges {
        g.set(a - 1, b - 1, int(-1));
        g.set(b - 1, a - 1, int(-1));
    }
    Lattice { gram: g }
}

/// The K3 lattice `U ⊥ U ⊥ U ⊥ E₈(−1) ⊥ E₈(−1)` in that coordinate order.
pub fn k3() -> Lattice {
    let (uu, e) = (u(), e8_neg());
    Lattice::direct_sum(&[&uu, &uu, &uu, &e, &e])
}

/// Free rank and torsion invariant factors of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupStructure {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl GroupStructure {
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |a, b| a * b)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion
            .iter()
            .map(|t| t.to_i64().expect("small torsion factor"))
            .collect()
    }

    /// Torsion part written as `Z/a + Z/b`, or `0`.
    pub fn torsion_string(&self) -> String {
        if self.torsion.is_empty() {
            "0".into()
        } else {
            self.torsion
                .iter()
                .map(|t| format!("Z/{t}"))
                .collect::<Vec<_>>()
                .join(" + ")
        }
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel of `ℤᵏ → ℤⁿ` given by the rows of `m`.
pub fn cokernel(m: &IntMat) -> GroupStructure {
    if m.rows() == 0 {
        return GroupStructure {
            free_rank: m.cols(),
            torsion: vec![],
        };
    }
    let s = snf(m);
    GroupStructure {
        free_rank: m.cols() - s.rank(),
        torsion: s.torsion(),
    }
}

/// Discriminant group `L*/L` with its discriminant forms on a fixed generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscGroup {
    pub invariant_factors: Vec<Int>,
    /// Generators in rational coordinates with respect to the lattice basis; the
    /// i-th generator has order `invariant_factors[i]`.
    pub generators: Vec<Vec<Rat>>,
    /// `q(gᵢ)` in `[0, 2)`, present for even lattices.
    pub q_values: Option<Vec<Rat>>,
    /// `b(gᵢ, gⱼ)` in `[0, 1)`.
    pub b_values: Vec<Vec<Rat>>,
}

impl DiscGroup {
    pub fn of(l: &Lattice) -> Result<DiscGroup, LatticeError> {
        if !l.is_nondegenerate() {
            return Err(LatticeError::Degenerate);
        }
        let s = snf(l.gram());
        let diag = s.diagonal();
        let mut factors = Vec::new();
        let mut gens = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            factors.push(d.clone());
            let dr = rat_from_int(d);
            gens.push(
                s.u.row(i)
                    .iter()
                    .map(|x| rat_from_int(x) / &dr)
                    .collect::<Vec<Rat>>(),
            );
        }
        let one = Rat::one();
        let two = Rat::from_integer(int(2));
        let b_values = gens
            .iter()
            .map(|gi| {
                gens.iter()
                    .map(|gj| rat_mod(&l.pair_rat(gi, gj), &one))
                    .collect()
            })
            .collect();
        let q_values = l.is_even().then(|| {
            gens.iter()
                .map(|g| rat_mod(&l.pair_rat(g, g), &two))
                .collect()
        });
        Ok(DiscGroup {
            invariant_factors: factors,
            generators: gens,
            q_values,
            b_values,
        })
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().fold(Int::one(), |a, b| a * b)
    }

    pub fn ell(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn group(&self) -> GroupStructure {
        GroupStructure {
            free_rank: 0,
            torsion: self.invariant_factors.clone(),
        }
    }

    /// Orders as machine integers; panics on astronomically large groups.
    pub fn orders(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|d| d.to_u64().expect("discriminant order fits u64"))
            .collect()
    }

    /// Rational coordinates of `Σ cᵢ gᵢ`.
    pub fn element(&self, coeffs: &[u64]) -> Vec<Rat> {
        let n = self.generators.first().map(|g| g.len()).unwrap_or(0);
        let mut v = vec![Rat::zero(); n];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            let c = Rat::from_integer(Int::from(*c));
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += &c * gi;
            }
        }
        v
    }

    /// `q(Σ cᵢ gᵢ)` mod 2, from the stored values.
    pub fn q(&self, coeffs: &[u64]) -> Rat {
        let q = self
            .q_values
            .as_ref()
            .expect("quadratic form requires an even lattice");
        let mut acc = Rat::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            let ci = Rat::from_integer(Int::from(c));
            acc += &ci * &ci * &q[i];
            for (j, &d) in coeffs.iter().enumerate().skip(i + 1) {
                let cj = Rat::from_integer(Int::from(d));
                acc += Rat::from_integer(int(2)) * &ci * cj * &self.b_values[i][j];
            }
        }
        rat_mod(&acc, &Rat::from_integer(int(2)))
    }

    /// `b(Σ aᵢ gᵢ, Σ cⱼ gⱼ)` mod 1.
    pub fn b(&self, a: &[u64], c: &[u64]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                acc += Rat::from_integer(Int::from(ai * cj)) * &self.b_values[i][j];
            }
        }
        rat_mod(&acc, &Rat::one())
    }
}

/// A sublattice given by independent generator rows in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMat,
}

impl Sublattice {
    pub fn new(ambient: Lattice, basis: IntMat) -> Result<Self, LatticeError> {
        if basis.cols() != ambient.rank() {
            return Err(LatticeError::AmbientMismatch {
                expected: ambient.rank(),
                got: basis.cols(),
            });
        }
        if basis.rows() > 0 && basis.rank() != basis.rows() {
            return Err(LatticeError::DependentBasis);
        }
        Ok(Sublattice { ambient, basis })
    }

    /// Sublattice generated by possibly dependent rows; the basis is their HNF.
    pub fn generated_by(ambient: Lattice, rows: &IntMat) -> Self {
        let basis = if rows.rows() == 0 {
            IntMat::zeros(0, ambient.rank())
        } else {
            hnf_nonzero(rows)
        };
        Sublattice { ambient, basis }
    }

    pub fn zero(ambient: Lattice) -> Self {
        let n = ambient.rank();
        Sublattice {
            ambient,
            basis: IntMat::zeros(0, n),
        }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Induced Gram matrix `B·G·Bᵀ`.
    pub fn gram(&self) -> IntMat {
        self.basis.congruence(self.ambient.gram())
    }

    pub fn lattice(&self) -> Lattice {
        Lattice { gram: self.gram() }
    }

    /// Structure of `ambient / self`.
    pub fn quotient(&self) -> GroupStructure {
        if self.rank() == 0 {
            return GroupStructure {
                free_rank: self.ambient.rank(),
                torsion: vec![],
            };
        }
        cokernel(&self.basis)
    }

    /// Torsion invariant factors of `ambient / self`.
    pub fn quotient_torsion(&self) -> Vec<Int> {
        self.quotient().torsion
    }

    pub fn is_primitive(&self) -> bool {
        self.quotient_torsion().is_empty()
    }

    /// Smallest primitive sublattice containing `self`.
    pub fn saturation(&self) -> Sublattice {
        if self.rank() == 0 {
            return self.clone();
        }
        // the saturation is the left kernel of a basis of the orthogonal (dot-product) annihilator
        let ann = kernel_basis(&self.basis.transpose());
        let basis = if ann.rows() == 0 {
            IntMat::identity(self.ambient.rank())
        } else {
            kernel_basis(&ann.transpose())
        };
        Sublattice {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    /// All ambient vectors pairing to zero with `self`; primitive by construction.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let n = self.ambient.rank();
        if self.rank() == 0 {
            return Sublattice {
                ambient: self.ambient.clone(),
                basis: IntMat::identity(n),
            };
        }
        let m = self.ambient.gram().mul(&self.basis.transpose());
        let basis = kernel_basis(&m);
        let basis = if basis.rows() == 0 {
            IntMat::zeros(0, n)
        } else {
            basis
        };
        Sublattice {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    /// Whether `v` lies in the ℤ-span of the basis.
    pub fn contains(&self, v: &[Int]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if self.rank() == 0 {
            return false;
        }
        solve_integer(&self.basis, v).is_some()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the sublattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        if self.rank() == 0 {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        solve_integer(&self.basis, v)
    }

    /// Whether `v` lies in the rational span of the basis.
    pub fn spans_rationally(&self, v: &[Rat]) -> bool {
        let mut rows: Vec<Vec<Rat>> = (0..self.rank())
            .map(|i| self.basis.row(i).iter().map(rat_from_int).collect())
            .collect();
        let before = RatMat::from_rows(rows.clone()).rank();
        rows.push(v.to_vec());
        RatMat::from_rows(rows).rank() == before
    }

    pub fn contains_sublattice(&self, other: &Sublattice) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Equality of the underlying ℤ-modules.
    pub fn same_module(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank()
            && self.contains_sublattice(other)
            && other.contains_sublattice(self)
    }
}

/// Exact intersection `S₁ ∩ S₂`, basis in Hermite normal form.
pub fn intersect(a: &Sublattice, b: &Sublattice) -> Sublattice {
    assert_eq!(
        a.ambient, b.ambient,
        "intersection requires a common ambient lattice"
    );
    let n = a.ambient.rank();
    if a.rank() == 0 || b.rank() == 0 {
        return Sublattice::zero(a.ambient.clone());
    }
    // x·A = y·B  ⇔  (x, −y)·[A; B] = 0
    let stacked = IntMat::vstack(&[a.basis(), b.basis()]).expect("same ambient rank");
    let k = kernel_basis(&stacked);
    if k.rows() == 0 {
        return Sublattice {
            ambient: a.ambient.clone(),
            basis: IntMat::zeros(0, n),
        };
    }
    let xs = k.submatrix(0..k.rows(), 0..a.rank());
    let rows = xs.mul(a.basis());
    Sublattice::generated_by(a.ambient.clone(), &rows)
}

/// The sum `S₁ + S₂` (not necessarily primitive), basis in Hermite normal form.
pub fn sum(a: &Sublattice, b: &Sublattice) -> Sublattice {
    assert_eq!(
        a.ambient, b.ambient,
        "sum requires a common ambient lattice"
    );
    let stacked = IntMat::vstack(&[a.basis(), b.basis()]).expect("same ambient rank");
    Sublattice::generated_by(a.ambient.clone(), &stacked)
}

/// Torsion of `ambient / S`.
pub fn quotient_torsion(s: &Sublattice) -> GroupStructure {
    GroupStructure {
        free_rank: 0,
        torsion: s.quotient_torsion(),
    }
}

/// Cokernel of the pairing map `S → T*`, `s ↦ ⟨s, ·⟩|_T`.
pub fn coker_map(s: &Sublattice, t: &Sublattice) -> GroupStructure {
    assert_eq!(
        s.ambient, t.ambient,
        "pairing map requires a common ambient lattice"
    );
    let m = s.basis().mul(s.ambient.gram()).mul(&t.basis().transpose());
    if t.rank() == 0 {
        return GroupStructure::default();
    }
    cokernel(&m)
}

/// Default enumeration budget for [`norm_residues`].
pub const NORM_RESIDUE_BUDGET: u64 = 10_000_000;

/// `{x·G·xᵀ mod k}` over all `x ∈ (ℤ/k)^rank`.
pub fn norm_residues(l: &Lattice, k: u64) -> Result<BTreeSet<u64>, LatticeError> {
    norm_residues_with_budget(l, k, NORM_RESIDUE_BUDGET)
}

pub fn norm_residues_with_budget(
    l: &Lattice,
    k: u64,
    budget: u64,
) -> Result<BTreeSet<u64>, LatticeError> {
    assert!(k >= 2, "modulus must be at least 2");
    let n = l.rank();
    let total = (k as u128).checked_pow(n as u32);
    match total {
        Some(t) if t <= budget as u128 => {}
        _ => {
            return Err(LatticeError::Budget {
                needed: format!("{k}^{n}"),
                budget,
            });
        }
    }
    let km = k as i128;
    let g: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    l.gram()
                        .get(i, j)
                        .mod_floor(&Int::from(k))
                        .to_i128()
                        .expect("reduced")
                })
                .collect()
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut x = vec![0i128; n];
    loop {
        let mut s: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                s = (s + x[i] * g[i][j] % km * x[j]) % km;
            }
        }
        out.insert(s.rem_euclid(km) as u64);
        if out.len() as u64 == k {
            break;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            x[i] += 1;
            if x[i] < km {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

fn is_primitive_vector(v: &[Int]) -> bool {
    v.iter().fold(Int::zero(), |a, b| a.gcd(b)).is_one()
}

/// Calls `f` on every integer vector of the given length with max-abs exactly
/// `r`, in lexicographic order where each coordinate is ordered
/// `0, 1, −1, 2, −2, …`. Stops early when `f` returns true.
pub(crate) fn for_each_shell(n: usize, r: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    let values: Vec<i64> = std::iter::once(0)
        .chain((1..=r).flat_map(|a| [a, -a]))
        .collect();
    let mut idx = vec![0usize; n];
    let mut x = vec![0i64; n];
    loop {
        if x.iter().any(|c| c.abs() == r) && f(&x) {
            return true;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < values.len() {
                x[i] = values[idx[i]];
                break;
            }
            idx[i] = 0;
            x[i] = 0;
        }
    }
}

/// A primitive vector of the given norm with coordinates in `[−bound, bound]`.
/// `None` means none was found within the bound; it is not a nonexistence proof.
///
/// Candidates are visited by increasing max-abs coordinate, then
/// lexicographically with coordinates ordered `0, 1, −1, 2, −2, …`.
pub fn find_primitive_vector(l: &Lattice, norm: &Int, bound: u64) -> Option<Vec<Int>> {
    let n = l.rank();
    if n == 0 {
        return None;
    }
    let g: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| l.gram().get(i, j).to_i128().expect("small Gram"))
                .collect()
        })
        .collect();
    let target = norm.to_i128()?;
    let mut found = None;
    for r in 1..=bound as i64 {
        let hit = for_each_shell(n, r, &mut |x| {
            let mut s: i128 = 0;
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                let mut row = 0i128;
                for j in 0..n {
                    row += g[i][j] * x[j] as i128;
                }
                s += row * x[i] as i128;
            }
            if s != target {
                return false;
            }
            let v: Vec<Int> = x.iter().map(|&c| int(c)).collect();
            if is_primitive_vector(&v) {
                found = Some(v);
                true
            } else {
                false
            }
        });
        if hit {
            return found;
        }
    }
    None
}

/// All nonzero `x` with `x·G·xᵀ ≤ bound` for positive definite `G`, up to sign
/// when `up_to_sign` is set. Fincke–Pohst enumeration with an exact norm check.
pub fn short_vectors(
    l: &Lattice,
    bound: &Int,
    up_to_sign: bool,
) -> Result<Vec<(Vec<Int>, Int)>, LatticeError> {
    if !l.is_positive_definite() {
        return Err(LatticeError::Indefinite);
    }
    let n = l.rank();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| l.gram().get(i, j).to_f64().unwrap())
                .collect()
        })
        .collect();
    // q[i][i] > 0 and Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q = g.clone();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l2 in k..n {
                q[k][l2] -= q[k][i] * q[i][l2];
            }
        }
    }
    let c = bound.to_f64().unwrap();
    let eps = 1e-9 * (1.0 + c.abs());
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate_fp(&q, n, n, c + eps, &mut x, &mut |x| {
        if x.iter().all(|&v| v == 0) {
            return;
        }
        if up_to_sign {
            let first = x.iter().find(|&&v| v != 0).unwrap();
            if *first < 0 {
                return;
            }
        }
        let v: Vec<Int> = x.iter().map(|&c| int(c)).collect();
        let nv = l.norm(&v);
        if &nv <= bound {
            out.push((v, nv));
        }
    });
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn enumerate_fp(
    q: &[Vec<f64>],
    n: usize,
    level: usize,
    remaining: f64,
    x: &mut Vec<i64>,
    f: &mut dyn FnMut(&[i64]),
) {
    if level == 0 {
        f(x);
        return;
    }
    let i = level - 1;
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = (remaining.max(0.0) / q[i][i]).sqrt();
    let lo = (center - radius - 1e-9).ceil() as i64;
    let hi = (center + radius + 1e-9).floor() as i64;
    for v in lo..=hi {
        let t = v as f64 - center;
        let used = q[i][i] * t * t;
        if used > remaining + 1e-9 {
            continue;
        }
        x[i] = v;
        enumerate_fp(q, n, level - 1, remaining - used, x, f);
    }
    x[i] = 0;
}

/// Exact decision whether the positive definite lattice represents `m`.
pub fn definite_form_represents(l: &Lattice, m: &Int) -> Result<bool, LatticeError> {
    if !l.is_positive_definite() {
        return Err(LatticeError::Indefinite);
    }
    if m.is_negative() {
        return Ok(false);
    }
    if m.is_zero() {
        return Ok(true);
    }
    Ok(short_vectors(l, m, true)?.iter().any(|(_, nv)| nv == m))
}

/// A rational vector of positive norm in the span of `rows`, if one exists.
/// Deterministic: basis rows first, then sums and differences of pairs, then
/// a rational Gram–Schmidt sweep.
pub fn positive_vector(g: &IntMat, rows: &IntMat) -> Option<Vec<Rat>> {
    let k = rows.rows();
    let norms: Vec<Int> = (0..k)
        .map(|i| bilinear(rows.row(i), g, rows.row(i)))
        .collect();
    if let Some(i) = norms.iter().position(|n| n.is_positive()) {
        return Some(rows.row(i).iter().map(rat_from_int).collect());
    }
    for i in 0..k {
        for j in i + 1..k {
            let b = bilinear(rows.row(i), g, rows.row(j));
            for s in [1i64, -1] {
                let nv = &norms[i] + &norms[j] + int(2 * s) * &b;
                if nv.is_positive() {
                    let v: Vec<Int> = rows
                        .row(i)
                        .iter()
                        .zip(rows.row(j))
                        .map(|(a, c)| a + int(s) * c)
                        .collect();
                    return Some(v.iter().map(rat_from_int).collect());
                }
            }
        }
    }
    let gr = g.to_rat();
    let pair = |x: &[Rat], y: &[Rat]| -> Rat {
        let xg: Vec<Rat> = (0..gr.cols())
            .map(|j| x.iter().enumerate().map(|(i, xi)| xi * gr.get(i, j)).sum())
            .collect();
        rat_dot(&xg, y)
    };
    let mut vs: Vec<Vec<Rat>> = (0..k)
        .map(|i| rows.row(i).iter().map(rat_from_int).collect())
        .collect();
    while !vs.is_empty() {
        if let Some(v) = vs.iter().find(|v| pair(v, v).is_positive()) {
            return Some(v.clone());
        }
        match vs.iter().position(|v| !pair(v, v).is_zero()) {
            Some(p) => {
                let vp = vs.remove(p);
                let np = pair(&vp, &vp);
                for v in vs.iter_mut() {
                    let c = pair(v, &vp) / &np;
                    for (a, b) in v.iter_mut().zip(&vp) {
                        *a -= &c * b;
                    }
                }
            }
            None => {
                for i in 0..vs.len() {
                    for j in i + 1..vs.len() {
                        let b = pair(&vs[i], &vs[j]);
                        if !b.is_zero() {
                            let s = if b.is_positive() {
                                Rat::one()
                            } else {
                                -Rat::one()
                            };
                            return Some(
                                vs[i].iter().zip(&vs[j]).map(|(a, c)| a + &s * c).collect(),
                            );
                        }
                    }
                }
                return None;
            }
        }
    }
    None
}

/// Clears denominators of a rational vector and divides by the content.
pub fn primitive_integer_multiple(v: &[Rat]) -> Vec<Int> {
    let den = v.iter().fold(Int::one(), |a, x| a.lcm(x.denom()));
    let ints: Vec<Int> = v
        .iter()
        .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |a, b| a.gcd(b));
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

/// Image of `v` under `x ↦ x·B` for an integer row vector.
pub fn image(v: &[Int], b: &IntMat) -> Vec<Int> {
    vec_mat(v, b)
}
