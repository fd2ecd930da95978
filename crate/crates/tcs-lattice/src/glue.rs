//! Gluing lattices: perpendicular sums, orthogonal pushouts along a common
//! negative definite sublattice, and finite-index overlattices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::{
    hnf_nonzero, int, rat_from_int, snf, unimodular_inverse, Int, IntMat, Rat, RatMat,
};
use crate::lattice::{DiscGroup, Lattice, LatticeError, Signature, Sublattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlueError {
    #[error("pushout is not integral: <plus[{plus_index}], minus[{minus_index}]> = {value}")]
    IntegralityFailure {
        plus_index: usize,
        minus_index: usize,
        value: Rat,
    },
    #[error("embedding of R into N{0} is not primitive")]
    NonPrimitiveEmbedding(char),
    #[error("embedding of R into N{0} is not an isometry")]
    NotIsometric(char),
    #[error("R is not negative definite")]
    RNotNegativeDefinite,
    #[error("pushout is degenerate")]
    Degenerate,
    #[error("pushout is not even")]
    NotEven,
    #[error("pushout condition failed: {0}")]
    Condition(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Block-diagonal sum `N₊ ⊥ N₋`.
pub fn perpendicular_sum(n_plus: &Lattice, n_minus: &Lattice) -> Lattice {
    Lattice::direct_sum(&[n_plus, n_minus])
}

/// Data for the orthogonal pushout `N₊ ⊥_R N₋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutSpec {
    pub n_plus: Lattice,
    pub n_minus: Lattice,
    pub r: Lattice,
    /// Rows are the images of the basis of R in N₊ coordinates.
    pub emb_plus: IntMat,
    /// Rows are the images of the basis of R in N₋ coordinates.
    pub emb_minus: IntMat,
}

impl PushoutSpec {
    /// Gluing along the rank-one lattice spanned by `x₊ ∈ N₊` and `x₋ ∈ N₋`.
    pub fn rank_one(n_plus: Lattice, x_plus: &[Int], n_minus: Lattice, x_minus: &[Int]) -> Self {
        let r = Lattice::diagonal(&[]);
        let norm = n_plus.norm(x_plus);
        let r = if norm.is_zero() {
            r
        } else {
            Lattice::new(IntMat::diagonal(&[norm])).expect("1x1 symmetric")
        };
        PushoutSpec {
            emb_plus: IntMat::row_vector(x_plus),
            emb_minus: IntMat::row_vector(x_minus),
            n_plus,
            n_minus,
            r,
        }
    }

    /// Gluing with `R = 0`.
    pub fn perpendicular(n_plus: Lattice, n_minus: Lattice) -> Self {
        let (a, b) = (n_plus.rank(), n_minus.rank());
        PushoutSpec {
            n_plus,
            n_minus,
            r: Lattice::diagonal(&[]),
            emb_plus: IntMat::zeros(0, a),
            emb_minus: IntMat::zeros(0, b),
        }
    }
}

/// A successful pushout. `plus_basis` and `minus_basis` give the images of the
/// N± bases in the coordinates of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub w: Lattice,
    pub plus_basis: IntMat,
    pub minus_basis: IntMat,
}

impl Pushout {
    pub fn n_plus(&self) -> Sublattice {
        Sublattice::new(self.w.clone(), self.plus_basis.clone()).expect("independent images")
    }

    pub fn n_minus(&self) -> Sublattice {
        Sublattice::new(self.w.clone(), self.minus_basis.clone()).expect("independent images")
    }
}

/// Cross pairing `⟨N₊, N₋⟩` forced by `N₊⊥ ⊂ N₋`: `G₊E₊ᵀ G_R⁻¹ E₋G₋`.
pub fn cross_pairing(spec: &PushoutSpec) -> Result<RatMat, GlueError> {
    let (a, b) = (spec.n_plus.rank(), spec.n_minus.rank());
    if spec.r.rank() == 0 {
        return Ok(RatMat::zeros(a, b));
    }
    let gr_inv = spec
        .r
        .gram()
        .to_rat()
        .inverse()
        .map_err(|_| GlueError::RNotNegativeDefinite)?;
    let left = spec.n_plus.gram().mul(&spec.emb_plus.transpose()).to_rat();
    let right = spec.emb_minus.mul(spec.n_minus.gram()).to_rat();
    Ok(left.mul(&gr_inv).mul(&right))
}

/// Builds `W = N₊ ⊥_R N₋` and checks every defining condition.
pub fn orthogonal_pushout(spec: &PushoutSpec) -> Result<Pushout, GlueError> {
    let (a, b, rho) = (spec.n_plus.rank(), spec.n_minus.rank(), spec.r.rank());
    if spec.emb_plus.rows() != rho || spec.emb_minus.rows() != rho {
        return Err(GlueError::Condition(
            "embedding row count differs from rank of R".into(),
        ));
    }
    if rho > 0 {
        if !spec.r.is_negative_definite() {
            return Err(GlueError::RNotNegativeDefinite);
        }
        for (emb, n, side) in [
            (&spec.emb_plus, &spec.n_plus, '+'),
            (&spec.emb_minus, &spec.n_minus, '-'),
        ] {
            if &emb.congruence(n.gram()) != spec.r.gram() {
                return Err(GlueError::NotIsometric(side));
            }
            let sub = Sublattice::new(n.clone(), emb.clone())
                .map_err(|_| GlueError::NonPrimitiveEmbedding(side))?;
            if !sub.is_primitive() {
                return Err(GlueError::NonPrimitiveEmbedding(side));
            }
        }
    }
    let p = cross_pairing(spec)?;
    for i in 0..a {
        for j in 0..b {
            if !p.get(i, j).is_integer() {
                return Err(GlueError::IntegralityFailure {
                    plus_index: i,
                    minus_index: j,
                    value: p.get(i, j).clone(),
                });
            }
        }
    }
    // Gram of the generating set (N₊ basis, N₋ basis); its radical contains (E₊, −E₋)
    let n = a + b;
    let mut m = IntMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = match (i < a, j < a) {
                (true, true) => spec.n_plus.gram().get(i, j).clone(),
                (false, false) => spec.n_minus.gram().get(i - a, j - a).clone(),
                (true, false) => p.get(i, j - a).to_integer(),
                (false, true) => p.get(j, i - a).to_integer(),
            };
            m.set(i, j, v);
        }
    }
    let (w_gram, images) = if rho == 0 {
        (m, IntMat::identity(n))
    } else {
        let rel =
            IntMat::hstack(&[&spec.emb_plus, &spec.emb_minus.neg()]).expect("equal row counts");
        let s = snf(&rel);
        if s.diagonal().iter().any(|d| !d.is_one()) {
            return Err(GlueError::Condition(
                "identification of R is not saturated".into(),
            ));
        }
        // rowspace(rel) = first ρ rows of V⁻¹; the rest give a basis of the quotient
        let vi = unimodular_inverse(&s.v);
        let basis = vi.submatrix(rho..n, 0..n);
        (basis.congruence(&m), s.v.submatrix(0..n, rho..n))
    };
    let w = Lattice::new(w_gram)?;
    if !w.is_nondegenerate() {
        return Err(GlueError::Degenerate);
    }
    if !w.is_even() {
        return Err(GlueError::NotEven);
    }
    let width = images.cols();
    let plus_basis = images.submatrix(0..a, 0..width);
    let minus_basis = images.submatrix(a..n, 0..width);
    let out = Pushout {
        w,
        plus_basis,
        minus_basis,
    };
    let (np, nm) = (out.n_plus(), out.n_minus());
    if !np.is_primitive() {
        return Err(GlueError::Condition("N+ is not primitive in W".into()));
    }
    if !nm.is_primitive() {
        return Err(GlueError::Condition("N- is not primitive in W".into()));
    }
    if !nm.contains_sublattice(&np.orthogonal_complement()) {
        return Err(GlueError::Condition(
            "N+ perp is not contained in N-".into(),
        ));
    }
    if !np.contains_sublattice(&nm.orthogonal_complement()) {
        return Err(GlueError::Condition(
            "N- perp is not contained in N+".into(),
        ));
    }
    Ok(out)
}

/// Whether `W` has signature `(2, r₊ + r₋ − ρ − 2)`.
pub fn pushout_signature_check(w: &Lattice, r_plus: usize, r_minus: usize, rho: usize) -> bool {
    match (w.signature(), (r_plus + r_minus).checked_sub(rho + 2)) {
        (Ok(sig), Some(neg)) => sig == Signature::new(2, neg),
        _ => false,
    }
}

/// Default budget on `|A(N₊)|·|A(N₋)|` for overlattice enumeration.
pub const OVERLATTICE_BUDGET: u64 = 1_000_000;

/// An even overlattice of `N₊ ⊥ N₋` in which both N± stay primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlatticeSpec {
    pub base: Lattice,
    /// Generators of the glue group as rational vectors in base coordinates.
    pub glue_group: Vec<Vec<Rat>>,
    /// Invariant factors of the glue group, which is isomorphic to its
    /// projections to both discriminant groups.
    pub glue_type: Vec<Int>,
    pub index: u64,
    /// Basis of the overlattice in base coordinates.
    pub basis: Vec<Vec<Rat>>,
    pub lattice: Lattice,
}

type Elem = Vec<u64>;

struct FiniteGroup {
    orders: Vec<u64>,
}

impl FiniteGroup {
    fn new(disc: &DiscGroup) -> Self {
        FiniteGroup {
            orders: disc.orders(),
        }
    }

    fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    fn zero(&self) -> Elem {
        vec![0; self.orders.len()]
    }

    fn add(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), m)| (a + b) % m)
            .collect()
    }

    fn elements(&self) -> Vec<Elem> {
        let mut out = vec![self.zero()];
        for (i, &m) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for e in &out {
                for c in 0..m {
                    let mut f = e.clone();
                    f[i] = c;
                    next.push(f);
                }
            }
            out = next;
        }
        out
    }

    fn order_of(&self, x: &Elem) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (a, m)| acc.lcm(&(m / a.gcd(m))))
    }

    fn closure(&self, gens: &[Elem]) -> BTreeSet<Elem> {
        let mut set = BTreeSet::new();
        let mut queue = VecDeque::new();
        set.insert(self.zero());
        queue.push_back(self.zero());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        set
    }
}

/// Subgroups of order at most `max_order`, each with the generator list that
/// produced it, in a deterministic order.
fn subgroups(g: &FiniteGroup, max_order: u64) -> Vec<(Vec<Elem>, BTreeSet<Elem>)> {
    let elements = g.elements();
    let mut seen: BTreeMap<BTreeSet<Elem>, Vec<Elem>> = BTreeMap::new();
    let trivial = g.closure(&[]);
    seen.insert(trivial.clone(), vec![]);
    let mut frontier = vec![(vec![], trivial)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (gens, set) in &frontier {
            for e in &elements {
                if set.contains(e) {
                    continue;
                }
                let mut ng: Vec<Elem> = gens.clone();
                ng.push(e.clone());
                let h = g.closure(&ng);
                if h.len() as u64 > max_order || seen.contains_key(&h) {
                    continue;
                }
                seen.insert(h.clone(), ng.clone());
                next.push((ng, h));
            }
        }
        frontier = next;
    }
    let mut out: Vec<(Vec<Elem>, BTreeSet<Elem>)> =
        seen.into_iter().map(|(h, gens)| (gens, h)).collect();
    out.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)));
    out
}

/// Extends generator images to a homomorphism on the closure, if consistent.
fn extend_hom(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<BTreeMap<Elem, Elem>> {
    let mut map = BTreeMap::new();
    let mut queue = VecDeque::new();
    map.insert(src.zero(), dst.zero());
    queue.push_back(src.zero());
    while let Some(x) = queue.pop_front() {
        let fx = map[&x].clone();
        for (g, fg) in gens.iter().zip(images) {
            let y = src.add(&x, g);
            let fy = dst.add(&fx, fg);
            match map.get(&y) {
                Some(existing) if existing != &fy => return None,
                Some(_) => {}
                None => {
                    map.insert(y.clone(), fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}

fn glue_invariants(src: &FiniteGroup, gens: &[Elem]) -> Vec<Int> {
    // relation lattice of the subgroup inside ℤ^gens, via the orders of the ambient cyclic factors
    let k = gens.len();
    if k == 0 {
        return vec![];
    }
    let r = src.orders.len();
    // ℤ^k → ⊕ ℤ/mᵢ; subgroup ≅ ℤ^k / kernel; compute via SNF of [G; diag(m)] presentation
    let mut rows: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| g.iter().map(|&c| Int::from(c)).collect())
        .collect();
    for (i, &m) in src.orders.iter().enumerate() {
        let mut v = vec![Int::zero(); r];
        v[i] = Int::from(m);
        rows.push(v);
    }
    let mat = IntMat::from_rows(rows, r).expect("uniform rows");
    let ker = crate::exactalg::kernel_basis(&mat);
    let rel = ker.submatrix(0..ker.rows(), 0..k);
    snf(&rel).torsion()
}

/// All even overlattices of `N₊ ⊥ N₋` of index at most `max_index` in which
/// both N± remain primitive.
pub fn enumerate_overlattices(
    n_plus: &Lattice,
    n_minus: &Lattice,
    max_index: u64,
) -> Result<Vec<OverlatticeSpec>, GlueError> {
    enumerate_overlattices_with_budget(n_plus, n_minus, max_index, OVERLATTICE_BUDGET)
}

pub fn enumerate_overlattices_with_budget(
    n_plus: &Lattice,
    n_minus: &Lattice,
    max_index: u64,
    budget: u64,
) -> Result<Vec<OverlatticeSpec>, GlueError> {
    if !n_plus.is_even() || !n_minus.is_even() {
        return Err(GlueError::NotEven);
    }
    let dp = n_plus.discriminant_group()?;
    let dm = n_minus.discriminant_group()?;
    let (gp, gm) = (FiniteGroup::new(&dp), FiniteGroup::new(&dm));
    let total = gp.size().saturating_mul(gm.size());
    if total > budget {
        return Err(GlueError::Budget(format!(
            "|A+|·|A-| = {total} exceeds {budget}"
        )));
    }
    let base = perpendicular_sum(n_plus, n_minus);
    let (a, b) = (n_plus.rank(), n_minus.rank());
    let minus_elems = gm.elements();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (gens, h) in subgroups(&gp, max_index.min(gm.size())) {
        // candidate images respect generator orders
        let choices: Vec<Vec<&Elem>> = gens
            .iter()
            .map(|g| {
                let o = gp.order_of(g);
                minus_elems
                    .iter()
                    .filter(|y| o % gm.order_of(y) == 0)
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; gens.len()];
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        loop {
            let images: Vec<Elem> = idx
                .iter()
                .zip(&choices)
                .map(|(&i, c)| c[i].clone())
                .collect();
            if let Some(phi) = extend_hom(&gp, &gm, &gens, &images) {
                let injective = phi.values().collect::<BTreeSet<_>>().len() == h.len();
                let two = Rat::from_integer(int(2));
                let anti = injective
                    && phi.iter().all(|(x, y)| {
                        crate::exactalg::rat_mod(&(dp.q(x) + dm.q(y)), &two).is_zero()
                    });
                if anti {
                    let glue: Vec<Vec<Rat>> = gens
                        .iter()
                        .zip(&images)
                        .map(|(x, y)| {
                            let mut v = dp.element(x);
                            v.extend(dm.element(y));
                            v
                        })
                        .collect();
                    let (basis, key) = overlattice_basis(a + b, &glue);
                    if seen.insert(key) {
                        let gram =
                            rational_gram(base.gram(), &basis).to_int().ok_or_else(|| {
                                GlueError::Condition("glued lattice is not integral".into())
                            })?;
                        out.push(OverlatticeSpec {
                            base: base.clone(),
                            glue_type: glue_invariants(&gp, &gens),
                            glue_group: glue,
                            index: h.len() as u64,
                            basis,
                            lattice: Lattice::new(gram)?,
                        });
                    }
                }
            }
            if !advance(&mut idx, &choices) {
                break;
            }
        }
    }
    Ok(sorted(out))
}

/// Mixed-radix increment; false once every index has wrapped.
fn advance<T>(idx: &mut [usize], choices: &[Vec<T>]) -> bool {
    for (i, c) in idx.iter_mut().zip(choices) {
        *i += 1;
        if *i < c.len() {
            return true;
        }
        *i = 0;
    }
    false
}

fn sorted(mut v: Vec<OverlatticeSpec>) -> Vec<OverlatticeSpec> {
    v.sort_by(|x, y| {
        x.index
            .cmp(&y.index)
            .then_with(|| x.glue_type.cmp(&y.glue_type))
    });
    v
}

/// HNF basis of `ℤⁿ + Σ ℤ·glue` and an integer key identifying it.
fn overlattice_basis(n: usize, glue: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, IntMat) {
    let den = glue
        .iter()
        .flatten()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let mut rows: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { den.clone() } else { Int::zero() })
                .collect()
        })
        .collect();
    for g in glue {
        rows.push(
            g.iter()
                .map(|x| (x * rat_from_int(&den)).to_integer())
                .collect(),
        );
    }
    let h = hnf_nonzero(&IntMat::from_rows(rows, n).expect("uniform rows"));
    let d = rat_from_int(&den);
    let basis = (0..h.rows())
        .map(|i| h.row(i).iter().map(|x| rat_from_int(x) / &d).collect())
        .collect();
    (basis, h)
}

fn rational_gram(g: &IntMat, basis: &[Vec<Rat>]) -> RatMat {
    let b = RatMat::from_rows(basis.to_vec());
    b.mul(&g.to_rat()).mul(&b.transpose())
}

/// Checks `det(W)·[W : N₊ ⊥ N₋]² = det(N₊)·det(N₋)` for an overlattice.
pub fn determinant_bookkeeping(spec: &OverlatticeSpec) -> bool {
    let idx = Int::from(spec.index);
    spec.lattice.det() * &idx * &idx == spec.base.det()
}

/// Whether all generators of the glue group are isotropic for `q₊ ⊕ q₋`.
pub fn glue_is_isotropic(spec: &OverlatticeSpec) -> bool {
    spec.glue_group.iter().all(|g| {
        let n = spec.base.pair_rat(g, g);
        crate::exactalg::rat_mod(&n, &Rat::from_integer(int(2))).is_zero()
    })
}
