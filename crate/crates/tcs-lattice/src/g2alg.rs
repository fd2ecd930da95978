//! Exact pointwise G₂, SU(3) and SU(2) linear algebra: the model forms on
//! ℝ⁷, cross products, metric recovery from a 3-form and calibration tests.
//!
//! Form indices are 1-based as in `dx¹²³`; vectors are plain coordinate
//! vectors, so `e₁` is `basis(7, 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::{inertia, rat, Rat, RatMat};

pub type Vector = Vec<Rat>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum G2Error {
    #[error("the metric is degenerate")]
    DegenerateMetric,
    #[error("the vectors do not span a {0}-dimensional subspace")]
    DegenerateSpan(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("the 3-form is degenerate")]
    DegenerateForm,
    #[error("the 3-form is not positive")]
    NotPositive,
    #[error("the volume of the 3-form is not a rational 9th power")]
    NotExact,
    #[error("u has norm {0}, not 1")]
    NotUnit(Rat),
    #[error("the phase has cos² + sin² = {0}, not 1")]
    NotUnitPhase(Rat),
}

/// Standard basis vector `e_i` of ℝⁿ, 1-based.
pub fn basis(n: usize, i: usize) -> Vector {
    (1..=n)
        .map(|j| if j == i { Rat::one() } else { Rat::zero() })
        .collect()
}

pub fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| rat(x, 1)).collect()
}

fn add_vec(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale_vec(k: &Rat, a: &[Rat]) -> Vector {
    a.iter().map(|x| k * x).collect()
}

/// Sorts `idx` in place; the sign of the permutation, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    idx.windows(2).all(|w| w[0] < w[1]).then_some(sign)
}

/// An alternating k-form on ℝⁿ with rational coefficients.
///
/// Keys are strictly increasing 0-based index tuples; zero coefficients are
/// never stored, so equality is equality of forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Rat>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Form {
        Form {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The monomial `dx^{i₁…i_k}` with 1-based labels in any order.
    pub fn dx(dim: usize, labels: &[usize]) -> Form {
        let mut f = Form::zero(dim, labels.len());
        f.add_term(labels, &Rat::one());
        f
    }

    /// Sum of `c · dx^{labels}` over integer coefficients.
    pub fn from_terms(dim: usize, degree: usize, terms: &[(i64, &[usize])]) -> Form {
        let mut f = Form::zero(dim, degree);
        for (c, labels) in terms {
            assert_eq!(labels.len(), degree, "term of the wrong degree");
            f.add_term(labels, &rat(*c, 1));
        }
        f
    }

    fn add_term(&mut self, labels: &[usize], c: &Rat) {
        assert!(
            labels.iter().all(|&i| (1..=self.dim).contains(&i)),
            "index out of range"
        );
        let mut idx: Vec<usize> = labels.iter().map(|i| i - 1).collect();
        if let Some(s) = sort_sign(&mut idx) {
            self.add_sorted(idx, &(c * rat(s as i64, 1)));
        }
    }

    fn add_sorted(&mut self, idx: Vec<usize>, c: &Rat) {
        let entry = self.coeffs.entry(idx).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `dx^{labels}` (1-based, any order).
    pub fn coeff(&self, labels: &[usize]) -> Rat {
        let mut idx: Vec<usize> = labels.iter().map(|i| i - 1).collect();
        match sort_sign(&mut idx) {
            Some(s) => self
                .coeffs
                .get(&idx)
                .map(|c| c * rat(s as i64, 1))
                .unwrap_or_else(Rat::zero),
            None => Rat::zero(),
        }
    }

    /// Nonzero terms with 0-based sorted indices.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Rat)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    fn same_shape(&self, other: &Form) {
        assert_eq!(
            (self.dim, self.degree),
            (other.dim, other.degree),
            "forms of different shape"
        );
    }

    pub fn add(&self, other: &Form) -> Form {
        self.same_shape(other);
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_sorted(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Form {
        if k.is_zero() {
            return Form::zero(self.dim, self.degree);
        }
        Form {
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, v)| (i.clone(), v * k))
                .collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Rat::one())
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.dim, other.dim, "forms on different spaces");
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(s) = sort_sign(&mut idx) {
                    out.add_sorted(idx, &(x * y * rat(s as i64, 1)));
                }
            }
        }
        out
    }

    /// Interior product `v ⌟ self`, inserting `v` in the first slot.
    pub fn interior(&self, v: &[Rat]) -> Form {
        assert_eq!(v.len(), self.dim, "vector of the wrong dimension");
        assert!(self.degree > 0, "interior product of a function");
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (pos, &i) in idx.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| *p != pos)
                    .map(|(_, &j)| j)
                    .collect();
                let sign = if pos % 2 == 0 {
                    Rat::one()
                } else {
                    -Rat::one()
                };
                out.add_sorted(rest, &(c * &v[i] * sign));
            }
        }
        out
    }

    /// `α(v₁, …, v_k)` with `dx^I(v₁, …, v_k) = det(v_j[I_l])`.
    pub fn eval(&self, vs: &[&[Rat]]) -> Rat {
        assert_eq!(vs.len(), self.degree, "wrong number of arguments");
        self.coeffs
            .iter()
            .map(|(idx, c)| {
                let rows = idx
                    .iter()
                    .map(|&i| vs.iter().map(|v| v[i].clone()).collect())
                    .collect();
                c * RatMat::from_rows(rows).det()
            })
            .sum()
    }

    /// Pullback along the linear map ℝᵐ → ℝⁿ sending `e_j` to `basis[j]`.
    pub fn pullback(&self, basis_vectors: &[Vector]) -> Form {
        let m = basis_vectors.len();
        let mut out = Form::zero(m, self.degree);
        if self.degree > m {
            return out;
        }
        for idx in combinations(m, self.degree) {
            let args: Vec<&[Rat]> = idx.iter().map(|&j| basis_vectors[j].as_slice()).collect();
            let c = self.eval(&args);
            if !c.is_zero() {
                out.add_sorted(idx, &c);
            }
        }
        out
    }

    /// The coefficient of `dx^{1…n}` of a top-degree form.
    pub fn top_coefficient(&self) -> Rat {
        assert_eq!(self.degree, self.dim, "not a top-degree form");
        self.coeffs
            .values()
            .next()
            .cloned()
            .unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.coeffs.iter().enumerate() {
            let labels: String = idx.iter().map(|i| (i + 1).to_string()).collect();
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            match (n, sign) {
                (0, "+") => {}
                (0, _) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "dx^{labels}")?;
        }
        Ok(())
    }
}

/// Increasing k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A symmetric bilinear form on ℝⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    g: RatMat,
}

impl Metric {
    pub fn new(g: RatMat) -> Result<Metric, G2Error> {
        if !g.is_symmetric() {
            return Err(G2Error::Dimension(
                "metric must be a symmetric square matrix".into(),
            ));
        }
        Ok(Metric { g })
    }

    pub fn identity(n: usize) -> Metric {
        Metric {
            g: RatMat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.g
    }

    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .map(|(i, j)| &u[i] * self.g.get(i, j) * &v[j])
            .sum()
    }

    pub fn norm2(&self, u: &[Rat]) -> Rat {
        self.pair(u, u)
    }

    /// `(positive, negative, zero)` inertia.
    pub fn signature(&self) -> (usize, usize, usize) {
        inertia(&self.g)
    }

    /// The vector `w` with `g(w, ·) = a`.
    pub fn raise(&self, a: &[Rat]) -> Result<Vector, G2Error> {
        let inv = self.g.inverse().map_err(|_| G2Error::DegenerateMetric)?;
        Ok((0..self.dim())
            .map(|i| (0..self.dim()).map(|j| inv.get(i, j) * &a[j]).sum())
            .collect())
    }

    /// The 1-form `g(u, ·)`.
    pub fn lower(&self, u: &[Rat]) -> Form {
        let mut f = Form::zero(self.dim(), 1);
        for j in 0..self.dim() {
            let c: Rat = (0..self.dim()).map(|i| &u[i] * self.g.get(i, j)).sum();
            if !c.is_zero() {
                f.add_sorted(vec![j], &c);
            }
        }
        f
    }

    /// `det(u_i · u_j)`, the squared volume of the parallelotope.
    pub fn gram_det(&self, vs: &[&[Rat]]) -> Rat {
        let rows = vs
            .iter()
            .map(|u| vs.iter().map(|v| self.pair(u, v)).collect())
            .collect();
        RatMat::from_rows(rows).det()
    }
}

/// A real number that is exact whenever possible.
#[derive(Clone, Debug, PartialEq)]
pub enum RealScalar {
    Exact(Rat),
    /// Relative accuracy about 10⁻¹²; everything derived from it is tainted.
    Approx(f64),
}

impl RealScalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, RealScalar::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            RealScalar::Exact(r) => Some(r),
            RealScalar::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealScalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            RealScalar::Approx(x) => *x,
        }
    }
}

/// Real n-th root of a rational, exact when it is a rational n-th power.
pub fn real_root(x: &Rat, n: u32) -> RealScalar {
    let exact = |v: &BigInt| {
        let r = v.abs().nth_root(n);
        (r.pow(n) == v.abs()).then_some(r)
    };
    if let (Some(p), Some(q)) = (exact(x.numer()), exact(x.denom())) {
        let r = Rat::new(p, q);
        return RealScalar::Exact(if x.is_negative() { -r } else { r });
    }
    let f = x.to_f64().unwrap_or(f64::NAN);
    RealScalar::Approx(f.signum() * f.abs().powf(1.0 / n as f64))
}

/// The data `(B_φ, vol_φ, g_φ)` of a nondegenerate 3-form on ℝ⁷.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedMetric {
    /// `B_φ` as a matrix of `dx¹…⁷` coefficients.
    pub b: RatMat,
    /// `vol_φ` as a multiple of `dx¹…⁷`.
    pub vol: RealScalar,
    /// Inertia of `g_φ`, exact on either path.
    pub signature: (usize, usize, usize),
    /// Positive definite and inducing the standard orientation.
    pub positive: bool,
}

impl InducedMetric {
    /// `g_φ = B_φ / vol_φ` on the exact path.
    pub fn metric(&self) -> Option<Metric> {
        let v = self.vol.exact()?;
        Some(Metric {
            g: self.b.scale(&v.recip()),
        })
    }

    /// `g_φ` in floating point, the only form available on the tainted path.
    pub fn metric_f64(&self) -> Vec<Vec<f64>> {
        let v = self.vol.to_f64();
        (0..7)
            .map(|i| {
                (0..7)
                    .map(|j| self.b.get(i, j).to_f64().unwrap_or(f64::NAN) / v)
                    .collect()
            })
            .collect()
    }

    pub fn tainted(&self) -> bool {
        !self.vol.is_exact()
    }
}

/// Recovers the metric and volume of a 3-form on ℝ⁷ from
/// `B_φ(v, w) = (1/6)(v ⌟ φ) ∧ (w ⌟ φ) ∧ φ`, `vol⁹ = det K_φ`, `g ⊗ vol = B`.
/// `None` when `det K_φ = 0`.
pub fn metric_from_3form(phi: &Form) -> Option<InducedMetric> {
    assert_eq!(
        (phi.dim(), phi.degree()),
        (7, 3),
        "expected a 3-form on R^7"
    );
    let contractions: Vec<Form> = (1..=7).map(|i| phi.interior(&basis(7, i))).collect();
    let sixth = rat(1, 6);
    let mut b = RatMat::zeros(7, 7);
    for i in 0..7 {
        for j in i..7 {
            let v = contractions[i]
                .wedge(&contractions[j])
                .wedge(phi)
                .top_coefficient()
                * &sixth;
            b.set(i, j, v.clone());
            b.set(j, i, v);
        }
    }
    let det = b.det();
    if det.is_zero() {
        return None;
    }
    let vol = real_root(&det, 9);
    let (p, n, z) = inertia(&b);
    // g = B / vol, so a negative volume swaps the inertia
    let signature = if det.is_negative() {
        (n, p, z)
    } else {
        (p, n, z)
    };
    let positive = signature == (7, 0, 0) && det.is_positive();
    Some(InducedMetric {
        b,
        vol,
        signature,
        positive,
    })
}

/// Hodge star `*α`, characterised by `β ∧ *α = g(β, α) vol` with
/// `vol = vol · dx¹…ⁿ`.
pub fn hodge_star(alpha: &Form, g: &Metric, vol: &Rat) -> Result<Form, G2Error> {
    let n = alpha.dim();
    let inv = g
        .matrix()
        .inverse()
        .map_err(|_| G2Error::DegenerateMetric)?;
    let k = alpha.degree();
    let mut out = Form::zero(n, n - k);
    for idx in combinations(n, k) {
        // g(dx^I, α) = Σ_K α_K det(g⁻¹[I, K])
        let inner: Rat = alpha
            .terms()
            .map(|(kk, c)| {
                let rows = idx
                    .iter()
                    .map(|&i| kk.iter().map(|&j| inv.get(i, j).clone()).collect())
                    .collect();
                c * RatMat::from_rows(rows).det()
            })
            .sum();
        if inner.is_zero() {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
        let mut all: Vec<usize> = idx.iter().chain(&comp).copied().collect();
        let sign = sort_sign(&mut all).expect("disjoint");
        out.add_sorted(comp, &(inner * vol * rat(sign as i64, 1)));
    }
    Ok(out)
}

/// `φ₀ = dx¹²³ + dx¹⁴⁵ + dx¹⁶⁷ + dx²⁴⁶ − dx²⁵⁷ − dx³⁴⁷ − dx³⁵⁶`.
pub fn phi0() -> Form {
    Form::from_terms(
        7,
        3,
        &[
            (1, &[1, 2, 3]),
            (1, &[1, 4, 5]),
            (1, &[1, 6, 7]),
            (1, &[2, 4, 6]),
            (-1, &[2, 5, 7]),
            (-1, &[3, 4, 7]),
            (-1, &[3, 5, 6]),
        ],
    )
}

/// `ψ₀ = *φ₀ = −dx¹²⁴⁷ − dx¹²⁵⁶ − dx¹³⁴⁶ + dx¹³⁵⁷ + dx²³⁴⁵ + dx²³⁶⁷ + dx⁴⁵⁶⁷`.
pub fn psi0() -> Form {
    Form::from_terms(
        7,
        4,
        &[
            (-1, &[1, 2, 4, 7]),
            (-1, &[1, 2, 5, 6]),
            (-1, &[1, 3, 4, 6]),
            (1, &[1, 3, 5, 7]),
            (1, &[2, 3, 4, 5]),
            (1, &[2, 3, 6, 7]),
            (1, &[4, 5, 6, 7]),
        ],
    )
}

/// The Euclidean metric on ℝ⁷.
pub fn g0() -> Metric {
    Metric::identity(7)
}

/// `u × v`, the vector with `g(u × v, ·) = φ(u, v, ·)`.
pub fn cross(u: &[Rat], v: &[Rat], phi: &Form, g: &Metric) -> Result<Vector, G2Error> {
    let a = phi.interior(u).interior(v);
    let covector: Vector = (1..=g.dim()).map(|i| a.coeff(&[i])).collect();
    g.raise(&covector)
}

/// `χ(v, w, x)`, the vector with `g(·, ½χ(v, w, x)) = ψ(·, v, w, x)`.
pub fn chi(v: &[Rat], w: &[Rat], x: &[Rat], psi: &Form, g: &Metric) -> Result<Vector, G2Error> {
    let n = g.dim();
    let covector: Vector = (1..=n)
        .map(|i| psi.eval(&[&basis(n, i), v, w, x]))
        .collect();
    Ok(scale_vec(&rat(2, 1), &g.raise(&covector)?))
}

/// Whether the oriented 3-plane `⟨u, v, w⟩` is calibrated by `φ`, tested as
/// `φ(u, v, w) > 0` and `φ(u, v, w)² = |u ∧ v ∧ w|²`.
pub fn is_associative(
    u: &[Rat],
    v: &[Rat],
    w: &[Rat],
    phi: &Form,
    g: &Metric,
) -> Result<bool, G2Error> {
    let vol2 = g.gram_det(&[u, v, w]);
    if vol2.is_zero() {
        return Err(G2Error::DegenerateSpan(3));
    }
    let val = phi.eval(&[u, v, w]);
    Ok(val.is_positive() && &val * &val == vol2)
}

/// Whether the oriented 4-plane `⟨u, v, w, x⟩` is calibrated by `ψ`.
pub fn is_coassociative(
    u: &[Rat],
    v: &[Rat],
    w: &[Rat],
    x: &[Rat],
    psi: &Form,
    g: &Metric,
) -> Result<bool, G2Error> {
    let vol2 = g.gram_det(&[u, v, w, x]);
    if vol2.is_zero() {
        return Err(G2Error::DegenerateSpan(4));
    }
    let val = psi.eval(&[u, v, w, x]);
    Ok(val.is_positive() && &val * &val == vol2)
}

/// An SU(3)-structure on the hyperplane `u⊥ ⊂ ℝ⁷`, with every form
/// horizontal (`u ⌟ · = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SU3Structure {
    pub u: Vector,
    /// The 1-form `dt = g(u, ·)`.
    pub dt: Form,
    pub omega: Form,
    pub re_omega: Form,
    pub im_omega: Form,
}

impl SU3Structure {
    /// `ω₀ = dx²³ + dx⁴⁵ + dx⁶⁷`, `Ω₀ = dz¹ ∧ dz² ∧ dz³` with
    /// `z¹ = x² + ix³`, `z² = x⁴ + ix⁵`, `z³ = x⁶ + ix⁷`.
    pub fn standard() -> SU3Structure {
        SU3Structure {
            u: basis(7, 1),
            dt: Form::dx(7, &[1]),
            omega: Form::from_terms(7, 2, &[(1, &[2, 3]), (1, &[4, 5]), (1, &[6, 7])]),
            re_omega: Form::from_terms(
                7,
                3,
                &[
                    (1, &[2, 4, 6]),
                    (-1, &[2, 5, 7]),
                    (-1, &[3, 4, 7]),
                    (-1, &[3, 5, 6]),
                ],
            ),
            im_omega: Form::from_terms(
                7,
                3,
                &[
                    (1, &[2, 4, 7]),
                    (1, &[2, 5, 6]),
                    (1, &[3, 4, 6]),
                    (-1, &[3, 5, 7]),
                ],
            ),
        }
    }

    /// `Ω ∧ ω = 0`.
    pub fn type_condition(&self) -> bool {
        self.re_omega.wedge(&self.omega).is_zero() && self.im_omega.wedge(&self.omega).is_zero()
    }

    /// `(−1)^{n(n−1)/2} (i/2)ⁿ Ω ∧ Ω̄ = ωⁿ/n!` for n = 3, which reads
    /// `¼ Re Ω ∧ Im Ω = ω³/6`.
    pub fn normalization(&self) -> bool {
        let lhs = self.re_omega.wedge(&self.im_omega).scale(&rat(1, 4));
        let rhs = self
            .omega
            .wedge(&self.omega)
            .wedge(&self.omega)
            .scale(&rat(1, 6));
        lhs == rhs && !lhs.is_zero()
    }

    /// `dt ∧ ω + Re Ω`.
    pub fn phi(&self) -> Form {
        self.dt.wedge(&self.omega).add(&self.re_omega)
    }

    /// `½ ω² − dt ∧ Im Ω`.
    pub fn psi(&self) -> Form {
        self.omega
            .wedge(&self.omega)
            .scale(&rat(1, 2))
            .sub(&self.dt.wedge(&self.im_omega))
    }

    pub fn is_horizontal(&self) -> bool {
        [&self.omega, &self.re_omega, &self.im_omega]
            .iter()
            .all(|f| f.interior(&self.u).is_zero())
    }
}

/// The SU(3)-structure induced on `u⊥` by a positive 3-form:
/// `ω = u ⌟ φ`, `Re Ω = φ − dt ∧ ω`, `Im Ω = −u ⌟ ψ`.
pub fn su3_from_unit_vector(phi: &Form, u: &[Rat]) -> Result<SU3Structure, G2Error> {
    let induced = metric_from_3form(phi).ok_or(G2Error::DegenerateForm)?;
    if !induced.positive {
        return Err(G2Error::NotPositive);
    }
    let g = induced.metric().ok_or(G2Error::NotExact)?;
    let vol = induced
        .vol
        .exact()
        .expect("exact metric has exact volume")
        .clone();
    let n2 = g.norm2(u);
    if !n2.is_one() {
        return Err(G2Error::NotUnit(n2));
    }
    let psi = hodge_star(phi, &g, &vol)?;
    let dt = g.lower(u);
    let omega = phi.interior(u);
    let re_omega = phi.sub(&dt.wedge(&omega));
    let im_omega = psi.interior(u).neg();
    Ok(SU3Structure {
        u: u.to_vec(),
        dt,
        omega,
        re_omega,
        im_omega,
    })
}

/// Whether the real 3-plane `L ⊂ ℂ³ = e₁⊥` is special Lagrangian with phase
/// `θ`, given as `(cos θ, sin θ)`: `ω₀|L = 0` and `Im(e^{iθ}Ω₀)|L = 0`.
pub fn is_special_lagrangian(plane: &[Vector; 3], phase: (&Rat, &Rat)) -> Result<bool, G2Error> {
    let (c, s) = phase;
    let n2 = c * c + s * s;
    if !n2.is_one() {
        return Err(G2Error::NotUnitPhase(n2));
    }
    if plane.iter().any(|v| v.len() != 7 || !v[0].is_zero()) {
        return Err(G2Error::Dimension(
            "plane must lie in the hyperplane x1 = 0 of R^7".into(),
        ));
    }
    let args: Vec<&[Rat]> = plane.iter().map(|v| v.as_slice()).collect();
    if g0().gram_det(&args).is_zero() {
        return Err(G2Error::DegenerateSpan(3));
    }
    let su3 = SU3Structure::standard();
    let im = su3.re_omega.scale(s).add(&su3.im_omega.scale(c));
    let lagrangian =
        (0..3).all(|i| (i + 1..3).all(|j| su3.omega.eval(&[args[i], args[j]]).is_zero()));
    Ok(lagrangian && im.eval(&args).is_zero())
}

/// Three 2-forms on ℝ⁴ defining an SU(2)-structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKTriple {
    pub omega_i: Form,
    pub omega_j: Form,
    pub omega_k: Form,
}

impl HKTriple {
    /// `ωᴵ = dx¹² + dx³⁴`, `ωᴶ = dx¹³ − dx²⁴`, `ωᴷ = dx¹⁴ + dx²³`.
    pub fn standard() -> HKTriple {
        HKTriple {
            omega_i: Form::from_terms(4, 2, &[(1, &[1, 2]), (1, &[3, 4])]),
            omega_j: Form::from_terms(4, 2, &[(1, &[1, 3]), (-1, &[2, 4])]),
            omega_k: Form::from_terms(4, 2, &[(1, &[1, 4]), (1, &[2, 3])]),
        }
    }

    /// Equal nonzero squares and vanishing mixed wedges.
    pub fn relations_hold(&self) -> bool {
        let (i, j, k) = (&self.omega_i, &self.omega_j, &self.omega_k);
        let sq = i.wedge(i);
        !sq.is_zero()
            && j.wedge(j) == sq
            && k.wedge(k) == sq
            && i.wedge(j).is_zero()
            && j.wedge(k).is_zero()
            && k.wedge(i).is_zero()
    }
}

/// One line of the identity suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub cases: usize,
    /// The first counterexample, if any.
    pub witness: Option<String>,
}

impl SuiteCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(SuiteCheck::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let cases = if c.cases == 1 {
                "1 case".to_string()
            } else {
                format!("{} cases", c.cases)
            };
            match &c.witness {
                None => writeln!(f, "PASS {} ({cases})", c.name)?,
                Some(w) => writeln!(f, "FAIL {} ({cases}): {w}", c.name)?,
            }
        }
        Ok(())
    }
}

fn show(v: &[Rat]) -> String {
    format!(
        "({})",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn random_vector(rng: &mut ChaCha8Rng) -> Vector {
    (0..7)
        .map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        .collect()
}

/// The vector-product identities for `(φ, ψ)` against the Euclidean metric,
/// each evaluated on all basis triples and `samples` seeded rational triples.
pub fn verify_identities(phi: &Form, psi: &Form, samples: usize, seed: u64) -> Vec<SuiteCheck> {
    let g = g0();
    let mut triples: Vec<[Vector; 3]> = Vec::new();
    for a in 1..=7 {
        for b in 1..=7 {
            for c in 1..=7 {
                triples.push([basis(7, a), basis(7, b), basis(7, c)]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        triples.push([
            random_vector(&mut rng),
            random_vector(&mut rng),
            random_vector(&mut rng),
        ]);
    }
    let x = |u: &[Rat], v: &[Rat]| cross(u, v, phi, &g).expect("Euclidean metric");
    let first_failure = |f: &dyn Fn(&[Vector; 3]) -> bool| triples.iter().find(|t| !f(t)).cloned();
    let describe = |t: [Vector; 3]| {
        format!(
            "u = {}, v = {}, w = {}",
            show(&t[0]),
            show(&t[1]),
            show(&t[2])
        )
    };

    let norm_identity = |t: &[Vector; 3]| {
        let (u, v) = (&t[0], &t[1]);
        let uv = g.pair(u, v);
        g.norm2(&x(u, v)) == g.norm2(u) * g.norm2(v) - &uv * &uv
    };
    let double_cross = |t: &[Vector; 3]| {
        let (u, v, w) = (&t[0], &t[1], &t[2]);
        let lhs = add_vec(&x(u, &x(v, w)), &x(&x(u, v), w));
        let rhs = add_vec(
            &scale_vec(&(rat(2, 1) * g.pair(u, w)), v),
            &add_vec(&scale_vec(&-g.pair(u, v), w), &scale_vec(&-g.pair(w, v), u)),
        );
        lhs == rhs
    };
    let calibration = |t: &[Vector; 3]| {
        let (u, v, w) = (&t[0], &t[1], &t[2]);
        let p = phi.eval(&[u, v, w]);
        let c = chi(u, v, w, psi, &g).expect("Euclidean metric");
        &p * &p + g.norm2(&c) * rat(1, 4) == g.gram_det(&[u, v, w])
    };
    let n = triples.len();
    vec![
        SuiteCheck {
            name: "cross_product_norm",
            cases: n,
            witness: first_failure(&norm_identity).map(describe),
        },
        SuiteCheck {
            name: "double_cross_product",
            cases: n,
            witness: first_failure(&double_cross).map(describe),
        },
        SuiteCheck {
            name: "associator_calibration",
            cases: n,
            witness: first_failure(&calibration).map(describe),
        },
    ]
}

/// The full pointwise suite on the standard structures.
pub fn verify_identity_suite(samples: usize, seed: u64) -> SuiteReport {
    let (phi, psi) = (phi0(), psi0());
    let mut checks = Vec::new();
    let fixed = |name, ok: bool, detail: String| SuiteCheck {
        name,
        cases: 1,
        witness: (!ok).then_some(detail),
    };

    let induced = metric_from_3form(&phi).expect("phi0 is nondegenerate");
    let ok = induced.metric() == Some(g0())
        && induced.vol == RealScalar::Exact(Rat::one())
        && induced.positive;
    checks.push(fixed("metric_of_phi0", ok, format!("{induced:?}")));
    let scaled = metric_from_3form(&phi.scale(&rat(8, 1))).expect("nondegenerate");
    let ok = scaled.metric()
        == Some(Metric {
            g: RatMat::identity(7).scale(&rat(4, 1)),
        });
    checks.push(fixed("metric_scaling", ok, format!("{scaled:?}")));
    let star = hodge_star(&phi, &g0(), &Rat::one()).expect("Euclidean metric");
    checks.push(fixed(
        "hodge_dual_of_phi0",
        star == psi,
        format!("*phi0 = {star}"),
    ));

    checks.extend(verify_identities(&phi, &psi, samples, seed));

    let e = |i| basis(7, i);
    let c = chi(&e(1), &e(2), &e(3), &psi, &g0()).expect("Euclidean metric");
    checks.push(fixed(
        "chi_vanishes_on_e123",
        c.iter().all(Zero::is_zero),
        show(&c),
    ));
    let v = psi.eval(&[&e(4), &e(5), &e(6), &e(7)]);
    checks.push(fixed("psi_on_e4567", v.is_one(), v.to_string()));

    let su3 = su3_from_unit_vector(&phi, &e(1)).expect("e1 is a unit vector");
    checks.push(fixed(
        "su3_from_e1",
        su3 == SU3Structure::standard(),
        format!("omega = {}", su3.omega),
    ));
    let ok = su3.type_condition() && su3.normalization() && su3.is_horizontal();
    checks.push(fixed(
        "su3_conditions",
        ok,
        "type or normalization condition fails".into(),
    ));
    let ok = su3.phi() == phi && su3.psi() == psi;
    checks.push(fixed(
        "su3_reconstruction",
        ok,
        format!("phi = {}, psi = {}", su3.phi(), su3.psi()),
    ));

    let hk = HKTriple::standard();
    let ok = hk.relations_hold()
        && hk.omega_i.wedge(&hk.omega_i) == Form::dx(4, &[1, 2, 3, 4]).scale(&rat(2, 1));
    checks.push(fixed(
        "hyperkahler_triple",
        ok,
        "SU(2) relations fail".into(),
    ));
    SuiteReport { checks }
}
