//! The extended affine Weyl group `W̃ = X_* ⋊ W` and its affine coroots.
//!
//! An element `t^λ w` acts on `Z K ⊕ X_*` by
//! `a K + μ ↦ (a + S(λ, wμ)) K + wμ`, where `S` is the Gram form of the
//! central extension, and on characters contragrediently. An affine coroot
//! is a pair `(α, n)` standing for `α + n Q(α) K` with `Q(α) = S(α, α)/2`;
//! `t^λ w` sends it to `(wα, n + <λ, wα>)`, independent of the form.
//!
//! Integer families of affine coroots are described per finite direction by
//! a [`Progression`], which is how both the ambient system and every integral
//! subsystem are handled without enumerating infinitely many roots.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{
    dot, int, rat_of, smith, to_rat_vec, vadd, vneg, vsub, ExactError, Int, IntMatrix, QmodZ, Rat,
    RatMatrix,
};
use crate::rootdata::{RootDataError, RootDatum, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not invariant under the reflection in root {0}")]
    NotWInvariant(usize),
    #[error("S(α, α) is odd or non-positive on coroot {0}")]
    OddOnCoroot(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Gram matrix `S` of the central extension on `X_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    matrix: IntMatrix,
    weights: Option<Vec<Vec<Int>>>,
}

impl GramForm {
    /// Validates an explicit symmetric matrix against `rd`.
    pub fn from_matrix(rd: &RootDatum, matrix: IntMatrix) -> Result<Self, AffineError> {
        let n = rd.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(AffineError::Dimension(format!("form must be {n}x{n}")));
        }
        if matrix != matrix.transpose() {
            return Err(AffineError::NotSymmetric);
        }
        let rm = matrix.to_rat();
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            if !rm.select(&idx, &idx).det().is_positive() {
                return Err(AffineError::NotPositiveDefinite);
            }
        }
        if n == 0 {
            // nothing to check
        }
        for &i in rd.simple_indices() {
            let s = rd.reflection(i);
            if s.transpose().mul(&matrix).mul(&s) != matrix {
                return Err(AffineError::NotWInvariant(i));
            }
        }
        for i in 0..rd.num_roots() {
            let c = rd.coroot(i);
            let v = dot(c, &matrix.mul_vec(c));
            if !v.is_positive() || v.is_odd() {
                return Err(AffineError::OddOnCoroot(i));
            }
        }
        Ok(GramForm { matrix, weights: None })
    }

    /// `S(λ, μ) = Σ_ω ω(λ) ω(μ)` over a multiset of weights.
    pub fn from_weights(rd: &RootDatum, weights: &[Vec<Int>]) -> Result<Self, AffineError> {
        let n = rd.rank();
        if weights.iter().any(|w| w.len() != n) {
            return Err(AffineError::Dimension(format!("weights must have length {n}")));
        }
        let m = IntMatrix::from_fn(n, n, |i, j| weights.iter().map(|w| w[i].clone() * w[j].clone()).sum());
        if weights.is_empty() && n > 0 {
            return Err(AffineError::NotPositiveDefinite);
        }
        let mut f = Self::from_matrix(rd, m)?;
        f.weights = Some(weights.to_vec());
        Ok(f)
    }

    /// A canonical valid form: twice the Weyl average of the standard form.
    pub fn weyl_averaged(rd: &RootDatum, w: &WeylGroup) -> Result<Self, AffineError> {
        let n = rd.rank();
        let mut m = IntMatrix::zeros(n, n);
        for e in w.elements() {
            m = m.add(&e.transpose().mul(e));
        }
        Self::from_matrix(rd, m.scale(&int(2)))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn weights(&self) -> Option<&[Vec<Int>]> {
        self.weights.as_deref()
    }

    pub fn pair(&self, a: &[Int], b: &[Int]) -> Int {
        dot(a, &self.matrix.mul_vec(b))
    }

    /// `Q(α) = S(α, α)/2` for coroot `i`.
    pub fn q(&self, rd: &RootDatum, i: usize) -> Int {
        self.pair(rd.coroot(i), rd.coroot(i)) / 2
    }
}

pub fn gram_from_weights(rd: &RootDatum, weights: &[Vec<Int>]) -> Result<GramForm, AffineError> {
    GramForm::from_weights(rd, weights)
}

/// Order of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

/// `t^λ w`, with `w` acting on `X_*` and `w* = (w^{-1})^T` acting on `X^*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExtendedWeylElement {
    trans: Vec<Int>,
    w: IntMatrix,
    wdual: IntMatrix,
}

impl ExtendedWeylElement {
    pub fn new(trans: Vec<Int>, w: IntMatrix) -> Self {
        assert_eq!(trans.len(), w.rows(), "translation/matrix size mismatch");
        let wdual = w.unimodular_inverse().expect("Weyl part must be unimodular").transpose();
        ExtendedWeylElement { trans, w, wdual }
    }

    pub fn identity(n: usize) -> Self {
        ExtendedWeylElement { trans: vec![Int::zero(); n], w: IntMatrix::identity(n), wdual: IntMatrix::identity(n) }
    }

    pub fn translation(trans: Vec<Int>) -> Self {
        let n = trans.len();
        ExtendedWeylElement { trans, w: IntMatrix::identity(n), wdual: IntMatrix::identity(n) }
    }

    pub fn linear(w: IntMatrix) -> Self {
        Self::new(vec![Int::zero(); w.rows()], w)
    }

    pub fn rank(&self) -> usize {
        self.trans.len()
    }

    pub fn trans(&self) -> &[Int] {
        &self.trans
    }

    pub fn w(&self) -> &IntMatrix {
        &self.w
    }

    /// `(w^{-1})^T`, the action on `X^*`.
    pub fn w_dual(&self) -> &IntMatrix {
        &self.wdual
    }

    pub fn is_identity(&self) -> bool {
        self.trans.iter().all(|x| x.is_zero()) && self.w == IntMatrix::identity(self.rank())
    }

    pub fn is_translation(&self) -> bool {
        self.w == IntMatrix::identity(self.rank())
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExtendedWeylElement {
            trans: vadd(&self.trans, &self.w.mul_vec(&o.trans)),
            w: self.w.mul(&o.w),
            wdual: self.wdual.mul(&o.wdual),
        }
    }

    pub fn inverse(&self) -> Self {
        let winv = self.wdual.transpose();
        ExtendedWeylElement { trans: vneg(&winv.mul_vec(&self.trans)), w: winv, wdual: self.w.transpose() }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.rank());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conjugate(&self, by: &Self) -> Self {
        by.mul(self).mul(&by.inverse())
    }

    /// `g · (a K + μ)` on `Z K ⊕ X_*`.
    pub fn act_cochar(&self, form: &GramForm, a: &Int, mu: &[Int]) -> (Int, Vec<Int>) {
        let wm = self.w.mul_vec(mu);
        (a + form.pair(&self.trans, &wm), wm)
    }

    /// Matrix of the action on `Z K ⊕ X_*`, with the `K` coordinate first.
    pub fn cochar_matrix(&self, form: &GramForm) -> IntMatrix {
        let n = self.rank();
        let top = form.matrix().mul_vec(&self.trans);
        let top_row = self.w.transpose().mul_vec(&top);
        IntMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
            (0, 0) => Int::one(),
            (0, j) => top_row[j - 1].clone(),
            (_, 0) => Int::zero(),
            (i, j) => self.w[(i - 1, j - 1)].clone(),
        })
    }

    /// Slice action `x ↦ w* x − κ(λ)` at a rational level `κ`.
    pub fn act_slice(&self, kappa: &RatMatrix, x: &[Rat]) -> Vec<Rat> {
        let wx = self.wdual.to_rat().mul_vec(x);
        vsub(&wx, &kappa.mul_vec(&to_rat_vec(&self.trans)))
    }

    /// Linear matrix of the slice action on `Q 1* ⊕ X^* ⊗ Q`, `1*` coordinate first.
    pub fn slice_matrix(&self, kappa: &RatMatrix) -> RatMatrix {
        let n = self.rank();
        let shift = kappa.mul_vec(&to_rat_vec(&self.trans));
        let wd = self.wdual.to_rat();
        RatMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
            (0, 0) => Rat::one(),
            (0, _) => Rat::zero(),
            (i, 0) => -shift[i - 1].clone(),
            (i, j) => wd[(i - 1, j - 1)].clone(),
        })
    }

    /// Finite iff `(1 + w + ... + w^{k-1}) λ = 0` with `k` the order of `w`.
    pub fn order(&self) -> Order {
        let n = self.rank();
        let id = IntMatrix::identity(n);
        let mut p = self.w.clone();
        let mut k = 1u64;
        while p != id {
            p = p.mul(&self.w);
            k += 1;
            assert!(k <= 10_000, "Weyl part of unexpectedly large order");
        }
        let mut sum = vec![Int::zero(); n];
        let mut v = self.trans.clone();
        for _ in 0..k {
            sum = vadd(&sum, &v);
            v = self.w.mul_vec(&v);
        }
        if sum.iter().all(|x| x.is_zero()) {
            Order::Finite(k)
        } else {
            Order::Infinite
        }
    }
}

pub fn element_order(g: &ExtendedWeylElement) -> Order {
    g.order()
}

pub fn extended_act_cochar(g: &ExtendedWeylElement, form: &GramForm, a: &Int, mu: &[Int]) -> (Int, Vec<Int>) {
    g.act_cochar(form, a, mu)
}

/// A torsion character of the extended torus: value `central` on `K` and
/// values `finite` on the `X_*` basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterPoint {
    pub central: QmodZ,
    pub finite: Vec<QmodZ>,
}

impl CharacterPoint {
    pub fn new(central: QmodZ, finite: Vec<QmodZ>) -> Self {
        CharacterPoint { central, finite }
    }

    pub fn trivial(n: usize) -> Self {
        CharacterPoint { central: QmodZ::zero(), finite: vec![QmodZ::zero(); n] }
    }

    /// `χ_f = Σ θ_i α_i` for the simple roots `α_i`.
    pub fn from_simple_root_coords(rd: &RootDatum, central: QmodZ, theta: &[Rat]) -> Result<Self, AffineError> {
        if theta.len() != rd.semisimple_rank() {
            return Err(AffineError::Dimension(format!(
                "expected {} simple-root coordinates",
                rd.semisimple_rank()
            )));
        }
        let n = rd.rank();
        let mut v = vec![Rat::zero(); n];
        for (t, &s) in theta.iter().zip(rd.simple_indices()) {
            for (k, x) in rd.root(s).iter().enumerate() {
                v[k] += t.clone() * rat_of(x);
            }
        }
        Ok(CharacterPoint { central, finite: v.iter().map(QmodZ::new).collect() })
    }

    pub fn finite_lift(&self) -> Vec<Rat> {
        self.finite.iter().map(|q| q.lift()).collect()
    }

    /// Value of `χ_f` on a cocharacter, modulo 1.
    pub fn eval(&self, v: &[Int]) -> QmodZ {
        QmodZ::new(&v.iter().zip(&self.finite).map(|(a, q)| rat_of(a) * q.lift()).sum())
    }
}

pub fn extended_act_character(g: &ExtendedWeylElement, form: &GramForm, chi: &CharacterPoint) -> CharacterPoint {
    let c = chi.central.lift();
    let wchi = g.w_dual().to_rat().mul_vec(&chi.finite_lift());
    let shift = form.matrix().mul_vec(g.trans());
    let finite = wchi.iter().zip(&shift).map(|(x, s)| QmodZ::new(&(x - c.clone() * rat_of(s)))).collect();
    CharacterPoint { central: chi.central.clone(), finite }
}

/// `(α, n)`: coroot index and central multiple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineCoroot {
    pub root: usize,
    pub n: Int,
}

impl AffineCoroot {
    pub fn new(root: usize, n: impl Into<Int>) -> Self {
        AffineCoroot { root, n: n.into() }
    }

    pub fn neg(&self, rd: &RootDatum) -> Self {
        AffineCoroot { root: rd.negative_of(self.root), n: -self.n.clone() }
    }
}

/// The integers `n` for which `(α, n)` belongs to a coroot family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Progression {
    Empty,
    /// Only `n = 0` (used for irrational levels).
    Zero,
    /// `n ≡ residue (mod modulus)`, `0 <= residue < modulus`.
    Arith { residue: Int, modulus: Int },
}

impl Progression {
    pub fn all() -> Self {
        Progression::Arith { residue: Int::zero(), modulus: Int::one() }
    }

    pub fn contains(&self, n: &Int) -> bool {
        match self {
            Progression::Empty => false,
            Progression::Zero => n.is_zero(),
            Progression::Arith { residue, modulus } => n.mod_floor(modulus) == *residue,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Progression::Empty)
    }

    /// The progression `{-n : n ∈ self}`.
    pub fn negated(&self) -> Self {
        match self {
            Progression::Arith { residue, modulus } => {
                Progression::Arith { residue: (-residue).mod_floor(modulus), modulus: modulus.clone() }
            }
            p => p.clone(),
        }
    }

    /// Number of members in `[lo, hi]`.
    pub fn count_between(&self, lo: &Int, hi: &Int) -> Int {
        if hi < lo {
            return Int::zero();
        }
        match self {
            Progression::Empty => Int::zero(),
            Progression::Zero => Int::from((lo <= &Int::zero() && &Int::zero() <= hi) as i64),
            Progression::Arith { residue, modulus } => {
                (hi - residue).div_floor(modulus) - (lo - Int::one() - residue).div_floor(modulus)
            }
        }
    }

    /// Least member `>= lo`.
    pub fn least_at_least(&self, lo: &Int) -> Option<Int> {
        match self {
            Progression::Empty => None,
            Progression::Zero => (lo <= &Int::zero()).then(Int::zero),
            Progression::Arith { residue, modulus } => Some(lo + (residue - lo).mod_floor(modulus)),
        }
    }
}

/// A reflection-closed family of affine coroots, given per direction by a
/// progression, with a positivity rule.
///
/// `(α, n)` with `n ≠ 0` is positive when `sign(α) · n > 0`; `(α, 0)` is
/// positive when `α` is. The sign is `+1` except for directions on which the
/// level is negative, where the dominant alcove is the base alcove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorootFamily {
    pub progressions: Vec<Progression>,
    pub signs: Vec<i8>,
}

impl CorootFamily {
    pub fn ambient(rd: &RootDatum) -> Self {
        CorootFamily { progressions: vec![Progression::all(); rd.num_roots()], signs: vec![1; rd.num_roots()] }
    }

    pub fn contains(&self, b: &AffineCoroot) -> bool {
        self.progressions[b.root].contains(&b.n)
    }

    pub fn is_positive(&self, rd: &RootDatum, b: &AffineCoroot) -> bool {
        if b.n.is_zero() {
            rd.is_positive(b.root)
        } else {
            (b.n.is_positive()) == (self.signs[b.root] > 0)
        }
    }

    /// Number of positive members of `self` sent to negative coroots by `g`.
    pub fn inversions(&self, rd: &RootDatum, weyl: &WeylGroup, g: &ExtendedWeylElement) -> Int {
        let w = weyl.position(g.w()).expect("Weyl part of an extended element");
        let mut total = Int::zero();
        for i in 0..rd.num_roots() {
            total += self.inversions_in_direction(rd, weyl, w, g.trans(), i);
        }
        total
    }

    fn inversions_in_direction(&self, rd: &RootDatum, weyl: &WeylGroup, w: usize, trans: &[Int], i: usize) -> Int {
        let prog = &self.progressions[i];
        if prog.is_empty() {
            return Int::zero();
        }
        let j = weyl.act_on_coroot(w, i);
        let k = dot(trans, rd.root(j));
        let (p, kk) = if self.signs[i] > 0 { (prog.clone(), k) } else { (prog.negated(), -k) };
        let lo = if rd.is_positive(i) { Int::zero() } else { Int::one() };
        let hi = -kk - Int::one() + Int::from((!rd.is_positive(j)) as i64);
        p.count_between(&lo, &hi)
    }

    /// Least positive member in each direction.
    pub fn minimal_positive(&self, rd: &RootDatum, i: usize) -> Option<AffineCoroot> {
        let prog = &self.progressions[i];
        let lo = if rd.is_positive(i) { Int::zero() } else { Int::one() };
        let (p, s) = if self.signs[i] > 0 { (prog.clone(), Int::one()) } else { (prog.negated(), -Int::one()) };
        p.least_at_least(&lo).map(|m| AffineCoroot { root: i, n: m * s })
    }
}

/// Root datum together with its Weyl group; the home of affine computations.
#[derive(Clone, Debug)]
pub struct AffineWeyl {
    rd: RootDatum,
    weyl: WeylGroup,
}

impl AffineWeyl {
    pub fn new(rd: RootDatum) -> Result<Self, AffineError> {
        let weyl = WeylGroup::new(&rd)?;
        Ok(AffineWeyl { rd, weyl })
    }

    pub fn rd(&self) -> &RootDatum {
        &self.rd
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn rank(&self) -> usize {
        self.rd.rank()
    }

    pub fn identity(&self) -> ExtendedWeylElement {
        ExtendedWeylElement::identity(self.rank())
    }

    pub fn weyl_element(&self, i: usize) -> ExtendedWeylElement {
        ExtendedWeylElement::linear(self.weyl.element(i).clone())
    }

    /// `t^λ w · (α, n) = (wα, n + <λ, wα>)`.
    pub fn act_coroot(&self, g: &ExtendedWeylElement, b: &AffineCoroot) -> AffineCoroot {
        let w = self.weyl.position(g.w()).expect("Weyl part");
        let j = self.weyl.act_on_coroot(w, b.root);
        AffineCoroot { root: j, n: b.n.clone() + dot(g.trans(), self.rd.root(j)) }
    }

    /// The reflection in `(α, n)`, namely `t^{nα} s_α`.
    pub fn reflection(&self, b: &AffineCoroot) -> ExtendedWeylElement {
        let c: Vec<Int> = self.rd.coroot(b.root).iter().map(|x| x * b.n.clone()).collect();
        ExtendedWeylElement::new(c, self.rd.reflection(b.root))
    }

    /// Value of `(α, n)` at a slice point `x` for the level `κ`.
    pub fn eval_slice(&self, kappa: &RatMatrix, b: &AffineCoroot, x: &[Rat]) -> Rat {
        let c = to_rat_vec(self.rd.coroot(b.root));
        let q = dot(&c, &kappa.mul_vec(&c)) / Rat::from_integer(int(2));
        dot(&c, x) + rat_of(&b.n) * q
    }

    pub fn is_positive(&self, b: &AffineCoroot) -> bool {
        CorootFamily::ambient(&self.rd).is_positive(&self.rd, b)
    }

    /// Number of positive affine coroots made negative.
    pub fn length(&self, g: &ExtendedWeylElement) -> Int {
        CorootFamily::ambient(&self.rd).inversions(&self.rd, &self.weyl, g)
    }

    /// Simple affine coroots: the minimal positive members whose reflection
    /// has exactly one inversion, in direction order.
    pub fn simple_system(&self, fam: &CorootFamily) -> Vec<AffineCoroot> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for i in 0..self.rd.num_roots() {
            let Some(b) = fam.minimal_positive(&self.rd, i) else { continue };
            let s = self.reflection(&b);
            if seen.contains(&s) {
                continue;
            }
            if fam.inversions(&self.rd, &self.weyl, &s).is_one() {
                seen.insert(s);
                out.push(b);
            }
        }
        out.sort_by_key(|a| (a.n.abs(), a.root));
        out
    }

    pub fn simple_affine(&self) -> Vec<AffineCoroot> {
        self.simple_system(&CorootFamily::ambient(&self.rd))
    }

    /// Right-descent walk to the length-zero element of `g W_aff`.
    pub fn reduce_to_length_zero(&self, g: &ExtendedWeylElement) -> ExtendedWeylElement {
        let fam = CorootFamily::ambient(&self.rd);
        let simples: Vec<ExtendedWeylElement> = self.simple_affine().iter().map(|b| self.reflection(b)).collect();
        let mut x = g.clone();
        let mut len = fam.inversions(&self.rd, &self.weyl, &x);
        'outer: while !len.is_zero() {
            for s in &simples {
                let y = x.mul(s);
                let l = fam.inversions(&self.rd, &self.weyl, &y);
                if l < len {
                    x = y;
                    len = l;
                    continue 'outer;
                }
            }
            unreachable!("an element of positive length has a descent");
        }
        x
    }

    /// Generators of `X_* / Q^vee`: torsion generators with their orders, then free ones.
    pub fn coroot_quotient(&self) -> (Vec<(Vec<Int>, Int)>, Vec<Vec<Int>>) {
        let n = self.rank();
        let rows: Vec<Vec<Int>> = self.rd.simple_indices().iter().map(|&i| self.rd.coroot(i).to_vec()).collect();
        if rows.is_empty() {
            return (vec![], (0..n).map(|k| unit(n, k)).collect());
        }
        let c = IntMatrix::from_rows(&rows, n).expect("shape");
        let s = smith(&c);
        let vinv = s.v.unimodular_inverse().expect("unimodular");
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for i in 0..n {
            let g = vinv.row(i).to_vec();
            if i < s.rank {
                let d = s.d[(i, i)].clone();
                if !d.is_one() {
                    torsion.push((g, d));
                }
            } else {
                free.push(g);
            }
        }
        (torsion, free)
    }

    /// The length-zero subgroup.
    pub fn omega(&self) -> OmegaData {
        let (torsion, free) = self.coroot_quotient();
        let tors: Vec<ExtendedWeylElement> = torsion
            .iter()
            .map(|(g, _)| self.reduce_to_length_zero(&ExtendedWeylElement::translation(g.clone())))
            .collect();
        if free.is_empty() {
            OmegaData::Finite(close_group(&tors, self.rank()))
        } else {
            OmegaData::Infinite {
                torsion: tors,
                lattice: free
                    .iter()
                    .map(|g| self.reduce_to_length_zero(&ExtendedWeylElement::translation(g.clone())))
                    .collect(),
            }
        }
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Vec<Rat> {
        let n = self.rank();
        let mut v = vec![Rat::zero(); n];
        for i in 0..self.rd.num_positive() {
            for (k, x) in self.rd.root(i).iter().enumerate() {
                v[k] += Rat::new(x.clone(), int(2));
            }
        }
        v
    }

    /// A point of the base alcove of `fam` at level `κ`: `ε ρ` with `ε`
    /// small enough that every `(α, n ≠ 0)` has the sign of `n κ(α, α)`.
    pub fn base_point(&self, kappa: &RatMatrix, fam: &CorootFamily) -> Vec<Rat> {
        let rho = self.rho();
        let mut eps = Rat::one();
        for i in 0..self.rd.num_positive() {
            if !matches!(fam.progressions[i], Progression::Arith { .. }) {
                continue;
            }
            let c = to_rat_vec(self.rd.coroot(i));
            let q = (dot(&c, &kappa.mul_vec(&c)) / Rat::from_integer(int(2))).abs();
            let r = dot(&c, &rho);
            if q.is_zero() {
                continue;
            }
            let bound = q / (r * Rat::from_integer(int(2)));
            if bound < eps {
                eps = bound;
            }
        }
        rho.iter().map(|x| x * eps.clone()).collect()
    }

    pub fn sort_elements(&self, v: &mut [ExtendedWeylElement]) {
        v.sort_by_cached_key(|g| (self.length(g), g.clone()));
    }
}

fn unit(n: usize, k: usize) -> Vec<Int> {
    (0..n).map(|i| int((i == k) as i64)).collect()
}

/// Closure of a finite set of elements of finite order under products.
pub fn close_group(gens: &[ExtendedWeylElement], n: usize) -> Vec<ExtendedWeylElement> {
    let id = ExtendedWeylElement::identity(n);
    let mut set: BTreeSet<ExtendedWeylElement> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// The length-zero subgroup: a finite list, or for a nontrivial radical its
/// torsion generators and lattice generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaData {
    Finite(Vec<ExtendedWeylElement>),
    Infinite { torsion: Vec<ExtendedWeylElement>, lattice: Vec<ExtendedWeylElement> },
}

impl OmegaData {
    pub fn generators(&self) -> Vec<ExtendedWeylElement> {
        match self {
            OmegaData::Finite(v) => v.clone(),
            OmegaData::Infinite { torsion, lattice } => torsion.iter().chain(lattice).cloned().collect(),
        }
    }
}

/// Walls of the base alcove and an interior point of the level-`S` slice.
#[derive(Clone, Debug)]
pub struct AlcoveDescription {
    pub walls: Vec<AffineCoroot>,
    pub interior_point: Vec<Rat>,
}

/// Simple affine coroots, base alcove and `Ω`.
pub fn affine_simple_data(
    aw: &AffineWeyl,
    form: &GramForm,
) -> (Vec<AffineCoroot>, AlcoveDescription, OmegaData) {
    let walls = aw.simple_affine();
    let kappa = form.matrix().to_rat();
    let interior_point = aw.base_point(&kappa, &CorootFamily::ambient(aw.rd()));
    (walls.clone(), AlcoveDescription { walls, interior_point }, aw.omega())
}

pub fn element_length(aw: &AffineWeyl, g: &ExtendedWeylElement) -> Int {
    aw.length(g)
}
