//! A polynomial model of Bott–Samelson bimodules.
//!
//! `R = Q[z_1, ..., z_m]` with a group acting linearly on the variables. For a
//! reflection `r` with equation `α_r`, `B_r = R ⊗_{R^r} R` is free of rank two
//! as a left module on `1 ⊗ 1` and `1 ⊗ δ`, `δ = α_r / 2`, and the right
//! action is computed through the splitting `f = (f − δ ∂f) + δ ∂f`.
//!
//! Characters are read off from localization: an element of
//! `B_{r_1} ⊗ ... ⊗ B_{r_k}` restricts to functions on the graphs of the
//! products `r_1^{e_1} ⋯ r_k^{e_k}`, and the standard filtration is the
//! filtration by support on upward closed sets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{int, rat_of, Int, Rat, RatMatrix};
use crate::hecke::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SoergelError {
    #[error("matrix does not act as a reflection")]
    NotAReflection,
    #[error("polynomial is not divisible by the root")]
    NotDivisible,
    #[error("element is not in the group generated by the word")]
    NotInGroup,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// A polynomial over `Q` in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rat) -> Self {
        let n = exps.len();
        let mut p = Self::zero(n);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).collect::<BTreeSet<_>>().len() <= 1
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let x = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *x += c;
        if x.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |a, _| a.mul(self))
    }

    /// `f ↦ f(M z)`: substitutes `z_i ↦ Σ_j M_ij z_j`.
    pub fn substitute(&self, m: &RatMatrix) -> Self {
        let n = self.nvars;
        let images: Vec<Poly> = (0..n).map(|i| Poly::linear(m.row(i))).collect();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut t = Self::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact division by a nonzero linear form.
    pub fn div_linear(&self, alpha: &[Rat]) -> Result<Self, SoergelError> {
        let k = alpha.iter().position(|a| !a.is_zero()).ok_or(SoergelError::NotDivisible)?;
        let lin = Poly::linear(alpha);
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        loop {
            let Some((e, c)) = rem.terms.iter().max_by_key(|(e, _)| e[k]).map(|(e, c)| (e.clone(), c.clone())) else {
                break;
            };
            if e[k] == 0 {
                return Err(SoergelError::NotDivisible);
            }
            let mut e2 = e.clone();
            e2[k] -= 1;
            let t = Poly::monomial(e2, c / alpha[k].clone());
            rem = rem.sub(&t.mul(&lin));
            q = q.add(&t);
        }
        Ok(q)
    }

    /// Coefficient vector in the monomial basis of degree `d`.
    fn coords(&self, d: u32, basis: &HashMap<Vec<u32>, usize>) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); basis.len()];
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                v[basis[e]] = c.clone();
            }
        }
        v
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("z{i}") } else { format!("z{i}^{k}") })
                    .collect();
                let cs = crate::exact::fmt_rat(c);
                if mono.is_empty() {
                    cs
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("{cs}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exponent vectors of total degree `d` in `n` variables, in a fixed order.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for k in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - k) {
            let mut e = vec![k];
            e.append(&mut rest);
            out.push(e);
        }
    }
    out
}

/// `dim R_d` for `R` in `n` variables.
pub fn dim_homogeneous(n: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    if n == 0 {
        return (d == 0) as usize;
    }
    let d = d as u64;
    let k = n as u64 - 1;
    num_integer::binomial(d + k, k) as usize
}

/// A linear reflection of the variable space with its normalized equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub matrix: RatMatrix,
    /// Primitive integral `α` with `α^T M = −α^T`, first nonzero entry positive.
    pub alpha: Vec<Rat>,
}

impl Reflection {
    pub fn new(matrix: RatMatrix) -> Result<Self, SoergelError> {
        let n = matrix.rows();
        if matrix.cols() != n || matrix.mul(&matrix) != RatMatrix::identity(n) {
            return Err(SoergelError::NotAReflection);
        }
        let plus = matrix.add(&RatMatrix::identity(n));
        if matrix.sub(&RatMatrix::identity(n)).rank() != 1 {
            return Err(SoergelError::NotAReflection);
        }
        // left kernel of M + I
        let ker = plus.transpose().kernel();
        let a = ker.first().ok_or(SoergelError::NotAReflection)?;
        Ok(Reflection { matrix, alpha: normalize_primitive(a) })
    }

    pub fn nvars(&self) -> usize {
        self.matrix.rows()
    }

    pub fn act(&self, f: &Poly) -> Poly {
        f.substitute(&self.matrix)
    }

    pub fn alpha_poly(&self) -> Poly {
        Poly::linear(&self.alpha)
    }

    pub fn delta(&self) -> Poly {
        self.alpha_poly().scale(&Rat::new(int(1), int(2)))
    }

    /// `∂(f) = (f − r f) / α`.
    pub fn demazure(&self, f: &Poly) -> Poly {
        f.sub(&self.act(f)).div_linear(&self.alpha).expect("f − r f vanishes on the mirror")
    }

    /// `f = inv + δ · inv'` with both parts `r`-invariant.
    pub fn split(&self, f: &Poly) -> (Poly, Poly) {
        let d = self.demazure(f);
        (f.sub(&self.delta().mul(&d)), d)
    }
}

fn normalize_primitive(v: &[Rat]) -> Vec<Rat> {
    let l = v.iter().fold(Int::one(), |a, x| a.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| (x * rat_of(&l)).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |a, x| a.gcd(x));
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -1 } else { 1 };
    ints.iter().map(|x| Rat::from_integer(x * int(sign) / g.clone())).collect()
}

pub fn demazure(r: &Reflection, f: &Poly) -> Poly {
    r.demazure(f)
}

/// `B_{r_1} ⊗_R ... ⊗_R B_{r_k}`, free as a left module on
/// `b_S = 1 ⊗ δ_1^{s_1} ⊗ ... ⊗ δ_k^{s_k}`.
#[derive(Clone, Debug)]
pub struct BottSamelson {
    pub word: Vec<Reflection>,
    nvars: usize,
}

/// An element as left coefficients on the basis `b_S`.
pub type BsElement = BTreeMap<Vec<bool>, Poly>;

impl BottSamelson {
    pub fn new(word: Vec<Reflection>, nvars: usize) -> Result<Self, SoergelError> {
        if word.iter().any(|r| r.nvars() != nvars) {
            return Err(SoergelError::Dimension("reflections act on different spaces".into()));
        }
        Ok(BottSamelson { word, nvars })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn basis(&self) -> Vec<Vec<bool>> {
        let k = self.word.len();
        (0..1u32 << k).map(|m| (0..k).map(|i| m >> i & 1 == 1).collect()).collect()
    }

    /// `1 ⊗ δ^{s_1} ⊗ ... ⊗ δ^{s_i} · g` expanded on the first `i` slots.
    fn expand(&self, s: &[bool], g: Poly) -> BTreeMap<Vec<bool>, Poly> {
        let i = s.len();
        if i == 0 {
            return BTreeMap::from([(vec![], g)]);
        }
        let r = &self.word[i - 1];
        let h = if s[i - 1] { r.delta().mul(&g) } else { g };
        let (p, q) = r.split(&h);
        let mut out = BTreeMap::new();
        for (tail, part) in [(false, p), (true, q)] {
            if part.is_zero() {
                continue;
            }
            for (mut k, c) in self.expand(&s[..i - 1], part) {
                k.push(tail);
                let e = out.entry(k).or_insert_with(|| Poly::zero(self.nvars));
                *e = e.add(&c);
            }
        }
        out
    }

    /// `x · f` for the right action of `R`.
    pub fn right_mul(&self, x: &BsElement, f: &Poly) -> BsElement {
        let mut out = BTreeMap::new();
        for (s, p) in x {
            for (t, c) in self.expand(s, f.clone()) {
                let e = out.entry(t).or_insert_with(|| Poly::zero(self.nvars));
                *e = e.add(&p.mul(&c));
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Partial products `x_i = r_1^{e_1} ⋯ r_i^{e_i}` for a subexpression.
    fn prefixes(&self, e: &[bool]) -> Vec<RatMatrix> {
        let mut x = RatMatrix::identity(self.nvars);
        let mut out = Vec::new();
        for (r, &on) in self.word.iter().zip(e) {
            if on {
                x = x.mul(&r.matrix);
            }
            out.push(x.clone());
        }
        out
    }

    /// End point `r_1^{e_1} ⋯ r_k^{e_k}` of a subexpression.
    pub fn end_point(&self, e: &[bool]) -> RatMatrix {
        self.prefixes(e).pop().unwrap_or_else(|| RatMatrix::identity(self.nvars))
    }

    /// Component of `b_S` on the graph of the subexpression `e`:
    /// `Π_i (x_i · δ_i)^{s_i}`.
    pub fn localize_basis(&self, s: &[bool], e: &[bool]) -> Poly {
        let xs = self.prefixes(e);
        let mut out = Poly::one(self.nvars);
        for (i, &on) in s.iter().enumerate() {
            if on {
                out = out.mul(&self.word[i].delta().substitute(&inverse(&xs[i])));
            }
        }
        out
    }

    /// Localization of an element at a group element: one component per
    /// subexpression ending there.
    pub fn localize(&self, x: &BsElement, w: &RatMatrix) -> Vec<Poly> {
        let mut out = Vec::new();
        for e in self.basis() {
            if &self.end_point(&e) != w {
                continue;
            }
            let mut c = Poly::zero(self.nvars);
            for (s, p) in x {
                c = c.add(&p.mul(&self.localize_basis(s, &e)));
            }
            out.push(c);
        }
        out
    }
}

fn inverse(m: &RatMatrix) -> RatMatrix {
    m.inverse().expect("group elements are invertible")
}

/// Group elements reachable by words of length `<= bound` in `gens`, with
/// their lengths.
pub fn ball(gens: &[RatMatrix], n: usize, bound: usize) -> Vec<(RatMatrix, usize)> {
    let id = RatMatrix::identity(n);
    let mut seen: HashMap<RatMatrix, usize> = HashMap::from([(id.clone(), 0)]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let l = seen[&x];
        if l == bound {
            continue;
        }
        for g in gens {
            let y = x.mul(g);
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), l + 1);
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    order.into_iter().map(|x| {
        let l = seen[&x];
        (x, l)
    }).collect()
}

/// Graded multiplicity of the standard module of `w` in the Bott–Samelson
/// bimodule of `word`.
///
/// Group elements of the support are filtered along a length-compatible
/// order; the subquotient at `w` is free over `R` with generators in degrees
/// `d_j`, and the character is `Σ_j v^{k + ℓ(w) − 2 d_j}`.
pub fn graph_character(word: &[Reflection], w: &RatMatrix) -> Result<LaurentPoly, SoergelError> {
    let Some(first) = word.first() else {
        let n = w.rows();
        return Ok(if w == &RatMatrix::identity(n) { LaurentPoly::one() } else { LaurentPoly::zero() });
    };
    let n = first.nvars();
    if w.rows() != n || w.cols() != n {
        return Err(SoergelError::Dimension("group element acts on a different space".into()));
    }
    if let Some((_, ch)) = graph_characters(word)?.into_iter().find(|(x, _)| x == w) {
        return Ok(ch);
    }
    let gens: Vec<RatMatrix> = word.iter().map(|r| r.matrix.clone()).collect();
    if ball(&gens, n, word.len()).iter().any(|(x, _)| x == w) {
        Ok(LaurentPoly::zero())
    } else {
        Err(SoergelError::NotInGroup)
    }
}

/// Graph characters at every element of the support, in filtration order.
pub fn graph_characters(word: &[Reflection]) -> Result<Vec<(RatMatrix, LaurentPoly)>, SoergelError> {
    let Some(first) = word.first() else {
        return Ok(Vec::new());
    };
    let n = first.nvars();
    let bs = BottSamelson::new(word.to_vec(), n)?;
    let k = word.len();
    let mut gens: Vec<RatMatrix> = Vec::new();
    for r in word {
        if !gens.contains(&r.matrix) {
            gens.push(r.matrix.clone());
        }
    }
    let lengths: HashMap<RatMatrix, usize> = ball(&gens, n, k).into_iter().collect();
    let subs = bs.basis();
    let ends: Vec<RatMatrix> = subs.iter().map(|e| bs.end_point(e)).collect();
    let mut support: Vec<RatMatrix> = ends.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    support.sort_by_key(|x| lengths[x]);
    // localization of each basis element along each subexpression
    let local: Vec<Vec<Poly>> = subs.iter().map(|s| subs.iter().map(|e| bs.localize_basis(s, e)).collect()).collect();

    // free[p][d]: dimension of the degree-d part vanishing on support[..p]
    let mut free = vec![Vec::new(); support.len() + 1];
    for d in 0..=(k as u32 + 1) {
        let target: HashMap<Vec<u32>, usize> = monomials(n, d).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut cols: Vec<(usize, Vec<u32>)> = Vec::new();
        for (si, s) in subs.iter().enumerate() {
            let deg = s.iter().filter(|&&b| b).count() as u32;
            if deg <= d {
                cols.extend(monomials(n, d - deg).into_iter().map(|m| (si, m)));
            }
        }
        let mut ech = Echelon::new(cols.len());
        free[0].push(cols.len());
        for (p, x) in support.iter().enumerate() {
            for (ei, _) in ends.iter().enumerate().filter(|(_, e)| *e == x) {
                let images: Vec<Vec<Rat>> = cols
                    .iter()
                    .map(|(si, m)| Poly::monomial(m.clone(), Rat::one()).mul(&local[*si][ei]).coords(d, &target))
                    .collect();
                for r in 0..target.len() {
                    ech.insert(images.iter().map(|v| v[r].clone()).collect());
                }
            }
            free[p + 1].push(cols.len() - ech.rank());
        }
    }
    let mut out = Vec::new();
    for (p, x) in support.iter().enumerate() {
        let mut gen_degrees: Vec<i64> = Vec::new();
        for d in 0..=(k + 1) {
            let sub = (free[p][d] - free[p + 1][d]) as i64;
            let expected: i64 = gen_degrees.iter().map(|&g| dim_homogeneous(n, d as i64 - g) as i64).sum();
            for _ in 0..(sub - expected) {
                gen_degrees.push(d as i64);
            }
        }
        let lw = lengths[x] as i64;
        let mut ch = LaurentPoly::zero();
        for g in gen_degrees {
            ch = ch.add(&LaurentPoly::monomial(k as i64 + lw - 2 * g, Int::one()));
        }
        out.push((x.clone(), ch));
    }
    Ok(out)
}

/// Incremental row echelon form.
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let f = v[p].clone();
        for x in v.iter_mut() {
            *x /= &f;
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let g = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &g * y;
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Degree-wise check of
/// `0 → End(B_r) → Fun(Γ¹) ⊕ Fun(Γ^r) → Fun(mirror) → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndReport {
    /// `(degree, dim End, dim Γ¹ ⊕ Γ^r, dim mirror ring)` per degree, with
    /// `End(B_r)` identified with `B_r` acting on itself.
    pub rows: Vec<(u32, usize, usize, usize)>,
    pub injective: bool,
    pub composite_zero: bool,
    pub exact: bool,
}

pub fn end_bs_ranks(r: &Reflection, max_degree: u32) -> EndReport {
    let n = r.nvars();
    let bs = BottSamelson::new(vec![r.clone()], n).expect("single reflection");
    let id = RatMatrix::identity(n);
    let mut rows = Vec::new();
    let mut injective = true;
    let mut composite_zero = true;
    let mut exact = true;
    for d in 0..=max_degree {
        let mono_d: HashMap<Vec<u32>, usize> = monomials(n, d).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut images: Vec<Vec<Rat>> = Vec::new();
        for s in bs.basis() {
            let deg = s.iter().filter(|&&b| b).count() as u32;
            if deg > d {
                continue;
            }
            for m in monomials(n, d - deg) {
                let x: BsElement = BTreeMap::from([(s.clone(), Poly::monomial(m, Rat::one()))]);
                let at_e = bs.localize(&x, &id).remove(0);
                let at_r = bs.localize(&x, &r.matrix).remove(0);
                // restriction to the mirror: the difference must be divisible by α
                if !at_e.sub(&at_r).is_zero() && at_e.sub(&at_r).div_linear(&r.alpha).is_err() {
                    composite_zero = false;
                }
                let mut v = at_e.coords(d, &mono_d);
                v.extend(at_r.coords(d, &mono_d));
                images.push(v);
            }
        }
        let dim_end = images.len();
        let rank = if images.is_empty() {
            0
        } else {
            RatMatrix::from_rows(&images, 2 * mono_d.len()).expect("shape").rank()
        };
        let dim_mid = 2 * dim_homogeneous(n, d as i64);
        let dim_mirror = dim_homogeneous(n, d as i64) - dim_homogeneous(n, d as i64 - 1);
        injective &= rank == dim_end;
        // image = kernel of the difference map, which is onto the mirror ring
        exact &= rank + dim_mirror == dim_mid;
        rows.push((d, dim_end, dim_mid, dim_mirror));
    }
    EndReport { rows, injective, composite_zero, exact }
}

/// Reflections of the affine `A_1` realization on `Q K ⊕ Q`, and finite
/// rank-two realizations from root data.
pub fn reflections_from_matrices(ms: &[RatMatrix]) -> Result<Vec<Reflection>, SoergelError> {
    ms.iter().cloned().map(Reflection::new).collect()
}
