//! The monodromic Hecke algebroid: standard basis `T_x` for
//! `x ∈ {}_χW̃_{χ'}`, composed when the middle characters agree.
//!
//! Normalization: `T_r² = (v⁻¹ − v) T_r + T_e` for simple integral `r`, and
//! `T_x T_y = T_{xy}` when `y` is minimal. Bott–Samelson elements are
//! `b_r = T_r + v`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::affine::{AffineCoroot, CorootFamily, ExtendedWeylElement, Order};
use crate::exact::Int;
use crate::integral::{Character, IntegralError, Twisting};

/// Finitely supported `Σ c_k v^k` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly(BTreeMap<i64, Int>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(0, Int::one())
    }

    pub fn v() -> Self {
        Self::monomial(1, Int::one())
    }

    pub fn monomial(e: i64, c: Int) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        LaurentPoly(m)
    }

    /// `v⁻¹ − v`.
    pub fn quadratic() -> Self {
        Self::from_pairs(&[(-1, 1), (1, -1)])
    }

    pub fn from_pairs(p: &[(i64, i64)]) -> Self {
        let mut out = Self::zero();
        for &(e, c) in p {
            out.add_term(e, &Int::from(c));
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<i64, Int> {
        &self.0
    }

    pub fn coeff(&self, e: i64) -> Int {
        self.0.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, e: i64, c: &Int) {
        let x = self.0.entry(e).or_default();
        *x += c;
        if x.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> Int {
        self.0.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|c| !c.is_negative())
    }

    /// `v ↦ v⁻¹`.
    pub fn bar(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(e, c)| (-e, c.clone())).collect())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.0.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if a.is_one() && *e != 0 { String::new() } else { a.to_string() };
            match e {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coeff}v")?,
                _ => write!(f, "{coeff}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("element does not carry the right character to the left character")]
    NotInTransporter,
    #[error("{0:?} is not a simple integral coroot for the given character")]
    NotSimple(AffineCoroot),
    #[error("word is not well typed across characters at letter {0}")]
    CharacterMismatch(usize),
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

/// `Σ c_x T_x` with `x · right = left` for every `x` in the support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeckeElement {
    pub left: Character,
    pub right: Character,
    pub terms: BTreeMap<ExtendedWeylElement, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(left: Character, right: Character) -> Self {
        HeckeElement { left, right, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &ExtendedWeylElement) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, x: ExtendedWeylElement, c: &LaurentPoly) {
        let e = self.terms.entry(x.clone()).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.left == o.left && self.right == o.right, "adding elements of different hom spaces");
        let mut out = self.clone();
        for (x, c) in &o.terms {
            out.add_term(x.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.left.clone(), self.right.clone());
        for (x, d) in &self.terms {
            out.add_term(x.clone(), &d.mul(c));
        }
        out
    }

    /// Coefficients at `v = 1`.
    pub fn at_one(&self) -> BTreeMap<ExtendedWeylElement, Int> {
        self.terms.iter().map(|(x, c)| (x.clone(), c.at_one())).filter(|(_, c)| !c.is_zero()).collect()
    }
}

struct CharData {
    family: CorootFamily,
    simples: Vec<AffineCoroot>,
    reflections: Vec<ExtendedWeylElement>,
}

/// Multiplication in the algebroid over a fixed twisting.
pub struct HeckeAlgebroid {
    tw: Twisting,
    cache: Mutex<HashMap<Character, Arc<CharData>>>,
}

/// A letter of a Bott–Samelson word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `b_r` for a simple integral coroot of the character to its right.
    Simple(AffineCoroot),
    /// `T_ω` for a minimal element.
    Minimal(ExtendedWeylElement),
}

impl HeckeAlgebroid {
    pub fn new(tw: Twisting) -> Self {
        HeckeAlgebroid { tw, cache: Mutex::new(HashMap::new()) }
    }

    pub fn twisting(&self) -> &Twisting {
        &self.tw
    }

    fn data(&self, chi: &Character) -> Arc<CharData> {
        if let Some(d) = self.cache.lock().expect("cache lock").get(chi) {
            return d.clone();
        }
        let family = self.tw.family(chi);
        let simples = self.tw.aw().simple_system(&family);
        let reflections = simples.iter().map(|b| self.tw.aw().reflection(b)).collect();
        let d = Arc::new(CharData { family, simples, reflections });
        self.cache.lock().expect("cache lock").insert(chi.clone(), d.clone());
        d
    }

    pub fn simples(&self, chi: &Character) -> Vec<AffineCoroot> {
        self.data(chi).simples.clone()
    }

    pub fn simple_reflections(&self, chi: &Character) -> Vec<ExtendedWeylElement> {
        self.data(chi).reflections.clone()
    }

    /// `ℓ_β(x)` for `x` with right character `right`.
    pub fn length(&self, x: &ExtendedWeylElement, right: &Character) -> Int {
        let d = self.data(right);
        d.family.inversions(self.tw.aw().rd(), self.tw.aw().weyl(), x)
    }

    /// `T_x` in `Hom(right → left)`, where `left = x · right`.
    pub fn t(&self, x: &ExtendedWeylElement, right: &Character) -> HeckeElement {
        let left = self.tw.act(x, right);
        let mut terms = BTreeMap::new();
        terms.insert(x.clone(), LaurentPoly::one());
        HeckeElement { left, right: right.clone(), terms }
    }

    pub fn identity(&self, chi: &Character) -> HeckeElement {
        self.t(&self.tw.aw().identity(), chi)
    }

    /// `b_r = T_r + v T_e`.
    pub fn b(&self, r: &AffineCoroot, chi: &Character) -> Result<HeckeElement, HeckeError> {
        let d = self.data(chi);
        let k = d.simples.iter().position(|s| s == r).ok_or_else(|| HeckeError::NotSimple(r.clone()))?;
        Ok(self.t(&d.reflections[k], chi).add(&self.identity(chi).scale(&LaurentPoly::v())))
    }

    /// Right multiplication of every term by `T_r`, `r` simple for `right`.
    fn mul_simple(&self, a: &HeckeElement, r: &ExtendedWeylElement) -> HeckeElement {
        let mut out = HeckeElement::zero(a.left.clone(), a.right.clone());
        let q = LaurentPoly::quadratic();
        for (z, c) in &a.terms {
            let zr = z.mul(r);
            if self.length(&zr, &a.right) > self.length(z, &a.right) {
                out.add_term(zr, c);
            } else {
                out.add_term(zr, c);
                out.add_term(z.clone(), &c.mul(&q));
            }
        }
        out
    }

    /// `a · b`; zero when the middle characters differ.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        let mut out = HeckeElement::zero(a.left.clone(), b.right.clone());
        if a.right != b.left {
            return Ok(out);
        }
        for (y, cy) in &b.terms {
            let (m, steps) = self.tw.minimal_rep(y, &b.left, &b.right)?;
            // y = w^γ r_k ... r_1
            let mut part = HeckeElement::zero(a.left.clone(), b.right.clone());
            for (x, cx) in &a.terms {
                part.add_term(x.mul(&m.elem), &cx.mul(cy));
            }
            let d = self.data(&b.right);
            for r in steps.iter().rev() {
                let k = d.simples.iter().position(|s| s == r).expect("descent uses simple reflections");
                part = self.mul_simple(&part, &d.reflections[k]);
            }
            out = out.add(&part);
        }
        Ok(out)
    }

    /// Product of the letters read left to right, with `chi` the character
    /// at the right end.
    pub fn bott_samelson(&self, word: &[Letter], chi: &Character) -> Result<HeckeElement, HeckeError> {
        let mut right = chi.clone();
        let mut factors = Vec::with_capacity(word.len());
        for (i, l) in word.iter().enumerate().rev() {
            let f = match l {
                Letter::Simple(r) => self.b(r, &right).map_err(|_| HeckeError::CharacterMismatch(i))?,
                Letter::Minimal(w) => {
                    let t = self.t(w, &right);
                    if !self.length(w, &right).is_zero() {
                        return Err(HeckeError::CharacterMismatch(i));
                    }
                    t
                }
            };
            right = f.left.clone();
            factors.push(f);
        }
        factors.reverse();
        let mut acc = self.identity(&right);
        for f in &factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Quadratic, braid (finite `m ≤ 6`) and conjugation relations on the
    /// simple reflections of `chi`, with `omega` minimal elements.
    pub fn check_relations(&self, chi: &Character, omega: &[ExtendedWeylElement]) -> Result<RelationReport, HeckeError> {
        let d = self.data(chi);
        let mut report = RelationReport::default();
        for (i, r) in d.reflections.iter().enumerate() {
            let tr = self.t(r, chi);
            let lhs = self.mul(&tr, &tr)?;
            let rhs = tr.scale(&LaurentPoly::quadratic()).add(&self.identity(chi));
            if lhs != rhs {
                report.failures.push(format!("quadratic relation for {:?}", d.simples[i]));
            }
            report.checked += 1;
            for (j, s) in d.reflections.iter().enumerate().skip(i + 1) {
                match r.mul(s).order() {
                    Order::Infinite => report.infinite.push((i, j)),
                    Order::Finite(m) if m <= 6 => {
                        let ts = self.t(s, chi);
                        let alt = |a: &HeckeElement, b: &HeckeElement| -> Result<HeckeElement, HeckeError> {
                            let mut acc = self.identity(chi);
                            for k in 0..m {
                                acc = self.mul(&acc, if k % 2 == 0 { a } else { b })?;
                            }
                            Ok(acc)
                        };
                        if alt(&tr, &ts)? != alt(&ts, &tr)? {
                            report.failures.push(format!("braid relation of order {m} for ({i}, {j})"));
                        }
                        report.checked += 1;
                    }
                    Order::Finite(_) => report.skipped.push((i, j)),
                }
            }
        }
        for w in omega {
            let winv = w.inverse();
            let tw = self.t(w, chi);
            let left = tw.left.clone();
            let twinv = self.t(&winv, &left);
            for r in d.reflections.iter() {
                let conj = w.mul(r).mul(&winv);
                let lhs = self.mul(&self.mul(&tw, &self.t(r, chi))?, &twinv)?;
                if lhs != self.t(&conj, &left) {
                    report.failures.push(format!("conjugation of {r:?} by {w:?}"));
                }
                report.checked += 1;
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
    /// Pairs with `m = ∞`.
    pub infinite: Vec<(usize, usize)>,
    /// Pairs with finite `m > 6`.
    pub skipped: Vec<(usize, usize)>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}
