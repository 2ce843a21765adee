//! Integral coroots, integral Weyl groups and minimal coset representatives.
//!
//! A [`Twisting`] fixes the central data: a rational level `κ` on `X_* ⊗ Q`
//! (for a character with central value `c` this is `c·S`) together with
//! optional components on which the level carries an independent irrational
//! factor. Characters are then the finite parts `χ_f ∈ X^* ⊗ Q/Z`, and
//! `t^λ w` acts by `χ_f ↦ w χ_f − κ(λ)`.
//!
//! `(α, n)` is integral for `χ_f` when `χ_f(α) + n·κ(α, α)/2 ∈ Z`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::affine::{
    AffineCoroot, AffineWeyl, CharacterPoint, CorootFamily, ExtendedWeylElement, GramForm, Order,
    Progression,
};
use crate::exact::{
    dot, int, integer_kernel, rat_of, solve_integer_affine, to_rat_vec, Coset, IntMatrix, Int, QmodZ,
    Rat, RatMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegralError {
    #[error("element does not carry the right character to the left character")]
    NotInStabilizerOrbit,
    #[error("characters do not match: right character of the first factor differs from the left character of the second")]
    CharacterMismatch,
    #[error("postcondition failed: {0}")]
    Verification(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Finite part of a character point, reduced modulo 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<QmodZ>);

impl Character {
    pub fn trivial(n: usize) -> Self {
        Character(vec![QmodZ::zero(); n])
    }

    pub fn from_rats(v: &[Rat]) -> Self {
        Character(v.iter().map(QmodZ::new).collect())
    }

    pub fn lift(&self) -> Vec<Rat> {
        self.0.iter().map(|q| q.lift()).collect()
    }

    pub fn eval(&self, v: &[Int]) -> Rat {
        dot(&to_rat_vec(v), &self.lift())
    }
}

impl From<&CharacterPoint> for Character {
    fn from(c: &CharacterPoint) -> Self {
        Character(c.finite.clone())
    }
}

/// A coroot direction's data: `q = κ(α, α)/2`, or an irrational flag.
#[derive(Clone, Debug, PartialEq, Eq)]
enum SquareLength {
    Rational(Rat),
    Irrational,
}

/// Central data shared by all characters of a computation.
#[derive(Clone, Debug)]
pub struct Twisting {
    aw: AffineWeyl,
    kappa: RatMatrix,
    irrational: Vec<RatMatrix>,
    /// Basis of the cocharacters killed by every irrational block.
    lattice: Vec<Vec<Int>>,
    q: Vec<SquareLength>,
}

impl Twisting {
    /// Level `κ = kappa + Σ ξ_i irrational_i` with the `ξ_i` treated as
    /// independent irrationals.
    pub fn new(aw: AffineWeyl, kappa: RatMatrix, irrational: Vec<RatMatrix>) -> Result<Self, IntegralError> {
        let n = aw.rank();
        if kappa.rows() != n || kappa.cols() != n || irrational.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(IntegralError::Dimension(format!("levels must be {n}x{n}")));
        }
        let lattice = if irrational.is_empty() {
            (0..n).map(|k| (0..n).map(|i| int((i == k) as i64)).collect()).collect()
        } else {
            let rows: Vec<Vec<Rat>> = irrational.iter().flat_map(|m| m.to_rows()).collect();
            let ints: Vec<Vec<Int>> = rows
                .iter()
                .map(|r| {
                    let l = r.iter().fold(Int::one(), |a, x| a.lcm(x.denom()));
                    r.iter().map(|x| (x * rat_of(&l)).to_integer()).collect()
                })
                .collect();
            integer_kernel(&IntMatrix::from_rows(&ints, n).expect("shape"))
        };
        let rd = aw.rd();
        let q = (0..rd.num_roots())
            .map(|i| {
                let c = to_rat_vec(rd.coroot(i));
                if irrational.iter().any(|m| !dot(&c, &m.mul_vec(&c)).is_zero()) {
                    SquareLength::Irrational
                } else {
                    SquareLength::Rational(dot(&c, &kappa.mul_vec(&c)) / Rat::from_integer(int(2)))
                }
            })
            .collect();
        Ok(Twisting { aw, kappa, irrational, lattice, q })
    }

    /// The twisting of characters with central value `c`: `κ = c·S`.
    pub fn from_central(aw: AffineWeyl, form: &GramForm, c: &QmodZ) -> Self {
        let kappa = form.matrix().to_rat().scale(&c.lift());
        Self::new(aw, kappa, vec![]).expect("form has the right size")
    }

    pub fn aw(&self) -> &AffineWeyl {
        &self.aw
    }

    pub fn kappa(&self) -> &RatMatrix {
        &self.kappa
    }

    pub fn irrational(&self) -> &[RatMatrix] {
        &self.irrational
    }

    pub fn rank(&self) -> usize {
        self.aw.rank()
    }

    /// `κ(α, α)/2` for coroot `i`, `None` when it is irrational.
    pub fn half_square(&self, i: usize) -> Option<&Rat> {
        match &self.q[i] {
            SquareLength::Rational(q) => Some(q),
            SquareLength::Irrational => None,
        }
    }

    fn sign(&self, i: usize) -> i8 {
        match &self.q[i] {
            SquareLength::Rational(q) if q.is_negative() => -1,
            _ => 1,
        }
    }

    /// `{n : χ_f(α) + n q ∈ Z}` for coroot `i`.
    pub fn progression(&self, chi: &Character, i: usize) -> Progression {
        let t = chi.eval(self.aw.rd().coroot(i));
        match &self.q[i] {
            SquareLength::Irrational => {
                if t.is_integer() {
                    Progression::Zero
                } else {
                    Progression::Empty
                }
            }
            SquareLength::Rational(q) => {
                let (a, b) = (q.numer().clone(), q.denom().clone());
                let tb = t * rat_of(&b);
                if !tb.is_integer() {
                    return Progression::Empty;
                }
                if a.is_zero() {
                    return Progression::all();
                }
                // n a ≡ -t b (mod b)
                let inv = mod_inverse(&a, &b);
                let residue = (-tb.to_integer() * inv).mod_floor(&b);
                Progression::Arith { residue, modulus: b }
            }
        }
    }

    pub fn family(&self, chi: &Character) -> CorootFamily {
        let n = self.aw.rd().num_roots();
        CorootFamily {
            progressions: (0..n).map(|i| self.progression(chi, i)).collect(),
            signs: (0..n).map(|i| self.sign(i)).collect(),
        }
    }

    pub fn is_integral(&self, chi: &Character, b: &AffineCoroot) -> bool {
        self.progression(chi, b.root).contains(&b.n)
    }

    /// `t^λ w · χ_f = w χ_f − κ(λ)`.
    pub fn act(&self, g: &ExtendedWeylElement, chi: &Character) -> Character {
        Character::from_rats(&g.act_slice(&self.kappa, &chi.lift()))
    }

    fn in_lattice(&self, v: &[Int]) -> bool {
        self.irrational.iter().all(|m| m.mul_vec(&to_rat_vec(v)).iter().all(|x| x.is_zero()))
    }

    /// Whether `g · right = left`.
    pub fn carries(&self, g: &ExtendedWeylElement, left: &Character, right: &Character) -> bool {
        self.in_lattice(g.trans()) && &self.act(g, right) == left
    }

    /// For each `w ∈ W` (in Weyl group order), the coset of `λ` with
    /// `t^λ w · right = left`, if any.
    pub fn transporter(&self, left: &Character, right: &Character) -> Vec<Option<Coset>> {
        let n = self.rank();
        let k = IntMatrix::from_cols(&self.lattice, n).expect("shape");
        let kk = self.kappa.mul(&k.to_rat());
        let m = self.lattice.len();
        let mut a = IntMatrix::zeros(n, m);
        let mut scales = Vec::with_capacity(n);
        for i in 0..n {
            let l = (0..m).fold(Int::one(), |acc, j| acc.lcm(kk[(i, j)].denom()));
            for j in 0..m {
                a[(i, j)] = (kk[(i, j)].clone() * rat_of(&l)).to_integer();
            }
            scales.push(l);
        }
        let weyl = self.aw.weyl();
        let (rl, rr) = (left.lift(), right.lift());
        (0..weyl.len())
            .map(|w| {
                let wr = weyl.dual_action(w).to_rat().mul_vec(&rr);
                let b: Vec<Rat> = (0..n).map(|i| (wr[i].clone() - rl[i].clone()) * rat_of(&scales[i])).collect();
                let moduli: Vec<Rat> = scales.iter().map(rat_of).collect();
                let sol = solve_integer_affine(&a, &b, &moduli).expect("consistent sizes")?;
                let lift = |y: &[Int]| k.mul_vec(y);
                let gens: Vec<Vec<Int>> = sol.basis.iter().map(|b| lift(b)).collect();
                Some(Coset::new(lift(&sol.particular), &gens))
            })
            .collect()
    }

    pub fn stabilizer(&self, chi: &Character) -> Vec<Option<Coset>> {
        self.transporter(chi, chi)
    }

    /// `ℓ_β(z)`: positive coroots integral for `right` sent to negative ones.
    pub fn length(&self, z: &ExtendedWeylElement, right: &Character) -> Int {
        self.family(right).inversions(self.aw.rd(), self.aw.weyl(), z)
    }

    /// Simple integral coroots for `chi`.
    pub fn simples(&self, chi: &Character) -> Vec<AffineCoroot> {
        self.aw.simple_system(&self.family(chi))
    }

    pub fn system(&self, chi: &Character) -> IntegralSystem {
        let family = self.family(chi);
        let simples = self.aw.simple_system(&family);
        let reflections: Vec<ExtendedWeylElement> = simples.iter().map(|b| self.aw.reflection(b)).collect();
        let coxeter: Vec<Vec<Order>> = reflections
            .iter()
            .map(|a| reflections.iter().map(|b| a.mul(b).order()).collect())
            .collect();
        let components = coxeter_components(&coxeter)
            .into_iter()
            .map(|members| {
                let rows: Vec<Vec<Rat>> =
                    members.iter().map(|&k| to_rat_vec(self.aw.rd().coroot(simples[k].root))).collect();
                let finite = rows.is_empty()
                    || RatMatrix::from_rows(&rows, self.rank()).expect("shape").rank() == members.len();
                Component { members, finite }
            })
            .collect();
        IntegralSystem {
            character: chi.clone(),
            family,
            simples,
            reflections,
            coxeter,
            components,
            stabilizer: self.stabilizer(chi),
        }
    }

    /// Descent walk: returns `w^β` and the simple reflections `r_1, ..., r_k`
    /// (of the right character) with `x = w^β r_k ... r_1`.
    pub fn minimal_rep(
        &self,
        x: &ExtendedWeylElement,
        left: &Character,
        right: &Character,
    ) -> Result<(MinimalElement, Vec<AffineCoroot>), IntegralError> {
        if !self.carries(x, left, right) {
            return Err(IntegralError::NotInStabilizerOrbit);
        }
        let fam = self.family(right);
        let simples = self.aw.simple_system(&fam);
        let refl: Vec<ExtendedWeylElement> = simples.iter().map(|b| self.aw.reflection(b)).collect();
        let mut cur = x.clone();
        let mut steps = Vec::new();
        'walk: loop {
            for (b, r) in simples.iter().zip(&refl) {
                if !self.aw.is_positive_in(&fam, &self.aw.act_coroot(&cur, b)) {
                    cur = cur.mul(r);
                    steps.push(b.clone());
                    continue 'walk;
                }
            }
            break;
        }
        let m = MinimalElement { elem: cur, left: left.clone(), right: right.clone() };
        if !self.length(&m.elem, right).is_zero() {
            return Err(IntegralError::Verification("descent walk ended at a non-minimal element".into()));
        }
        Ok((m, steps))
    }

    /// Product of minimal elements, checked to be minimal again.
    pub fn omega_compose(&self, a: &MinimalElement, b: &MinimalElement) -> Result<MinimalElement, IntegralError> {
        if a.right != b.left {
            return Err(IntegralError::CharacterMismatch);
        }
        let p = MinimalElement { elem: a.elem.mul(&b.elem), left: a.left.clone(), right: b.right.clone() };
        if !self.carries(&p.elem, &p.left, &p.right) || !self.length(&p.elem, &p.right).is_zero() {
            return Err(IntegralError::Verification("product of minimal elements is not minimal".into()));
        }
        Ok(p)
    }

    /// Length-zero elements of the stabilizer obtained from translations with
    /// coefficients bounded by `bound` in each coset.
    pub fn omega_elements(&self, chi: &Character, bound: i64) -> Vec<ExtendedWeylElement> {
        let mut out = BTreeSet::new();
        for (w, coset) in self.stabilizer(chi).iter().enumerate() {
            let Some(coset) = coset else { continue };
            for lam in coset_ball(coset, bound) {
                let g = ExtendedWeylElement::new(lam, self.aw.weyl().element(w).clone());
                if let Ok((m, _)) = self.minimal_rep(&g, chi, chi) {
                    out.insert(m.elem);
                }
            }
        }
        let mut v: Vec<_> = out.into_iter().collect();
        self.aw.sort_elements(&mut v);
        v
    }

    /// Height of an ambient-positive affine coroot in the realization
    /// `(α, n) ↦ n Q₀(α) K + α`, `Q₀` the Killing-type form.
    pub fn height(&self, b: &AffineCoroot) -> Option<Int> {
        ambient_height(&self.aw, b)
    }

    /// A minimal `u` with `u r u⁻¹` ambient-simple, by height descent. Also
    /// returns the heights visited, which strictly decrease.
    pub fn conjugate_to_simple(
        &self,
        r: &AffineCoroot,
        chi: &Character,
    ) -> Result<(MinimalElement, Vec<Int>), IntegralError> {
        let aw = &self.aw;
        let amb = CorootFamily::ambient(aw.rd());
        let simples = aw.simple_affine();
        let mut u = aw.identity();
        let mut beta = r.clone();
        let mut heights = vec![self.height(&beta).ok_or_else(|| IntegralError::Verification("root is not positive".into()))?];
        while !simples.contains(&beta) {
            let mut moved = false;
            for s in &simples {
                let sb = aw.act_coroot(&aw.reflection(s), &beta);
                if !amb.is_positive(aw.rd(), &sb) {
                    continue;
                }
                let h = self.height(&sb).expect("positive");
                if &h < heights.last().unwrap() {
                    u = aw.reflection(s).mul(&u);
                    beta = sb;
                    heights.push(h);
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Err(IntegralError::Verification("height descent got stuck".into()));
            }
        }
        let left = self.act(&u, chi);
        let m = MinimalElement { elem: u, left: left.clone(), right: chi.clone() };
        if !self.length(&m.elem, chi).is_zero() {
            return Err(IntegralError::Verification("conjugating element is not minimal".into()));
        }
        if !self.simples(&left).contains(&beta) {
            return Err(IntegralError::Verification("conjugate is not simple for the new character".into()));
        }
        Ok((m, heights))
    }
}

impl AffineWeyl {
    pub fn is_positive_in(&self, fam: &CorootFamily, b: &AffineCoroot) -> bool {
        fam.is_positive(self.rd(), b)
    }
}

fn mod_inverse(a: &Int, m: &Int) -> Int {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// All `particular + Σ k_j basis_j` with `|k_j| <= bound`.
pub fn coset_ball(c: &Coset, bound: i64) -> Vec<Vec<Int>> {
    let mut out = vec![c.particular.clone()];
    for b in &c.basis {
        let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
        for v in &out {
            for k in -bound..=bound {
                next.push(v.iter().zip(b).map(|(x, y)| x + y * int(k)).collect());
            }
        }
        out = next;
    }
    out
}

fn coxeter_components(m: &[Vec<Order>]) -> Vec<Vec<usize>> {
    let k = m.len();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..k {
                let joined = matches!(m[a][b], Order::Infinite) || matches!(m[a][b], Order::Finite(x) if x >= 3);
                if !seen[b] && joined {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort();
        out.push(comp);
    }
    out
}

fn ambient_height(aw: &AffineWeyl, b: &AffineCoroot) -> Option<Int> {
    let rd = aw.rd();
    if !aw.is_positive(b) {
        return None;
    }
    // Killing-type form
    let n = rd.rank();
    let s0 = IntMatrix::from_fn(n, n, |i, j| rd.roots().iter().map(|a| a[i].clone() * a[j].clone()).sum());
    let q0 = |i: usize| dot(rd.coroot(i), &s0.mul_vec(rd.coroot(i)));
    let realize = |b: &AffineCoroot| -> Vec<Rat> {
        let mut v = vec![rat_of(&(b.n.clone() * q0(b.root)))];
        v.extend(to_rat_vec(rd.coroot(b.root)));
        v
    };
    let comp = rd.component_of_root(b.root)?;
    let simples: Vec<AffineCoroot> =
        aw.simple_affine().into_iter().filter(|s| rd.component_of_root(s.root) == Some(comp)).collect();
    let cols: Vec<Vec<Rat>> = simples.iter().map(realize).collect();
    let m = RatMatrix::from_cols(&cols, n + 1).ok()?;
    let target = realize(b);
    // least squares is unnecessary: the simple realizations are independent
    let (rr, piv) = m.rref();
    let _ = rr;
    if piv.len() != simples.len() {
        return None;
    }
    let sel: Vec<usize> = {
        let t = m.transpose();
        let (_, rows) = t.rref();
        rows
    };
    let sq = m.select(&sel, &(0..simples.len()).collect::<Vec<_>>());
    let tv: Vec<Rat> = sel.iter().map(|&i| target[i].clone()).collect();
    let c = sq.solve(&tv)?;
    if m.mul_vec(&c) != target {
        return None;
    }
    Some(c.iter().fold(Int::zero(), |a, x| a + x.to_integer()))
}

/// A connected piece of the Coxeter graph of `S_χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub members: Vec<usize>,
    pub finite: bool,
}

/// All integral data attached to one character.
#[derive(Clone, Debug)]
pub struct IntegralSystem {
    pub character: Character,
    pub family: CorootFamily,
    pub simples: Vec<AffineCoroot>,
    pub reflections: Vec<ExtendedWeylElement>,
    pub coxeter: Vec<Vec<Order>>,
    pub components: Vec<Component>,
    /// Indexed like the Weyl group elements.
    pub stabilizer: Vec<Option<Coset>>,
}

impl IntegralSystem {
    /// The translation lattice `L_χ`.
    pub fn translation_lattice(&self) -> &[Vec<Int>] {
        &self.stabilizer[0].as_ref().expect("identity stabilizes").basis
    }
}

/// An element `x` with `x · right = left` of length zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimalElement {
    pub elem: ExtendedWeylElement,
    pub left: Character,
    pub right: Character,
}

impl MinimalElement {
    pub fn identity(t: &Twisting, chi: &Character) -> Self {
        MinimalElement { elem: t.aw().identity(), left: chi.clone(), right: chi.clone() }
    }

    pub fn inverse(&self) -> Self {
        MinimalElement { elem: self.elem.inverse(), left: self.right.clone(), right: self.left.clone() }
    }
}

/// Products of longest elements over `Ω`-orbits of finite components, kept
/// when they normalize `S_χ` and preserve length zero on `omega`.
pub fn finite_longest_group(
    t: &Twisting,
    sys: &IntegralSystem,
    omega: &[ExtendedWeylElement],
) -> Vec<ExtendedWeylElement> {
    let chi = &sys.character;
    let finite: Vec<&Component> = sys.components.iter().filter(|c| c.finite && !c.members.is_empty()).collect();
    if finite.is_empty() {
        return vec![t.aw().identity()];
    }
    let refl_index: BTreeMap<&ExtendedWeylElement, usize> =
        sys.reflections.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let comp_of = |k: usize| finite.iter().position(|c| c.members.contains(&k));
    // orbits of finite components under conjugation by Ω
    let mut orbit_id: Vec<usize> = (0..finite.len()).collect();
    for w in omega {
        let winv = w.inverse();
        for (ci, c) in finite.iter().enumerate() {
            let k = c.members[0];
            let conj = w.mul(&sys.reflections[k]).mul(&winv);
            if let Some(&j) = refl_index.get(&conj) {
                if let Some(cj) = comp_of(j) {
                    let (a, b) = (orbit_id[ci], orbit_id[cj]);
                    let m = a.min(b);
                    for o in orbit_id.iter_mut() {
                        if *o == a || *o == b {
                            *o = m;
                        }
                    }
                }
            }
        }
    }
    let orbits: BTreeSet<usize> = orbit_id.iter().copied().collect();
    let mut gens = Vec::new();
    for o in orbits {
        let mut z = t.aw().identity();
        for (ci, c) in finite.iter().enumerate() {
            if orbit_id[ci] == o {
                z = z.mul(&longest_in(t, chi, &c.members.iter().map(|&k| sys.reflections[k].clone()).collect::<Vec<_>>()));
            }
        }
        let zinv = z.inverse();
        let normalizes = sys.reflections.iter().all(|r| refl_index.contains_key(&z.mul(r).mul(&zinv)));
        let keeps = omega.iter().all(|w| t.length(&z.mul(w).mul(&zinv), chi).is_zero());
        if normalizes && keeps {
            gens.push(z);
        }
    }
    let mut out = crate::affine::close_group(&gens, t.rank());
    t.aw().sort_elements(&mut out);
    out
}

/// Longest element of the finite parabolic generated by `refl`, by ascent.
pub fn longest_in(t: &Twisting, chi: &Character, refl: &[ExtendedWeylElement]) -> ExtendedWeylElement {
    let mut x = t.aw().identity();
    let mut len = Int::zero();
    'up: loop {
        for r in refl {
            let y = x.mul(r);
            let l = t.length(&y, chi);
            if l > len {
                x = y;
                len = l;
                continue 'up;
            }
        }
        return x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ivec, rat};
    use crate::rootdata::{preset, Preset};

    fn sl2_half() -> (Twisting, Character) {
        let rd = preset(&Preset::SL(2)).unwrap();
        let form = GramForm::from_weights(&rd, &[ivec(&[1]), ivec(&[-1])]).unwrap();
        let aw = AffineWeyl::new(rd).unwrap();
        (Twisting::from_central(aw, &form, &QmodZ::new(&rat(1, 2))), Character::trivial(1))
    }

    #[test]
    fn sl2_progression_and_simples() {
        let (t, chi) = sl2_half();
        assert_eq!(t.progression(&chi, 0), Progression::Arith { residue: int(0), modulus: int(2) });
        let sys = t.system(&chi);
        assert_eq!(sys.simples, vec![AffineCoroot::new(0, 0), AffineCoroot::new(1, 2)]);
        assert_eq!(sys.coxeter[0][1], Order::Infinite);
        assert!(!sys.components[0].finite);
        assert!(sys.stabilizer.iter().all(|c| c.is_some()));
    }

    #[test]
    fn sl2_translation_is_neutral() {
        let (t, chi) = sl2_half();
        let x = ExtendedWeylElement::translation(ivec(&[1]));
        let (m, steps) = t.minimal_rep(&x, &chi, &chi).unwrap();
        // t^α lies in the nontrivial block: the neutral block only has even translations
        let rd = t.aw().rd();
        assert_eq!(m.elem, ExtendedWeylElement::new(ivec(&[-1]), rd.reflection(0)));
        assert_eq!(steps.len(), 1);
        assert_eq!(t.length(&x, &chi), int(1));
    }

    #[test]
    fn sl2_far_wall_conjugates_to_simple() {
        let (t, chi) = sl2_half();
        let (u, heights) = t.conjugate_to_simple(&AffineCoroot::new(1, 2), &chi).unwrap();
        assert_eq!(t.aw().length(&u.elem), int(1));
        assert!(heights.windows(2).all(|w| w[0] > w[1]));
    }
}
