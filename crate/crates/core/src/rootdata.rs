//! Finite root data, Weyl groups, presets and Langlands duality.
//!
//! Both lattices are `Z^n` with the dot pairing: roots are stored as vectors
//! in `X^*`, coroots as vectors in `X_*`, and root `i` corresponds to coroot
//! `i`. Roots are kept in a canonical order: the positive roots sorted by
//! height and then lexicographically, followed by their negatives in the same
//! order, so that `-root(i)` is `root(i ± N)`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{
    dot, hermite, integer_kernel, int, lattice_basis, rat_of, to_int_vec, to_rat_vec, Int,
    IntMatrix, Rat, RatMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDataError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid preset parameters: {0}")]
    InvalidParams(String),
    #[error("malformed root datum: {}", .0.iter().map(|v| v.to_string()).join("; "))]
    Malformed(Vec<Violation>),
    #[error("group has more than {0} elements (raise ENGINE_MAX_GROUP_SIZE to allow it)")]
    GroupTooLarge(usize),
    #[error("canonical form not implemented for this datum: {0}")]
    CanonicalFormUnsupported(String),
}

/// A failed root-datum axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Cap on enumerated group sizes, read from `ENGINE_MAX_GROUP_SIZE`.
pub fn max_group_size() -> usize {
    std::env::var("ENGINE_MAX_GROUP_SIZE").ok().and_then(|s| s.parse().ok()).unwrap_or(100_000)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<Int>>,
    coroots: Vec<Vec<Int>>,
    simple: Vec<usize>,
    // coefficients of each root in the simple roots
    simple_coeffs: Vec<Vec<Int>>,
    ambient: Option<RatMatrix>,
    name: String,
}

impl RootDatum {
    /// Builds a datum from paired roots and coroots and a choice of simple roots.
    ///
    /// Only the shape needed to fix a positive system is checked here; the
    /// remaining axioms are reported by [`validate_root_datum`].
    pub fn new(
        rank: usize,
        roots: Vec<Vec<Int>>,
        coroots: Vec<Vec<Int>>,
        simple: Vec<usize>,
    ) -> Result<Self, RootDataError> {
        let mut bad = Vec::new();
        if roots.len() != coroots.len() {
            bad.push(Violation(format!("{} roots but {} coroots", roots.len(), coroots.len())));
        }
        for (i, v) in roots.iter().chain(&coroots).enumerate() {
            if v.len() != rank {
                bad.push(Violation(format!("vector {i} has length {}, expected {rank}", v.len())));
            }
        }
        if simple.iter().any(|&s| s >= roots.len()) || simple.iter().collect::<BTreeSet<_>>().len() != simple.len()
        {
            bad.push(Violation("simple root indices out of range or repeated".into()));
        }
        if !bad.is_empty() {
            return Err(RootDataError::Malformed(bad));
        }
        let base: Vec<Vec<Rat>> = simple.iter().map(|&s| to_rat_vec(&roots[s])).collect();
        let bmat = RatMatrix::from_cols(&base, rank).expect("shape checked");
        if bmat.rank() != simple.len() {
            return Err(RootDataError::Malformed(vec![Violation(
                "simple roots are linearly dependent".into(),
            )]));
        }
        let mut coeffs = Vec::with_capacity(roots.len());
        for (i, r) in roots.iter().enumerate() {
            let c = bmat.solve(&to_rat_vec(r)).and_then(|c| to_int_vec(&c));
            match c {
                Some(c) if c.iter().all(|x| !x.is_negative()) || c.iter().all(|x| !x.is_positive()) => {
                    coeffs.push(c)
                }
                _ => bad.push(Violation(format!(
                    "root {i} is not a same-sign integer combination of the simple roots"
                ))),
            }
        }
        if !bad.is_empty() {
            return Err(RootDataError::Malformed(bad));
        }
        // canonical order: by height, then by simple coefficients in decreasing
        // lexicographic order, so the simple roots keep their given order
        let height = |c: &Vec<Int>| c.iter().fold(Int::zero(), |a, x| a + x);
        let mut pos: Vec<usize> = (0..roots.len()).filter(|&i| height(&coeffs[i]).is_positive()).collect();
        pos.sort_by(|&a, &b| height(&coeffs[a]).cmp(&height(&coeffs[b])).then(coeffs[b].cmp(&coeffs[a])));
        let index: HashMap<&Vec<Int>, usize> = roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut order = pos.clone();
        for &p in &pos {
            let neg: Vec<Int> = roots[p].iter().map(|x| -x).collect();
            match index.get(&neg) {
                Some(&q) => order.push(q),
                None => bad.push(Violation(format!("the negative of root {p} is not a root"))),
            }
        }
        if order.len() != roots.len() && bad.is_empty() {
            bad.push(Violation("root list contains zero or repeated vectors".into()));
        }
        if !bad.is_empty() {
            return Err(RootDataError::Malformed(bad));
        }
        let new_pos: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut simple_new: Vec<usize> = simple.iter().map(|s| new_pos[s]).collect();
        let simple_old_sorted = simple_new.clone();
        simple_new.sort();
        // reorder simple coefficient columns to match the sorted simple list
        let perm: Vec<usize> = simple_new.iter().map(|s| simple_old_sorted.iter().position(|t| t == s).unwrap()).collect();
        Ok(RootDatum {
            rank,
            roots: order.iter().map(|&i| roots[i].clone()).collect(),
            coroots: order.iter().map(|&i| coroots[i].clone()).collect(),
            simple_coeffs: order.iter().map(|&i| perm.iter().map(|&p| coeffs[i][p].clone()).collect()).collect(),
            simple: simple_new,
            ambient: None,
            name: String::new(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Records the matrix whose columns are the `X_*` basis vectors in the
    /// ambient coordinates used to state the preset.
    pub fn with_ambient(mut self, ambient: RatMatrix) -> Self {
        self.ambient = Some(ambient);
        self
    }

    pub fn torus(rank: usize) -> Self {
        RootDatum::new(rank, vec![], vec![], vec![]).expect("a torus is always valid").with_name(format!("T{rank}"))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> Option<&RatMatrix> {
        self.ambient.as_ref()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple.len()
    }

    pub fn roots(&self) -> &[Vec<Int>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<Int>] {
        &self.coroots
    }

    pub fn root(&self, i: usize) -> &[Int] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[Int] {
        &self.coroots[i]
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }

    pub fn negative_of(&self, i: usize) -> usize {
        let n = self.num_positive();
        if i < n {
            i + n
        } else {
            i - n
        }
    }

    /// Coefficients of root `i` in the simple roots (in `simple_indices` order).
    pub fn simple_coefficients(&self, i: usize) -> &[Int] {
        &self.simple_coeffs[i]
    }

    pub fn height(&self, i: usize) -> Int {
        self.simple_coeffs[i].iter().sum()
    }

    pub fn coroot_index(&self, v: &[Int]) -> Option<usize> {
        self.coroots.iter().position(|c| c.as_slice() == v)
    }

    pub fn root_index(&self, v: &[Int]) -> Option<usize> {
        self.roots.iter().position(|c| c.as_slice() == v)
    }

    /// Matrix of `s_i` on `X_*`: `v - <v, alpha_i> alpha_i^vee`.
    pub fn reflection(&self, i: usize) -> IntMatrix {
        let n = self.rank;
        IntMatrix::from_fn(n, n, |a, b| {
            let d = if a == b { Int::one() } else { Int::zero() };
            d - self.coroots[i][a].clone() * self.roots[i][b].clone()
        })
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<Int>> {
        self.simple
            .iter()
            .map(|&i| self.simple.iter().map(|&j| dot(&self.coroots[i], &self.roots[j])).collect())
            .collect()
    }

    /// Irreducible components as sets of positions in `simple_indices`.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let c = self.cartan_matrix();
        let r = c.len();
        let mut seen = vec![false; r];
        let mut out = Vec::new();
        for s in 0..r {
            if seen[s] {
                continue;
            }
            let mut comp = vec![];
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(a) = queue.pop_front() {
                comp.push(a);
                for b in 0..r {
                    if !seen[b] && !c[a][b].is_zero() {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Component (index into [`Self::components`]) containing root `i`.
    pub fn component_of_root(&self, i: usize) -> Option<usize> {
        let comps = self.components();
        let k = self.simple_coeffs[i].iter().position(|x| !x.is_zero())?;
        comps.iter().position(|c| c.contains(&k))
    }

    pub fn describe(&self) -> String {
        if self.name.is_empty() {
            format!("root datum of rank {} with {} roots", self.rank, self.roots.len())
        } else {
            self.name.clone()
        }
    }
}

/// Checks every root-datum axiom and lists what fails.
pub fn validate_root_datum(rd: &RootDatum) -> Result<(), Vec<Violation>> {
    let mut bad = Vec::new();
    let rootset: BTreeSet<&Vec<Int>> = rd.roots.iter().collect();
    let corootset: BTreeSet<&Vec<Int>> = rd.coroots.iter().collect();
    if rootset.len() != rd.roots.len() || corootset.len() != rd.coroots.len() {
        bad.push(Violation("repeated roots or coroots".into()));
    }
    for i in 0..rd.num_roots() {
        let p = dot(&rd.coroots[i], &rd.roots[i]);
        if p != int(2) {
            bad.push(Violation(format!("<coroot {i}, root {i}> = {p} != 2")));
            continue;
        }
        let doubled: Vec<Int> = rd.roots[i].iter().map(|x| x * 2).collect();
        if rootset.contains(&doubled) {
            bad.push(Violation(format!("root {i} has a multiple that is a root (non-reduced)")));
        }
        for j in 0..rd.num_roots() {
            let k = dot(&rd.coroots[i], &rd.roots[j]);
            let sr: Vec<Int> = rd.roots[j].iter().zip(&rd.roots[i]).map(|(b, a)| b - k.clone() * a).collect();
            let l = dot(&rd.coroots[j], &rd.roots[i]);
            let sc: Vec<Int> = rd.coroots[j].iter().zip(&rd.coroots[i]).map(|(b, a)| b - l.clone() * a).collect();
            match (rd.root_index(&sr), rd.coroot_index(&sc)) {
                (Some(a), Some(b)) if a == b => {}
                (Some(_), Some(_)) => bad.push(Violation(format!(
                    "reflection {i} breaks the root/coroot bijection at {j}"
                ))),
                _ => bad.push(Violation(format!("reflection {i} does not permute the roots/coroots ({j})"))),
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// Swaps roots with coroots and `X^*` with `X_*`.
pub fn langlands_dual(rd: &RootDatum) -> RootDatum {
    RootDatum {
        rank: rd.rank,
        roots: rd.coroots.clone(),
        coroots: rd.roots.clone(),
        simple: rd.simple.clone(),
        simple_coeffs: dual_coefficients(rd),
        ambient: rd.ambient.as_ref().and_then(|a| a.inverse()).map(|a| a.transpose()),
        name: if rd.name.is_empty() { String::new() } else { format!("dual({})", rd.name) },
    }
}

fn dual_coefficients(rd: &RootDatum) -> Vec<Vec<Int>> {
    let base: Vec<Vec<Rat>> = rd.simple.iter().map(|&s| to_rat_vec(&rd.coroots[s])).collect();
    let bmat = RatMatrix::from_cols(&base, rd.rank).expect("shape");
    rd.coroots
        .iter()
        .map(|c| to_int_vec(&bmat.solve(&to_rat_vec(c)).expect("coroot in span")).expect("integral coroot"))
        .collect()
}

/// The finite Weyl group as integer matrices on `X_*`.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<IntMatrix>,
    lengths: Vec<usize>,
    index: HashMap<IntMatrix, usize>,
    // action on X^*: (w^{-1})^T
    dual: Vec<IntMatrix>,
    inverse: Vec<usize>,
    // coroot permutation: perm[w][i] = index of w(coroot i)
    perm: Vec<Vec<usize>>,
}

impl WeylGroup {
    pub fn new(rd: &RootDatum) -> Result<Self, RootDataError> {
        let limit = max_group_size();
        let n = rd.rank();
        let gens: Vec<IntMatrix> = rd.simple_indices().iter().map(|&i| rd.reflection(i)).collect();
        let id = IntMatrix::identity(n);
        let mut elements = vec![id.clone()];
        let mut lengths = vec![0];
        let mut index = HashMap::from([(id, 0)]);
        let mut k = 0;
        while k < elements.len() {
            for g in &gens {
                let m = elements[k].mul(g);
                if !index.contains_key(&m) {
                    if elements.len() >= limit {
                        return Err(RootDataError::GroupTooLarge(limit));
                    }
                    index.insert(m.clone(), elements.len());
                    lengths.push(lengths[k] + 1);
                    elements.push(m);
                }
            }
            k += 1;
        }
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| lengths[a].cmp(&lengths[b]).then(elements[a].cmp(&elements[b])));
        let elements: Vec<IntMatrix> = order.iter().map(|&i| elements[i].clone()).collect();
        let lengths: Vec<usize> = order.iter().map(|&i| lengths[i]).collect();
        let index: HashMap<IntMatrix, usize> = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let inverse: Vec<usize> = elements
            .iter()
            .map(|w| {
                let inv = w.unimodular_inverse().expect("Weyl elements are invertible");
                index[&inv]
            })
            .collect();
        let dual = inverse.iter().map(|&j| elements[j].transpose()).collect();
        let lookup: HashMap<&Vec<Int>, usize> = rd.coroots().iter().enumerate().map(|(i, c)| (c, i)).collect();
        let perm = elements
            .iter()
            .map(|w| rd.coroots().iter().map(|c| lookup[&w.mul_vec(c)]).collect())
            .collect();
        Ok(WeylGroup { elements, lengths, index, dual, inverse, perm })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn position(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    /// Action of element `i` on `X^*`.
    pub fn dual_action(&self, i: usize) -> &IntMatrix {
        &self.dual[i]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].mul(&self.elements[b])]
    }

    /// Index of `w(coroot i)`.
    pub fn act_on_coroot(&self, w: usize, i: usize) -> usize {
        self.perm[w][i]
    }

    pub fn longest(&self) -> usize {
        (0..self.len()).max_by_key(|&i| self.lengths[i]).unwrap_or(0)
    }
}

/// The full finite Weyl group, ordered by length and then matrix entries.
pub fn weyl_elements(rd: &RootDatum) -> Result<Vec<IntMatrix>, RootDataError> {
    Ok(WeylGroup::new(rd)?.elements)
}

/// Named families of root data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    SL(usize),
    GL(usize),
    PGL(usize),
    Sp(usize),
    PSp(usize),
    SOOdd(usize),
    SpinOdd(usize),
    SOEven(usize),
    G2,
    Torus(usize),
    Product(Vec<Preset>),
}

impl Preset {
    /// Parses a preset name with its size parameter (ignored for `G2`).
    pub fn from_name(name: &str, n: usize) -> Result<Self, RootDataError> {
        Ok(match name {
            "SL" => Preset::SL(n),
            "GL" => Preset::GL(n),
            "PGL" => Preset::PGL(n),
            "Sp" => Preset::Sp(n),
            "PSp" => Preset::PSp(n),
            "SO_odd" => Preset::SOOdd(n),
            "Spin_odd" => Preset::SpinOdd(n),
            "SO_even" => Preset::SOEven(n),
            "G2" => Preset::G2,
            "torus" => Preset::Torus(n),
            other => return Err(RootDataError::UnknownPreset(other.to_string())),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Preset::SL(n) => format!("SL{n}"),
            Preset::GL(n) => format!("GL{n}"),
            Preset::PGL(n) => format!("PGL{n}"),
            Preset::Sp(n) => format!("Sp{}", 2 * n),
            Preset::PSp(n) => format!("PSp{}", 2 * n),
            Preset::SOOdd(n) => format!("SO{}", 2 * n + 1),
            Preset::SpinOdd(n) => format!("Spin{}", 2 * n + 1),
            Preset::SOEven(n) => format!("SO{}", 2 * n),
            Preset::G2 => "G2".into(),
            Preset::Torus(n) => format!("T{n}"),
            Preset::Product(f) => f.iter().map(|p| p.label()).join("x"),
        }
    }
}

pub fn preset(p: &Preset) -> Result<RootDatum, RootDataError> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(RootDataError::InvalidParams(format!("{}: {what}", p.label())))
        }
    };
    let rd = match *p {
        Preset::SL(n) => {
            need(n >= 2, "n must be at least 2")?;
            from_cartan(&cartan_a(n - 1), true)
        }
        Preset::PGL(n) => {
            need(n >= 2, "n must be at least 2")?;
            from_cartan(&cartan_a(n - 1), false)
        }
        Preset::GL(n) => {
            need(n >= 1, "n must be at least 1")?;
            classical(Family::A, n, IntMatrix::identity(n).to_rat())
        }
        Preset::Sp(n) => {
            need(n >= 1, "n must be at least 1")?;
            classical(Family::C, n, RatMatrix::identity(n))
        }
        Preset::PSp(n) => {
            need(n >= 1, "n must be at least 1")?;
            // fundamental coweights e_1 + ... + e_i, and (e_1 + ... + e_n)/2
            let b = RatMatrix::from_fn(n, n, |i, j| {
                if i > j {
                    Rat::zero()
                } else if j == n - 1 {
                    Rat::new(int(1), int(2))
                } else {
                    Rat::one()
                }
            });
            classical(Family::C, n, b)
        }
        Preset::SOOdd(n) => {
            need(n >= 1, "n must be at least 1")?;
            classical(Family::B, n, RatMatrix::identity(n))
        }
        Preset::SpinOdd(n) => {
            need(n >= 1, "n must be at least 1")?;
            // simple coroots e_i - e_{i+1} and 2 e_n
            let b = RatMatrix::from_fn(n, n, |i, j| {
                if j == n - 1 {
                    if i == n - 1 {
                        Rat::from_integer(int(2))
                    } else {
                        Rat::zero()
                    }
                } else if i == j {
                    Rat::one()
                } else if i == j + 1 {
                    -Rat::one()
                } else {
                    Rat::zero()
                }
            });
            classical(Family::B, n, b)
        }
        Preset::SOEven(n) => {
            need(n >= 2, "n must be at least 2")?;
            classical(Family::D, n, RatMatrix::identity(n))
        }
        Preset::G2 => from_cartan(&[vec![2, -1], vec![-3, 2]], true),
        Preset::Torus(n) => Ok(RootDatum::torus(n)),
        Preset::Product(ref fs) => {
            need(!fs.is_empty(), "empty product")?;
            let mut acc: Option<RootDatum> = None;
            for f in fs {
                let d = preset(f)?;
                acc = Some(match acc {
                    None => d,
                    Some(a) => product(&a, &d),
                });
            }
            Ok(acc.expect("nonempty"))
        }
    }?;
    Ok(rd.with_name(p.label()))
}

/// Convenience wrapper over [`Preset::from_name`] and [`preset`].
pub fn preset_by_name(name: &str, n: usize) -> Result<RootDatum, RootDataError> {
    preset(&Preset::from_name(name, n)?)
}

/// Direct product of two root data.
pub fn product(a: &RootDatum, b: &RootDatum) -> RootDatum {
    let (na, nb) = (a.rank, b.rank);
    let pad = |v: &[Int], left: bool| -> Vec<Int> {
        let mut out = vec![Int::zero(); na + nb];
        let off = if left { 0 } else { na };
        for (k, x) in v.iter().enumerate() {
            out[off + k] = x.clone();
        }
        out
    };
    let roots = a.roots.iter().map(|r| pad(r, true)).chain(b.roots.iter().map(|r| pad(r, false))).collect();
    let coroots = a.coroots.iter().map(|r| pad(r, true)).chain(b.coroots.iter().map(|r| pad(r, false))).collect();
    let simple = a.simple.iter().copied().chain(b.simple.iter().map(|s| s + a.num_roots())).collect();
    let mut rd = RootDatum::new(na + nb, roots, coroots, simple).expect("product of valid data");
    if let (Some(x), Some(y)) = (&a.ambient, &b.ambient) {
        rd.ambient = Some(RatMatrix::direct_sum(x, y));
    }
    rd
}

fn cartan_a(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
        .collect()
}

/// Builds the simply connected (`sc`) or adjoint datum of a Cartan matrix
/// `A[i][j] = <alpha_i^vee, alpha_j>`.
pub fn from_cartan(a: &[Vec<i64>], sc: bool) -> Result<RootDatum, RootDataError> {
    let r = a.len();
    let (sroots, scoroots): (Vec<Vec<Int>>, Vec<Vec<Int>>) = if sc {
        (
            (0..r).map(|j| (0..r).map(|i| int(a[i][j])).collect()).collect(),
            (0..r).map(|i| (0..r).map(|k| int((i == k) as i64)).collect()).collect(),
        )
    } else {
        (
            (0..r).map(|j| (0..r).map(|k| int((j == k) as i64)).collect()).collect(),
            (0..r).map(|i| (0..r).map(|k| int(a[i][k])).collect()).collect(),
        )
    };
    let (roots, coroots) = close_under_reflections(&sroots, &scoroots, 10_000)?;
    let simple = (0..r).map(|i| roots.iter().position(|x| *x == sroots[i]).unwrap()).collect();
    RootDatum::new(r, roots, coroots, simple)
}

fn close_under_reflections(
    sroots: &[Vec<Int>],
    scoroots: &[Vec<Int>],
    limit: usize,
) -> Result<(Vec<Vec<Int>>, Vec<Vec<Int>>), RootDataError> {
    let mut roots: Vec<Vec<Int>> = sroots.to_vec();
    let mut coroots: Vec<Vec<Int>> = scoroots.to_vec();
    let mut seen: BTreeSet<Vec<Int>> = roots.iter().cloned().collect();
    let mut k = 0;
    while k < roots.len() {
        for s in 0..sroots.len() {
            let c = dot(&scoroots[s], &roots[k]);
            let nr: Vec<Int> = roots[k].iter().zip(&sroots[s]).map(|(x, a)| x - c.clone() * a).collect();
            let d = dot(&coroots[k], &sroots[s]);
            let nc: Vec<Int> = coroots[k].iter().zip(&scoroots[s]).map(|(x, a)| x - d.clone() * a).collect();
            if seen.insert(nr.clone()) {
                if roots.len() >= limit {
                    return Err(RootDataError::GroupTooLarge(limit));
                }
                roots.push(nr);
                coroots.push(nc);
            }
        }
        k += 1;
    }
    Ok((roots, coroots))
}

#[derive(Clone, Copy)]
enum Family {
    A,
    B,
    C,
    D,
}

/// Classical root system in the ambient coordinates `L_i` / `e_i`, placed on
/// the cocharacter lattice whose basis is given by the columns of `b`.
fn classical(f: Family, n: usize, b: RatMatrix) -> Result<RootDatum, RootDataError> {
    let e = |i: usize| -> Vec<Rat> { (0..n).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect() };
    let comb = |i: usize, si: i64, j: usize, sj: i64| -> Vec<Rat> {
        (0..n)
            .map(|k| {
                let mut v = Rat::zero();
                if k == i {
                    v += Rat::from_integer(int(si));
                }
                if k == j {
                    v += Rat::from_integer(int(sj));
                }
                v
            })
            .collect()
    };
    let scale = |v: Vec<Rat>, s: i64| -> Vec<Rat> { v.into_iter().map(|x| x * Rat::from_integer(int(s))).collect() };
    // pairs (root in L-coordinates, coroot in e-coordinates), with simple flag
    let mut pairs: Vec<(Vec<Rat>, Vec<Rat>, bool)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if matches!(f, Family::A) {
                pairs.push((comb(i, 1, j, -1), comb(i, 1, j, -1), j == i + 1));
                pairs.push((comb(i, -1, j, 1), comb(i, -1, j, 1), false));
                continue;
            }
            for (si, sj) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
                let simple = si == 1 && sj == -1 && j == i + 1
                    || matches!(f, Family::D) && si == 1 && sj == 1 && i + 2 == n && j + 1 == n;
                pairs.push((comb(i, si, j, sj), comb(i, si, j, sj), simple));
            }
        }
        let last = i + 1 == n;
        for s in [1, -1] {
            match f {
                Family::B => pairs.push((scale(e(i), s), scale(e(i), 2 * s), last && s == 1)),
                Family::C => pairs.push((scale(e(i), 2 * s), scale(e(i), s), last && s == 1)),
                _ => {}
            }
        }
    }
    let binv = b.inverse().ok_or_else(|| RootDataError::InvalidParams("singular lattice basis".into()))?;
    let bt = b.transpose();
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    let mut simple = Vec::new();
    for (r, c, s) in pairs {
        let rv = to_int_vec(&bt.mul_vec(&r));
        let cv = to_int_vec(&binv.mul_vec(&c));
        match (rv, cv) {
            (Some(rv), Some(cv)) => {
                if s {
                    simple.push(roots.len());
                }
                roots.push(rv);
                coroots.push(cv);
            }
            _ => return Err(RootDataError::InvalidParams("lattice does not contain the coroots".into())),
        }
    }
    Ok(RootDatum::new(n, roots, coroots, simple)?.with_ambient(b))
}

/// Isomorphism invariant of a root datum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub rank: usize,
    pub semisimple_rank: usize,
    pub cartan: Vec<Vec<Int>>,
    pub lattice: Vec<Vec<Int>>,
}

/// Canonical form for isomorphism testing.
///
/// The cocharacter lattice is embedded in `Z^r` (or `Z^{r+1}`) through its
/// pairings with the simple roots, plus a primitive functional vanishing on
/// the coroots when the radical has rank one. The invariant is the
/// lexicographically least pair (Cartan matrix, Hermite basis of the image)
/// over all relabelings of the simple roots and signs of that functional.
pub fn canonical_form(rd: &RootDatum) -> Result<CanonicalForm, RootDataError> {
    let n = rd.rank();
    let r = rd.semisimple_rank();
    if r == 0 {
        return Ok(CanonicalForm { rank: n, semisimple_rank: 0, cartan: vec![], lattice: vec![] });
    }
    let m = n - r;
    let coroot_mat = IntMatrix::from_rows(
        &rd.simple_indices().iter().map(|&i| rd.coroot(i).to_vec()).collect::<Vec<_>>(),
        n,
    )
    .expect("shape");
    // functionals on X_* vanishing on every coroot
    let radical_dual = integer_kernel(&coroot_mat);
    let (base_rows, extra): (Vec<Vec<Int>>, Vec<Vec<Int>>) = match m {
        0 => ((0..n).map(|k| unit(n, k)).collect(), vec![]),
        1 => ((0..n).map(|k| unit(n, k)).collect(), vec![primitive(&radical_dual[0])]),
        _ => {
            // split case: X_* = (X_* ∩ coroot span) ⊕ (common kernel of the roots)
            let root_mat = IntMatrix::from_rows(
                &rd.simple_indices().iter().map(|&i| rd.root(i).to_vec()).collect::<Vec<_>>(),
                n,
            )
            .expect("shape");
            let center = integer_kernel(&root_mat);
            let rad = IntMatrix::from_rows(&radical_dual, n).expect("shape");
            let ss = integer_kernel(&rad);
            let mut all = ss.clone();
            all.extend(center);
            let idx = crate::exact::lattice_index(&lattice_basis(&all, n), n);
            if idx.map_or(true, |i| !i.is_one()) {
                return Err(RootDataError::CanonicalFormUnsupported(format!(
                    "radical of rank {m} that does not split off"
                )));
            }
            (ss, vec![])
        }
    };
    let signs: Vec<i64> = if extra.is_empty() { vec![1] } else { vec![1, -1] };
    let cartan = rd.cartan_matrix();
    let mut best: Option<CanonicalForm> = None;
    for perm in (0..r).permutations(r) {
        let c: Vec<Vec<Int>> = perm.iter().map(|&i| perm.iter().map(|&j| cartan[i][j].clone()).collect()).collect();
        if let Some(b) = &best {
            if c > b.cartan {
                continue;
            }
        }
        for &sg in &signs {
            let rows: Vec<Vec<Int>> = base_rows
                .iter()
                .map(|v| {
                    let mut row: Vec<Int> =
                        perm.iter().map(|&i| dot(v, rd.root(rd.simple_indices()[i]))).collect();
                    for f in &extra {
                        row.push(dot(v, f) * int(sg));
                    }
                    row
                })
                .collect();
            let width = r + extra.len();
            let h = hermite(&IntMatrix::from_rows(&rows, width).expect("shape"));
            let lattice = (0..h.rank).map(|i| h.h.row(i).to_vec()).collect();
            let cand = CanonicalForm { rank: n, semisimple_rank: r, cartan: c.clone(), lattice };
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("at least one permutation"))
}

pub fn isomorphic(a: &RootDatum, b: &RootDatum) -> Result<bool, RootDataError> {
    Ok(canonical_form(a)? == canonical_form(b)?)
}

fn unit(n: usize, k: usize) -> Vec<Int> {
    (0..n).map(|i| int((i == k) as i64)).collect()
}

fn primitive(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |a, x| num_integer::Integer::gcd(&a, x));
    let mut out: Vec<Int> = v.iter().map(|x| x / &g).collect();
    if let Some(f) = out.iter().find(|x| !x.is_zero()) {
        if f.is_negative() {
            out = out.iter().map(|x| -x).collect();
        }
    }
    out
}

/// Expresses a rational vector of `X^* ⊗ Q` in the ambient `L`-coordinates.
pub fn to_ambient_weight(rd: &RootDatum, v: &[Rat]) -> Option<Vec<Rat>> {
    let b = rd.ambient()?;
    Some(b.inverse()?.transpose().mul_vec(v))
}

/// Expresses an `X_*` vector in the ambient `e`-coordinates.
pub fn to_ambient_coweight(rd: &RootDatum, v: &[Int]) -> Option<Vec<Rat>> {
    let b = rd.ambient()?;
    Some(b.mul_vec(&to_rat_vec(v)))
}

/// Small helper used by tests and presets: `i64` view of a small integer.
pub fn small(x: &Int) -> i64 {
    x.to_i64().expect("value fits in i64")
}

/// `<coweight, weight>` pairing with a rational weight.
pub fn pair_rat(cow: &[Int], w: &[Rat]) -> Rat {
    cow.iter().zip(w).map(|(a, b)| rat_of(a) * b).sum()
}
