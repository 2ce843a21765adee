//! The metaplectic endoscopic group `H` and its dual `H^∨`.
//!
//! For a central character `c`, `X_*(A_H)` consists of the cocharacters
//! stabilizing `c`, i.e. those `λ` with `c·S(λ, μ) ∈ Z` for all `μ`. Coroots
//! of `H` are `N_α α` where `N_α` is the least positive `n` making `(α, n)`
//! integral for `(c, 0)`, and roots are `α / N_α`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::affine::{AffineCoroot, AffineWeyl, ExtendedWeylElement, GramForm, Progression};
use crate::exact::{
    dot, lattice_index, rat_of, solve_integer_affine, to_int_vec, to_rat_vec, Int, IntMatrix, QmodZ, Rat,
    RatMatrix,
};
use crate::integral::{Character, Twisting};
use crate::rootdata::{langlands_dual, validate_root_datum, RootDataError, RootDatum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaplecticError {
    #[error("endoscopic data failed validation: {0}")]
    ValidationFailed(String),
    #[error("no common frame: {0}")]
    NoCommonFrame(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

/// `{λ : c·S(λ, ·) integral}` as a Hermite basis of `X_*`.
pub fn endoscopic_lattice(form: &GramForm, c: &QmodZ) -> Vec<Vec<Int>> {
    let n = form.matrix().rows();
    let k = form.matrix().to_rat().scale(&c.lift());
    let mut a = IntMatrix::zeros(n, n);
    let mut moduli = Vec::with_capacity(n);
    for i in 0..n {
        let l = (0..n).fold(Int::one(), |acc, j| num_integer::lcm(acc, k[(i, j)].denom().clone()));
        for j in 0..n {
            a[(i, j)] = (k[(i, j)].clone() * rat_of(&l)).to_integer();
        }
        moduli.push(rat_of(&l));
    }
    let sol = solve_integer_affine(&a, &vec![Rat::zero(); n], &moduli)
        .expect("sizes agree")
        .expect("zero is a solution");
    sol.basis
}

/// `N_α`: the modulus of the integral progression of `(c, 0)` on coroot `i`.
pub fn rescale_factor(aw: &AffineWeyl, form: &GramForm, c: &QmodZ, i: usize) -> Int {
    let t = Twisting::from_central(aw.clone(), form, c);
    match t.progression(&Character::trivial(aw.rank()), i) {
        Progression::Arith { modulus, .. } => modulus,
        p => unreachable!("trivial finite part always gives a progression through 0, got {p:?}"),
    }
}

#[derive(Clone, Debug)]
pub struct EndoscopicData {
    /// Basis of `X_*(A_H)` inside `X_*`, as rows.
    pub lattice: Vec<Vec<Int>>,
    pub index: Int,
    /// `N_α` per coroot of `G`.
    pub rescale: Vec<Int>,
    pub rd_h: RootDatum,
    pub rd_hdual: RootDatum,
    /// Index in `rd_h` of the rescaled root `i` of `G`.
    pub root_map: Vec<usize>,
}

impl EndoscopicData {
    /// Columns are the basis of `X_*(A_H)`.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(&self.lattice, self.rd_h.rank()).expect("shape")
    }
}

pub fn endoscopic_root_datum(aw: &AffineWeyl, form: &GramForm, c: &QmodZ) -> Result<EndoscopicData, MetaplecticError> {
    let rd = aw.rd();
    let n = rd.rank();
    let lattice = endoscopic_lattice(form, c);
    let index = lattice_index(&lattice, n)
        .ok_or_else(|| MetaplecticError::ValidationFailed("X_*(A_H) is not of finite index".into()))?;
    let b = IntMatrix::from_cols(&lattice, n).expect("shape").to_rat();
    let binv = b.inverse().expect("full rank");
    let bt = b.transpose();
    let rescale: Vec<Int> = (0..rd.num_roots()).map(|i| rescale_factor(aw, form, c, i)).collect();
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for i in 0..rd.num_roots() {
        let nr = rat_of(&rescale[i]);
        let cv: Vec<Rat> = to_rat_vec(rd.coroot(i)).iter().map(|x| x * nr.clone()).collect();
        let rv: Vec<Rat> = to_rat_vec(rd.root(i)).iter().map(|x| x / nr.clone()).collect();
        let cv = to_int_vec(&binv.mul_vec(&cv))
            .ok_or_else(|| MetaplecticError::ValidationFailed(format!("rescaled coroot {i} is not in X_*(A_H)")))?;
        let rv = to_int_vec(&bt.mul_vec(&rv))
            .ok_or_else(|| MetaplecticError::ValidationFailed(format!("rescaled root {i} is not in X^*(A_H)")))?;
        coroots.push(cv);
        roots.push(rv);
    }
    let rd_h = RootDatum::new(n, roots, coroots.clone(), rd.simple_indices().to_vec())
        .map_err(|e| MetaplecticError::ValidationFailed(e.to_string()))?
        .with_name(format!("H({})", rd.describe()));
    validate_root_datum(&rd_h).map_err(|v| {
        MetaplecticError::ValidationFailed(v.iter().map(|x| x.0.clone()).collect::<Vec<_>>().join("; "))
    })?;
    let rd_hdual = langlands_dual(&rd_h);
    let root_map = coroots
        .iter()
        .map(|c| (0..rd_h.num_roots()).find(|&j| rd_h.coroot(j) == c.as_slice()).expect("same root set"))
        .collect();
    Ok(EndoscopicData { lattice, index, rescale, rd_h, rd_hdual, root_map })
}

/// Affine map `x ↦ w x + B λ` on `X_* ⊗ Q`, constant coordinate first.
pub fn affine_matrix(g: &ExtendedWeylElement, basis: &RatMatrix) -> RatMatrix {
    let n = g.rank();
    let binv = basis.inverse().expect("basis is invertible");
    let w = basis.mul(&g.w().to_rat()).mul(&binv);
    let t = basis.mul_vec(&to_rat_vec(g.trans()));
    RatMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => Rat::one(),
        (0, _) => Rat::zero(),
        (i, 0) => t[i - 1].clone(),
        (i, j) => w[(i - 1, j - 1)].clone(),
    })
}

fn translation_matrix(mu: &[Rat]) -> RatMatrix {
    let n = mu.len();
    RatMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (i, j) if i == j => Rat::one(),
        (i, 0) => mu[i - 1].clone(),
        _ => Rat::zero(),
    })
}

/// Outcome of comparing the integral groups of `G` at `χ` and of `H` at `χ_f`.
#[derive(Clone, Debug)]
pub struct BulletReport {
    pub data: EndoscopicData,
    /// Coroot directions with a nonempty progression.
    pub integral_directions: Vec<usize>,
    pub mu: Vec<Rat>,
    /// Every `τ^μ s_{α, i + jd} τ^{-μ}` equals `s_{α_H, j}`.
    pub generators_match: bool,
    /// `τ^μ S_χ τ^{-μ}` is the simple system of `H` at `χ_f`.
    pub simples_match: bool,
    pub lattice_equal: bool,
    pub bullet_full_g: bool,
    pub bullet_full_h: bool,
    /// Weyl group elements (by index) in the image of the stabilizer on each side.
    pub image_g: Vec<usize>,
    pub image_h: Vec<usize>,
}

fn reflection_closure(aw: &AffineWeyl, dirs: &[usize]) -> Vec<usize> {
    let weyl = aw.weyl();
    let mut set = vec![0usize];
    let gens: Vec<usize> = dirs
        .iter()
        .map(|&i| weyl.position(&aw.rd().reflection(i)).expect("reflection"))
        .collect();
    let mut k = 0;
    while k < set.len() {
        for &g in &gens {
            let p = weyl.product(set[k], g);
            if !set.contains(&p) {
                set.push(p);
            }
        }
        k += 1;
    }
    set.sort();
    set
}

pub fn bullet_weyl_compare(
    aw: &AffineWeyl,
    form: &GramForm,
    c: &QmodZ,
    chi: &Character,
) -> Result<BulletReport, MetaplecticError> {
    let rd = aw.rd();
    let n = rd.rank();
    if chi.0.len() != n {
        return Err(MetaplecticError::NoCommonFrame(format!("character has length {}, expected {n}", chi.0.len())));
    }
    let data = endoscopic_root_datum(aw, form, c)?;
    let tw = Twisting::from_central(aw.clone(), form, c);
    let fam = tw.family(chi);
    let dirs: Vec<usize> = (0..rd.num_roots()).filter(|&i| !fam.progressions[i].is_empty()).collect();

    // μ from the simple roots of the integral finite root system
    let pos_dirs: Vec<usize> = dirs.iter().copied().filter(|&i| rd.is_positive(i)).collect();
    let simple_dirs: Vec<usize> = pos_dirs
        .iter()
        .copied()
        .filter(|&i| {
            !pos_dirs.iter().any(|&j| {
                pos_dirs.iter().any(|&k| j != i && k != i && crate::exact::vadd(rd.coroot(j), rd.coroot(k)) == rd.coroot(i))
            })
        })
        .collect();
    let residue = |i: usize| match &fam.progressions[i] {
        Progression::Arith { residue, .. } => residue.clone(),
        _ => Int::zero(),
    };
    let mu = if simple_dirs.is_empty() {
        vec![Rat::zero(); n]
    } else {
        let rows: Vec<Vec<Rat>> = simple_dirs.iter().map(|&i| to_rat_vec(rd.root(i))).collect();
        let m = RatMatrix::from_rows(&rows, n).expect("shape");
        let rhs: Vec<Rat> = simple_dirs.iter().map(|&i| -rat_of(&residue(i))).collect();
        m.solve(&rhs).ok_or_else(|| MetaplecticError::NoCommonFrame("no μ solves the simple constraints".into()))?
    };

    let basis_g = RatMatrix::identity(n);
    let basis_h = data.basis_matrix().to_rat();
    let tau = translation_matrix(&mu);
    let tau_inv = translation_matrix(&mu.iter().map(|x| -x.clone()).collect::<Vec<_>>());
    let aw_h = AffineWeyl::new(data.rd_h.clone()).map_err(|e| MetaplecticError::ValidationFailed(e.to_string()))?;
    let conj = |g: &ExtendedWeylElement| tau.mul(&affine_matrix(g, &basis_g)).mul(&tau_inv);

    let mut generators_match = true;
    for &i in &dirs {
        let Progression::Arith { residue, modulus } = &fam.progressions[i] else {
            generators_match = false;
            continue;
        };
        let shift = residue.clone() + (dot(&to_rat_vec(rd.root(i)), &mu)).to_integer();
        if !(rat_of(residue) + dot(&to_rat_vec(rd.root(i)), &mu)).is_integer() || !(shift.clone() % modulus).is_zero() {
            generators_match = false;
            continue;
        }
        let off = shift / modulus.clone();
        for j in -2i64..=2 {
            let ng = residue.clone() + Int::from(j) * modulus.clone();
            let g = aw.reflection(&AffineCoroot { root: i, n: ng });
            let h = aw_h.reflection(&AffineCoroot { root: data.root_map[i], n: Int::from(j) + off.clone() });
            if conj(&g) != affine_matrix(&h, &basis_h) {
                generators_match = false;
            }
        }
    }

    // H side: untwisted, character χ_f restricted to X_*(A_H)
    let theta_h = Character::from_rats(&basis_h.transpose().mul_vec(&chi.lift()));
    let tw_h = Twisting::new(aw_h.clone(), RatMatrix::zeros(n, n), vec![]).expect("size");
    let simples_g: Vec<RatMatrix> = tw.simples(chi).iter().map(|b| conj(&aw.reflection(b))).collect();
    let simples_h: Vec<RatMatrix> =
        tw_h.simples(&theta_h).iter().map(|b| affine_matrix(&aw_h.reflection(b), &basis_h)).collect();
    let simples_match = simples_g.len() == simples_h.len() && simples_g.iter().all(|m| simples_h.contains(m));

    let stab_g = tw.stabilizer(chi);
    let stab_h = tw_h.stabilizer(&theta_h);
    let lat_g = stab_g[0].as_ref().map(|c| c.basis.clone()).unwrap_or_default();
    let lat_h: Vec<Vec<Int>> = stab_h[0]
        .as_ref()
        .map(|c| {
            let v: Vec<Vec<Int>> = c.basis.iter().map(|y| data.basis_matrix().mul_vec(y)).collect();
            crate::exact::lattice_basis(&v, n)
        })
        .unwrap_or_default();
    let lattice_equal = lat_g == lat_h;

    // Weyl groups of G and H agree as matrices on X_* ⊗ Q; compare in G coordinates
    let binv = basis_h.inverse().expect("invertible");
    let image_g: Vec<usize> = (0..aw.weyl().len()).filter(|&w| stab_g[w].is_some()).collect();
    let image_h: Vec<usize> = (0..aw_h.weyl().len())
        .filter(|&w| stab_h[w].is_some())
        .map(|w| {
            let m = basis_h.mul(&aw_h.weyl().element(w).to_rat()).mul(&binv);
            aw.weyl().position(&m.to_int().expect("integral")).expect("same Weyl group")
        })
        .collect();
    let mut image_h = image_h;
    image_h.sort();
    let refl_g = reflection_closure(aw, &dirs);
    let bullet_full_g = image_g == refl_g;
    let bullet_full_h = image_h == refl_g;

    Ok(BulletReport {
        data,
        integral_directions: dirs,
        mu,
        generators_match,
        simples_match,
        lattice_equal,
        bullet_full_g,
        bullet_full_h,
        image_g,
        image_h,
    })
}
