//! Level duality: integral Weyl groups of `G` at level `κ` and of the dual
//! group at level `−κ̌`, and the isomorphism between them.
//!
//! With `κ̌ = κ⁻¹` and `θ̌ = κ̌(θ)`, the affine map
//! `ι(𝟏* + x) = 𝟏* + θ̌ − κ̌(x)` conjugates `t^λ w` (acting by
//! `x ↦ w x − κ(λ)`) into `t^{θ − wθ + κ(λ)} w` on the dual side. A final
//! conjugation by an element `y` of the dual neutral block lines up the
//! fundamental alcoves.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::affine::{AffineCoroot, AffineError, AffineWeyl, CorootFamily, ExtendedWeylElement, Order};
use crate::exact::{dot, int, rat_of, to_int_vec, to_rat_vec, vadd, vsub, Int, Rat, RatMatrix};
use crate::integral::{finite_longest_group, Character, IntegralError, Twisting};
use crate::rootdata::{langlands_dual, RootDataError, RootDatum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("level is degenerate")]
    Degenerate,
    #[error("level is not symmetric")]
    NotSymmetric,
    #[error("level is not Weyl invariant")]
    NotWInvariant,
    #[error("irrational blocks must be mutually orthogonal and complementary")]
    BadBlocks,
    #[error("κ(α, α) is irrational on coroot {0}")]
    IrrationalSquareLength(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("no alcove: {0}")]
    NoAlcove(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

/// `κ = rational + Σ ξ_i irrational_i` with independent irrationals `ξ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub rational: RatMatrix,
    pub irrational: Vec<RatMatrix>,
}

impl Level {
    pub fn rational(k: RatMatrix) -> Self {
        Level { rational: k, irrational: vec![] }
    }

    /// The value at `ξ_i = 1`.
    fn total(&self) -> RatMatrix {
        self.irrational.iter().fold(self.rational.clone(), |a, m| a.add(m))
    }

    pub fn validate(&self, aw: &AffineWeyl) -> Result<(), DualityError> {
        let rd = aw.rd();
        for m in std::iter::once(&self.rational).chain(&self.irrational) {
            if !m.is_symmetric() {
                return Err(DualityError::NotSymmetric);
            }
            for &i in rd.simple_indices() {
                let s = rd.reflection(i).to_rat();
                if &s.transpose().mul(m).mul(&s) != m {
                    return Err(DualityError::NotWInvariant);
                }
            }
        }
        let total = self.total();
        let inv = total.inverse().ok_or(DualityError::Degenerate)?;
        let blocks: Vec<&RatMatrix> = std::iter::once(&self.rational).chain(&self.irrational).collect();
        for (a, x) in blocks.iter().enumerate() {
            for (b, y) in blocks.iter().enumerate() {
                let p = x.mul(&inv).mul(y);
                let expect = if a == b { (*x).clone() } else { RatMatrix::zeros(x.rows(), x.cols()) };
                if p != expect {
                    return Err(DualityError::BadBlocks);
                }
            }
        }
        Ok(())
    }

    /// Blockwise inverse: `M⁻¹ L M⁻¹` for each block, `M` the total.
    pub fn inverse(&self) -> Result<Level, DualityError> {
        let inv = self.total().inverse().ok_or(DualityError::Degenerate)?;
        let f = |m: &RatMatrix| inv.mul(m).mul(&inv);
        Ok(Level { rational: f(&self.rational), irrational: self.irrational.iter().map(f).collect() })
    }

    pub fn neg(&self) -> Level {
        Level { rational: self.rational.neg(), irrational: self.irrational.iter().map(|m| m.neg()).collect() }
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.iter().all(|m| m.is_zero())
    }
}

/// `(rd^∨, κ̌)`.
pub fn dual_level(rd: &RootDatum, level: &Level) -> Result<(RootDatum, Level), DualityError> {
    Ok((langlands_dual(rd), level.inverse()?))
}

/// `G` at `(κ, θ)` together with the dual group at `(−κ̌, θ̌)`.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub level: Level,
    pub dual_level: Level,
    pub g: Twisting,
    pub d: Twisting,
    pub theta: Vec<Rat>,
    pub theta_dual: Vec<Rat>,
}

impl DualPair {
    pub fn new(rd: &RootDatum, level: Level, theta: Vec<Rat>) -> Result<Self, DualityError> {
        let aw = AffineWeyl::new(rd.clone())?;
        level.validate(&aw)?;
        let (rd_d, kd) = dual_level(rd, &level)?;
        let aw_d = AffineWeyl::new(rd_d)?;
        let theta_dual = kd.rational.mul_vec(&theta);
        let dual = kd.neg();
        let g = Twisting::new(aw, level.rational.clone(), level.irrational.clone())?;
        let d = Twisting::new(aw_d, dual.rational.clone(), dual.irrational.clone())?;
        Ok(DualPair { level, dual_level: dual, g, d, theta, theta_dual })
    }

    pub fn chi(&self) -> Character {
        Character::from_rats(&self.theta)
    }

    pub fn chi_dual(&self) -> Character {
        Character::from_rats(&self.theta_dual)
    }

    pub fn rd(&self) -> &RootDatum {
        self.g.aw().rd()
    }

    pub fn rd_dual(&self) -> &RootDatum {
        self.d.aw().rd()
    }

    /// Whether `t^λ w` satisfies `w θ − θ − κ(λ) ∈ X^*`.
    pub fn is_integral(&self, g: &ExtendedWeylElement) -> bool {
        self.g.carries(g, &self.chi(), &self.chi())
    }

    pub fn is_integral_dual(&self, h: &ExtendedWeylElement) -> bool {
        self.d.carries(h, &self.chi_dual(), &self.chi_dual())
    }

    /// `t^λ w ↦ t^{θ − wθ + κ(λ)} w`; `None` off the integral group.
    pub fn phi(&self, g: &ExtendedWeylElement) -> Option<ExtendedWeylElement> {
        if !self.is_integral(g) {
            return None;
        }
        let wt = g.w_dual().to_rat().mul_vec(&self.theta);
        let lam = vadd(&vsub(&self.theta, &wt), &self.level.rational.mul_vec(&to_rat_vec(g.trans())));
        Some(ExtendedWeylElement::new(to_int_vec(&lam)?, g.w_dual().clone()))
    }

    /// Inverse of [`Self::phi`]: `t^μ v ↦ t^{v θ̌ − θ̌ + κ̌ μ} v`.
    pub fn phi_inverse(&self, h: &ExtendedWeylElement) -> Option<ExtendedWeylElement> {
        if !self.is_integral_dual(h) {
            return None;
        }
        let vt = h.w_dual().to_rat().mul_vec(&self.theta_dual);
        let kd = self.dual_level.rational.neg();
        let lam = vadd(&vsub(&vt, &self.theta_dual), &kd.mul_vec(&to_rat_vec(h.trans())));
        Some(ExtendedWeylElement::new(to_int_vec(&lam)?, h.w_dual().clone()))
    }

    /// `(α, n) ↦ (α^∨-side root, ⟨θ, α⟩ + n q)`.
    pub fn phi_coroot(&self, b: &AffineCoroot) -> Option<AffineCoroot> {
        let q = self.g.half_square(b.root)?;
        let m = self.theta_eval(b.root) + rat_of(&b.n) * q.clone();
        m.is_integer().then(|| AffineCoroot { root: b.root, n: m.to_integer() })
    }

    fn theta_eval(&self, i: usize) -> Rat {
        dot(&to_rat_vec(self.rd().coroot(i)), &self.theta)
    }

    /// `ι = [[1, 0], [θ̌, −κ̌]]`, defined for rational levels.
    pub fn iota(&self) -> Option<RatMatrix> {
        if !self.level.is_rational() {
            return None;
        }
        let n = self.g.rank();
        let kd = self.dual_level.rational.neg();
        Some(RatMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
            (0, 0) => Rat::one(),
            (0, _) => Rat::zero(),
            (i, 0) => self.theta_dual[i - 1].clone(),
            (i, j) => -kd[(i - 1, j - 1)].clone(),
        }))
    }

    /// Generators: simple integral reflections, translations of `L`, and
    /// length-zero samples.
    pub fn generators(&self, bound: i64) -> Vec<ExtendedWeylElement> {
        let chi = self.chi();
        let sys = self.g.system(&chi);
        let mut gens = sys.reflections.clone();
        for b in sys.translation_lattice() {
            gens.push(ExtendedWeylElement::translation(b.clone()));
        }
        gens.extend(self.g.omega_elements(&chi, bound));
        gens
    }

    pub fn iota_conjugation(&self, gens: &[ExtendedWeylElement]) -> Result<IotaReport, DualityError> {
        let fail = |s: String| Err(DualityError::VerificationFailed(s));
        let iota = self.iota();
        let iota_inv = iota.as_ref().map(|m| m.inverse().expect("ι is invertible"));
        let kd = self.dual_level.rational.neg();
        let mut images = Vec::new();
        for g in gens {
            let Some(h) = self.phi(g) else { return fail(format!("{g:?} is not integral")) };
            if !self.is_integral_dual(&h) {
                return fail(format!("image of {g:?} is not integral on the dual side"));
            }
            if self.phi_inverse(&h).as_ref() != Some(g) {
                return fail(format!("transport of {g:?} does not invert"));
            }
            if let (Some(i), Some(ii)) = (&iota, &iota_inv) {
                let lhs = i.mul(&g.slice_matrix(&self.level.rational)).mul(ii);
                if lhs != h.slice_matrix(&self.dual_level.rational) {
                    return fail(format!("ι does not conjugate {g:?}"));
                }
            }
            images.push(h);
        }
        // translations of the slice
        if let Some(i) = &iota {
            let n = self.g.rank();
            for k in 0..n {
                let lam: Vec<Rat> = (0..n).map(|j| Rat::from_integer(int((j == k) as i64))).collect();
                let shifted = kd.mul_vec(&lam).iter().map(|x| -x.clone()).collect::<Vec<_>>();
                if i.mul(&slice_translation(&lam)) != slice_translation(&shifted).mul(i) {
                    return fail("ι does not exchange translations".into());
                }
            }
        }
        // reflections go to reflections
        for b in self.g.simples(&self.chi()) {
            let img = self.phi_coroot(&b).ok_or_else(|| DualityError::VerificationFailed("simple coroot not integral".into()))?;
            let r = self.g.aw().reflection(&b);
            if self.phi(&r) != Some(self.d.aw().reflection(&img)) {
                return fail(format!("reflection in {b:?} is not sent to the reflection in {img:?}"));
            }
        }
        Ok(IotaReport { iota, images })
    }

    /// The element `y` of the dual neutral block and the matched data.
    pub fn alcove_match(&self) -> Result<AlcoveMatch, DualityError> {
        let chi = self.chi();
        let chid = self.chi_dual();
        let aw_g = self.g.aw();
        let aw_d = self.d.aw();
        let fam_g = self.g.family(&chi);
        let fam_d = self.d.family(&chid);
        let simples_d = self.d.simples(&chid);
        let y = if let Some(iota) = self.iota() {
            let p = aw_g.base_point(&self.level.rational, &fam_g);
            let mut v = vec![Rat::one()];
            v.extend(p);
            let x = iota.mul_vec(&v)[1..].to_vec();
            self.walk_to_base(x, &fam_d, &simples_d)?
        } else {
            // irrational: the arrangement is the finite one through the origin
            self.walk_by_phi(&fam_g, &fam_d, &simples_d)?
        };
        let yinv = y.inverse();
        let j = |g: &ExtendedWeylElement| self.phi(g).map(|h| y.mul(&h).mul(&yinv));
        let sg = self.g.simples(&chi);
        let mut matched = Vec::new();
        for b in &sg {
            let img = j(&aw_g.reflection(b)).ok_or_else(|| DualityError::VerificationFailed("simple not integral".into()))?;
            let target = simples_d.iter().find(|c| aw_d.reflection(c) == img);
            match target {
                Some(c) => matched.push((b.clone(), c.clone())),
                None => {
                    return Err(DualityError::VerificationFailed(format!(
                        "simple reflection {b:?} is not sent to a simple reflection"
                    )))
                }
            }
        }
        let bijective = matched.len() == simples_d.len();
        let cox = |aw: &AffineWeyl, s: &[AffineCoroot]| -> Vec<Vec<Order>> {
            s.iter().map(|a| s.iter().map(|b| aw.reflection(a).mul(&aw.reflection(b)).order()).collect()).collect()
        };
        let left: Vec<AffineCoroot> = matched.iter().map(|p| p.0.clone()).collect();
        let right: Vec<AffineCoroot> = matched.iter().map(|p| p.1.clone()).collect();
        let coxeter_equal = bijective && cox(aw_g, &left) == cox(aw_d, &right);
        let omega = self.g.omega_elements(&chi, 1);
        let omega_matched = omega.iter().all(|w| {
            j(w).is_some_and(|h| self.d.length(&h, &chid).is_zero() && self.is_integral_dual(&h))
        });
        let _ = fam_d;
        Ok(AlcoveMatch { y, matched, coxeter_equal: coxeter_equal && bijective, omega_matched })
    }

    fn walk_to_base(
        &self,
        mut x: Vec<Rat>,
        fam: &CorootFamily,
        simples: &[AffineCoroot],
    ) -> Result<ExtendedWeylElement, DualityError> {
        let aw = self.d.aw();
        let k = &self.dual_level.rational;
        let mut y = aw.identity();
        let mut steps = 0usize;
        'walk: loop {
            for b in simples {
                let v = aw.eval_slice(k, b, &x);
                if v.is_zero() {
                    return Err(DualityError::NoAlcove("transported base point lies on a wall".into()));
                }
                let positive_side = v.is_positive();
                if !positive_side {
                    let r = aw.reflection(b);
                    x = r.act_slice(k, &x);
                    y = r.mul(&y);
                    steps += 1;
                    if steps > 100_000 {
                        return Err(DualityError::NoAlcove("descent walk did not terminate".into()));
                    }
                    continue 'walk;
                }
            }
            break;
        }
        let _ = fam;
        Ok(y)
    }

    /// For irrational levels the integral groups are finite Weyl groups; walk
    /// the image of the dominant chamber back by descents.
    fn walk_by_phi(
        &self,
        fam_g: &CorootFamily,
        fam_d: &CorootFamily,
        simples_d: &[AffineCoroot],
    ) -> Result<ExtendedWeylElement, DualityError> {
        let aw_d = self.d.aw();
        let sg = self.g.simples(&self.chi());
        let images: Vec<AffineCoroot> = sg
            .iter()
            .map(|b| {
                let h = self.phi(&self.g.aw().reflection(b)).expect("integral");
                let c = self.phi_coroot(b).unwrap_or(AffineCoroot { root: b.root, n: Int::zero() });
                debug_assert_eq!(aw_d.reflection(&c), h);
                c
            })
            .collect();
        let _ = fam_g;
        let mut y = aw_d.identity();
        let mut steps = 0usize;
        'walk: loop {
            for b in simples_d {
                let r = aw_d.reflection(b);
                // descend while y·(image simple) has a negative member
                let neg = images.iter().any(|c| !fam_d.is_positive(aw_d.rd(), &aw_d.act_coroot(&y, c)));
                if !neg {
                    break 'walk;
                }
                let cand = r.mul(&y);
                let before = images.iter().filter(|c| !fam_d.is_positive(aw_d.rd(), &aw_d.act_coroot(&y, c))).count();
                let after = images.iter().filter(|c| !fam_d.is_positive(aw_d.rd(), &aw_d.act_coroot(&cand, c))).count();
                if after < before {
                    y = cand;
                    steps += 1;
                    if steps > 10_000 {
                        return Err(DualityError::NoAlcove("walk did not terminate".into()));
                    }
                    continue 'walk;
                }
            }
            return Err(DualityError::NoAlcove("no descent available".into()));
        }
        Ok(y)
    }

    /// `i_κ` on simple roots: the Chevalley involution `−w₀` on components
    /// where `κ` is positive, identity elsewhere, followed by `α ↦ α^∨`.
    /// Positions refer to `simple_indices` on both sides.
    pub fn kappa_parabolic_match(&self) -> Result<Vec<usize>, DualityError> {
        let rd = self.rd();
        for i in 0..rd.num_roots() {
            if self.g.half_square(i).is_none() {
                return Err(DualityError::IrrationalSquareLength(i));
            }
        }
        let weyl = self.g.aw().weyl();
        let simple = rd.simple_indices();
        let mut out: Vec<usize> = (0..simple.len()).collect();
        for comp in rd.components() {
            let q = self.g.half_square(simple[comp[0]]).expect("rational");
            if !q.is_positive() {
                continue;
            }
            // longest element of the component's parabolic subgroup
            let refl: Vec<usize> = comp.iter().map(|&k| weyl.position(&rd.reflection(simple[k])).unwrap()).collect();
            let mut w0 = 0usize;
            'up: loop {
                for &r in &refl {
                    let p = weyl.product(w0, r);
                    if weyl.length(p) > weyl.length(w0) {
                        w0 = p;
                        continue 'up;
                    }
                }
                break;
            }
            for &k in &comp {
                let img = weyl.act_on_coroot(w0, simple[k]);
                let neg = rd.negative_of(img);
                let pos = simple.iter().position(|&s| s == neg).ok_or_else(|| {
                    DualityError::VerificationFailed("−w₀ does not preserve the simple roots".into())
                })?;
                out[k] = pos;
            }
        }
        Ok(out)
    }

    /// The group generated by orbit products of longest elements on the
    /// `G` side.
    pub fn longest_group(&self, bound: i64) -> Vec<ExtendedWeylElement> {
        let chi = self.chi();
        let sys = self.g.system(&chi);
        let omega = self.g.omega_elements(&chi, bound);
        finite_longest_group(&self.g, &sys, &omega)
    }
}

fn slice_translation(lam: &[Rat]) -> RatMatrix {
    let n = lam.len();
    RatMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (i, j) if i == j => Rat::one(),
        (i, 0) => lam[i - 1].clone(),
        _ => Rat::zero(),
    })
}

#[derive(Clone, Debug)]
pub struct IotaReport {
    pub iota: Option<RatMatrix>,
    pub images: Vec<ExtendedWeylElement>,
}

#[derive(Clone, Debug)]
pub struct AlcoveMatch {
    pub y: ExtendedWeylElement,
    /// `(r, j(r))` for each simple integral coroot of `G`.
    pub matched: Vec<(AffineCoroot, AffineCoroot)>,
    pub coxeter_equal: bool,
    pub omega_matched: bool,
}
