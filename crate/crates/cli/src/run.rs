//! Subcommands. Each produces a JSON value and a text rendering; lists are
//! in a fixed order so that output is reproducible.

use std::fmt::Write as _;

use affine_hecke::affine::{affine_simple_data, AffineCoroot, AffineWeyl, ExtendedWeylElement, OmegaData, Order, Progression};
use affine_hecke::duality::DualPair;
use affine_hecke::exact::{fmt_rat, Int, IntMatrix, QmodZ, Rat, RatMatrix};
use affine_hecke::hecke::{HeckeAlgebroid, HeckeElement, Letter};
use affine_hecke::integral::{Character, Twisting};
use affine_hecke::metaplectic::{bullet_weyl_compare, endoscopic_root_datum};
use affine_hecke::rootdata::{from_cartan, isomorphic, preset, Preset, RootDatum};
use affine_hecke::soergel::{graph_characters, Reflection};
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::spec::Job;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Info,
    Integral,
    Metaplectic,
    Duality,
    Hecke,
    SoergelCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::Integral => "integral",
            Command::Metaplectic => "metaplectic",
            Command::Duality => "duality",
            Command::Hecke => "hecke",
            Command::SoergelCheck => "soergel-check",
        }
    }
}

/// A module error, tagged with the module and the contract it violated.
#[derive(Debug, Error)]
#[error("[{module}] {contract}: {message}")]
pub struct RunError {
    pub module: &'static str,
    pub contract: &'static str,
    pub message: String,
}

fn err(module: &'static str, contract: &'static str) -> impl Fn(String) -> RunError {
    move |message| RunError { module, contract, message }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub value: Value,
    pub text: String,
    /// Named verification failures; nonempty means exit status 1.
    pub failures: Vec<String>,
}

pub fn run(cmd: Command, job: &Job, bound: i64) -> Result<Report, RunError> {
    let mut r = match cmd {
        Command::Info => info(job)?,
        Command::Integral => integral(job, bound)?,
        Command::Metaplectic => metaplectic(job)?,
        Command::Duality => duality(job, bound)?,
        Command::Hecke => hecke(job, bound)?,
        Command::SoergelCheck => soergel_check(bound.clamp(1, 4) as usize)?,
    };
    if let Value::Object(m) = &mut r.value {
        m.insert("schema_version".into(), json!(crate::spec::SCHEMA_VERSION));
        m.insert("command".into(), json!(cmd.name()));
        m.insert("failures".into(), json!(r.failures));
    }
    Ok(r)
}

// ------------------------------------------------------------ formatting

fn ints(v: &[Int]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn rats(v: &[Rat]) -> String {
    format!("({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(","))
}

fn rat_json(v: &[Rat]) -> Value {
    json!(v.iter().map(fmt_rat).collect::<Vec<_>>())
}

fn int_json(v: &[Int]) -> Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn matrix_json(m: &RatMatrix) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(fmt_rat).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// A reduced word for `w` in the simple reflections `s1, s2, ...`.
fn weyl_word(aw: &AffineWeyl, w: &IntMatrix) -> String {
    let weyl = aw.weyl();
    let rd = aw.rd();
    let gens: Vec<usize> =
        rd.simple_indices().iter().map(|&i| weyl.position(&rd.reflection(i)).expect("reflection")).collect();
    let Some(mut cur) = weyl.position(w) else { return "?".into() };
    let mut word = Vec::new();
    'down: while weyl.length(cur) > 0 {
        for (k, &g) in gens.iter().enumerate() {
            let p = weyl.product(cur, g);
            if weyl.length(p) < weyl.length(cur) {
                word.push(k + 1);
                cur = p;
                continue 'down;
            }
        }
        break;
    }
    if word.is_empty() {
        "e".into()
    } else {
        word.iter().rev().map(|k| format!("s{k}")).collect()
    }
}

fn elem(aw: &AffineWeyl, g: &ExtendedWeylElement) -> String {
    let w = weyl_word(aw, g.w());
    if g.trans().iter().all(|x| x.is_zero()) {
        w
    } else if w == "e" {
        format!("t^{}", ints(g.trans()))
    } else {
        format!("t^{}·{w}", ints(g.trans()))
    }
}

fn elem_json(aw: &AffineWeyl, g: &ExtendedWeylElement) -> Value {
    json!({ "translation": int_json(g.trans()), "weyl": weyl_word(aw, g.w()) })
}

fn coroot(rd: &RootDatum, b: &AffineCoroot) -> String {
    format!("[{}, {}]", ints(rd.coroot(b.root)), b.n)
}

fn coroot_json(rd: &RootDatum, b: &AffineCoroot) -> Value {
    json!({ "coroot": int_json(rd.coroot(b.root)), "n": b.n.to_string() })
}

fn progression(p: &Progression) -> String {
    match p {
        Progression::Empty => "none".into(),
        Progression::Zero => "n = 0".into(),
        Progression::Arith { residue, modulus } if *modulus == Int::from(1) => {
            let _ = residue;
            "all n".into()
        }
        Progression::Arith { residue, modulus } => format!("n ≡ {residue} mod {modulus}"),
    }
}

fn order(o: &Order) -> String {
    match o {
        Order::Finite(k) => k.to_string(),
        Order::Infinite => "inf".into(),
    }
}

/// Every preset of the same rank isomorphic to `rd`, in a fixed order.
pub fn identify(rd: &RootDatum) -> Vec<String> {
    let r = rd.rank();
    let mut cands = vec![
        Preset::SL(r + 1),
        Preset::PGL(r + 1),
        Preset::GL(r),
        Preset::Sp(r),
        Preset::PSp(r),
        Preset::SOOdd(r),
        Preset::SpinOdd(r),
        Preset::SOEven(r),
        Preset::Torus(r),
    ];
    if r == 2 {
        cands.push(Preset::G2);
        for a in [Preset::SL(2), Preset::PGL(2), Preset::GL(1)] {
            for b in [Preset::SL(2), Preset::PGL(2), Preset::GL(1)] {
                cands.push(Preset::Product(vec![a.clone(), b]));
            }
        }
    }
    let mut out: Vec<String> = cands
        .into_iter()
        .filter_map(|p| {
            let other = preset(&p).ok()?;
            isomorphic(rd, &other).ok()?.then(|| p.label())
        })
        .collect();
    out.dedup();
    out
}

fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}

/// Cartan type of each simple component, e.g. `A₂×C₂`.
pub fn cartan_type(rd: &RootDatum) -> String {
    let a = rd.cartan_matrix();
    let small = |i: usize, j: usize| affine_hecke::rootdata::small(&a[i][j]);
    let mut parts = Vec::new();
    for comp in rd.components() {
        let n = comp.len();
        let prods: Vec<(usize, usize, i64)> = comp
            .iter()
            .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| i < j)
            .map(|(i, j)| (i, j, small(i, j) * small(j, i)))
            .filter(|p| p.2 > 0)
            .collect();
        let label = if prods.iter().any(|p| p.2 == 3) {
            "G".to_string()
        } else if let Some(&(i, j, _)) = prods.iter().find(|p| p.2 == 2) {
            // ⟨α_i^∨, α_j⟩ = -2 means α_j is long
            let long = if small(i, j) == -2 { j } else { i };
            // long nodes: those joined to `long` by simple bonds
            let mut seen = vec![long];
            let mut k = 0;
            while k < seen.len() {
                let cur = seen[k];
                for p in prods.iter().filter(|p| p.2 == 1 && (p.0 == cur || p.1 == cur)) {
                    let o = if p.0 == cur { p.1 } else { p.0 };
                    if !seen.contains(&o) {
                        seen.push(o);
                    }
                }
                k += 1;
            }
            let nlong = seen.len();
            match n {
                2 => "C".to_string(),
                4 if nlong == 2 => "F".to_string(),
                _ if nlong == 1 => "C".to_string(),
                _ => "B".to_string(),
            }
        } else {
            let degree = |k: usize| prods.iter().filter(|p| p.0 == k || p.1 == k).count();
            match comp.iter().find(|&&k| degree(k) == 3) {
                None => "A".to_string(),
                Some(_) if n == 4 => "D".to_string(),
                Some(&c) => {
                    // arm lengths from the branch node
                    let mut arms = Vec::new();
                    for &(x, y, _) in prods.iter().filter(|p| p.0 == c || p.1 == c) {
                        let (mut prev, mut cur, mut len) = (c, if x == c { y } else { x }, 1);
                        loop {
                            let next = prods
                                .iter()
                                .filter(|p| p.0 == cur || p.1 == cur)
                                .map(|p| if p.0 == cur { p.1 } else { p.0 })
                                .find(|&k| k != prev);
                            match next {
                                Some(k) => (prev, cur, len) = (cur, k, len + 1),
                                None => break,
                            }
                        }
                        arms.push(len);
                    }
                    arms.sort();
                    if arms[0] == 1 && arms[1] == 1 { "D".to_string() } else { "E".to_string() }
                }
            }
        };
        parts.push(format!("{label}{}", subscript(n)));
    }
    if parts.is_empty() {
        "trivial".into()
    } else {
        parts.join("×")
    }
}

// ------------------------------------------------------------ commands

fn affine(job: &Job) -> Result<AffineWeyl, RunError> {
    AffineWeyl::new(job.rd.clone()).map_err(|e| err("affine", "extended affine Weyl group")(e.to_string()))
}

fn twisting(job: &Job) -> Result<Twisting, RunError> {
    Ok(Twisting::from_central(affine(job)?, &job.form, &job.central))
}

fn info(job: &Job) -> Result<Report, RunError> {
    let aw = affine(job)?;
    let rd = aw.rd();
    let (walls, alcove, omega) = affine_simple_data(&aw, &job.form);
    let mut t = String::new();
    let names = identify(rd);
    let name = if names.is_empty() { rd.describe() } else { names.join(" ≅ ") };
    writeln!(t, "root datum: {name} (type {})", cartan_type(rd)).unwrap();
    writeln!(t, "rank {}, semisimple rank {}, {} roots", rd.rank(), rd.semisimple_rank(), rd.num_roots()).unwrap();
    writeln!(t, "simple affine coroots:").unwrap();
    for (k, w) in walls.iter().enumerate() {
        writeln!(t, "  a{k} = {}", coroot(rd, w)).unwrap();
    }
    writeln!(t, "alcove point: {}", rats(&alcove.interior_point)).unwrap();
    let (omega_kind, omega_elems) = match &omega {
        OmegaData::Finite(v) => ("finite", v.clone()),
        OmegaData::Infinite { .. } => ("infinite (generators)", omega.generators()),
    };
    writeln!(t, "Ω {omega_kind}: {}", omega_elems.iter().map(|g| elem(&aw, g)).collect::<Vec<_>>().join(", ")).unwrap();
    let value = json!({
        "root_datum": names,
        "cartan_type": cartan_type(rd),
        "rank": rd.rank(),
        "semisimple_rank": rd.semisimple_rank(),
        "num_roots": rd.num_roots(),
        "cartan": rd.cartan_matrix().iter().map(|r| int_json(r)).collect::<Vec<_>>(),
        "simple_affine": walls.iter().map(|w| coroot_json(rd, w)).collect::<Vec<_>>(),
        "alcove_point": rat_json(&alcove.interior_point),
        "omega": { "kind": omega_kind, "elements": omega_elems.iter().map(|g| elem_json(&aw, g)).collect::<Vec<_>>() },
    });
    Ok(Report { value, text: t, failures: vec![] })
}

const OMEGA_SHOWN: usize = 12;

fn integral(job: &Job, bound: i64) -> Result<Report, RunError> {
    let tw = twisting(job)?;
    let aw = tw.aw();
    let rd = aw.rd();
    let chi = &job.character;
    let sys = tw.system(chi);
    let omega = tw.omega_elements(chi, bound);
    let mut t = String::new();
    writeln!(t, "central charge c = {}", job.central).unwrap();
    writeln!(t, "character: {}", rats(&chi.lift())).unwrap();
    writeln!(t, "integral progressions:").unwrap();
    let mut progs = Vec::new();
    for i in 0..rd.num_positive() {
        let p = tw.progression(chi, i);
        writeln!(t, "  {}: {}", ints(rd.coroot(i)), progression(&p)).unwrap();
        progs.push(json!({ "coroot": int_json(rd.coroot(i)), "progression": progression(&p) }));
    }
    writeln!(t, "S_χ ({} simple reflections):", sys.simples.len()).unwrap();
    for (k, b) in sys.simples.iter().enumerate() {
        writeln!(t, "  r{k} = {}", coroot(rd, b)).unwrap();
    }
    let cox: Vec<Vec<String>> = sys.coxeter.iter().map(|r| r.iter().map(order).collect()).collect();
    if !cox.is_empty() {
        writeln!(t, "Coxeter matrix:").unwrap();
        for r in &cox {
            writeln!(t, "  {}", r.join(" ")).unwrap();
        }
    }
    let comps: Vec<Value> =
        sys.components.iter().map(|c| json!({ "members": c.members, "finite": c.finite })).collect();
    let comp_text = if sys.components.is_empty() {
        "none".to_string()
    } else {
        sys.components
            .iter()
            .map(|c| format!("{:?} {}", c.members, if c.finite { "finite" } else { "affine" }))
            .collect::<Vec<_>>()
            .join(", ")
    };
    writeln!(t, "components: {comp_text}").unwrap();
    writeln!(t, "stabilizer W̃_χ:").unwrap();
    let mut stab = Vec::new();
    for (w, coset) in sys.stabilizer.iter().enumerate() {
        let Some(c) = coset else { continue };
        let word = weyl_word(aw, aw.weyl().element(w));
        let basis: Vec<String> = c.basis.iter().map(|b| ints(b)).collect();
        writeln!(t, "  {word}: {} + span{{{}}}", ints(&c.particular), basis.join(", ")).unwrap();
        stab.push(json!({
            "weyl": word,
            "particular": int_json(&c.particular),
            "basis": c.basis.iter().map(|b| int_json(b)).collect::<Vec<_>>(),
        }));
    }
    writeln!(t, "Ω_χ samples ({} within the bound):", omega.len()).unwrap();
    for (k, g) in omega.iter().enumerate().take(OMEGA_SHOWN) {
        writeln!(t, "  w[{k}] = {} (order {})", elem(aw, g), order(&g.order())).unwrap();
    }
    if omega.len() > OMEGA_SHOWN {
        writeln!(t, "  ... ({} more; see --json)", omega.len() - OMEGA_SHOWN).unwrap();
    }
    let value = json!({
        "central": job.central.to_string(),
        "character": rat_json(&chi.lift()),
        "progressions": progs,
        "simples": sys.simples.iter().map(|b| coroot_json(rd, b)).collect::<Vec<_>>(),
        "coxeter": cox,
        "components": comps,
        "stabilizer": stab,
        "omega": omega.iter().map(|g| elem_json(aw, g)).collect::<Vec<_>>(),
    });
    Ok(Report { value, text: t, failures: vec![] })
}

fn metaplectic(job: &Job) -> Result<Report, RunError> {
    let aw = affine(job)?;
    let rd = aw.rd();
    let e = err("metaplectic", "endoscopic group H and its dual");
    let d = endoscopic_root_datum(&aw, &job.form, &job.central).map_err(|x| e(x.to_string()))?;
    let rep = bullet_weyl_compare(&aw, &job.form, &job.central, &job.character).map_err(|x| e(x.to_string()))?;
    let h = identify(&d.rd_h);
    let hd = identify(&d.rd_hdual);
    let mut t = String::new();
    writeln!(t, "X_*(A_H) basis: {} (index {})", d.lattice.iter().map(|v| ints(v)).collect::<Vec<_>>().join(", "), d.index)
        .unwrap();
    writeln!(t, "rescale factors N:").unwrap();
    let mut table = Vec::new();
    for i in 0..rd.num_positive() {
        writeln!(t, "  {}: {}", ints(rd.coroot(i)), d.rescale[i]).unwrap();
        table.push(json!({ "coroot": int_json(rd.coroot(i)), "N": d.rescale[i].to_string() }));
    }
    for (label, rd_x, names) in [("rd_H", &d.rd_h, &h), ("rd_H∨", &d.rd_hdual, &hd)] {
        writeln!(t, "{label}: type {}", cartan_type(rd_x)).unwrap();
        if names.is_empty() {
            writeln!(t, "{label}: no preset of rank {} matches", rd_x.rank()).unwrap();
        }
        for n in names.iter() {
            writeln!(t, "{label} ≅ {n}: true").unwrap();
        }
    }
    writeln!(t, "bullet comparison at χ_f = {}:", rats(&job.character.lift())).unwrap();
    writeln!(t, "  μ = {}", rats(&rep.mu)).unwrap();
    let flags = [
        ("generators_match", rep.generators_match),
        ("simples_match", rep.simples_match),
        ("lattice_equal", rep.lattice_equal),
        ("bullet_full_g", rep.bullet_full_g),
        ("bullet_full_h", rep.bullet_full_h),
    ];
    for (k, v) in flags {
        writeln!(t, "  {k}: {v}").unwrap();
    }
    let failures: Vec<String> =
        flags[..3].iter().filter(|(_, v)| !v).map(|(k, _)| format!("metaplectic: {k}")).collect();
    let value = json!({
        "lattice": d.lattice.iter().map(|v| int_json(v)).collect::<Vec<_>>(),
        "index": d.index.to_string(),
        "rescale": table,
        "rd_h": h,
        "rd_h_dual": hd,
        "bullet": {
            "mu": rat_json(&rep.mu),
            "integral_directions": rep.integral_directions,
            "generators_match": rep.generators_match,
            "simples_match": rep.simples_match,
            "lattice_equal": rep.lattice_equal,
            "bullet_full_g": rep.bullet_full_g,
            "bullet_full_h": rep.bullet_full_h,
        },
    });
    Ok(Report { value, text: t, failures })
}

fn duality(job: &Job, bound: i64) -> Result<Report, RunError> {
    let e = err("duality", "level duality of integral Weyl groups");
    let (level, theta) = job.level.clone().ok_or_else(|| e("the spec has no level".into()))?;
    let dp = DualPair::new(&job.rd, level, theta).map_err(|x| e(x.to_string()))?;
    let mut failures = Vec::new();
    let mut t = String::new();
    let gens = dp.generators(bound);
    let iota = match dp.iota_conjugation(&gens) {
        Ok(r) => {
            writeln!(t, "ι conjugation: verified on {} generators", r.images.len()).unwrap();
            r.iota
        }
        Err(x) => {
            writeln!(t, "ι conjugation: FAILED ({x})").unwrap();
            failures.push(format!("duality: iota_conjugation: {x}"));
            dp.iota()
        }
    };
    if let Some(m) = &iota {
        writeln!(t, "ι = {}", m.to_rows().iter().map(|r| rats(r)).collect::<Vec<_>>().join(" ")).unwrap();
    }
    let m = dp.alcove_match().map_err(|x| e(x.to_string()))?;
    let awd = dp.d.aw();
    let (rd, rdd) = (dp.rd(), dp.rd_dual());
    let longest = m.y.trans().iter().all(|x| x.is_zero())
        && awd.weyl().position(m.y.w()) == Some(awd.weyl().longest());
    let iso = m.coxeter_equal && m.omega_matched && failures.is_empty();
    writeln!(t, "extended Coxeter iso: {}", if iso { "verified" } else { "FAILED" }).unwrap();
    if longest {
        writeln!(t, "y = w₀({}) = {}", cartan_type(rdd), elem(awd, &m.y)).unwrap();
    } else {
        writeln!(t, "y = {}", elem(awd, &m.y)).unwrap();
    }
    writeln!(t, "matched simple reflections:").unwrap();
    for (a, b) in &m.matched {
        writeln!(t, "  {} ↦ {}", coroot(rd, a), coroot(rdd, b)).unwrap();
    }
    let g = dp.longest_group(bound);
    writeln!(t, "|𝒢| = {}", g.len()).unwrap();
    let ik = dp.kappa_parabolic_match();
    match &ik {
        Ok(v) => writeln!(t, "i_κ: {}", v.iter().enumerate().map(|(a, b)| format!("{}→{}", a + 1, b + 1)).collect::<Vec<_>>().join(" ")).unwrap(),
        Err(x) => writeln!(t, "i_κ: n/a ({x})").unwrap(),
    }
    if !m.coxeter_equal {
        failures.push("duality: Coxeter matrices differ".into());
    }
    if !m.omega_matched {
        failures.push("duality: length-zero elements not matched".into());
    }
    let value = json!({
        "iota": iota.as_ref().map(matrix_json),
        "extended_coxeter_iso": iso,
        "y": elem_json(awd, &m.y),
        "y_is_longest": longest,
        "matched": m.matched.iter().map(|(a, b)| json!([coroot_json(rd, a), coroot_json(rdd, b)])).collect::<Vec<_>>(),
        "coxeter_equal": m.coxeter_equal,
        "omega_matched": m.omega_matched,
        "longest_group_order": g.len(),
        "i_kappa": ik.ok(),
    });
    Ok(Report { value, text: t, failures })
}

/// Parses `"r0 r1 w[2]"` against `S_χ` and the `Ω_χ` samples.
pub fn parse_word(text: &str, simples: &[AffineCoroot], omega: &[ExtendedWeylElement]) -> Result<Vec<Letter>, String> {
    text.split_whitespace()
        .map(|tok| {
            if let Some(k) = tok.strip_prefix('r') {
                let k: usize = k.parse().map_err(|_| format!("bad letter {tok:?}"))?;
                simples.get(k).cloned().map(Letter::Simple).ok_or_else(|| format!("no simple reflection r{k}"))
            } else if let Some(k) = tok.strip_prefix("w[").and_then(|s| s.strip_suffix(']')) {
                let k: usize = k.parse().map_err(|_| format!("bad letter {tok:?}"))?;
                omega.get(k).cloned().map(Letter::Minimal).ok_or_else(|| format!("no length-zero element w[{k}]"))
            } else {
                Err(format!("bad letter {tok:?}"))
            }
        })
        .collect()
}

fn table(h: &HeckeAlgebroid, e: &HeckeElement) -> Vec<(ExtendedWeylElement, Int, String)> {
    let mut rows: Vec<_> =
        e.terms.iter().map(|(x, c)| (x.clone(), h.length(x, &e.right), c.to_string())).collect();
    rows.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    rows
}

fn hecke(job: &Job, bound: i64) -> Result<Report, RunError> {
    let e = err("hecke", "Bott–Samelson product");
    let tw = twisting(job)?;
    let chi = job.character.clone();
    let h = HeckeAlgebroid::new(tw);
    let simples = h.simples(&chi);
    let omega = h.twisting().omega_elements(&chi, bound);
    let word_text = job.spec.hecke.as_ref().map(|w| w.word.clone()).unwrap_or_default();
    let word = parse_word(&word_text, &simples, &omega).map_err(&e)?;
    let rel = h.check_relations(&chi, &omega).map_err(|x| e(x.to_string()))?;
    let prod = h.bott_samelson(&word, &chi).map_err(|x| e(x.to_string()))?;
    let aw = h.twisting().aw();
    let mut failures: Vec<String> = rel.failures.iter().map(|f| format!("hecke: relation {f}")).collect();
    let mut t = String::new();
    writeln!(t, "word: {word_text}").unwrap();
    writeln!(t, "relations: {} checked, {} failures", rel.checked, rel.failures.len()).unwrap();
    writeln!(t, "Δ multiplicities:").unwrap();
    let rows = table(&h, &prod);
    for (x, l, c) in &rows {
        writeln!(t, "  {} (ℓ = {l}): {c}", elem(aw, x)).unwrap();
    }
    if prod.terms.values().any(|c| !c.is_nonnegative()) {
        failures.push("hecke: negative multiplicity".into());
    }
    let value = json!({
        "word": word_text,
        "relations": { "checked": rel.checked, "failures": rel.failures },
        "multiplicities": rows
            .iter()
            .map(|(x, l, c)| json!({ "element": elem_json(aw, x), "length": l.to_string(), "coefficient": c }))
            .collect::<Vec<_>>(),
    });
    Ok(Report { value, text: t, failures })
}

/// Cross-checks graph characters against Hecke coefficients for every word
/// up to `max_len` in the rank-two finite systems.
fn soergel_check(max_len: usize) -> Result<Report, RunError> {
    let e = err("soergel", "graph characters match the Hecke algebroid");
    let mut t = String::new();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    writeln!(t, "system  word      element  graph  hecke").unwrap();
    for (label, cartan) in [
        ("A1xA1", vec![vec![2, 0], vec![0, 2]]),
        ("A2", vec![vec![2, -1], vec![-1, 2]]),
        ("B2", vec![vec![2, -2], vec![-1, 2]]),
        ("G2", vec![vec![2, -1], vec![-3, 2]]),
    ] {
        let rd = from_cartan(&cartan, true).map_err(|x| e(x.to_string()))?;
        let aw = AffineWeyl::new(rd.clone()).map_err(|x| e(x.to_string()))?;
        let form = affine_hecke::affine::GramForm::weyl_averaged(&rd, aw.weyl()).map_err(|x| e(x.to_string()))?;
        let h = HeckeAlgebroid::new(Twisting::from_central(aw, &form, &QmodZ::new(&Rat::from_integer(Int::from(0)))));
        let chi = Character::trivial(2);
        let simples: Vec<AffineCoroot> = rd.simple_indices().iter().map(|&i| AffineCoroot::new(i, 0)).collect();
        let refl: Vec<Reflection> = rd
            .simple_indices()
            .iter()
            .map(|&i| Reflection::new(rd.reflection(i).to_rat()))
            .collect::<Result<_, _>>()
            .map_err(|x| e(x.to_string()))?;
        for len in 1..=max_len {
            for code in 0..(1usize << len) {
                let idx: Vec<usize> = (0..len).map(|i| code >> i & 1).collect();
                let letters: Vec<Letter> = idx.iter().map(|&k| Letter::Simple(simples[k].clone())).collect();
                let prod = h.bott_samelson(&letters, &chi).map_err(|x| e(x.to_string()))?;
                let word: Vec<Reflection> = idx.iter().map(|&k| refl[k].clone()).collect();
                let chars = graph_characters(&word).map_err(|x| e(x.to_string()))?;
                let name: String = idx.iter().map(|&k| if k == 0 { 's' } else { 't' }).collect();
                for (x, c) in &prod.terms {
                    let m = x.w().to_rat();
                    let g = chars.iter().find(|(y, _)| y == &m).map(|(_, c)| c.clone()).unwrap_or_default();
                    let ok = &g == c;
                    let el = weyl_word(h.twisting().aw(), x.w());
                    writeln!(t, "{label:<7} {name:<9} {el:<8} {g}  {c}{}", if ok { "" } else { "  MISMATCH" }).unwrap();
                    if !ok {
                        failures.push(format!("soergel: {label} {name} at {el}"));
                    }
                    rows.push(json!({
                        "system": label, "word": name, "element": el,
                        "graph": g.to_string(), "hecke": c.to_string(), "match": ok,
                    }));
                }
                if chars.len() != prod.terms.len() {
                    failures.push(format!("soergel: {label} {name}: support sizes differ"));
                }
            }
        }
    }
    writeln!(t, "{} comparisons, {} mismatches", rows.len(), failures.len()).unwrap();
    Ok(Report { value: json!({ "comparisons": rows }), text: t, failures })
}
