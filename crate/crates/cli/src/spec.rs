//! Job specifications: a versioned JSON schema, parsed then validated.

use affine_hecke::affine::{AffineWeyl, CharacterPoint, GramForm};
use affine_hecke::duality::Level;
use affine_hecke::exact::{int, parse_rat, Int, IntMatrix, QmodZ, Rat, RatMatrix};
use affine_hecke::integral::Character;
use affine_hecke::rootdata::{from_cartan, preset, validate_root_datum, Preset, RootDatum, WeylGroup};
use serde::{Deserialize, Serialize};
use num_traits::Zero;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub schema_version: u32,
    pub root_datum: RootDatumSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<LevelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hecke: Option<HeckeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputMode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootDatumSpec {
    Preset {
        preset: String,
        #[serde(default)]
        n: usize,
    },
    Cartan {
        cartan: Vec<Vec<i64>>,
        #[serde(default = "yes")]
        simply_connected: bool,
    },
    Explicit {
        rank: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        simple: Vec<usize>,
    },
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    Weights { weights: Vec<Vec<i64>> },
    Gram { gram: Vec<Vec<i64>> },
    Averaged { averaged: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Values on the basis of the cocharacter lattice.
    #[default]
    Cochar,
    /// Coefficients of the simple roots.
    SimpleRoots,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSpec {
    pub central: String,
    #[serde(default)]
    pub finite: Vec<String>,
    #[serde(default)]
    pub basis: Basis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub kappa: KappaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irrational_components: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaSpec {
    Gram { gram: Vec<Vec<String>> },
    Scale { scale: String, of: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeSpec {
    pub word: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    Text,
    Json,
}

/// A field-level complaint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersionUnsupported(u32),
    #[error("invalid spec:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<Diagnostic>),
}

pub fn parse_spec(text: &str) -> Result<JobSpec, SpecError> {
    let spec: JobSpec = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if spec.schema_version != SCHEMA_VERSION {
        return Err(SpecError::SchemaVersionUnsupported(spec.schema_version));
    }
    Ok(spec)
}

pub fn serialize_spec(spec: &JobSpec) -> String {
    serde_json::to_string_pretty(spec).expect("specs serialize")
}

/// A spec whose every field passed its module's validator.
#[derive(Clone, Debug)]
pub struct Job {
    pub spec: JobSpec,
    pub rd: RootDatum,
    pub form: GramForm,
    pub central: QmodZ,
    pub character: Character,
    pub level: Option<(Level, Vec<Rat>)>,
}

fn diag(field: &str, message: impl ToString) -> Diagnostic {
    Diagnostic { field: field.into(), message: message.to_string() }
}

fn ints(v: &[Vec<i64>]) -> Vec<Vec<Int>> {
    v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn rats(field: &str, v: &[String], out: &mut Vec<Diagnostic>) -> Vec<Rat> {
    v.iter()
        .enumerate()
        .filter_map(|(i, s)| parse_rat(s).map_err(|e| out.push(diag(&format!("{field}[{i}]"), e))).ok())
        .collect()
}

fn root_datum(spec: &RootDatumSpec) -> Result<RootDatum, Diagnostic> {
    let rd = match spec {
        RootDatumSpec::Preset { preset: name, n } => {
            let p = Preset::from_name(name, *n).map_err(|e| diag("root_datum.preset", e))?;
            preset(&p).map_err(|e| diag("root_datum", e))?
        }
        RootDatumSpec::Cartan { cartan, simply_connected } => {
            from_cartan(cartan, *simply_connected).map_err(|e| diag("root_datum.cartan", e))?
        }
        RootDatumSpec::Explicit { rank, roots, coroots, simple } => {
            let rd = RootDatum::new(*rank, ints(roots), ints(coroots), simple.clone())
                .map_err(|e| diag("root_datum", e))?;
            validate_root_datum(&rd).map_err(|v| {
                diag("root_datum", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "))
            })?;
            rd
        }
    };
    Ok(rd)
}

fn form(rd: &RootDatum, spec: Option<&FormSpec>) -> Result<GramForm, Diagnostic> {
    match spec {
        Some(FormSpec::Weights { weights }) => {
            GramForm::from_weights(rd, &ints(weights)).map_err(|e| diag("form.weights", e))
        }
        Some(FormSpec::Gram { gram }) => {
            let m = IntMatrix::from_rows(&ints(gram), rd.rank()).map_err(|e| diag("form.gram", e))?;
            if m.rows() != rd.rank() {
                return Err(diag("form.gram", format!("expected {} rows", rd.rank())));
            }
            GramForm::from_matrix(rd, m).map_err(|e| diag("form.gram", e))
        }
        None | Some(FormSpec::Averaged { .. }) => {
            let w = WeylGroup::new(rd).map_err(|e| diag("root_datum", e))?;
            GramForm::weyl_averaged(rd, &w).map_err(|e| diag("form", e))
        }
    }
}

/// Splits `κ` into a rational part and one block per flagged component.
fn level(rd: &RootDatum, kappa: RatMatrix, flagged: &[usize]) -> Result<Level, Diagnostic> {
    let comps = rd.components();
    let mut rational = kappa.clone();
    let mut irrational = Vec::new();
    for &c in flagged {
        let comp = comps
            .get(c)
            .ok_or_else(|| diag("level.irrational_components", format!("no component {c}")))?;
        let cols: Vec<Vec<Rat>> = comp
            .iter()
            .map(|&k| rd.coroot(rd.simple_indices()[k]).iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let basis = RatMatrix::from_cols(&cols, rd.rank()).map_err(|e| diag("level", e))?;
        let inner = basis.transpose().mul(&kappa).mul(&basis);
        let inv = inner.inverse().ok_or_else(|| diag("level.kappa", "degenerate on a component"))?;
        let block = kappa.mul(&basis).mul(&inv).mul(&basis.transpose()).mul(&kappa);
        rational = rational.sub(&block);
        irrational.push(block);
    }
    Ok(Level { rational, irrational })
}

pub fn validate(spec: JobSpec) -> Result<Job, SpecError> {
    let mut errs = Vec::new();
    let rd = match root_datum(&spec.root_datum) {
        Ok(rd) => rd,
        Err(d) => return Err(SpecError::Validation(vec![d])),
    };
    let n = rd.rank();
    let form = match form(&rd, spec.form.as_ref()) {
        Ok(f) => Some(f),
        Err(d) => {
            errs.push(d);
            None
        }
    };
    let (central, character) = match &spec.character {
        None => (QmodZ::zero(), Character::trivial(n)),
        Some(c) => {
            let central = parse_rat(&c.central).map_err(|e| errs.push(diag("character.central", e))).ok();
            let finite = rats("character.finite", &c.finite, &mut errs);
            let central = QmodZ::new(&central.unwrap_or_else(Rat::zero));
            let chi = match c.basis {
                Basis::Cochar if finite.len() == n || c.finite.is_empty() => {
                    if finite.is_empty() {
                        Character::trivial(n)
                    } else {
                        Character::from_rats(&finite)
                    }
                }
                Basis::Cochar => {
                    errs.push(diag("character.finite", format!("expected {n} values")));
                    Character::trivial(n)
                }
                Basis::SimpleRoots => match CharacterPoint::from_simple_root_coords(&rd, central.clone(), &finite) {
                    Ok(cp) => Character::from(&cp),
                    Err(e) => {
                        errs.push(diag("character.finite", e));
                        Character::trivial(n)
                    }
                },
            };
            (central, chi)
        }
    };
    let mut lvl = None;
    if let (Some(l), Some(f)) = (&spec.level, &form) {
        let kappa = match &l.kappa {
            KappaSpec::Gram { gram } => {
                let rows: Vec<Vec<Rat>> = gram.iter().map(|r| rats("level.kappa.gram", r, &mut errs)).collect();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    errs.push(diag("level.kappa.gram", format!("expected a {n}×{n} matrix")));
                    None
                } else {
                    RatMatrix::from_rows(&rows, n).ok()
                }
            }
            KappaSpec::Scale { scale, of } => {
                if of != "basic" {
                    errs.push(diag("level.kappa.of", "only \"basic\" is supported"));
                }
                parse_rat(scale)
                    .map_err(|e| errs.push(diag("level.kappa.scale", e)))
                    .ok()
                    .map(|s| f.matrix().to_rat().scale(&s))
            }
        };
        let theta = match &l.theta {
            None => vec![Rat::zero(); n],
            Some(t) => {
                let v = rats("level.theta", t, &mut errs);
                if v.len() != n && v.len() == t.len() {
                    errs.push(diag("level.theta", format!("expected {n} values")));
                }
                v
            }
        };
        if let Some(k) = kappa {
            match level(&rd, k, &l.irrational_components) {
                Ok(level) => {
                    let aw = AffineWeyl::new(rd.clone()).map_err(|e| diag("root_datum", e));
                    match aw.map(|aw| level.validate(&aw).map_err(|e| diag("level.kappa", e))) {
                        Ok(Ok(())) | Err(_) => {}
                        Ok(Err(d)) => errs.push(d),
                    }
                    lvl = Some((level, theta));
                }
                Err(d) => errs.push(d),
            }
        }
    }
    if !errs.is_empty() {
        return Err(SpecError::Validation(errs));
    }
    Ok(Job { spec, rd, form: form.expect("no diagnostics"), central, character, level: lvl })
}

pub fn load(text: &str) -> Result<Job, SpecError> {
    validate(parse_spec(text)?)
}
