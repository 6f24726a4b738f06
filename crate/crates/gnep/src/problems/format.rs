//! Text serialization of quadratic games (`qgnep/1`).

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use super::quadratic::{QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};
use crate::error::{GnepError, Result};
use crate::model::{GameInstance, SimpleSet};

pub const QGNEP_VERSION: &str = "qgnep/1";

/// Float written with 17 significant digits; infinities as `"inf"`/`"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            let raw = RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                match v {
                    "inf" | "+inf" | "infinity" => Ok(Real(f64::INFINITY)),
                    "-inf" | "-infinity" => Ok(Real(f64::NEG_INFINITY)),
                    "nan" => Ok(Real(f64::NAN)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

pub fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

pub fn floats(v: &[Real]) -> Vec<f64> {
    v.iter().map(|r| r.0).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MatrixDoc {
    Dense(Vec<Real>),
    Triplets(Vec<(usize, usize, Real)>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SetDoc {
    Box { lower: Vec<Real>, upper: Vec<Real> },
    NonnegOrthant,
    UnitSimplex,
    NonnegBall { radius: Real },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    #[serde(rename = "A")]
    a: MatrixDoc,
    c: Vec<Real>,
    d: Real,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlayerDoc {
    #[serde(rename = "Q")]
    q: MatrixDoc,
    b: Vec<Real>,
    set: SetDoc,
    #[serde(default)]
    constraints: Vec<ConstraintDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    version: String,
    name: String,
    layout: Vec<usize>,
    players: Vec<PlayerDoc>,
}

fn matrix_doc(m: &[f64], n: usize) -> MatrixDoc {
    let nnz = m.iter().filter(|v| v.to_bits() != 0).count();
    if 3 * nnz < n * n {
        let mut t = Vec::with_capacity(nnz);
        for i in 0..n {
            for j in 0..n {
                let v = m[i * n + j];
                if v.to_bits() != 0 {
                    t.push((i, j, Real(v)));
                }
            }
        }
        MatrixDoc::Triplets(t)
    } else {
        MatrixDoc::Dense(reals(m))
    }
}

fn field_error(path: String, message: String) -> GnepError {
    GnepError::Parse {
        path,
        line: 0,
        column: 0,
        message,
    }
}

fn matrix_from_doc(doc: &MatrixDoc, n: usize, path: String) -> Result<Vec<f64>> {
    match doc {
        MatrixDoc::Dense(v) => {
            if v.len() != n * n {
                return Err(field_error(path, format!("dense matrix has {} entries, expected {}", v.len(), n * n)));
            }
            Ok(floats(v))
        }
        MatrixDoc::Triplets(t) => {
            let mut m = vec![0.0; n * n];
            for (k, &(i, j, v)) in t.iter().enumerate() {
                if i >= n || j >= n {
                    return Err(field_error(format!("{path}[{k}]"), format!("index ({i}, {j}) out of range for n = {n}")));
                }
                m[i * n + j] = v.0;
            }
            Ok(m)
        }
    }
}

fn vec_from_doc(v: &[Real], n: usize, path: String) -> Result<Vec<f64>> {
    if v.len() != n {
        return Err(field_error(path, format!("length {}, expected {n}", v.len())));
    }
    Ok(floats(v))
}

fn set_doc(s: &SimpleSet) -> SetDoc {
    match s {
        SimpleSet::Box { lower, upper } => SetDoc::Box {
            lower: reals(lower),
            upper: reals(upper),
        },
        SimpleSet::NonnegOrthant { .. } => SetDoc::NonnegOrthant,
        SimpleSet::UnitSimplex { .. } => SetDoc::UnitSimplex,
        SimpleSet::NonnegBall { radius, .. } => SetDoc::NonnegBall { radius: Real(*radius) },
    }
}

fn set_from_doc(doc: &SetDoc, dim: usize, path: String) -> Result<SimpleSet> {
    let wrap = |e: GnepError| field_error(path.clone(), e.to_string());
    match doc {
        SetDoc::Box { lower, upper } => {
            let l = vec_from_doc(lower, dim, format!("{path}.lower"))?;
            let u = vec_from_doc(upper, dim, format!("{path}.upper"))?;
            SimpleSet::boxed(l, u).map_err(wrap)
        }
        SetDoc::NonnegOrthant => Ok(SimpleSet::NonnegOrthant { dim }),
        SetDoc::UnitSimplex => Ok(SimpleSet::UnitSimplex { dim }),
        SetDoc::NonnegBall { radius } => SimpleSet::nonneg_ball(dim, radius.0).map_err(wrap),
    }
}

pub fn to_string(spec: &QuadraticGnepSpec) -> String {
    let n = spec.n();
    let doc = GameDoc {
        version: QGNEP_VERSION.into(),
        name: spec.name.clone(),
        layout: spec.layout.clone(),
        players: spec
            .players
            .iter()
            .map(|p| PlayerDoc {
                q: matrix_doc(&p.q, n),
                b: reals(&p.b),
                set: set_doc(&p.set),
                constraints: p
                    .constraints
                    .iter()
                    .map(|c| ConstraintDoc {
                        a: matrix_doc(&c.a, n),
                        c: reals(&c.c),
                        d: Real(c.d),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
    s.push('\n');
    s
}

/// Parses and checks a document, including own-block semidefiniteness.
pub fn from_str(text: &str) -> Result<QuadraticGnepSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: GameDoc = serde_path_to_error::deserialize(de).map_err(|e| GnepError::Parse {
        path: e.path().to_string(),
        line: e.inner().line(),
        column: e.inner().column(),
        message: e.inner().to_string(),
    })?;
    if doc.version != QGNEP_VERSION {
        return Err(field_error("version".into(), format!("unsupported version '{}'", doc.version)));
    }
    if doc.layout.is_empty() || doc.layout.contains(&0) {
        return Err(field_error("layout".into(), "blocks must be nonempty".into()));
    }
    if doc.layout.len() != doc.players.len() {
        return Err(field_error(
            "players".into(),
            format!("{} players for {} layout blocks", doc.players.len(), doc.layout.len()),
        ));
    }
    let n: usize = doc.layout.iter().sum();
    let mut players = Vec::new();
    for (nu, p) in doc.players.iter().enumerate() {
        let base = format!("players[{nu}]");
        let mut constraints = Vec::new();
        for (i, c) in p.constraints.iter().enumerate() {
            let cb = format!("{base}.constraints[{i}]");
            constraints.push(QuadraticConstraintSpec {
                a: matrix_from_doc(&c.a, n, format!("{cb}.A"))?,
                c: vec_from_doc(&c.c, n, format!("{cb}.c"))?,
                d: c.d.0,
            });
        }
        players.push(QuadraticPlayerSpec {
            q: matrix_from_doc(&p.q, n, format!("{base}.Q"))?,
            b: vec_from_doc(&p.b, n, format!("{base}.b"))?,
            set: set_from_doc(&p.set, doc.layout[nu], format!("{base}.set"))?,
            constraints,
        });
    }
    let spec = QuadraticGnepSpec {
        name: doc.name,
        layout: doc.layout,
        players,
    };
    spec.check()?;
    Ok(spec)
}

pub fn save_quadratic(spec: &QuadraticGnepSpec, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(spec))?;
    Ok(())
}

pub fn load_quadratic_spec(path: &Path) -> Result<QuadraticGnepSpec> {
    from_str(&std::fs::read_to_string(path)?)
}

pub fn load_quadratic(path: &Path) -> Result<GameInstance> {
    load_quadratic_spec(path)?.to_game()
}
