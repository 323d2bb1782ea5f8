//! Surface input files and mode-aware number output.
//!
//! Input is a JSON or TOML table `{"a": {"32": …}, "b": {"33": …}, "alpha": …, "beta": …}`.
//! Values are numbers or strings in `"p/q"` / decimal notation and are read exactly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::surface::{normal_form_surface, GeometryError, SurfaceJet};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse surface file: {0}")]
    Syntax(String),
    #[error("bad coefficient {key:?}: {msg}")]
    Coefficient { key: String, msg: String },
    #[error("surface: {0}")]
    Geometry(#[from] GeometryError),
    #[error("give either alpha and beta, or the a/b coefficient tables")]
    Incomplete,
}

/// A literal that may be a JSON/TOML number or a rational string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Literal {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Literal::Int(n) => Ok(Rational::from_integer((*n).into())),
            // Decimal text of the float, so 0.1 reads as 1/10.
            Literal::Float(x) => parse_rational(&x.to_string()).map_err(|e| e.to_string()),
            Literal::Text(s) => parse_rational(s).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceInput {
    #[serde(default)]
    pub a: BTreeMap<String, Literal>,
    #[serde(default)]
    pub b: BTreeMap<String, Literal>,
    pub alpha: Option<Literal>,
    pub beta: Option<Literal>,
}

fn table(map: &BTreeMap<String, Literal>, name: char) -> Result<Vec<((u8, u8), Rational)>, InputError> {
    map.iter()
        .map(|(k, v)| {
            let key = format!("{name}{k}");
            let bad = |msg: String| InputError::Coefficient { key: key.clone(), msg };
            let digits: Vec<u8> = k.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect::<Option<_>>().unwrap_or_default();
            let [kk, i] = digits[..] else {
                return Err(bad("index must be two digits k,i".into()));
            };
            Ok(((kk, i), v.to_rational().map_err(bad)?))
        })
        .collect()
}

impl SurfaceInput {
    pub fn parse(text: &str, toml_hint: bool) -> Result<Self, InputError> {
        let json = || serde_json::from_str::<SurfaceInput>(text).map_err(|e| e.to_string());
        let toml = || toml::from_str::<SurfaceInput>(text).map_err(|e| e.to_string());
        if toml_hint {
            toml().or_else(|e| json().map_err(|_| e))
        } else {
            json().or_else(|e| toml().map_err(|_| e))
        }
        .map_err(InputError::Syntax)
    }

    pub fn read(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path)?;
        let toml_hint = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
        Self::parse(&text, toml_hint)
    }

    /// `(α, β)` when given directly.
    pub fn moduli(&self) -> Result<Option<(Rational, Rational)>, InputError> {
        match (&self.alpha, &self.beta) {
            (Some(a), Some(b)) => {
                let c = |k: &str, v: &Literal| v.to_rational().map_err(|msg| InputError::Coefficient { key: k.into(), msg });
                Ok(Some((c("alpha", a)?, c("beta", b)?)))
            }
            (None, None) => Ok(None),
            _ => Err(InputError::Incomplete),
        }
    }

    /// The surface in the requested scalar type. With `alpha`/`beta` the normal
    /// form is built; quartic `b4i` entries are folded in as `φ`.
    pub fn surface<T: Scalar>(&self) -> Result<SurfaceJet<T>, InputError> {
        let a = table(&self.a, 'a')?;
        let b = table(&self.b, 'b')?;
        let conv = |t: Vec<((u8, u8), Rational)>| t.into_iter().map(|(k, v)| (k, T::from_rational(&v))).collect::<Vec<_>>();
        match self.moduli()? {
            Some((al, be)) => {
                if !a.is_empty() || b.iter().any(|((k, _), _)| *k != 4) {
                    return Err(InputError::Coefficient {
                        key: "a/b".into(),
                        msg: "with alpha/beta only quartic b4i terms are allowed".into(),
                    });
                }
                let phi = if b.is_empty() {
                    None
                } else {
                    let terms = b.iter().map(|((_, i), v)| ([4 - i, *i, 0], T::from_rational(v)));
                    Some(crate::jet::Jet::from_terms(2, 4, terms).map_err(GeometryError::from)?)
                };
                Ok(normal_form_surface(T::from_rational(&al), T::from_rational(&be), phi.as_ref())?)
            }
            None if a.is_empty() && b.is_empty() => Err(InputError::Incomplete),
            None => Ok(SurfaceJet::parabolic_chart(&conv(a), &conv(b))?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// `"p/q"` string for rationals, a JSON number for floats.
pub fn num<T: Scalar>(v: &T) -> Value {
    if T::EXACT {
        v.to_rational().map_or(Value::Null, |q| Value::String(format_rational(&q)))
    } else {
        float(v.to_f64())
    }
}

/// A JSON number, or `null` when not finite.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn json_normal_form() {
        let s = SurfaceInput::parse(r#"{"alpha": -1, "beta": "1"}"#, false).unwrap();
        let j: SurfaceJet<Rational> = s.surface().unwrap();
        assert_eq!(j.a(4, 4), int(-1));
        assert_eq!(j.b(3, 3), int(1));
    }

    #[test]
    fn toml_table_and_decimal() {
        let text = "[a]\n32 = 1\n44 = \"-1/2\"\n[b]\n33 = 0.25\n";
        let s = SurfaceInput::parse(text, true).unwrap();
        let j: SurfaceJet<Rational> = s.surface().unwrap();
        assert_eq!(j.a(4, 4), rat(-1, 2));
        assert_eq!(j.b(3, 3), rat(1, 4));
        assert_eq!(j.a(3, 2), int(1));
    }

    #[test]
    fn a33_surface_parses() {
        let s = SurfaceInput::parse(r#"{"a": {"32": 1, "33": "1/3", "44": -1}, "b": {"33": 1}}"#, false).unwrap();
        let j: SurfaceJet<Rational> = s.surface().unwrap();
        assert_eq!(j.a(3, 3), rat(1, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(SurfaceInput::parse(r#"{"alpha": 1}"#, false).unwrap().surface::<f64>(), Err(InputError::Incomplete)));
        assert!(SurfaceInput::parse(r#"{"a": {"3": 1}}"#, false).unwrap().surface::<f64>().is_err());
        assert!(SurfaceInput::parse(r#"{"gamma": 1}"#, false).is_err());
    }

    #[test]
    fn number_output() {
        assert_eq!(num(&rat(2, 5)), Value::String("2/5".into()));
        assert_eq!(num(&0.5f64), serde_json::json!(0.5));
    }
}
