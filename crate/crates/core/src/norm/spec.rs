use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::NormError;
use crate::vec2::Vec2;

/// A `p`-norm exponent. Infinity is written as the string `"inf"` in JSON.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent(pub f64);

impl Exponent {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exponent;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exponent, E> {
                Ok(Exponent(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exponent, E> {
                parse_exponent(v).ok_or_else(|| E::custom(format!("bad exponent {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

fn parse_exponent(s: &str) -> Option<Exponent> {
    match s.trim() {
        "inf" | "infinity" | "Inf" | "∞" => Some(Exponent(f64::INFINITY)),
        t => t.parse().ok().map(Exponent),
    }
}

/// Serializable norm descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NormSpec {
    P { p: Exponent },
    Polygonal { vertices: Vec<Vec2> },
    Blend { base: Box<NormSpec>, lambda: f64 },
}

impl NormSpec {
    pub fn from_flag(flag: &str) -> Result<Self, NormError> {
        let err = |msg: &str| NormError::Parse(flag.to_string(), msg.to_string());
        let (head, rest) = flag.split_once(':').ok_or_else(|| err("missing ':'"))?;
        match head {
            "p" => parse_exponent(rest)
                .map(|p| NormSpec::P { p })
                .ok_or_else(|| err("bad exponent")),
            "poly" => {
                if let Some(path) = rest.strip_prefix('@') {
                    let text = std::fs::read_to_string(path).map_err(|e| err(&e.to_string()))?;
                    if let Ok(spec) = serde_json::from_str::<NormSpec>(&text) {
                        return Ok(spec);
                    }
                    let vertices: Vec<Vec2> =
                        serde_json::from_str(&text).map_err(|e| err(&e.to_string()))?;
                    return Ok(NormSpec::Polygonal { vertices });
                }
                let vertices = rest
                    .split(';')
                    .map(|pair| {
                        let (x, y) = pair.split_once(',').ok_or_else(|| err("vertex needs x,y"))?;
                        Ok(Vec2::new(
                            x.trim().parse().map_err(|_| err("bad coordinate"))?,
                            y.trim().parse().map_err(|_| err("bad coordinate"))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, NormError>>()?;
                Ok(NormSpec::Polygonal { vertices })
            }
            "blend" => {
                let (inner, lambda) = rest.rsplit_once(',').ok_or_else(|| err("blend needs ,lambda"))?;
                let lambda = lambda.trim().parse().map_err(|_| err("bad lambda"))?;
                Ok(NormSpec::Blend {
                    base: Box::new(NormSpec::from_flag(inner)?),
                    lambda,
                })
            }
            _ => Err(err("unknown norm family")),
        }
    }

    pub fn to_flag(&self) -> String {
        match self {
            NormSpec::P { p } if p.0.is_infinite() => "p:inf".into(),
            NormSpec::P { p } => format!("p:{}", p.0),
            NormSpec::Polygonal { vertices } => {
                let body: Vec<String> = vertices.iter().map(|v| format!("{},{}", v.x, v.y)).collect();
                format!("poly:{}", body.join(";"))
            }
            NormSpec::Blend { base, lambda } => format!("blend:{},{}", base.to_flag(), lambda),
        }
    }
}
