use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::BuildError;

/// A non-negative rational `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, BuildError> {
        if den == 0 {
            return Err(BuildError::BadRational(format!("{num}/0")));
        }
        let g = num.gcd(&den);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn integer(k: u64) -> Self {
        Self { num: k, den: 1 }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn mul_int(self, k: u64) -> Self {
        Self::new(self.num * k, self.den).expect("nonzero denominator")
    }

    pub fn div_int(self, k: u64) -> Self {
        Self::new(self.num, self.den * k).expect("nonzero denominator")
    }

    /// Continued-fraction convergents of `x >= 0`, at most `max_terms` of them,
    /// stopping once a denominator would exceed `max_den`.
    pub fn convergents(x: f64, max_den: u64, max_terms: usize) -> Vec<Rational> {
        let mut out = Vec::new();
        if !(x >= 0.0) || !x.is_finite() {
            return out;
        }
        let (mut h0, mut h1) = (0u64, 1u64);
        let (mut k0, mut k1) = (1u64, 0u64);
        let mut rest = x;
        for _ in 0..max_terms {
            let a = rest.floor();
            if a > 1e15 {
                break;
            }
            let a = a as u64;
            let (Some(h2), Some(k2)) = (
                a.checked_mul(h1).and_then(|v| v.checked_add(h0)),
                a.checked_mul(k1).and_then(|v| v.checked_add(k0)),
            ) else {
                break;
            };
            if k2 > max_den {
                break;
            }
            out.push(Rational::new(h2, k2).expect("k2 > 0"));
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let frac = rest - a as f64;
            if frac < 1e-12 {
                break;
            }
            rest = 1.0 / frac;
        }
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = BuildError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BuildError::BadRational(s.to_string());
        match s.trim().split_once('/') {
            Some((n, d)) => Rational::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(Rational::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl TryFrom<String> for Rational {
    type Error = BuildError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces() {
        let r = Rational::new(6, 4).unwrap();
        assert_eq!((r.num(), r.den()), (3, 2));
        assert_eq!(Rational::new(0, 7).unwrap(), Rational::ZERO);
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn parses() {
        assert_eq!("2/1".parse::<Rational>().unwrap(), Rational::integer(2));
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::integer(3));
        assert_eq!("10/4".parse::<Rational>().unwrap(), Rational::new(5, 2).unwrap());
        assert!("x/2".parse::<Rational>().is_err());
        assert!("-1/2".parse::<Rational>().is_err());
    }

    #[test]
    fn sqrt2_convergents() {
        let c = Rational::convergents(2f64.sqrt(), 20, 32);
        let s: Vec<String> = c.iter().map(|r| r.to_string()).collect();
        assert_eq!(s, ["1/1", "3/2", "7/5", "17/12"]);
    }

    #[test]
    fn exact_values_terminate() {
        assert_eq!(Rational::convergents(0.75, 100, 32).last().unwrap().to_string(), "3/4");
        assert_eq!(Rational::convergents(3.0, 100, 32), vec![Rational::integer(3)]);
    }

    #[test]
    fn serde_as_string() {
        let r = Rational::new(7, 5).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"7/5\"");
        assert_eq!(serde_json::from_str::<Rational>("\"7/5\"").unwrap(), r);
    }
}
