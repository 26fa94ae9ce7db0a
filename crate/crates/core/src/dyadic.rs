//! Dyadic resolutions `ε = 2^-k`.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::num;

/// A resolution `ε = 2^-k`, stored by its exponent so nets are reproducible bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ResolutionRepr", into = "ResolutionRepr")]
pub struct Resolution(u32);

pub const MAX_EXPONENT: u32 = 30;

impl Resolution {
    pub fn new(exponent: u32) -> Result<Self, Error> {
        if exponent > MAX_EXPONENT {
            return Err(Error::InvalidArgument(format!(
                "resolution exponent {exponent} exceeds {MAX_EXPONENT}"
            )));
        }
        Ok(Resolution(exponent))
    }

    pub fn exponent(self) -> u32 {
        self.0
    }

    pub fn eps(self) -> f64 {
        num::powi2(-(self.0 as i32))
    }

    /// `1/ε` as an integer.
    pub fn inverse(self) -> usize {
        1usize << self.0
    }

    /// Recovers the exponent from an exactly dyadic `ε ∈ (0, 1]`.
    pub fn from_eps(eps: f64) -> Result<Self, Error> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::NotDyadic(format!("{eps}")));
        }
        let (mant, exp) = libm::frexp(eps);
        if mant != 0.5 {
            return Err(Error::NotDyadic(format!("{eps}")));
        }
        Resolution::new((1 - exp) as u32)
    }

    /// Halves the resolution `k` times (finer net).
    pub fn finer(self, k: u32) -> Result<Self, Error> {
        Resolution::new(self.0 + k)
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^-{}", self.0)
    }
}

/// Parses `2^-k` exactly. Plain decimals are accepted only when exactly dyadic.
impl FromStr for Resolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("2^-") {
            let k: u32 = rest.parse().map_err(|_| Error::NotDyadic(s.into()))?;
            return Resolution::new(k);
        }
        if t == "1" || t == "2^0" {
            return Ok(Resolution(0));
        }
        let v: f64 = t.parse().map_err(|_| Error::NotDyadic(s.into()))?;
        Resolution::from_eps(v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ResolutionRepr {
    Text(alloc::string::String),
    Number(f64),
}

impl TryFrom<ResolutionRepr> for Resolution {
    type Error = Error;
    fn try_from(r: ResolutionRepr) -> Result<Self, Error> {
        match r {
            ResolutionRepr::Text(s) => s.parse(),
            ResolutionRepr::Number(v) => Resolution::from_eps(v),
        }
    }
}

impl From<Resolution> for ResolutionRepr {
    fn from(r: Resolution) -> Self {
        ResolutionRepr::Text(format!("{r}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_syntax() {
        let r: Resolution = "2^-8".parse().unwrap();
        assert_eq!(r.exponent(), 8);
        assert_eq!(r.eps(), 1.0 / 256.0);
        assert_eq!(r.inverse(), 256);
    }

    #[test]
    fn decimal_must_be_dyadic() {
        assert_eq!("0.25".parse::<Resolution>().unwrap().exponent(), 2);
        assert!("0.3".parse::<Resolution>().is_err());
        assert!("2^-x".parse::<Resolution>().is_err());
        assert!("-0.5".parse::<Resolution>().is_err());
    }

    #[test]
    fn from_eps_roundtrip() {
        for k in 0..20 {
            let r = Resolution::new(k).unwrap();
            assert_eq!(Resolution::from_eps(r.eps()).unwrap(), r);
        }
    }
}
