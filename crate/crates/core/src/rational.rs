//! Exact rationals for density reports.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// An exact rational that serializes as `{"exact": "p/q", "approx": f64}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn from_counts(count: u128, size: u128) -> Self {
        debug_assert!(size > 0);
        Exact::new(count, size)
    }

    pub fn zero() -> Self {
        Exact(BigRational::zero())
    }

    pub fn integer(n: i128) -> Self {
        Exact::new(n, 1)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Exact {
        if self.0 < BigRational::zero() {
            Exact(-self.0.clone())
        } else {
            self.clone()
        }
    }

    /// Parses `p/q` or `p`, and decimals like `0.02`.
    pub fn parse(s: &str) -> Option<Exact> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            return Some(Exact(BigRational::new(p, q)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches('-'), frac);
            let mut p: BigInt = digits.parse().ok()?;
            if neg {
                p = -p;
            }
            let q = num::pow(BigInt::from(10), frac.len());
            return Some(Exact(BigRational::new(p, q)));
        }
        let p: BigInt = s.parse().ok()?;
        Some(Exact(BigRational::from_integer(p)))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl std::ops::Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        Exact(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        Exact(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        Exact(&self.0 * &rhs.0)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Exact", 2)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}
