//! Exact rationals with an `i64` fast path.
//!
//! Almost every coefficient that shows up while checking algebraic laws is a
//! small integer, so arithmetic is attempted on `Ratio<i64>` first and only
//! promoted to arbitrary precision when a checked operation overflows.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational::Small(Ratio::new(num, den))
    }

    pub fn from_int(n: i64) -> Rational {
        Rational::Small(Ratio::from_integer(n))
    }

    pub fn zero() -> Rational {
        Rational::from_int(0)
    }

    pub fn one() -> Rational {
        Rational::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_one(),
            Rational::Big(r) => r.is_one(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_integer(),
            Rational::Big(r) => r.is_integer(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => {
                BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(r) => r.clone(),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(Ratio::new_raw(n, d)),
            _ => Rational::Big(r),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rational::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Rational> {
        BigRational::from_float(x).map(Rational::from_big)
    }

    pub fn pow(&self, mut e: u32) -> Rational {
        let mut base = self.clone();
        let mut acc = Rational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Rational {
        &Rational::one() / self
    }

    pub fn abs(&self) -> Rational {
        match self {
            Rational::Small(r) => match r.numer().checked_abs() {
                Some(n) => Rational::Small(Ratio::new_raw(n, *r.denom())),
                None => Rational::Big(self.to_big().abs()),
            },
            Rational::Big(r) => Rational::Big(r.abs()),
        }
    }

    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        match self {
            Rational::Small(r) => Some(*r.numer()),
            Rational::Big(r) => r.numer().to_i64(),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                if let (Rational::Small(a), Rational::Small(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(b) {
                        return Rational::Small(r);
                    }
                }
                Rational::from_big(self.to_big().$method(rhs.to_big()))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Rational::Small(a), Rational::Small(b)) = (self, rhs) {
            if let Some(r) = a.checked_div(b) {
                return Rational::Small(r);
            }
        }
        Rational::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) => match r.numer().checked_neg() {
                Some(n) => Rational::Small(Ratio::new_raw(n, *r.denom())),
                None => Rational::Big(-self.to_big()),
            },
            Rational::Big(r) => Rational::Big(-r.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Rational) -> bool {
        match (self, other) {
            // Both sides are kept in lowest terms, so field equality suffices.
            (Rational::Small(a), Rational::Small(b)) => {
                a.numer() == b.numer() && a.denom() == b.denom()
            }
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Values that fit in i64 are always stored as Small.
        match self {
            Rational::Small(r) => {
                0u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Rational::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Rational::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `n`, `p/q` and decimal literals such as `-0.125` (converted exactly).
    fn from_str(s: &str) -> Result<Rational, ParseRationalError> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Rational::from_big(BigRational::new(p, q)));
        }
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let all: BigInt = format!("{}{}", int_part, frac_part)
            .parse()
            .map_err(|_| err())?;
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let mut value = if scale >= 0 {
            BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
        };
        if neg {
            value = -value;
        }
        Ok(Rational::from_big(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_to_big() {
        let a = Rational::from_int(i64::MAX);
        let b = &a + &Rational::one();
        assert!(matches!(b, Rational::Big(_)));
        assert_eq!(&b - &Rational::one(), a);
        assert!(matches!(&b - &Rational::one(), Rational::Small(_)));
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("-0.125".parse::<Rational>().unwrap(), Rational::new(-1, 8));
        assert_eq!("2.5e1".parse::<Rational>().unwrap(), Rational::from_int(25));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_int(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "-3", "5/7", "-1/2"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn pow_and_order() {
        assert_eq!(Rational::new(-2, 3).pow(3), Rational::new(-8, 27));
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        let big = Rational::from_int(3).pow(50);
        assert!(matches!(big, Rational::Big(_)));
        assert!(big > Rational::from_int(i64::MAX));
    }
}
