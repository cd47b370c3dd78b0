//! Exact scalars: arbitrary-precision rationals and residues modulo an odd prime.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// `F_p` for an odd prime `p`.
    pub fn prime(p: u32) -> Result<Field> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// Decodes the `prime` field of serialized presentations: 0 means `Q`.
    pub fn from_characteristic(c: u32) -> Result<Field> {
        if c == 0 {
            Ok(Field::Rational)
        } else {
            Field::prime(c)
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(BigRational::zero()),
            Field::Prime(p) => Coeff::Fp(0, *p),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Coeff::Fp(n.rem_euclid(*p as i64) as u32, *p),
        }
    }

    /// `num / den`; over `F_p` fails when `p | den`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Coeff> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        self.convert(&Coeff::Q(q))
    }

    /// Moves a scalar into this field. `Q -> F_p` requires a `p`-local rational.
    pub fn convert(&self, c: &Coeff) -> Result<Coeff> {
        match (self, c) {
            (Field::Rational, Coeff::Q(_)) => Ok(c.clone()),
            (Field::Prime(p), Coeff::Fp(_, q)) if p == q => Ok(c.clone()),
            (Field::Prime(p), Coeff::Q(r)) => {
                let pb = BigInt::from(*p);
                let den = r.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::NotPLocal {
                        value: r.to_string(),
                        p: *p,
                    });
                }
                let num = r.numer().mod_floor(&pb).to_u64().unwrap_or(0) as u32;
                let den = den.to_u64().unwrap_or(0) as u32;
                Ok(Coeff::Fp(mul_mod(num, inv_mod(den, *p), *p), *p))
            }
            (target, c) => Err(Error::FieldMismatch {
                expected: *target,
                found: c.field(),
            }),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Coeff> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coefficient `{s}`"));
        let q = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
        };
        self.convert(&Coeff::Q(q))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

/// A field element. `Fp(value, p)` keeps `0 <= value < p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Fp(u32, u32),
}

impl Coeff {
    pub fn field(&self) -> Field {
        match self {
            Coeff::Q(_) => Field::Rational,
            Coeff::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp(v, _) => *v == 1,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a + b),
            (Coeff::Fp(a, p), Coeff::Fp(b, q)) => {
                debug_assert_eq!(p, q);
                let s = a + b;
                Coeff::Fp(if s >= *p { s - p } else { s }, *p)
            }
            _ => panic!("mixed-field addition"),
        }
    }

    pub fn add_assign(&mut self, other: &Coeff) {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => *a += b,
            (Coeff::Fp(a, p), Coeff::Fp(b, _)) => {
                let s = *a + b;
                *a = if s >= *p { s - *p } else { s };
            }
            _ => panic!("mixed-field addition"),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Fp(a, p) => Coeff::Fp(if *a == 0 { 0 } else { p - a }, *p),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Fp(a, p), Coeff::Fp(b, q)) => {
                debug_assert_eq!(p, q);
                Coeff::Fp(mul_mod(*a, *b, *p), *p)
            }
            _ => panic!("mixed-field multiplication"),
        }
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Q(a) => Coeff::Q(a.recip()),
            Coeff::Fp(a, p) => Coeff::Fp(inv_mod(*a, *p), *p),
        })
    }

    /// Multiplication by an integer.
    pub fn scale(&self, n: i64) -> Coeff {
        self.mul(&self.field().from_i64(n))
    }

    /// `p`-local check for rationals; always true over `F_p`.
    pub fn is_p_local(&self, p: u32) -> bool {
        match self {
            Coeff::Q(q) => !q.denom().is_multiple_of(&BigInt::from(p)),
            Coeff::Fp(..) => true,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Q(q) => Some(q),
            Coeff::Fp(..) => None,
        }
    }

    /// Signed representative: `F_p` residues above `p/2` print as negatives.
    pub fn signed_repr(&self) -> (bool, String) {
        match self {
            Coeff::Q(q) => {
                if q.is_negative() {
                    (true, (-q).to_string())
                } else {
                    (false, q.to_string())
                }
            }
            Coeff::Fp(v, p) => {
                if *v > p / 2 {
                    (true, (p - v).to_string())
                } else {
                    (false, v.to_string())
                }
            }
        }
    }

    /// Canonical string used by serialization (`F_p` residues in `0..p`).
    pub fn to_canonical(&self) -> String {
        match self {
            Coeff::Q(q) => q.to_string(),
            Coeff::Fp(v, _) => v.to_string(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, s) = self.signed_repr();
        if neg {
            write!(f, "-{s}")
        } else {
            write!(f, "{s}")
        }
    }
}
