//! Exact ground-field arithmetic: rationals or residues modulo an odd prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// The rational numbers.
    Rational,
    /// The prime field `F_p`, `p` an odd prime.
    Prime(u32),
}

impl Field {
    /// Builds `F_p`, refusing 2 and composite moduli.
    pub fn prime(p: u32) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if p < 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Maps a rational number into the field; fails if the denominator vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = (q.numer() % &pb + &pb) % &pb;
                let den = (q.denom() % &pb + &pb) % &pb;
                if den.is_zero() {
                    return Err(Error::Parse {
                        line: 0,
                        col: 0,
                        msg: format!("denominator of {q} vanishes modulo {p}"),
                    });
                }
                let n = Scalar::Fp {
                    v: num.to_u32().unwrap_or(0),
                    p,
                };
                let d = Scalar::Fp {
                    v: den.to_u32().unwrap_or(0),
                    p,
                };
                Ok(&n * &d.inv())
            }
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Tonelli-Shanks.
fn fp_sqrt(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

/// An element of the ground field. Mixing elements of different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v as u64, (*p - 2) as u64, *p as u64) as u32,
                p: *p,
            },
        }
    }

    /// Rational value for `Q`, symmetric integer representative for `F_p`.
    /// A square root in the same field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => {
                if q.is_negative() {
                    return None;
                }
                let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
                (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Scalar::Q(BigRational::new(n, d)))
            }
            Scalar::Fp { v, p } => fp_sqrt(*v as u64, *p as u64).map(|r| Scalar::Fp { v: r as u32, p: *p }),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Q(q) => q.clone(),
            Scalar::Fp { v, p } => {
                let s = if *v > p / 2 {
                    *v as i64 - *p as i64
                } else {
                    *v as i64
                };
                BigRational::from_integer(BigInt::from(s))
            }
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative(&self) -> bool {
        self.to_rational().is_negative()
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

fn mismatch() -> ! {
    panic!("scalars from different fields")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        for p in [3u32, 5, 13, 101, 65537] {
            let f = Field::prime(p).unwrap();
            let squares = (0..p.min(500)).filter(|&a| f.from_i64(a as i64).sqrt().is_some()).count();
            assert_eq!(squares as u32, if p < 500 { p.div_ceil(2) } else { squares as u32 });
            for a in 1..p.min(200) {
                if let Some(r) = f.from_i64(a as i64).sqrt() {
                    assert_eq!(&r * &r, f.from_i64(a as i64));
                }
            }
        }
        let q = Field::Rational;
        let r = Field::Rational.from_rational(&BigRational::new(9.into(), 4.into())).unwrap();
        assert_eq!(r.sqrt().unwrap().to_string(), "3/2");
        assert!(q.from_i64(2).sqrt().is_none());
        assert!(q.from_i64(-4).sqrt().is_none());
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(101).unwrap();
        for n in 1..101 {
            let a = f.from_i64(n);
            assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn rejects_even_and_composite() {
        assert!(matches!(Field::prime(2), Err(Error::EvenPrime)));
        assert!(matches!(Field::prime(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn symmetric_display() {
        let f = Field::Prime(5);
        assert_eq!(f.from_i64(-1).to_string(), "-1");
        assert_eq!(f.from_i64(2).to_string(), "2");
        assert_eq!(Field::Rational.from_i64(-3).to_string(), "-3");
    }

    #[test]
    fn rational_into_prime() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(2));
        let h = Field::Prime(5).from_rational(&q).unwrap();
        assert_eq!(h, Field::Prime(5).from_i64(3));
    }
}
