//! Exact scalars: arbitrary-precision rationals and residues modulo an odd prime.
//!
//! A [`Field`] is a small copyable descriptor; a [`Scalar`] carries enough
//! information to do arithmetic on its own. Mixing scalars from different
//! fields is a programming error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive). Keeps products inside `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `q` or `fp:<odd prime>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let rest = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::Parse(format!("unknown field '{s}' (expected 'q' or 'fp:<p>')")))?;
        let p: u64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime '{rest}'")))?;
        Field::prime(p)
    }
}

fn is_prime(n: u64) -> bool {
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
    /// The prime field of order `p`. Rejects 2, composites and `p >= 2^31`.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p as u64,
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(Box::new(BigRational::zero())),
            Field::Prime(p) => Scalar::P { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => Scalar::P {
                v: n.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    pub fn bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(Box::new(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => Scalar::P {
                v: reduce_bigint(n, p),
                p,
            },
        }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::NotInvertible("0".into(), self));
        }
        self.rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Q(Box::new(q.clone()))),
            Field::Prime(p) => {
                let den = reduce_bigint(q.denom(), p);
                if den == 0 {
                    return Err(Error::NotInvertible(q.denom().to_string(), self));
                }
                let num = reduce_bigint(q.numer(), p);
                Ok(Scalar::P {
                    v: mul_mod(num, inv_mod(den, p), p),
                    p,
                })
            }
        }
    }

    /// Parses `"p/q"` or `"p"` (optionally signed).
    pub fn parse(self, s: &str) -> Result<Scalar> {
        self.rational(&parse_rational(s)?)
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn reduce_bigint(n: &BigInt, p: u32) -> u32 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u32().expect("residue fits")
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a != 0);
    // Fermat: a^(p-2).
    let mut result: u64 = 1;
    let mut base = a as u64;
    let mut e = p - 2;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    result as u32
}

/// An element of a [`Field`].
///
/// Rationals are boxed so that a scalar is two words wide; sparse matrices
/// over prime fields hold millions of them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Box<BigRational>),
    P { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::P { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::P { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::P { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(Box::new(q.recip())),
            Scalar::P { v, p } => Scalar::P {
                v: inv_mod(*v, *p),
                p: *p,
            },
        })
    }

    /// Rational value, when this scalar lives in the rationals.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::P { .. } => None,
        }
    }

    /// Image of this scalar under the canonical map into `target`.
    ///
    /// Rationals reduce into any prime field whose characteristic does not
    /// divide the denominator; residues only map to their own field.
    pub fn reduce_into(&self, target: Field) -> Result<Scalar> {
        match (self, target) {
            (Scalar::Q(q), t) => t.rational(q),
            (Scalar::P { p, .. }, Field::Prime(t)) if *p == t => Ok(self.clone()),
            (s, t) => Err(Error::FieldMismatch(s.field(), t)),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => f.write_str(&format_rational(q)),
            Scalar::P { v, .. } => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{}", format_rational(q)),
            Scalar::P { v, p } => write!(f, "{v} (mod {p})"),
        }
    }
}

#[cold]
#[inline(never)]
fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(a.as_ref() + b.as_ref())),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: q }) if p == q => {
                let s = *a as u64 + *b as u64;
                let m = *p as u64;
                Scalar::P {
                    v: if s >= m { (s - m) as u32 } else { s as u32 },
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(a.as_ref() - b.as_ref())),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: q }) if p == q => Scalar::P {
                v: if a >= b { a - b } else { (*a as u64 + *p as u64 - *b as u64) as u32 },
                p: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(a.as_ref() * b.as_ref())),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: q }) if p == q => Scalar::P {
                v: mul_mod(*a, *b, *p),
                p: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(Box::new(-a.as_ref())),
            Scalar::P { v, p } => Scalar::P {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => **a += b.as_ref(),
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => **a -= b.as_ref(),
            _ => *self = &*self - rhs,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Binomial coefficient `C(m, i)` for any integer `m`, computed in the integers.
pub fn binomial(m: i64, i: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..i as i64 {
        num *= BigInt::from(m - k);
        den *= BigInt::from(k + 1);
    }
    num / den
}

/// `(-1)^k` as a sign.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_characteristic_two() {
        assert!(matches!(Field::prime(2), Err(Error::CharacteristicTwo)));
        assert!(matches!(Field::prime(9), Err(Error::NotPrime(9))));
        assert!("fp:2".parse::<Field>().is_err());
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rationals);
    }

    #[test]
    fn rationals_are_canonical() {
        let q = Field::Rationals;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        let b = q.parse("3/2").unwrap();
        assert!((&a + &b).is_zero());
        assert_eq!((&b * &b).to_string(), "9/4");
    }

    #[test]
    fn prime_residues_are_canonical() {
        let f = Field::prime(7).unwrap();
        let half = f.parse("1/2").unwrap();
        assert_eq!(half.to_string(), "4");
        assert_eq!(f.int(-1).to_string(), "6");
        assert_eq!((&half + &half), f.one());
        assert!(f.parse("1/7").is_err());
        assert_eq!(f.int(3).inv().unwrap(), f.int(5));
    }

    #[test]
    fn binomials_follow_integer_convention() {
        assert_eq!(binomial(-1, 5), BigInt::from(-1));
        assert_eq!(binomial(-1, 4), BigInt::from(1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }

    #[test]
    fn reduction_commutes_with_arithmetic() {
        let f = Field::prime(1_000_003).unwrap();
        let q = Field::Rationals;
        let a = q.parse("17/9").unwrap();
        let b = q.parse("-5/12").unwrap();
        let lhs = (&(&a * &b) + &a).reduce_into(f).unwrap();
        let rhs = &(&a.reduce_into(f).unwrap() * &b.reduce_into(f).unwrap()) + &a.reduce_into(f).unwrap();
        assert_eq!(lhs, rhs);
    }
}
