//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Nothing in the engine ever touches floating point. Rationals use a small
//! `i64` representation and fall back to arbitrary precision on overflow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A matrix entry as it appears in JSON: a bare integer or a `"num/den"`
/// string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub fn parse_ratio(&self) -> Result<(BigInt, BigInt)> {
        match self {
            Entry::Int(v) => Ok((BigInt::from(*v), BigInt::one())),
            Entry::Text(s) => {
                let s = s.trim();
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n = BigInt::from_str(n).map_err(|_| Error::Parse(format!("bad entry `{s}`")))?;
                let d = BigInt::from_str(d).map_err(|_| Error::Parse(format!("bad entry `{s}`")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok((n, d))
            }
        }
    }
}

/// Exact field arithmetic used by every linear-algebra kernel.
pub trait Scalar:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn field_name() -> String;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `None` when the denominator vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn to_entry(&self) -> Entry;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_entry(e: &Entry) -> Result<Self> {
        let (n, d) = e.parse_ratio()?;
        Self::from_ratio(&n, &d).ok_or_else(|| {
            Error::Parse(format!(
                "entry {e:?} is undefined over {}",
                Self::field_name()
            ))
        })
    }

    /// Rank of a matrix. Implementations may override with a specialised
    /// elimination; the default is Gauss-Jordan over the field.
    fn rank(m: &crate::matrix::Matrix<Self>) -> usize {
        m.rref().pivots.len()
    }

    /// Rescales a nonzero vector to a canonical representative of its
    /// line. Over `Q` this clears denominators and common factors; other
    /// fields leave the vector alone.
    fn make_primitive(_v: &mut [Self]) {}
}

// ---------------------------------------------------------------------------
// Rationals

/// Exact rational number. Normalised: `den > 0`, `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Q {
    Small(i64, i64),
    Big(BigRational),
}

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Q::Small(n, d),
            _ => Q::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Q::Small(n, d),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(r) => r.denom().clone(),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Q::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Scalar for Q {
    fn field_name() -> String {
        "Q".into()
    }

    fn zero() -> Self {
        Q::Small(0, 1)
    }

    fn one() -> Self {
        Q::Small(1, 1)
    }

    fn from_i64(v: i64) -> Self {
        Q::Small(v, 1)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Q::from_big(BigRational::new(num.clone(), den.clone())))
    }

    #[inline]
    fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Q::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b)) {
                    (Some(x), Some(y)) => match x.checked_add(y) {
                        Some(n) => Q::from_i128(n, b * d),
                        None => Q::from_big(self.to_big() + other.to_big()),
                    },
                    _ => Q::from_big(self.to_big() + other.to_big()),
                }
            }
            _ => Q::from_big(self.to_big() + other.to_big()),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::zero(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Q::Small(p, 1);
                    }
                }
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Q::Small(n, d) => match n.checked_neg() {
                Some(m) => Q::Small(m, *d),
                None => Q::from_big(-self.to_big()),
            },
            Q::Big(r) => Q::from_big(-r.clone()),
        }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Q::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::Big(r) => Q::from_big(r.recip()),
        }
    }

    fn to_entry(&self) -> Entry {
        match self {
            Q::Small(n, 1) => Entry::Int(*n),
            other => Entry::Text(other.to_string()),
        }
    }

    fn rank(m: &crate::matrix::Matrix<Self>) -> usize {
        crate::matrix::bareiss_rank(m)
    }

    fn make_primitive(v: &mut [Self]) {
        let mut l = BigInt::one();
        for q in v.iter() {
            l = l.lcm(&q.denom());
        }
        let mut g = BigInt::zero();
        for q in v.iter() {
            g = g.gcd(&(q.numer() * &l / q.denom()));
        }
        if g.is_zero() {
            return;
        }
        let scale = Q::from_big(BigRational::new(l, g));
        for q in v.iter_mut() {
            *q = q.mul(&scale);
        }
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// Element of `F_P`, stored as its canonical representative in `[0, P)`.
/// `P` must be prime and below `2^32` so products fit in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn field_name() -> String {
        format!("F{P}")
    }

    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1 % P)
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let p = BigInt::from(P);
        let n = num.mod_floor(&p).to_u64().expect("reduced");
        let d = den.mod_floor(&p).to_u64().expect("reduced");
        if d == 0 {
            return None;
        }
        Some(Fp(n).mul(&Fp(d).inv()))
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn add(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Fp(if s >= P { s - P } else { s })
    }

    #[inline]
    fn sub(&self, other: &Self) -> Self {
        Fp(if self.0 >= other.0 {
            self.0 - other.0
        } else {
            self.0 + P - other.0
        })
    }

    #[inline]
    fn mul(&self, other: &Self) -> Self {
        Fp(self.0 * other.0 % P)
    }

    #[inline]
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }

    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }

    fn to_entry(&self) -> Entry {
        Entry::Int(self.0 as i64)
    }
}

/// Coefficient field selected at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldChoice {
    Rationals,
    Prime(u64),
}

/// Primes for which a prime-field instantiation is compiled in.
pub const SUPPORTED_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 101, 32003, 65521, 2147483647];

impl FromStr for FieldChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rationals" || t == "qq" {
            return Ok(FieldChoice::Rationals);
        }
        let digits = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("f"))
            .or_else(|| t.strip_prefix("p"))
            .unwrap_or(&t);
        match digits.parse::<u64>() {
            Ok(p) if SUPPORTED_PRIMES.contains(&p) => Ok(FieldChoice::Prime(p)),
            _ => Err(Error::UnsupportedField(s.to_string())),
        }
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rationals => write!(f, "Q"),
            FieldChoice::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Runs `$body` with the type alias `$S` bound to the scalar type of the
/// selected field.
#[macro_export]
macro_rules! with_field {
    ($choice:expr, $S:ident => $body:expr) => {{
        use $crate::field::{FieldChoice, Fp, Q};
        match $choice {
            FieldChoice::Rationals => {
                type $S = Q;
                $body
            }
            FieldChoice::Prime(2) => {
                type $S = Fp<2>;
                $body
            }
            FieldChoice::Prime(3) => {
                type $S = Fp<3>;
                $body
            }
            FieldChoice::Prime(5) => {
                type $S = Fp<5>;
                $body
            }
            FieldChoice::Prime(7) => {
                type $S = Fp<7>;
                $body
            }
            FieldChoice::Prime(11) => {
                type $S = Fp<11>;
                $body
            }
            FieldChoice::Prime(13) => {
                type $S = Fp<13>;
                $body
            }
            FieldChoice::Prime(101) => {
                type $S = Fp<101>;
                $body
            }
            FieldChoice::Prime(32003) => {
                type $S = Fp<32003>;
                $body
            }
            FieldChoice::Prime(65521) => {
                type $S = Fp<65521>;
                $body
            }
            FieldChoice::Prime(2147483647) => {
                type $S = Fp<2147483647>;
                $body
            }
            FieldChoice::Prime(p) => panic!("prime {p} is not compiled in"),
        }
    }};
}

/// Converts a rational to an `i64` when it is an integer that fits.
pub fn q_to_i64(q: &Q) -> Option<i64> {
    match q {
        Q::Small(n, 1) => Some(*n),
        Q::Big(r) if r.is_integer() => r.numer().to_i64(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalisation() {
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!(Q::new(3, 1).to_string(), "3");
        assert_eq!(Q::new(-6, 4).to_string(), "-3/2");
        assert_eq!(Q::new(1, 3).add(&Q::new(2, 3)), Q::one());
    }

    #[test]
    fn rational_overflow_promotes() {
        let big = Q::from_i64(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Q::Big(_)));
        let back = sq.mul(&big.inv());
        assert_eq!(back, big);
        assert!(matches!(back, Q::Small(_, _)));
    }

    #[test]
    fn prime_field_inverse() {
        for v in 1..7 {
            let x = Fp::<7>::new(v);
            assert_eq!(x.mul(&x.inv()), Fp::<7>::one());
        }
        let half = Fp::<7>::from_entry(&Entry::Text("1/2".into())).unwrap();
        assert_eq!(half, Fp::<7>::new(4));
        assert!(Fp::<7>::from_entry(&Entry::Text("1/7".into())).is_err());
    }

    #[test]
    fn entries_round_trip() {
        let q = Q::new(-5, 3);
        assert_eq!(Q::from_entry(&q.to_entry()).unwrap(), q);
        assert_eq!(Q::from_entry(&Entry::Int(4)).unwrap(), Q::from_i64(4));
    }

    #[test]
    fn field_choice_parsing() {
        assert_eq!("q".parse::<FieldChoice>().unwrap(), FieldChoice::Rationals);
        assert_eq!("fp:7".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(7));
        assert_eq!("F101".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(101));
        assert!("fp:9".parse::<FieldChoice>().is_err());
    }
}
