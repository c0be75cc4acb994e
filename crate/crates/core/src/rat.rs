use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in `i64` are kept inline;
/// anything larger is promoted to a heap-allocated `BigRational`. The
/// representation is canonical (a value is `Small` whenever it can be), so
/// derived equality and hashing agree with numeric equality.
#[derive(Clone)]
pub enum Rat {
    Small { n: i64, d: i64 },
    Big(Box<BigRational>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

fn gcd128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Rat {
    pub const ZERO: Rat = Rat::Small { n: 0, d: 1 };
    pub const ONE: Rat = Rat::Small { n: 1, d: 1 };

    pub fn int(n: i64) -> Rat {
        Rat::Small { n, d: 1 }
    }

    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Rat {
        let (mut n, mut d) = (n, d);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small { n, d },
            _ => Rat::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Rat {
        // BigRational arithmetic keeps values reduced with a positive denominator
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small { n, d },
            _ => Rat::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small { n, d } => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small { n, .. } => BigInt::from(*n),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small { d, .. } => BigInt::from(*d),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small { n: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small { d, .. } => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rat::Small { n, .. } => n.signum() as i32,
            Rat::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Rat::Small { n, d } => Rat::from_i128(*d as i128, *n as i128),
            Rat::Big(b) => Rat::from_big(b.recip()),
        }
    }

    pub fn floor(&self) -> BigInt {
        match self {
            Rat::Small { n, d } => BigInt::from(n.div_floor(d)),
            Rat::Big(b) => b.floor().to_integer(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rat::Small { n, d: 1 } => Some(*n),
            _ => None,
        }
    }

    /// Reduced denominator as `i64`, if it fits.
    pub fn denom_i64(&self) -> Option<i64> {
        match self {
            Rat::Small { d, .. } => Some(*d),
            Rat::Big(b) => b.denom().to_i64(),
        }
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut r = Rat::ONE;
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::int(n as i64)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat::from_big(r)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rat::Small { n: a, d: b }, Rat::Small { n: c, d: e }) => a == c && b == e,
            (Rat::Big(x), Rat::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small { n, d } => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Rat::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small { n: a, d: b }, Rat::Small { n: c, d: e }) => {
                (*a as i128 * *e as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small { n, d: 1 } => write!(f, "{n}"),
            Rat::Small { n, d } => write!(f, "{n}/{d}"),
            Rat::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Rat::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRatError(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| err())?;
        let d: BigInt = den.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\", \"p\" or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rat, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat::from(BigInt::from(v)))
            }
        }
        d.deserialize_any(V)
    }
}

fn add(a: &Rat, b: &Rat) -> Rat {
    match (a, b) {
        (Rat::Small { n: p, d: q }, Rat::Small { n: r, d: s }) => {
            if q == s {
                Rat::from_i128(*p as i128 + *r as i128, *q as i128)
            } else {
                let (p, q, r, s) = (*p as i128, *q as i128, *r as i128, *s as i128);
                Rat::from_i128(p * s + r * q, q * s)
            }
        }
        _ => Rat::from_big(a.to_big() + b.to_big()),
    }
}

fn mul(a: &Rat, b: &Rat) -> Rat {
    match (a, b) {
        (Rat::Small { n: p, d: q }, Rat::Small { n: r, d: s }) => {
            Rat::from_i128(*p as i128 * *r as i128, *q as i128 * *s as i128)
        }
        _ => Rat::from_big(a.to_big() * b.to_big()),
    }
}

fn neg(a: &Rat) -> Rat {
    match a {
        Rat::Small { n, d } if *n != i64::MIN => Rat::Small { n: -n, d: *d },
        _ => Rat::from_big(-a.to_big()),
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                $body(self, o)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                $body(&self, &o)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                $body(&self, o)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, |a: &Rat, b: &Rat| add(a, &neg(b)));
binop!(Mul, mul, mul);
binop!(Div, div, |a: &Rat, b: &Rat| mul(a, &b.recip()));

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        neg(&self)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        neg(self)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        *self = add(self, o);
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, o: Rat) {
        *self = add(self, &o);
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        *self = add(self, &neg(o));
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, o: Rat) {
        *self = add(self, &neg(&o));
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, o: &Rat) {
        *self = mul(self, o);
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + b)
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::ZERO
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("6/4").to_string(), "3/2");
        assert_eq!(r("-4/-2").to_string(), "2");
        assert_eq!(r(" 7 ").to_string(), "7");
        assert_eq!(r("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn promotes_and_demotes() {
        let big = Rat::int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rat::Big(_)));
        let back = &sq / &big;
        assert!(matches!(back, Rat::Small { .. }));
        assert_eq!(back, big);
        let m = Rat::int(i64::MIN);
        assert_eq!(-(-m.clone()), m);
    }

    #[test]
    fn ordering_mixed() {
        let a = r("1/3");
        let b = r("340282366920938463463374607431768211457/1020847100762815390390123822295304634368");
        assert!(a < b);
        assert!(r("-1/2") < r("-1/3"));
    }

    #[test]
    fn serde_round_trip() {
        let v = vec![r("5/2"), r("-3"), r("0")];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["5/2","-3","0"]"#);
        let w: Vec<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(v, w);
        let z: Vec<Rat> = serde_json::from_str("[1, \"2/4\"]").unwrap();
        assert_eq!(z, vec![r("1"), r("1/2")]);
    }
}
