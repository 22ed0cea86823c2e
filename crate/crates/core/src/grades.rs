//! Exact grades in `R^m`.
//!
//! All scalars are arbitrary-precision rationals kept in canonical form, so
//! equality is field equality and every order comparison is exact. Grades are
//! compared with the product order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number. Serialized as `"p/q"` (or `"p"` when `q = 1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numerator.into(), denominator.into())))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidScale(self.clone()));
        }
        Ok(Rational(self.0.recip()))
    }

    /// Largest integer bounded above by `self`.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Smallest integer bounded below by `self`.
    pub fn ceil(&self) -> BigInt {
        self.0.numer().div_ceil(self.0.denom())
    }

    pub fn half(&self) -> Self {
        Rational(&self.0 / BigRational::from_integer(2.into()))
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => Ok(Rational::from(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Largest integer `<= r`.
///
/// Panics if the result does not fit in an `i64`; integer windows in this
/// crate are always machine-sized.
pub fn floor_int(r: &Rational) -> i64 {
    r.floor().to_i64().expect("floor out of i64 range")
}

/// Floor division `n // m`: the largest `l` with `l * m <= n`.
pub fn floor_div(n: i64, m: i64) -> i64 {
    n.div_euclid(m)
}

/// `e_m(n) = e(n // m) * m`, where `e` fixes even numbers and sends odd `n` to `n - 1`.
pub fn even_reindex(n: i64, m: i64) -> i64 {
    assert!(m >= 1, "reindex block size must be positive");
    let q = floor_div(n, m);
    let e = if q.rem_euclid(2) == 0 { q } else { q - 1 };
    e * m
}

/// `o_m(n) = o(n // m) * m`, where `o` fixes odd numbers and sends even `n` to `n - 1`.
pub fn odd_reindex(n: i64, m: i64) -> i64 {
    assert!(m >= 1, "reindex block size must be positive");
    let q = floor_div(n, m);
    let o = if q.rem_euclid(2) == 1 { q } else { q - 1 };
    o * m
}

/// A point of `R^m` with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Grade(Vec<Rational>);

impl Grade {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Dimension { expected: 1, found: 0 });
        }
        Ok(Grade(coords))
    }

    pub fn zero(m: usize) -> Self {
        Grade(vec![Rational::zero(); m])
    }

    /// A grade with every coordinate equal to `value`.
    pub fn diagonal(m: usize, value: Rational) -> Self {
        Grade(vec![value; m])
    }

    pub fn scalar(value: Rational) -> Self {
        Grade(vec![value])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Grade(coords.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    fn same_arity(&self, other: &Grade) -> Result<()> {
        if self.m() != other.m() {
            return Err(Error::Dimension { expected: self.m(), found: other.m() });
        }
        Ok(())
    }

    /// Product order.
    pub fn leq(&self, other: &Grade) -> Result<bool> {
        self.same_arity(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    pub fn add(&self, other: &Grade) -> Result<Grade> {
        self.same_arity(other)?;
        Ok(Grade(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Grade) -> Result<Grade> {
        self.same_arity(other)?;
        Ok(Grade(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Multiplies every coordinate by a positive scale factor.
    pub fn scale(&self, c: &Rational) -> Result<Grade> {
        if !c.is_positive() {
            return Err(Error::InvalidScale(c.clone()));
        }
        Ok(Grade(self.0.iter().map(|a| a * c).collect()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &Grade) -> Result<Grade> {
        self.same_arity(other)?;
        Ok(Grade(self.0.iter().zip(&other.0).map(|(a, b)| a.clone().max(b.clone())).collect()))
    }

    /// Compares two grades of the same arity lexicographically. Used only for
    /// deterministic iteration orders, never as the poset order.
    pub fn lex_cmp(&self, other: &Grade) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    fn g(cs: &[(i64, i64)]) -> Grade {
        Grade::new(cs.iter().map(|&(p, d)| q(p, d)).collect()).unwrap()
    }

    #[test]
    fn product_order_examples() {
        let a = Grade::from_ints(&[0, 0]);
        let b = Grade::from_ints(&[1, 1]);
        assert!(a.leq(&b).unwrap());
        let c = Grade::from_ints(&[1, 0]);
        let d = Grade::from_ints(&[0, 1]);
        assert!(!c.leq(&d).unwrap());
        assert!(!d.leq(&c).unwrap());
        assert!(a.leq(&a).unwrap());
        assert!(matches!(a.leq(&Grade::from_ints(&[0])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn add_sub_examples() {
        let s = g(&[(1, 2), (1, 3)]).add(&g(&[(1, 2), (2, 3)])).unwrap();
        assert_eq!(s, Grade::from_ints(&[1, 1]));
        let a = g(&[(7, 3), (-1, 5)]);
        assert_eq!(a.add(&Grade::zero(2)).unwrap(), a);
        assert_eq!(Grade::from_ints(&[3]).sub(&Grade::from_ints(&[5])).unwrap(), Grade::from_ints(&[-2]));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(Grade::from_ints(&[3]).scale(&q(1, 1)).unwrap(), Grade::from_ints(&[3]));
        assert_eq!(g(&[(3, 2)]).scale(&q(2, 3)).unwrap(), Grade::from_ints(&[1]));
        assert_eq!(Grade::from_ints(&[-1]).scale(&q(1, 2)).unwrap(), g(&[(-1, 2)]));
        assert!(matches!(Grade::from_ints(&[1]).scale(&q(0, 1)), Err(Error::InvalidScale(_))));
        assert!(matches!(Grade::from_ints(&[1]).scale(&q(-1, 2)), Err(Error::InvalidScale(_))));
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_int(&q(3, 2)), 1);
        assert_eq!(floor_int(&q(-1, 2)), -1);
        assert_eq!(floor_int(&q(2, 1)), 2);
    }

    #[test]
    fn reindex_examples() {
        assert_eq!(even_reindex(3, 1), 2);
        assert_eq!(even_reindex(4, 1), 4);
        assert_eq!(odd_reindex(4, 1), 3);
        assert_eq!(odd_reindex(3, 1), 3);
        assert_eq!(even_reindex(5, 2), 4);
        assert_eq!(even_reindex(-1, 1), -2);
        assert_eq!(odd_reindex(0, 1), -1);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert_eq!(q(-4, 2).to_string(), "-2");
        assert_eq!("3/-6".parse::<Rational>().unwrap(), q(-1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let json = serde_json::to_string(&g(&[(1, 2), (3, 1)])).unwrap();
        assert_eq!(json, r#"["1/2","3"]"#);
        assert_eq!(serde_json::from_str::<Grade>(&json).unwrap(), g(&[(1, 2), (3, 1)]));
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..7).prop_map(|(p, d)| q(p, d))
    }

    fn grade2() -> impl Strategy<Value = Grade> {
        (rational(), rational()).prop_map(|(a, b)| Grade::new(vec![a, b]).unwrap())
    }

    proptest! {
        #[test]
        fn leq_is_a_partial_order(a in grade2(), b in grade2(), c in grade2()) {
            prop_assert!(a.leq(&a).unwrap());
            if a.leq(&b).unwrap() && b.leq(&a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if a.leq(&b).unwrap() && b.leq(&c).unwrap() {
                prop_assert!(a.leq(&c).unwrap());
            }
        }

        #[test]
        fn floor_brackets(r in rational()) {
            let f = Rational::from_int(floor_int(&r));
            prop_assert!(f <= r);
            prop_assert!(r < f + Rational::one());
        }

        #[test]
        fn reindex_laws(n in -60i64..60, m in 1i64..5) {
            let e = even_reindex(n, m);
            let o = odd_reindex(n, m);
            prop_assert!(e <= n && o <= n);
            prop_assert_eq!((e - o).abs(), m);
            prop_assert_eq!(even_reindex(e, m), e);
            prop_assert_eq!(odd_reindex(o, m), o);
            prop_assert!(even_reindex(n + 1, m) >= e);
            prop_assert!(odd_reindex(n + 1, m) >= o);
        }
    }
}
