//! Exact integer and rational arithmetic, plus the scalar traits the rest of
//! the crate is generic over.
//!
//! `Integer` and `Rational` are the `num` big-number types. `Ratio` keeps its
//! values reduced with a positive denominator, so structural equality is
//! value equality.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// A commutative ring with an embedding of the integers.
///
/// Implemented for the exact types, the primitive floats, and `Poly<T>`, so
/// series and transforms can run over any of them.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: &Integer) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_int(&Integer::from(n))
    }
}

/// A ring with exact (or, for floats, rounded) division by nonzero elements.
pub trait Field: Ring + Div<Output = Self> {}

impl<T: Ring + Div<Output = T>> Field for T {}

impl Ring for Integer {
    fn from_int(n: &Integer) -> Self {
        n.clone()
    }
}

impl Ring for Rational {
    fn from_int(n: &Integer) -> Self {
        Rational::from_integer(n.clone())
    }
}

impl Ring for f64 {
    fn from_int(n: &Integer) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
}

impl Ring for f32 {
    fn from_int(n: &Integer) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `true` when `q` is reduced with a positive denominator.
pub fn is_canonical(q: &Rational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational> {
    let out = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    };
    debug_assert!(is_canonical(&out));
    Ok(out)
}

pub fn factorial(n: u64) -> Integer {
    (2..=n).fold(Integer::one(), |acc, i| acc * i)
}

/// `n!` for a signed argument; negative `n` is a domain error.
pub fn factorial_checked(n: i64) -> Result<Integer> {
    u64::try_from(n)
        .map(factorial)
        .map_err(|_| Error::Domain(format!("factorial of negative integer {n}")))
}

/// Falling factorial `x (x-1) ... (x-k+1)`, with the empty product equal to one.
pub fn falling_factorial<T: Ring>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc = acc * term.clone();
        term = term - T::one();
    }
    acc
}

/// Binomial coefficient with the generalized upper argument.
///
/// `k < 0` gives 0. For `n >= 0` and `k > n` the falling factorial vanishes,
/// so the result is 0 as well; negative `n` uses `n (n-1) ... (n-k+1) / k!`.
pub fn binomial(n: i64, k: i64) -> Integer {
    if k < 0 {
        return Integer::zero();
    }
    if n >= 0 && k > n {
        return Integer::zero();
    }
    let k = if n >= 0 { k.min(n - k) } else { k };
    let mut acc = Integer::one();
    for i in 0..k {
        acc *= Integer::from(n - i);
        acc /= Integer::from(i + 1);
    }
    acc
}

/// `C(x, k)` for a rational upper argument.
pub fn binomial_rational(x: &Rational, k: usize) -> Rational {
    falling_factorial(x, k) / Rational::from_integer(factorial(k as u64))
}

/// `base^exp` by repeated squaring; `0^0 = 1`.
pub fn int_pow<T: Ring>(base: &T, exp: u32) -> T {
    let mut result = T::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * sq.clone();
        }
        e >>= 1;
        if e > 0 {
            sq = sq.clone() * sq;
        }
    }
    result
}

/// `(-1)^k` in any ring.
pub fn sign<T: Ring>(k: usize) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Parses `"p/q"` or `"p"`. Non-reduced input is normalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => Integer::from_str(t).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = Integer::from_str(p.trim()).map_err(|_| bad())?;
            let q = Integer::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapters encoding rationals as `"p/q"` strings.
pub mod serde_rational {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{de, Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational, Rational};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_rational(s).map_err(de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fraction_arithmetic() {
        let r = rat_arith(&rat(1, 2), &rat(1, 3), ArithOp::Add).unwrap();
        assert_eq!(r, rat(5, 6));
        let x = rat(-7, 9);
        assert_eq!(rat_arith(&x, &rat(0, 1), ArithOp::Add).unwrap(), x);
        assert_eq!(
            rat_arith(&x, &Rational::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn input_is_normalized() {
        let q = parse_rational("2/4").unwrap();
        assert_eq!(q, rat(1, 2));
        assert_eq!(format_rational(&q), "1/2");
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational("0/7").unwrap()), "0");
        assert!(is_canonical(&q));
    }

    #[test]
    fn bad_literals() {
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/2/3").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), Integer::one());
        assert_eq!(factorial(5), Integer::from(120));
        let oracle = (1..=20u64).product::<u64>();
        assert_eq!(factorial(20), Integer::from(oracle));
        assert_eq!(factorial(20).to_string(), "2432902008176640000");
        assert!(factorial_checked(-1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Integer::from(6));
        for n in -5..10 {
            assert_eq!(binomial(n, 0), Integer::one());
        }
        // factorial ratio (2j)!/(j!)^2 at j = 3
        let ratio = factorial(6) / (factorial(3) * factorial(3));
        assert_eq!(ratio, Integer::from(20));
        assert_eq!(binomial(6, 3), ratio);
        assert_eq!(binomial(3, 5), Integer::zero());
        assert_eq!(binomial(3, -1), Integer::zero());
        // C(-1, k) = (-1)^k, C(-2, 3) = -4
        assert_eq!(binomial(-1, 7), Integer::from(-1));
        assert_eq!(binomial(-2, 3), Integer::from(-4));
    }

    #[test]
    fn generalized_binomial_agrees_with_integer_one() {
        for n in -6i64..12 {
            for k in 0..10usize {
                assert_eq!(
                    binomial_rational(&int(n), k),
                    Rational::from_integer(binomial(n, k as i64)),
                    "C({n},{k})"
                );
            }
        }
        assert_eq!(binomial_rational(&rat(1, 2), 2), rat(-1, 8));
    }

    #[test]
    fn powers() {
        assert_eq!(int_pow(&int(0), 0), int(1));
        assert_eq!(int_pow(&int(2), 10), int(1024));
        let base = rat(-1, 2);
        let oracle = base.clone() * base.clone() * base.clone();
        assert_eq!(int_pow(&base, 3), oracle);
        assert_eq!(oracle, rat(-1, 8));
        assert_eq!(int_pow(&3.0f64, 4), 81.0);
    }
}
