//! Stirling and binomial transforms of finite sequences.
//!
//! Every transform is length preserving: entry `n` of the output depends
//! only on entries `0..=n` of the input, so truncation is exact.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{binomial, int_pow, sign, Integer, Ring};
use crate::seq::SeqContext;

/// A nonempty finite sequence `a_0 ..= a_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence<T> {
    values: Vec<T>,
}

impl<T: Ring> Sequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence { values })
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::new((0..len).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    fn from_rows(len: usize, mut row: impl FnMut(usize) -> T) -> Self {
        Sequence {
            values: (0..len).map(&mut row).collect(),
        }
    }
}

impl<T> std::ops::Index<usize> for Sequence<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}

fn dot<T: Ring>(weights: &[Integer], values: &[T]) -> T {
    weights
        .iter()
        .zip(values)
        .fold(T::zero(), |acc, (w, v)| acc + T::from_int(w) * v.clone())
}

/// `b_n = sum_k S(n,k) a_k`.
pub fn stirling_transform<T: Ring>(ctx: &SeqContext, a: &Sequence<T>) -> Sequence<T> {
    Sequence::from_rows(a.len(), |n| dot(&ctx.stirling2_row(n), &a.values))
}

/// `a_n = sum_k s(n,k) b_k`, the inverse of [`stirling_transform`].
pub fn stirling_inverse<T: Ring>(ctx: &SeqContext, b: &Sequence<T>) -> Sequence<T> {
    Sequence::from_rows(b.len(), |n| dot(&ctx.stirling1_row(n), &b.values))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialSign {
    /// `sum_k C(n,k) a_k`
    Plain,
    /// `sum_k C(n,k) (-1)^k a_k`
    Alternating,
}

pub fn binomial_transform<T: Ring>(a: &Sequence<T>, sign_kind: BinomialSign) -> Sequence<T> {
    Sequence::from_rows(a.len(), |n| {
        (0..=n).fold(T::zero(), |acc, k| {
            let c = T::from_int(&binomial(n as i64, k as i64));
            let term = c * a.values[k].clone();
            match sign_kind {
                BinomialSign::Plain => acc + term,
                BinomialSign::Alternating => acc + sign::<T>(k) * term,
            }
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StirlingKind {
    /// weights `S(n, k)`
    Second,
    /// weights `s(n, k)`
    First,
}

/// `sum_k S(n,k) lambda^{n-k} mu^k a_k`, or with `s(n,k)` for
/// [`StirlingKind::First`].
pub fn weighted_stirling_transform<T: Ring>(
    ctx: &SeqContext,
    a: &Sequence<T>,
    lambda: &T,
    mu: &T,
    kind: StirlingKind,
) -> Sequence<T> {
    let lambda_pows: Vec<T> = (0..a.len()).map(|i| int_pow(lambda, i as u32)).collect();
    let mu_pows: Vec<T> = (0..a.len()).map(|i| int_pow(mu, i as u32)).collect();
    Sequence::from_rows(a.len(), |n| {
        let row = match kind {
            StirlingKind::Second => ctx.stirling2_row(n),
            StirlingKind::First => ctx.stirling1_row(n),
        };
        row.iter().enumerate().fold(T::zero(), |acc, (k, w)| {
            acc + T::from_int(w)
                * lambda_pows[n - k].clone()
                * mu_pows[k].clone()
                * a.values[k].clone()
        })
    })
}

/// Transform selector used by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Stirling,
    InverseStirling,
    Binomial,
    AlternatingBinomial,
    Weighted,
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stirling" => Ok(TransformKind::Stirling),
            "inv-stirling" => Ok(TransformKind::InverseStirling),
            "binomial" => Ok(TransformKind::Binomial),
            "alt-binomial" => Ok(TransformKind::AlternatingBinomial),
            "weighted" => Ok(TransformKind::Weighted),
            _ => Err(Error::UnknownKind {
                what: "transform",
                name: s.to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, int, rat, Rational};
    use num_traits::One;

    type Q = Rational;

    #[test]
    fn ones_give_bell_numbers() {
        let ctx = SeqContext::new();
        let ones = Sequence::from_fn(5, |_| Q::one()).unwrap();
        let b = stirling_transform(&ctx, &ones);
        assert_eq!(b.values(), &[int(1), int(1), int(2), int(5), int(15)]);
        assert_eq!(stirling_inverse(&ctx, &b), ones);
    }

    #[test]
    fn basis_vector_picks_a_column() {
        let ctx = SeqContext::new();
        let j = 3;
        let e = Sequence::from_fn(10, |k| if k == j { int(1) } else { int(0) }).unwrap();
        let col = stirling_transform(&ctx, &e);
        for n in 0..10 {
            assert_eq!(col[n], Q::from_integer(ctx.stirling2(n, j)));
        }
    }

    #[test]
    fn signed_harmonic_transform() {
        let ctx = SeqContext::new();
        let a = Sequence::from_fn(12, |k| {
            sign::<Q>(k) * Q::from_integer(factorial(k as u64)) * ctx.harmonic(k)
        })
        .unwrap();
        let b = stirling_transform(&ctx, &a);
        for n in 0..12 {
            assert_eq!(b[n], sign::<Q>(n) * int(n as i64));
        }
        let c = Sequence::from_fn(12, |k| sign::<Q>(k) * int(k as i64)).unwrap();
        let inv = stirling_inverse(&ctx, &c);
        for n in 0..12 {
            let expect = sign::<Q>(n) * Q::from_integer(factorial(n as u64)) * ctx.harmonic(n);
            assert_eq!(inv[n], expect);
        }
    }

    #[test]
    fn binomial_transforms() {
        let ctx = SeqContext::new();
        let bell = Sequence::from_fn(6, |n| Q::from_integer(ctx.bell(n))).unwrap();
        let alt = binomial_transform(&bell, BinomialSign::Alternating);
        assert_eq!(alt[2], int(1));
        assert_eq!(binomial_transform(&alt, BinomialSign::Alternating), bell);
        let e0 = Sequence::from_fn(6, |n| if n == 0 { int(1) } else { int(0) }).unwrap();
        let plain = binomial_transform(&e0, BinomialSign::Plain);
        assert!(plain.values().iter().all(|v| v.is_one()));
    }

    #[test]
    fn weighted_specializations() {
        let ctx = SeqContext::new();
        let a = Sequence::from_fn(10, |k| rat(k as i64 * 7 - 3, k as i64 + 2)).unwrap();
        assert_eq!(
            weighted_stirling_transform(&ctx, &a, &int(1), &int(1), StirlingKind::Second),
            stirling_transform(&ctx, &a)
        );
        // lambda = mu = -1 on Bernoulli numbers: (-1)^n sum_k s(n,k) B_k
        let b = Sequence::from_fn(10, |k| ctx.bernoulli(k)).unwrap();
        let w = weighted_stirling_transform(&ctx, &b, &int(-1), &int(-1), StirlingKind::First);
        for n in 0..10 {
            let direct: Q = (0..=n)
                .map(|k| Q::from_integer(ctx.stirling1(n, k)) * ctx.bernoulli(k))
                .sum();
            assert_eq!(w[n], sign::<Q>(n) * direct);
        }
        // lambda = 1, mu = -1 on derangements
        let d = Sequence::from_fn(10, |k| Q::from_integer(ctx.derangement(k))).unwrap();
        let w = weighted_stirling_transform(&ctx, &d, &int(1), &int(-1), StirlingKind::Second);
        let bell = Sequence::from_fn(10, |n| Q::from_integer(ctx.bell(n))).unwrap();
        let alt = binomial_transform(&bell, BinomialSign::Alternating);
        for n in 0..10 {
            assert_eq!(w[n], sign::<Q>(n) * alt[n].clone());
        }
    }

    #[test]
    fn empty_sequence_rejected() {
        assert_eq!(Sequence::<Q>::new(vec![]), Err(Error::EmptySequence));
        assert!("weighted".parse::<TransformKind>().is_ok());
        assert!("fourier".parse::<TransformKind>().is_err());
    }

    #[test]
    fn generic_over_floats() {
        let ctx = SeqContext::new();
        let a = Sequence::from_fn(8, |k| 0.5 * k as f64).unwrap();
        let back = stirling_inverse(&ctx, &stirling_transform(&ctx, &a));
        for n in 0..8 {
            assert!((back[n] - a[n]).abs() < 1e-9);
        }
        let ints = Sequence::from_fn(6, |_| Integer::one()).unwrap();
        assert_eq!(stirling_transform(&ctx, &ints)[5], Integer::from(52));
    }
}
