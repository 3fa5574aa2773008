//! Truncated exponential generating functions.
//!
//! An [`Egf`] of order `N` stores `a_0 ..= a_N` and denotes
//! `sum_{n<=N} a_n t^n / n!`. Operations never extend the order silently:
//! products and compositions require equal orders, the derivative loses one
//! order and the antiderivative gains one (its new coefficient is exact).
//!
//! [`PowerSeries`] is the ordinary view, `c_n = a_n / n!`.

use std::str::FromStr;


use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, falling_factorial, Field, Integer, Ring};
use crate::seq::SeqContext;
use crate::transform::{weighted_stirling_transform, Sequence, StirlingKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Egf<T> {
    coeffs: Vec<T>,
}

fn binomial_row(n: usize) -> Vec<Integer> {
    (0..=n).map(|k| binomial(n as i64, k as i64)).collect()
}

impl<T: Ring> Egf<T> {
    pub fn from_sequence(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Egf { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Egf {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| T::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 0 { T::one() } else { T::zero() })
    }

    /// The series `t`, i.e. `a_1 = 1`.
    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 1 { T::one() } else { T::zero() })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Egf<U> {
        Egf {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Keeps `a_0 ..= a_order`; `order` must not exceed the current order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncation cannot extend a series");
        Egf {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self::from_fn(self.order(), |n| {
            self.coeffs[n].clone() + other.coeffs[n].clone()
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self::from_fn(self.order(), |n| {
            self.coeffs[n].clone() - other.coeffs[n].clone()
        }))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    /// Binomial convolution `c_n = sum_k C(n,k) a_k b_{n-k}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self::from_fn(self.order(), |n| {
            binomial_row(n)
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (k, c)| {
                    acc + T::from_int(c) * self.coeffs[k].clone() * other.coeffs[n - k].clone()
                })
        }))
    }

    /// `f'`, of order `N - 1`. An order-0 series differentiates to order 0 zero.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Egf {
            coeffs: self.coeffs[1..].to_vec(),
        }
    }

    /// Antiderivative with zero constant term, of order `N + 1`.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Egf { coeffs }
    }

    /// `exp(f)` for `f` with zero constant term, from `h' = f' h`:
    /// `h_{n+1} = sum_k C(n,k) f_{k+1} h_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut h = vec![T::one()];
        for n in 0..self.order() {
            let row = binomial_row(n);
            let next = (0..=n).fold(T::zero(), |acc, k| {
                acc + T::from_int(&row[k]) * self.coeffs[k + 1].clone() * h[n - k].clone()
            });
            h.push(next);
        }
        Ok(Egf { coeffs: h })
    }
}

impl<T: Field> Egf<T> {
    pub fn to_ordinary(&self) -> PowerSeries<T> {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a.clone() / T::from_int(&factorial(n as u64)))
                .collect(),
        }
    }

    pub fn from_ordinary(s: &PowerSeries<T>) -> Self {
        Egf {
            coeffs: s
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.clone() * T::from_int(&factorial(n as u64)))
                .collect(),
        }
    }

    /// `1/f`; requires `a_0 != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let mut b: Vec<T> = vec![T::one() / a0.clone()];
        for n in 1..=self.order() {
            let row = binomial_row(n);
            let s = (1..=n).fold(T::zero(), |acc, k| {
                acc + T::from_int(&row[k]) * self.coeffs[k].clone() * b[n - k].clone()
            });
            b.push(-s / a0.clone());
        }
        Ok(Egf { coeffs: b })
    }

    /// `self(inner(t))`; `inner` needs a zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let outer = self.to_ordinary();
        let g = inner.to_ordinary();
        Ok(Self::from_ordinary(&outer.compose(&g)?))
    }

    /// Elementary series truncated at `order`.
    pub fn elementary(kind: &Elementary<T>, order: usize) -> Self {
        let fact = |n: usize| T::from_int(&factorial(n as u64));
        match kind {
            Elementary::Exp => Self::from_fn(order, |_| T::one()),
            Elementary::Expm1 => Self::from_fn(order, |n| if n == 0 { T::zero() } else { T::one() }),
            // ln(1+t) = sum (-1)^{n-1} t^n / n, so a_n = (-1)^{n-1} (n-1)!
            Elementary::Log1p => Self::from_fn(order, |n| {
                if n == 0 {
                    T::zero()
                } else {
                    crate::exact::sign::<T>(n - 1) * fact(n - 1)
                }
            }),
            Elementary::Geom => Self::from_fn(order, fact),
            // (1+t)^x has a_n = x (x-1) ... (x-n+1)
            Elementary::Pow1p(x) => Self::from_fn(order, |n| falling_factorial(x, n)),
            // Li2(t) = sum t^n / n^2, so a_n = (n-1)! / n
            Elementary::Dilog => Self::from_fn(order, |n| {
                if n == 0 {
                    T::zero()
                } else {
                    fact(n - 1) / T::from_i64(n as i64)
                }
            }),
            Elementary::Monomial(c, m) => {
                Self::from_fn(order, |n| if n == *m { c.clone() } else { T::zero() })
            }
        }
    }
}

/// Named elementary series.
#[derive(Clone, Debug, PartialEq)]
pub enum Elementary<T> {
    /// `e^t`
    Exp,
    /// `e^t - 1`
    Expm1,
    /// `ln(1 + t)`
    Log1p,
    /// `1 / (1 - t)`
    Geom,
    /// `(1 + t)^x`
    Pow1p(T),
    /// `Li_2(t)`
    Dilog,
    /// `c t^m / m!`
    Monomial(T, usize),
}

impl<T> FromStr for Elementary<T> {
    type Err = Error;

    /// Parses the parameterless kinds.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(Elementary::Exp),
            "expm1" => Ok(Elementary::Expm1),
            "log1p" => Ok(Elementary::Log1p),
            "geom" => Ok(Elementary::Geom),
            "dilog" => Ok(Elementary::Dilog),
            _ => Err(Error::UnknownKind {
                what: "elementary series",
                name: s.to_string(),
            }),
        }
    }
}

/// Ordinary power series `sum c_n t^n`, truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> PowerSeries<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(Self::from_fn(self.order(), |n| {
            (0..=n)
                .filter(|&k| !self.coeffs[k].is_zero() && !other.coeffs[n - k].is_zero())
                .fold(T::zero(), |acc, k| {
                    acc + self.coeffs[k].clone() * other.coeffs[n - k].clone()
                })
        }))
    }

    /// Horner evaluation of `self(inner)` over truncated series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = Self::from_fn(n, |k| inner.coeffs[k].clone());
        let mut acc = Self::from_fn(n, |_| T::zero());
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }
}

impl<T: Field> PowerSeries<T> {
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let mut b = vec![T::one() / c0.clone()];
        for n in 1..=self.order() {
            let s = (1..=n).fold(T::zero(), |acc, k| {
                acc + self.coeffs[k].clone() * b[n - k].clone()
            });
            b.push(-s / c0.clone());
        }
        Ok(PowerSeries { coeffs: b })
    }
}

/// Both evaluations of a Stirling-type series substitution.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionRoutes<T> {
    pub via_composition: Vec<T>,
    pub via_weighted_sum: Vec<T>,
}

impl<T: PartialEq> SubstitutionRoutes<T> {
    pub fn agreed(self) -> Result<Vec<T>> {
        match self
            .via_composition
            .iter()
            .zip(&self.via_weighted_sum)
            .position(|(a, b)| a != b)
        {
            None => Ok(self.via_composition),
            Some(index) => Err(Error::RouteMismatch { index }),
        }
    }
}

/// Coefficients of `f((mu/lambda)(e^{lambda t} - 1))`, which are
/// `sum_k S(n,k) lambda^{n-k} mu^k a_k`.
pub fn stirling_substitution_routes<T: Field>(
    ctx: &SeqContext,
    f: &Egf<T>,
    lambda: &T,
    mu: &T,
) -> Result<SubstitutionRoutes<T>> {
    if lambda.is_zero() {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    // inner series a_n = mu lambda^{n-1}, n >= 1
    let inner = Egf::from_fn(f.order(), |n| {
        if n == 0 {
            T::zero()
        } else {
            mu.clone() * crate::exact::int_pow(lambda, n as u32 - 1)
        }
    });
    substitution_routes(ctx, f, &inner, lambda, mu, StirlingKind::Second)
}

/// Coefficients of `f((mu/lambda) ln(1 + lambda t))`, which are
/// `sum_k s(n,k) lambda^{n-k} mu^k a_k`.
pub fn log_substitution_routes<T: Field>(
    ctx: &SeqContext,
    f: &Egf<T>,
    lambda: &T,
    mu: &T,
) -> Result<SubstitutionRoutes<T>> {
    if lambda.is_zero() {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    // inner series a_n = mu (-1)^{n-1} (n-1)! lambda^{n-1}, n >= 1
    let inner = Egf::from_fn(f.order(), |n| {
        if n == 0 {
            T::zero()
        } else {
            mu.clone()
                * crate::exact::sign::<T>(n - 1)
                * T::from_int(&factorial(n as u64 - 1))
                * crate::exact::int_pow(lambda, n as u32 - 1)
        }
    });
    substitution_routes(ctx, f, &inner, lambda, mu, StirlingKind::First)
}

fn substitution_routes<T: Field>(
    ctx: &SeqContext,
    f: &Egf<T>,
    inner: &Egf<T>,
    lambda: &T,
    mu: &T,
    kind: StirlingKind,
) -> Result<SubstitutionRoutes<T>> {
    let via_composition = f.compose(inner)?.into_coeffs();
    let seq = Sequence::new(f.coeffs().to_vec())?;
    let via_weighted_sum = weighted_stirling_transform(ctx, &seq, lambda, mu, kind).into_vec();
    Ok(SubstitutionRoutes {
        via_composition,
        via_weighted_sum,
    })
}

/// Substitution into `(mu/lambda)(e^{lambda t} - 1)`; errors if the two
/// evaluation routes disagree.
pub fn stirling_substitution<T: Field>(
    ctx: &SeqContext,
    f: &Egf<T>,
    lambda: &T,
    mu: &T,
) -> Result<Vec<T>> {
    stirling_substitution_routes(ctx, f, lambda, mu)?.agreed()
}

/// Substitution into `(mu/lambda) ln(1 + lambda t)`; errors if the two
/// evaluation routes disagree.
pub fn log_substitution<T: Field>(
    ctx: &SeqContext,
    f: &Egf<T>,
    lambda: &T,
    mu: &T,
) -> Result<Vec<T>> {
    log_substitution_routes(ctx, f, lambda, mu)?.agreed()
}
