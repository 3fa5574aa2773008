//! Dense univariate polynomials and the polynomial families built on the
//! Stirling triangles: exponential `phi_n`, geometric `omega_n`, Bernoulli,
//! Euler, and the binomial polynomials `C(x, k)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::egf::Egf;
use crate::exact::{binomial, factorial, rat, Integer, Rational, Ring};
use crate::seq::SeqContext;

/// Polynomial with coefficients `c_0, c_1, ...` (index = degree). The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplication by `x`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(T::zero());
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// `(x d/dx)^p`. Acts on `x^k` as multiplication by `k^p`.
    pub fn xd_apply(&self, p: u32) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() * crate::exact::int_pow(&T::from_i64(k as i64), p))
                .collect(),
        )
    }

    /// Composition `self(inner(x))` by Horner's rule.
    pub fn compose(&self, inner: &Poly<T>) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * inner.clone() + Poly::constant(c.clone()))
    }
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Mul for Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Ring> Ring for Poly<T> {
    fn from_int(n: &Integer) -> Self {
        Poly::constant(T::from_int(n))
    }
}

impl fmt::Display for Poly<Rational> {
    /// Ascending powers, `c0 + c1*x + c2*x^2`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{}", crate::exact::format_rational(&mag))?;
            }
            match (k, unit) {
                (0, _) => {}
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Exponential polynomial `phi_n(x)` from `phi_0 = 1` and
/// `phi_{m+1} = x D phi_m + x phi_m`.
pub fn exp_poly(n: usize) -> Poly<Rational> {
    exp_polys(n).pop().expect("nonempty")
}

/// `phi_0 .. phi_n`.
pub fn exp_polys(n: usize) -> Vec<Poly<Rational>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = Poly::one();
    out.push(cur.clone());
    for _ in 0..n {
        cur = (cur.derivative() + cur).shift();
        out.push(cur.clone());
    }
    out
}

/// `sum_k S(n,k) x^k` read straight off the triangle.
pub fn exp_poly_from_triangle(ctx: &SeqContext, n: usize) -> Poly<Rational> {
    Poly::new(ctx.stirling2_row(n).into_iter().map(Rational::from_integer).collect())
}

/// Geometric polynomial `omega_n(x) = sum_k S(n,k) k! x^k`.
pub fn geom_poly(ctx: &SeqContext, n: usize) -> Poly<Rational> {
    Poly::new(
        ctx.stirling2_row(n)
            .into_iter()
            .enumerate()
            .map(|(k, s)| Rational::from_integer(s * factorial(k as u64)))
            .collect(),
    )
}

/// `B_n(x) = sum_p C(n,p) B_p x^{n-p}`.
pub fn bernoulli_poly(ctx: &SeqContext, n: usize) -> Poly<Rational> {
    let mut c = vec![Rational::zero(); n + 1];
    for p in 0..=n {
        c[n - p] = Rational::from_integer(binomial(n as i64, p as i64)) * ctx.bernoulli(p);
    }
    Poly::new(c)
}

/// `B_0(x) .. B_n(x)` as coefficients of `t e^{xt} / (e^t - 1)`.
pub fn bernoulli_polys_from_series(n: usize) -> Vec<Poly<Rational>> {
    // (e^t - 1)/t has EGF coefficients 1/(k+1)
    let quotient = Egf::from_fn(n, |k| rat(1, k as i64 + 1));
    let factor = quotient.reciprocal().expect("constant term is one");
    times_exp_xt(&factor)
}

/// `E_0(x) .. E_n(x)` as coefficients of `2 e^{xt} / (e^t + 1)`.
pub fn euler_polys(n: usize) -> Vec<Poly<Rational>> {
    // (e^t + 1)/2 has EGF coefficients 1, 1/2, 1/2, ...
    let half = Egf::from_fn(n, |k| if k == 0 { Rational::one() } else { rat(1, 2) });
    let factor = half.reciprocal().expect("constant term is one");
    times_exp_xt(&factor)
}

pub fn euler_poly(n: usize) -> Poly<Rational> {
    euler_polys(n).pop().expect("nonempty")
}

/// Multiplies a rational EGF by `e^{xt}`, whose coefficients are `x^k`,
/// returning the polynomial coefficients of the product.
fn times_exp_xt(factor: &Egf<Rational>) -> Vec<Poly<Rational>> {
    let lifted = factor.map(|c| Poly::constant(c.clone()));
    let ext = Egf::from_fn(factor.order(), |k| Poly::monomial(Rational::one(), k));
    lifted
        .mul(&ext)
        .expect("orders match by construction")
        .into_coeffs()
}

/// `C(x, k) = x (x-1) ... (x-k+1) / k!`.
pub fn binom_poly(k: usize) -> Poly<Rational> {
    let mut acc = Poly::one();
    for j in 0..k {
        acc = acc * Poly::new(vec![-Rational::from_integer(j.into()), Rational::one()]);
    }
    acc.scale(&(Rational::one() / Rational::from_integer(factorial(k as u64))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn q(v: &[(i64, i64)]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn arithmetic_basics() {
        let a = q(&[(0, 1), (-1, 1), (1, 1)]); // x^2 - x
        assert_eq!(a.derivative(), q(&[(-1, 1), (2, 1)]));
        assert_eq!(a.eval(&rat(1, 2)), rat(-1, 4));
        let z = &a - &a;
        assert!(z.is_zero());
        assert!(z.coeffs().is_empty());
        assert_eq!(z.degree(), None);
        assert_eq!(a.degree(), Some(2));
        assert_eq!(&a * &Poly::one(), a);
        assert_eq!((&a * &a).degree(), Some(4));
    }

    #[test]
    fn display_ascending() {
        let b2 = q(&[(1, 6), (-1, 1), (1, 1)]);
        assert_eq!(b2.to_string(), "1/6 - x + x^2");
        assert_eq!(q(&[(0, 1), (-3, 2)]).to_string(), "-3/2*x");
        assert_eq!(Poly::<Rational>::zero().to_string(), "0");
    }

    #[test]
    fn exponential_polynomials() {
        assert_eq!(exp_poly(0), Poly::one());
        assert_eq!(exp_poly(2), q(&[(0, 1), (1, 1), (1, 1)]));
        assert_eq!(exp_poly(3), q(&[(0, 1), (1, 1), (3, 1), (1, 1)]));
        let ctx = SeqContext::new();
        for (n, phi) in exp_polys(20).into_iter().enumerate() {
            assert_eq!(phi, exp_poly_from_triangle(&ctx, n), "phi_{n}");
        }
        for n in 0..=30 {
            assert_eq!(exp_poly(n).eval(&int(1)), Rational::from_integer(ctx.bell(n)));
        }
    }

    #[test]
    fn geometric_polynomials() {
        let ctx = SeqContext::new();
        assert_eq!(geom_poly(&ctx, 0), Poly::one());
        assert_eq!(geom_poly(&ctx, 2), q(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(geom_poly(&ctx, 3).eval(&int(1)), int(13));
        for n in 0..=30 {
            assert_eq!(geom_poly(&ctx, n).eval(&int(1)), Rational::from_integer(ctx.fubini(n)));
        }
    }

    #[test]
    fn bernoulli_polynomials_two_routes() {
        let ctx = SeqContext::new();
        assert_eq!(bernoulli_poly(&ctx, 2), q(&[(1, 6), (-1, 1), (1, 1)]));
        let series = bernoulli_polys_from_series(16);
        for (n, b) in series.iter().enumerate() {
            assert_eq!(&bernoulli_poly(&ctx, n), b, "B_{n}(x)");
            assert_eq!(b.eval(&int(0)), ctx.bernoulli(n));
        }
    }

    #[test]
    fn euler_polynomials() {
        assert_eq!(euler_poly(0), Poly::one());
        assert_eq!(euler_poly(1), q(&[(-1, 2), (1, 1)]));
        assert_eq!(euler_poly(2), q(&[(0, 1), (-1, 1), (1, 1)]));
        // E_n(x) + E_n(x+1) = 2 x^n
        let x1 = q(&[(1, 1), (1, 1)]);
        for (n, e) in euler_polys(14).iter().enumerate() {
            let sum = e + &e.compose(&x1);
            assert_eq!(sum, Poly::monomial(int(2), n), "n={n}");
        }
    }

    #[test]
    fn binomial_polynomials() {
        assert_eq!(binom_poly(0), Poly::one());
        assert_eq!(binom_poly(2), q(&[(0, 1), (-1, 2), (1, 2)]));
        for j in 0..=20usize {
            let lhs = binom_poly(j).eval(&rat(1, 2));
            let sign = if j % 2 == 0 { -1 } else { 1 };
            let rhs = Rational::from_integer(binomial(2 * j as i64, j as i64) * sign)
                / (Rational::from_integer(Integer::from(4).pow(j as u32)) * int(2 * j as i64 - 1));
            assert_eq!(lhs, rhs, "j={j}");
        }
        assert_eq!(binom_poly(2).eval(&rat(1, 2)), rat(-1, 8));
        for n in -4i64..8 {
            for k in 0..8 {
                assert_eq!(
                    binom_poly(k).eval(&int(n)),
                    Rational::from_integer(binomial(n, k as i64))
                );
            }
        }
    }

    #[test]
    fn xd_operator() {
        for k in 0..6 {
            let m = Poly::monomial(int(1), k);
            assert_eq!(m.xd_apply(1), m.scale(&int(k as i64)));
        }
        let phi = exp_polys(3);
        let lhs = phi[2].xd_apply(1);
        assert_eq!(lhs, q(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(lhs, &phi[3] - &phi[2].shift());
        assert_eq!(phi[3].xd_apply(0), phi[3]);
    }
}
