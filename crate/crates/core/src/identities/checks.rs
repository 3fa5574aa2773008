use num_traits::{One, Zero};

use super::{params, Bounds, Tally, Value};
use crate::egf::{log_substitution_routes, stirling_substitution_routes, Egf, Elementary, PowerSeries};
use crate::exact::{binomial, binomial_rational, int, int_pow, rat, sign, Integer, Rational};
use crate::poly::{
    bernoulli_poly, binom_poly, euler_polys, exp_poly_from_triangle, exp_polys, geom_poly, Poly,
};
use crate::seq::{faulhaber, power_sum, SeqContext};
use crate::transform::{binomial_transform, stirling_inverse, BinomialSign, Sequence};

type Q = Rational;
type P = Poly<Rational>;

/// Polynomial forms of the reciprocal-weight identities stop here; the
/// scalar forms run to the full range.
pub(super) const POLY_FORM_CAP: usize = 12;

fn z(i: Integer) -> Q {
    Q::from_integer(i)
}

fn q(n: usize) -> Q {
    int(n as i64)
}

fn s2(ctx: &SeqContext, n: usize, k: usize) -> Q {
    z(ctx.stirling2(n, k))
}

fn s1(ctx: &SeqContext, n: usize, k: usize) -> Q {
    z(ctx.stirling1(n, k))
}

fn fact(ctx: &SeqContext, n: usize) -> Q {
    z(ctx.factorial(n))
}

fn binom(n: usize, k: usize) -> Q {
    z(binomial(n as i64, k as i64))
}

fn pw(base: &Q, e: usize) -> Q {
    int_pow(base, e as u32)
}

fn sgn(k: usize) -> Q {
    sign::<Q>(k)
}

fn x() -> P {
    Poly::x()
}

fn psum(terms: impl Iterator<Item = P>) -> P {
    terms.fold(P::zero(), |acc, t| acc + t)
}

fn truncated(p: &P, order: usize) -> Vec<Q> {
    (0..=order).map(|k| p.coeff(k)).collect()
}

/// `int_0^x f(t)/t dt` for `f` with zero constant term.
fn integrate_over_t(p: &P) -> P {
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(j, cj)| if j == 0 { Q::zero() } else { cj / q(j) })
            .collect(),
    )
}

/// Bell numbers from `b_{m+1} = sum_k C(m,k) b_k`, without the triangle.
fn bell_by_recurrence(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 0..n {
        let next = (0..=m).map(|k| binom(m, k) * &b[k]).sum();
        b.push(next);
    }
    b
}

/// Ordered Bell numbers from `w_m = sum_{k>=1} C(m,k) w_{m-k}`.
fn fubini_by_recurrence(n: usize) -> Vec<Q> {
    let mut w = vec![Q::one()];
    for m in 1..=n {
        let next = (1..=m).map(|k| binom(m, k) * &w[m - k]).sum();
        w.push(next);
    }
    w
}

/// `omega_0 .. omega_n` as coefficients of `1 / (1 - x(e^t - 1))`.
fn geom_polys_from_series(n: usize) -> Vec<P> {
    let u = Egf::from_fn(n, |k| if k == 0 { P::zero() } else { x() });
    let mut acc = Egf::one(n);
    let mut power = Egf::one(n);
    for _ in 0..n {
        power = power.mul(&u).expect("same order");
        acc = acc.add(&power).expect("same order");
    }
    acc.into_coeffs()
}

fn bernoulli_plus_row(ctx: &SeqContext, n: usize) -> Vec<Q> {
    (0..=n).map(|k| ctx.bernoulli_plus(k)).collect()
}

pub(super) fn orth(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        for j in 0..=n {
            let delta = if n == j { Q::one() } else { Q::zero() };
            let fwd: Integer = (0..=n).map(|k| ctx.stirling2(n, k) * ctx.stirling1(k, j)).sum();
            t.eq(params!(n = n, j = j, form = "S.s"), z(fwd), delta.clone());
            let back: Integer = (0..=n).map(|k| ctx.stirling1(n, k) * ctx.stirling2(k, j)).sum();
            t.eq(params!(n = n, j = j, form = "s.S"), z(back), delta);
        }
    }
}

pub(super) fn t1(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for p in b.p.clone() {
        for n in b.n.clone() {
            let lhs: Q = (0..=n)
                .map(|k| s2(ctx, n, k) * sgn(k) * fact(ctx, k) * ctx.hyperharmonic(p, k))
                .sum();
            let rhs = if n == 0 { Q::zero() } else { sgn(n) * q(n) * pw(&q(p), n - 1) };
            t.eq(params!(n = n, p = p), lhs, rhs);
        }
    }
    if b.p.contains(&0) {
        t.note("p = 0 uses h_n^(0) = 1/n, h_0^(p) = 0 and 0^0 = 1");
    }
}

pub(super) fn t1b(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let lhs: Q = (0..=n)
            .map(|k| s2(ctx, n, k) * sgn(k) * fact(ctx, k) * ctx.harmonic(k))
            .sum();
        t.eq(params!(n = n), lhs, sgn(n) * q(n));
    }
}

pub(super) fn c2(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let len = *b.n.end() + 1;
    for p in b.p.clone() {
        let pq = q(p);
        let input = Sequence::from_fn(len, |k| {
            if k == 0 {
                Q::zero()
            } else {
                sgn(k) * q(k) * pw(&pq, k - 1)
            }
        })
        .expect("nonempty");
        let inverse = stirling_inverse(ctx, &input);
        for n in b.n.clone() {
            let rhs = sgn(n) * fact(ctx, n) * ctx.hyperharmonic(p, n);
            t.eq(params!(n = n, p = p), inverse[n].clone(), rhs);
        }
    }
    if b.p.contains(&0) {
        t.note("p = 0 uses h_n^(0) = 1/n and 0^0 = 1");
    }
}

/// `sum_{j<=k} C(x,j) w(k-j)` as a polynomial in `x`.
fn binomial_mix(binoms: &[P], k: usize, w: impl Fn(usize) -> Q) -> P {
    psum((0..=k).map(|j| binoms[j].scale(&w(k - j))))
}

pub(super) fn t3a(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let euler = euler_polys(hi);
    let binoms: Vec<P> = (0..=hi).map(binom_poly).collect();
    let half = rat(-1, 2);
    for n in b.n.clone() {
        let lhs = psum((0..=n).map(|k| euler[k].scale(&s1(ctx, n, k))));
        let rhs = binomial_mix(&binoms, n, |d| pw(&half, d)).scale(&fact(ctx, n));
        t.eq(params!(n = n), lhs, rhs);
    }
}

pub(super) fn t3b(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let euler = euler_polys(hi);
    let binoms: Vec<P> = (0..=hi).map(binom_poly).collect();
    let half = rat(-1, 2);
    for n in b.n.clone() {
        let rhs = psum((0..=n).map(|k| {
            binomial_mix(&binoms, k, |d| pw(&half, d)).scale(&(s2(ctx, n, k) * fact(ctx, k)))
        }));
        t.eq(params!(n = n), euler[n].clone(), rhs);
    }
}

pub(super) fn e9(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let euler = euler_polys(*b.n.end());
    let two = int(2);
    for n in b.n.clone() {
        let lhs = euler[n].eval(&rat(1, 2));
        let rhs: Q = (0..=n)
            .map(|k| {
                let inner: Q = (0..=k)
                    .map(|j| {
                        binom(2 * j, j) / (pw(&two, k + j) * int(1 - 2 * j as i64))
                    })
                    .sum();
                s2(ctx, n, k) * fact(ctx, k) * sgn(k) * inner
            })
            .sum();
        t.eq(params!(n = n), lhs, rhs);
    }
    t.note("Euler numbers are E_n = E_n(1/2), not the integer sequence 2^n E_n(1/2)");
}

pub(super) fn cbh(_ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let half = rat(1, 2);
    for j in b.n.clone() {
        let lhs = binom_poly(j).eval(&half);
        let rhs = binom(2 * j, j) * sgn(j + 1) / (pw(&int(4), j) * int(2 * j as i64 - 1));
        t.eq(params!(j = j), lhs, rhs);
    }
}

pub(super) fn t5a(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let bern: Vec<P> = (0..=hi).map(|n| bernoulli_poly(ctx, n)).collect();
    let binoms: Vec<P> = (0..=hi).map(binom_poly).collect();
    for n in b.n.clone() {
        let lhs = psum((0..=n).map(|k| bern[k].scale(&s1(ctx, n, k))));
        let rhs = binomial_mix(&binoms, n, |d| sgn(d) / q(d + 1)).scale(&fact(ctx, n));
        t.eq(params!(n = n), lhs, rhs);
    }
}

pub(super) fn t5b(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let binoms: Vec<P> = (0..=hi).map(binom_poly).collect();
    for n in b.n.clone() {
        let rhs = psum((0..=n).map(|k| {
            binomial_mix(&binoms, k, |d| sgn(d) / q(d + 1)).scale(&(s2(ctx, n, k) * fact(ctx, k)))
        }));
        t.eq(params!(n = n), bernoulli_poly(ctx, n), rhs);
    }
}

pub(super) fn t5c(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let rhs: Q = (0..=n)
            .map(|k| s2(ctx, n, k) * sgn(k) * fact(ctx, k) / q(k + 1))
            .sum();
        t.eq(params!(n = n), ctx.bernoulli(n), rhs);
    }
}

pub(super) fn t6a(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let lhs: Q = (1..=n).map(|k| s1(ctx, n, k) * ctx.bernoulli(k - 1)).sum();
        let rhs = sgn(n - 1) * fact(ctx, n - 1) * ctx.harmonic(n);
        t.eq(params!(n = n), lhs, rhs);
    }
}

pub(super) fn t6b(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let rhs: Q = (1..=n)
            .map(|k| s2(ctx, n, k) * sgn(k - 1) * fact(ctx, k - 1) * ctx.harmonic(k))
            .sum();
        t.eq(params!(n = n), ctx.bernoulli(n - 1), rhs);
    }
}

pub(super) fn t6c(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let lhs: Q = (1..=n)
            .map(|k| s1(ctx, n, k) * ctx.bernoulli(k - 1) * sgn(k))
            .sum();
        let rhs = sgn(n) * fact(ctx, n) / (q(n) * q(n));
        t.eq(params!(n = n), lhs, rhs);
    }
}

pub(super) fn t6d(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let sum: Q = (1..=n)
            .map(|k| s2(ctx, n, k) * fact(ctx, k) / (q(k) * q(k)) * sgn(k))
            .sum();
        t.eq(params!(n = n), ctx.bernoulli(n - 1), sgn(n) * sum);
    }
}

/// The tabulated closed forms of `M(n, p)` in Bell numbers, `p <= 5`.
fn moment_closed_form(bell: &[Q], n: usize, p: usize) -> Option<Q> {
    let b = |i: usize| bell[n + i].clone();
    Some(match p {
        0 => b(0),
        1 => b(1) - b(0),
        2 => b(2) - int(2) * b(1),
        3 => b(3) - int(3) * b(2) + b(0),
        4 => b(4) - int(4) * b(3) + int(4) * b(1) + b(0),
        5 => b(5) - int(5) * b(4) + int(10) * b(2) + int(5) * b(1) - int(2) * b(0),
        _ => return None,
    })
}

pub(super) fn t7(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let bell = bell_by_recurrence(*b.n.end() + 6);
    for n in b.n.clone() {
        for p in b.p.clone() {
            let mut values: Vec<Value> = vec![
                z(ctx.moment(n, p)).into(),
                z(ctx.moment_direct(n, p)).into(),
            ];
            if let Some(closed) = moment_closed_form(&bell, n, p) {
                values.push(closed.into());
            }
            t.all_eq(params!(n = n, p = p), values);
        }
    }
}

pub(super) fn l8(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let phis = exp_polys(*b.n.end() + 1);
    for n in b.n.clone() {
        for p in b.p.clone() {
            let lhs = Poly::new(
                ctx.stirling2_row(n)
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| z(s) * pw(&q(k), p + 1))
                    .collect(),
            );
            let tail = psum((0..=p).map(|j| phis[n].xd_apply(j as u32).scale(&binom(p, j))));
            let rhs = phis[n + 1].xd_apply(p as u32) - x() * tail;
            t.eq(params!(n = n, p = p), lhs, rhs);
        }
    }
}

pub(super) fn e15(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let phis = exp_polys(*b.n.end() + 2);
    let one = Q::one();
    for n in b.n.clone() {
        let row = ctx.stirling2_row(n);
        let weighted = |e: usize| {
            Poly::new(row.iter().enumerate().map(|(k, s)| z(s.clone()) * pw(&q(k), e)).collect())
        };
        let first = &phis[n + 1] - &(x() * phis[n].clone());
        t.eq(params!(n = n, form = "k"), weighted(1), first);
        let x2_minus_x = Poly::new(vec![Q::zero(), -Q::one(), Q::one()]);
        let second = &(&phis[n + 2] - &(x().scale(&int(2)) * phis[n + 1].clone()))
            + &(x2_minus_x * phis[n].clone());
        t.eq(params!(n = n, form = "k^2"), weighted(2), second);
        let at_one = phis[n + 2].eval(&one) - int(2) * phis[n + 1].eval(&one);
        t.eq(params!(n = n, form = "k^2 at x=1"), weighted(2).eval(&one), at_one);
    }
    t.note(
        "the k^2 form is checked as phi_{n+2} - 2x phi_{n+1} + (x^2 - x) phi_n; \
         with the middle coefficient 2 in place of 2x it holds only at x = 1",
    );
}

/// EGF coefficients in `x` of `e^{-x} sum_m a_m x^m / m!`, as ordinary coefficients.
fn damped_series(ctx: &SeqContext, order: usize, a: impl Fn(usize) -> Q) -> Vec<Q> {
    let damp = Egf::from_fn(order, sgn);
    let body = Egf::from_fn(order, a);
    damp.mul(&body)
        .expect("same order")
        .into_coeffs()
        .into_iter()
        .enumerate()
        .map(|(m, cm)| cm / fact(ctx, m))
        .collect()
}

fn reciprocal_weighted(ctx: &SeqContext, n: usize, e: usize) -> P {
    Poly::new(
        ctx.stirling2_row(n)
            .into_iter()
            .enumerate()
            .map(|(k, s)| if k == 0 { Q::zero() } else { z(s) / pw(&q(k), e) })
            .collect(),
    )
}

pub(super) fn p9(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    for p in b.p.clone() {
        let lhs = truncated(&reciprocal_weighted(ctx, p + 1, 1), order);
        let rhs = damped_series(ctx, order, |m| z(power_sum(p, m)));
        t.eq(params!(p = p, order = order), lhs, rhs);
    }
    for n in b.n.clone() {
        let lhs = truncated(&reciprocal_weighted(ctx, n, 1), order);
        let rhs = damped_series(ctx, order, |m| z(power_sum(n - 1, m)));
        t.eq(params!(n = n, order = order), lhs, rhs);
    }
}

pub(super) fn e18(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for p in b.p.clone() {
        for n in b.n.clone() {
            t.eq(params!(p = p, n = n), z(power_sum(p, n)), faulhaber(ctx, p, n));
        }
    }
    if b.p.contains(&0) {
        t.note("at p = 0 the power-sum formula counts 0^0 and gives n + 1");
    }
}

pub(super) fn c10(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let bell = bell_by_recurrence(hi);
    let phis = exp_polys(hi);
    let one = Q::one();
    for n in b.n.clone() {
        let weight = |k: usize| binom(n, k) * ctx.bernoulli(n - k) / q(n);
        let lhs = reciprocal_weighted(ctx, n, 1);
        let scalar = bell[n - 1].clone() + (1..=n).map(|k| weight(k) * &bell[k]).sum::<Q>();
        t.eq(params!(n = n, x = 1), lhs.eval(&one), scalar);
        if n <= POLY_FORM_CAP {
            let rhs = phis[n - 1].clone() + psum((1..=n).map(|k| phis[k].scale(&weight(k))));
            t.eq(params!(n = n, x = "x"), lhs, rhs);
        }
    }
}

pub(super) fn e21(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let bell = bell_by_recurrence(hi);
    let phis = exp_polys(hi);
    let bp = bernoulli_plus_row(ctx, hi);
    let one = Q::one();
    for n in b.n.clone() {
        let weight = |k: usize| binom(n, k) * &bp[n - k] / q(n);
        let lhs = reciprocal_weighted(ctx, n, 1);
        let scalar: Q = (1..=n).map(|k| weight(k) * &bell[k]).sum();
        t.eq(params!(n = n, x = 1), lhs.eval(&one), scalar);
        if n <= POLY_FORM_CAP {
            let rhs = psum((1..=n).map(|k| phis[k].scale(&weight(k))));
            t.eq(params!(n = n, x = "x"), lhs, rhs);
        }
    }
    t.note("B+_n is B_n with B_1 = +1/2");
}

pub(super) fn e22(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let bell = bell_by_recurrence(hi);
    let phis = exp_polys(hi);
    let bp = bernoulli_plus_row(ctx, hi);
    let one = Q::one();
    let weight = |n: usize, k: usize| binom(n, k) * &bp[n - k] / q(n);
    for n in b.n.clone() {
        let lhs = reciprocal_weighted(ctx, n, 2);
        let nested_scalar: Q = (1..=n)
            .map(|k| weight(n, k) * (1..=k).map(|m| weight(k, m) * &bell[m]).sum::<Q>())
            .sum();
        t.eq(params!(n = n, x = 1), lhs.eval(&one), nested_scalar);
        if n <= POLY_FORM_CAP {
            let integral = psum((1..=n).map(|k| integrate_over_t(&phis[k]).scale(&weight(n, k))));
            let single = psum((1..=n).map(|k| reciprocal_weighted(ctx, k, 1).scale(&weight(n, k))));
            let nested = psum((1..=n).map(|k| {
                psum((1..=k).map(|m| phis[m].scale(&weight(k, m)))).scale(&weight(n, k))
            }));
            t.all_eq(
                params!(n = n, x = "x"),
                vec![lhs.into(), integral.into(), single.into(), nested.into()],
            );
        }
    }
    t.note("B+_n is B_n with B_1 = +1/2");
}

pub(super) fn p11(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let geoms = geom_polys_from_series(*b.n.end());
    for n in b.n.clone() {
        let lhs = Poly::new(
            ctx.stirling2_row(n)
                .into_iter()
                .enumerate()
                .map(|(k, s)| if k == 0 { Q::zero() } else { z(s) * fact(ctx, k - 1) })
                .collect(),
        );
        let closed = if n > 1 {
            Poly::new(vec![Q::one(), Q::one()]) * geoms[n - 1].clone()
        } else {
            x()
        };
        let integral = integrate_over_t(&geoms[n]);
        t.all_eq(params!(n = n), vec![lhs.into(), closed.into(), integral.into()]);
    }
}

pub(super) fn c12(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let x_plus_x2 = Poly::new(vec![Q::zero(), Q::one(), Q::one()]);
    for n in b.n.clone() {
        let prev = geom_poly(ctx, n - 1);
        let rhs = x() * prev.clone() + x_plus_x2.clone() * prev.derivative();
        t.eq(params!(n = n), geom_poly(ctx, n), rhs);
    }
}

pub(super) fn c13(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let fubini = fubini_by_recurrence(*b.n.end());
    for n in b.n.clone() {
        let terms: Vec<Q> = (1..=n).map(|k| s2(ctx, n, k) * fact(ctx, k - 1)).collect();
        let plain: Q = terms.iter().cloned().sum();
        let rhs = if n > 1 { int(2) * &fubini[n - 1] } else { Q::one() };
        t.eq(params!(n = n, x = 1), plain, rhs);
        let alternating: Q = terms.iter().enumerate().map(|(i, v)| sgn(i + 1) * v).sum();
        let rhs = if n > 1 { Q::zero() } else { int(-1) };
        t.eq(params!(n = n, x = -1), alternating, rhs);
    }
}

/// Smallest `K` whose geometric tail bound for `sum_{k>K} k^n / 2^{k+1}`
/// is below `eps`, with that bound.
///
/// For `k >= K` consecutive terms have ratio at most
/// `r = (1 + 1/K)^n / 2`, so once `r < 1` the tail is at most
/// `(K^n / 2^K) / (1 - r)`.
pub(crate) fn fubini_tail_cutoff(n: usize, eps: &Q) -> (usize, Q) {
    let two = int(2);
    let mut k = 1usize;
    loop {
        let kq = q(k);
        let ratio = pw(&((&kq + Q::one()) / &kq), n) / &two;
        if ratio < Q::one() {
            let bound = pw(&kq, n) / pw(&two, k) / (Q::one() - ratio);
            if &bound < eps {
                return (k, bound);
            }
        }
        k += 1;
    }
}

pub(super) fn e30(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let eps = Q::from_float(b.eps).unwrap_or_else(|| rat(1, 1_000_000_000_000));
    let two = int(2);
    for n in b.n.clone() {
        let (cutoff, _) = fubini_tail_cutoff(n, &eps);
        let partial: Q = (0..=cutoff).map(|k| pw(&q(k), n) / pw(&two, k + 1)).sum();
        t.within(params!(n = n, terms = cutoff + 1), partial, z(ctx.fubini(n)), b.eps);
    }
    t.note("series truncated where the geometric tail bound drops below eps; partial sums exact");
}

pub(super) fn c14(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    for n in b.n.clone() {
        let lhs: Q = (2..=n)
            .map(|k| s2(ctx, n, k) * fact(ctx, k - 2) * sgn(k))
            .sum();
        t.eq(params!(n = n), lhs, q(n - 1));
    }
    let order = b.order;
    let f = Egf::from_fn(order, |m| if m < 2 { Q::zero() } else { fact(ctx, m - 2) * sgn(m) });
    let one = Q::one();
    let routes = stirling_substitution_routes(ctx, &f, &one, &one).expect("lambda is nonzero");
    let expected: Vec<Q> = (0..=order).map(|m| if m < 2 { Q::zero() } else { q(m - 1) }).collect();
    t.all_eq(
        params!(form = "series", order = order),
        vec![
            routes.via_composition.into(),
            routes.via_weighted_sum.into(),
            expected.into(),
        ],
    );
}

pub(super) fn t15(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let bell_seq = Sequence::from_fn(hi + 1, |k| z(ctx.bell(k))).expect("nonempty");
    let binomial_side = binomial_transform(&bell_seq, BinomialSign::Alternating);
    let bell = bell_by_recurrence(hi);
    for n in b.n.clone() {
        let stirling_side: Q = (0..=n)
            .map(|k| s2(ctx, n, k) * sgn(k) * z(ctx.derangement(k)))
            .sum::<Q>()
            * sgn(n);
        let partial: Q = Q::one() + (0..n).map(|j| sgn(j + 1) * &bell[j]).sum::<Q>();
        t.all_eq(
            params!(n = n),
            vec![stirling_side.into(), binomial_side[n].clone().into(), partial.into()],
        );
    }
}

pub(super) fn l16(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let hi = *b.n.end();
    let tri: Vec<P> = (0..=hi + 1).map(|k| exp_poly_from_triangle(ctx, k)).collect();
    let rec = exp_polys(hi);
    for n in b.n.clone() {
        let lhs = psum((0..=n).map(|k| tri[k].scale(&(binom(n, k) * sgn(k)))));
        let rhs = P::one() + x() * psum((0..n).map(|j| rec[j].scale(&sgn(j + 1))));
        t.eq(params!(n = n, form = "phi_k"), lhs, rhs);
        let shifted = psum((0..=n).map(|k| tri[k + 1].scale(&(binom(n, k) * sgn(k)))));
        t.eq(params!(n = n, form = "phi_{k+1}"), shifted, (x() * rec[n].clone()).scale(&sgn(n)));
    }
}

pub(super) fn gf6(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    let log = Egf::<Q>::elementary(&Elementary::Log1p, order);
    for p in b.p.clone() {
        let damp = Egf::elementary(&Elementary::Pow1p(-q(p)), order);
        let lhs = log.mul(&damp).expect("same order").scale(&int(-1));
        let rhs: Vec<Q> = (0..=order)
            .map(|m| sgn(m) * fact(ctx, m) * ctx.hyperharmonic(p, m))
            .collect();
        t.eq(params!(p = p, order = order), lhs.into_coeffs(), rhs);
    }
    if b.p.contains(&0) {
        t.note("p = 0 uses h_n^(0) = 1/n");
    }
}

pub(super) fn dil(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    let dilog = Egf::<Q>::elementary(&Elementary::Dilog, order);
    // -t/(1-t) has EGF coefficients -m!
    let inner = Egf::from_fn(order, |m| if m == 0 { Q::zero() } else { -fact(ctx, m) });
    let lhs = dilog.compose(&inner).expect("zero constant term");
    let rhs: Vec<Q> = (0..=order)
        .map(|m| if m == 0 { Q::zero() } else { -fact(ctx, m - 1) * ctx.harmonic(m) })
        .collect();
    t.eq(params!(form = "harmonic", order = order), lhs.into_coeffs(), rhs);

    // 1 - e^{-t} has EGF coefficients (-1)^{m+1}
    let inner = Egf::from_fn(order, |m| if m == 0 { Q::zero() } else { sgn(m + 1) });
    let lhs = dilog.compose(&inner).expect("zero constant term");
    let integrated = Egf::from_fn(order, |m| ctx.bernoulli(m)).integrate().truncate(order);
    let rhs: Vec<Q> = (0..=order)
        .map(|m| if m == 0 { Q::zero() } else { ctx.bernoulli(m - 1) })
        .collect();
    t.all_eq(
        params!(form = "bernoulli", order = order),
        vec![lhs.into_coeffs().into(), integrated.into_coeffs().into(), rhs.into()],
    );
}

fn sample_sequences(order: usize) -> Vec<(&'static str, Vec<Q>)> {
    vec![
        (
            "(k^2+1)(-1)^k/(k+2)",
            (0..=order).map(|k| sgn(k) * rat((k * k + 1) as i64, k as i64 + 2)).collect(),
        ),
        (
            "C(1/3,k)",
            (0..=order).map(|k| binomial_rational(&rat(1, 3), k)).collect(),
        ),
    ]
}

pub(super) fn l4(_ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    let lambdas = [int(1), rat(1, 2), int(-2), int(3)];
    for (name, a) in sample_sequences(order) {
        let g = PowerSeries::new(a.clone()).expect("nonempty");
        for lambda in &lambdas {
            for (form, s) in [("1-lt", -lambda.clone()), ("1+lt", lambda.clone())] {
                let denom = PowerSeries::from_fn(order, |m| match m {
                    0 => Q::one(),
                    1 => s.clone(),
                    _ => Q::zero(),
                });
                let lhs = g.mul(&denom.reciprocal().expect("unit constant term")).expect("same order");
                let ratio = -s.clone();
                let rhs: Vec<Q> = (0..=order)
                    .map(|n| (0..=n).map(|k| &a[k] * pw(&ratio, n - k)).sum())
                    .collect();
                t.eq(
                    params!(a = name, lambda = crate::exact::format_rational(lambda), form = form),
                    lhs.coeffs().to_vec(),
                    rhs,
                );
            }
        }
    }
}

pub(super) fn logt(_ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    // ln(1+t)/t: drop the zero constant term of ln(1+t)
    let log = Egf::<Q>::elementary(&Elementary::Log1p, order + 1).to_ordinary();
    let quotient = PowerSeries::new(log.coeffs()[1..].to_vec()).expect("nonempty");
    for (name, a) in sample_sequences(order) {
        let g = PowerSeries::new(a.clone()).expect("nonempty");
        let lhs = quotient.mul(&g).expect("same order");
        let rhs: Vec<Q> = (0..=order)
            .map(|n| (0..=n).map(|k| &a[k] * sgn(n - k) / q(n - k + 1)).sum())
            .collect();
        t.eq(params!(a = name, order = order), lhs.coeffs().to_vec(), rhs);
    }
}

pub(super) fn bellgf(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    let expm1 = Egf::<Q>::elementary(&Elementary::Expm1, order);
    let via_exp = expm1.exp().expect("zero constant term");
    let via_compose = Egf::elementary(&Elementary::Exp, order)
        .compose(&expm1)
        .expect("zero constant term");
    let bell = bell_by_recurrence(order);
    t.all_eq(
        params!(order = order),
        vec![
            via_exp.into_coeffs().into(),
            via_compose.into_coeffs().into(),
            bell.clone().into(),
        ],
    );
    let triangle: Vec<Q> = (0..=order).map(|n| z(ctx.bell(n))).collect();
    t.eq(params!(order = order, form = "row sums"), triangle, bell);
}

pub(super) fn dergf(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    let damp = Egf::from_fn(order, sgn);
    let geom = Egf::<Q>::elementary(&Elementary::Geom, order);
    let lhs = damp.mul(&geom).expect("same order");
    let rhs: Vec<Q> = (0..=order).map(|n| z(ctx.derangement(n))).collect();
    t.eq(params!(order = order), lhs.into_coeffs(), rhs);
}

pub(super) fn phigf(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    let order = b.order;
    let inner = Egf::from_fn(order, |k| if k == 0 { P::zero() } else { x() });
    let series = inner.exp().expect("zero constant term").into_coeffs();
    let rec = exp_polys(order);
    for n in 0..=order {
        t.all_eq(
            params!(n = n, order = order),
            vec![
                series[n].clone().into(),
                rec[n].clone().into(),
                exp_poly_from_triangle(ctx, n).into(),
            ],
        );
    }
}

#[derive(Clone, Copy)]
enum Substitution {
    Exp,
    Log,
}

fn route_instance(
    ctx: &SeqContext,
    t: &mut Tally,
    name: &str,
    f: &Egf<Q>,
    kind: Substitution,
    lambda: &Q,
    mu: &Q,
    expected: Option<Vec<Q>>,
) {
    let routes = match kind {
        Substitution::Exp => stirling_substitution_routes(ctx, f, lambda, mu),
        Substitution::Log => log_substitution_routes(ctx, f, lambda, mu),
    }
    .expect("lambda is nonzero");
    let mut values: Vec<Value> = vec![routes.via_composition.into(), routes.via_weighted_sum.into()];
    if let Some(e) = expected {
        values.push(e.into());
    }
    let kind_name = match kind {
        Substitution::Exp => "exp",
        Substitution::Log => "log",
    };
    t.all_eq(
        params!(
            f = name,
            kind = kind_name,
            lambda = crate::exact::format_rational(lambda),
            mu = crate::exact::format_rational(mu),
        ),
        values,
    );
}

pub(super) fn routes(ctx: &SeqContext, b: &Bounds, t: &mut Tally) {
    use Substitution::{Exp, Log};
    let order = b.order;
    let (one, minus) = (Q::one(), int(-1));
    let upto = |f: &dyn Fn(usize) -> Q| (0..=order).map(f).collect::<Vec<Q>>();

    let exp = Egf::<Q>::elementary(&Elementary::Exp, order);
    route_instance(ctx, t, "e^t", &exp, Exp, &one, &one, Some(bell_by_recurrence(order)));

    let euler = euler_polys(order);
    for xv in [int(0), rat(1, 2), rat(1, 3), int(2)] {
        let f = Egf::from_fn(order, |n| euler[n].eval(&xv));
        let closed = upto(&|n| {
            fact(ctx, n)
                * (0..=n)
                    .map(|k| binomial_rational(&xv, k) * sgn(k) / pw(&int(2), n - k))
                    .sum::<Q>()
        });
        let name = format!("euler x={}", crate::exact::format_rational(&xv));
        route_instance(ctx, t, &name, &f, Log, &minus, &minus, Some(closed));
    }

    let dilog = Egf::from_fn(order, |n| if n == 0 { Q::zero() } else { ctx.bernoulli(n - 1) });
    let third = upto(&|n| if n == 0 { Q::zero() } else { sgn(n) * fact(ctx, n) / (q(n) * q(n)) });
    route_instance(ctx, t, "Li2(1-e^-t)", &dilog, Log, &one, &minus, Some(third));
    let first = upto(&|n| if n == 0 { Q::zero() } else { -fact(ctx, n - 1) * ctx.harmonic(n) });
    route_instance(ctx, t, "Li2(1-e^-t)", &dilog, Log, &minus, &minus, Some(first));

    for p in 0..=3usize {
        let f = Egf::from_fn(order, |n| sgn(n) * fact(ctx, n) * ctx.hyperharmonic(p, n));
        let closed = upto(&|n| if n == 0 { Q::zero() } else { sgn(n) * q(n) * pw(&q(p), n - 1) });
        let name = format!("-ln(1+t)/(1+t)^{p}");
        route_instance(ctx, t, &name, &f, Exp, &one, &one, Some(closed));
    }

    let der = Egf::from_fn(order, |n| z(ctx.derangement(n)));
    let bell = bell_by_recurrence(order);
    let closed = upto(&|n| (0..=n).map(|k| binom(n, k) * sgn(n - k) * &bell[k]).sum());
    route_instance(ctx, t, "e^-t/(1-t)", &der, Exp, &one, &minus, Some(closed));

    let params = [int(-2), int(-1), int(1), int(2), rat(1, 2)];
    for (name, a) in sample_sequences(order) {
        let f = Egf::from_sequence(a).expect("nonempty");
        for lambda in &params {
            for mu in &params {
                for kind in [Exp, Log] {
                    route_instance(ctx, t, name, &f, kind, lambda, mu, None);
                }
            }
        }
    }
}
