//! Number families: Stirling triangles, Bell and ordered Bell numbers,
//! harmonic and hyperharmonic numbers, derangements, Bernoulli and Euler
//! numbers, power sums, and the Stirling moments `M(n, p)`.
//!
//! Triangles and the other recursively defined families are memoized in a
//! [`SeqContext`]. Table growth happens under a write lock, so a context can
//! be shared between threads and readers only ever see complete rows.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::RwLock;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int_pow, rat, serde_rational, Integer, Rational};
use crate::poly;

#[derive(Debug, Default)]
struct Tables {
    stirling2: Vec<Vec<Integer>>,
    stirling1: Vec<Vec<Integer>>,
    bell: Vec<Integer>,
    fubini: Vec<Integer>,
    factorial: Vec<Integer>,
    bernoulli: Vec<Rational>,
    harmonic: Vec<Rational>,
}

impl Tables {
    fn grow_stirling2(&mut self, n: usize) {
        while self.stirling2.len() <= n {
            let m = self.stirling2.len();
            let row = if m == 0 {
                vec![Integer::one()]
            } else {
                let prev = &self.stirling2[m - 1];
                (0..=m)
                    .map(|k| {
                        let stay = prev.get(k).map(|v| v * k).unwrap_or_default();
                        let join = if k > 0 { prev[k - 1].clone() } else { Integer::zero() };
                        stay + join
                    })
                    .collect()
            };
            self.stirling2.push(row);
        }
    }

    fn grow_stirling1(&mut self, n: usize) {
        // s(m, k) = s(m-1, k-1) - (m-1) s(m-1, k)
        while self.stirling1.len() <= n {
            let m = self.stirling1.len();
            let row = if m == 0 {
                vec![Integer::one()]
            } else {
                let prev = &self.stirling1[m - 1];
                (0..=m)
                    .map(|k| {
                        let shift = if k > 0 { prev[k - 1].clone() } else { Integer::zero() };
                        let scale = prev.get(k).map(|v| v * (m - 1)).unwrap_or_default();
                        shift - scale
                    })
                    .collect()
            };
            self.stirling1.push(row);
        }
    }

    fn grow_factorial(&mut self, n: usize) {
        if self.factorial.is_empty() {
            self.factorial.push(Integer::one());
        }
        while self.factorial.len() <= n {
            let m = self.factorial.len();
            let next = &self.factorial[m - 1] * m;
            self.factorial.push(next);
        }
    }

    fn grow_bell(&mut self, n: usize) {
        self.grow_stirling2(n);
        while self.bell.len() <= n {
            let m = self.bell.len();
            self.bell.push(self.stirling2[m].iter().sum());
        }
    }

    fn grow_fubini(&mut self, n: usize) {
        self.grow_stirling2(n);
        self.grow_factorial(n);
        while self.fubini.len() <= n {
            let m = self.fubini.len();
            let v = self.stirling2[m]
                .iter()
                .zip(&self.factorial)
                .map(|(s, f)| s * f)
                .sum();
            self.fubini.push(v);
        }
    }

    fn grow_bernoulli(&mut self, n: usize) {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
        while self.bernoulli.len() <= n {
            let m = self.bernoulli.len();
            if m == 0 {
                self.bernoulli.push(Rational::one());
                continue;
            }
            let acc: Rational = self
                .bernoulli
                .iter()
                .enumerate()
                .map(|(k, b)| b * Rational::from_integer(binomial(m as i64 + 1, k as i64)))
                .sum();
            self.bernoulli.push(-acc / Rational::from_integer(Integer::from(m + 1)));
        }
    }

    fn grow_harmonic(&mut self, n: usize) {
        if self.harmonic.is_empty() {
            self.harmonic.push(Rational::zero());
        }
        while self.harmonic.len() <= n {
            let m = self.harmonic.len();
            let next = &self.harmonic[m - 1] + rat(1, m as i64);
            self.harmonic.push(next);
        }
    }
}

/// Memo tables for every recursively defined family.
///
/// All accessors take `&self`; growth is serialized internally.
#[derive(Debug, Default)]
pub struct SeqContext {
    tables: RwLock<Tables>,
    stirling1_patches: HashMap<(usize, usize), Integer>,
}

impl SeqContext {
    pub fn new() -> Self {
        Self::default()
    }

    fn lookup<R>(
        &self,
        n: usize,
        grow: fn(&mut Tables, usize),
        get: impl Fn(&Tables) -> Option<R>,
    ) -> R {
        {
            let t = self.tables.read().expect("sequence tables poisoned");
            if let Some(v) = get(&t) {
                return v;
            }
        }
        let mut guard = self.tables.write().expect("sequence tables poisoned");
        grow(&mut guard, n);
        get(&guard).expect("table grown to the requested index")
    }

    /// A context whose `s(n, k)` lookups return `value` instead of the true
    /// entry. Only the lookup is patched; the rest of the triangle is
    /// computed as usual. Used to check that faults surface as counterexamples.
    pub fn with_stirling1_patch(mut self, n: usize, k: usize, value: Integer) -> Self {
        self.stirling1_patches.insert((n, k), value);
        self
    }

    /// Stirling numbers of the second kind; zero outside `0 <= k <= n`.
    pub fn stirling2(&self, n: usize, k: usize) -> Integer {
        if k > n {
            return Integer::zero();
        }
        self.lookup(n, Tables::grow_stirling2, |t| t
            .stirling2
            .get(n)
            .map(|row| row[k].clone()))
    }

    /// Signed Stirling numbers of the first kind:
    /// `x (x-1) ... (x-n+1) = sum_k s(n,k) x^k`.
    pub fn stirling1(&self, n: usize, k: usize) -> Integer {
        if let Some(v) = self.stirling1_patches.get(&(n, k)) {
            return v.clone();
        }
        if k > n {
            return Integer::zero();
        }
        self.lookup(n, Tables::grow_stirling1, |t| t
            .stirling1
            .get(n)
            .map(|row| row[k].clone()))
    }

    pub fn stirling2_row(&self, n: usize) -> Vec<Integer> {
        self.lookup(n, Tables::grow_stirling2, |t| t.stirling2.get(n).cloned())
    }

    pub fn stirling1_row(&self, n: usize) -> Vec<Integer> {
        let mut row: Vec<Integer> =
            self.lookup(n, Tables::grow_stirling1, |t| t.stirling1.get(n).cloned());
        for ((pn, pk), v) in &self.stirling1_patches {
            if *pn == n && *pk <= n {
                row[*pk] = v.clone();
            }
        }
        row
    }

    pub fn factorial(&self, n: usize) -> Integer {
        self.lookup(n, Tables::grow_factorial, |t| t.factorial.get(n).cloned())
    }

    /// Bell numbers `b_n`, the row sums of the `S(n, k)` triangle.
    pub fn bell(&self, n: usize) -> Integer {
        self.lookup(n, Tables::grow_bell, |t| t.bell.get(n).cloned())
    }

    /// Ordered Bell (Fubini) numbers `sum_k S(n,k) k!`.
    pub fn fubini(&self, n: usize) -> Integer {
        self.lookup(n, Tables::grow_fubini, |t| t.fubini.get(n).cloned())
    }

    /// `H_n`, with `H_0 = 0`.
    pub fn harmonic(&self, n: usize) -> Rational {
        self.lookup(n, Tables::grow_harmonic, |t| t.harmonic.get(n).cloned())
    }

    /// Hyperharmonic numbers `h_n^(p)`.
    ///
    /// For `p >= 1` this is `C(n+p-1, n) (H_{n+p-1} - H_{p-1})`. Order zero
    /// is `h_n^(0) = 1/n` for `n >= 1`, which is the coefficient sequence
    /// forced by `-ln(1+t)`; `h_0^(p) = 0` for every `p`.
    pub fn hyperharmonic(&self, p: usize, n: usize) -> Rational {
        if n == 0 {
            return Rational::zero();
        }
        if p == 0 {
            return rat(1, n as i64);
        }
        let c = binomial((n + p - 1) as i64, n as i64);
        Rational::from_integer(c) * (self.harmonic(n + p - 1) - self.harmonic(p - 1))
    }

    /// Bernoulli numbers with `B_1 = -1/2`, from
    /// `sum_{k<=m} C(m+1, k) B_k = 0`.
    pub fn bernoulli(&self, n: usize) -> Rational {
        self.lookup(n, Tables::grow_bernoulli, |t| t.bernoulli.get(n).cloned())
    }

    /// The `B_1 = +1/2` variant; every other index agrees with [`Self::bernoulli`].
    ///
    /// Some literature calls this sequence "Bernoulli numbers of the second
    /// kind", a name more commonly given to the Cauchy numbers. Only the
    /// sign of `B_1` differs here.
    pub fn bernoulli_plus(&self, n: usize) -> Rational {
        if n == 1 {
            rat(1, 2)
        } else {
            self.bernoulli(n)
        }
    }

    /// Euler numbers in the `E_n(1/2)` normalization (rational valued).
    /// The classical integer Euler numbers are `2^n E_n(1/2)`.
    pub fn euler_number(&self, n: usize) -> Rational {
        poly::euler_poly(n).eval(&rat(1, 2))
    }

    /// Derangements by inclusion-exclusion: `D_n = sum_j (-1)^j n!/j!`.
    pub fn derangement(&self, n: usize) -> Integer {
        let nf = self.factorial(n);
        (0..=n)
            .map(|j| {
                let term = &nf / self.factorial(j);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    /// Stirling moments `M(n, p) = sum_k S(n,k) k^p`, computed from Bell
    /// numbers by `M(n, p+1) = M(n+1, p) - sum_j C(p, j) M(n, j)`.
    pub fn moment(&self, n: usize, p: usize) -> Integer {
        // table[q][m - n] holds M(m, q) for n <= m <= n + p - q
        let mut table: Vec<Vec<Integer>> = Vec::with_capacity(p + 1);
        table.push((n..=n + p).map(|m| self.bell(m)).collect());
        for q in 0..p {
            let next: Vec<Integer> = (0..p - q)
                .map(|off| {
                    let correction: Integer = (0..=q)
                        .map(|j| binomial(q as i64, j as i64) * &table[j][off])
                        .sum();
                    &table[q][off + 1] - correction
                })
                .collect();
            table.push(next);
        }
        table[p][0].clone()
    }

    /// Direct evaluation of `sum_k S(n,k) k^p`.
    pub fn moment_direct(&self, n: usize, p: usize) -> Integer {
        self.stirling2_row(n)
            .iter()
            .enumerate()
            .map(|(k, s)| s * int_pow(&Integer::from(k), p as u32))
            .sum()
    }
}

/// `1^p + 2^p + ... + n^p` by direct summation.
pub fn power_sum(p: usize, n: usize) -> Integer {
    (1..=n).map(|m| int_pow(&Integer::from(m), p as u32)).sum()
}

/// The Bernoulli power-sum formula
/// `n^p + 1/(p+1) sum_{k=1}^{p+1} C(p+1, k) B_{p+1-k} n^k`.
///
/// Agrees with [`power_sum`] for `p >= 1`. At `p = 0` the `n^0 = 1` term
/// counts `0^0`, so the formula yields `n + 1` rather than `n`.
pub fn faulhaber(ctx: &SeqContext, p: usize, n: usize) -> Rational {
    let nn = Rational::from_integer(Integer::from(n));
    let tail: Rational = (1..=p + 1)
        .map(|k| {
            Rational::from_integer(binomial(p as i64 + 1, k as i64))
                * ctx.bernoulli(p + 1 - k)
                * int_pow(&nn, k as u32)
        })
        .sum();
    int_pow(&nn, p as u32) + tail / Rational::from_integer(Integer::from(p + 1))
}

/// One row of a sequence table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexedValue {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

/// Named one-index (or parameterized) families, for tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Factorial,
    Bell,
    Fubini,
    Harmonic,
    Hyperharmonic,
    Derangement,
    Bernoulli,
    BernoulliPlus,
    Euler,
    PowerSum,
    Faulhaber,
    Moment,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Factorial,
        Family::Bell,
        Family::Fubini,
        Family::Harmonic,
        Family::Hyperharmonic,
        Family::Derangement,
        Family::Bernoulli,
        Family::BernoulliPlus,
        Family::Euler,
        Family::PowerSum,
        Family::Faulhaber,
        Family::Moment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Factorial => "factorial",
            Family::Bell => "bell",
            Family::Fubini => "fubini",
            Family::Harmonic => "harmonic",
            Family::Hyperharmonic => "hyperharmonic",
            Family::Derangement => "derangement",
            Family::Bernoulli => "bernoulli",
            Family::BernoulliPlus => "bernoulli-plus",
            Family::Euler => "euler",
            Family::PowerSum => "power-sum",
            Family::Faulhaber => "faulhaber",
            Family::Moment => "moment",
        }
    }

    /// Families indexed by an extra parameter `p`.
    pub fn takes_p(self) -> bool {
        matches!(
            self,
            Family::Hyperharmonic | Family::PowerSum | Family::Faulhaber | Family::Moment
        )
    }

    pub fn value(self, ctx: &SeqContext, n: usize, p: usize) -> Rational {
        let z = |v: Integer| Rational::from_integer(v);
        match self {
            Family::Factorial => z(factorial(n as u64)),
            Family::Bell => z(ctx.bell(n)),
            Family::Fubini => z(ctx.fubini(n)),
            Family::Harmonic => ctx.harmonic(n),
            Family::Hyperharmonic => ctx.hyperharmonic(p, n),
            Family::Derangement => z(ctx.derangement(n)),
            Family::Bernoulli => ctx.bernoulli(n),
            Family::BernoulliPlus => ctx.bernoulli_plus(n),
            Family::Euler => ctx.euler_number(n),
            Family::PowerSum => z(power_sum(p, n)),
            Family::Faulhaber => faulhaber(ctx, p, n),
            Family::Moment => z(ctx.moment(n, p)),
        }
    }

    /// Rows `0..=n_max`.
    pub fn table(self, ctx: &SeqContext, n_max: usize, p: usize) -> Vec<IndexedValue> {
        (0..=n_max)
            .map(|n| IndexedValue {
                n,
                k: None,
                p: self.takes_p().then_some(p),
                value: self.value(ctx, n, p),
            })
            .collect()
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownKind {
                what: "sequence",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Stirling2,
    Stirling1,
    Binomial,
}

impl Triangle {
    pub fn entry(self, ctx: &SeqContext, n: usize, k: usize) -> Integer {
        match self {
            Triangle::Stirling2 => ctx.stirling2(n, k),
            Triangle::Stirling1 => ctx.stirling1(n, k),
            Triangle::Binomial => binomial(n as i64, k as i64),
        }
    }

    /// Row-major entries `(n, k)` for `0 <= k <= n <= n_max`.
    pub fn table(self, ctx: &SeqContext, n_max: usize) -> Vec<IndexedValue> {
        (0..=n_max)
            .flat_map(|n| (0..=n).map(move |k| (n, k)))
            .map(|(n, k)| IndexedValue {
                n,
                k: Some(k),
                p: None,
                value: Rational::from_integer(self.entry(ctx, n, k)),
            })
            .collect()
    }
}

impl FromStr for Triangle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stirling2" => Ok(Triangle::Stirling2),
            "stirling1" => Ok(Triangle::Stirling1),
            "binomial" => Ok(Triangle::Binomial),
            _ => Err(Error::UnknownKind {
                what: "triangle",
                name: s.to_string(),
            }),
        }
    }
}
