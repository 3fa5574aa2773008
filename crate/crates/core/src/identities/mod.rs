//! Registry of identities, each checked exactly over a parameter range.
//!
//! Every entry evaluates its two sides through different code paths (for
//! instance a Stirling-weighted sum against a closed form, or a series
//! composition against a triangle) and records a counterexample with the
//! full exact values of both sides whenever they differ.
//!
//! Only `E30` is approximate: it compares an exactly summed partial series
//! against the ordered Bell number with an explicit tail bound.

mod checks;
mod registry;

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};
use crate::poly::Poly;
use crate::seq::SeqContext;

pub use registry::list_identities;

pub const DEFAULT_MAX_N: usize = 40;
pub const DEFAULT_ORDER: usize = 12;
pub const DEFAULT_EPS: f64 = 1e-12;
pub const MAX_ORDER: usize = 64;

/// How the two sides of an identity are compared.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckKind {
    Scalar,
    /// Coefficientwise equality in `x`.
    Polynomial,
    /// Truncated coefficient equality up to the series order.
    Series,
    /// `|lhs - rhs| < eps`.
    NumericTolerance,
}

/// The computational route one side of an identity is evaluated by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// Sum weighted by `S(n,k)` or `s(n,k)` read from the triangles.
    StirlingSum,
    /// Whole-sequence Stirling transform or its inverse.
    Transform,
    /// Closed form in factorials, powers and harmonic numbers.
    ClosedForm,
    /// A recurrence independent of the triangle being summed.
    Recurrence,
    /// Plain finite summation without Stirling weights.
    DirectSum,
    /// Polynomial family built from its defining series or recurrence.
    PolynomialFamily,
    /// Combination of `C(x, k)` binomial polynomials.
    BinomialPolynomial,
    /// `(x d/dx)` operator calculus on exponential polynomials.
    XdOperator,
    /// Nested Bernoulli-weighted sums.
    BernoulliSum,
    /// Binomial transform.
    BinomialTransform,
    /// Truncated series composition or exponentiation.
    SeriesComposition,
    /// Truncated series products and reciprocals.
    SeriesProduct,
    /// Exact partial sum of a convergent series.
    PartialSum,
}

/// Parameter ranges an identity is defined on.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    /// Smallest admissible `n`.
    pub n_start: usize,
    /// Hard ceiling on `n` used by the full suite; `None` if only `max_n` limits it.
    pub n_cap: Option<usize>,
    /// Default range of the auxiliary parameter `p`, if the identity has one.
    pub p: Option<RangeInclusive<usize>>,
}

/// Resolved parameters for one run of a checker.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub n: RangeInclusive<usize>,
    pub p: RangeInclusive<usize>,
    pub order: usize,
    pub eps: f64,
}

pub(crate) type Checker = fn(&SeqContext, &Bounds, &mut Tally);

#[derive(Clone)]
pub struct IdentitySpec {
    pub id: &'static str,
    pub description: &'static str,
    /// The identity written out in plain notation.
    pub statement: &'static str,
    pub kind: CheckKind,
    /// Routes used for the left and right side.
    pub routes: (Route, Route),
    pub domain: Domain,
    pub(crate) checker: Checker,
}

impl std::fmt::Debug for IdentitySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentitySpec")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("routes", &self.routes)
            .field("domain", &self.domain)
            .finish()
    }
}

impl IdentitySpec {
    fn bounds(&self, n_hi: usize, p_hi: Option<usize>, order: usize, eps: f64) -> Bounds {
        let p = match (&self.domain.p, p_hi) {
            (Some(r), Some(hi)) => *r.start()..=hi,
            (Some(r), None) => r.clone(),
            (None, _) => 0..=0,
        };
        Bounds {
            n: self.domain.n_start..=n_hi,
            p,
            order,
            eps,
        }
    }

    fn capped(&self, max_n: usize) -> usize {
        self.domain.n_cap.map_or(max_n, |cap| cap.min(max_n))
    }

    pub fn run(&self, ctx: &SeqContext, bounds: &Bounds) -> IdentityReport {
        let mut tally = Tally::default();
        (self.checker)(ctx, bounds, &mut tally);
        IdentityReport {
            id: self.id.to_string(),
            checked: tally.checked,
            failures: tally.failures,
            notes: tally.notes,
        }
    }
}

/// Optional replacements for an identity's default range.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub max_n: Option<usize>,
    pub max_p: Option<usize>,
    pub order: Option<usize>,
    pub eps: Option<f64>,
}

/// A value on one side of an identity instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Rational),
    Poly(Poly<Rational>),
    Series(Vec<Rational>),
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Scalar(q)
    }
}

impl From<Poly<Rational>> for Value {
    fn from(p: Poly<Rational>) -> Self {
        Value::Poly(p)
    }
}

impl From<Vec<Rational>> for Value {
    fn from(v: Vec<Rational>) -> Self {
        Value::Series(v)
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Scalar(q) => write!(f, "{}", format_rational(q)),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Series(v) => {
                let parts: Vec<String> = v.iter().map(format_rational).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list = |v: &[Rational], s: S| {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        };
        match self {
            Value::Scalar(q) => s.serialize_str(&format_rational(q)),
            Value::Poly(p) => list(p.coeffs(), s),
            Value::Series(v) => list(v, s),
        }
    }
}

/// Named parameter assignment, serialized as an object in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params(pub Vec<(&'static str, String)>);

impl Params {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| *k == name).map(|(_, v)| v.as_str())
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            match v.parse::<i64>() {
                Ok(i) => map.serialize_entry(k, &i)?,
                Err(_) => map.serialize_entry(k, v)?,
            }
        }
        map.end()
    }
}

macro_rules! params {
    ($($name:ident = $value:expr),* $(,)?) => {
        $crate::identities::Params(vec![$((stringify!($name), ($value).to_string())),*])
    };
}
pub(crate) use params;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub params: Params,
    pub lhs: Value,
    pub rhs: Value,
}

/// Outcome of checking one identity; it passed iff `failures` is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub checked: usize,
    pub failures: Vec<Failure>,
    /// Conventions the checked instances depend on.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Accumulates instance outcomes for one identity.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    checked: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
}

impl Tally {
    pub(crate) fn eq(&mut self, params: Params, lhs: impl Into<Value>, rhs: impl Into<Value>) {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(Failure { params, lhs, rhs });
        }
    }

    /// One instance asserting that every value in `values` is equal.
    pub(crate) fn all_eq(&mut self, params: Params, values: Vec<Value>) {
        self.checked += 1;
        if let Some(w) = values.windows(2).find(|w| w[0] != w[1]) {
            self.failures.push(Failure {
                params,
                lhs: w[0].clone(),
                rhs: w[1].clone(),
            });
        }
    }

    pub(crate) fn within(&mut self, params: Params, lhs: Rational, rhs: Rational, eps: f64) {
        self.checked += 1;
        let gap = crate::exact::to_f64(&num_traits::Signed::abs(&(&lhs - &rhs)));
        if !(gap < eps) {
            self.failures.push(Failure {
                params,
                lhs: Value::Scalar(lhs),
                rhs: Value::Scalar(rhs),
            });
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }
}

pub fn find_identity(id: &str) -> Result<IdentitySpec> {
    list_identities()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Checks one identity with a fresh context.
pub fn check_identity(id: &str, overrides: &Overrides) -> Result<IdentityReport> {
    check_identity_with(&SeqContext::new(), id, overrides)
}

/// Checks one identity. Without an `n` override the range is the suite
/// default intersected with the identity's own cap; an explicit `max_n`
/// replaces the upper end outright.
pub fn check_identity_with(
    ctx: &SeqContext,
    id: &str,
    overrides: &Overrides,
) -> Result<IdentityReport> {
    let spec = find_identity(id)?;
    let n_hi = overrides.max_n.unwrap_or_else(|| spec.capped(DEFAULT_MAX_N));
    let bounds = spec.bounds(
        n_hi,
        overrides.max_p,
        overrides.order.unwrap_or(DEFAULT_ORDER),
        overrides.eps.unwrap_or(DEFAULT_EPS),
    );
    Ok(spec.run(ctx, &bounds))
}

/// Suite-wide settings for [`run_all`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// At least 5.
    pub max_n: usize,
    pub max_p: Option<usize>,
    pub order: usize,
    pub eps: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_n: DEFAULT_MAX_N,
            max_p: None,
            order: DEFAULT_ORDER,
            eps: DEFAULT_EPS,
        }
    }
}

/// Checks every registered identity, each over its domain intersected with
/// `max_n`. Reports come back in registry order.
pub fn run_all(max_n: usize, order: usize, eps: f64) -> Vec<IdentityReport> {
    run_all_with(
        &SeqContext::new(),
        &RunConfig {
            max_n,
            max_p: None,
            order,
            eps,
        },
    )
}

pub fn run_all_with(ctx: &SeqContext, config: &RunConfig) -> Vec<IdentityReport> {
    list_identities()
        .par_iter()
        .map(|spec| {
            let bounds = spec.bounds(spec.capped(config.max_n), config.max_p, config.order, config.eps);
            spec.run(ctx, &bounds)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn tally_records_exact_values() {
        let mut t = Tally::default();
        t.eq(params!(n = 3), int(1), int(1));
        t.eq(params!(n = 4), rat(1, 2), rat(1, 3));
        t.within(params!(n = 5), rat(1, 3), rat(1, 3) + rat(1, 1_000_000), 1e-3);
        t.within(params!(n = 6), int(0), rat(1, 100), 1e-3);
        assert_eq!(t.checked, 4);
        assert_eq!(t.failures.len(), 2);
        assert_eq!(t.failures[0].params.get("n"), Some("4"));
        assert_eq!(t.failures[0].lhs, Value::Scalar(rat(1, 2)));
    }

    #[test]
    fn report_json_shape() {
        let report = IdentityReport {
            id: "X".into(),
            checked: 2,
            failures: vec![Failure {
                params: params!(n = 2, x = "1/2"),
                lhs: Value::Scalar(rat(-3, 2)),
                rhs: Value::Poly(Poly::new(vec![int(0), int(1)])),
            }],
            notes: vec!["hidden".into()],
        };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"id":"X","checked":2,"failures":[{"params":{"n":2,"x":"1/2"},"lhs":"-3/2","rhs":["0","1"]}]}"#
        );
        let empty = IdentityReport {
            id: "Y".into(),
            checked: 0,
            failures: vec![],
            notes: vec![],
        };
        assert!(serde_json::to_string(&empty).unwrap().contains(r#""failures":[]"#));
    }

    #[test]
    fn unknown_id() {
        assert_eq!(
            check_identity("NOPE", &Overrides::default()),
            Err(Error::UnknownIdentity("NOPE".into()))
        );
    }

    #[test]
    fn worked_instances() {
        let ctx = SeqContext::new();
        let b = |lo: usize, hi: usize| Bounds { n: lo..=hi, p: 0..=0, order: 12, eps: 1e-12 };
        let only = |id: &str, bounds: &Bounds| find_identity(id).unwrap().run(&ctx, bounds);
        for id in ["T1b", "T6a", "T15", "C13", "C14", "C10", "E22", "T3b", "E9"] {
            let r = only(id, &b(3.min(find_identity(id).unwrap().domain.n_start.max(2)), 3));
            assert!(r.passed(), "{id}: {:?}", r.failures);
        }
        // exact values behind those instances
        let t1b: Rational = (0..=3usize)
            .map(|k| {
                Rational::from_integer(ctx.stirling2(3, k))
                    * crate::exact::sign::<Rational>(k)
                    * Rational::from_integer(ctx.factorial(k))
                    * ctx.harmonic(k)
            })
            .sum();
        assert_eq!(t1b, int(-3));
        let t6a = Rational::from_integer(ctx.stirling1(2, 1)) * ctx.bernoulli(0)
            + Rational::from_integer(ctx.stirling1(2, 2)) * ctx.bernoulli(1);
        assert_eq!(t6a, rat(-3, 2));
        let c10: Rational = (1..=2usize)
            .map(|k| Rational::from_integer(ctx.stirling2(2, k)) / int(k as i64))
            .sum();
        assert_eq!(c10, rat(3, 2));
        let e22: Rational = (1..=2usize)
            .map(|k| Rational::from_integer(ctx.stirling2(2, k)) / int((k * k) as i64))
            .sum();
        assert_eq!(e22, rat(5, 4));
        assert_eq!(ctx.euler_number(2), rat(-1, 4));
    }

    #[test]
    fn full_suite_passes() {
        let reports = run_all(DEFAULT_MAX_N, DEFAULT_ORDER, DEFAULT_EPS);
        let ids: Vec<&str> = list_identities().iter().map(|s| s.id).collect();
        assert_eq!(reports.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ids);
        for r in &reports {
            assert!(r.passed(), "{} failed: {:?}", r.id, r.failures.first());
            assert!(r.checked > 0, "{} checked nothing", r.id);
        }
    }

    #[test]
    fn quick_mode_passes() {
        assert!(run_all(5, 6, 1e-12).iter().all(IdentityReport::passed));
    }

    #[test]
    fn t15_counts_one_instance_per_n() {
        let r = check_identity(
            "T15",
            &Overrides { max_n: Some(30), ..Overrides::default() },
        )
        .unwrap();
        assert_eq!(r.checked, 31);
        assert!(r.passed());
    }

    #[test]
    fn flipped_first_kind_entry_is_caught() {
        let ctx = SeqContext::new();
        let good = ctx.stirling1(3, 2);
        let ctx = ctx.with_stirling1_patch(3, 2, -good);
        let reports = run_all_with(&ctx, &RunConfig { max_n: 8, ..RunConfig::default() });
        for id in ["ORTH", "T6a"] {
            let r = reports.iter().find(|r| r.id == id).unwrap();
            assert!(!r.passed(), "{id} should fail");
            let f = &r.failures[0];
            assert_ne!(f.lhs, f.rhs);
            assert!(f.params.get("n").is_some());
        }
        let t6a = reports.iter().find(|r| r.id == "T6a").unwrap();
        assert_eq!(t6a.failures[0].params.get("n"), Some("3"));
    }

    #[test]
    fn e30_cutoff_bound() {
        let eps = rat(1, 1_000_000_000_000);
        for n in 0..=15 {
            let (k, bound) = checks::fubini_tail_cutoff(n, &eps);
            assert!(bound < eps);
            // brute tail over a long stretch stays under the bound
            let tail: Rational = (k + 1..k + 400)
                .map(|j| crate::exact::int_pow(&int(j as i64), n as u32)
                    / crate::exact::int_pow(&int(2), j as u32 + 1))
                .sum();
            assert!(tail <= bound, "n={n}");
        }
    }

    #[test]
    fn override_replaces_cap() {
        let r = check_identity("T1b", &Overrides { max_n: Some(60), ..Overrides::default() }).unwrap();
        assert_eq!(r.checked, 61);
        assert!(r.passed());
        let r = check_identity("T3a", &Overrides::default()).unwrap();
        assert_eq!(r.checked, 16);
    }
}
