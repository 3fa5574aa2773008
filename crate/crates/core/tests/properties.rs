use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use stirlingkit::egf::{log_substitution_routes, stirling_substitution_routes};
use stirlingkit::exact::{binomial, format_rational, int, parse_rational, rat};
use stirlingkit::expr::{eval, eval_str, parse, Env};
use stirlingkit::seq::Family;
use stirlingkit::transform::{
    binomial_transform, stirling_inverse, stirling_transform, BinomialSign,
};
use stirlingkit::{QEgf, QSequence, Rational, SeqContext};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(p, q)| rat(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn sequence(max_len: usize) -> impl Strategy<Value = QSequence> {
    prop::collection::vec(small_rational(), 1..=max_len).prop_map(|v| QSequence::new(v).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * a.recip(), Rational::one());
        }
    }

    #[test]
    fn canonical_form(p in -1000i64..=1000, q in 1i64..=1000) {
        let r = rat(p, q);
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().gcd(r.denom()).is_one());
        prop_assert_eq!(r, rat(-p, -q));
    }

    #[test]
    fn format_parse_round_trip(r in small_rational()) {
        let s = format_rational(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        if r.is_integer() {
            prop_assert!(!s.contains('/'));
        }
    }

    #[test]
    fn pascal_rule(n in 1i64..60, k in -2i64..62) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }

    #[test]
    fn stirling_round_trip(a in sequence(25)) {
        let ctx = SeqContext::new();
        let back = stirling_inverse(&ctx, &stirling_transform(&ctx, &a));
        prop_assert_eq!(back.values(), a.values());
        let forth = stirling_transform(&ctx, &stirling_inverse(&ctx, &a));
        prop_assert_eq!(forth.values(), a.values());
    }

    #[test]
    fn binomial_round_trip(a in sequence(25)) {
        let plain = binomial_transform(&a, BinomialSign::Plain);
        let back = binomial_transform(&plain, BinomialSign::Alternating);
        // the alternating transform inverts the plain one up to the sign (-1)^n
        for (n, (x, y)) in back.values().iter().zip(a.values()).enumerate() {
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            prop_assert_eq!(x, &(y * sign));
        }
    }

    #[test]
    fn stirling_transform_is_linear(
        (a, b) in (1usize..=20).prop_flat_map(|n| (
            prop::collection::vec(small_rational(), n),
            prop::collection::vec(small_rational(), n),
        )),
        c in small_rational(),
    ) {
        let ctx = SeqContext::new();
        let combo: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x * &c + y).collect();
        let ta = stirling_transform(&ctx, &QSequence::new(a).unwrap());
        let tb = stirling_transform(&ctx, &QSequence::new(b).unwrap());
        let tc = stirling_transform(&ctx, &QSequence::new(combo).unwrap());
        for i in 0..tc.values().len() {
            prop_assert_eq!(&tc[i], &(&ta[i] * &c + &tb[i]));
        }
    }

    #[test]
    fn substitution_routes_agree(
        coeffs in prop::collection::vec(small_rational(), 1..=10),
        lambda in nonzero_rational(),
        mu in small_rational(),
    ) {
        let ctx = SeqContext::new();
        let f = QEgf::from_sequence(coeffs).unwrap();
        prop_assert!(stirling_substitution_routes(&ctx, &f, &lambda, &mu).unwrap().agreed().is_ok());
        prop_assert!(log_substitution_routes(&ctx, &f, &lambda, &mu).unwrap().agreed().is_ok());
    }

    #[test]
    fn printed_ast_reparses_to_itself(src in expression()) {
        let ast = parse(&src).unwrap();
        let printed = ast.to_string();
        let again = parse(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed);
        let ctx = SeqContext::new();
        let env = Env::new(&ctx).bind("n", int(4)).bind("x", rat(2, 3));
        prop_assert_eq!(eval(&ast, &env).ok(), eval(&again, &env).ok());
    }

    #[test]
    fn eval_matches_sequence_tables(n in 0usize..30) {
        let ctx = SeqContext::new();
        let env = Env::new(&ctx);
        for (name, family) in [
            ("bell", Family::Bell),
            ("fubini", Family::Fubini),
            ("H", Family::Harmonic),
            ("D", Family::Derangement),
            ("B", Family::Bernoulli),
            ("E", Family::Euler),
            ("fact", Family::Factorial),
        ] {
            let got = eval_str(&format!("{name}({n})"), &env).unwrap();
            prop_assert_eq!(got, family.value(&ctx, n, 0), "{}", name);
        }
    }
}

/// Random well-formed source strings.
fn expression() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..100).prop_map(|n| n.to_string()),
        Just("n".to_string()),
        Just("x".to_string()),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]))
                .prop_map(|(a, b, op)| format!("({a}) {op} ({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| format!("({a})^{e}")),
            (0u32..8, 0u32..8).prop_map(|(a, b)| format!("S({a}, {b})")),
            inner.clone().prop_map(|a| format!("sum(k=0..3, k*({a}))")),
        ]
    })
}
