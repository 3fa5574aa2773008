use super::checks;
use super::{CheckKind, Domain, IdentitySpec, Route};
use CheckKind::{NumericTolerance, Polynomial, Scalar, Series};
use Route::*;

fn domain(n_start: usize, n_cap: Option<usize>, p: Option<(usize, usize)>) -> Domain {
    Domain {
        n_start,
        n_cap,
        p: p.map(|(lo, hi)| lo..=hi),
    }
}

macro_rules! spec {
    ($id:literal, $kind:expr, ($l:expr, $r:expr), $domain:expr, $checker:path,
     $description:literal, $statement:literal) => {
        IdentitySpec {
            id: $id,
            description: $description,
            statement: $statement,
            kind: $kind,
            routes: ($l, $r),
            domain: $domain,
            checker: $checker,
        }
    };
}

/// Every registered identity, in report order.
pub fn list_identities() -> Vec<IdentitySpec> {
    vec![
        spec!("ORTH", Scalar, (StirlingSum, ClosedForm), domain(0, None, None), checks::orth,
            "orthogonality of the two Stirling triangles",
            "sum_k S(n,k) s(k,j) = sum_k s(n,k) S(k,j) = [n = j]"),
        spec!("T1", Scalar, (StirlingSum, ClosedForm), domain(1, None, Some((0, 8))), checks::t1,
            "Stirling transform of signed hyperharmonic numbers",
            "sum_k S(n,k) (-1)^k k! h_k^(p) = (-1)^n n p^(n-1)"),
        spec!("T1b", Scalar, (StirlingSum, ClosedForm), domain(0, None, None), checks::t1b,
            "Stirling transform of signed harmonic numbers",
            "sum_k S(n,k) (-1)^k k! H_k = (-1)^n n"),
        spec!("C2", Scalar, (Transform, ClosedForm), domain(0, None, Some((0, 8))), checks::c2,
            "hyperharmonic numbers by inverse Stirling transform",
            "sum_k s(n,k) (-1)^k k p^(k-1) = (-1)^n n! h_n^(p)"),
        spec!("T3a", Polynomial, (StirlingSum, BinomialPolynomial), domain(0, Some(15), None), checks::t3a,
            "first-kind Stirling transform of Euler polynomials",
            "sum_k s(n,k) E_k(x) = n! sum_k C(x,k) (-1/2)^(n-k)"),
        spec!("T3b", Polynomial, (PolynomialFamily, BinomialPolynomial), domain(0, Some(15), None), checks::t3b,
            "Euler polynomials through second-kind Stirling numbers",
            "E_n(x) = sum_k S(n,k) k! sum_j C(x,j) (-1/2)^(k-j)"),
        spec!("E9", Scalar, (PolynomialFamily, StirlingSum), domain(0, Some(20), None), checks::e9,
            "Euler numbers through Stirling numbers and central binomials",
            "E_n(1/2) = sum_k S(n,k) k! (-1)^k sum_j C(2j,j) / (2^(k+j) (1-2j))"),
        spec!("CBH", Scalar, (BinomialPolynomial, ClosedForm), domain(0, Some(20), None), checks::cbh,
            "binomial coefficient at one half",
            "C(1/2,j) = C(2j,j) (-1)^(j+1) / (4^j (2j-1))"),
        spec!("T5a", Polynomial, (StirlingSum, BinomialPolynomial), domain(0, Some(15), None), checks::t5a,
            "first-kind Stirling transform of Bernoulli polynomials",
            "sum_k s(n,k) B_k(x) = n! sum_k C(x,k) (-1)^(n-k) / (n-k+1)"),
        spec!("T5b", Polynomial, (PolynomialFamily, BinomialPolynomial), domain(0, Some(15), None), checks::t5b,
            "Bernoulli polynomials through second-kind Stirling numbers",
            "B_n(x) = sum_k S(n,k) k! sum_j C(x,j) (-1)^(k-j) / (k-j+1)"),
        spec!("T5c", Scalar, (Recurrence, StirlingSum), domain(0, None, None), checks::t5c,
            "Bernoulli numbers through second-kind Stirling numbers",
            "B_n = sum_k S(n,k) (-1)^k k! / (k+1)"),
        spec!("T6a", Scalar, (StirlingSum, ClosedForm), domain(1, None, None), checks::t6a,
            "Stirling, Bernoulli and harmonic numbers",
            "sum_{k=1}^n s(n,k) B_{k-1} = (-1)^(n-1) (n-1)! H_n"),
        spec!("T6b", Scalar, (Recurrence, StirlingSum), domain(1, None, None), checks::t6b,
            "inverse form of the harmonic connection",
            "B_{n-1} = sum_{k=1}^n S(n,k) (-1)^(k-1) (k-1)! H_k"),
        spec!("T6c", Scalar, (StirlingSum, ClosedForm), domain(1, None, None), checks::t6c,
            "alternating first-kind transform of shifted Bernoulli numbers",
            "sum_{k=1}^n s(n,k) B_{k-1} (-1)^k = (-1)^n n! / n^2"),
        spec!("T6d", Scalar, (Recurrence, StirlingSum), domain(1, None, None), checks::t6d,
            "inverse form of the alternating connection",
            "B_{n-1} = (-1)^n sum_{k=1}^n S(n,k) k! / k^2 (-1)^k"),
        spec!("T7", Scalar, (Recurrence, StirlingSum), domain(0, Some(20), Some((0, 8))), checks::t7,
            "Stirling moments by recurrence and in Bell numbers",
            "M(n,p+1) = M(n+1,p) - sum_j C(p,j) M(n,j), M(n,p) = sum_k S(n,k) k^p"),
        spec!("L8", Polynomial, (StirlingSum, XdOperator), domain(0, Some(15), Some((0, 6))), checks::l8,
            "(xD) powers of exponential polynomials",
            "(xD)^(p+1) phi_n = (xD)^p phi_{n+1} - x sum_j C(p,j) (xD)^j phi_n"),
        spec!("E15", Polynomial, (StirlingSum, XdOperator), domain(0, Some(15), None), checks::e15,
            "first and second (xD) images of exponential polynomials",
            "sum_k S(n,k) k x^k = phi_{n+1} - x phi_n; sum_k S(n,k) k^2 x^k = phi_{n+2} - 2x phi_{n+1} + (x^2-x) phi_n"),
        spec!("P9", Series, (StirlingSum, SeriesProduct), domain(1, Some(15), Some((0, 8))), checks::p9,
            "reciprocal-weighted exponential polynomials and power sums",
            "sum_{k=1}^{p+1} S(p+1,k) x^k / k = e^(-x) sum_m (1^p + ... + m^p) x^m / m!"),
        spec!("E18", Scalar, (DirectSum, BernoulliSum), domain(0, Some(30), Some((1, 12))), checks::e18,
            "sums of powers through Bernoulli numbers",
            "1^p + ... + n^p = n^p + 1/(p+1) sum_{k=1}^{p+1} C(p+1,k) B_{p+1-k} n^k"),
        spec!("C10", Polynomial, (StirlingSum, BernoulliSum), domain(2, Some(30), None), checks::c10,
            "reciprocal-weighted exponential polynomials through Bernoulli numbers",
            "sum_k S(n,k) x^k / k = phi_{n-1}(x) + 1/n sum_{k=1}^n C(n,k) B_{n-k} phi_k(x)"),
        spec!("E21", Polynomial, (StirlingSum, BernoulliSum), domain(1, Some(30), None), checks::e21,
            "reciprocal-weighted exponential polynomials through B+ numbers",
            "sum_k S(n,k) x^k / k = 1/n sum_{k=1}^n C(n,k) B+_{n-k} phi_k(x)"),
        spec!("E22", Polynomial, (StirlingSum, BernoulliSum), domain(1, Some(30), None), checks::e22,
            "squared reciprocal weights by iteration",
            "sum_k S(n,k) x^k / k^2 = 1/n sum_k C(n,k) B+_{n-k} 1/k sum_m C(k,m) B+_{k-m} phi_m(x)"),
        spec!("P11", Polynomial, (StirlingSum, SeriesProduct), domain(1, Some(15), None), checks::p11,
            "geometric polynomials with (k-1)! weights",
            "sum_{k=1}^n S(n,k) (k-1)! x^k = (x+1) omega_{n-1}(x) for n > 1, and x for n = 1"),
        spec!("C12", Polynomial, (StirlingSum, Recurrence), domain(1, Some(15), None), checks::c12,
            "recurrence of geometric polynomials",
            "omega_n(x) = x omega_{n-1}(x) + (x + x^2) omega'_{n-1}(x)"),
        spec!("C13", Scalar, (StirlingSum, Recurrence), domain(1, None, None), checks::c13,
            "(k-1)! weighted row sums and ordered Bell numbers",
            "sum_k S(n,k) (k-1)! = 2 omega_{n-1}(1) (n > 1); sum_k S(n,k) (k-1)! (-1)^k = 0 (n > 1)"),
        spec!("E30", NumericTolerance, (PartialSum, StirlingSum), domain(0, Some(15), None), checks::e30,
            "series for ordered Bell numbers",
            "omega_n(1) = sum_{k>=0} k^n / 2^(k+1)"),
        spec!("C14", Scalar, (StirlingSum, ClosedForm), domain(2, None, None), checks::c14,
            "(k-2)! weighted alternating row sums",
            "sum_{k=2}^n S(n,k) (k-2)! (-1)^k = n - 1"),
        spec!("T15", Scalar, (StirlingSum, BinomialTransform), domain(0, None, None), checks::t15,
            "Stirling transform of derangements",
            "(-1)^n sum_k S(n,k) (-1)^k D_k = sum_k C(n,k) (-1)^k b_k = 1 + sum_{j<n} (-1)^(j+1) b_j"),
        spec!("L16", Polynomial, (BinomialTransform, PolynomialFamily), domain(0, Some(15), None), checks::l16,
            "alternating binomial transform of exponential polynomials",
            "sum_k C(n,k) (-1)^k phi_k(x) = 1 + x sum_{j<n} (-1)^(j+1) phi_j(x)"),
        spec!("GF6", Series, (SeriesProduct, ClosedForm), domain(0, None, Some((0, 5))), checks::gf6,
            "exponential generating function of signed hyperharmonic numbers",
            "-ln(1+t) / (1+t)^p = sum_n (-1)^n n! h_n^(p) t^n / n!"),
        spec!("DIL", Series, (SeriesComposition, ClosedForm), domain(0, None, None), checks::dil,
            "dilogarithm expansions",
            "Li2(-t/(1-t)) = -sum_n (n-1)! H_n t^n / n!; Li2(1-e^(-t)) = sum_n B_{n-1} t^n / n!"),
        spec!("L4", Series, (SeriesProduct, DirectSum), domain(0, None, None), checks::l4,
            "division by a linear factor",
            "g(t) / (1 -+ l t) = sum_n t^n sum_k a_k (+-l)^(n-k)"),
        spec!("LOGT", Series, (SeriesProduct, DirectSum), domain(0, None, None), checks::logt,
            "multiplication by ln(1+t)/t",
            "ln(1+t)/t sum_n a_n t^n = sum_n t^n sum_k a_k (-1)^(n-k) / (n-k+1)"),
        spec!("BELLGF", Series, (SeriesComposition, Recurrence), domain(0, None, None), checks::bellgf,
            "exponential generating function of Bell numbers",
            "exp(e^t - 1) = sum_n b_n t^n / n!"),
        spec!("DERGF", Series, (SeriesProduct, ClosedForm), domain(0, None, None), checks::dergf,
            "exponential generating function of derangements",
            "e^(-t) / (1-t) = sum_n D_n t^n / n!"),
        spec!("PHIGF", Series, (SeriesComposition, PolynomialFamily), domain(0, None, None), checks::phigf,
            "exponential generating function of exponential polynomials",
            "exp(x(e^t - 1)) = sum_n phi_n(x) t^n / n!"),
        spec!("ROUTES", Series, (SeriesComposition, StirlingSum), domain(0, None, None), checks::routes,
            "series substitution against weighted Stirling sums",
            "f((mu/l)(e^(l t) - 1)) = sum_n t^n/n! sum_k S(n,k) l^(n-k) mu^k a_k, and the same with ln(1 + l t) and s(n,k)"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_unique_and_complete() {
        let specs = list_identities();
        let ids: HashSet<&str> = specs.iter().map(|s| s.id).collect();
        assert_eq!(ids.len(), specs.len());
        for id in [
            "T1", "T1b", "C2", "T3a", "T3b", "E9", "T5a", "T5b", "T5c", "T6a", "T6b", "T6c",
            "T6d", "T7", "L8", "E15", "P9", "C10", "E21", "E22", "P11", "C12", "C13", "E30",
            "C14", "T15", "L16", "ORTH", "GF6", "DIL", "L4", "E18", "CBH",
        ] {
            assert!(ids.contains(id), "{id} missing");
        }
        assert!(specs.len() >= 28);
    }

    #[test]
    fn sides_use_different_routes() {
        for s in list_identities() {
            assert_ne!(s.routes.0, s.routes.1, "{}", s.id);
            assert!(!s.statement.is_empty() && !s.description.is_empty());
            if let Some(cap) = s.domain.n_cap {
                assert!(cap >= s.domain.n_start, "{}", s.id);
            }
            if let Some(p) = &s.domain.p {
                assert!(!p.is_empty(), "{}", s.id);
            }
        }
    }

    #[test]
    fn polynomial_and_series_modes() {
        let specs = list_identities();
        let kind = |id: &str| specs.iter().find(|s| s.id == id).unwrap().kind;
        for id in ["T3a", "T3b", "T5a", "T5b", "L8", "E15", "C12", "P11", "E21", "E22", "L16", "C10"] {
            assert_eq!(kind(id), Polynomial, "{id}");
        }
        for id in ["GF6", "DIL", "L4", "P9"] {
            assert_eq!(kind(id), Series, "{id}");
        }
        assert_eq!(kind("E30"), NumericTolerance);
    }
}
