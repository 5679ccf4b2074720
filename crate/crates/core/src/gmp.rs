//! Conversions to GMP rationals for the computations whose coefficient sizes explode.

use num_bigint::BigInt;
use rug::{Integer, Rational as Q};

use crate::poly::{Polynomial, Rational, Term};

pub(crate) fn to_gmp(r: &Rational) -> Q {
    let parse = |n: &BigInt| Integer::from_str_radix(&n.to_str_radix(16), 16).expect("hex digits");
    Q::from((parse(r.numer()), parse(r.denom())))
}

pub(crate) fn from_gmp(q: &Q) -> Rational {
    let parse = |n: &Integer| BigInt::parse_bytes(n.to_string_radix(16).as_bytes(), 16).expect("hex digits");
    Rational::new_raw(parse(q.numer()), parse(q.denom()))
}

/// `sum c (x + a)^e` as GMP coefficients in ambient degree `d` (terms with `e > d` are skipped by the caller).
pub(crate) fn expand_terms(terms: &[Term], d: usize) -> Vec<Q> {
    let mut out = vec![Q::new(); d + 1];
    for t in terms {
        let c = to_gmp(&t.coeff);
        let a = to_gmp(&t.shift);
        let mut a_pow = Q::from(1);
        for j in (0..=t.exp).rev() {
            let b = Integer::from(Integer::binomial_u(t.exp as u32, j as u32));
            out[j] += Q::from(&c * &a_pow) * b;
            a_pow *= &a;
        }
    }
    out
}

pub(crate) fn polynomial(coeffs: &[Q]) -> Polynomial {
    Polynomial::from_coeffs(coeffs.iter().map(from_gmp).collect())
}
