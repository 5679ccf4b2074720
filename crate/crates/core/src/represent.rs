//! Explicit representations by shifted powers: the greedy decomposition, the
//! hard polynomials, and the roots-of-unity identities over the complex numbers.

use std::fmt;

use num_integer::Integer as _;
use num_traits::Zero;
use rug::{Integer, Rational as Q};
use serde::{Deserialize, Serialize};

use crate::dd::{Cdd, Dd};
use crate::gmp::{self, from_gmp, to_gmp};
use crate::error::{Error, Result};
use crate::poly::{binomial, pow, rat, ratio, sum_terms, Polynomial, PowerFamily, Rational, ShiftedPower, Term};

/// `f = sum beta_i (x + y_i)^(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Decomposition(pub Vec<Term>);

impl Decomposition {
    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Expands and sums the terms in ambient degree `d`.
    pub fn reconstruct(&self, d: usize) -> Result<Polynomial> {
        if let Some(t) = self.0.iter().find(|t| t.exp > d) {
            return Err(Error::ExponentExceedsDegree {
                exponent: t.exp,
                degree: d,
            });
        }
        Ok(gmp::polynomial(&gmp::expand_terms(&self.0, d)))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Peels `a_e (x + a_(e-1)/(e a_e))^e` off the top until nothing is left.
/// Each step removes the two leading coefficients, so at most
/// `ceil((deg f + 1)/2)` terms are produced.
///
/// Coefficient heights roughly triple per step, so the peeling runs on GMP rationals.
pub fn greedy_decompose(f: &Polynomial) -> Decomposition {
    let mut rest: Vec<Q> = f.coeffs().iter().map(to_gmp).collect();
    let mut terms = Vec::new();
    while let Some(e) = rest.iter().rposition(|c| *c.numer() != 0) {
        let lead = rest[e].clone();
        let shift = if e == 0 {
            Q::new()
        } else {
            Q::from(&rest[e - 1] / &lead) / e as u32
        };
        let mut shift_pow = Q::from(1);
        for j in (0..=e).rev() {
            let c = Integer::from(Integer::binomial_u(e as u32, j as u32));
            rest[j] -= Q::from(&lead * &shift_pow) * c;
            shift_pow *= &shift;
        }
        terms.push(Term::new(from_gmp(&lead), from_gmp(&shift), e));
    }
    Decomposition(terms)
}

/// `sum alpha_i (x + x_i)^d`.
pub fn hard_h1(shifts: &[Rational], coeffs: &[Rational], d: usize) -> Result<Polynomial> {
    if shifts.len() != coeffs.len() {
        return Err(Error::Invalid(format!(
            "{} shifts but {} coefficients",
            shifts.len(),
            coeffs.len()
        )));
    }
    if shifts.is_empty() {
        return Err(Error::Invalid("no terms".into()));
    }
    for (i, (a, c)) in shifts.iter().zip(coeffs).enumerate() {
        if c.is_zero() {
            return Err(Error::Invalid(format!("coefficient {i} is zero")));
        }
        if shifts[..i].contains(a) {
            return Err(Error::DuplicateKnot(a.clone()));
        }
    }
    let terms: Vec<Term> = shifts
        .iter()
        .zip(coeffs)
        .map(|(a, c)| Term::new(c.clone(), a.clone(), d))
        .collect();
    sum_terms(&terms, d)
}

/// `(x+1)^(d+1) - x^(d+1)`, a polynomial of degree `d`.
pub fn hard_h2(d: usize) -> Polynomial {
    let coeffs = (0..=d).map(|j| Rational::from_integer(binomial(d + 1, j))).collect();
    Polynomial::from_coeffs(coeffs)
}

/// `(x+1)^(d+1) - (x-1)^(d+1)`, a polynomial of degree `d` with `ceil((d+1)/2)` monomials.
pub fn hard_h3(d: usize) -> Polynomial {
    let coeffs = (0..=d)
        .map(|j| {
            if (d + 1 - j) % 2 == 1 {
                Rational::from_integer(binomial(d + 1, j) * 2)
            } else {
                Rational::zero()
            }
        })
        .collect();
    Polynomial::from_coeffs(coeffs)
}

/// `{(x+1)^(d+1), (x-1)^(d+1)}` together with the monomials of `hard_h3(d)`,
/// in ambient degree `d+1`. These `2 + ceil((d+1)/2)` powers are dependent.
pub fn h3_sharpness_family(d: usize) -> PowerFamily {
    let mut terms = vec![ShiftedPower::int(1, d + 1), ShiftedPower::int(-1, d + 1)];
    let h3 = hard_h3(d);
    terms.extend((0..=d).rev().filter(|&j| !h3.coeff(j).is_zero()).map(|j| ShiftedPower::int(0, j)));
    PowerFamily::new(terms, Some(d + 1)).expect("powers are distinct")
}

/// `c * x^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub exp: usize,
    #[serde(with = "crate::poly::rational_serde")]
    pub coeff: Rational,
}

/// `sum_(j=1..k) xi^j (x + xi^j mu)^d = sum k C(d,i) mu^i x^(d-i)` over `i ≡ -1 (mod k)`,
/// where `xi` is a primitive `k`-th root of unity. The left side stays symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexIdentity {
    pub k: usize,
    pub d: usize,
    #[serde(with = "crate::poly::rational_serde")]
    pub mu: Rational,
    /// Right-hand monomials, highest exponent first.
    pub rhs: Vec<Monomial>,
}

impl ComplexIdentity {
    pub fn rhs_polynomial(&self) -> Polynomial {
        let mut coeffs = vec![Rational::zero(); self.d + 1];
        for m in &self.rhs {
            if m.exp <= self.d {
                coeffs[m.exp] += &m.coeff;
            }
        }
        Polynomial::from_coeffs(coeffs).embed(self.d).expect("ambient degree fits")
    }

    pub fn lhs_text(&self) -> String {
        let mu = if self.mu < Rational::zero() {
            format!("({})", self.mu)
        } else {
            self.mu.to_string()
        };
        format!("sum_(j=1..{}) xi^j * (x + xi^j*{mu})^{}", self.k, self.d)
    }
}

impl fmt::Display for ComplexIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}   (xi = exp(2*pi*i/{}))", self.lhs_text(), self.rhs_polynomial(), self.k)
    }
}

pub fn roots_of_unity_identity(k: usize, d: usize, mu: Rational) -> Result<ComplexIdentity> {
    if k == 0 || d == 0 {
        return Err(Error::Invalid("need k >= 1 and d >= 1".into()));
    }
    let kk = rat(k as i64);
    let rhs = (0..=d)
        .filter(|i| (i + 1) % k == 0)
        .map(|i| Monomial {
            exp: d - i,
            coeff: &kk * Rational::from_integer(binomial(d, i)) * pow(&mu, i),
        })
        .collect();
    Ok(ComplexIdentity { k, d, mu, rhs })
}

/// `sum_(j=1..k) xi^(j m)` computed from the residues `j m mod k`: the residues
/// cover the subgroup of multiples of `g = gcd(m, k)` evenly, so the sum is
/// `k` when that subgroup is trivial and `0` otherwise.
pub fn root_power_sum(k: usize, m: usize) -> usize {
    let mut hits = vec![0usize; k];
    for j in 1..=k {
        hits[(j * m) % k] += 1;
    }
    let g = m.gcd(&k);
    let even = hits
        .iter()
        .enumerate()
        .all(|(r, &c)| c == if r % g == 0 { g } else { 0 });
    assert!(even, "residues of a cyclic group are uniform");
    if hits[0] == k {
        k
    } else {
        0
    }
}

/// Exact check: the coefficient of `x^(d-i)` on the right equals `C(d,i) mu^i sum_j xi^(j(i+1))`.
pub fn identity_holds_exactly(id: &ComplexIdentity) -> bool {
    let rhs = id.rhs_polynomial();
    let indices_ok = id.rhs.iter().all(|m| m.exp <= id.d && (id.d - m.exp + 1).is_multiple_of(id.k));
    indices_ok
        && (0..=id.d).all(|i| {
            let s = root_power_sum(id.k, i + 1);
            let expected = Rational::from_integer(binomial(id.d, i)) * pow(&id.mu, i) * rat(s as i64);
            rhs.coeff(id.d - i) == expected
        })
}

/// Evaluates both sides at `d+2` points of `[-1, 1]` in double-double complex
/// arithmetic and requires the largest discrepancy to be at most `tol`; the
/// exact coefficient check must hold as well.
pub fn verify_complex_identity(id: &ComplexIdentity, tol: f64) -> bool {
    if !identity_holds_exactly(id) {
        return false;
    }
    max_discrepancy(id) <= tol
}

pub fn max_discrepancy(id: &ComplexIdentity) -> f64 {
    let xi = Cdd::root_of_unity(id.k);
    let mu = Dd::from_rational(&id.mu);
    let rhs = id.rhs_polynomial();
    let points = id.d + 2;
    let mut worst: f64 = 0.0;
    for s in 0..points {
        let x = rat(-1) + ratio(2 * s as i64, (points - 1) as i64);
        let xd = Cdd::real(Dd::from_rational(&x));
        let mut lhs = Cdd::default();
        let mut xi_j = Cdd::one();
        for _ in 1..=id.k {
            xi_j = xi_j * xi;
            lhs = lhs + xi_j * (xd + xi_j.scale(mu)).powu(id.d);
        }
        let right = Cdd::real(Dd::from_rational(&rhs.eval(&x)));
        worst = worst.max((lhs - right).abs());
    }
    worst
}

/// `true` when `k * |rhs| <= d + 1`.
pub fn rhs_size_bound(id: &ComplexIdentity) -> bool {
    id.k * id.rhs.len() <= id.d + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Term;

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn greedy_examples() {
        let dec = greedy_decompose(&poly("x^2+2x+3"));
        assert_eq!(
            dec.terms(),
            &[Term::new(rat(1), rat(1), 2), Term::new(rat(2), rat(0), 0)]
        );
        assert_eq!(greedy_decompose(&poly("5")).terms(), &[Term::new(rat(5), rat(0), 0)]);
        assert_eq!(greedy_decompose(&poly("x^3")).terms(), &[Term::new(rat(1), rat(0), 3)]);
        assert!(greedy_decompose(&Polynomial::zero(4)).is_empty());
        let lin = greedy_decompose(&poly("2x+3"));
        assert_eq!(lin.terms(), &[Term::new(rat(2), ratio(3, 2), 1)]);
    }

    #[test]
    fn greedy_reconstructs() {
        let f = poly("1/2*x^7 - 3x^5 + x^4 + 2/3*x - 9");
        let dec = greedy_decompose(&f);
        assert!(dec.len() <= 4);
        assert_eq!(dec.reconstruct(7).unwrap(), f);
    }

    #[test]
    fn reconstruction_matches_plain_expansion() {
        let f = poly("-3/4*x^9 + 5x^8 - x^3 + 7/2");
        let dec = greedy_decompose(&f);
        assert_eq!(dec.reconstruct(9).unwrap(), sum_terms(dec.terms(), 9).unwrap());
        assert!(dec.reconstruct(2).is_err());
    }

    #[test]
    fn hard_polynomials() {
        assert_eq!(hard_h3(4).to_string(), "10x^4 + 20x^2 + 2");
        assert_eq!(hard_h3(4).support_size(), 3);
        assert_eq!(hard_h2(1).to_string(), "2x + 1");
        let h1 = hard_h1(&[rat(0), rat(1)], &[rat(1), rat(-1)], 3).unwrap();
        assert_eq!(h1.to_string(), "-3x^2 - 3x - 1");
        assert!(hard_h1(&[rat(0), rat(0)], &[rat(1), rat(1)], 3).is_err());
        assert!(hard_h1(&[rat(0)], &[rat(0)], 3).is_err());
        assert!(hard_h1(&[rat(0)], &[rat(1), rat(2)], 3).is_err());
    }

    #[test]
    fn identity_examples() {
        let id = roots_of_unity_identity(2, 2, rat(1)).unwrap();
        assert_eq!(id.rhs, vec![Monomial { exp: 1, coeff: rat(4) }]);
        assert!(verify_complex_identity(&id, 1e-9));

        let id = roots_of_unity_identity(3, 5, rat(1)).unwrap();
        assert_eq!(
            id.rhs,
            vec![Monomial { exp: 3, coeff: rat(30) }, Monomial { exp: 0, coeff: rat(3) }]
        );
        assert!(roots_of_unity_identity(7, 5, rat(1)).unwrap().rhs.is_empty());

        let id = roots_of_unity_identity(4, 9, ratio(1, 2)).unwrap();
        assert!(verify_complex_identity(&id, 1e-9));

        let mut tampered = id.clone();
        tampered.rhs[0].coeff += rat(1);
        assert!(!verify_complex_identity(&tampered, 1e-9));
        assert!(max_discrepancy(&tampered) > 0.5);
    }

    #[test]
    fn power_sums() {
        assert_eq!(root_power_sum(4, 8), 4);
        assert_eq!(root_power_sum(4, 2), 0);
        assert_eq!(root_power_sum(6, 3), 0);
        assert_eq!(root_power_sum(1, 5), 1);
    }
}
