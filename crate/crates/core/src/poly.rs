//! Exact rational scalars, dense univariate polynomials and shifted powers.
//!
//! A [`Polynomial`] always carries an ambient degree `d`: it lives in the
//! space of polynomials of degree at most `d` and stores exactly `d + 1`
//! coefficients, lowest degree first.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `p/q` or `p` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::ParseRational(s.to_string()));
    }
    let t = t.strip_prefix('+').unwrap_or(t);
    Rational::from_str(t).map_err(|_| Error::ParseRational(s.to_string()))
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `n!/(n-k)!`, zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::{parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(D::Error::custom)
    }

    /// Accepts either a JSON string or a JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalText {
        Text(String),
        Int(i64),
    }

    impl RationalText {
        pub(crate) fn into_rational(self) -> crate::error::Result<Rational> {
            match self {
                RationalText::Text(t) => parse_rational(&t),
                RationalText::Int(i) => Ok(super::rat(i)),
            }
        }
    }

    pub mod vec {
        use super::super::Rational;
        use super::RationalText;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<RationalText>::deserialize(d)?
                .into_iter()
                .map(|t| t.into_rational().map_err(D::Error::custom))
                .collect()
        }
    }
}

/// Dense polynomial with an ambient degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero(degree: usize) -> Self {
        Polynomial {
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    pub fn monomial(coeff: Rational, exp: usize, degree: usize) -> Result<Self> {
        if exp > degree {
            return Err(Error::ExponentExceedsDegree {
                exponent: exp,
                degree,
            });
        }
        let mut p = Polynomial::zero(degree);
        p.coeffs[exp] = coeff;
        Ok(p)
    }

    /// Ambient degree is `coeffs.len() - 1`; an empty vector gives the zero
    /// polynomial of ambient degree 0.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn ambient_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest index with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-embeds into ambient degree `d`, failing if the actual degree exceeds it.
    pub fn embed(&self, d: usize) -> Result<Self> {
        if let Some(deg) = self.degree() {
            if deg > d {
                return Err(Error::ExponentExceedsDegree {
                    exponent: deg,
                    degree: d,
                });
            }
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(d + 1, Rational::zero());
        Ok(Polynomial { coeffs })
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Exact `k`-th derivative, same ambient degree.
    pub fn derivative(&self, k: usize) -> Polynomial {
        let d = self.ambient_degree();
        let mut out = Polynomial::zero(d);
        for j in k..=d {
            if self.coeffs[j].is_zero() {
                continue;
            }
            out.coeffs[j - k] = &self.coeffs[j] * Rational::from_integer(falling_factorial(j, k));
        }
        out
    }

    /// `g^(k)(a)` evaluated without materialising the derivative.
    pub fn eval_derivative(&self, k: usize, a: &Rational) -> Rational {
        let d = self.ambient_degree();
        if k > d {
            return Rational::zero();
        }
        (k..=d).rev().fold(Rational::zero(), |acc, j| {
            acc * a + &self.coeffs[j] * Rational::from_integer(falling_factorial(j, k))
        })
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Scales so the highest nonzero coefficient is 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.degree() {
            Some(deg) => {
                let lead = self.coeffs[deg].recip();
                self.scale(&lead)
            }
            None => self.clone(),
        }
    }

    /// Number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn zip_with(&self, other: &Polynomial, f: impl Fn(&Rational, &Rational) -> Rational) -> Polynomial {
        let d = self.ambient_degree().max(other.ambient_degree());
        let zero = Rational::zero();
        let coeffs = (0..=d)
            .map(|j| {
                f(
                    self.coeffs.get(j).unwrap_or(&zero),
                    other.coeffs.get(j).unwrap_or(&zero),
                )
            })
            .collect();
        Polynomial { coeffs }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Rational> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Rational) -> Polynomial {
        self.scale(rhs)
    }
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, c: &Rational, j: usize) -> fmt::Result {
    let mag = c.abs();
    let var = match j {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{j}"),
    };
    if j == 0 {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{var}")
    } else if mag.is_integer() {
        write!(f, "{mag}{var}")
    } else {
        write!(f, "{mag}*{var}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[j];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_coeff_term(f, c, j)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Accepts sums of terms such as `x^2+2x+3`, `-1/2*x^3 - x`, `7`.
    /// Repeated exponents are added together.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::ParsePolynomial("empty input".into()));
        }
        let bad = |msg: &str| Error::ParsePolynomial(format!("{msg} in {s:?}"));

        let mut terms: Vec<(Rational, usize)> = Vec::new();
        let bytes: Vec<char> = compact.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = Rational::one();
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("missing operator"));
            }
            let start = i;
            while i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
                i += 1;
            }
            let term: String = bytes[start..i].iter().collect();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coeff_text, exp) = match term.find('x') {
                None => (term.as_str(), 0usize),
                Some(pos) => {
                    let coeff = term[..pos].trim_end_matches('*');
                    let rest = &term[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else if let Some(e) = rest.strip_prefix('^') {
                        e.parse::<usize>().map_err(|_| bad("bad exponent"))?
                    } else {
                        return Err(bad("unexpected text after x"));
                    };
                    (coeff, exp)
                }
            };
            let coeff = if coeff_text.is_empty() {
                Rational::one()
            } else {
                parse_rational(coeff_text).map_err(|_| bad("bad coefficient"))?
            };
            terms.push((sign * coeff, exp));
        }
        let d = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut p = Polynomial::zero(d);
        for (c, e) in terms {
            p.coeffs[e] += c;
        }
        Ok(p)
    }
}

/// The polynomial `(x + shift)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftedPower {
    #[serde(with = "rational_serde")]
    pub shift: Rational,
    #[serde(rename = "exp")]
    pub exponent: usize,
}

impl ShiftedPower {
    pub fn new(shift: Rational, exponent: usize) -> Self {
        ShiftedPower { shift, exponent }
    }

    pub fn int(shift: i64, exponent: usize) -> Self {
        ShiftedPower::new(rat(shift), exponent)
    }

    /// Binomial expansion `sum_j C(e,j) a^(e-j) x^j` embedded in ambient degree `d`.
    pub fn expand(&self, d: usize) -> Result<Polynomial> {
        let e = self.exponent;
        if e > d {
            return Err(Error::ExponentExceedsDegree {
                exponent: e,
                degree: d,
            });
        }
        let mut p = Polynomial::zero(d);
        let mut a_pow = Rational::one();
        for j in (0..=e).rev() {
            p.coeffs[j] = Rational::from_integer(binomial(e, j)) * &a_pow;
            a_pow *= &self.shift;
        }
        Ok(p)
    }
}

impl fmt::Display for ShiftedPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            return write!(f, "x^{}", self.exponent);
        }
        if self.shift.is_negative() {
            write!(f, "(x-{})^{}", -&self.shift, self.exponent)
        } else {
            write!(f, "(x+{})^{}", self.shift, self.exponent)
        }
    }
}

pub fn expand(p: &ShiftedPower, d: usize) -> Result<Polynomial> {
    p.expand(d)
}

pub fn derivative(g: &Polynomial, k: usize) -> Polynomial {
    g.derivative(k)
}

pub fn eval_derivative(g: &Polynomial, k: usize, a: &Rational) -> Rational {
    g.eval_derivative(k, a)
}

/// The symmetric bilinear form `<g,f> = sum_k f_k g_(d-k) / C(d,k)` on polynomials of degree at most `d`.
///
/// Pairing with `(x+a)^d` evaluates at `a`; pairing with `(x+a)^(d-k)` gives
/// `(d-k)!/d! * g^(k)(a)`.
pub fn weyl_form(g: &Polynomial, f: &Polynomial, d: usize) -> Result<Rational> {
    for p in [g, f] {
        if p.ambient_degree() != d {
            return Err(Error::DegreeMismatch {
                left: p.ambient_degree(),
                right: d,
            });
        }
    }
    let mut acc = Rational::zero();
    for k in 0..=d {
        if f.coeffs[k].is_zero() || g.coeffs[d - k].is_zero() {
            continue;
        }
        acc += &f.coeffs[k] * &g.coeffs[d - k] / Rational::from_integer(binomial(d, k));
    }
    Ok(acc)
}

/// A coefficient times a shifted power, `coeff * (x + shift)^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "rational_serde")]
    pub coeff: Rational,
    #[serde(with = "rational_serde")]
    pub shift: Rational,
    pub exp: usize,
}

impl Term {
    pub fn new(coeff: Rational, shift: Rational, exp: usize) -> Self {
        Term { coeff, shift, exp }
    }

    pub fn power(&self) -> ShiftedPower {
        ShiftedPower::new(self.shift.clone(), self.exp)
    }

    pub fn expand(&self, d: usize) -> Result<Polynomial> {
        Ok(self.power().expand(d)?.scale(&self.coeff))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.coeff, self.power())
    }
}

/// Expands and sums terms in ambient degree `d`.
pub fn sum_terms(terms: &[Term], d: usize) -> Result<Polynomial> {
    terms.iter().try_fold(Polynomial::zero(d), |acc, t| {
        Ok(&acc + &t.expand(d)?)
    })
}

/// Merges terms with the same shifted power (first appearance order) and drops zero coefficients.
pub fn combine_like_terms(terms: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| o.shift == t.shift && o.exp == t.exp) {
            Some(o) => o.coeff += &t.coeff,
            None => out.push(t.clone()),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

/// Distinct shifted powers inside a common ambient degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerFamily {
    terms: Vec<ShiftedPower>,
    degree: usize,
}

impl PowerFamily {
    /// `degree` defaults to the largest exponent.
    pub fn new(terms: Vec<ShiftedPower>, degree: Option<usize>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let max_exp = terms.iter().map(|t| t.exponent).max().unwrap_or(0);
        let degree = degree.unwrap_or(max_exp);
        if max_exp > degree {
            return Err(Error::ExponentExceedsDegree {
                exponent: max_exp,
                degree,
            });
        }
        let mut seen = HashSet::new();
        for t in &terms {
            if !seen.insert(t) {
                return Err(Error::DuplicateTerm {
                    shift: t.shift.clone(),
                    exponent: t.exponent,
                });
            }
        }
        Ok(PowerFamily { terms, degree })
    }

    pub fn terms(&self) -> &[ShiftedPower] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_degree(&self, degree: usize) -> Result<Self> {
        PowerFamily::new(self.terms.clone(), Some(degree))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum FamilyJson {
            Bare(Vec<ShiftedPower>),
            Wrapped {
                terms: Vec<ShiftedPower>,
                degree: Option<usize>,
            },
        }
        let parsed: FamilyJson =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("family JSON: {e}")))?;
        match parsed {
            FamilyJson::Bare(terms) => PowerFamily::new(terms, None),
            FamilyJson::Wrapped { terms, degree } => PowerFamily::new(terms, degree),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "degree": self.degree, "terms": self.terms })
    }
}

impl fmt::Display for PowerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}} in degree <= {}", parts.join(", "), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(ShiftedPower::int(1, 2).expand(2).unwrap(), Polynomial::from_ints(&[1, 2, 1]));
        assert_eq!(
            ShiftedPower::int(0, 5).expand(5).unwrap(),
            Polynomial::from_ints(&[0, 0, 0, 0, 0, 1])
        );
        // (x+3)^2 by repeated multiplication: x^2 + 6x + 9
        assert_eq!(
            ShiftedPower::int(3, 2).expand(5).unwrap(),
            Polynomial::from_ints(&[9, 6, 1, 0, 0, 0])
        );
        assert!(matches!(
            ShiftedPower::int(1, 4).expand(3),
            Err(Error::ExponentExceedsDegree { exponent: 4, degree: 3 })
        ));
    }

    #[test]
    fn derivative_examples() {
        let g = p("x^2 - 1");
        assert_eq!(g.derivative(1), Polynomial::from_ints(&[0, 2, 0]));
        assert!(g.derivative(3).is_zero());
        assert_eq!(g.derivative(3).ambient_degree(), 2);
        let g = p("x^5");
        assert_eq!(g.derivative(3), Polynomial::from_ints(&[0, 0, 60, 0, 0, 0]));
    }

    #[test]
    fn eval_derivative_examples() {
        let g = p("x^2 - 1");
        assert_eq!(g.eval_derivative(0, &rat(-1)), rat(0));
        assert_eq!(g.eval_derivative(1, &rat(0)), rat(0));
        assert_eq!(p("x^5").eval_derivative(4, &rat(1)), rat(120));
        assert_eq!(p("x^5").eval_derivative(9, &rat(1)), rat(0));
    }

    #[test]
    fn weyl_form_lagrange_case() {
        let g = p("x^2 - 1");
        let f = ShiftedPower::int(1, 2).expand(2).unwrap();
        assert_eq!(weyl_form(&g, &f, 2).unwrap(), rat(0));
        let g = p("3x^3 - 1/2*x + 7");
        let f = ShiftedPower::new(ratio(-2, 3), 3).expand(3).unwrap();
        assert_eq!(weyl_form(&g, &f, 3).unwrap(), g.eval(&ratio(-2, 3)));
    }

    #[test]
    fn weyl_form_rejects_mismatched_degrees() {
        let g = p("x^2 - 1");
        let f = p("x^3");
        assert!(matches!(weyl_form(&g, &f, 2), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn polynomial_text_roundtrip() {
        for s in ["x^2 - 1", "10x^4 + 20x^2 + 2", "-3x^2 - 3x - 1", "0", "1/2*x^3 - x + 5/7"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("x^2+2x+3"), Polynomial::from_ints(&[3, 2, 1]));
        assert_eq!(p("2*x + x"), Polynomial::from_ints(&[0, 3]));
        assert!("x^".parse::<Polynomial>().is_err());
        assert!("2y".parse::<Polynomial>().is_err());
        assert!("".parse::<Polynomial>().is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), rat(-3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(rat(4).to_string(), "4");
    }

    #[test]
    fn family_validation() {
        let dup = vec![ShiftedPower::int(1, 2), ShiftedPower::int(1, 2)];
        assert!(matches!(PowerFamily::new(dup, None), Err(Error::DuplicateTerm { .. })));
        assert!(matches!(PowerFamily::new(vec![], None), Err(Error::EmptyFamily)));
        let fam = PowerFamily::new(vec![ShiftedPower::int(1, 2), ShiftedPower::int(0, 4)], None).unwrap();
        assert_eq!(fam.degree(), 4);
        assert!(PowerFamily::new(vec![ShiftedPower::int(0, 4)], Some(3)).is_err());
    }

    #[test]
    fn family_json_forms() {
        let bare = PowerFamily::from_json(r#"[{"shift":"1","exp":2},{"shift":"-1/2","exp":1}]"#).unwrap();
        assert_eq!(bare.degree(), 2);
        assert_eq!(bare.terms()[1].shift, ratio(-1, 2));
        let wrapped = PowerFamily::from_json(r#"{"degree":5,"terms":[{"shift":3,"exp":2}]}"#).unwrap();
        assert_eq!(wrapped.degree(), 5);
        assert!(PowerFamily::from_json(r#"[{"shift":"x","exp":2}]"#).is_err());
    }

    #[test]
    fn combine_merges_and_drops_zeros() {
        let terms = vec![
            Term::new(rat(1), rat(0), 3),
            Term::new(rat(2), rat(1), 3),
            Term::new(rat(-1), rat(0), 3),
        ];
        assert_eq!(combine_like_terms(&terms), vec![Term::new(rat(2), rat(1), 3)]);
    }
}
