//! Re-checkable regularity certificates and the lower-bound checks built on them.
//!
//! A [`Certificate`] is a tree. Each node names the rule that makes its
//! subject pair regular:
//!
//! * `tail`: the tail counts satisfy `N_1 <= 1` and `N_r + N_(r-1) <= r`,
//!   which makes the matrix regular for every knot set;
//! * `as`: `|E| = d+1`, Pólya holds, no odd supported sequence, and the knots
//!   are increasing (the criterion only covers ordered knots);
//! * `split`: the columns are cut after `r`, with at most `r+1` ones on the
//!   left and at most `d-r` on the right, and both halves are certified;
//! * `rank`: the exact rank of `A(E, X)` equals `|E|`.
//!
//! [`verify_certificate`] re-derives every node from scratch.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::duality::{independent_subfamily, to_dual};
use crate::error::{Error, Result};
use crate::matrix::{atkinson_sharma, slope_split_indices, tail_condition, tail_counts, InterpolationMatrix};
use crate::pair::{build_system, rank_and_nullspace, split_pair, system_rank, KnotSet, Pair};
use crate::poly::{
    combine_like_terms, rat, rational_serde, sum_terms, Polynomial, PowerFamily, Rational, ShiftedPower, Term,
};
use crate::represent::{hard_h1, hard_h2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "tail")]
    TailCount,
    #[serde(rename = "as")]
    AtkinsonSharma,
    #[serde(rename = "split")]
    Split,
    #[serde(rename = "rank")]
    RankBase,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::TailCount => "tail",
            Rule::AtkinsonSharma => "as",
            Rule::Split => "split",
            Rule::RankBase => "rank",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub matrix: InterpolationMatrix,
    #[serde(with = "rational_serde::vec")]
    pub knots: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Certificate>,
}

impl Certificate {
    fn leaf(rule: Rule, pair: &Pair, rank: Option<usize>) -> Self {
        Certificate {
            rule,
            r: None,
            rank,
            matrix: pair.matrix().clone(),
            knots: pair.knots().as_slice().to_vec(),
            children: Vec::new(),
        }
    }

    pub fn tail(pair: &Pair) -> Self {
        Certificate::leaf(Rule::TailCount, pair, None)
    }

    pub fn atkinson_sharma(pair: &Pair) -> Self {
        Certificate::leaf(Rule::AtkinsonSharma, pair, None)
    }

    pub fn rank_base(pair: &Pair, rank: usize) -> Self {
        Certificate::leaf(Rule::RankBase, pair, Some(rank))
    }

    pub fn split(pair: &Pair, r: usize, left: Certificate, right: Certificate) -> Self {
        Certificate {
            rule: Rule::Split,
            r: Some(r),
            rank: None,
            matrix: pair.matrix().clone(),
            knots: pair.knots().as_slice().to_vec(),
            children: vec![left, right],
        }
    }

    /// Rebuilds the subject pair, failing on malformed knots.
    pub fn subject(&self) -> Result<Pair> {
        Pair::new(self.matrix.clone(), KnotSet::new(self.knots.clone())?)
    }

    /// Tail-count rule alone, or one split with a tail-count left half and a rank right half.
    pub fn follows_lbtool_path(&self) -> bool {
        match self.rule {
            Rule::TailCount => true,
            Rule::Split => {
                self.children.len() == 2
                    && self.children[0].rule == Rule::TailCount
                    && self.children[1].rule == Rule::RankBase
            }
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Certificate::depth).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("certificate JSON: {e}")))
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let knots: Vec<String> = self.knots.iter().map(ToString::to_string).collect();
        write!(f, "{:indent$}{}", "", self.rule)?;
        if let Some(r) = self.r {
            write!(f, " r={r}")?;
        }
        if let Some(rank) = self.rank {
            write!(f, " {rank}")?;
        }
        writeln!(f, " [{} @ {}]", self.matrix, knots.join(","))?;
        for c in &self.children {
            c.write_tree(f, indent + 2)?;
        }
        Ok(())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

/// Certifies `(E, X)` regular, or returns [`Error::Irregular`] with a nonzero solution.
///
/// Rules are tried in order: tail counts, Atkinson-Sharma (ordered knots,
/// `|E| = d+1`), a column split, and finally the exact rank of the whole
/// system. Split points `r = d - s` come from the slope indices `s` of the
/// tail counts (largest first), then every other `s` in descending order;
/// the left half is certified recursively and the right half by rank.
pub fn certify_regular(p: &Pair) -> Result<Certificate> {
    let ones = p.matrix().ones();
    let dimension = p.degree() + 1;
    if ones > dimension {
        return Err(Error::TooManyConstraints { ones, dimension });
    }
    let report = rank_and_nullspace(&build_system(p));
    if report.rank < ones {
        let witness = report
            .nullspace_basis
            .into_iter()
            .next()
            .unwrap_or_else(|| Polynomial::zero(p.degree()));
        return Err(Error::Irregular { witness });
    }
    Ok(certify_known_regular(p, report.rank))
}

fn certify_known_regular(p: &Pair, rank: usize) -> Certificate {
    let e = p.matrix();
    let d = p.degree();
    if tail_condition(e) {
        return Certificate::tail(p);
    }
    if e.ones() == d + 1 && p.knots().is_increasing() && atkinson_sharma(e).unwrap_or(false) {
        return Certificate::atkinson_sharma(p);
    }
    for s in split_order(e) {
        let r = d - s;
        let Ok((left, right)) = split_pair(p, r) else {
            continue;
        };
        if left.matrix().ones() > r + 1 || right.matrix().ones() > s {
            continue;
        }
        let right_rank = system_rank(&build_system(&right));
        if right_rank != right.matrix().ones() {
            continue;
        }
        let left_rank = system_rank(&build_system(&left));
        if left_rank != left.matrix().ones() {
            continue;
        }
        let left_cert = certify_known_regular(&left, left_rank);
        return Certificate::split(p, r, left_cert, Certificate::rank_base(&right, right_rank));
    }
    Certificate::rank_base(p, rank)
}

/// Candidate `s` values (right block width), each in `1..=d`.
fn split_order(e: &InterpolationMatrix) -> Vec<usize> {
    let d = e.degree();
    if d == 0 {
        return Vec::new();
    }
    let counts: Vec<i64> = tail_counts(e).as_slice().iter().map(|&n| n as i64).collect();
    let slope = slope_split_indices(&counts).unwrap_or_default();
    let mut order: Vec<usize> = slope.iter().rev().copied().filter(|&s| s >= 1).collect();
    order.extend((1..=d).rev().filter(|s| !slope.contains(s)));
    order
}

/// Re-validates every node of a certificate from scratch.
pub fn verify_certificate(c: &Certificate) -> bool {
    let Ok(p) = c.subject() else {
        return false;
    };
    let e = p.matrix();
    let d = p.degree();
    if e.ones() > d + 1 {
        return false;
    }
    match c.rule {
        Rule::TailCount => c.r.is_none() && c.children.is_empty() && tail_condition(e),
        Rule::AtkinsonSharma => {
            c.r.is_none()
                && c.children.is_empty()
                && e.ones() == d + 1
                && p.knots().is_increasing()
                && atkinson_sharma(e).unwrap_or(false)
        }
        Rule::RankBase => {
            c.children.is_empty()
                && c.r.is_none()
                && c.rank == Some(e.ones())
                && system_rank(&build_system(&p)) == e.ones()
        }
        Rule::Split => {
            let Some(r) = c.r else {
                return false;
            };
            let [left, right] = c.children.as_slice() else {
                return false;
            };
            let Ok((lp, rp)) = split_pair(&p, r) else {
                return false;
            };
            left.matrix == *lp.matrix()
                && right.matrix == *rp.matrix()
                && left.knots == c.knots
                && right.knots == c.knots
                && lp.matrix().ones() <= r + 1
                && rp.matrix().ones() <= d - r
                && verify_certificate(left)
                && verify_certificate(right)
        }
    }
}

/// Whether `k + l > (d+2)/2`, the count every identity
/// `sum_k alpha_i (x+x_i)^d = sum_l beta_i (x+y_i)^(e_i)` with `e_i < d` must satisfy.
pub fn lbtool_threshold(k: usize, l: usize, d: usize) -> bool {
    2 * (k + l) > d + 2
}

/// One `alpha * (x + shift)^D` term of the degree-`D` side of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadTerm {
    #[serde(with = "rational_serde")]
    pub coeff: Rational,
    #[serde(with = "rational_serde")]
    pub shift: Rational,
}

impl LeadTerm {
    pub fn new(coeff: Rational, shift: Rational) -> Self {
        LeadTerm { coeff, shift }
    }
}

/// A candidate identity `sum alpha_i (x+x_i)^D = sum beta_i (x+y_i)^(e_i)`, `e_i < D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInstance {
    pub degree: usize,
    pub lhs: Vec<LeadTerm>,
    pub rhs: Vec<ShiftedPower>,
}

impl BoundInstance {
    pub fn new(degree: usize, lhs: Vec<LeadTerm>, rhs: Vec<ShiftedPower>) -> Result<Self> {
        let inst = BoundInstance { degree, lhs, rhs };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: BoundInstance =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("instance JSON: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.lhs.is_empty() {
            return Err(Error::Invalid("left-hand side is empty".into()));
        }
        for (i, t) in self.lhs.iter().enumerate() {
            if t.coeff.is_zero() {
                return Err(Error::Invalid(format!("left-hand coefficient {i} is zero")));
            }
            if self.lhs[..i].iter().any(|o| o.shift == t.shift) {
                return Err(Error::Invalid(format!("left-hand shift {} repeated", t.shift)));
            }
        }
        if let Some(t) = self.rhs.iter().find(|t| t.exponent >= self.degree) {
            return Err(Error::Invalid(format!(
                "right-hand exponent {} is not below {}",
                t.exponent, self.degree
            )));
        }
        Ok(())
    }

    /// `{(x+x_i)^D} ∪ {(x+y_i)^(e_i)}`.
    pub fn family(&self) -> Result<PowerFamily> {
        let mut terms: Vec<ShiftedPower> = self
            .lhs
            .iter()
            .map(|t| ShiftedPower::new(t.shift.clone(), self.degree))
            .collect();
        terms.extend(self.rhs.iter().cloned());
        PowerFamily::new(terms, Some(self.degree))
    }
}

/// Certifies that the powers of `inst` are linearly independent, so no identity
/// of that shape exists. Fails with the dual nullspace witness if they are dependent.
pub fn refute_identity(inst: &BoundInstance) -> Result<Certificate> {
    let fam = inst.family()?;
    let dimension = fam.degree() + 1;
    if fam.len() > dimension {
        return Err(Error::TooManyTerms {
            terms: fam.len(),
            dimension,
        });
    }
    certify_regular(&to_dual(&fam)?.pair)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LowerBound {
    /// `sum_k alpha_i (x+x_i)^d` with `k <= (d+2)/4` needs `l >= k` terms of degree at most `d`.
    First,
    /// `(x+1)^(d+1) - x^(d+1)` needs more than `(d-1)/2` terms of degree at most `d`.
    Second,
    /// The first bound with exponents of any size.
    Third,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateCheck {
    /// Number of terms after merging like terms.
    pub terms: usize,
    pub represents_target: bool,
    /// Present when the candidate has fewer terms than the bound allows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<BoundInstance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    pub theorem: LowerBound,
    pub degree: usize,
    /// Number of degree-`d` powers in the hard polynomial.
    pub k: usize,
    /// Smallest number of terms a representation can have.
    pub min_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<CandidateCheck>,
}

fn check_bound_hypothesis(d: usize, lhs: &[LeadTerm]) -> Result<()> {
    if lhs.is_empty() {
        return Err(Error::Invalid("hard polynomial has no terms".into()));
    }
    if 4 * lhs.len() > d + 2 {
        return Err(Error::BoundHypothesis { k: lhs.len(), degree: d });
    }
    Ok(())
}

fn lead_polynomial(d: usize, lhs: &[LeadTerm]) -> Result<Polynomial> {
    let shifts: Vec<Rational> = lhs.iter().map(|t| t.shift.clone()).collect();
    let coeffs: Vec<Rational> = lhs.iter().map(|t| t.coeff.clone()).collect();
    hard_h1(&shifts, &coeffs, d)
}

/// Keeps a maximal independent subfamily of distinct powers.
fn reduced_rhs(powers: Vec<ShiftedPower>, degree: usize) -> Result<Vec<ShiftedPower>> {
    let mut distinct: Vec<ShiftedPower> = Vec::new();
    for p in powers {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let keep = independent_subfamily(&distinct, degree)?;
    Ok(keep.into_iter().map(|i| distinct[i].clone()).collect())
}

/// Moves the candidate's degree-`d` terms to the left of `H_1 = sum`.
fn rearrange_same_degree(d: usize, lhs: &[LeadTerm], cand: &[Term]) -> Result<BoundInstance> {
    let mut lead: Vec<Term> = lhs.iter().map(|t| Term::new(t.coeff.clone(), t.shift.clone(), d)).collect();
    lead.extend(
        cand.iter()
            .filter(|t| t.exp == d)
            .map(|t| Term::new(-t.coeff.clone(), t.shift.clone(), d)),
    );
    let lead: Vec<LeadTerm> = combine_like_terms(&lead)
        .into_iter()
        .map(|t| LeadTerm::new(t.coeff, t.shift))
        .collect();
    let rhs = reduced_rhs(cand.iter().filter(|t| t.exp < d).map(Term::power).collect(), d)?;
    BoundInstance::new(d, lead, rhs)
}

fn candidate_check(
    target: &Polynomial,
    cand: &[Term],
    min_terms: usize,
    rearrange: impl FnOnce(&[Term]) -> Result<BoundInstance>,
) -> Result<CandidateCheck> {
    let cand = combine_like_terms(cand);
    let top = cand.iter().map(|t| t.exp).max().unwrap_or(0).max(target.ambient_degree());
    let represents_target = sum_terms(&cand, top)? == target.embed(top)?;
    if cand.len() >= min_terms {
        return Ok(CandidateCheck {
            terms: cand.len(),
            represents_target,
            instance: None,
            refutation: None,
        });
    }
    let inst = rearrange(&cand)?;
    let cert = refute_identity(&inst)?;
    Ok(CandidateCheck {
        terms: cand.len(),
        represents_target,
        instance: Some(inst),
        refutation: Some(cert),
    })
}

/// First lower bound for `H_1 = sum alpha_i (x+x_i)^d`. A candidate with fewer
/// than `k` terms (all exponents at most `d`) is refuted by certifying the
/// rearranged identity impossible.
pub fn check_lb1(d: usize, lhs: &[LeadTerm], candidate: Option<&[Term]>) -> Result<BoundVerdict> {
    check_bound_hypothesis(d, lhs)?;
    let target = lead_polynomial(d, lhs)?;
    let k = lhs.len();
    let candidate = match candidate {
        None => None,
        Some(cand) => {
            if let Some(t) = cand.iter().find(|t| t.exp > d) {
                return Err(Error::Invalid(format!(
                    "exponent {} exceeds {d}; use the third bound",
                    t.exp
                )));
            }
            Some(candidate_check(&target, cand, k, |c| rearrange_same_degree(d, lhs, c))?)
        }
    };
    Ok(BoundVerdict {
        theorem: LowerBound::First,
        degree: d,
        k,
        min_terms: k,
        candidate,
    })
}

/// Second lower bound for `H_2 = (x+1)^(d+1) - x^(d+1)`: at least `floor((d-1)/2) + 1` terms.
pub fn check_lb2(d: usize, candidate: Option<&[Term]>) -> Result<BoundVerdict> {
    if d == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let min_terms = (d - 1) / 2 + 1;
    let target = hard_h2(d);
    let candidate = match candidate {
        None => None,
        Some(cand) => {
            if let Some(t) = cand.iter().find(|t| t.exp > d) {
                return Err(Error::Invalid(format!("exponent {} exceeds {d}", t.exp)));
            }
            Some(candidate_check(&target, cand, min_terms, |c| {
                let lead = vec![LeadTerm::new(rat(1), rat(1)), LeadTerm::new(rat(-1), rat(0))];
                let rhs = reduced_rhs(c.iter().map(Term::power).collect(), d + 1)?;
                BoundInstance::new(d + 1, lead, rhs)
            })?)
        }
    };
    Ok(BoundVerdict {
        theorem: LowerBound::Second,
        degree: d,
        k: 2,
        min_terms,
        candidate,
    })
}

/// Third lower bound: `H_1` needs `k` terms even with arbitrarily large exponents.
/// With top exponent `n > d`, the `n`-th powers move left and `H_1` moves right.
pub fn check_lb3(d: usize, lhs: &[LeadTerm], candidate: Option<&[Term]>) -> Result<BoundVerdict> {
    check_bound_hypothesis(d, lhs)?;
    let target = lead_polynomial(d, lhs)?;
    let k = lhs.len();
    let candidate = match candidate {
        None => None,
        Some(cand) => Some(candidate_check(&target, cand, k, |c| {
            let n = c.iter().map(|t| t.exp).max().unwrap_or(0);
            if n <= d {
                return rearrange_same_degree(d, lhs, c);
            }
            let lead: Vec<LeadTerm> = c
                .iter()
                .filter(|t| t.exp == n)
                .map(|t| LeadTerm::new(t.coeff.clone(), t.shift.clone()))
                .collect();
            let mut rhs: Vec<ShiftedPower> = lhs.iter().map(|t| ShiftedPower::new(t.shift.clone(), d)).collect();
            rhs.extend(c.iter().filter(|t| t.exp < n).map(Term::power));
            BoundInstance::new(n, lead, reduced_rhs(rhs, n)?)
        })?),
    };
    Ok(BoundVerdict {
        theorem: LowerBound::Third,
        degree: d,
        k,
        min_terms: k,
        candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tail_counts;
    use crate::poly::ratio;

    fn pair(s: &str) -> Pair {
        s.parse().unwrap()
    }

    fn lead(shifts: &[i64]) -> Vec<LeadTerm> {
        shifts.iter().map(|&s| LeadTerm::new(rat(1), rat(s))).collect()
    }

    #[test]
    fn worked_example_splits_in_the_middle() {
        let c = certify_regular(&pair("100100;100010;100100 @ 0,1,3")).unwrap();
        assert_eq!(c.rule, Rule::Split);
        assert_eq!(c.r, Some(2));
        assert_eq!(c.children[0].rule, Rule::TailCount);
        assert_eq!(c.children[0].matrix.to_string(), "100;100;100");
        assert_eq!(c.children[1].rule, Rule::RankBase);
        assert_eq!(c.children[1].rank, Some(3));
        assert_eq!(c.children[1].matrix.to_string(), "100;010;100");
        assert!(verify_certificate(&c));
        assert!(c.follows_lbtool_path());
    }

    #[test]
    fn irregular_pair_returns_witness() {
        match certify_regular(&pair("100;010;100 @ -1,0,1")) {
            Err(Error::Irregular { witness }) => assert_eq!(witness.to_string(), "x^2 - 1"),
            other => panic!("expected irregular, got {other:?}"),
        }
    }

    #[test]
    fn dual_of_four_term_family_splits() {
        // tail counts [0,1,1,2,2,3,4] fail at r = 6; slope indices {1, 3}
        let p = Pair::new(
            InterpolationMatrix::from_cells(4, 6, &[(0, 0), (1, 1), (2, 3), (3, 5)]),
            "0,1,3,7".parse().unwrap(),
        )
        .unwrap();
        let c = certify_regular(&p).unwrap();
        assert_eq!(c.rule, Rule::Split);
        assert_eq!(c.r, Some(2));
        assert_eq!(c.children[1].rank, Some(2));
        assert!(verify_certificate(&c));

        let p = Pair::new(
            InterpolationMatrix::from_cells(3, 6, &[(0, 0), (1, 1), (2, 3)]),
            "0,1,3".parse().unwrap(),
        )
        .unwrap();
        assert_eq!(certify_regular(&p).unwrap().rule, Rule::TailCount);
    }

    #[test]
    fn atkinson_sharma_needs_ordered_knots() {
        // Hermite-like matrix with |E| = d+1 whose tail counts fail: 11 in the last row
        let ordered = pair("1000;0011;1000 @ 0,1,2");
        let c = certify_regular(&ordered).unwrap();
        assert_eq!(c.rule, Rule::AtkinsonSharma);
        assert!(verify_certificate(&c));

        let mut bad = c.clone();
        bad.knots = vec![rat(2), rat(1), rat(0)];
        assert!(!verify_certificate(&bad));
    }

    #[test]
    fn tampered_certificates_fail() {
        let c = certify_regular(&pair("100100;100010;100100 @ 0,1,3")).unwrap();
        let mut wrong_rank = c.clone();
        wrong_rank.children[1].rank = Some(2);
        assert!(!verify_certificate(&wrong_rank));

        let mut wrong_matrix = c.clone();
        wrong_matrix.children[0].matrix = "110;100;100".parse().unwrap();
        assert!(!verify_certificate(&wrong_matrix));

        // |E1| = r + 2 violates the split hypothesis even though both halves are otherwise fine
        let p = pair("1100;1000;1000 @ 0,1,2");
        let (l, r) = split_pair(&p, 1).unwrap();
        assert_eq!(l.matrix().ones(), 4);
        let forged = Certificate::split(&p, 1, Certificate::rank_base(&l, 2), Certificate::tail(&r));
        assert!(!verify_certificate(&forged));

        let mut lying_tail = Certificate::tail(&pair("100;010;100 @ -1,0,1"));
        assert!(!verify_certificate(&lying_tail));
        lying_tail.knots = vec![rat(0), rat(0), rat(1)];
        assert!(!verify_certificate(&lying_tail));
    }

    #[test]
    fn certificate_json_roundtrip() {
        let c = certify_regular(&pair("100100;100010;100100 @ 0,1/2,3")).unwrap();
        let json = c.to_json();
        assert!(json.contains("\"rule\": \"split\""));
        assert!(json.contains("\"1/2\""));
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, c);
        assert!(verify_certificate(&back));
    }

    #[test]
    fn threshold_examples() {
        for d in 1..20 {
            let l = (d - 1) / 2;
            assert!(!lbtool_threshold(2, l, d + 1));
        }
        assert!(lbtool_threshold(3, 3, 5));
        assert!(!lbtool_threshold(1, 1, 4));
    }

    #[test]
    fn refute_worked_instance() {
        let inst = BoundInstance::new(
            5,
            lead(&[0, 1, 3]),
            vec![ShiftedPower::int(0, 2), ShiftedPower::int(1, 1), ShiftedPower::int(3, 2)],
        )
        .unwrap();
        let c = refute_identity(&inst).unwrap();
        assert_eq!(c.rule, Rule::Split);
        assert_eq!(c.r, Some(2));
        assert!(verify_certificate(&c));
    }

    #[test]
    fn refute_second_bound_instance() {
        let d = 11;
        let inst = BoundInstance::new(
            d + 1,
            vec![LeadTerm::new(rat(1), rat(1)), LeadTerm::new(rat(-1), rat(0))],
            vec![
                ShiftedPower::int(2, 11),
                ShiftedPower::int(-3, 9),
                ShiftedPower::int(0, 4),
                ShiftedPower::int(5, 4),
                ShiftedPower::int(1, 0),
            ],
        )
        .unwrap();
        let c = refute_identity(&inst).unwrap();
        assert!(c.follows_lbtool_path());
        assert!(verify_certificate(&c));
    }

    #[test]
    fn refute_dependent_triple_fails_with_witness() {
        let inst = BoundInstance::new(
            2,
            vec![LeadTerm::new(rat(1), rat(1)), LeadTerm::new(rat(-1), rat(-1))],
            vec![ShiftedPower::int(0, 1)],
        )
        .unwrap();
        match refute_identity(&inst) {
            Err(Error::Irregular { witness }) => assert_eq!(witness.to_string(), "x^2 - 1"),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn instance_validation() {
        assert!(BoundInstance::new(3, vec![], vec![]).is_err());
        assert!(BoundInstance::new(3, vec![LeadTerm::new(rat(0), rat(1))], vec![]).is_err());
        assert!(BoundInstance::new(3, lead(&[1, 1]), vec![]).is_err());
        assert!(BoundInstance::new(3, lead(&[1]), vec![ShiftedPower::int(0, 3)]).is_err());
        let json = r#"{"degree":5,"lhs":[{"coeff":"1","shift":"0"},{"coeff":"-2/3","shift":"1"}],"rhs":[{"shift":"3","exp":2}]}"#;
        let inst = BoundInstance::from_json(json).unwrap();
        assert_eq!(inst.lhs[1].coeff, ratio(-2, 3));
    }

    #[test]
    fn first_bound_checks() {
        let v = check_lb1(10, &lead(&[0, 1, 2]), None).unwrap();
        assert_eq!(v.min_terms, 3);
        assert!(matches!(check_lb1(10, &lead(&[0, 1, 2, 3]), None), Err(Error::BoundHypothesis { .. })));

        // two-term candidate with a degree-10 term: refuted after rearrangement
        let cand = vec![Term::new(rat(1), rat(0), 10), Term::new(rat(5), rat(7), 4)];
        let v = check_lb1(10, &lead(&[0, 1, 2]), Some(&cand)).unwrap();
        let cc = v.candidate.unwrap();
        assert_eq!(cc.terms, 2);
        assert!(!cc.represents_target);
        let inst = cc.instance.unwrap();
        assert_eq!(inst.lhs.len(), 2);
        assert!(verify_certificate(&cc.refutation.unwrap()));

        // the hard polynomial itself meets the bound
        let own: Vec<Term> = [0, 1, 2].iter().map(|&s| Term::new(rat(1), rat(s), 10)).collect();
        let cc = check_lb1(10, &lead(&[0, 1, 2]), Some(&own)).unwrap().candidate.unwrap();
        assert!(cc.represents_target);
        assert!(cc.refutation.is_none());
    }

    #[test]
    fn second_bound_checks() {
        let v = check_lb2(9, None).unwrap();
        assert_eq!(v.min_terms, 5);
        let cand: Vec<Term> = (0..4).map(|i| Term::new(rat(1), rat(i), 9 - 2 * i as usize)).collect();
        let cc = check_lb2(9, Some(&cand)).unwrap().candidate.unwrap();
        assert!(verify_certificate(&cc.refutation.unwrap()));
    }

    #[test]
    fn third_bound_checks() {
        let cand = vec![Term::new(rat(1), rat(0), 15), Term::new(rat(-1), rat(4), 15)];
        let v = check_lb3(10, &lead(&[0, 1, 2]), Some(&cand)).unwrap();
        let cc = v.candidate.unwrap();
        let inst = cc.instance.unwrap();
        assert_eq!(inst.degree, 15);
        assert_eq!(inst.rhs.len(), 3);
        assert!(verify_certificate(&cc.refutation.unwrap()));
    }

    #[test]
    fn slope_split_left_counts_are_bounded() {
        let c = certify_regular(&pair("100100;100010;100100 @ 0,1,3")).unwrap();
        let n = tail_counts(&c.children[0].matrix);
        for t in 1..=c.r.unwrap() {
            assert!(2 * n.get(t) <= t + 1);
        }
    }
}
