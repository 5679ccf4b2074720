//! Linear independence of shifted powers, decided through the dual
//! Birkhoff interpolation problem and, independently, by direct expansion.
//!
//! The power `(x+a)^e` in degree `d` is orthogonal, for the bilinear form
//! [`weyl_form`](crate::poly::weyl_form), exactly to the polynomials `g`
//! with `g^(d-e)(a) = 0`. A family of `k` distinct powers is therefore
//! independent iff its dual constraint system has rank `k`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use num_traits::Zero;

use crate::linalg::{self, Echelon};
use crate::matrix::{first_tail_violation, InterpolationMatrix};
use crate::pair::{pair_is_regular, KnotSet, Pair};
use crate::poly::{Polynomial, PowerFamily, Rational, ShiftedPower};

/// The interpolation pair dual to a power family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualProblem {
    pub pair: Pair,
    /// `cells[t]` is the `(row, column)` of the 1 produced by term `t`.
    pub cells: Vec<(usize, usize)>,
}

/// Knots are the distinct shifts in ascending order; term `(a, e)` puts a 1 at
/// `(row of a, d - e)`.
pub fn to_dual(fam: &PowerFamily) -> Result<DualProblem> {
    let d = fam.degree();
    let mut rows: BTreeMap<&Rational, usize> = BTreeMap::new();
    for t in fam.terms() {
        rows.entry(&t.shift).or_insert(0);
    }
    for (idx, v) in rows.values_mut().enumerate() {
        *v = idx;
    }
    let cells: Vec<(usize, usize)> = fam
        .terms()
        .iter()
        .map(|t| (rows[&t.shift], d - t.exponent))
        .collect();
    let knots = KnotSet::new(rows.keys().map(|&a| a.clone()).collect())?;
    let matrix = InterpolationMatrix::from_cells(knots.len(), d + 1, &cells);
    if matrix.ones() != cells.len() {
        // PowerFamily already rejects repeated terms; this guards hand-built families.
        return Err(Error::Invalid("two terms map to the same cell".into()));
    }
    Ok(DualProblem {
        pair: Pair::new(matrix, knots)?,
        cells,
    })
}

pub fn independent_via_duality(fam: &PowerFamily) -> Result<bool> {
    let dimension = fam.degree() + 1;
    if fam.len() > dimension {
        return Err(Error::TooManyTerms {
            terms: fam.len(),
            dimension,
        });
    }
    pair_is_regular(&to_dual(fam)?.pair)
}

/// Rank of the `k x (d+1)` coefficient matrix of the expanded family.
pub fn coefficient_rank(terms: &[ShiftedPower], d: usize) -> Result<usize> {
    let rows = terms
        .iter()
        .map(|t| Ok(t.expand(d)?.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(&rows, d + 1))
}

pub fn independent_via_oracle(fam: &PowerFamily) -> bool {
    coefficient_rank(fam.terms(), fam.degree()).expect("family exponents are within the ambient degree")
        == fam.len()
}

/// Coefficients `c` with `sum c_t (x+a_t)^(e_t) = 0`, normalized so the first nonzero is 1.
pub fn dependency_witness(fam: &PowerFamily) -> Option<Vec<Rational>> {
    let d = fam.degree();
    let expanded: Vec<Polynomial> = fam
        .terms()
        .iter()
        .map(|t| t.expand(d).expect("family exponents are within the ambient degree"))
        .collect();
    let rows: Vec<Vec<Rational>> = (0..=d)
        .map(|j| expanded.iter().map(|p| p.coeff(j)).collect())
        .collect();
    let mut c = Echelon::new(rows, fam.len()).nullspace().into_iter().next()?;
    let lead = c.iter().find(|v| !v.is_zero())?.clone();
    for v in &mut c {
        *v /= &lead;
    }
    Some(c)
}

/// Indices of a maximal independent subfamily, chosen greedily in input order.
pub fn independent_subfamily(terms: &[ShiftedPower], d: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (idx, t) in terms.iter().enumerate() {
        rows.push(t.expand(d)?.coeffs().to_vec());
        if linalg::rank(&rows, d + 1) == rows.len() {
            chosen.push(idx);
        } else {
            rows.pop();
        }
    }
    Ok(chosen)
}

/// `n[j]` = number of terms of degree less than `j`, for `j = 0..=d+1`.
pub fn degree_counts(fam: &PowerFamily) -> Vec<usize> {
    (0..=fam.degree() + 1)
        .map(|j| fam.terms().iter().filter(|t| t.exponent < j).count())
        .collect()
}

/// First `j` where `n_1 <= 1` or `n_j + n_(j-1) <= j` fails, if any.
pub fn independence_condition_failure(fam: &PowerFamily) -> Option<usize> {
    first_tail_violation(&degree_counts(fam))
}

/// `n_1 <= 1` and `n_j + n_(j-1) <= j` for `j = 2..=d+1`; sufficient for independence.
pub fn theorem_independence_check(fam: &PowerFamily) -> bool {
    independence_condition_failure(fam).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tail_counts;
    use crate::poly::rat;

    fn fam(terms: &[(i64, usize)], d: Option<usize>) -> PowerFamily {
        PowerFamily::new(terms.iter().map(|&(a, e)| ShiftedPower::int(a, e)).collect(), d).unwrap()
    }

    fn worked_family() -> PowerFamily {
        fam(&[(0, 5), (1, 5), (3, 5), (0, 2), (1, 1), (3, 2)], None)
    }

    #[test]
    fn dual_of_worked_family() {
        let dual = to_dual(&worked_family()).unwrap();
        assert_eq!(dual.pair.to_string(), "100100;100010;100100 @ 0,1,3");
        assert_eq!(dual.cells[4], (1, 4));
    }

    #[test]
    fn dual_of_dependent_triple() {
        let dual = to_dual(&fam(&[(1, 2), (-1, 2), (0, 1)], None)).unwrap();
        assert_eq!(dual.pair.to_string(), "100;010;100 @ -1,0,1");
    }

    #[test]
    fn dual_of_singleton() {
        let dual = to_dual(&fam(&[(4, 3)], None)).unwrap();
        assert_eq!(dual.pair.to_string(), "1000 @ 4");
    }

    #[test]
    fn independence_examples() {
        let triple = fam(&[(1, 2), (-1, 2), (0, 1)], None);
        let monomials = fam(&[(0, 4), (0, 3), (0, 2), (0, 1), (0, 0)], None);
        for (f, expected) in [(triple, false), (worked_family(), true), (monomials, true)] {
            assert_eq!(independent_via_duality(&f).unwrap(), expected);
            assert_eq!(independent_via_oracle(&f), expected);
        }
    }

    #[test]
    fn too_many_terms_is_an_error() {
        let f = fam(&[(0, 1), (1, 1), (2, 1)], None);
        assert!(matches!(independent_via_duality(&f), Err(Error::TooManyTerms { terms: 3, dimension: 2 })));
        assert!(!independent_via_oracle(&f));
    }

    #[test]
    fn theorem_check_examples() {
        assert!(theorem_independence_check(&fam(&[(0, 6), (1, 6), (5, 6)], None)));

        // n_6 + n_5 = 4 + 3 > 6, yet the family is independent
        let f = fam(&[(0, 5), (1, 4), (3, 2), (7, 0)], None);
        assert_eq!(degree_counts(&f), vec![0, 1, 1, 2, 2, 3, 4]);
        assert!(!theorem_independence_check(&f));
        assert_eq!(independence_condition_failure(&f), Some(6));
        assert!(independent_via_oracle(&f));
        assert!(independent_via_duality(&f).unwrap());

        let f = fam(&[(0, 5), (1, 4), (3, 2)], None);
        assert!(theorem_independence_check(&f));
        assert!(independent_via_oracle(&f));

        let triple = fam(&[(1, 2), (-1, 2), (0, 1)], None);
        assert_eq!(independence_condition_failure(&triple), Some(3));
    }

    #[test]
    fn degree_counts_match_dual_tail_counts() {
        let f = worked_family();
        let dual = to_dual(&f).unwrap();
        assert_eq!(degree_counts(&f), tail_counts(dual.pair.matrix()).as_slice());
    }

    #[test]
    fn dependency_of_the_triple() {
        let w = dependency_witness(&fam(&[(1, 2), (-1, 2), (0, 1)], None)).unwrap();
        assert_eq!(w, vec![rat(1), rat(-1), rat(-4)]);
        assert!(dependency_witness(&worked_family()).is_none());
    }

    #[test]
    fn greedy_subfamily() {
        let terms = vec![ShiftedPower::int(1, 2), ShiftedPower::int(-1, 2), ShiftedPower::int(0, 1), ShiftedPower::int(0, 0)];
        assert_eq!(independent_subfamily(&terms, 2).unwrap(), vec![0, 1, 3]);
    }
}
