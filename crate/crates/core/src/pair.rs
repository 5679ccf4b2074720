//! Interpolation pairs `(E, X)` and their exact system matrices `A(E, X)`.
//!
//! The system is written in the basis `x^j / j!`, where the constraint
//! `g^(k)(x_i)` reads `sum_j x_i^(j-k) / (j-k)! * g_j` (terms with `j < k`
//! vanish). Rows are listed column-major over `E`, so that cutting `E`
//! after column `r` leaves `A(E, X)` block upper triangular as is.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::matrix::InterpolationMatrix;
use crate::poly::{factorial, falling_factorial, parse_rational, pow, Polynomial, Rational};

/// Pairwise distinct knots, one per matrix row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnotSet(Vec<Rational>);

impl KnotSet {
    pub fn new(knots: Vec<Rational>) -> Result<Self> {
        let mut seen = HashSet::new();
        for x in &knots {
            if !seen.insert(x) {
                return Err(Error::DuplicateKnot(x.clone()));
            }
        }
        Ok(KnotSet(knots))
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }
}

impl FromStr for KnotSet {
    type Err = Error;

    /// Comma separated rationals, e.g. `0,1,3` or `-1/2, 2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Invalid("empty knot list".into()));
        }
        KnotSet::new(s.split(',').map(parse_rational).collect::<Result<_>>()?)
    }
}

impl fmt::Display for KnotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An interpolation matrix bound row by row to a knot set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    matrix: InterpolationMatrix,
    knots: KnotSet,
}

impl Pair {
    pub fn new(matrix: InterpolationMatrix, knots: KnotSet) -> Result<Self> {
        if matrix.rows() != knots.len() {
            return Err(Error::KnotCountMismatch {
                rows: matrix.rows(),
                knots: knots.len(),
            });
        }
        Ok(Pair { matrix, knots })
    }

    pub fn matrix(&self) -> &InterpolationMatrix {
        &self.matrix
    }

    pub fn knots(&self) -> &KnotSet {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.matrix.degree()
    }
}

impl FromStr for Pair {
    type Err = Error;

    /// `matrix @ knots`, e.g. `100100;100010;100100 @ 0,1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let (m, x) = s
            .split_once('@')
            .ok_or_else(|| Error::Invalid("pair needs the form `matrix @ knots`".into()))?;
        Pair::new(m.parse()?, x.parse()?)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.matrix, self.knots)
    }
}

/// `A(E, X)` with one labelled row per constraint `(knot index, derivative order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMatrix {
    pub entries: Vec<Vec<Rational>>,
    pub row_labels: Vec<(usize, usize)>,
    pub cols: usize,
}

impl SystemMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }
}

/// Formats a row as `(a,b,c)`.
pub fn format_row(row: &[Rational]) -> String {
    let parts: Vec<String> = row.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for SystemMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, (i, k)) in self.entries.iter().zip(&self.row_labels) {
            writeln!(f, "{}  g^({k})(x_{})", format_row(row), i + 1)?;
        }
        Ok(())
    }
}

/// `x^(j-k) / (j-k)!` for `j >= k`, else 0.
fn basis_entry(x: &Rational, j: usize, k: usize) -> Rational {
    if j < k {
        return Rational::zero();
    }
    pow(x, j - k) / Rational::from_integer(factorial(j - k))
}

pub fn build_system(p: &Pair) -> SystemMatrix {
    let cols = p.degree() + 1;
    let labels = p.matrix.cells_column_major();
    let entries = labels
        .iter()
        .map(|&(i, k)| {
            let x = &p.knots.as_slice()[i];
            (0..cols).map(|j| basis_entry(x, j, k)).collect()
        })
        .collect();
    SystemMatrix {
        entries,
        row_labels: labels,
        cols,
    }
}

/// The same constraints in the standard basis `x^j`: entries `j!/(j-k)! x^(j-k)`.
pub fn build_standard_system(p: &Pair) -> SystemMatrix {
    let cols = p.degree() + 1;
    let labels = p.matrix.cells_column_major();
    let entries = labels
        .iter()
        .map(|&(i, k)| {
            let x = &p.knots.as_slice()[i];
            (0..cols)
                .map(|j| {
                    if j < k {
                        Rational::zero()
                    } else {
                        pow(x, j - k) * Rational::from_integer(falling_factorial(j, k))
                    }
                })
                .collect()
        })
        .collect();
    SystemMatrix {
        entries,
        row_labels: labels,
        cols,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// Monic basis of the homogeneous solutions, in the standard basis.
    pub nullspace_basis: Vec<Polynomial>,
    pub is_full_row_rank: bool,
}

pub fn rank_and_nullspace(a: &SystemMatrix) -> RankReport {
    let ech = Echelon::new(a.entries.clone(), a.cols);
    let nullspace_basis = ech
        .nullspace()
        .into_iter()
        .map(|v| {
            // g_j is the coordinate on x^j/j!
            let coeffs = v
                .into_iter()
                .enumerate()
                .map(|(j, g)| g / Rational::from_integer(factorial(j)))
                .collect();
            Polynomial::from_coeffs(coeffs).monic()
        })
        .collect();
    RankReport {
        rank: ech.rank(),
        nullspace_basis,
        is_full_row_rank: ech.rank() == a.rows(),
    }
}

pub fn system_rank(a: &SystemMatrix) -> usize {
    linalg::rank(&a.entries, a.cols)
}

/// `(E, X)` is regular iff `A(E, X)` has full row rank `|E|`.
pub fn pair_is_regular(p: &Pair) -> Result<bool> {
    let ones = p.matrix.ones();
    if ones > p.degree() + 1 {
        return Err(Error::TooManyConstraints {
            ones,
            dimension: p.degree() + 1,
        });
    }
    Ok(system_rank(&build_system(p)) == ones)
}

/// Cuts `E` after column `r`. The left pair keeps columns `0..=r` (degree `r`);
/// the right pair keeps columns `r+1..=d` re-indexed from 0 (degree `d-r-1`).
pub fn split_pair(p: &Pair, r: usize) -> Result<(Pair, Pair)> {
    let d = p.degree();
    if r >= d {
        return Err(Error::InvalidSplit { r, degree: d });
    }
    let left = Pair {
        matrix: p.matrix.columns(0, r + 1),
        knots: p.knots.clone(),
    };
    let right = Pair {
        matrix: p.matrix.columns(r + 1, d + 1),
        knots: p.knots.clone(),
    };
    Ok((left, right))
}

/// Checks that `A(E, X)` in canonical row order is block upper triangular with
/// `A(E1, X)` and `A(E2, X)` on the diagonal, and that its rank is at least the
/// sum of the diagonal blocks' ranks.
pub fn verify_block_form(p: &Pair, r: usize) -> Result<bool> {
    let (left, right) = split_pair(p, r)?;
    let a = build_system(p);
    let a1 = build_system(&left);
    let a2 = build_system(&right);
    let top = a1.rows();
    if top + a2.rows() != a.rows() {
        return Ok(false);
    }
    for (idx, row) in a.entries.iter().enumerate() {
        let (head, tail) = row.split_at(r + 1);
        if idx < top {
            if a.row_labels[idx].1 > r || head != a1.entries[idx].as_slice() {
                return Ok(false);
            }
        } else {
            let below = idx - top;
            if a.row_labels[idx].1 <= r
                || head.iter().any(|v| !v.is_zero())
                || tail != a2.entries[below].as_slice()
            {
                return Ok(false);
            }
        }
    }
    Ok(system_rank(&a) >= system_rank(&a1) + system_rank(&a2))
}

/// The Lagrange system on `d+1` knots is a Vandermonde matrix; exposed for demos.
pub fn lagrange_pair(knots: KnotSet) -> Result<Pair> {
    let m = knots.len();
    if m == 0 {
        return Err(Error::Invalid("no knots".into()));
    }
    let cells: Vec<(usize, usize)> = (0..m).map(|i| (i, 0)).collect();
    Pair::new(InterpolationMatrix::from_cells(m, m, &cells), knots)
}

/// Checks `g^(k)(x_i) = 0` for every constrained `(i, k)`.
pub fn satisfies_constraints(p: &Pair, g: &Polynomial) -> bool {
    p.matrix
        .cells_column_major()
        .into_iter()
        .all(|(i, k)| g.eval_derivative(k, &p.knots.as_slice()[i]).is_zero())
}
