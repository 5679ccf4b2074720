//! Interpolation matrices and their purely combinatorial regularity criteria.
//!
//! Row `i` of an interpolation matrix corresponds to the knot `x_i`, column
//! `k` to the derivative order `k`; a 1 at `(i, k)` means the constraint
//! `g^(k)(x_i) = c_(i,k)` is imposed on a polynomial `g` of degree at most
//! `d = cols - 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InterpolationMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl InterpolationMatrix {
    /// All-zero `rows x cols` matrix. Panics if `cols == 0`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols > 0, "an interpolation matrix needs at least one column");
        InterpolationMatrix {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::ParseMatrix("no rows".into()));
        };
        let cols = first.len();
        if cols == 0 {
            return Err(Error::ParseMatrix("empty row".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ParseMatrix("ragged rows".into()));
        }
        Ok(InterpolationMatrix {
            rows: rows.len(),
            cols,
            bits: rows.concat(),
        })
    }

    /// Builds a matrix from the positions of its 1's.
    pub fn from_cells(rows: usize, cols: usize, cells: &[(usize, usize)]) -> Self {
        let mut m = InterpolationMatrix::zeros(rows, cols);
        for &(i, k) in cells {
            m.set(i, k, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Ambient polynomial degree `d = cols - 1`.
    pub fn degree(&self) -> usize {
        self.cols - 1
    }

    pub fn get(&self, i: usize, k: usize) -> bool {
        assert!(i < self.rows && k < self.cols);
        self.bits[i * self.cols + k]
    }

    pub fn set(&mut self, i: usize, k: usize, value: bool) {
        assert!(i < self.rows && k < self.cols);
        self.bits[i * self.cols + k] = value;
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.cols..(i + 1) * self.cols]
    }

    /// `|E|`, the number of 1's.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn column_ones(&self, k: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, k)).count()
    }

    /// Positions of the 1's in column-major order: by column, then by row.
    pub fn cells_column_major(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.ones());
        for k in 0..self.cols {
            for i in 0..self.rows {
                if self.get(i, k) {
                    out.push((i, k));
                }
            }
        }
        out
    }

    /// The submatrix made of columns `start..end`.
    pub fn columns(&self, start: usize, end: usize) -> InterpolationMatrix {
        assert!(start < end && end <= self.cols);
        let mut out = InterpolationMatrix::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for k in start..end {
                out.set(i, k - start, self.get(i, k));
            }
        }
        out
    }

    pub fn push_row(&mut self, row: &[bool]) {
        assert_eq!(row.len(), self.cols);
        self.bits.extend_from_slice(row);
        self.rows += 1;
    }

    /// `self ⊆ other`: every 1 of `self` is a 1 of `other` at the same position.
    /// Extra rows of `other` are allowed.
    pub fn is_subset_of(&self, other: &InterpolationMatrix) -> bool {
        self.cols == other.cols
            && self.rows <= other.rows
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|k| !self.get(i, k) || other.get(i, k))
            })
    }
}

impl fmt::Display for InterpolationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for &b in self.row(i) {
                write!(f, "{}", if b { '1' } else { '0' })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for InterpolationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InterpolationMatrix({self})")
    }
}

impl FromStr for InterpolationMatrix {
    type Err = Error;

    /// Rows joined by `;`, each a string of `0`/`1`, e.g. `100100;100010;100100`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::ParseMatrix("empty input".into()));
        }
        let rows = s
            .split(';')
            .map(|row| {
                row.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::ParseMatrix(format!("unexpected character {other:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        InterpolationMatrix::from_rows(&rows)
    }
}

impl Serialize for InterpolationMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for InterpolationMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A maximal run of consecutive 1's in one row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceSpan {
    pub row: usize,
    pub start_col: usize,
    pub length: usize,
}

impl SequenceSpan {
    pub fn is_odd(&self) -> bool {
        self.length % 2 == 1
    }
}

/// `N[t]` = number of 1's in the last `t` columns, `t = 0..=d+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCounts(Vec<usize>);

impl TailCounts {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, t: usize) -> usize {
        self.0[t]
    }

    pub fn total(&self) -> usize {
        *self.0.last().unwrap_or(&0)
    }
}

pub fn tail_counts(e: &InterpolationMatrix) -> TailCounts {
    let mut counts = Vec::with_capacity(e.cols() + 1);
    counts.push(0);
    let mut acc = 0;
    for k in (0..e.cols()).rev() {
        acc += e.column_ones(k);
        counts.push(acc);
    }
    TailCounts(counts)
}

/// At most `r` ones in the last `r` columns, for every `r`.
pub fn upper_polya(e: &InterpolationMatrix) -> bool {
    tail_counts(e)
        .as_slice()
        .iter()
        .enumerate()
        .all(|(r, &n)| n <= r)
}

/// At least `r` ones in the first `r` columns, for every `r`. Only defined for `|E| = d+1`.
pub fn polya(e: &InterpolationMatrix) -> Result<bool> {
    let expected = e.cols();
    if e.ones() != expected {
        return Err(Error::PolyaNeedsFullCount {
            ones: e.ones(),
            expected,
        });
    }
    let mut acc = 0;
    for r in 1..=e.cols() {
        acc += e.column_ones(r - 1);
        if acc < r {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn sequences(e: &InterpolationMatrix) -> Vec<SequenceSpan> {
    let mut out = Vec::new();
    for i in 0..e.rows() {
        let row = e.row(i);
        let mut k = 0;
        while k < row.len() {
            if row[k] {
                let start = k;
                while k < row.len() && row[k] {
                    k += 1;
                }
                out.push(SequenceSpan {
                    row: i,
                    start_col: start,
                    length: k - start,
                });
            } else {
                k += 1;
            }
        }
    }
    out
}

/// Whether `E` has 1's strictly northwest and strictly southwest of the first cell of `span`.
pub fn is_supported(e: &InterpolationMatrix, span: &SequenceSpan) -> bool {
    let k = span.start_col;
    let has_one_left_of = |i: usize| e.row(i)[..k].iter().any(|&b| b);
    let north = (0..span.row).any(has_one_left_of);
    let south = (span.row + 1..e.rows()).any(has_one_left_of);
    north && south
}

pub fn odd_supported_sequences(e: &InterpolationMatrix) -> Vec<SequenceSpan> {
    sequences(e)
        .into_iter()
        .filter(|s| s.is_odd() && is_supported(e, s))
        .collect()
}

/// Pólya condition and no odd supported sequence; implies order regularity.
pub fn atkinson_sharma(e: &InterpolationMatrix) -> Result<bool> {
    Ok(polya(e)? && odd_supported_sequences(e).is_empty())
}

/// Every odd sequence begins in column 0. With the Pólya condition this makes `E` regular.
pub fn odd_sequences_start_in_first_column(e: &InterpolationMatrix) -> bool {
    sequences(e)
        .iter()
        .all(|s| !s.is_odd() || s.start_col == 0)
}

/// `N[1] <= 1` and `N[r] + N[r-1] <= r` for `r = 2..len-1`.
pub fn tail_inequalities_hold(counts: &[usize]) -> bool {
    first_tail_violation(counts).is_none()
}

/// First index `r` at which the tail-count inequalities fail.
pub fn first_tail_violation(counts: &[usize]) -> Option<usize> {
    if counts.len() > 1 && counts[1] > 1 {
        return Some(1);
    }
    (2..counts.len()).find(|&r| counts[r] + counts[r - 1] > r)
}

/// Sufficient condition for `E` to be regular for every choice of distinct knots.
pub fn tail_condition(e: &InterpolationMatrix) -> bool {
    tail_inequalities_hold(tail_counts(e).as_slice())
}

/// Extends a matrix satisfying [`tail_condition`] to one with `d+1` ones that
/// satisfies the Pólya condition and whose odd sequences all start in column 0.
///
/// Odd sequences not starting in column 0 get a 1 prepended (top row first,
/// left to right, rescanning after each insertion); then rows `10...0` are
/// appended at the bottom until `|E| = d+1`.
pub fn complete_matrix(f: &InterpolationMatrix) -> Result<InterpolationMatrix> {
    if !tail_condition(f) {
        return Err(Error::CompletionPrecondition);
    }
    let mut e = f.clone();
    while let Some(span) = sequences(&e)
        .into_iter()
        .find(|s| s.is_odd() && s.start_col > 0)
    {
        e.set(span.row, span.start_col - 1, true);
    }
    if !upper_polya(&e) {
        return Err(Error::CompletionPrecondition);
    }
    let mut padding = vec![false; e.cols()];
    padding[0] = true;
    while e.ones() < e.cols() {
        e.push_row(&padding);
    }
    Ok(e)
}

/// All `s` in `0..n` with `(u[s+t] - u[s]) / t <= (u[n] - u[0]) / n` for `t = 1..=n-s`.
///
/// Never empty: a minimiser of `(u[n] - u[i]) / (n - i)` always qualifies.
pub fn slope_split_indices(u: &[i64]) -> Result<Vec<usize>> {
    if u.len() < 2 {
        return Err(Error::SequenceTooShort);
    }
    let n = u.len() - 1;
    let total = u[n] - u[0];
    Ok((0..n)
        .filter(|&s| (1..=n - s).all(|t| (u[s + t] - u[s]) * n as i64 <= total * t as i64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> InterpolationMatrix {
        s.parse().unwrap()
    }

    const APPENDIX: &str = "100100;100010;100100";
    const EXAMPLE3: &str = "100;010;100";

    #[test]
    fn parse_and_print() {
        let e = m(APPENDIX);
        assert_eq!((e.rows(), e.cols(), e.ones()), (3, 6, 6));
        assert_eq!(e.to_string(), APPENDIX);
        assert!("10;1".parse::<InterpolationMatrix>().is_err());
        assert!("".parse::<InterpolationMatrix>().is_err());
        assert!("102".parse::<InterpolationMatrix>().is_err());
    }

    #[test]
    fn tail_count_examples() {
        assert_eq!(tail_counts(&m(APPENDIX)).as_slice(), &[0, 0, 1, 3, 3, 3, 6]);
        assert_eq!(tail_counts(&m("000;000")).as_slice(), &[0, 0, 0, 0]);
        assert_eq!(tail_counts(&m(EXAMPLE3)).as_slice(), &[0, 0, 1, 3]);
    }

    #[test]
    fn polya_examples() {
        assert!(polya(&m(EXAMPLE3)).unwrap());
        assert!(!polya(&m("010;010;010")).unwrap());
        assert!(upper_polya(&m(APPENDIX)));
        assert!(matches!(polya(&m("100;000")), Err(Error::PolyaNeedsFullCount { .. })));
    }

    #[test]
    fn supported_sequence_examples() {
        assert_eq!(
            odd_supported_sequences(&m(EXAMPLE3)),
            vec![SequenceSpan { row: 1, start_col: 1, length: 1 }]
        );
        assert!(odd_supported_sequences(&m("0101101")).is_empty());
        assert_eq!(
            odd_supported_sequences(&m(APPENDIX)),
            vec![SequenceSpan { row: 1, start_col: 4, length: 1 }]
        );
        assert_eq!(sequences(&m("0111011")).len(), 2);
    }

    #[test]
    fn atkinson_sharma_examples() {
        assert!(atkinson_sharma(&m("110;001")).unwrap());
        assert!(!atkinson_sharma(&m(EXAMPLE3)).unwrap());
        assert!(atkinson_sharma(&m("1000;1000;1000;1000")).unwrap());
        assert!(atkinson_sharma(&m("100;000")).is_err());
    }

    #[test]
    fn tail_condition_examples() {
        // dual matrix of {x^5, (x+1)^4, (x+3)^2, (x+7)^0} at d = 5: fails only at r = 6 (4 + 3 > 6)
        let dual = InterpolationMatrix::from_cells(4, 6, &[(0, 0), (1, 1), (2, 3), (3, 5)]);
        assert_eq!(tail_counts(&dual).as_slice(), &[0, 1, 1, 2, 2, 3, 4]);
        assert!(!tail_condition(&dual));
        assert_eq!(first_tail_violation(tail_counts(&dual).as_slice()), Some(6));
        // without the constant term it passes
        let dual3 = InterpolationMatrix::from_cells(3, 6, &[(0, 0), (1, 1), (2, 3)]);
        assert_eq!(tail_counts(&dual3).as_slice(), &[0, 0, 0, 1, 1, 2, 3]);
        assert!(tail_condition(&dual3));
        assert!(!tail_condition(&m(EXAMPLE3)));
        assert_eq!(first_tail_violation(&[0, 0, 1, 3]), Some(3));
        assert!(tail_condition(&m("0000;0000")));
    }

    #[test]
    fn completion_examples() {
        let e = complete_matrix(&m("00100")).unwrap();
        assert_eq!(e.to_string(), "01100;10000;10000;10000");
        assert_eq!(e.ones(), 5);

        let lagrange = m("100;100;100");
        assert_eq!(complete_matrix(&lagrange).unwrap(), lagrange);

        let dual = InterpolationMatrix::from_cells(4, 6, &[(0, 0), (1, 1), (2, 3), (3, 5)]);
        assert!(matches!(complete_matrix(&dual), Err(Error::CompletionPrecondition)));

        let dual = InterpolationMatrix::from_cells(3, 6, &[(0, 0), (1, 1), (2, 3)]);
        let e = complete_matrix(&dual).unwrap();
        assert_eq!(e.to_string(), "100000;110000;001100;100000");
        assert_eq!(e.ones(), 6);
        assert!(polya(&e).unwrap());
        assert!(odd_sequences_start_in_first_column(&e));
        assert!(dual.is_subset_of(&e));

        assert!(matches!(complete_matrix(&m(EXAMPLE3)), Err(Error::CompletionPrecondition)));
    }

    #[test]
    fn completion_handles_merging_runs() {
        let e = complete_matrix(&m("001010")).unwrap();
        assert_eq!(e.row(0), &[false, true, true, true, true, false]);
        assert!(odd_sequences_start_in_first_column(&e));
    }

    #[test]
    fn slope_examples() {
        assert!(slope_split_indices(&[0, 1, 2, 3]).unwrap().contains(&0));
        assert_eq!(slope_split_indices(&[0, 0, 1, 3, 3, 3, 6]).unwrap(), vec![0, 3]);
        assert_eq!(slope_split_indices(&[0, 2, 2]).unwrap(), vec![1]);
        assert!(matches!(slope_split_indices(&[4]), Err(Error::SequenceTooShort)));
    }

    #[test]
    fn columns_and_subset() {
        let e = m(APPENDIX);
        assert_eq!(e.columns(0, 3).to_string(), "100;100;100");
        assert_eq!(e.columns(3, 6).to_string(), "100;010;100");
        assert!(m("000000;000010;000000").is_subset_of(&e));
        assert!(!m("010000;000000;000000").is_subset_of(&e));
    }
}
