//! Plain Gauss-Jordan elimination over the rationals.

use num_traits::{One, Zero};

use crate::poly::Rational;

/// Reduced row echelon form of a dense rational matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl Echelon {
    /// Reduces `rows` (each of length `cols`), pivoting on the first nonzero entry of each column.
    pub fn new(mut rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..cols {
            if next == rows.len() {
                break;
            }
            let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(next, found);
            let inv = rows[next][col].recip();
            for v in rows[next][col..].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[next].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == next || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    if !p.is_zero() {
                        *v -= &factor * p;
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        Echelon { rows, pivots, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis of `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    Echelon::new(rows.to_vec(), cols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&mat(&[&[0, 1], &[1, 0]]), 2), 2);
        assert_eq!(rank(&mat(&[&[0, 0, 0]]), 3), 0);
        assert_eq!(rank(&[], 3), 0);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let ech = Echelon::new(a.clone(), 4);
        let ns = ech.nullspace();
        assert_eq!(ech.rank() + ns.len(), 4);
        for v in &ns {
            for row in &a {
                let dot: Rational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }
}
