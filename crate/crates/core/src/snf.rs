//! Smith normal form over the integers, arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| x.into()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.entries[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Diagonal of the Smith normal form: `min(rows, cols)` nonnegative entries
/// with `d_1 | d_2 | ...` (zeros last). Pivots on the least absolute nonzero
/// entry of the remaining block.
pub fn smith_normal_form(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (r, c) = (a.rows, a.cols);
    let k = r.min(c);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = a.get(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| v.abs() < a.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                diag.resize(k, BigInt::zero());
                return diag;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let p = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = a.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-q);
                }
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = a.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-q);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => a.add_row_multiple(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        diag.push(a.get(t, t).abs());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntegerMatrix::from_rows(rows))
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn already_diagonal() {
        assert_eq!(snf(&[vec![2, 0], vec![0, 2]]), vec![2, 2]);
    }

    #[test]
    fn two_by_two() {
        assert_eq!(snf(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn unimodular_row() {
        assert_eq!(snf(&[vec![1, -1]]), vec![1]);
    }

    #[test]
    fn reorders_for_divisibility() {
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[vec![4, 0], vec![0, 6]]), vec![2, 12]);
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(snf(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
        assert!(smith_normal_form(&IntegerMatrix::zeros(0, 3)).is_empty());
    }
}
