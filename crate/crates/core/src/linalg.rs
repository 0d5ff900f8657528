//! Exact sparse linear algebra over the rationals.
//!
//! Rows are cleared to primitive integer vectors and eliminated fraction-free;
//! after every row operation the row is divided by its content, so entries stay
//! small. Pivots are taken at the smallest column index, rows in index order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_rational, parse_rational, Rational};

/// Sparse rational matrix; no explicit zeros, indices in range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl QMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        QMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        QMatrix { nrows: n, ncols: n, rows }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, Rational)>) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::Dimension(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
            }
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let rows = acc.into_iter().map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Ok(QMatrix { nrows, ncols, rows })
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged dense rows".into()));
        }
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        QMatrix::from_triplets(rows.len(), ncols, trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.rows[r]
            .binary_search_by_key(&c, |(j, _)| *j)
            .map(|k| self.rows[r][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.nrows)
            .map(|i| {
                let mut d = vec![Rational::zero(); self.ncols];
                for (j, v) in &self.rows[i] {
                    d[*j] = v.clone();
                }
                d
            })
            .collect()
    }

    /// Selects rows in the given order.
    pub fn select_rows(&self, order: &[usize]) -> QMatrix {
        QMatrix { nrows: order.len(), ncols: self.ncols, rows: order.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    /// `x · M` for a row vector `x` of length `nrows`.
    pub fn left_mul(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.nrows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", x.len(), self.nrows)));
        }
        let mut out = vec![Rational::zero(); self.ncols];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, v) in &self.rows[i] {
                out[*j] += xi * v;
            }
        }
        Ok(out)
    }

    /// `M · x` for a column vector `x` of length `ncols`.
    pub fn right_mul(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.ncols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", x.len(), self.ncols)));
        }
        Ok(self.rows.iter().map(|r| r.iter().map(|(j, v)| v * &x[*j]).sum()).collect())
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.ncols);
        for row in &self.rows {
            ech.insert(IntRow::from_rational(row));
        }
        ech.pivots.len()
    }

    /// Basis of `{x : x·M = 0}` in reduced echelon form: each vector's first
    /// nonzero coordinate is 1, and the basis depends only on the kernel.
    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        // Track combinations in columns ncols.. so that a row reducing to zero
        // in the main block carries its kernel vector.
        let mut ech = Echelon::new(self.ncols);
        let mut kernel: Vec<Vec<Rational>> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            r.push((self.ncols + i, Rational::one()));
            let reduced = ech.insert(IntRow::from_rational(&r));
            if let Some(zero_row) = reduced {
                let mut v = vec![Rational::zero(); self.nrows];
                for (j, x) in &zero_row.0 {
                    v[j - self.ncols] = Rational::from_integer(x.clone());
                }
                kernel.push(v);
            }
        }
        rref_rows(kernel)
    }

    /// A solution of `M · x = b`, free variables set to zero, or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.nrows {
            return Err(Error::Dimension(format!("right-hand side of length {} against {} rows", b.len(), self.nrows)));
        }
        let mut ech = Echelon::new(self.ncols);
        for (row, bi) in self.rows.iter().zip(b) {
            let mut r = row.clone();
            if !bi.is_zero() {
                r.push((self.ncols, bi.clone()));
            }
            if let Some(rest) = ech.insert(IntRow::from_rational(&r)) {
                if !rest.0.is_empty() {
                    return Ok(None);
                }
            }
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (&c, row) in ech.pivots.iter().rev() {
            let lead = Rational::from_integer(row.0[0].1.clone());
            let mut acc = Rational::zero();
            for (j, v) in &row.0[1..] {
                let v = Rational::from_integer(v.clone());
                if *j == self.ncols {
                    acc += v;
                } else {
                    acc -= v * &x[*j];
                }
            }
            x[c] = acc / lead;
        }
        Ok(Some(x))
    }

    /// CSV with one row per matrix row, entries as exact `num/den` strings.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str, ncols: usize) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines().filter(|l| !l.is_empty()) {
            let cells = line.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            if cells.len() != ncols {
                return Err(Error::Dimension(format!("CSV row has {} cells, expected {ncols}", cells.len())));
            }
            rows.push(cells);
        }
        let mut m = QMatrix::from_dense(&rows)?;
        m.ncols = ncols;
        Ok(m)
    }
}

/// Reduced row echelon form of a list of rational vectors, zero rows dropped.
pub fn rref_rows(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = rows;
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for c in 0..ncols {
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let lead = rows[pivot_row][c].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= &lead;
        }
        let pr = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivot_row && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pr) {
                    *v -= &f * pv;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Sparse primitive integer row, sorted by column.
#[derive(Clone, Debug)]
struct IntRow(Vec<(usize, BigInt)>);

impl IntRow {
    fn from_rational(row: &[(usize, Rational)]) -> IntRow {
        let lcm = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let mut r: Vec<(usize, BigInt)> = row
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (*j, v.numer() * (&lcm / v.denom())))
            .collect();
        r.sort_by_key(|(j, _)| *j);
        let mut out = IntRow(r);
        out.make_primitive();
        out
    }

    fn make_primitive(&mut self) {
        let g = self.0.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        if !g.is_zero() && !g.is_one() {
            for (_, v) in self.0.iter_mut() {
                *v /= &g;
            }
        }
        // Canonical sign: positive leading entry.
        if self.0.first().is_some_and(|(_, v)| v.is_negative()) {
            for (_, v) in self.0.iter_mut() {
                *v = -&*v;
            }
        }
    }

    fn lead(&self) -> Option<usize> {
        self.0.first().map(|(j, _)| *j)
    }

    /// `a·self − b·other`, where the two leads cancel.
    fn eliminate(&self, other: &IntRow) -> IntRow {
        let a = &other.0[0].1;
        let b = &self.0[0].1;
        let g = a.gcd(b);
        let (a, b) = (a / &g, b / &g);
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (1, 1);
        while i < self.0.len() || j < other.0.len() {
            let ci = self.0.get(i).map_or(usize::MAX, |e| e.0);
            let cj = other.0.get(j).map_or(usize::MAX, |e| e.0);
            if ci < cj {
                out.push((ci, &a * &self.0[i].1));
                i += 1;
            } else if cj < ci {
                out.push((cj, -(&b * &other.0[j].1)));
                j += 1;
            } else {
                let v = &a * &self.0[i].1 - &b * &other.0[j].1;
                if !v.is_zero() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        let mut r = IntRow(out);
        r.make_primitive();
        r
    }
}

/// Incremental echelon form keyed by pivot column (only columns `< main` may pivot).
struct Echelon {
    main: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    fn new(main: usize) -> Self {
        Echelon { main, pivots: BTreeMap::new() }
    }

    /// Reduces `row`; stores it as a new pivot, or returns the remainder when
    /// its main block vanished.
    fn insert(&mut self, mut row: IntRow) -> Option<IntRow> {
        loop {
            match row.lead() {
                Some(c) if c < self.main => match self.pivots.get(&c) {
                    Some(p) => row = row.eliminate(p),
                    None => {
                        self.pivots.insert(c, row);
                        return None;
                    }
                },
                _ => return Some(row),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn nullspace_is_normalized() {
        let k = m(&[&[3, 6], &[1, 2]]).left_nullspace();
        assert_eq!(k, vec![vec![rat(1), rat(-3)]]);
        assert!(QMatrix::identity(4).left_nullspace().is_empty());
        let k = m(&[&[0, 0], &[1, 1], &[2, 2]]).left_nullspace();
        assert_eq!(k, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), ratio(-1, 2)]]);
    }

    #[test]
    fn solve_basics() {
        let b = vec![rat(3), ratio(-1, 2), rat(0)];
        assert_eq!(QMatrix::identity(3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).solve(&[rat(1), rat(2)]).unwrap(), None);
        assert!(QMatrix::identity(2).solve(&[rat(1)]).is_err());
        // Free variable set to zero.
        assert_eq!(m(&[&[1, 1]]).solve(&[rat(5)]).unwrap(), Some(vec![rat(5), rat(0)]));
    }

    #[test]
    fn csv_round_trip() {
        let a = QMatrix::from_dense(&[vec![ratio(1, 2), rat(0)], vec![rat(-3), ratio(7, 9)]]).unwrap();
        assert_eq!(QMatrix::from_csv(&a.to_csv(), 2).unwrap(), a);
    }

    fn any_matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec((-3i64..4, 1i64..3).prop_map(|(n, d)| ratio(n, d)), c), r)
        })
    }

    /// Same row span: each basis vector lies in the span of the other set.
    fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
        a.len() == b.len() && {
            let mut both = a.to_vec();
            both.extend(b.iter().cloned());
            rref_rows(both).len() == a.len()
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in any_matrix()) {
            let a = QMatrix::from_dense(&rows).unwrap();
            let k = a.left_nullspace();
            prop_assert_eq!(a.rank() + k.len(), a.nrows());
            for v in &k {
                prop_assert!(a.left_mul(v).unwrap().iter().all(Zero::is_zero));
            }
            prop_assert_eq!(a.rank(), rref_rows(rows.clone()).len());
        }

        #[test]
        fn row_permutation_invariance(rows in any_matrix()) {
            let a = QMatrix::from_dense(&rows).unwrap();
            let order: Vec<usize> = (0..a.nrows()).rev().collect();
            let b = a.select_rows(&order);
            prop_assert_eq!(a.rank(), b.rank());
            let kb: Vec<Vec<Rational>> = b.left_nullspace().into_iter()
                .map(|v| order.iter().enumerate().fold(vec![Rational::zero(); v.len()], |mut acc, (pos, &orig)| {
                    acc[orig] = v[pos].clone();
                    acc
                }))
                .collect();
            prop_assert!(same_span(&a.left_nullspace(), &kb));
        }

        #[test]
        fn solutions_have_zero_residual(rows in any_matrix(), seed in prop::collection::vec(-3i64..4, 6)) {
            let a = QMatrix::from_dense(&rows).unwrap();
            let x0: Vec<Rational> = (0..a.ncols()).map(|j| rat(seed[j])).collect();
            let b = a.right_mul(&x0).unwrap();
            let x = a.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.right_mul(&x).unwrap(), b);
        }
    }
}
