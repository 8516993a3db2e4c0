//! Integer matrices in dense and sparse row storage.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::int::Int;

/// A sparse row: strictly increasing column indices with nonzero values.
pub type SparseRow = Vec<(u32, Int)>;

/// Returns `a + m * b` for sparse rows.
pub fn row_axpy(a: &SparseRow, m: &Int, b: &SparseRow) -> SparseRow {
    if m.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        match ca.cmp(&cb) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((cb, m * &b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &a[i].1 + &(m * &b[j].1);
                if !v.is_zero() {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Returns `p * a + q * b` for sparse rows.
pub fn row_lincomb(p: &Int, a: &SparseRow, q: &Int, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        let (c, v) = match ca.cmp(&cb) {
            std::cmp::Ordering::Less => {
                i += 1;
                (ca, p * &a[i - 1].1)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (cb, q * &b[j - 1].1)
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (ca, &(p * &a[i - 1].1) + &(q * &b[j - 1].1))
            }
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Looks up a column in a sparse row.
pub fn row_get(r: &SparseRow, c: u32) -> Option<&Int> {
    r.binary_search_by_key(&c, |e| e.0).ok().map(|k| &r[k].1)
}

/// Builds a sparse row from unsorted `(col, value)` pairs, summing duplicates.
pub fn row_from_pairs(mut pairs: Vec<(u32, Int)>) -> SparseRow {
    pairs.sort_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(pairs.len());
    for (c, v) in pairs {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

pub fn row_from_dense(v: &[Int]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i as u32, x.clone()))
        .collect()
}

pub fn row_to_dense(r: &SparseRow, n: usize) -> Vec<Int> {
    let mut v = vec![Int::ZERO; n];
    for (c, x) in r {
        v[*c as usize] = x.clone();
    }
    v
}

/// Dot product of a dense vector with a sparse row.
pub fn dot_sparse(v: &[Int], r: &SparseRow) -> Int {
    let mut acc = Int::ZERO;
    for (c, x) in r {
        let y = &v[*c as usize];
        if !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Row-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseRow>) -> Self {
        debug_assert!(rows.iter().all(|r| r.iter().all(|(c, _)| (*c as usize) < cols)));
        SparseMatrix { cols, rows }
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        SparseMatrix {
            cols: m.cols,
            rows: (0..m.rows).map(|i| row_from_dense(m.row(i))).collect(),
        }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                m.set(i, *c as usize, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn push(&mut self, r: SparseRow) {
        self.rows.push(r);
    }

    /// `v * self` for a dense row vector `v` of length `nrows`.
    pub fn left_mul(&self, v: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::ZERO; self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for (c, x) in r {
                out[*c as usize] += &(&v[i] * x);
            }
        }
        out
    }

    /// `r * self` for a sparse row `r` indexing the rows of `self`.
    pub fn row_mul(&self, r: &SparseRow) -> SparseRow {
        row_from_pairs(
            r.iter()
                .flat_map(|(i, a)| self.rows[*i as usize].iter().map(move |(c, x)| (*c, a * x)))
                .collect(),
        )
    }

    /// Writes the plain-text triplet format: a `rows cols nnz` header, then
    /// one `i j v` line per nonzero entry.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.rows.len(), self.cols, self.nnz())?;
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                writeln!(w, "{i} {c} {v}")?;
            }
        }
        Ok(())
    }

    pub fn to_triplet_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.rows.len(), self.cols, self.nnz());
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                let _ = writeln!(s, "{i} {c} {v}");
            }
        }
        s
    }

    pub fn read_triplets<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r
            .lines()
            .map(|l| l.map_err(Error::from))
            .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('#')));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty triplet file".into()))??;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad header {header:?}: {e}")))?;
        if h.len() != 3 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let (nr, nc, nnz) = (h[0], h[1], h[2]);
        let mut pairs: Vec<Vec<(u32, Int)>> = vec![Vec::new(); nr];
        let mut seen = 0usize;
        for line in lines {
            let line = line?;
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::Parse(format!("bad triplet line {line:?}")));
            }
            let i: usize = t[0].parse().map_err(|_| Error::Parse(format!("bad row in {line:?}")))?;
            let j: usize = t[1].parse().map_err(|_| Error::Parse(format!("bad col in {line:?}")))?;
            let v: Int = t[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad value in {line:?}")))?;
            if i >= nr || j >= nc {
                return Err(Error::Parse(format!("entry ({i},{j}) out of range")));
            }
            pairs[i].push((j as u32, v));
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::Parse(format!("header says {nnz} entries, found {seen}")));
        }
        Ok(SparseMatrix {
            cols: nc,
            rows: pairs.into_iter().map(row_from_pairs).collect(),
        })
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<&[Int]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::ONE);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntMatrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::ONE;
        }
        let mut a = self.to_rows();
        let mut sign = 1i64;
        let mut prev = Int::ONE;
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Int::ZERO,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        if sign < 0 {
            -&a[n - 1][n - 1]
        } else {
            a[n - 1][n - 1].clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_round_trip() {
        let m = IntMatrix::from_i64(&[&[2, 0, -1], &[0, 0, 0], &[5, 7, 0]]);
        let s = SparseMatrix::from_dense(&m);
        let text = s.to_triplet_string();
        let back = SparseMatrix::read_triplets(text.as_bytes()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_dense(), m);
    }

    #[test]
    fn triplet_rejects_bad_input() {
        assert!(SparseMatrix::read_triplets("2 2 1\n3 0 1\n".as_bytes()).is_err());
        assert!(SparseMatrix::read_triplets("2 2 2\n0 0 1\n".as_bytes()).is_err());
        assert!(SparseMatrix::read_triplets("".as_bytes()).is_err());
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(m.determinant(), Int::from(-8));
        let m = IntMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(m.determinant(), Int::from(-1));
    }

    #[test]
    fn axpy_cancels() {
        let a = row_from_pairs(vec![(0, Int::from(2)), (3, Int::from(1))]);
        let b = row_from_pairs(vec![(0, Int::from(1)), (5, Int::from(1))]);
        let c = row_axpy(&a, &Int::from(-2), &b);
        assert_eq!(c, vec![(3, Int::from(1)), (5, Int::from(-2))]);
    }
}
