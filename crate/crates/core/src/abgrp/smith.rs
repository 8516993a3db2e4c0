//! Smith data for a relation matrix: invariant factors, canonical
//! coordinates, lifts of canonical generators and integral solves.
//!
//! Two backends share one result type. The dense backend runs the dense
//! reduction on the whole matrix. The sparse backend first eliminates unit
//! pivots (shortest row first, then the least-populated column), folds the
//! remaining rows into a row-echelon basis with unimodular 2x2 steps, and
//! finishes with the dense reduction on that small residual block. Every row
//! operation is logged, so a solution in terms of the final rows can be pulled
//! back to the original relations.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::int::Int;

use super::matrix::{row_axpy, row_get, row_lincomb, SparseMatrix, SparseRow};
use super::snf::{dense_snf, DenseSnf, RowOp};

/// Which reduction strategy produced a [`SmithData`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Sparse,
}

impl Backend {
    /// Sparse when the matrix is both large and thin.
    pub fn choose(m: &SparseMatrix) -> Backend {
        let cells = m.nrows() as f64 * m.cols as f64;
        if cells > 1e6 && (m.nnz() as f64) < 0.01 * cells {
            Backend::Sparse
        } else {
            Backend::Dense
        }
    }
}

/// Calls `f(col, added)` for each column entering or leaving the support
/// when a sorted row changes from `old` to `new`.
fn support_changes(old: &SparseRow, new: &SparseRow, mut f: impl FnMut(u32, bool)) {
    let (mut i, mut j) = (0, 0);
    while i < old.len() || j < new.len() {
        let a = old.get(i).map_or(u32::MAX, |e| e.0);
        let b = new.get(j).map_or(u32::MAX, |e| e.0);
        if a < b {
            f(a, false);
            i += 1;
        } else if b < a {
            f(b, true);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
}

#[derive(Clone, Debug)]
struct Elim {
    col: u32,
    /// The pivot entry, always a unit.
    sign: Int,
    row_id: u32,
    row: SparseRow,
}

/// Where a canonical coordinate comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CoordSrc {
    /// Index into the dense diagonal (or beyond the rank for free directions).
    Dense(usize),
    /// A generator that occurs in no residual relation.
    Free(u32),
}

#[derive(Clone, Debug)]
pub struct SmithData {
    pub backend: Backend,
    ngens: usize,
    nrels: usize,
    elims: Vec<Elim>,
    /// Generators seen by the dense block, in dense column order.
    res_cols: Vec<u32>,
    /// Relation ids of the dense block rows, in dense row order.
    dense_rows: Vec<u32>,
    dense: DenseSnf,
    log: Vec<RowOp>,
    coord_src: Vec<CoordSrc>,
    factors: Vec<Int>,
}

impl SmithData {
    pub fn compute(m: &SparseMatrix) -> SmithData {
        Self::compute_with(m, Backend::choose(m))
    }

    pub fn compute_with(m: &SparseMatrix, backend: Backend) -> SmithData {
        let sd = match backend {
            Backend::Dense => Self::dense_path(m),
            Backend::Sparse => Self::sparse_path(m),
        };
        if let Err(e) = sd.verify(m) {
            panic!("Smith reduction self-check failed: {e}");
        }
        sd
    }

    fn dense_path(m: &SparseMatrix) -> SmithData {
        let res_cols: Vec<u32> = (0..m.cols as u32).collect();
        let dense_rows: Vec<u32> = (0..m.nrows() as u32).collect();
        let rows: Vec<Vec<Int>> = m.rows.iter().map(|r| super::matrix::row_to_dense(r, m.cols)).collect();
        let dense = dense_snf(rows, m.cols);
        let log = dense.ops.clone();
        Self::finish(m, Backend::Dense, Vec::new(), res_cols, dense_rows, dense, log)
    }

    fn sparse_path(m: &SparseMatrix) -> SmithData {
        let nrels = m.nrows();
        let mut rows: Vec<SparseRow> = m.rows.clone();
        let mut active = vec![true; nrels];
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols];
        let mut col_dead = vec![false; m.cols];
        // Exact number of live rows with an entry in each column.
        let mut col_count = vec![0usize; m.cols];
        for (i, r) in rows.iter().enumerate() {
            for (c, _) in r {
                col_rows[*c as usize].push(i as u32);
                col_count[*c as usize] += 1;
            }
        }
        let mut log: Vec<RowOp> = Vec::new();
        let mut elims: Vec<Elim> = Vec::new();
        let has_unit = |r: &SparseRow| r.iter().any(|e| e.1.is_unit());
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| has_unit(r))
            .map(|(i, r)| Reverse((r.len(), i as u32)))
            .collect();
        let mut touched: Vec<u32> = Vec::new();
        let mut mark = vec![0u32; nrels];
        let mut stamp = 0u32;
        while let Some(Reverse((len, id))) = heap.pop() {
            let i = id as usize;
            if !active[i] || rows[i].len() != len || !has_unit(&rows[i]) {
                continue;
            }
            // Among unit entries pick the column with the fewest live rows.
            let mut best: Option<(usize, u32)> = None;
            for (c, v) in &rows[i] {
                if !v.is_unit() {
                    continue;
                }
                let cnt = col_count[*c as usize];
                if best.map(|b| cnt < b.0).unwrap_or(true) {
                    best = Some((cnt, *c));
                }
            }
            let (_, col) = best.expect("row has a unit entry");
            let sign = row_get(&rows[i], col).unwrap().clone();
            active[i] = false;
            col_dead[col as usize] = true;
            let pivot = std::mem::take(&mut rows[i]);
            for (c, _) in &pivot {
                col_count[*c as usize] -= 1;
            }
            stamp += 1;
            touched.clear();
            for &r in &col_rows[col as usize] {
                let ru = r as usize;
                if ru == i || !active[ru] || mark[ru] == stamp {
                    continue;
                }
                mark[ru] = stamp;
                touched.push(r);
            }
            for &r in &touched {
                let ru = r as usize;
                let Some(x) = row_get(&rows[ru], col) else { continue };
                // x - f * sign = 0 with f = x * sign since sign^2 = 1.
                let f = -(x * &sign);
                let new_row = row_axpy(&rows[ru], &f, &pivot);
                support_changes(&rows[ru], &new_row, |c, added| {
                    if added {
                        col_count[c as usize] += 1;
                        if !col_dead[c as usize] {
                            col_rows[c as usize].push(r);
                        }
                    } else {
                        col_count[c as usize] -= 1;
                    }
                });
                rows[ru] = new_row;
                log.push(RowOp::AddMul { dst: r, src: id, m: f });
                if has_unit(&rows[ru]) {
                    heap.push(Reverse((rows[ru].len(), r)));
                }
            }
            col_rows[col as usize] = Vec::new();
            elims.push(Elim {
                col,
                sign,
                row_id: id,
                row: pivot,
            });
        }

        // Fold the residual rows into an echelon basis keyed by leading column.
        let mut basis: std::collections::BTreeMap<u32, u32> = Default::default();
        for i in 0..nrels {
            if !active[i] {
                continue;
            }
            let id = i as u32;
            loop {
                let Some((lead, x)) = rows[i].first().cloned() else {
                    break;
                };
                let Some(&b) = basis.get(&lead) else {
                    basis.insert(lead, id);
                    break;
                };
                let bu = b as usize;
                let p = rows[bu][0].1.clone();
                let (q, r) = x.div_mod_floor(&p);
                if r.is_zero() {
                    let f = -q;
                    rows[i] = row_axpy(&rows[i], &f, &rows[bu]);
                    log.push(RowOp::AddMul { dst: id, src: b, m: f });
                } else {
                    let (g, s, t) = Int::ext_gcd(&p, &x);
                    let c = -(x.div_exact(&g));
                    let d = p.div_exact(&g);
                    let nb = row_lincomb(&s, &rows[bu], &t, &rows[i]);
                    let ni = row_lincomb(&c, &rows[bu], &d, &rows[i]);
                    rows[bu] = nb;
                    rows[i] = ni;
                    log.push(RowOp::Mix {
                        k: b,
                        j: id,
                        a: s,
                        b: t,
                        c,
                        d,
                    });
                }
            }
        }
        let dense_rows: Vec<u32> = basis.values().copied().collect();
        let mut res_cols: Vec<u32> = dense_rows
            .iter()
            .flat_map(|&r| rows[r as usize].iter().map(|e| e.0))
            .collect();
        res_cols.sort_unstable();
        res_cols.dedup();
        let mut pos = vec![u32::MAX; m.cols];
        for (k, &c) in res_cols.iter().enumerate() {
            pos[c as usize] = k as u32;
        }
        let block: Vec<Vec<Int>> = dense_rows
            .iter()
            .map(|&r| {
                let mut v = vec![Int::ZERO; res_cols.len()];
                for (c, x) in &rows[r as usize] {
                    v[pos[*c as usize] as usize] = x.clone();
                }
                v
            })
            .collect();
        let dense = dense_snf(block, res_cols.len());
        log.extend(dense.ops.iter().map(|op| op.remap(|k| dense_rows[k as usize])));
        Self::finish(m, Backend::Sparse, elims, res_cols, dense_rows, dense, log)
    }

    fn finish(
        m: &SparseMatrix,
        backend: Backend,
        elims: Vec<Elim>,
        res_cols: Vec<u32>,
        dense_rows: Vec<u32>,
        dense: DenseSnf,
        log: Vec<RowOp>,
    ) -> SmithData {
        let mut coord_src = Vec::new();
        let mut factors = Vec::new();
        for (i, d) in dense.diag.iter().enumerate() {
            if !d.is_one() {
                coord_src.push(CoordSrc::Dense(i));
                factors.push(d.clone());
            }
        }
        for i in dense.rank()..res_cols.len() {
            coord_src.push(CoordSrc::Dense(i));
            factors.push(Int::ZERO);
        }
        let mut used = vec![false; m.cols];
        for e in &elims {
            used[e.col as usize] = true;
        }
        for &c in &res_cols {
            used[c as usize] = true;
        }
        for (c, u) in used.iter().enumerate() {
            if !u {
                coord_src.push(CoordSrc::Free(c as u32));
                factors.push(Int::ZERO);
            }
        }
        SmithData {
            backend,
            ngens: m.cols,
            nrels: m.nrows(),
            elims,
            res_cols,
            dense_rows,
            dense,
            log,
            coord_src,
            factors,
        }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Invariant factors in canonical order: torsion `d_1 | d_2 | ..` (all
    /// greater than one), then a zero for each free summand.
    pub fn factors(&self) -> &[Int] {
        &self.factors
    }

    /// Rank of the relation lattice.
    pub fn rank(&self) -> usize {
        self.elims.len() + self.dense.rank()
    }

    /// Removes eliminated generators from `z`, expressing the element through
    /// the remaining ones. Returns the multipliers used per elimination.
    fn eliminate(&self, z: &mut [Int], mut record: impl FnMut(usize, &Int)) {
        for (k, e) in self.elims.iter().enumerate() {
            let x = &z[e.col as usize];
            if x.is_zero() {
                continue;
            }
            let f = x * &e.sign;
            record(k, &f);
            let nf = -&f;
            for (c, v) in &e.row {
                let add = &nf * v;
                z[*c as usize] += &add;
            }
        }
    }

    fn dense_image(&self, z: &[Int]) -> Vec<Int> {
        let k = self.res_cols.len();
        let mut y = vec![Int::ZERO; k];
        for (a, &c) in self.res_cols.iter().enumerate() {
            let x = &z[c as usize];
            if x.is_zero() {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                let v = &self.dense.v[a][j];
                if !v.is_zero() {
                    *yj += &(x * v);
                }
            }
        }
        y
    }

    /// Canonical coordinates of the class of `z` (a dense vector on the
    /// generators). Torsion coordinates are reduced to `0 <= x < d`.
    pub fn coords(&self, z: &[Int]) -> Vec<Int> {
        assert_eq!(z.len(), self.ngens, "vector length mismatch");
        let mut z = z.to_vec();
        self.eliminate(&mut z, |_, _| {});
        let y = self.dense_image(&z);
        self.coord_src
            .iter()
            .zip(&self.factors)
            .map(|(src, d)| {
                let x = match src {
                    CoordSrc::Dense(i) => y[*i].clone(),
                    CoordSrc::Free(c) => z[*c as usize].clone(),
                };
                if d.is_zero() {
                    x
                } else {
                    x.rem_euclid(d)
                }
            })
            .collect()
    }

    pub fn coords_sparse(&self, z: &SparseRow) -> Vec<Int> {
        self.coords(&super::matrix::row_to_dense(z, self.ngens))
    }

    /// A vector on the generators whose class is canonical generator `k`.
    pub fn lift(&self, k: usize) -> Vec<Int> {
        let mut z = vec![Int::ZERO; self.ngens];
        match self.coord_src[k] {
            CoordSrc::Dense(i) => {
                for (a, &c) in self.res_cols.iter().enumerate() {
                    z[c as usize] = self.dense.vinv[i][a].clone();
                }
            }
            CoordSrc::Free(c) => z[c as usize] = Int::ONE,
        }
        z
    }

    /// Solves `lambda * M = z` over the integers, or returns `None` when `z`
    /// is not in the row lattice. The caller supplies `M` for the final check.
    pub fn solve(&self, m: &SparseMatrix, z: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(z.len(), self.ngens, "vector length mismatch");
        let mut lam = vec![Int::ZERO; self.nrels];
        let mut zz = z.to_vec();
        self.eliminate(&mut zz, |k, f| {
            let id = self.elims[k].row_id as usize;
            lam[id] += f;
        });
        for src in &self.coord_src {
            if let CoordSrc::Free(c) = src {
                if !zz[*c as usize].is_zero() {
                    return None;
                }
            }
        }
        let y = self.dense_image(&zz);
        for (i, yi) in y.iter().enumerate() {
            if i < self.dense.rank() {
                let d = &self.dense.diag[i];
                if !d.divides(yi) {
                    return None;
                }
                lam[self.dense_rows[i] as usize] += &yi.div_exact(d);
            } else if !yi.is_zero() {
                return None;
            }
        }
        for op in self.log.iter().rev() {
            op.pull_back(&mut lam);
        }
        let check = m.left_mul(&lam);
        assert_eq!(check, z, "integral solve failed its own check");
        Some(lam)
    }

    /// A basis of the left kernel `{lambda : lambda * M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Int>> {
        let mut nonzero = vec![false; self.nrels];
        for e in &self.elims {
            nonzero[e.row_id as usize] = true;
        }
        for &r in self.dense_rows.iter().take(self.dense.rank()) {
            nonzero[r as usize] = true;
        }
        (0..self.nrels)
            .filter(|&i| !nonzero[i])
            .map(|i| {
                let mut lam = vec![Int::ZERO; self.nrels];
                lam[i] = Int::ONE;
                for op in self.log.iter().rev() {
                    op.pull_back(&mut lam);
                }
                lam
            })
            .collect()
    }

    /// Replays the operation log on `m` and checks that it reaches the
    /// recorded final rows, that each step is unimodular and that `V` is
    /// inverse to `V^-1`.
    pub fn verify(&self, m: &SparseMatrix) -> Result<(), String> {
        if m.cols != self.ngens || m.nrows() != self.nrels {
            return Err("shape mismatch".into());
        }
        for op in &self.log {
            if !op.det().is_unit() {
                return Err(format!("non-unimodular row step {op:?}"));
            }
        }
        let mut rows = m.rows.clone();
        for op in &self.log {
            op.apply_sparse(&mut rows);
        }
        let mut expected: Vec<SparseRow> = vec![Vec::new(); self.nrels];
        for e in &self.elims {
            expected[e.row_id as usize] = e.row.clone();
        }
        for (i, &rid) in self.dense_rows.iter().enumerate() {
            if i >= self.dense.rank() {
                continue;
            }
            let d = &self.dense.diag[i];
            let mut r: SparseRow = self
                .res_cols
                .iter()
                .enumerate()
                .filter_map(|(a, &c)| {
                    let v = d * &self.dense.vinv[i][a];
                    (!v.is_zero()).then_some((c, v))
                })
                .collect();
            r.sort_by_key(|x| x.0);
            expected[rid as usize] = r;
        }
        if rows != expected {
            let bad = rows.iter().zip(&expected).position(|(a, b)| a != b).unwrap_or(0);
            return Err(format!("replayed row {bad} differs from the recorded form"));
        }
        // Eliminated columns must be absent from later pivots and the block.
        for (k, e) in self.elims.iter().enumerate() {
            if self.elims[k + 1..].iter().any(|f| row_get(&f.row, e.col).is_some()) {
                return Err(format!("column {} reappears after elimination", e.col));
            }
        }
        let n = self.res_cols.len();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Int::ZERO;
                for t in 0..n {
                    let a = &self.dense.v[i][t];
                    if !a.is_zero() {
                        acc += &(a * &self.dense.vinv[t][j]);
                    }
                }
                if acc != if i == j { Int::ONE } else { Int::ZERO } {
                    return Err("V * V^-1 != I".into());
                }
            }
        }
        for w in self.dense.diag.windows(2) {
            if !w[0].divides(&w[1]) {
                return Err("diagonal is not a divisor chain".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::matrix::IntMatrix;

    fn factors(m: &SparseMatrix, b: Backend) -> Vec<i64> {
        SmithData::compute_with(m, b)
            .factors()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn both_backends_agree_on_examples() {
        let cases: Vec<IntMatrix> = vec![
            IntMatrix::from_i64(&[&[2, 4], &[6, 8]]),
            IntMatrix::from_i64(&[&[0, 0], &[0, 0]]),
            IntMatrix::from_i64(&[&[1, 1, 0], &[0, 2, 2], &[2, 0, 4]]),
            IntMatrix::from_i64(&[&[3, 0, 0, 1], &[0, 6, 0, 0]]),
        ];
        for m in cases {
            let s = SparseMatrix::from_dense(&m);
            assert_eq!(factors(&s, Backend::Dense), factors(&s, Backend::Sparse));
        }
        let s = SparseMatrix::from_dense(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(factors(&s, Backend::Dense), vec![2, 4]);
    }

    #[test]
    fn coords_lift_and_solve() {
        let m = SparseMatrix::from_dense(&IntMatrix::from_i64(&[&[1, 2, 0, 0], &[0, 4, 0, 2], &[0, 0, 3, 0]]));
        for b in [Backend::Dense, Backend::Sparse] {
            let sd = SmithData::compute_with(&m, b);
            let k = sd.factors().len();
            for i in 0..k {
                let mut e = vec![Int::ZERO; k];
                e[i] = Int::ONE;
                assert_eq!(sd.coords(&sd.lift(i)), e);
            }
            let z = m.left_mul(&[Int::from(3), Int::from(-1), Int::from(2)]);
            assert!(sd.coords(&z).iter().all(|x| x.is_zero()));
            assert!(sd.solve(&m, &z).is_some());
            let mut w = vec![Int::ZERO; 4];
            w[3] = Int::ONE;
            assert!(sd.solve(&m, &w).is_none());
            for v in sd.left_kernel() {
                assert!(m.left_mul(&v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
