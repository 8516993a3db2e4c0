//! Dense Smith normal form with logged row operations.
//!
//! Row operations are recorded as a log of elementary unimodular steps rather
//! than as an explicit `U` matrix, so tall relation matrices do not need a
//! `rows x rows` transform. Column operations are accumulated into `V` and
//! `V^-1` explicitly.

use crate::int::Int;

use super::matrix::{IntMatrix, SparseRow};

/// An elementary unimodular row operation on a matrix whose rows are indexed
/// by `u32` ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOp {
    Swap(u32, u32),
    Neg(u32),
    /// `row[dst] += m * row[src]`
    AddMul {
        dst: u32,
        src: u32,
        m: Int,
    },
    /// `(row[k], row[j]) <- (a*row[k] + b*row[j], c*row[k] + d*row[j])` with `ad - bc = 1`.
    Mix {
        k: u32,
        j: u32,
        a: Int,
        b: Int,
        c: Int,
        d: Int,
    },
}

impl RowOp {
    /// Determinant of the 2x2 block this operation acts by.
    pub fn det(&self) -> Int {
        match self {
            RowOp::Swap(..) | RowOp::Neg(_) => Int::from(-1),
            RowOp::AddMul { .. } => Int::ONE,
            RowOp::Mix { a, b, c, d, .. } => &(a * d) - &(b * c),
        }
    }

    pub fn remap(&self, f: impl Fn(u32) -> u32) -> RowOp {
        match self {
            RowOp::Swap(i, j) => RowOp::Swap(f(*i), f(*j)),
            RowOp::Neg(i) => RowOp::Neg(f(*i)),
            RowOp::AddMul { dst, src, m } => RowOp::AddMul {
                dst: f(*dst),
                src: f(*src),
                m: m.clone(),
            },
            RowOp::Mix { k, j, a, b, c, d } => RowOp::Mix {
                k: f(*k),
                j: f(*j),
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                d: d.clone(),
            },
        }
    }

    /// Transforms a coefficient vector on the new rows into the equivalent
    /// coefficient vector on the rows before this operation (`lambda * E`).
    pub fn pull_back(&self, lam: &mut [Int]) {
        match self {
            RowOp::Swap(i, j) => lam.swap(*i as usize, *j as usize),
            RowOp::Neg(i) => {
                let v = -&lam[*i as usize];
                lam[*i as usize] = v;
            }
            RowOp::AddMul { dst, src, m } => {
                let add = m * &lam[*dst as usize];
                lam[*src as usize] += &add;
            }
            RowOp::Mix { k, j, a, b, c, d } => {
                let (lk, lj) = (lam[*k as usize].clone(), lam[*j as usize].clone());
                lam[*k as usize] = &(&lk * a) + &(&lj * c);
                lam[*j as usize] = &(&lk * b) + &(&lj * d);
            }
        }
    }

    /// Applies the operation to sparse rows.
    pub fn apply_sparse(&self, rows: &mut [SparseRow]) {
        use super::matrix::{row_axpy, row_lincomb};
        match self {
            RowOp::Swap(i, j) => rows.swap(*i as usize, *j as usize),
            RowOp::Neg(i) => {
                for e in rows[*i as usize].iter_mut() {
                    e.1 = -&e.1;
                }
            }
            RowOp::AddMul { dst, src, m } => {
                let r = row_axpy(&rows[*dst as usize], m, &rows[*src as usize]);
                rows[*dst as usize] = r;
            }
            RowOp::Mix { k, j, a, b, c, d } => {
                let (rk, rj) = (&rows[*k as usize], &rows[*j as usize]);
                let nk = row_lincomb(a, rk, b, rj);
                let nj = row_lincomb(c, rk, d, rj);
                rows[*k as usize] = nk;
                rows[*j as usize] = nj;
            }
        }
    }

    /// Applies the operation to dense rows.
    pub fn apply_dense(&self, rows: &mut [Vec<Int>]) {
        match self {
            RowOp::Swap(i, j) => rows.swap(*i as usize, *j as usize),
            RowOp::Neg(i) => {
                for e in rows[*i as usize].iter_mut() {
                    *e = -&*e;
                }
            }
            RowOp::AddMul { dst, src, m } => {
                let (d, s) = (*dst as usize, *src as usize);
                for c in 0..rows[d].len() {
                    if !rows[s][c].is_zero() {
                        let add = m * &rows[s][c];
                        rows[d][c] += &add;
                    }
                }
            }
            RowOp::Mix { k, j, a, b, c, d } => {
                let (k, j) = (*k as usize, *j as usize);
                for col in 0..rows[k].len() {
                    let (x, y) = (rows[k][col].clone(), rows[j][col].clone());
                    rows[k][col] = &(a * &x) + &(b * &y);
                    rows[j][col] = &(c * &x) + &(d * &y);
                }
            }
        }
    }
}

/// Result of the dense reduction `U * A * V = diag(d_1, .., d_r, 0, ..)`.
#[derive(Clone, Debug)]
pub struct DenseSnf {
    pub rows: usize,
    pub cols: usize,
    /// Positive diagonal entries with `d_i | d_{i+1}`.
    pub diag: Vec<Int>,
    pub v: Vec<Vec<Int>>,
    pub vinv: Vec<Vec<Int>>,
    /// Row operations in local row indices; `U` is their product.
    pub ops: Vec<RowOp>,
}

impl DenseSnf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            let mut r = vec![Int::ZERO; n];
            r[i] = Int::ONE;
            r
        })
        .collect()
}

struct Reducer {
    a: Vec<Vec<Int>>,
    cols: usize,
    v: Vec<Vec<Int>>,
    vinv: Vec<Vec<Int>>,
    ops: Vec<RowOp>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.ops.push(RowOp::Swap(i as u32, j as u32));
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize, from_row: usize) {
        if i == j {
            return;
        }
        for r in &mut self.a[from_row..] {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
        self.vinv.swap(i, j);
    }

    /// `row[dst] += m * row[src]`, touching columns from `from_col` on.
    fn add_row(&mut self, dst: usize, src: usize, m: Int, from_col: usize) {
        for c in from_col..self.cols {
            if !self.a[src][c].is_zero() {
                let add = &m * &self.a[src][c];
                self.a[dst][c] += &add;
            }
        }
        self.ops.push(RowOp::AddMul {
            dst: dst as u32,
            src: src as u32,
            m,
        });
    }

    /// `col[dst] += m * col[src]`, touching rows from `from_row` on.
    fn add_col(&mut self, dst: usize, src: usize, m: &Int, from_row: usize) {
        for r in &mut self.a[from_row..] {
            if !r[src].is_zero() {
                let add = m * &r[src];
                r[dst] += &add;
            }
        }
        for r in &mut self.v {
            if !r[src].is_zero() {
                let add = m * &r[src];
                r[dst] += &add;
            }
        }
        // V^-1 changes by the inverse operation on rows: row[src] -= m * row[dst].
        let neg = -m;
        for c in 0..self.cols {
            if !self.vinv[dst][c].is_zero() {
                let add = &neg * &self.vinv[dst][c];
                self.vinv[src][c] += &add;
            }
        }
    }

    /// Least nonzero |entry| in the trailing submatrix, ties by (row, col).
    fn least_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.len() {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.cmp_abs(&self.a[bi][bj]) == std::cmp::Ordering::Less,
                };
                if better {
                    best = Some((i, j));
                    if x.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Least nonzero |entry| in row t / column t beyond the corner.
    fn least_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let x = &self.a[i][j];
            if x.is_zero() {
                return;
            }
            let better = match *best {
                None => true,
                Some((bi, bj)) => x.cmp_abs(&self.a[bi][bj]) == std::cmp::Ordering::Less,
            };
            if better {
                *best = Some((i, j));
            }
        };
        for j in t..self.cols {
            consider(t, j, &mut best);
        }
        for i in t + 1..self.a.len() {
            consider(i, t, &mut best);
        }
        best
    }

    fn move_to_corner(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j, t);
    }
}

/// Reduces `a` (rows of length `cols`) to Smith form.
pub fn dense_snf(a: Vec<Vec<Int>>, cols: usize) -> DenseSnf {
    let m = a.len();
    let mut r = Reducer {
        a,
        cols,
        v: identity_rows(cols),
        vinv: identity_rows(cols),
        ops: Vec::new(),
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m && t < cols {
        let Some(pos) = r.least_entry(t) else { break };
        r.move_to_corner(t, pos);
        loop {
            let p = r.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if r.a[i][t].is_zero() {
                    continue;
                }
                let (q, rem) = r.a[i][t].div_mod_floor(&p);
                if !q.is_zero() {
                    r.add_row(i, t, -q, t);
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if r.a[t][j].is_zero() {
                    continue;
                }
                let (q, rem) = r.a[t][j].div_mod_floor(&p);
                if !q.is_zero() {
                    r.add_col(j, t, &-q, t);
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let pos = r
                    .least_in_cross(t)
                    .expect("pivot cross cannot vanish while a remainder is nonzero");
                r.move_to_corner(t, pos);
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let bad = (t + 1..m).find(|&i| r.a[i][t + 1..].iter().any(|x| !p.divides(x)));
            match bad {
                Some(i) => r.add_row(t, i, Int::ONE, t),
                None => break,
            }
        }
        if r.a[t][t].is_negative() {
            for c in t..cols {
                let v = -&r.a[t][c];
                r.a[t][c] = v;
            }
            r.ops.push(RowOp::Neg(t as u32));
        }
        diag.push(r.a[t][t].clone());
        t += 1;
    }
    DenseSnf {
        rows: m,
        cols,
        diag,
        v: r.v,
        vinv: r.vinv,
        ops: r.ops,
    }
}

/// Explicit Smith form `U * M * V = S` of a dense matrix.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Computes the Smith normal form of `m` with explicit transforms, then
/// checks the result.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let red = dense_snf(m.to_rows(), m.cols);
    let mut u = identity_rows(m.rows);
    for op in &red.ops {
        op.apply_dense(&mut u);
    }
    let mut s = IntMatrix::zeros(m.rows, m.cols);
    for (i, d) in red.diag.iter().enumerate() {
        s.set(i, i, d.clone());
    }
    let out = Snf {
        s,
        u: IntMatrix::from_rows(m.rows, u),
        v: IntMatrix::from_rows(m.cols, red.v),
    };
    if let Err(e) = out.verify(m) {
        panic!("Smith normal form self-check failed: {e}");
    }
    out
}

impl Snf {
    /// Checks `U * M * V = S`, diagonal shape with `d_i | d_{i+1}` and
    /// `|det U| = |det V| = 1`.
    pub fn verify(&self, m: &IntMatrix) -> Result<(), String> {
        if self.u.mul(m).mul(&self.v) != self.s {
            return Err("U*M*V != S".into());
        }
        let n = self.s.rows.min(self.s.cols);
        for i in 0..self.s.rows {
            for j in 0..self.s.cols {
                if i != j && !self.s.get(i, j).is_zero() {
                    return Err(format!("S has off-diagonal entry at ({i},{j})"));
                }
            }
        }
        for i in 0..n {
            if self.s.get(i, i).is_negative() {
                return Err(format!("negative diagonal entry at {i}"));
            }
            if i + 1 < n && !self.s.get(i, i).divides(self.s.get(i + 1, i + 1)) {
                return Err(format!("divisibility fails at {i}"));
            }
        }
        if !self.u.determinant().is_unit() {
            return Err("U is not unimodular".into());
        }
        if !self.v.determinant().is_unit() {
            return Err("V is not unimodular".into());
        }
        Ok(())
    }

    /// Nonzero diagonal entries.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(rows: &[&[i64]]) -> Vec<i64> {
        let m = IntMatrix::from_i64(rows);
        smith_normal_form(&m)
            .diagonal()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(diag_of(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
        assert_eq!(diag_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(diag_of(&[&[2, 4], &[6, 8]]), vec![2, 4]);
        assert_eq!(diag_of(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(diag_of(&[&[4, 6, 0], &[0, 10, 15]]), vec![1, 10]);
    }

    #[test]
    fn handles_big_entries() {
        let big = Int::from(i64::MAX);
        let m = IntMatrix::from_rows(
            2,
            vec![vec![big.clone(), Int::from(3)], vec![Int::from(5), &big * &big]],
        );
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m).is_ok());
    }

    #[test]
    fn pull_back_inverts_ops() {
        let rows0 = vec![vec![Int::from(1), Int::from(2)], vec![Int::from(3), Int::from(4)]];
        let ops = vec![
            RowOp::AddMul {
                dst: 0,
                src: 1,
                m: Int::from(-2),
            },
            RowOp::Mix {
                k: 0,
                j: 1,
                a: Int::from(2),
                b: Int::from(1),
                c: Int::from(1),
                d: Int::from(1),
            },
            RowOp::Swap(0, 1),
            RowOp::Neg(1),
        ];
        let mut rows = rows0.clone();
        for op in &ops {
            op.apply_dense(&mut rows);
        }
        let lam = vec![Int::from(5), Int::from(-7)];
        let target: Vec<Int> = (0..2)
            .map(|c| &(&lam[0] * &rows[0][c]) + &(&lam[1] * &rows[1][c]))
            .collect();
        let mut back = lam.clone();
        for op in ops.iter().rev() {
            op.pull_back(&mut back);
        }
        let again: Vec<Int> = (0..2)
            .map(|c| &(&back[0] * &rows0[0][c]) + &(&back[1] * &rows0[1][c]))
            .collect();
        assert_eq!(target, again);
    }
}
