//! Dense integer matrices at rank ≤ 4 scale: exact determinants, Smith normal
//! form with transforms, and integer linear solving. Sizes here are tiny, so
//! the algorithms favor clarity and exactness over asymptotics.

use crate::arith::checked;
use crate::error::{Error, Result};
use crate::Int;
use serde::{Deserialize, Serialize};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Int>,
}

impl IMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix data length {} does not match {rows}×{cols}",
                data.len()
            )));
        }
        Ok(IMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(IMat { rows: r, cols: c, data: rows.concat() })
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> Result<IMat> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument("matrix dimension mismatch in mul".into()));
        }
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Int = 0;
                for k in 0..self.cols {
                    let t = checked(self[(i, k)].checked_mul(other[(k, j)]), "matrix mul")?;
                    acc = checked(acc.checked_add(t), "matrix mul")?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// self · v for a column vector v.
    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if self.cols != v.len() {
            return Err(Error::InvalidArgument("matrix–vector dimension mismatch".into()));
        }
        let mut out = vec![0; self.rows];
        for i in 0..self.rows {
            let mut acc: Int = 0;
            for k in 0..self.cols {
                let t = checked(self[(i, k)].checked_mul(v[k]), "matrix mul_vec")?;
                acc = checked(acc.checked_add(t), "matrix mul_vec")?;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m: Vec<Vec<Int>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign: Int = 1;
        let mut prev: Int = 1;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                    return Ok(0);
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let a = checked(m[i][j].checked_mul(m[k][k]), "det")?;
                    let b = checked(m[i][k].checked_mul(m[k][j]), "det")?;
                    let num = checked(a.checked_sub(b), "det")?;
                    m[i][j] = num / prev; // exact by Bareiss
                }
            }
            prev = m[k][k];
        }
        checked(m[n - 1][n - 1].checked_mul(sign), "det")
    }

    /// Columns j.. of `self` as a new matrix.
    pub fn columns(&self, js: std::ops::Range<usize>) -> IMat {
        let mut out = IMat::zeros(self.rows, js.len());
        for (jj, j) in js.enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    /// Column rank over ℚ.
    pub fn rank(&self) -> Result<usize> {
        Ok(smith(self)?.d.len())
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form U·M·V = diag(d) with U, V unimodular and d₁ | d₂ | …, dᵢ > 0.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero elementary divisors.
    pub d: Vec<Int>,
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
}

pub fn smith(m: &IMat) -> Result<SmithForm> {
    let rows = m.rows;
    let cols = m.cols;
    let mut w = m.clone();
    let mut u = IMat::identity(rows);
    let mut u_inv = IMat::identity(rows);
    let mut v = IMat::identity(cols);

    // Elementary row ops, mirrored into u (same op) and u_inv (inverse, as column op).
    fn row_swap(w: &mut IMat, u: &mut IMat, u_inv: &mut IMat, a: usize, b: usize) {
        for j in 0..w.cols {
            let t = w[(a, j)];
            w[(a, j)] = w[(b, j)];
            w[(b, j)] = t;
        }
        for j in 0..u.cols {
            let t = u[(a, j)];
            u[(a, j)] = u[(b, j)];
            u[(b, j)] = t;
        }
        for i in 0..u_inv.rows {
            let t = u_inv[(i, a)];
            u_inv[(i, a)] = u_inv[(i, b)];
            u_inv[(i, b)] = t;
        }
    }
    fn row_addmul(w: &mut IMat, u: &mut IMat, u_inv: &mut IMat, dst: usize, src: usize, q: Int) -> Result<()> {
        // row dst += q · row src;  u_inv col src -= q · col dst
        for j in 0..w.cols {
            let t = checked(w[(src, j)].checked_mul(q), "smith row op")?;
            w[(dst, j)] = checked(w[(dst, j)].checked_add(t), "smith row op")?;
        }
        for j in 0..u.cols {
            let t = checked(u[(src, j)].checked_mul(q), "smith row op")?;
            u[(dst, j)] = checked(u[(dst, j)].checked_add(t), "smith row op")?;
        }
        for i in 0..u_inv.rows {
            let t = checked(u_inv[(i, dst)].checked_mul(q), "smith row op")?;
            u_inv[(i, src)] = checked(u_inv[(i, src)].checked_sub(t), "smith row op")?;
        }
        Ok(())
    }
    fn col_swap(w: &mut IMat, v: &mut IMat, a: usize, b: usize) {
        for i in 0..w.rows {
            let t = w[(i, a)];
            w[(i, a)] = w[(i, b)];
            w[(i, b)] = t;
        }
        for i in 0..v.rows {
            let t = v[(i, a)];
            v[(i, a)] = v[(i, b)];
            v[(i, b)] = t;
        }
    }
    fn col_addmul(w: &mut IMat, v: &mut IMat, dst: usize, src: usize, q: Int) -> Result<()> {
        for i in 0..w.rows {
            let t = checked(w[(i, src)].checked_mul(q), "smith col op")?;
            w[(i, dst)] = checked(w[(i, dst)].checked_add(t), "smith col op")?;
        }
        for i in 0..v.rows {
            let t = checked(v[(i, src)].checked_mul(q), "smith col op")?;
            v[(i, dst)] = checked(v[(i, dst)].checked_add(t), "smith col op")?;
        }
        Ok(())
    }

    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // Pivot: smallest |entry| ≠ 0 in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w[(i, j)] != 0
                    && pivot.map_or(true, |(pi, pj)| w[(i, j)].abs() < w[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            row_swap(&mut w, &mut u, &mut u_inv, t, pi);
        }
        if pj != t {
            col_swap(&mut w, &mut v, t, pj);
        }

        // Clear row and column t; restart if a remainder undercuts the pivot.
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w[(i, t)] != 0 {
                    let q = w[(i, t)].div_euclid(w[(t, t)]);
                    row_addmul(&mut w, &mut u, &mut u_inv, i, t, -q)?;
                    if w[(i, t)] != 0 {
                        row_swap(&mut w, &mut u, &mut u_inv, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if w[(t, j)] != 0 {
                    let q = w[(t, j)].div_euclid(w[(t, t)]);
                    col_addmul(&mut w, &mut v, j, t, -q)?;
                    if w[(t, j)] != 0 {
                        col_swap(&mut w, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: fold any non-divisible entry into row t and retry.
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if w[(i, j)] % w[(t, t)] != 0 {
                    row_addmul(&mut w, &mut u, &mut u_inv, t, i, 1)?;
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue; // re-run step t with the enlarged row
        }
        if w[(t, t)] < 0 {
            for j in 0..cols {
                w[(t, j)] = -w[(t, j)];
            }
            for j in 0..u.cols {
                u[(t, j)] = -u[(t, j)];
            }
            for i in 0..u_inv.rows {
                u_inv[(i, t)] = -u_inv[(i, t)];
            }
        }
        t += 1;
    }

    let d: Vec<Int> = (0..t).map(|i| w[(i, i)]).collect();
    debug_assert!(d.windows(2).all(|p| p[1] % p[0] == 0));
    Ok(SmithForm { d, u, u_inv, v })
}

/// All integer solutions of A·x = b: a particular solution plus a basis of the
/// kernel lattice (as columns). Returns `None` when no integer solution exists.
pub fn solve_linear(a: &IMat, b: &[Int]) -> Result<Option<(Vec<Int>, IMat)>> {
    if b.len() != a.rows {
        return Err(Error::InvalidArgument("rhs length mismatch".into()));
    }
    let s = smith(a)?;
    let r = s.d.len();
    let c = s.u.mul_vec(b)?;
    let mut y = vec![0; a.cols];
    for i in 0..a.rows {
        if i < r {
            if c[i] % s.d[i] != 0 {
                return Ok(None);
            }
            if i < a.cols {
                y[i] = c[i] / s.d[i];
            }
        } else if c[i] != 0 {
            return Ok(None);
        }
    }
    let particular = s.v.mul_vec(&y)?;
    let kernel = s.v.columns(r..a.cols);
    Ok(Some((particular, kernel)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &IMat) {
        let s = smith(m).unwrap();
        // U·M·V is the diagonal of elementary divisors.
        let d = s.u.mul(m).unwrap().mul(&s.v).unwrap();
        for i in 0..d.rows {
            for j in 0..d.cols {
                let want = if i == j && i < s.d.len() { s.d[i] } else { 0 };
                assert_eq!(d[(i, j)], want, "at ({i},{j}) of {m:?}");
            }
        }
        for w in s.d.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain");
        }
        assert!(s.d.iter().all(|&x| x > 0));
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IMat::identity(m.rows));
        assert_eq!(s.u.det().unwrap().abs(), 1);
        assert_eq!(s.v.det().unwrap().abs(), 1);
    }

    #[test]
    fn smith_small_cases() {
        check_smith(&IMat::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap());
        check_smith(&IMat::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap());
        check_smith(&IMat::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]).unwrap());
        check_smith(&IMat::from_rows(&[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap());
        check_smith(&IMat::from_rows(&[vec![6]]).unwrap());
    }

    #[test]
    fn smith_pseudorandom_cases() {
        // Small LCG over a fixed seed: deterministic, no dependencies.
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i128 - 9
        };
        for rows in 1..=4 {
            for cols in 1..=4 {
                for _ in 0..60 {
                    let data: Vec<i128> = (0..rows * cols).map(|_| next()).collect();
                    check_smith(&IMat::new(rows, cols, data).unwrap());
                }
            }
        }
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        fn det_naive(m: &IMat) -> i128 {
            let n = m.rows;
            if n == 1 {
                return m[(0, 0)];
            }
            let mut acc = 0;
            for j in 0..n {
                let mut sub = Vec::new();
                for i in 1..n {
                    let mut row = Vec::new();
                    for k in 0..n {
                        if k != j {
                            row.push(m[(i, k)]);
                        }
                    }
                    sub.push(row);
                }
                let s = det_naive(&IMat::from_rows(&sub).unwrap());
                let term = m[(0, j)] * s;
                acc += if j % 2 == 0 { term } else { -term };
            }
            acc
        }
        let mut state: u64 = 42;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 15) as i128 - 7
        };
        for n in 1..=4 {
            for _ in 0..100 {
                let m = IMat::new(n, n, (0..n * n).map(|_| next()).collect()).unwrap();
                assert_eq!(m.det().unwrap(), det_naive(&m), "{m:?}");
            }
        }
    }

    #[test]
    fn solve_linear_roundtrip() {
        let a = IMat::from_rows(&[vec![2, 4, 6], vec![1, 2, 3]]).unwrap();
        let (x, kernel) = solve_linear(&a, &[4, 2]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![4, 2]);
        // Kernel columns really are solutions of the homogeneous system.
        for j in 0..kernel.cols {
            let k = kernel.col(j);
            assert_eq!(a.mul_vec(&k).unwrap(), vec![0, 0]);
        }
        assert_eq!(kernel.cols, 2);
        // No integer solution: 2x = 1.
        let a2 = IMat::from_rows(&[vec![2]]).unwrap();
        assert!(solve_linear(&a2, &[1]).unwrap().is_none());
    }
}
