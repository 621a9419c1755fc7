//! Dense integer matrices with Smith and Hermite normal forms.
//!
//! Entries are `i128`; every build profile of this workspace keeps
//! overflow checks on, so growth beyond that range panics instead of
//! wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows<T: Copy + Into<i128>>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v.into();
            }
        }
        m
    }

    /// Build with an explicit column count (useful for zero-row matrices).
    pub fn from_rows_with_cols(rows: &[Vec<i128>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0i128; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(self.row(i)) {
                    *o += c * x;
                }
            }
        }
        out
    }

    pub fn scaled(&self, k: i128) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == -self[(j, i)]))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
            }
            prev = a[(k, k)];
        }
        sign * a[(n - 1, n - 1)]
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// row_dst += k * row_src
    pub fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            let v = self[(src, c)];
            self[(dst, c)] += k * v;
        }
    }

    /// col_dst += k * col_src
    pub fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for r in 0..self.rows {
            let v = self[(r, src)];
            self[(r, dst)] += k * v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self[(i, c)] = -self[(i, c)];
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            self[(r, j)] = -self[(r, j)];
        }
    }

    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// Quotient of a by b rounded to the nearest integer, so the remainder
/// a - q*b has absolute value at most |b|/2.
pub fn round_div(a: i128, b: i128) -> i128 {
    let mut q = a.div_euclid(b);
    let r = a - q * b;
    if 2 * r > b.abs() {
        q += b.signum();
    }
    q
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Output of [`smith_normal_form`]: `d == u * m * v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn invariants(&self) -> Vec<i128> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = d[(i, j)].abs();
                if x != 0 && best.map_or(true, |(bi, bj)| x < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let p = d[(t, t)];
            let mut clean = true;
            for i in t + 1..r {
                let q = round_div(d[(i, t)], p);
                d.add_row(i, t, -q);
                u.add_row(i, t, -q);
                clean &= d[(i, t)] == 0;
            }
            for j in t + 1..c {
                let q = round_div(d[(t, j)], p);
                d.add_col(j, t, -q);
                v.add_col(j, t, -q);
                clean &= d[(t, j)] == 0;
            }
            if !clean {
                // bring the smallest leftover in row/column t to the pivot
                let mut bi = t;
                let mut bj = t;
                let mut bv = d[(t, t)].abs();
                for i in t + 1..r {
                    let x = d[(i, t)].abs();
                    if x != 0 && x < bv {
                        bv = x;
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..c {
                    let x = d[(t, j)].abs();
                    if x != 0 && x < bv {
                        bv = x;
                        bi = t;
                        bj = j;
                    }
                }
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| d[(i, j)] % p != 0);
            match bad {
                Some((i, _)) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { d, u, v }
}

/// Row-style Hermite normal form of the lattice spanned by `gens`
/// (rows). Zero rows are dropped; pivots are positive and entries above
/// each pivot are reduced into [0, pivot).
pub fn hermite_rows(gens: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
    for g in &a {
        assert_eq!(g.len(), ncols, "generator length mismatch");
    }
    let mut r = 0;
    for col in 0..ncols {
        if r >= a.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                let x = a[i][col].abs();
                if x != 0 && best.map_or(true, |b| x < a[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let p = a[r][col];
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][col] != 0 {
                    let q = round_div(a[i][col], p);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0].iter_mut().zip(&top[r]) {
                        *x -= q * y;
                    }
                    clean &= a[i][col] == 0;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let p = a[r][col];
        for i in 0..r {
            let q = a[i][col].div_euclid(p);
            if q != 0 {
                let (top, rest) = a.split_at_mut(r);
                for (x, y) in top[i].iter_mut().zip(&rest[0]) {
                    *x -= q * y;
                }
            }
        }
        r += 1;
        // drop rows that became zero
        a.retain(|row| row.iter().any(|&x| x != 0));
    }
    a.truncate(r);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        let inv = s.invariants();
        for w in inv.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain {inv:?}");
            } else if w[0] == 0 {
                assert_eq!(w[1], 0);
            }
        }
        assert!(inv.iter().all(|&x| x >= 0));
        s
    }

    #[test]
    fn smith_examples() {
        let s = check_smith(&IntMatrix::from_rows(&[vec![0i64, 1], vec![-1, 0]]));
        assert_eq!(s.invariants(), vec![1, 1]);
        let s = check_smith(&IntMatrix::from_rows(&[vec![0i64, 2], vec![-2, 0]]));
        assert_eq!(s.invariants(), vec![2, 2]);
        let s = check_smith(&IntMatrix::zeros(3, 2));
        assert!(s.d.is_zero());
        let s = check_smith(&IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]));
        assert_eq!(s.invariants(), vec![1, 6]);
        let s = check_smith(&IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.invariants(), vec![2, 6, 12]);
    }

    #[test]
    fn hermite_basics() {
        let h = hermite_rows(&[vec![2, 4], vec![3, 5], vec![0, 0]], 2);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        let h = hermite_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3);
        assert_eq!(h, vec![vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 2]]);
        assert!(hermite_rows(&[vec![0, 0]], 2).is_empty());
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(&[vec![2i64, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        assert_eq!(m.det(), 2 * (3 - 2) - 0 + 1 * (1 - 3));
        assert_eq!(IntMatrix::identity(4).det(), 1);
    }

    #[test]
    fn rounding_division() {
        assert_eq!(round_div(7, 3), 2);
        assert_eq!(round_div(8, 3), 3);
        assert_eq!(round_div(-8, 3), -3);
        assert_eq!(round_div(5, -2).abs() * 2 - 5 <= 2, true);
    }
}
