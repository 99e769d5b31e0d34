//! Dense integer matrices with Smith and Hermite normal forms.
//!
//! Entries are `i64`; every operation is overflow-checked and panics on
//! overflow rather than wrapping. The matrices met in this crate have
//! entries of a few digits.

use std::fmt;

#[inline]
fn ck(x: Option<i64>) -> i64 {
    x.expect("integer overflow in lattice arithmetic")
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds from row vectors; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            m.data[r * cols..(r + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] = ck(out[(r, c)].checked_add(ck(a.checked_mul(rhs[(k, c)]))));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            let v = ck(self[(src, c)].checked_mul(k));
            self[(dst, c)] = ck(self[(dst, c)].checked_add(v));
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for r in 0..self.rows {
            let v = ck(self[(r, src)].checked_mul(k));
            self[(r, dst)] = ck(self[(r, dst)].checked_add(v));
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self[(r, c)] = ck(self[(r, c)].checked_neg());
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter()
        .zip(b)
        .fold(0i64, |acc, (&x, &y)| ck(acc.checked_add(ck(x.checked_mul(y)))))
}

/// U·A·V = D with U, V unimodular and D diagonal, d₁ | d₂ | … , dᵢ > 0.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// The nonzero diagonal entries.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[(i, i)]).collect()
    }
}

fn smith_core(a: &IntMatrix, mut u: Option<&mut IntMatrix>, mut v: Option<&mut IntMatrix>) -> (IntMatrix, usize) {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize, i64)> = None;
            for r in t..m {
                for c in t..n {
                    let x = d[(r, c)].abs();
                    if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                        best = Some((r, c, x));
                    }
                }
            }
            let Some((pr, pc, _)) = best else {
                return (d, rank);
            };
            d.swap_rows(t, pr);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(t, pr);
            }
            d.swap_cols(t, pc);
            if let Some(v) = v.as_deref_mut() {
                v.swap_cols(t, pc);
            }
            let p = d[(t, t)];
            let mut clean = true;
            for r in t + 1..m {
                let q = d[(r, t)] / p;
                d.add_row(r, t, -q);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row(r, t, -q);
                }
                clean &= d[(r, t)] == 0;
            }
            for c in t + 1..n {
                let q = d[(t, c)] / p;
                d.add_col(c, t, -q);
                if let Some(v) = v.as_deref_mut() {
                    v.add_col(c, t, -q);
                }
                clean &= d[(t, c)] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&r| (t + 1..n).any(|c| d[(r, c)] % p != 0));
            if let Some(r) = bad {
                d.add_row(t, r, 1);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row(t, r, 1);
                }
                continue;
            }
            break;
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(t);
            }
        }
        rank += 1;
    }
    (d, rank)
}

pub fn smith(a: &IntMatrix) -> Smith {
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let (d, rank) = smith_core(a, Some(&mut u), Some(&mut v));
    Smith { u, d, v, rank }
}

/// Invariant factors only; skips the transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<i64> {
    let (d, rank) = smith_core(a, None, None);
    (0..rank).map(|i| d[(i, i)]).collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_core(a, None, None).1
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `a`:
/// echelon, pivots positive, entries above each pivot in [0, pivot), zero
/// rows dropped. Equal lattices give equal results.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| h[(i, c)] != 0).min_by_key(|&i| h[(i, c)].abs());
            let Some(piv) = piv else { break };
            h.swap_rows(r, piv);
            let mut done = true;
            for i in r + 1..m {
                let q = h[(i, c)].div_euclid(h[(r, c)]);
                h.add_row(i, r, -q);
                done &= h[(i, c)] == 0;
            }
            if done {
                break;
            }
        }
        if h[(r, c)] == 0 {
            continue;
        }
        if h[(r, c)] < 0 {
            h.negate_row(r);
        }
        let p = h[(r, c)];
        for i in 0..r {
            let q = h[(i, c)].div_euclid(p);
            h.add_row(i, r, -q);
        }
        r += 1;
    }
    IntMatrix::from_rows(&h.to_rows()[..r], n)
}

/// Rows form a basis of {x ∈ ℤⁿ : A x = 0}, in Hermite normal form.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let rows: Vec<Vec<i64>> = (s.rank..a.cols).map(|c| s.v.column(c)).collect();
    hnf(&IntMatrix::from_rows(&rows, a.cols))
}

/// Some integer solution of A x = b, or `None` if there is none.
pub fn solve(a: &IntMatrix, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(a.rows, b.len(), "dimension mismatch");
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![0; a.cols];
    for (i, &bi) in ub.iter().enumerate() {
        if i < s.rank {
            let di = s.d[(i, i)];
            if bi % di != 0 {
                return None;
            }
            y[i] = bi / di;
        } else if bi != 0 {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Determinant of a square matrix by fraction-free elimination (Bareiss).
pub fn det(a: &IntMatrix) -> i64 {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    let mut m: Vec<Vec<i128>> = a.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    let d = if n == 0 { 1 } else { sign * m[n - 1][n - 1] };
    i64::try_from(d).expect("determinant overflows i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols)
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel spanned by (2, -1), not (4, -2).
        let k = kernel(&mat(&[&[2, 4]]));
        assert_eq!(k.to_rows(), vec![vec![2, -1]]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = mat(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve(&a, &[4, 9]), Some(vec![2, 3]));
        assert_eq!(solve(&a, &[1, 0]), None);
    }

    #[test]
    fn hnf_is_canonical() {
        let a = mat(&[&[1, 2, 3], &[4, 5, 6]]);
        let b = mat(&[&[5, 7, 9], &[-1, -2, -3]]);
        assert_eq!(hnf(&a), hnf(&b));
        assert_eq!(hnf(&a).to_rows(), vec![vec![1, 2, 3], vec![0, 3, 6]]);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&mat(&[&[0, 1], &[-1, 0]])), 1);
        assert_eq!(det(&mat(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]])), 1);
        assert_eq!(det(&mat(&[&[2, 3], &[4, 6]])), 0);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(m, n)| {
            proptest::collection::vec(-4i64..=4, m * n)
                .prop_map(move |d| IntMatrix { rows: m, cols: n, data: d })
        })
    }

    proptest! {
        #[test]
        fn smith_decomposition_holds(a in small_matrix()) {
            let s = smith(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert_eq!(det(&s.u).abs(), 1);
            prop_assert_eq!(det(&s.v).abs(), 1);
            let diag = s.diagonal();
            for w in diag.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert_eq!(invariant_factors(&a), diag);
        }

        #[test]
        fn kernel_rows_are_annihilated(a in small_matrix()) {
            let k = kernel(&a);
            prop_assert_eq!(k.rows(), a.cols() - rank(&a));
            for r in 0..k.rows() {
                prop_assert!(a.mul_vec(k.row(r)).iter().all(|&x| x == 0));
            }
            // Saturation: the kernel basis has trivial invariant factors.
            prop_assert!(invariant_factors(&k).iter().all(|&d| d == 1));
        }

        #[test]
        fn solve_recovers_image(a in small_matrix(), seed in proptest::collection::vec(-3i64..=3, 6)) {
            let x: Vec<i64> = seed[..a.cols()].to_vec();
            let b = a.mul_vec(&x);
            let y = solve(&a, &b).expect("b is in the image");
            prop_assert_eq!(a.mul_vec(&y), b);
        }

        #[test]
        fn hnf_spans_same_lattice(a in small_matrix()) {
            let h = hnf(&a);
            prop_assert_eq!(h.rows(), rank(&a));
            // Each row of a is an integer combination of rows of h and vice versa.
            for r in 0..a.rows() {
                prop_assert!(solve(&h.transpose(), a.row(r)).is_some());
            }
            for r in 0..h.rows() {
                prop_assert!(solve(&a.transpose(), h.row(r)).is_some());
            }
            prop_assert_eq!(hnf(&h), h);
        }
    }
}
