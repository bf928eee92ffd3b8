//! Smith and Hermite normal forms over arbitrary-precision integers.
//!
//! These are the integer-lattice engines behind dual lattices, finite
//! indices, discrete-part extraction and integral cohomology. All
//! arithmetic is exact; intermediate entry blowup is why everything is
//! `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Cofactor-free determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let pivot = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
                match pivot {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += q * row_k
    fn add_row_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        for c in 0..self.cols {
            let add = q * &self[(k, c)];
            self[(i, c)] += add;
        }
    }

    /// col_j += q * col_k
    fn add_col_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        for r in 0..self.rows {
            let add = q * &self[(r, k)];
            self[(r, j)] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of `smith_normal_form`: unimodular `u`, `v` with `u * m * v = d`,
/// `d` diagonal with non-negative entries satisfying d1 | d2 | ...
pub struct SmithDecomposition {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

impl SmithDecomposition {
    /// Diagonal entries up to min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of non-zero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors greater than one (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
    }
}

/// Smith normal form of an integer matrix of any shape. Total: never fails.
pub fn smith_normal_form(m: &IMat) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IMat::identity(m.rows);
    let mut v = IMat::identity(m.cols);
    let n = m.rows.min(m.cols);

    for t in 0..n {
        if !select_pivot(&mut d, &mut u, &mut v, t) {
            break;
        }
        // Clear row and column t; a reduction can reintroduce entries, so loop.
        loop {
            let mut dirty = false;
            for i in t + 1..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                dirty = true;
                let (q, r) = d[(i, t)].div_rem(&d[(t, t)]);
                d.add_row_mul(i, t, &-q.clone());
                u.add_row_mul(i, t, &-q);
                if !r.is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                }
            }
            for j in t + 1..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                dirty = true;
                let (q, r) = d[(t, j)].div_rem(&d[(t, t)]);
                d.add_col_mul(j, t, &-q.clone());
                v.add_col_mul(j, t, &-q);
                if !r.is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
            }
            if !dirty {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    enforce_divisibility(&mut d, &mut u, &mut v);
    SmithDecomposition { u, d, v }
}

fn select_pivot(d: &mut IMat, u: &mut IMat, v: &mut IMat, t: usize) -> bool {
    // Smallest non-zero entry keeps the reduction short.
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            if d[(i, j)].is_zero() {
                continue;
            }
            match &best {
                Some((bi, bj)) if d[(*bi, *bj)].abs() <= d[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    match best {
        Some((i, j)) => {
            d.swap_rows(t, i);
            u.swap_rows(t, i);
            d.swap_cols(t, j);
            v.swap_cols(t, j);
            true
        }
        None => false,
    }
}

fn enforce_divisibility(d: &mut IMat, u: &mut IMat, v: &mut IMat) {
    let n = d.rows.min(d.cols);
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = d[(i, i)].clone();
            let b = d[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                d.swap_rows(i, i + 1);
                u.swap_rows(i, i + 1);
                d.swap_cols(i, i + 1);
                v.swap_cols(i, i + 1);
                fixed = false;
                continue;
            }
            if a.is_zero() || b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            // Fold b into position (i, i) and re-diagonalize the 2x2 block.
            d.add_col_mul(i, i + 1, &BigInt::one());
            v.add_col_mul(i, i + 1, &BigInt::one());
            let g = a.gcd(&b);
            // One round of row/column gcd steps restores diagonality.
            while !d[(i + 1, i)].is_zero() || !d[(i, i + 1)].is_zero() || d[(i, i)].abs() != g {
                if !d[(i + 1, i)].is_zero() {
                    let (q, r) = d[(i + 1, i)].div_rem(&d[(i, i)]);
                    d.add_row_mul(i + 1, i, &-q.clone());
                    u.add_row_mul(i + 1, i, &-q);
                    if !r.is_zero() {
                        d.swap_rows(i, i + 1);
                        u.swap_rows(i, i + 1);
                    }
                } else if !d[(i, i + 1)].is_zero() {
                    let (q, r) = d[(i, i + 1)].div_rem(&d[(i, i)]);
                    d.add_col_mul(i + 1, i, &-q.clone());
                    v.add_col_mul(i + 1, i, &-q);
                    if !r.is_zero() {
                        d.swap_cols(i, i + 1);
                        v.swap_cols(i, i + 1);
                    }
                } else {
                    break;
                }
            }
            if d[(i, i)].is_negative() {
                d.negate_row(i);
                u.negate_row(i);
            }
            if d[(i + 1, i + 1)].is_negative() {
                d.negate_row(i + 1);
                u.negate_row(i + 1);
            }
            fixed = false;
        }
        if fixed {
            break;
        }
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `h = u * m`,
/// `u` unimodular and `h` in row echelon form with positive pivots and
/// reduced entries above each pivot. The non-zero rows of `h` are the
/// canonical basis of the row lattice of `m`.
pub fn hermite_normal_form(m: &IMat) -> (IMat, IMat) {
    let mut h = m.clone();
    let mut u = IMat::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        // Euclidean elimination below the pivot.
        loop {
            let mut min_row: Option<usize> = None;
            for i in pivot_row..h.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                match min_row {
                    Some(r) if h[(r, col)].abs() <= h[(i, col)].abs() => {}
                    _ => min_row = Some(i),
                }
            }
            let Some(r) = min_row else { break };
            h.swap_rows(pivot_row, r);
            u.swap_rows(pivot_row, r);
            let mut any = false;
            for i in pivot_row + 1..h.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = div_round(&h[(i, col)], &h[(pivot_row, col)]);
                h.add_row_mul(i, pivot_row, &-q.clone());
                u.add_row_mul(i, pivot_row, &-q);
                if !h[(i, col)].is_zero() {
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            if !q.is_zero() {
                h.add_row_mul(i, pivot_row, &-q.clone());
                u.add_row_mul(i, pivot_row, &-q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest-integer division keeps remainders small.
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Basis of the integer kernel `{x : m * x = 0}` as columns.
pub fn integer_kernel(m: &IMat) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols)
        .map(|j| (0..m.cols).map(|i| snf.v[(i, j)].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imat(rows: &[Vec<i64>]) -> IMat {
        IMat::from_rows(rows)
    }

    fn check_snf(m: &IMat) -> SmithDecomposition {
        let snf = smith_normal_form(m);
        assert!(snf.u.is_unimodular(), "u not unimodular");
        assert!(snf.v.is_unimodular(), "v not unimodular");
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v != d");
        let diag = snf.diagonal();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            for j in i + 1..diag.len() {
                if !diag[i].is_zero() {
                    assert!(
                        (&diag[j] % &diag[i]).is_zero(),
                        "divisibility chain broken: {:?}",
                        diag
                    );
                } else {
                    assert!(diag[j].is_zero(), "zero before non-zero in {:?}", diag);
                }
            }
        }
        // Off-diagonal must vanish.
        for i in 0..snf.d.rows {
            for j in 0..snf.d.cols {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        snf
    }

    #[test]
    fn snf_already_diagonal() {
        let snf = check_snf(&imat(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn snf_nilpotent() {
        // Hand row/column reduction: swap columns gives diag(1, 0).
        let snf = check_snf(&imat(&[vec![0, 1], vec![0, 0]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn snf_two_by_two() {
        // det = -2 and entry gcd 1, so invariant factors are 1, 2.
        let snf = check_snf(&imat(&[vec![1, 2], vec![3, 4]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn snf_rectangular() {
        let snf = check_snf(&imat(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        check_snf(&imat(&[vec![1, 0, 1], vec![0, 2, 2]]));
        check_snf(&imat(&[vec![3], vec![6], vec![9]]));
    }

    #[test]
    fn snf_random_matrices() {
        // Deterministic pseudo-random sweep over shapes up to 8x8.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..60 {
            let rows = 1 + (next() % 8) as usize;
            let cols = 1 + (next() % 8) as usize;
            let m = IMat::from_rows(
                &(0..rows)
                    .map(|_| (0..cols).map(|_| (next() % 19) as i64 - 9).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            );
            let _ = check_snf(&m);
            let _ = trial;
        }
    }

    #[test]
    fn hnf_is_row_lattice_basis() {
        // Row lattice {(x, y) : x = y mod 2}, canonical basis (1,1),(0,2).
        let m = imat(&[vec![2, 0], vec![1, 1], vec![3, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert!(u.is_unimodular());
        assert_eq!(u.mul(&m), h);
        assert_eq!(h[(0, 0)], BigInt::from(1));
        assert_eq!(h[(0, 1)], BigInt::from(1));
        assert_eq!(h[(1, 0)], BigInt::from(0));
        assert_eq!(h[(1, 1)], BigInt::from(2));
        assert!(h.row(2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let m = imat(&[vec![4, 1], vec![0, 3]]);
        let (h, _) = hermite_normal_form(&m);
        // Entry above the second pivot lies in [0, 3).
        assert!(h[(0, 1)] >= BigInt::zero() && h[(0, 1)] < BigInt::from(3));
    }

    #[test]
    fn kernel_of_projection() {
        let m = imat(&[vec![1, 0, 1]]);
        let ker = integer_kernel(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let img = m.mul_vec(v);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn determinant_matches_snf_product() {
        let m = imat(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(m.det(), BigInt::from(-2));
        let snf = check_snf(&m);
        let prod: BigInt = snf.diagonal().iter().product();
        assert_eq!(prod, BigInt::from(2));
    }
}
