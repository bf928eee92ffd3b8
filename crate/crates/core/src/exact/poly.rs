//! Multivariate polynomials over the rationals, with fraction-free
//! elimination for rank and kernel computations.
//!
//! Matrices whose entries are linear forms in the period symbols are the
//! bridge between exact symbol coordinates and real geometry: treating
//! the irrational symbols as independent indeterminates, the rank of such
//! a matrix over the rational-function field equals the real rank at the
//! actual symbol values, and its kernel carries the real linear relations
//! among generators. All verdicts built on top of this carry the symbol
//! independence assumption.

use super::qmat::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Monomial exponent vector (one slot per symbol variable).
pub type Expt = Vec<u32>;

/// Sparse polynomial in `nvars` variables over `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    /// monomial -> coefficient; zero coefficients never stored
    pub terms: BTreeMap<Expt, Rat>,
}

impl std::fmt::Debug for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|&(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("s{}", i) } else { format!("s{}^{}", i, p) })
                .collect();
            if vars.is_empty() {
                parts.push(format!("{}", c));
            } else {
                parts.push(format!("{}*{}", c, vars.join("*")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    /// The monomial `c * x_i`.
    pub fn linear(nvars: usize, i: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.terms.insert(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expt = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                *out.terms.entry(e).or_insert_with(Rat::zero) += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Leading term under the BTreeMap (lexicographic) order.
    fn leading(&self) -> Option<(&Expt, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact division: panics if `divisor` does not divide `self`.
    /// Only called in Bareiss elimination where exactness is guaranteed.
    pub fn div_exact(&self, divisor: &MPoly) -> MPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        let (de, dc) = {
            let (e, c) = divisor.leading().unwrap();
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.leading().unwrap();
                (e.clone(), c.clone())
            };
            let qe: Expt = re
                .iter()
                .zip(&de)
                .map(|(a, b)| a.checked_sub(*b).expect("non-exact polynomial division"))
                .collect();
            let qc = rc / &dc;
            let mono = MPoly { nvars: self.nvars, terms: BTreeMap::from([(qe, qc)]) };
            rem = rem.sub(&mono.mul(divisor));
            quot = quot.add(&mono);
        }
        quot
    }

    /// Evaluate at rational points (used in tests to validate kernels).
    pub fn eval(&self, xs: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term *= &xs[i];
                }
            }
            acc += term;
        }
        acc
    }
}

/// Matrix with polynomial entries.
#[derive(Clone, Debug)]
pub struct PMat {
    pub rows: usize,
    pub cols: usize,
    pub nvars: usize,
    data: Vec<MPoly>,
}

impl PMat {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PMat { rows, cols, nvars, data: vec![MPoly::zero(nvars); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MPoly) {
        self.data[i * self.cols + j] = p;
    }

    /// Fraction-free (Bareiss) echelon reduction over the rational
    /// function field. Returns `(rank, pivot_cols, pivot_rows)`.
    pub fn bareiss_rank(&self) -> (usize, Vec<usize>, Vec<usize>) {
        let mut a = self.clone();
        let mut prev = MPoly::one(self.nvars);
        let mut pivot_cols = Vec::new();
        let mut row_perm: Vec<usize> = (0..self.rows).collect();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    let tmp = a.get(r, j).clone();
                    a.set(r, j, a.get(p, j).clone());
                    a.set(p, j, tmp);
                }
                row_perm.swap(r, p);
            }
            for i in r + 1..self.rows {
                for j in (c + 1)..self.cols {
                    let num = a.get(r, c).mul(a.get(i, j)).sub(&a.get(i, c).mul(a.get(r, j)));
                    a.set(i, j, num.div_exact(&prev));
                }
                a.set(i, c, MPoly::zero(self.nvars));
            }
            prev = a.get(r, c).clone();
            pivot_cols.push(c);
            r += 1;
        }
        let pivot_rows = row_perm[..r].to_vec();
        (r, pivot_cols, pivot_rows)
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> MPoly {
        // Bareiss determinant of the selected square submatrix.
        let n = rows.len();
        assert_eq!(n, cols.len());
        if n == 0 {
            return MPoly::one(self.nvars);
        }
        let mut a = PMat::zeros(n, n, self.nvars);
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                a.set(i, j, self.get(ri, cj).clone());
            }
        }
        let mut prev = MPoly::one(self.nvars);
        let mut sign = false;
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return MPoly::zero(self.nvars);
                };
                for j in 0..n {
                    let tmp = a.get(k, j).clone();
                    a.set(k, j, a.get(p, j).clone());
                    a.set(p, j, tmp);
                }
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(k, k).mul(a.get(i, j)).sub(&a.get(i, k).mul(a.get(k, j)));
                    a.set(i, j, num.div_exact(&prev));
                }
                a.set(i, k, MPoly::zero(self.nvars));
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign { d.neg() } else { d }
    }

    /// Kernel basis over the rational function field, by Cramer solves on
    /// a maximal non-singular minor. Entries are polynomials (a common
    /// denominator is dropped, which is harmless for a kernel).
    pub fn kernel_basis(&self) -> Vec<Vec<MPoly>> {
        let (rank, pivot_cols, pivot_rows) = self.bareiss_rank();
        let pivot_set: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
        let det = self.minor(&pivot_rows, &pivot_cols);
        assert!(rank == 0 || !det.is_zero());
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            // Solve M[pr, pc] x = -M[pr, free] by Cramer's rule, then the
            // kernel vector is (x, det) in the (pivot, free) slots.
            let mut v = vec![MPoly::zero(self.nvars); self.cols];
            v[free] = det.clone();
            for (slot, _) in pivot_cols.iter().enumerate() {
                let mut cols_mod = pivot_cols.clone();
                cols_mod[slot] = free;
                let d = self.minor(&pivot_rows, &cols_mod);
                v[pivot_cols[slot]] = d.neg();
            }
            basis.push(v);
        }
        basis
    }
}

/// Linear constraints `sum_i eta_i * kernel_vec[i] = 0` expanded monomial
/// by monomial, as rational rows over the eta unknowns.
pub fn kernel_orthogonality_rows(kernel: &[Vec<MPoly>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut rows = Vec::new();
    for kv in kernel {
        let mut monomials: std::collections::BTreeSet<Expt> = std::collections::BTreeSet::new();
        for p in kv {
            monomials.extend(p.terms.keys().cloned());
        }
        for mono in monomials {
            let row: Vec<Rat> = (0..ncols)
                .map(|i| kv[i].terms.get(&mono).cloned().unwrap_or_else(Rat::zero))
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qmat::rat_int;

    fn s(i: usize) -> MPoly {
        MPoly::linear(2, i, rat_int(1))
    }

    fn c(v: i64) -> MPoly {
        MPoly::constant(2, rat_int(v))
    }

    #[test]
    fn arithmetic_basics() {
        let p = s(0).mul(&s(0)).sub(&c(2)); // s0^2 - 2
        let q = s(0).sub(&c(1));
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&q), p);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn rank_detects_real_relations() {
        // [1, s0] has rank 1: the row is a single line in R^2.
        let mut m = PMat::zeros(1, 2, 2);
        m.set(0, 0, c(1));
        m.set(0, 1, s(0));
        let (rank, _, _) = m.bareiss_rank();
        assert_eq!(rank, 1);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        // kernel vector proportional to (-s0, 1)
        let kv = &ker[0];
        let check = c(1).mul(&kv[0]).add(&s(0).mul(&kv[1]));
        assert!(check.is_zero());
    }

    #[test]
    fn rank_full_for_generic_offdiagonal() {
        // [[1, s0], [s0, s1]] has determinant s1 - s0^2 != 0 formally.
        let mut m = PMat::zeros(2, 2, 2);
        m.set(0, 0, c(1));
        m.set(0, 1, s(0));
        m.set(1, 0, s(0));
        m.set(1, 1, s(1));
        let (rank, _, _) = m.bareiss_rank();
        assert_eq!(rank, 2);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_diag_symbols() {
        // [[1, s0, 0], [0, 0, 1]]: kernel spanned by (-s0, 1, 0).
        let mut m = PMat::zeros(2, 3, 2);
        m.set(0, 0, c(1));
        m.set(0, 1, s(0));
        m.set(1, 2, c(1));
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        let rows = kernel_orthogonality_rows(&ker, 3);
        // eta . (-s0, 1, 0) = 0 forces eta_0 = eta_1 = 0.
        let qm = crate::exact::qmat::QMat::from_rows(&rows);
        assert_eq!(qm.rank(), 2);
    }

    #[test]
    fn eval_consistency() {
        let p = s(0).mul(&s(1)).add(&c(3));
        assert_eq!(p.eval(&[rat_int(2), rat_int(5)]), rat_int(13));
    }
}
