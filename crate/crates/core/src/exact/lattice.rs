//! Lattices and closed subgroups of R^q with exact symbol coordinates:
//! bases, duals, spans, cospans, discreteness and finite index.
//!
//! The closure of a finitely generated subgroup decomposes as
//! `cospan + lattice`, where the cospan is the largest vector subspace
//! contained in the closure. The engine here computes that decomposition
//! by (1) extracting a Z-basis of the abstract group from the rational
//! symbol expansion, (2) finding the real linear relations among those
//! basis vectors over the rational-function field in the irrational
//! symbols, and (3) dualizing: the integer covectors orthogonal to all
//! relations cut out the closure, and one Smith normal form splits it
//! into a subspace plus a discrete part.

use super::poly::{kernel_orthogonality_rows, MPoly, PMat};
use super::qmat::{clear_denominators, is_integral, QMat, Rat};
use super::snf::{hermite_normal_form, integer_kernel, smith_normal_form, IMat};
use super::{ExactError, ExactVector, PeriodBasis};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::sync::{Arc, OnceLock};

/// Discrete subgroup of R^q presented by a Q-linearly independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<ExactVector>,
}

impl Lattice {
    pub fn new(dim: usize, basis: Vec<ExactVector>) -> Result<Self, ExactError> {
        for v in &basis {
            if v.dim() != dim {
                return Err(ExactError::DimMismatch(v.dim(), dim));
            }
        }
        if let Some(first) = basis.first() {
            let b = first.basis();
            if basis.iter().any(|v| v.basis() != b) {
                return Err(ExactError::BasisMismatch);
            }
        }
        // Q-linear independence over the symbol expansion.
        let rows: Vec<Vec<Rat>> = basis.iter().map(|v| v.symbol_expansion()).collect();
        if !rows.is_empty() && QMat::from_rows(&rows).rank() != basis.len() {
            return Err(ExactError::DependentBasis);
        }
        Ok(Lattice { dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ExactVector] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn is_rational(&self) -> bool {
        self.basis.iter().all(|v| v.is_rational())
    }

    /// Basis matrix over Q (rows are basis vectors); rational lattices only.
    fn rational_basis_matrix(&self) -> Result<QMat, ExactError> {
        if !self.is_rational() {
            return Err(ExactError::NonRationalLattice);
        }
        Ok(QMat::from_rows(
            &self.basis.iter().map(|v| v.rational_parts()).collect::<Vec<_>>(),
        ))
    }

    /// Membership: is `v` an integer combination of the basis?
    pub fn contains(&self, v: &ExactVector) -> bool {
        if v.dim() != self.dim {
            return false;
        }
        if self.basis.is_empty() {
            return v.is_zero();
        }
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| b.symbol_expansion()).collect();
        let m = QMat::from_rows(&rows).transpose();
        match m.solve(&v.symbol_expansion()) {
            Some(x) => is_integral(&x),
            None => false,
        }
    }

    /// Same generated subgroup (requires the same period basis to even
    /// make sense; otherwise false).
    pub fn same_subgroup(&self, other: &Lattice) -> bool {
        if self.dim != other.dim {
            return false;
        }
        self.basis.iter().all(|v| other.contains(v)) && other.basis.iter().all(|v| self.contains(v))
    }

    /// Canonical Hermite-reduced basis of the generated subgroup.
    pub fn canonical_basis(&self) -> Vec<ExactVector> {
        if self.basis.is_empty() {
            return vec![];
        }
        let pb = self.basis[0].basis().clone();
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|v| v.symbol_expansion()).collect();
        let reduced = hermite_rows(&rows);
        reduced.iter().map(|r| vector_from_expansion(&pb, self.dim, r)).collect()
    }
}

/// `{xi : xi(v) in Z for all v in L}` for a full-rank rational lattice:
/// the inverse-transpose basis.
pub fn dual_lattice(l: &Lattice) -> Result<Lattice, ExactError> {
    if !l.is_full_rank() {
        return Err(ExactError::NotFullRank);
    }
    let m = l.rational_basis_matrix()?;
    let inv_t = m.inverse().ok_or(ExactError::NotFullRank)?.transpose();
    let pb = l.basis[0].basis().clone();
    let basis = (0..l.dim)
        .map(|i| ExactVector::from_rationals(&pb, inv_t.row(i)))
        .collect();
    Lattice::new(l.dim, basis)
}

/// Outcome of a finite-index query between nested rational lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexVerdict {
    Index(BigInt),
    NotContained,
    RankDrop,
}

/// Index of `sub` inside `sup` when both are rational, `sub` is contained
/// in `sup`, and the ranks agree; the absolute determinant of the integer
/// change-of-basis matrix.
pub fn finite_index(sub: &Lattice, sup: &Lattice) -> Result<IndexVerdict, ExactError> {
    if sub.dim != sup.dim {
        return Err(ExactError::DimMismatch(sub.dim, sup.dim));
    }
    if !sub.is_rational() || !sup.is_rational() {
        return Err(ExactError::NonRationalLattice);
    }
    let sup_m = sup.rational_basis_matrix()?.transpose();
    let mut change = Vec::with_capacity(sub.rank());
    for v in &sub.basis {
        match sup_m.solve(&v.rational_parts()) {
            Some(x) if is_integral(&x) => change.push(x),
            Some(_) => return Ok(IndexVerdict::NotContained),
            None => return Ok(IndexVerdict::NotContained),
        }
    }
    if sub.rank() != sup.rank() {
        return Ok(IndexVerdict::RankDrop);
    }
    let (im, den) = clear_denominators(&change);
    debug_assert!(den == BigInt::from(1));
    Ok(IndexVerdict::Index(im.det().abs()))
}

/// Verdict of a discreteness test.
#[derive(Debug, Clone)]
pub enum Discreteness {
    /// Z-basis generating exactly the subgroup.
    Discrete { basis: Vec<ExactVector> },
    /// A direction witnessing a positive-dimensional cospan.
    NonDiscrete { cospan_witness: ExactVector },
}

/// Closure decomposition `cospan + discrete part` of a finitely generated
/// subgroup, plus the subspace spanned by the generators.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Basis of the real span of the generators.
    pub span: Vec<ExactVector>,
    /// Basis of the largest subspace contained in the closure.
    pub cospan: Vec<ExactVector>,
    /// Z-basis of a discrete complement to the cospan inside the closure.
    pub discrete: Vec<ExactVector>,
    /// True when the verdict leaned on the declared Q-linear independence
    /// of irrational symbols.
    pub assumes_symbol_independence: bool,
}

/// Finitely generated (plus optional declared subspace) subgroup of R^q.
#[derive(Debug, Clone)]
pub struct ClosedSubgroup {
    dim: usize,
    generators: Vec<ExactVector>,
    subspace: Vec<ExactVector>,
    cache: Arc<OnceLock<Decomposition>>,
}

impl ClosedSubgroup {
    pub fn new(dim: usize, generators: Vec<ExactVector>) -> Result<Self, ExactError> {
        Self::with_subspace(dim, generators, vec![])
    }

    /// Subgroup generated by `generators` over Z together with the linear
    /// span of `subspace` over R. Subspace components must be rational.
    pub fn with_subspace(
        dim: usize,
        generators: Vec<ExactVector>,
        subspace: Vec<ExactVector>,
    ) -> Result<Self, ExactError> {
        for v in generators.iter().chain(&subspace) {
            if v.dim() != dim {
                return Err(ExactError::DimMismatch(v.dim(), dim));
            }
        }
        if subspace.iter().any(|v| !v.is_rational()) {
            return Err(ExactError::UnsupportedSubspace);
        }
        if let Some(first) = generators.first().or(subspace.first()) {
            let b = first.basis();
            if generators.iter().chain(&subspace).any(|v| v.basis() != b) {
                return Err(ExactError::BasisMismatch);
            }
        }
        Ok(ClosedSubgroup { dim, generators, subspace, cache: Arc::new(OnceLock::new()) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ExactVector] {
        &self.generators
    }

    pub fn subspace_part(&self) -> &[ExactVector] {
        &self.subspace
    }

    pub fn period_basis(&self) -> Option<Arc<PeriodBasis>> {
        self.generators
            .first()
            .or(self.subspace.first())
            .map(|v| v.basis().clone())
    }

    /// Lazily computed closure decomposition; idempotent under racing
    /// recomputation.
    pub fn decomposition(&self) -> &Decomposition {
        self.cache.get_or_init(|| decompose(self))
    }

    pub fn span(&self) -> Vec<ExactVector> {
        self.decomposition().span.clone()
    }

    pub fn cospan(&self) -> Vec<ExactVector> {
        self.decomposition().cospan.clone()
    }

    pub fn is_discrete(&self) -> Discreteness {
        let d = self.decomposition();
        match d.cospan.first() {
            Some(w) => Discreteness::NonDiscrete { cospan_witness: w.clone() },
            None => Discreteness::Discrete { basis: d.discrete.clone() },
        }
    }

    /// Rank of the discrete part of the closure.
    pub fn discrete_rank(&self) -> usize {
        self.decomposition().discrete.len()
    }

    /// The discrete part as a lattice, when the subgroup is discrete.
    pub fn as_lattice(&self) -> Option<Lattice> {
        match self.is_discrete() {
            Discreteness::Discrete { basis } => Lattice::new(self.dim, basis).ok(),
            Discreteness::NonDiscrete { .. } => None,
        }
    }

    /// Dual `{xi : xi(C) in Z}` of a rational subgroup, as a closed
    /// subgroup (annihilator subspace plus the dual basis of the discrete
    /// part inside its span).
    pub fn rational_dual(&self) -> Result<ClosedSubgroup, ExactError> {
        if self.generators.iter().any(|v| !v.is_rational()) {
            return Err(ExactError::NonRationalLattice);
        }
        let pb = self.period_basis().unwrap_or_else(PeriodBasis::rational);
        let d = self.decomposition();
        // Rational subgroups are discrete; span = lattice span.
        let lat_rows: Vec<Vec<Rat>> = d.discrete.iter().map(|v| v.rational_parts()).collect();
        let span_rows: Vec<Vec<Rat>> =
            d.span.iter().chain(&d.cospan).map(|v| v.rational_parts()).collect();
        // Annihilator of the whole span is the dual's cospan.
        let ann_vectors: Vec<ExactVector> = if span_rows.is_empty() {
            (0..self.dim)
                .map(|i| {
                    let mut e = vec![Rat::zero(); self.dim];
                    e[i] = num_traits::One::one();
                    ExactVector::from_rationals(&pb, &e)
                })
                .collect()
        } else {
            QMat::from_rows(&span_rows)
                .nullspace()
                .iter()
                .map(|r| ExactVector::from_rationals(&pb, r))
                .collect()
        };
        // Dual basis of the discrete part inside its own span:
        // xi_k = B^T (B B^T)^{-1} e_k, rows of (B B^T)^{-1} B.
        let dual_gens: Vec<ExactVector> = if lat_rows.is_empty() {
            vec![]
        } else {
            let b = QMat::from_rows(&lat_rows);
            let gram = b.mul(&b.transpose());
            let gram_inv = gram.inverse().expect("gram of independent rows");
            let dual = gram_inv.mul(&b);
            (0..dual.rows)
                .map(|i| ExactVector::from_rationals(&pb, dual.row(i)))
                .collect()
        };
        ClosedSubgroup::with_subspace(self.dim, dual_gens, ann_vectors)
    }
}

/// Canonical Hermite-reduced generating rows of the row lattice of
/// rational `rows` (denominator-aware).
fn hermite_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let (im, den) = clear_denominators(rows);
    let (h, _) = hermite_normal_form(&im);
    let den_rat = Rat::from_integer(den);
    (0..h.rows)
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .map(|i| {
            h.row(i)
                .iter()
                .map(|x| Rat::from_integer(x.clone()) / &den_rat)
                .collect()
        })
        .collect()
}

fn vector_from_expansion(pb: &Arc<PeriodBasis>, dim: usize, expansion: &[Rat]) -> ExactVector {
    let k = pb.len();
    assert_eq!(expansion.len(), dim * k);
    let entries = (0..dim)
        .map(|i| {
            super::ExactScalar::from_coeffs(pb, expansion[i * k..(i + 1) * k].to_vec())
                .expect("coeff length")
        })
        .collect::<Vec<_>>();
    ExactVector::new(entries).expect("same basis")
}

/// Matrix of generators as columns, entries as linear polynomials in the
/// irrational symbols (the unit symbol is the constant term).
fn symbol_matrix(vectors: &[ExactVector], dim: usize, nsym: usize) -> PMat {
    let nvars = nsym - 1;
    let mut m = PMat::zeros(dim, vectors.len(), nvars);
    for (col, v) in vectors.iter().enumerate() {
        for i in 0..dim {
            let coeffs = v.entry(i).coeffs();
            let mut p = MPoly::constant(nvars, coeffs[0].clone());
            for j in 1..nsym {
                p = p.add(&MPoly::linear(nvars, j - 1, coeffs[j].clone()));
            }
            m.set(i, col, p);
        }
    }
    m
}

fn decompose(c: &ClosedSubgroup) -> Decomposition {
    let Some(pb) = c.period_basis() else {
        return Decomposition {
            span: vec![],
            cospan: vec![],
            discrete: vec![],
            assumes_symbol_independence: false,
        };
    };
    let nsym = pb.len();
    let assumes = c
        .generators
        .iter()
        .any(|v| v.entries().iter().any(|e| e.coeffs()[1..].iter().any(|q| !q.is_zero())))
        && pb.has_irrational();

    // Work modulo the declared (rational) subspace component: eliminate
    // its coordinates through a rational projection.
    let (proj, sub_basis) = subspace_projection(c, &pb);
    let projected: Vec<ExactVector> = c
        .generators
        .iter()
        .map(|g| apply_rational_map(&proj, g, &pb))
        .filter(|g| !g.is_zero())
        .collect();

    // Z-basis of the abstract group from the symbol expansion.
    let expansions: Vec<Vec<Rat>> = projected.iter().map(|g| g.symbol_expansion()).collect();
    let abstract_basis_rows = hermite_rows(&expansions);
    let gens: Vec<ExactVector> = abstract_basis_rows
        .iter()
        .map(|r| vector_from_expansion(&pb, c.dim, r))
        .collect();
    let p = gens.len();

    if p == 0 {
        return Decomposition {
            span: sub_basis.clone(),
            cospan: sub_basis,
            discrete: vec![],
            assumes_symbol_independence: assumes,
        };
    }

    let m = symbol_matrix(&gens, c.dim, nsym);
    let (rank, pivot_cols, _) = m.bareiss_rank();
    let span_piece: Vec<ExactVector> = pivot_cols.iter().map(|&j| gens[j].clone()).collect();

    if rank == p {
        // Abstract rank equals real span dimension: a lattice.
        let span = join_independent(&sub_basis, &span_piece, c.dim, nsym);
        return Decomposition {
            span,
            cospan: sub_basis,
            discrete: gens,
            assumes_symbol_independence: assumes,
        };
    }

    // Integer covectors orthogonal to every real relation.
    let kernel = m.kernel_basis();
    let constraint_rows = kernel_orthogonality_rows(&kernel, p);
    assert!(!constraint_rows.is_empty(), "rank deficit implies relations");
    let (a, _) = clear_denominators(&constraint_rows);
    let lattice_of_covectors: Vec<Vec<BigInt>> = integer_kernel(&a);

    let t = lattice_of_covectors.len();
    let (cospan_coords, lattice_coords) = if t == 0 {
        // Dense in its span.
        (identity_rat(p), vec![])
    } else {
        let h = IMat::from_rows(
            &lattice_of_covectors
                .iter()
                .map(|v| v.clone())
                .collect::<Vec<_>>(),
        );
        let snf = smith_normal_form(&h);
        debug_assert_eq!(snf.rank(), t);
        // y-condition H y in Z^t becomes d_i z_i in Z after z = V^{-1} y,
        // i.e. y in span(V cols >= t) + sum Z (V col_i / d_i).
        let v = snf.v;
        let mut cospan_cols = Vec::new();
        for j in t..p {
            cospan_cols.push((0..p).map(|i| Rat::from_integer(v[(i, j)].clone())).collect());
        }
        let mut lattice_cols = Vec::new();
        for j in 0..t {
            let d = snf.d[(j, j)].clone();
            lattice_cols.push(
                (0..p)
                    .map(|i| Rat::new(v[(i, j)].clone(), d.clone()))
                    .collect::<Vec<_>>(),
            );
        }
        (cospan_cols, lattice_cols)
    };

    let embed = |coords: &Vec<Rat>| -> ExactVector {
        let mut acc = ExactVector::zero(&pb, c.dim);
        for (s, q) in coords.iter().enumerate() {
            if !q.is_zero() {
                acc = acc.add(&gens[s].scale(q)).expect("same basis");
            }
        }
        acc
    };

    let cospan_raw: Vec<ExactVector> = cospan_coords.iter().map(embed).collect();
    let cospan = join_independent(&sub_basis, &cospan_raw, c.dim, nsym);
    let discrete: Vec<ExactVector> = lattice_coords
        .iter()
        .map(embed)
        .filter(|v| !v.is_zero())
        .collect();
    let span = join_independent(&sub_basis, &span_piece, c.dim, nsym);

    Decomposition { span, cospan, discrete, assumes_symbol_independence: assumes }
}

fn identity_rat(p: usize) -> Vec<Vec<Rat>> {
    (0..p)
        .map(|i| {
            (0..p)
                .map(|j| if i == j { num_traits::One::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

/// Maximal really-independent subset of `extra` over `base`, returned as
/// `base ++ chosen`.
fn join_independent(
    base: &[ExactVector],
    extra: &[ExactVector],
    dim: usize,
    nsym: usize,
) -> Vec<ExactVector> {
    let mut acc: Vec<ExactVector> = base.to_vec();
    for v in extra {
        if v.is_zero() {
            continue;
        }
        let mut trial = acc.clone();
        trial.push(v.clone());
        let m = symbol_matrix(&trial, dim, nsym);
        let (rank, _, _) = m.bareiss_rank();
        if rank == trial.len() {
            acc = trial;
        }
    }
    acc
}

/// Projection matrix killing the declared subspace (rational), plus a
/// canonical basis of that subspace.
fn subspace_projection(c: &ClosedSubgroup, pb: &Arc<PeriodBasis>) -> (QMat, Vec<ExactVector>) {
    if c.subspace.is_empty() {
        return (QMat::identity(c.dim), vec![]);
    }
    let rows: Vec<Vec<Rat>> = c.subspace.iter().map(|v| v.rational_parts()).collect();
    let mut rref = QMat::from_rows(&rows);
    let pivots = rref.rref();
    // Basis of the subspace from the reduced rows.
    let basis: Vec<ExactVector> = (0..pivots.len())
        .map(|i| ExactVector::from_rationals(pb, rref.row(i)))
        .collect();
    // Projection v -> v - sum_row v[pivot_row] * rref_row kills the
    // subspace and every pivot coordinate.
    let mut proj = QMat::identity(c.dim);
    for (row, &pc) in pivots.iter().enumerate() {
        for i in 0..c.dim {
            let v = rref[(row, i)].clone();
            if !v.is_zero() {
                proj[(i, pc)] -= v;
            }
        }
    }
    (proj, basis)
}

/// Apply a rational linear map (rows act on coordinates) to an exact
/// vector, symbol slot by symbol slot.
fn apply_rational_map(m: &QMat, v: &ExactVector, pb: &Arc<PeriodBasis>) -> ExactVector {
    let dim = v.dim();
    let nsym = pb.len();
    let mut out_coeffs = vec![vec![Rat::zero(); nsym]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let w = &m[(i, j)];
            if w.is_zero() {
                continue;
            }
            for s in 0..nsym {
                let add = w * &v.entry(j).coeffs()[s];
                out_coeffs[i][s] += add;
            }
        }
    }
    let entries = out_coeffs
        .into_iter()
        .map(|cs| super::ExactScalar::from_coeffs(pb, cs).expect("coeff length"))
        .collect::<Vec<_>>();
    ExactVector::new(entries).expect("same basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qmat::{rat, rat_int};
    use crate::exact::{ExactScalar, Symbol};

    fn pb_ab() -> Arc<PeriodBasis> {
        PeriodBasis::new(vec![
            Symbol { name: "a".into(), approx: "2.71828182845904523536028747135266".into(), rational: false },
            Symbol { name: "b".into(), approx: "3.14159265358979323846264338327950".into(), rational: false },
        ])
        .unwrap()
    }

    fn vq(pb: &Arc<PeriodBasis>, v: &[i64]) -> ExactVector {
        ExactVector::from_ints(pb, v)
    }

    fn sym_vec(pb: &Arc<PeriodBasis>, name: &str) -> ExactVector {
        ExactVector::new(vec![ExactScalar::symbol(pb, name).unwrap()]).unwrap()
    }

    #[test]
    fn dual_of_standard_is_standard() {
        let pb = PeriodBasis::rational();
        let l = Lattice::new(2, vec![vq(&pb, &[1, 0]), vq(&pb, &[0, 1])]).unwrap();
        let d = dual_lattice(&l).unwrap();
        assert!(l.same_subgroup(&d));
    }

    #[test]
    fn dual_diagonal() {
        let pb = PeriodBasis::rational();
        let l = Lattice::new(2, vec![vq(&pb, &[2, 0]), vq(&pb, &[0, 1])]).unwrap();
        let d = dual_lattice(&l).unwrap();
        let expected = Lattice::new(
            2,
            vec![
                ExactVector::from_rationals(&pb, &[rat(1, 2), rat_int(0)]),
                vq(&pb, &[0, 1]),
            ],
        )
        .unwrap();
        assert!(d.same_subgroup(&expected));
    }

    #[test]
    fn dual_shear_by_exact_solve() {
        let pb = PeriodBasis::rational();
        let l = Lattice::new(2, vec![vq(&pb, &[1, 1]), vq(&pb, &[0, 1])]).unwrap();
        let d = dual_lattice(&l).unwrap();
        let expected = Lattice::new(2, vec![vq(&pb, &[1, 0]), vq(&pb, &[-1, 1])]).unwrap();
        assert!(d.same_subgroup(&expected));
    }

    #[test]
    fn dual_is_involution() {
        let pb = PeriodBasis::rational();
        let l = Lattice::new(
            2,
            vec![
                ExactVector::from_rationals(&pb, &[rat(2, 3), rat_int(1)]),
                ExactVector::from_rationals(&pb, &[rat_int(0), rat(5, 7)]),
            ],
        )
        .unwrap();
        let dd = dual_lattice(&dual_lattice(&l).unwrap()).unwrap();
        assert!(l.same_subgroup(&dd));
    }

    #[test]
    fn dual_requires_rational_and_full_rank() {
        let pb = pb_ab();
        let l = Lattice::new(1, vec![sym_vec(&pb, "a")]).unwrap();
        assert_eq!(dual_lattice(&l), Err(ExactError::NonRationalLattice));
        let pbq = PeriodBasis::rational();
        let l2 = Lattice::new(2, vec![vq(&pbq, &[1, 0])]).unwrap();
        assert_eq!(dual_lattice(&l2), Err(ExactError::NotFullRank));
    }

    #[test]
    fn finite_index_examples() {
        let pb = PeriodBasis::rational();
        let z2 = Lattice::new(2, vec![vq(&pb, &[1, 0]), vq(&pb, &[0, 1])]).unwrap();
        let two_z2 = Lattice::new(2, vec![vq(&pb, &[2, 0]), vq(&pb, &[0, 2])]).unwrap();
        assert_eq!(finite_index(&two_z2, &z2).unwrap(), IndexVerdict::Index(4.into()));
        assert_eq!(finite_index(&z2, &z2).unwrap(), IndexVerdict::Index(1.into()));
        let diag = Lattice::new(2, vec![vq(&pb, &[1, 1]), vq(&pb, &[1, -1])]).unwrap();
        assert_eq!(finite_index(&diag, &z2).unwrap(), IndexVerdict::Index(2.into()));
        // Cross-check index 2 by coset enumeration on representatives.
        let mut distinct = std::collections::HashSet::new();
        for x in 0..2i64 {
            for y in 0..2i64 {
                // reduce (x, y) mod diag: count distinct cosets
                let mut found = false;
                for (px, py) in distinct.iter().cloned().collect::<Vec<(i64, i64)>>() {
                    let d = vq(&pb, &[x - px, y - py]);
                    if diag.contains(&d) {
                        found = true;
                        break;
                    }
                }
                if !found {
                    distinct.insert((x, y));
                }
            }
        }
        assert_eq!(distinct.len(), 2);
    }

    #[test]
    fn finite_index_failure_reasons() {
        let pb = PeriodBasis::rational();
        let z2 = Lattice::new(2, vec![vq(&pb, &[1, 0]), vq(&pb, &[0, 1])]).unwrap();
        let half = Lattice::new(
            2,
            vec![ExactVector::from_rationals(&pb, &[rat(1, 2), rat_int(0)]), vq(&pb, &[0, 1])],
        )
        .unwrap();
        assert_eq!(finite_index(&half, &z2).unwrap(), IndexVerdict::NotContained);
        let line = Lattice::new(2, vec![vq(&pb, &[1, 0])]).unwrap();
        assert_eq!(finite_index(&line, &z2).unwrap(), IndexVerdict::RankDrop);
    }

    #[test]
    fn single_generator_line_is_discrete() {
        let pb = PeriodBasis::rational();
        let c = ClosedSubgroup::new(2, vec![vq(&pb, &[1, 0])]).unwrap();
        let d = c.decomposition();
        assert!(d.cospan.is_empty());
        assert_eq!(d.span.len(), 1);
        assert_eq!(d.discrete.len(), 1);
    }

    #[test]
    fn unit_and_sqrt_mix_is_dense_in_line() {
        let pb = pb_ab();
        let one = ExactVector::from_ints(&pb, &[1]);
        let a = sym_vec(&pb, "a");
        let c = ClosedSubgroup::new(1, vec![one, a]).unwrap();
        let d = c.decomposition();
        assert_eq!(d.cospan.len(), 1, "rank-2 subgroup of R is dense");
        assert!(d.discrete.is_empty());
        assert!(d.assumes_symbol_independence);
        assert!(matches!(c.is_discrete(), Discreteness::NonDiscrete { .. }));
    }

    #[test]
    fn axis_aligned_symbols_stay_discrete() {
        let pb = pb_ab();
        let e1 = vq(&pb, &[1, 0]);
        let a_e2 = ExactVector::new(vec![
            ExactScalar::zero(&pb),
            ExactScalar::symbol(&pb, "a").unwrap(),
        ])
        .unwrap();
        let c = ClosedSubgroup::new(2, vec![e1.clone(), a_e2.clone()]).unwrap();
        let d = c.decomposition();
        assert!(d.cospan.is_empty());
        assert_eq!(d.span.len(), 2);
        assert_eq!(d.discrete.len(), 2);
        let lat = c.as_lattice().unwrap();
        assert!(lat.contains(&e1));
        assert!(lat.contains(&a_e2));
    }

    #[test]
    fn mixed_axes_decompose() {
        // <(1,0), (a,0), (0,1)>: dense line in the first axis, Z in the second.
        let pb = pb_ab();
        let g2 = ExactVector::new(vec![
            ExactScalar::symbol(&pb, "a").unwrap(),
            ExactScalar::zero(&pb),
        ])
        .unwrap();
        let c = ClosedSubgroup::new(2, vec![vq(&pb, &[1, 0]), g2, vq(&pb, &[0, 1])]).unwrap();
        let d = c.decomposition();
        assert_eq!(d.cospan.len(), 1);
        assert_eq!(d.discrete.len(), 1);
        assert_eq!(d.span.len(), 2);
        // The discrete part must generate (0,1) modulo the cospan.
        let disc = &d.discrete[0];
        assert!(!disc.entry(1).is_zero());
    }

    #[test]
    fn rational_gcd_collapse() {
        let pb = PeriodBasis::rational();
        let one = vq(&pb, &[1]);
        let half = ExactVector::from_rationals(&pb, &[rat(1, 2)]);
        let c = ClosedSubgroup::new(1, vec![one, half.clone()]).unwrap();
        match c.is_discrete() {
            Discreteness::Discrete { basis } => {
                assert_eq!(basis.len(), 1);
                assert_eq!(basis[0], half);
            }
            Discreteness::NonDiscrete { .. } => panic!("rational subgroup must be discrete"),
        }
    }

    #[test]
    fn discrete_basis_generates_generators() {
        let pb = PeriodBasis::rational();
        let g1 = ExactVector::from_rationals(&pb, &[rat(3, 2), rat_int(0)]);
        let g2 = ExactVector::from_rationals(&pb, &[rat(1, 2), rat_int(1)]);
        let c = ClosedSubgroup::new(2, vec![g1.clone(), g2.clone()]).unwrap();
        let lat = c.as_lattice().unwrap();
        assert!(lat.contains(&g1));
        assert!(lat.contains(&g2));
        // And the basis vectors lie in the Z-span of the generators.
        let gen_lat = Lattice::new(2, vec![g1, g2]).unwrap();
        for b in lat.basis() {
            assert!(gen_lat.contains(b));
        }
    }

    #[test]
    fn span_cospan_duality_on_rational_inputs() {
        // span(C^dual) = ann(cospan C), cospan(C^dual) = ann(span C).
        let pb = PeriodBasis::rational();
        let c = ClosedSubgroup::new(3, vec![vq(&pb, &[1, 0, 0]), vq(&pb, &[0, 2, 0])]).unwrap();
        let dual = c.rational_dual().unwrap();
        let dd = dual.decomposition();
        // span C = e1, e2 plane; ann = e3 axis = cospan of dual.
        assert_eq!(dd.cospan.len(), 1);
        assert!(dd.cospan[0].entry(2).is_zero() == false);
        // cospan C = 0; ann = R^3 = span of dual.
        assert_eq!(dd.span.len(), 3);
        // Dual lattice part evaluates integrally on C.
        for g in c.generators() {
            for xi in &dd.discrete {
                let pairing: Rat = xi
                    .rational_parts()
                    .iter()
                    .zip(g.rational_parts())
                    .map(|(a, b)| a * b)
                    .sum();
                assert!(pairing.denom().abs() == 1.into());
            }
        }
    }

    #[test]
    fn canonical_basis_is_stable_under_regeneration() {
        let pb = PeriodBasis::rational();
        let l1 = Lattice::new(2, vec![vq(&pb, &[1, 1]), vq(&pb, &[0, 1])]).unwrap();
        let l2 = Lattice::new(2, vec![vq(&pb, &[1, 0]), vq(&pb, &[1, 1])]).unwrap();
        assert!(l1.same_subgroup(&l2));
        assert_eq!(l1.canonical_basis(), l2.canonical_basis());
    }
}
