//! Exact arithmetic substrate: rational coordinates over a declared basis
//! of real period symbols, plus lattices and closed subgroups built on it.
//!
//! A [`PeriodBasis`] fixes a list of named real constants, the first of
//! which is always the literal `1`. Scalars are rational tuples over that
//! list, so sums and integer multiples of periods stay exact. Whether the
//! irrational symbols really are Q-linearly independent is an assertion
//! recorded on the basis, never verified; discreteness verdicts that rely
//! on it say so.

pub mod lattice;
pub mod poly;
pub mod qmat;
pub mod snf;

use num_traits::{One, Zero};
use qmat::Rat;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("values use different period bases")]
    BasisMismatch,
    #[error("basis vectors are not Q-linearly independent")]
    DependentBasis,
    #[error("lattice is not of full rank")]
    NotFullRank,
    #[error("operation requires a rational lattice (unit symbol only)")]
    NonRationalLattice,
    #[error("duplicate symbol name: {0}")]
    DuplicateSymbol(String),
    #[error("first symbol must be the rational unit 1")]
    MissingUnitSymbol,
    #[error("spherical periods must be a subset of all periods")]
    SubsetViolation,
    #[error("cannot parse rational literal: {0}")]
    BadRational(String),
    #[error("unsupported subspace component (rational coordinates required)")]
    UnsupportedSubspace,
}

/// One named real constant with a high-precision decimal approximation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub approx: String,
    pub rational: bool,
}

/// Ordered list of period symbols; the exactness substrate.
#[derive(Debug)]
pub struct PeriodBasis {
    symbols: Vec<Symbol>,
    approx: Vec<f64>,
}

impl PartialEq for PeriodBasis {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}
impl Eq for PeriodBasis {}

impl PeriodBasis {
    /// Basis containing only the unit symbol.
    pub fn rational() -> Arc<Self> {
        Self::new(vec![]).expect("unit basis")
    }

    /// Basis with the unit symbol followed by the given symbols.
    /// Q-linear independence of the irrational entries is asserted by the
    /// caller, not checked.
    pub fn new(extra: Vec<Symbol>) -> Result<Arc<Self>, ExactError> {
        let mut symbols = vec![Symbol { name: "1".into(), approx: "1".into(), rational: true }];
        symbols.extend(extra);
        let mut seen = std::collections::HashSet::new();
        for s in &symbols {
            if !seen.insert(s.name.clone()) {
                return Err(ExactError::DuplicateSymbol(s.name.clone()));
            }
        }
        let approx = symbols
            .iter()
            .map(|s| s.approx.parse::<f64>().map_err(|_| ExactError::BadRational(s.approx.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arc::new(PeriodBasis { symbols, approx }))
    }

    /// Deserialize from the JSON shape `{"symbols":[{name, approx, rational}]}`.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Arc<Self>, ExactError> {
        let mut iter = symbols.into_iter();
        match iter.next() {
            Some(first) if first.name == "1" && first.rational => Self::new(iter.collect()),
            Some(_) => Err(ExactError::MissingUnitSymbol),
            None => Err(ExactError::MissingUnitSymbol),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains the unit
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn approx(&self, idx: usize) -> f64 {
        self.approx[idx]
    }

    /// True when anything beyond the unit symbol is declared irrational.
    pub fn has_irrational(&self) -> bool {
        self.symbols.iter().any(|s| !s.rational)
    }
}

fn same_basis(a: &Arc<PeriodBasis>, b: &Arc<PeriodBasis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Rational tuple over a period basis; represents sum_j coeff_j * symbol_j.
#[derive(Clone)]
pub struct ExactScalar {
    basis: Arc<PeriodBasis>,
    coeffs: Vec<Rat>,
}

impl std::fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j == 0 {
                parts.push(format!("{}", c));
            } else if c.is_one() {
                parts.push(self.basis.symbols()[j].name.clone());
            } else {
                parts.push(format!("{}*{}", c, self.basis.symbols()[j].name));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        same_basis(&self.basis, &other.basis) && self.coeffs == other.coeffs
    }
}
impl Eq for ExactScalar {}

impl std::hash::Hash for ExactScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in &self.coeffs {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

impl ExactScalar {
    pub fn zero(basis: &Arc<PeriodBasis>) -> Self {
        ExactScalar { basis: basis.clone(), coeffs: vec![Rat::zero(); basis.len()] }
    }

    pub fn from_rational(basis: &Arc<PeriodBasis>, q: Rat) -> Self {
        let mut s = Self::zero(basis);
        s.coeffs[0] = q;
        s
    }

    /// The symbol with the given name, as a scalar.
    pub fn symbol(basis: &Arc<PeriodBasis>, name: &str) -> Option<Self> {
        let idx = basis.index_of(name)?;
        let mut s = Self::zero(basis);
        s.coeffs[idx] = Rat::one();
        Some(s)
    }

    pub fn from_coeffs(basis: &Arc<PeriodBasis>, coeffs: Vec<Rat>) -> Result<Self, ExactError> {
        if coeffs.len() != basis.len() {
            return Err(ExactError::DimMismatch(coeffs.len(), basis.len()));
        }
        Ok(ExactScalar { basis: basis.clone(), coeffs })
    }

    pub fn basis(&self) -> &Arc<PeriodBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when only the unit symbol carries a coefficient.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(ExactError::BasisMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(ExactScalar { basis: self.basis.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        ExactScalar {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| rat_to_f64(c) * self.basis.approx(j))
            .sum()
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Good enough for the numeric consumers; exact paths never round-trip
    // through floats.
    let num = r.numer();
    let den = r.denom();
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            if num_traits::Zero::is_zero(&d) {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Vector of exact scalars sharing one period basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactVector {
    entries: Vec<ExactScalar>,
}

impl std::fmt::Debug for ExactVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl ExactVector {
    pub fn new(entries: Vec<ExactScalar>) -> Result<Self, ExactError> {
        if entries.is_empty() {
            return Err(ExactError::DimMismatch(0, 1));
        }
        let basis = entries[0].basis.clone();
        for e in &entries[1..] {
            if !same_basis(&basis, &e.basis) {
                return Err(ExactError::BasisMismatch);
            }
        }
        Ok(ExactVector { entries })
    }

    pub fn zero(basis: &Arc<PeriodBasis>, dim: usize) -> Self {
        ExactVector { entries: vec![ExactScalar::zero(basis); dim] }
    }

    pub fn from_rationals(basis: &Arc<PeriodBasis>, v: &[Rat]) -> Self {
        ExactVector {
            entries: v.iter().map(|q| ExactScalar::from_rational(basis, q.clone())).collect(),
        }
    }

    pub fn from_ints(basis: &Arc<PeriodBasis>, v: &[i64]) -> Self {
        Self::from_rationals(basis, &v.iter().map(|&n| qmat::rat_int(n)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn basis(&self) -> &Arc<PeriodBasis> {
        self.entries[0].basis()
    }

    pub fn entry(&self, i: usize) -> &ExactScalar {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(|e| e.is_rational())
    }

    pub fn rational_parts(&self) -> Vec<Rat> {
        self.entries.iter().map(|e| e.rational_part().clone()).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        if self.dim() != other.dim() {
            return Err(ExactError::DimMismatch(self.dim(), other.dim()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(ExactVector { entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExactVector { entries: self.entries.iter().map(|e| e.neg()).collect() }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        ExactVector { entries: self.entries.iter().map(|e| e.scale(q)).collect() }
    }

    /// Flatten to rational coordinates indexed by (coordinate, symbol).
    pub fn symbol_expansion(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.dim() * self.basis().len());
        for e in &self.entries {
            out.extend(e.coeffs.iter().cloned());
        }
        out
    }

    pub fn approx_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.approx_f64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qmat::{rat, rat_int};

    fn sqrt2_basis() -> Arc<PeriodBasis> {
        PeriodBasis::new(vec![Symbol {
            name: "sqrt2".into(),
            approx: "1.41421356237309504880168872420970".into(),
            rational: false,
        }])
        .unwrap()
    }

    #[test]
    fn scalar_arithmetic_is_exact_and_closed() {
        let b = sqrt2_basis();
        let a = ExactScalar::from_rational(&b, rat(1, 3));
        let s = ExactScalar::symbol(&b, "sqrt2").unwrap();
        let sum = a.add(&s).unwrap();
        let twice = sum.add(&sum).unwrap();
        assert_eq!(twice, sum.scale(&rat_int(2)));
        assert!(sum.sub(&sum).unwrap().is_zero());
        assert!(!sum.is_rational());
        assert!((sum.approx_f64() - (1.0 / 3.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn zero_iff_all_coefficients_zero() {
        let b = sqrt2_basis();
        let z = ExactScalar::zero(&b);
        assert!(z.is_zero());
        let s = ExactScalar::symbol(&b, "sqrt2").unwrap();
        assert!(!s.is_zero());
        assert!(s.sub(&s).unwrap().is_zero());
    }

    #[test]
    fn unit_symbol_always_first() {
        let b = PeriodBasis::rational();
        assert_eq!(b.symbols()[0].name, "1");
        let err = PeriodBasis::new(vec![Symbol {
            name: "1".into(),
            approx: "1".into(),
            rational: true,
        }]);
        assert!(matches!(err, Err(ExactError::DuplicateSymbol(_))));
    }

    #[test]
    fn vectors_share_one_basis() {
        let b1 = sqrt2_basis();
        let b2 = PeriodBasis::rational();
        let e1 = ExactScalar::zero(&b1);
        let e2 = ExactScalar::zero(&b2);
        assert!(ExactVector::new(vec![e1, e2]).is_err());
    }

    #[test]
    fn parse_rational_strings() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-2").unwrap(), rat_int(-2));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(rat_to_string(&rat(3, 4)), "3/4");
        assert_eq!(rat_to_string(&rat_int(5)), "5");
    }
}
