//! Integral lattices given by Gram matrices.

mod discriminant;
mod search;
pub mod snf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::linalg::{self, Matrix};
use crate::exact::rational::{int, Rational};

pub use discriminant::{
    DiscriminantGroup, DiscriminantQuadraticValue, IsotropicSubgroup, Overlattice,
};
pub use search::{integer_search_quadratic, is_saturated, Comparison, SearchBox};

/// Group-element enumeration cap used when no explicit bound is given.
pub const DEFAULT_ENUM_BOUND: usize = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate (det = 0)")]
    DegenerateLattice,
    #[error("lattice is odd: diagonal entry {0} is odd")]
    OddLattice(i64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("discriminant group has {order} elements, above the enumeration bound {bound}")]
    GroupTooLarge { order: String, bound: usize },
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("sublattice basis is linearly dependent")]
    DependentBasis,
    #[error("{0}")]
    Malformed(String),
}

/// Integer symmetric Gram matrix of a lattice with respect to a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(GramLattice { gram })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
            .collect();
        GramLattice { gram }
    }

    /// Parses `"22 0; 0 -2"` (rows separated by `;`).
    pub fn parse(s: &str) -> Result<Self, LatticeError> {
        let rows: Result<Vec<Vec<i64>>, _> = s
            .split(';')
            .map(|row| row.split_whitespace().map(str::parse::<i64>).collect())
            .collect();
        let rows = rows.map_err(|e| LatticeError::Malformed(format!("bad gram {s:?}: {e}")))?;
        Self::new(rows)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rational_gram(&self) -> Matrix {
        linalg::from_i64(&self.gram)
    }

    pub(crate) fn big_gram(&self) -> snf::IntMatrix {
        self.gram
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub(crate) fn require_even(&self) -> Result<(), LatticeError> {
        match (0..self.rank()).find(|&i| self.gram[i][i] % 2 != 0) {
            Some(i) => Err(LatticeError::OddLattice(self.gram[i][i])),
            None => Ok(()),
        }
    }

    pub fn determinant(&self) -> BigInt {
        linalg::det(&self.rational_gram()).to_integer()
    }

    /// `(positive, negative, zero)` counts of the real form.
    pub fn signature(&self) -> (usize, usize, usize) {
        linalg::inertia(&self.rational_gram())
    }

    pub fn is_hyperbolic(&self) -> bool {
        let (p, n, z) = self.signature();
        p == 1 && z == 0 && n + 1 == self.rank()
    }

    pub fn pair(&self, v: &[i64], w: &[i64]) -> Result<i64, LatticeError> {
        for x in [v, w] {
            if x.len() != self.rank() {
                return Err(LatticeError::DimensionMismatch {
                    expected: self.rank(),
                    got: x.len(),
                });
            }
        }
        Ok((0..self.rank())
            .map(|i| (0..self.rank()).map(|j| v[i] * self.gram[i][j] * w[j]).sum::<i64>())
            .sum())
    }

    /// `vᵀ G v`.
    pub fn evaluate(&self, v: &[i64]) -> Result<i64, LatticeError> {
        self.pair(v, v)
    }

    /// Gram matrix in the basis given by the columns of `basis` (rational).
    pub(crate) fn transform(&self, basis_columns: &Matrix) -> Matrix {
        let g = self.rational_gram();
        let bt = linalg::transpose(basis_columns);
        linalg::mul(&linalg::mul(&bt, &g), basis_columns)
    }

    /// `Mᵀ G M` for an integer matrix `M`.
    pub fn change_basis(&self, m: &[Vec<i64>]) -> Result<GramLattice, LatticeError> {
        let cols = linalg::from_i64(m);
        let g = self.transform(&cols);
        let rows = g
            .iter()
            .map(|r| r.iter().map(|x| crate::exact::rational::to_i64(x).unwrap()).collect())
            .collect();
        GramLattice::new(rows)
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        DiscriminantGroup::of(self)
    }

    /// Dual vector `G⁻¹ y` for an integer coordinate vector `y`.
    pub fn dual_vector(&self, y: &[i64]) -> Result<Vec<Rational>, LatticeError> {
        if y.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: y.len(),
            });
        }
        let inv = linalg::inverse(&self.rational_gram()).ok_or(LatticeError::DegenerateLattice)?;
        Ok(linalg::mat_vec(&inv, &y.iter().map(|&v| int(v)).collect::<Vec<_>>()))
    }
}
