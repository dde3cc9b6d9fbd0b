//! Piecewise-affine tropical maps: affine maps `u -> M u + c` induced by
//! exponent data on a canonical simplex, linear homomorphisms between
//! tropical tori that descend to the quotients, products, and the
//! difference map that contracts diagonals.

use crate::lattice::{Lattice, QuotientPoint};
use crate::linalg::{dot_int, QMatrix, QVector};
use crate::polytope::{AffineMap, GeometryError, Polytope};
use crate::rat::{Rat, ValueGroup};
use num::{BigInt, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TropicalError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear part does not map the source lattice into the target lattice")]
    LatticeNotPreserved,
    #[error("{0}")]
    BadParams(String),
}

/// Exponent data of a morphism restricted to a canonical simplex: an
/// integer matrix `M` (n x r) and a constant vector `c` of valuations,
/// describing the affine map `u -> M u + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMap {
    matrix: Vec<Vec<BigInt>>, // n rows of length r
    constants: QVector,       // length n
}

impl ExponentMap {
    pub fn new(matrix: Vec<Vec<BigInt>>, constants: QVector) -> Result<ExponentMap, TropicalError> {
        if matrix.len() != constants.len() {
            return Err(TropicalError::DimensionMismatch {
                expected: matrix.len(),
                got: constants.len(),
            });
        }
        let r = matrix.first().map_or(0, |row| row.len());
        if matrix.iter().any(|row| row.len() != r) {
            return Err(TropicalError::BadParams("ragged exponent matrix".into()));
        }
        Ok(ExponentMap { matrix, constants })
    }

    pub fn from_ints(matrix: &[Vec<i64>], constants: QVector) -> ExponentMap {
        ExponentMap::new(
            matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            constants,
        )
        .expect("well-shaped exponent data")
    }

    /// Target dimension n.
    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    /// Source dimension r (the simplex chart dimension).
    pub fn source_dim(&self) -> usize {
        self.matrix.first().map_or(0, |row| row.len())
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn constants(&self) -> &QVector {
        &self.constants
    }

    /// All constants lie in Γ.
    pub fn constants_in(&self, gamma: &ValueGroup) -> bool {
        self.constants.iter().all(|c| gamma.contains(c))
    }

    /// `M u + c`.
    pub fn eval(&self, u: &[Rat]) -> Result<QVector, TropicalError> {
        if u.len() != self.source_dim() {
            return Err(TropicalError::DimensionMismatch {
                expected: self.source_dim(),
                got: u.len(),
            });
        }
        Ok(self
            .matrix
            .iter()
            .zip(&self.constants)
            .map(|(row, c)| dot_int(row, u) + c)
            .collect())
    }

    /// Rank of `M` over the rationals.
    pub fn rank(&self) -> usize {
        self.as_affine_map().linear.rank()
    }

    /// Affine image of a polytope living in the source chart.
    pub fn image(&self, p: &Polytope) -> Result<Polytope, GeometryError> {
        p.apply_affine(&self.as_affine_map())
    }

    pub fn as_affine_map(&self) -> AffineMap {
        let rows: Vec<QVector> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let linear = if rows.is_empty() {
            QMatrix::zero(0, 0)
        } else {
            QMatrix::from_rows(rows)
        };
        AffineMap::new(linear, self.constants.clone())
    }
}

/// Linear homomorphism between tropical tori `R^{n1}/Λ1 -> R^{n2}/Λ2`.
/// Group homomorphisms have no translation part; the linear map must carry
/// `Λ1` into `Λ2`, which is what `new` validates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalHom {
    linear: QMatrix,
    source: Lattice,
    target: Lattice,
}

impl TropicalHom {
    pub fn new(linear: QMatrix, source: Lattice, target: Lattice) -> Result<TropicalHom, TropicalError> {
        if linear.ncols() != source.rank() {
            return Err(TropicalError::DimensionMismatch {
                expected: source.rank(),
                got: linear.ncols(),
            });
        }
        if linear.nrows() != target.rank() {
            return Err(TropicalError::DimensionMismatch {
                expected: target.rank(),
                got: linear.nrows(),
            });
        }
        for j in 0..source.rank() {
            let image = linear.matvec(&source.basis_column(j));
            if !target.contains(&image) {
                return Err(TropicalError::LatticeNotPreserved);
            }
        }
        Ok(TropicalHom { linear, source, target })
    }

    pub fn linear(&self) -> &QMatrix {
        &self.linear
    }

    pub fn source_lattice(&self) -> &Lattice {
        &self.source
    }

    pub fn target_lattice(&self) -> &Lattice {
        &self.target
    }

    pub fn as_affine_map(&self) -> AffineMap {
        AffineMap::new(self.linear.clone(), vec![Rat::zero(); self.linear.nrows()])
    }

    /// Evaluation on quotient points.
    pub fn apply(&self, x: &QuotientPoint) -> QuotientPoint {
        QuotientPoint::new(&self.target, &self.linear.matvec(x.representative()))
    }

    /// `self ∘ other` when the lattices line up.
    pub fn compose(&self, other: &TropicalHom) -> Result<TropicalHom, TropicalError> {
        if !other.target.same_lattice(&self.source) {
            return Err(TropicalError::BadParams("composition lattice mismatch".into()));
        }
        TropicalHom::new(
            self.linear.matmul(&other.linear),
            other.source.clone(),
            self.target.clone(),
        )
    }

    /// Block-diagonal product hom on the product tori.
    pub fn product(&self, other: &TropicalHom) -> TropicalHom {
        let r1 = self.linear.nrows();
        let c1 = self.linear.ncols();
        let r2 = other.linear.nrows();
        let c2 = other.linear.ncols();
        let mut l = QMatrix::zero(r1 + r2, c1 + c2);
        for i in 0..r1 {
            for j in 0..c1 {
                l.set(i, j, self.linear.get(i, j).clone());
            }
        }
        for i in 0..r2 {
            for j in 0..c2 {
                l.set(r1 + i, c1 + j, other.linear.get(i, j).clone());
            }
        }
        TropicalHom {
            linear: l,
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
        }
    }

    /// Finite-kernel shadow: when the linear part is invertible, the fiber
    /// cardinality of the quotient map, `|det L| · covol(Λ1) / covol(Λ2)`.
    pub fn fiber_cardinality(&self) -> Option<Rat> {
        use num::Signed;
        let det = self.linear.det().abs();
        if det.is_zero() {
            return None;
        }
        Some(det * self.source.covolume() / self.target.covolume())
    }
}

/// The difference map `(x_1, …, x_N) -> (x_2 - x_1, …, x_N - x_{N-1})`
/// on `(R^n/Λ)^N`; its kernel direction is the diagonal.
pub fn alpha_map(n: usize, lattice: &Lattice, copies: usize) -> Result<TropicalHom, TropicalError> {
    if copies < 2 {
        return Err(TropicalError::BadParams("need at least two factors".into()));
    }
    if lattice.rank() != n {
        return Err(TropicalError::DimensionMismatch { expected: n, got: lattice.rank() });
    }
    let mut l = QMatrix::zero((copies - 1) * n, copies * n);
    for block in 0..copies - 1 {
        for k in 0..n {
            l.set(block * n + k, block * n + k, Rat::from_integer(BigInt::from(-1)));
            l.set(block * n + k, (block + 1) * n + k, Rat::from_integer(BigInt::from(1)));
        }
    }
    // L · Λ^N ⊆ Λ^{N-1} holds because differences of lattice vectors are
    // lattice vectors; new() re-checks it anyway.
    TropicalHom::new(l, lattice.power(copies), lattice.power(copies - 1))
}

/// Whether the affine map is injective on `p`: the kernel of the linear
/// part meets the direction space of `p` trivially.
pub fn is_injective_on(map: &AffineMap, p: &Polytope) -> Result<bool, TropicalError> {
    if map.source_dim() != p.ambient_dim() {
        return Err(TropicalError::DimensionMismatch {
            expected: map.source_dim(),
            got: p.ambient_dim(),
        });
    }
    Ok(affine_image_dim(&map.linear, p) == p.dim())
}

/// Dimension of the affine image of `p` under a linear map: the rank of
/// the map restricted to the direction space of `p`.
pub fn affine_image_dim(linear: &QMatrix, p: &Polytope) -> usize {
    let dirs = p.direction_basis();
    if dirs.is_empty() {
        return 0;
    }
    let imgs: Vec<QVector> = dirs.iter().map(|d| linear.matvec(d)).collect();
    QMatrix::from_rows(imgs).rank()
}
