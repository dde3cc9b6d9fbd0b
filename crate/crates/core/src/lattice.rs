//! Full-rank rational lattices Λ ⊂ R^n with exact membership, canonical
//! fundamental-domain reduction, and bounded point enumeration.

use crate::linalg::{QMatrix, QVector};
use crate::rat::Rat;
use num::{BigInt, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: QMatrix,   // n x n, columns are the basis vectors
    inverse: QMatrix, // exact inverse of the basis
}

impl Lattice {
    /// Lattice spanned by the columns of `basis`. Panics unless `basis`
    /// is square and invertible.
    pub fn new(basis: QMatrix) -> Lattice {
        assert_eq!(basis.nrows(), basis.ncols(), "lattice basis must be square");
        let inverse = basis.inverse().expect("lattice basis must have full rank");
        Lattice { basis, inverse }
    }

    /// ℤ·g in R^1.
    pub fn scaled_integers(g: Rat) -> Lattice {
        Lattice::new(QMatrix::from_rows(vec![vec![g]]))
    }

    /// ℤ^n.
    pub fn standard(n: usize) -> Lattice {
        Lattice::new(QMatrix::identity(n))
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_column(&self, j: usize) -> QVector {
        self.basis.col(j)
    }

    /// |det(basis)|, the volume of the fundamental parallelepiped.
    pub fn covolume(&self) -> Rat {
        self.basis.det().abs()
    }

    /// Exact membership: solve and check integrality.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.inverse.matvec(x).iter().all(|c| c.is_integer())
    }

    /// Splits `x` as `rep + B z` with `rep` in the half-open fundamental
    /// parallelepiped `B · [0,1)^n` and `z` integral.
    pub fn reduce(&self, x: &[Rat]) -> (QVector, Vec<BigInt>) {
        let coords = self.inverse.matvec(x);
        let z: Vec<BigInt> = coords.iter().map(|c| c.floor().to_integer()).collect();
        let frac: QVector = coords
            .iter()
            .zip(&z)
            .map(|(c, f)| c - Rat::from_integer(f.clone()))
            .collect();
        (self.basis.matvec(&frac), z)
    }

    pub fn from_coords(&self, z: &[BigInt]) -> QVector {
        let as_rat: QVector = z.iter().map(|c| Rat::from_integer(c.clone())).collect();
        self.basis.matvec(&as_rat)
    }

    /// All lattice points inside the rational box `[lo, hi]`.
    pub fn points_in_box(&self, lo: &[Rat], hi: &[Rat]) -> Vec<QVector> {
        let n = self.rank();
        if (0..n).any(|i| lo[i] > hi[i]) {
            return Vec::new();
        }
        // Map the box corners through the inverse basis to bound the
        // integer coordinates.
        let mut zlo = vec![Rat::zero(); n];
        let mut zhi = vec![Rat::zero(); n];
        let mut first = true;
        let corners = 1usize << n;
        for mask in 0..corners {
            let corner: QVector = (0..n)
                .map(|i| if mask & (1 << i) != 0 { hi[i].clone() } else { lo[i].clone() })
                .collect();
            let z = self.inverse.matvec(&corner);
            for i in 0..n {
                if first || z[i] < zlo[i] {
                    zlo[i] = z[i].clone();
                }
                if first || z[i] > zhi[i] {
                    zhi[i] = z[i].clone();
                }
            }
            first = false;
        }
        let mins: Vec<BigInt> = zlo.iter().map(|x| x.ceil().to_integer()).collect();
        let maxs: Vec<BigInt> = zhi.iter().map(|x| x.floor().to_integer()).collect();

        let mut out = Vec::new();
        let mut cursor = mins.clone();
        if (0..n).any(|i| mins[i] > maxs[i]) {
            return out;
        }
        loop {
            let point = self.from_coords(&cursor);
            if (0..n).all(|i| point[i] >= lo[i] && point[i] <= hi[i]) {
                out.push(point);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                cursor[i] += 1;
                if cursor[i] <= maxs[i] {
                    break;
                }
                cursor[i] = mins[i].clone();
                i += 1;
            }
        }
    }

    /// Direct sum Λ₁ ⊕ Λ₂ (block-diagonal basis).
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n1 = self.rank();
        let n2 = other.rank();
        let mut b = QMatrix::zero(n1 + n2, n1 + n2);
        for i in 0..n1 {
            for j in 0..n1 {
                b.set(i, j, self.basis.get(i, j).clone());
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                b.set(n1 + i, n1 + j, other.basis.get(i, j).clone());
            }
        }
        Lattice::new(b)
    }

    /// N-fold direct sum Λ^N.
    pub fn power(&self, n: usize) -> Lattice {
        assert!(n >= 1);
        let mut out = self.clone();
        for _ in 1..n {
            out = out.direct_sum(self);
        }
        out
    }

    /// Set equality (mutual basis membership), independent of the chosen
    /// bases.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        self.rank() == other.rank()
            && (0..self.rank()).all(|j| other.contains(&self.basis_column(j)))
            && (0..other.rank()).all(|j| self.contains(&other.basis_column(j)))
    }
}

/// Point of R^n / Λ, canonicalized to the half-open fundamental
/// parallelepiped of the stored basis; equality is equality of canonical
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPoint {
    representative: QVector,
}

impl QuotientPoint {
    pub fn new(lattice: &Lattice, x: &[Rat]) -> QuotientPoint {
        QuotientPoint { representative: lattice.reduce(x).0 }
    }

    pub fn representative(&self) -> &QVector {
        &self.representative
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    #[test]
    fn membership_and_reduction() {
        let two_z = Lattice::scaled_integers(rint(2));
        assert!(two_z.contains(&[rint(4)]));
        assert!(!two_z.contains(&[rint(1)]));
        assert_eq!(two_z.covolume(), rint(2));

        let p = QuotientPoint::new(&two_z, &[rat(5, 2)]);
        assert_eq!(p.representative(), &vec![rat(1, 2)]);
        let q = QuotientPoint::new(&two_z, &[rat(9, 2)]);
        assert_eq!(p, q);
        let r = QuotientPoint::new(&two_z, &[rat(3, 2)]);
        assert_ne!(p, r);
    }

    #[test]
    fn box_enumeration() {
        let z2 = Lattice::standard(2);
        let pts = z2.points_in_box(&[rint(0), rint(0)], &[rint(1), rint(2)]);
        assert_eq!(pts.len(), 6);

        let skew = Lattice::new(QMatrix::from_int_rows(&[vec![1, 1], vec![0, 2]]));
        // Points a*(1,0) + b*(1,2): y even, x arbitrary given y.
        let pts = skew.points_in_box(&[rint(0), rint(0)], &[rint(2), rint(2)]);
        assert!(pts.contains(&vec![rint(1), rint(2)]));
        assert!(pts.iter().all(|p| (&p[1] / rint(2)).is_integer()));
    }

    #[test]
    fn sums_and_equality() {
        let a = Lattice::scaled_integers(rint(1));
        let b = Lattice::scaled_integers(rint(2));
        let s = a.direct_sum(&b);
        assert!(s.contains(&[rint(3), rint(4)]));
        assert!(!s.contains(&[rint(3), rint(1)]));
        assert_eq!(s.covolume(), rint(2));

        let alt = Lattice::new(QMatrix::from_int_rows(&[vec![-1]]));
        assert!(a.same_lattice(&alt));
        assert!(!a.same_lattice(&b));
    }
}
