//! Exact convex polytope kernel: bounded Γ-rational polytopes with
//! cross-validated vertex and halfspace representations.
//!
//! Everything here is exact rational arithmetic. Hulls are computed by
//! brute-force facet enumeration inside the affine span, halfspace systems
//! are solved by Fourier-Motzkin elimination plus basic-solution
//! enumeration, and volumes are measured against the integral lattice of
//! the affine span so they stay rational and subdivision-additive.

use crate::linalg::{
    dot, dot_int, is_zero_vec, primitive_integer, primitive_integer_signed,
    span_saturation_basis, vec_add, vec_sub, QMatrix, QVector,
};
use crate::rat::{Rat, ValueGroup};
use itertools::Itertools;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("halfspace system has empty solution set")]
    Empty,
    #[error("face dimension {k} out of range for a {dim}-dimensional polytope")]
    BadDimension { k: usize, dim: usize },
    #[error("{0}")]
    BadParams(String),
}

/// Closed halfspace `{u | normal · u >= constant}` with a primitive
/// integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub constant: Rat,
}

impl Halfspace {
    /// Canonicalizes a rational inequality `normal · u >= constant`.
    /// Returns `None` for a zero normal.
    pub fn new(normal: &[Rat], constant: &Rat) -> Option<Halfspace> {
        let prim = primitive_integer(normal)?;
        let scale = scale_factor(normal, &prim);
        Some(Halfspace { normal: prim, constant: constant * scale })
    }

    pub fn from_ints(normal: Vec<i64>, constant: Rat) -> Halfspace {
        let as_rat: Vec<Rat> = normal.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
        Halfspace::new(&as_rat, &constant).expect("nonzero normal")
    }

    pub fn eval(&self, u: &[Rat]) -> Rat {
        dot_int(&self.normal, u)
    }

    pub fn satisfied(&self, u: &[Rat]) -> bool {
        self.eval(u) >= self.constant
    }

    /// The bounding hyperplane as an equation.
    pub fn boundary(&self) -> Equation {
        Equation::new(
            &self.normal.iter().map(|x| Rat::from_integer(x.clone())).collect::<Vec<_>>(),
            &self.constant,
        )
        .expect("nonzero normal")
    }
}

/// Hyperplane `{u | normal · u = constant}` with a primitive integer
/// normal whose first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Equation {
    pub normal: Vec<BigInt>,
    pub constant: Rat,
}

impl Equation {
    pub fn new(normal: &[Rat], constant: &Rat) -> Option<Equation> {
        let prim = primitive_integer_signed(normal)?;
        let scale = scale_factor(normal, &prim);
        Some(Equation { normal: prim, constant: constant * scale })
    }

    pub fn from_ints(normal: Vec<i64>, constant: Rat) -> Equation {
        let as_rat: Vec<Rat> = normal.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
        Equation::new(&as_rat, &constant).expect("nonzero normal")
    }

    pub fn eval(&self, u: &[Rat]) -> Rat {
        dot_int(&self.normal, u)
    }

    pub fn satisfied(&self, u: &[Rat]) -> bool {
        self.eval(u) == self.constant
    }
}

/// Positive factor `s` with `s * original = primitive`.
fn scale_factor(original: &[Rat], primitive: &[BigInt]) -> Rat {
    let idx = original.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    Rat::from_integer(primitive[idx].clone()) / &original[idx]
}

/// Affine map `u -> linear * u + translate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: QMatrix,
    pub translate: QVector,
}

impl AffineMap {
    pub fn new(linear: QMatrix, translate: QVector) -> AffineMap {
        assert_eq!(linear.nrows(), translate.len(), "affine map shape mismatch");
        AffineMap { linear, translate }
    }

    pub fn identity(n: usize) -> AffineMap {
        AffineMap::new(QMatrix::identity(n), vec![Rat::zero(); n])
    }

    pub fn source_dim(&self) -> usize {
        self.linear.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn apply(&self, u: &[Rat]) -> QVector {
        vec_add(&self.linear.matvec(u), &self.translate)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap::new(
            self.linear.matmul(&other.linear),
            vec_add(&self.linear.matvec(&other.translate), &self.translate),
        )
    }
}

/// Bounded convex polytope with exact dual representations.
///
/// The vertex list is minimal and sorted; the halfspace representation is
/// the canonical one: a primitive-integer equation basis for the affine
/// span plus one facet inequality per facet, its normal lying in the
/// direction space of the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<QVector>,
    facets: Vec<Halfspace>,
    equations: Vec<Equation>,
}

impl Polytope {
    /// Convex hull of a nonempty uniform-dimension point set.
    pub fn from_vertices(points: &[QVector]) -> Result<Polytope, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::BadParams("empty point list".into()));
        }
        let n = points[0].len();
        for p in points {
            if p.len() != n {
                return Err(GeometryError::DimensionMismatch { expected: n, got: p.len() });
            }
        }
        let mut pts: Vec<QVector> = points.to_vec();
        pts.sort();
        pts.dedup();

        let v0 = pts[0].clone();
        // Direction space basis from the RREF of the difference rows.
        let mut diff = QMatrix::from_rows(pts.iter().map(|p| vec_sub(p, &v0)).collect());
        let pivots = diff.rref();
        let d = pivots.len();
        let dir_rows: Vec<QVector> = (0..d).map(|i| diff.row(i).to_vec()).collect();

        let equations = span_equations(&dir_rows, n, &v0);

        if d == 0 {
            return Ok(Polytope {
                ambient_dim: n,
                dim: 0,
                vertices: vec![v0],
                facets: Vec::new(),
                equations,
            });
        }

        // Coordinates inside the span: y = L (u - v0) with L the left
        // inverse of the basis column matrix B.
        let b_cols = QMatrix::from_rows(dir_rows).transpose(); // n x d
        let left_inv = left_inverse(&b_cols); // d x n
        let ys: Vec<QVector> = pts.iter().map(|p| left_inv.matvec(&vec_sub(p, &v0))).collect();

        let span_facets = enumerate_facets(&ys, d)?;

        // A point is a vertex exactly when its active facet normals span.
        let mut vertex_idx = Vec::new();
        for (i, y) in ys.iter().enumerate() {
            let active: Vec<QVector> = span_facets
                .iter()
                .filter(|(a, c)| &dot(a, y) == c)
                .map(|(a, _)| a.clone())
                .collect();
            if !active.is_empty() && QMatrix::from_rows(active).rank() == d {
                vertex_idx.push(i);
            }
        }
        let vertices: Vec<QVector> = vertex_idx.iter().map(|&i| pts[i].clone()).collect();

        // Lift facet inequalities back to the ambient space; the lifted
        // normal L^T a lies in the direction space, which makes the facet
        // halfspace canonical for lower-dimensional polytopes too.
        let lift = left_inv.transpose(); // n x d
        let mut facets: Vec<Halfspace> = Vec::new();
        for (a, c) in &span_facets {
            let m_amb = lift.matvec(a);
            let c_amb = c + &dot(&m_amb, &v0);
            facets.push(Halfspace::new(&m_amb, &c_amb).expect("facet normal nonzero"));
        }
        facets.sort();
        facets.dedup();

        Ok(Polytope { ambient_dim: n, dim: d, vertices, facets, equations })
    }

    /// Bounded solution set of `halfspaces ∧ equations` in `R^ambient`.
    pub fn from_halfspaces(
        halfspaces: &[Halfspace],
        equations: &[Equation],
        ambient_dim: usize,
    ) -> Result<Polytope, GeometryError> {
        for h in halfspaces {
            if h.normal.len() != ambient_dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: ambient_dim,
                    got: h.normal.len(),
                });
            }
        }
        for e in equations {
            if e.normal.len() != ambient_dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: ambient_dim,
                    got: e.normal.len(),
                });
            }
        }

        // Solve the equations: u = u_p + N t.
        let (u_p, kernel_cols) = if equations.is_empty() {
            (vec![Rat::zero(); ambient_dim], QMatrix::identity(ambient_dim))
        } else {
            let eq_mat = QMatrix::from_rows(
                equations
                    .iter()
                    .map(|e| e.normal.iter().map(|x| Rat::from_integer(x.clone())).collect())
                    .collect(),
            );
            let rhs: Vec<Rat> = equations.iter().map(|e| e.constant.clone()).collect();
            let Some(part) = eq_mat.solve(&rhs) else {
                return Err(GeometryError::Empty);
            };
            let kernel = eq_mat.kernel_basis();
            let k = kernel.len();
            let mut cols = QMatrix::zero(ambient_dim, k);
            for (j, v) in kernel.iter().enumerate() {
                for i in 0..ambient_dim {
                    cols.set(i, j, v[i].clone());
                }
            }
            (part, cols)
        };
        let k = kernel_cols.ncols();

        // Substituted inequalities a · t >= b.
        let mut rows: Vec<(QVector, Rat)> = Vec::new();
        for h in halfspaces {
            let m_rat: QVector = h.normal.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let a: QVector = (0..k).map(|j| dot(&m_rat, &kernel_cols.col(j))).collect();
            let b = &h.constant - &dot(&m_rat, &u_p);
            if is_zero_vec(&a) {
                if b.is_positive() {
                    return Err(GeometryError::Empty);
                }
            } else {
                rows.push((a, b));
            }
        }

        if k == 0 {
            return Polytope::from_vertices(&[u_p]);
        }

        // Fourier-Motzkin: feasibility and per-coordinate bounds.
        for i in 0..k {
            match fm_coordinate_bounds(&rows, k, i)? {
                (Some(_), Some(_)) => {}
                _ => return Err(GeometryError::Unbounded),
            }
        }

        // Basic solutions: every vertex is the unique solution of k
        // linearly independent active inequalities.
        let mut t_vertices: Vec<QVector> = Vec::new();
        for subset in (0..rows.len()).combinations(k) {
            let m = QMatrix::from_rows(subset.iter().map(|&i| rows[i].0.clone()).collect());
            let b: Vec<Rat> = subset.iter().map(|&i| rows[i].1.clone()).collect();
            if m.rank() < k {
                continue;
            }
            let Some(t) = m.solve(&b) else { continue };
            if rows.iter().all(|(a, c)| dot(a, &t) >= *c) {
                t_vertices.push(t);
            }
        }
        t_vertices.sort();
        t_vertices.dedup();
        if t_vertices.is_empty() {
            return Err(GeometryError::Empty);
        }

        let points: Vec<QVector> = t_vertices
            .iter()
            .map(|t| vec_add(&kernel_cols.matvec(t), &u_p))
            .collect();
        let poly = Polytope::from_vertices(&points)?;
        debug_assert!(poly.vertices.iter().all(|v| {
            halfspaces.iter().all(|h| h.satisfied(v)) && equations.iter().all(|e| e.satisfied(v))
        }));
        Ok(poly)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn facet_halfspaces(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn span_equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    /// Membership in the closed polytope.
    pub fn contains(&self, u: &[Rat]) -> bool {
        u.len() == self.ambient_dim
            && self.equations.iter().all(|e| e.satisfied(u))
            && self.facets.iter().all(|h| h.satisfied(u))
    }

    /// Membership in the relative interior: span equations hold exactly and
    /// every facet inequality is strict.
    pub fn relint_contains(&self, u: &[Rat]) -> bool {
        u.len() == self.ambient_dim
            && self.equations.iter().all(|e| e.satisfied(u))
            && self.facets.iter().all(|h| h.eval(u) > h.constant)
    }

    /// Deterministic rational point in the relative interior: the vertex
    /// barycenter.
    pub fn rational_relint_point(&self) -> QVector {
        let n = self.ambient_dim;
        let mut acc = vec![Rat::zero(); n];
        for v in &self.vertices {
            acc = vec_add(&acc, v);
        }
        let count = Rat::from_integer(BigInt::from(self.vertices.len() as i64));
        acc.into_iter().map(|x| x / &count).collect()
    }

    /// All closed faces (including the polytope itself) as sorted vertex
    /// index sets together with their dimensions.
    pub fn face_index_sets(&self) -> Vec<(BTreeSet<usize>, usize)> {
        let full: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        sets.insert(full);
        let facet_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|h| {
                (0..self.vertices.len())
                    .filter(|&i| h.eval(&self.vertices[i]) == h.constant)
                    .collect()
            })
            .collect();
        for fs in &facet_sets {
            sets.insert(fs.clone());
        }
        // Close under intersection; intersections of faces are faces.
        loop {
            let mut added = false;
            let current: Vec<BTreeSet<usize>> = sets.iter().cloned().collect();
            for s in &current {
                for fs in &facet_sets {
                    let inter: BTreeSet<usize> = s.intersection(fs).cloned().collect();
                    if !inter.is_empty() && !sets.contains(&inter) {
                        sets.insert(inter);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        sets.into_iter()
            .map(|s| {
                let d = affine_rank(&s.iter().map(|&i| self.vertices[i].clone()).collect::<Vec<_>>());
                (s, d)
            })
            .collect()
    }

    /// All closed `k`-faces, each a valid polytope.
    pub fn faces(&self, k: usize) -> Result<Vec<Polytope>, GeometryError> {
        if k > self.dim {
            return Err(GeometryError::BadDimension { k, dim: self.dim });
        }
        if k == self.dim {
            return Ok(vec![self.clone()]);
        }
        let mut out = Vec::new();
        for (set, d) in self.face_index_sets() {
            if d == k {
                let pts: Vec<QVector> = set.iter().map(|&i| self.vertices[i].clone()).collect();
                out.push(Polytope::from_vertices(&pts).expect("face hull"));
            }
        }
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        Ok(out)
    }

    /// All closed faces of every dimension, including the polytope itself.
    pub fn all_faces(&self) -> Vec<Polytope> {
        let mut out = Vec::new();
        for (set, _) in self.face_index_sets() {
            let pts: Vec<QVector> = set.iter().map(|&i| self.vertices[i].clone()).collect();
            out.push(Polytope::from_vertices(&pts).expect("face hull"));
        }
        out.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        out
    }

    /// Whether `other` is a closed face of `self`.
    pub fn has_face(&self, other: &Polytope) -> bool {
        if other.ambient_dim != self.ambient_dim || other.dim > self.dim {
            return false;
        }
        self.face_index_sets().iter().any(|(set, _)| {
            set.len() == other.vertices.len()
                && set.iter().map(|&i| &self.vertices[i]).zip(&other.vertices).all(|(a, b)| a == b)
        })
    }

    /// Exact intersection; `None` when empty.
    pub fn intersect(&self, other: &Polytope) -> Option<Polytope> {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimension mismatch");
        let hs: Vec<Halfspace> =
            self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<Equation> =
            self.equations.iter().chain(&other.equations).cloned().collect();
        match Polytope::from_halfspaces(&hs, &eqs, self.ambient_dim) {
            Ok(p) => Some(p),
            Err(GeometryError::Empty) => None,
            Err(e) => unreachable!("intersection of bounded polytopes: {e}"),
        }
    }

    /// Image under an affine map (hull of mapped vertices).
    pub fn apply_affine(&self, map: &AffineMap) -> Result<Polytope, GeometryError> {
        if map.source_dim() != self.ambient_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: map.source_dim(),
                got: self.ambient_dim,
            });
        }
        let imgs: Vec<QVector> = self.vertices.iter().map(|v| map.apply(v)).collect();
        Polytope::from_vertices(&imgs)
    }

    /// Translate by `t`.
    pub fn translate(&self, t: &[Rat]) -> Polytope {
        assert_eq!(t.len(), self.ambient_dim);
        let vertices: Vec<QVector> = self.vertices.iter().map(|v| vec_add(v, t)).collect();
        let mut facets: Vec<Halfspace> = self
            .facets
            .iter()
            .map(|h| Halfspace { normal: h.normal.clone(), constant: &h.constant + dot_int(&h.normal, t) })
            .collect();
        facets.sort();
        let mut equations: Vec<Equation> = self
            .equations
            .iter()
            .map(|e| Equation { normal: e.normal.clone(), constant: &e.constant + dot_int(&e.normal, t) })
            .collect();
        equations.sort();
        Polytope { ambient_dim: self.ambient_dim, dim: self.dim, vertices, facets, equations }
    }

    /// Cartesian product `self × other`, assembled directly: vertices are
    /// the pairs, facets and equations are the zero-padded ones of the
    /// factors. This reproduces exactly the canonical representation the
    /// hull constructor would compute (the direction space splits as a
    /// coordinate direct sum, so canonical facet normals and the RREF
    /// equation basis are blockwise).
    pub fn product(&self, other: &Polytope) -> Polytope {
        let n1 = self.ambient_dim;
        let n2 = other.ambient_dim;
        let mut vertices: Vec<QVector> = self
            .vertices
            .iter()
            .cartesian_product(&other.vertices)
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        vertices.sort();

        let pad_left = |normal: &[BigInt]| -> Vec<BigInt> {
            normal.iter().cloned().chain(std::iter::repeat(BigInt::zero()).take(n2)).collect()
        };
        let pad_right = |normal: &[BigInt]| -> Vec<BigInt> {
            std::iter::repeat(BigInt::zero()).take(n1).chain(normal.iter().cloned()).collect()
        };
        let mut facets: Vec<Halfspace> = self
            .facets
            .iter()
            .map(|h| Halfspace { normal: pad_left(&h.normal), constant: h.constant.clone() })
            .chain(other.facets.iter().map(|h| Halfspace {
                normal: pad_right(&h.normal),
                constant: h.constant.clone(),
            }))
            .collect();
        facets.sort();
        let mut equations: Vec<Equation> = self
            .equations
            .iter()
            .map(|e| Equation { normal: pad_left(&e.normal), constant: e.constant.clone() })
            .chain(other.equations.iter().map(|e| Equation {
                normal: pad_right(&e.normal),
                constant: e.constant.clone(),
            }))
            .collect();
        equations.sort();

        Polytope {
            ambient_dim: n1 + n2,
            dim: self.dim + other.dim,
            vertices,
            facets,
            equations,
        }
    }

    /// Difference body `self - self` (hull of all vertex differences).
    pub fn difference_body(&self) -> Polytope {
        let points: Vec<QVector> = self
            .vertices
            .iter()
            .cartesian_product(&self.vertices)
            .map(|(a, b)| vec_sub(a, b))
            .collect();
        Polytope::from_vertices(&points).expect("difference body hull")
    }

    /// Componentwise bounding box `(min, max)` of the vertex set.
    pub fn bounding_box(&self) -> (QVector, QVector) {
        let n = self.ambient_dim;
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for i in 0..n {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// Rational basis of the direction space `span(P - P)` (rows).
    pub fn direction_basis(&self) -> Vec<QVector> {
        let v0 = &self.vertices[0];
        let mut diff = QMatrix::from_rows(
            self.vertices.iter().map(|p| vec_sub(p, v0)).collect(),
        );
        let pivots = diff.rref();
        (0..pivots.len()).map(|i| diff.row(i).to_vec()).collect()
    }

    /// `dim(P)`-dimensional volume against the integral lattice of the
    /// affine span. Zero-dimensional polytopes have volume 1 by convention.
    pub fn normalized_volume(&self) -> Rat {
        let d = self.dim;
        if d == 0 {
            return Rat::one();
        }
        let v0 = &self.vertices[0];
        let columns: Vec<QVector> = self.vertices.iter().map(|v| vec_sub(v, v0)).collect();
        let w_cols = span_saturation_basis(&columns, self.ambient_dim);
        assert_eq!(w_cols.len(), d, "saturation basis rank mismatch");
        let mut w = QMatrix::zero(self.ambient_dim, d);
        for (j, col) in w_cols.iter().enumerate() {
            for i in 0..self.ambient_dim {
                w.set(i, j, Rat::from_integer(col[i].clone()));
            }
        }
        let w_left = left_inverse(&w);
        let lattice_coords: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| w_left.matvec(&vec_sub(v, v0)))
            .collect();

        let faces = self.face_index_sets();
        let full: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let simplices = pulling_triangulation(&faces, &full, d);

        let mut factorial = Rat::one();
        for i in 2..=d {
            factorial *= Rat::from_integer(BigInt::from(i as i64));
        }
        let mut vol = Rat::zero();
        for simplex in simplices {
            let base = &lattice_coords[simplex[0]];
            let m = QMatrix::from_rows(
                simplex[1..]
                    .iter()
                    .map(|&i| vec_sub(&lattice_coords[i], base))
                    .collect(),
            );
            vol += m.det().abs();
        }
        vol / factorial
    }

    /// Γ-rationality: with canonical (primitive-normal) halfspaces this is
    /// membership of every facet and span-equation constant in Γ.
    pub fn is_gamma_rational(&self, gamma: &ValueGroup) -> bool {
        self.facets.iter().all(|h| gamma.contains(&h.constant))
            && self.equations.iter().all(|e| gamma.contains(&e.constant))
    }
}

/// Canonical primitive-integer equations cutting out the affine span
/// `v0 + rowspace(dir_rows)`.
fn span_equations(dir_rows: &[QVector], n: usize, v0: &[Rat]) -> Vec<Equation> {
    let kernel: Vec<QVector> = if dir_rows.is_empty() {
        (0..n)
            .map(|i| {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::one();
                e
            })
            .collect()
    } else {
        QMatrix::from_rows(dir_rows.to_vec()).kernel_basis()
    };
    let mut eqs: Vec<Equation> = kernel
        .iter()
        .map(|m| {
            let c = dot(m, v0);
            Equation::new(m, &c).expect("kernel vector nonzero")
        })
        .collect();
    eqs.sort();
    eqs
}

/// Facets of the full-dimensional hull of `ys ⊂ Q^d`, as inward
/// inequalities `(a, c)` with primitive integer `a`.
fn enumerate_facets(ys: &[QVector], d: usize) -> Result<Vec<(QVector, Rat)>, GeometryError> {
    let mut facets: BTreeSet<(Vec<BigInt>, Rat)> = BTreeSet::new();
    for subset in (0..ys.len()).combinations(d) {
        let base = &ys[subset[0]];
        let normal = if d == 1 {
            vec![Rat::one()]
        } else {
            let diffs = QMatrix::from_rows(
                subset[1..].iter().map(|&i| vec_sub(&ys[i], base)).collect(),
            );
            if diffs.rank() != d - 1 {
                continue;
            }
            let kernel = diffs.kernel_basis();
            debug_assert_eq!(kernel.len(), 1);
            kernel.into_iter().next().unwrap()
        };
        let c = dot(&normal, base);
        let mut has_above = false;
        let mut has_below = false;
        for y in ys {
            let v = dot(&normal, y);
            if v > c {
                has_above = true;
            } else if v < c {
                has_below = true;
            }
            if has_above && has_below {
                break;
            }
        }
        let (a_oriented, c_oriented) = if has_above && has_below {
            continue;
        } else if has_below {
            (normal.iter().map(|x| -x).collect::<Vec<Rat>>(), -c)
        } else {
            (normal, c)
        };
        let prim = primitive_integer(&a_oriented).expect("facet normal nonzero");
        let scale = scale_factor(&a_oriented, &prim);
        facets.insert((prim, &c_oriented * scale));
    }
    if facets.is_empty() {
        return Err(GeometryError::BadParams("degenerate facet enumeration".into()));
    }
    Ok(facets
        .into_iter()
        .map(|(a, c)| (a.into_iter().map(Rat::from_integer).collect(), c))
        .collect())
}

/// Exact preimage `domain ∩ f^{-1}(cell)` of a polytope under an affine
/// map, by pulling the halfspace representation of `cell` back through
/// `f`. Returns `None` when the preimage is empty.
pub fn preimage_under(domain: &Polytope, f: &AffineMap, cell: &Polytope) -> Option<Polytope> {
    assert_eq!(f.source_dim(), domain.ambient_dim(), "preimage domain mismatch");
    assert_eq!(f.target_dim(), cell.ambient_dim(), "preimage target mismatch");
    let mut hs: Vec<Halfspace> = domain.facet_halfspaces().to_vec();
    let mut eqs: Vec<Equation> = domain.span_equations().to_vec();
    let lt = f.linear.transpose();
    let pull = |normal: &[BigInt]| -> QVector {
        let as_rat: QVector = normal.iter().map(|x| Rat::from_integer(x.clone())).collect();
        lt.matvec(&as_rat)
    };
    for h in cell.facet_halfspaces() {
        let a = pull(&h.normal);
        let b = &h.constant - dot_int(&h.normal, &f.translate);
        match Halfspace::new(&a, &b) {
            Some(hh) => hs.push(hh),
            // Constraint is constant on the source: decide it directly.
            None if b.is_positive() => return None,
            None => {}
        }
    }
    for e in cell.span_equations() {
        let a = pull(&e.normal);
        let b = &e.constant - dot_int(&e.normal, &f.translate);
        match Equation::new(&a, &b) {
            Some(ee) => eqs.push(ee),
            None if !b.is_zero() => return None,
            None => {}
        }
    }
    match Polytope::from_halfspaces(&hs, &eqs, domain.ambient_dim()) {
        Ok(p) => Some(p),
        Err(GeometryError::Empty) => None,
        Err(e) => unreachable!("preimage inside a bounded domain: {e}"),
    }
}

/// Fourier-Motzkin: eliminates every coordinate of `a · t >= b` except
/// `keep` and reads off the exact bounds of the kept coordinate. Returns
/// `Err(Empty)` when the system is infeasible; a missing bound means the
/// coordinate is unbounded on the solution set.
fn fm_coordinate_bounds(
    rows: &[(QVector, Rat)],
    k: usize,
    keep: usize,
) -> Result<(Option<Rat>, Option<Rat>), GeometryError> {
    let mut sys: Vec<(QVector, Rat)> = rows.to_vec();
    for j in 0..k {
        if j != keep {
            sys = fm_eliminate(&sys, j)?;
        }
    }
    let mut lo: Option<Rat> = None;
    let mut up: Option<Rat> = None;
    for (a, b) in &sys {
        let c = &a[keep];
        if c.is_zero() {
            if b.is_positive() {
                return Err(GeometryError::Empty);
            }
        } else if c.is_positive() {
            let bound = b / c;
            lo = Some(lo.map_or(bound.clone(), |x: Rat| x.max(bound)));
        } else {
            let bound = b / c;
            up = Some(up.map_or(bound.clone(), |x: Rat| x.min(bound)));
        }
    }
    if let (Some(l), Some(u)) = (&lo, &up) {
        if l > u {
            return Err(GeometryError::Empty);
        }
    }
    Ok((lo, up))
}

/// One Fourier-Motzkin elimination step on `a · t >= b` rows.
fn fm_eliminate(
    sys: &[(QVector, Rat)],
    j: usize,
) -> Result<Vec<(QVector, Rat)>, GeometryError> {
    let mut kept: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |a: QVector, b: Rat, out: &mut Vec<(QVector, Rat)>| -> Result<(), GeometryError> {
        if is_zero_vec(&a) {
            if b.is_positive() {
                return Err(GeometryError::Empty);
            }
            return Ok(());
        }
        let mut joint = a.clone();
        joint.push(b.clone());
        let key = primitive_integer(&joint).expect("nonzero row");
        if kept.insert(key) {
            out.push((a, b));
        }
        Ok(())
    };
    let pos: Vec<&(QVector, Rat)> = sys.iter().filter(|(a, _)| a[j].is_positive()).collect();
    let neg: Vec<&(QVector, Rat)> = sys.iter().filter(|(a, _)| a[j].is_negative()).collect();
    for (a, b) in sys.iter().filter(|(a, _)| a[j].is_zero()) {
        push(a.clone(), b.clone(), &mut out)?;
    }
    for (ap, bp) in &pos {
        for (an, bn) in &neg {
            // |an_j| * (pos row) + |ap_j| * (neg row) cancels coordinate j.
            let wp = -an[j].clone();
            let wn = ap[j].clone();
            let a: QVector = ap
                .iter()
                .zip(an.iter())
                .map(|(x, y)| &wp * x + &wn * y)
                .collect();
            let b = &wp * bp + &wn * bn;
            push(a, b, &mut out)?;
        }
    }
    Ok(out)
}

/// `(B^T B)^{-1} B^T` for a full-column-rank matrix `B`.
fn left_inverse(b: &QMatrix) -> QMatrix {
    let bt = b.transpose();
    let gram = bt.matmul(b);
    gram.inverse().expect("full column rank").matmul(&bt)
}

fn affine_rank(points: &[QVector]) -> usize {
    let v0 = &points[0];
    QMatrix::from_rows(points.iter().map(|p| vec_sub(p, v0)).collect()).rank()
}

/// Pulling triangulation of a face (given by its vertex index set) within
/// a precomputed face lattice. Each returned simplex is a `(dim+1)`-tuple
/// of vertex indices.
fn pulling_triangulation(
    faces: &[(BTreeSet<usize>, usize)],
    face: &BTreeSet<usize>,
    dim: usize,
) -> Vec<Vec<usize>> {
    if face.len() == dim + 1 {
        return vec![face.iter().cloned().collect()];
    }
    let apex = *face.iter().next().unwrap();
    let mut simplices = Vec::new();
    for (g, gd) in faces {
        if *gd + 1 == dim && g.is_subset(face) && !g.contains(&apex) {
            for mut s in pulling_triangulation(faces, g, *gd) {
                s.insert(0, apex);
                simplices.push(s);
            }
        }
    }
    simplices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn qv(coords: &[i64]) -> QVector {
        coords.iter().map(|&x| rint(x)).collect()
    }

    fn triangle() -> Polytope {
        Polytope::from_vertices(&[qv(&[0, 0]), qv(&[1, 0]), qv(&[0, 1])]).unwrap()
    }

    fn unit_square() -> Polytope {
        Polytope::from_vertices(&[qv(&[0, 0]), qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1])]).unwrap()
    }

    #[test]
    fn hull_of_standard_simplex() {
        let t = triangle();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.vertices().len(), 3);
        assert_eq!(t.facet_halfspaces().len(), 3);
        assert!(t.span_equations().is_empty());
    }

    #[test]
    fn hull_drops_collinear_midpoint() {
        let p = Polytope::from_vertices(&[
            qv(&[0, 0]),
            qv(&[1, 1]),
            vec![rat(1, 2), rat(1, 2)],
        ])
        .unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices(), &[qv(&[0, 0]), qv(&[1, 1])]);
    }

    #[test]
    fn hull_drops_interior_point_on_line() {
        let p = Polytope::from_vertices(&[vec![rint(0)], vec![rint(1)], vec![rat(1, 3)]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices(), &[vec![rint(0)], vec![rint(1)]]);
    }

    #[test]
    fn hulls_reject_bad_input() {
        assert!(matches!(
            Polytope::from_vertices(&[]),
            Err(GeometryError::BadParams(_))
        ));
        assert!(matches!(
            Polytope::from_vertices(&[qv(&[0, 0]), qv(&[1])]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn halfspaces_triangle() {
        let hs = vec![
            Halfspace::from_ints(vec![1, 0], rint(0)),
            Halfspace::from_ints(vec![0, 1], rint(0)),
            Halfspace::from_ints(vec![-1, -1], rint(-1)),
        ];
        let p = Polytope::from_halfspaces(&hs, &[], 2).unwrap();
        assert_eq!(p, triangle());
    }

    #[test]
    fn halfspaces_unbounded_and_empty() {
        let hs = vec![Halfspace::from_ints(vec![1], rint(0))];
        assert_eq!(
            Polytope::from_halfspaces(&hs, &[], 1).unwrap_err(),
            GeometryError::Unbounded
        );
        let hs = vec![
            Halfspace::from_ints(vec![1], rint(1)),
            Halfspace::from_ints(vec![-1], rint(0)),
        ];
        assert_eq!(Polytope::from_halfspaces(&hs, &[], 1).unwrap_err(), GeometryError::Empty);
    }

    #[test]
    fn square_faces() {
        let s = unit_square();
        assert_eq!(s.faces(0).unwrap().len(), 4);
        assert_eq!(s.faces(1).unwrap().len(), 4);
        assert_eq!(s.faces(2).unwrap().len(), 1);
        assert!(s.faces(3).is_err());
        assert_eq!(triangle().faces(1).unwrap().len(), 3);
    }

    #[test]
    fn relint_membership() {
        let seg = Polytope::from_vertices(&[vec![rint(0)], vec![rint(1)]]).unwrap();
        assert!(seg.relint_contains(&[rat(1, 2)]));
        assert!(!seg.relint_contains(&[rint(0)]));

        // Segment embedded in the plane along y = 0.
        let seg2 = Polytope::from_vertices(&[qv(&[0, 0]), qv(&[1, 0])]).unwrap();
        assert!(seg2.relint_contains(&[rat(1, 2), rint(0)]));
        assert!(!seg2.relint_contains(&[rat(1, 2), rat(1, 7)]));
    }

    #[test]
    fn relint_point_is_barycenter() {
        assert_eq!(triangle().rational_relint_point(), vec![rat(1, 3), rat(1, 3)]);
        let seg = Polytope::from_vertices(&[vec![rint(0)], vec![rint(1)]]).unwrap();
        assert_eq!(seg.rational_relint_point(), vec![rat(1, 2)]);
        let pt = Polytope::from_vertices(&[vec![rat(2, 7)]]).unwrap();
        assert_eq!(pt.rational_relint_point(), vec![rat(2, 7)]);
    }

    #[test]
    fn intersections() {
        let a = Polytope::from_vertices(&[vec![rint(0)], vec![rint(1)]]).unwrap();
        let b = Polytope::from_vertices(&[vec![rint(1)], vec![rint(2)]]).unwrap();
        let c = Polytope::from_vertices(&[vec![rint(2)], vec![rint(3)]]).unwrap();
        let meet = a.intersect(&b).unwrap();
        assert!(meet.is_point());
        assert_eq!(meet.vertices()[0], vec![rint(1)]);
        assert!(a.intersect(&c).is_none());
    }

    #[test]
    fn clipped_segment_through_square() {
        // Oracle for the 2-d instance: clip the segment (-1,1/2)..(2,1/2)
        // against each square edge by hand. It enters at x=0 and leaves at
        // x=1 with y fixed, so the expected vertices are (0,1/2),(1,1/2).
        let seg = Polytope::from_vertices(&[
            vec![rint(-1), rat(1, 2)],
            vec![rint(2), rat(1, 2)],
        ])
        .unwrap();
        let clipped = unit_square().intersect(&seg).unwrap();
        assert_eq!(clipped.dim(), 1);
        assert_eq!(
            clipped.vertices(),
            &[vec![rint(0), rat(1, 2)], vec![rint(1), rat(1, 2)]]
        );
    }

    #[test]
    fn affine_images() {
        let t = triangle();
        let id = AffineMap::identity(2);
        assert_eq!(t.apply_affine(&id).unwrap(), t);

        let proj = AffineMap::new(QMatrix::from_int_rows(&[vec![1, 0]]), vec![rint(0)]);
        let img = unit_square().apply_affine(&proj).unwrap();
        assert_eq!(img.dim(), 1);
        assert_eq!(img.vertices(), &[vec![rint(0)], vec![rint(1)]]);

        // Diagonal collapse (u1, u2) -> u2 - u1 on the diagonal segment.
        let diag = Polytope::from_vertices(&[qv(&[0, 0]), qv(&[1, 1])]).unwrap();
        let alpha = AffineMap::new(QMatrix::from_int_rows(&[vec![-1, 1]]), vec![rint(0)]);
        let img = diag.apply_affine(&alpha).unwrap();
        assert!(img.is_point());
        assert_eq!(img.vertices()[0], vec![rint(0)]);
    }

    #[test]
    fn lattice_normalized_volume() {
        // Oracle: the primitive direction of (2,2) is (1,1), and the segment
        // is 2 lattice steps long.
        let seg = Polytope::from_vertices(&[qv(&[0, 0]), qv(&[2, 2])]).unwrap();
        assert_eq!(seg.normalized_volume(), rint(2));
        assert_eq!(unit_square().normalized_volume(), rint(1));
        let pt = Polytope::from_vertices(&[qv(&[5, 7])]).unwrap();
        assert_eq!(pt.normalized_volume(), rint(1));
        assert_eq!(triangle().normalized_volume(), rat(1, 2));
    }

    #[test]
    fn gamma_rationality() {
        let g = ValueGroup::discrete(rat(1, 2));
        let seg = Polytope::from_vertices(&[vec![rint(0)], vec![rat(3, 2)]]).unwrap();
        assert!(seg.is_gamma_rational(&g));
        let seg = Polytope::from_vertices(&[vec![rint(0)], vec![rat(1, 3)]]).unwrap();
        assert!(!seg.is_gamma_rational(&g));
        assert!(seg.is_gamma_rational(&ValueGroup::full()));
    }

    #[test]
    fn roundtrip_and_euler() {
        for p in [triangle(), unit_square()] {
            let back =
                Polytope::from_halfspaces(p.facet_halfspaces(), p.span_equations(), 2).unwrap();
            assert_eq!(back, p);
            let mut euler = 0i64;
            for k in 0..=p.dim() {
                let count = p.faces(k).unwrap().len() as i64;
                euler += if k % 2 == 0 { count } else { -count };
            }
            assert_eq!(euler, 1);
        }
    }

    #[test]
    fn product_and_difference_body() {
        let seg = Polytope::from_vertices(&[vec![rint(0)], vec![rint(1)]]).unwrap();
        let sq = seg.product(&seg);
        assert_eq!(sq, unit_square());
        let diff = seg.difference_body();
        assert_eq!(diff.vertices(), &[vec![rint(-1)], vec![rint(1)]]);

        // The direct product representation matches a fresh hull, fields
        // and all, including a lower-dimensional factor.
        let embedded = Polytope::from_vertices(&[qv(&[0, 1]), qv(&[2, 1])]).unwrap();
        let prod = embedded.product(&triangle());
        let hull = Polytope::from_vertices(
            &embedded
                .vertices()
                .iter()
                .flat_map(|a| {
                    triangle().vertices().iter().map(move |b| {
                        a.iter().chain(b.iter()).cloned().collect::<Vec<_>>()
                    }).collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(prod, hull);
    }
}
