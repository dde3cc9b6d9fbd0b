//! Combinatorial skeleton of a strictly semistable degeneration: strata,
//! canonical simplices in their own charts, chart-change incidence maps,
//! pullback subdivisions, and the non-degeneracy bookkeeping.
//!
//! Each canonical simplex carries its own chart `{u >= 0, Σu <= vpi}` in
//! `R^r`; charts are glued along faces by explicit affine maps supplied as
//! incidence data. A global embedding is never assumed.

use crate::linalg::QVector;
use crate::periodic::QuotientComplex;
use crate::polytope::{AffineMap, Halfspace, Polytope};
use crate::rat::{format_rat, Rat};
use crate::tropical::ExponentMap;
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("{0}")]
    BadParams(String),
    #[error("exponent maps of {sub} and {sup} disagree on the shared face")]
    InconsistentOnFaces { sub: String, sup: String },
    #[error("missing data for simplex {0}")]
    MissingData(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
}

/// Stratum of the special fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub id: String,
    pub dim: usize,
    pub label: Option<String>,
}

/// Canonical simplex attached to a stratum of codimension `r`; its chart
/// is the standard simplex `{u in R^r_{>=0} | Σu <= vpi}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSimplex {
    pub stratum_id: String,
    pub r: usize,
    pub vpi: Rat,
}

/// `sub`'s chart maps onto a closed face of `sup`'s chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceEdge {
    pub sub: String,
    pub sup: String,
    pub chart_map: AffineMap,
}

/// Abstract simplicial set of canonical simplices. Simplices are keyed by
/// their stratum id (one simplex per stratum).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonModel {
    pub total_dim: usize,
    pub strata: Vec<Stratum>,
    pub simplices: Vec<CanonicalSimplex>,
    pub incidence: Vec<IncidenceEdge>,
}

/// The standard simplex `{u in R^r_{>=0} | u_1 + … + u_r <= vpi}` with
/// `r + 1` vertices: the origin and `vpi · e_i`.
pub fn standard_simplex(r: usize, vpi: &Rat) -> Result<Polytope, SkeletonError> {
    if !vpi.is_positive() {
        return Err(SkeletonError::BadParams(format!(
            "vpi must be positive, got {}",
            format_rat(vpi)
        )));
    }
    if r == 0 {
        return Ok(Polytope::from_vertices(&[vec![]]).expect("point in R^0"));
    }
    let mut hs: Vec<Halfspace> = (0..r)
        .map(|i| {
            let mut normal = vec![0i64; r];
            normal[i] = 1;
            Halfspace::from_ints(normal, Rat::zero())
        })
        .collect();
    hs.push(Halfspace::from_ints(vec![-1; r], -vpi.clone()));
    Polytope::from_halfspaces(&hs, &[], r).map_err(|e| SkeletonError::BadParams(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkeletonViolation {
    UnknownStratum { simplex: String },
    DuplicateSimplex { stratum: String },
    DimensionSum { simplex: String, stratum_dim: usize, r: usize, total: usize },
    BadVpi { simplex: String },
    BadChartMap { sub: String, sup: String, reason: String },
    MissingFace { simplex: String, face_dim: usize },
    Disconnected,
}

impl std::fmt::Display for SkeletonViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SkeletonViolation::UnknownStratum { simplex } => {
                write!(f, "simplex {simplex} references an unknown stratum")
            }
            SkeletonViolation::DuplicateSimplex { stratum } => {
                write!(f, "stratum {stratum} carries more than one simplex")
            }
            SkeletonViolation::DimensionSum { simplex, stratum_dim, r, total } => write!(
                f,
                "simplex {simplex}: stratum dim {stratum_dim} + r {r} != total dim {total}"
            ),
            SkeletonViolation::BadVpi { simplex } => {
                write!(f, "simplex {simplex} has non-positive vpi")
            }
            SkeletonViolation::BadChartMap { sub, sup, reason } => {
                write!(f, "chart map {sub} -> {sup}: {reason}")
            }
            SkeletonViolation::MissingFace { simplex, face_dim } => write!(
                f,
                "simplex {simplex}: a closed face of dimension {face_dim} is not covered by incidence"
            ),
            SkeletonViolation::Disconnected => write!(f, "skeleton is not connected"),
        }
    }
}

impl SkeletonModel {
    pub fn stratum(&self, id: &str) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.id == id)
    }

    pub fn simplex(&self, stratum_id: &str) -> Option<&CanonicalSimplex> {
        self.simplices.iter().find(|s| s.stratum_id == stratum_id)
    }

    pub fn chart(&self, stratum_id: &str) -> Result<Polytope, SkeletonError> {
        let s = self
            .simplex(stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(stratum_id.to_string()))?;
        standard_simplex(s.r, &s.vpi)
    }

    /// Checks the incidence axioms; an empty report means the model is
    /// valid.
    pub fn validate(&self) -> Vec<SkeletonViolation> {
        let mut report = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for sx in &self.simplices {
            if !seen.insert(&sx.stratum_id) {
                report.push(SkeletonViolation::DuplicateSimplex { stratum: sx.stratum_id.clone() });
            }
            let Some(st) = self.stratum(&sx.stratum_id) else {
                report.push(SkeletonViolation::UnknownStratum { simplex: sx.stratum_id.clone() });
                continue;
            };
            if st.dim + sx.r != self.total_dim {
                report.push(SkeletonViolation::DimensionSum {
                    simplex: sx.stratum_id.clone(),
                    stratum_dim: st.dim,
                    r: sx.r,
                    total: self.total_dim,
                });
            }
            if !sx.vpi.is_positive() {
                report.push(SkeletonViolation::BadVpi { simplex: sx.stratum_id.clone() });
            }
        }
        if !report.is_empty() {
            return report;
        }

        for edge in &self.incidence {
            let (Some(sub), Some(sup)) = (self.simplex(&edge.sub), self.simplex(&edge.sup)) else {
                report.push(SkeletonViolation::BadChartMap {
                    sub: edge.sub.clone(),
                    sup: edge.sup.clone(),
                    reason: "unknown simplex".into(),
                });
                continue;
            };
            if sub.r >= sup.r {
                report.push(SkeletonViolation::BadChartMap {
                    sub: edge.sub.clone(),
                    sup: edge.sup.clone(),
                    reason: "incidence must strictly increase the simplex dimension".into(),
                });
                continue;
            }
            if edge.chart_map.source_dim() != sub.r || edge.chart_map.target_dim() != sup.r {
                report.push(SkeletonViolation::BadChartMap {
                    sub: edge.sub.clone(),
                    sup: edge.sup.clone(),
                    reason: "chart map shape mismatch".into(),
                });
                continue;
            }
            let sub_chart = standard_simplex(sub.r, &sub.vpi).expect("validated vpi");
            let sup_chart = standard_simplex(sup.r, &sup.vpi).expect("validated vpi");
            let image = sub_chart.apply_affine(&edge.chart_map).expect("shape checked");
            if image.dim() != sub.r {
                report.push(SkeletonViolation::BadChartMap {
                    sub: edge.sub.clone(),
                    sup: edge.sup.clone(),
                    reason: "chart map collapses the face".into(),
                });
                continue;
            }
            if !sup_chart.has_face(&image) {
                report.push(SkeletonViolation::BadChartMap {
                    sub: edge.sub.clone(),
                    sup: edge.sup.clone(),
                    reason: "image is not a closed face of the target chart".into(),
                });
            }
        }
        if !report.is_empty() {
            return report;
        }

        // Every proper closed face of every chart must be the image of an
        // incidence edge.
        for sx in &self.simplices {
            if sx.r == 0 {
                continue;
            }
            let chart = standard_simplex(sx.r, &sx.vpi).expect("validated vpi");
            for k in 0..sx.r {
                for face in chart.faces(k).expect("k <= dim") {
                    let covered = self.incidence.iter().any(|e| {
                        e.sup == sx.stratum_id && {
                            let sub = self.simplex(&e.sub).expect("validated");
                            let sub_chart =
                                standard_simplex(sub.r, &sub.vpi).expect("validated vpi");
                            sub_chart
                                .apply_affine(&e.chart_map)
                                .map(|img| img == face)
                                .unwrap_or(false)
                        }
                    });
                    if !covered {
                        report.push(SkeletonViolation::MissingFace {
                            simplex: sx.stratum_id.clone(),
                            face_dim: k,
                        });
                    }
                }
            }
        }

        // Connectivity of the union (single simplex is trivially connected).
        if self.simplices.len() > 1 {
            let ids: Vec<&str> = self.simplices.iter().map(|s| s.stratum_id.as_str()).collect();
            let index: BTreeMap<&str, usize> =
                ids.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let mut comp: Vec<usize> = (0..ids.len()).collect();
            fn find(comp: &mut Vec<usize>, i: usize) -> usize {
                if comp[i] != i {
                    let root = find(comp, comp[i]);
                    comp[i] = root;
                }
                comp[i]
            }
            for e in &self.incidence {
                if let (Some(&a), Some(&b)) = (index.get(e.sub.as_str()), index.get(e.sup.as_str()))
                {
                    let ra = find(&mut comp, a);
                    let rb = find(&mut comp, b);
                    comp[ra] = rb;
                }
            }
            let root0 = find(&mut comp, 0);
            if (1..ids.len()).any(|i| find(&mut comp, i) != root0) {
                report.push(SkeletonViolation::Disconnected);
            }
        }
        report
    }
}

/// Per-simplex exponent maps, keyed by stratum id.
pub type FaffMaps = BTreeMap<String, ExponentMap>;

/// A vertex of a subdivision, identified by the simplex whose chart
/// contains it in its relative interior, plus chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubdivisionVertex {
    pub owner: String,
    pub coords: QVector,
}

/// Γ-rational subdivision of the skeleton, stored chart by chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdividedSkeleton {
    pub base: SkeletonModel,
    /// Full face-closed decomposition of each chart simplex.
    pub cells: BTreeMap<String, Vec<Polytope>>,
    /// Deduplicated vertex list across charts.
    pub vertices: Vec<SubdivisionVertex>,
}

/// Pullback subdivision: each chart is cut into the preimages of the
/// target cells under its exponent map.
pub fn subdivide_skeleton(
    model: &SkeletonModel,
    fmaps: &FaffMaps,
    target: &QuotientComplex,
) -> Result<SubdividedSkeleton, SkeletonError> {
    let n = target.ambient_dim();
    for sx in &model.simplices {
        let f = fmaps
            .get(&sx.stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(sx.stratum_id.clone()))?;
        if f.source_dim() != sx.r || f.target_dim() != n {
            return Err(SkeletonError::InvalidData(format!(
                "exponent map shape for {} is {}x{}, expected {}x{}",
                sx.stratum_id,
                f.target_dim(),
                f.source_dim(),
                n,
                sx.r
            )));
        }
        if !f.constants_in(target.gamma()) {
            return Err(SkeletonError::InvalidData(format!(
                "exponent constants of {} leave the value group",
                sx.stratum_id
            )));
        }
    }
    // Exponent maps must commute with the face inclusions.
    for edge in &model.incidence {
        let f_sub = fmaps.get(&edge.sub).unwrap();
        let f_sup = fmaps.get(&edge.sup).unwrap();
        let composed = f_sup.as_affine_map().compose(&edge.chart_map);
        if composed != f_sub.as_affine_map() {
            return Err(SkeletonError::InconsistentOnFaces {
                sub: edge.sub.clone(),
                sup: edge.sup.clone(),
            });
        }
    }

    let mut cells: BTreeMap<String, Vec<Polytope>> = BTreeMap::new();
    for sx in &model.simplices {
        let chart = model.chart(&sx.stratum_id)?;
        let f = fmaps.get(&sx.stratum_id).unwrap();
        let mut pieces: Vec<Polytope> = Vec::new();
        for face in chart.all_faces() {
            for piece in pullback_pieces(&face, f, target) {
                if !pieces.contains(&piece) {
                    pieces.push(piece);
                }
            }
        }
        pieces.sort_by(|a, b| (a.dim(), a.vertices()).cmp(&(b.dim(), b.vertices())));
        validate_chart_decomposition(&chart, &pieces, &sx.stratum_id)?;
        cells.insert(sx.stratum_id.clone(), pieces);
    }

    // Deduplicate vertices: each vertex belongs to the simplex whose chart
    // holds it in the relative interior of a face, reached through the
    // incidence edge of that face.
    let mut vertices: BTreeSet<SubdivisionVertex> = BTreeSet::new();
    for sx in &model.simplices {
        let chart = model.chart(&sx.stratum_id)?;
        for piece in cells.get(&sx.stratum_id).unwrap() {
            if piece.dim() != 0 {
                continue;
            }
            let v = piece.vertices()[0].clone();
            vertices.insert(assign_vertex(model, sx, &chart, &v)?);
        }
    }

    Ok(SubdividedSkeleton {
        base: model.clone(),
        cells,
        vertices: vertices.into_iter().collect(),
    })
}

/// Pieces `face ∩ f^{-1}(cell + λ)` over all target cells and translates.
fn pullback_pieces(face: &Polytope, f: &ExponentMap, target: &QuotientComplex) -> Vec<Polytope> {
    let affine = f.as_affine_map();
    let image = face.apply_affine(&affine).expect("shape checked");
    let mut out = Vec::new();
    for (cell_id, lambda) in candidate_cells(&image, target) {
        let cell = target.cell(cell_id).translate(&lambda);
        if let Some(piece) = crate::polytope::preimage_under(face, &affine, &cell) {
            out.push(piece);
        }
    }
    out
}

/// `(cell id, λ)` pairs whose translate can meet `region`.
fn candidate_cells(region: &Polytope, target: &QuotientComplex) -> Vec<(usize, QVector)> {
    use crate::linalg::vec_sub;
    let (rlo, rhi) = region.bounding_box();
    let mut out = Vec::new();
    for id in 0..target.len() {
        let cell = target.cell(id);
        let (clo, chi) = cell.bounding_box();
        let lo = vec_sub(&rlo, &chi);
        let hi = vec_sub(&rhi, &clo);
        for lambda in target.lattice().points_in_box(&lo, &hi) {
            out.push((id, lambda));
        }
    }
    out
}

/// Decomposition axioms inside one chart: cover by volume, pairwise face
/// intersections, face closure.
fn validate_chart_decomposition(
    chart: &Polytope,
    pieces: &[Polytope],
    id: &str,
) -> Result<(), SkeletonError> {
    let top = chart.dim();
    let mut vol = Rat::zero();
    for p in pieces.iter().filter(|p| p.dim() == top) {
        vol += p.normalized_volume();
    }
    if top > 0 && vol != chart.normalized_volume() {
        return Err(SkeletonError::InvalidData(format!(
            "subdivision of {id} does not cover its chart"
        )));
    }
    for (i, a) in pieces.iter().enumerate() {
        for b in pieces.iter().skip(i + 1) {
            if let Some(meet) = a.intersect(b) {
                if !a.has_face(&meet) || !b.has_face(&meet) {
                    return Err(SkeletonError::InvalidData(format!(
                        "subdivision of {id} has a non-face intersection"
                    )));
                }
            }
        }
        for face in a.all_faces() {
            if !pieces.contains(&face) {
                return Err(SkeletonError::InvalidData(format!(
                    "subdivision of {id} is not face-closed"
                )));
            }
        }
    }
    Ok(())
}

/// Owner simplex and chart coordinates of one subdivision vertex.
fn assign_vertex(
    model: &SkeletonModel,
    sx: &CanonicalSimplex,
    chart: &Polytope,
    v: &QVector,
) -> Result<SubdivisionVertex, SkeletonError> {
    if chart.relint_contains(v) {
        return Ok(SubdivisionVertex { owner: sx.stratum_id.clone(), coords: v.clone() });
    }
    // Minimal face containing v, then the incidence edge of that face.
    let mut best: Option<Polytope> = None;
    for face in chart.all_faces() {
        if face.relint_contains(v) {
            best = Some(face);
            break; // all_faces is sorted by dimension, smallest first
        }
    }
    let face = best.ok_or_else(|| {
        SkeletonError::InvalidData(format!("vertex outside chart of {}", sx.stratum_id))
    })?;
    let mut candidates: Vec<(String, QVector)> = Vec::new();
    for edge in model.incidence.iter().filter(|e| e.sup == sx.stratum_id) {
        let sub = model
            .simplex(&edge.sub)
            .ok_or_else(|| SkeletonError::MissingData(edge.sub.clone()))?;
        let sub_chart = standard_simplex(sub.r, &sub.vpi)?;
        let image = sub_chart.apply_affine(&edge.chart_map).expect("validated");
        if image == face {
            // Solve chart_map(y) = v exactly.
            let rhs = crate::linalg::vec_sub(v, &edge.chart_map.translate);
            if let Some(y) = edge.chart_map.linear.solve(&rhs) {
                candidates.push((edge.sub.clone(), y));
            }
        }
    }
    candidates.sort();
    candidates
        .into_iter()
        .next()
        .map(|(owner, coords)| SubdivisionVertex { owner, coords })
        .ok_or_else(|| {
            SkeletonError::InvalidData(format!(
                "no incidence edge covers a face of {}",
                sx.stratum_id
            ))
        })
}

/// One row of the vertex/stratum correspondence: the stratum above a
/// subdivision vertex has dimension `dim S + dim Δ_S` and the torus rank
/// equals the owning simplex dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStratumRow {
    pub vertex: SubdivisionVertex,
    pub stratum_id: String,
    pub torsor_rank: usize,
    pub derived_dim: usize,
}

pub fn vertex_stratum_table(s: &SubdividedSkeleton) -> Result<Vec<VertexStratumRow>, SkeletonError> {
    let mut rows = Vec::new();
    for v in &s.vertices {
        let sx = s
            .base
            .simplex(&v.owner)
            .ok_or_else(|| SkeletonError::MissingData(v.owner.clone()))?;
        let st = s
            .base
            .stratum(&sx.stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(sx.stratum_id.clone()))?;
        rows.push(VertexStratumRow {
            vertex: v.clone(),
            stratum_id: st.id.clone(),
            torsor_rank: sx.r,
            derived_dim: st.dim + sx.r,
        });
    }
    Ok(rows)
}

/// Claimed image dimensions per simplex: `image_dim` is the dimension of
/// the affine image of the simplex, `abelian_image_dim` the dimension of
/// the image of its stratum in the abelian part (external input).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NondegEntry {
    pub image_dim: usize,
    pub abelian_image_dim: usize,
}

pub type NondegData = BTreeMap<String, NondegEntry>;

/// Simplices whose claimed data meets both non-degeneracy equalities:
/// full-dimensional affine image and full-dimensional abelian image.
pub fn nondegenerate_set(
    model: &SkeletonModel,
    nd: &NondegData,
) -> Result<BTreeSet<String>, SkeletonError> {
    let mut out = BTreeSet::new();
    for sx in &model.simplices {
        let entry = nd
            .get(&sx.stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(sx.stratum_id.clone()))?;
        let st = model
            .stratum(&sx.stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(sx.stratum_id.clone()))?;
        if entry.image_dim > sx.r || entry.abelian_image_dim > st.dim {
            return Err(SkeletonError::InvalidData(format!(
                "non-degeneracy data out of range for {}",
                sx.stratum_id
            )));
        }
        if entry.image_dim == sx.r && entry.abelian_image_dim == st.dim {
            out.insert(sx.stratum_id.clone());
        }
    }
    Ok(out)
}
