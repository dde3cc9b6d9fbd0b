//! Polytopal measures: finite nonnegative combinations of Lebesgue
//! push-outs of cells of a quotient complex. Push-forward along injective
//! piecewise-affine maps transports weights by exact lattice-normalized
//! volume ratios, so total mass is conserved as a rational identity.

use crate::lattice::Lattice;
use crate::periodic::QuotientComplex;
use crate::polytope::{preimage_under, AffineMap, Polytope};
use crate::rat::Rat;
use crate::skeleton::{nondegenerate_set, FaffMaps, NondegData, SkeletonError, SkeletonModel};
use crate::tropical::affine_image_dim;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("cell {0} does not belong to the carrier")]
    UnknownCell(usize),
    #[error("measures live on different carriers")]
    CarrierMismatch,
    #[error("map collapses the dimension of positive-weight cell {cell}")]
    NonInjectivePiece { cell: usize },
    #[error("target complex does not subdivide the image of cell {cell}")]
    TargetNotSubdivisional { cell: usize },
    #[error("measure is not expressible on the given decomposition")]
    NotExpressible,
    #[error("image of simplex {0} is not a union of cells of the target")]
    NotSubdivisional(String),
    #[error("weight supplied for degenerate simplex {0}")]
    DegenerateWeighted(String),
    #[error("weight for {0} must be positive")]
    BadWeight(String),
    #[error("no piecewise map supplied for positive-weight cell {0}")]
    MissingPiece(usize),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error("{0}")]
    Invalid(String),
}

/// Weighted sum `Σ w_σ δ_σ` over cells of a quotient complex; only
/// positive weights are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopalMeasure {
    carrier: QuotientComplex,
    terms: BTreeMap<usize, Rat>,
}

impl PolytopalMeasure {
    /// Push-out of the Lebesgue measure on one cell: a single term of
    /// weight 1, with total mass the lattice-normalized volume.
    pub fn delta(cell: usize, carrier: &QuotientComplex) -> Result<PolytopalMeasure, MeasureError> {
        if cell >= carrier.len() {
            return Err(MeasureError::UnknownCell(cell));
        }
        let mut terms = BTreeMap::new();
        terms.insert(cell, Rat::one());
        Ok(PolytopalMeasure { carrier: carrier.clone(), terms })
    }

    pub fn zero(carrier: &QuotientComplex) -> PolytopalMeasure {
        PolytopalMeasure { carrier: carrier.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms(
        carrier: &QuotientComplex,
        terms: &[(usize, Rat)],
    ) -> Result<PolytopalMeasure, MeasureError> {
        let mut map = BTreeMap::new();
        for (cell, w) in terms {
            if *cell >= carrier.len() {
                return Err(MeasureError::UnknownCell(*cell));
            }
            if w.is_negative() {
                return Err(MeasureError::Invalid("negative weight".into()));
            }
            if !w.is_zero() {
                *map.entry(*cell).or_insert_with(Rat::zero) += w;
            }
        }
        Ok(PolytopalMeasure { carrier: carrier.clone(), terms: map })
    }

    pub fn carrier(&self) -> &QuotientComplex {
        &self.carrier
    }

    /// Positive terms, sorted by cell id.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn weight(&self, cell: usize) -> Rat {
        self.terms.get(&cell).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total mass `Σ w_σ · vol(σ)`.
    pub fn mass(&self) -> Rat {
        self.terms
            .iter()
            .fold(Rat::zero(), |acc, (cell, w)| acc + w * self.carrier.cell(*cell).normalized_volume())
    }

    pub fn scale(&self, c: &Rat) -> Result<PolytopalMeasure, MeasureError> {
        if c.is_negative() {
            return Err(MeasureError::Invalid("negative scale".into()));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            for (cell, w) in &self.terms {
                terms.insert(*cell, w * c);
            }
        }
        Ok(PolytopalMeasure { carrier: self.carrier.clone(), terms })
    }

    /// Termwise nonnegative combination over a common carrier.
    pub fn combine(parts: &[(Rat, PolytopalMeasure)]) -> Result<PolytopalMeasure, MeasureError> {
        let Some(((_, first), rest)) = parts.split_first() else {
            return Err(MeasureError::Invalid("empty combination".into()));
        };
        let carrier = first.carrier.clone();
        let mut terms: BTreeMap<usize, Rat> = BTreeMap::new();
        for (c, m) in std::iter::once(&parts[0]).chain(rest.iter()) {
            if c.is_negative() {
                return Err(MeasureError::Invalid("negative coefficient".into()));
            }
            if m.carrier != carrier {
                return Err(MeasureError::CarrierMismatch);
            }
            for (cell, w) in &m.terms {
                let contribution = c * w;
                if !contribution.is_zero() {
                    *terms.entry(*cell).or_insert_with(Rat::zero) += contribution;
                }
            }
        }
        terms.retain(|_, w| !w.is_zero());
        Ok(PolytopalMeasure { carrier, terms })
    }

    /// Product measure on the product torus; mass is multiplicative.
    pub fn product(&self, other: &PolytopalMeasure) -> PolytopalMeasure {
        let carrier = self.carrier.product(&other.carrier);
        let mut terms = BTreeMap::new();
        for (a, wa) in &self.terms {
            for (b, wb) in &other.terms {
                let cell = self
                    .carrier
                    .cell(*a)
                    .product(other.carrier.cell(*b));
                let id = carrier.find_cell(&cell).expect("product cell in product complex");
                terms.insert(id, wa * wb);
            }
        }
        PolytopalMeasure { carrier, terms }
    }

    /// Re-expression of the measure on a finer decomposition of its
    /// support: each positive-weight cell must be a union of `sigma`
    /// cells, and its weight transfers unchanged to the equal-dimensional
    /// pieces.
    pub fn reexpress(&self, sigma: &QuotientComplex) -> Result<PolytopalMeasure, MeasureError> {
        if !sigma.lattice().same_lattice(self.carrier.lattice()) {
            return Err(MeasureError::NotExpressible);
        }
        let mut terms: BTreeMap<usize, Rat> = BTreeMap::new();
        for (cell, w) in &self.terms {
            let source = self.carrier.cell(*cell);
            let d = source.dim();
            let mut covered = Rat::zero();
            for (id, _lambda) in sigma.cells_inside(source) {
                if sigma.cell(id).dim() == d {
                    covered += sigma.cell(id).normalized_volume();
                    *terms.entry(id).or_insert_with(Rat::zero) += w;
                }
            }
            if covered != source.normalized_volume() {
                return Err(MeasureError::NotExpressible);
            }
        }
        Ok(PolytopalMeasure { carrier: sigma.clone(), terms })
    }

    /// Strict supports on a decomposition `sigma` of the support: the
    /// cells that keep the re-expressed measure semipositive after
    /// subtracting `ε δ_σ`; the witness `ε` is the re-expressed
    /// coefficient itself.
    pub fn strict_supports(
        &self,
        sigma: &QuotientComplex,
    ) -> Result<Vec<(usize, Rat)>, MeasureError> {
        let re = self.reexpress(sigma)?;
        Ok(re.terms.into_iter().collect())
    }
}

/// Piecewise-affine map: one affine map per positive-weight source cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwAffineMap {
    pub pieces: BTreeMap<usize, AffineMap>,
}

impl PwAffineMap {
    pub fn uniform(carrier: &QuotientComplex, map: &AffineMap) -> PwAffineMap {
        PwAffineMap {
            pieces: carrier.cell_ids().map(|id| (id, map.clone())).collect(),
        }
    }
}

/// Image data of a push-forward without the injectivity requirement:
/// the image polytope and its dimension, cell by cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportImage {
    pub cell: usize,
    pub image: Polytope,
    pub dim: usize,
}

/// Exact push-forward: every positive-weight cell must map injectively
/// (no dimension collapse), and the target must subdivide every image.
/// Total mass is conserved exactly.
pub fn pushforward_exact(
    mu: &PolytopalMeasure,
    f: &PwAffineMap,
    target: &QuotientComplex,
) -> Result<PolytopalMeasure, MeasureError> {
    let mut terms: BTreeMap<usize, Rat> = BTreeMap::new();
    for (cell, w) in mu.terms() {
        let map = f.pieces.get(&cell).ok_or(MeasureError::MissingPiece(cell))?;
        let source = mu.carrier().cell(cell);
        if affine_image_dim(&map.linear, source) < source.dim() {
            return Err(MeasureError::NonInjectivePiece { cell });
        }
        let image = source
            .apply_affine(map)
            .map_err(|e| MeasureError::Invalid(e.to_string()))?;
        let d = image.dim();
        let mut covered = Rat::zero();
        for (id, lambda) in target.cells_inside(&image) {
            if target.cell(id).dim() != d {
                continue;
            }
            let piece_target = target.cell(id).translate(&lambda);
            let Some(pre) = preimage_under(source, map, &piece_target) else {
                continue;
            };
            if pre.dim() != d {
                continue;
            }
            let vol_pre = pre.normalized_volume();
            covered += &vol_pre;
            let contribution = w * vol_pre / target.cell(id).normalized_volume();
            *terms.entry(id).or_insert_with(Rat::zero) += contribution;
        }
        if covered != source.normalized_volume() {
            return Err(MeasureError::TargetNotSubdivisional { cell });
        }
    }
    terms.retain(|_, w| !w.is_zero());
    Ok(PolytopalMeasure { carrier: target.clone(), terms })
}

/// Push-forward of the support only; dimension collapse is allowed.
pub fn pushforward_support(mu: &PolytopalMeasure, f: &PwAffineMap) -> Result<Vec<SupportImage>, MeasureError> {
    let mut out = Vec::new();
    for (cell, _) in mu.terms() {
        let map = f.pieces.get(&cell).ok_or(MeasureError::MissingPiece(cell))?;
        let source = mu.carrier().cell(cell);
        let image = source
            .apply_affine(map)
            .map_err(|e| MeasureError::Invalid(e.to_string()))?;
        let dim = image.dim();
        out.push(SupportImage { cell, image, dim });
    }
    Ok(out)
}

/// Whether every region is a finite union of cells of the complex.
pub fn is_subdivisional(sigma: &QuotientComplex, regions: &[Polytope]) -> bool {
    regions.iter().all(|q| {
        let d = q.dim();
        let mut covered = Rat::zero();
        for (id, _lambda) in sigma.cells_inside(q) {
            if sigma.cell(id).dim() == d {
                covered += sigma.cell(id).normalized_volume();
            }
        }
        covered == q.normalized_volume()
    })
}

/// Refines `sigma0` until every given image polytope is a finite union of
/// cells: cut along every span hyperplane and every lifted facet
/// hyperplane of every image.
pub fn make_subdivisional(
    sigma0: &QuotientComplex,
    images: &[Polytope],
) -> Result<QuotientComplex, MeasureError> {
    let mut cuts: Vec<crate::polytope::Equation> = Vec::new();
    for q in images {
        for e in q.span_equations() {
            if !cuts.contains(e) {
                cuts.push(e.clone());
            }
        }
        for h in q.facet_halfspaces() {
            let e = h.boundary();
            if !cuts.contains(&e) {
                cuts.push(e.clone());
            }
        }
    }
    let refined = sigma0
        .refine(&cuts)
        .map_err(|e| MeasureError::Invalid(e.to_string()))?;
    if !is_subdivisional(&refined, images) {
        return Err(MeasureError::NotSubdivisional("image".into()));
    }
    Ok(refined)
}

/// Tropical shadow of a subvariety: support cells of a quotient complex,
/// an optional canonical measure, and the stabilizer flag consumed by the
/// contradiction search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropSubvariety {
    pub carrier: QuotientComplex,
    pub support: Vec<usize>,
    pub measure: Option<PolytopalMeasure>,
    pub dim: usize,
    pub stabilizer_trivial: bool,
}

impl TropSubvariety {
    pub fn lattice(&self) -> &Lattice {
        self.carrier.lattice()
    }

    /// Support is one single point.
    pub fn is_single_point(&self) -> bool {
        self.support.len() == 1 && self.carrier.cell(self.support[0]).is_point()
    }
}

/// Builds the canonical measure of a skeleton: positive weights on the
/// non-degenerate simplices, pushed forward through their exponent maps
/// onto a subdivisional target, normalized to total mass one. The support
/// is the full union of the simplex images.
pub fn assemble_canonical(
    model: &SkeletonModel,
    nd: &NondegData,
    weights: &BTreeMap<String, Rat>,
    fmaps: &FaffMaps,
    sigma: &QuotientComplex,
    stabilizer_trivial: bool,
) -> Result<TropSubvariety, MeasureError> {
    let ndset = nondegenerate_set(model, nd)?;
    for (id, w) in weights {
        if !ndset.contains(id) {
            return Err(MeasureError::DegenerateWeighted(id.clone()));
        }
        if !w.is_positive() {
            return Err(MeasureError::BadWeight(id.clone()));
        }
    }
    if ndset.is_empty() {
        return Err(MeasureError::Invalid("no non-degenerate simplex".into()));
    }

    let mut terms: BTreeMap<usize, Rat> = BTreeMap::new();
    let mut support: Vec<usize> = Vec::new();
    let mut top_dim = 0usize;
    for id in &ndset {
        let sx = model.simplex(id).ok_or_else(|| SkeletonError::MissingData(id.clone()))?;
        let chart = model.chart(id)?;
        let f = fmaps
            .get(id)
            .ok_or_else(|| SkeletonError::MissingData(id.clone()))?;
        let map = f.as_affine_map();
        if affine_image_dim(&map.linear, &chart) < sx.r {
            // Claimed non-degenerate but the exponent matrix collapses the
            // simplex: the push-forward cannot be exact.
            return Err(MeasureError::NonInjectivePiece { cell: 0 });
        }
        let image = chart
            .apply_affine(&map)
            .map_err(|e| MeasureError::Invalid(e.to_string()))?;
        if !is_subdivisional(sigma, std::slice::from_ref(&image)) {
            return Err(MeasureError::NotSubdivisional(id.clone()));
        }
        top_dim = top_dim.max(sx.r);
        let w = weights.get(id).cloned().unwrap_or_else(Rat::one);
        let mut covered = Rat::zero();
        for (cell_id, lambda) in sigma.cells_inside(&image) {
            if !support.contains(&cell_id) {
                support.push(cell_id);
            }
            if sigma.cell(cell_id).dim() != sx.r {
                continue;
            }
            let piece_target = sigma.cell(cell_id).translate(&lambda);
            let Some(pre) = preimage_under(&chart, &map, &piece_target) else {
                continue;
            };
            if pre.dim() != sx.r {
                continue;
            }
            let vol_pre = pre.normalized_volume();
            covered += &vol_pre;
            let contribution = &w * vol_pre / sigma.cell(cell_id).normalized_volume();
            *terms.entry(cell_id).or_insert_with(Rat::zero) += contribution;
        }
        if covered != chart.normalized_volume() {
            return Err(MeasureError::NotSubdivisional(id.clone()));
        }
    }

    let mut mu = PolytopalMeasure { carrier: sigma.clone(), terms };
    let mass = mu.mass();
    if mass.is_zero() {
        return Err(MeasureError::Invalid("assembled measure has zero mass".into()));
    }
    mu = mu.scale(&mass.recip())?;
    debug_assert_eq!(mu.mass(), Rat::one());
    support.sort_unstable();

    Ok(TropSubvariety {
        carrier: sigma.clone(),
        support,
        measure: Some(mu),
        dim: top_dim,
        stabilizer_trivial,
    })
}

/// Support of a measure as explicit cells (positive-weight cells and all
/// of their faces present in the carrier).
pub fn measure_support(mu: &PolytopalMeasure) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (cell, _) in mu.terms() {
        for face in mu.carrier().cell(cell).all_faces() {
            if let Some(id) = mu.carrier().find_cell(&face) {
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        }
    }
    out.sort_unstable();
    out
}
