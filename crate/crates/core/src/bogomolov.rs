//! The tropical-triviality test and the diagonal-contraction search:
//! build the N-fold product measure of a place's canonical measure, apply
//! the difference map, and look for a strict support whose image drops
//! dimension. Also the input-consistency rules tying strict supports to
//! non-degenerate simplices, and the single-point inference for simple
//! somewhere-degenerate profiles.

use crate::measure::{MeasureError, PolytopalMeasure, TropSubvariety};
use crate::periodic::QuotientComplex;
use crate::rank::AbelianProfile;
use crate::skeleton::{nondegenerate_set, FaffMaps, NondegData, SkeletonError, SkeletonModel};
use crate::tropical::{affine_image_dim, alpha_map, TropicalError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BogomolovError {
    #[error("input variety does not carry the trivial-stabilizer flag")]
    StabilizerNotTrivial,
    #[error("input variety carries no measure")]
    NoMeasure,
    #[error("profile is not marked simple")]
    NotSimple,
    #[error("profile is not degenerate at this place")]
    NotDegenerateHere,
    #[error("{0}")]
    BadParams(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

/// Tropical data of one place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceTropData {
    pub place: String,
    pub variety: TropSubvariety,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    TropicallyTrivial,
    ContradictionWitness,
    Inconclusive,
    InconsistentInput,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::TropicallyTrivial => "TropicallyTrivial",
            VerdictKind::ContradictionWitness => "ContradictionWitness",
            VerdictKind::Inconclusive => "Inconclusive",
            VerdictKind::InconsistentInput => "InconsistentInput",
        }
    }
}

/// Witness cell of a dimension contradiction in the product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub place: String,
    pub cell: usize,
    pub dim_sigma: usize,
    pub dim_alpha_sigma: usize,
    pub copies: usize,
}

/// Outcome of the contradiction search, tagged with the step it
/// certifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    pub rule: &'static str,
}

impl Verdict {
    fn plain(kind: VerdictKind, rule: &'static str) -> Verdict {
        Verdict { kind, witness: None, rule }
    }
}

/// The support is one single point at every place; vacuously true for an
/// empty place list.
pub fn is_tropically_trivial(data: &[PlaceTropData]) -> bool {
    data.iter().all(|d| d.variety.is_single_point())
}

/// Searches the N-fold product of the place's canonical measure for a
/// strict support whose image under the difference map drops dimension.
/// Any positive-dimensional support yields a witness: the diagonal
/// product cell has the diagonal direction in the kernel.
pub fn find_contradiction(x: &PlaceTropData, copies: usize) -> Result<Verdict, BogomolovError> {
    if !x.variety.stabilizer_trivial {
        return Err(BogomolovError::StabilizerNotTrivial);
    }
    let mu = x.variety.measure.as_ref().ok_or(BogomolovError::NoMeasure)?;
    if copies < 2 {
        return Err(BogomolovError::BadParams("need at least two product factors".into()));
    }

    let mut product: PolytopalMeasure = mu.clone();
    for _ in 1..copies {
        product = product.product(mu);
    }
    let n = x.variety.carrier.ambient_dim();
    let alpha = alpha_map(n, x.variety.lattice(), copies)?;

    // Positive-weight product cells are exactly the strict supports of the
    // product measure on its own grid; scan by descending dimension, then
    // by cell id, so the first witness is deterministic.
    let mut cells: Vec<usize> = product.terms().map(|(id, _)| id).collect();
    cells.sort_by_key(|&id| (std::cmp::Reverse(product.carrier().cell(id).dim()), id));
    for id in cells {
        let cell = product.carrier().cell(id);
        let dim_sigma = cell.dim();
        let dim_alpha = affine_image_dim(alpha.linear(), cell);
        if dim_alpha < dim_sigma {
            return Ok(Verdict {
                kind: VerdictKind::ContradictionWitness,
                witness: Some(Witness {
                    place: x.place.clone(),
                    cell: id,
                    dim_sigma,
                    dim_alpha_sigma: dim_alpha,
                    copies,
                }),
                rule: "Thm6.2/Eq.6.2.1",
            });
        }
    }
    Ok(Verdict::plain(VerdictKind::Inconclusive, "Thm6.2/Eq.6.2.1"))
}

/// One finding of the consistency validator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyViolation {
    pub rule: &'static str,
    pub cell: Option<usize>,
    pub simplex: Option<String>,
    pub detail: String,
}

/// Consistency of claimed non-degeneracy data against the geometry of a
/// canonical measure:
///
/// * every strict support covered by a simplex whose image reaches the
///   support dimension forces that simplex to be fully non-degenerate in
///   both the claim and the geometry;
/// * every strict support must be covered by some claimed non-degenerate
///   simplex of equal dimension, and every equal-dimensional cell inside
///   the image of a claimed non-degenerate simplex must be a strict
///   support.
pub fn validate_nondeg_consistency(
    model: &SkeletonModel,
    fmaps: &FaffMaps,
    nd: &NondegData,
    x: &TropSubvariety,
    sigma: &QuotientComplex,
) -> Result<Vec<ConsistencyViolation>, BogomolovError> {
    let mu = x.measure.as_ref().ok_or(BogomolovError::NoMeasure)?;
    let strict = mu.strict_supports(sigma)?;
    let ndset = nondegenerate_set(model, nd)?;

    // Geometry per simplex: image polytope and its exact dimension.
    let mut geometry: Vec<(String, usize, crate::polytope::Polytope, usize, usize)> = Vec::new();
    for sx in &model.simplices {
        let f = fmaps
            .get(&sx.stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(sx.stratum_id.clone()))?;
        let chart = model.chart(&sx.stratum_id)?;
        let map = f.as_affine_map();
        let image = chart
            .apply_affine(&map)
            .map_err(|e| BogomolovError::BadParams(e.to_string()))?;
        let geo_dim = affine_image_dim(&map.linear, &chart);
        let claimed = nd
            .get(&sx.stratum_id)
            .ok_or_else(|| SkeletonError::MissingData(sx.stratum_id.clone()))?
            .image_dim;
        geometry.push((sx.stratum_id.clone(), sx.r, image, geo_dim, claimed));
    }

    let covers = |image: &crate::polytope::Polytope, cell: usize| -> bool {
        sigma
            .cells_inside(image)
            .iter()
            .any(|(id, _)| *id == cell)
    };

    let mut report = Vec::new();
    for (cell, _eps) in &strict {
        let k = sigma.cell(*cell).dim();
        for (id, r, image, geo_dim, claimed) in &geometry {
            if covers(image, *cell) && *geo_dim == k && (*claimed != *r || *geo_dim != *r) {
                report.push(ConsistencyViolation {
                    rule: "Prop5.12",
                    cell: Some(*cell),
                    simplex: Some(id.clone()),
                    detail: format!(
                        "strict support of dimension {k} lies in the image of {id}, \
                         whose image dimension must equal its simplex dimension {r} \
                         (claimed {claimed}, geometric {geo_dim})"
                    ),
                });
            }
        }
        let covered = geometry.iter().any(|(id, r, image, _, _)| {
            ndset.contains(id) && *r == k && covers(image, *cell)
        });
        if !covered {
            report.push(ConsistencyViolation {
                rule: "Lemma5.10",
                cell: Some(*cell),
                simplex: None,
                detail: format!(
                    "strict support of dimension {k} is not covered by any \
                     non-degenerate simplex of equal dimension"
                ),
            });
        }
    }

    let strict_ids: Vec<usize> = strict.iter().map(|(id, _)| *id).collect();
    for (id, r, image, _, _) in &geometry {
        if !ndset.contains(id) {
            continue;
        }
        for (cell, _lambda) in sigma.cells_inside(image) {
            if sigma.cell(cell).dim() == *r && !strict_ids.contains(&cell) {
                report.push(ConsistencyViolation {
                    rule: "Lemma5.10",
                    cell: Some(cell),
                    simplex: Some(id.clone()),
                    detail: format!(
                        "cell of dimension {r} inside the image of non-degenerate {id} \
                         is not a strict support"
                    ),
                });
            }
        }
    }
    Ok(report)
}

pub fn verdict_from_report(report: &[ConsistencyViolation]) -> Option<Verdict> {
    if report.is_empty() {
        None
    } else {
        Some(Verdict::plain(VerdictKind::InconsistentInput, report[0].rule))
    }
}

/// Inference available for simple profiles degenerate at the given place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleInference {
    /// The subvariety itself is a single point.
    SinglePoint,
    NoInference,
}

impl SimpleInference {
    pub fn rule(&self) -> &'static str {
        "Lemma7.14"
    }
}

/// For a simple abelian variety degenerate at the place: a single-point
/// tropicalization forces the subvariety to be a single point.
pub fn simple_degenerate_inference(
    profile: &AbelianProfile,
    x: &PlaceTropData,
) -> Result<SimpleInference, BogomolovError> {
    if !profile.simple {
        return Err(BogomolovError::NotSimple);
    }
    if profile.torus_rank_at(&x.place) == 0 {
        return Err(BogomolovError::NotDegenerateHere);
    }
    if x.variety.is_single_point() {
        Ok(SimpleInference::SinglePoint)
    } else {
        Ok(SimpleInference::NoInference)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::measure::PolytopalMeasure;
    use crate::periodic::{segment_cells, PeriodicComplex};
    use crate::rat::{rat, rint, ValueGroup};

    fn circle(breaks: &[crate::rat::Rat], period: i64) -> QuotientComplex {
        PeriodicComplex::validate(
            segment_cells(breaks),
            Lattice::scaled_integers(rint(period)),
            ValueGroup::full(),
        )
        .unwrap()
        .quotient()
    }

    pub(crate) fn segment_variety(stabilizer_trivial: bool) -> TropSubvariety {
        let q = circle(&[rint(0), rint(1), rint(2)], 2);
        let seg = q
            .cells()
            .iter()
            .position(|c| c.dim() == 1 && c.vertices()[0] == vec![rint(0)])
            .unwrap();
        let mu = PolytopalMeasure::delta(seg, &q).unwrap();
        let support = crate::measure::measure_support(&mu);
        TropSubvariety { carrier: q, support, measure: Some(mu), dim: 1, stabilizer_trivial }
    }

    pub(crate) fn point_variety() -> TropSubvariety {
        let q = circle(&[rint(0), rint(1), rint(2)], 2);
        let pt = q.cells().iter().position(|c| c.is_point()).unwrap();
        let mu = PolytopalMeasure::delta(pt, &q).unwrap();
        TropSubvariety {
            carrier: q,
            support: vec![pt],
            measure: Some(mu),
            dim: 0,
            stabilizer_trivial: true,
        }
    }

    #[test]
    fn triviality_detection() {
        let pt = PlaceTropData { place: "v".into(), variety: point_variety() };
        let seg = PlaceTropData { place: "w".into(), variety: segment_variety(true) };
        assert!(is_tropically_trivial(&[pt.clone()]));
        assert!(is_tropically_trivial(&[]));
        assert!(!is_tropically_trivial(&[pt, seg]));
    }

    #[test]
    fn segment_yields_witness() {
        let data = PlaceTropData { place: "v".into(), variety: segment_variety(true) };
        // Oracle: enumerate the strict supports of the product grid and
        // their image dimensions by hand. For N = 2 the positive-weight
        // cells are the four products of the two segment classes; the
        // diagonal-direction kernel collapses σ × σ from dim 2 to dim 1.
        let v = find_contradiction(&data, 2).unwrap();
        assert_eq!(v.kind, VerdictKind::ContradictionWitness);
        let w = v.witness.unwrap();
        assert_eq!(w.dim_sigma, 2);
        assert!(w.dim_alpha_sigma < 2);
        assert_eq!(w.dim_alpha_sigma, 1);
        assert_eq!(w.copies, 2);

        let v3 = find_contradiction(&data, 3).unwrap();
        assert_eq!(v3.kind, VerdictKind::ContradictionWitness);
        let w3 = v3.witness.unwrap();
        assert_eq!(w3.dim_sigma, 3);
        assert!(w3.dim_alpha_sigma <= 2);
    }

    #[test]
    fn point_support_is_inconclusive() {
        let data = PlaceTropData { place: "v".into(), variety: point_variety() };
        let v = find_contradiction(&data, 2).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!(v.witness.is_none());
    }

    #[test]
    fn guards() {
        let data = PlaceTropData { place: "v".into(), variety: segment_variety(false) };
        assert_eq!(
            find_contradiction(&data, 2).unwrap_err(),
            BogomolovError::StabilizerNotTrivial
        );
        let mut no_measure = segment_variety(true);
        no_measure.measure = None;
        let data = PlaceTropData { place: "v".into(), variety: no_measure };
        assert_eq!(find_contradiction(&data, 2).unwrap_err(), BogomolovError::NoMeasure);
        let data = PlaceTropData { place: "v".into(), variety: segment_variety(true) };
        assert!(matches!(
            find_contradiction(&data, 1),
            Err(BogomolovError::BadParams(_))
        ));
    }

    #[test]
    fn witness_stable_under_more_copies() {
        let data = PlaceTropData { place: "v".into(), variety: segment_variety(true) };
        for copies in 2..=4 {
            let v = find_contradiction(&data, copies).unwrap();
            assert_eq!(v.kind, VerdictKind::ContradictionWitness);
        }
    }

    #[test]
    fn simple_inferences() {
        let simple_degenerate = AbelianProfile::new(
            2,
            [("v".to_string(), 1usize)].into_iter().collect(),
            true,
        )
        .unwrap();
        let pt = PlaceTropData { place: "v".into(), variety: point_variety() };
        assert_eq!(
            simple_degenerate_inference(&simple_degenerate, &pt).unwrap(),
            SimpleInference::SinglePoint
        );
        let seg = PlaceTropData { place: "v".into(), variety: segment_variety(true) };
        assert_eq!(
            simple_degenerate_inference(&simple_degenerate, &seg).unwrap(),
            SimpleInference::NoInference
        );

        let not_simple = AbelianProfile::new(
            2,
            [("v".to_string(), 1usize)].into_iter().collect(),
            false,
        )
        .unwrap();
        assert_eq!(
            simple_degenerate_inference(&not_simple, &pt).unwrap_err(),
            BogomolovError::NotSimple
        );
        let elsewhere = PlaceTropData { place: "w".into(), variety: point_variety() };
        assert_eq!(
            simple_degenerate_inference(&simple_degenerate, &elsewhere).unwrap_err(),
            BogomolovError::NotDegenerateHere
        );
    }
}
