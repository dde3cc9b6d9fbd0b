//! End-to-end canonical measure assembly: skeletons with exponent data
//! pushed onto quotient complexes, mass accounting, and the consistency
//! rules tying strict supports to non-degenerate simplices.

use std::collections::BTreeMap;

use tropkit_core::bogomolov::{validate_nondeg_consistency, verdict_from_report, VerdictKind};
use tropkit_core::lattice::Lattice;
use tropkit_core::linalg::QMatrix;
use tropkit_core::measure::{assemble_canonical, MeasureError, PolytopalMeasure};
use tropkit_core::periodic::{segment_cells, PeriodicComplex, QuotientComplex};
use tropkit_core::polytope::AffineMap;
use tropkit_core::rat::{rat, rint, Rat, ValueGroup};
use tropkit_core::skeleton::{
    subdivide_skeleton, CanonicalSimplex, FaffMaps, IncidenceEdge, NondegData, NondegEntry,
    SkeletonModel, Stratum,
};
use tropkit_core::tropical::ExponentMap;

fn circle(breaks: &[Rat], period: i64) -> QuotientComplex {
    PeriodicComplex::validate(
        segment_cells(breaks),
        Lattice::scaled_integers(rint(period)),
        ValueGroup::full(),
    )
    .unwrap()
    .quotient()
}

fn endpoint_map(value: Rat) -> AffineMap {
    AffineMap::new(QMatrix::zero(1, 0), vec![value])
}

/// Node of a curve: one codimension-1 stratum whose segment runs between
/// the two component strata.
fn node_skeleton() -> SkeletonModel {
    SkeletonModel {
        total_dim: 1,
        strata: vec![
            Stratum { id: "s0".into(), dim: 0, label: None },
            Stratum { id: "s1".into(), dim: 1, label: None },
            Stratum { id: "s2".into(), dim: 1, label: None },
        ],
        simplices: vec![
            CanonicalSimplex { stratum_id: "s0".into(), r: 1, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "s1".into(), r: 0, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "s2".into(), r: 0, vpi: rint(1) },
        ],
        incidence: vec![
            IncidenceEdge { sub: "s1".into(), sup: "s0".into(), chart_map: endpoint_map(rint(0)) },
            IncidenceEdge { sub: "s2".into(), sup: "s0".into(), chart_map: endpoint_map(rint(1)) },
        ],
    }
}

fn node_fmaps() -> FaffMaps {
    let mut fmaps = FaffMaps::new();
    fmaps.insert("s0".into(), ExponentMap::from_ints(&[vec![1]], vec![rint(0)]));
    fmaps.insert("s1".into(), ExponentMap::from_ints(&[vec![]], vec![rint(0)]));
    fmaps.insert("s2".into(), ExponentMap::from_ints(&[vec![]], vec![rint(1)]));
    fmaps
}

fn node_nondeg() -> NondegData {
    let mut nd = NondegData::new();
    nd.insert("s0".into(), NondegEntry { image_dim: 1, abelian_image_dim: 0 });
    nd.insert("s1".into(), NondegEntry { image_dim: 0, abelian_image_dim: 0 });
    nd.insert("s2".into(), NondegEntry { image_dim: 0, abelian_image_dim: 0 });
    nd
}

#[test]
fn node_curve_segment_support() {
    let model = node_skeleton();
    assert!(model.validate().is_empty());
    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let v = assemble_canonical(
        &model,
        &node_nondeg(),
        &BTreeMap::new(),
        &node_fmaps(),
        &sigma,
        true,
    )
    .unwrap();

    let mu = v.measure.as_ref().unwrap();
    assert_eq!(mu.mass(), rint(1));
    assert_eq!(v.dim, 1);

    // Hand-assembled oracle: the only non-degenerate simplex maps
    // isometrically onto the cell [0,1], so the measure is its delta.
    let seg = sigma
        .cells()
        .iter()
        .position(|c| c.dim() == 1 && c.vertices()[0] == vec![rint(0)])
        .unwrap();
    let expected = PolytopalMeasure::delta(seg, &sigma).unwrap();
    assert_eq!(mu, &expected);

    // Support: the segment plus its two endpoint classes.
    assert_eq!(v.support.len(), 3);
    assert!(v.support.contains(&seg));
}

#[test]
fn single_point_skeleton_gives_dirac() {
    let model = SkeletonModel {
        total_dim: 2,
        strata: vec![Stratum { id: "s".into(), dim: 2, label: None }],
        simplices: vec![CanonicalSimplex { stratum_id: "s".into(), r: 0, vpi: rint(1) }],
        incidence: vec![],
    };
    let mut fmaps = FaffMaps::new();
    fmaps.insert("s".into(), ExponentMap::from_ints(&[vec![]], vec![rint(0)]));
    let mut nd = NondegData::new();
    nd.insert("s".into(), NondegEntry { image_dim: 0, abelian_image_dim: 2 });

    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let v = assemble_canonical(&model, &nd, &BTreeMap::new(), &fmaps, &sigma, true).unwrap();
    assert!(v.is_single_point());
    assert_eq!(v.measure.as_ref().unwrap().mass(), rint(1));
    assert_eq!(v.dim, 0);
}

/// Two parallel segments onto the same cell plus a third one elsewhere:
/// the coefficient on the shared image doubles before normalization.
fn parallel_skeleton() -> (SkeletonModel, FaffMaps, NondegData) {
    let model = SkeletonModel {
        total_dim: 1,
        strata: vec![
            Stratum { id: "a0".into(), dim: 0, label: None },
            Stratum { id: "a1".into(), dim: 0, label: None },
            Stratum { id: "a2".into(), dim: 0, label: None },
            Stratum { id: "b0".into(), dim: 1, label: None },
            Stratum { id: "b1".into(), dim: 1, label: None },
            Stratum { id: "b2".into(), dim: 1, label: None },
        ],
        simplices: vec![
            CanonicalSimplex { stratum_id: "a0".into(), r: 1, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "a1".into(), r: 1, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "a2".into(), r: 1, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "b0".into(), r: 0, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "b1".into(), r: 0, vpi: rint(1) },
            CanonicalSimplex { stratum_id: "b2".into(), r: 0, vpi: rint(1) },
        ],
        incidence: vec![
            IncidenceEdge { sub: "b0".into(), sup: "a0".into(), chart_map: endpoint_map(rint(0)) },
            IncidenceEdge { sub: "b1".into(), sup: "a0".into(), chart_map: endpoint_map(rint(1)) },
            IncidenceEdge { sub: "b0".into(), sup: "a1".into(), chart_map: endpoint_map(rint(0)) },
            IncidenceEdge { sub: "b1".into(), sup: "a1".into(), chart_map: endpoint_map(rint(1)) },
            IncidenceEdge { sub: "b1".into(), sup: "a2".into(), chart_map: endpoint_map(rint(0)) },
            IncidenceEdge { sub: "b2".into(), sup: "a2".into(), chart_map: endpoint_map(rint(1)) },
        ],
    };
    let mut fmaps = FaffMaps::new();
    fmaps.insert("a0".into(), ExponentMap::from_ints(&[vec![1]], vec![rint(0)]));
    fmaps.insert("a1".into(), ExponentMap::from_ints(&[vec![1]], vec![rint(0)]));
    fmaps.insert("a2".into(), ExponentMap::from_ints(&[vec![1]], vec![rint(1)]));
    fmaps.insert("b0".into(), ExponentMap::from_ints(&[vec![]], vec![rint(0)]));
    fmaps.insert("b1".into(), ExponentMap::from_ints(&[vec![]], vec![rint(1)]));
    fmaps.insert("b2".into(), ExponentMap::from_ints(&[vec![]], vec![rint(2)]));
    let mut nd = NondegData::new();
    for a in ["a0", "a1", "a2"] {
        nd.insert(a.into(), NondegEntry { image_dim: 1, abelian_image_dim: 0 });
    }
    for b in ["b0", "b1", "b2"] {
        nd.insert(b.into(), NondegEntry { image_dim: 0, abelian_image_dim: 0 });
    }
    (model, fmaps, nd)
}

#[test]
fn overlapping_images_double_the_coefficient() {
    let (model, fmaps, nd) = parallel_skeleton();
    assert!(model.validate().is_empty());
    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let v = assemble_canonical(&model, &nd, &BTreeMap::new(), &fmaps, &sigma, true).unwrap();
    let mu = v.measure.as_ref().unwrap();

    // Mass-accounting oracle: unnormalized coefficients are 2 on [0,1]
    // (two simplices) and 1 on [1,2], total mass 3.
    let seg01 = sigma
        .cells()
        .iter()
        .position(|c| c.dim() == 1 && c.vertices()[0] == vec![rint(0)])
        .unwrap();
    let seg12 = sigma
        .cells()
        .iter()
        .position(|c| c.dim() == 1 && c.vertices()[0] == vec![rint(1)])
        .unwrap();
    assert_eq!(mu.weight(seg01), rat(2, 3));
    assert_eq!(mu.weight(seg12), rat(1, 3));
    assert_eq!(mu.mass(), rint(1));
}

#[test]
fn degenerate_weight_is_rejected() {
    let model = node_skeleton();
    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let mut weights = BTreeMap::new();
    weights.insert("s1".to_string(), rint(1));
    let err = assemble_canonical(&model, &node_nondeg(), &weights, &node_fmaps(), &sigma, true)
        .unwrap_err();
    assert!(matches!(err, MeasureError::DegenerateWeighted(_)));
}

#[test]
fn non_subdivisional_target_is_rejected() {
    let model = node_skeleton();
    // The segment image [0,1] is not a union of cells of this circle.
    let sigma = circle(&[rint(0), rat(3, 2), rint(2)], 2);
    let err = assemble_canonical(
        &model,
        &node_nondeg(),
        &BTreeMap::new(),
        &node_fmaps(),
        &sigma,
        true,
    )
    .unwrap_err();
    assert!(matches!(err, MeasureError::NotSubdivisional(_)));
}

#[test]
fn consistency_clean_on_assembled_data() {
    let (model, fmaps, nd) = parallel_skeleton();
    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let v = assemble_canonical(&model, &nd, &BTreeMap::new(), &fmaps, &sigma, true).unwrap();
    let report = validate_nondeg_consistency(&model, &fmaps, &nd, &v, &sigma).unwrap();
    assert!(report.is_empty(), "unexpected violations: {report:?}");
    assert!(verdict_from_report(&report).is_none());
}

#[test]
fn lowered_image_dim_is_flagged() {
    let (model, fmaps, mut nd) = parallel_skeleton();
    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let v = assemble_canonical(&model, &nd, &BTreeMap::new(), &fmaps, &sigma, true).unwrap();

    // Hand-edit: claim that a0 collapses. The strict support [0,1] is
    // still inside its geometric image, which pins the inconsistency.
    nd.insert("a0".into(), NondegEntry { image_dim: 0, abelian_image_dim: 0 });
    let report = validate_nondeg_consistency(&model, &fmaps, &nd, &v, &sigma).unwrap();
    assert!(report.iter().any(|r| r.rule == "Prop5.12"));
    let verdict = verdict_from_report(&report).unwrap();
    assert_eq!(verdict.kind, VerdictKind::InconsistentInput);
}

#[test]
fn uncovered_strict_support_is_flagged() {
    let (model, fmaps, mut nd) = parallel_skeleton();
    let sigma = circle(&[rint(0), rint(1), rint(2)], 2);
    let v = assemble_canonical(&model, &nd, &BTreeMap::new(), &fmaps, &sigma, true).unwrap();

    // Degrade every simplex covering [1,2]: the strict support there now
    // has no covering non-degenerate simplex of its dimension.
    nd.insert("a2".into(), NondegEntry { image_dim: 0, abelian_image_dim: 0 });
    let report = validate_nondeg_consistency(&model, &fmaps, &nd, &v, &sigma).unwrap();
    assert!(report.iter().any(|r| r.rule == "Lemma5.10"));
}

#[test]
fn pullback_subdivision_agrees_with_assembly() {
    // The subdivision induced by the exponent maps refines each chart so
    // that every cell maps into a single target cell.
    let model = node_skeleton();
    let fmaps = node_fmaps();
    let sigma = circle(&[rint(0), rat(1, 2), rint(1), rint(2)], 2);
    let s = subdivide_skeleton(&model, &fmaps, &sigma).unwrap();
    let segs: Vec<&tropkit_core::polytope::Polytope> =
        s.cells["s0"].iter().filter(|c| c.dim() == 1).collect();
    assert_eq!(segs.len(), 2);
    for seg in segs {
        let img = fmaps["s0"].image(seg).unwrap();
        // Each subdivision cell lands inside one target cell.
        assert!(sigma
            .cells()
            .iter()
            .any(|c| img.vertices().iter().all(|p| c.contains(p))));
    }
}
