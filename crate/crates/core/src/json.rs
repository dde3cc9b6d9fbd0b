//! Canonical JSON schemas for every artifact. Rationals are exact `p/q`
//! strings, vertex and cell lists are kept in canonical sorted order, and
//! maps are ordered, so serialization is byte-deterministic and every
//! emitted file reloads to an equal value.

use crate::bogomolov::{Verdict, VerdictKind, Witness};
use crate::lattice::Lattice;
use crate::linalg::{QMatrix, QVector};
use crate::measure::{PolytopalMeasure, TropSubvariety};
use crate::periodic::{PeriodicComplex, QuotientComplex};
use crate::polytope::{AffineMap, Polytope};
use crate::rank::{AbelianProfile, DualGraph, IsogenyDecomposition};
use crate::rat::{format_rat, parse_rat, Rat, ValueGroup};
use crate::skeleton::{
    CanonicalSimplex, FaffMaps, IncidenceEdge, NondegData, NondegEntry, SkeletonModel, Stratum,
};
use crate::tropical::{ExponentMap, TropicalHom};
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
}

fn invalid(what: &'static str, detail: impl ToString) -> JsonError {
    JsonError::Invalid { what, detail: detail.to_string() }
}

fn rat_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn parse_rat_vec(v: &[String], what: &'static str) -> Result<QVector, JsonError> {
    v.iter().map(|s| parse_rat(s).map_err(|e| invalid(what, e))).collect()
}

fn matrix_to_rows(m: &QMatrix) -> Vec<Vec<String>> {
    m.rows_iter().map(rat_vec).collect()
}

fn rows_to_matrix(rows: &[Vec<String>], what: &'static str) -> Result<QMatrix, JsonError> {
    let parsed: Result<Vec<QVector>, JsonError> =
        rows.iter().map(|r| parse_rat_vec(r, what)).collect();
    let parsed = parsed?;
    let cols = parsed.first().map_or(0, |r| r.len());
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(invalid(what, "ragged matrix"));
    }
    Ok(QMatrix::from_rows(parsed))
}

// ---------------------------------------------------------------------
// polytopes and complexes

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolytopeDto {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<String>>,
}

pub fn polytope_to_dto(p: &Polytope) -> PolytopeDto {
    PolytopeDto {
        ambient_dim: p.ambient_dim(),
        vertices: p.vertices().iter().map(|v| rat_vec(v)).collect(),
    }
}

pub fn polytope_from_dto(dto: &PolytopeDto) -> Result<Polytope, JsonError> {
    let points: Result<Vec<QVector>, JsonError> =
        dto.vertices.iter().map(|v| parse_rat_vec(v, "polytope vertex")).collect();
    let points = points?;
    if points.iter().any(|p| p.len() != dto.ambient_dim) {
        return Err(invalid("polytope", "vertex dimension differs from ambient_dim"));
    }
    Polytope::from_vertices(&points).map_err(|e| invalid("polytope", e))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GammaDto {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

pub fn gamma_to_dto(g: &ValueGroup) -> GammaDto {
    match g {
        ValueGroup::Full => GammaDto { kind: "full-rationals".into(), generator: None },
        ValueGroup::Discrete { generator } => GammaDto {
            kind: "discrete".into(),
            generator: Some(format_rat(generator)),
        },
    }
}

pub fn gamma_from_dto(dto: &GammaDto) -> Result<ValueGroup, JsonError> {
    match dto.kind.as_str() {
        "full-rationals" => Ok(ValueGroup::Full),
        "discrete" => {
            let g = dto
                .generator
                .as_ref()
                .ok_or_else(|| invalid("gamma", "discrete kind needs a generator"))?;
            let g = parse_rat(g).map_err(|e| invalid("gamma", e))?;
            use num::Signed;
            if !g.is_positive() {
                return Err(invalid("gamma", "generator must be positive"));
            }
            Ok(ValueGroup::discrete(g))
        }
        other => Err(invalid("gamma", format!("unknown kind {other:?}"))),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ComplexDto {
    pub lattice: Vec<Vec<String>>,
    pub gamma: GammaDto,
    pub cells: Vec<PolytopeDto>,
}

pub fn complex_to_dto(c: &PeriodicComplex) -> ComplexDto {
    ComplexDto {
        lattice: matrix_to_rows(c.lattice().basis()),
        gamma: gamma_to_dto(c.gamma()),
        cells: c.cells().iter().map(polytope_to_dto).collect(),
    }
}

/// Structural load (no validation); `validate` runs the full gate.
pub fn complex_from_dto(dto: &ComplexDto, validate: bool) -> Result<PeriodicComplex, JsonError> {
    let basis = rows_to_matrix(&dto.lattice, "lattice basis")?;
    if basis.nrows() != basis.ncols() || basis.nrows() == 0 {
        return Err(invalid("lattice basis", "must be square and nonempty"));
    }
    if basis.inverse().is_none() {
        return Err(invalid("lattice basis", "must have full rank"));
    }
    let lattice = Lattice::new(basis);
    let gamma = gamma_from_dto(&dto.gamma)?;
    let cells: Result<Vec<Polytope>, JsonError> =
        dto.cells.iter().map(polytope_from_dto).collect();
    let cells = cells?;
    if validate {
        PeriodicComplex::validate(cells, lattice, gamma).map_err(|e| invalid("complex", e))
    } else {
        if cells.is_empty() {
            return Err(invalid("complex", "no cells"));
        }
        if cells.iter().any(|c| c.ambient_dim() != lattice.rank()) {
            return Err(invalid("complex", "cell dimension differs from lattice rank"));
        }
        Ok(PeriodicComplex::from_parts_unchecked(cells, lattice, gamma))
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct QuotientDto {
    pub base: ComplexDto,
    pub q_cells: Vec<usize>,
}

pub fn quotient_to_dto(q: &QuotientComplex) -> QuotientDto {
    QuotientDto {
        base: complex_to_dto(q.base()),
        q_cells: q.representative_indices().to_vec(),
    }
}

pub fn quotient_from_dto(dto: &QuotientDto) -> Result<QuotientComplex, JsonError> {
    let base = complex_from_dto(&dto.base, false)?;
    let q = base.quotient();
    if q.representative_indices() != dto.q_cells.as_slice() {
        return Err(invalid(
            "quotient complex",
            "stored representatives disagree with the recomputed orbits",
        ));
    }
    Ok(q)
}

// ---------------------------------------------------------------------
// measures and tropical subvarieties

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MeasureTermDto {
    pub cell: usize,
    pub weight: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MeasureDto {
    pub carrier: QuotientDto,
    pub terms: Vec<MeasureTermDto>,
}

pub fn measure_to_dto(m: &PolytopalMeasure) -> MeasureDto {
    MeasureDto {
        carrier: quotient_to_dto(m.carrier()),
        terms: m
            .terms()
            .map(|(cell, w)| MeasureTermDto { cell, weight: format_rat(w) })
            .collect(),
    }
}

fn terms_from_dto(
    carrier: &QuotientComplex,
    terms: &[MeasureTermDto],
) -> Result<PolytopalMeasure, JsonError> {
    let parsed: Result<Vec<(usize, Rat)>, JsonError> = terms
        .iter()
        .map(|t| Ok((t.cell, parse_rat(&t.weight).map_err(|e| invalid("weight", e))?)))
        .collect();
    PolytopalMeasure::from_terms(carrier, &parsed?).map_err(|e| invalid("measure", e))
}

pub fn measure_from_dto(dto: &MeasureDto) -> Result<PolytopalMeasure, JsonError> {
    let carrier = quotient_from_dto(&dto.carrier)?;
    terms_from_dto(&carrier, &dto.terms)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TorusDto {
    pub n: usize,
    pub lattice: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TropVarietyDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    pub torus: TorusDto,
    pub carrier: QuotientDto,
    pub support: Vec<usize>,
    pub measure: Option<Vec<MeasureTermDto>>,
    pub dim: usize,
    pub stabilizer_trivial: bool,
}

pub fn variety_to_dto(v: &TropSubvariety, place: Option<&str>) -> TropVarietyDto {
    TropVarietyDto {
        place: place.map(|s| s.to_string()),
        torus: TorusDto {
            n: v.carrier.ambient_dim(),
            lattice: matrix_to_rows(v.lattice().basis()),
        },
        carrier: quotient_to_dto(&v.carrier),
        support: v.support.clone(),
        measure: v.measure.as_ref().map(|m| {
            m.terms()
                .map(|(cell, w)| MeasureTermDto { cell, weight: format_rat(w) })
                .collect()
        }),
        dim: v.dim,
        stabilizer_trivial: v.stabilizer_trivial,
    }
}

pub fn variety_from_dto(dto: &TropVarietyDto) -> Result<TropSubvariety, JsonError> {
    let carrier = quotient_from_dto(&dto.carrier)?;
    if dto.torus.n != carrier.ambient_dim() {
        return Err(invalid("tropical variety", "torus dimension mismatch"));
    }
    if dto.support.iter().any(|&id| id >= carrier.len()) {
        return Err(invalid("tropical variety", "support cell out of range"));
    }
    let measure = match &dto.measure {
        Some(terms) => Some(terms_from_dto(&carrier, terms)?),
        None => None,
    };
    Ok(TropSubvariety {
        carrier,
        support: dto.support.clone(),
        measure,
        dim: dto.dim,
        stabilizer_trivial: dto.stabilizer_trivial,
    })
}

// ---------------------------------------------------------------------
// skeletons

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct AffineMapDto {
    pub linear: Vec<Vec<String>>,
    pub translate: Vec<String>,
}

pub fn affine_to_dto(m: &AffineMap) -> AffineMapDto {
    AffineMapDto {
        linear: matrix_to_rows(&m.linear),
        translate: rat_vec(&m.translate),
    }
}

pub fn affine_from_dto(dto: &AffineMapDto) -> Result<AffineMap, JsonError> {
    let translate = parse_rat_vec(&dto.translate, "affine translate")?;
    let linear = if dto.linear.is_empty() {
        QMatrix::zero(translate.len(), 0)
    } else {
        rows_to_matrix(&dto.linear, "affine linear part")?
    };
    if linear.nrows() != translate.len() {
        return Err(invalid("affine map", "linear/translate shape mismatch"));
    }
    Ok(AffineMap::new(linear, translate))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StratumDto {
    pub id: String,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SimplexDto {
    pub stratum_id: String,
    pub r: usize,
    pub vpi: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct IncidenceDto {
    pub sub: String,
    pub sup: String,
    pub chart_map: AffineMapDto,
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy)]
pub struct NondegEntryDto {
    pub image_dim: usize,
    pub abelian_image_dim: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SkeletonDto {
    pub d: usize,
    pub strata: Vec<StratumDto>,
    pub simplices: Vec<SimplexDto>,
    pub incidence: Vec<IncidenceDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nondeg: Option<BTreeMap<String, NondegEntryDto>>,
}

pub fn skeleton_to_dto(m: &SkeletonModel, nd: Option<&NondegData>) -> SkeletonDto {
    SkeletonDto {
        d: m.total_dim,
        strata: m
            .strata
            .iter()
            .map(|s| StratumDto { id: s.id.clone(), dim: s.dim, label: s.label.clone() })
            .collect(),
        simplices: m
            .simplices
            .iter()
            .map(|s| SimplexDto {
                stratum_id: s.stratum_id.clone(),
                r: s.r,
                vpi: format_rat(&s.vpi),
            })
            .collect(),
        incidence: m
            .incidence
            .iter()
            .map(|e| IncidenceDto {
                sub: e.sub.clone(),
                sup: e.sup.clone(),
                chart_map: affine_to_dto(&e.chart_map),
            })
            .collect(),
        nondeg: nd.map(|data| {
            data.iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        NondegEntryDto {
                            image_dim: v.image_dim,
                            abelian_image_dim: v.abelian_image_dim,
                        },
                    )
                })
                .collect()
        }),
    }
}

pub fn skeleton_from_dto(dto: &SkeletonDto) -> Result<(SkeletonModel, Option<NondegData>), JsonError> {
    let strata = dto
        .strata
        .iter()
        .map(|s| Stratum { id: s.id.clone(), dim: s.dim, label: s.label.clone() })
        .collect();
    let simplices: Result<Vec<CanonicalSimplex>, JsonError> = dto
        .simplices
        .iter()
        .map(|s| {
            Ok(CanonicalSimplex {
                stratum_id: s.stratum_id.clone(),
                r: s.r,
                vpi: parse_rat(&s.vpi).map_err(|e| invalid("vpi", e))?,
            })
        })
        .collect();
    let incidence: Result<Vec<IncidenceEdge>, JsonError> = dto
        .incidence
        .iter()
        .map(|e| {
            Ok(IncidenceEdge {
                sub: e.sub.clone(),
                sup: e.sup.clone(),
                chart_map: affine_from_dto(&e.chart_map)?,
            })
        })
        .collect();
    let model = SkeletonModel {
        total_dim: dto.d,
        strata,
        simplices: simplices?,
        incidence: incidence?,
    };
    let nd = dto.nondeg.as_ref().map(|data| {
        data.iter()
            .map(|(k, v)| {
                (
                    k.clone(),
                    NondegEntry {
                        image_dim: v.image_dim,
                        abelian_image_dim: v.abelian_image_dim,
                    },
                )
            })
            .collect()
    });
    Ok((model, nd))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ExponentMapDto {
    #[serde(rename = "M")]
    pub m: Vec<Vec<i64>>,
    pub c: Vec<String>,
}

pub fn exponent_map_to_dto(f: &ExponentMap) -> ExponentMapDto {
    ExponentMapDto {
        m: f.matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| i64::try_from(x).expect("exponent fits i64"))
                    .collect()
            })
            .collect(),
        c: rat_vec(f.constants()),
    }
}

pub fn exponent_map_from_dto(dto: &ExponentMapDto) -> Result<ExponentMap, JsonError> {
    let c = parse_rat_vec(&dto.c, "exponent constants")?;
    let m: Vec<Vec<BigInt>> = dto
        .m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    ExponentMap::new(m, c).map_err(|e| invalid("exponent map", e))
}

pub type FmapsDto = BTreeMap<String, ExponentMapDto>;

pub fn fmaps_from_dto(dto: &FmapsDto) -> Result<FaffMaps, JsonError> {
    dto.iter()
        .map(|(k, v)| Ok((k.clone(), exponent_map_from_dto(v)?)))
        .collect()
}

pub fn fmaps_to_dto(f: &FaffMaps) -> FmapsDto {
    f.iter().map(|(k, v)| (k.clone(), exponent_map_to_dto(v))).collect()
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct HomDto {
    #[serde(rename = "L")]
    pub l: Vec<Vec<String>>,
    pub source_lattice: Vec<Vec<String>>,
    pub target_lattice: Vec<Vec<String>>,
}

pub fn hom_to_dto(h: &TropicalHom) -> HomDto {
    HomDto {
        l: matrix_to_rows(h.linear()),
        source_lattice: matrix_to_rows(h.source_lattice().basis()),
        target_lattice: matrix_to_rows(h.target_lattice().basis()),
    }
}

pub fn hom_from_dto(dto: &HomDto) -> Result<TropicalHom, JsonError> {
    let l = rows_to_matrix(&dto.l, "hom linear part")?;
    let sb = rows_to_matrix(&dto.source_lattice, "source lattice")?;
    let tb = rows_to_matrix(&dto.target_lattice, "target lattice")?;
    if sb.inverse().is_none() || tb.inverse().is_none() {
        return Err(invalid("hom", "lattice bases must have full rank"));
    }
    TropicalHom::new(l, Lattice::new(sb), Lattice::new(tb)).map_err(|e| invalid("hom", e))
}

// ---------------------------------------------------------------------
// rank calculus

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ProfileDto {
    pub dim: usize,
    pub simple: bool,
    pub torus_rank: BTreeMap<String, usize>,
}

pub fn profile_to_dto(p: &AbelianProfile) -> ProfileDto {
    ProfileDto { dim: p.dim, simple: p.simple, torus_rank: p.torus_rank.clone() }
}

pub fn profile_from_dto(dto: &ProfileDto) -> Result<AbelianProfile, JsonError> {
    AbelianProfile::new(dto.dim, dto.torus_rank.clone(), dto.simple)
        .map_err(|e| invalid("profile", e))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FactorDto {
    pub profile: ProfileDto,
    pub multiplicity: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct DecompositionDto {
    pub factors: Vec<FactorDto>,
}

pub fn decomposition_from_dto(dto: &DecompositionDto) -> Result<IsogenyDecomposition, JsonError> {
    let factors: Result<Vec<(AbelianProfile, usize)>, JsonError> = dto
        .factors
        .iter()
        .map(|f| Ok((profile_from_dto(&f.profile)?, f.multiplicity)))
        .collect();
    IsogenyDecomposition::new(factors?).map_err(|e| invalid("decomposition", e))
}

pub fn decomposition_to_dto(d: &IsogenyDecomposition) -> DecompositionDto {
    DecompositionDto {
        factors: d
            .factors
            .iter()
            .map(|(p, m)| FactorDto { profile: profile_to_dto(p), multiplicity: *m })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GraphDto {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CurveInputDto {
    pub genus: usize,
    pub graphs: BTreeMap<String, GraphDto>,
}

pub fn graph_from_dto(dto: &GraphDto) -> Result<DualGraph, JsonError> {
    DualGraph::new(
        dto.vertices.clone(),
        dto.edges.iter().map(|&[a, b]| (a, b)).collect(),
    )
    .map_err(|e| invalid("dual graph", e))
}

pub fn graph_to_dto(g: &DualGraph) -> GraphDto {
    GraphDto {
        vertices: g.genera.clone(),
        edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
    }
}

// ---------------------------------------------------------------------
// verdicts

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct WitnessDto {
    pub place: String,
    pub cell: usize,
    pub dim_sigma: usize,
    pub dim_alpha_sigma: usize,
    #[serde(rename = "N")]
    pub copies: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct VerdictDto {
    pub kind: String,
    pub witness: Option<WitnessDto>,
    pub rule: String,
}

pub fn verdict_to_dto(v: &Verdict) -> VerdictDto {
    VerdictDto {
        kind: v.kind.as_str().to_string(),
        witness: v.witness.as_ref().map(|w| WitnessDto {
            place: w.place.clone(),
            cell: w.cell,
            dim_sigma: w.dim_sigma,
            dim_alpha_sigma: w.dim_alpha_sigma,
            copies: w.copies,
        }),
        rule: v.rule.to_string(),
    }
}

pub fn verdict_from_dto(dto: &VerdictDto) -> Result<Verdict, JsonError> {
    let kind = match dto.kind.as_str() {
        "TropicallyTrivial" => VerdictKind::TropicallyTrivial,
        "ContradictionWitness" => VerdictKind::ContradictionWitness,
        "Inconclusive" => VerdictKind::Inconclusive,
        "InconsistentInput" => VerdictKind::InconsistentInput,
        other => return Err(invalid("verdict", format!("unknown kind {other:?}"))),
    };
    let rule: &'static str = match dto.rule.as_str() {
        "Thm6.2/Eq.6.2.1" => "Thm6.2/Eq.6.2.1",
        "Prop5.12" => "Prop5.12",
        "Lemma5.10" => "Lemma5.10",
        "Lemma7.14" => "Lemma7.14",
        other => return Err(invalid("verdict", format!("unknown rule {other:?}"))),
    };
    Ok(Verdict {
        kind,
        witness: dto.witness.as_ref().map(|w| Witness {
            place: w.place.clone(),
            cell: w.cell,
            dim_sigma: w.dim_sigma,
            dim_alpha_sigma: w.dim_alpha_sigma,
            copies: w.copies,
        }),
        rule,
    })
}

/// Canonical pretty serialization used for all emitted files.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String, JsonError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::segment_cells;
    use crate::rat::{rat, rint};

    fn circle() -> QuotientComplex {
        PeriodicComplex::validate(
            segment_cells(&[rint(0), rint(1), rint(2)]),
            Lattice::scaled_integers(rint(2)),
            ValueGroup::full(),
        )
        .unwrap()
        .quotient()
    }

    #[test]
    fn complex_round_trip() {
        let q = circle();
        let dto = quotient_to_dto(&q);
        let s = to_canonical_string(&dto).unwrap();
        let back: QuotientDto = serde_json::from_str(&s).unwrap();
        let q2 = quotient_from_dto(&back).unwrap();
        assert_eq!(q2, q);
        assert_eq!(to_canonical_string(&quotient_to_dto(&q2)).unwrap(), s);
    }

    #[test]
    fn measure_round_trip() {
        let q = circle();
        let seg = q.cells().iter().position(|c| c.dim() == 1).unwrap();
        let mu = PolytopalMeasure::delta(seg, &q).unwrap();
        let mu = mu.scale(&rat(3, 7)).unwrap();
        let dto = measure_to_dto(&mu);
        let s = to_canonical_string(&dto).unwrap();
        let back = measure_from_dto(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn verdict_round_trip() {
        let v = Verdict {
            kind: VerdictKind::ContradictionWitness,
            witness: Some(Witness {
                place: "v".into(),
                cell: 3,
                dim_sigma: 2,
                dim_alpha_sigma: 1,
                copies: 2,
            }),
            rule: "Thm6.2/Eq.6.2.1",
        };
        let s = to_canonical_string(&verdict_to_dto(&v)).unwrap();
        let back = verdict_from_dto(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let bad: Result<PolytopeDto, _> = serde_json::from_str("{\"ambient_dim\": 2}");
        assert!(bad.is_err());
        let dto = PolytopeDto { ambient_dim: 2, vertices: vec![vec!["1/0".into(), "0".into()]] };
        assert!(polytope_from_dto(&dto).is_err());
        let dto = PolytopeDto { ambient_dim: 2, vertices: vec![vec!["1".into()]] };
        assert!(polytope_from_dto(&dto).is_err());
    }
}
