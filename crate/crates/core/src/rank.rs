//! Degeneration-rank bookkeeping for abelian varieties: per-place torus
//! and abelian ranks, their additivity laws, the nowhere-degeneracy rank
//! and the reduction it drives, plus the dual-graph criterion for curves.
//!
//! Places are a finite set of ids; every unmentioned place is good
//! reduction (torus rank zero), which is how semiabelian reduction behaves
//! at all but finitely many places.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("decomposition contains a non-simple factor")]
    NotSimpleFactor,
    #[error("dual graph is not connected")]
    Disconnected,
    #[error("place {place}: vertex genera plus cycle rank give {got}, expected {expected}")]
    GenusMismatch { place: String, expected: usize, got: usize },
    #[error("{0}")]
    BadParams(String),
}

/// Per-place torus ranks of an abelian variety of the given dimension.
/// `simple` is a trusted input flag; simplicity is not decidable from
/// rank data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianProfile {
    pub dim: usize,
    pub torus_rank: BTreeMap<String, usize>,
    pub simple: bool,
}

impl AbelianProfile {
    pub fn new(
        dim: usize,
        torus_rank: BTreeMap<String, usize>,
        simple: bool,
    ) -> Result<AbelianProfile, RankError> {
        if torus_rank.values().any(|&n| n > dim) {
            return Err(RankError::BadParams("torus rank exceeds dimension".into()));
        }
        Ok(AbelianProfile { dim, torus_rank, simple })
    }

    pub fn trivial() -> AbelianProfile {
        AbelianProfile { dim: 0, torus_rank: BTreeMap::new(), simple: false }
    }

    /// Torus rank at a place; unmentioned places have good reduction.
    pub fn torus_rank_at(&self, place: &str) -> usize {
        self.torus_rank.get(place).copied().unwrap_or(0)
    }

    /// Abelian rank `b_v = dim - n_v`.
    pub fn abelian_rank_at(&self, place: &str) -> usize {
        self.dim - self.torus_rank_at(place)
    }

    pub fn places(&self) -> BTreeSet<&str> {
        self.torus_rank.keys().map(|s| s.as_str()).collect()
    }

    /// Product: dimensions and per-place torus ranks add.
    pub fn product(&self, other: &AbelianProfile) -> AbelianProfile {
        let mut torus_rank = BTreeMap::new();
        let places: BTreeSet<&str> = self.places().union(&other.places()).copied().collect();
        for p in places {
            let n = self.torus_rank_at(p) + other.torus_rank_at(p);
            if n > 0 {
                torus_rank.insert(p.to_string(), n);
            }
        }
        AbelianProfile { dim: self.dim + other.dim, torus_rank, simple: false }
    }

    /// Good reduction everywhere.
    pub fn is_nowhere_degenerate(&self) -> bool {
        self.torus_rank.values().all(|&n| n == 0)
    }

    /// Minimum abelian rank over the mentioned places (equals `dim` when
    /// nowhere degenerate).
    pub fn min_abelian_rank(&self) -> usize {
        self.torus_rank
            .keys()
            .map(|p| self.abelian_rank_at(p))
            .min()
            .unwrap_or(self.dim)
    }
}

/// Both additivity laws of a short exact sequence: dimensions, abelian
/// ranks and torus ranks add at every place.
pub fn check_exact_sequence(p1: &AbelianProfile, p2: &AbelianProfile, p3: &AbelianProfile) -> bool {
    if p1.dim + p3.dim != p2.dim {
        return false;
    }
    let mut places: BTreeSet<&str> = p1.places();
    places.extend(p2.places());
    places.extend(p3.places());
    places.into_iter().all(|p| {
        p1.torus_rank_at(p) + p3.torus_rank_at(p) == p2.torus_rank_at(p)
            && p1.abelian_rank_at(p) + p3.abelian_rank_at(p) == p2.abelian_rank_at(p)
    })
}

/// Isogenous abelian varieties share dimension and all per-place ranks.
pub fn check_isogeny_invariant(p1: &AbelianProfile, p2: &AbelianProfile) -> bool {
    if p1.dim != p2.dim {
        return false;
    }
    let mut places: BTreeSet<&str> = p1.places();
    places.extend(p2.places());
    places
        .into_iter()
        .all(|p| p1.torus_rank_at(p) == p2.torus_rank_at(p))
}

/// Decomposition of an abelian variety up to isogeny into simple factors
/// with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyDecomposition {
    pub factors: Vec<(AbelianProfile, usize)>,
}

impl IsogenyDecomposition {
    pub fn new(factors: Vec<(AbelianProfile, usize)>) -> Result<IsogenyDecomposition, RankError> {
        if factors.iter().any(|(_, m)| *m == 0) {
            return Err(RankError::BadParams("zero multiplicity".into()));
        }
        Ok(IsogenyDecomposition { factors })
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(f, m)| f.dim * m).sum()
    }

    /// Product profile of all factors with multiplicity.
    pub fn total_profile(&self) -> AbelianProfile {
        let mut acc = AbelianProfile::trivial();
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.product(f);
            }
        }
        acc
    }

    fn require_simple(&self) -> Result<(), RankError> {
        if self.factors.iter().all(|(f, _)| f.simple) {
            Ok(())
        } else {
            Err(RankError::NotSimpleFactor)
        }
    }

    /// Nowhere-degeneracy rank: a simple factor contributes its full
    /// dimension when it has good reduction everywhere and nothing at all
    /// once it degenerates somewhere.
    pub fn ndr(&self) -> Result<usize, RankError> {
        self.require_simple()?;
        Ok(self
            .factors
            .iter()
            .map(|(f, m)| if f.is_nowhere_degenerate() { f.dim * m } else { 0 })
            .sum())
    }

    /// Profile of the maximal nowhere degenerate abelian subvariety: the
    /// product of the nowhere degenerate factors. Its dimension is the
    /// nowhere-degeneracy rank.
    pub fn max_nowhere_degenerate_profile(&self) -> Result<AbelianProfile, RankError> {
        self.require_simple()?;
        let mut acc = AbelianProfile::trivial();
        for (f, m) in &self.factors {
            if f.is_nowhere_degenerate() {
                for _ in 0..*m {
                    acc = acc.product(f);
                }
            }
        }
        Ok(acc)
    }

    /// Concatenation of two decompositions (product of the varieties).
    pub fn concat(&self, other: &IsogenyDecomposition) -> IsogenyDecomposition {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        IsogenyDecomposition { factors }
    }
}

/// Verdict of the degeneration-rank reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjectureStatus {
    /// Rank at most one: settled outright.
    HoldsByNdrLeq1 { ndr: usize },
    /// Reduced to the nowhere degenerate part of the stated profile.
    ReducedToNowhereDegenerate { ndr: usize, profile: AbelianProfile },
}

impl ConjectureStatus {
    /// Citation tag naming the step that justifies the verdict.
    pub fn rule(&self) -> &'static str {
        match self {
            ConjectureStatus::HoldsByNdrLeq1 { .. } => "Cor7.9",
            ConjectureStatus::ReducedToNowhereDegenerate { .. } => "Thm7.11",
        }
    }
}

pub fn conjecture_status(d: &IsogenyDecomposition) -> Result<ConjectureStatus, RankError> {
    let ndr = d.ndr()?;
    if ndr <= 1 {
        Ok(ConjectureStatus::HoldsByNdrLeq1 { ndr })
    } else {
        Ok(ConjectureStatus::ReducedToNowhereDegenerate {
            ndr,
            profile: d.max_nowhere_degenerate_profile()?,
        })
    }
}

/// Dual graph of a stable reduction: vertices carry component genera;
/// loops and multi-edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub genera: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn new(genera: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<DualGraph, RankError> {
        let n = genera.len();
        if n == 0 {
            return Err(RankError::BadParams("graph has no vertices".into()));
        }
        if edges.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(RankError::BadParams("edge endpoint out of range".into()));
        }
        Ok(DualGraph { genera, edges })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.genera.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Cycle rank `#edges - #vertices + 1`; the torus rank of the
    /// Jacobian at this place. Zero exactly for trees (compact type).
    pub fn jacobian_torus_rank(&self) -> Result<usize, RankError> {
        if !self.is_connected() {
            return Err(RankError::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.genera.len())
    }

    /// Total arithmetic genus: component genera plus cycle rank.
    pub fn total_genus(&self) -> Result<usize, RankError> {
        Ok(self.genera.iter().sum::<usize>() + self.jacobian_torus_rank()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveStatus {
    /// Some place has non-compact type (a cycle in the dual graph).
    HoldsByThmA3 { place: String },
    /// Compact type everywhere: the Jacobian is nowhere degenerate and the
    /// question stays open at this level.
    Unresolved,
}

impl CurveStatus {
    pub fn rule(&self) -> &'static str {
        match self {
            CurveStatus::HoldsByThmA3 { .. } => "ThmA.3",
            CurveStatus::Unresolved => "Conj7.12",
        }
    }
}

/// Applies the dual-graph criterion over all places, after checking that
/// every graph realizes the stated genus.
pub fn curve_status(
    graphs: &BTreeMap<String, DualGraph>,
    genus: usize,
) -> Result<CurveStatus, RankError> {
    let mut witness: Option<String> = None;
    for (place, g) in graphs {
        let rank = g.jacobian_torus_rank()?;
        let total = g.genera.iter().sum::<usize>() + rank;
        if total != genus {
            return Err(RankError::GenusMismatch {
                place: place.clone(),
                expected: genus,
                got: total,
            });
        }
        if rank > 0 && witness.is_none() {
            witness = Some(place.clone());
        }
    }
    Ok(match witness {
        Some(place) => CurveStatus::HoldsByThmA3 { place },
        None => CurveStatus::Unresolved,
    })
}
