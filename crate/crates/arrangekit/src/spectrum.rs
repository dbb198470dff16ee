//! Arrangement-resolved structure of the N-body energy spectrum.
//!
//! Energy zero is the all-free configuration at rest, so every bound-state
//! energy in a catalog is strictly negative and the all-free dissociation
//! threshold is exactly 0. Each continuum arrangement opens at the sum of its
//! clusters' ground energies; the all-bound arrangement, when it exists,
//! carries the discrete spectrum below the first threshold and is numbered
//! g = 0. Continuum arrangements are numbered 1..G in ascending order of
//! their lowest threshold.
//!
//! An energy exactly at a threshold counts as open (closed interval at the
//! threshold).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::enumeration::ArrangementSet;
use crate::model::{Arrangement, Cluster, Composition};
use crate::notation;

/// Default cap on the number of Cartesian threshold combinations per ladder.
pub const DEFAULT_LADDER_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("no bound-state energies for cluster {cluster}")]
    MissingClusterEnergy { cluster: String },
    #[error("arrangement {arrangement} is all-bound and has no dissociation thresholds")]
    NotContinuum { arrangement: String },
    #[error("threshold ladder would have more than {cap} states")]
    CapExceeded { cap: u64 },
    #[error("bound-state energy {energy} for cluster {cluster} is not a finite negative number")]
    InvalidEnergy { cluster: String, energy: f64 },
    #[error("cluster {cluster} has an empty level list")]
    EmptyLevels { cluster: String },
    #[error("catalog cluster {cluster} is a single particle and cannot be a bound group")]
    SingletonCatalogEntry { cluster: String },
}

fn cluster_notation(members: &Composition) -> String {
    notation::print(
        &Arrangement::new([Cluster::new(members.clone())]).expect("single cluster"),
    )
}

/// Bound-state energies per cluster composition, ascending (ground first),
/// all strictly below the zero of energy.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyCatalog {
    levels: BTreeMap<Composition, Vec<f64>>,
    annotations: BTreeMap<Composition, Vec<String>>,
}

impl EnergyCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers the bound levels of a cluster; the list is sorted ascending.
    pub fn insert(
        &mut self,
        cluster: Composition,
        mut levels: Vec<f64>,
    ) -> Result<(), SpectrumError> {
        let name = cluster_notation(&cluster);
        if cluster.total_size() < 2 {
            return Err(SpectrumError::SingletonCatalogEntry { cluster: name });
        }
        if levels.is_empty() {
            return Err(SpectrumError::EmptyLevels { cluster: name });
        }
        for &energy in &levels {
            if !energy.is_finite() || energy >= 0.0 {
                return Err(SpectrumError::InvalidEnergy {
                    cluster: name,
                    energy,
                });
            }
        }
        levels.sort_by(f64::total_cmp);
        self.levels.insert(cluster, levels);
        Ok(())
    }

    /// Attaches a free-text note (e.g. a resonance remark) to a cluster.
    /// Notes are carried through to exports and never computed on.
    pub fn annotate(&mut self, cluster: Composition, note: impl Into<String>) {
        self.annotations.entry(cluster).or_default().push(note.into());
    }

    pub fn levels(&self, cluster: &Composition) -> Option<&[f64]> {
        self.levels.get(cluster).map(Vec::as_slice)
    }

    pub fn ground(&self, cluster: &Composition) -> Option<f64> {
        self.levels(cluster).map(|l| l[0])
    }

    pub fn annotations(&self, cluster: &Composition) -> &[String] {
        self.annotations
            .get(cluster)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

fn require_levels<'a>(
    cat: &'a EnergyCatalog,
    cluster: &Cluster,
) -> Result<&'a [f64], SpectrumError> {
    cat.levels(cluster.members())
        .ok_or_else(|| SpectrumError::MissingClusterEnergy {
            cluster: cluster_notation(cluster.members()),
        })
}

fn ensure_continuum(arr: &Arrangement) -> Result<(), SpectrumError> {
    if arr.is_single_cluster() && arr.total_size() >= 2 {
        return Err(SpectrumError::NotContinuum {
            arrangement: notation::print(arr),
        });
    }
    Ok(())
}

/// Lowest dissociation threshold of a continuum arrangement: the sum of each
/// bound cluster's ground energy, free particles contributing zero.
pub fn lowest_threshold(arr: &Arrangement, cat: &EnergyCatalog) -> Result<f64, SpectrumError> {
    ensure_continuum(arr)?;
    let mut total = 0.0;
    for group in arr.groups() {
        if group.cluster.size() >= 2 {
            let ground = require_levels(cat, &group.cluster)?[0];
            total += ground * group.multiplicity as f64;
        }
    }
    Ok(total)
}

/// A ladder rung: a threshold energy and how many level combinations land on
/// it exactly.
pub type LadderRung = (f64, u64);

/// Full threshold ladder of a continuum arrangement: every Cartesian sum of
/// one bound-state energy per bound cluster, ascending, with exactly equal
/// sums merged into a multiplicity.
pub fn threshold_ladder(
    arr: &Arrangement,
    cat: &EnergyCatalog,
) -> Result<Vec<LadderRung>, SpectrumError> {
    threshold_ladder_capped(arr, cat, DEFAULT_LADDER_CAP)
}

pub fn threshold_ladder_capped(
    arr: &Arrangement,
    cat: &EnergyCatalog,
    cap: u64,
) -> Result<Vec<LadderRung>, SpectrumError> {
    ensure_continuum(arr)?;

    // Pre-check the combination count in log space before any expansion.
    let mut log_states = 0.0f64;
    for group in arr.groups() {
        if group.cluster.size() >= 2 {
            let k = require_levels(cat, &group.cluster)?.len();
            log_states += group.multiplicity as f64 * (k as f64).ln();
            if log_states > (cap as f64).ln() + 1e-9 {
                return Err(SpectrumError::CapExceeded { cap });
            }
        }
    }

    let mut ladder: Vec<LadderRung> = vec![(0.0, 1)];
    for group in arr.groups() {
        if group.cluster.size() < 2 {
            continue;
        }
        let levels = require_levels(cat, &group.cluster)?;
        let base: Vec<LadderRung> = levels.iter().map(|&e| (e, 1)).collect();
        let group_ladder = rung_power(&base, group.multiplicity);
        ladder = rung_product(&ladder, &group_ladder);
    }
    Ok(ladder)
}

fn rung_product(a: &[LadderRung], b: &[LadderRung]) -> Vec<LadderRung> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &(ea, ma) in a {
        for &(eb, mb) in b {
            out.push((ea + eb, ma * mb));
        }
    }
    merge_rungs(out)
}

fn rung_power(base: &[LadderRung], exponent: u64) -> Vec<LadderRung> {
    let mut result = vec![(0.0, 1)];
    let mut square = base.to_vec();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = rung_product(&result, &square);
        }
        e >>= 1;
        if e > 0 {
            square = rung_product(&square, &square);
        }
    }
    result
}

fn merge_rungs(mut rungs: Vec<LadderRung>) -> Vec<LadderRung> {
    rungs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<LadderRung> = Vec::with_capacity(rungs.len());
    for (energy, multiplicity) in rungs {
        match merged.last_mut() {
            Some(last) if last.0 == energy => last.1 += multiplicity,
            _ => merged.push((energy, multiplicity)),
        }
    }
    merged
}

/// One arrangement's place in the spectrum layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub arrangement: Arrangement,
    pub g: u64,
    /// None for the all-bound arrangement.
    pub lowest_threshold: Option<f64>,
    /// None for the all-bound arrangement.
    pub ladder: Option<Vec<LadderRung>>,
    /// Catalog levels of the all-bound cluster, when known.
    pub bound_levels: Option<Vec<f64>>,
    pub is_all_bound: bool,
    pub is_all_free: bool,
}

/// Result of an open-arrangement query at a fixed energy.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenArrangements {
    pub count: u64,
    pub open: Vec<Arrangement>,
}

/// The g-numbered spectrum layout of an arrangement set.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLayout {
    entries: Vec<SpectrumEntry>,
    degenerate_thresholds: Vec<(f64, Vec<u64>)>,
    diagnostics: Vec<String>,
}

impl SpectrumLayout {
    /// Entries in ascending g order.
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn entry_for_g(&self, g: u64) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.g == g)
    }

    /// Exact threshold ties, each as (threshold, g values sharing it).
    /// Tie order within a group is the canonical notation order.
    pub fn degenerate_thresholds(&self) -> &[(f64, Vec<u64>)] {
        &self.degenerate_thresholds
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    /// Continuum arrangements open at energy `E` (threshold-coincident states
    /// count as open), in g order. The count equals the largest g whose
    /// threshold is at or below `E`, or 0 below the first threshold.
    pub fn open_arrangements(&self, energy: f64) -> OpenArrangements {
        let open: Vec<Arrangement> = self
            .entries
            .iter()
            .filter(|e| matches!(e.lowest_threshold, Some(t) if t <= energy))
            .map(|e| e.arrangement.clone())
            .collect();
        OpenArrangements {
            count: open.len() as u64,
            open,
        }
    }
}

/// Numbers every arrangement of `set` by the energy ordering of its lowest
/// threshold: all-bound (single cluster of size >= 2) is g = 0; continuum
/// arrangements get g = 1..G ascending in threshold, exact ties broken by
/// canonical notation order and reported in the layout diagnostics.
///
/// A lone free particle (N = 1) is a continuum arrangement with threshold 0.
pub fn assign_g(set: &ArrangementSet, cat: &EnergyCatalog) -> Result<SpectrumLayout, SpectrumError> {
    assign_g_capped(set, cat, DEFAULT_LADDER_CAP)
}

pub fn assign_g_capped(
    set: &ArrangementSet,
    cat: &EnergyCatalog,
    ladder_cap: u64,
) -> Result<SpectrumLayout, SpectrumError> {
    let mut all_bound: Option<&Arrangement> = None;
    let mut continuum: Vec<(f64, String, &Arrangement)> = Vec::new();
    for arr in set.iter() {
        if arr.is_single_cluster() && arr.total_size() >= 2 {
            all_bound = Some(arr);
        } else {
            let threshold = lowest_threshold(arr, cat)?;
            continuum.push((threshold, notation::print(arr), arr));
        }
    }
    continuum.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let mut entries = Vec::with_capacity(set.len());
    if let Some(arr) = all_bound {
        let bound_levels = cat
            .levels(arr.groups()[0].cluster.members())
            .map(<[f64]>::to_vec);
        entries.push(SpectrumEntry {
            arrangement: arr.clone(),
            g: 0,
            lowest_threshold: None,
            ladder: None,
            bound_levels,
            is_all_bound: true,
            is_all_free: false,
        });
    }
    for (index, (threshold, _, arr)) in continuum.iter().enumerate() {
        let g = index as u64 + 1;
        let ladder = threshold_ladder_capped(arr, cat, ladder_cap)?;
        entries.push(SpectrumEntry {
            arrangement: (*arr).clone(),
            g,
            lowest_threshold: Some(*threshold),
            ladder: Some(ladder),
            bound_levels: None,
            is_all_bound: false,
            is_all_free: arr.is_all_free(),
        });
    }

    let mut degenerate: Vec<(f64, Vec<u64>)> = Vec::new();
    let mut index = 0;
    while index < continuum.len() {
        let mut span = index + 1;
        while span < continuum.len() && continuum[span].0 == continuum[index].0 {
            span += 1;
        }
        if span - index > 1 {
            degenerate.push((
                continuum[index].0,
                (index..span).map(|i| i as u64 + 1).collect(),
            ));
        }
        index = span;
    }

    let mut diagnostics: Vec<String> = degenerate
        .iter()
        .map(|(threshold, gs)| {
            format!(
                "degenerate threshold {threshold}: arrangements g = {gs:?} share it; ordering within the tie is notational"
            )
        })
        .collect();
    if let (Some(first), Some(entry)) = (
        continuum.first(),
        entries.iter().find(|e| e.is_all_bound),
    ) {
        if let Some(levels) = &entry.bound_levels {
            if levels[0] >= first.0 {
                diagnostics.push(format!(
                    "all-bound ground energy {} is not below the first threshold {}",
                    levels[0], first.0
                ));
            }
        }
    }

    Ok(SpectrumLayout {
        entries,
        degenerate_thresholds: degenerate,
        diagnostics,
    })
}

/// One exported arrangement record; field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub arrangement: String,
    pub g: u64,
    pub lowest_threshold: Option<f64>,
    pub ladder: Option<Vec<LadderRung>>,
    pub bound_levels: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
}

/// The JSON-compatible spectrum document: one record per arrangement in
/// ascending g order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDocument {
    pub arrangements: Vec<SpectrumRecord>,
}

/// Emits the layout as a structured document, sufficient to redraw the
/// threshold diagram of the spectrum.
pub fn export_spectrum(layout: &SpectrumLayout, cat: &EnergyCatalog) -> SpectrumDocument {
    let arrangements = layout
        .entries()
        .iter()
        .map(|entry| {
            let mut annotations: Vec<String> = Vec::new();
            for group in entry.arrangement.groups() {
                if group.cluster.size() >= 2 {
                    annotations.extend(cat.annotations(group.cluster.members()).iter().cloned());
                }
            }
            SpectrumRecord {
                arrangement: notation::print(&entry.arrangement),
                g: entry.g,
                lowest_threshold: entry.lowest_threshold,
                ladder: entry.ladder.clone(),
                bound_levels: entry.bound_levels.clone(),
                annotations,
            }
        })
        .collect();
    SpectrumDocument { arrangements }
}
