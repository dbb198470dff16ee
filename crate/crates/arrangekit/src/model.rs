//! Canonical data model: species, compositions, clusters, and arrangements.
//!
//! Identical particles are represented purely by species multiplicity; no
//! individual particle labels exist anywhere in the model. Distinguishable
//! particles that share a chemical identity must be declared as distinct
//! species by the caller.
//!
//! All types are immutable values after construction and are always held in
//! canonical form, so equality doubles as semantic identity.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Errors raised while constructing model values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid species name `{0}`: expected a letter followed by letters or digits, with an optional charge suffix")]
    InvalidSpeciesName(String),
    #[error("duplicate species `{0}`")]
    DuplicateSpecies(String),
    #[error("species `{0}` has multiplicity 0; multiplicities must be at least 1")]
    ZeroMultiplicity(String),
    #[error("composition has no particles")]
    EmptyComposition,
    #[error("species `{name}` is not declared identical but appears with multiplicity {count}; give distinguishable particles distinct names")]
    DistinguishableMultiplicity { name: String, count: u64 },
    #[error("undeclared species `{0}`")]
    UndeclaredSpecies(String),
    #[error("clusters do not partition the composition: species `{species}` totals {got}, expected {expected}")]
    ConservationViolation {
        species: String,
        got: u64,
        expected: u64,
    },
    #[error("particle count overflow")]
    CountOverflow,
}

/// Scans a species token starting at byte `start` of `input`.
///
/// Token shape: a letter, then letters or digits, then an optional charge
/// suffix (`-`, `+`, `^D+`, `^D-`, `^+`, `^-` with `D` a digit run). Returns
/// the byte offset one past the token, or `None` when no token starts there.
/// A `^` that is not completed by a sign is not part of the token.
pub(crate) fn scan_species_token(input: &str, start: usize) -> Option<usize> {
    let bytes = input.as_bytes();
    let mut pos = start;
    if pos >= bytes.len() || !bytes[pos].is_ascii_alphabetic() {
        return None;
    }
    pos += 1;
    while pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
        pos += 1;
    }
    // Optional charge suffix.
    let mut charge_end = pos;
    if charge_end < bytes.len() && bytes[charge_end] == b'^' {
        charge_end += 1;
        while charge_end < bytes.len() && bytes[charge_end].is_ascii_digit() {
            charge_end += 1;
        }
        if charge_end < bytes.len() && (bytes[charge_end] == b'+' || bytes[charge_end] == b'-') {
            pos = charge_end + 1;
        }
    } else if charge_end < bytes.len() && (bytes[charge_end] == b'+' || bytes[charge_end] == b'-') {
        pos = charge_end + 1;
    }
    Some(pos)
}

/// Returns true when `s` is exactly one species token.
pub fn is_species_token(s: &str) -> bool {
    scan_species_token(s, 0) == Some(s.len())
}

/// A validated species token such as `A`, `Rb`, `e-`, or `A^2+`.
///
/// The charge suffix is part of the name and carries no semantics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpeciesName(String);

impl SpeciesName {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if is_species_token(&name) {
            Ok(SpeciesName(name))
        } else {
            Err(ModelError::InvalidSpeciesName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SpeciesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for SpeciesName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A declared particle kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    name: SpeciesName,
    identical: bool,
}

impl Species {
    pub fn new(name: impl Into<String>, identical: bool) -> Result<Self, ModelError> {
        Ok(Species {
            name: SpeciesName::new(name)?,
            identical,
        })
    }

    /// A species whose particles are mutually identical.
    pub fn identical(name: impl Into<String>) -> Result<Self, ModelError> {
        Self::new(name, true)
    }

    /// A species standing for a single distinguishable particle.
    pub fn distinguishable(name: impl Into<String>) -> Result<Self, ModelError> {
        Self::new(name, false)
    }

    pub fn name(&self) -> &SpeciesName {
        &self.name
    }

    pub fn is_identical_class(&self) -> bool {
        self.identical
    }
}

/// The set of species declared for a system, keyed by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpeciesTable {
    species: BTreeMap<SpeciesName, Species>,
}

impl SpeciesTable {
    pub fn new(species: impl IntoIterator<Item = Species>) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for sp in species {
            let name = sp.name().clone();
            if map.insert(name.clone(), sp).is_some() {
                return Err(ModelError::DuplicateSpecies(name.as_str().to_owned()));
            }
        }
        Ok(SpeciesTable { species: map })
    }

    pub fn get(&self, name: &SpeciesName) -> Option<&Species> {
        self.species.get(name)
    }

    pub fn contains(&self, name: &SpeciesName) -> bool {
        self.species.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Species> {
        self.species.values()
    }
}

/// A multiset of particles: species with positive multiplicities.
///
/// Species are stored in lexicographic name order, so two compositions with
/// the same content are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    counts: BTreeMap<SpeciesName, u64>,
}

impl Composition {
    /// Builds a composition from (species, multiplicity) pairs. Multiplicities
    /// of a repeated species accumulate; zero multiplicities are rejected.
    pub fn new(
        pairs: impl IntoIterator<Item = (SpeciesName, u64)>,
    ) -> Result<Self, ModelError> {
        let mut counts: BTreeMap<SpeciesName, u64> = BTreeMap::new();
        for (name, count) in pairs {
            if count == 0 {
                return Err(ModelError::ZeroMultiplicity(name.as_str().to_owned()));
            }
            let slot = counts.entry(name).or_insert(0);
            *slot = slot.checked_add(count).ok_or(ModelError::CountOverflow)?;
        }
        if counts.is_empty() {
            return Err(ModelError::EmptyComposition);
        }
        Ok(Composition { counts })
    }

    /// Single-species composition.
    pub fn of(name: SpeciesName, count: u64) -> Result<Self, ModelError> {
        Self::new([(name, count)])
    }

    /// Total particle count N.
    pub fn total_size(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Multiplicity of `name` (0 when absent).
    pub fn count_of(&self, name: &SpeciesName) -> u64 {
        self.counts.get(name).copied().unwrap_or(0)
    }

    pub fn species_count(&self) -> usize {
        self.counts.len()
    }

    /// Iterates (species, multiplicity) in lexicographic species order.
    pub fn counts(&self) -> impl Iterator<Item = (&SpeciesName, u64)> {
        self.counts.iter().map(|(name, &count)| (name, count))
    }

    pub fn species(&self) -> impl Iterator<Item = &SpeciesName> {
        self.counts.keys()
    }

    /// True when every multiplicity is 1 (all particles distinguishable).
    pub fn all_multiplicity_one(&self) -> bool {
        self.counts.values().all(|&c| c == 1)
    }

    /// Adds `times` copies of `other` into this composition.
    pub(crate) fn accumulate(&mut self, other: &Composition, times: u64) -> Result<(), ModelError> {
        for (name, count) in other.counts() {
            let add = count.checked_mul(times).ok_or(ModelError::CountOverflow)?;
            let slot = self.counts.entry(name.clone()).or_insert(0);
            *slot = slot.checked_add(add).ok_or(ModelError::CountOverflow)?;
        }
        Ok(())
    }
}

/// A bound group: a non-empty multiset of species. A singleton cluster is a
/// free particle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cluster {
    members: Composition,
}

impl Cluster {
    pub fn new(members: Composition) -> Self {
        Cluster { members }
    }

    pub fn singleton(name: SpeciesName) -> Self {
        Cluster {
            members: Composition::of(name, 1).expect("singleton composition"),
        }
    }

    pub fn members(&self) -> &Composition {
        &self.members
    }

    pub fn size(&self) -> u64 {
        self.members.total_size()
    }

    pub fn is_singleton(&self) -> bool {
        self.size() == 1
    }
}

impl PartialOrd for Cluster {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cluster {
    /// Canonical display order: larger clusters first; equal sizes compare by
    /// the expanded member sequence (lexicographic over species names), so
    /// `{A,A}` precedes `{A,B}`.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .size()
            .cmp(&self.size())
            .then_with(|| expanded_member_cmp(&self.members, &other.members))
    }
}

/// Compares two compositions as expanded, lexicographically sorted species
/// sequences without materializing them.
fn expanded_member_cmp(a: &Composition, b: &Composition) -> Ordering {
    let mut ia = a.counts();
    let mut ib = b.counts();
    let (mut ca, mut cb) = (ia.next(), ib.next());
    loop {
        match (ca, cb) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((na, ka)), Some((nb, kb))) => {
                match na.cmp(nb) {
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => {}
                }
                match ka.cmp(&kb) {
                    // More copies of the shared earlier species reads as the
                    // lexicographically smaller expanded sequence, provided
                    // something follows; the end-of-sequence case is resolved
                    // on the next loop iteration.
                    Ordering::Equal => {
                        ca = ia.next();
                        cb = ib.next();
                    }
                    Ordering::Less => {
                        ca = ia.next();
                        return match ca {
                            None => Ordering::Less,
                            Some(_) => Ordering::Greater,
                        };
                    }
                    Ordering::Greater => {
                        cb = ib.next();
                        return match cb {
                            None => Ordering::Greater,
                            Some(_) => Ordering::Less,
                        };
                    }
                }
            }
        }
    }
}

/// A run of equal clusters inside an arrangement's canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusterGroup {
    pub cluster: Cluster,
    pub multiplicity: u64,
}

/// A multiset of clusters partitioning a composition.
///
/// Always held in canonical form: groups sorted in canonical cluster order
/// with equal clusters contracted to a multiplicity. Canonical-form equality
/// is the identity notion for arrangements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    groups: Vec<ClusterGroup>,
    composition: Composition,
}

impl Arrangement {
    /// Canonicalizes a list of clusters into an arrangement; the provenance
    /// composition is derived as their union.
    pub fn new(clusters: impl IntoIterator<Item = Cluster>) -> Result<Self, ModelError> {
        Self::from_groups(clusters.into_iter().map(|c| (c, 1)))
    }

    /// Canonicalizes pre-contracted (cluster, multiplicity) groups.
    pub fn from_groups(
        groups: impl IntoIterator<Item = (Cluster, u64)>,
    ) -> Result<Self, ModelError> {
        let mut groups: Vec<(Cluster, u64)> = groups
            .into_iter()
            .map(|(cluster, multiplicity)| {
                if multiplicity == 0 {
                    Err(ModelError::ZeroMultiplicity(
                        cluster.members().species().next().unwrap().as_str().to_owned(),
                    ))
                } else {
                    Ok((cluster, multiplicity))
                }
            })
            .collect::<Result<_, _>>()?;
        if groups.is_empty() {
            return Err(ModelError::EmptyComposition);
        }
        groups.sort_by(|a, b| a.0.cmp(&b.0));

        let mut contracted: Vec<ClusterGroup> = Vec::with_capacity(groups.len());
        let mut composition: Option<Composition> = None;
        for (cluster, multiplicity) in groups {
            match composition.as_mut() {
                None => composition = Some(scaled(&cluster, multiplicity)?),
                Some(comp) => comp.accumulate(cluster.members(), multiplicity)?,
            }
            match contracted.last_mut() {
                Some(last) if last.cluster == cluster => {
                    last.multiplicity = last
                        .multiplicity
                        .checked_add(multiplicity)
                        .ok_or(ModelError::CountOverflow)?;
                }
                _ => contracted.push(ClusterGroup {
                    cluster,
                    multiplicity,
                }),
            }
        }
        Ok(Arrangement {
            groups: contracted,
            composition: composition.expect("non-empty groups"),
        })
    }

    /// Like [`Arrangement::new`] but verifies the clusters partition
    /// `composition` exactly.
    pub fn new_checked(
        clusters: impl IntoIterator<Item = Cluster>,
        composition: &Composition,
    ) -> Result<Self, ModelError> {
        let arr = Self::new(clusters)?;
        arr.check_conservation(composition)?;
        Ok(arr)
    }

    fn check_conservation(&self, expected: &Composition) -> Result<(), ModelError> {
        for (name, count) in expected.counts() {
            let got = self.composition.count_of(name);
            if got != count {
                return Err(ModelError::ConservationViolation {
                    species: name.as_str().to_owned(),
                    got,
                    expected: count,
                });
            }
        }
        for (name, got) in self.composition.counts() {
            if expected.count_of(name) == 0 {
                return Err(ModelError::ConservationViolation {
                    species: name.as_str().to_owned(),
                    got,
                    expected: 0,
                });
            }
        }
        Ok(())
    }

    /// Contracted groups in canonical order.
    pub fn groups(&self) -> &[ClusterGroup] {
        &self.groups
    }

    /// Expands groups into individual clusters, in canonical order.
    /// The iterator yields `multiplicity` repetitions per group.
    pub fn iter_clusters(&self) -> impl Iterator<Item = &Cluster> {
        self.groups.iter().flat_map(|g| {
            std::iter::repeat_n(&g.cluster, usize::try_from(g.multiplicity).unwrap_or(usize::MAX))
        })
    }

    /// Number of clusters (counting multiplicity).
    pub fn cluster_count(&self) -> u64 {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    /// The provenance composition this arrangement partitions.
    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn total_size(&self) -> u64 {
        self.composition.total_size()
    }

    /// True when every cluster is a singleton (all particles free).
    pub fn is_all_free(&self) -> bool {
        self.groups.iter().all(|g| g.cluster.is_singleton())
    }

    /// True when the arrangement consists of exactly one cluster.
    pub fn is_single_cluster(&self) -> bool {
        self.groups.len() == 1 && self.groups[0].multiplicity == 1
    }
}

fn scaled(cluster: &Cluster, times: u64) -> Result<Composition, ModelError> {
    let mut comp = cluster.members().clone();
    if times > 1 {
        let base = cluster.members().clone();
        comp.accumulate(&base, times - 1)?;
    }
    Ok(comp)
}

impl PartialOrd for Arrangement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arrangement {
    /// Lexicographic over the expanded canonical cluster sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut ia = self.groups.iter();
        let mut ib = other.groups.iter();
        let (mut ga, mut gb) = (ia.next(), ib.next());
        let (mut ra, mut rb) = (
            ga.map_or(0, |g| g.multiplicity),
            gb.map_or(0, |g| g.multiplicity),
        );
        loop {
            match (ga, gb) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(a), Some(b)) => {
                    match a.cluster.cmp(&b.cluster) {
                        Ordering::Equal => {
                            let step = ra.min(rb);
                            ra -= step;
                            rb -= step;
                            if ra == 0 {
                                ga = ia.next();
                                ra = ga.map_or(0, |g| g.multiplicity);
                            }
                            if rb == 0 {
                                gb = ib.next();
                                rb = gb.map_or(0, |g| g.multiplicity);
                            }
                        }
                        ord => return ord,
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> SpeciesName {
        SpeciesName::new(s).unwrap()
    }

    fn cluster(parts: &[(&str, u64)]) -> Cluster {
        Cluster::new(
            Composition::new(parts.iter().map(|&(s, k)| (name(s), k))).unwrap(),
        )
    }

    #[test]
    fn species_token_validation() {
        for ok in ["A", "Rb", "e-", "A+", "A^2+", "A^+", "e^-", "Rb87", "X^12-"] {
            assert!(is_species_token(ok), "{ok} should be valid");
        }
        for bad in ["", "2A", "A B", "A^", "A^2", "(A)", "A,", "_A", "A_2"] {
            assert!(!is_species_token(bad), "{bad} should be invalid");
        }
    }

    #[test]
    fn composition_totals() {
        let c = Composition::new([(name("A"), 3)]).unwrap();
        assert_eq!(c.total_size(), 3);
        let c = Composition::new([(name("A"), 2), (name("B"), 1)]).unwrap();
        assert_eq!(c.total_size(), 3);
        let c = Composition::new([(name("X"), 1), (name("e"), 2)]).unwrap();
        assert_eq!(c.total_size(), 3);
    }

    #[test]
    fn composition_rejects_degenerate_input() {
        assert_eq!(
            Composition::new([(name("A"), 0)]),
            Err(ModelError::ZeroMultiplicity("A".into()))
        );
        assert_eq!(
            Composition::new(std::iter::empty()),
            Err(ModelError::EmptyComposition)
        );
    }

    #[test]
    fn canonicalize_sorts_members_and_groups() {
        // [{B,A},{C}] -> [{A,B},{C}]
        let arr = Arrangement::new([cluster(&[("B", 1), ("A", 1)]), cluster(&[("C", 1)])]).unwrap();
        assert_eq!(arr.groups().len(), 2);
        let members: Vec<_> = arr.groups()[0]
            .cluster
            .members()
            .species()
            .map(|s| s.as_str().to_owned())
            .collect();
        assert_eq!(members, ["A", "B"]);
    }

    #[test]
    fn canonicalize_contracts_repeats() {
        let arr = Arrangement::new([
            cluster(&[("A", 1)]),
            cluster(&[("A", 1)]),
            cluster(&[("A", 1)]),
        ])
        .unwrap();
        assert_eq!(arr.groups().len(), 1);
        assert_eq!(arr.groups()[0].multiplicity, 3);

        let arr = Arrangement::new([cluster(&[("A", 2)]), cluster(&[("A", 2)])]).unwrap();
        assert_eq!(arr.groups().len(), 1);
        assert_eq!(arr.groups()[0].multiplicity, 2);
        assert_eq!(arr.composition().count_of(&name("A")), 4);
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let a = Arrangement::new([cluster(&[("A", 2)]), cluster(&[("B", 1)]), cluster(&[("A", 1)])])
            .unwrap();
        let b = Arrangement::new([cluster(&[("B", 1)]), cluster(&[("A", 1)]), cluster(&[("A", 2)])])
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonicalize_idempotent() {
        let arr = Arrangement::new([cluster(&[("A", 1), ("B", 1)]), cluster(&[("A", 1)])]).unwrap();
        let again = Arrangement::from_groups(
            arr.groups()
                .iter()
                .map(|g| (g.cluster.clone(), g.multiplicity)),
        )
        .unwrap();
        assert_eq!(arr, again);
    }

    #[test]
    fn cluster_order_puts_larger_first() {
        let big = cluster(&[("A", 3)]);
        let small = cluster(&[("A", 1)]);
        assert!(big < small);

        // Equal size: expanded sequence [A,A] < [A,B].
        let aa = cluster(&[("A", 2)]);
        let ab = cluster(&[("A", 1), ("B", 1)]);
        assert!(aa < ab);

        // [A,C] < [B,B].
        let ac = cluster(&[("A", 1), ("C", 1)]);
        let bb = cluster(&[("B", 2)]);
        assert!(ac < bb);
    }

    #[test]
    fn conservation_check() {
        let comp = Composition::new([(name("A"), 2), (name("B"), 1)]).unwrap();
        let ok = Arrangement::new_checked(
            [cluster(&[("A", 2)]), cluster(&[("B", 1)])],
            &comp,
        );
        assert!(ok.is_ok());

        let bad = Arrangement::new_checked([cluster(&[("A", 2)])], &comp);
        assert!(matches!(bad, Err(ModelError::ConservationViolation { .. })));
    }

    #[test]
    fn all_free_and_single_cluster_flags() {
        let free = Arrangement::new([cluster(&[("A", 1)]), cluster(&[("B", 1)])]).unwrap();
        assert!(free.is_all_free());
        assert!(!free.is_single_cluster());

        let bound = Arrangement::new([cluster(&[("A", 2), ("B", 1)])]).unwrap();
        assert!(bound.is_single_cluster());
        assert!(!bound.is_all_free());

        let single = Arrangement::new([cluster(&[("A", 1)])]).unwrap();
        assert!(single.is_all_free());
        assert!(single.is_single_cluster());
    }
}
