//! Enumeration and counting of arrangements under a binding rule.
//!
//! An arrangement of a composition is a multiset partition of its particles
//! into clusters, filtered so that every cluster of size >= 2 satisfies the
//! system's binding predicate. Singleton clusters (free particles) are always
//! permitted.
//!
//! Generation is recursive in canonical non-increasing cluster order: the
//! first cluster is the canonically largest, and each recursion step only
//! considers clusters at or after the previous one in canonical order. Every
//! arrangement is therefore produced exactly once, in a deterministic order,
//! with no deduplication pass.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use thiserror::Error;

use crate::combinatorics::{
    bell_asymptotic, bell_capped, biguint_from_log, partition_count_capped, CombinatoricsError,
    DEFAULT_BELL_CAP, DEFAULT_PARTITION_CAP,
};
use crate::model::{
    Arrangement, Cluster, Composition, ModelError, SpeciesName, SpeciesTable,
};
use crate::BigCount;

/// Default cap on the pre-estimated candidate count for enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("estimated arrangement count {estimate} exceeds the cap {cap}")]
    CapExceeded { estimate: BigCount, cap: u64 },
    #[error("allowlist entry `{cluster}` has fewer than 2 particles; singletons are always permitted and never listed")]
    InvalidAllowlistEntry { cluster: String },
    #[error("allowlist entry uses undeclared species `{0}`")]
    UndeclaredAllowlistSpecies(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

/// Binding rule kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingMode {
    /// Every cluster composition can bind.
    All,
    /// No cluster of size >= 2 can bind (e.g. a system of electrons).
    None,
    /// Only the listed cluster compositions can bind.
    Allowlist,
}

/// Decides whether a cluster composition can form a bound group.
///
/// The predicate sees only the cluster's species counts, never its context,
/// and need not be monotone: `{X,e}` may bind while `{X,e,e}` does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingPredicate {
    mode: BindingMode,
    allowlist: BTreeSet<Composition>,
}

impl BindingPredicate {
    pub fn all() -> Self {
        BindingPredicate {
            mode: BindingMode::All,
            allowlist: BTreeSet::new(),
        }
    }

    pub fn none() -> Self {
        BindingPredicate {
            mode: BindingMode::None,
            allowlist: BTreeSet::new(),
        }
    }

    /// Allowlist mode; entries must have size >= 2.
    pub fn allowlist(
        entries: impl IntoIterator<Item = Composition>,
    ) -> Result<Self, EnumerationError> {
        let mut set = BTreeSet::new();
        for entry in entries {
            if entry.total_size() < 2 {
                return Err(EnumerationError::InvalidAllowlistEntry {
                    cluster: entry
                        .species()
                        .next()
                        .map(|s| s.as_str().to_owned())
                        .unwrap_or_default(),
                });
            }
            set.insert(entry);
        }
        Ok(BindingPredicate {
            mode: BindingMode::Allowlist,
            allowlist: set,
        })
    }

    pub fn mode(&self) -> BindingMode {
        self.mode
    }

    pub fn allowlist_entries(&self) -> impl Iterator<Item = &Composition> {
        self.allowlist.iter()
    }

    /// True when `cluster` may appear as a bound group (or is a singleton).
    pub fn permits(&self, cluster: &Composition) -> bool {
        if cluster.total_size() == 1 {
            return true;
        }
        match self.mode {
            BindingMode::All => true,
            BindingMode::None => false,
            BindingMode::Allowlist => self.allowlist.contains(cluster),
        }
    }
}

/// A fully validated system: declared species, a composition over them, and
/// the binding rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    species: SpeciesTable,
    composition: Composition,
    binding: BindingPredicate,
}

impl SystemSpec {
    pub fn new(
        species: SpeciesTable,
        composition: Composition,
        binding: BindingPredicate,
    ) -> Result<Self, EnumerationError> {
        for (name, count) in composition.counts() {
            match species.get(name) {
                None => {
                    return Err(ModelError::UndeclaredSpecies(name.as_str().to_owned()).into())
                }
                Some(sp) if !sp.is_identical_class() && count > 1 => {
                    return Err(ModelError::DistinguishableMultiplicity {
                        name: name.as_str().to_owned(),
                        count,
                    }
                    .into())
                }
                Some(_) => {}
            }
        }
        for entry in binding.allowlist_entries() {
            for name in entry.species() {
                if !species.contains(name) {
                    return Err(EnumerationError::UndeclaredAllowlistSpecies(
                        name.as_str().to_owned(),
                    ));
                }
            }
        }
        Ok(SystemSpec {
            species,
            composition,
            binding,
        })
    }

    pub fn species(&self) -> &SpeciesTable {
        &self.species
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn binding(&self) -> &BindingPredicate {
        &self.binding
    }
}

/// The complete arrangement list of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementSet {
    arrangements: Vec<Arrangement>,
    count: BigCount,
    has_all_bound: bool,
    has_all_free: bool,
}

impl ArrangementSet {
    pub fn arrangements(&self) -> &[Arrangement] {
        &self.arrangements
    }

    /// M, the total number of arrangements.
    pub fn count(&self) -> &BigCount {
        &self.count
    }

    /// True when the single-cluster arrangement is present (for N = 1 the
    /// lone arrangement counts).
    pub fn has_all_bound(&self) -> bool {
        self.has_all_bound
    }

    /// True when the all-singletons arrangement is present.
    pub fn has_all_free(&self) -> bool {
        self.has_all_free
    }

    pub fn len(&self) -> usize {
        self.arrangements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arrangement> {
        self.arrangements.iter()
    }
}

/// Bounds check report: 1 <= M <= B(N) always, and p(N) <= M <= B(N) when
/// every configuration binds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub count: BigCount,
    pub bell_bound: BigCount,
    /// Present only in bind-all mode, where it is a valid lower bound.
    pub partition_bound: Option<BigCount>,
    pub general_ok: bool,
    pub tighter_ok: Option<bool>,
}

/// Count-vector cluster representation aligned to a fixed species order.
type CountVec = Vec<u64>;

fn vec_total(v: &CountVec) -> u64 {
    v.iter().sum()
}

/// Canonical cluster order on aligned count vectors: larger size first, ties
/// by expanded member sequence (more of an earlier species sorts first).
fn canon_cmp(a: &CountVec, b: &CountVec) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match vec_total(b).cmp(&vec_total(a)) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b.iter()) {
        match y.cmp(x) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

struct Generator<'a> {
    names: Vec<&'a SpeciesName>,
    predicate: &'a BindingPredicate,
    /// Memoized bindability per candidate count vector.
    permitted: HashMap<CountVec, bool>,
    output: Vec<Arrangement>,
}

impl<'a> Generator<'a> {
    fn permits(&mut self, v: &CountVec) -> bool {
        if let Some(&cached) = self.permitted.get(v) {
            return cached;
        }
        let composition = self.vec_to_composition(v);
        let allowed = self.predicate.permits(&composition);
        self.permitted.insert(v.clone(), allowed);
        allowed
    }

    fn vec_to_composition(&self, v: &CountVec) -> Composition {
        Composition::new(
            v.iter()
                .enumerate()
                .filter(|(_, &count)| count > 0)
                .map(|(i, &count)| (self.names[i].clone(), count)),
        )
        .expect("nonzero candidate vector")
    }

    /// All nonzero sub-multisets of `remaining`, canonically ordered.
    fn candidates(&self, remaining: &CountVec) -> Vec<CountVec> {
        let mut out = Vec::new();
        let mut v: CountVec = vec![0; remaining.len()];
        loop {
            // Odometer increment over 0..=remaining[i per digit].
            let mut i = 0;
            loop {
                if i == v.len() {
                    out.sort_by(canon_cmp);
                    return out;
                }
                if v[i] < remaining[i] {
                    v[i] += 1;
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            out.push(v.clone());
        }
    }

    fn recurse(&mut self, remaining: &mut CountVec, floor: Option<&CountVec>, acc: &mut Vec<(CountVec, u64)>) {
        if remaining.iter().all(|&c| c == 0) {
            self.emit(acc);
            return;
        }
        let candidates = self.candidates(remaining);
        for candidate in candidates {
            if let Some(bound) = floor {
                if canon_cmp(&candidate, bound) == std::cmp::Ordering::Less {
                    continue;
                }
            }
            if !self.permits(&candidate) {
                continue;
            }
            for (slot, used) in remaining.iter_mut().zip(candidate.iter()) {
                *slot -= used;
            }
            match acc.last_mut() {
                Some(last) if last.0 == candidate => last.1 += 1,
                _ => acc.push((candidate.clone(), 1)),
            }
            self.recurse(remaining, Some(&candidate), acc);
            match acc.last_mut() {
                Some(last) if last.1 > 1 => last.1 -= 1,
                _ => {
                    acc.pop();
                }
            }
            for (slot, used) in remaining.iter_mut().zip(candidate.iter()) {
                *slot += used;
            }
        }
    }

    fn emit(&mut self, acc: &[(CountVec, u64)]) {
        let groups = acc
            .iter()
            .map(|(v, multiplicity)| (Cluster::new(self.vec_to_composition(v)), *multiplicity));
        let arrangement = Arrangement::from_groups(groups).expect("generated groups are valid");
        self.output.push(arrangement);
    }
}

/// Upper-bound estimate of the arrangement count: B(N), exact for small N and
/// from the asymptotic form beyond that.
fn bell_estimate(n: u64) -> BigCount {
    if n <= 128 {
        bell_capped(n, 128).expect("within cap")
    } else {
        biguint_from_log(bell_asymptotic(n).log_value)
    }
}

/// Enumerates every arrangement of the system under the default cap.
pub fn enumerate_arrangements(spec: &SystemSpec) -> Result<ArrangementSet, EnumerationError> {
    enumerate_arrangements_capped(spec, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates every arrangement, failing fast when the distinguishable-case
/// upper bound B(N) already exceeds `cap`.
pub fn enumerate_arrangements_capped(
    spec: &SystemSpec,
    cap: u64,
) -> Result<ArrangementSet, EnumerationError> {
    let n = spec.composition().total_size();
    let estimate = bell_estimate(n);
    if estimate > BigUint::from(cap) {
        return Err(EnumerationError::CapExceeded { estimate, cap });
    }

    let names: Vec<&SpeciesName> = spec.composition().species().collect();
    let mut remaining: CountVec = spec.composition().counts().map(|(_, c)| c).collect();
    let mut generator = Generator {
        names,
        predicate: spec.binding(),
        permitted: HashMap::new(),
        output: Vec::new(),
    };
    let mut acc = Vec::new();
    generator.recurse(&mut remaining, None, &mut acc);

    let arrangements = generator.output;
    let has_all_bound = arrangements.iter().any(|a| a.is_single_cluster());
    let has_all_free = arrangements.iter().any(|a| a.is_all_free());
    let count = BigUint::from(arrangements.len());
    Ok(ArrangementSet {
        arrangements,
        count,
        has_all_bound,
        has_all_free,
    })
}

/// Counts arrangements, taking closed-form fast paths where they exist:
/// bind-none is always 1, a single identical species under bind-all is p(N),
/// and all-distinguishable under bind-all is B(N).
pub fn count_arrangements(spec: &SystemSpec) -> Result<BigCount, EnumerationError> {
    count_arrangements_capped(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn count_arrangements_capped(
    spec: &SystemSpec,
    cap: u64,
) -> Result<BigCount, EnumerationError> {
    let n = spec.composition().total_size();
    match spec.binding().mode() {
        BindingMode::None => return Ok(BigUint::from(1u32)),
        BindingMode::All => {
            if spec.composition().species_count() == 1 {
                return Ok(partition_count_capped(n, DEFAULT_PARTITION_CAP)?);
            }
            if spec.composition().all_multiplicity_one() {
                return Ok(bell_capped(n, DEFAULT_BELL_CAP)?);
            }
        }
        BindingMode::Allowlist => {}
    }
    Ok(enumerate_arrangements_capped(spec, cap)?.count.clone())
}

/// Checks the arrangement-count bounds for a system.
pub fn check_constraints(spec: &SystemSpec) -> Result<ConstraintReport, EnumerationError> {
    check_constraints_capped(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn check_constraints_capped(
    spec: &SystemSpec,
    cap: u64,
) -> Result<ConstraintReport, EnumerationError> {
    let n = spec.composition().total_size();
    let count = count_arrangements_capped(spec, cap)?;
    let bell_bound = bell_capped(n, DEFAULT_BELL_CAP)?;
    let one = BigUint::from(1u32);
    let general_ok = count >= one && count <= bell_bound;
    let (partition_bound, tighter_ok) = if spec.binding().mode() == BindingMode::All {
        let p = partition_count_capped(n, DEFAULT_PARTITION_CAP)?;
        let ok = count >= p && count <= bell_bound;
        (Some(p), Some(ok))
    } else {
        (None, None)
    };
    Ok(ConstraintReport {
        count,
        bell_bound,
        partition_bound,
        general_ok,
        tighter_ok,
    })
}
