//! Subsystem mass geometry and the small-hyperradius separability check.
//!
//! For a chosen subsystem of N_sb >= 2 particles, the geometry consists of
//! its center of mass c, total mass M, reduced mass
//! mu = (prod m_i / M)^{1/(N_sb - 1)}, and hyperradius R defined through
//! mu R^2 = sum m_i r_ci^2 with r_ci the distance of particle i from c.
//!
//! The separability check scales the subsystem toward its center of mass at
//! fixed spectator positions and compares the true cross interaction
//! sum v_ij(r_ij) against its separable limit sum v_ij(r_cj); the residual
//! vanishes with the scale, linearly in general and quadratically when the
//! first-order term cancels (equal masses with a per-spectator-uniform
//! potential).

use std::fmt;
use std::sync::Arc;

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparabilityError {
    #[error("mass {mass} of particle {index} is not positive and finite")]
    NonPositiveMass { index: usize, mass: f64 },
    #[error("position of particle {index} is not finite")]
    NonFinitePosition { index: usize },
    #[error("masses and positions disagree in length ({masses} vs {positions})")]
    LengthMismatch { masses: usize, positions: usize },
    #[error("subsystem must have at least 2 particles (got {0})")]
    SubsystemTooSmall(usize),
    #[error("subsystem index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("subsystem index {0} is repeated")]
    DuplicateIndex(usize),
    #[error("cross-interaction check needs spectators: the subsystem must be a proper subset")]
    NoSpectators,
    #[error("spectator {index} coincides with the subsystem center of mass")]
    SpectatorAtCenter { index: usize },
    #[error("particles {i} and {j} coincide; the pair potential is singular at zero separation")]
    CoincidentPair { i: usize, j: usize },
}

/// Declared differentiability class of a potential on (0, inf).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Once,
    Twice,
}

/// A scalar central pair potential r -> v(r), r > 0.
#[derive(Clone)]
pub enum PairPotential {
    /// v(r) = -coefficient / r^power.
    InversePower { coefficient: f64, power: i32 },
    /// v(r) = 4 epsilon [ (sigma/r)^12 - (sigma/r)^6 ].
    LennardJones { epsilon: f64, sigma: f64 },
    /// v(r) = -amplitude e^{-r / screening_length} / r.
    ScreenedCoulomb {
        amplitude: f64,
        screening_length: f64,
    },
    /// User-supplied potential with caller-declared smoothness.
    Custom {
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        smoothness: Smoothness,
    },
}

impl PairPotential {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            PairPotential::InversePower { coefficient, power } => {
                -coefficient / r.powi(*power)
            }
            PairPotential::LennardJones { epsilon, sigma } => {
                let x = (sigma / r).powi(6);
                4.0 * epsilon * (x * x - x)
            }
            PairPotential::ScreenedCoulomb {
                amplitude,
                screening_length,
            } => -amplitude * (-r / screening_length).exp() / r,
            PairPotential::Custom { eval, .. } => eval(r),
        }
    }

    /// Built-ins are smooth on (0, inf); custom potentials report what the
    /// caller declared.
    pub fn smoothness(&self) -> Smoothness {
        match self {
            PairPotential::Custom { smoothness, .. } => *smoothness,
            _ => Smoothness::Twice,
        }
    }
}

impl fmt::Debug for PairPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairPotential::InversePower { coefficient, power } => f
                .debug_struct("InversePower")
                .field("coefficient", coefficient)
                .field("power", power)
                .finish(),
            PairPotential::LennardJones { epsilon, sigma } => f
                .debug_struct("LennardJones")
                .field("epsilon", epsilon)
                .field("sigma", sigma)
                .finish(),
            PairPotential::ScreenedCoulomb {
                amplitude,
                screening_length,
            } => f
                .debug_struct("ScreenedCoulomb")
                .field("amplitude", amplitude)
                .field("screening_length", screening_length)
                .finish(),
            PairPotential::Custom { smoothness, .. } => f
                .debug_struct("Custom")
                .field("smoothness", smoothness)
                .finish(),
        }
    }
}

/// Pair potentials per particle pair: a default with optional overrides.
#[derive(Debug, Clone)]
pub struct PotentialTable {
    default: PairPotential,
    overrides: HashMap<(usize, usize), PairPotential>,
}

impl PotentialTable {
    /// The same potential for every pair.
    pub fn uniform(default: PairPotential) -> Self {
        PotentialTable {
            default,
            overrides: HashMap::new(),
        }
    }

    pub fn set_pair(&mut self, i: usize, j: usize, potential: PairPotential) {
        self.overrides.insert((i.min(j), i.max(j)), potential);
    }

    pub fn get(&self, i: usize, j: usize) -> &PairPotential {
        self.overrides
            .get(&(i.min(j), i.max(j)))
            .unwrap_or(&self.default)
    }

    /// True when every subsystem particle sees the same potential toward each
    /// spectator (the condition for the first-order residual term to cancel
    /// for equal masses).
    pub fn is_uniform(&self) -> bool {
        self.overrides.is_empty()
    }
}

type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Masses and positions of N particles with a selected subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct MassedConfiguration {
    masses: Vec<f64>,
    positions: Vec<Vec3>,
    subsystem: Vec<usize>,
}

impl MassedConfiguration {
    /// Validates masses (> 0, finite), positions (finite), and the subsystem
    /// selector (>= 2 distinct in-range indices, stored sorted).
    pub fn new(
        masses: Vec<f64>,
        positions: Vec<Vec3>,
        subsystem: Vec<usize>,
    ) -> Result<Self, SeparabilityError> {
        if masses.len() != positions.len() {
            return Err(SeparabilityError::LengthMismatch {
                masses: masses.len(),
                positions: positions.len(),
            });
        }
        for (index, &mass) in masses.iter().enumerate() {
            if !(mass.is_finite() && mass > 0.0) {
                return Err(SeparabilityError::NonPositiveMass { index, mass });
            }
        }
        for (index, position) in positions.iter().enumerate() {
            if !position.iter().all(|c| c.is_finite()) {
                return Err(SeparabilityError::NonFinitePosition { index });
            }
        }
        if subsystem.len() < 2 {
            return Err(SeparabilityError::SubsystemTooSmall(subsystem.len()));
        }
        let mut subsystem = subsystem;
        subsystem.sort_unstable();
        for window in subsystem.windows(2) {
            if window[0] == window[1] {
                return Err(SeparabilityError::DuplicateIndex(window[0]));
            }
        }
        if let Some(&max) = subsystem.last() {
            if max >= masses.len() {
                return Err(SeparabilityError::IndexOutOfRange(max));
            }
        }
        Ok(MassedConfiguration {
            masses,
            positions,
            subsystem,
        })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn subsystem(&self) -> &[usize] {
        &self.subsystem
    }

    pub fn spectators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |i| self.subsystem.binary_search(i).is_err())
    }
}

/// Derived subsystem geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemGeometry {
    pub center: Vec3,
    pub total_mass: f64,
    pub reduced_mass: f64,
    pub hyperradius: f64,
    /// Distances r_ci of the subsystem particles from the center, in
    /// subsystem index order.
    pub distances_to_center: Vec<f64>,
    /// Masses of the subsystem particles, aligned with
    /// `distances_to_center`.
    pub subsystem_masses: Vec<f64>,
}

/// Computes center of mass, reduced mass, and hyperradius of the selected
/// subsystem. R = 0 exactly when all subsystem particles coincide.
pub fn subsystem_geometry(cfg: &MassedConfiguration) -> SubsystemGeometry {
    let indices = cfg.subsystem();
    let masses: Vec<f64> = indices.iter().map(|&i| cfg.masses()[i]).collect();
    let total_mass: f64 = masses.iter().sum();

    let mut center = [0.0; 3];
    for (&i, &m) in indices.iter().zip(&masses) {
        for (sum, &coordinate) in center.iter_mut().zip(&cfg.positions()[i]) {
            *sum += m * coordinate;
        }
    }
    for axis in &mut center {
        *axis /= total_mass;
    }

    // mu = (prod m_i / M)^{1/(n-1)}, evaluated in log space.
    let log_mu = (masses.iter().map(|m| m.ln()).sum::<f64>() - total_mass.ln())
        / (masses.len() as f64 - 1.0);
    let reduced_mass = log_mu.exp();

    let distances_to_center: Vec<f64> = indices
        .iter()
        .map(|&i| distance(cfg.positions()[i], center))
        .collect();
    let weighted: f64 = masses
        .iter()
        .zip(&distances_to_center)
        .map(|(m, r)| m * r * r)
        .sum();
    let hyperradius = (weighted / reduced_mass).sqrt();

    SubsystemGeometry {
        center,
        total_mass,
        reduced_mass,
        hyperradius,
        distances_to_center,
        subsystem_masses: masses,
    }
}

/// Confinement check r_ci <= sqrt(mu / m_i) R for every subsystem particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfinementReport {
    pub holds: bool,
    /// Per-particle slack sqrt(mu / m_i) R - r_ci, subsystem index order.
    pub margins: Vec<f64>,
}

/// Verifies the confinement bound, non-strict with 1e-12 relative slack to
/// absorb rounding. R = 0 (all particles coincident) holds vacuously.
pub fn confinement_check(geometry: &SubsystemGeometry) -> ConfinementReport {
    let r = geometry.hyperradius;
    let mut holds = true;
    let margins: Vec<f64> = geometry
        .subsystem_masses
        .iter()
        .zip(&geometry.distances_to_center)
        .map(|(&mass, &r_ci)| {
            let bound = (geometry.reduced_mass / mass).sqrt() * r;
            if r_ci > bound * (1.0 + 1e-12) {
                holds = false;
            }
            bound - r_ci
        })
        .collect();
    ConfinementReport { holds, margins }
}

/// One evaluation of the separability residual at a subsystem scale factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSample {
    pub scale: f64,
    /// Hyperradius of the scaled subsystem.
    pub hyperradius: f64,
    /// True cross interaction sum_{j spectator} sum_{i subsystem} v_ij(r_ij).
    pub cross_potential: f64,
    /// Separable-limit value sum_{j spectator} sum_{i subsystem} v_ij(r_cj).
    pub separable_potential: f64,
    /// |cross - separable|.
    pub residual: f64,
}

/// Scales the subsystem about its center of mass by `scale` (spectators
/// fixed) and evaluates the cross interaction against its separable limit.
/// At `scale = 0` the residual is exactly zero.
pub fn separability_residual(
    cfg: &MassedConfiguration,
    potentials: &PotentialTable,
    scale: f64,
) -> Result<ResidualSample, SeparabilityError> {
    if cfg.spectators().next().is_none() {
        return Err(SeparabilityError::NoSpectators);
    }
    let geometry = subsystem_geometry(cfg);
    let center = geometry.center;

    let scaled: Vec<(usize, Vec3)> = cfg
        .subsystem()
        .iter()
        .map(|&i| {
            let d = sub(cfg.positions()[i], center);
            (
                i,
                [
                    center[0] + scale * d[0],
                    center[1] + scale * d[1],
                    center[2] + scale * d[2],
                ],
            )
        })
        .collect();

    let mut cross = 0.0;
    let mut separable = 0.0;
    for j in cfg.spectators() {
        let spectator = cfg.positions()[j];
        let r_cj = distance(spectator, center);
        if r_cj == 0.0 {
            return Err(SeparabilityError::SpectatorAtCenter { index: j });
        }
        for &(i, position) in &scaled {
            let r_ij = distance(spectator, position);
            if r_ij == 0.0 {
                return Err(SeparabilityError::CoincidentPair { i, j });
            }
            let potential = potentials.get(i, j);
            cross += potential.eval(r_ij);
            separable += potential.eval(r_cj);
        }
    }

    Ok(ResidualSample {
        scale,
        hyperradius: geometry.hyperradius * scale,
        cross_potential: cross,
        separable_potential: separable,
        residual: (cross - separable).abs(),
    })
}

/// Mean distance of the spectators from the subsystem center of mass: the
/// emergent length scale against which "small R" is measured. Diagnostic
/// only; no invariant depends on it. None without spectators.
pub fn mean_spectator_distance(cfg: &MassedConfiguration) -> Option<f64> {
    let center = subsystem_geometry(cfg).center;
    let mut total = 0.0;
    let mut count = 0usize;
    for j in cfg.spectators() {
        total += distance(cfg.positions()[j], center);
        count += 1;
    }
    (count > 0).then(|| total / count as f64)
}

/// Geometric scale sequence 2^-4, 2^-5, ..., with `count` entries.
pub fn default_sweep_scales(count: usize) -> Vec<f64> {
    (0..count).map(|i| (0.5f64).powi(i as i32 + 4)).collect()
}

/// Evaluates the residual over a scale sequence.
pub fn scale_sweep(
    cfg: &MassedConfiguration,
    potentials: &PotentialTable,
    scales: &[f64],
) -> Result<Vec<ResidualSample>, SeparabilityError> {
    scales
        .iter()
        .map(|&s| separability_residual(cfg, potentials, s))
        .collect()
}

/// Slope q of ln(residual) against ln(scale), estimated as the median of all
/// pairwise slopes (Theil-Sen). On exact power-law data this recovers the
/// exponent; it also stays on the tail law when one sweep point is depressed
/// by a sign change of the signed difference inside the window. Samples with
/// a vanishing residual or scale are skipped; returns None with fewer than
/// two usable samples.
pub fn fit_slope(samples: &[ResidualSample]) -> Option<f64> {
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.scale > 0.0 && s.residual > 1e-300)
        .map(|s| (s.scale.ln(), s.residual.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let mut slopes = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a.0 != b.0 {
                slopes.push((a.1 - b.1) / (a.0 - b.0));
            }
        }
    }
    if slopes.is_empty() {
        return None;
    }
    slopes.sort_by(f64::total_cmp);
    let mid = slopes.len() / 2;
    Some(if slopes.len() % 2 == 1 {
        slopes[mid]
    } else {
        0.5 * (slopes[mid - 1] + slopes[mid])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_body(mass: f64, separation: f64) -> MassedConfiguration {
        MassedConfiguration::new(
            vec![mass, mass],
            vec![[0.0, 0.0, 0.0], [separation, 0.0, 0.0]],
            vec![0, 1],
        )
        .unwrap()
    }

    #[test]
    fn two_equal_masses_geometry() {
        let cfg = two_body(2.0, 3.0);
        let geometry = subsystem_geometry(&cfg);
        assert!((geometry.reduced_mass - 1.0).abs() < 1e-14);
        assert!((geometry.hyperradius - 3.0).abs() < 1e-12);
        assert!((geometry.total_mass - 4.0).abs() < 1e-14);
        for r in &geometry.distances_to_center {
            assert!((r - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_mass_product_identity() {
        // masses (1,2,3): product 6 equals total 6, so mu = 1.
        let cfg = MassedConfiguration::new(
            vec![1.0, 2.0, 3.0],
            vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![0, 1, 2],
        )
        .unwrap();
        let geometry = subsystem_geometry(&cfg);
        assert!((geometry.reduced_mass - 1.0).abs() < 1e-14);
    }

    #[test]
    fn equal_mass_reduced_mass_formula() {
        for n in 2..=6usize {
            let m = 2.5;
            let masses = vec![m; n];
            let positions: Vec<[f64; 3]> = (0..n)
                .map(|i| [i as f64, (i * i) as f64 * 0.1, 0.0])
                .collect();
            let cfg =
                MassedConfiguration::new(masses, positions, (0..n).collect()).unwrap();
            let geometry = subsystem_geometry(&cfg);
            let expected = m * (n as f64).powf(-1.0 / (n as f64 - 1.0));
            assert!(
                (geometry.reduced_mass - expected).abs() < 1e-12 * expected,
                "n = {n}"
            );
        }
    }

    #[test]
    fn confinement_holds_with_tight_margin_for_displaced_particle() {
        // A light particle displaced from a heavy coincident cluster nearly
        // saturates its bound: the relative margin shrinks like m/(2M) and
        // is never exactly zero while R > 0.
        let cfg = MassedConfiguration::new(
            vec![5000.0, 5000.0, 1.0, 1.0],
            vec![[0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], [5.0, 5.0, 5.0]],
            vec![0, 1, 2],
        )
        .unwrap();
        let geometry = subsystem_geometry(&cfg);
        let report = confinement_check(&geometry);
        assert!(report.holds);
        let relative = report.margins[2] / geometry.distances_to_center[2];
        assert!(relative > 0.0, "bound is never exactly saturated");
        assert!(relative < 1e-3, "displaced particle margin {relative}");
    }

    #[test]
    fn coincident_subsystem_confines_vacuously() {
        let cfg = MassedConfiguration::new(
            vec![1.0, 2.0, 4.0],
            vec![[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [3.0, 0.0, 0.0]],
            vec![0, 1],
        )
        .unwrap();
        let geometry = subsystem_geometry(&cfg);
        assert_eq!(geometry.hyperradius, 0.0);
        assert!(confinement_check(&geometry).holds);
    }

    #[test]
    fn residual_is_exactly_zero_at_scale_zero() {
        let cfg = MassedConfiguration::new(
            vec![1.0, 2.0, 3.0],
            vec![[0.1, 0.0, 0.0], [0.0, 0.2, 0.0], [4.0, 4.0, 4.0]],
            vec![0, 1],
        )
        .unwrap();
        let potentials = PotentialTable::uniform(PairPotential::InversePower {
            coefficient: 1.0,
            power: 6,
        });
        let sample = separability_residual(&cfg, &potentials, 0.0).unwrap();
        assert_eq!(sample.residual, 0.0);
        assert_eq!(sample.hyperradius, 0.0);
    }

    #[test]
    fn hyperradius_scales_linearly() {
        let cfg = MassedConfiguration::new(
            vec![1.0, 2.0, 3.0],
            vec![[0.3, 0.0, 0.0], [0.0, 0.4, 0.0], [4.0, 4.0, 4.0]],
            vec![0, 1],
        )
        .unwrap();
        let geometry = subsystem_geometry(&cfg);
        let potentials = PotentialTable::uniform(PairPotential::ScreenedCoulomb {
            amplitude: 1.0,
            screening_length: 2.0,
        });
        for scale in [1.0, 0.5, 0.25, 0.125] {
            let sample = separability_residual(&cfg, &potentials, scale).unwrap();
            let expected = geometry.hyperradius * scale;
            assert!((sample.hyperradius - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn unequal_mass_slope_is_at_least_linear() {
        let cfg = MassedConfiguration::new(
            vec![1.0, 3.5, 2.0],
            vec![[0.4, 0.1, 0.0], [-0.2, 0.3, 0.1], [3.0, -2.0, 1.0]],
            vec![0, 1],
        )
        .unwrap();
        let potentials = PotentialTable::uniform(PairPotential::InversePower {
            coefficient: 1.0,
            power: 6,
        });
        let samples = scale_sweep(&cfg, &potentials, &default_sweep_scales(9)).unwrap();
        let q = fit_slope(&samples).unwrap();
        assert!(q >= 0.7, "slope {q}");
    }

    #[test]
    fn equal_mass_slope_is_at_least_quadratic() {
        let cfg = MassedConfiguration::new(
            vec![1.5, 1.5, 2.0],
            vec![[0.4, 0.1, 0.0], [-0.2, 0.3, 0.1], [3.0, -2.0, 1.0]],
            vec![0, 1],
        )
        .unwrap();
        let potentials = PotentialTable::uniform(PairPotential::LennardJones {
            epsilon: 1.0,
            sigma: 1.0,
        });
        assert!(matches!(potentials.default.smoothness(), Smoothness::Twice));
        let samples = scale_sweep(&cfg, &potentials, &default_sweep_scales(9)).unwrap();
        let q = fit_slope(&samples).unwrap();
        assert!(q >= 1.7, "slope {q}");
    }

    #[test]
    fn spectator_at_center_is_rejected() {
        let cfg = MassedConfiguration::new(
            vec![1.0, 1.0, 1.0],
            vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
            vec![0, 1],
        )
        .unwrap();
        let potentials = PotentialTable::uniform(PairPotential::InversePower {
            coefficient: 1.0,
            power: 6,
        });
        assert!(matches!(
            separability_residual(&cfg, &potentials, 0.5),
            Err(SeparabilityError::SpectatorAtCenter { index: 2 })
        ));
    }

    #[test]
    fn coincident_cross_pair_is_a_domain_error() {
        let cfg = MassedConfiguration::new(
            vec![1.0, 1.0, 1.0],
            vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
            vec![0, 1],
        )
        .unwrap();
        let potentials = PotentialTable::uniform(PairPotential::InversePower {
            coefficient: 1.0,
            power: 6,
        });
        assert!(matches!(
            separability_residual(&cfg, &potentials, 1.0),
            Err(SeparabilityError::CoincidentPair { i: 0, j: 2 })
        ));
    }

    #[test]
    fn full_system_subsystem_has_no_spectators() {
        let cfg = two_body(1.0, 1.0);
        let potentials = PotentialTable::uniform(PairPotential::InversePower {
            coefficient: 1.0,
            power: 6,
        });
        assert!(matches!(
            separability_residual(&cfg, &potentials, 0.5),
            Err(SeparabilityError::NoSpectators)
        ));
    }

    #[test]
    fn configuration_validation() {
        assert!(matches!(
            MassedConfiguration::new(vec![1.0, -1.0], vec![[0.0; 3]; 2], vec![0, 1]),
            Err(SeparabilityError::NonPositiveMass { index: 1, .. })
        ));
        assert!(matches!(
            MassedConfiguration::new(vec![1.0], vec![[0.0; 3]; 2], vec![0, 1]),
            Err(SeparabilityError::LengthMismatch { .. })
        ));
        assert!(matches!(
            MassedConfiguration::new(vec![1.0, 1.0], vec![[0.0; 3]; 2], vec![0]),
            Err(SeparabilityError::SubsystemTooSmall(1))
        ));
        assert!(matches!(
            MassedConfiguration::new(vec![1.0, 1.0], vec![[0.0; 3]; 2], vec![0, 0]),
            Err(SeparabilityError::DuplicateIndex(0))
        ));
        assert!(matches!(
            MassedConfiguration::new(vec![1.0, 1.0], vec![[0.0; 3]; 2], vec![0, 5]),
            Err(SeparabilityError::IndexOutOfRange(5))
        ));
    }

    #[test]
    fn custom_potential_is_usable() {
        let potential = PairPotential::Custom {
            eval: Arc::new(|r| -1.0 / (r * r)),
            smoothness: Smoothness::Once,
        };
        assert_eq!(potential.eval(2.0), -0.25);
        assert!(matches!(potential.smoothness(), Smoothness::Once));
    }
}
