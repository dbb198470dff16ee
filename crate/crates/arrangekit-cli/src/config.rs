//! The JSON configuration document and its translation into library types.
//!
//! One document describes a physical system; each subcommand reads only the
//! sections it needs. Cluster keys (catalog entries, allowlist entries) are
//! written in the arrangement notation as a single group, e.g. `"(A_2)"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use arrangekit::enumeration::{BindingPredicate, SystemSpec};
use arrangekit::model::{Composition, Species, SpeciesName, SpeciesTable};
use arrangekit::notation;
use arrangekit::separability::{MassedConfiguration, PairPotential, PotentialTable};
use arrangekit::spectrum::EnergyCatalog;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub species: Option<Vec<SpeciesDecl>>,
    pub composition: Option<BTreeMap<String, u64>>,
    pub binding: Option<BindingSection>,
    pub catalog: Option<BTreeMap<String, CatalogEntry>>,
    pub separability: Option<SeparabilitySection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesDecl {
    pub name: String,
    pub identical: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BindingSection {
    pub mode: String,
    pub allowlist: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CatalogEntry {
    Levels(Vec<f64>),
    Detailed {
        levels: Vec<f64>,
        #[serde(default)]
        annotations: Vec<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparabilitySection {
    pub masses: Vec<f64>,
    pub positions: Vec<[f64; 3]>,
    pub subsystem: Vec<usize>,
    pub potentials: PotentialsSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialsSection {
    pub default: PotentialSpec,
    #[serde(default)]
    pub overrides: Vec<OverrideSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    InversePower { coefficient: f64, power: i32 },
    LennardJones { epsilon: f64, sigma: f64 },
    ScreenedCoulomb { amplitude: f64, screening_length: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideSpec {
    pub pair: [usize; 2],
    #[serde(flatten)]
    pub potential: PotentialSpec,
}

impl ConfigDocument {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut deserializer = serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(&mut deserializer).map_err(|e| {
            CliError::validation(format!(
                "config {}: {}: {}",
                path.display(),
                e.path(),
                e.inner()
            ))
        })
    }

    /// Declared species table; requires the `species` section.
    pub fn species_table(&self) -> Result<SpeciesTable, CliError> {
        let decls = self
            .species
            .as_ref()
            .ok_or_else(|| CliError::validation("species: section is required"))?;
        let mut species = Vec::with_capacity(decls.len());
        for (index, decl) in decls.iter().enumerate() {
            species.push(Species::new(decl.name.as_str(), decl.identical).map_err(|e| {
                CliError::validation(format!("species[{index}].name: {e}"))
            })?);
        }
        SpeciesTable::new(species)
            .map_err(|e| CliError::validation(format!("species: {e}")))
    }

    fn composition(&self) -> Result<Composition, CliError> {
        let counts = self
            .composition
            .as_ref()
            .ok_or_else(|| CliError::validation("composition: section is required"))?;
        let mut pairs = Vec::with_capacity(counts.len());
        for (name, &count) in counts {
            let species = SpeciesName::new(name.as_str())
                .map_err(|e| CliError::validation(format!("composition.{name}: {e}")))?;
            if count == 0 {
                return Err(CliError::validation(format!(
                    "composition.{name}: multiplicity must be at least 1"
                )));
            }
            pairs.push((species, count));
        }
        Composition::new(pairs)
            .map_err(|e| CliError::validation(format!("composition: {e}")))
    }

    fn binding(&self, table: &SpeciesTable) -> Result<BindingPredicate, CliError> {
        let Some(section) = &self.binding else {
            return Ok(BindingPredicate::all());
        };
        match section.mode.as_str() {
            "all" | "none" => {
                if section.allowlist.is_some() {
                    return Err(CliError::validation(format!(
                        "binding.allowlist: not allowed with mode \"{}\"",
                        section.mode
                    )));
                }
                Ok(if section.mode == "all" {
                    BindingPredicate::all()
                } else {
                    BindingPredicate::none()
                })
            }
            "allowlist" => {
                let entries = section.allowlist.as_ref().ok_or_else(|| {
                    CliError::validation(
                        "binding.allowlist: required with mode \"allowlist\"",
                    )
                })?;
                let mut clusters = Vec::with_capacity(entries.len());
                for (index, text) in entries.iter().enumerate() {
                    clusters.push(
                        parse_single_cluster(text, table).map_err(|message| {
                            CliError::validation(format!(
                                "binding.allowlist[{index}]: {message}"
                            ))
                        })?,
                    );
                }
                BindingPredicate::allowlist(clusters)
                    .map_err(|e| CliError::validation(format!("binding.allowlist: {e}")))
            }
            other => Err(CliError::validation(format!(
                "binding.mode: expected \"all\", \"none\", or \"allowlist\", got \"{other}\""
            ))),
        }
    }

    /// Full system spec; requires species and composition; binding defaults
    /// to mode "all".
    pub fn system_spec(&self) -> Result<SystemSpec, CliError> {
        let table = self.species_table()?;
        let composition = self.composition()?;
        let binding = self.binding(&table)?;
        SystemSpec::new(table, composition, binding)
            .map_err(|e| CliError::validation(e.to_string()))
    }

    /// Energy catalog keyed by single-group cluster notation; absent section
    /// gives an empty catalog.
    pub fn energy_catalog(&self, table: &SpeciesTable) -> Result<EnergyCatalog, CliError> {
        let mut catalog = EnergyCatalog::new();
        let Some(entries) = &self.catalog else {
            return Ok(catalog);
        };
        for (key, entry) in entries {
            let cluster = parse_single_cluster(key, table)
                .map_err(|message| CliError::validation(format!("catalog.{key}: {message}")))?;
            let (levels, annotations) = match entry {
                CatalogEntry::Levels(levels) => (levels.clone(), Vec::new()),
                CatalogEntry::Detailed {
                    levels,
                    annotations,
                } => (levels.clone(), annotations.clone()),
            };
            catalog
                .insert(cluster.clone(), levels)
                .map_err(|e| CliError::validation(format!("catalog.{key}: {e}")))?;
            for note in annotations {
                catalog.annotate(cluster.clone(), note);
            }
        }
        Ok(catalog)
    }

    /// Massed configuration plus the potential table.
    pub fn separability_inputs(
        &self,
    ) -> Result<(MassedConfiguration, PotentialTable), CliError> {
        let section = self
            .separability
            .as_ref()
            .ok_or_else(|| CliError::validation("separability: section is required"))?;
        let configuration = MassedConfiguration::new(
            section.masses.clone(),
            section.positions.clone(),
            section.subsystem.clone(),
        )
        .map_err(|e| CliError::validation(format!("separability: {e}")))?;

        let mut table = PotentialTable::uniform(build_potential(&section.potentials.default));
        for (index, spec) in section.potentials.overrides.iter().enumerate() {
            let [i, j] = spec.pair;
            if i >= configuration.len() || j >= configuration.len() || i == j {
                return Err(CliError::validation(format!(
                    "separability.potentials.overrides[{index}].pair: invalid pair [{i}, {j}]"
                )));
            }
            table.set_pair(i, j, build_potential(&spec.potential));
        }
        Ok((configuration, table))
    }
}

fn build_potential(spec: &PotentialSpec) -> PairPotential {
    match *spec {
        PotentialSpec::InversePower { coefficient, power } => {
            PairPotential::InversePower { coefficient, power }
        }
        PotentialSpec::LennardJones { epsilon, sigma } => {
            PairPotential::LennardJones { epsilon, sigma }
        }
        PotentialSpec::ScreenedCoulomb {
            amplitude,
            screening_length,
        } => PairPotential::ScreenedCoulomb {
            amplitude,
            screening_length,
        },
    }
}

/// Parses a notation string that must denote exactly one cluster, e.g.
/// `"(A_2)"` or `"(X,e)"`.
fn parse_single_cluster(
    text: &str,
    table: &SpeciesTable,
) -> Result<Composition, String> {
    let arrangement = notation::parse(text, table).map_err(|e| e.to_string())?;
    if arrangement.cluster_count() != 1 {
        return Err(format!(
            "expected a single cluster, got {} clusters",
            arrangement.cluster_count()
        ));
    }
    Ok(arrangement.groups()[0].cluster.members().clone())
}
