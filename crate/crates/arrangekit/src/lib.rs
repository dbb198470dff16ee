//! Arrangement calculus for N-body systems.
//!
//! An arrangement groups the particles of an N-body system into bound
//! clusters and free particles. This crate provides:
//!
//! - a canonical data model for species, compositions, clusters, and
//!   arrangements ([`model`]);
//! - the parenthesized text notation with exact round-trip guarantees
//!   ([`notation`]);
//! - exact Bell and integer-partition counts with their large-N asymptotics
//!   ([`combinatorics`]);
//! - enumeration and counting of arrangements under a binding rule
//!   ([`enumeration`]);
//! - threshold ladders, g-numbering, and open-arrangement queries over an
//!   energy catalog ([`spectrum`]);
//! - subsystem mass geometry and the small-hyperradius separability check
//!   ([`separability`]).

pub mod combinatorics;
pub mod enumeration;
pub mod model;
pub mod notation;
pub mod separability;
pub mod spectrum;

pub use combinatorics::BigCount;
pub use enumeration::{ArrangementSet, BindingMode, BindingPredicate, SystemSpec};
pub use model::{Arrangement, Cluster, Composition, Species, SpeciesName, SpeciesTable};
pub use notation::{parse, parse_display, parse_lenient, print};
pub use spectrum::{assign_g, EnergyCatalog, SpectrumLayout};
