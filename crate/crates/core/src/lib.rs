//! Finite partial groups, localities and fusion systems, with external and
//! internal direct and central products.
//!
//! Elements of every structure are dense ids `0..n` with `0` the identity.
//! Products are written left to right and conjugation is `x^g = g⁻¹xg`.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod fusion;
pub mod fusion_laws;
pub mod group;
pub mod locality;
pub mod morphism;
pub mod partial_group;
pub mod pgroup;
pub mod products;
pub mod quotients;
pub mod recipe;
pub mod report;
pub mod suite;
pub mod words;

pub use error::{Error, Result};
pub use fusion::{FusionSystem, GroupHom, Morphism};
pub use group::{FiniteGroup, Subgroup};
pub use locality::{group_locality, locality_from_group, Locality};
pub use morphism::{MapClass, PartialGroupMap};
pub use partial_group::{Axiom, AxiomReport, PartialGroup, Provenance};
pub use pgroup::{Mask, PGroup};
pub use report::CheckReport;
pub use words::{ScanPlan, Word};

/// Dense element id.
pub type Elem = usize;
