//! Orbit posets of tabloids under permutation groups.
//!
//! Given a group `W ≤ S_d` and a set `D` of partitions of `d`, the crate
//! builds the poset of `W`-orbits of tabloids with shapes in `D`, computes
//! its stratum-preserving automorphisms (optionally commuting with the
//! involution induced by an index-2 overgroup `W′`), the automorphisms
//! induced by the normalizer, and decides when two orbits cannot be told
//! apart by automorphisms or by one-dimensional characters.

pub mod autgroup;
pub mod catalog;
pub mod charsep;
pub mod cli;
pub mod error;
pub mod orbitposet;
pub mod permgroup;
pub mod tabloid;

pub use catalog::{
    builtin, parse_config, validate, Analysis, AnalysisOptions, AnalysisReport, MoleculeSpec,
};
pub use error::{Error, Result};
pub use orbitposet::{build_poset, fuse, project, Orbit, OrbitId, Projection, StratifiedPoset};
pub use permgroup::{OneDimCharacter, Permutation, PermutationGroup, RootOfUnity};
pub use tabloid::{Partition, Tabloid};
