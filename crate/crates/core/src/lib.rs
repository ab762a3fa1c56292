//! Hereditary graph families: exact speeds, structural classification,
//! star systems and criticality.

pub mod budget;
pub mod canon;
pub mod critical;
pub mod embed;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod graph;
pub mod graph6;
pub mod ramsey;
pub mod stars;
pub mod structure;

pub use budget::{Budget, Transcript, DEFAULT_BUDGET};
pub use canon::{canonical_form, CanonKey, CanonicalForm};
pub use critical::{is_critical, CriticalityVerdict, ExperimentReport};
pub use embed::Embedding;
pub use enumerate::{enumerate_family, EnumOptions, Enumeration, SpeedRow, SpeedTable};
pub use error::{Error, Result};
pub use family::{is_member, parse_family, FamilyExpr, Membership, PartitionCertificate, Witness};
pub use graph::{Bigraph, Graph};
pub use stars::{Constellation, StarSystem, Template};
pub use structure::{coloring_number, ColoringNumberResult, ReducedClassification};
