//! Extender and hypershallow sequences of directed acyclic graphs.
//!
//! The crate is organised by subsystem:
//!
//! * [`dag`]: graph carrier, degrees, acyclicity, codepth.
//! * [`depth`]: depth functions `δ_S`, `δ'_D`, validation and enumeration.
//! * [`random_graphs`]: the dyadic edge law ι_n, G_n^d, cleanup to H_n.
//! * [`entropy`]: Shannon entropy, mixtures, KL and the Pinsker exceedance bound.
//! * [`extender`]: extender decisions, attacks, window entropy certificates.
//! * [`shallowing`]: the separator that makes any bounded-indegree dag shallow.
//! * [`circuits`]: boolean circuits, `shift_n`, advice circuits.

pub mod circuits;
pub mod dag;
pub mod depth;
pub mod entropy;
pub mod error;
pub mod extender;
pub mod fraction;
pub mod io;
pub mod random_graphs;
pub mod shallowing;

pub use dag::{Dag, DegreeStats, VertexSet};
pub use error::{Error, Result};
pub use fraction::Fraction;

/// Version of this crate, recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
