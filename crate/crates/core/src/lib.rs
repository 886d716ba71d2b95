//! Persistence analysis for place/transition nets.
//!
//! The crate decides whether firing one transition can disable, kill or
//! postpone another, at the level of single steps, markings, transition pairs
//! and whole nets. It also computes the least postponement bound `k` for nets
//! in which no transition kills another.
//!
//! Reachability questions go through [`oracle::ReachOracle`], which is exact on
//! bounded nets and returns an honest `Unknown` when a state budget runs out.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod format;
pub mod net;
pub mod omega;
pub mod oracle;
pub mod persistence;
pub mod statespace;
pub mod valk_jantzen;

pub use error::{Error, Result};
pub use net::{FiringWord, Marking, Net, NetBuilder, TransitionId};
pub use omega::{ConvexSet, DownSet, OmegaNat, OmegaVector, UpSet};
pub use oracle::{Computed, OracleConfig, ReachOracle, Unknown, Verdict, Witness};
pub use persistence::{Classification, PairReport, PersistenceKind};
pub use statespace::{CoverabilityGraph, ReachTree};
