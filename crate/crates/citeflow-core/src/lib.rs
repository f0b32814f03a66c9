//! Core engine for citation knowledge-flow analytics.
//!
//! The crate is `no_std` (with `alloc`) and fully deterministic: every
//! operation is a pure function of its inputs plus an explicit seed, so the
//! same corpus always produces bit-identical assignments, profiles and
//! aggregates regardless of platform or scheduling.
//!
//! Pipeline stages, in dependency order:
//!
//! 1. [`corpus`] — validated immutable citation graph over a subject-category
//!    registry.
//! 2. [`resolver`] — one subject category per publication, with deterministic
//!    seed-keyed tie-breaking.
//! 3. [`flows`] — per-publication intra/extra-domain citation profiles under a
//!    configurable citation window.
//! 4. [`impact`] — citations rescaled to the same-category cohort mean.
//! 5. [`stats`] — per-area and per-category rollups and figure data series.
//! 6. [`synth`] — seeded synthetic corpus generator with planted ground truth.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod fixtures;
pub mod flows;
pub mod impact;
pub mod registry;
pub mod resolver;
pub mod stats;
pub mod synth;

pub use corpus::{CorpusError, CorpusGraph, ValidationReport};
pub use flows::CitationWindow;
pub use registry::SubjectCategoryRegistry;
pub use resolver::AssignmentTable;
