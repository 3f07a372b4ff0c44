//! Type-directed code reuse.
//!
//! Given a desired method signature, a description and tests, find a corpus
//! method whose interface can be aligned with the signature, synthesize an
//! adapter around it and check the adapter against the tests.
//!
//! The pipeline, stage by stage:
//!
//! - [`typemodel`]: type IR, classes, signatures, corpus entries.
//! - [`featurize`]: feature multisets of types.
//! - [`distance`]: normalised type distance and its memo table.
//! - [`align`]: 0-1 ILP interface alignment, exact and enumerated.
//! - [`search`] / [`rank`]: keyword retrieval and re-ranking by alignment cost.
//! - [`synth`]: conversion planning and adapter plans.
//! - [`runtime`]: values, builtin adaptees and the plan interpreter.
//! - [`driver`]: the search, align, synthesize and test loop.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod align;
pub mod distance;
pub mod driver;
pub mod featurize;
pub mod rank;
pub mod runtime;
pub mod search;
pub mod synth;
pub mod typemodel;
