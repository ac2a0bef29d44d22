//! Mining task-based API documentation from developer forum threads.
//!
//! The pipeline walks a thread dump, links each code snippet to the API it
//! demonstrates, extracts the sentences describing the task, classifies
//! developer reactions from the comment streams, and emits deterministic
//! documentation records plus a browsable site.
//!
//! Modules follow the data flow:
//!
//! * [`corpus`] — thread/post/comment model, body segmentation, loaders.
//! * [`catalog`] — API records and mention detection.
//! * [`snippet`] — hybrid parsing and type/method evidence extraction.
//! * [`linker`] — snippet-to-API association (deductive + probabilistic).
//! * [`summarize`] — relevance selection and graph-ranked descriptions.
//! * [`opinion`] — sentence sentiment.
//! * [`reactions`] — attaching opinionated comments to snippets.
//! * [`pipeline`] — the two-phase mining driver tying it all together.
//! * [`config`], [`emit`], [`eval`], [`render`] — configuration, scenario
//!   documents on disk, benchmark scoring, and the static HTML site.

pub mod catalog;
pub mod config;
pub mod corpus;
pub mod emit;
pub mod eval;
pub mod linker;
pub mod opinion;
pub mod pipeline;
pub mod reactions;
pub mod render;
pub mod snippet;
pub mod summarize;
