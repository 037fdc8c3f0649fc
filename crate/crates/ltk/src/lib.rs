//! Layout tree kit: decoding, evaluation, and statistics for DFS-ordered
//! poster layout trees.
//!
//! A poster is a set of bounding boxes; its structure annotation is a single
//! DFS-ordered tree rooted at a virtual poster node, encoding the reading
//! order and the parent-child relations jointly. This crate provides:
//!
//! - [`layout`]: the domain model with construction-time validation;
//! - [`ingest`]: the canonical line-delimited dataset format and an adapter
//!   for foreign annotation exports;
//! - [`scoring`]: score-matrix producers (ground-truth oracle, seeded noisy
//!   oracle, rule-based geometric heuristic) and a score interchange format;
//! - [`decode`]: greedy tree decoding and its beam-search extension, plus
//!   cross-entropy loss evaluation;
//! - [`metrics`]: tree edit distance with the STEDS/REDS normalizations and
//!   per-direction/distance/category relation accuracies;
//! - [`stats`]: dataset analyses (direction and distance heatmaps, tree
//!   shape statistics, category transitions);
//! - [`report`]: CSV and SVG emission with frozen column layouts;
//! - [`synth`]: seeded synthetic posters and score matrices for sweeps.

pub mod decode;
pub mod ingest;
pub mod layout;
pub mod metrics;
pub mod report;
pub mod scoring;
pub mod stats;
pub mod synth;
