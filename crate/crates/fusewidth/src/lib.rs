//! Labeled-graph expression dialects (clique-, fuse-, glue-, and
//! multi-clique-width), expression-rewriting pipelines between them, and
//! exact graph-problem solvers driven by the resulting decompositions, each
//! cross-checked against brute-force oracles at desk scale.

pub mod expr;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod repsets;
pub mod rewrite;
pub mod solvers;
pub mod suite;
