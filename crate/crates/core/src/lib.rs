//! Statistical realism checks for directed web-graph snapshots.
//!
//! A snapshot is loaded into an immutable [`CsrGraph`] and measured against
//! the elementary statistics that real web crawls share: average outdegree,
//! fraction of dangling nodes, fraction of nodes in bucket components, and how
//! well the adjacency rows compress once reordered by Gray code. The
//! [`pagerank`] module holds the solver machinery used to show what goes wrong
//! when experiments run on graphs that fail those checks: the two dangling-node
//! patches, the unnormalized linear-system solution and the concentration of
//! rank in buckets as the damping factor approaches one.
//!
//! Data-parallel passes run on rayon when the `parallel` feature (on by
//! default) is enabled and fall back to sequential loops otherwise. Every
//! reduction uses a fixed chunking, so results are bit-identical regardless of
//! the feature or the thread count.

pub mod cli;
pub mod components;
pub mod compress;
mod error;
pub mod graph;
pub mod grayorder;
pub mod ingest;
pub mod par;
pub mod pagerank;
pub mod report;
pub mod stats;
pub mod synth;

pub use components::{ComponentInfo, SccPartition};
pub use compress::{CompressionEstimate, CompressionParams};
pub use error::{Error, Result};
pub use graph::{CsrGraph, EdgeList, NodeId};
pub use grayorder::NodePermutation;
pub use pagerank::{DanglingStrategy, PageRankConfig, PageRankResult, Preference};
pub use report::{AuditReport, Verdict};
pub use stats::StatsSummary;
