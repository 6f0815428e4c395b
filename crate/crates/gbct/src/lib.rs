//! Granular-ball clustering.
//!
//! The pipeline covers a dataset with granular balls (coarse k-means split
//! followed by consistency-driven binary splitting), then merges the balls
//! into clusters by boundary distance, with low-density balls treated as
//! noise and reattached at the end. Cluster count can be fixed or detected
//! from the jump structure of the merge distances.
//!
//! Entry points: [`pipeline::fit`] runs the whole thing; the stages are also
//! usable on their own via [`ball`], [`graph`], and [`cluster`].

pub mod ball;
pub mod cluster;
pub mod dataset;
pub mod error;
pub mod generate;
pub mod graph;
pub mod kmeans;
pub mod metrics;
pub mod par;
pub mod pipeline;
pub mod svg;

pub use ball::{BallSet, GranularBall, SplitConfig, SplitPolicy};
pub use cluster::{AdaptiveResult, Clustering, Knee, MergeRound};
pub use dataset::{Dataset, NOISE_LABEL};
pub use error::{Error, Result};
pub use graph::BallGraph;
pub use pipeline::{fit, FitConfig, FitReport, KChoice};
