//! Multi-modal obstacle detection fusion for ground vehicles.
//!
//! `fieldfuse` jointly classifies 2D image segments (superpixels) and 3D
//! lidar segments (supervoxels) with a pairwise conditional random field.
//! Initial per-segment class distributions come from upstream classifiers;
//! the CRF couples them through four edge families and re-infers labels:
//!
//! * spatial 2D edges between neighboring superpixels (RGB kernel),
//! * spatial 3D edges between adjacent supervoxels (surface-normal kernel),
//! * cross-modal edges created by projecting supervoxels into the image
//!   (normalized overlap kernel),
//! * temporal edges linking 3D segments of successive frames through the
//!   vehicle's localization poses (distance and localization-variance
//!   kernels).
//!
//! The crate covers the full pipeline: ground-plane alignment and per-point
//! geometric features, a pluggable initial point classifier, supervoxel
//! clustering, graph construction, loopy belief propagation (with an exact
//! enumeration oracle for small graphs), maximum-likelihood weight training
//! with marginalized hidden nodes, per-pixel / per-point evaluation, and a
//! deterministic synthetic-scene generator for end-to-end testing.

pub mod classify;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod inference;
pub mod io;
pub mod kdtree;
pub mod labels;
pub mod lidar;
pub mod pipeline;
pub mod potentials;
pub mod raster;
pub mod segment3d;
pub mod synth;
pub mod training;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeKind, FusionGraph, Modality, NodePayload, NodeRef};
pub use labels::{LabelMapping, LabelSet, ProbabilityTable};
pub use weights::{LabelMatrix, WeightSet};
