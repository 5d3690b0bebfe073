//! Crate-wide error type.

use crate::graph::{EdgeKind, NodeRef};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    // Label space.
    #[error("label set needs at least 2 unique names, got {0}")]
    LabelSetTooSmall(usize),
    #[error("duplicate label name `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label mapping is not total: old label `{0}` has no image")]
    MappingNotTotal(String),

    // Graph construction.
    #[error("duplicate node {0}")]
    DuplicateNode(NodeRef),
    #[error("dangling endpoint: edge references missing node {0}")]
    DanglingEndpoint(NodeRef),
    #[error("kind/modality mismatch: {kind:?} edge between {a} and {b}")]
    KindMismatch { kind: EdgeKind, a: NodeRef, b: NodeRef },
    #[error("edge kernel {0} outside [0, 1]")]
    KernelOutOfRange(f64),
    #[error("duplicate edge ({kind:?}, {a}, {b})")]
    DuplicateEdge { kind: EdgeKind, a: NodeRef, b: NodeRef },
    #[error("hidden set references missing node {0}")]
    UnknownHiddenNode(NodeRef),
    #[error("node {node}: {reason}")]
    InvalidPayload { node: NodeRef, reason: String },
    #[error("probability vector invalid: {0}")]
    InvalidDistribution(String),
    #[error("3D node {0} must mark `sky` inadmissible")]
    SkyAdmissibleOn3d(NodeRef),

    // Potentials and energies.
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("normal angle {0} outside [0, pi/2]")]
    AngleOutOfRange(f64),
    #[error("label {label} inadmissible at node {node}")]
    InadmissibleLabel { node: NodeRef, label: usize },
    #[error("labeling is incomplete: node {0} has no label")]
    IncompleteLabeling(NodeRef),
    #[error("label index {0} out of range for {1} labels")]
    LabelIndexOutOfRange(usize, usize),

    // Inference.
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("clamp references unknown node {0}")]
    UnknownClampNode(NodeRef),
    #[error("state space too large for exact enumeration: {0} admissible labelings (limit {1})")]
    StateSpaceExceeded(f64, f64),

    // Training.
    #[error("training dataset is empty")]
    EmptyDataset,
    #[error("observed label missing for non-hidden node {0}")]
    MissingObservation(NodeRef),
    #[error("observation given for hidden node {0}")]
    ObservationOnHidden(NodeRef),
    #[error("non-finite objective at example {example}: {value}")]
    NonFiniteObjective { example: usize, value: f64 },

    // Point clouds and features.
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("degenerate cloud: no plane with at least {0} inliers")]
    DegenerateCloud(usize),
    #[error("point index {0} out of range ({1} points)")]
    InvalidPointIndex(usize, usize),
    #[error("feature dimension mismatch: model expects {expected}, got {got}")]
    FeatureDimMismatch { expected: usize, got: usize },

    // Segmentation and rasters.
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("segment {0} has no member points")]
    EmptySegment(usize),
    #[error("superpixel id {0} has no pixels")]
    EmptySuperpixel(u32),

    // Pipeline and I/O.
    #[error("weight checkpoint label set does not match graph label set")]
    LabelSetMismatch,
    #[error("frame {frame}: {source}")]
    Frame {
        frame: u64,
        #[source]
        source: Box<Error>,
    },
    #[error("{0}")]
    Validation(String),
    #[error("parse error in {path} line {line}: {reason}")]
    Parse { path: String, line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("image error: {0}")]
    Image(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable category, printed by the CLI on stderr.
    pub fn category(&self) -> &'static str {
        use Error::*;
        match self {
            LabelSetTooSmall(_) | DuplicateLabel(_) | UnknownLabel(_) | MappingNotTotal(_) => {
                "label-space"
            }
            DuplicateNode(_) | DanglingEndpoint(_) | KindMismatch { .. } | KernelOutOfRange(_)
            | DuplicateEdge { .. } | UnknownHiddenNode(_) | InvalidPayload { .. }
            | InvalidDistribution(_) | SkyAdmissibleOn3d(_) => "graph-validation",
            ProbabilityOutOfRange(_) | AngleOutOfRange(_) | InadmissibleLabel { .. }
            | IncompleteLabeling(_) | LabelIndexOutOfRange(..) => "potential-domain",
            EmptyGraph | UnknownClampNode(_) | StateSpaceExceeded(..) => "inference",
            EmptyDataset | MissingObservation(_) | ObservationOnHidden(_)
            | NonFiniteObjective { .. } => "training",
            EmptyCloud | DegenerateCloud(_) | InvalidPointIndex(..)
            | FeatureDimMismatch { .. } => "point-cloud",
            LengthMismatch(..) | DimensionMismatch(_) | EmptySegment(_) | EmptySuperpixel(_) => {
                "segmentation"
            }
            LabelSetMismatch | Validation(_) => "pipeline",
            Frame { source, .. } => source.category(),
            Parse { .. } | Io(_) | Image(_) | Json(_) => "io",
        }
    }

    /// Wrap an error with the frame id it occurred in.
    pub fn in_frame(self, frame: u64) -> Error {
        Error::Frame { frame, source: Box::new(self) }
    }
}
