//! Fusion graph: typed nodes (2D superpixels, 3D supervoxels), typed edges
//! (spatial, cross-modal, temporal), per-node unary distributions, and the
//! hidden-node set used when previous frames enter training unobserved.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::{validate_distribution, LabelMapping, LabelSet};

/// Sentinel log-probability for inadmissible labels.
pub const LOG_ZERO: f64 = f64::NEG_INFINITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Modality {
    Image2D,
    Lidar3D,
}

/// Identity of one segment node: frame, modality, and segment index within
/// that frame and modality. Ordering is (frame, modality, index); the
/// deterministic message schedule and all serialized outputs rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeRef {
    pub frame: u64,
    pub modality: Modality,
    pub index: u32,
}

impl NodeRef {
    pub fn image2d(frame: u64, index: u32) -> Self {
        Self { frame, modality: Modality::Image2D, index }
    }

    pub fn lidar3d(frame: u64, index: u32) -> Self {
        Self { frame, modality: Modality::Lidar3D, index }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.modality {
            Modality::Image2D => "2d",
            Modality::Lidar3D => "3d",
        };
        write!(f, "f{}/{}/{}", self.frame, m, self.index)
    }
}

/// Per-node data: the initial classifier distribution in natural-log domain,
/// the admissibility mask, and the observation features consumed by the
/// pairwise kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct NodePayload {
    /// Natural-log initial probabilities; `LOG_ZERO` at inadmissible labels.
    /// exp of the admissible entries sums to 1.
    pub unary_log_prob: Vec<f64>,
    pub admissible: Vec<bool>,
    /// Segment centroid in meters (3D nodes).
    pub centroid3d: Option<[f64; 3]>,
    /// Mean RGB in [0, 1] per channel (2D nodes).
    pub mean_rgb: Option<[f64; 3]>,
    /// Angle between the local surface normal and vertical, in [0, pi/2]
    /// (3D nodes).
    pub normal_angle: Option<f64>,
}

impl NodePayload {
    /// Builds a payload from linear-domain probabilities. Entries at
    /// inadmissible labels must carry ~0 mass; the admissible entries are
    /// renormalized to sum exactly to 1 before taking logs.
    pub fn from_probs(probs: &[f64], admissible: Vec<bool>) -> Result<Self> {
        if probs.len() != admissible.len() {
            return Err(Error::LengthMismatch(probs.len(), admissible.len()));
        }
        if !admissible.iter().any(|&a| a) {
            return Err(Error::InvalidDistribution("no admissible label".into()));
        }
        let mut mass = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < -1e-12 {
                return Err(Error::InvalidDistribution(format!("entry {p} at label {i}")));
            }
            if admissible[i] {
                mass += p;
            } else if p > 1e-6 {
                return Err(Error::InvalidDistribution(format!(
                    "mass {p} on inadmissible label {i}"
                )));
            }
        }
        if mass <= 1e-12 {
            return Err(Error::InvalidDistribution("zero admissible mass".into()));
        }
        let unary_log_prob = probs
            .iter()
            .zip(&admissible)
            .map(|(&p, &adm)| if adm { (p.max(0.0) / mass).ln() } else { LOG_ZERO })
            .collect();
        Ok(Self { unary_log_prob, admissible, centroid3d: None, mean_rgb: None, normal_angle: None })
    }

    /// Fully admissible payload (typical for 2D nodes).
    pub fn from_probs_all_admissible(probs: &[f64]) -> Result<Self> {
        Self::from_probs(probs, vec![true; probs.len()])
    }

    pub fn with_centroid(mut self, centroid: [f64; 3]) -> Self {
        self.centroid3d = Some(centroid);
        self
    }

    pub fn with_mean_rgb(mut self, rgb: [f64; 3]) -> Self {
        self.mean_rgb = Some(rgb);
        self
    }

    pub fn with_normal_angle(mut self, angle: f64) -> Self {
        self.normal_angle = Some(angle);
        self
    }

    /// The normalized initial distribution (linear domain). Inference uses
    /// this same routine when pairwise terms vanish, so the two agree
    /// bit-for-bit.
    pub fn distribution(&self) -> Vec<f64> {
        normalize_log_space(&self.unary_log_prob)
    }

    pub fn label_count(&self) -> usize {
        self.unary_log_prob.len()
    }

    fn validate(&self, label_count: usize) -> std::result::Result<(), String> {
        if self.unary_log_prob.len() != label_count || self.admissible.len() != label_count {
            return Err(format!(
                "payload has {} labels, label set has {label_count}",
                self.unary_log_prob.len()
            ));
        }
        let mut sum = 0.0;
        for (i, &lp) in self.unary_log_prob.iter().enumerate() {
            if self.admissible[i] {
                if !lp.is_finite() && lp != LOG_ZERO {
                    return Err(format!("non-finite log-prob at admissible label {i}"));
                }
                sum += lp.exp();
            } else if lp != LOG_ZERO {
                return Err(format!("inadmissible label {i} lacks the log-zero sentinel"));
            }
        }
        if (sum - 1.0).abs() > 1e-6 {
            return Err(format!("admissible probabilities sum to {sum}"));
        }
        if let Some(rgb) = self.mean_rgb {
            if rgb.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return Err(format!("mean_rgb {rgb:?} outside [0, 1]"));
            }
        }
        if let Some(theta) = self.normal_angle {
            if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
                return Err(format!("normal_angle {theta} outside [0, pi/2]"));
            }
        }
        Ok(())
    }
}

/// Exponentiates and normalizes a log-domain vector; `LOG_ZERO` entries map
/// to probability 0.
pub fn normalize_log_space(log_values: &[f64]) -> Vec<f64> {
    let max = log_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return vec![0.0; log_values.len()];
    }
    let mut out: Vec<f64> = log_values.iter().map(|&v| (v - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    for v in &mut out {
        *v /= sum;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Neighboring superpixels of one frame.
    Spatial2D,
    /// Adjacent supervoxels of one frame.
    Spatial3D,
    /// A superpixel and a supervoxel of one frame linked by projection
    /// overlap. Canonical orientation: `a` is the 2D node, `b` the 3D node.
    CrossModal,
    /// A 3D node of the current frame and a 3D node of a previous frame.
    /// Canonical orientation: `a` is the later frame.
    Temporal,
}

/// Undirected edge with its precomputed observation kernel in [0, 1]. The
/// kernels depend only on observations, never on labels, so they are fixed
/// at graph-build time; inference touches only `weight * kernel + bias`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub a: NodeRef,
    pub b: NodeRef,
    pub kernel: f64,
}

impl Edge {
    pub fn new(kind: EdgeKind, a: NodeRef, b: NodeRef, kernel: f64) -> Self {
        Self { kind, a, b, kernel }
    }

    /// Enforces the modality/frame pattern of the kind and returns the edge
    /// in canonical orientation (CrossModal: 2D first; Temporal: later frame
    /// first; spatial kinds: lower NodeRef first).
    fn canonicalize(self) -> Result<Edge> {
        let Edge { kind, a, b, kernel } = self;
        if !(0.0..=1.0).contains(&kernel) || kernel.is_nan() {
            return Err(Error::KernelOutOfRange(kernel));
        }
        let mismatch = || Error::KindMismatch { kind, a, b };
        if a == b {
            return Err(mismatch());
        }
        match kind {
            EdgeKind::Spatial2D => {
                if a.modality != Modality::Image2D
                    || b.modality != Modality::Image2D
                    || a.frame != b.frame
                {
                    return Err(mismatch());
                }
                Ok(if a <= b { Edge { kind, a, b, kernel } } else { Edge { kind, a: b, b: a, kernel } })
            }
            EdgeKind::Spatial3D => {
                if a.modality != Modality::Lidar3D
                    || b.modality != Modality::Lidar3D
                    || a.frame != b.frame
                {
                    return Err(mismatch());
                }
                Ok(if a <= b { Edge { kind, a, b, kernel } } else { Edge { kind, a: b, b: a, kernel } })
            }
            EdgeKind::CrossModal => {
                if a.frame != b.frame {
                    return Err(mismatch());
                }
                match (a.modality, b.modality) {
                    (Modality::Image2D, Modality::Lidar3D) => Ok(Edge { kind, a, b, kernel }),
                    (Modality::Lidar3D, Modality::Image2D) => {
                        Ok(Edge { kind, a: b, b: a, kernel })
                    }
                    _ => Err(mismatch()),
                }
            }
            EdgeKind::Temporal => {
                if a.modality != Modality::Lidar3D
                    || b.modality != Modality::Lidar3D
                    || a.frame == b.frame
                {
                    return Err(mismatch());
                }
                Ok(if a.frame > b.frame {
                    Edge { kind, a, b, kernel }
                } else {
                    Edge { kind, a: b, b: a, kernel }
                })
            }
        }
    }
}

/// Immutable, validated fusion graph. Nodes are interned in (frame,
/// modality, index) order; the node and edge orderings are the contractual
/// basis for deterministic inference.
#[derive(Debug, Clone)]
pub struct FusionGraph {
    label_set: LabelSet,
    node_refs: Vec<NodeRef>,
    payloads: Vec<NodePayload>,
    edges: Vec<Edge>,
    /// Edge endpoints as interned node indices, aligned with `edges`.
    endpoints: Vec<(usize, usize)>,
    /// Per node: (edge index, neighbor node index), sorted.
    adjacency: Vec<Vec<(usize, usize)>>,
    hidden: BTreeSet<NodeRef>,
    index_of: BTreeMap<NodeRef, usize>,
}

/// Builds and validates a [`FusionGraph`].
///
/// Rejections are distinct: dangling endpoints, duplicate nodes, duplicate
/// edges, kind/modality mismatches, kernels outside [0, 1], payload/label
/// size mismatches, unnormalized unaries, hidden refs to missing nodes, and
/// 3D nodes that leave `sky` admissible.
pub fn build_graph(
    label_set: LabelSet,
    nodes: Vec<(NodeRef, NodePayload)>,
    edges: Vec<Edge>,
    hidden: BTreeSet<NodeRef>,
) -> Result<FusionGraph> {
    let mut sorted: Vec<(NodeRef, NodePayload)> = nodes;
    sorted.sort_by_key(|(r, _)| *r);
    for pair in sorted.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::DuplicateNode(pair[0].0));
        }
    }

    let sky = label_set.sky_index();
    let mut node_refs = Vec::with_capacity(sorted.len());
    let mut payloads = Vec::with_capacity(sorted.len());
    let mut index_of = BTreeMap::new();
    for (i, (node_ref, payload)) in sorted.into_iter().enumerate() {
        payload
            .validate(label_set.count())
            .map_err(|reason| Error::InvalidPayload { node: node_ref, reason })?;
        if node_ref.modality == Modality::Lidar3D {
            if let Some(sky_idx) = sky {
                if payload.admissible[sky_idx] {
                    return Err(Error::SkyAdmissibleOn3d(node_ref));
                }
            }
        }
        index_of.insert(node_ref, i);
        node_refs.push(node_ref);
        payloads.push(payload);
    }

    for h in &hidden {
        if !index_of.contains_key(h) {
            return Err(Error::UnknownHiddenNode(*h));
        }
    }

    let mut canonical: Vec<Edge> = Vec::with_capacity(edges.len());
    for edge in edges {
        let edge = edge.canonicalize()?;
        if !index_of.contains_key(&edge.a) {
            return Err(Error::DanglingEndpoint(edge.a));
        }
        if !index_of.contains_key(&edge.b) {
            return Err(Error::DanglingEndpoint(edge.b));
        }
        canonical.push(edge);
    }
    canonical.sort_by_key(|e| (e.kind, e.a, e.b));
    for pair in canonical.windows(2) {
        if pair[0].kind == pair[1].kind && pair[0].a == pair[1].a && pair[0].b == pair[1].b {
            return Err(Error::DuplicateEdge { kind: pair[0].kind, a: pair[0].a, b: pair[0].b });
        }
    }

    let endpoints: Vec<(usize, usize)> =
        canonical.iter().map(|e| (index_of[&e.a], index_of[&e.b])).collect();
    let mut adjacency = vec![Vec::new(); node_refs.len()];
    for (edge_idx, &(ia, ib)) in endpoints.iter().enumerate() {
        adjacency[ia].push((edge_idx, ib));
        adjacency[ib].push((edge_idx, ia));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    Ok(FusionGraph {
        label_set,
        node_refs,
        payloads,
        edges: canonical,
        endpoints,
        adjacency,
        hidden,
        index_of,
    })
}

impl FusionGraph {
    pub fn label_set(&self) -> &LabelSet {
        &self.label_set
    }

    pub fn label_count(&self) -> usize {
        self.label_set.count()
    }

    pub fn node_count(&self) -> usize {
        self.node_refs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node identities in canonical (frame, modality, index) order.
    pub fn node_refs(&self) -> &[NodeRef] {
        &self.node_refs
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_endpoints(&self, edge_idx: usize) -> (usize, usize) {
        self.endpoints[edge_idx]
    }

    pub fn payload(&self, node_idx: usize) -> &NodePayload {
        &self.payloads[node_idx]
    }

    pub fn payload_of(&self, node: &NodeRef) -> Option<&NodePayload> {
        self.index_of.get(node).map(|&i| &self.payloads[i])
    }

    pub fn node_index(&self, node: &NodeRef) -> Option<usize> {
        self.index_of.get(node).copied()
    }

    /// (edge index, neighbor node index) pairs of one node.
    pub fn neighbors(&self, node_idx: usize) -> &[(usize, usize)] {
        &self.adjacency[node_idx]
    }

    pub fn hidden(&self) -> &BTreeSet<NodeRef> {
        &self.hidden
    }

    pub fn is_hidden(&self, node_idx: usize) -> bool {
        self.hidden.contains(&self.node_refs[node_idx])
    }

    pub fn admissible_labels(&self, node_idx: usize) -> impl Iterator<Item = usize> + '_ {
        self.payloads[node_idx]
            .admissible
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| i)
    }

    /// Projects the graph onto a coarser label space: unary probabilities are
    /// summed over merged labels and renormalized, admissibility masks are
    /// OR-ed, edges and kernels are unchanged.
    pub fn restrict_labels(&self, mapping: &LabelMapping) -> Result<FusionGraph> {
        if mapping.old() != &self.label_set {
            return Err(Error::Validation(format!(
                "mapping domain {} does not match graph labels {}",
                mapping.old(),
                self.label_set
            )));
        }
        let new_count = mapping.new_labels().count();
        let nodes: Vec<(NodeRef, NodePayload)> = self
            .node_refs
            .iter()
            .zip(&self.payloads)
            .map(|(node_ref, payload)| {
                let mut probs = vec![0.0; new_count];
                let mut admissible = vec![false; new_count];
                for (old_idx, &lp) in payload.unary_log_prob.iter().enumerate() {
                    let new_idx = mapping.map_index(old_idx);
                    if payload.admissible[old_idx] {
                        admissible[new_idx] = true;
                        probs[new_idx] += lp.exp();
                    }
                }
                let mut new_payload = NodePayload::from_probs(&probs, admissible)
                    .expect("merged distribution stays valid");
                new_payload.centroid3d = payload.centroid3d;
                new_payload.mean_rgb = payload.mean_rgb;
                new_payload.normal_angle = payload.normal_angle;
                (*node_ref, new_payload)
            })
            .collect();
        build_graph(mapping.new_labels().clone(), nodes, self.edges.clone(), self.hidden.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap as Map;

    fn two_node_graph() -> FusionGraph {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let b = NodeRef::image2d(0, 1);
        let nodes = vec![
            (a, NodePayload::from_probs_all_admissible(&[0.3, 0.7]).unwrap()),
            (b, NodePayload::from_probs_all_admissible(&[0.6, 0.4]).unwrap()),
        ];
        let edges = vec![Edge::new(EdgeKind::Spatial2D, a, b, 0.5)];
        build_graph(labels, nodes, edges, BTreeSet::new()).unwrap()
    }

    #[test]
    fn minimal_graph_builds() {
        let g = two_node_graph();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].kernel, 0.5);
        assert_eq!(g.neighbors(0), &[(0usize, 1usize)]);
    }

    #[test]
    fn dangling_endpoint_rejected() {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let missing = NodeRef::image2d(0, 9);
        let nodes = vec![(a, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap())];
        let edges = vec![Edge::new(EdgeKind::Spatial2D, a, missing, 0.5)];
        let err = build_graph(labels, nodes, edges, BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::DanglingEndpoint(n) if n == missing));
    }

    #[test]
    fn crossmodal_between_two_2d_nodes_rejected() {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let b = NodeRef::image2d(0, 1);
        let nodes = vec![
            (a, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
            (b, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
        ];
        let edges = vec![Edge::new(EdgeKind::CrossModal, a, b, 0.5)];
        let err = build_graph(labels, nodes, edges, BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::KindMismatch { kind: EdgeKind::CrossModal, .. }));
    }

    #[test]
    fn kernel_out_of_range_rejected() {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let b = NodeRef::image2d(0, 1);
        let nodes = vec![
            (a, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
            (b, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
        ];
        let edges = vec![Edge::new(EdgeKind::Spatial2D, a, b, 1.5)];
        let err = build_graph(labels, nodes, edges, BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::KernelOutOfRange(_)));
    }

    #[test]
    fn duplicate_node_rejected() {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let nodes = vec![
            (a, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
            (a, NodePayload::from_probs_all_admissible(&[0.4, 0.6]).unwrap()),
        ];
        let err = build_graph(labels, nodes, vec![], BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::DuplicateNode(n) if n == a));
    }

    #[test]
    fn duplicate_edge_rejected_across_orientations() {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let b = NodeRef::image2d(0, 1);
        let nodes = vec![
            (a, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
            (b, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap()),
        ];
        let edges = vec![
            Edge::new(EdgeKind::Spatial2D, a, b, 0.5),
            Edge::new(EdgeKind::Spatial2D, b, a, 0.7),
        ];
        let err = build_graph(labels, nodes, edges, BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { .. }));
    }

    #[test]
    fn sky_must_be_inadmissible_on_3d_nodes() {
        let labels = LabelSet::four_class();
        let n = NodeRef::lidar3d(0, 0);
        let bad = NodePayload::from_probs_all_admissible(&[0.25, 0.25, 0.25, 0.25]).unwrap();
        let err = build_graph(labels.clone(), vec![(n, bad)], vec![], BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::SkyAdmissibleOn3d(_)));

        let good = NodePayload::from_probs(
            &[0.4, 0.0, 0.3, 0.3],
            vec![true, false, true, true],
        )
        .unwrap();
        assert!(build_graph(labels, vec![(n, good)], vec![], BTreeSet::new()).is_ok());
    }

    #[test]
    fn restrict_labels_sums_and_renormalizes() {
        let labels = LabelSet::four_class();
        let n = NodeRef::image2d(0, 0);
        let payload = NodePayload::from_probs_all_admissible(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let g = build_graph(labels.clone(), vec![(n, payload)], vec![], BTreeSet::new()).unwrap();
        let mapping = LabelMapping::keep_one(&labels, "ground", "non-ground").unwrap();
        let restricted = g.restrict_labels(&mapping).unwrap();
        let dist = restricted.payload(0).distribution();
        assert!((dist[0] - 0.1).abs() < 1e-12);
        assert!((dist[1] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn restrict_labels_identity_keeps_graph() {
        let g = two_node_graph();
        let mut pairs = Map::new();
        pairs.insert("ground".to_string(), "ground".to_string());
        pairs.insert("object".to_string(), "object".to_string());
        let mapping = LabelMapping::new(g.label_set(), &pairs).unwrap();
        let same = g.restrict_labels(&mapping).unwrap();
        assert_eq!(same.label_set(), g.label_set());
        for i in 0..g.node_count() {
            let a = g.payload(i).distribution();
            let b = same.payload(i).distribution();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn restrict_labels_ors_admissibility() {
        let labels = LabelSet::four_class();
        let n = NodeRef::lidar3d(0, 0);
        let payload =
            NodePayload::from_probs(&[0.5, 0.0, 0.25, 0.25], vec![true, false, true, true])
                .unwrap();
        let g = build_graph(labels.clone(), vec![(n, payload)], vec![], BTreeSet::new()).unwrap();
        let mapping = LabelMapping::keep_one(&labels, "ground", "non-ground").unwrap();
        let restricted = g.restrict_labels(&mapping).unwrap();
        // sky was inadmissible but vegetation/object were not, so the merged
        // non-ground label is admissible.
        assert_eq!(restricted.payload(0).admissible, vec![true, true]);
        let dist = restricted.payload(0).distribution();
        assert!((dist[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn restrict_composition_matches_composed_mapping() {
        let labels = LabelSet::four_class();
        let n = NodeRef::image2d(0, 0);
        let payload = NodePayload::from_probs_all_admissible(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let g = build_graph(labels.clone(), vec![(n, payload)], vec![], BTreeSet::new()).unwrap();

        let mut first = Map::new();
        first.insert("ground".into(), "flat".into());
        first.insert("sky".into(), "far".into());
        first.insert("vegetation".into(), "grow".into());
        first.insert("object".into(), "grow".into());
        let m1 = LabelMapping::new(&labels, &first).unwrap();
        let mut second = Map::new();
        second.insert("flat".into(), "flat".into());
        second.insert("far".into(), "rest".into());
        second.insert("grow".into(), "rest".into());
        let m2 = LabelMapping::new(m1.new_labels(), &second).unwrap();

        let two_step = g.restrict_labels(&m1).unwrap().restrict_labels(&m2).unwrap();
        let one_step = g.restrict_labels(&m1.compose(&m2).unwrap()).unwrap();
        assert_eq!(two_step.label_set(), one_step.label_set());
        let a = two_step.payload(0).distribution();
        let b = one_step.payload(0).distribution();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hidden_must_reference_existing_nodes() {
        let labels = LabelSet::new(["ground", "object"]).unwrap();
        let a = NodeRef::image2d(0, 0);
        let b = NodeRef::image2d(0, 1);
        let nodes = vec![(a, NodePayload::from_probs_all_admissible(&[0.5, 0.5]).unwrap())];
        let mut hidden = BTreeSet::new();
        hidden.insert(b);
        let err = build_graph(labels, nodes, vec![], hidden).unwrap_err();
        assert!(matches!(err, Error::UnknownHiddenNode(n) if n == b));
    }
}
