//! Frame structures, their weighted graph models and member admissibility.
//!
//! A [`StructuralModel`] holds the geometry and section data of a rigid-jointed
//! frame. [`build_graph`] contracts every supported joint into a single ground
//! node and weights each member by the diagonal of its stiffness matrix. The
//! resulting [`WeightedGraph`] is the substrate for all cycle algorithms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planar (2D) or spatial (3D) frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    Planar,
    Spatial,
}

impl Dimension {
    pub fn components(self) -> usize {
        match self {
            Dimension::Planar => 2,
            Dimension::Spatial => 3,
        }
    }
}

/// Cross-section properties: area (m²), second moment of area (m⁴), elastic modulus (t/m²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub area: f64,
    pub inertia: f64,
    pub modulus: f64,
}

impl Section {
    pub fn new(area: f64, inertia: f64, modulus: f64) -> Result<Self> {
        let s = Section { area, inertia, modulus };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.area) && ok(self.inertia) && ok(self.modulus)) {
            return Err(Error::Domain(format!(
                "section properties must be positive (A={}, I={}, E={})",
                self.area, self.inertia, self.modulus
            )));
        }
        Ok(())
    }

    /// Axial stiffness EA/L.
    pub fn axial_stiffness(&self, length: f64) -> f64 {
        self.modulus * self.area / length
    }

    /// Transverse stiffness 12EI/L³.
    pub fn shear_stiffness(&self, length: f64) -> f64 {
        12.0 * self.modulus * self.inertia / length.powi(3)
    }

    /// Rotational stiffness 4EI/L.
    pub fn rotational_stiffness(&self, length: f64) -> f64 {
        4.0 * self.modulus * self.inertia / length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    Beam,
    Column,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportKind {
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: u32,
    /// x, y for planar frames; x, y, z for spatial ones.
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub id: u32,
    pub a: u32,
    pub b: u32,
    pub section: String,
    #[serde(default = "default_kind")]
    pub kind: MemberKind,
}

fn default_kind() -> MemberKind {
    MemberKind::Other
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub node: u32,
    pub kind: SupportKind,
}

/// A validated frame. Nodes and members are kept sorted by id; internal
/// indices follow that order.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralModel {
    dimension: Dimension,
    nodes: Vec<Node>,
    members: Vec<Member>,
    sections: BTreeMap<String, Section>,
    supports: Vec<Support>,
    node_index: HashMap<u32, usize>,
    member_ends: Vec<(usize, usize)>,
    supported: Vec<bool>,
}

impl StructuralModel {
    pub fn new(
        dimension: Dimension,
        mut nodes: Vec<Node>,
        mut members: Vec<Member>,
        sections: BTreeMap<String, Section>,
        mut supports: Vec<Support>,
    ) -> Result<Self> {
        nodes.sort_by_key(|n| n.id);
        members.sort_by_key(|m| m.id);
        supports.sort_by_key(|s| s.node);

        let dim = dimension.components();
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.id, i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate node id {}", n.id)));
            }
            if n.coords.len() != dim {
                return Err(Error::InvalidModel(format!(
                    "node {} has {} coordinates, expected {}",
                    n.id,
                    n.coords.len(),
                    dim
                )));
            }
            if n.coords.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidModel(format!("node {} has non-finite coordinates", n.id)));
            }
        }
        for (name, s) in &sections {
            s.validate()
                .map_err(|e| Error::InvalidModel(format!("section '{name}': {e}")))?;
        }

        let mut seen_members = BTreeSet::new();
        let mut member_ends = Vec::with_capacity(members.len());
        for m in &members {
            if !seen_members.insert(m.id) {
                return Err(Error::InvalidModel(format!("duplicate member id {}", m.id)));
            }
            let a = *node_index.get(&m.a).ok_or_else(|| {
                Error::InvalidModel(format!("member {} references missing node {}", m.id, m.a))
            })?;
            let b = *node_index.get(&m.b).ok_or_else(|| {
                Error::InvalidModel(format!("member {} references missing node {}", m.id, m.b))
            })?;
            if a == b {
                return Err(Error::InvalidModel(format!(
                    "member {} connects node {} to itself",
                    m.id, m.a
                )));
            }
            if !sections.contains_key(&m.section) {
                return Err(Error::InvalidModel(format!(
                    "member {} references missing section '{}'",
                    m.id, m.section
                )));
            }
            let len = distance(&nodes[a].coords, &nodes[b].coords);
            if len <= 0.0 {
                return Err(Error::InvalidModel(format!("member {} has zero length", m.id)));
            }
            member_ends.push((a, b));
        }

        if supports.is_empty() {
            return Err(Error::InvalidModel("model has no supports".into()));
        }
        let mut supported = vec![false; nodes.len()];
        for s in &supports {
            let i = *node_index.get(&s.node).ok_or_else(|| {
                Error::InvalidModel(format!("support references missing node {}", s.node))
            })?;
            if supported[i] {
                return Err(Error::InvalidModel(format!("duplicate support at node {}", s.node)));
            }
            supported[i] = true;
        }

        Ok(StructuralModel {
            dimension,
            nodes,
            members,
            sections,
            supports,
            node_index,
            member_ends,
            supported,
        })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn sections(&self) -> &BTreeMap<String, Section> {
        &self.sections
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    pub fn node_index(&self, id: u32) -> Option<usize> {
        self.node_index.get(&id).copied()
    }

    pub fn is_supported(&self, node: usize) -> bool {
        self.supported[node]
    }

    /// Node indices of a member's `a` and `b` ends.
    pub fn member_ends(&self, member: usize) -> (usize, usize) {
        self.member_ends[member]
    }

    pub fn member_section(&self, member: usize) -> &Section {
        &self.sections[&self.members[member].section]
    }

    pub fn member_length(&self, member: usize) -> f64 {
        let (a, b) = self.member_ends[member];
        distance(&self.nodes[a].coords, &self.nodes[b].coords)
    }

    pub fn coords(&self, node: usize) -> &[f64] {
        &self.nodes[node].coords
    }
}

fn distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Which combination of stiffness diagonal terms weights a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightVariant {
    /// 2(α₁ + α₄ + α₃)
    #[default]
    Sum,
    /// 2(√α₁ + √α₄ + √α₃)
    SqrtSum,
}

impl std::str::FromStr for WeightVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(WeightVariant::Sum),
            "sqrt-sum" | "sqrt" => Ok(WeightVariant::SqrtSum),
            other => Err(Error::Usage(format!("unknown weight variant '{other}'"))),
        }
    }
}

impl std::fmt::Display for WeightVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightVariant::Sum => "sum",
            WeightVariant::SqrtSum => "sqrt-sum",
        })
    }
}

/// Weight of a planar member from the diagonal of its stiffness matrix.
pub fn member_weight(section: &Section, length: f64, variant: WeightVariant) -> Result<f64> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!("member length must be positive, got {length}")));
    }
    section.validate()?;
    let terms = [
        section.axial_stiffness(length),
        section.shear_stiffness(length),
        section.rotational_stiffness(length),
    ];
    Ok(combine(&terms, variant))
}

/// Weight of a spatial member: the axial term once plus the planar bending
/// terms for both bending planes (same second moment of area in each).
pub fn member_weight_spatial(section: &Section, length: f64, variant: WeightVariant) -> Result<f64> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!("member length must be positive, got {length}")));
    }
    section.validate()?;
    let shear = section.shear_stiffness(length);
    let rot = section.rotational_stiffness(length);
    let terms = [section.axial_stiffness(length), shear, rot, shear, rot];
    Ok(combine(&terms, variant))
}

fn combine(terms: &[f64], variant: WeightVariant) -> f64 {
    let s: f64 = match variant {
        WeightVariant::Sum => terms.iter().sum(),
        WeightVariant::SqrtSum => terms.iter().map(|t| t.sqrt()).sum(),
    };
    2.0 * s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphMember {
    /// Id of the structural member (or caller-chosen id for synthetic graphs).
    pub id: u32,
    pub a: usize,
    pub b: usize,
}

impl GraphMember {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Simple undirected graph with positive member weights.
///
/// Member indices are positions in [`WeightedGraph::members`]; adjacency lists
/// are sorted by member index so every traversal is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    members: Vec<GraphMember>,
    weights: Vec<f64>,
    ground: Option<usize>,
    components: usize,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Model node index for every graph node; `None` for the ground node.
    model_nodes: Vec<Option<usize>>,
}

impl WeightedGraph {
    /// Graph over nodes `0..node_count`; members are `(a, b)` pairs.
    pub fn new(
        node_count: usize,
        ends: &[(usize, usize)],
        weights: Vec<f64>,
        ground: Option<usize>,
    ) -> Result<Self> {
        let members = ends
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| GraphMember { id: i as u32, a, b })
            .collect();
        Self::from_members(node_count, members, weights, ground, vec![None; node_count])
    }

    fn from_members(
        node_count: usize,
        members: Vec<GraphMember>,
        weights: Vec<f64>,
        ground: Option<usize>,
        model_nodes: Vec<Option<usize>>,
    ) -> Result<Self> {
        if weights.len() != members.len() {
            return Err(Error::Dimension(format!(
                "{} weights for {} members",
                weights.len(),
                members.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Domain(format!("member weights must be positive, got {w}")));
        }
        if let Some(g) = ground {
            if g >= node_count {
                return Err(Error::InvalidModel(format!("ground node {g} out of range")));
            }
        }
        let mut adjacency = vec![Vec::new(); node_count];
        let mut pairs = BTreeSet::new();
        for (i, m) in members.iter().enumerate() {
            if m.a >= node_count || m.b >= node_count {
                return Err(Error::InvalidModel(format!("member {} has an end out of range", m.id)));
            }
            if m.a == m.b {
                return Err(Error::Multigraph(format!("member {} is a loop", m.id)));
            }
            if !pairs.insert((m.a.min(m.b), m.a.max(m.b))) {
                return Err(Error::Multigraph(format!("member {} is parallel to another member", m.id)));
            }
            adjacency[m.a].push((i, m.b));
            adjacency[m.b].push((i, m.a));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut g = WeightedGraph {
            node_count,
            members,
            weights,
            ground,
            components: 0,
            adjacency,
            model_nodes,
        };
        g.components = g.count_components();
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[GraphMember] {
        &self.members
    }

    pub fn member(&self, m: usize) -> &GraphMember {
        &self.members[m]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, m: usize) -> f64 {
        self.weights[m]
    }

    pub fn ground(&self) -> Option<usize> {
        self.ground
    }

    /// Number of connected components b₀.
    pub fn components(&self) -> usize {
        self.components
    }

    /// `(member, other end)` pairs incident to `node`, ascending by member.
    pub fn incident(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn model_node(&self, node: usize) -> Option<usize> {
        self.model_nodes[node]
    }

    /// Component label of every node, numbered in order of lowest node.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.node_count];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.node_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &(_, v) in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    fn count_components(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.components <= 1
    }
}

/// Contract supports into one ground node (graph node 0) and weight members
/// with the sum variant.
pub fn build_graph(model: &StructuralModel) -> Result<WeightedGraph> {
    build_graph_with(model, WeightVariant::Sum)
}

pub fn build_graph_with(model: &StructuralModel, variant: WeightVariant) -> Result<WeightedGraph> {
    let mut graph_node = vec![0usize; model.nodes().len()];
    let mut model_nodes = vec![None];
    for (i, slot) in graph_node.iter_mut().enumerate() {
        if !model.is_supported(i) {
            *slot = model_nodes.len();
            model_nodes.push(Some(i));
        }
    }
    let node_count = model_nodes.len();

    let mut members = Vec::with_capacity(model.members().len());
    let mut weights = Vec::with_capacity(model.members().len());
    for (i, m) in model.members().iter().enumerate() {
        let (a, b) = model.member_ends(i);
        let (ga, gb) = (graph_node[a], graph_node[b]);
        if ga == gb {
            return Err(Error::Multigraph(format!(
                "member {} joins two supported nodes",
                m.id
            )));
        }
        members.push(GraphMember { id: m.id, a: ga, b: gb });
        let section = model.member_section(i);
        let len = model.member_length(i);
        weights.push(match model.dimension() {
            Dimension::Planar => member_weight(section, len, variant)?,
            Dimension::Spatial => member_weight_spatial(section, len, variant)?,
        });
    }

    let g = WeightedGraph::from_members(node_count, members, weights, Some(0), model_nodes)?;
    if !g.is_connected() {
        let labels = g.component_labels();
        let stray = (0..node_count).find(|&n| labels[n] != labels[0]).unwrap_or(0);
        let id = g.model_node(stray).map_or(0, |i| model.nodes()[i].id);
        return Err(Error::DisconnectedStructure { node: id });
    }
    Ok(g)
}

/// Split of the members into F-admissible and inadmissible (NA) sets.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityPartition {
    pub admissible: BTreeSet<usize>,
    pub inadmissible: BTreeSet<usize>,
    pub alpha: u32,
    pub mean_weight: f64,
}

impl AdmissibilityPartition {
    pub fn threshold(&self) -> f64 {
        self.mean_weight / f64::from(self.alpha)
    }

    pub fn is_admissible(&self, member: usize) -> bool {
        self.admissible.contains(&member)
    }
}

/// A member is F-admissible when its weight is at least `mean / alpha`.
pub fn classify_members(graph: &WeightedGraph, alpha: u32) -> Result<AdmissibilityPartition> {
    if graph.member_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if alpha == 0 {
        return Err(Error::Domain("alpha must be at least 1".into()));
    }
    let mean_weight = graph.weights().iter().sum::<f64>() / graph.member_count() as f64;
    let threshold = mean_weight / f64::from(alpha);
    let (admissible, inadmissible) = (0..graph.member_count()).partition(|&m| graph.weight(m) >= threshold);
    Ok(AdmissibilityPartition {
        admissible,
        inadmissible,
        alpha,
        mean_weight,
    })
}

/// First Betti number b₁ = M − N + b₀.
pub fn cycle_rank(graph: &WeightedGraph) -> usize {
    graph.member_count() + graph.components() - graph.node_count()
}
