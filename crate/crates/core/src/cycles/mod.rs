//! Shortest route trees, minimal cycles on members and independence controls.

mod admissible;
mod gf2;
mod tree;

pub use admissible::{admissible_expansion, UnionSubgraph};
pub use gf2::{is_independent, BitRow, IndependenceTable};
pub use tree::{build_srt, build_srtm, build_tree, RouteTree, TreeKind};

use std::collections::BTreeMap;

use crate::model::WeightedGraph;

/// A set of members whose nodes all have even degree, i.e. a vector of the
/// cycle space over GF(2).
#[derive(Debug, Clone, PartialEq)]
pub struct CycleVector {
    members: Vec<usize>,
    weight: f64,
    generator: Option<usize>,
}

impl CycleVector {
    /// Build from a member set; duplicates cancel in pairs (GF(2) sum).
    pub fn from_members(graph: &WeightedGraph, members: impl IntoIterator<Item = usize>, generator: Option<usize>) -> Self {
        let mut counts: BTreeMap<usize, bool> = BTreeMap::new();
        for m in members {
            let e = counts.entry(m).or_insert(false);
            *e = !*e;
        }
        let members: Vec<usize> = counts.into_iter().filter(|&(_, odd)| odd).map(|(m, _)| m).collect();
        let weight = members.iter().map(|&m| graph.weight(m)).sum();
        CycleVector { members, weight, generator }
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// L(C): number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// W(C): sum of member weights.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    pub fn contains(&self, member: usize) -> bool {
        self.members.binary_search(&member).is_ok()
    }

    /// Symmetric difference (sum over GF(2)).
    pub fn symmetric_difference(&self, other: &CycleVector, graph: &WeightedGraph) -> CycleVector {
        CycleVector::from_members(graph, self.members.iter().chain(other.members.iter()).copied(), None)
    }

    /// Members shared with `other`.
    pub fn intersection(&self, other: &CycleVector) -> Vec<usize> {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.members[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn intersects(&self, other: &CycleVector) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// True when every touched node has even degree within the set.
    pub fn is_cycle_set(&self, graph: &WeightedGraph) -> bool {
        let mut degree = vec![0u32; graph.node_count()];
        for &m in &self.members {
            let gm = graph.member(m);
            degree[gm.a] += 1;
            degree[gm.b] += 1;
        }
        degree.iter().all(|d| d % 2 == 0)
    }

    /// Members in traversal order around a simple cycle, starting with the
    /// generator (or the lowest member) walked from its `a` end to its `b`
    /// end. Each entry is `(member, forward)` where `forward` means the walk
    /// goes `a → b`. `None` when the set is not a single simple cycle.
    pub fn walk(&self, graph: &WeightedGraph) -> Option<Vec<(usize, bool)>> {
        let first = self.generator.filter(|g| self.contains(*g)).or_else(|| self.members.first().copied())?;
        let mut by_node: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &m in &self.members {
            let gm = graph.member(m);
            by_node.entry(gm.a).or_default().push(m);
            by_node.entry(gm.b).or_default().push(m);
        }
        if by_node.values().any(|v| v.len() != 2) {
            return None;
        }
        let start = graph.member(first).a;
        let mut out = vec![(first, true)];
        let mut prev = first;
        let mut at = graph.member(first).b;
        while at != start {
            let pair = &by_node[&at];
            let next = if pair[0] == prev { pair[1] } else { pair[0] };
            let gm = graph.member(next);
            let forward = gm.a == at;
            out.push((next, forward));
            at = gm.other(at);
            prev = next;
            if out.len() > self.members.len() {
                return None;
            }
        }
        (out.len() == self.members.len()).then_some(out)
    }
}

/// Outcome of growing a cycle on a generator member.
#[derive(Debug, Clone, PartialEq)]
pub enum CycleSearch {
    Found(CycleVector),
    /// The member is a bridge: the two trees never meet.
    NoCycleThroughMember,
}

impl CycleSearch {
    pub fn cycle(self) -> Option<CycleVector> {
        match self {
            CycleSearch::Found(c) => Some(c),
            CycleSearch::NoCycleThroughMember => None,
        }
    }
}

/// Minimal cycle on `member`: two trees of `kind` are grown from the member's
/// ends with the member itself forbidden; tiers are added alternately (the
/// `a`-end tree first) and the first node reached by both trees closes the
/// cycle. Several common nodes in the same tier resolve to the lowest node.
pub fn min_cycle_on_member(graph: &WeightedGraph, member: usize, kind: TreeKind) -> CycleSearch {
    min_cycle_on_member_masked(graph, member, kind, &[])
}

/// As [`min_cycle_on_member`], with `masked` members removed from the graph.
pub fn min_cycle_on_member_masked(graph: &WeightedGraph, member: usize, kind: TreeKind, masked: &[usize]) -> CycleSearch {
    let gm = *graph.member(member);
    let mut forbidden = masked.to_vec();
    forbidden.push(member);
    let from_a = build_tree(graph, gm.a, &forbidden, kind);
    let from_b = build_tree(graph, gm.b, &forbidden, kind);

    let tiers_a = from_a.tiers();
    let tiers_b = from_b.tiers();
    let (mut depth_a, mut depth_b) = (0usize, 0usize);
    let mut turn_a = true;
    loop {
        let a_done = depth_a + 1 >= tiers_a.len();
        let b_done = depth_b + 1 >= tiers_b.len();
        if a_done && b_done {
            return CycleSearch::NoCycleThroughMember;
        }
        // a tree with no further tier yields its turn
        let grow_a = (turn_a && !a_done) || b_done;
        let fresh = if grow_a {
            depth_a += 1;
            tiers_a[depth_a].iter().copied().filter(|&n| from_b.label(n).is_some_and(|l| l <= depth_b)).min()
        } else {
            depth_b += 1;
            tiers_b[depth_b].iter().copied().filter(|&n| from_a.label(n).is_some_and(|l| l <= depth_a)).min()
        };
        turn_a = !turn_a;
        if let Some(meet) = fresh {
            let members = from_a
                .path_to_root(meet)
                .into_iter()
                .chain(from_b.path_to_root(meet))
                .chain(std::iter::once(member));
            return CycleSearch::Found(CycleVector::from_members(graph, members, Some(member)));
        }
    }
}

/// Shortest cycle on `member` routed through `node`: an SRT rooted at `node`
/// (with the member forbidden) reaches both member ends and the two tree
/// paths are closed by the member. When the paths share a leading stretch
/// the shared part cancels, and the result no longer visits `node`; `None`
/// is returned in that case and when either end is unreachable.
pub fn min_cycle_through_node(graph: &WeightedGraph, member: usize, node: usize) -> Option<CycleVector> {
    let gm = *graph.member(member);
    let tree = build_srt(graph, node, Some(member));
    tree.label(gm.a)?;
    tree.label(gm.b)?;
    let members = tree
        .path_to_root(gm.a)
        .into_iter()
        .chain(tree.path_to_root(gm.b))
        .chain(std::iter::once(member));
    let cycle = CycleVector::from_members(graph, members, Some(member));
    let visits = cycle.members().iter().any(|&m| {
        let x = graph.member(m);
        x.a == node || x.b == node
    });
    (visits || node == gm.a || node == gm.b).then_some(cycle)
}
