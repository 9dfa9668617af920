//! Admissible-cycle control: a cycle may join the union of accepted cycles
//! only if it raises the union's first Betti number by exactly one.

use std::collections::{BTreeMap, BTreeSet};

use super::CycleVector;
use crate::model::WeightedGraph;

/// Subgraph formed by the members of the accepted cycles.
#[derive(Debug, Clone, Default)]
pub struct UnionSubgraph {
    members: BTreeSet<usize>,
}

impl UnionSubgraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn add(&mut self, cycle: &CycleVector) {
        self.members.extend(cycle.members().iter().copied());
    }

    /// b₁ of the subgraph induced by the member set.
    pub fn betti(&self, graph: &WeightedGraph) -> usize {
        betti_of(graph, self.members.iter().copied())
    }
}

fn betti_of(graph: &WeightedGraph, members: impl Iterator<Item = usize>) -> usize {
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut parent: Vec<usize> = Vec::new();
    let mut edges = 0;
    let mut merges = 0;
    for m in members {
        edges += 1;
        let gm = graph.member(m);
        let mut slot = |n: usize| {
            *index.entry(n).or_insert_with(|| {
                parent.push(parent.len());
                parent.len() - 1
            })
        };
        let (a, b) = (slot(gm.a), slot(gm.b));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
            merges += 1;
        }
    }
    // b1 = M - N + b0 with b0 = N - merges
    edges - merges
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// True iff b₁(union ∪ candidate) = b₁(union) + 1.
pub fn admissible_expansion(graph: &WeightedGraph, union: &UnionSubgraph, candidate: &CycleVector) -> bool {
    let before = union.betti(graph);
    let after = betti_of(
        graph,
        union.members.iter().copied().chain(candidate.members().iter().copied().filter(|m| !union.members.contains(m))),
    );
    after == before + 1
}
