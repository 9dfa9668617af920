//! The five greedy basis-selection algorithms, the spanning-tree baseline and
//! the incidence/adjacency matrices of a cycle basis.

use serde::{Deserialize, Serialize};

use crate::cycles::{
    admissible_expansion, build_srt, min_cycle_on_member, min_cycle_on_member_masked, BitRow, CycleSearch,
    CycleVector, IndependenceTable, TreeKind, UnionSubgraph,
};
use crate::error::{Error, Result};
use crate::model::{cycle_rank, AdmissibilityPartition, WeightedGraph};

/// Order in which candidate cycles are offered to the greedy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateOrder {
    /// Heaviest cycle first.
    WeightDescending,
    /// Shortest cycle first.
    LengthAscending,
}

impl std::str::FromStr for CandidateOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weight" | "weight-descending" => Ok(CandidateOrder::WeightDescending),
            "length" | "length-ascending" => Ok(CandidateOrder::LengthAscending),
            other => Err(Error::Usage(format!("unknown ordering '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgorithmSpec {
    id: u8,
    tree: TreeKind,
    order: CandidateOrder,
    avoid_inadmissible: bool,
}

impl AlgorithmSpec {
    /// Algorithms 1–4, and 5 with its default weight-descending order.
    pub fn new(id: u8) -> Result<Self> {
        let (tree, order, avoid) = match id {
            1 => (TreeKind::Srt, CandidateOrder::WeightDescending, false),
            2 => (TreeKind::Srtm, CandidateOrder::WeightDescending, false),
            3 => (TreeKind::Srt, CandidateOrder::LengthAscending, false),
            4 => (TreeKind::Srtm, CandidateOrder::LengthAscending, false),
            5 => (TreeKind::Srtm, CandidateOrder::WeightDescending, true),
            _ => return Err(Error::Usage(format!("algorithm id must be 1..=5, got {id}"))),
        };
        Ok(AlgorithmSpec {
            id,
            tree,
            order,
            avoid_inadmissible: avoid,
        })
    }

    /// Algorithm 5 with an explicit candidate order.
    pub fn algorithm5(order: CandidateOrder) -> Self {
        AlgorithmSpec {
            id: 5,
            tree: TreeKind::Srtm,
            order,
            avoid_inadmissible: true,
        }
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    pub fn tree(&self) -> TreeKind {
        self.tree
    }

    pub fn order(&self) -> CandidateOrder {
        self.order
    }

    pub fn avoids_inadmissible(&self) -> bool {
        self.avoid_inadmissible
    }
}

/// Record of the greedy selection, including the cross-check between GF(2)
/// elimination and the admissible-cycle rule.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelectionTrace {
    pub candidates: usize,
    pub examined: usize,
    /// Candidates where the two independence controls disagreed.
    pub disagreements: usize,
    /// Cycles taken from the ground tree's fundamental cycles because the
    /// per-member candidates did not span the cycle space.
    pub completed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleBasis {
    cycles: Vec<CycleVector>,
    algorithm: Option<AlgorithmSpec>,
    member_count: usize,
    trace: SelectionTrace,
}

impl CycleBasis {
    pub fn cycles(&self) -> &[CycleVector] {
        &self.cycles
    }

    /// `None` for the spanning-tree baseline.
    pub fn algorithm(&self) -> Option<AlgorithmSpec> {
        self.algorithm
    }

    pub fn member_count(&self) -> usize {
        self.member_count
    }

    pub fn trace(&self) -> &SelectionTrace {
        &self.trace
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// L(C) = Σ L(Cᵢ).
    pub fn total_length(&self) -> usize {
        self.cycles.iter().map(CycleVector::len).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.cycles.iter().map(CycleVector::weight).sum()
    }

    /// Σ L(Cⁱ ∩ Cᵢ₊₁) and Σ W(Cⁱ ∩ Cᵢ₊₁), where Cⁱ is the union of the first
    /// `i` cycles in basis order.
    pub fn overlaps(&self, graph: &WeightedGraph) -> (usize, f64) {
        let mut union = vec![false; self.member_count];
        let mut len = 0;
        let mut weight = 0.0;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                for &m in c.members() {
                    if union[m] {
                        len += 1;
                        weight += graph.weight(m);
                    }
                }
            }
            for &m in c.members() {
                union[m] = true;
            }
        }
        (len, weight)
    }

    /// GF(2) rank of the cycles.
    pub fn rank(&self) -> usize {
        let mut t = IndependenceTable::new(self.member_count);
        self.cycles.iter().filter(|c| t.insert(c.members())).count()
    }
}

/// Run algorithm `spec` on `graph`. Algorithm 5 needs the admissibility partition.
///
/// When the candidates run out before b₁ cycles are held, the selection is
/// completed from the ground tree's fundamental cycles (see
/// [`SelectionTrace::completed`]).
pub fn generate_basis(
    graph: &WeightedGraph,
    spec: AlgorithmSpec,
    partition: Option<&AdmissibilityPartition>,
) -> Result<CycleBasis> {
    let mut candidates = if spec.avoids_inadmissible() {
        let partition = partition.ok_or_else(|| Error::Usage("algorithm 5 needs an admissibility partition".into()))?;
        na_aware_candidates(graph, spec.tree(), partition)
    } else {
        (0..graph.member_count())
            .filter_map(|m| min_cycle_on_member(graph, m, spec.tree()).cycle())
            .collect()
    };
    sort_candidates(&mut candidates, spec.order());
    greedy_select(graph, candidates, Some(spec))
}

/// Candidates for algorithm 5: cycles on inadmissible members first, each
/// grown with the earlier inadmissible generators masked out (mask dropped
/// when it leaves no cycle), then cycles on every other member.
fn na_aware_candidates(graph: &WeightedGraph, tree: TreeKind, partition: &AdmissibilityPartition) -> Vec<CycleVector> {
    let mut na: Vec<usize> = partition.inadmissible.iter().copied().collect();
    na.sort_by(|&x, &y| graph.weight(x).total_cmp(&graph.weight(y)).then(x.cmp(&y)));

    let mut out = Vec::with_capacity(graph.member_count());
    let mut processed: Vec<usize> = Vec::new();
    for &m in &na {
        let found = match min_cycle_on_member_masked(graph, m, tree, &processed) {
            CycleSearch::Found(c) => Some(c),
            CycleSearch::NoCycleThroughMember => min_cycle_on_member(graph, m, tree).cycle(),
        };
        out.extend(found);
        processed.push(m);
    }
    for m in (0..graph.member_count()).filter(|m| !partition.inadmissible.contains(m)) {
        out.extend(min_cycle_on_member(graph, m, tree).cycle());
    }
    out
}

fn sort_candidates(candidates: &mut [CycleVector], order: CandidateOrder) {
    let generator = |c: &CycleVector| c.generator().unwrap_or(usize::MAX);
    match order {
        CandidateOrder::WeightDescending => {
            candidates.sort_by(|x, y| y.weight().total_cmp(&x.weight()).then(generator(x).cmp(&generator(y))))
        }
        CandidateOrder::LengthAscending => {
            candidates.sort_by(|x, y| x.len().cmp(&y.len()).then(generator(x).cmp(&generator(y))))
        }
    }
}

fn greedy_select(graph: &WeightedGraph, candidates: Vec<CycleVector>, spec: Option<AlgorithmSpec>) -> Result<CycleBasis> {
    let needed = cycle_rank(graph);
    let mut table = IndependenceTable::new(graph.member_count());
    let mut union = UnionSubgraph::new();
    let mut trace = SelectionTrace {
        candidates: candidates.len(),
        ..Default::default()
    };
    let mut cycles = Vec::with_capacity(needed);
    for c in candidates {
        if cycles.len() == needed {
            break;
        }
        trace.examined += 1;
        let independent = table.is_independent(c.members());
        if independent != admissible_expansion(graph, &union, &c) {
            trace.disagreements += 1;
        }
        if independent {
            table.insert(c.members());
            union.add(&c);
            cycles.push(c);
        }
    }
    if cycles.len() < needed {
        // per-member shortest cycles need not span; the tree's fundamental cycles always do
        for c in baseline_tree_basis(graph).cycles {
            if cycles.len() == needed {
                break;
            }
            if table.insert(c.members()) {
                union.add(&c);
                trace.completed += 1;
                cycles.push(c);
            }
        }
    }
    if cycles.len() < needed {
        return Err(Error::InsufficientCycles {
            found: cycles.len(),
            needed,
        });
    }
    Ok(CycleBasis {
        cycles,
        algorithm: spec,
        member_count: graph.member_count(),
        trace,
    })
}

/// Fundamental cycles of an SRT rooted at the ground node (node 0 when the
/// graph has none), one per chord in ascending member order. Disconnected
/// graphs get one tree per component.
pub fn baseline_tree_basis(graph: &WeightedGraph) -> CycleBasis {
    let mut in_tree = vec![false; graph.member_count()];
    let mut trees = Vec::new();
    let mut covered = vec![false; graph.node_count()];
    let roots = graph.ground().into_iter().chain(0..graph.node_count());
    for root in roots {
        if covered[root] {
            continue;
        }
        let t = build_srt(graph, root, None);
        for n in 0..graph.node_count() {
            if t.contains(n) {
                covered[n] = true;
            }
        }
        for m in t.members() {
            in_tree[m] = true;
        }
        trees.push(t);
    }
    let tree_of = |n: usize| trees.iter().find(|t| t.contains(n)).expect("every node is covered");

    let cycles = (0..graph.member_count())
        .filter(|&m| !in_tree[m])
        .map(|chord| {
            let gm = graph.member(chord);
            let path = tree_of(gm.a)
                .path_to_root(gm.a)
                .into_iter()
                .chain(tree_of(gm.b).path_to_root(gm.b))
                .chain(std::iter::once(chord));
            CycleVector::from_members(graph, path, Some(chord))
        })
        .collect::<Vec<_>>();
    CycleBasis {
        trace: SelectionTrace {
            candidates: cycles.len(),
            examined: cycles.len(),
            disagreements: 0,
            completed: 0,
        },
        cycles,
        algorithm: None,
        member_count: graph.member_count(),
    }
}

/// Cycle–member incidence matrix C over GF(2); row order is basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix {
    cols: usize,
    rows: Vec<BitRow>,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn row_ones(&self, i: usize) -> usize {
        self.rows[i].count_ones()
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(BitRow::count_ones).sum()
    }
}

pub fn incidence_matrix(basis: &CycleBasis) -> IncidenceMatrix {
    IncidenceMatrix {
        cols: basis.member_count(),
        rows: basis
            .cycles()
            .iter()
            .map(|c| BitRow::from_indices(basis.member_count(), c.members()))
            .collect(),
    }
}

/// D = CCᵗ over the integers, with the intersection coefficients σᵢ.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    entries: Vec<Vec<u32>>,
    sigma: Vec<usize>,
}

impl AdjacencyMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    /// σᵢ: rows j > i sharing at least one member with row i.
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// χ(D): number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.entries.iter().flatten().filter(|&&v| v != 0).count()
    }

    /// Dense copy as reals.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&v| f64::from(v)).collect())
            .collect()
    }
}

/// Integer product CCᵗ. Panics if χ(D) ≠ b₁ + 2Σσᵢ, which would mean the
/// product itself is wrong.
pub fn adjacency_matrix(c: &IncidenceMatrix) -> AdjacencyMatrix {
    let n = c.rows();
    let mut entries = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in i..n {
            let shared = (0..c.cols()).filter(|&k| c.get(i, k) && c.get(j, k)).count() as u32;
            entries[i][j] = shared;
            entries[j][i] = shared;
        }
    }
    let sigma: Vec<usize> = (0..n).map(|i| (i + 1..n).filter(|&j| entries[i][j] != 0).count()).collect();
    let adj = AdjacencyMatrix { entries, sigma };
    let nonempty_rows = (0..n).filter(|&i| adj.entries[i][i] != 0).count();
    assert_eq!(
        adj.nnz(),
        nonempty_rows + 2 * adj.sigma.iter().sum::<usize>(),
        "χ(CCᵗ) identity violated"
    );
    adj
}
