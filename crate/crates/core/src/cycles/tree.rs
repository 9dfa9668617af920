use crate::model::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeKind {
    /// Shortest route tree: plain breadth-first tiers.
    Srt,
    /// Shortest route tree maximum: tiers grown only through members whose
    /// weight is not below the mean weight at the expanding node.
    Srtm,
}

impl std::fmt::Display for TreeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TreeKind::Srt => "SRT",
            TreeKind::Srtm => "SRTM",
        })
    }
}

/// Rooted tree with distance-tier labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteTree {
    root: usize,
    kind: TreeKind,
    forbidden: Vec<usize>,
    /// `(parent node, via member)` for every reached non-root node.
    parent: Vec<Option<(usize, usize)>>,
    label: Vec<Option<usize>>,
}

impl RouteTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn forbidden(&self) -> &[usize] {
        &self.forbidden
    }

    pub fn label(&self, node: usize) -> Option<usize> {
        self.label[node]
    }

    pub fn parent(&self, node: usize) -> Option<(usize, usize)> {
        self.parent[node]
    }

    pub fn contains(&self, node: usize) -> bool {
        self.label[node].is_some()
    }

    /// Members of the tree, ascending.
    pub fn members(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.parent.iter().flatten().map(|&(_, e)| e).collect();
        m.sort_unstable();
        m
    }

    /// Reached nodes grouped by label; tier `k` is sorted ascending.
    pub fn tiers(&self) -> Vec<Vec<usize>> {
        let depth = self.label.iter().flatten().max().map_or(0, |d| d + 1);
        let mut tiers = vec![Vec::new(); depth];
        for (n, l) in self.label.iter().enumerate() {
            if let Some(l) = l {
                tiers[*l].push(n);
            }
        }
        tiers
    }

    /// Tree members on the path from `node` up to the root.
    pub fn path_to_root(&self, mut node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, e)) = self.parent[node] {
            out.push(e);
            node = p;
        }
        out
    }
}

pub fn build_srt(graph: &WeightedGraph, root: usize, forbidden: Option<usize>) -> RouteTree {
    build_tree(graph, root, forbidden.as_slice(), TreeKind::Srt)
}

pub fn build_srtm(graph: &WeightedGraph, root: usize, forbidden: Option<usize>) -> RouteTree {
    build_tree(graph, root, forbidden.as_slice(), TreeKind::Srtm)
}

/// Grow a tree of `kind` from `root` without using any member in `forbidden`.
///
/// Tiers are expanded node by node in ascending node order. For SRT every
/// incident member is taken in ascending member order. For SRTM members
/// lighter than the mean weight of the node's usable incident members are
/// skipped and the rest are taken heaviest first. Nodes stranded by the
/// pruning are then attached through their heaviest member into the tree,
/// and expansion resumes from them, so the tree spans the root's component.
pub fn build_tree(graph: &WeightedGraph, root: usize, forbidden: &[usize], kind: TreeKind) -> RouteTree {
    let n = graph.node_count();
    let mut label = vec![None; n];
    let mut parent = vec![None; n];
    label[root] = Some(0);
    let usable = |e: usize| !forbidden.contains(&e);

    let mut frontier = vec![root];
    loop {
        while !frontier.is_empty() {
            frontier.sort_unstable();
            let mut next = Vec::new();
            for &u in &frontier {
                let depth = label[u].unwrap_or(0);
                for (e, v) in expansion_order(graph, u, &usable, kind) {
                    if label[v].is_none() {
                        label[v] = Some(depth + 1);
                        parent[v] = Some((u, e));
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        if kind == TreeKind::Srt {
            break;
        }
        // fallback: attach stranded nodes adjacent to the tree
        for v in 0..n {
            if label[v].is_some() {
                continue;
            }
            let best = graph
                .incident(v)
                .iter()
                .filter(|&&(e, u)| usable(e) && label[u].is_some())
                .fold(None::<(usize, usize)>, |best, &(e, u)| match best {
                    Some((be, _)) if graph.weight(be) >= graph.weight(e) => best,
                    _ => Some((e, u)),
                });
            if let Some((e, u)) = best {
                label[v] = Some(label[u].unwrap_or(0) + 1);
                parent[v] = Some((u, e));
                frontier.push(v);
            }
        }
        if frontier.is_empty() {
            break;
        }
    }

    RouteTree {
        root,
        kind,
        forbidden: forbidden.to_vec(),
        parent,
        label,
    }
}

fn expansion_order(
    graph: &WeightedGraph,
    u: usize,
    usable: &impl Fn(usize) -> bool,
    kind: TreeKind,
) -> Vec<(usize, usize)> {
    let incident: Vec<(usize, usize)> = graph.incident(u).iter().copied().filter(|&(e, _)| usable(e)).collect();
    match kind {
        TreeKind::Srt => incident,
        TreeKind::Srtm => {
            if incident.is_empty() {
                return incident;
            }
            let mean = incident.iter().map(|&(e, _)| graph.weight(e)).sum::<f64>() / incident.len() as f64;
            let mut kept: Vec<(usize, usize)> = incident.into_iter().filter(|&(e, _)| graph.weight(e) >= mean).collect();
            // heaviest first; equal weights keep ascending member order
            kept.sort_by(|x, y| graph.weight(y.0).total_cmp(&graph.weight(x.0)).then(x.0.cmp(&y.0)));
            kept
        }
    }
}
