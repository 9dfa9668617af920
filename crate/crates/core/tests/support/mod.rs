//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use flexcycle::basis::{baseline_tree_basis, generate_basis, AlgorithmSpec, CandidateOrder, CycleBasis};
use flexcycle::grid::{generate_grid, GridSpec, PropertyPattern};
use flexcycle::force::LoadCase;
use flexcycle::model::{build_graph, classify_members, StructuralModel, WeightedGraph};

/// Member forces (N, V, M at end a, local axes) by the displacement method
/// with 6×6 Euler-Bernoulli frame elements. Also returns the free DOF
/// displacements (ux, uy, θ per unsupported node in node order).
pub fn stiffness_solve(model: &StructuralModel, loads: &LoadCase) -> (DVector<f64>, DVector<f64>) {
    let n = model.nodes().len();
    let mut dof = vec![None; n];
    let mut free = 0;
    for (i, slot) in dof.iter_mut().enumerate() {
        if !model.is_supported(i) {
            *slot = Some(free);
            free += 1;
        }
    }
    let ndof = 3 * free;
    let mut k = DMatrix::<f64>::zeros(ndof, ndof);
    let mut elements = Vec::new();
    for m in 0..model.members().len() {
        let (a, b) = model.member_ends(m);
        let (pa, pb) = (model.coords(a), model.coords(b));
        let l = model.member_length(m);
        let (c, s) = ((pb[0] - pa[0]) / l, (pb[1] - pa[1]) / l);
        let sec = model.member_section(m);
        let (ea, ei) = (sec.modulus * sec.area, sec.modulus * sec.inertia);
        let (x1, y1, y2, y3, y4) = (ea / l, 12.0 * ei / l.powi(3), 6.0 * ei / l.powi(2), 4.0 * ei / l, 2.0 * ei / l);
        #[rustfmt::skip]
        let kl = DMatrix::from_row_slice(6, 6, &[
             x1, 0.0, 0.0, -x1, 0.0, 0.0,
            0.0,  y1,  y2, 0.0, -y1,  y2,
            0.0,  y2,  y3, 0.0, -y2,  y4,
            -x1, 0.0, 0.0,  x1, 0.0, 0.0,
            0.0, -y1, -y2, 0.0,  y1, -y2,
            0.0,  y2,  y4, 0.0, -y2,  y3,
        ]);
        let mut t = DMatrix::<f64>::zeros(6, 6);
        for o in [0, 3] {
            t[(o, o)] = c;
            t[(o, o + 1)] = s;
            t[(o + 1, o)] = -s;
            t[(o + 1, o + 1)] = c;
            t[(o + 2, o + 2)] = 1.0;
        }
        let kg = t.transpose() * &kl * &t;
        let map: Vec<Option<usize>> = [a, b]
            .iter()
            .flat_map(|&node| (0..3).map(move |c| (node, c)))
            .map(|(node, c)| dof[node].map(|d| 3 * d + c))
            .collect();
        for i in 0..6 {
            for j in 0..6 {
                if let (Some(p), Some(q)) = (map[i], map[j]) {
                    k[(p, q)] += kg[(i, j)];
                }
            }
        }
        elements.push((kg, map, (c, s)));
    }
    let mut p = DVector::zeros(ndof);
    for l in &loads.loads {
        let node = model.node_index(l.node).unwrap();
        let d = dof[node].unwrap();
        p[3 * d] += l.fx;
        p[3 * d + 1] += l.fy;
        p[3 * d + 2] += l.moment;
    }
    let u = k.clone().cholesky().expect("stiffness matrix SPD").solve(&p);
    let mut r = DVector::zeros(3 * elements.len());
    for (m, (kg, map, (c, s))) in elements.iter().enumerate() {
        let ue = DVector::from_iterator(6, map.iter().map(|d| d.map_or(0.0, |d| u[d])));
        let fe = kg * ue;
        // action of the b side on the a side at the a end is minus the nodal action on the member
        let (fx, fy, mu) = (-fe[0], -fe[1], -fe[2]);
        r[3 * m] = fx * c + fy * s;
        r[3 * m + 1] = -(-fx * s + fy * c);
        r[3 * m + 2] = mu;
    }
    (r, u)
}

/// Members of the smallest simple cycle through `member`, by enumerating
/// every member subset that contains it.
pub fn brute_force_min_cycle(graph: &WeightedGraph, member: usize) -> Option<usize> {
    let others: Vec<usize> = (0..graph.member_count()).filter(|&m| m != member).collect();
    assert!(others.len() <= 16, "brute force limited to small graphs");
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << others.len()) {
        let size = mask.count_ones() as usize + 1;
        if size < 3 || best.is_some_and(|b| size >= b) {
            continue;
        }
        let set: Vec<usize> = std::iter::once(member)
            .chain(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &m)| m))
            .collect();
        if is_simple_cycle(graph, &set) {
            best = Some(size);
        }
    }
    best
}

/// Shortest detour between the ends of `member` avoiding it, plus one.
pub fn bfs_min_cycle(graph: &WeightedGraph, member: usize) -> Option<usize> {
    let gm = graph.member(member);
    let mut dist = vec![usize::MAX; graph.node_count()];
    dist[gm.a] = 0;
    let mut q = VecDeque::from([gm.a]);
    while let Some(u) = q.pop_front() {
        for &(e, v) in graph.incident(u) {
            if e != member && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    (dist[gm.b] != usize::MAX).then(|| dist[gm.b] + 1)
}

/// Every touched node has degree two and the members form one connected loop.
pub fn is_simple_cycle(graph: &WeightedGraph, members: &[usize]) -> bool {
    let mut deg = vec![0u32; graph.node_count()];
    for &m in members {
        let gm = graph.member(m);
        deg[gm.a] += 1;
        deg[gm.b] += 1;
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let start = graph.member(members[0]).a;
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &m in members {
            let gm = graph.member(m);
            let v = if gm.a == u { gm.b } else if gm.b == u { gm.a } else { continue };
            if seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen.len() == deg.iter().filter(|&&d| d > 0).count()
}

/// Even degree at every node.
pub fn is_cycle_set(graph: &WeightedGraph, members: &[usize]) -> bool {
    let mut deg = vec![0u32; graph.node_count()];
    for &m in members {
        deg[graph.member(m).a] += 1;
        deg[graph.member(m).b] += 1;
    }
    deg.iter().all(|d| d % 2 == 0)
}

/// GF(2) rank of 0/1 rows by plain dense elimination.
pub fn gf2_rank(rows: &[Vec<usize>], width: usize) -> usize {
    let mut m: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![false; width];
            for &i in r {
                v[i] ^= true;
            }
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col]) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][col] {
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the full cycle space found by enumerating every member subset.
pub fn cycle_space_rank_brute(graph: &WeightedGraph) -> usize {
    let mm = graph.member_count();
    assert!(mm <= 16);
    let sets: Vec<Vec<usize>> = (1u32..(1 << mm))
        .map(|mask| (0..mm).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| is_cycle_set(graph, s))
        .collect();
    gf2_rank(&sets, mm)
}

/// Random connected simple graph: a random spanning tree plus extra members.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, nodes: usize, members: usize, weighted: bool) -> WeightedGraph {
    let max = nodes * (nodes - 1) / 2;
    let members = members.clamp(nodes - 1, max);
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let mut used = BTreeSet::new();
    for v in 1..nodes {
        let u = rng.random_range(0..v);
        ends.push((u, v));
        used.insert((u, v));
    }
    while ends.len() < members {
        let (a, b) = (rng.random_range(0..nodes), rng.random_range(0..nodes));
        let key = (a.min(b), a.max(b));
        if a != b && used.insert(key) {
            ends.push(if rng.random_bool(0.5) { (a, b) } else { (b, a) });
        }
    }
    let weights = (0..ends.len())
        .map(|_| if weighted { rng.random_range(1..=20) as f64 } else { 1.0 })
        .collect();
    WeightedGraph::new(nodes, &ends, weights, Some(0)).unwrap()
}

/// Extreme eigenvalues of a small symmetric matrix by bisection on the
/// number of sign changes in the leading principal minors of A − xI.
pub fn bisection_extremes(a: &DMatrix<f64>) -> (f64, f64) {
    let n = a.nrows();
    let below = |x: f64| -> usize {
        // leading minors d_k = det of the k×k block of A − xI
        let mut prev = 1.0f64;
        let mut changes = 0;
        for k in 1..=n {
            let block = DMatrix::from_fn(k, k, |i, j| a[(i, j)] - if i == j { x } else { 0.0 });
            let d = block.determinant();
            if (d < 0.0) != (prev < 0.0) || d == 0.0 {
                changes += 1;
            }
            prev = if d == 0.0 { -prev } else { d };
        }
        changes
    };
    let bound = a.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
    let solve = |target: usize| {
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if below(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    (solve(1), solve(n))
}

pub fn rel_diff(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let scale = a.amax().max(b.amax()).max(f64::MIN_POSITIVE);
    (a - b).amax() / scale
}

/// Reference frames used across the suites.
pub fn test_frames() -> Vec<(String, StructuralModel)> {
    let mut out = Vec::new();
    for (s, b) in [(1, 1), (1, 2), (2, 2), (3, 3), (3, 4), (4, 4), (5, 2)] {
        for p in [
            PropertyPattern::Homogeneous,
            PropertyPattern::WeakBeams,
            PropertyPattern::WeakColumns,
            PropertyPattern::Checker,
        ] {
            let spec = GridSpec::new(s, b).with_pattern(p);
            out.push((format!("{s}x{b} {p}"), generate_grid(&spec).unwrap()));
        }
    }
    for (s, b, d) in [(4, 1, 1), (2, 2, 1), (2, 2, 2)] {
        out.push((format!("{s}x{b}x{d}"), generate_grid(&GridSpec::spatial(s, b, d)).unwrap()));
    }
    out
}

/// Bases from algorithms 1–5 (both orders for 5) and the tree baseline.
pub fn all_bases(graph: &WeightedGraph) -> Vec<(String, CycleBasis)> {
    let partition = classify_members(graph, 2).unwrap();
    let mut out: Vec<(String, CycleBasis)> = (1..=4)
        .map(|id| (format!("alg {id}"), generate_basis(graph, AlgorithmSpec::new(id).unwrap(), None).unwrap()))
        .collect();
    for order in [CandidateOrder::WeightDescending, CandidateOrder::LengthAscending] {
        let b = generate_basis(graph, AlgorithmSpec::algorithm5(order), Some(&partition)).unwrap();
        out.push((format!("alg 5 {order:?}"), b));
    }
    out.push(("baseline".into(), baseline_tree_basis(graph)));
    out
}

pub fn grid_graph(stories: usize, spans: usize) -> WeightedGraph {
    build_graph(&generate_grid(&GridSpec::new(stories, spans)).unwrap()).unwrap()
}
