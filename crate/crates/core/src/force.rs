//! Planar force method: statical basis B₁ from a cycle basis, particular
//! solution B₀ on a shortest route tree, unassembled flexibility Fₘ and the
//! flexibility matrix G = B₁ᵀFₘB₁.
//!
//! Member forces are three components per member, referred to the member's
//! `a` end in local axes (x from `a` to `b`, y rotated +90°):
//!
//! * `N`: axial force, tension positive;
//! * `V`: shear, the slope of the bending moment along x;
//! * `M`: bending moment at the `a` end, so `M(x) = M + V·x`.
//!
//! In global terms the components describe the action `(f, μ)` of the part
//! of the member beyond a section on the part before it, with
//! `N = f·eₓ`, `V = −f·e_y` and `μ` taken about the `a` end.

use nalgebra::{Cholesky, DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

use crate::basis::CycleBasis;
use crate::cycles::build_srt;
use crate::error::{Error, Result};
use crate::model::{Dimension, Section, StructuralModel, WeightedGraph};

/// Cantilever flexibility of a member in local axes.
pub fn member_flexibility(section: &Section, length: f64) -> Result<Matrix3<f64>> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!("member length must be positive, got {length}")));
    }
    section.validate()?;
    let (ea, ei, l) = (section.modulus * section.area, section.modulus * section.inertia, length);
    Ok(Matrix3::new(
        l / ea,
        0.0,
        0.0,
        0.0,
        l.powi(3) / (3.0 * ei),
        l * l / (2.0 * ei),
        0.0,
        l * l / (2.0 * ei),
        l / ei,
    ))
}

/// Block-diagonal Fₘ, one 3×3 block per member in member order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnassembledFlexibility {
    blocks: Vec<Matrix3<f64>>,
}

impl UnassembledFlexibility {
    pub fn new(model: &StructuralModel) -> Result<Self> {
        planar(model)?;
        let blocks = (0..model.members().len())
            .map(|m| member_flexibility(model.member_section(m), model.member_length(m)))
            .collect::<Result<_>>()?;
        Ok(UnassembledFlexibility { blocks })
    }

    pub fn blocks(&self) -> &[Matrix3<f64>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        3 * self.blocks.len()
    }

    /// Fₘ · x, exploiting the block structure.
    pub fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.nrows() != self.dim() {
            return Err(Error::Dimension(format!("Fm is {0}×{0}, operand has {1} rows", self.dim(), x.nrows())));
        }
        let mut out = DMatrix::zeros(x.nrows(), x.ncols());
        for (m, block) in self.blocks.iter().enumerate() {
            let rows = x.rows(3 * m, 3);
            out.rows_mut(3 * m, 3).copy_from(&(block * rows));
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (m, block) in self.blocks.iter().enumerate() {
            out.view_mut((3 * m, 3 * m), (3, 3)).copy_from(block);
        }
        out
    }
}

/// B₁: 3·M rows, 3 columns per cycle (axial, shear and moment bi-actions at
/// the cut).
#[derive(Debug, Clone, PartialEq)]
pub struct SelfStressMatrix {
    pub matrix: DMatrix<f64>,
}

/// B₀: 3·M rows, one column per free degree of freedom (fx, fy, moment at
/// every unsupported node, in node order).
#[derive(Debug, Clone, PartialEq)]
pub struct ParticularMatrix {
    pub matrix: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlexibilityMatrixG {
    pub matrix: DMatrix<f64>,
}

impl FlexibilityMatrixG {
    /// Number of cycles (3×3 blocks per side).
    pub fn block_count(&self) -> usize {
        self.matrix.nrows() / 3
    }

    /// Which 3×3 blocks contain a nonzero entry.
    pub fn block_pattern(&self) -> Vec<Vec<bool>> {
        let n = self.block_count();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.matrix.view((3 * i, 3 * j), (3, 3)).iter().any(|&v| v != 0.0))
                    .collect()
            })
            .collect()
    }

    pub fn block_nnz(&self) -> usize {
        self.block_pattern().iter().flatten().filter(|&&b| b).count()
    }
}

fn planar(model: &StructuralModel) -> Result<()> {
    match model.dimension() {
        Dimension::Planar => Ok(()),
        Dimension::Spatial => Err(Error::Unsupported3d),
    }
}

fn point(model: &StructuralModel, node: usize) -> [f64; 2] {
    let c = model.coords(node);
    [c[0], c[1]]
}

fn cross(p: [f64; 2], f: [f64; 2]) -> f64 {
    p[0] * f[1] - p[1] * f[0]
}

/// Local unit axes (eₓ, e_y) of a member.
fn axes(model: &StructuralModel, member: usize) -> ([f64; 2], [f64; 2]) {
    let (a, b) = model.member_ends(member);
    let (pa, pb) = (point(model, a), point(model, b));
    let l = model.member_length(member);
    let ex = [(pb[0] - pa[0]) / l, (pb[1] - pa[1]) / l];
    (ex, [-ex[1], ex[0]])
}

/// Local (N, V, M) from the global action `f` and the moment about the `a` end.
fn local_components(model: &StructuralModel, member: usize, f: [f64; 2], moment_at_a: f64) -> [f64; 3] {
    let (ex, ey) = axes(model, member);
    [f[0] * ex[0] + f[1] * ex[1], -(f[0] * ey[0] + f[1] * ey[1]), moment_at_a]
}

fn global_action(model: &StructuralModel, member: usize, r: &[f64]) -> ([f64; 2], f64) {
    let (ex, ey) = axes(model, member);
    let f = [r[0] * ex[0] - r[1] * ey[0], r[0] * ex[1] - r[1] * ey[1]];
    (f, r[2])
}

/// Statical basis from a cycle basis: each cycle is cut at the `a` end of its
/// generator and loaded by unit axial, shear and moment bi-actions, which are
/// carried around the closed cycle by rigid-body transfer.
pub fn build_b1(model: &StructuralModel, graph: &WeightedGraph, basis: &CycleBasis) -> Result<SelfStressMatrix> {
    planar(model)?;
    check_graph(model, graph)?;
    let rows = 3 * model.members().len();
    let mut b1 = DMatrix::zeros(rows, 3 * basis.len());
    for (k, cycle) in basis.cycles().iter().enumerate() {
        let walk = cycle
            .walk(graph)
            .ok_or_else(|| Error::Dimension(format!("cycle {k} is not a simple cycle")))?;
        let (generator, _) = walk[0];
        let cut = point(model, model.member_ends(generator).0);
        let (ex, ey) = axes(model, generator);
        let actions: [([f64; 2], f64); 3] = [(ex, 0.0), ([-ey[0], -ey[1]], 0.0), ([0.0, 0.0], 1.0)];
        for (s, &(force, cut_moment)) in actions.iter().enumerate() {
            // moment of the ring resultant about the origin
            let m0 = cut_moment + cross(cut, force);
            for &(member, forward) in &walk {
                let pa = point(model, model.member_ends(member).0);
                let sign = if forward { 1.0 } else { -1.0 };
                let f = [sign * force[0], sign * force[1]];
                let mu = sign * (m0 - cross(pa, force));
                let r = local_components(model, member, f, mu);
                for c in 0..3 {
                    b1[(3 * member + c, 3 * k + s)] = r[c];
                }
            }
        }
    }
    Ok(SelfStressMatrix { matrix: b1 })
}

fn check_graph(model: &StructuralModel, graph: &WeightedGraph) -> Result<()> {
    if graph.member_count() != model.members().len() {
        return Err(Error::Dimension(format!(
            "graph has {} members, model has {}",
            graph.member_count(),
            model.members().len()
        )));
    }
    Ok(())
}

/// Unsupported model nodes in node order; position `k` owns DOFs `3k..3k+3`.
pub fn free_nodes(model: &StructuralModel) -> Vec<usize> {
    (0..model.nodes().len()).filter(|&n| !model.is_supported(n)).collect()
}

/// Particular solution on the SRT rooted at the ground: each unit nodal load
/// travels down its tree path to the supports.
pub fn build_b0(model: &StructuralModel, graph: &WeightedGraph) -> Result<ParticularMatrix> {
    planar(model)?;
    check_graph(model, graph)?;
    let ground = graph.ground().ok_or_else(|| Error::InvalidModel("graph has no ground node".into()))?;
    let tree = build_srt(graph, ground, None);
    let free = free_nodes(model);
    let mut b0 = DMatrix::zeros(3 * model.members().len(), 3 * free.len());

    for g in 0..graph.node_count() {
        let Some(node) = graph.model_node(g) else { continue };
        let k = free.binary_search(&node).map_err(|_| Error::InvalidModel("free node lookup failed".into()))?;
        let xn = point(model, node);
        let loads: [([f64; 2], f64); 3] = [([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0), ([0.0, 0.0], 1.0)];
        let mut child = g;
        while let Some((parent, member)) = tree.parent(child) {
            let (ma, _) = model.member_ends(member);
            let pa = point(model, ma);
            // +1 when the load side of the member is its b end
            let sign = if graph.member(member).b == child { 1.0 } else { -1.0 };
            for (s, &(p, pm)) in loads.iter().enumerate() {
                let moment = pm + cross([xn[0] - pa[0], xn[1] - pa[1]], p);
                let r = local_components(model, member, [sign * p[0], sign * p[1]], sign * moment);
                for c in 0..3 {
                    b0[(3 * member + c, 3 * k + s)] = r[c];
                }
            }
            child = parent;
        }
    }
    Ok(ParticularMatrix { matrix: b0 })
}

/// B₀ restricted to a load case: one column per load component
/// (fx, fy, moment of each entry), scaled by its magnitude.
pub fn build_b0_for_loads(model: &StructuralModel, graph: &WeightedGraph, loads: &LoadCase) -> Result<ParticularMatrix> {
    let full = build_b0(model, graph)?;
    let free = free_nodes(model);
    let mut out = DMatrix::zeros(full.matrix.nrows(), 3 * loads.loads.len());
    for (j, l) in loads.loads.iter().enumerate() {
        let n = model
            .node_index(l.node)
            .ok_or_else(|| Error::InvalidModel(format!("load references missing node {}", l.node)))?;
        let k = free.binary_search(&n).map_err(|_| Error::LoadOnGround(l.node))?;
        for (c, v) in [l.fx, l.fy, l.moment].into_iter().enumerate() {
            out.column_mut(3 * j + c).copy_from(&(full.matrix.column(3 * k + c) * v));
        }
    }
    Ok(ParticularMatrix { matrix: out })
}

/// G = B₁ᵀFₘB₁, symmetrized and checked positive definite.
pub fn assemble_g(b1: &SelfStressMatrix, fm: &UnassembledFlexibility) -> Result<FlexibilityMatrixG> {
    let fb = fm.apply(&b1.matrix)?;
    let g = b1.matrix.transpose() * fb;
    let g = (&g + g.transpose()) * 0.5;
    if g.nrows() > 0 && Cholesky::new(g.clone()).is_none() {
        return Err(Error::RankDeficient);
    }
    Ok(FlexibilityMatrixG { matrix: g })
}

/// Nodal load on an unsupported node (t, t·m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodalLoad {
    pub node: u32,
    #[serde(default)]
    pub fx: f64,
    #[serde(default)]
    pub fy: f64,
    #[serde(default)]
    pub moment: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadCase {
    pub loads: Vec<NodalLoad>,
}

impl LoadCase {
    pub fn new(loads: Vec<NodalLoad>) -> Self {
        LoadCase { loads }
    }

    /// Load vector over the free DOFs of `model`.
    pub fn vector(&self, model: &StructuralModel) -> Result<DVector<f64>> {
        let free = free_nodes(model);
        let mut p = DVector::zeros(3 * free.len());
        for l in &self.loads {
            let n = model
                .node_index(l.node)
                .ok_or_else(|| Error::InvalidModel(format!("load references missing node {}", l.node)))?;
            if model.is_supported(n) {
                return Err(Error::LoadOnGround(l.node));
            }
            let k = free.binary_search(&n).map_err(|_| Error::LoadOnGround(l.node))?;
            p[3 * k] += l.fx;
            p[3 * k + 1] += l.fy;
            p[3 * k + 2] += l.moment;
        }
        Ok(p)
    }
}

/// B₀, B₁, Fₘ and G for one frame and basis.
#[derive(Debug, Clone)]
pub struct ForceMethodMatrices {
    pub b0: ParticularMatrix,
    pub b1: SelfStressMatrix,
    pub fm: UnassembledFlexibility,
    pub g: FlexibilityMatrixG,
}

impl ForceMethodMatrices {
    pub fn assemble(model: &StructuralModel, graph: &WeightedGraph, basis: &CycleBasis) -> Result<Self> {
        let fm = UnassembledFlexibility::new(model)?;
        let b1 = build_b1(model, graph, basis)?;
        let b0 = build_b0(model, graph)?;
        let g = assemble_g(&b1, &fm)?;
        Ok(ForceMethodMatrices { b0, b1, fm, g })
    }
}

#[derive(Debug, Clone)]
pub struct ForceSolution {
    /// Redundants, 3 per cycle.
    pub q: DVector<f64>,
    /// Member forces (N, V, M) at each member's `a` end.
    pub r: DVector<f64>,
    /// Displacements at the free DOFs.
    pub v0: DVector<f64>,
    /// ‖B₁ᵀFₘr‖ / ‖B₁ᵀFₘB₀p‖ (0 when the load produces no cut gap).
    pub compatibility: f64,
}

/// q = −G⁻¹(B₁ᵀFₘB₀)p, r = B₀p + B₁q, v₀ = B₀ᵀFₘr.
pub fn solve_force_method(
    model: &StructuralModel,
    graph: &WeightedGraph,
    basis: &CycleBasis,
    loads: &LoadCase,
) -> Result<ForceSolution> {
    let mats = ForceMethodMatrices::assemble(model, graph, basis)?;
    solve_with(&mats, &loads.vector(model)?)
}

pub fn solve_with(mats: &ForceMethodMatrices, p: &DVector<f64>) -> Result<ForceSolution> {
    let b0p = &mats.b0.matrix * p;
    let b0p_m = DMatrix::from_column_slice(b0p.len(), 1, b0p.as_slice());
    let fm_b0p = mats.fm.apply(&b0p_m)?.column(0).into_owned();
    let rhs = mats.b1.matrix.transpose() * &fm_b0p;
    let q = if mats.g.matrix.nrows() == 0 {
        DVector::zeros(0)
    } else {
        let chol = Cholesky::new(mats.g.matrix.clone()).ok_or(Error::RankDeficient)?;
        -chol.solve(&rhs)
    };
    let r = &b0p + &mats.b1.matrix * &q;
    let r_m = DMatrix::from_column_slice(r.len(), 1, r.as_slice());
    let fm_r = mats.fm.apply(&r_m)?.column(0).into_owned();
    let gap = (mats.b1.matrix.transpose() * &fm_r).norm();
    let scale = rhs.norm();
    let compatibility = if scale > 0.0 { gap / scale } else { gap };
    let v0 = mats.b0.matrix.transpose() * fm_r;
    Ok(ForceSolution { q, r, v0, compatibility })
}

/// Largest nodal equilibrium residual of one member-force column under
/// `load` (free DOF vector, or `None` for a self-stress), relative to the
/// largest member force component.
pub fn equilibrium_residual(model: &StructuralModel, r: &[f64], load: Option<&DVector<f64>>) -> f64 {
    let free = free_nodes(model);
    let mut residual = vec![[0.0f64; 3]; model.nodes().len()];
    for m in 0..model.members().len() {
        let (a, b) = model.member_ends(m);
        let (f, mu_a) = global_action(model, m, &r[3 * m..3 * m + 3]);
        let (pa, pb) = (point(model, a), point(model, b));
        let mu_b = mu_a - cross([pb[0] - pa[0], pb[1] - pa[1]], f);
        for c in 0..2 {
            residual[a][c] += f[c];
            residual[b][c] -= f[c];
        }
        residual[a][2] += mu_a;
        residual[b][2] -= mu_b;
    }
    if let Some(p) = load {
        for (k, &n) in free.iter().enumerate() {
            for c in 0..3 {
                residual[n][c] += p[3 * k + c];
            }
        }
    }
    let scale = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    free.iter()
        .flat_map(|&n| residual[n].iter().map(|v| v.abs()))
        .fold(0.0, f64::max)
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heavy_section_block() {
        let s = Section::new(0.00970, 0.00019610, 2.1e7).unwrap();
        let f = member_flexibility(&s, 3.0).unwrap();
        let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-4;
        assert!(close(f[(0, 0)], 1.4728e-5), "{}", f[(0, 0)]);
        assert!(close(f[(1, 1)], 2.1855e-3), "{}", f[(1, 1)]);
        assert!(close(f[(1, 2)], 1.0927e-3), "{}", f[(1, 2)]);
        assert!(close(f[(2, 2)], 7.2849e-4), "{}", f[(2, 2)]);
        assert_eq!(f, f.transpose());
        assert!(f[(0, 0)] > 0.0);
        assert!(f.view((0, 0), (2, 2)).determinant() > 0.0);
        assert!(f.determinant() > 0.0);
    }

    #[test]
    fn flexibility_scaling() {
        let s = Section::new(0.00106, 0.00000171, 2.1e7).unwrap();
        let f1 = member_flexibility(&s, 2.0).unwrap();
        let f2 = member_flexibility(&s, 4.0).unwrap();
        assert!((f2[(0, 0)] / f1[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((f2[(1, 1)] / f1[(1, 1)] - 8.0).abs() < 1e-12);
        assert!(member_flexibility(&s, 0.0).is_err());
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let fm = UnassembledFlexibility {
            blocks: vec![Matrix3::identity(); 2],
        };
        let mut b = DMatrix::zeros(6, 2);
        b[(0, 0)] = 1.0;
        b[(0, 1)] = 1.0;
        let r = assemble_g(&SelfStressMatrix { matrix: b }, &fm);
        assert_eq!(r.unwrap_err(), Error::RankDeficient);
    }
}
