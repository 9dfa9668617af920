//! Side-by-side comparison of cycle-basis algorithms on one frame.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::basis::{
    adjacency_matrix, baseline_tree_basis, generate_basis, incidence_matrix, AdjacencyMatrix, AlgorithmSpec,
    CandidateOrder, CycleBasis, IncidenceMatrix,
};
use crate::error::{Error, Result};
use crate::force::ForceMethodMatrices;
use crate::grid::{generate_grid, GridSpec};
use crate::io::parse_model;
use crate::metrics::ConditionReport;
use crate::model::{
    build_graph_with, classify_members, cycle_rank, AdmissibilityPartition, Dimension, StructuralModel,
    WeightVariant, WeightedGraph,
};

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// One basis generator: an algorithm of record or the spanning-tree baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AlgorithmChoice {
    Baseline,
    Algorithm(u8),
}

impl std::str::FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "baseline" | "b" => Ok(AlgorithmChoice::Baseline),
            t => match t.parse::<u8>() {
                Ok(id @ 1..=5) => Ok(AlgorithmChoice::Algorithm(id)),
                _ => Err(Error::Usage(format!("unknown algorithm '{t}' (1-5 or baseline)"))),
            },
        }
    }
}

impl TryFrom<String> for AlgorithmChoice {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlgorithmChoice> for String {
    fn from(a: AlgorithmChoice) -> String {
        a.to_string()
    }
}

impl std::fmt::Display for AlgorithmChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgorithmChoice::Baseline => f.write_str("baseline"),
            AlgorithmChoice::Algorithm(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Table,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Usage(format!("unknown report format '{other}' (table, csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameSource {
    File(PathBuf),
    Grid(GridSpec),
}

impl FrameSource {
    pub fn load(&self) -> Result<StructuralModel> {
        match self {
            FrameSource::File(p) => parse_model(p),
            FrameSource::Grid(spec) => generate_grid(spec),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FrameSource::File(p) => p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into()),
            FrameSource::Grid(g) => match g.depth_spans {
                None => format!("grid {}x{} {}", g.stories, g.spans, g.pattern),
                Some(d) => format!("grid {}x{}x{} {}", g.stories, g.spans, d, g.pattern),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: FrameSource,
    pub algorithms: Vec<AlgorithmChoice>,
    pub weight_variant: WeightVariant,
    pub alpha: u32,
    /// Candidate order used by algorithm 5.
    pub order5: CandidateOrder,
    /// Working precision for the good-digit estimate.
    pub precision: u32,
    pub format: ReportFormat,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: FrameSource, algorithms: Vec<AlgorithmChoice>) -> Self {
        RunConfig {
            source,
            algorithms,
            weight_variant: WeightVariant::Sum,
            alpha: 2,
            order5: CandidateOrder::WeightDescending,
            precision: 16,
            format: ReportFormat::Table,
            output_dir: None,
        }
    }
}

/// Everything computed for one (frame, algorithm) pair.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub choice: AlgorithmChoice,
    pub basis: CycleBasis,
    pub incidence: IncidenceMatrix,
    pub adjacency: AdjacencyMatrix,
    /// Planar frames only.
    pub matrices: Option<ForceMethodMatrices>,
    pub condition: Option<ConditionReport>,
}

pub fn algorithm_spec(choice: AlgorithmChoice, order5: CandidateOrder) -> Result<Option<AlgorithmSpec>> {
    match choice {
        AlgorithmChoice::Baseline => Ok(None),
        AlgorithmChoice::Algorithm(5) => Ok(Some(AlgorithmSpec::algorithm5(order5))),
        AlgorithmChoice::Algorithm(id) => AlgorithmSpec::new(id).map(Some),
    }
}

pub fn compute_basis(
    graph: &WeightedGraph,
    choice: AlgorithmChoice,
    order5: CandidateOrder,
    partition: &AdmissibilityPartition,
) -> Result<CycleBasis> {
    match algorithm_spec(choice, order5)? {
        None => Ok(baseline_tree_basis(graph)),
        Some(spec) => generate_basis(graph, spec, Some(partition)),
    }
}

/// Basis, C, D and, for planar frames, B₀/B₁/Fₘ/G with their conditioning.
pub fn analyze(
    model: &StructuralModel,
    graph: &WeightedGraph,
    choice: AlgorithmChoice,
    order5: CandidateOrder,
    partition: &AdmissibilityPartition,
    precision: u32,
) -> Result<Analysis> {
    let basis = compute_basis(graph, choice, order5, partition)?;
    let incidence = incidence_matrix(&basis);
    let adjacency = adjacency_matrix(&incidence);
    let (matrices, condition) = match model.dimension() {
        Dimension::Spatial => (None, None),
        Dimension::Planar => {
            let mats = ForceMethodMatrices::assemble(model, graph, &basis)?;
            let cond = if basis.is_empty() {
                None
            } else {
                Some(ConditionReport::new(&mats.g.matrix, adjacency.nnz(), precision)?)
            };
            (Some(mats), cond)
        }
    };
    Ok(Analysis {
        choice,
        basis,
        incidence,
        adjacency,
        matrices,
        condition,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub algorithm: AlgorithmChoice,
    pub cycles: usize,
    pub total_length: usize,
    pub total_weight: f64,
    pub overlap_length: usize,
    pub overlap_weight: f64,
    pub xd: usize,
    pub sigma_sum: usize,
    pub condition: Option<ConditionReport>,
    /// Accept/reject decisions where the two independence controls differed.
    pub control_disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub frame: String,
    pub dimension: &'static str,
    pub members: usize,
    pub graph_nodes: usize,
    pub cycle_rank: usize,
    pub alpha: u32,
    pub weight_variant: String,
    pub inadmissible: usize,
    pub rows: Vec<ReportRow>,
    pub warnings: Vec<String>,
}

pub fn run_compare(config: &RunConfig) -> Result<ComparisonReport> {
    if config.algorithms.is_empty() {
        return Err(Error::Usage("no algorithm selected".into()));
    }
    let model = config.source.load()?;
    compare_model(&model, config.source.label(), config)
}

/// As [`run_compare`] for a model already in memory; `config.source` is not read.
pub fn compare_model(model: &StructuralModel, frame: String, config: &RunConfig) -> Result<ComparisonReport> {
    if config.algorithms.is_empty() {
        return Err(Error::Usage("no algorithm selected".into()));
    }
    let graph = build_graph_with(model, config.weight_variant)?;
    let partition = classify_members(&graph, config.alpha)?;
    let mut warnings = Vec::new();
    if model.dimension() == Dimension::Spatial {
        warnings.push("3D model: numerical force-method metrics skipped, combinatorial columns only".to_string());
    }
    let mut rows = Vec::with_capacity(config.algorithms.len());
    for &choice in &config.algorithms {
        let a = analyze(model, &graph, choice, config.order5, &partition, config.precision)?;
        let (overlap_length, overlap_weight) = a.basis.overlaps(&graph);
        rows.push(ReportRow {
            algorithm: choice,
            cycles: a.basis.len(),
            total_length: a.basis.total_length(),
            total_weight: a.basis.total_weight(),
            overlap_length,
            overlap_weight,
            xd: a.adjacency.nnz(),
            sigma_sum: a.adjacency.sigma().iter().sum(),
            condition: a.condition,
            control_disagreements: a.basis.trace().disagreements,
        });
    }
    Ok(ComparisonReport {
        frame,
        dimension: match model.dimension() {
            Dimension::Planar => "2d",
            Dimension::Spatial => "3d",
        },
        members: graph.member_count(),
        graph_nodes: graph.node_count(),
        cycle_rank: cycle_rank(&graph),
        alpha: config.alpha,
        weight_variant: config.weight_variant.to_string(),
        inadmissible: partition.inadmissible.len(),
        rows,
        warnings,
    })
}

/// Six significant digits; scientific notation outside [1e-4, 1e6).
pub fn fmt6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        let s = format!("{:.*}", (5 - e) as usize, x);
        // rounding may carry into a new digit, e.g. 9.999996 -> 10.00000
        let digits = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
        if digits > 6 && s.contains('.') {
            return format!("{:.*}", (4 - e).max(0) as usize, x);
        }
        s
    } else {
        format!("{x:.5e}")
    }
}

const COLUMNS: [&str; 12] = [
    "algorithm", "cycles", "sum_L", "overlap_L", "overlap_W", "X(D)", "sigma", "PL", "PN", "PDET", "g8", "g16",
];

impl ReportRow {
    fn cells(&self) -> Vec<String> {
        let c = self.condition.as_ref();
        let opt = |f: &dyn Fn(&ConditionReport) -> f64| c.map_or_else(|| "-".to_string(), |r| fmt6(f(r)));
        vec![
            self.algorithm.to_string(),
            self.cycles.to_string(),
            self.total_length.to_string(),
            self.overlap_length.to_string(),
            fmt6(self.overlap_weight),
            self.xd.to_string(),
            self.sigma_sum.to_string(),
            opt(&|r| r.pl),
            opt(&|r| r.pn),
            opt(&|r| r.pdet),
            opt(&|r| r.good_digits_at(8)),
            opt(&|r| r.good_digits_at(16)),
        ]
    }
}

impl ComparisonReport {
    fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# flexcycle report format_version={REPORT_FORMAT_VERSION}"),
            format!(
                "# frame: {} ({}), members {}, graph nodes {}, b1 {}, alpha {}, weights {}, inadmissible {}",
                self.frame,
                self.dimension,
                self.members,
                self.graph_nodes,
                self.cycle_rank,
                self.alpha,
                self.weight_variant,
                self.inadmissible
            ),
        ];
        lines.extend(self.warnings.iter().map(|w| format!("# warning: {w}")));
        lines
    }

    pub fn to_table(&self) -> String {
        let mut grid: Vec<Vec<String>> = vec![COLUMNS.iter().map(|s| s.to_string()).collect()];
        grid.extend(self.rows.iter().map(ReportRow::cells));
        let widths: Vec<usize> = (0..COLUMNS.len())
            .map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for l in self.header_lines() {
            out.push_str(&l);
            out.push('\n');
        }
        for row in &grid {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for l in self.header_lines() {
            out.push_str(&l);
            out.push('\n');
        }
        let _ = writeln!(out, "{}", COLUMNS.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.cells().join(","));
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Table => self.to_table(),
            ReportFormat::Csv => self.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digit_formatting() {
        assert_eq!(fmt6(3.4521538), "3.45215");
        assert_eq!(fmt6(0.5), "0.500000");
        assert_eq!(fmt6(5.824763e-49), "5.82476e-49");
        assert_eq!(fmt6(150442.13), "150442");
        assert_eq!(fmt6(9.9999996), "10.0000");
        assert_eq!(fmt6(-2.0), "-2.00000");
        assert_eq!(fmt6(0.0), "0");
    }

    #[test]
    fn algorithm_choice_parsing() {
        assert_eq!("3".parse::<AlgorithmChoice>().unwrap(), AlgorithmChoice::Algorithm(3));
        assert_eq!("baseline".parse::<AlgorithmChoice>().unwrap(), AlgorithmChoice::Baseline);
        assert!("6".parse::<AlgorithmChoice>().is_err());
    }

    #[test]
    fn empty_algorithm_set_is_usage_error() {
        let cfg = RunConfig::new(FrameSource::Grid(GridSpec::new(1, 1)), vec![]);
        assert_eq!(run_compare(&cfg).unwrap_err().kind(), "usage");
    }
}
