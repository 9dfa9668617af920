use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use flexcycle::basis::CandidateOrder;
use flexcycle::force::{equilibrium_residual, solve_with};
use flexcycle::grid::{generate_grid, GridSpec, PropertyPattern};
use flexcycle::io::{parse_loads, write_matrix, write_model};
use flexcycle::metrics::{
    chopped_gauss_solve, demo_systems, good_digits, nnz, pdet_detail, pl, pn_detail, Pivoting,
};
use flexcycle::model::{build_graph_with, classify_members, StructuralModel, WeightVariant};
use flexcycle::render::{render_frame, render_sparsity};
use flexcycle::report::{analyze, fmt6, run_compare, AlgorithmChoice, FrameSource, ReportFormat, RunConfig};
use flexcycle::{Error, Result};

/// Stdout writes that end the process quietly when the reader goes away.
macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*), false) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!($($t)*), true) };
}

fn emit(args: std::fmt::Arguments<'_>, newline: bool) {
    use std::io::Write;
    let mut so = std::io::stdout().lock();
    let r = so.write_fmt(args).and_then(|()| if newline { so.write_all(b"\n") } else { Ok(()) });
    if let Err(e) = r {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

#[derive(Parser)]
#[command(name = "flexcycle", version, about = "Cycle bases and flexibility matrices of rigid-jointed frames")]
struct Cli {
    /// TOML file with defaults for any option below (flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a rectangular grid frame as a frame file.
    Generate {
        #[command(flatten)]
        grid: GridArgs,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a cycle basis and print its cycles.
    Cycles {
        #[command(flatten)]
        frame: FrameArgs,
        #[command(flatten)]
        opts: RunArgs,
        #[arg(short, long)]
        algorithm: Option<AlgorithmChoice>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Write D = CCᵗ as a matrix text file.
        #[arg(long)]
        d_out: Option<PathBuf>,
    },
    /// Solve a planar frame for a load case by the force method.
    Force {
        #[command(flatten)]
        frame: FrameArgs,
        #[command(flatten)]
        opts: RunArgs,
        #[arg(short, long)]
        algorithm: Option<AlgorithmChoice>,
        /// Load-case file.
        #[arg(short, long)]
        loads: PathBuf,
        /// Write G as a matrix text file.
        #[arg(long)]
        g_out: Option<PathBuf>,
    },
    /// Condition numbers of a matrix file or of a frame's flexibility matrix.
    Condition {
        #[command(flatten)]
        frame: FrameArgs,
        #[command(flatten)]
        opts: RunArgs,
        #[arg(short, long)]
        algorithm: Option<AlgorithmChoice>,
        /// Dense matrix text file instead of a frame.
        #[arg(long, conflicts_with_all = ["frame", "grid"])]
        matrix: Option<PathBuf>,
        /// Run the short-arithmetic Gauss elimination demo instead.
        #[arg(long)]
        chopped_demo: bool,
        /// Significant digits for the demo.
        #[arg(long, default_value_t = 4)]
        digits: u32,
    },
    /// Compare algorithms side by side.
    Compare {
        #[command(flatten)]
        frame: FrameArgs,
        #[command(flatten)]
        opts: RunArgs,
        /// Comma-separated algorithm list, e.g. 1,2,baseline.
        #[arg(short, long, value_delimiter = ',')]
        algorithms: Option<Vec<AlgorithmChoice>>,
        #[arg(long)]
        format: Option<ReportFormat>,
        /// Also write the report into this directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Draw the frame with its cycles (SVG) and the sparsity of G or D (PBM).
    Render {
        #[command(flatten)]
        frame: FrameArgs,
        #[command(flatten)]
        opts: RunArgs,
        #[arg(short, long)]
        algorithm: Option<AlgorithmChoice>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        pbm: Option<PathBuf>,
        /// Which matrix the raster shows.
        #[arg(long, default_value = "g", value_parser = ["g", "d"])]
        matrix: String,
        /// One pixel per 3×3 block of G.
        #[arg(long)]
        blocks: bool,
    },
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long)]
    stories: usize,
    #[arg(long)]
    spans: usize,
    /// Bays along y; makes a 3D frame.
    #[arg(long)]
    depth_spans: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    bay: f64,
    #[arg(long, default_value_t = 3.0)]
    height: f64,
    #[arg(long, default_value = "homogeneous")]
    pattern: PropertyPattern,
}

impl GridArgs {
    fn spec(&self) -> GridSpec {
        GridSpec {
            stories: self.stories,
            spans: self.spans,
            depth_spans: self.depth_spans,
            bay_width: self.bay,
            story_height: self.height,
            pattern: self.pattern,
        }
    }
}

#[derive(Args, Clone)]
struct FrameArgs {
    /// Frame file.
    frame: Option<PathBuf>,
    /// Generated grid instead of a file: STORIESxSPANS or STORIESxSPANSxDEPTH.
    #[arg(long, conflicts_with = "frame")]
    grid: Option<String>,
    /// Section pattern for --grid.
    #[arg(long)]
    pattern: Option<PropertyPattern>,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Weight variant: sum or sqrt-sum.
    #[arg(long)]
    weights: Option<WeightVariant>,
    /// Admissibility divisor.
    #[arg(long)]
    alpha: Option<u32>,
    /// Candidate order for algorithm 5: weight or length.
    #[arg(long)]
    order5: Option<CandidateOrder>,
    /// Working precision (decimal digits) for the good-digit estimate.
    #[arg(long)]
    precision: Option<u32>,
}

/// Defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    frame: Option<PathBuf>,
    grid: Option<GridSpec>,
    algorithms: Option<Vec<AlgorithmChoice>>,
    algorithm: Option<AlgorithmChoice>,
    weights: Option<String>,
    alpha: Option<u32>,
    order5: Option<String>,
    precision: Option<u32>,
    format: Option<String>,
    output_dir: Option<PathBuf>,
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else { return Ok(ConfigFile::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e.to_string().trim_end().replace('\n', " "))))
}

struct Settings {
    weights: WeightVariant,
    alpha: u32,
    order5: CandidateOrder,
    precision: u32,
}

fn settings(opts: &RunArgs, cfg: &ConfigFile) -> Result<Settings> {
    Ok(Settings {
        weights: match (opts.weights, &cfg.weights) {
            (Some(w), _) => w,
            (None, Some(s)) => s.parse()?,
            (None, None) => WeightVariant::Sum,
        },
        alpha: opts.alpha.or(cfg.alpha).unwrap_or(2),
        order5: match (opts.order5, &cfg.order5) {
            (Some(o), _) => o,
            (None, Some(s)) => s.parse()?,
            (None, None) => CandidateOrder::WeightDescending,
        },
        precision: opts.precision.or(cfg.precision).unwrap_or(16),
    })
}

fn parse_grid(text: &str, pattern: PropertyPattern) -> Result<GridSpec> {
    let dims = text
        .split(['x', 'X'])
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Usage(format!("bad grid '{text}', expected STORIESxSPANS[xDEPTH]")))?;
    let spec = match dims[..] {
        [s, b] => GridSpec::new(s, b),
        [s, b, d] => GridSpec::spatial(s, b, d),
        _ => return Err(Error::Usage(format!("bad grid '{text}', expected STORIESxSPANS[xDEPTH]"))),
    };
    Ok(spec.with_pattern(pattern))
}

fn frame_source(frame: &FrameArgs, cfg: &ConfigFile) -> Result<FrameSource> {
    if let Some(p) = &frame.frame {
        return Ok(FrameSource::File(p.clone()));
    }
    if let Some(g) = &frame.grid {
        return Ok(FrameSource::Grid(parse_grid(g, frame.pattern.unwrap_or(PropertyPattern::Homogeneous))?));
    }
    if let Some(p) = &cfg.frame {
        return Ok(FrameSource::File(p.clone()));
    }
    if let Some(g) = &cfg.grid {
        let mut g = g.clone();
        if let Some(p) = frame.pattern {
            g.pattern = p;
        }
        return Ok(FrameSource::Grid(g));
    }
    Err(Error::Usage("no frame given (pass a frame file or --grid)".into()))
}

fn single_algorithm(flag: Option<AlgorithmChoice>, cfg: &ConfigFile) -> AlgorithmChoice {
    flag.or(cfg.algorithm)
        .or_else(|| cfg.algorithms.as_ref().and_then(|a| a.first().copied()))
        .unwrap_or(AlgorithmChoice::Algorithm(1))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

struct Prepared {
    model: StructuralModel,
    analysis: flexcycle::report::Analysis,
}

fn prepare(frame: &FrameArgs, opts: &RunArgs, alg: Option<AlgorithmChoice>, cfg: &ConfigFile) -> Result<Prepared> {
    let s = settings(opts, cfg)?;
    let model = frame_source(frame, cfg)?.load()?;
    let graph = build_graph_with(&model, s.weights)?;
    let partition = classify_members(&graph, s.alpha)?;
    let analysis = analyze(&model, &graph, single_algorithm(alg, cfg), s.order5, &partition, s.precision)?;
    Ok(Prepared { model, analysis })
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Generate { grid, output } => {
            let text = write_model(&generate_grid(&grid.spec())?)?;
            match output {
                Some(p) => write_out(&p, &text)?,
                None => out!("{text}"),
            }
        }
        Command::Cycles {
            frame,
            opts,
            algorithm,
            json,
            d_out,
        } => {
            let p = prepare(&frame, &opts, algorithm, &cfg)?;
            let a = &p.analysis;
            let ids = |c: &flexcycle::cycles::CycleVector| -> Vec<u32> {
                c.members().iter().map(|&m| p.model.members()[m].id).collect()
            };
            if json {
                let cycles: Vec<_> = a
                    .basis
                    .cycles()
                    .iter()
                    .map(|c| {
                        json!({
                            "generator": c.generator().map(|g| p.model.members()[g].id),
                            "members": ids(c),
                            "length": c.len(),
                            "weight": c.weight(),
                        })
                    })
                    .collect();
                let doc = json!({
                    "format_version": 1,
                    "algorithm": a.choice.to_string(),
                    "cycle_rank": a.basis.len(),
                    "xd": a.adjacency.nnz(),
                    "sigma": a.adjacency.sigma(),
                    "total_length": a.basis.total_length(),
                    "cycles": cycles,
                });
                outln!("{doc}");
            } else {
                outln!("algorithm {}  cycles {}  sum_L {}  X(D) {}", a.choice, a.basis.len(), a.basis.total_length(), a.adjacency.nnz());
                for (k, c) in a.basis.cycles().iter().enumerate() {
                    let members: Vec<String> = ids(c).iter().map(u32::to_string).collect();
                    outln!("{k:>4}  L={:<3} W={:<12} {}", c.len(), fmt6(c.weight()), members.join(" "));
                }
            }
            if let Some(path) = d_out {
                let d = nalgebra::DMatrix::from_fn(a.adjacency.size(), a.adjacency.size(), |i, j| a.adjacency.get(i, j) as f64);
                write_out(&path, &write_matrix(&d))?;
            }
        }
        Command::Force {
            frame,
            opts,
            algorithm,
            loads,
            g_out,
        } => {
            let p = prepare(&frame, &opts, algorithm, &cfg)?;
            let mats = p.analysis.matrices.as_ref().ok_or(Error::Unsupported3d)?;
            let load = parse_loads(&loads)?.vector(&p.model)?;
            let sol = solve_with(mats, &load)?;
            let residual = equilibrium_residual(&p.model, sol.r.as_slice(), Some(&load));
            outln!("# flexcycle force format_version=1");
            outln!("# algorithm {}  redundants {}  compatibility {}  equilibrium {}", p.analysis.choice, sol.q.len(), fmt6(sol.compatibility), fmt6(residual));
            outln!("{:>6} {:>14} {:>14} {:>14}", "member", "N", "V", "M");
            for (i, m) in p.model.members().iter().enumerate() {
                outln!("{:>6} {:>14} {:>14} {:>14}", m.id, fmt6(sol.r[3 * i]), fmt6(sol.r[3 * i + 1]), fmt6(sol.r[3 * i + 2]));
            }
            if let Some(path) = g_out {
                write_out(&path, &write_matrix(&mats.g.matrix))?;
            }
        }
        Command::Condition {
            frame,
            opts,
            algorithm,
            matrix,
            chopped_demo,
            digits,
        } => {
            if chopped_demo {
                for sys in demo_systems() {
                    for (label, piv) in [("natural", Pivoting::None), ("reordered", Pivoting::RowReorder)] {
                        let x = chopped_gauss_solve(&sys.a, &sys.b, digits, piv)?;
                        let xs: Vec<String> = x.iter().map(|&v| fmt6(v)).collect();
                        outln!("{:<18} {:<10} digits={digits} x = [{}]", sys.name, label, xs.join(", "));
                    }
                }
                return Ok(());
            }
            let s = settings(&opts, &cfg)?;
            let (g, xd) = match matrix {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    let m = flexcycle::io::read_matrix(&text)?;
                    let xd = nnz(&m, 1);
                    (m, xd)
                }
                None => {
                    let p = prepare(&frame, &opts, algorithm, &cfg)?;
                    let mats = p.analysis.matrices.ok_or(Error::Unsupported3d)?;
                    (mats.g.matrix, p.analysis.adjacency.nnz())
                }
            };
            let pl = pl(&g)?;
            let pn = pn_detail(&g)?;
            let pdet = pdet_detail(&g)?;
            let doc = json!({
                "format_version": 1,
                "pl": pl,
                "pn": pn.value,
                "pn_log10": pn.log10,
                "pdet": pdet.value,
                "pdet_log10": pdet.log10,
                "xd": xd,
                "precision": s.precision,
                "good_digits": good_digits(pl, s.precision),
                "good_digits_8": good_digits(pl, 8),
                "good_digits_16": good_digits(pl, 16),
            });
            outln!("{doc}");
        }
        Command::Compare {
            frame,
            opts,
            algorithms,
            format,
            output_dir,
        } => {
            let s = settings(&opts, &cfg)?;
            let algorithms = algorithms.or_else(|| cfg.algorithms.clone()).unwrap_or_else(|| {
                (1..=5).map(AlgorithmChoice::Algorithm).collect()
            });
            let format = match (format, &cfg.format) {
                (Some(f), _) => f,
                (None, Some(f)) => f.parse()?,
                (None, None) => ReportFormat::Table,
            };
            let config = RunConfig {
                source: frame_source(&frame, &cfg)?,
                algorithms,
                weight_variant: s.weights,
                alpha: s.alpha,
                order5: s.order5,
                precision: s.precision,
                format,
                output_dir: output_dir.or_else(|| cfg.output_dir.clone()),
            };
            let report = run_compare(&config)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = report.render(config.format);
            if let Some(dir) = &config.output_dir {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
                let name = match config.format {
                    ReportFormat::Table => "report.txt",
                    ReportFormat::Csv => "report.csv",
                };
                write_out(&dir.join(name), &text)?;
            }
            out!("{text}");
        }
        Command::Render {
            frame,
            opts,
            algorithm,
            svg,
            pbm,
            matrix,
            blocks,
        } => {
            if svg.is_none() && pbm.is_none() {
                return Err(Error::Usage("nothing to render (pass --svg and/or --pbm)".into()));
            }
            let p = prepare(&frame, &opts, algorithm, &cfg)?;
            if let Some(path) = svg {
                render_frame(&p.model, Some(&p.analysis.basis), &path)?;
            }
            if let Some(path) = pbm {
                let a = &p.analysis;
                let (m, block) = match matrix.as_str() {
                    "d" => (
                        nalgebra::DMatrix::from_fn(a.adjacency.size(), a.adjacency.size(), |i, j| a.adjacency.get(i, j) as f64),
                        1,
                    ),
                    _ => {
                        let g = a.matrices.as_ref().ok_or(Error::Unsupported3d)?;
                        (g.g.matrix.clone(), if blocks { 3 } else { 1 })
                    }
                };
                render_sparsity(&m, block, &path)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("{}", json!({ "error": "usage", "message": first }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
