//! C ABI over the flexcycle library.
//!
//! Models, bases and reports are opaque handles created by `fc_*` functions
//! and released with the matching `*_free`. Every fallible call returns an
//! [`FcStatus`]; on failure [`fc_last_error_message`] describes the error for
//! the calling thread. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use flexcycle::basis::{adjacency_matrix, incidence_matrix, CandidateOrder, CycleBasis};
use flexcycle::force::ForceMethodMatrices;
use flexcycle::grid::{generate_grid, GridSpec, PropertyPattern};
use flexcycle::io::{parse_model, parse_model_str};
use flexcycle::metrics::{pdet_detail, pl, pn_detail};
use flexcycle::nalgebra::DMatrix;
use flexcycle::model::{build_graph, classify_members, cycle_rank, Dimension, StructuralModel, WeightedGraph};
use flexcycle::report::{compare_model, compute_basis, AlgorithmChoice, FrameSource, ReportFormat, RunConfig};
use flexcycle::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidModel = 3,
    DisconnectedStructure = 4,
    Multigraph = 5,
    Domain = 6,
    EmptyGraph = 7,
    InsufficientCycles = 8,
    Unsupported3d = 9,
    RankDeficient = 10,
    LoadOnGround = 11,
    Dimension = 12,
    NotSymmetric = 13,
    NotPositiveDefinite = 14,
    ZeroRow = 15,
    ChoppedPivotBreakdown = 16,
    Parse = 17,
    Io = 18,
    Usage = 19,
    BufferTooSmall = 20,
    OutOfRange = 21,
    Panic = 22,
}

impl From<&Error> for FcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidModel(_) => FcStatus::InvalidModel,
            Error::DisconnectedStructure { .. } => FcStatus::DisconnectedStructure,
            Error::Multigraph(_) => FcStatus::Multigraph,
            Error::Domain(_) => FcStatus::Domain,
            Error::EmptyGraph => FcStatus::EmptyGraph,
            Error::InsufficientCycles { .. } => FcStatus::InsufficientCycles,
            Error::Unsupported3d => FcStatus::Unsupported3d,
            Error::RankDeficient => FcStatus::RankDeficient,
            Error::LoadOnGround(_) => FcStatus::LoadOnGround,
            Error::Dimension(_) => FcStatus::Dimension,
            Error::NotSymmetric(_) => FcStatus::NotSymmetric,
            Error::NotPositiveDefinite => FcStatus::NotPositiveDefinite,
            Error::ZeroRow(_) => FcStatus::ZeroRow,
            Error::ChoppedPivotBreakdown(_) => FcStatus::ChoppedPivotBreakdown,
            Error::Parse(_) => FcStatus::Parse,
            Error::Io(_) => FcStatus::Io,
            Error::Usage(_) => FcStatus::Usage,
        }
    }
}

/// Section pattern codes for [`fc_model_grid`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcPattern {
    Homogeneous = 0,
    WeakBeams = 1,
    WeakColumns = 2,
    Checker = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FcCondition {
    pub pl: f64,
    pub pn: f64,
    pub pn_log10: f64,
    pub pdet: f64,
    pub pdet_log10: f64,
}

/// A frame and its grounded graph.
pub struct FcModel {
    model: StructuralModel,
    graph: WeightedGraph,
}

pub struct FcBasis {
    basis: CycleBasis,
    xd: usize,
}

pub struct FcReport {
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(FcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(FcStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FcStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FcStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(FcStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed_model(model: StructuralModel) -> Result<*mut FcModel, Fail> {
    let graph = build_graph(&model)?;
    Ok(Box::into_raw(Box::new(FcModel { model, graph })))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next `fc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Parse a frame from TOML text.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_from_toml(toml: *const c_char, out: *mut *mut FcModel) -> FcStatus {
    guard(|| {
        let t = text(toml, "toml")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, boxed_model(parse_model_str(t)?)?, "out")
    })
}

/// Read a frame file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_from_file(path: *const c_char, out: *mut *mut FcModel) -> FcStatus {
    guard(|| {
        let p = text(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, boxed_model(parse_model(Path::new(p))?)?, "out")
    })
}

/// Rectangular grid frame with 3 m bays and stories; `depth_spans == 0`
/// gives a planar frame. `pattern` is an [`FcPattern`] code.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_grid(
    stories: u32,
    spans: u32,
    depth_spans: u32,
    pattern: u32,
    out: *mut *mut FcModel,
) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pattern = match pattern {
            p if p == FcPattern::Homogeneous as u32 => PropertyPattern::Homogeneous,
            p if p == FcPattern::WeakBeams as u32 => PropertyPattern::WeakBeams,
            p if p == FcPattern::WeakColumns as u32 => PropertyPattern::WeakColumns,
            p if p == FcPattern::Checker as u32 => PropertyPattern::Checker,
            p => return Err(Fail(FcStatus::Usage, format!("unknown pattern code {p}"))),
        };
        let mut spec = GridSpec::new(stories as usize, spans as usize).with_pattern(pattern);
        if depth_spans > 0 {
            spec.depth_spans = Some(depth_spans as usize);
        }
        put(out, boxed_model(generate_grid(&spec)?)?, "out")
    })
}

/// # Safety
/// `model` must come from an `fc_model_*` constructor or be NULL.
#[no_mangle]
pub unsafe extern "C" fn fc_model_free(model: *mut FcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_member_count(model: *const FcModel, out: *mut usize) -> FcStatus {
    guard(|| put(out, borrow(model, "model")?.graph.member_count(), "out"))
}

/// First Betti number of the grounded graph.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_cycle_rank(model: *const FcModel, out: *mut usize) -> FcStatus {
    guard(|| put(out, cycle_rank(&borrow(model, "model")?.graph), "out"))
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_model_is_planar(model: *const FcModel, out: *mut bool) -> FcStatus {
    guard(|| put(out, borrow(model, "model")?.model.dimension() == Dimension::Planar, "out"))
}

/// Cycle basis by algorithm 1–5 (5 with weight-descending order and
/// alpha 2), or the spanning-tree baseline for 0.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_generate(model: *const FcModel, algorithm: u8, out: *mut *mut FcBasis) -> FcStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let choice = match algorithm {
            0 => AlgorithmChoice::Baseline,
            1..=5 => AlgorithmChoice::Algorithm(algorithm),
            _ => return Err(Fail(FcStatus::Usage, format!("algorithm must be 0..=5, got {algorithm}"))),
        };
        let partition = classify_members(&m.graph, 2)?;
        let basis = compute_basis(&m.graph, choice, CandidateOrder::WeightDescending, &partition)?;
        let xd = adjacency_matrix(&incidence_matrix(&basis)).nnz();
        put(out, Box::into_raw(Box::new(FcBasis { basis, xd })), "out")
    })
}

/// # Safety
/// `basis` must come from [`fc_basis_generate`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_free(basis: *mut FcBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_len(basis: *const FcBasis, out: *mut usize) -> FcStatus {
    guard(|| put(out, borrow(basis, "basis")?.basis.len(), "out"))
}

/// Nonzero count of D = CCᵗ.
///
/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_xd(basis: *const FcBasis, out: *mut usize) -> FcStatus {
    guard(|| put(out, borrow(basis, "basis")?.xd, "out"))
}

/// Member positions (0-based, model order) of cycle `index`. `len` always
/// receives the cycle length; with a short buffer nothing is copied and
/// `FC_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `basis` must be a live handle; `buf` must hold `cap` elements (or be NULL
/// when `cap` is 0); `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_cycle_members(
    basis: *const FcBasis,
    index: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> FcStatus {
    guard(|| {
        let b = borrow(basis, "basis")?;
        let cycle = b.basis.cycles().get(index).ok_or_else(|| {
            Fail(FcStatus::OutOfRange, format!("cycle {index} of {}", b.basis.len()))
        })?;
        let members = cycle.members();
        put(len, members.len(), "len")?;
        if cap < members.len() {
            return Err(Fail(FcStatus::BufferTooSmall, format!("need {} entries", members.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::ptr::copy_nonoverlapping(members.as_ptr(), buf, members.len());
        Ok(())
    })
}

/// Flexibility matrix G = B₁ᵀFₘB₁ of a planar model, row-major. `dim`
/// always receives the order of G; `buf` must hold `dim * dim` values.
///
/// # Safety
/// `model` and `basis` must be live handles, the basis generated from the
/// model; `buf` must hold `cap` values; `dim` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_flexibility_matrix(
    model: *const FcModel,
    basis: *const FcBasis,
    buf: *mut f64,
    cap: usize,
    dim: *mut usize,
) -> FcStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let b = borrow(basis, "basis")?;
        if b.basis.member_count() != m.graph.member_count() {
            return Err(Fail(FcStatus::Dimension, "basis belongs to a different model".into()));
        }
        let g = ForceMethodMatrices::assemble(&m.model, &m.graph, &b.basis)?.g.matrix;
        let n = g.nrows();
        put(dim, n, "dim")?;
        if cap < n * n {
            return Err(Fail(FcStatus::BufferTooSmall, format!("need {} values", n * n)));
        }
        if buf.is_null() && n > 0 {
            return Err(null("buf"));
        }
        for i in 0..n {
            for j in 0..n {
                buf.add(i * n + j).write(g[(i, j)]);
            }
        }
        Ok(())
    })
}

/// PL, PN and PDET of a symmetric positive definite `n`×`n` row-major matrix.
///
/// # Safety
/// `a` must hold `n * n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_condition(a: *const f64, n: usize, out: *mut FcCondition) -> FcStatus {
    guard(|| {
        if a.is_null() {
            return Err(null("a"));
        }
        let values = std::slice::from_raw_parts(a, n * n);
        let m = DMatrix::from_row_slice(n, n, values);
        let p = pn_detail(&m)?;
        let d = pdet_detail(&m)?;
        let c = FcCondition {
            pl: pl(&m)?,
            pn: p.value,
            pn_log10: p.log10,
            pdet: d.value,
            pdet_log10: d.log10,
        };
        put(out, c, "out")
    })
}

/// Side-by-side comparison of `count` algorithms (0 = baseline, 1–5) as a
/// table, or CSV when `csv` is true.
///
/// # Safety
/// `model` must be a live handle; `algorithms` must hold `count` entries;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_report_compare(
    model: *const FcModel,
    algorithms: *const u8,
    count: usize,
    csv: bool,
    out: *mut *mut FcReport,
) -> FcStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        if algorithms.is_null() && count > 0 {
            return Err(null("algorithms"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let ids = if count == 0 { &[][..] } else { std::slice::from_raw_parts(algorithms, count) };
        let choices = ids
            .iter()
            .map(|&a| match a {
                0 => Ok(AlgorithmChoice::Baseline),
                1..=5 => Ok(AlgorithmChoice::Algorithm(a)),
                _ => Err(Fail(FcStatus::Usage, format!("algorithm must be 0..=5, got {a}"))),
            })
            .collect::<Result<Vec<_>, Fail>>()?;
        let mut config = RunConfig::new(FrameSource::File("model".into()), choices);
        config.format = if csv { ReportFormat::Csv } else { ReportFormat::Table };
        let report = compare_model(&m.model, "model".into(), &config)?;
        let text = CString::new(report.render(config.format)).map_err(|e| Fail(FcStatus::Panic, e.to_string()))?;
        put(out, Box::into_raw(Box::new(FcReport { text })), "out")
    })
}

/// Report text; valid while the report lives.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn fc_report_text(report: *const FcReport) -> *const c_char {
    report.as_ref().map_or(std::ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `report` must come from [`fc_report_compare`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn fc_report_free(report: *mut FcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
