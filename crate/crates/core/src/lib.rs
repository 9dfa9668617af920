//! Cycle bases for weighted graph models of rigid-jointed frames, the
//! force-method matrices built on them, and conditioning metrics.
//!
//! ```
//! use flexcycle::{basis, grid, model};
//!
//! let frame = grid::generate_grid(&grid::GridSpec::new(3, 4)).unwrap();
//! let graph = model::build_graph(&frame).unwrap();
//! let spec = basis::AlgorithmSpec::new(1).unwrap();
//! let b = basis::generate_basis(&graph, spec, None).unwrap();
//! let d = basis::adjacency_matrix(&basis::incidence_matrix(&b));
//! assert_eq!(d.nnz(), 46);
//! ```

pub mod basis;
pub mod cycles;
pub mod error;
pub mod force;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod model;
pub mod render;
pub mod report;

pub use error::{Error, Result};
/// Matrix types in the public API come from this version of nalgebra.
pub use nalgebra;
