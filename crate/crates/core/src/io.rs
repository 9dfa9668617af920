//! Frame, load-case and dense-matrix files.
//!
//! Frame files are TOML:
//!
//! ```toml
//! format_version = 1
//! dimension = "2d"
//!
//! [sections.heavy]
//! area = 0.0097
//! inertia = 0.0001961
//! modulus = 2.1e7
//!
//! [[nodes]]
//! id = 1
//! coords = [0.0, 0.0]
//!
//! [[members]]
//! id = 1
//! a = 1
//! b = 2
//! section = "heavy"
//! kind = "column"
//!
//! [[supports]]
//! node = 1
//! kind = "fixed"
//! ```
//!
//! Load files hold `format_version` and a `[[loads]]` array of
//! `{ node, fx, fy, moment }`. Matrices are plain text: `rows cols` on the
//! first line, then the entries row by row.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::force::{LoadCase, NodalLoad};
use crate::model::{Dimension, Member, Node, Section, StructuralModel, Support};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum FileDimension {
    #[serde(rename = "2d")]
    Planar,
    #[serde(rename = "3d")]
    Spatial,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    format_version: u32,
    dimension: FileDimension,
    sections: BTreeMap<String, Section>,
    nodes: Vec<Node>,
    members: Vec<Member>,
    supports: Vec<Support>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoadFile {
    format_version: u32,
    #[serde(default)]
    loads: Vec<NodalLoad>,
}

fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {found} (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

fn toml_error(e: toml::de::Error) -> Error {
    Error::Parse(e.to_string().trim_end().replace('\n', " "))
}

pub fn parse_model_str(text: &str) -> Result<StructuralModel> {
    let file: FrameFile = toml::from_str(text).map_err(toml_error)?;
    check_version(file.format_version)?;
    let dimension = match file.dimension {
        FileDimension::Planar => Dimension::Planar,
        FileDimension::Spatial => Dimension::Spatial,
    };
    StructuralModel::new(dimension, file.nodes, file.members, file.sections, file.supports)
}

pub fn parse_model(path: &Path) -> Result<StructuralModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_model_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_model(model: &StructuralModel) -> Result<String> {
    let file = FrameFile {
        format_version: FORMAT_VERSION,
        dimension: match model.dimension() {
            Dimension::Planar => FileDimension::Planar,
            Dimension::Spatial => FileDimension::Spatial,
        },
        sections: model.sections().clone(),
        nodes: model.nodes().to_vec(),
        members: model.members().to_vec(),
        supports: model.supports().to_vec(),
    };
    toml::to_string(&file).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_loads_str(text: &str) -> Result<LoadCase> {
    let file: LoadFile = toml::from_str(text).map_err(toml_error)?;
    check_version(file.format_version)?;
    Ok(LoadCase::new(file.loads))
}

pub fn parse_loads(path: &Path) -> Result<LoadCase> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_loads_str(&text)
}

pub fn write_loads(loads: &LoadCase) -> Result<String> {
    let file = LoadFile {
        format_version: FORMAT_VERSION,
        loads: loads.loads.clone(),
    };
    toml::to_string(&file).map_err(|e| Error::Parse(e.to_string()))
}

/// Dense matrix in plain text; entries use the shortest exact decimal form.
pub fn write_matrix(a: &DMatrix<f64>) -> String {
    let mut out = format!("{} {}\n", a.nrows(), a.ncols());
    for i in 0..a.nrows() {
        let row: Vec<String> = a.row(i).iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("matrix header is missing {what}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad matrix {what}: {e}")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let values = tokens
        .enumerate()
        .map(|(k, t)| t.parse::<f64>().map_err(|e| Error::Parse(format!("entry {k}: '{t}': {e}"))))
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries for a {rows}×{cols} matrix, found {}",
            rows * cols,
            values.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PORTAL: &str = r#"
format_version = 1
dimension = "2d"

[sections.s]
area = 0.01
inertia = 0.0002
modulus = 2.1e7

[[nodes]]
id = 1
coords = [0.0, 0.0]

[[nodes]]
id = 2
coords = [0.0, 3.0]

[[nodes]]
id = 3
coords = [4.0, 3.0]

[[nodes]]
id = 4
coords = [4.0, 0.0]

[[members]]
id = 1
a = 1
b = 2
section = "s"
kind = "column"

[[members]]
id = 2
a = 2
b = 3
section = "s"
kind = "beam"

[[members]]
id = 3
a = 4
b = 3
section = "s"

[[supports]]
node = 1
kind = "fixed"

[[supports]]
node = 4
kind = "fixed"
"#;

    #[test]
    fn portal_parses_and_round_trips() {
        let m = parse_model_str(PORTAL).unwrap();
        assert_eq!((m.nodes().len(), m.members().len()), (4, 3));
        let again = parse_model_str(&write_model(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn dangling_member_is_named() {
        let bad = PORTAL.replace("a = 2\nb = 3", "a = 2\nb = 9");
        let err = parse_model_str(&bad).unwrap_err();
        assert!(err.to_string().contains("member 2"), "{err}");
    }

    #[test]
    fn schema_errors_carry_position() {
        let bad = PORTAL.replace("coords = [0.0, 3.0]", "coords = \"x\"");
        let err = parse_model_str(&bad).unwrap_err();
        assert_eq!(err.kind(), "parse");
        assert!(err.to_string().contains("line"), "{err}");
        let bad = PORTAL.replace("format_version = 1", "format_version = 7");
        assert!(parse_model_str(&bad).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, -0.1, 3.5e-20, 0.0, 1.0 / 3.0, 7.0]);
        assert_eq!(read_matrix(&write_matrix(&a)).unwrap(), a);
        assert!(read_matrix("2 2\n1 2 3").is_err());
    }

    #[test]
    fn loads_round_trip() {
        let text = "format_version = 1\n[[loads]]\nnode = 2\nfx = 1.5\n";
        let l = parse_loads_str(text).unwrap();
        assert_eq!(l.loads[0].fy, 0.0);
        assert_eq!(parse_loads_str(&write_loads(&l).unwrap()).unwrap(), l);
    }
}
