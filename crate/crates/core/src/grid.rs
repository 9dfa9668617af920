//! Rectangular multi-story frames with fixed bases.
//!
//! Node ids run level by level from the ground up, x fastest (then y for
//! spatial frames), starting at 1. Level 0 holds the supports. Member ids
//! follow the story order; within a story the columns come first, then the
//! beams along x, then (spatial) the beams along y.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dimension, Member, MemberKind, Node, Section, StructuralModel, Support, SupportKind};

pub const LIGHT: &str = "light";
pub const HEAVY: &str = "heavy";

/// Light section of the reference frames (A = 0.00106 m², I = 1.71e-6 m⁴).
pub fn light_section() -> Section {
    Section {
        area: 0.00106,
        inertia: 0.00000171,
        modulus: 2.1e7,
    }
}

/// Heavy section of the reference frames (A = 0.0097 m², I = 1.961e-4 m⁴).
pub fn heavy_section() -> Section {
    Section {
        area: 0.00970,
        inertia: 0.00019610,
        modulus: 2.1e7,
    }
}

/// Section assignment over beams and columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyPattern {
    /// Heavy everywhere.
    Homogeneous,
    /// Heavy columns, light beams.
    WeakBeams,
    /// Light columns, heavy beams.
    WeakColumns,
    /// Light and heavy alternating with story + bay parity.
    Checker,
}

impl std::str::FromStr for PropertyPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homogeneous" => Ok(PropertyPattern::Homogeneous),
            "weak-beams" => Ok(PropertyPattern::WeakBeams),
            "weak-columns" => Ok(PropertyPattern::WeakColumns),
            "checker" => Ok(PropertyPattern::Checker),
            other => Err(Error::Usage(format!(
                "unknown pattern '{other}' (homogeneous, weak-beams, weak-columns, checker)"
            ))),
        }
    }
}

impl std::fmt::Display for PropertyPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PropertyPattern::Homogeneous => "homogeneous",
            PropertyPattern::WeakBeams => "weak-beams",
            PropertyPattern::WeakColumns => "weak-columns",
            PropertyPattern::Checker => "checker",
        })
    }
}

impl PropertyPattern {
    fn section(self, kind: MemberKind, story: usize, bay: usize) -> &'static str {
        let light = match self {
            PropertyPattern::Homogeneous => false,
            PropertyPattern::WeakBeams => kind == MemberKind::Beam,
            PropertyPattern::WeakColumns => kind == MemberKind::Column,
            PropertyPattern::Checker => (story + bay + (kind == MemberKind::Beam) as usize).is_multiple_of(2),
        };
        if light {
            LIGHT
        } else {
            HEAVY
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub stories: usize,
    /// Bays along x.
    pub spans: usize,
    /// Bays along y; `Some` makes a spatial frame.
    #[serde(default)]
    pub depth_spans: Option<usize>,
    #[serde(default = "default_length")]
    pub bay_width: f64,
    #[serde(default = "default_length")]
    pub story_height: f64,
    #[serde(default = "default_pattern")]
    pub pattern: PropertyPattern,
}

fn default_length() -> f64 {
    3.0
}

fn default_pattern() -> PropertyPattern {
    PropertyPattern::Homogeneous
}

impl GridSpec {
    /// Planar homogeneous frame with 3 m bays and stories.
    pub fn new(stories: usize, spans: usize) -> Self {
        GridSpec {
            stories,
            spans,
            depth_spans: None,
            bay_width: 3.0,
            story_height: 3.0,
            pattern: PropertyPattern::Homogeneous,
        }
    }

    pub fn spatial(stories: usize, spans: usize, depth_spans: usize) -> Self {
        GridSpec {
            depth_spans: Some(depth_spans),
            ..GridSpec::new(stories, spans)
        }
    }

    pub fn with_pattern(mut self, pattern: PropertyPattern) -> Self {
        self.pattern = pattern;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.stories == 0 || self.spans == 0 || self.depth_spans == Some(0) {
            return Err(Error::Usage("stories and spans must be at least 1".into()));
        }
        if !(self.bay_width > 0.0 && self.story_height > 0.0) {
            return Err(Error::Usage("bay width and story height must be positive".into()));
        }
        Ok(())
    }
}

pub fn generate_grid(spec: &GridSpec) -> Result<StructuralModel> {
    spec.validate()?;
    let nx = spec.spans + 1;
    let ny = spec.depth_spans.map_or(1, |d| d + 1);
    let per_level = nx * ny;
    let id = |level: usize, y: usize, x: usize| (level * per_level + y * nx + x + 1) as u32;

    let mut nodes = Vec::new();
    for level in 0..=spec.stories {
        for y in 0..ny {
            for x in 0..nx {
                let (px, pz) = (x as f64 * spec.bay_width, level as f64 * spec.story_height);
                let coords = match spec.depth_spans {
                    None => vec![px, pz],
                    Some(_) => vec![px, y as f64 * spec.bay_width, pz],
                };
                nodes.push(Node {
                    id: id(level, y, x),
                    coords,
                });
            }
        }
    }

    let mut members = Vec::new();
    let mut push = |a: u32, b: u32, kind: MemberKind, story: usize, bay: usize| {
        members.push(Member {
            id: members.len() as u32 + 1,
            a,
            b,
            section: spec.pattern.section(kind, story, bay).to_string(),
            kind,
        });
    };
    for level in 1..=spec.stories {
        for y in 0..ny {
            for x in 0..nx {
                push(id(level - 1, y, x), id(level, y, x), MemberKind::Column, level, x + y);
            }
        }
        for y in 0..ny {
            for x in 0..spec.spans {
                push(id(level, y, x), id(level, y, x + 1), MemberKind::Beam, level, x + y);
            }
        }
        if spec.depth_spans.is_some() {
            for x in 0..nx {
                for y in 0..ny - 1 {
                    push(id(level, y, x), id(level, y + 1, x), MemberKind::Beam, level, x + y);
                }
            }
        }
    }

    let supports = (0..ny)
        .flat_map(|y| (0..nx).map(move |x| (y, x)))
        .map(|(y, x)| Support {
            node: id(0, y, x),
            kind: SupportKind::Fixed,
        })
        .collect();
    let sections = BTreeMap::from([(LIGHT.to_string(), light_section()), (HEAVY.to_string(), heavy_section())]);
    let dimension = if spec.depth_spans.is_some() { Dimension::Spatial } else { Dimension::Planar };
    StructuralModel::new(dimension, nodes, members, sections, supports)
}
