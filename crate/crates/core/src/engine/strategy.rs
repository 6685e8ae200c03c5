use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How the relax phase enumerates work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontierMode {
    /// One work item per vertex each round; items outside the frontier no-op.
    ScanAll,
    /// Work items only for a compact queue of frontier vertices.
    Queue,
}

/// Scheduling strategy: frontier representation times lane width.
///
/// A lane width `W > 1` splits each work vertex's adjacency over `W` lanes;
/// lane `j` handles slots `j, j + W, j + 2W, ...` of the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategy {
    frontier: FrontierMode,
    lane_width: usize,
}

impl Strategy {
    pub const LANE_WIDTHS: [usize; 5] = [1, 4, 8, 16, 32];

    pub const NODE_PARALLEL: Strategy = Strategy { frontier: FrontierMode::ScanAll, lane_width: 1 };
    pub const WORK_EFFICIENT: Strategy = Strategy { frontier: FrontierMode::Queue, lane_width: 1 };
    pub const WARP32: Strategy = Strategy { frontier: FrontierMode::ScanAll, lane_width: 32 };
    pub const WORK_EFFICIENT_WARP32: Strategy = Strategy { frontier: FrontierMode::Queue, lane_width: 32 };

    pub fn new(frontier: FrontierMode, lane_width: usize) -> Result<Self> {
        if !Self::LANE_WIDTHS.contains(&lane_width) {
            return Err(Error::InvalidArgument(format!(
                "lane width must be one of {:?}, got {lane_width}",
                Self::LANE_WIDTHS
            )));
        }
        Ok(Self { frontier, lane_width })
    }

    pub fn frontier(&self) -> FrontierMode {
        self.frontier
    }

    pub fn lane_width(&self) -> usize {
        self.lane_width
    }

    /// All ten configurations, in the order np, warp4..warp32, we,
    /// we-warp4..we-warp32.
    pub fn all() -> Vec<Strategy> {
        [FrontierMode::ScanAll, FrontierMode::Queue]
            .into_iter()
            .flat_map(|f| Self::LANE_WIDTHS.map(|w| Strategy { frontier: f, lane_width: w }))
            .collect()
    }

    /// Parses a strategy name. `np`, `we`, `warpW` and `we-warpW` are
    /// complete; the families `warp` and `we-warp` take their width from
    /// `lane_width` (default 32). An explicit `lane_width` also overrides the
    /// width of `np` and `we`.
    pub fn parse_with_width(name: &str, lane_width: Option<usize>) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        let (frontier, rest) = if let Some(rest) = name.strip_prefix("we-warp") {
            (FrontierMode::Queue, Some(rest))
        } else if let Some(rest) = name.strip_prefix("warp") {
            (FrontierMode::ScanAll, Some(rest))
        } else if name == "we" {
            (FrontierMode::Queue, None)
        } else if name == "np" {
            (FrontierMode::ScanAll, None)
        } else {
            return Err(Error::InvalidArgument(format!("unknown strategy `{name}`")));
        };
        let width = match rest {
            None => lane_width.unwrap_or(1),
            Some("") => lane_width.unwrap_or(32),
            Some(digits) => {
                let w: usize =
                    digits.parse().map_err(|_| Error::InvalidArgument(format!("unknown strategy `{name}`")))?;
                if let Some(flag) = lane_width {
                    if flag != w {
                        return Err(Error::InvalidArgument(format!(
                            "strategy `{name}` conflicts with lane width {flag}"
                        )));
                    }
                }
                w
            }
        };
        Self::new(frontier, width)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.frontier, self.lane_width) {
            (FrontierMode::ScanAll, 1) => f.write_str("np"),
            (FrontierMode::Queue, 1) => f.write_str("we"),
            (FrontierMode::ScanAll, w) => write!(f, "warp{w}"),
            (FrontierMode::Queue, w) => write!(f, "we-warp{w}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_width(s, None)
    }
}
