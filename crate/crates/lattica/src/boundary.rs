//! Boundary conditions as a virtual-cell resolver.
//!
//! Out-of-lattice neighbor reads are restricted to the one-cell frame around
//! the m x n lattice (rows 0 and m+1, columns 0 and n+1, 1-indexed). A
//! [`BoundarySpec`] assigns one of four base conditions to each side and
//! disambiguates the four frame corners; [`BoundarySpec::resolve`] maps a
//! frame cell to the in-lattice cell whose value it carries, or to the zero
//! state.
//!
//! Base condition semantics per out-of-range coordinate:
//! null fixes the whole read to zero; periodic wraps to the opposite side;
//! adiabatic clamps to the adjacent boundary row/column; reflexive mirrors
//! across the boundary line (row 0 reads row 2, row m+1 reads row m-1, and
//! likewise for columns). At a frame corner the corner's condition applies
//! to both coordinates at once.

use crate::error::{Error, Result};
use crate::grid::LatticeDims;

/// The four base boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseBoundary {
    Null,
    Periodic,
    Adiabatic,
    Reflexive,
}

/// Which side's condition a disagreeing frame corner inherits.
///
/// The six mixed maps and the 180-degree rotation give their corners to the
/// horizontal sides (top row corners follow the top condition, bottom row
/// corners the bottom condition); the 90- and 270-degree rotations give them
/// to the vertical sides. Custom specs default to vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CornerRule {
    HorizontalSideWins,
    VerticalSideWins,
}

/// The four frame corners, named by compass position: NorthWest is frame
/// cell (0, 0), SouthEast is (m+1, n+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corner {
    NorthWest,
    NorthEast,
    SouthWest,
    SouthEast,
}

/// The thirteen named boundary specs accepted on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedSpec {
    Nb,
    Pb,
    Ab,
    Rb,
    Phi,
    Psi,
    Tau,
    Sigma,
    Lambda,
    Xi,
    Phi90,
    Phi180,
    Phi270,
}

impl NamedSpec {
    pub const ALL: [NamedSpec; 13] = [
        NamedSpec::Nb,
        NamedSpec::Pb,
        NamedSpec::Ab,
        NamedSpec::Rb,
        NamedSpec::Phi,
        NamedSpec::Psi,
        NamedSpec::Tau,
        NamedSpec::Sigma,
        NamedSpec::Lambda,
        NamedSpec::Xi,
        NamedSpec::Phi90,
        NamedSpec::Phi180,
        NamedSpec::Phi270,
    ];

    /// The nine mixed/rotated specs that have a closed-form block build.
    pub const MIXED: [NamedSpec; 9] = [
        NamedSpec::Phi,
        NamedSpec::Psi,
        NamedSpec::Tau,
        NamedSpec::Sigma,
        NamedSpec::Lambda,
        NamedSpec::Xi,
        NamedSpec::Phi90,
        NamedSpec::Phi180,
        NamedSpec::Phi270,
    ];

    pub fn cli_name(&self) -> &'static str {
        match self {
            NamedSpec::Nb => "nb",
            NamedSpec::Pb => "pb",
            NamedSpec::Ab => "ab",
            NamedSpec::Rb => "rb",
            NamedSpec::Phi => "phi",
            NamedSpec::Psi => "psi",
            NamedSpec::Tau => "tau",
            NamedSpec::Sigma => "sigma",
            NamedSpec::Lambda => "lambda",
            NamedSpec::Xi => "xi",
            NamedSpec::Phi90 => "phi90",
            NamedSpec::Phi180 => "phi180",
            NamedSpec::Phi270 => "phi270",
        }
    }

    pub fn parse(s: &str) -> Option<NamedSpec> {
        Self::ALL.iter().copied().find(|n| n.cli_name() == s)
    }

    /// True for the nine specs covered by a closed-form block layout.
    pub fn has_closed_form(&self) -> bool {
        Self::MIXED.contains(self)
    }
}

impl std::fmt::Display for NamedSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// Where a frame cell's value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VirtualCellResolution {
    /// The read is fixed at zero.
    ZeroState,
    /// The read aliases the in-lattice cell (i, j), 1-indexed.
    InLattice { i: usize, j: usize },
}

/// Per-side base conditions plus the corner disambiguation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec {
    top: BaseBoundary,
    bottom: BaseBoundary,
    left: BaseBoundary,
    right: BaseBoundary,
    corner_rule: CornerRule,
    name: Option<NamedSpec>,
}

impl BoundarySpec {
    /// The fixed side/corner assignment of a named spec.
    pub fn named(name: NamedSpec) -> Self {
        use BaseBoundary::{Adiabatic as A, Null as N, Periodic as P, Reflexive as R};
        use CornerRule::{HorizontalSideWins as H, VerticalSideWins as V};
        let (top, bottom, left, right, corner_rule) = match name {
            NamedSpec::Nb => (N, N, N, N, H),
            NamedSpec::Pb => (P, P, P, P, H),
            NamedSpec::Ab => (A, A, A, A, H),
            NamedSpec::Rb => (R, R, R, R, H),
            NamedSpec::Phi => (N, R, N, R, H),
            NamedSpec::Psi => (N, P, N, P, H),
            NamedSpec::Tau => (N, A, N, A, H),
            NamedSpec::Sigma => (R, A, R, A, H),
            NamedSpec::Lambda => (R, P, R, P, H),
            NamedSpec::Xi => (P, A, P, A, H),
            NamedSpec::Phi90 => (N, R, R, N, V),
            NamedSpec::Phi180 => (R, N, R, N, H),
            NamedSpec::Phi270 => (R, N, N, R, V),
        };
        Self {
            top,
            bottom,
            left,
            right,
            corner_rule,
            name: Some(name),
        }
    }

    /// Looks a spec up by its CLI name.
    pub fn from_name(s: &str) -> Result<Self> {
        NamedSpec::parse(s)
            .map(Self::named)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }

    /// An arbitrary side assignment; corners default to the vertical side.
    pub fn custom(
        top: BaseBoundary,
        bottom: BaseBoundary,
        left: BaseBoundary,
        right: BaseBoundary,
    ) -> Self {
        Self {
            top,
            bottom,
            left,
            right,
            corner_rule: CornerRule::VerticalSideWins,
            name: None,
        }
    }

    pub fn top(&self) -> BaseBoundary {
        self.top
    }
    pub fn bottom(&self) -> BaseBoundary {
        self.bottom
    }
    pub fn left(&self) -> BaseBoundary {
        self.left
    }
    pub fn right(&self) -> BaseBoundary {
        self.right
    }
    pub fn corner_rule(&self) -> CornerRule {
        self.corner_rule
    }
    pub fn name(&self) -> Option<NamedSpec> {
        self.name
    }

    /// The condition a frame corner resolves under.
    pub fn corner_condition(&self, corner: Corner) -> BaseBoundary {
        match (self.corner_rule, corner) {
            (CornerRule::HorizontalSideWins, Corner::NorthWest | Corner::NorthEast) => self.top,
            (CornerRule::HorizontalSideWins, Corner::SouthWest | Corner::SouthEast) => self.bottom,
            (CornerRule::VerticalSideWins, Corner::NorthWest | Corner::SouthWest) => self.left,
            (CornerRule::VerticalSideWins, Corner::NorthEast | Corner::SouthEast) => self.right,
        }
    }

    /// Resolves frame cell (i, j), 1-indexed with the frame at row 0,
    /// row m+1, column 0 and column n+1.
    ///
    /// Fails with [`Error::NotAFrameCell`] if (i, j) is inside the lattice
    /// or beyond the one-cell frame.
    pub fn resolve(
        &self,
        dims: LatticeDims,
        i: usize,
        j: usize,
    ) -> Result<VirtualCellResolution> {
        let (m, n) = (dims.rows(), dims.cols());
        let row_in = (1..=m).contains(&i);
        let col_in = (1..=n).contains(&j);
        if (row_in && col_in) || i > m + 1 || j > n + 1 {
            return Err(Error::NotAFrameCell { i, j });
        }
        let cond = match (row_in, col_in) {
            (false, false) => {
                let corner = match (i == 0, j == 0) {
                    (true, true) => Corner::NorthWest,
                    (true, false) => Corner::NorthEast,
                    (false, true) => Corner::SouthWest,
                    (false, false) => Corner::SouthEast,
                };
                self.corner_condition(corner)
            }
            (false, true) => {
                if i == 0 {
                    self.top
                } else {
                    self.bottom
                }
            }
            (true, false) => {
                if j == 0 {
                    self.left
                } else {
                    self.right
                }
            }
            (true, true) => unreachable!(),
        };
        if cond == BaseBoundary::Null {
            return Ok(VirtualCellResolution::ZeroState);
        }
        let fix = |x: usize, hi: usize| -> usize {
            if (1..=hi).contains(&x) {
                x
            } else {
                match (cond, x == 0) {
                    (BaseBoundary::Periodic, true) => hi,
                    (BaseBoundary::Periodic, false) => 1,
                    (BaseBoundary::Adiabatic, true) => 1,
                    (BaseBoundary::Adiabatic, false) => hi,
                    (BaseBoundary::Reflexive, true) => 2,
                    (BaseBoundary::Reflexive, false) => hi - 1,
                    (BaseBoundary::Null, _) => unreachable!(),
                }
            }
        };
        Ok(VirtualCellResolution::InLattice {
            i: fix(i, m),
            j: fix(j, n),
        })
    }
}
