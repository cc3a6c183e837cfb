//! Models, exact solvers and hardness-reduction constructors for the three
//! "temporal rift" puzzles: Tile Trial, Crystal Bonds and Hands of Time.
//!
//! Each puzzle module carries the instance model, a verifier, an exact
//! solver and the construction that turns a Hamiltonicity instance into a
//! puzzle instance. The [`sweep`] module drives the equivalence checks for
//! those constructions over enumerated or seeded families, in parallel when
//! the `parallel` feature is enabled.

pub mod crystal_bonds;
pub mod generate;
pub mod geometry;
pub mod graphs;
pub mod hands_of_time;
pub mod instance_io;
pub mod render;
pub mod sweep;
pub mod tile_trial;

/// A point of the integer lattice: a grid-graph vertex or a tile.
pub type Coord = (i32, i32);

/// Result of an exact search that may run under a node budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The search space was exhausted without a solution.
    Infeasible,
    /// The node budget ran out first; the answer is unknown.
    BudgetExhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, SearchOutcome::Infeasible)
    }
}

pub(crate) const ORTHOGONAL: [Coord; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

pub(crate) fn step(c: Coord, d: Coord) -> Coord {
    (c.0 + d.0, c.1 + d.1)
}
