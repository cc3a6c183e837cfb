//! Tile Trial: walk from the start tile to the finish tile, touching every
//! crystal tile, without stepping on any tile more often than its capacity
//! allows.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graphs::GridGraph;
use crate::{step, Coord, SearchOutcome, ORTHOGONAL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TileError {
    #[error("tile {0:?} has capacity {1}; capacities are 1 or 2")]
    BadCapacity(Coord, u8),
    #[error("crystal {0:?} is not on a tile")]
    CrystalOffBoard(Coord),
    #[error("{0} tile {1:?} is not on the board")]
    EndpointOffBoard(&'static str, Coord),
    #[error("start and finish are the same tile {0:?}")]
    StartIsFinish(Coord),
    #[error("{0} tile {1:?} must be an ordinary capacity-1 tile without a crystal")]
    SpecialEndpoint(&'static str, Coord),
    #[error("reduction needs a connected grid graph with at least 3 vertices")]
    ReductionPrecondition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileBoard {
    tiles: BTreeMap<Coord, u8>,
    crystals: BTreeSet<Coord>,
    start: Coord,
    finish: Coord,
}

impl TileBoard {
    pub fn new(
        tiles: BTreeMap<Coord, u8>,
        crystals: BTreeSet<Coord>,
        start: Coord,
        finish: Coord,
    ) -> Result<Self, TileError> {
        if let Some((&c, &cap)) = tiles.iter().find(|(_, &cap)| !(1..=2).contains(&cap)) {
            return Err(TileError::BadCapacity(c, cap));
        }
        if let Some(&c) = crystals.iter().find(|c| !tiles.contains_key(c)) {
            return Err(TileError::CrystalOffBoard(c));
        }
        for (name, c) in [("start", start), ("finish", finish)] {
            match tiles.get(&c) {
                None => return Err(TileError::EndpointOffBoard(name, c)),
                Some(&cap) if cap != 1 || crystals.contains(&c) => {
                    return Err(TileError::SpecialEndpoint(name, c))
                }
                _ => {}
            }
        }
        if start == finish {
            return Err(TileError::StartIsFinish(start));
        }
        Ok(TileBoard {
            tiles,
            crystals,
            start,
            finish,
        })
    }

    pub fn tiles(&self) -> &BTreeMap<Coord, u8> {
        &self.tiles
    }

    pub fn capacity(&self, c: Coord) -> Option<u8> {
        self.tiles.get(&c).copied()
    }

    pub fn crystals(&self) -> &BTreeSet<Coord> {
        &self.crystals
    }

    pub fn start(&self) -> Coord {
        self.start
    }

    pub fn finish(&self) -> Coord {
        self.finish
    }

    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        crate::graphs::bounds_of(self.tiles.keys().copied())
    }
}

/// A candidate walk, one tile per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilePath {
    pub steps: Vec<Coord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathViolation {
    #[error("path is empty")]
    Empty,
    #[error("path starts at {found:?} instead of the start tile")]
    WrongStart { found: Coord },
    #[error("step {index} lands on {tile:?}, which is not a tile")]
    NotATile { index: usize, tile: Coord },
    #[error("step {index} jumps from {from:?} to {to:?}")]
    NotAdjacent { index: usize, from: Coord, to: Coord },
    #[error("step {index} exceeds the capacity of {tile:?}")]
    CapacityExceeded { index: usize, tile: Coord },
    #[error("path ends at {found:?} instead of the finish tile")]
    WrongFinish { found: Coord },
    #[error("crystal at {tile:?} is never touched")]
    CrystalMissed { tile: Coord },
}

/// Checks `path` against every rule of the board and reports the first
/// violation in walking order.
pub fn verify_tile_path(board: &TileBoard, path: &TilePath) -> Result<(), PathViolation> {
    let first = *path.steps.first().ok_or(PathViolation::Empty)?;
    if first != board.start {
        return Err(PathViolation::WrongStart { found: first });
    }
    let mut used: BTreeMap<Coord, u8> = BTreeMap::new();
    for (index, &tile) in path.steps.iter().enumerate() {
        let cap = board
            .capacity(tile)
            .ok_or(PathViolation::NotATile { index, tile })?;
        if index > 0 {
            let from = path.steps[index - 1];
            if (from.0 - tile.0).abs() + (from.1 - tile.1).abs() != 1 {
                return Err(PathViolation::NotAdjacent {
                    index,
                    from,
                    to: tile,
                });
            }
        }
        let count = used.entry(tile).or_insert(0);
        *count += 1;
        if *count > cap {
            return Err(PathViolation::CapacityExceeded { index, tile });
        }
    }
    let last = *path.steps.last().expect("nonempty");
    if last != board.finish {
        return Err(PathViolation::WrongFinish { found: last });
    }
    if let Some(&tile) = board.crystals.iter().find(|c| !used.contains_key(c)) {
        return Err(PathViolation::CrystalMissed { tile });
    }
    Ok(())
}

struct TileSearch {
    coords: Vec<Coord>,
    adj: Vec<Vec<usize>>,
    capacity: Vec<u8>,
    used: Vec<u8>,
    crystal: Vec<bool>,
    missing: usize,
    finish: usize,
    path: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

enum Step {
    Solved,
    Dead,
    OutOfBudget,
}

impl TileSearch {
    fn new(board: &TileBoard, budget: Option<u64>) -> Self {
        let coords: Vec<Coord> = board.tiles.keys().copied().collect();
        let index = |c: Coord| coords.binary_search(&c).ok();
        let adj = coords
            .iter()
            .map(|&c| ORTHOGONAL.iter().filter_map(|&d| index(step(c, d))).collect())
            .collect();
        let capacity = board.tiles.values().copied().collect();
        let crystal: Vec<bool> = coords.iter().map(|c| board.crystals.contains(c)).collect();
        let missing = crystal.iter().filter(|&&b| b).count();
        TileSearch {
            finish: index(board.finish).expect("finish is a tile"),
            used: vec![0; coords.len()],
            path: Vec::new(),
            adj,
            capacity,
            crystal,
            missing,
            coords,
            nodes: 0,
            budget,
        }
    }

    fn enter(&mut self, t: usize) {
        self.used[t] += 1;
        if self.crystal[t] && self.used[t] == 1 {
            self.missing -= 1;
        }
        self.path.push(t);
    }

    fn leave(&mut self, t: usize) {
        self.path.pop();
        if self.crystal[t] && self.used[t] == 1 {
            self.missing += 1;
        }
        self.used[t] -= 1;
    }

    /// The finish and every uncollected crystal must still be reachable
    /// from `at` through tiles with spare capacity.
    fn viable(&self, at: usize) -> bool {
        let n = self.coords.len();
        let mut seen = vec![false; n];
        seen[at] = true;
        let mut queue = VecDeque::from([at]);
        let mut crystals_seen = 0;
        let mut finish_seen = false;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if seen[w] || self.used[w] >= self.capacity[w] {
                    continue;
                }
                seen[w] = true;
                if w == self.finish {
                    // the finish ends the walk; do not route through it
                    finish_seen = true;
                    continue;
                }
                if self.crystal[w] && self.used[w] == 0 {
                    crystals_seen += 1;
                }
                queue.push_back(w);
            }
        }
        finish_seen && crystals_seen == self.missing
    }

    fn search(&mut self, at: usize) -> Step {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Step::OutOfBudget;
        }
        if at == self.finish {
            return if self.missing == 0 {
                Step::Solved
            } else {
                Step::Dead
            };
        }
        if !self.viable(at) {
            return Step::Dead;
        }
        for i in 0..self.adj[at].len() {
            let next = self.adj[at][i];
            if self.used[next] >= self.capacity[next] {
                continue;
            }
            self.enter(next);
            match self.search(next) {
                Step::Dead => self.leave(next),
                other => return other,
            }
        }
        Step::Dead
    }
}

/// Exact backtracking search for a valid walk. With `node_budget = None` the
/// answer is never indeterminate.
pub fn solve_tile_trial(board: &TileBoard, node_budget: Option<u64>) -> SearchOutcome<TilePath> {
    let mut search = TileSearch::new(board, node_budget);
    let start = search
        .coords
        .binary_search(&board.start)
        .expect("start is a tile");
    search.enter(start);
    match search.search(start) {
        Step::Solved => SearchOutcome::Found(TilePath {
            steps: search.path.iter().map(|&i| search.coords[i]).collect(),
        }),
        Step::Dead => SearchOutcome::Infeasible,
        Step::OutOfBudget => SearchOutcome::BudgetExhausted,
    }
}

/// Builds the Tile Trial board whose solvability matches Hamiltonicity of
/// `g`: a capacity-1 crystal tile on every vertex, the bottommost vertex
/// (lowest `y`, then lowest `x`) raised to capacity 2, two capacity-2 tiles
/// stacked below it, and a corridor two rows below the graph running from
/// the start on the left to the finish on the right.
///
/// Graphs with fewer than three vertices are rejected: on a domino the walk
/// can bounce off the neighbour and return through the capacity-2 tile.
pub fn reduce_grid_to_tile_trial(g: &GridGraph) -> Result<TileBoard, TileError> {
    if g.len() < 3 || !g.is_connected() {
        return Err(TileError::ReductionPrecondition);
    }
    let (min_x, min_y, max_x, _) = g.bounds();
    let anchor = g
        .vertices()
        .iter()
        .copied()
        .min_by_key(|&(x, y)| (y, x))
        .expect("nonempty");
    let row = min_y - 2;
    let mut tiles: BTreeMap<Coord, u8> = g.vertices().iter().map(|&v| (v, 1)).collect();
    tiles.insert(anchor, 2);
    tiles.insert((anchor.0, min_y - 1), 2);
    for x in (min_x - 1)..=(max_x + 1) {
        tiles.insert((x, row), 1);
    }
    tiles.insert((anchor.0, row), 2);
    TileBoard::new(
        tiles,
        g.vertices().clone(),
        (min_x - 1, row),
        (max_x + 1, row),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::has_ham_cycle_grid;

    fn corridor() -> TileBoard {
        TileBoard::new(
            BTreeMap::from([((0, 0), 1), ((1, 0), 1), ((2, 0), 1)]),
            BTreeSet::from([(1, 0)]),
            (0, 0),
            (2, 0),
        )
        .unwrap()
    }

    fn grid(points: &[Coord]) -> GridGraph {
        GridGraph::new(points.iter().copied()).unwrap()
    }

    #[test]
    fn verifier_examples() {
        let b = corridor();
        let ok = TilePath {
            steps: vec![(0, 0), (1, 0), (2, 0)],
        };
        assert_eq!(verify_tile_path(&b, &ok), Ok(()));
        let bounce = TilePath {
            steps: vec![(0, 0), (1, 0), (0, 0), (1, 0), (2, 0)],
        };
        assert_eq!(
            verify_tile_path(&b, &bounce),
            Err(PathViolation::CapacityExceeded {
                index: 2,
                tile: (0, 0)
            })
        );
        assert_eq!(
            verify_tile_path(&b, &TilePath { steps: vec![] }),
            Err(PathViolation::Empty)
        );
        assert_eq!(
            verify_tile_path(
                &b,
                &TilePath {
                    steps: vec![(0, 0), (2, 0)]
                }
            ),
            Err(PathViolation::NotAdjacent {
                index: 1,
                from: (0, 0),
                to: (2, 0)
            })
        );
        assert_eq!(
            verify_tile_path(
                &b,
                &TilePath {
                    steps: vec![(0, 0), (1, 0)]
                }
            ),
            Err(PathViolation::WrongFinish { found: (1, 0) })
        );
    }

    #[test]
    fn missed_crystal_is_reported() {
        let b = TileBoard::new(
            BTreeMap::from([((0, 0), 1), ((1, 0), 1), ((1, 1), 1)]),
            BTreeSet::from([(1, 1)]),
            (0, 0),
            (1, 0),
        )
        .unwrap();
        let p = TilePath {
            steps: vec![(0, 0), (1, 0)],
        };
        assert_eq!(
            verify_tile_path(&b, &p),
            Err(PathViolation::CrystalMissed { tile: (1, 1) })
        );
        assert_eq!(solve_tile_trial(&b, None), SearchOutcome::Infeasible);
    }

    #[test]
    fn board_validation() {
        let tiles = BTreeMap::from([((0, 0), 1), ((1, 0), 2)]);
        assert_eq!(
            TileBoard::new(tiles.clone(), BTreeSet::new(), (0, 0), (1, 0)),
            Err(TileError::SpecialEndpoint("finish", (1, 0)))
        );
        assert_eq!(
            TileBoard::new(tiles.clone(), BTreeSet::from([(5, 5)]), (0, 0), (1, 0)),
            Err(TileError::CrystalOffBoard((5, 5)))
        );
        assert_eq!(
            TileBoard::new(BTreeMap::from([((0, 0), 3)]), BTreeSet::new(), (0, 0), (0, 0)),
            Err(TileError::BadCapacity((0, 0), 3))
        );
    }

    #[test]
    fn corridor_is_solvable() {
        let b = corridor();
        let path = solve_tile_trial(&b, None).found().unwrap();
        assert_eq!(verify_tile_path(&b, &path), Ok(()));
    }

    #[test]
    fn tiny_budget_is_indeterminate() {
        let g = grid(&[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
        let b = reduce_grid_to_tile_trial(&g).unwrap();
        assert_eq!(solve_tile_trial(&b, Some(3)), SearchOutcome::BudgetExhausted);
    }

    #[test]
    fn unit_square_reduction_layout() {
        let g = grid(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let b = reduce_grid_to_tile_trial(&g).unwrap();
        assert_eq!(b.start(), (-1, -2));
        assert_eq!(b.finish(), (2, -2));
        assert_eq!(b.capacity((0, -1)), Some(2));
        assert_eq!(b.capacity((0, -2)), Some(2));
        assert_eq!(b.capacity((0, 0)), Some(2));
        for x in -1..=2 {
            assert!(b.capacity((x, -2)).is_some());
        }
        assert_eq!(b.tiles().values().filter(|&&c| c == 2).count(), 3);
        assert_eq!(b.crystals().len(), 4);
        // only the connector column touches the graph
        for &(x, y) in b.tiles().keys().filter(|&&(_, y)| y < 0) {
            for v in g.vertices() {
                let adjacent = (v.0 - x).abs() + (v.1 - y).abs() == 1;
                assert!(!adjacent || (x, y) == (0, -1));
            }
        }
        let path = solve_tile_trial(&b, None).found().unwrap();
        assert_eq!(verify_tile_path(&b, &path), Ok(()));
        assert!(has_ham_cycle_grid(&g));
    }

    #[test]
    fn plus_shape_reduction_is_unsolvable() {
        let g = grid(&[(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]);
        assert!(!has_ham_cycle_grid(&g));
        let b = reduce_grid_to_tile_trial(&g).unwrap();
        assert_eq!(solve_tile_trial(&b, None), SearchOutcome::Infeasible);
    }

    #[test]
    fn domino_is_outside_the_reduction_domain() {
        let domino = grid(&[(0, 0), (1, 0)]);
        assert_eq!(
            reduce_grid_to_tile_trial(&domino),
            Err(TileError::ReductionPrecondition)
        );
        // the same layout built by hand admits the bounce walk
        let tiles = BTreeMap::from([
            ((0, 0), 2),
            ((1, 0), 1),
            ((0, -1), 2),
            ((-1, -2), 1),
            ((0, -2), 2),
            ((1, -2), 1),
            ((2, -2), 1),
        ]);
        let b = TileBoard::new(tiles, domino.vertices().clone(), (-1, -2), (2, -2)).unwrap();
        let path = solve_tile_trial(&b, None).found().unwrap();
        assert_eq!(
            path.steps,
            vec![
                (-1, -2),
                (0, -2),
                (0, -1),
                (0, 0),
                (1, 0),
                (0, 0),
                (0, -1),
                (0, -2),
                (1, -2),
                (2, -2)
            ]
        );
    }

    #[test]
    fn reduction_rejects_disconnected_graphs() {
        let g = grid(&[(0, 0), (1, 0), (3, 0)]);
        assert_eq!(
            reduce_grid_to_tile_trial(&g),
            Err(TileError::ReductionPrecondition)
        );
    }
}
