//! Crystal Bonds: walk through a tile region and bond required crystal
//! pairs. A bond forms when its two crystals are consecutive in the visit
//! sequence; crystals passed mid-leg do not count as visited.

pub mod matching;
mod reduction;
mod rpp;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometry::{tile_steps_from, GeometryError, Point, TileRegion, VisibilityGraph};
use crate::Coord;

pub use reduction::{apply_start_gadget, reduce_grid_to_dcb, DcbInstance, HamProperty};
pub use rpp::rural_postman_connected;

/// Largest bond count accepted by the exhaustive solver.
pub const BRUTE_FORCE_BOND_LIMIT: usize = 8;

/// Absolute tolerance for length comparisons.
pub const LENGTH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceModel {
    /// Orthogonal moves between tile centres.
    GridSteps,
    /// Free movement inside the region.
    Euclidean,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BondError {
    #[error("crystal {0} at ({1}, {2}) is not on a region tile")]
    CrystalOffRegion(usize, i32, i32),
    #[error("start ({0}, {1}) is not on a region tile")]
    StartOffRegion(i32, i32),
    #[error("crystals {0} and {1} share a tile")]
    DuplicateCrystal(usize, usize),
    #[error("bond ({0}, {1}) names a missing crystal")]
    BondOutOfRange(usize, usize),
    #[error("bond joins crystal {0} to itself")]
    SelfBond(usize),
    #[error("bond ({0}, {1}) closes a cycle or repeats a bond")]
    NotAForest(usize, usize),
    #[error("crystal {0} cannot be reached")]
    UnreachableCrystal(usize),
    #[error("required bonds are not connected; use the exhaustive solver")]
    DisconnectedBonds,
    #[error("{count} bonds exceed the exhaustive-solver limit of {limit}")]
    TooManyBonds { count: usize, limit: usize },
    #[error("reduction precondition violated: {0}")]
    ReductionPrecondition(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A Crystal Bonds instance. `start: None` lets the walk begin at any crystal
/// for free, which is the setting of the plain disconnected reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct BondBoard {
    region: TileRegion,
    crystals: Vec<Coord>,
    start: Option<Coord>,
    bonds: Vec<(usize, usize)>,
    model: DistanceModel,
}

impl BondBoard {
    pub fn new(
        region: TileRegion,
        crystals: Vec<Coord>,
        start: Option<Coord>,
        bonds: Vec<(usize, usize)>,
        model: DistanceModel,
    ) -> Result<Self, BondError> {
        let mut seen = std::collections::HashMap::new();
        for (i, &c) in crystals.iter().enumerate() {
            if !region.contains_tile(c) {
                return Err(BondError::CrystalOffRegion(i, c.0, c.1));
            }
            if let Some(j) = seen.insert(c, i) {
                return Err(BondError::DuplicateCrystal(j, i));
            }
        }
        if let Some(s) = start {
            if !region.contains_tile(s) {
                return Err(BondError::StartOffRegion(s.0, s.1));
            }
        }
        let mut dsu = Dsu::new(crystals.len());
        for &(a, b) in &bonds {
            if a >= crystals.len() || b >= crystals.len() {
                return Err(BondError::BondOutOfRange(a, b));
            }
            if a == b {
                return Err(BondError::SelfBond(a));
            }
            if !dsu.union(a, b) {
                return Err(BondError::NotAForest(a, b));
            }
        }
        Ok(BondBoard {
            region,
            crystals,
            start,
            bonds,
            model,
        })
    }

    pub fn region(&self) -> &TileRegion {
        &self.region
    }

    pub fn crystals(&self) -> &[Coord] {
        &self.crystals
    }

    pub fn start(&self) -> Option<Coord> {
        self.start
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn model(&self) -> DistanceModel {
        self.model
    }

    pub fn with_model(mut self, model: DistanceModel) -> Self {
        self.model = model;
        self
    }

    /// True iff the bonds form a single tree spanning every crystal.
    pub fn is_connected(&self) -> bool {
        !self.crystals.is_empty() && self.bonds.len() + 1 == self.crystals.len()
    }
}

/// A solution: crystal indices in visit order and the walked length.
#[derive(Debug, Clone, PartialEq)]
pub struct BondWalk {
    pub sequence: Vec<usize>,
    pub length: f64,
}

/// Distances among the crystals, plus the opening leg from the start tile
/// (all zero when the start is free).
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalMetric {
    pub start_leg: Vec<f64>,
    pub between: Vec<Vec<f64>>,
    pub free_start: bool,
}

impl CrystalMetric {
    /// Length of visiting `sequence` in order, opening leg included.
    pub fn walk_length(&self, sequence: &[usize]) -> f64 {
        let Some(&first) = sequence.first() else {
            return 0.0;
        };
        let mut total = self.start_leg[first];
        for w in sequence.windows(2) {
            total += self.between[w[0]][w[1]];
        }
        total
    }

    /// Symmetric matrix over `{start} ∪ crystals` with the start at index 0.
    /// Only meaningful for a fixed start.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let r = self.between.len();
        let mut m = vec![vec![0.0; r + 1]; r + 1];
        for i in 0..r {
            m[0][i + 1] = self.start_leg[i];
            m[i + 1][0] = self.start_leg[i];
            m[i + 1][1..].copy_from_slice(&self.between[i]);
        }
        m
    }
}

/// Pairwise distances under the board's model.
pub fn crystal_metric(board: &BondBoard) -> Result<CrystalMetric, BondError> {
    let r = board.crystals.len();
    let mut between = vec![vec![0.0; r]; r];
    let mut start_leg = vec![0.0; r];
    match board.model {
        DistanceModel::GridSteps => {
            for i in 0..r {
                let dist = tile_steps_from(&board.region, board.crystals[i]);
                for j in i + 1..r {
                    let d = *dist
                        .get(&board.crystals[j])
                        .ok_or(BondError::UnreachableCrystal(j))?;
                    between[i][j] = d as f64;
                    between[j][i] = d as f64;
                }
            }
            if let Some(s) = board.start {
                let dist = tile_steps_from(&board.region, s);
                for i in 0..r {
                    start_leg[i] = *dist
                        .get(&board.crystals[i])
                        .ok_or(BondError::UnreachableCrystal(i))? as f64;
                }
            }
        }
        DistanceModel::Euclidean => {
            let mut points: Vec<Point> = board.crystals.iter().map(|&c| Point::center(c)).collect();
            if let Some(s) = board.start {
                points.push(Point::center(s));
            }
            let m = VisibilityGraph::new(&board.region).metric(&points)?;
            for i in 0..r {
                for j in i + 1..r {
                    let d = m[i][j].ok_or(BondError::UnreachableCrystal(j))?;
                    between[i][j] = d;
                    between[j][i] = d;
                }
                if board.start.is_some() {
                    start_leg[i] = m[r][i].ok_or(BondError::UnreachableCrystal(i))?;
                }
            }
        }
    }
    Ok(CrystalMetric {
        start_leg,
        between,
        free_start: board.start.is_none(),
    })
}

/// Optimal walk for a board whose bonds form one connected component.
/// Crystals untouched by any bond are ignored.
pub fn solve_crystal_bonds(board: &BondBoard) -> Result<BondWalk, BondError> {
    if !bonds_connected(board.crystals.len(), &board.bonds) {
        return Err(BondError::DisconnectedBonds);
    }
    let metric = crystal_metric(board)?;
    rural_postman_connected(&metric, &board.bonds)
}

pub(crate) fn bonds_connected(r: usize, bonds: &[(usize, usize)]) -> bool {
    let mut dsu = Dsu::new(r);
    for &(a, b) in bonds {
        dsu.union(a, b);
    }
    let roots: BTreeSet<usize> = bonds.iter().map(|&(a, _)| dsu.find(a)).collect();
    roots.len() <= 1
}

/// Exhaustive optimum over every order and direction of the bonds, with a
/// shortest deadhead between consecutive bonds. Runs a DP over
/// (bonds done, last crystal), which enumerates the same candidates.
pub fn brute_force_crystal_bonds(board: &BondBoard) -> Result<BondWalk, BondError> {
    let m = board.bonds.len();
    if m > BRUTE_FORCE_BOND_LIMIT {
        return Err(BondError::TooManyBonds {
            count: m,
            limit: BRUTE_FORCE_BOND_LIMIT,
        });
    }
    let metric = crystal_metric(board)?;
    Ok(brute_force_with(&metric, &board.bonds))
}

fn brute_force_with(metric: &CrystalMetric, bonds: &[(usize, usize)]) -> BondWalk {
    let m = bonds.len();
    if m == 0 {
        return BondWalk {
            sequence: Vec::new(),
            length: 0.0,
        };
    }
    // state (mask, e) where e = 2*bond + side: the walk ended at that
    // bond's side after traversing it
    let ends = |e: usize| {
        let (a, b) = bonds[e / 2];
        if e.is_multiple_of(2) {
            (a, b)
        } else {
            (b, a)
        }
    };
    let states = 1usize << m;
    let mut cost = vec![vec![f64::INFINITY; 2 * m]; states];
    let mut parent = vec![vec![usize::MAX; 2 * m]; states];
    for e in 0..2 * m {
        let (from, to) = ends(e);
        cost[1 << (e / 2)][e] = metric.start_leg[from] + metric.between[from][to];
    }
    for mask in 1..states {
        for e in 0..2 * m {
            let here = cost[mask][e];
            if !here.is_finite() {
                continue;
            }
            let at = ends(e).1;
            for f in 0..2 * m {
                if mask >> (f / 2) & 1 == 1 {
                    continue;
                }
                let (from, to) = ends(f);
                let next = mask | 1 << (f / 2);
                let c = here + metric.between[at][from] + metric.between[from][to];
                if c < cost[next][f] {
                    cost[next][f] = c;
                    parent[next][f] = e;
                }
            }
        }
    }
    let full = states - 1;
    let mut last = (0..2 * m)
        .min_by(|&x, &y| cost[full][x].total_cmp(&cost[full][y]))
        .expect("at least one bond");
    let mut order = Vec::with_capacity(m);
    let mut mask = full;
    loop {
        order.push(last);
        let p = parent[mask][last];
        mask &= !(1 << (last / 2));
        if p == usize::MAX {
            break;
        }
        last = p;
    }
    order.reverse();
    let mut sequence = Vec::new();
    for e in order {
        let (from, to) = ends(e);
        if sequence.last() != Some(&from) {
            sequence.push(from);
        }
        sequence.push(to);
    }
    let length = metric.walk_length(&sequence);
    BondWalk { sequence, length }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkViolation {
    #[error("sequence names crystal {0}, which does not exist")]
    UnknownCrystal(usize),
    #[error("bond ({0}, {1}) is never formed")]
    MissingBond(usize, usize),
    #[error("claimed length {claimed} but the walk measures {actual}")]
    LengthMismatch { claimed: f64, actual: f64 },
    #[error("board metric unavailable: {0}")]
    Metric(BondError),
}

/// Checks that every bond is formed and that the claimed length is right.
pub fn verify_bond_walk(board: &BondBoard, walk: &BondWalk) -> Result<(), WalkViolation> {
    let metric = crystal_metric(board).map_err(WalkViolation::Metric)?;
    verify_with_metric(&metric, &board.bonds, walk)
}

pub(crate) fn verify_with_metric(
    metric: &CrystalMetric,
    bonds: &[(usize, usize)],
    walk: &BondWalk,
) -> Result<(), WalkViolation> {
    let r = metric.between.len();
    if let Some(&bad) = walk.sequence.iter().find(|&&c| c >= r) {
        return Err(WalkViolation::UnknownCrystal(bad));
    }
    let formed: BTreeSet<(usize, usize)> = walk
        .sequence
        .windows(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    for &(a, b) in bonds {
        if !formed.contains(&(a.min(b), a.max(b))) {
            return Err(WalkViolation::MissingBond(a, b));
        }
    }
    let actual = metric.walk_length(&walk.sequence);
    if (actual - walk.length).abs() > LENGTH_TOLERANCE || walk.length.is_nan() {
        return Err(WalkViolation::LengthMismatch {
            claimed: walk.length,
            actual,
        });
    }
    Ok(())
}

/// Whether the optimum is within `threshold`, decided exhaustively. A board
/// with an unreachable crystal has no covering walk and is a no-instance.
pub fn decide_dcb(board: &BondBoard, threshold: u64) -> Result<bool, BondError> {
    match brute_force_crystal_bonds(board) {
        Ok(walk) => Ok(walk.length <= threshold as f64 + LENGTH_TOLERANCE),
        Err(BondError::UnreachableCrystal(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(n: i32) -> TileRegion {
        TileRegion::new((0..n).map(|x| (x, 0))).unwrap()
    }

    /// Crystals B = 0, A = 1, C = 2 on a straight strip; bonds A-B and A-C.
    fn collinear(start: Coord) -> BondBoard {
        BondBoard::new(
            strip(3),
            vec![(0, 0), (1, 0), (2, 0)],
            Some(start),
            vec![(1, 0), (1, 2)],
            DistanceModel::GridSteps,
        )
        .unwrap()
    }

    #[test]
    fn metric_basics() {
        let b = collinear((0, 0));
        let m = crystal_metric(&b).unwrap();
        assert_eq!(m.between[0][1], 1.0);
        for i in 0..3 {
            assert_eq!(m.between[i][i], 0.0);
        }
        assert_eq!(m.start_leg, vec![0.0, 1.0, 2.0]);
        let full = m.matrix();
        assert_eq!(full[0][3], 2.0);
        assert_eq!(full[2][3], 1.0);
    }

    #[test]
    fn collinear_examples() {
        let from_b = solve_crystal_bonds(&collinear((0, 0))).unwrap();
        assert_eq!(from_b.length, 2.0);
        assert_eq!(from_b.sequence, vec![0, 1, 2]);
        let from_a = collinear((1, 0));
        let walk = solve_crystal_bonds(&from_a).unwrap();
        assert_eq!(walk.length, 3.0);
        // standing on A is not a visit, so C, A, B ties with A, B, A, C
        assert!(
            [vec![1, 0, 1, 2], vec![1, 2, 1, 0], vec![2, 1, 0]].contains(&walk.sequence),
            "{:?}",
            walk.sequence
        );
        assert_eq!(brute_force_crystal_bonds(&from_a).unwrap().length, 3.0);
        verify_bond_walk(&from_a, &walk).unwrap();
    }

    #[test]
    fn single_bond_and_empty() {
        let board = BondBoard::new(
            strip(4),
            vec![(2, 0), (3, 0)],
            Some((0, 0)),
            vec![(0, 1)],
            DistanceModel::GridSteps,
        )
        .unwrap();
        let walk = solve_crystal_bonds(&board).unwrap();
        assert_eq!(walk.length, 2.0 + 1.0);
        assert_eq!(brute_force_crystal_bonds(&board).unwrap(), walk);

        let empty = BondBoard::new(strip(2), vec![(1, 0)], Some((0, 0)), vec![], DistanceModel::Euclidean).unwrap();
        let w = brute_force_crystal_bonds(&empty).unwrap();
        assert!(w.sequence.is_empty());
        assert_eq!(w.length, 0.0);
        assert_eq!(solve_crystal_bonds(&empty).unwrap(), w);
    }

    #[test]
    fn verifier_reports_problems() {
        let board = collinear((1, 0));
        let missing = BondWalk {
            sequence: vec![1, 0],
            length: 1.0,
        };
        assert_eq!(verify_bond_walk(&board, &missing), Err(WalkViolation::MissingBond(1, 2)));
        let short = BondWalk {
            sequence: vec![1, 0, 1, 2],
            length: 2.5,
        };
        assert!(matches!(
            verify_bond_walk(&board, &short),
            Err(WalkViolation::LengthMismatch { .. })
        ));
        let unknown = BondWalk {
            sequence: vec![7],
            length: 0.0,
        };
        assert_eq!(verify_bond_walk(&board, &unknown), Err(WalkViolation::UnknownCrystal(7)));
    }

    #[test]
    fn board_validation() {
        let r = strip(3);
        let m = DistanceModel::GridSteps;
        assert_eq!(
            BondBoard::new(r.clone(), vec![(5, 0)], None, vec![], m),
            Err(BondError::CrystalOffRegion(0, 5, 0))
        );
        assert_eq!(
            BondBoard::new(r.clone(), vec![(0, 0), (0, 0)], None, vec![], m),
            Err(BondError::DuplicateCrystal(0, 1))
        );
        assert_eq!(
            BondBoard::new(r.clone(), vec![(0, 0)], Some((0, 3)), vec![], m),
            Err(BondError::StartOffRegion(0, 3))
        );
        let three = vec![(0, 0), (1, 0), (2, 0)];
        assert_eq!(
            BondBoard::new(r.clone(), three.clone(), None, vec![(0, 1), (1, 2), (2, 0)], m),
            Err(BondError::NotAForest(2, 0))
        );
        assert_eq!(
            BondBoard::new(r.clone(), three.clone(), None, vec![(0, 1), (1, 0)], m),
            Err(BondError::NotAForest(1, 0))
        );
        assert_eq!(
            BondBoard::new(r.clone(), three.clone(), None, vec![(1, 1)], m),
            Err(BondError::SelfBond(1))
        );
        assert_eq!(
            BondBoard::new(r, three, None, vec![(0, 4)], m),
            Err(BondError::BondOutOfRange(0, 4))
        );
    }

    #[test]
    fn disconnected_bonds_need_the_exhaustive_solver() {
        let board = BondBoard::new(
            strip(4),
            vec![(0, 0), (1, 0), (2, 0), (3, 0)],
            Some((0, 0)),
            vec![(0, 1), (2, 3)],
            DistanceModel::GridSteps,
        )
        .unwrap();
        assert!(!board.is_connected());
        assert_eq!(solve_crystal_bonds(&board), Err(BondError::DisconnectedBonds));
        assert_eq!(brute_force_crystal_bonds(&board).unwrap().length, 3.0);
        assert!(decide_dcb(&board, 3).unwrap());
        assert!(!decide_dcb(&board, 2).unwrap());
    }

    #[test]
    fn unreachable_crystal() {
        let region = TileRegion::new([(0, 0), (2, 0)]).unwrap();
        let board = BondBoard::new(region, vec![(0, 0), (2, 0)], None, vec![(0, 1)], DistanceModel::GridSteps).unwrap();
        assert_eq!(crystal_metric(&board), Err(BondError::UnreachableCrystal(1)));
        let e = board.with_model(DistanceModel::Euclidean);
        assert_eq!(crystal_metric(&e), Err(BondError::UnreachableCrystal(1)));
    }

    #[test]
    fn euclidean_cuts_corners() {
        // L-shape: the geodesic from (0,0) to (1,1) passes the reflex corner
        let region = TileRegion::new([(0, 0), (1, 0), (1, 1)]).unwrap();
        let board = BondBoard::new(
            region,
            vec![(0, 0), (1, 1)],
            Some((1, 0)),
            vec![(0, 1)],
            DistanceModel::Euclidean,
        )
        .unwrap();
        let walk = solve_crystal_bonds(&board).unwrap();
        let expected = 1.0 + std::f64::consts::SQRT_2;
        assert!((walk.length - expected).abs() < 1e-12, "{}", walk.length);
        verify_bond_walk(&board, &walk).unwrap();
    }

    #[test]
    fn too_many_bonds() {
        let region = strip(10);
        let crystals: Vec<Coord> = (0..10).map(|x| (x, 0)).collect();
        let bonds: Vec<(usize, usize)> = (0..9).map(|i| (i, i + 1)).collect();
        let board = BondBoard::new(region, crystals, None, bonds, DistanceModel::GridSteps).unwrap();
        assert_eq!(
            brute_force_crystal_bonds(&board),
            Err(BondError::TooManyBonds { count: 9, limit: 8 })
        );
        assert_eq!(decide_dcb(&board, 100), Err(BondError::TooManyBonds { count: 9, limit: 8 }));
        // the polynomial solver has no such limit
        assert_eq!(solve_crystal_bonds(&board).unwrap().length, 9.0);
    }
}
