//! Grid graph Hamiltonicity to Disconnected Crystal Bonds, and the gadget
//! that adds a fixed start tile.

use std::collections::BTreeSet;

use super::{BondBoard, BondError, DistanceModel};
use crate::geometry::TileRegion;
use crate::graphs::GridGraph;
use crate::{step, Coord, ORTHOGONAL};

/// Which Hamiltonicity property a reduced instance's verdict reflects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamProperty {
    Path,
    Cycle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcbInstance {
    pub board: BondBoard,
    pub threshold: u64,
    pub property: HamProperty,
}

fn scale(g: &GridGraph) -> i32 {
    2 * g.len() as i32 + 1
}

fn scaled(v: Coord, f: i32) -> Coord {
    (v.0 * f, v.1 * f)
}

/// Scales the graph by `2v+1`, lays a corridor of `2v` tiles along each
/// edge, and bonds every vertex crystal to a partner on its first existing
/// neighbour tile in E, N, W, S order. The start is free.
pub fn reduce_grid_to_dcb(g: &GridGraph) -> Result<DcbInstance, BondError> {
    let v = g.len();
    if v < 2 {
        return Err(BondError::ReductionPrecondition("the graph needs at least two vertices"));
    }
    if !g.is_connected() {
        return Err(BondError::ReductionPrecondition("the graph must be connected"));
    }
    let f = scale(g);
    let mut tiles = BTreeSet::new();
    for &u in g.vertices() {
        tiles.insert(scaled(u, f));
    }
    for (a, b) in g.edges() {
        let dir = (b.0 - a.0, b.1 - a.1);
        let mut t = scaled(a, f);
        for _ in 0..2 * v {
            t = step(t, dir);
            tiles.insert(t);
        }
    }
    let verts: Vec<Coord> = g.vertices().iter().map(|&u| scaled(u, f)).collect();
    let mut crystals = verts.clone();
    for &c in &verts {
        let partner = ORTHOGONAL
            .iter()
            .map(|&d| step(c, d))
            .find(|t| tiles.contains(t))
            .expect("connected graph with two vertices has no isolated vertex");
        crystals.push(partner);
    }
    let bonds = (0..v).map(|i| (i, v + i)).collect();
    let region = TileRegion::new(tiles)?;
    let board = BondBoard::new(region, crystals, None, bonds, DistanceModel::GridSteps)?;
    let v = v as u64;
    Ok(DcbInstance {
        board,
        threshold: (v - 1) * (2 * v + 1) + 2 * v,
        property: HamProperty::Path,
    })
}

/// Fixes a start tile west of a leftmost vertex.
///
/// With a degree-1 leftmost vertex the start simply sits beside it and the
/// instance still decides Hamiltonian path. Otherwise the topmost leftmost
/// vertex `u` has degree 2: its corridor without the partner crystal is cut
/// next to `u`, the cut stub is extended two tiles west, and a bonded pair
/// is placed on the extension. That instance decides Hamiltonian cycle.
pub fn apply_start_gadget(instance: &DcbInstance, g: &GridGraph) -> Result<DcbInstance, BondError> {
    let base = reduce_grid_to_dcb(g)?;
    if base != *instance {
        return Err(BondError::ReductionPrecondition(
            "the board must be the plain reduction of the graph",
        ));
    }
    let f = scale(g);
    let v = g.len();
    let min_x = g.vertices().iter().map(|u| u.0).min().expect("non-empty");
    let mut leftmost: Vec<Coord> = g.vertices().iter().copied().filter(|u| u.0 == min_x).collect();
    leftmost.sort_by_key(|u| std::cmp::Reverse(u.1));

    let board = &instance.board;
    let mut tiles: BTreeSet<Coord> = board.region().tiles().clone();
    let mut crystals = board.crystals().to_vec();
    let mut bonds = board.bonds().to_vec();

    if let Some(&u) = leftmost.iter().find(|&&u| g.degree(u) == 1) {
        let start = step(scaled(u, f), (-1, 0));
        tiles.insert(start);
        let region = TileRegion::new(tiles)?;
        let board = BondBoard::new(region, crystals, Some(start), bonds, DistanceModel::GridSteps)?;
        return Ok(DcbInstance {
            board,
            threshold: instance.threshold,
            property: HamProperty::Path,
        });
    }

    let u = leftmost[0];
    assert_eq!(g.degree(u), 2, "the topmost leftmost vertex has degree at most two");
    let cu = scaled(u, f);
    let index = g.vertices().iter().position(|&w| w == u).expect("u is a vertex");
    let partner = crystals[v + index];
    let dir = ORTHOGONAL
        .iter()
        .copied()
        .find(|&d| g.contains(step(u, d)) && step(cu, d) != partner)
        .expect("degree two leaves a corridor without the partner");
    tiles.remove(&step(cu, dir));
    let stub = (cu.0 + 2 * dir.0, cu.1 + 2 * dir.1);
    let first = step(stub, (-1, 0));
    let second = step(first, (-1, 0));
    let start = step(cu, (-1, 0));
    tiles.extend([first, second, start]);
    let a = crystals.len();
    crystals.extend([first, second]);
    bonds.push((a, a + 1));
    let region = TileRegion::new(tiles)?;
    let board = BondBoard::new(region, crystals, Some(start), bonds, DistanceModel::GridSteps)?;
    let v = v as u64;
    Ok(DcbInstance {
        board,
        threshold: v * (2 * v + 1) + 2 * v,
        property: HamProperty::Cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{brute_force_crystal_bonds, crystal_metric, decide_dcb};
    use super::*;
    use crate::graphs::{has_ham_cycle_grid, has_ham_path_grid};

    fn graph(vs: &[Coord]) -> GridGraph {
        GridGraph::new(vs.iter().copied()).unwrap()
    }

    #[test]
    fn domino_threshold_and_verdict() {
        let g = graph(&[(0, 0), (1, 0)]);
        let inst = reduce_grid_to_dcb(&g).unwrap();
        assert_eq!(inst.threshold, 9);
        assert_eq!(inst.property, HamProperty::Path);
        assert!(!inst.board.is_connected());
        assert_eq!(inst.board.start(), None);
        // vertices at 0 and 5, corridor tiles 1..=4; partners east and west
        assert_eq!(inst.board.crystals(), &[(0, 0), (5, 0), (1, 0), (4, 0)]);
        assert!(decide_dcb(&inst.board, inst.threshold).unwrap());
    }

    #[test]
    fn adjacent_vertex_crystals_are_2v_plus_1_apart() {
        let g = graph(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
        let inst = reduce_grid_to_dcb(&g).unwrap();
        let m = crystal_metric(&inst.board).unwrap();
        let verts: Vec<Coord> = g.vertices().iter().copied().collect();
        for (a, b) in g.edges() {
            let i = verts.iter().position(|&x| x == a).unwrap();
            let j = verts.iter().position(|&x| x == b).unwrap();
            assert_eq!(m.between[i][j], 9.0);
        }
    }

    #[test]
    fn path_of_three_keeps_path_semantics() {
        let g = graph(&[(0, 0), (1, 0), (2, 0)]);
        let inst = reduce_grid_to_dcb(&g).unwrap();
        let gad = apply_start_gadget(&inst, &g).unwrap();
        assert_eq!(gad.property, HamProperty::Path);
        assert_eq!(gad.threshold, 2 * 7 + 6);
        assert_eq!(gad.board.start(), Some((-1, 0)));
        assert!(decide_dcb(&gad.board, gad.threshold).unwrap());
    }

    #[test]
    fn unit_square_gadget() {
        let g = graph(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let inst = reduce_grid_to_dcb(&g).unwrap();
        let gad = apply_start_gadget(&inst, &g).unwrap();
        assert_eq!(gad.threshold, 44);
        assert_eq!(gad.property, HamProperty::Cycle);
        // u = (0,1) scaled to (0,9); partner east, so the south corridor is cut
        assert_eq!(gad.board.start(), Some((-1, 9)));
        assert!(!gad.board.region().contains_tile((0, 8)));
        assert_eq!(&gad.board.crystals()[8..], &[(-1, 7), (-2, 7)]);
        let opt = brute_force_crystal_bonds(&gad.board).unwrap().length;
        assert!(opt <= 44.0, "{opt}");
        assert!(has_ham_cycle_grid(&g));
    }

    #[test]
    fn gadget_rejects_path_without_cycle() {
        // unit square with a tail on the right: leftmost column has degree 2
        let g = graph(&[(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]);
        let gad = apply_start_gadget(&reduce_grid_to_dcb(&g).unwrap(), &g).unwrap();
        assert_eq!(gad.property, HamProperty::Cycle);
        assert!(has_ham_path_grid(&g) && !has_ham_cycle_grid(&g));
        assert!(!decide_dcb(&gad.board, gad.threshold).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            reduce_grid_to_dcb(&graph(&[(0, 0)])),
            Err(BondError::ReductionPrecondition(_))
        ));
        assert!(matches!(
            reduce_grid_to_dcb(&graph(&[(0, 0), (2, 0)])),
            Err(BondError::ReductionPrecondition(_))
        ));
        let g = graph(&[(0, 0), (1, 0)]);
        let other = reduce_grid_to_dcb(&graph(&[(0, 0), (0, 1)])).unwrap();
        assert!(matches!(
            apply_start_gadget(&other, &g),
            Err(BondError::ReductionPrecondition(_))
        ));
    }
}
