//! Seeded random generators for every instance kind. All take a caller's
//! RNG so sweeps can derive one stream per case from a master seed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crystal_bonds::{BondBoard, BondWalk, DistanceModel};
use crate::geometry::TileRegion;
use crate::graphs::{Digraph, GridGraph};
use crate::hands_of_time::{reduce_digraph_to_phot, ClockInstance, ClockSolution, Direction};
use crate::instance_io::{Document, Kind};
use crate::tile_trial::{TileBoard, TilePath};
use crate::{step, Coord, ORTHOGONAL};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for case `index` of a sweep driven by `master`.
pub fn case_seed(master: u64, index: u64) -> u64 {
    // splitmix64 step
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Connected cell set of exactly `size` cells inside `[0,w) x [0,h)`, grown
/// from a random seed cell. `size` is clamped to `w * h`.
pub fn random_polyomino<R: Rng>(rng: &mut R, w: i32, h: i32, size: usize) -> BTreeSet<Coord> {
    let size = size.clamp(1, (w * h) as usize);
    let mut cells = BTreeSet::from([(rng.random_range(0..w), rng.random_range(0..h))]);
    while cells.len() < size {
        let frontier: Vec<Coord> = cells
            .iter()
            .flat_map(|&c| ORTHOGONAL.iter().map(move |&d| step(c, d)))
            .filter(|&(x, y)| (0..w).contains(&x) && (0..h).contains(&y))
            .filter(|c| !cells.contains(c))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        cells.insert(*frontier.choose(rng).expect("box not yet full"));
    }
    cells
}

pub fn random_connected_grid_graph<R: Rng>(rng: &mut R, w: i32, h: i32, v: usize) -> GridGraph {
    GridGraph::new(random_polyomino(rng, w, h, v)).expect("non-empty")
}

/// Every vertex gets one or two distinct out-neighbours other than itself.
pub fn random_outdeg12_digraph<R: Rng>(rng: &mut R, v: usize) -> Digraph {
    assert!(v >= 2, "outdegree 1 needs a second vertex");
    let mut arcs = Vec::new();
    for u in 0..v {
        let others: Vec<usize> = (0..v).filter(|&w| w != u).collect();
        let deg = if others.len() >= 2 && rng.random_bool(0.5) { 2 } else { 1 };
        let mut picked: Vec<usize> = others.choose_multiple(rng, deg).copied().collect();
        picked.sort_unstable();
        arcs.extend(picked.into_iter().map(|w| (u, w)));
    }
    Digraph::new(v, arcs).expect("arcs are distinct and loop-free")
}

/// Each cell of the box is a tile with probability `density`; at least one
/// tile is always present. The result may be disconnected.
pub fn random_region<R: Rng>(rng: &mut R, w: i32, h: i32, density: f64) -> TileRegion {
    let mut tiles: Vec<Coord> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|_| rng.random_bool(density))
        .collect();
    if tiles.is_empty() {
        tiles.push((rng.random_range(0..w), rng.random_range(0..h)));
    }
    TileRegion::new(tiles).expect("non-empty")
}

/// Connected region with `r` crystals joined by a random spanning tree.
pub fn random_tree_board<R: Rng>(rng: &mut R, w: i32, h: i32, r: usize, model: DistanceModel) -> BondBoard {
    let area = (w * h) as usize;
    assert!(r >= 1 && r <= area, "crystals must fit in the box");
    let size = rng.random_range(r.max(2).min(area)..=area);
    let cells: Vec<Coord> = random_polyomino(rng, w, h, size).into_iter().collect();
    let crystals: Vec<Coord> = cells.choose_multiple(rng, r).copied().collect();
    let start = *cells.choose(rng).expect("non-empty");
    let bonds = random_tree(rng, r);
    let region = TileRegion::new(cells).expect("non-empty");
    BondBoard::new(region, crystals, Some(start), bonds, model).expect("valid by construction")
}

/// Random labelled tree on `0..n` as a list of edges.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (1..n)
        .map(|i| {
            let parent = order[rng.random_range(0..i)];
            if rng.random_bool(0.5) {
                (order[i], parent)
            } else {
                (parent, order[i])
            }
        })
        .collect()
}

/// Random forest board, possibly with free start and isolated crystals.
pub fn random_forest_board<R: Rng>(rng: &mut R, w: i32, h: i32) -> BondBoard {
    let model = if rng.random_bool(0.5) {
        DistanceModel::GridSteps
    } else {
        DistanceModel::Euclidean
    };
    let region = random_region(rng, w, h, 0.6);
    let tiles: Vec<Coord> = region.tiles().iter().copied().collect();
    let r = rng.random_range(0..=tiles.len().min(6));
    let crystals: Vec<Coord> = tiles.choose_multiple(rng, r).copied().collect();
    let start = rng.random_bool(0.7).then(|| *tiles.choose(rng).expect("non-empty"));
    let mut bonds = random_tree(rng, r);
    bonds.retain(|_| rng.random_bool(0.7));
    BondBoard::new(region, crystals, start, bonds, model).expect("a subforest of a tree is a forest")
}

pub fn random_tile_board<R: Rng>(rng: &mut R, w: i32, h: i32) -> TileBoard {
    let size = rng.random_range(2..=(w * h) as usize);
    let cells: Vec<Coord> = random_polyomino(rng, w, h, size).into_iter().collect();
    let ends: Vec<Coord> = cells.choose_multiple(rng, 2).copied().collect();
    let mut tiles = BTreeMap::new();
    let mut crystals = BTreeSet::new();
    for &c in &cells {
        let special = ends.contains(&c);
        tiles.insert(c, if !special && rng.random_bool(0.3) { 2 } else { 1 });
        if !special && rng.random_bool(0.3) {
            crystals.insert(c);
        }
    }
    TileBoard::new(tiles, crystals, ends[0], ends[1]).expect("valid by construction")
}

pub fn random_tile_path<R: Rng>(rng: &mut R) -> TilePath {
    let len = rng.random_range(0..12);
    TilePath {
        steps: (0..len)
            .map(|_| (rng.random_range(-50..50), rng.random_range(-50..50)))
            .collect(),
    }
}

pub fn random_bond_walk<R: Rng>(rng: &mut R) -> BondWalk {
    let len = rng.random_range(0..10);
    BondWalk {
        sequence: (0..len).map(|_| rng.random_range(0..20)).collect(),
        length: rng.random_range(0.0..1e4),
    }
}

/// Sparse clock on a circumference of up to `digits` decimal digits.
pub fn random_sparse_clock<R: Rng>(rng: &mut R, digits: u32) -> ClockInstance {
    let bound = BigUint::from(10u8).pow(digits);
    let n = random_below(rng, &(bound - 2u8)) + 2u8;
    let half = &n >> 1;
    let count = rng.random_range(0..8);
    let mut occupied = BTreeMap::new();
    for _ in 0..count {
        let p = random_below(rng, &n);
        let m = random_below(rng, &half) + 1u8;
        occupied.insert(p, m);
    }
    ClockInstance::new(n, occupied).expect("values within bounds")
}

pub fn random_clock_solution<R: Rng>(rng: &mut R) -> ClockSolution {
    let len = rng.random_range(0..8);
    ClockSolution {
        moves: (0..len)
            .map(|_| {
                let bits = rng.random_range(1..80);
                let p = random_below(rng, &(BigUint::from(1u8) << bits));
                let d = if rng.random_bool(0.5) { Direction::Cw } else { Direction::Ccw };
                (p, d)
            })
            .collect(),
    }
}

/// Nearly uniform integer in `[0, n)`; `n` must be positive.
pub fn random_below<R: Rng>(rng: &mut R, n: &BigUint) -> BigUint {
    let words = n.to_u32_digits().len() + 2;
    let raw: Vec<u32> = (0..words).map(|_| rng.random()).collect();
    BigUint::from_slice(&raw) % n
}

/// A random well-formed document of the given kind.
pub fn random_document<R: Rng>(rng: &mut R, kind: Kind) -> Document {
    match kind {
        Kind::GridGraph => {
            let v = rng.random_range(1..=12);
            Document::GridGraph(random_connected_grid_graph(rng, 5, 5, v))
        }
        Kind::Digraph => {
            let v = rng.random_range(2..=9);
            Document::Digraph(random_outdeg12_digraph(rng, v))
        }
        Kind::TileBoard => Document::TileBoard(random_tile_board(rng, 6, 5)),
        Kind::TilePath => Document::TilePath(random_tile_path(rng)),
        Kind::BondBoard => Document::BondBoard(random_forest_board(rng, 7, 6)),
        Kind::BondWalk => Document::BondWalk(random_bond_walk(rng)),
        Kind::Clock => {
            if rng.random_bool(0.5) {
                let n = rng.random_range(2..=12);
                let values: Vec<u64> = (0..n).map(|_| rng.random_range(1..=n as u64 / 2)).collect();
                Document::Clock(ClockInstance::dense(&values).expect("values within bounds"))
            } else {
                let digits = rng.random_range(1..=40);
                Document::Clock(random_sparse_clock(rng, digits))
            }
        }
        Kind::ClockSolution => Document::ClockSolution(random_clock_solution(rng)),
        Kind::Certificate => {
            let v = rng.random_range(2..=7);
            let d = random_outdeg12_digraph(rng, v);
            let mut cert = reduce_digraph_to_phot(&d).expect("outdegree 1 or 2");
            if rng.random_bool(0.5) {
                cert.evaluate(None).expect("small digraph");
            }
            Document::Certificate(cert)
        }
    }
}
