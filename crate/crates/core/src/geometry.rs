//! Walkable tile regions and the distances measured inside them.
//!
//! A region is the closed union of unit squares `[x, x+1] x [y, y+1]`, one
//! per tile, with every pinch corner removed. A pinch corner is a lattice
//! point where exactly two tiles meet and they meet only diagonally; the
//! player may not slip between such tiles.
//!
//! Three distances are provided:
//! - [`euclidean_geodesic`]: exact shortest path length, computed on the
//!   visibility graph of the query points and the reflex corners;
//! - [`grid_distance`]: orthogonal tile steps (BFS);
//! - [`fine_grid_distance`]: Dijkstra on an 8-connected lattice of spacing
//!   `1/k`, an upper bound used as an independent check of the geodesic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};

use thiserror::Error;

use crate::{step, Coord, ORTHOGONAL};

/// Absolute tolerance for point-in-region and lattice tests.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a region needs at least one tile")]
    EmptyRegion,
    #[error("point ({0}, {1}) lies outside the region")]
    PointOutsideRegion(f64, f64),
    #[error("tile ({0}, {1}) is not part of the region")]
    NotATile(i32, i32),
    #[error("the two points are not connected inside the region")]
    Unreachable,
    #[error("fine-grid subdivision must be at least 2, got {0}")]
    SubdivisionTooSmall(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Centre of tile `c`.
    pub fn center(c: Coord) -> Self {
        Point::new(c.0 as f64 + 0.5, c.1 as f64 + 0.5)
    }

    pub fn lattice(c: Coord) -> Self {
        Point::new(c.0 as f64, c.1 as f64)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    fn near_lattice(self) -> Option<Coord> {
        let (rx, ry) = (self.x.round(), self.y.round());
        ((self.x - rx).abs() <= EPS && (self.y - ry).abs() <= EPS).then_some((rx as i32, ry as i32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileRegion {
    tiles: BTreeSet<Coord>,
    pinches: BTreeSet<Coord>,
}

impl TileRegion {
    pub fn new<I: IntoIterator<Item = Coord>>(tiles: I) -> Result<Self, GeometryError> {
        let tiles: BTreeSet<Coord> = tiles.into_iter().collect();
        if tiles.is_empty() {
            return Err(GeometryError::EmptyRegion);
        }
        let pinches = compute_pinches(&tiles);
        Ok(TileRegion { tiles, pinches })
    }

    pub fn tiles(&self) -> &BTreeSet<Coord> {
        &self.tiles
    }

    pub fn contains_tile(&self, c: Coord) -> bool {
        self.tiles.contains(&c)
    }

    pub fn pinch_corners(&self) -> &BTreeSet<Coord> {
        &self.pinches
    }

    /// `(min_x, min_y, max_x, max_y)` over tile coordinates.
    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        crate::graphs::bounds_of(self.tiles.iter().copied())
    }

    /// Tiles present among the four around lattice corner `c`, in the order
    /// lower-left, lower-right, upper-left, upper-right.
    fn quadrants(&self, c: Coord) -> [bool; 4] {
        let (x, y) = c;
        [
            self.tiles.contains(&(x - 1, y - 1)),
            self.tiles.contains(&(x, y - 1)),
            self.tiles.contains(&(x - 1, y)),
            self.tiles.contains(&(x, y)),
        ]
    }

    /// Corners where three of the four surrounding tiles are present. These
    /// are the only places a shortest path can bend.
    pub fn reflex_corners(&self) -> Vec<Coord> {
        let mut corners = BTreeSet::new();
        for &(x, y) in &self.tiles {
            for c in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
                corners.insert(c);
            }
        }
        corners
            .into_iter()
            .filter(|&c| self.quadrants(c).iter().filter(|&&q| q).count() == 3)
            .collect()
    }

    /// Whether `p` lies in the closed union of tiles. Pinch corners are
    /// reported as inside; passage through them is handled separately.
    pub fn contains_point(&self, p: Point) -> bool {
        let (x0, x1) = ((p.x - EPS).floor() as i32, (p.x + EPS).floor() as i32);
        let (y0, y1) = ((p.y - EPS).floor() as i32, (p.y + EPS).floor() as i32);
        (x0..=x1).any(|tx| (y0..=y1).any(|ty| self.tiles.contains(&(tx, ty))))
    }

    fn is_pinch_point(&self, p: Point) -> bool {
        p.near_lattice().is_some_and(|c| self.pinches.contains(&c))
    }

    /// A segment is admissible when all of it lies in the closed region and
    /// it touches no pinch corner.
    pub fn segment_admissible(&self, a: Point, b: Point) -> bool {
        let mut ts = vec![0.0, 1.0];
        for (from, to) in [(a.x, b.x), (a.y, b.y)] {
            if (to - from).abs() <= EPS {
                continue;
            }
            let (lo, hi) = (from.min(to), from.max(to));
            let mut k = (lo + EPS).ceil();
            while k <= hi - EPS {
                ts.push((k - from) / (to - from));
                k += 1.0;
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
        if ts.iter().any(|&t| self.is_pinch_point(a.lerp(b, t))) {
            return false;
        }
        if ts.len() == 1 || a.dist(b) <= EPS {
            return self.contains_point(a);
        }
        ts.windows(2)
            .all(|w| self.contains_point(a.lerp(b, 0.5 * (w[0] + w[1]))))
    }

    fn check_inside(&self, p: Point) -> Result<(), GeometryError> {
        if self.contains_point(p) && !self.is_pinch_point(p) {
            Ok(())
        } else {
            Err(GeometryError::PointOutsideRegion(p.x, p.y))
        }
    }
}

fn compute_pinches(tiles: &BTreeSet<Coord>) -> BTreeSet<Coord> {
    let mut out = BTreeSet::new();
    for &(x, y) in tiles {
        // each diagonal contact is seen from its lower tile
        for (corner, other, side_a, side_b) in [
            ((x + 1, y + 1), (x + 1, y + 1), (x + 1, y), (x, y + 1)),
            ((x, y + 1), (x - 1, y + 1), (x - 1, y), (x, y + 1)),
        ] {
            if tiles.contains(&other) && !tiles.contains(&side_a) && !tiles.contains(&side_b) {
                out.insert(corner);
            }
        }
    }
    out
}

/// Lattice corners where two tiles touch only diagonally.
pub fn pinch_corners(region: &TileRegion) -> BTreeSet<Coord> {
    region.pinch_corners().clone()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], seeds: &[(usize, f64)]) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    for &(node, d) in seeds {
        if d < dist[node] {
            dist[node] = d;
            heap.push(Frontier { dist: d, node });
        }
    }
    while let Some(Frontier { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Frontier { dist: nd, node: next });
            }
        }
    }
    dist
}

/// Visibility graph over the reflex corners of a region. Build once per
/// region, then query any number of point sets against it.
#[derive(Debug, Clone)]
pub struct VisibilityGraph<'a> {
    region: &'a TileRegion,
    corners: Vec<Point>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl<'a> VisibilityGraph<'a> {
    pub fn new(region: &'a TileRegion) -> Self {
        let corners: Vec<Point> = region
            .reflex_corners()
            .into_iter()
            .map(Point::lattice)
            .collect();
        let mut adj = vec![Vec::new(); corners.len()];
        for i in 0..corners.len() {
            for j in i + 1..corners.len() {
                if region.segment_admissible(corners[i], corners[j]) {
                    let w = corners[i].dist(corners[j]);
                    adj[i].push((j, w));
                    adj[j].push((i, w));
                }
            }
        }
        VisibilityGraph {
            region,
            corners,
            adj,
        }
    }

    pub fn corner_count(&self) -> usize {
        self.corners.len()
    }

    fn visible_corners(&self, p: Point) -> Vec<(usize, f64)> {
        self.corners
            .iter()
            .enumerate()
            .filter(|&(_, &c)| self.region.segment_admissible(p, c))
            .map(|(i, &c)| (i, p.dist(c)))
            .collect()
    }

    /// Pairwise geodesic distances among `points`; `None` marks pairs in
    /// different components.
    pub fn metric(&self, points: &[Point]) -> Result<Vec<Vec<Option<f64>>>, GeometryError> {
        for &p in points {
            self.region.check_inside(p)?;
        }
        let sights: Vec<Vec<(usize, f64)>> =
            points.iter().map(|&p| self.visible_corners(p)).collect();
        let n = points.len();
        let mut out = vec![vec![None; n]; n];
        for s in 0..n {
            out[s][s] = Some(0.0);
            let via = dijkstra(&self.adj, &sights[s]);
            for t in s + 1..n {
                let mut best = if self.region.segment_admissible(points[s], points[t]) {
                    points[s].dist(points[t])
                } else {
                    f64::INFINITY
                };
                for &(c, w) in &sights[t] {
                    best = best.min(via[c] + w);
                }
                let d = best.is_finite().then_some(best);
                out[s][t] = d;
                out[t][s] = d;
            }
        }
        Ok(out)
    }
}

/// Length of the shortest path from `p` to `q` inside the region.
pub fn euclidean_geodesic(region: &TileRegion, p: Point, q: Point) -> Result<f64, GeometryError> {
    let vis = VisibilityGraph::new(region);
    vis.metric(&[p, q])?[0][1].ok_or(GeometryError::Unreachable)
}

/// BFS distances in orthogonal tile steps from `from` to every reachable tile.
pub fn tile_steps_from(region: &TileRegion, from: Coord) -> HashMap<Coord, u64> {
    let mut dist = HashMap::from([(from, 0u64)]);
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        let d = dist[&c];
        for &dir in &ORTHOGONAL {
            let n = step(c, dir);
            if region.contains_tile(n) && !dist.contains_key(&n) {
                dist.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

/// Minimum number of orthogonal tile steps from `a` to `b`.
pub fn grid_distance(region: &TileRegion, a: Coord, b: Coord) -> Result<u64, GeometryError> {
    for c in [a, b] {
        if !region.contains_tile(c) {
            return Err(GeometryError::NotATile(c.0, c.1));
        }
    }
    tile_steps_from(region, a)
        .get(&b)
        .copied()
        .ok_or(GeometryError::Unreachable)
}

/// Shortest path on the 8-connected lattice of spacing `1/k` restricted to
/// the region, with pinch corners removed as nodes. Query points off the
/// lattice are joined to the corners of the lattice cell containing them.
/// Every lattice path is a path in the region, so the result never
/// undercuts the geodesic.
pub fn fine_grid_distance(
    region: &TileRegion,
    p: Point,
    q: Point,
    k: u32,
) -> Result<f64, GeometryError> {
    if k < 2 {
        return Err(GeometryError::SubdivisionTooSmall(k));
    }
    region.check_inside(p)?;
    region.check_inside(q)?;
    let k = k as i64;
    let (min_x, min_y, max_x, max_y) = region.bounds();
    let (ox, oy) = (min_x as i64 * k, min_y as i64 * k);
    let w = (max_x - min_x + 1) as i64 * k + 1;
    let h = (max_y - min_y + 1) as i64 * k + 1;
    let kf = k as f64;
    let coord = |i: i64, j: i64| Point::new((ox + i) as f64 / kf, (oy + j) as f64 / kf);
    let index = |i: i64, j: i64| (j * w + i) as usize;

    let node_ok: Vec<bool> = (0..h)
        .flat_map(|j| (0..w).map(move |i| (i, j)))
        .map(|(i, j)| {
            let pt = coord(i, j);
            region.contains_point(pt) && !region.is_pinch_point(pt)
        })
        .collect();

    let lattice_count = (w * h) as usize;
    let (src, dst) = (lattice_count, lattice_count + 1);
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lattice_count + 2];
    let diag = std::f64::consts::SQRT_2 / kf;
    for j in 0..h {
        for i in 0..w {
            if !node_ok[index(i, j)] {
                continue;
            }
            for (di, dj) in [(1, 0), (0, 1), (1, 1), (-1, 1)] {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || ni >= w || nj >= h || !node_ok[index(ni, nj)] {
                    continue;
                }
                let mid = Point::new(
                    (2 * ox + i + ni) as f64 / (2.0 * kf),
                    (2 * oy + j + nj) as f64 / (2.0 * kf),
                );
                if !region.contains_point(mid) {
                    continue;
                }
                let len = if di != 0 && dj != 0 { diag } else { 1.0 / kf };
                adj[index(i, j)].push((index(ni, nj), len));
                adj[index(ni, nj)].push((index(i, j), len));
            }
        }
    }

    let attach = |pt: Point, node: usize, adj: &mut Vec<Vec<(usize, f64)>>| {
        let fi = (pt.x * kf).floor() as i64 - ox;
        let fj = (pt.y * kf).floor() as i64 - oy;
        for (ci, cj) in [(fi, fj), (fi + 1, fj), (fi, fj + 1), (fi + 1, fj + 1)] {
            if ci < 0 || cj < 0 || ci >= w || cj >= h || !node_ok[index(ci, cj)] {
                continue;
            }
            let c = coord(ci, cj);
            if region.segment_admissible(pt, c) {
                let len = pt.dist(c);
                adj[node].push((index(ci, cj), len));
                adj[index(ci, cj)].push((node, len));
            }
        }
    };
    attach(p, src, &mut adj);
    attach(q, dst, &mut adj);
    if region.segment_admissible(p, q) && p.dist(q) <= 1.0 / kf {
        adj[src].push((dst, p.dist(q)));
    }

    let dist = dijkstra(&adj, &[(src, 0.0)]);
    dist[dst]
        .is_finite()
        .then_some(dist[dst])
        .ok_or(GeometryError::Unreachable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(tiles: &[Coord]) -> TileRegion {
        TileRegion::new(tiles.iter().copied()).unwrap()
    }

    #[test]
    fn pinch_examples() {
        assert_eq!(
            pinch_corners(&region(&[(0, 0), (1, 1)])),
            BTreeSet::from([(1, 1)])
        );
        assert!(pinch_corners(&region(&[(0, 0), (1, 0), (1, 1)])).is_empty());
        assert!(pinch_corners(&region(&[(0, 0), (1, 0), (0, 1), (1, 1)])).is_empty());
        // anti-diagonal contact
        assert_eq!(
            pinch_corners(&region(&[(1, 0), (0, 1)])),
            BTreeSet::from([(1, 1)])
        );
    }

    #[test]
    fn reflex_corners_of_an_l() {
        let r = region(&[(0, 0), (1, 0), (1, 1)]);
        assert_eq!(r.reflex_corners(), vec![(1, 1)]);
        assert!(region(&[(0, 0), (1, 1)]).reflex_corners().is_empty());
    }

    #[test]
    fn geodesic_examples() {
        let l = region(&[(0, 0), (1, 0), (1, 1)]);
        let p = Point::center((0, 0));
        assert_eq!(euclidean_geodesic(&l, p, p), Ok(0.0));
        let d = euclidean_geodesic(&l, p, Point::center((1, 1))).unwrap();
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-12);

        let pinched = region(&[(0, 0), (1, 1)]);
        assert_eq!(
            euclidean_geodesic(&pinched, Point::center((0, 0)), Point::center((1, 1))),
            Err(GeometryError::Unreachable)
        );
        assert!(matches!(
            euclidean_geodesic(&l, p, Point::new(0.5, 1.5)),
            Err(GeometryError::PointOutsideRegion(..))
        ));
    }

    #[test]
    fn geodesic_bends_around_a_reflex_corner() {
        // U shape: (0,0)..(2,0) along the bottom, arms up at x=0 and x=2
        let u = region(&[(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)]);
        let d = euclidean_geodesic(&u, Point::center((0, 1)), Point::center((2, 1))).unwrap();
        // (0.5,1.5) -> (1,1) -> (2,1) -> (2.5,1.5)
        let expected = 2.0 * 0.5f64.hypot(0.5) + 1.0;
        assert!((d - expected).abs() < 1e-12, "{d} vs {expected}");
    }

    #[test]
    fn grid_distance_examples() {
        let line = region(&[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(grid_distance(&line, (0, 0), (0, 0)), Ok(0));
        assert_eq!(grid_distance(&line, (0, 0), (2, 0)), Ok(2));
        assert_eq!(
            grid_distance(&region(&[(0, 0), (1, 1)]), (0, 0), (1, 1)),
            Err(GeometryError::Unreachable)
        );
        assert_eq!(
            grid_distance(&line, (0, 0), (5, 0)),
            Err(GeometryError::NotATile(5, 0))
        );
    }

    #[test]
    fn fine_grid_examples() {
        let line = region(&[(0, 0), (1, 0), (2, 0)]);
        let (a, b) = (Point::center((0, 0)), Point::center((2, 0)));
        assert_eq!(fine_grid_distance(&line, a, a, 4), Ok(0.0));
        for k in [2, 3, 4, 7, 16] {
            let d = fine_grid_distance(&line, a, b, k).unwrap();
            if k % 2 == 0 {
                assert!((d - 2.0).abs() < 1e-9, "k={k}: {d}");
            } else {
                // centers sit mid-cell, so the lattice detour costs up to 2/k
                assert!(d >= 2.0 - 1e-9 && d <= 2.0 + 2.0 / k as f64, "k={k}: {d}");
            }
        }
        let l = region(&[(0, 0), (1, 0), (1, 1)]);
        let d = fine_grid_distance(&l, Point::center((0, 0)), Point::center((1, 1)), 16).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert!(d >= s2 - 1e-9 && d <= 1.09 * s2, "{d}");
        assert_eq!(
            fine_grid_distance(&l, a, a, 1),
            Err(GeometryError::SubdivisionTooSmall(1))
        );
        assert_eq!(
            fine_grid_distance(
                &region(&[(0, 0), (1, 1)]),
                Point::center((0, 0)),
                Point::center((1, 1)),
                8
            ),
            Err(GeometryError::Unreachable)
        );
    }

    #[test]
    fn geodesic_never_exceeds_tile_steps() {
        let r = region(&[(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (3, 2)]);
        for &a in r.tiles() {
            for &b in r.tiles() {
                let g = euclidean_geodesic(&r, Point::center(a), Point::center(b)).unwrap();
                let s = grid_distance(&r, a, b).unwrap() as f64;
                assert!(g <= s + EPS);
            }
        }
    }
}
