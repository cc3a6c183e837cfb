//! Grid graphs, directed graphs and the brute-force Hamiltonicity oracles
//! that every reduction test trusts.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::{step, Coord, ORTHOGONAL};

/// Largest digraph accepted by [`has_directed_ham_path`].
pub const DIRECTED_HAM_LIMIT: usize = 16;

/// Largest box area accepted by [`enumerate_grid_graphs`].
pub const ENUMERATION_AREA_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a grid graph needs at least one vertex")]
    Empty,
    #[error("a digraph needs at least one vertex")]
    NoVertices,
    #[error("arc {0} -> {1} references a vertex outside 0..{2}")]
    ArcOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("instance too large: {size} vertices exceeds the search limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("box {0}x{1} exceeds the enumeration limit of {ENUMERATION_AREA_LIMIT} cells")]
    BoxTooLarge(usize, usize),
}

/// An induced subgraph of the integer lattice. Edges are never stored:
/// two vertices are adjacent exactly when they are at distance 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridGraph {
    vertices: BTreeSet<Coord>,
}

impl GridGraph {
    pub fn new<I: IntoIterator<Item = Coord>>(vertices: I) -> Result<Self, GraphError> {
        let vertices: BTreeSet<Coord> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        Ok(GridGraph { vertices })
    }

    pub fn vertices(&self) -> &BTreeSet<Coord> {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Coord) -> bool {
        self.vertices.contains(&v)
    }

    /// Lattice neighbours of `v` present in the graph, in E, N, W, S order.
    pub fn neighbors(&self, v: Coord) -> impl Iterator<Item = Coord> + '_ {
        ORTHOGONAL
            .iter()
            .map(move |&d| step(v, d))
            .filter(move |w| self.vertices.contains(w))
    }

    pub fn degree(&self, v: Coord) -> usize {
        self.neighbors(v).count()
    }

    /// All edges as ordered pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> BTreeSet<(Coord, Coord)> {
        let mut out = BTreeSet::new();
        for &v in &self.vertices {
            for w in self.neighbors(v) {
                if v < w {
                    out.insert((v, w));
                }
            }
        }
        out
    }

    /// `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        bounds_of(self.vertices.iter().copied())
    }

    pub fn is_connected(&self) -> bool {
        let start = *self.vertices.iter().next().expect("nonempty");
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Index-based adjacency lists, vertices numbered in sorted order.
    pub(crate) fn adjacency(&self) -> (Vec<Coord>, Vec<Vec<usize>>) {
        let order: Vec<Coord> = self.vertices.iter().copied().collect();
        let adj = order
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .map(|w| order.binary_search(&w).expect("neighbour is a vertex"))
                    .collect()
            })
            .collect();
        (order, adj)
    }
}

pub(crate) fn bounds_of<I: IntoIterator<Item = Coord>>(points: I) -> (i32, i32, i32, i32) {
    points.into_iter().fold(
        (i32::MAX, i32::MAX, i32::MIN, i32::MIN),
        |(a, b, c, d), (x, y)| (a.min(x), b.min(y), c.max(x), d.max(y)),
    )
}

/// A simple directed graph on vertices `0..v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut seen = BTreeSet::new();
        for &(s, t) in &arcs {
            if s >= vertex_count || t >= vertex_count {
                return Err(GraphError::ArcOutOfRange(s, t, vertex_count));
            }
            if s == t {
                return Err(GraphError::SelfLoop(s));
            }
            if !seen.insert((s, t)) {
                return Err(GraphError::DuplicateArc(s, t));
            }
        }
        Ok(Digraph { vertex_count, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Out-neighbours of `u`, ascending.
    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .arcs
            .iter()
            .filter(|&&(s, _)| s == u)
            .map(|&(_, t)| t)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.arcs.iter().filter(|&&(s, _)| s == u).count()
    }

    /// True when every vertex has out-degree 1 or 2.
    pub fn is_outdeg12(&self) -> bool {
        (0..self.vertex_count).all(|u| matches!(self.out_degree(u), 1 | 2))
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.vertex_count).map(|u| self.out_neighbors(u)).collect()
    }

    /// The digraph with both orientations of every grid edge.
    pub fn symmetric_orientation(g: &GridGraph) -> Digraph {
        let (order, adj) = g.adjacency();
        let arcs = adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().map(move |&w| (u, w)))
            .collect();
        Digraph {
            vertex_count: order.len(),
            arcs,
        }
    }
}

/// Backtracking Hamiltonian search over an adjacency list. Keeps the
/// invariant that every unvisited vertex is reachable from the current end
/// through unvisited vertices.
struct HamSearch<'a> {
    adj: &'a [Vec<usize>],
    visited: Vec<bool>,
    closing: Option<usize>,
}

impl HamSearch<'_> {
    fn extend(&mut self, at: usize, depth: usize) -> bool {
        let n = self.adj.len();
        if depth == n {
            return match self.closing {
                Some(first) => self.adj[at].contains(&first),
                None => true,
            };
        }
        if !self.rest_reachable(at, depth) {
            return false;
        }
        for i in 0..self.adj[at].len() {
            let next = self.adj[at][i];
            if self.visited[next] {
                continue;
            }
            self.visited[next] = true;
            let ok = self.extend(next, depth + 1);
            self.visited[next] = false;
            if ok {
                return true;
            }
        }
        false
    }

    fn rest_reachable(&self, at: usize, depth: usize) -> bool {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut stack = vec![at];
        seen[at] = true;
        let mut reached = 0;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !self.visited[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n - depth
    }
}

fn ham_path_from_any(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    (0..n).any(|s| {
        let mut search = HamSearch {
            adj,
            visited: vec![false; n],
            closing: None,
        };
        search.visited[s] = true;
        search.extend(s, 1)
    })
}

/// Whether `g` has a Hamiltonian cycle. Graphs on fewer than four vertices
/// never do: grid graphs are bipartite, so every cycle has length at least 4.
pub fn has_ham_cycle_grid(g: &GridGraph) -> bool {
    let n = g.len();
    if n < 4 {
        return false;
    }
    let (_, adj) = g.adjacency();
    let mut search = HamSearch {
        adj: &adj,
        visited: vec![false; n],
        closing: Some(0),
    };
    search.visited[0] = true;
    search.extend(0, 1)
}

/// Whether `g` has a Hamiltonian path. A single vertex is a path.
pub fn has_ham_path_grid(g: &GridGraph) -> bool {
    let (_, adj) = g.adjacency();
    ham_path_from_any(&adj)
}

/// Whether `d` has a directed Hamiltonian path, by exhaustive backtracking.
/// Accepts at most [`DIRECTED_HAM_LIMIT`] vertices.
pub fn has_directed_ham_path(d: &Digraph) -> Result<bool, GraphError> {
    if d.vertex_count() > DIRECTED_HAM_LIMIT {
        return Err(GraphError::TooLarge {
            size: d.vertex_count(),
            limit: DIRECTED_HAM_LIMIT,
        });
    }
    Ok(ham_path_from_any(&d.adjacency()))
}

/// Every connected induced grid graph inside the `box_w` x `box_h` box with
/// at most `max_vertices` vertices. Vertex `(x, y)` of the box is bit
/// `y * box_w + x`; graphs come out in increasing bitmask order.
pub fn enumerate_grid_graphs(
    box_w: usize,
    box_h: usize,
    max_vertices: usize,
) -> Result<impl Iterator<Item = GridGraph>, GraphError> {
    let area = box_w * box_h;
    if area > ENUMERATION_AREA_LIMIT {
        return Err(GraphError::BoxTooLarge(box_w, box_h));
    }
    Ok((1u32..(1u32 << area)).filter_map(move |mask| {
        if mask.count_ones() as usize > max_vertices {
            return None;
        }
        let cells = (0..area)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ((i % box_w) as i32, (i / box_w) as i32));
        let g = GridGraph::new(cells).expect("mask is nonzero");
        g.is_connected().then_some(g)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(points: &[Coord]) -> GridGraph {
        GridGraph::new(points.iter().copied()).unwrap()
    }

    #[test]
    fn edges_follow_the_unit_distance_rule() {
        assert!(grid(&[(0, 0)]).edges().is_empty());
        assert!(grid(&[(0, 0), (1, 1)]).edges().is_empty());
        let square = grid(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let edges = square.edges();
        assert_eq!(edges.len(), 4);
        assert!(square.vertices().iter().all(|&v| square.degree(v) == 2));
    }

    #[test]
    fn empty_grid_graph_is_rejected() {
        assert_eq!(GridGraph::new([]), Err(GraphError::Empty));
    }

    #[test]
    fn cycle_oracle() {
        assert!(has_ham_cycle_grid(&grid(&[(0, 0), (1, 0), (0, 1), (1, 1)])));
        assert!(!has_ham_cycle_grid(&grid(&[(0, 0), (1, 0), (2, 0)])));
        assert!(!has_ham_cycle_grid(&grid(&[(0, 0), (1, 0)])));
        // 2x3 block has one; the plus shape does not
        let block: Vec<Coord> = (0..3).flat_map(|x| (0..2).map(move |y| (x, y))).collect();
        assert!(has_ham_cycle_grid(&grid(&block)));
        assert!(!has_ham_cycle_grid(&grid(&[(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])));
    }

    #[test]
    fn path_oracle() {
        assert!(has_ham_path_grid(&grid(&[(0, 0)])));
        assert!(has_ham_path_grid(&grid(&[(0, 0), (1, 0), (2, 0)])));
        assert!(!has_ham_path_grid(&grid(&[(0, 0), (5, 5)])));
        assert!(!has_ham_path_grid(&grid(&[(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])));
    }

    #[test]
    fn directed_path_oracle() {
        let cyc = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(has_directed_ham_path(&cyc), Ok(true));
        let none = Digraph::new(2, vec![]).unwrap();
        assert_eq!(has_directed_ham_path(&none), Ok(false));
        let star = Digraph::new(3, vec![(0, 1), (0, 2)]).unwrap();
        assert_eq!(has_directed_ham_path(&star), Ok(false));
        let big = Digraph::new(DIRECTED_HAM_LIMIT + 1, vec![]).unwrap();
        assert!(matches!(
            has_directed_ham_path(&big),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn digraph_validation() {
        assert_eq!(Digraph::new(0, vec![]), Err(GraphError::NoVertices));
        assert_eq!(Digraph::new(2, vec![(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Digraph::new(2, vec![(0, 1), (0, 1)]),
            Err(GraphError::DuplicateArc(0, 1))
        );
        assert_eq!(
            Digraph::new(2, vec![(0, 2)]),
            Err(GraphError::ArcOutOfRange(0, 2, 2))
        );
        let d = Digraph::new(3, vec![(0, 2), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(d.out_neighbors(0), vec![1, 2]);
        assert!(d.is_outdeg12());
        assert!(!Digraph::new(2, vec![(0, 1)]).unwrap().is_outdeg12());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_grid_graphs(2, 1, 2).unwrap().count(), 3);
        assert_eq!(enumerate_grid_graphs(1, 1, 1).unwrap().count(), 1);
        let square = grid(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert!(enumerate_grid_graphs(2, 2, 4).unwrap().any(|g| g == square));
        assert!(matches!(
            enumerate_grid_graphs(4, 4, 3),
            Err(GraphError::BoxTooLarge(4, 4))
        ));
    }

    #[test]
    fn enumeration_is_duplicate_free_and_connected() {
        let all: Vec<GridGraph> = enumerate_grid_graphs(3, 3, 9).unwrap().collect();
        let distinct: BTreeSet<&GridGraph> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(GridGraph::is_connected));
        // connected subsets of the 3x3 grid: a known count of 218
        assert_eq!(all.len(), 218);
    }

    #[test]
    fn oracles_agree_on_enumerated_family() {
        for g in enumerate_grid_graphs(3, 3, 9).unwrap() {
            let cycle = has_ham_cycle_grid(&g);
            let path = has_ham_path_grid(&g);
            assert!(!cycle || path, "{g:?}");
            let sym = Digraph::symmetric_orientation(&g);
            assert_eq!(has_directed_ham_path(&sym).unwrap(), path, "{g:?}");
        }
    }
}
