//! Hands of Time: a clock of `N` positions, some holding values. Select an
//! occupied node, then repeatedly jump exactly the last selected value
//! clockwise or counter-clockwise; consumed nodes may not be selected again.
//!
//! Instances are sparse: positions and values are arbitrary-precision and
//! nothing ever iterates over the empty positions.

mod reduction;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graphs::Digraph;
use crate::SearchOutcome;

pub use reduction::{
    audit_stray_landings, check_digit_lemmas, d_jk, intended_digraph, reduce_digraph_to_phot,
    repunit_prefix, LemmaViolation, NodeLabel, ReductionCertificate, SecondaryCase, Verdicts,
};

/// Instances up to this many occupied nodes are solved by subset DP.
pub const SUBSET_DP_LIMIT: usize = 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClockError {
    #[error("the clock needs at least 2 positions")]
    CircumferenceTooSmall,
    #[error("position {0} is outside the clock")]
    PositionOutOfRange(BigUint),
    #[error("value {value} at position {position} is outside [1, N/2]")]
    ValueOutOfRange { position: BigUint, value: BigUint },
    #[error("reduction precondition violated: {0}")]
    ReductionPrecondition(&'static str),
    #[error("constructed nodes collide at position {0}")]
    Collision(BigUint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Cw,
    Ccw,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Cw => "cw",
            Direction::Ccw => "ccw",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockInstance {
    n: BigUint,
    occupied: BTreeMap<BigUint, BigUint>,
}

impl ClockInstance {
    pub fn new(n: BigUint, occupied: BTreeMap<BigUint, BigUint>) -> Result<Self, ClockError> {
        if n < BigUint::from(2u8) {
            return Err(ClockError::CircumferenceTooSmall);
        }
        let half = &n >> 1;
        for (p, m) in &occupied {
            if *p >= n {
                return Err(ClockError::PositionOutOfRange(p.clone()));
            }
            if m.is_zero() || *m > half {
                return Err(ClockError::ValueOutOfRange {
                    position: p.clone(),
                    value: m.clone(),
                });
            }
        }
        Ok(ClockInstance { n, occupied })
    }

    /// Every position occupied, values listed in clock order.
    pub fn dense(values: &[u64]) -> Result<Self, ClockError> {
        let occupied = values
            .iter()
            .enumerate()
            .map(|(p, &m)| (BigUint::from(p), BigUint::from(m)))
            .collect();
        ClockInstance::new(BigUint::from(values.len()), occupied)
    }

    pub fn circumference(&self) -> &BigUint {
        &self.n
    }

    pub fn occupied(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.occupied
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn is_dense(&self) -> bool {
        BigUint::from(self.occupied.len()) == self.n
    }

    pub fn value_at(&self, p: &BigUint) -> Option<&BigUint> {
        self.occupied.get(p)
    }

    /// Landing position of a jump of the value at `p`.
    pub fn landing(&self, p: &BigUint, m: &BigUint, dir: Direction) -> BigUint {
        match dir {
            Direction::Cw => (p + m) % &self.n,
            Direction::Ccw => (p + &self.n - m % &self.n) % &self.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClockSolution {
    /// Selected positions in order, each with the direction of the jump that
    /// follows it. The last direction is unused.
    pub moves: Vec<(BigUint, Direction)>,
}

/// The move graph of an instance: one vertex per occupied node, in
/// increasing position order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockGraph {
    pub positions: Vec<BigUint>,
    pub digraph: Digraph,
    /// `jumps[u] = [cw target, ccw target]`, each if occupied.
    pub jumps: Vec<[Option<usize>; 2]>,
}

/// Arc `u -> w` whenever `w` is occupied and one jump from `u`.
pub fn clock_to_digraph(c: &ClockInstance) -> ClockGraph {
    let positions: Vec<BigUint> = c.occupied.keys().cloned().collect();
    let index: BTreeMap<&BigUint, usize> = positions.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut jumps = Vec::with_capacity(positions.len());
    let mut arcs = BTreeSet::new();
    for (u, (p, m)) in c.occupied.iter().enumerate() {
        let mut pair = [None, None];
        for (slot, dir) in [Direction::Cw, Direction::Ccw].into_iter().enumerate() {
            let target = c.landing(p, m, dir);
            if let Some(&w) = index.get(&target) {
                pair[slot] = Some(w);
                arcs.insert((u, w));
            }
        }
        jumps.push(pair);
    }
    let digraph = Digraph::new(positions.len(), arcs.into_iter().collect())
        .expect("jumps are nonzero and arcs deduplicated");
    ClockGraph {
        positions,
        digraph,
        jumps,
    }
}

/// Exact solver. Subset DP over (consumed set, last node) up to
/// [`SUBSET_DP_LIMIT`] nodes, budgeted backtracking beyond.
pub fn solve_clock(c: &ClockInstance, node_budget: Option<u64>) -> SearchOutcome<ClockSolution> {
    let g = clock_to_digraph(c);
    let order = if g.positions.len() <= SUBSET_DP_LIMIT {
        dp_order(&g)
    } else {
        match backtrack_order(&g, node_budget) {
            Ok(o) => o,
            Err(()) => return SearchOutcome::BudgetExhausted,
        }
    };
    match order {
        Some(order) => SearchOutcome::Found(solution_from_order(&g, &order)),
        None => SearchOutcome::Infeasible,
    }
}

fn solution_from_order(g: &ClockGraph, order: &[usize]) -> ClockSolution {
    let moves = order
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let dir = match order.get(i + 1) {
                Some(&w) if g.jumps[u][0] == Some(w) => Direction::Cw,
                Some(_) => Direction::Ccw,
                None => Direction::Cw,
            };
            (g.positions[u].clone(), dir)
        })
        .collect();
    ClockSolution { moves }
}

fn dp_order(g: &ClockGraph) -> Option<Vec<usize>> {
    let n = g.positions.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let succ: Vec<u32> = g
        .jumps
        .iter()
        .map(|pair| pair.iter().flatten().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    // ends[mask]: nodes that can end a path consuming exactly `mask`
    let mut ends = vec![0u32; 1 << n];
    for u in 0..n {
        ends[1 << u] = 1 << u;
    }
    for mask in 1usize..1 << n {
        let mut e = ends[mask];
        while e != 0 {
            let u = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = succ[u] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    let full = (1usize << n) - 1;
    if ends[full] == 0 {
        return None;
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut last = ends[full].trailing_zeros() as usize;
    loop {
        order.push(last);
        mask &= !(1 << last);
        if mask == 0 {
            break;
        }
        let mut cands = ends[mask];
        let prev = loop {
            let p = cands.trailing_zeros() as usize;
            if succ[p] >> last & 1 == 1 {
                break p;
            }
            cands &= cands - 1;
        };
        last = prev;
    }
    order.reverse();
    Some(order)
}

fn backtrack_order(g: &ClockGraph, node_budget: Option<u64>) -> Result<Option<Vec<usize>>, ()> {
    let n = g.positions.len();
    let mut indeg = vec![0usize; n];
    for pair in &g.jumps {
        let mut seen = BTreeSet::new();
        for &w in pair.iter().flatten() {
            if seen.insert(w) {
                indeg[w] += 1;
            }
        }
    }
    // a path can start at no more than one node without in-arcs
    let sources: Vec<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    if sources.len() > 1 {
        return Ok(None);
    }
    let starts: Vec<usize> = if sources.is_empty() { (0..n).collect() } else { sources };
    let mut search = Backtrack {
        g,
        used: vec![false; n],
        path: Vec::with_capacity(n),
        budget: node_budget,
        spent: 0,
    };
    for s in starts {
        search.used[s] = true;
        search.path.push(s);
        if search.extend()? {
            return Ok(Some(search.path));
        }
        search.path.pop();
        search.used[s] = false;
    }
    Ok(None)
}

struct Backtrack<'a> {
    g: &'a ClockGraph,
    used: Vec<bool>,
    path: Vec<usize>,
    budget: Option<u64>,
    spent: u64,
}

impl Backtrack<'_> {
    fn extend(&mut self) -> Result<bool, ()> {
        self.spent += 1;
        if self.budget.is_some_and(|b| self.spent > b) {
            return Err(());
        }
        if self.path.len() == self.used.len() {
            return Ok(true);
        }
        let u = *self.path.last().expect("non-empty");
        let mut tried = [usize::MAX; 2];
        for (i, w) in self.g.jumps[u].iter().enumerate() {
            let Some(w) = *w else { continue };
            if self.used[w] || tried.contains(&w) {
                continue;
            }
            tried[i] = w;
            self.used[w] = true;
            self.path.push(w);
            if self.extend()? {
                return Ok(true);
            }
            self.path.pop();
            self.used[w] = false;
        }
        Ok(false)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClockViolation {
    #[error("move {index} selects {position}, which is empty")]
    EmptyNodeSelected { index: usize, position: BigUint },
    #[error("move {index} does not land {expected}")]
    IllegalMove { index: usize, expected: BigUint },
    #[error("{missing} occupied nodes were never selected")]
    Incomplete { missing: usize },
}

/// Checks legality of every jump and that every occupied node is consumed.
pub fn verify_clock_solution(c: &ClockInstance, s: &ClockSolution) -> Result<(), ClockViolation> {
    let mut consumed = BTreeSet::new();
    for (index, (p, _)) in s.moves.iter().enumerate() {
        if index > 0 {
            let (prev, dir) = &s.moves[index - 1];
            let m = &c.occupied[prev];
            let expected = c.landing(prev, m, *dir);
            if *p != expected {
                return Err(ClockViolation::IllegalMove { index, expected });
            }
        }
        if !c.occupied.contains_key(p) || !consumed.insert(p.clone()) {
            return Err(ClockViolation::EmptyNodeSelected {
                index,
                position: p.clone(),
            });
        }
    }
    let missing = c.occupied.len() - consumed.len();
    if missing > 0 {
        return Err(ClockViolation::Incomplete { missing });
    }
    Ok(())
}

/// Dense clock with values uniform in `[1, n/2]`.
pub fn gen_random_clock(n: usize, seed: u64) -> Result<ClockInstance, ClockError> {
    if n < 2 {
        return Err(ClockError::CircumferenceTooSmall);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<u64> = (0..n).map(|_| rng.random_range(1..=(n / 2) as u64)).collect();
    ClockInstance::dense(&values)
}

/// Dense clock with a planted solution along a random selection order.
pub fn gen_solvable_clock(n: usize, seed: u64) -> Result<ClockInstance, ClockError> {
    if n < 2 {
        return Err(ClockError::CircumferenceTooSmall);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let last = rng.random_range(1..=(n / 2) as u64);
    Ok(plant_clock(&order, last)?.0)
}

/// Dense clock whose nodes can be selected in `order`: every value is the
/// shorter distance to its successor, the last node gets `last_value`.
pub fn plant_clock(order: &[usize], last_value: u64) -> Result<(ClockInstance, ClockSolution), ClockError> {
    let n = order.len();
    let mut values = vec![0u64; n];
    let mut moves = Vec::with_capacity(n);
    for (i, &u) in order.iter().enumerate() {
        let dir = match order.get(i + 1) {
            Some(&w) => {
                let cw = (w + n - u) % n;
                let ccw = n - cw;
                if cw <= ccw {
                    values[u] = cw as u64;
                    Direction::Cw
                } else {
                    values[u] = ccw as u64;
                    Direction::Ccw
                }
            }
            None => {
                values[u] = last_value;
                Direction::Cw
            }
        };
        moves.push((BigUint::from(u), dir));
    }
    Ok((ClockInstance::dense(&values)?, ClockSolution { moves }))
}

pub(crate) fn pow10(e: usize) -> BigUint {
    let mut p = BigUint::one();
    let ten = BigUint::from(10u8);
    for _ in 0..e {
        p *= &ten;
    }
    p
}
