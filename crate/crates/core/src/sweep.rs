//! Equivalence sweeps over enumerated or seeded instance families.
//!
//! Each case is independent, so under the `parallel` feature the cases are
//! mapped on a rayon pool. Results are always collected in input order, so a
//! report does not depend on the execution mode.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::crystal_bonds::{
    apply_start_gadget, brute_force_crystal_bonds, decide_dcb, reduce_grid_to_dcb, solve_crystal_bonds,
    verify_bond_walk, BondBoard, DistanceModel, HamProperty, LENGTH_TOLERANCE,
};
use crate::generate::{case_seed, random_outdeg12_digraph, random_region, random_tree_board, rng};
use crate::geometry::{euclidean_geodesic, fine_grid_distance, GeometryError, Point};
use crate::graphs::{enumerate_grid_graphs, has_directed_ham_path, has_ham_cycle_grid, has_ham_path_grid, GraphError, GridGraph};
use crate::hands_of_time::{
    audit_stray_landings, check_digit_lemmas, intended_digraph, reduce_digraph_to_phot, solve_clock,
    verify_clock_solution,
};
use crate::instance_io::Document;
use crate::tile_trial::{reduce_grid_to_tile_trial, solve_tile_trial, verify_tile_path};
use crate::SearchOutcome;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Subdivision used by the geometry oracle sweep.
pub const FINE_GRID_K: u32 = 16;
/// Allowed ratio of fine-grid distance to geodesic.
pub const FINE_GRID_RATIO: f64 = 1.09;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon with the given thread count, or the global pool. Runs
    /// sequentially when the `parallel` feature is off.
    Parallel(Option<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Thm1,
    Thm3,
    Thm4,
    Thm4Audit,
    CbOracle,
    GeoOracle,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Thm1,
        Family::Thm3,
        Family::Thm4,
        Family::Thm4Audit,
        Family::CbOracle,
        Family::GeoOracle,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Thm1 => "thm1",
            Family::Thm3 => "thm3",
            Family::Thm4 => "thm4",
            Family::Thm4Audit => "thm4-audit",
            Family::CbOracle => "cb-oracle",
            Family::GeoOracle => "geo-oracle",
        }
    }

    /// Parameters the acceptance checks use for this family.
    pub fn default_params(self) -> SweepParams {
        let base = SweepParams {
            box_w: 3,
            box_h: 3,
            max_v: 8,
            count: 0,
            seed: 0,
            budget: None,
        };
        match self {
            Family::Thm1 => base,
            Family::Thm3 => SweepParams { max_v: 6, ..base },
            Family::Thm4 | Family::Thm4Audit => SweepParams {
                max_v: 7,
                count: 200,
                ..base
            },
            Family::CbOracle => SweepParams {
                box_w: 8,
                box_h: 8,
                max_v: 7,
                count: 100,
                ..base
            },
            Family::GeoOracle => SweepParams {
                box_w: 6,
                box_h: 6,
                count: 200,
                ..base
            },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| SweepError::UnknownFamily(s.to_string()))
    }
}

/// Family parameters. `box_w x box_h` bounds the enumerated or generated
/// instances, `max_v` caps vertices (or crystals for `cb-oracle`), and
/// `count` is the number of seeded cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepParams {
    pub box_w: usize,
    pub box_h: usize,
    pub max_v: usize,
    pub count: usize,
    pub seed: u64,
    pub budget: Option<u64>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown sweep family `{0}`")]
    UnknownFamily(String),
    #[error("invalid sweep parameters: {0}")]
    Params(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub index: usize,
    pub detail: String,
    pub document: Document,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub family: Family,
    pub cases: usize,
    pub passed: usize,
    /// Cases outside a construction's domain.
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
    /// Extra tallies worth printing, one line each.
    pub notes: Vec<String>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} cases, {} passed, {} failed, {} skipped",
            self.family,
            self.cases,
            self.passed,
            self.failures.len(),
            self.skipped
        )?;
        for note in &self.notes {
            writeln!(f, "  {note}")?;
        }
        write!(f, "{}", if self.all_pass() { "pass" } else { "fail" })
    }
}

enum Verdict {
    Pass,
    Skip,
    Fail(String, Document),
}

/// Maps `f` over `items`, keeping input order.
pub fn map_cases<T, R, F>(exec: Exec, items: &[T], f: F) -> Result<Vec<R>, SweepError>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => Ok(items.iter().enumerate().map(|(i, t)| f(i, t)).collect()),
        #[cfg(feature = "parallel")]
        Exec::Parallel(threads) => {
            use rayon::prelude::*;
            let run = || items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
            match threads {
                None => Ok(run()),
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| SweepError::ThreadPool(e.to_string()))?;
                    Ok(pool.install(run))
                }
            }
        }
        #[cfg(not(feature = "parallel"))]
        Exec::Parallel(_) => Ok(items.iter().enumerate().map(|(i, t)| f(i, t)).collect()),
    }
}

fn tally(family: Family, verdicts: Vec<Verdict>, notes: Vec<String>) -> SweepReport {
    let mut report = SweepReport {
        family,
        cases: verdicts.len(),
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
        notes,
    };
    for (index, v) in verdicts.into_iter().enumerate() {
        match v {
            Verdict::Pass => report.passed += 1,
            Verdict::Skip => report.skipped += 1,
            Verdict::Fail(detail, document) => report.failures.push(Counterexample {
                index,
                detail,
                document,
            }),
        }
    }
    report
}

pub fn run_sweep(family: Family, params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    match family {
        Family::Thm1 => thm1(params, exec),
        Family::Thm3 => thm3(params, exec),
        Family::Thm4 => thm4(params, exec),
        Family::Thm4Audit => thm4_audit(params, exec),
        Family::CbOracle => cb_oracle(params, exec),
        Family::GeoOracle => geo_oracle(params, exec),
    }
}

fn grid_family(params: &SweepParams) -> Result<Vec<GridGraph>, SweepError> {
    Ok(enumerate_grid_graphs(params.box_w, params.box_h, params.max_v)?.collect())
}

/// Tile Trial solvable iff the graph has a Hamiltonian cycle. Graphs below
/// three vertices are outside the reduction's domain.
pub fn thm1(params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    let graphs = grid_family(params)?;
    let verdicts = map_cases(exec, &graphs, |_, g| {
        let Ok(board) = reduce_grid_to_tile_trial(g) else {
            return Verdict::Skip;
        };
        let expected = has_ham_cycle_grid(g);
        let doc = || Document::GridGraph(g.clone());
        match solve_tile_trial(&board, params.budget) {
            SearchOutcome::Found(path) => {
                if let Err(e) = verify_tile_path(&board, &path) {
                    Verdict::Fail(format!("solver path rejected: {e}"), doc())
                } else if expected {
                    Verdict::Pass
                } else {
                    Verdict::Fail("tile trial solvable, no Hamiltonian cycle".into(), doc())
                }
            }
            SearchOutcome::Infeasible if !expected => Verdict::Pass,
            SearchOutcome::Infeasible => Verdict::Fail("tile trial unsolvable, Hamiltonian cycle exists".into(), doc()),
            SearchOutcome::BudgetExhausted => Verdict::Fail("node budget exhausted".into(), doc()),
        }
    })?;
    Ok(tally(Family::Thm1, verdicts, Vec::new()))
}

/// The plain reduction decides Hamiltonian path and the start-gadget
/// instance decides Hamiltonian cycle. The note counts agreement of the
/// gadget with the property it reports, which is Hamiltonian path when a
/// leftmost vertex has degree 1.
pub fn thm3(params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    let graphs = grid_family(params)?;
    let rows = map_cases(exec, &graphs, |_, g| {
        let Ok(inst) = reduce_grid_to_dcb(g) else {
            return (Verdict::Skip, None);
        };
        let doc = || Document::GridGraph(g.clone());
        let path = has_ham_path_grid(g);
        let cycle = has_ham_cycle_grid(g);
        let plain = match decide_dcb(&inst.board, inst.threshold) {
            Ok(b) => b,
            Err(e) => return (Verdict::Fail(format!("plain instance: {e}"), doc()), None),
        };
        let gadget = match apply_start_gadget(&inst, g) {
            Ok(x) => x,
            Err(e) => return (Verdict::Fail(format!("start gadget: {e}"), doc()), None),
        };
        let verdict = match decide_dcb(&gadget.board, gadget.threshold) {
            Ok(b) => b,
            Err(e) => return (Verdict::Fail(format!("gadget instance: {e}"), doc()), None),
        };
        let reported = match gadget.property {
            HamProperty::Path => path,
            HamProperty::Cycle => cycle,
        };
        let row = if plain != path {
            Verdict::Fail(format!("plain verdict {plain}, Hamiltonian path {path}"), doc())
        } else if verdict != cycle {
            Verdict::Fail(
                format!("gadget verdict {verdict}, Hamiltonian cycle {cycle} (gadget reports {:?})", gadget.property),
                doc(),
            )
        } else {
            Verdict::Pass
        };
        (row, Some(verdict == reported))
    })?;
    let checked = rows.iter().filter(|r| r.1.is_some()).count();
    let reported = rows.iter().filter(|r| r.1 == Some(true)).count();
    let notes = vec![format!("gadget verdict = its reported property on {reported}/{checked}")];
    Ok(tally(Family::Thm3, rows.into_iter().map(|r| r.0).collect(), notes))
}

fn thm4_digraphs(params: &SweepParams) -> Result<Vec<crate::graphs::Digraph>, SweepError> {
    if params.max_v < 2 {
        return Err(SweepError::Params("max-v must be at least 2"));
    }
    Ok((0..params.count as u64)
        .map(|i| {
            let mut r = rng(case_seed(params.seed, i));
            let v = r.random_range(2..=params.max_v);
            random_outdeg12_digraph(&mut r, v)
        })
        .collect())
}

/// Clock solvable iff the source digraph has a Hamiltonian path. Notes
/// tally the one-way implication and agreement with the intended digraph.
pub fn thm4(params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    let digraphs = thm4_digraphs(params)?;
    let rows = map_cases(exec, &digraphs, |_, d| {
        let doc = || Document::Digraph(d.clone());
        let cert = match reduce_digraph_to_phot(d) {
            Ok(c) => c,
            Err(e) => return (Verdict::Fail(format!("reduction: {e}"), doc()), None),
        };
        let path = match has_directed_ham_path(d) {
            Ok(b) => b,
            Err(e) => return (Verdict::Fail(e.to_string(), doc()), None),
        };
        let solvable = match solve_clock(&cert.clock, params.budget) {
            SearchOutcome::Found(sol) => {
                if let Err(e) = verify_clock_solution(&cert.clock, &sol) {
                    return (Verdict::Fail(format!("solver answer rejected: {e}"), doc()), None);
                }
                true
            }
            SearchOutcome::Infeasible => false,
            SearchOutcome::BudgetExhausted => {
                return (Verdict::Fail("node budget exhausted".into(), doc()), None)
            }
        };
        let intended = has_directed_ham_path(&intended_digraph(&cert)).ok();
        let extra = Some((!solvable || path, intended == Some(solvable)));
        if solvable == path {
            (Verdict::Pass, extra)
        } else {
            (
                Verdict::Fail(format!("clock solvable {solvable}, Hamiltonian path {path}"), doc()),
                extra,
            )
        }
    })?;
    let checked = rows.iter().filter(|r| r.1.is_some()).count();
    let implied = rows.iter().filter(|r| matches!(r.1, Some((true, _)))).count();
    let intended = rows.iter().filter(|r| matches!(r.1, Some((_, true)))).count();
    let notes = vec![
        format!("clock solvable implies Hamiltonian path on {implied}/{checked}"),
        format!("clock solvable = intended digraph has Hamiltonian path on {intended}/{checked}"),
    ];
    Ok(tally(Family::Thm4, rows.into_iter().map(|r| r.0).collect(), notes))
}

/// No clock arc outside the intended transitions, and the digit facts hold.
pub fn thm4_audit(params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    let digraphs = thm4_digraphs(params)?;
    let verdicts = map_cases(exec, &digraphs, |_, d| {
        let doc = || Document::Digraph(d.clone());
        let cert = match reduce_digraph_to_phot(d) {
            Ok(c) => c,
            Err(e) => return Verdict::Fail(format!("reduction: {e}"), doc()),
        };
        let stray = audit_stray_landings(&cert);
        let lemmas = check_digit_lemmas(&cert);
        if stray.is_empty() && lemmas.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail(
                format!("{} stray arcs, {} lemma violations", stray.len(), lemmas.len()),
                doc(),
            )
        }
    })?;
    Ok(tally(Family::Thm4Audit, verdicts, Vec::new()))
}

fn cb_boards(params: &SweepParams) -> Vec<BondBoard> {
    let w_max = params.box_w.max(1) as i32;
    let h_max = params.box_h.max(1) as i32;
    (0..params.count as u64)
        .map(|i| {
            let mut r = rng(case_seed(params.seed, i));
            let w = r.random_range(1..=w_max);
            let h = r.random_range(1..=h_max);
            let area = (w * h) as usize;
            let crystals = r.random_range(1..=params.max_v.clamp(1, area));
            let model = if i % 2 == 0 {
                DistanceModel::GridSteps
            } else {
                DistanceModel::Euclidean
            };
            random_tree_board(&mut r, w, h, crystals, model)
        })
        .collect()
}

/// Matching-based solver against the exhaustive oracle on tree boards.
/// Even-indexed cases use grid steps, odd ones Euclidean distance.
pub fn cb_oracle(params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    let boards = cb_boards(params);
    let verdicts = map_cases(exec, &boards, |_, b| {
        let doc = || Document::BondBoard(b.clone());
        let (fast, slow) = match (solve_crystal_bonds(b), brute_force_crystal_bonds(b)) {
            (Ok(f), Ok(s)) => (f, s),
            (Err(e), _) | (_, Err(e)) => return Verdict::Fail(e.to_string(), doc()),
        };
        if let Err(e) = verify_bond_walk(b, &fast) {
            return Verdict::Fail(format!("solver walk rejected: {e}"), doc());
        }
        let agree = match b.model() {
            DistanceModel::GridSteps => fast.length == slow.length,
            DistanceModel::Euclidean => (fast.length - slow.length).abs() <= LENGTH_TOLERANCE,
        };
        if agree {
            Verdict::Pass
        } else {
            Verdict::Fail(
                format!("solver length {}, optimum {}", fast.length, slow.length),
                doc(),
            )
        }
    })?;
    Ok(tally(Family::CbOracle, verdicts, Vec::new()))
}

/// Geodesic against the fine-grid upper bound between two tile centres of a
/// random, possibly disconnected region. A failing case is written as a
/// bond board whose two crystals mark the query tiles.
pub fn geo_oracle(params: &SweepParams, exec: Exec) -> Result<SweepReport, SweepError> {
    let w_max = params.box_w.max(2) as i32;
    let h_max = params.box_h.max(2) as i32;
    let cases: Vec<_> = (0..params.count as u64)
        .map(|i| {
            let mut r = rng(case_seed(params.seed, i));
            let w = r.random_range(2..=w_max);
            let h = r.random_range(2..=h_max);
            let density = r.random_range(0.4..0.95);
            let region = random_region(&mut r, w, h, density);
            let tiles: Vec<_> = region.tiles().iter().copied().collect();
            let a = *tiles.choose(&mut r).expect("non-empty");
            let b = *tiles.choose(&mut r).expect("non-empty");
            (region, a, b)
        })
        .collect();
    let verdicts = map_cases(exec, &cases, |_, (region, a, b)| {
        let doc = || {
            let board = BondBoard::new(region.clone(), vec![*a, *b], None, Vec::new(), DistanceModel::Euclidean)
                .or_else(|_| BondBoard::new(region.clone(), vec![*a], None, Vec::new(), DistanceModel::Euclidean))
                .expect("tiles of the region");
            Document::BondBoard(board)
        };
        let (p, q) = (Point::center(*a), Point::center(*b));
        match (euclidean_geodesic(region, p, q), fine_grid_distance(region, p, q, FINE_GRID_K)) {
            (Ok(g), Ok(f)) => {
                if g <= f + LENGTH_TOLERANCE && f <= FINE_GRID_RATIO * g + LENGTH_TOLERANCE {
                    Verdict::Pass
                } else {
                    Verdict::Fail(format!("geodesic {g}, fine grid {f}"), doc())
                }
            }
            (Err(GeometryError::Unreachable), Err(GeometryError::Unreachable)) => Verdict::Pass,
            (g, f) => Verdict::Fail(format!("geodesic {g:?}, fine grid {f:?}"), doc()),
        }
    })?;
    Ok(tally(Family::GeoOracle, verdicts, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(family: Family) -> SweepParams {
        SweepParams {
            count: 12,
            seed: 3,
            ..family.default_params()
        }
    }

    #[test]
    fn family_tags_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
        }
        assert!("thm2".parse::<Family>().is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        let thm1_params = SweepParams {
            box_w: 2,
            box_h: 3,
            ..Family::Thm1.default_params()
        };
        let r = thm1(&thm1_params, Exec::Sequential).unwrap();
        assert!(r.all_pass(), "{r}");
        assert!(r.skipped > 0);
        for f in [Family::Thm4Audit, Family::CbOracle, Family::GeoOracle] {
            let r = run_sweep(f, &small(f), Exec::Sequential).unwrap();
            assert!(r.all_pass(), "{r}");
        }
    }

    #[test]
    fn order_independent_of_execution() {
        let p = small(Family::Thm4);
        let a = thm4(&p, Exec::Sequential).unwrap();
        let b = thm4(&p, Exec::Parallel(Some(3))).unwrap();
        assert_eq!(a, b);
        let squares: Vec<usize> = map_cases(Exec::Parallel(None), &[1usize, 2, 3, 4], |i, x| i * 10 + x * x).unwrap();
        assert_eq!(squares, vec![1, 14, 29, 46]);
    }
}
