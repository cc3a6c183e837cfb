//! Acceptance checks, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::time::{Duration, Instant};

use rift_core::crystal_bonds::{
    brute_force_crystal_bonds, reduce_grid_to_dcb, solve_crystal_bonds, verify_bond_walk, DistanceModel,
};
use rift_core::generate::{case_seed, random_document, random_forest_board, random_tile_board, random_tree_board, rng};
use rift_core::graphs::{has_ham_path_grid, GridGraph};
use rift_core::hands_of_time::{solve_clock, verify_clock_solution, ClockInstance};
use rift_core::instance_io::{parse, serialize, Kind};
use rift_core::sweep::{run_sweep, Exec, Family, SweepReport};
use rift_core::tile_trial::{solve_tile_trial, verify_tile_path};
use rift_core::SearchOutcome;
use rand::Rng;

fn line(n: u32, pass: bool, detail: impl AsRef<str>) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {tag} {}", detail.as_ref());
}

fn sweep_criterion(n: u32, family: Family, limit: Duration) {
    let t = Instant::now();
    let report: SweepReport = run_sweep(family, &family.default_params(), Exec::Parallel(None)).unwrap();
    let elapsed = t.elapsed();
    let pass = report.all_pass() && elapsed < limit;
    let first = report
        .failures
        .first()
        .map(|c| format!("; first failure #{}: {}", c.index, c.detail))
        .unwrap_or_default();
    line(
        n,
        pass,
        format!(
            "{}: {}/{} agree, {} skipped, {} failed, {:.1?}{first}",
            family,
            report.passed,
            report.cases - report.skipped,
            report.skipped,
            report.failures.len(),
            elapsed
        ),
    );
    for note in &report.notes {
        println!("  {note}");
    }
    assert!(pass, "{report}");
}

#[test]
fn criterion_1_tile_trial_equivalence() {
    sweep_criterion(1, Family::Thm1, Duration::from_secs(300));
}

#[test]
fn criterion_2_crystal_bonds_equivalence() {
    sweep_criterion(2, Family::Thm3, Duration::from_secs(600));
}

#[test]
fn criterion_3_six_vertex_datapoint() {
    let g = GridGraph::new([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]).unwrap();
    let inst = reduce_grid_to_dcb(&g).unwrap();
    let optimum = brute_force_crystal_bonds(&inst.board).unwrap().length;
    let pass = g.len() == 6 && inst.threshold == 77 && optimum == 65.0 && has_ham_path_grid(&g);
    line(3, pass, format!("threshold {}, optimum {optimum}", inst.threshold));
    assert!(pass);
}

#[test]
fn criterion_4_hands_of_time_equivalence() {
    sweep_criterion(4, Family::Thm4, Duration::from_secs(300));
}

#[test]
fn criterion_5_no_stray_landings() {
    sweep_criterion(5, Family::Thm4Audit, Duration::from_secs(300));
}

#[test]
fn criterion_6_crystal_bonds_exactness() {
    sweep_criterion(6, Family::CbOracle, Duration::from_secs(300));
}

#[test]
fn criterion_7_geometry_oracle() {
    sweep_criterion(7, Family::GeoOracle, Duration::from_secs(300));
}

#[test]
fn criterion_8_round_trip_and_verifier_closure() {
    let mut round_trip_failures = Vec::new();
    for (k, kind) in Kind::ALL.into_iter().enumerate() {
        for i in 0..500u64 {
            let mut r = rng(case_seed(k as u64, i));
            let doc = random_document(&mut r, kind);
            let text = serialize(&doc);
            match parse(kind, &text) {
                Ok(back) if back == doc && serialize(&back) == text => {}
                other => round_trip_failures.push(format!("{kind} #{i}: {other:?}")),
            }
        }
    }

    let mut verifier_failures = Vec::new();
    let mut solved = [0usize; 3];
    for i in 0..200u64 {
        let mut r = rng(case_seed(99, i));
        let board = random_tile_board(&mut r, 4, 4);
        if let SearchOutcome::Found(path) = solve_tile_trial(&board, Some(1_000_000)) {
            solved[0] += 1;
            if let Err(e) = verify_tile_path(&board, &path) {
                verifier_failures.push(format!("tile #{i}: {e}"));
            }
        }
        let forest = random_forest_board(&mut r, 6, 5);
        if let Ok(walk) = brute_force_crystal_bonds(&forest) {
            solved[1] += 1;
            if let Err(e) = verify_bond_walk(&forest, &walk) {
                verifier_failures.push(format!("forest #{i}: {e}"));
            }
        }
        let model = if i % 2 == 0 { DistanceModel::GridSteps } else { DistanceModel::Euclidean };
        let tree = random_tree_board(&mut r, 7, 7, 6, model);
        match solve_crystal_bonds(&tree).map(|w| verify_bond_walk(&tree, &w)) {
            Ok(Ok(())) => solved[1] += 1,
            other => verifier_failures.push(format!("tree #{i}: {other:?}")),
        }
        let n = r.random_range(2..=10usize);
        let values: Vec<u64> = (0..n).map(|_| r.random_range(1..=n as u64 / 2)).collect();
        let clock = ClockInstance::dense(&values).unwrap();
        if let SearchOutcome::Found(sol) = solve_clock(&clock, None) {
            solved[2] += 1;
            if let Err(e) = verify_clock_solution(&clock, &sol) {
                verifier_failures.push(format!("clock #{i}: {e}"));
            }
        }
    }
    let pass = round_trip_failures.is_empty() && verifier_failures.is_empty();
    line(
        8,
        pass,
        format!(
            "{} documents round-tripped, {} failures; {} tile / {} bond / {} clock solutions verified, {} rejected",
            500 * Kind::ALL.len(),
            round_trip_failures.len(),
            solved[0],
            solved[1],
            solved[2],
            verifier_failures.len()
        ),
    );
    assert!(pass, "{round_trip_failures:?} {verifier_failures:?}");
}

#[test]
fn criterion_9_large_tree_board() {
    let mut details = Vec::new();
    let mut pass = true;
    for model in [DistanceModel::GridSteps, DistanceModel::Euclidean] {
        let board = random_tree_board(&mut rng(9), 30, 30, 40, model);
        let t = Instant::now();
        let walk = solve_crystal_bonds(&board).unwrap();
        let elapsed = t.elapsed();
        let ok = elapsed < Duration::from_secs(60) && verify_bond_walk(&board, &walk).is_ok();
        pass &= ok;
        details.push(format!("{model:?} length {:.3} in {elapsed:.1?}", walk.length));
    }
    line(9, pass, details.join(", "));
    assert!(pass);
}
