use std::fmt;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rift_core::crystal_bonds::{
    apply_start_gadget, brute_force_crystal_bonds, reduce_grid_to_dcb, solve_crystal_bonds, verify_bond_walk,
    BondBoard, BondError, BondWalk, DistanceModel, HamProperty, LENGTH_TOLERANCE,
};
use rift_core::generate::{case_seed, random_document, rng};
use rift_core::graphs::{Digraph, GridGraph};
use rift_core::hands_of_time::{reduce_digraph_to_phot, solve_clock, verify_clock_solution, ClockInstance, ClockSolution};
use rift_core::instance_io::{serialize, IoError, Kind, TextFormat};
use rift_core::render::{render_bond_board, render_clock, render_grid_graph, render_tile_board};
use rift_core::sweep::{run_sweep, Exec, Family, SweepParams};
use rift_core::tile_trial::{reduce_grid_to_tile_trial, solve_tile_trial, verify_tile_path, TileBoard, TilePath};
use rift_core::SearchOutcome;

const OK: u8 = 0;
const UNSOLVABLE: u8 = 1;
const VERIFY_FAILED: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "rift", version, about = "Solve, reduce, verify and sweep the temporal rift puzzles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a solution document, or UNSOLVABLE.
    Solve {
        puzzle: Puzzle,
        /// Instance file, `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        /// Override the distance model of a bond board.
        #[arg(long)]
        model: Option<Model>,
        /// Report bond walks longer than this as unsolvable.
        #[arg(long)]
        threshold: Option<u64>,
        /// Node budget for the search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build the hardness-reduction instance from a source graph.
    Reduce {
        target: Target,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check a solution against its instance.
    Verify {
        puzzle: Puzzle,
        instance: String,
        solution: String,
        #[arg(long)]
        model: Option<Model>,
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Emit random documents of one kind, separated by `---` lines.
    Gen {
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Run an equivalence family: thm1, thm3, thm4, thm4-audit, cb-oracle, geo-oracle.
    Sweep {
        family: String,
        /// Box for enumerated or generated instances, as WxH.
        #[arg(long = "box")]
        bounds: Option<String>,
        #[arg(long)]
        max_v: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print an ASCII picture of a grid graph, board or clock.
    Render {
        kind: String,
        #[arg(default_value = "-")]
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Puzzle {
    Tile,
    Bonds,
    Clock,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// Grid graph to Tile Trial.
    Tile,
    /// Grid graph to Disconnected Crystal Bonds with free start.
    Dcb,
    /// Grid graph to Disconnected Crystal Bonds with a start tile.
    DcbStart,
    /// Digraph to Partial Hands of Time, as a certificate.
    Clock,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Grid,
    Euclid,
}

impl From<Model> for DistanceModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Grid => DistanceModel::GridSteps,
            Model::Euclid => DistanceModel::Euclidean,
        }
    }
}

/// Failure carrying the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl fmt::Display) -> Self {
        Failure {
            code: USAGE,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::usage(e)
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
    }
}

fn load<T: TextFormat>(path: &str) -> Result<T, Failure> {
    Ok(T::from_text(&read_input(path)?)?)
}

/// A bond board, optionally preceded by the `threshold` and `property`
/// lines that `reduce dcb` prints. The header threshold applies unless one
/// is given on the command line.
fn load_board(path: &str, model: Option<Model>, threshold: Option<u64>) -> Result<(BondBoard, Option<u64>), Failure> {
    let text = read_input(path)?;
    let mut header_threshold = None;
    let mut body = text.as_str();
    loop {
        let (first, rest) = body.split_once('\n').unwrap_or((body, ""));
        if let Some(t) = first.strip_prefix("threshold ") {
            let t = t.trim().parse().map_err(|_| Failure::usage(format!("bad threshold line `{first}`")))?;
            header_threshold = Some(t);
        } else if !first.starts_with("property ") {
            break;
        }
        body = rest;
    }
    let board = BondBoard::from_text(body)?;
    let board = match model {
        Some(m) => board.with_model(m.into()),
        None => board,
    };
    Ok((board, threshold.or(header_threshold)))
}

/// Exact optimum for any board: the matching solver when the bonds are
/// connected, the exhaustive search otherwise.
fn best_walk(board: &BondBoard) -> Result<Option<BondWalk>, Failure> {
    let walk = match solve_crystal_bonds(board) {
        Err(BondError::DisconnectedBonds) => brute_force_crystal_bonds(board),
        other => other,
    };
    match walk {
        Ok(w) => Ok(Some(w)),
        Err(BondError::UnreachableCrystal(_)) => Ok(None),
        Err(e) => Err(Failure::usage(e)),
    }
}

fn over(length: f64, threshold: Option<u64>) -> bool {
    threshold.is_some_and(|t| length > t as f64 + LENGTH_TOLERANCE)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            puzzle,
            input,
            model,
            threshold,
            budget,
        } => {
            let outcome = match puzzle {
                Puzzle::Tile => {
                    let board: TileBoard = load(&input)?;
                    solve_tile_trial(&board, budget).map_text()
                }
                Puzzle::Clock => {
                    let clock: ClockInstance = load(&input)?;
                    solve_clock(&clock, budget).map_text()
                }
                Puzzle::Bonds => {
                    let (board, threshold) = load_board(&input, model, threshold)?;
                    match best_walk(&board)? {
                        Some(w) if !over(w.length, threshold) => SearchOutcome::Found(w.to_text()),
                        _ => SearchOutcome::Infeasible,
                    }
                }
            };
            Ok(match outcome {
                SearchOutcome::Found(text) => {
                    print!("{text}");
                    OK
                }
                SearchOutcome::Infeasible => {
                    println!("UNSOLVABLE");
                    UNSOLVABLE
                }
                SearchOutcome::BudgetExhausted => {
                    println!("UNKNOWN budget exhausted");
                    UNSOLVABLE
                }
            })
        }
        Command::Reduce { target, input } => {
            match target {
                Target::Tile => {
                    let g: GridGraph = load(&input)?;
                    let board = reduce_grid_to_tile_trial(&g).map_err(Failure::usage)?;
                    print!("{}", board.to_text());
                }
                Target::Dcb | Target::DcbStart => {
                    let g: GridGraph = load(&input)?;
                    let mut inst = reduce_grid_to_dcb(&g).map_err(Failure::usage)?;
                    if matches!(target, Target::DcbStart) {
                        inst = apply_start_gadget(&inst, &g).map_err(Failure::usage)?;
                    }
                    let property = match inst.property {
                        HamProperty::Path => "path",
                        HamProperty::Cycle => "cycle",
                    };
                    println!("threshold {}", inst.threshold);
                    println!("property {property}");
                    print!("{}", inst.board.to_text());
                }
                Target::Clock => {
                    let d: Digraph = load(&input)?;
                    let cert = reduce_digraph_to_phot(&d).map_err(Failure::usage)?;
                    print!("{}", cert.to_text());
                }
            }
            Ok(OK)
        }
        Command::Verify {
            puzzle,
            instance,
            solution,
            model,
            threshold,
        } => {
            let verdict: Result<(), String> = match puzzle {
                Puzzle::Tile => {
                    let board: TileBoard = load(&instance)?;
                    let path: TilePath = load(&solution)?;
                    verify_tile_path(&board, &path).map_err(|e| e.to_string())
                }
                Puzzle::Clock => {
                    let clock: ClockInstance = load(&instance)?;
                    let sol: ClockSolution = load(&solution)?;
                    verify_clock_solution(&clock, &sol).map_err(|e| e.to_string())
                }
                Puzzle::Bonds => {
                    let (board, threshold) = load_board(&instance, model, threshold)?;
                    let walk: BondWalk = load(&solution)?;
                    let checked = verify_bond_walk(&board, &walk).map_err(|e| e.to_string());
                    if checked.is_ok() && over(walk.length, threshold) {
                        println!("OVER THRESHOLD {}", walk.length);
                        return Ok(UNSOLVABLE);
                    }
                    checked
                }
            };
            Ok(match verdict {
                Ok(()) => {
                    println!("OK");
                    OK
                }
                Err(e) => {
                    println!("INVALID {e}");
                    VERIFY_FAILED
                }
            })
        }
        Command::Gen { kind, seed, count } => {
            let kind: Kind = kind.parse()?;
            for i in 0..count {
                if i > 0 {
                    println!("---");
                }
                let doc = random_document(&mut rng(case_seed(seed, i)), kind);
                print!("{}", serialize(&doc));
            }
            Ok(OK)
        }
        Command::Sweep {
            family,
            bounds,
            max_v,
            count,
            seed,
            budget,
            jobs,
        } => {
            let family: Family = family.parse().map_err(Failure::usage)?;
            let mut params: SweepParams = family.default_params();
            if let Some(b) = bounds {
                let (w, h) = parse_box(&b)?;
                params.box_w = w;
                params.box_h = h;
            }
            params.max_v = max_v.unwrap_or(params.max_v);
            params.count = count.unwrap_or(params.count);
            params.seed = seed.unwrap_or(params.seed);
            params.budget = budget.or(params.budget);
            let exec = match jobs {
                Some(0) => return Err(Failure::usage("--jobs must be positive")),
                Some(1) => Exec::Sequential,
                n => Exec::Parallel(n),
            };
            let report = run_sweep(family, &params, exec).map_err(Failure::usage)?;
            println!("{report}");
            Ok(match report.failures.first() {
                None => OK,
                Some(c) => {
                    println!("first counterexample (case {}): {}", c.index, c.detail);
                    println!("@{}", c.document.kind());
                    print!("{}", serialize(&c.document));
                    VERIFY_FAILED
                }
            })
        }
        Command::Render { kind, input } => {
            let picture = match kind.parse()? {
                Kind::GridGraph => render_grid_graph(&load(&input)?),
                Kind::TileBoard => render_tile_board(&load(&input)?),
                Kind::BondBoard => render_bond_board(&load(&input)?),
                Kind::Clock => render_clock(&load(&input)?),
                other => return Err(Failure::usage(format!("cannot render `{other}`"))),
            };
            print!("{picture}");
            Ok(OK)
        }
    }
}

trait MapText {
    fn map_text(self) -> SearchOutcome<String>;
}

impl<T: TextFormat> MapText for SearchOutcome<T> {
    fn map_text(self) -> SearchOutcome<String> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(t.to_text()),
            SearchOutcome::Infeasible => SearchOutcome::Infeasible,
            SearchOutcome::BudgetExhausted => SearchOutcome::BudgetExhausted,
        }
    }
}

fn parse_box(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(format!("--box expects WxH, got `{s}`"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w = w.trim().parse().map_err(|_| bad())?;
    let h = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
