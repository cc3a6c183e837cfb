//! Line-oriented text formats for every instance, solution and certificate.
//!
//! Serialization is deterministic and `parse(serialize(x)) == x`. Parsing
//! re-runs every constructor, so invariant violations are reported rather
//! than silently accepted. Numbers are plain decimal; big integers are never
//! grouped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::crystal_bonds::{BondBoard, BondWalk, DistanceModel};
use crate::geometry::TileRegion;
use crate::graphs::{Digraph, GridGraph};
use crate::hands_of_time::{
    reduce_digraph_to_phot, ClockError, ClockInstance, ClockSolution, Direction, NodeLabel,
    ReductionCertificate, Verdicts,
};
use crate::tile_trial::{TileBoard, TilePath, TileError};
use crate::Coord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unknown document kind `{0}`")]
    UnknownKind(String),
}

fn syntax(line: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        message: message.into(),
    }
}

fn invariant(e: impl fmt::Display) -> IoError {
    IoError::Invariant(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    GridGraph,
    Digraph,
    TileBoard,
    TilePath,
    BondBoard,
    BondWalk,
    Clock,
    ClockSolution,
    Certificate,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::GridGraph,
        Kind::Digraph,
        Kind::TileBoard,
        Kind::TilePath,
        Kind::BondBoard,
        Kind::BondWalk,
        Kind::Clock,
        Kind::ClockSolution,
        Kind::Certificate,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Kind::GridGraph => "grid-graph",
            Kind::Digraph => "digraph",
            Kind::TileBoard => "tile-board",
            Kind::TilePath => "tile-path",
            Kind::BondBoard => "bond-board",
            Kind::BondWalk => "bond-walk",
            Kind::Clock => "clock",
            Kind::ClockSolution => "clock-solution",
            Kind::Certificate => "certificate",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Kind {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| IoError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    GridGraph(GridGraph),
    Digraph(Digraph),
    TileBoard(TileBoard),
    TilePath(TilePath),
    BondBoard(BondBoard),
    BondWalk(BondWalk),
    Clock(ClockInstance),
    ClockSolution(ClockSolution),
    Certificate(ReductionCertificate),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::GridGraph(_) => Kind::GridGraph,
            Document::Digraph(_) => Kind::Digraph,
            Document::TileBoard(_) => Kind::TileBoard,
            Document::TilePath(_) => Kind::TilePath,
            Document::BondBoard(_) => Kind::BondBoard,
            Document::BondWalk(_) => Kind::BondWalk,
            Document::Clock(_) => Kind::Clock,
            Document::ClockSolution(_) => Kind::ClockSolution,
            Document::Certificate(_) => Kind::Certificate,
        }
    }
}

/// A type with a text format.
pub trait TextFormat: Sized {
    fn to_text(&self) -> String;
    fn from_text(text: &str) -> Result<Self, IoError>;
}

pub fn serialize(doc: &Document) -> String {
    match doc {
        Document::GridGraph(x) => x.to_text(),
        Document::Digraph(x) => x.to_text(),
        Document::TileBoard(x) => x.to_text(),
        Document::TilePath(x) => x.to_text(),
        Document::BondBoard(x) => x.to_text(),
        Document::BondWalk(x) => x.to_text(),
        Document::Clock(x) => x.to_text(),
        Document::ClockSolution(x) => x.to_text(),
        Document::Certificate(x) => x.to_text(),
    }
}

pub fn parse(kind: Kind, text: &str) -> Result<Document, IoError> {
    Ok(match kind {
        Kind::GridGraph => Document::GridGraph(GridGraph::from_text(text)?),
        Kind::Digraph => Document::Digraph(Digraph::from_text(text)?),
        Kind::TileBoard => Document::TileBoard(TileBoard::from_text(text)?),
        Kind::TilePath => Document::TilePath(TilePath::from_text(text)?),
        Kind::BondBoard => Document::BondBoard(BondBoard::from_text(text)?),
        Kind::BondWalk => Document::BondWalk(BondWalk::from_text(text)?),
        Kind::Clock => Document::Clock(ClockInstance::from_text(text)?),
        Kind::ClockSolution => Document::ClockSolution(ClockSolution::from_text(text)?),
        Kind::Certificate => Document::Certificate(ReductionCertificate::from_text(text)?),
    })
}

/// Non-blank lines with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty())
}

fn fields<const K: usize>(line: usize, s: &str) -> Result<[&str; K], IoError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| syntax(line, format!("expected {K} fields, found {}", p.len())))
}

fn num<T: FromStr>(line: usize, s: &str) -> Result<T, IoError> {
    s.parse()
        .map_err(|_| syntax(line, format!("`{s}` is not a valid number")))
}

fn coord(line: usize, s: &str) -> Result<Coord, IoError> {
    let [x, y] = fields::<2>(line, s)?;
    Ok((num(line, x)?, num(line, y)?))
}

fn coords(text: &str) -> Result<Vec<Coord>, IoError> {
    lines(text).map(|(n, l)| coord(n, l)).collect()
}

impl TextFormat for GridGraph {
    fn to_text(&self) -> String {
        self.vertices().iter().map(|(x, y)| format!("{x} {y}\n")).collect()
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        GridGraph::new(coords(text)?).map_err(invariant)
    }
}

impl TextFormat for Digraph {
    fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.vertex_count());
        for (a, b) in self.arcs() {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let mut it = lines(text);
        let (n, first) = it.next().ok_or_else(|| syntax(1, "missing vertex count"))?;
        let v = num(n, first)?;
        let arcs = it
            .map(|(n, l)| {
                let [a, b] = fields::<2>(n, l)?;
                Ok((num(n, a)?, num(n, b)?))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Digraph::new(v, arcs).map_err(invariant)
    }
}

impl TextFormat for TilePath {
    fn to_text(&self) -> String {
        self.steps.iter().map(|(x, y)| format!("{x} {y}\n")).collect()
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        Ok(TilePath { steps: coords(text)? })
    }
}

/// Optional `origin X Y` header naming the bottom-left cell of the grid.
fn origin_line(min_x: i32, min_y: i32) -> String {
    if (min_x, min_y) == (0, 0) {
        String::new()
    } else {
        format!("origin {min_x} {min_y}\n")
    }
}

/// Reads rows of characters, top row first, into `(coord, char)` cells,
/// skipping the void character `#`.
fn read_grid(rows: &[(usize, &str)], origin: Coord) -> Vec<(usize, Coord, char)> {
    let top = origin.1 + rows.len() as i32 - 1;
    let mut cells = Vec::new();
    for (r, &(line, row)) in rows.iter().enumerate() {
        for (c, ch) in row.chars().enumerate() {
            if ch != '#' {
                cells.push((line, (origin.0 + c as i32, top - r as i32), ch));
            }
        }
    }
    cells
}

fn parse_origin(line: usize, s: &str) -> Result<Option<Coord>, IoError> {
    match s.strip_prefix("origin ") {
        Some(rest) => Ok(Some(coord(line, rest)?)),
        None => Ok(None),
    }
}

impl TextFormat for TileBoard {
    fn to_text(&self) -> String {
        let (min_x, min_y, max_x, max_y) = self.bounds();
        let mut s = origin_line(min_x, min_y);
        for y in (min_y..=max_y).rev() {
            for x in min_x..=max_x {
                let c = (x, y);
                let ch = match self.capacity(c) {
                    None => '#',
                    Some(_) if c == self.start() => 'S',
                    Some(_) if c == self.finish() => 'F',
                    Some(1) if self.crystals().contains(&c) => '*',
                    Some(_) if self.crystals().contains(&c) => '@',
                    Some(1) => '.',
                    Some(_) => '2',
                };
                s.push(ch);
            }
            s.push('\n');
        }
        s
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let mut rows: Vec<(usize, &str)> = lines(text).collect();
        let mut origin = (0, 0);
        if let Some(&(n, first)) = rows.first() {
            if let Some(o) = parse_origin(n, first)? {
                origin = o;
                rows.remove(0);
            }
        }
        let mut tiles = BTreeMap::new();
        let mut crystals = BTreeSet::new();
        let (mut start, mut finish) = (None, None);
        for (line, c, ch) in read_grid(&rows, origin) {
            let cap = match ch {
                '.' | 'S' | 'F' | '*' => 1,
                '2' | '@' => 2,
                other => return Err(syntax(line, format!("unknown cell `{other}`"))),
            };
            tiles.insert(c, cap);
            if ch == '*' || ch == '@' {
                crystals.insert(c);
            }
            let slot = match ch {
                'S' => &mut start,
                'F' => &mut finish,
                _ => continue,
            };
            if slot.replace(c).is_some() {
                return Err(IoError::Invariant(format!("the board has more than one `{ch}` cell")));
            }
        }
        let start = start.ok_or_else(|| IoError::Invariant("the board has no `S` cell".into()))?;
        let finish = finish.ok_or_else(|| IoError::Invariant("the board has no `F` cell".into()))?;
        TileBoard::new(tiles, crystals, start, finish).map_err(|e: TileError| invariant(e))
    }
}

impl TextFormat for BondBoard {
    fn to_text(&self) -> String {
        let model = match self.model() {
            DistanceModel::GridSteps => "grid",
            DistanceModel::Euclidean => "euclid",
        };
        let (min_x, min_y, max_x, max_y) = self.region().bounds();
        let mut s = format!("model {model}\n");
        s.push_str(&origin_line(min_x, min_y));
        match self.start() {
            Some((x, y)) => {
                let _ = writeln!(s, "start {x} {y}");
            }
            None => s.push_str("start free\n"),
        }
        s.push_str("region\n");
        for y in (min_y..=max_y).rev() {
            for x in min_x..=max_x {
                s.push(if self.region().contains_tile((x, y)) { '.' } else { '#' });
            }
            s.push('\n');
        }
        s.push_str("end\n");
        for (x, y) in self.crystals() {
            let _ = writeln!(s, "crystal {x} {y}");
        }
        for (a, b) in self.bonds() {
            let _ = writeln!(s, "bond {a} {b}");
        }
        s
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let mut model = None;
        let mut origin = (0, 0);
        let mut start = None;
        let mut rows = Vec::new();
        let mut crystals = Vec::new();
        let mut bonds = Vec::new();
        let mut in_region = false;
        let mut saw_region = false;
        for (n, l) in lines(text) {
            if in_region {
                if l == "end" {
                    in_region = false;
                } else {
                    rows.push((n, l));
                }
                continue;
            }
            let (key, rest) = l.split_once(' ').unwrap_or((l, ""));
            match key {
                "model" => {
                    model = Some(match rest {
                        "grid" => DistanceModel::GridSteps,
                        "euclid" => DistanceModel::Euclidean,
                        other => return Err(syntax(n, format!("unknown model `{other}`"))),
                    })
                }
                "origin" => origin = coord(n, rest)?,
                "start" => {
                    start = Some(if rest == "free" { None } else { Some(coord(n, rest)?) });
                }
                "region" if !saw_region => {
                    in_region = true;
                    saw_region = true;
                }
                "crystal" => crystals.push(coord(n, rest)?),
                "bond" => {
                    let [a, b] = fields::<2>(n, rest)?;
                    bonds.push((num(n, a)?, num(n, b)?));
                }
                other => return Err(syntax(n, format!("unexpected `{other}`"))),
            }
        }
        if in_region {
            return Err(syntax(text.lines().count(), "region block is not closed by `end`"));
        }
        let model = model.ok_or_else(|| syntax(1, "missing `model` line"))?;
        let start = start.ok_or_else(|| syntax(1, "missing `start` line"))?;
        let mut tiles = Vec::new();
        for (line, c, ch) in read_grid(&rows, origin) {
            if ch != '.' {
                return Err(syntax(line, format!("unknown region cell `{ch}`")));
            }
            tiles.push(c);
        }
        let region = TileRegion::new(tiles).map_err(invariant)?;
        BondBoard::new(region, crystals, start, bonds, model).map_err(invariant)
    }
}

impl TextFormat for BondWalk {
    fn to_text(&self) -> String {
        let mut s = format!("length {}\n", self.length);
        for i in &self.sequence {
            let _ = writeln!(s, "{i}");
        }
        s
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let mut it = lines(text);
        let (n, first) = it.next().ok_or_else(|| syntax(1, "missing `length` line"))?;
        let length: f64 = match first.strip_prefix("length ") {
            Some(x) => num(n, x)?,
            None => return Err(syntax(n, "expected `length <value>`")),
        };
        if !(length >= 0.0 && length.is_finite()) {
            return Err(IoError::Invariant("length must be a finite nonnegative number".into()));
        }
        let sequence = it.map(|(n, l)| num(n, l)).collect::<Result<_, _>>()?;
        Ok(BondWalk { sequence, length })
    }
}

fn clock_invariant(e: ClockError) -> IoError {
    match e {
        ClockError::ValueOutOfRange { position, value } if value.is_zero() => {
            IoError::Invariant(format!("value ≥ 1 fails at position {position}"))
        }
        ClockError::ValueOutOfRange { position, value } => IoError::Invariant(format!(
            "value ≤ N/2 fails at position {position} (value {value})"
        )),
        other => invariant(other),
    }
}

impl TextFormat for ClockInstance {
    fn to_text(&self) -> String {
        let mut s = String::new();
        if self.is_dense() {
            let _ = writeln!(s, "dense {}", self.circumference());
            for m in self.occupied().values() {
                let _ = writeln!(s, "{m}");
            }
        } else {
            let _ = writeln!(s, "{}", self.circumference());
            for (p, m) in self.occupied() {
                let _ = writeln!(s, "{p} {m}");
            }
        }
        s
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let mut it = lines(text);
        let (n, first) = it.next().ok_or_else(|| syntax(1, "missing circumference"))?;
        if let Some(count) = first.strip_prefix("dense ") {
            let count: usize = num(n, count)?;
            let values: Vec<(usize, BigUint)> = it
                .map(|(n, l)| Ok((n, num::<BigUint>(n, l)?)))
                .collect::<Result<_, IoError>>()?;
            if values.len() != count {
                return Err(IoError::Invariant(format!(
                    "dense clock declares {count} values but lists {}",
                    values.len()
                )));
            }
            let occupied = values
                .into_iter()
                .enumerate()
                .map(|(p, (_, m))| (BigUint::from(p), m))
                .collect();
            return ClockInstance::new(BigUint::from(count), occupied).map_err(clock_invariant);
        }
        let circumference: BigUint = num(n, first)?;
        let mut occupied = BTreeMap::new();
        for (n, l) in it {
            let [p, m] = fields::<2>(n, l)?;
            let p: BigUint = num(n, p)?;
            if occupied.insert(p.clone(), num(n, m)?).is_some() {
                return Err(IoError::Invariant(format!("position {p} is listed twice")));
            }
        }
        ClockInstance::new(circumference, occupied).map_err(clock_invariant)
    }
}

fn direction(line: usize, s: &str) -> Result<Direction, IoError> {
    match s {
        "cw" => Ok(Direction::Cw),
        "ccw" => Ok(Direction::Ccw),
        other => Err(syntax(line, format!("direction must be cw or ccw, found `{other}`"))),
    }
}

impl TextFormat for ClockSolution {
    fn to_text(&self) -> String {
        self.moves.iter().map(|(p, d)| format!("{p} {d}\n")).collect()
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let moves = lines(text)
            .map(|(n, l)| {
                let [p, d] = fields::<2>(n, l)?;
                Ok((num(n, p)?, direction(n, d)?))
            })
            .collect::<Result<_, IoError>>()?;
        Ok(ClockSolution { moves })
    }
}

const SECTIONS: [&str; 5] = ["@digraph", "@clock", "@labels", "@transitions", "@verdicts"];

impl TextFormat for ReductionCertificate {
    fn to_text(&self) -> String {
        let mut s = String::from("@digraph\n");
        s.push_str(&self.source.to_text());
        s.push_str("@clock\n");
        s.push_str(&self.clock.to_text());
        s.push_str("@labels\n");
        for (label, pos) in &self.labels {
            let _ = writeln!(s, "{} {} {pos}", label.vertex, label.offset);
        }
        s.push_str("@transitions\n");
        for (a, b) in &self.transitions {
            let _ = writeln!(s, "{a} {b}");
        }
        s.push_str("@verdicts\n");
        match self.verdicts {
            None => s.push_str("pending\n"),
            Some(v) => {
                let _ = writeln!(s, "source-ham-path {}", v.source_has_ham_path);
                let _ = writeln!(s, "clock-solvable {}", v.clock_solvable);
            }
        }
        s
    }

    fn from_text(text: &str) -> Result<Self, IoError> {
        let mut sections: Vec<(usize, Vec<&str>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let l = raw.trim_end();
            if l.starts_with('@') {
                let expected = SECTIONS.get(sections.len()).copied().unwrap_or("end of file");
                if l != expected {
                    return Err(syntax(i + 1, format!("expected section {expected}, found {l}")));
                }
                sections.push((i + 1, Vec::new()));
            } else if let Some(last) = sections.last_mut() {
                last.1.push(raw);
            } else if !l.is_empty() {
                return Err(syntax(i + 1, "text before the @digraph section"));
            }
        }
        if sections.len() != SECTIONS.len() {
            return Err(syntax(text.lines().count(), "missing certificate sections"));
        }
        // re-join each section so inner parsers see their own line numbers
        let body = |i: usize| sections[i].1.join("\n");
        let offset = |i: usize, e: IoError| match e {
            IoError::Syntax { line, message } => syntax(line + sections[i].0, message),
            other => other,
        };
        let source = Digraph::from_text(&body(0)).map_err(|e| offset(0, e))?;
        let clock = ClockInstance::from_text(&body(1)).map_err(|e| offset(1, e))?;
        let mut labels = Vec::new();
        for (n, l) in lines(&body(2)) {
            let n = n + sections[2].0;
            let [j, t, p] = fields::<3>(n, l)?;
            labels.push((
                NodeLabel {
                    vertex: num(n, j)?,
                    offset: num(n, t)?,
                },
                num(n, p)?,
            ));
        }
        let mut transitions = Vec::new();
        for (n, l) in lines(&body(3)) {
            let n = n + sections[3].0;
            let [a, b] = fields::<2>(n, l)?;
            transitions.push((num(n, a)?, num(n, b)?));
        }
        let verdict_body = body(4);
        let verdict_lines: Vec<(usize, &str)> = lines(&verdict_body).map(|(n, l)| (n + sections[4].0, l)).collect();
        let verdicts = match verdict_lines[..] {
            [(_, "pending")] => None,
            [(n1, a), (n2, b)] => {
                let flag = |n: usize, l: &str, key: &str| -> Result<bool, IoError> {
                    match l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')) {
                        Some(v) => num(n, v),
                        None => Err(syntax(n, format!("expected `{key} true|false`"))),
                    }
                };
                Some(Verdicts {
                    source_has_ham_path: flag(n1, a, "source-ham-path")?,
                    clock_solvable: flag(n2, b, "clock-solvable")?,
                })
            }
            _ => return Err(syntax(sections[4].0, "expected `pending` or two verdict lines")),
        };
        let rebuilt = reduce_digraph_to_phot(&source).map_err(invariant)?;
        if rebuilt.clock != clock || rebuilt.labels != labels || rebuilt.transitions != transitions {
            return Err(IoError::Invariant(
                "certificate does not match the construction applied to its digraph".into(),
            ));
        }
        Ok(ReductionCertificate {
            source,
            clock,
            labels,
            transitions,
            verdicts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip<T: TextFormat + PartialEq + fmt::Debug>(x: &T) {
        let text = x.to_text();
        let back = T::from_text(&text).unwrap();
        assert_eq!(&back, x);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn domino_round_trip() {
        let g = GridGraph::new([(0, 0), (1, 0)]).unwrap();
        assert_eq!(g.to_text(), "0 0\n1 0\n");
        round_trip(&g);
        let doc = Document::GridGraph(g);
        assert_eq!(parse(Kind::GridGraph, &serialize(&doc)).unwrap(), doc);
    }

    #[test]
    fn clock_value_zero() {
        let e = ClockInstance::from_text("5\n0 0\n").unwrap_err();
        assert!(e.to_string().contains("value ≥ 1"), "{e}");
        let e = ClockInstance::from_text("dense 2\n1\n0\n").unwrap_err();
        assert!(e.to_string().contains("value ≥ 1"), "{e}");
    }

    #[test]
    fn two_starts_rejected() {
        let e = TileBoard::from_text("S.S\n..F\n").unwrap_err();
        assert!(matches!(e, IoError::Invariant(_)), "{e}");
    }

    #[test]
    fn tile_board_layout() {
        let text = "origin -1 2\n#*F\nS2@\n";
        let b = TileBoard::from_text(text).unwrap();
        assert_eq!(b.start(), (-1, 2));
        assert_eq!(b.finish(), (1, 3));
        assert_eq!(b.capacity((0, 2)), Some(2));
        assert_eq!(b.crystals().iter().copied().collect::<Vec<_>>(), vec![(0, 3), (1, 2)]);
        assert_eq!(b.to_text(), text);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        assert_eq!(
            Digraph::from_text("3\n0 1\n1 x\n"),
            Err(IoError::Syntax {
                line: 3,
                message: "`x` is not a valid number".into()
            })
        );
        assert!(matches!(
            GridGraph::from_text("0 0\n\n1\n"),
            Err(IoError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            ClockSolution::from_text("0 up\n"),
            Err(IoError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn bond_board_formats() {
        let text = "model euclid\norigin 2 0\nstart free\nregion\n.#\n..\nend\ncrystal 2 0\ncrystal 3 0\nbond 1 0\n";
        let b = BondBoard::from_text(text).unwrap();
        assert_eq!(b.start(), None);
        assert_eq!(b.crystals(), &[(2, 0), (3, 0)]);
        assert_eq!(b.to_text(), text);
        let cyclic = "model grid\nstart 0 0\nregion\n...\nend\ncrystal 0 0\ncrystal 1 0\nbond 0 1\nbond 1 0\n";
        assert!(matches!(BondBoard::from_text(cyclic), Err(IoError::Invariant(_))));
        assert!(matches!(
            BondBoard::from_text("model grid\nstart free\nregion\n..\n"),
            Err(IoError::Syntax { .. })
        ));
    }

    #[test]
    fn walk_and_clock_formats() {
        let w = BondWalk {
            sequence: vec![2, 0, 1],
            length: 0.1 + 0.2,
        };
        round_trip(&w);
        let c = ClockInstance::dense(&[1, 2, 1, 1]).unwrap();
        assert_eq!(c.to_text(), "dense 4\n1\n2\n1\n1\n");
        round_trip(&c);
        let sparse = ClockInstance::from_text("111\n0 1\n1 10\n11 11\n").unwrap();
        round_trip(&sparse);
        round_trip(&ClockSolution {
            moves: vec![(BigUint::from(0u8), Direction::Ccw), (BigUint::from(110u8), Direction::Cw)],
        });
    }

    #[test]
    fn certificate_round_trip_and_tamper() {
        let d = Digraph::new(3, vec![(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
        let mut cert = reduce_digraph_to_phot(&d).unwrap();
        round_trip(&cert);
        cert.evaluate(None).unwrap();
        round_trip(&cert);
        let text = cert.to_text().replace("110 12", "110 13");
        assert!(matches!(ReductionCertificate::from_text(&text), Err(IoError::Invariant(_))));
        let text = cert.to_text().replace("@labels", "@label");
        assert!(matches!(ReductionCertificate::from_text(&text), Err(IoError::Syntax { .. })));
    }

    #[test]
    fn kinds_parse_from_tags() {
        for k in Kind::ALL {
            assert_eq!(k.tag().parse::<Kind>().unwrap(), k);
        }
        assert!("nope".parse::<Kind>().is_err());
    }
}
