//! ASCII pictures for terminals. Display only; never parsed back.

use std::fmt::Write as _;

use crate::crystal_bonds::BondBoard;
use crate::graphs::GridGraph;
use crate::hands_of_time::ClockInstance;
use crate::tile_trial::TileBoard;

/// Tiles as `+` (capacity 1) or `2`, crystals `*`, start `S`, finish `F`.
pub fn render_tile_board(board: &TileBoard) -> String {
    let (min_x, min_y, max_x, max_y) = board.bounds();
    let mut s = String::new();
    for y in (min_y..=max_y).rev() {
        for x in min_x..=max_x {
            let c = (x, y);
            let ch = match board.capacity(c) {
                None => ' ',
                Some(_) if c == board.start() => 'S',
                Some(_) if c == board.finish() => 'F',
                Some(_) if board.crystals().contains(&c) => '*',
                Some(1) => '+',
                Some(_) => '2',
            };
            s.push(ch);
        }
        s.push('\n');
    }
    s
}

/// Region tiles as `.`, crystals by index (base 36), start `S`.
pub fn render_bond_board(board: &BondBoard) -> String {
    let (min_x, min_y, max_x, max_y) = board.region().bounds();
    let mut s = String::new();
    for y in (min_y..=max_y).rev() {
        for x in min_x..=max_x {
            let c = (x, y);
            let ch = if let Some(i) = board.crystals().iter().position(|&k| k == c) {
                std::char::from_digit((i % 36) as u32, 36).expect("base 36 digit")
            } else if board.start() == Some(c) {
                'S'
            } else if board.region().contains_tile(c) {
                '.'
            } else {
                ' '
            };
            s.push(ch);
        }
        s.push('\n');
    }
    for (a, b) in board.bonds() {
        let _ = writeln!(s, "bond {a} - {b}");
    }
    s
}

pub fn render_grid_graph(g: &GridGraph) -> String {
    let (min_x, min_y, max_x, max_y) = g.bounds();
    let mut s = String::new();
    for y in (min_y..=max_y).rev() {
        for x in min_x..=max_x {
            s.push(if g.contains((x, y)) { 'o' } else { ' ' });
            if x < max_x {
                s.push(if g.contains((x, y)) && g.contains((x + 1, y)) { '-' } else { ' ' });
            }
        }
        s.push('\n');
        if y > min_y {
            for x in min_x..=max_x {
                s.push(if g.contains((x, y)) && g.contains((x, y - 1)) { '|' } else { ' ' });
                if x < max_x {
                    s.push(' ');
                }
            }
            s.push('\n');
        }
    }
    s
}

/// Dense clocks print as one bracketed ring; sparse ones list the occupied
/// nodes with the size of the empty gap before each.
pub fn render_clock(c: &ClockInstance) -> String {
    if c.is_dense() {
        let values: Vec<String> = c.occupied().values().map(|m| m.to_string()).collect();
        return format!("({})\n", values.join(" "));
    }
    let mut s = format!("N = {}\n", c.circumference());
    let mut prev: Option<&num_bigint::BigUint> = None;
    for (p, m) in c.occupied() {
        let gap = match prev {
            Some(q) => p - q - 1u8,
            None => p.clone(),
        };
        let _ = writeln!(s, "  ... {gap} empty ...\n  [{p}] = {m}");
        prev = Some(p);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::GridGraph;
    use crate::tile_trial::reduce_grid_to_tile_trial;

    #[test]
    fn pictures() {
        let g = GridGraph::new([(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(render_grid_graph(&g), "o-o\n| |\no-o\n");
        let b = reduce_grid_to_tile_trial(&g).unwrap();
        let pic = render_tile_board(&b);
        assert_eq!(pic.matches('S').count(), 1);
        assert_eq!(pic.matches('F').count(), 1);
        let c = ClockInstance::dense(&[1, 2, 1, 1]).unwrap();
        assert_eq!(render_clock(&c), "(1 2 1 1)\n");
    }
}
