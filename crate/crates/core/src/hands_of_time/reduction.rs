//! Directed Hamiltonian path (outdegree 1 or 2) to Partial Hands of Time.
//!
//! The clock has `N = 11…1` (v ones) positions. Vertex `k` becomes the
//! primary node at `R_k = Σ_{i<k} 10^i` and the jump `d_jk = |R_k - R_j|`
//! moves between primaries. A vertex with two out-arcs `k < m` also gets a
//! secondary node, reached by the other direction of its jump, whose value
//! carries the walk on to `R_m`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::Zero;

use super::{clock_to_digraph, pow10, solve_clock, ClockError, ClockInstance};
use crate::graphs::{has_directed_ham_path, Digraph, GraphError};
use crate::SearchOutcome;

/// `R_k`, the sum of `10^i` for `i < k`.
pub fn repunit_prefix(k: usize) -> BigUint {
    (0..k).map(pow10).sum()
}

/// Sum of `10^i` for `min(j,k) <= i < max(j,k)`; zero when `j == k`.
pub fn d_jk(j: usize, k: usize) -> BigUint {
    (j.min(k)..j.max(k)).map(pow10).sum()
}

/// A clock node named relative to a primary: `offset` positions clockwise
/// from `R_vertex`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeLabel {
    pub vertex: usize,
    pub offset: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondaryCase {
    /// `k < m < j`
    A,
    /// `k < j < m`
    B,
    /// `j < k < m`
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdicts {
    pub source_has_ham_path: bool,
    pub clock_solvable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCertificate {
    pub source: Digraph,
    pub clock: ClockInstance,
    /// Primaries `(j, 0)` for every vertex, then one secondary per
    /// outdegree-2 vertex, each with its absolute position.
    pub labels: Vec<(NodeLabel, BigUint)>,
    /// Intended moves as (from position, to position).
    pub transitions: Vec<(BigUint, BigUint)>,
    pub verdicts: Option<Verdicts>,
}

struct Secondary {
    j: usize,
    k: usize,
    m: usize,
    case: SecondaryCase,
}

fn secondaries(d: &Digraph) -> Vec<Secondary> {
    (0..d.vertex_count())
        .filter_map(|j| match d.out_neighbors(j)[..] {
            [k, m] => {
                let case = if m < j {
                    SecondaryCase::A
                } else if k < j {
                    SecondaryCase::B
                } else {
                    SecondaryCase::C
                };
                Some(Secondary { j, k, m, case })
            }
            _ => None,
        })
        .collect()
}

pub fn reduce_digraph_to_phot(d: &Digraph) -> Result<ReductionCertificate, ClockError> {
    let v = d.vertex_count();
    if v < 2 {
        return Err(ClockError::ReductionPrecondition("the digraph needs at least two vertices"));
    }
    if !d.is_outdeg12() {
        return Err(ClockError::ReductionPrecondition("every vertex needs outdegree 1 or 2"));
    }
    let n = repunit_prefix(v);
    let r: Vec<BigUint> = (0..v).map(repunit_prefix).collect();
    let top = pow10(v - 1);
    let mut occupied = BTreeMap::new();
    let mut labels = Vec::new();
    let mut transitions = Vec::new();
    let place = |occupied: &mut BTreeMap<BigUint, BigUint>, pos: BigUint, value: BigUint| {
        if occupied.insert(pos.clone(), value).is_some() {
            return Err(ClockError::Collision(pos));
        }
        Ok(())
    };

    for j in 0..v {
        let k = d.out_neighbors(j)[0];
        place(&mut occupied, r[j].clone(), d_jk(j, k))?;
        labels.push((
            NodeLabel {
                vertex: j,
                offset: BigUint::zero(),
            },
            r[j].clone(),
        ));
        transitions.push((r[j].clone(), r[k].clone()));
    }
    for s in secondaries(d) {
        let (j, k, m) = (s.j, s.k, s.m);
        let (label, value) = match s.case {
            SecondaryCase::A => (
                NodeLabel {
                    vertex: j,
                    offset: d_jk(j, k),
                },
                d_jk(j, m) + d_jk(j, k),
            ),
            SecondaryCase::B => (
                NodeLabel {
                    vertex: j,
                    offset: d_jk(j, k),
                },
                d_jk(j, m) - d_jk(j, k),
            ),
            SecondaryCase::C => (
                NodeLabel {
                    vertex: v - 1,
                    offset: &top + d_jk(0, j) - d_jk(j, k),
                },
                d_jk(j, m) + d_jk(j, k),
            ),
        };
        let pos = (&r[label.vertex] + &label.offset) % &n;
        place(&mut occupied, pos.clone(), value)?;
        transitions.push((r[j].clone(), pos.clone()));
        transitions.push((pos.clone(), r[m].clone()));
        labels.push((label, pos));
    }
    let clock = ClockInstance::new(n, occupied)?;
    Ok(ReductionCertificate {
        source: d.clone(),
        clock,
        labels,
        transitions,
        verdicts: None,
    })
}

impl ReductionCertificate {
    /// Solves both sides and records the verdicts. `None` if the clock
    /// solver ran out of budget.
    pub fn evaluate(&mut self, node_budget: Option<u64>) -> Result<Option<Verdicts>, GraphError> {
        let source_has_ham_path = has_directed_ham_path(&self.source)?;
        let clock_solvable = match solve_clock(&self.clock, node_budget) {
            SearchOutcome::Found(_) => true,
            SearchOutcome::Infeasible => false,
            SearchOutcome::BudgetExhausted => return Ok(None),
        };
        let v = Verdicts {
            source_has_ham_path,
            clock_solvable,
        };
        self.verdicts = Some(v);
        Ok(Some(v))
    }
}

/// The transitions as a digraph over the labelled nodes, in label order.
/// Every secondary subdivides the arc `j -> m`.
pub fn intended_digraph(cert: &ReductionCertificate) -> Digraph {
    let index: BTreeMap<&BigUint, usize> = cert.labels.iter().enumerate().map(|(i, (_, p))| (p, i)).collect();
    let arcs: BTreeSet<(usize, usize)> = cert
        .transitions
        .iter()
        .map(|(a, b)| (index[a], index[b]))
        .collect();
    Digraph::new(cert.labels.len(), arcs.into_iter().collect()).expect("labels are distinct positions")
}

/// Moves of the built clock that are not intended transitions.
pub fn audit_stray_landings(cert: &ReductionCertificate) -> Vec<(BigUint, BigUint)> {
    let g = clock_to_digraph(&cert.clock);
    let intended: BTreeSet<&(BigUint, BigUint)> = cert.transitions.iter().collect();
    g.digraph
        .arcs()
        .iter()
        .map(|&(u, w)| (g.positions[u].clone(), g.positions[w].clone()))
        .filter(|arc| !intended.contains(arc))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaViolation {
    /// `d_jk == d_j'k'` for two different pairs.
    RepeatedJump { first: (usize, usize), second: (usize, usize) },
    /// A case-c offset whose leading digit is neither 8 nor 9.
    CaseCLeadingDigit { vertex: usize, offset: BigUint },
    /// A case-a/b stray offset without the digit 3 at index `j-1`.
    StrayDigit { vertex: usize, offset: BigUint },
    /// A case-c stray offset equal to some case-c label.
    CaseCStrayHit { vertex: usize, offset: BigUint },
}

fn digit(x: &BigUint, index: usize) -> u8 {
    let s = x.to_str_radix(10);
    s.len()
        .checked_sub(index + 1)
        .map_or(0, |i| s.as_bytes()[i] - b'0')
}

/// Direct checks of the digit facts the construction relies on.
///
/// The stray jump of a case-a/b secondary lands `t = 2 d_jk ± d_jm`
/// (mod N) clockwise of `R_j`; `t` carries the digit 3 at decimal index
/// `j - 1`, which no occupied node's offset from `R_j` has.
pub fn check_digit_lemmas(cert: &ReductionCertificate) -> Vec<LemmaViolation> {
    let d = &cert.source;
    let v = d.vertex_count();
    let n = cert.clock.circumference();
    let mut out = Vec::new();

    let mut seen: BTreeMap<BigUint, (usize, usize)> = BTreeMap::new();
    for j in 0..v {
        for k in j + 1..v {
            if let Some(&first) = seen.get(&d_jk(j, k)) {
                out.push(LemmaViolation::RepeatedJump {
                    first,
                    second: (j, k),
                });
            } else {
                seen.insert(d_jk(j, k), (j, k));
            }
        }
    }

    let top = pow10(v - 1);
    let case_c: BTreeSet<BigUint> = secondaries(d)
        .iter()
        .filter(|s| s.case == SecondaryCase::C)
        .map(|s| &top + d_jk(0, s.j) - d_jk(s.j, s.k))
        .collect();
    for s in secondaries(d) {
        let (j, k, m) = (s.j, s.k, s.m);
        match s.case {
            SecondaryCase::A | SecondaryCase::B => {
                let twice = d_jk(j, k) * 2u8;
                let t = if s.case == SecondaryCase::A {
                    (twice + d_jk(j, m)) % n
                } else {
                    (twice + n - d_jk(j, m)) % n
                };
                if digit(&t, j - 1) != 3 {
                    out.push(LemmaViolation::StrayDigit { vertex: j, offset: t });
                }
            }
            SecondaryCase::C => {
                let offset = &top + d_jk(0, j) - d_jk(j, k);
                let lead = offset.to_str_radix(10).as_bytes()[0];
                if lead != b'8' && lead != b'9' {
                    out.push(LemmaViolation::CaseCLeadingDigit { vertex: j, offset });
                }
                let r = repunit_prefix;
                let stray = &top + r(j) * 4u8 - r(k) * 2u8 - r(m);
                if case_c.contains(&stray) {
                    out.push(LemmaViolation::CaseCStrayHit { vertex: j, offset: stray });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn digraph(v: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::new(v, arcs.to_vec()).unwrap()
    }

    #[test]
    fn jump_values() {
        assert_eq!(d_jk(0, 1), big(1));
        assert_eq!(d_jk(0, 2), big(11));
        assert_eq!(d_jk(1, 3), big(110));
        assert_eq!(d_jk(3, 1), big(110));
        assert_eq!(d_jk(2, 2), big(0));
        assert_eq!(repunit_prefix(3), big(111));
    }

    #[test]
    fn three_cycle() {
        let d = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut cert = reduce_digraph_to_phot(&d).unwrap();
        assert_eq!(*cert.clock.circumference(), big(111));
        let occ: Vec<(BigUint, BigUint)> = cert.clock.occupied().clone().into_iter().collect();
        assert_eq!(occ, vec![(big(0), big(1)), (big(1), big(10)), (big(11), big(11))]);
        assert!(audit_stray_landings(&cert).is_empty());
        let g = clock_to_digraph(&cert.clock);
        assert_eq!(g.digraph.arcs(), &[(0, 1), (1, 2), (2, 0)]);
        let sol = solve_clock(&cert.clock, None).found().unwrap();
        super::super::verify_clock_solution(&cert.clock, &sol).unwrap();
        assert_eq!(
            cert.evaluate(None).unwrap(),
            Some(Verdicts {
                source_has_ham_path: true,
                clock_solvable: true
            })
        );
    }

    #[test]
    fn case_c_secondary() {
        let d = digraph(3, &[(0, 1), (0, 2), (1, 2), (2, 0)]);
        let cert = reduce_digraph_to_phot(&d).unwrap();
        assert_eq!(cert.clock.value_at(&big(110)), Some(&big(12)));
        assert_eq!(cert.labels[3].0, NodeLabel { vertex: 2, offset: big(99) });
        let from0 = cert.clock.landing(&big(0), &big(1), super::super::Direction::Ccw);
        assert_eq!(from0, big(110));
        let on = cert.clock.landing(&big(110), &big(12), super::super::Direction::Cw);
        assert_eq!(on, big(11));
        assert!(audit_stray_landings(&cert).is_empty());
        assert!(check_digit_lemmas(&cert).is_empty());
    }

    #[test]
    fn stray_digit_is_three_not_two() {
        // v = 4, j = 1 with arcs to 0 and 2 (case b): t = 2 - 10 = 1103 mod 1111
        let d = digraph(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 0)]);
        let cert = reduce_digraph_to_phot(&d).unwrap();
        let n = cert.clock.circumference();
        let t = (d_jk(1, 0) * 2u8 + n - d_jk(1, 2)) % n;
        assert_eq!(t, big(1103));
        assert_eq!(digit(&t, 0), 3);
        assert_ne!(digit(&t, 1), 2);
        assert!(check_digit_lemmas(&cert).is_empty());
    }

    #[test]
    fn secondary_must_be_consumed() {
        // the source has the Hamiltonian path 0 1 2 3, but vertex 0's
        // secondary can only be consumed on the way 0 -> sec -> 2
        let d = digraph(4, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 0), (3, 2)]);
        let mut cert = reduce_digraph_to_phot(&d).unwrap();
        let verdicts = cert.evaluate(None).unwrap().unwrap();
        assert!(verdicts.source_has_ham_path);
        assert!(!verdicts.clock_solvable);
        assert!(!has_directed_ham_path(&intended_digraph(&cert)).unwrap());
        assert!(audit_stray_landings(&cert).is_empty());
    }

    #[test]
    fn preconditions() {
        assert_eq!(
            reduce_digraph_to_phot(&digraph(1, &[])),
            Err(ClockError::ReductionPrecondition("the digraph needs at least two vertices"))
        );
        assert!(matches!(
            reduce_digraph_to_phot(&digraph(3, &[(0, 1), (1, 0)])),
            Err(ClockError::ReductionPrecondition(_))
        ));
    }

    #[test]
    fn values_within_half_circumference() {
        // complete outdegree-2 patterns on 5 vertices
        let d = digraph(5, &[(0, 3), (0, 4), (1, 0), (1, 4), (2, 0), (2, 1), (3, 1), (3, 2), (4, 0), (4, 3)]);
        let cert = reduce_digraph_to_phot(&d).unwrap();
        assert_eq!(cert.clock.len(), 10);
        assert_eq!(intended_digraph(&cert).vertex_count(), 10);
        assert!(check_digit_lemmas(&cert).is_empty());
        assert!(audit_stray_landings(&cert).is_empty());
    }
}
