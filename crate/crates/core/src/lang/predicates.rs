//! Built-in core predicates.
//!
//! The structured predicates (triangle, subset-sum, CNF-SAT) read their core
//! as the header pair `(1, 0)` followed by a list of blocks, each block an
//! MSB-first binary number. The header is never a valid leading block, so a
//! structured core survives `strip`. Anything that fails to parse is a
//! non-member.

use log::warn;
use serde::{Deserialize, Serialize};

use super::wrapper::CorePredicate;
use crate::sigma::{decode_block_prefix, encode_block, Alphabet, SymString};

pub const STRUCTURED_HEADER: [u8; 2] = [1, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PredicateBudgets {
    /// Subset-sum instances with more items are rejected (2^items subsets).
    pub subset_items: usize,
    /// CNF formulas over more variables are rejected.
    pub sat_vars: usize,
}

impl Default for PredicateBudgets {
    fn default() -> Self {
        PredicateBudgets {
            subset_items: 20,
            sat_vars: 20,
        }
    }
}

fn lit(alphabet: Alphabet, symbols: &[u8]) -> SymString {
    SymString::new(alphabet, symbols.to_vec()).expect("witness symbols below k")
}

/// MSB-first binary digits of `value`; zero is the single digit `0`.
pub fn binary_block(value: u64) -> Vec<u8> {
    if value == 0 {
        return vec![0];
    }
    let bits = 64 - value.leading_zeros();
    (0..bits).rev().map(|i| ((value >> i) & 1) as u8).collect()
}

/// Header followed by one encoded block per entry.
pub fn structured_core(alphabet: Alphabet, blocks: &[Vec<u8>]) -> SymString {
    let mut out = SymString::new(alphabet, STRUCTURED_HEADER.to_vec()).expect("k >= 2");
    for block in blocks {
        let block = SymString::new(alphabet, block.clone()).expect("block symbols below k");
        out = out.concat(&encode_block(&block));
    }
    out
}

fn parse_block_list(core: &SymString) -> Option<Vec<Vec<u8>>> {
    let rest = core.symbols().strip_prefix(&STRUCTURED_HEADER)?;
    let mut blocks = Vec::new();
    let mut pos = 0;
    while pos < rest.len() {
        let (payload, used) = decode_block_prefix(&rest[pos..])?;
        blocks.push(payload);
        pos += used;
    }
    Some(blocks)
}

fn parse_number(bits: &[u8]) -> Option<u64> {
    if bits.len() > 64 {
        return None;
    }
    bits.iter().try_fold(0u64, |acc, &b| match b {
        0 | 1 => Some((acc << 1) | u64::from(b)),
        _ => None,
    })
}

fn parse_numbers(core: &SymString) -> Option<Vec<u64>> {
    parse_block_list(core)?
        .iter()
        .map(|b| parse_number(b))
        .collect()
}

/// Weight of the core is odd.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParityOdd;

impl ParityOdd {
    pub fn predicate(alphabet: Alphabet) -> CorePredicate {
        CorePredicate::new(
            "parity-odd",
            alphabet,
            |core: &SymString| core.has_odd_weight(),
            lit(alphabet, &[0]),
            lit(alphabet, &[1]),
        )
    }
}

/// The core contains two adjacent `1` symbols.
#[derive(Clone, Copy, Debug, Default)]
pub struct Substring11;

impl Substring11 {
    pub fn eval(core: &SymString) -> bool {
        core.symbols().windows(2).any(|w| w == [1, 1])
    }

    pub fn predicate(alphabet: Alphabet) -> CorePredicate {
        CorePredicate::new(
            "substring-11",
            alphabet,
            Self::eval,
            lit(alphabet, &[0]),
            lit(alphabet, &[1, 1]),
        )
    }
}

/// Graph with edges given by colexicographic pair indices on
/// `ceil(sqrt(2 * edges))` vertices; member iff it contains a triangle.
#[derive(Clone, Copy, Debug, Default)]
pub struct Triangle;

impl Triangle {
    pub fn vertex_count(edges: usize) -> usize {
        let target = 2 * edges;
        let mut v = (target as f64).sqrt() as usize;
        while v * v < target {
            v += 1;
        }
        while v > 0 && (v - 1) * (v - 1) >= target {
            v -= 1;
        }
        v
    }

    /// Pair `(i, j)`, `i < j`, at colexicographic rank `index`.
    pub fn edge_endpoints(index: u64) -> (u64, u64) {
        let mut j = ((2.0 * index as f64).sqrt() as u64).max(1);
        while j * (j - 1) / 2 > index {
            j -= 1;
        }
        while (j + 1) * j / 2 <= index {
            j += 1;
        }
        (index - j * (j - 1) / 2, j)
    }

    pub fn eval(core: &SymString) -> bool {
        let Some(indices) = parse_numbers(core) else {
            return false;
        };
        let v = Self::vertex_count(indices.len());
        let pairs = (v * v.saturating_sub(1) / 2) as u64;
        let mut adjacency = vec![vec![false; v]; v];
        let mut edges = Vec::with_capacity(indices.len());
        for &e in &indices {
            if e >= pairs {
                return false;
            }
            let (i, j) = Self::edge_endpoints(e);
            let (i, j) = (i as usize, j as usize);
            adjacency[i][j] = true;
            adjacency[j][i] = true;
            edges.push((i, j));
        }
        edges
            .iter()
            .any(|&(i, j)| (0..v).any(|w| adjacency[i][w] && adjacency[j][w]))
    }

    pub fn predicate(alphabet: Alphabet) -> CorePredicate {
        let w1 = structured_core(
            alphabet,
            &[binary_block(0), binary_block(1), binary_block(2)],
        );
        CorePredicate::new("triangle", alphabet, Self::eval, lit(alphabet, &[0]), w1)
    }
}

/// Last number is the target, the rest a multiset; member iff some
/// sub-multiset sums to the target.
#[derive(Clone, Copy, Debug)]
pub struct SubsetSum {
    pub max_items: usize,
}

impl SubsetSum {
    pub fn eval(&self, core: &SymString) -> bool {
        let Some(mut numbers) = parse_numbers(core) else {
            return false;
        };
        let Some(target) = numbers.pop() else {
            return false;
        };
        if numbers.len() > self.max_items || numbers.len() >= 64 {
            warn!(
                "subset-sum budget exceeded: {} items > {}; answering false",
                numbers.len(),
                self.max_items
            );
            return false;
        }
        let target = u128::from(target);
        (0u64..1 << numbers.len()).any(|mask| {
            numbers
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| u128::from(x))
                .sum::<u128>()
                == target
        })
    }

    pub fn predicate(alphabet: Alphabet, budgets: PredicateBudgets) -> CorePredicate {
        let this = SubsetSum {
            max_items: budgets.subset_items,
        };
        let w1 = structured_core(alphabet, &[binary_block(1), binary_block(1)]);
        CorePredicate::new(
            "subset-sum",
            alphabet,
            move |core: &SymString| this.eval(core),
            lit(alphabet, &[0]),
            w1,
        )
    }
}

/// CNF formula: `0` ends a clause, `2v+1` is `x_v`, `2v+2` is `¬x_v`.
#[derive(Clone, Copy, Debug)]
pub struct CnfSat {
    pub max_vars: usize,
}

impl CnfSat {
    /// Clauses as `(variable, positive)` literals; `None` on parse failure.
    pub fn clauses(core: &SymString) -> Option<Vec<Vec<(u64, bool)>>> {
        let numbers = parse_numbers(core)?;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for n in numbers {
            if n == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(((n - 1) / 2, n % 2 == 1));
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        Some(clauses)
    }

    pub fn eval(&self, core: &SymString) -> bool {
        let Some(clauses) = Self::clauses(core) else {
            return false;
        };
        let vars = clauses
            .iter()
            .flatten()
            .map(|&(v, _)| v + 1)
            .max()
            .unwrap_or(0);
        if vars > self.max_vars as u64 || vars >= 64 {
            warn!(
                "cnf-sat budget exceeded: {vars} variables > {}; answering false",
                self.max_vars
            );
            return false;
        }
        (0u64..1 << vars).any(|assignment| {
            clauses.iter().all(|clause| {
                clause
                    .iter()
                    .any(|&(v, positive)| (assignment >> v & 1 == 1) == positive)
            })
        })
    }

    pub fn predicate(alphabet: Alphabet, budgets: PredicateBudgets) -> CorePredicate {
        let this = CnfSat {
            max_vars: budgets.sat_vars,
        };
        let w1 = structured_core(alphabet, &[binary_block(1)]);
        CorePredicate::new(
            "cnf-sat",
            alphabet,
            move |core: &SymString| this.eval(core),
            lit(alphabet, &[0]),
            w1,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::enumerate_ball;

    const B: Alphabet = Alphabet::BINARY;

    fn nums(values: &[u64]) -> SymString {
        let blocks: Vec<Vec<u8>> = values.iter().map(|&v| binary_block(v)).collect();
        structured_core(B, &blocks)
    }

    #[test]
    fn binary_blocks() {
        assert_eq!(binary_block(0), vec![0]);
        assert_eq!(binary_block(6), vec![1, 1, 0]);
        for v in [0, 1, 2, 5, 1023, u64::MAX] {
            assert_eq!(parse_number(&binary_block(v)), Some(v));
        }
        assert_eq!(parse_number(&[]), Some(0));
        assert_eq!(parse_number(&[2]), None);
    }

    #[test]
    fn structured_cores_survive_strip() {
        let core = nums(&[3, 0, 7]);
        assert_eq!(crate::lang::strip(&core), core);
        assert_eq!(parse_numbers(&core), Some(vec![3, 0, 7]));
        assert_eq!(parse_numbers(&SymString::parse("1", B).unwrap()), None);
        assert_eq!(parse_numbers(&SymString::parse("100", B).unwrap()), None);
    }

    #[test]
    fn substring() {
        let p = |t: &str| Substring11::eval(&SymString::parse(t, B).unwrap());
        assert!(p("0110"));
        assert!(!p("10101"));
        assert!(!p(""));
    }

    #[test]
    fn colex_pairs() {
        let mut expected = Vec::new();
        for j in 1..40u64 {
            for i in 0..j {
                expected.push((i, j));
            }
        }
        for (e, pair) in expected.iter().enumerate() {
            assert_eq!(Triangle::edge_endpoints(e as u64), *pair);
        }
        assert_eq!(Triangle::vertex_count(0), 0);
        assert_eq!(Triangle::vertex_count(1), 2);
        assert_eq!(Triangle::vertex_count(3), 3);
        assert_eq!(Triangle::vertex_count(8), 4);
        assert_eq!(Triangle::vertex_count(9), 5);
    }

    #[test]
    fn triangle_examples() {
        assert!(Triangle::eval(&nums(&[0, 1, 2])));
        // 4-cycle 0-1-2-3 (edges 0:(0,1), 2:(1,2), 5:(2,3), 3:(0,3)), one
        // edge repeated so that five entries give 4 vertices
        assert!(!Triangle::eval(&nums(&[0, 2, 5, 3, 3])));
        assert!(Triangle::eval(&nums(&[0, 2, 5, 3, 1])));
        // four entries only give 3 vertices, so index 5 is out of range
        assert!(!Triangle::eval(&nums(&[0, 2, 5, 1])));
        // index 3 needs 4 vertices, but 2 edges only give 2
        assert!(!Triangle::eval(&nums(&[3, 0])));
        assert!(!Triangle::eval(&nums(&[])));
    }

    #[test]
    fn subset_sum_examples() {
        let s = SubsetSum { max_items: 20 };
        assert!(s.eval(&nums(&[3, 5, 9, 14])));
        assert!(!s.eval(&nums(&[3, 5, 9, 15])));
        assert!(s.eval(&nums(&[0])));
        assert!(!s.eval(&nums(&[])));
        let tight = SubsetSum { max_items: 2 };
        assert!(!tight.eval(&nums(&[1, 1, 1, 1])));
    }

    #[test]
    fn cnf_examples() {
        let sat = CnfSat { max_vars: 20 };
        // (x0 ∨ x1) ∧ (¬x0) ∧ (¬x1 ∨ x0)
        assert!(!sat.eval(&nums(&[1, 3, 0, 2, 0, 4, 1, 0])));
        // (x0 ∨ x1) ∧ (¬x0)
        assert!(sat.eval(&nums(&[1, 3, 0, 2, 0])));
        assert!(!sat.eval(&nums(&[0])));
        assert!(sat.eval(&nums(&[])));
        let tight = CnfSat { max_vars: 1 };
        assert!(!tight.eval(&nums(&[3])));
    }

    #[test]
    fn every_eval_is_total() {
        let b = PredicateBudgets::default();
        let preds = [
            ParityOdd::predicate(B),
            Substring11::predicate(B),
            Triangle::predicate(B),
            SubsetSum::predicate(B, b),
            CnfSat::predicate(B, b),
        ];
        for x in enumerate_ball(B, 12, 1 << 14).unwrap() {
            for p in &preds {
                let _ = p.eval(&x);
            }
        }
    }
}
