//! Complete directed graphs on `{1..d}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Index of the unordered pair `{a, b}` (1-indexed, `a < b`) in the order
/// `(1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...`.
pub fn pair_index(a: usize, b: usize) -> usize {
    debug_assert!(a < b && a >= 1);
    (b - 1) * (b - 2) / 2 + (a - 1)
}

pub fn pair_count(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

/// All pairs `(a, b)` with `a < b`, in `pair_index` order.
pub fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=d).flat_map(|b| (1..b).map(move |a| (a, b)))
}

/// A tournament on `{1..d}`. Bit `pair_index(a, b)` is set iff the edge
/// between `a < b` is directed `a → b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Tournament {
    d: usize,
    bits: Vec<u64>,
}

impl Tournament {
    /// The tournament with every edge directed from the smaller vertex.
    pub fn transitive(d: usize) -> Tournament {
        let mut t = Tournament {
            d,
            bits: vec![0; pair_count(d).div_ceil(64)],
        };
        for (a, b) in pairs(d) {
            t.set(a, b);
        }
        t
    }

    /// Builds a tournament from a predicate `a → b` evaluated on `a < b`.
    pub fn from_fn(d: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Tournament {
        let mut t = Tournament {
            d,
            bits: vec![0; pair_count(d).div_ceil(64)],
        };
        for (a, b) in pairs(d) {
            if forward(a, b) {
                t.set(a, b);
            }
        }
        t
    }

    /// Directs `a → b`, for any `a ≠ b`.
    pub fn set(&mut self, a: usize, b: usize) {
        let (lo, hi, forward) = if a < b { (a, b, true) } else { (b, a, false) };
        let k = pair_index(lo, hi);
        if forward {
            self.bits[k / 64] |= 1 << (k % 64);
        } else {
            self.bits[k / 64] &= !(1 << (k % 64));
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Whether the edge between `a ≠ b` is directed `a → b`.
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let k = pair_index(lo, hi);
        let bit = self.bits[k / 64] >> (k % 64) & 1 == 1;
        bit == (a < b)
    }

    pub fn out_degree(&self, a: usize) -> usize {
        (1..=self.d).filter(|&b| b != a && self.has_edge(a, b)).count()
    }

    /// Acyclic iff the out-degrees are exactly `{0, ..., d-1}`.
    pub fn is_acyclic(&self) -> bool {
        let mut seen = vec![false; self.d];
        for a in 1..=self.d {
            let k = self.out_degree(a);
            if seen[k] {
                return false;
            }
            seen[k] = true;
        }
        true
    }

    /// A directed 3-cycle `a → b → c → a`, if one exists. A tournament is
    /// acyclic iff it has none.
    pub fn find_cycle(&self) -> Option<(usize, usize, usize)> {
        for a in 1..=self.d {
            for b in a + 1..=self.d {
                for c in b + 1..=self.d {
                    if self.has_edge(a, b) && self.has_edge(b, c) && self.has_edge(c, a) {
                        return Some((a, b, c));
                    }
                    if self.has_edge(a, c) && self.has_edge(c, b) && self.has_edge(b, a) {
                        return Some((a, c, b));
                    }
                }
            }
        }
        None
    }

    /// The unique source of an acyclic tournament.
    pub fn source(&self) -> Option<usize> {
        (1..=self.d).find(|&a| self.out_degree(a) + 1 == self.d)
    }

    /// Lists the vertices by decreasing out-degree: position `k` holds the
    /// vertex of out-degree `d - k`.
    pub fn to_permutation(&self) -> Result<Permutation> {
        if let Some((a, b, c)) = self.find_cycle() {
            return Err(Error::CyclicTournament(a, b, c));
        }
        let mut word = vec![0; self.d];
        for a in 1..=self.d {
            word[self.d - 1 - self.out_degree(a)] = a;
        }
        Ok(Permutation::from_word_unchecked(word))
    }

    /// The transitive tournament in which earlier entries beat later ones.
    pub fn from_permutation(p: &Permutation) -> Tournament {
        let inv = p.inverse();
        Tournament::from_fn(p.len(), |a, b| inv.apply(a) < inv.apply(b))
    }

    /// All edges `(a, b)` meaning `a → b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        pairs(self.d)
            .map(|(a, b)| if self.has_edge(a, b) { (a, b) } else { (b, a) })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_indexing_is_dense() {
        for d in 0..8 {
            let idx: Vec<usize> = pairs(d).map(|(a, b)| pair_index(a, b)).collect();
            assert_eq!(idx, (0..pair_count(d)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn two_vertices() {
        let t = Tournament::from_fn(2, |_, _| true);
        assert_eq!(t.to_permutation().unwrap().to_string(), "12");
    }

    #[test]
    fn three_vertex_example() {
        let mut t = Tournament::transitive(3);
        t.set(2, 1);
        t.set(3, 1);
        t.set(3, 2);
        assert_eq!(t.to_permutation().unwrap().to_string(), "321");
    }

    #[test]
    fn cyclic_triangle_is_rejected() {
        let mut t = Tournament::transitive(3);
        t.set(3, 1);
        assert!(!t.is_acyclic());
        assert_eq!(t.find_cycle(), Some((1, 2, 3)));
        assert!(matches!(t.to_permutation(), Err(Error::CyclicTournament(1, 2, 3))));
    }

    /// DFS oracle for acyclicity, independent of the degree criterion.
    fn dfs_acyclic(t: &Tournament) -> bool {
        fn visit(t: &Tournament, v: usize, state: &mut [u8]) -> bool {
            state[v] = 1;
            for w in 1..=t.d() {
                if w != v && t.has_edge(v, w) && (state[w] == 1 || (state[w] == 0 && !visit(t, w, state))) {
                    return false;
                }
            }
            state[v] = 2;
            true
        }
        let mut state = vec![0u8; t.d() + 1];
        (1..=t.d()).all(|v| state[v] != 0 || visit(t, v, &mut state))
    }

    #[test]
    fn exhaustive_tournaments_up_to_five() {
        for d in 0..=5 {
            let m = pair_count(d);
            let mut acyclic = 0;
            for mask in 0u64..(1 << m) {
                let t = Tournament::from_fn(d, |a, b| mask >> pair_index(a, b) & 1 == 1);
                let by_degree = t.is_acyclic();
                assert_eq!(by_degree, dfs_acyclic(&t));
                assert_eq!(by_degree, t.find_cycle().is_none());
                if by_degree {
                    acyclic += 1;
                    let p = t.to_permutation().unwrap();
                    assert_eq!(Tournament::from_permutation(&p), t);
                }
            }
            assert_eq!(acyclic, Permutation::all(d).count());
        }
    }

    #[test]
    fn permutations_round_trip_up_to_six() {
        for d in 0..=6 {
            for p in Permutation::all(d) {
                let t = Tournament::from_permutation(&p);
                assert_eq!(t.to_permutation().unwrap(), p);
                if d > 0 {
                    assert_eq!(t.source(), Some(p.apply(1)));
                }
            }
        }
    }
}
