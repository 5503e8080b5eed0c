//! Systems of permutations on the edges of `nΔ_{d-1}`.
//!
//! Colors (summand indices) run over `1..=n`, letters (simplex vertices)
//! over `1..=d`. For `a < b` the permutation `σ_ab` is stored; `σ_ba` is its
//! reverse and is derived on read.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::letters::Letters;
use crate::perm::Permutation;
use crate::tournament::{pair_count, pair_index, pairs, Tournament};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SystemOfPermutations {
    n: usize,
    d: usize,
    perms: Vec<Permutation>,
}

/// The result of a deletion or contraction: the reindexed object plus, for
/// every new label `k`, the label `original_labels[k - 1]` it had before.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Minor<T> {
    pub inner: T,
    pub original_labels: Vec<usize>,
}

/// A directed 3-cycle `a → b → c → a` in `G_ij`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleWitness {
    pub i: usize,
    pub j: usize,
    pub cycle: (usize, usize, usize),
}

impl From<CycleWitness> for Error {
    fn from(w: CycleWitness) -> Error {
        Error::NotAcyclic {
            i: w.i,
            j: w.j,
            cycle: w.cycle,
        }
    }
}

impl SystemOfPermutations {
    /// `perms` lists `σ_ab` for `a < b` in the order `(1,2), (1,3), (2,3),
    /// (1,4), ...`.
    pub fn new(n: usize, d: usize, perms: Vec<Permutation>) -> Result<SystemOfPermutations> {
        if perms.len() != pair_count(d) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} permutations for d = {d}, got {}",
                pair_count(d),
                perms.len()
            )));
        }
        if let Some(p) = perms.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "permutation {p} does not have length n = {n}"
            )));
        }
        Ok(SystemOfPermutations { n, d, perms })
    }

    /// Builds a system from `((a, b), σ_ab)` entries given in any
    /// orientation; every unordered pair must appear exactly once.
    pub fn from_pairs(
        n: usize,
        d: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Permutation)>,
    ) -> Result<SystemOfPermutations> {
        let mut slots: Vec<Option<Permutation>> = vec![None; pair_count(d)];
        for ((a, b), p) in entries {
            check_index("letter", a, d)?;
            check_index("letter", b, d)?;
            if a == b {
                return Err(Error::Parse(format!("edge ({a}, {b}) is a loop")));
            }
            let (lo, hi, p) = if a < b { (a, b, p) } else { (b, a, p.reversed()) };
            let slot = &mut slots[pair_index(lo, hi)];
            if slot.is_some() {
                return Err(Error::Parse(format!("edge ({lo}, {hi}) given twice")));
            }
            *slot = Some(p);
        }
        let perms = slots
            .into_iter()
            .zip(pairs(d))
            .map(|(p, (a, b))| p.ok_or_else(|| Error::Parse(format!("edge ({a}, {b}) missing"))))
            .collect::<Result<Vec<_>>>()?;
        SystemOfPermutations::new(n, d, perms)
    }

    pub(crate) fn from_fn(n: usize, d: usize, mut f: impl FnMut(usize, usize) -> Permutation) -> SystemOfPermutations {
        let perms = pairs(d).map(|(a, b)| f(a, b)).collect();
        SystemOfPermutations { n, d, perms }
    }

    /// The `d = 3` system read clockwise from the lower-left corner:
    /// `u = σ_21`, `v = σ_13`, `w = σ_32` (letters `A = 1` at the top,
    /// `B = 2` lower left, `C = 3` lower right).
    pub fn from_uvw(u: Permutation, v: Permutation, w: Permutation) -> Result<SystemOfPermutations> {
        let n = u.len();
        SystemOfPermutations::from_pairs(n, 3, [((2, 1), u), ((1, 3), v), ((3, 2), w)])
    }

    /// Inverse of [`SystemOfPermutations::from_uvw`].
    pub fn uvw(&self) -> Result<(Permutation, Permutation, Permutation)> {
        if self.d != 3 {
            return Err(Error::UnsupportedDimension(self.d));
        }
        Ok((self.perm(2, 1), self.perm(1, 3), self.perm(3, 2)))
    }

    /// The trivial system with every `σ_ab` (for `a < b`) the identity.
    pub fn identity(n: usize, d: usize) -> SystemOfPermutations {
        SystemOfPermutations::from_fn(n, d, |_, _| Permutation::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Stored permutations `σ_ab`, `a < b`, in pair order.
    pub fn stored(&self) -> &[Permutation] {
        &self.perms
    }

    /// `σ_ab` for any `a ≠ b`.
    pub fn perm(&self, a: usize, b: usize) -> Permutation {
        if a < b {
            self.perms[pair_index(a, b)].clone()
        } else {
            self.perms[pair_index(b, a)].reversed()
        }
    }

    /// `G_ij`: the edge between letters `a` and `b` points `a → b` iff `i`
    /// precedes `j` in `σ_ab`.
    pub fn g_graph(&self, i: usize, j: usize) -> Result<Tournament> {
        check_index("color", i, self.n)?;
        check_index("color", j, self.n)?;
        if i == j {
            return Err(Error::IndexOutOfRange {
                what: "second color (must differ from the first)",
                index: j,
                max: self.n,
            });
        }
        Ok(self.g_graph_unchecked(i, j))
    }

    fn g_graph_unchecked(&self, i: usize, j: usize) -> Tournament {
        let inv: Vec<Permutation> = self.perms.iter().map(Permutation::inverse).collect();
        Tournament::from_fn(self.d, |a, b| {
            let p = &inv[pair_index(a, b)];
            p.apply(i) < p.apply(j)
        })
    }

    /// Checks every triangle of letters in every `G_ij`, returning the first
    /// directed 3-cycle found.
    pub fn acyclicity_witness(&self) -> Option<CycleWitness> {
        let inv: Vec<Permutation> = self.perms.iter().map(Permutation::inverse).collect();
        let fwd = |i: usize, j: usize, a: usize, b: usize| {
            let p = &inv[pair_index(a, b)];
            p.apply(i) < p.apply(j)
        };
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                for c in 3..=self.d {
                    for b in 2..c {
                        for a in 1..b {
                            let ab = fwd(i, j, a, b);
                            let bc = fwd(i, j, b, c);
                            let ac = fwd(i, j, a, c);
                            if ab && bc && !ac {
                                return Some(CycleWitness { i, j, cycle: (a, b, c) });
                            }
                            if !ab && !bc && ac {
                                return Some(CycleWitness { i, j, cycle: (a, c, b) });
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclicity_witness().is_none()
    }

    /// Acyclicity decided by the out-degree criterion on each full `G_ij`.
    pub fn is_acyclic_by_degrees(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.g_graph_unchecked(i, j).is_acyclic()))
    }

    fn require_acyclic(&self) -> Result<()> {
        match self.acyclicity_witness() {
            Some(w) => Err(w.into()),
            None => Ok(()),
        }
    }

    /// The dual system on `dΔ_{n-1}`: `σ*_ij` lists the letters by
    /// decreasing out-degree in `G_ij`.
    pub fn dual(&self) -> Result<SystemOfPermutations> {
        self.require_acyclic()?;
        let perms = pairs(self.n)
            .map(|(i, j)| {
                self.g_graph_unchecked(i, j)
                    .to_permutation()
                    .expect("acyclic system has acyclic graphs")
            })
            .collect();
        Ok(SystemOfPermutations {
            n: self.d,
            d: self.n,
            perms,
        })
    }

    /// Removes color `i` from every permutation; colors above `i` shift down.
    pub fn delete(&self, i: usize) -> Result<Minor<SystemOfPermutations>> {
        check_index("color", i, self.n)?;
        let perms = self.perms.iter().map(|p| p.delete_value(i)).collect();
        Ok(Minor {
            inner: SystemOfPermutations {
                n: self.n - 1,
                d: self.d,
                perms,
            },
            original_labels: (1..=self.n).filter(|&k| k != i).collect(),
        })
    }

    /// Restricts to the facet opposite letter `a`; letters above `a` shift down.
    pub fn contract(&self, a: usize) -> Result<Minor<SystemOfPermutations>> {
        check_index("letter", a, self.d)?;
        let old = |x: usize| if x >= a { x + 1 } else { x };
        let inner = SystemOfPermutations::from_fn(self.n, self.d - 1, |x, y| self.perm(old(x), old(y)));
        Ok(Minor {
            inner,
            original_labels: (1..=self.d).filter(|&k| k != a).collect(),
        })
    }

    /// Renames color `k` to `map[k - 1]`.
    pub fn relabel_colors(&self, map: &[usize]) -> SystemOfPermutations {
        SystemOfPermutations {
            n: self.n,
            d: self.d,
            perms: self.perms.iter().map(|p| p.relabel_values(map)).collect(),
        }
    }

    /// Renames letter `a` to `map[a - 1]`.
    pub fn relabel_letters(&self, map: &[usize]) -> SystemOfPermutations {
        let mut inv = vec![0; self.d];
        for (k, &x) in map.iter().enumerate() {
            inv[x - 1] = k + 1;
        }
        SystemOfPermutations::from_fn(self.n, self.d, |x, y| self.perm(inv[x - 1], inv[y - 1]))
    }

    /// `T[i][j]`: the unique source of `G_ij` for `i ≠ j`, the full alphabet
    /// on the diagonal.
    pub fn table_of_positions(&self) -> Result<TableOfPositions> {
        self.require_acyclic()?;
        let mut entries = vec![vec![Letters::full(self.d); self.n]; self.n];
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let g = self.g_graph_unchecked(i, j);
                let perm = g.to_permutation().expect("acyclic");
                entries[i - 1][j - 1] = Letters::single(perm.apply(1));
                entries[j - 1][i - 1] = Letters::single(perm.apply(self.d));
            }
        }
        Ok(TableOfPositions {
            n: self.n,
            d: self.d,
            entries,
        })
    }

    /// `x^i_a = #{j ≠ i : a is the source of G_ij}`.
    pub fn simplex_positions(&self) -> Result<SimplexPositionList> {
        Ok(self.table_of_positions()?.positions())
    }
}

/// The `n × n` table whose row `i` lists the Minkowski summands of the
/// unit simplex of color `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableOfPositions {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<Vec<Letters>>,
}

impl TableOfPositions {
    pub fn row(&self, i: usize) -> &[Letters] {
        &self.entries[i - 1]
    }

    pub fn positions(&self) -> SimplexPositionList {
        let positions = self
            .entries
            .iter()
            .map(|row| {
                let mut x = vec![0; self.d];
                for s in row.iter().filter(|s| s.len() == 1) {
                    x[s.first().unwrap() - 1] += 1;
                }
                x
            })
            .collect();
        SimplexPositionList { d: self.d, positions }
    }

    /// `H_ab`: edge `i → j` iff some column has `a` in row `i` and `b` in
    /// row `j` (diagonal entries contain every letter).
    pub fn h_graph(&self, a: usize, b: usize) -> HGraph {
        let mut edges = BTreeSet::new();
        for col in 0..self.n {
            for i in 0..self.n {
                if !self.entries[i][col].contains(a) {
                    continue;
                }
                for j in 0..self.n {
                    if j != i && self.entries[j][col].contains(b) {
                        edges.insert((i + 1, j + 1));
                    }
                }
            }
        }
        HGraph { n: self.n, edges }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl HGraph {
    pub fn is_subgraph_of(&self, t: &Tournament) -> bool {
        self.edges.iter().all(|&(i, j)| t.has_edge(i, j))
    }
}

/// Ordered lattice points `x^1, ..., x^n` with coordinates summing to `n-1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SimplexPositionList {
    pub d: usize,
    pub positions: Vec<Vec<usize>>,
}

/// A subsimplex `{x : x ≥ m}` of size `k` holding more than `k` positions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpreadOutWitness {
    pub k: usize,
    pub m: Vec<usize>,
    pub count: usize,
}

impl SimplexPositionList {
    pub fn new(d: usize, positions: Vec<Vec<usize>>) -> Result<SimplexPositionList> {
        let n = positions.len();
        for x in &positions {
            if x.len() != d || x.iter().sum::<usize>() + 1 != n {
                return Err(Error::DimensionMismatch(format!(
                    "position {x:?} is not a lattice point of {}Δ_{}",
                    n.saturating_sub(1),
                    d.saturating_sub(1)
                )));
            }
        }
        Ok(SimplexPositionList { d, positions })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    /// Checks every subsimplex `{x ≥ m}` with `Σm = n - k`, `1 ≤ k < n`.
    pub fn spread_out_violation(&self) -> Option<SpreadOutWitness> {
        let n = self.n();
        for k in 1..n {
            for m in weak_compositions(n - k, self.d) {
                let count = self
                    .positions
                    .iter()
                    .filter(|x| x.iter().zip(&m).all(|(xa, ma)| xa >= ma))
                    .count();
                if count > k {
                    return Some(SpreadOutWitness { k, m, count });
                }
            }
        }
        None
    }

    pub fn is_spread_out(&self) -> bool {
        self.spread_out_violation().is_none()
    }
}

/// All vectors of `parts` nonnegative integers summing to `total`, in
/// lexicographic order.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=total {
            cur.push(x);
            go(total - x, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn sys3(s12: &str, s23: &str, s31: &str) -> SystemOfPermutations {
        SystemOfPermutations::from_pairs(s12.len(), 3, [((1, 2), p(s12)), ((2, 3), p(s23)), ((3, 1), p(s31))]).unwrap()
    }

    #[test]
    fn reverse_is_derived() {
        let s = sys3("132", "213", "231");
        assert_eq!(s.perm(3, 1), p("231"));
        assert_eq!(s.perm(1, 3), p("132"));
        assert_eq!(s.perm(2, 1), s.perm(1, 2).reversed());
    }

    #[test]
    fn dual_of_worked_example() {
        let s = sys3("132", "213", "231");
        let g = s.g_graph(1, 2).unwrap();
        assert_eq!(g.to_permutation().unwrap(), p("132"));
        let dual = s.dual().unwrap();
        assert_eq!(dual.perm(1, 2), p("132"));
        assert_eq!(dual.perm(2, 3), p("231"));
        assert_eq!(dual.perm(3, 1), p("321"));
        assert_eq!(dual.dual().unwrap(), s);
    }

    #[test]
    fn smallest_cyclic_system() {
        let s = sys3("12", "12", "12");
        assert!(!s.g_graph(1, 2).unwrap().is_acyclic());
        let w = s.acyclicity_witness().unwrap();
        assert_eq!((w.i, w.j), (1, 2));
        assert!(matches!(s.dual(), Err(Error::NotAcyclic { .. })));
    }

    #[test]
    fn four_color_system_is_acyclic_and_deletes() {
        let s = SystemOfPermutations::from_uvw(p("1423"), p("3124"), p("4321")).unwrap();
        assert!(s.is_acyclic());
        let del = s.delete(2).unwrap();
        assert_eq!(del.original_labels, vec![1, 3, 4]);
        let back = |q: Permutation| q.relabel_values(&del.original_labels);
        let (u, v, w) = del.inner.uvw().unwrap();
        assert_eq!(
            [back(u), back(v), back(w)].map(|q| q.to_string()),
            ["143", "314", "431"]
        );
    }

    #[test]
    fn table_of_positions_example() {
        let s = SystemOfPermutations::from_uvw(p("123"), p("231"), p("312")).unwrap();
        let t = s.table_of_positions().unwrap();
        let rows: Vec<String> = t
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        assert_eq!(rows, ["ABC,C,B", "A,ABC,B", "A,C,ABC"]);
        assert_eq!(
            t.positions().positions,
            vec![vec![0, 1, 1], vec![1, 1, 0], vec![1, 0, 1]]
        );
        let h = t.h_graph(1, 2);
        assert_eq!(h.edges.into_iter().collect::<Vec<_>>(), vec![(2, 1), (3, 1), (3, 2)]);
    }

    #[test]
    fn spread_out_examples() {
        let same = SimplexPositionList::new(2, vec![vec![1, 0], vec![1, 0]]).unwrap();
        let w = same.spread_out_violation().unwrap();
        assert_eq!(w.k, 1);
        let ok = SimplexPositionList::new(3, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert!(ok.is_spread_out());
        let single = SimplexPositionList::new(4, vec![vec![0; 4]]).unwrap();
        assert!(single.is_spread_out());
    }

    #[test]
    fn single_color_system() {
        let s = SystemOfPermutations::identity(1, 4);
        assert!(s.is_acyclic());
        assert_eq!(s.simplex_positions().unwrap().positions, vec![vec![0; 4]]);
        assert!(s.table_of_positions().unwrap().h_graph(1, 2).edges.is_empty());
        assert_eq!(s.delete(1).unwrap().inner.n(), 0);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(weak_compositions(2, 3).len(), 6);
        assert_eq!(weak_compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(weak_compositions(3, 1), vec![vec![3]]);
    }
}
