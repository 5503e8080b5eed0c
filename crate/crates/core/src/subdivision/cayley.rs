//! The Cayley trick: fine mixed cells of `nΔ_{d-1}` are the simplices of a
//! triangulation of `Δ_{n-1} × Δ_{d-1}`, i.e. spanning trees of the
//! complete bipartite graph `K_{n,d}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FineMixedSubdivision, MixedCell};
use crate::error::{Error, Result};
use crate::letters::Letters;

/// A simplex of `Δ_{n-1} × Δ_{d-1}`, given by its vertices `(color, letter)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CayleySimplex {
    pub vertices: Vec<(usize, usize)>,
}

impl CayleySimplex {
    pub fn from_cell(cell: &MixedCell) -> CayleySimplex {
        let vertices = cell
            .summands()
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |a| (i + 1, a)))
            .collect();
        CayleySimplex { vertices }
    }

    pub fn to_cell(&self, n: usize) -> MixedCell {
        let mut summands = vec![Letters::EMPTY; n];
        for &(i, a) in &self.vertices {
            summands[i - 1].insert(a);
        }
        MixedCell::new(summands)
    }
}

pub fn mixed_to_cayley(s: &FineMixedSubdivision) -> Vec<CayleySimplex> {
    s.cells().iter().map(CayleySimplex::from_cell).collect()
}

/// Rebuilds the mixed subdivision of a triangulation; fails unless every
/// simplex is a spanning tree and the cells tile `nΔ_{d-1}`.
pub fn cayley_to_mixed(n: usize, d: usize, simplices: &[CayleySimplex]) -> Result<FineMixedSubdivision> {
    let mut cells = Vec::with_capacity(simplices.len());
    for t in simplices {
        if t.vertices.iter().any(|&(i, a)| i == 0 || i > n || a == 0 || a > d) {
            return Err(Error::NotATriangulation(format!(
                "simplex {:?} has a vertex out of range",
                t.vertices
            )));
        }
        let cell = t.to_cell(n);
        if t.vertices.len() != n + d - 1 || !cell.is_fine(d) {
            return Err(Error::NotATriangulation(format!(
                "simplex {:?} is not a spanning tree of K_{{{n},{d}}}",
                t.vertices
            )));
        }
        cells.push(cell);
    }
    let s = FineMixedSubdivision::new(n, d, cells)?;
    s.validate().map_err(|e| Error::NotATriangulation(e.to_string()))?;
    Ok(s)
}

/// Spanning trees as bitmasks: bit `(i-1)*d + (a-1)` is the edge `(i, a)`.
struct Grid {
    n: usize,
    d: usize,
}

impl Grid {
    fn bit(&self, i: usize, a: usize) -> u64 {
        1 << ((i - 1) * self.d + (a - 1))
    }

    fn edges(&self, t: u64) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n)
            .flat_map(move |i| (1..=self.d).map(move |a| (i, a)))
            .filter(move |&(i, a)| t & self.bit(i, a) != 0)
    }

    /// Connected components of the forest `t`, as node labels: colors are
    /// `0..n`, letters `n..n+d`.
    fn components(&self, t: u64) -> Vec<usize> {
        let mut comp: Vec<usize> = (0..self.n + self.d).collect();
        fn find(c: &mut [usize], mut x: usize) -> usize {
            while c[x] != x {
                c[x] = c[c[x]];
                x = c[x];
            }
            x
        }
        for (i, a) in self.edges(t) {
            let (x, y) = (find(&mut comp, i - 1), find(&mut comp, self.n + a - 1));
            comp[x] = y;
        }
        (0..comp.len()).map(|x| find(&mut comp, x)).collect()
    }

    fn is_spanning_tree(&self, t: u64) -> bool {
        if t.count_ones() as usize + 1 != self.n + self.d {
            return false;
        }
        let comp = self.components(t);
        comp.iter().all(|&c| c == comp[0])
    }

    fn to_cell(&self, t: u64) -> MixedCell {
        let mut summands = vec![Letters::EMPTY; self.n];
        for (i, a) in self.edges(t) {
            summands[i - 1].insert(a);
        }
        MixedCell::new(summands)
    }

    fn all_trees(&self) -> Vec<u64> {
        let m = self.n * self.d;
        let k = self.n + self.d - 1;
        let mut out = Vec::new();
        fn go(g: &Grid, start: usize, m: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
            if left == 0 {
                if g.is_spanning_tree(cur) {
                    out.push(cur);
                }
                return;
            }
            for e in start..=m - left {
                go(g, e + 1, m, left - 1, cur | 1 << e, out);
            }
        }
        go(self, 0, m, k, 0, &mut out);
        out
    }

    /// Whether the tree's simplex contains a fixed generic point, i.e. the
    /// unique flow on its edges with the point's marginals is positive.
    fn contains_generic_point(&self, t: u64) -> bool {
        let (n, d) = (self.n, self.d);
        let big: i128 = 1 << (n + d + 1);
        let mut w = vec![0i128; n + d];
        for i in 0..n.saturating_sub(1) {
            w[i] = 1 << i;
        }
        for a in 0..d.saturating_sub(1) {
            w[n + a] = 1 << (n + a);
        }
        w[n - 1] = (0..d - 1).map(|a| w[n + a]).sum::<i128>() + big;
        w[n + d - 1] = (0..n - 1).map(|i| w[i]).sum::<i128>() + big;
        let mut edges: Vec<(usize, usize)> = self.edges(t).map(|(i, a)| (i - 1, n + a - 1)).collect();
        let mut degree = vec![0usize; n + d];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        while !edges.is_empty() {
            let k = edges
                .iter()
                .position(|&(u, v)| degree[u] == 1 || degree[v] == 1)
                .expect("a tree has a leaf");
            let (u, v) = edges.swap_remove(k);
            let (leaf, other) = if degree[u] == 1 { (u, v) } else { (v, u) };
            let flow = w[leaf];
            if flow <= 0 {
                return false;
            }
            w[other] -= flow;
            w[leaf] = 0;
            degree[leaf] -= 1;
            degree[other] -= 1;
        }
        true
    }

    /// Two tree simplices meet in a common face iff the digraph with tree
    /// edges of `s` oriented color → letter and those of `t` letter → color
    /// has no directed cycle through a non-shared edge.
    fn compatible(&self, s: u64, t: u64) -> bool {
        let (n, d) = (self.n, self.d);
        let nodes = n + d;
        let mut reach = vec![0u32; nodes];
        for (i, a) in self.edges(s) {
            reach[i - 1] |= 1 << (n + a - 1);
        }
        for (i, a) in self.edges(t) {
            reach[n + a - 1] |= 1 << (i - 1);
        }
        for k in 0..nodes {
            for v in 0..nodes {
                if reach[v] >> k & 1 == 1 {
                    reach[v] |= reach[k];
                }
            }
        }
        for (i, a) in self.edges(s & !t) {
            if reach[n + a - 1] >> (i - 1) & 1 == 1 {
                return false;
            }
        }
        for (i, a) in self.edges(t & !s) {
            if reach[i - 1] >> (n + a - 1) & 1 == 1 {
                return false;
            }
        }
        true
    }
}

/// Every triangulation of `Δ_{n-1} × Δ_{d-1}`, as mixed subdivisions in
/// sorted order. Each triangulation contains exactly one simplex through a
/// fixed generic point; the search branches on that simplex, then
/// repeatedly glues a simplex onto the smallest unmatched interior facet.
pub(crate) fn enumerate_triangulations(n: usize, d: usize, workers: usize) -> Vec<FineMixedSubdivision> {
    assert!(n >= 1 && d >= 1 && n * d <= 64 && n + d <= 32);
    let grid = Grid { n, d };
    let trees = grid.all_trees();
    let starts: Vec<u64> = trees
        .iter()
        .copied()
        .filter(|&t| grid.contains_generic_point(t))
        .collect();
    let per_start = crate::parallel::map(starts, workers, |t| {
        let mut out = Vec::new();
        let mut chosen = vec![t];
        let mut facets = BTreeMap::new();
        add_facets(&grid, t, &mut facets);
        search(&grid, &mut chosen, &mut facets, &mut out);
        out
    });
    let mut all: Vec<FineMixedSubdivision> = per_start
        .into_iter()
        .flatten()
        .map(|ts| {
            let cells = ts.iter().map(|&t| grid.to_cell(t)).collect();
            FineMixedSubdivision::new(n, d, cells).expect("well-formed cells")
        })
        .collect();
    all.sort();
    all
}

/// Interior facets `t - e`, each with the chosen simplices containing it.
fn add_facets(g: &Grid, t: u64, facets: &mut BTreeMap<u64, Vec<u64>>) {
    for (i, a) in g.edges(t) {
        let deg_i = g.edges(t).filter(|&(ii, _)| ii == i).count();
        let deg_a = g.edges(t).filter(|&(_, aa)| aa == a).count();
        if deg_i > 1 && deg_a > 1 {
            facets.entry(t & !g.bit(i, a)).or_default().push(t);
        }
    }
}

fn remove_facets(g: &Grid, t: u64, facets: &mut BTreeMap<u64, Vec<u64>>) {
    for (i, a) in g.edges(t) {
        let f = t & !g.bit(i, a);
        if let Some(owners) = facets.get_mut(&f) {
            owners.retain(|&o| o != t);
            if owners.is_empty() {
                facets.remove(&f);
            }
        }
    }
}

fn search(g: &Grid, chosen: &mut Vec<u64>, facets: &mut BTreeMap<u64, Vec<u64>>, out: &mut Vec<Vec<u64>>) {
    let open = facets
        .iter()
        .find(|(_, owners)| owners.len() == 1)
        .map(|(&f, owners)| (f, owners[0]));
    let Some((f, owner)) = open else {
        let mut ts = chosen.clone();
        ts.sort();
        out.push(ts);
        return;
    };
    // The facet's tree edge e = (i, a) leaves i's component K1; the simplex
    // on the other side adds an edge from a color outside K1 to a letter
    // inside K1.
    let (ei, _) = g.edges(owner & !f).next().expect("owner extends the facet by one edge");
    let comp = g.components(f);
    let k1 = comp[ei - 1];
    for i2 in (1..=g.n).filter(|&i2| comp[i2 - 1] != k1) {
        for a2 in (1..=g.d).filter(|&a2| comp[g.n + a2 - 1] == k1) {
            let t = f | g.bit(i2, a2);
            if chosen.contains(&t) || !chosen.iter().all(|&s| g.compatible(s, t)) {
                continue;
            }
            chosen.push(t);
            add_facets(g, t, facets);
            search(g, chosen, facets, out);
            remove_facets(g, t, facets);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        for (n, d) in [(1, 3), (2, 2), (2, 3), (3, 3), (3, 4)] {
            let g = Grid { n, d };
            let expected = n.pow(d as u32 - 1) * d.pow(n as u32 - 1);
            assert_eq!(g.all_trees().len(), expected, "({n},{d})");
            assert!(g.all_trees().iter().any(|&t| g.contains_generic_point(t)));
        }
    }

    #[test]
    fn triangulation_counts() {
        for (n, d, count) in [(1, 3, 1), (2, 2, 2), (2, 3, 6), (2, 4, 24), (3, 3, 108)] {
            let all = enumerate_triangulations(n, d, 1);
            assert_eq!(all.len(), count, "({n},{d})");
            for s in &all {
                assert_eq!(s.validate(), Ok(()));
            }
        }
    }

    #[test]
    fn prism_round_trip() {
        let s = FineMixedSubdivision::new(
            2,
            3,
            vec![
                MixedCell::from_lists(&[vec![1, 2, 3], vec![2]]),
                MixedCell::from_lists(&[vec![1, 3], vec![1, 2]]),
                MixedCell::from_lists(&[vec![3], vec![1, 2, 3]]),
            ],
        )
        .unwrap();
        let simplices = mixed_to_cayley(&s);
        assert!(simplices.iter().all(|t| t.vertices.len() == 4));
        assert_eq!(cayley_to_mixed(2, 3, &simplices).unwrap(), s);
        let bad = vec![simplices[0].clone()];
        assert!(matches!(cayley_to_mixed(2, 3, &bad), Err(Error::NotATriangulation(_))));
    }
}
