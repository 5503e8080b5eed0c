//! Fine mixed subdivisions of `nΔ_{d-1}`.

mod cayley;
mod geometry;
mod lp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

pub(crate) use cayley::enumerate_triangulations;
pub use cayley::{cayley_to_mixed, mixed_to_cayley, CayleySimplex};

use crate::error::{check_index, Error, Result};
use crate::letters::Letters;
use crate::perm::Permutation;
use crate::system::{weak_compositions, Minor, SimplexPositionList, SystemOfPermutations};
use crate::tournament::pairs;
use geometry::CellGeometry;

/// A Minkowski sum `B_1 + ... + B_n` of faces of the simplex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedCell {
    summands: Vec<Letters>,
}

impl MixedCell {
    pub fn new(summands: Vec<Letters>) -> MixedCell {
        MixedCell { summands }
    }

    pub fn from_lists(lists: &[Vec<usize>]) -> MixedCell {
        MixedCell::new(lists.iter().map(|l| Letters::from_slice(l)).collect())
    }

    pub fn summands(&self) -> &[Letters] {
        &self.summands
    }

    pub fn summand(&self, i: usize) -> Letters {
        self.summands[i - 1]
    }

    pub fn n(&self) -> usize {
        self.summands.len()
    }

    /// `(|B_1| - 1, ..., |B_n| - 1)`.
    pub fn dim_vector(&self) -> Vec<usize> {
        self.summands.iter().map(|b| b.len().saturating_sub(1)).collect()
    }

    /// Fine iff the dimensions add up to `d - 1` and the bipartite graph
    /// `{(i, a) : a ∈ B_i}` on colors and letters is a spanning tree.
    pub fn is_fine(&self, d: usize) -> bool {
        if self
            .summands
            .iter()
            .any(|b| b.is_empty() || !b.is_subset(Letters::full(d)))
        {
            return false;
        }
        let edges: usize = self.summands.iter().map(|b| b.len()).sum();
        let n = self.n();
        if edges + 1 != n + d {
            return false;
        }
        // Union-find over letters 0..d and colors d..d+n.
        let mut parent: Vec<usize> = (0..n + d).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, b) in self.summands.iter().enumerate() {
            for a in b.iter() {
                let (x, y) = (find(&mut parent, a - 1), find(&mut parent, d + i));
                if x == y {
                    return false;
                }
                parent[x] = y;
            }
        }
        true
    }

    /// Normalized volume `(d-1)! / ∏ (|B_i| - 1)!` of a fine cell.
    pub fn volume(&self, d: usize) -> Result<u128> {
        if let Some(i) = self.summands.iter().position(|b| b.is_empty()) {
            return Err(Error::EmptySummand { summand: i + 1 });
        }
        let mut v = factorial(d.saturating_sub(1));
        for k in self.dim_vector() {
            v /= factorial(k);
        }
        Ok(v)
    }

    /// Letter counts of the singleton summands.
    pub fn singleton_counts(&self, d: usize) -> Vec<usize> {
        let mut x = vec![0; d];
        for b in self.summands.iter().filter(|b| b.len() == 1) {
            x[b.first().unwrap() - 1] += 1;
        }
        x
    }

    /// The dual cell `Z_1 + ... + Z_d` with `Z_a = {i : a ∈ B_i}`.
    pub fn dual(&self, d: usize) -> MixedCell {
        MixedCell::new(
            (1..=d)
                .map(|a| {
                    let mut z = Letters::EMPTY;
                    for (i, b) in self.summands.iter().enumerate() {
                        if b.contains(a) {
                            z.insert(i + 1);
                        }
                    }
                    z
                })
                .collect(),
        )
    }

    pub fn relabel_colors(&self, map: &[usize]) -> MixedCell {
        let mut summands = vec![Letters::EMPTY; self.n()];
        for (i, &b) in self.summands.iter().enumerate() {
            summands[map[i] - 1] = b;
        }
        MixedCell::new(summands)
    }

    pub fn relabel_letters(&self, map: &[usize]) -> MixedCell {
        MixedCell::new(self.summands.iter().map(|b| b.map(map)).collect())
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.summands.iter().map(|b| b.to_vec()).collect()
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

impl fmt::Display for MixedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for MixedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MixedCell({self})")
    }
}

/// Why a list of cells is not a fine mixed subdivision. Cells are referred
/// to by their 0-based index in the (sorted) cell list.
#[derive(Clone, Debug, PartialEq, Eq, ThisError, Serialize, Deserialize)]
pub enum ValidationError {
    #[error("cell {index} ({cell}) is not a fine mixed cell")]
    NotFine { index: usize, cell: String },
    #[error("cells {first} ({first_cell}) and {second} ({second_cell}) do not meet in a common face: {reason}")]
    BadIntersection {
        first: usize,
        first_cell: String,
        second: usize,
        second_cell: String,
        reason: String,
    },
    #[error("cell volumes add up to {found}, expected {expected}")]
    VolumeMismatch { expected: u128, found: u128 },
}

impl ValidationError {
    pub fn kind(&self) -> &'static str {
        match self {
            ValidationError::NotFine { .. } => "NotFine",
            ValidationError::BadIntersection { .. } => "BadIntersection",
            ValidationError::VolumeMismatch { .. } => "VolumeMismatch",
        }
    }
}

/// A list of fine mixed cells of `nΔ_{d-1}`, kept sorted. Construction only
/// checks the shape of the data; [`FineMixedSubdivision::validate`] checks
/// the geometry.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FineMixedSubdivision {
    n: usize,
    d: usize,
    cells: Vec<MixedCell>,
}

/// The `n` unit simplices of a subdivision, by color.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexCells {
    pub positions: SimplexPositionList,
    pub cells: Vec<MixedCell>,
}

impl FineMixedSubdivision {
    pub fn new(n: usize, d: usize, mut cells: Vec<MixedCell>) -> Result<FineMixedSubdivision> {
        if d == 0 || d > 32 {
            return Err(Error::DimensionMismatch(format!("d = {d} outside 1..=32")));
        }
        for c in &cells {
            if c.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "cell {c} has {} summands, expected {n}",
                    c.n()
                )));
            }
            for (i, b) in c.summands().iter().enumerate() {
                if b.is_empty() {
                    return Err(Error::EmptySummand { summand: i + 1 });
                }
                if let Some(a) = b.last().filter(|&a| a > d) {
                    return Err(Error::LetterOutOfRange { letter: a, d });
                }
            }
        }
        cells.sort();
        Ok(FineMixedSubdivision { n, d, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cells(&self) -> &[MixedCell] {
        &self.cells
    }

    pub fn total_volume(&self) -> u128 {
        self.cells.iter().map(|c| c.volume(self.d).unwrap_or(0)).sum()
    }

    /// Checks fineness, then pairwise face-to-face intersections (exact
    /// rational arithmetic), then the volume census `Σ vol = n^{d-1}`.
    pub fn validate(&self) -> Result<(), ValidationError> {
        for (index, c) in self.cells.iter().enumerate() {
            if !c.is_fine(self.d) {
                return Err(ValidationError::NotFine {
                    index,
                    cell: c.to_string(),
                });
            }
        }
        let geoms: Vec<CellGeometry> = self.cells.iter().map(|c| CellGeometry::new(c, self.d)).collect();
        for first in 0..geoms.len() {
            for second in first + 1..geoms.len() {
                if let Err(reason) = geometry::check_pair(&geoms[first], &geoms[second]) {
                    return Err(ValidationError::BadIntersection {
                        first,
                        first_cell: self.cells[first].to_string(),
                        second,
                        second_cell: self.cells[second].to_string(),
                        reason,
                    });
                }
            }
        }
        let expected = (self.n as u128).pow(self.d as u32 - 1);
        let found = self.total_volume();
        if found != expected {
            return Err(ValidationError::VolumeMismatch { expected, found });
        }
        Ok(())
    }

    /// Reads `σ_ab` off the one-dimensional faces on the edge `ab`: the
    /// `k`-th segment from corner `a` has `k - 1` summands `{b}`, and
    /// `σ_ab(k)` is the color whose summand is `{a, b}`.
    pub fn system_of_permutations(&self) -> Result<SystemOfPermutations> {
        let mut perms = Vec::new();
        for (a, b) in pairs(self.d) {
            let ab = Letters::single(a) | Letters::single(b);
            let mut slots: Vec<Option<Vec<Letters>>> = vec![None; self.n];
            for cell in &self.cells {
                let face: Vec<Letters> = cell.summands().iter().map(|&s| s & ab).collect();
                if face.iter().any(|s| s.is_empty()) || face.iter().filter(|&&s| s == ab).count() != 1 {
                    continue;
                }
                let k = face.iter().filter(|&&s| s == Letters::single(b)).count();
                match &slots[k] {
                    None => slots[k] = Some(face),
                    Some(prev) if *prev == face => {}
                    Some(prev) => {
                        return Err(Error::MalformedEdgeRestriction {
                            a,
                            b,
                            reason: format!(
                                "segment {} is both {} and {}",
                                k + 1,
                                MixedCell::new(prev.clone()),
                                MixedCell::new(face)
                            ),
                        })
                    }
                }
            }
            let mut word = Vec::with_capacity(self.n);
            for (k, slot) in slots.iter().enumerate() {
                let face = slot.as_ref().ok_or_else(|| Error::MalformedEdgeRestriction {
                    a,
                    b,
                    reason: format!("no cell covers segment {}", k + 1),
                })?;
                word.push(face.iter().position(|&s| s == ab).unwrap() + 1);
            }
            let p = Permutation::from_word(word).map_err(|e| Error::MalformedEdgeRestriction {
                a,
                b,
                reason: e.to_string(),
            })?;
            perms.push(p);
        }
        SystemOfPermutations::new(self.n, self.d, perms)
    }

    /// The cells with one summand equal to the whole alphabet and all others
    /// singletons, one per color.
    pub fn simplices(&self) -> Result<SimplexCells> {
        let full = Letters::full(self.d);
        let mut found: Vec<Vec<&MixedCell>> = vec![Vec::new(); self.n];
        for c in &self.cells {
            let big: Vec<usize> = (0..self.n).filter(|&i| c.summands()[i].len() > 1).collect();
            if big.len() == 1 && c.summands()[big[0]] == full {
                found[big[0]].push(c);
            } else if self.d == 1 {
                found.iter_mut().for_each(|f| f.push(c));
            }
        }
        let mut positions = Vec::with_capacity(self.n);
        let mut cells = Vec::with_capacity(self.n);
        for (i, f) in found.iter().enumerate() {
            if f.len() != 1 {
                return Err(Error::SimplexCountMismatch {
                    color: i + 1,
                    found: f.len(),
                });
            }
            let mut x = f[0].singleton_counts(self.d);
            if self.d == 1 {
                x[0] -= 1;
            }
            positions.push(x);
            cells.push(f[0].clone());
        }
        Ok(SimplexCells {
            positions: SimplexPositionList { d: self.d, positions },
            cells,
        })
    }

    /// The dual subdivision of `dΔ_{n-1}`.
    pub fn dual(&self) -> Result<FineMixedSubdivision> {
        if self.n == 0 || self.n > 32 {
            return Err(Error::DimensionMismatch(format!("cannot dualize with n = {}", self.n)));
        }
        FineMixedSubdivision::new(self.d, self.n, self.cells.iter().map(|c| c.dual(self.d)).collect())
    }

    /// Drops summand `i` from the cells where it is a single point; colors
    /// above `i` shift down.
    pub fn delete(&self, i: usize) -> Result<Minor<FineMixedSubdivision>> {
        check_index("color", i, self.n)?;
        let cells: BTreeSet<MixedCell> = self
            .cells
            .iter()
            .filter(|c| c.summand(i).len() == 1)
            .map(|c| {
                let mut s = c.summands().to_vec();
                s.remove(i - 1);
                MixedCell::new(s)
            })
            .collect();
        Ok(Minor {
            inner: FineMixedSubdivision::new(self.n - 1, self.d, cells.into_iter().collect())?,
            original_labels: (1..=self.n).filter(|&k| k != i).collect(),
        })
    }

    /// Restricts to the facet opposite letter `a`; letters above `a` shift
    /// down. A cell contributes its face minimizing `x_a` when that face is
    /// a facet: exactly one summand contains `a`, and it has other letters.
    pub fn contract(&self, a: usize) -> Result<Minor<FineMixedSubdivision>> {
        check_index("letter", a, self.d)?;
        if self.d == 1 {
            return Err(Error::DimensionMismatch("cannot contract the only letter".to_string()));
        }
        let cells: BTreeSet<MixedCell> = self
            .cells
            .iter()
            .filter(|c| {
                let holders: Vec<&Letters> = c.summands().iter().filter(|b| b.contains(a)).collect();
                holders.len() == 1 && holders[0].len() >= 2
            })
            .map(|c| MixedCell::new(c.summands().iter().map(|b| b.without_letter_reindexed(a)).collect()))
            .collect();
        Ok(Minor {
            inner: FineMixedSubdivision::new(self.n, self.d - 1, cells.into_iter().collect())?,
            original_labels: (1..=self.d).filter(|&k| k != a).collect(),
        })
    }

    pub fn relabel_colors(&self, map: &[usize]) -> FineMixedSubdivision {
        let cells = self.cells.iter().map(|c| c.relabel_colors(map)).collect();
        FineMixedSubdivision::new(self.n, self.d, cells).expect("relabeling keeps the shape")
    }

    pub fn relabel_letters(&self, map: &[usize]) -> FineMixedSubdivision {
        let cells = self.cells.iter().map(|c| c.relabel_letters(map)).collect();
        FineMixedSubdivision::new(self.n, self.d, cells).expect("relabeling keeps the shape")
    }

    /// Number of cells of each dimension vector.
    pub fn dim_vector_census(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut census = BTreeMap::new();
        for c in &self.cells {
            *census.entry(c.dim_vector()).or_insert(0) += 1;
        }
        census
    }

    /// The first composition `δ` of `d - 1` into `n` parts that is not
    /// carried by exactly one cell. When every `δ` occurs once, the cell of
    /// type `δ` has volume `(d-1)!/∏δ_i!` and the volumes add up to
    /// `n^{d-1}` by the multinomial theorem.
    pub fn census_violation(&self) -> Option<(Vec<usize>, usize)> {
        let census = self.dim_vector_census();
        let compositions = weak_compositions(self.d - 1, self.n);
        for delta in &compositions {
            let count = census.get(delta).copied().unwrap_or(0);
            if count != 1 {
                return Some((delta.clone(), count));
            }
        }
        census.into_iter().find(|(delta, _)| !compositions.contains(delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(text: &str) -> MixedCell {
        MixedCell::new(
            text.split('+')
                .map(|s| Letters::from_slice(&s.bytes().map(|c| (c - b'A' + 1) as usize).collect::<Vec<_>>()))
                .collect(),
        )
    }

    fn subdivision(n: usize, d: usize, cells: &[&str]) -> FineMixedSubdivision {
        FineMixedSubdivision::new(n, d, cells.iter().map(|c| cell(c)).collect()).unwrap()
    }

    #[test]
    fn cell_fineness_and_volume() {
        assert_eq!(cell("ABC+B").volume(3).unwrap(), 1);
        assert_eq!(cell("AC+AB").volume(3).unwrap(), 2);
        assert!(cell("ABC+B").is_fine(3));
        assert!(cell("AC+AB").is_fine(3));
        assert!(!cell("AB+AB").is_fine(3));
        assert!(!cell("AB+C").is_fine(3));
        assert!(cell("ABCD").is_fine(4));
        assert_eq!(cell("ABCD").volume(4).unwrap(), 1);
        assert!(matches!(
            MixedCell::new(vec![Letters::EMPTY]).volume(3),
            Err(Error::EmptySummand { summand: 1 })
        ));
    }

    #[test]
    fn three_tile_example() {
        let s = subdivision(2, 3, &["ABC+B", "AC+AB", "C+ABC"]);
        assert_eq!(s.validate(), Ok(()));
        let sys = s.system_of_permutations().unwrap();
        assert!(sys.is_acyclic());
        let simp = s.simplices().unwrap();
        assert_eq!(simp.positions.positions, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(simp.positions, sys.simplex_positions().unwrap());
        let dual = s.dual().unwrap();
        assert_eq!(dual.validate(), Ok(()));
        assert_eq!(dual.dual().unwrap(), s);
        assert_eq!(dual.system_of_permutations().unwrap(), sys.dual().unwrap());
    }

    /// `w_1..w_d + w_1`, `w_2..w_d + w_1 w_2`, ..., `w_d + w_1..w_d`.
    fn chain(d: usize) -> FineMixedSubdivision {
        let cells = (1..=d)
            .map(|k| {
                MixedCell::new(vec![
                    Letters::from_slice(&(k..=d).collect::<Vec<_>>()),
                    Letters::from_slice(&(1..=k).collect::<Vec<_>>()),
                ])
            })
            .collect();
        FineMixedSubdivision::new(2, d, cells).unwrap()
    }

    #[test]
    fn chain_subdivisions_validate() {
        for d in 1..=6 {
            assert_eq!(chain(d).validate(), Ok(()), "d = {d}");
        }
    }

    #[test]
    fn validation_diagnostics() {
        let dup = subdivision(2, 3, &["ABC+B", "ABC+B", "AC+AB", "C+ABC"]);
        assert_eq!(dup.validate().unwrap_err().kind(), "BadIntersection");
        let empty = FineMixedSubdivision::new(2, 3, vec![]).unwrap();
        assert!(matches!(
            empty.validate(),
            Err(ValidationError::VolumeMismatch { expected: 4, found: 0 })
        ));
        let coarse = subdivision(2, 3, &["AB+AB"]);
        assert_eq!(coarse.validate().unwrap_err().kind(), "NotFine");
        let missing = subdivision(2, 3, &["ABC+B", "C+ABC"]);
        assert_eq!(missing.validate().unwrap_err().kind(), "VolumeMismatch");
    }

    #[test]
    fn single_color() {
        let s = subdivision(1, 4, &["ABCD"]);
        assert_eq!(s.validate(), Ok(()));
        assert_eq!(s.simplices().unwrap().positions.positions, vec![vec![0; 4]]);
        let sys = s.system_of_permutations().unwrap();
        assert!(sys.stored().iter().all(|p| p.word() == [1]));
        let deleted = s.delete(1).unwrap().inner;
        assert_eq!(deleted.cells().len(), 0);
        assert_eq!(s.dim_vector_census(), BTreeMap::from([(vec![3], 1)]));
    }

    #[test]
    fn deletion_and_contraction_of_three_tiles() {
        let s = subdivision(2, 3, &["ABC+B", "AC+AB", "C+ABC"]);
        let del = s.delete(1).unwrap().inner;
        assert_eq!(del, subdivision(1, 3, &["ABC"]));
        let con = s.contract(2).unwrap().inner;
        assert_eq!(con.validate(), Ok(()));
        assert_eq!(
            con.system_of_permutations().unwrap(),
            s.system_of_permutations().unwrap().contract(2).unwrap().inner
        );
        assert_eq!(s.census_violation(), None);
    }
}
