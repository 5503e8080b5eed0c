//! Lozenge tilings of `nΔ_2`: the `d = 3` case.
//!
//! Letters are `A = 1` (top corner), `B = 2` (lower left), `C = 3` (lower
//! right). Up triangles are addressed by `x = (x_A, x_B, x_C)` with
//! `Σx = n - 1` (vertices `x + e_a`), down triangles by `z` with `Σz = n - 2`
//! (vertices `z + (1,1,1) - e_c`). The rhombus `(z, o)` is the union of the
//! down triangle `z` and the up triangle `z + e_o`; as a mixed cell it is
//! `z + {o,p} + {o,r}` where `{p, r}` are the other two letters. Internally
//! letters are 0-based.

mod realize;
mod routing;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::letters::Letters;
use crate::subdivision::{FineMixedSubdivision, MixedCell};
use crate::system::SystemOfPermutations;

pub use realize::{realize, realize_traced, RealizeTrace};
pub use routing::{
    enumerate_tilings, point_of_pq, positions_from_system, pq, realize_via_routing, routing_to_tiling,
    tiling_to_routing, uv_from_positions, Routing, TrianglePositions,
};

pub type Point = [usize; 3];

const NONE: u8 = u8::MAX;

pub(crate) fn add(x: Point, a: usize) -> Point {
    let mut y = x;
    y[a] += 1;
    y
}

pub(crate) fn sub(x: Point, a: usize) -> Option<Point> {
    let mut y = x;
    y[a] = y[a].checked_sub(1)?;
    Some(y)
}

/// The letter different from `a` and `b`.
pub(crate) fn third(a: usize, b: usize) -> usize {
    3 - a - b
}

/// Dense index of a point with coordinate sum `s`.
pub(crate) fn index(s: usize, x: Point) -> usize {
    x[0] * (s + 1) + x[2]
}

/// All points with coordinate sum `s`, in lexicographic order.
pub(crate) fn points(s: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for a in 0..=s {
        for b in 0..=s - a {
            out.push([a, b, s - a - b]);
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LozengeTiling {
    n: usize,
    triangles: Vec<Point>,
    /// Orientation (0-based letter) of the rhombus on each down triangle,
    /// indexed by `index(n - 2, z)`; unused slots hold `NONE`.
    matching: Vec<u8>,
}

/// Tile of a unit triangle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Tile {
    Triangle(usize),
    Rhombus(usize),
}

impl LozengeTiling {
    /// `triangles` lists the unit triangles by color; `rhombi` lists
    /// `(z, o)` with `o` a 1-based letter. Checks that the tiles partition
    /// `nΔ_2`.
    pub fn new(n: usize, triangles: Vec<Point>, rhombi: &[(Point, usize)]) -> Result<LozengeTiling> {
        let s = n.saturating_sub(2);
        let mut matching = vec![NONE; if n >= 2 { (s + 1) * (s + 1) } else { 0 }];
        for &(z, o) in rhombi {
            if n < 2 || z.iter().sum::<usize>() != n - 2 || !(1..=3).contains(&o) {
                return Err(Error::MalformedTiling(format!("bad rhombus {z:?} orientation {o}")));
            }
            let k = index(s, z);
            if matching[k] != NONE {
                return Err(Error::MalformedTiling(format!("two rhombi on down triangle {z:?}")));
            }
            matching[k] = (o - 1) as u8;
        }
        let t = LozengeTiling { n, triangles, matching };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn from_parts(n: usize, triangles: Vec<Point>, matching: Vec<u8>) -> Result<LozengeTiling> {
        let t = LozengeTiling { n, triangles, matching };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let n = self.n;
        if self.triangles.len() != n {
            return Err(Error::MalformedTiling(format!(
                "{} triangles for side length {n}",
                self.triangles.len()
            )));
        }
        if n == 0 {
            return Ok(());
        }
        let mut covered = vec![false; n * n];
        let mut cover = |x: Point| -> Result<()> {
            if x.iter().sum::<usize>() != n - 1 {
                return Err(Error::MalformedTiling(format!("{x:?} is not an up triangle")));
            }
            let k = index(n - 1, x);
            if covered[k] {
                return Err(Error::MalformedTiling(format!("up triangle {x:?} covered twice")));
            }
            covered[k] = true;
            Ok(())
        };
        for &x in &self.triangles {
            cover(x)?;
        }
        if n >= 2 {
            for z in points(n - 2) {
                let o = self.matching[index(n - 2, z)];
                if o == NONE {
                    return Err(Error::MalformedTiling(format!("down triangle {z:?} uncovered")));
                }
                cover(add(z, o as usize))?;
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Up-triangle positions, by color.
    pub fn triangles(&self) -> &[Point] {
        &self.triangles
    }

    /// `(z, o)` for every rhombus, `o` 1-based, sorted by `z`.
    pub fn rhombi(&self) -> Vec<(Point, usize)> {
        if self.n < 2 {
            return Vec::new();
        }
        points(self.n - 2)
            .into_iter()
            .map(|z| (z, self.orientation(z) + 1))
            .collect()
    }

    /// 0-based orientation of the rhombus on down triangle `z`.
    pub(crate) fn orientation(&self, z: Point) -> usize {
        self.matching[index(self.n - 2, z)] as usize
    }

    pub(crate) fn matching(&self) -> &[u8] {
        &self.matching
    }

    /// Whether the edge of type `c` of up triangle `x` is a tile edge (and
    /// not the inner diagonal of a rhombus).
    pub(crate) fn edge_present(&self, x: Point, c: usize) -> bool {
        match sub(x, c) {
            Some(z) => self.orientation(z) != c,
            None => true,
        }
    }

    /// Renames color `i` to `map[i - 1]`.
    pub fn relabel(&self, map: &[usize]) -> LozengeTiling {
        let mut triangles = vec![[0; 3]; self.n];
        for (i, &x) in self.triangles.iter().enumerate() {
            triangles[map[i] - 1] = x;
        }
        LozengeTiling {
            n: self.n,
            triangles,
            matching: self.matching.clone(),
        }
    }

    fn up_tiles(&self) -> HashMap<Point, Tile> {
        let mut up = HashMap::new();
        for (i, &x) in self.triangles.iter().enumerate() {
            up.insert(x, Tile::Triangle(i));
        }
        if self.n >= 2 {
            for z in points(self.n - 2) {
                up.insert(add(z, self.orientation(z)), Tile::Rhombus(index(self.n - 2, z)));
            }
        }
        up
    }

    /// Follows the path of color `color` from its triangle across edges of
    /// type `a` until the boundary. Returns the rhombi crossed (by down
    /// triangle) and the last up triangle.
    fn ray(&self, color: usize, a: usize) -> Result<(Vec<Point>, Point)> {
        let mut y = self.triangles[color];
        let mut crossed = Vec::new();
        while let Some(z) = sub(y, a) {
            let o = self.orientation(z);
            if o == a {
                return Err(Error::MalformedTiling(format!(
                    "ray of color {} re-enters its tile",
                    color + 1
                )));
            }
            crossed.push(z);
            y = add(z, o);
        }
        Ok((crossed, y))
    }

    /// The system of permutations, read off where the three rays of each
    /// triangle reach the boundary.
    pub fn system(&self) -> Result<SystemOfPermutations> {
        let n = self.n;
        let mut words = [vec![0usize; n], vec![0usize; n], vec![0usize; n]];
        for color in 0..n {
            for a in 0..3 {
                let (_, y) = self.ray(color, a)?;
                let hi = if a == 2 { 1 } else { 2 };
                // Side opposite a, read from its smaller corner.
                let slot = &mut words[a][y[hi]];
                if *slot != 0 {
                    return Err(Error::MalformedTiling("two rays end on one boundary edge".into()));
                }
                *slot = color + 1;
            }
        }
        let perm = |w: &Vec<usize>| crate::perm::Permutation::from_word(w.clone());
        // words[a] belongs to the side opposite letter a: (B,C), (A,C), (A,B).
        SystemOfPermutations::from_pairs(
            n,
            3,
            [
                ((2, 3), perm(&words[0])?),
                ((1, 3), perm(&words[1])?),
                ((1, 2), perm(&words[2])?),
            ],
        )
    }

    /// The labelled fine mixed subdivision of this tiling.
    pub fn to_subdivision(&self) -> Result<FineMixedSubdivision> {
        let n = self.n;
        if n == 0 {
            return Err(Error::MalformedTiling("empty tiling".into()));
        }
        let downs = if n >= 2 { points(n - 2) } else { Vec::new() };
        let mut compact = vec![usize::MAX; self.matching.len()];
        for (k, &z) in downs.iter().enumerate() {
            compact[index(n - 2, z)] = k;
        }
        let ntiles = n + downs.len();
        let tile_id = |t: Tile| match t {
            Tile::Triangle(i) => i,
            Tile::Rhombus(k) => n + compact[k],
        };
        let rhombus_id = |z: Point| n + compact[index(n - 2, z)];
        // Two-element summands from the rays.
        let mut big: Vec<Vec<Option<Letters>>> = vec![vec![None; n]; ntiles];
        for color in 0..n {
            big[color][color] = Some(Letters::full(3));
            for a in 0..3 {
                let (crossed, _) = self.ray(color, a)?;
                for z in crossed {
                    let id = rhombus_id(z);
                    if big[id][color].is_some() {
                        return Err(Error::MalformedTiling(format!(
                            "color {} crosses {z:?} twice",
                            color + 1
                        )));
                    }
                    big[id][color] = Some(Letters::full(3) - Letters::single(a + 1));
                }
            }
        }
        let up = self.up_tiles();
        // Tile adjacencies across unit edges: (up tile, down tile, edge type).
        let mut adjacency = Vec::new();
        for (&y, &t) in &up {
            for a in 0..3 {
                if let Some(z) = sub(y, a) {
                    let other = Tile::Rhombus(index(n - 2, z));
                    if other != t {
                        adjacency.push((tile_id(t), tile_id(other)));
                    }
                }
            }
        }
        adjacency.sort();
        let mut labels: Vec<Vec<Option<Letters>>> = big.clone();
        for j in 0..n {
            let on_curve = |id: usize| big[id][j].is_some();
            let mut parent: Vec<usize> = (0..ntiles).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for &(s, t) in &adjacency {
                if !on_curve(s) && !on_curve(t) {
                    let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
                    parent[rs] = rt;
                }
            }
            let mut class_label: BTreeMap<usize, usize> = BTreeMap::new();
            let mut seed = |id: usize, letter: usize, parent: &mut Vec<usize>| -> Result<()> {
                if on_curve(id) {
                    return Ok(());
                }
                let r = find(parent, id);
                match class_label.insert(r, letter) {
                    Some(prev) if prev != letter => Err(Error::MalformedTiling(format!(
                        "color {} gets two letters in one region",
                        j + 1
                    ))),
                    _ => Ok(()),
                }
            };
            for &z in &downs {
                let id = rhombus_id(z);
                let Some(summand) = big[id][j] else { continue };
                let o = self.orientation(z);
                let p = (summand - Letters::single(o + 1)).first().unwrap() - 1;
                // The type-p edge of the up half contains z + 2e_o: color j sits at o there.
                let y = add(z, o);
                if let Some(w) = sub(y, p) {
                    seed(rhombus_id(w), o, &mut parent)?;
                }
                let x = add(z, p);
                seed(tile_id(up[&x]), p, &mut parent)?;
            }
            for id in 0..ntiles {
                if on_curve(id) {
                    continue;
                }
                let r = find(&mut parent, id);
                let letter = class_label
                    .get(&r)
                    .ok_or_else(|| Error::MalformedTiling(format!("no letter for color {} on tile {id}", j + 1)))?;
                labels[id][j] = Some(Letters::single(letter + 1));
            }
        }
        let mut cells = Vec::with_capacity(ntiles);
        for (id, row) in labels.into_iter().enumerate() {
            let summands: Vec<Letters> = row.into_iter().map(|s| s.expect("every summand labelled")).collect();
            let cell = MixedCell::new(summands);
            let expected: Vec<usize> = if id < n {
                self.triangles[id].to_vec()
            } else {
                downs[id - n].to_vec()
            };
            if cell.singleton_counts(3) != expected {
                return Err(Error::MalformedTiling(format!(
                    "cell {cell} does not sit at {expected:?}"
                )));
            }
            cells.push(cell);
        }
        FineMixedSubdivision::new(n, 3, cells)
    }

    /// Reads a tiling off a fine mixed subdivision of `nΔ_2`.
    pub fn from_subdivision(s: &FineMixedSubdivision) -> Result<LozengeTiling> {
        if s.d() != 3 {
            return Err(Error::UnsupportedDimension(s.d()));
        }
        let n = s.n();
        let mut triangles: Vec<Option<Point>> = vec![None; n];
        let mut rhombi = Vec::new();
        for cell in s.cells() {
            let x = cell.singleton_counts(3);
            let x = [x[0], x[1], x[2]];
            let big: Vec<(usize, Letters)> = cell
                .summands()
                .iter()
                .enumerate()
                .filter(|(_, b)| b.len() > 1)
                .map(|(i, &b)| (i, b))
                .collect();
            match big.as_slice() {
                [(i, b)] if b.len() == 3 => {
                    if triangles[*i].replace(x).is_some() {
                        return Err(Error::SimplexCountMismatch { color: i + 1, found: 2 });
                    }
                }
                [(_, b1), (_, b2)] if b1.len() == 2 && b2.len() == 2 && (*b1 & *b2).len() == 1 => {
                    rhombi.push((x, (*b1 & *b2).first().unwrap()));
                }
                _ => return Err(Error::MalformedTiling(format!("cell {cell} is not a lozenge tile"))),
            }
        }
        let triangles = triangles
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or(Error::SimplexCountMismatch { color: i + 1, found: 0 }))
            .collect::<Result<Vec<_>>>()?;
        LozengeTiling::new(n, triangles, &rhombi)
    }

    /// Tilings obtained by one hexagon flip, in order of the flipped point.
    pub fn flips(&self) -> Vec<LozengeTiling> {
        let n = self.n;
        let mut out = Vec::new();
        if n < 3 {
            return out;
        }
        for y in points(n) {
            if y.contains(&0) {
                continue;
            }
            if let Some(t) = self.flip_at(y) {
                out.push(t);
            }
        }
        out
    }

    /// Flips the hexagon around the interior lattice point `y`, if it is
    /// tiled by three rhombi.
    pub fn flip_at(&self, y: Point) -> Option<LozengeTiling> {
        let n = self.n;
        let base = [y[0].checked_sub(1)?, y[1].checked_sub(1)?, y[2].checked_sub(1)?];
        let zs: Vec<Point> = (0..3).map(|c| add(base, c)).collect();
        let os: Vec<usize> = zs.iter().map(|&z| self.orientation(z)).collect();
        let mut used = [false; 3];
        for c in 0..3 {
            if os[c] == c {
                return None;
            }
            let r = third(c, os[c]);
            if used[r] {
                return None;
            }
            used[r] = true;
        }
        let mut matching = self.matching.clone();
        for c in 0..3 {
            matching[index(n - 2, zs[c])] = third(c, os[c]) as u8;
        }
        Some(LozengeTiling {
            n,
            triangles: self.triangles.clone(),
            matching,
        })
    }

    /// Renumbers colors so that triangle `i`'s routing path ends at the
    /// `i`-th bottom vertex.
    pub fn routing_numbered(&self) -> Result<LozengeTiling> {
        let r = tiling_to_routing(self)?;
        let mut map = vec![0; self.n];
        for (k, path) in r.paths.iter().enumerate() {
            let color = self
                .triangles
                .iter()
                .position(|&x| x == path[0])
                .expect("routing paths start at triangles");
            map[color] = k + 1;
        }
        Ok(self.relabel(&map))
    }
}
