//! Routings: families of vertex-disjoint down-paths in the triangular array
//! `G_n` of up-triangle positions, where each vertex `x` has edges to
//! `x - e_A + e_B` and `x - e_A + e_C`. A point `x` has coordinates
//! `(p, q) = (x_A + x_C + 1, x_C + 1)`; path `i` ends at `(i, i)`, the
//! bottom vertex `(0, n - i, i - 1)`.

use serde::{Deserialize, Serialize};

use super::{add, index, points, sub, LozengeTiling, Point, NONE};
use crate::error::{Error, Result};
use crate::perm::{
    ascending_from_inversions, compose_from_factors, compose_from_factors_desc, descending_from_inversions,
    AscendingFactorization, DescendingFactorization, Permutation,
};
use crate::system::SystemOfPermutations;

const A: usize = 0;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Routing {
    pub n: usize,
    /// `paths[i - 1]` runs from the apex of triangle `i` down to `(i, i)`.
    pub paths: Vec<Vec<Point>>,
}

pub(crate) fn bottom(n: usize, i: usize) -> Point {
    [0, n - i, i - 1]
}

/// `(p, q)` coordinates of a vertex.
pub fn pq(x: Point) -> (usize, usize) {
    (x[0] + x[2] + 1, x[2] + 1)
}

/// Inverse of [`pq`] on the array of side `n`.
pub fn point_of_pq(n: usize, p: usize, q: usize) -> Point {
    [p - q, n - p, q - 1]
}

impl Routing {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.paths.len() != n {
            return Err(Error::MalformedRouting(format!(
                "{} paths for n = {n}",
                self.paths.len()
            )));
        }
        let mut used = vec![false; n * n];
        for (k, path) in self.paths.iter().enumerate() {
            let last = *path
                .last()
                .ok_or_else(|| Error::MalformedRouting(format!("path {} is empty", k + 1)))?;
            if last != bottom(n, k + 1) {
                return Err(Error::MalformedRouting(format!(
                    "path {} ends at {last:?}, expected {:?}",
                    k + 1,
                    bottom(n, k + 1)
                )));
            }
            for (t, &x) in path.iter().enumerate() {
                if x.iter().sum::<usize>() + 1 != n {
                    return Err(Error::MalformedRouting(format!("{x:?} is not a vertex of G_{n}")));
                }
                if std::mem::replace(&mut used[index(n - 1, x)], true) {
                    return Err(Error::MalformedRouting(format!("paths meet at {x:?}")));
                }
                if let Some(&y) = path.get(t + 1) {
                    let ok = sub(x, A).is_some_and(|z| y == add(z, 1) || y == add(z, 2));
                    if !ok {
                        return Err(Error::MalformedRouting(format!(
                            "{x:?} -> {y:?} is not an edge of G_{n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One rhombus over each path edge, a vertical rhombus over each isolated
/// vertex, a triangle at the top of each path; triangle `i` is the start of
/// path `i`.
pub fn routing_to_tiling(r: &Routing) -> Result<LozengeTiling> {
    r.validate()?;
    let n = r.n;
    if n == 0 {
        return LozengeTiling::from_parts(0, Vec::new(), Vec::new());
    }
    let s = n.saturating_sub(2);
    let mut matching = vec![NONE; if n >= 2 { (s + 1) * (s + 1) } else { 0 }];
    let mut on_path = vec![false; n * n];
    for path in &r.paths {
        for w in path.windows(2) {
            let z = sub(w[0], A).expect("validated edge");
            let o = if w[1] == add(z, 1) { 1 } else { 2 };
            matching[index(s, z)] = o as u8;
        }
        for &x in path {
            on_path[index(n - 1, x)] = true;
        }
    }
    for x in points(n - 1) {
        if !on_path[index(n - 1, x)] {
            let z = sub(x, A).ok_or_else(|| Error::MalformedRouting(format!("bottom vertex {x:?} unused")))?;
            matching[index(s, z)] = A as u8;
        }
    }
    let triangles = r.paths.iter().map(|p| p[0]).collect();
    LozengeTiling::from_parts(n, triangles, matching)
}

/// The routing of a tiling: from each triangle, step from `x` to the up
/// half of the rhombus on the down triangle `x - e_A`. Paths are ordered
/// by their bottom vertex, whatever the tiling's color numbering.
pub fn tiling_to_routing(t: &LozengeTiling) -> Result<Routing> {
    let n = t.n();
    let mut paths: Vec<Option<Vec<Point>>> = vec![None; n];
    for &start in t.triangles() {
        let mut path = vec![start];
        let mut x = start;
        while let Some(z) = sub(x, A) {
            let o = t.orientation(z);
            if o == A {
                return Err(Error::MalformedRouting(format!(
                    "vertical rhombus below path vertex {x:?}"
                )));
            }
            x = add(z, o);
            path.push(x);
        }
        let k = x[2];
        if paths[k].replace(path).is_some() {
            return Err(Error::MalformedRouting(format!(
                "two paths end at bottom vertex {}",
                k + 1
            )));
        }
    }
    let paths = paths
        .into_iter()
        .map(|p| p.expect("n paths reach n bottom vertices"))
        .collect();
    let r = Routing { n, paths };
    r.validate()?;
    Ok(r)
}

/// Every lozenge tiling of `nΔ_2` exactly once, numbered by routing, in the
/// order of a depth-first search that grows path `1, 2, ...` upward from
/// its bottom vertex (stop first, then step towards `B`, then `C`).
pub fn enumerate_tilings(n: usize) -> Vec<LozengeTiling> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut used = vec![false; n * n];
    let mut paths: Vec<Vec<Point>> = Vec::with_capacity(n);
    grow(n, 1, &mut used, &mut paths, &mut out);
    out
}

fn grow(n: usize, i: usize, used: &mut Vec<bool>, paths: &mut Vec<Vec<Point>>, out: &mut Vec<LozengeTiling>) {
    if i > n {
        let r = Routing {
            n,
            paths: paths.iter().map(|p| p.iter().rev().copied().collect()).collect(),
        };
        out.push(routing_to_tiling(&r).expect("disjoint upward paths form a routing"));
        return;
    }
    let b = bottom(n, i);
    used[index(n - 1, b)] = true;
    paths.push(vec![b]);
    extend(n, i, used, paths, out);
    paths.pop();
    used[index(n - 1, b)] = false;
}

fn extend(n: usize, i: usize, used: &mut Vec<bool>, paths: &mut Vec<Vec<Point>>, out: &mut Vec<LozengeTiling>) {
    grow(n, i + 1, used, paths, out);
    let x = *paths.last().unwrap().last().unwrap();
    for o in [1, 2] {
        if let Some(y) = sub(x, o).map(|y| add(y, A)) {
            let k = index(n - 1, y);
            if !used[k] {
                used[k] = true;
                paths.last_mut().unwrap().push(y);
                extend(n, i, used, paths, out);
                paths.last_mut().unwrap().pop();
                used[k] = false;
            }
        }
    }
}

/// Numbered triangle positions of an acyclic `d = 3` system. Colors are
/// renamed so that `w` becomes `n ... 1`; under that numbering the
/// positions are `(p_i, q_i)` with `p` and `q` read off `u` and `v` by
/// inversion counts.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TrianglePositions {
    /// `routing_label[c - 1]` is the routing number of color `c`.
    pub routing_label: Vec<usize>,
    pub p: AscendingFactorization,
    pub q: DescendingFactorization,
}

impl TrianglePositions {
    pub fn n(&self) -> usize {
        self.routing_label.len()
    }

    /// `(p, q)` of the triangle of color `c` (original numbering).
    pub fn pq_of_color(&self, c: usize) -> (usize, usize) {
        let r = self.routing_label[c - 1];
        (self.p.values()[r - 1], self.q.values()[r - 1])
    }

    /// Up-triangle position `(x_A, x_B, x_C)` of color `c`.
    pub fn point_of_color(&self, c: usize) -> Point {
        let (p, q) = self.pq_of_color(c);
        point_of_pq(self.n(), p, q)
    }
}

pub fn positions_from_system(sigma: &SystemOfPermutations) -> Result<TrianglePositions> {
    let (_, _, w) = sigma.uvw()?;
    if let Some(wit) = sigma.acyclicity_witness() {
        return Err(wit.into());
    }
    let n = sigma.n();
    let mut routing_label = vec![0; n];
    for k in 1..=n {
        routing_label[w.apply(k) - 1] = n + 1 - k;
    }
    let (u, v, _) = sigma.relabel_colors(&routing_label).uvw()?;
    Ok(TrianglePositions {
        routing_label,
        p: ascending_from_inversions(&u),
        q: descending_from_inversions(&v),
    })
}

/// `u = (n..p_n) ∘ ... ∘ (1..p_1)`, `v = (1..q_1) ∘ ... ∘ (n..q_n)` and
/// `w = n ... 1` from routing-numbered positions.
pub fn uv_from_positions(p: &[usize], q: &[usize]) -> Result<(Permutation, Permutation, Permutation)> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch("p and q have different lengths".into()));
    }
    let p = AscendingFactorization::new(p.to_vec())?;
    let q = DescendingFactorization::new(q.to_vec())?;
    Ok((
        compose_from_factors(&p),
        compose_from_factors_desc(&q),
        Permutation::longest(p.len()),
    ))
}

/// Realizes an acyclic `d = 3` system by placing triangles at the
/// positions it determines and searching for vertex-disjoint paths from
/// them to the bottom vertices.
pub fn realize_via_routing(sigma: &SystemOfPermutations) -> Result<LozengeTiling> {
    let pos = positions_from_system(sigma)?;
    let n = sigma.n();
    let target = sigma.relabel_colors(&pos.routing_label);
    let starts: Vec<Point> = (1..=n)
        .map(|r| point_of_pq(n, pos.p.values()[r - 1], pos.q.values()[r - 1]))
        .collect();
    let mut used = vec![false; n * n];
    for &s in &starts {
        if std::mem::replace(&mut used[index(n - 1, s)], true) {
            return Err(Error::NoRoutingFound);
        }
    }
    let mut paths: Vec<Vec<Point>> = Vec::with_capacity(n);
    let found = route(n, 1, &starts, &mut used, &mut paths, &target)?;
    let tiling = found.ok_or(Error::NoRoutingFound)?;
    let mut back = vec![0; n];
    for (c, &r) in pos.routing_label.iter().enumerate() {
        back[r - 1] = c + 1;
    }
    Ok(tiling.relabel(&back))
}

fn route(
    n: usize,
    i: usize,
    starts: &[Point],
    used: &mut Vec<bool>,
    paths: &mut Vec<Vec<Point>>,
    target: &SystemOfPermutations,
) -> Result<Option<LozengeTiling>> {
    if i > n {
        let t = routing_to_tiling(&Routing {
            n,
            paths: paths.clone(),
        })?;
        return Ok((t.system()? == *target).then_some(t));
    }
    paths.push(vec![starts[i - 1]]);
    let found = descend(n, i, starts, used, paths, target)?;
    paths.pop();
    Ok(found)
}

fn descend(
    n: usize,
    i: usize,
    starts: &[Point],
    used: &mut Vec<bool>,
    paths: &mut Vec<Vec<Point>>,
    target: &SystemOfPermutations,
) -> Result<Option<LozengeTiling>> {
    let x = *paths.last().unwrap().last().unwrap();
    let goal = bottom(n, i);
    if x == goal {
        return route(n, i + 1, starts, used, paths, target);
    }
    let Some(z) = sub(x, A) else { return Ok(None) };
    for o in [1, 2] {
        let y = add(z, o);
        if y[1] > goal[1] || y[2] > goal[2] {
            continue;
        }
        let k = index(n - 1, y);
        if used[k] {
            continue;
        }
        used[k] = true;
        paths.last_mut().unwrap().push(y);
        let found = descend(n, i, starts, used, paths, target)?;
        paths.last_mut().unwrap().pop();
        used[k] = false;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
