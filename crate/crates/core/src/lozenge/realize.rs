//! Constructive realization of an acyclic `d = 3` system, one color at a
//! time. Given a tiling for colors `1..k-1`, the new triangle `k` is placed
//! at a lattice point `M` joined by tile-edge paths to the three boundary
//! points where its rays must land; the tiling is cut along the paths,
//! the three corner regions move apart and the cuts fill with rhombi.
//! When no `M` works, the smaller tiling is retiled by hexagon flips.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{add, index, points, realize_via_routing, sub, third, LozengeTiling, Point, NONE};
use crate::error::{Error, Result};
use crate::system::SystemOfPermutations;

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Tilings explored by flips per insertion before giving up on the cut.
const FLIP_STATE_CAP: usize = 4096;

/// What the construction had to do beyond direct insertion.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct RealizeTrace {
    /// Colors `k` inserted into the tiling as it was.
    pub direct: Vec<usize>,
    /// Colors `k` inserted after retiling by flips, with the number of
    /// tilings visited.
    pub retiled: Vec<(usize, usize)>,
    /// Colors `k` for which the flip search hit its cap and the routing
    /// construction was used instead.
    pub fallbacks: Vec<usize>,
}

/// A tiling whose system is `sigma`.
pub fn realize(sigma: &SystemOfPermutations) -> Result<LozengeTiling> {
    realize_traced(sigma).map(|(t, _)| t)
}

pub fn realize_traced(sigma: &SystemOfPermutations) -> Result<(LozengeTiling, RealizeTrace)> {
    if sigma.d() != 3 {
        return Err(Error::UnsupportedDimension(sigma.d()));
    }
    if let Some(w) = sigma.acyclicity_witness() {
        return Err(w.into());
    }
    let n = sigma.n();
    let mut trace = RealizeTrace::default();
    if n == 0 {
        return Ok((LozengeTiling::from_parts(0, Vec::new(), Vec::new())?, trace));
    }
    // prefixes[k - 1] is the system restricted to colors 1..=k.
    let mut prefixes = vec![sigma.clone()];
    for k in (2..=n).rev() {
        let smaller = prefixes.last().unwrap().delete(k)?.inner;
        prefixes.push(smaller);
    }
    prefixes.reverse();
    let mut tiling = LozengeTiling::from_parts(1, vec![[0, 0, 0]], Vec::new())?;
    for (k, target) in prefixes.iter().enumerate().skip(1).map(|(i, s)| (i + 1, s)) {
        tiling = extend(&tiling, target, k, &mut trace)?;
    }
    if tiling.system()? != *sigma {
        return Err(Error::InternalInvariantViolation(
            "realized tiling has the wrong system".into(),
        ));
    }
    Ok((tiling, trace))
}

fn extend(
    old: &LozengeTiling,
    target: &SystemOfPermutations,
    k: usize,
    trace: &mut RealizeTrace,
) -> Result<LozengeTiling> {
    if let Some(t) = insert(old, target)? {
        trace.direct.push(k);
        return Ok(t);
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::from([old.matching().to_vec()]);
    let mut queue = VecDeque::from([old.clone()]);
    while let Some(cur) = queue.pop_front() {
        for next in cur.flips() {
            if !seen.insert(next.matching().to_vec()) {
                continue;
            }
            if let Some(t) = insert(&next, target)? {
                trace.retiled.push((k, seen.len()));
                return Ok(t);
            }
            if seen.len() >= FLIP_STATE_CAP {
                trace.fallbacks.push(k);
                return realize_via_routing(target);
            }
            queue.push_back(next);
        }
    }
    // The whole flip class failed; the routing search settles it.
    trace.fallbacks.push(k);
    realize_via_routing(target)
}

/// Lattice points of the side-`m` triangle reachable from `start` by the
/// steps `+e_s - e_t` along tile edges.
fn reach(t: &LozengeTiling, start: Point, steps: [(usize, usize); 2]) -> Vec<bool> {
    let m = t.n();
    let mut seen = vec![false; (m + 1) * (m + 1)];
    seen[index(m, start)] = true;
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        for &(s, u) in &steps {
            if let Some(q) = step(t, p, s, u) {
                if !std::mem::replace(&mut seen[index(m, q)], true) {
                    stack.push(q);
                }
            }
        }
    }
    seen
}

/// `p + e_s - e_t` if the unit segment to it is a tile edge.
fn step(t: &LozengeTiling, p: Point, s: usize, u: usize) -> Option<Point> {
    let x = sub(p, u)?;
    t.edge_present(x, third(s, u)).then(|| add(x, s))
}

/// A cut edge: the up triangle `x` whose edge of type `c` lies on a path
/// separating region `c` (the side of `x`) from region `other`.
struct CutEdge {
    x: Point,
    c: usize,
    other: usize,
}

/// Walks from `m` down to the target, always staying inside `allowed`.
fn walk(t: &LozengeTiling, from: Point, steps: [(usize, usize); 2], allowed: &[bool], cut: &mut Vec<CutEdge>) -> bool {
    let size = t.n();
    let mut p = from;
    let (_, down) = steps[0];
    while p[down] > 0 {
        let next = steps.iter().find_map(|&(s, u)| {
            let q = step(t, p, s, u)?;
            allowed[index(size, q)].then_some((q, s, u))
        });
        let Some((q, s, u)) = next else { return false };
        let c = third(s, u);
        cut.push(CutEdge {
            x: sub(p, u).unwrap(),
            c,
            other: third(c, down),
        });
        p = q;
    }
    true
}

/// The tiling with triangle `k = old.n() + 1` inserted, if some `M` admits
/// the cut on this tiling.
fn insert(old: &LozengeTiling, target: &SystemOfPermutations) -> Result<Option<LozengeTiling>> {
    let m = old.n();
    let k = m + 1;
    let slot = |a: usize, b: usize| target.perm(a, b).position(k) - 1;
    // Where the three new rays reach the boundary of the old triangle.
    let d = {
        let s = slot(2, 3);
        [0, m - s, s]
    };
    let e = {
        let s = slot(1, 3);
        [m - s, 0, s]
    };
    let f = {
        let s = slot(1, 2);
        [m - s, s, 0]
    };
    let to_d = reach(old, d, [(A, B), (A, C)]);
    let to_e = reach(old, e, [(B, A), (B, C)]);
    let to_f = reach(old, f, [(C, A), (C, B)]);
    let mut candidates: Vec<Point> = points(m)
        .into_iter()
        .filter(|&p| {
            let i = index(m, p);
            to_d[i] && to_e[i] && to_f[i]
        })
        .collect();
    candidates.sort_by_key(|p| (p[C], p[A]));
    for apex in candidates {
        let mut cut = Vec::new();
        let ok = walk(old, apex, [(B, A), (C, A)], &to_d, &mut cut)
            && walk(old, apex, [(A, B), (C, B)], &to_e, &mut cut)
            && walk(old, apex, [(A, C), (B, C)], &to_f, &mut cut);
        if !ok {
            continue;
        }
        if let Some(t) = glue(old, apex, &cut)? {
            if t.system()? == *target {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// Cuts `old` along the given edges, moves each corner region `R` by
/// `e_R`, fills the cuts with rhombi and puts the new triangle at `apex`.
fn glue(old: &LozengeTiling, apex: Point, cut: &[CutEdge]) -> Result<Option<LozengeTiling>> {
    let m = old.n();
    let k = m + 1;
    // Unit triangles: up ones at 0.., down ones after them.
    let ups = m * m;
    let up_id = |x: Point| index(m - 1, x);
    let down_id = |z: Point| ups + index(m - 2, z);
    let total = ups + if m >= 2 { (m - 1) * (m - 1) } else { 0 };
    let mut region = vec![NONE; total];
    let mut blocked: HashSet<(Point, usize)> = HashSet::new();
    let mut stack = Vec::new();
    let assign = |id: usize, r: usize, region: &mut Vec<u8>, stack: &mut Vec<usize>| -> bool {
        match region[id] {
            NONE => {
                region[id] = r as u8;
                stack.push(id);
                true
            }
            prev => prev as usize == r,
        }
    };
    for ce in cut {
        blocked.insert((ce.x, ce.c));
        if !assign(up_id(ce.x), ce.c, &mut region, &mut stack) {
            return Ok(None);
        }
        if let Some(z) = sub(ce.x, ce.c) {
            if !assign(down_id(z), ce.other, &mut region, &mut stack) {
                return Ok(None);
            }
        }
    }
    let up_points = points(m - 1);
    let down_points = if m >= 2 { points(m - 2) } else { Vec::new() };
    let mut up_at = vec![[0; 3]; ups];
    for &x in &up_points {
        up_at[up_id(x)] = x;
    }
    let mut down_at = vec![[0; 3]; total - ups];
    for &z in &down_points {
        down_at[index(m - 2, z)] = z;
    }
    while let Some(id) = stack.pop() {
        let r = region[id] as usize;
        let neighbours: Vec<usize> = if id < ups {
            let x = up_at[id];
            (0..3)
                .filter(|&c| !blocked.contains(&(x, c)))
                .filter_map(|c| sub(x, c).map(down_id))
                .collect()
        } else {
            let z = down_at[id - ups];
            (0..3)
                .map(|c| (add(z, c), c))
                .filter(|&(x, c)| !blocked.contains(&(x, c)))
                .map(|(x, _)| up_id(x))
                .collect()
        };
        for nb in neighbours {
            if !assign(nb, r, &mut region, &mut stack) {
                return Ok(None);
            }
        }
    }
    let unreached =
        up_points.iter().any(|&x| region[up_id(x)] == NONE) || down_points.iter().any(|&z| region[down_id(z)] == NONE);
    if unreached {
        return Ok(None);
    }
    let triangles: Vec<Point> = old
        .triangles()
        .iter()
        .map(|&x| add(x, region[up_id(x)] as usize))
        .chain(std::iter::once(apex))
        .collect();
    let mut matching = vec![NONE; m * m];
    let place = |z: Point, o: usize, matching: &mut Vec<u8>| -> bool {
        let slot = &mut matching[index(k - 2, z)];
        std::mem::replace(slot, o as u8) == NONE
    };
    for &z in &down_points {
        let r = region[down_id(z)] as usize;
        if !place(add(z, r), old.orientation(z), &mut matching) {
            return Ok(None);
        }
    }
    for ce in cut {
        if !place(ce.x, ce.other, &mut matching) {
            return Ok(None);
        }
    }
    Ok(LozengeTiling::from_parts(k, triangles, matching).ok())
}
