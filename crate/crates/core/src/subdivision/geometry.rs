//! Exact polytope geometry of fine mixed cells.
//!
//! A fine cell `B_1 + ... + B_n` is affinely a product of simplices, so its
//! vertices are the sums `e_{a_1} + ... + e_{a_n}` with `a_i ∈ B_i`, and its
//! facets are "summand `i` avoids letter `a`" for `a ∈ B_i`, `|B_i| ≥ 2`.

use num_rational::BigRational;
use num_traits::Zero;

use super::lp::{self, LpOutcome};
use super::MixedCell;
use crate::letters::Letters;

/// `c·x ≤ h` on the hyperplane `Σx = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Halfspace {
    pub c: Vec<i64>,
    pub h: i64,
}

impl Halfspace {
    fn eval(&self, x: &[i64]) -> i64 {
        self.c.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

pub(crate) struct CellGeometry {
    pub summands: Vec<Letters>,
    pub d: usize,
    /// Vertex labels `(a_1, ..., a_n)` and their coordinates.
    pub vertices: Vec<(Vec<usize>, Vec<i64>)>,
    /// Facet `(i, a)` (0-indexed color, 1-indexed letter) with its halfspace.
    pub facets: Vec<((usize, usize), Halfspace)>,
}

impl CellGeometry {
    /// Requires a fine cell.
    pub fn new(cell: &MixedCell, d: usize) -> CellGeometry {
        let summands = cell.summands().to_vec();
        let mut vertices = Vec::new();
        let mut choice = vec![0usize; summands.len()];
        enumerate_vertices(&summands, d, 0, &mut choice, &mut vertices);
        let mut facets = Vec::new();
        for (i, b) in summands.iter().enumerate() {
            if b.len() < 2 {
                continue;
            }
            for a in b.iter() {
                facets.push(((i, a), facet_functional(&summands, d, i, a)));
            }
        }
        CellGeometry {
            summands,
            d,
            vertices,
            facets,
        }
    }

    fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|(_, f)| f.eval(x) <= f.h)
    }

    /// Functional exposing the face `∏ C_i`: the sum of the facets
    /// `(i, a)` with `a ∉ C_i`.
    fn face_functional(&self, face: &[Letters]) -> Halfspace {
        let mut c = vec![0; self.d];
        let mut h = 0;
        for ((i, a), f) in &self.facets {
            if !face[*i].contains(*a) {
                for (x, y) in c.iter_mut().zip(&f.c) {
                    *x += y;
                }
                h += f.h;
            }
        }
        Halfspace { c, h }
    }
}

fn enumerate_vertices(
    summands: &[Letters],
    d: usize,
    k: usize,
    choice: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<i64>)>,
) {
    if k == summands.len() {
        let mut x = vec![0i64; d];
        for &a in choice.iter() {
            x[a - 1] += 1;
        }
        out.push((choice.clone(), x));
        return;
    }
    for a in summands[k].iter() {
        choice[k] = a;
        enumerate_vertices(summands, d, k + 1, choice, out);
    }
}

/// Solves `c_b = m_j` on every tree edge `(j, b)` except `c_a = m_i - 1`
/// on the edge `(i, a)`, normalised by `c_1 = 0`; the facet is
/// `c·x ≤ Σ m_j`.
fn facet_functional(summands: &[Letters], d: usize, i: usize, a: usize) -> Halfspace {
    let n = summands.len();
    let mut c: Vec<Option<i64>> = vec![None; d];
    let mut m: Vec<Option<i64>> = vec![None; n];
    c[0] = Some(0);
    let mut queue = vec![(true, 0usize)];
    while let Some((is_letter, v)) = queue.pop() {
        if is_letter {
            let cv = c[v].unwrap();
            for (j, b) in summands.iter().enumerate() {
                if b.contains(v + 1) && m[j].is_none() {
                    let delta = if j == i && v + 1 == a { 1 } else { 0 };
                    m[j] = Some(cv + delta);
                    queue.push((false, j));
                }
            }
        } else {
            let mj = m[v].unwrap();
            for b in summands[v].iter() {
                if c[b - 1].is_none() {
                    let delta = if v == i && b == a { -1 } else { 0 };
                    c[b - 1] = Some(mj + delta);
                    queue.push((true, b - 1));
                }
            }
        }
    }
    let c: Vec<i64> = c
        .into_iter()
        .map(|x| x.expect("fine cell is a spanning tree"))
        .collect();
    let h = m.into_iter().map(|x| x.expect("fine cell is a spanning tree")).sum();
    Halfspace { c, h }
}

/// Vertices of `p` lying in `q`, if they form the vertex set of a face
/// `∏ C_i` of `p`; returns `(C, sorted points)`.
fn face_inside(p: &CellGeometry, q: &CellGeometry) -> Result<(Vec<Letters>, Vec<Vec<i64>>), String> {
    let inside: Vec<&(Vec<usize>, Vec<i64>)> = p.vertices.iter().filter(|(_, x)| q.contains(x)).collect();
    let mut face = vec![Letters::EMPTY; p.summands.len()];
    for (labels, _) in &inside {
        for (f, &a) in face.iter_mut().zip(labels) {
            f.insert(a);
        }
    }
    let product: usize = if inside.is_empty() {
        0
    } else {
        face.iter().map(|f| f.len()).product()
    };
    if product != inside.len() {
        return Err("the vertices of one cell inside the other do not span a face".to_string());
    }
    let mut points: Vec<Vec<i64>> = inside.iter().map(|(_, x)| x.clone()).collect();
    points.sort();
    Ok((face, points))
}

/// Decides whether two distinct fine cells meet in a common proper face
/// (possibly empty). Returns a description of the failure otherwise.
pub(crate) fn check_pair(p: &CellGeometry, q: &CellGeometry) -> Result<(), String> {
    if p.summands == q.summands {
        return Err("identical cells".to_string());
    }
    let (fp, vp) = face_inside(p, q)?;
    let (fq, vq) = face_inside(q, p)?;
    if vp != vq {
        return Err("the two cells disagree on the vertices of their intersection".to_string());
    }
    if vp.is_empty() {
        let separated = |a: &CellGeometry, b: &CellGeometry| {
            a.facets
                .iter()
                .any(|(_, f)| b.vertices.iter().all(|(_, x)| f.eval(x) > f.h))
        };
        if separated(p, q) || separated(q, p) {
            return Ok(());
        }
        let (a, b) = intersection_system(p, q);
        return if lp::feasible(&a, &b) {
            Err("the cells overlap without sharing a vertex".to_string())
        } else {
            Ok(())
        };
    }
    if fp == p.summands || fq == q.summands {
        return Err("one cell contains the other".to_string());
    }
    let gp = p.face_functional(&fp);
    let gq = q.face_functional(&fq);
    if q.vertices.iter().all(|(_, x)| gp.eval(x) >= gp.h) || p.vertices.iter().all(|(_, x)| gq.eval(x) >= gq.h) {
        return Ok(());
    }
    let (a, b) = intersection_system(p, q);
    let obj = objective_over_p(p, &gp.c, q.facets.len());
    match lp::maximize(&a, &b, &obj) {
        LpOutcome::Optimal(v) if v <= BigRational::from_integer(gp.h.into()) => Ok(()),
        LpOutcome::Optimal(_) => Err("the intersection is larger than the common face".to_string()),
        other => Err(format!("unexpected linear program outcome {other:?}")),
    }
}

/// Points of `p` as `x = Σ_j Σ_{b ∈ B_j} λ_{jb} e_b` with `Σ_b λ_{jb} = 1`,
/// intersected with the facets of `q` (one slack variable per facet).
/// Variables: the `λ_{jb}` in summand order, then the slacks.
fn intersection_system(p: &CellGeometry, q: &CellGeometry) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let lambda: Vec<(usize, usize)> = p
        .summands
        .iter()
        .enumerate()
        .flat_map(|(j, b)| b.iter().map(move |a| (j, a)))
        .collect();
    let nl = lambda.len();
    let nvars = nl + q.facets.len();
    let int = |x: i64| BigRational::from_integer(x.into());
    let mut a = Vec::new();
    let mut b = Vec::new();
    for j in 0..p.summands.len() {
        let mut row = vec![BigRational::zero(); nvars];
        for (k, &(jj, _)) in lambda.iter().enumerate() {
            if jj == j {
                row[k] = int(1);
            }
        }
        a.push(row);
        b.push(int(1));
    }
    for (s, (_, f)) in q.facets.iter().enumerate() {
        let mut row = vec![BigRational::zero(); nvars];
        for (k, &(_, letter)) in lambda.iter().enumerate() {
            row[k] = int(f.c[letter - 1]);
        }
        row[nl + s] = int(1);
        a.push(row);
        b.push(int(f.h));
    }
    (a, b)
}

fn objective_over_p(p: &CellGeometry, c: &[i64], nslack: usize) -> Vec<BigRational> {
    let lambda = p.summands.iter().flat_map(|b| b.iter());
    let mut obj: Vec<BigRational> = lambda.map(|a| BigRational::from_integer(c[a - 1].into())).collect();
    obj.extend((0..nslack).map(|_| BigRational::zero()));
    obj
}

/// The set of points covered by vertices, used by tests.
#[cfg(test)]
pub(crate) fn vertex_points(g: &CellGeometry) -> std::collections::BTreeSet<Vec<i64>> {
    g.vertices.iter().map(|(_, x)| x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(lists: &[&[usize]]) -> MixedCell {
        MixedCell::new(lists.iter().map(|s| Letters::from_slice(s)).collect())
    }

    #[test]
    fn facets_are_tight_exactly_on_their_vertices() {
        let c = cell(&[&[1, 2, 3], &[2]]);
        let g = CellGeometry::new(&c, 3);
        assert_eq!(g.facets.len(), 3);
        assert_eq!(vertex_points(&g).len(), 3);
        for ((i, a), f) in &g.facets {
            for (labels, x) in &g.vertices {
                let tight = f.eval(x) == f.h;
                assert_eq!(tight, labels[*i] != *a);
            }
        }
    }

    #[test]
    fn rhombus_facets() {
        let c = cell(&[&[1, 3], &[1, 2]]);
        let g = CellGeometry::new(&c, 3);
        assert_eq!(g.vertices.len(), 4);
        for (_, x) in &g.vertices {
            assert!(g.contains(x));
        }
        assert!(!g.contains(&[0, 0, 2]));
        assert!(!g.contains(&[0, 2, 0]));
    }

    #[test]
    fn pair_checks() {
        let t1 = CellGeometry::new(&cell(&[&[1, 2, 3], &[2]]), 3);
        let r = CellGeometry::new(&cell(&[&[1, 3], &[1, 2]]), 3);
        let t2 = CellGeometry::new(&cell(&[&[3], &[1, 2, 3]]), 3);
        assert_eq!(check_pair(&t1, &r), Ok(()));
        assert_eq!(check_pair(&r, &t2), Ok(()));
        assert_eq!(check_pair(&t1, &t2), Ok(()));
        assert!(check_pair(&t1, &t1).is_err());
        // Two overlapping rhombi.
        let r2 = CellGeometry::new(&cell(&[&[1, 2], &[1, 3]]), 3);
        assert!(check_pair(&r, &r2).is_err());
    }
}
