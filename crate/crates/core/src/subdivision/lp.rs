//! A small exact simplex solver over `BigRational`, Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(BigRational),
}

/// Maximizes `c·x` subject to `a x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let nvars = c.len();
    let ncols = nvars + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (r, row) in a.iter().enumerate() {
        let flip = b[r].is_negative();
        let mut full: Vec<BigRational> = row.iter().map(|x| if flip { -x.clone() } else { x.clone() }).collect();
        full.resize(ncols, BigRational::zero());
        full[nvars + r] = BigRational::one();
        t.push(full);
        rhs.push(if flip { -b[r].clone() } else { b[r].clone() });
    }
    let mut basis: Vec<usize> = (nvars..ncols).collect();

    let phase1: Vec<BigRational> = (0..ncols)
        .map(|j| {
            if j >= nvars {
                -BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    run(&mut t, &mut rhs, &mut basis, &phase1, ncols);
    let value1 = objective(&rhs, &basis, &phase1);
    if value1.is_negative() {
        return LpOutcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if basis[r] >= nvars {
            if let Some(j) = (0..nvars).find(|&j| !t[r][j].is_zero()) {
                pivot(&mut t, &mut rhs, &mut basis, r, j);
            }
        }
    }
    let mut phase2 = c.to_vec();
    phase2.resize(ncols, BigRational::zero());
    if !run(&mut t, &mut rhs, &mut basis, &phase2, nvars) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal(objective(&rhs, &basis, &phase2))
}

/// Checks feasibility of `a x = b`, `x ≥ 0`.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let nvars = a.first().map_or(0, Vec::len);
    maximize(a, b, &vec![BigRational::zero(); nvars]) != LpOutcome::Infeasible
}

fn objective(rhs: &[BigRational], basis: &[usize], c: &[BigRational]) -> BigRational {
    basis
        .iter()
        .zip(rhs)
        .fold(BigRational::zero(), |acc, (&j, v)| acc + &c[j] * v)
}

/// Runs primal simplex with entering columns restricted to `0..allowed`.
/// Returns false if the objective is unbounded.
fn run(
    t: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    c: &[BigRational],
    allowed: usize,
) -> bool {
    loop {
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = basis
                .iter()
                .enumerate()
                .fold(c[j].clone(), |acc, (r, &bj)| acc - &c[bj] * &t[r][j]);
            reduced.is_positive()
        });
        let Some(j) = entering else { return true };
        let mut best: Option<(usize, BigRational)> = None;
        for r in 0..t.len() {
            if t[r][j].is_positive() {
                let ratio = &rhs[r] / &t[r][j];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && basis[r] < basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = best else { return false };
        pivot(t, rhs, basis, r, j);
    }
}

fn pivot(t: &mut [Vec<BigRational>], rhs: &mut [BigRational], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j].clone();
    for x in t[r].iter_mut() {
        *x = &*x / &p;
    }
    rhs[r] = &rhs[r] / &p;
    let prow = t[r].clone();
    let prhs = rhs[r].clone();
    for k in 0..t.len() {
        if k == r || t[k][j].is_zero() {
            continue;
        }
        let f = t[k][j].clone();
        for (x, y) in t[k].iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x = &*x - &f * y;
            }
        }
        rhs[k] = &rhs[k] - &f * &prhs;
    }
    basis[r] = j;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn small_problems() {
        // max x + y with x + y + s = 2.
        let a = vec![vec![q(1), q(1), q(1)]];
        assert_eq!(maximize(&a, &[q(2)], &[q(1), q(1), q(0)]), LpOutcome::Optimal(q(2)));
        // x - y = -1 needs y >= 1; max -y = -1.
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&a, &[q(-1)], &[q(0), q(-1)]), LpOutcome::Optimal(q(-1)));
        // x = 1, x = 2 is infeasible.
        let a = vec![vec![q(1)], vec![q(1)]];
        assert_eq!(maximize(&a, &[q(1), q(2)], &[q(0)]), LpOutcome::Infeasible);
        // max x with x - y = 0 is unbounded.
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&a, &[q(0)], &[q(1), q(0)]), LpOutcome::Unbounded);
        // Redundant equality rows are fine.
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(maximize(&a, &[q(1), q(2)], &[q(3), q(1)]), LpOutcome::Optimal(q(3)));
    }
}
