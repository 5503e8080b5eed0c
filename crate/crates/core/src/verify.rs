//! Exhaustive enumeration harnesses and theorem checks at desk scale.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{subdivision_to_json, system_to_json, tiling_to_json};
use crate::letters::Letters;
use crate::lozenge::{self, LozengeTiling};
use crate::parallel;
use crate::perm::Permutation;
use crate::subdivision::{FineMixedSubdivision, MixedCell};
use crate::system::{weak_compositions, SimplexPositionList, SystemOfPermutations};
use crate::tournament::{pair_count, pairs, Tournament};

/// Which `(n, d)` the exhaustive routines accept. Anything else is an
/// [`Error::InfeasibleScale`], never a silently truncated run.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScaleLimits {
    /// Largest `n` enumerated through lozenge tilings when `d = 3`.
    pub lozenge_max_n: usize,
    /// Further `(n, d)` enumerated through triangulations of `Δ_{n-1} × Δ_{d-1}`.
    pub general: Vec<(usize, usize)>,
    /// Largest `d = 2` instance (`n!` subdivisions).
    pub segment_max_n: usize,
    /// Largest number of raw systems `(n!)^{C(d,2)}` compared against the
    /// pruned enumeration by brute force.
    pub brute_force_max: u64,
}

impl Default for ScaleLimits {
    fn default() -> ScaleLimits {
        ScaleLimits {
            lozenge_max_n: 5,
            general: vec![(2, 3), (3, 3), (2, 4), (3, 4), (2, 5), (4, 3)],
            segment_max_n: 6,
            brute_force_max: 2_000_000,
        }
    }
}

impl ScaleLimits {
    /// Every `(n, d)` with `n ≤ n_max` and `d ≤ d_max`.
    pub fn caps(n_max: usize, d_max: usize) -> ScaleLimits {
        let mut general = Vec::new();
        for n in 1..=n_max {
            for d in 1..=d_max {
                if n * d <= 64 && n + d <= 32 {
                    general.push((n, d));
                }
            }
        }
        ScaleLimits {
            lozenge_max_n: if d_max >= 3 { n_max } else { 0 },
            general,
            segment_max_n: n_max,
            ..ScaleLimits::default()
        }
    }

    pub fn allows(&self, n: usize, d: usize) -> bool {
        n >= 1
            && d >= 1
            && (n == 1
                || d == 1
                || (d == 2 && n <= self.segment_max_n)
                || (d == 3 && n <= self.lozenge_max_n)
                || self.general.contains(&(n, d)))
    }

    fn require(&self, n: usize, d: usize) -> Result<()> {
        if self.allows(n, d) {
            Ok(())
        } else {
            Err(Error::InfeasibleScale { n, d })
        }
    }
}

/// For each permutation, bit `k` is set when the `k`-th color pair `i < j`
/// (in pair order) appears as `... i ... j ...`.
fn precedence_masks(perms: &[Permutation], n: usize) -> Vec<u64> {
    perms
        .iter()
        .map(|p| {
            pairs(n)
                .enumerate()
                .filter(|&(_, (i, j))| p.precedes(i, j))
                .fold(0u64, |m, (k, _)| m | 1 << k)
        })
        .collect()
}

/// Every acyclic system on `nΔ_{d-1}` exactly once, sorted by the words of
/// `σ_12, σ_13, σ_23, σ_14, ...`. The search picks `σ_ab` pair by pair and
/// rejects a choice as soon as a triangle of letters carries a directed
/// 3-cycle for some color pair. The first pair is split across workers.
pub fn enumerate_acyclic_systems(n: usize, d: usize, workers: usize) -> Vec<SystemOfPermutations> {
    assert!(
        (1..=11).contains(&n) && d >= 1,
        "enumerate_acyclic_systems needs 1 ≤ n ≤ 11, d ≥ 1"
    );
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let masks = precedence_masks(&perms, n);
    let pair_list: Vec<(usize, usize)> = pairs(d).collect();
    if pair_list.is_empty() {
        return vec![SystemOfPermutations::identity(n, d)];
    }
    // For pair k = (a, b), the pairs (c, a) and (c, b) closing a triangle.
    let triangles: Vec<Vec<(usize, usize)>> = pair_list
        .iter()
        .map(|&(a, b)| {
            (1..a)
                .map(|c| (crate::tournament::pair_index(c, a), crate::tournament::pair_index(c, b)))
                .collect()
        })
        .collect();
    let chunks = parallel::map((0..perms.len()).collect(), workers, |first| {
        let mut out = Vec::new();
        let mut chosen = vec![first];
        extend_system(&masks, &triangles, &mut chosen, &mut |c: &[usize]| {
            let words = c.iter().map(|&k| perms[k].clone()).collect();
            out.push(SystemOfPermutations::new(n, d, words).expect("well-formed system"));
        });
        out
    });
    chunks.into_iter().flatten().collect()
}

fn extend_system(
    masks: &[u64],
    triangles: &[Vec<(usize, usize)>],
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let k = chosen.len();
    if k == triangles.len() {
        emit(chosen);
        return;
    }
    for p in 0..masks.len() {
        let ab = masks[p];
        // Cycle c → a → b → c (or reversed) for a color pair: the edges ca
        // and ab agree and cb disagrees.
        let ok = triangles[k].iter().all(|&(ca, cb)| {
            let (ca, cb) = (masks[chosen[ca]], masks[chosen[cb]]);
            !(ca ^ ab) & (ca ^ cb) == 0
        });
        if ok {
            chosen.push(p);
            extend_system(masks, triangles, chosen, emit);
            chosen.pop();
        }
    }
}

fn segment_subdivisions(n: usize) -> Vec<FineMixedSubdivision> {
    let mut all: Vec<FineMixedSubdivision> = Permutation::all(n)
        .map(|p| {
            // The k-th segment from corner 1 has k - 1 summands {2}.
            let cells = (0..n)
                .map(|k| {
                    let mut summands = vec![Letters::single(1); n];
                    for &c in &p.word()[..k] {
                        summands[c - 1] = Letters::single(2);
                    }
                    summands[p.word()[k] - 1] = Letters::full(2);
                    MixedCell::new(summands)
                })
                .collect();
            FineMixedSubdivision::new(n, 2, cells).expect("well-formed cells")
        })
        .collect();
    all.sort();
    all
}

/// Every fine mixed subdivision of `nΔ_{d-1}` exactly once, sorted.
/// `d = 3` goes through lozenge tilings and their recolorings, other
/// sizes through triangulations of `Δ_{n-1} × Δ_{d-1}`.
pub fn enumerate_subdivisions(
    n: usize,
    d: usize,
    limits: &ScaleLimits,
    workers: usize,
) -> Result<Vec<FineMixedSubdivision>> {
    limits.require(n, d)?;
    if n == 1 {
        return Ok(vec![FineMixedSubdivision::new(
            1,
            d,
            vec![MixedCell::new(vec![Letters::full(d)])],
        )?]);
    }
    if d == 1 {
        return Ok(vec![FineMixedSubdivision::new(
            n,
            1,
            vec![MixedCell::new(vec![Letters::single(1); n])],
        )?]);
    }
    if d == 2 {
        return Ok(segment_subdivisions(n));
    }
    if d == 3 && n <= limits.lozenge_max_n {
        return enumerate_subdivisions_via_tilings(n, workers);
    }
    Ok(crate::subdivision::enumerate_triangulations(n, d, workers))
}

/// `d = 3` route: every lozenge tiling of `nΔ_2` under every coloring.
pub fn enumerate_subdivisions_via_tilings(n: usize, workers: usize) -> Result<Vec<FineMixedSubdivision>> {
    let colorings: Vec<Permutation> = Permutation::all(n).collect();
    let chunks = parallel::map(lozenge::enumerate_tilings(n), workers, |t| {
        colorings
            .iter()
            .map(|p| t.relabel(p.word()).to_subdivision())
            .collect::<Result<Vec<_>>>()
    });
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    all.sort();
    Ok(all)
}

/// Triangulation route for any `(n, d)`, independent of the geometric
/// validator: used to cross-check the other enumerators.
pub fn enumerate_subdivisions_via_triangulations(
    n: usize,
    d: usize,
    limits: &ScaleLimits,
    workers: usize,
) -> Result<Vec<FineMixedSubdivision>> {
    limits.require(n, d)?;
    if n * d > 64 || n + d > 32 {
        return Err(Error::InfeasibleScale { n, d });
    }
    Ok(crate::subdivision::enumerate_triangulations(n, d, workers))
}

/// A subdivision of `3Δ_{d-1}` with system `sigma`: realize the dual system
/// on `dΔ_2` as a lozenge tiling and dualize the tiling.
pub fn realize_n3(sigma: &SystemOfPermutations) -> Result<FineMixedSubdivision> {
    if sigma.n() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "realize_n3 needs n = 3, got {}",
            sigma.n()
        )));
    }
    let dual = sigma.dual()?;
    let tiling = lozenge::realize(&dual)?;
    let s = tiling.to_subdivision()?.dual()?;
    s.validate()?;
    if s.system_of_permutations()? != *sigma {
        return Err(Error::InternalInvariantViolation(
            "dualized tiling has the wrong system".into(),
        ));
    }
    Ok(s)
}

/// Canonical form of an unordered position set up to permuting letters.
fn position_type(positions: &[Vec<usize>], d: usize) -> Vec<Vec<usize>> {
    Permutation::all(d)
        .map(|p| {
            let mut moved: Vec<Vec<usize>> = positions
                .iter()
                .map(|x| {
                    let mut y = vec![0; d];
                    for (a, &v) in x.iter().enumerate() {
                        y[p.apply(a + 1) - 1] = v;
                    }
                    y
                })
                .collect();
            moved.sort();
            moved
        })
        .min()
        .unwrap_or_default()
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TypeWitness {
    /// Sorted positions, minimal over letter permutations.
    pub positions_type: Vec<Vec<usize>>,
    /// One ordered tuple of that type and an acyclic system realizing it.
    pub positions: Vec<Vec<usize>>,
    pub system: Value,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct WeakConjectureReport {
    pub n: usize,
    pub d: usize,
    pub tuples: usize,
    pub spread_out_tuples: usize,
    pub matched: usize,
    /// Spread-out ordered tuples that are not the simplex positions of any
    /// acyclic system.
    pub unmatched: Vec<Vec<Vec<usize>>>,
    pub witnesses: Vec<TypeWitness>,
}

/// Every spread-out ordered `n`-tuple of positions in `(n-1)Δ_{d-1}`,
/// matched against the positions of the enumerated acyclic systems.
pub fn weak_conjecture_search(
    n: usize,
    d: usize,
    limits: &ScaleLimits,
    workers: usize,
) -> Result<WeakConjectureReport> {
    limits.require(n, d)?;
    let systems = enumerate_acyclic_systems(n, d, workers);
    weak_conjecture_search_in(n, d, &systems, workers)
}

fn weak_conjecture_search_in(
    n: usize,
    d: usize,
    systems: &[SystemOfPermutations],
    workers: usize,
) -> Result<WeakConjectureReport> {
    let mut realizers: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
    for (k, s) in systems.iter().enumerate() {
        realizers.entry(s.simplex_positions()?.positions).or_insert(k);
    }
    let points = weak_compositions(n - 1, d);
    let total = points.len().pow(n as u32);
    let decode = |mut code: usize| -> Vec<Vec<usize>> {
        (0..n)
            .map(|_| {
                let x = points[code % points.len()].clone();
                code /= points.len();
                x
            })
            .collect()
    };
    let spread: Vec<Option<Vec<Vec<usize>>>> = parallel::map((0..total).collect(), workers, |code| {
        let t = decode(code);
        SimplexPositionList {
            d,
            positions: t.clone(),
        }
        .is_spread_out()
        .then_some(t)
    });
    let mut unmatched = Vec::new();
    let mut types: BTreeMap<Vec<Vec<usize>>, TypeWitness> = BTreeMap::new();
    let mut spread_out_tuples = 0;
    for t in spread.into_iter().flatten() {
        spread_out_tuples += 1;
        match realizers.get(&t) {
            Some(&k) => {
                let key = position_type(&t, d);
                types.entry(key.clone()).or_insert_with(|| TypeWitness {
                    positions_type: key,
                    positions: t.clone(),
                    system: system_to_json(&systems[k]),
                });
            }
            None => unmatched.push(t),
        }
    }
    Ok(WeakConjectureReport {
        n,
        d,
        tuples: total,
        spread_out_tuples,
        matched: spread_out_tuples - unmatched.len(),
        unmatched,
        witnesses: types.into_values().collect(),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Counts {
    /// `(n!)^{C(d,2)}`, as a decimal string.
    pub systems: String,
    pub acyclic_systems: usize,
    pub subdivisions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilings: Option<usize>,
    /// Insertions in the lozenge realization that needed flips or the
    /// routing fallback, over all acyclic systems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realize_retilings: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realize_fallbacks: Option<usize>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    /// The first failing instance, in enumeration order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub d: usize,
    pub counts: Counts,
    pub checks: Vec<CheckOutcome>,
    /// Wall time; left out of serialized reports unless requested so that
    /// reports are reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl EnumerationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn check<T: Sync>(
    name: &str,
    items: &[T],
    workers: usize,
    f: impl Fn(&T) -> Option<Value> + Sync + Send,
) -> CheckOutcome {
    let results = parallel::map(items.iter().collect(), workers, |t: &T| f(t));
    let witness = results.into_iter().flatten().next();
    CheckOutcome {
        name: name.to_string(),
        checked: items.len(),
        passed: witness.is_none(),
        witness,
    }
}

fn err_json(e: &Error) -> Value {
    json!({"error": e.kind(), "message": e.to_string()})
}

/// `Some(witness)` unless `f` returns `Ok(true)`.
fn expect(what: impl FnOnce() -> Value, f: impl FnOnce() -> Result<bool>) -> Option<Value> {
    match f() {
        Ok(true) => None,
        Ok(false) => Some(what()),
        Err(e) => Some(json!({"instance": what(), "error": err_json(&e)})),
    }
}

fn sys_checks(
    n: usize,
    d: usize,
    systems: &[SystemOfPermutations],
    limits: &ScaleLimits,
    workers: usize,
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.push(check("enumerated-systems-are-acyclic", systems, workers, |s| {
        expect(|| system_to_json(s), || Ok(s.is_acyclic() && s.is_acyclic_by_degrees()))
    }));
    let raw = BigUint::from((1..=n as u64).product::<u64>()).pow(pair_count(d) as u32);
    if raw <= BigUint::from(limits.brute_force_max) {
        let found = brute_force_acyclic_count(n, d);
        out.push(CheckOutcome {
            name: "acyclic-count-matches-brute-force".into(),
            checked: raw.to_string().parse().unwrap_or(usize::MAX),
            passed: found == systems.len(),
            witness: (found != systems.len()).then(|| json!({"pruned": systems.len(), "brute_force": found})),
        });
    }
    if d >= 2 {
        out.push(check("acyclic-positions-are-spread-out", systems, workers, |s| {
            expect(|| system_to_json(s), || Ok(s.simplex_positions()?.is_spread_out()))
        }));
        out.push(check(
            "h-graphs-inside-permutation-tournaments",
            systems,
            workers,
            |s| {
                expect(
                    || system_to_json(s),
                    || {
                        let t = s.table_of_positions()?;
                        Ok((1..=d).all(|a| {
                            (1..=d).filter(|&b| b != a).all(|b| {
                                t.h_graph(a, b)
                                    .is_subgraph_of(&Tournament::from_permutation(&s.perm(a, b)))
                            })
                        }))
                    },
                )
            },
        ));
    }
    out.push(check("dual-system-is-an-acyclic-involution", systems, workers, |s| {
        expect(
            || system_to_json(s),
            || {
                let dual = s.dual()?;
                Ok(dual.is_acyclic() && dual.dual()? == *s)
            },
        )
    }));
    out.push(check("system-minors-commute-with-duality", systems, workers, |s| {
        expect(
            || system_to_json(s),
            || {
                let dual = s.dual()?;
                for i in (1..=n).filter(|_| n >= 2) {
                    if s.delete(i)?.inner.dual()? != dual.contract(i)?.inner {
                        return Ok(false);
                    }
                }
                for a in (1..=d).filter(|_| d >= 2) {
                    if s.contract(a)?.inner.dual()? != dual.delete(a)?.inner {
                        return Ok(false);
                    }
                }
                Ok(true)
            },
        )
    }));
    if d == 3 {
        out.push(check("triangle-positions-match-source-counts", systems, workers, |s| {
            expect(
                || system_to_json(s),
                || {
                    let pos = lozenge::positions_from_system(s)?;
                    let simplices = s.simplex_positions()?;
                    Ok((1..=n).all(|c| {
                        let (p, q) = pos.pq_of_color(c);
                        let r = pos.routing_label[c - 1];
                        pos.point_of_color(c).to_vec() == simplices.positions[c - 1] && q <= r && r <= p
                    }))
                },
            )
        }));
    }
    out
}

fn brute_force_acyclic_count(n: usize, d: usize) -> usize {
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let k = pair_count(d);
    let total = perms.len().pow(k as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let words = (0..k)
                .map(|_| {
                    let p = perms[c % perms.len()].clone();
                    c /= perms.len();
                    p
                })
                .collect();
            SystemOfPermutations::new(n, d, words).is_ok_and(|s| s.is_acyclic())
        })
        .count()
}

fn subdivision_checks(
    n: usize,
    d: usize,
    subdivisions: &[FineMixedSubdivision],
    systems: &[SystemOfPermutations],
    workers: usize,
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let sj = subdivision_to_json;
    out.push(check("subdivisions-validate", subdivisions, workers, |s| {
        expect(|| sj(s), || Ok(s.validate().is_ok()))
    }));
    out.push(check("subdivision-systems-are-acyclic", subdivisions, workers, |s| {
        expect(|| sj(s), || Ok(s.system_of_permutations()?.is_acyclic()))
    }));
    if d >= 2 {
        out.push(check(
            "simplex-positions-determined-by-system",
            subdivisions,
            workers,
            |s| {
                expect(
                    || sj(s),
                    || Ok(s.simplices()?.positions == s.system_of_permutations()?.simplex_positions()?),
                )
            },
        ));
        out.push(check(
            "simplex-cells-match-table-of-positions",
            subdivisions,
            workers,
            |s| {
                expect(
                    || sj(s),
                    || {
                        let table = s.system_of_permutations()?.table_of_positions()?;
                        let cells = s.simplices()?.cells;
                        Ok((1..=n).all(|i| cells[i - 1].summands() == table.row(i)))
                    },
                )
            },
        ));
        out.push(check(
            "subdivision-simplices-are-spread-out",
            subdivisions,
            workers,
            |s| expect(|| sj(s), || Ok(s.simplices()?.positions.is_spread_out())),
        ));
    }
    out.push(check("dual-subdivision-has-dual-system", subdivisions, workers, |s| {
        expect(
            || sj(s),
            || {
                let dual = s.dual()?;
                Ok(dual.validate().is_ok()
                    && dual.system_of_permutations()? == s.system_of_permutations()?.dual()?
                    && dual.dual()? == *s)
            },
        )
    }));
    out.push(check(
        "subdivision-minors-commute-with-duality",
        subdivisions,
        workers,
        |s| {
            expect(
                || sj(s),
                || {
                    let dual = s.dual()?;
                    let sys = s.system_of_permutations()?;
                    for i in (1..=n).filter(|_| n >= 2) {
                        let del = s.delete(i)?.inner;
                        if del.dual()? != dual.contract(i)?.inner
                            || del.system_of_permutations()? != sys.delete(i)?.inner
                        {
                            return Ok(false);
                        }
                    }
                    for a in (1..=d).filter(|_| d >= 2) {
                        let con = s.contract(a)?.inner;
                        if con.dual()? != dual.delete(a)?.inner
                            || con.system_of_permutations()? != sys.contract(a)?.inner
                        {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                },
            )
        },
    ));
    out.push(check("cell-census", subdivisions, workers, |s| {
        expect(
            || sj(s),
            || {
                s.simplices()?;
                let mut ok = s.total_volume() == (n as u128).pow(d as u32 - 1);
                if d == 3 {
                    let rhombi: Vec<BTreeSet<usize>> = s
                        .cells()
                        .iter()
                        .filter(|c| c.dim_vector().iter().filter(|&&x| x == 1).count() == 2)
                        .map(|c| (1..=n).filter(|&i| c.summand(i).len() == 2).collect())
                        .collect();
                    let distinct: BTreeSet<&BTreeSet<usize>> = rhombi.iter().collect();
                    ok &= s.cells().len() == n + n * (n - 1) / 2
                        && rhombi.len() == n * (n - 1) / 2
                        && distinct.len() == rhombi.len();
                }
                Ok(ok)
            },
        )
    }));
    out.push(check("dim-vector-census-conjecture", subdivisions, workers, |s| {
        expect(|| sj(s), || Ok(s.census_violation().is_none()))
    }));
    // Every acyclic system is realized where this is known to hold.
    if n <= 3 || d <= 3 {
        let realized: BTreeSet<SystemOfPermutations> = subdivisions
            .iter()
            .filter_map(|s| s.system_of_permutations().ok())
            .collect();
        let missing = systems.iter().find(|s| !realized.contains(s));
        out.push(CheckOutcome {
            name: "every-acyclic-system-is-realized".into(),
            checked: systems.len(),
            passed: missing.is_none() && realized.len() == systems.len(),
            witness: missing
                .map(system_to_json)
                .or_else(|| (realized.len() != systems.len()).then(|| json!({"realized": realized.len()}))),
        });
    }
    out
}

fn tiling_checks(
    n: usize,
    tilings: &[LozengeTiling],
    systems: &[SystemOfPermutations],
    workers: usize,
    counts: &mut Counts,
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let tj = tiling_to_json;
    out.push(check("tilings-extract-to-acyclic-systems", tilings, workers, |t| {
        expect(|| tj(t), || Ok(t.system()?.is_acyclic()))
    }));
    out.push(check("routing-bijection-round-trip", tilings, workers, |t| {
        expect(
            || tj(t),
            || Ok(lozenge::routing_to_tiling(&lozenge::tiling_to_routing(t)?)? == *t),
        )
    }));
    out.push(check("triangle-positions-determine-system", tilings, workers, |t| {
        expect(
            || tj(t),
            || {
                let (p, q): (Vec<usize>, Vec<usize>) = t.triangles().iter().map(|&x| lozenge::pq(x)).unzip();
                let (u, v, w) = lozenge::uv_from_positions(&p, &q)?;
                Ok(SystemOfPermutations::from_uvw(u, v, w)? == t.system()?)
            },
        )
    }));
    let mut by_system: BTreeMap<SystemOfPermutations, &LozengeTiling> = BTreeMap::new();
    let mut clash = None;
    for t in tilings {
        if let Ok(s) = t.system() {
            if let Some(prev) = by_system.insert(s, t) {
                if prev.triangles() != t.triangles() && clash.is_none() {
                    clash = Some(json!([tj(prev), tj(t)]));
                }
            }
        }
    }
    out.push(CheckOutcome {
        name: "equal-systems-have-equal-triangle-positions".into(),
        checked: tilings.len(),
        passed: clash.is_none(),
        witness: clash,
    });
    let traces = parallel::map(systems.iter().collect(), workers, |s: &SystemOfPermutations| {
        let direct = lozenge::realize_traced(s).and_then(|(t, trace)| Ok((t.system()? == *s, trace)));
        let routed = lozenge::realize_via_routing(s).and_then(|t| Ok(t.system()? == *s));
        (direct, routed)
    });
    let mut witness = None;
    let (mut retilings, mut fallbacks) = (0, 0);
    for (s, (direct, routed)) in systems.iter().zip(traces) {
        let ok = match (&direct, &routed) {
            (Ok((true, trace)), Ok(true)) => {
                retilings += trace.retiled.len();
                fallbacks += trace.fallbacks.len();
                true
            }
            _ => false,
        };
        if !ok && witness.is_none() {
            witness = Some(json!({
                "system": system_to_json(s),
                "realize": direct.as_ref().map(|r| r.0).map_err(|e| e.to_string()).ok(),
                "realize_via_routing": routed.as_ref().ok(),
            }));
        }
    }
    counts.realize_retilings = Some(retilings);
    counts.realize_fallbacks = Some(fallbacks);
    out.push(CheckOutcome {
        name: format!("every-acyclic-system-realized-as-tiling-n{n}"),
        checked: systems.len(),
        passed: witness.is_none(),
        witness,
    });
    out
}

/// Runs every check over the enumerated acyclic systems, subdivisions and
/// (for `d = 3`) tilings of `nΔ_{d-1}`.
pub fn check_all_theorems(n: usize, d: usize, limits: &ScaleLimits, workers: usize) -> Result<EnumerationReport> {
    let start = Instant::now();
    limits.require(n, d)?;
    let systems = enumerate_acyclic_systems(n, d, workers);
    let subdivisions = enumerate_subdivisions(n, d, limits, workers)?;
    let raw = BigUint::from((1..=n as u64).product::<u64>()).pow(pair_count(d) as u32);
    let mut counts = Counts {
        systems: raw.to_string(),
        acyclic_systems: systems.len(),
        subdivisions: subdivisions.len(),
        ..Counts::default()
    };
    let mut checks = sys_checks(n, d, &systems, limits, workers);
    checks.extend(subdivision_checks(n, d, &subdivisions, &systems, workers));
    if d == 3 && n <= limits.lozenge_max_n {
        let tilings = lozenge::enumerate_tilings(n);
        counts.tilings = Some(tilings.len());
        checks.extend(tiling_checks(n, &tilings, &systems, workers, &mut counts));
    }
    if n == 3 {
        checks.push(check("n3-realization-through-duality", &systems, workers, |s| {
            expect(
                || system_to_json(s),
                || Ok(realize_n3(s)?.system_of_permutations()? == *s),
            )
        }));
    }
    // With d = 1 every simplex is the same point and positions carry no
    // information.
    if d >= 2 {
        let weak = weak_conjecture_search_in(n, d, &systems, workers)?;
        checks.push(CheckOutcome {
            name: "spread-out-positions-come-from-acyclic-systems".into(),
            checked: weak.spread_out_tuples,
            passed: weak.unmatched.is_empty(),
            witness: weak.unmatched.first().map(|t| json!(t)),
        });
    }
    Ok(EnumerationReport {
        n,
        d,
        counts,
        checks,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acyclic_counts_match_brute_force() {
        assert_eq!(enumerate_acyclic_systems(2, 3, 1).len(), 6);
        for (n, d) in [(1, 4), (2, 2), (2, 3), (3, 3), (2, 4), (3, 2), (2, 5)] {
            assert_eq!(
                enumerate_acyclic_systems(n, d, 0).len(),
                brute_force_acyclic_count(n, d),
                "({n}, {d})"
            );
        }
        assert_eq!(enumerate_acyclic_systems(1, 5, 1).len(), 1);
        assert_eq!(enumerate_acyclic_systems(3, 1, 1).len(), 1);
    }

    #[test]
    fn acyclic_enumeration_is_sorted_and_worker_independent() {
        let one = enumerate_acyclic_systems(3, 4, 1);
        assert_eq!(one, enumerate_acyclic_systems(3, 4, 3));
        assert!(one.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumerators_agree() {
        let limits = ScaleLimits::default();
        for n in 1..=4 {
            let a = enumerate_subdivisions(n, 3, &limits, 0).unwrap();
            let b = enumerate_subdivisions_via_triangulations(n, 3, &ScaleLimits::caps(4, 3), 0).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
        assert_eq!(enumerate_subdivisions(2, 3, &limits, 1).unwrap().len(), 6);
        for n in 1..=4 {
            let seg = enumerate_subdivisions(n, 2, &limits, 1).unwrap();
            assert_eq!(
                seg,
                enumerate_subdivisions_via_triangulations(n, 2, &ScaleLimits::caps(4, 2), 1).unwrap()
            );
        }
        assert_eq!(enumerate_subdivisions(1, 6, &limits, 1).unwrap().len(), 1);
    }

    #[test]
    fn two_color_subdivisions_are_relabeled_chains() {
        let limits = ScaleLimits::default();
        for d in 2..=5 {
            let all = enumerate_subdivisions(2, d, &limits, 0).unwrap();
            let chain = FineMixedSubdivision::new(
                2,
                d,
                (1..=d)
                    .map(|k| {
                        MixedCell::new(vec![
                            Letters::from_slice(&(k..=d).collect::<Vec<_>>()),
                            Letters::from_slice(&(1..=k).collect::<Vec<_>>()),
                        ])
                    })
                    .collect(),
            )
            .unwrap();
            let orbit: BTreeSet<FineMixedSubdivision> = Permutation::all(d)
                .flat_map(|p| {
                    let c = chain.relabel_letters(p.word());
                    [c.clone(), c.relabel_colors(&[2, 1])]
                })
                .collect();
            assert_eq!(all.iter().cloned().collect::<BTreeSet<_>>(), orbit, "d = {d}");
        }
    }

    #[test]
    fn infeasible_scale_is_an_error() {
        let limits = ScaleLimits::default();
        assert_eq!(
            enumerate_subdivisions(4, 4, &limits, 1).unwrap_err().kind(),
            "InfeasibleScale"
        );
        assert_eq!(
            check_all_theorems(5, 4, &limits, 1).unwrap_err().kind(),
            "InfeasibleScale"
        );
        assert!(ScaleLimits::caps(4, 4).allows(4, 4));
    }

    #[test]
    fn small_reports_pass() {
        let limits = ScaleLimits::default();
        for (n, d) in [(1, 3), (1, 5), (2, 2), (2, 3), (3, 3), (2, 4), (3, 1)] {
            let r = check_all_theorems(n, d, &limits, 0).unwrap();
            assert!(r.all_passed(), "({n}, {d}): {:?}", r.failures());
        }
    }

    #[test]
    fn reports_do_not_depend_on_workers() {
        let limits = ScaleLimits::default();
        let strip = |mut r: EnumerationReport| {
            r.elapsed_ms = None;
            r.to_json_string()
        };
        let a = strip(check_all_theorems(3, 3, &limits, 1).unwrap());
        let b = strip(check_all_theorems(3, 3, &limits, 4).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn realize_n3_small() {
        for d in 1..=4 {
            for s in enumerate_acyclic_systems(3, d, 0) {
                let sub = realize_n3(&s).unwrap();
                assert_eq!(sub.system_of_permutations().unwrap(), s);
            }
        }
        let bad = SystemOfPermutations::identity(2, 3);
        assert_eq!(realize_n3(&bad).unwrap_err().kind(), "DimensionMismatch");
    }

    #[test]
    fn weak_search_small() {
        let limits = ScaleLimits::default();
        let r = weak_conjecture_search(3, 3, &limits, 0).unwrap();
        assert!(r.unmatched.is_empty());
        assert!(r.spread_out_tuples > 0);
        assert_eq!(r.matched, r.spread_out_tuples);
        let one = weak_conjecture_search(1, 4, &limits, 1).unwrap();
        assert_eq!((one.spread_out_tuples, one.matched), (1, 1));
    }
}
