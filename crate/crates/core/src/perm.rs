//! Permutations of `{1..n}` and their two canonical cycle factorizations.
//!
//! A permutation is stored as a 1-indexed word: `word[k - 1] = u(k)`.
//! Composition is right-to-left, `(f ∘ g)(k) = f(g(k))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn from_word(word: Vec<usize>) -> Result<Permutation> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation {
                    word,
                    reason: format!("entry {x} outside 1..={n}"),
                });
            }
            if seen[x] {
                return Err(Error::InvalidPermutation {
                    word,
                    reason: format!("entry {x} repeated"),
                });
            }
            seen[x] = true;
        }
        Ok(Permutation { word })
    }

    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Permutation {
        debug_assert!(Permutation::from_word(word.clone()).is_ok());
        Permutation { word }
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    /// The reversal `n ... 2 1`.
    pub fn longest(n: usize) -> Permutation {
        Permutation {
            word: (1..=n).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn into_word(self) -> Vec<usize> {
        self.word
    }

    /// `u(k)` for `k` in `1..=n`.
    pub fn apply(&self, k: usize) -> usize {
        self.word[k - 1]
    }

    /// 1-indexed position of `value` in the word, i.e. `u⁻¹(value)`.
    pub fn position(&self, value: usize) -> usize {
        self.word.iter().position(|&x| x == value).expect("value in range") + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (k, &x) in self.word.iter().enumerate() {
            inv[x - 1] = k + 1;
        }
        Permutation { word: inv }
    }

    pub fn reversed(&self) -> Permutation {
        Permutation {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation {
            word: other.word.iter().map(|&k| self.word[k - 1]).collect(),
        }
    }

    /// The cycle `(from, from ± 1, ..., to)` on `{1..n}`: each listed element
    /// maps to the next one and `to` maps back to `from`.
    pub fn cycle(n: usize, from: usize, to: usize) -> Permutation {
        let mut word: Vec<usize> = (1..=n).collect();
        if from <= to {
            for k in from..to {
                word[k - 1] = k + 1;
            }
        } else {
            for k in (to + 1..=from).rev() {
                word[k - 1] = k - 1;
            }
        }
        word[to - 1] = from;
        Permutation { word }
    }

    /// Whether `i` appears before `j` in the word.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.position(i) < self.position(j)
    }

    /// Removes the value `i` from the word and shifts larger values down.
    pub fn delete_value(&self, i: usize) -> Permutation {
        Permutation {
            word: self
                .word
                .iter()
                .filter(|&&x| x != i)
                .map(|&x| if x > i { x - 1 } else { x })
                .collect(),
        }
    }

    /// Applies a relabeling `map[old - 1] = new` to every value of the word.
    pub fn relabel_values(&self, map: &[usize]) -> Permutation {
        Permutation {
            word: self.word.iter().map(|&x| map[x - 1]).collect(),
        }
    }

    /// All permutations of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (1..=n).permutations(n).map(|word| Permutation { word })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(word: Vec<usize>) -> Result<Permutation> {
        Permutation::from_word(word)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.word
    }
}

/// Words with all entries below 10 print as digit strings (`236145`);
/// longer ones as comma-separated lists.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() < 10 {
            for x in &self.word {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Permutation> {
        let s = s.trim();
        let word: Result<Vec<usize>> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                .collect()
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?}")))
                })
                .collect()
        };
        Permutation::from_word(word?)
    }
}

/// `u = (n..p_n) ∘ ... ∘ (2..p_2) ∘ (1..p_1)` with `i ≤ p_i ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AscendingFactorization {
    p: Vec<usize>,
}

/// `v = (1..q_1) ∘ (2, 1..q_2) ∘ ... ∘ (n, n-1, ..., q_n)` with `1 ≤ q_i ≤ i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DescendingFactorization {
    q: Vec<usize>,
}

impl AscendingFactorization {
    pub fn new(p: Vec<usize>) -> Result<AscendingFactorization> {
        let n = p.len();
        for (k, &pk) in p.iter().enumerate() {
            let i = k + 1;
            if pk < i || pk > n {
                return Err(Error::BadBounds {
                    index: i,
                    value: pk,
                    bound: format!("{i} <= p_{i} <= {n}"),
                });
            }
        }
        Ok(AscendingFactorization { p })
    }

    pub fn values(&self) -> &[usize] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

impl DescendingFactorization {
    pub fn new(q: Vec<usize>) -> Result<DescendingFactorization> {
        for (k, &qk) in q.iter().enumerate() {
            let i = k + 1;
            if qk < 1 || qk > i {
                return Err(Error::BadBounds {
                    index: i,
                    value: qk,
                    bound: format!("1 <= q_{i} <= {i}"),
                });
            }
        }
        Ok(DescendingFactorization { q })
    }

    pub fn values(&self) -> &[usize] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// Peels the cycles off `u` from the right: `p_1 = u⁻¹(1)`, then recurse on
/// `u ∘ (1..p_1)⁻¹`, which fixes 1.
pub fn factor_ascending(u: &Permutation) -> AscendingFactorization {
    let n = u.len();
    let mut cur = u.clone();
    let mut p = Vec::with_capacity(n);
    for k in 1..=n {
        let pk = cur.position(k);
        p.push(pk);
        cur = cur.compose(&Permutation::cycle(n, pk, k));
    }
    AscendingFactorization { p }
}

/// Peels the cycles off `v` from the right: `q_n = v⁻¹(n)`, then recurse on
/// `v ∘ (n..q_n)⁻¹`, which fixes n.
pub fn factor_descending(v: &Permutation) -> DescendingFactorization {
    let n = v.len();
    let mut cur = v.clone();
    let mut q = vec![0; n];
    for k in (1..=n).rev() {
        let qk = cur.position(k);
        q[k - 1] = qk;
        cur = cur.compose(&Permutation::cycle(n, qk, k));
    }
    DescendingFactorization { q }
}

/// Reads both factorizations directly off inversion counts:
/// `p_k = k + #{ℓ > k : ℓ before k in u}` and
/// `q_k = k - #{ℓ < k : ℓ after k in v}`.
pub fn factors_from_inversions(u: &Permutation, v: &Permutation) -> (AscendingFactorization, DescendingFactorization) {
    (ascending_from_inversions(u), descending_from_inversions(v))
}

pub fn ascending_from_inversions(u: &Permutation) -> AscendingFactorization {
    let inv = u.inverse();
    let n = u.len();
    let p = (1..=n)
        .map(|k| k + ((k + 1)..=n).filter(|&l| inv.apply(l) < inv.apply(k)).count())
        .collect();
    AscendingFactorization { p }
}

pub fn descending_from_inversions(v: &Permutation) -> DescendingFactorization {
    let inv = v.inverse();
    let n = v.len();
    let q = (1..=n)
        .map(|k| k - (1..k).filter(|&l| inv.apply(l) > inv.apply(k)).count())
        .collect();
    DescendingFactorization { q }
}

pub fn compose_from_factors(p: &AscendingFactorization) -> Permutation {
    let n = p.len();
    let mut u = Permutation::identity(n);
    for (k, &pk) in p.values().iter().enumerate() {
        u = Permutation::cycle(n, k + 1, pk).compose(&u);
    }
    u
}

pub fn compose_from_factors_desc(q: &DescendingFactorization) -> Permutation {
    let n = q.len();
    let mut v = Permutation::identity(n);
    for (k, &qk) in q.values().iter().enumerate() {
        v = v.compose(&Permutation::cycle(n, k + 1, qk));
    }
    v
}

/// The partial inverses `π_n, ..., π_1` of `u = compose_from_factors(p)`:
/// `π_k` is a word on `{k..n}` obtained from `π_{k+1}` by putting `p_k` in
/// front and lowering every old entry `≤ p_k` by one. `π_1 = u⁻¹`.
pub fn partial_inverses(p: &AscendingFactorization) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut out = Vec::with_capacity(n);
    let mut cur: Vec<usize> = Vec::new();
    for k in (1..=n).rev() {
        let pk = p.values()[k - 1];
        let mut next = Vec::with_capacity(cur.len() + 1);
        next.push(pk);
        next.extend(cur.iter().map(|&x| if x <= pk { x - 1 } else { x }));
        out.push(next.clone());
        cur = next;
    }
    out
}
