use std::fmt;

/// A set of letters (vertices of the simplex), stored as a bitmask with bit
/// `a - 1` standing for letter `a`. Supports up to 32 letters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Letters(pub u32);

impl Letters {
    pub const EMPTY: Letters = Letters(0);

    pub fn single(a: usize) -> Letters {
        debug_assert!((1..=32).contains(&a));
        Letters(1 << (a - 1))
    }

    /// The full alphabet `{1..d}`.
    pub fn full(d: usize) -> Letters {
        if d >= 32 {
            Letters(u32::MAX)
        } else {
            Letters((1u32 << d) - 1)
        }
    }

    pub fn from_slice(letters: &[usize]) -> Letters {
        letters.iter().fold(Letters::EMPTY, |acc, &a| acc | Letters::single(a))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, a: usize) -> bool {
        (1..=32).contains(&a) && self.0 & (1 << (a - 1)) != 0
    }

    pub fn is_subset(self, other: Letters) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, a: usize) {
        *self = *self | Letters::single(a);
    }

    pub fn remove(&mut self, a: usize) {
        self.0 &= !(1 << (a - 1));
    }

    /// Smallest letter of a nonempty set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest letter of a nonempty set.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(a)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Removes letter `a` and shifts every larger letter down by one.
    pub fn without_letter_reindexed(self, a: usize) -> Letters {
        let low = self.0 & ((1u32 << (a - 1)) - 1);
        let high = if a >= 32 { 0 } else { self.0 >> a };
        Letters(low | (high << (a - 1)))
    }

    /// Image of the set under a relabeling `map[old - 1] = new`.
    pub fn map(self, map: &[usize]) -> Letters {
        self.iter()
            .fold(Letters::EMPTY, |acc, a| acc | Letters::single(map[a - 1]))
    }
}

impl std::ops::BitOr for Letters {
    type Output = Letters;
    fn bitor(self, rhs: Letters) -> Letters {
        Letters(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for Letters {
    type Output = Letters;
    fn bitand(self, rhs: Letters) -> Letters {
        Letters(self.0 & rhs.0)
    }
}

impl std::ops::Sub for Letters {
    type Output = Letters;
    fn sub(self, rhs: Letters) -> Letters {
        Letters(self.0 & !rhs.0)
    }
}

/// Letters print as `A, B, C, ...` when every letter is at most 26, which
/// is how cells are usually written by hand (`ABC+B`).
impl fmt::Display for Letters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.iter() {
            if a <= 26 {
                write!(f, "{}", (b'A' + (a - 1) as u8) as char)?;
            } else {
                write!(f, "[{a}]")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Letters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_operations() {
        let s = Letters::from_slice(&[1, 3]);
        assert_eq!(s.len(), 2);
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.to_vec(), vec![1, 3]);
        assert_eq!(s.to_string(), "AC");
        assert_eq!(Letters::full(4).to_string(), "ABCD");
        assert_eq!(s.first(), Some(1));
        assert_eq!(s.last(), Some(3));
    }

    #[test]
    fn reindexing_after_removal() {
        let s = Letters::from_slice(&[1, 3, 4]);
        assert_eq!(s.without_letter_reindexed(2).to_vec(), vec![1, 2, 3]);
        assert_eq!(s.without_letter_reindexed(3).to_vec(), vec![1, 3]);
        assert_eq!(s.without_letter_reindexed(1).to_vec(), vec![2, 3]);
    }
}
