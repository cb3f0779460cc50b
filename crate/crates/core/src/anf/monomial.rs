use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub(crate) const WORDS: usize = 5;

/// Largest variable count a [`Monomial`] can address.
pub const MAX_VARS: usize = WORDS * 64;

/// A square-free monomial, stored as the set of its variables.
///
/// Variable `i` (0-based) is printed as `x{i+1}`. The empty set is the
/// constant monomial `1`.
///
/// `Ord` is the degree reverse lexicographic order: lower degree first,
/// and among equal degrees the monomial holding the highest-indexed
/// differing variable is the smaller one (so `x1 > x2 > x3`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    words: [u64; WORDS],
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial { words: [0; WORDS] }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index {i} out of range");
        let mut m = Self::one();
        m.words[i / 64] |= 1 << (i % 64);
        m
    }

    pub fn from_vars<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        let mut m = Self::one();
        for i in vars {
            m = m.mul(&Self::var(i));
        }
        m
    }

    /// Monomial whose variables are the set bits of `mask` (bit `j` is `x{j+1}`).
    pub fn from_mask(mask: u64) -> Self {
        let mut m = Self::one();
        m.words[0] = mask;
        m
    }

    /// Low 64 variables as a bit mask.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }

    pub fn degree(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < MAX_VARS && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Product reduced by the field equations: the union of variable sets.
    #[must_use]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
        Monomial { words }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    /// `self / other`, assuming `other` divides `self`.
    #[must_use]
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        Monomial { words }
    }

    #[must_use]
    pub fn without(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.words[i / 64] &= !(1 << (i % 64));
        m
    }

    /// Highest variable index, `None` for the constant monomial.
    pub fn max_var(&self) -> Option<usize> {
        (0..WORDS)
            .rev()
            .find(|&w| self.words[w] != 0)
            .map(|w| w * 64 + 63 - self.words[w].leading_zeros() as usize)
    }

    /// Variable indices in increasing order.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Value of the monomial at a point given as a variable set: 1 iff every
    /// variable of the monomial is set in the point.
    pub fn eval_at(&self, point: &Monomial) -> bool {
        self.divides(point)
    }

    /// Smallest variable count able to hold this monomial.
    pub fn min_nvars(&self) -> usize {
        self.max_var().map_or(0, |v| v + 1)
    }

    pub(crate) fn check_nvars(&self, nvars: usize) -> Result<()> {
        if self.min_nvars() > nvars {
            return Err(Error::usage(format!(
                "monomial {self} does not fit in {nvars} variables"
            )));
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for w in (0..WORDS).rev() {
            let diff = self.words[w] ^ other.words[w];
            if diff != 0 {
                let top = 63 - diff.leading_zeros();
                return if self.words[w] >> top & 1 == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, v) in self.vars().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{}", v + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
