//! Boolean functions in algebraic normal form.
//!
//! Everything here lives in the quotient ring `GF(2)[x1..xn] / <xi^2 + xi>`:
//! monomials are variable sets, polynomials are sets of monomials.

mod monomial;
mod poly;

pub use monomial::{Monomial, MAX_VARS};
pub use poly::{BoolPoly, Degree};

use crate::error::{Error, Result};

/// Largest variable count accepted by truth-table conversions.
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

/// Values of a Boolean function on all `2^m` inputs.
///
/// Input index `v` assigns bit `j` of `v` to variable `x{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    m: usize,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(m: usize, values: Vec<bool>) -> Result<Self> {
        check_tt_vars(m)?;
        if values.len() != 1 << m {
            return Err(Error::usage(format!(
                "truth table for {m} variables needs {} entries, got {}",
                1usize << m,
                values.len()
            )));
        }
        Ok(TruthTable { m, values })
    }

    pub fn from_fn(m: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_tt_vars(m)?;
        Ok(TruthTable {
            m,
            values: (0..1usize << m).map(f).collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, input: usize) -> bool {
        self.values[input]
    }

    pub fn weight(&self) -> usize {
        self.values.iter().filter(|&&b| b).count()
    }
}

fn check_tt_vars(m: usize) -> Result<()> {
    if m > MAX_TRUTH_TABLE_VARS {
        return Err(Error::Limit(format!(
            "truth tables are limited to {MAX_TRUTH_TABLE_VARS} variables, got {m}"
        )));
    }
    Ok(())
}

/// In-place binary Moebius transform; an involution.
fn moebius(values: &mut [bool]) {
    let n = values.len();
    let mut step = 1;
    while step < n {
        for block in (0..n).step_by(2 * step) {
            for i in block..block + step {
                values[i + step] ^= values[i];
            }
        }
        step *= 2;
    }
}

/// ANF of a truth table.
pub fn from_truth_table(t: &TruthTable) -> Result<BoolPoly> {
    let mut coeffs = t.values.clone();
    moebius(&mut coeffs);
    let mut terms: Vec<Monomial> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(mask, _)| Monomial::from_mask(mask as u64))
        .collect();
    terms.sort_unstable();
    Ok(BoolPoly::from_sorted_unique(t.m, terms))
}

/// Truth table of a polynomial with at most [`MAX_TRUTH_TABLE_VARS`] variables.
pub fn to_truth_table(p: &BoolPoly) -> Result<TruthTable> {
    let m = p.nvars();
    check_tt_vars(m)?;
    let mut values = vec![false; 1 << m];
    for t in p.terms() {
        values[t.low_mask() as usize] ^= true;
    }
    moebius(&mut values);
    Ok(TruthTable { m, values })
}

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Number of square-free monomials of degree at most `d` in `n` variables.
pub fn monomial_count(n: usize, d: usize) -> Option<u128> {
    let d = d.min(n);
    (0..=d).try_fold(0u128, |acc, i| acc.checked_add(binomial(n, i)?))
}

/// All square-free monomials of degree `<= d` in `n` variables, ascending in
/// degrevlex order. `d > n` is clamped to `n`.
pub fn monomials_up_to(n: usize, d: usize) -> Vec<Monomial> {
    assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
    let d = d.min(n);
    let mut out = Vec::new();
    for deg in 0..=d {
        let start = out.len();
        // colex order is exactly descending degrevlex within one degree
        let mut comb: Vec<usize> = (0..deg).collect();
        loop {
            out.push(Monomial::from_vars(comb.iter().copied()));
            let mut i = 0;
            while i < deg {
                let limit = if i + 1 < deg { comb[i + 1] } else { n };
                if comb[i] + 1 < limit {
                    comb[i] += 1;
                    for (j, c) in comb.iter_mut().enumerate().take(i) {
                        *c = j;
                    }
                    break;
                }
                i += 1;
            }
            if i == deg {
                break;
            }
        }
        out[start..].reverse();
    }
    out
}

/// Constant-time position lookup for monomials in `monomials_up_to(n, d)`.
#[derive(Clone, Debug)]
pub struct MonomialIndexer {
    n: usize,
    d: usize,
    /// binom[k][c] = C(c, k)
    binom: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    total: usize,
}

impl MonomialIndexer {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let d = d.min(n);
        let too_big = || Error::Limit(format!("monomial count for n={n}, D={d} overflows"));
        let mut binom = Vec::with_capacity(d + 2);
        for k in 0..=d + 1 {
            let row = (0..=n)
                .map(|c| binomial(c, k).and_then(|v| usize::try_from(v).ok()))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(too_big)?;
            binom.push(row);
        }
        let mut offsets = Vec::with_capacity(d + 2);
        let mut acc = 0usize;
        for k in 0..=d {
            offsets.push(acc);
            acc = acc.checked_add(binom[k][n]).ok_or_else(too_big)?;
        }
        Ok(MonomialIndexer {
            n,
            d,
            binom,
            offsets,
            total: acc,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.d
    }

    /// Total number of monomials indexed.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Position in ascending degrevlex order.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        let deg = m.degree();
        if deg > self.d || m.min_nvars() > self.n {
            return None;
        }
        let colex: usize = m.vars().enumerate().map(|(i, c)| self.binom[i + 1][c]).sum();
        Some(self.offsets[deg] + self.binom[deg][self.n] - 1 - colex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_table_examples() {
        let one = TruthTable::new(2, vec![true; 4]).unwrap();
        assert_eq!(from_truth_table(&one).unwrap(), BoolPoly::one(2));
        let xor = TruthTable::from_fn(2, |v| (v & 1 == 1) ^ (v & 2 == 2)).unwrap();
        assert_eq!(from_truth_table(&xor).unwrap().to_string(), "x1+x2");
        assert!(matches!(TruthTable::from_fn(25, |_| false), Err(Error::Limit(_))));
        assert!(TruthTable::new(3, vec![false; 7]).is_err());
    }

    #[test]
    fn small_enumeration() {
        let ms = monomials_up_to(3, 1);
        let s: Vec<String> = ms.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["1", "x3", "x2", "x1"]);
        assert_eq!(monomials_up_to(3, 9).len(), 8);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(monomials_up_to(21, 5).len(), 27896);
        for n in 0..=30 {
            for d in 0..=n {
                let expect: u128 = (0..=d).map(|i| binomial(n, i).unwrap()).sum();
                assert_eq!(monomial_count(n, d), Some(expect));
                if n <= 14 {
                    let ms = monomials_up_to(n, d);
                    assert_eq!(ms.len() as u128, expect);
                    assert!(ms.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn wide_enumeration() {
        let ms = monomials_up_to(259, 3);
        assert_eq!(ms.len(), 1 + 259 + 33411 + 2_862_209);
        assert_eq!(binomial(259, 3), Some(2_862_209));
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn indexer_agrees_with_enumeration() {
        for (n, d) in [(1, 1), (5, 3), (7, 7), (21, 5), (40, 3)] {
            let ms = monomials_up_to(n, d);
            let ix = MonomialIndexer::new(n, d).unwrap();
            assert_eq!(ix.len(), ms.len());
            for (i, m) in ms.iter().enumerate() {
                assert_eq!(ix.index_of(m), Some(i), "n={n} d={d} m={m}");
            }
        }
        let ix = MonomialIndexer::new(5, 2).unwrap();
        assert_eq!(ix.index_of(&Monomial::from_vars([0, 1, 2])), None);
        assert_eq!(ix.index_of(&Monomial::var(7)), None);
    }
}
