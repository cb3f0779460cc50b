use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::monomial::{Monomial, MAX_VARS};
use crate::error::{Error, Result};

/// Degree of a Boolean polynomial; the zero polynomial has degree `NegInfinity`
/// so that maxima over collections are always defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A square-free polynomial over GF(2) in `nvars` variables (an ANF).
///
/// Terms are kept sorted ascending in degrevlex order without duplicates,
/// so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolPoly {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl BoolPoly {
    pub fn zero(nvars: usize) -> Self {
        BoolPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        BoolPoly {
            nvars,
            terms: vec![Monomial::one()],
        }
    }

    /// The variable `x{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        Self::from_monomial(nvars, Monomial::var(i))
    }

    pub fn from_monomial(nvars: usize, m: Monomial) -> Result<Self> {
        check_width(nvars)?;
        m.check_nvars(nvars)?;
        Ok(BoolPoly { nvars, terms: vec![m] })
    }

    /// Builds a polynomial from a list of terms; repeated terms cancel in pairs.
    pub fn from_terms<I: IntoIterator<Item = Monomial>>(nvars: usize, terms: I) -> Result<Self> {
        check_width(nvars)?;
        let mut set = HashSet::new();
        for t in terms {
            t.check_nvars(nvars)?;
            if !set.insert(t) {
                set.remove(&t);
            }
        }
        Ok(Self::from_set(nvars, set))
    }

    pub(crate) fn from_set(nvars: usize, set: HashSet<Monomial>) -> Self {
        let mut terms: Vec<Monomial> = set.into_iter().collect();
        terms.sort_unstable();
        BoolPoly { nvars, terms }
    }

    /// Terms already known to be distinct and within range.
    pub(crate) fn from_sorted_unique(nvars: usize, terms: Vec<Monomial>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        BoolPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending degrevlex order.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(Monomial::is_one)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    pub fn degree(&self) -> Degree {
        // highest degrevlex term has the highest degree
        self.terms
            .last()
            .map_or(Degree::NegInfinity, |m| Degree::Finite(m.degree()))
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.last().copied()
    }

    /// Same polynomial viewed in a larger (or equal) ambient ring.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        check_width(nvars)?;
        for t in &self.terms {
            t.check_nvars(nvars)?;
        }
        Ok(BoolPoly {
            nvars,
            terms: self.terms.clone(),
        })
    }

    fn check_same(&self, other: &BoolPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::usage(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    /// Sum over GF(2): the symmetric difference of the supports.
    pub fn add(&self, other: &BoolPoly) -> Result<BoolPoly> {
        self.check_same(other)?;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(BoolPoly {
            nvars: self.nvars,
            terms: out,
        })
    }

    /// `self + 1`.
    #[must_use]
    pub fn complement(&self) -> BoolPoly {
        self.add(&BoolPoly::one(self.nvars)).expect("same width")
    }

    /// Product in the quotient by the field equations (`x_i^2 = x_i`).
    pub fn mul_reduced(&self, other: &BoolPoly) -> Result<BoolPoly> {
        self.check_same(other)?;
        let mut set = HashSet::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                let p = a.mul(b);
                if !set.insert(p) {
                    set.remove(&p);
                }
            }
        }
        Ok(Self::from_set(self.nvars, set))
    }

    /// Product with a single monomial, reduced by the field equations.
    #[must_use]
    pub fn mul_monomial(&self, m: &Monomial) -> BoolPoly {
        let mut set = HashSet::with_capacity(self.len());
        for t in &self.terms {
            let p = t.mul(m);
            if !set.insert(p) {
                set.remove(&p);
            }
        }
        Self::from_set(self.nvars, set)
    }

    /// Value at a point given as one bit per variable.
    pub fn evaluate(&self, point: &[bool]) -> Result<bool> {
        if point.len() != self.nvars {
            return Err(Error::usage(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let set = Monomial::from_vars(point.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
        Ok(self.evaluate_set(&set))
    }

    /// Value at a point given as the set of variables equal to 1.
    pub fn evaluate_set(&self, point: &Monomial) -> bool {
        self.terms.iter().filter(|t| t.eval_at(point)).count() % 2 == 1
    }

    /// Substitutes a constant for variable `var`.
    #[must_use]
    pub fn substitute(&self, var: usize, value: bool) -> BoolPoly {
        let mut set = HashSet::with_capacity(self.len());
        for t in &self.terms {
            if t.contains(var) {
                if !value {
                    continue;
                }
                let r = t.without(var);
                if !set.insert(r) {
                    set.remove(&r);
                }
            } else if !set.insert(*t) {
                set.remove(t);
            }
        }
        Self::from_set(self.nvars, set)
    }

    /// Parses the text format (`x1*x2+x3+1`, `0`), whitespace tolerated.
    pub fn parse(text: &str, nvars: usize) -> Result<BoolPoly> {
        check_width(nvars)?;
        let perr = |col: usize, msg: String| Error::Parse { line: 1, col, msg };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(perr(1, "empty polynomial".into()));
        }
        if trimmed == "0" {
            return Ok(BoolPoly::zero(nvars));
        }
        let mut set = HashSet::new();
        let mut col = 1;
        for term in text.split('+') {
            let mut m = Monomial::one();
            let mut tcol = col;
            let mut saw_factor = false;
            for factor in term.split('*') {
                let lead = factor.len() - factor.trim_start().len();
                let f = factor.trim();
                let fcol = tcol + lead;
                if f == "1" {
                    saw_factor = true;
                } else if let Some(idx) = f.strip_prefix('x') {
                    let i: usize = idx.parse().map_err(|_| perr(fcol, format!("bad variable `{f}`")))?;
                    if i == 0 || i > nvars {
                        return Err(perr(fcol, format!("variable `{f}` outside x1..x{nvars}")));
                    }
                    m = m.mul(&Monomial::var(i - 1));
                    saw_factor = true;
                } else {
                    return Err(perr(fcol, format!("unexpected token `{f}`")));
                }
                tcol += factor.len() + 1;
            }
            if !saw_factor {
                return Err(perr(col, "empty term".into()));
            }
            if !set.insert(m) {
                set.remove(&m);
            }
            col += term.len() + 1;
        }
        Ok(Self::from_set(nvars, set))
    }
}

fn check_width(nvars: usize) -> Result<()> {
    if nvars > MAX_VARS {
        return Err(Error::usage(format!(
            "{nvars} variables exceed the supported maximum of {MAX_VARS}"
        )));
    }
    Ok(())
}

/// Terms joined by `+` in decreasing degrevlex order; `0` for the zero polynomial.
impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolPoly[{}]({})", self.nvars, self)
    }
}

impl FromStr for BoolPoly {
    type Err = Error;

    /// Parses with the variable count inferred from the highest index present.
    fn from_str(s: &str) -> Result<Self> {
        let p = BoolPoly::parse(s, MAX_VARS)?;
        let n = p.terms.iter().map(Monomial::min_nvars).max().unwrap_or(0);
        Ok(BoolPoly { nvars: n, ..p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> BoolPoly {
        BoolPoly::parse(s, n).unwrap()
    }

    #[test]
    fn add_examples() {
        let a = p("x1+x2", 3);
        assert!(a.add(&a).unwrap().is_zero());
        assert_eq!(a.add(&p("x2+x3", 3)).unwrap(), p("x1+x3", 3));
        assert!(matches!(a.add(&p("x1", 4)), Err(Error::Usage(_))));
    }

    #[test]
    fn mul_examples() {
        let x1 = p("x1", 2);
        assert_eq!(x1.mul_reduced(&x1).unwrap(), x1);
        assert!(p("x1+1", 2).mul_reduced(&x1).unwrap().is_zero());
        assert_eq!(
            p("x1+x2", 3).mul_reduced(&p("x2+x3", 3)).unwrap(),
            p("x1*x2+x1*x3+x2+x2*x3", 3)
        );
    }

    #[test]
    fn evaluate_examples() {
        assert!(!BoolPoly::zero(3).evaluate(&[true, false, true]).unwrap());
        assert!(p("x1*x2+x3", 3).evaluate(&[true, true, false]).unwrap());
        assert!(p("x1", 3).evaluate(&[true]).is_err());
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(BoolPoly::zero(4).degree(), Degree::NegInfinity);
        assert_eq!(BoolPoly::one(4).degree(), Degree::Finite(0));
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(p("x1*x2*x3+x4", 4).degree(), Degree::Finite(3));
    }

    #[test]
    fn text_format() {
        let q = p("x3 + x1*x2 + 1 + x2*x3", 3);
        assert_eq!(q.to_string(), "x1*x2+x2*x3+x3+1");
        assert_eq!(BoolPoly::zero(2).to_string(), "0");
        assert_eq!(BoolPoly::one(2).to_string(), "1");
        assert_eq!(p("x1+x1", 2).to_string(), "0");
        let back: BoolPoly = q.to_string().parse().unwrap();
        assert_eq!(back.terms(), q.terms());
    }

    #[test]
    fn parse_errors_carry_column() {
        match BoolPoly::parse("x1+x9", 3) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 4),
            other => panic!("{other:?}"),
        }
        match BoolPoly::parse("x1 + y2", 3) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 6),
            other => panic!("{other:?}"),
        }
        assert!(BoolPoly::parse("x1++x2", 3).is_err());
    }

    #[test]
    fn substitution() {
        let q = p("x1*x2+x2+x3", 3);
        assert_eq!(q.substitute(1, true), p("x1+1+x3", 3));
        assert_eq!(q.substitute(1, false), p("x3", 3));
    }
}
