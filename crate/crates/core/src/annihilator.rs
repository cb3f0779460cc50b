//! Annihilator ideals of a filter function and their reduced Groebner bases.
//!
//! For a filter `F` in `m` variables, side 0 is `I0 = <F> + L_m` and side 1
//! is `I1 = <F + 1> + L_m`. Each is the vanishing ideal of the points where
//! `F` (resp. `F + 1`) is zero, so its reduced degrevlex Groebner basis is
//! computed by the Buchberger-Moeller algorithm: walk the square-free
//! monomials in increasing order and test each one's evaluation vector
//! against those of the standard monomials found so far.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::anf::{monomials_up_to, to_truth_table, BoolPoly, Degree, Monomial, MonomialIndexer};
use crate::error::{Error, Result};
use crate::gf2::{max_independent_rows, BitMatrix, BitVector, IncrementalBasis};

/// Largest filter width handled by point enumeration.
pub const MAX_FILTER_VARS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    /// `<F>`: its members annihilate `F + 1`.
    Zero,
    /// `<F + 1>`: its members annihilate `F`.
    One,
}

impl Side {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Side::One
        } else {
            Side::Zero
        }
    }

    pub fn bit(self) -> bool {
        self == Side::One
    }

    /// The function the side's ideal is generated by: `F` or `F + 1`.
    pub fn generator(self, f: &BoolPoly) -> BoolPoly {
        match self {
            Side::Zero => f.clone(),
            Side::One => f.complement(),
        }
    }
}

/// Reduced Groebner basis of one annihilator ideal, field equations left out.
#[derive(Clone, Debug)]
pub struct AnnihilatorBasis {
    pub side: Side,
    pub m: usize,
    /// Every square-free member of the reduced basis, ascending by leading monomial.
    pub gb: Vec<BoolPoly>,
    /// Members of degree at most `deg F`; these still generate the ideal.
    pub gb_prime: Vec<BoolPoly>,
    /// Degree of the filter the basis was computed for.
    pub filter_degree: Degree,
}

impl AnnihilatorBasis {
    /// The ideal is the whole ring: that output value never occurs.
    pub fn is_unit_ideal(&self) -> bool {
        self.gb.len() == 1 && self.gb[0].is_constant() && !self.gb[0].is_zero()
    }

    /// Largest degree among `gb_prime`.
    pub fn max_degree(&self) -> Option<usize> {
        self.gb_prime.iter().filter_map(|g| g.degree().finite()).max()
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        histogram(&self.gb_prime)
    }

    /// Multiplies every `gb_prime` member by all square-free monomials in the
    /// filter variables keeping the total degree at most `bound`.
    pub fn expand_to_degree(&self, bound: usize) -> Result<ExpandedSet> {
        if let Some(d) = self.max_degree() {
            if bound < d {
                return Err(Error::usage(format!("expansion bound {bound} below basis degree {d}")));
            }
        }
        Ok(expand_polys(&self.gb_prime, self.m, bound))
    }
}

fn histogram(polys: &[BoolPoly]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for p in polys {
        if let Some(d) = p.degree().finite() {
            *h.entry(d).or_insert(0) += 1;
        }
    }
    h
}

/// Points of `{0,1}^m` (as variable masks) where `f` takes `value`.
fn points_where(f: &BoolPoly, value: bool) -> Result<Vec<u64>> {
    let tt = to_truth_table(f)?;
    Ok(tt
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == value)
        .map(|(i, _)| i as u64)
        .collect())
}

fn eval_vector(mono: &Monomial, points: &[u64]) -> BitVector {
    let mask = mono.low_mask();
    let mut v = BitVector::zeros(points.len());
    for (i, &p) in points.iter().enumerate() {
        if p & mask == mask {
            v.set(i, true);
        }
    }
    v
}

fn check_filter(f: &BoolPoly) -> Result<()> {
    if f.nvars() > MAX_FILTER_VARS {
        return Err(Error::usage(format!(
            "filters are limited to {MAX_FILTER_VARS} variables, got {}",
            f.nvars()
        )));
    }
    Ok(())
}

/// Reduced degrevlex Groebner basis of the vanishing ideal of a point set,
/// restricted to square-free members.
pub fn vanishing_ideal_basis(m: usize, points: &[u64]) -> Vec<BoolPoly> {
    let npts = points.len();
    let monos = monomials_up_to(m, m);
    let mut standard: Vec<Monomial> = Vec::new();
    // reduced evaluation vectors keyed by lowest set bit, with the set of
    // standard monomials (by index) whose sum they are
    let mut evals: Vec<(BitVector, BitVector)> = Vec::new();
    let mut pivot_of: Vec<Option<usize>> = vec![None; npts];
    let mut leading: Vec<Monomial> = Vec::new();
    let mut gb = Vec::new();

    for t in monos {
        if leading.iter().any(|l| l.divides(&t)) {
            continue;
        }
        let mut v = eval_vector(&t, points);
        let mut combo = BitVector::zeros(1 << m);
        while let Some(p) = v.first_one() {
            match pivot_of[p] {
                Some(k) => {
                    v.xor_assign(&evals[k].0);
                    combo.xor_assign(&evals[k].1);
                }
                None => break,
            }
        }
        match v.first_one() {
            None => {
                let tail = combo.ones().map(|s| standard[s]);
                let g = BoolPoly::from_terms(m, std::iter::once(t).chain(tail)).expect("monomials in range");
                leading.push(t);
                gb.push(g);
            }
            Some(p) => {
                combo.set(standard.len(), true);
                standard.push(t);
                pivot_of[p] = Some(evals.len());
                evals.push((v, combo));
            }
        }
    }
    gb
}

/// Full reduction of `p` by `basis` (square-free, degrevlex).
pub fn normal_form(p: &BoolPoly, basis: &[BoolPoly]) -> BoolPoly {
    let nvars = p.nvars();
    let lead: Vec<(Monomial, &BoolPoly)> = basis
        .iter()
        .filter_map(|g| g.leading_monomial().map(|l| (l, g)))
        .collect();
    let mut rest = p.clone();
    let mut remainder = Vec::new();
    while let Some(top) = rest.leading_monomial() {
        match lead.iter().find(|(l, _)| l.divides(&top)) {
            Some((l, g)) => {
                let q = top.quotient(l);
                rest = rest.add(&g.mul_monomial(&q)).expect("same width");
            }
            None => {
                remainder.push(top);
                rest = rest
                    .add(&BoolPoly::from_monomial(nvars, top).expect("in range"))
                    .expect("same width");
            }
        }
    }
    BoolPoly::from_terms(nvars, remainder).expect("in range")
}

/// Reduced Groebner basis of `I0` or `I1` for a filter of at most
/// [`MAX_FILTER_VARS`] variables.
///
/// A constant filter makes one side the unit ideal; its basis is `{1}`.
pub fn reduced_gb_of_annihilator_ideal(f: &BoolPoly, side: Side) -> Result<AnnihilatorBasis> {
    check_filter(f)?;
    let m = f.nvars();
    // I0 vanishes where F = 0, I1 where F = 1
    let points = points_where(f, side.bit())?;
    let gb = vanishing_ideal_basis(m, &points);
    let filter_degree = f.degree();
    let gb_prime: Vec<BoolPoly> = gb
        .iter()
        .filter(|g| g.degree() <= filter_degree || g.is_constant())
        .cloned()
        .collect();
    let basis = AnnihilatorBasis {
        side,
        m,
        gb,
        gb_prime,
        filter_degree,
    };
    if !basis.is_unit_ideal() {
        // the generator must reduce to zero against the truncated basis
        let generator = side.generator(f);
        if !normal_form(&generator, &basis.gb_prime).is_zero() {
            return Err(Error::analysis(format!(
                "basis members of degree <= {filter_degree} do not generate the ideal"
            )));
        }
    }
    Ok(basis)
}

/// Minimum degree of a nonzero annihilator of `f` or `f + 1`, found as the
/// first degree whose evaluation matrix on the support has a nonzero kernel.
///
/// A constant function has algebraic immunity 0.
pub fn algebraic_immunity(f: &BoolPoly) -> Result<usize> {
    check_filter(f)?;
    let m = f.nvars();
    if f.is_constant() {
        return Ok(0);
    }
    let ones = points_where(f, true)?;
    let zeros = points_where(f, false)?;
    let monos = monomials_up_to(m, m);
    for d in 0..=m {
        let cols: Vec<&Monomial> = monos.iter().filter(|t| t.degree() <= d).collect();
        for pts in [&ones, &zeros] {
            let mat = BitMatrix::from_fn(pts.len(), cols.len(), |r, c| {
                let mask = cols[c].low_mask();
                pts[r] & mask == mask
            });
            if mat.rank() < cols.len() {
                return Ok(d);
            }
        }
    }
    unreachable!("f * (f + 1) = 0 gives an annihilator of degree at most m")
}

/// A product `multiplier * basis[gb_index]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedPoly {
    pub poly: BoolPoly,
    pub gb_index: usize,
    pub multiplier: Monomial,
}

/// Distinct nonzero products of basis members by low-degree monomials.
#[derive(Clone, Debug)]
pub struct ExpandedSet {
    pub m: usize,
    pub bound: usize,
    pub polys: Vec<ExpandedPoly>,
}

/// Products `x^a * g` with `deg(x^a) + deg(g) <= bound`, reduced by the
/// field equations; zeros and repeats dropped.
pub fn expand_polys(polys: &[BoolPoly], m: usize, bound: usize) -> ExpandedSet {
    let monos = monomials_up_to(m, bound);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (gi, g) in polys.iter().enumerate() {
        let Some(dg) = g.degree().finite() else { continue };
        for mult in monos.iter().take_while(|t| t.degree() + dg <= bound) {
            let prod = g.mul_monomial(mult);
            if prod.is_zero() || !seen.insert(prod.clone()) {
                continue;
            }
            out.push(ExpandedPoly {
                poly: prod,
                gb_index: gi,
                multiplier: *mult,
            });
        }
    }
    ExpandedSet { m, bound, polys: out }
}

/// Linearly independent polynomials with their degree counts.
#[derive(Clone, Debug)]
pub struct IndependentSet {
    pub polys: Vec<BoolPoly>,
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl IndependentSet {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// Coefficient vectors of polynomials over `monomials_up_to(m, bound)`.
pub fn coefficient_vectors(polys: &[&BoolPoly], m: usize, bound: usize) -> Vec<BitVector> {
    let ix = MonomialIndexer::new(m, bound).expect("small filter");
    polys
        .iter()
        .map(|p| {
            let mut v = BitVector::zeros(ix.len());
            for t in p.terms() {
                v.set(ix.index_of(t).expect("within bound"), true);
            }
            v
        })
        .collect()
}

/// Greedy maximal independent subset, visiting polynomials by ascending
/// (degree, leading monomial) so low-degree members are kept first.
pub fn independent_subset(s: &ExpandedSet) -> IndependentSet {
    let mut order: Vec<&BoolPoly> = s.polys.iter().map(|e| &e.poly).collect();
    order.sort_by_key(|p| (p.degree(), p.leading_monomial()));
    let bound = order.iter().filter_map(|p| p.degree().finite()).max().unwrap_or(0);
    let vecs = coefficient_vectors(&order, s.m, bound);
    let keep = max_independent_rows(&vecs);
    let polys: Vec<BoolPoly> = keep.into_iter().map(|i| order[i].clone()).collect();
    IndependentSet {
        degree_histogram: histogram(&polys),
        polys,
    }
}

/// Dimension of the span of a list of polynomials in `m` variables.
pub fn span_rank(polys: &[BoolPoly], m: usize) -> usize {
    let refs: Vec<&BoolPoly> = polys.iter().collect();
    let mut basis = IncrementalBasis::new(1 << m);
    for v in coefficient_vectors(&refs, m, m) {
        basis.insert(&v);
    }
    basis.rank()
}

/// Everything derived from one filter: immunity, both bases and both `S'` sets.
#[derive(Clone, Debug)]
pub struct FilterAnalysis {
    pub algebraic_immunity: usize,
    /// Indexed by side: `[I0, I1]`.
    pub bases: [AnnihilatorBasis; 2],
    /// Independent subsets of each basis expanded to degree `m`.
    pub s_prime: [IndependentSet; 2],
}

impl FilterAnalysis {
    pub fn basis(&self, side: Side) -> &AnnihilatorBasis {
        &self.bases[side.bit() as usize]
    }

    pub fn s_prime(&self, side: Side) -> &IndependentSet {
        &self.s_prime[side.bit() as usize]
    }
}

pub fn analyze_filter(f: &BoolPoly) -> Result<FilterAnalysis> {
    let algebraic_immunity = algebraic_immunity(f)?;
    let b0 = reduced_gb_of_annihilator_ideal(f, Side::Zero)?;
    let b1 = reduced_gb_of_annihilator_ideal(f, Side::One)?;
    let m = f.nvars();
    let s0 = independent_subset(&expand_polys(&b0.gb_prime, m, m));
    let s1 = independent_subset(&expand_polys(&b1.gb_prime, m, m));
    Ok(FilterAnalysis {
        algebraic_immunity,
        bases: [b0, b1],
        s_prime: [s0, s1],
    })
}
