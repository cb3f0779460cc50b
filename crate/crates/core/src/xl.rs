//! Composition of annihilators with the linear update, XL linearization and
//! initial-state recovery.
//!
//! Clock `i` observes `z_i = F(L^i(x))` where `x` is the clock-0 state, so
//! the unknowns are the `n` bits of `x` and every equation is a composed
//! annihilator `g(L^i(x))` with `g` taken from the side matching `z_i`.
//!
//! Linearized matrices index columns by monomials in descending degrevlex
//! order, which puts the constant monomial in the last column where it acts
//! as the right-hand side.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::anf::{monomials_up_to, BoolPoly, Monomial, MonomialIndexer};
use crate::annihilator::{AnnihilatorBasis, Side};
use crate::cipher::{CipherSpec, LinearUpdateMatrix, WordState, WORD_BITS};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, IncrementalBasis, MemoryBudget};

/// Default bound on the dimension of an enumerated solution set.
pub const DEFAULT_ENUM_CAP: usize = 20;

/// The filter inputs at one clock as linear forms in the clock-0 state bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormSet {
    pub clock: usize,
    /// `forms[j]` gives filter input `x{j+1}`; length `n` each, no constant term.
    pub forms: Vec<BitVector>,
}

impl LinearFormSet {
    /// Clock-0 forms: unit vectors on the filter word's bits.
    pub fn initial(spec: &CipherSpec) -> Self {
        let n = spec.n();
        let base = spec.filter_word * WORD_BITS;
        LinearFormSet {
            clock: 0,
            forms: (0..WORD_BITS).map(|j| BitVector::unit(n, base + j)).collect(),
        }
    }

    /// Forms for the next clock.
    pub fn advance(&self, m: &LinearUpdateMatrix) -> Self {
        LinearFormSet {
            clock: self.clock + 1,
            forms: self
                .forms
                .iter()
                .map(|f| m.matrix().vec_mul(f).expect("matching size"))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.forms.first().map_or(0, |f| f.len())
    }

    /// Filter inputs for the given clock-0 state bits.
    pub fn evaluate(&self, state_bits: &BitVector) -> Vec<bool> {
        self.forms.iter().map(|f| f.dot(state_bits)).collect()
    }

    pub fn as_polys(&self) -> Vec<BoolPoly> {
        self.forms.iter().map(linear_poly).collect()
    }
}

fn linear_poly(form: &BitVector) -> BoolPoly {
    BoolPoly::from_terms(form.len(), form.ones().map(Monomial::var)).expect("within range")
}

/// Forms of the filter word at clock `i`, by applying the update to the
/// seven unit rows `i` times.
pub fn tap_forms(m: &LinearUpdateMatrix, i: usize, spec: &CipherSpec) -> LinearFormSet {
    let mut forms = LinearFormSet::initial(spec);
    for _ in 0..i {
        forms = forms.advance(m);
    }
    forms
}

/// Substitutes linear forms into polynomials of the filter variables,
/// sharing products of forms between calls.
pub struct Composer<'a> {
    forms: &'a LinearFormSet,
    products: Products,
}

/// Memoized products keyed by the mask of filter variables. States of at
/// most 64 bits use plain `u64` monomials.
enum Products {
    Narrow {
        linear: Vec<Vec<u64>>,
        cache: HashMap<u64, Vec<u64>>,
    },
    Wide {
        linear: Vec<BoolPoly>,
        cache: HashMap<u64, BoolPoly>,
    },
}

/// Sorts and removes terms occurring an even number of times.
fn cancel_pairs(v: &mut Vec<u64>) {
    v.sort_unstable();
    let mut out = 0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            v[out] = v[i];
            out += 1;
        }
        i = j;
    }
    v.truncate(out);
}

impl<'a> Composer<'a> {
    pub fn new(forms: &'a LinearFormSet) -> Self {
        let products = if forms.nvars() <= 64 {
            Products::Narrow {
                linear: forms
                    .forms
                    .iter()
                    .map(|f| f.ones().map(|v| 1u64 << v).collect())
                    .collect(),
                cache: HashMap::new(),
            }
        } else {
            Products::Wide {
                linear: forms.as_polys(),
                cache: HashMap::new(),
            }
        };
        Composer { forms, products }
    }

    fn narrow_product(linear: &[Vec<u64>], cache: &mut HashMap<u64, Vec<u64>>, mask: u64) -> Vec<u64> {
        if let Some(p) = cache.get(&mask) {
            return p.clone();
        }
        let p = if mask == 0 {
            vec![0]
        } else {
            let top = 63 - mask.leading_zeros() as usize;
            let rest = Self::narrow_product(linear, cache, mask & !(1 << top));
            let mut out = Vec::with_capacity(rest.len() * linear[top].len());
            for &t in &rest {
                out.extend(linear[top].iter().map(|&v| t | v));
            }
            cancel_pairs(&mut out);
            out
        };
        cache.insert(mask, p.clone());
        p
    }

    fn wide_product(linear: &[BoolPoly], cache: &mut HashMap<u64, BoolPoly>, nvars: usize, mask: u64) -> BoolPoly {
        if let Some(p) = cache.get(&mask) {
            return p.clone();
        }
        let p = if mask == 0 {
            BoolPoly::one(nvars)
        } else {
            let top = 63 - mask.leading_zeros() as usize;
            let rest = Self::wide_product(linear, cache, nvars, mask & !(1 << top));
            rest.mul_reduced(&linear[top]).expect("same width")
        };
        cache.insert(mask, p.clone());
        p
    }

    pub fn compose(&mut self, f: &BoolPoly) -> Result<BoolPoly> {
        if f.nvars() != self.forms.forms.len() {
            return Err(Error::usage(format!(
                "polynomial in {} variables composed with {} forms",
                f.nvars(),
                self.forms.forms.len()
            )));
        }
        let nvars = self.forms.nvars();
        match &mut self.products {
            Products::Narrow { linear, cache } => {
                let mut acc = Vec::new();
                for t in f.terms() {
                    acc.extend(Self::narrow_product(linear, cache, t.low_mask()));
                }
                cancel_pairs(&mut acc);
                let mut terms: Vec<Monomial> = acc.into_iter().map(Monomial::from_mask).collect();
                terms.sort_unstable();
                Ok(BoolPoly::from_sorted_unique(nvars, terms))
            }
            Products::Wide { linear, cache } => {
                let mut terms = Vec::new();
                for t in f.terms() {
                    terms.extend_from_slice(Self::wide_product(linear, cache, nvars, t.low_mask()).terms());
                }
                BoolPoly::from_terms(nvars, terms)
            }
        }
    }
}

/// `f` with each variable `x{j+1}` replaced by `forms[j]`.
pub fn compose(f: &BoolPoly, forms: &LinearFormSet) -> Result<BoolPoly> {
    Composer::new(forms).compose(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedEquation {
    pub clock: usize,
    pub basis_index: usize,
    pub side: Side,
    pub poly: BoolPoly,
}

/// The composed equations for an observed keystream.
#[derive(Clone, Debug)]
pub struct AttackSystem {
    pub n: usize,
    pub equations: Vec<TaggedEquation>,
    pub keystream: Vec<bool>,
}

impl AttackSystem {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.equations
            .iter()
            .filter_map(|e| e.poly.degree().finite())
            .max()
            .unwrap_or(0)
    }

    /// True when every equation vanishes at the given state bits.
    pub fn vanishes_at(&self, state_bits: &[bool]) -> bool {
        self.equations
            .iter()
            .all(|e| !e.poly.evaluate(state_bits).expect("n bits"))
    }
}

/// Rows of the multiplied system assuming composition keeps each basis
/// member's degree; used to refuse hopeless runs before composing.
pub fn expected_rows(bases: &[AnnihilatorBasis; 2], keystream: &[bool], n: usize, d_bound: usize) -> u128 {
    let per_side = |b: &AnnihilatorBasis| -> u128 {
        b.gb_prime
            .iter()
            .filter_map(|g| g.degree().finite())
            .filter(|&e| e <= d_bound)
            .map(|e| {
                (0..=d_bound - e)
                    .map(|k| crate::anf::binomial(n, k).unwrap_or(u128::MAX))
                    .fold(0u128, u128::saturating_add)
            })
            .fold(0u128, u128::saturating_add)
    };
    let sides = [per_side(&bases[0]), per_side(&bases[1])];
    keystream
        .iter()
        .map(|&z| sides[z as usize])
        .fold(0u128, u128::saturating_add)
}

/// Budget check on the matrix the attack will build, before any composition.
pub fn precheck_budget(
    bases: &[AnnihilatorBasis; 2],
    keystream: &[bool],
    n: usize,
    d_bound: usize,
    opts: &XlOptions,
) -> Result<()> {
    let cols = crate::anf::monomial_count(n, d_bound).unwrap_or(u128::MAX);
    let mut rows = expected_rows(bases, keystream, n, d_bound);
    if opts.mode == BuildMode::Streaming {
        rows = rows.min(cols);
    }
    let bytes = rows.saturating_mul(cols.div_ceil(64)).saturating_mul(8);
    if bytes > opts.budget.cap_bytes as u128 {
        return Err(Error::Resource {
            msg: format!("XL matrix: {rows} x {cols} bit matrix"),
            required_bytes: u64::try_from(bytes).unwrap_or(u64::MAX),
            cap_bytes: opts.budget.cap_bytes,
        });
    }
    Ok(())
}

/// For each clock `i`, composes every member of `G'_{z_i}` with the clock's forms.
pub fn build_attack_system(
    spec: &CipherSpec,
    bases: &[AnnihilatorBasis; 2],
    keystream: &[bool],
) -> Result<AttackSystem> {
    for b in bases {
        if b.m != spec.m() {
            return Err(Error::usage(format!(
                "basis over {} variables for a {}-bit filter",
                b.m,
                spec.m()
            )));
        }
    }
    let m = spec.update_matrix();
    let mut forms = LinearFormSet::initial(spec);
    let mut equations = Vec::new();
    for (i, &z) in keystream.iter().enumerate() {
        if i > 0 {
            forms = forms.advance(&m);
        }
        let side = Side::from_bit(z);
        let basis = &bases[z as usize];
        if basis.gb_prime.is_empty() {
            return Err(Error::analysis(format!(
                "keystream bit {i} is {} but that side has no annihilators",
                z as u8
            )));
        }
        let mut composer = Composer::new(&forms);
        for (j, g) in basis.gb_prime.iter().enumerate() {
            equations.push(TaggedEquation {
                clock: i,
                basis_index: j,
                side,
                poly: composer.compose(g)?,
            });
        }
    }
    Ok(AttackSystem {
        n: spec.n(),
        equations,
        keystream: keystream.to_vec(),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum BuildMode {
    /// Build the whole deduplicated matrix, then eliminate once.
    #[default]
    Batch,
    /// Reduce each row against a growing echelon basis as it is generated.
    Streaming,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct XlOptions {
    pub budget: MemoryBudget,
    pub mode: BuildMode,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinearizeStats {
    pub generated_rows: usize,
    pub zero_rows: usize,
    /// Exact repeats in batch mode; every dependent row in streaming mode.
    pub duplicate_rows: usize,
    pub kept_rows: usize,
    pub columns: usize,
}

/// Coefficient matrix of the multiplied system.
#[derive(Clone, Debug)]
pub struct LinearizedSystem {
    pub matrix: BitMatrix,
    pub n: usize,
    pub d_bound: usize,
    pub stats: LinearizeStats,
    indexer: MonomialIndexer,
}

impl LinearizedSystem {
    pub fn columns(&self) -> usize {
        self.indexer.len()
    }

    pub fn column_of(&self, m: &Monomial) -> Option<usize> {
        self.indexer.index_of(m).map(|i| self.columns() - 1 - i)
    }

    pub fn constant_column(&self) -> usize {
        self.columns() - 1
    }

    /// Columns of `x1, ..., xn` in variable order.
    pub fn linear_columns(&self) -> Vec<usize> {
        (0..self.n)
            .map(|v| self.column_of(&Monomial::var(v)).expect("degree 1 present"))
            .collect()
    }

    /// Value of every column's monomial at a point, constant column included.
    pub fn expansion(&self, state_bits: &BitVector) -> BitVector {
        expansion(&self.indexer, state_bits)
    }

    /// True when every row vanishes at the given state bits.
    pub fn is_satisfied_by(&self, state_bits: &BitVector) -> bool {
        let e = self.expansion(state_bits);
        (0..self.matrix.rows()).all(|r| !self.matrix.row(r).dot(&e))
    }
}

fn expansion(ix: &MonomialIndexer, state_bits: &BitVector) -> BitVector {
    let total = ix.len();
    let mut out = BitVector::zeros(total);
    let support: Vec<usize> = state_bits.ones().collect();
    let d = ix.max_degree();
    // every subset of the support with at most d elements
    let mut stack: Vec<(usize, Monomial)> = vec![(0, Monomial::one())];
    while let Some((start, mono)) = stack.pop() {
        out.set(total - 1 - ix.index_of(&mono).expect("in range"), true);
        if mono.degree() == d {
            continue;
        }
        for k in start..support.len() {
            stack.push((k + 1, mono.mul(&Monomial::var(support[k]))));
        }
    }
    out
}

fn row_hash(words: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    words.hash(&mut h);
    h.finish()
}

/// Multiplies every equation by all monomials in the `n` variables that keep
/// the degree at most `D` and writes the products as matrix rows; zero and
/// repeated rows are dropped.
pub fn xl_multiply_linearize(sys: &AttackSystem, d_bound: usize, opts: &XlOptions) -> Result<LinearizedSystem> {
    let n = sys.n;
    let d = sys.max_degree();
    if d_bound < d {
        return Err(Error::usage(format!("D = {d_bound} is below the equation degree {d}")));
    }
    let ix = MonomialIndexer::new(n, d_bound)?;
    let cols = ix.len();
    // multipliers of degree <= D - e are a prefix of the ascending list
    let mut prefix = vec![0usize; d_bound + 1];
    for (e, p) in prefix.iter_mut().enumerate() {
        *p = (0..=d_bound - e)
            .map(|k| crate::anf::binomial(n, k).unwrap_or(u128::MAX))
            .fold(0u128, |a, b| a.saturating_add(b))
            .min(usize::MAX as u128) as usize;
    }
    let upper_rows = sys
        .equations
        .iter()
        .map(|e| e.poly.degree().finite().map_or(0, |k| prefix[k]))
        .fold(0usize, |a, b| a.saturating_add(b));
    let stored_rows = match opts.mode {
        BuildMode::Batch => upper_rows,
        BuildMode::Streaming => upper_rows.min(cols),
    };
    opts.budget.check("XL matrix", stored_rows, cols)?;

    let min_degree = sys
        .equations
        .iter()
        .filter_map(|e| e.poly.degree().finite())
        .min()
        .unwrap_or(d_bound);
    let multipliers = monomials_up_to(n, d_bound - min_degree);

    let stride = cols.div_ceil(64);
    let mut stats = LinearizeStats {
        columns: cols,
        ..Default::default()
    };
    let mut matrix = BitMatrix::with_cols(cols);
    let mut streaming = IncrementalBasis::new(cols);
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    if opts.mode == BuildMode::Batch {
        matrix.reserve_rows(upper_rows);
    }
    let mut row = vec![0u64; stride];
    for eq in &sys.equations {
        let Some(e) = eq.poly.degree().finite() else { continue };
        for mu in &multipliers[..prefix[e]] {
            row.fill(0);
            for t in eq.poly.terms() {
                let c = cols - 1 - ix.index_of(&t.mul(mu)).expect("degree within bound");
                row[c / 64] ^= 1 << (c % 64);
            }
            stats.generated_rows += 1;
            if row.iter().all(|&w| w == 0) {
                stats.zero_rows += 1;
                continue;
            }
            match opts.mode {
                BuildMode::Batch => {
                    let bucket = seen.entry(row_hash(&row)).or_default();
                    if bucket.iter().any(|&r| matrix.row_words(r) == row.as_slice()) {
                        stats.duplicate_rows += 1;
                        continue;
                    }
                    bucket.push(matrix.rows());
                    matrix.push_row_words(&row);
                }
                BuildMode::Streaming => {
                    if !streaming.insert_words(&row) {
                        stats.duplicate_rows += 1;
                    }
                }
            }
        }
    }
    if opts.mode == BuildMode::Streaming {
        matrix = streaming.to_matrix();
    }
    stats.kept_rows = matrix.rows();
    Ok(LinearizedSystem {
        matrix,
        n,
        d_bound,
        stats,
        indexer: ix,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecoveryStatus {
    Unique,
    Enumerated,
    Failed,
}

#[derive(Clone, Copy, Debug)]
pub struct RecoveryOptions {
    pub enum_cap: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryResult {
    pub status: RecoveryStatus,
    #[serde(serialize_with = "ser_state")]
    pub state: Option<WordState>,
    pub rank: usize,
    pub rows: usize,
    pub columns: usize,
    /// Dimension of the solution set projected onto the state bits.
    pub residual_dimension: usize,
    /// Candidates examined by enumeration.
    pub enumerated: u64,
    /// Candidates that passed both consistency checks.
    pub survivors: usize,
    pub message: String,
}

fn ser_state<S: serde::Serializer>(v: &Option<WordState>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(w) => s.serialize_str(&w.to_hex()),
        None => s.serialize_none(),
    }
}

impl RecoveryResult {
    pub fn recovered(&self) -> bool {
        self.status != RecoveryStatus::Failed
    }
}

/// Row-reduces the linearized system, projects the solution set onto the
/// state bits and resolves a small residual set by enumeration.
///
/// Candidates must satisfy every reduced row through their monomial
/// expansion and must regenerate the observed keystream.
pub fn solve_and_recover(
    sys: LinearizedSystem,
    spec: &CipherSpec,
    keystream: &[bool],
    opts: &RecoveryOptions,
) -> Result<RecoveryResult> {
    let linear = sys.linear_columns();
    let rows = sys.matrix.rows();
    let columns = sys.columns();
    let indexer = sys.indexer;
    let ech = sys.matrix.into_rref();
    let rank = ech.rank;
    let proj = ech.project_solutions(&linear);
    if !proj.consistent {
        return Err(Error::analysis(
            "linearized system is inconsistent: the keystream does not fit this cipher",
        ));
    }
    let k = proj.dimension();
    let mut result = RecoveryResult {
        status: RecoveryStatus::Failed,
        state: None,
        rank,
        rows,
        columns,
        residual_dimension: k,
        enumerated: 0,
        survivors: 0,
        message: String::new(),
    };
    if k > opts.enum_cap || k >= 64 {
        result.message = format!(
            "solution set has dimension {k} on the state bits, above the enumeration cap {}",
            opts.enum_cap
        );
        return Ok(result);
    }
    let mut found = Vec::new();
    for choice in 0..1u64 << k {
        result.enumerated += 1;
        let bits = proj.member(choice);
        let state = WordState::from_bits(&bits)?;
        if spec.keystream(&state, keystream.len(), false)? != keystream {
            continue;
        }
        let e = expansion(&indexer, &bits);
        let fits = (0..rank).all(|r| !ech.reduced.row(r).dot(&e));
        if fits {
            found.push(state);
            if found.len() > 1 {
                break;
            }
        }
    }
    result.survivors = found.len();
    match found.len() {
        1 => {
            result.status = if k == 0 {
                RecoveryStatus::Unique
            } else {
                RecoveryStatus::Enumerated
            };
            result.state = found.pop();
            result.message = "state reproduces the keystream".into();
        }
        0 => result.message = "no candidate reproduces the keystream".into(),
        _ => result.message = "several candidates reproduce the keystream".into(),
    }
    Ok(result)
}

/// Outcome of the textbook XL variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenericXlOutcome {
    Solved(Vec<bool>),
    Failed {
        reason: String,
        /// Values fixed before the failure.
        partial: Vec<Option<bool>>,
    },
}

/// XL with univariate extraction: multiply, linearize with the monomials
/// `v` and `1` ordered last, read off `v = c` from the echelon form,
/// substitute, and repeat for the next variable. `eliminate_last` names the
/// first variable solved for (0-based).
pub fn generic_xl(
    equations: &[BoolPoly],
    d_bound: usize,
    eliminate_last: usize,
    budget: &MemoryBudget,
) -> Result<GenericXlOutcome> {
    let Some(first) = equations.first() else {
        return Ok(GenericXlOutcome::Failed {
            reason: "no equations".into(),
            partial: Vec::new(),
        });
    };
    let n = first.nvars();
    if eliminate_last >= n {
        return Err(Error::usage(format!("variable index {eliminate_last} outside 0..{n}")));
    }
    let d = first.degree();
    if equations.iter().any(|e| e.nvars() != n || e.degree() != d) {
        return Err(Error::usage("equations must share their width and degree"));
    }
    if d.finite().is_some_and(|d| d > d_bound) {
        return Err(Error::usage(format!("D = {d_bound} is below the equation degree {d}")));
    }

    let mut partial: Vec<Option<bool>> = vec![None; n];
    let order: Vec<usize> = std::iter::once(eliminate_last)
        .chain((0..n).filter(|&v| v != eliminate_last))
        .collect();
    let mut current: Vec<BoolPoly> = equations.iter().filter(|e| !e.is_zero()).cloned().collect();
    for &v in &order {
        if current.iter().any(|e| e.is_constant() && !e.is_zero()) {
            return Ok(GenericXlOutcome::Failed {
                reason: "system is inconsistent".into(),
                partial,
            });
        }
        let free: Vec<usize> = (0..n).filter(|&u| partial[u].is_none()).collect();
        match univariate_value(&current, &free, v, d_bound, budget)? {
            Extracted::Value(c) => {
                partial[v] = Some(c);
                current = current
                    .iter()
                    .map(|e| e.substitute(v, c))
                    .filter(|e| !e.is_zero())
                    .collect();
            }
            Extracted::Inconsistent => {
                return Ok(GenericXlOutcome::Failed {
                    reason: "system is inconsistent".into(),
                    partial,
                })
            }
            Extracted::None => {
                return Ok(GenericXlOutcome::Failed {
                    reason: format!("no univariate equation in x{} at D = {d_bound}", v + 1),
                    partial,
                })
            }
        }
    }
    Ok(GenericXlOutcome::Solved(
        partial.into_iter().map(|b| b.expect("all solved")).collect(),
    ))
}

enum Extracted {
    Value(bool),
    Inconsistent,
    None,
}

fn univariate_value(
    eqs: &[BoolPoly],
    free: &[usize],
    v: usize,
    d_bound: usize,
    budget: &MemoryBudget,
) -> Result<Extracted> {
    let small = monomials_up_to(free.len(), d_bound);
    let lift = |m: &Monomial| Monomial::from_vars(m.vars().map(|i| free[i]));
    let all: Vec<Monomial> = small.iter().map(lift).collect();
    let var_v = Monomial::var(v);
    // columns: everything else by descending degrevlex, then v, then 1
    let mut cols: Vec<Monomial> = all
        .iter()
        .rev()
        .filter(|m| !m.is_one() && **m != var_v)
        .copied()
        .collect();
    cols.push(var_v);
    cols.push(Monomial::one());
    let col_of: HashMap<Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for e in eqs {
        let Some(deg) = e.degree().finite() else { continue };
        for mu in all.iter().take_while(|m| m.degree() + deg <= d_bound) {
            let mut r = BitVector::zeros(cols.len());
            for t in e.terms() {
                r.flip(col_of[&t.mul(mu)]);
            }
            if !r.is_zero() {
                rows.push(r);
            }
        }
    }
    budget.check("XL matrix", rows.len(), cols.len())?;
    let ech = BitMatrix::from_rows(cols.len(), &rows)?.into_rref();
    let vcol = cols.len() - 2;
    for (r, &pc) in ech.pivot_cols.iter().enumerate() {
        if pc == vcol {
            return Ok(Extracted::Value(ech.reduced.get(r, vcol + 1)));
        }
        if pc == vcol + 1 {
            return Ok(Extracted::Inconsistent);
        }
    }
    Ok(Extracted::None)
}
