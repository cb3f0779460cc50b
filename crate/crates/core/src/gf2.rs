//! Dense bit-packed linear algebra over GF(2).
//!
//! Columns never move during elimination: in the attack they are monomials
//! and must stay addressable, so pivots are tracked by column index.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Default cap for matrix allocations: 4 GiB.
pub const DEFAULT_MEMORY_CAP: u64 = 4 << 30;

/// Up-front size check for large matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryBudget {
    pub cap_bytes: u64,
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget {
            cap_bytes: DEFAULT_MEMORY_CAP,
        }
    }
}

impl MemoryBudget {
    pub fn new(cap_bytes: u64) -> Self {
        MemoryBudget { cap_bytes }
    }

    pub fn unlimited() -> Self {
        MemoryBudget { cap_bytes: u64::MAX }
    }

    pub fn matrix_bytes(rows: usize, cols: usize) -> u64 {
        rows as u64 * words_for(cols) as u64 * 8
    }

    pub fn check(&self, what: &str, rows: usize, cols: usize) -> Result<()> {
        let required = Self::matrix_bytes(rows, cols);
        if required > self.cap_bytes {
            return Err(Error::Resource {
                msg: format!("{what}: {rows} x {cols} bit matrix"),
                required_bytes: required,
                cap_bytes: self.cap_bytes,
            });
        }
        Ok(())
    }
}

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD)) - 1;
            }
        }
        BitVector { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        xor_into(&mut self.words, &other.words);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        first_one(&self.words)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|i| i * WORD + words[i].trailing_zeros() as usize)
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            }
        })
    })
}

/// Dense row-major matrix over GF(2); bits past `cols` are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    /// Allocates after checking the budget.
    pub fn zeros_within(rows: usize, cols: usize, budget: &MemoryBudget) -> Result<Self> {
        budget.check("matrix allocation", rows, cols)?;
        Ok(Self::zeros(rows, cols))
    }

    /// An empty matrix with `cols` columns, to be filled with [`push_row_words`](Self::push_row_words).
    pub fn with_cols(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::usage(format!("row {i} has {} bits, expected {cols}", r.len())));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if b {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of range");
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    /// Appends a row given as packed words (trailing bits must be clear).
    pub fn push_row_words(&mut self, words: &[u64]) {
        assert_eq!(words.len(), self.stride);
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    pub fn reserve_rows(&mut self, additional: usize) {
        self.data.reserve_exact(additional * self.stride);
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..lo * s + s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]` over words `from..`.
    fn xor_row_from(&mut self, dst: usize, src: usize, from: usize) {
        let s = self.stride;
        if dst == src {
            self.row_words_mut(dst).fill(0);
            return;
        }
        let (d, sr) = if dst < src {
            let (head, tail) = self.data.split_at_mut(src * s);
            (&mut head[dst * s..dst * s + s], &tail[..s])
        } else {
            let (head, tail) = self.data.split_at_mut(dst * s);
            (&mut tail[..s], &head[src * s..src * s + s])
        };
        xor_into(&mut d[from..], &sr[from..]);
    }

    /// Memory footprint of the packed data.
    pub fn byte_size(&self) -> u64 {
        self.data.len() as u64 * 8
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in ones(self.row_words(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = vec![0u64; other.stride];
            for k in ones(self.row_words(r)) {
                xor_into(&mut acc, other.row_words(k));
            }
            out.row_words_mut(r).copy_from_slice(&acc);
        }
        Ok(out)
    }

    /// `M * v` for a column vector.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::usage(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let bit = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 1;
            if bit {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: the XOR of the rows selected by `v`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows {
            return Err(Error::usage(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut acc = vec![0u64; self.stride];
        for r in v.ones() {
            xor_into(&mut acc, self.row_words(r));
        }
        Ok(BitVector {
            len: self.cols,
            words: acc,
        })
    }

    pub fn pow(&self, mut e: u128) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::usage("power of a non-square matrix"));
        }
        let mut base = self.clone();
        let mut acc = BitMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Reduced row echelon form of a copy of `self`.
    pub fn rref(&self) -> EchelonResult {
        self.clone().into_rref()
    }

    /// Reduced row echelon form, reusing this matrix's storage.
    ///
    /// Pivots are chosen deterministically: lowest column first, first
    /// available row. Elimination is done in blocks of up to eight pivots
    /// whose combinations are tabulated once and applied with a single
    /// XOR per row (the "four Russians" trick).
    pub fn into_rref(mut self) -> EchelonResult {
        const K: usize = 8;
        let rows = self.rows;
        let cols = self.cols;
        let s = self.stride;
        let mut pivot_cols = Vec::new();
        let mut table = vec![0u64; (1 << K) * s];
        let mut r = 0;
        let mut c = 0;
        while r < rows && c < cols {
            let mut block: Vec<usize> = Vec::with_capacity(K);
            while block.len() < K && c < cols && r + block.len() < rows {
                let start = r + block.len();
                // reduced bit of row i at column c, accounting for the block
                // pivots without touching the row
                let found = (start..rows).find(|&i| {
                    let mut bit = self.get(i, c);
                    for (l, &pc) in block.iter().enumerate() {
                        if self.get(i, pc) {
                            bit ^= self.get(r + l, c);
                        }
                    }
                    bit
                });
                if let Some(i) = found {
                    self.swap_rows(i, start);
                    let from = block.first().copied().unwrap_or(c) / WORD;
                    for l in 0..block.len() {
                        if self.get(start, block[l]) {
                            self.xor_row_from(start, r + l, from);
                        }
                    }
                    for l in 0..block.len() {
                        if self.get(r + l, c) {
                            self.xor_row_from(r + l, start, from);
                        }
                    }
                    block.push(c);
                }
                c += 1;
            }
            if block.is_empty() {
                break;
            }
            let k = block.len();
            let from = block[0] / WORD;
            let width = s - from;
            for idx in 1..1usize << k {
                let low = idx.trailing_zeros() as usize;
                let prev = idx & (idx - 1);
                let (head, tail) = table.split_at_mut(idx * s);
                let dst = &mut tail[from..s];
                dst.copy_from_slice(&head[prev * s + from..prev * s + s]);
                xor_into(dst, &self.data[(r + low) * s + from..(r + low) * s + s]);
            }
            for i in 0..rows {
                if i >= r && i < r + k {
                    continue;
                }
                let mut idx = 0usize;
                for (l, &pc) in block.iter().enumerate() {
                    idx |= (self.get(i, pc) as usize) << l;
                }
                if idx != 0 {
                    let row = &mut self.data[i * s + from..i * s + from + width];
                    xor_into(row, &table[idx * s + from..idx * s + s]);
                }
            }
            pivot_cols.extend_from_slice(&block);
            r += k;
        }
        EchelonResult {
            rank: pivot_cols.len(),
            pivot_cols,
            reduced: self,
        }
    }

    /// Solution set of the system whose rows are this matrix.
    ///
    /// With `rhs_included`, the last column is the right-hand side and the
    /// unknowns are the other columns; otherwise the system is homogeneous
    /// in all columns.
    pub fn solve_affine(&self, rhs_included: bool) -> AffineSolutionSet {
        self.rref().solution_set(rhs_included)
    }

    /// Binary dump: magic, rows and cols as little-endian u64, then packed rows.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&(self.rows as u64).to_le_bytes())?;
        w.write_all(&(self.cols as u64).to_le_bytes())?;
        for word in &self.data {
            w.write_all(&word.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R, budget: &MemoryBudget) -> Result<BitMatrix> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "not a bit-matrix dump (bad magic)".into(),
            });
        }
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        let rows = u64::from_le_bytes(buf) as usize;
        r.read_exact(&mut buf)?;
        let cols = u64::from_le_bytes(buf) as usize;
        let mut m = BitMatrix::zeros_within(rows, cols, budget)?;
        for word in m.data.iter_mut() {
            r.read_exact(&mut buf)?;
            *word = u64::from_le_bytes(buf);
        }
        let tail = cols % WORD;
        if tail != 0 && (0..rows).any(|i| m.row_words(i)[m.stride - 1] >> tail != 0) {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "dump has bits set beyond the column count".into(),
            });
        }
        Ok(m)
    }
}

/// Versioned magic for matrix dumps.
pub const DUMP_MAGIC: &[u8; 8] = b"GF2MAT\x00\x01";

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of row reduction. The first `rank` rows of `reduced` are the pivot
/// rows in pivot order; the remaining rows are zero.
#[derive(Clone, Debug)]
pub struct EchelonResult {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub reduced: BitMatrix,
}

impl EchelonResult {
    pub fn solution_set(&self, rhs_included: bool) -> AffineSolutionSet {
        let cols = self.reduced.cols();
        let nvars = if rhs_included { cols.saturating_sub(1) } else { cols };
        let consistent = !(rhs_included && self.pivot_cols.last() == Some(&nvars));
        let mut particular = BitVector::zeros(nvars);
        let mut is_pivot = vec![false; nvars];
        for (row, &pc) in self.pivot_cols.iter().enumerate() {
            if pc < nvars {
                is_pivot[pc] = true;
                if rhs_included && self.reduced.get(row, nvars) {
                    particular.set(pc, true);
                }
            }
        }
        let mut basis = Vec::new();
        if consistent {
            for f in (0..nvars).filter(|&f| !is_pivot[f]) {
                let mut v = BitVector::unit(nvars, f);
                for (row, &pc) in self.pivot_cols.iter().enumerate() {
                    if pc < f && self.reduced.get(row, f) {
                        v.set(pc, true);
                    }
                }
                basis.push(v);
            }
        }
        AffineSolutionSet {
            particular,
            basis,
            consistent,
        }
    }
}

impl EchelonResult {
    /// `solution_set(true).project(coords)` without building full-width
    /// kernel vectors.
    pub fn project_solutions(&self, coords: &[usize]) -> AffineSolutionSet {
        let cols = self.reduced.cols();
        let nvars = cols.saturating_sub(1);
        let consistent = self.pivot_cols.last() != Some(&nvars);
        let mut pivot_row = vec![None; nvars];
        for (row, &pc) in self.pivot_cols.iter().enumerate() {
            if pc < nvars {
                pivot_row[pc] = Some(row);
            }
        }
        let mut particular = BitVector::zeros(coords.len());
        let mut basis = Vec::new();
        if consistent {
            for (k, &c) in coords.iter().enumerate() {
                if let Some(r) = pivot_row[c] {
                    particular.set(k, self.reduced.get(r, nvars));
                }
            }
            for f in (0..nvars).filter(|&f| pivot_row[f].is_none()) {
                let mut v = BitVector::zeros(coords.len());
                for (k, &c) in coords.iter().enumerate() {
                    let bit = match pivot_row[c] {
                        None => c == f,
                        Some(r) => self.reduced.get(r, f),
                    };
                    v.set(k, bit);
                }
                if !v.is_zero() {
                    basis.push(v);
                }
            }
        }
        let keep = max_independent_rows(&basis);
        AffineSolutionSet {
            particular,
            basis: keep.into_iter().map(|i| basis[i].clone()).collect(),
            consistent,
        }
    }
}

/// `particular + span(basis)`, or nothing when `consistent` is false.
#[derive(Clone, Debug)]
pub struct AffineSolutionSet {
    pub particular: BitVector,
    pub basis: Vec<BitVector>,
    pub consistent: bool,
}

impl AffineSolutionSet {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The member selected by the low bits of `choice` over the basis.
    pub fn member(&self, choice: u64) -> BitVector {
        let mut v = self.particular.clone();
        for (k, b) in self.basis.iter().enumerate() {
            if k < 64 && choice >> k & 1 == 1 {
                v.xor_assign(b);
            }
        }
        v
    }

    /// Image under a coordinate projection, with a reduced spanning basis.
    pub fn project(&self, coords: &[usize]) -> AffineSolutionSet {
        let pick = |v: &BitVector| {
            let mut out = BitVector::zeros(coords.len());
            for (k, &c) in coords.iter().enumerate() {
                if v.get(c) {
                    out.set(k, true);
                }
            }
            out
        };
        let projected: Vec<BitVector> = self.basis.iter().map(pick).collect();
        let keep = max_independent_rows(&projected);
        AffineSolutionSet {
            particular: pick(&self.particular),
            basis: keep.into_iter().map(|i| projected[i].clone()).collect(),
            consistent: self.consistent,
        }
    }
}

/// A growing echelon basis: vectors are reduced on insertion against the
/// vectors already kept, each keyed by its lowest set bit.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    len: usize,
    rows: Vec<Vec<u64>>,
    pivot_of: HashMap<usize, usize>,
}

impl IncrementalBasis {
    pub fn new(len: usize) -> Self {
        IncrementalBasis {
            len,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a vector; returns true if it was independent of the basis.
    pub fn insert_words(&mut self, words: &[u64]) -> bool {
        assert_eq!(words.len(), words_for(self.len));
        let mut v = words.to_vec();
        while let Some(p) = first_one(&v) {
            match self.pivot_of.get(&p) {
                Some(&k) => xor_into(&mut v, &self.rows[k]),
                None => {
                    self.pivot_of.insert(p, self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
        false
    }

    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len);
        self.insert_words(v.words())
    }

    /// Basis rows as a matrix.
    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::with_cols(self.len);
        for r in &self.rows {
            m.push_row_words(r);
        }
        m
    }
}

/// Greedy maximal independent subset in input order; returns kept indices.
pub fn max_independent_rows(vectors: &[BitVector]) -> Vec<usize> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let mut basis = IncrementalBasis::new(first.len());
    vectors
        .iter()
        .enumerate()
        .filter(|(_, v)| basis.insert(v))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        BitMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.5))
    }

    fn is_rref(e: &EchelonResult) -> bool {
        let m = &e.reduced;
        if e.pivot_cols.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for (row, &pc) in e.pivot_cols.iter().enumerate() {
            if (0..pc).any(|c| m.get(row, c)) {
                return false;
            }
            if (0..m.rows()).any(|r| m.get(r, pc) != (r == row)) {
                return false;
            }
        }
        (e.rank..m.rows()).all(|r| m.row_is_zero(r))
    }

    #[test]
    fn small_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        let m = BitMatrix::from_fn(3, 4, |r, c| (r < 2 && c % 2 == 0) || (r == 2 && c == 1));
        assert_eq!(m.rank(), 2);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(4, 0).rank(), 0);
    }

    #[test]
    fn affine_examples() {
        // x1 = 1
        let m = BitMatrix::from_fn(1, 2, |_, _| true);
        let s = m.solve_affine(true);
        assert!(s.consistent);
        assert_eq!(s.particular.to_bools(), vec![true]);
        assert!(s.basis.is_empty());

        let s = BitMatrix::zeros(0, 2).solve_affine(false);
        assert_eq!(s.dimension(), 2);

        // x1 = 0 and x1 = 1
        let m = BitMatrix::from_fn(2, 2, |r, c| c == 0 || r == 1);
        assert!(!m.solve_affine(true).consistent);
    }

    #[test]
    fn independent_rows_examples() {
        let v = BitVector::from_bools(&[true, false, true]);
        assert_eq!(max_independent_rows(&[v.clone(), v.clone()]), vec![0]);
        assert!(max_independent_rows(&[BitVector::zeros(4)]).is_empty());
        let w = BitVector::from_bools(&[false, true, true]);
        let mut u = v.clone();
        u.xor_assign(&w);
        assert_eq!(max_independent_rows(&[v, w, u]), vec![0, 1]);
    }

    #[test]
    fn large_blocked_elimination_matches_incremental() {
        for (rows, cols, seed) in [(300, 200, 1), (200, 300, 2), (129, 129, 3), (70, 500, 4)] {
            let mut m = random_matrix(rows, cols, seed);
            // plant dependencies
            for r in (0..rows).step_by(7).skip(1) {
                m.xor_row_from(r, r - 1, 0);
                m.xor_row_from(r, r / 2, 0);
            }
            let e = m.rref();
            assert!(is_rref(&e));
            let mut basis = IncrementalBasis::new(cols);
            for r in 0..rows {
                basis.insert(&m.row(r));
            }
            assert_eq!(e.rank, basis.rank());
        }
    }

    #[test]
    fn dump_round_trip() {
        let m = random_matrix(17, 70, 9);
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..8], DUMP_MAGIC);
        assert_eq!(buf.len(), 8 + 16 + 17 * 2 * 8);
        let back = BitMatrix::read_from(&buf[..], &MemoryBudget::default()).unwrap();
        assert_eq!(back, m);
        assert!(BitMatrix::read_from(&buf[..], &MemoryBudget::new(100)).is_err());
        buf[0] = b'X';
        assert!(BitMatrix::read_from(&buf[..], &MemoryBudget::default()).is_err());
    }

    #[test]
    fn memory_budget() {
        let b = MemoryBudget::new(1 << 20);
        assert!(b.check("x", 1000, 1000).is_ok());
        match BitMatrix::zeros_within(100_000, 100_000, &b) {
            Err(Error::Resource { required_bytes, .. }) => {
                assert_eq!(required_bytes, 100_000 * 1563 * 8)
            }
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(rows in 0usize..64, cols in 0usize..64, seed: u64) {
            let m = random_matrix(rows, cols, seed);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rref_is_idempotent(rows in 0usize..40, cols in 0usize..80, seed: u64) {
            let e = random_matrix(rows, cols, seed).rref();
            prop_assert!(is_rref(&e));
            let again = e.reduced.rref();
            prop_assert_eq!(&again.reduced, &e.reduced);
            prop_assert_eq!(again.pivot_cols, e.pivot_cols);
        }

        #[test]
        fn affine_members_satisfy_system(rows in 0usize..40, cols in 1usize..33, seed: u64, pick: u64) {
            let m = random_matrix(rows, cols, seed);
            let s = m.solve_affine(true);
            let nvars = cols - 1;
            if s.consistent {
                let x = s.member(pick);
                for r in 0..rows {
                    let row = m.row(r);
                    let lhs = (0..nvars).filter(|&c| row.get(c) && x.get(c)).count() % 2 == 1;
                    prop_assert_eq!(lhs, row.get(nvars));
                }
                prop_assert_eq!(max_independent_rows(&s.basis).len(), s.basis.len());
            } else {
                // inconsistent means 1 lies in the row space of the augmented system
                let mut aug = m.clone();
                aug.push_row_words(BitVector::unit(cols, nvars).words());
                prop_assert_eq!(aug.rank(), m.rank());
            }
        }

        #[test]
        fn direct_projection_matches(rows in 0usize..30, cols in 1usize..40, seed: u64) {
            let m = random_matrix(rows, cols, seed);
            let e = m.rref();
            let coords: Vec<usize> = (0..cols - 1).filter(|c| c % 3 != 1).collect();
            let a = e.project_solutions(&coords);
            let b = e.solution_set(true).project(&coords);
            prop_assert_eq!(a.consistent, b.consistent);
            if a.consistent {
                prop_assert_eq!(a.dimension(), b.dimension());
                // same affine set: particulars differ by a span element
                let mut all = b.basis.clone();
                all.extend(a.basis.iter().cloned());
                prop_assert_eq!(max_independent_rows(&all).len(), b.dimension());
                let mut diff = a.particular.clone();
                diff.xor_assign(&b.particular);
                all.push(diff);
                prop_assert_eq!(max_independent_rows(&all).len(), b.dimension());
            }
        }

        #[test]
        fn independent_subset_size_is_rank(rows in 0usize..40, cols in 1usize..70, seed: u64) {
            let m = random_matrix(rows, cols, seed);
            let vs: Vec<BitVector> = (0..rows).map(|r| m.row(r)).collect();
            let keep = max_independent_rows(&vs);
            prop_assert_eq!(keep.len(), m.rank());
            prop_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
