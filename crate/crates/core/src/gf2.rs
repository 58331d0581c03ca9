//! Linear algebra over GF(2).
//!
//! Matrices are stored row-major with 64 entries per machine word. All
//! eliminations pick the lowest available pivot row for the lowest column, so
//! every derived object (echelon bases, punctured row spaces) is reproducible.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_str01(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return Err(Error::Invalid(format!("bit string contains {:?}", c as char))),
            }
        }
        Ok(v)
    }

    /// Vector with ones exactly at `positions`.
    pub fn with_ones(len: usize, positions: &[usize]) -> Result<Self> {
        let mut v = BitVec::zeros(len);
        for &p in positions {
            if p >= len {
                return Err(Error::Coordinate { coord: p, len });
            }
            v.set(p, true);
        }
        Ok(v)
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

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_str01(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_str01())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_str01())
    }
}

/// Dense binary matrix, bit-packed row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BinaryMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = BinaryMatrix::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from equal-length rows. `cols` is required so that a
    /// matrix with no rows still has a width.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = BinaryMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|s| BitVec::from_str01(s)).collect::<Result<Vec<_>>>()?;
        BinaryMatrix::from_rows(cols, &rows)
    }

    /// Builds a `height × columns.len()` matrix from its columns.
    pub fn from_columns(height: usize, columns: &[BitVec]) -> Result<Self> {
        let mut m = BinaryMatrix::zeros(height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != height {
                return Err(Error::Dimension(format!(
                    "column {j} has height {}, expected {height}",
                    col.len()
                )));
            }
            for i in col.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        self.bits[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let w = &mut self.bits[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVec> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row_sum(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_sum(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`
    fn add_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let (s, d) = (src * self.stride, dst * self.stride);
        for w in 0..self.stride {
            let v = self.bits[s + w];
            self.bits[d + w] ^= v;
        }
    }

    /// Matrix keeping only the listed columns, in the listed order.
    pub fn select_columns(&self, keep: &[usize]) -> Result<Self> {
        let mut m = BinaryMatrix::zeros(self.rows, keep.len());
        for (j, &c) in keep.iter().enumerate() {
            if c >= self.cols {
                return Err(Error::Coordinate {
                    coord: c,
                    len: self.cols,
                });
            }
            for r in 0..self.rows {
                if self.get(r, c) {
                    m.set(r, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Matrix with the listed columns removed.
    pub fn delete_columns(&self, erased: &[usize]) -> Result<Self> {
        let mut drop = vec![false; self.cols];
        for &c in erased {
            if c >= self.cols {
                return Err(Error::Coordinate {
                    coord: c,
                    len: self.cols,
                });
            }
            drop[c] = true;
        }
        let keep: Vec<usize> = (0..self.cols).filter(|&c| !drop[c]).collect();
        self.select_columns(&keep)
    }

    pub fn transpose(&self) -> Self {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Vector-matrix product `v × self`.
    pub fn left_mul(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.cols);
        for r in v.ones() {
            for (o, w) in out.words.iter_mut().zip(self.row_words(r)) {
                *o ^= w;
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form (in place); returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.add_row(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Reduced row echelon form with zero rows dropped.
    pub fn rref(&self) -> BinaryMatrix {
        let mut m = self.clone();
        let rank = m.reduce().len();
        m.bits.truncate(rank * m.stride);
        m.rows = rank;
        m
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// GF(2) rank of `m`.
pub fn rank(m: &BinaryMatrix) -> usize {
    m.rank()
}

/// Writes `target` as a combination of `basis` if possible. The returned
/// vector holds one coefficient per basis vector.
pub fn solve_combination(target: &BitVec, basis: &[BitVec]) -> Result<Option<Vec<bool>>> {
    let height = target.len();
    if let Some((j, b)) = basis.iter().enumerate().find(|(_, b)| b.len() != height) {
        return Err(Error::Dimension(format!(
            "basis vector {j} has height {}, target has height {height}",
            b.len()
        )));
    }
    // Echelon rows: (pivot, vector, combination of basis indices).
    let mut echelon: Vec<(usize, BitVec, BitVec)> = Vec::with_capacity(basis.len());
    for (j, b) in basis.iter().enumerate() {
        let mut v = b.clone();
        let mut combo = BitVec::zeros(basis.len());
        combo.set(j, true);
        for (p, w, c) in &echelon {
            if v.get(*p) {
                v.xor_assign(w);
                combo.xor_assign(c);
            }
        }
        if let Some(p) = v.first_one() {
            echelon.push((p, v, combo));
        }
    }
    let mut t = target.clone();
    let mut combo = BitVec::zeros(basis.len());
    for (p, w, c) in &echelon {
        if t.get(*p) {
            t.xor_assign(w);
            combo.xor_assign(c);
        }
    }
    Ok(t.is_zero().then(|| combo.iter().collect()))
}

/// True iff `target` lies in the GF(2) span of `basis`.
pub fn in_span(target: &BitVec, basis: &[BitVec]) -> Result<bool> {
    Ok(solve_combination(target, basis)?.is_some())
}

/// A row space held as its reduced echelon basis, so equality of spaces is
/// equality of bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RowSpace {
    basis: BinaryMatrix,
}

impl RowSpace {
    pub fn of(m: &BinaryMatrix) -> Self {
        RowSpace { basis: m.rref() }
    }

    pub fn dimension(&self) -> usize {
        self.basis.rows()
    }

    /// Length of the vectors in the space.
    pub fn length(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &BinaryMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.length() {
            return Err(Error::Dimension(format!(
                "vector of length {} against space of length {}",
                v.len(),
                self.length()
            )));
        }
        in_span(v, &self.basis.row_vecs())
    }

    /// All vectors of the space; `dimension` must be small.
    pub fn elements(&self) -> Vec<BitVec> {
        let dim = self.dimension();
        assert!(dim < 32, "refusing to enumerate 2^{dim} vectors");
        (0u64..1 << dim)
            .map(|m| {
                let mut v = BitVec::zeros(self.length());
                for r in 0..dim {
                    if m >> r & 1 == 1 {
                        v.xor_assign(&self.basis.row(r));
                    }
                }
                v
            })
            .collect()
    }
}

/// True iff the two matrices have the same row space.
pub fn row_space_equal(x: &BinaryMatrix, y: &BinaryMatrix) -> Result<bool> {
    if x.cols() != y.cols() {
        return Err(Error::Dimension(format!(
            "column counts differ: {} vs {}",
            x.cols(),
            y.cols()
        )));
    }
    Ok(RowSpace::of(x) == RowSpace::of(y))
}

/// Optional locality/erasure annotation carried by a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub r: usize,
    pub t: usize,
}

/// A binary `[n, k]` linear code given by a full-rank `k × n` generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: BinaryMatrix,
    params: Option<CodeParams>,
    columns: Vec<BitVec>,
}

impl LinearCode {
    pub fn new(generator: BinaryMatrix, params: Option<CodeParams>) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if k == 0 || k >= n {
            return Err(Error::InvalidCode(format!("need 0 < k < n, got k={k} n={n}")));
        }
        let rank = generator.rank();
        if rank != k {
            return Err(Error::InvalidCode(format!("generator has rank {rank}, expected {k}")));
        }
        if let Some(CodeParams { r, t }) = params {
            if r == 0 || r >= k {
                return Err(Error::InvalidCode(format!(
                    "locality must satisfy 0 < r < k, got r={r} k={k}"
                )));
            }
            if t == 0 || t > n - k {
                return Err(Error::InvalidCode(format!(
                    "erasure tolerance must satisfy 0 < t <= n-k, got t={t} n-k={}",
                    n - k
                )));
            }
        }
        let columns = generator.columns();
        Ok(LinearCode {
            generator,
            params,
            columns,
        })
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &BinaryMatrix {
        &self.generator
    }

    pub fn params(&self) -> Option<CodeParams> {
        self.params
    }

    pub fn with_params(self, params: Option<CodeParams>) -> Result<Self> {
        LinearCode::new(self.generator, params)
    }

    /// Generator column of coordinate `i` (height `k`).
    pub fn column(&self, i: usize) -> &BitVec {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.columns
    }

    pub fn encode(&self, message: &BitVec) -> Result<BitVec> {
        if message.len() != self.k() {
            return Err(Error::Dimension(format!(
                "message has length {}, code dimension is {}",
                message.len(),
                self.k()
            )));
        }
        self.generator.left_mul(message)
    }

    pub fn contains(&self, word: &BitVec) -> Result<bool> {
        RowSpace::of(&self.generator).contains(word)
    }

    /// Row space of the code with the coordinates in `erased` deleted.
    pub fn puncture(&self, erased: &[usize]) -> Result<RowSpace> {
        Ok(RowSpace::of(&self.generator.delete_columns(erased)?))
    }

    /// Same code with coordinates relabelled: new coordinate `perm[i]` holds
    /// old coordinate `i`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Invalid("not a permutation of the coordinates".into()));
        }
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        LinearCode::new(self.generator.select_columns(&inverse)?, self.params)
    }
}

/// Largest dimension accepted by [`min_distance`].
pub const MAX_MIN_DISTANCE_K: usize = 24;

/// Minimum Hamming weight over all nonzero codewords, by enumerating all
/// `2^k` messages in Gray-code order.
pub fn min_distance(code: &LinearCode) -> Result<usize> {
    let k = code.k();
    if k > MAX_MIN_DISTANCE_K {
        return Err(Error::Capacity {
            what: "dimension for exhaustive minimum distance",
            actual: k,
            limit: MAX_MIN_DISTANCE_K,
        });
    }
    let rows = code.generator.row_vecs();
    let mut word = BitVec::zeros(code.n());
    let mut best = usize::MAX;
    for step in 1u64..1 << k {
        word.xor_assign(&rows[step.trailing_zeros() as usize]);
        best = best.min(word.count_ones());
    }
    Ok(best)
}
