//! Dense bit-packed linear algebra over the two-element field.
//!
//! Matrices are stored row-major with 64 columns per word. A matrix acts on
//! column vectors, so the matrix of a map `V -> W` has `dim W` rows and
//! `dim V` columns.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// A dense matrix over F₂ with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from strings of `0`/`1`, one per row; character `j`
    /// is column `j`. All rows must have the same length.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged bit-matrix literal");
            for (j, c) in r.bytes().enumerate() {
                match c {
                    b'1' => m.set(i, j, true),
                    b'0' => {}
                    _ => panic!("bit-matrix literal must contain only 0 and 1"),
                }
            }
        }
        m
    }

    /// Builds a matrix from raw packed words. Padding bits are cleared.
    pub fn from_words(rows: usize, cols: usize, words: Vec<u64>) -> Result<Self> {
        let stride = words_for(cols);
        if words.len() != rows * stride {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} words, got {}",
                rows * stride,
                words.len()
            )));
        }
        let mut m = BitMatrix {
            rows,
            cols,
            stride,
            bits: words,
        };
        m.clear_padding();
        Ok(m)
    }

    fn clear_padding(&mut self) {
        let rem = self.cols % WORD;
        if rem == 0 || self.stride == 0 {
            return;
        }
        let mask = (1u64 << rem) - 1;
        for r in 0..self.rows {
            self.bits[r * self.stride + self.stride - 1] &= mask;
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Packed storage, `rows * ceil(cols / 64)` words.
    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[cfg(test)]
    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.bits[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / WORD];
        if v {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.rows && j < self.cols);
        self.bits[i * self.stride + j / WORD] ^= 1 << (j % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Appends a row given as a packed slice of the right width.
    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.stride);
        self.bits.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in ones(self.row(i)) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            // Sparse rows dominate in practice: iterate set bits only.
            let (head, tail) = out.bits.split_at_mut(i * out.stride);
            let _ = head;
            let dst = &mut tail[..out.stride];
            for k in ones(self.row(i)) {
                xor_into(dst, other.row(k));
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a packed column vector of length `cols`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.stride);
        let mut out = vec![0u64; words_for(self.rows)];
        for i in 0..self.rows {
            let parity = self
                .row(i)
                .iter()
                .zip(v)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out[i / WORD] |= 1 << (i % WORD);
            }
        }
        out
    }

    /// Selects the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    out.set(i, jj, true);
                }
            }
        }
        out
    }

    /// Reorders rows and columns: entry `(i, j)` of the result is entry
    /// `(row_perm[i], col_perm[j])` of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> BitMatrix {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        let mut inv_col = vec![0usize; self.cols];
        for (j, &c) in col_perm.iter().enumerate() {
            inv_col[c] = j;
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, &r) in row_perm.iter().enumerate() {
            for c in ones(self.row(r)) {
                out.set(i, inv_col[c], true);
            }
        }
        out
    }

    /// Row-reduces a copy to reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce(true);
        m.bits.truncate(pivots.len() * m.stride);
        m.rows = pivots.len();
        Echelon { reduced: m, pivots }
    }

    /// In-place Gaussian elimination. Pivots are chosen at the lowest
    /// column, taking the lowest-index remaining row that has a one there.
    /// With `full`, rows above each pivot are cleared as well (RREF).
    /// Returns the pivot columns; the first `pivots.len()` rows hold the
    /// echelon form.
    fn reduce(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0usize;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let wi = c / WORD;
            let bit = 1u64 << (c % WORD);
            let Some(p) = (next..self.rows).find(|&r| self.bits[r * self.stride + wi] & bit != 0)
            else {
                continue;
            };
            if p != next {
                for k in wi..self.stride {
                    self.bits.swap(p * self.stride + k, next * self.stride + k);
                }
            }
            let (lo, hi) = self.bits.split_at_mut((next + 1) * self.stride);
            let prow = &lo[next * self.stride + wi..(next + 1) * self.stride];
            for r in 0..(self.rows - next - 1) {
                let row = &mut hi[r * self.stride..(r + 1) * self.stride];
                if row[wi] & bit != 0 {
                    xor_into(&mut row[wi..], prow);
                }
            }
            if full {
                let (above, rest) = self.bits.split_at_mut(next * self.stride);
                let prow = &rest[wi..self.stride];
                for r in 0..next {
                    let row = &mut above[r * self.stride..(r + 1) * self.stride];
                    if row[wi] & bit != 0 {
                        xor_into(&mut row[wi..], prow);
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(64) {
            let s: String = (0..self.cols.min(128))
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces a packed vector against the echelon rows; returns the residue.
    pub fn reduce_vector(&self, v: &mut [u64]) {
        for (i, &c) in self.pivots.iter().enumerate() {
            if (v[c / WORD] >> (c % WORD)) & 1 == 1 {
                xor_into(v, self.reduced.row(i));
            }
        }
    }
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Iterates the indices of set bits in a packed row.
pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            }
        })
    })
}

/// An incrementally built span, reduced on lowest set bits.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    stride: usize,
    rows: Vec<Vec<u64>>,
    lead: std::collections::HashMap<usize, usize>,
}

impl SpanBuilder {
    pub fn new(cols: usize) -> Self {
        SpanBuilder {
            stride: words_for(cols),
            rows: Vec::new(),
            lead: std::collections::HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut r = self.reduce(v);
        match first_one(&r) {
            Some(p) => {
                r.shrink_to_fit();
                self.lead.insert(p, self.rows.len());
                self.rows.push(r);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        first_one(&self.reduce(v)).is_none()
    }

    /// Clears every bit of `v` that leads a stored row, lowest first.
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.stride);
        let mut r = v.to_vec();
        let mut from = 0;
        while let Some(b) = first_one_from(&r, from) {
            if let Some(&i) = self.lead.get(&b) {
                xor_into(&mut r, &self.rows[i]);
            }
            from = b + 1;
        }
        r
    }
}

fn first_one(v: &[u64]) -> Option<usize> {
    first_one_from(v, 0)
}

fn first_one_from(v: &[u64], from: usize) -> Option<usize> {
    let mut wi = from / WORD;
    if wi >= v.len() {
        return None;
    }
    let mut w = v[wi] & (!0u64 << (from % WORD));
    loop {
        if w != 0 {
            return Some(wi * WORD + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= v.len() {
            return None;
        }
        w = v[wi];
    }
}

/// Row rank over F₂.
pub fn rank(m: &BitMatrix) -> usize {
    let mut c = m.clone();
    c.reduce(false).len()
}

/// A basis of the null space `{v : m v = 0}`, one vector per row.
pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    let ech = m.echelon();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut out = BitMatrix::zeros(0, m.cols());
    let mut v = vec![0u64; words_for(m.cols())];
    for free in (0..m.cols()).filter(|&j| !is_pivot[j]) {
        v.iter_mut().for_each(|w| *w = 0);
        v[free / WORD] |= 1 << (free % WORD);
        for (i, &p) in ech.pivots.iter().enumerate() {
            if ech.reduced.get(i, free) {
                v[p / WORD] |= 1 << (p % WORD);
            }
        }
        out.push_row(&v);
    }
    out
}

fn check_composable(d_out: &BitMatrix, d_in: &BitMatrix) -> Result<()> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex(
            "composite of consecutive differentials is nonzero".into(),
        ));
    }
    Ok(())
}

/// Dimension of `ker(d_out) / im(d_in)` at the middle term.
pub fn homology_dim(d_out: &BitMatrix, d_in: &BitMatrix) -> Result<usize> {
    check_composable(d_out, d_in)?;
    Ok(d_out.cols() - rank(d_out) - rank(d_in))
}

/// Rank of the map on homology induced by `chain_map` between the middle
/// terms of two three-term complexes `A` and `B`.
pub fn induced_map_rank(
    da_out: &BitMatrix,
    da_in: &BitMatrix,
    db_out: &BitMatrix,
    db_in: &BitMatrix,
    chain_map: &BitMatrix,
) -> Result<usize> {
    check_composable(da_out, da_in)?;
    check_composable(db_out, db_in)?;
    if chain_map.cols() != da_out.cols() || chain_map.rows() != db_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "chain map is {}x{}, expected {}x{}",
            chain_map.rows(),
            chain_map.cols(),
            db_out.cols(),
            da_out.cols()
        )));
    }
    let cycles = kernel_basis(da_out);
    // Images of the cycles, as rows.
    let images = chain_map.mul(&cycles.transpose())?.transpose();
    if !db_out.mul(&images.transpose())?.is_zero() {
        return Err(Error::NotAChainMap(
            "chain map does not carry cycles to cycles".into(),
        ));
    }
    let boundaries = db_in.transpose();
    let mut stacked = boundaries.clone();
    for i in 0..images.rows() {
        stacked.push_row(images.row(i));
    }
    Ok(rank(&stacked) - rank(&boundaries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, seed: &[bool]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        let mut k = 0;
        for i in 0..rows {
            for j in 0..cols {
                if !seed.is_empty() && seed[k % seed.len()] {
                    m.set(i, j, true);
                }
                k += 1;
            }
        }
        m
    }

    /// Brute-force null space size by enumerating every vector.
    fn brute_kernel_count(m: &BitMatrix) -> usize {
        assert!(m.cols() <= 16);
        if m.cols() == 0 {
            return 1;
        }
        (0u64..(1 << m.cols()))
            .filter(|&v| m.apply(&[v]).iter().all(|&w| w == 0))
            .count()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&BitMatrix::from_strs(&["110", "011", "101"])), 2);
        assert_eq!(rank(&BitMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&BitMatrix::identity(3)).rows(), 0);
        let k = kernel_basis(&BitMatrix::zeros(2, 3));
        assert_eq!(k.rows(), 3);
        assert_eq!(rank(&k), 3);
        let k = kernel_basis(&BitMatrix::from_strs(&["110", "011"]));
        assert_eq!(k, BitMatrix::from_strs(&["111"]));
        // Enumeration of all 8 vectors agrees.
        assert_eq!(
            brute_kernel_count(&BitMatrix::from_strs(&["110", "011"])),
            2
        );
    }

    #[test]
    fn homology_examples() {
        let z5 = BitMatrix::zeros(5, 5);
        assert_eq!(homology_dim(&z5, &z5).unwrap(), 5);
        let id = BitMatrix::identity(4);
        assert_eq!(homology_dim(&id, &BitMatrix::zeros(4, 2)).unwrap(), 0);
        // d_in hits e0; d_out kills e0 and e1 and sends e2 somewhere.
        let d_in = BitMatrix::from_strs(&["1", "0", "0"]);
        let d_out = BitMatrix::from_strs(&["001", "000", "000"]);
        assert_eq!(homology_dim(&d_out, &d_in).unwrap(), 1);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let d_in = BitMatrix::from_strs(&["1", "0"]);
        let d_out = BitMatrix::from_strs(&["10"]);
        assert!(matches!(
            homology_dim(&d_out, &d_in),
            Err(Error::NotAComplex(_))
        ));
        assert!(matches!(
            homology_dim(&BitMatrix::zeros(1, 3), &BitMatrix::zeros(2, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn induced_rank_examples() {
        // Complex 0 -> F2^2 -> F2 with d_out = [1 1]; homology has dim 1.
        let d_out = BitMatrix::from_strs(&["11"]);
        let d_in = BitMatrix::zeros(2, 0);
        let h = homology_dim(&d_out, &d_in).unwrap();
        let r =
            induced_map_rank(&d_out, &d_in, &d_out, &d_in, &BitMatrix::identity(2)).unwrap();
        assert_eq!(r, h);
        let r = induced_map_rank(&d_out, &d_in, &d_out, &d_in, &BitMatrix::zeros(2, 2)).unwrap();
        assert_eq!(r, 0);

        // A: 0 -> F2 -> 0, the cycle e0. B: F2 -> F2 -> 0 with d_in = id, so
        // the image of e0 is a boundary.
        let a_out = BitMatrix::zeros(0, 1);
        let a_in = BitMatrix::zeros(1, 0);
        let b_out = BitMatrix::zeros(0, 1);
        let b_in = BitMatrix::identity(1);
        let incl = BitMatrix::identity(1);
        assert_eq!(
            induced_map_rank(&a_out, &a_in, &b_out, &b_in, &incl).unwrap(),
            0
        );
    }

    #[test]
    fn induced_rank_rejects_non_chain_map() {
        let a_out = BitMatrix::zeros(0, 1);
        let a_in = BitMatrix::zeros(1, 0);
        let b_out = BitMatrix::from_strs(&["1"]);
        let b_in = BitMatrix::zeros(1, 0);
        assert!(matches!(
            induced_map_rank(&a_out, &a_in, &b_out, &b_in, &BitMatrix::identity(1)),
            Err(Error::NotAChainMap(_))
        ));
    }

    #[test]
    fn padding_stays_clear() {
        let m = BitMatrix::from_words(2, 3, vec![u64::MAX, u64::MAX]).unwrap();
        assert_eq!(m.words(), &[0b111, 0b111]);
        assert_eq!(m.words().len(), 2 * words_for(3));
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
        (0..=max, 0..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (k, b) in bits.into_iter().enumerate() {
                    if b {
                        m.set(k / c.max(1), k % c.max(1), true);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix(64)) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn rank_nullity(m in arb_matrix(40)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(m.cols(), rank(&m) + k.rows());
            if k.rows() > 0 {
                prop_assert!(m.mul(&k.transpose()).unwrap().is_zero());
            }
        }

        #[test]
        fn kernel_matches_enumeration(m in arb_matrix(10)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(1usize << k.rows(), brute_kernel_count(&m));
        }

        #[test]
        fn homology_invariant_under_change_of_basis(
            n in 1usize..12,
            seed_a in proptest::collection::vec(any::<bool>(), 1..64),
            seed_p in proptest::collection::vec(any::<bool>(), 1..64),
            seed_q in proptest::collection::vec(any::<bool>(), 1..64),
        ) {
            // Build a complex X --d_in--> V --d_out--> Y with d_out = P·π, d_in
            // spanning part of ker(π), where π projects away the first coords.
            let a = random_matrix(n, n, &seed_a);
            let ka = kernel_basis(&a);
            let d_in = ka.transpose();
            let d_out = a.clone();
            let h = homology_dim(&d_out, &d_in).unwrap();
            // Invertible transforms: products of elementary row operations.
            let p = random_invertible(n, &seed_p);
            let q = random_invertible(d_in.cols().max(1), &seed_q);
            let d_out2 = p.mul(&d_out).unwrap();
            let d_in2 = if d_in.cols() == 0 { d_in.clone() } else { d_in.mul(&q).unwrap() };
            prop_assert_eq!(homology_dim(&d_out2, &d_in2).unwrap(), h);
        }
    }

    fn random_invertible(n: usize, seed: &[bool]) -> BitMatrix {
        let mut m = BitMatrix::identity(n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if i != j && seed[k % seed.len()] {
                    // row_i += row_j keeps the matrix invertible
                    let rj = m.row(j).to_vec();
                    xor_into(m.row_mut(i), &rj);
                }
                k += 1;
            }
        }
        assert_eq!(rank(&m), n);
        m
    }
}
