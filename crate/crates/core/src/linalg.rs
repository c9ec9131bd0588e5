//! Dense linear algebra over F2 with row-major bit packing.
//!
//! Column `j` of a row lives in bit `j % 64` of word `j / 64`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows given as single words; requires `cols <= 64`.
    pub fn from_row_words(cols: usize, rows: &[u64]) -> Self {
        assert!(cols <= 64, "from_row_words needs cols <= 64");
        let mask = low_mask(cols);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, &w) in rows.iter().enumerate() {
            if cols > 0 {
                m.bits[i] = w & mask;
            }
        }
        m
    }

    /// Builds a square-or-not matrix from its columns given as single words;
    /// requires `rows <= 64`.
    pub fn from_col_words(rows: usize, cols: &[u64]) -> Self {
        assert!(rows <= 64, "from_col_words needs rows <= 64");
        let mut m = Self::zeros(rows, cols.len());
        for (j, &w) in cols.iter().enumerate() {
            for i in 0..rows {
                if (w >> i) & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
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

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.bits[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / 64];
        let mask = 1u64 << (j % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// Row `i` as a single word; requires `cols <= 64`.
    pub fn row_word(&self, i: usize) -> u64 {
        assert!(self.cols <= 64);
        if self.cols == 0 {
            0
        } else {
            self.bits[i]
        }
    }

    /// Column `j` as a single word; requires `rows <= 64`.
    pub fn col_word(&self, j: usize) -> u64 {
        assert!(self.rows <= 64);
        (0..self.rows).fold(0, |acc, i| acc | (u64::from(self.get(i, j)) << i))
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let stride = self.stride;
        for w in 0..stride {
            let v = self.bits[src * stride + w];
            self.bits[dst * stride + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::AmbientMismatch { left: self.cols, right: other.rows });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..out.stride {
                        out.bits[i * out.stride + w] ^= other.bits[k * other.stride + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector packed like a row.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<bool> {
        assert_eq!(v.len(), self.stride);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            })
            .collect()
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::AmbientMismatch { left: self.cols, right: other.cols });
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        Ok(BitMatrix { bits, ..*self })
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Stacks `others` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::AmbientMismatch { left: self.cols, right: other.cols });
        }
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Ok(BitMatrix { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, bits })
    }

    /// Reduces in place to reduced row-echelon form and returns the pivot
    /// columns, one per nonzero row. Zero rows end up at the bottom.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == self.rows {
                break;
            }
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (next..self.rows).find(|&i| self.bits[i * self.stride + w] & bit != 0)
            else {
                continue;
            };
            self.swap_rows(p, next);
            for i in 0..self.rows {
                if i != next && self.bits[i * self.stride + w] & bit != 0 {
                    self.xor_row_into(next, i);
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn take_rows(&self, count: usize) -> BitMatrix {
        BitMatrix {
            rows: count,
            cols: self.cols,
            stride: self.stride,
            bits: self.bits[..count * self.stride].to_vec(),
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Rank over F2.
pub fn rank(m: &BitMatrix) -> usize {
    m.rref().1.len()
}

/// Rank of a set of at most 64-bit vectors, without allocating a matrix.
pub fn rank_of_words(vectors: &[u64]) -> usize {
    // basis[b] holds a vector whose highest set bit is b
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

/// A subspace of `F2^ambient_dim`, held as a canonical RREF basis so that
/// equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: BitMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: BitMatrix::zeros(0, ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: BitMatrix::identity(ambient_dim) }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &BitMatrix) -> Self {
        let (reduced, pivots) = m.rref();
        Subspace { ambient_dim: m.cols(), basis: reduced.take_rows(pivots.len()) }
    }

    /// Span of vectors of at most 64 coordinates.
    pub fn span_words(ambient_dim: usize, vectors: &[u64]) -> Self {
        Self::row_space(&BitMatrix::from_row_words(ambient_dim, vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_rows(&self) -> &BitMatrix {
        &self.basis
    }

    /// Basis vectors as words; requires `ambient_dim <= 64`.
    pub fn basis_words(&self) -> Vec<u64> {
        (0..self.dim()).map(|i| self.basis.row_word(i)).collect()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), words_for(self.ambient_dim));
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let row = self.basis.row(i);
            let pivot = leading_col(row).expect("basis rows are nonzero");
            if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        v.iter().all(|&w| w == 0)
    }

    /// Membership for a vector given as one word; requires `ambient_dim <= 64`.
    pub fn contains_word(&self, v: u64) -> bool {
        assert!(self.ambient_dim <= 64);
        if self.ambient_dim == 0 {
            return v == 0;
        }
        v & !low_mask(self.ambient_dim) == 0 && self.contains(&[v])
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        kernel_basis(&self.basis)
    }
}

fn leading_col(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

/// Right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &BitMatrix) -> Subspace {
    let cols = m.cols();
    let (reduced, pivots) = m.rref();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = BitMatrix::zeros(free.len(), cols);
    for (k, &f) in free.iter().enumerate() {
        out.set(k, f, true);
        for (row, &p) in pivots.iter().enumerate() {
            if reduced.get(row, f) {
                out.set(k, p, true);
            }
        }
    }
    Subspace::row_space(&out)
}

/// `a ∩ b`, computed as the annihilator of `a^⊥ + b^⊥`.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    let stacked = a.annihilator().basis.vstack(&b.annihilator().basis)?;
    Ok(kernel_basis(&stacked))
}

/// Common kernel of several matrices with equal column counts.
pub fn solve_homogeneous(systems: &[BitMatrix]) -> Result<Subspace> {
    let Some(first) = systems.first() else {
        return Err(Error::InvalidSpec("solve_homogeneous needs at least one system".into()));
    };
    let mut stacked = first.clone();
    for m in &systems[1..] {
        stacked = stacked.vstack(m)?;
    }
    Ok(kernel_basis(&stacked))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::zeros(2, 2)), 0);
        assert_eq!(rank(&m(&[&[1, 1], &[1, 1]])), 1);
        assert_eq!(rank_of_words(&[0b11, 0b11]), 1);
        assert_eq!(rank_of_words(&[0b001, 0b010, 0b011]), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&BitMatrix::identity(4)).dim(), 0);
        assert_eq!(kernel_basis(&BitMatrix::zeros(3, 3)), Subspace::full(3));
        let k = kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k, Subspace::span_words(2, &[0b11]));
    }

    #[test]
    fn intersect_examples() {
        let s = Subspace::span_words(3, &[0b101, 0b010]);
        assert_eq!(intersect(&Subspace::full(3), &s).unwrap(), s);
        assert_eq!(intersect(&s, &Subspace::zero(3)).unwrap(), Subspace::zero(3));
        let l1 = Subspace::span_words(2, &[0b01]);
        let l2 = Subspace::span_words(2, &[0b11]);
        assert_eq!(intersect(&l1, &l2).unwrap(), Subspace::zero(2));
        assert_eq!(
            intersect(&l1, &Subspace::full(3)),
            Err(Error::AmbientMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn solve_homogeneous_examples() {
        let z = BitMatrix::zeros(2, 3);
        assert_eq!(solve_homogeneous(&[z.clone(), z.clone()]).unwrap(), Subspace::full(3));
        assert_eq!(solve_homogeneous(&[z.clone(), BitMatrix::identity(3)]).unwrap().dim(), 0);
        assert_eq!(solve_homogeneous(&[m(&[&[1, 1, 0]])]).unwrap().dim(), 2);
        assert!(matches!(
            solve_homogeneous(&[z, BitMatrix::identity(2)]),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn wide_matrices_span_words() {
        let mut a = BitMatrix::zeros(2, 130);
        a.set(0, 0, true);
        a.set(0, 129, true);
        a.set(1, 129, true);
        assert_eq!(rank(&a), 2);
        assert_eq!(kernel_basis(&a).dim(), 128);
        let k = kernel_basis(&a);
        for i in 0..k.dim() {
            assert!(a.mul_vec(k.basis_rows().row(i)).iter().all(|&b| !b));
        }
    }

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::span_words(4, &[0b1100, 0b0110]);
        let b = Subspace::span_words(4, &[0b1010, 0b0110, 0b1100]);
        assert_eq!(a, b);
        assert!(a.contains_word(0b1010));
        assert!(!a.contains_word(0b0001));
    }

    #[test]
    fn matrix_product_and_columns() {
        let a = BitMatrix::from_col_words(3, &[0b011, 0b110, 0b100]);
        assert_eq!(a.col_word(1), 0b110);
        let id = BitMatrix::identity(3);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
    }
}
