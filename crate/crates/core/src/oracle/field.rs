//! Scalars and dense matrices for the rank oracle.
//!
//! Two fields are supported: integers modulo the Mersenne prime 2^31 − 1
//! (exact rank) and `f64` (rank by singular-value threshold).

use std::fmt::Debug;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::StreamRng;

pub const PRIME_MODULUS: u64 = (1 << 31) - 1;

/// Relative singular-value cutoff for real-valued rank.
pub const REAL_RANK_TOLERANCE: f64 = 1e-8;

pub trait Scalar: Copy + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    /// A generic nonzero draw: uniform over the nonzero residues, or a
    /// standard normal.
    fn generic(rng: &mut StreamRng) -> Self;
    fn rank(m: &DenseMatrix<Self>) -> usize;
}

/// Element of GF(2^31 − 1), kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(u64);

impl Fp {
    pub fn new(x: u64) -> Self {
        Fp(x % PRIME_MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn sub(self, other: Fp) -> Fp {
        Fp((self.0 + PRIME_MODULUS - other.0) % PRIME_MODULUS)
    }

    fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inverse(self) -> Option<Fp> {
        (self.0 != 0).then(|| self.pow(PRIME_MODULUS - 2))
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        Fp(0)
    }

    fn add(self, other: Self) -> Self {
        Fp((self.0 + other.0) % PRIME_MODULUS)
    }

    fn mul(self, other: Self) -> Self {
        Fp(self.0 * other.0 % PRIME_MODULUS)
    }

    fn generic(rng: &mut StreamRng) -> Self {
        Fp(rng.random_range(1..PRIME_MODULUS))
    }

    fn rank(m: &DenseMatrix<Self>) -> usize {
        let mut a = m.data.clone();
        let cols = m.cols;
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.rows).find(|&r| a[r * cols + col].0 != 0) else {
                continue;
            };
            for c in 0..cols {
                a.swap(pivot * cols + c, rank * cols + c);
            }
            let inv = a[rank * cols + col].inverse().expect("pivot is nonzero");
            for r in (rank + 1)..m.rows {
                let factor = a[r * cols + col].mul(inv);
                if factor.0 == 0 {
                    continue;
                }
                for c in col..cols {
                    let delta = factor.mul(a[rank * cols + c]);
                    a[r * cols + c] = a[r * cols + c].sub(delta);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn add(self, other: Self) -> Self {
        self + other
    }

    fn mul(self, other: Self) -> Self {
        self * other
    }

    fn generic(rng: &mut StreamRng) -> Self {
        rng.sample(StandardNormal)
    }

    fn rank(m: &DenseMatrix<Self>) -> usize {
        if m.rows == 0 || m.cols == 0 {
            return 0;
        }
        let sv = m.to_nalgebra().singular_values();
        let largest = sv.iter().copied().fold(0.0, f64::max);
        if largest == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > REAL_RANK_TOLERANCE * largest).count()
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn generic(rows: usize, cols: usize, rng: &mut StreamRng) -> Self {
        DenseMatrix { rows, cols, data: (0..rows * cols).map(|_| T::generic(rng)).collect() }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match {rows}x{cols}");
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = DenseMatrix::<T>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).add(a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        T::rank(self)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.rows.min(self.cols)
    }

    /// Adds `block` into the rectangle starting at `(row, col)`.
    pub fn add_block(&mut self, row: usize, col: usize, block: &DenseMatrix<T>) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = self.get(row + r, col + c).add(block.get(r, c));
                self.set(row + r, col + c, v);
            }
        }
    }
}

impl DenseMatrix<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}
