//! Square matrices over GF(2) with one machine word per row.
//!
//! Row `i` is a `u64` whose bit `j` holds entry `(i, j)`. Bits at or beyond
//! column `n` are always zero. The dimension is capped at [`MAX_DIM`]; every
//! consumer in this crate enumerates `2^n` states or searches over `n!`
//! orderings, so larger matrices are never needed.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported dimension (one `u64` per row).
pub const MAX_DIM: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_DIM,
        })
    } else {
        Ok(())
    }
}

/// Forward Gaussian elimination in place; returns the rank.
///
/// Each row that is still nonzero when reached becomes a pivot row, pivoting
/// on its first (lowest) set bit, and that bit is cleared from all later rows.
pub fn eliminate(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot_row = rows[i];
        if pivot_row == 0 {
            continue;
        }
        let bit = 1u64 << pivot_row.trailing_zeros();
        for row in rows[i + 1..].iter_mut() {
            if *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
    }
    rank
}

/// Corank of the principal submatrix on the vertex set `mask`, computed
/// directly from full rows without compacting indices.
///
/// `rows` must have at most 64 entries.
#[inline]
pub fn masked_corank(rows: &[u64], mask: u64) -> usize {
    let mut buf = [0u64; MAX_DIM];
    let mut len = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        buf[len] = rows[i] & mask;
        len += 1;
    }
    len - eliminate(&mut buf[..len])
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            rows: vec![0; n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            rows: (0..n).map(|i| 1u64 << i).collect(),
        })
    }

    /// Builds a matrix from packed rows, rejecting stray bits past column `n`.
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_dim(n)?;
        if rows.len() != n {
            return Err(Error::InvalidGraph(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let mask = low_mask(n);
        if let Some(i) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Error::IndexOutOfRange {
                index: (rows[i] & !mask).trailing_zeros() as usize,
                dim: n,
            });
        }
        Ok(Self { n, rows })
    }

    /// Builds a matrix from a dense 0/1 table.
    pub fn from_dense(entries: &[Vec<u8>]) -> Result<Self> {
        let n = entries.len();
        check_dim(n)?;
        let mut rows = Vec::with_capacity(n);
        for row in entries {
            if row.len() != n {
                return Err(Error::InvalidGraph("matrix is not square".into()));
            }
            let packed = row
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &b)| acc | (u64::from(b & 1) << j));
            rows.push(packed);
        }
        Ok(Self { n, rows })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1u64 << j;
        } else {
            self.rows[i] &= !(1u64 << j);
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![0u64; self.n];
        for (i, &row) in self.rows.iter().enumerate() {
            let mut rest = row;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                rows[j] |= 1u64 << i;
            }
        }
        Self { n: self.n, rows }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        eliminate(&mut rows)
    }

    pub fn corank(&self) -> usize {
        self.n - self.rank()
    }

    /// 1 if the matrix is invertible over GF(2), else 0.
    pub fn determinant(&self) -> u8 {
        u8::from(self.rank() == self.n)
    }

    /// Restriction to the rows and columns in `subset`, keeping their order.
    pub fn principal_submatrix(&self, subset: &[usize]) -> Result<Self> {
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: self.n,
            });
        }
        let rows = subset
            .iter()
            .map(|&i| {
                subset
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (k, &j)| acc | (u64::from(self.get(i, j)) << k))
            })
            .collect();
        Ok(Self {
            n: subset.len(),
            rows,
        })
    }

    /// `self + E`.
    pub fn add_identity(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r ^ (1u64 << i))
            .collect();
        Self { n: self.n, rows }
    }

    /// `self + E_ii`.
    pub fn flip_diagonal(&self, i: usize) -> Result<Self> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.n,
            });
        }
        let mut out = self.clone();
        out.rows[i] ^= 1u64 << i;
        Ok(out)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let line: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense elimination over `Vec<Vec<bool>>`; shares no code with `eliminate`.
    fn naive_rank(m: &[Vec<bool>]) -> usize {
        let mut a: Vec<Vec<bool>> = m.to_vec();
        let n = a.len();
        let cols = if n == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..n).find(|&r| a[r][col]) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..n {
                if r != rank && a[r][col] {
                    let pivot = a[rank].clone();
                    for (x, p) in a[r].iter_mut().zip(pivot) {
                        *x ^= p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn to_dense(m: &BitMatrix) -> Vec<Vec<bool>> {
        (0..m.dim())
            .map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect())
            .collect()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> BitMatrix {
        let mut m = BitMatrix::zeros(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                if symmetric && j < i {
                    continue;
                }
                let b = rng.gen_bool(0.4);
                m.set(i, j, b);
                if symmetric {
                    m.set(j, i, b);
                }
            }
        }
        m
    }

    fn g7_adjacency() -> BitMatrix {
        // 1-based edges of the seven-vertex example graph
        let edges = [
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (1, 6),
            (2, 7),
            (4, 7),
            (6, 7),
        ];
        let mut m = BitMatrix::zeros(7).unwrap();
        for (a, b) in edges {
            m.set(a - 1, b - 1, true);
            m.set(b - 1, a - 1, true);
        }
        m
    }

    #[test]
    fn small_ranks() {
        assert_eq!(BitMatrix::zeros(3).unwrap().rank(), 0);
        let perm = BitMatrix::from_dense(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(perm.rank(), 2);
        assert_eq!(BitMatrix::zeros(0).unwrap().rank(), 0);
        assert_eq!(BitMatrix::zeros(0).unwrap().corank(), 0);
        assert_eq!(BitMatrix::zeros(1).unwrap().corank(), 1);
    }

    #[test]
    fn g7_plus_identity_rank_by_two_routes() {
        let m = g7_adjacency().add_identity();
        let dense = naive_rank(&to_dense(&m));
        assert_eq!(dense, 4);
        assert_eq!(m.rank(), 4);
        assert_eq!(m.corank(), 3);
    }

    #[test]
    fn g7_odd_vertices_span_no_edges() {
        let sub = g7_adjacency().principal_submatrix(&[0, 2, 4, 6]).unwrap();
        assert_eq!(sub, BitMatrix::zeros(4).unwrap());
    }

    #[test]
    fn submatrix_edge_cases() {
        let m = g7_adjacency();
        assert_eq!(m.principal_submatrix(&[]).unwrap().dim(), 0);
        let all: Vec<usize> = (0..7).collect();
        assert_eq!(m.principal_submatrix(&all).unwrap(), m);
        assert!(matches!(
            m.principal_submatrix(&[0, 7]),
            Err(Error::IndexOutOfRange { index: 7, dim: 7 })
        ));
    }

    #[test]
    fn diagonal_perturbations() {
        let z = BitMatrix::zeros(1).unwrap();
        let one = z.add_identity();
        assert_eq!(one, BitMatrix::from_dense(&[vec![1]]).unwrap());
        assert_eq!(one.flip_diagonal(0).unwrap(), z);
        assert!(one.flip_diagonal(1).is_err());
        let k2 = BitMatrix::from_dense(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            k2.add_identity(),
            BitMatrix::from_dense(&[vec![1, 1], vec![1, 1]]).unwrap()
        );
    }

    #[test]
    fn from_rows_rejects_stray_bits() {
        assert!(BitMatrix::from_rows(2, vec![0b100, 0]).is_err());
        assert!(BitMatrix::zeros(65).is_err());
        assert!(BitMatrix::zeros(64).is_ok());
    }

    #[test]
    fn determinant_tracks_full_rank() {
        assert_eq!(BitMatrix::identity(5).unwrap().determinant(), 1);
        assert_eq!(BitMatrix::zeros(2).unwrap().determinant(), 0);
    }

    #[test]
    fn packed_rank_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6f2);
        for trial in 0..1200 {
            let n = rng.gen_range(0..=32);
            let m = random_matrix(&mut rng, n, trial % 2 == 0);
            assert_eq!(m.rank(), naive_rank(&to_dense(&m)), "{m:?}");
        }
    }

    #[test]
    fn masked_corank_matches_compacted_submatrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let n = rng.gen_range(0..=12);
            let m = random_matrix(&mut rng, n, true);
            let mask: u64 = rng.gen::<u64>() & low_mask(n);
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub = m.principal_submatrix(&subset).unwrap();
            assert_eq!(masked_corank(m.rows(), mask), sub.corank());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = BitMatrix> {
            (0usize..=20).prop_flat_map(|n| {
                proptest::collection::vec(any::<u64>(), n).prop_map(move |rows| {
                    let rows = rows.into_iter().map(|r| r & low_mask(n)).collect();
                    BitMatrix::from_rows(n, rows).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn rank_is_transpose_invariant(m in matrix()) {
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn rank_plus_corank_is_dimension(m in matrix()) {
                prop_assert_eq!(m.rank() + m.corank(), m.dim());
            }

            #[test]
            fn principal_submatrix_rank_is_bounded(m in matrix(), pick in any::<u64>()) {
                let subset: Vec<usize> = (0..m.dim()).filter(|i| pick >> i & 1 == 1).collect();
                prop_assert!(m.principal_submatrix(&subset).unwrap().rank() <= m.rank());
            }
        }
    }
}
