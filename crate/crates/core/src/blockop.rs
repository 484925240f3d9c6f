//! Block operators over a finite group: column operators `H -> l2(G,H)`
//! and square operators on `l2(G,H)`, both stored dense with `d x d`
//! blocks in group enumeration order.

use crate::error::{CoreError, Result};
use crate::linalg::{op_norm, zeros, Mat};

/// Operator `C^d -> l2(G, C^d)`, `v |-> (t |-> block_t v)`.
#[derive(Debug, Clone)]
pub struct ColumnOp {
    dim: usize,
    blocks: Vec<Mat>,
}

impl ColumnOp {
    pub fn new(blocks: Vec<Mat>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(CoreError::Structural("column operator needs blocks".into()));
        }
        let d = blocks[0].nrows();
        if blocks.iter().any(|b| b.nrows() != d || b.ncols() != d) {
            return Err(CoreError::Structural("column blocks must share one square shape".into()));
        }
        Ok(ColumnOp { dim: d, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, t: usize) -> &Mat {
        &self.blocks[t]
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    /// Materialize as a `(|G| d) x d` matrix, blocks stacked in
    /// enumeration order.
    pub fn as_matrix(&self) -> Mat {
        let d = self.dim;
        let mut m = zeros(self.blocks.len() * d, d);
        for (t, b) in self.blocks.iter().enumerate() {
            m.view_mut((t * d, 0), (d, d)).copy_from(b);
        }
        m
    }

    /// Right action of a `d x d` matrix.
    pub fn right_mul(&self, m: &Mat) -> Result<ColumnOp> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(CoreError::Structural("right factor has wrong shape".into()));
        }
        ColumnOp::new(self.blocks.iter().map(|b| b * m).collect())
    }

    pub fn sub(&self, other: &ColumnOp) -> Result<ColumnOp> {
        self.check_same(other)?;
        ColumnOp::new(
            self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn op_norm(&self) -> Result<f64> {
        op_norm(&self.as_matrix())
    }

    pub fn check_same(&self, other: &ColumnOp) -> Result<()> {
        if self.dim != other.dim || self.blocks.len() != other.blocks.len() {
            return Err(CoreError::Structural("column operators live on different systems".into()));
        }
        Ok(())
    }
}

/// Dense operator on `l2(G, C^d) = C^{|G| d}` with block grid indexed by
/// pairs of group elements.
#[derive(Debug, Clone)]
pub struct BigOp {
    n: usize,
    d: usize,
    mat: Mat,
}

impl BigOp {
    pub fn zeros(n: usize, d: usize) -> Self {
        BigOp { n, d, mat: zeros(n * d, n * d) }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        BigOp { n, d, mat: Mat::identity(n * d, n * d) }
    }

    pub fn from_block_fn(n: usize, d: usize, f: impl Fn(usize, usize) -> Mat) -> Self {
        let mut big = BigOp::zeros(n, d);
        for t in 0..n {
            for s in 0..n {
                let b = f(t, s);
                debug_assert!(b.nrows() == d && b.ncols() == d);
                big.mat.view_mut((t * d, s * d), (d, d)).copy_from(&b);
            }
        }
        big
    }

    pub fn from_matrix(n: usize, d: usize, mat: Mat) -> Result<Self> {
        if mat.nrows() != n * d || mat.ncols() != n * d {
            return Err(CoreError::Structural("matrix size does not match block grid".into()));
        }
        Ok(BigOp { n, d, mat })
    }

    pub fn blocks_per_side(&self) -> usize {
        self.n
    }

    pub fn block_dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn block(&self, t: usize, s: usize) -> Mat {
        self.mat.view((t * self.d, s * self.d), (self.d, self.d)).into()
    }

    pub fn set_block(&mut self, t: usize, s: usize, b: &Mat) {
        self.mat.view_mut((t * self.d, s * self.d), (self.d, self.d)).copy_from(b);
    }

    pub fn check_same(&self, other: &BigOp) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(CoreError::Structural("operators live on different systems".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &BigOp) -> Result<BigOp> {
        self.check_same(other)?;
        Ok(BigOp { n: self.n, d: self.d, mat: &self.mat * &other.mat })
    }

    pub fn add(&self, other: &BigOp) -> Result<BigOp> {
        self.check_same(other)?;
        Ok(BigOp { n: self.n, d: self.d, mat: &self.mat + &other.mat })
    }

    pub fn sub(&self, other: &BigOp) -> Result<BigOp> {
        self.check_same(other)?;
        Ok(BigOp { n: self.n, d: self.d, mat: &self.mat - &other.mat })
    }

    pub fn adjoint(&self) -> BigOp {
        BigOp { n: self.n, d: self.d, mat: self.mat.adjoint() }
    }

    pub fn scale(&self, s: f64) -> BigOp {
        BigOp { n: self.n, d: self.d, mat: self.mat.scale(s) }
    }

    pub fn op_norm(&self) -> Result<f64> {
        op_norm(&self.mat)
    }

    /// Apply to a column operator (composition `T . S`).
    pub fn apply_col(&self, s: &ColumnOp) -> Result<ColumnOp> {
        if s.dim() != self.d || s.len() != self.n {
            return Err(CoreError::Structural("column operator has wrong shape".into()));
        }
        let prod = &self.mat * s.as_matrix();
        let blocks = (0..self.n)
            .map(|t| prod.view((t * self.d, 0), (self.d, self.d)).into())
            .collect();
        ColumnOp::new(blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity};

    #[test]
    fn column_materialization_and_norm() {
        let b0 = identity(2);
        let b1 = identity(2).scale(2.0);
        let col = ColumnOp::new(vec![b0, b1]).unwrap();
        let m = col.as_matrix();
        assert_eq!(m.nrows(), 4);
        assert_eq!(m.ncols(), 2);
        // Columns have norm sqrt(1 + 4).
        assert!((col.op_norm().unwrap() - 5.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bigop_block_round_trip() {
        let big = BigOp::from_block_fn(3, 2, |t, s| {
            identity(2).scale((t * 3 + s) as f64)
        });
        for t in 0..3 {
            for s in 0..3 {
                let b = big.block(t, s);
                assert_eq!(b[(0, 0)], c((t * 3 + s) as f64, 0.0));
            }
        }
        let id = BigOp::identity(3, 2);
        let prod = big.mul(&id).unwrap();
        assert_eq!(crate::linalg::max_abs_diff(prod.matrix(), big.matrix()), 0.0);
    }
}
