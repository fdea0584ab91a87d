use super::{MultiDual, MultiDualError};

/// Dense row-major matrix of multidual entries sharing one order.
///
/// Column vectors are `n × 1` matrices. The hot kinematic paths use the
/// fixed-size [`crate::linalg::Mat3`] instead; this type is the general
/// shape-checked container.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDualMatrix<const N: usize> {
    rows: usize,
    cols: usize,
    data: Vec<MultiDual<N>>,
}

impl<const N: usize> MultiDualMatrix<N> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![MultiDual::constant(0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = MultiDual::constant(1.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<MultiDual<N>>>) -> Result<Self, MultiDualError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MultiDualError::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from per-order real matrices `slices[k]` holding the k-th
    /// derivative (not the Taylor coefficient).
    pub fn from_derivative_slices(slices: &[Vec<Vec<f64>>; N]) -> Result<Self, MultiDualError> {
        let rows = slices[0].len();
        let cols = slices[0].first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut stack = [0.0; N];
                for (k, s) in slices.iter().enumerate() {
                    stack[k] = *s
                        .get(i)
                        .and_then(|r| r.get(j))
                        .ok_or_else(|| MultiDualError::Shape(format!("slice {k} too small")))?;
                }
                m[(i, j)] = MultiDual::from_derivatives(stack);
            }
        }
        Ok(m)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// The k-th derivative as a real matrix.
    pub fn derivative_slice(&self, k: usize) -> Result<Vec<Vec<f64>>, MultiDualError> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)].derivative(k))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, MultiDualError> {
        if self.cols != rhs.rows {
            return Err(MultiDualError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = MultiDual::constant(0.0);
                for k in 0..self.cols {
                    acc += self[(i, k)] * rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }
}

impl<const N: usize> std::ops::Index<(usize, usize)> for MultiDualMatrix<N> {
    type Output = MultiDual<N>;
    fn index(&self, (i, j): (usize, usize)) -> &MultiDual<N> {
        &self.data[i * self.cols + j]
    }
}

impl<const N: usize> std::ops::IndexMut<(usize, usize)> for MultiDualMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MultiDual<N> {
        &mut self.data[i * self.cols + j]
    }
}
