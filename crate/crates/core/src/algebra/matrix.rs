use crate::error::{Error, Result};

use super::field::{FieldElement, FieldSpec};

/// Square matrix over a [`FieldSpec`].
///
/// Rows are stored compressed: each row keeps its nonzero entries sorted by
/// column. Every operation is exact and the public surface is that of a dense
/// `dim x dim` matrix; the storage only skips zeros. Transition matrices of
/// automata have one nonzero per row and circuit intermediates on the layered
/// automata stay banded, so this keeps evaluation tractable at a few hundred
/// states with unbounded rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    field: FieldSpec,
    dim: usize,
    rows: Vec<Vec<(usize, FieldElement)>>,
}

impl SquareMatrix {
    pub fn zeros(field: FieldSpec, dim: usize) -> Self {
        SquareMatrix {
            field,
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        Self::scalar(field.one(), field, dim)
    }

    /// `c * I`.
    pub fn scalar(c: FieldElement, field: FieldSpec, dim: usize) -> Self {
        debug_assert_eq!(c.spec(), field);
        if c.is_zero() {
            return Self::zeros(field, dim);
        }
        SquareMatrix {
            field,
            dim,
            rows: (0..dim).map(|i| vec![(i, c.clone())]).collect(),
        }
    }

    /// The 0-1 matrix of a total function on `[0, dim)`: row `q` has its
    /// single 1 in column `targets[q]`.
    pub fn functional(field: FieldSpec, targets: &[usize]) -> Result<Self> {
        let dim = targets.len();
        if let Some(&bad) = targets.iter().find(|&&t| t >= dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad + 1,
            });
        }
        let one = field.one();
        Ok(SquareMatrix {
            field,
            dim,
            rows: targets.iter().map(|&t| vec![(t, one.clone())]).collect(),
        })
    }

    pub fn from_dense(field: FieldSpec, entries: Vec<Vec<FieldElement>>) -> Result<Self> {
        let dim = entries.len();
        let mut rows = Vec::with_capacity(dim);
        for row in entries {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            let mut sparse = Vec::new();
            for (j, e) in row.into_iter().enumerate() {
                field.check(&e)?;
                if !e.is_zero() {
                    sparse.push((j, e));
                }
            }
            rows.push(sparse);
        }
        Ok(SquareMatrix { field, dim, rows })
    }

    pub fn to_dense(&self) -> Vec<Vec<FieldElement>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![self.field.zero(); self.dim];
                for (j, e) in row {
                    dense[*j] = e.clone();
                }
                dense
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<FieldElement> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: i.max(j) + 1,
            });
        }
        Ok(self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| self.field.zero()))
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, FieldElement)] {
        &self.rows[i]
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// True when every row holds exactly one entry and that entry is 1.
    pub fn is_zero_one_functional(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.len() == 1 && row[0].1.is_one())
    }

    fn conform(&self, other: &SquareMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.conform(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b))
            .collect();
        Ok(SquareMatrix {
            field: self.field,
            dim: self.dim,
            rows,
        })
    }

    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.conform(other)?;
        let mut acc: Vec<Option<FieldElement>> = vec![None; self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut rows = Vec::with_capacity(self.dim);
        for a_row in &self.rows {
            for (k, a) in a_row {
                for (j, b) in &other.rows[*k] {
                    let term = a.mul_unchecked(b);
                    match &mut acc[*j] {
                        Some(slot) => slot.add_assign_unchecked(&term),
                        slot @ None => {
                            *slot = Some(term);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                if let Some(v) = acc[j].take() {
                    if !v.is_zero() {
                        row.push((j, v));
                    }
                }
            }
            touched.clear();
            rows.push(row);
        }
        Ok(SquareMatrix {
            field: self.field,
            dim: self.dim,
            rows,
        })
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> Result<SquareMatrix> {
        self.field.check(c)?;
        if c.is_zero() {
            return Ok(Self::zeros(self.field, self.dim));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(j, e)| (*j, c.mul_unchecked(e))).collect())
            .collect();
        Ok(SquareMatrix {
            field: self.field,
            dim: self.dim,
            rows,
        })
    }
}

fn merge_rows(
    a: &[(usize, FieldElement)],
    b: &[(usize, FieldElement)],
) -> Vec<(usize, FieldElement)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ca, va) = &a[i];
        let (cb, vb) = &b[j];
        if ca < cb {
            out.push((*ca, va.clone()));
            i += 1;
        } else if cb < ca {
            out.push((*cb, vb.clone()));
            j += 1;
        } else {
            let mut v = va.clone();
            v.add_assign_unchecked(vb);
            if !v.is_zero() {
                out.push((*ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
