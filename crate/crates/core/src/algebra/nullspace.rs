use crate::error::{Error, Result};

use super::field::{FieldElement, FieldSpec};

/// Reduced row echelon form of a coefficient matrix.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
    num_unknowns: usize,
}

impl RowEchelon {
    /// Gauss-Jordan elimination. Pivots are chosen as the first row (in input
    /// order) with a nonzero entry in the current column, so the output is a
    /// deterministic function of the row order.
    pub fn reduce(
        field: FieldSpec,
        rows: &[Vec<FieldElement>],
        num_unknowns: usize,
    ) -> Result<Self> {
        let mut m: Vec<Vec<FieldElement>> = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != num_unknowns {
                return Err(Error::DimensionMismatch {
                    left: num_unknowns,
                    right: row.len(),
                });
            }
            for e in row {
                field.check(e)?;
            }
            m.push(row.clone());
        }

        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..num_unknowns {
            if next == m.len() {
                break;
            }
            let Some(found) = (next..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(next, found);
            let inv = m[next][col].inv()?;
            for e in m[next][col..].iter_mut() {
                *e = e.mul_unchecked(&inv);
            }
            let pivot_row = m[next].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == next || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].neg();
                for (e, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    if !p.is_zero() {
                        e.add_assign_unchecked(&factor.mul_unchecked(p));
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        m.truncate(pivots.len());
        Ok(RowEchelon {
            rows: m,
            pivots,
            num_unknowns,
        })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Kernel vector obtained by setting the first free unknown to 1 and the
    /// other free unknowns to 0.
    pub fn kernel_vector(&self, field: FieldSpec) -> Result<Vec<FieldElement>> {
        let mut is_pivot = vec![false; self.num_unknowns];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let Some(free) = (0..self.num_unknowns).find(|&c| !is_pivot[c]) else {
            return Err(Error::NoNontrivialSolution {
                rank: self.rank(),
                unknowns: self.num_unknowns,
            });
        };
        let mut v = vec![field.zero(); self.num_unknowns];
        v[free] = field.one();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            v[p] = row[free].neg();
        }
        Ok(v)
    }
}

/// Returns a nonzero `v` with `row . v = 0` for every row.
pub fn solve_nullspace(
    field: FieldSpec,
    rows: &[Vec<FieldElement>],
    num_unknowns: usize,
) -> Result<Vec<FieldElement>> {
    RowEchelon::reduce(field, rows, num_unknowns)?.kernel_vector(field)
}

pub fn rank(field: FieldSpec, rows: &[Vec<FieldElement>], num_unknowns: usize) -> Result<usize> {
    Ok(RowEchelon::reduce(field, rows, num_unknowns)?.rank())
}
