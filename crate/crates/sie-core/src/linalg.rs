//! Small dense row-reduction with rank diagnostics.
//!
//! The systems here are tiny (at most a few hundred unknowns), so a plain
//! Gauss-Jordan elimination with partial pivoting is both fast enough and
//! gives us exactly the bookkeeping the solver report needs: pivot columns,
//! free columns, and the rows that turned out inconsistent.

/// Row-major dense matrix.
#[derive(Debug, Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_r Σ_c |a_rc|`.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Result of one reduction: a particular solution (free columns at zero) and
/// the rank structure of the system.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub solution: Vec<f64>,
    pub rank: usize,
    /// `(row, col)` of each pivot in elimination order.
    pub pivots: Vec<(usize, usize)>,
    /// Columns that never produced a pivot, in the requested column order.
    pub free_columns: Vec<usize>,
    /// Rows whose coefficients eliminated to zero but whose right-hand side
    /// did not.
    pub inconsistent_rows: Vec<usize>,
    /// Ratio of the largest to the smallest pivot magnitude.
    pub condition_estimate: f64,
}

/// Reduce `a x = rhs` to reduced row-echelon form, trying pivot columns in
/// `col_order`. Pivots below `pivot_rel * max|a|` are treated as zero;
/// eliminated rows with residual right-hand side above
/// `consistency_rel * max(max|a|, max|rhs|)` are flagged inconsistent.
pub fn reduce(
    a: &Mat,
    rhs: &[f64],
    col_order: &[usize],
    pivot_rel: f64,
    consistency_rel: f64,
) -> Reduction {
    assert_eq!(rhs.len(), a.rows());
    let mut work = a.clone();
    let mut b = rhs.to_vec();
    let scale = work.max_abs();
    let rhs_scale = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pivot_tol = pivot_rel * scale;
    let consistency_tol = consistency_rel * scale.max(rhs_scale);

    let mut row_used = vec![false; work.rows()];
    let mut pivots = Vec::new();
    let mut free_columns = Vec::new();
    let mut pivot_min = f64::INFINITY;
    let mut pivot_max = 0.0_f64;

    for &col in col_order {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..work.rows() {
            if row_used[r] {
                continue;
            }
            let v = work.at(r, col).abs();
            if v > best.map_or(0.0, |(_, m)| m) {
                best = Some((r, v));
            }
        }
        let Some((pivot_row, magnitude)) = best else {
            free_columns.push(col);
            continue;
        };
        if magnitude <= pivot_tol {
            free_columns.push(col);
            continue;
        }
        row_used[pivot_row] = true;
        pivots.push((pivot_row, col));
        pivot_min = pivot_min.min(magnitude);
        pivot_max = pivot_max.max(magnitude);

        let inv = 1.0 / work.at(pivot_row, col);
        for c in 0..work.cols() {
            *work.at_mut(pivot_row, c) *= inv;
        }
        b[pivot_row] *= inv;
        *work.at_mut(pivot_row, col) = 1.0;

        for r in 0..work.rows() {
            if r == pivot_row {
                continue;
            }
            let factor = work.at(r, col);
            if factor == 0.0 {
                continue;
            }
            for c in 0..work.cols() {
                let v = work.at(pivot_row, c);
                *work.at_mut(r, c) -= factor * v;
            }
            *work.at_mut(r, col) = 0.0;
            b[r] -= factor * b[pivot_row];
        }
    }

    let inconsistent_rows: Vec<usize> = (0..work.rows())
        .filter(|&r| !row_used[r] && b[r].abs() > consistency_tol)
        .collect();

    let mut solution = vec![0.0; work.cols()];
    for &(r, c) in &pivots {
        solution[c] = b[r];
    }

    Reduction {
        solution,
        rank: pivots.len(),
        condition_estimate: if pivots.is_empty() {
            f64::INFINITY
        } else {
            pivot_max / pivot_min
        },
        pivots,
        free_columns,
        inconsistent_rows,
    }
}

/// Determinant via elimination with partial pivoting; used for the problem
/// validator's nonsingularity check.
pub fn det(a: &Mat) -> f64 {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut work = a.clone();
    let mut result = 1.0;
    for k in 0..n {
        let mut pivot_row = k;
        let mut best = work.at(k, k).abs();
        for r in k + 1..n {
            let v = work.at(r, k).abs();
            if v > best {
                best = v;
                pivot_row = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            for c in 0..n {
                let tmp = work.at(k, c);
                *work.at_mut(k, c) = work.at(pivot_row, c);
                *work.at_mut(pivot_row, c) = tmp;
            }
            result = -result;
        }
        let pivot = work.at(k, k);
        result *= pivot;
        for r in k + 1..n {
            let factor = work.at(r, k) / pivot;
            for c in k..n {
                let v = work.at(k, c);
                *work.at_mut(r, c) -= factor * v;
            }
        }
    }
    result
}
