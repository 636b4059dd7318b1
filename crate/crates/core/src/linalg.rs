//! Exact linear algebra: Gaussian elimination, ranks, kernels, and the
//! hyperplane-through-points primitive used by facet enumeration.

use crate::rat::{vec_sub, AffineFunctional, Rat, RVec};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty input")]
    EmptyInput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(RVec),
    /// The system has no solution.
    Inconsistent,
    /// Solution set is `particular + span(kernel)`.
    Underdetermined { particular: RVec, kernel: Vec<RVec> },
}

/// Row-reduces `m` in place; returns the pivot column of each pivot row.
fn row_reduce(m: &mut [RVec]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                // Rows r and i alias through `m`, so iterators can't borrow both.
                #[allow(clippy::needless_range_loop)]
                for j in 0..cols {
                    let t = &m[r][j] * &factor;
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(matrix: &[RVec]) -> usize {
    let mut m: Vec<RVec> = matrix.to_vec();
    row_reduce(&mut m).len()
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub fn affine_rank(points: &[RVec]) -> Result<usize, LinalgError> {
    let first = points.first().ok_or(LinalgError::EmptyInput)?;
    let diffs: Vec<RVec> = points[1..].iter().map(|p| vec_sub(p, first)).collect();
    Ok(rank(&diffs))
}

/// Exact solve of `matrix · x = rhs`.
pub fn solve_linear(matrix: &[RVec], rhs: &[Rat]) -> Result<LinearSolution, LinalgError> {
    if matrix.len() != rhs.len() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} rows vs {} rhs entries",
            matrix.len(),
            rhs.len()
        )));
    }
    let cols = matrix.first().map_or(0, |r| r.len());
    for row in matrix {
        if row.len() != cols {
            return Err(LinalgError::DimensionMismatch(
                "ragged coefficient rows".into(),
            ));
        }
    }
    // Augmented elimination.
    let mut aug: Vec<RVec> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    // Inconsistent iff a pivot lands in the rhs column.
    if pivots.last() == Some(&cols) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = vec![Rat::zero(); cols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        particular[pc] = row[cols].clone();
    }
    if pivots.len() == cols {
        debug_assert!(matrix
            .iter()
            .zip(rhs)
            .all(|(row, b)| crate::rat::dot(row, &particular) == *b));
        return Ok(LinearSolution::Unique(particular));
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); cols];
        v[fc] = Rat::one();
        for (row, &pc) in aug.iter().zip(&pivots) {
            v[pc] = -&row[fc];
        }
        kernel.push(v);
    }
    Ok(LinearSolution::Underdetermined { particular, kernel })
}

/// Basis of the kernel of `matrix` (acting on column vectors).
pub fn nullspace(matrix: &[RVec]) -> Vec<RVec> {
    let cols = matrix.first().map_or(0, |r| r.len());
    match solve_linear(matrix, &vec![Rat::zero(); matrix.len()]) {
        Ok(LinearSolution::Unique(_)) => Vec::new(),
        Ok(LinearSolution::Underdetermined { kernel, .. }) => kernel,
        Ok(LinearSolution::Inconsistent) => unreachable!("homogeneous system"),
        Err(_) => {
            debug_assert!(cols == 0);
            Vec::new()
        }
    }
}

/// The affine hyperplane through `points`, as a functional vanishing on all of
/// them. Returns `None` unless the points span exactly a hyperplane (affine
/// rank `d - 1` in ambient dimension `d`).
pub fn hyperplane_through(points: &[RVec]) -> Option<AffineFunctional> {
    let d = points.first()?.len();
    // Coefficients (l, c) with l·p + c = 0 for each p.
    let rows: Vec<RVec> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(Rat::one());
            r
        })
        .collect();
    let kernel = nullspace(&rows);
    if kernel.len() != 1 {
        return None;
    }
    let mut coeffs = kernel.into_iter().next().unwrap();
    let constant = coeffs.pop().unwrap();
    if coeffs.iter().all(|c| c.is_zero()) {
        return None; // degenerate: constant functional
    }
    debug_assert_eq!(coeffs.len(), d);
    Some(AffineFunctional::new(coeffs, constant))
}
