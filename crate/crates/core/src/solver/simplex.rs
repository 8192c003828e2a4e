//! Dense tableau simplex for `maximize c.x  s.t.  A x <= b, x >= 0` with
//! `b >= 0`, so the slack basis is feasible from the start. Bland's rule keeps
//! it from cycling on the degenerate programs matrix games produce.

use crate::error::{Error, Result};

pub(crate) const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub primal: Vec<f64>,
    /// Shadow prices of the `A x <= b` rows.
    pub dual: Vec<f64>,
    pub objective: f64,
}

pub(crate) fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    debug_assert!(b.iter().all(|&v| v >= 0.0));
    let width = n + m + 1;
    let rhs = n + m;

    let mut tableau: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, &bi))| {
            let mut t = vec![0.0; width];
            t[..n].copy_from_slice(row);
            t[n + i] = 1.0;
            t[rhs] = bi;
            t
        })
        .collect();
    let mut objective = vec![0.0; width];
    for (o, ci) in objective.iter_mut().zip(c) {
        *o = -ci;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_iterations = 100 * (m + n).max(10);
    for _ in 0..max_iterations {
        let Some(entering) = (0..n + m).find(|&j| objective[j] < -TOLERANCE) else {
            let mut primal = vec![0.0; n];
            for (row, &var) in basis.iter().enumerate() {
                if var < n {
                    primal[var] = tableau[row][rhs];
                }
            }
            return Ok(LpSolution {
                primal,
                dual: objective[n..n + m].to_vec(),
                objective: objective[rhs],
            });
        };

        let mut leaving: Option<(usize, f64)> = None;
        for (row, t) in tableau.iter().enumerate() {
            if t[entering] > TOLERANCE {
                let ratio = t[rhs] / t[entering];
                let better = match leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < best_ratio - TOLERANCE
                            || (ratio <= best_ratio + TOLERANCE && basis[row] < basis[best])
                    }
                };
                if better {
                    leaving = Some((row, ratio));
                }
            }
        }
        let (pivot_row, _) = leaving
            .ok_or_else(|| Error::Numerical("linear program is unbounded".into()))?;

        let pivot = tableau[pivot_row][entering];
        tableau[pivot_row].iter_mut().for_each(|v| *v /= pivot);
        let pivot_values = tableau[pivot_row].clone();
        for (row, t) in tableau.iter_mut().enumerate() {
            if row == pivot_row {
                continue;
            }
            let factor = t[entering];
            if factor != 0.0 {
                t.iter_mut().zip(&pivot_values).for_each(|(v, p)| *v -= factor * p);
            }
        }
        let factor = objective[entering];
        objective
            .iter_mut()
            .zip(&pivot_values)
            .for_each(|(v, p)| *v -= factor * p);
        basis[pivot_row] = entering;
    }
    Err(Error::Numerical(format!(
        "simplex did not converge within {max_iterations} pivots"
    )))
}
