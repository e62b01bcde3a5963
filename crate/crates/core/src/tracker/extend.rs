use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerances::Tolerances;
use crate::tracker::branches::BranchSet;
use crate::tracker::matching::Order;

/// Completion of a partial parameterization.
#[derive(Debug, Clone, PartialEq)]
pub struct Extension<T> {
    /// `values[j][k]`: completing branch `j` at grid point `k`.
    pub values: Vec<Vec<T>>,
    /// Index of the tracked branch each value was taken from.
    pub sources: Vec<Vec<usize>>,
}

fn cmp<T: Real>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn slope<T: Real>(grid: &[T], f: &[T], k: usize) -> T {
    if grid.len() < 2 {
        T::zero()
    } else if k + 1 < grid.len() {
        (f[k + 1] - f[k]) / (grid[k + 1] - grid[k])
    } else {
        (f[k] - f[k - 1]) / (grid[k] - grid[k - 1])
    }
}

/// Second difference of `f` at `k`, zero at the ends.
fn curvature<T: Real>(grid: &[T], f: &[T], k: usize) -> T {
    if k == 0 || k + 1 >= grid.len() {
        return T::zero();
    }
    let (h0, h1) = (grid[k] - grid[k - 1], grid[k + 1] - grid[k]);
    T::lit(2.0) * ((f[k + 1] - f[k]) / h1 - (f[k] - f[k - 1]) / h0) / (h0 + h1)
}

/// Given tracked branches `λ` and `k` branches `μ` (`mu[j][grid point]`)
/// whose values are among the `λ` at every grid point, returns `N - k`
/// branches completing the multiset.
///
/// Each `μ_j` claims a `λ` branch at every point (preferring the one it
/// claimed before, then the closest slope); the unclaimed ones form the
/// completion. When the unclaimed set changes, freed outputs are paired
/// with newly unclaimed branches by predicted value and then slope (and
/// curvature for [`Order::Second`]), the same rule used at crossings.
pub fn extend_parameterization<T: Real>(
    lambda: &BranchSet<T>,
    mu: &[Vec<T>],
    order: Order,
    tol: &Tolerances<T>,
) -> Result<Extension<T>> {
    let grid = &lambda.grid;
    let g = grid.len();
    let n = lambda.len();
    if mu.len() > n {
        return Err(Error::InvalidArgument(format!(
            "{} given branches exceed the {n} tracked ones",
            mu.len()
        )));
    }
    if let Some(bad) = mu.iter().find(|m| m.len() != g) {
        return Err(Error::DimensionMismatch {
            expected: g,
            found: bad.len(),
        });
    }
    let lam = lambda.by_branch();
    let mut prev: Vec<Option<usize>> = vec![None; mu.len()];
    let mut assign: Vec<usize> = Vec::new();
    let mut values = vec![Vec::with_capacity(g); n - mu.len()];
    let mut sources = vec![Vec::with_capacity(g); n - mu.len()];

    for k in 0..g {
        let row = &lambda.values[k];
        let spread = row.iter().fold(T::min_positive_value(), |m, &x| m.max(x.abs()));
        let threshold = tol.cluster * spread;
        let mut used = vec![false; n];
        for (j, m) in mu.iter().enumerate() {
            let z = m[k];
            let candidates: Vec<usize> = (0..n).filter(|&i| !used[i] && (row[i] - z).abs() <= threshold).collect();
            let pick = match prev[j] {
                Some(p) if candidates.contains(&p) => Some(p),
                _ => {
                    let s = slope(grid, m, k);
                    candidates
                        .iter()
                        .copied()
                        .min_by(|&a, &b| cmp(&(lambda.derivs[k][a] - s).abs(), &(lambda.derivs[k][b] - s).abs()))
                }
            };
            let Some(i) = pick else {
                return Err(Error::CountingViolation {
                    t: grid[k].as_f64(),
                    z: z.as_f64(),
                });
            };
            used[i] = true;
            prev[j] = Some(i);
        }
        let free: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
        if k == 0 {
            assign = free;
        } else {
            let mut freed: Vec<usize> = (0..assign.len()).filter(|&l| used[assign[l]]).collect();
            let mut fresh: Vec<usize> = free.iter().copied().filter(|i| !assign.contains(i)).collect();
            let dt = grid[k] - grid[k - 1];
            let key_prev = |l: usize| {
                let i = assign[l];
                let d = lambda.derivs[k - 1][i];
                (lambda.values[k - 1][i] + dt * d, d, curvature(grid, &lam[i], k - 1))
            };
            let key_now = |i: usize| (row[i], lambda.derivs[k][i], curvature(grid, &lam[i], k));
            let by = |a: (T, T, T), b: (T, T, T)| {
                let c = cmp(&a.0, &b.0);
                if c != Ordering::Equal && (a.0 - b.0).abs() > threshold {
                    return c;
                }
                let c = cmp(&a.1, &b.1);
                if order == Order::Second && (a.1 - b.1).abs() <= tol.deriv_tie * (T::one() + a.1.abs()) {
                    return cmp(&a.2, &b.2);
                }
                c
            };
            freed.sort_by(|&a, &b| by(key_prev(a), key_prev(b)));
            fresh.sort_by(|&a, &b| by(key_now(a), key_now(b)));
            for (&l, &i) in freed.iter().zip(&fresh) {
                assign[l] = i;
            }
        }
        for (l, &i) in assign.iter().enumerate() {
            values[l].push(row[i]);
            sources[l].push(i);
        }
    }
    Ok(Extension { values, sources })
}

/// Largest distance between the sorted multisets `lambda` and `union`, or
/// infinity when their sizes differ.
pub fn counting_defect<T: Real>(lambda: &[T], union: &[T]) -> T {
    if lambda.len() != union.len() {
        return T::infinity();
    }
    let mut a = lambda.to_vec();
    let mut b = union.to_vec();
    a.sort_by(cmp);
    b.sort_by(cmp);
    a.iter().zip(&b).fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}
