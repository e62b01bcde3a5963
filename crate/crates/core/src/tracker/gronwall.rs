use rayon::prelude::*;

use crate::error::Result;
use crate::family::{derivative, eval_scaled, graph_operator_norm, prefactor, HermitianFamily};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Which grid-point pairs `(t_1, t_2)` to test.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSelection {
    /// Every ordered pair.
    All,
    /// `t_2` fixed at one grid index.
    Anchor(usize),
    Explicit(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallViolation<T> {
    pub branch: usize,
    pub i1: usize,
    pub i2: usize,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallReport<T> {
    pub a: T,
    /// Per branch: did every tested pair satisfy the bound?
    pub holds: Vec<bool>,
    pub pairs_checked: usize,
    /// Smallest `rhs - lhs` seen (negative when violated).
    pub min_margin: T,
    /// First violations, at most [`MAX_LISTED`].
    pub violations: Vec<GronwallViolation<T>>,
}

pub const MAX_LISTED: usize = 20;

impl<T: Real> GronwallReport<T> {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }
}

/// Checks `|λ(t_1) - λ(t_2)| <= (1 + |λ(t_2)|)(e^{a|t_1 - t_2|} - 1)` for
/// every branch (`branches[j][k]`) over the selected pairs.
pub fn gronwall_screen<T: Real>(
    grid: &[T],
    branches: &[Vec<T>],
    a: T,
    pairs: &PairSelection,
) -> GronwallReport<T> {
    let g = grid.len();
    let list: Vec<(usize, usize)> = match pairs {
        PairSelection::All => (0..g).flat_map(|i| (0..g).map(move |j| (i, j))).filter(|(i, j)| i != j).collect(),
        PairSelection::Anchor(i2) => (0..g).filter(|i| i != i2).map(|i| (i, *i2)).collect(),
        PairSelection::Explicit(p) => p.clone(),
    };
    let per_branch: Vec<(bool, T, Vec<GronwallViolation<T>>)> = branches
        .par_iter()
        .enumerate()
        .map(|(j, b)| {
            let mut ok = true;
            let mut margin = T::infinity();
            let mut bad = Vec::new();
            for &(i1, i2) in &list {
                let lhs = (b[i1] - b[i2]).abs();
                let rhs = (T::one() + b[i2].abs()) * (a * (grid[i1] - grid[i2]).abs()).exp_m1();
                margin = margin.min(rhs - lhs);
                if lhs > rhs {
                    ok = false;
                    if bad.len() < MAX_LISTED {
                        bad.push(GronwallViolation {
                            branch: j,
                            i1,
                            i2,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
            (ok, margin, bad)
        })
        .collect();
    let mut violations = Vec::new();
    for (_, _, v) in &per_branch {
        violations.extend(v.iter().cloned());
    }
    violations.truncate(MAX_LISTED);
    GronwallReport {
        a,
        holds: per_branch.iter().map(|p| p.0).collect(),
        pairs_checked: list.len() * branches.len(),
        min_margin: per_branch.iter().fold(T::infinity(), |m, p| m.min(p.1)),
        violations,
    }
}

/// `max_k ||A'(t_k)||` measured from the graph norm of `A(t_k)` into the
/// plain norm, at true scale.
pub fn estimate_gronwall_constant<T: Real>(
    family: &impl HermitianFamily<T>,
    grid: &[T],
    tol: &Tolerances<T>,
) -> Result<T> {
    let scale = prefactor(family);
    let norms: Vec<T> = grid
        .par_iter()
        .map(|&t| {
            let a = eval_scaled(family, t)?;
            let d = derivative(family, t, tol)?.scale(scale);
            graph_operator_norm(&d, &a)
        })
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().fold(T::zero(), T::max))
}
