use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smoothness targeted by the crossing matcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    /// Pair by first one-sided derivatives.
    First,
    /// Additionally break first-derivative ties by second-order quotients.
    Second,
}

impl Order {
    pub fn as_u8(self) -> u8 {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            1 => Some(Order::First),
            2 => Some(Order::Second),
            _ => None,
        }
    }
}

/// Pairing of the branches entering a crossing with those leaving it.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport<T> {
    pub t_star: T,
    /// One-sided derivatives of the incoming branches, by incoming rank.
    pub left: Vec<T>,
    /// One-sided derivatives of the outgoing branches, by outgoing rank.
    pub right: Vec<T>,
    pub left_second: Option<Vec<T>>,
    pub right_second: Option<Vec<T>>,
    /// `pairing[i]` is the outgoing rank continuing incoming rank `i`.
    pub pairing: Vec<usize>,
    /// `max_i |right[pairing[i]] - left[i]|`.
    pub residual: T,
    pub order: Order,
}

impl<T: Real> MatchReport<T> {
    /// Derivative mismatch if every incoming rank simply kept its rank.
    pub fn identity_mismatch(&self) -> T {
        self.left
            .iter()
            .zip(&self.right)
            .fold(T::zero(), |m, (&l, &r)| m.max((l - r).abs()))
    }

    /// Second-order mismatch under the chosen pairing, when second data
    /// is present.
    pub fn second_residual(&self) -> Option<T> {
        let (l, r) = (self.left_second.as_ref()?, self.right_second.as_ref()?);
        Some(
            self.pairing
                .iter()
                .enumerate()
                .fold(T::zero(), |m, (i, &j)| m.max((l[i] - r[j]).abs())),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.pairing.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn by_value<T: Real>(v: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(Ordering::Equal));
    idx
}

/// Pairs two derivative multisets.
///
/// Both sides are sorted ascending and paired in order, which is the
/// optimal assignment for scalars. Runs of equal first derivatives (within
/// `tie_tol * (1 + |ρ|)`) are re-paired by their sorted second-order
/// quotients with [`Order::Second`], and by rank otherwise.
pub fn match_crossing<T: Real>(
    t_star: T,
    left: &[T],
    right: &[T],
    order: Order,
    second_left: Option<&[T]>,
    second_right: Option<&[T]>,
    tie_tol: T,
) -> Result<MatchReport<T>> {
    let n = left.len();
    if right.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: right.len(),
        });
    }
    for s in [second_left, second_right].into_iter().flatten() {
        if s.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.len(),
            });
        }
    }
    let ls = by_value(left);
    let rs = by_value(right);
    let mut pairing = vec![0; n];

    let second = match (order, second_left, second_right) {
        (Order::Second, Some(l2), Some(r2)) => Some((l2, r2)),
        (Order::Second, _, _) => {
            return Err(Error::InvalidArgument(
                "second-order matching needs second-order data on both sides".into(),
            ))
        }
        (Order::First, _, _) => None,
    };
    let tied = |a: T, b: T| (a - b).abs() <= tie_tol * (T::one() + a.abs().max(b.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && tied(left[ls[end - 1]], left[ls[end]]) && tied(right[rs[end - 1]], right[rs[end]]) {
            end += 1;
        }
        let mut lg = ls[start..end].to_vec();
        let mut rg = rs[start..end].to_vec();
        match second {
            Some((l2, r2)) => {
                lg.sort_by(|&a, &b| l2[a].partial_cmp(&l2[b]).unwrap_or(Ordering::Equal));
                rg.sort_by(|&a, &b| r2[a].partial_cmp(&r2[b]).unwrap_or(Ordering::Equal));
            }
            None => {
                // Without curvature data, tied branches keep their rank
                // order, which is what a second-order contact does anyway.
                lg.sort_unstable();
                rg.sort_unstable();
            }
        }
        for (&i, &j) in lg.iter().zip(&rg) {
            pairing[i] = j;
        }
        start = end;
    }

    let residual = pairing
        .iter()
        .enumerate()
        .fold(T::zero(), |m, (i, &j)| m.max((right[j] - left[i]).abs()));
    Ok(MatchReport {
        t_star,
        left: left.to_vec(),
        right: right.to_vec(),
        left_second: second_left.map(<[T]>::to_vec),
        right_second: second_right.map(<[T]>::to_vec),
        pairing,
        residual,
        order,
    })
}
