use rayon::prelude::*;

use crate::contour::{Contour, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::family::{derivative, prefactor, HermitianFamily};
use crate::linalg::{hermitian_eig, inner, Matrix};
use crate::scalar::{Cplx, Real};
use crate::tolerances::Tolerances;
use crate::tracker::local::{one_sided_derivatives, Side};
use crate::tracker::matching::{match_crossing, MatchReport, Order};

/// A point where several branches meet, and how they were continued.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing<T> {
    pub t_star: T,
    /// Grid point of the crossing, or the left end of the interval that
    /// contains it.
    pub grid_index: usize,
    pub on_grid: bool,
    /// First eigenvalue rank in the cluster.
    pub start_rank: usize,
    /// Incoming branch at each local rank.
    pub branches: Vec<usize>,
    /// Spectrum of the compressed derivative, ascending.
    pub compressed: Vec<T>,
    pub report: MatchReport<T>,
}

impl<T: Real> Crossing<T> {
    pub fn size(&self) -> usize {
        self.branches.len()
    }

    /// Local pairing `σ`: incoming rank `q` leaves at rank `σ(q)`.
    pub fn permutation(&self) -> &[usize] {
        &self.report.pairing
    }

    fn local(&self, branch: usize) -> Option<usize> {
        self.branches.iter().position(|&b| b == branch)
    }

    /// Left derivative of `branch` at the crossing.
    pub fn left_deriv(&self, branch: usize) -> Option<T> {
        self.local(branch).map(|q| self.report.left[q])
    }

    /// Right derivative of `branch` at the crossing.
    pub fn right_deriv(&self, branch: usize) -> Option<T> {
        self.local(branch).map(|q| self.report.right[self.report.pairing[q]])
    }

    /// Distance between the sorted left and right derivative multisets.
    pub fn multiset_gap(&self) -> T {
        let mut l = self.report.left.clone();
        let mut r = self.report.right.clone();
        l.sort_by(|a, b| a.partial_cmp(b).unwrap());
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        l.iter().zip(&r).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Eigenvalue branches sampled on a grid.
///
/// `values[k][j]` is branch `j` at `grid[k]`, at true scale; `derivs[k][j]`
/// its right derivative there.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet<T> {
    pub grid: Vec<T>,
    pub values: Vec<Vec<T>>,
    pub derivs: Vec<Vec<T>>,
    pub crossings: Vec<Crossing<T>>,
    pub order: Order,
    pub warnings: Vec<String>,
}

impl<T: Real> BranchSet<T> {
    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Samples of one branch along the grid.
    pub fn branch(&self, j: usize) -> Vec<T> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// All branches, `[branch][grid point]`.
    pub fn by_branch(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|j| self.branch(j)).collect()
    }

    /// The naive arrangement `λ_0(t) <= λ_1(t) <= ...`.
    pub fn sorted_arrangement(&self) -> Vec<Vec<T>> {
        self.values
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                r
            })
            .collect()
    }

    /// Worst one-sided derivative mismatch over all crossings.
    pub fn max_match_residual(&self) -> T {
        self.crossings.iter().fold(T::zero(), |m, c| m.max(c.report.residual))
    }

    /// Largest distance between each row (sorted) and the spectrum of
    /// `A(t_k)` at true scale.
    pub fn multiset_defect(&self, family: &impl HermitianFamily<T>) -> Result<T> {
        let scale = prefactor(family);
        let defects: Vec<T> = self
            .grid
            .par_iter()
            .zip(&self.values)
            .map(|(&t, row)| {
                let e = hermitian_eig(&family.eval(t)?)?;
                let mut r = row.clone();
                r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                Ok(r.iter()
                    .zip(&e.eigenvalues)
                    .fold(T::zero(), |m, (&a, &b)| m.max((a - b * scale).abs())))
            })
            .collect::<Result<_>>()?;
        Ok(defects.into_iter().fold(T::zero(), T::max))
    }
}

/// `grid_size` equispaced points of `[t0, t1]`, the last one exactly `t1`.
pub fn uniform_grid<T: Real>(t0: T, t1: T, grid_size: usize) -> Result<Vec<T>> {
    if !(t0 < t1) {
        return Err(Error::InvalidArgument(format!("empty parameter range [{t0}, {t1}]")));
    }
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
    }
    let last = T::lit((grid_size - 1) as f64);
    Ok((0..grid_size)
        .map(|k| {
            if k + 1 == grid_size {
                t1
            } else {
                t0 + (t1 - t0) * T::lit(k as f64) / last
            }
        })
        .collect())
}

/// Spectral data at one grid point, unit scale except for slopes.
struct Point<T> {
    eig: Vec<T>,
    /// `(start rank, size)` of each run of colliding eigenvalues.
    clusters: Vec<(usize, usize)>,
    /// Slope continuing each rank to the right / arriving from the left.
    right: Vec<T>,
    left: Vec<T>,
}

fn spectral_scale<T: Real>(eig: &[T]) -> T {
    eig.iter().fold(T::min_positive_value(), |m, &x| m.max(x.abs()))
}

fn find_clusters<T: Real>(eig: &[T], tol: &Tolerances<T>) -> Vec<(usize, usize)> {
    let threshold = tol.cluster * spectral_scale(eig);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=eig.len() {
        if i == eig.len() || eig[i] - eig[i - 1] > threshold {
            if i - start > 1 {
                out.push((start, i - start));
            }
            start = i;
        }
    }
    out
}

fn analyse_point<T: Real>(family: &impl HermitianFamily<T>, t: T, tol: &Tolerances<T>) -> Result<Point<T>> {
    let a = family.eval(t)?;
    let e = hermitian_eig(&a)?;
    let d = derivative(family, t, tol)?;
    let scale = prefactor(family);
    let n = e.dim();
    let clusters = find_clusters(&e.eigenvalues, tol);
    let mut right = vec![T::zero(); n];
    let mut in_cluster = vec![false; n];
    for &(s, len) in &clusters {
        let cols: Vec<Vec<Cplx<T>>> = (s..s + len).map(|k| e.vector(k)).collect();
        let block = d.compress(&Matrix::from_columns(&cols))?.hermitian_part();
        let rho = hermitian_eig(&block)?.eigenvalues;
        for q in 0..len {
            right[s + q] = rho[q] * scale;
            in_cluster[s + q] = true;
        }
    }
    for k in (0..n).filter(|&k| !in_cluster[k]) {
        let w = e.vector(k);
        right[k] = inner(&w, &d.matvec(&w)).re * scale;
    }
    let mut left = right.clone();
    for &(s, len) in &clusters {
        // Coming from the left, the lowest eigenvalue is the one falling
        // fastest into the cluster.
        left[s..s + len].reverse();
    }
    Ok(Point {
        eig: e.eigenvalues,
        clusters,
        right,
        left,
    })
}

/// Golden-section search for the smallest spread of ranks
/// `start..start+len` on `[a, b]`; returns the best `(t, spread)` seen.
fn narrowest<T: Real>(
    family: &impl HermitianFamily<T>,
    mut a: T,
    mut b: T,
    start: usize,
    len: usize,
) -> Result<(T, T, Vec<T>)> {
    let spread = |t: T| -> Result<(T, Vec<T>)> {
        let e = hermitian_eig(&family.eval(t)?)?.eigenvalues;
        Ok((e[start + len - 1] - e[start], e))
    };
    let mut best = {
        let (s, e) = spread(a)?;
        (a, s, e)
    };
    let consider = |t: T, s: T, e: Vec<T>, best: &mut (T, T, Vec<T>)| {
        if s < best.1 {
            *best = (t, s, e);
        }
    };
    let (sb, eb) = spread(b)?;
    consider(b, sb, eb, &mut best);
    let ratio = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, ec) = spread(c)?;
    consider(c, fc, ec, &mut best);
    let (mut fd, ed) = spread(d)?;
    consider(d, fd, ed, &mut best);
    for _ in 0..200 {
        let width = T::lit(4.0) * T::epsilon() * T::one().max(a.abs()).max(b.abs());
        if b - a <= width {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            let (f, e) = spread(c)?;
            fc = f;
            consider(c, f, e, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            let (f, e) = spread(d)?;
            fd = f;
            consider(d, f, e, &mut best);
        }
    }
    Ok(best)
}

/// A crossing found and matched before the sequential gluing pass.
struct Event<T> {
    t_star: T,
    on_grid: bool,
    start: usize,
    compressed: Vec<T>,
    report: MatchReport<T>,
}

fn resolve<T: Real>(
    family: &impl HermitianFamily<T>,
    t_star: T,
    eig: &[T],
    start: usize,
    len: usize,
    on_grid: bool,
    order: Order,
    tol: &Tolerances<T>,
) -> Result<Event<T>> {
    let gamma = Contour::around(eig[start], eig[start + len - 1], eig, DEFAULT_NODES)?;
    let left = one_sided_derivatives(family, t_star, &gamma, Side::Left, tol)?;
    let right = one_sided_derivatives(family, t_star, &gamma, Side::Right, tol)?;
    if left.rank != len {
        return Err(Error::RankDrift {
            t: t_star.as_f64(),
            expected: len,
            found: left.rank,
        });
    }
    let second = order == Order::Second;
    let report = match_crossing(
        t_star,
        &left.first,
        &right.first,
        order,
        second.then_some(left.second.as_slice()),
        second.then_some(right.second.as_slice()),
        tol.deriv_tie,
    )?;
    Ok(Event {
        t_star,
        on_grid,
        start,
        compressed: left.compressed,
        report,
    })
}

fn overlaps(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 < b.0 + b.1 && b.0 < a.0 + a.1
}

/// Crossings exactly at grid point `k`.
fn on_grid_events<T: Real>(
    family: &impl HermitianFamily<T>,
    grid: &[T],
    points: &[Point<T>],
    k: usize,
    order: Order,
    tol: &Tolerances<T>,
) -> Result<Vec<Event<T>>> {
    let g = grid.len();
    let mut out = Vec::new();
    for &c in &points[k].clusters {
        if k == 0 || k + 1 == g {
            continue;
        }
        let mut persistent = false;
        for nb in [k - 1, k + 1] {
            for &o in &points[nb].clusters {
                if o == c {
                    persistent = true;
                } else if overlaps(o, c) {
                    return Err(Error::GapCollapse {
                        t: grid[k].as_f64(),
                        detail: format!(
                            "ranks {}..{} collide here but ranks {}..{} at t = {}; refine the grid",
                            c.0,
                            c.0 + c.1,
                            o.0,
                            o.0 + o.1,
                            grid[nb]
                        ),
                    });
                }
            }
        }
        if persistent {
            continue;
        }
        let (t_star, _, eig) = narrowest(family, grid[k - 1], grid[k + 1], c.0, c.1)?;
        out.push(resolve(family, t_star, &eig, c.0, c.1, true, order, tol)?);
    }
    Ok(out)
}

/// Crossings strictly inside `(t_k, t_{k+1})`, in increasing `t*`, plus
/// warnings for near-misses.
fn interval_events<T: Real>(
    family: &impl HermitianFamily<T>,
    grid: &[T],
    points: &[Point<T>],
    k: usize,
    order: Order,
    tol: &Tolerances<T>,
) -> Result<(Vec<Event<T>>, Vec<String>)> {
    let (p, q) = (&points[k], &points[k + 1]);
    let dt = grid[k + 1] - grid[k];
    let scale = prefactor(family);
    let n = p.eig.len();
    let clustered = |pt: &Point<T>, i: usize| pt.clusters.iter().any(|&(s, l)| i >= s && i + 1 < s + l);
    let mut found: Vec<(T, usize)> = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..n.saturating_sub(1) {
        if clustered(p, i) || clustered(q, i) {
            continue;
        }
        let ahead = |pt: &Point<T>, j: usize, s: T| pt.eig[j] + s * pt.right[j] / scale;
        let behind = |pt: &Point<T>, j: usize, s: T| pt.eig[j] - s * pt.left[j] / scale;
        let flips = ahead(p, i, dt) > ahead(p, i + 1, dt) || behind(q, i, dt) > behind(q, i + 1, dt);
        if !flips {
            continue;
        }
        let (t_star, gap, eig) = narrowest(family, grid[k], grid[k + 1], i, 2)?;
        if gap <= tol.cluster * spectral_scale(&eig) {
            found.push((t_star, i));
        } else {
            warnings.push(format!(
                "avoided crossing of ranks {i} and {} near t = {:.6e} (minimal gap {:.3e})",
                i + 1,
                t_star.as_f64(),
                (gap * scale).as_f64()
            ));
        }
    }

    // Adjacent pairs meeting at the same point form one larger cluster.
    let mut groups: Vec<(T, usize, usize)> = Vec::new();
    for (t_star, i) in found {
        match groups.last_mut() {
            Some((t0, s, len)) if *s + *len - 1 == i && (t_star - *t0).abs() <= T::lit(1e-6) * dt => {
                *len += 1;
            }
            _ => groups.push((t_star, i, 2)),
        }
    }
    let mut events = Vec::new();
    for (t_star, s, len) in groups {
        let (t_star, eig) = if len == 2 {
            (t_star, hermitian_eig(&family.eval(t_star)?)?.eigenvalues)
        } else {
            let (t, _, e) = narrowest(family, grid[k], grid[k + 1], s, len)?;
            (t, e)
        };
        events.push(resolve(family, t_star, &eig, s, len, false, order, tol)?);
    }
    events.sort_by(|a, b| a.t_star.partial_cmp(&b.t_star).unwrap());
    Ok((events, warnings))
}

/// Tracks all eigenvalue branches of `family` on `grid_size` equispaced
/// points of `[t0, t1]`.
pub fn track_branches<T: Real>(
    family: &impl HermitianFamily<T>,
    (t0, t1): (T, T),
    grid_size: usize,
    order: Order,
    tol: &Tolerances<T>,
) -> Result<BranchSet<T>> {
    let grid = uniform_grid(t0, t1, grid_size)?;
    track_on_grid(family, grid, order, tol)
}

/// Tracks branches on an explicit, strictly increasing grid.
///
/// Spectral data and crossing analysis run in parallel per grid point and
/// interval; the gluing pass is a sequential left-to-right fold.
pub fn track_on_grid<T: Real>(
    family: &impl HermitianFamily<T>,
    grid: Vec<T>,
    order: Order,
    tol: &Tolerances<T>,
) -> Result<BranchSet<T>> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("grid must be strictly increasing with at least 2 points".into()));
    }
    let points: Vec<Point<T>> = grid
        .par_iter()
        .map(|&t| analyse_point(family, t, tol))
        .collect::<Result<_>>()?;
    let g = grid.len();
    let on_grid: Vec<Vec<Event<T>>> = (0..g)
        .into_par_iter()
        .map(|k| on_grid_events(family, &grid, &points, k, order, tol))
        .collect::<Result<_>>()?;
    let between: Vec<(Vec<Event<T>>, Vec<String>)> = (0..g - 1)
        .into_par_iter()
        .map(|k| interval_events(family, &grid, &points, k, order, tol))
        .collect::<Result<_>>()?;

    let scale = prefactor(family);
    let n = family.dim();
    // rank_of[j]: current eigenvalue rank of branch j.
    let mut rank_of: Vec<usize> = (0..n).collect();
    let mut values = Vec::with_capacity(g);
    let mut derivs = Vec::with_capacity(g);
    let mut crossings = Vec::new();
    let mut warnings = Vec::new();

    let apply = |ev: &Event<T>, k: usize, rank_of: &mut Vec<usize>, crossings: &mut Vec<Crossing<T>>| {
        let len = ev.report.pairing.len();
        let mut branches = vec![0; len];
        for (j, r) in rank_of.iter_mut().enumerate() {
            if *r >= ev.start && *r < ev.start + len {
                let q = *r - ev.start;
                branches[q] = j;
                *r = ev.start + ev.report.pairing[q];
            }
        }
        crossings.push(Crossing {
            t_star: ev.t_star,
            grid_index: k,
            on_grid: ev.on_grid,
            start_rank: ev.start,
            branches,
            compressed: ev.compressed.clone(),
            report: ev.report.clone(),
        });
    };

    for k in 0..g {
        for ev in &on_grid[k] {
            apply(ev, k, &mut rank_of, &mut crossings);
        }
        let pt = &points[k];
        values.push(rank_of.iter().map(|&r| pt.eig[r] * scale).collect());
        derivs.push(rank_of.iter().map(|&r| pt.right[r]).collect());
        if k + 1 < g {
            let (events, w) = &between[k];
            warnings.extend(w.iter().cloned());
            for ev in events {
                apply(ev, k, &mut rank_of, &mut crossings);
            }
        }
    }

    Ok(BranchSet {
        grid,
        values,
        derivs,
        crossings,
        order,
        warnings,
    })
}
