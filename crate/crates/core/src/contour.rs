//! Contour calculus around eigenvalue clusters.
//!
//! For a positively oriented circle `gamma` in the resolvent set of `A`,
//!
//! ```text
//! P   = -(1/2 pi i) ∮ (A - z)^{-1} dz
//! s_p = -(1/2 pi i) Tr ∮ z^p (A - z)^{-1} dz  =  Σ_{λ inside} λ^p
//! ```
//!
//! Both integrals are evaluated with the trapezoidal rule on `M` equispaced
//! nodes, which converges geometrically for these analytic integrands. `M`
//! is doubled (reusing the previous nodes) until two consecutive levels
//! agree. All quantities live in the family's unit scale.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{prefactor, HermitianFamily};
use crate::linalg::{hermitian_eig, numerical_rank, Lu, Matrix};
use crate::linalg::hessenberg::monic_roots;
use crate::scalar::{re, Cplx, Real};
use crate::tolerances::Tolerances;

pub const DEFAULT_NODES: usize = 64;
pub const MAX_NODES: usize = 1024;
pub const MIN_NODES: usize = 8;

/// Positively oriented circle with a trapezoidal node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour<T> {
    pub center: Cplx<T>,
    pub radius: T,
    pub nodes: usize,
}

impl<T: Real> Contour<T> {
    pub fn new(center: Cplx<T>, radius: T, nodes: usize) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidContour(format!("radius must be positive, got {radius}")));
        }
        if nodes < MIN_NODES {
            return Err(Error::InvalidContour(format!(
                "need at least {MIN_NODES} nodes, got {nodes}"
            )));
        }
        Ok(Self { center, radius, nodes })
    }

    /// Circle centred on the real axis with the default node count.
    pub fn real(center: T, radius: T) -> Result<Self> {
        Self::new(re(center), radius, DEFAULT_NODES)
    }

    /// Builds the contour and checks that every point of `spectrum` keeps a
    /// distance of at least `margin * radius` from the circle.
    pub fn separated(center: Cplx<T>, radius: T, nodes: usize, spectrum: &[T], margin: T) -> Result<Self> {
        let c = Self::new(center, radius, nodes)?;
        c.check_separation(spectrum, margin)?;
        Ok(c)
    }

    pub fn distance_to(&self, x: T) -> T {
        ((re(x) - self.center).norm() - self.radius).abs()
    }

    pub fn check_separation(&self, spectrum: &[T], margin: T) -> Result<()> {
        for &x in spectrum {
            if self.distance_to(x) < margin * self.radius {
                return Err(Error::InvalidContour(format!(
                    "eigenvalue {x} within {} of the circle (center {}, radius {})",
                    margin * self.radius,
                    self.center,
                    self.radius
                )));
            }
        }
        Ok(())
    }

    pub fn encloses(&self, x: T) -> bool {
        (re(x) - self.center).norm() < self.radius
    }

    /// Smallest real circle around `[lo, hi]` that stays clear of every
    /// other value in `spectrum`: the radius sits halfway between the
    /// cluster and its nearest outside neighbour.
    pub fn around(lo: T, hi: T, spectrum: &[T], nodes: usize) -> Result<Self> {
        let center = (lo + hi) * T::lit(0.5);
        let inner = (hi - lo) * T::lit(0.5);
        let outside = spectrum
            .iter()
            .filter(|&&x| x < lo || x > hi)
            .map(|&x| (x - center).abs())
            .fold(T::infinity(), |m, d| m.min(d));
        let radius = if outside.is_finite() {
            (inner + outside) * T::lit(0.5)
        } else {
            inner.max(T::one()) * T::lit(2.0)
        };
        let radius = if radius > T::zero() {
            radius
        } else {
            T::one()
        };
        let c = Self::new(re(center), radius, nodes)?;
        if spectrum.iter().any(|&x| x >= lo && x <= hi && !c.encloses(x)) {
            return Err(Error::InvalidContour("cluster not enclosed".into()));
        }
        Ok(c)
    }

    /// Node `k` of `m` and its trapezoidal weight for
    /// `-(1/2 pi i) ∮ f(z) dz ≈ Σ w_k f(z_k)`.
    fn node(&self, k: usize, m: usize) -> (Cplx<T>, Cplx<T>) {
        let theta = T::TAU() * T::lit(k as f64) / T::lit(m as f64);
        let e = Complex::new(theta.cos(), theta.sin());
        let z = self.center + e * self.radius;
        let w = -e * (self.radius / T::lit(m as f64));
        (z, w)
    }
}

/// Which power moments to accumulate alongside the projector.
#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    p_max: usize,
    shift: Cplx<T>,
    scale: T,
}

#[derive(Debug, Clone)]
struct Quadrature<T> {
    projector: Matrix<T>,
    /// `Σ ((λ - shift)/scale)^p` for `p = 0..=p_max`.
    sums: Vec<Cplx<T>>,
    nodes: usize,
}

fn partial_sum<T: Real>(
    a: &Matrix<T>,
    contour: &Contour<T>,
    m: usize,
    indices: &[usize],
    moments: &Moments<T>,
    tol: &Tolerances<T>,
) -> Result<(Matrix<T>, Vec<Cplx<T>>)> {
    let n = a.rows();
    let identity = Matrix::identity(n);
    let contributions: Vec<(Matrix<T>, Vec<Cplx<T>>)> = indices
        .par_iter()
        .map(|&k| {
            let (z, w) = contour.node(k, m);
            let r = Lu::factor(&a.shifted(z), tol.resolvent_guard, z)?.solve(&identity)?;
            let tr = r.trace();
            let u = (z - moments.shift) / moments.scale;
            let mut pw = re(T::one());
            let mut s = Vec::with_capacity(moments.p_max + 1);
            for _ in 0..=moments.p_max {
                s.push(w * pw * tr);
                pw *= u;
            }
            Ok((r.scale_complex(w), s))
        })
        .collect::<Result<_>>()?;
    let mut proj = Matrix::zeros(n, n);
    let mut sums = vec![re(T::zero()); moments.p_max + 1];
    for (r, s) in &contributions {
        proj.axpy(re(T::one()), r);
        for (acc, v) in sums.iter_mut().zip(s) {
            *acc += *v;
        }
    }
    Ok((proj, sums))
}

/// Trapezoidal rule with `m` nodes, no refinement.
fn integrate_fixed<T: Real>(
    a: &Matrix<T>,
    contour: &Contour<T>,
    m: usize,
    moments: &Moments<T>,
    tol: &Tolerances<T>,
) -> Result<Quadrature<T>> {
    let idx: Vec<usize> = (0..m).collect();
    let (projector, sums) = partial_sum(a, contour, m, &idx, moments, tol)?;
    Ok(Quadrature {
        projector,
        sums,
        nodes: m,
    })
}

/// Doubles the node count until the projector and the moments stabilise.
fn integrate<T: Real>(
    a: &Matrix<T>,
    contour: &Contour<T>,
    moments: &Moments<T>,
    tol: &Tolerances<T>,
) -> Result<Quadrature<T>> {
    let half = T::lit(0.5);
    let mut cur = integrate_fixed(a, contour, contour.nodes, moments, tol)?;
    loop {
        let m2 = cur.nodes * 2;
        let odd: Vec<usize> = (1..m2).step_by(2).collect();
        let (p_odd, s_odd) = partial_sum(a, contour, m2, &odd, moments, tol)?;
        let mut projector = cur.projector.scale(half);
        projector.axpy(re(T::one()), &p_odd);
        let sums: Vec<Cplx<T>> = cur.sums.iter().zip(&s_odd).map(|(&c, &o)| c * half + o).collect();

        let change = (&projector - &cur.projector).frobenius_norm();
        let sums_ok = sums
            .iter()
            .zip(&cur.sums)
            .all(|(n, o)| (*n - *o).norm() <= tol.proj * (T::one() + n.norm()));
        let next = Quadrature {
            projector,
            sums,
            nodes: m2,
        };
        if change <= tol.proj && sums_ok {
            return Ok(next);
        }
        if m2 >= MAX_NODES.max(contour.nodes) {
            return Err(Error::QuadratureNotConverged {
                nodes: m2,
                change: change.as_f64(),
            });
        }
        cur = next;
    }
}

fn no_moments<T: Real>() -> Moments<T> {
    Moments {
        p_max: 0,
        shift: re(T::zero()),
        scale: T::one(),
    }
}

/// Riesz projector of `A(t)` for the eigenvalues inside `gamma`.
pub fn riesz_projector<T: Real>(
    family: &impl HermitianFamily<T>,
    t: T,
    gamma: &Contour<T>,
    tol: &Tolerances<T>,
) -> Result<Matrix<T>> {
    riesz_projector_of(&family.eval(t)?, gamma, tol)
}

/// Riesz projector of a fixed matrix (unit scale).
pub fn riesz_projector_of<T: Real>(a: &Matrix<T>, gamma: &Contour<T>, tol: &Tolerances<T>) -> Result<Matrix<T>> {
    Ok(integrate(a, gamma, &no_moments(), tol)?.projector)
}

/// Projector from exactly `nodes` trapezoidal nodes; used to audit the
/// refinement loop.
pub fn riesz_projector_with_nodes<T: Real>(
    a: &Matrix<T>,
    gamma: &Contour<T>,
    nodes: usize,
    tol: &Tolerances<T>,
) -> Result<Matrix<T>> {
    Ok(integrate_fixed(a, gamma, nodes, &no_moments(), tol)?.projector)
}

/// Power sums `s_p = Σ_{λ inside} λ^p`, `p = 0..=p_max`, at unit scale.
pub fn newton_sums<T: Real>(
    family: &impl HermitianFamily<T>,
    t: T,
    gamma: &Contour<T>,
    p_max: usize,
    tol: &Tolerances<T>,
) -> Result<Vec<T>> {
    newton_sums_of(&family.eval(t)?, gamma, p_max, tol)
}

pub fn newton_sums_of<T: Real>(a: &Matrix<T>, gamma: &Contour<T>, p_max: usize, tol: &Tolerances<T>) -> Result<Vec<T>> {
    let moments = Moments {
        p_max,
        shift: re(T::zero()),
        scale: T::one(),
    };
    real_parts(&integrate(a, gamma, &moments, tol)?.sums, tol)
}

fn real_parts<T: Real>(sums: &[Cplx<T>], tol: &Tolerances<T>) -> Result<Vec<T>> {
    sums.iter()
        .map(|s| {
            if s.im.abs() > tol.imag * (T::one() + s.re.abs()) {
                Err(Error::RootsNotReal { imag: s.im.as_f64() })
            } else {
                Ok(s.re)
            }
        })
        .collect()
}

/// Elementary symmetric polynomials `σ_1..σ_N` from power sums
/// `s_0..s_N` via Newton's identities.
pub fn newton_to_sigma<T: Real>(s: &[T], n: usize) -> Result<Vec<T>> {
    if s.len() < n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: s.len(),
        });
    }
    let mut sigma = vec![T::one()];
    for k in 1..=n {
        let mut acc = T::zero();
        for i in 1..=k {
            let term = sigma[k - i] * s[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        sigma.push(acc / T::lit(k as f64));
    }
    sigma.remove(0);
    Ok(sigma)
}

/// Real roots (ascending, with multiplicity) of
/// `x^N - σ_1 x^{N-1} + σ_2 x^{N-2} - ... + (-1)^N σ_N`.
pub fn cluster_eigenvalues<T: Real>(sigma: &[T], n: usize, tol: &Tolerances<T>) -> Result<Vec<T>> {
    if sigma.len() < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sigma.len(),
        });
    }
    // Coefficient of x^{N-k} is (-1)^k σ_k.
    let coeffs: Vec<T> = (0..n)
        .map(|j| {
            let k = n - j;
            if k % 2 == 0 {
                sigma[k - 1]
            } else {
                -sigma[k - 1]
            }
        })
        .collect();
    let roots = monic_roots(&coeffs)?;
    let scale = roots.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let worst = roots.iter().fold(T::zero(), |m, z| m.max(z.im.abs()));
    if worst > tol.root_imag * (T::one() + scale) {
        return Err(Error::RootsNotReal { imag: worst.as_f64() });
    }
    let mut out: Vec<T> = roots.into_iter().map(|z| z.re).collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(out)
}

/// Projector, power sums and recovered eigenvalues for one contour at one `t`.
#[derive(Debug, Clone)]
pub struct SpectralCluster<T> {
    pub t: T,
    pub projector: Matrix<T>,
    pub rank: usize,
    /// `s_0..s_{2N}` at unit scale.
    pub newton_sums: Vec<T>,
    /// `σ_1..σ_N` at unit scale.
    pub sigma: Vec<T>,
    /// Recovered eigenvalues, ascending, unit scale.
    pub eigenvalues: Vec<T>,
    pub prefactor: T,
    pub nodes: usize,
}

impl<T: Real> SpectralCluster<T> {
    /// Eigenvalues at true scale.
    pub fn scaled_eigenvalues(&self) -> Vec<T> {
        self.eigenvalues.iter().map(|&x| x * self.prefactor).collect()
    }

    /// `||P^2 - P||_F`.
    pub fn idempotency_defect(&self) -> T {
        (&(&self.projector * &self.projector) - &self.projector).frobenius_norm()
    }

    /// `||P - P*||_F`.
    pub fn hermiticity_defect(&self) -> T {
        (&self.projector - &self.projector.adjoint()).frobenius_norm()
    }
}

/// Full cluster analysis of `A(t)` inside `gamma`.
///
/// Eigenvalues are recovered from power sums of the shifted and scaled
/// variable `(λ - c)/r`, which keeps the polynomial well conditioned; the
/// raw sums and `σ` are reported alongside.
pub fn spectral_cluster<T: Real>(
    family: &impl HermitianFamily<T>,
    t: T,
    gamma: &Contour<T>,
    tol: &Tolerances<T>,
) -> Result<SpectralCluster<T>> {
    let a = family.eval(t)?;
    let mut cluster = spectral_cluster_of(&a, gamma, tol)?;
    cluster.t = t;
    cluster.prefactor = prefactor(family);
    Ok(cluster)
}

pub fn spectral_cluster_of<T: Real>(a: &Matrix<T>, gamma: &Contour<T>, tol: &Tolerances<T>) -> Result<SpectralCluster<T>> {
    let probe = integrate(a, gamma, &no_moments(), tol)?;
    let trace = probe.projector.trace().re;
    let rank = trace.round().to_usize().unwrap_or(0);
    let counted = numerical_rank(&probe.projector, T::lit(0.5))?;
    if counted != rank {
        return Err(Error::RankDrift {
            t: f64::NAN,
            expected: rank,
            found: counted,
        });
    }

    let raw = Moments {
        p_max: 2 * rank,
        shift: re(T::zero()),
        scale: T::one(),
    };
    let quad = integrate(a, gamma, &raw, tol)?;
    let newton_sums = real_parts(&quad.sums, tol)?;
    let sigma = newton_to_sigma(&newton_sums, rank)?;

    let normalized = Moments {
        p_max: rank,
        shift: gamma.center,
        scale: gamma.radius,
    };
    let nq = integrate(a, gamma, &normalized, tol)?;
    let ns = real_parts(&nq.sums, tol)?;
    let ns_sigma = newton_to_sigma(&ns, rank)?;
    let eigenvalues = cluster_eigenvalues(&ns_sigma, rank, tol)?
        .into_iter()
        .map(|u| gamma.center.re + gamma.radius * u)
        .collect();

    Ok(SpectralCluster {
        t: T::zero(),
        projector: quad.projector,
        rank,
        newton_sums,
        sigma,
        eigenvalues,
        prefactor: T::one(),
        nodes: quad.nodes.max(nq.nodes),
    })
}

/// Projector rank at `samples` equispaced points of `[t - half, t + half]`;
/// fails with [`Error::RankDrift`] unless all agree.
pub fn rank_in_box<T: Real>(
    family: &impl HermitianFamily<T>,
    t: T,
    half_width: T,
    samples: usize,
    gamma: &Contour<T>,
    tol: &Tolerances<T>,
) -> Result<usize> {
    let points: Vec<T> = (0..samples)
        .map(|k| {
            if samples == 1 {
                t
            } else {
                t - half_width + (half_width + half_width) * T::lit(k as f64) / T::lit((samples - 1) as f64)
            }
        })
        .collect();
    let ranks: Vec<usize> = points
        .iter()
        .map(|&s| {
            let p = riesz_projector(family, s, gamma, tol)?;
            numerical_rank(&p, T::lit(0.5))
        })
        .collect::<Result<_>>()?;
    let first = ranks.first().copied().unwrap_or(0);
    for (&s, &r) in points.iter().zip(&ranks) {
        if r != first {
            return Err(Error::RankDrift {
                t: s.as_f64(),
                expected: first,
                found: r,
            });
        }
    }
    Ok(first)
}

/// Trace of a low-rank operator computed on its range.
#[derive(Debug, Clone)]
pub struct ReducedTrace<T> {
    pub trace: Cplx<T>,
    /// `F* T F` in the orthonormal range basis `F`.
    pub block: Matrix<T>,
    /// `F`, `m x N`.
    pub basis: Matrix<T>,
}

/// Trace of `T` via reduction to an `N`-dimensional orthonormal basis of its
/// range (leading left singular vectors).
pub fn lowrank_trace<T: Real>(op: &Matrix<T>, n: usize) -> Result<ReducedTrace<T>> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    let rank_tol = T::tol(1e-8, 1e3) * T::one().max(op.frobenius_norm());
    let rank = numerical_rank(op, rank_tol)?;
    if rank > n {
        return Err(Error::RankExceeds { rank, limit: n });
    }
    let gram = (op * &op.adjoint()).hermitian_part();
    let e = hermitian_eig(&gram)?;
    let m = op.rows();
    let cols: Vec<Vec<Cplx<T>>> = (0..n.min(m)).map(|k| e.vector(m - 1 - k)).collect();
    let basis = Matrix::from_columns(&cols);
    reduced_trace_in_basis(op, &basis)
}

/// `tr(F* T F)` for a caller-supplied orthonormal basis `F` (e.g. the
/// range basis of a reference `T(0)`).
pub fn reduced_trace_in_basis<T: Real>(op: &Matrix<T>, basis: &Matrix<T>) -> Result<ReducedTrace<T>> {
    let block = op.compress(basis)?;
    Ok(ReducedTrace {
        trace: block.trace(),
        block,
        basis: basis.clone(),
    })
}
