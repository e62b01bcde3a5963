use crate::contour::{riesz_projector, riesz_projector_of, Contour};
use crate::error::{Error, Result};
use crate::family::{derivative, prefactor, HermitianFamily};
use crate::linalg::{hermitian_eig, inner, numerical_rank, vec_norm, Matrix};
use crate::scalar::{Cplx, Real};
use crate::tolerances::Tolerances;

/// Which side of a crossing a probe looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign<T: Real>(self) -> T {
        match self {
            Side::Left => -T::one(),
            Side::Right => T::one(),
        }
    }
}

/// Derivative data of the cluster enclosed by a contour, seen from one side.
///
/// All values are at true scale.
#[derive(Debug, Clone, PartialEq)]
pub struct OneSided<T> {
    pub t_star: T,
    pub side: Side,
    pub rank: usize,
    /// Spectrum of `P A' P` on the range of `P`, ascending. Identical on
    /// both sides.
    pub compressed: Vec<T>,
    /// Five-point one-sided slope of each rank (ascending order of the
    /// enclosed eigenvalues on this side).
    pub first: Vec<T>,
    /// Five-point one-sided second derivative of each rank.
    pub second: Vec<T>,
}

impl<T: Real> OneSided<T> {
    /// Largest distance between the stencil slopes and the compressed
    /// spectrum, both sorted.
    pub fn stencil_defect(&self) -> T {
        let mut s = self.first.clone();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s.iter()
            .zip(&self.compressed)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Orthonormal basis of the range of a Hermitian projector of rank `rank`.
pub fn range_basis<T: Real>(p: &Matrix<T>, rank: usize) -> Result<Matrix<T>> {
    let e = hermitian_eig(&p.hermitian_part())?;
    let m = e.dim();
    let cols: Vec<Vec<Cplx<T>>> = (m - rank..m).map(|k| e.vector(k)).collect();
    Ok(Matrix::from_columns(&cols))
}

/// Eigenvalues of `P(t) A'(t)` restricted to the range of `P(t)`, ascending
/// and at true scale, for the projector of `gamma`.
pub fn compressed_derivative<T: Real>(
    family: &impl HermitianFamily<T>,
    t: T,
    gamma: &Contour<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<T>> {
    let a = family.eval(t)?;
    let p = riesz_projector_of(&a, gamma, tol)?;
    let rank = numerical_rank(&p, T::lit(0.5))?;
    if rank == 0 {
        return Ok(Vec::new());
    }
    let basis = range_basis(&p, rank)?;
    let block = derivative(family, t, tol)?.compress(&basis)?.hermitian_part();
    let scale = prefactor(family);
    Ok(hermitian_eig(&block)?.eigenvalues.into_iter().map(|x| x * scale).collect())
}

/// One-sided derivatives of the eigenvalues enclosed by `gamma` at `t_star`.
///
/// The compressed-operator spectrum gives the multiset; the five-point
/// stencils resolve it per rank. The projector rank is checked at the far
/// end of the probe window and the enclosed count at every probe.
pub fn one_sided_derivatives<T: Real>(
    family: &impl HermitianFamily<T>,
    t_star: T,
    gamma: &Contour<T>,
    side: Side,
    tol: &Tolerances<T>,
) -> Result<OneSided<T>> {
    let a = family.eval(t_star)?;
    let p = riesz_projector_of(&a, gamma, tol)?;
    let rank = numerical_rank(&p, T::lit(0.5))?;
    let scale = prefactor(family);
    let compressed = if rank == 0 {
        Vec::new()
    } else {
        let basis = range_basis(&p, rank)?;
        let block = derivative(family, t_star, tol)?.compress(&basis)?.hermitian_part();
        hermitian_eig(&block)?.eigenvalues.into_iter().map(|x| x * scale).collect()
    };

    let sigma: T = side.sign();
    let h = tol.step(t_star);
    let h2 = tol.step2(t_star);
    let far = t_star + sigma * T::lit(4.0) * h.max(h2);
    let far_rank = numerical_rank(&riesz_projector(family, far, gamma, tol)?, T::lit(0.5))?;
    if far_rank != rank {
        return Err(Error::BoxTooLarge {
            t: far.as_f64(),
            expected: rank,
            found: far_rank,
        });
    }

    let inside = |t: T| -> Result<Vec<T>> {
        let e = hermitian_eig(&family.eval(t)?)?;
        let v: Vec<T> = e.eigenvalues.into_iter().filter(|&x| gamma.encloses(x)).collect();
        if v.len() != rank {
            return Err(Error::RankDrift {
                t: t.as_f64(),
                expected: rank,
                found: v.len(),
            });
        }
        Ok(v)
    };
    let centre = inside(t_star)?;
    // At the crossing every rank shares one value; the mean is the most
    // accurate estimate of it.
    let f0 = if rank == 0 {
        T::zero()
    } else {
        centre.iter().copied().sum::<T>() / T::lit(rank as f64)
    };
    let probes = |step: T| -> Result<Vec<Vec<T>>> {
        (1..=4)
            .map(|j| inside(t_star + sigma * T::lit(j as f64) * step))
            .collect()
    };
    let f = probes(h)?;
    let g = probes(h2)?;
    let c = |x: f64| T::lit(x);
    let first = (0..rank)
        .map(|q| {
            sigma * (c(-25.0) * f0 + c(48.0) * f[0][q] - c(36.0) * f[1][q] + c(16.0) * f[2][q] - c(3.0) * f[3][q])
                / (c(12.0) * h)
                * scale
        })
        .collect();
    let second = (0..rank)
        .map(|q| {
            (c(35.0) * f0 - c(104.0) * g[0][q] + c(114.0) * g[1][q] - c(56.0) * g[2][q] + c(11.0) * g[3][q])
                / (c(12.0) * h2 * h2)
                * scale
        })
        .collect();

    Ok(OneSided {
        t_star,
        side,
        rank,
        compressed,
        first,
        second,
    })
}

/// `<A'(t) w, w>` at true scale for a unit eigenvector `w` of `A(t)`.
pub fn rayleigh_derivative<T: Real>(
    family: &impl HermitianFamily<T>,
    t: T,
    w: &[Cplx<T>],
    tol: &Tolerances<T>,
) -> Result<T> {
    if w.len() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: w.len(),
        });
    }
    let norm = vec_norm(w);
    if (norm - T::one()).abs() > T::tol(1e-8, 100.0) {
        return Err(Error::InvalidArgument(format!("vector norm {norm} is not 1")));
    }
    let a = family.eval(t)?;
    let aw = a.matvec(w);
    let lambda = inner(w, &aw).re;
    let residual = aw
        .iter()
        .zip(w)
        .map(|(x, y)| (*x - *y * lambda).norm_sqr())
        .sum::<T>()
        .sqrt();
    if residual > T::lit(10.0) * tol.eig * T::one().max(a.frobenius_norm()) {
        return Err(Error::NotEigenvector {
            residual: residual.as_f64(),
        });
    }
    let d = derivative(family, t, tol)?;
    let value = inner(w, &d.matvec(w));
    if value.im.abs() > T::tol(1e-10, 100.0) * (T::one() + value.re.abs()) {
        return Err(Error::NotHermitian {
            defect: value.im.as_f64(),
        });
    }
    Ok(value.re * prefactor(family))
}
