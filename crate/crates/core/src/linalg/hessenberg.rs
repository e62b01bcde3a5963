//! Eigenvalues of real upper Hessenberg matrices (Francis double-shift QR).
//! Used for companion matrices when recovering polynomial roots.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

const MAX_ITS: usize = 60;

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of the real upper Hessenberg matrix given row-major in `h`
/// (`n x n`). Order is unspecified.
pub fn hessenberg_eigenvalues<T: Real>(h: &[T], n: usize) -> Result<Vec<Cplx<T>>> {
    assert_eq!(h.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based working copy keeps the classic index arithmetic readable.
    let w = n + 1;
    let mut a = vec![T::zero(); w * w];
    for i in 0..n {
        for j in 0..n {
            a[(i + 1) * w + j + 1] = h[i * n + j];
        }
    }
    let at = |i: usize, j: usize| i * w + j;
    let mut wr = vec![T::zero(); w];
    let mut wi = vec![T::zero(); w];

    let mut anorm = T::zero();
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[at(i, j)].abs();
        }
    }

    let half = T::lit(0.5);
    let mut nn = n;
    let mut t = T::zero();
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() + s == s {
                    a[at(l, l - 1)] = T::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[at(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = T::zero();
                nn -= 1;
            } else {
                let mut y = a[at(nn - 1, nn - 1)];
                let mut ww = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
                if l == nn - 1 {
                    let p = half * (y - x);
                    let q = p * p + ww;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= T::zero() {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != T::zero() {
                            wr[nn] = x - ww / z;
                        }
                        wi[nn - 1] = T::zero();
                        wi[nn] = T::zero();
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITS {
                        return Err(Error::NoConvergence {
                            what: "Hessenberg QR",
                            iterations: MAX_ITS,
                        });
                    }
                    if its == 10 || its == 20 {
                        t += x;
                        for i in 1..=nn {
                            a[at(i, i)] -= x;
                        }
                        let s = a[at(nn, nn - 1)].abs() + a[at(nn - 1, nn - 2)].abs();
                        x = T::lit(0.75) * s;
                        y = x;
                        ww = T::lit(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    let (mut p, mut q, mut r);
                    let mut z;
                    loop {
                        z = a[at(m, m)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - ww) / a[at(m + 1, m)] + a[at(m, m + 1)];
                        q = a[at(m + 1, m + 1)] - z - rr - ss;
                        r = a[at(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[at(i, i - 2)] = T::zero();
                        if i != m + 2 {
                            a[at(i, i - 3)] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[at(k, k - 1)];
                            q = a[at(k + 1, k - 1)];
                            r = T::zero();
                            if k != nn - 1 {
                                r = a[at(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != T::zero() {
                            if k == m {
                                if l != m {
                                    a[at(k, k - 1)] = -a[at(k, k - 1)];
                                }
                            } else {
                                a[at(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                let mut pp = a[at(k, j)] + q * a[at(k + 1, j)];
                                if k != nn - 1 {
                                    pp += r * a[at(k + 2, j)];
                                    a[at(k + 2, j)] -= pp * z;
                                }
                                a[at(k + 1, j)] -= pp * y;
                                a[at(k, j)] -= pp * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * a[at(i, k)] + y * a[at(i, k + 1)];
                                if k != nn - 1 {
                                    pp += z * a[at(i, k + 2)];
                                    a[at(i, k + 2)] -= pp * r;
                                }
                                a[at(i, k + 1)] -= pp * q;
                                a[at(i, k)] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}

/// Roots of the monic polynomial `x^N + c[N-1] x^{N-1} + ... + c[0]`.
pub fn monic_roots<T: Real>(coeffs_low_to_high: &[T]) -> Result<Vec<Cplx<T>>> {
    let n = coeffs_low_to_high.len();
    let mut h = vec![T::zero(); n * n];
    for j in 0..n {
        h[j] = -coeffs_low_to_high[n - 1 - j];
    }
    for i in 1..n {
        h[i * n + i - 1] = T::one();
    }
    hessenberg_eigenvalues(&h, n)
}
