//! Dense-free linear algebra on tridiagonal matrices: the implicit QL
//! eigensolver, Sturm counts, and a partially pivoted LU factorization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lattice::TridiagonalOperator;

/// Eigenvalues (ascending) and column eigenvectors of a symmetric
/// tridiagonal matrix, by implicit-shift QL.
pub fn symmetric_tridiagonal_eigen(op: &TridiagonalOperator) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if !op.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = op.dim();
    let mut d = op.diag.clone();
    let mut e = op.lower.clone();
    e.push(0.0);
    let mut z = DMatrix::<f64>::identity(n, n);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    last_update: e[l].abs(),
                    ratio: f64::NAN,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| z[(r, order[c])]);
    Ok((values, vectors))
}

/// Number of eigenvalues of a symmetric tridiagonal matrix strictly below `x`.
pub fn sturm_count(op: &TridiagonalOperator, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..op.dim() {
        let coupling = if i == 0 {
            0.0
        } else {
            op.lower[i - 1] * op.upper[i - 1]
        };
        q = op.diag[i] - x - coupling / q;
        if q == 0.0 {
            q = -f64::EPSILON * (op.diag[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Partially pivoted LU of a general tridiagonal matrix (the `gttrf`
/// layout: one extra superdiagonal `du2` appears from row interchanges).
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    pub fn factor(op: &TridiagonalOperator) -> Result<Self> {
        let n = op.dim();
        let mut dl = op.lower.clone();
        let mut d = op.diag.clone();
        let mut du = op.upper.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    return Err(Error::SingularShift(0.0));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            return Err(Error::SingularShift(0.0));
        }
        Ok(Self {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        if n == 0 {
            return b;
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        b
    }
}

/// Solver for `(A - λ)x = b` on the orthogonal complement of a unit vector
/// `φ`, via the bordered system `[A-λ φ; φᵀ 0][x; μ] = [b; 0]`.
#[derive(Debug, Clone)]
pub struct BorderedSolver {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl BorderedSolver {
    pub fn new(op: &TridiagonalOperator, shift: f64, phi: &[f64]) -> Result<Self> {
        let n = op.dim();
        if phi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: phi.len(),
            });
        }
        let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n))
            .copy_from(&op.shifted(shift).to_dense());
        for i in 0..n {
            m[(i, n)] = phi[i];
            m[(n, i)] = phi[i];
        }
        let lu = m.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularShift(shift));
        }
        Ok(Self { lu, n })
    }

    /// Returns `x ⊥ φ` with `(A - λ)x = b`; `b` is assumed orthogonal to `φ`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b = DVector::<f64>::zeros(self.n + 1);
        b.rows_mut(0, self.n).copy_from_slice(rhs);
        let x = self
            .lu
            .solve(&b)
            .expect("bordered matrix checked invertible");
        x.as_slice()[..self.n].to_vec()
    }
}
