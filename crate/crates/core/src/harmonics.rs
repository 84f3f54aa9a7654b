//! Truncated harmonic series `{v_n}_{0≤n≤N}` of lattice vectors and their
//! product algebra.
//!
//! A series represents the function of the phase
//!
//! ```text
//! u(θ) = Σ_n (zⁿ + z̄ⁿ) v_n = Σ_n 2 δⁿ cos(nθ) v_n,    z = δ e^{-iθ},
//! ```
//!
//! and coefficients depend on `δ` only through `|z|² = δ²`. Products are
//! defined so that [`HarmonicSeries::evaluate`] is a ring homomorphism:
//! expanding `cos(n₁θ)cos(n₂θ)` gives a sum-frequency part (Cauchy
//! convolution) and a difference-frequency part carrying `|z|^{2m}`, where
//! `m = min(n₁, n₂)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{weighted_norm, Grid};

/// Parameters of `‖v‖_{a,r} = Σ_n rⁿ ‖v_n‖_{l_e^a}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesNorm {
    pub a: f64,
    pub r: f64,
}

impl SeriesNorm {
    pub fn new(a: f64, r: f64) -> Result<Self> {
        if !(a >= 0.0) || !(r > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "series norm needs a >= 0, r > 0 (a = {a}, r = {r})"
            )));
        }
        Ok(Self { a, r })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSeries {
    grid: Grid,
    coeffs: Vec<Vec<f64>>,
}

impl HarmonicSeries {
    pub fn zeros(grid: Grid, n_max: usize) -> Self {
        Self {
            grid,
            coeffs: vec![vec![0.0; grid.size()]; n_max + 1],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "series needs at least one coefficient".into(),
            ));
        }
        for c in &coeffs {
            if c.len() != grid.size() {
                return Err(Error::DimensionMismatch {
                    expected: grid.size(),
                    got: c.len(),
                });
            }
        }
        Ok(Self { grid, coeffs })
    }

    /// `Φ₀ = {δ_{n1} φ}`.
    pub fn phi0(grid: Grid, phi: &[f64], n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidArgument("Φ₀ needs n_max >= 1".into()));
        }
        let mut s = Self::zeros(grid, n_max);
        if phi.len() != grid.size() {
            return Err(Error::DimensionMismatch {
                expected: grid.size(),
                got: phi.len(),
            });
        }
        s.coeffs[1].copy_from_slice(phi);
        Ok(s)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &[f64] {
        &self.coeffs[n]
    }

    pub fn coeff_mut(&mut self, n: usize) -> &mut Vec<f64> {
        &mut self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    /// Same series cut or zero-padded to a new order.
    pub fn with_order(&self, n_max: usize) -> Self {
        let mut out = Self::zeros(self.grid, n_max);
        for (dst, src) in out.coeffs.iter_mut().zip(&self.coeffs) {
            dst.copy_from_slice(src);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch {
                expected: self.grid.size(),
                got: other.grid.size(),
            });
        }
        if self.n_max() != other.n_max() {
            return Err(Error::InvalidArgument(format!(
                "series orders differ ({} vs {})",
                self.n_max(),
                other.n_max()
            )));
        }
        Ok(())
    }

    /// `self + alpha·other`.
    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + alpha * q).collect())
            .collect();
        Ok(Self {
            grid: self.grid,
            coeffs,
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.iter().map(|x| alpha * x).collect())
                .collect(),
        }
    }

    /// `Σ_n rⁿ ‖v_n‖_{l_e^a}` over the stored coefficients.
    pub fn norm(&self, norm: SeriesNorm) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| norm.r.powi(n as i32) * weighted_norm(c, &self.grid, norm.a))
            .sum()
    }

    /// `Σ_n 2δⁿ cos(nθ) v_n`.
    pub fn evaluate(&self, theta: f64, delta: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.size()];
        for (n, c) in self.coeffs.iter().enumerate() {
            let w = 2.0 * delta.powi(n as i32) * (n as f64 * theta).cos();
            if w == 0.0 {
                continue;
            }
            out.iter_mut().zip(c).for_each(|(o, x)| *o += w * x);
        }
        out
    }

    /// The product `𝓜(|z|², v₁, v₂)`, truncated at the common order.
    pub fn product(&self, other: &Self, zsq: f64) -> Result<Self> {
        self.check(other)?;
        if !(zsq >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "|z|² must be non-negative (got {zsq})"
            )));
        }
        let top = self.n_max();
        let dim = self.grid.size();
        let a = &self.coeffs;
        let b = &other.coeffs;
        let pow: Vec<f64> = (0..=top).map(|m| zsq.powi(m as i32)).collect();
        let mut out = Self::zeros(self.grid, top);
        for n in 0..=top {
            let dst = &mut out.coeffs[n];
            for k in 0..=n {
                let (x, y) = (&a[k], &b[n - k]);
                for i in 0..dim {
                    dst[i] += x[i] * y[i];
                }
            }
            for m in 0..=top - n {
                let w = pow[m];
                if w == 0.0 {
                    continue;
                }
                let (hi_a, lo_b) = (&a[n + m], &b[m]);
                if n == 0 {
                    for i in 0..dim {
                        dst[i] += w * hi_a[i] * lo_b[i];
                    }
                } else {
                    let (lo_a, hi_b) = (&a[m], &b[n + m]);
                    for i in 0..dim {
                        dst[i] += w * (hi_a[i] * lo_b[i] + lo_a[i] * hi_b[i]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `𝓜_p(|z|², v, …, v)` with the right-nested recursion
    /// `𝓜_k(v₁, …) = 𝓜(v₁, 𝓜_{k-1}(v₂, …))`.
    pub fn power(&self, p: u32, zsq: f64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!(
                "power needs p >= 2 (got {p})"
            )));
        }
        let mut acc = self.product(self, zsq)?;
        for _ in 2..p {
            acc = self.product(&acc, zsq)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Grid {
        Grid::new(3).unwrap()
    }

    fn phi() -> Vec<f64> {
        vec![0.1, -0.2, 0.5, 0.8, 0.5, -0.2, 0.1]
    }

    fn sq(v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| x * x).collect()
    }

    #[test]
    fn phi0_squared() {
        let zsq = 0.07;
        let p0 = HarmonicSeries::phi0(grid(), &phi(), 6).unwrap();
        let m = p0.product(&p0, zsq).unwrap();
        let phi2 = sq(&phi());
        for (x, y) in m.coeff(0).iter().zip(&phi2) {
            assert_relative_eq!(*x, zsq * y, epsilon = 1e-16);
        }
        assert_eq!(m.coeff(2), phi2.as_slice());
        for n in [1, 3, 4, 5, 6] {
            assert!(m.coeff(n).iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn phi0_cubed() {
        let zsq = 0.3;
        let p0 = HarmonicSeries::phi0(grid(), &phi(), 6).unwrap();
        let m = p0.power(3, zsq).unwrap();
        let phi3: Vec<f64> = phi().iter().map(|x| x.powi(3)).collect();
        for (i, f3) in phi3.iter().enumerate() {
            assert_relative_eq!(m.coeff(1)[i], 3.0 * zsq * f3, epsilon = 1e-15);
            assert_relative_eq!(m.coeff(3)[i], f3, epsilon = 1e-15);
        }
        for n in [0, 2, 4, 5, 6] {
            assert!(m.coeff(n).iter().all(|x| x.abs() < 1e-16));
        }
    }

    #[test]
    fn zero_modulus_is_cauchy_convolution() {
        // At |z|² = 0 the product is the Cauchy convolution of the
        // coefficient lists once the constant term is doubled (the function
        // value of v₀ is 2v₀), with the output constant halved back.
        let g = grid();
        let a_list = [1.0, 2.0, 3.0, 4.0];
        let b_list = [2.0, 1.0, 0.0, -1.0];
        let a =
            HarmonicSeries::from_coeffs(g, a_list.iter().map(|x| vec![*x; 7]).collect()).unwrap();
        let b =
            HarmonicSeries::from_coeffs(g, b_list.iter().map(|x| vec![*x; 7]).collect()).unwrap();
        let m = a.product(&b, 0.0).unwrap();
        let double = |l: &[f64; 4]| [2.0 * l[0], l[1], l[2], l[3]];
        let (da, db) = (double(&a_list), double(&b_list));
        for n in 0..4 {
            let mut c: f64 = (0..=n).map(|k| da[k] * db[n - k]).sum();
            if n == 0 {
                c *= 0.5;
            }
            assert_eq!(m.coeff(n)[0], c, "n = {n}");
        }
        assert_eq!(m.coeff(1)[0], 10.0);
    }

    #[test]
    fn evaluate_special_cases() {
        let g = grid();
        let p0 = HarmonicSeries::phi0(g, &phi(), 4).unwrap();
        let two_phi: Vec<f64> = phi().iter().map(|x| 2.0 * x).collect();
        assert_eq!(p0.evaluate(0.0, 1.0), two_phi);
        assert!(p0
            .evaluate(std::f64::consts::FRAC_PI_2, 1.0)
            .iter()
            .all(|x| x.abs() < 1e-16));
        let mut s = HarmonicSeries::zeros(g, 3);
        s.coeff_mut(0).copy_from_slice(&phi());
        s.coeff_mut(2).copy_from_slice(&[1.0; 7]);
        assert_eq!(s.evaluate(0.4, 0.0), two_phi);
    }

    #[test]
    fn norm_cases() {
        let g = grid();
        let p0 = HarmonicSeries::phi0(g, &phi(), 4).unwrap();
        let nrm = SeriesNorm::new(0.2, 0.3).unwrap();
        assert_relative_eq!(
            p0.norm(nrm),
            0.3 * weighted_norm(&phi(), &g, 0.2),
            epsilon = 1e-15
        );
        assert_eq!(HarmonicSeries::zeros(g, 4).norm(nrm), 0.0);
        assert_relative_eq!(
            p0.scaled(-2.5).norm(nrm),
            2.5 * p0.norm(nrm),
            epsilon = 1e-15
        );
        assert!(SeriesNorm::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn order_and_grid_mismatch() {
        let a = HarmonicSeries::zeros(grid(), 4);
        assert!(a.product(&HarmonicSeries::zeros(grid(), 5), 0.1).is_err());
        assert!(a
            .product(&HarmonicSeries::zeros(Grid::new(4).unwrap(), 4), 0.1)
            .is_err());
        assert!(a.power(1, 0.1).is_err());
    }
}
