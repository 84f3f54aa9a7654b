//! Truncated one-dimensional lattice, potentials and tridiagonal operators.
//!
//! Sites run over `j = -J..=J`; row `i` of every vector and matrix holds
//! site `j = i - J`. Everything outside `±J` is an implicit zero (Dirichlet
//! truncation).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    half_width: usize,
}

impl Grid {
    pub fn new(half_width: usize) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::InvalidGrid(half_width));
        }
        Ok(Self { half_width })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Number of sites, `2J + 1`.
    pub fn size(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn site(&self, row: usize) -> i64 {
        row as i64 - self.half_width as i64
    }

    pub fn row(&self, site: i64) -> Option<usize> {
        let row = site + self.half_width as i64;
        (row >= 0 && (row as usize) < self.size()).then_some(row as usize)
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.size()).map(move |i| self.site(i))
    }

    /// Unit vector at site `j`.
    pub fn unit(&self, site: i64) -> Vec<f64> {
        let mut u = vec![0.0; self.size()];
        if let Some(i) = self.row(site) {
            u[i] = 1.0;
        }
        u
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellSign {
    /// `V(0) = -κ`, binds a state below the band.
    Attractive,
    /// `V(0) = +κ`, binds a state above the band.
    Repulsive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    /// Point defect at the origin.
    SingleSite {
        kappa: f64,
        sign: WellSign,
    },
    /// Explicit values on sites `-L..=L`, centred at the origin and zero
    /// beyond. The table length must be odd.
    Table {
        values: Vec<f64>,
    },
    Free,
}

impl Potential {
    pub fn attractive(kappa: f64) -> Self {
        Potential::SingleSite {
            kappa,
            sign: WellSign::Attractive,
        }
    }

    pub fn repulsive(kappa: f64) -> Self {
        Potential::SingleSite {
            kappa,
            sign: WellSign::Repulsive,
        }
    }

    /// Values of `V` sampled on the grid.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        let mut values = vec![0.0; grid.size()];
        match self {
            Potential::Free => {}
            Potential::SingleSite { kappa, sign } => {
                if !kappa.is_finite() {
                    return Err(Error::NonFinitePotential(0));
                }
                let mid = grid.half_width();
                values[mid] = match sign {
                    WellSign::Attractive => -kappa,
                    WellSign::Repulsive => *kappa,
                };
            }
            Potential::Table { values: table } => {
                if table.len() % 2 == 0 || table.len() > grid.size() {
                    return Err(Error::PotentialSize {
                        expected: grid.size(),
                        got: table.len(),
                    });
                }
                let half = (table.len() / 2) as i64;
                for (k, &v) in table.iter().enumerate() {
                    let site = k as i64 - half;
                    if !v.is_finite() {
                        return Err(Error::NonFinitePotential(site));
                    }
                    values[grid.row(site).expect("table fits in grid")] = v;
                }
            }
        }
        Ok(values)
    }

    /// True when `V(j) = V(-j)` for every site.
    pub fn is_even(&self) -> bool {
        match self {
            Potential::Free | Potential::SingleSite { .. } => true,
            Potential::Table { values } => values.iter().eq(values.iter().rev()),
        }
    }
}

/// Real tridiagonal matrix. `lower[i]` is entry `(i+1, i)`, `upper[i]` is
/// entry `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        let off = n.saturating_sub(1);
        for len in [lower.len(), upper.len()] {
            if len != off {
                return Err(Error::DimensionMismatch {
                    expected: off,
                    got: len,
                });
            }
        }
        Ok(Self { diag, lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.lower == self.upper
    }

    /// `self - shift·I`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            diag: self.diag.iter().map(|d| d - shift).collect(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
        }
    }

    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        let mut out = vec![0.0; n];
        self.apply_into(u, &mut out);
        Ok(out)
    }

    /// Unchecked product into a preallocated buffer.
    pub(crate) fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * u[i];
            if i + 1 < n {
                acc += self.upper[i] * u[i + 1];
            }
            if i > 0 {
                acc += self.lower[i - 1] * u[i - 1];
            }
            out[i] = acc;
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.upper[i];
                m[(i + 1, i)] = self.lower[i];
            }
        }
        m
    }
}

/// `H = -Δ + V` with Dirichlet truncation: diagonal `2 + V(j)`, both
/// off-diagonals `-1`.
pub fn build_operator(potential: &Potential, grid: &Grid) -> Result<TridiagonalOperator> {
    let v = potential.sample(grid)?;
    let n = grid.size();
    let diag = v.iter().map(|vj| 2.0 + vj).collect();
    TridiagonalOperator::new(diag, vec![-1.0; n - 1], vec![-1.0; n - 1])
}

/// `‖u‖_{l_e^a} = (Σ_j e^{2a|j|} u(j)²)^{1/2}` over the truncated grid.
pub fn weighted_norm(u: &[f64], grid: &Grid, a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    u.iter()
        .zip(grid.sites())
        .map(|(x, j)| (2.0 * a * j.unsigned_abs() as f64).exp() * x * x)
        .sum::<f64>()
        .sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

pub fn norm_inf(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |m, x| m.max(x.abs()))
}
