//! Chebyshev grids, node products, and spectral differentiation by
//! finite-difference weights or by the cosine transform.

mod dct;

pub use dct::{cheb_inverse, cheb_transform, ChebTransform};

use crate::error::{Error, Result};
use crate::real::{self, Real};
use crate::symfun::{Grid, GridKind, Stencil};

/// Chebyshev points `x_j = cos(j pi / n)`, `j = 0..=n`, from `+1` down to `-1`.
///
/// Nodes are generated as `sin(pi (n - 2j) / (2n))` for the upper half and
/// mirrored, so `x_{n-j} == -x_j` holds exactly and the midpoint is exactly 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebGrid {
    grid: Grid,
}

impl ChebGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "Chebyshev grid needs n >= 2, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n + 1];
        let half = std::f64::consts::FRAC_PI_2 / n as f64;
        for j in 0..=n / 2 {
            if 2 * j == n {
                nodes[j] = 0.0;
            } else {
                let x = (half * (n - 2 * j) as f64).sin();
                nodes[j] = x;
                nodes[n - j] = -x;
            }
        }
        Ok(Self {
            grid: Grid::with_kind(nodes, GridKind::Chebyshev)?,
        })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn as_grid(&self) -> &Grid {
        &self.grid
    }
}

/// Chebyshev coefficients `c_0 .. c_n` of `sum c_k T_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeries {
    pub coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty Chebyshev series".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numeric("non-finite Chebyshev coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x)
    }

    /// Zero-pads (or truncates) to `len` coefficients.
    pub fn resized(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, 0.0);
        Self { coeffs }
    }
}

/// `W_l = prod_{j != l} (x_l - x_j)` on the Chebyshev grid, closed form:
/// `(-1)^l 2n / 2^{n-1}` at the endpoints, `(-1)^l n / 2^{n-1}` inside.
pub fn node_product(grid: &ChebGrid, l: usize) -> f64 {
    let n = grid.n();
    assert!(l <= n, "node index {l} exceeds n = {n}");
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mag = if l == 0 || l == n {
        2.0 * n as f64
    } else {
        n as f64
    };
    sign * real::ldexp(mag, 1 - n as i32)
}

/// Clenshaw evaluation of `sum c_k T_k(x)`.
pub fn clenshaw<T: Real>(c: &[T], x: T) -> T {
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    let two_x = x + x;
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    match c.first() {
        Some(&c0) => c0 + x * b1 - b2,
        None => T::zero(),
    }
}

/// Coefficients of the derivative series (one fewer term).
pub fn cheb_derivative_coeffs<T: Real>(c: &[T]) -> Vec<T> {
    let len = c.len();
    if len <= 1 {
        return vec![T::zero()];
    }
    let deg = len - 1;
    let mut d = vec![T::zero(); deg + 1];
    // d_{k-1} = d_{k+1} + 2k c_k, with d_deg = d_{deg+1} = 0
    for k in (1..=deg).rev() {
        let next = if k < deg { d[k + 1] } else { T::zero() };
        d[k - 1] = next + T::from_f64(2.0 * k as f64) * c[k];
    }
    d[0] = d[0] / T::from_f64(2.0);
    d.truncate(deg);
    d
}

/// Derivative of a Chebyshev series; the degree drops by one.
pub fn cheb_diff_series(c: &ChebSeries) -> ChebSeries {
    ChebSeries {
        coeffs: cheb_derivative_coeffs(&c.coeffs),
    }
}

/// `m`-th derivative at the nodes by transform, `m` coefficient
/// differentiations, and inverse transform.
pub fn diff_dct(samples: &[f64], m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "derivative order must be >= 1".into(),
        ));
    }
    let plan = ChebTransform::new(samples.len().saturating_sub(1))?;
    plan.differentiate(samples, m)
}

/// How higher derivatives are formed from weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiffMode {
    /// One stencil of order `m` per node.
    #[default]
    Direct,
    /// `m` successive first derivatives.
    Iterated,
}

/// `m`-th derivative at every node from finite-difference weights.
pub fn diff_weights(samples: &[f64], m: usize, grid: &ChebGrid) -> Result<Vec<f64>> {
    let stencil = Stencil::<f64>::new(grid.as_grid());
    diff_weights_with(&stencil, samples, m, DiffMode::Direct)
}

/// Same as [`diff_weights`] with a precomputed stencil and explicit mode.
pub fn diff_weights_with(
    stencil: &Stencil<f64>,
    samples: &[f64],
    m: usize,
    mode: DiffMode,
) -> Result<Vec<f64>> {
    let nodes = stencil.nodes();
    if samples.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            actual: samples.len(),
        });
    }
    match mode {
        DiffMode::Direct => apply_rows(stencil, samples, m),
        DiffMode::Iterated => {
            let mut cur = samples.to_vec();
            for _ in 0..m {
                cur = apply_rows(stencil, &cur, 1)?;
            }
            Ok(cur)
        }
    }
}

fn apply_rows(stencil: &Stencil<f64>, samples: &[f64], m: usize) -> Result<Vec<f64>> {
    stencil
        .nodes()
        .iter()
        .map(|&zeta| {
            let w = stencil.weights(m, zeta)?;
            Ok(crate::symfun::dot_forward(&w, samples))
        })
        .collect()
}
