//! Elementary symmetric functions, Lagrange weights, and finite-difference
//! weights by the method of partial products.
//!
//! The weight for node `k`, derivative order `m`, evaluation point `zeta` is
//!
//! ```text
//! w_{k,m} = m! * w_k * [x^m] prod_{j != k} (x - (x_j - zeta))
//! ```
//!
//! where `w_k = 1 / prod_{j != k} (x_k - x_j)` is the Lagrange weight. The
//! coefficient is obtained by convolving the low-order coefficients of the
//! prefix product over `j < k` with those of the suffix product over `j > k`.
//!
//! Every routine here evaluates in a fixed order so that the rounding
//! behaviour is reproducible and matches the operation counts assumed by
//! [`crate::errmodel`]:
//!
//! * symmetric functions: recurrence `S_{N-i}(y_1..y_N) = S_{N-i}(y_1..y_{N-1})
//!   + y_N S_{N-i-1}(y_1..y_{N-1})`, values appended left to right;
//! * Lagrange weights: `n` subtractions, `n - 1` multiplications (ascending
//!   `j`), one division, computed before the grid is shifted by `-zeta`;
//! * convolution: ascending prefix order `m_1`;
//! * final scaling: `(w_k * coeff) * m!`;
//! * [`fd_apply`]: left-to-right summation over `k = 0..n`.
//!
//! Products over thousands of nodes leave the `f64` exponent range even when
//! the final weights are moderate. Partial products therefore carry a separate
//! power-of-two exponent; scaling by powers of two is exact, so the computed
//! weights are bit-identical to an evaluation with unbounded exponent range.
//! A weight whose final value overflows is reported as an error.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Chebyshev,
    Mapped,
    Arbitrary,
}

/// Ordered set of pairwise distinct abscissas `x_0 .. x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    kind: GridKind,
}

impl Grid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        Self::with_kind(nodes, GridKind::Arbitrary)
    }

    pub fn with_kind(nodes: Vec<f64>, kind: GridKind) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::GridTooSmall(nodes.len()));
        }
        if let Some(index) = nodes.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteNode { index });
        }
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
        for pair in order.windows(2) {
            // total_cmp separates 0.0 and -0.0; they still coincide
            if nodes[pair[0]] == nodes[pair[1]] {
                let (first, second) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                return Err(Error::DuplicateNode {
                    first,
                    second,
                    value: nodes[first],
                });
            }
        }
        Ok(Self { nodes, kind })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Polynomial degree `n`; the grid has `n + 1` nodes.
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }
}

/// Elementary symmetric functions `S_0 .. S_N` of a multiset of size `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTable {
    values: Vec<f64>,
}

impl SymTable {
    /// `S_j`, or zero for `j > N`.
    pub fn get(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or(0.0)
    }

    /// Multiset size `N`.
    pub fn size(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// All elementary symmetric functions of `values`.
pub fn elem_sym(values: &[f64]) -> Result<SymTable> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "elementary symmetric functions need at least one value".into(),
        ));
    }
    Ok(SymTable {
        values: elem_sym_in(values),
    })
}

/// `S_0 .. S_N` in any scalar type, same recurrence as [`elem_sym`].
pub fn elem_sym_in<T: Real>(values: &[T]) -> Vec<T> {
    let mut acc = CoOrderSym::<T>::unscaled(values.len());
    for &y in values {
        acc.push(y);
    }
    // co-order i holds S_{N-i}
    let n = values.len();
    (0..=n).map(|j| acc.co[n - j]).collect()
}

/// Truncated symmetric-function accumulator.
///
/// Holds `T_i = S_{N-i}(y_1..y_N)` for co-orders `i = 0..=cap`, scaled by
/// `2^-exp`. Appending `y` applies the recurrence in descending `i`:
/// `T_i <- T_{i-1} + y T_i`, `T_0 <- y T_0`, and `T_N = 1` when `i == N`.
#[derive(Clone, Debug)]
pub(crate) struct CoOrderSym<T> {
    co: Vec<T>,
    exp: i32,
    len: usize,
    rescale: bool,
}

// exponent window kept by the block scaling
const SCALE_WINDOW: i32 = 256;

impl<T: Real> CoOrderSym<T> {
    pub(crate) fn new(cap: usize) -> Self {
        let mut co = vec![T::zero(); cap + 1];
        co[0] = T::one();
        Self {
            co,
            exp: 0,
            len: 0,
            rescale: true,
        }
    }

    fn unscaled(cap: usize) -> Self {
        Self {
            rescale: false,
            ..Self::new(cap)
        }
    }

    pub(crate) fn push(&mut self, y: T) {
        self.len += 1;
        let top = self.len.min(self.co.len() - 1);
        for i in (1..=top).rev() {
            self.co[i] = if i == self.len {
                T::one().ldexp(-self.exp)
            } else {
                self.co[i - 1] + y * self.co[i]
            };
        }
        self.co[0] = y * self.co[0];
        if self.rescale {
            self.normalize();
        }
    }

    fn normalize(&mut self) {
        let lead = self
            .co
            .iter()
            .filter(|c| c.to_f64() != 0.0)
            .map(|c| c.exponent())
            .max();
        if let Some(e) = lead {
            if e.abs() > SCALE_WINDOW {
                for c in &mut self.co {
                    *c = c.ldexp(-e);
                }
                self.exp += e;
            }
        }
    }

    /// Scaled co-order value: `S_{N-i} = co(i) * 2^exp`; zero when `i > N`.
    #[inline]
    pub(crate) fn co(&self, i: usize) -> T {
        if i > self.len {
            T::zero()
        } else {
            self.co[i]
        }
    }

    #[inline]
    pub(crate) fn exp(&self) -> i32 {
        self.exp
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.len
    }
}

/// `mant * 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Scaled<T> {
    pub mant: T,
    pub exp: i32,
}

impl<T: Real> Scaled<T> {
    pub(crate) fn value(self) -> T {
        self.mant.ldexp(self.exp)
    }
}

/// Lagrange weights with separate binary exponents, ascending-`j` product.
pub(crate) fn scaled_lagrange_weights<T: Real>(nodes: &[f64]) -> Vec<Scaled<T>> {
    let xs: Vec<T> = nodes.iter().map(|&x| T::from_f64(x)).collect();
    (0..xs.len())
        .map(|k| {
            let mut prod = T::one();
            let mut exp = 0i32;
            for (j, &xj) in xs.iter().enumerate() {
                if j == k {
                    continue;
                }
                prod = prod * (xs[k] - xj);
                let e = prod.exponent();
                if e.abs() > SCALE_WINDOW {
                    prod = prod.ldexp(-e);
                    exp += e;
                }
            }
            Scaled {
                mant: T::one() / prod,
                exp: -exp,
            }
        })
        .collect()
}

/// Lagrange weights `w_k = 1 / prod_{j != k} (x_k - x_j)`.
///
/// Fails with [`Error::WeightOverflow`] when a weight is not representable;
/// magnitudes are never rescaled.
pub fn lagrange_weights(grid: &Grid) -> Result<Vec<f64>> {
    scaled_lagrange_weights::<f64>(grid.nodes())
        .into_iter()
        .enumerate()
        .map(|(index, w)| {
            let v = w.value();
            if v.is_finite() && (v != 0.0 || w.mant == 0.0) {
                Ok(v)
            } else {
                Err(Error::WeightOverflow { index })
            }
        })
        .collect()
}

/// Finite-difference weights for one derivative order and evaluation point.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSet {
    pub weights: Vec<f64>,
    pub order: usize,
    pub eval_point: f64,
}

impl WeightSet {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Precomputed Lagrange weights for a grid, reused across evaluation points
/// and derivative orders.
#[derive(Clone, Debug)]
pub struct Stencil<T = f64> {
    nodes: Vec<f64>,
    lagrange: Vec<Scaled<T>>,
}

impl<T: Real> Stencil<T> {
    pub fn new(grid: &Grid) -> Self {
        Self {
            nodes: grid.nodes().to_vec(),
            lagrange: scaled_lagrange_weights(grid.nodes()),
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights `w_{k,m}` at `zeta` in scalar type `T`.
    pub fn weights(&self, m: usize, zeta: f64) -> Result<Vec<T>> {
        let n = self.nodes.len() - 1;
        if m > n {
            return Err(Error::OrderExceedsDegree {
                order: m,
                degree: n,
            });
        }
        if !zeta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "evaluation point {zeta} is not finite"
            )));
        }
        let z = T::from_f64(zeta);
        let shifted: Vec<T> = self.nodes.iter().map(|&x| T::from_f64(x) - z).collect();
        self.partial_products(&shifted, m, false)
    }

    /// Terms `m! |w_k| S_{n-m}({|x_j - zeta|}_{j != k})` of the rounding-error
    /// bound, with the same block scaling as [`Stencil::weights`].
    pub fn abs_partial_products(&self, m: usize, zeta: f64) -> Result<Vec<T>> {
        let n = self.nodes.len() - 1;
        if m > n {
            return Err(Error::OrderExceedsDegree {
                order: m,
                degree: n,
            });
        }
        let z = T::from_f64(zeta);
        let dist: Vec<T> = self
            .nodes
            .iter()
            .map(|&x| (T::from_f64(x) - z).abs())
            .collect();
        self.partial_products(&dist, m, true)
    }

    fn partial_products(&self, shifted: &[T], m: usize, absolute: bool) -> Result<Vec<T>> {
        let n = shifted.len() - 1;
        // suffix[k] covers shifted[k+1..=n]
        let mut suffix = Vec::with_capacity(n + 1);
        let mut acc = CoOrderSym::new(m);
        for k in (0..=n).rev() {
            suffix.push(acc.clone());
            acc.push(shifted[k]);
        }
        suffix.reverse();

        let factorial = T::from_f64((1..=m).map(|i| i as f64).product());
        let negate = !absolute && (n - m) % 2 == 1;
        let mut out = Vec::with_capacity(n + 1);
        let mut prefix = CoOrderSym::new(m);
        for (k, suf) in suffix.iter().enumerate() {
            let mut coeff = T::zero();
            for m1 in 0..=m.min(prefix.len()) {
                let m2 = m - m1;
                if m2 > suf.len() {
                    continue;
                }
                coeff = coeff + prefix.co(m1) * suf.co(m2);
            }
            if negate {
                coeff = -coeff;
            }
            let lw = self.lagrange[k];
            let mant = if absolute { lw.mant.abs() } else { lw.mant };
            let w = (mant * coeff) * factorial;
            let w = w.ldexp(lw.exp + prefix.exp() + suf.exp());
            if !w.is_finite() {
                return Err(Error::WeightOverflow { index: k });
            }
            out.push(w);
            prefix.push(shifted[k]);
        }
        Ok(out)
    }
}

impl Stencil<f64> {
    pub fn weight_set(&self, m: usize, zeta: f64) -> Result<WeightSet> {
        Ok(WeightSet {
            weights: self.weights(m, zeta)?,
            order: m,
            eval_point: zeta,
        })
    }
}

/// Weights `w_{k,m}` approximating the `m`-th derivative at `zeta`.
pub fn fd_weights(grid: &Grid, m: usize, zeta: f64) -> Result<WeightSet> {
    Stencil::<f64>::new(grid).weight_set(m, zeta)
}

/// `sum_k w_k f_k`, summed left to right.
pub fn fd_apply(ws: &WeightSet, samples: &[f64]) -> Result<f64> {
    if samples.len() != ws.weights.len() {
        return Err(Error::LengthMismatch {
            expected: ws.weights.len(),
            actual: samples.len(),
        });
    }
    Ok(dot_forward(&ws.weights, samples))
}

/// `sum_k w_k f_k`, summed right to left (`k = n` first), the order under
/// which term `k` carries at most `k + 2` rounding errors.
pub fn fd_apply_reverse(ws: &WeightSet, samples: &[f64]) -> Result<f64> {
    if samples.len() != ws.weights.len() {
        return Err(Error::LengthMismatch {
            expected: ws.weights.len(),
            actual: samples.len(),
        });
    }
    Ok(weights_dot_rev(&ws.weights, samples))
}

pub fn dot_forward<T: Real>(w: &[T], f: &[T]) -> T {
    w.iter().zip(f).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

fn weights_dot_rev<T: Real>(w: &[T], f: &[T]) -> T {
    w.iter()
        .zip(f)
        .rev()
        .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cheb(n: usize) -> Grid {
        let nodes = (0..=n)
            .map(|j| (j as f64 * std::f64::consts::PI / n as f64).cos())
            .collect();
        Grid::new(nodes).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(Grid::new(vec![1.0]), Err(Error::GridTooSmall(1))));
        assert!(matches!(
            Grid::new(vec![0.5, -0.5, 0.5]),
            Err(Error::DuplicateNode {
                first: 0,
                second: 2,
                ..
            })
        ));
        assert!(matches!(
            Grid::new(vec![0.0, -0.0]),
            Err(Error::DuplicateNode { .. })
        ));
        assert!(matches!(
            Grid::new(vec![0.0, f64::NAN]),
            Err(Error::NonFiniteNode { index: 1 })
        ));
        let g = Grid::new(vec![1.0, 0.0, -1.0]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.kind(), GridKind::Arbitrary);
    }

    #[test]
    fn elem_sym_small_sets() {
        let s = elem_sym(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.get(0), 1.0);
        assert_eq!(s.get(1), 6.0);
        assert_eq!(s.get(2), 11.0);
        assert_eq!(s.get(3), 6.0);
        assert_eq!(s.get(4), 0.0);

        let s = elem_sym(&[-0.75]).unwrap();
        assert_eq!(s.values(), &[1.0, -0.75]);

        let s = elem_sym(&[2.0; 4]).unwrap();
        assert_eq!(s.get(4), 16.0);
        assert_eq!(s.get(2), 24.0);
        assert!(elem_sym(&[]).is_err());
    }

    #[test]
    fn lagrange_weights_small() {
        let w = lagrange_weights(&Grid::new(vec![1.0, 0.0, -1.0]).unwrap()).unwrap();
        assert_eq!(w, vec![0.5, -1.0, 0.5]);
        let w = lagrange_weights(&Grid::new(vec![1.0, -1.0]).unwrap()).unwrap();
        assert_eq!(w, vec![0.5, -0.5]);
        // Chebyshev n = 4: prod_{j != 0} (1 - x_j) = 2n / 2^{n-1} = 1
        let w = lagrange_weights(&cheb(4)).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lagrange_weight_overflow_reported() {
        let err = lagrange_weights(&cheb(1200)).unwrap_err();
        assert!(matches!(err, Error::WeightOverflow { index: 0 }));
    }

    #[test]
    fn fd_weights_three_point() {
        let g = Grid::new(vec![1.0, 0.0, -1.0]).unwrap();
        let ws = fd_weights(&g, 1, 1.0).unwrap();
        assert_eq!(ws.weights, vec![1.5, -2.0, 0.5]);
        let ws = fd_weights(&g, 0, 0.0).unwrap();
        assert_eq!(ws.weights, vec![0.0, 1.0, 0.0]);
        let ws = fd_weights(&g, 2, 0.3).unwrap();
        assert_eq!(ws.weights, vec![1.0, -2.0, 1.0]);
        assert!(matches!(
            fd_weights(&g, 3, 0.0),
            Err(Error::OrderExceedsDegree {
                order: 3,
                degree: 2
            })
        ));
        assert!(fd_weights(&g, 1, f64::INFINITY).is_err());
    }

    #[test]
    fn chebyshev_edge_weight() {
        // w_{0,1} at x_0 = 1 is (2n^2 + 1) / 6
        let ws = fd_weights(&cheb(4), 1, 1.0).unwrap();
        assert!((ws.weights[0] - 5.5).abs() < 1e-14);
    }

    #[test]
    fn fd_apply_examples() {
        let g = Grid::new(vec![1.0, 0.0, -1.0]).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| x * x).collect();
        let ws = fd_weights(&g, 1, 1.0).unwrap();
        assert_eq!(fd_apply(&ws, &f).unwrap(), 2.0);
        let ws = fd_weights(&g, 2, 1.0).unwrap();
        assert_eq!(fd_apply(&ws, &f).unwrap(), 2.0);
        let ws = fd_weights(&g, 0, 0.0).unwrap();
        assert_eq!(fd_apply(&ws, &[4.0, 5.0, 6.0]).unwrap(), 5.0);
        assert!(matches!(
            fd_apply(&ws, &[1.0]),
            Err(Error::LengthMismatch {
                expected: 3,
                actual: 1
            })
        ));
    }

    #[test]
    fn large_grid_weights_stay_finite() {
        // raw Lagrange weights overflow here; the edge stencil does not
        let n = 2048;
        let ws = fd_weights(&cheb(n), 1, 1.0).unwrap();
        let expect = (2.0 * (n * n) as f64 + 1.0) / 6.0;
        assert!(((ws.weights[0] - expect) / expect).abs() < 1e-10);
        let x1 = (std::f64::consts::PI / n as f64).cos();
        let expect1 = -2.0 / (1.0 - x1);
        assert!(((ws.weights[1] - expect1) / expect1).abs() < 1e-10);
        assert!(ws.weights.iter().all(|w| w.is_finite()));
    }

    #[test]
    fn scaled_and_unscaled_agree_bitwise() {
        // block scaling is exact, so small grids give identical bits whether
        // or not rescaling ever triggers
        let g = cheb(40);
        let ys: Vec<f64> = g.nodes().iter().map(|x| 1.0 - x).collect();
        let mut a = CoOrderSym::<f64>::new(3);
        let mut b = CoOrderSym::<f64>::unscaled(3);
        for &y in &ys {
            a.push(y.ldexp(-200));
            b.push(y);
        }
        for i in 0..=3 {
            assert_eq!(
                a.co(i).ldexp(a.exp() + 200 * (ys.len() - i) as i32),
                b.co(i)
            );
        }
    }

    proptest! {
        #[test]
        fn moment_conditions(
            raw in proptest::collection::btree_set(-1000i32..1000, 3..10),
            zeta_raw in -1200i32..1200,
            m in 0usize..4,
        ) {
            let nodes: Vec<f64> = raw.iter().map(|&v| v as f64 / 1000.0).collect();
            let zeta = zeta_raw as f64 / 1000.0;
            let g = Grid::new(nodes.clone()).unwrap();
            let n = g.n();
            prop_assume!(m <= n);
            let ws = fd_weights(&g, m, zeta).unwrap();
            let u = f64::EPSILON / 2.0;
            let mut fact = 1.0;
            for i in 1..=m { fact *= i as f64; }
            for p in 0..=n {
                let terms: Vec<f64> = ws.weights.iter().zip(&nodes)
                    .map(|(w, x)| w * (x - zeta).powi(p as i32)).collect();
                let sum: f64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                let expect = if p == m { fact } else { 0.0 };
                prop_assert!(
                    (sum - expect).abs() <= 64.0 * n as f64 * u * scale.max(fact),
                    "p = {} sum = {} expect = {}", p, sum, expect
                );
            }
        }

        #[test]
        fn elem_sym_of_equal_values(y in 0.1f64..3.0, size in 1usize..12) {
            let s = elem_sym(&vec![y; size]).unwrap();
            prop_assert_eq!(s.get(0), 1.0);
            let expect = y.powi(size as i32);
            prop_assert!((s.get(size) - expect).abs() <= 1e-14 * expect);
        }
    }
}
