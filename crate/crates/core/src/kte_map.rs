//! Kosloff-Tal-Ezer arcsine map `g(xi) = asin(alpha xi) / asin(alpha)` and
//! differentiation on the mapped Chebyshev grid.
//!
//! Samples live at `x_j = g(xi_j)`. Derivatives are formed in `xi` on the
//! Chebyshev grid and pulled back with the chain rule
//! `df/dx = F'(xi) / g'(xi)` where `F = f o g`.
//!
//! The mapping parameter comes from the balance condition
//! `((1 - sqrt(1 - alpha^2)) / alpha)^n = n^beta u`, whose solution is
//! `alpha = 2 / (t + 1/t)` with `t = (n^beta u)^(-1/n)`.

use crate::chebgrid::{ChebGrid, ChebTransform};
use crate::ddprec::DoubleDouble;
use crate::error::{Error, Result};
use crate::symfun::{dot_forward, Stencil};

/// Unit roundoff of IEEE double precision, `2^-53`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub u: f64,
}

impl MapParams {
    /// `alpha = 0` is accepted and means the identity map.
    pub fn new(alpha: f64, beta: f64, n: usize, u: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!(
                "mapping parameter alpha = {alpha} must lie in [0, 1)"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!("map needs n >= 2, got {n}")));
        }
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "u = {u} must lie in (0, 1)"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidArgument("beta must be finite".into()));
        }
        Ok(Self { alpha, beta, n, u })
    }

    /// Parameters with `alpha` chosen by [`solve_alpha`].
    pub fn balanced(n: usize, beta: f64, u: f64) -> Result<Self> {
        Self::new(solve_alpha(n, beta, u)?, beta, n, u)
    }
}

fn check_domain(xi: f64, alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "mapping parameter alpha = {alpha} must lie in [0, 1)"
        )));
    }
    if !xi.is_finite() || (alpha * xi).abs() > 1.0 {
        return Err(Error::MapDomain((alpha * xi).abs()));
    }
    Ok(())
}

/// `g(xi) = asin(alpha xi) / asin(alpha)`; the identity for `alpha = 0`.
pub fn map_g(xi: f64, alpha: f64) -> Result<f64> {
    check_domain(xi, alpha)?;
    if alpha == 0.0 {
        return Ok(xi);
    }
    Ok((alpha * xi).asin() / alpha.asin())
}

/// Derivatives `g'`, `g''`, `g'''` of the map.
pub fn map_dg(xi: f64, alpha: f64, order: usize) -> Result<f64> {
    check_domain(xi, alpha)?;
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "map derivative order {order} not in 1..=3"
        )));
    }
    if alpha == 0.0 {
        return Ok(if order == 1 { 1.0 } else { 0.0 });
    }
    let a = alpha.asin();
    let q = 1.0 - (alpha * xi) * (alpha * xi);
    let s = q.sqrt();
    let a3 = alpha * alpha * alpha;
    Ok(match order {
        1 => alpha / (a * s),
        2 => a3 * xi / (a * q * s),
        _ => a3 * (1.0 + 2.0 * (alpha * xi) * (alpha * xi)) / (a * q * q * s),
    })
}

/// Balanced mapping parameter, rounded to working precision.
pub fn solve_alpha(n: usize, beta: f64, u: f64) -> Result<f64> {
    Ok(solve_alpha_dd(n, beta, u)?.to_f64())
}

/// Balanced mapping parameter in double-double.
///
/// Near `alpha = 1` the balance condition is ill-conditioned: a relative
/// change `d` in `alpha` moves the left-hand side by about `n^2 d / log(1/u)`,
/// so a residual of `1e-12` at `n` in the thousands needs more than 53 bits
/// of `alpha`.
pub fn solve_alpha_dd(n: usize, beta: f64, u: f64) -> Result<DoubleDouble> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "u = {u} must lie in (0, 1)"
        )));
    }
    let target = (n as f64).powf(beta) * u;
    if target.is_nan() || target >= 1.0 {
        return Err(Error::NoValidAlpha { value: target });
    }
    let nn = DoubleDouble::new(n as f64);
    let log_target = DoubleDouble::new(beta) * nn.ln() + DoubleDouble::new(u).ln();
    if log_target.hi >= 0.0 {
        return Err(Error::NoValidAlpha { value: target });
    }
    // t = target^(-1/n) > 1
    let t = (-log_target / nn).exp();
    Ok(DoubleDouble::new(2.0) / (t + t.recip()))
}

/// Relative residual `|rho^n - n^beta u| / (n^beta u)` with
/// `rho = alpha / (1 + sqrt(1 - alpha^2))`, evaluated in double-double.
pub fn balance_residual(alpha: DoubleDouble, n: usize, beta: f64, u: f64) -> f64 {
    let one = DoubleDouble::ONE;
    let rho = alpha / (one + (one - alpha * alpha).sqrt());
    let lhs = rho.powi(n as i32);
    let nn = DoubleDouble::new(n as f64);
    let rhs = (DoubleDouble::new(beta) * nn.ln()).exp() * DoubleDouble::new(u);
    ((lhs - rhs) / rhs).abs().to_f64()
}

/// Geometric decay factor `((1 - sqrt(1 - alpha^2)) / alpha)^n` of the
/// Chebyshev coefficients of the map, from its branch points at
/// `xi = +-1/alpha`.
pub fn singularity_decay(alpha: f64, n: usize) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    // 1 - sqrt(1 - a^2) = a^2 / (1 + sqrt(1 - a^2)), no cancellation
    let rho = alpha / (1.0 + (1.0 - alpha * alpha).sqrt());
    rho.powi(n as i32)
}

/// Decay factor with the `n^{-3/2}` modulation of a square-root branch point.
pub fn singularity_decay_modulated(alpha: f64, n: usize) -> f64 {
    singularity_decay(alpha, n) * (n as f64).powf(-1.5)
}

/// Chebyshev grid in `xi` together with its image `x_j = g(xi_j)`.
#[derive(Clone, Debug)]
pub struct MappedGrid {
    base: ChebGrid,
    params: MapParams,
    x: Vec<f64>,
    // g', g'', g''' at each xi_j
    dg: Vec<[f64; 3]>,
    stencil: Stencil<f64>,
    transform: ChebTransform,
}

impl MappedGrid {
    pub fn new(params: MapParams) -> Result<Self> {
        let base = ChebGrid::new(params.n)?;
        let x = base
            .nodes()
            .iter()
            .map(|&xi| map_g(xi, params.alpha))
            .collect::<Result<Vec<_>>>()?;
        let dg = base
            .nodes()
            .iter()
            .map(|&xi| {
                Ok([
                    map_dg(xi, params.alpha, 1)?,
                    map_dg(xi, params.alpha, 2)?,
                    map_dg(xi, params.alpha, 3)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        let stencil = Stencil::new(base.as_grid());
        let transform = ChebTransform::new(params.n)?;
        Ok(Self {
            base,
            params,
            x,
            dg,
            stencil,
            transform,
        })
    }

    pub fn base(&self) -> &ChebGrid {
        &self.base
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    /// Physical nodes `x_j = g(xi_j)`.
    pub fn x_nodes(&self) -> &[f64] {
        &self.x
    }

    /// `g'(xi_j)`.
    pub fn g_prime(&self) -> Vec<f64> {
        self.dg.iter().map(|d| d[0]).collect()
    }

    fn xi_derivative(
        &self,
        samples: &[f64],
        order: usize,
        backend: DiffBackend,
    ) -> Result<Vec<f64>> {
        match backend {
            DiffBackend::Weights => self
                .base
                .nodes()
                .iter()
                .map(|&zeta| Ok(dot_forward(&self.stencil.weights(order, zeta)?, samples)))
                .collect(),
            DiffBackend::Dct => self.transform.differentiate(samples, order),
        }
    }
}

/// Differentiation method in the `xi` variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffBackend {
    /// Finite-difference weights by partial products.
    Weights,
    /// Chebyshev transform, coefficient recurrence, inverse transform.
    Dct,
}

impl DiffBackend {
    /// Balance exponent that works well empirically for this backend.
    pub fn default_beta(self) -> f64 {
        match self {
            DiffBackend::Weights => 0.0,
            DiffBackend::Dct => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DiffBackend::Weights => "weights",
            DiffBackend::Dct => "dct",
        }
    }
}

impl std::str::FromStr for DiffBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weights" => Ok(DiffBackend::Weights),
            "dct" => Ok(DiffBackend::Dct),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// How higher mapped derivatives are formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MappedMode {
    /// `m` rounds of first derivative followed by division by `g'`.
    #[default]
    Iterated,
    /// `xi`-derivatives of order `1..=m` combined by the chain rule (`m <= 3`).
    Direct,
}

/// `m`-th derivative in `x` at the mapped nodes, iterating first derivatives.
pub fn mapped_diff(
    samples: &[f64],
    m: usize,
    mg: &MappedGrid,
    backend: DiffBackend,
) -> Result<Vec<f64>> {
    mapped_diff_with(samples, m, mg, backend, MappedMode::Iterated)
}

pub fn mapped_diff_with(
    samples: &[f64],
    m: usize,
    mg: &MappedGrid,
    backend: DiffBackend,
    mode: MappedMode,
) -> Result<Vec<f64>> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "mapped derivative order {m} not in 1..=4"
        )));
    }
    if samples.len() != mg.x.len() {
        return Err(Error::LengthMismatch {
            expected: mg.x.len(),
            actual: samples.len(),
        });
    }
    match mode {
        MappedMode::Iterated => {
            let mut cur = samples.to_vec();
            for _ in 0..m {
                let d = mg.xi_derivative(&cur, 1, backend)?;
                cur = d.iter().zip(&mg.dg).map(|(v, g)| v / g[0]).collect();
            }
            Ok(cur)
        }
        MappedMode::Direct => {
            if m > 3 {
                return Err(Error::InvalidArgument(
                    "direct mapped differentiation supports m <= 3".into(),
                ));
            }
            let big: Vec<Vec<f64>> = (1..=m)
                .map(|r| mg.xi_derivative(samples, r, backend))
                .collect::<Result<_>>()?;
            let out = (0..samples.len())
                .map(|j| {
                    let [g1, g2, g3] = mg.dg[j];
                    // F' = f' g', F'' = f'' g'^2 + f' g'', F''' = f''' g'^3 + 3 f'' g' g'' + f' g'''
                    let f1 = big[0][j] / g1;
                    if m == 1 {
                        return f1;
                    }
                    let f2 = (big[1][j] - f1 * g2) / (g1 * g1);
                    if m == 2 {
                        return f2;
                    }
                    (big[2][j] - 3.0 * f2 * g1 * g2 - f1 * g3) / (g1 * g1 * g1)
                })
                .collect();
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebgrid::diff_weights;

    #[test]
    fn map_endpoints_and_symmetry() {
        for &alpha in &[0.0, 0.3, 0.8, 0.999] {
            assert_eq!(map_g(0.0, alpha).unwrap(), 0.0);
            assert!((map_g(1.0, alpha).unwrap() - 1.0).abs() < 1e-15);
            assert!((map_g(-1.0, alpha).unwrap() + 1.0).abs() < 1e-15);
            assert_eq!(map_g(-0.4, alpha).unwrap(), -map_g(0.4, alpha).unwrap());
        }
        assert!((map_g(0.5, 1e-6).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn map_domain_errors() {
        assert!(matches!(map_g(1.5, 0.9), Err(Error::MapDomain(_))));
        assert!(map_g(0.5, 1.0).is_err());
        assert!(map_g(0.5, -0.1).is_err());
        assert!(map_dg(0.5, 0.5, 4).is_err());
    }

    #[test]
    fn map_derivatives() {
        let alpha: f64 = 0.9;
        assert_eq!(map_dg(0.0, alpha, 1).unwrap(), alpha / alpha.asin());
        assert_eq!(map_dg(0.0, alpha, 2).unwrap(), 0.0);
        let h = 1e-5;
        for &xi in &[-0.7, 0.0, 0.3, 0.95] {
            for order in 1..=3 {
                let fd = if order == 1 {
                    (map_g(xi + h, alpha).unwrap() - map_g(xi - h, alpha).unwrap()) / (2.0 * h)
                } else {
                    (map_dg(xi + h, alpha, order - 1).unwrap()
                        - map_dg(xi - h, alpha, order - 1).unwrap())
                        / (2.0 * h)
                };
                let exact = map_dg(xi, alpha, order).unwrap();
                assert!(
                    (fd - exact).abs() < 1e-7 * exact.abs().max(1.0),
                    "xi={xi} order={order}"
                );
            }
        }
    }

    #[test]
    fn alpha_closed_form_spot_value() {
        let alpha = solve_alpha(53, 0.0, UNIT_ROUNDOFF).unwrap();
        assert!((alpha - 0.8).abs() < 1e-15);
        // (1 - sqrt(1 - 0.64)) / 0.8 = 0.5, 0.5^53 = u
        assert_eq!((1.0 - (1.0f64 - 0.64).sqrt()) / 0.8, 0.5);
        assert!((singularity_decay(0.8, 53) / UNIT_ROUNDOFF - 1.0).abs() < 1e-13);
        assert!(balance_residual(DoubleDouble::new(0.8), 53, 0.0, UNIT_ROUNDOFF) < 1e-13);
        let dd = solve_alpha_dd(53, 0.0, UNIT_ROUNDOFF).unwrap();
        assert!(balance_residual(dd, 53, 0.0, UNIT_ROUNDOFF) < 1e-28);
    }

    #[test]
    fn alpha_tends_to_one() {
        assert!(solve_alpha(100, 0.0, 0.99).unwrap() > 0.999);
    }

    #[test]
    fn alpha_rejects_unreachable_target() {
        assert!(matches!(
            solve_alpha(16, 20.0, UNIT_ROUNDOFF),
            Err(Error::NoValidAlpha { .. })
        ));
        assert!(solve_alpha(16, 0.0, 1.5).is_err());
    }

    #[test]
    fn alpha_monotone_in_n() {
        for &beta in &[-1.5, 0.0, 0.5, 1.0] {
            let mut prev = 0.0;
            for n in 4..=2048 {
                let a = solve_alpha(n, beta, UNIT_ROUNDOFF).unwrap();
                assert!(a >= prev, "beta={beta} n={n}");
                prev = a;
            }
        }
    }

    #[test]
    fn decay_factor_examples() {
        assert!((singularity_decay(0.8, 1) - 0.5).abs() < 1e-15);
        let small = singularity_decay(1e-3, 2);
        assert!((small - 2.5e-7).abs() < 1e-12);
        assert!(singularity_decay_modulated(0.8, 4) < singularity_decay(0.8, 4));
    }

    #[test]
    fn identity_function_differentiates_to_one() {
        let params = MapParams::balanced(32, 0.0, UNIT_ROUNDOFF).unwrap();
        let mg = MappedGrid::new(params).unwrap();
        let f = mg.x_nodes().to_vec();
        for backend in [DiffBackend::Weights, DiffBackend::Dct] {
            let d = mapped_diff(&f, 1, &mg, backend).unwrap();
            for v in d {
                assert!((v - 1.0).abs() < 1e-11, "{backend:?}: {v}");
            }
        }
    }

    #[test]
    fn tiny_alpha_matches_unmapped() {
        let n = 32;
        let mg = MappedGrid::new(MapParams::new(1e-8, 0.0, n, UNIT_ROUNDOFF).unwrap()).unwrap();
        let f: Vec<f64> = mg
            .x_nodes()
            .iter()
            .map(|x| (2.0 * std::f64::consts::PI * x).sin())
            .collect();
        let a = mapped_diff(&f, 1, &mg, DiffBackend::Weights).unwrap();
        let b = diff_weights(&f, 1, mg.base()).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn second_derivative_of_sine_on_balanced_map() {
        let n = 64;
        let mg = MappedGrid::new(MapParams::balanced(n, 0.0, UNIT_ROUNDOFF).unwrap()).unwrap();
        let k = 2.0 * std::f64::consts::PI;
        let f: Vec<f64> = mg.x_nodes().iter().map(|x| (k * x).sin()).collect();
        let d = mapped_diff(&f, 2, &mg, DiffBackend::Weights).unwrap();
        let err = d
            .iter()
            .zip(mg.x_nodes())
            .fold(0.0f64, |e, (v, x)| e.max((v + k * k * (k * x).sin()).abs()));
        assert!(err <= 1e-6, "max error {err}");
    }

    #[test]
    fn direct_mode_matches_iterated() {
        let n = 48;
        let mg = MappedGrid::new(MapParams::balanced(n, 0.0, UNIT_ROUNDOFF).unwrap()).unwrap();
        let f: Vec<f64> = mg.x_nodes().iter().map(|x| (1.5 * x).cos()).collect();
        for m in 1..=3 {
            let a =
                mapped_diff_with(&f, m, &mg, DiffBackend::Weights, MappedMode::Iterated).unwrap();
            let b = mapped_diff_with(&f, m, &mg, DiffBackend::Weights, MappedMode::Direct).unwrap();
            for (p, q) in a.iter().zip(&b) {
                assert!((p - q).abs() < 1e-6, "m={m}: {p} vs {q}");
            }
        }
        assert!(mapped_diff_with(&f, 4, &mg, DiffBackend::Weights, MappedMode::Direct).is_err());
        assert!(mapped_diff(&f, 5, &mg, DiffBackend::Weights).is_err());
    }
}
