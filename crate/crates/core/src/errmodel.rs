//! Rounding-error bounds for finite-difference weights and their large-`n`
//! behaviour on Chebyshev points.
//!
//! `U_R` bounds the error of weights computed by partial products and applied
//! to rounded samples; `U'_R` assumes exact weights and only accounts for the
//! final summation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::chebgrid::{node_product, ChebGrid};
use crate::error::{Error, Result};
use crate::symfun::{elem_sym, Grid, Stencil, WeightSet};

/// `gamma_n = n u / (1 - n u)`.
pub fn gamma(n: usize, u: f64) -> Result<f64> {
    let nu = n as f64 * u;
    if u.is_nan() || u < 0.0 || nu >= 1.0 {
        return Err(Error::GammaUndefined { nu });
    }
    Ok(nu / (1.0 - nu))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaFactor {
    pub n: usize,
    pub u: f64,
    pub value: f64,
}

impl GammaFactor {
    pub fn new(n: usize, u: f64) -> Result<Self> {
        Ok(Self {
            n,
            u,
            value: gamma(n, u)?,
        })
    }
}

/// Power sums `P_r = sum_{j != l} (x_l - x_j)^-r`, `r = 1..=4`, and the
/// variants with node `k` removed.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSums {
    pub pivot: usize,
    /// `p[r - 1] = P_r`.
    pub p: [f64; 4],
    /// `deleted[k][r - 1] = P_r - (x_l - x_k)^-r`; equals `p` at `k = l`.
    pub deleted: Vec<[f64; 4]>,
}

impl PowerSums {
    pub fn new(grid: &Grid, pivot: usize) -> Result<Self> {
        let x = grid.nodes();
        if pivot >= x.len() {
            return Err(Error::InvalidArgument(format!(
                "pivot {pivot} outside grid of {} nodes",
                x.len()
            )));
        }
        let recip: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                if j == pivot {
                    0.0
                } else {
                    1.0 / (x[pivot] - xj)
                }
            })
            .collect();
        let mut p = [0.0; 4];
        for &q in &recip {
            let mut qr = 1.0;
            for pr in &mut p {
                qr *= q;
                *pr += qr;
            }
        }
        let deleted = recip
            .iter()
            .map(|&q| {
                let mut d = p;
                let mut qr = 1.0;
                for dr in &mut d {
                    qr *= q;
                    *dr -= qr;
                }
                d
            })
            .collect();
        Ok(Self { pivot, p, deleted })
    }
}

/// Elementary symmetric functions `E_0..E_4` of the reciprocals
/// `1 / (x_l - x_j)`, and the variants with node `k` removed.
#[derive(Clone, Debug, PartialEq)]
pub struct ElemSymRatios {
    pub e: [f64; 5],
    pub deleted: Vec<[f64; 5]>,
}

/// `E_0..E_m` from power sums by the Newton identities
/// `r E_r = sum_{i=1}^r (-1)^{i-1} E_{r-i} P_i`.
pub fn newton_e_from_p(p: &[f64; 4], m: usize) -> Result<[f64; 5]> {
    if m > 4 {
        return Err(Error::InvalidArgument(format!(
            "Newton identities implemented for m <= 4, got {m}"
        )));
    }
    let mut e = [0.0; 5];
    e[0] = 1.0;
    for r in 1..=m {
        let mut s = 0.0;
        for i in 1..=r {
            let term = e[r - i] * p[i - 1];
            s += if i % 2 == 1 { term } else { -term };
        }
        e[r] = s / r as f64;
    }
    Ok(e)
}

impl ElemSymRatios {
    /// Newton-identity path.
    pub fn from_power_sums(ps: &PowerSums, m: usize) -> Result<Self> {
        Ok(Self {
            e: newton_e_from_p(&ps.p, m)?,
            deleted: ps
                .deleted
                .iter()
                .map(|d| newton_e_from_p(d, m))
                .collect::<Result<_>>()?,
        })
    }

    /// Direct path: symmetric functions of the reciprocals by recurrence.
    pub fn direct(grid: &Grid, pivot: usize, m: usize) -> Result<Self> {
        if m > 4 {
            return Err(Error::InvalidArgument(format!("m = {m} exceeds 4")));
        }
        let x = grid.nodes();
        let recip: Vec<f64> = (0..x.len())
            .filter(|&j| j != pivot)
            .map(|j| 1.0 / (x[pivot] - x[j]))
            .collect();
        let take = |vals: &[f64]| -> Result<[f64; 5]> {
            let mut e = [0.0; 5];
            e[0] = 1.0;
            if !vals.is_empty() {
                let t = elem_sym(vals)?;
                for (r, er) in e.iter_mut().enumerate().take(m + 1).skip(1) {
                    *er = t.get(r);
                }
            }
            Ok(e)
        };
        let e = take(&recip)?;
        let deleted = (0..x.len())
            .map(|k| {
                if k == pivot {
                    return Ok(e);
                }
                let pos = if k < pivot { k } else { k - 1 };
                let mut v = recip.clone();
                v.remove(pos);
                take(&v)
            })
            .collect::<Result<_>>()?;
        Ok(Self { e, deleted })
    }
}

fn zeta_even(r: usize) -> f64 {
    match r {
        1 => PI.powi(2) / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        _ => PI.powi(8) / 9450.0,
    }
}

/// Large-`n` Chebyshev edge power sum `2^r zeta(2r) n^{2r} / pi^{2r}`, or the
/// variant with node `k` removed, `2^r (zeta(2r) - k^{-2r}) n^{2r} / pi^{2r}`.
pub fn power_sum_asym(r: usize, n: usize, k: Option<usize>) -> Result<f64> {
    if !(1..=4).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "power sum order {r} not in 1..=4"
        )));
    }
    let mut z = zeta_even(r);
    if let Some(k) = k {
        if k == 0 {
            return Err(Error::InvalidArgument("deleted index must be >= 1".into()));
        }
        z -= (k as f64).powi(-2 * r as i32);
    }
    Ok(2f64.powi(r as i32) * z * (n as f64 / PI).powi(2 * r as i32))
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Rounding-error bound `U_R` for the `m`-th derivative at `zeta`:
/// `gamma_{6n-m+4} |f| sum_k m! |w_k| S_{n-m}({|x_j - zeta|}_{j != k})`.
pub fn bound_ur(grid: &Grid, m: usize, zeta: f64, fabs: f64, u: f64) -> Result<f64> {
    let n = grid.n();
    if m > n {
        return Err(Error::OrderExceedsDegree {
            order: m,
            degree: n,
        });
    }
    let terms = Stencil::<f64>::new(grid).abs_partial_products(m, zeta)?;
    let total: f64 = terms.iter().sum();
    if !total.is_finite() {
        return Err(Error::Numeric("rounding bound overflowed".into()));
    }
    Ok(gamma(6 * n + 4 - m, u)? * fabs * total)
}

/// `U_R` at the Chebyshev edge `zeta = 1` through the decomposition
/// `E_m^0 + sum_{k >= 1} (|W_0| / |W_k|) E_{m-1}^{0,k} / (1 - x_k)`, with the
/// node products `W_k` in closed form and `E` from the Newton identities.
pub fn bound_ur_decomposition(grid: &ChebGrid, m: usize, fabs: f64, u: f64) -> Result<f64> {
    let n = grid.n();
    if m > n || m > 4 {
        return Err(Error::OrderExceedsDegree {
            order: m,
            degree: n.min(4),
        });
    }
    if m == 0 {
        return Ok(gamma(6 * n + 4, u)? * fabs);
    }
    let ps = PowerSums::new(grid.as_grid(), 0)?;
    let e = ElemSymRatios::from_power_sums(&ps, m)?;
    let w0 = node_product(grid, 0).abs();
    let x = grid.nodes();
    let mut total = e.e[m];
    for (k, &xk) in x.iter().enumerate().skip(1) {
        let ratio = w0 / node_product(grid, k).abs();
        total += ratio * e.deleted[k][m - 1] / (1.0 - xk);
    }
    Ok(gamma(6 * n + 4 - m, u)? * fabs * factorial(m) * total)
}

/// Summation-only bound `U'_R = |f| sum_k |w_k| gamma_{k+2}`.
pub fn bound_ur_prime(ws: &WeightSet, fabs: f64, u: f64) -> Result<f64> {
    let mut total = 0.0;
    for (k, w) in ws.weights.iter().enumerate() {
        total += w.abs() * gamma(k + 2, u)?;
    }
    Ok(fabs * total)
}

/// Converged constants `c_1..c_4` of `U_R ~ gamma |f| m! c_m n^{2m}`.
pub fn asymptotic_constants() -> &'static [f64; 4] {
    static CONSTANTS: OnceLock<[f64; 4]> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        const TERMS: usize = 1_000_000;
        let pi2 = PI * PI;
        let mut c = [0.0; 4];
        // smallest terms first
        for k in (1..=TERMS).rev() {
            let q = pi2 * (k * k) as f64;
            c[0] += 4.0 / q;
            c[1] += 4.0 / q * (1.0 / 3.0 - 2.0 / q);
            c[2] += 2.0 / (15.0 * q * q * q) * (q * q - 20.0 * q + 120.0).abs();
            c[3] += 2.0 / (315.0 * q * q * q * q)
                * (q * q * q - 42.0 * q * q + 840.0 * q - 5040.0).abs();
        }
        c[0] += 1.0 / 3.0;
        c[1] += 1.0 / 30.0;
        c[2] += 1.0 / 630.0;
        c[3] += 1.0 / 22680.0;
        c
    })
}

/// Asymptotic `U_R` at the Chebyshev edge: `gamma_{6n+4-m} |f| m! c_m n^{2m}`.
pub fn asym_ur(m: usize, n: usize, fabs: f64, u: f64) -> Result<f64> {
    Ok(gamma(6 * n + 4 - m, u)? * asym_ur_factor(m, n, fabs)?)
}

/// `asym_ur` without the `gamma` factor, so callers can substitute `n u` or `u`.
pub fn asym_ur_factor(m: usize, n: usize, fabs: f64) -> Result<f64> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "asymptotic bound needs m in 1..=4, got {m}"
        )));
    }
    Ok(fabs * factorial(m) * asymptotic_constants()[m - 1] * (n as f64).powi(2 * m as i32))
}

/// Large-`n` form of `U'_R` for the first derivative at the Chebyshev edge,
/// `(8 / pi^2) u |f| n^2 log n`.
pub fn asym_ur_prime(n: usize, fabs: f64, u: f64) -> f64 {
    let nf = n as f64;
    8.0 / (PI * PI) * u * fabs * nf * nf * nf.ln()
}
