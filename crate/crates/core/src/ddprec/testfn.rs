//! Analytic test functions with derivatives, evaluated in double-double.

use crate::chebgrid::{cheb_derivative_coeffs, clenshaw};
use crate::ddprec::DoubleDouble;
use crate::error::{Error, Result};

/// Highest derivative order the test functions expose.
pub const MAX_DERIVATIVE_ORDER: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    /// `sin(k x)`; `k` is taken as the exact double given.
    Sin { k: f64 },
    /// `sum a_p x^p`.
    Monomial(Vec<f64>),
    /// `sum c_k T_k(x)`.
    Chebyshev(Vec<f64>),
}

impl TestFunction {
    /// `sin(2 pi x)`.
    pub fn sin_fixed() -> Self {
        TestFunction::Sin {
            k: 2.0 * std::f64::consts::PI,
        }
    }

    /// `sin(K x)` with `K = n pi / eta`, i.e. `eta` points per wavelength.
    pub fn sin_scaled(n: usize, eta: f64) -> Self {
        TestFunction::Sin {
            k: n as f64 * std::f64::consts::PI / eta,
        }
    }

    pub fn max_order(&self) -> usize {
        MAX_DERIVATIVE_ORDER
    }

    /// Polynomial degree, or `None` for non-polynomial functions.
    pub fn degree(&self) -> Option<usize> {
        match self {
            TestFunction::Sin { .. } => None,
            TestFunction::Monomial(a) | TestFunction::Chebyshev(a) => {
                Some(a.iter().rposition(|&c| c != 0.0).unwrap_or(0))
            }
        }
    }

    pub fn value_dd(&self, x: DoubleDouble) -> DoubleDouble {
        self.eval_dd(x, 0)
    }

    pub fn derivative_dd(&self, x: DoubleDouble, order: usize) -> Result<DoubleDouble> {
        if order > self.max_order() {
            return Err(Error::InsufficientDerivatives {
                requested: order,
                available: self.max_order(),
            });
        }
        Ok(self.eval_dd(x, order))
    }

    /// Value rounded to working precision.
    pub fn value(&self, x: f64) -> f64 {
        self.value_dd(DoubleDouble::new(x)).to_f64()
    }

    pub fn derivative(&self, x: f64, order: usize) -> Result<f64> {
        Ok(self.derivative_dd(DoubleDouble::new(x), order)?.to_f64())
    }

    pub fn samples(&self, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&x| self.value(x)).collect()
    }

    pub fn samples_dd(&self, nodes: &[f64]) -> Vec<DoubleDouble> {
        nodes
            .iter()
            .map(|&x| self.value_dd(DoubleDouble::new(x)))
            .collect()
    }

    fn eval_dd(&self, x: DoubleDouble, order: usize) -> DoubleDouble {
        match self {
            TestFunction::Sin { k } => {
                let k = DoubleDouble::new(*k);
                let arg = k * x;
                let v = match order % 4 {
                    0 => arg.sin(),
                    1 => arg.cos(),
                    2 => -arg.sin(),
                    _ => -arg.cos(),
                };
                v * k.powi(order as i32)
            }
            TestFunction::Monomial(a) => {
                let mut coeffs: Vec<DoubleDouble> =
                    a.iter().map(|&c| DoubleDouble::new(c)).collect();
                for _ in 0..order {
                    if coeffs.len() <= 1 {
                        return DoubleDouble::ZERO;
                    }
                    coeffs = coeffs
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(p, &c)| c * DoubleDouble::new(p as f64))
                        .collect();
                }
                coeffs
                    .iter()
                    .rev()
                    .fold(DoubleDouble::ZERO, |acc, &c| acc * x + c)
            }
            TestFunction::Chebyshev(c) => {
                let mut coeffs: Vec<DoubleDouble> =
                    c.iter().map(|&v| DoubleDouble::new(v)).collect();
                for _ in 0..order {
                    coeffs = cheb_derivative_coeffs(&coeffs);
                }
                clenshaw(&coeffs, x)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_derivatives_cycle() {
        let f = TestFunction::sin_fixed();
        let k = 2.0 * std::f64::consts::PI;
        let x = 0.3;
        assert!((f.value(x) - (k * x).sin()).abs() < 1e-15);
        assert!((f.derivative(x, 1).unwrap() - k * (k * x).cos()).abs() < 1e-14);
        assert!((f.derivative(x, 2).unwrap() + k * k * (k * x).sin()).abs() < 1e-13);
        assert!((f.derivative(x, 3).unwrap() + k.powi(3) * (k * x).cos()).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let fs = [
            TestFunction::sin_fixed(),
            TestFunction::sin_scaled(24, 4.0),
            TestFunction::Monomial(vec![0.5, -1.0, 0.0, 2.0, 0.25]),
            TestFunction::Chebyshev(vec![0.1, 0.2, -0.3, 0.4, 0.05, 0.01]),
        ];
        let h = 1e-6;
        for f in &fs {
            for order in 0..6 {
                let x = 0.37;
                let fd = (f.derivative(x + h, order).unwrap()
                    - f.derivative(x - h, order).unwrap())
                    / (2.0 * h);
                let exact = f.derivative(x, order + 1).unwrap();
                let scale = exact
                    .abs()
                    .max(f.derivative(x, order).unwrap().abs())
                    .max(1.0);
                assert!(
                    (fd - exact).abs() <= 1e-7 * scale,
                    "{f:?} order {order}: fd {fd} exact {exact}"
                );
            }
        }
    }

    #[test]
    fn polynomial_degree_and_vanishing_derivative() {
        let f = TestFunction::Monomial(vec![1.0, 2.0, 3.0]);
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.derivative(0.4, 3).unwrap(), 0.0);
        assert_eq!(f.derivative(0.5, 2).unwrap(), 6.0);
    }

    #[test]
    fn order_limit_is_enforced() {
        let f = TestFunction::sin_fixed();
        assert!(matches!(
            f.derivative(0.0, MAX_DERIVATIVE_ORDER + 1),
            Err(Error::InsufficientDerivatives { .. })
        ));
    }
}
