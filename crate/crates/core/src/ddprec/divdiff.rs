//! Divided-difference tables in double-double, with confluent (repeated)
//! nodes seeded from analytic derivatives.

use crate::ddprec::{DoubleDouble, TestFunction};
use crate::error::{Error, Result};

/// Full triangular table of divided differences over an expanded node list.
///
/// `entry(i, j)` is `f[z_i, ..., z_j]`. Repeated nodes are kept contiguous in
/// the order they were supplied.
#[derive(Clone, Debug)]
pub struct DivDiffTable {
    nodes: Vec<f64>,
    // levels[r][i] = f[z_i, ..., z_{i+r}]
    levels: Vec<Vec<DoubleDouble>>,
}

impl DivDiffTable {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `f[z_i, ..., z_j]` for `i <= j`.
    pub fn entry(&self, i: usize, j: usize) -> DoubleDouble {
        assert!(
            i <= j && j < self.nodes.len(),
            "entry ({i}, {j}) out of range"
        );
        self.levels[j - i][i]
    }

    /// Divided difference over all nodes.
    pub fn top(&self) -> DoubleDouble {
        self.entry(0, self.nodes.len() - 1)
    }

    /// Newton-form coefficients `f[z_0], f[z_0, z_1], ...`.
    pub fn newton_coefficients(&self) -> Vec<DoubleDouble> {
        (0..self.nodes.len()).map(|j| self.entry(0, j)).collect()
    }
}

/// Builds the divided-difference table of `f` over `nodes`, given as
/// `(abscissa, multiplicity)` pairs.
pub fn divdiff(f: &TestFunction, nodes: &[(f64, usize)]) -> Result<DivDiffTable> {
    let mut z = Vec::new();
    for &(x, mult) in nodes {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("node {x} is not finite")));
        }
        if mult == 0 {
            continue;
        }
        if mult - 1 > f.max_order() {
            return Err(Error::InsufficientDerivatives {
                requested: mult - 1,
                available: f.max_order(),
            });
        }
        z.extend(std::iter::repeat_n(x, mult));
    }
    if z.is_empty() {
        return Err(Error::InvalidArgument(
            "divided difference needs at least one node".into(),
        ));
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if z[i] == z[j] && z[i + 1..j].iter().any(|&w| w != z[i]) {
                return Err(Error::InvalidArgument(format!(
                    "repeated node {} must be given as one entry with multiplicity",
                    z[i]
                )));
            }
        }
    }

    let n = z.len();
    let mut levels: Vec<Vec<DoubleDouble>> = Vec::with_capacity(n);
    levels.push(
        z.iter()
            .map(|&x| f.value_dd(DoubleDouble::new(x)))
            .collect(),
    );
    // confluent entries: f^(r)(x) / r!
    let mut factorial = DoubleDouble::ONE;
    for r in 1..n {
        factorial *= DoubleDouble::new(r as f64);
        let prev = &levels[r - 1];
        let mut cur = Vec::with_capacity(n - r);
        for i in 0..n - r {
            let (a, b) = (z[i], z[i + r]);
            let v = if a == b {
                f.derivative_dd(DoubleDouble::new(a), r)? / factorial
            } else {
                (prev[i + 1] - prev[i]) / DoubleDouble::from_diff(b, a)
            };
            cur.push(v);
        }
        levels.push(cur);
    }
    Ok(DivDiffTable { nodes: z, levels })
}

/// Working-precision divided difference over distinct nodes, for cross-checks.
pub fn divdiff_f64(values: &[f64], nodes: &[f64]) -> f64 {
    let mut c = values.to_vec();
    let n = nodes.len();
    for r in 1..n {
        for i in (r..n).rev() {
            c[i] = (c[i] - c[i - 1]) / (nodes[i] - nodes[i - r]);
        }
    }
    c[n - 1]
}
