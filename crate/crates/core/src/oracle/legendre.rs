//! Gauss–Legendre quadrature and Legendre-series operators on its nodes.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre_with_derivative<T: Real>(m: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    if m == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=m {
        let kf = T::from_index(k);
        let p2 = ((kf + kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = T::from_index(m) * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Fill `out[n] = P_n(x)` for `n = 0..out.len()`.
pub fn legendre_table<T: Real>(x: T, out: &mut [T]) {
    for n in 0..out.len() {
        out[n] = match n {
            0 => T::one(),
            1 => x,
            _ => {
                let nf = T::from_index(n);
                ((nf + nf - T::one()) * x * out[n - 1] - (nf - T::one()) * out[n - 2]) / nf
            }
        };
    }
}

/// Gauss–Legendre nodes (increasing) and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// `m`-point rule by Newton iteration on `P_m`, exact for polynomials of
    /// degree `<= 2m - 1`. Nodes are computed on one half and mirrored.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "oracle_nodes",
                reason: "quadrature needs at least one node".into(),
            });
        }
        let mut nodes = vec![T::zero(); m];
        let mut weights = vec![T::zero(); m];
        let tol = T::epsilon() * T::lit(4.0);
        for i in 0..m.div_ceil(2) {
            // i-th largest root
            let guess = (T::PI() * (T::from_index(i) + T::lit(0.75)) / (T::from_index(m) + T::lit(0.5))).cos();
            let mut x = guess;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(m, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            if m % 2 == 1 && i == m / 2 {
                x = T::zero();
            }
            let (_, dp) = legendre_with_derivative(m, x);
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[m - 1 - i] = x;
            nodes[i] = -x;
            weights[m - 1 - i] = w;
            weights[i] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Legendre-series operators built on a Gauss–Legendre grid.
#[derive(Debug, Clone)]
pub struct LegendreOperators<T> {
    /// `coefficients[n][j]`: maps nodal values to Legendre coefficients,
    /// `c_n = (2n+1)/2 Σ_j w_j P_n(x_j) f_j`.
    pub coefficients: Matrix<T>,
    /// `cumulative[i][j]`: maps nodal values to `∫_{-1}^{x_i} f`.
    pub cumulative: Matrix<T>,
}

impl<T: Real> LegendreOperators<T> {
    pub fn new(rule: &GaussLegendre<T>) -> Self {
        let m = rule.len();
        let mut p = Matrix::zeros(m, m + 1);
        let mut row = vec![T::zero(); m + 1];
        for (i, &x) in rule.nodes.iter().enumerate() {
            legendre_table(x, &mut row);
            p.row_mut(i).copy_from_slice(&row);
        }
        let coefficients = Matrix::from_fn(m, m, |n, j| {
            T::from_index(2 * n + 1) * T::lit(0.5) * rule.weights[j] * p[(j, n)]
        });
        // ∫_{-1}^{x} P_0 = x + 1;  ∫_{-1}^{x} P_n = (P_{n+1} - P_{n-1}) / (2n+1)
        let integrals = Matrix::from_fn(m, m, |i, n| {
            if n == 0 {
                rule.nodes[i] + T::one()
            } else {
                (p[(i, n + 1)] - p[(i, n - 1)]) / T::from_index(2 * n + 1)
            }
        });
        let cumulative = integrals.matmul(&coefficients).expect("square operators of equal size");
        Self {
            coefficients,
            cumulative,
        }
    }

    /// Evaluate the Legendre interpolant of nodal values at `t`.
    pub fn interpolate(&self, values: &[T], t: T) -> T {
        let c = self.coefficients.mul_vec(values).expect("nodal vector length");
        let mut p = vec![T::zero(); c.len()];
        legendre_table(t, &mut p);
        c.iter().zip(&p).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }
}
