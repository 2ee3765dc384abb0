//! Nyström discretisation of the regularised second-kind Fredholm system.
//!
//! For the opening mode the unknowns are `χ₁ = Re G''''` and a density `χ₂`
//! from which `Im Q` is rebuilt. `Re G = ∫ 𝔾 χ₁` satisfies the clamped tip
//! conditions by construction, the Hilbert transform of `Re G'` becomes the
//! smooth kernel `K₁`, and inverting the Hilbert transform in the
//! jump-traction relation introduces the logarithmic kernel `ω₁`. The coupled
//! system on Gauss–Legendre nodes reads
//!
//! ```text
//! [ g3(κ+1) I - g2(κ+1) 𝔾_tt - (κ+1)²/(4κ) K₁     (κ-1)/(4κ) H[R]              ] [χ₁]   [f]
//! [ (1-κ²)/(4κ) 𝕂 𝔾_t                              g4 I - g1 𝕂 + (κ+1)/(4κ) 𝕂 Ω ] [χ₂] = [0]
//! ```
//!
//! where `Ω` is the product rule for `ω₁` (logarithmic singularity removed by
//! subtraction) and `H[R]` is the Hilbert transform of `R = ∫ ω₁ χ₂`, which
//! equals `∫_{-1}^{t} χ₂ - (1/π) ∫ arccos(u) χ₂(u) du` exactly.
//!
//! The sliding mode reuses the same code with the groups exchanged
//! `(g1, g2, g3, g4) -> (g2, g1, g4, g3)` and forcing `s12`; its outputs map
//! back as `Im G = -Re G'`, `Re Q = Im Q'` of the exchanged problem.

use crate::error::Result;
use crate::linalg::{solve_checked, Matrix};
use crate::oracle::kernels::{green_g, green_g_t, green_g_tt, green_k, hilbert_green_t, omega1_unchecked};
use crate::oracle::legendre::{legendre_table, GaussLegendre, LegendreOperators};
use crate::problem::{Gammas, ProblemParams};
use crate::scalar::Real;
use crate::spectral::Mode;

/// Default Nyström node count.
pub const DEFAULT_ORACLE_NODES: usize = 200;

/// Discrete operators shared by the block system.
struct Operators<T> {
    rule: GaussLegendre<T>,
    legendre: LegendreOperators<T>,
    green_t: Matrix<T>,
    green_tt: Matrix<T>,
    green_k: Matrix<T>,
    hilbert_green_t: Matrix<T>,
    omega: Matrix<T>,
    hilbert_r: Matrix<T>,
}

impl<T: Real> Operators<T> {
    fn new(m: usize) -> Result<Self> {
        let rule = GaussLegendre::<T>::new(m)?;
        let legendre = LegendreOperators::new(&rule);
        let x = &rule.nodes;
        let w = &rule.weights;
        let green_t = Matrix::from_fn(m, m, |i, j| green_g_t(x[i], x[j]) * w[j]);
        let green_tt = Matrix::from_fn(m, m, |i, j| green_g_tt(x[i], x[j]) * w[j]);
        let green_k = Matrix::from_fn(m, m, |i, j| green_k(x[i], x[j]) * w[j]);
        let hilbert_green_t = Matrix::from_fn(m, m, |i, j| hilbert_green_t(x[i], x[j]) * w[j]);
        let mut omega = Matrix::from_fn(m, m, |i, j| {
            if i == j {
                T::zero()
            } else {
                omega1_unchecked(x[i], x[j]) * w[j]
            }
        });
        for i in 0..m {
            // ∫ ω₁(t, s) ds = -sqrt(1 - t²)
            let off: T = omega.row(i).iter().fold(T::zero(), |a, &v| a + v);
            omega[(i, i)] = -off - (T::one() - x[i] * x[i]).sqrt();
        }
        let mut hilbert_r = legendre.cumulative.clone();
        for i in 0..m {
            for j in 0..m {
                hilbert_r[(i, j)] -= x[j].acos() * w[j] / T::PI();
            }
        }
        Ok(Self {
            rule,
            legendre,
            green_t,
            green_tt,
            green_k,
            hilbert_green_t,
            omega,
            hilbert_r,
        })
    }
}

/// Max-row-sum norms of the discrete integral operators; bounded uniformly
/// in the node count for compact operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNorms<T> {
    pub green_tt: T,
    pub hilbert_green_t: T,
    pub hilbert_r: T,
    pub k_green_t: T,
    pub k_omega: T,
}

impl<T: Real> OperatorNorms<T> {
    pub fn as_array(&self) -> [T; 5] {
        [
            self.green_tt,
            self.hilbert_green_t,
            self.hilbert_r,
            self.k_green_t,
            self.k_omega,
        ]
    }
}

/// Norms of the composed operators on an `m`-node grid.
pub fn operator_norms<T: Real>(m: usize) -> Result<OperatorNorms<T>> {
    let ops = Operators::<T>::new(m)?;
    Ok(OperatorNorms {
        green_tt: ops.green_tt.norm_inf(),
        hilbert_green_t: ops.hilbert_green_t.norm_inf(),
        hilbert_r: ops.hilbert_r.norm_inf(),
        k_green_t: ops.green_k.matmul(&ops.green_t)?.norm_inf(),
        k_omega: ops.green_k.matmul(&ops.omega)?.norm_inf(),
    })
}

/// Nyström solution of one mode.
#[derive(Debug, Clone)]
pub struct OracleSolution<T> {
    pub mode: Mode,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    /// `χ₁` at the nodes (of the opening-form problem).
    pub chi1: Vec<T>,
    /// `χ₂` at the nodes (of the opening-form problem).
    pub chi2: Vec<T>,
    kappa: T,
    chi2_legendre: Vec<T>,
    /// Condition estimate of the block system.
    pub condition: T,
}

impl<T: Real> OracleSolution<T> {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `χ₂(t)` from its Legendre interpolant.
    pub fn chi2_at(&self, t: T) -> T {
        let mut p = vec![T::zero(); self.chi2_legendre.len()];
        legendre_table(t, &mut p);
        self.chi2_legendre
            .iter()
            .zip(&p)
            .fold(T::zero(), |a, (&c, &v)| a + c * v)
    }

    fn opening_g(&self, t: T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.chi1)
            .fold(T::zero(), |a, ((&x, &w), &c)| a + green_g(t, x) * w * c)
    }

    fn opening_g_prime(&self, t: T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.chi1)
            .fold(T::zero(), |a, ((&x, &w), &c)| a + green_g_t(t, x) * w * c)
    }

    fn opening_q(&self, t: T) -> T {
        let kappa = self.kappa;
        let four_k = T::lit(4.0) * kappa;
        let c_t = self.chi2_at(t);
        let mut r = -c_t * (T::one() - t * t).max(T::zero()).sqrt();
        for ((&x, &w), &c) in self.nodes.iter().zip(&self.weights).zip(&self.chi2) {
            if x != t {
                r += omega1_unchecked(t, x) * (c - c_t) * w;
            }
        }
        (kappa + T::one()) / four_k * r + (T::one() - kappa * kappa) / four_k * self.opening_g_prime(t)
    }

    /// The `G` component of this mode at `t`: `Re G` (mode I) or `Im G`
    /// (mode II).
    pub fn g_component(&self, t: T) -> T {
        match self.mode {
            Mode::I => self.opening_g(t),
            Mode::II => -self.opening_g(t),
        }
    }

    /// The `G'` component of this mode at `t`: `Re G'` or `Im G'`.
    pub fn g_prime_component(&self, t: T) -> T {
        match self.mode {
            Mode::I => self.opening_g_prime(t),
            Mode::II => -self.opening_g_prime(t),
        }
    }

    /// The `Q` component of this mode at `t`: `Im Q` (mode I) or `Re Q`
    /// (mode II).
    pub fn q_component(&self, t: T) -> T {
        self.opening_q(t)
    }
}

/// Solve the opening-form Fredholm system for the given groups and forcing.
fn solve_opening_form<T: Real>(mode: Mode, kappa: T, g: Gammas<T>, forcing: T, m: usize) -> Result<OracleSolution<T>> {
    let ops = Operators::<T>::new(m)?;
    let one = T::one();
    let kp1 = kappa + one;
    let four_k = T::lit(4.0) * kappa;
    let ident = Matrix::<T>::identity(m);

    let a11 = Matrix::from_fn(m, m, |i, j| {
        g.g3 * kp1 * ident[(i, j)]
            - g.g2 * kp1 * ops.green_tt[(i, j)]
            - kp1 * kp1 / four_k * ops.hilbert_green_t[(i, j)]
    });
    let mut a12 = ops.hilbert_r.clone();
    a12.scale((kappa - one) / four_k);
    let mut a21 = ops.green_k.matmul(&ops.green_t)?;
    a21.scale((one - kappa * kappa) / four_k);
    let k_omega = ops.green_k.matmul(&ops.omega)?;
    let a22 = Matrix::from_fn(m, m, |i, j| {
        g.g4 * ident[(i, j)] - g.g1 * ops.green_k[(i, j)] + kp1 / four_k * k_omega[(i, j)]
    });
    let a = Matrix::block2(&a11, &a12, &a21, &a22)?;
    let mut b = vec![T::zero(); 2 * m];
    b[..m].iter_mut().for_each(|v| *v = forcing);
    let sol = solve_checked(&a, &b)?;
    let chi1 = sol.x[..m].to_vec();
    let chi2 = sol.x[m..].to_vec();
    let chi2_legendre = ops.legendre.coefficients.mul_vec(&chi2)?;
    Ok(OracleSolution {
        mode,
        nodes: ops.rule.nodes,
        weights: ops.rule.weights,
        chi1,
        chi2,
        kappa,
        chi2_legendre,
        condition: sol.condition,
    })
}

/// Nyström solve of one mode with `m` Gauss–Legendre nodes.
pub fn nystrom_solve_mode<T: Real>(params: &ProblemParams<T>, mode: Mode, m: usize) -> Result<OracleSolution<T>> {
    match mode {
        Mode::I => solve_opening_form(mode, params.kappa(), params.gammas, params.opening_forcing(), m),
        Mode::II => solve_opening_form(
            mode,
            params.kappa(),
            params.gammas.swapped(),
            params.sliding_forcing(),
            m,
        ),
    }
}

/// Nyström solve of the opening (mode I) problem.
pub fn nystrom_solve<T: Real>(params: &ProblemParams<T>, m: usize) -> Result<OracleSolution<T>> {
    nystrom_solve_mode(params, Mode::I, m)
}
