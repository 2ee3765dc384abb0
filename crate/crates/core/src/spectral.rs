//! Chebyshev–Galerkin discretisation of the two decoupled crack systems.
//!
//! The jump functions are expanded in the weighted second-kind basis,
//!
//! ```text
//! Re G'(t) = Σ_{k=1}^{N+2} C_k U_k(t) w(t),   Im Q(t) = Σ_{k=0}^{N+1} D_k U_k(t) w(t)   (opening, mode I)
//! Im G'(t) = Σ_{k=1}^{N+2} A_k U_k(t) w(t),   Re Q(t) = Σ_{k=0}^{N+1} B_k U_k(t) w(t)   (sliding, mode II)
//! ```
//!
//! with `w = sqrt(1 - t²)`. Each mode gives `2N + 4` unknowns. The traction
//! balance is projected onto `T_j (1-t²)²` and the jump-traction relation onto
//! `T_j (1-t²)^{3/2}` for `j = 0..=N`; two rows enforce the vanishing double
//! force at the tips.

use std::fmt;

use num_complex::Complex;

use crate::chebyshev::{compute_influence_integrals, t_table, u_table, InfluenceTables, DEFAULT_QUADRATURE_NODES};
use crate::error::{Error, Result};
use crate::linalg::{solve_checked, Matrix};
use crate::problem::{Gammas, ProblemParams};
use crate::scalar::Real;

/// Default polynomial order.
pub const DEFAULT_ORDER: usize = 30;

/// Loading mode of a decoupled system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Opening: unknowns `C` (Re G') and `D` (Im Q), forced by `s22`.
    I,
    /// Sliding: unknowns `A` (Im G') and `B` (Re Q), forced by `s12`.
    II,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::I => "I",
            Mode::II => "II",
        })
    }
}

/// Coefficients of one mode. Both vectors have length `N + 3` and are
/// indexed by `k = 0..=N+2`; `g[0] = 0` and `q[N+2] = 0` always hold.
///
/// For [`Mode::I`] `g` holds `C_k` and `q` holds `D_k`; for [`Mode::II`]
/// `g` holds `A_k` and `q` holds `B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients<T> {
    pub mode: Mode,
    pub n: usize,
    pub g: Vec<T>,
    pub q: Vec<T>,
}

impl<T: Real> ModeCoefficients<T> {
    pub fn zeros(mode: Mode, n: usize) -> Self {
        Self {
            mode,
            n,
            g: vec![T::zero(); n + 3],
            q: vec![T::zero(); n + 3],
        }
    }

    /// Unpack a solution vector laid out as `[g_1..g_{N+2}, q_0..q_{N+1}]`.
    pub fn from_unknowns(mode: Mode, n: usize, x: &[T]) -> Result<Self> {
        if x.len() != 2 * n + 4 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} unknowns for N = {n}, got {}",
                2 * n + 4,
                x.len()
            )));
        }
        let mut c = Self::zeros(mode, n);
        c.g[1..].copy_from_slice(&x[..n + 2]);
        c.q[..n + 2].copy_from_slice(&x[n + 2..]);
        Ok(c)
    }

    /// Inverse of [`ModeCoefficients::from_unknowns`].
    pub fn to_unknowns(&self) -> Vec<T> {
        let n = self.n;
        self.g[1..].iter().chain(&self.q[..n + 2]).copied().collect()
    }

    pub fn max_abs(&self) -> T {
        self.g.iter().chain(&self.q).fold(T::zero(), |a, v| a.max(v.abs()))
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            g: self.g.iter().map(|&v| v * c).collect(),
            q: self.q.iter().map(|&v| v * c).collect(),
            ..self.clone()
        }
    }
}

/// Coefficients of both modes at a common order `N`; a missing mode is
/// treated as identically zero by the evaluators that allow it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet<T> {
    pub n: usize,
    pub mode_i: Option<ModeCoefficients<T>>,
    pub mode_ii: Option<ModeCoefficients<T>>,
}

impl<T: Real> CoefficientSet<T> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            mode_i: None,
            mode_ii: None,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            mode_i: Some(ModeCoefficients::zeros(Mode::I, n)),
            mode_ii: Some(ModeCoefficients::zeros(Mode::II, n)),
        }
    }

    /// Store the coefficients of one mode.
    pub fn insert(&mut self, coeffs: ModeCoefficients<T>) -> Result<()> {
        if coeffs.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "coefficient order {} does not match set order {}",
                coeffs.n, self.n
            )));
        }
        match coeffs.mode {
            Mode::I => self.mode_i = Some(coeffs),
            Mode::II => self.mode_ii = Some(coeffs),
        }
        Ok(())
    }

    pub fn get(&self, mode: Mode) -> Option<&ModeCoefficients<T>> {
        match mode {
            Mode::I => self.mode_i.as_ref(),
            Mode::II => self.mode_ii.as_ref(),
        }
    }

    /// Error unless both modes are present.
    pub fn require_both(&self) -> Result<()> {
        if self.mode_i.is_none() {
            return Err(Error::ModeMissing(Mode::I));
        }
        if self.mode_ii.is_none() {
            return Err(Error::ModeMissing(Mode::II));
        }
        Ok(())
    }

    fn component(&self, mode: Mode, g: bool) -> Vec<T> {
        match self.get(mode) {
            Some(c) if g => c.g.clone(),
            Some(c) => c.q.clone(),
            None => vec![T::zero(); self.n + 3],
        }
    }

    /// `A_k` (zeros when mode II is missing).
    pub fn a(&self) -> Vec<T> {
        self.component(Mode::II, true)
    }

    /// `B_k` (zeros when mode II is missing).
    pub fn b(&self) -> Vec<T> {
        self.component(Mode::II, false)
    }

    /// `C_k` (zeros when mode I is missing).
    pub fn c(&self) -> Vec<T> {
        self.component(Mode::I, true)
    }

    /// `D_k` (zeros when mode I is missing).
    pub fn d(&self) -> Vec<T> {
        self.component(Mode::I, false)
    }

    /// Complex coefficient vectors `(C_k + i A_k, B_k + i D_k)` of `G'` and `Q`.
    pub fn complex_coefficients(&self) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let gp = c.iter().zip(&a).map(|(&re, &im)| Complex::new(re, im)).collect();
        let q = b.iter().zip(&d).map(|(&re, &im)| Complex::new(re, im)).collect();
        (gp, q)
    }
}

/// Square Galerkin system for one mode. Unknowns are ordered
/// `[g_1..g_{N+2}, q_0..q_{N+1}]` (i.e. `C` then `D`, or `A` then `B`); rows
/// `0..=N` hold the traction balance, rows `N+1..=2N+1` the jump-traction
/// relation, and the final two rows the tip conditions at `+1` and `-1`.
#[derive(Debug, Clone)]
pub struct LinearSystem<T> {
    pub mode: Mode,
    pub n: usize,
    pub matrix: Matrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> LinearSystem<T> {
    pub fn size(&self) -> usize {
        self.rhs.len()
    }
}

/// Coefficient-space roles of the four surface groups in one mode's system.
struct ModeRoles<T> {
    /// Membrane-like group multiplying `G''` in the traction balance.
    balance_2: T,
    /// Bending-like group multiplying `G''''` in the traction balance.
    balance_4: T,
    /// Group multiplying `d/dt` in the jump-traction relation.
    jump_1: T,
    /// Group multiplying `d³/dt³` in the jump-traction relation.
    jump_3: T,
}

/// Assemble the Galerkin system for `mode`. `tables` must have been built at
/// order `n`.
pub fn assemble_system<T: Real>(
    mode: Mode,
    params: &ProblemParams<T>,
    tables: &InfluenceTables<T>,
    n: usize,
) -> Result<LinearSystem<T>> {
    if tables.order() != n {
        return Err(Error::DimensionMismatch(format!(
            "influence tables of order {} used for N = {n}",
            tables.order()
        )));
    }
    let mut sys = match mode {
        Mode::I => assemble_opening(params, tables, n),
        Mode::II => assemble_sliding(params, tables, n),
    };
    let scale = T::lit(2.0) / T::PI();
    for row in 0..2 * n + 2 {
        sys.matrix.row_mut(row).iter_mut().for_each(|v| *v *= scale);
        sys.rhs[row] *= scale;
    }
    Ok(sys)
}

fn kappa_factors<T: Real>(kappa: T) -> (T, T, T) {
    let kp1 = kappa + T::one();
    // (r, q', kappa + 1) with r = (κ-1)/(κ+1), q' = 4κ/(κ+1)
    ((kappa - T::one()) / kp1, T::lit(4.0) * kappa / kp1, kp1)
}

/// `((k+1), (k+2), (k+3))` as scalars.
fn shifts<T: Real>(k: usize) -> (T, T, T) {
    (T::from_index(k + 1), T::from_index(k + 2), T::from_index(k + 3))
}

/// Opening mode: unknowns `(C, D)`.
fn assemble_opening<T: Real>(params: &ProblemParams<T>, tab: &InfluenceTables<T>, n: usize) -> LinearSystem<T> {
    let roles = ModeRoles {
        balance_2: params.gammas.g2,
        balance_4: params.gammas.g3,
        jump_1: params.gammas.g1,
        jump_3: params.gammas.g4,
    };
    let (r, qp, kp1) = kappa_factors(params.kappa());
    let km1 = params.kappa() - T::one();
    let f = params.opening_forcing();
    let size = 2 * n + 4;
    let mut a = Matrix::zeros(size, size);
    let mut rhs = vec![T::zero(); size];
    let half_pi = T::FRAC_PI_2();
    let three = T::lit(3.0);

    for j in 0..=n {
        // Traction balance:
        //   Σ(-C_k + r D_k) I1 + f J = g2(κ+1) Σ C_k (k+1) I2
        //     + g3(κ+1) Σ C_k (k+1)(k+2)(k+3) I3 - 3 g3(κ+1) Σ C_k (k+1)(k+3) I4
        //     - 3 g3(κ+1) Σ C_k (k+1) δ_{j,k+3} π/2
        for k in 1..=n + 2 {
            let (k1, k2, k3) = shifts::<T>(k);
            let delta = if j == k + 3 { half_pi } else { T::zero() };
            let v = -tab.i1[j][k]
                - roles.balance_2 * kp1 * k1 * tab.i2[j][k]
                - roles.balance_4 * kp1 * k1 * k2 * k3 * tab.i3[j][k]
                + three * roles.balance_4 * kp1 * k1 * k3 * tab.i4[j][k]
                + three * roles.balance_4 * kp1 * k1 * delta;
            a[(j, k - 1)] += v;
        }
        for k in 0..=n + 1 {
            a[(j, n + 2 + k)] += r * tab.i1[j][k];
        }
        rhs[j] = -f * tab.j1[j];

        // Jump-traction relation with E_k = (κ-1) C_k + q' D_k:
        //   -Σ D_k I5 = g1 Σ E_k (k+1) I6
        //     - g4 Σ E_k (-(k+1)(k+2)(k+3) I7 - 3(k+1)(k+3) δ_{j,k+2} π/2 + 3(k+1) I8)
        let row = n + 1 + j;
        for k in 0..=n + 2 {
            let (k1, k2, k3) = shifts::<T>(k);
            let delta = if j == k + 2 { half_pi } else { T::zero() };
            let coef = -roles.jump_1 * k1 * tab.i6[j][k]
                + roles.jump_3 * (-k1 * k2 * k3 * tab.i7[j][k] - three * k1 * k3 * delta + three * k1 * tab.i8[j][k]);
            if k >= 1 {
                a[(row, k - 1)] += km1 * coef;
            }
            if k <= n + 1 {
                a[(row, n + 2 + k)] += qp * coef - tab.i5[j][k];
            }
        }
    }
    tip_rows(&mut a, n, km1, qp);
    LinearSystem {
        mode: Mode::I,
        n,
        matrix: a,
        rhs,
    }
}

/// Sliding mode: unknowns `(A, B)`.
fn assemble_sliding<T: Real>(params: &ProblemParams<T>, tab: &InfluenceTables<T>, n: usize) -> LinearSystem<T> {
    let roles = ModeRoles {
        balance_2: params.gammas.g1,
        balance_4: params.gammas.g4,
        jump_1: params.gammas.g2,
        jump_3: params.gammas.g3,
    };
    let (r, qp, kp1) = kappa_factors(params.kappa());
    let km1 = params.kappa() - T::one();
    let s = params.sliding_forcing();
    let size = 2 * n + 4;
    let mut a = Matrix::zeros(size, size);
    let mut rhs = vec![T::zero(); size];
    let half_pi = T::FRAC_PI_2();
    let three = T::lit(3.0);

    for j in 0..=n {
        // Traction balance:
        //   Σ(A_k + r B_k) I1 + s J = -g1(κ+1) Σ A_k (k+1) I2
        //     - g4(κ+1) Σ A_k (k+1)(k+2)(k+3) I3 + 3 g4(κ+1) Σ A_k (k+1)(k+3) I4
        //     + 3 g4(κ+1) Σ A_k (k+1) δ_{j,k+3} π/2
        for k in 1..=n + 2 {
            let (k1, k2, k3) = shifts::<T>(k);
            let delta = if j == k + 3 { half_pi } else { T::zero() };
            let v = tab.i1[j][k]
                + roles.balance_2 * kp1 * k1 * tab.i2[j][k]
                + roles.balance_4 * kp1 * k1 * k2 * k3 * tab.i3[j][k]
                - three * roles.balance_4 * kp1 * k1 * k3 * tab.i4[j][k]
                - three * roles.balance_4 * kp1 * k1 * delta;
            a[(j, k - 1)] += v;
        }
        for k in 0..=n + 1 {
            a[(j, n + 2 + k)] += r * tab.i1[j][k];
        }
        rhs[j] = -s * tab.j1[j];

        // Jump-traction relation with E'_k = (κ-1) A_k - q' B_k:
        //   Σ B_k I5 = g2 Σ E'_k (k+1) I6
        //     - g3 Σ E'_k (-(k+1)(k+2)(k+3) I7 - 3(k+1)(k+3) δ_{j,k+2} π/2 + 3(k+1) I8)
        let row = n + 1 + j;
        for k in 0..=n + 2 {
            let (k1, k2, k3) = shifts::<T>(k);
            let delta = if j == k + 2 { half_pi } else { T::zero() };
            let coef = -roles.jump_1 * k1 * tab.i6[j][k]
                + roles.jump_3 * (-k1 * k2 * k3 * tab.i7[j][k] - three * k1 * k3 * delta + three * k1 * tab.i8[j][k]);
            if k >= 1 {
                a[(row, k - 1)] += km1 * coef;
            }
            if k <= n + 1 {
                a[(row, n + 2 + k)] += -qp * coef + tab.i5[j][k];
            }
        }
    }
    tip_rows(&mut a, n, km1, -qp);
    LinearSystem {
        mode: Mode::II,
        n,
        matrix: a,
        rhs,
    }
}

/// Rows `2N+2` (tip `+1`) and `2N+3` (tip `-1`):
/// `Σ_k ((κ-1) g_k + q_factor q_k) (k+1)² (±1)^k = 0`.
fn tip_rows<T: Real>(a: &mut Matrix<T>, n: usize, km1: T, q_factor: T) {
    for (row, sign) in [(2 * n + 2, T::one()), (2 * n + 3, -T::one())] {
        let mut s = T::one();
        for k in 0..=n + 2 {
            let wk = T::from_index((k + 1) * (k + 1)) * s;
            if k >= 1 {
                a[(row, k - 1)] += km1 * wk;
            }
            if k <= n + 1 {
                a[(row, n + 2 + k)] += q_factor * wk;
            }
            s *= sign;
        }
    }
}

/// Solved coefficients of one mode together with solve diagnostics.
#[derive(Debug, Clone)]
pub struct ModeSolution<T> {
    pub coefficients: ModeCoefficients<T>,
    /// 1-norm condition estimate of the scaled system.
    pub condition: T,
    /// `||Ax - b||_inf / ||b||_inf`.
    pub relative_residual: T,
}

/// Dense direct solve; refuses systems whose condition estimate exceeds
/// `1e12` (a parameter set at or near an exceptional value).
pub fn solve_system<T: Real>(sys: &LinearSystem<T>) -> Result<ModeSolution<T>> {
    let sol = solve_checked(&sys.matrix, &sys.rhs)?;
    Ok(ModeSolution {
        coefficients: ModeCoefficients::from_unknowns(sys.mode, sys.n, &sol.x)?,
        condition: sol.condition,
        relative_residual: sol.relative_residual,
    })
}

/// Both modes solved at one order.
#[derive(Debug, Clone)]
pub struct SpectralSolution<T> {
    pub coefficients: CoefficientSet<T>,
    pub mode_i: ModeSolution<T>,
    pub mode_ii: ModeSolution<T>,
}

/// Build the influence tables and solve both modes.
pub fn solve_problem<T: Real>(params: &ProblemParams<T>, n: usize, quad_nodes: usize) -> Result<SpectralSolution<T>> {
    let tables = compute_influence_integrals(n, quad_nodes)?;
    solve_with_tables(params, &tables)
}

/// Solve both modes with precomputed tables.
pub fn solve_with_tables<T: Real>(
    params: &ProblemParams<T>,
    tables: &InfluenceTables<T>,
) -> Result<SpectralSolution<T>> {
    let n = tables.order();
    let mode_i = solve_system(&assemble_system(Mode::I, params, tables, n)?)?;
    let mode_ii = solve_system(&assemble_system(Mode::II, params, tables, n)?)?;
    let mut coefficients = CoefficientSet::new(n);
    coefficients.insert(mode_i.coefficients.clone())?;
    coefficients.insert(mode_ii.coefficients.clone())?;
    Ok(SpectralSolution {
        coefficients,
        mode_i,
        mode_ii,
    })
}

/// Solve with the default order and quadrature size.
pub fn solve_default<T: Real>(params: &ProblemParams<T>) -> Result<SpectralSolution<T>> {
    solve_problem(params, DEFAULT_ORDER, DEFAULT_QUADRATURE_NODES)
}

/// Sliding-mode coefficients obtained by solving the opening-mode system
/// with the surface groups exchanged `(g1, g2, g3, g4) -> (g2, g1, g4, g3)`
/// and the shear forcing: `A = -C'`, `B = D'`.
pub fn sliding_via_opening<T: Real>(
    params: &ProblemParams<T>,
    tables: &InfluenceTables<T>,
) -> Result<ModeCoefficients<T>> {
    let swapped = swap_to_opening(params);
    let sol = solve_system(&assemble_system(Mode::I, &swapped, tables, tables.order())?)?;
    let mut c = sol.coefficients;
    c.mode = Mode::II;
    c.g.iter_mut().for_each(|v| *v = -*v);
    Ok(c)
}

/// Parameters of the opening problem equivalent to the sliding problem of
/// `params`: exchanged groups and `s22 := s12` (with `s11 = s22`, so only the
/// forcing survives).
pub fn swap_to_opening<T: Real>(params: &ProblemParams<T>) -> ProblemParams<T> {
    let s = params.load.s12;
    params
        .with_replaced_gammas(params.gammas.swapped())
        .with_load(crate::problem::FarFieldLoad::new(s, s, T::zero()))
}

/// Values of the jump functions at a crack coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpValues<T> {
    /// `G'(t) = Re G' + i Im G'`.
    pub g_prime: Complex<T>,
    /// `Q(t) = Re Q + i Im Q`.
    pub q: Complex<T>,
    /// `G(t) = ∫_{-1}^t G'`.
    pub g: Complex<T>,
}

/// `∫_{-1}^{t} U_k(τ) w(τ) dτ` in closed form, `t = cos θ`.
pub fn weighted_u_antiderivative<T: Real>(k: usize, theta: T) -> T {
    let half = T::lit(0.5);
    if k == 0 {
        half * (T::PI() - theta + (theta + theta).sin() * half)
    } else {
        let kf = T::from_index(k);
        let k2 = T::from_index(k + 2);
        -half * ((kf * theta).sin() / kf - (k2 * theta).sin() / k2)
    }
}

fn check_closed<T: Real>(t: T) -> Result<()> {
    if t.abs() <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "crack coordinate",
            value: t.to_f64_lossy(),
            domain: "[-1, 1]",
        })
    }
}

/// Sum `Σ c_k U_k(t) w(t)`.
fn basis_sum<T: Real>(coeffs: &[T], u: &[T], w: T) -> T {
    coeffs.iter().zip(u).fold(T::zero(), |acc, (&c, &uk)| acc + c * uk) * w
}

/// Evaluate `G'`, `Q` and `G` at `t ∈ [-1, 1]`; a missing mode contributes
/// zero.
pub fn eval_solution<T: Real>(coeffs: &CoefficientSet<T>, t: T) -> Result<JumpValues<T>> {
    check_closed(t)?;
    let n = coeffs.n;
    let (a, b, c, d) = (coeffs.a(), coeffs.b(), coeffs.c(), coeffs.d());
    let mut u = vec![T::zero(); n + 3];
    u_table(t, &mut u);
    let w = (T::one() - t * t).max(T::zero()).sqrt();
    let theta = t.max(-T::one()).min(T::one()).acos();
    let (mut g_re, mut g_im) = (T::zero(), T::zero());
    for k in 0..n + 3 {
        let f = weighted_u_antiderivative(k, theta);
        g_re += c[k] * f;
        g_im += a[k] * f;
    }
    Ok(JumpValues {
        g_prime: Complex::new(basis_sum(&c, &u, w), basis_sum(&a, &u, w)),
        q: Complex::new(basis_sum(&b, &u, w), basis_sum(&d, &u, w)),
        g: Complex::new(g_re, g_im),
    })
}

/// Residuals of the two tip rows (`+1`, `-1`) of a mode:
/// `Σ ((κ-1) g_k ± q' q_k)(k+1)²(±1)^k`, with `+q'` for the opening mode
/// and `-q'` for the sliding mode.
pub fn tip_row_residuals<T: Real>(coeffs: &ModeCoefficients<T>, kappa: T) -> [T; 2] {
    let (_, qp, _) = kappa_factors(kappa);
    let qf = match coeffs.mode {
        Mode::I => qp,
        Mode::II => -qp,
    };
    let km1 = kappa - T::one();
    let mut out = [T::zero(); 2];
    for (slot, sign) in out.iter_mut().zip([T::one(), -T::one()]) {
        let mut s = T::one();
        for k in 0..=coeffs.n + 2 {
            *slot += (km1 * coeffs.g[k] + qf * coeffs.q[k]) * T::from_index((k + 1) * (k + 1)) * s;
            s *= sign;
        }
    }
    out
}

/// Pointwise residuals of the four governing equations, each maximised over
/// a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationResiduals<T> {
    /// Shear-traction balance (sliding mode, `Im G'` equation).
    pub shear_balance: T,
    /// Normal-traction balance (opening mode, `Re G'` equation).
    pub normal_balance: T,
    /// `Im Q` jump-traction relation (opening mode).
    pub im_q_relation: T,
    /// `Re Q` jump-traction relation (sliding mode).
    pub re_q_relation: T,
}

impl<T: Real> EquationResiduals<T> {
    pub fn max(&self) -> T {
        self.shear_balance
            .max(self.normal_balance)
            .max(self.im_q_relation)
            .max(self.re_q_relation)
    }
}

/// Substitute the expansions back into the four governing equations at each
/// grid point using the closed-form Hilbert transforms and derivative
/// formulas (independent of the assembled matrices). Grid points must lie
/// in the open interval.
pub fn equation_residuals<T: Real>(
    coeffs: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    grid: &[T],
) -> Result<EquationResiduals<T>> {
    let n = coeffs.n;
    let kdim = n + 3;
    let (a, b, c, d) = (coeffs.a(), coeffs.b(), coeffs.c(), coeffs.d());
    let (r, qp, kp1) = kappa_factors(params.kappa());
    let km1 = params.kappa() - T::one();
    let Gammas { g1, g2, g3, g4 } = params.gammas;
    let f = params.opening_forcing();
    let s = params.sliding_forcing();
    let three = T::lit(3.0);
    let mut tv = vec![T::zero(); kdim + 3];
    let mut uv = vec![T::zero(); kdim + 3];
    let mut out = EquationResiduals {
        shear_balance: T::zero(),
        normal_balance: T::zero(),
        im_q_relation: T::zero(),
        re_q_relation: T::zero(),
    };
    for &t in grid {
        if !(t.abs() < T::one()) {
            return Err(Error::Domain {
                what: "residual grid point",
                value: t.to_f64_lossy(),
                domain: "(-1, 1)",
            });
        }
        t_table(t, &mut tv);
        u_table(t, &mut uv);
        let sq = T::one() - t * t;
        let w = sq.sqrt();
        let (w3, w5) = (w * sq, w * sq * sq);
        let nd = |k: usize| T::from_index(k);
        // Second and fourth derivatives of G' components.
        let d1 = |k: usize| -nd(k + 1) * tv[k + 1] / w;
        let d3 = |k: usize| {
            nd(k + 1) * nd(k + 2) * nd(k + 3) * tv[k + 1] / w3
                - three * nd(k + 1) * nd(k + 3) * uv[k + 1] / w3
                - three * nd(k + 1) * tv[k + 3] / w5
        };
        // First and third derivatives of T_{k+1}.
        let t1 = |k: usize| nd(k + 1) * uv[k];
        let t3 = |k: usize| {
            -nd(k + 1) * nd(k + 2) * nd(k + 3) * uv[k] / sq - three * nd(k + 1) * nd(k + 3) * tv[k + 2] / (sq * sq)
                + three * nd(k + 1) * uv[k + 2] / (sq * sq)
        };
        let (mut lhs24, mut im_g2, mut im_g4) = (s, T::zero(), T::zero());
        let (mut lhs25, mut re_g2, mut re_g4) = (f, T::zero(), T::zero());
        let (mut rhs26, mut rhs27) = (T::zero(), T::zero());
        let (mut re_q, mut im_q) = (T::zero(), T::zero());
        for k in 0..kdim {
            lhs24 += (a[k] + r * b[k]) * tv[k + 1];
            lhs25 += (-c[k] + r * d[k]) * tv[k + 1];
            im_g2 += a[k] * d1(k);
            im_g4 += a[k] * d3(k);
            re_g2 += c[k] * d1(k);
            re_g4 += c[k] * d3(k);
            let e_open = km1 * c[k] + qp * d[k];
            let e_slide = -km1 * a[k] + qp * b[k];
            rhs26 += e_open * (-g1 * t1(k) + g4 * t3(k));
            rhs27 += e_slide * (-g2 * t1(k) + g3 * t3(k));
            re_q += b[k] * uv[k];
            im_q += d[k] * uv[k];
        }
        re_q *= w;
        im_q *= w;
        let res24 = lhs24 - (g1 * kp1 * im_g2 - g4 * kp1 * im_g4);
        let res25 = lhs25 - (-g2 * kp1 * re_g2 + g3 * kp1 * re_g4);
        let res26 = im_q - rhs26;
        let res27 = re_q - rhs27;
        out.shear_balance = out.shear_balance.max(res24.abs());
        out.normal_balance = out.normal_balance.max(res25.abs());
        out.im_q_relation = out.im_q_relation.max(res26.abs());
        out.re_q_relation = out.re_q_relation.max(res27.abs());
    }
    Ok(out)
}

/// Maximum over the grid and over the four equations of the absolute
/// pointwise residual.
pub fn residual_norm<T: Real>(coeffs: &CoefficientSet<T>, params: &ProblemParams<T>, grid: &[T]) -> Result<T> {
    Ok(equation_residuals(coeffs, params, grid)?.max())
}
