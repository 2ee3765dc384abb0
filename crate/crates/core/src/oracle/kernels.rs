//! Green functions of the clamped fourth-order and the Dirichlet
//! second-order operators on `[-1, 1]`, the logarithmic kernel arising from
//! inverting the finite Hilbert transform, and the Hilbert transform of the
//! fourth-order kernel's first derivative.

use crate::error::{Error, Result};
use crate::scalar::Real;

fn c24<T: Real>() -> T {
    T::lit(24.0)
}

/// `𝔾(t, τ)`: solves `w'''' = p`, `w(±1) = w'(±1) = 0` through
/// `w(t) = ∫ 𝔾(t, τ) p(τ) dτ`. Symmetric in its arguments.
pub fn green_g<T: Real>(t: T, tau: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    if tau <= t {
        (t - one) * (t - one) * (tau + one) * (tau + one) * (one + two * t - two * tau - t * tau) / c24()
    } else {
        (tau - one) * (tau - one) * (t + one) * (t + one) * (one + two * tau - two * t - t * tau) / c24()
    }
}

/// `∂𝔾/∂t (t, τ)`.
pub fn green_g_t<T: Real>(t: T, tau: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    if tau <= t {
        (tau + one)
            * (tau + one)
            * (two * (t - one) * (one + two * t - two * tau - t * tau) + (t - one) * (t - one) * (two - tau))
            / c24()
    } else {
        (tau - one)
            * (tau - one)
            * (two * (t + one) * (one + two * tau - two * t - t * tau) + (t + one) * (t + one) * (-two - tau))
            / c24()
    }
}

/// `∂²𝔾/∂t² (t, τ)`.
pub fn green_g_tt<T: Real>(t: T, tau: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    if tau <= t {
        (tau + one) * (tau + one) * (two * (one + two * t - two * tau - t * tau) + four * (t - one) * (two - tau))
            / c24()
    } else {
        (tau - one) * (tau - one) * (two * (one + two * tau - two * t - t * tau) + four * (t + one) * (-two - tau))
            / c24()
    }
}

/// `𝕂(t, τ)`: solves `w'' = p`, `w(±1) = 0` through `w(t) = ∫ 𝕂(t, τ) p(τ) dτ`.
pub fn green_k<T: Real>(t: T, tau: T) -> T {
    let half = T::lit(0.5);
    if tau <= t {
        half * (t - T::one()) * (tau + T::one())
    } else {
        half * (t + T::one()) * (tau - T::one())
    }
}

/// `ω₁(t, τ)` without the singular-point check: with `t = cos β` and
/// `τ = cos α`, `ω₁ = -(1/π) log |sin((β+α)/2) / sin((β-α)/2)|`.
///
/// This equals `-(1/π) sqrt(1-τ²) ∫_{-1}^{t} ds / (sqrt(1-s²)(τ - s))` and is
/// the trigonometric form of the algebraic logarithm expression, which has a
/// removable `0/0` at `t = 0`.
#[inline]
pub fn omega1_unchecked<T: Real>(t: T, tau: T) -> T {
    let beta = t.max(-T::one()).min(T::one()).acos();
    let alpha = tau.acos();
    let half = T::lit(0.5);
    -((((beta + alpha) * half).sin() / ((beta - alpha) * half).sin())
        .abs()
        .ln())
        / T::PI()
}

/// `ω₁(t, τ)` for `|t| <= 1`, `|τ| < 1`, `t ≠ τ`.
pub fn omega1<T: Real>(t: T, tau: T) -> Result<T> {
    if !(t.abs() <= T::one()) {
        return Err(Error::Domain {
            what: "omega1 t",
            value: t.to_f64_lossy(),
            domain: "[-1, 1]",
        });
    }
    if !(tau.abs() < T::one()) {
        return Err(Error::Domain {
            what: "omega1 tau",
            value: tau.to_f64_lossy(),
            domain: "(-1, 1)",
        });
    }
    if t == tau {
        return Err(Error::Domain {
            what: "omega1 (logarithmic singularity at t = tau)",
            value: t.to_f64_lossy(),
            domain: "t != tau",
        });
    }
    Ok(omega1_unchecked(t, tau))
}

/// Quadratic `a2 x² + a1 x + a0`.
#[derive(Debug, Clone, Copy)]
struct Quadratic<T> {
    a2: T,
    a1: T,
    a0: T,
}

impl<T: Real> Quadratic<T> {
    fn eval(&self, x: T) -> T {
        (self.a2 * x + self.a1) * x + self.a0
    }

    /// `∫_a^b (p(x) - p(t)) / (x - t) dx`.
    fn divided_integral(&self, a: T, b: T, t: T) -> T {
        self.a2 * ((b * b - a * a) * T::lit(0.5) + t * (b - a)) + self.a1 * (b - a)
    }
}

/// The two polynomial branches of `x ↦ ∂𝔾/∂x (x, s)`: left (`x <= s`) and
/// right (`x >= s`).
fn green_t_branches<T: Real>(s: T) -> (Quadratic<T>, Quadratic<T>) {
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    // right: (s+1)²/24 (x-1)(3b x + e),  b = 2 - s, e = 2(1 - 2s) - b
    let ar = (s + one) * (s + one) / c24();
    let b = two - s;
    let e = two * (one - two * s) - b;
    let right = Quadratic {
        a2: ar * three * b,
        a1: ar * (e - three * b),
        a0: -ar * e,
    };
    // left: (s-1)²/24 (x+1)(3d x + e'),  d = -(2 + s), e' = 2(1 + 2s) + d
    let al = (s - one) * (s - one) / c24();
    let d = -(two + s);
    let ep = two * (one + two * s) + d;
    let left = Quadratic {
        a2: al * three * d,
        a1: al * (ep + three * d),
        a0: al * ep,
    };
    (left, right)
}

/// `K₁(t, s) = (1/π) p.v.∫_{-1}^{1} ∂𝔾/∂τ (τ, s) / (τ - t) dτ`, in closed
/// form from the piecewise-quadratic structure of `∂𝔾/∂τ`.
pub fn hilbert_green_t<T: Real>(t: T, s: T) -> T {
    let one = T::one();
    let (left, right) = green_t_branches(s);
    let mut v = left.divided_integral(-one, s, t) + right.divided_integral(s, one, t);
    let (pl, pr) = (left.eval(t), right.eval(t));
    let log_term = |coef: T, arg: T| {
        if coef == T::zero() || arg == T::zero() {
            T::zero()
        } else {
            coef * arg.abs().ln()
        }
    };
    v += log_term(pl - pr, s - t);
    v -= log_term(pl, one + t);
    v += log_term(pr, one - t);
    v / T::PI()
}
