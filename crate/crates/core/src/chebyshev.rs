//! Chebyshev polynomials, first-kind Gauss–Chebyshev quadrature, the closed
//! form Cauchy integral of the weighted second-kind polynomials, and the
//! influence-integral tables used to assemble the Galerkin systems.
//!
//! Throughout, `w(t) = sqrt(1 - t^2)` and the unknown densities are expanded
//! in the weighted basis `U_k(t) w(t)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default number of Gauss–Chebyshev nodes for the influence tables.
pub const DEFAULT_QUADRATURE_NODES: usize = 100;

fn check_closed<T: Real>(what: &'static str, x: T) -> Result<()> {
    if x.abs() <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x.to_f64_lossy(),
            domain: "[-1, 1]",
        })
    }
}

fn check_open<T: Real>(what: &'static str, x: T) -> Result<()> {
    if x.abs() < T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x.to_f64_lossy(),
            domain: "(-1, 1)",
        })
    }
}

/// `T_k(x)` via the three-term recurrence, without a domain check.
#[inline]
pub fn t_unchecked<T: Real>(k: usize, x: T) -> T {
    let two_x = x + x;
    let (mut prev, mut cur) = (T::one(), x);
    match k {
        0 => prev,
        _ => {
            for _ in 1..k {
                let next = two_x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `U_k(x)` via the three-term recurrence, without a domain check.
#[inline]
pub fn u_unchecked<T: Real>(k: usize, x: T) -> T {
    let two_x = x + x;
    let (mut prev, mut cur) = (T::one(), two_x);
    match k {
        0 => prev,
        _ => {
            for _ in 1..k {
                let next = two_x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Chebyshev polynomial of the first kind, `T_k(x)`, for `|x| <= 1`.
pub fn cheb_t<T: Real>(k: usize, x: T) -> Result<T> {
    check_closed("cheb_t", x)?;
    Ok(t_unchecked(k, x))
}

/// `T_k(x) = cos(k arccos x)`; the trigonometric path, used to cross-check
/// the recurrence.
pub fn cheb_t_trig<T: Real>(k: usize, x: T) -> Result<T> {
    check_closed("cheb_t_trig", x)?;
    Ok((T::from_index(k) * x.acos()).cos())
}

/// Chebyshev polynomial of the second kind, `U_k(x)`, for `|x| <= 1`. At the
/// endpoints the recurrence yields the limit `(k+1)(±1)^k` exactly.
pub fn cheb_u<T: Real>(k: usize, x: T) -> Result<T> {
    check_closed("cheb_u", x)?;
    Ok(u_unchecked(k, x))
}

/// Fill `out[n] = T_n(x)` for `n = 0..out.len()`.
pub fn t_table<T: Real>(x: T, out: &mut [T]) {
    let two_x = x + x;
    for n in 0..out.len() {
        out[n] = match n {
            0 => T::one(),
            1 => x,
            _ => two_x * out[n - 1] - out[n - 2],
        };
    }
}

/// Fill `out[n] = U_n(x)` for `n = 0..out.len()`.
pub fn u_table<T: Real>(x: T, out: &mut [T]) {
    let two_x = x + x;
    for n in 0..out.len() {
        out[n] = match n {
            0 => T::one(),
            1 => two_x,
            _ => two_x * out[n - 1] - out[n - 2],
        };
    }
}

/// Finite Hilbert transform of a basis term:
/// `(1/π) p.v.∫ U_k(t) sqrt(1-t²) / (t - x) dt = -T_{k+1}(x)` for `|x| < 1`.
pub fn cauchy_integral_u<T: Real>(k: usize, x: T) -> Result<T> {
    check_open("cauchy_integral_u", x)?;
    Ok(-t_unchecked(k + 1, x))
}

/// `d/dt [U_k(t) w(t)] = -(k+1) T_{k+1}(t) / w(t)` on the open interval.
pub fn weighted_u_d1<T: Real>(k: usize, t: T) -> Result<T> {
    check_open("weighted_u_d1", t)?;
    let w = (T::one() - t * t).sqrt();
    Ok(-T::from_index(k + 1) * t_unchecked(k + 1, t) / w)
}

/// `d³/dt³ [U_k(t) w(t)]`, expressed through `T_{k+1}`, `U_{k+1}`, `T_{k+3}`
/// divided by powers of `w`.
pub fn weighted_u_d3<T: Real>(k: usize, t: T) -> Result<T> {
    check_open("weighted_u_d3", t)?;
    let w = (T::one() - t * t).sqrt();
    let w3 = w * w * w;
    let w5 = w3 * w * w;
    let (k1, k2, k3) = (T::from_index(k + 1), T::from_index(k + 2), T::from_index(k + 3));
    let three = T::lit(3.0);
    Ok(k1 * k2 * k3 * t_unchecked(k + 1, t) / w3
        - three * k1 * k3 * u_unchecked(k + 1, t) / w3
        - three * k1 * t_unchecked(k + 3, t) / w5)
}

/// `d/dt T_{k+1}(t) = (k+1) U_k(t)`.
pub fn shifted_t_d1<T: Real>(k: usize, t: T) -> Result<T> {
    check_closed("shifted_t_d1", t)?;
    Ok(T::from_index(k + 1) * u_unchecked(k, t))
}

/// `d³/dt³ T_{k+1}(t)` expressed through `U_k`, `T_{k+2}`, `U_{k+2}` over
/// powers of `1 - t²` (open interval only).
pub fn shifted_t_d3<T: Real>(k: usize, t: T) -> Result<T> {
    check_open("shifted_t_d3", t)?;
    let s = T::one() - t * t;
    let (k1, k2, k3) = (T::from_index(k + 1), T::from_index(k + 2), T::from_index(k + 3));
    let three = T::lit(3.0);
    Ok(
        -k1 * k2 * k3 * u_unchecked(k, t) / s - three * k1 * k3 * t_unchecked(k + 2, t) / (s * s)
            + three * k1 * u_unchecked(k + 2, t) / (s * s),
    )
}

/// First-kind Gauss–Chebyshev rule: `∫ f(x)/sqrt(1-x²) dx ≈ Σ w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    /// Strictly decreasing abscissae in `(-1, 1)`.
    pub nodes: Vec<T>,
    /// All equal to `π / M`.
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Apply the rule to `f`, i.e. approximate `∫ f(x)/sqrt(1-x²) dx`.
    pub fn apply(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Node `i` (0-based) of the `m`-point first-kind rule, computed in the
/// sine form so that mirrored nodes are exact negatives of each other.
fn gc_node<T: Real>(i: usize, m: usize) -> T {
    // cos((2i+1)π/(2m)) = sin((m-2i-1)π/(2m))
    let num = m as i64 - 2 * i as i64 - 1;
    let arg = T::PI() * T::from_i64(num).expect("node index") / T::from_index(2 * m);
    arg.sin()
}

/// The `m`-point first-kind Gauss–Chebyshev rule; exact for polynomial `f`
/// of degree `<= 2m - 1`.
pub fn gauss_chebyshev_rule<T: Real>(m: usize) -> Result<QuadratureRule<T>> {
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "quad_nodes",
            reason: "quadrature needs at least one node".into(),
        });
    }
    let nodes = (0..m).map(|i| gc_node(i, m)).collect();
    let weights = vec![T::PI() / T::from_index(m); m];
    Ok(QuadratureRule { nodes, weights })
}

/// Precomputed Galerkin influence integrals, indexed `[j][k]` with
/// `j = 0..=N`, `k = 0..=N+2`.
///
/// With `T_j` the test function:
///
/// | table | integrand                                  |
/// |-------|--------------------------------------------|
/// | `i1`  | `T_{k+1} T_j (1-t²)²`                      |
/// | `i2`  | `T_{k+1} T_j (1-t²)^{3/2}`                 |
/// | `i3`  | `T_{k+1} T_j (1-t²)^{1/2}`                 |
/// | `i4`  | `U_{k+1} T_j (1-t²)^{1/2}`                 |
/// | `i5`  | `U_k T_j (1-t²)²`                          |
/// | `i6`  | `U_k T_j (1-t²)^{3/2}`                     |
/// | `i7`  | `U_k T_j (1-t²)^{1/2}` (= `i4[j][k-1]`)    |
/// | `i8`  | `U_{k+2} T_j (1-t²)^{-1/2}`                |
/// | `j1`  | `T_j (1-t²)²`                              |
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceTables<T> {
    n: usize,
    m: usize,
    pub i1: Vec<Vec<T>>,
    pub i2: Vec<Vec<T>>,
    pub i3: Vec<Vec<T>>,
    pub i4: Vec<Vec<T>>,
    pub i5: Vec<Vec<T>>,
    pub i6: Vec<Vec<T>>,
    pub i7: Vec<Vec<T>>,
    pub i8: Vec<Vec<T>>,
    pub j1: Vec<T>,
}

impl<T: Real> InfluenceTables<T> {
    /// Polynomial order `N`.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Quadrature size `M` used to build the tables.
    pub fn quadrature_nodes(&self) -> usize {
        self.m
    }

    /// All eight `I` tables, in order.
    pub fn tables(&self) -> [&Vec<Vec<T>>; 8] {
        [
            &self.i1, &self.i2, &self.i3, &self.i4, &self.i5, &self.i6, &self.i7, &self.i8,
        ]
    }
}

/// Build the influence tables for order `n` with an `m`-point first-kind
/// Gauss–Chebyshev rule. The weight `(1-t²)^{p}` of each integrand is
/// multiplied by `w(t)` so that the first-kind rule applies; the tables with
/// half-integer powers then integrate polynomials, which is exact when
/// `m >= n + 4`, while `i1`, `i5` and `j1` carry a `w⁵` factor and converge
/// algebraically.
///
/// Entries whose integrand is odd vanish identically: the rule is applied to
/// mirrored node pairs and the parity of `j + k` decides whether the two
/// halves add or cancel.
pub fn compute_influence_integrals<T: Real>(n: usize, m: usize) -> Result<InfluenceTables<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "N",
            reason: "polynomial order must be positive".into(),
        });
    }
    let rule = gauss_chebyshev_rule::<T>(m)?;
    let kn = n + 3;
    let half = m / 2;
    // Positive half of the nodes plus, for odd m, the centre node 0.
    let mut samples: Vec<(T, T)> = (0..half).map(|i| (rule.nodes[i], T::lit(2.0))).collect();
    if m % 2 == 1 {
        samples.push((T::zero(), T::one()));
    }
    let weight = T::PI() / T::from_index(m);

    let zeros = || vec![vec![T::zero(); kn]; n + 1];
    let (mut i1, mut i2, mut i3, mut i4) = (zeros(), zeros(), zeros(), zeros());
    let (mut i5, mut i6, mut i7, mut i8) = (zeros(), zeros(), zeros(), zeros());
    let mut j1 = vec![T::zero(); n + 1];

    let mut tv = vec![T::zero(); kn + 3];
    let mut uv = vec![T::zero(); kn + 3];
    for &(x, mult) in &samples {
        t_table(x, &mut tv);
        u_table(x, &mut uv);
        let s = T::one() - x * x;
        let w = s.sqrt();
        let s2 = s * s;
        let wm = weight * mult;
        for j in 0..=n {
            let tj = tv[j] * wm;
            j1[j] += tj * s2 * w;
            for k in 0..kn {
                // Only same-parity (even) integrands survive the mirrored sum;
                // accumulate the others to keep the loop uniform and zero them
                // afterwards.
                let tk1 = tv[k + 1] * tj;
                i1[j][k] += tk1 * s2 * w;
                i2[j][k] += tk1 * s2;
                i3[j][k] += tk1 * s;
                i4[j][k] += uv[k + 1] * tj * s;
                let uk = uv[k] * tj;
                i5[j][k] += uk * s2 * w;
                i6[j][k] += uk * s2;
                i8[j][k] += uv[k + 2] * tj;
                if k == 0 {
                    i7[j][0] += uk * s;
                }
            }
        }
    }
    // Parity: T_{k+1} T_j and U_{k+1} T_j are odd when j + k is even;
    // U_k T_j and U_{k+2} T_j are odd when j + k is odd.
    for j in 0..=n {
        if j % 2 == 1 {
            j1[j] = T::zero();
        }
        for k in 0..kn {
            if (j + k) % 2 == 0 {
                i1[j][k] = T::zero();
                i2[j][k] = T::zero();
                i3[j][k] = T::zero();
                i4[j][k] = T::zero();
            } else {
                i5[j][k] = T::zero();
                i6[j][k] = T::zero();
                i8[j][k] = T::zero();
                if k == 0 {
                    i7[j][0] = T::zero();
                }
            }
        }
        for k in 1..kn {
            i7[j][k] = i4[j][k - 1];
        }
    }
    Ok(InfluenceTables {
        n,
        m,
        i1,
        i2,
        i3,
        i4,
        i5,
        i6,
        i7,
        i8,
        j1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_kind_values() {
        assert_eq!(cheb_t(0, 0.3).unwrap(), 1.0);
        assert_eq!(cheb_t(1, 0.5).unwrap(), 0.5);
        assert!((cheb_t(3, 0.5_f64).unwrap() + 1.0).abs() < 1e-15);
        assert!(cheb_t(2, 1.0 + 1e-12).is_err());
        assert!(cheb_t_trig(2, -1.5).is_err());
    }

    #[test]
    fn second_kind_values() {
        assert_eq!(cheb_u(0, -0.7).unwrap(), 1.0);
        assert_eq!(cheb_u(1, 0.5).unwrap(), 1.0);
        assert_eq!(cheb_u(2, 0.5).unwrap(), 0.0);
        for k in 0..12 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(cheb_u(k, 1.0).unwrap(), (k + 1) as f64);
            assert_eq!(cheb_u(k, -1.0).unwrap(), sign * (k + 1) as f64);
        }
        assert!(cheb_u(0, -1.01).is_err());
    }

    #[test]
    fn recurrence_agrees_with_trig() {
        for k in 0..60 {
            for i in 0..=40 {
                let x = -1.0 + i as f64 * 0.05;
                let a = cheb_t(k, x).unwrap();
                let b = cheb_t_trig(k, x).unwrap();
                assert!((a - b).abs() < 1e-13, "k={k} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rule_basics() {
        let r1 = gauss_chebyshev_rule::<f64>(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - std::f64::consts::PI).abs() < 1e-15);
        let r = gauss_chebyshev_rule::<f64>(7).unwrap();
        assert!((r.apply(|_| 1.0) - std::f64::consts::PI).abs() < 1e-14);
        assert!((r.apply(|x| x * x) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!(r.nodes.windows(2).all(|p| p[0] > p[1]));
        assert!(gauss_chebyshev_rule::<f64>(0).is_err());
        for i in 0..7 {
            assert_eq!(r.nodes[i], -r.nodes[6 - i]);
        }
    }

    #[test]
    fn cauchy_integral_examples() {
        assert!((cauchy_integral_u(0, 0.5_f64).unwrap() + 0.5).abs() < 1e-15);
        assert!(cauchy_integral_u(2, 0.0_f64).unwrap().abs() < 1e-15);
        let v: f64 = cauchy_integral_u(5, 0.3).unwrap();
        assert!((v + cheb_t(6, 0.3).unwrap()).abs() < 1e-15);
        assert!(cauchy_integral_u(1, 1.0).is_err());
    }

    #[test]
    fn influence_examples() {
        let tab = compute_influence_integrals::<f64>(6, 400).unwrap();
        assert!((tab.i5[0][0] - 16.0 / 15.0).abs() < 1e-12);
        assert_eq!(tab.i1[0][0], 0.0);
        for j in 0..=6 {
            for k in 1..9 {
                assert_eq!(tab.i7[j][k], tab.i4[j][k - 1]);
            }
        }
        assert!(compute_influence_integrals::<f64>(0, 10).is_err());
    }

    #[test]
    fn single_precision_is_supported() {
        let r = gauss_chebyshev_rule::<f32>(8).unwrap();
        assert!((r.apply(|x| x * x) - std::f32::consts::FRAC_PI_2).abs() < 1e-5);
        let tab = compute_influence_integrals::<f32>(4, 40).unwrap();
        assert!((tab.i5[0][0] - 16.0 / 15.0).abs() < 1e-5);
    }
}
