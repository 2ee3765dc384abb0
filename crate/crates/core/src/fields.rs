//! Physical fields reconstructed from solved jump functions: face stresses
//! and displacements along the crack, the classical (surface-free) reference
//! solution, and plane stresses from the complex potentials.
//!
//! All quantities are nondimensional: stresses in units of `mu`,
//! displacements in units of `ell`, positions in units of `ell`.

use num_complex::Complex;

use crate::chebyshev::t_table;
use crate::error::{Error, Result};
use crate::problem::ProblemParams;
use crate::scalar::Real;
use crate::spectral::{eval_solution, CoefficientSet};

/// Minimum distance from the crack line at which the potentials are
/// evaluated.
pub const CUT_EXCLUSION: f64 = 1e-8;

/// Crack face: `Plus` is the upper face (`x2 -> 0+`), `Minus` the lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    Plus,
    Minus,
}

impl Face {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Face::Plus => T::one(),
            Face::Minus => -T::one(),
        }
    }

    pub fn both() -> [Face; 2] {
        [Face::Plus, Face::Minus]
    }
}

/// Where a [`FieldSample`] was taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location<T> {
    /// Crack coordinate `t ∈ [-1, 1]` on one face.
    Face { t: T, face: Face },
    /// A plane point off the crack.
    Plane { z: Complex<T> },
}

/// Stresses (and, on the faces, displacements) at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample<T> {
    pub location: Location<T>,
    /// `sigma11 / mu`; only available off the crack line.
    pub sigma11: Option<T>,
    pub sigma12: T,
    pub sigma22: T,
    /// `u1 / ell`; only available on the faces.
    pub u1: Option<T>,
    /// `u2 / ell`; only available on the faces.
    pub u2: Option<T>,
}

/// Traction components on a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceStress<T> {
    pub sigma22: T,
    pub sigma12: T,
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

/// Finite Hilbert transforms `H[G'](t)` and `H[Q](t)` of the expansions,
/// using `H[U_k w] = -T_{k+1}`.
fn hilbert_sums<T: Real>(set: &CoefficientSet<T>, t: T) -> (Complex<T>, Complex<T>) {
    let (gp, q) = set.complex_coefficients();
    let mut tv = vec![T::zero(); set.n + 4];
    t_table(t, &mut tv);
    let mut hg = Complex::new(T::zero(), T::zero());
    let mut hq = hg;
    for k in 0..gp.len() {
        hg -= gp[k] * tv[k + 1];
        hq -= q[k] * tv[k + 1];
    }
    (hg, hq)
}

/// `-i z`, i.e. `z / i`.
fn div_i<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.im, -z.re)
}

/// `sigma22 - i sigma12` on `face` from jump values and Hilbert transforms.
fn traction_combination<T: Real>(
    params: &ProblemParams<T>,
    q: Complex<T>,
    hg: Complex<T>,
    hq: Complex<T>,
    face: Face,
) -> Complex<T> {
    let kappa = params.kappa();
    let c = (kappa - T::one()) / (kappa + T::one());
    q * face.sign::<T>() + hg - div_i(hq) * c + params.gamma_prime_nd().conj() + T::lit(2.0) * params.gamma_nd()
}

/// Normal and shear stress on a crack face at `t ∈ [-1, 1]`.
pub fn crack_face_stresses<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    t: T,
    face: Face,
) -> Result<FaceStress<T>> {
    set.require_both()?;
    check_closed(t)?;
    let jump = eval_solution(set, t)?;
    let (hg, hq) = hilbert_sums(set, t);
    let s = traction_combination(params, jump.q, hg, hq, face);
    Ok(FaceStress {
        sigma22: s.re,
        sigma12: -s.im,
    })
}

/// Constant far-field term of the displacement derivative,
/// `((κ-1) Γ - conj Γ') / 2` (nondimensional).
fn displacement_constant<T: Real>(params: &ProblemParams<T>) -> Complex<T> {
    let kappa = params.kappa();
    (Complex::new((kappa - T::one()) * params.gamma_nd(), T::zero()) - params.gamma_prime_nd().conj()) * T::lit(0.5)
}

/// `d/dt (u1 + i u2) / ell` on `face` at `t ∈ [-1, 1]`, returned as
/// `(du1, du2)`.
pub fn crack_face_displacement_derivative<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    t: T,
    face: Face,
) -> Result<(T, T)> {
    set.require_both()?;
    check_closed(t)?;
    let kappa = params.kappa();
    let kp1 = kappa + T::one();
    let quarter = T::lit(0.25);
    let jump = eval_solution(set, t)?;
    let (hg, hq) = hilbert_sums(set, t);
    let jump_part = Complex::new(T::zero(), kp1 * quarter) * jump.g_prime * face.sign::<T>();
    let d = jump_part + hg * ((kappa - T::one()) * quarter) + div_i(hq) * (kappa / kp1) + displacement_constant(params);
    Ok((d.re, d.im))
}

/// `∫_{-1}^{t} T_n(τ) dτ`.
fn t_antiderivative<T: Real>(n: usize, tv: &[T], t: T) -> T {
    let half = T::lit(0.5);
    match n {
        0 => t + T::one(),
        1 => (t * t - T::one()) * half,
        _ => {
            let (np1, nm1) = (T::from_index(n + 1), T::from_index(n - 1));
            let at_minus = |m: usize| if m.is_multiple_of(2) { T::one() } else { -T::one() };
            half * (tv[n + 1] / np1 - tv[n - 1] / nm1) - half * (at_minus(n + 1) / np1 - at_minus(n - 1) / nm1)
        }
    }
}

/// Face displacement `(u1, u2) / ell` at `t`, anchored so that both faces
/// vanish at `t = -1`. The derivative is integrated exactly term by term.
pub fn crack_face_displacement<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    t: T,
    face: Face,
) -> Result<(T, T)> {
    set.require_both()?;
    check_closed(t)?;
    let kappa = params.kappa();
    let kp1 = kappa + T::one();
    let quarter = T::lit(0.25);
    let jump = eval_solution(set, t)?;
    let (gp, q) = set.complex_coefficients();
    let mut tv = vec![T::zero(); set.n + 5];
    t_table(t, &mut tv);
    // ∫ H[f] = -Σ f_k ∫ T_{k+1}
    let mut ihg = Complex::new(T::zero(), T::zero());
    let mut ihq = ihg;
    for k in 0..gp.len() {
        let p = t_antiderivative(k + 1, &tv, t);
        ihg -= gp[k] * p;
        ihq -= q[k] * p;
    }
    let jump_part = Complex::new(T::zero(), kp1 * quarter) * jump.g * face.sign::<T>();
    let u = jump_part
        + ihg * ((kappa - T::one()) * quarter)
        + div_i(ihq) * (kappa / kp1)
        + displacement_constant(params) * (t + T::one());
    Ok((u.re, u.im))
}

/// Face displacements on a grid that starts at `-1` and increases strictly.
pub fn crack_face_displacements<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    grid: &[T],
    face: Face,
) -> Result<Vec<(T, T)>> {
    validate_face_grid(grid)?;
    grid.iter()
        .map(|&t| crack_face_displacement(set, params, t, face))
        .collect()
}

/// A face grid must be nonempty, start at `-1`, increase strictly, and stay
/// within `[-1, 1]`.
pub fn validate_face_grid<T: Real>(grid: &[T]) -> Result<()> {
    let ok = grid.first().is_some_and(|&t0| t0 == -T::one())
        && grid.windows(2).all(|p| p[0] < p[1])
        && grid.last().is_some_and(|&t| t <= T::one());
    if ok {
        Ok(())
    } else {
        Err(Error::BadGrid)
    }
}

/// Stresses and displacements on one face.
pub fn face_sample<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    t: T,
    face: Face,
) -> Result<FieldSample<T>> {
    let s = crack_face_stresses(set, params, t, face)?;
    let (u1, u2) = crack_face_displacement(set, params, t, face)?;
    Ok(FieldSample {
        location: Location::Face { t, face },
        sigma11: None,
        sigma12: s.sigma12,
        sigma22: s.sigma22,
        u1: Some(u1),
        u2: Some(u2),
    })
}

/// Classical (surface-free) crack solution at an interior crack point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalReference<T> {
    /// `G'(t) = (-s22 + i s12) t / (mu sqrt(1-t²))`.
    pub g_prime: Complex<T>,
    /// Opening `u2+ - u2- = (κ+1) s22 sqrt(1-t²) / (2 mu)` (units of `ell`).
    pub u2_jump: T,
    /// Sliding `u1+ - u1- = (κ+1) s12 sqrt(1-t²) / (2 mu)` (units of `ell`).
    pub u1_jump: T,
}

fn check_open<T: Real>(t: T) -> Result<()> {
    if t.abs() < T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "classical reference",
            value: t.to_f64_lossy(),
            domain: "(-1, 1)",
        })
    }
}

/// The square-root-singular Griffith solution for the same far field.
pub fn classical_reference<T: Real>(params: &ProblemParams<T>, t: T) -> Result<ClassicalReference<T>> {
    check_open(t)?;
    let w = (T::one() - t * t).sqrt();
    let amp = classical_amplitude(params);
    let half_kp1 = (params.kappa() + T::one()) * T::lit(0.5);
    Ok(ClassicalReference {
        g_prime: amp * (t / w),
        u2_jump: half_kp1 * params.opening_forcing() * w,
        u1_jump: half_kp1 * params.sliding_forcing() * w,
    })
}

/// `a` in the classical `G'(t) = a t / sqrt(1-t²)`.
fn classical_amplitude<T: Real>(params: &ProblemParams<T>) -> Complex<T> {
    Complex::new(-params.opening_forcing(), params.sliding_forcing())
}

/// `(1/π) p.v.∫ τ / sqrt(1-τ²) / (τ - t) dτ = 1` for `|t| < 1`.
pub fn hilbert_t_over_w<T: Real>(t: T) -> Result<T> {
    check_open(t)?;
    Ok(T::one())
}

/// Face tractions of the classical solution, obtained by substituting its
/// `G'` (and `Q = 0`) into the face-stress representation; they vanish
/// identically. At the tips the interior limit is returned.
pub fn classical_face_stresses<T: Real>(params: &ProblemParams<T>, t: T, face: Face) -> Result<FaceStress<T>> {
    check_closed(t)?;
    let tt = t.max(-T::one() + T::epsilon()).min(T::one() - T::epsilon());
    let hg = classical_amplitude(params) * hilbert_t_over_w(tt)?;
    let zero = Complex::new(T::zero(), T::zero());
    let s = traction_combination(params, zero, hg, zero, face);
    Ok(FaceStress {
        sigma22: s.re,
        sigma12: -s.im,
    })
}

/// Values of the complex potentials and of `Φ'` at a plane point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potentials<T> {
    pub phi: Complex<T>,
    pub phi_prime: Complex<T>,
    pub psi: Complex<T>,
}

/// Distance from `z` to the segment `[-1, 1]`.
pub fn distance_to_crack<T: Real>(z: Complex<T>) -> T {
    if z.re.abs() <= T::one() {
        z.im.abs()
    } else {
        let end = if z.re > T::zero() { T::one() } else { -T::one() };
        (z - Complex::new(end, T::zero())).norm()
    }
}

/// `(1/π) ∫ f(t)/(t - z) dt` and its `z`-derivative for
/// `f = Σ c_k U_k w`, via `(1/π)∫ U_k w/(t - z) dt = -ρ^{k+1}` with
/// `ρ = z - sqrt(z-1) sqrt(z+1)`.
fn cauchy_transform<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    let root = (z - one).sqrt() * (z + one).sqrt();
    let rho = z - root;
    let mut value = Complex::new(T::zero(), T::zero());
    let mut deriv = value;
    let mut power = rho;
    for (k, &c) in coeffs.iter().enumerate() {
        value -= c * power;
        deriv += c * power * T::from_index(k + 1);
        power *= rho;
    }
    (value, deriv / root)
}

/// Complex potentials `Φ(z)`, `Φ'(z)`, `Ψ(z)` (nondimensional) at a point
/// off the crack.
pub fn eval_potentials<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    z: Complex<T>,
) -> Result<Potentials<T>> {
    set.require_both()?;
    let dist = distance_to_crack(z);
    if !(dist > T::lit(CUT_EXCLUSION)) {
        return Err(Error::OnCut {
            re: z.re.to_f64_lossy(),
            im: z.im.to_f64_lossy(),
            distance: CUT_EXCLUSION,
        });
    }
    let kappa = params.kappa();
    let kp1 = kappa + T::one();
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    let (gp, q) = set.complex_coefficients();
    // Φ density: G' - 2i Q/(κ+1); Ψ density: conj G' - 2iκ conj Q/(κ+1),
    // conjugated coefficient-wise (the basis is real on the crack).
    let f: Vec<_> = gp.iter().zip(&q).map(|(&g, &qq)| g - two_i * qq / kp1).collect();
    let h: Vec<_> = gp
        .iter()
        .zip(&q)
        .map(|(&g, &qq)| g.conj() - two_i * qq.conj() * (kappa / kp1))
        .collect();
    let half = T::lit(0.5);
    let (cf, cf_prime) = cauchy_transform(&f, z);
    let (ch, _) = cauchy_transform(&h, z);
    let phi = Complex::new(params.gamma_nd(), T::zero()) + cf * half;
    let phi_prime = cf_prime * half;
    let psi = params.gamma_prime_nd() + ch * half - (cf + z * cf_prime) * half;
    Ok(Potentials { phi, phi_prime, psi })
}

/// Plane stress tensor `(s11, s22, s12) / mu` at `z` via
/// `s11 + s22 = 4 Re Φ` and `s22 - s11 + 2i s12 = 2 (conj(z) Φ' + Ψ)`.
pub fn plane_stress_field<T: Real>(
    set: &CoefficientSet<T>,
    params: &ProblemParams<T>,
    z: Complex<T>,
) -> Result<FieldSample<T>> {
    let p = eval_potentials(set, params, z)?;
    let half = T::lit(0.5);
    let sum = T::lit(4.0) * p.phi.re;
    let dif = (z.conj() * p.phi_prime + p.psi) * T::lit(2.0);
    Ok(FieldSample {
        location: Location::Plane { z },
        sigma11: Some((sum - dif.re) * half),
        sigma12: dif.im * half,
        sigma22: (sum + dif.re) * half,
        u1: None,
        u2: None,
    })
}
