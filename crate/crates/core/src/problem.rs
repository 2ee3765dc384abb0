//! Physical and dimensionless problem parameters.
//!
//! User input is in SI units. Internally every quantity is nondimensional:
//! lengths are scaled by the crack half-length `ell` (the crack occupies
//! `[-1, 1]`) and stresses by the bulk shear modulus `mu`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Isotropic bulk material in plane strain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkMaterial<T> {
    /// Shear modulus (Pa).
    pub mu: T,
    /// Poisson ratio.
    pub nu: T,
    /// Kolosov constant `3 - 4 nu`.
    pub kappa: T,
}

impl<T: Real> BulkMaterial<T> {
    pub fn new(mu: T, nu: T) -> Result<Self> {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("shear modulus must be positive and finite, got {mu}"),
            });
        }
        Ok(Self {
            mu,
            nu,
            kappa: kolosov_constant(nu)?,
        })
    }
}

/// Plane-strain Kolosov constant `kappa = 3 - 4 nu`, for `-1 < nu < 1/2`.
pub fn kolosov_constant<T: Real>(nu: T) -> Result<T> {
    if nu > -T::one() && nu < T::lit(0.5) {
        Ok(T::lit(3.0) - T::lit(4.0) * nu)
    } else {
        Err(Error::InvalidParameter {
            name: "nu",
            reason: format!("Poisson ratio must satisfy -1 < nu < 0.5, got {nu}"),
        })
    }
}

/// Surface material of the crack faces: membrane (Lamé) moduli, residual
/// surface tension, curvature (bending) moduli, and the strain-gradient
/// length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceMaterial<T> {
    /// Surface Lamé modulus `lambda_s` (N/m).
    pub lambda_s: T,
    /// Surface shear modulus `mu_s` (N/m).
    pub mu_s: T,
    /// Residual surface tension (N/m); may have either sign.
    pub sigma0: T,
    /// Curvature modulus `zeta` (N·m).
    pub zeta: T,
    /// Curvature modulus `eta` (N·m).
    pub eta: T,
    /// Surface strain-gradient length scale (m).
    pub ell_s: T,
}

impl<T: Real> SurfaceMaterial<T> {
    /// Validate the admissibility conditions `zeta + 2 eta > 0`,
    /// `lambda_s + 2 mu_s > 0` and `ell_s > 0`.
    pub fn new(lambda_s: T, mu_s: T, sigma0: T, zeta: T, eta: T, ell_s: T) -> Result<Self> {
        let two = T::lit(2.0);
        if !(lambda_s + two * mu_s > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "lambda_s",
                reason: "surface stiffness lambda_s + 2 mu_s must be positive".into(),
            });
        }
        if !(zeta + two * eta > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "zeta_plus_2eta",
                reason: "curvature stiffness zeta + 2 eta must be positive".into(),
            });
        }
        if !(ell_s > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "ell_s",
                reason: "surface length scale must be positive".into(),
            });
        }
        if !sigma0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sigma0",
                reason: "surface tension must be finite".into(),
            });
        }
        Ok(Self {
            lambda_s,
            mu_s,
            sigma0,
            zeta,
            eta,
            ell_s,
        })
    }

    /// Membrane stiffness `lambda_s + 2 mu_s` (N/m).
    pub fn membrane_stiffness(&self) -> T {
        self.lambda_s + T::lit(2.0) * self.mu_s
    }

    /// Bending stiffness `zeta + 2 eta` (N·m).
    pub fn bending_stiffness(&self) -> T {
        self.zeta + T::lit(2.0) * self.eta
    }
}

/// Remote uniform stress state (Pa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldLoad<T> {
    pub s11: T,
    pub s22: T,
    pub s12: T,
}

impl<T: Real> FarFieldLoad<T> {
    pub fn new(s11: T, s22: T, s12: T) -> Self {
        Self { s11, s22, s12 }
    }

    /// `Gamma = (s11 + s22) / 4`.
    pub fn gamma(&self) -> T {
        (self.s11 + self.s22) / T::lit(4.0)
    }

    /// `Gamma' = (s22 - s11) / 2 + i s12`.
    pub fn gamma_prime(&self) -> Complex<T> {
        Complex::new((self.s22 - self.s11) / T::lit(2.0), self.s12)
    }

    pub fn scaled(&self, c: T) -> Self {
        Self::new(self.s11 * c, self.s22 * c, self.s12 * c)
    }
}

/// `(Gamma, Gamma')` of a far-field load.
pub fn far_field_constants<T: Real>(load: &FarFieldLoad<T>) -> (T, Complex<T>) {
    (load.gamma(), load.gamma_prime())
}

/// The two scalar forcings of the decoupled problems:
/// `2 Re Gamma + Re Gamma' = s22` (opening) and `Im Gamma' = s12` (sliding).
pub fn forcings<T: Real>(load: &FarFieldLoad<T>) -> (T, T) {
    let (g, gp) = far_field_constants(load);
    (T::lit(2.0) * g + gp.re, gp.im)
}

/// Dimensionless surface groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gammas<T> {
    /// Membrane stiffness group, `(2 mu_s + lambda_s) / (4 mu ell)`.
    pub g1: T,
    /// Surface-tension group, `sigma0 / (4 mu ell)`.
    pub g2: T,
    /// Bending group, `(zeta + 2 eta) / (4 mu ell^3)`.
    pub g3: T,
    /// Strain-gradient group, `ell_s^2 (2 mu_s + lambda_s) / (4 mu ell^3)`.
    pub g4: T,
}

impl<T: Real> Gammas<T> {
    pub fn new(g1: T, g2: T, g3: T, g4: T) -> Self {
        Self { g1, g2, g3, g4 }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self::new(self.g1 * c, self.g2 * c, self.g3 * c, self.g4 * c)
    }

    /// Exchange the roles `(g1, g2, g3, g4) -> (g2, g1, g4, g3)`, which maps
    /// the sliding-mode system onto the opening-mode one.
    pub fn swapped(&self) -> Self {
        Self::new(self.g2, self.g1, self.g4, self.g3)
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.g1, self.g2, self.g3, self.g4]
    }
}

/// Map physical surface moduli to the dimensionless groups.
pub fn dimensionless_gammas<T: Real>(surface: &SurfaceMaterial<T>, mu: T, ell: T) -> Result<Gammas<T>> {
    if !(mu > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: "shear modulus must be positive".into(),
        });
    }
    if !(ell > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "ell",
            reason: "crack half-length must be positive".into(),
        });
    }
    let four_mu_l = T::lit(4.0) * mu * ell;
    let four_mu_l3 = four_mu_l * ell * ell;
    let membrane = surface.membrane_stiffness();
    Ok(Gammas {
        g1: membrane / four_mu_l,
        g2: surface.sigma0 / four_mu_l,
        g3: surface.bending_stiffness() / four_mu_l3,
        g4: surface.ell_s * surface.ell_s * membrane / four_mu_l3,
    })
}

/// Complete parameter set of one crack problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams<T> {
    pub bulk: BulkMaterial<T>,
    /// Physical surface moduli, when the groups were derived from them.
    pub surface: Option<SurfaceMaterial<T>>,
    pub load: FarFieldLoad<T>,
    /// Crack half-length (m).
    pub ell: T,
    pub gammas: Gammas<T>,
}

impl<T: Real> ProblemParams<T> {
    /// Build from physical surface moduli.
    pub fn new(bulk: BulkMaterial<T>, surface: SurfaceMaterial<T>, load: FarFieldLoad<T>, ell: T) -> Result<Self> {
        let gammas = dimensionless_gammas(&surface, bulk.mu, ell)?;
        Ok(Self {
            bulk,
            surface: Some(surface),
            load,
            ell,
            gammas,
        })
    }

    /// Build from the dimensionless groups directly.
    pub fn with_gammas(bulk: BulkMaterial<T>, gammas: Gammas<T>, load: FarFieldLoad<T>, ell: T) -> Result<Self> {
        if !(ell > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "ell",
                reason: "crack half-length must be positive".into(),
            });
        }
        for (name, g) in [
            ("gamma1", gammas.g1),
            ("gamma2", gammas.g2),
            ("gamma3", gammas.g3),
            ("gamma4", gammas.g4),
        ] {
            if !g.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite".into(),
                });
            }
        }
        Ok(Self {
            bulk,
            surface: None,
            load,
            ell,
            gammas,
        })
    }

    pub fn kappa(&self) -> T {
        self.bulk.kappa
    }

    /// Nondimensional `Gamma / mu`.
    pub fn gamma_nd(&self) -> T {
        self.load.gamma() / self.bulk.mu
    }

    /// Nondimensional `Gamma' / mu`.
    pub fn gamma_prime_nd(&self) -> Complex<T> {
        self.load.gamma_prime() / self.bulk.mu
    }

    /// Nondimensional opening forcing `s22 / mu`.
    pub fn opening_forcing(&self) -> T {
        forcings(&self.load).0 / self.bulk.mu
    }

    /// Nondimensional sliding forcing `s12 / mu`.
    pub fn sliding_forcing(&self) -> T {
        forcings(&self.load).1 / self.bulk.mu
    }

    /// Copy with a different load.
    pub fn with_load(&self, load: FarFieldLoad<T>) -> Self {
        Self { load, ..*self }
    }

    /// Copy with different dimensionless groups (drops the physical moduli,
    /// which would no longer be consistent).
    pub fn with_replaced_gammas(&self, gammas: Gammas<T>) -> Self {
        Self {
            gammas,
            surface: None,
            ..*self
        }
    }
}

/// The nanoscale benchmark: a 10 nm crack (`ell = 5 nm`) in a bulk with
/// `mu = 26.3 GPa`, `nu = 0.2481` under equal far-field components of
/// 0.5 GPa; membrane stiffness and surface tension `8.01 N/m`, bending
/// stiffness `8.01e-19 N·m`, and the strain-gradient length chosen so that
/// `g4 = g4_over_g3 · g3`.
pub fn reference_case<T: Real>(g4_over_g3: T) -> Result<ProblemParams<T>> {
    if !(g4_over_g3 > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma4_over_gamma3",
            reason: "ratio must be positive".into(),
        });
    }
    let bulk = BulkMaterial::new(T::lit(26.3e9), T::lit(0.2481))?;
    let membrane = T::lit(1.602 * 5.0);
    let bending = T::lit(1.602e-19 * 5.0);
    // ell_s^2 * membrane = ratio * bending
    let ell_s = (g4_over_g3 * bending / membrane).sqrt();
    let surface = SurfaceMaterial::new(membrane, T::zero(), membrane, bending, T::zero(), ell_s)?;
    let s = T::lit(0.5e9);
    ProblemParams::new(bulk, surface, FarFieldLoad::new(s, s, s), T::lit(5e-9))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn kolosov_examples() {
        assert!((kolosov_constant(0.2481_f64).unwrap() - 2.0076).abs() < 1e-14);
        assert_eq!(kolosov_constant(0.25).unwrap(), 2.0);
        assert_eq!(kolosov_constant(0.0).unwrap(), 3.0);
        let err = kolosov_constant(0.6).unwrap_err();
        assert!(err.to_string().contains("nu"));
        assert!(kolosov_constant(-1.0).is_err());
    }

    #[test]
    fn gamma_examples() {
        let surf = SurfaceMaterial::new(8.01, 0.0, 8.01, 8.01e-19, 0.0, 1e-10).unwrap();
        let g = dimensionless_gammas(&surf, 26.3e9, 5e-9).unwrap();
        assert!(rel(g.g1, 8.01 / (4.0 * 26.3e9 * 5e-9)) < 1e-14);
        assert!(rel(g.g1, 0.015228) < 1e-4);
        assert_eq!(g.g1, g.g2);
        let g2 = dimensionless_gammas(&surf, 26.3e9, 1e-8).unwrap();
        assert!(rel(g2.g1, g.g1 / 2.0) < 1e-14);
        assert!(rel(g2.g2, g.g2 / 2.0) < 1e-14);
        assert!(rel(g2.g3, g.g3 / 8.0) < 1e-14);
        assert!(rel(g2.g4, g.g4 / 8.0) < 1e-14);
    }

    #[test]
    fn zero_surface_stiffness_maps_to_zero_groups() {
        let surf = SurfaceMaterial {
            lambda_s: 0.0,
            mu_s: 0.0,
            sigma0: 0.0,
            zeta: 0.0,
            eta: 0.0,
            ell_s: 0.0,
        };
        let g = dimensionless_gammas(&surf, 1.0, 1.0).unwrap();
        assert_eq!(g.as_array(), [0.0; 4]);
        assert!(SurfaceMaterial::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn far_field_examples() {
        let load = FarFieldLoad::new(0.5e9, 0.5e9, 0.5e9);
        let (g, gp) = far_field_constants(&load);
        assert_eq!(g, 0.25e9);
        assert_eq!(gp, Complex::new(0.0, 0.5e9));
        let (f1, f2) = forcings(&FarFieldLoad::new(0.0, 0.0, 0.0));
        assert_eq!((f1, f2), (0.0, 0.0));
        let (f1, f2) = forcings(&FarFieldLoad::new(0.0, 3.0, 0.0));
        assert_eq!((f1, f2), (3.0, 0.0));
    }

    #[test]
    fn reference_case_groups() {
        for ratio in [0.1, 1.0, 10.0] {
            let p = reference_case(ratio).unwrap();
            assert!(rel(p.gammas.g4, ratio * p.gammas.g3) < 1e-12);
            assert!(rel(p.gammas.g3, 6.0913e-5) < 1e-4);
        }
        assert!(reference_case(0.0).is_err());
    }
}
