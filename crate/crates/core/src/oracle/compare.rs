//! Discrepancy between two reconstructions of the same mode's jump fields.

use crate::error::Result;
use crate::oracle::nystrom::OracleSolution;
use crate::scalar::Real;
use crate::spectral::{eval_solution, CoefficientSet, Mode};

/// Anything that can report a mode's `G` and `Q` components along the crack.
pub trait JumpFieldSource<T: Real> {
    /// `Re G` (mode I) or `Im G` (mode II).
    fn g_component(&self, t: T) -> Result<T>;
    /// `Im Q` (mode I) or `Re Q` (mode II).
    fn q_component(&self, t: T) -> Result<T>;
}

impl<T: Real> JumpFieldSource<T> for OracleSolution<T> {
    fn g_component(&self, t: T) -> Result<T> {
        Ok(OracleSolution::g_component(self, t))
    }

    fn q_component(&self, t: T) -> Result<T> {
        Ok(OracleSolution::q_component(self, t))
    }
}

/// One mode of a spectral coefficient set viewed as a field source.
#[derive(Debug, Clone, Copy)]
pub struct SpectralField<'a, T> {
    pub coefficients: &'a CoefficientSet<T>,
    pub mode: Mode,
}

impl<T: Real> JumpFieldSource<T> for SpectralField<'_, T> {
    fn g_component(&self, t: T) -> Result<T> {
        let v = eval_solution(self.coefficients, t)?;
        Ok(match self.mode {
            Mode::I => v.g.re,
            Mode::II => v.g.im,
        })
    }

    fn q_component(&self, t: T) -> Result<T> {
        let v = eval_solution(self.coefficients, t)?;
        Ok(match self.mode {
            Mode::I => v.q.im,
            Mode::II => v.q.re,
        })
    }
}

/// Tabulated values on a grid (useful for feeding one solver's output to the
/// comparison directly).
#[derive(Debug, Clone)]
pub struct SampledField<T> {
    pub grid: Vec<T>,
    pub g: Vec<T>,
    pub q: Vec<T>,
}

impl<T: Real> SampledField<T> {
    pub fn sample(source: &impl JumpFieldSource<T>, grid: &[T]) -> Result<Self> {
        let g = grid.iter().map(|&t| source.g_component(t)).collect::<Result<_>>()?;
        let q = grid.iter().map(|&t| source.q_component(t)).collect::<Result<_>>()?;
        Ok(Self {
            grid: grid.to_vec(),
            g,
            q,
        })
    }

    fn lookup(&self, t: T, values: &[T]) -> Result<T> {
        self.grid
            .iter()
            .position(|&x| x == t)
            .map(|i| values[i])
            .ok_or_else(|| crate::error::Error::DimensionMismatch(format!("{t} is not a sample point")))
    }
}

impl<T: Real> JumpFieldSource<T> for SampledField<T> {
    fn g_component(&self, t: T) -> Result<T> {
        self.lookup(t, &self.g)
    }

    fn q_component(&self, t: T) -> Result<T> {
        self.lookup(t, &self.q)
    }
}

/// Relative discrepancies, normalised by the reference field's magnitude on
/// the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy<T> {
    pub g_linf: T,
    pub g_l2: T,
    pub q_linf: T,
    pub q_l2: T,
}

impl<T: Real> Discrepancy<T> {
    pub fn max_linf(&self) -> T {
        self.g_linf.max(self.q_linf)
    }
}

fn relative_norms<T: Real>(reference: &[T], candidate: &[T]) -> (T, T) {
    let (mut dmax, mut rmax, mut d2, mut r2) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (&r, &c) in reference.iter().zip(candidate) {
        let d = (c - r).abs();
        dmax = dmax.max(d);
        rmax = rmax.max(r.abs());
        d2 += d * d;
        r2 += r * r;
    }
    let safe = |num: T, den: T| if den > T::zero() { num / den } else { num };
    (safe(dmax, rmax), safe(d2.sqrt(), r2.sqrt()))
}

/// Compare `candidate` (e.g. the spectral solution) against `reference`
/// (e.g. the Nyström oracle) on `grid`.
pub fn compare_solutions<T: Real>(
    candidate: &impl JumpFieldSource<T>,
    reference: &impl JumpFieldSource<T>,
    grid: &[T],
) -> Result<Discrepancy<T>> {
    let a = SampledField::sample(candidate, grid)?;
    let b = SampledField::sample(reference, grid)?;
    let (g_linf, g_l2) = relative_norms(&b.g, &a.g);
    let (q_linf, q_l2) = relative_norms(&b.q, &a.q);
    Ok(Discrepancy {
        g_linf,
        g_l2,
        q_linf,
        q_l2,
    })
}
