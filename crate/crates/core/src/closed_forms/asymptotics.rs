//! Large-N limits of `(1/N) ln <|p(z)|^2>` and the root densities they imply
//! through `rho = (1/4pi) Laplacian(Phi)`.

use std::f64::consts::PI;

use crate::ensembles::EnsembleKind;
use crate::orthopoly::Quadrature;
use crate::{Error, Result, C64};

/// Which limiting log-correlator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    GuePermanental,
    CuePermanental,
    CueCharacteristic,
    GinibrePermanental,
}

/// `Psi(q) = w^2/8 - ln w`, `w = q - sqrt(q^2 - 4)`, real part only, with the
/// square root continued analytically off `[-2, 2]` as `sqrt(q-2) sqrt(q+2)`.
fn gue_psi_re(q: C64) -> f64 {
    let s = (q - 2.0).sqrt() * (q + 2.0).sqrt();
    let w = q - s;
    (w * w).re / 8.0 - w.norm().ln()
}

/// `Phi(z)` for the given kind, with the additive constant set to zero.
///
/// For the GUE, `Phi(x, y) = 2 Re Psi(y + ix)`. On the cut `x = 0` the value
/// is the limit from `x > 0`; `Phi` itself is continuous there, only its
/// `x`-derivative jumps.
pub fn asymptotic_phi(kind: PhiKind, z: C64) -> f64 {
    let r2 = z.norm_sqr();
    match kind {
        PhiKind::GuePermanental => {
            // -0.0 would select the other side of the cut
            let x = if z.re == 0.0 { 0.0 } else { z.re };
            2.0 * gue_psi_re(C64::new(z.im, x))
        }
        PhiKind::CuePermanental if r2 < 1.0 => 2.0 * ((1.0 + r2) / 2.0).ln(),
        PhiKind::CueCharacteristic if r2 < 1.0 => 0.0,
        PhiKind::GinibrePermanental if r2 < 1.0 => r2 - 1.0,
        _ => r2.ln(),
    }
}

/// Semicircle density of radius `radius`, `2 sqrt(R^2 - y^2) / (pi R^2)`.
pub fn semicircle(y: f64, radius: f64) -> f64 {
    let d = radius * radius - y * y;
    if d <= 0.0 {
        0.0
    } else {
        2.0 * d.sqrt() / (PI * radius * radius)
    }
}

/// Conjectured limiting density of permanental roots.
///
/// GUE and GOE roots sit on the imaginary axis; for those the value is the
/// line density in `y = Im z` (radius 2 and `2 sqrt 2`), independent of `x`.
/// CUE and Ginibre give an area density on the unit disk, zero outside.
pub fn density_oracle(kind: EnsembleKind, z: C64) -> Result<f64> {
    let r2 = z.norm_sqr();
    match kind {
        EnsembleKind::Gue => Ok(semicircle(z.im, 2.0)),
        EnsembleKind::Goe => Ok(semicircle(z.im, 2.0 * 2f64.sqrt())),
        EnsembleKind::Cue if r2 <= 1.0 => Ok(2.0 / (PI * (1.0 + r2) * (1.0 + r2))),
        EnsembleKind::Ginibre if r2 <= 1.0 => Ok(1.0 / PI),
        EnsembleKind::Cue | EnsembleKind::Ginibre => Ok(0.0),
        EnsembleKind::UnitaryInvariant => Err(Error::domain(
            "density_oracle",
            "no limiting density for a general potential",
        )),
    }
}

/// `Phi` and `rho` bundled for one ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsymptoticProfile {
    pub ensemble: EnsembleKind,
}

impl AsymptoticProfile {
    pub fn new(ensemble: EnsembleKind) -> Result<Self> {
        if ensemble == EnsembleKind::UnitaryInvariant {
            return Err(Error::domain(
                "AsymptoticProfile",
                "no limiting profile for a general potential",
            ));
        }
        Ok(Self { ensemble })
    }

    /// Permanental `Phi`; none is known in closed form for the GOE.
    pub fn phi(&self, z: C64) -> Option<f64> {
        let kind = match self.ensemble {
            EnsembleKind::Gue => PhiKind::GuePermanental,
            EnsembleKind::Cue => PhiKind::CuePermanental,
            EnsembleKind::Ginibre => PhiKind::GinibrePermanental,
            _ => return None,
        };
        Some(asymptotic_phi(kind, z))
    }

    pub fn density(&self, z: C64) -> f64 {
        density_oracle(self.ensemble, z).expect("profile ensemble has an oracle")
    }

    /// Whether roots live on the imaginary axis (line density) or in the plane.
    pub fn is_line_density(&self) -> bool {
        self.ensemble.is_hermitian()
    }

    /// Total mass of the density over its support, by Gauss-Legendre.
    pub fn total_mass(&self) -> f64 {
        let q = Quadrature::gauss_legendre_on(40, 0.0, 1.0);
        if self.is_line_density() {
            let radius = if self.ensemble == EnsembleKind::Gue {
                2.0
            } else {
                2.0 * 2f64.sqrt()
            };
            // y = R sin(theta) removes the square-root endpoints
            let qt = Quadrature::gauss_legendre_on(40, -PI / 2.0, PI / 2.0);
            qt.integrate(|t| self.density(C64::new(0.0, radius * t.sin())) * radius * t.cos())
        } else {
            q.integrate(|r| 2.0 * PI * r * self.density(C64::new(r, 0.0)))
        }
    }
}
