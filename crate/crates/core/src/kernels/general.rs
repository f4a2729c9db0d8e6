//! Nonsingular general solutions of common differential operators.
//!
//! Each family is finite at r = 0 and annihilated by its governing operator.
//! [`residual_at`] applies that operator by central differences so the
//! catalog can check itself.

use super::bessel::{bessel_i0, bessel_i1, bessel_j0, bessel_j1};
use crate::error::{Error, Result};

/// Below this radius quotients such as sin(lr)/r use their series limit.
const REMOVABLE_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// A J0(lr), annihilated by lap + l^2 in 2D.
    Helmholtz2D,
    /// A I0(lr), annihilated by lap - l^2 in 2D.
    ModifiedHelmholtz2D,
    /// A sin(lr)/r, annihilated by lap + l^2 in 3D.
    Helmholtz3D,
    /// A sinh(lr)/r, annihilated by lap - l^2 in 3D.
    ModifiedHelmholtz3D,
    /// A1 J0(lr) + A2 I0(lr), annihilated by lap^2 - l^4 in 2D.
    Biharmonic2D,
    /// A1 sin(lr)/r + A2 sinh(lr)/r, annihilated by lap^2 - l^4 in 3D.
    Biharmonic3D,
    /// A exp(-k l^2 tau) sin(lr)/r, annihilated by lap - (1/k) d/dt in 3D.
    Heat3D,
    /// [A1 cos(c l tau) + A2/(c l) sin(c l tau)] sin(lr)/r, annihilated by
    /// lap - (1/c^2) d2/dt2 in 3D.
    Wave3D,
    /// A I0(sqrt(a) r) with a frozen coefficient a, annihilated by lap - a.
    FrozenVaryingHelmholtz2D,
    /// Frozen-velocity kernel for lap w - v dw/dx = 0.
    FrozenConvectionDiffusion2D,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Helmholtz2D,
        Family::ModifiedHelmholtz2D,
        Family::Helmholtz3D,
        Family::ModifiedHelmholtz3D,
        Family::Biharmonic2D,
        Family::Biharmonic3D,
        Family::Heat3D,
        Family::Wave3D,
        Family::FrozenVaryingHelmholtz2D,
        Family::FrozenConvectionDiffusion2D,
    ];

    pub fn dimension(self) -> usize {
        match self {
            Family::Helmholtz2D
            | Family::ModifiedHelmholtz2D
            | Family::Biharmonic2D
            | Family::FrozenVaryingHelmholtz2D
            | Family::FrozenConvectionDiffusion2D => 2,
            _ => 3,
        }
    }

    pub fn is_transient(self) -> bool {
        matches!(self, Family::Heat3D | Family::Wave3D)
    }
}

/// Which closed form the frozen convection-diffusion kernel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelVariant {
    /// exp(v dx / 2) I0(|v| r / 2): exactly annihilated by lap - v d/dx.
    #[default]
    Derived,
    /// exp(-v dx sqrt2) I0(|v| r / sqrt2), as printed in the original
    /// formulation. Does not annihilate the frozen operator.
    Literal,
}

/// Extra inputs some families need beyond the radius.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Aux {
    #[default]
    None,
    /// Time offset tau = t - t_k for the transient families.
    Time(f64),
    /// Frozen coefficient a for [`Family::FrozenVaryingHelmholtz2D`].
    Frozen(f64),
    /// Frozen velocity and x-offset (response minus source) for
    /// [`Family::FrozenConvectionDiffusion2D`].
    FrozenConvection { velocity: f64, dx: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralSolution {
    pub family: Family,
    /// Wavenumber; unused by the frozen families.
    pub lambda: f64,
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    /// Diffusivity k of the heat kernel.
    pub diffusivity: f64,
    /// Wave speed c of the wave kernel.
    pub wave_speed: f64,
    pub variant: KernelVariant,
}

impl GeneralSolution {
    pub fn new(family: Family, lambda: f64) -> Self {
        GeneralSolution {
            family,
            lambda,
            a: 1.0,
            a1: 1.0,
            a2: 1.0,
            diffusivity: 1.0,
            wave_speed: 1.0,
            variant: KernelVariant::Derived,
        }
    }

    pub fn helmholtz_2d(lambda: f64) -> Self {
        Self::new(Family::Helmholtz2D, lambda)
    }

    pub fn with_amplitudes(mut self, a: f64, a1: f64, a2: f64) -> Self {
        self.a = a;
        self.a1 = a1;
        self.a2 = a2;
        self
    }

    pub fn with_diffusivity(mut self, k: f64) -> Self {
        self.diffusivity = k;
        self
    }

    pub fn with_wave_speed(mut self, c: f64) -> Self {
        self.wave_speed = c;
        self
    }

    pub fn with_variant(mut self, variant: KernelVariant) -> Self {
        self.variant = variant;
        self
    }

    fn validate(&self) -> Result<()> {
        let needs_lambda = !matches!(
            self.family,
            Family::FrozenVaryingHelmholtz2D | Family::FrozenConvectionDiffusion2D
        );
        if needs_lambda && !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!(
                "{:?} needs a positive wavenumber, got {}",
                self.family, self.lambda
            )));
        }
        if self.family == Family::Heat3D && !(self.diffusivity > 0.0) {
            return Err(Error::Config("heat kernel needs positive diffusivity".into()));
        }
        if self.family == Family::Wave3D && !(self.wave_speed > 0.0) {
            return Err(Error::Config("wave kernel needs positive wave speed".into()));
        }
        Ok(())
    }
}

/// sin(l r)/r with its r -> 0 limit.
fn sinc(l: f64, r: f64) -> f64 {
    if r < REMOVABLE_EPS {
        let z = l * r;
        l * (1.0 - z * z / 6.0)
    } else {
        (l * r).sin() / r
    }
}

fn sinhc(l: f64, r: f64) -> f64 {
    if r < REMOVABLE_EPS {
        let z = l * r;
        l * (1.0 + z * z / 6.0)
    } else {
        (l * r).sinh() / r
    }
}

/// d/dr of sin(l r)/r.
fn sinc_dr(l: f64, r: f64) -> f64 {
    if r < REMOVABLE_EPS {
        -l * l * l * r / 3.0
    } else {
        let z = l * r;
        (z * z.cos() - z.sin()) / (r * r)
    }
}

fn sinhc_dr(l: f64, r: f64) -> f64 {
    if r < REMOVABLE_EPS {
        l * l * l * r / 3.0
    } else {
        let z = l * r;
        (z * z.cosh() - z.sinh()) / (r * r)
    }
}

fn frozen_convection_params(variant: KernelVariant) -> (f64, f64) {
    // (exponent factor, Bessel-argument factor)
    match variant {
        KernelVariant::Derived => (0.5, 0.5),
        KernelVariant::Literal => (-std::f64::consts::SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    }
}

fn time_offset(gs: &GeneralSolution, aux: Aux) -> Result<f64> {
    match aux {
        Aux::Time(tau) if tau.is_finite() => Ok(tau),
        _ => Err(Error::Config(format!("{:?} needs a time offset", gs.family))),
    }
}

fn frozen_coefficient(aux: Aux) -> Result<f64> {
    match aux {
        Aux::Frozen(a) if a.is_finite() && a >= 0.0 => Ok(a),
        Aux::Frozen(a) => Err(Error::Domain(format!(
            "frozen coefficient must be finite and non-negative, got {a}"
        ))),
        _ => Err(Error::Config(
            "FrozenVaryingHelmholtz2D needs a frozen coefficient".into(),
        )),
    }
}

fn frozen_velocity(aux: Aux) -> Result<(f64, f64)> {
    match aux {
        Aux::FrozenConvection { velocity, dx } if velocity.is_finite() && dx.is_finite() => {
            Ok((velocity, dx))
        }
        Aux::FrozenConvection { .. } => Err(Error::Domain("non-finite frozen velocity".into())),
        _ => Err(Error::Config(
            "FrozenConvectionDiffusion2D needs a frozen velocity and x-offset".into(),
        )),
    }
}

/// Value of the general solution at radial distance `r`.
pub fn eval_general_solution(gs: &GeneralSolution, r: f64, aux: Aux) -> Result<f64> {
    gs.validate()?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    let l = gs.lambda;
    Ok(match gs.family {
        Family::Helmholtz2D => gs.a * bessel_j0(l * r)?,
        Family::ModifiedHelmholtz2D => gs.a * bessel_i0(l * r)?,
        Family::Helmholtz3D => gs.a * sinc(l, r),
        Family::ModifiedHelmholtz3D => gs.a * sinhc(l, r),
        Family::Biharmonic2D => gs.a1 * bessel_j0(l * r)? + gs.a2 * bessel_i0(l * r)?,
        Family::Biharmonic3D => gs.a1 * sinc(l, r) + gs.a2 * sinhc(l, r),
        Family::Heat3D => {
            let tau = time_offset(gs, aux)?;
            gs.a * (-gs.diffusivity * l * l * tau).exp() * sinc(l, r)
        }
        Family::Wave3D => {
            let tau = time_offset(gs, aux)?;
            let w = gs.wave_speed * l;
            (gs.a1 * (w * tau).cos() + gs.a2 / w * (w * tau).sin()) * sinc(l, r)
        }
        Family::FrozenVaryingHelmholtz2D => {
            let a = frozen_coefficient(aux)?;
            gs.a * bessel_i0(a.sqrt() * r)?
        }
        Family::FrozenConvectionDiffusion2D => {
            let (v, dx) = frozen_velocity(aux)?;
            let (ef, bf) = frozen_convection_params(gs.variant);
            gs.a * (ef * v * dx).exp() * bessel_i0(bf * v.abs() * r)?
        }
    })
}

/// Radial derivative d/dr for the radially symmetric families.
pub fn eval_general_solution_dr(gs: &GeneralSolution, r: f64, aux: Aux) -> Result<f64> {
    gs.validate()?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    let l = gs.lambda;
    Ok(match gs.family {
        Family::Helmholtz2D => -gs.a * l * bessel_j1(l * r)?,
        Family::ModifiedHelmholtz2D => gs.a * l * bessel_i1(l * r)?,
        Family::Helmholtz3D => gs.a * sinc_dr(l, r),
        Family::ModifiedHelmholtz3D => gs.a * sinhc_dr(l, r),
        Family::Biharmonic2D => l * (-gs.a1 * bessel_j1(l * r)? + gs.a2 * bessel_i1(l * r)?),
        Family::Biharmonic3D => gs.a1 * sinc_dr(l, r) + gs.a2 * sinhc_dr(l, r),
        Family::Heat3D => {
            let tau = time_offset(gs, aux)?;
            gs.a * (-gs.diffusivity * l * l * tau).exp() * sinc_dr(l, r)
        }
        Family::Wave3D => {
            let tau = time_offset(gs, aux)?;
            let w = gs.wave_speed * l;
            (gs.a1 * (w * tau).cos() + gs.a2 / w * (w * tau).sin()) * sinc_dr(l, r)
        }
        Family::FrozenVaryingHelmholtz2D => {
            let a = frozen_coefficient(aux)?;
            let s = a.sqrt();
            gs.a * s * bessel_i1(s * r)?
        }
        Family::FrozenConvectionDiffusion2D => {
            return Err(Error::Unsupported(
                "frozen convection kernel is not radial; use eval_gradient_2d".into(),
            ))
        }
    })
}

/// Gradient with respect to the response point of a 2D family, given the
/// offset d = x - x_k. The aux x-offset of the convection family is taken
/// from `d`.
pub fn eval_gradient_2d(gs: &GeneralSolution, d: [f64; 2], aux: Aux) -> Result<[f64; 2]> {
    let r = d[0].hypot(d[1]);
    if gs.family == Family::FrozenConvectionDiffusion2D {
        gs.validate()?;
        let (v, _) = frozen_velocity(aux)?;
        let (ef, bf) = frozen_convection_params(gs.variant);
        let e = (ef * v * d[0]).exp();
        let i0 = bessel_i0(bf * v.abs() * r)?;
        let di0 = if r > 0.0 {
            bf * v.abs() * bessel_i1(bf * v.abs() * r)? / r
        } else {
            0.0
        };
        return Ok([
            gs.a * e * (ef * v * i0 + di0 * d[0]),
            gs.a * e * di0 * d[1],
        ]);
    }
    if gs.family.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            expected: gs.family.dimension(),
            found: 2,
        });
    }
    if r == 0.0 {
        return Ok([0.0, 0.0]);
    }
    let g = eval_general_solution_dr(gs, r, aux)? / r;
    Ok([g * d[0], g * d[1]])
}

/// Evaluates at an offset vector, filling in the convection x-offset.
pub fn eval_at_offset(gs: &GeneralSolution, offset: &[f64], aux: Aux) -> Result<f64> {
    let r = offset.iter().map(|v| v * v).sum::<f64>().sqrt();
    let aux = match (gs.family, aux) {
        (Family::FrozenConvectionDiffusion2D, Aux::FrozenConvection { velocity, .. }) => {
            Aux::FrozenConvection {
                velocity,
                dx: offset[0],
            }
        }
        _ => aux,
    };
    eval_general_solution(gs, r, aux)
}

/// Finite-difference operator residual at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// Operator applied to the kernel; zero for an exact annihilator.
    pub value: f64,
    /// Sum of the magnitudes of the operator's separate terms.
    pub scale: f64,
}

/// Spatial step for the second-order stencils.
const FD_STEP: f64 = 1e-4;
/// Step for the nested fourth-order biharmonic stencil.
const FD_STEP_BIHARMONIC: f64 = 0.05;

fn shifted(p: &[f64], axis: usize, h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[axis] += h;
    q
}

/// Standard (2d+1)-point Laplacian.
fn fd_laplacian<F>(f: &F, p: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let c = f(p)?;
    let mut sum = 0.0;
    for axis in 0..p.len() {
        sum += f(&shifted(p, axis, h))? + f(&shifted(p, axis, -h))? - 2.0 * c;
    }
    Ok(sum / (h * h))
}

/// Fourth-order accurate Laplacian (-1, 16, -30, 16, -1) / 12h^2 per axis.
fn fd_laplacian4<F>(f: &F, p: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let c = f(p)?;
    let mut sum = 0.0;
    for axis in 0..p.len() {
        let p1 = f(&shifted(p, axis, h))? + f(&shifted(p, axis, -h))?;
        let p2 = f(&shifted(p, axis, 2.0 * h))? + f(&shifted(p, axis, -2.0 * h))?;
        sum += (-p2 + 16.0 * p1 - 30.0 * c) / 12.0;
    }
    Ok(sum / (h * h))
}

/// Applies the family's governing operator to the kernel at `point`
/// (offset from the source) using central differences.
pub fn residual_at(gs: &GeneralSolution, point: &[f64], aux: Aux) -> Result<Residual> {
    gs.validate()?;
    let dim = gs.family.dimension();
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: point.len(),
        });
    }
    let l2 = gs.lambda * gs.lambda;
    let spatial = |aux: Aux| move |p: &[f64]| eval_at_offset(gs, p, aux);
    let w = eval_at_offset(gs, point, aux)?;
    match gs.family {
        Family::Helmholtz2D | Family::Helmholtz3D => {
            let lap = fd_laplacian(&spatial(aux), point, FD_STEP)?;
            Ok(Residual {
                value: lap + l2 * w,
                scale: lap.abs() + (l2 * w).abs(),
            })
        }
        Family::ModifiedHelmholtz2D | Family::ModifiedHelmholtz3D => {
            let lap = fd_laplacian(&spatial(aux), point, FD_STEP)?;
            Ok(Residual {
                value: lap - l2 * w,
                scale: lap.abs() + (l2 * w).abs(),
            })
        }
        Family::Biharmonic2D | Family::Biharmonic3D => {
            let f = spatial(aux);
            let h = FD_STEP_BIHARMONIC;
            let inner = |p: &[f64]| fd_laplacian4(&f, p, h);
            let bih = fd_laplacian4(&inner, point, h)?;
            Ok(Residual {
                value: bih - l2 * l2 * w,
                scale: bih.abs() + (l2 * l2 * w).abs(),
            })
        }
        Family::FrozenVaryingHelmholtz2D => {
            let a = frozen_coefficient(aux)?;
            let lap = fd_laplacian(&spatial(aux), point, FD_STEP)?;
            Ok(Residual {
                value: lap - a * w,
                scale: lap.abs() + (a * w).abs(),
            })
        }
        Family::FrozenConvectionDiffusion2D => {
            let (v, _) = frozen_velocity(aux)?;
            let f = spatial(aux);
            let lap = fd_laplacian(&f, point, FD_STEP)?;
            let wx = (f(&shifted(point, 0, FD_STEP))? - f(&shifted(point, 0, -FD_STEP))?)
                / (2.0 * FD_STEP);
            Ok(Residual {
                value: lap - v * wx,
                scale: lap.abs() + (v * wx).abs(),
            })
        }
        Family::Heat3D | Family::Wave3D => {
            let tau = time_offset(gs, aux)?;
            let lap = fd_laplacian(&spatial(aux), point, FD_STEP)?;
            let at = |t: f64| eval_at_offset(gs, point, Aux::Time(t));
            let ht = FD_STEP;
            if gs.family == Family::Heat3D {
                let ut = (at(tau + ht)? - at(tau - ht)?) / (2.0 * ht);
                let rhs = ut / gs.diffusivity;
                Ok(Residual {
                    value: lap - rhs,
                    scale: lap.abs() + rhs.abs(),
                })
            } else {
                let utt = (at(tau + ht)? - 2.0 * w + at(tau - ht)?) / (ht * ht);
                let rhs = utt / (gs.wave_speed * gs.wave_speed);
                Ok(Residual {
                    value: lap - rhs,
                    scale: lap.abs() + rhs.abs(),
                })
            }
        }
    }
}

/// Largest |residual| over the sample divided by the largest term scale.
pub fn max_relative_residual<'a, I>(gs: &GeneralSolution, samples: I) -> Result<f64>
where
    I: IntoIterator<Item = (&'a [f64], Aux)>,
{
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (p, aux) in samples {
        let res = residual_at(gs, p, aux)?;
        worst = worst.max(res.value.abs());
        scale = scale.max(res.scale);
    }
    if scale == 0.0 {
        return Ok(worst);
    }
    Ok(worst / scale)
}
