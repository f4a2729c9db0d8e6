//! Radial basis functions, interpolation, and composite kernels.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{check_same_dimension, euclidean};
use crate::kernels::{bessel_j0, bessel_j1};
use crate::structmat::{DenseMatrix, Lu};

/// Interpolation systems with a larger condition estimate are rejected.
pub const MAX_CONDITION: f64 = 1e15;

/// Two centres closer than this are treated as coincident.
pub const MIN_SEPARATION: f64 = 1e-12;

type RadialClosure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar radial profile with its first two derivatives.
#[derive(Clone)]
pub enum RadialFn {
    Constant(f64),
    /// r^p.
    Power(i32),
    /// ln r.
    Log,
    /// J0(lambda r).
    BesselJ0(f64),
    /// User-supplied profile; derivatives by Richardson-extrapolated differences.
    Custom(RadialClosure),
}

impl fmt::Debug for RadialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialFn::Constant(c) => write!(f, "Constant({c})"),
            RadialFn::Power(p) => write!(f, "Power({p})"),
            RadialFn::Log => write!(f, "Log"),
            RadialFn::BesselJ0(l) => write!(f, "BesselJ0({l})"),
            RadialFn::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl RadialFn {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialFn::Custom(Arc::new(f))
    }

    /// Value and first two derivatives at r.
    fn eval3(&self, r: f64) -> Result<(f64, f64, f64)> {
        Ok(match self {
            RadialFn::Constant(c) => (*c, 0.0, 0.0),
            RadialFn::Power(p) => {
                let p = *p;
                let pf = p as f64;
                if r == 0.0 && p < 2 {
                    match p {
                        0 => (1.0, 0.0, 0.0),
                        1 => (0.0, 1.0, 0.0),
                        _ => return Err(Error::Domain(format!("r^{p} is singular at 0"))),
                    }
                } else {
                    (
                        r.powi(p),
                        pf * r.powi(p - 1),
                        pf * (pf - 1.0) * r.powi(p - 2),
                    )
                }
            }
            RadialFn::Log => {
                if r <= 0.0 {
                    return Err(Error::Domain("ln r is singular at 0".into()));
                }
                (r.ln(), 1.0 / r, -1.0 / (r * r))
            }
            RadialFn::BesselJ0(l) => {
                let z = l * r;
                let j0 = bessel_j0(z)?;
                let j1 = bessel_j1(z)?;
                // J0'' = -J0 + J1/z, with limit -1/2 at z = 0.
                let j0pp = if z.abs() < 1e-8 { -0.5 } else { -j0 + j1 / z };
                (j0, -l * j1, l * l * j0pp)
            }
            RadialFn::Custom(f) => {
                let h = 1e-3 * r.abs().max(1e-2);
                let d1 = |h: f64| (f(r + h) - f(r - h)) / (2.0 * h);
                let d2 = |h: f64| (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
                (
                    f(r),
                    (4.0 * d1(h / 2.0) - d1(h)) / 3.0,
                    (4.0 * d2(h / 2.0) - d2(h)) / 3.0,
                )
            }
        })
    }
}

pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Source-dependent forcing factor of a composite kernel.
#[derive(Clone)]
pub enum Forcing {
    Constant(f64),
    Field(PointFn),
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Constant(c) => write!(f, "Constant({c})"),
            Forcing::Field(_) => write!(f, "Field"),
        }
    }
}

impl Forcing {
    pub fn field(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Forcing::Field(Arc::new(f))
    }
}

#[derive(Debug, Clone)]
pub enum RadialKernel {
    /// r.
    Linear,
    /// sqrt(r^2 + c^2).
    Multiquadric { c: f64 },
    /// r^(2m) ln r.
    ThinPlate { m: u32 },
    /// r^2 ln r + r^2 + 1.
    ModifiedThinPlate,
    /// r^(2m) ln sqrt(r^2 + c^2).
    PrewaveletThinPlate { m: u32, c: f64 },
    /// weight(r) * fundamental(r) * forcing(source).
    FsComposite {
        weight: RadialFn,
        fundamental: RadialFn,
        forcing: Forcing,
    },
    /// parent(dilate * r + shift).
    Wavelet {
        parent: Box<RadialKernel>,
        dilate: f64,
        shift: f64,
    },
    /// Base kernel applied to the time-space distance.
    TimeSpace { base: Box<RadialKernel>, c: f64 },
}

impl RadialKernel {
    pub fn mq(c: f64) -> Self {
        RadialKernel::Multiquadric { c }
    }
}

/// Value and radial derivatives of a kernel at one distance.
fn eval3(k: &RadialKernel, r: f64, source: Option<&[f64]>) -> Result<(f64, f64, f64)> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    Ok(match k {
        RadialKernel::Linear => (r, 1.0, 0.0),
        RadialKernel::Multiquadric { c } => {
            if !(*c > 0.0) {
                return Err(Error::Config(format!("MQ shape parameter must be > 0, got {c}")));
            }
            let s = (r * r + c * c).sqrt();
            (s, r / s, c * c / (s * s * s))
        }
        RadialKernel::ThinPlate { m } => {
            if *m == 0 {
                return Err(Error::Config("thin-plate order must be >= 1".into()));
            }
            let m2 = 2 * *m as i32;
            let mf = m2 as f64;
            if r == 0.0 {
                let d2 = if m2 > 2 { 0.0 } else { f64::NEG_INFINITY };
                (0.0, 0.0, d2)
            } else {
                let l = r.ln();
                (
                    r.powi(m2) * l,
                    r.powi(m2 - 1) * (mf * l + 1.0),
                    r.powi(m2 - 2) * (mf * (mf - 1.0) * l + 2.0 * mf - 1.0),
                )
            }
        }
        RadialKernel::ModifiedThinPlate => {
            if r == 0.0 {
                (1.0, 0.0, f64::NEG_INFINITY)
            } else {
                let l = r.ln();
                (r * r * l + r * r + 1.0, r * (2.0 * l + 3.0), 2.0 * l + 5.0)
            }
        }
        RadialKernel::PrewaveletThinPlate { m, c } => {
            if *m == 0 {
                return Err(Error::Config("prewavelet order must be >= 1".into()));
            }
            let m2 = 2 * *m as i32;
            let mf = m2 as f64;
            let q = r * r + c * c;
            if q == 0.0 {
                return Ok((0.0, 0.0, if m2 > 2 { 0.0 } else { f64::NEG_INFINITY }));
            }
            let l = 0.5 * q.ln();
            let lp = r / q;
            let lpp = (c * c - r * r) / (q * q);
            let a = r.powi(m2);
            let ap = mf * r.powi(m2 - 1);
            let app = mf * (mf - 1.0) * r.powi(m2 - 2);
            (a * l, ap * l + a * lp, app * l + 2.0 * ap * lp + a * lpp)
        }
        RadialKernel::FsComposite {
            weight,
            fundamental,
            forcing,
        } => {
            let fk = match (forcing, source) {
                (Forcing::Constant(v), _) => *v,
                (Forcing::Field(f), Some(x)) => f(x),
                (Forcing::Field(_), None) => {
                    return Err(Error::Config(
                        "composite kernel with a forcing field needs the source point".into(),
                    ))
                }
            };
            let (h, h1, h2) = weight.eval3(r)?;
            match fundamental.eval3(r) {
                Ok((u, u1, u2)) => (
                    fk * h * u,
                    fk * (h1 * u + h * u1),
                    fk * (h2 * u + 2.0 * h1 * u1 + h * u2),
                ),
                // weight vanishing on a log-type singularity, as r^2 ln r at 0
                Err(_) if r == 0.0 && h == 0.0 => (0.0, 0.0, f64::NAN),
                Err(e) => return Err(e),
            }
        }
        RadialKernel::Wavelet {
            parent,
            dilate,
            shift,
        } => {
            let s = dilate * r + shift;
            let (v, d1, d2) = eval3(parent, s.abs(), source)?;
            let sign = if s < 0.0 { -1.0 } else { 1.0 };
            (v, dilate * sign * d1, dilate * dilate * d2)
        }
        RadialKernel::TimeSpace { base, .. } => eval3(base, r, source)?,
    })
}

/// Kernel value at radial distance r.
pub fn eval_kernel(k: &RadialKernel, r: f64) -> Result<f64> {
    Ok(eval3(k, r, None)?.0)
}

/// First radial derivative.
pub fn eval_kernel_d1(k: &RadialKernel, r: f64) -> Result<f64> {
    if r == 0.0 && has_cusp(k) {
        return Err(Error::Domain("kernel derivative is undefined at r = 0".into()));
    }
    Ok(eval3(k, r, None)?.1)
}

/// Second radial derivative.
pub fn eval_kernel_d2(k: &RadialKernel, r: f64) -> Result<f64> {
    let (_, _, d2) = eval3(k, r, None)?;
    if !d2.is_finite() {
        return Err(Error::Domain("second derivative is unbounded at r = 0".into()));
    }
    Ok(d2)
}

fn has_cusp(k: &RadialKernel) -> bool {
    match k {
        RadialKernel::Linear => true,
        RadialKernel::Wavelet { parent, .. } | RadialKernel::TimeSpace { base: parent, .. } => {
            has_cusp(parent)
        }
        _ => false,
    }
}

/// Kernel value between a response point x and a source point xk.
pub fn eval_pair(k: &RadialKernel, x: &[f64], xk: &[f64]) -> Result<f64> {
    if x.len() != xk.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: xk.len(),
        });
    }
    Ok(eval3(k, euclidean(x, xk), Some(xk))?.0)
}

/// Builds the composite kernel h(r) u*(r) f(x_k).
pub fn fs_rbf(weight: RadialFn, fundamental: RadialFn, forcing: Forcing) -> RadialKernel {
    RadialKernel::FsComposite {
        weight,
        fundamental,
        forcing,
    }
}

/// sqrt(|x1 - x2|^2 + c (t1 - t2)^2).
pub fn timespace_distance(x1: &[f64], t1: f64, x2: &[f64], t2: f64, c: f64) -> Result<f64> {
    if x1.len() != x2.len() {
        return Err(Error::DimensionMismatch {
            expected: x1.len(),
            found: x2.len(),
        });
    }
    if !(c >= 0.0) {
        return Err(Error::Config(format!("time weight must be >= 0, got {c}")));
    }
    let dt = t1 - t2;
    let s = euclidean(x1, x2);
    Ok((s * s + c * dt * dt).sqrt())
}

/// Evaluates a `TimeSpace` kernel between two space-time points.
pub fn eval_timespace(k: &RadialKernel, x1: &[f64], t1: f64, x2: &[f64], t2: f64) -> Result<f64> {
    match k {
        RadialKernel::TimeSpace { base, c } => {
            eval_kernel(base, timespace_distance(x1, t1, x2, t2, *c)?)
        }
        _ => Err(Error::Config("kernel is not a time-space kernel".into())),
    }
}

/// Transient diffusion kernel (t_j - t)^(-d/2) exp(-r^2 / (4 k (t_j - t))) for
/// t_j > t, zero otherwise.
pub fn diffusion_fundamental(r: f64, t: f64, tj: f64, dim: u32, k: f64) -> f64 {
    let s = tj - t;
    if s <= 0.0 {
        return 0.0;
    }
    s.powf(-(dim as f64) / 2.0) * (-r * r / (4.0 * k * s)).exp()
}

/// Fitted RBF interpolant.
#[derive(Debug, Clone)]
pub struct RbfInterpolant {
    centers: Vec<Vec<f64>>,
    kernel: RadialKernel,
    alpha: Vec<f64>,
    matrix: DenseMatrix,
    lu: Lu,
    condition: f64,
}

/// Builds the interpolation matrix A(j, k) = phi(x_j, x_k).
pub fn interpolation_matrix<P: AsRef<[f64]>>(centers: &[P], kernel: &RadialKernel) -> Result<DenseMatrix> {
    let n = centers.len();
    let mut a = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            a[(j, k)] = eval_pair(kernel, centers[j].as_ref(), centers[k].as_ref())?;
        }
    }
    Ok(a)
}

fn check_distinct<P: AsRef<[f64]>>(centers: &[P]) -> Result<()> {
    for i in 0..centers.len() {
        for j in 0..i {
            if euclidean(centers[i].as_ref(), centers[j].as_ref()) <= MIN_SEPARATION {
                return Err(Error::Config(format!("centres {j} and {i} coincide")));
            }
        }
    }
    Ok(())
}

/// Factors an interpolation matrix and rejects it when the condition
/// estimate exceeds [`MAX_CONDITION`].
pub(crate) fn factor_checked(a: &DenseMatrix) -> Result<(Lu, f64)> {
    let lu = Lu::factor(a).map_err(|e| match e {
        Error::Singular { .. } => Error::IllConditioned {
            estimate: f64::INFINITY,
        },
        other => other,
    })?;
    let condition = lu.condition_estimate()?;
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned {
            estimate: condition,
        });
    }
    Ok((lu, condition))
}

pub fn fit_interpolant<P: AsRef<[f64]>>(
    centers: &[P],
    values: &[f64],
    kernel: RadialKernel,
) -> Result<RbfInterpolant> {
    if centers.is_empty() {
        return Err(Error::Config("at least one centre is required".into()));
    }
    if centers.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            found: values.len(),
        });
    }
    check_same_dimension(centers)?;
    check_distinct(centers)?;
    let matrix = interpolation_matrix(centers, &kernel)?;
    let (lu, condition) = factor_checked(&matrix)?;
    let alpha = lu.solve(values)?;
    Ok(RbfInterpolant {
        centers: centers.iter().map(|c| c.as_ref().to_vec()).collect(),
        kernel,
        alpha,
        matrix,
        lu,
        condition,
    })
}

impl RbfInterpolant {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for (c, a) in self.centers.iter().zip(&self.alpha) {
            s += a * eval_pair(&self.kernel, x, c)?;
        }
        Ok(s)
    }

    /// Re-solves the retained system for new nodal values.
    pub fn solve(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.lu.solve(values)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.alpha
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn kernel(&self) -> &RadialKernel {
        &self.kernel
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn lu(&self) -> &Lu {
        &self.lu
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }
}
