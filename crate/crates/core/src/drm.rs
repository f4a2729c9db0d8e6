//! Particular solutions from radial basis functions.
//!
//! An [`Annihilator`] is a radial profile psi with L[psi] = phi for a chosen
//! radial operator L, so that u_p = sum_k alpha_k psi(|x - x_k|) satisfies
//! L[u_p] = sum_k alpha_k phi(|x - x_k|).

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{check_same_dimension, euclidean, Point2};
use crate::kernels::{bessel_j0, bessel_j1, bessel_y0, bessel_y1};
use crate::quad;
use crate::rbf::{self, eval_kernel, eval_kernel_d1, RadialKernel};
use crate::structmat::DenseMatrix;

/// Default number of grid samples for a tabulated profile.
pub const DEFAULT_SAMPLES: usize = 4096;

const QUAD_ABS_TOL: f64 = 1e-15;
const QUAD_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnnihilatorOperator {
    /// psi'' + psi'/r = phi.
    Laplace2D,
    /// psi'' + psi'/r + lambda^2 psi = phi.
    Helmholtz2D { lambda: f64 },
}

impl AnnihilatorOperator {
    fn lambda_sq(self) -> f64 {
        match self {
            AnnihilatorOperator::Laplace2D => 0.0,
            AnnihilatorOperator::Helmholtz2D { lambda } => lambda * lambda,
        }
    }
}

/// Which homogeneous term is added to the regular particular solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// psi(0) = psi'(0) = 0.
    #[default]
    ZeroAtOrigin,
    /// Adds phi(0)/lambda^2 J0(lambda r), so psi(0) = phi(0)/lambda^2 and a
    /// constant phi maps to a constant psi. Helmholtz only.
    FlatAtOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnihilatorOptions {
    pub normalization: Normalization,
    /// Grid samples on [0, r_max]; at least 2000.
    pub samples: usize,
}

impl Default for AnnihilatorOptions {
    fn default() -> Self {
        AnnihilatorOptions {
            normalization: Normalization::ZeroAtOrigin,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// Tabulated radial profile psi with L[psi] = phi.
#[derive(Debug, Clone)]
pub struct Annihilator {
    operator: AnnihilatorOperator,
    phi: RadialKernel,
    normalization: Normalization,
    r_max: f64,
    step: f64,
    psi: Vec<f64>,
    dpsi: Vec<f64>,
    /// Coefficient of the J0(lambda r) term added by the normalization.
    shift: f64,
}

/// Builds the profile with the default options (zero at the origin).
pub fn build_annihilator(
    operator: AnnihilatorOperator,
    phi: RadialKernel,
    r_max: f64,
) -> Result<Annihilator> {
    build_annihilator_with(operator, phi, r_max, AnnihilatorOptions::default())
}

pub fn build_annihilator_with(
    operator: AnnihilatorOperator,
    phi: RadialKernel,
    r_max: f64,
    options: AnnihilatorOptions,
) -> Result<Annihilator> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::Config(format!("r_max must be positive, got {r_max}")));
    }
    if options.samples < 2000 {
        return Err(Error::Config(format!(
            "at least 2000 samples are required, got {}",
            options.samples
        )));
    }
    if let AnnihilatorOperator::Helmholtz2D { lambda } = operator {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Config(format!("wavenumber must be positive, got {lambda}")));
        }
    }
    let phi0 = eval_kernel(&phi, 0.0)?;
    let shift = match (options.normalization, operator) {
        (Normalization::ZeroAtOrigin, _) => 0.0,
        (Normalization::FlatAtOrigin, AnnihilatorOperator::Helmholtz2D { lambda }) => {
            phi0 / (lambda * lambda)
        }
        (Normalization::FlatAtOrigin, AnnihilatorOperator::Laplace2D) => {
            return Err(Error::Config(
                "flat normalization needs a Helmholtz operator".into(),
            ))
        }
    };

    let n = options.samples;
    let step = r_max / (n - 1) as f64;
    let phi_at = |s: f64| eval_kernel(&phi, s).unwrap_or(f64::NAN);
    // Fundamental pair (y1 regular, y2 singular), derivatives, and the
    // constant C with C * r * W(y1, y2) = 1.
    let basis = |r: f64| -> (f64, f64, f64, f64) {
        match operator {
            AnnihilatorOperator::Laplace2D => (1.0, r.ln(), 0.0, 1.0 / r),
            AnnihilatorOperator::Helmholtz2D { lambda } => {
                let z = lambda * r;
                (
                    bessel_j0(z).unwrap_or(f64::NAN),
                    bessel_y0(z).unwrap_or(f64::NAN),
                    -lambda * bessel_j1(z).unwrap_or(f64::NAN),
                    -lambda * bessel_y1(z).unwrap_or(f64::NAN),
                )
            }
        }
    };
    let c = match operator {
        AnnihilatorOperator::Laplace2D => 1.0,
        AnnihilatorOperator::Helmholtz2D { .. } => FRAC_PI_2,
    };
    let f1 = |s: f64| s * basis(s).0 * phi_at(s);
    let f2 = |s: f64| s * basis(s).1 * phi_at(s);

    let mut psi = vec![0.0; n];
    let mut dpsi = vec![0.0; n];
    let (mut i1, mut i2) = (0.0, 0.0);
    for i in 1..n {
        let (a, b) = ((i - 1) as f64 * step, i as f64 * step);
        i1 += quad::integrate(&f1, a, b, QUAD_ABS_TOL, QUAD_REL_TOL)?;
        i2 += quad::integrate(&f2, a, b, QUAD_ABS_TOL, QUAD_REL_TOL)?;
        let (y1, y2, dy1, dy2) = basis(b);
        psi[i] = c * (y2 * i1 - y1 * i2);
        dpsi[i] = c * (dy2 * i1 - dy1 * i2);
        if !psi[i].is_finite() || !dpsi[i].is_finite() {
            return Err(Error::Quadrature {
                achieved: f64::INFINITY,
                requested: QUAD_REL_TOL,
            });
        }
    }
    Ok(Annihilator {
        operator,
        phi,
        normalization: options.normalization,
        r_max,
        step,
        psi,
        dpsi,
        shift,
    })
}

impl Annihilator {
    pub fn operator(&self) -> AnnihilatorOperator {
        self.operator
    }

    pub fn phi(&self) -> &RadialKernel {
        &self.phi
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn samples(&self) -> usize {
        self.psi.len()
    }

    fn locate(&self, r: f64) -> Result<(usize, f64)> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
        }
        if r > self.r_max * (1.0 + 1e-12) {
            return Err(Error::Extrapolation {
                r,
                r_max: self.r_max,
            });
        }
        let last = self.psi.len() - 2;
        let i = ((r / self.step) as usize).min(last);
        Ok((i, (r - i as f64 * self.step) / self.step))
    }

    /// Cubic Hermite value and derivative of the tabulated part.
    fn hermite(&self, r: f64) -> Result<(f64, f64)> {
        let (i, t) = self.locate(r)?;
        let h = self.step;
        let (p0, p1) = (self.psi[i], self.psi[i + 1]);
        let (m0, m1) = (self.dpsi[i] * h, self.dpsi[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * p0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * p1
            + (t3 - t2) * m1;
        let d = (6.0 * t2 - 6.0 * t) * p0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * p1
            + (3.0 * t2 - 2.0 * t) * m1;
        Ok((v, d / h))
    }

    fn shift_terms(&self, r: f64) -> Result<(f64, f64)> {
        match (self.shift, self.operator) {
            (s, AnnihilatorOperator::Helmholtz2D { lambda }) if s != 0.0 => Ok((
                s * bessel_j0(lambda * r)?,
                -s * lambda * bessel_j1(lambda * r)?,
            )),
            _ => Ok((0.0, 0.0)),
        }
    }

    pub fn psi(&self, r: f64) -> Result<f64> {
        let (v, _) = self.hermite(r)?;
        Ok(v + self.shift_terms(r)?.0)
    }

    pub fn dpsi(&self, r: f64) -> Result<f64> {
        let (_, d) = self.hermite(r)?;
        Ok(d + self.shift_terms(r)?.1)
    }

    /// Second derivative from the governing equation.
    pub fn d2psi(&self, r: f64) -> Result<f64> {
        let phi = eval_kernel(&self.phi, r)?;
        let l2 = self.operator.lambda_sq();
        let psi = self.psi(r)?;
        if r < 1e-8 {
            // psi'/r -> psi''(0) at the origin.
            return Ok((phi - l2 * psi) / 2.0);
        }
        Ok(phi - self.dpsi(r)? / r - l2 * psi)
    }

    /// Operator residual at r from finite differences of the interpolated
    /// profile: (value, term scale).
    pub fn ode_residual(&self, r: f64, h: f64) -> Result<(f64, f64)> {
        let p = |s: f64| self.psi(s);
        let (pm2, pm1, p0, pp1, pp2) = (p(r - 2.0 * h)?, p(r - h)?, p(r)?, p(r + h)?, p(r + 2.0 * h)?);
        let d2 = (-pp2 + 16.0 * pp1 - 30.0 * p0 + 16.0 * pm1 - pm2) / (12.0 * h * h);
        let d1 = (-pp2 + 8.0 * pp1 - 8.0 * pm1 + pm2) / (12.0 * h);
        let l2 = self.operator.lambda_sq();
        let phi = eval_kernel(&self.phi, r)?;
        let lhs = d2 + d1 / r + l2 * p0;
        Ok((lhs - phi, d2.abs() + (d1 / r).abs() + (l2 * p0).abs() + phi.abs()))
    }
}

/// 1.25 times the largest pairwise distance.
pub fn default_r_max<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..points.len() {
        for j in 0..i {
            d = d.max(euclidean(points[i].as_ref(), points[j].as_ref()));
        }
    }
    1.25 * d
}

/// u_p(x) = sum_k alpha_k psi(|x - x_k|) with its gradient.
#[derive(Debug, Clone)]
pub struct ParticularField<'a> {
    centers: Vec<Point2>,
    alpha: Vec<f64>,
    ann: &'a Annihilator,
}

pub fn particular_field<'a>(
    centers: &[Point2],
    alpha: &[f64],
    ann: &'a Annihilator,
) -> Result<ParticularField<'a>> {
    if centers.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            found: alpha.len(),
        });
    }
    Ok(ParticularField {
        centers: centers.to_vec(),
        alpha: alpha.to_vec(),
        ann,
    })
}

impl ParticularField<'_> {
    pub fn value(&self, x: Point2) -> Result<f64> {
        let mut s = 0.0;
        for (c, a) in self.centers.iter().zip(&self.alpha) {
            s += a * self.ann.psi(euclidean(&x, c))?;
        }
        Ok(s)
    }

    pub fn gradient(&self, x: Point2) -> Result<Point2> {
        let mut g = [0.0, 0.0];
        for (c, a) in self.centers.iter().zip(&self.alpha) {
            let d = [x[0] - c[0], x[1] - c[1]];
            let r = d[0].hypot(d[1]);
            if r == 0.0 {
                continue;
            }
            let w = a * self.ann.dpsi(r)? / r;
            g[0] += w * d[0];
            g[1] += w * d[1];
        }
        Ok(g)
    }

    pub fn normal_derivative(&self, x: Point2, n: Point2) -> Result<f64> {
        let g = self.gradient(x)?;
        Ok(g[0] * n[0] + g[1] * n[1])
    }
}

/// Differentiation matrices D_x = Phi_x A^{-1}, D_y = Phi_y A^{-1} with
/// Phi_x(i, j) the x-derivative of phi(|x - x_j|) at x_i.
pub fn diff_matrices(centers: &[Point2], kernel: &RadialKernel) -> Result<(DenseMatrix, DenseMatrix)> {
    check_same_dimension(centers)?;
    let a = rbf::interpolation_matrix(centers, kernel)?;
    let (lu, _) = rbf::factor_checked(&a)?;
    let n = centers.len();
    let mut px = DenseMatrix::zeros(n, n);
    let mut py = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = [centers[i][0] - centers[j][0], centers[i][1] - centers[j][1]];
            let r = d[0].hypot(d[1]);
            if r == 0.0 {
                continue;
            }
            let g = eval_kernel_d1(kernel, r)? / r;
            px[(i, j)] = g * d[0];
            py[(i, j)] = g * d[1];
        }
    }
    Ok((lu.right_divide(&px)?, lu.right_divide(&py)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbf::{fs_rbf, Forcing, RadialFn};

    fn one() -> RadialKernel {
        fs_rbf(RadialFn::Constant(1.0), RadialFn::Constant(1.0), Forcing::Constant(1.0))
    }

    #[test]
    fn laplace_constant_phi() {
        let a = build_annihilator(AnnihilatorOperator::Laplace2D, one(), 3.0).unwrap();
        for &r in &[0.0, 0.01, 0.5, 1.7, 3.0] {
            assert!((a.psi(r).unwrap() - r * r / 4.0).abs() < 1e-8, "r={r}");
            assert!((a.dpsi(r).unwrap() - r / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn laplace_linear_phi() {
        let a = build_annihilator(AnnihilatorOperator::Laplace2D, RadialKernel::Linear, 3.0).unwrap();
        for &r in &[0.0, 0.3, 1.0, 2.2, 3.0] {
            assert!((a.psi(r).unwrap() - r.powi(3) / 9.0).abs() < 1e-8, "r={r}");
        }
    }

    #[test]
    fn helmholtz_constant_phi() {
        let op = AnnihilatorOperator::Helmholtz2D { lambda: 1.0 };
        let a = build_annihilator(op, one(), 6.0).unwrap();
        for &r in &[0.0, 0.2, 1.0, 3.3, 6.0] {
            let want = 1.0 - bessel_j0(r).unwrap();
            assert!((a.psi(r).unwrap() - want).abs() < 1e-8, "r={r}");
        }
        let flat = build_annihilator_with(
            op,
            one(),
            6.0,
            AnnihilatorOptions {
                normalization: Normalization::FlatAtOrigin,
                ..Default::default()
            },
        )
        .unwrap();
        for &r in &[0.0, 1.0, 4.0] {
            assert!((flat.psi(r).unwrap() - 1.0).abs() < 1e-8);
            assert!(flat.dpsi(r).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn flat_normalization_rejected_for_laplace() {
        let r = build_annihilator_with(
            AnnihilatorOperator::Laplace2D,
            one(),
            1.0,
            AnnihilatorOptions {
                normalization: Normalization::FlatAtOrigin,
                ..Default::default()
            },
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn regular_at_origin() {
        let a = build_annihilator(
            AnnihilatorOperator::Helmholtz2D { lambda: 1.0 },
            RadialKernel::mq(3.0),
            5.0,
        )
        .unwrap();
        assert_eq!(a.psi(0.0).unwrap(), 0.0);
        assert_eq!(a.dpsi(0.0).unwrap(), 0.0);
        // psi''(0) = phi(0) / 2
        assert!((a.d2psi(0.0).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn extrapolation_rejected() {
        let a = build_annihilator(AnnihilatorOperator::Laplace2D, one(), 2.0).unwrap();
        assert!(matches!(a.psi(2.5), Err(Error::Extrapolation { .. })));
        assert!(a.psi(2.0).is_ok());
    }

    #[test]
    fn small_grid_rejected() {
        let r = build_annihilator_with(
            AnnihilatorOperator::Laplace2D,
            one(),
            1.0,
            AnnihilatorOptions {
                samples: 100,
                ..Default::default()
            },
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn ode_residual_small() {
        for op in [
            AnnihilatorOperator::Laplace2D,
            AnnihilatorOperator::Helmholtz2D { lambda: 1.0 },
        ] {
            for phi in [RadialKernel::mq(1.0), RadialKernel::mq(25.0), RadialKernel::ThinPlate { m: 1 }] {
                let a = build_annihilator(op, phi.clone(), 5.0).unwrap();
                let mut worst = 0.0f64;
                let mut scale = 0.0f64;
                for i in 0..60 {
                    let r = 0.05 + i as f64 * (4.9 - 0.05) / 59.0;
                    let (res, s) = a.ode_residual(r, 0.02).unwrap();
                    worst = worst.max(res.abs());
                    scale = scale.max(s);
                }
                assert!(worst / scale <= 1e-6, "{op:?} {phi:?}: {:e}", worst / scale);
            }
        }
    }

    #[test]
    fn interpolation_converges_at_fourth_order() {
        let op = AnnihilatorOperator::Helmholtz2D { lambda: 1.0 };
        let phi = RadialKernel::ThinPlate { m: 1 };
        let fine = build_annihilator_with(op, phi.clone(), 4.0, AnnihilatorOptions { samples: 16001, ..Default::default() }).unwrap();
        let err = |samples: usize| {
            let a = build_annihilator_with(op, phi.clone(), 4.0, AnnihilatorOptions { samples, ..Default::default() }).unwrap();
            (0..200)
                .map(|i| {
                    let r = 0.1 + 3.8 * (i as f64 + 0.37) / 200.0;
                    (a.psi(r).unwrap() - fine.psi(r).unwrap()).abs()
                })
                .fold(0.0f64, f64::max)
        };
        let e1 = err(2001);
        let e2 = err(4001);
        assert!(e1 / e2 >= 8.0, "{e1:e} {e2:e}");
    }

    #[test]
    fn particular_field_examples() {
        let a = build_annihilator(AnnihilatorOperator::Laplace2D, one(), 4.0).unwrap();
        let f = particular_field(&[[0.0, 0.0]], &[1.0], &a).unwrap();
        assert!((f.value([2.0, 0.0]).unwrap() - 1.0).abs() < 1e-10);
        let zero = particular_field(&[[0.0, 0.0], [1.0, 1.0]], &[0.0, 0.0], &a).unwrap();
        assert_eq!(zero.value([0.3, 0.4]).unwrap(), 0.0);
        assert_eq!(zero.gradient([0.3, 0.4]).unwrap(), [0.0, 0.0]);
        let pair = particular_field(&[[-1.0, 0.0], [1.0, 0.0]], &[0.7, 0.7], &a).unwrap();
        let g = pair.gradient([0.0, 0.0]).unwrap();
        assert!(g[0].abs() < 1e-14 && g[1].abs() < 1e-14);
        assert!(matches!(
            particular_field(&[[0.0, 0.0]], &[1.0, 2.0], &a),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn drm_reconstructs_expansion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let centres: Vec<Point2> = (0..9)
            .map(|i| {
                let t = i as f64 * 0.7;
                [1.5 * t.cos(), 0.8 * t.sin()]
            })
            .collect();
        let phi = RadialKernel::mq(1.5);
        let values: Vec<f64> = centres.iter().map(|p| (p[0] + 0.5 * p[1]).sin()).collect();
        let it = rbf::fit_interpolant(&centres, &values, phi.clone()).unwrap();
        for op in [
            AnnihilatorOperator::Laplace2D,
            AnnihilatorOperator::Helmholtz2D { lambda: 1.0 },
        ] {
            let ann = build_annihilator(op, phi.clone(), 6.0).unwrap();
            let up = particular_field(&centres, it.coefficients(), &ann).unwrap();
            let h = 1e-3;
            let l2 = op.lambda_sq();
            for _ in 0..50 {
                let p = [rng.gen_range(-1.2..1.2), rng.gen_range(-0.6..0.6)];
                let u = |x: f64, y: f64| up.value([x, y]).unwrap();
                let mut lap = 0.0;
                for (dx, dy) in [(h, 0.0), (0.0, h)] {
                    lap += (-u(p[0] + 2.0 * dx, p[1] + 2.0 * dy) + 16.0 * u(p[0] + dx, p[1] + dy)
                        - 30.0 * u(p[0], p[1])
                        + 16.0 * u(p[0] - dx, p[1] - dy)
                        - u(p[0] - 2.0 * dx, p[1] - 2.0 * dy))
                        / (12.0 * h * h);
                }
                let lhs = lap + l2 * u(p[0], p[1]);
                let rhs = it.eval(&p).unwrap();
                assert!((lhs - rhs).abs() <= 1e-4 * rhs.abs().max(1.0), "{op:?} {p:?}");
            }
        }
    }

    fn halton(mut i: usize, base: usize) -> f64 {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    }

    #[test]
    fn diff_matrix_examples() {
        let pts: Vec<Point2> = (1..=20)
            .map(|i| [2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0])
            .collect();
        let kernel = RadialKernel::mq(2.0);
        let (dx, dy) = diff_matrices(&pts, &kernel).unwrap();

        // Independent oracle: explicit inverse from nalgebra.
        let a = nalgebra::DMatrix::from_fn(20, 20, |i, j| {
            (euclidean(&pts[i], &pts[j]).powi(2) + 4.0).sqrt()
        });
        let ainv = a.try_inverse().unwrap();
        let px = nalgebra::DMatrix::from_fn(20, 20, |i, j| {
            (pts[i][0] - pts[j][0]) / (euclidean(&pts[i], &pts[j]).powi(2) + 4.0).sqrt()
        });
        let want = px * ainv;
        for i in 0..20 {
            for j in 0..20 {
                assert!((dx[(i, j)] - want[(i, j)]).abs() <= 1e-8 * want.amax());
            }
        }

        // Frozen numpy values at the three nodes with |x|, |y| < 0.5. Without
        // polynomial augmentation MQ reproduces x and constants only to ~1e-3.
        let interior = [0, 9, 12];
        let x: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let dxx = dx.matvec(&x).unwrap();
        let frozen = [0.9987373461044606, 1.000945366162262, 1.0016968452256974];
        for (&i, w) in interior.iter().zip(&frozen) {
            assert!((dxx[i] - w).abs() < 1e-9);
            assert!((dxx[i] - 1.0).abs() < 2e-3);
        }
        let s: Vec<f64> = pts.iter().map(|p| p[0] + p[1]).collect();
        let sx = dx.matvec(&s).unwrap();
        let sy = dy.matvec(&s).unwrap();
        let frozen = [1.996575917851141, 2.001653482233461, 2.0060682549269293];
        for (&i, w) in interior.iter().zip(&frozen) {
            assert!((sx[i] + sy[i] - w).abs() < 1e-9);
        }
        let c = dx.matvec(&[1.0; 20]).unwrap();
        let cmax = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((cmax - 0.0017732667583021389).abs() < 1e-9);
    }

    #[test]
    fn odd_derivative_matrix_skew_centrosymmetric() {
        use crate::structmat::{classify_structure, Structure};
        let pts: Vec<Point2> = (0..6).map(|i| [i as f64 * 0.4 - 1.0, 0.0]).collect();
        let (dx, _) = diff_matrices(&pts, &RadialKernel::mq(1.0)).unwrap();
        assert_eq!(classify_structure(&dx), Structure::SkewCentrosymmetric);
    }

    #[test]
    fn default_r_max_scales_diameter() {
        assert_eq!(default_r_max(&[[0.0, 0.0], [3.0, 4.0]]), 6.25);
    }
}
