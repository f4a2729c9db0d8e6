//! Boundary knot method: assembly, solution, and evaluation.
//!
//! The solution is split as u = v + u_p. The homogeneous part
//! v(x) = sum_k beta_k G(|x - x_k|) uses a nonsingular general solution G
//! centred on the boundary knots; the particular part u_p comes from an RBF
//! expansion of the right-hand side (see [`crate::drm`]).

use std::fmt;
use std::sync::Arc;

use crate::drm::{
    self, build_annihilator_with, Annihilator, AnnihilatorOperator, AnnihilatorOptions,
    Normalization,
};
use crate::error::{Error, Result};
use crate::geometry::{euclidean, BcKind, KnotSet, Point2};
use crate::kernels::{
    bessel_i0, eval_general_solution, eval_gradient_2d, Aux, Family, GeneralSolution,
    KernelVariant,
};
use crate::rbf::{self, RadialKernel, MAX_CONDITION};
use crate::structmat::{DenseMatrix, Lu};

/// A scalar field over the plane.
pub type Field = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;

pub fn field(f: impl Fn(Point2) -> f64 + Send + Sync + 'static) -> Field {
    Arc::new(f)
}

/// Coefficient of one term of a solution-dependent right-hand side.
#[derive(Clone)]
pub enum Coefficient {
    Const(f64),
    Field(Field),
}

impl Coefficient {
    fn at(&self, p: Point2) -> f64 {
        match self {
            Coefficient::Const(c) => *c,
            Coefficient::Field(f) => f(p),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Const(c) if *c == 0.0)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Const(c) => write!(f, "Const({c})"),
            Coefficient::Field(_) => write!(f, "Field"),
        }
    }
}

/// Right-hand side of L[u] = rhs, where L is the split operator.
#[derive(Clone)]
pub enum Rhs {
    /// A known source term f(x).
    Explicit(Field),
    /// u_coef * u + ux_coef * du/dx + uy_coef * du/dy.
    SolutionDependent {
        u: Coefficient,
        ux: Coefficient,
        uy: Coefficient,
    },
    /// No right-hand side; used by the frozen-coefficient schemes.
    None,
}

impl fmt::Debug for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Explicit(_) => write!(f, "Explicit"),
            Rhs::SolutionDependent { u, ux, uy } => f
                .debug_struct("SolutionDependent")
                .field("u", u)
                .field("ux", ux)
                .field("uy", uy)
                .finish(),
            Rhs::None => write!(f, "None"),
        }
    }
}

/// Settings for the particular-solution expansion.
#[derive(Debug, Clone)]
pub struct DrmConfig {
    pub kernel: RadialKernel,
    pub normalization: Normalization,
    pub samples: usize,
    /// Profile range; defaults to 1.25 times the knot-set diameter.
    pub r_max: Option<f64>,
    /// Prebuilt profile, reused instead of tabulating a new one.
    pub annihilator: Option<Arc<Annihilator>>,
}

impl DrmConfig {
    pub fn mq(c: f64) -> Self {
        DrmConfig {
            kernel: RadialKernel::mq(c),
            normalization: Normalization::FlatAtOrigin,
            samples: drm::DEFAULT_SAMPLES,
            r_max: None,
            annihilator: None,
        }
    }
}

#[derive(Clone)]
pub struct ProblemSpec {
    /// General solution used as the homogeneous kernel.
    pub split: GeneralSolution,
    pub rhs: Rhs,
    pub knots: KnotSet,
    pub dirichlet: Option<Field>,
    /// Normal-derivative data at Neumann knots.
    pub neumann: Option<Field>,
    pub exact: Option<Field>,
    /// Varying coefficient a(x) for the frozen varying-Helmholtz scheme.
    pub coefficient: Option<Field>,
    pub drm: DrmConfig,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("split", &self.split)
            .field("rhs", &self.rhs)
            .field("knots", &self.knots)
            .field("dirichlet", &self.dirichlet.is_some())
            .field("neumann", &self.neumann.is_some())
            .field("exact", &self.exact.is_some())
            .field("coefficient", &self.coefficient.is_some())
            .field("drm", &self.drm)
            .finish()
    }
}

impl ProblemSpec {
    /// A Dirichlet problem with no right-hand side.
    pub fn new(split: GeneralSolution, knots: KnotSet, dirichlet: Field) -> Self {
        ProblemSpec {
            split,
            rhs: Rhs::None,
            knots,
            dirichlet: Some(dirichlet),
            neumann: None,
            exact: None,
            coefficient: None,
            drm: DrmConfig::mq(1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        let k = &self.knots;
        if k.n_boundary() < 3 {
            return Err(Error::Config(format!(
                "at least 3 boundary knots are required, got {}",
                k.n_boundary()
            )));
        }
        if k.bc_tags.len() != k.n_boundary() || k.normals.len() != k.n_boundary() {
            return Err(Error::Config(
                "every boundary knot needs one normal and one BC tag".into(),
            ));
        }
        for (i, tag) in k.bc_tags.iter().enumerate() {
            let ok = match tag {
                BcKind::Dirichlet => self.dirichlet.is_some(),
                BcKind::Neumann => self.neumann.is_some(),
            };
            if !ok {
                return Err(Error::Config(format!("knot {i} is tagged {tag:?} but has no data")));
            }
        }
        if let Rhs::SolutionDependent { u, ux, uy } = &self.rhs {
            for p in k.all_points() {
                if ![u.at(p), ux.at(p), uy.at(p)].iter().all(|v| v.is_finite()) {
                    return Err(Error::Domain(format!(
                        "right-hand-side coefficient is not finite at {p:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn helmholtz_lambda(&self) -> Result<f64> {
        match self.split.family {
            Family::Helmholtz2D => Ok(self.split.lambda),
            other => Err(Error::Unsupported(format!(
                "particular solutions need a Helmholtz2D split, got {other:?}"
            ))),
        }
    }

    fn annihilator(&self, lambda: f64) -> Result<Arc<Annihilator>> {
        if let Some(a) = &self.drm.annihilator {
            return Ok(a.clone());
        }
        let r_max = self
            .drm
            .r_max
            .unwrap_or_else(|| drm::default_r_max(&self.knots.all_points()));
        Ok(Arc::new(build_annihilator_with(
            AnnihilatorOperator::Helmholtz2D { lambda },
            self.drm.kernel.clone(),
            r_max,
            AnnihilatorOptions {
                normalization: self.drm.normalization,
                samples: self.drm.samples,
            },
        )?))
    }
}

/// How a solution-dependent right-hand side is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoupledStrategy {
    /// Direct assembly when nodal values are known, else block elimination.
    #[default]
    Auto,
    /// One square system in (beta, nodal values).
    BlockElimination,
    /// Relaxed fixed-point iteration on the nodal values.
    Picard,
}

pub const PICARD_RELAXATION: f64 = 0.5;
pub const PICARD_TOLERANCE: f64 = 1e-10;
pub const PICARD_MAX_ITERATIONS: usize = 200;

/// Closest a knot or evaluation point may sit to x = 0 in the varying scheme.
pub const VARYING_GUARD: f64 = 0.1;

/// Largest |u| the nonlinear root search will reach.
pub const ROOT_SEARCH_LIMIT: f64 = 1e3;
/// Steps along the path from the nearest boundary knot.
pub const CONTINUATION_STEPS: usize = 32;
/// Required |F(u)| at an accepted interior root.
pub const ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Clone)]
enum Scheme {
    Standard(GeneralSolution),
    Varying(Field),
    Burger(KernelVariant),
}

#[derive(Debug, Clone)]
struct Particular {
    centers: Vec<Point2>,
    alpha: Vec<f64>,
    ann: Arc<Annihilator>,
}

/// Fitted expansion with point evaluators.
#[derive(Clone)]
pub struct BkmSolution {
    scheme: Scheme,
    sources: Vec<Point2>,
    beta: Vec<f64>,
    particular: Option<Particular>,
    nodal: Option<Vec<f64>>,
    knots: KnotSet,
    condition: f64,
    collocation_residual: f64,
    iterations: usize,
}

impl fmt::Debug for BkmSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BkmSolution")
            .field("beta", &self.beta)
            .field("nodal", &self.nodal)
            .field("condition", &self.condition)
            .field("collocation_residual", &self.collocation_residual)
            .finish()
    }
}

/// Interior value of the nonlinear scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearRoot {
    pub value: f64,
    /// |F(value)|.
    pub residual: f64,
    /// More than one sign change was seen in the final bracket scan.
    pub ambiguous: bool,
}

impl BkmSolution {
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// DRM coefficients, when the scheme has a particular part.
    pub fn alpha(&self) -> Option<&[f64]> {
        self.particular.as_ref().map(|p| p.alpha.as_slice())
    }

    /// Nodal values at all knots (coupled schemes only).
    pub fn nodal_values(&self) -> Option<&[f64]> {
        self.nodal.as_deref()
    }

    pub fn knots(&self) -> &KnotSet {
        &self.knots
    }

    /// 1-norm condition estimate of the final linear system.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Relative residual of the collocation system after the solve.
    pub fn collocation_residual(&self) -> f64 {
        self.collocation_residual
    }

    /// Picard iterations used (0 for direct solves).
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn value(&self, p: Point2) -> Result<f64> {
        match &self.scheme {
            Scheme::Standard(gs) => {
                let mut v = 0.0;
                for (s, b) in self.sources.iter().zip(&self.beta) {
                    v += b * eval_general_solution(gs, euclidean(&p, s), Aux::None)?;
                }
                Ok(v + self.particular_value(p)?)
            }
            Scheme::Varying(a) => {
                guard_varying(p)?;
                let k = frozen_root(a(p), p)?;
                let mut v = 0.0;
                for (s, b) in self.sources.iter().zip(&self.beta) {
                    v += b * bessel_i0(k * euclidean(&p, s))?;
                }
                Ok(v)
            }
            Scheme::Burger(_) => Ok(eval_nonlinear_point(self, p)?.value),
        }
    }

    pub fn gradient(&self, p: Point2) -> Result<Point2> {
        let Scheme::Standard(gs) = &self.scheme else {
            return Err(Error::Unsupported(
                "gradients are available for the standard scheme only".into(),
            ));
        };
        let mut g = [0.0, 0.0];
        for (s, b) in self.sources.iter().zip(&self.beta) {
            let d = eval_gradient_2d(gs, [p[0] - s[0], p[1] - s[1]], Aux::None)?;
            g[0] += b * d[0];
            g[1] += b * d[1];
        }
        if let Some(part) = &self.particular {
            let f = drm::particular_field(&part.centers, &part.alpha, &part.ann)?;
            let d = f.gradient(p)?;
            g[0] += d[0];
            g[1] += d[1];
        }
        Ok(g)
    }

    pub fn normal_derivative(&self, p: Point2, n: Point2) -> Result<f64> {
        let g = self.gradient(p)?;
        Ok(g[0] * n[0] + g[1] * n[1])
    }

    fn particular_value(&self, p: Point2) -> Result<f64> {
        match &self.particular {
            Some(part) => drm::particular_field(&part.centers, &part.alpha, &part.ann)?.value(p),
            None => Ok(0.0),
        }
    }
}

/// Dirichlet collocation matrix of the scheme: kernel values between every
/// pair of boundary knots, with row i frozen at knot i where applicable.
pub fn collocation_matrix(spec: &ProblemSpec) -> Result<DenseMatrix> {
    let b = &spec.knots.boundary;
    let n = b.len();
    match spec.split.family {
        Family::FrozenVaryingHelmholtz2D => {
            let a = spec
                .coefficient
                .as_ref()
                .ok_or_else(|| Error::Config("varying scheme needs a coefficient field".into()))?;
            let mut m = DenseMatrix::zeros(n, n);
            for i in 0..n {
                guard_varying(b[i])?;
                let k = frozen_root(a(b[i]), b[i])?;
                for j in 0..n {
                    m[(i, j)] = bessel_i0(k * euclidean(&b[i], &b[j]))?;
                }
            }
            Ok(m)
        }
        Family::FrozenConvectionDiffusion2D => {
            let d = spec
                .dirichlet
                .as_ref()
                .ok_or_else(|| Error::Config("nonlinear scheme needs Dirichlet data".into()))?;
            let mut m = DenseMatrix::zeros(n, n);
            for i in 0..n {
                let u = d(b[i]);
                for k in 0..n {
                    m[(i, k)] = burger_kernel(spec.split.variant, u, b[i], b[k])?;
                }
            }
            Ok(m)
        }
        _ => kernel_matrix(&spec.split, b, b),
    }
}

/// Solves any supported problem, dispatching on the split family and rhs.
pub fn solve(spec: &ProblemSpec) -> Result<BkmSolution> {
    match (spec.split.family, &spec.rhs) {
        (Family::FrozenVaryingHelmholtz2D, _) => solve_varying_helmholtz(spec),
        (Family::FrozenConvectionDiffusion2D, _) => solve_burger_like(spec),
        (_, Rhs::SolutionDependent { .. }) => solve_coupled(spec),
        _ => assemble_and_solve(spec),
    }
}

fn kernel_matrix(gs: &GeneralSolution, rows: &[Point2], sources: &[Point2]) -> Result<DenseMatrix> {
    let mut m = DenseMatrix::zeros(rows.len(), sources.len());
    for (i, p) in rows.iter().enumerate() {
        for (k, s) in sources.iter().enumerate() {
            m[(i, k)] = eval_general_solution(gs, euclidean(p, s), Aux::None)?;
        }
    }
    Ok(m)
}

fn kernel_normal_row(gs: &GeneralSolution, p: Point2, n: Point2, sources: &[Point2]) -> Result<Vec<f64>> {
    sources
        .iter()
        .map(|s| {
            let g = eval_gradient_2d(gs, [p[0] - s[0], p[1] - s[1]], Aux::None)?;
            Ok(g[0] * n[0] + g[1] * n[1])
        })
        .collect()
}

/// Psi(i, k) = psi(|x_i - c_k|) and the normal-derivative version.
fn psi_matrix(ann: &Annihilator, rows: &[Point2], centers: &[Point2]) -> Result<DenseMatrix> {
    let mut m = DenseMatrix::zeros(rows.len(), centers.len());
    for (i, p) in rows.iter().enumerate() {
        for (k, c) in centers.iter().enumerate() {
            m[(i, k)] = ann.psi(euclidean(p, c))?;
        }
    }
    Ok(m)
}

fn psi_normal_row(ann: &Annihilator, p: Point2, n: Point2, centers: &[Point2]) -> Result<Vec<f64>> {
    centers
        .iter()
        .map(|c| {
            let d = [p[0] - c[0], p[1] - c[1]];
            let r = d[0].hypot(d[1]);
            if r == 0.0 {
                return Ok(0.0);
            }
            Ok(ann.dpsi(r)? / r * (d[0] * n[0] + d[1] * n[1]))
        })
        .collect()
}

/// Factors a collocation system; singular or badly conditioned systems are
/// reported with their condition estimate.
fn factor_system(m: &DenseMatrix) -> Result<(Lu, f64)> {
    let lu = Lu::factor(m).map_err(|e| match e {
        Error::Singular { .. } => Error::IllConditioned {
            estimate: f64::INFINITY,
        },
        other => other,
    })?;
    let cond = lu.condition_estimate()?;
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned { estimate: cond });
    }
    Ok((lu, cond))
}

fn relative_residual(m: &DenseMatrix, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = m.matvec(x)?;
    let res = ax.iter().zip(b).fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()));
    let xn = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let bn = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let scale = m.norm_inf() * xn + bn;
    Ok(if scale == 0.0 { res } else { res / scale })
}

fn boundary_data(spec: &ProblemSpec, i: usize) -> f64 {
    let p = spec.knots.boundary[i];
    match spec.knots.bc_tags[i] {
        BcKind::Dirichlet => spec.dirichlet.as_ref().map_or(f64::NAN, |f| f(p)),
        BcKind::Neumann => spec.neumann.as_ref().map_or(f64::NAN, |f| f(p)),
    }
}

/// Solves with a known source term: beta from the boundary rows after the
/// particular field is subtracted from the data.
pub fn assemble_and_solve(spec: &ProblemSpec) -> Result<BkmSolution> {
    spec.validate()?;
    let source = match &spec.rhs {
        Rhs::Explicit(f) => Some(f.clone()),
        Rhs::None => None,
        Rhs::SolutionDependent { .. } => {
            return Err(Error::Config(
                "solution-dependent right-hand side; use solve_coupled".into(),
            ))
        }
    };
    let gs = spec.split;
    let knots = &spec.knots;
    let sources = knots.boundary.clone();

    let particular = match source {
        Some(f) => {
            let lambda = spec.helmholtz_lambda()?;
            let centers = knots.all_points();
            let values: Vec<f64> = centers.iter().map(|&p| f(p)).collect();
            let interp = rbf::fit_interpolant(&centers, &values, spec.drm.kernel.clone())?;
            Some(Particular {
                alpha: interp.coefficients().to_vec(),
                centers,
                ann: spec.annihilator(lambda)?,
            })
        }
        None => None,
    };

    let n = sources.len();
    let mut m = DenseMatrix::zeros(n, n);
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let p = knots.boundary[i];
        let (row, up) = match knots.bc_tags[i] {
            BcKind::Dirichlet => {
                let row = kernel_matrix(&gs, &[p], &sources)?.row(0).to_vec();
                let up = match &particular {
                    Some(part) => drm::particular_field(&part.centers, &part.alpha, &part.ann)?.value(p)?,
                    None => 0.0,
                };
                (row, up)
            }
            BcKind::Neumann => {
                let nrm = knots.normals[i];
                let row = kernel_normal_row(&gs, p, nrm, &sources)?;
                let up = match &particular {
                    Some(part) => drm::particular_field(&part.centers, &part.alpha, &part.ann)?
                        .normal_derivative(p, nrm)?,
                    None => 0.0,
                };
                (row, up)
            }
        };
        for (k, v) in row.into_iter().enumerate() {
            m[(i, k)] = v;
        }
        rhs[i] = boundary_data(spec, i) - up;
    }
    let (lu, condition) = factor_system(&m)?;
    let beta = lu.solve(&rhs)?;
    let collocation_residual = relative_residual(&m, &beta, &rhs)?;
    Ok(BkmSolution {
        scheme: Scheme::Standard(gs),
        sources,
        beta,
        particular,
        nodal: None,
        knots: knots.clone(),
        condition,
        collocation_residual,
        iterations: 0,
    })
}

/// Solves with a right-hand side linear in u, du/dx, du/dy.
pub fn solve_coupled(spec: &ProblemSpec) -> Result<BkmSolution> {
    solve_coupled_with(spec, CoupledStrategy::Auto)
}

struct CoupledParts {
    gs: GeneralSolution,
    all: Vec<Point2>,
    sources: Vec<Point2>,
    ann: Arc<Annihilator>,
    a_lu: Lu,
    /// R maps nodal values to right-hand-side values at the knots.
    r: DenseMatrix,
    u_only: bool,
}

fn coupled_parts(spec: &ProblemSpec) -> Result<CoupledParts> {
    let Rhs::SolutionDependent { u, ux, uy } = &spec.rhs else {
        return Err(Error::Config("solve_coupled needs a solution-dependent rhs".into()));
    };
    let lambda = spec.helmholtz_lambda()?;
    let all = spec.knots.all_points();
    let m = all.len();
    let a = rbf::interpolation_matrix(&all, &spec.drm.kernel)?;
    let (a_lu, _) = rbf::factor_checked(&a)?;
    let u_only = ux.is_zero() && uy.is_zero();
    let mut r = DenseMatrix::from_fn(m, m, |i, j| if i == j { u.at(all[i]) } else { 0.0 });
    if !u_only {
        let (dx, dy) = drm::diff_matrices(&all, &spec.drm.kernel)?;
        for i in 0..m {
            let (b, c) = (ux.at(all[i]), uy.at(all[i]));
            for j in 0..m {
                r[(i, j)] += b * dx[(i, j)] + c * dy[(i, j)];
            }
        }
    }
    Ok(CoupledParts {
        gs: spec.split,
        sources: spec.knots.boundary.clone(),
        ann: spec.annihilator(lambda)?,
        all,
        a_lu,
        r,
        u_only,
    })
}

pub fn solve_coupled_with(spec: &ProblemSpec, strategy: CoupledStrategy) -> Result<BkmSolution> {
    spec.validate()?;
    let parts = coupled_parts(spec)?;
    let knots = &spec.knots;
    let all_dirichlet = knots.bc_tags.iter().all(|t| *t == BcKind::Dirichlet);
    match strategy {
        CoupledStrategy::Auto if knots.n_interior() == 0 && all_dirichlet && parts.u_only => {
            solve_known_nodal(spec, &parts)
        }
        CoupledStrategy::Auto | CoupledStrategy::BlockElimination => solve_block(spec, &parts),
        CoupledStrategy::Picard => solve_picard(spec, &parts),
    }
}

fn finish_particular(parts: &CoupledParts, nodal: &[f64]) -> Result<Particular> {
    let f = parts.r.matvec(nodal)?;
    Ok(Particular {
        centers: parts.all.clone(),
        alpha: parts.a_lu.solve(&f)?,
        ann: parts.ann.clone(),
    })
}

/// Nodal values are the Dirichlet data, so the rhs is known and the
/// problem reduces to the explicit case.
fn solve_known_nodal(spec: &ProblemSpec, parts: &CoupledParts) -> Result<BkmSolution> {
    let d = spec.dirichlet.as_ref().expect("validated");
    let nodal: Vec<f64> = parts.all.iter().map(|&p| d(p)).collect();
    let particular = finish_particular(parts, &nodal)?;
    let up = psi_matrix(&parts.ann, &parts.sources, &particular.centers)?.matvec(&particular.alpha)?;
    let g = kernel_matrix(&parts.gs, &parts.sources, &parts.sources)?;
    let rhs: Vec<f64> = nodal.iter().zip(&up).map(|(a, b)| a - b).collect();
    let (lu, condition) = factor_system(&g)?;
    let beta = lu.solve(&rhs)?;
    let collocation_residual = relative_residual(&g, &beta, &rhs)?;
    Ok(BkmSolution {
        scheme: Scheme::Standard(parts.gs),
        sources: parts.sources.clone(),
        beta,
        particular: Some(particular),
        nodal: Some(nodal),
        knots: spec.knots.clone(),
        condition,
        collocation_residual,
        iterations: 0,
    })
}

/// Unknowns z = [beta (N), nodal values (M)].
/// Consistency rows: G beta + (Psi A^-1 R - I) u_hat = 0 at every knot.
/// BC rows: u_hat_i = D_i (Dirichlet) or
///          Gn beta + Psi_n A^-1 R u_hat = N_i (Neumann).
fn solve_block(spec: &ProblemSpec, parts: &CoupledParts) -> Result<BkmSolution> {
    let n = parts.sources.len();
    let m = parts.all.len();
    let psi = psi_matrix(&parts.ann, &parts.all, &parts.all)?;
    // T = Psi A^-1 R
    let t = parts.a_lu.right_divide(&psi)?.matmul(&parts.r)?;
    let g = kernel_matrix(&parts.gs, &parts.all, &parts.sources)?;
    let size = n + m;
    let mut s = DenseMatrix::zeros(size, size);
    let mut rhs = vec![0.0; size];
    for i in 0..m {
        for k in 0..n {
            s[(i, k)] = g[(i, k)];
        }
        for j in 0..m {
            s[(i, n + j)] = t[(i, j)] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for i in 0..n {
        let row = m + i;
        let p = spec.knots.boundary[i];
        match spec.knots.bc_tags[i] {
            BcKind::Dirichlet => {
                s[(row, n + i)] = 1.0;
            }
            BcKind::Neumann => {
                let nrm = spec.knots.normals[i];
                let gn = kernel_normal_row(&parts.gs, p, nrm, &parts.sources)?;
                let pn = psi_normal_row(&parts.ann, p, nrm, &parts.all)?;
                let pn_mat = DenseMatrix::new(1, m, pn)?;
                let tn = parts.a_lu.right_divide(&pn_mat)?.matmul(&parts.r)?;
                for k in 0..n {
                    s[(row, k)] = gn[k];
                }
                for j in 0..m {
                    s[(row, n + j)] = tn[(0, j)];
                }
            }
        }
        rhs[row] = boundary_data(spec, i);
    }
    let (lu, condition) = factor_system(&s)?;
    let z = lu.solve(&rhs)?;
    let collocation_residual = relative_residual(&s, &z, &rhs)?;
    let beta = z[..n].to_vec();
    let nodal = z[n..].to_vec();
    let particular = finish_particular(parts, &nodal)?;
    Ok(BkmSolution {
        scheme: Scheme::Standard(parts.gs),
        sources: parts.sources.clone(),
        beta,
        particular: Some(particular),
        nodal: Some(nodal),
        knots: spec.knots.clone(),
        condition,
        collocation_residual,
        iterations: 0,
    })
}

/// Fixed-point iteration: given nodal values, fit the rhs, solve the
/// boundary rows for beta, and re-evaluate the representation at the knots.
fn solve_picard(spec: &ProblemSpec, parts: &CoupledParts) -> Result<BkmSolution> {
    let n = parts.sources.len();
    let knots = &spec.knots;
    let psi_all = psi_matrix(&parts.ann, &parts.all, &parts.all)?;
    let g_all = kernel_matrix(&parts.gs, &parts.all, &parts.sources)?;
    // Boundary-row operator and the particular-solution rows it pairs with.
    let mut bmat = DenseMatrix::zeros(n, n);
    let mut prow = DenseMatrix::zeros(n, parts.all.len());
    for i in 0..n {
        let p = knots.boundary[i];
        let (grow, psirow) = match knots.bc_tags[i] {
            BcKind::Dirichlet => (g_all.row(i).to_vec(), psi_all.row(i).to_vec()),
            BcKind::Neumann => {
                let nrm = knots.normals[i];
                (
                    kernel_normal_row(&parts.gs, p, nrm, &parts.sources)?,
                    psi_normal_row(&parts.ann, p, nrm, &parts.all)?,
                )
            }
        };
        for k in 0..n {
            bmat[(i, k)] = grow[k];
        }
        for (j, v) in psirow.into_iter().enumerate() {
            prow[(i, j)] = v;
        }
    }
    let (blu, condition) = factor_system(&bmat)?;
    let data: Vec<f64> = (0..n).map(|i| boundary_data(spec, i)).collect();
    let mut nodal: Vec<f64> = match &spec.dirichlet {
        Some(d) => parts.all.iter().map(|&p| d(p)).collect(),
        None => vec![0.0; parts.all.len()],
    };
    let mut history = Vec::new();
    let mut beta = vec![0.0; n];
    for iter in 1..=PICARD_MAX_ITERATIONS {
        let alpha = parts.a_lu.solve(&parts.r.matvec(&nodal)?)?;
        let up_b = prow.matvec(&alpha)?;
        let rhs: Vec<f64> = data.iter().zip(&up_b).map(|(d, u)| d - u).collect();
        beta = blu.solve(&rhs)?;
        let v = g_all.matvec(&beta)?;
        let up = psi_all.matvec(&alpha)?;
        let mut change = 0.0f64;
        let scale = nodal.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for j in 0..nodal.len() {
            let target = v[j] + up[j];
            let next = (1.0 - PICARD_RELAXATION) * nodal[j] + PICARD_RELAXATION * target;
            change = change.max((next - nodal[j]).abs());
            nodal[j] = next;
        }
        history.push(change / scale);
        if change / scale <= PICARD_TOLERANCE {
            let particular = finish_particular(parts, &nodal)?;
            let up_b = prow.matvec(&particular.alpha)?;
            let rhs: Vec<f64> = data.iter().zip(&up_b).map(|(d, u)| d - u).collect();
            let beta = blu.solve(&rhs)?;
            let collocation_residual = relative_residual(&bmat, &beta, &rhs)?;
            return Ok(BkmSolution {
                scheme: Scheme::Standard(parts.gs),
                sources: parts.sources.clone(),
                beta,
                particular: Some(particular),
                nodal: Some(nodal),
                knots: spec.knots.clone(),
                condition,
                collocation_residual,
                iterations: iter,
            });
        }
    }
    let _ = beta;
    Err(Error::Convergence {
        iterations: PICARD_MAX_ITERATIONS,
        last: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}

fn guard_varying(p: Point2) -> Result<()> {
    if p[0].abs() < VARYING_GUARD {
        return Err(Error::Domain(format!(
            "point {p:?} is within {VARYING_GUARD} of x = 0 where the coefficient is singular"
        )));
    }
    Ok(())
}

fn frozen_root(a: f64, p: Point2) -> Result<f64> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::Domain(format!(
            "coefficient must be finite and non-negative, got {a} at {p:?}"
        )));
    }
    Ok(a.sqrt())
}

/// Solves lap u - a(x) u = 0 with the kernel I0(sqrt(a(x_i)) r) frozen at
/// each response point, boundary knots only.
pub fn solve_varying_helmholtz(spec: &ProblemSpec) -> Result<BkmSolution> {
    spec.validate()?;
    let a = spec
        .coefficient
        .clone()
        .ok_or_else(|| Error::Config("varying scheme needs a coefficient field".into()))?;
    if spec.knots.bc_tags.iter().any(|t| *t != BcKind::Dirichlet) {
        return Err(Error::Unsupported("varying scheme takes Dirichlet data only".into()));
    }
    for &p in spec.knots.boundary.iter().chain(&spec.knots.interior) {
        guard_varying(p)?;
    }
    let b = &spec.knots.boundary;
    let n = b.len();
    let m = collocation_matrix(spec)?;
    let rhs: Vec<f64> = (0..n).map(|i| boundary_data(spec, i)).collect();
    let (lu, condition) = factor_system(&m)?;
    let beta = lu.solve(&rhs)?;
    let collocation_residual = relative_residual(&m, &beta, &rhs)?;
    Ok(BkmSolution {
        scheme: Scheme::Varying(a),
        sources: b.clone(),
        beta,
        particular: None,
        nodal: None,
        knots: spec.knots.clone(),
        condition,
        collocation_residual,
        iterations: 0,
    })
}

/// Frozen-velocity kernel between response p and source s at velocity u.
fn burger_kernel(variant: KernelVariant, u: f64, p: Point2, s: Point2) -> Result<f64> {
    let gs = GeneralSolution::new(Family::FrozenConvectionDiffusion2D, 0.0).with_variant(variant);
    eval_general_solution(
        &gs,
        euclidean(&p, &s),
        Aux::FrozenConvection {
            velocity: u,
            dx: p[0] - s[0],
        },
    )
}

/// Solves lap u - u du/dx = 0 with the frozen-velocity kernel; the velocity
/// at each boundary knot is its Dirichlet value.
pub fn solve_burger_like(spec: &ProblemSpec) -> Result<BkmSolution> {
    spec.validate()?;
    if spec.knots.bc_tags.iter().any(|t| *t != BcKind::Dirichlet) {
        return Err(Error::Unsupported(
            "the nonlinear scheme takes Dirichlet data only".into(),
        ));
    }
    let variant = spec.split.variant;
    let b = &spec.knots.boundary;
    let n = b.len();
    let data: Vec<f64> = (0..n).map(|i| boundary_data(spec, i)).collect();
    let m = collocation_matrix(spec)?;
    let (lu, condition) = factor_system(&m)?;
    let beta = lu.solve(&data)?;
    let collocation_residual = relative_residual(&m, &beta, &data)?;
    Ok(BkmSolution {
        scheme: Scheme::Burger(variant),
        sources: b.clone(),
        beta,
        particular: None,
        nodal: Some(data),
        knots: spec.knots.clone(),
        condition,
        collocation_residual,
        iterations: 0,
    })
}

fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (f(lo)?.abs(), f(hi)?.abs());
    Ok(if a <= b { lo } else { hi })
}

/// Root of f nearest `guess`: scans [guess - w, guess + w] on 33 samples,
/// doubling w from 1e-3 until a sign change appears or |u| would exceed
/// [`ROOT_SEARCH_LIMIT`]. Returns the root and whether several sign changes
/// were seen.
fn nearest_root(f: &dyn Fn(f64) -> Result<f64>, guess: f64) -> Result<Option<(f64, bool)>> {
    let mut w = 1e-3;
    while w <= 2.0 * ROOT_SEARCH_LIMIT {
        let xs: Vec<f64> = (0..33).map(|i| guess - w + 2.0 * w * i as f64 / 32.0).collect();
        let fs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
        let changes: Vec<usize> = (0..32)
            .filter(|&i| fs[i] == 0.0 || (fs[i] < 0.0) != (fs[i + 1] < 0.0))
            .collect();
        if let Some(&i) = changes.iter().min_by(|&&a, &&b| {
            let da = (0.5 * (xs[a] + xs[a + 1]) - guess).abs();
            let db = (0.5 * (xs[b] + xs[b + 1]) - guess).abs();
            da.partial_cmp(&db).unwrap()
        }) {
            return Ok(Some((bisect(f, xs[i], xs[i + 1])?, changes.len() > 1)));
        }
        w *= 2.0;
    }
    Ok(None)
}

/// Interior value of the nonlinear scheme: the root of
/// F(u) = u - sum_k beta_k K(u; p, x_k).
///
/// F also has a spurious root near u = 0 where the kernel degenerates, so
/// the root is tracked by continuation from the nearest boundary knot,
/// where it equals the boundary value exactly.
pub fn eval_nonlinear_point(sol: &BkmSolution, p: Point2) -> Result<NonlinearRoot> {
    let Scheme::Burger(variant) = sol.scheme else {
        return Err(Error::Unsupported("not a nonlinear-scheme solution".into()));
    };
    let data = sol.nodal.as_ref().expect("nonlinear solutions keep boundary data");
    let f_at = |q: Point2| {
        move |u: f64| -> Result<f64> {
            let mut s = 0.0;
            for (x, b) in sol.sources.iter().zip(&sol.beta) {
                s += b * burger_kernel(variant, u, q, *x)?;
            }
            Ok(u - s)
        }
    };
    let (start, _) = sol
        .sources
        .iter()
        .enumerate()
        .map(|(i, s)| (i, euclidean(s, &p)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("at least 3 sources");
    let s0 = sol.sources[start];
    let mut guess = data[start];
    let mut ambiguous = false;
    for step in 1..=CONTINUATION_STEPS {
        let t = step as f64 / CONTINUATION_STEPS as f64;
        let q = [s0[0] + t * (p[0] - s0[0]), s0[1] + t * (p[1] - s0[1])];
        let f = f_at(q);
        match nearest_root(&f, guess)? {
            Some((u, amb)) => {
                guess = u;
                ambiguous = amb;
            }
            None => {
                return Err(Error::RootBracketing {
                    x: q[0],
                    y: q[1],
                    limit: ROOT_SEARCH_LIMIT,
                })
            }
        }
    }
    let residual = f_at(p)(guess)?.abs();
    Ok(NonlinearRoot {
        value: guess,
        residual,
        ambiguous,
    })
}
