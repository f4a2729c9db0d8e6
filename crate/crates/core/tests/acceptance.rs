//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p knotmesh --test acceptance -- --nocapture`.
//! Criteria listed in `KNOWN_RED` are not met by the implementation; they
//! are still evaluated at their stated tolerances and reported as FAIL, but
//! do not fail the test run. Any other failure does.

use std::time::Instant;

use knotmesh::bench::{self, CaseConfig, CaseId};
use knotmesh::bkm::{self, CoupledStrategy};
use knotmesh::drm::{build_annihilator, AnnihilatorOperator};
use knotmesh::geometry::{ellipse_knots, is_symmetric_placement, Placement};
use knotmesh::kernels::{max_relative_residual, Aux, Family, GeneralSolution};
use knotmesh::rbf::{fs_rbf, interpolation_matrix, Forcing, RadialFn, RadialKernel};
use knotmesh::structmat::{centro_halve, DenseMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

/// Criteria that miss their tolerance; the analysis is recorded with the
/// project's design notes.
const KNOWN_RED: &[u32] = &[2, 5];

struct Outcome {
    id: u32,
    pass: bool,
}

fn report(id: u32, pass: bool, title: &str, detail: String) -> Outcome {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} [{id}] {title}: {detail}");
    Outcome { id, pass }
}

fn run(id: CaseId, f: impl FnOnce(&mut CaseConfig)) -> bench::ErrorReport {
    let c = bench::case(id);
    let mut cfg = c.default_config();
    f(&mut cfg);
    bench::run_case(&c, &cfg).unwrap()
}

fn criterion_1() -> Outcome {
    let r = run(CaseId::Helmholtz, |c| {
        c.boundary = 7;
        c.shape_c = 3.0;
    });
    let secs = r.wall_time.as_secs_f64();
    report(
        1,
        r.max_abs_err <= 0.02 && secs < 1.0,
        "helmholtz N=7 c=3, max |u - exact| <= 0.02, runtime < 1 s",
        format!("max abs err {:.3e}, {:.3} s", r.max_abs_err, secs),
    )
}

fn criterion_2() -> Outcome {
    let r = run(CaseId::Laplace, |c| {
        c.boundary = 3;
        c.shape_c = 25.0;
    });
    let secs = r.wall_time.as_secs_f64();
    report(
        2,
        r.max_rel_err <= 1e-3 && secs < 1.0,
        "laplace N=3 c=25, relative error <= 1e-3 at every point, runtime < 1 s",
        format!("max rel err {:.3e}, {:.3} s", r.max_rel_err, secs),
    )
}

fn criterion_3() -> Outcome {
    let x = run(CaseId::ConvectionX, |c| {
        c.boundary = 7;
        c.interior = 11;
        c.shape_c = 4.0;
    });
    let xy = run(CaseId::ConvectionXy, |c| {
        c.boundary = 7;
        c.interior = 11;
        c.shape_c = 5.5;
    });
    report(
        3,
        x.max_rel_err <= 2e-2 && xy.max_rel_err <= 2e-2,
        "convection 7+11 knots, c=4 / c=5.5, relative error <= 2% at every point",
        format!("max rel err {:.3e} / {:.3e}", x.max_rel_err, xy.max_rel_err),
    )
}

fn criterion_4() -> Outcome {
    let avgs: Vec<f64> = [9, 13, 15]
        .iter()
        .map(|&n| run(CaseId::VaryingHelmholtz, |c| c.boundary = n).average_rel_err)
        .collect();
    let bounded = avgs.iter().all(|a| *a <= 2e-2);
    let monotone = avgs.windows(2).all(|w| w[1] <= w[0]);
    report(
        4,
        bounded && monotone,
        "varying-helmholtz N=9,13,15, average relative error <= 2e-2 and non-increasing",
        format!("averages {:.3e}, {:.3e}, {:.3e}", avgs[0], avgs[1], avgs[2]),
    )
}

fn criterion_5() -> Outcome {
    let runs: Vec<bench::ErrorReport> = [9, 11].iter().map(|&n| run(CaseId::Burger, |c| c.boundary = n)).collect();
    let bounded = runs.iter().all(|r| r.average_rel_err <= 2e-2);
    let root = runs.iter().map(|r| r.max_root_residual.unwrap()).fold(0.0f64, f64::max);
    report(
        5,
        bounded && root <= 1e-10,
        "burger N=9,11, average relative error <= 2e-2, every root |F| <= 1e-10",
        format!(
            "averages {:.3e}, {:.3e}; max |F| {:.1e}",
            runs[0].average_rel_err, runs[1].average_rel_err, root
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut worst_transient = 0.0f64;
    let mut failing = Vec::new();
    for fam in Family::ALL {
        let gs = GeneralSolution::new(fam, 1.1)
            .with_amplitudes(1.2, 0.8, -0.3)
            .with_diffusivity(0.9)
            .with_wave_speed(1.4);
        let samples: Vec<(Vec<f64>, Aux)> = (0..100)
            .map(|_| {
                let aux = match fam {
                    Family::Heat3D | Family::Wave3D => Aux::Time(rng.gen_range(0.05..1.0)),
                    Family::FrozenVaryingHelmholtz2D => Aux::Frozen(rng.gen_range(0.05..2.0)),
                    Family::FrozenConvectionDiffusion2D => Aux::FrozenConvection {
                        velocity: rng.gen_range(-1.5..1.5),
                        dx: 0.0,
                    },
                    _ => Aux::None,
                };
                let r = rng.gen_range(0.1..4.0);
                let mut d: Vec<f64> = (0..fam.dimension()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                d.iter_mut().for_each(|v| *v *= r / n);
                (d, aux)
            })
            .collect();
        let rel = max_relative_residual(&gs, samples.iter().map(|(p, a)| (p.as_slice(), *a))).unwrap();
        if rel > 1e-6 {
            failing.push(format!("{fam:?}"));
        }
        worst = worst.max(rel);
        if fam.is_transient() {
            worst_transient = worst_transient.max(rel);
        }
    }
    report(
        6,
        failing.is_empty(),
        "kernel residuals, 10 families x 100 random points, relative residual <= 1e-6",
        format!(
            "worst {worst:.2e}, transient (heat/wave) worst {worst_transient:.2e}{}",
            if failing.is_empty() {
                String::new()
            } else {
                format!(", failing: {}", failing.join(" "))
            }
        ),
    )
}

fn criterion_7() -> Outcome {
    let ops = [
        AnnihilatorOperator::Laplace2D,
        AnnihilatorOperator::Helmholtz2D { lambda: 1.0 },
    ];
    let phis = [
        RadialKernel::mq(1.0),
        RadialKernel::mq(3.0),
        RadialKernel::mq(25.0),
        RadialKernel::ThinPlate { m: 1 },
    ];
    let mut worst = 0.0f64;
    for op in ops {
        for phi in &phis {
            let a = build_annihilator(op, phi.clone(), 5.0).unwrap();
            let (mut res, mut scale) = (0.0f64, 0.0f64);
            for i in 0..80 {
                let r = 0.05 + i as f64 * (4.9 - 0.05) / 79.0;
                let (v, s) = a.ode_residual(r, 0.02).unwrap();
                res = res.max(v.abs());
                scale = scale.max(s);
            }
            worst = worst.max(res / scale);
        }
    }
    let one = fs_rbf(RadialFn::Constant(1.0), RadialFn::Constant(1.0), Forcing::Constant(1.0));
    let a1 = build_annihilator(AnnihilatorOperator::Laplace2D, one, 3.0).unwrap();
    let ar = build_annihilator(AnnihilatorOperator::Laplace2D, RadialKernel::Linear, 3.0).unwrap();
    let mut closed = 0.0f64;
    for i in 0..=30 {
        let r = 3.0 * i as f64 / 30.0;
        closed = closed.max((a1.psi(r).unwrap() - r * r / 4.0).abs());
        closed = closed.max((ar.psi(r).unwrap() - r.powi(3) / 9.0).abs());
    }
    report(
        7,
        worst <= 1e-6 && closed <= 1e-8,
        "annihilator ODE residual <= 1e-6 (MQ c=1,3,25, TPS; both operators), closed forms to 1e-8",
        format!("worst residual {worst:.2e}, closed-form error {closed:.2e}"),
    )
}

fn spectrum(m: &DenseMatrix) -> Vec<f64> {
    let d = DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice());
    let mut e: Vec<f64> = d.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

fn criterion_8() -> Outcome {
    // exact centrosymmetry of A_phi under antipodal placements
    let mut exact = true;
    for n in [4, 6, 8, 12] {
        let k = ellipse_knots(n, 0, [0.0, 0.0], Placement::UniformParameter)
            .unwrap()
            .with_antipodal_order()
            .unwrap();
        assert!(is_symmetric_placement(&k.boundary));
        for c in [1.0, 3.0, 25.0] {
            let a = interpolation_matrix(&k.boundary, &RadialKernel::mq(c)).unwrap();
            for i in 0..n {
                for j in 0..n {
                    exact &= a[(i, j)] == a[(n - 1 - i, n - 1 - j)];
                }
            }
        }
    }

    // half-size spectra
    let mut spec_err = 0.0f64;
    for n in [4, 6] {
        let k = ellipse_knots(n, 0, [0.0, 0.0], Placement::UniformParameter)
            .unwrap()
            .with_antipodal_order()
            .unwrap();
        let a = interpolation_matrix(&k.boundary, &RadialKernel::mq(1.5)).unwrap();
        let (m1, m2) = centro_halve(&a).unwrap();
        let mut halves = spectrum(&m1);
        halves.extend(spectrum(&m2));
        halves.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let full = spectrum(&a);
        let scale = full.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (x, y) in halves.iter().zip(&full) {
            spec_err = spec_err.max((x - y).abs() / scale);
        }
    }

    // block elimination against Picard on the laplace benchmark
    let c = bench::case(CaseId::Laplace);
    let spec = c.spec(&c.default_config()).unwrap();
    let block = bkm::solve_coupled_with(&spec, CoupledStrategy::BlockElimination).unwrap();
    let picard = bkm::solve_coupled_with(&spec, CoupledStrategy::Picard).unwrap();
    let mut agree = 0.0f64;
    for row in c.rows() {
        agree = agree.max((block.value(row.point).unwrap() - picard.value(row.point).unwrap()).abs());
    }

    report(
        8,
        exact && spec_err <= 1e-10 && agree <= 1e-8,
        "structure: exact centrosymmetric A_phi, half-size spectra to 1e-10, block vs Picard to 1e-8",
        format!(
            "centrosymmetric {exact}, spectrum error {spec_err:.2e}, block/Picard diff {agree:.2e} ({} iterations)",
            picard.iterations()
        ),
    )
}

/// Not a criterion: the convergence study's monotone-refinement claim,
/// reported for inspection only.
fn supplementary_laplace_refinement() {
    let c = bench::case(CaseId::Laplace);
    let errs: Vec<f64> = [3, 5, 7, 9]
        .iter()
        .map(|&n| {
            let cfg = CaseConfig { boundary: n, ..c.default_config() };
            bench::run_case(&c, &cfg).unwrap().max_abs_err
        })
        .collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0]);
    println!(
        "info laplace N=3,5,7,9 max error non-increasing: {} ({})",
        if monotone { "yes" } else { "no" },
        errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(", ")
    );
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    supplementary_laplace_refinement();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria pass ({:.1} s)", outcomes.len(), start.elapsed().as_secs_f64());
    for o in &outcomes {
        if KNOWN_RED.contains(&o.id) && o.pass {
            println!("note: criterion {} is listed as known red but now passes", o.id);
        }
    }
    let unexpected: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.pass && !KNOWN_RED.contains(&o.id))
        .map(|o| o.id)
        .collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
