use knotmesh::bench::{self, CaseConfig, CaseId, ErrorReport};

fn run(id: CaseId, boundary: usize) -> ErrorReport {
    let c = bench::case(id);
    let cfg = CaseConfig {
        boundary,
        ..c.default_config()
    };
    bench::run_case(&c, &cfg).unwrap()
}

fn computed_at(r: &ErrorReport, x: f64, y: f64) -> f64 {
    r.rows.iter().find(|row| row.x == x && row.y == y && row.excluded.is_none()).unwrap().computed
}

#[test]
fn helmholtz_points_round_to_tabulated_values() {
    let r = run(CaseId::Helmholtz, 7);
    // tabulated 2.51 and 1.16 against exact 2.50 and 1.16
    assert!((computed_at(&r, 1.5, 0.0) - 2.4975).abs() <= 0.02);
    assert_eq!(format!("{:.2}", computed_at(&r, 0.6, -0.45)), "1.16");
}

#[test]
fn laplace_three_knots_reproduces_exact_to_three_decimals() {
    let r = run(CaseId::Laplace, 3);
    assert_eq!(format!("{:.3}", computed_at(&r, 1.5, 0.0)), "1.500");
    for row in r.consistent_rows() {
        assert!(row.abs_err < 1e-3, "({}, {})", row.x, row.y);
    }
}

#[test]
fn laplace_inconsistent_row_is_flagged() {
    let r = run(CaseId::Laplace, 3);
    assert_eq!(r.rows.iter().filter(|row| row.excluded.is_some()).count(), 1);
    assert_eq!(r.consistent_rows().count(), 6);
    assert!(r.to_markdown().contains("excluded"));
}

#[test]
fn laplace_refinement_endpoints() {
    let coarse = run(CaseId::Laplace, 3).max_abs_err;
    let fine = run(CaseId::Laplace, 9).max_abs_err;
    assert!(fine <= coarse, "{fine:e} > {coarse:e}");
}

#[test]
fn convection_far_point_within_two_percent() {
    let r = run(CaseId::ConvectionX, 7);
    let exact = (1.5f64).exp();
    assert!(((computed_at(&r, -1.5, 0.0) - exact) / exact).abs() <= 2e-2);
    let r = run(CaseId::ConvectionXy, 7);
    let exact = (-1.5f64).exp() + 1.0;
    assert!(((computed_at(&r, 1.5, 0.0) - exact) / exact).abs() <= 2e-2);
}

#[test]
fn varying_helmholtz_matches_tabulated_error_at_far_point() {
    let r = run(CaseId::VaryingHelmholtz, 15);
    let row = r.rows.iter().find(|row| row.x == 4.5).unwrap();
    // tabulated 2.6e-3
    assert_eq!(format!("{:.1e}", row.rel_err), "2.6e-3");
}

#[test]
fn varying_helmholtz_boundary_reproduced() {
    let c = bench::case(CaseId::VaryingHelmholtz);
    let spec = c.spec(&c.default_config()).unwrap();
    let sol = knotmesh::bkm::solve(&spec).unwrap();
    for p in &spec.knots.boundary {
        assert!((sol.value(*p).unwrap() + 2.0 / p[0]).abs() <= 1e-8);
    }
}

#[test]
fn burger_roots_converge() {
    for n in [9, 11] {
        let r = run(CaseId::Burger, n);
        assert!(r.max_root_residual.unwrap() <= 1e-10);
        assert!(r.average_rel_err < 5e-2);
    }
}

#[test]
fn literal_kernel_runs_and_differs() {
    let c = bench::case(CaseId::Burger);
    let cfg = CaseConfig {
        variant: knotmesh::kernels::KernelVariant::Literal,
        ..c.default_config()
    };
    let lit = bench::run_case(&c, &cfg).unwrap();
    let der = run(CaseId::Burger, 11);
    assert_ne!(lit.to_csv(), der.to_csv());
}

#[test]
fn csv_is_deterministic() {
    for id in CaseId::ALL {
        let c = bench::case(id);
        let a = bench::run_case(&c, &c.default_config()).unwrap();
        let b = bench::run_case(&c, &c.default_config()).unwrap();
        assert_eq!(a.to_csv(), b.to_csv(), "{id}");
        assert_eq!(a.to_markdown(), b.to_markdown(), "{id}");
        assert!(a.to_csv().starts_with("x,y,exact,computed,abs_err,rel_err\n"));
    }
}

#[test]
fn study_reports_all_runs() {
    let c = bench::case(CaseId::Laplace);
    let s = bench::convergence_study(&c, &[3, 5, 7, 9], &c.default_config()).unwrap();
    assert_eq!(s.runs.len(), 4);
    assert!(s.eta.is_finite());
    assert!(s.to_table().contains("fitted eta"));
}

#[test]
fn ill_conditioned_run_reports_case() {
    let c = bench::case(CaseId::Burger);
    let cfg = CaseConfig {
        boundary: 41,
        ..c.default_config()
    };
    let e = bench::run_case(&c, &cfg).unwrap_err();
    assert!(e.is_numeric());
    assert!(e.to_string().starts_with("case burger"));
}
