use knotmesh::bkm::{self, field, DrmConfig, ProblemSpec, Rhs};
use knotmesh::geometry::{ellipse_knots, Placement};
use knotmesh::kernels::GeneralSolution;
use knotmesh::rbf::{interpolation_matrix, RadialKernel};
use knotmesh::structmat::{classify_structure, Structure};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dirichlet_data_reproduced_at_knots(n in 4usize..14, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let spec = ProblemSpec::new(
            GeneralSolution::helmholtz_2d(1.0),
            ellipse_knots(n, 0, [0.0, 0.0], Placement::UniformParameter).unwrap(),
            field(move |p| a * p[0] + b * p[1].sin()),
        );
        let sol = bkm::solve(&spec).unwrap();
        prop_assert!(sol.collocation_residual() <= 1e-8);
        for p in &spec.knots.boundary {
            let want = a * p[0] + b * p[1].sin();
            prop_assert!((sol.value(*p).unwrap() - want).abs() <= 1e-8);
        }
    }

    #[test]
    fn solution_linear_in_data(n in 4usize..10, s in -3.0f64..3.0) {
        let knots = ellipse_knots(n, 0, [0.0, 0.0], Placement::UniformParameter).unwrap();
        let mk = |k: f64| ProblemSpec {
            rhs: Rhs::None,
            drm: DrmConfig::mq(2.0),
            ..ProblemSpec::new(GeneralSolution::helmholtz_2d(1.0), knots.clone(), field(move |p| k * (p[0] + p[1])))
        };
        let one = bkm::solve(&mk(1.0)).unwrap();
        let scaled = bkm::solve(&mk(s)).unwrap();
        for (x, y) in one.beta().iter().zip(scaled.beta()) {
            prop_assert!((s * x - y).abs() <= 1e-9 * (1.0 + x.abs() * s.abs()));
        }
    }

    #[test]
    fn antipodal_interpolation_matrix_centrosymmetric(h in 2usize..8, c in 0.5f64..10.0) {
        let k = ellipse_knots(2 * h, 0, [0.0, 0.0], Placement::UniformParameter)
            .unwrap()
            .with_antipodal_order()
            .unwrap();
        let a = interpolation_matrix(&k.boundary, &RadialKernel::mq(c)).unwrap();
        prop_assert_eq!(classify_structure(&a), Structure::Centrosymmetric);
        let n = 2 * h;
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(a[(i, j)], a[(n - 1 - i, n - 1 - j)]);
            }
        }
    }
}
