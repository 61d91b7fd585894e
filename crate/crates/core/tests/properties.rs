use proptest::prelude::*;

use nalgebra::DMatrix;
use nltgcr::linear::{gcr_solve, tgcr_solve, KrylovOptions};
use nltgcr::problems::{make_linear_problem, LinearKind};
use nltgcr::trace::{ConvergenceTrace, Mode, TraceRecord};
use nltgcr::window::WindowPair;
use nltgcr::{nltgcr_solve, update_alpha0, AffineProblem, JvMode, LineSearchOptions, SolverOptions, Variant, Vector};

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0_f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn window_stays_orthonormal(m in 1usize..6, cols in prop::collection::vec(vec_strategy(8), 1..12)) {
        let mut w = WindowPair::new(m).unwrap();
        let a = DMatrix::from_fn(8, 8, |i, j| if i == j { 4.0 } else { 1.0 / (1.0 + (i + 2 * j) as f64) });
        for c in cols {
            let p = Vector::from_vec(c);
            let v = &a * &p;
            let o = w.orthogonalize(p, v);
            if o.norm <= 1e-8 * o.raw_norm.max(1e-300) {
                continue;
            }
            let (p, v) = o.normalized();
            w.push(p, v).unwrap();
            prop_assert!(w.len() <= m);
            prop_assert!(w.orthonormality_defect() <= 1e-10);
        }
    }

    #[test]
    fn alpha0_stays_in_unit_interval(tau in 0.05..0.99_f64, steps in prop::collection::vec(1usize..8, 1..40)) {
        let mut opts = LineSearchOptions { tau, ..Default::default() };
        for s in steps {
            opts = update_alpha0(&opts, s);
            prop_assert!(opts.alpha0 > 0.0 && opts.alpha0 <= 1.0);
        }
    }

    #[test]
    fn trace_csv_round_trips(
        rows in prop::collection::vec((0usize..5, 1e-300..1e3_f64, 0.0..1.0_f64, any::<bool>()), 1..30)
    ) {
        let mut t = ConvergenceTrace::new();
        let mut fevals = 0;
        for (i, (extra, r, s, lin)) in rows.into_iter().enumerate() {
            fevals += extra;
            t.append(TraceRecord {
                iter: i,
                fevals,
                resnorm: r,
                step_size: s,
                mode: if lin { Mode::Linear } else { Mode::Nonlinear },
                wallclock_s: i as f64 * 0.5,
            }).unwrap();
        }
        let back = ConvergenceTrace::read_csv(t.to_csv_string().as_bytes()).unwrap();
        prop_assert_eq!(back.records(), t.records());
    }

    #[test]
    fn gcr_residuals_never_increase(seed in 0u64..1000, n in 5usize..30) {
        let (op, b) = make_linear_problem(LinearKind::Nonsymmetric, n, seed);
        let (_, h) = gcr_solve(&op, &b, &Vector::zeros(n), &KrylovOptions::default()).unwrap();
        prop_assert!(h.norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        prop_assert!(h.iterations() <= n + 1);
    }

    #[test]
    fn tgcr_residuals_never_increase(seed in 0u64..1000, m in 1usize..4) {
        let (op, b) = make_linear_problem(LinearKind::Indefinite, 20, seed);
        if let Ok((_, h)) = tgcr_solve(&op, &b, &Vector::zeros(20), m, &KrylovOptions { max_iters: 200, ..Default::default() }) {
            prop_assert!(h.norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        }
    }

    #[test]
    fn nltgcr_solves_affine_systems(seed in 0u64..500, m in 1usize..8, lin in any::<bool>()) {
        let (op, b) = make_linear_problem(LinearKind::Spd, 15, seed);
        let prob = AffineProblem::new(op.matrix().clone(), b.clone()).with_exact_jv();
        let opts = SolverOptions {
            window_m: m,
            variant: if lin { Variant::Linearized } else { Variant::Nonlinear },
            jv_mode: JvMode::Exact,
            ..Default::default()
        };
        let sol = nltgcr_solve(&prob, &Vector::zeros(15), &opts).unwrap();
        prop_assert!(sol.converged);
        let res = (op.matrix() * &sol.x - &b).norm() / b.norm();
        prop_assert!(res <= 1e-9, "relative residual {}", res);
    }
}
