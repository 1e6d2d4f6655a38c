mod common;

use common::*;
use grassmann_core::atlas::{transition_base, ChartPoint};
use grassmann_core::bundle::{
    cotangent_factors, operator_to_tensor, pair_tensor, pair_trace, pushforward_tensor,
    tensor_to_operator, transition_cotangent, transition_tangent, Covector, TangentVector,
};
use grassmann_core::operator::{Mat, Operator};
use num_complex::Complex64;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..10).prop_flat_map(|n| (Just(n), 1..n))
}

fn coords_after(pt: &ChartPoint, a: Mat, target: &grassmann_core::atlas::ChartId) -> Mat {
    let shifted = ChartPoint::new(pt.chart().clone(), Operator::new(a)).unwrap();
    transition_base(&shifted, target)
        .unwrap()
        .coords()
        .matrix()
        .clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tangent_map_matches_central_differences((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let charts = [random_chart(&mut rng, n, k), random_chart(&mut rng, n, k)];
        let pt = point_in_all(&mut rng, &charts);
        let x = random_matrix(&mut rng, n - k, k, 1.0);
        let v = TangentVector::new(pt.clone(), x.clone()).unwrap();
        let moved = transition_tangent(&v, &charts[1]).unwrap();
        let h = 1e-6;
        let step = x.matrix() * Complex64::new(h, 0.0);
        let a = pt.coords().matrix();
        let fd = (coords_after(&pt, a + &step, &charts[1]) - coords_after(&pt, a - &step, &charts[1]))
            / Complex64::new(2.0 * h, 0.0);
        prop_assert!(rel_err(moved.fiber().matrix(), &fd) < 1e-6);
    }

    #[test]
    fn tangent_map_is_linear((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let charts = [random_chart(&mut rng, n, k), random_chart(&mut rng, n, k)];
        let pt = point_in_all(&mut rng, &charts);
        let x = random_matrix(&mut rng, n - k, k, 1.0);
        let y = random_matrix(&mut rng, n - k, k, 1.0);
        let alpha = Complex64::new(0.7, -1.3);
        let push = |m: Mat| {
            transition_tangent(&TangentVector::new(pt.clone(), Operator::new(m)).unwrap(), &charts[1])
                .unwrap()
                .fiber()
                .matrix()
                .clone()
        };
        let lhs = push(x.matrix() * alpha + y.matrix());
        let rhs = push(x.matrix().clone()) * alpha + push(y.matrix().clone());
        prop_assert!(rel_err(&lhs, &rhs) < 1e-11);
    }

    #[test]
    fn pairing_is_preserved((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let charts = [random_chart(&mut rng, n, k), random_chart(&mut rng, n, k)];
        let pt = point_in_all(&mut rng, &charts);
        let v = TangentVector::new(pt.clone(), random_matrix(&mut rng, n - k, k, 1.0)).unwrap();
        let c = Covector::new(pt, random_matrix(&mut rng, k, n - k, 1.0)).unwrap();
        let before = pair_trace(&c, &v).unwrap();
        let after = pair_trace(
            &transition_cotangent(&c, &charts[1]).unwrap(),
            &transition_tangent(&v, &charts[1]).unwrap(),
        )
        .unwrap();
        prop_assert!((after - before).norm() <= 1e-9 * (1.0 + before.norm()));
    }

    #[test]
    fn cotangent_map_composes((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let charts = [
            random_chart(&mut rng, n, k),
            random_chart(&mut rng, n, k),
            random_chart(&mut rng, n, k),
        ];
        let pt = point_in_all(&mut rng, &charts);
        let c = Covector::new(pt, random_matrix(&mut rng, k, n - k, 1.0)).unwrap();
        let direct = transition_cotangent(&c, &charts[2]).unwrap();
        let via = transition_cotangent(&transition_cotangent(&c, &charts[1]).unwrap(), &charts[2]).unwrap();
        prop_assert!(rel_err(via.fiber().matrix(), direct.fiber().matrix()) < 1e-9);
    }

    #[test]
    fn tensor_and_operator_routes_commute((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let charts = [random_chart(&mut rng, n, k), random_chart(&mut rng, n, k)];
        let pt = point_in_all(&mut rng, &charts);
        let c = Covector::new(pt.clone(), random_matrix(&mut rng, k, n - k, 1.0)).unwrap();
        let tensor = operator_to_tensor(&c);
        prop_assert!(rel_err(tensor_to_operator(&tensor).fiber().matrix(), c.fiber().matrix()) < 1e-12);
        let factors = cotangent_factors(&pt, &charts[1]).unwrap();
        let pushed = pushforward_tensor(&tensor, &factors, &charts[1]).unwrap();
        let operator_route = transition_cotangent(&c, &charts[1]).unwrap();
        prop_assert!(rel_err(tensor_to_operator(&pushed).fiber().matrix(), operator_route.fiber().matrix()) < 1e-10);
    }

    #[test]
    fn tensor_pairing_matches_trace((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let chart = random_chart(&mut rng, n, k);
        let pt = random_point(&mut rng, &chart, 1.0);
        let v = TangentVector::new(pt.clone(), random_matrix(&mut rng, n - k, k, 1.0)).unwrap();
        let c = Covector::new(pt, random_matrix(&mut rng, k, n - k, 1.0)).unwrap();
        let trace = pair_trace(&c, &v).unwrap();
        let tensor = pair_tensor(&v, &operator_to_tensor(&c)).unwrap();
        // Elementwise oracle: Tr(μX) = Σ_{ij} μ_ij X_ji.
        let (mu, x) = (c.fiber().matrix(), v.fiber().matrix());
        let mut direct = Complex64::new(0.0, 0.0);
        for i in 0..mu.nrows() {
            for j in 0..mu.ncols() {
                direct += mu[(i, j)] * x[(j, i)];
            }
        }
        prop_assert!((trace - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        prop_assert!((tensor - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn pairing_is_bilinear((n, k) in dims(), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let chart = random_chart(&mut rng, n, k);
        let pt = random_point(&mut rng, &chart, 1.0);
        let x1 = random_matrix(&mut rng, n - k, k, 1.0);
        let x2 = random_matrix(&mut rng, n - k, k, 1.0);
        let mu = random_matrix(&mut rng, k, n - k, 1.0);
        let alpha = Complex64::new(-0.4, 2.5);
        let c = Covector::new(pt.clone(), mu).unwrap();
        let pair = |x: Mat| pair_trace(&c, &TangentVector::new(pt.clone(), Operator::new(x)).unwrap()).unwrap();
        let lhs = pair(x1.matrix() * alpha + x2.matrix());
        let rhs = pair(x1.matrix().clone()) * alpha + pair(x2.matrix().clone());
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}
