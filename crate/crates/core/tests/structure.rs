//! Structural properties of the boundary system.

use maglayer::checks::{block_decoupling, ratio_stack};
use maglayer::dispersion::{build_system, find_critical, null_residual, ExteriorReduction, SearchOptions};
use maglayer::kinematics::{LayerStack, LoadingPoint, MaterialParams, WavenumberConvention};
use proptest::prelude::*;

fn away_from_one() -> impl Strategy<Value = f64> {
    prop_oneof![0.3f64..0.97, 1.03f64..2.5]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zero_field_determinant_factorizes(
        lambda in away_from_one(),
        k in 0.2f64..6.0,
        ratio in 0.2f64..10.0,
        alpha in 0.1f64..1.0,
        beta in 0.1f64..2.0,
    ) {
        let stack = ratio_stack(ratio, (alpha, beta), (0.5, 1.0));
        let pt = LoadingPoint::new(lambda, 0.0, k).unwrap();
        for red in [ExteriorReduction::Reduced, ExteriorReduction::Paper12] {
            let split = block_decoupling(&stack, &pt, red).unwrap();
            prop_assert!(split.coupling < 1e-12, "coupling {}", split.coupling);
            prop_assert!(split.defect < 1e-8, "defect {}", split.defect);
        }
    }

    #[test]
    fn half_space_is_scale_free(k in 0.3f64..8.0, b in 0.0f64..1.0) {
        let stack = LayerStack::uniform(MaterialParams::magnetoelastic(1.0, 0.5, 1.0));
        let opts = SearchOptions::default();
        let base = find_critical(&stack, 1.0, b, WavenumberConvention::Eulerian, &opts).unwrap();
        let other = find_critical(&stack, k, b, WavenumberConvention::Eulerian, &opts).unwrap();
        match (base.lambda_cr_compression, other.lambda_cr_compression) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-6),
            (x, y) => prop_assert_eq!(x, y),
        }
    }
}

#[test]
fn block_sizes() {
    let stack = ratio_stack(2.0, (0.5, 1.0), (0.5, 0.5));
    let pt = LoadingPoint::new(0.7, 0.0, 1.0).unwrap();
    let s = block_decoupling(&stack, &pt, ExteriorReduction::Paper12).unwrap();
    assert_eq!((s.mechanical, s.magnetic), (8, 4));
    let s = block_decoupling(&stack, &pt, ExteriorReduction::Reduced).unwrap();
    assert_eq!((s.mechanical, s.magnetic), (7, 4));
}

#[test]
fn null_vectors_at_critical_stretches() {
    let opts = SearchOptions::default();
    for (ratio, b) in [(1.0, 0.0), (5.0, 0.5), (0.5, 1.0)] {
        let stack = ratio_stack(ratio, (0.5, 1.0), (0.5, 0.5));
        let r = find_critical(&stack, 1.0, b, WavenumberConvention::Eulerian, &opts).unwrap();
        for c in &r.crossings {
            let pt = LoadingPoint::new(c.lambda, b, 1.0).unwrap();
            let sys = build_system(&stack, &pt, opts.exterior_reduction).unwrap();
            assert!(null_residual(&sys) < 1e-6, "ratio {ratio} b {b} lambda {}", c.lambda);
        }
    }
}
