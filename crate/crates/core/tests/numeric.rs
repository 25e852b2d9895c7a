use lieode::diffring::XPoly;
use lieode::generators::GeneratorLabel;
use lieode::numflow::{
    convergence_study, flow_map, integrate_instance, FlowGenerator, NumericInstance, SolutionBundle,
};
use proptest::prelude::*;

fn bundle(q: &str, n: usize, m: usize) -> SolutionBundle {
    let inst = NumericInstance::new(XPoly::parse(q).unwrap());
    integrate_instance(&inst, n, m, -2.0, 3.0).unwrap()
}

fn max_diff(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> f64 {
    a.1.iter().zip(&b.1).map(|(x, y)| (x - y).abs()).fold((a.0 - b.0).abs(), f64::max)
}

fn compose(
    b: &SolutionBundle,
    g: &FlowGenerator,
    t1: f64,
    t2: f64,
    x: f64,
    y: &[f64],
) -> ((f64, Vec<f64>), (f64, Vec<f64>)) {
    let (x1, y1) = flow_map(b, g, t2, x, y).unwrap();
    (flow_map(b, g, t1, x1, &y1).unwrap(), flow_map(b, g, t1 + t2, x, y).unwrap())
}

#[test]
fn identity_at_zero_time() {
    let b = bundle("x", 3, 2);
    for label in [GeneratorLabel::Fp, GeneratorLabel::Fz, GeneratorLabel::H(1, 2), GeneratorLabel::S(1, 2)] {
        let g = FlowGenerator::from_label(label, 3, 2).unwrap();
        let start = (0.4, vec![0.3, -1.2]);
        let out = flow_map(&b, &g, 0.0, start.0, &start.1).unwrap();
        assert!(max_diff(&out, &start) < 1e-14, "{label}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn affine_flows_compose_exactly(t1 in -0.6f64..0.6, t2 in -0.6f64..0.6, x in 0.0f64..1.0, y0 in -2.0f64..2.0, y1 in -2.0f64..2.0) {
        let b = bundle("1", 3, 2);
        for label in [GeneratorLabel::H(1, 2), GeneratorLabel::H(2, 2), GeneratorLabel::S(2, 1)] {
            let g = FlowGenerator::from_label(label, 3, 2).unwrap();
            let (lhs, rhs) = compose(&b, &g, t1, t2, x, &[y0, y1]);
            prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn projective_flows_compose(t1 in -0.5f64..0.5, t2 in -0.5f64..0.5, x in 0.0f64..1.0, y0 in -2.0f64..2.0) {
        let b = bundle("x", 3, 1);
        for label in [GeneratorLabel::Fp, GeneratorLabel::Fm, GeneratorLabel::Fz] {
            let g = FlowGenerator::from_label(label, 3, 1).unwrap();
            let (lhs, rhs) = compose(&b, &g, t1, t2, x, &[y0]);
            prop_assert!(max_diff(&lhs, &rhs) < 1e-8, "{}: {:?} vs {:?}", label, lhs, rhs);
        }
    }
}

#[test]
fn step_halving_convergence() {
    let q = XPoly::parse("x").unwrap();
    let g = FlowGenerator::from_label(GeneratorLabel::Fz, 3, 2).unwrap();
    let rows = convergence_study(&q, 3, 2, &g, 0.5, &[0.2, 0.1, 0.05, 0.025], 5).unwrap();
    for r in &rows {
        assert!(r.residual < 1e-6, "h = {}: residual {}", r.h, r.residual);
    }
    for w in rows.windows(2) {
        let order = (w[0].image_error / w[1].image_error).log2();
        assert!(order > 4.0, "h = {} -> {}: observed order {order}", w[0].h, w[1].h);
    }
}
