//! Property-based invariants over randomized inputs.

use conesep::cones::{classify_aug_pair, membership, AugClass, Cone};
use conesep::dilation::{
    eps_membership, henig_membership, normalize_base, EpsNeighborhood, HenigDilation,
};
use conesep::space::{dist_to_cloud, dist_to_polytope, norm, thickened_set_membership};
use conesep::{Functional, Norm, Point, Space};
use proptest::prelude::*;

fn norms() -> impl Strategy<Value = Norm> {
    prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::Linf)]
}

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_triangle_and_homogeneity(
        nm in norms(),
        a in coords(3),
        b in coords(3),
        lambda in -5.0..5.0f64,
    ) {
        let s = Space::new(3, nm).unwrap();
        let pa = Point::new(a.clone());
        let pb = Point::new(b.clone());
        let sum = Point::new(a.iter().zip(&b).map(|(x, y)| x + y).collect());
        let na = norm(&s, &pa).unwrap();
        let nb = norm(&s, &pb).unwrap();
        let nsum = norm(&s, &sum).unwrap();
        prop_assert!(nsum <= na + nb + 1e-12);
        let scaled = Point::new(a.iter().map(|x| x * lambda).collect());
        prop_assert!((norm(&s, &scaled).unwrap() - lambda.abs() * na).abs() <= 1e-12 * (1.0 + na));
    }

    #[test]
    fn thickening_iff_distance(
        nm in norms(),
        x in coords(2),
        cloud in prop::collection::vec(coords(2), 1..6),
        eps in 0.01..3.0f64,
    ) {
        let s = Space::new(2, nm).unwrap();
        let px = Point::new(x);
        let pts: Vec<Point> = cloud.into_iter().map(Point::new).collect();
        let d = dist_to_cloud(&s, &px, &pts).unwrap();
        let inside = thickened_set_membership(&s, &px, &pts, eps).unwrap();
        prop_assert_eq!(inside, d <= eps);
    }

    #[test]
    fn hull_distance_below_cloud_distance(
        nm in norms(),
        x in coords(3),
        verts in prop::collection::vec(coords(3), 1..6),
    ) {
        let s = Space::new(3, nm).unwrap();
        let px = Point::new(x);
        let pts: Vec<Point> = verts.into_iter().map(Point::new).collect();
        let dp = dist_to_polytope(&s, &px, &pts).unwrap();
        let dc = dist_to_cloud(&s, &px, &pts).unwrap();
        prop_assert!(dp <= dc + 1e-8);
    }

    #[test]
    fn membership_homogeneity(
        nm in norms(),
        x in coords(2),
        lambda in 0.01..50.0f64,
        theta in 0.0..std::f64::consts::TAU,
        width in 0.1..2.5f64,
    ) {
        let s = Space::new(2, nm).unwrap();
        let c = Cone::polyhedral(&s, vec![
            Point::new(vec![theta.cos(), theta.sin()]),
            Point::new(vec![(theta + width).cos(), (theta + width).sin()]),
        ]).unwrap();
        let px = Point::new(x.clone());
        let scaled = Point::new(x.iter().map(|v| v * lambda).collect());
        let m1 = membership(&s, &c, &px, 1e-9).unwrap();
        let m2 = membership(&s, &c, &scaled, 1e-9).unwrap();
        prop_assert_eq!(m1, m2);
    }

    #[test]
    fn negated_cone_in_sublevel_for_star_pairs(
        alpha in 0.05..0.9f64,
        phi in 0.0..std::f64::consts::TAU,
        t in 0.0..1.0f64,
        r in 0.1..5.0f64,
    ) {
        // For C = C(f, a2) with a2 >= alpha, (f, alpha) lands in the
        // augmented dual and -C must sit inside S(f, alpha).
        let s = Space::new(2, Norm::L2).unwrap();
        let f = Functional::new(vec![phi.cos(), phi.sin()]);
        let a2 = alpha + (1.0 - alpha) * 0.5;
        let c = Cone::bishop_phelps(&s, f.clone(), a2).unwrap();
        let pair = classify_aug_pair(&s, &c, &f, alpha, 1e-3).unwrap();
        prop_assert!(matches!(pair.class, AugClass::SharpPlus | AugClass::StarPlus));
        let sub = Cone::sublevel(&s, f, alpha).unwrap();
        // Random member of -C: direction within the cap around -f.
        let beta = a2.acos();
        let ang = phi + std::f64::consts::PI + (2.0 * t - 1.0) * beta;
        let member = Point::new(vec![r * ang.cos(), r * ang.sin()]);
        prop_assert!(membership(&s, &sub, &member, 1e-9).unwrap());
    }

    #[test]
    fn dilation_membership_monotone(
        theta in 0.0..std::f64::consts::TAU,
        width in 0.2..2.0f64,
        e1 in 0.02..0.4f64,
        grow in 0.01..0.5f64,
        x in coords(2),
    ) {
        let s = Space::new(2, Norm::L2).unwrap();
        let width = width.min(std::f64::consts::PI - 0.2);
        let c = Cone::polyhedral(&s, vec![
            Point::new(vec![theta.cos(), theta.sin()]),
            Point::new(vec![(theta + width).cos(), (theta + width).sin()]),
        ]).unwrap();
        let e2 = (e1 + grow).min(0.95);
        let n1 = EpsNeighborhood::build(&s, c.clone(), e1, 0.01, 1).unwrap();
        let n2 = EpsNeighborhood::build(&s, c.clone(), e2, 0.01, 1).unwrap();
        let px = Point::new(x);
        let m1 = eps_membership(&s, &n1, &px, 1e-9).unwrap();
        let m2 = eps_membership(&s, &n2, &px, 1e-9).unwrap();
        prop_assert!(!m1 || m2);

        let base = normalize_base(&s, &c).unwrap();
        if e2 < base.delta_b {
            let h1 = HenigDilation::build(&s, base.clone(), e1).unwrap();
            let h2 = HenigDilation::build(&s, base, e2).unwrap();
            let k1 = henig_membership(&s, &h1, &px, 1e-9).unwrap();
            let k2 = henig_membership(&s, &h2, &px, 1e-9).unwrap();
            prop_assert!(!k1 || k2);
        }
    }

    #[test]
    fn cone_inside_own_dilations(
        theta in 0.0..std::f64::consts::TAU,
        width in 0.2..2.0f64,
        eps in 0.05..0.5f64,
        t in 0.0..1.0f64,
        r in 0.1..10.0f64,
    ) {
        let s = Space::new(2, Norm::L2).unwrap();
        let width = width.min(std::f64::consts::PI - 0.2);
        let c = Cone::polyhedral(&s, vec![
            Point::new(vec![theta.cos(), theta.sin()]),
            Point::new(vec![(theta + width).cos(), (theta + width).sin()]),
        ]).unwrap();
        let ang = theta + t * width;
        let member = Point::new(vec![r * ang.cos(), r * ang.sin()]);
        let n = EpsNeighborhood::build(&s, c.clone(), eps, 0.01, 1).unwrap();
        prop_assert!(eps_membership(&s, &n, &member, 1e-9).unwrap());
        let base = normalize_base(&s, &c).unwrap();
        let h = HenigDilation::build(&s, base, eps.min(0.9)).unwrap();
        prop_assert!(henig_membership(&s, &h, &member, 1e-9).unwrap());
    }
}
