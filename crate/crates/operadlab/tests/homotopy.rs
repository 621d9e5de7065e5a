use operadlab::homotopy_map::{interior_radius, mu_disks};
use operadlab::random::{
    random_collar_sample, random_colored_chart, random_decorated_tree, random_normalized, seeded,
    DEFAULT_MAX_ATTEMPTS,
};
use operadlab::{
    bump, mu, nu, nu_boundary, nu_interior, Bump, ChartPoint, CollarParams, Disk, Error,
    Permutation, SwissCheeseValue, Tolerances,
};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #[test]
    fn nu_lands_in_little_disks(n in 2usize..=6, seed in any::<u64>(), smooth in any::<bool>()) {
        let cp = random_collar_sample(&mut seeded(seed), n, DEFAULT_MAX_ATTEMPTS).unwrap();
        let params = CollarParams { epsilon: cp.epsilon(), bump: if smooth { Bump::Smooth } else { Bump::Linear } };
        let d = nu(&cp, &params, &tol()).unwrap();
        prop_assert!(d.is_valid(1e-9));
        prop_assert!(nu_boundary(cp.point()).is_valid(1e-9));
    }

    #[test]
    fn nu_is_equivariant(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let cp = random_collar_sample(&mut rng, n, DEFAULT_MAX_ATTEMPTS).unwrap();
        let sigma = Permutation::random(n, &mut rng);
        let params = CollarParams::for_chart(&cp);
        let lhs = nu(&cp.act_permutation(&sigma).unwrap(), &params, &tol()).unwrap();
        let rhs = nu(&cp, &params, &tol()).unwrap().act_permutation(&sigma).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-12);
    }

    /// Grafting at a leaf of the root vertex is reproduced bit for bit; deeper
    /// leaves agree up to rounding.
    #[test]
    fn nu_boundary_is_a_morphism(n1 in 1usize..=4, n2 in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_decorated_tree(&mut rng, n1, DEFAULT_MAX_ATTEMPTS).unwrap();
        let q = random_decorated_tree(&mut rng, n2, DEFAULT_MAX_ATTEMPTS).unwrap();
        let i = rng.gen_range(0..n1);
        let lhs = nu_boundary(&p.graft(i, &q).unwrap());
        let rhs = nu_boundary(&p).compose(i, &nu_boundary(&q)).unwrap();
        if p.tree().is_unit() || p.tree().leaf_position(i).unwrap().0 == 0 {
            prop_assert_eq!(lhs, rhs);
        } else {
            prop_assert!(lhs.distance(&rhs) <= 1e-15);
        }
    }

    #[test]
    fn section_of_the_projection(n in 2usize..=7, seed in any::<u64>()) {
        let c = random_normalized(&mut seeded(seed), n, DEFAULT_MAX_ATTEMPTS).unwrap();
        let d = nu_interior(&c);
        prop_assert!(d.is_valid(1e-12));
        prop_assert!(d.project_centers().unwrap().distance(&c) <= 1e-12);
    }

    #[test]
    fn mu_is_conjugation_symmetric(p in 0usize..=3, q in 0usize..=3, seed in any::<u64>()) {
        prop_assume!(p + q > 0);
        let cp = random_colored_chart(&mut seeded(seed), p, q, 0.3, DEFAULT_MAX_ATTEMPTS).unwrap();
        let params = CollarParams::for_chart(&cp.double().unwrap());
        let d = mu_disks(&cp, &params, &tol()).unwrap();
        let x = d.disks();
        for k in 0..p {
            prop_assert!((x[k].center - x[k + p].center.conj()).norm() <= 1e-12);
            prop_assert!((x[k].radius - x[k + p].radius).abs() <= 1e-12);
            prop_assert!(x[k].center.im > 0.0);
        }
        for o in &x[2 * p..] {
            prop_assert!(o.center.im.abs() <= 1e-12);
        }
        prop_assert!(matches!(mu(&cp, &params, &tol()).unwrap(), SwissCheeseValue::Open(_)));
    }
}

#[test]
fn halved_radius_keeps_three_close_points_apart() {
    let c = operadlab::PointConfiguration::from_pairs(&[(-0.8, 0.0), (0.39, 0.0), (0.41, 0.0)])
        .unwrap()
        .normalize()
        .unwrap();
    let r = interior_radius(&c);
    let x = c.points();
    assert!((r - (x[2] - x[1]).norm() / 2.0).abs() < 1e-15);
    assert!(nu_interior(&c).is_valid(0.0));
}

#[test]
fn collar_profile() {
    let mut rng = seeded(4);
    let p = loop {
        let p = random_decorated_tree(&mut rng, 4, DEFAULT_MAX_ATTEMPTS).unwrap();
        if p.tree().internal_edge_count() > 0 {
            break p;
        }
    };
    let eps = p.default_epsilon();
    let k = p.tree().internal_edge_count();
    let at = |t: f64| ChartPoint::new(p.clone(), vec![t; k], eps).unwrap();
    let params = CollarParams::new(eps).unwrap();
    assert_eq!(bump(&at(0.0), &params), 1.0);
    assert_eq!(bump(&at(eps), &params), 0.0);
    assert!((bump(&at(eps / 4.0), &params) - 0.75).abs() < 1e-15);
    let smooth = CollarParams {
        bump: Bump::Smooth,
        ..params
    };
    assert!((bump(&at(eps / 2.0), &smooth) - 0.5).abs() < 1e-15);

    // outside the collar ν is the interior map of the evaluated point
    let out = at(eps);
    let c = out.evaluate(&tol()).unwrap().interior().cloned().unwrap();
    assert_eq!(nu(&out, &params, &tol()).unwrap(), nu_interior(&c));

    // approaching the boundary along the fiber
    let target = nu_boundary(&p);
    let dist: Vec<f64> = (1..=10)
        .map(|k| {
            nu(&at(eps * 2f64.powi(-k)), &params, &tol())
                .unwrap()
                .distance(&target)
        })
        .collect();
    assert!(dist.windows(2).all(|w| w[1] <= w[0]));
    assert!(dist[9] < 1e-2);
}

#[test]
fn collar_wider_than_the_chart_is_rejected() {
    let cp = random_collar_sample(&mut seeded(2), 4, DEFAULT_MAX_ATTEMPTS).unwrap();
    let too_wide = CollarParams::new(cp.point().epsilon_max() * 2.0).unwrap();
    if cp.point().epsilon_max().is_finite() {
        assert!(matches!(
            nu(&cp, &too_wide, &tol()),
            Err(Error::Parameter(_))
        ));
    }
    assert!(CollarParams::new(0.0).is_err());
}

#[test]
fn blend_failure_is_reported() {
    let d1 = operadlab::DiskConfiguration::validated(
        vec![Disk::at(-0.5, 0.0, 0.5), Disk::at(0.5, 0.0, 0.5)],
        1e-9,
    )
    .unwrap();
    let d2 = operadlab::DiskConfiguration::validated(
        vec![Disk::at(0.5, 0.0, 0.5), Disk::at(-0.5, 0.0, 0.5)],
        1e-9,
    )
    .unwrap();
    // swapping the labels makes the halfway blend put both disks at the origin
    assert!(matches!(
        operadlab::convex_blend(&d1, &d2, 0.5, &tol()),
        Err(Error::BlendInvalid { .. })
    ));
}
