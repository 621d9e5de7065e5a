use operadlab::random::{random_disks, seeded, DEFAULT_MAX_ATTEMPTS};
use operadlab::{Disk, DiskConfiguration, Permutation};
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;

/// Three random configurations and slots, from one seed.
fn triple(
    seed: u64,
) -> (
    DiskConfiguration,
    DiskConfiguration,
    DiskConfiguration,
    usize,
    usize,
) {
    let mut rng = seeded(seed);
    let (n, m, k) = (
        rng.gen_range(1..=5),
        rng.gen_range(1..=4),
        rng.gen_range(1..=3),
    );
    let a = random_disks(&mut rng, n, DEFAULT_MAX_ATTEMPTS).unwrap();
    let b = random_disks(&mut rng, m, DEFAULT_MAX_ATTEMPTS).unwrap();
    let c = random_disks(&mut rng, k, DEFAULT_MAX_ATTEMPTS).unwrap();
    let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..m));
    (a, b, c, i, j)
}

proptest! {
    #[test]
    fn sequential_associativity(seed in any::<u64>()) {
        let (a, b, c, i, j) = triple(seed);
        let lhs = a.compose(i, &b).unwrap().compose(i + j, &c).unwrap();
        let rhs = a.compose(i, &b.compose(j, &c).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) <= TOL);
        prop_assert!(lhs.is_valid(TOL) && rhs.is_valid(TOL));
    }

    #[test]
    fn parallel_commutativity(seed in any::<u64>()) {
        let (a, b, c, i, _) = triple(seed);
        prop_assume!(a.len() >= 2);
        let k = if i + 1 < a.len() { i + 1 } else { 0 };
        let (lo, hi) = (i.min(k), i.max(k));
        let lhs = a.compose(lo, &b).unwrap().compose(hi + b.len() - 1, &c).unwrap();
        let rhs = a.compose(hi, &c).unwrap().compose(lo, &b).unwrap();
        prop_assert!(lhs.distance(&rhs) <= TOL);
    }

    #[test]
    fn units(seed in any::<u64>()) {
        let (a, _, _, i, _) = triple(seed);
        let id = DiskConfiguration::identity();
        prop_assert_eq!(a.compose(i, &id).unwrap(), a.clone());
        prop_assert_eq!(id.compose(0, &a).unwrap(), a);
    }

    #[test]
    fn equivariance(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let (a, b, _, i, _) = triple(seed);
        let mut rng = seeded(perm_seed);
        let sigma = Permutation::random(a.len(), &mut rng);
        let tau = Permutation::random(b.len(), &mut rng);
        let lhs = a.act_permutation(&sigma).unwrap().compose(i, &b).unwrap();
        let rhs = a
            .compose(sigma.apply(i), &b)
            .unwrap()
            .act_permutation(&sigma.block_insert(i, b.len()).unwrap())
            .unwrap();
        prop_assert!(lhs.distance(&rhs) <= TOL);
        let lhs = a.compose(i, &b.act_permutation(&tau).unwrap()).unwrap();
        let rhs = a
            .compose(i, &b)
            .unwrap()
            .act_permutation(&Permutation::inner_block(a.len(), i, &tau).unwrap())
            .unwrap();
        prop_assert!(lhs.distance(&rhs) <= TOL);
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>()) {
        let (a, ..) = triple(seed);
        let back: DiskConfiguration = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn overlapping_and_escaping_disks_are_rejected() {
    assert!(DiskConfiguration::validated(
        vec![Disk::at(0.0, 0.0, 0.5), Disk::at(0.5, 0.0, 0.5)],
        TOL
    )
    .is_err());
    assert!(DiskConfiguration::validated(vec![Disk::at(0.8, 0.0, 0.3)], TOL).is_err());
    assert!(DiskConfiguration::validated(
        vec![Disk::at(-0.5, 0.0, 0.5), Disk::at(0.5, 0.0, 0.5)],
        TOL
    )
    .is_ok());
}

#[test]
fn composing_into_a_missing_slot_fails() {
    let id = DiskConfiguration::identity();
    assert!(id.compose(1, &id).is_err());
}
