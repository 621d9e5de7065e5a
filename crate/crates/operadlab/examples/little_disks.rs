//! Composition in the little disks operad and its axioms on random input.

use operadlab::random::{random_disks, seeded, DEFAULT_MAX_ATTEMPTS};
use operadlab::{Disk, DiskConfiguration, Permutation};

fn main() -> operadlab::Result<()> {
    let a = DiskConfiguration::validated(
        vec![Disk::at(-0.5, 0.0, 0.4), Disk::at(0.5, 0.0, 0.4)],
        1e-9,
    )?;
    let b = DiskConfiguration::validated(
        vec![Disk::at(0.0, 0.5, 0.3), Disk::at(0.0, -0.5, 0.3)],
        1e-9,
    )?;

    // insert b into the second disk of a
    let ab = a.compose(1, &b)?;
    for (k, d) in ab.disks().iter().enumerate() {
        println!(
            "disk {}: center {:+.3} {:+.3}i, radius {:.3}",
            k + 1,
            d.center.re,
            d.center.im,
            d.radius
        );
    }

    // the identity is a two-sided unit
    let id = DiskConfiguration::identity();
    println!(
        "unit defects: {:.1e} {:.1e}",
        a.compose(0, &id)?.distance(&a),
        id.compose(0, &a)?.distance(&a)
    );

    // associativity on random configurations
    let mut rng = seeded(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let x = random_disks(&mut rng, 3, DEFAULT_MAX_ATTEMPTS)?;
        let y = random_disks(&mut rng, 2, DEFAULT_MAX_ATTEMPTS)?;
        let z = random_disks(&mut rng, 2, DEFAULT_MAX_ATTEMPTS)?;
        let lhs = x.compose(1, &y)?.compose(2, &z)?;
        let rhs = x.compose(1, &y.compose(1, &z)?)?;
        worst = worst.max(lhs.distance(&rhs));
    }
    println!("associativity defect over 200 random triples: {worst:.2e}");

    // relabeling the outer disks moves the inserted block with them
    let sigma = Permutation::new(vec![1, 0])?;
    let lhs = a.act_permutation(&sigma)?.compose(0, &b)?;
    let rhs = a
        .compose(sigma.apply(0), &b)?
        .act_permutation(&sigma.block_insert(0, b.len())?)?;
    println!("equivariance defect: {:.1e}", lhs.distance(&rhs));
    Ok(())
}
