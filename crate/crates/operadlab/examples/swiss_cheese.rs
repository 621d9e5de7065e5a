//! The Swiss-cheese operad: closed disks in the upper half come with their
//! mirror images, open disks sit on the real axis.

use operadlab::random::{random_sc, seeded, DEFAULT_MAX_ATTEMPTS};
use operadlab::{Disk, DiskConfiguration, SCConfiguration, Tolerances};

fn main() -> operadlab::Result<()> {
    let tol = Tolerances::default();
    let sc = SCConfiguration::new(
        vec![Disk::at(-0.3, 0.55, 0.3)],
        vec![Disk::at(0.5, 0.0, 0.35)],
        &tol,
    )?;
    println!("arity (closed, open) = {:?}", sc.arity());
    println!(
        "flattened: {} disks, mirror pairing {:?}",
        sc.to_disks().len(),
        sc.pairing()
    );

    // closed composition glues d into the closed disk and its conjugate into the mirror
    let d = DiskConfiguration::validated(
        vec![Disk::at(-0.5, 0.0, 0.4), Disk::at(0.5, 0.0, 0.4)],
        1e-9,
    )?;
    let closed = sc.compose_closed(0, &d)?;
    println!("after closed composition: {:?}", closed.arity());

    // open composition glues a whole Swiss-cheese configuration into an open disk
    let mut rng = seeded(3);
    let other = random_sc(&mut rng, 1, 2, DEFAULT_MAX_ATTEMPTS)?;
    let open = sc.compose_open(0, &other)?;
    println!("after open composition: {:?}", open.arity());
    println!("{}", serde_json::to_string_pretty(&open)?);
    Ok(())
}
