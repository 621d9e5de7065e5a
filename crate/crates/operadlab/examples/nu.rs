//! The map ν from chart points to disk configurations: disks around the
//! points in the interior, nested compositions on the boundary, and a
//! blend of the two across the collar.

use operadlab::random::{random_collar_sample, seeded, DEFAULT_MAX_ATTEMPTS};
use operadlab::{
    nu, nu_boundary, nu_interior, ChartPoint, CollarParams, DecoratedTree, NormalizedConfiguration,
};
use operadlab::{PlanePoint, Tolerances};

fn main() -> operadlab::Result<()> {
    let tol = Tolerances::default();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pair = NormalizedConfiguration::new(
        vec![PlanePoint::new(-s, 0.0), PlanePoint::new(s, 0.0)],
        &tol,
    )?;
    println!("interior: {}", serde_json::to_string(&nu_interior(&pair))?);

    let p = DecoratedTree::corolla(pair.clone()).graft(0, &DecoratedTree::corolla(pair))?;
    let boundary = nu_boundary(&p);
    println!("boundary: {}", serde_json::to_string(&boundary)?);

    // walking into the boundary along a collar fiber
    let eps = p.default_epsilon();
    for k in 0..=10 {
        let t = eps * 2f64.powi(-k);
        let cp = ChartPoint::new(p.clone(), vec![t], eps)?;
        let d = nu(&cp, &CollarParams::for_chart(&cp), &tol)?;
        println!(
            "t = eps/2^{k:<2}  distance to boundary value {:.3e}",
            d.distance(&boundary)
        );
    }

    // every collar sample lands in the little disks operad
    let mut rng = seeded(2);
    let mut count = 0;
    for _ in 0..1000 {
        let cp = random_collar_sample(&mut rng, 5, DEFAULT_MAX_ATTEMPTS)?;
        nu(&cp, &CollarParams::for_chart(&cp), &tol)?.validate(1e-9)?;
        count += 1;
    }
    println!("{count} random collar samples gave valid disk configurations");
    Ok(())
}
