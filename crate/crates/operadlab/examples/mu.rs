//! The colored map μ: a configuration in the upper half-plane with points
//! on the real axis goes to a Swiss-cheese configuration, through the
//! doubling that adds the mirror image of every interior point.

use operadlab::random::{random_colored_chart, seeded, DEFAULT_MAX_ATTEMPTS};
use operadlab::{
    mu, CollarParams, ColoredChartPoint, ColoredDecoratedTree, HalfPlaneConfiguration, PlanePoint,
};
use operadlab::{SwissCheeseValue, Tolerances};

fn main() -> operadlab::Result<()> {
    let tol = Tolerances::default();
    let h = HalfPlaneConfiguration::new(
        vec![PlanePoint::new(0.0, 1.0)],
        vec![PlanePoint::new(-1.0, 0.0), PlanePoint::new(1.5, 0.0)],
    )?;
    let point = ColoredDecoratedTree::from_half_plane(&h, &tol)?;
    let cp = ColoredChartPoint::with_default_epsilon(point, vec![])?;
    let params = CollarParams::for_chart(&cp.double()?);
    if let SwissCheeseValue::Open(sc) = mu(&cp, &params, &tol)? {
        println!("arity {:?}", sc.arity());
        println!("{}", serde_json::to_string_pretty(&sc)?);
    }

    // a random point near a boundary stratum, and its image
    let cp = random_colored_chart(&mut seeded(4), 2, 2, 0.0, DEFAULT_MAX_ATTEMPTS)?;
    println!("{}", serde_json::to_string_pretty(&cp)?);
    let params = CollarParams::for_chart(&cp.double()?);
    println!(
        "{}",
        serde_json::to_string_pretty(&mu(&cp, &params, &tol)?)?
    );
    Ok(())
}
