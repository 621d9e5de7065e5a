//! Charts near the boundary: a decorated tree plus a scale per internal
//! edge determines a point of the compactification.

use operadlab::fm_operad::{injectivity_probe, ProbeParams};
use operadlab::random::seeded;
use operadlab::{
    gamma_insert, ChartPoint, DecoratedTree, NormalizedConfiguration, PlanePoint, Tolerances,
};

fn main() -> operadlab::Result<()> {
    let tol = Tolerances::default();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pair = NormalizedConfiguration::new(
        vec![PlanePoint::new(-s, 0.0), PlanePoint::new(s, 0.0)],
        &tol,
    )?;

    // insert a scaled copy of one configuration at a point of another
    println!("{:?}", gamma_insert(&pair, &pair, 1, 0.1, &tol)?);

    // the same thing through a chart on the tree ((1 2) 3)
    let p = DecoratedTree::corolla(pair.clone()).graft(0, &DecoratedTree::corolla(pair))?;
    println!(
        "epsilon_max = {}, default collar width = {}",
        p.epsilon_max(),
        p.default_epsilon()
    );
    for t in [0.0, 0.01, 0.05, 0.1] {
        let cp = ChartPoint::with_default_epsilon(p.clone(), vec![t])?;
        let one_pass = cp.evaluate(&tol)?;
        let staged = cp.evaluate_staged(&tol)?;
        println!(
            "t = {t}: {}  (staged agrees to {:.1e})",
            serde_json::to_string(&one_pass)?,
            one_pass.distance(&staged)
        );
    }

    // numerical injectivity of the chart map near the boundary
    let report = injectivity_probe(
        &ChartPoint::boundary(p),
        &ProbeParams::default(),
        &tol,
        &mut seeded(5),
    )?;
    println!("injectivity probe: {}", serde_json::to_string(&report)?);
    Ok(())
}
