//! Normal forms of point configurations: translation and dilation are
//! quotiented out, leaving centroid 0 and unit total squared norm.

use operadlab::{normalize, Permutation, PointConfiguration};

fn main() -> operadlab::Result<()> {
    let c = PointConfiguration::from_pairs(&[(3.0, 1.0), (5.0, 1.0), (4.0, 4.0)])?;
    let n = normalize(&c)?;
    println!("input      {:?}", c.points());
    println!("normalized {:?}", n.points());

    // the normal form forgets affine motions of the plane
    let moved = c.act_affine(7.5, operadlab::PlanePoint::new(-2.0, 0.5))?;
    println!(
        "distance to normal form of an affine image: {:.2e}",
        normalize(&moved)?.distance(&n)
    );

    // and relabeling commutes with normalizing
    let sigma = Permutation::new(vec![2, 0, 1])?;
    let a = normalize(&c.act_permutation(&sigma)?)?;
    let b = n.act_permutation(&sigma)?;
    println!("equivariance defect: {:.2e}", a.distance(&b));

    println!("{}", serde_json::to_string(&n)?);
    Ok(())
}
