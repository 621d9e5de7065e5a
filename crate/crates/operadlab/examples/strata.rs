//! Boundary strata of the compactified configuration space, indexed by
//! reduced rooted trees, and the face poset they form.

use operadlab::{enumerate_trees, face_poset, ColoredTree, LabeledTree};

fn main() -> operadlab::Result<()> {
    for n in 2..=5 {
        let counts: Vec<usize> = (0..=n - 2)
            .map(|k| enumerate_trees(n, k).map(|t| t.len()))
            .collect::<Result<_, _>>()?;
        println!("n = {n}: trees by number of internal edges {counts:?}");
    }

    println!("codimension-one strata for three points:");
    for t in enumerate_trees(3, 1)? {
        println!("  {t}  dimension {}", t.stratum_dimension());
    }

    let t: LabeledTree =
        serde_json::from_str(r#"{"color":"c","children":[{"color":"c","children":[1,2]},3,4]}"#)?;
    println!(
        "{t}: dimension {}, contraction of its edge gives {}",
        t.stratum_dimension(),
        t.contract(0)?
    );

    let colored: ColoredTree = serde_json::from_str(
        r#"{"color":"o","children":[{"color":"c","children":[{"color":"c","leaf":1},{"color":"c","leaf":2}]},{"color":"o","leaf":1}]}"#,
    )?;
    println!("colored stratum dimension {}", colored.stratum_dimension());

    let poset = face_poset(3)?;
    println!(
        "face poset of three points, grade sizes {:?}",
        poset.grade_sizes()
    );
    print!("{}", poset.to_dot());
    Ok(())
}
