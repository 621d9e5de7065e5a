//! SVG pictures of a disk configuration and of a Swiss-cheese configuration,
//! written to the current directory.

use operadlab::random::{random_disks, random_sc, seeded, DEFAULT_MAX_ATTEMPTS};
use operadlab::render::{render_disks, render_sc, RenderOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(4);
    let opts = RenderOptions::default();
    let d = random_disks(&mut rng, 5, DEFAULT_MAX_ATTEMPTS)?;
    std::fs::write("disks.svg", render_disks(&d, &opts)?)?;
    let sc = random_sc(&mut rng, 2, 2, DEFAULT_MAX_ATTEMPTS)?;
    std::fs::write("swiss_cheese.svg", render_sc(&sc, &opts)?)?;
    println!("wrote disks.svg and swiss_cheese.svg");
    Ok(())
}
