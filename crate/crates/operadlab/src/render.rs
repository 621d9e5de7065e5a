//! SVG pictures of disk and Swiss-cheese configurations.
//!
//! The unit disk is drawn as the circle inscribed in the square
//! `[margin, size − margin]²` (with `size = min(width, height)`, centered),
//! and the y-axis points up. Output depends only on the input and options.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config_space::PlanePoint;
use crate::error::{Error, Result};
use crate::little_disks::{Disk, DiskConfiguration};
use crate::swiss_cheese::SCConfiguration;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    pub labels: bool,
    /// Fill mirror disks of Swiss-cheese configurations in grey.
    pub shade_mirrors: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 400,
            height: 400,
            margin: 10,
            labels: true,
            shade_mirrors: true,
        }
    }
}

impl RenderOptions {
    fn check(&self) -> Result<()> {
        let size = self.width.min(self.height);
        if size == 0 || 2 * self.margin >= size {
            return Err(Error::Parameter(format!(
                "image {}x{} leaves no room inside a margin of {}",
                self.width, self.height, self.margin
            )));
        }
        Ok(())
    }
}

struct Canvas<'a> {
    opts: &'a RenderOptions,
    scale: f64,
    svg: String,
}

/// Fixed three-decimal formatting, with `-0.000` printed as `0.000`.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

impl<'a> Canvas<'a> {
    fn new(opts: &'a RenderOptions) -> Result<Self> {
        opts.check()?;
        let size = opts.width.min(opts.height);
        let scale = f64::from(size - 2 * opts.margin) / 2.0;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = opts.width,
            h = opts.height
        );
        let mut canvas = Canvas { opts, scale, svg };
        let (cx, cy) = canvas.map(PlanePoint::new(0.0, 0.0));
        let _ = writeln!(
            canvas.svg,
            r#"  <circle class="unit" cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            num(cx),
            num(cy),
            num(scale)
        );
        Ok(canvas)
    }

    fn map(&self, z: PlanePoint) -> (f64, f64) {
        let cx = f64::from(self.opts.width) / 2.0;
        let cy = f64::from(self.opts.height) / 2.0;
        (cx + z.re * self.scale, cy - z.im * self.scale)
    }

    fn axis(&mut self) {
        let (x0, y) = self.map(PlanePoint::new(-1.0, 0.0));
        let (x1, _) = self.map(PlanePoint::new(1.0, 0.0));
        let _ = writeln!(
            self.svg,
            r#"  <line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="grey" stroke-dasharray="4 3"/>"#,
            num(x0),
            num(y),
            num(x1),
            num(y)
        );
    }

    fn disk(&mut self, d: &Disk, class: &str, label: &str, fill: &str) {
        let (x, y) = self.map(d.center);
        let r = d.radius * self.scale;
        let _ = writeln!(
            self.svg,
            r#"  <circle class="{class}" data-label="{label}" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="black"/>"#,
            num(x),
            num(y),
            num(r)
        );
        if self.opts.labels {
            let size = (r * 0.8).clamp(4.0, 14.0);
            let _ = writeln!(
                self.svg,
                r#"  <text x="{}" y="{}" font-size="{}" text-anchor="middle" dominant-baseline="central">{label}</text>"#,
                num(x),
                num(y),
                num(size)
            );
        }
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

/// Disks labeled `1..n`.
pub fn render_disks(d: &DiskConfiguration, opts: &RenderOptions) -> Result<String> {
    let mut canvas = Canvas::new(opts)?;
    for (k, disk) in d.disks().iter().enumerate() {
        canvas.disk(disk, "disk", &(k + 1).to_string(), "none");
    }
    Ok(canvas.finish())
}

/// Closed disks labeled `1..n`, their mirrors `n+1..2n`, open disks `o1..om`,
/// with the real axis drawn.
pub fn render_sc(sc: &SCConfiguration, opts: &RenderOptions) -> Result<String> {
    let mut canvas = Canvas::new(opts)?;
    canvas.axis();
    let n = sc.closed_upper().len();
    let mirror_fill = if opts.shade_mirrors {
        "#d8d8d8"
    } else {
        "none"
    };
    for (k, disk) in sc.closed_upper().iter().enumerate() {
        canvas.disk(disk, "closed", &(k + 1).to_string(), "none");
        canvas.disk(
            &disk.conj(),
            "mirror",
            &(k + n + 1).to_string(),
            mirror_fill,
        );
    }
    for (k, disk) in sc.open().iter().enumerate() {
        canvas.disk(disk, "open", &format!("o{}", k + 1), "none");
    }
    Ok(canvas.finish())
}
