//! SVG drawing of the z–x disk of the Bloch ball with the six pure states,
//! the three two-state decompositions of `I/2` (diameters) and the two
//! three-state ones (triangles).

use std::fmt::Write;

use crate::error::Result;
use crate::operational::{sigma, MIXED_DECOMPOSITIONS};
use crate::qmath::bloch_from_density;

const SIZE: f64 = 400.0;
const RADIUS: f64 = 150.0;

/// Screen position of a Bloch vector: x to the right, z up.
fn screen(x: f64, z: f64) -> (f64, f64) {
    let c = SIZE / 2.0;
    (c + RADIUS * x, c - RADIUS * z)
}

fn state_point(name: &str) -> Result<(f64, f64)> {
    let r = bloch_from_density(&sigma(name).expect("known state"))?;
    Ok(screen(r.x, r.z))
}

/// Renders the figure as a standalone SVG 1.1 document.
pub fn bloch_figure_svg() -> Result<String> {
    let mut s = String::new();
    let c = SIZE / 2.0;
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        s,
        "  <title>Six pure qubit states in the z–x plane of the Bloch ball</title>"
    );
    let _ = writeln!(
        s,
        r##"  <circle class="disk" cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#444" stroke-width="1.5"/>"##
    );
    let _ = writeln!(
        s,
        r##"  <line class="axis" x1="{c}" y1="{:.3}" x2="{c}" y2="{:.3}" stroke="#bbb" stroke-dasharray="4 4"/>"##,
        c - RADIUS - 20.0,
        c + RADIUS + 20.0
    );
    let _ = writeln!(
        s,
        r##"  <line class="axis" x1="{:.3}" y1="{c}" x2="{:.3}" y2="{c}" stroke="#bbb" stroke-dasharray="4 4"/>"##,
        c - RADIUS - 20.0,
        c + RADIUS + 20.0
    );
    let _ = writeln!(
        s,
        r#"  <text class="axis-label" x="{:.3}" y="{:.3}">z</text>"#,
        c + 6.0,
        c - RADIUS - 8.0
    );
    let _ = writeln!(
        s,
        r#"  <text class="axis-label" x="{:.3}" y="{:.3}">x</text>"#,
        c + RADIUS + 10.0,
        c - 6.0
    );

    for (label, parts) in MIXED_DECOMPOSITIONS {
        let pts = parts
            .iter()
            .map(|(_, _, n)| state_point(n))
            .collect::<Result<Vec<_>>>()?;
        match pts.as_slice() {
            [(x1, y1), (x2, y2)] => {
                let _ = writeln!(
                    s,
                    r##"  <line class="decomposition" data-mixture="{label}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#1f6fb2" stroke-width="1.5"/>"##
                );
            }
            _ => {
                let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
                let _ = writeln!(
                    s,
                    r##"  <polygon class="decomposition" data-mixture="{label}" points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
                    list.join(" ")
                );
            }
        }
    }

    for name in crate::operational::STATE_NAMES {
        let (x, y) = state_point(name)?;
        // Push labels radially outward.
        let (dx, dy) = ((x - c) / RADIUS, (y - c) / RADIUS);
        let _ = writeln!(
            s,
            r##"  <circle class="state" id="state-{name}" cx="{x:.3}" cy="{y:.3}" r="5" fill="#222"/>"##
        );
        let _ = writeln!(
            s,
            r#"  <text class="state-label" x="{:.3}" y="{:.3}" text-anchor="middle" dominant-baseline="middle">σ_{name}</text>"#,
            x + 22.0 * dx,
            y + 22.0 * dy
        );
    }
    let _ = writeln!(
        s,
        r##"  <circle class="center" cx="{c}" cy="{c}" r="4" fill="#fff" stroke="#222"/>"##
    );
    let _ = writeln!(
        s,
        r#"  <text class="center-label" x="{:.3}" y="{:.3}">I/2</text>"#,
        c + 8.0,
        c + 16.0
    );
    s.push_str("</svg>\n");
    Ok(s)
}
