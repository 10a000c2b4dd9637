//! SVG figure generation: the chamber decomposition around the fundamental
//! domain, and the image of a u-plane grid under the period map.

use num_complex::Complex64;
use staba2_core::periods::{period_map, Continuation};
use staba2_core::stability::{chamber_descent_with, ProjectiveCharge, DESCENT_CAP};
use staba2_core::Config;
use std::fmt::Write;

type C64 = Complex64;

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

/// Raster of the chamber decomposition in the projective-charge coordinate
/// zeta = Z(S)/Z(T). Each cell is colored by the chamber its charge descends
/// to; the chamber of the standard heart (the fundamental domain, a
/// curvilinear diamond) is drawn white, and near-wall cells are black.
pub fn domain_svg(cfg: &Config) -> String {
    let (x0, x1, y0, y1) = (-2.5, 3.0, -2.0, 2.0);
    let (nx, ny) = (220usize, 160usize);
    let (w, h) = (880.0, 640.0);
    let (cw, ch) = (w / nx as f64, h / ny as f64);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
    // A tie tolerance visible at raster scale marks the walls.
    let wall_tol = 0.5 * (x1 - x0) / nx as f64;
    for iy in 0..ny {
        // SVG y grows downward; the charge plane's y grows upward.
        let y = y1 - (y1 - y0) * (iy as f64 + 0.5) / ny as f64;
        for ix in 0..nx {
            let x = x0 + (x1 - x0) * (ix as f64 + 0.5) / nx as f64;
            let z = ProjectiveCharge::new(C64::new(x, y), C64::new(1.0, 0.0));
            let rep = match chamber_descent_with(&z, cfg.tie_tol, DESCENT_CAP) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let near_wall = !matches!(
                chamber_descent_with(&z, wall_tol, DESCENT_CAP),
                Ok(ref r) if r.wall_flags.is_empty()
            );
            let color = if near_wall {
                "#000000".to_string()
            } else if rep.heart.g.is_identity() {
                continue; // fundamental domain stays white
            } else {
                let g = rep.heart.g;
                let m = g.k_matrix.matrix().0;
                let key = (m[0][0] * 7
                    + m[0][1] * 13
                    + m[1][0] * 31
                    + m[1][1] * 3
                    + g.twist_sum * 17
                    + g.shift_res as i64 * 11)
                    .rem_euclid(PALETTE.len() as i64) as usize;
                PALETTE[key].to_string()
            };
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\"/>",
                ix as f64 * cw,
                iy as f64 * ch,
                cw + 0.5,
                ch + 0.5,
            );
        }
    }
    // Axes for orientation.
    let px = |x: f64| (x - x0) / (x1 - x0) * w;
    let py = |y: f64| (y1 - y) / (y1 - y0) * h;
    let _ = writeln!(
        svg,
        "<line x1=\"0\" y1=\"{0:.1}\" x2=\"{w}\" y2=\"{0:.1}\" stroke=\"#888\" stroke-width=\"1\"/>",
        py(0.0)
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{0:.1}\" y1=\"0\" x2=\"{0:.1}\" y2=\"{h}\" stroke=\"#888\" stroke-width=\"1\"/>",
        px(0.0)
    );
    svg.push_str("</svg>\n");
    svg
}

/// Image of a rectangular grid in the u-plane under the period map,
/// plotted in the plane of the lambda-period ratio. Grid lines are
/// continued analytically along their own length so each stays on one
/// branch.
pub fn period_grid_svg(cfg: &Config) -> Result<String, String> {
    let (re0, re1) = (-1.0, 2.0);
    let (im0, im1) = (0.15, 1.5);
    let samples = 48usize;
    let mut polylines: Vec<(Vec<C64>, &str)> = Vec::new();
    // Vertical grid lines: constant Re(u).
    for k in 0..=9 {
        let re = re0 + (re1 - re0) * k as f64 / 9.0;
        let path: Vec<C64> = (0..=samples)
            .map(|i| C64::new(re, im0 + (im1 - im0) * i as f64 / samples as f64))
            .collect();
        polylines.push((trace_ratios(&path, cfg)?, "#4e79a7"));
    }
    // Horizontal grid lines: constant Im(u).
    for k in 0..=5 {
        let im = im0 + (im1 - im0) * k as f64 / 5.0;
        let path: Vec<C64> = (0..=samples)
            .map(|i| C64::new(re0 + (re1 - re0) * i as f64 / samples as f64, im))
            .collect();
        polylines.push((trace_ratios(&path, cfg)?, "#e15759"));
    }
    // Fit the viewport to the traced points.
    let pts: Vec<C64> = polylines
        .iter()
        .flat_map(|(p, _)| p.iter().copied())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &pts {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let pad = 0.05 * ((x1 - x0).max(y1 - y0));
    x0 -= pad;
    x1 += pad;
    y0 -= pad;
    y1 += pad;
    let w = 800.0;
    let h = w * (y1 - y0) / (x1 - x0);
    let px = |z: C64| ((z.re - x0) / (x1 - x0) * w, (y1 - z.im) / (y1 - y0) * h);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.1} {h:.1}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{w:.1}\" height=\"{h:.1}\" fill=\"#ffffff\"/>"
    );
    for (line, color) in &polylines {
        let mut d = String::new();
        for (i, z) in line.iter().enumerate() {
            let (x, y) = px(*z);
            let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
        }
        let _ = writeln!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>",
            d.trim_end()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Continues the periods from the basepoint to the start of `path`, then
/// along it, recording the lambda-period ratio at every vertex.
fn trace_ratios(path: &[C64], cfg: &Config) -> Result<Vec<C64>, String> {
    let pv = period_map(path[0], cfg).map_err(|e| e.to_string())?;
    let mut cont = Continuation::resume(&pv, cfg).map_err(|e| e.to_string())?;
    let mut out = vec![cont.lambda.ratio()];
    for u in &path[1..] {
        cont.advance_to(*u).map_err(|e| e.to_string())?;
        out.push(cont.lambda.ratio());
    }
    Ok(out)
}
