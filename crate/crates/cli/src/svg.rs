//! Grayscale heatmap of a landscape: gamma along x, beta along y (increasing upward).

use std::fmt::Write as _;

const CELL: usize = 12;

pub fn heatmap(values: &[f64], n_beta: usize, n_gamma: usize) -> String {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let lo = finite.clone().fold(f64::INFINITY, f64::min);
    let hi = finite.fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (w, h) = (n_gamma * CELL, n_beta * CELL);
    let mut out =
        format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n");
    for ib in 0..n_beta {
        for ig in 0..n_gamma {
            let v = values[ib * n_gamma + ig];
            let fill = if v.is_finite() {
                let level = (((v - lo) / span) * 255.0).round() as u8;
                format!("rgb({level},{level},{level})")
            } else {
                "red".to_string()
            };
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\"/>",
                ig * CELL,
                (n_beta - 1 - ib) * CELL
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
