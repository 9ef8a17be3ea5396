//! Standalone SVG rendering of a Lorenz curve.
//!
//! The chart is a 640x640 viewport over a `viewBox="0 0 1 1"` data space.
//! Curve and reference-line coordinates are raw Lorenz values; the group
//! transform flips the y axis so (0, 0) sits bottom-left.

use crate::inequality::LorenzCurve;
use crate::scalar::Scalar;

/// Renders the curve with a dashed 45-degree equality reference line.
pub fn render_lorenz_svg<S: Scalar>(curve: &LorenzCurve<S>) -> String {
    let vertices: Vec<String> = curve
        .points()
        .iter()
        .map(|p| {
            format!(
                "{:.6},{:.6}",
                p.f.to_f64().unwrap_or(f64::NAN),
                p.phi.to_f64().unwrap_or(f64::NAN)
            )
        })
        .collect();
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 1 1\">\n",
    );
    out.push_str("  <rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\"0.002\"/>\n");
    out.push_str("  <g transform=\"translate(0,1) scale(1,-1)\">\n");
    out.push_str("    <line class=\"equality\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"1\" stroke=\"grey\" stroke-width=\"0.004\" stroke-dasharray=\"0.02,0.02\"/>\n");
    out.push_str(&format!(
        "    <polyline class=\"lorenz\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.006\"/>\n",
        vertices.join(" ")
    ));
    out.push_str("  </g>\n");
    out.push_str("  <text x=\"0.5\" y=\"0.97\" font-size=\"0.035\" text-anchor=\"middle\">cumulative share of LGAs</text>\n");
    out.push_str("  <text x=\"0.05\" y=\"0.5\" font-size=\"0.035\" text-anchor=\"middle\" transform=\"rotate(-90 0.05 0.5)\">cumulative share of utilisation</text>\n");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{lorenz_curve, sort_ratios};

    fn curve_of(ratios: &[f64]) -> LorenzCurve<f64> {
        let sorted = sort_ratios(ratios.iter().enumerate().map(|(i, &t)| (i as u32 + 1, t)));
        lorenz_curve(&sorted).unwrap()
    }

    fn polyline_vertices(svg: &str) -> Vec<(f64, f64)> {
        let doc = roxmltree::Document::parse(svg).unwrap();
        let polyline = doc
            .descendants()
            .find(|n| n.has_tag_name("polyline"))
            .unwrap();
        polyline
            .attribute("points")
            .unwrap()
            .split_whitespace()
            .map(|pair| {
                let (x, y) = pair.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn svg_is_well_formed_with_one_curve_and_one_reference_line() {
        let svg = render_lorenz_svg(&curve_of(&[0.1, 0.4, 0.5]));
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let polylines = doc
            .descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .count();
        let lines = doc.descendants().filter(|n| n.has_tag_name("line")).count();
        assert_eq!(polylines, 1);
        assert_eq!(lines, 1);
    }

    #[test]
    fn equal_ratios_draw_the_diagonal() {
        let svg = render_lorenz_svg(&curve_of(&[1.0, 1.0, 1.0, 1.0]));
        for (x, y) in polyline_vertices(&svg) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn observed_region_curve_has_expected_tenth_vertex() {
        let ratios = [
            0.0302, 0.0444, 0.0735, 0.1440, 0.4000, 0.6000, 0.6000, 0.6000, 0.4000, 0.1440,
            0.0735, 0.0444, 0.0298,
        ];
        let svg = render_lorenz_svg(&curve_of(&ratios));
        let vertices = polyline_vertices(&svg);
        assert_eq!(vertices.len(), 14);
        let (x, y) = vertices[9];
        assert!((x - 0.6923).abs() < 5e-5);
        assert!((y - 0.3090).abs() < 5e-5);
    }

    #[test]
    fn two_point_curve_passes_through_half_zero() {
        let svg = render_lorenz_svg(&curve_of(&[0.0, 1.0]));
        let vertices = polyline_vertices(&svg);
        assert_eq!(vertices, vec![(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)]);
    }
}
