//! Static SVG 1.1 plots of rate regions: axes in bits/s/Hz, one polyline
//! per region, inline legend, no external references. Output bytes are a
//! pure function of the input.

use irs_regions_core::region::RatePolygon;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 176.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 9] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22",
];

fn fmt(x: f64) -> String {
    format!("{x:.3}")
}

/// Renders named regions into one SVG document.
pub fn render_regions(title: &str, regions: &[(String, &RatePolygon)]) -> String {
    let mut max_r = 0.0f64;
    for (_, region) in regions {
        for p in region.vertices() {
            max_r = max_r.max(p.r1).max(p.r2);
        }
    }
    if max_r <= 0.0 {
        max_r = 1.0;
    }
    let span = max_r * 1.05;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |r1: f64| MARGIN_LEFT + r1 / span * plot_w;
    let to_y = |r2: f64| MARGIN_TOP + (1.0 - r2 / span) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"20\" font-family=\"monospace\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        title
    ));

    // Axes with five ticks each.
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h),
        fmt(MARGIN_LEFT + plot_w),
        fmt(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h)
    ));
    for i in 0..=5 {
        let v = span * i as f64 / 5.0;
        let (x, y) = (to_x(v), to_y(v));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h),
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\" \
             text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 18.0),
            fmt(v)
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(MARGIN_LEFT - 5.0),
            fmt(y),
            fmt(MARGIN_LEFT),
            fmt(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\" \
             text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_LEFT - 8.0),
            fmt(y + 3.0),
            fmt(v)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"middle\">r1 (bps/Hz)</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 12.0)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">r2 (bps/Hz)</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0)
    ));

    for (idx, (name, region)) in regions.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points = String::new();
        for p in region.vertices() {
            points.push_str(&format!("{},{} ", fmt(to_x(p.r1)), fmt(to_y(p.r2))));
        }
        // Close the hull back to its first vertex.
        if let Some(first) = region.vertices().first() {
            points.push_str(&format!("{},{}", fmt(to_x(first.r1)), fmt(to_y(first.r2))));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
             points=\"{points}\"/>\n"
        ));
        let ly = MARGIN_TOP + 16.0 * idx as f64;
        let lx = MARGIN_LEFT + plot_w + 12.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" \
             stroke-width=\"1.5\"/>\n",
            fmt(lx),
            fmt(ly),
            fmt(lx + 18.0),
            fmt(ly)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{}</text>\n",
            fmt(lx + 24.0),
            fmt(ly + 3.0),
            name
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use irs_regions_core::region::{convex_hull, RatePair, RatePolygon};

    fn triangle() -> RatePolygon {
        convex_hull(&[RatePair::new(2.0, 0.0), RatePair::new(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn deterministic_bytes() {
        let t = triangle();
        let regions = vec![("tdma".to_owned(), &t)];
        assert_eq!(
            render_regions("demo", &regions),
            render_regions("demo", &regions)
        );
    }

    #[test]
    fn empty_input_renders_axes_only() {
        let svg = render_regions("empty", &[]);
        assert!(svg.starts_with("<svg"));
        assert!(!svg.contains("polyline"));
        assert!(svg.contains("</svg>"));
    }

    #[test]
    fn no_external_references() {
        let t = triangle();
        let regions = vec![("a".to_owned(), &t)];
        let svg = render_regions("demo", &regions);
        assert!(!svg.contains("href"));
        assert!(!svg.contains("url("));
    }
}
