//! Critical-difference diagram rendering.
//!
//! The standard layout: a horizontal axis over the rank range 1..k, one tick
//! per method at its average rank with the method name drawn to the side,
//! a CD ruler above the axis, and thick connector bars joining groups of
//! methods whose pairwise average-rank differences stay below the critical
//! difference. Output is byte-deterministic for fixed inputs.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 150.0;
const AXIS_Y: f64 = 70.0;
const RULER_Y: f64 = 32.0;
const BAR_SPACING: f64 = 7.0;
const LABEL_SPACING: f64 = 18.0;

/// Maximal index groups `(i, j)` over ranks sorted ascending where
/// `ranks[j] - ranks[i] < cd` and `j > i`.
pub fn significance_groups(sorted_ranks: &[f64], cd: f64) -> Vec<(usize, usize)> {
    let k = sorted_ranks.len();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        let mut j = i;
        while j + 1 < k && sorted_ranks[j + 1] - sorted_ranks[i] < cd {
            j += 1;
        }
        if j > i && groups.last().is_none_or(|&(_, pj)| j > pj) {
            groups.push((i, j));
        }
    }
    groups
}

/// Render the diagram as a standalone SVG document.
pub fn render_cd_plot(method_names: &[String], avg_ranks: &[f64], cd: f64) -> Result<String> {
    let k = method_names.len();
    if k < 2 || avg_ranks.len() != k {
        return Err(Error::Contract(
            "need at least two methods with matching rank list".into(),
        ));
    }
    if !(cd.is_finite() && cd > 0.0) {
        return Err(Error::Contract("critical difference must be positive".into()));
    }

    // methods sorted by average rank, best (lowest) first
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        avg_ranks[a]
            .partial_cmp(&avg_ranks[b])
            .expect("finite ranks")
            .then(a.cmp(&b))
    });
    let sorted_ranks: Vec<f64> = order.iter().map(|&i| avg_ranks[i]).collect();
    let groups = significance_groups(&sorted_ranks, cd);

    let span = (k - 1) as f64;
    let x_of = |rank: f64| MARGIN + (rank - 1.0) / span * (WIDTH - 2.0 * MARGIN);

    let n_left = k.div_ceil(2);
    let label_top = AXIS_Y + 14.0 + groups.len() as f64 * BAR_SPACING;
    let height = label_top + n_left as f64 * LABEL_SPACING + 16.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height:.2}\" viewBox=\"0 0 {WIDTH} {height:.2}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{height:.2}\" fill=\"white\"/>"
    );

    // axis with integer ticks
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{AXIS_Y}\" x2=\"{:.2}\" y2=\"{AXIS_Y}\" stroke=\"black\" stroke-width=\"1\"/>",
        x_of(1.0),
        x_of(k as f64)
    );
    for tick in 1..=k {
        let x = x_of(tick as f64);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{AXIS_Y}\" stroke=\"black\" stroke-width=\"1\"/>",
            AXIS_Y - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{tick}</text>",
            AXIS_Y - 9.0
        );
    }

    // CD ruler
    let ruler_end = x_of((1.0 + cd).min(k as f64));
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{RULER_Y}\" x2=\"{ruler_end:.2}\" y2=\"{RULER_Y}\" stroke=\"black\" stroke-width=\"1\"/>",
        x_of(1.0)
    );
    for x in [x_of(1.0), ruler_end] {
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            RULER_Y - 4.0,
            RULER_Y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"start\">CD = {cd:.4}</text>",
        ruler_end + 6.0,
        RULER_Y + 4.0
    );

    // connector bars for indistinguishable groups
    for (row, &(i, j)) in groups.iter().enumerate() {
        let y = AXIS_Y + 8.0 + row as f64 * BAR_SPACING;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"3\"/>",
            x_of(sorted_ranks[i]) - 2.0,
            x_of(sorted_ranks[j]) + 2.0
        );
    }

    // method stems and labels: best half on the left, rest on the right
    for (position, &method) in order.iter().enumerate() {
        let rank = avg_ranks[method];
        let x = x_of(rank);
        let left = position < n_left;
        let slot = if left { position } else { k - 1 - position };
        let label_y = label_top + slot as f64 * LABEL_SPACING;
        let (label_x, anchor) = if left {
            (MARGIN - 12.0, "end")
        } else {
            (WIDTH - MARGIN + 12.0, "start")
        };
        let _ = writeln!(
            svg,
            "<polyline points=\"{x:.2},{AXIS_Y} {x:.2},{label_y:.2} {label_x:.2},{label_y:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"{anchor}\">{} ({rank:.3})</text>",
            if left { label_x - 4.0 } else { label_x + 4.0 },
            label_y - 3.0,
            xml_escape(&method_names[method])
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Render and write the SVG to a file.
pub fn write_cd_plot(
    path: impl AsRef<Path>,
    method_names: &[String],
    avg_ranks: &[f64],
    cd: f64,
) -> Result<()> {
    let path = path.as_ref();
    let svg = render_cd_plot(method_names, avg_ranks, cd)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
