use std::fmt::Write as _;

use rauzy_core::measures::{bounds_csv, bounds_grid, DimBounds};
use serde_json::json;

use crate::args::BoundsArgs;
use crate::error::CliResult;
use crate::manifest::{with_suffix, write_bytes, write_json};

pub fn run(args: &BoundsArgs) -> CliResult<()> {
    let rows = bounds_grid(args.base, args.grid)?;
    write_bytes(&with_suffix(&args.output, ".csv"), bounds_csv(&rows).as_bytes())?;
    let doc = json!({
        "schema_version": rauzy_core::SCHEMA_VERSION,
        "base": args.base,
        "grid": args.grid,
        "rows": rows,
    });
    write_json(&with_suffix(&args.output, ".json"), &doc)?;
    if args.plot {
        write_bytes(&with_suffix(&args.output, ".svg"), plot(args.base, &rows).as_bytes())?;
    }
    Ok(())
}

/// Line plot of both bound curves against `s`.
fn plot(base: u32, rows: &[DimBounds]) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let s_max = rows.last().map_or(1.0, |r| r.s);
    let x = |s: f64| pad + (w - 2.0 * pad) * s / s_max;
    let y = |d: f64| h - pad - (h - 2.0 * pad) * d;
    let line = |f: fn(&DimBounds) -> f64| {
        rows.iter()
            .map(|r| format!("{:.2},{:.2}", x(r.s), y(f(r))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut svg = String::new();
    writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##
    )
    .unwrap();
    writeln!(svg, r##"<rect width="100%" height="100%" fill="white"/>"##).unwrap();
    writeln!(
        svg,
        r##"<path d="M{pad},{pad} V{} H{}" fill="none" stroke="black"/>"##,
        h - pad,
        w - pad
    )
    .unwrap();
    writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
        line(|r| r.lower)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
        line(|r| r.upper)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<text x="{pad}" y="{}" font-size="12">s (0 to {s_max:.4}), base {base}</text>"##,
        h - 10.0
    )
    .unwrap();
    writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="12" fill="#1f77b4">lower</text>"##,
        w - 90.0,
        pad + 10.0
    )
    .unwrap();
    writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="12" fill="#d62728">upper</text>"##,
        w - 90.0,
        pad + 26.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}
