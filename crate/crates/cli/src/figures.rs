use std::fmt::Write;

use wpd_core::period::ClimatologyProfile;
use wpd_core::series::MONTH_NAMES;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

/// Twelve-month line chart of the climatology, peaks drawn as filled dots.
pub fn climatology_svg(profile: &ClimatologyProfile) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let max = profile.monthly.iter().fold(0.0f64, |m, v| m.max(*v));
    let top = if max > 0.0 { nice_ceiling(max) } else { 1.0 };
    let x = |m: usize| LEFT + plot_w * (m as f64 + 0.5) / 12.0;
    let y = |v: f64| TOP + plot_h * (1.0 - v / top);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="18" font-family="sans-serif" font-size="13" text-anchor="middle">monthly rainfall ({:?})</text>"#,
        LEFT + plot_w / 2.0,
        profile.aggregation
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.1}" y1="{TOP:.1}" x2="{LEFT:.1}" y2="{:.1}" stroke="black"/>"#,
        TOP + plot_h
    );
    for tick in 0..=4 {
        let v = top * f64::from(tick) / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y(v) + 3.0,
            format_tick(v)
        );
    }
    for (m, name) in MONTH_NAMES.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            x(m),
            TOP + plot_h + 14.0,
            &name[..3]
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle" transform="rotate(-90 14 {:.1})">mm/month</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let points: Vec<String> = profile
        .monthly
        .iter()
        .enumerate()
        .map(|(m, v)| format!("{:.2},{:.2}", x(m), y(*v)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline class="profile" fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    );
    for (m, v) in profile.monthly.iter().enumerate() {
        let peak = profile.peak_months.contains(&(m as u8 + 1));
        let _ = writeln!(
            svg,
            r#"<circle class="{}" data-month="{}" cx="{:.2}" cy="{:.2}" r="{}" fill="{}" stroke="black"/>"#,
            if peak { "peak" } else { "month" },
            m + 1,
            x(m),
            y(*v),
            if peak { 4 } else { 2 },
            if peak { "black" } else { "white" }
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn nice_ceiling(v: f64) -> f64 {
    let mag = 10f64.powf(v.log10().floor());
    for step in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if step * mag >= v {
            return step * mag;
        }
    }
    10.0 * mag
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use wpd_core::period::Aggregation;

    #[test]
    fn peaks_are_marked() {
        let mut monthly = [100.0; 12];
        monthly[5] = 400.0;
        monthly[11] = 380.0;
        let p = ClimatologyProfile {
            monthly,
            aggregation: Aggregation::Median,
            peak_months: vec![6, 12],
        };
        let svg = climatology_svg(&p);
        assert_eq!(svg.matches(r#"class="peak""#).count(), 2);
        assert_eq!(svg.matches("<circle").count(), 12);
        assert!(svg.contains(r#"data-month="6" cx"#));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn ceilings() {
        assert_eq!(nice_ceiling(430.0), 500.0);
        assert_eq!(nice_ceiling(100.0), 100.0);
        assert_eq!(nice_ceiling(0.3), 0.5);
        assert_eq!(format_tick(125.0), "125");
        assert_eq!(format_tick(0.25), "0.25");
    }

    #[test]
    fn all_zero_profile_renders() {
        let p = ClimatologyProfile {
            monthly: [0.0; 12],
            aggregation: Aggregation::Mean,
            peak_months: vec![],
        };
        assert!(!climatology_svg(&p).contains("NaN"));
    }
}
