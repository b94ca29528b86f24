//! CSV, SVG, and manifest emission.
//!
//! Numeric cells use Rust's shortest round-trip decimal formatting so
//! byte-equality of outputs is a meaningful determinism check. Files are
//! written to a temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::belief::BenefitTrajectory;
use crate::error::Result;
use crate::experiments::{EpisodeRecord, ExperimentConfig, FigureCurve, SummaryStats};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `t, pool, mean, variance, expected_benefit` rows, optionally extended
/// with the per-step cost and the strict continuation flag.
pub fn trajectory_csv(trajectory: &BenefitTrajectory, cost: Option<&crate::belief::CostFunction>) -> String {
    let mut out = String::new();
    match cost {
        Some(_) => out.push_str("t,pool,mean,variance,expected_benefit,cost,continue_flag\n"),
        None => out.push_str("t,pool,mean,variance,expected_benefit\n"),
    }
    for step in &trajectory.steps {
        match cost {
            Some(c) => {
                let cost_t = c.at(step.t);
                let cont = step.expected_benefit > cost_t + crate::belief::STOP_TIE_TOL;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    step.t, step.pool, step.mean, step.variance, step.expected_benefit, cost_t, cont
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    step.t, step.pool, step.mean, step.variance, step.expected_benefit
                );
            }
        }
    }
    out
}

pub fn pmf_csv(pmf: &[f64]) -> String {
    let mut out = String::from("t,probability\n");
    for (idx, p) in pmf.iter().enumerate() {
        let _ = writeln!(out, "{},{}", idx + 1, p);
    }
    out
}

pub fn summary_csv(stats: &SummaryStats) -> String {
    let mut out = String::from(
        "reps,explained,abandoned,exhausted,explained_rate,abandoned_rate,exhausted_rate,\
         success_time_mean,success_time_var,success_time_se,net_payoff_mean\n",
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{}",
        stats.reps,
        stats.explained,
        stats.abandoned,
        stats.exhausted,
        stats.explained_rate(),
        stats.abandoned_rate(),
        stats.exhausted_rate(),
        stats.success_time_mean,
        stats.success_time_var,
        stats.success_time_se,
        stats.net_payoff_mean
    );
    out
}

pub fn episodes_csv(episodes: &[EpisodeRecord]) -> String {
    let mut out = String::from("rep,outcome,t_final,explanatory_node,net_payoff,path_length\n");
    for e in episodes {
        let node = e
            .explanatory_node
            .map(|n| n.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.rep, e.outcome, e.t_final, node, e.net_payoff, e.path_length
        );
    }
    out
}

/// Per-curve long-form CSV: `label, t, expected_benefit`.
pub fn figure_csv(curves: &[FigureCurve]) -> String {
    let mut out = String::from("label,t,expected_benefit\n");
    for curve in curves {
        for step in &curve.trajectory.steps {
            let _ = writeln!(out, "{},{},{}", curve.label, step.t, step.expected_benefit);
        }
    }
    out
}

/// Provenance manifest written beside every experiment output.
pub fn manifest_json(config: &ExperimentConfig) -> Result<String> {
    let value = serde_json::json!({
        "config": config,
        "master_seed": config.seed,
        "version": VERSION,
    });
    Ok(format!("{:#}\n", value))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    write_atomic(path, contents.as_bytes())
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 130.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Minimal polyline overlay chart of the curves, with axes and a legend.
pub fn figure_svg(curves: &[FigureCurve], title: &str) -> String {
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let t_max = curves
        .iter()
        .flat_map(|c| c.trajectory.steps.last())
        .map(|s| s.t)
        .max()
        .unwrap_or(1) as f64;
    let y_max = curves
        .iter()
        .flat_map(|c| c.trajectory.steps.iter())
        .map(|s| s.expected_benefit)
        .fold(0.0f64, f64::max)
        .max(1e-12);

    let x = |t: f64| MARGIN_LEFT + (t - 1.0) / (t_max - 1.0).max(1.0) * plot_w;
    let y = |v: f64| MARGIN_TOP + (1.0 - v / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="14" font-family="sans-serif" font-size="13">{}</text>"#,
        MARGIN_LEFT, title
    );
    // axes
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">t</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">E(B_t)</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    // tick labels at the extremes
    let _ = writeln!(
        svg,
        r#"<text x="{x0}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">1</text>"#,
        y0 + 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w,
        y0 + 14.0,
        t_max
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        MARGIN_TOP + 4.0,
        y_max
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">0</text>"#,
        x0 - 4.0,
        y0 + 4.0
    );

    for (idx, curve) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let points: Vec<String> = curve
            .trajectory
            .steps
            .iter()
            .map(|s| format!("{:.2},{:.2}", x(s.t as f64), y(s.expected_benefit)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = MARGIN_TOP + 16.0 * idx as f64 + 10.0;
        let lx = MARGIN_LEFT + plot_w + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>"#,
            lx + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 24.0,
            ly + 4.0,
            curve.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::{benefit_trajectory, CostFunction, OverlapPrior};
    use crate::experiments::reproduce_figure1;

    #[test]
    fn trajectory_csv_columns() {
        let prior = OverlapPrior::uniform(10).unwrap();
        let tr = benefit_trajectory(&prior, 10, 1.0, 3).unwrap();
        let csv = trajectory_csv(&tr, Some(&CostFunction::Constant { c: 0.3 }));
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,pool,mean,variance,expected_benefit,cost,continue_flag"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "1");
        assert_eq!(first[1], "9");
        assert!((first[2].parse::<f64>().unwrap() - 4.5).abs() < 1e-12);
        assert_eq!(first[5], "0.3");
        assert_eq!(first[6], "true");
    }

    #[test]
    fn svg_has_one_polyline_per_curve() {
        let curves = reproduce_figure1(&[10, 20], 1.0, 9).unwrap();
        let svg = figure_svg(&curves, "benefit decay");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("N_R=10"));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn atomic_write_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_file(&path, "a,b\n1,2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n1,2\n");
    }
}
