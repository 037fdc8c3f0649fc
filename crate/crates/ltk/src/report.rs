//! Report emission: CSV tables for statistics and evaluations, and the
//! polar-heatmap SVG.
//!
//! Column layouts are frozen; see the README for the exact schemas.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::metrics::{ErrorHistogram, EvalReport, RelationAccuracy};
use crate::stats::{
    CategoryStats, DirectionClass, DistanceBin, RelationStats, TransitionStats, TreeStats,
};

fn csv_string(records: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for record in records {
        w.write_record(&record).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf8 csv")
}

/// `category,total,mean,sd` with one row per category plus the pooled All row.
pub fn category_stats_csv(cs: &CategoryStats) -> String {
    let mut rows = vec![vec![
        "category".to_string(),
        "total".to_string(),
        "mean".to_string(),
        "sd".to_string(),
    ]];
    for r in &cs.per_category {
        rows.push(vec![
            r.category.expect("per-category row").display_name().to_string(),
            r.total.to_string(),
            format!("{:.2}", r.mean),
            format!("{:.2}", r.sd),
        ]);
    }
    rows.push(vec![
        "All".to_string(),
        cs.all.total.to_string(),
        format!("{:.2}", cs.all.mean),
        format!("{:.2}", cs.all.sd),
    ]);
    csv_string(rows)
}

/// `metric,mean,sd` for tree depth, width, and children per node.
pub fn tree_stats_csv(ts: &TreeStats) -> String {
    let rows = vec![
        vec!["metric".into(), "mean".into(), "sd".into()],
        vec![
            "depth".into(),
            format!("{:.2}", ts.depth.mean),
            format!("{:.2}", ts.depth.sd),
        ],
        vec![
            "width".into(),
            format!("{:.2}", ts.width.mean),
            format!("{:.2}", ts.width.sd),
        ],
        vec![
            "children_per_node".into(),
            format!("{:.2}", ts.children.mean),
            format!("{:.2}", ts.children.sd),
        ],
    ];
    csv_string(rows)
}

/// `metric,value,count,per_1000`: value histograms behind the tree statistics.
/// Depth and width are normalized per 1,000 pages, children per 1,000 nodes.
pub fn tree_hist_csv(ts: &TreeStats) -> String {
    let mut rows = vec![vec![
        "metric".to_string(),
        "value".to_string(),
        "count".to_string(),
        "per_1000".to_string(),
    ]];
    let sections = [
        ("depth", &ts.depth, ts.posters as f64),
        ("width", &ts.width, ts.posters as f64),
        ("children_per_node", &ts.children, ts.nodes as f64),
    ];
    for (name, stat, denom) in sections {
        for (value, count) in &stat.histogram {
            rows.push(vec![
                name.to_string(),
                value.to_string(),
                count.to_string(),
                format!("{:.2}", *count as f64 * 1000.0 / denom),
            ]);
        }
    }
    csv_string(rows)
}

/// Wide per-1,000-pages table in the appendix layout: one row per direction,
/// one column per distance bin.
pub fn heatmap_csv(rs: &RelationStats) -> String {
    let mut rows = Vec::with_capacity(9);
    let mut header = vec!["direction".to_string()];
    header.extend(DistanceBin::ALL.iter().map(|b| b.label().to_string()));
    rows.push(header);
    for dir in DirectionClass::ALL {
        let mut row = vec![dir.name().to_string()];
        for bin in DistanceBin::ALL {
            row.push(format!("{:.2}", rs.normalized[dir.index()][bin.index()]));
        }
        rows.push(row);
    }
    csv_string(rows)
}

/// Long-form raw counts: `direction,bin,count`.
pub fn heatmap_counts_csv(rs: &RelationStats) -> String {
    let mut rows = vec![vec![
        "direction".to_string(),
        "bin".to_string(),
        "count".to_string(),
    ]];
    for dir in DirectionClass::ALL {
        for bin in DistanceBin::ALL {
            rows.push(vec![
                dir.name().to_string(),
                bin.label().to_string(),
                rs.counts[dir.index()][bin.index()].to_string(),
            ]);
        }
    }
    csv_string(rows)
}

/// Wide per-1,000-pages category transition table: source rows (Root plus
/// the eight categories), target columns.
pub fn transitions_csv(tm: &TransitionStats) -> String {
    let mut rows = Vec::with_capacity(10);
    let mut header = vec!["source".to_string()];
    header.extend(
        crate::layout::Category::NON_ROOT
            .iter()
            .map(|c| c.display_name().to_string()),
    );
    rows.push(header);
    for r in 0..9 {
        let mut row = vec![TransitionStats::row_label(r).to_string()];
        for c in 0..8 {
            row.push(format!("{:.2}", tm.per_1000[r][c]));
        }
        rows.push(row);
    }
    csv_string(rows)
}

/// `poster_id,ted,steds,reds`, sorted by poster id.
pub fn per_poster_csv(report: &EvalReport) -> String {
    let mut rows = vec![vec![
        "poster_id".to_string(),
        "ted".to_string(),
        "steds".to_string(),
        "reds".to_string(),
    ]];
    for p in &report.per_poster {
        rows.push(vec![
            p.poster_id.clone(),
            p.ted.to_string(),
            format!("{:.4}", p.steds),
            format!("{:.4}", p.reds),
        ]);
    }
    csv_string(rows)
}

/// `metric,value` aggregate summary.
pub fn eval_summary_csv(report: &EvalReport) -> String {
    csv_string(vec![
        vec!["metric".into(), "value".into()],
        vec!["posters".into(), report.per_poster.len().to_string()],
        vec!["mean_ted".into(), format!("{:.4}", report.mean_ted)],
        vec!["mean_steds".into(), format!("{:.4}", report.mean_steds)],
        vec!["mean_reds".into(), format!("{:.4}", report.mean_reds)],
    ])
}

/// `bucket,correct,total,accuracy,misses` for one kind/axis breakdown.
/// Accuracy is blank for empty buckets.
pub fn accuracy_csv(acc: &RelationAccuracy, errs: &ErrorHistogram) -> String {
    assert_eq!(acc.axis, errs.axis);
    assert_eq!(acc.kind, errs.kind);
    let mut rows = vec![vec![
        "bucket".to_string(),
        "correct".to_string(),
        "total".to_string(),
        "accuracy".to_string(),
        "misses".to_string(),
    ]];
    for (i, b) in acc.buckets.iter().enumerate() {
        rows.push(vec![
            acc.axis.bucket_label(i).to_string(),
            b.correct.to_string(),
            b.total.to_string(),
            b.accuracy().map_or(String::new(), |a| format!("{a:.4}")),
            errs.misses[i].to_string(),
        ]);
    }
    let g = acc.global();
    rows.push(vec![
        "All".to_string(),
        g.correct.to_string(),
        g.total.to_string(),
        g.accuracy().map_or(String::new(), |a| format!("{a:.4}")),
        errs.total().to_string(),
    ]);
    csv_string(rows)
}

/// Canonical file stem for one breakdown, e.g. `accuracy_reading_order_direction`.
pub fn breakdown_stem(acc: &RelationAccuracy) -> String {
    format!("accuracy_{}_{}", acc.kind.name(), acc.axis.name())
}

/// Render a polar heatmap: 8 sectors (directions, clockwise from Right) by
/// 6 rings (distance bins), grayscale by `log2(1 + per-1000 count)`, darker
/// meaning more frequent. Numbers under each direction label give the mean
/// count per page in that direction.
pub fn polar_heatmap_svg(rs: &RelationStats, title: &str) -> String {
    const CX: f64 = 300.0;
    const CY: f64 = 320.0;
    const R0: f64 = 36.0;
    const RING: f64 = 30.0;
    let max_heat = rs
        .heat
        .iter()
        .flatten()
        .copied()
        .fold(0.0f64, f64::max)
        .max(1e-9);

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"680\" \
         viewBox=\"0 0 600 680\">\n",
    );
    let _ = writeln!(
        svg,
        "  <text x=\"300\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"18\">{}</text>",
        xml_escape(title)
    );
    // Annular sectors. SVG y grows downward like the image coordinates, so
    // sector angles map directly.
    for dir in DirectionClass::ALL {
        let center = dir.index() as f64 * PI / 4.0;
        let (a0, a1) = (center - PI / 8.0, center + PI / 8.0);
        for bin in DistanceBin::ALL {
            let r_in = R0 + RING * bin.index() as f64;
            let r_out = r_in + RING;
            let heat = rs.heat[dir.index()][bin.index()];
            let shade = 255 - (heat / max_heat * 255.0).round() as i64;
            let shade = shade.clamp(0, 255);
            let p = |r: f64, a: f64| (CX + r * a.cos(), CY + r * a.sin());
            let (x0, y0) = p(r_in, a0);
            let (x1, y1) = p(r_out, a0);
            let (x2, y2) = p(r_out, a1);
            let (x3, y3) = p(r_in, a1);
            let _ = writeln!(
                svg,
                "  <path d=\"M {x0:.2} {y0:.2} L {x1:.2} {y1:.2} \
                 A {r_out:.2} {r_out:.2} 0 0 1 {x2:.2} {y2:.2} \
                 L {x3:.2} {y3:.2} A {r_in:.2} {r_in:.2} 0 0 0 {x0:.2} {y0:.2} Z\" \
                 fill=\"rgb({shade},{shade},{shade})\" stroke=\"#999\" stroke-width=\"0.5\"/>"
            );
        }
    }
    // Direction labels with mean counts per page.
    for dir in DirectionClass::ALL {
        let angle = dir.index() as f64 * PI / 4.0;
        let r = R0 + RING * DistanceBin::COUNT as f64 + 24.0;
        let x = CX + r * angle.cos();
        let y = CY + r * angle.sin();
        let _ = writeln!(
            svg,
            "  <text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            dir.name()
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\">{:.2}</text>",
            y + 13.0,
            rs.per_page_by_direction(dir)
        );
    }
    // Ring labels along the Right axis.
    for bin in DistanceBin::ALL {
        let r = R0 + RING * (bin.index() as f64 + 0.5);
        let _ = writeln!(
            svg,
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"8\" fill=\"#333\">{}</text>",
            CX + r,
            CY - 4.0,
            bin.label()
        );
    }
    let _ = writeln!(
        svg,
        "  <text x=\"300\" y=\"664\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"11\" fill=\"#555\">{} pages, {} relations; shade: log2(1 + count per 1000 pages), \
         max {:.2}</text>",
        rs.pages,
        rs.total(),
        max_heat
    );
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::DatasetSplit;
    use crate::layout::{BBox, Category, LayoutTree, Poster, RelationKind};
    use crate::metrics::{evaluate, TedLabels};
    use crate::stats::{
        category_stats, category_transitions, relation_heatmap, tree_stats, RootHandling, SdMode,
    };
    use std::collections::BTreeMap;

    fn fixture_split() -> DatasetSplit {
        let poster = Poster::new(
            "p,with,commas",
            100.0,
            100.0,
            vec![
                BBox {
                    id: 1,
                    cx: 50.0,
                    cy: 20.0,
                    w: 30.0,
                    h: 10.0,
                    category: Category::Section,
                },
                BBox {
                    id: 2,
                    cx: 50.0,
                    cy: 40.0,
                    w: 30.0,
                    h: 10.0,
                    category: Category::Text,
                },
            ],
        )
        .unwrap();
        let parent: BTreeMap<_, _> = [(1, 0), (2, 1)].into_iter().collect();
        let tree = LayoutTree::build(&[0, 1, 2], &parent, 2).unwrap();
        DatasetSplit {
            name: "fixture".into(),
            posters: vec![(poster, tree)],
            warnings: Vec::new(),
        }
    }

    #[test]
    fn category_csv_shape() {
        let split = fixture_split();
        let cs = category_stats(&split, SdMode::Population).unwrap();
        let csv = category_stats_csv(&cs);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 10); // header + 8 categories + All
        assert_eq!(lines[0], "category,total,mean,sd");
        assert!(lines[9].starts_with("All,2,2.00"));
    }

    #[test]
    fn heatmap_csv_shape() {
        let split = fixture_split();
        let rs =
            relation_heatmap(&split, RelationKind::ReadingOrder, RootHandling::Exclude).unwrap();
        let csv = heatmap_csv(&rs);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 9); // header + 8 directions
        assert!(lines[0].starts_with("direction,"));
        // The single downward pair lands in (Bottom, first bin) as 1000.00.
        let bottom = lines
            .iter()
            .find(|l| l.starts_with("Bottom,"))
            .unwrap();
        assert!(bottom.contains("1000.00"), "{bottom}");
    }

    #[test]
    fn transitions_csv_shape() {
        let split = fixture_split();
        let tm = category_transitions(&split, RelationKind::ParentChild).unwrap();
        let csv = transitions_csv(&tm);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 10); // header + Root + 8 categories
        assert!(lines[1].starts_with("Root,"));
    }

    #[test]
    fn per_poster_csv_quotes_ids() {
        let split = fixture_split();
        let (poster, tree) = &split.posters[0];
        let report = evaluate(&[(poster, tree, tree)], TedLabels::Ids);
        let csv = per_poster_csv(&report);
        assert!(csv.contains("\"p,with,commas\""));
        assert!(csv.contains("100.0000"));
    }

    #[test]
    fn svg_is_deterministic_with_48_cells() {
        let split = fixture_split();
        let rs =
            relation_heatmap(&split, RelationKind::ReadingOrder, RootHandling::Exclude).unwrap();
        let a = polar_heatmap_svg(&rs, "reading order");
        let b = polar_heatmap_svg(&rs, "reading order");
        assert_eq!(a, b);
        assert_eq!(a.matches("<path").count(), 48);
        assert!(a.contains("</svg>"));
    }

    #[test]
    fn tree_stats_csvs() {
        let split = fixture_split();
        let ts = tree_stats(&split, SdMode::Population).unwrap();
        let csv = tree_stats_csv(&ts);
        assert!(csv.lines().count() == 4);
        let hist = tree_hist_csv(&ts);
        assert!(hist.contains("depth,3,1,1000.00"));
    }
}
