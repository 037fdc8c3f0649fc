//! Dataset analysis: direction classes, normalized distances, relation
//! heatmaps, tree shape statistics, and category transition tables.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::ingest::DatasetSplit;
use crate::layout::{BoxGeom, Category, NodeId, RelationKind, ROOT};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    /// Direction and distance are undefined when the two centers coincide.
    #[error("degenerate direction: identical centers")]
    DegenerateDirection,
    #[error("empty split: no posters to aggregate")]
    EmptySplit,
}

/// One of eight compass sectors, clockwise from Right, with image-coordinate
/// y pointing down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DirectionClass {
    Right,
    BottomRight,
    Bottom,
    BottomLeft,
    Left,
    TopLeft,
    Top,
    TopRight,
}

impl DirectionClass {
    pub const COUNT: usize = 8;

    pub const ALL: [DirectionClass; 8] = [
        DirectionClass::Right,
        DirectionClass::BottomRight,
        DirectionClass::Bottom,
        DirectionClass::BottomLeft,
        DirectionClass::Left,
        DirectionClass::TopLeft,
        DirectionClass::Top,
        DirectionClass::TopRight,
    ];

    pub fn index(self) -> usize {
        match self {
            DirectionClass::Right => 0,
            DirectionClass::BottomRight => 1,
            DirectionClass::Bottom => 2,
            DirectionClass::BottomLeft => 3,
            DirectionClass::Left => 4,
            DirectionClass::TopLeft => 5,
            DirectionClass::Top => 6,
            DirectionClass::TopRight => 7,
        }
    }

    pub fn from_index(i: usize) -> Option<DirectionClass> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            DirectionClass::Right => "Right",
            DirectionClass::BottomRight => "Bottom-Right",
            DirectionClass::Bottom => "Bottom",
            DirectionClass::BottomLeft => "Bottom-Left",
            DirectionClass::Left => "Left",
            DirectionClass::TopLeft => "Top-Left",
            DirectionClass::Top => "Top",
            DirectionClass::TopRight => "Top-Right",
        }
    }
}

/// Direction class of a displacement `(dx, dy)`, y growing downward.
///
/// The angle is `arctan2(dy, dx)`, increasing clockwise in image coordinates,
/// and the class is `floor((((theta + 2pi) mod 2pi) + pi/8) / (pi/4)) mod 8`,
/// so each sector spans 45 degrees centered on its compass direction.
/// Displacements exactly on a sector boundary fall into the higher class
/// index via the floor; there is no epsilon adjustment.
pub fn direction_class(dx: f64, dy: f64) -> Result<DirectionClass, StatsError> {
    if dx == 0.0 && dy == 0.0 {
        return Err(StatsError::DegenerateDirection);
    }
    let theta = dy.atan2(dx);
    let a = ((theta.rem_euclid(TAU) + PI / 8.0) / (PI / 4.0)).floor() as usize % 8;
    Ok(DirectionClass::from_index(a).expect("class index in 0..8"))
}

/// Direction class of the displacement from one box center to another.
pub fn direction_between(from: &BoxGeom, to: &BoxGeom) -> Result<DirectionClass, StatsError> {
    direction_class(to.cx - from.cx, to.cy - from.cy)
}

/// Center distance normalized by the larger extent along the dominant axis:
/// `|dx| / max(w_i, w_j)` when `|dx| >= |dy|`, else `|dy| / max(h_i, h_j)`.
pub fn norm_distance(from: &BoxGeom, to: &BoxGeom) -> Result<f64, StatsError> {
    let dx = to.cx - from.cx;
    let dy = to.cy - from.cy;
    if dx == 0.0 && dy == 0.0 {
        return Err(StatsError::DegenerateDirection);
    }
    if dx.abs() >= dy.abs() {
        Ok(dx.abs() / from.w.max(to.w))
    } else {
        Ok(dy.abs() / from.h.max(to.h))
    }
}

/// Log2-scale distance bin: (0,1], (1,2], (2,4], (4,8], (8,16], (16,inf).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistanceBin {
    Le1,
    Le2,
    Le4,
    Le8,
    Le16,
    Gt16,
}

impl DistanceBin {
    pub const COUNT: usize = 6;

    pub const ALL: [DistanceBin; 6] = [
        DistanceBin::Le1,
        DistanceBin::Le2,
        DistanceBin::Le4,
        DistanceBin::Le8,
        DistanceBin::Le16,
        DistanceBin::Gt16,
    ];

    /// Bin of a positive normalized distance.
    pub fn of(d: f64) -> DistanceBin {
        if d <= 1.0 {
            DistanceBin::Le1
        } else if d <= 2.0 {
            DistanceBin::Le2
        } else if d <= 4.0 {
            DistanceBin::Le4
        } else if d <= 8.0 {
            DistanceBin::Le8
        } else if d <= 16.0 {
            DistanceBin::Le16
        } else {
            DistanceBin::Gt16
        }
    }

    pub fn index(self) -> usize {
        match self {
            DistanceBin::Le1 => 0,
            DistanceBin::Le2 => 1,
            DistanceBin::Le4 => 2,
            DistanceBin::Le8 => 3,
            DistanceBin::Le16 => 4,
            DistanceBin::Gt16 => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DistanceBin::Le1 => "(0, 1]",
            DistanceBin::Le2 => "(1, 2]",
            DistanceBin::Le4 => "(2, 4]",
            DistanceBin::Le8 => "(4, 8]",
            DistanceBin::Le16 => "(8, 16]",
            DistanceBin::Gt16 => "(16, inf)",
        }
    }
}

/// How relations touching the Root enter geometric aggregations. The
/// accuracy metrics always exclude them; for the heatmaps the default is to
/// exclude as well, with an opt-in that gives the Root the page geometry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootHandling {
    #[default]
    Exclude,
    IncludeWithPageGeometry,
}

/// Direction x distance histogram over a split, for one relation kind.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationStats {
    pub kind: RelationKind,
    /// Raw pair counts per (direction, distance bin).
    pub counts: [[u64; DistanceBin::COUNT]; DirectionClass::COUNT],
    /// Number of posters aggregated.
    pub pages: usize,
    /// `counts * 1000 / pages`.
    pub normalized: [[f64; DistanceBin::COUNT]; DirectionClass::COUNT],
    /// `log2(1 + normalized)`, the heatmap shading value.
    pub heat: [[f64; DistanceBin::COUNT]; DirectionClass::COUNT],
    /// Pairs dropped because their centers coincide.
    pub skipped_degenerate: u64,
}

impl RelationStats {
    fn from_counts(
        kind: RelationKind,
        counts: [[u64; DistanceBin::COUNT]; DirectionClass::COUNT],
        pages: usize,
        skipped_degenerate: u64,
    ) -> RelationStats {
        let mut normalized = [[0.0; DistanceBin::COUNT]; DirectionClass::COUNT];
        let mut heat = [[0.0; DistanceBin::COUNT]; DirectionClass::COUNT];
        for d in 0..DirectionClass::COUNT {
            for b in 0..DistanceBin::COUNT {
                normalized[d][b] = counts[d][b] as f64 * 1000.0 / pages as f64;
                heat[d][b] = (1.0 + normalized[d][b]).log2();
            }
        }
        RelationStats {
            kind,
            counts,
            pages,
            normalized,
            heat,
            skipped_degenerate,
        }
    }

    /// Total raw count across all cells.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Mean count per page for one direction (row sum / pages).
    pub fn per_page_by_direction(&self, dir: DirectionClass) -> f64 {
        let row: u64 = self.counts[dir.index()].iter().sum();
        row as f64 / self.pages as f64
    }
}

/// Aggregate relations of one kind into a direction x distance histogram,
/// normalized per 1,000 pages.
pub fn relation_heatmap(
    split: &DatasetSplit,
    kind: RelationKind,
    root_handling: RootHandling,
) -> Result<RelationStats, StatsError> {
    if split.posters.is_empty() {
        return Err(StatsError::EmptySplit);
    }
    let mut counts = [[0u64; DistanceBin::COUNT]; DirectionClass::COUNT];
    let mut skipped = 0u64;
    for (poster, tree) in &split.posters {
        let include_root = root_handling == RootHandling::IncludeWithPageGeometry;
        for rel in tree.relations(include_root) {
            if rel.kind != kind {
                continue;
            }
            let from = poster.geom(rel.from);
            let to = poster.geom(rel.to);
            match (direction_between(&from, &to), norm_distance(&from, &to)) {
                (Ok(dir), Ok(d)) => {
                    counts[dir.index()][DistanceBin::of(d).index()] += 1;
                }
                _ => skipped += 1,
            }
        }
    }
    Ok(RelationStats::from_counts(
        kind,
        counts,
        split.posters.len(),
        skipped,
    ))
}

/// Population vs sample standard deviation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SdMode {
    /// Divide by n.
    #[default]
    Population,
    /// Divide by n - 1.
    Sample,
}

pub(crate) fn mean_sd(values: &[f64], mode: SdMode) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let denom = match mode {
        SdMode::Population => n as f64,
        SdMode::Sample => {
            if n > 1 {
                (n - 1) as f64
            } else {
                return (mean, 0.0);
            }
        }
    };
    (mean, (ss / denom).sqrt())
}

/// Mean, standard deviation, and a value histogram for one tree statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryStat {
    pub mean: f64,
    pub sd: f64,
    pub histogram: BTreeMap<usize, u64>,
}

/// Tree shape statistics over a split.
///
/// Depth and width are per-poster quantities (maximum nodes on a root-to-leaf
/// path, and maximum nodes at a single level); children-per-node is pooled
/// over all nodes, leaves contributing 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeStats {
    pub depth: SummaryStat,
    pub width: SummaryStat,
    pub children: SummaryStat,
    pub posters: usize,
    pub nodes: u64,
}

pub fn tree_stats(split: &DatasetSplit, sd: SdMode) -> Result<TreeStats, StatsError> {
    if split.posters.is_empty() {
        return Err(StatsError::EmptySplit);
    }
    let mut depths = Vec::with_capacity(split.posters.len());
    let mut widths = Vec::with_capacity(split.posters.len());
    let mut children: Vec<f64> = Vec::new();
    let mut depth_hist = BTreeMap::new();
    let mut width_hist = BTreeMap::new();
    let mut child_hist = BTreeMap::new();
    for (_, tree) in &split.posters {
        let d = tree.depth();
        let w = tree.width();
        depths.push(d as f64);
        widths.push(w as f64);
        *depth_hist.entry(d).or_insert(0u64) += 1;
        *width_hist.entry(w).or_insert(0u64) += 1;
        for id in 0..tree.node_count() {
            let c = tree.children(id).len();
            children.push(c as f64);
            *child_hist.entry(c).or_insert(0u64) += 1;
        }
    }
    let (dm, ds) = mean_sd(&depths, sd);
    let (wm, ws) = mean_sd(&widths, sd);
    let (cm, cs) = mean_sd(&children, sd);
    Ok(TreeStats {
        depth: SummaryStat {
            mean: dm,
            sd: ds,
            histogram: depth_hist,
        },
        width: SummaryStat {
            mean: wm,
            sd: ws,
            histogram: width_hist,
        },
        children: SummaryStat {
            mean: cm,
            sd: cs,
            histogram: child_hist,
        },
        posters: split.posters.len(),
        nodes: children.len() as u64,
    })
}

/// Totals and per-poster mean/SD for one category.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryRow {
    pub category: Option<Category>,
    pub total: u64,
    pub mean: f64,
    pub sd: f64,
}

/// Per-category element counts over a split, plus the pooled "All" row.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryStats {
    /// One row per non-Root category, in canonical order.
    pub per_category: Vec<CategoryRow>,
    /// Pooled counts across categories (`category` is `None`).
    pub all: CategoryRow,
    pub posters: usize,
}

pub fn category_stats(split: &DatasetSplit, sd: SdMode) -> Result<CategoryStats, StatsError> {
    if split.posters.is_empty() {
        return Err(StatsError::EmptySplit);
    }
    let pages = split.posters.len();
    // Per-poster count for each category, including zeros.
    let mut per_poster: Vec<Vec<f64>> = vec![Vec::with_capacity(pages); Category::NON_ROOT.len()];
    let mut all_counts = Vec::with_capacity(pages);
    for (poster, _) in &split.posters {
        let mut counts = [0u64; 8];
        for b in poster.boxes() {
            let idx = Category::NON_ROOT
                .iter()
                .position(|c| *c == b.category)
                .expect("non-root category");
            counts[idx] += 1;
        }
        for (idx, c) in counts.iter().enumerate() {
            per_poster[idx].push(*c as f64);
        }
        all_counts.push(poster.n() as f64);
    }
    let per_category = Category::NON_ROOT
        .iter()
        .zip(&per_poster)
        .map(|(&category, values)| {
            let total = values.iter().map(|v| *v as u64).sum();
            let (mean, sdev) = mean_sd(values, sd);
            CategoryRow {
                category: Some(category),
                total,
                mean,
                sd: sdev,
            }
        })
        .collect();
    let (mean, sdev) = mean_sd(&all_counts, sd);
    let all = CategoryRow {
        category: None,
        total: all_counts.iter().map(|v| *v as u64).sum(),
        mean,
        sd: sdev,
    };
    Ok(CategoryStats {
        per_category,
        all,
        posters: pages,
    })
}

/// Category-to-category transition counts for one relation kind, normalized
/// per 1,000 pages. Rows cover Root plus the eight box categories (sources);
/// columns cover the eight box categories (targets); the Root is never a
/// reading-order successor nor a child.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionStats {
    pub kind: RelationKind,
    /// Row 0 is Root; rows 1..=8 follow `Category::NON_ROOT` order.
    pub counts: [[u64; 8]; 9],
    pub per_1000: [[f64; 8]; 9],
    pub pages: usize,
}

impl TransitionStats {
    pub fn row_label(row: usize) -> &'static str {
        if row == 0 {
            "Root"
        } else {
            Category::NON_ROOT[row - 1].display_name()
        }
    }
}

pub fn category_transitions(
    split: &DatasetSplit,
    kind: RelationKind,
) -> Result<TransitionStats, StatsError> {
    if split.posters.is_empty() {
        return Err(StatsError::EmptySplit);
    }
    let col_of = |c: Category| -> usize {
        Category::NON_ROOT
            .iter()
            .position(|x| *x == c)
            .expect("non-root category")
    };
    let mut counts = [[0u64; 8]; 9];
    for (poster, tree) in &split.posters {
        let cat = |id: NodeId| -> Option<Category> {
            if id == ROOT {
                None
            } else {
                Some(poster.bbox(id).category)
            }
        };
        for rel in tree.relations(true) {
            if rel.kind != kind {
                continue;
            }
            // Reading order goes predecessor -> successor; parent-child pairs
            // are stored child -> parent, so the transition source is the parent.
            let (src, dst) = match kind {
                RelationKind::ReadingOrder => (rel.from, rel.to),
                RelationKind::ParentChild => (rel.to, rel.from),
            };
            let dst_cat = match cat(dst) {
                Some(c) => c,
                None => continue, // Root is never a target.
            };
            let row = match cat(src) {
                None => 0,
                Some(c) => 1 + col_of(c),
            };
            counts[row][col_of(dst_cat)] += 1;
        }
    }
    let pages = split.posters.len();
    let mut per_1000 = [[0.0; 8]; 9];
    for r in 0..9 {
        for c in 0..8 {
            per_1000[r][c] = counts[r][c] as f64 * 1000.0 / pages as f64;
        }
    }
    Ok(TransitionStats {
        kind,
        counts,
        per_1000,
        pages,
    })
}
