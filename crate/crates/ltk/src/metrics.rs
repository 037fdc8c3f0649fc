//! Evaluation metrics: ordered tree edit distance (TED) with the STEDS and
//! REDS normalizations, and relation accuracies broken down by direction,
//! distance, and category.

use std::collections::HashSet;

use thiserror::Error;

use crate::layout::{Category, LayoutTree, NodeId, Poster, Relation, RelationKind, ROOT};
use crate::stats::{direction_between, norm_distance, DirectionClass, DistanceBin};

/// A rooted ordered tree with plain labels, the input shape for the edit
/// distance. Children order is significant.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelTree<L> {
    pub label: L,
    pub children: Vec<LabelTree<L>>,
}

impl<L> LabelTree<L> {
    pub fn new(label: L) -> Self {
        LabelTree {
            label,
            children: Vec::new(),
        }
    }

    pub fn with_children(label: L, children: Vec<LabelTree<L>>) -> Self {
        LabelTree { label, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(LabelTree::size).sum::<usize>()
    }
}

/// Postorder arrays for the Zhang-Shasha dynamic program.
struct ZsArrays<'a, L> {
    /// Node labels in postorder (0-based storage for 1-based indices).
    labels: Vec<&'a L>,
    /// lld[v] = postorder index of the leftmost leaf descendant of v (1-based).
    lld: Vec<usize>,
    /// Keyroots in increasing postorder: nodes with no node above them
    /// sharing the same leftmost leaf.
    keyroots: Vec<usize>,
}

impl<L> ZsArrays<'_, L> {
    fn label(&self, postorder: usize) -> &L {
        self.labels[postorder - 1]
    }
}

fn zs_arrays<L>(tree: &LabelTree<L>) -> ZsArrays<'_, L> {
    let n = tree.size();
    let mut labels: Vec<&L> = Vec::with_capacity(n);
    let mut lld = vec![0usize; n + 1];
    fn walk<'a, L>(node: &'a LabelTree<L>, labels: &mut Vec<&'a L>, lld: &mut Vec<usize>) -> usize {
        let mut first_child = 0usize;
        for (k, child) in node.children.iter().enumerate() {
            let child_idx = walk(child, labels, lld);
            if k == 0 {
                first_child = child_idx;
            }
        }
        labels.push(&node.label);
        let idx = labels.len(); // 1-based postorder index
        lld[idx] = if node.children.is_empty() {
            idx
        } else {
            lld[first_child]
        };
        idx
    }
    walk(tree, &mut labels, &mut lld);
    let mut keyroots = Vec::new();
    for v in 1..=n {
        if !(v + 1..=n).any(|u| lld[u] == lld[v]) {
            keyroots.push(v);
        }
    }
    ZsArrays {
        labels,
        lld,
        keyroots,
    }
}

/// Ordered tree edit distance with unit costs: insert 1, delete 1,
/// substitute 0 when the labels match and 1 otherwise. The classic
/// keyroot dynamic program; quadratic-ish, comfortable for poster-sized
/// trees.
pub fn tree_edit_distance<L: PartialEq>(a: &LabelTree<L>, b: &LabelTree<L>) -> u64 {
    let ta = zs_arrays(a);
    let tb = zs_arrays(b);
    let (m, n) = (ta.labels.len(), tb.labels.len());
    let mut td = vec![vec![0u64; n + 1]; m + 1];
    for &i in &ta.keyroots {
        for &j in &tb.keyroots {
            forest_dist(&ta, &tb, i, j, &mut td);
        }
    }
    td[m][n]
}

fn forest_dist<L: PartialEq>(
    a: &ZsArrays<'_, L>,
    b: &ZsArrays<'_, L>,
    i: usize,
    j: usize,
    td: &mut [Vec<u64>],
) {
    let li = a.lld[i];
    let lj = b.lld[j];
    let rows = i - li + 2;
    let cols = j - lj + 2;
    let mut fd = vec![vec![0u64; cols]; rows];
    for x in 1..rows {
        fd[x][0] = fd[x - 1][0] + 1;
    }
    for y in 1..cols {
        fd[0][y] = fd[0][y - 1] + 1;
    }
    for x in li..=i {
        for y in lj..=j {
            let (xi, yi) = (x - li + 1, y - lj + 1);
            if a.lld[x] == li && b.lld[y] == lj {
                let sub = if a.label(x) == b.label(y) { 0 } else { 1 };
                fd[xi][yi] = (fd[xi - 1][yi] + 1)
                    .min(fd[xi][yi - 1] + 1)
                    .min(fd[xi - 1][yi - 1] + sub);
                td[x][y] = fd[xi][yi];
            } else {
                fd[xi][yi] = (fd[xi - 1][yi] + 1)
                    .min(fd[xi][yi - 1] + 1)
                    .min(fd[a.lld[x] - li][b.lld[y] - lj] + td[x][y]);
            }
        }
    }
}

/// Which labels TED compares. Id labels make TED a pure structural
/// rearrangement distance over a shared node set (the default, under which
/// `pred == gt` is equivalent to TED 0); category labels reproduce the
/// label-based variant used by some document corpora.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TedLabels {
    #[default]
    Ids,
    Categories,
}

/// Convert a layout tree to an id-labeled ordered tree.
pub fn id_label_tree(tree: &LayoutTree) -> LabelTree<NodeId> {
    fn build(tree: &LayoutTree, id: NodeId) -> LabelTree<NodeId> {
        LabelTree {
            label: id,
            children: tree.children(id).iter().map(|&c| build(tree, c)).collect(),
        }
    }
    build(tree, ROOT)
}

/// Convert a layout tree to a category-labeled ordered tree.
pub fn category_label_tree(tree: &LayoutTree, poster: &Poster) -> LabelTree<Category> {
    fn build(tree: &LayoutTree, poster: &Poster, id: NodeId) -> LabelTree<Category> {
        let label = if id == ROOT {
            Category::Root
        } else {
            poster.bbox(id).category
        };
        LabelTree {
            label,
            children: tree
                .children(id)
                .iter()
                .map(|&c| build(tree, poster, c))
                .collect(),
        }
    }
    build(tree, poster, ROOT)
}

/// TED between two layout trees with id labels.
pub fn ted(gt: &LayoutTree, pred: &LayoutTree) -> u64 {
    tree_edit_distance(&id_label_tree(gt), &id_label_tree(pred))
}

/// TED with category labels (both trees over the same poster's boxes).
pub fn ted_categories(gt: &LayoutTree, pred: &LayoutTree, poster: &Poster) -> u64 {
    tree_edit_distance(
        &category_label_tree(gt, poster),
        &category_label_tree(pred, poster),
    )
}

/// `100 * (1 - TED / max(|T_G|, |T_P|))`; node counts include the Root.
pub fn steds(gt: &LayoutTree, pred: &LayoutTree) -> f64 {
    steds_from_ted(ted(gt, pred), gt.node_count(), pred.node_count())
}

pub fn steds_from_ted(ted: u64, gt_nodes: usize, pred_nodes: usize) -> f64 {
    100.0 * (1.0 - ted as f64 / gt_nodes.max(pred_nodes) as f64)
}

/// Levenshtein distance between two sequences (insert/delete/substitute,
/// unit costs).
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (n, m) = (a.len(), b.len());
    if n == 0 {
        return m;
    }
    let mut prev: Vec<usize> = (0..=m).collect();
    let mut cur = vec![0usize; m + 1];
    for i in 1..=n {
        cur[0] = i;
        for j in 1..=m {
            let sub = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + sub);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// `100 * (1 - LD(order_G, order_P) / max(|T_G|, |T_P|))`. Depends only on
/// the reading orders, not on parent assignments.
pub fn reds(gt: &LayoutTree, pred: &LayoutTree) -> f64 {
    let ld = levenshtein(gt.order(), pred.order());
    100.0 * (1.0 - ld as f64 / gt.node_count().max(pred.node_count()) as f64)
}

/// Axis along which relation accuracy is bucketed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakdownAxis {
    /// Eight compass sectors of the GT pair displacement.
    Direction,
    /// Six log2 bins of the GT pair normalized distance.
    Distance,
    /// Category of the successor (reading order) or child (parent-child).
    Category,
}

impl BreakdownAxis {
    pub const ALL: [BreakdownAxis; 3] = [
        BreakdownAxis::Direction,
        BreakdownAxis::Distance,
        BreakdownAxis::Category,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BreakdownAxis::Direction => "direction",
            BreakdownAxis::Distance => "distance",
            BreakdownAxis::Category => "category",
        }
    }

    pub fn bucket_count(self) -> usize {
        match self {
            BreakdownAxis::Direction => DirectionClass::COUNT,
            BreakdownAxis::Distance => DistanceBin::COUNT,
            BreakdownAxis::Category => Category::NON_ROOT.len(),
        }
    }

    pub fn bucket_label(self, idx: usize) -> &'static str {
        match self {
            BreakdownAxis::Direction => DirectionClass::ALL[idx].name(),
            BreakdownAxis::Distance => DistanceBin::ALL[idx].label(),
            BreakdownAxis::Category => Category::NON_ROOT[idx].display_name(),
        }
    }
}

/// Correct/total counters for one bucket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BucketStat {
    pub correct: u64,
    pub total: u64,
}

impl BucketStat {
    /// `None` for empty buckets.
    pub fn accuracy(&self) -> Option<f64> {
        if self.total == 0 {
            None
        } else {
            Some(self.correct as f64 / self.total as f64)
        }
    }

    pub fn misses(&self) -> u64 {
        self.total - self.correct
    }
}

/// Ratio of GT relations of one kind included in the predicted tree,
/// bucketed along one axis. Relations involving the Root are excluded, as
/// direction and distance are undefined for them.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationAccuracy {
    pub kind: RelationKind,
    pub axis: BreakdownAxis,
    pub buckets: Vec<BucketStat>,
    /// GT pairs with coincident centers, excluded from every axis so bucket
    /// sums stay comparable across axes.
    pub skipped_degenerate: u64,
}

impl RelationAccuracy {
    fn empty(kind: RelationKind, axis: BreakdownAxis) -> Self {
        RelationAccuracy {
            kind,
            axis,
            buckets: vec![BucketStat::default(); axis.bucket_count()],
            skipped_degenerate: 0,
        }
    }

    pub fn merge(&mut self, other: &RelationAccuracy) {
        assert_eq!(self.kind, other.kind);
        assert_eq!(self.axis, other.axis);
        for (a, b) in self.buckets.iter_mut().zip(&other.buckets) {
            a.correct += b.correct;
            a.total += b.total;
        }
        self.skipped_degenerate += other.skipped_degenerate;
    }

    pub fn global(&self) -> BucketStat {
        let mut g = BucketStat::default();
        for b in &self.buckets {
            g.correct += b.correct;
            g.total += b.total;
        }
        g
    }
}

/// Distribution of GT relations the prediction got wrong, bucketed along one
/// axis. Totals match `total - correct` of the corresponding accuracy table.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorHistogram {
    pub kind: RelationKind,
    pub axis: BreakdownAxis,
    pub misses: Vec<u64>,
}

impl ErrorHistogram {
    pub fn total(&self) -> u64 {
        self.misses.iter().sum()
    }
}

/// Bucket index of a GT relation along an axis, or `None` when the pair is
/// geometrically degenerate.
fn bucket_of(rel: &Relation, poster: &Poster, axis: BreakdownAxis) -> Option<usize> {
    let from = poster.geom(rel.from);
    let to = poster.geom(rel.to);
    // Degenerate pairs are excluded on every axis, keeping per-axis sums equal.
    let dir = direction_between(&from, &to).ok()?;
    let dist = norm_distance(&from, &to).ok()?;
    Some(match axis {
        BreakdownAxis::Direction => dir.index(),
        BreakdownAxis::Distance => DistanceBin::of(dist).index(),
        BreakdownAxis::Category => {
            // Successor for reading order, child for parent-child.
            let subject = match rel.kind {
                RelationKind::ReadingOrder => rel.to,
                RelationKind::ParentChild => rel.from,
            };
            Category::NON_ROOT
                .iter()
                .position(|c| *c == poster.bbox(subject).category)
                .expect("non-root category")
        }
    })
}

/// Per-bucket accuracy of GT relations of `kind` against the prediction.
///
/// A reading-order relation counts as correct only when the same pair is
/// consecutive in the predicted order; a parent-child relation only when the
/// prediction assigns the same parent.
pub fn relation_accuracy(
    gt: &LayoutTree,
    pred: &LayoutTree,
    poster: &Poster,
    kind: RelationKind,
    axis: BreakdownAxis,
) -> RelationAccuracy {
    let mut acc = RelationAccuracy::empty(kind, axis);
    let pred_set: HashSet<(NodeId, NodeId)> = pred
        .relations(false)
        .into_iter()
        .filter(|r| r.kind == kind)
        .map(|r| (r.from, r.to))
        .collect();
    for rel in gt.relations(false) {
        if rel.kind != kind {
            continue;
        }
        match bucket_of(&rel, poster, axis) {
            Some(idx) => {
                acc.buckets[idx].total += 1;
                if pred_set.contains(&(rel.from, rel.to)) {
                    acc.buckets[idx].correct += 1;
                }
            }
            None => acc.skipped_degenerate += 1,
        }
    }
    acc
}

/// Histogram of missed GT relations along one axis.
pub fn error_distribution(
    gt: &LayoutTree,
    pred: &LayoutTree,
    poster: &Poster,
    kind: RelationKind,
    axis: BreakdownAxis,
) -> ErrorHistogram {
    let mut misses = vec![0u64; axis.bucket_count()];
    let pred_set: HashSet<(NodeId, NodeId)> = pred
        .relations(false)
        .into_iter()
        .filter(|r| r.kind == kind)
        .map(|r| (r.from, r.to))
        .collect();
    for rel in gt.relations(false) {
        if rel.kind != kind {
            continue;
        }
        if let Some(idx) = bucket_of(&rel, poster, axis) {
            if !pred_set.contains(&(rel.from, rel.to)) {
                misses[idx] += 1;
            }
        }
    }
    ErrorHistogram { kind, axis, misses }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(
        "poster ids do not match: {} missing from predictions, {} not in ground truth{}",
        missing_in_pred.len(),
        extra_in_pred.len(),
        fmt_mismatch(missing_in_pred, extra_in_pred)
    )]
    IdMismatch {
        missing_in_pred: Vec<String>,
        extra_in_pred: Vec<String>,
    },
}

fn fmt_mismatch(missing: &[String], extra: &[String]) -> String {
    let mut s = String::new();
    if !missing.is_empty() {
        s.push_str(&format!("; missing: {}", missing.join(", ")));
    }
    if !extra.is_empty() {
        s.push_str(&format!("; unexpected: {}", extra.join(", ")));
    }
    s
}

/// Per-poster metric scores.
#[derive(Clone, Debug, PartialEq)]
pub struct PosterEval {
    pub poster_id: String,
    pub ted: u64,
    pub steds: f64,
    pub reds: f64,
}

/// Evaluation over a set of posters: per-poster TED/STEDS/REDS, unweighted
/// aggregate means, and relation-accuracy breakdowns for both relation kinds
/// along all three axes.
#[derive(Clone, Debug)]
pub struct EvalReport {
    /// Sorted by poster id.
    pub per_poster: Vec<PosterEval>,
    pub mean_ted: f64,
    pub mean_steds: f64,
    pub mean_reds: f64,
    pub breakdowns: Vec<RelationAccuracy>,
    pub errors: Vec<ErrorHistogram>,
}

impl EvalReport {
    pub fn breakdown(&self, kind: RelationKind, axis: BreakdownAxis) -> &RelationAccuracy {
        self.breakdowns
            .iter()
            .find(|b| b.kind == kind && b.axis == axis)
            .expect("all kind/axis combinations present")
    }

    pub fn error_histogram(&self, kind: RelationKind, axis: BreakdownAxis) -> &ErrorHistogram {
        self.errors
            .iter()
            .find(|e| e.kind == kind && e.axis == axis)
            .expect("all kind/axis combinations present")
    }
}

/// Evaluate predictions against ground truth. `pairs` holds
/// `(poster, gt_tree, pred_tree)` triples; aggregation folds in poster-id
/// order for determinism.
pub fn evaluate(pairs: &[(&Poster, &LayoutTree, &LayoutTree)], labels: TedLabels) -> EvalReport {
    let mut indices: Vec<usize> = (0..pairs.len()).collect();
    indices.sort_by(|&a, &b| pairs[a].0.poster_id.cmp(&pairs[b].0.poster_id));

    let mut per_poster = Vec::with_capacity(pairs.len());
    let mut breakdowns: Vec<RelationAccuracy> = Vec::new();
    let mut errors: Vec<ErrorHistogram> = Vec::new();
    for kind in [RelationKind::ReadingOrder, RelationKind::ParentChild] {
        for axis in BreakdownAxis::ALL {
            breakdowns.push(RelationAccuracy::empty(kind, axis));
            errors.push(ErrorHistogram {
                kind,
                axis,
                misses: vec![0; axis.bucket_count()],
            });
        }
    }

    let (mut sum_ted, mut sum_steds, mut sum_reds) = (0.0f64, 0.0f64, 0.0f64);
    for &i in &indices {
        let (poster, gt, pred) = pairs[i];
        let t = match labels {
            TedLabels::Ids => ted(gt, pred),
            TedLabels::Categories => ted_categories(gt, pred, poster),
        };
        let s = steds_from_ted(t, gt.node_count(), pred.node_count());
        let r = reds(gt, pred);
        sum_ted += t as f64;
        sum_steds += s;
        sum_reds += r;
        per_poster.push(PosterEval {
            poster_id: poster.poster_id.clone(),
            ted: t,
            steds: s,
            reds: r,
        });
        let mut slot = 0;
        for kind in [RelationKind::ReadingOrder, RelationKind::ParentChild] {
            for axis in BreakdownAxis::ALL {
                let acc = relation_accuracy(gt, pred, poster, kind, axis);
                breakdowns[slot].merge(&acc);
                let err = error_distribution(gt, pred, poster, kind, axis);
                for (m, e) in errors[slot].misses.iter_mut().zip(&err.misses) {
                    *m += e;
                }
                slot += 1;
            }
        }
    }
    let count = pairs.len().max(1) as f64;
    EvalReport {
        per_poster,
        mean_ted: sum_ted / count,
        mean_steds: sum_steds / count,
        mean_reds: sum_reds / count,
        breakdowns,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::BBox;
    use std::collections::BTreeMap;

    fn tree(order: &[NodeId], parents: &[(NodeId, NodeId)]) -> LayoutTree {
        let map: BTreeMap<NodeId, NodeId> = parents.iter().copied().collect();
        LayoutTree::build(order, &map, order.len() - 1).unwrap()
    }

    fn leaf(l: u32) -> LabelTree<u32> {
        LabelTree::new(l)
    }

    #[test]
    fn ted_identity() {
        let t = tree(&[0, 1, 2, 3], &[(1, 0), (2, 1), (3, 0)]);
        assert_eq!(ted(&t, &t), 0);
    }

    #[test]
    fn ted_chain_vs_flat() {
        // Root->1->2 versus Root with children [1,2]: moving node 2 up is a
        // delete+insert of one node, distance 2.
        let chain = tree(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let flat = tree(&[0, 1, 2], &[(1, 0), (2, 0)]);
        assert_eq!(ted(&chain, &flat), 2);
        assert_eq!(ted(&flat, &chain), 2);
    }

    #[test]
    fn ted_disjoint_labels_same_shape() {
        // Same shape, totally disjoint labels: every node substitutes.
        let a = LabelTree::with_children(1u32, vec![leaf(2), leaf(3)]);
        let b = LabelTree::with_children(10u32, vec![leaf(20), leaf(30)]);
        assert_eq!(tree_edit_distance(&a, &b), 3);
    }

    #[test]
    fn ted_sibling_order_matters() {
        let a = LabelTree::with_children(0u32, vec![leaf(1), leaf(2)]);
        let b = LabelTree::with_children(0u32, vec![leaf(2), leaf(1)]);
        // Ordered TED must pay to swap siblings.
        assert!(tree_edit_distance(&a, &b) > 0);
    }

    #[test]
    fn steds_formula() {
        let t = tree(&[0, 1, 2], &[(1, 0), (2, 1)]);
        assert_eq!(steds(&t, &t), 100.0);
        let flat = tree(&[0, 1, 2], &[(1, 0), (2, 0)]);
        let d = ted(&t, &flat);
        assert_eq!(steds(&t, &flat), 100.0 * (1.0 - d as f64 / 3.0));
    }

    #[test]
    fn levenshtein_basics() {
        assert_eq!(levenshtein(&[0, 1, 2, 3, 4], &[0, 1, 3, 2, 4]), 2);
        assert_eq!(levenshtein::<usize>(&[], &[1, 2]), 2);
        assert_eq!(levenshtein(&[1, 2, 3], &[1, 2, 3]), 0);
    }

    #[test]
    fn reds_swap_example() {
        let gt = tree(&[0, 1, 2, 3, 4], &[(1, 0), (2, 0), (3, 0), (4, 0)]);
        let pred = tree(&[0, 1, 3, 2, 4], &[(1, 0), (2, 0), (3, 0), (4, 0)]);
        assert_eq!(reds(&gt, &pred), 60.0);
        assert_eq!(reds(&gt, &gt), 100.0);
    }

    #[test]
    fn reds_ignores_parents_steds_does_not() {
        let gt = tree(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let pred = tree(&[0, 1, 2], &[(1, 0), (2, 0)]);
        assert_eq!(reds(&gt, &pred), 100.0);
        assert!(steds(&gt, &pred) < 100.0);
    }

    fn grid_poster(n: usize) -> Poster {
        // Boxes in a vertical stack, 30 units apart.
        Poster::new(
            "p",
            200.0,
            400.0,
            (1..=n)
                .map(|id| BBox {
                    id,
                    cx: 100.0,
                    cy: 30.0 * id as f64,
                    w: 40.0,
                    h: 20.0,
                    category: if id == 1 {
                        Category::Section
                    } else {
                        Category::Text
                    },
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn relation_accuracy_perfect_prediction() {
        let poster = grid_poster(3);
        let gt = tree(&[0, 1, 2, 3], &[(1, 0), (2, 1), (3, 1)]);
        for kind in [RelationKind::ReadingOrder, RelationKind::ParentChild] {
            for axis in BreakdownAxis::ALL {
                let acc = relation_accuracy(&gt, &gt, &poster, kind, axis);
                for b in &acc.buckets {
                    assert_eq!(b.correct, b.total);
                }
                assert!(acc.global().total > 0);
                assert_eq!(acc.global().accuracy(), Some(1.0));
            }
        }
    }

    #[test]
    fn relation_accuracy_single_broken_pair() {
        let poster = grid_poster(3);
        let gt = tree(&[0, 1, 2, 3], &[(1, 0), (2, 1), (3, 1)]);
        // Swap the order of 2 and 3: RO pairs (1,2),(2,3) both break; the
        // non-root pair set loses exactly the buckets they fall in.
        let pred = tree(&[0, 1, 3, 2], &[(1, 0), (2, 1), (3, 1)]);
        let acc = relation_accuracy(
            &gt,
            &pred,
            &poster,
            RelationKind::ReadingOrder,
            BreakdownAxis::Direction,
        );
        let g = acc.global();
        assert_eq!(g.total, 2);
        assert_eq!(g.correct, 0);
        // Parent assignments are untouched.
        let pc = relation_accuracy(
            &gt,
            &pred,
            &poster,
            RelationKind::ParentChild,
            BreakdownAxis::Direction,
        );
        assert_eq!(pc.global().accuracy(), Some(1.0));
    }

    #[test]
    fn direction_axis_has_paper_table_columns() {
        let expected = [
            "Right",
            "Bottom-Right",
            "Bottom",
            "Bottom-Left",
            "Left",
            "Top-Left",
            "Top",
            "Top-Right",
        ];
        for (i, name) in expected.iter().enumerate() {
            assert_eq!(BreakdownAxis::Direction.bucket_label(i), *name);
        }
    }

    #[test]
    fn error_distribution_matches_accuracy_misses() {
        let poster = grid_poster(4);
        let gt = tree(&[0, 1, 2, 3, 4], &[(1, 0), (2, 1), (3, 1), (4, 1)]);
        let pred = tree(&[0, 1, 3, 2, 4], &[(1, 0), (3, 1), (2, 3), (4, 2)]);
        for kind in [RelationKind::ReadingOrder, RelationKind::ParentChild] {
            for axis in BreakdownAxis::ALL {
                let acc = relation_accuracy(&gt, &pred, &poster, kind, axis);
                let err = error_distribution(&gt, &pred, &poster, kind, axis);
                assert_eq!(err.total(), acc.global().misses());
                for (b, m) in acc.buckets.iter().zip(&err.misses) {
                    assert_eq!(b.misses(), *m);
                }
            }
        }
    }

    #[test]
    fn error_distribution_single_upward_parent_miss() {
        // GT parent of box 2 is box 1, directly above it; prediction attaches
        // it elsewhere, producing exactly one Top-direction miss.
        let poster = grid_poster(3);
        let gt = tree(&[0, 1, 2, 3], &[(1, 0), (2, 1), (3, 2)]);
        let pred = tree(&[0, 1, 2, 3], &[(1, 0), (2, 0), (3, 2)]);
        let err = error_distribution(
            &gt,
            &pred,
            &poster,
            RelationKind::ParentChild,
            BreakdownAxis::Direction,
        );
        assert_eq!(err.total(), 1);
        assert_eq!(err.misses[DirectionClass::Top.index()], 1);
    }

    #[test]
    fn bucket_sums_equal_across_axes() {
        let poster = grid_poster(4);
        let gt = tree(&[0, 1, 2, 3, 4], &[(1, 0), (2, 1), (3, 1), (4, 3)]);
        let pred = tree(&[0, 1, 3, 4, 2], &[(1, 0), (2, 1), (3, 1), (4, 3)]);
        for kind in [RelationKind::ReadingOrder, RelationKind::ParentChild] {
            let globals: Vec<BucketStat> = BreakdownAxis::ALL
                .iter()
                .map(|&axis| relation_accuracy(&gt, &pred, &poster, kind, axis).global())
                .collect();
            assert_eq!(globals[0], globals[1]);
            assert_eq!(globals[1], globals[2]);
        }
    }

    #[test]
    fn evaluate_aggregates_means() {
        let poster = grid_poster(3);
        let gt = tree(&[0, 1, 2, 3], &[(1, 0), (2, 1), (3, 1)]);
        let report = evaluate(&[(&poster, &gt, &gt)], TedLabels::Ids);
        assert_eq!(report.mean_ted, 0.0);
        assert_eq!(report.mean_steds, 100.0);
        assert_eq!(report.mean_reds, 100.0);
        assert_eq!(report.per_poster.len(), 1);
        // STEDS internal consistency on every poster.
        for p in &report.per_poster {
            assert_eq!(
                p.steds,
                steds_from_ted(p.ted, gt.node_count(), gt.node_count())
            );
        }
    }
}
