//! Core domain types: bounding boxes, posters, and DFS-ordered layout trees.
//!
//! A layout tree encodes a poster's reading order and parent-child relations
//! jointly: node 0 is the virtual Root (the poster itself), nodes `1..=N` are
//! the bounding boxes, and the depth-first traversal of the tree, visiting
//! children in stored order, reproduces the reading order exactly.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Node identifier. `0` is reserved for the virtual Root node.
pub type NodeId = usize;

/// The virtual root node representing the poster.
pub const ROOT: NodeId = 0;

/// Layout element category. `Root` is reserved for the virtual poster node
/// and never appears on a real bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Title,
    AuthorInfo,
    Section,
    Text,
    List,
    Figure,
    Table,
    Caption,
    Root,
}

impl Category {
    /// The eight categories that can appear on a real bounding box.
    pub const NON_ROOT: [Category; 8] = [
        Category::Title,
        Category::AuthorInfo,
        Category::Section,
        Category::Text,
        Category::List,
        Category::Figure,
        Category::Table,
        Category::Caption,
    ];

    /// All categories including `Root`.
    pub const ALL: [Category; 9] = [
        Category::Root,
        Category::Title,
        Category::AuthorInfo,
        Category::Section,
        Category::Text,
        Category::List,
        Category::Figure,
        Category::Table,
        Category::Caption,
    ];

    /// Compact name used in the canonical file format.
    pub fn name(self) -> &'static str {
        match self {
            Category::Title => "Title",
            Category::AuthorInfo => "AuthorInfo",
            Category::Section => "Section",
            Category::Text => "Text",
            Category::List => "List",
            Category::Figure => "Figure",
            Category::Table => "Table",
            Category::Caption => "Caption",
            Category::Root => "Root",
        }
    }

    /// Human-readable name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Category::AuthorInfo => "Author Info",
            other => other.name(),
        }
    }

    /// Parse a category string case-insensitively, ignoring spaces, hyphens,
    /// and underscores ("author info", "Author_Info", "AUTHORINFO" all map to
    /// `AuthorInfo`).
    pub fn parse(s: &str) -> Option<Category> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '-' | '_'))
            .flat_map(|c| c.to_lowercase())
            .collect();
        match norm.as_str() {
            "title" => Some(Category::Title),
            "authorinfo" => Some(Category::AuthorInfo),
            "section" => Some(Category::Section),
            "text" => Some(Category::Text),
            "list" => Some(Category::List),
            "figure" => Some(Category::Figure),
            "table" => Some(Category::Table),
            "caption" => Some(Category::Caption),
            "root" => Some(Category::Root),
            _ => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A layout element: center position, size, and category.
#[derive(Clone, Debug, PartialEq)]
pub struct BBox {
    /// Dense index in `1..=N`, unique within a poster.
    pub id: NodeId,
    /// Center x coordinate (same unit as the page, typically pixels).
    pub cx: f64,
    /// Center y coordinate; y grows downward.
    pub cy: f64,
    /// Width, strictly positive.
    pub w: f64,
    /// Height, strictly positive.
    pub h: f64,
    /// Element category; never `Root`.
    pub category: Category,
}

impl BBox {
    pub fn geom(&self) -> BoxGeom {
        BoxGeom {
            cx: self.cx,
            cy: self.cy,
            w: self.w,
            h: self.h,
        }
    }

    /// Horizontal extent `[left, right]`.
    pub fn x_extent(&self) -> (f64, f64) {
        (self.cx - self.w / 2.0, self.cx + self.w / 2.0)
    }
}

/// Plain center-and-size geometry, detached from identity and category.
/// Used for direction/distance computations where the virtual Root also
/// needs a geometry (the full page region).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxGeom {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

impl From<&BBox> for BoxGeom {
    fn from(b: &BBox) -> Self {
        b.geom()
    }
}

/// A poster page with its bounding boxes.
#[derive(Clone, Debug, PartialEq)]
pub struct Poster {
    pub poster_id: String,
    pub page_w: f64,
    pub page_h: f64,
    /// Boxes sorted by id; ids are dense `1..=N`.
    boxes: Vec<BBox>,
}

/// Hard validation failures for domain objects.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("poster {poster_id}: page extents must be positive and finite, got {page_w}x{page_h}")]
    BadPage {
        poster_id: String,
        page_w: f64,
        page_h: f64,
    },
    #[error("poster {poster_id}: must contain at least one box")]
    EmptyPoster { poster_id: String },
    #[error("poster {poster_id}: box {id} has non-positive or non-finite extent {w}x{h}")]
    BadExtent {
        poster_id: String,
        id: NodeId,
        w: f64,
        h: f64,
    },
    #[error("poster {poster_id}: box {id} has non-finite center")]
    BadCenter { poster_id: String, id: NodeId },
    #[error("poster {poster_id}: box ids are not dense 1..={n}: {detail}")]
    BadIds {
        poster_id: String,
        n: usize,
        detail: String,
    },
    #[error("poster {poster_id}: box {id} uses the reserved Root category")]
    RootCategory { poster_id: String, id: NodeId },
}

impl Poster {
    /// Validate and construct a poster. Boxes are sorted by id; ids must be
    /// dense `1..=N`, extents positive, categories non-Root. Box centers
    /// slightly outside the page are allowed (see [`Poster::boundary_warnings`]).
    pub fn new(
        poster_id: impl Into<String>,
        page_w: f64,
        page_h: f64,
        mut boxes: Vec<BBox>,
    ) -> Result<Poster, ModelError> {
        let poster_id = poster_id.into();
        if !(page_w > 0.0 && page_h > 0.0) || !page_w.is_finite() || !page_h.is_finite() {
            return Err(ModelError::BadPage {
                poster_id,
                page_w,
                page_h,
            });
        }
        if boxes.is_empty() {
            return Err(ModelError::EmptyPoster { poster_id });
        }
        boxes.sort_by_key(|b| b.id);
        let n = boxes.len();
        for (k, b) in boxes.iter().enumerate() {
            if b.id != k + 1 {
                return Err(ModelError::BadIds {
                    poster_id,
                    n,
                    detail: format!("expected id {} at position {k}, found {}", k + 1, b.id),
                });
            }
            if !(b.w > 0.0 && b.h > 0.0) || !b.w.is_finite() || !b.h.is_finite() {
                return Err(ModelError::BadExtent {
                    poster_id,
                    id: b.id,
                    w: b.w,
                    h: b.h,
                });
            }
            if !b.cx.is_finite() || !b.cy.is_finite() {
                return Err(ModelError::BadCenter {
                    poster_id,
                    id: b.id,
                });
            }
            if b.category == Category::Root {
                return Err(ModelError::RootCategory {
                    poster_id,
                    id: b.id,
                });
            }
        }
        Ok(Poster {
            poster_id,
            page_w,
            page_h,
            boxes,
        })
    }

    /// Number of boxes N.
    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[BBox] {
        &self.boxes
    }

    /// Box with the given id in `1..=N`. Panics on the Root id or out of range.
    pub fn bbox(&self, id: NodeId) -> &BBox {
        assert!(id >= 1 && id <= self.boxes.len(), "bbox id {id} out of range");
        &self.boxes[id - 1]
    }

    /// Geometry of any node id: the page region for the Root, the box otherwise.
    pub fn geom(&self, id: NodeId) -> BoxGeom {
        if id == ROOT {
            self.root_geom()
        } else {
            self.bbox(id).geom()
        }
    }

    /// Geometry of the virtual Root node: the entire page.
    pub fn root_geom(&self) -> BoxGeom {
        BoxGeom {
            cx: self.page_w / 2.0,
            cy: self.page_h / 2.0,
            w: self.page_w,
            h: self.page_h,
        }
    }

    /// Soft diagnostics: box centers outside the page are tolerated (real
    /// annotations contain slight overflow) but reported.
    pub fn boundary_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.boxes {
            if b.cx < 0.0 || b.cx > self.page_w || b.cy < 0.0 || b.cy > self.page_h {
                out.push(format!(
                    "poster {}: box {} center ({}, {}) lies outside the page {}x{}",
                    self.poster_id, b.id, b.cx, b.cy, self.page_w, self.page_h
                ));
            }
        }
        out
    }
}

/// Relation kind extracted from a layout tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `(predecessor, successor)`: consecutive pair in the reading order.
    ReadingOrder,
    /// `(child, parent)`: structural parent assignment.
    ParentChild,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::ReadingOrder => "reading_order",
            RelationKind::ParentChild => "parent_child",
        }
    }
}

/// A directed relation between two nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub kind: RelationKind,
    pub from: NodeId,
    pub to: NodeId,
}

/// Errors from [`LayoutTree::build`].
#[derive(Debug, Error, PartialEq)]
pub enum TreeError {
    /// The reading order is not a permutation of `0..=N` starting at 0.
    #[error("invalid reading order: {0}")]
    Order(String),
    /// The parent map does not cover exactly the ids `1..=N` with values in `0..=N`.
    #[error("invalid parent map: {0}")]
    Parent(String),
    /// The parent map contains a cycle; the offending path is reported.
    #[error("parent map has a cycle: {}", fmt_id_path(.0))]
    Cycle(Vec<NodeId>),
    /// Replaying the order breaks rightmost-path legality at step `step`:
    /// the parent of the node placed there is not on the rightmost path.
    #[error(
        "order/parent mismatch at step {step}: parent {parent} of node {node} \
         is not on the rightmost path"
    )]
    DfsInconsistency {
        step: usize,
        node: NodeId,
        parent: NodeId,
    },
}

fn fmt_id_path(ids: &[NodeId]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// A DFS-ordered tree over nodes `0..=N`.
///
/// Invariants, enforced at construction:
/// - the reading order is a permutation of `0..=N` with position 0 holding the Root;
/// - every non-root node has exactly one parent and the parent map is acyclic;
/// - replaying the order, each node's parent lies on the rightmost path of the
///   partially built tree;
/// - the depth-first traversal, visiting children in stored order, equals the
///   reading order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutTree {
    order: Vec<NodeId>,
    /// parent_of[i] for i in 1..=N; parent_of[0] is a self-loop sentinel.
    parent_of: Vec<NodeId>,
    /// Ordered child lists, materialized from the reading order.
    children: Vec<Vec<NodeId>>,
}

impl LayoutTree {
    /// Build and validate a tree from a reading order and a parent map.
    ///
    /// `order` must have length `n + 1`; `parent` must map each id in `1..=n`
    /// to a parent id in `0..=n`.
    pub fn build(
        order: &[NodeId],
        parent: &BTreeMap<NodeId, NodeId>,
        n: usize,
    ) -> Result<LayoutTree, TreeError> {
        if order.len() != n + 1 {
            return Err(TreeError::Order(format!(
                "expected length {}, got {}",
                n + 1,
                order.len()
            )));
        }
        for (&id, &p) in parent {
            if id == ROOT {
                return Err(TreeError::Parent("the Root node cannot have a parent".into()));
            }
            if id > n {
                return Err(TreeError::Parent(format!("id {id} out of range 1..={n}")));
            }
            if p > n {
                return Err(TreeError::Parent(format!(
                    "parent {p} of node {id} out of range 0..={n}"
                )));
            }
        }
        let mut parent_of = vec![ROOT; n + 1];
        for i in 1..=n {
            match parent.get(&i) {
                Some(&p) => parent_of[i] = p,
                None => {
                    return Err(TreeError::Parent(format!("node {i} has no parent")));
                }
            }
        }
        Self::from_order_and_parents(order.to_vec(), parent_of)
    }

    /// Build from a dense parent vector (`parent_of[0]` is ignored).
    pub fn from_order_and_parents(
        order: Vec<NodeId>,
        parent_of: Vec<NodeId>,
    ) -> Result<LayoutTree, TreeError> {
        let n = parent_of.len().saturating_sub(1);
        if order.len() != n + 1 {
            return Err(TreeError::Order(format!(
                "expected length {}, got {}",
                n + 1,
                order.len()
            )));
        }
        if order.first() != Some(&ROOT) {
            return Err(TreeError::Order(format!(
                "position 0 must hold the Root, got {:?}",
                order.first()
            )));
        }
        let mut seen = vec![false; n + 1];
        for &id in &order {
            if id > n {
                return Err(TreeError::Order(format!("id {id} out of range 0..={n}")));
            }
            if seen[id] {
                return Err(TreeError::Order(format!("id {id} appears twice")));
            }
            seen[id] = true;
        }
        for (i, &p) in parent_of.iter().enumerate().skip(1) {
            if p > n {
                return Err(TreeError::Parent(format!(
                    "parent {p} of node {i} out of range 0..={n}"
                )));
            }
        }
        check_acyclic(&parent_of)?;

        // Replay the order, enforcing rightmost-path legality and collecting
        // child lists in order of first appearance.
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n + 1];
        let mut stack: Vec<NodeId> = vec![ROOT];
        for (step, &node) in order.iter().enumerate().skip(1) {
            let parent = parent_of[node];
            match stack.iter().position(|&q| q == parent) {
                Some(pos) => {
                    stack.truncate(pos + 1);
                    stack.push(node);
                    children[parent].push(node);
                }
                None => {
                    return Err(TreeError::DfsInconsistency { step, node, parent });
                }
            }
        }
        Ok(LayoutTree {
            order,
            parent_of,
            children,
        })
    }

    /// Number of real (non-root) nodes N.
    pub fn n(&self) -> usize {
        self.order.len() - 1
    }

    /// Total node count including the Root, `N + 1`.
    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    /// The reading order, starting with the Root.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Parent of a node; `None` for the Root.
    pub fn parent_of(&self, id: NodeId) -> Option<NodeId> {
        if id == ROOT {
            None
        } else {
            Some(self.parent_of[id])
        }
    }

    /// Dense parent vector (index 0 is a sentinel).
    pub fn parents(&self) -> &[NodeId] {
        &self.parent_of
    }

    /// Parent map over ids `1..=N`.
    pub fn parent_map(&self) -> BTreeMap<NodeId, NodeId> {
        (1..=self.n()).map(|i| (i, self.parent_of[i])).collect()
    }

    /// Ordered children of a node.
    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id]
    }

    /// Depth-first traversal visiting children in stored order.
    /// Always equal to [`LayoutTree::order`].
    pub fn dfs_replay(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.order.len());
        let mut stack: Vec<(NodeId, usize)> = vec![(ROOT, 0)];
        out.push(ROOT);
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < self.children[node].len() {
                let child = self.children[node][*next];
                *next += 1;
                out.push(child);
                stack.push((child, 0));
            } else {
                stack.pop();
            }
        }
        out
    }

    /// Reading-order and parent-child relation pairs. With `include_root`
    /// false, relations touching the Root are dropped (the convention used by
    /// the relation-accuracy metrics).
    pub fn relations(&self, include_root: bool) -> Vec<Relation> {
        let mut out = Vec::with_capacity(2 * self.n());
        for pair in self.order.windows(2) {
            let (from, to) = (pair[0], pair[1]);
            if include_root || (from != ROOT && to != ROOT) {
                out.push(Relation {
                    kind: RelationKind::ReadingOrder,
                    from,
                    to,
                });
            }
        }
        for child in 1..=self.n() {
            let parent = self.parent_of[child];
            if include_root || parent != ROOT {
                out.push(Relation {
                    kind: RelationKind::ParentChild,
                    from: child,
                    to: parent,
                });
            }
        }
        out
    }

    /// Depth per node, counted in nodes: the Root has level 1.
    pub fn levels(&self) -> Vec<usize> {
        let mut level = vec![0usize; self.node_count()];
        level[ROOT] = 1;
        // The reading order visits parents before children.
        for &id in self.order.iter().skip(1) {
            level[id] = level[self.parent_of[id]] + 1;
        }
        level
    }

    /// Maximum number of nodes on any root-to-leaf path (Root-only tree: 1).
    pub fn depth(&self) -> usize {
        self.levels().into_iter().max().unwrap_or(1)
    }

    /// Maximum number of nodes at any single depth level.
    pub fn width(&self) -> usize {
        let levels = self.levels();
        let mut counts = vec![0usize; self.node_count() + 2];
        for l in levels {
            counts[l] += 1;
        }
        counts.into_iter().max().unwrap_or(1)
    }

    /// Posters with at most one box carry no structure worth evaluating;
    /// callers flag rather than reject them.
    pub fn is_structurally_trivial(&self) -> bool {
        self.n() <= 1
    }
}

fn check_acyclic(parent_of: &[NodeId]) -> Result<(), TreeError> {
    // 0 = unvisited, 1 = on the current chain, 2 = known to reach the root.
    let mut state = vec![0u8; parent_of.len()];
    state[ROOT] = 2;
    for start in 1..parent_of.len() {
        if state[start] != 0 {
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            chain.push(cur);
            cur = parent_of[cur];
        }
        if state[cur] == 1 {
            // Extract the cycle portion of the chain, closing the loop.
            let pos = chain.iter().position(|&c| c == cur).unwrap();
            let mut cycle: Vec<NodeId> = chain[pos..].to_vec();
            cycle.push(cur);
            return Err(TreeError::Cycle(cycle));
        }
        for c in chain {
            state[c] = 2;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(order: &[NodeId], parents: &[(NodeId, NodeId)]) -> Result<LayoutTree, TreeError> {
        let map: BTreeMap<NodeId, NodeId> = parents.iter().copied().collect();
        LayoutTree::build(order, &map, order.len() - 1)
    }

    #[test]
    fn empty_poster_tree() {
        let t = tree(&[0], &[]).unwrap();
        assert_eq!(t.n(), 0);
        assert_eq!(t.depth(), 1);
        assert!(t.is_structurally_trivial());
    }

    #[test]
    fn chain_tree() {
        let t = tree(&[0, 1, 2], &[(1, 0), (2, 1)]).unwrap();
        assert_eq!(t.children(0), &[1]);
        assert_eq!(t.children(1), &[2]);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.width(), 1);
        assert_eq!(t.dfs_replay(), vec![0, 1, 2]);
    }

    #[test]
    fn sibling_order_follows_reading_order() {
        let a = tree(&[0, 1, 2], &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(a.children(0), &[1, 2]);
        let b = tree(&[0, 2, 1], &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(b.children(0), &[2, 1]);
        assert_ne!(a, b);
    }

    #[test]
    fn star_children_define_visit_order() {
        let t = tree(&[0, 3, 1, 2], &[(1, 0), (2, 0), (3, 0)]).unwrap();
        assert_eq!(t.children(0), &[3, 1, 2]);
        assert_eq!(t.dfs_replay(), vec![0, 3, 1, 2]);
    }

    #[test]
    fn order_errors() {
        assert!(matches!(
            tree(&[1, 0], &[(1, 0)]),
            Err(TreeError::Order(_))
        ));
        assert!(matches!(
            tree(&[0, 1, 1], &[(1, 0), (2, 0)]),
            Err(TreeError::Order(_))
        ));
        assert!(matches!(
            tree(&[0, 5], &[(1, 0)]),
            Err(TreeError::Order(_))
        ));
    }

    #[test]
    fn parent_errors() {
        assert!(matches!(tree(&[0, 1], &[]), Err(TreeError::Parent(_))));
        assert!(matches!(
            tree(&[0, 1], &[(1, 7)]),
            Err(TreeError::Parent(_))
        ));
    }

    #[test]
    fn cycle_reported_with_path() {
        let err = tree(&[0, 1, 2], &[(1, 2), (2, 1)]).unwrap_err();
        match err {
            TreeError::Cycle(path) => {
                assert_eq!(path.first(), path.last());
                assert!(path.len() >= 3);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn dfs_inconsistency_reports_first_offending_step() {
        // Order (0,1,2,3) with 3's parent 1: after placing 2 under the root,
        // node 1 is no longer on the rightmost path.
        let err = tree(&[0, 1, 2, 3], &[(1, 0), (2, 0), (3, 1)]).unwrap_err();
        assert_eq!(
            err,
            TreeError::DfsInconsistency {
                step: 3,
                node: 3,
                parent: 1
            }
        );
    }

    #[test]
    fn relations_with_and_without_root() {
        let t = tree(&[0, 1, 2], &[(1, 0), (2, 1)]).unwrap();
        let with_root = t.relations(true);
        assert_eq!(
            with_root,
            vec![
                Relation {
                    kind: RelationKind::ReadingOrder,
                    from: 0,
                    to: 1
                },
                Relation {
                    kind: RelationKind::ReadingOrder,
                    from: 1,
                    to: 2
                },
                Relation {
                    kind: RelationKind::ParentChild,
                    from: 1,
                    to: 0
                },
                Relation {
                    kind: RelationKind::ParentChild,
                    from: 2,
                    to: 1
                },
            ]
        );
        let without = t.relations(false);
        assert_eq!(
            without,
            vec![
                Relation {
                    kind: RelationKind::ReadingOrder,
                    from: 1,
                    to: 2
                },
                Relation {
                    kind: RelationKind::ParentChild,
                    from: 2,
                    to: 1
                },
            ]
        );
    }

    #[test]
    fn relation_counts_include_root() {
        let t = tree(&[0, 2, 1, 3], &[(1, 2), (2, 0), (3, 0)]).unwrap();
        let rels = t.relations(true);
        let ro = rels
            .iter()
            .filter(|r| r.kind == RelationKind::ReadingOrder)
            .count();
        let pc = rels
            .iter()
            .filter(|r| r.kind == RelationKind::ParentChild)
            .count();
        assert_eq!(ro, t.n());
        assert_eq!(pc, t.n());
    }

    #[test]
    fn guideline_example_tree_relations() {
        // A poster in the shape of the dataset's illustration: a Title and
        // Author Info under the Root, then two Sections whose contents hang
        // off them, with a Caption under a Figure.
        //   order: 0 T(1) A(2) S1(3) Tx(4) F(5) C(6) S2(7) L(8)
        let t = tree(
            &[0, 1, 2, 3, 4, 5, 6, 7, 8],
            &[
                (1, 0),
                (2, 0),
                (3, 0),
                (4, 3),
                (5, 3),
                (6, 5),
                (7, 0),
                (8, 7),
            ],
        )
        .unwrap();
        let pc: Vec<(NodeId, NodeId)> = t
            .relations(true)
            .into_iter()
            .filter(|r| r.kind == RelationKind::ParentChild)
            .map(|r| (r.to, r.from)) // arrows: parent -> child
            .collect();
        let expected = vec![
            (0, 1),
            (0, 2),
            (0, 3),
            (3, 4),
            (3, 5),
            (5, 6),
            (0, 7),
            (7, 8),
        ];
        assert_eq!(pc, expected);
    }

    #[test]
    fn poster_validation() {
        let bx = |id, cx, cy, w, h, category| BBox {
            id,
            cx,
            cy,
            w,
            h,
            category,
        };
        let p = Poster::new(
            "p1",
            100.0,
            50.0,
            vec![
                bx(2, 20.0, 10.0, 5.0, 5.0, Category::Text),
                bx(1, 10.0, 10.0, 5.0, 5.0, Category::Title),
            ],
        )
        .unwrap();
        assert_eq!(p.bbox(1).category, Category::Title);
        assert!(p.boundary_warnings().is_empty());

        let overflow = Poster::new(
            "p2",
            100.0,
            50.0,
            vec![bx(1, 110.0, 10.0, 5.0, 5.0, Category::Title)],
        )
        .unwrap();
        assert_eq!(overflow.boundary_warnings().len(), 1);

        assert!(matches!(
            Poster::new("p3", 100.0, 50.0, vec![]),
            Err(ModelError::EmptyPoster { .. })
        ));
        assert!(matches!(
            Poster::new(
                "p4",
                100.0,
                50.0,
                vec![bx(1, 10.0, 10.0, 0.0, 5.0, Category::Text)]
            ),
            Err(ModelError::BadExtent { .. })
        ));
        assert!(matches!(
            Poster::new(
                "p5",
                100.0,
                50.0,
                vec![bx(3, 10.0, 10.0, 1.0, 5.0, Category::Text)]
            ),
            Err(ModelError::BadIds { .. })
        ));
        assert!(matches!(
            Poster::new(
                "p6",
                100.0,
                50.0,
                vec![bx(1, 10.0, 10.0, 1.0, 5.0, Category::Root)]
            ),
            Err(ModelError::RootCategory { .. })
        ));
    }

    #[test]
    fn category_parse_normalizes() {
        assert_eq!(Category::parse("Author Info"), Some(Category::AuthorInfo));
        assert_eq!(Category::parse("author_info"), Some(Category::AuthorInfo));
        assert_eq!(Category::parse("AUTHOR-INFO"), Some(Category::AuthorInfo));
        assert_eq!(Category::parse("figure"), Some(Category::Figure));
        assert_eq!(Category::parse("banner"), None);
    }
}
