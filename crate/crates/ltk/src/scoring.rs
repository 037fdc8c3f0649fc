//! Score matrix producers: ground-truth oracle, seeded noisy oracle, a
//! rule-based geometric heuristic, and a plain-text interchange format for
//! externally produced scores.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::layout::{Category, LayoutTree, NodeId, Poster, ROOT};

/// Score assigned to forbidden self-relations: the most negative finite
/// value, so matrices stay finite and softmax stays well-defined.
pub const DIAGONAL_SCORE: f64 = f64::MIN;

/// Which matrix of the pair an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixId {
    Subsequent,
    Parent,
}

impl fmt::Display for MatrixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixId::Subsequent => f.write_str("S"),
            MatrixId::Parent => f.write_str("P"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("matrix {matrix} must be {expected}x{expected}, got row {row} of length {got}")]
    DimensionMismatch {
        matrix: MatrixId,
        expected: usize,
        row: usize,
        got: usize,
    },
    #[error("matrix {matrix} entry ({row}, {col}) is not finite")]
    NonFiniteEntry {
        matrix: MatrixId,
        row: usize,
        col: usize,
    },
    #[error("score file parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ScoreError {
    fn from(e: std::io::Error) -> Self {
        ScoreError::Io(e.to_string())
    }
}

/// Dense square matrix of f64 scores over nodes `0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    side: usize,
    data: Vec<f64>,
}

impl ScoreMatrix {
    /// All-zero matrix with the diagonal set to [`DIAGONAL_SCORE`].
    pub fn zeroed(side: usize) -> ScoreMatrix {
        let mut m = ScoreMatrix {
            side,
            data: vec![0.0; side * side],
        };
        m.reset_diagonal();
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<ScoreMatrix, ScoreError> {
        let side = rows.len();
        let mut data = Vec::with_capacity(side * side);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != side {
                return Err(ScoreError::DimensionMismatch {
                    matrix: MatrixId::Subsequent,
                    expected: side,
                    row: i,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(ScoreMatrix { side, data })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.side + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.side + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.side..(i + 1) * self.side]
    }

    /// Force the diagonal to the forbidden-self-relation score.
    pub fn reset_diagonal(&mut self) {
        for i in 0..self.side {
            self.data[i * self.side + i] = DIAGONAL_SCORE;
        }
    }

    fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|v| !v.is_finite())
            .map(|p| (p / self.side, p % self.side))
    }
}

/// The pair of score matrices driving tree decoding: `s[i][j]` scores "node j
/// follows node i in the reading order", `p[i][j]` scores "node j is the
/// parent of node i". Both are `(N+1) x (N+1)` with the forbidden diagonal at
/// the minimum finite score.
#[derive(Clone, Debug, PartialEq)]
pub struct ScorePair {
    n: usize,
    pub s: ScoreMatrix,
    pub p: ScoreMatrix,
}

impl ScorePair {
    /// Validate dimensions and finiteness; the diagonals are normalized to
    /// [`DIAGONAL_SCORE`] regardless of their incoming values.
    pub fn new(n: usize, mut s: ScoreMatrix, mut p: ScoreMatrix) -> Result<ScorePair, ScoreError> {
        for (matrix, m) in [(MatrixId::Subsequent, &mut s), (MatrixId::Parent, &mut p)] {
            if m.side() != n + 1 {
                return Err(ScoreError::DimensionMismatch {
                    matrix,
                    expected: n + 1,
                    row: 0,
                    got: m.side(),
                });
            }
            m.reset_diagonal();
            if let Some((row, col)) = m.first_non_finite() {
                return Err(ScoreError::NonFiniteEntry { matrix, row, col });
            }
        }
        Ok(ScorePair { n, s, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix side, `N + 1`.
    pub fn side(&self) -> usize {
        self.n + 1
    }

    /// Re-check finiteness (matrices are mutable after construction).
    pub fn validate(&self) -> Result<(), ScoreError> {
        for (matrix, m) in [(MatrixId::Subsequent, &self.s), (MatrixId::Parent, &self.p)] {
            if let Some((row, col)) = m.first_non_finite() {
                return Err(ScoreError::NonFiniteEntry { matrix, row, col });
            }
        }
        Ok(())
    }

    /// Raw cumulative scores of a tree under these matrices: the sum of
    /// subsequent scores along the order and of parent scores per node.
    /// Both sums accumulate in reading order, matching the decoding loops
    /// bit for bit.
    pub fn raw_scores_of(&self, tree: &LayoutTree) -> (f64, f64) {
        let order = tree.order();
        let mut order_score = 0.0;
        for pair in order.windows(2) {
            order_score += self.s.get(pair[0], pair[1]);
        }
        let mut parent_score = 0.0;
        for &node in order.iter().skip(1) {
            parent_score += self.p.get(node, tree.parent_of(node).expect("non-root"));
        }
        (order_score, parent_score)
    }
}

/// Oracle score matrices for a ground-truth tree: consecutive reading-order
/// pairs and true parent assignments score `+margin`, everything else
/// feasible scores 0. Greedy decoding of the result reproduces the tree
/// exactly, for any positive margin.
pub fn oracle_scores(gt: &LayoutTree, margin: f64) -> ScorePair {
    assert!(margin > 0.0, "oracle margin must be positive");
    let side = gt.node_count();
    let mut s = ScoreMatrix::zeroed(side);
    let mut p = ScoreMatrix::zeroed(side);
    for pair in gt.order().windows(2) {
        s.set(pair[0], pair[1], margin);
    }
    for i in 1..=gt.n() {
        p.set(i, gt.parent_of(i).expect("non-root"), margin);
    }
    ScorePair {
        n: gt.n(),
        s,
        p,
    }
}

// Counter-based deterministic noise. Each perturbation is a pure function of
// (seed, matrix, i, j), so generation order and parallelism cannot change the
// stream.
mod counter_rng {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

    fn mix64(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn key(seed: u64, stream: u64, i: u64, j: u64) -> u64 {
        let mut h = mix64(seed.wrapping_add(GOLDEN));
        h = mix64(h ^ stream.wrapping_mul(0xA076_1D64_78BD_642F));
        h = mix64(h ^ i.wrapping_mul(0xE703_7ED1_A0B4_28DB));
        h = mix64(h ^ j.wrapping_mul(0x8EBC_6AF0_9C88_C6E3));
        h
    }

    /// Uniform in the open interval (0, 1).
    fn unit_open(u: u64) -> f64 {
        ((u >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box-Muller on two keyed uniforms.
    pub fn gaussian(seed: u64, stream: u64, i: u64, j: u64) -> f64 {
        let k = key(seed, stream, i, j);
        let u1 = unit_open(mix64(k ^ 0x2545_F491_4F6C_DD1D));
        let u2 = unit_open(mix64(k ^ 0x6C62_272E_07BB_0142));
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Oracle scores plus independent zero-mean Gaussian perturbations of
/// standard deviation `noise_sd` on every off-diagonal entry. `noise_sd = 0`
/// returns the oracle bit-for-bit; fixed seeds reproduce exactly.
pub fn noisy_oracle(gt: &LayoutTree, margin: f64, noise_sd: f64, seed: u64) -> ScorePair {
    assert!(noise_sd >= 0.0, "noise standard deviation must be non-negative");
    let mut sp = oracle_scores(gt, margin);
    if noise_sd == 0.0 {
        return sp;
    }
    let side = sp.side();
    for (stream, m) in [(0u64, &mut sp.s), (1u64, &mut sp.p)] {
        for i in 0..side {
            for j in 0..side {
                if i == j {
                    continue;
                }
                let eps = noise_sd * counter_rng::gaussian(seed, stream, i as u64, j as u64);
                m.set(i, j, m.get(i, j) + eps);
            }
        }
    }
    sp
}

// ---------------------------------------------------------------------------
// Rule-based geometric heuristic
// ---------------------------------------------------------------------------

/// Column clusters over the content boxes (everything except Title and
/// Author Info, which usually span the full page width and would otherwise
/// fuse the columns). Boxes whose horizontal extents overlap by at least 50%
/// of the narrower box are linked into one cluster; clusters are ordered
/// left to right.
struct Columns {
    /// Column index per node id (1-based ids); `None` for header boxes.
    col_of: Vec<Option<usize>>,
}

fn horizontal_overlap(a: &crate::layout::BBox, b: &crate::layout::BBox) -> f64 {
    let (al, ar) = a.x_extent();
    let (bl, br) = b.x_extent();
    (ar.min(br) - al.max(bl)).max(0.0)
}

fn is_header(c: Category) -> bool {
    matches!(c, Category::Title | Category::AuthorInfo)
}

fn column_clusters(poster: &Poster) -> Columns {
    let n = poster.n();
    // Union-find over box ids.
    let mut uf: Vec<usize> = (0..=n).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut c = x;
        while uf[c] != r {
            let next = uf[c];
            uf[c] = r;
            c = next;
        }
        r
    }
    let content: Vec<&crate::layout::BBox> = poster
        .boxes()
        .iter()
        .filter(|b| !is_header(b.category))
        .collect();
    for (i, a) in content.iter().enumerate() {
        for b in content.iter().skip(i + 1) {
            if horizontal_overlap(a, b) >= 0.5 * a.w.min(b.w) {
                let (ra, rb) = (find(&mut uf, a.id), find(&mut uf, b.id));
                if ra != rb {
                    uf[ra] = rb;
                }
            }
        }
    }
    // Order clusters by geometry only (left edge, then right edge), so the
    // result is invariant to box id relabeling.
    let mut reps: Vec<usize> = content.iter().map(|b| find(&mut uf, b.id)).collect();
    reps.sort_unstable();
    reps.dedup();
    let mut keyed: Vec<(f64, f64, usize)> = reps
        .iter()
        .map(|&rep| {
            let mut left = f64::INFINITY;
            let mut right = f64::NEG_INFINITY;
            for b in &content {
                if find(&mut uf, b.id) == rep {
                    let (l, r) = b.x_extent();
                    left = left.min(l);
                    right = right.max(r);
                }
            }
            (left, right, rep)
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    let mut col_of = vec![None; n + 1];
    for b in &content {
        let rep = find(&mut uf, b.id);
        let col = keyed.iter().position(|&(_, _, r)| r == rep).unwrap();
        col_of[b.id] = Some(col);
    }
    Columns { col_of }
}

/// Score matrices from the annotation guideline, using geometry only.
///
/// Parent scores: Title, Author Info, and Section boxes prefer the Root;
/// Text/List/Table/Figure boxes score each Section above them in the same
/// column by horizontal overlap times vertical proximity, falling back to
/// the Root when no Section scores positively; Captions score Figures and
/// Tables by inverse center distance.
///
/// Subsequent scores encode column-major reading: within-column downward
/// proximity dominates, transitions enter the next column at its top, and
/// the Title then Author Info are boosted immediately after the Root.
pub fn heuristic_scores(poster: &Poster) -> ScorePair {
    let n = poster.n();
    let side = n + 1;
    let cols = column_clusters(poster);
    let diag = (poster.page_w * poster.page_w + poster.page_h * poster.page_h).sqrt();
    let euclid = |a: NodeId, b: NodeId| -> f64 {
        let (ga, gb) = (poster.bbox(a), poster.bbox(b));
        let (dx, dy) = (gb.cx - ga.cx, gb.cy - ga.cy);
        (dx * dx + dy * dy).sqrt() / diag
    };
    let cy_norm = |id: NodeId| poster.bbox(id).cy / poster.page_h;
    let cx_norm = |id: NodeId| poster.bbox(id).cx / poster.page_w;
    // Position key: top-to-bottom, then left-to-right as a weak tiebreaker.
    let pos_key = |id: NodeId| cy_norm(id) + 0.001 * cx_norm(id);
    // Entry score into a column region: leftmost column first, topmost box first.
    let entry = |from_col: usize, j: NodeId| -> f64 {
        let cj = cols.col_of[j].expect("content box has a column");
        6.0 - 2.0 * (cj.saturating_sub(from_col)) as f64 - cy_norm(j)
    };

    let mut s = ScoreMatrix::zeroed(side);
    for i in 0..side {
        for j in 1..side {
            if i == j {
                continue;
            }
            let cat_j = poster.bbox(j).category;
            let v = if i == ROOT {
                match cat_j {
                    Category::Title => 100.0 - pos_key(j),
                    Category::AuthorInfo => 50.0 - pos_key(j),
                    _ => entry(0, j),
                }
            } else {
                let cat_i = poster.bbox(i).category;
                match (is_header(cat_i), is_header(cat_j)) {
                    (true, true) => match (cat_i, cat_j) {
                        (Category::Title, Category::AuthorInfo) => 100.0 - pos_key(j),
                        (Category::Title, Category::Title) => 90.0 - pos_key(j),
                        (Category::AuthorInfo, Category::AuthorInfo) => 90.0 - pos_key(j),
                        _ => -10.0 - euclid(i, j),
                    },
                    (true, false) => entry(0, j),
                    (false, true) => -20.0 - euclid(i, j),
                    (false, false) => {
                        let ci = cols.col_of[i].expect("content box has a column");
                        let cj = cols.col_of[j].expect("content box has a column");
                        if ci == cj {
                            let dy = cy_norm(j) - cy_norm(i);
                            if dy > 0.0 {
                                10.0 + 1.0 / (1.0 + dy)
                            } else {
                                -10.0 - euclid(i, j)
                            }
                        } else if cj > ci {
                            entry(ci + 1, j)
                        } else {
                            -12.0 - euclid(i, j)
                        }
                    }
                }
            };
            s.set(i, j, v);
        }
    }

    let mut p = ScoreMatrix::zeroed(side);
    for i in 1..side {
        let cat_i = poster.bbox(i).category;
        for j in 0..side {
            if i == j {
                continue;
            }
            let v = match cat_i {
                Category::Title | Category::AuthorInfo | Category::Section => {
                    if j == ROOT {
                        10.0
                    } else {
                        -5.0
                    }
                }
                Category::Caption => {
                    if j == ROOT {
                        0.0
                    } else if matches!(
                        poster.bbox(j).category,
                        Category::Figure | Category::Table
                    ) {
                        1.0 / (1.0 + euclid(i, j))
                    } else {
                        -5.0
                    }
                }
                // Text, List, Figure, Table: containment affinity to Sections.
                _ => {
                    if j == ROOT {
                        0.0
                    } else if poster.bbox(j).category == Category::Section {
                        let same_col = cols.col_of[i].is_some()
                            && cols.col_of[i] == cols.col_of[j];
                        let above = cy_norm(j) < cy_norm(i);
                        if same_col && above {
                            let overlap = horizontal_overlap(poster.bbox(i), poster.bbox(j))
                                / poster.bbox(i).w.min(poster.bbox(j).w);
                            let prox = 1.0 / (1.0 + (cy_norm(i) - cy_norm(j)));
                            let affinity = overlap * prox;
                            if affinity > 0.0 {
                                affinity
                            } else {
                                -1.0
                            }
                        } else {
                            -1.0
                        }
                    } else {
                        -5.0
                    }
                }
            };
            p.set(i, j, v);
        }
    }

    ScorePair { n, s, p }
}

// ---------------------------------------------------------------------------
// Score file interchange
// ---------------------------------------------------------------------------

/// Write a score pair in the interchange format: a `n=<N>` header, then an
/// `S:` block and a `P:` block of `N+1` whitespace-separated rows each, six
/// fractional digits.
pub fn write_scores<W: Write>(sp: &ScorePair, mut w: W) -> Result<(), ScoreError> {
    writeln!(w, "n={}", sp.n())?;
    for (label, m) in [("S:", &sp.s), ("P:", &sp.p)] {
        writeln!(w, "{label}")?;
        for i in 0..m.side() {
            let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.6}")).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
    }
    Ok(())
}

pub fn save_scores(sp: &ScorePair, path: &Path) -> Result<(), ScoreError> {
    let file = std::fs::File::create(path)?;
    write_scores(sp, std::io::BufWriter::new(file))
}

/// Parse the interchange format back into a validated [`ScorePair`].
pub fn read_scores<R: Read>(r: R) -> Result<ScorePair, ScoreError> {
    let reader = BufReader::new(r);
    let mut lines = reader.lines().enumerate();
    let (line_no, header) = lines
        .next()
        .ok_or(ScoreError::Parse {
            line: 1,
            message: "empty file".into(),
        })
        .and_then(|(i, l)| Ok((i + 1, l?)))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or(ScoreError::Parse {
            line: line_no,
            message: format!("expected 'n=<count>' header, got {header:?}"),
        })?;
    let side = n + 1;
    let mut matrices: Vec<ScoreMatrix> = Vec::with_capacity(2);
    for (matrix, label) in [(MatrixId::Subsequent, "S:"), (MatrixId::Parent, "P:")] {
        let (line_no, block) = lines
            .next()
            .ok_or(ScoreError::Parse {
                line: 0,
                message: format!("missing '{label}' block"),
            })
            .and_then(|(i, l)| Ok((i + 1, l?)))?;
        if block.trim() != label {
            return Err(ScoreError::Parse {
                line: line_no,
                message: format!("expected '{label}', got {block:?}"),
            });
        }
        let mut rows = Vec::with_capacity(side);
        for row_idx in 0..side {
            let (line_no, text) = lines
                .next()
                .ok_or(ScoreError::Parse {
                    line: 0,
                    message: format!("matrix {matrix} truncated at row {row_idx}"),
                })
                .and_then(|(i, l)| Ok((i + 1, l?)))?;
            let mut row = Vec::with_capacity(side);
            for (col_idx, tok) in text.split_whitespace().enumerate() {
                let v: f64 = tok.parse().map_err(|_| ScoreError::Parse {
                    line: line_no,
                    message: format!("bad number {tok:?} at column {col_idx}"),
                })?;
                if !v.is_finite() {
                    return Err(ScoreError::NonFiniteEntry {
                        matrix,
                        row: row_idx,
                        col: col_idx,
                    });
                }
                row.push(v);
            }
            if row.len() != side {
                return Err(ScoreError::DimensionMismatch {
                    matrix,
                    expected: side,
                    row: row_idx,
                    got: row.len(),
                });
            }
            rows.push(row);
        }
        matrices.push(ScoreMatrix::from_rows(rows)?);
    }
    let p = matrices.pop().expect("two matrices");
    let s = matrices.pop().expect("two matrices");
    ScorePair::new(n, s, p)
}

pub fn load_scores(path: &Path) -> Result<ScorePair, ScoreError> {
    let file = std::fs::File::open(path)?;
    read_scores(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::decode_greedy;
    use crate::layout::{BBox, LayoutTree};
    use std::collections::BTreeMap;

    fn tree(order: &[NodeId], parents: &[(NodeId, NodeId)]) -> LayoutTree {
        let map: BTreeMap<NodeId, NodeId> = parents.iter().copied().collect();
        LayoutTree::build(order, &map, order.len() - 1).unwrap()
    }

    #[test]
    fn oracle_chain_entries() {
        let gt = tree(&[0, 1, 2], &[(1, 0), (2, 1)]);
        let sp = oracle_scores(&gt, 1.0);
        assert_eq!(sp.s.get(0, 1), 1.0);
        assert_eq!(sp.s.get(1, 2), 1.0);
        assert_eq!(sp.s.get(0, 2), 0.0);
        assert_eq!(sp.s.get(1, 1), DIAGONAL_SCORE);
        assert_eq!(sp.p.get(1, 0), 1.0);
        assert_eq!(sp.p.get(2, 1), 1.0);
        assert_eq!(sp.p.get(2, 0), 0.0);
    }

    #[test]
    fn oracle_margin_invariance() {
        let gt = tree(&[0, 2, 1, 3], &[(1, 2), (2, 0), (3, 0)]);
        let a = decode_greedy(&oracle_scores(&gt, 1.0)).unwrap();
        let b = decode_greedy(&oracle_scores(&gt, 10.0)).unwrap();
        assert_eq!(a.tree, b.tree);
        assert_eq!(a.tree, gt);
    }

    #[test]
    fn noisy_zero_sd_is_oracle() {
        let gt = tree(&[0, 1, 2], &[(1, 0), (2, 1)]);
        assert_eq!(noisy_oracle(&gt, 1.0, 0.0, 42), oracle_scores(&gt, 1.0));
    }

    #[test]
    fn noisy_is_deterministic_per_seed() {
        let gt = tree(&[0, 1, 2, 3], &[(1, 0), (2, 1), (3, 0)]);
        let a = noisy_oracle(&gt, 1.0, 0.5, 7);
        let b = noisy_oracle(&gt, 1.0, 0.5, 7);
        assert_eq!(a, b);
        let c = noisy_oracle(&gt, 1.0, 0.5, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_has_roughly_unit_scale() {
        let gt = crate::synth::random_tree(25, 3);
        let sp = noisy_oracle(&gt, 1.0, 1.0, 11);
        let base = oracle_scores(&gt, 1.0);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut count = 0.0;
        for i in 0..sp.side() {
            for j in 0..sp.side() {
                if i == j {
                    continue;
                }
                let eps = sp.s.get(i, j) - base.s.get(i, j);
                sum += eps;
                sumsq += eps * eps;
                count += 1.0;
            }
        }
        let mean = sum / count;
        let var = sumsq / count - mean * mean;
        assert!(mean.abs() < 0.2, "mean {mean}");
        assert!((var - 1.0).abs() < 0.3, "variance {var}");
    }

    fn bx(id: NodeId, cx: f64, cy: f64, w: f64, h: f64, category: Category) -> BBox {
        BBox {
            id,
            cx,
            cy,
            w,
            h,
            category,
        }
    }

    #[test]
    fn heuristic_single_title() {
        let poster = Poster::new(
            "p",
            100.0,
            100.0,
            vec![bx(1, 50.0, 8.0, 80.0, 10.0, Category::Title)],
        )
        .unwrap();
        let decoded = decode_greedy(&heuristic_scores(&poster)).unwrap();
        assert_eq!(decoded.tree.order(), &[0, 1]);
        assert_eq!(decoded.tree.parent_of(1), Some(ROOT));
    }

    #[test]
    fn heuristic_two_column_poster() {
        // Title and author banner across the top; two columns, each a Section
        // with one Text below it.
        let poster = Poster::new(
            "p",
            200.0,
            200.0,
            vec![
                bx(1, 100.0, 10.0, 180.0, 12.0, Category::Title),
                bx(2, 100.0, 24.0, 160.0, 8.0, Category::AuthorInfo),
                bx(3, 50.0, 50.0, 80.0, 10.0, Category::Section),
                bx(4, 50.0, 90.0, 80.0, 50.0, Category::Text),
                bx(5, 150.0, 50.0, 80.0, 10.0, Category::Section),
                bx(6, 150.0, 90.0, 80.0, 50.0, Category::Text),
            ],
        )
        .unwrap();
        // Ground truth by hand from the guideline: headers then column-major,
        // contents attached to their section.
        let gt = tree(
            &[0, 1, 2, 3, 4, 5, 6],
            &[(1, 0), (2, 0), (3, 0), (4, 3), (5, 0), (6, 5)],
        );
        let decoded = decode_greedy(&heuristic_scores(&poster)).unwrap();
        assert_eq!(decoded.tree, gt);
    }

    #[test]
    fn heuristic_caption_prefers_nearest_figure() {
        let poster = Poster::new(
            "p",
            200.0,
            200.0,
            vec![
                bx(1, 60.0, 60.0, 60.0, 40.0, Category::Figure),
                bx(2, 60.0, 90.0, 50.0, 8.0, Category::Caption),
                bx(3, 160.0, 160.0, 40.0, 30.0, Category::Table),
            ],
        )
        .unwrap();
        let sp = heuristic_scores(&poster);
        // The caption's row argmax is the figure directly above it.
        let row = sp.p.row(2);
        let argmax = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(argmax, 1);
    }

    #[test]
    fn heuristic_no_section_falls_back_to_root() {
        let poster = Poster::new(
            "p",
            100.0,
            100.0,
            vec![
                bx(1, 50.0, 30.0, 40.0, 20.0, Category::Text),
                bx(2, 50.0, 70.0, 40.0, 20.0, Category::Figure),
            ],
        )
        .unwrap();
        let decoded = decode_greedy(&heuristic_scores(&poster)).unwrap();
        assert_eq!(decoded.tree.parent_of(1), Some(ROOT));
        assert_eq!(decoded.tree.parent_of(2), Some(ROOT));
    }

    #[test]
    fn scores_roundtrip() {
        let gt = tree(&[0, 2, 1, 3], &[(1, 2), (2, 0), (3, 0)]);
        let sp = noisy_oracle(&gt, 1.0, 0.25, 5);
        let mut buf = Vec::new();
        write_scores(&sp, &mut buf).unwrap();
        let back = read_scores(&buf[..]).unwrap();
        // Values survive at the stored precision; a second write is identical.
        let mut buf2 = Vec::new();
        write_scores(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
        assert_eq!(back.n(), sp.n());
    }

    #[test]
    fn scores_file_dimension_mismatch() {
        let text = "n=2\nS:\n0.0 0.0 0.0\n0.0 0.0\n0.0 0.0 0.0\nP:\n";
        let err = read_scores(text.as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            ScoreError::DimensionMismatch {
                matrix: MatrixId::Subsequent,
                row: 1,
                got: 2,
                ..
            }
        ));
    }

    #[test]
    fn scores_file_nan_named() {
        let text = "n=1\nS:\n0.0 NaN\n0.0 0.0\nP:\n0.0 0.0\n0.0 0.0\n";
        let err = read_scores(text.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            ScoreError::NonFiniteEntry {
                matrix: MatrixId::Subsequent,
                row: 0,
                col: 1
            }
        );
    }
}
