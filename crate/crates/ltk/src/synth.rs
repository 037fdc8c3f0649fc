//! Deterministic synthetic data: random DFS trees, posters, and score
//! matrices. Used by the noisy-oracle sweep workflows and as a generator for
//! property tests. Everything is keyed by explicit seeds; no ambient entropy.

use crate::layout::{BBox, Category, LayoutTree, NodeId, Poster, ROOT};
use crate::scoring::{ScoreMatrix, ScorePair};

/// Small deterministic generator (splitmix64). Stable across platforms.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform in [0, n). Modulo bias is irrelevant here; determinism is what
    /// matters.
    pub fn next_range(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}

/// A uniformly shuffled reading order combined with random legal parents:
/// every permutation is a valid reading order for some tree, and any node on
/// the current rightmost path is a legal parent.
pub fn random_tree(n: usize, seed: u64) -> LayoutTree {
    let mut rng = SplitMix64::new(seed ^ 0x7261_6E64_5F74_7265);
    let mut ids: Vec<NodeId> = (1..=n).collect();
    // Fisher-Yates.
    for i in (1..ids.len()).rev() {
        let j = rng.next_range(i + 1);
        ids.swap(i, j);
    }
    let mut order = Vec::with_capacity(n + 1);
    order.push(ROOT);
    order.extend(ids);

    let mut parent_of = vec![ROOT; n + 1];
    let mut stack: Vec<NodeId> = vec![ROOT];
    for &node in order.iter().skip(1) {
        let pos = rng.next_range(stack.len());
        parent_of[node] = stack[pos];
        stack.truncate(pos + 1);
        stack.push(node);
    }
    LayoutTree::from_order_and_parents(order, parent_of)
        .expect("sampled tree is valid by construction")
}

/// A random poster with `n` boxes on a 1000 x 1414 page, all coordinates
/// quantized to the canonical file precision, paired with a random tree.
pub fn random_poster(poster_id: &str, n: usize, seed: u64) -> (Poster, LayoutTree) {
    assert!(n >= 1, "posters need at least one box");
    let mut rng = SplitMix64::new(seed ^ 0x706F_7374_6572_5F31);
    let quant = |v: f64| (v * 10_000.0).round() / 10_000.0;
    let (page_w, page_h) = (1000.0, 1414.0);
    let boxes = (1..=n)
        .map(|id| {
            let w = 20.0 + 280.0 * rng.next_f64();
            let h = 15.0 + 200.0 * rng.next_f64();
            BBox {
                id,
                cx: quant(w / 2.0 + (page_w - w) * rng.next_f64()),
                cy: quant(h / 2.0 + (page_h - h) * rng.next_f64()),
                w: quant(w),
                h: quant(h),
                category: Category::NON_ROOT[rng.next_range(Category::NON_ROOT.len())],
            }
        })
        .collect();
    let poster = Poster::new(poster_id, page_w, page_h, boxes).expect("valid synthetic poster");
    let tree = random_tree(n, rng.next_u64());
    (poster, tree)
}

/// Random finite score matrices with entries uniform in [-1, 1].
pub fn random_scores(n: usize, seed: u64) -> ScorePair {
    let mut rng = SplitMix64::new(seed ^ 0x7363_6F72_6573_5F31);
    let side = n + 1;
    let make = |rng: &mut SplitMix64| {
        let mut m = ScoreMatrix::zeroed(side);
        for i in 0..side {
            for j in 0..side {
                if i != j {
                    m.set(i, j, 2.0 * rng.next_f64() - 1.0);
                }
            }
        }
        m
    };
    let s = make(&mut rng);
    let p = make(&mut rng);
    ScorePair::new(n, s, p).expect("finite by construction")
}
