//! Tree decoding from score matrices: greedy decoding, the two-stage beam
//! search extension, and cross-entropy loss evaluation.
//!
//! Greedy decoding first selects the reading order step by step (each node is
//! the best-scoring unvisited successor of the previous one), then assigns
//! parents: a stack holds the rightmost path from the root to the most recent
//! leaf, each node picks its best-scoring parent on that stack, the stack is
//! truncated after the chosen parent, and the node is pushed.
//!
//! Beam search widens both loops to the top `W` hypotheses per step, scoring
//! sequences either by raw score sums or by per-step log-softmax over the
//! feasible candidates. The stages run sequentially: the best complete order
//! is fixed before parent assignment begins.

use serde::Serialize;
use thiserror::Error;

use crate::layout::{LayoutTree, NodeId, TreeError, ROOT};
use crate::scoring::{MatrixId, ScoreError, ScoreMatrix, ScorePair};

/// Sequence score aggregation for beam search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScoreNorm {
    /// Plain sum of raw scores. Width 1 reproduces greedy decoding exactly.
    RawSum,
    /// Sum of per-step log-softmax over the feasible candidates, making step
    /// contributions comparable across the sequence.
    #[default]
    LogSoftmax,
}

/// Deterministic tie-breaking policy. Stage 1 prefers the lower node id,
/// stage 2 the deepest element of the rightmost path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LowIdDeepStack,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeConfig {
    /// Beam width W >= 1.
    pub beam_width: usize,
    pub normalize: ScoreNorm,
    pub tie_break: TieBreak,
    /// Record per-step hypotheses in the result.
    pub keep_trace: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            beam_width: 20,
            normalize: ScoreNorm::LogSoftmax,
            tie_break: TieBreak::LowIdDeepStack,
            keep_trace: false,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("invalid scores: matrix {matrix} entry ({row}, {col}) is not finite")]
    InvalidScores {
        matrix: MatrixId,
        row: usize,
        col: usize,
    },
    #[error("invalid decode config: {0}")]
    Config(String),
    #[error("score matrices are for {scores} boxes but the tree has {tree}")]
    DimensionMismatch { scores: usize, tree: usize },
    // Decoded sequences satisfy rightmost-path legality by construction;
    // surfacing this instead of panicking keeps the API total.
    #[error("internal error: decoded tree failed validation: {0}")]
    Internal(TreeError),
}

impl From<ScoreError> for DecodeError {
    fn from(e: ScoreError) -> Self {
        match e {
            ScoreError::NonFiniteEntry { matrix, row, col } => DecodeError::InvalidScores {
                matrix,
                row,
                col,
            },
            other => DecodeError::Config(other.to_string()),
        }
    }
}

/// One hypothesis snapshot in a beam trace.
#[derive(Clone, Debug, Serialize)]
pub struct TraceHyp {
    /// Reading-order prefix (stage 1) or parent choices so far (stage 2).
    pub seq: Vec<NodeId>,
    pub score: f64,
}

/// Per-step surviving hypotheses for both beam stages.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BeamTrace {
    pub order_steps: Vec<Vec<TraceHyp>>,
    pub parent_steps: Vec<Vec<TraceHyp>>,
}

/// A decoded tree with its cumulative scores under the decoding objective
/// (raw sums for greedy and raw-sum beam, log-softmax sums otherwise).
#[derive(Clone, Debug)]
pub struct DecodedResult {
    pub tree: LayoutTree,
    pub order_score: f64,
    pub parent_score: f64,
    pub beam_trace: Option<BeamTrace>,
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Greedy stage 1: the reading order selected by repeated argmax over
/// unvisited successors, lower id winning ties.
fn greedy_order(s: &ScoreMatrix, n: usize) -> Vec<NodeId> {
    let mut order = Vec::with_capacity(n + 1);
    order.push(ROOT);
    let mut visited = vec![false; n + 1];
    visited[ROOT] = true;
    for _ in 0..n {
        let last = *order.last().expect("non-empty");
        let mut best: Option<(NodeId, f64)> = None;
        for k in 0..=n {
            if visited[k] {
                continue;
            }
            let v = s.get(last, k);
            if best.map_or(true, |(_, bv)| v > bv) {
                best = Some((k, v));
            }
        }
        let (k, _) = best.expect("unvisited node remains");
        visited[k] = true;
        order.push(k);
    }
    order
}

/// Greedy stage 2: parent per node along the fixed order, restricted to the
/// rightmost path. Scanning the stack from its top keeps ties on the deepest
/// element.
fn greedy_parents(p: &ScoreMatrix, order: &[NodeId]) -> Vec<NodeId> {
    let n = order.len() - 1;
    let mut parent_of = vec![ROOT; n + 1];
    let mut stack: Vec<NodeId> = vec![ROOT];
    for &node in order.iter().skip(1) {
        let mut best_pos = stack.len() - 1;
        let mut best_v = p.get(node, stack[best_pos]);
        for pos in (0..stack.len() - 1).rev() {
            let v = p.get(node, stack[pos]);
            if v > best_v {
                best_v = v;
                best_pos = pos;
            }
        }
        parent_of[node] = stack[best_pos];
        stack.truncate(best_pos + 1);
        stack.push(node);
    }
    parent_of
}

/// Decode a tree by plain greedy argmax (Algorithm 1 semantics). Scores in
/// the result are raw sums.
pub fn decode_greedy(sp: &ScorePair) -> Result<DecodedResult, DecodeError> {
    sp.validate()?;
    let n = sp.n();
    let order = greedy_order(&sp.s, n);
    let parent_of = greedy_parents(&sp.p, &order);
    let tree = LayoutTree::from_order_and_parents(order, parent_of)
        .map_err(DecodeError::Internal)?;
    let (order_score, parent_score) = sp.raw_scores_of(&tree);
    Ok(DecodedResult {
        tree,
        order_score,
        parent_score,
        beam_trace: None,
    })
}

#[derive(Clone)]
struct OrderHyp {
    seq: Vec<NodeId>,
    visited: Vec<bool>,
    score: f64,
}

#[derive(Clone)]
struct ParentHyp {
    parents: Vec<NodeId>,
    stack: Vec<NodeId>,
    score: f64,
    /// Offset-from-top of each chosen parent; smaller means deeper, the
    /// preferred side of a tie.
    picks: Vec<u32>,
}

/// Decode with two sequential beam stages. The greedy trajectory is always
/// kept as a candidate, so the returned sequence score never falls below the
/// greedy one and width 1 under raw-sum aggregation reproduces greedy
/// decoding exactly.
pub fn decode_beam(sp: &ScorePair, cfg: &DecodeConfig) -> Result<DecodedResult, DecodeError> {
    if cfg.beam_width < 1 {
        return Err(DecodeError::Config(format!(
            "beam width must be >= 1, got {}",
            cfg.beam_width
        )));
    }
    sp.validate()?;
    let n = sp.n();
    let w = cfg.beam_width;
    let mut trace = cfg.keep_trace.then(BeamTrace::default);

    // Stage 1: reading order.
    let mut beam = vec![OrderHyp {
        seq: vec![ROOT],
        visited: {
            let mut v = vec![false; n + 1];
            v[ROOT] = true;
            v
        },
        score: 0.0,
    }];
    for _ in 0..n {
        let mut candidates: Vec<OrderHyp> = Vec::with_capacity(beam.len() * n);
        for hyp in &beam {
            let last = *hyp.seq.last().expect("non-empty");
            let feasible = (0..=n).filter(|&k| !hyp.visited[k]);
            let lse = match cfg.normalize {
                ScoreNorm::RawSum => 0.0,
                ScoreNorm::LogSoftmax => {
                    log_sum_exp(feasible.clone().map(|k| sp.s.get(last, k)))
                }
            };
            for k in feasible {
                let step = match cfg.normalize {
                    ScoreNorm::RawSum => sp.s.get(last, k),
                    ScoreNorm::LogSoftmax => sp.s.get(last, k) - lse,
                };
                let mut seq = hyp.seq.clone();
                seq.push(k);
                let mut visited = hyp.visited.clone();
                visited[k] = true;
                candidates.push(OrderHyp {
                    seq,
                    visited,
                    score: hyp.score + step,
                });
            }
        }
        candidates.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.seq.cmp(&b.seq)));
        candidates.truncate(w);
        if let Some(t) = trace.as_mut() {
            t.order_steps.push(
                candidates
                    .iter()
                    .map(|h| TraceHyp {
                        seq: h.seq.clone(),
                        score: h.score,
                    })
                    .collect(),
            );
        }
        beam = candidates;
    }
    // Greedy incumbent, scored under the same aggregation.
    let greedy_seq = greedy_order(&sp.s, n);
    let greedy_hyp = OrderHyp {
        score: order_seq_score(sp, &greedy_seq, cfg.normalize),
        visited: Vec::new(),
        seq: greedy_seq,
    };
    let (order, order_score) = {
        let mut best = (&greedy_hyp.seq, greedy_hyp.score);
        for hyp in &beam {
            if hyp.score.total_cmp(&best.1).is_gt()
                || (hyp.score == best.1 && hyp.seq < *best.0)
            {
                best = (&hyp.seq, hyp.score);
            }
        }
        (best.0.clone(), best.1)
    };

    // Stage 2: parent assignment along the fixed order.
    let mut beam = vec![ParentHyp {
        parents: vec![ROOT; n + 1],
        stack: vec![ROOT],
        score: 0.0,
        picks: Vec::new(),
    }];
    for &node in order.iter().skip(1) {
        let mut candidates: Vec<ParentHyp> = Vec::with_capacity(beam.len() * 4);
        for hyp in &beam {
            let lse = match cfg.normalize {
                ScoreNorm::RawSum => 0.0,
                ScoreNorm::LogSoftmax => {
                    log_sum_exp(hyp.stack.iter().map(|&p| sp.p.get(node, p)))
                }
            };
            for (off, pos) in (0..hyp.stack.len()).rev().enumerate() {
                let parent = hyp.stack[pos];
                let step = match cfg.normalize {
                    ScoreNorm::RawSum => sp.p.get(node, parent),
                    ScoreNorm::LogSoftmax => sp.p.get(node, parent) - lse,
                };
                let mut parents = hyp.parents.clone();
                parents[node] = parent;
                let mut stack = hyp.stack.clone();
                stack.truncate(pos + 1);
                stack.push(node);
                let mut picks = hyp.picks.clone();
                picks.push(off as u32);
                candidates.push(ParentHyp {
                    parents,
                    stack,
                    score: hyp.score + step,
                    picks,
                });
            }
        }
        candidates
            .sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.picks.cmp(&b.picks)));
        candidates.truncate(w);
        if let Some(t) = trace.as_mut() {
            t.parent_steps.push(
                candidates
                    .iter()
                    .map(|h| TraceHyp {
                        seq: order
                            .iter()
                            .skip(1)
                            .take(h.picks.len())
                            .map(|&i| h.parents[i])
                            .collect(),
                        score: h.score,
                    })
                    .collect(),
            );
        }
        beam = candidates;
    }
    let greedy_parent_of = greedy_parents(&sp.p, &order);
    let greedy_hyp = ParentHyp {
        score: parent_seq_score(sp, &order, &greedy_parent_of, cfg.normalize),
        picks: greedy_picks(&sp.p, &order),
        parents: greedy_parent_of,
        stack: Vec::new(),
    };
    let (parent_of, parent_score) = {
        let mut best = (&greedy_hyp.parents, greedy_hyp.score, &greedy_hyp.picks);
        for hyp in &beam {
            if hyp.score.total_cmp(&best.1).is_gt()
                || (hyp.score == best.1 && hyp.picks < *best.2)
            {
                best = (&hyp.parents, hyp.score, &hyp.picks);
            }
        }
        (best.0.clone(), best.1)
    };

    let tree = LayoutTree::from_order_and_parents(order, parent_of)
        .map_err(DecodeError::Internal)?;
    Ok(DecodedResult {
        tree,
        order_score,
        parent_score,
        beam_trace: trace,
    })
}

/// Aggregate score of a complete reading order under the given normalization.
fn order_seq_score(sp: &ScorePair, order: &[NodeId], norm: ScoreNorm) -> f64 {
    let n = sp.n();
    let mut visited = vec![false; n + 1];
    visited[ROOT] = true;
    let mut total = 0.0;
    for pair in order.windows(2) {
        let (last, k) = (pair[0], pair[1]);
        let step = match norm {
            ScoreNorm::RawSum => sp.s.get(last, k),
            ScoreNorm::LogSoftmax => {
                let lse = log_sum_exp(
                    (0..=n)
                        .filter(|&c| !visited[c])
                        .map(|c| sp.s.get(last, c)),
                );
                sp.s.get(last, k) - lse
            }
        };
        total += step;
        visited[k] = true;
    }
    total
}

/// Aggregate score of a complete parent assignment, replaying the stack.
fn parent_seq_score(sp: &ScorePair, order: &[NodeId], parent_of: &[NodeId], norm: ScoreNorm) -> f64 {
    let mut stack: Vec<NodeId> = vec![ROOT];
    let mut total = 0.0;
    for &node in order.iter().skip(1) {
        let parent = parent_of[node];
        let step = match norm {
            ScoreNorm::RawSum => sp.p.get(node, parent),
            ScoreNorm::LogSoftmax => {
                let lse = log_sum_exp(stack.iter().map(|&p| sp.p.get(node, p)));
                sp.p.get(node, parent) - lse
            }
        };
        total += step;
        let pos = stack
            .iter()
            .position(|&q| q == parent)
            .expect("parent on rightmost path");
        stack.truncate(pos + 1);
        stack.push(node);
    }
    total
}

/// Offset-from-top picks of the greedy parent trajectory, for tie-breaking.
fn greedy_picks(p: &ScoreMatrix, order: &[NodeId]) -> Vec<u32> {
    let mut stack: Vec<NodeId> = vec![ROOT];
    let mut picks = Vec::with_capacity(order.len() - 1);
    for &node in order.iter().skip(1) {
        let mut best_pos = stack.len() - 1;
        let mut best_v = p.get(node, stack[best_pos]);
        for pos in (0..stack.len() - 1).rev() {
            let v = p.get(node, stack[pos]);
            if v > best_v {
                best_v = v;
                best_pos = pos;
            }
        }
        picks.push((stack.len() - 1 - best_pos) as u32);
        stack.truncate(best_pos + 1);
        stack.push(node);
    }
    picks
}

/// Cross-entropy losses against a ground-truth tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Loss {
    /// Reading-order loss over all non-terminal nodes, divided by N.
    pub sub: f64,
    /// Parent loss over all non-root nodes, divided by N.
    pub par: f64,
    /// `sub + par`.
    pub total: f64,
}

fn log_softmax_at(row: &[f64], idx: usize) -> f64 {
    let lse = log_sum_exp(row.iter().copied());
    row[idx] - lse
}

/// Cross-entropy of the score rows at the ground-truth targets: every
/// non-terminal node's row of `S` against its true successor, and every
/// non-root node's row of `P` against its true parent, each averaged over N.
pub fn eval_loss(sp: &ScorePair, gt: &LayoutTree) -> Result<Loss, DecodeError> {
    if sp.n() != gt.n() {
        return Err(DecodeError::DimensionMismatch {
            scores: sp.n(),
            tree: gt.n(),
        });
    }
    sp.validate()?;
    let n = gt.n();
    if n == 0 {
        return Ok(Loss {
            sub: 0.0,
            par: 0.0,
            total: 0.0,
        });
    }
    let order = gt.order();
    let mut sub = 0.0;
    for t in 0..n {
        let i = order[t];
        let target = order[t + 1];
        sub -= log_softmax_at(sp.s.row(i), target);
    }
    sub /= n as f64;
    let mut par = 0.0;
    for i in 1..=n {
        par -= log_softmax_at(sp.p.row(i), gt.parent_of(i).expect("non-root"));
    }
    par /= n as f64;
    Ok(Loss {
        sub,
        par,
        total: sub + par,
    })
}
