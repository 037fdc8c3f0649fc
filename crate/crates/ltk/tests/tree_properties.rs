//! Structural properties of layout trees, checked against brute force:
//! rightmost-path legality during construction is exactly DFS-orderability.

use std::collections::{BTreeMap, HashSet};

use ltk::layout::{LayoutTree, NodeId};
use ltk::synth::random_tree;

/// All DFS sequences of the subtree rooted at `node`: the node, then the
/// children's sequences concatenated, over every permutation of children.
/// DFS visits a whole subtree before the next sibling, so no interleaving.
fn dfs_sequences(node: NodeId, children: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let kids = &children[node];
    if kids.is_empty() {
        return vec![vec![node]];
    }
    let mut results = Vec::new();
    let mut perm: Vec<NodeId> = kids.clone();
    permutations(&mut perm, 0, &mut |p: &[NodeId]| {
        let mut partials: Vec<Vec<NodeId>> = vec![vec![node]];
        for &k in p {
            let child_seqs = dfs_sequences(k, children);
            let mut next = Vec::with_capacity(partials.len() * child_seqs.len());
            for base in &partials {
                for cs in &child_seqs {
                    let mut v = base.clone();
                    v.extend_from_slice(cs);
                    next.push(v);
                }
            }
            partials = next;
        }
        results.extend(partials);
    });
    results
}

fn permutations<T: Clone>(items: &mut [T], k: usize, f: &mut impl FnMut(&[T])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Every acyclic parent map over 1..=n (trees rooted at 0).
fn all_parent_maps(n: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut parent_of = vec![0usize; n + 1];
    fn rec(i: usize, n: usize, parent_of: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if i > n {
            // Acyclic iff every chain reaches 0.
            for start in 1..=n {
                let mut cur = start;
                let mut steps = 0;
                while cur != 0 {
                    cur = parent_of[cur];
                    steps += 1;
                    if steps > n {
                        return;
                    }
                }
            }
            out.push(parent_of.clone());
            return;
        }
        for p in 0..=n {
            if p == i {
                continue;
            }
            parent_of[i] = p;
            rec(i + 1, n, parent_of, out);
        }
    }
    rec(1, n, &mut parent_of, &mut out);
    out
}

fn heap_permutations(n: usize) -> Vec<Vec<NodeId>> {
    let mut items: Vec<NodeId> = (1..=n).collect();
    let mut out = Vec::new();
    permutations(&mut items, 0, &mut |p: &[NodeId]| {
        let mut order = Vec::with_capacity(n + 1);
        order.push(0);
        order.extend_from_slice(p);
        out.push(order);
    });
    out
}

#[test]
fn build_accepts_exactly_the_dfs_orders_exhaustive() {
    // For every tree with N <= 6 and every permutation, build succeeds iff
    // some child ordering of that tree yields the permutation as its DFS.
    for n in 0..=6 {
        let perms = heap_permutations(n);
        for parent_of in all_parent_maps(n) {
            let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n + 1];
            for i in 1..=n {
                children[parent_of[i]].push(i);
            }
            let valid: HashSet<Vec<NodeId>> =
                dfs_sequences(0, &children).into_iter().collect();
            let parent_map: BTreeMap<NodeId, NodeId> =
                (1..=n).map(|i| (i, parent_of[i])).collect();
            for order in &perms {
                let built = LayoutTree::build(order, &parent_map, n);
                assert_eq!(
                    built.is_ok(),
                    valid.contains(order),
                    "n={n} parent={parent_of:?} order={order:?}"
                );
                if let Ok(tree) = built {
                    assert_eq!(tree.dfs_replay(), *order);
                }
            }
        }
    }
}

#[test]
fn three_node_sibling_orders_brute_force() {
    // The n = 2 slice of the exhaustive check, spelled out: a root with two
    // children admits both sibling orders, a chain admits one.
    let star: BTreeMap<NodeId, NodeId> = [(1, 0), (2, 0)].into_iter().collect();
    assert!(LayoutTree::build(&[0, 1, 2], &star, 2).is_ok());
    assert!(LayoutTree::build(&[0, 2, 1], &star, 2).is_ok());
    let chain: BTreeMap<NodeId, NodeId> = [(1, 0), (2, 1)].into_iter().collect();
    assert!(LayoutTree::build(&[0, 1, 2], &chain, 2).is_ok());
    assert!(LayoutTree::build(&[0, 2, 1], &chain, 2).is_err());
}

#[test]
fn dfs_replay_equals_order_on_random_trees() {
    for seed in 0..1000 {
        let n = (seed as usize % 10) + 1;
        let tree = random_tree(n, seed);
        assert_eq!(tree.dfs_replay(), tree.order(), "seed {seed}");
    }
}

#[test]
fn build_roundtrips_random_trees() {
    for seed in 0..1000 {
        let n = seed as usize % 12;
        let tree = random_tree(n, seed);
        let rebuilt = LayoutTree::build(&tree.dfs_replay(), &tree.parent_map(), n).unwrap();
        assert_eq!(rebuilt, tree, "seed {seed}");
    }
}
