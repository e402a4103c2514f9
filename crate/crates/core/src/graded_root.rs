//! Graded roots built from tau sequences and their `F[U]`-module towers.
//!
//! The root associated to `τ` depends only on the values of the local
//! minima and maxima of `τ` in positional order, so it is stored as that
//! alternating list. Leaves sit at minima; two neighbouring branches merge
//! at the height of the largest maximum separating them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::delta_tau::TauProfile;
use crate::error::{Error, Result};

/// A local extremum of `τ`: plateau start and value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremum {
    pub position: u64,
    pub value: i64,
}

/// Alternating `m_0, M_1, m_1, ..., M_k, m_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRoot {
    extrema: Vec<Extremum>,
}

impl GradedRoot {
    /// Extracts the extrema of a finite tau sequence whose continuation past
    /// the last entry is non-decreasing. Plateaus collapse to their first
    /// index; boundary points count only when they are minima.
    pub fn from_tau(tau: &[i64]) -> Self {
        assert!(!tau.is_empty(), "tau sequence must be non-empty");
        let mut extrema: Vec<Extremum> = Vec::new();
        // Walk plateaus: (start, value) of the previous, current, next plateau.
        let mut prev: Option<i64> = None;
        let mut i = 0usize;
        while i < tau.len() {
            let value = tau[i];
            let start = i;
            while i < tau.len() && tau[i] == value {
                i += 1;
            }
            let next = tau.get(i).copied();
            let lower_left = prev.is_none_or(|v| v > value);
            let kind = match (prev, next) {
                (_, None) if lower_left => Some(false),
                (_, Some(n)) if lower_left && n > value => Some(false),
                (Some(p), Some(n)) if p < value && n < value => Some(true),
                _ => None,
            };
            if let Some(is_max) = kind {
                debug_assert_eq!(is_max, extrema.len() % 2 == 1);
                extrema.push(Extremum { position: start as u64, value });
            }
            prev = Some(value);
        }
        debug_assert!(extrema.len() % 2 == 1);
        Self { extrema }
    }

    pub fn extrema(&self) -> &[Extremum] {
        &self.extrema
    }

    /// The alternating value list.
    pub fn values(&self) -> Vec<i64> {
        self.extrema.iter().map(|e| e.value).collect()
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> + '_ {
        self.extrema.iter().step_by(2)
    }

    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> + '_ {
        self.extrema.iter().skip(1).step_by(2)
    }

    pub fn leaf_count(&self) -> usize {
        self.extrema.len().div_ceil(2)
    }

    pub fn min_value(&self) -> i64 {
        self.minima().map(|e| e.value).min().expect("at least one leaf")
    }

    /// Graphviz rendering of the merge tree: one node per leaf and per merge
    /// vertex, edges pointing from child to parent (upwards in `χ`).
    pub fn to_dot(&self, name: &str) -> String {
        let tree = MergeTree::new(self);
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=BT;");
        for (id, node) in tree.nodes.iter().enumerate() {
            let shape = if node.is_leaf { "circle" } else { "box" };
            let _ = writeln!(out, "  n{id} [label=\"χ={}\", shape={shape}, pos_hint=\"{}\"];", node.chi, node.position);
        }
        for (id, node) in tree.nodes.iter().enumerate() {
            if let Some(parent) = node.parent {
                let _ = writeln!(out, "  n{id} -> n{parent} [label=\"{}\"];", tree.nodes[parent].chi - node.chi);
            }
        }
        let _ = writeln!(out, "  stem [shape=none, label=\"∞\"];");
        let _ = writeln!(out, "  n{} -> stem [style=dashed];", tree.root);
        out.push_str("}\n");
        out
    }
}

pub fn build_root(tp: &TauProfile) -> GradedRoot {
    GradedRoot::from_tau(&tp.tau)
}

struct MergeNode {
    chi: i64,
    position: u64,
    is_leaf: bool,
    parent: Option<usize>,
}

struct MergeTree {
    nodes: Vec<MergeNode>,
    root: usize,
}

impl MergeTree {
    /// Leaves first, then merge vertices. Maxima are processed by increasing
    /// value; adjacent components joined at the same height share one vertex.
    fn new(root: &GradedRoot) -> Self {
        let leaves: Vec<&Extremum> = root.minima().collect();
        let maxima: Vec<&Extremum> = root.maxima().collect();
        let mut nodes: Vec<MergeNode> = leaves
            .iter()
            .map(|e| MergeNode { chi: e.value, position: e.position, is_leaf: true, parent: None })
            .collect();
        // union-find over leaf slots; top[c] is the current tree node of component c
        let mut uf: Vec<usize> = (0..leaves.len()).collect();
        let mut top: Vec<usize> = (0..leaves.len()).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut order: Vec<usize> = (0..maxima.len()).collect();
        order.sort_by_key(|&i| (maxima[i].value, i));
        for &m in &order {
            let (l, r) = (find(&mut uf, m), find(&mut uf, m + 1));
            let chi = maxima[m].value;
            let (tl, tr) = (top[l], top[r]);
            let merged = match (nodes[tl].is_leaf || nodes[tl].chi != chi, nodes[tr].is_leaf || nodes[tr].chi != chi) {
                // neither side already ends at this height: new vertex
                (true, true) => {
                    nodes.push(MergeNode { chi, position: maxima[m].position, is_leaf: false, parent: None });
                    let id = nodes.len() - 1;
                    nodes[tl].parent = Some(id);
                    nodes[tr].parent = Some(id);
                    id
                }
                (false, true) => {
                    nodes[tr].parent = Some(tl);
                    tl
                }
                (true, false) => {
                    nodes[tl].parent = Some(tr);
                    tr
                }
                (false, false) => {
                    for node in nodes.iter_mut() {
                        if node.parent == Some(tr) {
                            node.parent = Some(tl);
                        }
                    }
                    nodes[tr].parent = None;
                    nodes[tr].chi = i64::MIN;
                    tl
                }
            };
            uf[r] = l;
            top[l] = merged;
        }
        let root = top[find(&mut uf, 0)];
        // drop vertices absorbed by equal-height merges
        let keep: Vec<bool> = nodes.iter().map(|n| n.chi != i64::MIN).collect();
        let mut remap = vec![usize::MAX; nodes.len()];
        let mut kept = Vec::new();
        for (i, node) in nodes.into_iter().enumerate() {
            if keep[i] {
                remap[i] = kept.len();
                kept.push(node);
            }
        }
        for node in kept.iter_mut() {
            node.parent = node.parent.map(|p| remap[p]);
        }
        Self { nodes: kept, root: remap[root] }
    }
}

/// `T⁺_d(n)`: bottom degree `d`, length `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tower {
    pub bottom: i64,
    pub length: u64,
}

impl Tower {
    pub fn top(&self) -> i64 {
        self.bottom + 2 * self.length as i64 - 2
    }
}

/// `F[U]_{d} ⊕ ⨁ T⁺_{d_k}(n_k)` in the `2χ` grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UModule {
    pub infinite_bottom: i64,
    pub towers: Vec<Tower>,
}

impl UModule {
    pub fn reduced_rank(&self) -> u64 {
        self.towers.iter().map(|t| t.length).sum()
    }

    pub fn top_reduced_degree(&self) -> Result<i64> {
        self.towers.iter().map(Tower::top).max().ok_or(Error::EmptyReduced)
    }

    /// True iff no element of top reduced degree lies in the image of `U`,
    /// i.e. every tower reaching that degree has length one.
    pub fn top_degree_outside_u_image(&self) -> Result<bool> {
        let top = self.top_reduced_degree()?;
        Ok(self.towers.iter().filter(|t| t.top() == top).all(|t| t.length == 1))
    }

    /// Reduced rank in each degree.
    pub fn reduced_rank_by_degree(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for t in &self.towers {
            for k in 0..t.length as i64 {
                *out.entry(t.bottom + 2 * k).or_default() += 1;
            }
        }
        out
    }

    /// Towers as a sorted multiset.
    pub fn canonical_towers(&self) -> Vec<Tower> {
        let mut t = self.towers.clone();
        t.sort_unstable();
        t
    }

    /// Same module with every degree moved by `shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            infinite_bottom: self.infinite_bottom + shift,
            towers: self.towers.iter().map(|t| Tower { bottom: t.bottom + shift, length: t.length }).collect(),
        }
    }
}

/// Which of several equal-`χ` leaves is taken first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Leftmost,
    Rightmost,
}

pub fn tower_decomposition(gr: &GradedRoot) -> UModule {
    tower_decomposition_with(gr, TieBreak::Leftmost)
}

/// Leaf indices by increasing value, ties resolved by `tie`. Values span a
/// narrow band in practice, so a counting sort is used when it is cheap.
fn leaf_order(leaves: &[i64], tie: TieBreak) -> Vec<usize> {
    let k = leaves.len();
    let lo = leaves.iter().copied().min().unwrap_or(0);
    let hi = leaves.iter().copied().max().unwrap_or(0);
    let span = hi.abs_diff(lo) as usize + 1;
    if span > 4 * k + 64 {
        let mut order: Vec<usize> = (0..k).collect();
        match tie {
            TieBreak::Leftmost => order.sort_unstable_by_key(|&i| (leaves[i], i)),
            TieBreak::Rightmost => order.sort_unstable_by_key(|&i| (leaves[i], std::cmp::Reverse(i))),
        }
        return order;
    }
    let mut start = vec![0usize; span + 1];
    for &v in leaves {
        start[(v - lo) as usize + 1] += 1;
    }
    for b in 1..=span {
        start[b] += start[b - 1];
    }
    let mut order = vec![0usize; k];
    let mut place = |i: usize| {
        let b = (leaves[i] - lo) as usize;
        order[start[b]] = i;
        start[b] += 1;
    };
    match tie {
        TieBreak::Leftmost => (0..k).for_each(&mut place),
        TieBreak::Rightmost => (0..k).rev().for_each(&mut place),
    }
    order
}

/// Leaves are taken in order of increasing `χ`. The first seeds the infinite
/// tower; each later leaf `v` yields a tower from `2χ(v)` up to the lowest
/// vertex dominating `v` and some earlier leaf. That vertex sits at the
/// smallest, over earlier leaves, of the largest maximum between them, and
/// only the nearest earlier leaf on each side can attain it.
///
/// Nearest earlier neighbours are found by deleting leaves from a linked
/// list in reverse order, carrying the largest maximum across each gap.
pub fn tower_decomposition_with(gr: &GradedRoot, tie: TieBreak) -> UModule {
    let leaves: Vec<i64> = gr.minima().map(|e| e.value).collect();
    let k = leaves.len();
    let order = leaf_order(&leaves, tie);

    const NONE: usize = usize::MAX;
    let mut prev: Vec<usize> = (0..k).map(|i| i.wrapping_sub(1)).collect();
    let mut next: Vec<usize> = (1..=k).map(|i| if i == k { NONE } else { i }).collect();
    // gap[i]: largest maximum between leaf i and its current right neighbour
    let mut gap: Vec<i64> = gr.maxima().map(|e| e.value).collect();
    gap.push(i64::MIN);

    let mut towers = vec![Tower { bottom: 0, length: 0 }; k.saturating_sub(1)];
    for (slot, &leaf) in order.iter().enumerate().skip(1).rev() {
        let (l, r) = (prev[leaf], next[leaf]);
        let merge = match (l != NONE, r != NONE) {
            (true, true) => gap[l].min(gap[leaf]),
            (true, false) => gap[l],
            (false, true) => gap[leaf],
            (false, false) => unreachable!("an earlier leaf exists"),
        };
        let chi = leaves[leaf];
        towers[slot - 1] = Tower { bottom: 2 * chi, length: (merge - chi) as u64 };
        if l != NONE {
            gap[l] = gap[l].max(gap[leaf]);
            next[l] = r;
        }
        if r != NONE {
            prev[r] = l;
        }
    }
    UModule { infinite_bottom: 2 * leaves[order[0]], towers }
}

pub fn reduced_rank(m: &UModule) -> u64 {
    m.reduced_rank()
}

pub fn top_reduced_degree_rel(m: &UModule) -> Result<i64> {
    m.top_reduced_degree()
}

pub fn u_image_top_degree_check(m: &UModule) -> Result<bool> {
    m.top_degree_outside_u_image()
}

/// Reduced rank in degree `2k` read straight off the quotient construction:
/// vertices at height `k` are the maximal runs of `{i : τ(i) <= k}`, and one
/// of them belongs to the infinite stem.
pub fn reduced_rank_by_vertex_count(tau: &[i64]) -> BTreeMap<i64, u64> {
    let lo = *tau.iter().min().expect("non-empty");
    let hi = *tau.iter().max().expect("non-empty");
    // a run of {τ <= k} starts at i exactly for τ(i) <= k < τ(i-1)
    let mut starts = vec![0i64; (hi - lo + 2) as usize];
    let level = |k: i64| (k - lo) as usize;
    starts[level(tau[0])] += 1;
    for w in tau.windows(2) {
        if w[1] < w[0] {
            starts[level(w[1])] += 1;
            starts[level(w[0])] -= 1;
        }
    }
    let mut out = BTreeMap::new();
    let mut runs = 0;
    for k in lo..hi {
        runs += starts[level(k)];
        if runs > 1 {
            out.insert(2 * k, (runs - 1) as u64);
        }
    }
    out
}
