//! Rooted trees with labelled legs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Node 0 is the root. `parent[v]` is `None` only for the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootedTree {
    pub parent: Vec<Option<usize>>,
    pub legs: Vec<Vec<usize>>,
}

impl Default for RootedTree {
    fn default() -> Self {
        Self::root(Vec::new())
    }
}

impl RootedTree {
    pub fn root(legs: Vec<usize>) -> Self {
        RootedTree { parent: vec![None], legs: vec![legs] }
    }

    pub fn add_child(&mut self, parent: usize, legs: Vec<usize>) -> usize {
        self.parent.push(Some(parent));
        self.legs.push(legs);
        self.parent.len() - 1
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> usize {
        self.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(v)).collect()
    }

    /// Parent edge, child edges and legs.
    pub fn valence(&self, v: usize) -> usize {
        self.parent[v].is_some() as usize + self.children(v).len() + self.legs[v].len()
    }

    /// First non-root node of valence below 3.
    pub fn unstable_node(&self) -> Option<usize> {
        (1..self.len()).find(|&v| self.valence(v) < 3)
    }

    pub fn is_stable(&self) -> bool {
        self.unstable_node().is_none()
    }

    pub fn all_legs(&self) -> BTreeSet<usize> {
        self.legs.iter().flatten().copied().collect()
    }

    /// Legs in the subtree below `v`.
    pub fn subtree_legs(&self, v: usize) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.legs[v].iter().copied().collect();
        for c in self.children(v) {
            out.extend(self.subtree_legs(c));
        }
        out
    }

    /// Isomorphism-invariant code: `(legs;children)` with both sorted.
    pub fn code_at(&self, v: usize) -> String {
        let mut legs = self.legs[v].clone();
        legs.sort();
        let mut kids: Vec<String> = self.children(v).into_iter().map(|c| self.code_at(c)).collect();
        kids.sort();
        let legs: Vec<String> = legs.iter().map(|l| l.to_string()).collect();
        format!("({};{})", legs.join(","), kids.concat())
    }

    pub fn code(&self) -> String {
        self.code_at(0)
    }

    /// Same tree with nodes renumbered in depth-first order of sorted codes
    /// and legs sorted.
    pub fn canonical(&self) -> RootedTree {
        let mut legs0 = self.legs[0].clone();
        legs0.sort();
        let mut out = RootedTree::root(legs0);
        fn rec(t: &RootedTree, v: usize, at: usize, out: &mut RootedTree) {
            let mut kids: Vec<(String, usize)> = t.children(v).into_iter().map(|c| (t.code_at(c), c)).collect();
            kids.sort();
            for (_, c) in kids {
                let mut l = t.legs[c].clone();
                l.sort();
                let id = out.add_child(at, l);
                rec(t, c, id, out);
            }
        }
        rec(self, 0, 0, &mut out);
        out
    }

    /// Contracts the edge above `c`, merging `c` into its parent.
    pub fn contract(&self, c: usize) -> RootedTree {
        let p = self.parent[c].expect("non-root");
        let mut t = self.clone();
        let moved = std::mem::take(&mut t.legs[c]);
        t.legs[p].extend(moved);
        for v in 0..t.len() {
            if t.parent[v] == Some(c) {
                t.parent[v] = Some(p);
            }
        }
        // drop node c and renumber
        let map: Vec<Option<usize>> = (0..t.len()).scan(0, |k, v| Some(if v == c { None } else { *k += 1; Some(*k - 1) })).collect();
        let parent = (0..t.len()).filter(|&v| v != c).map(|v| t.parent[v].map(|q| map[q].unwrap())).collect();
        let legs = (0..t.len()).filter(|&v| v != c).map(|v| t.legs[v].clone()).collect();
        RootedTree { parent, legs }
    }

    /// Subtree leg sets of the non-root nodes (a laminar family).
    pub fn laminar_family(&self) -> BTreeSet<BTreeSet<usize>> {
        (1..self.len()).map(|v| self.subtree_legs(v)).collect()
    }

    /// Tree whose non-root nodes are the members of a laminar family of
    /// subsets of `legs`.
    pub fn from_laminar(legs: &[usize], family: &[BTreeSet<usize>]) -> Option<RootedTree> {
        let all: BTreeSet<usize> = legs.iter().copied().collect();
        let mut sets: Vec<BTreeSet<usize>> = family.to_vec();
        sets.sort_by_key(|s| std::cmp::Reverse(s.len()));
        let mut t = RootedTree::root(Vec::new());
        let mut node_sets: Vec<BTreeSet<usize>> = vec![all.clone()];
        for s in &sets {
            if !s.is_subset(&all) {
                return None;
            }
            // smallest existing node containing s, the deepest on ties with the root
            let p = (0..node_sets.len())
                .filter(|&v| s.is_subset(&node_sets[v]) && (v == 0 || node_sets[v] != *s))
                .min_by_key(|&v| (node_sets[v].len(), std::cmp::Reverse(v)))?;
            for (v, ns) in node_sets.iter().enumerate().skip(1) {
                if !(ns.is_disjoint(s) || s.is_subset(ns) || ns.is_subset(s)) || (v != p && ns == s) {
                    return None;
                }
            }
            t.add_child(p, Vec::new());
            node_sets.push(s.clone());
        }
        for l in legs {
            let v = (0..node_sets.len()).filter(|&v| node_sets[v].contains(l)).min_by_key(|&v| (node_sets[v].len(), std::cmp::Reverse(v)))?;
            t.legs[v].push(*l);
        }
        Some(t.canonical())
    }
}

/// Every laminar family of subsets of `legs` of size at least two, with at
/// most `max_sets` members. These are the stable trees on `legs`.
pub fn stable_trees(legs: &[usize], max_sets: usize) -> Vec<RootedTree> {
    let n = legs.len();
    let cands: Vec<BTreeSet<usize>> = (1u32..1 << n)
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (0..n).filter(|k| m >> k & 1 == 1).map(|k| legs[k]).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<BTreeSet<usize>> = Vec::new();
    fn rec(start: usize, cands: &[BTreeSet<usize>], chosen: &mut Vec<BTreeSet<usize>>, max: usize, legs: &[usize], out: &mut Vec<RootedTree>) {
        out.push(RootedTree::from_laminar(legs, chosen).expect("laminar"));
        if chosen.len() == max {
            return;
        }
        for k in start..cands.len() {
            let s = &cands[k];
            if chosen.iter().all(|c| c.is_disjoint(s) || c.is_subset(s) || s.is_subset(c)) {
                chosen.push(s.clone());
                rec(k + 1, cands, chosen, max, legs, out);
                chosen.pop();
            }
        }
    }
    rec(0, &cands, &mut chosen, max_sets, legs, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_examples() {
        let mut t = RootedTree::root(vec![]);
        t.add_child(0, vec![1, 2]);
        assert!(t.is_stable());
        let mut u = RootedTree::root(vec![2]);
        u.add_child(0, vec![1]);
        assert_eq!(u.unstable_node(), Some(1));
        let mut c = RootedTree::root(vec![]);
        let a = c.add_child(0, vec![]);
        c.add_child(a, vec![1, 2]);
        assert_eq!(c.unstable_node(), Some(a));
    }

    #[test]
    fn contraction_and_codes() {
        let mut t = RootedTree::root(vec![3]);
        let a = t.add_child(0, vec![2]);
        t.add_child(a, vec![1, 4]);
        let s = t.contract(a);
        assert_eq!(s.len(), 2);
        assert!(s.is_stable());
        assert_eq!(s.code(), "(2,3;(1,4;))");
        assert_eq!(t.canonical().canonical(), t.canonical());
        assert_eq!(RootedTree::from_laminar(&[1, 2, 3, 4], &t.laminar_family().into_iter().collect::<Vec<_>>()).unwrap(), t.canonical());
    }

    #[test]
    fn stable_tree_counts() {
        // one extra node: subsets of size ≥ 2
        let one: usize = stable_trees(&[1, 2, 3], 1).len();
        assert_eq!(one, 1 + 4);
        assert!(stable_trees(&[1, 2, 3, 4], 3).iter().all(|t| t.is_stable()));
    }
}
