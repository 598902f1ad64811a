//! Depth-labelled forests: the shape of a specialization order.
//!
//! Node `g` specializes to node `h` (`g ~> h`) when `h` is `g` or one of its
//! ancestors. Roots have depth 1; deeper nodes are predecessors.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    depth: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    max_below: Vec<usize>,
}

/// Which family of strata: `S` (some predecessor at depth at least `j`) or
/// `C` (deepest predecessor exactly at depth `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumKind {
    S,
    C,
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumKind::S => write!(f, "S"),
            StratumKind::C => write!(f, "C"),
        }
    }
}

/// Predecessor sets taken from `S`-strata (`B`) or `C`-strata (`A`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredKind {
    B,
    A,
}

impl fmt::Display for PredKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredKind::B => write!(f, "B"),
            PredKind::A => write!(f, "A"),
        }
    }
}

impl Forest {
    /// Nodes are `0..depth.len()`.
    pub fn new(depth: Vec<usize>, parent: Vec<Option<usize>>) -> Result<Self> {
        let m = depth.len();
        if parent.len() != m {
            return Err(Error::Structural(format!("{m} depths but {} parents", parent.len())));
        }
        let mut children = vec![Vec::new(); m];
        for i in 0..m {
            match parent[i] {
                None if depth[i] != 1 => {
                    return Err(Error::Structural(format!("node {i} has depth {} but no parent", depth[i])))
                }
                None => {}
                Some(p) if p >= m => return Err(Error::Structural(format!("node {i}: parent {p} out of range"))),
                Some(p) if depth[i] != depth[p] + 1 => {
                    return Err(Error::Structural(format!(
                        "node {i} has depth {} but its parent {p} has depth {}",
                        depth[i], depth[p]
                    )))
                }
                Some(p) => children[p].push(i),
            }
        }
        // depth strictly increases along parent links, so no cycles remain
        let mut max_below = depth.clone();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(depth[i]));
        for i in order {
            if let Some(p) = parent[i] {
                max_below[p] = max_below[p].max(max_below[i]);
            }
        }
        Ok(Self {
            depth,
            parent,
            children,
            max_below,
        })
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parent[i].is_none()).collect()
    }

    /// Largest depth of a node, 0 for the empty forest.
    pub fn length(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Nodes grouped by depth; entry `d-1` lists depth `d` in id order.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.length()];
        for i in 0..self.len() {
            out[self.depth[i] - 1].push(i);
        }
        out
    }

    pub fn level(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.depth[i] == d).collect()
    }

    /// Deepest depth among `i` and its predecessors.
    pub fn max_below(&self, i: usize) -> usize {
        self.max_below[i]
    }

    /// The ancestor of `g` at depth `d`.
    pub fn successor(&self, g: usize, d: usize) -> Result<usize> {
        if d == 0 || d > self.depth[g] {
            return Err(Error::NoSuccessor {
                depth: self.depth[g],
                target: d,
            });
        }
        let mut x = g;
        while self.depth[x] > d {
            x = self.parent[x].unwrap();
        }
        Ok(x)
    }

    /// `g ~> h`.
    pub fn specializes(&self, g: usize, h: usize) -> bool {
        self.depth[h] <= self.depth[g] && self.successor(g, self.depth[h]).ok() == Some(h)
    }

    pub fn root_of(&self, g: usize) -> usize {
        self.successor(g, 1).expect("depth 1 is always reachable")
    }

    /// All nodes specializing to `h`, including `h`, in id order.
    pub fn predecessors(&self, h: usize) -> Vec<usize> {
        let mut out = vec![h];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Connected components as node lists, ordered by their root id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.roots().into_iter().map(|r| self.predecessors(r)).collect()
    }

    /// Deepest level a component reaches.
    pub fn component_lowest_level(&self, component: &[usize]) -> usize {
        component.iter().map(|&i| self.depth[i]).max().unwrap_or(0)
    }

    fn check_depths(&self, k: usize, j: usize) -> Result<()> {
        if k == 0 || k > j {
            return Err(Error::Usage(format!("stratum needs 1 <= k <= j, got k={k}, j={j}")));
        }
        Ok(())
    }

    /// `S^k_j` or `C^k_j` in id order. Depths past the forest give empty sets.
    pub fn stratum(&self, kind: StratumKind, k: usize, j: usize) -> Result<Vec<usize>> {
        self.check_depths(k, j)?;
        Ok(self.stratum_within(kind, k, j, 0..self.len()))
    }

    /// The stratum restricted to the nodes of `within`.
    pub fn stratum_within(
        &self,
        kind: StratumKind,
        k: usize,
        j: usize,
        within: impl IntoIterator<Item = usize>,
    ) -> Vec<usize> {
        within
            .into_iter()
            .filter(|&i| self.depth[i] == k && self.in_stratum(kind, i, j))
            .collect()
    }

    fn in_stratum(&self, kind: StratumKind, i: usize, j: usize) -> bool {
        match kind {
            StratumKind::S => self.max_below[i] >= j,
            StratumKind::C => self.max_below[i] == j,
        }
    }

    /// `B^{j1,j2}(h)` = predecessors of `h` in `S^{j2}_{j1}`, or `A^{j1,j2}(h)`
    /// with `C` in place of `S`. Requires `depth(h) <= j2 <= j1`.
    pub fn pred_set(&self, h: usize, j1: usize, j2: usize, kind: PredKind) -> Result<Vec<usize>> {
        if !(self.depth[h] <= j2 && j2 <= j1) {
            return Err(Error::Usage(format!(
                "pred_set needs depth(h)={} <= j2={j2} <= j1={j1}",
                self.depth[h]
            )));
        }
        let stratum = match kind {
            PredKind::B => StratumKind::S,
            PredKind::A => StratumKind::C,
        };
        Ok(self
            .predecessors(h)
            .into_iter()
            .filter(|&g| self.depth[g] == j2 && self.in_stratum(stratum, g, j1))
            .collect())
    }

    /// The sub-forest on `nodes` (closed under parents); node `i` of the
    /// result is `nodes[i]`.
    pub fn restrict(&self, nodes: &[usize]) -> Result<Forest> {
        let mut pos = vec![usize::MAX; self.len()];
        for (new, &old) in nodes.iter().enumerate() {
            pos[old] = new;
        }
        let parent = nodes
            .iter()
            .map(|&i| match self.parent[i] {
                None => Ok(None),
                Some(p) if pos[p] != usize::MAX => Ok(Some(pos[p])),
                Some(p) => Err(Error::Usage(format!("node {i} kept without its parent {p}"))),
            })
            .collect::<Result<_>>()?;
        Forest::new(nodes.iter().map(|&i| self.depth[i]).collect(), parent)
    }

    /// Nodes of depth at most `d`.
    pub fn truncate(&self, d: usize) -> Forest {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.depth[i] <= d).collect();
        self.restrict(&keep).expect("truncation keeps parents")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Root 0 with children 1, 2; child 3 of 1; separate root 4.
    fn sample() -> Forest {
        Forest::new(vec![1, 2, 2, 3, 1], vec![None, Some(0), Some(0), Some(1), None]).unwrap()
    }

    #[test]
    fn structure() {
        let f = sample();
        assert_eq!(f.length(), 3);
        assert_eq!(f.levels(), vec![vec![0, 4], vec![1, 2], vec![3]]);
        assert_eq!(f.successor(3, 1).unwrap(), 0);
        assert!(f.specializes(3, 0));
        assert!(!f.specializes(2, 1));
        assert!(matches!(f.successor(0, 2), Err(Error::NoSuccessor { .. })));
        assert_eq!(f.components(), vec![vec![0, 1, 2, 3], vec![4]]);
        assert_eq!(f.component_lowest_level(&[4]), 1);
    }

    #[test]
    fn strata() {
        let f = sample();
        assert_eq!(f.stratum(StratumKind::S, 1, 3).unwrap(), vec![0]);
        assert_eq!(f.stratum(StratumKind::C, 1, 1).unwrap(), vec![4]);
        assert_eq!(f.stratum(StratumKind::S, 2, 2).unwrap(), vec![1, 2]);
        assert_eq!(f.stratum(StratumKind::C, 2, 2).unwrap(), vec![2]);
        assert!(f.stratum(StratumKind::S, 3, 2).is_err());
        assert_eq!(f.pred_set(0, 3, 2, PredKind::B).unwrap(), vec![1]);
        assert_eq!(f.pred_set(0, 2, 2, PredKind::A).unwrap(), vec![2]);
        assert!(f.pred_set(0, 3, 3, PredKind::A).unwrap().len() == 1);
        assert!(f.pred_set(1, 1, 1, PredKind::B).is_err());
    }

    #[test]
    fn rejects_bad_depths() {
        assert!(Forest::new(vec![2], vec![None]).is_err());
        assert!(Forest::new(vec![1, 3], vec![None, Some(0)]).is_err());
        assert!(Forest::new(vec![1, 2], vec![None, Some(7)]).is_err());
    }

    #[test]
    fn truncation() {
        let f = sample().truncate(2);
        assert_eq!(f.len(), 4);
        assert_eq!(f.length(), 2);
    }
}
