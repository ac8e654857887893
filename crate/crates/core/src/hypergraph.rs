use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multi-hypergraph on `[0, n)`. Edges are stored as sorted vertex lists
/// (multisets), so loops and repeated edges are representable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.n, raw.edges)
    }
}

impl Hypergraph {
    /// Validates labels and uniform edge size. Edges keep their given order;
    /// vertices within an edge are sorted.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid(
                "hypergraph needs at least one vertex".into(),
            ));
        }
        let mut out = Vec::with_capacity(edges.len());
        let size = edges.first().map(Vec::len);
        for mut e in edges {
            if Some(e.len()) != size || e.is_empty() {
                return Err(Error::Invalid(
                    "edges must all have the same positive size".into(),
                ));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::Invalid(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            e.sort_unstable();
            out.push(e);
        }
        Ok(Hypergraph { n, edges: out })
    }

    /// Edge size, or `None` for an edgeless hypergraph.
    pub fn uniformity(&self) -> Option<usize> {
        self.edges.first().map(Vec::len)
    }

    pub fn has_loop(&self) -> bool {
        self.edges
            .iter()
            .any(|e| e.windows(2).any(|w| w[0] == w[1]))
    }

    pub fn has_repeated_edge(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        !self.edges.iter().all(|e| seen.insert(e.as_slice()))
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loop() && !self.has_repeated_edge()
    }

    /// Berge connectivity. Isolated vertices disconnect the hypergraph when `n >= 2`.
    pub fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.n);
        for e in &self.edges {
            for w in e.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        dsu.components() == 1
    }

    /// `t = (n-1)/(s-1)` for this hypergraph's edge size, if integral.
    fn tree_size(&self) -> Option<(usize, usize)> {
        let s = match self.uniformity() {
            Some(s) => s,
            // Only the single vertex has a spanning tree without edges.
            None => return (self.n == 1).then_some((0, 2)),
        };
        if s < 2 || !(self.n - 1).is_multiple_of(s - 1) {
            return None;
        }
        Some(((self.n - 1) / (s - 1), s))
    }

    /// Whether the edges at positions `subset` form a spanning tree.
    pub fn is_spanning_tree(&self, subset: &[usize]) -> Result<bool> {
        if let Some(&i) = subset.iter().find(|&&i| i >= self.edges.len()) {
            return Err(Error::Invalid(format!("edge index {i} out of range")));
        }
        let Some((t, _)) = self.tree_size() else {
            return Ok(false);
        };
        if subset.len() != t {
            return Ok(false);
        }
        let mut dsu = Dsu::new(self.n);
        for &i in subset {
            if !dsu.merge_edge(&self.edges[i]) {
                return Ok(false);
            }
        }
        Ok(dsu.components() == 1)
    }

    /// Number of `t`-subsets of edge positions forming spanning trees.
    /// Repeated edges count once per position.
    pub fn count_spanning_trees(&self, budget: u64) -> Result<u64> {
        let mut count = 0u64;
        self.search_trees(budget, |_| {
            count += 1;
            true
        })?;
        Ok(count)
    }

    /// First spanning tree found in lexicographic order of edge positions.
    pub fn find_spanning_tree(&self, budget: u64) -> Result<Option<Vec<usize>>> {
        let mut found = None;
        self.search_trees(budget, |tree| {
            found = Some(tree.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Calls `visit` on each spanning tree (as increasing edge positions) until it
    /// returns `false`. Each candidate edge test counts against `budget`.
    pub fn search_trees<F>(&self, budget: u64, mut visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> bool,
    {
        let Some((t, _)) = self.tree_size() else {
            return Ok(());
        };
        let mut search = TreeSearch {
            edges: &self.edges,
            t,
            dsu: Dsu::new(self.n),
            chosen: Vec::with_capacity(t),
            steps: 0,
            budget,
        };
        search.run(0, &mut visit)?;
        Ok(())
    }
}

struct TreeSearch<'a> {
    edges: &'a [Vec<usize>],
    t: usize,
    dsu: Dsu,
    chosen: Vec<usize>,
    steps: u64,
    budget: u64,
}

impl TreeSearch<'_> {
    /// Returns `Ok(false)` once the visitor asks to stop.
    fn run<F: FnMut(&[usize]) -> bool>(&mut self, from: usize, visit: &mut F) -> Result<bool> {
        if self.chosen.len() == self.t {
            // t edges that each merged s components leave exactly one.
            return Ok(visit(&self.chosen));
        }
        let need = self.t - self.chosen.len();
        if self.edges.len() < need {
            return Ok(true);
        }
        for i in from..=self.edges.len() - need {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "spanning-tree search",
                    budget: self.budget,
                });
            }
            let mark = self.dsu.mark();
            if self.dsu.merge_edge(&self.edges[i]) {
                self.chosen.push(i);
                let go_on = self.run(i + 1, visit)?;
                self.chosen.pop();
                self.dsu.rollback(mark);
                if !go_on {
                    return Ok(false);
                }
            } else {
                self.dsu.rollback(mark);
            }
        }
        Ok(true)
    }
}

/// Union-find with union by size and an undo log (no path compression).
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    comps: usize,
    log: Vec<(usize, usize)>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            comps: n,
            log: Vec::new(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.comps -= 1;
        self.log.push((a, b));
        true
    }

    /// Merges the vertices of `edge` if they lie in pairwise distinct
    /// components; otherwise leaves the structure unchanged and returns false.
    pub fn merge_edge(&mut self, edge: &[usize]) -> bool {
        let mut roots: Vec<usize> = edge.iter().map(|&v| self.find(v)).collect();
        roots.sort_unstable();
        if roots.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        for w in edge.windows(2) {
            self.union(w[0], w[1]);
        }
        true
    }

    pub fn components(&self) -> usize {
        self.comps
    }

    pub fn mark(&self) -> usize {
        self.log.len()
    }

    pub fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (a, b) = self.log.pop().unwrap();
            self.parent[b] = b;
            self.size[a] -= self.size[b];
            self.comps += 1;
        }
    }
}

/// All `s`-subsets of `[0, n)` in lexicographic order.
pub fn all_s_subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < s - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, s, cur, out);
            cur.pop();
        }
    }
    rec(0, n, s, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_BUDGET;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn simplicity() {
        assert!(h(5, &[&[0, 1, 2], &[0, 3, 4]]).is_simple());
        assert!(!h(3, &[&[0, 0, 2]]).is_simple());
        assert!(!h(3, &[&[0, 1, 2], &[2, 1, 0]]).is_simple());
    }

    #[test]
    fn connectivity() {
        assert!(h(3, &[&[0, 1, 2]]).is_connected());
        assert!(!h(4, &[&[0, 1], &[2, 3]]).is_connected());
        assert!(Hypergraph::new(1, vec![]).unwrap().is_connected());
        assert!(!Hypergraph::new(2, vec![]).unwrap().is_connected());
    }

    #[test]
    fn spanning_tree_predicate() {
        let g = h(3, &[&[0, 1, 2]]);
        assert!(g.is_spanning_tree(&[0]).unwrap());
        let g = h(5, &[&[0, 1, 2], &[2, 3, 4], &[1, 2, 3]]);
        assert!(g.is_spanning_tree(&[0, 1]).unwrap());
        assert!(!g.is_spanning_tree(&[0, 2]).unwrap());
        assert!(g.is_spanning_tree(&[0, 9]).is_err());
        // (s-1) does not divide (n-1)
        let g = h(4, &[&[0, 1, 2], &[1, 2, 3]]);
        assert!(!g.is_spanning_tree(&[0]).unwrap());
    }

    #[test]
    fn counts() {
        let k4 = h(4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(k4.count_spanning_trees(DEFAULT_BUDGET).unwrap(), 16);
        let double = h(3, &[&[0, 1, 2], &[0, 1, 2]]);
        assert_eq!(double.count_spanning_trees(DEFAULT_BUDGET).unwrap(), 2);
        let all = Hypergraph::new(5, all_s_subsets(5, 3)).unwrap();
        assert_eq!(all.count_spanning_trees(DEFAULT_BUDGET).unwrap(), 15);
        let single = Hypergraph::new(1, vec![]).unwrap();
        assert_eq!(single.count_spanning_trees(DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(
            h(4, &[&[0, 1, 2]])
                .count_spanning_trees(DEFAULT_BUDGET)
                .unwrap(),
            0
        );
    }

    #[test]
    fn budget_guard() {
        let k6 = Hypergraph::new(6, all_s_subsets(6, 2)).unwrap();
        let err = k6.count_spanning_trees(10).unwrap_err();
        assert!(err.is_budget());
        assert_eq!(k6.count_spanning_trees(DEFAULT_BUDGET).unwrap(), 1296);
    }

    #[test]
    fn json_round_trip() {
        let g = h(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":5,"edges":[[0,1,2],[2,3,4]]}"#);
        assert_eq!(serde_json::from_str::<Hypergraph>(&text).unwrap(), g);
        assert!(serde_json::from_str::<Hypergraph>(r#"{"n":2,"edges":[[0,5]]}"#).is_err());
    }
}
