use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::config::Configuration;

/// Short-cycle counts of a configuration.
///
/// `counts[1]` is the number of parts with a repeated cell, `counts[2]` the number
/// of pairs of loop-free parts meeting in exactly two cells, and `counts[j]` for
/// `j >= 3` the number of loose `j`-cycles. Pairs of loop-free parts meeting in
/// three or more cells are not cycles of any length; they are tallied in
/// `overlaps`, keyed by intersection size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCensus {
    pub counts: BTreeMap<usize, u64>,
    pub overlaps: BTreeMap<usize, u64>,
}

impl CycleCensus {
    pub fn get(&self, j: usize) -> u64 {
        self.counts.get(&j).copied().unwrap_or(0)
    }
}

/// Intersection data between two loop-free parts: size, and the shared cell
/// when the size is one.
#[derive(Clone, Copy)]
struct Meet {
    size: u32,
    cell: usize,
}

struct Overlaps {
    meets: HashMap<(usize, usize), Meet>,
    /// For each part, the parts meeting it in exactly one cell.
    single: Vec<Vec<(usize, usize)>>,
}

impl Overlaps {
    fn meet(&self, a: usize, b: usize) -> u32 {
        let key = if a < b { (a, b) } else { (b, a) };
        self.meets.get(&key).map_or(0, |m| m.size)
    }
}

pub fn census_cycles(config: &Configuration, j_max: usize) -> CycleCensus {
    census_edges(config.params().n, &config.part_cells(), j_max)
}

/// Census over sorted cell lists, one per part.
pub fn census_edges(n: usize, edges: &[Vec<usize>], j_max: usize) -> CycleCensus {
    let j_max = j_max.max(1);
    let mut census = CycleCensus::default();
    for j in 1..=j_max {
        census.counts.insert(j, 0);
    }

    let loopy: Vec<bool> = edges
        .iter()
        .map(|e| e.windows(2).any(|w| w[0] == w[1]))
        .collect();
    census
        .counts
        .insert(1, loopy.iter().filter(|&&l| l).count() as u64);
    if j_max < 2 {
        return census;
    }

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if !loopy[i] {
            for &v in e {
                incident[v].push(i);
            }
        }
    }
    let mut meets: HashMap<(usize, usize), Meet> = HashMap::new();
    for (v, list) in incident.iter().enumerate() {
        for (x, &a) in list.iter().enumerate() {
            for &b in &list[x + 1..] {
                let m = meets
                    .entry((a.min(b), a.max(b)))
                    .or_insert(Meet { size: 0, cell: v });
                m.size += 1;
            }
        }
    }
    let mut single = vec![Vec::new(); edges.len()];
    for (&(a, b), m) in &meets {
        match m.size {
            1 => {
                single[a].push((b, m.cell));
                single[b].push((a, m.cell));
            }
            2 => *census.counts.get_mut(&2).unwrap() += 1,
            k => *census.overlaps.entry(k as usize).or_insert(0) += 1,
        }
    }
    for list in &mut single {
        list.sort_unstable();
    }
    let ov = Overlaps { meets, single };

    for j in 3..=j_max {
        let mut twice = 0u64;
        for (start, _) in loopy.iter().enumerate().filter(|(_, &l)| !l) {
            let mut path = vec![start];
            let mut cells = Vec::with_capacity(j);
            extend(&ov, j, &mut path, &mut cells, &mut twice);
        }
        // Each cycle is found once per orientation from its least part.
        census.counts.insert(j, twice / 2);
    }
    census
}

fn extend(ov: &Overlaps, j: usize, path: &mut Vec<usize>, cells: &mut Vec<usize>, found: &mut u64) {
    let start = path[0];
    let k = path.len();
    let last = path[k - 1];
    for &(q, cell) in &ov.single[last] {
        if q <= start || path.contains(&q) || cells.contains(&cell) {
            continue;
        }
        // q must miss every earlier part except its predecessor (and, when it
        // closes the cycle, the first part).
        let closing = k + 1 == j;
        let lo = if closing { 1 } else { 0 };
        if path[lo..k - 1].iter().any(|&p| ov.meet(p, q) != 0) {
            continue;
        }
        if closing {
            let Some(&(_, back)) = ov.single[q].iter().find(|&&(p, _)| p == start) else {
                continue;
            };
            if back == cell || cells.contains(&back) {
                continue;
            }
            *found += 1;
        } else {
            path.push(q);
            cells.push(cell);
            extend(ov, j, path, cells, found);
            path.pop();
            cells.pop();
        }
    }
}
