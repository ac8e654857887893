use num_traits::ToPrimitive;

use super::combin::num_partitions;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::hypergraph::{all_s_subsets, Hypergraph};
use crate::par::{map_indexed, Execution};
use crate::params::ModelParams;

/// All labelled `s`-uniform trees on `[0, n)`, each once, with edges sorted.
pub fn enumerate_uniform_trees(n: usize, s: usize, budget: u64) -> Result<Vec<Hypergraph>> {
    if s < 2 || n == 0 || !(n - 1).is_multiple_of(s - 1) {
        return Err(Error::Divisibility(format!(
            "s-1 does not divide n-1 for (n, s) = ({n}, {s})"
        )));
    }
    let complete = Hypergraph::new(n, all_s_subsets(n, s))?;
    let mut trees = Vec::new();
    complete.search_trees(budget, |subset| {
        let edges = subset.iter().map(|&i| complete.edges[i].clone()).collect();
        trees.push(Hypergraph { n, edges });
        true
    })?;
    Ok(trees)
}

fn check_size(params: ModelParams, budget: u64) -> Result<()> {
    params.require_d1()?;
    let size = num_partitions(params.points(), params.s)?;
    match size.to_u64() {
        Some(v) if v <= budget => Ok(()),
        _ => Err(Error::BudgetExceeded {
            what: "configuration enumeration",
            budget,
        }),
    }
}

/// Every configuration exactly once, in lexicographic canonical order.
pub fn enumerate_configurations(params: ModelParams, budget: u64) -> Result<Vec<Configuration>> {
    check_size(params, budget)?;
    let mut out = Vec::new();
    let mut walk = Walk::new(params);
    walk.run(&mut |c| {
        out.push(c.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Folds `f` over every configuration. Work is split by the part containing
/// point 0; per-branch totals are combined in branch order, so the result does
/// not depend on `exec`.
pub fn fold_configurations<T, F, R>(
    params: ModelParams,
    budget: u64,
    exec: Execution,
    zero: T,
    f: F,
    add: R,
) -> Result<T>
where
    T: Clone + Send + Sync,
    F: Fn(&Configuration) -> Result<T> + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    check_size(params, budget)?;
    let rest = params.points() - 1;
    let firsts: Vec<Vec<usize>> = all_s_subsets(rest, params.s - 1)
        .into_iter()
        .map(|c| c.into_iter().map(|p| p + 1).collect())
        .collect();
    let branches = map_indexed(exec, firsts.len(), |i| -> Result<T> {
        let mut walk = Walk::new(params);
        walk.take(0, &firsts[i]);
        let mut acc = Some(zero.clone());
        walk.run(&mut |c| {
            let v = f(c)?;
            acc = Some(add(acc.take().unwrap(), v));
            Ok(())
        })?;
        Ok(acc.unwrap())
    });
    let mut total = zero;
    for b in branches {
        total = add(total, b?);
    }
    Ok(total)
}

struct Walk {
    params: ModelParams,
    used: Vec<bool>,
    order: Vec<usize>,
}

impl Walk {
    fn new(params: ModelParams) -> Self {
        Walk {
            params,
            used: vec![false; params.points()],
            order: Vec::with_capacity(params.points()),
        }
    }

    fn take(&mut self, first: usize, rest: &[usize]) {
        self.used[first] = true;
        self.order.push(first);
        for &p in rest {
            self.used[p] = true;
            self.order.push(p);
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&Configuration) -> Result<()>) -> Result<()> {
        let Some(first) = self.used.iter().position(|&u| !u) else {
            return visit(&Configuration::from_point_order(self.params, &self.order));
        };
        self.used[first] = true;
        self.order.push(first);
        self.choose(first + 1, self.params.s - 1, visit)?;
        self.order.pop();
        self.used[first] = false;
        Ok(())
    }

    fn choose(
        &mut self,
        from: usize,
        left: usize,
        visit: &mut dyn FnMut(&Configuration) -> Result<()>,
    ) -> Result<()> {
        if left == 0 {
            return self.run(visit);
        }
        for p in from..self.used.len() {
            if self.used[p] {
                continue;
            }
            self.used[p] = true;
            self.order.push(p);
            self.choose(p + 1, left - 1, visit)?;
            self.order.pop();
            self.used[p] = false;
        }
        Ok(())
    }
}
