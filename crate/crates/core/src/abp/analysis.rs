use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use serde::Serialize;

use super::{Abp, Label, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbpStats {
    pub size: usize,
    pub depth: usize,
    pub width: usize,
    /// `reads[i-1]` = number of edges labeled `x_i`.
    pub reads: Vec<usize>,
    pub read: usize,
}

pub fn stats(a: &Abp) -> AbpStats {
    let mut reads = vec![0; a.num_vars()];
    for e in a.layers().iter().flatten() {
        if let Label::Var(i) = e.label {
            reads[i - 1] += 1;
        }
    }
    AbpStats {
        size: a.size(),
        depth: a.depth(),
        width: a.levels().iter().map(Vec::len).max().unwrap_or(0),
        read: reads.iter().copied().max().unwrap_or(0),
        reads,
    }
}

/// True iff along every directed path the variables appear at most once and
/// with strictly increasing `π`-rank.
pub fn check_order(a: &Abp, pi: &Permutation) -> bool {
    if pi.len() != a.num_vars() {
        return false;
    }
    // highest rank seen on any path ending at each node (0 = none)
    let mut seen: Vec<Vec<usize>> = a.levels().iter().map(|l| vec![0; l.len()]).collect();
    for (l, layer) in a.layers().iter().enumerate() {
        for e in layer {
            let before = seen[l][e.from];
            let after = match e.label {
                Label::Var(i) => {
                    let r = pi.rank(i);
                    if r <= before {
                        return false;
                    }
                    r
                }
                Label::Const(_) => before,
            };
            let slot = &mut seen[l + 1][e.to];
            *slot = (*slot).max(after);
        }
    }
    true
}

/// Some `π` for which [`check_order`] holds, or `None` if the first-appearance
/// constraints are cyclic or a variable repeats on a path. Ties are broken by
/// variable index.
pub fn infer_order(a: &Abp) -> Option<Permutation> {
    let n = a.num_vars();
    let mut before: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
    let mut anc: Vec<Vec<BTreeSet<usize>>> = a
        .levels()
        .iter()
        .map(|l| vec![BTreeSet::new(); l.len()])
        .collect();
    for (l, layer) in a.layers().iter().enumerate() {
        for e in layer {
            let mut set = anc[l][e.from].clone();
            if let Label::Var(i) = e.label {
                if set.contains(&i) {
                    return None;
                }
                before[i].extend(set.iter().copied());
                set.insert(i);
            }
            anc[l + 1][e.to].extend(set);
        }
    }
    // Kahn's algorithm over "j must precede i"
    let mut indegree = vec![0usize; n + 1];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for i in 1..=n {
        for &j in &before[i] {
            succ[j].push(i);
            indegree[i] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (1..=n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &succ[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    if order.len() < n {
        return None;
    }
    Permutation::from_order(&order).ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LayerKind {
    Constant,
    Var(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObliviousError {
    pub layer: usize,
    pub vars: Vec<usize>,
}

impl fmt::Display for ObliviousError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(|i| format!("x{i}")).collect();
        write!(f, "layer {} mixes {}", self.layer, vars.join(", "))
    }
}

/// Per-layer variable, or the first layer that mixes two variables.
pub fn check_oblivious(a: &Abp) -> Result<Vec<LayerKind>, ObliviousError> {
    a.layers()
        .iter()
        .enumerate()
        .map(|(l, layer)| {
            let vars: BTreeSet<usize> = layer.iter().filter_map(|e| e.label.var()).collect();
            match vars.len() {
                0 => Ok(LayerKind::Constant),
                1 => Ok(LayerKind::Var(*vars.iter().next().unwrap())),
                _ => Err(ObliviousError {
                    layer: l,
                    vars: vars.into_iter().collect(),
                }),
            }
        })
        .collect()
}
