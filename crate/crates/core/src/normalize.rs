//! Structural transforms: obliviation, the derivative program, level cuts and
//! the reduction of a cut to independent sides.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::abp::{check_oblivious, check_order, Abp, AbpBuilder, Label, LayerKind, Permutation};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{IncrementalBasis, Insert};
use crate::poly::{Monomial, SparsePoly};

/// Sums over constant-only paths from `(level, idx)` to every later node.
/// `None` means no such path exists; the empty path gives `1`.
fn constant_reach(a: &Abp, level: usize, idx: usize) -> Vec<Vec<Option<Elem>>> {
    let f = a.field();
    let mut out: Vec<Vec<Option<Elem>>> = (0..=a.depth())
        .map(|l| vec![None; a.level_width(l)])
        .collect();
    out[level][idx] = Some(f.one());
    for l in level..a.depth() {
        for e in &a.layers()[l] {
            let (Some(src), Label::Const(c)) = (out[l][e.from].clone(), &e.label) else {
                continue;
            };
            let t = f.mul(&src, c);
            match &mut out[l + 1][e.to] {
                Some(slot) => f.add_assign(slot, &t),
                slot @ None => *slot = Some(t),
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Source,
    /// Copy of an original node in the value level before the `i`-th read
    /// position.
    V(usize, usize, usize),
    /// Head of an `x`-edge of the `i`-th read position.
    W(usize, usize, usize),
    /// Pass-through copy of `V(i, ..)` sitting in the `i`-th read level.
    P(usize, usize, usize),
}

/// An equivalent `pi`-oblivious program: levels `s, V_1, W_1, …, W_m, V_{m+1}`
/// where `m` counts the variables actually read, each `V_i -> W_i` layer
/// reads only the `i`-th of them, and `W_i -> V_{i+1}` carries constant-path
/// sums of the original.
pub fn obliviate(a: &Abp, pi: &Permutation) -> Result<Abp> {
    if !check_order(a, pi) {
        return Err(Error::NotOrdered(format!(
            "program does not respect order {pi}"
        )));
    }
    let a = a.trim();
    let f = a.field();
    let mut reads = vec![0usize; a.num_vars() + 1];
    for e in a.layers().iter().flatten() {
        if let Label::Var(i) = e.label {
            reads[i] += 1;
        }
    }
    // read variables in pi order
    let vars: Vec<usize> = pi
        .order()
        .iter()
        .copied()
        .filter(|&v| reads[v] > 0)
        .collect();
    let m = vars.len();

    let depth = a.depth();
    let sink = Node::V(m + 1, depth, 0);
    let mut b = AbpBuilder::new(f, a.num_vars(), 2 * m + 1, Node::Source, sink.clone());
    let v_key = |i: usize, l: usize, j: usize| {
        if i == m + 1 {
            (l == depth).then(|| sink.clone())
        } else {
            Some(Node::V(i, l, j))
        }
    };

    let from_source = constant_reach(&a, 0, 0);
    for (l, level) in from_source.iter().enumerate() {
        for (j, c) in level.iter().enumerate() {
            if let (Some(c), Some(key)) = (c, v_key(1, l, j)) {
                b.const_edge(&Node::Source, key, c.clone());
            }
        }
    }
    for (i, &var) in vars.iter().enumerate() {
        let i = i + 1;
        let v_level = 2 * i - 1;
        for l in 0..=depth {
            for j in 0..a.level_width(l) {
                b.node(Node::V(i, l, j), v_level);
            }
        }
        let mut heads = BTreeSet::new();
        for (l, layer) in a.layers().iter().enumerate() {
            for e in layer {
                if e.label == Label::Var(var) {
                    b.var_edge(&Node::V(i, l, e.from), Node::W(i, l + 1, e.to), var);
                    heads.insert((l + 1, e.to));
                }
            }
        }
        for l in 0..=depth {
            for j in 0..a.level_width(l) {
                if let Some(next) = v_key(i + 1, l, j) {
                    let p = Node::P(i, l, j);
                    b.const_edge(&Node::V(i, l, j), p.clone(), f.one());
                    b.const_edge(&p, next, f.one());
                }
            }
        }
        for &(l, j) in &heads {
            let reach = constant_reach(&a, l, j);
            for (l2, level) in reach.iter().enumerate() {
                for (j2, c) in level.iter().enumerate() {
                    if let (Some(c), Some(key)) = (c, v_key(i + 1, l2, j2)) {
                        b.const_edge(&Node::W(i, l, j), key, c.clone());
                    }
                }
            }
        }
    }
    b.build(Some(pi.clone()))
}

/// The program for `∂Â/∂x_i`: in the single `x_i` layer variable edges become
/// `1` and constant edges are dropped.
pub fn derivative_abp(a: &Abp, i: usize) -> Result<Abp> {
    let kinds = check_oblivious(a).map_err(|e| Error::NotOblivious(e.to_string()))?;
    let layers: Vec<usize> = kinds
        .iter()
        .enumerate()
        .filter(|(_, k)| **k == LayerKind::Var(i))
        .map(|(l, _)| l)
        .collect();
    match layers.as_slice() {
        [] => Ok(Abp::zero(a.field(), a.num_vars()).with_order(a.order().cloned())),
        [layer] => {
            let one = a.field().one();
            let d = a.map_labels(|l, label| {
                if l != *layer {
                    return Some(label.clone());
                }
                match label {
                    Label::Var(_) => Some(Label::Const(one.clone())),
                    Label::Const(_) => None,
                }
            });
            Ok(d.trim())
        }
        _ => Err(Error::Invalid(format!(
            "x{i} occupies {} layers; the derivative program needs exactly one",
            layers.len()
        ))),
    }
}

/// Level whose outgoing layer reads `x_i`, if there is exactly one.
pub fn var_level(a: &Abp, i: usize) -> Option<usize> {
    let mut found = None;
    for (l, layer) in a.layers().iter().enumerate() {
        if layer.iter().any(|e| e.label == Label::Var(i)) {
            if found.is_some() {
                return None;
            }
            found = Some(l);
        }
    }
    found
}

/// `f_j = Â_{s,v_j}` and `g_j = Â_{v_j,t}` over the nodes `v_j` of `level`.
pub fn cut_decompose(
    a: &Abp,
    level: usize,
    budget: usize,
) -> Result<(Vec<SparsePoly>, Vec<SparsePoly>)> {
    check_oblivious(a).map_err(|e| Error::NotOblivious(e.to_string()))?;
    if level > a.depth() {
        return Err(Error::BadCut(format!(
            "level {level} beyond depth {}",
            a.depth()
        )));
    }
    let side = |range: &[Vec<crate::abp::Edge>]| -> BTreeSet<usize> {
        range
            .iter()
            .flatten()
            .filter_map(|e| e.label.var())
            .collect()
    };
    let before = side(&a.layers()[..level]);
    let after = side(&a.layers()[level..]);
    if let Some(v) = before.intersection(&after).next() {
        return Err(Error::BadCut(format!(
            "x{v} is read on both sides of level {level}"
        )));
    }
    if let Some(pi) = a.order() {
        let hi = before.iter().map(|&v| pi.rank(v)).max().unwrap_or(0);
        let lo = after
            .iter()
            .map(|&v| pi.rank(v))
            .min()
            .unwrap_or(usize::MAX);
        if hi >= lo {
            return Err(Error::BadCut(format!(
                "variables before level {level} do not all precede those after it"
            )));
        }
    }
    let mut fwd = crate::abp::forward_polys(a, budget)?;
    let mut bwd = crate::abp::backward_polys(a, budget)?;
    Ok((fwd.swap_remove(level), bwd.swap_remove(level)))
}

/// `Σ fs[i]·gs[i]` with both sides linearly independent.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub w_prime: usize,
    pub fs: Vec<SparsePoly>,
    pub gs: Vec<SparsePoly>,
    pub cut_level: Option<usize>,
}

impl Decomposition {
    pub fn sum(&self, budget: usize) -> Result<SparsePoly> {
        sum_of_products(&self.fs, &self.gs, budget)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "w_prime": self.w_prime,
            "cut_level": self.cut_level,
            "fs": self.fs.iter().map(SparsePoly::to_json).collect::<Vec<_>>(),
            "gs": self.gs.iter().map(SparsePoly::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn sum_of_products(fs: &[SparsePoly], gs: &[SparsePoly], budget: usize) -> Result<SparsePoly> {
    let mut acc = match fs.first() {
        Some(p) => SparsePoly::zero(p.field(), p.nvars()),
        None => return Err(Error::Invalid("empty decomposition".into())),
    };
    for (f, g) in fs.iter().zip(gs) {
        acc.add_assign(&f.mul(g, budget)?);
    }
    Ok(acc)
}

/// Coefficient vectors of `ps` over the union of their monomials.
pub fn coefficient_rows(ps: &[SparsePoly]) -> Vec<Vec<Elem>> {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in ps {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    ps.iter()
        .map(|p| {
            let mut row = vec![p.field().zero(); index.len()];
            for (m, c) in p.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect()
}

/// Keeps a maximal independent prefix-greedy subset of `keep` and folds each
/// dropped member into the partner list of the retained ones.
fn fold(keep: &[SparsePoly], partner: &[SparsePoly]) -> (Vec<SparsePoly>, Vec<SparsePoly>) {
    let field = keep[0].field().clone();
    let rows = coefficient_rows(keep);
    let dim = rows.first().map_or(0, Vec::len);
    let mut basis = IncrementalBasis::new(&field, dim);
    let mut kept = Vec::new();
    let mut partners: Vec<SparsePoly> = Vec::new();
    for (j, row) in rows.iter().enumerate() {
        match basis.insert(row) {
            Insert::Added { .. } => {
                kept.push(keep[j].clone());
                partners.push(partner[j].clone());
            }
            Insert::Dependent { coeffs } => {
                // keep[j] = Σ c_b kept[b], so keep[j]·partner[j] moves into partners[b]
                for (b, c) in coeffs.iter().enumerate() {
                    if !field.is_zero(c) {
                        partners[b].add_assign(&partner[j].scale(c));
                    }
                }
            }
        }
    }
    (kept, partners)
}

/// Reduces `Σ fs[i]·gs[i]` to an equal sum whose two sides are independent.
pub fn reduce_independent(
    fs: &[SparsePoly],
    gs: &[SparsePoly],
    budget: usize,
) -> Result<Decomposition> {
    if fs.len() != gs.len() {
        return Err(Error::Invalid(format!(
            "{} left factors but {} right factors",
            fs.len(),
            gs.len()
        )));
    }
    if sum_of_products(fs, gs, budget)?.is_zero() {
        return Err(Error::Invalid("the decomposed polynomial is zero".into()));
    }
    let (f1, g1) = fold(fs, gs);
    let (g2, f2) = fold(&g1, &f1);
    Ok(Decomposition {
        w_prime: f2.len(),
        fs: f2,
        gs: g2,
        cut_level: None,
    })
}

/// Derivative program of `a` in `x_i`, cut at the `x_i` layer and reduced.
pub fn derivative_decomposition(a: &Abp, i: usize, budget: usize) -> Result<Decomposition> {
    let level = var_level(a, i)
        .ok_or_else(|| Error::Invalid(format!("x{i} is not read in exactly one layer")))?;
    let d = derivative_abp(a, i)?;
    // trimming keeps the level structure, so the cut level is unchanged
    let (fs, gs) = cut_decompose(&d, level, budget)?;
    let mut dec = reduce_independent(&fs, &gs, budget)?;
    dec.cut_level = Some(level);
    Ok(dec)
}
