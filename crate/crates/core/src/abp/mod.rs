//! Layered algebraic branching programs.
//!
//! An [`Abp`] is a leveled DAG whose edges carry either a variable `x_i`
//! (1-based) or a field constant. It computes the sum over all source–sink
//! paths of the product of the edge labels along the path.

mod analysis;
mod eval;
mod io;

use std::collections::HashMap;
use std::fmt;

pub use analysis::{
    check_oblivious, check_order, infer_order, stats, AbpStats, LayerKind, ObliviousError,
};
pub use eval::{backward_polys, evaluate, expand, forward_polys, restrict};
pub use io::{validate, AbpFile, EdgeFile, LabelFile, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    /// Variable `x_i`, 1-based.
    Var(usize),
    Const(Elem),
}

impl Label {
    pub fn var(&self) -> Option<usize> {
        match self {
            Label::Var(i) => Some(*i),
            Label::Const(_) => None,
        }
    }
}

/// Edge between position `from` of level `i` and position `to` of level `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Label,
}

/// A permutation of `[n]`, stored as its image list: `image[i-1] = π(i)`.
///
/// The induced variable order is `x_{π⁻¹(1)}, …, x_{π⁻¹(n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let image: Vec<usize> = (1..=n).collect();
        Permutation {
            inverse: image.clone(),
            image,
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut inverse = vec![0; n];
        for (i, &r) in image.iter().enumerate() {
            if r == 0 || r > n || inverse[r - 1] != 0 {
                return Err(Error::Permutation(format!(
                    "{image:?} is not a permutation of 1..{n}"
                )));
            }
            inverse[r - 1] = i + 1;
        }
        Ok(Permutation { image, inverse })
    }

    /// Builds π from a variable order `x_{o_1}, x_{o_2}, …`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut image = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            if v == 0 || v > n || image[v - 1] != 0 {
                return Err(Error::Permutation(format!(
                    "{order:?} is not an ordering of x_1..x_{n}"
                )));
            }
            image[v - 1] = pos + 1;
        }
        Self::from_image(image)
    }

    /// Parses `"identity"` or a comma-separated image list.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        if s.trim() == "identity" {
            return Ok(Self::identity(n));
        }
        let image = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Permutation(format!("bad entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if image.len() != n {
            return Err(Error::Permutation(format!(
                "permutation has {} entries, expected {n}",
                image.len()
            )));
        }
        Self::from_image(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `π(i)` for a 1-based variable index.
    pub fn rank(&self, var: usize) -> usize {
        self.image[var - 1]
    }

    /// `π⁻¹(pos)`: the variable at 1-based position `pos` of the order.
    pub fn var_at(&self, pos: usize) -> usize {
        self.inverse[pos - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// The variable order as a list of 1-based variable indices.
    pub fn order(&self) -> &[usize] {
        &self.inverse
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Abp {
    field: Field,
    num_vars: usize,
    order: Option<Permutation>,
    names: Vec<Vec<String>>,
    layers: Vec<Vec<Edge>>,
}

impl Abp {
    /// Assembles an ABP from per-level node names and per-layer edges.
    pub fn new(
        field: Field,
        num_vars: usize,
        names: Vec<Vec<String>>,
        layers: Vec<Vec<Edge>>,
        order: Option<Permutation>,
    ) -> Result<Self> {
        if names.len() < 2 {
            return Err(Error::InvalidAbp(
                "need at least a source and a sink level".into(),
            ));
        }
        if names[0].len() != 1 || names[names.len() - 1].len() != 1 {
            return Err(Error::InvalidAbp(
                "source and sink levels must be singletons".into(),
            ));
        }
        if layers.len() != names.len() - 1 {
            return Err(Error::InvalidAbp(format!(
                "{} levels need {} layers, got {}",
                names.len(),
                names.len() - 1,
                layers.len()
            )));
        }
        for (l, layer) in layers.iter().enumerate() {
            for e in layer {
                if e.from >= names[l].len() || e.to >= names[l + 1].len() {
                    return Err(Error::InvalidAbp(format!(
                        "edge endpoint out of range in layer {l}"
                    )));
                }
                match &e.label {
                    Label::Var(i) if *i == 0 || *i > num_vars => {
                        return Err(Error::InvalidAbp(format!(
                            "variable x{i} out of range 1..{num_vars}"
                        )))
                    }
                    Label::Const(c) if !field.contains(c) => {
                        return Err(Error::InvalidAbp(format!(
                            "constant {c:?} not in {}",
                            field.config()
                        )))
                    }
                    _ => {}
                }
            }
        }
        if let Some(p) = &order {
            if p.len() != num_vars {
                return Err(Error::InvalidAbp(format!(
                    "order has {} entries for {num_vars} variables",
                    p.len()
                )));
            }
        }
        Ok(Abp {
            field,
            num_vars,
            order,
            names,
            layers,
        })
    }

    /// The program `s --c--> t`.
    pub fn constant(field: &Field, num_vars: usize, c: Elem) -> Self {
        Abp {
            field: field.clone(),
            num_vars,
            order: None,
            names: vec![vec!["s".into()], vec!["t".into()]],
            layers: vec![vec![Edge {
                from: 0,
                to: 0,
                label: Label::Const(c),
            }]],
        }
    }

    /// The zero program `s --0--> t`.
    pub fn zero(field: &Field, num_vars: usize) -> Self {
        Self::constant(field, num_vars, field.zero())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> Option<&Permutation> {
        self.order.as_ref()
    }

    pub fn with_order(mut self, order: Option<Permutation>) -> Self {
        self.order = order;
        self
    }

    /// Number of layers `d`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.names
    }

    pub fn level_width(&self, level: usize) -> usize {
        self.names[level].len()
    }

    pub fn layers(&self) -> &[Vec<Edge>] {
        &self.layers
    }

    pub fn size(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn num_edges(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Re-maps every edge label; `None` drops the edge.
    pub fn map_labels(&self, mut f: impl FnMut(usize, &Label) -> Option<Label>) -> Abp {
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(l, layer)| {
                layer
                    .iter()
                    .filter_map(|e| {
                        f(l, &e.label).map(|label| Edge {
                            from: e.from,
                            to: e.to,
                            label,
                        })
                    })
                    .collect()
            })
            .collect();
        Abp {
            field: self.field.clone(),
            num_vars: self.num_vars,
            order: self.order.clone(),
            names: self.names.clone(),
            layers,
        }
    }

    /// Removes nodes not on any source–sink path. A program with no
    /// source–sink path becomes [`Abp::zero`].
    pub fn trim(&self) -> Abp {
        let depth = self.depth();
        let mut fwd: Vec<Vec<bool>> = self.names.iter().map(|l| vec![false; l.len()]).collect();
        fwd[0][0] = true;
        for (l, layer) in self.layers.iter().enumerate() {
            for e in layer {
                if fwd[l][e.from] {
                    fwd[l + 1][e.to] = true;
                }
            }
        }
        let mut bwd: Vec<Vec<bool>> = self.names.iter().map(|l| vec![false; l.len()]).collect();
        bwd[depth][0] = true;
        for (l, layer) in self.layers.iter().enumerate().rev() {
            for e in layer {
                if bwd[l + 1][e.to] {
                    bwd[l][e.from] = true;
                }
            }
        }
        if !fwd[depth][0] {
            return Abp::zero(&self.field, self.num_vars).with_order(self.order.clone());
        }
        let mut remap: Vec<Vec<Option<usize>>> = Vec::with_capacity(depth + 1);
        let mut names = Vec::with_capacity(depth + 1);
        for l in 0..=depth {
            let mut next = 0;
            let mut map = vec![None; self.names[l].len()];
            let mut kept = Vec::new();
            for (i, name) in self.names[l].iter().enumerate() {
                if fwd[l][i] && bwd[l][i] {
                    map[i] = Some(next);
                    next += 1;
                    kept.push(name.clone());
                }
            }
            remap.push(map);
            names.push(kept);
        }
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(l, layer)| {
                layer
                    .iter()
                    .filter_map(|e| {
                        Some(Edge {
                            from: remap[l][e.from]?,
                            to: remap[l + 1][e.to]?,
                            label: e.label.clone(),
                        })
                    })
                    .collect()
            })
            .collect();
        Abp {
            field: self.field.clone(),
            num_vars: self.num_vars,
            order: self.order.clone(),
            names,
            layers,
        }
    }

    /// Moves the program into an extension of its field; constants must lie
    /// in the prime subfield.
    pub fn lift(&self, field: &Field) -> Result<Abp> {
        let mut err = None;
        let lifted = self.map_labels(|_, label| match label {
            Label::Var(i) => Some(Label::Var(*i)),
            Label::Const(c) => match field.embed(c) {
                Ok(c) => Some(Label::Const(c)),
                Err(e) => {
                    err.get_or_insert(e);
                    None
                }
            },
        });
        match err {
            Some(e) => Err(e),
            None => Ok(Abp {
                field: field.clone(),
                ..lifted
            }),
        }
    }
}

/// Incremental construction by node keys with explicit levels; node names
/// are generated. Call [`AbpBuilder::build`] to trim and freeze.
pub struct AbpBuilder<K> {
    field: Field,
    num_vars: usize,
    depth: usize,
    nodes: Vec<Vec<K>>,
    index: HashMap<K, (usize, usize)>,
    edges: Vec<Vec<Edge>>,
}

impl<K: Clone + Eq + std::hash::Hash + fmt::Debug> AbpBuilder<K> {
    /// `depth` layers, so levels `0..=depth`; `source` lives on level 0 and
    /// `sink` on level `depth`.
    pub fn new(field: &Field, num_vars: usize, depth: usize, source: K, sink: K) -> Self {
        let mut b = AbpBuilder {
            field: field.clone(),
            num_vars,
            depth,
            nodes: vec![Vec::new(); depth + 1],
            index: HashMap::new(),
            edges: vec![Vec::new(); depth],
        };
        b.node(source, 0);
        b.node(sink, depth);
        b
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Declares (or looks up) a node on `level`.
    pub fn node(&mut self, key: K, level: usize) -> (usize, usize) {
        if let Some(&pos) = self.index.get(&key) {
            assert_eq!(
                pos.0, level,
                "node {key:?} already placed on level {}",
                pos.0
            );
            return pos;
        }
        assert!(
            level <= self.depth,
            "level {level} beyond depth {}",
            self.depth
        );
        let pos = (level, self.nodes[level].len());
        self.nodes[level].push(key.clone());
        self.index.insert(key, pos);
        pos
    }

    pub fn contains(&self, key: &K) -> bool {
        self.index.contains_key(key)
    }

    /// Adds an edge from `from` (level `l`) to `to`, which is created on
    /// level `l + 1` if new.
    pub fn edge(&mut self, from: &K, to: K, label: Label) {
        let (l, i) = *self
            .index
            .get(from)
            .unwrap_or_else(|| panic!("unknown node {from:?}"));
        let (l2, j) = self.node(to, l + 1);
        debug_assert_eq!(l2, l + 1);
        self.edges[l].push(Edge {
            from: i,
            to: j,
            label,
        });
    }

    pub fn var_edge(&mut self, from: &K, to: K, var: usize) {
        self.edge(from, to, Label::Var(var));
    }

    pub fn const_edge(&mut self, from: &K, to: K, c: Elem) {
        self.edge(from, to, Label::Const(c));
    }

    pub fn build(self, order: Option<Permutation>) -> Result<Abp> {
        let names = self
            .nodes
            .iter()
            .enumerate()
            .map(|(l, level)| {
                (0..level.len())
                    .map(|i| {
                        if l == 0 {
                            "s".to_string()
                        } else if l == self.depth {
                            "t".to_string()
                        } else {
                            format!("n{l}_{i}")
                        }
                    })
                    .collect()
            })
            .collect();
        let abp = Abp::new(self.field, self.num_vars, names, self.edges, order)?;
        Ok(rename_canonical(abp.trim()))
    }
}

/// Renames nodes to `s`, `n{level}_{index}`, `t` after trimming.
fn rename_canonical(mut a: Abp) -> Abp {
    let depth = a.depth();
    for (l, level) in a.names.iter_mut().enumerate() {
        for (i, name) in level.iter_mut().enumerate() {
            *name = if l == 0 {
                "s".into()
            } else if l == depth {
                "t".into()
            } else {
                format!("n{l}_{i}")
            };
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_basics() {
        // reversal on 3
        let p = Permutation::from_image(vec![3, 2, 1]).unwrap();
        assert_eq!(p.var_at(1), 3);
        assert_eq!(p.order(), &[3, 2, 1]);
        assert!(Permutation::from_image(vec![1, 1]).is_err());
        assert_eq!(
            Permutation::parse("identity", 3).unwrap(),
            Permutation::identity(3)
        );
        let q = Permutation::from_order(&[2, 4, 1, 3]).unwrap();
        assert_eq!(q.image(), &[3, 1, 4, 2]);
        assert_eq!(q.to_string(), "3,1,4,2");
    }

    #[test]
    fn trim_removes_dead_nodes() {
        let q = Field::rational();
        let mut b = AbpBuilder::new(&q, 2, 2, "s", "t");
        b.var_edge(&"s", "a", 1);
        b.var_edge(&"s", "dead", 2);
        b.const_edge(&"a", "t", q.one());
        let a = b.build(None).unwrap();
        assert_eq!(a.size(), 3);
        assert_eq!(a.num_edges(), 2);
    }

    #[test]
    fn trim_of_pathless_program_is_zero() {
        let q = Field::rational();
        let mut b = AbpBuilder::new(&q, 1, 2, "s", "t");
        b.var_edge(&"s", "a", 1);
        let a = b.build(None).unwrap();
        assert_eq!(a.depth(), 1);
        assert!(expand(&a, usize::MAX).unwrap().is_zero());
    }
}
