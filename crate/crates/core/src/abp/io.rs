//! JSON file format for ABPs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig};

use super::{Abp, Edge, Label, Permutation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbpFile {
    pub field: FieldConfig,
    pub num_vars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    pub levels: Vec<Vec<String>>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub from: String,
    pub to: String,
    pub label: LabelFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelFile {
    Var(usize),
    Const(serde_json::Value),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadField(String),
    TooFewLevels,
    NonSingletonSource(usize),
    NonSingletonSink(usize),
    DuplicateNode(String),
    DanglingNode {
        edge: usize,
        id: String,
    },
    NonConsecutiveLevels {
        edge: usize,
        from_level: usize,
        to_level: usize,
    },
    VarOutOfRange {
        edge: usize,
        var: usize,
        num_vars: usize,
    },
    BadConstant {
        edge: usize,
        reason: String,
    },
    BadOrder(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadField(e) => write!(f, "field: {e}"),
            Violation::TooFewLevels => write!(f, "levels: need at least source and sink levels"),
            Violation::NonSingletonSource(n) => write!(f, "levels[0]: source level has {n} nodes"),
            Violation::NonSingletonSink(n) => write!(f, "levels[last]: sink level has {n} nodes"),
            Violation::DuplicateNode(id) => write!(f, "levels: node id {id:?} used twice"),
            Violation::DanglingNode { edge, id } => {
                write!(f, "edges[{edge}]: unknown node id {id:?}")
            }
            Violation::NonConsecutiveLevels {
                edge,
                from_level,
                to_level,
            } => write!(
                f,
                "edges[{edge}]: non-consecutive levels ({from_level} -> {to_level})"
            ),
            Violation::VarOutOfRange {
                edge,
                var,
                num_vars,
            } => write!(
                f,
                "edges[{edge}].label: variable out of range (x{var}, expected 1..={num_vars})"
            ),
            Violation::BadConstant { edge, reason } => write!(f, "edges[{edge}].label: {reason}"),
            Violation::BadOrder(e) => write!(f, "order: {e}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

/// Checks a parsed file against the structural rules of a layered program.
pub fn validate(file: &AbpFile) -> ValidationReport {
    let mut v = Vec::new();
    let field = match Field::new(file.field.clone()) {
        Ok(f) => Some(f),
        Err(e) => {
            v.push(Violation::BadField(e.to_string()));
            None
        }
    };
    let levels = &file.levels;
    if levels.len() < 2 {
        v.push(Violation::TooFewLevels);
    } else {
        if levels[0].len() != 1 {
            v.push(Violation::NonSingletonSource(levels[0].len()));
        }
        let last = levels[levels.len() - 1].len();
        if last != 1 {
            v.push(Violation::NonSingletonSink(last));
        }
    }
    let mut level_of: HashMap<&str, usize> = HashMap::new();
    for (l, level) in levels.iter().enumerate() {
        for id in level {
            if level_of.insert(id.as_str(), l).is_some() {
                v.push(Violation::DuplicateNode(id.clone()));
            }
        }
    }
    for (k, e) in file.edges.iter().enumerate() {
        let from = level_of.get(e.from.as_str());
        let to = level_of.get(e.to.as_str());
        if from.is_none() {
            v.push(Violation::DanglingNode {
                edge: k,
                id: e.from.clone(),
            });
        }
        if to.is_none() {
            v.push(Violation::DanglingNode {
                edge: k,
                id: e.to.clone(),
            });
        }
        if let (Some(&a), Some(&b)) = (from, to) {
            if b != a + 1 {
                v.push(Violation::NonConsecutiveLevels {
                    edge: k,
                    from_level: a,
                    to_level: b,
                });
            }
        }
        match &e.label {
            LabelFile::Var(i) if *i == 0 || *i > file.num_vars => {
                v.push(Violation::VarOutOfRange {
                    edge: k,
                    var: *i,
                    num_vars: file.num_vars,
                })
            }
            LabelFile::Const(c) => {
                if let Some(f) = &field {
                    if let Err(err) = f.from_json(c) {
                        v.push(Violation::BadConstant {
                            edge: k,
                            reason: err.to_string(),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    if let Some(order) = &file.order {
        if order.len() != file.num_vars {
            v.push(Violation::BadOrder(format!(
                "{} entries for {} variables",
                order.len(),
                file.num_vars
            )));
        } else if let Err(e) = Permutation::from_image(order.clone()) {
            v.push(Violation::BadOrder(e.to_string()));
        }
    }
    ValidationReport { violations: v }
}

impl Abp {
    pub fn from_file(file: &AbpFile) -> Result<Abp> {
        let report = validate(file);
        if !report.is_ok() {
            return Err(Error::InvalidAbp(report.to_string()));
        }
        let field = Field::new(file.field.clone())?;
        let mut pos: HashMap<&str, (usize, usize)> = HashMap::new();
        for (l, level) in file.levels.iter().enumerate() {
            for (i, id) in level.iter().enumerate() {
                pos.insert(id.as_str(), (l, i));
            }
        }
        let mut layers: Vec<Vec<Edge>> = vec![Vec::new(); file.levels.len() - 1];
        for e in &file.edges {
            let (l, i) = pos[e.from.as_str()];
            let (_, j) = pos[e.to.as_str()];
            let label = match &e.label {
                LabelFile::Var(x) => Label::Var(*x),
                LabelFile::Const(c) => Label::Const(field.from_json(c)?),
            };
            layers[l].push(Edge {
                from: i,
                to: j,
                label,
            });
        }
        let order = file
            .order
            .as_ref()
            .map(|o| Permutation::from_image(o.clone()))
            .transpose()?;
        Abp::new(field, file.num_vars, file.levels.clone(), layers, order)
    }

    /// Canonical file form: edges sorted by layer, then endpoints.
    pub fn to_file(&self) -> AbpFile {
        let mut edges = Vec::with_capacity(self.num_edges());
        for (l, layer) in self.layers().iter().enumerate() {
            let mut sorted: Vec<&Edge> = layer.iter().collect();
            sorted.sort_by_key(|e| (e.from, e.to));
            for e in sorted {
                edges.push(EdgeFile {
                    from: self.levels()[l][e.from].clone(),
                    to: self.levels()[l + 1][e.to].clone(),
                    label: match &e.label {
                        Label::Var(i) => LabelFile::Var(*i),
                        Label::Const(c) => LabelFile::Const(self.field().to_json(c)),
                    },
                });
            }
        }
        AbpFile {
            field: self.field().config().clone(),
            num_vars: self.num_vars(),
            order: self.order().map(|p| p.image().to_vec()),
            levels: self.levels().to_vec(),
            edges,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Abp> {
        let file: AbpFile = serde_json::from_str(s)?;
        Abp::from_file(&file)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }
}
