use crate::error::{Error, Result};
use crate::field::Elem;
use crate::poly::SparsePoly;

use super::{Abp, Label};

/// Path-sum value at `point` by a forward pass over the levels.
pub fn evaluate(a: &Abp, point: &[Elem]) -> Elem {
    assert_eq!(point.len(), a.num_vars(), "point has wrong length");
    let f = a.field();
    let mut cur = vec![f.one()];
    for (l, layer) in a.layers().iter().enumerate() {
        let mut next = vec![f.zero(); a.level_width(l + 1)];
        for e in layer {
            if f.is_zero(&cur[e.from]) {
                continue;
            }
            let w = match &e.label {
                Label::Var(i) => &point[i - 1],
                Label::Const(c) => c,
            };
            let t = f.mul(&cur[e.from], w);
            f.add_assign(&mut next[e.to], &t);
        }
        cur = next;
    }
    cur.pop().expect("sink level is a singleton")
}

fn apply(p: &SparsePoly, label: &Label) -> SparsePoly {
    match label {
        Label::Var(i) => p.mul_var(i - 1),
        Label::Const(c) => p.scale(c),
    }
}

fn check(p: &SparsePoly, budget: usize) -> Result<()> {
    if p.num_terms() > budget {
        Err(Error::Budget {
            what: "expansion term".into(),
            needed: p.num_terms().to_string(),
            limit: budget.to_string(),
        })
    } else {
        Ok(())
    }
}

/// `Â_{s,v}` for every node `v`, level by level.
pub fn forward_polys(a: &Abp, budget: usize) -> Result<Vec<Vec<SparsePoly>>> {
    let f = a.field();
    let n = a.num_vars();
    let mut out = Vec::with_capacity(a.depth() + 1);
    out.push(vec![SparsePoly::one(f, n)]);
    for (l, layer) in a.layers().iter().enumerate() {
        let mut next = vec![SparsePoly::zero(f, n); a.level_width(l + 1)];
        for e in layer {
            let src: &SparsePoly = &out[l][e.from];
            if src.is_zero() {
                continue;
            }
            next[e.to].add_assign(&apply(src, &e.label));
            check(&next[e.to], budget)?;
        }
        out.push(next);
    }
    Ok(out)
}

/// `Â_{v,t}` for every node `v`, level by level.
pub fn backward_polys(a: &Abp, budget: usize) -> Result<Vec<Vec<SparsePoly>>> {
    let f = a.field();
    let n = a.num_vars();
    let depth = a.depth();
    let mut out: Vec<Vec<SparsePoly>> = vec![Vec::new(); depth + 1];
    out[depth] = vec![SparsePoly::one(f, n)];
    for l in (0..depth).rev() {
        let mut cur = vec![SparsePoly::zero(f, n); a.level_width(l)];
        for e in &a.layers()[l] {
            let dst = &out[l + 1][e.to];
            if dst.is_zero() {
                continue;
            }
            cur[e.from].add_assign(&apply(dst, &e.label));
            check(&cur[e.from], budget)?;
        }
        out[l] = cur;
    }
    Ok(out)
}

/// The polynomial computed by `a`.
pub fn expand(a: &Abp, budget: usize) -> Result<SparsePoly> {
    let f = a.field();
    let n = a.num_vars();
    let mut cur = vec![SparsePoly::one(f, n)];
    for (l, layer) in a.layers().iter().enumerate() {
        let mut next = vec![SparsePoly::zero(f, n); a.level_width(l + 1)];
        for e in layer {
            if cur[e.from].is_zero() {
                continue;
            }
            next[e.to].add_assign(&apply(&cur[e.from], &e.label));
            check(&next[e.to], budget)?;
        }
        cur = next;
    }
    Ok(cur.pop().expect("sink level is a singleton"))
}

/// Substitutes constants for the given (1-based) variables; edges whose
/// value becomes zero are removed.
pub fn restrict(a: &Abp, assignment: &[(usize, Elem)]) -> Abp {
    let f = a.field();
    a.map_labels(|_, label| match label {
        Label::Var(i) => match assignment.iter().find(|(v, _)| v == i) {
            Some((_, c)) if f.is_zero(c) => None,
            Some((_, c)) => Some(Label::Const(c.clone())),
            None => Some(Label::Var(*i)),
        },
        Label::Const(c) => Some(Label::Const(c.clone())),
    })
}
