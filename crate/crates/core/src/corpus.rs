//! Seeded test corpus of `π`-ordered programs: random programs, programs
//! that compute zero by cancellation, and the standard families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abp::{stats, Abp, AbpBuilder, Label, Permutation};
use crate::error::Result;
use crate::families::{build_ryser, build_separation, build_symm};
use crate::field::Field;

/// How a member was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Random,
    /// Built to compute zero.
    Zero,
    Family,
}

#[derive(Clone, Debug)]
pub struct Member {
    pub name: String,
    pub abp: Abp,
    /// The order the program respects.
    pub pi: Permutation,
    /// Read bound the member is tested under; at least `stats(abp).read`.
    pub r: usize,
    pub origin: Origin,
}

impl Member {
    pub fn n(&self) -> usize {
        self.abp.num_vars()
    }
}

/// Shape parameters for [`random_oabp`].
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_width: usize,
    /// Layers beyond `n`.
    pub extra_depth: usize,
    /// Chance that an edge carries a variable when one is available.
    pub var_prob: f64,
    /// Chance of each extra edge beyond the one every node gets.
    pub edge_prob: f64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_width: 3,
            extra_depth: 2,
            var_prob: 0.6,
            edge_prob: 0.4,
        }
    }
}

const CONSTANTS: [i64; 5] = [-2, -1, 1, 2, 3];

/// A random program that respects `pi` and reads each variable at most `r`
/// times. Each node tracks the highest `π`-rank read on any path into it,
/// and its outgoing variable edges only use later variables.
pub fn random_oabp<R: Rng>(
    field: &Field,
    pi: &Permutation,
    r: usize,
    shape: RandomShape,
    rng: &mut R,
) -> Result<Abp> {
    let n = pi.len();
    let depth = n + rng.gen_range(0..=shape.extra_depth).max(1);
    let mut b = AbpBuilder::new(field, n, depth, (0usize, 0usize), (depth, 0usize));
    let mut reads = vec![0usize; n + 1];
    let mut state = vec![0usize];
    for l in 0..depth {
        let width = if l + 1 == depth {
            1
        } else {
            rng.gen_range(1..=shape.max_width)
        };
        let mut next = vec![0usize; width];
        let mut hit = vec![false; width];
        for (u, &s) in state.iter().enumerate() {
            let mut targets = vec![rng.gen_range(0..width)];
            for v in 0..width {
                if v != targets[0] && rng.gen_bool(shape.edge_prob) {
                    targets.push(v);
                }
            }
            for v in targets {
                let free: Vec<usize> = (s + 1..=n)
                    .map(|rank| pi.var_at(rank))
                    .filter(|&x| reads[x] < r)
                    .collect();
                let label = if !free.is_empty() && rng.gen_bool(shape.var_prob) {
                    let x = *free.choose(rng).expect("nonempty");
                    reads[x] += 1;
                    next[v] = next[v].max(pi.rank(x));
                    Label::Var(x)
                } else {
                    next[v] = next[v].max(s);
                    Label::Const(field.from_i64(*CONSTANTS.choose(rng).expect("nonempty")))
                };
                hit[v] = true;
                b.edge(&(l, u), (l + 1, v), label);
            }
        }
        // nodes nothing points to are still declared so indices line up
        for (v, _) in hit.iter().enumerate().filter(|(_, &h)| !h) {
            b.node((l + 1, v), l + 1);
        }
        state = next;
    }
    b.build(Some(pi.clone()))
}

type Key = (u8, usize, usize);

fn copy_into(b: &mut AbpBuilder<Key>, a: &Abp, tag: u8, shift: usize, source: Key, sink: Key) {
    let depth = a.depth();
    let key = |l: usize, i: usize| {
        if l == 0 {
            source
        } else if l == depth {
            sink
        } else {
            (tag, l + shift, i)
        }
    };
    for (l, layer) in a.layers().iter().enumerate() {
        for e in layer {
            b.edge(&key(l, e.from), key(l + 1, e.to), e.label.clone());
        }
    }
}

/// `c·A − c·A` with two constant layers in front: reads are unchanged.
pub fn cancel_prefix(a: &Abp, c: i64) -> Result<Abp> {
    let f = a.field();
    let depth = a.depth() + 2;
    let (s, t) = ((0, 0, 0), (0, depth, 0));
    let mut b = AbpBuilder::new(f, a.num_vars(), depth, s, t);
    let (p, m, mid) = ((0, 1, 0), (0, 1, 1), (0, 2, 0));
    b.const_edge(&s, p, f.from_i64(c));
    b.const_edge(&s, m, f.from_i64(-c));
    b.const_edge(&p, mid, f.one());
    b.const_edge(&m, mid, f.one());
    copy_into(&mut b, a, 1, 2, mid, t);
    b.build(a.order().cloned())
}

/// `A ⊕ (−A)`: two copies side by side, so reads double.
pub fn difference_with_self(a: &Abp) -> Result<Abp> {
    let f = a.field();
    let depth = a.depth() + 1;
    let (s, t) = ((0, 0, 0), (0, depth, 0));
    let mut b = AbpBuilder::new(f, a.num_vars(), depth, s, t);
    let (s1, s2) = ((1, 1, 0), (2, 1, 0));
    b.const_edge(&s, s1, f.one());
    b.const_edge(&s, s2, f.from_i64(-1));
    copy_into(&mut b, a, 1, 1, s1, t);
    copy_into(&mut b, a, 2, 1, s2, t);
    b.build(a.order().cloned())
}

/// Random members for one `(n, r)` cell plus zero members built from them.
pub fn random_cell(
    field: &Field,
    n: usize,
    r: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Member>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ ((r as u64) << 48));
    let mut out = Vec::with_capacity(count + 4);
    for idx in 0..count {
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(&mut rng);
        let pi = Permutation::from_order(&order)?;
        let abp = random_oabp(field, &pi, r, RandomShape::default(), &mut rng)?;
        out.push(Member {
            name: format!("random-n{n}-r{r}-{idx}"),
            abp,
            pi,
            r,
            origin: Origin::Random,
        });
    }
    let mut zeros = Vec::new();
    for (idx, m) in out.iter().take(2).enumerate() {
        zeros.push(Member {
            name: format!("cancel-n{n}-r{r}-{idx}"),
            abp: cancel_prefix(&m.abp, idx as i64 + 1)?,
            pi: m.pi.clone(),
            r,
            origin: Origin::Zero,
        });
    }
    if r >= 2 {
        let once: Vec<&Member> = out
            .iter()
            .filter(|m| stats(&m.abp).read <= r / 2)
            .take(2)
            .collect();
        for (idx, m) in once.into_iter().enumerate() {
            zeros.push(Member {
                name: format!("difference-n{n}-r{r}-{idx}"),
                abp: difference_with_self(&m.abp)?,
                pi: m.pi.clone(),
                r,
                origin: Origin::Zero,
            });
        }
    }
    zeros.push(Member {
        name: format!("zero-n{n}-r{r}"),
        abp: Abp::zero(field, n).with_order(Some(Permutation::identity(n))),
        pi: Permutation::identity(n),
        r,
        origin: Origin::Zero,
    });
    out.extend(zeros);
    Ok(out)
}

/// Family programs on `n` variables whose read is at most `max_read`.
pub fn family_members(field: &Field, n: usize, max_read: usize) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    let mut push = |name: String, abp: Abp| {
        let read = stats(&abp).read;
        if read <= max_read {
            let pi = abp
                .order()
                .cloned()
                .unwrap_or_else(|| Permutation::identity(n));
            out.push(Member {
                name,
                abp,
                pi,
                r: read.max(1),
                origin: Origin::Family,
            });
        }
    };
    for k in 1..=n {
        push(format!("symm-{n}-{k}"), build_symm(field, n, k)?);
    }
    let side = (1..=3).find(|s| s * s == n);
    if let Some(s) = side {
        push(format!("ryser-{s}"), build_ryser(field, s)?);
    }
    if n % 2 == 1 {
        push(
            format!("separation-{}", n / 2),
            build_separation(field, n / 2)?.abp,
        );
    }
    Ok(out)
}

/// Sizes and reads of the standard corpus.
pub const STANDARD_SIZES: [usize; 2] = [2, 4];
pub const STANDARD_READS: [usize; 2] = [1, 2];
/// Odd sizes added for the read lower-bound sweep.
pub const ODD_SIZES: [usize; 2] = [3, 5];

/// The standard corpus: for every `n` in [`STANDARD_SIZES`] and `r` in
/// [`STANDARD_READS`], `per_cell` random members, zero members and the
/// family members of read at most `r`.
pub fn standard(field: &Field, per_cell: usize, seed: u64) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    for &n in &STANDARD_SIZES {
        for &r in &STANDARD_READS {
            out.extend(random_cell(field, n, r, per_cell, seed)?);
        }
        out.extend(family_members(
            field,
            n,
            *STANDARD_READS.iter().max().unwrap(),
        )?);
    }
    Ok(out)
}

/// Members on an odd number of variables, for the middle-partition sweep.
pub fn odd(field: &Field, per_cell: usize, seed: u64) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    for &n in &ODD_SIZES {
        for &r in &STANDARD_READS {
            out.extend(random_cell(field, n, r, per_cell, seed)?);
        }
        out.extend(family_members(field, n, n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abp::{check_order, expand};
    use crate::poly::DEFAULT_TERM_BUDGET;

    #[test]
    fn members_respect_order_and_read() {
        let f = Field::rational();
        let corpus = standard(&f, 10, 7).unwrap();
        for m in &corpus {
            assert!(check_order(&m.abp, &m.pi), "{}", m.name);
            assert!(stats(&m.abp).read <= m.r, "{}", m.name);
            if m.origin == Origin::Zero {
                assert!(
                    expand(&m.abp, DEFAULT_TERM_BUDGET).unwrap().is_zero(),
                    "{}",
                    m.name
                );
            }
        }
        assert!(corpus.iter().any(|m| m.name.starts_with("difference")));
        assert!(corpus.iter().any(|m| m.name == "ryser-2"));
    }

    #[test]
    fn seeded_and_mostly_nonzero() {
        let f = Field::rational();
        let a = random_cell(&f, 4, 2, 20, 3).unwrap();
        let b = random_cell(&f, 4, 2, 20, 3).unwrap();
        let ea: Vec<_> = a
            .iter()
            .map(|m| expand(&m.abp, DEFAULT_TERM_BUDGET).unwrap())
            .collect();
        let eb: Vec<_> = b
            .iter()
            .map(|m| expand(&m.abp, DEFAULT_TERM_BUDGET).unwrap())
            .collect();
        assert_eq!(ea, eb);
        let nonzero = a
            .iter()
            .zip(&ea)
            .filter(|(m, p)| m.origin == Origin::Random && !p.is_zero())
            .count();
        assert!(nonzero >= 15, "{nonzero}");
    }
}
