//! Partial-derivative matrices, the read lower bound they certify, and the
//! named polynomial families with their ordered programs.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abp::{expand, Abp, AbpBuilder, Permutation};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{rank, Matrix};
use crate::par::{self, Exec};
use crate::poly::SparsePoly;

/// Largest half-size `n` for which a `2^n x 2^n` matrix is built.
pub const MAX_DERIV_N: usize = 10;

/// Largest `n` accepted by [`build_ryser`].
pub const MAX_RYSER_N: usize = 5;

/// Default prime for instantiating the `w` weights of the full-rank family.
pub const FULLRANK_PRIME: u64 = (1 << 31) - 1;

/// An assignment of variables to `y_1..y_n` and `z_1..z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// `y[i]` is the (1-based) variable sent to `y_{i+1}`.
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    /// The variable left out by a middle partition.
    pub middle: Option<usize>,
}

impl Partition {
    pub fn new(y: Vec<usize>, z: Vec<usize>) -> Result<Self> {
        if y.len() != z.len() {
            return Err(Error::Invalid(format!(
                "unbalanced partition: {} y-variables, {} z-variables",
                y.len(),
                z.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in y.iter().chain(&z) {
            if v == 0 || !seen.insert(v) {
                return Err(Error::Invalid(format!(
                    "variable x{v} assigned twice or invalid"
                )));
            }
        }
        Ok(Partition { y, z, middle: None })
    }

    pub fn half(&self) -> usize {
        self.y.len()
    }
}

/// `x_{π⁻¹(i)} -> y_i`, `x_{π⁻¹(n+1+i)} -> z_i`, leaving out `x_{π⁻¹(n+1)}`.
pub fn middle_partition(pi: &Permutation, m: usize) -> Result<Partition> {
    if m.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "the middle partition needs an odd number of variables, got {m}"
        )));
    }
    if pi.len() != m {
        return Err(Error::Permutation(format!(
            "order has {} entries, expected {m}",
            pi.len()
        )));
    }
    let n = (m - 1) / 2;
    Ok(Partition {
        y: (1..=n).map(|i| pi.var_at(i)).collect(),
        z: (1..=n).map(|i| pi.var_at(n + 1 + i)).collect(),
        middle: Some(pi.var_at(n + 1)),
    })
}

/// The coefficient matrix `M_p` with rows indexed by `e` and columns by `f`,
/// where bit `i` of an index is the exponent of `y_{i+1}` (resp. `z_{i+1}`).
#[derive(Clone, Debug)]
pub struct DerivMatrix {
    pub n: usize,
    pub matrix: Matrix,
}

pub fn deriv_matrix(p: &SparsePoly, part: &Partition) -> Result<DerivMatrix> {
    let n = part.half();
    if n > MAX_DERIV_N {
        return Err(Error::Budget {
            what: "partial derivative matrix".into(),
            needed: format!("2^{n} rows"),
            limit: format!("2^{MAX_DERIV_N}"),
        });
    }
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear("the partitioned polynomial".into()));
    }
    let mut slot: HashMap<usize, (bool, usize)> = HashMap::new();
    for (i, &v) in part.y.iter().enumerate() {
        slot.insert(v - 1, (true, i));
    }
    for (i, &v) in part.z.iter().enumerate() {
        slot.insert(v - 1, (false, i));
    }
    let mut m = Matrix::zeros(p.field(), 1 << n, 1 << n);
    for (mono, c) in p.terms() {
        let (mut row, mut col) = (0usize, 0usize);
        for (pos, &e) in mono.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match slot.get(&pos) {
                Some((true, i)) => row |= 1 << i,
                Some((false, i)) => col |= 1 << i,
                None => {
                    return Err(Error::Invalid(format!(
                        "x{} occurs but is not partitioned",
                        pos + 1
                    )))
                }
            }
        }
        m.set(row, col, c.clone());
    }
    Ok(DerivMatrix { n, matrix: m })
}

pub fn deriv_matrix_rank(p: &SparsePoly, part: &Partition) -> Result<(DerivMatrix, usize)> {
    let m = deriv_matrix(p, part)?;
    let r = rank(p.field(), m.matrix.clone());
    Ok((m, r))
}

/// Rank of the middle-partitioned derivative in the middle variable. Any
/// `pi`-ordered program computing `p` reads some variable at least this often.
pub fn read_lower_bound(p: &SparsePoly, pi: &Permutation) -> Result<usize> {
    let part = middle_partition(pi, p.nvars())?;
    let middle = part.middle.expect("middle partitions have a middle");
    let d = p.derivative(middle - 1);
    Ok(deriv_matrix_rank(&d, &part)?.1)
}

pub fn read_lower_bound_abp(a: &Abp, pi: &Permutation, budget: usize) -> Result<usize> {
    read_lower_bound(&expand(a, budget)?, pi)
}

/// Grid program for the elementary symmetric polynomial `S_n^k` in the
/// identity order: node `(j, c)` on level `j - 1` computes `S^c(x_j..x_n)`.
pub fn build_symm(field: &Field, n: usize, k: usize) -> Result<Abp> {
    if k == 0 || k > n {
        return Err(Error::Invalid(format!(
            "need 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let mut b = AbpBuilder::new(field, n, n, (1, k), (n + 1, 0));
    for j in 1..=n {
        for c in 0..=k {
            if !b.contains(&(j, c)) {
                continue;
            }
            // the last level holds only the sink (j = n + 1, c = 0)
            if j < n || c == 0 {
                b.const_edge(&(j, c), (j + 1, c), field.one());
            }
            if c > 0 && (j < n || c == 1) {
                b.var_edge(&(j, c), (j + 1, c - 1), j);
            }
        }
    }
    b.build(Some(Permutation::identity(n)))
}

/// `S_n^k` by brute force over `k`-subsets.
pub fn symm_poly(field: &Field, n: usize, k: usize) -> SparsePoly {
    let mut p = SparsePoly::zero(field, n);
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize == k {
            let m: Vec<u32> = (0..n).map(|i| ((mask >> i) & 1) as u32).collect();
            p.add_term(m.into_boxed_slice(), field.one());
        }
    }
    p
}

/// Index of `x_{ij}` in row-major order.
pub fn ryser_var(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + j
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum RyserNode {
    Source,
    Sink,
    /// Branch `mask` (excluded columns), level, whether the current row has
    /// picked its column yet.
    Branch(u32, usize, bool),
}

/// Oblivious program for the `n x n` permanent by Ryser's formula: one chain
/// per excluded column set, variables in row-major order.
pub fn build_ryser(field: &Field, n: usize) -> Result<Abp> {
    if n == 0 || n > MAX_RYSER_N {
        return Err(Error::Budget {
            what: "permanent size".into(),
            needed: n.to_string(),
            limit: format!("1..={MAX_RYSER_N}"),
        });
    }
    let depth = n * n + 1;
    let mut b = AbpBuilder::new(field, n * n, depth, RyserNode::Source, RyserNode::Sink);
    for mask in 0u32..(1 << n) {
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        b.const_edge(
            &RyserNode::Source,
            RyserNode::Branch(mask, 1, false),
            field.from_i64(sign),
        );
        for i in 1..=n {
            for j in 1..=n {
                let level = 1 + (i - 1) * n + (j - 1);
                let last = j == n;
                let target = |picked: bool| {
                    if !last {
                        Some(RyserNode::Branch(mask, level + 1, picked))
                    } else if !picked {
                        None
                    } else if i == n {
                        Some(RyserNode::Sink)
                    } else {
                        Some(RyserNode::Branch(mask, level + 1, false))
                    }
                };
                let free = RyserNode::Branch(mask, level, false);
                let done = RyserNode::Branch(mask, level, true);
                if b.contains(&free) {
                    if let Some(t) = target(false) {
                        b.const_edge(&free, t, field.one());
                    }
                    if mask & (1 << (j - 1)) == 0 {
                        b.var_edge(
                            &free,
                            target(true).expect("picked always continues"),
                            ryser_var(n, i, j),
                        );
                    }
                }
                if b.contains(&done) {
                    b.const_edge(
                        &done,
                        target(true).expect("picked always continues"),
                        field.one(),
                    );
                }
            }
        }
    }
    b.build(Some(Permutation::identity(n * n)))
}

/// The permanent of the `n x n` variable matrix by expanding all `n!` terms.
pub fn permanent_poly(field: &Field, n: usize) -> SparsePoly {
    fn rec(field: &Field, n: usize, row: usize, used: u32, m: &mut Vec<u32>, out: &mut SparsePoly) {
        if row > n {
            out.add_term(m.clone().into_boxed_slice(), field.one());
            return;
        }
        for j in 1..=n {
            if used & (1 << j) == 0 {
                m[ryser_var(n, row, j) - 1] = 1;
                rec(field, n, row + 1, used | (1 << j), m, out);
                m[ryser_var(n, row, j) - 1] = 0;
            }
        }
    }
    let mut out = SparsePoly::zero(field, n * n);
    rec(field, n, 1, 0, &mut vec![0; n * n], &mut out);
    out
}

/// The read-once witness for the order-sensitivity separation. Variable
/// `x_1` here plays the role of the leading variable `x_0` of the original
/// statement, and `x_{i+1}` that of `x_i`.
#[derive(Clone, Debug)]
pub struct Separation {
    pub poly: SparsePoly,
    pub abp: Abp,
    /// The order the program respects (identity).
    pub pi: Permutation,
    /// Even-indexed originals first, then `x_0`, then the rest.
    pub pi_prime: Permutation,
}

/// `p = x_1 · ∏_{i≤n} (x_{2i} + x_{2i+1} + x_{2i} x_{2i+1})` with a read-once
/// program in the identity order.
pub fn build_separation(field: &Field, n: usize) -> Result<Separation> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let m = 2 * n + 1;
    let depth = 1 + 3 * n;
    let mut b = AbpBuilder::new(field, m, depth, (0, 0), (depth, 0));
    b.var_edge(&(0, 0), (1, 0), 1);
    for i in 1..=n {
        let base = 1 + 3 * (i - 1);
        let (a, c) = (2 * i, 2 * i + 1);
        // c -a-> m -1-> w -b-> c', m -1-> m2 -1-> c', c -1-> m' -1-> w
        b.var_edge(&(base, 0), (base + 1, 0), a);
        b.const_edge(&(base, 0), (base + 1, 1), field.one());
        b.const_edge(&(base + 1, 0), (base + 2, 0), field.one());
        b.const_edge(&(base + 1, 1), (base + 2, 0), field.one());
        b.const_edge(&(base + 1, 0), (base + 2, 1), field.one());
        b.var_edge(&(base + 2, 0), (base + 3, 0), c);
        b.const_edge(&(base + 2, 1), (base + 3, 0), field.one());
    }
    let abp = b.build(Some(Permutation::identity(m)))?;

    let mut poly = SparsePoly::var(field, m, 0);
    for i in 1..=n {
        let (a, c) = (
            SparsePoly::var(field, m, 2 * i - 1),
            SparsePoly::var(field, m, 2 * i),
        );
        let factor = a.add(&c).add(&a.mul(&c, usize::MAX)?);
        poly = poly.mul(&factor, usize::MAX)?;
    }
    let mut order: Vec<usize> = (1..=n).map(|i| 2 * i).collect();
    order.push(1);
    order.extend((1..=n).map(|i| 2 * i + 1));
    Ok(Separation {
        poly,
        abp,
        pi: Permutation::identity(m),
        pi_prime: Permutation::from_order(&order)?,
    })
}

/// Instantiated weights `w_{i,l,j}` for the full-rank family.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    field: Field,
    values: BTreeMap<(usize, usize, usize), Elem>,
}

impl Weights {
    /// Fixed-seed pseudo-random weights for every triple used by `f_{1,m}`.
    pub fn seeded(field: &Field, m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = field
            .size()
            .and_then(|s| u64::try_from(s).ok())
            .unwrap_or(FULLRANK_PRIME);
        let mut values = BTreeMap::new();
        for i in 1..=m {
            for j in i..=m {
                for l in i..j {
                    values.insert((i, l, j), field.sample(&mut rng, space));
                }
            }
        }
        Weights {
            field: field.clone(),
            values,
        }
    }

    pub fn set(&mut self, i: usize, l: usize, j: usize, value: Elem) {
        self.values.insert((i, l, j), value);
    }

    pub fn get(&self, i: usize, l: usize, j: usize) -> Elem {
        self.values
            .get(&(i, l, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// `f_{i,j}` over `m` variables.
pub fn build_fullrank(
    m: usize,
    i: usize,
    j: usize,
    w: &Weights,
    budget: usize,
) -> Result<SparsePoly> {
    if i == 0 || j > m || j + 1 < i {
        return Err(Error::Invalid(format!(
            "interval [{i},{j}] outside [1,{m}]"
        )));
    }
    let mut memo = HashMap::new();
    fullrank_rec(m, i, j, w, budget, &mut memo)
}

fn fullrank_rec(
    m: usize,
    i: usize,
    j: usize,
    w: &Weights,
    budget: usize,
    memo: &mut HashMap<(usize, usize), SparsePoly>,
) -> Result<SparsePoly> {
    if let Some(p) = memo.get(&(i, j)) {
        return Ok(p.clone());
    }
    let f = w.field();
    let len = (j + 1).saturating_sub(i);
    let p = if len == 0 {
        SparsePoly::one(f, m)
    } else if len == 1 {
        SparsePoly::var(f, m, i - 1)
    } else {
        let xixj = SparsePoly::var(f, m, i - 1).mul(&SparsePoly::var(f, m, j - 1), budget)?;
        let inner = fullrank_rec(m, i + 1, j - 1, w, budget, memo)?;
        let mut acc = SparsePoly::one(f, m).add(&xixj).mul(&inner, budget)?;
        let splits: Vec<usize> = if len.is_multiple_of(2) {
            (i + 1..=j.saturating_sub(2))
                .filter(|l| (l - i + 1).is_multiple_of(2))
                .collect()
        } else {
            (i..j).collect()
        };
        for l in splits {
            let left = fullrank_rec(m, i, l, w, budget, memo)?;
            let right = fullrank_rec(m, l + 1, j, w, budget, memo)?;
            acc.add_assign(&left.mul(&right, budget)?.scale(&w.get(i, l, j)));
        }
        acc
    };
    memo.insert((i, j), p.clone());
    Ok(p)
}

/// Balanced splits of `vars` into `(y, z)` with `y` listed first; each split
/// appears once (`y` and `z` are increasing).
pub fn balanced_splits(vars: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = vars.len();
    assert!(m.is_multiple_of(2) && m < 64);
    (0u64..(1 << m))
        .filter(|mask| mask.count_ones() as usize == m / 2)
        .map(|mask| {
            let (mut y, mut z) = (Vec::new(), Vec::new());
            for (b, &v) in vars.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    y.push(v);
                } else {
                    z.push(v);
                }
            }
            (y, z)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deficiency {
    pub attempt: usize,
    pub k: usize,
    pub y: Vec<usize>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullRankReport {
    pub n: usize,
    pub attempts: usize,
    /// Rank checks performed by the successful attempt.
    pub checks: usize,
    pub expected_rank: usize,
    /// First failing split of every rejected attempt.
    pub deficient: Vec<Deficiency>,
    pub ok: bool,
}

/// Checks that `∂f_{1,2n+1}/∂x_k` has rank `2^n` under every balanced split of
/// the other variables, for every `k`. An attempt whose weights make some
/// rank drop is recorded and the next weights from `weights` are tried.
pub fn verify_full_rank_with(
    n: usize,
    max_attempts: usize,
    exec: Exec,
    budget: usize,
    weights: impl Fn(usize) -> Weights,
) -> Result<FullRankReport> {
    let m = 2 * n + 1;
    let expected = 1usize << n;
    let mut deficient = Vec::new();
    for attempt in 0..max_attempts {
        let w = weights(attempt);
        let f = build_fullrank(m, 1, m, &w, budget)?;
        let mut tasks = Vec::new();
        for k in 1..=m {
            let rest: Vec<usize> = (1..=m).filter(|&v| v != k).collect();
            for (y, z) in balanced_splits(&rest) {
                tasks.push((k, y, z));
            }
        }
        let derivs: Vec<SparsePoly> = (1..=m).map(|k| f.derivative(k - 1)).collect();
        let ranks = par::map(exec, &tasks, |(k, y, z)| {
            let part = Partition::new(y.clone(), z.clone())?;
            Ok::<_, Error>(deriv_matrix_rank(&derivs[k - 1], &part)?.1)
        });
        let mut failed = None;
        for (task, r) in tasks.iter().zip(ranks) {
            let r: usize = r?;
            if r != expected {
                failed = Some(Deficiency {
                    attempt,
                    k: task.0,
                    y: task.1.clone(),
                    rank: r,
                });
                break;
            }
        }
        match failed {
            Some(d) => deficient.push(d),
            None => {
                return Ok(FullRankReport {
                    n,
                    attempts: attempt + 1,
                    checks: tasks.len(),
                    expected_rank: expected,
                    deficient,
                    ok: true,
                })
            }
        }
    }
    Ok(FullRankReport {
        n,
        attempts: max_attempts,
        checks: 0,
        expected_rank: expected,
        deficient,
        ok: false,
    })
}

/// [`verify_full_rank_with`] using seeded weights over `F_{2^31-1}`; attempt `a`
/// uses seed `seed + a`.
pub fn verify_full_rank(
    n: usize,
    seed: u64,
    max_attempts: usize,
    exec: Exec,
) -> Result<FullRankReport> {
    let field = Field::prime(FULLRANK_PRIME)?;
    let m = 2 * n + 1;
    verify_full_rank_with(
        n,
        max_attempts,
        exec,
        crate::poly::DEFAULT_TERM_BUDGET,
        |a| Weights::seeded(&field, m, seed.wrapping_add(a as u64)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abp::{check_oblivious, check_order, evaluate, stats};
    use crate::poly::DEFAULT_TERM_BUDGET as B;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rational()
    }

    fn x(n: usize, i: usize) -> SparsePoly {
        SparsePoly::var(&q(), n, i - 1)
    }

    #[test]
    fn middle_partition_examples() {
        let p = middle_partition(&Permutation::identity(5), 5).unwrap();
        assert_eq!(
            (p.y.clone(), p.z.clone(), p.middle),
            (vec![1, 2], vec![4, 5], Some(3))
        );
        let rev = Permutation::from_image(vec![3, 2, 1]).unwrap();
        let p = middle_partition(&rev, 3).unwrap();
        assert_eq!(
            (p.y.clone(), p.z.clone(), p.middle),
            (vec![3], vec![1], Some(2))
        );
        assert!(middle_partition(&Permutation::identity(4), 4).is_err());
    }

    #[test]
    fn matrix_examples() {
        let f = q();
        let part = Partition::new(vec![1], vec![3]).unwrap();
        let p = x(3, 1).add(&x(3, 3));
        let (m, r) = deriv_matrix_rank(&p, &part).unwrap();
        let want = [[0, 1], [1, 0]];
        for (e, row) in want.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(m.matrix.get(e, c), &f.from_i64(v));
            }
        }
        assert_eq!(r, 2);
        let zero = SparsePoly::zero(&f, 3);
        assert_eq!(deriv_matrix_rank(&zero, &part).unwrap().1, 0);
        let sq = x(3, 1).mul(&x(3, 1), B).unwrap();
        assert!(matches!(
            deriv_matrix(&sq, &part),
            Err(Error::NotMultilinear(_))
        ));
        assert!(deriv_matrix(&x(3, 2), &part).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let f = q();
        let t7 = build_separation(&f, 1).unwrap();
        assert_eq!(read_lower_bound(&t7.poly, &t7.pi_prime).unwrap(), 2);
        assert!(read_lower_bound(&t7.poly, &t7.pi).unwrap() <= 1);
        let s = symm_poly(&f, 3, 2);
        assert_eq!(read_lower_bound(&s, &Permutation::identity(3)).unwrap(), 2);
        let prod = x(3, 1).mul(&x(3, 2), B).unwrap().mul(&x(3, 3), B).unwrap();
        assert_eq!(
            read_lower_bound(&prod, &Permutation::identity(3)).unwrap(),
            1
        );
    }

    #[test]
    fn symm_examples() {
        let f = q();
        let a = build_symm(&f, 3, 2).unwrap();
        assert_eq!(expand(&a, B).unwrap().to_string(), "x1*x2 + x1*x3 + x2*x3");
        assert_eq!(evaluate(&a, &[f.one(), f.one(), f.one()]), f.from_i64(3));
        let lin = build_symm(&f, 5, 1).unwrap();
        assert_eq!(expand(&lin, B).unwrap(), symm_poly(&f, 5, 1));
        assert_eq!(stats(&lin).read, 1);
        assert!(build_symm(&f, 2, 3).is_err());
        assert!(check_order(&a, &Permutation::identity(3)));
        assert!(check_oblivious(&a).is_ok());
    }

    #[test]
    fn ryser_examples() {
        let f = q();
        let a = build_ryser(&f, 2).unwrap();
        assert_eq!(expand(&a, B).unwrap(), permanent_poly(&f, 2));
        assert_eq!(expand(&a, B).unwrap().to_string(), "x1*x4 + x2*x3");
        assert!(stats(&a).read <= 4);
        let id = [1, 0, 0, 1].map(|v| f.from_i64(v));
        assert_eq!(evaluate(&a, &id), f.one());
        assert_eq!(expand(&build_ryser(&f, 1).unwrap(), B).unwrap(), x(1, 1));
        let ones = vec![f.one(); 9];
        assert_eq!(evaluate(&build_ryser(&f, 3).unwrap(), &ones), f.from_i64(6));
        assert!(build_ryser(&f, 6).is_err());
    }

    #[test]
    fn separation_small() {
        let f = q();
        let t = build_separation(&f, 1).unwrap();
        assert_eq!(expand(&t.abp, B).unwrap(), t.poly);
        assert_eq!(t.poly.to_string(), "x1*x2 + x1*x3 + x1*x2*x3");
        assert_eq!(stats(&t.abp).read, 1);
        assert_eq!(t.pi_prime.order(), &[2, 1, 3]);
        let t2 = build_separation(&f, 2).unwrap();
        assert_eq!(read_lower_bound(&t2.poly, &t2.pi_prime).unwrap(), 4);
    }

    #[test]
    fn fullrank_examples() {
        let f = Field::prime(FULLRANK_PRIME).unwrap();
        let w = Weights::seeded(&f, 3, 7);
        let xf = |i: usize| SparsePoly::var(&f, 3, i - 1);
        let one = SparsePoly::one(&f, 3);
        assert_eq!(build_fullrank(3, 2, 2, &w, B).unwrap(), xf(2));
        let x2x3 = xf(2).mul(&xf(3), B).unwrap();
        assert_eq!(build_fullrank(3, 2, 3, &w, B).unwrap(), one.add(&x2x3));
        let x1x3 = xf(1).mul(&xf(3), B).unwrap();
        let x1x2 = xf(1).mul(&xf(2), B).unwrap();
        let want = one
            .add(&x1x3)
            .mul(&xf(2), B)
            .unwrap()
            .add(
                &xf(1)
                    .mul(&one.add(&x2x3), B)
                    .unwrap()
                    .scale(&w.get(1, 1, 3)),
            )
            .add(
                &one.add(&x1x2)
                    .mul(&xf(3), B)
                    .unwrap()
                    .scale(&w.get(1, 2, 3)),
            );
        assert_eq!(build_fullrank(3, 1, 3, &w, B).unwrap(), want);
    }

    #[test]
    fn full_rank_adversarial_then_generic() {
        let f = Field::prime(FULLRANK_PRIME).unwrap();
        let adversarial = |a: usize| {
            let mut w = Weights::seeded(&f, 3, 11 + a as u64);
            if a == 0 {
                // 1 + w113 + w123 = 0 drops the rank for k = 1 and k = 2
                w.set(1, 1, 3, f.from_i64(2));
                w.set(1, 2, 3, f.from_i64(-3));
            }
            w
        };
        let report = verify_full_rank_with(1, 3, Exec::Sequential, B, adversarial).unwrap();
        assert!(report.ok);
        assert_eq!(report.attempts, 2);
        assert_eq!(report.deficient.len(), 1);
        assert_eq!(report.deficient[0].attempt, 0);
        assert_eq!(report.deficient[0].rank, 1);
        let all_bad = verify_full_rank_with(1, 2, Exec::Sequential, B, |_| adversarial(0)).unwrap();
        assert!(!all_bad.ok);
    }

    #[test]
    fn full_rank_n2() {
        let r = verify_full_rank(2, 1, 3, Exec::default()).unwrap();
        assert!(r.ok);
        assert_eq!(r.expected_rank, 4);
        assert_eq!(r.checks, 5 * 6);
    }

    fn small_poly(vars: [usize; 2], coeffs: [i64; 4]) -> SparsePoly {
        // c0 + c1 a + c2 b + c3 a b over six variables
        let f = q();
        let (a, b) = (
            SparsePoly::var(&f, 6, vars[0] - 1),
            SparsePoly::var(&f, 6, vars[1] - 1),
        );
        let ab = a.mul(&b, B).unwrap();
        SparsePoly::constant(&f, 6, f.from_i64(coeffs[0]))
            .add(&a.scale(&f.from_i64(coeffs[1])))
            .add(&b.scale(&f.from_i64(coeffs[2])))
            .add(&ab.scale(&f.from_i64(coeffs[3])))
    }

    proptest! {
        #[test]
        fn rank_is_multiplicative(c1 in prop::array::uniform4(-2i64..3), c2 in prop::array::uniform4(-2i64..3)) {
            // p over {x1 -> y1, x4 -> z1}, q over {x2 -> y2, x5 -> z2}
            let p = small_poly([1, 4], c1);
            let r = small_poly([2, 5], c2);
            let part_p = Partition::new(vec![1], vec![4]).unwrap();
            let part_q = Partition::new(vec![2], vec![5]).unwrap();
            let part = Partition::new(vec![1, 2], vec![4, 5]).unwrap();
            let rp = deriv_matrix_rank(&p, &part_p).unwrap().1;
            let rq = deriv_matrix_rank(&r, &part_q).unwrap().1;
            let rpq = deriv_matrix_rank(&p.mul(&r, B).unwrap(), &part).unwrap().1;
            prop_assert_eq!(rpq, rp * rq);
        }

        #[test]
        fn rank_invariant_under_relabeling(c in prop::array::uniform4(-2i64..3), d in prop::array::uniform4(-2i64..3)) {
            let p = small_poly([1, 4], c).mul(&small_poly([2, 5], d), B).unwrap();
            let a = Partition::new(vec![1, 2], vec![4, 5]).unwrap();
            let b = Partition::new(vec![2, 1], vec![5, 4]).unwrap();
            prop_assert_eq!(deriv_matrix_rank(&p, &a).unwrap().1, deriv_matrix_rank(&p, &b).unwrap().1);
        }
    }
}
