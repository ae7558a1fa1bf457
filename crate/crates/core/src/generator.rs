//! The hitting-set generator `F^{k,r}` and its building blocks.
//!
//! Seed variables of `F^{k,r}` are laid out as `z_1..z_ell, u_1..u_k,
//! v_1..v_k` with `ell = ell(k, r)`. In the step from `k` to `k + 1` the
//! shift variables `y_1..y_{2r}` are the seeds `z_{ell(k,r)+1}..z_{ell(k+1,r)}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{enumerate_points, Elem, Field, FieldConfig};
use crate::poly::{SparsePoly, VarSpace};

/// `ell(k, r) = 2rk + 1`.
pub fn ell(k: usize, r: usize) -> usize {
    2 * r * k + 1
}

/// Number of seed variables of `F^{k,r}`.
pub fn seed_len(k: usize, r: usize) -> usize {
    ell(k, r) + 2 * k
}

/// Smallest `k` with `n <= 2^k`.
pub fn choose_k(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Number of interpolation points the generator for `(k, r)` needs.
pub fn points_needed(k: usize, r: usize) -> usize {
    seed_len(k, r).max(1 << k)
}

/// 0-based seed position of the alias `y_i` (1-based) of the outermost step
/// of `F^{k,r}`, `k >= 1`.
pub fn y_position(k: usize, r: usize, i: usize) -> usize {
    assert!(k >= 1 && (1..=2 * r).contains(&i));
    ell(k - 1, r) + i - 1
}

/// The Lagrange basis on a tuple of distinct points.
#[derive(Clone, Debug)]
pub struct LagrangeBasis {
    field: Field,
    points: Vec<Elem>,
    /// `1 / prod_{j != i} (a_i - a_j)`.
    scales: Vec<Elem>,
}

impl LagrangeBasis {
    pub fn new(field: &Field, points: Vec<Elem>) -> Result<Self> {
        let mut scales = Vec::with_capacity(points.len());
        for (i, a) in points.iter().enumerate() {
            let mut d = field.one();
            for (j, b) in points.iter().enumerate() {
                if i != j {
                    d = field.mul(&d, &field.sub(a, b));
                }
            }
            let inv = field
                .inv(&d)
                .map_err(|_| Error::Invalid("interpolation points are not distinct".into()))?;
            scales.push(inv);
        }
        Ok(LagrangeBasis {
            field: field.clone(),
            points,
            scales,
        })
    }

    /// The basis on the canonical prefix `S_m`.
    pub fn canonical(field: &Field, m: usize) -> Result<Self> {
        Self::new(field, enumerate_points(field, m)?)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// `L_i` (1-based) as a polynomial in the variable at `pos` of an
    /// `nvars`-variable space.
    pub fn poly(&self, i: usize, nvars: usize, pos: usize) -> SparsePoly {
        let f = &self.field;
        let w = SparsePoly::var(f, nvars, pos);
        let mut acc = SparsePoly::constant(f, nvars, self.scales[i - 1].clone());
        for (j, b) in self.points.iter().enumerate() {
            if j + 1 != i {
                let factor = w.sub(&SparsePoly::constant(f, nvars, b.clone()));
                acc = acc.mul(&factor, usize::MAX).expect("unbounded");
            }
        }
        acc
    }

    /// Values `L_1(w), …, L_m(w)`.
    pub fn eval_all(&self, w: &Elem) -> Vec<Elem> {
        let f = &self.field;
        let diffs: Vec<Elem> = self.points.iter().map(|a| f.sub(w, a)).collect();
        if let Some(hit) = diffs.iter().position(|d| f.is_zero(d)) {
            return (0..self.points.len())
                .map(|i| if i == hit { f.one() } else { f.zero() })
                .collect();
        }
        let m = diffs.len();
        // prefix and suffix products avoid dividing by w - a_i
        let mut prefix = vec![f.one(); m + 1];
        for i in 0..m {
            prefix[i + 1] = f.mul(&prefix[i], &diffs[i]);
        }
        let mut suffix = vec![f.one(); m + 1];
        for i in (0..m).rev() {
            suffix[i] = f.mul(&suffix[i + 1], &diffs[i]);
        }
        (0..m)
            .map(|i| f.mul(&f.mul(&prefix[i], &suffix[i + 1]), &self.scales[i]))
            .collect()
    }
}

/// `L_i` (1-based) on the tuple `points`, as a univariate polynomial.
pub fn lagrange_basis(field: &Field, points: &[Elem], i: usize) -> Result<SparsePoly> {
    if i == 0 || i > points.len() {
        return Err(Error::Invalid(format!(
            "basis index {i} outside 1..={}",
            points.len()
        )));
    }
    Ok(LagrangeBasis::new(field, points.to_vec())?.poly(i, 1, 0))
}

/// A tuple of polynomials over the seed variables of `F^{k,r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    pub k: usize,
    pub r: usize,
    pub outputs: Vec<SparsePoly>,
}

impl PolyMap {
    pub fn space(&self) -> VarSpace {
        VarSpace::Seed {
            ell: ell(self.k, self.r),
            k: self.k,
        }
    }

    pub fn num_inputs(&self) -> usize {
        seed_len(self.k, self.r)
    }

    pub fn eval(&self, point: &[Elem]) -> Vec<Elem> {
        self.outputs.iter().map(|p| p.eval(point)).collect()
    }

    pub fn to_json(&self) -> Value {
        let outputs: Vec<Value> = self.outputs.iter().map(SparsePoly::to_json).collect();
        json!({ "k": self.k, "r": self.r, "outputs": outputs })
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.outputs.iter().enumerate() {
            writeln!(f, "F[{}] = {p}", i + 1)?;
        }
        Ok(())
    }
}

fn check_points(field: &Field, k: usize, r: usize) -> Result<()> {
    let needed = points_needed(k, r);
    if !field.has_at_least(needed as u64) {
        return Err(Error::FieldTooSmall {
            needed: needed.to_string(),
            field: field.config().to_string(),
        });
    }
    Ok(())
}

/// Components of `T^{k,r}` as polynomials in an `nvars`-variable space whose
/// `y_i` sits at position `y0 + i - 1`.
pub fn build_t_in(
    field: &Field,
    k: usize,
    r: usize,
    nvars: usize,
    y0: usize,
) -> Result<Vec<SparsePoly>> {
    let m = seed_len(k, r);
    let h = LagrangeBasis::canonical(field, m)?;
    let mut out = Vec::with_capacity(m);
    for j in 1..=m {
        let mut comp = SparsePoly::zero(field, nvars);
        for i in 0..r {
            let basis = h.poly(j, nvars, y0 + r + i);
            comp.add_assign(&basis.mul_var(y0 + i));
        }
        out.push(comp);
    }
    Ok(out)
}

/// `T^{k,r}` over its own variables `y_1..y_{2r}`.
pub fn build_t(field: &Field, k: usize, r: usize) -> Result<Vec<SparsePoly>> {
    check_points(field, k, r)?;
    build_t_in(field, k, r, 2 * r, 0)
}

/// Values of `T^{k,r}` at `y`.
pub fn eval_t(field: &Field, k: usize, r: usize, y: &[Elem]) -> Result<Vec<Elem>> {
    assert_eq!(y.len(), 2 * r);
    let h = LagrangeBasis::canonical(field, seed_len(k, r))?;
    Ok(eval_t_with(field, &h, r, y))
}

fn eval_t_with(field: &Field, h: &LagrangeBasis, r: usize, y: &[Elem]) -> Vec<Elem> {
    let mut out = vec![field.zero(); h.len()];
    for i in 0..r {
        if field.is_zero(&y[i]) {
            continue;
        }
        for (slot, l) in out.iter_mut().zip(h.eval_all(&y[r + i])) {
            field.add_assign(slot, &field.mul(&y[i], &l));
        }
    }
    out
}

type MemoKey = (usize, usize, FieldConfig);

fn memo() -> &'static Mutex<HashMap<MemoKey, Arc<PolyMap>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Arc<PolyMap>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The symbolic map `F^{k,r}`. Results are cached per `(k, r, field)`.
pub fn build_f(field: &Field, k: usize, r: usize, budget: usize) -> Result<Arc<PolyMap>> {
    if r == 0 {
        return Err(Error::Invalid("read bound must be at least 1".into()));
    }
    check_points(field, k, r)?;
    let key = (k, r, field.config().clone());
    if let Some(hit) = memo().lock().expect("memo poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_f_uncached(field, k, r, budget)?);
    let mut table = memo().lock().expect("memo poisoned");
    Ok(table.entry(key).or_insert(built).clone())
}

fn build_f_uncached(field: &Field, k: usize, r: usize, budget: usize) -> Result<PolyMap> {
    if k == 0 {
        let space = VarSpace::Seed { ell: 1, k: 0 };
        return Ok(PolyMap {
            k,
            r,
            outputs: vec![SparsePoly::var(field, 1, 0).with_space(space)],
        });
    }
    let prev = build_f(field, k - 1, r, budget)?;
    let (ell_prev, ell_new) = (ell(k - 1, r), ell(k, r));
    let nvars = seed_len(k, r);
    let space = VarSpace::Seed { ell: ell_new, k };
    // where each seed of F^{k-1} lives in the new space
    let mut map: Vec<usize> = (0..ell_prev).collect();
    map.extend((0..k - 1).map(|j| ell_new + j));
    map.extend((0..k - 1).map(|j| ell_new + k + j));

    let t = build_t_in(field, k - 1, r, nvars, ell_prev)?;
    let shifted: Vec<SparsePoly> = map
        .iter()
        .zip(&t)
        .map(|(&pos, tj)| SparsePoly::var(field, nvars, pos).add(tj))
        .collect();

    let mut outputs = Vec::with_capacity(1 << k);
    for c in &prev.outputs {
        outputs.push(c.remap(nvars, &map));
    }
    for c in &prev.outputs {
        outputs.push(c.compose(&shifted, budget)?);
    }
    let l = LagrangeBasis::canonical(field, 1 << k)?;
    let (u, v) = (ell_new + k - 1, ell_new + 2 * k - 1);
    for (i, out) in outputs.iter_mut().enumerate() {
        out.add_assign(&l.poly(i + 1, nvars, v).mul_var(u));
        *out = std::mem::replace(out, SparsePoly::zero(field, 0)).with_space(space);
    }
    Ok(PolyMap { k, r, outputs })
}

/// Per-variable degrees of each component of `F^{k,r}`. For `k >= 1` the
/// map `F^{k-1,r}` is expanded exactly and the last recursion step is bounded
/// formally: a monomial `∏ s_j^{e_j}` of an inner component contributes at
/// most `Σ e_j · deg_w(s_j + T_j)` to the degree in `w`. The result is
/// therefore an upper bound, and exact for the first half of the outputs.
pub fn step_degree_bounds(
    field: &Field,
    k: usize,
    r: usize,
    budget: usize,
) -> Result<Vec<Vec<u32>>> {
    if k == 0 {
        return Ok(vec![vec![1]]);
    }
    let prev = build_f(field, k - 1, r, budget)?;
    let (ell_prev, ell_new) = (ell(k - 1, r), ell(k, r));
    let nvars = seed_len(k, r);
    let mut map: Vec<usize> = (0..ell_prev).collect();
    map.extend((0..k - 1).map(|j| ell_new + j));
    map.extend((0..k - 1).map(|j| ell_new + k + j));
    let t = build_t_in(field, k - 1, r, nvars, ell_prev)?;
    let image_degrees: Vec<Vec<u32>> = map
        .iter()
        .zip(&t)
        .map(|(&pos, tj)| SparsePoly::var(field, nvars, pos).add(tj).degrees())
        .collect();
    let (u, v) = (ell_new + k - 1, ell_new + 2 * k - 1);
    let mut out = Vec::with_capacity(1 << k);
    for c in &prev.outputs {
        out.push(c.remap(nvars, &map).degrees());
    }
    for c in &prev.outputs {
        let mut d = vec![0u32; nvars];
        for (m, _) in c.terms() {
            for (w, slot) in d.iter_mut().enumerate() {
                let sum: u32 = m.iter().zip(&image_degrees).map(|(e, g)| e * g[w]).sum();
                *slot = (*slot).max(sum);
            }
        }
        out.push(d);
    }
    for d in out.iter_mut() {
        d[u] = d[u].max(1);
        d[v] = d[v].max((1 << k) - 1);
    }
    Ok(out)
}

/// Point evaluator for `F^{k,r}`, reusing the interpolation data across calls.
#[derive(Clone, Debug)]
pub struct Evaluator {
    field: Field,
    k: usize,
    r: usize,
    /// `h[j]` is the basis on `S_{seed_len(j, r)}` used by `T^{j,r}`.
    h: Vec<LagrangeBasis>,
    /// `l[j]` is the basis on `S_{2^j}` used by `E^j`.
    l: Vec<LagrangeBasis>,
}

impl Evaluator {
    pub fn new(field: &Field, k: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("read bound must be at least 1".into()));
        }
        check_points(field, k, r)?;
        let h = (0..k)
            .map(|j| LagrangeBasis::canonical(field, seed_len(j, r)))
            .collect::<Result<_>>()?;
        let l = (0..=k)
            .map(|j| LagrangeBasis::canonical(field, 1 << j))
            .collect::<Result<_>>()?;
        Ok(Evaluator {
            field: field.clone(),
            k,
            r,
            h,
            l,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn eval(&self, seed: &[Elem]) -> Vec<Elem> {
        assert_eq!(
            seed.len(),
            seed_len(self.k, self.r),
            "seed has wrong length"
        );
        self.eval_at(self.k, seed)
    }

    fn eval_at(&self, k: usize, seed: &[Elem]) -> Vec<Elem> {
        if k == 0 {
            return vec![seed[0].clone()];
        }
        let f = &self.field;
        let r = self.r;
        let (ell_prev, ell_new) = (ell(k - 1, r), ell(k, r));
        let mut inner: Vec<Elem> = seed[..ell_prev].to_vec();
        inner.extend_from_slice(&seed[ell_new..ell_new + k - 1]);
        inner.extend_from_slice(&seed[ell_new + k..ell_new + 2 * k - 1]);
        let y = &seed[ell_prev..ell_new];
        let t = eval_t_with(f, &self.h[k - 1], r, y);
        let shifted: Vec<Elem> = inner.iter().zip(&t).map(|(a, b)| f.add(a, b)).collect();
        let mut out = self.eval_at(k - 1, &inner);
        out.extend(self.eval_at(k - 1, &shifted));
        let u = &seed[ell_new + k - 1];
        if !f.is_zero(u) {
            let v = &seed[ell_new + 2 * k - 1];
            for (slot, lv) in out.iter_mut().zip(self.l[k].eval_all(v)) {
                f.add_assign(slot, &f.mul(u, &lv));
            }
        }
        out
    }
}

/// `F^{k,r}` at one seed point, without symbolic expansion.
pub fn eval_f(field: &Field, k: usize, r: usize, seed: &[Elem]) -> Result<Vec<Elem>> {
    Ok(Evaluator::new(field, k, r)?.eval(seed))
}

/// Individual-degree bounds for the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    /// Bound on the individual degree of any component of `F^{k,r}`.
    pub component: BigUint,
    /// `2^k` times the component bound: covers a multilinear `f` in `2^k`
    /// variables composed with `F^{k,r}`.
    pub composition: BigUint,
}

pub fn degree_bounds(k: usize, r: usize) -> DegreeBounds {
    let mut d = BigUint::from(1u32);
    for j in 1..k {
        let a = (ell(j, r) + 2 * j) as u64;
        d *= BigUint::from(a) * BigUint::from(a - 1);
    }
    DegreeBounds {
        composition: &d << k,
        component: d,
    }
}
