//! Sparse multivariate polynomials with exact coefficients.
//!
//! This is the brute-force representation every other module is checked
//! against. Exponent vectors are dense (`nvars` entries) and unrestricted, so
//! non-multilinear generator components fit as well as ABP expansions.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldConfig};

/// Default cap on the number of terms any intermediate polynomial may hold.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

pub type Monomial = Box<[u32]>;

/// How variables are named when printed or serialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarSpace {
    /// `x_1, …, x_n`.
    X,
    /// Generator seeds `z_1..z_ell, u_1..u_k, v_1..v_k`.
    Seed { ell: usize, k: usize },
}

impl VarSpace {
    /// Display name of the variable at 0-based position `i`.
    pub fn name(&self, i: usize) -> String {
        match *self {
            VarSpace::X => format!("x{}", i + 1),
            VarSpace::Seed { ell, k } => {
                if i < ell {
                    format!("z{}", i + 1)
                } else if i < ell + k {
                    format!("u{}", i - ell + 1)
                } else {
                    format!("v{}", i - ell - k + 1)
                }
            }
        }
    }

    /// Key used in the `exps` map of the file format.
    pub fn key(&self, i: usize) -> String {
        match self {
            VarSpace::X => (i + 1).to_string(),
            VarSpace::Seed { .. } => self.name(i),
        }
    }

    pub fn parse_key(&self, key: &str) -> Option<usize> {
        match *self {
            VarSpace::X => key.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1),
            VarSpace::Seed { ell, k } => {
                let (head, tail) = key.split_at(1);
                let i: usize = tail.parse().ok().filter(|&i| i >= 1)?;
                match head {
                    "z" if i <= ell => Some(i - 1),
                    "u" if i <= k => Some(ell + i - 1),
                    "v" if i <= k => Some(ell + k + i - 1),
                    _ => None,
                }
            }
        }
    }
}

/// Graded order: lower total degree first, ties broken so that earlier
/// variables carry larger exponents first.
pub fn graded_lex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

#[derive(Clone)]
pub struct SparsePoly {
    field: Field,
    nvars: usize,
    space: VarSpace,
    terms: HashMap<Monomial, Elem>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let mut factors: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            self.space.name(i)
                        } else {
                            format!("{}^{e}", self.space.name(i))
                        }
                    })
                    .collect();
                if factors.is_empty() || !self.field.is_one(c) {
                    factors.insert(0, self.field.format(c));
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl SparsePoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        SparsePoly {
            field: field.clone(),
            nvars,
            space: VarSpace::X,
            terms: HashMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars].into_boxed_slice(), c);
        p
    }

    pub fn one(field: &Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The variable at 0-based position `i`.
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.terms.insert(m.into_boxed_slice(), field.one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            p.add_term(m.into_boxed_slice(), c);
        }
        p
    }

    pub fn with_space(mut self, space: VarSpace) -> Self {
        self.space = space;
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Terms in canonical (graded-lex) order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_lex(a.0, b.0));
        v
    }

    /// Adds `c·m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        debug_assert_eq!(m.len(), self.nvars);
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                self.field.add_assign(slot, &c);
                if self.field.is_zero(slot) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials over different variable sets"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big.space = self.space;
        big
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_compatible(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = self.field.neg(c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars).with_space(self.space);
        }
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v = self.field.mul(v, c);
        }
        p
    }

    /// Product, failing if the result would exceed `budget` terms.
    pub fn mul(&self, other: &Self, budget: usize) -> Result<Self> {
        self.check_compatible(other);
        let f = &self.field;
        let mut out: HashMap<Monomial, Elem> = HashMap::with_capacity(
            (self.terms.len() * other.terms.len()).min(budget.saturating_add(1)),
        );
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                let c = f.mul(ca, cb);
                match out.get_mut(&m) {
                    Some(slot) => f.add_assign(slot, &c),
                    None => {
                        out.insert(m, c);
                        if out.len() > budget {
                            return Err(Error::Budget {
                                what: "polynomial term".into(),
                                needed: format!("> {budget}"),
                                limit: budget.to_string(),
                            });
                        }
                    }
                }
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        Ok(SparsePoly {
            field: f.clone(),
            nvars: self.nvars,
            space: self.space,
            terms: out,
        })
    }

    /// Multiplies by the variable at position `i`.
    pub fn mul_var(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[i] += 1;
                (m, c.clone())
            })
            .collect();
        SparsePoly {
            field: self.field.clone(),
            nvars: self.nvars,
            space: self.space,
            terms,
        }
    }

    pub fn pow(&self, e: u32, budget: usize) -> Result<Self> {
        let mut acc = Self::one(&self.field, self.nvars).with_space(self.space);
        for _ in 0..e {
            acc = acc.mul(self, budget)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to position `i`.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let f = &self.field;
        let mut p = Self::zero(f, self.nvars).with_space(self.space);
        for (m, c) in &self.terms {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            p.add_term(m2, f.mul(c, &f.from_i64(e as i64)));
        }
        p
    }

    /// Substitutes constants for some variables; the variable set is kept.
    pub fn substitute(&self, assignment: &[(usize, Elem)]) -> Self {
        let f = &self.field;
        let mut p = Self::zero(f, self.nvars).with_space(self.space);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut c2 = c.clone();
            for (i, v) in assignment {
                let e = m2[*i];
                if e > 0 {
                    c2 = f.mul(&c2, &f.pow(v, e as u64));
                    m2[*i] = 0;
                }
            }
            p.add_term(m2, c2);
        }
        p
    }

    pub fn eval(&self, point: &[Elem]) -> Elem {
        assert_eq!(point.len(), self.nvars, "point has wrong length");
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.iter().zip(point) {
                if *e > 0 {
                    t = f.mul(&t, &f.pow(x, *e as u64));
                }
            }
            f.add_assign(&mut acc, &t);
        }
        acc
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// Per-variable maximum exponents.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (slot, &e) in d.iter_mut().zip(m.iter()) {
                *slot = (*slot).max(e);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e <= 1))
    }

    /// Positions of the variables that occur.
    pub fn vars(&self) -> BTreeSet<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Re-embeds into `nvars` variables, sending position `j` to `map[j]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut p = Self::zero(&self.field, nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0u32; nvars];
            for (j, &e) in m.iter().enumerate() {
                m2[map[j]] += e;
            }
            p.add_term(m2.into_boxed_slice(), c.clone());
        }
        p
    }

    /// Substitutes `images[j]` for variable `j` and expands.
    ///
    /// Horner-style: the polynomial is split by powers of one variable at a
    /// time so each image is multiplied in once per distinct exponent.
    pub fn compose(&self, images: &[SparsePoly], budget: usize) -> Result<SparsePoly> {
        assert_eq!(images.len(), self.nvars, "need one image per variable");
        let target = match images.first() {
            Some(g) => g,
            None => {
                // constant polynomial, no variables
                let c = self.coeff(&[]);
                return Ok(SparsePoly::constant(&self.field, 0, c));
            }
        };
        for g in images {
            assert_eq!(g.field, self.field, "image over a different field");
            assert_eq!(g.nvars, target.nvars, "images over different variable sets");
        }
        let terms: Vec<(&Monomial, &Elem)> = self.terms.iter().collect();
        let out = compose_rec(&terms, 0, images, budget)?;
        Ok(out.with_space(target.space))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let exps: Map<String, Value> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (self.space.key(i), Value::from(e)))
                    .collect();
                json!({ "coeff": self.field.to_json(c), "exps": exps })
            })
            .collect();
        json!({
            "field": self.field.config(),
            "num_vars": self.nvars,
            "terms": terms,
        })
    }

    /// Reads the file format; `num_vars` defaults to the largest index used.
    pub fn from_json(v: &Value, space: VarSpace) -> Result<Self> {
        let cfg: FieldConfig = serde_json::from_value(
            v.get("field")
                .cloned()
                .ok_or_else(|| Error::Parse("polynomial file lacks \"field\"".into()))?,
        )
        .map_err(|e| Error::Parse(format!("field: {e}")))?;
        let field = Field::new(cfg)?;
        let raw = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial file lacks a \"terms\" array".into()))?;
        let mut parsed = Vec::with_capacity(raw.len());
        let mut max_var = 0usize;
        for (t, term) in raw.iter().enumerate() {
            let c = term
                .get("coeff")
                .ok_or_else(|| Error::Parse(format!("terms[{t}]: missing \"coeff\"")))?;
            let c = field
                .from_json(c)
                .map_err(|e| Error::Parse(format!("terms[{t}].coeff: {e}")))?;
            let mut exps = Vec::new();
            if let Some(map) = term.get("exps") {
                let map = map
                    .as_object()
                    .ok_or_else(|| Error::Parse(format!("terms[{t}].exps must be an object")))?;
                for (key, e) in map {
                    let i = space.parse_key(key).ok_or_else(|| {
                        Error::Parse(format!("terms[{t}].exps: bad variable {key:?}"))
                    })?;
                    let e = e.as_u64().ok_or_else(|| {
                        Error::Parse(format!(
                            "terms[{t}].exps[{key}]: exponent must be a natural number"
                        ))
                    })?;
                    max_var = max_var.max(i + 1);
                    exps.push((i, e as u32));
                }
            }
            parsed.push((exps, c));
        }
        let nvars = match v.get("num_vars") {
            Some(n) => {
                let n = n
                    .as_u64()
                    .ok_or_else(|| Error::Parse("num_vars must be a natural number".into()))?
                    as usize;
                if n < max_var {
                    return Err(Error::Parse(format!(
                        "num_vars = {n} but variable {max_var} is used"
                    )));
                }
                n
            }
            None => match space {
                VarSpace::Seed { ell, k } => ell + 2 * k,
                VarSpace::X => max_var,
            },
        };
        let mut p = SparsePoly::zero(&field, nvars).with_space(space);
        for (exps, c) in parsed {
            let mut m = vec![0u32; nvars];
            for (i, e) in exps {
                m[i] += e;
            }
            p.add_term(m.into_boxed_slice(), c);
        }
        Ok(p)
    }
}

fn compose_rec(
    terms: &[(&Monomial, &Elem)],
    var: usize,
    images: &[SparsePoly],
    budget: usize,
) -> Result<SparsePoly> {
    let target = &images[0];
    let field = target.field();
    if terms.is_empty() {
        return Ok(SparsePoly::zero(field, target.nvars));
    }
    if var == images.len() {
        let mut c = field.zero();
        for (_, t) in terms {
            field.add_assign(&mut c, t);
        }
        return Ok(SparsePoly::constant(field, target.nvars, c));
    }
    let mut groups: HashMap<u32, Vec<(&Monomial, &Elem)>> = HashMap::new();
    for &(m, c) in terms {
        groups.entry(m[var]).or_default().push((m, c));
    }
    if groups.len() == 1 && groups.contains_key(&0) {
        return compose_rec(terms, var + 1, images, budget);
    }
    let max_e = *groups.keys().max().unwrap();
    let mut acc = SparsePoly::zero(field, target.nvars);
    for e in (0..=max_e).rev() {
        if !acc.is_zero() {
            acc = acc.mul(&images[var], budget)?;
        }
        if let Some(group) = groups.get(&e) {
            acc.add_assign(&compose_rec(group, var + 1, images, budget)?);
        }
        if acc.num_terms() > budget {
            return Err(Error::Budget {
                what: "polynomial term".into(),
                needed: format!("> {budget}"),
                limit: budget.to_string(),
            });
        }
    }
    Ok(acc)
}
