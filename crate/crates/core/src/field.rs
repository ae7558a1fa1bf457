//! Exact scalar arithmetic over the rationals, prime fields and their
//! extensions, together with the canonical interpolation point sequence.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `p^d` searched by [`find_irreducible`] unless told otherwise.
pub const DEFAULT_IRREDUCIBLE_BUDGET: u64 = 1 << 20;

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldConfig {
    Rational,
    Prime {
        p: u64,
    },
    Extension {
        p: u64,
        deg: usize,
        /// Monic modulus, low degree first, length `deg + 1`.
        modulus: Vec<u64>,
    },
}

impl FieldConfig {
    pub fn prime(p: u64) -> Self {
        FieldConfig::Prime { p }
    }

    /// Extension of degree `deg` over `F_p` using the smallest irreducible modulus.
    pub fn extension(p: u64, deg: usize) -> Result<Self> {
        let modulus = find_irreducible(p, deg, DEFAULT_IRREDUCIBLE_BUDGET)?;
        Ok(FieldConfig::Extension { p, deg, modulus })
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rational => write!(f, "Q"),
            FieldConfig::Prime { p } => write!(f, "F_{p}"),
            FieldConfig::Extension { p, deg, .. } => write!(f, "F_{p}^{deg}"),
        }
    }
}

/// A field element. Representatives are canonical, so derived equality is
/// field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Rat(BigRational),
    Mod(u64),
    /// Coefficients of a polynomial of degree `< deg`, low degree first.
    Ext(Box<[u64]>),
}

#[derive(Debug)]
enum Kind {
    Rational,
    Prime(u64),
    Extension { p: u64, modulus: Vec<u64> },
}

/// Immutable arithmetic context. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    config: FieldConfig,
    kind: Kind,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.inner.config)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.config == other.inner.config
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(config: FieldConfig) -> Result<Self> {
        let kind = match &config {
            FieldConfig::Rational => Kind::Rational,
            FieldConfig::Prime { p } => {
                check_prime(*p)?;
                Kind::Prime(*p)
            }
            FieldConfig::Extension { p, deg, modulus } => {
                check_prime(*p)?;
                if *deg < 2 {
                    return Err(Error::Field(format!(
                        "extension degree must be at least 2, got {deg}"
                    )));
                }
                if modulus.len() != deg + 1 || modulus[*deg] != 1 {
                    return Err(Error::Field(format!(
                        "modulus must be monic of degree {deg} (low degree first)"
                    )));
                }
                if modulus.iter().any(|&c| c >= *p) {
                    return Err(Error::Field(
                        "modulus coefficients must lie in [0, p)".into(),
                    ));
                }
                if !upoly::is_irreducible(modulus, *p) {
                    return Err(Error::Field(format!(
                        "modulus {modulus:?} is reducible over F_{p}"
                    )));
                }
                Kind::Extension {
                    p: *p,
                    modulus: modulus.clone(),
                }
            }
        };
        Ok(Field {
            inner: Arc::new(Inner { config, kind }),
        })
    }

    pub fn rational() -> Self {
        Field::new(FieldConfig::Rational).expect("Q is always valid")
    }

    pub fn prime(p: u64) -> Result<Self> {
        Field::new(FieldConfig::Prime { p })
    }

    pub fn config(&self) -> &FieldConfig {
        &self.inner.config
    }

    /// Characteristic (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match &self.inner.kind {
            Kind::Rational => 0,
            Kind::Prime(p) | Kind::Extension { p, .. } => *p,
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<BigUint> {
        match &self.inner.kind {
            Kind::Rational => None,
            Kind::Prime(p) => Some(BigUint::from(*p)),
            Kind::Extension { p, modulus } => {
                Some(BigUint::from(*p).pow((modulus.len() - 1) as u32))
            }
        }
    }

    /// True when the field has at least `m` elements.
    pub fn has_at_least(&self, m: u64) -> bool {
        self.size().is_none_or(|s| s >= BigUint::from(m))
    }

    pub fn zero(&self) -> Elem {
        match &self.inner.kind {
            Kind::Rational => Elem::Rat(BigRational::zero()),
            Kind::Prime(_) => Elem::Mod(0),
            Kind::Extension { modulus, .. } => {
                Elem::Ext(vec![0; modulus.len() - 1].into_boxed_slice())
            }
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &self.inner.kind {
            Kind::Rational => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            Kind::Prime(p) => Elem::Mod(reduce_i64(n, *p)),
            Kind::Extension { p, modulus } => {
                let mut c = vec![0; modulus.len() - 1];
                c[0] = reduce_i64(n, *p);
                Elem::Ext(c.into_boxed_slice())
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Elem> {
        let d = self.from_i64(den);
        let inv = self.inv(&d)?;
        Ok(self.mul(&self.from_i64(num), &inv))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(x) => *x == 0,
            Elem::Ext(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_one(),
            Elem::Mod(x) => *x == 1,
            Elem::Ext(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
        }
    }

    /// Whether `a` is a valid canonical representative of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.inner.kind, a) {
            (Kind::Rational, Elem::Rat(_)) => true,
            (Kind::Prime(p), Elem::Mod(x)) => x < p,
            (Kind::Extension { p, modulus }, Elem::Ext(c)) => {
                c.len() == modulus.len() - 1 && c.iter().all(|x| x < p)
            }
            _ => false,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b, &self.inner.kind) {
            (Elem::Rat(x), Elem::Rat(y), _) => Elem::Rat(x + y),
            (Elem::Mod(x), Elem::Mod(y), Kind::Prime(p)) => Elem::Mod(add_mod(*x, *y, *p)),
            (Elem::Ext(x), Elem::Ext(y), Kind::Extension { p, .. }) => Elem::Ext(
                x.iter()
                    .zip(y.iter())
                    .map(|(&a, &b)| add_mod(a, b, *p))
                    .collect(),
            ),
            _ => mismatch(a, b),
        }
    }

    pub fn add_assign(&self, a: &mut Elem, b: &Elem) {
        match (a, b, &self.inner.kind) {
            (Elem::Rat(x), Elem::Rat(y), _) => *x += y,
            (Elem::Mod(x), Elem::Mod(y), Kind::Prime(p)) => *x = add_mod(*x, *y, *p),
            (Elem::Ext(x), Elem::Ext(y), Kind::Extension { p, .. }) => {
                for (a, &b) in x.iter_mut().zip(y.iter()) {
                    *a = add_mod(*a, b, *p);
                }
            }
            (a, b, _) => mismatch(a, b),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (a, &self.inner.kind) {
            (Elem::Rat(x), _) => Elem::Rat(-x),
            (Elem::Mod(x), Kind::Prime(p)) => Elem::Mod(neg_mod(*x, *p)),
            (Elem::Ext(x), Kind::Extension { p, .. }) => {
                Elem::Ext(x.iter().map(|&a| neg_mod(a, *p)).collect())
            }
            _ => mismatch(a, a),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b, &self.inner.kind) {
            (Elem::Rat(x), Elem::Rat(y), _) => Elem::Rat(x * y),
            (Elem::Mod(x), Elem::Mod(y), Kind::Prime(p)) => Elem::Mod(mul_mod(*x, *y, *p)),
            (Elem::Ext(x), Elem::Ext(y), Kind::Extension { p, modulus }) => {
                Elem::Ext(upoly::mul_reduce(x, y, modulus, *p).into_boxed_slice())
            }
            _ => mismatch(a, b),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (a, &self.inner.kind) {
            (Elem::Rat(x), _) => Elem::Rat(x.recip()),
            (Elem::Mod(x), Kind::Prime(p)) => Elem::Mod(inv_mod(*x, *p)),
            (Elem::Ext(x), Kind::Extension { p, modulus }) => {
                Elem::Ext(upoly::inv_reduce(x, modulus, *p).into_boxed_slice())
            }
            _ => mismatch(a, a),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The `index`-th element of the canonical enumeration (0-based).
    ///
    /// Rationals and prime fields count `0, 1, 2, …`; extension fields count
    /// coefficient vectors in base `p`, lowest coefficient fastest.
    pub fn point(&self, index: u64) -> Result<Elem> {
        if !self.has_at_least(index.saturating_add(1)) {
            return Err(Error::FieldTooSmall {
                needed: index.saturating_add(1).to_string(),
                field: self.config().to_string(),
            });
        }
        Ok(match &self.inner.kind {
            Kind::Rational => Elem::Rat(BigRational::from_integer(BigInt::from(index))),
            Kind::Prime(_) => Elem::Mod(index),
            Kind::Extension { p, modulus } => {
                let mut c = vec![0; modulus.len() - 1];
                let mut rest = index;
                for slot in c.iter_mut() {
                    *slot = rest % p;
                    rest /= p;
                }
                Elem::Ext(c.into_boxed_slice())
            }
        })
    }

    /// Lifts an element of the prime subfield (or an integer-valued rational)
    /// into this field.
    pub fn embed(&self, a: &Elem) -> Result<Elem> {
        match (a, &self.inner.kind) {
            (Elem::Mod(x), Kind::Prime(p)) if x < p => Ok(a.clone()),
            (Elem::Mod(x), Kind::Extension { p, modulus }) if x < p => {
                let mut c = vec![0; modulus.len() - 1];
                c[0] = *x;
                Ok(Elem::Ext(c.into_boxed_slice()))
            }
            (Elem::Rat(_), Kind::Rational) => Ok(a.clone()),
            (Elem::Ext(_), Kind::Extension { .. }) if self.contains(a) => Ok(a.clone()),
            _ => Err(Error::FieldMismatch(format!(
                "cannot embed {a:?} into {}",
                self.config()
            ))),
        }
    }

    /// JSON encoding: `"p/q"` strings for rationals, residues for prime
    /// fields, coefficient lists for extensions.
    pub fn to_json(&self, a: &Elem) -> serde_json::Value {
        match a {
            Elem::Rat(r) => serde_json::Value::String(format_rational(r)),
            Elem::Mod(x) => serde_json::Value::from(*x),
            Elem::Ext(c) => serde_json::Value::from(c.to_vec()),
        }
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<Elem> {
        use serde_json::Value;
        match v {
            Value::String(s) => self.parse(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(self.from_i64(i))
                } else if let Some(u) = n.as_u64() {
                    self.parse(&u.to_string())
                } else {
                    Err(Error::Parse(format!(
                        "non-integer number {n} as field element"
                    )))
                }
            }
            Value::Array(items) => match &self.inner.kind {
                Kind::Extension { p, modulus } => {
                    let d = modulus.len() - 1;
                    if items.len() > d {
                        return Err(Error::Parse(format!(
                            "extension element has {} coefficients, expected at most {d}",
                            items.len()
                        )));
                    }
                    let mut c = vec![0; d];
                    for (slot, item) in c.iter_mut().zip(items) {
                        let x = item.as_i64().ok_or_else(|| {
                            Error::Parse(format!("bad extension coefficient {item}"))
                        })?;
                        *slot = reduce_i64(x, *p);
                    }
                    Ok(Elem::Ext(c.into_boxed_slice()))
                }
                _ => Err(Error::Parse(format!(
                    "coefficient list given for non-extension field {}",
                    self.config()
                ))),
            },
            other => Err(Error::Parse(format!(
                "cannot read field element from {other}"
            ))),
        }
    }

    /// Parses `"a"` or `"a/b"` into the field.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match &self.inner.kind {
            Kind::Rational => Ok(Elem::Rat(BigRational::new(num, den))),
            Kind::Prime(p) | Kind::Extension { p, .. } => {
                let n = self.from_i64(reduce_big(&num, *p) as i64);
                let d = self.from_i64(reduce_big(&den, *p) as i64);
                self.div(&n, &d)
                    .map_err(|_| Error::Parse(format!("denominator of {s:?} vanishes mod {p}")))
            }
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        match a {
            Elem::Rat(r) => format_rational(r),
            Elem::Mod(x) => x.to_string(),
            Elem::Ext(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| match i {
                        0 => x.to_string(),
                        1 if x == 1 => "a".to_string(),
                        1 => format!("{x}*a"),
                        _ if x == 1 => format!("a^{i}"),
                        _ => format!("{x}*a^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    format!("({})", terms.join(" + "))
                }
            }
        }
    }

    /// Uniformly samples an element among the first `space` canonical points.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R, space: u64) -> Elem {
        let space = match self.size().and_then(|s| s.to_u64()) {
            Some(s) => space.min(s),
            None => space,
        };
        self.point(rng.gen_range(0..space.max(1)))
            .expect("index within field size")
    }
}

fn mismatch(a: &Elem, b: &Elem) -> ! {
    panic!("field element kind mismatch: {a:?} vs {b:?}")
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Enumerates `(α_1, …, α_m)`; always a prefix of longer enumerations.
pub fn enumerate_points(field: &Field, m: usize) -> Result<Vec<Elem>> {
    if !field.has_at_least(m as u64) {
        return Err(Error::FieldTooSmall {
            needed: m.to_string(),
            field: field.config().to_string(),
        });
    }
    (0..m as u64).map(|i| field.point(i)).collect()
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Field(format!("{p} is not prime")))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest monic irreducible polynomial of degree `d` over `F_p`, ordered by
/// the integer `Σ c_i p^i` of its non-leading coefficients.
pub fn find_irreducible(p: u64, d: usize, budget: u64) -> Result<Vec<u64>> {
    check_prime(p)?;
    if d < 2 {
        return Err(Error::Field(format!(
            "irreducible search needs degree at least 2, got {d}"
        )));
    }
    let count = u32::try_from(d)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|&c| c <= budget)
        .ok_or_else(|| Error::Budget {
            what: "irreducible search".into(),
            needed: format!("{p}^{d}"),
            limit: budget.to_string(),
        })?;
    for index in 0..count {
        let mut f = vec![0u64; d + 1];
        f[d] = 1;
        let mut rest = index;
        for slot in f.iter_mut().take(d) {
            *slot = rest % p;
            rest /= p;
        }
        if upoly::is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    (n as i128).rem_euclid(p as i128) as u64
}

fn reduce_big(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = n % &m;
    let r = if r.is_negative() { r + m } else { r };
    r.to_u64().expect("residue fits")
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    if s >= p as u128 {
        (s - p as u128) as u64
    } else {
        s as u64
    }
}

#[inline]
fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

/// Dense univariate polynomials over `F_p`, low degree first.
mod upoly {
    use super::{add_mod, inv_mod, mul_mod, neg_mod};

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo `m` (m nonzero, any leading coefficient).
    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = mul_mod(r[dr], lead_inv, p);
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let k = dr - dm + i;
                    r[k] = add_mod(r[k], neg_mod(mul_mod(c, mi, p), p), p);
                }
            }
            r.pop();
            r = trim(r);
        }
        r
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                add_mod(x, neg_mod(y, p), p)
            })
            .collect();
        trim(out)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            e >>= 1;
            if e > 0 {
                b = rem(&mul(&b, &b, p), m, p);
            }
        }
        acc
    }

    /// Ben-Or: `f` of degree `d` is irreducible iff
    /// `gcd(x^{p^i} - x, f) = 1` for every `1 <= i <= d/2`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        if f.len() < 2 {
            return false;
        }
        let d = f.len() - 1;
        if d == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let mut xp = x.clone();
        for _ in 1..=d / 2 {
            xp = pow_mod(&xp, p, &f, p);
            let g = gcd(&f, &sub(&xp, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    pub(super) fn mul_reduce(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        let d = modulus.len() - 1;
        let mut r = rem(&mul(a, b, p), modulus, p);
        r.resize(d, 0);
        r
    }

    pub(super) fn inv_reduce(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        // extended Euclid on (modulus, a)
        let d = modulus.len() - 1;
        let (mut r0, mut r1) = (trim(modulus.to_vec()), trim(a.to_vec()));
        let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divmod(&r0, &r1, p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = inv_mod(r0[0], p);
        let mut out: Vec<u64> = rem(&t0, modulus, p)
            .iter()
            .map(|&x| mul_mod(x, c, p))
            .collect();
        out.resize(d, 0);
        out
    }

    fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let c = mul_mod(r[dr], lead_inv, p);
            q[dr - db] = c;
            for (i, &bi) in b.iter().enumerate() {
                let k = dr - db + i;
                r[k] = add_mod(r[k], neg_mod(mul_mod(c, bi, p), p), p);
            }
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    #[cfg(test)]
    pub(super) fn has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| {
            f.iter()
                .rev()
                .fold(0u64, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
                == 0
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ext(p: u64, d: usize) -> Field {
        Field::new(FieldConfig::extension(p, d).unwrap()).unwrap()
    }

    #[test]
    fn prime_inverse() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.inv(&Elem::Mod(2)).unwrap(), Elem::Mod(3));
        assert!(f.inv(&Elem::Mod(0)).is_err());
    }

    #[test]
    fn rational_addition() {
        let q = Field::rational();
        let a = q.parse("1/3").unwrap();
        let b = q.parse("1/6").unwrap();
        assert_eq!(q.format(&q.add(&a, &b)), "1/2");
        assert_eq!(q.format(&q.parse("-4/6").unwrap()), "-2/3");
    }

    #[test]
    fn extension_i_squared() {
        let f = Field::new(FieldConfig::Extension {
            p: 3,
            deg: 2,
            modulus: vec![1, 0, 1],
        })
        .unwrap();
        let x = Elem::Ext(vec![0, 1].into_boxed_slice());
        assert_eq!(f.mul(&x, &x), Elem::Ext(vec![2, 0].into_boxed_slice()));
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        // x^2 + 2 = (x+1)(x+2) over F_3
        assert!(Field::new(FieldConfig::Extension {
            p: 3,
            deg: 2,
            modulus: vec![2, 0, 1]
        })
        .is_err());
        assert!(Field::new(FieldConfig::Extension {
            p: 3,
            deg: 1,
            modulus: vec![0, 1]
        })
        .is_err());
    }

    #[test]
    fn irreducible_search() {
        assert_eq!(
            find_irreducible(2, 2, DEFAULT_IRREDUCIBLE_BUDGET).unwrap(),
            vec![1, 1, 1]
        );
        assert_eq!(
            find_irreducible(3, 2, DEFAULT_IRREDUCIBLE_BUDGET).unwrap(),
            vec![1, 0, 1]
        );
        assert!(find_irreducible(5, 1, DEFAULT_IRREDUCIBLE_BUDGET).is_err());
        assert!(matches!(
            find_irreducible(2, 40, DEFAULT_IRREDUCIBLE_BUDGET),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn irreducible_has_no_roots() {
        for p in (2..100).filter(|&p| is_prime(p)) {
            for d in 2..=3 {
                let f = find_irreducible(p, d, DEFAULT_IRREDUCIBLE_BUDGET).unwrap();
                assert!(!upoly::has_root(&f, p), "p={p} d={d} f={f:?}");
            }
        }
    }

    #[test]
    fn irreducible_is_smallest_quadratic() {
        // brute force: a monic quadratic is irreducible iff it has no root
        for p in [2u64, 3, 5, 7, 11] {
            let expected = (0..p * p)
                .map(|i| vec![i % p, i / p, 1])
                .find(|f| !upoly::has_root(f, p))
                .unwrap();
            assert_eq!(
                find_irreducible(p, 2, DEFAULT_IRREDUCIBLE_BUDGET).unwrap(),
                expected
            );
        }
    }

    #[test]
    fn point_enumeration() {
        let q = Field::rational();
        let pts: Vec<String> = enumerate_points(&q, 4)
            .unwrap()
            .iter()
            .map(|e| q.format(e))
            .collect();
        assert_eq!(pts, ["0", "1", "2", "3"]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(
            enumerate_points(&f3, 3).unwrap(),
            vec![Elem::Mod(0), Elem::Mod(1), Elem::Mod(2)]
        );
        assert!(enumerate_points(&f3, 4).is_err());
        let f9 = ext(3, 2);
        let pts = enumerate_points(&f9, 9).unwrap();
        assert_eq!(pts[4], Elem::Ext(vec![1, 1].into_boxed_slice()));
        assert!(enumerate_points(&f9, 10).is_err());
    }

    #[test]
    fn enumeration_prefix_stable() {
        for f in [Field::rational(), Field::prime(7).unwrap(), ext(2, 3)] {
            for m in 0..6 {
                let a = enumerate_points(&f, m).unwrap();
                let b = enumerate_points(&f, m + 1).unwrap();
                assert_eq!(a[..], b[..m]);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let q = Field::rational();
        let a = q.parse("-3/4").unwrap();
        assert_eq!(q.to_json(&a), serde_json::json!("-3/4"));
        assert_eq!(q.from_json(&q.to_json(&a)).unwrap(), a);
        let f = ext(5, 2);
        let b = Elem::Ext(vec![3, 4].into_boxed_slice());
        assert_eq!(f.from_json(&f.to_json(&b)).unwrap(), b);
        let cfg: FieldConfig =
            serde_json::from_str(r#"{"kind":"extension","p":3,"deg":2,"modulus":[1,0,1]}"#)
                .unwrap();
        assert!(Field::new(cfg).is_ok());
        let cfg: FieldConfig = serde_json::from_str(r#"{"kind":"prime","p":7}"#).unwrap();
        assert_eq!(cfg, FieldConfig::Prime { p: 7 });
    }

    fn axioms(field: &Field, rng: &mut ChaCha8Rng, draw: impl Fn(&mut ChaCha8Rng) -> Elem) {
        for _ in 0..1000 {
            let (a, b, c) = (draw(rng), draw(rng), draw(rng));
            assert_eq!(field.sub(&field.add(&a, &b), &b), a);
            assert_eq!(
                field.mul(&a, &field.add(&b, &c)),
                field.add(&field.mul(&a, &b), &field.mul(&a, &c))
            );
            if !field.is_zero(&a) {
                assert!(field.is_one(&field.mul(&a, &field.inv(&a).unwrap())));
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = Field::rational();
        axioms(&q, &mut rng, |r| {
            let n: i64 = r.gen_range(-50..50);
            let d: i64 = r.gen_range(1..20);
            Field::rational().from_ratio(n, d).unwrap()
        });
        let p = Field::prime(2_147_483_647).unwrap();
        axioms(&p, &mut rng, |r| Elem::Mod(r.gen_range(0..2_147_483_647)));
        let e = ext(7, 3);
        axioms(&e, &mut rng, |r| e.sample(r, 343));
    }
}
