//! Runs the twelve acceptance checks and prints one PASS/FAIL line each.
//! Exits nonzero if any check fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use oabp::abp::{check_oblivious, check_order, evaluate, expand, stats};
use oabp::corpus::{self, Member, Origin};
use oabp::families::{
    build_ryser, build_separation, build_symm, deriv_matrix_rank, middle_partition, permanent_poly,
    read_lower_bound, symm_poly, verify_full_rank, verify_full_rank_with, Weights, FULLRANK_PRIME,
};
use oabp::generator::{build_f, degree_bounds, ell, step_degree_bounds};
use oabp::linalg::{rank, Matrix};
use oabp::normalize::{coefficient_rows, derivative_decomposition, obliviate};
use oabp::pit::{algorithm1, compose_test, compose_with_generator, HitsetOptions, Witness};
use oabp::{Exec, Field, Permutation, SparsePoly, DEFAULT_TERM_BUDGET as B};

const SEED: u64 = 20240611;
const PER_CELL: usize = 50;

type Outcome = Result<String, String>;
type Check = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q() -> Field {
    Field::rational()
}

fn standard() -> Vec<Member> {
    corpus::standard(&q(), PER_CELL, SEED).expect("corpus builds")
}

fn odd() -> Vec<Member> {
    corpus::odd(&q(), PER_CELL / 2, SEED).expect("corpus builds")
}

fn c1_closed_form() -> Outcome {
    let f = q();
    for r in 1..=3 {
        let map = ok(build_f(&f, 1, r, B))?;
        let l = ell(1, r);
        let n = l + 2;
        let var = |pos| SparsePoly::var(&f, n, pos);
        let (u, v) = (var(l), var(l + 1));
        let one = SparsePoly::one(&f, n);
        let first = ok(u.mul(&one.sub(&v), B))?.add(&var(0));
        let mut second = ok(u.mul(&v, B))?;
        for j in 0..=r {
            second.add_assign(&var(j));
        }
        let got: Vec<_> = map
            .outputs
            .iter()
            .map(|p| {
                p.sorted_terms()
                    .into_iter()
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let want: Vec<_> = [first, second]
            .iter()
            .map(|p| {
                p.sorted_terms()
                    .into_iter()
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        ensure!(got == want, "F^(1,{r}) differs from the closed form: {map}");
    }
    Ok("r = 1, 2, 3 match".into())
}

fn c2_generator_property() -> Outcome {
    let members = standard();
    ensure!(
        members.len() >= 200,
        "corpus has only {} members",
        members.len()
    );
    let (mut nonzero, mut zero) = (0, 0);
    for m in &members {
        let expected_zero = ok(expand(&m.abp, B))?.is_zero();
        if m.origin == Origin::Zero {
            ensure!(expected_zero, "{} should compute zero", m.name);
        }
        let v = ok(compose_test(&m.abp, m.r, B))?;
        ensure!(
            v.is_zero() == expected_zero,
            "{}: compose says {}",
            m.name,
            v.verdict
        );
        if expected_zero {
            zero += 1;
        } else {
            nonzero += 1;
        }
    }
    Ok(format!(
        "{} members, {nonzero} nonzero, {zero} zero",
        members.len()
    ))
}

fn c3_algorithm1() -> Outcome {
    let f = q();
    let cell = ok(corpus::random_cell(&f, 2, 1, PER_CELL, SEED))?;
    let (zeros, randoms): (Vec<_>, Vec<_>) =
        cell.into_iter().partition(|m| m.origin == Origin::Zero);
    let members: Vec<Member> = randoms
        .into_iter()
        .take(PER_CELL - zeros.len())
        .chain(zeros)
        .collect();
    ensure!(members.len() == 50, "corpus has {} members", members.len());
    let opts = HitsetOptions::default();
    let mut zero_count = 0;
    for m in &members {
        let reference = ok(compose_test(&m.abp, 1, B))?;
        let v = ok(algorithm1(&m.abp, 1, &m.pi, &opts))?;
        ensure!(v.grid_side == Some(3), "grid side {:?}", v.grid_side);
        ensure!(
            v.verdict == reference.verdict,
            "{}: grid {} vs compose {}",
            m.name,
            v.verdict,
            reference.verdict
        );
        match &v.witness {
            Some(Witness::Point { x, .. }) => {
                ensure!(
                    !f.is_zero(&evaluate(&m.abp, x)),
                    "{}: witness evaluates to zero",
                    m.name
                )
            }
            Some(_) => return Err("unexpected witness kind".into()),
            None => {
                ensure!(
                    v.queries == 243,
                    "{}: zero verdict after {} queries",
                    m.name,
                    v.queries
                );
                zero_count += 1;
            }
        }
    }
    Ok(format!(
        "50 members agree, {zero_count} zero after 243 queries"
    ))
}

fn c4_obliviation() -> Outcome {
    let mut members = standard();
    members.extend(odd());
    let mut worst = 0.0f64;
    for m in &members {
        let b = ok(obliviate(&m.abp, &m.pi))?;
        ensure!(
            ok(expand(&b, B))? == ok(expand(&m.abp, B))?,
            "{}: expansion changed",
            m.name
        );
        ensure!(
            stats(&b).reads == stats(&m.abp).reads,
            "{}: reads changed",
            m.name
        );
        let width = stats(&b).width;
        ensure!(
            width <= 2 * m.abp.size(),
            "{}: width {width} > 2*{}",
            m.name,
            m.abp.size()
        );
        ensure!(
            check_oblivious(&b).is_ok() && check_order(&b, &m.pi),
            "{}: not pi-oblivious",
            m.name
        );
        worst = worst.max(width as f64 / m.abp.size() as f64);
    }
    Ok(format!(
        "{} members, max width/size = {worst:.2}",
        members.len()
    ))
}

fn c5_decomposition() -> Outcome {
    let mut members = standard();
    members.extend(odd());
    let (mut checked, mut max_w) = (0, 0);
    for m in &members {
        let n = m.n();
        let i = m.pi.var_at(n.div_ceil(2));
        let d = ok(expand(&m.abp, B))?.derivative(i - 1);
        if d.is_zero() {
            continue;
        }
        let b = ok(obliviate(&m.abp, &m.pi))?;
        let dec = ok(derivative_decomposition(&b, i, B))?;
        ensure!(ok(dec.sum(B))? == d, "{}: sum identity fails", m.name);
        let rf = rank(&q(), Matrix::from_rows(coefficient_rows(&dec.fs)));
        let rg = rank(&q(), Matrix::from_rows(coefficient_rows(&dec.gs)));
        ensure!(
            rf == dec.w_prime && rg == dec.w_prime,
            "{}: ranks {rf}, {rg} vs w' = {}",
            m.name,
            dec.w_prime
        );
        ensure!(
            dec.w_prime <= m.r,
            "{}: w' = {} > r = {}",
            m.name,
            dec.w_prime,
            m.r
        );
        checked += 1;
        max_w = max_w.max(dec.w_prime);
    }
    ensure!(
        checked >= 100,
        "only {checked} members have a nonzero middle derivative"
    );
    Ok(format!("{checked} members, max w' = {max_w}"))
}

fn c6_degree_audit() -> Outcome {
    let f = q();
    let mut lines = Vec::new();
    for k in 0..=3 {
        for r in 1..=2 {
            let bound = degree_bounds(k, r).component;
            let degs: Vec<Vec<u32>> = if k == 3 && r == 2 {
                ok(step_degree_bounds(&f, k, r, B))?
            } else {
                ok(build_f(&f, k, r, B))?
                    .outputs
                    .iter()
                    .map(SparsePoly::degrees)
                    .collect()
            };
            let max = degs.iter().flatten().copied().max().unwrap_or(0);
            ensure!(
                num_bigint::BigUint::from(max) <= bound,
                "(k, r) = ({k}, {r}): degree {max} > {bound}"
            );
            lines.push(format!("({k},{r}):{max}<={bound}"));
        }
    }
    let x1x2 = ok(SparsePoly::var(&f, 2, 0).mul(&SparsePoly::var(&f, 2, 1), B))?;
    let composed = ok(compose_with_generator(
        &x1x2,
        1,
        &Permutation::identity(2),
        B,
    ))?;
    let z1 = composed.degree_in(0);
    ensure!(
        z1 == 2 && num_bigint::BigUint::from(z1) > degree_bounds(1, 1).component,
        "x1*x2 z1-degree {z1}"
    );
    Ok(format!(
        "{}; x1*x2 composed has z1-degree 2 > D = 1",
        lines.join(" ")
    ))
}

fn c7_symm_upper() -> Outcome {
    let f = q();
    let mut c: f64 = 0.0;
    for n in 1..=8 {
        for k in 1..=n.min(4) {
            let a = ok(build_symm(&f, n, k))?;
            ensure!(
                ok(expand(&a, B))? == symm_poly(&f, n, k),
                "S_{n}^{k} expands wrongly"
            );
            ensure!(
                check_order(&a, &Permutation::identity(n)),
                "S_{n}^{k} not ordered"
            );
            ensure!(check_oblivious(&a).is_ok(), "S_{n}^{k} not oblivious");
            ensure!(stats(&a).read <= k, "S_{n}^{k} read {}", stats(&a).read);
            // (n + 1)(k + 1) <= 4kn nodes for k, n >= 1
            ensure!(a.size() <= 4 * k * n, "S_{n}^{k} size {}", a.size());
            c = c.max(a.size() as f64 / (k * n) as f64);
        }
    }
    Ok(format!(
        "n <= 8, k <= 4; size <= c*k*n with measured c = {c:.2}"
    ))
}

fn c8_symm_lower() -> Outcome {
    let f = q();
    for k in 2..=4 {
        let m = 2 * k - 1;
        let pi = Permutation::identity(m);
        let part = ok(middle_partition(&pi, m))?;
        let d = symm_poly(&f, m, k).derivative(k - 1);
        let (dm, r) = ok(deriv_matrix_rank(&d, &part))?;
        ensure!(r == k, "k = {k}: rank {r}");
        // rows {y_1..y_a}, columns {z_1..z_b}: 1 exactly when a + b = k - 1
        let idx: Vec<usize> = (0..k).map(|a| (1usize << a) - 1).collect();
        let minor = dm.matrix.minor(&idx, &idx);
        for a in 0..k {
            for b in 0..k {
                let want = if a + b == k - 1 { f.one() } else { f.zero() };
                ensure!(*minor.get(a, b) == want, "k = {k}: minor entry ({a}, {b})");
            }
        }
        ensure!(minor.rank(&f) == k, "k = {k}: minor singular");
    }
    Ok("ranks 2, 3, 4; anti-diagonal permutation minors".into())
}

fn c9_separation() -> Outcome {
    let f = q();
    let mut got = Vec::new();
    for n in 1..=3 {
        let t = ok(build_separation(&f, n))?;
        ensure!(
            stats(&t.abp).read == 1,
            "n = {n}: read {}",
            stats(&t.abp).read
        );
        ensure!(check_order(&t.abp, &t.pi), "n = {n}: not ordered");
        ensure!(
            ok(expand(&t.abp, B))? == t.poly,
            "n = {n}: expansion differs"
        );
        let lb = ok(read_lower_bound(&t.poly, &t.pi_prime))?;
        ensure!(lb == 1 << n, "n = {n}: bound {lb}");
        got.push(lb.to_string());
    }
    Ok(format!("read-once; bounds under pi' = {}", got.join(", ")))
}

fn c10_ryser() -> Outcome {
    let f = q();
    let mut report = Vec::new();
    for n in 1..=4 {
        let a = ok(build_ryser(&f, n))?;
        ensure!(
            ok(expand(&a, B))? == permanent_poly(&f, n),
            "n = {n}: expansion differs"
        );
        let ones = vec![f.one(); n * n];
        let fact: i64 = (1..=n as i64).product();
        ensure!(
            evaluate(&a, &ones) == f.from_i64(fact),
            "n = {n}: all-ones value"
        );
        let s = stats(&a);
        report.push(format!(
            "n={n}: size {} ({:.2} n^2 2^n), read {} (2^n = {})",
            s.size,
            s.size as f64 / (n * n * (1 << n)) as f64,
            s.read,
            1 << n
        ));
    }
    Ok(report.join("; "))
}

fn c11_full_rank() -> Outcome {
    let mut out = Vec::new();
    for n in 1..=3 {
        let rep = ok(verify_full_rank(n, SEED, 4, Exec::default()))?;
        ensure!(rep.ok, "n = {n}: deficiencies {:?}", rep.deficient);
        ensure!(
            rep.expected_rank == 1 << n,
            "n = {n}: expected rank {}",
            rep.expected_rank
        );
        out.push(format!(
            "n={n}: {} checks in {} attempt(s)",
            rep.checks, rep.attempts
        ));
    }
    let f = ok(Field::prime(FULLRANK_PRIME))?;
    let weights = |a: usize| {
        let mut w = Weights::seeded(&f, 3, SEED + a as u64);
        if a == 0 {
            w.set(1, 1, 3, f.from_i64(2));
            w.set(1, 2, 3, f.from_i64(-3));
        }
        w
    };
    let rep = ok(verify_full_rank_with(1, 3, Exec::default(), B, weights))?;
    ensure!(
        rep.ok && rep.attempts == 2 && rep.deficient.len() == 1,
        "retry not exercised: {rep:?}"
    );
    out.push("adversarial weights rejected then retried".into());
    Ok(out.join("; "))
}

fn c12_read_sweep() -> Outcome {
    let members = odd();
    let mut tight = 0;
    for m in &members {
        let p = ok(expand(&m.abp, B))?;
        let lb = ok(read_lower_bound(&p, &m.pi))?;
        let read = stats(&m.abp).read;
        ensure!(read >= lb, "{}: read {read} < bound {lb}", m.name);
        if read == lb {
            tight += 1;
        }
    }
    Ok(format!(
        "{} odd-variable members, {tight} tight",
        members.len()
    ))
}

fn main() {
    let checks: [Check; 12] = [
        ("closed-form F^(1,r)", 1, c1_closed_form),
        (
            "generator property over the corpus",
            300,
            c2_generator_property,
        ),
        ("grid test at k = 1", 10, c3_algorithm1),
        ("obliviation", 60, c4_obliviation),
        ("decomposition", 60, c5_decomposition),
        ("generator degree audit", 60, c6_degree_audit),
        ("symmetric programs", 30, c7_symm_upper),
        ("symmetric rank bound", 30, c8_symm_lower),
        ("order-sensitive separation", 30, c9_separation),
        ("Ryser programs", 30, c10_ryser),
        ("full-rank family", 120, c11_full_rank),
        ("read lower-bound sweep", 60, c12_read_sweep),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {took:.2?}, limit {limit}s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{took:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{took:.2?}]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
