//! Acceptance suite. Each criterion prints one PASS or FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pfilt_core::characters::{greedy_decompose, weyl_character, weyl_dimension, TieBreak};
use pfilt_core::pfilt::FiltrationReport;
use pfilt_core::rootdata::{RootSystem, Weight};
use pfilt_core::Engine;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn engine(t: &str, p: u32) -> Engine {
    Engine::new(t.parse().unwrap(), p).unwrap()
}

/// Closed-form sl₂ model: characters are maps from integer weights to multiplicities.
mod sl2 {
    use std::collections::BTreeMap;

    pub type Char = BTreeMap<i64, i64>;

    /// Weights n, n−2, …, −n.
    pub fn string(n: i64) -> Char {
        (0..=n).map(|k| (n - 2 * k, 1)).collect()
    }

    pub fn product(a: &Char, b: &Char) -> Char {
        let mut out = Char::new();
        for (x, m) in a {
            for (y, k) in b {
                *out.entry(x + y).or_insert(0) += m * k;
            }
        }
        out.retain(|_, m| *m != 0);
        out
    }

    pub fn twist(a: &Char, p: i64) -> Char {
        a.iter().map(|(w, m)| (w * p, *m)).collect()
    }

    /// L(n) = ⊗ᵢ L(aᵢ)^[i] over the base-p digits of n, with L(a) = string(a).
    pub fn irreducible(n: i64, p: i64) -> Char {
        let mut out = Char::from([(0, 1)]);
        let (mut m, mut scale) = (n, 1);
        while m > 0 {
            out = product(&out, &twist(&string(m % p), scale));
            m /= p;
            scale *= p;
        }
        out
    }

    /// L(n mod p) · string(n div p)^[1].
    pub fn delta_red(n: i64, p: i64) -> Char {
        product(&string(n % p), &twist(&string(n / p), p))
    }

    /// Repeatedly subtract the basis element at the highest remaining weight.
    pub fn decompose(n: i64, p: i64) -> Vec<(i64, i64)> {
        let mut residual = string(n);
        let mut out = Vec::new();
        while let Some((&top, &m)) = residual.iter().next_back() {
            for (w, k) in delta_red(top, p) {
                *residual.entry(w).or_insert(0) -= m * k;
            }
            residual.retain(|_, c| *c != 0);
            out.push((top, m));
        }
        out
    }
}

fn criterion_1(reports: &mut Vec<FiltrationReport>) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for p in [3u32, 5] {
        let e = engine("A1", p);
        let mut mine = Vec::new();
        for n in 0..=30i64 {
            let r = e.decompose_weyl(&Weight::new(vec![n])).map_err(|err| err.to_string())?;
            let got: Vec<(i64, i64)> = r.sections.iter().map(|s| (s.weight.coords()[0], s.multiplicity)).collect();
            let want = sl2::decompose(n, p as i64);
            ensure(got == want, || format!("p={p} λ={n}: engine {got:?}, oracle {want:?}"))?;
            // the oracle's irreducibles also agree with the engine's
            let l: BTreeMap<i64, i64> =
                e.ch_irreducible(&Weight::new(vec![n])).unwrap().terms().map(|(w, m)| (w.coords()[0], *m)).collect();
            ensure(l == sl2::irreducible(n, p as i64), || format!("p={p}: ch L({n}) differs from the digit formula"))?;
            mine.push(r);
            count += 1;
        }
        reports.extend(mine);
    }
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("{count} weights match the sl2 oracle in {t:.2?}"))
}

fn criterion_2(reports: &mut Vec<FiltrationReport>) -> Outcome {
    let start = Instant::now();
    let e = engine("A2", 5);
    let s = e.batch_verify(20);
    let t = within(start, Duration::from_secs(60))?;
    ensure(s.failures.is_empty(), || format!("errors: {:?}", s.failures))?;
    ensure(s.total > 0 && s.total == s.reports.len(), || "empty batch".into())?;
    for r in &s.reports {
        ensure(r.nonnegative, || format!("λ={} has a negative section: {:?}", r.lambda, r.sections))?;
        ensure(r.residual_zero, || format!("λ={} leaves a residual", r.lambda))?;
    }
    let n = s.total;
    reports.extend(s.reports);
    Ok(format!("{n} weights, all non-negative with zero residual, in {t:.2?}"))
}

fn criterion_3(reports: &[FiltrationReport]) -> Outcome {
    ensure(!reports.is_empty(), || "no reports from criteria 1-2".into())?;
    let mut engines: BTreeMap<(String, u32), Engine> = BTreeMap::new();
    for r in reports {
        let e = engines
            .entry((r.cartan_type.to_string(), r.p))
            .or_insert_with(|| Engine::new(r.cartan_type, r.p).unwrap());
        let ok = e.verify_dimension_identity(r).map_err(|err| err.to_string())?;
        ensure(ok && r.dimension_identity, || format!("{} p={} λ={}", r.cartan_type, r.p, r.lambda))?;
    }
    Ok(format!("{} reports", reports.len()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let e = engine("A1", 3);
    let kl = e.kl_table();
    let g = kl.group();
    let mut pairs = 0;
    for x in g.elements_up_to_length(12).map_err(|err| err.to_string())? {
        for y in g.lower_interval(&x).map_err(|err| err.to_string())?.iter() {
            let p = kl.kl_polynomial(y, &x).map_err(|err| err.to_string())?;
            ensure(p.coeffs() == [1], || format!("affine A1: P = {p} for ℓ(x) = {}", g.length(&x)))?;
            pairs += 1;
        }
    }
    let e = engine("A2", 3);
    let kl = e.kl_table();
    let g = kl.group();
    let mut a2_pairs = 0;
    let mut nontrivial = 0;
    for x in g.elements_up_to_length(8).map_err(|err| err.to_string())? {
        let lx = g.length(&x);
        let descents = g.left_descents(&x);
        for y in g.lower_interval(&x).map_err(|err| err.to_string())?.iter() {
            let ly = g.length(y);
            let p = kl.kl_polynomial(y, &x).map_err(|err| err.to_string())?;
            ensure(p.coeff(0) == 1, || format!("affine A2: P = {p} has constant term ≠ 1"))?;
            let d = p.degree().unwrap_or(0);
            ensure(y == &x || 2 * d < lx - ly, || format!("affine A2: deg P = {d} with ℓ(x)−ℓ(y) = {}", lx - ly))?;
            for &s in &descents {
                let q = kl.kl_polynomial_with_descent(y, &x, s).map_err(|err| err.to_string())?;
                ensure(p == q, || format!("affine A2: descent {s} gives {q}, default gives {p}"))?;
            }
            nontrivial += usize::from(p.coeffs() != [1]);
            a2_pairs += 1;
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{pairs} affine A1 pairs, {a2_pairs} affine A2 pairs ({nontrivial} non-trivial) in {t:.2?}"))
}

/// Orbit closure under simple reflections, applied directly to each weight.
fn invariant_under_simple_reflections(rs: &RootSystem, ch: &BTreeMap<Vec<i64>, i64>) -> bool {
    let a = rs.cartan_matrix();
    ch.iter().all(|(mu, m)| {
        (0..rs.rank()).all(|i| {
            let r: Vec<i64> = (0..rs.rank()).map(|j| mu[j] - mu[i] * a.get(i, j)).collect();
            ch.get(&r) == Some(m)
        })
    })
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for t in ["A1", "A2", "B2", "G2"] {
        let rs = RootSystem::new(t.parse().unwrap());
        for lambda in rs.dominant_weights_up_to_level(30) {
            let ch = weyl_character(&rs, &lambda).map_err(|e| e.to_string())?;
            let dim = weyl_dimension(&rs, &lambda).map_err(|e| e.to_string())?;
            ensure(ch.mass() as u128 == dim, || format!("{t} λ={lambda}: mass {} ≠ dim {dim}", ch.mass()))?;
            let map: BTreeMap<Vec<i64>, i64> = ch.terms().map(|(w, m)| (w.coords().to_vec(), *m)).collect();
            ensure(invariant_under_simple_reflections(&rs, &map), || format!("{t} λ={lambda}: not W-invariant"))?;
            count += 1;
        }
    }
    Ok(format!("{count} characters across A1, A2, B2, G2"))
}

fn restricted_weights(rank: usize, p: u32) -> Vec<Weight> {
    let mut out = vec![Weight::new(vec![])];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|w| (0..p as i64).map(move |c| Weight::new([w.coords(), &[c]].concat())))
            .collect();
    }
    out
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for (t, p, expect) in [("A1", 3u32, 27i128), ("A1", 5, 125), ("A2", 5, 5i128.pow(8))] {
        let e = engine(t, p);
        let rank = e.root_system().rank();
        let mut total = 0i128;
        for l in restricted_weights(rank, p) {
            let d = e.ch_irreducible(&l).map_err(|err| err.to_string())?.mass();
            total += d * e.q1_hat_char(&l).map_err(|err| err.to_string())?.mass();
        }
        ensure(total == expect, || format!("{t} p={p}: {total} ≠ {expect}"))?;
        lines.push(format!("{t} p={p}: {total}"));
    }
    Ok(lines.join(", "))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for (t, p) in [("A1", 3u32), ("A1", 5), ("A2", 5)] {
        let e = engine(t, p);
        for mu in restricted_weights(e.root_system().rank(), p) {
            let ok = e.check_socle_bound(&mu).map_err(|err| err.to_string())?;
            ensure(ok, || format!("{t} p={p} μ={mu}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} restricted weights"))
}

fn criterion_8() -> Outcome {
    let e = engine("A2", 5);
    let rs = e.root_system().clone();
    let weights = rs.dominant_weights_up_to_level(20);
    for lambda in &weights {
        let chi = weyl_character(&rs, lambda).map_err(|err| err.to_string())?;
        let parts = greedy_decompose(&rs, &chi, TieBreak::default(), |mu| e.ch_irreducible(mu))
            .map_err(|err| err.to_string())?;
        let mut sum = 0i128;
        for (mu, m) in &parts {
            ensure(*m > 0, || format!("λ={lambda}: [Δ:L({mu})] = {m}"))?;
            sum += *m as i128 * e.ch_irreducible(mu).unwrap().mass();
        }
        let dim = weyl_dimension(&rs, lambda).unwrap() as i128;
        ensure(sum == dim, || format!("λ={lambda}: Σ [Δ:L]·dim L = {sum} ≠ {dim}"))?;
    }
    Ok(format!("{} weights", weights.len()))
}

fn report(n: usize, name: &str, outcome: std::thread::Result<Outcome>) -> bool {
    let outcome = outcome.unwrap_or_else(|e| {
        Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS criterion {n} ({name}): {detail}");
            true
        }
        Err(why) => {
            println!("FAIL criterion {n} ({name}): {why}");
            false
        }
    }
}

fn main() {
    let mut reports = Vec::new();
    let mut ok = true;
    ok &= report(1, "sl2 oracle equivalence", catch_unwind(AssertUnwindSafe(|| criterion_1(&mut reports))));
    ok &= report(2, "non-negativity", catch_unwind(AssertUnwindSafe(|| criterion_2(&mut reports))));
    ok &= report(3, "dimension identity", catch_unwind(AssertUnwindSafe(|| criterion_3(&reports))));
    ok &= report(4, "KL sanity", catch_unwind(criterion_4));
    ok &= report(5, "character engine exactness", catch_unwind(criterion_5));
    ok &= report(6, "reciprocity mass identity", catch_unwind(criterion_6));
    ok &= report(7, "socle-bound shadow", catch_unwind(criterion_7));
    ok &= report(8, "decomposition-number consistency", catch_unwind(criterion_8));
    if !ok {
        std::process::exit(1);
    }
}
