//! Acceptance run: one PASS/FAIL line per criterion. Expected values come
//! from test-side oracles (integer arithmetic, brute force, explicit
//! formulas), never from the library under test.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use samuel_core::equivalence::{make_irredundant, projectively_equivalent, recover_valuations, Equivalence, PairsOracle};
use samuel_core::filtration::mono;
use samuel_core::multiplicity::{multiplicity_estimate, multiplicity_exact, normalized_colength, saturation_check};
use samuel_core::props::{run_suite, DEFAULT_CASES, DEFAULT_SEED, SUITES};
use samuel_core::samuel::{
    ic_filtration, k_filtration, k_level, nubar, nubar_estimate, rees_graded_integral_1var, NubarKind,
};
use samuel_core::{ExactReal, Extended, Filtration, MonomialIdeal, MonomialValuation, Order, SupportPoly};

type Check = Result<String, String>;

fn q(s: &str) -> ExactReal {
    s.parse().unwrap()
}

fn rat(p: i64, r: i64) -> BigRational {
    BigRational::new(p.into(), r.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
    MonomialIdeal::new(n, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
}

fn x_pow(k: u64) -> MonomialIdeal {
    ideal(1, &[&[k]])
}

/// `⌈√d·m⌉` by integer squaring.
fn ceil_sqrt_times(d: u64, m: u64) -> u64 {
    let t = d * m * m;
    let mut k = (t as f64).sqrt() as u64;
    while k * k < t {
        k += 1;
    }
    while k > 0 && (k - 1) * (k - 1) >= t {
        k -= 1;
    }
    k
}

/// Stair orders: `ν(x^K) = K - c` when `K > c`, else 0.
fn criterion1() -> Check {
    let mut count = 0;
    for c in 1..=3u64 {
        let f = ok(Filtration::stair_one_var(q("1"), c))?;
        for c0 in 1..=3u64 {
            for n in 1..=40u64 {
                let k = n * c0;
                let expected = if k > c { k - c } else { 0 };
                let got = ok(f.order(&mono(&[k])))?;
                ensure(got == Order::Finite(expected), || format!("c={c} c0={c0} n={n}: order {got}, expected {expected}"))?;
                count += 1;
            }
            let nb = ok(nubar(&f, &mono(&[c0])))?;
            ensure(nb.kind == NubarKind::Exact && nb.value == Extended::Finite(ExactReal::from(c0)), || {
                format!("c={c}: nubar(x^{c0}) = {nb}, expected {c0}")
            })?;
        }
    }
    Ok(format!("{count} orders and 9 nubar values exact"))
}

fn criterion2() -> Check {
    // (i) with c = 0 the family is closed: integral iff already a member
    let alphas: [(&str, Box<dyn Fn(u64) -> u64>); 3] = [
        ("1", Box::new(|n| n)),
        ("3/2", Box::new(|n: u64| (3 * n).div_ceil(2))),
        ("(0+1*sqrt(2))/1", Box::new(|n| ceil_sqrt_times(2, n))),
    ];
    let mut count = 0;
    for (a, ceil) in &alphas {
        for n in 1..=30 {
            let b = ceil(n);
            for f in 0..=2 * b + 3 {
                let r = ok(rees_graded_integral_1var(&q(a), 0, f, n))?;
                ensure(r.integral == (f >= b), || format!("(i) alpha={a} n={n} f={f}: integral={}", r.integral))?;
                count += 1;
            }
        }
    }
    // (ii) every graded piece of J is integral over I at α = √2
    let s2 = q("(0+1*sqrt(2))/1");
    for c in 1..=3 {
        for n in 1..=30 {
            for f in ceil_sqrt_times(2, n)..ceil_sqrt_times(2, n) + 6 {
                let r = ok(rees_graded_integral_1var(&s2, c, f, n))?;
                let d = r.witness_d.unwrap_or(0);
                ensure(r.integral && d >= 1 && d * f >= ceil_sqrt_times(2, n * d) + c, || {
                    format!("(ii) c={c} n={n} f={f}: {r:?}")
                })?;
                count += 1;
            }
        }
    }
    // (iii) x^p t^q lies in R[J] but is not integral over R[I] at α = p/q
    for (p, r) in [(1u64, 1u64), (1, 2), (2, 3)] {
        let alpha = ok(ExactReal::ratio(p, r))?;
        let in_j = ok(rees_graded_integral_1var(&alpha, 0, p, r))?.integral;
        let over_i = ok(rees_graded_integral_1var(&alpha, 1, p, r))?.integral;
        ensure(in_j && !over_i, || format!("(iii) alpha={p}/{r}: in J {in_j}, integral over I {over_i}"))?;
        count += 1;
    }
    Ok(format!("{count} integrality decisions"))
}

fn criterion3() -> Check {
    let f = ok(Filtration::stair_one_var(q("1"), 1))?;
    let k = ok(k_filtration(&f, 10))?;
    for m in 1..=10 {
        let got = ok(k.level(m))?;
        ensure(got == x_pow(m), || format!("K level {m} = {got}"))?;
    }
    let ic = ok(ic_filtration(&f, 1, 12))?;
    let j1 = ok(ic.table.level(1))?;
    let k1 = ok(k.level(1))?;
    ensure(j1 == x_pow(2), || format!("IC level 1 = {j1}"))?;
    ensure(j1.is_subset(&k1) && j1 != k1, || format!("IC level 1 = {j1} not strictly inside K level 1 = {k1}"))?;
    Ok(format!("K = (x^m) for m <= 10; IC_1 = {j1} strictly inside K_1 = {k1}"))
}

/// A random rational in `[1, 3]`.
fn rand_a(rng: &mut ChaCha8Rng) -> (u64, u64) {
    let r = rng.gen_range(1..=3u64);
    (rng.gen_range(r..=3 * r), r)
}

fn criterion4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let s = rng.gen_range(1..=3);
        let raw: Vec<(Vec<u64>, (u64, u64))> =
            (0..s).map(|_| ((0..n).map(|_| rng.gen_range(1..=5)).collect(), rand_a(&mut rng))).collect();
        let f = ok(Filtration::discrete_valued(
            raw.iter().map(|(w, (p, r))| (MonomialValuation::new(w.clone()).unwrap(), ExactReal::ratio(*p, *r).unwrap())).collect(),
        ))?;
        let max_a = raw.iter().map(|(_, (p, r))| rat(*p as i64, *r as i64)).max().unwrap();
        for _ in 0..5 {
            let e: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
            let dot = |w: &[u64]| w.iter().zip(&e).map(|(a, b)| a * b).sum::<u64>();
            // brute force: largest m with w·e >= m·a for every pair
            let mut m = 0u64;
            while raw.iter().all(|(w, (p, r))| dot(w) * r >= (m + 1) * p) {
                m += 1;
            }
            let got = ok(f.monomial_order(&e))?;
            ensure(got == Order::Finite(m), || format!("{f} at {e:?}: order {got}, brute force {m}"))?;
            let exact = raw.iter().map(|(w, (p, r))| rat((dot(w) * r) as i64, *p as i64)).min().unwrap();
            let nb = ok(nubar(&f, &mono(&e)))?;
            ensure(nb.value == Extended::Finite(ExactReal::from_rational(exact.clone())), || {
                format!("{f} at {e:?}: nubar {nb}, expected {exact}")
            })?;
            let est = ok(nubar_estimate(&f, &mono(&e), 40))?;
            let Extended::Finite(v) = &est.value else { return Err("estimate is infinite".into()) };
            let v = v.as_rational().unwrap().clone();
            let gap = &exact - &v;
            ensure(gap >= rat(0, 1) && gap <= &max_a / BigInt::from(40), || {
                format!("{f} at {e:?}: estimate {v}, exact {exact}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} monomials over 50 filtrations"))
}

fn rand_rational_filtration(rng: &mut ChaCha8Rng) -> Filtration {
    let n = rng.gen_range(1..=3);
    match rng.gen_range(0..3) {
        0 => {
            let pairs = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let w = (0..n).map(|_| rng.gen_range(1..=5)).collect();
                    (MonomialValuation::new(w).unwrap(), ExactReal::ratio(rng.gen_range(1..=6), rng.gen_range(1..=3)).unwrap())
                })
                .collect();
            Filtration::discrete_valued(pairs).unwrap()
        }
        1 => {
            let gens = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let mut e: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                    e[rng.gen_range(0..n)] += 1;
                    e
                })
                .collect();
            Filtration::adic(MonomialIdeal::new(n, gens).unwrap())
        }
        _ => Filtration::stair_one_var(ExactReal::ratio(rng.gen_range(1..=5), rng.gen_range(1..=3)).unwrap(), rng.gen_range(0..=3))
            .unwrap(),
    }
}

fn criterion5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphas = ["2/3", "5", "(0+1*sqrt(2))/1", "(1+1*sqrt(5))/2"];
    let mut count = 0;
    for _ in 0..50 {
        let f = rand_rational_filtration(&mut rng);
        let n = f.n();
        let poly = SupportPoly::new(n, (0..rng.gen_range(1..=3)).map(|_| (0..n).map(|_| rng.gen_range(0..=5)).collect())).unwrap();
        let base = ok(nubar(&f, &poly))?.value;
        for a in alphas {
            let alpha = q(a);
            let twisted = ok(nubar(&ok(f.twist(alpha.clone()))?, &poly))?.value;
            let scaled = ok(twisted.mul_real(&alpha))?;
            ensure(scaled == base, || format!("{f}, alpha {a}: nubar {base}, alpha·nubar(twist) {scaled}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} exact twist identities"))
}

fn criterion6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    const M: u64 = 5;
    for _ in 0..20 {
        let n = rng.gen_range(1..=2);
        let pairs: Vec<_> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let w = (0..n).map(|_| rng.gen_range(1..=4)).collect();
                (MonomialValuation::new(w).unwrap(), ExactReal::ratio(rng.gen_range(1..=4), rng.gen_range(1..=2)).unwrap())
            })
            .collect();
        let f = ok(Filtration::discrete_valued(pairs))?;
        let k = ok(k_filtration(&f, M))?;
        for m in 1..=M {
            ensure(ok(k.level(m))? == ok(f.level(m))?, || format!("{f}: K level {m} differs from the filtration"))?;
        }
        for a in ["2/3", "5/2", "(0+1*sqrt(2))/1"] {
            let alpha = q(a);
            let kt = ok(k_filtration(&ok(f.twist(alpha.clone()))?, M))?;
            let br = ok(f.bracket_twist(&alpha))?;
            for m in 1..=M {
                ensure(ok(kt.level(m))? == ok(br.level(m))?, || format!("{f}, alpha {a}: K of twist differs at {m}"))?;
            }
        }
    }
    let stair = ok(Filtration::stair_one_var(q("1"), 1))?;
    let i1 = ok(stair.level(1))?;
    let j1 = ok(ok(ic_filtration(&stair, 1, 12))?.table.level(1))?;
    let k1 = ok(k_level(&stair, 1))?;
    let strict = |a: &MonomialIdeal, b: &MonomialIdeal| a.is_subset(b) && a != b;
    ensure(strict(&j1, &k1), || format!("StairOneVar(1,1): IC_1 = {j1}, K_1 = {k1}"))?;
    // with c = 2 both inclusions are strict; reported alongside the c = 1 outcome
    let stair2 = ok(Filtration::stair_one_var(q("1"), 2))?;
    let (i2, j2, k2) =
        (ok(stair2.level(1))?, ok(ok(ic_filtration(&stair2, 1, 12))?.table.level(1))?, ok(k_level(&stair2, 1))?);
    ensure(strict(&i2, &j2) && strict(&j2, &k2), || format!("StairOneVar(1,2): {i2}, {j2}, {k2}"))?;
    ensure(strict(&i1, &j1), || {
        format!(
            "StairOneVar(1,1) level 1: I_1 = {i1} equals IC_1 = {j1}, so I ⊊ IC fails (IC ⊊ K holds: {j1} ⊊ {k1}; \
             with c = 2 both are strict: {i2} ⊊ {j2} ⊊ {k2})"
        )
    })?;
    Ok("K = F on 20 families, K(twist) = bracket twist for 3 alphas, strict chain at level 1".into())
}

/// `(w, a)` reduced to a primitive weight.
fn canonical(w: &[u64], a: &ExactReal) -> (Vec<u64>, ExactReal) {
    let g = w.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    (w.iter().map(|x| x / g).collect(), a.div_int(g).unwrap())
}

/// Families whose every pair has a strict witness on a grid, which proves
/// irredundancy without the library's own test.
fn hidden_family(rng: &mut ChaCha8Rng, max_w: u64) -> Vec<(Vec<u64>, ExactReal)> {
    loop {
        let n = rng.gen_range(1..=3);
        let s = rng.gen_range(1..=3);
        let mut pairs: Vec<(Vec<u64>, ExactReal)> = (0..s)
            .map(|_| {
                let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_w)).collect();
                canonical(&w, &ExactReal::ratio(rng.gen_range(1..=6), rng.gen_range(1..=3)).unwrap())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs.dedup_by(|a, b| a.0 == b.0);
        let grid = samuel_core::filtration::exponents_up_to_degree(n, 12);
        let ratio = |(w, a): &(Vec<u64>, ExactReal), e: &[u64]| {
            ExactReal::from(w.iter().zip(e).map(|(x, y)| x * y).sum::<u64>()).checked_div(a).unwrap()
        };
        let witnessed = (0..pairs.len()).all(|i| {
            grid.iter().any(|e| (0..pairs.len()).all(|j| j == i || ratio(&pairs[i], e) < ratio(&pairs[j], e)))
        });
        if witnessed {
            pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));
            return pairs;
        }
    }
}

/// Shuffled, rescaled and padded with redundant pairs (mediants and weakened copies).
fn presentation(rng: &mut ChaCha8Rng, hidden: &[(Vec<u64>, ExactReal)]) -> Vec<(MonomialValuation, ExactReal)> {
    let mut out: Vec<(Vec<u64>, ExactReal)> = Vec::new();
    for (w, a) in hidden {
        let k = rng.gen_range(1..=3u64);
        out.push((w.iter().map(|x| x * k).collect(), a.mul_int(k)));
        if rng.gen_bool(0.5) {
            out.push((w.clone(), a.mul_rational(&rat(1, 2))));
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (i, j) = (rng.gen_range(0..hidden.len()), rng.gen_range(0..hidden.len()));
        let w = hidden[i].0.iter().zip(&hidden[j].0).map(|(x, y)| x + y).collect();
        out.push((w, hidden[i].1.checked_add(&hidden[j].1).unwrap()));
    }
    out.shuffle(rng);
    out.into_iter().map(|(w, a)| (MonomialValuation::new(w).unwrap(), a)).collect()
}

fn as_plain(rep: &[(MonomialValuation, ExactReal)]) -> Vec<(Vec<u64>, ExactReal)> {
    rep.iter().map(|(v, a)| (v.weights().to_vec(), a.clone())).collect()
}

fn criterion7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for _ in 0..20 {
        let hidden = hidden_family(&mut rng, 5);
        for _ in 0..5 {
            let p = presentation(&mut rng, &hidden);
            let rep = ok(make_irredundant(p.clone()))?;
            ensure(as_plain(rep.pairs()) == hidden, || format!("presentation {p:?} gave {rep}, hidden {hidden:?}"))?;
            count += 1;
        }
        let f = ok(Filtration::discrete_valued(
            hidden.iter().map(|(w, a)| (MonomialValuation::new(w.clone()).unwrap(), a.clone())).collect(),
        ))?;
        for a in ["2", "3/2", "(0+1*sqrt(2))/1"] {
            let g = ok(f.bracket_twist(&q(a)))?;
            let eq = ok(projectively_equivalent(&f, &g))?;
            ensure(eq == Equivalence::Equivalent { alpha: q(a) }, || format!("{f} vs bracket twist by {a}: {eq}"))?;
        }
    }
    Ok(format!("{count} presentations canonicalized; 60 equivalence ratios exact"))
}

fn criterion8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut padded = 0;
    for _ in 0..20 {
        let hidden = hidden_family(&mut rng, 4);
        let p = presentation(&mut rng, &hidden);
        if p.len() > hidden.len() {
            padded += 1;
        }
        let oracle = ok(PairsOracle::new(p.clone()))?;
        let rep = ok(recover_valuations(&oracle, 12))?;
        ensure(as_plain(rep.pairs()) == hidden, || format!("oracle {p:?} recovered {rep}, hidden {hidden:?}"))?;
    }
    Ok(format!("20 families recovered ({padded} with redundant components)"))
}

fn criterion9() -> Check {
    let dv = |ps: &[(&[u64], &str)]| {
        Filtration::discrete_valued(ps.iter().map(|(w, a)| (MonomialValuation::new(w.to_vec()).unwrap(), q(a))).collect())
            .unwrap()
    };
    // union of {w·x < a} regions, times 2!
    let cases = [
        (dv(&[(&[1, 1], "1")]), rat(1, 1)),
        (dv(&[(&[1, 2], "1")]), rat(1, 2)),
        (dv(&[(&[1, 2], "1"), (&[2, 1], "1")]), rat(2, 3)),
    ];
    let mut notes = Vec::new();
    for (f, e) in &cases {
        let exact = ok(multiplicity_exact(f))?;
        ensure(exact == ExactReal::from_rational(e.clone()), || format!("{f}: e = {exact}, expected {e}"))?;
        let est = ok(multiplicity_estimate(f, 1000))?.estimate;
        ensure((&est - e).abs() <= rat(1, 100), || format!("{f}: estimate {est}, exact {e}"))?;
        // K(F) = F levelwise, so the colengths and multiplicities agree
        let k = ok(k_filtration(f, 12))?;
        for m in 1..=12 {
            ensure(ok(k.level(m))? == ok(f.level(m))?, || format!("{f}: K level {m} differs"))?;
        }
        ensure(ok(saturation_check(f, &[], 12))?.all_equal(), || format!("{f}: saturation differs"))?;
        notes.push(format!("{exact}~{}", ExactReal::from_rational(est).to_f64()));
    }
    let adic = Filtration::adic(ideal(2, &[&[2, 0], &[0, 3]]));
    let mut devs = Vec::new();
    for n in [50u64, 200, 1000] {
        let li = ok(adic.colength(n))?;
        let kn = ok(k_level(&adic, n))?;
        let lk = ok(samuel_core::multiplicity::colength(&kn))?;
        let dev = (normalized_colength(li, n, 2) - normalized_colength(lk, n, 2)).abs();
        devs.push((n, dev));
    }
    ensure(devs.windows(2).all(|w| w[1].1 < w[0].1), || format!("deviations do not shrink: {devs:?}"))?;
    let shown: Vec<String> = devs.iter().map(|(n, d)| format!("n={n}: {:.5}", ExactReal::from_rational(d.clone()).to_f64())).collect();
    Ok(format!("e = {}; adic vs K deviation {}", notes.join(", "), shown.join(", ")))
}

fn criterion10() -> Check {
    let seed = DEFAULT_SEED;
    let mut lines = vec![format!("seed {seed}")];
    let mut failed = false;
    for s in SUITES {
        let r = ok(run_suite(s, seed, DEFAULT_CASES))?;
        for f in &r.failures {
            println!("  reproducer: {f}");
        }
        failed |= !r.passed();
        lines.push(format!("{s} {}/{}", r.cases - r.failures.len() as u64, r.cases));
    }
    if failed {
        Err(lines.join(", "))
    } else {
        Ok(lines.join(", "))
    }
}

/// Criteria that cannot hold as stated, with the reason. They still print FAIL;
/// the run only errors when another criterion fails or one of these passes.
const UNATTAINABLE: &[(u32, &str)] = &[(
    6,
    "x^r is never in closure(I_r) = (x^(r+1)), so IC_1 = I_1 = (x^2) for StairOneVar(1,1); \
     the strict inclusion I ⊊ IC needs c >= 2",
)];

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Check); 10] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
        (10, criterion10),
    ];
    let mut unexpected = 0;
    for (i, f) in criteria {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        let known = UNATTAINABLE.iter().find(|(k, _)| *k == i);
        match (r, known) {
            (Ok(msg), None) => println!("criterion {i}: PASS ({secs:.1}s) {msg}"),
            (Ok(msg), Some(_)) => {
                unexpected += 1;
                println!("criterion {i}: PASS ({secs:.1}s) {msg} [listed as unattainable; update the list]");
            }
            (Err(msg), None) => {
                unexpected += 1;
                println!("criterion {i}: FAIL ({secs:.1}s) {msg}");
            }
            (Err(msg), Some((_, why))) => println!("criterion {i}: FAIL ({secs:.1}s) {msg} [unattainable: {why}]"),
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
