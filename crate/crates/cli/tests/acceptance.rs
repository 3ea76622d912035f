//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use maxmeasure::fixtures as fx;
use maxmeasure::integral::{gerritse_integral, indicator, measure_with_density, sweep_integral};
use maxmeasure::maxitive::{atom_decomposition, choquet_alternating, classify, disjoint_variation};
use maxmeasure::possibility::{bcj_property_suite, conditional, lp_limit_conditional, PossibilitySpace, SubAlgebra};
use maxmeasure::pseudo_mul::{check_inf_distributivity, default_grid};
use maxmeasure::radon_nikodym::{ae_equal, bcj_density, density_from_associated, random_dominated, rn_density};
use maxmeasure::space::all_sets;
use maxmeasure::supmeasure::{mc_frechet_check, mc_rv_tail_check, ControlMeasure, SlowVariation};
use maxmeasure::{
    AdditiveMeasure, AtomSet, Error, ExtReal, MaxitiveMeasure, MeasurableFn, PseudoMul, SemigroupOp, SetFn,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const SEED: u64 = 20_241;

const C1_RUNTIME: Duration = Duration::from_secs(10);
const C7_LP_GAP: f64 = 1e-2;
const C8_RUNTIME: Duration = Duration::from_secs(60);
const C8_N: usize = 100_000;
const C8_PROB_BAND: f64 = 0.005;
const C8_SCALE_BAND: f64 = 0.05;
const C8_EPSILON: f64 = 1e-3;
const C9_RUNTIME: Duration = Duration::from_secs(120);
const C9_N: usize = 1_000_000;
const C9_RATIO: (f64, f64) = (0.9, 1.1);
/// One-sample KS critical value at α = 0.01 is `KS_C / √n`.
const KS_C: f64 = 1.628;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

// ---------------------------------------------------------------- oracles

fn close(a: ExtReal, b: ExtReal) -> bool {
    let (x, y) = (a.get(), b.get());
    if x == y {
        return true;
    }
    if x.is_infinite() || y.is_infinite() {
        return false;
    }
    (x - y).abs() <= TOL * 1f64.max(x.abs().max(y.abs()))
}

fn close_f(x: f64, y: f64) -> bool {
    close(ExtReal::clamped(x), ExtReal::clamped(y))
}

/// `s ⊙ t` for the two builtin pseudo-multiplications, `0 · ∞ = 0`.
fn odot(times: bool, s: f64, t: f64) -> f64 {
    if times {
        if s == 0.0 || t == 0.0 { 0.0 } else { s * t }
    } else {
        s.min(t)
    }
}

fn is_times(op: &PseudoMul) -> bool {
    op.op().label() == "times"
}

/// `sup_t t ⊙ ν(B ∩ {f ≥ t})` over the values of `f` on `B`.
fn integral_oracle(times: bool, f: &[f64], nu: &dyn Fn(u64) -> f64, b: u64) -> f64 {
    let mut best: f64 = 0.0;
    for (i, &t) in f.iter().enumerate() {
        if b >> i & 1 == 0 {
            continue;
        }
        let level = (0..f.len()).filter(|&j| b >> j & 1 == 1 && f[j] >= t).fold(0u64, |acc, j| acc | 1 << j);
        best = best.max(odot(times, t, nu(level)));
    }
    best
}

fn max_over(vals: &[f64], b: u64) -> f64 {
    (0..vals.len()).filter(|&i| b >> i & 1 == 1).map(|i| vals[i]).fold(0.0, f64::max)
}

fn f64s(v: &[ExtReal]) -> Vec<f64> {
    v.iter().map(|x| x.get()).collect()
}

/// All set partitions of the atoms in `b`.
fn partitions(b: u64) -> Vec<Vec<u64>> {
    if b == 0 {
        return vec![vec![]];
    }
    let low = b & b.wrapping_neg();
    let rest = b & !low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        let block = sub | low;
        for mut p in partitions(rest & !sub) {
            p.push(block);
            out.push(p);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

fn stats(n: usize, fails: usize) -> String {
    format!("{}/{n}", n - fails)
}

// ---------------------------------------------------------------- criteria

fn c1() -> Outcome {
    let start = Instant::now();
    let mut rng = fx::rng(SEED, 1);
    let mut alt_fail = 0;
    for _ in 0..200 {
        let k = rng.random_range(2..=4);
        let nu = fx::maxitive(&mut rng, k, 0.2, 0.1);
        if !choquet_alternating(&nu, 4).map(|r| r.ok).unwrap_or(false) {
            alt_fail += 1;
        }
    }
    let mut witness_fail = 0;
    for _ in 0..50 {
        let k = rng.random_range(2..=4);
        let w = fx::non_maxitive(&mut rng, k);
        let ok = match classify(&w) {
            Ok(rep) if !rep.maxitive => rep.witnesses.get("maxitive").is_some_and(|wit| match wit.sets[..] {
                [a, b] => w.eval(a.union(b)) != w.eval(a).max(w.eval(b)),
                _ => false,
            }),
            _ => false,
        };
        if !ok {
            witness_fail += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        alt_fail == 0 && witness_fail == 0 && elapsed < C1_RUNTIME,
        format!(
            "alternating to order 4 {}, non-maxitive witnessed {}, {:.2}s",
            stats(200, alt_fail),
            stats(50, witness_fail),
            elapsed.as_secs_f64()
        ),
    )
}

fn c2() -> Outcome {
    let mut rng = fx::rng(SEED, 2);
    let mut fails = 0;
    for _ in 0..1000 {
        let op = fx::op(&mut rng);
        let k = rng.random_range(1..=5);
        let nu = fx::maxitive(&mut rng, k, 0.2, 0.1);
        let f = fx::function(&mut rng, k, 0.1);
        let b = fx::set(&mut rng, k);
        let sweep = sweep_integral(&op, &f, &nu, b);
        let gerritse = gerritse_integral(&op, &f, &nu, b);
        let vals = f64s(nu.values());
        let oracle = integral_oracle(is_times(&op), &f64s(f.values()), &|s| max_over(&vals, s), b.bits());
        if !matches!(gerritse, Ok(g) if close(g, sweep)) || !close(sweep, ExtReal::of(oracle)) {
            fails += 1;
        }
    }
    let f = MeasurableFn::from_f64(&[3.0, 1.0, 4.0]).unwrap();
    let nu = MaxitiveMeasure::from_f64(&[1.0, 2.0, 0.5]).unwrap();
    let full = AtomSet::full(3);
    let t = sweep_integral(&PseudoMul::times(), &f, &nu, full);
    let m = sweep_integral(&PseudoMul::min(), &f, &nu, full);
    let fixture = t.get() == 3.0 && m.get() == 1.0;
    outcome(
        fails == 0 && fixture,
        format!("evaluators agree {}, fixture × = {t}, ∧ = {m}", stats(1000, fails)),
    )
}

fn c3() -> Outcome {
    let mut rng = fx::rng(SEED, 3);
    let (mut ind, mut hom, mut sig, mut dom) = (0, 0, 0, 0);
    let rs = [0.0, 0.5, 1.0, 2.0, 7.25, f64::INFINITY];
    for i in 0..100 {
        let op = if i % 2 == 0 { PseudoMul::times() } else { PseudoMul::min() };
        let times = is_times(&op);
        let k = rng.random_range(1..=5);
        let nu = fx::maxitive(&mut rng, k, 0.2, 0.1);
        let fs: Vec<MeasurableFn> = (0..3).map(|_| fx::function(&mut rng, k, 0.1)).collect();
        let full = AtomSet::full(k);
        let int = |f: &MeasurableFn, b: AtomSet| sweep_integral(&op, f, &nu, b);

        if all_sets(k).any(|b| !close(int(&indicator(&op, k, b), full), nu.eval(b))) {
            ind += 1;
        }
        let hom_ok = rs.iter().all(|&r| {
            all_sets(k).all(|b| {
                let scaled = fs[0].map(|v| ExtReal::of(odot(times, r, v.get())));
                close(int(&scaled, b), ExtReal::of(odot(times, r, int(&fs[0], b).get())))
            })
        });
        if !hom_ok {
            hom += 1;
        }
        let sup = fs[1..].iter().fold(fs[0].clone(), |acc, g| acc.sup(g).unwrap());
        if all_sets(k).any(|b| !close(int(&sup, b), fs.iter().map(|g| int(g, b)).max().unwrap())) {
            sig += 1;
        }
        let dom_ok = all_sets(k).all(|b1| {
            all_sets(k).all(|b2| close(int(&fs[0], b1.union(b2)), int(&fs[0], b1).max(int(&fs[0], b2))))
        });
        if !dom_ok {
            dom += 1;
        }
    }
    outcome(
        ind + hom + sig + dom == 0,
        format!(
            "ν(1_B)=ν(B) {}, homogeneity {}, σ-maxitivity {}, domain maxitivity {}",
            stats(100, ind),
            stats(100, hom),
            stats(100, sig),
            stats(100, dom)
        ),
    )
}

fn c4() -> Outcome {
    let mut rng = fx::rng(SEED, 4);
    let mut report = Vec::new();
    let mut passed = true;
    for op in [PseudoMul::times(), PseudoMul::min()] {
        let times = is_times(&op);
        let (mut fails, mut bcj_cases) = (0, 0);
        let mut first = None;
        for i in 0..500 {
            let k = rng.random_range(1..=5);
            let with_bcj = times && i % 4 == 0;
            let (nu, tau, m) = if with_bcj {
                // τ = δ_m and ν essential with m
                let m = fx::additive(&mut rng, k);
                let tau = MaxitiveMeasure::new(m.masses().iter().map(|x| if x.is_zero() { ExtReal::ZERO } else { ExtReal::ONE }).collect());
                let nu = MaxitiveMeasure::new(
                    m.masses().iter().map(|x| if x.is_zero() { ExtReal::ZERO } else { fx::value(&mut rng, 0.0, 0.0) }).collect(),
                );
                (nu, tau, Some(m))
            } else {
                let tau = fx::maxitive(&mut rng, k, 0.2, if times { 0.0 } else { 0.15 });
                (random_dominated(&op, &tau, &mut rng), tau, None)
            };
            let check = || -> Result<(), String> {
                let c = rn_density(&op, &nu, &tau).map_err(|e| format!("rn_density: {e}"))?;
                let back = measure_with_density(&op, &c, &tau).map_err(|e| e.to_string())?;
                if let Some(b) = all_sets(k).find(|&b| !close(back.eval(b), nu.eval(b))) {
                    return Err(format!("round trip fails on {b:?}"));
                }
                // independent: ∫_B c ⊙ dτ from the test oracle
                let tv = f64s(tau.values());
                if let Some(b) = all_sets(k).find(|&b| {
                    !close_f(integral_oracle(times, &f64s(c.values()), &|s| max_over(&tv, s), b.bits()), nu.eval(b).get())
                }) {
                    return Err(format!("oracle integral differs on {b:?}"));
                }
                let mut methods = vec![("residual", c)];
                let assoc = density_from_associated(&op, &MaxitiveMeasure::delta_sharp(k), &nu.density(), &tau.density())
                    .map_err(|e| format!("associated: {e}"))?;
                methods.push(("associated", assoc.density));
                if let Some(m) = &m {
                    let env = bcj_density(&nu, m).map_err(|e| format!("bcj: {e}"))?;
                    methods.push(("bcj", env.density));
                }
                for (i, (n1, d1)) in methods.iter().enumerate() {
                    for (n2, d2) in &methods[i + 1..] {
                        if !ae_equal(&tau, d1, d2).map_err(|e| e.to_string())? {
                            return Err(format!("{n1} and {n2} differ"));
                        }
                    }
                }
                Ok(())
            };
            if m.is_some() {
                bcj_cases += 1;
            }
            if let Err(e) = check() {
                fails += 1;
                first.get_or_insert(format!("{:?} vs {:?}: {e}", f64s(nu.values()), f64s(tau.values())));
            }
        }
        passed &= fails == 0;
        report.push(format!(
            "{} {} ({bcj_cases} with bcj){}",
            op.op().label(),
            stats(500, fails),
            first.map(|w| format!(" first failure {w}")).unwrap_or_default()
        ));
    }
    let counter = rn_density(&PseudoMul::times(), &MaxitiveMeasure::delta_sharp(2), &MaxitiveMeasure::constant(2, ExtReal::INFINITY));
    let counter_ok = matches!(counter, Err(Error::NoDensity(_)));
    outcome(
        passed && counter_ok,
        format!(
            "round trip {}; (δ_#, ∞·δ_#) → {}",
            report.join(", "),
            match &counter {
                Err(e) => e.code(),
                Ok(_) => "a density",
            }
        ),
    )
}

fn envelope_oracle(nu: &[f64], m: &[f64], b: u64) -> f64 {
    partitions(b)
        .iter()
        .map(|p| p.iter().map(|&blk| odot(true, max_over(nu, blk), sum_over(m, blk))).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

fn sum_over(vals: &[f64], b: u64) -> f64 {
    (0..vals.len()).filter(|&i| b >> i & 1 == 1).map(|i| vals[i]).sum()
}

fn essential_pair(rng: &mut ChaCha8Rng, k: usize, inf: f64) -> (MaxitiveMeasure, AdditiveMeasure) {
    let m = fx::additive(rng, k);
    let nu = MaxitiveMeasure::new(
        m.masses().iter().map(|x| if x.is_zero() { ExtReal::ZERO } else { fx::value(rng, 0.0, inf) }).collect(),
    );
    (nu, m)
}

fn c5() -> Outcome {
    let mut rng = fx::rng(SEED, 5);
    let (mut additive, mut envelope, mut recon, mut dens) = (0, 0, 0, 0);
    for _ in 0..100 {
        let k = rng.random_range(1..=5);
        let (nu, m) = essential_pair(&mut rng, k, 0.0);
        let Ok(env) = bcj_density(&nu, &m) else {
            additive += 1;
            continue;
        };
        let (nv, mv) = (f64s(nu.values()), f64s(m.masses()));
        let singles: Vec<f64> = (0..k).map(|a| env.m_nu.eval(AtomSet::singleton(a)).get()).collect();
        if all_sets(k).any(|b| !close_f(env.m_nu.eval(b).get(), sum_over(&singles, b.bits()))) {
            additive += 1;
        }
        if all_sets(k).any(|b| !close_f(env.m_nu.eval(b).get(), envelope_oracle(&nv, &mv, b.bits()))) {
            envelope += 1;
        }
        let recon_ok = all_sets(k).all(|b| {
            let r = b
                .subsets()
                .filter(|s| sum_over(&mv, s.bits()) > 0.0)
                .map(|s| env.m_nu.eval(s).get() / sum_over(&mv, s.bits()))
                .fold(0.0, f64::max);
            (r - nu.eval(b).get()).abs() <= TOL
        });
        if !recon_ok {
            recon += 1;
        }
        let delta_m = MaxitiveMeasure::new(mv.iter().map(|&x| if x > 0.0 { ExtReal::ONE } else { ExtReal::ZERO }).collect());
        let ok = rn_density(&PseudoMul::times(), &nu, &delta_m)
            .and_then(|c| ae_equal(&delta_m, &c, &env.density))
            .unwrap_or(false);
        if !ok {
            dens += 1;
        }
    }
    let mut arctan = 0;
    let mut made = 0;
    while made < 20 {
        let k = rng.random_range(1..=5);
        let (nu, m) = essential_pair(&mut rng, k, 0.35);
        if nu.is_finite() {
            continue;
        }
        made += 1;
        let ok = bcj_density(&nu, &m).is_ok_and(|env| {
            let Some(c1) = &env.arctan_density else { return false };
            let c1 = f64s(c1.values());
            let d = f64s(env.density.values());
            all_sets(k).all(|b| {
                (max_over(&c1, b.bits()) - nu.eval(b).get().atan()).abs() <= TOL && close_f(max_over(&d, b.bits()), nu.eval(b).get())
            })
        });
        if !ok {
            arctan += 1;
        }
    }
    outcome(
        additive + envelope + recon + dens + arctan == 0,
        format!(
            "m_ν additive {}, envelope oracle {}, reconstruction {}, density {}, arctan {}",
            stats(100, additive),
            stats(100, envelope),
            stats(100, recon),
            stats(100, dens),
            stats(20, arctan)
        ),
    )
}

fn c6() -> Outcome {
    let mut rng = fx::rng(SEED, 6);
    let (mut deco, mut var) = (0, 0);
    for _ in 0..200 {
        let k = rng.random_range(1..=8);
        let nu = fx::maxitive(&mut rng, k, 0.25, 0.05);
        let ok = atom_decomposition(&nu).is_ok_and(|d| {
            let disjoint = d.atoms.iter().enumerate().all(|(i, a)| d.atoms[i + 1..].iter().all(|b| a.is_disjoint(*b)));
            disjoint
                && nu.eval(d.residual_null).is_zero()
                && all_sets(k).all(|b| nu.eval(b) == d.atoms.iter().map(|&h| nu.eval(b.intersection(h))).max().unwrap_or(ExtReal::ZERO))
        });
        if !ok {
            deco += 1;
        }
        let oracle: f64 = nu.values().iter().map(|v| v.get()).sum();
        let ok = disjoint_variation(&nu).is_ok_and(|r| close_f(r.brute_force.get(), oracle) && r.value == r.brute_force);
        if !ok {
            var += 1;
        }
    }
    outcome(
        deco + var == 0,
        format!("decomposition {}, variation = Σν(Hₙ) {}", stats(200, deco), stats(200, var)),
    )
}

fn c7() -> Outcome {
    let mut rng = fx::rng(SEED, 7);
    let mut parts = Vec::new();
    let mut passed = true;
    for op in [PseudoMul::times(), PseudoMul::min()] {
        let times = is_times(&op);
        let (mut defining, mut suite) = (0, 0);
        let mut failing: Vec<&str> = Vec::new();
        for i in 0..300 {
            let k = rng.random_range(1..=6);
            let p = PossibilitySpace::new(fx::possibility(&mut rng, k)).unwrap();
            let x = fx::function(&mut rng, k, 0.1);
            let x2 = fx::function(&mut rng, k, 0.1);
            let f = fx::subalgebra(&mut rng, k);
            let lambda = [0.5, 2.0, f64::INFINITY][i % 3];
            let pi = f64s(p.pi().values());
            let ok = conditional(&op, &p, &x, &f).is_ok_and(|r| {
                f.sets().all(|a| {
                    let lhs = integral_oracle(times, &f64s(x.values()), &|s| max_over(&pi, s), a.bits());
                    let rhs = integral_oracle(times, &f64s(r.y.values()), &|s| max_over(&pi, s), a.bits());
                    close_f(lhs, rhs)
                })
            });
            if !ok {
                defining += 1;
            }
            match bcj_property_suite(&op, &p, &f, &x, &x2, ExtReal::of(lambda), SEED + i as u64) {
                Ok(s) if s.all_passed => {}
                Ok(s) => {
                    suite += 1;
                    for (name, c) in [
                        ("defining", &s.defining_property),
                        ("bcj1_only_if", &s.bcj1_only_if),
                        ("bcj1_if", &s.bcj1_if),
                        ("bcj3", &s.bcj3),
                        ("bcj4", &s.bcj4),
                        ("bcj5", &s.bcj5),
                        ("bcj6", &s.bcj6),
                    ] {
                        if !c.passed && !failing.contains(&name) {
                            failing.push(name);
                        }
                    }
                }
                Err(_) => {
                    suite += 1;
                    if !failing.contains(&"error") {
                        failing.push("error");
                    }
                }
            }
        }
        passed &= defining == 0 && suite == 0;
        parts.push(format!(
            "{}: defining {}, bcj suite {}{}",
            op.op().label(),
            stats(300, defining),
            stats(300, suite),
            if failing.is_empty() { String::new() } else { format!(" [{}]", failing.join(",")) }
        ));
    }

    let p = PossibilitySpace::new(MaxitiveMeasure::from_f64(&[1.0, 0.5, 0.25, 1.0]).unwrap()).unwrap();
    let x = MeasurableFn::from_f64(&[2.0, 5.0, 3.0, 1.0]).unwrap();
    let f = SubAlgebra::new(4, vec![AtomSet::from_atoms([0, 1]), AtomSet::from_atoms([2, 3])]).unwrap();
    let y = conditional(&PseudoMul::times(), &p, &x, &f).map(|r| f64s(r.y.values()));
    let fixture = matches!(&y, Ok(v) if v[..] == [2.5, 2.5, 1.0, 1.0]);
    passed &= fixture;

    let m = AdditiveMeasure::from_f64(&[0.25; 4]).unwrap();
    let ps = [1.0, 2.0, 5.0, 10.0, 50.0, 200.0];
    let (gap, monotone) = match lp_limit_conditional(&m, &x, &f, &ps) {
        Ok(r) => {
            // gaps recomputed against the block maxima (5, 3)
            let rows: Vec<f64> = r.rows.iter().map(|row| row.values.iter().zip([5.0, 3.0]).map(|(v, t)| (v.get() - t).abs()).fold(0.0, f64::max)).collect();
            let agrees = rows.last().is_some_and(|g| close_f(*g, r.max_gap_last));
            let mono = rows.windows(2).all(|w| w[1] <= w[0] + TOL) && r.monotone;
            (if agrees { rows[rows.len() - 1] } else { f64::NAN }, mono)
        }
        Err(_) => (f64::NAN, false),
    };
    passed &= gap < C7_LP_GAP && monotone;
    outcome(
        passed,
        format!(
            "{}; fixture Y = {:?}; Lᵖ gap at p=200 {gap:.4} (< {C7_LP_GAP} required), monotone {monotone}",
            parts.join("; "),
            y.unwrap_or_default()
        ),
    )
}

fn c8() -> Outcome {
    let start = Instant::now();
    let masses = [0.2, 0.3, 0.5];
    let f: [f64; 3] = [1.0, 2.0, 0.5];
    let m = ControlMeasure::new(masses.to_vec()).unwrap();
    let fn_ = MeasurableFn::from_f64(&f).unwrap();
    let p = 2.0;
    let norm_pp: f64 = masses.iter().zip(f).map(|(w, x)| w * x.powf(p)).sum();
    let expected = (-1.0f64).exp();
    let r = match mc_frechet_check(&m, p, AtomSet::full(3), &fn_, C8_N, SEED, Some(C8_EPSILON)) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error {e}")),
    };
    let elapsed = start.elapsed();
    let crit = KS_C / (C8_N as f64).sqrt();
    let prob_ok = (r.p_le_one - expected).abs() <= C8_PROB_BAND;
    let ks_ok = r.ks_exact.statistic <= crit;
    let two = r.ks_poisson_vs_exact.as_ref().map(|k| k.statistic).unwrap_or(f64::INFINITY);
    // two-sample critical value with equal sizes: c·√(2/n)
    let two_ok = two <= KS_C * (2.0 / C8_N as f64).sqrt();
    let scale_err = (r.fitted_scale / norm_pp - 1.0).abs();
    let scale_ok = scale_err <= C8_SCALE_BAND && close_f(r.f_norm_pp, norm_pp);
    outcome(
        prob_ok && ks_ok && two_ok && scale_ok && elapsed < C8_RUNTIME,
        format!(
            "P[M(E) ≤ 1] = {:.4} vs {expected:.4}, KS D = {:.4} (crit {crit:.4}), poisson vs exact D = {two:.4}, scale error {:.3}, {:.1}s",
            r.p_le_one,
            r.ks_exact.statistic,
            scale_err,
            elapsed.as_secs_f64()
        ),
    )
}

fn c9() -> Outcome {
    let start = Instant::now();
    let masses = [0.2, 0.3, 0.5];
    let f: [f64; 3] = [1.0, 2.0, 0.5];
    let p = 2.0;
    let norm_pp: f64 = masses.iter().zip(f).map(|(w, x)| w * x.powf(p)).sum();
    // ‖f‖_p^p x^{−p} = 1e-3
    let x999 = (norm_pp / 1e-3).powf(1.0 / p);
    let grid = [x999 / 4.0, x999 / 2.0, x999];
    let m = ControlMeasure::new(masses.to_vec()).unwrap();
    let r = match mc_rv_tail_check(&m, p, SlowVariation::Const, &MeasurableFn::from_f64(&f).unwrap(), C9_N, &grid, SEED) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error {e}")),
    };
    let elapsed = start.elapsed();
    let last = &r.points[2];
    let ratio = last.exceedances as f64 / C9_N as f64 / (norm_pp * x999.powf(-p));
    outcome(
        ratio >= C9_RATIO.0 && ratio <= C9_RATIO.1 && close_f(ratio, last.ratio) && elapsed < C9_RUNTIME,
        format!("tail ratio at x = {x999:.2} is {ratio:.4}, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn c10() -> Outcome {
    let grid = default_grid();
    let ops = [SemigroupOp::times(), SemigroupOp::min(), SemigroupOp::plus(), SemigroupOp::max()];
    let (mut checked, mut fails) = (0u64, 0u64);
    let mut first = None;
    for op in &ops {
        for &r in &grid {
            for &s in &grid {
                if !op.residual_defined(r, s) {
                    continue;
                }
                let Ok(q) = op.residual(r, s) else { continue };
                for &t in &grid {
                    checked += 1;
                    if r.approx_le(op.eval(t, s)) != q.approx_le(t) {
                        fails += 1;
                        first.get_or_insert(format!("{} ({r},{s},{t})", op.label()));
                    }
                }
            }
        }
    }
    let res = |op: &SemigroupOp, r: f64, s: f64| op.residual(ExtReal::of(r), ExtReal::of(s)).map(|x| x.get()).unwrap_or(f64::NAN);
    let (plus, max, times, min) = (&ops[2], &ops[3], &ops[0], &ops[1]);
    let mut table = res(plus, 5.0, 3.0) == 2.0
        && res(plus, 3.0, 5.0) == 0.0
        && res(max, 5.0, 3.0) == 5.0
        && res(max, 3.0, 5.0) == 0.0
        && res(times, 2.0, 4.0) == 0.5
        && times.is_exact()
        && min.is_exact()
        && !plus.is_exact()
        && !max.is_exact();
    for &r in &grid {
        for &s in grid.iter().filter(|&&s| r <= s) {
            table &= min.residual(r, s).is_ok_and(|q| q == r);
        }
    }
    let mut rng = fx::rng(SEED, 10);
    let mut inf_fail = 0;
    for _ in 0..100 {
        let op = &ops[rng.random_range(0..4)];
        let n = rng.random_range(1..=6);
        let ts = fx::values(&mut rng, n, 0.1, 0.1);
        let s = fx::value(&mut rng, 0.1, 0.1);
        let inf_t = ts.iter().copied().min().unwrap();
        let direct = ts.iter().map(|&t| op.eval(t, s)).min().unwrap();
        if !check_inf_distributivity(op, &ts, s) || !close(direct, op.eval(inf_t, s)) {
            inf_fail += 1;
        }
    }
    outcome(
        fails == 0 && table && inf_fail == 0,
        format!(
            "Galois {}/{checked} triples{}, table {}, inf-distributivity {}",
            checked - fails,
            first.map(|w| format!(" first failure {w}")).unwrap_or_default(),
            if table { "reproduced" } else { "differs" },
            stats(100, inf_fail)
        ),
    )
}

fn c11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("maxmeasure-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("s.csv");
    let csv = csv.to_str().unwrap();
    let m = r#"{"type":"additive","atom_values":{"a":0.2,"b":0.3,"c":0.5}}"#;
    let commands: Vec<Vec<&str>> = vec![
        vec!["simulate", "--m", m, "--n", "3000", "--seed", "9", "--fn", r#"{"a":1,"b":2,"c":0.5}"#, "--csv", csv],
        vec!["simulate", "--m", m, "--n", "300", "--seed", "9", "--stream", "17", "--mode", "poisson", "--eps", "0.01"],
        vec!["simulate", "--m", m, "--n", "20000", "--seed", "9", "--tail-grid", "5,10,20", "--slow", "log"],
        vec![
            "condition",
            "--pi",
            r#"{"atom_values":[1,0.5,0.25,1,0.75,0]}"#,
            "--x",
            "[2,5,3,1,4,7]",
            "--sub",
            "1+2|3+4+5|6",
            "--x2",
            "[0,1,2,3,4,5]",
            "--seed",
            "4",
        ],
        vec!["suite", "--all", "--seed", "11"],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_maxmeasure")).args(args).output().expect("binary runs");
            let extra = if args.contains(&csv) { std::fs::read(csv).unwrap() } else { Vec::new() };
            outs.push((out.status.code(), out.stdout, extra));
        }
        let valid_json = serde_json::from_slice::<serde_json::Value>(&outs[0].1).is_ok();
        if outs[0] != outs[1] || !valid_json || outs[0].0 != Some(0) {
            differing.push(args[0]);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        differing.is_empty(),
        format!(
            "{} seeded commands byte-identical{}",
            commands.len() - differing.len(),
            if differing.is_empty() { String::new() } else { format!(", differing or failing: {}", differing.join(",")) }
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("alternation suite", c1),
        ("integral oracle equivalence", c2),
        ("integral properties", c3),
        ("Radon-Nikodym round trip", c4),
        ("density against an additive measure", c5),
        ("optimal-measure structure", c6),
        ("conditioning", c7),
        ("Fréchet simulation", c8),
        ("regularly varying tail", c9),
        ("residuation", c10),
        ("determinism", c11),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let o = run();
        println!("{} criterion {n} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
