//! Executable manifest of module invariants.
//!
//! Each entry maps a suite id to one invariant of one module and a seeded
//! check. [`run`] executes a selection; [`unmapped_modules`] lists modules
//! that have no entry.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{implications_check, AdditiveMeasure};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::fixtures as fx;
use crate::integral::{
    essential_supremum_measure, gerritse_integral, idempotent_integral, ky_fan_distance, measure_with_density,
    shilkret, sugeno, sweep_integral,
};
use crate::maxitive::{
    atom_decomposition, choquet_alternating, classify, delta_measure, disjoint_variation, essential_supremum,
    is_nu_atom, maxitivity_violation, monotone_violation, null_additivity_violation, sigma_principal_violation,
    MaxitiveMeasure,
};
use crate::model::{function_json, parse_function, parse_measure, Measure, ModelFile, SpaceSpec};
use crate::possibility::{conditional, law_of_map, lp_limit_conditional, PossibilitySpace};
use crate::pseudo_mul::{
    check_inf_distributivity, default_grid, galois_holds, residual_unattained, verify_axioms, OpName, PseudoMul,
    SemigroupOp,
};
use crate::radon_nikodym::{
    abs_continuity, ae_equal, bcj_density, caratheodory_envelope, density_from_associated, random_dominated,
    rn_density,
};
use crate::space::{all_sets, set_partitions, AtomSet, MeasurableFn, SetFn, SetFunction, Space};
use crate::supmeasure::{sample_many, sample_supmeasure, ControlMeasure, PoissonScheme, SampleMode};

pub const MODULES: [&str; 9] = [
    "space_core",
    "pseudo_mul",
    "maxitive",
    "integral",
    "radon_nikodym",
    "possibility",
    "supmeasure_sim",
    "classical_bridge",
    "cli",
];

type Check = fn(u64) -> Result<Outcome>;

pub struct Invariant {
    pub id: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    check: Check,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub passed: bool,
    pub cases: u64,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantResult {
    pub id: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub cases: u64,
    pub witness: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRun {
    pub seed: u64,
    pub total: usize,
    pub failed: usize,
    pub all_passed: bool,
    pub results: Vec<InvariantResult>,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    witness: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> Result<Outcome> {
        Ok(Outcome { passed: self.witness.is_none(), cases: self.cases, witness: self.witness })
    }
}

fn set_eq(a: &impl SetFn, b: &impl SetFn) -> Option<AtomSet> {
    all_sets(a.atom_count()).find(|&s| !a.eval(s).approx_eq(b.eval(s)))
}

/// Replaces every positive value of `δ` by `1_⊙`.
fn delta_for(op: &PseudoMul, w: &impl SetFn) -> MaxitiveMeasure {
    delta_measure(w).map(|v| if v.is_zero() { v } else { op.identity() })
}

macro_rules! inv {
    ($id:literal, $module:literal, $statement:literal, $check:expr) => {
        Invariant { id: $id, module: $module, statement: $statement, check: $check }
    };
}

pub fn manifest() -> &'static [Invariant] {
    MANIFEST
}

static MANIFEST: &[Invariant] = &[
    // space_core
    inv!("space.ext_real.order", "space_core", "values are nonnegative and totally ordered with 0 ≤ x ≤ ∞; 0·∞ = 0 and ∞ − ∞ = 0", ext_order),
    inv!("space.ext_real.serde", "space_core", "serialization round-trips exactly with ∞ written \"inf\"", ext_serde),
    inv!("space.partition", "space_core", "blocks are disjoint and cover the ground set; the algebra has 2^k sets", space_partition),
    inv!("space.mask", "space_core", "∅ is the zero mask, E the all-one mask, masks never exceed the atom count", space_mask),
    inv!("space.level_sets", "space_core", "level sets {f > t} are measurable and decrease in t", level_sets),
    inv!("space.set_function", "space_core", "tables are total over the algebra and vanish at ∅", set_function_table),
    inv!("space.boolean_laws", "space_core", "set operations satisfy the Boolean-algebra laws, exhaustively for k ≤ 5", boolean_laws),
    // pseudo_mul
    inv!("pseudo_mul.axioms", "pseudo_mul", "× and ∧ are associative, monotone, with left identity, annihilating 0 and without zero divisors on the grid", pm_axioms),
    inv!("pseudo_mul.o_map", "pseudo_mul", "O is monotone with O(0) = 0", pm_o_map),
    inv!("pseudo_mul.galois", "pseudo_mul", "r ≤ t ⊙ s ⇔ (r/s)_⊙ ≤ t on the grid, outside the unattained × pairs at s = ∞", pm_galois),
    inv!("pseudo_mul.exactness", "pseudo_mul", "r = (r/s)_⊙ ⊙ s whenever r ≪_⊙ s, for × (s < ∞) and ∧", pm_exactness),
    inv!("pseudo_mul.non_exact", "pseudo_mul", "+ and max are not exact: (3/5)_+ + 5 = 5 ≠ 3", pm_non_exact),
    inv!("pseudo_mul.non_degenerate", "pseudo_mul", "O(1_×) = 0 and O(1_∧) = 0", pm_non_degenerate),
    inv!("pseudo_mul.inf_distributivity", "pseudo_mul", "inf_T (t ⊙ s) = (inf T) ⊙ s on random triples", pm_inf_distributivity),
    // maxitive
    inv!("maxitive.induced", "maxitive", "ν(B) is the maximum over atoms, and is maxitive, monotone and null-additive", mx_induced),
    inv!("maxitive.report", "maxitive", "every report flag matches its predicate and every false flag carries a witness", mx_report),
    inv!("maxitive.max_attained", "maxitive", "ν(∪Bₙ) = maxₙ ν(Bₙ) with the maximum attained", mx_max_attained),
    inv!("maxitive.exhaustive_optimal", "maxitive", "exhaustivity and optimality agree", mx_exhaustive_optimal),
    inv!("maxitive.alternation", "maxitive", "maxitive measures are alternating of order 4 for k ≤ 4", mx_alternation),
    inv!("maxitive.esssup_delta_sharp", "maxitive", "the δ_#-essential supremum of f over B is the maximum of f on B", mx_esssup),
    inv!("maxitive.atom_decomposition", "maxitive", "Hₙ are disjoint ν-atoms, ν(N) = 0 and ν(B) = maxₙ ν(B ∩ Hₙ)", mx_atoms),
    inv!("maxitive.variation", "maxitive", "the partition brute force of the disjoint variation equals Σ ν(Hₙ)", mx_variation),
    inv!("maxitive.implication_chain", "maxitive", "finite ⇒ σ-finite ⇒ σ-principal ⇒ CCC ⇒ localizable on fixture measures", mx_chain),
    // integral
    inv!("integral.evaluators", "integral", "the sweep equals the subset evaluator; the trace covers f(B) ∪ {0}", int_evaluators),
    inv!("integral.homogeneity", "integral", "∫(r⊙f)⊙dν = r⊙∫f⊙dν", int_homogeneity),
    inv!("integral.sigma_maxitivity", "integral", "∫(⊕fₙ)⊙dν = ⊕∫fₙ⊙dν", int_sigma_maxitivity),
    inv!("integral.domain_maxitivity", "integral", "B ↦ ∫_B f⊙dν is maxitive", int_domain_maxitivity),
    inv!("integral.lp_collapse", "integral", "(∫ f^p·dν)^{1/p} = ∫ f·d(ν^{1/p}) for p ∈ {2, 3, 10}", int_lp_collapse),
    inv!("integral.sugeno_ky_fan", "integral", "∫ f∧dν = d_ν(f, 0)", int_ky_fan),
    inv!("integral.esssup_composition", "integral", "∫ g⊙d(τ_f) = ∫ (g⊙f)⊙dδ_τ with δ_τ valued 1_⊙", int_esssup_composition),
    // radon_nikodym
    inv!("rn.relations", "radon_nikodym", "strong ⇒ weak; for × and two-valued τ, ≪_⊙ ⇔ ≪", rn_relations),
    inv!("rn.envelope", "radon_nikodym", "m_ν is the partition infimum, additive, ≪ m, with density m_ν(atom)/m(atom)", rn_envelope),
    inv!("rn.round_trip", "radon_nikodym", "measure_with_density inverts rn_density on every set", rn_round_trip),
    inv!("rn.methods_agree", "radon_nikodym", "residual, associated and bcj densities agree τ-a.e.", rn_methods_agree),
    inv!("rn.autocontinuity", "radon_nikodym", "rn_density(×, ν, δ_ν) exists for every ν", rn_autocontinuity),
    inv!("rn.cardinal_density", "radon_nikodym", "ν ≪ τ ⇔ ν ⋘ τ", rn_cardinal),
    inv!("rn.bcj_reconstruction", "radon_nikodym", "ν(B) = sup m_ν(B′)/m(B′) over B′ ⊆ B, also through the arctan transform", rn_reconstruction),
    // possibility
    inv!("possibility.space", "possibility", "Π(Ω) = 1 and Π is σ-principal; non-normed Π is rejected", poss_space),
    inv!("possibility.subalgebra", "possibility", "blocks partition the atoms; measurable functions are exactly the block-constant ones", poss_subalgebra),
    inv!("possibility.defining_property", "possibility", "Σ[X⊙1_A] = Σ[Σ[X|𝓕]⊙1_A] for every A ∈ 𝓕, by an independent evaluator", poss_defining),
    inv!("possibility.tower", "possibility", "Σ[Σ[X|𝓕]|𝓖] = Σ[X|𝓖] Π-a.e. for 𝓖 ⊆ 𝓕", poss_tower),
    inv!("possibility.law_normed", "possibility", "the law of a random variable is normed", poss_law),
    inv!("possibility.lp_monotone", "possibility", "Lᵖ conditional gaps are nonincreasing in p", poss_lp),
    // supmeasure_sim
    inv!("supmeasure.control", "supmeasure_sim", "m(E) = Σ masses < ∞; invalid masses are rejected", sim_control),
    inv!("supmeasure.point_config", "supmeasure_sim", "points exceed ε and their count has mean m(E)ε^{−p}", sim_points),
    inv!("supmeasure.complete_maxitivity", "supmeasure_sim", "each realization is completely maxitive with M(∅) = 0", sim_maxitive),
    inv!("supmeasure.independence", "supmeasure_sim", "M(B₁), M(B₂) are uncorrelated for disjoint sets (exact mode, within 3σ)", sim_independence),
    inv!("supmeasure.determinism", "supmeasure_sim", "identical (seed, stream) gives a bit-identical realization", sim_determinism),
    // classical_bridge
    inv!("classical.additive", "classical_bridge", "additive measures are additive over disjoint sets", cl_additive),
    inv!("classical.delta_possibility", "classical_bridge", "δ_m of a probability is a possibility measure", cl_delta),
    inv!("classical.chain", "classical_bridge", "no implication-chain violation on 1000 random measures", cl_chain),
    // cli
    inv!("cli.round_trip", "cli", "serialized measures, functions and spaces re-ingest unchanged", cli_round_trip),
    inv!("cli.model_validation", "cli", "model names resolve and invalid measures are fatal unless validation is off", cli_validation),
    inv!("cli.manifest", "cli", "every module has an entry and suite ids are unique", cli_manifest),
];

/// Modules with no manifest entry.
pub fn unmapped_modules() -> Vec<&'static str> {
    MODULES.iter().copied().filter(|m| !MANIFEST.iter().any(|i| i.module == *m)).collect()
}

/// Runs the invariants whose id or module matches one of `filters`, or all
/// of them when `filters` is empty.
pub fn run(filters: &[&str], seed: u64) -> SuiteRun {
    let results: Vec<InvariantResult> = MANIFEST
        .iter()
        .filter(|i| filters.is_empty() || filters.iter().any(|f| i.id == *f || i.module == *f || i.id.starts_with(&format!("{f}."))))
        .map(|i| {
            let (passed, cases, witness, error) = match (i.check)(seed) {
                Ok(o) => (o.passed, o.cases, o.witness, None),
                Err(e) => (false, 0, None, Some(format!("{}: {e}", e.code()))),
            };
            InvariantResult { id: i.id, module: i.module, statement: i.statement, passed, cases, witness, error }
        })
        .collect();
    let failed = results.iter().filter(|r| !r.passed).count();
    SuiteRun { seed, total: results.len(), failed, all_passed: failed == 0, results }
}

pub fn run_all(seed: u64) -> SuiteRun {
    run(&[], seed)
}

fn rng(seed: u64, salt: &str) -> ChaCha8Rng {
    // one stream per invariant so that adding entries never shifts others
    let stream = salt.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    fx::rng(seed, stream)
}

fn grid() -> Vec<ExtReal> {
    default_grid()
}

// ---- space_core ----

fn ext_order(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let g = grid();
    for &a in &g {
        t.check(ExtReal::ZERO <= a && a <= ExtReal::INFINITY, || format!("{a} out of range"));
        for &b in &g {
            let n = [a < b, a == b, a > b].iter().filter(|&&x| x).count();
            t.check(n == 1, || format!("{a} and {b} not comparable"));
        }
    }
    t.check(ExtReal::ZERO.mul(ExtReal::INFINITY).is_zero(), || "0·∞ ≠ 0".into());
    t.check(ExtReal::INFINITY.mul(ExtReal::ZERO).is_zero(), || "∞·0 ≠ 0".into());
    t.check(ExtReal::INFINITY.monus(ExtReal::INFINITY).is_zero(), || "∞ − ∞ ≠ 0".into());
    for bad in [-1.0, f64::NAN, f64::NEG_INFINITY] {
        t.check(ExtReal::new(bad).is_err(), || format!("{bad} accepted"));
    }
    t.done()
}

fn ext_serde(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "ext_serde");
    let mut vals = grid();
    vals.extend((0..200).map(|_| ExtReal::of(r.random::<f64>() * 10f64.powi(r.random_range(-300..300)))));
    for v in vals {
        let text = serde_json::to_string(&v).map_err(|e| Error::Model(e.to_string()))?;
        let back: ExtReal = serde_json::from_str(&text).map_err(|e| Error::Model(e.to_string()))?;
        t.check(back.get().to_bits() == v.get().to_bits(), || format!("{v} came back as {back}"));
    }
    let inf = serde_json::to_string(&ExtReal::INFINITY).map_err(|e| Error::Model(e.to_string()))?;
    t.check(inf == "\"inf\"", || format!("∞ serialized as {inf}"));
    t.done()
}

fn space_partition(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "space_partition");
    for _ in 0..50 {
        let n = r.random_range(1..=10);
        let ground: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let k = r.random_range(1..=n);
        let mut owner: Vec<usize> = (0..n).map(|i| if i < k { i } else { r.random_range(0..k) }).collect();
        rand::seq::SliceRandom::shuffle(owner.as_mut_slice(), &mut r);
        let blocks: Vec<Vec<String>> =
            (0..k).map(|b| (0..n).filter(|&i| owner[i] == b).map(|i| ground[i].clone()).collect()).collect();
        let space = Space::new(&ground, &blocks)?;
        let mut seen = BTreeSet::new();
        let disjoint = space.blocks().iter().flatten().all(|l| seen.insert(l.to_string()));
        t.check(disjoint && seen.len() == n, || format!("blocks {:?}", space.blocks()));
        t.check(space.sets()?.count() == 1 << k, || format!("algebra size for k = {k}"));
        if n >= 2 {
            let mut overlapping = blocks.clone();
            overlapping[0].push(ground.iter().find(|g| !blocks[0].contains(g)).cloned().unwrap_or_default());
            t.check(Space::new(&ground, &overlapping).is_err(), || "overlapping blocks accepted".into());
        }
        let short: Vec<Vec<String>> = blocks.iter().skip(1).cloned().collect();
        t.check(Space::new(&ground, &short).is_err(), || "uncovered element accepted".into());
    }
    t.done()
}

fn space_mask(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    for k in 0..=12 {
        let full = AtomSet::full(k);
        t.check(full.len() == k && AtomSet::EMPTY.bits() == 0, || format!("k = {k}"));
        t.check(full.complement(k).is_empty(), || format!("Eᶜ nonempty for k = {k}"));
        t.check(all_sets(k).all(|s| s.is_subset(full)), || format!("mask beyond k = {k}"));
    }
    t.done()
}

fn level_sets(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "level_sets");
    for _ in 0..200 {
        let k = r.random_range(1..=8);
        let f = fx::function(&mut r, k, 0.1);
        let (a, b) = (fx::value(&mut r, 0.2, 0.1), fx::value(&mut r, 0.2, 0.1));
        let (t1, t2) = (a.min(b), a.max(b));
        let expected = AtomSet::from_atoms((0..k).filter(|&i| f.value(i) > t1));
        t.check(f.level_set(t1) == expected, || format!("{{f > {t1}}} for {f:?}"));
        t.check(f.level_set(t1).is_subset(AtomSet::full(k)), || "level set not measurable".into());
        t.check(f.level_set(t2).is_subset(f.level_set(t1)), || format!("{f:?} at {t1} ≤ {t2}"));
        t.check(f.level_set_ge(t2).is_subset(f.level_set_ge(t1)), || format!("{f:?} at {t1} ≤ {t2}"));
    }
    t.done()
}

fn set_function_table(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "set_function_table");
    for _ in 0..50 {
        let k = r.random_range(0..=6);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        let table = SetFunction::tabulate(&nu)?;
        t.check(table.table().len() == 1 << k && table.table()[0].is_zero(), || format!("table for {nu:?}"));
        let mut bad = table.table().to_vec();
        bad[0] = ExtReal::ONE;
        t.check(SetFunction::new(k, bad).is_err(), || "nonzero ∅ accepted".into());
        let short = table.table()[..table.table().len() - 1].to_vec();
        t.check(SetFunction::new(k, short).is_err(), || "partial table accepted".into());
    }
    t.done()
}

fn boolean_laws(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    for k in 0..=5 {
        let full = AtomSet::full(k);
        for a in all_sets(k) {
            t.check(a.union(a.complement(k)) == full && a.intersection(a.complement(k)).is_empty(), || format!("complement of {a:?}"));
            for b in all_sets(k) {
                t.check(a.union(b) == b.union(a) && a.intersection(b) == b.intersection(a), || format!("commutativity {a:?} {b:?}"));
                t.check(a.union(a.intersection(b)) == a && a.intersection(a.union(b)) == a, || format!("absorption {a:?} {b:?}"));
                t.check(a.union(b).complement(k) == a.complement(k).intersection(b.complement(k)), || format!("De Morgan {a:?} {b:?}"));
                t.check(a.difference(b) == a.intersection(b.complement(k)), || format!("difference {a:?} {b:?}"));
                for c in all_sets(k) {
                    t.check(
                        a.intersection(b.union(c)) == a.intersection(b).union(a.intersection(c))
                            && a.union(b.intersection(c)) == a.union(b).intersection(a.union(c)),
                        || format!("distributivity {a:?} {b:?} {c:?}"),
                    );
                }
            }
        }
    }
    t.done()
}

// ---- pseudo_mul ----

fn all_ops() -> [SemigroupOp; 4] {
    [SemigroupOp::times(), SemigroupOp::min(), SemigroupOp::plus(), SemigroupOp::max()]
}

fn pm_axioms(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let g = grid();
    for op in [SemigroupOp::times(), SemigroupOp::min()] {
        let rep = verify_axioms(&op, &g);
        t.check(rep.all_passed(), || format!("{}: {:?}", rep.op, rep.failures));
    }
    for op in [SemigroupOp::plus(), SemigroupOp::max()] {
        let rep = verify_axioms(&op, &g);
        t.check(rep.associativity && rep.monotone_left && rep.monotone_right, || format!("{}: {:?}", rep.op, rep.failures));
    }
    t.done()
}

fn pm_o_map(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let g = grid();
    for op in all_ops() {
        t.check(op.o_map(ExtReal::ZERO).is_zero(), || format!("O(0) ≠ 0 for {}", op.label()));
        for w in g.windows(2) {
            t.check(op.o_map(w[0]) <= op.o_map(w[1]), || format!("O not monotone for {} at {}", op.label(), w[0]));
        }
    }
    t.done()
}

fn pm_galois(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let g = grid();
    for op in all_ops() {
        for &r in &g {
            for &s in &g {
                if residual_unattained(&op, r, s) {
                    continue;
                }
                for &u in &g {
                    let ok = galois_holds(&op, r, s, u) != Some(false);
                    t.check(ok, || format!("{} r={r} s={s} t={u}", op.label()));
                }
            }
        }
    }
    t.done()
}

fn pm_exactness(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let g = grid();
    for op in [SemigroupOp::times(), SemigroupOp::min()] {
        for &r in &g {
            for &s in &g {
                if !op.dominates(r, s) || residual_unattained(&op, r, s) {
                    continue;
                }
                let q = op.residual(r, s)?;
                t.check(op.eval(q, s).approx_eq(r), || format!("{} r={r} s={s}", op.label()));
            }
        }
    }
    t.done()
}

fn pm_non_exact(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let (three, five) = (ExtReal::of(3.0), ExtReal::of(5.0));
    let plus = SemigroupOp::plus();
    t.check(plus.eval(plus.residual(five, three)?, three) == five, || "(5/3)_+ + 3 ≠ 5".into());
    t.check(plus.eval(plus.residual(three, five)?, five) == five, || "(3/5)_+ + 5 ≠ 5".into());
    let max = SemigroupOp::max();
    t.check(max.eval(max.residual(three, five)?, five) != three, || "max residual exact at (3, 5)".into());
    t.check(!plus.is_exact() && !max.is_exact(), || "exact flag set".into());
    t.check(SemigroupOp::times().is_exact() && SemigroupOp::min().is_exact(), || "exact flag missing".into());
    t.done()
}

fn pm_non_degenerate(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    for op in [SemigroupOp::times(), SemigroupOp::min()] {
        t.check(op.o_map(op.identity()).is_zero(), || format!("O(1_⊙) ≠ 0 for {}", op.label()));
    }
    t.done()
}

fn pm_inf_distributivity(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "inf_distributivity");
    let ops = all_ops();
    for _ in 0..100 {
        let op = &ops[r.random_range(0..4)];
        let n = r.random_range(1..=6);
        let ts = fx::values(&mut r, n, 0.1, 0.1);
        let s = fx::value(&mut r, 0.1, 0.1);
        t.check(check_inf_distributivity(op, &ts, s), || format!("{} T={ts:?} s={s}", op.label()));
    }
    t.done()
}

// ---- maxitive ----

fn mx_induced(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_induced");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        for b in all_sets(k) {
            let direct = b.atoms().map(|a| nu.values()[a]).max().unwrap_or(ExtReal::ZERO);
            t.check(nu.eval(b) == direct, || format!("{nu:?} on {b:?}"));
        }
        let rep = classify(&SetFunction::tabulate(&nu)?)?;
        t.check(rep.maxitive && rep.monotone && rep.null_additive && rep.completely_maxitive, || format!("{nu:?}"));
    }
    t.done()
}

fn report_flags(rep: &crate::maxitive::PropertyReport) -> Result<Vec<(String, bool)>> {
    let v = serde_json::to_value(rep).map_err(|e| Error::Model(e.to_string()))?;
    Ok(v.as_object()
        .into_iter()
        .flatten()
        .filter_map(|(k, v)| v.as_bool().map(|b| (k.clone(), b)))
        .collect())
}

fn mx_report(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_report");
    for i in 0..90 {
        let k = r.random_range(2..=4);
        let w = match i % 3 {
            0 => SetFunction::tabulate(&fx::maxitive(&mut r, k, 0.2, 0.1))?,
            1 => fx::non_maxitive(&mut r, k),
            // unconstrained tables, mostly non-monotone
            _ => SetFunction::from_fn(k, |b| if b.is_empty() { ExtReal::ZERO } else { ExtReal::of(((b.bits() * 7 + i) % 5) as f64) })?,
        };
        let rep = classify(&w)?;
        for (name, value) in report_flags(&rep)? {
            t.check(value || rep.witnesses.contains_key(name.as_str()), || format!("{name} false without witness"));
        }
        t.check(rep.monotone == monotone_violation(&w).is_none(), || "monotone".into());
        t.check(rep.maxitive == maxitivity_violation(&w).is_none(), || "maxitive".into());
        t.check(rep.null_additive == null_additivity_violation(&w).is_none(), || "null_additive".into());
        t.check(rep.sigma_principal == sigma_principal_violation(&w)?.is_none(), || "sigma_principal".into());
        if let Some(wit) = rep.witnesses.get("maxitive") {
            let (a, b) = (wit.sets[0], wit.sets[1]);
            t.check(w.eval(a.union(b)) != w.eval(a).max(w.eval(b)), || format!("bad maxitivity witness {a:?} {b:?}"));
        }
    }
    t.done()
}

fn mx_max_attained(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_max_attained");
    for _ in 0..200 {
        let k = r.random_range(1..=8);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        let n = r.random_range(1..=5);
        let family: Vec<AtomSet> = (0..n).map(|_| fx::set(&mut r, k)).collect();
        let union = family.iter().fold(AtomSet::EMPTY, |acc, &b| acc.union(b));
        let top = nu.eval(union);
        let m = family.iter().map(|&b| nu.eval(b)).max().unwrap_or(ExtReal::ZERO);
        t.check(top == m && family.iter().any(|&b| nu.eval(b) == top), || format!("{nu:?} on {family:?}"));
    }
    t.done()
}

fn mx_exhaustive_optimal(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_exhaustive_optimal");
    for i in 0..60 {
        let k = r.random_range(2..=5);
        let w = if i % 2 == 0 { SetFunction::tabulate(&fx::maxitive(&mut r, k, 0.2, 0.1))? } else { fx::non_maxitive(&mut r, k) };
        let rep = classify(&w)?;
        if rep.maxitive && rep.monotone && rep.null_additive {
            t.check(rep.exhaustive == rep.optimal, || format!("{w:?}"));
        }
        t.check(rep.exhaustive, || format!("{w:?} not exhaustive"));
    }
    t.done()
}

fn mx_alternation(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_alternation");
    for _ in 0..30 {
        let k = r.random_range(1..=4);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.0);
        let rep = choquet_alternating(&nu, 4)?;
        t.check(rep.ok, || format!("{nu:?}: {:?}", rep.witness));
    }
    t.done()
}

fn mx_esssup(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_esssup");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let f = fx::function(&mut r, k, 0.1);
        let b = fx::set(&mut r, k);
        let tau = SetFunction::tabulate(&MaxitiveMeasure::delta_sharp(k))?;
        let expected = b.atoms().map(|a| f.values()[a]).max().unwrap_or(ExtReal::ZERO);
        t.check(essential_supremum(&tau, &f, b)? == expected, || format!("{f:?} on {b:?}"));
    }
    t.done()
}

fn mx_atoms(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_atoms");
    for _ in 0..100 {
        let k = r.random_range(1..=7);
        let nu = fx::maxitive(&mut r, k, 0.3, 0.1);
        let d = atom_decomposition(&nu)?;
        let mut union = AtomSet::EMPTY;
        for &h in &d.atoms {
            t.check(union.is_disjoint(h), || format!("overlapping atoms in {:?}", d.atoms));
            t.check(is_nu_atom(&nu, h), || format!("{h:?} is not a ν-atom"));
            union = union.union(h);
        }
        t.check(nu.eval(d.residual_null).is_zero(), || format!("ν(N) > 0 for {nu:?}"));
        for b in all_sets(k) {
            let m = d.atoms.iter().map(|&h| nu.eval(b.intersection(h))).max().unwrap_or(ExtReal::ZERO);
            t.check(nu.eval(b) == m, || format!("{nu:?} on {b:?}"));
        }
    }
    t.done()
}

fn mx_variation(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "mx_variation");
    for _ in 0..40 {
        let k = r.random_range(1..=7);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.05);
        let rep = disjoint_variation(&nu)?;
        let d = atom_decomposition(&nu)?;
        let sum = d.atoms.iter().fold(ExtReal::ZERO, |acc, &h| acc.add(nu.eval(h)));
        t.check(rep.brute_force.approx_eq(sum) && rep.value.approx_eq(sum), || format!("{nu:?}: {rep:?} vs {sum}"));
    }
    t.done()
}

fn chain_ok(m: &AdditiveMeasure) -> Result<Option<String>> {
    let rep = implications_check(m)?;
    Ok((!rep.consistent()).then(|| format!("{:?}: {:?}", m.masses(), rep.violations)))
}

fn mx_chain(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let fixtures = [
        vec![1.0, 2.0, 3.0],
        vec![0.0, 0.0],
        vec![f64::INFINITY, 1.0],
        vec![f64::INFINITY, 0.0, f64::INFINITY],
        vec![0.5, 0.0, 0.25, 0.25],
    ];
    for masses in fixtures {
        let m = AdditiveMeasure::new(masses.iter().map(|&v| ExtReal::of(v)).collect());
        let w = chain_ok(&m)?;
        t.check(w.is_none(), || w.unwrap_or_default());
    }
    t.done()
}

// ---- integral ----

fn int_evaluators(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_evaluators");
    for _ in 0..300 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=5);
        let f = fx::function(&mut r, k, 0.1);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        let b = fx::set(&mut r, k);
        let res = idempotent_integral(&op, &f, &nu, b)?;
        let oracle = gerritse_integral(&op, &f, &nu, b)?;
        t.check(res.value.approx_eq(oracle), || format!("{} {f:?} {nu:?} {b:?}", op.label()));
        let ts: BTreeSet<ExtReal> = res.threshold_trace.iter().map(|p| p.t).collect();
        let covered = ts.contains(&ExtReal::ZERO) && b.atoms().all(|a| ts.contains(&f.value(a)));
        t.check(covered, || format!("trace {ts:?} for {f:?} on {b:?}"));
    }
    t.done()
}

fn int_homogeneity(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_homogeneity");
    for _ in 0..200 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=6);
        let f = fx::function(&mut r, k, 0.1);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        let s = fx::value(&mut r, 0.1, 0.1);
        let full = AtomSet::full(k);
        let lhs = sweep_integral(&op, &f.map(|v| op.eval(s, v)), &nu, full);
        let rhs = op.eval(s, sweep_integral(&op, &f, &nu, full));
        t.check(lhs.approx_eq(rhs), || format!("{} r={s} {f:?} {nu:?}", op.label()));
    }
    t.done()
}

fn int_sigma_maxitivity(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_sigma_maxitivity");
    for _ in 0..200 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=6);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        let n = r.random_range(1..=4);
        let fs: Vec<MeasurableFn> = (0..n).map(|_| fx::function(&mut r, k, 0.1)).collect();
        let sup = fs.iter().skip(1).try_fold(fs[0].clone(), |acc, g| acc.sup(g))?;
        let full = AtomSet::full(k);
        let lhs = sweep_integral(&op, &sup, &nu, full);
        let rhs = fs.iter().map(|g| sweep_integral(&op, g, &nu, full)).max().unwrap_or(ExtReal::ZERO);
        t.check(lhs.approx_eq(rhs), || format!("{} {fs:?} {nu:?}", op.label()));
    }
    t.done()
}

fn int_domain_maxitivity(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_domain_maxitivity");
    for _ in 0..30 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=4);
        let f = fx::function(&mut r, k, 0.1);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        for a in all_sets(k) {
            for b in all_sets(k) {
                let lhs = sweep_integral(&op, &f, &nu, a.union(b));
                let rhs = sweep_integral(&op, &f, &nu, a).max(sweep_integral(&op, &f, &nu, b));
                t.check(lhs.approx_eq(rhs), || format!("{} {f:?} {nu:?} {a:?} {b:?}", op.label()));
            }
        }
    }
    t.done()
}

fn int_lp_collapse(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_lp_collapse");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let f = fx::function(&mut r, k, 0.05);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.05);
        for p in [2.0, 3.0, 10.0] {
            let full = AtomSet::full(k);
            let lhs = shilkret(&f.map(|v| v.powf(p)), &nu, full).powf(1.0 / p);
            let rhs = shilkret(&f, &nu.map(|v| v.powf(1.0 / p)), full);
            t.check(lhs.approx_eq_tol(rhs, 1e-9), || format!("p={p} {f:?} {nu:?}: {lhs} vs {rhs}"));
        }
    }
    t.done()
}

fn int_ky_fan(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_ky_fan");
    for _ in 0..200 {
        let k = r.random_range(1..=6);
        let f = fx::function(&mut r, k, 0.0);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.1);
        let zero = MeasurableFn::constant(k, ExtReal::ZERO);
        let lhs = sugeno(&f, &nu, AtomSet::full(k));
        let rhs = ky_fan_distance(&nu, &f, &zero)?;
        t.check(lhs.approx_eq(rhs), || format!("{f:?} {nu:?}: {lhs} vs {rhs}"));
    }
    t.done()
}

fn int_esssup_composition(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "int_esssup_composition");
    for _ in 0..200 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=6);
        let tau = fx::maxitive(&mut r, k, 0.3, 0.1);
        let f = fx::function(&mut r, k, 0.1);
        let g = fx::function(&mut r, k, 0.1);
        let full = AtomSet::full(k);
        let tau_f = essential_supremum_measure(&tau, &f);
        let lhs = sweep_integral(&op, &g, &tau_f, full);
        let gf = g.zip_with(&f, |a, b| op.eval(a, b))?;
        let rhs = sweep_integral(&op, &gf, &delta_for(&op, &tau), full);
        t.check(lhs.approx_eq(rhs), || format!("{} τ={tau:?} f={f:?} g={g:?}", op.label()));
    }
    t.done()
}

// ---- radon_nikodym ----

fn rn_relations(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_relations");
    for i in 0..200 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=5);
        let nu = fx::maxitive(&mut r, k, 0.3, 0.1);
        let two_valued = i % 2 == 0;
        let tau = if two_valued {
            let c = fx::value(&mut r, 0.0, 0.2);
            MaxitiveMeasure::new((0..k).map(|_| if r.random_bool(0.3) { ExtReal::ZERO } else { c }).collect())
        } else {
            fx::maxitive(&mut r, k, 0.3, 0.1)
        };
        let rep = abs_continuity(&op, &nu, &SetFunction::tabulate(&tau)?)?;
        t.check(!rep.strong || rep.weak, || format!("strong but not weak: {nu:?} {tau:?}"));
        if two_valued && op.name() == OpName::Times {
            t.check(rep.odot == rep.weak, || format!("two-valued τ {tau:?}, ν {nu:?}"));
        }
    }
    t.done()
}

fn partition_infimum(nu: &impl SetFn, m: &AdditiveMeasure, b: AtomSet) -> ExtReal {
    if b.is_empty() {
        return ExtReal::ZERO;
    }
    set_partitions(b)
        .iter()
        .map(|parts| parts.iter().fold(ExtReal::ZERO, |acc, &p| acc.add(nu.eval(p).mul(m.eval(p)))))
        .min()
        .unwrap_or(ExtReal::ZERO)
}

fn essential_pair(r: &mut ChaCha8Rng, k: usize, inf: f64) -> (MaxitiveMeasure, AdditiveMeasure) {
    let m = fx::additive(r, k);
    let nu = MaxitiveMeasure::new(
        (0..k)
            .map(|a| if m.mass(a).is_zero() { ExtReal::ZERO } else { fx::value(r, 0.0, inf) })
            .collect(),
    );
    (nu, m)
}

fn rn_envelope(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_envelope");
    for _ in 0..60 {
        let k = r.random_range(1..=5);
        let (nu, m) = essential_pair(&mut r, k, 0.0);
        let env = bcj_density(&nu, &m)?;
        let m_nu = caratheodory_envelope(&nu, &m)?;
        let additive = AdditiveMeasure::new((0..k).map(|a| m_nu.eval(AtomSet::singleton(a))).collect());
        for b in all_sets(k) {
            let oracle = partition_infimum(&nu, &m, b);
            t.check(m_nu.eval(b).approx_eq(oracle), || format!("m_ν({b:?}) = {} vs {oracle}", m_nu.eval(b)));
            t.check(m_nu.eval(b).approx_eq(additive.eval(b)), || format!("m_ν not additive on {b:?}"));
            t.check(!m.eval(b).is_zero() || m_nu.eval(b).is_zero(), || format!("m_ν not ≪ m on {b:?}"));
        }
        for a in 0..k {
            let s = AtomSet::singleton(a);
            let expected = if m.mass(a).is_zero() { ExtReal::ZERO } else { ExtReal::clamped(m_nu.eval(s).get() / m.mass(a).get()) };
            t.check(env.density.value(a).approx_eq(expected), || format!("density at atom {a}"));
        }
    }
    t.done()
}

fn admissible(r: &mut ChaCha8Rng, op: &PseudoMul, k: usize) -> (MaxitiveMeasure, MaxitiveMeasure) {
    let tau = fx::maxitive(r, k, 0.2, 0.0);
    let nu = random_dominated(op, &tau, r);
    (nu, tau)
}

fn rn_round_trip(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_round_trip");
    for _ in 0..200 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=6);
        let (nu, tau) = admissible(&mut r, &op, k);
        let c = rn_density(&op, &nu, &tau)?;
        let back = measure_with_density(&op, &c, &tau)?;
        let bad = set_eq(&back, &nu);
        t.check(bad.is_none(), || format!("{} ν={nu:?} τ={tau:?} at {bad:?}", op.label()));
    }
    t.done()
}

fn rn_methods_agree(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_methods_agree");
    for _ in 0..100 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=5);
        let (nu, tau) = admissible(&mut r, &op, k);
        let c = rn_density(&op, &nu, &tau)?;
        let assoc = density_from_associated(&op, &MaxitiveMeasure::delta_sharp(k), &nu.density(), &tau.density())?;
        t.check(ae_equal(&tau, &c, &assoc.density)?, || format!("{} ν={nu:?} τ={tau:?}", op.label()));
        let (nu2, m) = essential_pair(&mut r, k, 0.0);
        let bcj = bcj_density(&nu2, &m)?;
        let delta_m = delta_measure(&m);
        let c2 = rn_density(&PseudoMul::times(), &nu2, &delta_m)?;
        t.check(ae_equal(&delta_m, &bcj.density, &c2)?, || format!("bcj ν={nu2:?} m={:?}", m.masses()));
    }
    t.done()
}

fn rn_autocontinuity(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_autocontinuity");
    let times = PseudoMul::times();
    for _ in 0..200 {
        let k = r.random_range(1..=6);
        let nu = fx::maxitive(&mut r, k, 0.2, 0.2);
        let res = rn_density(&times, &nu, &delta_measure(&nu));
        t.check(res.is_ok(), || format!("{nu:?}: {res:?}"));
    }
    t.done()
}

fn rn_cardinal(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_cardinal");
    let times = PseudoMul::times();
    for _ in 0..200 {
        let k = r.random_range(1..=5);
        let nu = fx::maxitive(&mut r, k, 0.3, 0.1);
        let tau = fx::maxitive(&mut r, k, 0.3, 0.1);
        let rep = abs_continuity(&times, &nu, &SetFunction::tabulate(&tau)?)?;
        t.check(rep.weak == rep.strong, || format!("ν={nu:?} τ={tau:?}"));
    }
    t.done()
}

fn reconstruct(m_nu: &impl SetFn, m: &AdditiveMeasure, b: AtomSet) -> ExtReal {
    b.subsets()
        .filter(|&s| !m.eval(s).is_zero())
        .map(|s| ExtReal::clamped(m_nu.eval(s).get() / m.eval(s).get()))
        .max()
        .unwrap_or(ExtReal::ZERO)
}

fn rn_reconstruction(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "rn_reconstruction");
    for i in 0..80 {
        let k = r.random_range(1..=5);
        let (nu, m) = essential_pair(&mut r, k, if i % 4 == 0 { 0.3 } else { 0.0 });
        let env = bcj_density(&nu, &m)?;
        let target = match &env.arctan_density {
            None => nu.clone(),
            Some(_) => nu.map(|v| ExtReal::clamped(v.get().atan())),
        };
        for b in all_sets(k) {
            let rec = reconstruct(&env.m_nu, &m, b);
            t.check(rec.approx_eq_tol(target.eval(b), 1e-9), || format!("ν={nu:?} m={:?} on {b:?}", m.masses()));
        }
        for a in 0..k {
            t.check(env.density.value(a) == nu.value(a) || env.density.value(a).approx_eq(nu.value(a)), || {
                format!("density {:?} vs ν {nu:?}", env.density)
            });
        }
    }
    t.done()
}

// ---- possibility ----

fn poss_space(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "poss_space");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let pi = fx::possibility(&mut r, k);
        let p = PossibilitySpace::new(pi.clone())?;
        t.check(p.pi().eval(AtomSet::full(k)) == ExtReal::ONE, || format!("{pi:?}"));
        t.check(sigma_principal_violation(p.pi())?.is_none(), || format!("{pi:?} not σ-principal"));
        let scaled = pi.map(|v| v.mul(ExtReal::of(0.5)));
        t.check(PossibilitySpace::new(scaled).is_err(), || "non-normed Π accepted".into());
    }
    t.done()
}

fn poss_subalgebra(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "poss_subalgebra");
    for _ in 0..100 {
        let k = r.random_range(1..=7);
        let f = fx::subalgebra(&mut r, k);
        let union = f.blocks().iter().fold(AtomSet::EMPTY, |acc, &b| {
            t.check(acc.is_disjoint(b) && !b.is_empty(), || format!("{:?}", f.blocks()));
            acc.union(b)
        });
        t.check(union == AtomSet::full(k), || format!("{:?} does not cover", f.blocks()));
        let vals = fx::values(&mut r, f.blocks().len(), 0.1, 0.1);
        let y = f.lift(k, &vals);
        t.check(f.is_measurable(&y), || format!("lift {y:?} not measurable"));
        if let Some(&b) = f.blocks().iter().find(|b| b.len() >= 2) {
            let a = b.first().unwrap_or(0);
            let mut v = y.values().to_vec();
            v[a] = v[a].add(ExtReal::ONE);
            if v[a] != y.value(a) {
                t.check(!f.is_measurable(&MeasurableFn::new(v)), || "non-constant function measurable".into());
            }
        }
    }
    t.done()
}

fn poss_defining(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "poss_defining");
    for _ in 0..150 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=6);
        let p = PossibilitySpace::new(fx::possibility(&mut r, k))?;
        let x = fx::function(&mut r, k, 0.1);
        let f = fx::subalgebra(&mut r, k);
        let y = conditional(&op, &p, &x, &f)?.y;
        t.check(f.is_measurable(&y), || format!("Y = {y:?} not 𝓕-measurable"));
        for a in f.sets() {
            let lhs = gerritse_integral(&op, &x, p.pi(), a)?;
            let rhs = gerritse_integral(&op, &y, p.pi(), a)?;
            t.check(lhs.approx_eq(rhs), || format!("{} Π={:?} X={x:?} A={a:?}", op.label(), p.pi()));
        }
    }
    t.done()
}

fn poss_tower(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "poss_tower");
    for _ in 0..150 {
        let op = fx::op(&mut r);
        let k = r.random_range(1..=6);
        let p = PossibilitySpace::new(fx::possibility(&mut r, k))?;
        let x = fx::function(&mut r, k, 0.1);
        let f = fx::subalgebra(&mut r, k);
        let g = fx::coarsening(&mut r, k, &f);
        let y_f = conditional(&op, &p, &x, &f)?.y;
        let lhs = conditional(&op, &p, &y_f, &g)?.y;
        let rhs = conditional(&op, &p, &x, &g)?.y;
        t.check(ae_equal(p.pi(), &lhs, &rhs)?, || format!("{} Π={:?} X={x:?} 𝓕={:?} 𝓖={:?}", op.label(), p.pi(), f.blocks(), g.blocks()));
    }
    t.done()
}

fn poss_law(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "poss_law");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let k2 = r.random_range(1..=4);
        let p = PossibilitySpace::new(fx::possibility(&mut r, k))?;
        let map: Vec<usize> = (0..k).map(|_| r.random_range(0..k2)).collect();
        let law = law_of_map(&p, &map, k2)?;
        t.check(law.is_normed(), || format!("law {law:?} of {map:?}"));
    }
    t.done()
}

fn poss_lp(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "poss_lp");
    let ps = [1.0, 2.0, 5.0, 10.0, 50.0, 200.0];
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let m = fx::probability(&mut r, k);
        let x = fx::function(&mut r, k, 0.0);
        let f = fx::subalgebra(&mut r, k);
        let rep = lp_limit_conditional(&m, &x, &f, &ps)?;
        let worst: Vec<f64> = rep.rows.iter().map(|row| row.gaps.iter().copied().fold(0.0, f64::max)).collect();
        let monotone = worst.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        t.check(rep.monotone && monotone, || format!("gaps {worst:?} for X={x:?}"));
    }
    t.done()
}

// ---- supmeasure_sim ----

fn sim_control(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = ControlMeasure::new(vec![0.5, 1.5, 0.0])?;
    t.check(m.total() == 2.0 && m.total().is_finite(), || format!("total {}", m.total()));
    for bad in [vec![-1.0], vec![f64::INFINITY], vec![f64::NAN]] {
        t.check(ControlMeasure::new(bad.clone()).is_err(), || format!("{bad:?} accepted"));
    }
    t.done()
}

fn sim_points(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = ControlMeasure::new(vec![0.25, 0.75])?;
    let (p, eps, n) = (2.0f64, 0.1f64, 2000u64);
    let lambda = m.total() * eps.powf(-p);
    for scheme in [PoissonScheme::Iid, PoissonScheme::Ordered] {
        let mode = SampleMode::Poisson { epsilon: eps, scheme };
        let mut total = 0u64;
        for stream in 0..n {
            let s = sample_supmeasure(&m, p, mode, seed, stream)?;
            let cfg = s.points.ok_or_else(|| Error::Model("no point configuration".into()))?;
            t.check(cfg.points.iter().all(|pt| pt.x > eps), || format!("point below ε in stream {stream}"));
            total += cfg.count;
        }
        let mean = total as f64 / n as f64;
        let sd = (lambda / n as f64).sqrt();
        t.check((mean - lambda).abs() < 4.0 * sd, || format!("{scheme:?}: mean count {mean} vs {lambda}"));
    }
    t.done()
}

fn sim_maxitive(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = ControlMeasure::new(vec![0.5, 1.0, 0.25, 2.0])?;
    for (i, mode) in [SampleMode::Exact, SampleMode::poisson(0.05)].into_iter().enumerate() {
        for stream in 0..25 {
            let s = sample_supmeasure(&m, 2.0, mode, seed, stream + 100 * i as u64)?;
            let mm = s.measure();
            t.check(mm.eval(AtomSet::EMPTY).is_zero(), || "M(∅) ≠ 0".into());
            let table = SetFunction::tabulate(&mm)?;
            t.check(classify(&table)?.completely_maxitive, || format!("{:?}", s.values));
        }
    }
    t.done()
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Correlation is taken after the probability-integral transform
/// `x ↦ exp(−m(B) x^{−p})`, since Fréchet(2) values have no variance.
fn sim_independence(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let masses = vec![1.0, 0.5, 2.0];
    let m = ControlMeasure::new(masses.clone())?;
    let p = 2.0;
    let n = 100_000;
    let draws = sample_many(&m, p, SampleMode::Exact, n, seed, 0)?;
    let (b1, b2) = (AtomSet::from_atoms([0]), AtomSet::from_atoms([1, 2]));
    let pit = |b: AtomSet, row: &Vec<f64>| {
        let x = b.atoms().map(|a| row[a]).fold(0.0, f64::max);
        (-m.measure(b) * x.powf(-p)).exp()
    };
    let u1: Vec<f64> = draws.iter().map(|row| pit(b1, row)).collect();
    let u2: Vec<f64> = draws.iter().map(|row| pit(b2, row)).collect();
    let rho = pearson(&u1, &u2);
    t.check(rho.abs() < 3.0 / (n as f64).sqrt(), || format!("correlation {rho}"));
    t.done()
}

fn sim_determinism(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = ControlMeasure::new(vec![1.0, 0.5])?;
    for mode in [SampleMode::Exact, SampleMode::poisson(0.01)] {
        for stream in 0..10 {
            let a = sample_supmeasure(&m, 2.0, mode, seed, stream)?;
            let b = sample_supmeasure(&m, 2.0, mode, seed, stream)?;
            let same = a.values.iter().zip(&b.values).all(|(x, y)| x.get().to_bits() == y.get().to_bits());
            t.check(same && a.points == b.points, || format!("stream {stream} differs"));
        }
    }
    t.done()
}

// ---- classical_bridge ----

fn cl_additive(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "cl_additive");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let m = fx::additive(&mut r, k);
        let v = m.additivity_violation()?;
        t.check(v.is_none(), || format!("{:?} at {v:?}", m.masses()));
    }
    t.done()
}

fn cl_delta(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "cl_delta");
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let m = fx::probability(&mut r, k);
        let d = delta_measure(&m);
        t.check(PossibilitySpace::new(d.clone()).is_ok(), || format!("δ = {d:?}"));
    }
    t.done()
}

fn cl_chain(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    for s in 0..1000 {
        let mut r = fx::rng(seed, s);
        let k = r.random_range(1..=4);
        let m = AdditiveMeasure::new(fx::values(&mut r, k, 0.25, 0.15));
        let w = chain_ok(&m)?;
        t.check(w.is_none(), || w.unwrap_or_default());
    }
    t.done()
}

// ---- cli ----

fn cli_round_trip(seed: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut r = rng(seed, "cli_round_trip");
    for _ in 0..50 {
        let k = r.random_range(1..=5);
        let labels: Vec<String> = (0..k).map(|i| format!("e{i}")).collect();
        let space = Space::discrete(&labels)?;
        let measures = [
            Measure::Maxitive(fx::maxitive(&mut r, k, 0.2, 0.1)),
            Measure::Additive(fx::additive(&mut r, k)),
            Measure::Table(fx::non_maxitive(&mut r, k.max(2))),
        ];
        for m in measures {
            let sp = if m.atom_count() == k { space.clone() } else { Space::numbered(m.atom_count()) };
            let back = parse_measure(&sp, &m.to_json(&sp))?;
            t.check(back == m, || format!("{m:?} came back as {back:?}"));
        }
        let f = fx::function(&mut r, k, 0.1);
        t.check(parse_function(&space, &function_json(&space, &f))? == f, || format!("{f:?}"));
        let spec = SpaceSpec::of(&space);
        t.check(spec.build()? == space, || "space spec".into());
    }
    t.done()
}

fn cli_validation(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let doc = serde_json::json!({
        "space": {"ground": ["a", "b"]},
        "measures": {"w": {"type": "table", "values": {"0": 2, "1": 1, "0+1": 1}}},
        "functions": {"f": [1, 2]},
        "subalgebras": {"F": "a+b"}
    });
    t.check(matches!(ModelFile::parse(&doc, true), Err(Error::NotMonotone(_))), || "invalid table accepted".into());
    let m = ModelFile::parse(&doc, false)?;
    t.check(m.measures.contains_key("w") && m.functions.contains_key("f") && m.subalgebras.contains_key("F"), || "names did not resolve".into());
    let unknown = serde_json::json!({"space": {"ground": ["a"]}, "functions": {"f": {"atom_values": {"z": 1}}}});
    t.check(matches!(ModelFile::parse(&unknown, true), Err(Error::UnknownElement(_))), || "unknown label accepted".into());
    t.done()
}

fn cli_manifest(_: u64) -> Result<Outcome> {
    let mut t = Tally::default();
    let missing = unmapped_modules();
    t.check(missing.is_empty(), || format!("unmapped modules {missing:?}"));
    let mut ids = BTreeSet::new();
    for i in MANIFEST {
        t.check(ids.insert(i.id), || format!("duplicate id {}", i.id));
        t.check(MODULES.contains(&i.module), || format!("unknown module {}", i.module));
    }
    t.done()
}
