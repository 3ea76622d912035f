//! The idempotent `⊙`-integral `∫_B f ⊙ dν = ⊕_{t ≥ 0} t ⊙ ν(B ∩ {f > t})`.
//!
//! Two evaluators are provided. The threshold sweep visits the finitely many
//! distinct values of `f`; the subset evaluator takes
//! `⊕_{A ⊆ B} (inf_A f) ⊙ ν(A)` over all measurable `A` and serves as an
//! oracle for the sweep.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::maxitive::{essential_supremum_unchecked, MaxitiveMeasure};
use crate::pseudo_mul::PseudoMul;
use crate::space::{check_len, ensure_budget, AtomSet, MeasurableFn, SetFn, EXHAUSTIVE_BUDGET};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub t: ExtReal,
    pub level: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: ExtReal,
    /// No disagreement between the evaluators (vacuous when `gerritse` is
    /// `None`).
    pub evaluator_agreement: bool,
    pub gerritse: Option<ExtReal>,
    /// `(t, ν(B ∩ {f > t}))` for `t = 0` and every value of `f` on `B`.
    pub threshold_trace: Vec<ThresholdPoint>,
}

fn thresholds(f: &MeasurableFn, b: AtomSet) -> Vec<ExtReal> {
    let mut ts: Vec<ExtReal> = b.atoms().map(|a| f.value(a)).collect();
    ts.push(ExtReal::ZERO);
    ts.sort();
    ts.dedup();
    ts
}

/// Threshold-sweep evaluation. At each candidate `v` both `{f > v}` and
/// `{f ≥ v}` are used, the latter giving the left limit
/// `lim_{t↑v} t ⊙ ν(f > t)`.
pub fn sweep_integral(op: &PseudoMul, f: &MeasurableFn, nu: &impl SetFn, b: AtomSet) -> ExtReal {
    thresholds(f, b)
        .into_iter()
        .map(|v| {
            let strict = op.eval(v, nu.eval(b.intersection(f.level_set(v))));
            let closed = op.eval(v, nu.eval(b.intersection(f.level_set_ge(v))));
            strict.max(closed)
        })
        .max()
        .unwrap_or(ExtReal::ZERO)
}

/// `⊕_{A ⊆ B} (inf_A f) ⊙ ν(A)` over every measurable `A ⊆ B`.
pub fn gerritse_integral(op: &PseudoMul, f: &MeasurableFn, nu: &impl SetFn, b: AtomSet) -> Result<ExtReal> {
    ensure_budget("subset integral evaluator", nu.atom_count(), EXHAUSTIVE_BUDGET)?;
    Ok(b.subsets()
        .skip(1)
        .map(|a| op.eval(f.inf_on(a), nu.eval(a)))
        .max()
        .unwrap_or(ExtReal::ZERO))
}

/// Both evaluators, cross-checked. Above the exhaustive budget only the sweep
/// runs.
pub fn idempotent_integral(
    op: &PseudoMul,
    f: &MeasurableFn,
    nu: &impl SetFn,
    b: AtomSet,
) -> Result<IntegralResult> {
    check_len(nu.atom_count(), f.len())?;
    let value = sweep_integral(op, f, nu, b);
    let threshold_trace = thresholds(f, b)
        .into_iter()
        .map(|t| ThresholdPoint {
            t,
            level: nu.eval(b.intersection(f.level_set(t))),
        })
        .collect();
    let gerritse = if nu.atom_count() <= EXHAUSTIVE_BUDGET {
        let g = gerritse_integral(op, f, nu, b)?;
        if !g.approx_eq(value) {
            return Err(Error::EvaluatorMismatch(format!(
                "threshold sweep gives {value}, subset evaluator gives {g}"
            )));
        }
        Some(g)
    } else {
        None
    };
    Ok(IntegralResult {
        value,
        evaluator_agreement: true,
        gerritse,
        threshold_trace,
    })
}

pub fn shilkret(f: &MeasurableFn, nu: &impl SetFn, b: AtomSet) -> ExtReal {
    sweep_integral(&PseudoMul::times(), f, nu, b)
}

pub fn sugeno(f: &MeasurableFn, nu: &impl SetFn, b: AtomSet) -> ExtReal {
    sweep_integral(&PseudoMul::min(), f, nu, b)
}

/// `1_B`: the unit `1_⊙` on `B`, `0` elsewhere.
pub fn indicator(op: &PseudoMul, k: usize, set: AtomSet) -> MeasurableFn {
    MeasurableFn::indicator(k, set, op.identity())
}

/// Ky Fan distance `inf{t > 0 : ν(|f − g| > t) ≤ t}`.
///
/// `t ↦ ν(|f − g| > t)` is constant on each `[uᵢ, uᵢ₊₁)` between consecutive
/// values of `|f − g|`, so the infimum on that piece is `max(uᵢ, φᵢ)` when
/// this is below `uᵢ₊₁`.
pub fn ky_fan_distance(nu: &impl SetFn, f: &MeasurableFn, g: &MeasurableFn) -> Result<ExtReal> {
    check_len(nu.atom_count(), f.len())?;
    let h = MeasurableFn::new(
        f.values()
            .iter()
            .zip(g.values())
            .map(|(&x, &y)| x.abs_diff(y))
            .collect(),
    );
    check_len(f.len(), g.len())?;
    if let Some(a) = (0..h.len()).find(|&a| h.value(a).is_infinite()) {
        return Err(Error::InfiniteDifference(a));
    }
    let us = thresholds(&h, AtomSet::full(h.len()));
    let mut best = *us.last().unwrap();
    for w in us.windows(2) {
        let phi = nu.eval(h.level_set(w[0]));
        let cand = w[0].max(phi);
        if cand < w[1] {
            best = best.min(cand);
        }
    }
    Ok(best)
}

/// `B ↦ ∫_B c ⊙ dτ` in atom form `c(a) ⊙ τ(a)`, verified against the
/// integral on every set within the budget.
pub fn measure_with_density(op: &PseudoMul, c: &MeasurableFn, tau: &MaxitiveMeasure) -> Result<MaxitiveMeasure> {
    let k = tau.atom_count();
    check_len(k, c.len())?;
    let nu = MaxitiveMeasure::new((0..k).map(|a| op.eval(c.value(a), tau.value(a))).collect());
    if k <= EXHAUSTIVE_BUDGET {
        for b in crate::space::all_sets(k) {
            let v = sweep_integral(op, c, tau, b);
            if !v.approx_eq(nu.eval(b)) {
                return Err(Error::OracleMismatch(format!(
                    "integral {v} differs from the atom form {} on {b:?}",
                    nu.eval(b)
                )));
            }
        }
    }
    Ok(nu)
}

/// `τ_f(B)`: the `τ`-essential supremum of `f` over `B`, as a measure.
pub fn essential_supremum_measure(tau: &impl SetFn, f: &MeasurableFn) -> MaxitiveMeasure {
    MaxitiveMeasure::new(
        (0..f.len())
            .map(|a| essential_supremum_unchecked(tau, f, AtomSet::singleton(a)))
            .collect(),
    )
}

/// `(∫ f^p × dν)^{1/p}`.
pub fn lp_norm(f: &MeasurableFn, nu: &impl SetFn, p: f64) -> ExtReal {
    let fp = f.map(|v| v.powf(p));
    shilkret(&fp, nu, AtomSet::full(f.len())).powf(1.0 / p)
}
