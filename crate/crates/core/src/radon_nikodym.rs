//! Absolute continuity and Radon–Nikodym densities between maxitive measures.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::AdditiveMeasure;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::integral::{essential_supremum_measure, sweep_integral};
use crate::maxitive::{delta_measure, finiteness_suite, MaxitiveMeasure, Witness};
use crate::pseudo_mul::{OpName, PseudoMul};
use crate::space::{all_sets, check_len, ensure_budget, AtomSet, MeasurableFn, SetFn, SetFunction, EXHAUSTIVE_BUDGET};

/// Which reading of `ν ≪_⊙ τ` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OdotDefinition {
    /// `ν(B) ≤ ∞ ⊙ τ(B)` for every `B`.
    Unconditional,
    /// The same inequality, required only where `τ(B)` is `⊙`-finite.
    FiniteOnly,
}

/// First set violating `ν ≪_⊙ τ`.
pub fn odot_violation(op: &PseudoMul, nu: &impl SetFn, tau: &impl SetFn, def: OdotDefinition) -> Option<AtomSet> {
    all_sets(nu.atom_count()).find(|&b| {
        let t = tau.eval(b);
        let applies = def == OdotDefinition::Unconditional || op.is_odot_finite(t);
        applies && !op.dominates(nu.eval(b), t)
    })
}

/// First set with `τ(B) = 0 < ν(B)`.
pub fn weak_violation(nu: &impl SetFn, tau: &impl SetFn) -> Option<AtomSet> {
    all_sets(nu.atom_count()).find(|&b| tau.eval(b).is_zero() && !nu.eval(b).is_zero())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbsContReport {
    pub weak: bool,
    pub odot: bool,
    /// `≪_⊙` in the reading that only constrains `⊙`-finite `τ(B)`.
    pub odot_restricted: bool,
    pub strong: bool,
    pub witnesses: BTreeMap<&'static str, Witness>,
}

pub fn abs_continuity(op: &PseudoMul, nu: &MaxitiveMeasure, tau: &SetFunction) -> Result<AbsContReport> {
    let k = nu.atom_count();
    check_len(k, tau.atom_count())?;
    ensure_budget("absolute continuity", k, EXHAUSTIVE_BUDGET)?;
    let mut witnesses = BTreeMap::new();
    let weak = match weak_violation(nu, tau) {
        None => true,
        Some(b) => {
            witnesses.insert("weak", Witness { sets: vec![b], note: "τ(B) = 0 < ν(B)".into() });
            false
        }
    };
    let odot = match odot_violation(op, nu, tau, OdotDefinition::Unconditional) {
        None => true,
        Some(b) => {
            witnesses.insert("odot", Witness { sets: vec![b], note: "ν(B) > ∞ ⊙ τ(B)".into() });
            false
        }
    };
    let odot_restricted = odot_violation(op, nu, tau, OdotDefinition::FiniteOnly).is_none();
    let strong = match rn_density(&PseudoMul::times(), nu, &delta_measure(tau)) {
        Ok(_) => true,
        Err(e) => {
            witnesses.insert(
                "strong",
                Witness { sets: vec![], note: format!("no density with respect to δ_τ: {e}") },
            );
            false
        }
    };
    Ok(AbsContReport { weak, odot, odot_restricted, strong, witnesses })
}

/// Checks `ν(B) = ∫_B c ⊙ dτ` on every set (atom form above the budget).
pub fn verify_density(op: &PseudoMul, c: &MeasurableFn, nu: &impl SetFn, tau: &impl SetFn) -> Option<AtomSet> {
    let k = nu.atom_count();
    if k <= EXHAUSTIVE_BUDGET {
        all_sets(k).find(|&b| !sweep_integral(op, c, tau, b).approx_eq(nu.eval(b)))
    } else {
        (0..k)
            .map(AtomSet::singleton)
            .find(|&a| !sweep_integral(op, c, tau, a).approx_eq(nu.eval(a)))
    }
}

/// Density of `ν` with respect to `τ` by atomwise residuation.
pub fn rn_density(op: &PseudoMul, nu: &MaxitiveMeasure, tau: &MaxitiveMeasure) -> Result<MeasurableFn> {
    op.require_exact()?;
    let k = nu.atom_count();
    check_len(k, tau.atom_count())?;
    if let Some(b) = (0..k)
        .map(AtomSet::singleton)
        .find(|&a| !op.dominates(nu.eval(a), tau.eval(a)))
    {
        return Err(Error::NotAbsolutelyContinuous(format!(
            "ν = {} exceeds ∞ ⊙ τ = {} on {b:?}",
            nu.eval(b),
            op.eval(ExtReal::INFINITY, tau.eval(b))
        )));
    }
    let c = MeasurableFn::new(
        (0..k)
            .map(|a| {
                let r = nu.value(a);
                if r.is_zero() {
                    Ok(ExtReal::ZERO)
                } else {
                    op.residual(r, tau.value(a))
                }
            })
            .collect::<Result<_>>()?,
    );
    if let Some(b) = verify_density(op, &c, nu, tau) {
        return Err(Error::NoDensity(format!(
            "∫ c ⊙ dτ = {} but ν = {} on {b:?}",
            sweep_integral(op, &c, tau, b),
            nu.eval(b)
        )));
    }
    if k <= EXHAUSTIVE_BUDGET && finiteness_suite(op, nu)?.semi_odot_finite {
        if let Some(a) = (0..k).find(|&a| !op.is_odot_finite(c.value(a))) {
            return Err(Error::OracleMismatch(format!(
                "semi-finite measure produced a non-finite density value at atom {a}"
            )));
        }
    }
    Ok(c)
}

/// `m_ν`, the density against `m`, and the arctan transform if it was used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaratheodoryEnvelope {
    pub m: AdditiveMeasure,
    #[serde(serialize_with = "serialize_table")]
    pub m_nu: SetFunction,
    pub density: MeasurableFn,
    /// Density of `arctan ∘ ν` when `ν` takes the value `∞`.
    pub arctan_density: Option<MeasurableFn>,
}

fn serialize_table<S: serde::Serializer>(t: &SetFunction, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(t.table().len()))?;
    for b in all_sets(t.atom_count()) {
        map.serialize_entry(&b.key(), &t.eval(b))?;
    }
    map.end()
}

/// `m_ν(B) = inf_π Σ_{Bⱼ ∈ π} ν(Bⱼ) m(Bⱼ)` over partitions of `B`, by
/// dynamic programming over sub-masks.
pub fn caratheodory_envelope(nu: &impl SetFn, m: &AdditiveMeasure) -> Result<SetFunction> {
    let k = nu.atom_count();
    ensure_budget("envelope", k, EXHAUSTIVE_BUDGET)?;
    let mut best = vec![ExtReal::ZERO; 1 << k];
    for s in AtomSet::full(k).subsets().skip(1) {
        let low = AtomSet::singleton(s.first().unwrap());
        let rest = s.difference(low);
        best[s.bits() as usize] = rest
            .subsets()
            .map(|sub| {
                let block = sub.union(low);
                nu.eval(block).mul(m.eval(block)).add(best[s.difference(block).bits() as usize])
            })
            .min()
            .unwrap();
    }
    SetFunction::new(k, best)
}

fn ratio(num: ExtReal, den: ExtReal) -> ExtReal {
    if num.is_zero() {
        ExtReal::ZERO
    } else {
        ExtReal::clamped(num.get() / den.get())
    }
}

fn finite_bcj(nu: &MaxitiveMeasure, m: &AdditiveMeasure) -> Result<(SetFunction, MeasurableFn)> {
    let k = nu.atom_count();
    let m_nu = caratheodory_envelope(nu, m)?;
    let density = MeasurableFn::new(
        (0..k)
            .map(|a| ratio(m_nu.eval(AtomSet::singleton(a)), m.mass(a)))
            .collect(),
    );
    for b in all_sets(k) {
        if !m_nu.eval(b).is_zero() && m.eval(b).is_zero() {
            return Err(Error::OracleMismatch(format!("m_ν is not absolutely continuous on {b:?}")));
        }
        let ess = b
            .atoms()
            .filter(|&a| !m.mass(a).is_zero())
            .map(|a| density.value(a))
            .max()
            .unwrap_or(ExtReal::ZERO);
        let recon = b
            .subsets()
            .filter(|&s| !m.eval(s).is_zero())
            .map(|s| ratio(m_nu.eval(s), m.eval(s)))
            .max()
            .unwrap_or(ExtReal::ZERO);
        if !ess.approx_eq(nu.eval(b)) || !recon.approx_eq(nu.eval(b)) {
            return Err(Error::OracleMismatch(format!(
                "reconstruction fails on {b:?}: essential sup {ess}, ratio sup {recon}, ν = {}",
                nu.eval(b)
            )));
        }
    }
    Ok((m_nu, density))
}

/// Density of an essential `ν` against its σ-additive witness `m`.
pub fn bcj_density(nu: &MaxitiveMeasure, m: &AdditiveMeasure) -> Result<CaratheodoryEnvelope> {
    let k = nu.atom_count();
    check_len(k, m.atom_count())?;
    ensure_budget("density against an additive measure", k, EXHAUSTIVE_BUDGET)?;
    if let Some(a) = (0..k).find(|&a| m.mass(a).is_infinite()) {
        return Err(Error::InfiniteValue(format!("reference measure has infinite mass on atom {a}")));
    }
    if let Some(a) = (0..k).find(|&a| nu.value(a).is_zero() != m.mass(a).is_zero()) {
        return Err(Error::NotEssentialPair(format!(
            "atom {a}: ν = {}, m = {}",
            nu.value(a),
            m.mass(a)
        )));
    }
    if nu.is_finite() {
        let (m_nu, density) = finite_bcj(nu, m)?;
        return Ok(CaratheodoryEnvelope { m: m.clone(), m_nu, density, arctan_density: None });
    }
    let bounded = nu.map(|v| ExtReal::clamped(v.get().atan()));
    let (m_nu, c1) = finite_bcj(&bounded, m)?;
    let density = c1.map(|v| {
        if v.approx_eq(ExtReal::of(FRAC_PI_2)) {
            ExtReal::INFINITY
        } else {
            ExtReal::clamped(v.get().tan())
        }
    });
    Ok(CaratheodoryEnvelope { m: m.clone(), m_nu, density, arctan_density: Some(c1) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssociatedDensity {
    pub density: MeasurableFn,
    /// Atoms where `c₁` is not `⊙`-dominated by `c₂`.
    pub exceptional: AtomSet,
}

/// Density of `ν = μ-esssup c₁` with respect to `τ = μ-esssup c₂`.
pub fn density_from_associated(
    op: &PseudoMul,
    mu: &MaxitiveMeasure,
    c1: &MeasurableFn,
    c2: &MeasurableFn,
) -> Result<AssociatedDensity> {
    op.require_exact()?;
    let k = mu.atom_count();
    check_len(k, c1.len())?;
    check_len(k, c2.len())?;
    let nu = essential_supremum_measure(mu, c1);
    let tau = essential_supremum_measure(mu, c2);
    if let Some(b) = odot_violation(op, &nu, &tau, OdotDefinition::Unconditional) {
        return Err(Error::NotOdotAbsolutelyContinuous(format!(
            "ν = {} exceeds ∞ ⊙ τ = {} on {b:?}",
            nu.eval(b),
            op.eval(ExtReal::INFINITY, tau.eval(b))
        )));
    }
    let exceptional = AtomSet::from_atoms((0..k).filter(|&a| !op.dominates(c1.value(a), c2.value(a))));
    if !mu.eval(exceptional).is_zero() {
        return Err(Error::NegligibilityViolation(format!(
            "μ({exceptional:?}) = {} > 0",
            mu.eval(exceptional)
        )));
    }
    let density = MeasurableFn::new(
        (0..k)
            .map(|a| {
                if exceptional.contains(a) || c1.value(a).is_zero() {
                    Ok(ExtReal::ZERO)
                } else {
                    op.residual(c1.value(a), c2.value(a))
                }
            })
            .collect::<Result<_>>()?,
    );
    if let Some(b) = verify_density(op, &density, &nu, &tau) {
        return Err(Error::NoDensity(format!("verification fails on {b:?}")));
    }
    Ok(AssociatedDensity { density, exceptional })
}

/// `{c ≠ c₂}` lies in a `τ`-null set.
pub fn ae_equal(tau: &impl SetFn, c: &MeasurableFn, c2: &MeasurableFn) -> Result<bool> {
    Ok(tau.eval(c.disagreement(c2)?).is_zero())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeFailure {
    pub trial: u64,
    pub nu: Vec<ExtReal>,
    pub error: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub trials: u64,
    pub successes: u64,
    pub success_fraction: f64,
    pub tau_sigma_odot_finite: bool,
    pub failures: Vec<ProbeFailure>,
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-3.0..=3.0))
}

/// Draws a random `ν ≪_⊙ τ` for the probe.
pub fn random_dominated(op: &PseudoMul, tau: &MaxitiveMeasure, rng: &mut ChaCha8Rng) -> MaxitiveMeasure {
    tau.map(|t| {
        let c = if rng.random_bool(0.2) { 0.0 } else { log_uniform(rng) };
        let base = op.eval(ExtReal::of(c), t);
        if base.is_zero() {
            return base;
        }
        if op.name() == OpName::Min {
            base.mul(ExtReal::of(rng.random_range(f64::EPSILON..=1.0)))
        } else if base.is_infinite() && rng.random_bool(0.5) {
            // on an atom of infinite τ-value any positive ν-value is ≪_× τ
            ExtReal::of(log_uniform(rng))
        } else {
            base.mul(ExtReal::of(log_uniform(rng)))
        }
    })
}

/// Samples `ν ≪_⊙ τ` and records how often `rn_density` succeeds.
pub fn rn_property_probe(op: &PseudoMul, tau: &MaxitiveMeasure, trials: u64, seed: u64) -> Result<ProbeReport> {
    op.require_exact()?;
    let tau_sigma_odot_finite = (0..tau.atom_count()).all(|a| op.is_odot_finite(tau.value(a)));
    let mut failures = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let nu = random_dominated(op, tau, &mut rng);
        if let Err(e) = rn_density(op, &nu, tau) {
            failures.push(ProbeFailure { trial, nu: nu.values().to_vec(), error: e.code() });
        }
    }
    let successes = trials - failures.len() as u64;
    Ok(ProbeReport {
        trials,
        successes,
        success_fraction: if trials == 0 { 1.0 } else { successes as f64 / trials as f64 },
        tau_sigma_odot_finite,
        failures,
    })
}
