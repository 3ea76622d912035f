//! Maxitive measures and their structure theory.
//!
//! On a finite algebra every maxitive measure is determined by its values on
//! the atoms: `ν(B) = max_{a ∈ B} ν(a)`. It is automatically σ-maxitive,
//! completely maxitive and optimal. The predicates below are nevertheless
//! evaluated from their definitions on explicit set-function tables, so that
//! non-maxitive inputs are classified correctly.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::classical::AdditiveMeasure;
use crate::error::{Error, Result};
use crate::ext::{signed_sub, ExtReal};
use crate::pseudo_mul::PseudoMul;
use crate::space::{
    all_sets, check_len, ensure_budget, enumerate_sets, set_partitions, AtomSet, MeasurableFn,
    SetFn, SetFunction, EXHAUSTIVE_BUDGET,
};

/// Largest atom count for brute-force σ-ideal enumeration (`2^(2^k)` families).
pub const IDEAL_BUDGET: usize = 4;
/// Largest atom count for brute-force partition enumeration (Bell numbers).
pub const PARTITION_BUDGET: usize = 10;
/// Largest atom count for Choquet alternation sweeps.
pub const ALTERNATION_ATOM_BUDGET: usize = 6;
/// Largest alternation order.
pub const ALTERNATION_ORDER_BUDGET: usize = 4;

/// A maxitive measure in atom-value form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxitiveMeasure {
    values: Vec<ExtReal>,
}

impl MaxitiveMeasure {
    pub fn new(values: Vec<ExtReal>) -> Self {
        MaxitiveMeasure { values }
    }

    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Ok(MaxitiveMeasure::new(
            values.iter().map(|&v| ExtReal::new(v)).collect::<Result<_>>()?,
        ))
    }

    pub fn zero(k: usize) -> Self {
        MaxitiveMeasure::new(vec![ExtReal::ZERO; k])
    }

    /// `δ_#`: `1` on every nonempty set.
    pub fn delta_sharp(k: usize) -> Self {
        MaxitiveMeasure::new(vec![ExtReal::ONE; k])
    }

    /// `t · δ_#`.
    pub fn constant(k: usize, value: ExtReal) -> Self {
        MaxitiveMeasure::new(vec![value; k])
    }

    /// Recovers the atom form of a completely maxitive set-function table.
    pub fn from_set_function(w: &SetFunction) -> Result<Self> {
        let k = w.atom_count();
        let nu = MaxitiveMeasure::new((0..k).map(|a| w.eval(AtomSet::singleton(a))).collect());
        if let Some(b) = all_sets(k).find(|&b| w.eval(b) != nu.eval(b)) {
            return Err(Error::InvalidSetFunction(format!(
                "not maxitive: value {} at {b:?} differs from the atom maximum {}",
                w.eval(b),
                nu.eval(b)
            )));
        }
        Ok(nu)
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> ExtReal {
        self.values[atom]
    }

    /// Atom values as a function (the cardinal density).
    pub fn density(&self) -> MeasurableFn {
        MeasurableFn::new(self.values.clone())
    }

    /// Union of the atoms of measure zero.
    pub fn null_part(&self) -> AtomSet {
        AtomSet::from_atoms((0..self.values.len()).filter(|&a| self.values[a].is_zero()))
    }

    pub fn is_normed(&self) -> bool {
        self.eval(AtomSet::full(self.values.len())).approx_eq(ExtReal::ONE)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `τ`-essential supremum of `f` over `b` with `τ = self`: the maximum of
    /// `f` over the non-null atoms of `b`.
    pub fn essential_supremum(&self, f: &MeasurableFn, b: AtomSet) -> ExtReal {
        b.difference(self.null_part())
            .atoms()
            .map(|a| f.value(a))
            .max()
            .unwrap_or(ExtReal::ZERO)
    }

    pub fn map(&self, mut f: impl FnMut(ExtReal) -> ExtReal) -> Self {
        MaxitiveMeasure::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

impl SetFn for MaxitiveMeasure {
    fn atom_count(&self) -> usize {
        self.values.len()
    }

    fn eval(&self, set: AtomSet) -> ExtReal {
        set.atoms().map(|a| self.values[a]).max().unwrap_or(ExtReal::ZERO)
    }
}

/// A reason a property fails: the offending sets and a short note.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub sets: Vec<AtomSet>,
    pub note: String,
}

impl Witness {
    fn new(sets: Vec<AtomSet>, note: impl Into<String>) -> Self {
        Witness { sets, note: note.into() }
    }
}

/// Result of [`classify`]. Every `false` carries an entry in `witnesses`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub monotone: bool,
    pub normed: bool,
    pub null_additive: bool,
    pub finite: bool,
    pub sigma_finite: bool,
    pub maxitive: bool,
    pub completely_maxitive: bool,
    pub continuous_from_below: bool,
    pub continuous_from_above: bool,
    pub optimal: bool,
    pub exhaustive: bool,
    pub ccc: bool,
    pub sigma_principal: bool,
    pub autocontinuous: bool,
    pub of_bounded_variation: bool,
    pub essential: bool,
    pub witnesses: BTreeMap<&'static str, Witness>,
    /// Atom-value representation when the input is maxitive.
    pub atom_values: Option<Vec<ExtReal>>,
}

pub fn monotone_violation(w: &impl SetFn) -> Option<(AtomSet, AtomSet)> {
    let k = w.atom_count();
    all_sets(k).find_map(|b| {
        b.complement(k)
            .atoms()
            .map(|a| b.union(AtomSet::singleton(a)))
            .find(|&bigger| w.eval(b) > w.eval(bigger))
            .map(|bigger| (b, bigger))
    })
}

pub fn null_additivity_violation(w: &impl SetFn) -> Option<(AtomSet, AtomSet)> {
    let k = w.atom_count();
    let nulls: Vec<AtomSet> = all_sets(k).filter(|&n| w.eval(n).is_zero()).collect();
    all_sets(k).find_map(|g| {
        nulls
            .iter()
            .find(|&&n| w.eval(g.union(n)) != w.eval(g))
            .map(|&n| (g, n))
    })
}

pub fn maxitivity_violation(w: &impl SetFn) -> Option<(AtomSet, AtomSet)> {
    let k = w.atom_count();
    if !w.eval(AtomSet::EMPTY).is_zero() {
        return Some((AtomSet::EMPTY, AtomSet::EMPTY));
    }
    all_sets(k).find_map(|a| {
        all_sets(k)
            .filter(|&b| b > a)
            .find(|&b| w.eval(a.union(b)) != w.eval(a).max(w.eval(b)))
            .map(|b| (a, b))
    })
}

/// Negligible: contained in some measurable set of value zero.
pub fn is_negligible(w: &impl SetFn, set: AtomSet) -> bool {
    let k = w.atom_count();
    set.complement(k)
        .subsets()
        .any(|extra| w.eval(set.union(extra)).is_zero())
}

/// All σ-ideals of the `k`-atom algebra, found by brute force over every
/// family of measurable sets: nonempty, closed under unions and under
/// measurable subsets.
pub fn sigma_ideals(k: usize) -> Result<&'static [Vec<AtomSet>]> {
    ensure_budget("sigma-ideal enumeration", k, IDEAL_BUDGET)?;
    static CACHE: [OnceLock<Vec<Vec<AtomSet>>>; IDEAL_BUDGET + 1] =
        [const { OnceLock::new() }; IDEAL_BUDGET + 1];
    Ok(CACHE[k].get_or_init(|| {
        let n_sets = 1usize << k;
        let mut ideals = Vec::new();
        for family in 1u64..(1u64 << n_sets) {
            let member = |s: usize| family >> s & 1 == 1;
            let members: Vec<usize> = (0..n_sets).filter(|&s| member(s)).collect();
            let down_closed = members.iter().all(|&s| {
                AtomSet::from_bits(s as u64)
                    .subsets()
                    .all(|sub| member(sub.bits() as usize))
            });
            if !down_closed {
                continue;
            }
            let union_closed = members
                .iter()
                .all(|&a| members.iter().all(|&b| member(a | b)));
            if union_closed {
                ideals.push(
                    members
                        .into_iter()
                        .map(|s| AtomSet::from_bits(s as u64))
                        .collect(),
                );
            }
        }
        ideals
    }))
}

/// σ-principality: for every σ-ideal `I` some `L ∈ I` makes `S ∖ L`
/// negligible for all `S ∈ I`. Returns the generator of the first ideal
/// that fails, if any.
pub fn sigma_principal_violation(w: &impl SetFn) -> Result<Option<AtomSet>> {
    let k = w.atom_count();
    if k <= IDEAL_BUDGET {
        for ideal in sigma_ideals(k)? {
            let ok = ideal.iter().any(|&l| {
                ideal
                    .iter()
                    .all(|&s| is_negligible(w, s.difference(l)))
            });
            if !ok {
                let top = ideal.iter().fold(AtomSet::EMPTY, |a, &b| a.union(b));
                return Ok(Some(top));
            }
        }
        Ok(None)
    } else {
        // Every ideal of a finite Boolean algebra is the down-set of its
        // largest member, and that member is a valid L.
        ensure_budget("sigma-principality", k, EXHAUSTIVE_BUDGET)?;
        Ok(all_sets(k).find(|&top| {
            !top.subsets()
                .all(|s| is_negligible(w, s.difference(top)))
        }))
    }
}

/// Disjoint variation `|w| = sup_π Σ_{B ∈ π} w(B)` over finite partitions of
/// `set`, by dynamic programming over sub-masks (every partition is visited
/// implicitly).
pub fn variation_dp(w: &impl SetFn, set: AtomSet) -> ExtReal {
    let k = w.atom_count();
    let mut best = vec![ExtReal::ZERO; 1 << k];
    for s in set.subsets().skip(1) {
        let low = AtomSet::singleton(s.first().unwrap());
        let rest = s.difference(low);
        let mut acc = ExtReal::ZERO;
        for sub in rest.subsets() {
            let block = sub.union(low);
            let v = w.eval(block).add(best[s.difference(block).bits() as usize]);
            acc = acc.max(v);
        }
        best[s.bits() as usize] = acc;
    }
    best[set.bits() as usize]
}

/// Classifies a set function by exhaustive enumeration.
pub fn classify(w: &SetFunction) -> Result<PropertyReport> {
    let k = w.atom_count();
    ensure_budget("classify", k, EXHAUSTIVE_BUDGET)?;
    let full = AtomSet::full(k);
    let mut witnesses = BTreeMap::new();

    let monotone = match monotone_violation(w) {
        None => true,
        Some((a, b)) => {
            witnesses.insert("monotone", Witness::new(vec![a, b], "w(A) > w(B) with A ⊂ B"));
            false
        }
    };

    let sup = all_sets(k).map(|s| w.eval(s)).max().unwrap_or(ExtReal::ZERO);
    let normed = sup.approx_eq(ExtReal::ONE);
    if !normed {
        witnesses.insert("normed", Witness::new(vec![], format!("supremum is {sup}")));
    }

    let null_additive = match null_additivity_violation(w) {
        None => true,
        Some((g, n)) => {
            witnesses.insert("null_additive", Witness::new(vec![g, n], "w(G ∪ N) != w(G) with w(N) = 0"));
            false
        }
    };

    let finite = match all_sets(k).find(|&s| w.eval(s).is_infinite()) {
        None => true,
        Some(s) => {
            witnesses.insert("finite", Witness::new(vec![s], "infinite value"));
            false
        }
    };

    // σ-finite: E is covered by (finitely many) sets of finite value.
    let sigma_finite = match (0..k).find(|&a| {
        !all_sets(k).any(|s| s.contains(a) && w.eval(s).is_finite())
    }) {
        None => true,
        Some(a) => {
            witnesses.insert(
                "sigma_finite",
                Witness::new(vec![AtomSet::singleton(a)], "atom lies in no set of finite value"),
            );
            false
        }
    };

    let maxitive = match maxitivity_violation(w) {
        None => true,
        Some((a, b)) => {
            witnesses.insert("maxitive", Witness::new(vec![a, b], "w(A ∪ B) != max(w(A), w(B))"));
            false
        }
    };

    // Arbitrary unions in a finite algebra are finite unions of atoms.
    let completely_maxitive = match all_sets(k)
        .find(|&b| w.eval(b) != b.atoms().map(|a| w.eval(AtomSet::singleton(a))).max().unwrap_or(ExtReal::ZERO))
    {
        None => true,
        Some(b) => {
            witnesses.insert(
                "completely_maxitive",
                Witness::new(vec![b], "value differs from the maximum over its atoms"),
            );
            false
        }
    };

    // Monotone sequences in a finite algebra are eventually constant, so
    // both continuity conditions reduce to w(∅) = 0 being well defined.
    let continuous_from_below = true;
    let continuous_from_above = true;
    let optimal = monotone && null_additive && maxitive && continuous_from_below && continuous_from_above;
    if !optimal {
        witnesses.insert("optimal", Witness::new(vec![], "not a maxitive fuzzy measure"));
    }

    // A disjoint sequence has at most k nonempty terms, then ∅ forever.
    let exhaustive = w.eval(AtomSet::EMPTY).is_zero();
    if !exhaustive {
        witnesses.insert("exhaustive", Witness::new(vec![AtomSet::EMPTY], "nonzero value at the empty set"));
    }

    // A disjoint family of non-negligible sets has at most k members.
    let ccc = true;

    let sigma_principal = match sigma_principal_violation(w)? {
        None => true,
        Some(top) => {
            witnesses.insert(
                "sigma_principal",
                Witness::new(vec![top], "ideal with no greatest element modulo negligible sets"),
            );
            false
        }
    };

    let autocontinuous = if maxitive {
        let nu = MaxitiveMeasure::from_set_function(w)?;
        let dens = nu.density();
        match all_sets(k).find(|&b| nu.essential_supremum(&dens, b) != w.eval(b)) {
            None => true,
            Some(b) => {
                witnesses.insert("autocontinuous", Witness::new(vec![b], "essential supremum mismatch"));
                false
            }
        }
    } else {
        witnesses.insert(
            "autocontinuous",
            Witness::new(vec![], "a relative density always induces a maxitive measure"),
        );
        false
    };

    let variation = variation_dp(w, full);
    let of_bounded_variation = variation.is_finite();
    if !of_bounded_variation {
        witnesses.insert("of_bounded_variation", Witness::new(vec![], "disjoint variation is inf"));
    }

    // Essential: null sets are exactly the subsets of the union of null atoms
    // (those of the σ-finite measure m = counting on the non-null atoms).
    let null_atoms = AtomSet::from_atoms((0..k).filter(|&a| w.eval(AtomSet::singleton(a)).is_zero()));
    let essential = match all_sets(k).find(|&b| w.eval(b).is_zero() != b.is_subset(null_atoms)) {
        None => true,
        Some(b) => {
            witnesses.insert(
                "essential",
                Witness::new(vec![b], "null sets do not match those of any σ-additive measure"),
            );
            false
        }
    };

    Ok(PropertyReport {
        monotone,
        normed,
        null_additive,
        finite,
        sigma_finite,
        maxitive,
        completely_maxitive,
        continuous_from_below,
        continuous_from_above,
        optimal,
        exhaustive,
        ccc,
        sigma_principal,
        autocontinuous,
        of_bounded_variation,
        essential,
        witnesses,
        atom_values: maxitive.then(|| (0..k).map(|a| w.eval(AtomSet::singleton(a))).collect()),
    })
}

/// A tuple `(G; G₁, …, Gₙ)` at which alternation fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlternationWitness {
    pub base: AtomSet,
    pub sets: Vec<AtomSet>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlternationReport {
    pub ok: bool,
    pub order: usize,
    pub tuples_checked: u64,
    pub witness: Option<AlternationWitness>,
}

/// `Δ_{G₁} … Δ_{Gₙ} w(G)` with `Δ_{G₁} f(G) = f(G ∪ G₁) − f(G)` and
/// `∞ − ∞ = 0` at every step.
pub fn choquet_delta(w: &impl SetFn, base: AtomSet, sets: &[AtomSet]) -> f64 {
    match sets.split_last() {
        None => w.eval(base).get(),
        Some((&last, rest)) => signed_sub(
            choquet_delta(w, base.union(last), rest),
            choquet_delta(w, base, rest),
        ),
    }
}

/// Checks `(−1)^{n+1} Δ_{G₁} … Δ_{Gₙ} w(G) ≥ 0` for every `n ≤ order`.
///
/// `Δ` is symmetric in the `Gᵢ` and only depends on `Gᵢ ∖ G`; sets contained
/// in `G` make the difference vanish. Tuples are therefore enumerated as
/// multisets of nonempty subsets of the complement of `G`.
pub fn choquet_alternating(w: &impl SetFn, order: usize) -> Result<AlternationReport> {
    let k = w.atom_count();
    if order == 0 || order > ALTERNATION_ORDER_BUDGET {
        return Err(Error::ExplicitBudgetExceeded {
            what: "alternation order",
            atoms: order,
            limit: ALTERNATION_ORDER_BUDGET,
        });
    }
    ensure_budget("choquet alternation", k, ALTERNATION_ATOM_BUDGET)?;
    let tol = crate::ext::tolerance();
    let mut checked = 0u64;
    for n in 1..=order {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        for base in all_sets(k) {
            let pool: Vec<AtomSet> = base.complement(k).subsets().skip(1).collect();
            if pool.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; n];
            loop {
                let sets: Vec<AtomSet> = idx.iter().map(|&i| pool[i]).collect();
                let d = choquet_delta(w, base, &sets);
                checked += 1;
                let signed = sign * d;
                if signed.is_nan() || signed < -tol * 1f64.max(d.abs()) {
                    return Ok(AlternationReport {
                        ok: false,
                        order,
                        tuples_checked: checked,
                        witness: Some(AlternationWitness { base, sets, value: d }),
                    });
                }
                // next non-decreasing index tuple
                let mut pos = n;
                while pos > 0 && idx[pos - 1] == pool.len() - 1 {
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                idx[pos - 1] += 1;
                let v = idx[pos - 1];
                for slot in idx.iter_mut().skip(pos) {
                    *slot = v;
                }
            }
        }
    }
    Ok(AlternationReport {
        ok: true,
        order,
        tuples_checked: checked,
        witness: None,
    })
}

/// `τ`-essential supremum of `f` over `b`: `inf{t > 0 : b ∩ {f > t}` is
/// `τ`-negligible`}`, found by sweeping the values of `f`.
pub fn essential_supremum(tau: &SetFunction, f: &MeasurableFn, b: AtomSet) -> Result<ExtReal> {
    check_len(tau.atom_count(), f.len())?;
    if let Some((g, bigger)) = monotone_violation(tau) {
        return Err(Error::NotMonotone(format!("{g:?} ⊂ {bigger:?}")));
    }
    if let Some((g, n)) = null_additivity_violation(tau) {
        return Err(Error::NotNullAdditive(format!("G = {g:?}, N = {n:?}")));
    }
    Ok(essential_supremum_unchecked(tau, f, b))
}

pub(crate) fn essential_supremum_unchecked(tau: &impl SetFn, f: &MeasurableFn, b: AtomSet) -> ExtReal {
    let mut candidates: Vec<ExtReal> = b.atoms().map(|a| f.value(a)).collect();
    candidates.push(ExtReal::ZERO);
    candidates.sort();
    candidates.dedup();
    candidates
        .into_iter()
        .find(|&t| tau.eval(b.intersection(f.level_set(t))).is_zero())
        .unwrap_or(ExtReal::INFINITY)
}

/// `δ_w(B) = 1` if `w(B) > 0`, else `0`; for null-additive monotone `w`.
pub fn delta_measure(w: &impl SetFn) -> MaxitiveMeasure {
    MaxitiveMeasure::new(
        (0..w.atom_count())
            .map(|a| {
                if w.eval(AtomSet::singleton(a)).is_zero() {
                    ExtReal::ZERO
                } else {
                    ExtReal::ONE
                }
            })
            .collect(),
    )
}

/// Pairwise disjoint `ν`-atoms `Hₙ` with `ν(B) = max_n ν(B ∩ Hₙ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomDecomposition {
    pub atoms: Vec<AtomSet>,
    pub residual_null: AtomSet,
}

/// `H` is a `ν`-atom: `ν(H) > 0` and every `B` leaves one side of `H` null.
pub fn is_nu_atom(nu: &impl SetFn, h: AtomSet) -> bool {
    let k = nu.atom_count();
    !nu.eval(h).is_zero()
        && all_sets(k).all(|b| nu.eval(h.difference(b)).is_zero() || nu.eval(h.intersection(b)).is_zero())
}

/// The atom decomposition: positive atoms by decreasing value (ties by
/// index), verified before being returned.
pub fn atom_decomposition(nu: &MaxitiveMeasure) -> Result<AtomDecomposition> {
    let k = nu.atom_count();
    let mut positive: Vec<usize> = (0..k).filter(|&a| !nu.value(a).is_zero()).collect();
    positive.sort_by(|&a, &b| nu.value(b).cmp(&nu.value(a)).then(a.cmp(&b)));
    let atoms: Vec<AtomSet> = positive.into_iter().map(AtomSet::singleton).collect();
    let residual_null = nu.null_part();
    let fail = |m: String| Err(Error::DecompositionVerificationFailed(m));

    let mut seen = AtomSet::EMPTY;
    for &h in &atoms {
        if !h.is_disjoint(seen) {
            return fail(format!("{h:?} overlaps earlier atoms"));
        }
        seen = seen.union(h);
    }
    if !nu.eval(residual_null).is_zero() || !residual_null.is_disjoint(seen) {
        return fail("residual set is not null".into());
    }
    if k <= EXHAUSTIVE_BUDGET {
        if let Some(&h) = atoms.iter().find(|&&h| !is_nu_atom(nu, h)) {
            return fail(format!("{h:?} is not a ν-atom"));
        }
        for b in all_sets(k) {
            let rhs = atoms
                .iter()
                .map(|&h| nu.eval(b.intersection(h)))
                .max()
                .unwrap_or(ExtReal::ZERO);
            if nu.eval(b) != rhs {
                return fail(format!("max formula fails at {b:?}"));
            }
        }
    }
    Ok(AtomDecomposition { atoms, residual_null })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariationReport {
    pub value: ExtReal,
    pub brute_force: ExtReal,
    pub closed_form: ExtReal,
}

/// `|ν|` by brute force over all partitions of `E`, cross-checked against
/// `Σₙ ν(Hₙ)`.
pub fn disjoint_variation(nu: &MaxitiveMeasure) -> Result<VariationReport> {
    let k = nu.atom_count();
    ensure_budget("disjoint variation", k, PARTITION_BUDGET)?;
    let brute_force = set_partitions(AtomSet::full(k))
        .into_iter()
        .map(|p| p.iter().fold(ExtReal::ZERO, |acc, &b| acc.add(nu.eval(b))))
        .max()
        .unwrap_or(ExtReal::ZERO);
    let decomposition = atom_decomposition(nu)?;
    let closed_form = decomposition
        .atoms
        .iter()
        .fold(ExtReal::ZERO, |acc, &h| acc.add(nu.eval(h)));
    if !brute_force.approx_eq(closed_form) {
        return Err(Error::OracleMismatch(format!(
            "partition supremum {brute_force} != atom sum {closed_form}"
        )));
    }
    Ok(VariationReport {
        value: closed_form,
        brute_force,
        closed_form,
    })
}

/// The σ-additive `m(B) = Σₙ ν(B ∩ Hₙ)` sharing the null sets of `ν`.
pub fn essential_witness(nu: &MaxitiveMeasure) -> Result<AdditiveMeasure> {
    if !nu.is_finite() {
        return Err(Error::InfiniteValue(
            "essential witness needs a finite measure; apply the arctan transform first".into(),
        ));
    }
    let k = nu.atom_count();
    let decomposition = atom_decomposition(nu)?;
    let mut masses = vec![ExtReal::ZERO; k];
    for (a, mass) in masses.iter_mut().enumerate() {
        let single = AtomSet::singleton(a);
        *mass = decomposition
            .atoms
            .iter()
            .fold(ExtReal::ZERO, |acc, &h| acc.add(nu.eval(single.intersection(h))));
    }
    let m = AdditiveMeasure::new(masses);
    if k <= EXHAUSTIVE_BUDGET {
        for b in enumerate_sets(k, "essential witness")? {
            let direct = decomposition
                .atoms
                .iter()
                .fold(ExtReal::ZERO, |acc, &h| acc.add(nu.eval(b.intersection(h))));
            if !direct.approx_eq(m.eval(b)) || nu.eval(b).is_zero() != m.eval(b).is_zero() {
                return Err(Error::OracleMismatch(format!("essential witness fails at {b:?}")));
            }
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub odot_finite: bool,
    pub sigma_odot_finite: bool,
    pub semi_odot_finite: bool,
}

/// `⊙`-finiteness, σ-`⊙`-finiteness and semi-`⊙`-finiteness of `ν`.
pub fn finiteness_suite(op: &PseudoMul, nu: &MaxitiveMeasure) -> Result<FinitenessReport> {
    let k = nu.atom_count();
    let full = AtomSet::full(k);
    let odot_finite = op.is_odot_finite(nu.eval(full));
    // cover by atoms; any set containing an atom dominates it
    let sigma_odot_finite = (0..k).all(|a| op.is_odot_finite(nu.value(a)));
    let semi_odot_finite = enumerate_sets(k, "semi-odot-finiteness")?.all(|b| {
        let best = b
            .subsets()
            .map(|a| nu.eval(a))
            .filter(|&v| op.is_odot_finite(v))
            .max()
            .unwrap_or(ExtReal::ZERO);
        best == nu.eval(b)
    });
    if semi_odot_finite != odot_finite {
        return Err(Error::OracleMismatch(format!(
            "semi-odot-finite = {semi_odot_finite} but odot-finite = {odot_finite}"
        )));
    }
    Ok(FinitenessReport {
        odot_finite,
        sigma_odot_finite,
        semi_odot_finite,
    })
}
