//! Possibility spaces: normed σ-principal maxitive measures, the idempotent
//! expectation `Σ[X] = ∫ X ⊙ dΠ` and conditional expectations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::AdditiveMeasure;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::integral::sweep_integral;
use crate::maxitive::{delta_measure, sigma_principal_violation, MaxitiveMeasure};
use crate::pseudo_mul::{OpName, PseudoMul};
use crate::radon_nikodym::ae_equal;
use crate::space::{check_len, AtomSet, MeasurableFn, SetFn, Space};

/// `(Ω, 𝓐, Π)` with `Π[Ω] = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PossibilitySpace {
    pi: MaxitiveMeasure,
}

impl PossibilitySpace {
    pub fn new(pi: MaxitiveMeasure) -> Result<Self> {
        if !pi.is_normed() {
            return Err(Error::NotPossibility(format!(
                "Π[Ω] = {}",
                pi.eval(AtomSet::full(pi.atom_count()))
            )));
        }
        if let Some(top) = sigma_principal_violation(&pi)? {
            return Err(Error::NotPossibility(format!("not σ-principal at {top:?}")));
        }
        Ok(PossibilitySpace { pi })
    }

    pub fn pi(&self) -> &MaxitiveMeasure {
        &self.pi
    }

    pub fn atom_count(&self) -> usize {
        self.pi.atom_count()
    }
}

/// A sub-algebra, given by a coarser partition of the atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubAlgebra {
    blocks: Vec<AtomSet>,
}

impl SubAlgebra {
    pub fn new(k: usize, mut blocks: Vec<AtomSet>) -> Result<Self> {
        let mut seen = AtomSet::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidSubAlgebra("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::InvalidSubAlgebra(format!("block {b:?} overlaps another block")));
            }
            seen = seen.union(b);
        }
        if seen != AtomSet::full(k) {
            return Err(Error::InvalidSubAlgebra(format!(
                "atoms {:?} are not covered",
                AtomSet::full(k).difference(seen)
            )));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(SubAlgebra { blocks })
    }

    /// `{∅, Ω}`.
    pub fn trivial(k: usize) -> Self {
        SubAlgebra { blocks: if k == 0 { vec![] } else { vec![AtomSet::full(k)] } }
    }

    /// The full algebra.
    pub fn full(k: usize) -> Self {
        SubAlgebra { blocks: (0..k).map(AtomSet::singleton).collect() }
    }

    /// Parses `"a+b|c+d"` against the labels of `space`.
    pub fn parse(space: &Space, text: &str) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|part| space.parse_set(part.trim()))
            .collect::<Result<Vec<_>>>()?;
        SubAlgebra::new(space.atom_count(), blocks)
    }

    pub fn blocks(&self) -> &[AtomSet] {
        &self.blocks
    }

    /// All measurable sets of the sub-algebra.
    pub fn sets(&self) -> impl Iterator<Item = AtomSet> + '_ {
        AtomSet::full(self.blocks.len()).subsets().map(|sel| {
            sel.atoms()
                .fold(AtomSet::EMPTY, |acc, i| acc.union(self.blocks[i]))
        })
    }

    /// Every block of `self` is a union of blocks of `finer`.
    pub fn is_coarser_than(&self, finer: &SubAlgebra) -> bool {
        finer
            .blocks
            .iter()
            .all(|&f| self.blocks.iter().any(|&b| f.is_subset(b)))
    }

    pub fn is_measurable(&self, x: &MeasurableFn) -> bool {
        self.blocks.iter().all(|&b| {
            let first = x.value(b.first().unwrap());
            b.atoms().all(|a| x.value(a) == first)
        })
    }

    /// The block-constant function with value `values[i]` on block `i`.
    pub fn lift(&self, k: usize, values: &[ExtReal]) -> MeasurableFn {
        let mut out = vec![ExtReal::ZERO; k];
        for (&b, &v) in self.blocks.iter().zip(values) {
            for a in b.atoms() {
                out[a] = v;
            }
        }
        MeasurableFn::new(out)
    }
}

/// `Σ[X] = ∫ X ⊙ dΠ`.
pub fn expectation(op: &PseudoMul, p: &PossibilitySpace, x: &MeasurableFn) -> Result<ExtReal> {
    check_len(p.atom_count(), x.len())?;
    Ok(sweep_integral(op, x, p.pi(), AtomSet::full(x.len())))
}

/// `Σ[X ⊙ 1_A] = ∫_A X ⊙ dΠ`.
pub fn restricted_expectation(op: &PseudoMul, p: &PossibilitySpace, x: &MeasurableFn, a: AtomSet) -> ExtReal {
    sweep_integral(op, x, p.pi(), a)
}

/// Law of `X` on `codomain`: `Π_X(u) = Π[X = u]`. Each value of `X` must be
/// the numeric label of a codomain atom.
pub fn law(p: &PossibilitySpace, x: &MeasurableFn, codomain: &Space) -> Result<MaxitiveMeasure> {
    check_len(p.atom_count(), x.len())?;
    let target = |v: ExtReal| -> Result<usize> {
        (0..codomain.atom_count())
            .find(|&u| {
                codomain.block_labels(u).iter().any(|l| match *l {
                    "inf" => v.is_infinite(),
                    l => l.parse::<f64>().is_ok_and(|t| t == v.get()),
                })
            })
            .ok_or_else(|| Error::UnmappedValue(v.to_string()))
    };
    let map = x.values().iter().map(|&v| target(v)).collect::<Result<Vec<_>>>()?;
    law_of_map(p, &map, codomain.atom_count())
}

/// Law of the atom map `a ↦ map[a]` into a `k`-atom codomain.
pub fn law_of_map(p: &PossibilitySpace, map: &[usize], k: usize) -> Result<MaxitiveMeasure> {
    check_len(p.atom_count(), map.len())?;
    let mut values = vec![ExtReal::ZERO; k];
    for (a, &u) in map.iter().enumerate() {
        if u >= k {
            return Err(Error::UnmappedValue(u.to_string()));
        }
        values[u] = values[u].max(p.pi().value(a));
    }
    let law = MaxitiveMeasure::new(values);
    if !law.is_normed() {
        return Err(Error::OracleMismatch("law of a possibility is not normed".into()));
    }
    Ok(law)
}

/// How the conditional value on a block was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockRule {
    /// `Π[A] = 0`; the value is set to 0.
    Null,
    /// The residual `(Σ[X ⊙ 1_A] / Π[A])_⊙`.
    Residual,
    /// `⊙ = ∧` with `Σ[X ∧ 1_A] = Π[A]`: every value `≥ Π[A]` satisfies the
    /// defining property and the largest value of `X` on the atoms of full
    /// mass `Π[A]` is used.
    Saturated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockTranscript {
    pub block: AtomSet,
    pub expectation: ExtReal,
    pub pi: ExtReal,
    pub value: ExtReal,
    pub rule: BlockRule,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalResult {
    pub y: MeasurableFn,
    pub blocks: Vec<BlockTranscript>,
    /// Number of sets `A ∈ 𝓕` on which the defining property was verified.
    pub verified_sets: usize,
}

/// `Σ[X | 𝓕]`, verified against `Σ[X ⊙ 1_A] = Σ[Σ[X|𝓕] ⊙ 1_A]` for every
/// `A ∈ 𝓕`.
pub fn conditional(op: &PseudoMul, p: &PossibilitySpace, x: &MeasurableFn, f: &SubAlgebra) -> Result<ConditionalResult> {
    op.require_exact()?;
    let k = p.atom_count();
    check_len(k, x.len())?;
    let pi = p.pi();
    let mut blocks = Vec::with_capacity(f.blocks().len());
    for &b in f.blocks() {
        let s = restricted_expectation(op, p, x, b);
        let mass = pi.eval(b);
        let (value, rule) = if mass.is_zero() {
            (ExtReal::ZERO, BlockRule::Null)
        } else if op.name() == OpName::Min && s == mass {
            let top = b
                .atoms()
                .filter(|&a| pi.value(a) == mass)
                .map(|a| x.value(a))
                .max()
                .unwrap_or(ExtReal::ZERO);
            (top.max(s), BlockRule::Saturated)
        } else {
            (op.residual(s, mass)?, BlockRule::Residual)
        };
        blocks.push(BlockTranscript { block: b, expectation: s, pi: mass, value, rule });
    }
    let y = f.lift(k, &blocks.iter().map(|t| t.value).collect::<Vec<_>>());
    let mut verified_sets = 0;
    for a in f.sets() {
        let lhs = restricted_expectation(op, p, x, a);
        let rhs = restricted_expectation(op, p, &y, a);
        if !lhs.approx_eq(rhs) {
            return Err(Error::DefiningPropertyFailed(format!(
                "Σ[X ⊙ 1_A] = {lhs} but Σ[Y ⊙ 1_A] = {rhs} for A = {a:?}"
            )));
        }
        verified_sets += 1;
    }
    Ok(ConditionalResult { y, blocks, verified_sets })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub passed: bool,
    pub cases: usize,
    pub witness: Option<String>,
}

impl PropertyCheck {
    fn run(cases: impl IntoIterator<Item = Result<Option<String>>>) -> Result<Self> {
        let mut n = 0;
        for case in cases {
            n += 1;
            if let Some(w) = case? {
                return Ok(PropertyCheck { passed: false, cases: n, witness: Some(w) });
            }
        }
        Ok(PropertyCheck { passed: true, cases: n, witness: None })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub defining_property: PropertyCheck,
    /// `Y = Σ[X|𝓕]` a.e. ⇒ `Σ[X ⊙ Z] = Σ[Y ⊙ Z]` for all `𝓕`-measurable `Z`.
    pub bcj1_only_if: PropertyCheck,
    /// The converse, over perturbations of the conditional.
    pub bcj1_if: PropertyCheck,
    pub bcj3: PropertyCheck,
    pub bcj4: PropertyCheck,
    pub bcj5: PropertyCheck,
    pub bcj6: PropertyCheck,
    pub all_passed: bool,
}

const Z_LEVELS: [f64; 5] = [0.0, 0.5, 1.0, 2.5, f64::INFINITY];
const Z_SAMPLE_LIMIT: usize = 4096;

/// Block-constant test functions: every assignment of `Z_LEVELS` to the
/// blocks when that is small, a seeded sample otherwise. Block indicators
/// `1_A` are always included.
pub fn generating_family(op: &PseudoMul, k: usize, f: &SubAlgebra, seed: u64) -> Vec<MeasurableFn> {
    let nb = f.blocks().len();
    let mut out: Vec<MeasurableFn> = f
        .sets()
        .map(|a| MeasurableFn::indicator(k, a, op.identity()))
        .collect();
    let levels: Vec<ExtReal> = Z_LEVELS.iter().map(|&v| ExtReal::of(v)).collect();
    let total = (levels.len() as f64).powi(nb as i32);
    if total <= Z_SAMPLE_LIMIT as f64 {
        for mut code in 0..total as usize {
            let mut vals = Vec::with_capacity(nb);
            for _ in 0..nb {
                vals.push(levels[code % levels.len()]);
                code /= levels.len();
            }
            out.push(f.lift(k, &vals));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..Z_SAMPLE_LIMIT {
            let vals: Vec<ExtReal> = (0..nb)
                .map(|_| levels[rng.random_range(0..levels.len())])
                .collect();
            out.push(f.lift(k, &vals));
        }
    }
    out
}

/// `{Y > Y'}` is `Π`-null.
fn ae_le(pi: &MaxitiveMeasure, y: &MeasurableFn, y2: &MeasurableFn) -> bool {
    let bad = AtomSet::from_atoms((0..y.len()).filter(|&a| !y.value(a).approx_le(y2.value(a))));
    pi.eval(bad).is_zero()
}

/// Evaluates the conditional-expectation properties on `(X, X₂, λ)`.
pub fn bcj_property_suite(
    op: &PseudoMul,
    p: &PossibilitySpace,
    f: &SubAlgebra,
    x: &MeasurableFn,
    x2: &MeasurableFn,
    lambda: ExtReal,
    seed: u64,
) -> Result<SuiteReport> {
    op.require_exact()?;
    let k = p.atom_count();
    check_len(k, x2.len())?;
    let pi = p.pi();
    let full = AtomSet::full(k);
    let sigma = |g: &MeasurableFn| sweep_integral(op, g, pi, full);
    let prod = |g: &MeasurableFn, z: &MeasurableFn| g.zip_with(z, |a, b| op.eval(a, b));

    let defining = conditional(op, p, x, f);
    let defining_property = PropertyCheck {
        passed: defining.is_ok(),
        cases: f.sets().count(),
        witness: defining.as_ref().err().map(|e| e.to_string()),
    };
    let y = match defining {
        Ok(r) => r.y,
        Err(Error::DefiningPropertyFailed(_)) => {
            let failed = PropertyCheck { passed: false, cases: 0, witness: Some("no conditional".into()) };
            return Ok(SuiteReport {
                defining_property,
                bcj1_only_if: failed.clone(),
                bcj1_if: failed.clone(),
                bcj3: failed.clone(),
                bcj4: failed.clone(),
                bcj5: failed.clone(),
                bcj6: failed,
                all_passed: false,
            });
        }
        Err(e) => return Err(e),
    };
    let zs = generating_family(op, k, f, seed);

    let bcj1_only_if = PropertyCheck::run(zs.iter().map(|z| {
        let (lhs, rhs) = (sigma(&prod(x, z)?), sigma(&prod(&y, z)?));
        Ok((!lhs.approx_eq(rhs)).then(|| format!("Z = {:?}: Σ[X⊙Z] = {lhs}, Σ[Y⊙Z] = {rhs}", z.values())))
    }))?;

    // Perturb the conditional on one block at a time; any perturbation that
    // keeps every Σ[· ⊙ Z] must agree with it almost everywhere.
    let mut candidates = Vec::new();
    for (i, &b) in f.blocks().iter().enumerate() {
        if pi.eval(b).is_zero() {
            continue;
        }
        let v = y.value(b.first().unwrap());
        for w in [ExtReal::ZERO, v.mul(ExtReal::of(0.5)), v.mul(ExtReal::of(2.0)), v.add(ExtReal::ONE), ExtReal::INFINITY] {
            if w != v {
                let mut vals: Vec<ExtReal> = f.blocks().iter().map(|&c| y.value(c.first().unwrap())).collect();
                vals[i] = w;
                candidates.push(f.lift(k, &vals));
            }
        }
    }
    let bcj1_if = PropertyCheck::run(candidates.iter().map(|cand| {
        let mut same = true;
        for z in &zs {
            if !sigma(&prod(x, z)?).approx_eq(sigma(&prod(cand, z)?)) {
                same = false;
                break;
            }
        }
        let ae = ae_equal(pi, cand, &y)?;
        Ok((same && !ae).then(|| format!("Y' = {:?} matches every Σ[· ⊙ Z] but differs from {:?} on a non-null set", cand.values(), y.values())))
    }))?;

    // bcj3 over 𝓕-measurable upper bounds of X.
    let ess_upper: Vec<ExtReal> = f
        .blocks()
        .iter()
        .map(|&b| {
            b.atoms()
                .filter(|&a| !pi.value(a).is_zero())
                .map(|a| x.value(a))
                .max()
                .unwrap_or(ExtReal::ZERO)
        })
        .collect();
    let mut uppers = vec![f.lift(k, &ess_upper), MeasurableFn::constant(k, ExtReal::INFINITY)];
    uppers.extend(zs.iter().filter(|z| ae_le(pi, x, z)).cloned());
    let bcj3 = PropertyCheck::run(uppers.iter().map(|u| {
        Ok((!ae_le(pi, &y, u)).then(|| format!("X ≤ {:?} a.e. but Σ[X|𝓕] = {:?}", u.values(), y.values())))
    }))?;

    let combined = x.zip_with(&x2.map(|v| op.eval(lambda, v)), |a, b| a.max(b))?;
    let lhs = conditional(op, p, &combined, f)?.y;
    let y2 = conditional(op, p, x2, f)?.y;
    let rhs = y.zip_with(&y2.map(|v| op.eval(lambda, v)), |a, b| a.max(b))?;
    let bcj4 = PropertyCheck::run([ae_equal(pi, &lhs, &rhs).map(|ok| {
        (!ok).then(|| format!("Σ[X ⊕ λ⊙X'|𝓕] = {:?}, Σ[X|𝓕] ⊕ λ⊙Σ[X'|𝓕] = {:?}", lhs.values(), rhs.values()))
    })])?;

    let (top, tower) = (sigma(x), sigma(&y));
    let bcj5 = PropertyCheck::run([Ok((!top.approx_eq(tower)).then(|| format!("Σ[Σ[X|𝓕]] = {tower}, Σ[X] = {top}")))])?;

    let mut measurable = vec![y.clone(), f.lift(k, &ess_upper)];
    measurable.extend(zs.iter().cloned());
    let bcj6 = PropertyCheck::run(measurable.iter().map(|g| {
        let c = conditional(op, p, g, f)?.y;
        Ok((!ae_equal(pi, &c, g)?).then(|| format!("Σ[X|𝓕] = {:?} for 𝓕-measurable X = {:?}", c.values(), g.values())))
    }))?;

    let all_passed = defining_property.passed
        && bcj1_only_if.passed
        && bcj1_if.passed
        && bcj3.passed
        && bcj4.passed
        && bcj5.passed
        && bcj6.passed;
    Ok(SuiteReport { defining_property, bcj1_only_if, bcj1_if, bcj3, bcj4, bcj5, bcj6, all_passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpRow {
    pub p: f64,
    /// `E[X^p | 𝓕]^{1/p}` per block.
    pub values: Vec<ExtReal>,
    pub gaps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpReport {
    pub blocks: Vec<AtomSet>,
    /// `Σ[X|𝓕]` per block under `Π = δ_m`, `⊙ = ×`.
    pub idempotent: Vec<ExtReal>,
    pub rows: Vec<LpRow>,
    pub max_gap_last: f64,
    pub monotone: bool,
}

/// Classical `E[X^p | 𝓕]^{1/p}` against the idempotent conditional under
/// `Π = δ_m`.
pub fn lp_limit_conditional(m: &AdditiveMeasure, x: &MeasurableFn, f: &SubAlgebra, ps: &[f64]) -> Result<LpReport> {
    let k = m.atom_count();
    check_len(k, x.len())?;
    if !m.total().approx_eq(ExtReal::ONE) {
        return Err(Error::NotProbability(format!("total mass {}", m.total())));
    }
    if let Some(a) = (0..k).find(|&a| x.value(a).is_infinite()) {
        return Err(Error::InfiniteValue(format!("X is infinite on atom {a}")));
    }
    let p_space = PossibilitySpace::new(delta_measure(m))?;
    let cond = conditional(&PseudoMul::times(), &p_space, x, f)?;
    let idempotent: Vec<ExtReal> = cond.blocks.iter().map(|t| t.value).collect();
    let mut rows = Vec::with_capacity(ps.len());
    for &p in ps {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::InvalidShape(p));
        }
        let mut values = Vec::new();
        let mut gaps = Vec::new();
        for (i, &b) in f.blocks().iter().enumerate() {
            let mb = m.eval(b).get();
            let v = if mb == 0.0 {
                0.0
            } else {
                let scale = b.atoms().map(|a| x.value(a).get()).fold(0.0, f64::max);
                if scale == 0.0 {
                    0.0
                } else {
                    let mean: f64 = b
                        .atoms()
                        .map(|a| (x.value(a).get() / scale).powf(p) * m.mass(a).get() / mb)
                        .sum();
                    scale * mean.powf(1.0 / p)
                }
            };
            values.push(ExtReal::clamped(v));
            gaps.push((idempotent[i].get() - v).abs());
        }
        rows.push(LpRow { p, values, gaps });
    }
    let tol = crate::ext::tolerance();
    let monotone = rows.windows(2).all(|w| {
        w[0].gaps
            .iter()
            .zip(&w[1].gaps)
            .all(|(&g0, &g1)| g1 <= g0 + tol * 1f64.max(g0))
    });
    let max_gap_last = rows
        .last()
        .map(|r| r.gaps.iter().copied().fold(0.0, f64::max))
        .unwrap_or(0.0);
    Ok(LpReport { blocks: f.blocks().to_vec(), idempotent, rows, max_gap_last, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[f64]) -> MeasurableFn {
        MeasurableFn::from_f64(v).unwrap()
    }

    fn fixture() -> (PossibilitySpace, MeasurableFn, SubAlgebra) {
        let p = PossibilitySpace::new(MaxitiveMeasure::from_f64(&[1.0, 0.5, 0.25, 1.0]).unwrap()).unwrap();
        let space = Space::numbered(4);
        let sub = SubAlgebra::parse(&space, "1+2|3+4").unwrap();
        (p, f(&[2.0, 5.0, 3.0, 1.0]), sub)
    }

    #[test]
    fn expectation_examples() {
        let (p, x, _) = fixture();
        let times = PseudoMul::times();
        assert_eq!(expectation(&times, &p, &x).unwrap(), ExtReal::of(2.5));
        assert_eq!(expectation(&times, &p, &MeasurableFn::constant(4, ExtReal::ONE)).unwrap(), ExtReal::ONE);
        assert_eq!(expectation(&times, &p, &MeasurableFn::constant(4, ExtReal::ZERO)).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn rejects_non_normed() {
        assert!(matches!(
            PossibilitySpace::new(MaxitiveMeasure::from_f64(&[0.5, 0.2]).unwrap()),
            Err(Error::NotPossibility(_))
        ));
    }

    #[test]
    fn law_examples() {
        let p = PossibilitySpace::new(MaxitiveMeasure::from_f64(&[1.0, 0.5]).unwrap()).unwrap();
        let codomain = Space::discrete(&["7", "8"]).unwrap();
        let l = law(&p, &f(&[7.0, 7.0]), &codomain).unwrap();
        assert_eq!(l.values(), &[ExtReal::ONE, ExtReal::ZERO]);
        assert_eq!(l.eval(AtomSet::EMPTY), ExtReal::ZERO);
        let l = law(&p, &f(&[8.0, 7.0]), &codomain).unwrap();
        assert_eq!(l.values(), &[ExtReal::of(0.5), ExtReal::ONE]);
        assert!(matches!(law(&p, &f(&[1.0, 7.0]), &codomain), Err(Error::UnmappedValue(_))));
    }

    #[test]
    fn conditional_examples() {
        let (p, x, sub) = fixture();
        let times = PseudoMul::times();
        let r = conditional(&times, &p, &x, &sub).unwrap();
        assert_eq!(r.y, f(&[2.5, 2.5, 1.0, 1.0]));
        assert_eq!(r.verified_sets, 4);

        let r = conditional(&times, &p, &x, &SubAlgebra::full(4)).unwrap();
        assert!(ae_equal(p.pi(), &r.y, &x).unwrap());

        let r = conditional(&times, &p, &x, &SubAlgebra::trivial(4)).unwrap();
        assert_eq!(r.y, MeasurableFn::constant(4, ExtReal::of(2.5)));
    }

    #[test]
    fn min_conditional_keeps_measurable_inputs() {
        let (p, _, sub) = fixture();
        let min = PseudoMul::min();
        let x = f(&[3.0, 3.0, 0.1, 0.1]);
        let r = conditional(&min, &p, &x, &sub).unwrap();
        assert_eq!(r.y, x);
        assert_eq!(r.blocks[0].rule, BlockRule::Saturated);
        assert_eq!(r.blocks[1].rule, BlockRule::Residual);
    }

    #[test]
    fn suite_examples() {
        let (p, x, sub) = fixture();
        let times = PseudoMul::times();
        let r = bcj_property_suite(&times, &p, &sub, &x, &x, ExtReal::of(2.0), 1).unwrap();
        assert!(r.all_passed, "{r:?}");
    }

    #[test]
    fn min_suite_converse_fails_on_saturated_blocks() {
        let (p, x, sub) = fixture();
        let r = bcj_property_suite(&PseudoMul::min(), &p, &sub, &x, &x, ExtReal::of(2.0), 1).unwrap();
        assert!(r.defining_property.passed && r.bcj1_only_if.passed);
        assert!(r.bcj3.passed && r.bcj4.passed && r.bcj5.passed && r.bcj6.passed);
        assert!(!r.bcj1_if.passed);
    }

    #[test]
    fn lp_examples() {
        let m = AdditiveMeasure::from_f64(&[0.25; 4]).unwrap();
        let (_, x, sub) = fixture();
        let r = lp_limit_conditional(&m, &x, &sub, &[1.0, 2.0, 5.0, 10.0, 50.0, 200.0]).unwrap();
        assert_eq!(r.idempotent, vec![ExtReal::of(5.0), ExtReal::of(3.0)]);
        assert!(r.monotone);
        assert_eq!(r.rows[0].values, vec![ExtReal::of(3.5), ExtReal::of(2.0)]);
        assert_eq!(r.rows[0].gaps, vec![1.5, 1.0]);
        let expected = 5.0 * (1.0 - 0.5f64.powf(1.0 / 200.0));
        assert!((r.max_gap_last - expected).abs() < 1e-9);

        let r = lp_limit_conditional(&m, &MeasurableFn::constant(4, ExtReal::of(2.0)), &sub, &[1.0, 7.0]).unwrap();
        assert!(r.rows.iter().all(|row| row.gaps.iter().all(|&g| g < 1e-12)));
        assert!(matches!(
            lp_limit_conditional(&AdditiveMeasure::from_f64(&[0.5; 4]).unwrap(), &x, &sub, &[1.0]),
            Err(Error::NotProbability(_))
        ));
    }

    #[test]
    fn sub_algebra_parsing() {
        let space = Space::numbered(4);
        assert!(SubAlgebra::parse(&space, "1+2|2+3|4").is_err());
        assert!(SubAlgebra::parse(&space, "1+2|3").is_err());
        let coarse = SubAlgebra::parse(&space, "1+2|3+4").unwrap();
        assert!(coarse.is_coarser_than(&SubAlgebra::full(4)));
        assert!(SubAlgebra::trivial(4).is_coarser_than(&coarse));
        assert!(!SubAlgebra::full(4).is_coarser_than(&coarse));
        assert_eq!(coarse.sets().count(), 4);
    }
}
