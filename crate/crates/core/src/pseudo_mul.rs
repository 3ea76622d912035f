//! Pseudo-multiplications and ordered residual semigroups on `[0, ∞]`.
//!
//! The builtin operations are `×` and `∧` (pseudo-multiplications, both exact
//! residual semigroups) and `+` and `⊕ = max` (residual semigroups that are
//! not exact and not pseudo-multiplications). Custom operations are given as
//! value tables over a declared grid.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// Which operation a [`SemigroupOp`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpName {
    Times,
    Plus,
    Max,
    Min,
    Custom,
}

/// A binary operation given by its values on a finite grid, interpolated
/// bilinearly between grid points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomTable {
    pub name: String,
    /// Increasing grid; must contain `0`, `1` and `∞`.
    pub grid: Vec<ExtReal>,
    /// `table[i][j] = grid[i] ⊙ grid[j]`.
    pub table: Vec<Vec<ExtReal>>,
    pub identity: ExtReal,
}

impl CustomTable {
    fn validate(&self) -> Result<()> {
        let n = self.grid.len();
        if n < 2 || self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGrid(format!(
                "custom op `{}`: table must be {n}x{n}",
                self.name
            )));
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidGrid("custom grid must be strictly increasing".into()));
        }
        for needed in [ExtReal::ZERO, ExtReal::ONE, ExtReal::INFINITY] {
            if !self.grid.contains(&needed) {
                return Err(Error::InvalidGrid(format!("custom grid must contain {needed}")));
            }
        }
        Ok(())
    }

    /// Bracketing grid indices and the weight of the upper one.
    fn locate(&self, x: ExtReal) -> (usize, usize, f64) {
        if let Ok(i) = self.grid.binary_search(&x) {
            return (i, i, 0.0);
        }
        let upper = self.grid.partition_point(|&g| g < x);
        let lower = upper - 1; // grid contains 0, so upper >= 1
        let (lo, hi) = (self.grid[lower], self.grid[upper]);
        if hi.is_infinite() {
            // beyond the largest finite grid point: clamp
            return (lower, lower, 0.0);
        }
        (lower, upper, (x.get() - lo.get()) / (hi.get() - lo.get()))
    }

    fn eval(&self, s: ExtReal, t: ExtReal) -> ExtReal {
        let (i0, i1, a) = self.locate(s);
        let (j0, j1, b) = self.locate(t);
        let corners = [
            (self.table[i0][j0], (1.0 - a) * (1.0 - b)),
            (self.table[i1][j0], a * (1.0 - b)),
            (self.table[i0][j1], (1.0 - a) * b),
            (self.table[i1][j1], a * b),
        ];
        let mut acc = 0.0;
        for (v, w) in corners {
            if w > 0.0 {
                if v.is_infinite() {
                    return ExtReal::INFINITY;
                }
                acc += w * v.get();
            }
        }
        ExtReal::clamped(acc)
    }
}

#[derive(Clone, PartialEq)]
enum Kind {
    Times,
    Plus,
    Max,
    Min,
    Custom(Arc<CustomTable>),
}

/// An ordered semigroup operation `⊙` on `[0, ∞]` with its residuation.
#[derive(Clone, PartialEq)]
pub struct SemigroupOp {
    kind: Kind,
    exact: bool,
}

impl fmt::Debug for SemigroupOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemigroupOp({})", self.label())
    }
}

impl SemigroupOp {
    pub fn times() -> Self {
        SemigroupOp { kind: Kind::Times, exact: true }
    }

    pub fn plus() -> Self {
        SemigroupOp { kind: Kind::Plus, exact: false }
    }

    pub fn max() -> Self {
        SemigroupOp { kind: Kind::Max, exact: false }
    }

    pub fn min() -> Self {
        SemigroupOp { kind: Kind::Min, exact: true }
    }

    /// A table-driven operation. Its exact flag is set only if exactness
    /// holds at every grid pair.
    pub fn custom(table: CustomTable) -> Result<Self> {
        table.validate()?;
        let mut op = SemigroupOp {
            kind: Kind::Custom(Arc::new(table)),
            exact: false,
        };
        op.exact = op.exactness_on_grid(op.custom_grid().unwrap());
        Ok(op)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "times" | "x" | "*" => Ok(Self::times()),
            "plus" | "+" => Ok(Self::plus()),
            "max" => Ok(Self::max()),
            "min" => Ok(Self::min()),
            other => Err(Error::UnknownOperation(other.to_owned())),
        }
    }

    pub fn name(&self) -> OpName {
        match self.kind {
            Kind::Times => OpName::Times,
            Kind::Plus => OpName::Plus,
            Kind::Max => OpName::Max,
            Kind::Min => OpName::Min,
            Kind::Custom(_) => OpName::Custom,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Custom(t) => t.name.clone(),
            _ => serde_json::to_value(self.name())
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
        }
    }

    fn custom_grid(&self) -> Option<&[ExtReal]> {
        match &self.kind {
            Kind::Custom(t) => Some(&t.grid),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Candidate identity `1_⊙`.
    pub fn identity(&self) -> ExtReal {
        match &self.kind {
            Kind::Times => ExtReal::ONE,
            Kind::Min => ExtReal::INFINITY,
            Kind::Plus | Kind::Max => ExtReal::ZERO,
            Kind::Custom(t) => t.identity,
        }
    }

    /// `s ⊙ t`.
    pub fn eval(&self, s: ExtReal, t: ExtReal) -> ExtReal {
        match &self.kind {
            Kind::Times => s.mul(t),
            Kind::Plus => s.add(t),
            Kind::Max => s.max(t),
            Kind::Min => s.min(t),
            Kind::Custom(table) => table.eval(s, t),
        }
    }

    /// `r ≪_⊙ s`: some `t` satisfies `r ≤ t ⊙ s`, i.e. `r ≤ ∞ ⊙ s`.
    pub fn dominates(&self, r: ExtReal, s: ExtReal) -> bool {
        r.approx_le(self.eval(ExtReal::INFINITY, s))
    }

    /// The residual `(r/s)_⊙`, the least `t` with `r ≤ t ⊙ s`.
    ///
    /// For `×` and `s = ∞` the least element does not exist when `r > 0`
    /// (`{t : r ≤ t·∞} = (0, ∞]`); the infimum is returned (`0` for finite
    /// `r`, and `∞` for `r = ∞` so that `(∞/∞)_× × ∞ = ∞`).
    pub fn residual(&self, r: ExtReal, s: ExtReal) -> Result<ExtReal> {
        let not_dominated = || {
            Error::NotAbsolutelyContinuous(format!(
                "{r} is not {}-dominated by {s}",
                self.label()
            ))
        };
        match &self.kind {
            Kind::Times => {
                if s.is_zero() {
                    if r.is_zero() {
                        Ok(ExtReal::ZERO)
                    } else {
                        Err(not_dominated())
                    }
                } else if s.is_infinite() {
                    Ok(if r.is_infinite() { ExtReal::INFINITY } else { ExtReal::ZERO })
                } else if r.is_infinite() {
                    Ok(ExtReal::INFINITY)
                } else {
                    Ok(ExtReal::clamped(r.get() / s.get()))
                }
            }
            Kind::Plus => Ok(r.monus(s)),
            Kind::Max => Ok(if r <= s { ExtReal::ZERO } else { r }),
            Kind::Min => {
                if r <= s {
                    Ok(r)
                } else {
                    Err(not_dominated())
                }
            }
            Kind::Custom(table) => {
                if !self.dominates(r, s) {
                    return Err(not_dominated());
                }
                table
                    .grid
                    .iter()
                    .copied()
                    .find(|&t| r.approx_le(table.eval(t, s)))
                    .ok_or_else(not_dominated)
            }
        }
    }

    /// Whether `(r/s)_⊙` exists as a least element. Outside this region
    /// [`residual`](Self::residual) returns the infimum.
    pub fn residual_defined(&self, r: ExtReal, s: ExtReal) -> bool {
        !residual_unattained(self, r, s)
    }

    /// `O(t) = inf_{s > 0} s ⊙ t`.
    pub fn o_map(&self, t: ExtReal) -> ExtReal {
        match &self.kind {
            Kind::Times => {
                if t.is_infinite() {
                    ExtReal::INFINITY
                } else {
                    ExtReal::ZERO
                }
            }
            Kind::Min => ExtReal::ZERO,
            Kind::Plus | Kind::Max => t,
            Kind::Custom(table) => table
                .grid
                .iter()
                .filter(|g| !g.is_zero())
                .map(|&s| table.eval(s, t))
                .min()
                .unwrap_or(ExtReal::INFINITY),
        }
    }

    /// `t ≪_⊙ ∞`, i.e. `O(t) = 0`.
    pub fn is_odot_finite(&self, t: ExtReal) -> bool {
        self.o_map(t).is_zero()
    }

    fn exactness_on_grid(&self, grid: &[ExtReal]) -> bool {
        grid.iter().all(|&r| {
            grid.iter().all(|&s| match self.residual(r, s) {
                Ok(q) => self.eval(q, s).approx_eq(r),
                Err(_) => true,
            })
        })
    }
}

/// A verified pseudo-multiplication: associative, monotone, with left
/// identity, annihilating zero and no zero divisors.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoMul(SemigroupOp);

impl PseudoMul {
    pub fn times() -> Self {
        PseudoMul(SemigroupOp::times())
    }

    pub fn min() -> Self {
        PseudoMul(SemigroupOp::min())
    }

    /// Accepts `op` if every axiom holds on `grid`.
    pub fn try_new(op: SemigroupOp, grid: &[ExtReal]) -> Result<Self> {
        let report = verify_axioms(&op, grid);
        if report.all_passed() {
            Ok(PseudoMul(op))
        } else {
            Err(Error::AxiomsFailed(report.failures.join("; ")))
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::try_new(SemigroupOp::from_name(name)?, &default_grid())
    }

    pub fn op(&self) -> &SemigroupOp {
        &self.0
    }

    /// Fails with `NonExactOperation` unless the residuation is exact.
    pub fn require_exact(&self) -> Result<()> {
        if self.0.is_exact() {
            Ok(())
        } else {
            Err(Error::NonExactOperation(self.0.label()))
        }
    }
}

impl Deref for PseudoMul {
    type Target = SemigroupOp;

    fn deref(&self) -> &SemigroupOp {
        &self.0
    }
}

/// Verification grid: `0`, `1`, `∞` and 24 finite positive points spread
/// over `[1e-3, 1e3]`.
pub fn default_grid() -> Vec<ExtReal> {
    let mut g: Vec<ExtReal> = vec![ExtReal::ZERO, ExtReal::ONE, ExtReal::INFINITY];
    for i in 0..=24 {
        let x = 10f64.powf(-3.0 + 6.0 * i as f64 / 24.0);
        g.push(ExtReal::of(x));
    }
    for x in [0.5, 2.0, 3.0, 5.0, 7.0] {
        g.push(ExtReal::of(x));
    }
    g.sort();
    g.dedup_by(|a, b| a.approx_eq_tol(*b, 1e-12));
    g
}

/// Outcome of [`verify_axioms`]: one flag per axiom plus the continuity probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub op: String,
    pub associativity: bool,
    pub monotone_left: bool,
    pub monotone_right: bool,
    pub left_identity: bool,
    pub annihilator: bool,
    pub no_zero_divisors: bool,
    pub continuity: bool,
    pub max_continuity_jump: f64,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.associativity
            && self.monotone_left
            && self.monotone_right
            && self.left_identity
            && self.annihilator
            && self.no_zero_divisors
            && self.continuity
    }
}

const CONTINUITY_THRESHOLD: f64 = 1e-3;

/// Checks the pseudo-multiplication axioms of `op` on `grid`.
///
/// Failures are reported, never raised. Continuity on `(0, ∞) × [0, ∞]` is
/// probed by relative perturbations of size `1e-3` refined to `1e-6`.
pub fn verify_axioms(op: &SemigroupOp, grid: &[ExtReal]) -> AxiomReport {
    let mut failures = Vec::new();
    let mut first = |flag: &mut bool, msg: String| {
        if *flag {
            failures.push(msg);
        }
        *flag = false;
    };

    let (mut assoc, mut mono_l, mut mono_r) = (true, true, true);
    let (mut ident, mut annih, mut nzd) = (true, true, true);
    let one = op.identity();

    for &s in grid {
        for &t in grid {
            let st = op.eval(s, t);
            for &u in grid {
                let lhs = op.eval(st, u);
                let rhs = op.eval(s, op.eval(t, u));
                if assoc && !lhs.approx_eq(rhs) {
                    first(&mut assoc, format!("associativity at ({s},{t},{u}): {lhs} != {rhs}"));
                }
                if s <= t && mono_l && !op.eval(s, u).approx_le(op.eval(t, u)) {
                    first(&mut mono_l, format!("monotone in first argument at ({s},{t};{u})"));
                }
                if s <= t && mono_r && !op.eval(u, s).approx_le(op.eval(u, t)) {
                    first(&mut mono_r, format!("monotone in second argument at ({u};{s},{t})"));
                }
            }
            if nzd && st.is_zero() && !s.is_zero() && !t.is_zero() {
                first(&mut nzd, format!("zero divisors {s} and {t}"));
            }
        }
        if ident && !op.eval(one, s).approx_eq(s) {
            first(&mut ident, format!("left identity {one} fails at {s}"));
        }
        if annih && !(op.eval(ExtReal::ZERO, s).is_zero() && op.eval(s, ExtReal::ZERO).is_zero()) {
            first(
                &mut annih,
                format!("0 is not an annihilator: 0 op {s} = {}", op.eval(ExtReal::ZERO, s)),
            );
        }
    }

    let mut max_jump: f64 = 0.0;
    let rel_jump = |a: ExtReal, b: ExtReal| -> f64 {
        if a == b {
            0.0
        } else if a.is_infinite() || b.is_infinite() {
            f64::INFINITY
        } else {
            (a.get() - b.get()).abs() / 1f64.max(a.get().abs())
        }
    };
    for &s in grid.iter().filter(|g| g.is_finite() && !g.is_zero()) {
        for &t in grid {
            let base = op.eval(s, t);
            let probe = |h: f64| {
                let mut j = rel_jump(base, op.eval(ExtReal::of(s.get() * (1.0 + h)), t))
                    .max(rel_jump(base, op.eval(ExtReal::of(s.get() * (1.0 - h)), t)));
                if t.is_finite() && !t.is_zero() {
                    j = j
                        .max(rel_jump(base, op.eval(s, ExtReal::of(t.get() * (1.0 + h)))))
                        .max(rel_jump(base, op.eval(s, ExtReal::of(t.get() * (1.0 - h)))));
                }
                j
            };
            let coarse = probe(1e-3);
            let jump = if coarse > CONTINUITY_THRESHOLD { probe(1e-6) } else { coarse };
            max_jump = max_jump.max(jump);
        }
    }
    let continuity = max_jump <= CONTINUITY_THRESHOLD;
    if !continuity {
        failures.push(format!("sampled discontinuity: relative jump {max_jump:e}"));
    }

    AxiomReport {
        op: op.label(),
        associativity: assoc,
        monotone_left: mono_l,
        monotone_right: mono_r,
        left_identity: ident,
        annihilator: annih,
        no_zero_divisors: nzd,
        continuity,
        max_continuity_jump: max_jump,
        failures,
    }
}

/// `inf_{t ∈ T} (t ⊙ s) = (inf T) ⊙ s` within tolerance.
pub fn check_inf_distributivity(op: &SemigroupOp, ts: &[ExtReal], s: ExtReal) -> bool {
    let Some(&inf_t) = ts.iter().min() else {
        return true;
    };
    let lhs = ts.iter().map(|&t| op.eval(t, s)).min().unwrap();
    lhs.approx_eq(op.eval(inf_t, s))
}

/// Galois property `r ≤ t ⊙ s ⇔ (r/s)_⊙ ≤ t` at one triple; `None` when
/// `r ≪_⊙ s` fails.
pub fn galois_holds(op: &SemigroupOp, r: ExtReal, s: ExtReal, t: ExtReal) -> Option<bool> {
    let q = op.residual(r, s).ok()?;
    Some(r.approx_le(op.eval(t, s)) == q.approx_le(t))
}

/// Whether `(r, s)` lies outside the region where the residual is attained:
/// for `×`, `s = ∞` with `r > 0`.
pub fn residual_unattained(op: &SemigroupOp, r: ExtReal, s: ExtReal) -> bool {
    op.name() == OpName::Times && s.is_infinite() && !r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> ExtReal {
        ExtReal::of(v)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(SemigroupOp::times().eval(ExtReal::ZERO, ExtReal::INFINITY), ExtReal::ZERO);
        assert_eq!(SemigroupOp::min().identity(), ExtReal::INFINITY);
        assert_eq!(SemigroupOp::min().eval(ExtReal::INFINITY, x(5.0)), x(5.0));
        assert_eq!(SemigroupOp::plus().eval(x(3.0), ExtReal::INFINITY), ExtReal::INFINITY);
        assert_eq!(SemigroupOp::max().eval(x(3.0), x(5.0)), x(5.0));
    }

    #[test]
    fn axiom_examples() {
        let g = default_grid();
        assert!(g.len() >= 23);
        assert!(verify_axioms(&SemigroupOp::times(), &g).all_passed());
        let r = verify_axioms(&SemigroupOp::min(), &g);
        assert!(r.all_passed(), "{:?}", r.failures);
        let r = verify_axioms(&SemigroupOp::max(), &g);
        assert!(!r.annihilator);
        assert_eq!(SemigroupOp::max().eval(ExtReal::ZERO, ExtReal::ONE), ExtReal::ONE);
        assert!(!verify_axioms(&SemigroupOp::plus(), &g).annihilator);
    }

    #[test]
    fn residual_table() {
        let plus = SemigroupOp::plus();
        assert_eq!(plus.residual(x(5.0), x(3.0)).unwrap(), x(2.0));
        assert_eq!(plus.residual(x(3.0), x(5.0)).unwrap(), x(0.0));
        let max = SemigroupOp::max();
        assert_eq!(max.residual(x(5.0), x(3.0)).unwrap(), x(5.0));
        assert_eq!(max.residual(x(3.0), x(5.0)).unwrap(), x(0.0));
        let times = SemigroupOp::times();
        let q = times.residual(x(2.0), x(4.0)).unwrap();
        assert_eq!(q, x(0.5));
        assert_eq!(times.eval(q, x(4.0)), x(2.0));
        assert_eq!(times.residual(ExtReal::ZERO, ExtReal::ZERO).unwrap(), ExtReal::ZERO);
        assert_eq!(
            times.residual(ExtReal::INFINITY, ExtReal::INFINITY).unwrap(),
            ExtReal::INFINITY
        );
        assert!(matches!(
            times.residual(x(1.0), ExtReal::ZERO),
            Err(Error::NotAbsolutelyContinuous(_))
        ));
        let min = SemigroupOp::min();
        assert_eq!(min.residual(x(2.0), x(3.0)).unwrap(), x(2.0));
        assert!(min.residual(x(4.0), x(3.0)).is_err());
    }

    #[test]
    fn non_exact_witnesses() {
        let plus = SemigroupOp::plus();
        assert_eq!(plus.eval(plus.residual(x(5.0), x(3.0)).unwrap(), x(3.0)), x(5.0));
        assert_eq!(plus.eval(plus.residual(x(3.0), x(5.0)).unwrap(), x(5.0)), x(5.0));
        assert!(!plus.is_exact());
        assert!(!SemigroupOp::max().is_exact());
        assert!(SemigroupOp::times().is_exact());
        assert!(SemigroupOp::min().is_exact());
    }

    #[test]
    fn odot_finiteness() {
        let times = SemigroupOp::times();
        assert!(times.is_odot_finite(x(7.0)));
        assert!(!times.is_odot_finite(ExtReal::INFINITY));
        assert!(SemigroupOp::min().is_odot_finite(ExtReal::INFINITY));
        assert!(times.o_map(ExtReal::ONE).is_zero());
        assert!(SemigroupOp::min().o_map(ExtReal::INFINITY).is_zero());
    }

    #[test]
    fn inf_distributivity_examples() {
        assert!(check_inf_distributivity(&SemigroupOp::times(), &[x(2.0), x(3.0), x(5.0)], x(4.0)));
        assert!(check_inf_distributivity(&SemigroupOp::min(), &[x(2.0), x(5.0)], x(3.0)));
        assert!(check_inf_distributivity(
            &SemigroupOp::plus(),
            &[x(1.0), x(4.0)],
            ExtReal::INFINITY
        ));
    }

    #[test]
    fn galois_on_grid() {
        let g = default_grid();
        for op in [SemigroupOp::times(), SemigroupOp::min(), SemigroupOp::plus(), SemigroupOp::max()] {
            for &r in &g {
                for &s in &g {
                    if residual_unattained(&op, r, s) {
                        continue;
                    }
                    for &t in &g {
                        assert_ne!(galois_holds(&op, r, s, t), Some(false), "{op:?} r={r} s={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn times_residual_is_unattained_at_infinity() {
        // {t : 1 <= t * inf} = (0, inf] has no least element
        let op = SemigroupOp::times();
        assert_eq!(galois_holds(&op, x(1.0), ExtReal::INFINITY, ExtReal::ZERO), Some(false));
        assert_eq!(
            galois_holds(&op, ExtReal::INFINITY, ExtReal::INFINITY, ExtReal::ONE),
            Some(false)
        );
    }

    #[test]
    fn custom_table_matches_times() {
        let grid: Vec<ExtReal> = [0.0, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&v| x(v))
            .chain([ExtReal::INFINITY])
            .collect();
        let table = grid
            .iter()
            .map(|&a| grid.iter().map(|&b| a.mul(b)).collect())
            .collect();
        let op = SemigroupOp::custom(CustomTable {
            name: "tabled-times".into(),
            grid: grid.clone(),
            table,
            identity: ExtReal::ONE,
        })
        .unwrap();
        assert_eq!(op.eval(x(2.0), x(4.0)), x(8.0));
        assert_eq!(op.eval(x(1.5), x(1.0)), x(1.5));
        let report = verify_axioms(&op, &grid);
        assert!(report.annihilator && report.left_identity && report.no_zero_divisors);
        assert_eq!(op.residual(x(2.0), x(4.0)).unwrap(), x(0.5));
    }
}
