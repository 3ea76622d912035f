//! σ-additive measures on finite algebras.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::maxitive::{delta_measure, is_negligible, sigma_ideals, sigma_principal_violation};
use crate::space::{all_sets, check_len, enumerate_sets, AtomSet, MeasurableFn, SetFn};

/// An additive measure in atom-mass form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditiveMeasure {
    masses: Vec<ExtReal>,
}

impl AdditiveMeasure {
    pub fn new(masses: Vec<ExtReal>) -> Self {
        AdditiveMeasure { masses }
    }

    pub fn from_f64(masses: &[f64]) -> Result<Self> {
        Ok(AdditiveMeasure::new(
            masses.iter().map(|&v| ExtReal::new(v)).collect::<Result<_>>()?,
        ))
    }

    pub fn counting(k: usize) -> Self {
        AdditiveMeasure::new(vec![ExtReal::ONE; k])
    }

    pub fn masses(&self) -> &[ExtReal] {
        &self.masses
    }

    pub fn mass(&self, atom: usize) -> ExtReal {
        self.masses[atom]
    }

    pub fn total(&self) -> ExtReal {
        self.eval(AtomSet::full(self.masses.len()))
    }

    /// First pair of disjoint sets on which additivity fails.
    pub fn additivity_violation(&self) -> Result<Option<(AtomSet, AtomSet)>> {
        let k = self.masses.len();
        for a in enumerate_sets(k, "additivity check")? {
            for b in a.complement(k).subsets() {
                if !self.eval(a.union(b)).approx_eq(self.eval(a).add(self.eval(b))) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }
}

impl SetFn for AdditiveMeasure {
    fn atom_count(&self) -> usize {
        self.masses.len()
    }

    fn eval(&self, set: AtomSet) -> ExtReal {
        set.atoms().fold(ExtReal::ZERO, |acc, a| acc.add(self.masses[a]))
    }
}

/// Density of `num` with respect to `den`: atom mass ratios, `0/0 = 0`.
pub fn classical_rn(num: &AdditiveMeasure, den: &AdditiveMeasure) -> Result<MeasurableFn> {
    let k = num.atom_count();
    check_len(k, den.atom_count())?;
    if let Some(a) = (0..k).find(|&a| den.mass(a).is_zero() && !num.mass(a).is_zero()) {
        return Err(Error::NotAbsolutelyContinuous(format!(
            "atom {a} has mass {} but reference mass 0",
            num.mass(a)
        )));
    }
    let c = MeasurableFn::new(
        (0..k)
            .map(|a| {
                let (r, s) = (num.mass(a), den.mass(a));
                if r.is_zero() {
                    ExtReal::ZERO
                } else if s.is_infinite() {
                    // finite mass against an infinite one has no finite ratio
                    if r.is_infinite() {
                        ExtReal::ONE
                    } else {
                        ExtReal::ZERO
                    }
                } else {
                    ExtReal::clamped(r.get() / s.get())
                }
            })
            .collect(),
    );
    for b in enumerate_sets(k, "classical density")? {
        let integral = b
            .atoms()
            .fold(ExtReal::ZERO, |acc, a| acc.add(c.value(a).mul(den.mass(a))));
        if !integral.approx_eq(num.eval(b)) {
            return Err(Error::NoDensity(format!(
                "∫ c dm = {integral} but the measure is {} on {b:?}",
                num.eval(b)
            )));
        }
    }
    Ok(c)
}

/// Segal localizability checked over every σ-ideal.
pub fn is_localizable(m: &impl SetFn) -> Result<bool> {
    let k = m.atom_count();
    let ideals = sigma_ideals(k)?;
    let dominates = |ideal: &[AtomSet], l: AtomSet| ideal.iter().all(|&s| m.eval(s.difference(l)).is_zero());
    Ok(ideals.iter().all(|ideal| {
        let uppers: Vec<AtomSet> = all_sets(k).filter(|&l| dominates(ideal, l)).collect();
        uppers
            .iter()
            .any(|&l| uppers.iter().all(|&b| m.eval(l.difference(b)).is_zero()))
    }))
}

/// Size of the largest family of pairwise disjoint non-negligible sets. It is
/// at most the number of atoms, so the chain condition always holds.
pub fn disjoint_nonnegligible_bound(w: &impl SetFn) -> usize {
    (0..w.atom_count())
        .filter(|&a| !is_negligible(w, AtomSet::singleton(a)))
        .count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub finite: bool,
    pub sigma_finite: bool,
    pub sigma_principal: bool,
    pub ccc: bool,
    pub localizable: bool,
    /// Implications of the chain that fail on this measure, as `"i=>j"`.
    pub violations: Vec<String>,
}

impl ChainReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates finite, σ-finite, σ-principal, CCC and localizable as separate
/// predicates and checks `1 ⇒ 2 ⇒ 3 ⇒ 4 ⇒ 5`.
pub fn implications_check(m: &AdditiveMeasure) -> Result<ChainReport> {
    let k = m.atom_count();
    sigma_ideals(k)?;
    let finite = m.total().is_finite();
    // a cover by finitely many sets of finite mass exists iff every atom is finite
    let sigma_finite = m.masses().iter().all(|v| v.is_finite());
    let delta = delta_measure(m);
    let sigma_principal = sigma_principal_violation(&delta)?.is_none();
    let ccc = disjoint_nonnegligible_bound(&delta) <= k;
    let localizable = is_localizable(m)?;
    let flags = [finite, sigma_finite, sigma_principal, ccc, localizable];
    let violations = (0..4)
        .filter(|&i| flags[i] && !flags[i + 1])
        .map(|i| format!("{}=>{}", i + 1, i + 2))
        .collect();
    Ok(ChainReport {
        finite,
        sigma_finite,
        sigma_principal,
        ccc,
        localizable,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[f64]) -> AdditiveMeasure {
        AdditiveMeasure::from_f64(v).unwrap()
    }

    #[test]
    fn rn_examples() {
        let c = classical_rn(&m(&[3.0, 0.0]), &m(&[1.0, 2.0])).unwrap();
        assert_eq!(c, MeasurableFn::from_f64(&[3.0, 0.0]).unwrap());
        assert!(matches!(
            classical_rn(&m(&[0.0, 3.0]), &m(&[1.0, 0.0])),
            Err(Error::NotAbsolutelyContinuous(_))
        ));
        let same = m(&[0.5, 4.0, 0.0]);
        assert_eq!(
            classical_rn(&same, &same).unwrap(),
            MeasurableFn::from_f64(&[1.0, 1.0, 0.0]).unwrap()
        );
        assert_eq!(
            classical_rn(&m(&[0.0, 0.0]), &m(&[1.0, 2.0])).unwrap(),
            MeasurableFn::from_f64(&[0.0, 0.0]).unwrap()
        );
    }

    #[test]
    fn additivity() {
        assert_eq!(m(&[1.0, 2.0, f64::INFINITY]).additivity_violation().unwrap(), None);
    }

    #[test]
    fn chain_examples() {
        let r = implications_check(&m(&[1.0, 2.0, 0.5])).unwrap();
        assert!(r.finite && r.sigma_finite && r.sigma_principal && r.ccc && r.localizable);
        let r = implications_check(&m(&[1.0, f64::INFINITY])).unwrap();
        assert!(!r.finite && !r.sigma_finite);
        assert!(r.consistent());
        let r = implications_check(&m(&[0.0, 0.0, 0.0])).unwrap();
        assert!(r.finite && r.localizable && r.consistent());
        assert!(implications_check(&m(&[1.0; 5])).is_err());
    }

    #[test]
    fn delta_of_probability_is_possibility() {
        let d = delta_measure(&m(&[0.25, 0.75, 0.0]));
        assert!(d.is_normed());
        assert_eq!(sigma_principal_violation(&d).unwrap(), None);
    }
}
