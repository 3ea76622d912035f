use maxmeasure::integral::{gerritse_integral, measure_with_density, sweep_integral};
use maxmeasure::maxitive::{atom_decomposition, classify};
use maxmeasure::model::{parse_measure, Measure};
use maxmeasure::possibility::{conditional, PossibilitySpace, SubAlgebra};
use maxmeasure::pseudo_mul::{galois_holds, residual_unattained};
use maxmeasure::radon_nikodym::{bcj_density, rn_density};
use maxmeasure::space::all_sets;
use maxmeasure::supmeasure::{sample_supmeasure, ControlMeasure, SampleMode};
use maxmeasure::{
    AdditiveMeasure, AtomSet, ExtReal, MaxitiveMeasure, MeasurableFn, PseudoMul, SemigroupOp, SetFn, SetFunction,
    Space,
};
use proptest::prelude::*;

fn ext() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::ZERO),
        1 => Just(ExtReal::INFINITY),
        6 => (1u32..=40).prop_map(|n| ExtReal::of(n as f64 / 4.0)),
        2 => (1e-6f64..1e6).prop_map(ExtReal::of),
    ]
}

fn finite_ext() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::ZERO),
        6 => (1u32..=40).prop_map(|n| ExtReal::of(n as f64 / 4.0)),
    ]
}

fn op() -> impl Strategy<Value = PseudoMul> {
    prop_oneof![Just(PseudoMul::times()), Just(PseudoMul::min())]
}

/// `(k, ν, f, B)` on a common atom count.
fn integral_case(max_k: usize) -> impl Strategy<Value = (usize, MaxitiveMeasure, MeasurableFn, AtomSet)> {
    (1..=max_k).prop_flat_map(|k| {
        (
            Just(k),
            prop::collection::vec(ext(), k).prop_map(MaxitiveMeasure::new),
            prop::collection::vec(ext(), k).prop_map(MeasurableFn::new),
            (0u64..(1 << k)).prop_map(AtomSet::from_bits),
        )
    })
}

fn partition_of(k: usize, labels: &[usize]) -> SubAlgebra {
    let mut blocks: Vec<AtomSet> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (a, &l) in labels.iter().enumerate().take(k) {
        match seen.iter().position(|&s| s == l) {
            Some(i) => blocks[i] = blocks[i].union(AtomSet::singleton(a)),
            None => {
                seen.push(l);
                blocks.push(AtomSet::singleton(a));
            }
        }
    }
    SubAlgebra::new(k, blocks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ext_real_serde_round_trip(v in ext()) {
        let text = serde_json::to_string(&v).unwrap();
        let back: ExtReal = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.get().to_bits(), v.get().to_bits());
    }

    #[test]
    fn boolean_laws(k in 1usize..=8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let mask = AtomSet::full(k).bits();
        let (a, b, c) = (AtomSet::from_bits(a & mask), AtomSet::from_bits(b & mask), AtomSet::from_bits(c & mask));
        prop_assert_eq!(a.intersection(b.union(c)), a.intersection(b).union(a.intersection(c)));
        prop_assert_eq!(a.union(b).complement(k), a.complement(k).intersection(b.complement(k)));
        prop_assert_eq!(a.difference(b).union(a.intersection(b)), a);
    }

    #[test]
    fn level_sets_decrease((_, _, f, _) in integral_case(8), s in ext(), t in ext()) {
        let (lo, hi) = (s.min(t), s.max(t));
        prop_assert!(f.level_set(hi).is_subset(f.level_set(lo)));
        prop_assert!(f.level_set(lo).is_subset(f.level_set_ge(lo)));
    }

    #[test]
    fn maxitive_measures_are_maxitive((k, nu, _, b) in integral_case(6), c in any::<u64>()) {
        let c = AtomSet::from_bits(c & AtomSet::full(k).bits());
        prop_assert_eq!(nu.eval(b.union(c)), nu.eval(b).max(nu.eval(c)));
        prop_assert!(nu.eval(AtomSet::EMPTY).is_zero());
        let rep = classify(&SetFunction::tabulate(&nu).unwrap()).unwrap();
        prop_assert!(rep.maxitive && rep.monotone && rep.null_additive);
    }

    #[test]
    fn galois(r in ext(), s in ext(), t in ext()) {
        for op in [SemigroupOp::times(), SemigroupOp::min(), SemigroupOp::plus(), SemigroupOp::max()] {
            if !residual_unattained(&op, r, s) {
                prop_assert_ne!(galois_holds(&op, r, s, t), Some(false), "{}", op.label());
            }
        }
    }

    #[test]
    fn evaluators_agree(op in op(), (_, nu, f, b) in integral_case(5)) {
        let sweep = sweep_integral(&op, &f, &nu, b);
        let oracle = gerritse_integral(&op, &f, &nu, b).unwrap();
        prop_assert!(sweep.approx_eq(oracle), "{} vs {}", sweep, oracle);
    }

    #[test]
    fn homogeneity(op in op(), (k, nu, f, _) in integral_case(6), r in ext()) {
        let full = AtomSet::full(k);
        let lhs = sweep_integral(&op, &f.map(|v| op.eval(r, v)), &nu, full);
        let rhs = op.eval(r, sweep_integral(&op, &f, &nu, full));
        prop_assert!(lhs.approx_eq(rhs));
    }

    #[test]
    fn atom_decomposition_reconstructs((k, nu, _, _) in integral_case(7)) {
        let d = atom_decomposition(&nu).unwrap();
        prop_assert!(nu.eval(d.residual_null).is_zero());
        for b in all_sets(k) {
            let m = d.atoms.iter().map(|&h| nu.eval(b.intersection(h))).max().unwrap_or(ExtReal::ZERO);
            prop_assert_eq!(nu.eval(b), m);
        }
    }

    #[test]
    fn rn_round_trip(op in op(), pairs in prop::collection::vec((finite_ext(), finite_ext()), 1..=6)) {
        // ν = c ⊙ τ atomwise is dominated by construction
        let tau = MaxitiveMeasure::new(pairs.iter().map(|p| p.0).collect());
        let nu = MaxitiveMeasure::new(pairs.iter().map(|p| op.eval(p.1, p.0)).collect());
        let c = rn_density(&op, &nu, &tau).unwrap();
        let back = measure_with_density(&op, &c, &tau).unwrap();
        for b in all_sets(nu.atom_count()) {
            prop_assert!(back.eval(b).approx_eq(nu.eval(b)));
        }
    }

    #[test]
    fn bcj_reconstruction(pairs in prop::collection::vec((1u32..=12, finite_ext()), 1..=5)) {
        let m = AdditiveMeasure::new(pairs.iter().map(|p| ExtReal::of(p.0 as f64 / 4.0)).collect());
        let nu = MaxitiveMeasure::new(pairs.iter().map(|p| if p.1.is_zero() { ExtReal::ONE } else { p.1 }).collect());
        let env = bcj_density(&nu, &m).unwrap();
        for b in all_sets(nu.atom_count()) {
            let rec = b
                .subsets()
                .skip(1)
                .map(|s| ExtReal::clamped(env.m_nu.eval(s).get() / m.eval(s).get()))
                .max()
                .unwrap_or(ExtReal::ZERO);
            prop_assert!(rec.approx_eq(nu.eval(b)));
        }
    }

    #[test]
    fn conditional_defining_property(
        op in op(),
        atoms in prop::collection::vec((0u32..=8, ext(), 0usize..3), 1..=6),
        top in any::<prop::sample::Index>(),
    ) {
        let k = atoms.len();
        let mut pi: Vec<ExtReal> = atoms.iter().map(|a| ExtReal::of(a.0 as f64 / 8.0)).collect();
        pi[top.index(k)] = ExtReal::ONE;
        let p = PossibilitySpace::new(MaxitiveMeasure::new(pi)).unwrap();
        let x = MeasurableFn::new(atoms.iter().map(|a| a.1).collect());
        let f = partition_of(k, &atoms.iter().map(|a| a.2).collect::<Vec<_>>());
        let y = conditional(&op, &p, &x, &f).unwrap().y;
        prop_assert!(f.is_measurable(&y));
        for a in f.sets() {
            let lhs = gerritse_integral(&op, &x, p.pi(), a).unwrap();
            let rhs = gerritse_integral(&op, &y, p.pi(), a).unwrap();
            prop_assert!(lhs.approx_eq(rhs));
        }
    }

    #[test]
    fn measure_json_round_trip((k, nu, _, _) in integral_case(5)) {
        let labels: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
        let space = Space::discrete(&labels).unwrap();
        let m = Measure::Maxitive(nu);
        prop_assert_eq!(parse_measure(&space, &m.to_json(&space)).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), stream in any::<u64>(), masses in prop::collection::vec(0.01f64..5.0, 1..=4)) {
        let m = ControlMeasure::new(masses).unwrap();
        for mode in [SampleMode::Exact, SampleMode::poisson(0.05)] {
            let a = sample_supmeasure(&m, 2.0, mode, seed, stream).unwrap();
            let b = sample_supmeasure(&m, 2.0, mode, seed, stream).unwrap();
            prop_assert_eq!(&a, &b);
            let mm = a.measure();
            prop_assert!(mm.eval(AtomSet::EMPTY).is_zero());
            let full = AtomSet::full(m.atom_count());
            prop_assert_eq!(mm.eval(full), a.values.iter().copied().max().unwrap());
        }
    }
}
