//! Seeded random fixtures shared by the invariant suite, the CLI and tests.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::classical::AdditiveMeasure;
use crate::ext::ExtReal;
use crate::maxitive::MaxitiveMeasure;
use crate::possibility::SubAlgebra;
use crate::pseudo_mul::PseudoMul;
use crate::space::{all_sets, AtomSet, MeasurableFn, SetFn, SetFunction};
use crate::supmeasure::rng_for;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    rng_for(seed, stream)
}

/// Values from a small lattice of exact numbers, with `0` and `∞` mixed in.
pub fn value(rng: &mut ChaCha8Rng, zero: f64, inf: f64) -> ExtReal {
    let u: f64 = rng.random();
    if u < zero {
        ExtReal::ZERO
    } else if u < zero + inf {
        ExtReal::INFINITY
    } else {
        ExtReal::of(rng.random_range(1..=16) as f64 / 4.0)
    }
}

/// Log-uniform on `[1e-3, 1e3]`.
pub fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-3.0..=3.0))
}

pub fn values(rng: &mut ChaCha8Rng, k: usize, zero: f64, inf: f64) -> Vec<ExtReal> {
    (0..k).map(|_| value(rng, zero, inf)).collect()
}

pub fn maxitive(rng: &mut ChaCha8Rng, k: usize, zero: f64, inf: f64) -> MaxitiveMeasure {
    MaxitiveMeasure::new(values(rng, k, zero, inf))
}

pub fn finite_maxitive(rng: &mut ChaCha8Rng, k: usize) -> MaxitiveMeasure {
    maxitive(rng, k, 0.2, 0.0)
}

/// Finite, normed, at least one atom of value 1.
pub fn possibility(rng: &mut ChaCha8Rng, k: usize) -> MaxitiveMeasure {
    let mut v: Vec<ExtReal> = (0..k)
        .map(|_| match rng.random_range(0..5) {
            0 => ExtReal::ZERO,
            1 => ExtReal::ONE,
            _ => ExtReal::of(rng.random_range(1..=7) as f64 / 8.0),
        })
        .collect();
    let top = rng.random_range(0..k);
    v[top] = ExtReal::ONE;
    MaxitiveMeasure::new(v)
}

pub fn function(rng: &mut ChaCha8Rng, k: usize, inf: f64) -> MeasurableFn {
    MeasurableFn::new(values(rng, k, 0.15, inf))
}

pub fn set(rng: &mut ChaCha8Rng, k: usize) -> AtomSet {
    AtomSet::from_bits(rng.random_range(0..(1u64 << k)))
}

pub fn nonempty_set(rng: &mut ChaCha8Rng, k: usize) -> AtomSet {
    AtomSet::from_bits(rng.random_range(1..(1u64 << k)))
}

/// Finite positive masses with a few zeros.
pub fn additive(rng: &mut ChaCha8Rng, k: usize) -> AdditiveMeasure {
    AdditiveMeasure::new(
        (0..k)
            .map(|_| if rng.random_bool(0.15) { ExtReal::ZERO } else { ExtReal::of(rng.random_range(1..=12) as f64 / 4.0) })
            .collect(),
    )
}

/// Strictly positive masses summing to one.
pub fn probability(rng: &mut ChaCha8Rng, k: usize) -> AdditiveMeasure {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(1..=9) as f64).collect();
    let total: f64 = raw.iter().sum();
    AdditiveMeasure::new(raw.iter().map(|x| ExtReal::of(x / total)).collect())
}

pub fn subalgebra(rng: &mut ChaCha8Rng, k: usize) -> SubAlgebra {
    let nblocks = rng.random_range(1..=k);
    let mut labels: Vec<usize> = (0..k).map(|a| if a < nblocks { a } else { rng.random_range(0..nblocks) }).collect();
    labels.shuffle(rng);
    let blocks = (0..nblocks)
        .map(|b| AtomSet::from_atoms((0..k).filter(|&a| labels[a] == b)))
        .collect();
    SubAlgebra::new(k, blocks).expect("labels cover every block")
}

/// A coarsening of `f` obtained by merging random pairs of blocks.
pub fn coarsening(rng: &mut ChaCha8Rng, k: usize, f: &SubAlgebra) -> SubAlgebra {
    let mut blocks = f.blocks().to_vec();
    let merges = rng.random_range(0..blocks.len());
    for _ in 0..merges {
        let i = rng.random_range(0..blocks.len());
        let b = blocks.swap_remove(i);
        let j = rng.random_range(0..blocks.len());
        blocks[j] = blocks[j].union(b);
    }
    SubAlgebra::new(k, blocks).expect("merged blocks still partition")
}

/// A monotone set function vanishing at `∅` that is not maxitive: a maxitive
/// table with one value raised strictly above the maximum of its parts.
pub fn non_maxitive(rng: &mut ChaCha8Rng, k: usize) -> SetFunction {
    assert!(k >= 2, "needs two atoms");
    loop {
        let base = finite_maxitive(rng, k);
        let table = SetFunction::tabulate(&base).expect("small k");
        let candidates: Vec<AtomSet> = all_sets(k).filter(|b| b.len() >= 2).collect();
        let target = *candidates.choose(rng).expect("k >= 2");
        let bump = ExtReal::of(rng.random_range(1..=8) as f64 / 4.0);
        let raised = table.eval(target).add(bump);
        // keep monotone: every superset gets at least the raised value
        let out = SetFunction::from_fn(k, |b| {
            let v = table.eval(b);
            if target.is_subset(b) { v.max(raised) } else { v }
        })
        .expect("small k");
        if crate::maxitive::maxitivity_violation(&out).is_some() {
            return out;
        }
    }
}

/// An exact operation chosen uniformly.
pub fn op(rng: &mut ChaCha8Rng) -> PseudoMul {
    if rng.random_bool(0.5) { PseudoMul::times() } else { PseudoMul::min() }
}
