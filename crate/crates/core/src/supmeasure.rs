//! Monte Carlo simulation of Fréchet random sup-measures on a finite space.
//!
//! A `p`-Fréchet random sup-measure with control measure `m` satisfies
//! `P[M(B) ≤ x] = exp(−m(B) x^{−p})` and is independent over disjoint sets.
//! It is the maximum over a Poisson process `(X_k, T_k)` with intensity
//! `p x^{−p−1} dx × m(dt)`.
//!
//! Every sample is drawn from a ChaCha8 generator seeded with `seed` and
//! switched to stream `stream`, so each `(seed, stream)` pair reproduces the
//! same sample bit for bit.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, Poisson};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::integral::shilkret;
use crate::ks::{ks_one_sample, ks_two_sample, KsResult};
use crate::maxitive::MaxitiveMeasure;
use crate::space::{check_len, AtomSet, MeasurableFn};

pub const DEFAULT_EPSILON: f64 = 1e-3;

/// Offset added to replicate indices for the Poisson half of a two-sample
/// comparison, keeping its streams disjoint from the exact half.
const POISSON_STREAM_OFFSET: u64 = 1 << 40;

/// Finite additive control measure with nonnegative atom masses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControlMeasure {
    masses: Vec<f64>,
}

impl ControlMeasure {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = masses.iter().find(|&&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidValue(bad));
        }
        if masses.iter().sum::<f64>() <= 0.0 {
            return Err(Error::InvalidSetFunction("control measure must have positive total mass".into()));
        }
        Ok(ControlMeasure { masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atom_count(&self) -> usize {
        self.masses.len()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn measure(&self, b: AtomSet) -> f64 {
        b.atoms().map(|a| self.masses[a]).sum()
    }

    /// `‖f‖_p^p = Σ f(a)^p m(a)`.
    pub fn norm_pp(&self, f: &MeasurableFn, p: f64) -> f64 {
        (0..self.masses.len())
            .map(|a| if self.masses[a] == 0.0 { 0.0 } else { f.value(a).get().powf(p) * self.masses[a] })
            .sum()
    }
}

/// How the Poisson points above `ε` are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoissonScheme {
    /// `N ~ Poisson(m(E) ε^{−p})` points with `x = ε U^{−1/p}`, drawn one by
    /// one.
    Iid,
    /// Points in decreasing order, `x_k = (m(E) / Γ_k)^{1/p}` for the arrival
    /// times `Γ_k` of a unit-rate Poisson process, stopping once every atom of
    /// positive mass has received a point. Smaller points cannot change any
    /// atom maximum; their number is drawn in one step.
    Ordered,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SampleMode {
    Exact,
    Poisson { epsilon: f64, scheme: PoissonScheme },
}

impl SampleMode {
    pub fn poisson(epsilon: f64) -> Self {
        SampleMode::Poisson { epsilon, scheme: PoissonScheme::Ordered }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub atom: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointConfig {
    /// Points retained by the generator: all of them for the iid scheme,
    /// those drawn before stopping for the ordered scheme.
    pub points: Vec<Point>,
    /// Number of points above `ε`.
    pub count: u64,
    pub epsilon: f64,
    pub scheme: PoissonScheme,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupMeasureSample {
    pub values: Vec<ExtReal>,
    pub seed: u64,
    pub stream: u64,
    pub points: Option<PointConfig>,
}

impl SupMeasureSample {
    /// The realized sup-measure `B ↦ max_{a ∈ B} M(a)`.
    pub fn measure(&self) -> MaxitiveMeasure {
        MaxitiveMeasure::new(self.values.clone())
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_shape(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidShape(p))
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTruncation(eps))
    }
}

/// Uniform on `(0, 1]`.
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

fn sample_exact(m: &ControlMeasure, p: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    m.masses
        .iter()
        .map(|&w| {
            if w == 0.0 {
                0.0
            } else {
                // inverse of exp(−w x^{−p})
                let e = -open_uniform(rng).ln();
                (w / e).powf(1.0 / p)
            }
        })
        .collect()
}

fn sample_poisson(
    m: &ControlMeasure,
    p: f64,
    eps: f64,
    scheme: PoissonScheme,
    keep_points: bool,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, Option<PointConfig>)> {
    let k = m.atom_count();
    let total = m.total();
    let lambda = total * eps.powf(-p);
    let atoms = WeightedIndex::new(&m.masses).map_err(|e| Error::InvalidSetFunction(e.to_string()))?;
    let mut maxima = vec![0.0; k];
    let mut points = Vec::new();
    let count;
    match scheme {
        PoissonScheme::Iid => {
            let n = Poisson::new(lambda).map_err(|_| Error::InvalidTruncation(eps))?.sample(rng) as u64;
            for _ in 0..n {
                let x = eps * open_uniform(rng).powf(-1.0 / p);
                let a = atoms.sample(rng);
                maxima[a] = f64::max(maxima[a], x);
                if keep_points {
                    points.push(Point { x, atom: a });
                }
            }
            count = n;
        }
        PoissonScheme::Ordered => {
            let positive = m.masses.iter().filter(|&&w| w > 0.0).count();
            let mut covered = 0;
            let mut gamma = 0.0;
            let mut n = 0u64;
            loop {
                gamma += rng.sample::<f64, _>(Exp1);
                if gamma >= lambda {
                    break;
                }
                n += 1;
                let x = (total / gamma).powf(1.0 / p);
                let a = atoms.sample(rng);
                if maxima[a] == 0.0 {
                    maxima[a] = x;
                    covered += 1;
                }
                if keep_points {
                    points.push(Point { x, atom: a });
                }
                if covered == positive {
                    let rest = lambda - gamma;
                    if rest > 0.0 {
                        n += Poisson::new(rest).map_err(|_| Error::InvalidTruncation(eps))?.sample(rng) as u64;
                    }
                    break;
                }
            }
            count = n;
        }
    }
    let config = keep_points.then_some(PointConfig { points, count, epsilon: eps, scheme });
    Ok((maxima, config))
}

/// Draws one realization of `M` with stream `stream`.
pub fn sample_supmeasure(m: &ControlMeasure, p: f64, mode: SampleMode, seed: u64, stream: u64) -> Result<SupMeasureSample> {
    check_shape(p)?;
    let mut rng = rng_for(seed, stream);
    let (values, points) = match mode {
        SampleMode::Exact => (sample_exact(m, p, &mut rng), None),
        SampleMode::Poisson { epsilon, scheme } => {
            check_epsilon(epsilon)?;
            sample_poisson(m, p, epsilon, scheme, true, &mut rng)?
        }
    };
    Ok(SupMeasureSample {
        values: values.into_iter().map(ExtReal::clamped).collect(),
        seed,
        stream,
        points,
    })
}

/// Atom maxima for replicate streams `first_stream .. first_stream + n`.
pub fn sample_many(
    m: &ControlMeasure,
    p: f64,
    mode: SampleMode,
    n: usize,
    seed: u64,
    first_stream: u64,
) -> Result<Vec<Vec<f64>>> {
    check_shape(p)?;
    if let SampleMode::Poisson { epsilon, .. } = mode {
        check_epsilon(epsilon)?;
    }
    (0..n as u64)
        .map(|i| {
            let mut rng = rng_for(seed, first_stream + i);
            match mode {
                SampleMode::Exact => Ok(sample_exact(m, p, &mut rng)),
                SampleMode::Poisson { epsilon, scheme } => {
                    Ok(sample_poisson(m, p, epsilon, scheme, false, &mut rng)?.0)
                }
            }
        })
        .collect()
}

/// `∫ f · dM`: over the retained points when available, else over atom
/// maxima; cross-checked against the Shilkret integral of the realization.
pub fn extremal_integral(sample: &SupMeasureSample, f: &MeasurableFn) -> Result<ExtReal> {
    check_len(sample.values.len(), f.len())?;
    if let Some(a) = (0..f.len()).find(|&a| f.value(a).is_infinite()) {
        return Err(Error::InfiniteValue(format!("integrand is infinite on atom {a}")));
    }
    let value = match &sample.points {
        Some(cfg) => cfg
            .points
            .iter()
            .map(|pt| ExtReal::clamped(pt.x).mul(f.value(pt.atom)))
            .max()
            .unwrap_or(ExtReal::ZERO),
        None => (0..f.len())
            .map(|a| sample.values[a].mul(f.value(a)))
            .max()
            .unwrap_or(ExtReal::ZERO),
    };
    let oracle = shilkret(f, &sample.measure(), AtomSet::full(f.len()));
    if !value.approx_eq(oracle) {
        return Err(Error::OracleMismatch(format!(
            "extremal integral {value} differs from the Shilkret integral {oracle}"
        )));
    }
    Ok(value)
}

fn max_over(values: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    values
        .iter()
        .enumerate()
        .map(|(a, &v)| if v == 0.0 { 0.0 } else { v * f(a) })
        .fold(0.0, f64::max)
}

/// Maximum-likelihood scale `s` of `exp(−s x^{−p})` with known `p`.
pub fn fit_frechet_scale(samples: &[f64], p: f64) -> f64 {
    samples.len() as f64 / samples.iter().map(|&x| x.powf(-p)).sum::<f64>()
}

pub fn frechet_cdf(scale: f64, p: f64) -> impl Fn(f64) -> f64 {
    move |x| if x <= 0.0 { 0.0 } else { (-scale * x.powf(-p)).exp() }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrechetReport {
    pub n: usize,
    pub m_b: f64,
    pub p_le_one: f64,
    pub p_le_one_expected: f64,
    pub ks_exact: KsResult,
    pub ks_poisson_vs_exact: Option<KsResult>,
    pub f_norm_pp: f64,
    pub fitted_scale: f64,
    pub scale_relative_error: f64,
    pub ks_integral: KsResult,
}

/// Distributional checks on `n` exact samples of `M(B)` and `M(f)`, and, if
/// `epsilon` is given, a two-sample comparison with the Poisson construction.
pub fn mc_frechet_check(
    m: &ControlMeasure,
    p: f64,
    b: AtomSet,
    f: &MeasurableFn,
    n: usize,
    seed: u64,
    epsilon: Option<f64>,
) -> Result<FrechetReport> {
    check_len(m.atom_count(), f.len())?;
    let exact = sample_many(m, p, SampleMode::Exact, n, seed, 0)?;
    let mb_samples: Vec<f64> = exact.iter().map(|v| max_over(v, |a| b.contains(a) as u8 as f64)).collect();
    let m_b = m.measure(b);
    let p_le_one = mb_samples.iter().filter(|&&x| x <= 1.0).count() as f64 / n as f64;
    let ks_exact = ks_one_sample(&mb_samples, frechet_cdf(m_b, p));

    let ks_poisson_vs_exact = match epsilon {
        Some(eps) => {
            let poisson = sample_many(m, p, SampleMode::poisson(eps), n, seed, POISSON_STREAM_OFFSET)?;
            let pb: Vec<f64> = poisson.iter().map(|v| max_over(v, |a| b.contains(a) as u8 as f64)).collect();
            Some(ks_two_sample(&pb, &mb_samples))
        }
        None => None,
    };

    let f_norm_pp = m.norm_pp(f, p);
    let mf: Vec<f64> = exact.iter().map(|v| max_over(v, |a| f.value(a).get())).collect();
    let fitted_scale = fit_frechet_scale(&mf, p);
    Ok(FrechetReport {
        n,
        m_b,
        p_le_one,
        p_le_one_expected: (-m_b).exp(),
        ks_exact,
        ks_poisson_vs_exact,
        f_norm_pp,
        fitted_scale,
        scale_relative_error: (fitted_scale / f_norm_pp - 1.0).abs(),
        ks_integral: ks_one_sample(&mf, frechet_cdf(f_norm_pp, p)),
    })
}

/// Slowly varying factor of the marginal tails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlowVariation {
    Const,
    Log,
}

impl SlowVariation {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            SlowVariation::Const => 1.0,
            SlowVariation::Log => x.ln(),
        }
    }
}

/// Regularly varying marginal with `P[X > x] = w x^{−p} L(x)` for `x ≥ x₀`
/// and an atom at `x₀` carrying the remaining mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RvMarginal {
    pub w: f64,
    pub p: f64,
    pub l: SlowVariation,
    pub x0: f64,
}

impl RvMarginal {
    pub fn new(w: f64, p: f64, l: SlowVariation) -> Self {
        let s = |x: f64| w * x.powf(-p) * l.eval(x);
        let x0 = match l {
            SlowVariation::Const => w.powf(1.0 / p),
            SlowVariation::Log => {
                // S decreases beyond e^{1/p}; start where S ≤ 1
                let lo = (1.0 / p).exp();
                if s(lo) <= 1.0 {
                    lo
                } else {
                    let mut hi = lo * 2.0;
                    while s(hi) > 1.0 {
                        hi *= 2.0;
                    }
                    bisect(|x| s(x) - 1.0, lo, hi)
                }
            }
        };
        RvMarginal { w, p, l, x0 }
    }

    pub fn survival(&self, x: f64) -> f64 {
        if self.w == 0.0 {
            0.0
        } else if x < self.x0 {
            1.0
        } else {
            (self.w * x.powf(-self.p) * self.l.eval(x)).min(1.0)
        }
    }

    /// `X` with `P[X > x] = survival(x)` from `u` uniform on `(0, 1]`.
    pub fn inverse(&self, u: f64) -> f64 {
        if self.w == 0.0 {
            return 0.0;
        }
        match self.l {
            SlowVariation::Const => (self.w / u).powf(1.0 / self.p),
            SlowVariation::Log => {
                if u >= self.survival(self.x0) {
                    return self.x0;
                }
                let mut hi = self.x0 * 2.0;
                while self.survival(hi) > u {
                    hi *= 2.0;
                }
                bisect(|x| self.survival(x) - u, self.x0, hi)
            }
        }
    }
}

/// Root of a decreasing `g` on `[lo, hi]` with `g(lo) ≥ 0 ≥ g(hi)`.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailPoint {
    pub x: f64,
    pub exceedances: u64,
    pub empirical: f64,
    pub target: f64,
    pub ratio: f64,
    /// Three standard errors of `ratio`.
    pub ratio_band: f64,
    /// Exact tail of the sampled model divided by the target.
    pub model_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub f_norm_pp: f64,
    pub points: Vec<TailPoint>,
}

/// Compares `P[M(f) > x]` with `‖f‖_p^p x^{−p} L(x)` over `x_grid`, where
/// `M(f) = max_a f(a) X_a` with independent regularly varying `X_a`.
pub fn mc_rv_tail_check(
    m: &ControlMeasure,
    p: f64,
    l: SlowVariation,
    f: &MeasurableFn,
    n: usize,
    x_grid: &[f64],
    seed: u64,
) -> Result<TailReport> {
    check_shape(p)?;
    check_len(m.atom_count(), f.len())?;
    if x_grid.is_empty() || x_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) || x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid("grid must be nonempty, positive, finite and increasing".into()));
    }
    if l == SlowVariation::Log && x_grid[0] <= 1.0 {
        return Err(Error::InvalidGrid("log slow variation needs x > 1".into()));
    }
    if let Some(a) = (0..f.len()).find(|&a| f.value(a).is_infinite()) {
        return Err(Error::InfiniteValue(format!("integrand is infinite on atom {a}")));
    }
    let marginals: Vec<RvMarginal> = m.masses.iter().map(|&w| RvMarginal::new(w, p, l)).collect();
    let mut counts = vec![0u64; x_grid.len()];
    for i in 0..n as u64 {
        let mut rng = rng_for(seed, i);
        let mut mf = 0.0f64;
        for (a, marg) in marginals.iter().enumerate() {
            let u = open_uniform(&mut rng);
            let fa = f.value(a).get();
            if fa > 0.0 {
                mf = mf.max(fa * marg.inverse(u));
            }
        }
        for (c, &x) in counts.iter_mut().zip(x_grid) {
            if mf > x {
                *c += 1;
            }
        }
    }
    let f_norm_pp = m.norm_pp(f, p);
    let points = x_grid
        .iter()
        .zip(&counts)
        .map(|(&x, &c)| {
            let empirical = c as f64 / n as f64;
            let target = f_norm_pp * x.powf(-p) * l.eval(x);
            let model = 1.0
                - marginals
                    .iter()
                    .enumerate()
                    .map(|(a, marg)| {
                        let fa = f.value(a).get();
                        if fa > 0.0 { 1.0 - marg.survival(x / fa) } else { 1.0 }
                    })
                    .product::<f64>();
            TailPoint {
                x,
                exceedances: c,
                empirical,
                target,
                ratio: empirical / target,
                ratio_band: 3.0 * (empirical * (1.0 - empirical) / n as f64).sqrt() / target,
                model_ratio: model / target,
            }
        })
        .collect();
    Ok(TailReport { n, f_norm_pp, points })
}
