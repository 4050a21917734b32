//! Exact distributions, seeded samplers and probabilistic envelopes for the
//! Bernoulli, Rademacher and Cramer walks.

use crate::error::{capacity, domain, Error, Result};
use crate::numeric::{kahan_sum, ratio_pow2, KahanSum};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest horizon for Bernoulli and Rademacher mass tables.
pub const MAX_BINOMIAL_N: u64 = 1_000_000;
/// Largest horizon for the O(n^2) Cramer convolution.
pub const MAX_CRAMER_N: u64 = 20_000;
/// Largest horizon for which dyadic tables carry big-integer counts.
pub const EXACT_COUNT_LIMIT: u64 = 4096;
/// Largest horizon for a stored sample path.
pub const MAX_STORED_PATH: u64 = 10_000_000;
/// Largest horizon for streamed jump counts.
pub const MAX_STREAM: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    /// Steps in {0, 1} with P(step = 1) = rho.
    Bernoulli { rho: f64 },
    /// Steps in {-1, +1}, fair.
    Rademacher,
    /// xi_i with P(xi_i = 1) = 1/log i, summed from i = 3.
    Cramer,
    /// The same summands taken from i = 8.
    CramerPrimed,
}

/// A walk family, its horizon `n` and a shift `u` applied by divisibility queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: u64,
    pub u: u64,
}

impl ModelSpec {
    pub fn bernoulli(rho: f64, n: u64) -> Self {
        Self {
            kind: ModelKind::Bernoulli { rho },
            n,
            u: 0,
        }
    }

    /// Bernoulli walk with rho = 1/2.
    pub fn fair(n: u64) -> Self {
        Self::bernoulli(0.5, n)
    }

    pub fn rademacher(n: u64) -> Self {
        Self {
            kind: ModelKind::Rademacher,
            n,
            u: 0,
        }
    }

    pub fn cramer(n: u64) -> Self {
        Self {
            kind: ModelKind::Cramer,
            n,
            u: 0,
        }
    }

    pub fn cramer_primed(n: u64) -> Self {
        Self {
            kind: ModelKind::CramerPrimed,
            n,
            u: 0,
        }
    }

    pub fn with_shift(mut self, u: u64) -> Self {
        self.u = u;
        self
    }

    /// Index of the first summand.
    pub fn start(&self) -> u64 {
        match self.kind {
            ModelKind::Cramer => 3,
            ModelKind::CramerPrimed => 8,
            _ => 1,
        }
    }

    /// Whether the law has denominator 2^n.
    pub fn is_dyadic(&self) -> bool {
        match self.kind {
            ModelKind::Bernoulli { rho } => rho == 0.5,
            ModelKind::Rademacher => true,
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ModelKind::Bernoulli { rho } if !(rho > 0.0 && rho < 1.0) => {
                Err(domain(format!("rho = {rho} outside (0, 1)")))
            }
            ModelKind::Cramer | ModelKind::CramerPrimed if self.n < self.start() => Err(domain(
                format!("Cramer horizon {} below start {}", self.n, self.start()),
            )),
            _ => Ok(()),
        }
    }
}

/// P(xi_i = 1) = 1/log i in the Cramer model.
pub fn cramer_q(i: u64) -> f64 {
    1.0 / (i as f64).ln()
}

/// Full mass function of a walk at a fixed time.
///
/// `probs[i]` is the mass at `support_min + i`. When `exact_counts` is present
/// the mass at each point is `exact_counts[i] / 2^denom_exp`.
#[derive(Debug, Clone)]
pub struct ExactPMF {
    pub support_min: i64,
    pub probs: Vec<f64>,
    pub exact_counts: Option<Vec<BigUint>>,
    pub denom_exp: u32,
}

impl ExactPMF {
    pub fn support_max(&self) -> i64 {
        self.support_min + self.probs.len() as i64 - 1
    }

    pub fn prob(&self, v: i64) -> f64 {
        if v < self.support_min || v > self.support_max() {
            return 0.0;
        }
        self.probs[(v - self.support_min) as usize]
    }

    /// `(value, mass)` pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.support_min + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        kahan_sum(self.probs.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        kahan_sum(self.iter().map(|(v, p)| v as f64 * p))
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        kahan_sum(self.iter().map(|(v, p)| (v as f64 - m).powi(2) * p))
    }

    /// P(pred(W)), summed in integers when counts are present.
    pub fn mass_where<F: Fn(i64) -> bool>(&self, pred: F) -> f64 {
        match &self.exact_counts {
            Some(counts) => {
                let mut acc = BigUint::zero();
                for (i, c) in counts.iter().enumerate() {
                    if pred(self.support_min + i as i64) {
                        acc += c;
                    }
                }
                ratio_pow2(&acc, self.denom_exp as u64)
            }
            None => kahan_sum(self.iter().filter(|&(v, _)| pred(v)).map(|(_, p)| p)),
        }
    }

    /// P(d | W + u), exact in integers when counts are present.
    pub fn divisible_mass(&self, d: u64, u: u64) -> f64 {
        if d == 1 {
            return 1.0;
        }
        let d = d as i64;
        let u = (u % d as u64) as i64;
        // First support point with v + u = 0 mod d, then stride d.
        let first = self.support_min + (-(self.support_min + u)).rem_euclid(d);
        let start = (first - self.support_min) as usize;
        match &self.exact_counts {
            Some(counts) => {
                let mut acc = BigUint::zero();
                for c in counts.iter().skip(start).step_by(d as usize) {
                    acc += c;
                }
                ratio_pow2(&acc, self.denom_exp as u64)
            }
            None => kahan_sum(self.probs.iter().skip(start).step_by(d as usize).copied()),
        }
    }

    /// P(W = r mod h) for r in 0..h.
    pub fn residue_masses(&self, h: u64) -> Vec<f64> {
        let mut acc = vec![KahanSum::new(); h as usize];
        for (v, p) in self.iter() {
            acc[v.rem_euclid(h as i64) as usize].add(p);
        }
        acc.iter().map(|s| s.value()).collect()
    }
}

/// Row C(n, 0..=n) by the multiplicative recurrence.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// Binomial(n, rho) masses normalized from the mode outward.
fn binomial_probs(n: u64, rho: f64) -> Vec<f64> {
    let len = n as usize + 1;
    let mut w = vec![0.0; len];
    let r = rho / (1.0 - rho);
    let mode = (((n + 1) as f64 * rho).floor() as usize).min(n as usize);
    w[mode] = 1.0;
    for k in mode + 1..len {
        w[k] = w[k - 1] * ((n as usize - k + 1) as f64 / k as f64) * r;
    }
    for k in (0..mode).rev() {
        w[k] = w[k + 1] * ((k + 1) as f64 / (n as usize - k) as f64) / r;
    }
    let total = kahan_sum(w.iter().copied());
    w.iter_mut().for_each(|x| *x /= total);
    w
}

fn cramer_probs(start: u64, n: u64) -> Vec<f64> {
    let mut p = vec![0.0; (n - start + 2) as usize];
    p[0] = 1.0;
    for (steps, i) in (start..=n).enumerate() {
        let q = cramer_q(i);
        for k in (1..=steps + 1).rev() {
            p[k] = p[k] * (1.0 - q) + p[k - 1] * q;
        }
        p[0] *= 1.0 - q;
    }
    p
}

/// Exact mass function of the walk at its horizon (the shift `u` is not applied).
pub fn pmf_exact(model: &ModelSpec) -> Result<ExactPMF> {
    model.validate()?;
    let n = model.n;
    match model.kind {
        ModelKind::Bernoulli { .. } | ModelKind::Rademacher if n > MAX_BINOMIAL_N => Err(
            capacity(format!("horizon {n} above {MAX_BINOMIAL_N}")),
        ),
        ModelKind::Cramer | ModelKind::CramerPrimed if n > MAX_CRAMER_N => {
            Err(capacity(format!("Cramer horizon {n} above {MAX_CRAMER_N}")))
        }
        ModelKind::Bernoulli { rho } => {
            if rho == 0.5 && n <= EXACT_COUNT_LIMIT {
                let counts = binomial_row(n);
                let probs = counts.iter().map(|c| ratio_pow2(c, n)).collect();
                Ok(ExactPMF {
                    support_min: 0,
                    probs,
                    exact_counts: Some(counts),
                    denom_exp: n as u32,
                })
            } else {
                Ok(ExactPMF {
                    support_min: 0,
                    probs: binomial_probs(n, rho),
                    exact_counts: None,
                    denom_exp: 0,
                })
            }
        }
        ModelKind::Rademacher => {
            let base = pmf_exact(&ModelSpec::fair(n))?;
            Ok(rademacher_pushforward(&base))
        }
        ModelKind::Cramer | ModelKind::CramerPrimed => Ok(ExactPMF {
            support_min: 0,
            probs: cramer_probs(model.start(), n),
            exact_counts: None,
            denom_exp: 0,
        }),
    }
}

/// Law of 2B - n on the contiguous range -n..=n, zero off the parity class.
pub fn rademacher_pushforward(bernoulli: &ExactPMF) -> ExactPMF {
    let n = bernoulli.probs.len() - 1;
    let mut probs = vec![0.0; 2 * n + 1];
    for (k, &p) in bernoulli.probs.iter().enumerate() {
        probs[2 * k] = p;
    }
    let exact_counts = bernoulli.exact_counts.as_ref().map(|c| {
        let mut out = vec![BigUint::zero(); 2 * n + 1];
        for (k, ck) in c.iter().enumerate() {
            out[2 * k] = ck.clone();
        }
        out
    });
    ExactPMF {
        support_min: -(n as i64),
        probs,
        exact_counts,
        denom_exp: bernoulli.denom_exp,
    }
}

/// Mean and variance of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
}

/// m_n = sum 1/log j and sum (1/log j)(1 - 1/log j) over start..=n.
pub fn cramer_moments(n: u64, start: u64) -> Result<MomentSummary> {
    if n < start || start < 3 {
        return Err(domain(format!("Cramer moments need 3 <= start <= n, got {start}, {n}")));
    }
    let mut m = KahanSum::new();
    let mut v = KahanSum::new();
    for j in start..=n {
        let q = cramer_q(j);
        m.add(q);
        v.add(q * (1.0 - q));
    }
    Ok(MomentSummary {
        mean: m.value(),
        variance: v.value(),
    })
}

/// Closed-form moments for any model.
pub fn model_moments(model: &ModelSpec) -> Result<MomentSummary> {
    model.validate()?;
    let n = model.n as f64;
    Ok(match model.kind {
        ModelKind::Bernoulli { rho } => MomentSummary {
            mean: n * rho,
            variance: n * rho * (1.0 - rho),
        },
        ModelKind::Rademacher => MomentSummary {
            mean: 0.0,
            variance: n,
        },
        _ => cramer_moments(model.n, model.start())?,
    })
}

/// ChaCha8 generator for `(seed, stream)`; distinct streams are independent.
pub fn walk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Trajectory of one sampled walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    /// Walk value after each step, starting from 0 before the first step.
    pub partial_sums: Vec<i64>,
    /// Indices of the steps equal to +1 (for Cramer: the random "primes").
    pub jump_instants: Vec<u64>,
}

fn step(kind: ModelKind, i: u64, rng: &mut ChaCha8Rng) -> bool {
    match kind {
        ModelKind::Bernoulli { rho } => rng.random_bool(rho),
        ModelKind::Rademacher => rng.random_bool(0.5),
        ModelKind::Cramer | ModelKind::CramerPrimed => rng.random_bool(cramer_q(i)),
    }
}

/// Samples one path; deterministic in `(seed, stream)`.
pub fn sample_path(model: &ModelSpec, seed: u64, stream: u64) -> Result<SamplePath> {
    model.validate()?;
    if model.n > MAX_STORED_PATH {
        return Err(capacity(format!(
            "stored path length {} above {MAX_STORED_PATH}",
            model.n
        )));
    }
    let mut rng = walk_rng(seed, stream);
    let start = model.start();
    let mut partial_sums = Vec::with_capacity((model.n - start + 2) as usize);
    let mut jump_instants = Vec::new();
    let mut s = 0i64;
    partial_sums.push(0);
    for i in start..=model.n {
        let up = step(model.kind, i, &mut rng);
        s += match (model.kind, up) {
            (_, true) => 1,
            (ModelKind::Rademacher, false) => -1,
            _ => 0,
        };
        if up {
            jump_instants.push(i);
        }
        partial_sums.push(s);
    }
    Ok(SamplePath {
        partial_sums,
        jump_instants,
    })
}

/// Number of Cramer jumps at indices start..=x, streamed without storage.
pub fn count_cramer_jumps(x: u64, start: u64, seed: u64, stream: u64) -> Result<u64> {
    if x > MAX_STREAM {
        return Err(capacity(format!("stream length {x} above {MAX_STREAM}")));
    }
    let mut rng = walk_rng(seed, stream);
    Ok((start..=x).filter(|&i| rng.random_bool(cramer_q(i))).count() as u64)
}

/// Gaussian approximation to a binomial point mass with its explicit envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DmlEnvelope {
    pub x: f64,
    pub gauss_approx: f64,
    /// Bound on |E| where P(B_n(rho) = k) = gauss_approx * exp(E).
    pub error_bound: f64,
}

/// Local limit approximation at `k`, valid for |k - n rho| <= gamma n rho (1 - rho).
pub fn dml_gauss_envelope(n: u64, rho: f64, k: u64, gamma: f64) -> Result<DmlEnvelope> {
    if !(rho > 0.0 && rho < 1.0) || !(gamma > 0.0 && gamma < 1.0) || n == 0 {
        return Err(domain("need n >= 1, 0 < rho < 1 and 0 < gamma < 1"));
    }
    let nf = n as f64;
    let var = nf * rho * (1.0 - rho);
    let dev = k as f64 - nf * rho;
    if dev.abs() > gamma * var {
        return Err(domain(format!(
            "|k - n rho| = {} exceeds gamma n rho (1 - rho) = {}",
            dev.abs(),
            gamma * var
        )));
    }
    let sd = var.sqrt();
    let x = dev / sd;
    let gauss_approx = (-x * x / 2.0).exp() / (2.0 * PI * var).sqrt();
    let ax = x.abs();
    let error_bound = (3.0 * ax + 2.0 * ax.powi(3)) / ((1.0 - gamma) * sd)
        + 1.0 / (4.0 * nf * rho.min(1.0 - rho) * (1.0 - gamma));
    Ok(DmlEnvelope {
        x,
        gauss_approx,
        error_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSide {
    Upper,
    Lower,
}

/// Bounds P(S >= (1 + eps) mu) or P(S <= (1 - eps) mu) for sums of [0, 1] variables.
pub fn mcdiarmid_bound(mu: f64, eps: f64, side: TailSide) -> f64 {
    match side {
        TailSide::Upper => (-eps * eps * mu / (2.0 * (1.0 + eps / 3.0))).exp(),
        TailSide::Lower => (-eps * eps * mu / 2.0).exp(),
    }
}

/// Characteristic function of S_n at `t` (period 1) with its validity bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharFnReport {
    pub value: Complex64,
    /// exp(-2 B_n sin^2(pi t)).
    pub modulus_bound: f64,
    /// exp(2 i pi t m_n - 2 B_n (pi t)^2).
    pub gauss_form: Complex64,
    /// 12 m_n (pi |t|)^3, bound on the log-form remainder.
    pub log_remainder_bound: f64,
}

/// Phi_n(t) = prod_{k=start}^{n} (1 + q_k (e^{2 pi i t} - 1)), accumulated in log-polar form.
pub fn cramer_charfn(n: u64, t: f64, start: u64) -> Result<CharFnReport> {
    let mom = cramer_moments(n, start)?;
    let (s, c) = (2.0 * PI * t).sin_cos();
    let mut log_mod = KahanSum::new();
    let mut arg = KahanSum::new();
    let mut zero = false;
    for k in start..=n {
        let q = cramer_q(k);
        let re = 1.0 - q + q * c;
        let im = q * s;
        let r2 = re * re + im * im;
        if r2 == 0.0 {
            zero = true;
            break;
        }
        log_mod.add(0.5 * r2.ln());
        arg.add(im.atan2(re));
    }
    let value = if zero {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(log_mod.value().exp(), arg.value())
    };
    let sp = (PI * t).sin();
    Ok(CharFnReport {
        value,
        modulus_bound: (-2.0 * mom.variance * sp * sp).exp(),
        gauss_form: Complex64::from_polar(
            (-2.0 * mom.variance * (PI * t).powi(2)).exp(),
            2.0 * PI * t * mom.mean,
        ),
        log_remainder_bound: 12.0 * mom.mean * (PI * t.abs()).powi(3),
    })
}

/// A finite law on consecutive integers with exact rational masses.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeLaw {
    pub support_min: i64,
    pub probs: Vec<BigRational>,
}

impl LatticeLaw {
    /// Exact rational images of the given floats.
    pub fn from_f64(support_min: i64, probs: &[f64]) -> Result<Self> {
        let probs = probs
            .iter()
            .map(|&p| {
                if p < 0.0 {
                    return Err(domain("negative mass"));
                }
                BigRational::from_float(p).ok_or_else(|| domain("non-finite mass"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { support_min, probs })
    }
}

/// Coupling X = V + eps L with L a fair bit independent of (V, eps).
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliPart {
    pub support_min: i64,
    pub theta: BigRational,
    /// sum_k min(f(k), f(k+1)).
    pub nu: BigRational,
    /// tau_k = theta min(f(k), f(k+1)) / nu, indexed like the support.
    pub tau: Vec<BigRational>,
    /// P(V = v_k, eps = 1) = tau_k.
    pub joint_eps1: Vec<BigRational>,
    /// P(V = v_k, eps = 0) = f(k) - (tau_{k-1} + tau_k)/2.
    pub joint_eps0: Vec<BigRational>,
    /// Law of V + eps L rebuilt from the joint law.
    pub synthesized: Vec<BigRational>,
}

/// Bernoulli-part decomposition of a lattice law. `theta` defaults to nu.
pub fn bernoulli_part_decompose(
    law: &LatticeLaw,
    theta: Option<BigRational>,
) -> Result<BernoulliPart> {
    let f = &law.probs;
    if f.iter().any(|p| p < &BigRational::zero()) {
        return Err(domain("negative mass"));
    }
    let len = f.len();
    let mins: Vec<BigRational> = (0..len)
        .map(|k| {
            if k + 1 < len {
                f[k].clone().min(f[k + 1].clone())
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let nu: BigRational = mins.iter().sum();
    if nu.is_zero() {
        return Err(Error::NoBernoulliPart);
    }
    let theta = theta.unwrap_or_else(|| nu.clone());
    if theta <= BigRational::zero() || theta > nu {
        return Err(domain("theta must lie in (0, nu]"));
    }
    let tau: Vec<BigRational> = mins.iter().map(|m| &theta * m / &nu).collect();
    let half = BigRational::new(1.into(), 2.into());
    let zero = BigRational::zero();
    let prev = |k: usize| if k == 0 { &zero } else { &tau[k - 1] };
    let joint_eps0: Vec<BigRational> = (0..len)
        .map(|k| &f[k] - (prev(k) + &tau[k]) * &half)
        .collect();
    let synthesized = (0..len)
        .map(|k| &joint_eps0[k] + (&tau[k] + prev(k)) * &half)
        .collect();
    Ok(BernoulliPart {
        support_min: law.support_min,
        theta,
        nu,
        joint_eps1: tau.clone(),
        tau,
        joint_eps0,
        synthesized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn bernoulli_n3() {
        let p = pmf_exact(&ModelSpec::fair(3)).unwrap();
        assert_eq!(p.probs, vec![0.125, 0.375, 0.375, 0.125]);
        let c: Vec<u64> = p.exact_counts.unwrap().iter().map(|c| c.to_u64().unwrap()).collect();
        assert_eq!(c, vec![1, 3, 3, 1]);
    }

    #[test]
    fn rademacher_n2() {
        let p = pmf_exact(&ModelSpec::rademacher(2)).unwrap();
        assert_eq!(p.prob(0), 0.5);
        assert_eq!(p.prob(2), 0.25);
        assert_eq!(p.prob(1), 0.0);
    }

    #[test]
    fn cramer_n3() {
        let p = pmf_exact(&ModelSpec::cramer(3)).unwrap();
        assert!((p.prob(1) - 1.0 / 3f64.ln()).abs() < 1e-15);
        assert!((p.prob(1) - 0.91024).abs() < 1e-5);
    }

    #[test]
    fn capacity_and_domain_errors() {
        assert!(matches!(
            pmf_exact(&ModelSpec::fair(MAX_BINOMIAL_N + 1)),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            pmf_exact(&ModelSpec::cramer(MAX_CRAMER_N + 1)),
            Err(Error::Capacity(_))
        ));
        assert!(pmf_exact(&ModelSpec::cramer(2)).is_err());
        assert!(pmf_exact(&ModelSpec::bernoulli(1.0, 4)).is_err());
    }

    #[test]
    fn moments() {
        let m3 = cramer_moments(3, 3).unwrap();
        assert!((m3.mean - 0.910_239).abs() < 1e-6);
        assert!((m3.variance - 0.08171).abs() < 1e-5);
        let m10 = cramer_moments(10, 3).unwrap();
        assert!((m10.mean - 4.695_243_092_731_587).abs() < 1e-12);
    }

    #[test]
    fn pmf_moments_match_closed_forms() {
        for n in [1u64, 7, 64, 500] {
            let models = [
                ModelSpec::fair(n),
                ModelSpec::bernoulli(0.3, n),
                ModelSpec::rademacher(n),
                ModelSpec::cramer(n.max(3)),
                ModelSpec::cramer_primed(n.max(8)),
            ];
            for m in models {
                let p = pmf_exact(&m).unwrap();
                let mom = model_moments(&m).unwrap();
                assert!((p.total() - 1.0).abs() < 1e-12);
                assert!((p.mean() - mom.mean).abs() < 1e-10, "{m:?}");
                assert!((p.variance() - mom.variance).abs() < 1e-10, "{m:?}");
            }
        }
    }

    #[test]
    fn counts_sum_to_power_of_two() {
        for n in [0u64, 1, 10, 257] {
            let p = pmf_exact(&ModelSpec::fair(n)).unwrap();
            let s: BigUint = p.exact_counts.unwrap().iter().sum();
            assert_eq!(s, BigUint::one() << n as usize);
        }
    }

    #[test]
    fn rademacher_is_pushforward() {
        let n = 41;
        let b = pmf_exact(&ModelSpec::fair(n)).unwrap();
        let r = pmf_exact(&ModelSpec::rademacher(n)).unwrap();
        for (k, pk) in b.iter() {
            assert_eq!(r.prob(2 * k - n as i64), pk);
        }
        assert_eq!(r.total(), b.total());
    }

    #[test]
    fn divisible_mass_examples() {
        let p3 = pmf_exact(&ModelSpec::fair(3)).unwrap();
        assert_eq!(p3.divisible_mass(2, 0), 0.5);
        let p4 = pmf_exact(&ModelSpec::fair(4)).unwrap();
        assert_eq!(p4.divisible_mass(3, 0), 5.0 / 16.0);
        assert_eq!(p4.divisible_mass(1, 0), 1.0);
        assert_eq!(p4.divisible_mass(3, 1), 6.0 / 16.0);
        let r = pmf_exact(&ModelSpec::rademacher(5)).unwrap();
        // R_5 in {-5,-3,-1,1,3,5}; multiples of 3: -3, 3.
        assert_eq!(r.divisible_mass(3, 0), 10.0 / 32.0);
    }

    #[test]
    fn paths_respect_step_support() {
        let b = sample_path(&ModelSpec::fair(10), 7, 0).unwrap();
        assert!(b.partial_sums.windows(2).all(|w| (0..=1).contains(&(w[1] - w[0]))));
        let r = sample_path(&ModelSpec::rademacher(10), 7, 0).unwrap();
        assert!(r.partial_sums.windows(2).all(|w| (w[1] - w[0]).abs() == 1));
        assert_eq!(r.partial_sums.len(), 11);
        let again = sample_path(&ModelSpec::rademacher(10), 7, 0).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn cramer_jumps_concentrate() {
        let n = 1_000_000;
        let mom = cramer_moments(n, 3).unwrap();
        let path = sample_path(&ModelSpec::cramer(n), 20_240_601, 0).unwrap();
        let jumps = path.jump_instants.len() as f64;
        assert!((jumps - mom.mean).abs() < 6.0 * mom.variance.sqrt());
        assert!(path.jump_instants.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            count_cramer_jumps(n, 3, 20_240_601, 0).unwrap(),
            path.jump_instants.len() as u64
        );
    }

    #[test]
    fn dml_examples() {
        let e = dml_gauss_envelope(100, 0.5, 50, 0.5).unwrap();
        assert!((e.gauss_approx - 1.0 / (50.0 * PI).sqrt()).abs() < 1e-15);
        assert!((e.gauss_approx - 0.079788).abs() < 1e-6);
        let exact = pmf_exact(&ModelSpec::fair(100)).unwrap().prob(50);
        assert!((exact - 0.079589).abs() < 1e-6);
        assert!((exact - e.gauss_approx).abs() <= e.gauss_approx * (e.error_bound.exp() - 1.0));

        let e4 = dml_gauss_envelope(4, 0.5, 2, 0.5).unwrap();
        assert!((e4.gauss_approx - 0.39894).abs() < 1e-5);
        assert!((0.375 - e4.gauss_approx).abs() <= e4.gauss_approx * (e4.error_bound.exp() - 1.0));

        assert!(dml_gauss_envelope(100, 0.5, 70, 0.5).is_err());
        let at_mode = dml_gauss_envelope(100, 0.5, 50, 0.5).unwrap().gauss_approx;
        let off = dml_gauss_envelope(100, 0.5, 51, 0.5).unwrap().gauss_approx;
        assert!(at_mode > off);
    }

    #[test]
    fn mcdiarmid_examples() {
        let b = mcdiarmid_bound(5.0, 0.2, TailSide::Upper);
        assert!((b - (-0.09375f64).exp()).abs() < 1e-15);
        assert!((b - 0.91051).abs() < 1e-5);
        let p = pmf_exact(&ModelSpec::fair(10)).unwrap();
        let tail = p.mass_where(|v| v >= 6);
        assert_eq!(tail, 386.0 / 1024.0);
        assert!(tail <= b);
        assert!((mcdiarmid_bound(5.0, 1e-9, TailSide::Lower) - 1.0).abs() < 1e-15);

        let mom = cramer_moments(1000, 3).unwrap();
        let pc = pmf_exact(&ModelSpec::cramer(1000)).unwrap();
        let hi = pc.mass_where(|v| v as f64 >= 1.5 * mom.mean);
        let lo = pc.mass_where(|v| v as f64 <= 0.5 * mom.mean);
        assert!(hi <= mcdiarmid_bound(mom.mean, 0.5, TailSide::Upper));
        assert!(lo <= mcdiarmid_bound(mom.mean, 0.5, TailSide::Lower));
    }

    #[test]
    fn charfn_examples() {
        for t in [0.0, 1.0] {
            let r = cramer_charfn(100, t, 3).unwrap();
            assert!((r.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let r = cramer_charfn(100, 0.1, 3).unwrap();
        let direct: Complex64 = (3..=100u64)
            .map(|k| {
                let q = cramer_q(k);
                Complex64::new(1.0, 0.0) + q * (Complex64::from_polar(1.0, 2.0 * PI * 0.1) - 1.0)
            })
            .product();
        assert!((r.value - direct).norm() < 1e-13);
        assert!(r.value.norm() <= r.modulus_bound);
    }

    #[test]
    fn charfn_matches_pmf_transform() {
        let n = 300;
        let p = pmf_exact(&ModelSpec::cramer(n)).unwrap();
        for t in [0.05, 0.25, 0.4] {
            let direct: Complex64 = p
                .iter()
                .map(|(v, pv)| pv * Complex64::from_polar(1.0, 2.0 * PI * t * v as f64))
                .sum();
            let r = cramer_charfn(n, t, 3).unwrap();
            assert!((r.value - direct).norm() < 1e-12);
            let small = cramer_charfn(n, 0.01, 3).unwrap();
            let e = (small.value / small.gauss_form).ln();
            assert!(e.norm() <= small.log_remainder_bound);
        }
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn decomposition_examples() {
        let coin = LatticeLaw {
            support_min: 0,
            probs: vec![rat(1, 2), rat(1, 2)],
        };
        let bp = bernoulli_part_decompose(&coin, None).unwrap();
        assert_eq!(bp.theta, rat(1, 2));
        assert_eq!(bp.synthesized, coin.probs);

        let point = LatticeLaw {
            support_min: 5,
            probs: vec![rat(1, 1)],
        };
        assert_eq!(bernoulli_part_decompose(&point, None), Err(Error::NoBernoulliPart));

        let q = cramer_q(10);
        let step = LatticeLaw::from_f64(0, &[1.0 - q, q]).unwrap();
        let bp = bernoulli_part_decompose(&step, None).unwrap();
        assert_eq!(bp.theta, step.probs[1]);
        assert_eq!(bp.synthesized, step.probs);
    }

    #[test]
    fn decomposition_rejects_large_theta() {
        let law = LatticeLaw {
            support_min: 0,
            probs: vec![rat(1, 4), rat(1, 2), rat(1, 4)],
        };
        assert!(bernoulli_part_decompose(&law, Some(rat(2, 3))).is_err());
        let bp = bernoulli_part_decompose(&law, Some(rat(1, 4))).unwrap();
        assert_eq!(bp.synthesized, law.probs);
        let tau_sum: BigRational = bp.tau.iter().sum();
        assert_eq!(tau_sum, rat(1, 4));
    }
}
