//! Primality and prime-divisor statistics of the three walks.
//!
//! Zero policy, applied on every route: P^-(0) = 2 and P^-(1) = infinity, so
//! {P^-(W) > y} never contains 0; 0 is neither k-free nor quasiprime; the
//! truncated divisor count of 0 at time n is n.

use crate::arith::{ArithCache, Constants};
use crate::divprob::{div_spectral_bernoulli, div_spectral_rademacher, theta_eval, ThetaVariant};
use crate::error::{capacity, domain, Result};
use crate::numeric::{kahan_sum, KahanSum};
use crate::walkdist::{count_cramer_jumps, cramer_moments, pmf_exact, walk_rng, ExactPMF, ModelSpec};
use rand::Rng;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Which Rademacher values count as prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RademacherSign {
    /// Only positive primes.
    #[default]
    PositiveOnly,
    /// Values with |R_n| prime.
    AbsoluteValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PrimeConvention {
    pub rademacher_sign: RademacherSign,
}

impl PrimeConvention {
    pub fn absolute() -> Self {
        Self {
            rademacher_sign: RademacherSign::AbsoluteValue,
        }
    }

    /// Whether `v` counts as a prime value under this convention.
    pub fn is_prime_value(&self, v: i64, cache: &ArithCache) -> bool {
        match (v > 0, self.rademacher_sign) {
            (true, _) => cache.is_prime(v as u64),
            (false, RademacherSign::AbsoluteValue) => v < 0 && cache.is_prime(v.unsigned_abs()),
            (false, RademacherSign::PositiveOnly) => false,
        }
    }
}

fn support_cache(p: &ExactPMF) -> Result<ArithCache> {
    let top = p.support_max().max(-p.support_min).max(2) as u64;
    ArithCache::new(top)
}

/// P(W_n prime), summed in integers for dyadic models.
pub fn prime_prob_exact(model: &ModelSpec, conv: PrimeConvention) -> Result<f64> {
    let p = pmf_exact(model)?;
    let c = support_cache(&p)?;
    Ok(p.mass_where(|v| conv.is_prime_value(v, &c)))
}

/// P(P^-(B_n) > y) three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PminusReport {
    pub n: u64,
    pub y: u64,
    pub exact: f64,
    /// sum_{d <= n, P^+(d) <= y} mu(d) P(d | B_n), with P(d | B_n) spectral.
    pub mobius_identity: f64,
    /// P(B_n = 0) sum_{d <= n, P^+(d) <= y} mu(d): the part of the Mobius sum
    /// carried by the zero atom, which the truncated sum does not cancel.
    pub zero_atom: f64,
    /// |exact - e^{-gamma}/log y| log^2 y.
    pub mertens_gap: f64,
}

impl PminusReport {
    /// mobius_identity - zero_atom, equal to `exact` up to rounding.
    pub fn corrected_identity(&self) -> f64 {
        self.mobius_identity - self.zero_atom
    }
}

/// P^- tail of the fair walk for every y in `ys`, sharing one spectral pass.
pub fn pminus_sweep(n: u64, ys: &[u64], cache: &ArithCache) -> Result<Vec<PminusReport>> {
    if n == 0 || ys.iter().any(|&y| y < 2) {
        return Err(domain("need n >= 1 and y >= 2"));
    }
    if cache.bound() < n.max(2) {
        return Err(domain("cache bound below n"));
    }
    let pmf = pmf_exact(&ModelSpec::fair(n))?;
    // Squarefree d <= n keyed by P^+(d), with spectral P(d | B_n).
    let mut terms: Vec<(u64, f64)> = (1..=n)
        .into_par_iter()
        .filter_map(|d| match cache.mobius(d) {
            0 => None,
            mu => Some((cache.greatest_prime_factor(d), mu as f64 * div_spectral_bernoulli(n, d, 0))),
        })
        .collect();
    terms.sort_by_key(|t| t.0);
    let mut mu_terms: Vec<(u64, f64)> = (1..=n)
        .filter(|&d| cache.mobius(d) != 0)
        .map(|d| (cache.greatest_prime_factor(d), cache.mobius(d) as f64))
        .collect();
    mu_terms.sort_by_key(|t| t.0);
    let p0 = pmf.prob(0);
    // Least prime factor per support value, 0 and 1 excluded by convention.
    let mut lpf_mass: Vec<(u64, f64)> = pmf
        .iter()
        .filter(|&(v, p)| v >= 2 && p > 0.0)
        .map(|(v, p)| (cache.least_prime_factor(v as u64), p))
        .collect();
    lpf_mass.sort_by_key(|t| t.0);
    let p1 = pmf.prob(1);
    let prefix = |list: &[(u64, f64)], y: u64| {
        kahan_sum(list.iter().take_while(|t| t.0 <= y).map(|t| t.1))
    };
    let suffix = |list: &[(u64, f64)], y: u64| {
        kahan_sum(list.iter().skip_while(|t| t.0 <= y).map(|t| t.1))
    };
    let g = Constants::mertens_factor();
    Ok(ys
        .iter()
        .map(|&y| {
            let exact = p1 + suffix(&lpf_mass, y);
            let ly = (y as f64).ln();
            PminusReport {
                n,
                y,
                exact,
                mobius_identity: prefix(&terms, y),
                zero_atom: p0 * prefix(&mu_terms, y),
                mertens_gap: (exact - g / ly).abs() * ly * ly,
            }
        })
        .collect())
}

pub fn pminus_tail(n: u64, y: u64) -> Result<PminusReport> {
    let c = ArithCache::new(n.max(2))?;
    Ok(pminus_sweep(n, &[y], &c)?[0])
}

/// sum over squarefree d <= n with P^+(d) <= sqrt(n) of mu(d) Theta(d, n)/d.
pub fn prime_prob_theta_formula(n: u64, cache: &ArithCache) -> Result<f64> {
    if n < 4 {
        return Err(domain("theta prime formula needs n >= 4"));
    }
    if cache.bound() < n {
        return Err(domain("cache bound below n"));
    }
    let r = (n as f64).sqrt().floor() as u64;
    let terms: Result<Vec<f64>> = (1..=n)
        .into_par_iter()
        .filter(|&d| cache.mobius(d) != 0 && cache.greatest_prime_factor(d) <= r)
        .map(|d| Ok(cache.mobius(d) as f64 * theta_eval(d, ThetaVariant::Plain { n }, 1e-17)? / d as f64))
        .collect();
    Ok(kahan_sum(terms?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KfreeReport {
    pub exact: f64,
    /// |exact - 1/zeta(k)|.
    pub zeta_gap: f64,
}

/// P(B_n(rho) is k-free).
pub fn kfree_prob(n: u64, rho: f64, k: u32) -> Result<KfreeReport> {
    if k < 2 {
        return Err(domain("k-free needs k >= 2"));
    }
    let p = pmf_exact(&ModelSpec::bernoulli(rho, n))?;
    let c = ArithCache::new(n.max(2))?;
    let flags = c.kfree_flags(k);
    let exact = p.mass_where(|v| v > 0 && flags[v as usize]);
    Ok(KfreeReport {
        exact,
        zeta_gap: (exact - 1.0 / Constants::zeta(k)).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivisorExpectations {
    /// E d_n(B_n) = sum_{d <= n} P(d | B_n).
    pub e_d: f64,
    /// E sigma_{-1}(B_n), truncated at n.
    pub e_sigma_minus1: f64,
    /// E Psi(B_n) with Psi(m) = sum_{d | m, d <= n} log d log log d / d.
    pub e_psi: f64,
    /// sum_{d <= n} log d log log d Theta(d, n)/d^2.
    pub psi_theta: f64,
}

fn loglog_weight(d: u64) -> f64 {
    if d < 3 {
        return 0.0;
    }
    let l = (d as f64).ln();
    l * l.ln()
}

pub fn divisor_expectations(n: u64) -> Result<DivisorExpectations> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let rows: Result<Vec<(f64, f64, f64, f64)>> = (1..=n)
        .into_par_iter()
        .map(|d| {
            let p = div_spectral_bernoulli(n, d, 0);
            let df = d as f64;
            let w = loglog_weight(d);
            let th = if w > 0.0 {
                w * theta_eval(d, ThetaVariant::Plain { n }, 1e-17)? / (df * df)
            } else {
                0.0
            };
            Ok((p, p / df, w * p / df, th))
        })
        .collect();
    let rows = rows?;
    Ok(DivisorExpectations {
        e_d: kahan_sum(rows.iter().map(|r| r.0)),
        e_sigma_minus1: kahan_sum(rows.iter().map(|r| r.1)),
        e_psi: kahan_sum(rows.iter().map(|r| r.2)),
        psi_theta: kahan_sum(rows.iter().map(|r| r.3)),
    })
}

/// 4/sqrt(2 e pi), the displayed lower constant.
pub fn rademacher_lower_constant() -> f64 {
    4.0 / (2.0 * std::f64::consts::E * PI).sqrt()
}

/// sqrt(2/pi) sum_{k >= 1} 2^k e^{-2^{2k-1}}, the displayed upper constant.
pub fn rademacher_upper_constant() -> f64 {
    let s = kahan_sum((1..=5).map(|k: i32| 2f64.powi(k) * (-(2f64.powi(2 * k - 1))).exp()));
    (2.0 / PI).sqrt() * s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RademacherPrimeBounds {
    pub n: u64,
    pub exact: f64,
    pub lower: f64,
    pub upper: f64,
    /// Set for even n, where R_n is prime only at 2 (or -2).
    pub parity_note: Option<String>,
}

/// Exact P(R_n prime) against the displayed bounds with configurable constants.
pub fn rademacher_prime_bounds(
    n: u64,
    c_lower: f64,
    c_upper: f64,
    eps: f64,
    conv: PrimeConvention,
) -> Result<RademacherPrimeBounds> {
    if n < 3 {
        return Err(domain("need n >= 3"));
    }
    let exact = prime_prob_exact(&ModelSpec::rademacher(n), conv)?;
    let l = (n as f64).ln();
    let rem = (n as f64).powf(-0.5 + eps);
    Ok(RademacherPrimeBounds {
        n,
        exact,
        lower: rademacher_lower_constant() / l - c_lower * rem,
        upper: rademacher_upper_constant() / l + c_upper * rem,
        parity_note: (n % 2 == 0).then(|| "n even: R_n even, prime only if |R_n| = 2".to_string()),
    })
}

/// P(R_n prime, R_m prime) through R_m = R_n + R'_{m-n}.
pub fn joint_prime_prob(n: u64, m: u64, conv: PrimeConvention) -> Result<f64> {
    if n == 0 || n >= m {
        return Err(domain("need 1 <= n < m"));
    }
    let a = pmf_exact(&ModelSpec::rademacher(n))?;
    let b = pmf_exact(&ModelSpec::rademacher(m - n))?;
    let c = ArithCache::new(m.max(2))?;
    let mut acc = KahanSum::new();
    for (x, px) in a.iter().filter(|&(x, p)| p > 0.0 && conv.is_prime_value(x, &c)) {
        let inner = kahan_sum(
            b.iter()
                .filter(|&(y, q)| q > 0.0 && conv.is_prime_value(x + y, &c))
                .map(|(_, q)| q),
        );
        acc.add(px * inner);
    }
    Ok(acc.value())
}

/// P(W_n prime and W_n = l mod k); under `AbsoluteValue` the class is that of |W_n|.
pub fn prime_in_class_prob(model: &ModelSpec, l: u64, k: u64, conv: PrimeConvention) -> Result<f64> {
    if k == 0 || l.gcd(&k) != 1 {
        return Err(domain(format!("need gcd(l, k) = 1, got l={l}, k={k}")));
    }
    let p = pmf_exact(model)?;
    let c = support_cache(&p)?;
    let r = (l % k) as i64;
    Ok(p.mass_where(|v| conv.is_prime_value(v, &c) && v.abs().rem_euclid(k as i64) == r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimeWindowReport {
    pub n: u64,
    pub b: f64,
    pub exact: f64,
    pub window_formula: f64,
    pub gap: f64,
    /// gap sqrt(n)/(log n)^{3/2}.
    pub scaled_gap: f64,
}

/// P(S_n prime) against (2 pi B_n)^{-1/2} sum_{|p - m_n| <= sqrt(2 b B_n log n)} e^{-(p - m_n)^2/(2 B_n)}.
pub fn cramer_prime_window(n: u64, b: f64) -> Result<PrimeWindowReport> {
    if !(b > 0.5) {
        return Err(domain("window needs b > 1/2"));
    }
    let model = ModelSpec::cramer(n);
    let exact = prime_prob_exact(&model, PrimeConvention::default())?;
    let mom = cramer_moments(n, model.start())?;
    let nf = n as f64;
    let half = (2.0 * b * mom.variance * nf.ln()).sqrt();
    let lo = (mom.mean - half).ceil().max(2.0) as u64;
    let hi = (mom.mean + half).floor().max(0.0) as u64;
    let c = ArithCache::new(hi.max(n).max(2))?;
    let window_formula = kahan_sum(
        (lo..=hi)
            .filter(|&p| c.is_prime(p))
            .map(|p| (-(p as f64 - mom.mean).powi(2) / (2.0 * mom.variance)).exp()),
    ) / (2.0 * PI * mom.variance).sqrt();
    let gap = (exact - window_formula).abs();
    Ok(PrimeWindowReport {
        n,
        b,
        exact,
        window_formula,
        gap,
        scaled_gap: gap * nf.sqrt() / nf.ln().powf(1.5),
    })
}

/// P(S'_n is z-quasiprime): no prime factor <= z; 1 qualifies, 0 does not.
pub fn quasiprime_prob(n: u64, z: u64) -> Result<f64> {
    if z < 2 {
        return Err(domain("need z >= 2"));
    }
    let p = pmf_exact(&ModelSpec::cramer_primed(n))?;
    let c = support_cache(&p)?;
    Ok(p.mass_where(|v| v == 1 || (v >= 2 && c.least_prime_factor(v as u64) > z)))
}

/// Lower envelope (1 - eta) e^{-gamma}/log z.
pub fn quasiprime_lower(z: u64, eta: f64) -> f64 {
    (1.0 - eta) * Constants::mertens_factor() / (z as f64).ln()
}

/// N P(N | R_{N^2}) through the Rademacher reduction.
pub fn extremal_divisor_constant(nn: u64) -> Result<f64> {
    if nn % 2 == 1 || !(10..=100_000).contains(&nn) {
        return Err(domain(format!("need even 10 <= N <= 1e5, got {nn}")));
    }
    Ok(nn as f64 * div_spectral_rademacher(nn * nn, nn))
}

/// li(x) - li(2) by double-exponential quadrature.
pub fn li_offset(x: f64) -> f64 {
    if x <= 2.0 {
        return 0.0;
    }
    quadrature::double_exponential::integrate(|t: f64| 1.0 / t.ln(), 2.0, x, 1e-12 * x).integral
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PntSample {
    pub seed: u64,
    pub stream: u64,
    pub x: u64,
    pub count: u64,
    pub li: f64,
    /// (count - li) / sqrt(x log log x).
    pub li_gap_scaled: f64,
}

/// Jump counts of the Cramer walk up to x, one run per seed on the given stream.
pub fn cramer_pnt_sim(x: u64, seeds: &[u64], stream: u64) -> Result<Vec<PntSample>> {
    if x < 3 {
        return Err(domain("need x >= 3"));
    }
    let li = li_offset(x as f64);
    let xf = x as f64;
    let scale = (xf * xf.ln().ln().max(f64::MIN_POSITIVE)).sqrt();
    seeds
        .par_iter()
        .map(|&seed| {
            let count = count_cramer_jumps(x, 3, seed, stream)?;
            Ok(PntSample {
                seed,
                stream,
                x,
                count,
                li,
                li_gap_scaled: (count as f64 - li) / scale,
            })
        })
        .collect()
}

/// Largest N for the extremal-divisor path simulation; the path has N^2 steps.
pub const MAX_NK_N: u64 = 3000;

/// The indicators 1{N | R_{N^2}}, 2 <= N <= n_max, along one sampled path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NkSample {
    pub seed: u64,
    pub stream: u64,
    pub n_max: u64,
    /// Every N with N | R_{N^2}.
    pub hits: Vec<u64>,
    pub count: u64,
    /// sum_{2 <= N <= n_max} P(N | R_{N^2}), close to s log n_max.
    pub expected: f64,
}

/// Streams one Rademacher path to time n_max^2; same steps as `sample_path` for equal (seed, stream).
pub fn nk_sequence_sim(n_max: u64, seed: u64, stream: u64) -> Result<NkSample> {
    if n_max < 2 {
        return Err(domain("need n_max >= 2"));
    }
    if n_max > MAX_NK_N {
        return Err(capacity(format!("n_max {n_max} above {MAX_NK_N}")));
    }
    let mut rng = walk_rng(seed, stream);
    let mut r = 0i64;
    let mut hits = Vec::new();
    let mut next = 2u64;
    for t in 1..=n_max * n_max {
        r += if rng.random_bool(0.5) { 1 } else { -1 };
        if t == next * next {
            if r.rem_euclid(next as i64) == 0 {
                hits.push(next);
            }
            next += 1;
        }
    }
    let expected = kahan_sum((2..=n_max).into_par_iter().map(|nn| div_spectral_rademacher(nn * nn, nn)).collect::<Vec<_>>());
    Ok(NkSample {
        seed,
        stream,
        n_max,
        count: hits.len() as u64,
        hits,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_prob_examples() {
        let d = PrimeConvention::default();
        assert_eq!(prime_prob_exact(&ModelSpec::fair(4), d).unwrap(), 0.625);
        assert_eq!(prime_prob_exact(&ModelSpec::rademacher(3), d).unwrap(), 0.125);
        assert_eq!(prime_prob_exact(&ModelSpec::rademacher(3), PrimeConvention::absolute()).unwrap(), 0.25);
        assert_eq!(prime_prob_exact(&ModelSpec::cramer(3), d).unwrap(), 0.0);
    }

    #[test]
    fn pminus_examples() {
        let r = pminus_tail(4, 2).unwrap();
        assert_eq!(r.exact, 0.5);
        assert!((r.mobius_identity - 0.5).abs() < 1e-15);
        // y >= n: only 1 and primes above y survive.
        let c = ArithCache::new(40).unwrap();
        let p = pmf_exact(&ModelSpec::fair(40)).unwrap();
        let r = pminus_sweep(40, &[40], &c).unwrap()[0];
        assert!((r.exact - p.prob(1)).abs() < 1e-18);
        let r = pminus_sweep(40, &[7], &c).unwrap()[0];
        assert!((r.corrected_identity() - r.exact).abs() < 1e-12);
    }

    #[test]
    fn pminus_zero_atom_matters_for_small_n() {
        // n = 6, y = 5: the Mobius sum over {1,2,3,5,6} is -1, so the identity
        // misses the exact value by P(B_6 = 0) = 1/64.
        let r = pminus_tail(6, 5).unwrap();
        assert!((r.mobius_identity - r.exact + 1.0 / 64.0).abs() < 1e-14);
        assert!((r.corrected_identity() - r.exact).abs() < 1e-14);
    }

    #[test]
    fn theta_formula_examples() {
        let c = ArithCache::new(16).unwrap();
        let f = prime_prob_theta_formula(16, &c).unwrap();
        let e = prime_prob_exact(&ModelSpec::fair(16), PrimeConvention::default()).unwrap();
        assert!((f - e).abs() < 0.15);
    }

    #[test]
    fn kfree_examples() {
        assert_eq!(kfree_prob(3, 0.5, 2).unwrap().exact, 0.875);
        let r = kfree_prob(12, 0.5, 40).unwrap();
        assert_eq!(r.exact, 1.0 - 2f64.powi(-12));
        assert!(kfree_prob(3, 0.5, 1).is_err());
    }

    #[test]
    fn kfree_rho_dependence_at_4096() {
        let third = kfree_prob(4096, 1.0 / 3.0, 2).unwrap();
        let half = kfree_prob(4096, 0.5, 2).unwrap();
        assert!(third.zeta_gap < 0.02, "{third:?}");
        // The rho-difference still sits just above 0.02 here; the window
        // sd sqrt(n rho (1 - rho)) ~ 30 leaves O(1/sd) fluctuations.
        let diff = (third.exact - half.exact).abs();
        assert!((diff - 0.020936).abs() < 1e-5, "{diff}");
    }

    #[test]
    fn divisor_examples() {
        assert!((divisor_expectations(3).unwrap().e_d - 1.75).abs() < 1e-15);
        assert!((divisor_expectations(1).unwrap().e_d - 1.0).abs() < 1e-15);
        let e = divisor_expectations(200).unwrap();
        let p = pmf_exact(&ModelSpec::fair(200)).unwrap();
        let c = ArithCache::new(200).unwrap();
        let direct = kahan_sum(p.iter().map(|(v, w)| {
            if v == 0 {
                200.0 * w
            } else {
                c.divisor_count(v as u64) as f64 * w
            }
        }));
        assert!((e.e_d - direct).abs() < 1e-12);
        let psi = kahan_sum(p.iter().filter(|&(v, _)| v > 0).map(|(v, w)| {
            let (_, psi) = crate::arith::erdos_zaremba(v as u64, &c);
            psi * w
        })) + p.prob(0) * kahan_sum((3..=200).map(|d| loglog_weight(d) / d as f64));
        assert!((e.e_psi - psi).abs() < 1e-12);
    }

    #[test]
    fn rademacher_constants() {
        assert!((rademacher_lower_constant() - 0.9678).abs() < 1e-4);
        assert!((rademacher_upper_constant() - 0.2171).abs() < 1e-4);
        let r = rademacher_prime_bounds(1001, 0.0, 0.0, 0.1, PrimeConvention::default()).unwrap();
        let s = r.exact * 1001f64.ln();
        assert!((0.2..=2.5).contains(&s));
        assert!(r.parity_note.is_none());
        let e = rademacher_prime_bounds(10, 0.0, 0.0, 0.1, PrimeConvention::default()).unwrap();
        assert_eq!(e.exact, 210.0 / 1024.0);
        assert!(e.parity_note.is_some());
    }

    #[test]
    fn joint_prime_examples() {
        assert_eq!(joint_prime_prob(3, 5, PrimeConvention::default()).unwrap(), 3.0 / 32.0);
        let abs = joint_prime_prob(3, 5, PrimeConvention::absolute()).unwrap();
        assert!(abs > 3.0 / 32.0);
    }

    #[test]
    fn class_examples() {
        let d = PrimeConvention::default();
        let m = ModelSpec::rademacher(3);
        assert_eq!(prime_in_class_prob(&m, 3, 4, d).unwrap(), 0.125);
        let m = ModelSpec::rademacher(101);
        assert_eq!(prime_in_class_prob(&m, 0, 1, d).unwrap(), prime_prob_exact(&m, d).unwrap());
        assert!(prime_in_class_prob(&m, 2, 4, d).is_err());
        let m = ModelSpec::rademacher(2001);
        let parts: f64 = (1..5).map(|l| prime_in_class_prob(&m, l, 5, d).unwrap()).sum();
        let whole = prime_prob_exact(&m, d).unwrap() - pmf_exact(&m).unwrap().prob(5);
        assert!((parts - whole).abs() < 1e-15);
    }

    #[test]
    fn window_examples() {
        let r = cramer_prime_window(100, 1.0).unwrap();
        assert!(r.gap < 0.05, "{r:?}");
        assert!(cramer_prime_window(100, 0.5).is_err());
    }

    #[test]
    fn quasiprime_examples() {
        let p = pmf_exact(&ModelSpec::cramer_primed(300)).unwrap();
        let odd = p.mass_where(|v| v % 2 == 1);
        assert!((quasiprime_prob(300, 2).unwrap() - odd).abs() < 1e-15);
        let zs = [3u64, 5, 10, 30];
        let vals: Vec<f64> = zs.iter().map(|&z| quasiprime_prob(2000, z).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn extremal_examples() {
        let s = Constants::rademacher_s();
        assert!((s - 2.000_000_010_8).abs() < 1e-10);
        assert!((extremal_divisor_constant(50).unwrap() - s).abs() < 0.05);
        assert!(extremal_divisor_constant(51).is_err());
        let p = pmf_exact(&ModelSpec::rademacher(100)).unwrap();
        assert!((extremal_divisor_constant(10).unwrap() - 10.0 * p.divisible_mass(10, 0)).abs() < 1e-13);
    }

    #[test]
    fn li_matches_reference() {
        assert!((li_offset(1e7) / 664_917.359_884_789 - 1.0).abs() < 1e-9);
        assert!((li_offset(10.0) - 5.120_435_724_669_805).abs() < 1e-9);
    }

    #[test]
    fn nk_sequence_matches_stored_path() {
        let a = nk_sequence_sim(30, 7, 1).unwrap();
        let p = crate::walkdist::sample_path(&ModelSpec::rademacher(900), 7, 1).unwrap();
        let direct: Vec<u64> = (2..=30u64)
            .filter(|&nn| p.partial_sums[(nn * nn) as usize].rem_euclid(nn as i64) == 0)
            .collect();
        assert_eq!(a.hits, direct);
        assert!(nk_sequence_sim(MAX_NK_N + 1, 0, 0).is_err());
    }

    #[test]
    fn pnt_sim_small() {
        let a = cramer_pnt_sim(10, &[1, 2, 3], 0).unwrap();
        assert!(a.iter().all(|s| s.count <= 8));
        let b = cramer_pnt_sim(10_000, &[42], 0).unwrap();
        let c = cramer_pnt_sim(10_000, &[42], 0).unwrap();
        assert_eq!(b[0].count, c[0].count);
    }
}
