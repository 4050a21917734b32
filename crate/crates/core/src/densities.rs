//! Summation-method densities of integer sets, Hardy's inequality for the
//! Euler transform, the Euler-transform bound, Pascal inversion and the
//! Kubilius model comparison.

use crate::arith::ArithCache;
use crate::error::{capacity, domain, Result};
use crate::numeric::{kahan_sum, KahanSum};
use crate::walkdist::{binomial_row, pmf_exact, ModelSpec};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Largest exponent of the Pascal weights handled with big integers.
pub const MAX_PASCAL_INDEX: usize = 64;
/// Largest x in the Kubilius comparison.
pub const MAX_KUBILIUS_X: u64 = 1_000_000;
/// Largest number of primes <= r enumerated by the Kubilius model.
pub const MAX_KUBILIUS_PRIMES: usize = 20;
/// Borel means drop the Poisson mass beyond this many standard deviations.
pub const BOREL_SIGMAS: f64 = 12.0;

/// Membership table of a set of non-negative integers on 0..=n_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerSet {
    pub name: String,
    members: Vec<bool>,
}

impl IntegerSet {
    pub fn from_predicate<F: Fn(u64) -> bool>(name: &str, n_max: u64, pred: F) -> Self {
        Self {
            name: name.to_string(),
            members: (0..=n_max).map(pred).collect(),
        }
    }

    /// All of 0..=n_max.
    pub fn all(n_max: u64) -> Self {
        Self::from_predicate("all", n_max, |_| true)
    }

    pub fn evens(n_max: u64) -> Self {
        Self::from_predicate("evens", n_max, |j| j % 2 == 0)
    }

    pub fn primes(n_max: u64) -> Result<Self> {
        let c = ArithCache::new(n_max.max(2))?;
        Ok(Self::from_predicate("primes", n_max, |j| c.is_prime(j)))
    }

    /// k-free positive integers; 0 is excluded.
    pub fn kfree(k: u32, n_max: u64) -> Result<Self> {
        if k < 2 {
            return Err(domain("k-free needs k >= 2"));
        }
        let c = ArithCache::new(n_max.max(2))?;
        let flags = c.kfree_flags(k);
        Ok(Self::from_predicate(&format!("kfree{k}"), n_max, |j| j > 0 && flags[j as usize]))
    }

    /// y-smooth positive integers (1 included).
    pub fn smooth(y: u64, n_max: u64) -> Result<Self> {
        let c = ArithCache::new(n_max.max(2))?;
        Ok(Self::from_predicate(&format!("smooth{y}"), n_max, |j| {
            j == 1 || (j >= 2 && c.greatest_prime_factor(j) <= y)
        }))
    }

    /// Listed values; entries above n_max are an error.
    pub fn custom(name: &str, n_max: u64, list: &[u64]) -> Result<Self> {
        if let Some(&v) = list.iter().find(|&&v| v > n_max) {
            return Err(domain(format!("member {v} above range {n_max}")));
        }
        let mut members = vec![false; n_max as usize + 1];
        for &v in list {
            members[v as usize] = true;
        }
        Ok(Self {
            name: name.to_string(),
            members,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.members.len() as u64 - 1
    }

    /// Panics outside 0..=n_max.
    pub fn contains(&self, j: u64) -> bool {
        self.members[j as usize]
    }

    fn require(&self, top: u64) -> Result<()> {
        if top > self.n_max() {
            return Err(capacity(format!(
                "set '{}' declared on 0..={}, needs {top}",
                self.name,
                self.n_max()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityReport {
    /// #{1 <= j <= n : j in A}/n.
    pub cesaro: f64,
    /// P(B_n(rho) in A).
    pub euler: f64,
    /// e^{-t} sum_{j in A} t^j/j!.
    pub borel: f64,
    /// #{j in A : n <= j < n + eps sqrt n}/(eps sqrt n).
    pub window: f64,
}

pub fn density_suite(set: &IntegerSet, n: u64, rho: f64, t: f64, eps: f64) -> Result<DensityReport> {
    if n == 0 || !(rho > 0.0 && rho < 1.0) || !(t > 0.0) || !(eps > 0.0) {
        return Err(domain("need n >= 1, 0 < rho < 1, t > 0, eps > 0"));
    }
    let width = eps * (n as f64).sqrt();
    let w_end = (n as f64 + width).ceil() as u64;
    let sd = t.sqrt();
    let b_lo = (t - BOREL_SIGMAS * sd).floor().max(0.0) as u64;
    let b_hi = (t + BOREL_SIGMAS * sd).ceil() as u64;
    set.require(n.max(w_end).max(b_hi))?;
    let cesaro = (1..=n).filter(|&j| set.contains(j)).count() as f64 / n as f64;
    let euler = pmf_exact(&ModelSpec::bernoulli(rho, n))?.mass_where(|v| set.contains(v as u64));
    // Poisson weights relative to the mode, normalized over the retained window.
    let mode = (t.floor() as u64).clamp(b_lo, b_hi);
    let mut w = vec![0.0; (b_hi - b_lo + 1) as usize];
    let at = |j: u64| (j - b_lo) as usize;
    w[at(mode)] = 1.0;
    for j in mode + 1..=b_hi {
        w[at(j)] = w[at(j - 1)] * t / j as f64;
    }
    for j in (b_lo..mode).rev() {
        w[at(j)] = w[at(j + 1)] * (j + 1) as f64 / t;
    }
    let total = kahan_sum(w.iter().copied());
    let borel = kahan_sum((b_lo..=b_hi).filter(|&j| set.contains(j)).map(|j| w[at(j)])) / total;
    let hits = (n..)
        .take_while(|&j| (j as f64) < n as f64 + width)
        .filter(|&j| set.contains(j))
        .count();
    Ok(DensityReport {
        cesaro,
        euler,
        borel,
        window: hits as f64 / width,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyReport {
    /// sum_{n >= 0} (E_rho a)_n^p.
    pub lhs: f64,
    /// rho^{-1} sum_{n >= 0} a_n^p.
    pub rhs: f64,
    /// (E_rho a)_n = sum_h C(n, h) rho^h (1 - rho)^{n - h} a_h for the retained n.
    pub euler_means: Vec<f64>,
}

/// Hardy's inequality for the Euler transform of a finitely supported sequence.
///
/// Both sums start at index 0. The lhs is summed until n exceeds 2(K + 1)/rho
/// (K the last support index) and the terms fall below 1e-20 of the rhs.
pub fn hardy_lp_check(a: &[f64], rho: f64, p: f64) -> Result<HardyReport> {
    if !(p > 1.0) || !(rho > 0.0 && rho < 1.0) {
        return Err(domain("need p > 1 and 0 < rho < 1"));
    }
    if a.iter().any(|&x| !(x >= 0.0)) {
        return Err(domain("sequence must be non-negative"));
    }
    let rhs = kahan_sum(a.iter().map(|&x| x.powf(p))) / rho;
    let k = match a.iter().rposition(|&x| x > 0.0) {
        Some(k) => k,
        None => {
            return Ok(HardyReport {
                lhs: 0.0,
                rhs: 0.0,
                euler_means: vec![0.0; a.len()],
            })
        }
    };
    let a = &a[..=k];
    let n_min = (2.0 * (k + 1) as f64 / rho).ceil() as usize;
    let n_cap = 50 * n_min + 10_000;
    // Binomial(n, rho) masses on 0..=min(n, K), advanced one step at a time.
    let mut w = vec![0.0f64; k + 1];
    w[0] = 1.0;
    let mut lhs = KahanSum::new();
    let mut means = Vec::new();
    for n in 0..n_cap {
        if n > 0 {
            for h in (1..=k.min(n)).rev() {
                w[h] = (1.0 - rho) * w[h] + rho * w[h - 1];
            }
            w[0] *= 1.0 - rho;
        }
        let mean = kahan_sum(w.iter().zip(a).map(|(x, y)| x * y));
        let term = mean.powf(p);
        lhs.add(term);
        means.push(mean);
        if n >= n_min && term < 1e-20 * rhs {
            break;
        }
    }
    Ok(HardyReport {
        lhs: lhs.value(),
        rhs,
        euler_means: means,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerBoundReport {
    /// |sum_h 2^{-n} C(n, h) a_h|.
    pub lhs: f64,
    /// max_{1 <= l <= n+1} |A_l|, A_l = sum_{j < l} a_j.
    pub max_partial: f64,
    /// (C/sqrt n) max_partial.
    pub bound: f64,
}

impl EulerBoundReport {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound
    }
}

/// Default absolute constant of the Euler-transform bound; 2 max_h 2^{-n} C(n, h) <= 2 sqrt(2/(pi n)) makes 3 valid.
pub const EULER_BOUND_C: f64 = 3.0;

pub fn euler_transform_bound_check(a: &[f64], n: u64, c: f64) -> Result<EulerBoundReport> {
    if n == 0 || a.len() < n as usize + 1 {
        return Err(domain("need n >= 1 and a defined on 0..=n"));
    }
    let w = pmf_exact(&ModelSpec::fair(n))?;
    let lhs = kahan_sum(w.probs.iter().zip(a).map(|(x, y)| x * y)).abs();
    let mut acc = KahanSum::new();
    let mut max_partial: f64 = 0.0;
    for &x in &a[..=n as usize] {
        acc.add(x);
        max_partial = max_partial.max(acc.value().abs());
    }
    Ok(EulerBoundReport {
        lhs,
        max_partial,
        bound: c / (n as f64).sqrt() * max_partial,
    })
}

fn pow2(j: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << j)
}

fn big(c: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(c.clone()))
}

/// (2^j E f(B_j))_{j=0..len-1} = (sum_k C(j, k) f(k))_j.
pub fn pascal_forward(f: &[BigRational]) -> Result<Vec<BigRational>> {
    if f.len() > MAX_PASCAL_INDEX + 1 {
        return Err(capacity(format!("Pascal index above {MAX_PASCAL_INDEX}")));
    }
    Ok((0..f.len())
        .map(|j| {
            binomial_row(j as u64)
                .iter()
                .zip(f)
                .fold(BigRational::zero(), |s, (c, v)| s + big(c) * v)
        })
        .collect())
}

/// E f(B_j) for j = 0..len-1.
pub fn pascal_expectations(f: &[BigRational]) -> Result<Vec<BigRational>> {
    Ok(pascal_forward(f)?
        .into_iter()
        .enumerate()
        .map(|(j, v)| v / pow2(j))
        .collect())
}

/// f(i) = sum_{j=0}^{i} (-1)^{i-j} C(i, j) 2^j E f(B_j), with B_0 = 0.
pub fn pascal_invert(ef: &[BigRational], i: usize) -> Result<BigRational> {
    if i > MAX_PASCAL_INDEX || ef.len() <= i {
        return Err(domain("need i <= 64 and E f(B_j) for j = 0..=i"));
    }
    let row = binomial_row(i as u64);
    Ok((0..=i).fold(BigRational::zero(), |s, j| {
        let t = big(&row[j]) * pow2(j) * &ef[j];
        if (i - j) % 2 == 0 {
            s + t
        } else {
            s - t
        }
    }))
}

/// The displayed form sum_{j=1}^{i} (-1)^{i-j} 2^j C(i-1, j-1) E f(B_j), i >= 2.
/// It does not invert `pascal_forward`; kept for comparison.
pub fn pascal_invert_paper_form(ef: &[BigRational], i: usize) -> Result<BigRational> {
    if !(2..=MAX_PASCAL_INDEX).contains(&i) || ef.len() <= i {
        return Err(domain("need 2 <= i <= 64 and E f(B_j) for j = 0..=i"));
    }
    let row = binomial_row(i as u64 - 1);
    Ok((1..=i).fold(BigRational::zero(), |s, j| {
        let t = big(&row[j - 1]) * pow2(j) * &ef[j];
        if (i - j) % 2 == 0 {
            s + t
        } else {
            s - t
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KubiliusReport {
    /// #{m <= x : omega_r(m) in Q}/x.
    pub lhs: f64,
    /// P((T_1, ..., T_r) in Q).
    pub rhs: f64,
    pub gap: f64,
    /// x^{-c} + e^{-u log u}, u = log x / log r.
    pub envelope: f64,
}

/// Compares the integers m <= x with the independent model Y_p, P(Y_p = 1) = 1/p.
///
/// Both sides depend only on which primes p <= r divide m (resp. have Y_p = 1),
/// so each is computed exactly over the 2^{pi(r)} divisibility patterns.
pub fn kubilius_compare<Q: Fn(&[u32]) -> bool>(x: u64, r: u64, c: f64, q: Q) -> Result<KubiliusReport> {
    if x < 2 || r < 2 || r > x {
        return Err(domain("need 2 <= r <= x"));
    }
    if x > MAX_KUBILIUS_X {
        return Err(capacity(format!("x above {MAX_KUBILIUS_X}")));
    }
    let cache = ArithCache::new(r.max(2))?;
    let primes: Vec<u64> = cache.primes().iter().map(|&p| p as u64).filter(|&p| p <= r).collect();
    if primes.len() > MAX_KUBILIUS_PRIMES {
        return Err(capacity(format!("more than {MAX_KUBILIUS_PRIMES} primes below r")));
    }
    let mut mask = vec![0u32; x as usize + 1];
    for (i, &p) in primes.iter().enumerate() {
        for m in (p..=x).step_by(p as usize) {
            mask[m as usize] |= 1 << i;
        }
    }
    let patterns = 1usize << primes.len();
    let mut hist = vec![0u64; patterns];
    for &b in &mask[1..] {
        hist[b as usize] += 1;
    }
    // omega(m, t) for t = 1..=r from a divisibility pattern.
    let vector = |b: usize| -> Vec<u32> {
        let mut v = Vec::with_capacity(r as usize);
        let mut k = 0u32;
        let mut next = 0usize;
        for t in 1..=r {
            while next < primes.len() && primes[next] <= t {
                k += ((b >> next) & 1) as u32;
                next += 1;
            }
            v.push(k);
        }
        v
    };
    let mut lhs = KahanSum::new();
    let mut rhs = KahanSum::new();
    for b in 0..patterns {
        if !q(&vector(b)) {
            continue;
        }
        lhs.add(hist[b] as f64);
        let pr: f64 = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| if (b >> i) & 1 == 1 { 1.0 / p as f64 } else { 1.0 - 1.0 / p as f64 })
            .product();
        rhs.add(pr);
    }
    let lhs = lhs.value() / x as f64;
    let rhs = rhs.value();
    let u = (x as f64).ln() / (r as f64).ln();
    Ok(KubiliusReport {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        envelope: (x as f64).powf(-c) + (-u * u.ln()).exp(),
    })
}
