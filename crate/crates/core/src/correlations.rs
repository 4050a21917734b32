//! Two-time structure of the fair walk: joint divisibility, the correlation
//! Delta, mixing decay, divisibility of B_n B_m and coprimality of (B_n, B_m).

use crate::arith::ArithCache;
use crate::divprob::div_spectral_bernoulli;
use crate::error::{capacity, domain, Result};
use crate::numeric::{cos_pi_frac, kahan_sum, ratio_pow2, signed_pow, KahanSum};
use crate::walkdist::{binomial_row, pmf_exact, ExactPMF, ModelSpec, EXACT_COUNT_LIMIT};
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

/// Guard on the joint residue table of `product_div_exact`.
pub const MAX_PRODUCT_WORK: u64 = 1_000_000_000;
/// Largest gap evaluated with exact binomial weights in the product main term.
pub const EXACT_MAINTERM_GAP: u64 = 64;
/// Largest (m + 1)(n - m + 1) enumerated by `coprime_prob`.
pub const MAX_COPRIME_PAIRS: u64 = 16_000_000;
/// Largest magnitude tolerated for the imaginary part of the Delta sum.
pub const DELTA_IMAG_TOL: f64 = 1e-10;

/// Joint and marginal divisibility at times n < m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDivReport {
    pub joint_exact: f64,
    pub product_of_marginals: f64,
    pub delta_spectral: f64,
}

impl JointDivReport {
    pub fn delta_exact(&self) -> f64 {
        self.joint_exact - self.product_of_marginals
    }
}

fn check_times(n: u64, m: u64) -> Result<()> {
    if n == 0 || n >= m {
        return Err(domain(format!("need 1 <= n < m, got n={n}, m={m}")));
    }
    Ok(())
}

/// Counts of a dyadic pmf summed per residue mod h.
fn residue_counts(p: &ExactPMF, h: u64) -> Option<Vec<BigUint>> {
    let counts = p.exact_counts.as_ref()?;
    let mut out = vec![BigUint::zero(); h as usize];
    for (i, c) in counts.iter().enumerate() {
        out[(p.support_min + i as i64).rem_euclid(h as i64) as usize] += c;
    }
    Some(out)
}

/// P(d | B_n, delta | B_m) via B_m = B_n + B'_{m-n} with independent increments.
pub fn joint_div_exact(n: u64, m: u64, d: u64, delta: u64) -> Result<f64> {
    check_times(n, m)?;
    if d == 0 || delta == 0 {
        return Err(domain("moduli must be positive"));
    }
    let head = pmf_exact(&ModelSpec::fair(n))?;
    let tail = pmf_exact(&ModelSpec::fair(m - n))?;
    let de = delta as i64;
    if let (Some(hc), Some(tc)) = (&head.exact_counts, residue_counts(&tail, delta)) {
        let mut acc = BigUint::zero();
        for (a, c) in hc.iter().enumerate() {
            if a as u64 % d == 0 {
                acc += c * &tc[(-(a as i64)).rem_euclid(de) as usize];
            }
        }
        return Ok(ratio_pow2(&acc, m));
    }
    let q = tail.residue_masses(delta);
    Ok(kahan_sum(
        head.iter()
            .filter(|&(a, _)| a as u64 % d == 0)
            .map(|(a, p)| p * q[(-a).rem_euclid(de) as usize]),
    ))
}

fn cis_pi_frac(num: i128, den: u64) -> (f64, f64) {
    // sin(pi a/b) = cos(pi (2a - b)/(2b)).
    (cos_pi_frac(num, den), cos_pi_frac(2 * num - den as i128, 2 * den))
}

/// Real and imaginary parts of the Delta character sum.
pub fn delta_spectral_complex(n: u64, m: u64, d: u64, delta: u64) -> (f64, f64) {
    let (mut re, mut im) = (KahanSum::new(), KahanSum::new());
    let (di, ei) = (d as i128, delta as i128);
    for j in 1..d {
        let cj = signed_pow(cos_pi_frac(j as i128, d), n);
        for h in 1..delta {
            let ch = cos_pi_frac(h as i128, delta);
            let tail = signed_pow(ch, m - n);
            if tail == 0.0 {
                continue;
            }
            let mixed = signed_pow(cos_pi_frac(j as i128 * ei + h as i128 * di, d * delta), n);
            let amp = tail * (mixed - cj * signed_pow(ch, n));
            // Phase pi (j n delta + h m d)/(d delta), reduced mod 2 d delta.
            let p = 2 * di * ei;
            let num = ((j as i128 * (n as i128 % p)) % p * ei + (h as i128 * (m as i128 % p)) % p * di) % p;
            let (c, s) = cis_pi_frac(num, d * delta);
            re.add(amp * c);
            im.add(amp * s);
        }
    }
    let scale = 1.0 / (d * delta) as f64;
    (re.value() * scale, im.value() * scale)
}

/// Delta(n, m) = P(d | B_n, delta | B_m) - P(d | B_n) P(delta | B_m) by its character sum.
///
/// Panics if the imaginary part exceeds `DELTA_IMAG_TOL`.
pub fn delta_spectral(n: u64, m: u64, d: u64, delta: u64) -> Result<f64> {
    check_times(n, m)?;
    if d == 0 || delta == 0 {
        return Err(domain("moduli must be positive"));
    }
    let (re, im) = delta_spectral_complex(n, m, d, delta);
    assert!(im.abs() < DELTA_IMAG_TOL, "imaginary part {im} of Delta");
    Ok(re)
}

/// Both routes for one (n, m, d, delta).
pub fn joint_div_report(n: u64, m: u64, d: u64, delta: u64) -> Result<JointDivReport> {
    let joint_exact = joint_div_exact(n, m, d, delta)?;
    let marg = pmf_exact(&ModelSpec::fair(n))?.divisible_mass(d, 0)
        * pmf_exact(&ModelSpec::fair(m))?.divisible_mass(delta, 0);
    Ok(JointDivReport {
        joint_exact,
        product_of_marginals: marg,
        delta_spectral: delta_spectral(n, m, d, delta)?,
    })
}

/// Largest discrepancies found by [`CorrelationGrid::check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCheck {
    pub combos: u64,
    pub max_abs_gap: f64,
    pub max_imag: f64,
    /// (n, m, d, delta) attaining `max_abs_gap`.
    pub worst: (u64, u64, u64, u64),
}

/// Exhaustive comparison of the exact and spectral Delta over
/// 1 <= n < m <= max_m and 1 <= d, delta <= max_mod.
///
/// Residue masses of B_k for every k <= max_m are tabulated once, and the
/// character sum is factored as sum_h e^{i pi h m/delta} cos^{m-n}(pi h/delta) c_h(n),
/// so each (n, m) pair costs O(delta) on both routes.
pub struct CorrelationGrid {
    max_m: u64,
    max_mod: u64,
    /// masses[k][L] = P(B_k = r mod L), r in 0..L, for every L in `moduli`.
    masses: Vec<Vec<Vec<f64>>>,
    moduli: Vec<u64>,
}

impl CorrelationGrid {
    pub fn new(max_m: u64, max_mod: u64) -> Result<Self> {
        if max_m < 2 || max_mod == 0 {
            return Err(domain("grid needs max_m >= 2 and max_mod >= 1"));
        }
        if max_m > EXACT_COUNT_LIMIT || max_mod > 64 {
            return Err(capacity("correlation grid above 4096 steps or modulus 64"));
        }
        let mut moduli: Vec<u64> = (1..=max_mod)
            .flat_map(|d| (1..=max_mod).map(move |e| d.lcm(&e)))
            .collect();
        moduli.sort_unstable();
        moduli.dedup();
        let max_l = *moduli.last().unwrap() as usize;
        let mut masses = Vec::with_capacity(max_m as usize + 1);
        // Pascal rows in floats: only additions of positive terms.
        let mut row = vec![1.0f64];
        for k in 0..=max_m {
            if k > 0 {
                let mut next = vec![0.0; row.len() + 1];
                for (i, &p) in row.iter().enumerate() {
                    next[i] += 0.5 * p;
                    next[i + 1] += 0.5 * p;
                }
                row = next;
            }
            let mut per = vec![Vec::new(); max_l + 1];
            for &l in &moduli {
                let mut acc = vec![KahanSum::new(); l as usize];
                for (v, &p) in row.iter().enumerate() {
                    acc[v % l as usize].add(p);
                }
                per[l as usize] = acc.iter().map(|s| s.value()).collect();
            }
            masses.push(per);
        }
        Ok(Self {
            max_m,
            max_mod,
            masses,
            moduli,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// P(B_k = r mod l) from the tables.
    pub fn residue_mass(&self, k: u64, l: u64, r: u64) -> f64 {
        self.masses[k as usize][l as usize][r as usize]
    }

    /// Exact Delta from the residue tables.
    pub fn delta_exact(&self, n: u64, m: u64, d: u64, delta: u64) -> f64 {
        let l = d.lcm(&delta);
        let head = &self.masses[n as usize][l as usize];
        let tail = &self.masses[(m - n) as usize][delta as usize];
        let mut joint = 0.0;
        let mut pd = 0.0;
        for r in (0..l).step_by(d as usize) {
            let p = head[r as usize];
            pd += p;
            joint += p * tail[((delta - r % delta) % delta) as usize];
        }
        joint - pd * self.masses[m as usize][delta as usize][0]
    }

    fn check_pair(&self, d: u64, delta: u64) -> GridCheck {
        let mut out = GridCheck {
            combos: 0,
            max_abs_gap: 0.0,
            max_imag: 0.0,
            worst: (0, 0, d, delta),
        };
        let (di, ei) = (d as i128, delta as i128);
        // cos^g(pi h/delta) for g <= max_m.
        let pow_h: Vec<Vec<f64>> = (0..delta)
            .map(|h| {
                let c = cos_pi_frac(h as i128, delta);
                let mut v = Vec::with_capacity(self.max_m as usize + 1);
                let mut x = 1.0;
                for _ in 0..=self.max_m {
                    v.push(x);
                    x *= c;
                }
                v
            })
            .collect();
        let phase_h: Vec<(f64, f64)> = (0..2 * delta).map(|k| cis_pi_frac(k as i128, delta)).collect();
        let scale = 1.0 / (d * delta) as f64;
        let mut c_h = vec![(0.0f64, 0.0f64); delta as usize];
        for n in 1..self.max_m {
            for h in 1..delta {
                let ch_n = signed_pow(cos_pi_frac(h as i128, delta), n);
                let (mut re, mut im) = (0.0, 0.0);
                for j in 1..d {
                    let mixed = signed_pow(cos_pi_frac(j as i128 * ei + h as i128 * di, d * delta), n);
                    let amp = mixed - signed_pow(cos_pi_frac(j as i128, d), n) * ch_n;
                    let (c, s) = cis_pi_frac((j as i128 * n as i128) % (2 * di), d);
                    re += amp * c;
                    im += amp * s;
                }
                c_h[h as usize] = (re, im);
            }
            for m in n + 1..=self.max_m {
                let g = (m - n) as usize;
                let (mut re, mut im) = (0.0, 0.0);
                for h in 1..delta {
                    let w = pow_h[h as usize][g];
                    let (c, s) = phase_h[((h * m) % (2 * delta)) as usize];
                    let (a, b) = c_h[h as usize];
                    re += w * (c * a - s * b);
                    im += w * (c * b + s * a);
                }
                let spec = re * scale;
                let gap = (spec - self.delta_exact(n, m, d, delta)).abs();
                out.combos += 1;
                if gap > out.max_abs_gap {
                    out.max_abs_gap = gap;
                    out.worst = (n, m, d, delta);
                }
                out.max_imag = out.max_imag.max((im * scale).abs());
            }
        }
        out
    }

    /// Runs every (d, delta) in parallel and merges the maxima.
    pub fn check(&self) -> GridCheck {
        let pairs: Vec<(u64, u64)> = (1..=self.max_mod)
            .flat_map(|d| (1..=self.max_mod).map(move |e| (d, e)))
            .collect();
        pairs
            .par_iter()
            .map(|&(d, e)| self.check_pair(d, e))
            .reduce(
                || GridCheck {
                    combos: 0,
                    max_abs_gap: 0.0,
                    max_imag: 0.0,
                    worst: (0, 0, 0, 0),
                },
                |a, b| GridCheck {
                    combos: a.combos + b.combos,
                    max_abs_gap: a.max_abs_gap.max(b.max_abs_gap),
                    max_imag: a.max_imag.max(b.max_imag),
                    worst: if b.max_abs_gap > a.max_abs_gap { b.worst } else { a.worst },
                },
            )
    }
}

/// |Delta(n, n + g)| along a list of gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub d: u64,
    pub delta: u64,
    pub n: u64,
    pub gaps: Vec<u64>,
    pub abs_delta: Vec<f64>,
    /// Last value below the first. Only meaningful when the gaps span two decades.
    pub decreasing_trend: bool,
    /// P(d | B_n, delta | B_m) <= min of the marginals at every gap.
    pub joint_le_min_marginal: bool,
}

pub fn mixing_scan(d: u64, delta: u64, n: u64, gaps: &[u64]) -> Result<MixingReport> {
    if gaps.is_empty() || gaps.contains(&0) {
        return Err(domain("gaps must be a non-empty list of positive integers"));
    }
    let pd = div_spectral_bernoulli(n, d, 0);
    let mut abs_delta = Vec::with_capacity(gaps.len());
    let mut joint_ok = true;
    for &g in gaps {
        let m = n + g;
        let dl = delta_spectral(n, m, d, delta)?;
        let pe = div_spectral_bernoulli(m, delta, 0);
        joint_ok &= pd * pe + dl <= pd.min(pe) + 1e-12;
        abs_delta.push(dl.abs());
    }
    let (first, last) = (abs_delta[0], abs_delta[abs_delta.len() - 1]);
    let decreasing_trend = last < first || first == 0.0;
    Ok(MixingReport {
        d,
        delta,
        n,
        gaps: gaps.to_vec(),
        abs_delta,
        decreasing_trend,
        joint_le_min_marginal: joint_ok,
    })
}

/// P(D | B_n B_m) from the joint residues of (B_n, B_m) mod D.
pub fn product_div_exact(n: u64, m: u64, dd: u64) -> Result<f64> {
    check_times(n, m)?;
    if dd == 0 {
        return Err(domain("modulus must be positive"));
    }
    if n.saturating_mul(dd * dd) > MAX_PRODUCT_WORK {
        return Err(capacity(format!("n D^2 = {} above {MAX_PRODUCT_WORK}", n as u128 * (dd * dd) as u128)));
    }
    if dd == 1 {
        return Ok(1.0);
    }
    let head = pmf_exact(&ModelSpec::fair(n))?;
    let tail = pmf_exact(&ModelSpec::fair(m - n))?;
    let hits = |r: u64, t: u64| (r * ((r + t) % dd)) % dd == 0;
    if let (Some(hc), Some(tc)) = (residue_counts(&head, dd), residue_counts(&tail, dd)) {
        let mut acc = BigUint::zero();
        for r in 0..dd {
            for t in 0..dd {
                if hits(r, t) {
                    acc += &hc[r as usize] * &tc[t as usize];
                }
            }
        }
        return Ok(ratio_pow2(&acc, m));
    }
    let hm = head.residue_masses(dd);
    let tm = tail.residue_masses(dd);
    let mut acc = KahanSum::new();
    for r in 0..dd {
        for t in 0..dd {
            if hits(r, t) {
                acc.add(hm[r as usize] * tm[t as usize]);
            }
        }
    }
    Ok(acc.value())
}

/// Main term with its scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductMainTerm {
    pub main: f64,
    /// (D^{1 + eps}/n)^{1/2}.
    pub eps_bound: f64,
}

/// (1/(D 2^g)) sum_{k=0}^{g} C(g, k) rho_k(D) as an exact rational, g <= 64.
pub fn product_mainterm_ratio(gap: u64, dd: u64, cache: &ArithCache) -> Result<BigRational> {
    if gap > EXACT_MAINTERM_GAP {
        return Err(capacity(format!("exact main term needs gap <= {EXACT_MAINTERM_GAP}")));
    }
    let row = binomial_row(gap);
    let mut num = BigUint::zero();
    for (k, c) in row.iter().enumerate() {
        num += c * crate::arith::rho_k_formula(k as u64, dd, cache)?;
    }
    let den = BigUint::from(dd) << gap as usize;
    Ok(BigRational::new(num.into(), den.into()))
}

/// Main term of P(D | B_n B_m): E rho_K(D)/D with K = B_{m-n}.
///
/// Exact binomial weights for m - n <= 64, otherwise the residue masses of
/// K mod D (rho_k(D) depends on k mod D only).
pub fn product_div_mainterm(n: u64, m: u64, dd: u64, eps: f64, cache: &ArithCache) -> Result<ProductMainTerm> {
    check_times(n, m)?;
    if dd == 0 {
        return Err(domain("modulus must be positive"));
    }
    let gap = m - n;
    let main = if gap <= EXACT_MAINTERM_GAP {
        let r = product_mainterm_ratio(gap, dd, cache)?;
        ratio_to_f64(&r)
    } else {
        let q = pmf_exact(&ModelSpec::fair(gap))?.residue_masses(dd);
        let mut acc = KahanSum::new();
        for (r, &p) in q.iter().enumerate() {
            acc.add(p * crate::arith::rho_k_formula(r as u64, dd, cache)? as f64);
        }
        acc.value() / dd as f64
    };
    Ok(ProductMainTerm {
        main,
        eps_bound: ((dd as f64).powf(1.0 + eps) / n as f64).sqrt(),
    })
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    let shift = (d.bits() as i64 - 60).max(0);
    let nb = (n.bits() as i64 - 60).max(0);
    let nf = num_traits::ToPrimitive::to_f64(&(n >> nb as usize)).unwrap();
    let df = num_traits::ToPrimitive::to_f64(&(d >> shift as usize)).unwrap();
    crate::numeric::ldexp(nf / df, nb - shift)
}

/// Upper bounds for P(D | B_n B_m) with the weight 2^{omega(d)} as displayed
/// and with the weight 2^{omega(D)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductBound {
    pub displayed: f64,
    pub corrected: f64,
}

/// (1/D) sum_{d | D_half} w(d) d sum_{u | D_half/d} mu(u) P(u d | B_{m-n}) + 2^{-(m-n)}/sqrt(D) + C (D^{1+eps}/n)^{1/2}.
pub fn product_div_bound(
    n: u64,
    m: u64,
    dd: u64,
    c_eps: f64,
    eps: f64,
    cache: &ArithCache,
) -> Result<ProductBound> {
    check_times(n, m)?;
    if dd == 0 {
        return Err(domain("modulus must be positive"));
    }
    let gap = m - n;
    let dh = cache.d_half(dd);
    let (mut disp, mut corr) = (KahanSum::new(), KahanSum::new());
    let w_big = (1u64 << cache.omega(dd)) as f64;
    for d in cache.divisors(dh) {
        let mut inner = KahanSum::new();
        for u in cache.divisors(dh / d) {
            let mu = cache.mobius(u);
            if mu != 0 {
                inner.add(mu as f64 * div_spectral_bernoulli(gap, u * d, 0));
            }
        }
        let base = d as f64 * inner.value();
        disp.add((1u64 << cache.omega(d)) as f64 * base);
        corr.add(w_big * base);
    }
    let rest = crate::numeric::ldexp(1.0, -(gap as i64)) / (dd as f64).sqrt()
        + c_eps * ((dd as f64).powf(1.0 + eps) / n as f64).sqrt();
    Ok(ProductBound {
        displayed: disp.value() / dd as f64 + rest,
        corrected: corr.value() / dd as f64 + rest,
    })
}

/// Exact P(gcd(B_m, B_n) = 1) and the Mobius window sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoprimeReport {
    pub exact: f64,
    pub mobius_approx: f64,
}

/// gcd(B_m, B_n) = gcd(a, b) with a = B_m and b = B_n - B_m independent; gcd(0, 0) = 0.
pub fn coprime_prob(n: u64, m: u64, cache: &ArithCache) -> Result<CoprimeReport> {
    if m == 0 || m >= n {
        return Err(domain(format!("need 1 <= m < n, got n={n}, m={m}")));
    }
    let g = n - m;
    if (m + 1).saturating_mul(g + 1) > MAX_COPRIME_PAIRS {
        return Err(capacity(format!("pair enumeration above {MAX_COPRIME_PAIRS} gcds")));
    }
    let pa = pmf_exact(&ModelSpec::fair(m))?;
    let pb = pmf_exact(&ModelSpec::fair(g))?;
    let exact = pa
        .probs
        .par_iter()
        .enumerate()
        .map(|(a, &p)| {
            let inner = kahan_sum(
                pb.probs
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| (a as u64).gcd(&(b as u64)) == 1)
                    .map(|(_, &q)| q),
            );
            p * inner
        })
        .collect::<Vec<f64>>();
    let exact = kahan_sum(exact);
    let w = m.min(g);
    let mobius_approx = kahan_sum((1..=w).map(|d| cache.mobius(d) as f64 / (d * d) as f64));
    Ok(CoprimeReport { exact, mobius_approx })
}
