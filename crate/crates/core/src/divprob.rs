//! Single-time divisibility probabilities: exact residue sums, finite
//! character sums, Theta-function approximants and the audits comparing them.

use crate::error::{domain, Error, Result};
use crate::numeric::{cos_pi_frac, kahan_sum, signed_pow, KahanSum};
use crate::report::{flag_argmax_by_n, AuditRow};
use crate::walkdist::{
    cramer_charfn, cramer_moments, cramer_q, model_moments, pmf_exact, ModelKind, ModelSpec,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest number of Theta terms on each side of zero.
pub const MAX_THETA_TERMS: usize = 1_000_000;

/// P(d | W_n + u) from the exact mass function.
pub fn div_exact(model: &ModelSpec, d: u64) -> Result<f64> {
    if d == 0 {
        return Err(domain("modulus must be positive"));
    }
    Ok(pmf_exact(model)?.divisible_mass(d, model.u))
}

/// P(d | B_n + u) for the fair walk through
/// 1/d + (2/d) sum_{1 <= j < d/2} cos(pi (2u + n) j / d) cos^n(pi j / d).
pub fn div_spectral_bernoulli(n: u64, d: u64, u: u64) -> f64 {
    assert!(d > 0, "modulus must be positive");
    if d == 1 {
        return 1.0;
    }
    let a = 2 * u as i128 + n as i128;
    let mut acc = KahanSum::new();
    for j in 1..d.div_ceil(2) {
        if 2 * j == d {
            continue;
        }
        let c = cos_pi_frac(j as i128, d);
        acc.add(cos_pi_frac(a * j as i128, d) * signed_pow(c, n));
    }
    1.0 / d as f64 + 2.0 / d as f64 * acc.value()
}

/// `div_spectral_bernoulli` for several shifts at once, sharing the cos^n factors.
pub fn div_spectral_bernoulli_shifts(n: u64, d: u64, us: &[u64]) -> Vec<f64> {
    assert!(d > 0, "modulus must be positive");
    if d == 1 {
        return vec![1.0; us.len()];
    }
    let mut acc = vec![KahanSum::new(); us.len()];
    for j in 1..d.div_ceil(2) {
        if 2 * j == d {
            continue;
        }
        let w = signed_pow(cos_pi_frac(j as i128, d), n);
        for (s, &u) in acc.iter_mut().zip(us) {
            s.add(cos_pi_frac((2 * u as i128 + n as i128) * j as i128, d) * w);
        }
    }
    acc.iter()
        .map(|s| 1.0 / d as f64 + 2.0 / d as f64 * s.value())
        .collect()
}

/// P(d | B_n(rho) + u) through (1/d) sum_j e^{2 pi i j u/d} (1 - rho + rho e^{2 pi i j/d})^n.
pub fn div_spectral_binomial(n: u64, rho: f64, d: u64, u: u64) -> f64 {
    assert!(d > 0, "modulus must be positive");
    if d == 1 {
        return 1.0;
    }
    let mut acc = KahanSum::new();
    for j in 1..d {
        let th = 2.0 * PI * j as f64 / d as f64;
        let z = Complex64::new(1.0 - rho + rho * th.cos(), rho * th.sin());
        let r = z.norm();
        if r == 0.0 {
            continue;
        }
        let ang = n as f64 * z.arg() + 2.0 * PI * ((j as u128 * u as u128) % d as u128) as f64 / d as f64;
        acc.add((n as f64 * r.ln()).exp() * ang.cos());
    }
    1.0 / d as f64 + acc.value() / d as f64
}

/// Reduction of P(delta | R_M) to P(d' | B_M + u'); `None` when parity forbids divisibility.
pub fn rademacher_reduction(m: u64, delta: u64) -> Option<(u64, u64)> {
    if delta % 2 == 1 {
        let inv2 = delta.div_ceil(2) % delta;
        let u = ((delta - m % delta) % delta) as u128 * inv2 as u128 % delta as u128;
        Some((delta, u as u64))
    } else if m % 2 == 0 {
        let dp = delta / 2;
        let u = (dp - (m / 2) % dp) % dp;
        Some((dp, u))
    } else {
        None
    }
}

/// P(delta | R_M) through the fair Bernoulli spectral sum.
pub fn div_spectral_rademacher(m: u64, delta: u64) -> f64 {
    match rademacher_reduction(m, delta) {
        Some((d, u)) => div_spectral_bernoulli(m, d, u),
        None => 0.0,
    }
}

/// Which Theta series to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ThetaVariant {
    /// Theta(d, n) = sum_l e^{i n pi l/d - n pi^2 l^2/(2 d^2)}.
    Plain { n: u64 },
    /// Theta_u(d, n) with phase e^{i pi (2u + n) l/d}.
    Shifted { u: u64, n: u64 },
    /// Theta_1(delta, M) = 2 sum_l e^{-2 M pi^2 l^2/delta^2}.
    RademacherEven { m: u64 },
    /// Theta_2(delta, M) = 2 sum_{l >= 0} (e^{-M pi^2 (2l)^2/(2 delta^2)} - e^{-M pi^2 (2l+1)^2/(2 delta^2)}) - 1.
    RademacherOdd { m: u64 },
    /// sum_l e^{2 i pi m l/d - 2 pi^2 B l^2/d^2}.
    Cramer { drift: f64, variance: f64 },
}

/// Kernel sum_l e^{2 pi i drift l/d - 2 pi^2 variance l^2/d^2}, times `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaParams {
    pub d: u64,
    pub drift: f64,
    pub variance: f64,
    pub tail_tol: f64,
    /// Numerator a of an exact phase pi a l/d, when the drift is a half-integer.
    pub phase_num: Option<u128>,
    pub scale: f64,
}

impl ThetaParams {
    pub fn new(d: u64, variant: ThetaVariant, tail_tol: f64) -> Self {
        let (drift, variance, phase_num, scale) = match variant {
            ThetaVariant::Plain { n } => (n as f64 / 2.0, n as f64 / 4.0, Some(n as u128), 1.0),
            ThetaVariant::Shifted { u, n } => {
                let a = 2 * u as u128 + n as u128;
                (a as f64 / 2.0, n as f64 / 4.0, Some(a), 1.0)
            }
            ThetaVariant::RademacherEven { m } => (0.0, m as f64, Some(0), 2.0),
            ThetaVariant::RademacherOdd { m } => (d as f64 / 2.0, m as f64 / 4.0, Some(d as u128), 1.0),
            ThetaVariant::Cramer { drift, variance } => (drift, variance, None, 1.0),
        };
        Self {
            d,
            drift,
            variance,
            tail_tol,
            phase_num,
            scale,
        }
    }

    /// Gaussian rate a in e^{-a l^2}.
    pub fn rate(&self) -> f64 {
        2.0 * PI * PI * self.variance / (self.d as f64).powi(2)
    }

    /// Smallest L with 2 sum_{l > L} e^{-a l^2} below the tolerance.
    pub fn truncation(&self) -> Result<usize> {
        let a = self.rate();
        if !(a > 0.0) {
            return Err(Error::Truncation(MAX_THETA_TERMS));
        }
        let tol = self.tail_tol / (2.0 * self.scale);
        // Tail after L is at most e^{-a(L+1)^2} / (1 - e^{-a(2L+3)}).
        let tail = |l: f64| (-a * (l + 1.0).powi(2)).exp() / (1.0 - (-a * (2.0 * l + 3.0)).exp());
        let mut l = ((-(tol.ln()) / a).sqrt()).floor().max(0.0);
        while l > 0.0 && tail(l - 1.0) < tol {
            l -= 1.0;
        }
        while tail(l) >= tol {
            l += 1.0;
            if l > MAX_THETA_TERMS as f64 {
                return Err(Error::Truncation(MAX_THETA_TERMS));
            }
        }
        if l as usize > MAX_THETA_TERMS {
            return Err(Error::Truncation(MAX_THETA_TERMS));
        }
        Ok(l as usize)
    }

    fn phase_cos(&self, l: u64) -> f64 {
        match self.phase_num {
            Some(a) => {
                let p = 2 * self.d as u128;
                let r = (a % p) * (l as u128 % p) % p;
                cos_pi_frac(r as i128, self.d)
            }
            None => {
                let x = (self.drift * l as f64 / self.d as f64).rem_euclid(1.0);
                (2.0 * PI * x).cos()
            }
        }
    }

    /// Real value of the truncated series. The +l and -l terms are conjugate, so
    /// the imaginary part vanishes identically.
    pub fn eval(&self) -> Result<f64> {
        let l_max = self.truncation()?;
        let a = self.rate();
        let mut acc = KahanSum::new();
        for l in (1..=l_max as u64).rev() {
            acc.add(self.phase_cos(l) * (-a * (l * l) as f64).exp());
        }
        Ok(self.scale * (1.0 + 2.0 * acc.value()))
    }
}

/// Evaluates a Theta series at modulus `d`.
pub fn theta_eval(d: u64, variant: ThetaVariant, tail_tol: f64) -> Result<f64> {
    if d == 0 || !(tail_tol > 0.0) {
        return Err(domain("need d >= 1 and a positive tolerance"));
    }
    ThetaParams::new(d, variant, tail_tol).eval()
}

/// |Theta(d, n)/d - sqrt(2/(pi n)) sum_{z = 0 mod d} e^{-(2z - n)^2/(2n)}|.
pub fn theta_poisson_residual(d: u64, n: u64) -> Result<f64> {
    if d == 0 || n == 0 {
        return Err(domain("need d, n >= 1"));
    }
    let lhs = theta_eval(d, ThetaVariant::Plain { n }, 1e-16)? / d as f64;
    let nf = n as f64;
    let g = |k: i64| {
        let z = k as f64 * d as f64;
        (-(2.0 * z - nf).powi(2) / (2.0 * nf)).exp()
    };
    let k0 = (nf / (2.0 * d as f64)).round() as i64;
    let mut terms = vec![g(k0)];
    for dir in [-1i64, 1] {
        let mut k = k0 + dir;
        loop {
            let t = g(k);
            terms.push(t);
            if t < 1e-18 {
                break;
            }
            k += dir;
        }
    }
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rhs = (2.0 / (PI * nf)).sqrt() * kahan_sum(terms);
    Ok((lhs - rhs).abs())
}

/// (2/d) sum_{1 <= j < d/2} e^{-2 n j^2/d^2}, a pointwise bound on |P(d | B_n) - 1/d|.
pub fn handy_envelope(n: u64, d: u64) -> f64 {
    let df = d as f64;
    2.0 / df
        * kahan_sum(
            (1..d.div_ceil(2))
                .filter(|&j| 2 * j != d)
                .map(|j| (-2.0 * n as f64 * (j * j) as f64 / (df * df)).exp()),
        )
}

/// Scaling applied to the sup-error of the uniform Theta estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaScale {
    /// Multiply by n^{3/2} / (log n)^{5/2}.
    PolyLog,
    /// Report raw errors.
    Unit,
}

impl ThetaScale {
    pub fn factor(&self, n: u64) -> f64 {
        match self {
            ThetaScale::PolyLog => (n as f64).powf(1.5) / (n as f64).ln().powf(2.5),
            ThetaScale::Unit => 1.0,
        }
    }
}

/// Rows (n, d) for 2 <= d <= n of |P(d | B_n + u) - Theta_u(d, n)/d|, sorted by (n, d),
/// with the maximizing d of each n flagged.
pub fn audit_theta_uniform(n_grid: &[u64], u: u64, scale: ThetaScale) -> Result<Vec<AuditRow>> {
    if n_grid.is_empty() {
        return Err(domain("empty grid"));
    }
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let mut rows = Vec::new();
    for &n in &grid {
        let f = scale.factor(n);
        let chunk: Result<Vec<AuditRow>> = (2..=n)
            .into_par_iter()
            .map(|d| {
                let exact = div_spectral_bernoulli(n, d, u);
                let approx = theta_eval(d, ThetaVariant::Shifted { u, n }, 1e-16)? / d as f64;
                Ok(AuditRow::new(n, d, u, exact, approx, f))
            })
            .collect();
        rows.extend(chunk?);
    }
    flag_argmax_by_n(&mut rows);
    Ok(rows)
}

/// Per-n maxima of an audit: `(n, argmax d, raw error, scaled error)`.
pub fn sup_by_n(rows: &[AuditRow]) -> Vec<(u64, u64, f64, f64)> {
    rows.iter()
        .filter(|r| r.argmax_flag)
        .map(|r| (r.n, r.d, r.raw_err, r.scaled_err))
        .collect()
}

/// Range and envelope of the small-divisor estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SmallDivisorMode {
    /// d < pi sqrt(n/(2 alpha log n)), envelope n^{-alpha + eps}.
    Alpha { alpha: f64 },
    /// d < (pi/sqrt 2) n^{(1 - rho_hat)/2}, envelope e^{-(1 - eps) n^rho_hat}.
    Rho { rho_hat: f64 },
    /// All 2 <= d <= n for B_n(rho), envelope e^{-8 n rho (1 - rho)/d^2}.
    Binomial { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallDivisorReport {
    pub n: u64,
    pub mode: SmallDivisorMode,
    pub eps: f64,
    /// Largest d in the audited range.
    pub d_max: u64,
    pub sup_err: f64,
    pub argmax_d: u64,
    /// Envelope at the maximizing d.
    pub envelope: f64,
    /// max over the range of err(d) / envelope(d).
    pub worst_ratio: f64,
    /// sum_{2 <= d < sqrt n} |P(d | B_n) - 1/d|.
    pub sum_below_sqrt_n: f64,
    /// sqrt(n) sup_{2 <= d <= n} |P(d | B_n) - 1/d|.
    pub sqrt_n_sup_all: f64,
}

impl SmallDivisorReport {
    pub fn within(&self) -> bool {
        self.worst_ratio <= 1.0
    }

    pub fn to_row(&self) -> AuditRow {
        let mut row = AuditRow::new(self.n, self.argmax_d, 0, self.sup_err, self.envelope, 1.0);
        row.raw_err = self.sup_err;
        row.scaled_err = self.worst_ratio;
        row.argmax_flag = true;
        row.with("sum_below_sqrt_n", self.sum_below_sqrt_n)
            .with("sqrt_n_sup_all", self.sqrt_n_sup_all)
    }
}

/// Sup of |P(d | B_n) - 1/d| over the mode's d-range against its envelope.
pub fn audit_small_divisor(n: u64, mode: SmallDivisorMode, eps: f64) -> Result<SmallDivisorReport> {
    if n < 16 {
        return Err(domain("small-divisor audit needs n >= 16"));
    }
    let nf = n as f64;
    let rho = match mode {
        SmallDivisorMode::Binomial { rho } if !(rho > 0.0 && rho < 1.0) => {
            return Err(domain("rho outside (0, 1)"))
        }
        SmallDivisorMode::Binomial { rho } => rho,
        _ => 0.5,
    };
    let err = |d: u64| {
        let p = if rho == 0.5 {
            div_spectral_bernoulli(n, d, 0)
        } else {
            div_spectral_binomial(n, rho, d, 0)
        };
        (p - 1.0 / d as f64).abs()
    };
    let strict_below = |x: f64| (x.ceil() as u64).saturating_sub(1);
    let (d_max, env): (u64, Box<dyn Fn(u64) -> f64 + Sync>) = match mode {
        SmallDivisorMode::Alpha { alpha } => {
            let lim = PI * (nf / (2.0 * alpha * nf.ln())).sqrt();
            let e = nf.powf(-alpha + eps);
            (strict_below(lim), Box::new(move |_| e))
        }
        SmallDivisorMode::Rho { rho_hat } => {
            let lim = PI / 2f64.sqrt() * nf.powf((1.0 - rho_hat) / 2.0);
            let e = (-(1.0 - eps) * nf.powf(rho_hat)).exp();
            (strict_below(lim), Box::new(move |_| e))
        }
        SmallDivisorMode::Binomial { rho } => (
            n,
            Box::new(move |d| (-8.0 * nf * rho * (1.0 - rho) / (d as f64).powi(2)).exp()),
        ),
    };
    let d_max = d_max.min(n);
    let errs: Vec<(u64, f64)> = (2..=n).into_par_iter().map(|d| (d, err(d))).collect();
    let mut sup_err = 0.0;
    let mut argmax_d = 0;
    let mut worst_ratio: f64 = 0.0;
    for &(d, e) in errs.iter().filter(|&&(d, _)| d <= d_max) {
        if e > sup_err || argmax_d == 0 {
            sup_err = e;
            argmax_d = d;
        }
        worst_ratio = worst_ratio.max(e / env(d));
    }
    let sqrt_n = nf.sqrt();
    let sum_below_sqrt_n = kahan_sum(errs.iter().filter(|&&(d, _)| (d as f64) < sqrt_n).map(|&(_, e)| e));
    let sup_all = errs.iter().map(|&(_, e)| e).fold(0.0, f64::max);
    Ok(SmallDivisorReport {
        n,
        mode,
        eps,
        d_max,
        sup_err,
        argmax_d,
        envelope: if argmax_d > 0 { env(argmax_d) } else { f64::NAN },
        worst_ratio,
        sum_below_sqrt_n,
        sqrt_n_sup_all: sqrt_n * sup_all,
    })
}

/// Exact, spectral and asymptotic values of one divisibility probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivisibilityReport {
    pub exact: f64,
    pub spectral: f64,
    pub theta_over_d: f64,
}

impl DivisibilityReport {
    pub fn abs_err_spectral(&self) -> f64 {
        (self.exact - self.spectral).abs()
    }

    pub fn abs_err_theta(&self) -> f64 {
        (self.exact - self.theta_over_d).abs()
    }
}

/// (d', u') with P(delta | R_M + u) = P(d' | B_M + u'); `None` when parity forbids divisibility.
fn rademacher_shift_reduction(m: u64, delta: u64, u: u64) -> Option<(u64, u64)> {
    // delta | 2 B_M - M + u.
    let t = (m as i128 - u as i128).rem_euclid(2 * delta as i128);
    if delta % 2 == 1 {
        let inv2 = delta.div_ceil(2) as i128;
        let b = t * inv2 % delta as i128;
        Some((delta, ((delta as i128 - b) % delta as i128) as u64))
    } else if t % 2 == 0 {
        let dp = (delta / 2) as i128;
        let b = (t / 2) % dp;
        Some((dp as u64, ((dp - b) % dp) as u64))
    } else {
        None
    }
}

/// Exact, spectral and Gaussian (Theta) values of P(d | W_n + u) for any model.
///
/// Rademacher queries go through the Bernoulli reduction on both routes; the
/// Theta value for B_n(rho) and the Cramer walk uses the drift and variance of the walk.
pub fn divisibility_report(model: &ModelSpec, d: u64, tail_tol: f64) -> Result<DivisibilityReport> {
    let exact = div_exact(model, d)?;
    let (n, u) = (model.n, model.u);
    let df = d as f64;
    let (spectral, theta_over_d) = match model.kind {
        ModelKind::Bernoulli { rho } if rho == 0.5 => (
            div_spectral_bernoulli(n, d, u),
            theta_eval(d, ThetaVariant::Shifted { u, n }, tail_tol)? / df,
        ),
        ModelKind::Bernoulli { rho } => {
            let th = ThetaParams {
                d,
                drift: n as f64 * rho + u as f64,
                variance: n as f64 * rho * (1.0 - rho),
                tail_tol,
                phase_num: None,
                scale: 1.0,
            };
            (div_spectral_binomial(n, rho, d, u), th.eval()? / df)
        }
        ModelKind::Rademacher => match rademacher_shift_reduction(n, d, u) {
            Some((dp, up)) => (
                div_spectral_bernoulli(n, dp, up),
                theta_eval(dp, ThetaVariant::Shifted { u: up, n }, tail_tol)? / dp as f64,
            ),
            None => (0.0, 0.0),
        },
        ModelKind::Cramer | ModelKind::CramerPrimed => {
            let start = model.start();
            let mut acc = KahanSum::new();
            for j in 1..d {
                let t = j as f64 / df;
                let phi = cramer_charfn(n, t, start)?.value;
                let shift = 2.0 * PI * ((j as u128 * u as u128) % d as u128) as f64 / df;
                acc.add((phi * Complex64::from_polar(1.0, shift)).re);
            }
            let mom = cramer_moments(n, start)?;
            let th = theta_eval(
                d,
                ThetaVariant::Cramer {
                    drift: mom.mean + u as f64,
                    variance: mom.variance,
                },
                tail_tol,
            )?;
            (1.0 / df + acc.value() / df, th / df)
        }
    };
    Ok(DivisibilityReport {
        exact,
        spectral,
        theta_over_d,
    })
}

/// Cramer divisibility: pmf value, character-sum value and the Gaussian main term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CramerDivAudit {
    pub n: u64,
    pub d: u64,
    pub alpha: f64,
    /// `theta_over_d` holds the displayed one-sided main term.
    pub report: DivisibilityReport,
    /// Main term with the conjugate terms -J <= j <= -1 included.
    pub main_symmetric: f64,
    /// Number of Gaussian correction terms J.
    pub terms: u64,
    /// (1/d) sum_{j=1}^{d-1} Re Phi_n(j/d) - (main - 1/d), evaluated without cancellation
    /// against 1/d. This is the exact value of P(d | S_n) - main.
    pub deviation: f64,
    pub raw_err: f64,
    /// raw_err n^{3/2} / (d^3 alpha^3 (log n)^4).
    pub scaled_err: f64,
    pub scaled_deviation: f64,
}

/// Compares P(d | S_n) with 1/d + (1/d) sum_{1 <= j <= J} Re e^{2 i pi m_n j/d - 2 pi^2 B_n (j/d)^2},
/// J = (d/pi) log n sqrt(alpha/(2n)).
pub fn audit_cramer_div(n: u64, d: u64, alpha: f64) -> Result<CramerDivAudit> {
    if d == 0 || n < 3 {
        return Err(domain("need d >= 1 and n >= 3"));
    }
    let model = ModelSpec::cramer(n);
    let exact = div_exact(&model, d)?;
    let mom = cramer_moments(n, 3)?;
    let nf = n as f64;
    let df = d as f64;
    let j_max = (df / PI * nf.ln() * (alpha / (2.0 * nf)).sqrt()).floor().max(0.0) as u64;
    let gauss = |j: u64| {
        let t = j as f64 / df;
        let x = (mom.mean * t).rem_euclid(1.0);
        (-2.0 * PI * PI * mom.variance * t * t).exp() * (2.0 * PI * x).cos()
    };
    let corr = kahan_sum((1..=j_max).map(gauss)) / df;
    let main = 1.0 / df + corr;
    let main_symmetric = 1.0 / df + 2.0 * corr;
    let chars: Vec<f64> = (1..d)
        .map(|j| cramer_charfn(n, j as f64 / df, 3).map(|r| r.value.re))
        .collect::<Result<_>>()?;
    let char_dev = kahan_sum(chars.iter().copied()) / df;
    let spectral = 1.0 / df + char_dev;
    let deviation = char_dev - corr;
    let raw_err = (exact - main).abs();
    let s = nf.powf(1.5) / (df.powi(3) * alpha.powi(3) * nf.ln().powi(4));
    Ok(CramerDivAudit {
        n,
        d,
        alpha,
        report: DivisibilityReport {
            exact,
            spectral,
            theta_over_d: main,
        },
        main_symmetric,
        terms: j_max,
        deviation,
        raw_err,
        scaled_err: raw_err * s,
        scaled_deviation: deviation.abs() * s,
    })
}

/// Parameters of the uniformity-mod-h envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModUniformityParams {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub eps: f64,
}

impl Default for ModUniformityParams {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            alpha_prime: 1.6,
            eps: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModUniformityReport {
    pub n: u64,
    pub h: u64,
    /// max over residues mu of |P(W_n = mu mod h) - 1/h|.
    pub exact_sup: f64,
    /// Standard deviation B of W_n.
    pub sd: f64,
    /// Fitted C = phi(B) sup_m |B P(W = m) - e^{-(m - M)^2/(2B^2)}/sqrt(2 pi)|.
    pub fitted_c: f64,
    pub hn_bound: f64,
    /// Whether B >= 6, the range of the H_n bound.
    pub hn_applicable: bool,
    /// nu_n = sum_j sum_k min(P(X_j = k), P(X_j = k + 1)).
    pub nu: f64,
    /// 2 e^{-eps^2 nu/2} + ((1 - eps) nu)^{-alpha'}, when nu > 0.
    pub saud1_envelope: Option<f64>,
    /// pi sqrt((1 - eps) nu / (2 alpha log((1 - eps) nu))).
    pub saud1_d_limit: Option<f64>,
    /// Whether the sin x / x side condition holds at this n.
    pub saud1_applicable: bool,
}

/// Residue uniformity of W_n mod h against the H_n and Bernoulli-part envelopes.
pub fn audit_mod_uniformity<F: Fn(f64) -> f64>(
    model: &ModelSpec,
    h: u64,
    phi: F,
    params: ModUniformityParams,
) -> Result<ModUniformityReport> {
    if h == 0 {
        return Err(domain("h must be positive"));
    }
    let pmf = pmf_exact(model)?;
    let exact_sup = (0..h)
        .map(|mu| (pmf.divisible_mass(h, (h - mu) % h) - 1.0 / h as f64).abs())
        .fold(0.0, f64::max);
    let mom = model_moments(model)?;
    let sd = mom.variance.sqrt();
    let step = if matches!(model.kind, ModelKind::Rademacher) { 2.0 } else { 1.0 };
    let llt_sup = pmf
        .iter()
        .filter(|&(_, p)| p > 0.0 || step == 1.0)
        .map(|(v, p)| {
            let g = (-(v as f64 - mom.mean).powi(2) / (2.0 * mom.variance)).exp() / (2.0 * PI).sqrt();
            (sd * p / step - g).abs()
        })
        .fold(0.0, f64::max);
    let ph = phi(sd);
    let fitted_c = llt_sup * ph;
    let c1 = 2.0 * std::f64::consts::E * PI.sqrt();
    let p23 = ph.powf(2.0 / 3.0);
    let hn_bound = 1.0 / ((2.0 * PI).sqrt() * sd)
        + (1.0 + 2.0 * fitted_c / h as f64) / p23
        + c1 * (-p23 / 16.0).exp();
    let nu = match model.kind {
        ModelKind::Bernoulli { rho } => model.n as f64 * rho.min(1.0 - rho),
        ModelKind::Rademacher => 0.0,
        ModelKind::Cramer | ModelKind::CramerPrimed => kahan_sum((model.start()..=model.n).map(|j| {
            let q = cramer_q(j);
            q.min(1.0 - q)
        })),
    };
    let (saud1_envelope, saud1_d_limit, saud1_applicable) = if nu > 0.0 {
        let ModUniformityParams {
            alpha,
            alpha_prime,
            eps,
        } = params;
        let v = (1.0 - eps) * nu;
        let env = 2.0 * (-eps * eps * nu / 2.0).exp() + v.powf(-alpha_prime);
        let lim = PI * (v / (2.0 * alpha * v.ln())).sqrt();
        let x = 0.5 * (2.0 * alpha * v.ln() / v).sqrt();
        let ok = alpha > alpha_prime && v > 1.0 && x.sin() / x >= (alpha_prime / alpha).sqrt();
        (Some(env), Some(lim), ok)
    } else {
        (None, None, false)
    };
    Ok(ModUniformityReport {
        n: model.n,
        h,
        exact_sup,
        sd,
        fitted_c,
        hn_bound,
        hn_applicable: sd >= 6.0,
        nu,
        saud1_envelope,
        saud1_d_limit,
        saud1_applicable,
    })
}
