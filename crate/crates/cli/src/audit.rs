use crate::args::{AuditName, PhiName, ScaleName, SmallMode};
use crate::compute::model_from;
use crate::error::CliError;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::PI;
use walkarith_core::correlations::{product_div_exact, product_div_mainterm};
use walkarith_core::divprob::{
    audit_cramer_div, audit_mod_uniformity, audit_small_divisor, audit_theta_uniform, theta_eval,
    ModUniformityParams, SmallDivisorMode, ThetaScale,
};
use walkarith_core::primestats::{cramer_prime_window, extremal_divisor_constant, pminus_sweep};
use walkarith_core::report::{flag_argmax_by_n, fmt_f64};
use walkarith_core::walkdist::pmf_exact;
use walkarith_core::{ArithCache, AuditRow, Constants, Goldens, ModelSpec, ThetaVariant};

impl AuditName {
    pub fn name(&self) -> &'static str {
        match self {
            AuditName::ThetaUniform { .. } => "theta-uniform",
            AuditName::SmallDivisor { .. } => "small-divisor",
            AuditName::CramerDiv { .. } => "cramer-div",
            AuditName::ModUniformity { .. } => "mod-uniformity",
            AuditName::ProductDiv { .. } => "product-div",
            AuditName::Mertens { .. } => "mertens",
            AuditName::RademacherDiv { .. } => "rademacher-div",
            AuditName::ExtremalS { .. } => "extremal-s",
            AuditName::PrimeWindow { .. } => "prime-window",
        }
    }
}

fn row(n: u64, d: u64, u: u64, exact: f64, approx: f64, raw_err: f64, scaled_err: f64) -> AuditRow {
    let mut r = AuditRow::new(n, d, u, exact, approx, 1.0);
    r.raw_err = raw_err;
    r.scaled_err = scaled_err;
    r
}

/// Rows sorted by (n, d, u) with the per-n argmax flagged.
pub fn rows(audit: &AuditName) -> Result<Vec<AuditRow>, CliError> {
    let mut out: Vec<AuditRow> = match audit {
        AuditName::ThetaUniform { n, u, scale } => {
            let scale = match scale {
                ScaleName::Polylog => ThetaScale::PolyLog,
                ScaleName::Unit => ThetaScale::Unit,
            };
            return Ok(audit_theta_uniform(&n.0, *u, scale)?);
        }
        AuditName::SmallDivisor { n, mode, alpha, rho_hat, rho, eps } => {
            let mode = match mode {
                SmallMode::Alpha => SmallDivisorMode::Alpha { alpha: *alpha },
                SmallMode::Rho => SmallDivisorMode::Rho { rho_hat: *rho_hat },
                SmallMode::Binomial => SmallDivisorMode::Binomial { rho: *rho },
            };
            n.0.iter()
                .map(|&n| Ok(audit_small_divisor(n, mode, *eps)?.to_row()))
                .collect::<Result<_, CliError>>()?
        }
        AuditName::CramerDiv { n, d, alpha } => {
            let pts: Vec<(u64, u64)> = n.0.iter().flat_map(|&n| d.0.iter().map(move |&d| (n, d))).collect();
            pts.par_iter()
                .map(|&(n, d)| {
                    let a = audit_cramer_div(n, d, *alpha)?;
                    Ok(row(n, d, 0, a.report.exact, a.report.theta_over_d, a.raw_err, a.scaled_err)
                        .with("spectral", fmt_f64(a.report.spectral))
                        .with("main_symmetric", fmt_f64(a.main_symmetric))
                        .with("terms", a.terms)
                        .with("deviation", fmt_f64(a.deviation))
                        .with("scaled_deviation", fmt_f64(a.scaled_deviation)))
                })
                .collect::<Result<_, CliError>>()?
        }
        AuditName::ModUniformity { model, n, h, rho, phi } => {
            let phi_fn = |t: f64| match phi {
                PhiName::One => 1.0,
                PhiName::Log => t.ln().max(1.0),
                PhiName::Sqrt => t.sqrt().max(1.0),
            };
            let mut out = Vec::new();
            for &n in &n.0 {
                let spec = model_from(*model, n, *rho, 0)?;
                for &h in &h.0 {
                    let r = audit_mod_uniformity(&spec, h, phi_fn, ModUniformityParams::default())?;
                    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
                    out.push(
                        row(n, h, 0, r.exact_sup, r.hn_bound, r.exact_sup, r.exact_sup / r.hn_bound)
                            .with("sd", fmt_f64(r.sd))
                            .with("fitted_c", fmt_f64(r.fitted_c))
                            .with("hn_applicable", r.hn_applicable as u8)
                            .with("nu", fmt_f64(r.nu))
                            .with("saud1_envelope", opt(r.saud1_envelope))
                            .with("saud1_d_limit", opt(r.saud1_d_limit))
                            .with("saud1_applicable", r.saud1_applicable as u8),
                    );
                }
            }
            out
        }
        AuditName::ProductDiv { n, gap, dd, eps } => {
            let top = dd.0.iter().copied().max().unwrap_or(2).max(2);
            let cache = ArithCache::new(top)?;
            let pts: Vec<(u64, u64, u64)> = n
                .0
                .iter()
                .flat_map(|&n| dd.0.iter().flat_map(move |&d| gap.0.iter().map(move |&g| (n, d, g))))
                .collect();
            pts.par_iter()
                .map(|&(n, d, g)| {
                    let exact = product_div_exact(n, n + g, d)?;
                    let main = product_div_mainterm(n, n + g, d, *eps, &cache)?;
                    let raw = (exact - main.main).abs();
                    Ok(row(n, d, g, exact, main.main, raw, raw / main.eps_bound)
                        .with("m", n + g)
                        .with("eps_bound", fmt_f64(main.eps_bound)))
                })
                .collect::<Result<_, CliError>>()?
        }
        AuditName::Mertens { n, y } => {
            let mut out = Vec::new();
            for &n in &n.0 {
                let cache = ArithCache::new(n.max(2))?;
                for r in pminus_sweep(n, &y.0, &cache)? {
                    let ly = (r.y as f64).ln();
                    let approx = Constants::mertens_factor() / ly;
                    out.push(
                        row(n, r.y, 0, r.exact, approx, (r.exact - approx).abs(), r.mertens_gap)
                            .with("mobius_identity", fmt_f64(r.mobius_identity))
                            .with("zero_atom", fmt_f64(r.zero_atom))
                            .with("corrected_identity", fmt_f64(r.corrected_identity())),
                    );
                }
            }
            out
        }
        AuditName::RademacherDiv { m, delta, alpha } => {
            let mut out = Vec::new();
            for &mm in &m.0 {
                let pmf = pmf_exact(&ModelSpec::rademacher(mm))?;
                let mf = mm as f64;
                let cut = 2.0 * PI * (mf / (2.0 * alpha * mf.ln())).sqrt();
                let scale = mf.powf(1.5) / mf.ln().powf(2.5);
                let deltas: Vec<u64> = match delta {
                    Some(g) => g.0.clone(),
                    None => (3..=mm).collect(),
                };
                let chunk: Vec<AuditRow> = deltas
                    .par_iter()
                    .filter(|&&d| d >= 2 && d <= mm && d % 2 == mm % 2)
                    .map(|&d| {
                        let df = d as f64;
                        let exact = pmf.divisible_mass(d, 0);
                        let even = d % 2 == 0;
                        let (approx, regime) = if df >= cut {
                            let v = if even {
                                ThetaVariant::RademacherEven { m: mm }
                            } else {
                                ThetaVariant::RademacherOdd { m: mm }
                            };
                            (theta_eval(d, v, 1e-17)? / df, "theta")
                        } else {
                            let c1 = (2.0 * PI / df).cos().powi(mm as i32);
                            let c2 = (PI / df).cos().powi(mm as i32);
                            let a = if even { 2.0 + 4.0 * c1 } else { 1.0 + 2.0 * c1 - 2.0 * c2 };
                            (a / df, "harmonic")
                        };
                        let raw = (exact - approx).abs();
                        Ok(row(mm, d, 0, exact, approx, raw, raw * scale).with("regime", regime))
                    })
                    .collect::<Result<_, CliError>>()?;
                out.extend(chunk);
            }
            out
        }
        AuditName::ExtremalS { nn } => {
            let s = Constants::rademacher_s();
            nn.0.par_iter()
                .map(|&n| {
                    let v = extremal_divisor_constant(n)?;
                    let nf = n as f64;
                    let raw = (v - s).abs();
                    Ok(row(n, n, 0, v, s, raw, raw * nf * nf / nf.ln().powf(2.5)))
                })
                .collect::<Result<_, CliError>>()?
        }
        AuditName::PrimeWindow { n, b } => n
            .0
            .par_iter()
            .map(|&n| {
                let r = cramer_prime_window(n, *b)?;
                Ok(row(n, 0, 0, r.exact, r.window_formula, r.gap, r.scaled_gap))
            })
            .collect::<Result<_, CliError>>()?,
    };
    out.sort_by_key(|r| (r.n, r.d, r.u));
    flag_argmax_by_n(&mut out);
    Ok(out)
}

/// Summary of an audit and its golden comparison. Returns the JSON and whether it regressed.
pub fn summary(name: &str, rows: &[AuditRow], pins: &Goldens, slack: f64) -> (Value, bool) {
    let max_abs = rows.iter().map(|r| r.raw_err).fold(0.0, f64::max);
    let arg = rows.iter().max_by(|a, b| a.scaled_err.total_cmp(&b.scaled_err));
    let max_scaled = arg.map(|r| r.scaled_err).unwrap_or(0.0);
    let key = format!("{name}.max_scaled");
    let pin = pins.get(&key);
    let (verdict, regressed) = match pin {
        Some(p) if max_scaled > p * (1.0 + slack) => ("regressed", true),
        Some(_) => ("pass", false),
        None => ("unpinned", false),
    };
    let v = json!({
        "audit": name,
        "rows": rows.len(),
        "max_abs_gap": max_abs,
        "max_scaled_err": max_scaled,
        "argmax": arg.map(|r| json!({"n": r.n, "d": r.d, "u": r.u})),
        "pin_key": key,
        "pin": pin,
        "slack": slack,
        "verdict": verdict,
    });
    (v, regressed)
}
