use crate::args::{ComputeTarget, ModelArgs, ModelName, PascalFn, SetName, Sign, ThetaKind};
use crate::error::CliError;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use walkarith_core::correlations::{coprime_prob, product_div_bound, product_div_exact, product_div_mainterm};
use walkarith_core::densities::{
    density_suite, pascal_expectations, pascal_invert, pascal_invert_paper_form, IntegerSet,
};
use walkarith_core::divprob::{divisibility_report, theta_eval};
use walkarith_core::primestats::{
    divisor_expectations, kfree_prob, pminus_tail, prime_prob_exact, quasiprime_lower, quasiprime_prob,
    PrimeConvention,
};
use walkarith_core::walkdist::cramer_charfn;
use walkarith_core::{ArithCache, Goldens, ModelKind, ModelSpec, ThetaVariant};

pub fn model_spec(m: &ModelArgs) -> Result<ModelSpec, CliError> {
    model_from(m.model, m.n, m.rho, m.u)
}

pub fn model_from(name: ModelName, n: u64, rho: f64, u: u64) -> Result<ModelSpec, CliError> {
    let spec = match name {
        ModelName::Bernoulli => ModelSpec::bernoulli(rho, n),
        ModelName::Fair => ModelSpec::fair(n),
        ModelName::Rademacher => ModelSpec::rademacher(n),
        ModelName::Cramer => ModelSpec::cramer(n),
        ModelName::CramerPrimed => ModelSpec::cramer_primed(n),
    }
    .with_shift(u);
    spec.validate()?;
    Ok(spec)
}

/// Flat description of a model: name, horizon, shift and rho for Bernoulli walks.
pub fn model_json(spec: &ModelSpec) -> Value {
    let (name, rho) = match spec.kind {
        ModelKind::Bernoulli { rho } => ("bernoulli", Some(rho)),
        ModelKind::Rademacher => ("rademacher", None),
        ModelKind::Cramer => ("cramer", None),
        ModelKind::CramerPrimed => ("cramer-primed", None),
    };
    json!({"model": name, "n": spec.n, "u": spec.u, "rho": rho})
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn ratio(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// One JSON object per evaluation.
pub fn run(target: &ComputeTarget, pins: &Goldens) -> Result<Value, CliError> {
    Ok(match target {
        ComputeTarget::Div { model, d, tail_tol } => {
            let spec = model_spec(model)?;
            let r = divisibility_report(&spec, *d, *tail_tol)?;
            merge(merge(model_json(&spec), json!({"d": d})), serde_json::to_value(r)?)
        }
        ComputeTarget::Theta { d, n, u, variant, tail_tol } => {
            let (n, u) = (*n, *u);
            let v = match variant {
                ThetaKind::Plain => ThetaVariant::Plain { n },
                ThetaKind::Shifted => ThetaVariant::Shifted { u, n },
                ThetaKind::RademacherEven => ThetaVariant::RademacherEven { m: n },
                ThetaKind::RademacherOdd => ThetaVariant::RademacherOdd { m: n },
            };
            json!({"d": d, "n": n, "u": u, "variant": v, "theta": theta_eval(*d, v, *tail_tol)?})
        }
        ComputeTarget::Prime { model, sign } => {
            let spec = model_spec(model)?;
            let conv = match sign {
                Sign::Positive => PrimeConvention::default(),
                Sign::Absolute => PrimeConvention::absolute(),
            };
            merge(
                model_json(&spec),
                json!({"convention": conv.rademacher_sign, "prob": prime_prob_exact(&spec, conv)?}),
            )
        }
        ComputeTarget::Pminus { n, y } => {
            let r = pminus_tail(*n, *y)?;
            merge(serde_json::to_value(r)?, json!({"corrected_identity": r.corrected_identity()}))
        }
        ComputeTarget::Kfree { n, rho, k } => merge(
            json!({"n": n, "rho": rho, "k": k}),
            serde_json::to_value(kfree_prob(*n, *rho, *k)?)?,
        ),
        ComputeTarget::Coprime { n, m } => {
            let c = ArithCache::new((*n).max(2))?;
            merge(json!({"n": n, "m": m}), serde_json::to_value(coprime_prob(*n, *m, &c)?)?)
        }
        ComputeTarget::ProductDiv { n, m, dd, eps, c_eps } => {
            let c = ArithCache::new((*dd).max(2))?;
            let c_eps = c_eps
                .or_else(|| pins.get("product-div.max_scaled"))
                .ok_or_else(|| CliError::Usage("no --c-eps and no product-div pin".into()))?;
            let exact = product_div_exact(*n, *m, *dd)?;
            let main = product_div_mainterm(*n, *m, *dd, *eps, &c)?;
            let bound = product_div_bound(*n, *m, *dd, c_eps, *eps, &c)?;
            json!({
                "n": n, "m": m, "D": dd, "eps": eps, "c_eps": c_eps,
                "exact": exact, "main": main.main, "eps_bound": main.eps_bound,
                "bound_displayed": bound.displayed, "bound_corrected": bound.corrected,
            })
        }
        ComputeTarget::Expectations { n } => {
            merge(json!({"n": n}), serde_json::to_value(divisor_expectations(*n)?)?)
        }
        ComputeTarget::Quasiprime { n, z, eta } => json!({
            "n": n, "z": z, "eta": eta,
            "prob": quasiprime_prob(*n, *z)?,
            "lower": quasiprime_lower(*z, *eta),
        }),
        ComputeTarget::Charfn { n, t, start } => {
            merge(json!({"n": n, "t": t, "start": start}), serde_json::to_value(cramer_charfn(*n, *t, *start)?)?)
        }
        ComputeTarget::Density { set, n, rho, t, eps, k, y } => {
            let t = t.unwrap_or(*n as f64);
            let nf = *n as f64;
            let top = (nf + eps * nf.sqrt()).max(t + walkarith_core::densities::BOREL_SIGMAS * t.sqrt()).ceil() as u64 + 1;
            let s = match set {
                SetName::All => IntegerSet::all(top),
                SetName::Evens => IntegerSet::evens(top),
                SetName::Primes => IntegerSet::primes(top)?,
                SetName::Kfree => IntegerSet::kfree(*k, top)?,
                SetName::Smooth => IntegerSet::smooth(*y, top)?,
            };
            let r = density_suite(&s, *n, *rho, t, *eps)?;
            merge(json!({"set": s.name, "n": n, "rho": rho, "t": t, "eps": eps}), serde_json::to_value(r)?)
        }
        ComputeTarget::Pascal { f, i } => {
            let c = ArithCache::new(*i as u64 + 2)?;
            let vals: Vec<BigRational> = (0..=*i as i64)
                .map(|x| match f {
                    PascalFn::Id => ratio(x),
                    PascalFn::Squares => ratio(x * x),
                    PascalFn::Cubes => ratio(x * x * x),
                    PascalFn::Mobius if x == 0 => ratio(0),
                    PascalFn::Mobius => ratio(c.mobius(x as u64) as i64),
                    PascalFn::Divisors if x == 0 => ratio(0),
                    PascalFn::Divisors => ratio(c.divisor_count(x as u64) as i64),
                })
                .collect();
            let ef = pascal_expectations(&vals)?;
            let paper = if *i >= 2 {
                Value::String(pascal_invert_paper_form(&ef, *i)?.to_string())
            } else {
                Value::Null
            };
            json!({
                "f": format!("{f:?}").to_lowercase(), "i": i,
                "value": vals[*i].to_string(),
                "expectation": ef[*i].to_string(),
                "inverted": pascal_invert(&ef, *i)?.to_string(),
                "paper_form": paper,
            })
        }
    })
}
