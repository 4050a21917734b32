use crate::args::{SeedArgs, SimTarget};
use crate::compute::{model_json, model_spec};
use crate::error::CliError;
use rayon::prelude::*;
use serde_json::{json, Value};
use walkarith_core::primestats::{cramer_pnt_sim, nk_sequence_sim};
use walkarith_core::walkdist::sample_path;

fn seed_list(s: &SeedArgs) -> Result<Vec<u64>, CliError> {
    if s.seeds == 0 {
        return Err(CliError::Usage("--seeds must be positive".into()));
    }
    (0..s.seeds)
        .map(|i| s.seed.checked_add(i).ok_or_else(|| CliError::Usage("seed overflow".into())))
        .collect()
}

/// One record per seed, in seed order.
pub fn run(target: &SimTarget) -> Result<Vec<Value>, CliError> {
    match target {
        SimTarget::CramerPnt { x, seeds } => {
            let list = seed_list(seeds)?;
            cramer_pnt_sim(*x, &list, seeds.stream)?
                .into_iter()
                .map(|s| Ok(serde_json::to_value(s)?))
                .collect()
        }
        SimTarget::Path { model, seeds } => {
            let spec = model_spec(model)?;
            seed_list(seeds)?
                .into_par_iter()
                .map(|seed| {
                    let p = sample_path(&spec, seed, seeds.stream)?;
                    let increments: Vec<i64> = p.partial_sums.windows(2).map(|w| w[1] - w[0]).collect();
                    let mut v = model_json(&spec);
                    v["seed"] = json!(seed);
                    v["stream"] = json!(seeds.stream);
                    v["increments"] = json!(increments);
                    v["partial_sums"] = json!(p.partial_sums);
                    v["jump_instants"] = json!(p.jump_instants);
                    Ok(v)
                })
                .collect()
        }
        SimTarget::NkSequence { n_max, seeds } => seed_list(seeds)?
            .into_par_iter()
            .map(|seed| Ok(serde_json::to_value(nk_sequence_sim(*n_max, seed, seeds.stream)?)?))
            .collect(),
    }
}
