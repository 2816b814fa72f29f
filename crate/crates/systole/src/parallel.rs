use rayon::prelude::*;
use systole_core::quadform::GramMatrix;
use systole_core::search::{sweep_best, CsEstimate, SearchConfig, SearchPlan};
use systole_core::Result;

/// Runs the shards of [`SearchPlan`] on a rayon pool. Shard results are
/// collected in plan order, so the estimate equals the serial
/// `cs_search` for every thread count.
pub fn search_parallel(q: &GramMatrix, cfg: &SearchConfig, threads: Option<usize>) -> Result<CsEstimate> {
    let plan = SearchPlan::new(q, cfg)?;
    let run = || -> Result<CsEstimate> {
        let sweep = plan.sweep_shards().into_par_iter().map(|r| plan.run_sweep_shard(r)).collect::<Result<Vec<_>>>()?;
        let start = sweep_best(&sweep).map(|c| c.line.clone());
        let restarts = (0..cfg.restarts)
            .into_par_iter()
            .map(|i| plan.run_restart(i, if i == 0 { start.as_ref() } else { None }))
            .collect::<Result<Vec<_>>>()?;
        plan.finish(sweep, restarts)
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| systole_core::Error::Invariant(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Thread cap from `SYSTOLE_THREADS`; unset or unparsable means all cores.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("SYSTOLE_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}
