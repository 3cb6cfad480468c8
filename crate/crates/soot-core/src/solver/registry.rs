//! Name-indexed registry of solver strategies, so benchmark configs and CLI
//! flags can pick an algorithm at runtime.

use crate::solver::{
    baseline_solve, solve_problem, BaselineConfig, Problem, SolveResult, SolverConfig,
    SolverError,
};
use std::collections::BTreeMap;

/// A blind-deconvolution method the benchmark can run interchangeably.
pub trait BlindSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, prob: &Problem) -> Result<SolveResult, SolverError>;
}

/// The variable-metric forward-backward solver at its configured loop counts.
pub struct SootSolver {
    pub cfg: SolverConfig,
}

impl BlindSolver for SootSolver {
    fn name(&self) -> &'static str {
        "soot"
    }

    fn solve(&self, prob: &Problem) -> Result<SolveResult, SolverError> {
        solve_problem(prob, &self.cfg)
    }
}

/// The same iteration collapsed to one step per block with the scalar
/// majorant — proximal alternating linearized minimization.
pub struct PalmSolver {
    pub cfg: SolverConfig,
}

impl BlindSolver for PalmSolver {
    fn name(&self) -> &'static str {
        "palm"
    }

    fn solve(&self, prob: &Problem) -> Result<SolveResult, SolverError> {
        let cfg = SolverConfig {
            inner_x: 1,
            inner_h: 1,
            scalar_metric: true,
            ..self.cfg
        };
        solve_problem(prob, &cfg)
    }
}

/// The reweighted-ℓ1 + ISTA baseline.
pub struct ReweightedL1 {
    pub cfg: BaselineConfig,
}

impl BlindSolver for ReweightedL1 {
    fn name(&self) -> &'static str {
        "l1l2"
    }

    fn solve(&self, prob: &Problem) -> Result<SolveResult, SolverError> {
        baseline_solve(
            &prob.y,
            &prob.init_x,
            &prob.init_h,
            &self.cfg,
            &prob.box_x,
            &prob.set_h,
            &prob.params,
        )
    }
}

/// Configuration bundle a builder draws from when instantiating a solver.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolverSettings {
    pub soot: SolverConfig,
    pub baseline: BaselineConfig,
}

type Builder = Box<dyn Fn(&SolverSettings) -> Box<dyn BlindSolver> + Send + Sync>;

/// Maps method names to solver builders. `with_builtins` registers "soot",
/// "palm", and "l1l2"; callers may add their own variants under new names.
pub struct SolverRegistry {
    builders: BTreeMap<String, Builder>,
}

impl SolverRegistry {
    pub fn new() -> Self {
        SolverRegistry { builders: BTreeMap::new() }
    }

    pub fn with_builtins() -> Self {
        let mut r = SolverRegistry::new();
        r.register("soot", |s| Box::new(SootSolver { cfg: s.soot }));
        r.register("palm", |s| Box::new(PalmSolver { cfg: s.soot }));
        r.register("l1l2", |s| Box::new(ReweightedL1 { cfg: s.baseline }));
        r
    }

    pub fn register<F>(&mut self, name: &str, builder: F)
    where
        F: Fn(&SolverSettings) -> Box<dyn BlindSolver> + Send + Sync + 'static,
    {
        self.builders.insert(name.to_string(), Box::new(builder));
    }

    pub fn create(
        &self,
        name: &str,
        settings: &SolverSettings,
    ) -> Result<Box<dyn BlindSolver>, SolverError> {
        match self.builders.get(name) {
            Some(b) => Ok(b(settings)),
            None => Err(SolverError::UnknownMethod(name.to_string(), self.names().join(", "))),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.builders.keys().cloned().collect()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        SolverRegistry::with_builtins()
    }
}
