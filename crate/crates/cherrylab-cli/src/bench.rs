//! Benchmark suites with fixed, deterministic case lists. Results stream
//! into CSV rows (`case,n,r,k,success,resamples,millis`); a wall-clock
//! budget cuts the run short with an explicit truncation flag.
//!
//! Column reuse: for `clique-scaling` rows the `resamples` column carries
//! the number of sampling attempts; for `budget-eval` rows `n` carries the
//! evaluated constant and `success` the feasibility verdict.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use cherrylab::coloring::{random_bounded_coloring, BoundMode, CopyMode};
use cherrylab::embed::{embed, find_clique_p, EmbedConfig, EmbedOutcome};
use cherrylab::graph::{count_cherries, random_bounded_degree_tree};
use cherrylab::lll::{lll_budget, LllBudget};
use cherrylab::util::derive_seed;
use num::{BigInt, BigRational};
use serde_json::{json, Value};

use crate::CliError;

/// One CSV row.
#[derive(Debug, Clone)]
pub struct CsvRow {
    pub case_name: String,
    pub n: u64,
    pub r: u64,
    pub k: u64,
    pub success: bool,
    pub resamples: u64,
    pub millis: u64,
}

/// Everything a suite run produced.
#[derive(Debug)]
pub struct BenchResult {
    pub rows: Vec<CsvRow>,
    pub truncated: bool,
    /// Suite-specific key numbers for the run report.
    pub summary: Value,
}

pub fn to_csv(result: &BenchResult) -> String {
    let mut out = String::from("case,n,r,k,success,resamples,millis\n");
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.case_name, row.n, row.r, row.k, row.success, row.resamples, row.millis
        );
    }
    if result.truncated {
        out.push_str("# truncated: wall-clock budget exhausted before the case list finished\n");
    }
    out
}

struct Clock {
    start: Instant,
    budget: Option<Duration>,
}

impl Clock {
    fn new(budget_ms: Option<u64>) -> Self {
        Self { start: Instant::now(), budget: budget_ms.map(Duration::from_millis) }
    }

    fn exhausted(&self) -> bool {
        self.budget.is_some_and(|b| self.start.elapsed() >= b)
    }
}

/// Embeds random degree-capped spanning trees into random locally 2-bounded
/// hosts at n = 30, 60, 120; three fixed seeds per size.
pub fn embed_scaling(master_seed: u64, budget_ms: Option<u64>) -> Result<BenchResult, CliError> {
    let clock = Clock::new(budget_ms);
    let mut rows = Vec::new();
    let mut truncated = false;
    let mut phase = 0u64;
    let mut successes = 0u64;

    'outer: for &n in &[30usize, 60, 120] {
        for seed_idx in 0..3u64 {
            if clock.exhausted() {
                truncated = true;
                break 'outer;
            }
            let tree_seed = derive_seed(master_seed, phase);
            let host_seed = derive_seed(master_seed, phase + 1);
            let run_seed = derive_seed(master_seed, phase + 2);
            phase += 3;

            let case_start = Instant::now();
            let g = random_bounded_degree_tree(n, 3, tree_seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let c = random_bounded_coloring(n, 2, BoundMode::Local, host_seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let cfg = EmbedConfig::new(CopyMode::Proper, run_seed);
            let out =
                embed(&g, &c, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            let (success, resamples) = match &out {
                EmbedOutcome::Found(run) => (true, run.total_resamples),
                EmbedOutcome::Exhausted(fail) => (false, fail.total_resamples),
            };
            successes += success as u64;
            rows.push(CsvRow {
                case_name: format!("embed-n{n}-s{seed_idx}"),
                n: n as u64,
                r: count_cherries(&g),
                k: 2,
                success,
                resamples,
                millis: case_start.elapsed().as_millis() as u64,
            });
        }
    }

    let total = rows.len() as u64;
    Ok(BenchResult {
        rows,
        truncated,
        summary: json!({ "cases": total, "successes": successes }),
    })
}

/// Runs the clique extraction 10 times against one fixed large host
/// (n = 8960, locally 2-bounded) at r = 16, k = 2.
pub fn clique_scaling(master_seed: u64, budget_ms: Option<u64>) -> Result<BenchResult, CliError> {
    let clock = Clock::new(budget_ms);
    let host_seed = derive_seed(master_seed, 0);
    let c = random_bounded_coloring(8960, 2, BoundMode::Local, host_seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut rows = Vec::new();
    let mut truncated = false;
    let mut attempts_sum = 0u64;
    let mut successes = 0u64;
    for seed_idx in 0..10u64 {
        if clock.exhausted() {
            truncated = true;
            break;
        }
        let case_start = Instant::now();
        let seed = derive_seed(master_seed, 1 + seed_idx);
        let (success, attempts) = match find_clique_p(&c, 16, 2, CopyMode::Proper, seed, 20) {
            Ok(res) => (true, res.attempts as u64),
            Err(cherrylab::embed::EmbedError::CliqueRetriesExhausted { attempts, .. }) => {
                (false, attempts as u64)
            }
            Err(e) => return Err(CliError::Usage(e.to_string())),
        };
        successes += success as u64;
        attempts_sum += attempts;
        rows.push(CsvRow {
            case_name: format!("clique-s{seed_idx}"),
            n: 8960,
            r: 16,
            k: 2,
            success,
            resamples: attempts,
            millis: case_start.elapsed().as_millis() as u64,
        });
    }

    let cases = rows.len().max(1) as f64;
    Ok(BenchResult {
        summary: json!({
            "cases": rows.len(),
            "successes": successes,
            "mean_retries": attempts_sum as f64 / cases,
        }),
        rows,
        truncated,
    })
}

/// Evaluates the exact feasibility budgets at C = 100, 560, 1512 for both
/// copy modes. Totals decrease monotonically in C.
pub fn budget_eval(budget_ms: Option<u64>) -> Result<BenchResult, CliError> {
    let clock = Clock::new(budget_ms);
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let mut rows = Vec::new();
    let mut truncated = false;
    let mut totals = serde_json::Map::new();

    'outer: for mode in [CopyMode::Proper, CopyMode::Rainbow] {
        for &c in &[100u64, 560, 1512] {
            if clock.exhausted() {
                truncated = true;
                break 'outer;
            }
            let case_start = Instant::now();
            let budget: LllBudget =
                lll_budget(mode, c).map_err(|e| CliError::Usage(e.to_string()))?;
            let feasible = budget.total <= quarter;
            let name = format!("budget-{mode}-c{c}");
            totals.insert(name.clone(), Value::String(budget.total.to_string()));
            rows.push(CsvRow {
                case_name: name,
                n: c,
                r: 0,
                k: 0,
                success: feasible,
                resamples: 0,
                millis: case_start.elapsed().as_millis() as u64,
            });
        }
    }

    Ok(BenchResult {
        rows,
        truncated,
        summary: json!({ "totals": Value::Object(totals) }),
    })
}
