//! Exhaustive list decoding for instances whose message space fits a budget.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{corrupt_seeded, partition, BloInstance, Codeword, MessageWalker};
use crate::error::{Error, Result};
use crate::listdecode::{list_decode, Candidate, DecodingPlan};
use crate::poly::BiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_messages: u128,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_messages: 1 << 25,
            workers: 0,
        }
    }
}

impl OracleBudget {
    pub fn with_max(max_messages: u128) -> Self {
        OracleBudget {
            max_messages,
            ..Default::default()
        }
    }
}

/// Every message whose codeword is within column distance `radius` of
/// `received`, in enumeration order (lexicographic in the coefficients).
pub fn oracle_list_decode(
    inst: &BloInstance,
    received: &Codeword,
    radius: usize,
    budget: OracleBudget,
) -> Result<Vec<Candidate>> {
    if budget.max_messages == 0 {
        return Err(Error::invalid(
            "oracle budget must allow at least one message",
        ));
    }
    let total = inst.message_count();
    if total > budget.max_messages {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap: budget.max_messages,
            hint: "raise --budget or use a smaller instance".into(),
        });
    }
    if (received.n(), received.s()) != (inst.n(), inst.s()) {
        return Err(Error::shape("received word does not match the instance"));
    }
    let walker = MessageWalker::new(inst)?;
    let s = inst.s();
    let target: Vec<u32> = received
        .columns()
        .iter()
        .flatten()
        .map(|x| x.value())
        .collect();
    let search = |(a, b): (u128, u128)| {
        let mut hits = Vec::new();
        walker.walk(a, b, |digits, word| {
            let mut dist = 0;
            for (got, want) in word.chunks(s).zip(target.chunks(s)) {
                if got != want {
                    dist += 1;
                    if dist > radius {
                        return;
                    }
                }
            }
            hits.push((digits.to_vec(), dist));
        });
        hits
    };
    let threads = if budget.workers == 0 {
        rayon::current_num_threads()
    } else {
        budget.workers
    };
    let ranges = partition(total, threads * 8);
    let chunks: Vec<Vec<(Vec<u32>, usize)>> = if budget.workers == 0 {
        ranges.into_par_iter().map(search).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(budget.workers)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(|| ranges.into_par_iter().map(search).collect())
    };
    let field = inst.field();
    chunks
        .into_iter()
        .flatten()
        .map(|(digits, distance)| {
            let coeffs = digits.into_iter().map(|d| field.elem(d as u64)).collect();
            Ok(Candidate {
                message: inst.message_from_coeffs(coeffs)?,
                distance,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialStatus {
    Pass,
    Fail,
    /// At least `D` errors were injected, so nothing is guaranteed.
    OutOfContract,
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub status: TrialStatus,
    pub decoder_list: usize,
    pub oracle_list: usize,
    pub detail: String,
}

impl fmt::Display for TrialOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            TrialStatus::Pass => "PASS",
            TrialStatus::Fail => "FAIL",
            TrialStatus::OutOfContract => "OUT-OF-CONTRACT",
        };
        write!(
            f,
            "trial {} seed {} {} decoder={} oracle={}",
            self.trial, self.seed, status, self.decoder_list, self.oracle_list
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct CrossCheckReport {
    pub outcomes: Vec<TrialOutcome>,
    pub max_list_size: usize,
}

impl CrossCheckReport {
    fn count(&self, status: TrialStatus) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }

    pub fn passed(&self) -> usize {
        self.count(TrialStatus::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(TrialStatus::Fail)
    }

    pub fn out_of_contract(&self) -> usize {
        self.count(TrialStatus::OutOfContract)
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn first_failing_seed(&self) -> Option<u64> {
        self.outcomes
            .iter()
            .find(|o| o.status == TrialStatus::Fail)
            .map(|o| o.seed)
    }
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        write!(
            f,
            "{} trials: {} passed, {} failed, {} out of contract, max list size {}",
            self.outcomes.len(),
            self.passed(),
            self.failed(),
            self.out_of_contract(),
            self.max_list_size
        )
    }
}

/// A uniformly random message of the instance.
pub fn random_message<R: Rng>(inst: &BloInstance, rng: &mut R) -> Result<BiPoly> {
    let field = inst.field();
    let coeffs = (0..inst.t() * inst.k())
        .map(|_| field.elem(rng.gen_range(0..field.size())))
        .collect();
    inst.message_from_coeffs(coeffs)
}

/// Runs the decoder and the oracle side by side. Trial `i` uses seed
/// `seed + i` for both the message and the error pattern; `errors` defaults
/// to `D - 1`.
pub fn oracle_cross_check(
    plan: &DecodingPlan,
    trials: usize,
    seed: u64,
    errors: Option<usize>,
    budget: OracleBudget,
) -> Result<CrossCheckReport> {
    let inst = plan.instance();
    let errors = errors.unwrap_or(plan.radius());
    let mut report = CrossCheckReport::default();
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let m = random_message(inst, &mut rng)?;
        let (received, _) = corrupt_seeded(&inst.encode(&m)?, errors, rng.gen())?;
        let outcome = match run_trial(plan, &received, budget) {
            Ok((decoded, oracle)) => {
                let missed = oracle
                    .iter()
                    .filter(|c| !decoded.iter().any(|d| d.message == c.message))
                    .count();
                let has_m = decoded.iter().any(|c| c.message == m);
                report.max_list_size = report.max_list_size.max(decoded.len());
                let (status, detail) = if errors >= plan.distance() {
                    (TrialStatus::OutOfContract, String::new())
                } else if missed > 0 {
                    (
                        TrialStatus::Fail,
                        format!("{missed} oracle codewords missed"),
                    )
                } else if !has_m {
                    (TrialStatus::Fail, "transmitted message missing".into())
                } else {
                    (TrialStatus::Pass, String::new())
                };
                TrialOutcome {
                    trial,
                    seed: trial_seed,
                    status,
                    decoder_list: decoded.len(),
                    oracle_list: oracle.len(),
                    detail,
                }
            }
            Err(e) => TrialOutcome {
                trial,
                seed: trial_seed,
                status: if errors >= plan.distance() {
                    TrialStatus::OutOfContract
                } else {
                    TrialStatus::Fail
                },
                decoder_list: 0,
                oracle_list: 0,
                detail: e.to_string(),
            },
        };
        report.outcomes.push(outcome);
    }
    Ok(report)
}

fn run_trial(
    plan: &DecodingPlan,
    received: &Codeword,
    budget: OracleBudget,
) -> Result<(Vec<Candidate>, Vec<Candidate>)> {
    let decoded = list_decode(plan, received)?;
    let oracle = oracle_list_decode(plan.instance(), received, plan.radius(), budget)?;
    Ok((decoded, oracle))
}
