//! Constructive solvers and exhaustive brute-force oracles.
//!
//! Every solver is deterministic: partition ties go to predicate value 0 (or
//! the lowest color) and "any element" means the numerically smallest one.

mod brute;
mod ramsey;
mod walk;

use thiserror::Error;

use crate::problems::{Certificate, Instance, Kind};

pub use brute::{all_certificates, for_each_certificate, solve_bruteforce};
pub use ramsey::{extract_clique, solve_ramsey, solve_ramsey_sequence, RamseySequence};
pub use walk::{
    majority_walk, solve_long_choice_majority, solve_short_choice_minority,
    trace_long_choice_majority, trace_short_choice_minority, ChoiceWalkState, MinorityTrace,
    WalkTrace,
};

/// Caps on how much work a solver may do before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBudget {
    /// Largest explicit universe or domain a solver may enumerate.
    pub max_elements: u64,
    /// Total Function evaluations.
    pub max_evals: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            max_elements: 1 << 16,
            max_evals: 1 << 24,
        }
    }
}

impl SolveBudget {
    pub fn unlimited() -> Self {
        SolveBudget {
            max_elements: u64::MAX,
            max_evals: u64::MAX,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("BUDGET_EXCEEDED: {what} needs more than {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("INTERNAL: {0}")]
    Internal(String),
    #[error("NO_CERTIFICATE: {0}")]
    NoCertificate(String),
    #[error("UNSUPPORTED: {0}")]
    Unsupported(String),
}

impl SolveError {
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            SolveError::Internal(_) => "INTERNAL",
            SolveError::NoCertificate(_) => "NO_CERTIFICATE",
            SolveError::Unsupported(_) => "UNSUPPORTED",
        }
    }
}

/// Running count of evaluations against a budget.
#[derive(Debug, Clone)]
pub struct Meter {
    budget: SolveBudget,
    evals: u64,
}

impl Meter {
    pub fn new(budget: SolveBudget) -> Self {
        Meter { budget, evals: 0 }
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn spend(&mut self, evals: u64) -> Result<(), SolveError> {
        self.evals = self.evals.saturating_add(evals);
        if self.evals > self.budget.max_evals {
            return Err(SolveError::BudgetExceeded {
                what: "function evaluations",
                limit: self.budget.max_evals,
            });
        }
        Ok(())
    }

    /// Refuses to enumerate more than `max_elements` things at once.
    pub fn enumerate(&self, size: u64) -> Result<(), SolveError> {
        if size > self.budget.max_elements {
            return Err(SolveError::BudgetExceeded {
                what: "element enumeration",
                limit: self.budget.max_elements,
            });
        }
        Ok(())
    }

    /// `2^bits` checked against the enumeration cap.
    pub fn universe(&self, bits: usize) -> Result<u64, SolveError> {
        if bits >= 63 {
            return Err(SolveError::BudgetExceeded {
                what: "element enumeration",
                limit: self.budget.max_elements,
            });
        }
        let size = 1u64 << bits;
        self.enumerate(size)?;
        Ok(size)
    }
}

/// Solvers selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Majority,
    Minority,
    RamseySequence,
    BruteForce,
}

impl Solver {
    pub const ALL: [Solver; 4] = [
        Solver::Majority,
        Solver::Minority,
        Solver::RamseySequence,
        Solver::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Majority => "majority",
            Solver::Minority => "minority",
            Solver::RamseySequence => "ramsey_sequence",
            Solver::BruteForce => "brute_force",
        }
    }

    pub fn from_name(name: &str) -> Option<Solver> {
        Solver::ALL.into_iter().find(|s| s.name() == name)
    }

    /// The constructive solver for `kind` if there is one, else brute force.
    pub fn default_for(kind: Kind) -> Solver {
        match kind {
            Kind::LongChoice => Solver::Majority,
            Kind::ShortChoice => Solver::Minority,
            Kind::Ramsey2 | Kind::RamseyR => Solver::RamseySequence,
            _ => Solver::BruteForce,
        }
    }

    pub fn solve(self, inst: &Instance, budget: SolveBudget) -> Result<Certificate, SolveError> {
        let wrong = || {
            SolveError::Unsupported(format!(
                "solver {} does not handle {} instances",
                self.name(),
                inst.kind()
            ))
        };
        match (self, inst) {
            (Solver::BruteForce, _) => solve_bruteforce(inst, budget),
            (Solver::Majority, Instance::LongChoice(lc)) => solve_long_choice_majority(lc, budget),
            (Solver::Minority, Instance::ShortChoice(sc)) => {
                solve_short_choice_minority(sc, budget)
            }
            (Solver::RamseySequence, Instance::Ramsey2(g)) => solve_ramsey(g, budget),
            (Solver::RamseySequence, Instance::RamseyR(g)) => solve_ramsey(g, budget),
            _ => Err(wrong()),
        }
    }
}
