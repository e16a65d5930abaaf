//! Chains of reductions run forward, solved, and pulled back hop by hop.

use std::fmt::Write as _;
use std::time::Instant;

use longchoice_core::problems::{verify, Certificate, Instance, Kind};
use longchoice_core::reductions::{lookup, Outcome, Reduction};
use longchoice_core::solvers::{SolveBudget, SolveError, Solver};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Only the final source certificate is checked.
    FinalOnly,
    /// Every certificate along the way is checked.
    EveryHop,
}

impl VerifyMode {
    pub fn parse(s: &str) -> Option<VerifyMode> {
        match s {
            "final-only" | "final_only" => Some(VerifyMode::FinalOnly),
            "every-hop" | "every_hop" => Some(VerifyMode::EveryHop),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("unknown reduction {0}")]
    UnknownReduction(String),
    #[error("hop {hop} ({name}) expects {expected} instances but receives {got}")]
    Chain {
        hop: usize,
        name: String,
        expected: Kind,
        got: Kind,
    },
    #[error("solver {solver} cannot handle {kind} instances")]
    Solver { solver: &'static str, kind: Kind },
}

pub struct PipelineSpec {
    pub reductions: Vec<Box<dyn Reduction>>,
    /// `None` picks the default solver for the final kind.
    pub solver: Option<Solver>,
    pub mode: VerifyMode,
    pub budget: SolveBudget,
}

impl PipelineSpec {
    pub fn new(names: &[&str]) -> Result<Self, PipelineError> {
        let reductions = names
            .iter()
            .map(|n| lookup(n).ok_or_else(|| PipelineError::UnknownReduction(n.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(PipelineSpec {
            reductions,
            solver: None,
            mode: VerifyMode::EveryHop,
            budget: SolveBudget::default(),
        })
    }

    /// Comma-separated reduction names; empty means solve directly.
    pub fn parse(list: &str) -> Result<Self, PipelineError> {
        let names: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        Self::new(&names)
    }

    pub fn solver(mut self, solver: Solver) -> Self {
        self.solver = Some(solver);
        self
    }

    pub fn mode(mut self, mode: VerifyMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn budget(mut self, budget: SolveBudget) -> Self {
        self.budget = budget;
        self
    }

    /// Checks that the kinds chain from `start` and the solver fits the end.
    pub fn check(&self, start: Kind) -> Result<Solver, PipelineError> {
        let mut kind = start;
        for (hop, r) in self.reductions.iter().enumerate() {
            if r.source() != kind {
                return Err(PipelineError::Chain {
                    hop: hop + 1,
                    name: r.name().into(),
                    expected: r.source(),
                    got: kind,
                });
            }
            kind = r.target();
        }
        let solver = self.solver.unwrap_or_else(|| Solver::default_for(kind));
        let fits = match solver {
            Solver::BruteForce => true,
            Solver::Majority => kind == Kind::LongChoice,
            Solver::Minority => kind == Kind::ShortChoice,
            Solver::RamseySequence => matches!(kind, Kind::Ramsey2 | Kind::RamseyR),
        };
        if fits {
            Ok(solver)
        } else {
            Err(PipelineError::Solver {
                solver: solver.name(),
                kind,
            })
        }
    }

    pub fn run(&self, source: &Instance) -> Report {
        let mut report = Report::default();
        let solver = match self.check(source.kind()) {
            Ok(s) => s,
            Err(e) => {
                report.failure = Some(Failure {
                    stage: "chain".into(),
                    message: e.to_string(),
                });
                return report;
            }
        };
        report.solver = Some(solver.name());
        // forward
        let mut stack: Vec<(&dyn Reduction, Instance, Value)> = Vec::new();
        let mut current = source.clone();
        let mut cert = None;
        for r in &self.reductions {
            let start = Instant::now();
            let outcome = r.forward(&current);
            let mut hop = Hop::new(r.name(), r.source(), r.target());
            hop.forward_us = start.elapsed().as_micros() as u64;
            match outcome {
                Err(e) => {
                    report.hops.push(hop);
                    report.fail(format!("forward {}", r.name()), e.to_string());
                    return report;
                }
                Ok(Outcome::Immediate(c)) => {
                    hop.immediate = true;
                    report.hops.push(hop);
                    cert = Some(c);
                    break;
                }
                Ok(Outcome::Reduced { target, aux }) => {
                    report.hops.push(hop);
                    stack.push((r.as_ref(), current, aux));
                    current = target;
                }
            }
        }
        // solve
        let mut cert = match cert {
            Some(c) => c,
            None => {
                let start = Instant::now();
                let solved = solver.solve(&current, self.budget);
                report.solve_us = Some(start.elapsed().as_micros() as u64);
                match solved {
                    Ok(c) => {
                        report.solved = Some(c.name());
                        c
                    }
                    Err(e) => {
                        report.budget_exceeded = matches!(e, SolveError::BudgetExceeded { .. });
                        report.fail("solve".into(), e.to_string());
                        return report;
                    }
                }
            }
        };
        // pull back
        let mut hop_index = stack.len();
        if self.mode == VerifyMode::EveryHop {
            let r = verify(&current, &cert);
            if !r.accepted {
                report.fail(format!("verify {}", current.kind()), r.to_string());
                return report;
            }
        }
        while let Some((r, src, aux)) = stack.pop() {
            hop_index -= 1;
            let start = Instant::now();
            let pulled = r.pullback(&src, &aux, &cert);
            let hop = &mut report.hops[hop_index];
            hop.pullback_us = Some(start.elapsed().as_micros() as u64);
            match pulled {
                Err(e) => {
                    report.fail(format!("pullback {}", r.name()), e.to_string());
                    return report;
                }
                Ok(p) => {
                    hop.target_cert = Some(cert.name());
                    hop.source_cert = Some(p.certificate.name());
                    hop.notes = p.notes;
                    cert = p.certificate;
                }
            }
            if self.mode == VerifyMode::EveryHop || stack.is_empty() {
                let v = verify(&src, &cert);
                if !v.accepted {
                    report.fail(format!("verify {}", r.name()), v.to_string());
                    return report;
                }
            }
        }
        if self.reductions.is_empty() || report.hops.first().is_some_and(|h| h.immediate) {
            let v = verify(source, &cert);
            if !v.accepted {
                report.fail("verify source".into(), v.to_string());
                return report;
            }
        }
        report.certificate = Some(cert);
        report
    }
}

#[derive(Debug, Clone)]
pub struct Hop {
    pub name: &'static str,
    pub source: Kind,
    pub target: Kind,
    pub immediate: bool,
    pub target_cert: Option<&'static str>,
    pub source_cert: Option<&'static str>,
    pub notes: Vec<String>,
    pub forward_us: u64,
    pub pullback_us: Option<u64>,
}

impl Hop {
    fn new(name: &'static str, source: Kind, target: Kind) -> Self {
        Hop {
            name,
            source,
            target,
            immediate: false,
            target_cert: None,
            source_cert: None,
            notes: Vec::new(),
            forward_us: 0,
            pullback_us: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub hops: Vec<Hop>,
    pub solver: Option<&'static str>,
    pub solved: Option<&'static str>,
    pub solve_us: Option<u64>,
    /// The verified source certificate.
    pub certificate: Option<Certificate>,
    pub failure: Option<Failure>,
    pub budget_exceeded: bool,
}

impl Report {
    fn fail(&mut self, stage: String, message: String) {
        self.failure = Some(Failure { stage, message });
    }

    pub fn ok(&self) -> bool {
        self.certificate.is_some()
    }

    /// Line-oriented summary. Timings are left out so that equal runs give
    /// equal text; they live in the JSON form.
    pub fn text(&self) -> String {
        let mut s = String::new();
        for (i, h) in self.hops.iter().enumerate() {
            let _ = write!(s, "hop {} {} ({} -> {})", i + 1, h.name, h.source, h.target);
            if h.immediate {
                s.push_str(" immediate");
            }
            if let (Some(t), Some(c)) = (h.target_cert, h.source_cert) {
                let _ = write!(s, " pullback {t} -> {c}");
            }
            s.push('\n');
            for note in &h.notes {
                let _ = writeln!(s, "  note: {note}");
            }
        }
        if let (Some(solver), Some(c)) = (self.solver, self.solved) {
            let _ = writeln!(s, "solve {solver} -> {c}");
        }
        match (&self.certificate, &self.failure) {
            (Some(c), _) => {
                let _ = writeln!(s, "result ACCEPT {} {:?}", c.name(), c.data());
            }
            (None, Some(f)) => {
                let _ = writeln!(s, "result FAIL at {}: {}", f.stage, f.message);
            }
            (None, None) => s.push_str("result FAIL\n"),
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let hops: Vec<Value> = self
            .hops
            .iter()
            .map(|h| {
                json!({
                    "reduction": h.name,
                    "source": h.source.name(),
                    "target": h.target.name(),
                    "immediate": h.immediate,
                    "target_certificate": h.target_cert,
                    "source_certificate": h.source_cert,
                    "notes": h.notes,
                    "forward_us": h.forward_us,
                    "pullback_us": h.pullback_us,
                })
            })
            .collect();
        json!({
            "ok": self.ok(),
            "hops": hops,
            "solver": self.solver,
            "solved_certificate": self.solved,
            "solve_us": self.solve_us,
            "certificate": self.certificate.as_ref().map(longchoice_core::io::certificate_to_json),
            "failure": self.failure.as_ref().map(|f| json!({"stage": f.stage, "message": f.message})),
        })
    }
}
