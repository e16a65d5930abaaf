//! Certificate-preserving reductions between the problems.
//!
//! A reduction maps a source instance forward to a target instance (or
//! answers at once), and pulls accepted target certificates back to source
//! certificates. Pullbacks are pure functions of the source instance, the
//! auxiliary data returned by `forward` and the target certificate.

mod choice;
mod coloring;
mod interval;
mod konig;
mod ramsey;

use serde_json::Value;
use thiserror::Error;

use crate::problems::{Certificate, Instance, InstanceError, Kind};
use crate::solvers::SolveError;

pub use choice::{EmptyToShortChoice, RangeTracker, Unconstrain, WeakCollisionToUnary};
pub use coloring::{
    BadColoringToTuran, CollisionToBad2Coloring, CollisionToBadKSet, KSetLift, LiftBadColoring,
    LiftTuran,
};
pub use interval::{CollisionToLongChoice, Interval, IntervalState};
pub use konig::{CollisionToEkr, CollisionToKonig, EkrToCollision, KonigToCollision};
pub use ramsey::{
    RamseyHammingConfig, RamseyToLongChoice, SunflowerToRamsey, WeakCollisionToHamming,
    WeakSchurToRamsey,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReduceError {
    #[error("KIND_MISMATCH: expected a {expected} instance, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("PRECONDITION: {0}")]
    Precondition(String),
    #[error("DESK_SCALE_EXCEEDED: {0}")]
    DeskScale(String),
    #[error("INTERNAL: {0}")]
    Internal(String),
    #[error("BAD_AUX: {0}")]
    BadAux(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl ReduceError {
    pub fn code(&self) -> &'static str {
        match self {
            ReduceError::KindMismatch { .. } => "KIND_MISMATCH",
            ReduceError::Precondition(_) => "PRECONDITION",
            ReduceError::DeskScale(_) => "DESK_SCALE_EXCEEDED",
            ReduceError::Internal(_) => "INTERNAL",
            ReduceError::BadAux(_) => "BAD_AUX",
            ReduceError::Solve(e) => e.code(),
        }
    }
}

impl From<InstanceError> for ReduceError {
    fn from(e: InstanceError) -> Self {
        ReduceError::Precondition(e.to_string())
    }
}

/// Result of a forward transform.
#[derive(Debug, Clone)]
pub enum Outcome {
    /// The source was solved while building the target.
    Immediate(Certificate),
    /// `aux` is whatever the pullback needs beyond the source instance.
    Reduced { target: Instance, aux: Value },
}

/// A pulled-back certificate plus remarks on unusual paths taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub certificate: Certificate,
    pub notes: Vec<String>,
}

impl From<Certificate> for Pullback {
    fn from(certificate: Certificate) -> Self {
        Pullback {
            certificate,
            notes: Vec::new(),
        }
    }
}

pub trait Reduction: Send + Sync {
    /// Stable registry name, `source->target`.
    fn name(&self) -> &'static str;
    fn source(&self) -> Kind;
    fn target(&self) -> Kind;
    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError>;
    fn pullback(
        &self,
        src: &Instance,
        aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError>;
}

pub const NAMES: [&str; 19] = [
    "collision->long_choice",
    "weak_collision->unary_long_choice",
    "ramsey2->long_choice",
    "ramsey_r->long_choice",
    "sunflower->ramsey",
    "collision->konig",
    "konig->collision",
    "collision->ekr",
    "ekr->collision",
    "collision->bad2coloring",
    "bad_coloring->turan",
    "bad_coloring->lift",
    "turan->lift",
    "bad_kset->lift",
    "collision->bad_kset",
    "empty->short_choice",
    "weak_collision->ramsey_hamming",
    "weak_schur->ramsey",
    "constrained_long_choice->long_choice",
];

/// Looks a reduction up by its registry name.
pub fn lookup(name: &str) -> Option<Box<dyn Reduction>> {
    let r: Box<dyn Reduction> = match name {
        "collision->long_choice" => Box::new(CollisionToLongChoice),
        "weak_collision->unary_long_choice" => Box::new(WeakCollisionToUnary),
        "ramsey2->long_choice" => Box::new(RamseyToLongChoice {
            source: Kind::Ramsey2,
        }),
        "ramsey_r->long_choice" => Box::new(RamseyToLongChoice {
            source: Kind::RamseyR,
        }),
        "sunflower->ramsey" => Box::new(SunflowerToRamsey),
        "collision->konig" => Box::new(CollisionToKonig),
        "konig->collision" => Box::new(KonigToCollision),
        "collision->ekr" => Box::new(CollisionToEkr),
        "ekr->collision" => Box::new(EkrToCollision),
        "collision->bad2coloring" => Box::new(CollisionToBad2Coloring),
        "bad_coloring->turan" => Box::new(BadColoringToTuran),
        "bad_coloring->lift" => Box::new(LiftBadColoring),
        "turan->lift" => Box::new(LiftTuran),
        "bad_kset->lift" => Box::new(KSetLift),
        "collision->bad_kset" => Box::new(CollisionToBadKSet),
        "empty->short_choice" => Box::new(EmptyToShortChoice),
        "weak_collision->ramsey_hamming" => Box::new(WeakCollisionToHamming::default()),
        "weak_schur->ramsey" => Box::new(WeakSchurToRamsey),
        "constrained_long_choice->long_choice" => Box::new(Unconstrain),
        _ => return None,
    };
    Some(r)
}

pub(crate) fn mismatch(expected: Kind, got: &Instance) -> ReduceError {
    ReduceError::KindMismatch {
        expected: expected.name(),
        got: got.kind().name(),
    }
}

pub(crate) fn unexpected(reduction: &str, cert: &Certificate) -> ReduceError {
    ReduceError::Internal(format!(
        "{reduction}: {} certificates cannot arise from this construction",
        cert.name()
    ))
}

pub(crate) fn aux_u64(aux: &Value, key: &str) -> Result<u64, ReduceError> {
    aux.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| ReduceError::BadAux(format!("missing integer field {key}")))
}

/// Pulls `cert` back and checks it against the source verifier.
pub fn pullback_verified(
    r: &dyn Reduction,
    src: &Instance,
    aux: &Value,
    cert: &Certificate,
) -> Result<Pullback, ReduceError> {
    let pulled = r.pullback(src, aux, cert)?;
    let report = crate::problems::verify(src, &pulled.certificate);
    if !report.accepted {
        return Err(ReduceError::Internal(format!(
            "{}: pulled-back {} rejected: {report}",
            r.name(),
            pulled.certificate.name()
        )));
    }
    Ok(pulled)
}
