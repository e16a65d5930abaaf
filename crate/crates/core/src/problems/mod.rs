//! Instances, certificates and verifiers for every search problem.
//!
//! Encodings are unsigned integers starting at 0. Where a problem is stated
//! over `{1, ..., m}` the integer `v` stands for `v + 1`; each instance type
//! documents its own shift.

mod choice;
mod collision;
mod coloring;
mod konig;
mod ramsey;

use std::fmt;

use thiserror::Error;

use crate::function::Function;

pub use choice::{LongChoiceInstance, LongChoiceVariant, ShortChoiceInstance};
pub use collision::{CollisionInstance, EmptyInstance, WeakCollisionInstance};
pub use coloring::{
    edge_count, index_width, node_width, BadColoringInstance, BadKSetInstance, EdgeList,
    TuranInstance,
};
pub use konig::{EkrInstance, KonigInstance};
pub use ramsey::{
    edge_color2, set_distance, EdgeColoring, Ramsey2Instance, RamseyRInstance, SunflowerInstance,
    WeakSchurInstance, BLUE, RED,
};

/// Exhaustive verifiers (ShortChoice, Empty) refuse larger instances.
pub const DESK_SCALE_BITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Collision,
    WeakCollision,
    LongChoice,
    ShortChoice,
    Ramsey2,
    RamseyR,
    Sunflower,
    Konig,
    Ekr,
    BadColoring,
    Turan,
    BadKSet,
    Empty,
    WeakSchur,
}

impl Kind {
    pub const ALL: [Kind; 14] = [
        Kind::Collision,
        Kind::WeakCollision,
        Kind::LongChoice,
        Kind::ShortChoice,
        Kind::Ramsey2,
        Kind::RamseyR,
        Kind::Sunflower,
        Kind::Konig,
        Kind::Ekr,
        Kind::BadColoring,
        Kind::Turan,
        Kind::BadKSet,
        Kind::Empty,
        Kind::WeakSchur,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Collision => "collision",
            Kind::WeakCollision => "weak_collision",
            Kind::LongChoice => "long_choice",
            Kind::ShortChoice => "short_choice",
            Kind::Ramsey2 => "ramsey2",
            Kind::RamseyR => "ramsey_r",
            Kind::Sunflower => "sunflower",
            Kind::Konig => "konig",
            Kind::Ekr => "ekr",
            Kind::BadColoring => "bad_coloring",
            Kind::Turan => "turan",
            Kind::BadKSet => "bad_kset",
            Kind::Empty => "empty",
            Kind::WeakSchur => "weak_schur",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{what}: expected width {expected}, got {got}")]
    Width {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid parameter: {0}")]
    Param(String),
}

pub(crate) fn check_width(what: &str, expected: usize, got: usize) -> Result<(), InstanceError> {
    if expected == got {
        Ok(())
    } else {
        Err(InstanceError::Width {
            what: what.to_string(),
            expected,
            got,
        })
    }
}

pub(crate) fn check_fn(
    f: &Function,
    what: &str,
    input: usize,
    output: usize,
) -> Result<(), InstanceError> {
    check_width(&format!("{what} input"), input, f.input_width())?;
    check_width(&format!("{what} output"), output, f.output_width())
}

#[derive(Debug, Clone)]
pub enum Instance {
    Collision(CollisionInstance),
    WeakCollision(WeakCollisionInstance),
    LongChoice(LongChoiceInstance),
    ShortChoice(ShortChoiceInstance),
    Ramsey2(Ramsey2Instance),
    RamseyR(RamseyRInstance),
    Sunflower(SunflowerInstance),
    Konig(KonigInstance),
    Ekr(EkrInstance),
    BadColoring(BadColoringInstance),
    Turan(TuranInstance),
    BadKSet(BadKSetInstance),
    Empty(EmptyInstance),
    WeakSchur(WeakSchurInstance),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Collision(_) => Kind::Collision,
            Instance::WeakCollision(_) => Kind::WeakCollision,
            Instance::LongChoice(_) => Kind::LongChoice,
            Instance::ShortChoice(_) => Kind::ShortChoice,
            Instance::Ramsey2(_) => Kind::Ramsey2,
            Instance::RamseyR(_) => Kind::RamseyR,
            Instance::Sunflower(_) => Kind::Sunflower,
            Instance::Konig(_) => Kind::Konig,
            Instance::Ekr(_) => Kind::Ekr,
            Instance::BadColoring(_) => Kind::BadColoring,
            Instance::Turan(_) => Kind::Turan,
            Instance::BadKSet(_) => Kind::BadKSet,
            Instance::Empty(_) => Kind::Empty,
            Instance::WeakSchur(_) => Kind::WeakSchur,
        }
    }
}

macro_rules! instance_from {
    ($($variant:ident($ty:ty)),* $(,)?) => {
        $(impl From<$ty> for Instance {
            fn from(i: $ty) -> Self {
                Instance::$variant(i)
            }
        })*
    };
}

instance_from!(
    Collision(CollisionInstance),
    WeakCollision(WeakCollisionInstance),
    LongChoice(LongChoiceInstance),
    ShortChoice(ShortChoiceInstance),
    Ramsey2(Ramsey2Instance),
    RamseyR(RamseyRInstance),
    Sunflower(SunflowerInstance),
    Konig(KonigInstance),
    Ekr(EkrInstance),
    BadColoring(BadColoringInstance),
    Turan(TuranInstance),
    BadKSet(BadKSetInstance),
    Empty(EmptyInstance),
    WeakSchur(WeakSchurInstance),
);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KonigCert {
    IdenticalChildren(u64, u64),
    InvalidRoot,
    NonUniqueRoot(u64),
    FarAway(u64),
    /// The deepest node of the path; the rest is recovered by walking parents.
    LongPath(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certificate {
    Zero(u64),
    Collision(u64, u64),
    ChoiceSeq(Vec<u64>),
    ShortCert { prefix: Vec<u64>, c: bool },
    Clique { color: u64, nodes: Vec<u64> },
    Sunflower(Vec<u64>),
    SunflowerError(u64),
    SunflowerDup(u64, u64),
    Konig(KonigCert),
    EkrError(u64),
    EkrDup(u64, u64),
    EkrDisjoint(u64, u64),
    EdgeError(u64),
    EdgeDup(u64, u64),
    BadEdge(u64),
    CliqueEdges(Vec<u64>),
    BadSet(u64),
    SetDup(u64, u64),
    EmptyHole(u64),
    SchurTriple(u64, u64),
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::Zero(_) => "zero",
            Certificate::Collision(..) => "collision",
            Certificate::ChoiceSeq(_) => "choice_seq",
            Certificate::ShortCert { .. } => "short_cert",
            Certificate::Clique { .. } => "clique",
            Certificate::Sunflower(_) => "sunflower",
            Certificate::SunflowerError(_) => "sunflower_error",
            Certificate::SunflowerDup(..) => "sunflower_dup",
            Certificate::Konig(k) => match k {
                KonigCert::IdenticalChildren(..) => "identical_children",
                KonigCert::InvalidRoot => "invalid_root",
                KonigCert::NonUniqueRoot(_) => "non_unique_root",
                KonigCert::FarAway(_) => "far_away",
                KonigCert::LongPath(_) => "long_path",
            },
            Certificate::EkrError(_) => "ekr_error",
            Certificate::EkrDup(..) => "ekr_dup",
            Certificate::EkrDisjoint(..) => "ekr_disjoint",
            Certificate::EdgeError(_) => "edge_error",
            Certificate::EdgeDup(..) => "edge_dup",
            Certificate::BadEdge(_) => "bad_edge",
            Certificate::CliqueEdges(_) => "clique_edges",
            Certificate::BadSet(_) => "bad_set",
            Certificate::SetDup(..) => "set_dup",
            Certificate::EmptyHole(_) => "empty_hole",
            Certificate::SchurTriple(..) => "schur_triple",
        }
    }

    /// Flat integer payload used by the certificate file format.
    pub fn data(&self) -> Vec<u64> {
        use Certificate::*;
        match self {
            Zero(x) | SunflowerError(x) | EkrError(x) | EdgeError(x) | BadEdge(x) | BadSet(x)
            | EmptyHole(x) => {
                vec![*x]
            }
            Collision(a, b)
            | SunflowerDup(a, b)
            | EkrDup(a, b)
            | EkrDisjoint(a, b)
            | EdgeDup(a, b)
            | SetDup(a, b)
            | SchurTriple(a, b) => vec![*a, *b],
            ChoiceSeq(v) | Sunflower(v) | CliqueEdges(v) => v.clone(),
            ShortCert { prefix, c } => std::iter::once(*c as u64)
                .chain(prefix.iter().copied())
                .collect(),
            Clique { color, nodes } => std::iter::once(*color)
                .chain(nodes.iter().copied())
                .collect(),
            Konig(k) => match k {
                KonigCert::IdenticalChildren(a, b) => vec![*a, *b],
                KonigCert::InvalidRoot => vec![],
                KonigCert::NonUniqueRoot(x) | KonigCert::FarAway(x) | KonigCert::LongPath(x) => {
                    vec![*x]
                }
            },
        }
    }

    /// Inverse of [`Certificate::name`] plus [`Certificate::data`].
    pub fn from_parts(name: &str, data: &[u64]) -> Option<Certificate> {
        use Certificate::*;
        let one = || (data.len() == 1).then(|| data[0]);
        let two = || (data.len() == 2).then(|| (data[0], data[1]));
        Some(match name {
            "zero" => Zero(one()?),
            "collision" => two().map(|(a, b)| Collision(a, b))?,
            "choice_seq" => ChoiceSeq(data.to_vec()),
            "short_cert" => {
                let (&c, prefix) = data.split_first()?;
                if c > 1 {
                    return None;
                }
                ShortCert {
                    prefix: prefix.to_vec(),
                    c: c == 1,
                }
            }
            "clique" => {
                let (&color, nodes) = data.split_first()?;
                Clique {
                    color,
                    nodes: nodes.to_vec(),
                }
            }
            "sunflower" => Sunflower(data.to_vec()),
            "sunflower_error" => SunflowerError(one()?),
            "sunflower_dup" => two().map(|(a, b)| SunflowerDup(a, b))?,
            "identical_children" => {
                two().map(|(a, b)| Konig(KonigCert::IdenticalChildren(a, b)))?
            }
            "invalid_root" if data.is_empty() => Konig(KonigCert::InvalidRoot),
            "non_unique_root" => Konig(KonigCert::NonUniqueRoot(one()?)),
            "far_away" => Konig(KonigCert::FarAway(one()?)),
            "long_path" => Konig(KonigCert::LongPath(one()?)),
            "ekr_error" => EkrError(one()?),
            "ekr_dup" => two().map(|(a, b)| EkrDup(a, b))?,
            "ekr_disjoint" => two().map(|(a, b)| EkrDisjoint(a, b))?,
            "edge_error" => EdgeError(one()?),
            "edge_dup" => two().map(|(a, b)| EdgeDup(a, b))?,
            "bad_edge" => BadEdge(one()?),
            "clique_edges" => CliqueEdges(data.to_vec()),
            "bad_set" => BadSet(one()?),
            "set_dup" => two().map(|(a, b)| SetDup(a, b))?,
            "empty_hole" => EmptyHole(one()?),
            "schur_triple" => two().map(|(a, b)| SchurTriple(a, b))?,
            _ => return None,
        })
    }
}

/// Why a certificate was rejected. `code()` is the stable machine-readable part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    KindMismatch {
        kind: Kind,
        cert: &'static str,
    },
    OutOfRange {
        value: u64,
        bound: u64,
    },
    WrongLength {
        expected: usize,
        got: usize,
    },
    NotDistinct(u64),
    WrongStart {
        expected: u64,
        got: u64,
    },
    PredicateMismatch {
        i: usize,
        j: usize,
    },
    ExtensionExists(u64),
    DeskScaleExceeded {
        bits: usize,
    },
    NotZero(u64),
    ImagesDiffer(u64, u64),
    WrongColor {
        a: u64,
        b: u64,
    },
    /// The entry claimed to be malformed is well formed.
    EntryValid(u64),
    /// An entry that must be well formed is not.
    EntryInvalid(u64),
    NotEqual(u64, u64),
    Duplicate(u64, u64),
    NotSunflower(u64, u64),
    NotDisjoint(u64, u64),
    ProperlyColored(u64),
    RootValid,
    NotARoot(u64),
    ReachesRoot(u64),
    NotLongPath(u64),
    NotClique,
    NotMonochrome(u64, u64),
    HasPreimage {
        value: u64,
        preimage: u64,
    },
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::KindMismatch { .. } => "KIND_MISMATCH",
            Reason::OutOfRange { .. } => "OUT_OF_RANGE",
            Reason::WrongLength { .. } => "WRONG_LENGTH",
            Reason::NotDistinct(_) => "NOT_DISTINCT",
            Reason::WrongStart { .. } => "WRONG_START",
            Reason::PredicateMismatch { .. } => "PREDICATE_MISMATCH",
            Reason::ExtensionExists(_) => "EXTENSION_EXISTS",
            Reason::DeskScaleExceeded { .. } => "DESK_SCALE_EXCEEDED",
            Reason::NotZero(_) => "NOT_ZERO",
            Reason::ImagesDiffer(..) => "IMAGES_DIFFER",
            Reason::WrongColor { .. } => "WRONG_COLOR",
            Reason::EntryValid(_) => "ENTRY_VALID",
            Reason::EntryInvalid(_) => "ENTRY_INVALID",
            Reason::NotEqual(..) => "NOT_EQUAL",
            Reason::Duplicate(..) => "DUPLICATE",
            Reason::NotSunflower(..) => "NOT_SUNFLOWER",
            Reason::NotDisjoint(..) => "NOT_DISJOINT",
            Reason::ProperlyColored(_) => "PROPERLY_COLORED",
            Reason::RootValid => "ROOT_VALID",
            Reason::NotARoot(_) => "NOT_A_ROOT",
            Reason::ReachesRoot(_) => "REACHES_ROOT",
            Reason::NotLongPath(_) => "NOT_LONG_PATH",
            Reason::NotClique => "NOT_CLIQUE",
            Reason::NotMonochrome(..) => "NOT_MONOCHROME",
            Reason::HasPreimage { .. } => "HAS_PREIMAGE",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = self.code();
        match self {
            Reason::KindMismatch { kind, cert } => {
                write!(f, "{code}: {cert} certificate for a {kind} instance")
            }
            Reason::OutOfRange { value, bound } => {
                write!(f, "{code}: {value} is not below {bound}")
            }
            Reason::WrongLength { expected, got } => {
                write!(f, "{code}: expected {expected} entries, got {got}")
            }
            Reason::WrongStart { expected, got } => {
                write!(f, "{code}: sequence starts at {got}, not {expected}")
            }
            Reason::PredicateMismatch { i, j } => write!(f, "{code}({i},{j})"),
            Reason::DeskScaleExceeded { bits } => {
                write!(
                    f,
                    "{code}: {bits}-bit universe exceeds the {DESK_SCALE_BITS}-bit exhaustive cap"
                )
            }
            Reason::WrongColor { a, b } => write!(f, "{code}: edge ({a},{b}) has another color"),
            Reason::RootValid | Reason::NotClique => f.write_str(code),
            Reason::HasPreimage { value, preimage } => {
                write!(f, "{code}: {value} is the image of {preimage}")
            }
            Reason::NotDistinct(x)
            | Reason::ExtensionExists(x)
            | Reason::NotZero(x)
            | Reason::EntryValid(x)
            | Reason::EntryInvalid(x)
            | Reason::ProperlyColored(x)
            | Reason::NotARoot(x)
            | Reason::ReachesRoot(x)
            | Reason::NotLongPath(x) => write!(f, "{code}({x})"),
            Reason::ImagesDiffer(a, b)
            | Reason::NotEqual(a, b)
            | Reason::Duplicate(a, b)
            | Reason::NotSunflower(a, b)
            | Reason::NotDisjoint(a, b)
            | Reason::NotMonochrome(a, b) => write!(f, "{code}({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub accepted: bool,
    pub reason: Option<Reason>,
}

impl VerifyReport {
    pub fn accept() -> Self {
        VerifyReport {
            accepted: true,
            reason: None,
        }
    }

    pub fn reject(reason: Reason) -> Self {
        VerifyReport {
            accepted: false,
            reason: Some(reason),
        }
    }

    pub fn code(&self) -> Option<&'static str> {
        self.reason.as_ref().map(Reason::code)
    }
}

impl From<Result<(), Reason>> for VerifyReport {
    fn from(r: Result<(), Reason>) -> Self {
        match r {
            Ok(()) => VerifyReport::accept(),
            Err(reason) => VerifyReport::reject(reason),
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            None => f.write_str("ACCEPT"),
            Some(r) => write!(f, "REJECT {r}"),
        }
    }
}

pub(crate) type Check = Result<(), Reason>;

pub(crate) fn below(value: u64, bound: u64) -> Check {
    if value < bound {
        Ok(())
    } else {
        Err(Reason::OutOfRange { value, bound })
    }
}

pub(crate) fn distinct(values: &[u64]) -> Check {
    let mut seen = std::collections::HashSet::with_capacity(values.len());
    match values.iter().find(|v| !seen.insert(**v)) {
        Some(&v) => Err(Reason::NotDistinct(v)),
        None => Ok(()),
    }
}

pub(crate) fn pow2(bits: usize) -> u64 {
    assert!(bits < 64, "2^{bits} does not fit in 64 bits");
    1u64 << bits
}

/// Checks `cert` against `instance`. Pure and deterministic.
pub fn verify(instance: &Instance, cert: &Certificate) -> VerifyReport {
    use Certificate as C;
    let mismatch = || {
        Err(Reason::KindMismatch {
            kind: instance.kind(),
            cert: cert.name(),
        })
    };
    let result = match (instance, cert) {
        (Instance::Collision(i), C::Zero(_) | C::Collision(..)) => i.check(cert),
        (Instance::WeakCollision(i), C::Collision(a, b)) => i.check(*a, *b),
        (Instance::LongChoice(i), C::ChoiceSeq(seq)) => i.check(seq),
        (Instance::ShortChoice(i), C::ShortCert { prefix, c }) => i.check(prefix, *c),
        (Instance::Ramsey2(i), C::Clique { color, nodes }) => i.check_clique(*color, nodes),
        (Instance::RamseyR(i), C::Clique { color, nodes }) => i.check_clique(*color, nodes),
        (Instance::Sunflower(i), C::Sunflower(_) | C::SunflowerError(_) | C::SunflowerDup(..)) => {
            i.check(cert)
        }
        (Instance::Konig(i), C::Konig(k)) => i.check(k),
        (Instance::Ekr(i), C::EkrError(_) | C::EkrDup(..) | C::EkrDisjoint(..)) => i.check(cert),
        (Instance::BadColoring(i), C::EdgeError(_) | C::EdgeDup(..) | C::BadEdge(_)) => {
            i.check(cert)
        }
        (Instance::Turan(i), C::EdgeError(_) | C::EdgeDup(..) | C::CliqueEdges(_)) => i.check(cert),
        (Instance::BadKSet(i), C::BadSet(_) | C::SetDup(..)) => i.check(cert),
        (Instance::Empty(i), C::EmptyHole(e)) => i.check(*e),
        (Instance::WeakSchur(i), C::SchurTriple(a, b)) => i.check(*a, *b),
        _ => mismatch(),
    };
    result.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_parts_round_trip() {
        let certs = [
            Certificate::Zero(3),
            Certificate::Collision(1, 2),
            Certificate::ChoiceSeq(vec![0, 1, 2]),
            Certificate::ShortCert {
                prefix: vec![4, 5],
                c: true,
            },
            Certificate::Clique {
                color: 1,
                nodes: vec![0, 7],
            },
            Certificate::Konig(KonigCert::InvalidRoot),
            Certificate::Konig(KonigCert::LongPath(7)),
            Certificate::Konig(KonigCert::IdenticalChildren(1, 2)),
            Certificate::SchurTriple(1, 1),
            Certificate::CliqueEdges(vec![0, 1, 2]),
        ];
        for c in certs {
            assert_eq!(Certificate::from_parts(c.name(), &c.data()), Some(c));
        }
        assert_eq!(Certificate::from_parts("zero", &[1, 2]), None);
        assert_eq!(Certificate::from_parts("short_cert", &[2, 0]), None);
        assert_eq!(Certificate::from_parts("nonsense", &[]), None);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(Kind::from_name(k.name()), Some(k));
        }
    }

    #[test]
    fn reason_display() {
        assert_eq!(
            Reason::PredicateMismatch { i: 0, j: 2 }.to_string(),
            "PREDICATE_MISMATCH(0,2)"
        );
        assert_eq!(
            VerifyReport::reject(Reason::NotDistinct(3)).to_string(),
            "REJECT NOT_DISTINCT(3)"
        );
    }
}
