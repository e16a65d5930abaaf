use crate::function::{BitVec, Function};

use super::{below, check_fn, distinct, pow2, Check, InstanceError, Reason, DESK_SCALE_BITS};

/// Structural promise about the predicates. Verification treats every
/// variant as general; only `Constrained` changes the accepted set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LongChoiceVariant {
    General,
    /// `P_i` reads only its last argument.
    Unary,
    /// `P_i` reads only `a_{k_i}` and the last argument, `k_i <= i`.
    Binary(Vec<usize>),
    /// Certificates must start at this element.
    Constrained(u64),
}

/// Objects are the `2^n` integers of width `n`. Predicate `P_i` takes
/// `i + 2` packed objects (`a_0` in the lowest bits) and returns one bit.
#[derive(Debug, Clone)]
pub struct LongChoiceInstance {
    pub n: usize,
    pub variant: LongChoiceVariant,
    pub predicates: Vec<Function>,
}

fn check_predicates(n: usize, predicates: &[Function]) -> Result<(), InstanceError> {
    if predicates.len() != n.saturating_sub(1) {
        return Err(InstanceError::Param(format!(
            "expected {} predicates, got {}",
            n.saturating_sub(1),
            predicates.len()
        )));
    }
    for (i, p) in predicates.iter().enumerate() {
        check_fn(p, &format!("P_{i}"), (i + 2) * n, 1)?;
    }
    Ok(())
}

pub(crate) fn predicate(
    predicates: &[Function],
    n: usize,
    i: usize,
    prefix: &[u64],
    x: u64,
) -> bool {
    debug_assert!(prefix.len() > i);
    let mut args = BitVec::zeros((i + 2) * n);
    for (k, &a) in prefix[..=i].iter().chain(std::iter::once(&x)).enumerate() {
        args.write_u64(k * n, n, a);
    }
    predicates[i].apply(&args).get(0)
}

/// First `(i, j)` with `j > i + 1` and `P_i(a_0..a_i, a_j) != P_i(a_0..a_i, a_{i+1})`,
/// considering only predicates with `i + 1 < seq.len()`.
fn first_mismatch(predicates: &[Function], n: usize, seq: &[u64]) -> Option<(usize, usize)> {
    for i in 0..seq.len().saturating_sub(1).min(predicates.len()) {
        let reference = predicate(predicates, n, i, seq, seq[i + 1]);
        if let Some(j) =
            (i + 2..seq.len()).find(|&j| predicate(predicates, n, i, seq, seq[j]) != reference)
        {
            return Some((i, j));
        }
    }
    None
}

impl LongChoiceInstance {
    pub fn new(
        n: usize,
        variant: LongChoiceVariant,
        predicates: Vec<Function>,
    ) -> Result<Self, InstanceError> {
        if n == 0 || n > 63 {
            return Err(InstanceError::Param(format!(
                "object width {n} outside 1..=63"
            )));
        }
        check_predicates(n, &predicates)?;
        match &variant {
            LongChoiceVariant::Binary(ks) => {
                if ks.len() != predicates.len() || ks.iter().enumerate().any(|(i, &k)| k > i) {
                    return Err(InstanceError::Param(
                        "binary dependence needs k_i <= i for each predicate".into(),
                    ));
                }
            }
            LongChoiceVariant::Constrained(a0) if *a0 >= pow2(n) => {
                return Err(InstanceError::Param(format!(
                    "start element {a0} does not fit in {n} bits"
                )));
            }
            _ => {}
        }
        Ok(LongChoiceInstance {
            n,
            variant,
            predicates,
        })
    }

    pub fn universe(&self) -> u64 {
        pow2(self.n)
    }

    pub fn start(&self) -> Option<u64> {
        match self.variant {
            LongChoiceVariant::Constrained(a0) => Some(a0),
            _ => None,
        }
    }

    /// `P_i(prefix[0..=i], x)`.
    pub fn predicate(&self, i: usize, prefix: &[u64], x: u64) -> bool {
        predicate(&self.predicates, self.n, i, prefix, x)
    }

    pub(crate) fn check(&self, seq: &[u64]) -> Check {
        if seq.len() != self.n + 1 {
            return Err(Reason::WrongLength {
                expected: self.n + 1,
                got: seq.len(),
            });
        }
        for &a in seq {
            below(a, self.universe())?;
        }
        distinct(seq)?;
        if let Some(a0) = self.start() {
            if seq[0] != a0 {
                return Err(Reason::WrongStart {
                    expected: a0,
                    got: seq[0],
                });
            }
        }
        match first_mismatch(&self.predicates, self.n, seq) {
            Some((i, j)) => Err(Reason::PredicateMismatch { i, j }),
            None => Ok(()),
        }
    }
}

/// Same predicates as Long Choice over a universe of `2^n - 2` objects,
/// the integers `[0, 2^n - 3]`.
#[derive(Debug, Clone)]
pub struct ShortChoiceInstance {
    pub n: usize,
    pub predicates: Vec<Function>,
}

impl ShortChoiceInstance {
    pub fn new(n: usize, predicates: Vec<Function>) -> Result<Self, InstanceError> {
        if !(2..=63).contains(&n) {
            return Err(InstanceError::Param(format!(
                "object width {n} outside 2..=63"
            )));
        }
        check_predicates(n, &predicates)?;
        Ok(ShortChoiceInstance { n, predicates })
    }

    pub fn universe(&self) -> u64 {
        pow2(self.n) - 2
    }

    pub fn predicate(&self, i: usize, prefix: &[u64], x: u64) -> bool {
        predicate(&self.predicates, self.n, i, prefix, x)
    }

    /// Whether `prefix, x` is again a subcertificate, given that `prefix` is one.
    pub fn extends(&self, prefix: &[u64], x: u64) -> bool {
        !prefix.contains(&x)
            && (0..prefix.len() - 1)
                .all(|i| self.predicate(i, prefix, x) == self.predicate(i, prefix, prefix[i + 1]))
    }

    /// Subcertificate checks, then a scan of the whole universe for an
    /// extension `x` with `P_k(prefix, x) = c`. Costs `Θ(2^n)` evaluations.
    pub(crate) fn check(&self, prefix: &[u64], c: bool) -> Check {
        let max_len = self.n - 1;
        if prefix.is_empty() || prefix.len() > max_len {
            return Err(Reason::WrongLength {
                expected: max_len,
                got: prefix.len(),
            });
        }
        for &a in prefix {
            below(a, self.universe())?;
        }
        distinct(prefix)?;
        if let Some((i, j)) = first_mismatch(&self.predicates, self.n, prefix) {
            return Err(Reason::PredicateMismatch { i, j });
        }
        if self.n > DESK_SCALE_BITS {
            return Err(Reason::DeskScaleExceeded { bits: self.n });
        }
        let k = prefix.len() - 1;
        match (0..self.universe())
            .find(|&x| self.extends(prefix, x) && self.predicate(k, prefix, x) == c)
        {
            Some(x) => Err(Reason::ExtensionExists(x)),
            None => Ok(()),
        }
    }
}
