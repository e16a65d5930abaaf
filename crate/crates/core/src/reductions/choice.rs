//! Reductions into Long Choice and Short Choice that act on single values.

use serde_json::Value;

use crate::function::{BitVec, Function};
use crate::problems::{
    Certificate, EmptyInstance, Instance, Kind, LongChoiceInstance, LongChoiceVariant,
    ShortChoiceInstance, DESK_SCALE_BITS,
};

use super::interval::Interval;
use super::{mismatch, unexpected, Outcome, Pullback, ReduceError, Reduction};

/// `P_i(x)` is bit `i` of `C(x)`; predicates past the output width are
/// constant 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeakCollisionToUnary;

impl Reduction for WeakCollisionToUnary {
    fn name(&self) -> &'static str {
        "weak_collision->unary_long_choice"
    }

    fn source(&self) -> Kind {
        Kind::WeakCollision
    }

    fn target(&self) -> Kind {
        Kind::LongChoice
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::WeakCollision(c) = src else {
            return Err(mismatch(Kind::WeakCollision, src));
        };
        let (n, m) = (c.n, c.m);
        let predicates = (0..n - 1)
            .map(|i| {
                if i >= m {
                    return Function::constant((i + 2) * n, 1, 0);
                }
                let f = c.f.clone();
                Function::from_args_fn(format!("bit {i}"), n, i + 2, 1, move |args| {
                    (f.call(args[i + 1]) >> i) & 1
                })
            })
            .collect();
        let target = LongChoiceInstance::new(n, LongChoiceVariant::Unary, predicates)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        _src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        match cert {
            Certificate::ChoiceSeq(seq) if seq.len() >= 2 => {
                Ok(Certificate::Collision(seq[seq.len() - 2], seq[seq.len() - 1]).into())
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// `a_0` takes `b_0`'s place and `b_0` takes the place of any later `a_0`.
fn swap(seq: &[u64], a0: u64) -> Vec<u64> {
    let b0 = seq[0];
    if b0 == a0 {
        return seq.to_vec();
    }
    std::iter::once(a0)
        .chain(seq[1..].iter().map(|&x| if x == a0 { b0 } else { x }))
        .collect()
}

/// Drops the fixed start of a constrained instance by swapping it in.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unconstrain;

impl Reduction for Unconstrain {
    fn name(&self) -> &'static str {
        "constrained_long_choice->long_choice"
    }

    fn source(&self) -> Kind {
        Kind::LongChoice
    }

    fn target(&self) -> Kind {
        Kind::LongChoice
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::LongChoice(lc) = src else {
            return Err(mismatch(Kind::LongChoice, src));
        };
        let Some(a0) = lc.start() else {
            return Err(ReduceError::Precondition(
                "instance has no fixed start element".into(),
            ));
        };
        let n = lc.n;
        let predicates = lc
            .predicates
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let p = p.clone();
                Function::from_args_fn(format!("swapped P_{k}"), n, k + 2, 1, move |args| {
                    p.apply(&BitVec::pack(&swap(args, a0), n)).get(0) as u64
                })
            })
            .collect();
        let target = LongChoiceInstance::new(n, LongChoiceVariant::General, predicates)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let Instance::LongChoice(lc) = src else {
            return Err(mismatch(Kind::LongChoice, src));
        };
        let a0 = lc.start().ok_or_else(|| {
            ReduceError::Precondition("instance has no fixed start element".into())
        })?;
        match cert {
            Certificate::ChoiceSeq(seq) if !seq.is_empty() => {
                Ok(Certificate::ChoiceSeq(swap(seq, a0)).into())
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// `H_i`: a range of hole values minus the images of the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeTracker {
    pub step: usize,
    pub range: Interval,
    pub images: Vec<u64>,
}

impl RangeTracker {
    /// `H_0 = [0, 2^n - 2] \ {C(a_0)}`, then one midpoint split per
    /// further image. `images` must be nonempty.
    pub fn build(n: usize, images: &[u64]) -> Self {
        let mut t = RangeTracker {
            step: 0,
            range: Interval::closed(0, (1u64 << n) - 2),
            images: images[..1].to_vec(),
        };
        for &c in &images[1..] {
            if let Some(mid) = t.midpoint() {
                t.range = if c <= mid {
                    Interval::closed(t.range.lo, mid)
                } else {
                    t.range.after(mid + 1 - t.range.lo)
                };
            }
            t.images.push(c);
            t.step += 1;
        }
        t
    }

    pub fn size(&self) -> u64 {
        self.range.unfilled(&self.images)
    }

    /// Smallest `h ∈ H` with `⌈|H|/2⌉` elements of `H` at or below it.
    pub fn midpoint(&self) -> Option<u64> {
        let half = self.size().div_ceil(2);
        if half == 0 {
            return None;
        }
        let prefix = self.range.prefix_with_unfilled(half, &self.images);
        Some(prefix.lo + prefix.len - 1)
    }

    /// Elements of `H` at or below the midpoint (`upper = false`) or above it.
    pub fn side(&self, upper: bool) -> Vec<u64> {
        let Some(mid) = self.midpoint() else {
            return Vec::new();
        };
        let (lo, hi) = (self.range.lo, self.range.lo + self.range.len);
        let span = if upper { mid + 1..hi } else { lo..mid + 1 };
        span.filter(|v| !self.images.contains(v)).collect()
    }
}

/// Predicate `P_i` tests whether `C(x)` lies at or below the midpoint of `H_i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyToShortChoice;

impl Reduction for EmptyToShortChoice {
    fn name(&self) -> &'static str {
        "empty->short_choice"
    }

    fn source(&self) -> Kind {
        Kind::Empty
    }

    fn target(&self) -> Kind {
        Kind::ShortChoice
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Empty(e) = src else {
            return Err(mismatch(Kind::Empty, src));
        };
        let n = e.n;
        let predicates = (0..n - 1)
            .map(|i| {
                let f = e.f.clone();
                Function::from_args_fn(format!("midpoint P_{i}"), n, i + 2, 1, move |args| {
                    let images: Vec<u64> = args[..=i].iter().map(|&a| f.call(a)).collect();
                    let t = RangeTracker::build(n, &images);
                    debug_assert!(
                        t.size() + 2 >= (1u64 << (n - i)) || !on_track(&f, n, &args[..=i])
                    );
                    match t.midpoint() {
                        Some(mid) => (f.call(args[i + 1]) <= mid) as u64,
                        None => 0,
                    }
                })
            })
            .collect();
        let target = ShortChoiceInstance::new(n, predicates)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let Instance::Empty(e) = src else {
            return Err(mismatch(Kind::Empty, src));
        };
        let Certificate::ShortCert { prefix, c } = cert else {
            return Err(unexpected(self.name(), cert));
        };
        if prefix.is_empty() {
            return Err(unexpected(self.name(), cert));
        }
        if e.n > DESK_SCALE_BITS {
            return Err(ReduceError::DeskScale(format!(
                "hole confirmation at width {} needs a full scan",
                e.n
            )));
        }
        let images: Vec<u64> = prefix.iter().map(|&a| e.f.call(a)).collect();
        let tracker = RangeTracker::build(e.n, &images);
        // c = 0: nothing extends into the upper side, so its values are holes
        let hole = tracker.side(!*c).first().copied().ok_or_else(|| {
            ReduceError::Internal(format!(
                "{}: the side named by the certificate is empty",
                self.name()
            ))
        })?;
        confirm_hole(e, hole)?;
        Ok(Certificate::EmptyHole(hole).into())
    }
}

/// Whether each image after the first lands in the tracked range, as it
/// does along any subcertificate.
fn on_track(f: &Function, n: usize, prefix: &[u64]) -> bool {
    let images: Vec<u64> = prefix.iter().map(|&a| f.call(a)).collect();
    let mut distinct = images.clone();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len() == images.len()
        && (1..images.len()).all(|j| {
            RangeTracker::build(n, &images[..j])
                .range
                .contains(images[j])
        })
}

fn confirm_hole(e: &EmptyInstance, hole: u64) -> Result<(), ReduceError> {
    match (0..e.domain_size()).find(|&x| e.f.call(x) == hole) {
        Some(x) => Err(ReduceError::Internal(format!(
            "value {hole} chosen as a hole has preimage {x}"
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_takes_upper_half_of_odd_sets() {
        // n = 3: H_0 = [0, 6] \ {2} = {0,1,3,4,5,6}, midpoint 3
        let t = RangeTracker::build(3, &[2]);
        assert_eq!(t.size(), 6);
        assert_eq!(t.midpoint(), Some(3));
        assert_eq!(t.side(false), vec![0, 1, 3]);
        assert_eq!(t.side(true), vec![4, 5, 6]);
        // C(a_1) = 5 keeps the upper side, minus 5
        let t = RangeTracker::build(3, &[2, 5]);
        assert_eq!(t.range, Interval::closed(4, 6));
        assert_eq!(t.size(), 2);
        assert_eq!(t.midpoint(), Some(4));
    }

    #[test]
    fn swap_exchanges_start() {
        assert_eq!(swap(&[3, 1, 5], 3), vec![3, 1, 5]);
        assert_eq!(swap(&[2, 5, 7], 5), vec![5, 2, 7]);
        assert_eq!(swap(&[2, 4, 7], 5), vec![5, 4, 7]);
    }
}
