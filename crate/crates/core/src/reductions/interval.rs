//! Collision to Long Choice through nested intervals of the range.

use serde_json::Value;

use crate::function::Function;
use crate::problems::{
    Certificate, CollisionInstance, Instance, Kind, LongChoiceInstance, LongChoiceVariant,
};

use super::{mismatch, unexpected, Outcome, Pullback, ReduceError, Reduction};

/// Integers `lo .. lo + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: u64,
    pub len: u64,
}

impl Interval {
    /// `[lo, hi]`, inclusive.
    pub fn closed(lo: u64, hi: u64) -> Self {
        Interval {
            lo,
            len: hi + 1 - lo,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.lo && v - self.lo < self.len
    }

    /// The smallest `k` elements.
    pub fn first(&self, k: u64) -> Interval {
        Interval {
            lo: self.lo,
            len: k.min(self.len),
        }
    }

    /// Everything after the first `k` elements.
    pub fn after(&self, k: u64) -> Interval {
        let k = k.min(self.len);
        Interval {
            lo: self.lo + k,
            len: self.len - k,
        }
    }

    /// Elements not among `images`.
    pub fn unfilled(&self, images: &[u64]) -> u64 {
        let mut inside: Vec<u64> = images
            .iter()
            .copied()
            .filter(|&v| self.contains(v))
            .collect();
        inside.sort_unstable();
        inside.dedup();
        self.len - inside.len() as u64
    }

    /// Shortest prefix holding `t` unfilled elements.
    pub fn prefix_with_unfilled(&self, t: u64, images: &[u64]) -> Interval {
        let mut inside: Vec<u64> = images
            .iter()
            .copied()
            .filter(|&v| self.contains(v))
            .collect();
        inside.sort_unstable();
        inside.dedup();
        // walk the end of the prefix past each filled value it covers
        let mut k = t;
        for v in inside {
            if v - self.lo < k {
                k += 1;
            } else {
                break;
            }
        }
        self.first(k)
    }
}

/// `B_0..B_i` and `F_0..F_i` for the images `C(a_0)..C(a_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalState {
    pub step: usize,
    pub b: Vec<Interval>,
    pub f: Vec<Interval>,
    pub images: Vec<u64>,
}

impl IntervalState {
    /// Recomputes every interval from scratch. `images` must be nonempty.
    pub fn build(n: usize, images: &[u64]) -> Self {
        let split =
            |b: Interval, upto: &[u64]| b.prefix_with_unfilled(b.unfilled(upto).div_ceil(2), upto);
        let b0 = Interval::closed(1, (1u64 << n) - 1);
        let mut b = vec![b0];
        let mut f = vec![split(b0, &images[..1])];
        for j in 1..images.len() {
            let (prev_b, prev_f) = (b[j - 1], f[j - 1]);
            if prev_b.len == 1 {
                b.push(prev_b);
                f.push(prev_b);
                continue;
            }
            let next = if prev_f.contains(images[j]) {
                prev_f
            } else {
                prev_b.after(prev_f.len)
            };
            b.push(next);
            f.push(split(next, &images[..=j]));
        }
        IntervalState {
            step: images.len() - 1,
            b,
            f,
            images: images.to_vec(),
        }
    }

    /// Images distinct and each `C(a_j)` inside `B_j`: the shape of every
    /// prefix of a collision-free certificate.
    pub fn collision_free(&self) -> bool {
        let mut seen = self.images.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.images.len()
            && self.images.iter().zip(&self.b).all(|(&c, b)| b.contains(c))
    }

    /// `unfilled(B_j) = 2^(n-j) - 2` for every `j <= min(step, n - 2)`.
    pub fn bookkeeping_holds(&self, n: usize) -> bool {
        (0..=self.step.min(n.saturating_sub(2)))
            .all(|j| self.b[j].unfilled(&self.images[..=j]) == (1u64 << (n - j)) - 2)
    }
}

/// `C(a) = 2^n - 1` where `C_0(a) = 0`, else `C_0(a)`; the range is then `[1, 2^n - 1]`.
fn shifted(f: &Function, n: usize, a: u64) -> u64 {
    match f.call(a) {
        0 => (1u64 << n) - 1,
        v => v,
    }
}

/// Predicate `P_i` tests `C(x) ∈ F_i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollisionToLongChoice;

impl Reduction for CollisionToLongChoice {
    fn name(&self) -> &'static str {
        "collision->long_choice"
    }

    fn source(&self) -> Kind {
        Kind::Collision
    }

    fn target(&self) -> Kind {
        Kind::LongChoice
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Collision(c) = src else {
            return Err(mismatch(Kind::Collision, src));
        };
        let n = c.n;
        if n < 2 {
            return Err(ReduceError::Precondition(
                "collision width must be at least 2".into(),
            ));
        }
        let predicates = (0..n - 1)
            .map(|i| {
                let f = c.f.clone();
                Function::from_args_fn(format!("interval P_{i}"), n, i + 2, 1, move |args| {
                    let images: Vec<u64> = args[..=i].iter().map(|&a| shifted(&f, n, a)).collect();
                    let state = IntervalState::build(n, &images);
                    debug_assert!(!state.collision_free() || state.bookkeeping_holds(n));
                    state.f[i].contains(shifted(&f, n, args[i + 1])) as u64
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
        let Instance::Collision(c) = src else {
            return Err(mismatch(Kind::Collision, src));
        };
        let Certificate::ChoiceSeq(seq) = cert else {
            return Err(unexpected(self.name(), cert));
        };
        pull_collision(c, seq).ok_or_else(|| {
            ReduceError::Internal(format!(
                "{}: certificate has neither a zero nor a collision",
                self.name()
            ))
        })
    }
}

/// First element with `C_0 = 0`, else the first colliding pair.
pub(crate) fn pull_collision(c: &CollisionInstance, seq: &[u64]) -> Option<Pullback> {
    let values: Vec<u64> = seq.iter().map(|&a| c.f.call(a)).collect();
    if let Some(p) = values.iter().position(|&v| v == 0) {
        return Some(Certificate::Zero(seq[p]).into());
    }
    for p in 0..seq.len() {
        if let Some(q) = (p + 1..seq.len()).find(|&q| values[q] == values[p] && seq[q] != seq[p]) {
            return Some(Certificate::Collision(seq[p], seq[q]).into());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_split_follows_the_base_rule() {
        // C(a_0) = 5 > 2^(n-1) - 1 with n = 3
        let s = IntervalState::build(3, &[5]);
        assert_eq!(s.b[0], Interval::closed(1, 7));
        assert_eq!(s.f[0], Interval::closed(1, 3));
        // C(a_0) = 2 sits inside the first half, which grows by one
        let s = IntervalState::build(3, &[2]);
        assert_eq!(s.f[0], Interval::closed(1, 4));
    }

    #[test]
    fn unfilled_counts() {
        let i = Interval::closed(0, 5);
        assert_eq!(i.unfilled(&[0, 2, 1]), 3);
        assert_eq!(
            i.prefix_with_unfilled(2, &[0, 2, 1]),
            Interval::closed(0, 4)
        );
        assert_eq!(i.prefix_with_unfilled(0, &[0]), Interval { lo: 0, len: 0 });
    }

    #[test]
    fn bookkeeping_along_collision_free_prefix() {
        let s = IntervalState::build(4, &[3, 6]);
        assert!(s.collision_free());
        assert_eq!(s.b[1].unfilled(&s.images), (1 << 3) - 2);
        assert!(s.bookkeeping_holds(4));
    }
}
