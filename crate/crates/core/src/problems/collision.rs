use crate::function::Function;

use super::{below, check_fn, pow2, Certificate, Check, InstanceError, Reason, DESK_SCALE_BITS};

/// `f: {0,1}^n -> {0,1}^n`; find `x` with `f(x) = 0` or a collision.
#[derive(Debug, Clone)]
pub struct CollisionInstance {
    pub n: usize,
    pub f: Function,
}

impl CollisionInstance {
    pub fn new(n: usize, f: Function) -> Result<Self, InstanceError> {
        if n == 0 || n > 63 {
            return Err(InstanceError::Param(format!(
                "collision width {n} outside 1..=63"
            )));
        }
        check_fn(&f, "f", n, n)?;
        Ok(CollisionInstance { n, f })
    }

    pub fn domain(&self) -> u64 {
        pow2(self.n)
    }

    pub(crate) fn check(&self, cert: &Certificate) -> Check {
        match *cert {
            Certificate::Zero(x) => {
                below(x, self.domain())?;
                if self.f.call(x) == 0 {
                    Ok(())
                } else {
                    Err(Reason::NotZero(x))
                }
            }
            Certificate::Collision(x, y) => check_pair(&self.f, self.domain(), x, y),
            _ => unreachable!("dispatch admits only zero and collision"),
        }
    }
}

fn check_pair(f: &Function, domain: u64, x: u64, y: u64) -> Check {
    below(x, domain)?;
    below(y, domain)?;
    if x == y {
        return Err(Reason::NotDistinct(x));
    }
    if f.call(x) == f.call(y) {
        Ok(())
    } else {
        Err(Reason::ImagesDiffer(x, y))
    }
}

/// `f: {0,1}^n -> {0,1}^m` with `m < n`; a collision always exists.
#[derive(Debug, Clone)]
pub struct WeakCollisionInstance {
    pub n: usize,
    pub m: usize,
    pub f: Function,
}

impl WeakCollisionInstance {
    pub fn new(n: usize, m: usize, f: Function) -> Result<Self, InstanceError> {
        if m == 0 || m >= n || n > 63 {
            return Err(InstanceError::Param(format!(
                "weak collision needs 1 <= m < n <= 63, got m={m}, n={n}"
            )));
        }
        check_fn(&f, "f", n, m)?;
        Ok(WeakCollisionInstance { n, m, f })
    }

    pub(crate) fn check(&self, x: u64, y: u64) -> Check {
        check_pair(&self.f, pow2(self.n), x, y)
    }
}

/// Fewer pigeons than holes. The domain is `[0, 2^n - 3]` and the range
/// `[0, 2^n - 2]`, each shifted down by one from the 1-based statement.
/// Outputs equal to `2^n - 1` land outside the range and fill no hole.
#[derive(Debug, Clone)]
pub struct EmptyInstance {
    pub n: usize,
    pub f: Function,
}

impl EmptyInstance {
    pub fn new(n: usize, f: Function) -> Result<Self, InstanceError> {
        if !(2..=63).contains(&n) {
            return Err(InstanceError::Param(format!(
                "empty width {n} outside 2..=63"
            )));
        }
        check_fn(&f, "f", n, n)?;
        Ok(EmptyInstance { n, f })
    }

    pub fn domain_size(&self) -> u64 {
        pow2(self.n) - 2
    }

    pub fn range_size(&self) -> u64 {
        pow2(self.n) - 1
    }

    /// Exhaustive check that `e` has no preimage.
    pub(crate) fn check(&self, e: u64) -> Check {
        if self.n > DESK_SCALE_BITS {
            return Err(Reason::DeskScaleExceeded { bits: self.n });
        }
        below(e, self.range_size())?;
        match (0..self.domain_size()).find(|&x| self.f.call(x) == e) {
            Some(preimage) => Err(Reason::HasPreimage { value: e, preimage }),
            None => Ok(()),
        }
    }
}
