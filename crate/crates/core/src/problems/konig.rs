use crate::function::Function;

use super::{below, check_fn, pow2, Certificate, Check, InstanceError, KonigCert, Reason};

/// Rooted binary tree on `2^n` nodes given by a parent map. The parent
/// output holds the parent node in its low `n` bits and the side (0 left,
/// 1 right) in bit `n`.
#[derive(Debug, Clone)]
pub struct KonigInstance {
    pub n: usize,
    pub parent: Function,
    pub root: u64,
}

impl KonigInstance {
    pub fn new(n: usize, parent: Function, root: u64) -> Result<Self, InstanceError> {
        if n == 0 || n > 62 {
            return Err(InstanceError::Param(format!(
                "tree width {n} outside 1..=62"
            )));
        }
        check_fn(&parent, "parent", n, n + 1)?;
        if root >= pow2(n) {
            return Err(InstanceError::Param(format!(
                "root {root} does not fit in {n} bits"
            )));
        }
        Ok(KonigInstance { n, parent, root })
    }

    pub fn nodes(&self) -> u64 {
        pow2(self.n)
    }

    /// `(parent node, side)`.
    pub fn parent_of(&self, u: u64) -> (u64, u64) {
        let out = self.parent.call(u);
        (out & (self.nodes() - 1), out >> self.n)
    }

    pub fn parent_node(&self, u: u64) -> u64 {
        self.parent_of(u).0
    }

    /// `s, P(s), ..., P^n(s)`.
    pub fn ancestors(&self, s: u64) -> Vec<u64> {
        let mut path = Vec::with_capacity(self.n + 1);
        let mut u = s;
        path.push(u);
        for _ in 0..self.n {
            u = self.parent_node(u);
            path.push(u);
        }
        path
    }

    pub(crate) fn check(&self, cert: &KonigCert) -> Check {
        match *cert {
            KonigCert::IdenticalChildren(a, b) => {
                below(a, self.nodes())?;
                below(b, self.nodes())?;
                if a == b {
                    return Err(Reason::NotDistinct(a));
                }
                // a root is nobody's child, whatever its side bit says
                for x in [a, b] {
                    if self.parent_node(x) == x {
                        return Err(Reason::EntryInvalid(x));
                    }
                }
                if self.parent.call(a) == self.parent.call(b) {
                    Ok(())
                } else {
                    Err(Reason::NotEqual(a, b))
                }
            }
            KonigCert::InvalidRoot => {
                if self.parent_node(self.root) != self.root {
                    Ok(())
                } else {
                    Err(Reason::RootValid)
                }
            }
            KonigCert::NonUniqueRoot(s) => {
                below(s, self.nodes())?;
                if s == self.root {
                    return Err(Reason::NotDistinct(s));
                }
                if self.parent_node(s) == s {
                    Ok(())
                } else {
                    Err(Reason::NotARoot(s))
                }
            }
            KonigCert::FarAway(s) => {
                below(s, self.nodes())?;
                if self.ancestors(s).contains(&self.root) {
                    Err(Reason::ReachesRoot(s))
                } else {
                    Ok(())
                }
            }
            KonigCert::LongPath(s) => {
                below(s, self.nodes())?;
                let path = self.ancestors(s);
                let mut sorted = path.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if path[self.n] == self.root && sorted.len() == path.len() {
                    Ok(())
                } else {
                    Err(Reason::NotLongPath(s))
                }
            }
        }
    }
}

/// `2^n` slots over the universe `{0,1}^n`, each holding two elements.
/// A slot is a valid 2-set iff its elements differ.
#[derive(Debug, Clone)]
pub struct EkrInstance {
    pub n: usize,
    pub f: Function,
}

impl EkrInstance {
    pub fn new(n: usize, f: Function) -> Result<Self, InstanceError> {
        if n == 0 || n > 31 {
            return Err(InstanceError::Param(format!(
                "set system width {n} outside 1..=31"
            )));
        }
        check_fn(&f, "F", n, 2 * n)?;
        Ok(EkrInstance { n, f })
    }

    pub fn indices(&self) -> u64 {
        pow2(self.n)
    }

    /// The two stored elements, ordered `(min, max)`.
    pub fn pair(&self, i: u64) -> (u64, u64) {
        let out = self.f.call(i);
        let mask = pow2(self.n) - 1;
        let (a, b) = (out & mask, out >> self.n);
        (a.min(b), a.max(b))
    }

    pub fn is_valid(&self, i: u64) -> bool {
        let (a, b) = self.pair(i);
        a != b
    }

    pub(crate) fn check(&self, cert: &Certificate) -> Check {
        let two = |i: u64, j: u64| -> Check {
            below(i, self.indices())?;
            below(j, self.indices())?;
            if i == j {
                Err(Reason::NotDistinct(i))
            } else {
                Ok(())
            }
        };
        match *cert {
            Certificate::EkrError(i) => {
                below(i, self.indices())?;
                if self.is_valid(i) {
                    Err(Reason::EntryValid(i))
                } else {
                    Ok(())
                }
            }
            Certificate::EkrDup(i, j) => {
                two(i, j)?;
                if self.pair(i) == self.pair(j) {
                    Ok(())
                } else {
                    Err(Reason::NotEqual(i, j))
                }
            }
            Certificate::EkrDisjoint(i, j) => {
                two(i, j)?;
                for x in [i, j] {
                    if !self.is_valid(x) {
                        return Err(Reason::EntryInvalid(x));
                    }
                }
                let ((a, b), (c, d)) = (self.pair(i), self.pair(j));
                if a != c && a != d && b != c && b != d {
                    Ok(())
                } else {
                    Err(Reason::NotDisjoint(i, j))
                }
            }
            _ => unreachable!("dispatch admits only set-system certificates"),
        }
    }
}
