//! König trees and two-set systems against Collision.

use serde_json::{json, Value};

use crate::function::Function;
use crate::problems::{
    Certificate, CollisionInstance, EkrInstance, Instance, Kind, KonigCert, KonigInstance,
};
use crate::solvers::{for_each_certificate, SolveBudget};

use super::{aux_u64, mismatch, unexpected, Outcome, Pullback, ReduceError, Reduction};

/// The lower half of a `2^(n+1)`-node tree is a heap rooted at 0. Upper-half
/// node `s` pretends to be heap node `C(s - 2^n) + 2^n - 1`, so the upper
/// half and heap node `2^n - 1` compete for `2^n` child slots.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollisionToKonig;

/// `(parent, side)` of heap node `s >= 1`: left children are odd.
fn heap_parent(s: u64) -> (u64, u64) {
    ((s - 1) / 2, (s + 1) % 2)
}

impl CollisionToKonig {
    fn tree(c: &CollisionInstance) -> Result<KonigInstance, ReduceError> {
        let n = c.n;
        if n + 1 > 62 {
            return Err(ReduceError::Precondition(format!(
                "tree width {} too large",
                n + 1
            )));
        }
        let f = c.f.clone();
        let half = 1u64 << n;
        let parent = Function::from_u64_fn("heap and hash halves", n + 1, n + 2, move |s| {
            let (p, side) = match s {
                0 => (0, 0),
                s if s < half => heap_parent(s),
                s => heap_parent(f.call(s - half) + half - 1),
            };
            p | side << (n + 1)
        });
        Ok(KonigInstance::new(n + 1, parent, 0)?)
    }
}

impl Reduction for CollisionToKonig {
    fn name(&self) -> &'static str {
        "collision->konig"
    }

    fn source(&self) -> Kind {
        Kind::Collision
    }

    fn target(&self) -> Kind {
        Kind::Konig
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Collision(c) = src else {
            return Err(mismatch(Kind::Collision, src));
        };
        Ok(Outcome::Reduced {
            target: Self::tree(c)?.into(),
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
        let half = 1u64 << c.n;
        match cert {
            Certificate::Konig(KonigCert::IdenticalChildren(u, v)) => {
                let (u, v) = (*u.min(v), *u.max(v));
                match (u < half, v < half) {
                    (false, false) => Ok(Certificate::Collision(u - half, v - half).into()),
                    // only heap node 2^n - 1 shares a slot with the upper half
                    (true, false) if u == half - 1 => Ok(Certificate::Zero(v - half).into()),
                    _ => Err(ReduceError::Internal(format!(
                        "{}: nodes {u} and {v} cannot share a slot",
                        self.name()
                    ))),
                }
            }
            Certificate::Konig(KonigCert::LongPath(s)) => {
                // not reachable for accepted certificates (depth is at most n),
                // so fall back to searching the tree for identical children
                let tree: Instance = Self::tree(c)?.into();
                let mut found = None;
                for_each_certificate(&tree, SolveBudget::default(), &mut |t| {
                    if matches!(t, Certificate::Konig(KonigCert::IdenticalChildren(..))) {
                        found = Some(t);
                        false
                    } else {
                        true
                    }
                })?;
                let t = found.ok_or_else(|| {
                    ReduceError::Internal("tree has no identical children".into())
                })?;
                let mut pulled = self.pullback(src, _aux, &t)?;
                pulled.notes.push(format!(
                    "long path at node {s} answered by a brute-force identical-children search"
                ));
                Ok(pulled)
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// `C(x) = 1 +` heap index of `x`, or 0 when `x` witnesses a violation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KonigToCollision;

/// Walks from `x` towards the root; `Ok(path)` ends at the root within
/// `n - 1` steps, otherwise the violation found at `x`.
fn walk(t: &KonigInstance, x: u64) -> Result<Vec<u64>, KonigCert> {
    if t.parent_node(t.root) != t.root {
        return Err(KonigCert::InvalidRoot);
    }
    if x != t.root && t.parent_node(x) == x {
        return Err(KonigCert::NonUniqueRoot(x));
    }
    let path = t.ancestors(x);
    match path.iter().position(|&u| u == t.root) {
        None => Err(KonigCert::FarAway(x)),
        Some(d) if d == t.n => Err(KonigCert::LongPath(x)),
        Some(d) => Ok(path[..=d].to_vec()),
    }
}

fn heap_index(t: &KonigInstance, path: &[u64]) -> u64 {
    path[..path.len() - 1]
        .iter()
        .rev()
        .fold(0, |idx, &u| 2 * idx + 1 + t.parent_of(u).1)
}

impl Reduction for KonigToCollision {
    fn name(&self) -> &'static str {
        "konig->collision"
    }

    fn source(&self) -> Kind {
        Kind::Konig
    }

    fn target(&self) -> Kind {
        Kind::Collision
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Konig(t) = src else {
            return Err(mismatch(Kind::Konig, src));
        };
        let tree = t.clone();
        let f = Function::from_u64_fn("heap index", t.n, t.n, move |x| match walk(&tree, x) {
            Ok(path) => heap_index(&tree, &path) + 1,
            Err(_) => 0,
        });
        Ok(Outcome::Reduced {
            target: CollisionInstance::new(t.n, f)?.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let Instance::Konig(t) = src else {
            return Err(mismatch(Kind::Konig, src));
        };
        let violation = |x: u64| match walk(t, x) {
            Err(k) => Ok(Certificate::Konig(k).into()),
            Ok(_) => Err(ReduceError::Internal(format!(
                "{}: node {x} has a valid heap index",
                self.name()
            ))),
        };
        match *cert {
            Certificate::Zero(x) => violation(x),
            Certificate::Collision(x, y) => {
                let (px, py) = match (walk(t, x), walk(t, y)) {
                    (Ok(px), Ok(py)) => (px, py),
                    (Err(_), _) => return violation(x),
                    (_, Err(_)) => return violation(y),
                };
                if px.len() != py.len() {
                    return Err(ReduceError::Internal(format!(
                        "{}: equal indices at different depths",
                        self.name()
                    )));
                }
                // same index means same sides all the way down; the first
                // divergence from the root is a pair of identical children
                let j = (0..px.len())
                    .rev()
                    .find(|&j| px[j] != py[j])
                    .ok_or_else(|| {
                        ReduceError::Internal(format!("{}: paths never diverge", self.name()))
                    })?;
                Ok(Certificate::Konig(KonigCert::IdenticalChildren(px[j], py[j])).into())
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// `F(x) = {0, C(x)}`: every set holds 0, so none are disjoint.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollisionToEkr;

impl Reduction for CollisionToEkr {
    fn name(&self) -> &'static str {
        "collision->ekr"
    }

    fn source(&self) -> Kind {
        Kind::Collision
    }

    fn target(&self) -> Kind {
        Kind::Ekr
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Collision(c) = src else {
            return Err(mismatch(Kind::Collision, src));
        };
        let (f, n) = (c.f.clone(), c.n);
        let sets = Function::from_u64_fn("pair with zero", n, 2 * n, move |x| f.call(x) << n);
        Ok(Outcome::Reduced {
            target: EkrInstance::new(n, sets)?.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        _src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        match *cert {
            Certificate::EkrError(i) => Ok(Certificate::Zero(i).into()),
            Certificate::EkrDup(i, j) => Ok(Certificate::Collision(i, j).into()),
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// With `F(0) = {a, b}` and `F(1) = {b, c}`, sets through `b` map to their
/// other element and everything else to 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct EkrToCollision;

fn disjoint(p: (u64, u64), q: (u64, u64)) -> bool {
    p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
}

/// Other element of `(p, q)` next to `b`, shifted so that it is never 0.
fn partner(pair: (u64, u64), b: u64) -> u64 {
    let d = if pair.0 == b { pair.1 } else { pair.0 };
    if d < b {
        d + 1
    } else {
        d
    }
}

fn ekr_value(sys: &EkrInstance, b: u64, i: u64) -> u64 {
    let pair = sys.pair(i);
    if pair.0 == pair.1 || (pair.0 != b && pair.1 != b) {
        0
    } else {
        partner(pair, b)
    }
}

impl EkrToCollision {
    /// Case analysis for an index whose value is 0.
    fn zero_case(&self, sys: &EkrInstance, b: u64, x: u64) -> Result<Pullback, ReduceError> {
        if !sys.is_valid(x) {
            return Ok(Certificate::EkrError(x).into());
        }
        let (f0, f1, fx) = (sys.pair(0), sys.pair(1), sys.pair(x));
        if fx.0 == b || fx.1 == b || x < 2 {
            return Err(ReduceError::Internal(format!(
                "{}: index {x} maps to 0 without cause",
                self.name()
            )));
        }
        for i in [0, 1] {
            if disjoint(sys.pair(i), fx) {
                return Ok(Certificate::EkrDisjoint(i, x).into());
            }
        }
        // F(x) = {a, c}; a fourth set meeting {a,b}, {b,c} and {a,c} repeats one
        let y = (0..4).find(|y| ![0, 1, x].contains(y)).unwrap();
        if !sys.is_valid(y) {
            return Ok(Certificate::EkrError(y).into());
        }
        let fy = sys.pair(y);
        for (i, fi) in [(0, f0), (1, f1), (x, fx)] {
            if fi == fy {
                return Ok(Certificate::EkrDup(i.min(y), i.max(y)).into());
            }
        }
        for (i, fi) in [(0, f0), (1, f1), (x, fx)] {
            if disjoint(fi, fy) {
                return Ok(Certificate::EkrDisjoint(i.min(y), i.max(y)).into());
            }
        }
        Err(ReduceError::Internal(format!(
            "{}: probe {y} meets all three sets",
            self.name()
        )))
    }
}

impl Reduction for EkrToCollision {
    fn name(&self) -> &'static str {
        "ekr->collision"
    }

    fn source(&self) -> Kind {
        Kind::Ekr
    }

    fn target(&self) -> Kind {
        Kind::Collision
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Ekr(sys) = src else {
            return Err(mismatch(Kind::Ekr, src));
        };
        if sys.n < 2 {
            return Err(ReduceError::Precondition("need at least 4 sets".into()));
        }
        for i in [0, 1] {
            if !sys.is_valid(i) {
                return Ok(Outcome::Immediate(Certificate::EkrError(i)));
            }
        }
        let (f0, f1) = (sys.pair(0), sys.pair(1));
        if f0 == f1 {
            return Ok(Outcome::Immediate(Certificate::EkrDup(0, 1)));
        }
        if disjoint(f0, f1) {
            return Ok(Outcome::Immediate(Certificate::EkrDisjoint(0, 1)));
        }
        let b = if f0.0 == f1.0 || f0.0 == f1.1 {
            f0.0
        } else {
            f0.1
        };
        let a = if f0.0 == b { f0.1 } else { f0.0 };
        let c = if f1.0 == b { f1.1 } else { f1.0 };
        let owned = sys.clone();
        let f = Function::from_u64_fn("partner of b", sys.n, sys.n, move |i| {
            ekr_value(&owned, b, i)
        });
        Ok(Outcome::Reduced {
            target: CollisionInstance::new(sys.n, f)?.into(),
            aux: json!({"a": a, "b": b, "c": c}),
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let Instance::Ekr(sys) = src else {
            return Err(mismatch(Kind::Ekr, src));
        };
        let b = aux_u64(aux, "b")?;
        match *cert {
            Certificate::Zero(x) => self.zero_case(sys, b, x),
            Certificate::Collision(x, y) => {
                if ekr_value(sys, b, x) != 0 {
                    Ok(Certificate::EkrDup(x, y).into())
                } else {
                    self.zero_case(sys, b, x)
                }
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}
