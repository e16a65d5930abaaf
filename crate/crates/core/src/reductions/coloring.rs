//! Reductions among the bad-coloring, Turán and bad k-set problems.

use serde_json::Value;

use crate::function::{ceil_log2, BitVec, Function};
use crate::problems::{
    edge_count, index_width, node_width, BadColoringInstance, BadKSetInstance, Certificate,
    EdgeList, Instance, Kind, TuranInstance,
};

use super::{mismatch, unexpected, Outcome, Pullback, ReduceError, Reduction};

fn pack_edge(u: u64, v: u64, w: usize) -> u64 {
    u | (v << w)
}

/// `E(i) = (D(a_i), D(b_i) + 2^n)` with `a_i = ⌊i/2^n⌋`, `b_i = i mod 2^n`,
/// plus the extra edge `(0, 2^n)`. Nodes are colored by the half they lie in.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollisionToBad2Coloring;

impl CollisionToBad2Coloring {
    fn split(n: usize, i: u64) -> (u64, u64) {
        (i >> n, i & ((1u64 << n) - 1))
    }
}

impl Reduction for CollisionToBad2Coloring {
    fn name(&self) -> &'static str {
        "collision->bad2coloring"
    }

    fn source(&self) -> Kind {
        Kind::Collision
    }

    fn target(&self) -> Kind {
        Kind::BadColoring
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Collision(c) = src else {
            return Err(mismatch(Kind::Collision, src));
        };
        let n = c.n;
        let (count, w) = (edge_count(2, n), node_width(2, n));
        let half = 1u64 << n;
        let d = c.f.clone();
        let edges =
            Function::from_u64_fn("halves edge list", index_width(count), 2 * w, move |i| {
                if i + 1 >= count {
                    return pack_edge(0, half, w);
                }
                let (a, b) = Self::split(n, i);
                pack_edge(d.call(a), d.call(b) + half, w)
            });
        let coloring = Function::from_u64_fn("half", w, 1, move |v| v >> n);
        let target = BadColoringInstance::new(2, n, edges, coloring)?;
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
        let Certificate::EdgeDup(i, j) = *cert else {
            return Err(unexpected(self.name(), cert));
        };
        let sentinel = edge_count(2, c.n) - 1;
        let (i, j) = (i.min(j), i.max(j));
        if j == sentinel {
            return Ok(Certificate::Zero(Self::split(c.n, i).0).into());
        }
        let ((ai, bi), (aj, bj)) = (Self::split(c.n, i), Self::split(c.n, j));
        if ai != aj {
            Ok(Certificate::Collision(ai, aj).into())
        } else if bi != bj {
            Ok(Certificate::Collision(bi, bj).into())
        } else {
            Err(unexpected(self.name(), cert))
        }
    }
}

/// Same edge list, coloring dropped. A `(k+1)`-clique has two nodes of one color.
#[derive(Debug, Clone, Copy, Default)]
pub struct BadColoringToTuran;

impl Reduction for BadColoringToTuran {
    fn name(&self) -> &'static str {
        "bad_coloring->turan"
    }

    fn source(&self) -> Kind {
        Kind::BadColoring
    }

    fn target(&self) -> Kind {
        Kind::Turan
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::BadColoring(g) = src else {
            return Err(mismatch(Kind::BadColoring, src));
        };
        let target = TuranInstance::new(g.k(), g.n(), g.edges.edges.clone())?;
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
        let Instance::BadColoring(g) = src else {
            return Err(mismatch(Kind::BadColoring, src));
        };
        match cert {
            Certificate::EdgeError(_) | Certificate::EdgeDup(..) => Ok(cert.clone().into()),
            Certificate::CliqueEdges(idx) => idx
                .iter()
                .copied()
                .find(|&i| {
                    g.edges
                        .edge(i)
                        .is_some_and(|(u, v)| g.color(u) == g.color(v))
                })
                .map(|i| Certificate::BadEdge(i).into())
                .ok_or_else(|| {
                    ReduceError::Internal(format!(
                        "{}: clique colored with all distinct colors",
                        self.name()
                    ))
                }),
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// Adds a class `W` of `2^n` nodes joined to every old node. Old indices keep
/// their edge (invalid ones become `(0, 0)`); index `count_k + v·2^n + w`
/// carries the edge `(v, k·2^n + w)`.
fn lifted_edges(old: &EdgeList) -> Function {
    let (k, n) = (old.k, old.n);
    let (old_count, new_count) = (edge_count(k, n), edge_count(k + 1, n));
    let w = node_width(k + 1, n);
    let base = k as u64 * (1u64 << n);
    let old = old.clone();
    Function::from_u64_fn(
        "lifted edge list",
        index_width(new_count),
        2 * w,
        move |i| {
            if i < old_count {
                old.edge(i).map_or(0, |_| {
                    let (u, v) = old.raw(i);
                    pack_edge(u, v, w)
                })
            } else if i < new_count {
                let t = i - old_count;
                pack_edge(t >> n, base + (t & ((1u64 << n) - 1)), w)
            } else {
                0
            }
        },
    )
}

/// Old indices that survive into the source instance; anything in the new
/// block has no preimage.
fn pull_edge_cert(name: &str, old: &EdgeList, cert: &Certificate) -> Result<Pullback, ReduceError> {
    let old_count = old.count();
    let in_old = |i: u64| {
        if i < old_count {
            Ok(i)
        } else {
            Err(unexpected(name, cert))
        }
    };
    match *cert {
        Certificate::EdgeError(i) => Ok(Certificate::EdgeError(in_old(i)?).into()),
        Certificate::EdgeDup(i, j) => {
            let (i, j) = (in_old(i)?, in_old(j)?);
            if let Some(bad) = [i, j].into_iter().find(|&x| old.edge(x).is_none()) {
                Ok(Certificate::EdgeError(bad).into())
            } else {
                Ok(Certificate::EdgeDup(i, j).into())
            }
        }
        _ => Err(unexpected(name, cert)),
    }
}

fn lifted_coloring(k: usize, n: usize, old: Function) -> Function {
    let base = k as u64 * (1u64 << n);
    Function::from_u64_fn(
        "lifted coloring",
        node_width(k + 1, n),
        ceil_log2(k as u64 + 1),
        move |v| {
            if v >= base {
                k as u64
            } else {
                old.call(v).min(k as u64 - 1)
            }
        },
    )
}

/// Bad `k`-coloring to bad `(k+1)`-coloring; `W` gets the new color.
#[derive(Debug, Clone, Copy, Default)]
pub struct LiftBadColoring;

impl Reduction for LiftBadColoring {
    fn name(&self) -> &'static str {
        "bad_coloring->lift"
    }

    fn source(&self) -> Kind {
        Kind::BadColoring
    }

    fn target(&self) -> Kind {
        Kind::BadColoring
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::BadColoring(g) = src else {
            return Err(mismatch(Kind::BadColoring, src));
        };
        let (k, n) = (g.k(), g.n());
        let target = BadColoringInstance::new(
            k + 1,
            n,
            lifted_edges(&g.edges),
            lifted_coloring(k, n, g.coloring.clone()),
        )?;
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
        let Instance::BadColoring(g) = src else {
            return Err(mismatch(Kind::BadColoring, src));
        };
        match *cert {
            Certificate::BadEdge(i) if i < g.edges.count() => Ok(Certificate::BadEdge(i).into()),
            _ => pull_edge_cert(self.name(), &g.edges, cert),
        }
    }
}

/// Turán at `k` to Turán at `k+1`. A `(k+2)`-clique has at most one node in
/// the independent class `W`; the rest lies inside the old graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct LiftTuran;

impl Reduction for LiftTuran {
    fn name(&self) -> &'static str {
        "turan->lift"
    }

    fn source(&self) -> Kind {
        Kind::Turan
    }

    fn target(&self) -> Kind {
        Kind::Turan
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Turan(g) = src else {
            return Err(mismatch(Kind::Turan, src));
        };
        let target = TuranInstance::new(g.k() + 1, g.n(), lifted_edges(&g.edges))?;
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
        let Instance::Turan(g) = src else {
            return Err(mismatch(Kind::Turan, src));
        };
        let Certificate::CliqueEdges(idx) = cert else {
            return pull_edge_cert(self.name(), &g.edges, cert);
        };
        let old_nodes = g.edges.nodes();
        let old_count = g.edges.count();
        let mut nodes: Vec<u64> = Vec::new();
        let mut edges = Vec::with_capacity(idx.len());
        for &i in idx {
            let (u, v) = if i < old_count {
                g.edges
                    .edge(i)
                    .ok_or_else(|| unexpected(self.name(), cert))?
            } else {
                let t = i - old_count;
                (t >> g.n(), old_nodes + (t & ((1u64 << g.n()) - 1)))
            };
            edges.push((i, u, v));
            nodes.extend([u, v]);
        }
        nodes.sort_unstable();
        nodes.dedup();
        let kept: Vec<u64> = nodes
            .into_iter()
            .filter(|&v| v < old_nodes)
            .take(g.k() + 1)
            .collect();
        if kept.len() != g.k() + 1 {
            return Err(ReduceError::Internal(format!(
                "{}: clique has fewer than {} old nodes",
                self.name(),
                g.k() + 1
            )));
        }
        let picked: Vec<u64> = edges
            .iter()
            .filter(|&&(_, u, v)| kept.contains(&u) && kept.contains(&v))
            .map(|&(i, ..)| i)
            .collect();
        if picked.len() != g.clique_edges() {
            return Err(ReduceError::Internal(format!(
                "{}: clique edges do not cover the kept nodes",
                self.name()
            )));
        }
        Ok(Certificate::CliqueEdges(picked).into())
    }
}

/// `F'(i) = (F(a_i), b_i + k·2^n)` with `a_i = ⌊i/2^n⌋`, `b_i = i mod 2^n`.
/// A source set with an out-of-range member becomes `k+1` copies of its
/// `W` node, which is bad again.
#[derive(Debug, Clone, Copy, Default)]
pub struct KSetLift;

impl Reduction for KSetLift {
    fn name(&self) -> &'static str {
        "bad_kset->lift"
    }

    fn source(&self) -> Kind {
        Kind::BadKSet
    }

    fn target(&self) -> Kind {
        Kind::BadKSet
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::BadKSet(s) = src else {
            return Err(mismatch(Kind::BadKSet, src));
        };
        let (k, n) = (s.k, s.n);
        let w = node_width(k + 1, n);
        let base = k as u64 * (1u64 << n);
        let old = s.clone();
        let sets = Function::wrapper(
            "lifted sets",
            BadKSetInstance::index_width_for(k + 1, n),
            (k + 1) * w,
            move |x| {
                let i = x.to_u64().unwrap();
                let (a, b) = (i >> n, i & ((1u64 << n) - 1));
                let extra = base + b;
                let members = if a < old.count() {
                    old.members(a)
                } else {
                    vec![0; k]
                };
                let out = if members.iter().any(|&v| v >= base) {
                    vec![extra; k + 1]
                } else {
                    members.into_iter().chain(std::iter::once(extra)).collect()
                };
                BitVec::pack(&out, w)
            },
        );
        let target =
            BadKSetInstance::new(k + 1, n, sets, lifted_coloring(k, n, s.coloring.clone()))?;
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
        let Instance::BadKSet(s) = src else {
            return Err(mismatch(Kind::BadKSet, src));
        };
        let n = s.n;
        let out_of_range = |a: u64| s.members(a).iter().any(|&v| v >= s.nodes());
        match *cert {
            Certificate::BadSet(i) if i >> n < s.count() => Ok(Certificate::BadSet(i >> n).into()),
            Certificate::SetDup(i, j) if i >> n < s.count() && j >> n < s.count() => {
                let (a, b) = (i >> n, j >> n);
                if let Some(bad) = [a, b].into_iter().find(|&x| out_of_range(x)) {
                    Ok(Certificate::BadSet(bad).into())
                } else if a != b {
                    Ok(Certificate::SetDup(a, b).into())
                } else {
                    Err(unexpected(self.name(), cert))
                }
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}

/// With `k = 1` every set is a single node: `F(i) = C(i)`, and the extra
/// set `F(2^n) = 0` collides with any zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollisionToBadKSet;

impl Reduction for CollisionToBadKSet {
    fn name(&self) -> &'static str {
        "collision->bad_kset"
    }

    fn source(&self) -> Kind {
        Kind::Collision
    }

    fn target(&self) -> Kind {
        Kind::BadKSet
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Collision(c) = src else {
            return Err(mismatch(Kind::Collision, src));
        };
        let n = c.n;
        let f = c.f.clone();
        let sets = Function::from_u64_fn(
            "singletons",
            BadKSetInstance::index_width_for(1, n),
            node_width(1, n),
            move |i| {
                if i >> n == 0 {
                    f.call(i)
                } else {
                    0
                }
            },
        );
        let target = BadKSetInstance::new(1, n, sets, Function::constant(node_width(1, n), 0, 0))?;
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
        let Certificate::SetDup(i, j) = *cert else {
            return Err(unexpected(self.name(), cert));
        };
        let (i, j) = (i.min(j), i.max(j));
        if j == c.domain() {
            Ok(Certificate::Zero(i).into())
        } else {
            Ok(Certificate::Collision(i, j).into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{verify, CollisionInstance};

    fn collision(n: usize, table: Vec<u64>) -> Instance {
        CollisionInstance::new(n, Function::from_table(n, table).unwrap())
            .unwrap()
            .into()
    }

    fn reduce(r: &dyn Reduction, src: &Instance) -> Instance {
        match r.forward(src).unwrap() {
            Outcome::Reduced { target, .. } => target,
            Outcome::Immediate(c) => panic!("unexpected immediate {c:?}"),
        }
    }

    #[test]
    fn zero_map_collides_with_sentinel_edge() {
        let src = collision(2, vec![0; 4]);
        let t = reduce(&CollisionToBad2Coloring, &src);
        let Instance::BadColoring(g) = &t else {
            panic!()
        };
        assert_eq!(g.edges.count(), 17);
        for i in 0..17 {
            assert_eq!(g.edges.edge(i), Some((0, 4)));
        }
        let cert = Certificate::EdgeDup(5, 16);
        assert!(verify(&t, &cert).accepted);
        let back = CollisionToBad2Coloring
            .pullback(&src, &Value::Null, &cert)
            .unwrap()
            .certificate;
        assert_eq!(back, Certificate::Zero(1));
    }

    #[test]
    fn lift_keeps_old_block() {
        let src = collision(2, vec![1, 2, 3, 1]);
        let bad2 = reduce(&CollisionToBad2Coloring, &src);
        let bad3 = reduce(&LiftBadColoring, &bad2);
        let (Instance::BadColoring(g2), Instance::BadColoring(g3)) = (&bad2, &bad3) else {
            panic!()
        };
        assert_eq!(g3.edges.count(), g2.edges.count() + 2 * 16);
        for i in 0..g2.edges.count() {
            assert_eq!(g3.edges.edge(i), g2.edges.edge(i));
        }
        // index count_2 + v*4 + w joins v to 8 + w
        assert_eq!(g3.edges.edge(17 + 5 * 4 + 3), Some((5, 11)));
        assert_eq!(g3.color(9), 2);
    }

    #[test]
    fn clique_maps_to_bad_edge() {
        // triangle 0-1-2 with colors (0, 0, 1)
        let table: Vec<u64> = (0..5)
            .map(|i| [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)][i])
            .map(|(u, v)| u | v << 2)
            .collect();
        let mut full = table;
        full.resize(8, 0);
        let edges = Function::from_table(4, full).unwrap();
        let coloring = Function::from_table(1, vec![0, 0, 1, 1]).unwrap();
        let src: Instance = BadColoringInstance::new(2, 1, edges, coloring)
            .unwrap()
            .into();
        let back = BadColoringToTuran
            .pullback(&src, &Value::Null, &Certificate::CliqueEdges(vec![0, 1, 2]))
            .unwrap();
        assert_eq!(back.certificate, Certificate::BadEdge(0));
    }
}
