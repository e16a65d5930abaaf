use crate::function::{bit_length, ceil_log2, BitVec, Function};

use super::{below, check_fn, distinct, pow2, Certificate, Check, InstanceError, Reason};

/// `C(k,2) * 4^n + 1` edge indices, numbered from 0.
pub fn edge_count(k: usize, n: usize) -> u64 {
    (k * (k - 1) / 2) as u64 * pow2(2 * n) + 1
}

/// Width of an encoding of `[0, count - 1]`.
pub fn index_width(count: u64) -> usize {
    bit_length(count - 1).max(1)
}

/// Nodes are `[0, k * 2^n - 1]`.
pub fn node_width(k: usize, n: usize) -> usize {
    index_width(k as u64 * pow2(n))
}

fn check_sizes(k: usize, n: usize, min_k: usize) -> Result<(), InstanceError> {
    if k < min_k || n == 0 || 2 * n + bit_length(k as u64 * k as u64) > 60 {
        return Err(InstanceError::Param(format!(
            "unsupported size k={k}, n={n}"
        )));
    }
    Ok(())
}

/// Shared edge list of the coloring and Turán problems. `E(i)` returns two
/// node encodings (first in the low bits); an edge is valid iff both nodes
/// are in range and differ.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub k: usize,
    pub n: usize,
    pub edges: Function,
}

impl EdgeList {
    fn new(k: usize, n: usize, edges: Function) -> Result<Self, InstanceError> {
        check_sizes(k, n, 2)?;
        check_fn(
            &edges,
            "E",
            index_width(edge_count(k, n)),
            2 * node_width(k, n),
        )?;
        Ok(EdgeList { k, n, edges })
    }

    pub fn count(&self) -> u64 {
        edge_count(self.k, self.n)
    }

    pub fn nodes(&self) -> u64 {
        self.k as u64 * pow2(self.n)
    }

    pub fn raw(&self, i: u64) -> (u64, u64) {
        let w = node_width(self.k, self.n);
        let out = self
            .edges
            .apply(&BitVec::from_u64(i, self.edges.input_width()));
        (out.read_u64(0, w), out.read_u64(w, w))
    }

    /// `(min, max)` if edge `i` is valid.
    pub fn edge(&self, i: u64) -> Option<(u64, u64)> {
        let (u, v) = self.raw(i);
        (u != v && u < self.nodes() && v < self.nodes()).then(|| (u.min(v), u.max(v)))
    }

    fn same(&self, i: u64, j: u64) -> bool {
        let ((a, b), (c, d)) = (self.raw(i), self.raw(j));
        (a.min(b), a.max(b)) == (c.min(d), c.max(d))
    }

    fn check_error(&self, i: u64) -> Check {
        below(i, self.count())?;
        match self.edge(i) {
            None => Ok(()),
            Some(_) => Err(Reason::EntryValid(i)),
        }
    }

    fn check_dup(&self, i: u64, j: u64) -> Check {
        below(i, self.count())?;
        below(j, self.count())?;
        if i == j {
            return Err(Reason::NotDistinct(i));
        }
        if self.same(i, j) {
            Ok(())
        } else {
            Err(Reason::NotEqual(i, j))
        }
    }
}

/// Graph on `k * 2^n` nodes with `C(k,2) * 4^n + 1` edges and a `k`-coloring.
/// Color values at or above `k` count as color `k - 1`.
#[derive(Debug, Clone)]
pub struct BadColoringInstance {
    pub edges: EdgeList,
    pub coloring: Function,
}

impl BadColoringInstance {
    pub fn new(
        k: usize,
        n: usize,
        edges: Function,
        coloring: Function,
    ) -> Result<Self, InstanceError> {
        let edges = EdgeList::new(k, n, edges)?;
        check_fn(&coloring, "C", node_width(k, n), ceil_log2(k as u64))?;
        Ok(BadColoringInstance { edges, coloring })
    }

    pub fn k(&self) -> usize {
        self.edges.k
    }

    pub fn n(&self) -> usize {
        self.edges.n
    }

    pub fn color(&self, node: u64) -> u64 {
        self.coloring.call(node).min(self.k() as u64 - 1)
    }

    pub(crate) fn check(&self, cert: &Certificate) -> Check {
        match *cert {
            Certificate::EdgeError(i) => self.edges.check_error(i),
            Certificate::EdgeDup(i, j) => self.edges.check_dup(i, j),
            Certificate::BadEdge(i) => {
                below(i, self.edges.count())?;
                let (u, v) = self.edges.edge(i).ok_or(Reason::EntryInvalid(i))?;
                if self.color(u) == self.color(v) {
                    Ok(())
                } else {
                    Err(Reason::ProperlyColored(i))
                }
            }
            _ => unreachable!("dispatch admits only edge certificates"),
        }
    }
}

/// Same edge list without a coloring: find a `(k+1)`-clique among the edges.
#[derive(Debug, Clone)]
pub struct TuranInstance {
    pub edges: EdgeList,
}

impl TuranInstance {
    pub fn new(k: usize, n: usize, edges: Function) -> Result<Self, InstanceError> {
        Ok(TuranInstance {
            edges: EdgeList::new(k, n, edges)?,
        })
    }

    pub fn k(&self) -> usize {
        self.edges.k
    }

    pub fn n(&self) -> usize {
        self.edges.n
    }

    /// `C(k+1, 2)`, the number of edges in a clique certificate.
    pub fn clique_edges(&self) -> usize {
        (self.k() + 1) * self.k() / 2
    }

    pub(crate) fn check(&self, cert: &Certificate) -> Check {
        match cert {
            Certificate::EdgeError(i) => self.edges.check_error(*i),
            Certificate::EdgeDup(i, j) => self.edges.check_dup(*i, *j),
            Certificate::CliqueEdges(idx) => {
                if idx.len() != self.clique_edges() {
                    return Err(Reason::WrongLength {
                        expected: self.clique_edges(),
                        got: idx.len(),
                    });
                }
                for &i in idx {
                    below(i, self.edges.count())?;
                }
                distinct(idx)?;
                let mut edges = Vec::with_capacity(idx.len());
                for &i in idx {
                    edges.push(self.edges.edge(i).ok_or(Reason::EntryInvalid(i))?);
                }
                for a in 0..edges.len() {
                    if let Some(b) = (a + 1..edges.len()).find(|&b| edges[a] == edges[b]) {
                        return Err(Reason::Duplicate(idx[a], idx[b]));
                    }
                }
                let mut nodes: Vec<u64> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
                nodes.sort_unstable();
                nodes.dedup();
                if nodes.len() == self.k() + 1 {
                    Ok(())
                } else {
                    Err(Reason::NotClique)
                }
            }
            _ => unreachable!("dispatch admits only edge certificates"),
        }
    }
}

/// `2^(kn) + 1` slots of `k` nodes each over `[0, k * 2^n - 1]`, plus a
/// `k`-coloring of the nodes. A slot is bad if two of its entries share a
/// color (entries may be identical) or if an entry is out of range.
#[derive(Debug, Clone)]
pub struct BadKSetInstance {
    pub k: usize,
    pub n: usize,
    pub sets: Function,
    pub coloring: Function,
}

impl BadKSetInstance {
    pub fn new(
        k: usize,
        n: usize,
        sets: Function,
        coloring: Function,
    ) -> Result<Self, InstanceError> {
        if k == 0 || n == 0 || k * n > 60 {
            return Err(InstanceError::Param(format!(
                "unsupported size k={k}, n={n}"
            )));
        }
        check_fn(
            &sets,
            "F",
            Self::index_width_for(k, n),
            k * node_width(k, n),
        )?;
        check_fn(&coloring, "C", node_width(k, n), ceil_log2(k as u64))?;
        Ok(BadKSetInstance {
            k,
            n,
            sets,
            coloring,
        })
    }

    pub fn index_width_for(k: usize, n: usize) -> usize {
        k * n + 1
    }

    pub fn count(&self) -> u64 {
        pow2(self.k * self.n) + 1
    }

    pub fn nodes(&self) -> u64 {
        self.k as u64 * pow2(self.n)
    }

    pub fn node_width(&self) -> usize {
        node_width(self.k, self.n)
    }

    pub fn members(&self, i: u64) -> Vec<u64> {
        self.sets
            .apply(&BitVec::from_u64(i, self.sets.input_width()))
            .unpack(self.node_width())
    }

    pub fn color(&self, node: u64) -> u64 {
        self.coloring.call(node).min(self.k as u64 - 1)
    }

    pub fn is_bad(&self, i: u64) -> bool {
        let m = self.members(i);
        if m.iter().any(|&v| v >= self.nodes()) {
            return true;
        }
        let mut colors: Vec<u64> = m.iter().map(|&v| self.color(v)).collect();
        colors.sort_unstable();
        colors.windows(2).any(|w| w[0] == w[1])
    }

    pub(crate) fn check(&self, cert: &Certificate) -> Check {
        match *cert {
            Certificate::BadSet(i) => {
                below(i, self.count())?;
                if self.is_bad(i) {
                    Ok(())
                } else {
                    Err(Reason::ProperlyColored(i))
                }
            }
            Certificate::SetDup(i, j) => {
                below(i, self.count())?;
                below(j, self.count())?;
                if i == j {
                    return Err(Reason::NotDistinct(i));
                }
                let (mut a, mut b) = (self.members(i), self.members(j));
                a.sort_unstable();
                b.sort_unstable();
                if a == b {
                    Ok(())
                } else {
                    Err(Reason::NotEqual(i, j))
                }
            }
            _ => unreachable!("dispatch admits only set certificates"),
        }
    }
}
