use std::collections::BTreeSet;

use crate::function::{ceil_log2, BitVec, Function};

use super::{below, check_fn, distinct, pow2, Certificate, Check, InstanceError, Reason};

pub const RED: u64 = 0;
pub const BLUE: u64 = 1;

/// Two-colored graph on `2^(2n)` nodes given by a one-bit `edge(a, b)`.
/// The edge `{a, b}` is blue (1) iff `edge(a, b) = edge(b, a) = 1`.
#[derive(Debug, Clone)]
pub struct Ramsey2Instance {
    pub n: usize,
    pub edge: Function,
}

impl Ramsey2Instance {
    pub fn new(n: usize, edge: Function) -> Result<Self, InstanceError> {
        if n == 0 || 2 * n > 62 {
            return Err(InstanceError::Param(format!(
                "clique target {n} outside 1..=31"
            )));
        }
        check_fn(&edge, "edge", 4 * n, 1)?;
        Ok(Ramsey2Instance { n, edge })
    }

    pub fn node_width(&self) -> usize {
        2 * self.n
    }

    pub fn nodes(&self) -> u64 {
        pow2(self.node_width())
    }

    pub fn color(&self, a: u64, b: u64) -> u64 {
        edge_color2(self, a, b)
    }

    pub(crate) fn check_clique(&self, color: u64, nodes: &[u64]) -> Check {
        check_clique(self.n, self.nodes(), 2, color, nodes, |a, b| {
            self.color(a, b)
        })
    }
}

/// Symmetric edge color of a [`Ramsey2Instance`]. Panics if `a == b`.
pub fn edge_color2(inst: &Ramsey2Instance, a: u64, b: u64) -> u64 {
    assert_ne!(a, b, "edges join distinct nodes");
    let w = inst.node_width();
    let forward = inst.edge.apply(&BitVec::pack(&[a, b], w)).get(0);
    let backward = inst.edge.apply(&BitVec::pack(&[b, a], w)).get(0);
    if forward && backward {
        BLUE
    } else {
        RED
    }
}

fn check_clique(
    target: usize,
    nodes_total: u64,
    colors: u64,
    color: u64,
    nodes: &[u64],
    edge: impl Fn(u64, u64) -> u64,
) -> Check {
    if nodes.len() != target {
        return Err(Reason::WrongLength {
            expected: target,
            got: nodes.len(),
        });
    }
    below(color, colors)?;
    for &v in nodes {
        below(v, nodes_total)?;
    }
    distinct(nodes)?;
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if edge(a, b) != color {
                return Err(Reason::WrongColor { a, b });
            }
        }
    }
    Ok(())
}

/// `r`-colored complete graph on `2^node_width` nodes; the color of `{a, b}`
/// is `color(min, max)`.
#[derive(Debug, Clone)]
pub struct RamseyRInstance {
    pub r: u64,
    pub n: usize,
    pub node_width: usize,
    pub color: Function,
}

impl RamseyRInstance {
    pub fn new(
        r: u64,
        n: usize,
        node_width: usize,
        color: Function,
    ) -> Result<Self, InstanceError> {
        if !r.is_power_of_two() {
            return Err(InstanceError::Param(format!(
                "color count {r} is not a power of two"
            )));
        }
        if n == 0 || node_width > 62 {
            return Err(InstanceError::Param(format!(
                "clique target {n} or node width {node_width} unsupported"
            )));
        }
        check_fn(&color, "color", 2 * node_width, Self::color_width_for(r))?;
        Ok(RamseyRInstance {
            r,
            n,
            node_width,
            color,
        })
    }

    pub fn color_width_for(r: u64) -> usize {
        ceil_log2(r)
    }

    /// `r * n * log2(r)`, the width at which a monochromatic clique is guaranteed.
    pub fn default_width(r: u64, n: usize) -> usize {
        r as usize * n * ceil_log2(r)
    }

    /// Narrower than the default width: existence is no longer guaranteed.
    pub fn is_weakened(&self) -> bool {
        self.node_width < Self::default_width(self.r, self.n)
    }

    pub fn nodes(&self) -> u64 {
        pow2(self.node_width)
    }

    pub fn edge_color(&self, a: u64, b: u64) -> u64 {
        assert_ne!(a, b, "edges join distinct nodes");
        let (lo, hi) = (a.min(b), a.max(b));
        self.color.call_args(&[lo, hi], self.node_width)
    }

    pub(crate) fn check_clique(&self, color: u64, nodes: &[u64]) -> Check {
        check_clique(self.n, self.nodes(), self.r, color, nodes, |a, b| {
            self.edge_color(a, b)
        })
    }
}

/// Common view of the two Ramsey kinds: a complete graph on
/// `2^node_width` nodes with `colors` edge colors.
pub trait EdgeColoring {
    fn node_width(&self) -> usize;
    fn colors(&self) -> u64;
    /// Clique size sought.
    fn target(&self) -> usize;
    fn edge_color(&self, a: u64, b: u64) -> u64;
}

impl EdgeColoring for Ramsey2Instance {
    fn node_width(&self) -> usize {
        2 * self.n
    }

    fn colors(&self) -> u64 {
        2
    }

    fn target(&self) -> usize {
        self.n
    }

    fn edge_color(&self, a: u64, b: u64) -> u64 {
        edge_color2(self, a, b)
    }
}

impl EdgeColoring for RamseyRInstance {
    fn node_width(&self) -> usize {
        self.node_width
    }

    fn colors(&self) -> u64 {
        self.r
    }

    fn target(&self) -> usize {
        self.n
    }

    fn edge_color(&self, a: u64, b: u64) -> u64 {
        RamseyRInstance::edge_color(self, a, b)
    }
}

/// `|A Δ B| / 2` for two `k`-sets. Panics on ragged or repeated input.
pub fn set_distance(a: &[u64], b: &[u64]) -> usize {
    assert_eq!(a.len(), b.len(), "sets of different sizes");
    let sa: BTreeSet<u64> = a.iter().copied().collect();
    let sb: BTreeSet<u64> = b.iter().copied().collect();
    assert!(
        sa.len() == a.len() && sb.len() == b.len(),
        "repeated element in a set"
    );
    sa.symmetric_difference(&sb).count() / 2
}

/// Family of `2^index_width` slots, each holding `k` elements of
/// `element_width` bits. A slot is a valid set iff its elements are distinct.
#[derive(Debug, Clone)]
pub struct SunflowerInstance {
    pub k: usize,
    pub index_width: usize,
    pub element_width: usize,
    pub f: Function,
}

impl SunflowerInstance {
    pub fn new(
        k: usize,
        index_width: usize,
        element_width: usize,
        f: Function,
    ) -> Result<Self, InstanceError> {
        if k == 0 || index_width > 62 || element_width > 64 {
            return Err(InstanceError::Param(format!(
                "unsupported sunflower parameters k={k}, widths {index_width}/{element_width}"
            )));
        }
        check_fn(&f, "F", index_width, k * element_width)?;
        Ok(SunflowerInstance {
            k,
            index_width,
            element_width,
            f,
        })
    }

    /// `k^3 * ceil(log2 k)`.
    pub fn default_width(k: usize) -> usize {
        k.pow(3) * ceil_log2(k as u64)
    }

    pub fn target(&self) -> usize {
        self.k * self.k
    }

    pub fn indices(&self) -> u64 {
        pow2(self.index_width)
    }

    /// Elements of slot `i` in stored order.
    pub fn slot(&self, i: u64) -> Vec<u64> {
        self.f
            .apply(&BitVec::from_u64(i, self.index_width))
            .unpack(self.element_width)
    }

    /// Sorted elements if slot `i` is a valid set.
    pub fn set(&self, i: u64) -> Option<Vec<u64>> {
        let mut s = self.slot(i);
        s.sort_unstable();
        let k = s.len();
        s.dedup();
        (s.len() == k).then_some(s)
    }

    pub(crate) fn check(&self, cert: &Certificate) -> Check {
        match cert {
            Certificate::SunflowerError(i) => {
                below(*i, self.indices())?;
                match self.set(*i) {
                    None => Ok(()),
                    Some(_) => Err(Reason::EntryValid(*i)),
                }
            }
            Certificate::SunflowerDup(i, j) => {
                below(*i, self.indices())?;
                below(*j, self.indices())?;
                if i == j {
                    return Err(Reason::NotDistinct(*i));
                }
                let (mut a, mut b) = (self.slot(*i), self.slot(*j));
                a.sort_unstable();
                b.sort_unstable();
                if a == b {
                    Ok(())
                } else {
                    Err(Reason::NotEqual(*i, *j))
                }
            }
            Certificate::Sunflower(idx) => self.check_sunflower(idx),
            _ => unreachable!("dispatch admits only sunflower certificates"),
        }
    }

    fn check_sunflower(&self, idx: &[u64]) -> Check {
        if idx.len() != self.target() {
            return Err(Reason::WrongLength {
                expected: self.target(),
                got: idx.len(),
            });
        }
        for &i in idx {
            below(i, self.indices())?;
        }
        distinct(idx)?;
        let mut sets = Vec::with_capacity(idx.len());
        for &i in idx {
            sets.push(self.set(i).ok_or(Reason::EntryInvalid(i))?);
        }
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                if sets[a] == sets[b] {
                    return Err(Reason::Duplicate(idx[a], idx[b]));
                }
            }
        }
        let meet = |a: &[u64], b: &[u64]| -> Vec<u64> {
            a.iter().filter(|x| b.contains(x)).copied().collect()
        };
        if sets.len() < 2 {
            return Ok(());
        }
        let core = meet(&sets[0], &sets[1]);
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                if meet(&sets[a], &sets[b]) != core {
                    return Err(Reason::NotSunflower(idx[a], idx[b]));
                }
            }
        }
        Ok(())
    }
}

/// `r`-coloring of the integers `1..=2^width`; integer `v` is encoded as
/// `v - 1`. Color values at or above `r` count as color `r - 1`.
#[derive(Debug, Clone)]
pub struct WeakSchurInstance {
    pub r: u64,
    pub width: usize,
    pub coloring: Function,
}

impl WeakSchurInstance {
    pub fn new(r: u64, width: usize, coloring: Function) -> Result<Self, InstanceError> {
        if r == 0 || width == 0 || width > 62 {
            return Err(InstanceError::Param(format!(
                "unsupported weak schur parameters r={r}, width={width}"
            )));
        }
        check_fn(&coloring, "C", width, ceil_log2(r))?;
        Ok(WeakSchurInstance { r, width, coloring })
    }

    /// `2 r log2 r`.
    pub fn default_width(r: u64) -> usize {
        2 * r as usize * ceil_log2(r)
    }

    /// Largest integer in the domain.
    pub fn top(&self) -> u64 {
        pow2(self.width)
    }

    /// Color of the integer `v`, `1 <= v <= 2^width`.
    pub fn color(&self, v: u64) -> u64 {
        assert!(v >= 1 && v <= self.top());
        self.coloring.call(v - 1).min(self.r - 1)
    }

    pub(crate) fn check(&self, a: u64, b: u64) -> Check {
        for v in [a, b] {
            if v == 0 {
                return Err(Reason::OutOfRange {
                    value: v,
                    bound: self.top() + 1,
                });
            }
        }
        if a.saturating_add(b) > self.top() {
            return Err(Reason::OutOfRange {
                value: a + b,
                bound: self.top() + 1,
            });
        }
        let c = self.color(a);
        if self.color(b) == c && self.color(a + b) == c {
            Ok(())
        } else {
            Err(Reason::NotMonochrome(a, b))
        }
    }
}
