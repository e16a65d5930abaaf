use crate::function::ceil_log2;
use crate::problems::{Certificate, EdgeColoring};

use super::walk::majority_walk;
use super::{Meter, SolveBudget, SolveError};

/// Output of the sequence construction. Each `subsample[m]` sees the single
/// color `colors[m]` on every edge to a later subsampled node; the last
/// subsampled node has no color of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseySequence {
    pub sequence: Vec<u64>,
    pub subsample: Vec<u64>,
    pub colors: Vec<u64>,
}

/// Runs the Long Choice majority walk on the bit predicates of the coloring:
/// predicate `i` reads bit `i - k` of `color(a_k, x)` with `k` the start of
/// `i`'s block of `log2 r` predicates. Every `log2 r`-th node is kept.
pub fn solve_ramsey_sequence<G: EdgeColoring + ?Sized>(
    g: &G,
    budget: SolveBudget,
) -> Result<RamseySequence, SolveError> {
    let r = g.colors();
    let bits = ceil_log2(r);
    if bits == 0 {
        return Err(SolveError::Unsupported(
            "a single color needs no sequence".into(),
        ));
    }
    let (w, n) = (g.node_width(), g.target());
    let kept = r as usize * (n - 1) + 1;
    if (kept - 1) * bits + 1 > w {
        return Err(SolveError::Unsupported(format!(
            "node width {w} cannot fit {kept} subsampled nodes at {bits} bits per color"
        )));
    }
    let mut meter = Meter::new(budget);
    let universe = meter.universe(w)?;
    let trace = majority_walk(universe, None, w - 1, &mut meter, |i, prefix, x| {
        let k = i / bits * bits;
        (g.edge_color(prefix[k], x) >> (i - k)) & 1 == 1
    })?;
    let subsample: Vec<u64> = (0..kept).map(|m| trace.sequence[m * bits]).collect();
    let colors: Vec<u64> = subsample
        .windows(2)
        .map(|p| g.edge_color(p[0], p[1]))
        .collect();
    for (m, (&a, &c)) in subsample.iter().zip(&colors).enumerate() {
        if let Some(&b) = subsample
            .iter()
            .skip(m + 2)
            .find(|&&b| g.edge_color(a, b) != c)
        {
            return Err(SolveError::Internal(format!(
                "node {a} sees two colors, the second towards {b}"
            )));
        }
    }
    Ok(RamseySequence {
        sequence: trace.sequence,
        subsample,
        colors,
    })
}

/// Pigeonholes the forward colors: the largest color class (ties to the
/// lowest color) plus the final node, cut to `n` nodes.
pub fn extract_clique(
    subsample: &[u64],
    colors: &[u64],
    r: u64,
    n: usize,
) -> Result<Certificate, SolveError> {
    if subsample.is_empty() || colors.len() + 1 != subsample.len() {
        return Err(SolveError::Internal(
            "one forward color per non-final node expected".into(),
        ));
    }
    let mut counts = vec![0usize; r as usize];
    for &c in colors {
        *counts
            .get_mut(c as usize)
            .ok_or_else(|| SolveError::Internal(format!("color {c} out of range")))? += 1;
    }
    let best = (0..r as usize)
        .max_by_key(|&c| (counts[c], std::cmp::Reverse(c)))
        .unwrap_or(0) as u64;
    let mut nodes: Vec<u64> = subsample
        .iter()
        .zip(colors)
        .filter(|&(_, &c)| c == best)
        .map(|(&v, _)| v)
        .collect();
    nodes.push(*subsample.last().unwrap());
    if nodes.len() < n {
        return Err(SolveError::Internal(format!(
            "largest color class holds {} of {n} nodes",
            nodes.len()
        )));
    }
    nodes.truncate(n);
    Ok(Certificate::Clique { color: best, nodes })
}

/// Monochromatic clique of the target size.
pub fn solve_ramsey<G: EdgeColoring + ?Sized>(
    g: &G,
    budget: SolveBudget,
) -> Result<Certificate, SolveError> {
    if g.colors() == 1 {
        let nodes: Vec<u64> = (0..g.target() as u64).collect();
        if g.node_width() < 63 && (nodes.len() as u64) > 1u64 << g.node_width() {
            return Err(SolveError::Internal(
                "fewer nodes than the clique target".into(),
            ));
        }
        return Ok(Certificate::Clique { color: 0, nodes });
    }
    let seq = solve_ramsey_sequence(g, budget)?;
    extract_clique(&seq.subsample, &seq.colors, g.colors(), g.target())
}
