use crate::problems::{Certificate, LongChoiceInstance, ShortChoiceInstance};

use super::{Meter, SolveBudget, SolveError};

/// One point of a choice walk: the prefix chosen so far and the candidates
/// still compatible with it. `candidates` is sorted and contains the last
/// prefix element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceWalkState {
    pub step: usize,
    pub candidates: Vec<u64>,
    pub prefix: Vec<u64>,
}

impl ChoiceWalkState {
    fn start(universe: u64, a0: u64) -> Self {
        ChoiceWalkState {
            step: 0,
            candidates: (0..universe).collect(),
            prefix: vec![a0],
        }
    }

    fn current(&self) -> u64 {
        self.prefix[self.step]
    }

    /// Candidates other than the current element, split by `pred` into
    /// the 0-side and the 1-side.
    fn partition(
        &self,
        meter: &mut Meter,
        mut pred: impl FnMut(usize, &[u64], u64) -> bool,
    ) -> Result<(Vec<u64>, Vec<u64>), SolveError> {
        let a = self.current();
        let rest: Vec<u64> = self
            .candidates
            .iter()
            .copied()
            .filter(|&x| x != a)
            .collect();
        meter.spend(rest.len() as u64)?;
        Ok(rest
            .into_iter()
            .partition(|&x| !pred(self.step, &self.prefix, x)))
    }

    fn advance(&mut self, side: Vec<u64>) {
        self.prefix.push(side[0]);
        self.candidates = side;
        self.step += 1;
    }
}

/// A finished majority walk. `set_sizes[i]` is `|S_i|`, the last entry
/// being the set the final element was drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub sequence: Vec<u64>,
    pub set_sizes: Vec<usize>,
}

/// Majority walk over `[0, universe)` with `steps` predicates. Returns
/// `steps + 2` elements where every later element agrees with `a_{i+1}` on
/// `pred(i, a_0..a_i, ·)`.
pub fn majority_walk(
    universe: u64,
    start: Option<u64>,
    steps: usize,
    meter: &mut Meter,
    mut pred: impl FnMut(usize, &[u64], u64) -> bool,
) -> Result<WalkTrace, SolveError> {
    meter.enumerate(universe)?;
    let a0 = start.unwrap_or(0);
    if a0 >= universe {
        return Err(SolveError::Internal(format!(
            "start element {a0} outside the universe"
        )));
    }
    let mut state = ChoiceWalkState::start(universe, a0);
    let mut set_sizes = vec![state.candidates.len()];
    for _ in 0..steps {
        let (zeros, ones) = state.partition(meter, &mut pred)?;
        let side = if ones.len() > zeros.len() {
            ones
        } else {
            zeros
        };
        if side.is_empty() {
            return Err(SolveError::Internal(format!(
                "majority walk emptied at step {}",
                state.step
            )));
        }
        state.advance(side);
        set_sizes.push(state.candidates.len());
    }
    let a = state.current();
    let last = state
        .candidates
        .iter()
        .copied()
        .find(|&x| x != a)
        .ok_or_else(|| SolveError::Internal("majority walk has no final element".into()))?;
    state.prefix.push(last);
    Ok(WalkTrace {
        sequence: state.prefix,
        set_sizes,
    })
}

pub fn trace_long_choice_majority(
    inst: &LongChoiceInstance,
    budget: SolveBudget,
) -> Result<WalkTrace, SolveError> {
    let mut meter = Meter::new(budget);
    let universe = meter.universe(inst.n)?;
    majority_walk(
        universe,
        inst.start(),
        inst.n - 1,
        &mut meter,
        |i, prefix, x| inst.predicate(i, prefix, x),
    )
}

pub fn solve_long_choice_majority(
    inst: &LongChoiceInstance,
    budget: SolveBudget,
) -> Result<Certificate, SolveError> {
    trace_long_choice_majority(inst, budget).map(|t| Certificate::ChoiceSeq(t.sequence))
}

/// A finished minority walk. `set_sizes[j]` is `|U_j|`, which includes `a_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorityTrace {
    pub prefix: Vec<u64>,
    pub c: bool,
    pub set_sizes: Vec<usize>,
}

pub fn trace_short_choice_minority(
    inst: &ShortChoiceInstance,
    budget: SolveBudget,
) -> Result<MinorityTrace, SolveError> {
    let mut meter = Meter::new(budget);
    let universe = meter.universe(inst.n)? - 2;
    let mut state = ChoiceWalkState::start(universe, 0);
    let mut set_sizes = vec![state.candidates.len()];
    // the prefix may grow to n - 1 elements, so predicates 0..=n-2 are read
    while state.step < inst.n - 1 {
        let (zeros, ones) =
            state.partition(&mut meter, |i, prefix, x| inst.predicate(i, prefix, x))?;
        if zeros.is_empty() || ones.is_empty() {
            // no extension takes the empty side's value
            let c = !zeros.is_empty();
            return Ok(MinorityTrace {
                prefix: state.prefix,
                c,
                set_sizes,
            });
        }
        let side = if ones.len() < zeros.len() {
            ones
        } else {
            zeros
        };
        state.advance(side);
        set_sizes.push(state.candidates.len());
    }
    Err(SolveError::Internal(format!(
        "minority walk ran past {} elements",
        inst.n - 1
    )))
}

pub fn solve_short_choice_minority(
    inst: &ShortChoiceInstance,
    budget: SolveBudget,
) -> Result<Certificate, SolveError> {
    trace_short_choice_minority(inst, budget).map(|t| Certificate::ShortCert {
        prefix: t.prefix,
        c: t.c,
    })
}
