//! Exhaustive search. Within a kind, certificates come in a fixed order:
//! variants with no index first, then single-index variants by ascending
//! index, then pairs lexicographically, then longer tuples
//! lexicographically. Pairwise comparisons are charged to the evaluation
//! budget like Function calls.

use std::collections::{BTreeMap, HashSet};

use crate::problems::{
    verify, BadColoringInstance, BadKSetInstance, Certificate, CollisionInstance, EdgeColoring,
    EdgeList, EkrInstance, EmptyInstance, Instance, KonigCert, KonigInstance, LongChoiceInstance,
    ShortChoiceInstance, SunflowerInstance, TuranInstance, WeakSchurInstance,
};

use super::{Meter, SolveBudget, SolveError};

/// Stop signal threaded through the searches: `Ok(false)` once the visitor
/// asked to stop.
type Flow = Result<bool, SolveError>;

macro_rules! emit {
    ($visit:expr, $cert:expr) => {
        if !$visit($cert) {
            return Ok(false);
        }
    };
}

/// Feeds every accepted certificate of `inst` to `visit` in canonical
/// order until `visit` returns `false`.
pub fn for_each_certificate(
    inst: &Instance,
    budget: SolveBudget,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Result<(), SolveError> {
    let mut meter = Meter::new(budget);
    let m = &mut meter;
    match inst {
        Instance::Collision(i) => collision(i, m, visit),
        Instance::WeakCollision(i) => {
            let size = m.universe(i.n)?;
            pairs_by_value(size, m, |x| i.f.call(x), &mut |a, b| {
                visit(Certificate::Collision(a, b))
            })
        }
        Instance::LongChoice(i) => long_choice(i, m, visit),
        Instance::ShortChoice(i) => short_choice(i, m, visit),
        Instance::Ramsey2(i) => cliques(i, m, visit),
        Instance::RamseyR(i) => cliques(i, m, visit),
        Instance::Sunflower(i) => sunflower(i, m, visit),
        Instance::Konig(i) => konig(i, m, visit),
        Instance::Ekr(i) => ekr(i, m, visit),
        Instance::BadColoring(i) => bad_coloring(i, m, visit),
        Instance::Turan(i) => turan(i, m, visit),
        Instance::BadKSet(i) => bad_kset(i, m, visit),
        Instance::Empty(i) => empty(i, m, visit),
        Instance::WeakSchur(i) => weak_schur(i, m, visit),
    }
    .map(|_| ())
}

/// Every accepted certificate, up to `limit` of them.
pub fn all_certificates(
    inst: &Instance,
    budget: SolveBudget,
    limit: usize,
) -> Result<Vec<Certificate>, SolveError> {
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for_each_certificate(inst, budget, &mut |c| {
        out.push(c);
        out.len() < limit
    })?;
    Ok(out)
}

/// First certificate in canonical order, re-checked by the verifier.
pub fn solve_bruteforce(inst: &Instance, budget: SolveBudget) -> Result<Certificate, SolveError> {
    let mut found = None;
    for_each_certificate(inst, budget, &mut |c| {
        found = Some(c);
        false
    })?;
    match found {
        Some(cert) => {
            let report = verify(inst, &cert);
            if report.accepted {
                Ok(cert)
            } else {
                Err(SolveError::Internal(format!(
                    "search produced a rejected certificate: {report}"
                )))
            }
        }
        None if conditional_totality(inst) => Err(SolveError::NoCertificate(format!(
            "{} instance below its guaranteed size",
            inst.kind().name()
        ))),
        None => Err(SolveError::Internal(format!(
            "total {} instance has no certificate",
            inst.kind().name()
        ))),
    }
}

/// Kinds whose existence guarantee needs a minimum width.
fn conditional_totality(inst: &Instance) -> bool {
    match inst {
        Instance::RamseyR(i) => i.is_weakened(),
        Instance::Sunflower(i) => i.index_width < SunflowerInstance::default_width(i.k),
        Instance::WeakSchur(i) => i.width < WeakSchurInstance::default_width(i.r),
        _ => false,
    }
}

/// Lexicographic pairs `a < b` of `[0, size)` with equal keys.
fn pairs_by_value<K: Ord>(
    size: u64,
    m: &mut Meter,
    key: impl Fn(u64) -> K,
    visit: &mut dyn FnMut(u64, u64) -> bool,
) -> Flow {
    m.enumerate(size)?;
    m.spend(size)?;
    let mut buckets: BTreeMap<K, Vec<u64>> = BTreeMap::new();
    for x in 0..size {
        buckets.entry(key(x)).or_default().push(x);
    }
    let groups: Vec<Vec<u64>> = buckets.into_values().filter(|b| b.len() > 1).collect();
    // each element sits in one group, so ordering by first element is enough
    let mut heads: Vec<(u64, usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, b)| (0..b.len() - 1).map(move |p| (b[p], g, p)))
        .collect();
    heads.sort_unstable();
    for (a, bi, p) in heads {
        for &b in &groups[bi][p + 1..] {
            m.spend(1)?;
            if !visit(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn collision(
    i: &CollisionInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let size = m.universe(i.n)?;
    m.spend(size)?;
    let values: Vec<u64> = (0..size).map(|x| i.f.call(x)).collect();
    for x in 0..size {
        if values[x as usize] == 0 {
            emit!(visit, Certificate::Zero(x));
        }
    }
    pairs_by_value(size, m, |x| values[x as usize], &mut |a, b| {
        visit(Certificate::Collision(a, b))
    })
}

fn empty(i: &EmptyInstance, m: &mut Meter, visit: &mut dyn FnMut(Certificate) -> bool) -> Flow {
    m.universe(i.n)?;
    m.spend(i.domain_size())?;
    let mut hit = vec![false; i.range_size() as usize];
    for x in 0..i.domain_size() {
        if let Some(h) = hit.get_mut(i.f.call(x) as usize) {
            *h = true;
        }
    }
    for e in 0..i.range_size() {
        if !hit[e as usize] {
            emit!(visit, Certificate::EmptyHole(e));
        }
    }
    Ok(true)
}

/// Splits `cands` by `pred`, charging one evaluation per candidate.
fn split(
    cands: &[u64],
    m: &mut Meter,
    pred: impl Fn(u64) -> bool,
) -> Result<[Vec<u64>; 2], SolveError> {
    m.spend(cands.len() as u64)?;
    let (ones, zeros): (Vec<u64>, Vec<u64>) = cands.iter().partition(|&&x| pred(x));
    Ok([zeros, ones])
}

fn without(side: &[u64], x: u64) -> Vec<u64> {
    side.iter().copied().filter(|&y| y != x).collect()
}

fn long_choice(
    i: &LongChoiceInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let universe = m.universe(i.n)?;
    let starts: Vec<u64> = match i.start() {
        Some(a0) => vec![a0],
        None => (0..universe).collect(),
    };
    for a0 in starts {
        let mut prefix = vec![a0];
        let cands = without(&(0..universe).collect::<Vec<_>>(), a0);
        if !long_choice_from(i, &mut prefix, cands, m, visit)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `cands` are the elements allowed at position `prefix.len()`.
fn long_choice_from(
    i: &LongChoiceInstance,
    prefix: &mut Vec<u64>,
    cands: Vec<u64>,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let p = prefix.len();
    if p == i.n {
        for x in cands {
            let mut seq = prefix.clone();
            seq.push(x);
            emit!(visit, Certificate::ChoiceSeq(seq));
        }
        return Ok(true);
    }
    // choosing a_p fixes the value of P_{p-1} every later element must match
    let sides = split(&cands, m, |x| i.predicate(p - 1, prefix, x))?;
    for &x in &cands {
        let side = &sides[i.predicate(p - 1, prefix, x) as usize];
        if side.len() <= i.n - p {
            continue;
        }
        prefix.push(x);
        let more = long_choice_from(i, prefix, without(side, x), m, visit)?;
        prefix.pop();
        if !more {
            return Ok(false);
        }
    }
    Ok(true)
}

fn short_choice(
    i: &ShortChoiceInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let universe = m.universe(i.n)? - 2;
    let all: Vec<u64> = (0..universe).collect();
    for a0 in 0..universe {
        if !short_choice_from(i, &mut vec![a0], without(&all, a0), m, visit)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ext` holds every extension of `prefix`.
fn short_choice_from(
    i: &ShortChoiceInstance,
    prefix: &mut Vec<u64>,
    ext: Vec<u64>,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let k = prefix.len() - 1;
    let sides = split(&ext, m, |x| i.predicate(k, prefix, x))?;
    for c in [false, true] {
        if sides[c as usize].is_empty() {
            emit!(
                visit,
                Certificate::ShortCert {
                    prefix: prefix.clone(),
                    c
                }
            );
        }
    }
    if prefix.len() == i.n - 1 {
        return Ok(true);
    }
    for &x in &ext {
        let side = &sides[i.predicate(k, prefix, x) as usize];
        prefix.push(x);
        let more = short_choice_from(i, prefix, without(side, x), m, visit)?;
        prefix.pop();
        if !more {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cliques<G: EdgeColoring>(
    g: &G,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let size = m.universe(g.node_width())?;
    let n = g.target();
    if n == 1 {
        for v in 0..size {
            for color in 0..g.colors() {
                emit!(
                    visit,
                    Certificate::Clique {
                        color,
                        nodes: vec![v]
                    }
                );
            }
        }
        return Ok(true);
    }
    for a in 0..size {
        for b in a + 1..size {
            m.spend(1)?;
            let color = g.edge_color(a, b);
            if n == 2 {
                emit!(
                    visit,
                    Certificate::Clique {
                        color,
                        nodes: vec![a, b]
                    }
                );
                continue;
            }
            let later: Vec<u64> = (b + 1..size).collect();
            m.spend(2 * later.len() as u64)?;
            let cands = later
                .into_iter()
                .filter(|&x| g.edge_color(a, x) == color && g.edge_color(b, x) == color)
                .collect();
            if !grow_clique(g, color, n, &mut vec![a, b], cands, m, visit)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn grow_clique<G: EdgeColoring>(
    g: &G,
    color: u64,
    n: usize,
    nodes: &mut Vec<u64>,
    cands: Vec<u64>,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    for (p, &x) in cands.iter().enumerate() {
        if nodes.len() + (cands.len() - p) < n {
            break;
        }
        nodes.push(x);
        let more = if nodes.len() == n {
            visit(Certificate::Clique {
                color,
                nodes: nodes.clone(),
            })
        } else {
            m.spend((cands.len() - p - 1) as u64)?;
            let next = cands[p + 1..]
                .iter()
                .copied()
                .filter(|&y| g.edge_color(x, y) == color)
                .collect();
            grow_clique(g, color, n, nodes, next, m, visit)?
        };
        nodes.pop();
        if !more {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sunflowers are grown from an ordered pair of distinct valid sets whose
/// intersection fixes the core; later petals must meet every chosen petal
/// in exactly that core.
fn sunflower(
    i: &SunflowerInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let size = m.universe(i.index_width)?;
    m.spend(size)?;
    let sets: Vec<Option<Vec<u64>>> = (0..size).map(|s| i.set(s)).collect();
    for s in 0..size {
        if sets[s as usize].is_none() {
            emit!(visit, Certificate::SunflowerError(s));
        }
    }
    let dups = pairs_by_value(
        size,
        m,
        |s| {
            let mut v = i.slot(s);
            v.sort_unstable();
            v
        },
        &mut |a, b| visit(Certificate::SunflowerDup(a, b)),
    )?;
    if !dups {
        return Ok(false);
    }
    let target = i.target();
    let valid: Vec<u64> = (0..size).filter(|&s| sets[s as usize].is_some()).collect();
    let set = |s: u64| sets[s as usize].as_deref().unwrap();
    if target == 1 {
        for &s in &valid {
            emit!(visit, Certificate::Sunflower(vec![s]));
        }
        return Ok(true);
    }
    for (p, &a) in valid.iter().enumerate() {
        for (q, &b) in valid.iter().enumerate().skip(p + 1) {
            if set(a) == set(b) {
                continue;
            }
            let core = meet(set(a), set(b));
            m.spend((valid.len() - q) as u64)?;
            let cands: Vec<u64> = valid[q + 1..]
                .iter()
                .copied()
                .filter(|&c| set(c) != set(a) && set(c) != set(b))
                .filter(|&c| meet(set(a), set(c)) == core && meet(set(b), set(c)) == core)
                .collect();
            let mut chosen = vec![a, b];
            if !grow_sunflower(&set, &core, target, &mut chosen, cands, m, visit)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().filter(|x| b.contains(x)).copied().collect()
}

fn grow_sunflower<'a>(
    set: &dyn Fn(u64) -> &'a [u64],
    core: &[u64],
    target: usize,
    chosen: &mut Vec<u64>,
    cands: Vec<u64>,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    if chosen.len() == target {
        emit!(visit, Certificate::Sunflower(chosen.clone()));
        return Ok(true);
    }
    for (p, &x) in cands.iter().enumerate() {
        if chosen.len() + (cands.len() - p) < target {
            break;
        }
        m.spend((cands.len() - p - 1) as u64)?;
        let next = cands[p + 1..]
            .iter()
            .copied()
            .filter(|&y| set(y) != set(x) && meet(set(x), set(y)) == core)
            .collect();
        chosen.push(x);
        let more = grow_sunflower(set, core, target, chosen, next, m, visit)?;
        chosen.pop();
        if !more {
            return Ok(false);
        }
    }
    Ok(true)
}

fn konig(i: &KonigInstance, m: &mut Meter, visit: &mut dyn FnMut(Certificate) -> bool) -> Flow {
    let size = m.universe(i.n)?;
    m.spend(size)?;
    let out: Vec<u64> = (0..size).map(|s| i.parent.call(s)).collect();
    let parent = |s: u64| out[s as usize] & (size - 1);
    if parent(i.root) != i.root {
        emit!(visit, Certificate::Konig(KonigCert::InvalidRoot));
    }
    for s in 0..size {
        if s != i.root && parent(s) == s {
            emit!(visit, Certificate::Konig(KonigCert::NonUniqueRoot(s)));
        }
        let mut path = vec![s];
        for _ in 0..i.n {
            path.push(parent(*path.last().unwrap()));
        }
        if !path.contains(&i.root) {
            emit!(visit, Certificate::Konig(KonigCert::FarAway(s)));
        }
        let distinct: HashSet<u64> = path.iter().copied().collect();
        if path[i.n] == i.root && distinct.len() == path.len() {
            emit!(visit, Certificate::Konig(KonigCert::LongPath(s)));
        }
    }
    // roots are nobody's child, so give each its own key
    pairs_by_value(
        size,
        m,
        |s| {
            if parent(s) == s {
                (true, s)
            } else {
                (false, out[s as usize])
            }
        },
        &mut |a, b| visit(Certificate::Konig(KonigCert::IdenticalChildren(a, b))),
    )
}

fn ekr(i: &EkrInstance, m: &mut Meter, visit: &mut dyn FnMut(Certificate) -> bool) -> Flow {
    let size = m.universe(i.n)?;
    m.spend(size)?;
    let pairs: Vec<(u64, u64)> = (0..size).map(|s| i.pair(s)).collect();
    for s in 0..size {
        let (a, b) = pairs[s as usize];
        if a == b {
            emit!(visit, Certificate::EkrError(s));
        }
    }
    for x in 0..size {
        m.spend(size - x - 1)?;
        let (a, b) = pairs[x as usize];
        for y in x + 1..size {
            let (c, d) = pairs[y as usize];
            if (a, b) == (c, d) {
                emit!(visit, Certificate::EkrDup(x, y));
            } else if a != b && c != d && a != c && a != d && b != c && b != d {
                emit!(visit, Certificate::EkrDisjoint(x, y));
            }
        }
    }
    Ok(true)
}

fn edge_dups(edges: &EdgeList, m: &mut Meter, visit: &mut dyn FnMut(Certificate) -> bool) -> Flow {
    pairs_by_value(
        edges.count(),
        m,
        |e| {
            let (u, v) = edges.raw(e);
            (u.min(v), u.max(v))
        },
        &mut |a, b| visit(Certificate::EdgeDup(a, b)),
    )
}

fn bad_coloring(
    i: &BadColoringInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    m.enumerate(i.edges.count())?;
    m.spend(i.edges.count())?;
    for e in 0..i.edges.count() {
        match i.edges.edge(e) {
            None => emit!(visit, Certificate::EdgeError(e)),
            Some((u, v)) if i.color(u) == i.color(v) => emit!(visit, Certificate::BadEdge(e)),
            Some(_) => {}
        }
    }
    edge_dups(&i.edges, m, visit)
}

fn bad_kset(
    i: &BadKSetInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    m.enumerate(i.count())?;
    m.spend(i.count())?;
    for s in 0..i.count() {
        if i.is_bad(s) {
            emit!(visit, Certificate::BadSet(s));
        }
    }
    let sorted = |s| {
        let mut v = i.members(s);
        v.sort_unstable();
        v
    };
    pairs_by_value(i.count(), m, sorted, &mut |a, b| {
        visit(Certificate::SetDup(a, b))
    })
}

fn turan(i: &TuranInstance, m: &mut Meter, visit: &mut dyn FnMut(Certificate) -> bool) -> Flow {
    let count = i.edges.count();
    m.enumerate(count)?;
    m.spend(count)?;
    let edges: Vec<Option<(u64, u64)>> = (0..count).map(|e| i.edges.edge(e)).collect();
    for (e, edge) in edges.iter().enumerate() {
        if edge.is_none() {
            emit!(visit, Certificate::EdgeError(e as u64));
        }
    }
    if !edge_dups(&i.edges, m, visit)? {
        return Ok(false);
    }
    // first index of each edge; a clique is reported through those indices
    let mut index: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for (e, edge) in edges.iter().enumerate() {
        if let Some(uv) = edge {
            index.entry(*uv).or_insert(e as u64);
        }
    }
    let mut nodes: Vec<u64> = index.keys().flat_map(|&(u, v)| [u, v]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let adjacent = |u: u64, v: u64| index.contains_key(&(u.min(v), u.max(v)));
    let size = i.k() + 1;
    let mut stack: Vec<u64> = Vec::with_capacity(size);
    turan_from(&nodes, &adjacent, &index, size, &mut stack, m, visit)
}

fn turan_from(
    cands: &[u64],
    adjacent: &dyn Fn(u64, u64) -> bool,
    index: &BTreeMap<(u64, u64), u64>,
    size: usize,
    clique: &mut Vec<u64>,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    if clique.len() == size {
        let mut idx = Vec::with_capacity(size * (size - 1) / 2);
        for (p, &u) in clique.iter().enumerate() {
            for &v in &clique[p + 1..] {
                idx.push(index[&(u.min(v), u.max(v))]);
            }
        }
        emit!(visit, Certificate::CliqueEdges(idx));
        return Ok(true);
    }
    for (p, &x) in cands.iter().enumerate() {
        if clique.len() + (cands.len() - p) < size {
            break;
        }
        m.spend((cands.len() - p - 1) as u64)?;
        let next: Vec<u64> = cands[p + 1..]
            .iter()
            .copied()
            .filter(|&y| adjacent(x, y))
            .collect();
        clique.push(x);
        let more = turan_from(&next, adjacent, index, size, clique, m, visit)?;
        clique.pop();
        if !more {
            return Ok(false);
        }
    }
    Ok(true)
}

fn weak_schur(
    i: &WeakSchurInstance,
    m: &mut Meter,
    visit: &mut dyn FnMut(Certificate) -> bool,
) -> Flow {
    let top = i.top();
    m.enumerate(top)?;
    m.spend(top)?;
    // colors[v] for 1 <= v <= top
    let colors: Vec<u64> = std::iter::once(u64::MAX)
        .chain((1..=top).map(|v| i.color(v)))
        .collect();
    for a in 1..top {
        m.spend(top - a)?;
        for b in 1..=top - a {
            let c = colors[a as usize];
            if colors[b as usize] == c && colors[(a + b) as usize] == c {
                emit!(visit, Certificate::SchurTriple(a, b));
            }
        }
    }
    Ok(true)
}
