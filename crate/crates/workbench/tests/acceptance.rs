//! Acceptance suite. Prints one `criterion N: PASS|FAIL: detail` line per
//! criterion and fails if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use longchoice_core::io::{certificate_to_json, to_text};
use longchoice_core::problems::{
    edge_count, verify, Certificate, EdgeColoring, EkrInstance, Instance, Kind, KonigCert,
};
use longchoice_core::reductions::{lookup, pullback_verified, IntervalState, Outcome};
use longchoice_core::solvers::{
    all_certificates, extract_clique, solve_ramsey_sequence, SolveBudget, Solver,
};
use longchoice_core::Function;
use longchoice_workbench::gen::GeneratorSpec;
use longchoice_workbench::pipeline::PipelineSpec;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Certificates produced along the way, keyed by a stable label.
#[derive(Default)]
struct Certs(BTreeMap<String, String>);

impl Certs {
    fn add(&mut self, label: String, cert: &Certificate) {
        self.0.insert(label, to_text(&certificate_to_json(cert)));
    }
}

fn gen(kind: Kind, params: &[(&str, u64)], seed: u64) -> Instance {
    GeneratorSpec::new(kind, params, seed).generate().unwrap()
}

fn gen_flavor(kind: Kind, params: &[(&str, u64)], flavor: &str) -> Instance {
    GeneratorSpec::new(kind, params, 0)
        .flavor(flavor)
        .generate()
        .unwrap()
}

/// Runs a pipeline with every hop verified.
fn roundtrip(chain: &str, solver: Option<Solver>, src: &Instance) -> Result<Certificate, String> {
    let mut spec = PipelineSpec::parse(chain).map_err(|e| e.to_string())?;
    if let Some(s) = solver {
        spec = spec.solver(s);
    }
    let report = spec.run(src);
    report
        .certificate
        .clone()
        .ok_or_else(|| format!("{chain}: {}", report.text().trim_end()))
}

/// Pulls every accepted target certificate back through `name`.
fn every_target(name: &str, src: &Instance) -> Result<Vec<Certificate>, String> {
    let r = lookup(name).unwrap();
    let (target, aux) = match r.forward(src).map_err(|e| e.to_string())? {
        Outcome::Immediate(c) => return Ok(vec![c]),
        Outcome::Reduced { target, aux } => (target, aux),
    };
    let certs =
        all_certificates(&target, SolveBudget::default(), 4096).map_err(|e| e.to_string())?;
    certs
        .iter()
        .map(|c| {
            pullback_verified(r.as_ref(), src, &aux, c)
                .map(|p| p.certificate)
                .map_err(|e| format!("{name}: {c:?}: {e}"))
        })
        .collect()
}

fn long_choice_totality(certs: &mut Certs) -> Check {
    let start = Instant::now();
    let mut ok = 0;
    for n in 2..=10 {
        for seed in 0..50 {
            let inst = gen(Kind::LongChoice, &[("n", n)], seed);
            let cert = Solver::Majority
                .solve(&inst, SolveBudget::default())
                .map_err(|e| format!("n={n} seed={seed}: {e}"))?;
            ensure!(verify(&inst, &cert).accepted, "n={n} seed={seed}: rejected");
            certs.add(format!("1-n{n}-s{seed}"), &cert);
            ok += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(start.elapsed().as_secs() < 60, "took {secs:.1} s");
    Ok(format!(
        "{ok}/{ok} verified (n=2..10, 50 seeds each) in {secs:.2} s"
    ))
}

fn collision_round_trip(certs: &mut Certs) -> Check {
    let r = lookup("collision->long_choice").unwrap();
    let (mut ok, mut prefixes) = (0, 0);
    for n in 3..=8usize {
        for seed in 0..25 {
            let src = gen(Kind::Collision, &[("n", n as u64)], seed);
            let cert = roundtrip("collision->long_choice", Some(Solver::Majority), &src)?;
            certs.add(format!("2-n{n}-s{seed}"), &cert);
            ok += 1;
            // bookkeeping along the solved sequence
            let Instance::Collision(c) = &src else {
                unreachable!()
            };
            let Ok(Outcome::Reduced { target, .. }) = r.forward(&src) else {
                return Err("forward failed".into());
            };
            let Ok(Certificate::ChoiceSeq(seq)) =
                Solver::Majority.solve(&target, SolveBudget::default())
            else {
                return Err("no sequence".into());
            };
            let images: Vec<u64> = seq
                .iter()
                .map(|&a| match c.f.call(a) {
                    0 => (1 << n) - 1,
                    v => v,
                })
                .collect();
            for len in 1..=images.len() {
                let state = IntervalState::build(n, &images[..len]);
                if state.collision_free() {
                    prefixes += 1;
                    ensure!(
                        state.bookkeeping_holds(n),
                        "unfilled count off at n={n} seed={seed} len={len}"
                    );
                }
            }
        }
    }
    Ok(format!(
        "{ok}/150 round trips, {prefixes} collision-free prefixes with exact unfilled counts"
    ))
}

fn weak_collision_unary(certs: &mut Certs) -> Check {
    let r = lookup("weak_collision->unary_long_choice").unwrap();
    let mut ok = 0;
    for n in 3..=10usize {
        for seed in 0..25 {
            let src = gen(Kind::WeakCollision, &[("n", n as u64)], seed);
            let Instance::WeakCollision(w) = &src else {
                unreachable!()
            };
            let Ok(Outcome::Reduced { target, aux }) = r.forward(&src) else {
                return Err(format!("n={n} seed={seed}: forward failed"));
            };
            let sol = Solver::Majority
                .solve(&target, SolveBudget::default())
                .map_err(|e| e.to_string())?;
            let Certificate::ChoiceSeq(seq) = &sol else {
                unreachable!()
            };
            let back =
                pullback_verified(r.as_ref(), &src, &aux, &sol).map_err(|e| e.to_string())?;
            let (a, b) = (seq[n - 1], seq[n]);
            ensure!(
                back.certificate == Certificate::Collision(a, b),
                "n={n} seed={seed}: {:?}",
                back.certificate
            );
            ensure!(
                w.f.call(a) == w.f.call(b),
                "n={n} seed={seed}: images differ"
            );
            certs.add(format!("3-n{n}-s{seed}"), &back.certificate);
            ok += 1;
        }
    }
    Ok(format!("{ok}/200 pullbacks pair the last two elements"))
}

/// Exhaustive check that `nodes` are distinct and every edge has `color`.
fn is_mono_clique(g: &dyn EdgeColoring, color: u64, nodes: &[u64]) -> bool {
    nodes.iter().enumerate().all(|(i, &a)| {
        nodes[i + 1..]
            .iter()
            .all(|&b| a != b && g.edge_color(a, b) == color)
    })
}

fn ramsey(certs: &mut Certs) -> Check {
    let mut ok = 0;
    for n in 2..=4usize {
        for seed in 0..25 {
            let src = gen(Kind::Ramsey2, &[("n", n as u64)], seed);
            let Instance::Ramsey2(g) = &src else {
                unreachable!()
            };
            let seq =
                solve_ramsey_sequence(g, SolveBudget::default()).map_err(|e| e.to_string())?;
            let cert =
                extract_clique(&seq.subsample, &seq.colors, 2, n).map_err(|e| e.to_string())?;
            let Certificate::Clique { color, nodes } = &cert else {
                unreachable!()
            };
            ensure!(
                nodes.len() == n && is_mono_clique(g, *color, nodes),
                "n={n} seed={seed}: {cert:?}"
            );
            ensure!(verify(&src, &cert).accepted, "n={n} seed={seed}: rejected");
            let via = roundtrip("ramsey2->long_choice", None, &src)?;
            certs.add(format!("4-n{n}-s{seed}"), &cert);
            certs.add(format!("4-via-n{n}-s{seed}"), &via);
            ok += 1;
        }
    }
    let mut wide = 0;
    for seed in 0..25 {
        let src = gen(
            Kind::RamseyR,
            &[("r", 4), ("n", 2), ("node_width", 12)],
            seed,
        );
        let Instance::RamseyR(g) = &src else {
            unreachable!()
        };
        let seq = solve_ramsey_sequence(g, SolveBudget::default()).map_err(|e| e.to_string())?;
        ensure!(
            seq.subsample.len() == 5,
            "seed={seed}: {} candidates",
            seq.subsample.len()
        );
        let cert = extract_clique(&seq.subsample, &seq.colors, 4, 2).map_err(|e| e.to_string())?;
        let Certificate::Clique { color, nodes } = &cert else {
            unreachable!()
        };
        ensure!(
            is_mono_clique(g, *color, nodes) && verify(&src, &cert).accepted,
            "seed={seed}: {cert:?}"
        );
        certs.add(format!("4-r4-s{seed}"), &cert);
        wide += 1;
    }
    Ok(format!(
        "{ok}/75 two-color cliques, {wide}/25 four-color 2-cliques from 5 candidates"
    ))
}

fn sunflower(certs: &mut Certs) -> Check {
    let (mut flowers, mut errors) = (0, 0);
    for seed in 0..25 {
        let src = gen(Kind::Sunflower, &[("k", 2)], seed);
        let Instance::Sunflower(s) = &src else {
            unreachable!()
        };
        ensure!(
            s.index_width == 8 && s.element_width == 8,
            "default widths changed"
        );
        let cert = roundtrip("sunflower->ramsey", Some(Solver::BruteForce), &src)?;
        match &cert {
            Certificate::Sunflower(idx) => {
                ensure!(idx.len() == 4, "seed={seed}: {} sets", idx.len());
                let sets: Vec<Vec<u64>> = idx.iter().map(|&i| s.set(i).unwrap()).collect();
                let meet = |a: &[u64], b: &[u64]| -> Vec<u64> {
                    a.iter().filter(|x| b.contains(x)).copied().collect()
                };
                let core = meet(&sets[0], &sets[1]);
                for i in 0..4 {
                    for j in i + 1..4 {
                        ensure!(sets[i] != sets[j], "seed={seed}: equal sets");
                        ensure!(meet(&sets[i], &sets[j]) == core, "seed={seed}: uneven core");
                    }
                }
                flowers += 1;
            }
            _ => errors += 1,
        }
        certs.add(format!("5-s{seed}"), &cert);
    }
    Ok(format!(
        "25/25 verified: {flowers} sunflowers, {errors} error or duplicate certificates"
    ))
}

fn konig(certs: &mut Certs) -> Check {
    let mut ok = 0;
    for n in 2..=6 {
        for seed in 0..25 {
            let src = gen(Kind::Collision, &[("n", n)], seed);
            certs.add(
                format!("6-c-n{n}-s{seed}"),
                &roundtrip("collision->konig", None, &src)?,
            );
            let src = gen(Kind::Konig, &[("n", n)], seed);
            certs.add(
                format!("6-k-n{n}-s{seed}"),
                &roundtrip("konig->collision", None, &src)?,
            );
            ok += 2;
        }
    }
    let heap = gen_flavor(Kind::Konig, &[("n", 3)], "heap");
    let Instance::Konig(t) = &heap else {
        unreachable!()
    };
    ensure!(t.parent_of(5).0 == 2, "parent(5) = {}", t.parent_of(5).0);
    for n in 2..=6usize {
        let heap = gen_flavor(Kind::Konig, &[("n", n as u64)], "heap");
        let Instance::Konig(t) = &heap else {
            unreachable!()
        };
        let cert = roundtrip("konig->collision", None, &heap)?;
        let deepest = (1u64 << n) - 1;
        ensure!(
            cert == Certificate::Konig(KonigCert::LongPath(deepest)),
            "n={n}: {cert:?}"
        );
        let mut depth = 0;
        let mut v = deepest;
        while v != t.root {
            v = t.parent_node(v);
            depth += 1;
            ensure!(depth <= n, "n={n}: no root above {deepest}");
        }
        ensure!(depth == n, "n={n}: depth {depth}");
        certs.add(format!("6-heap-n{n}"), &cert);
    }
    Ok(format!(
        "{ok}/250 round trips; heap parent(5)=2 and LongPath at the deepest leaf for n=2..6"
    ))
}

fn ekr_table(n: usize, sets: &[(u64, u64)]) -> Instance {
    let f = Function::from_table(2 * n, sets.iter().map(|&(a, b)| a | b << n).collect()).unwrap();
    EkrInstance::new(n, f).unwrap().into()
}

fn ekr(certs: &mut Certs) -> Check {
    let mut ok = 0;
    for n in 2..=8 {
        for seed in 0..25 {
            let src = gen(Kind::Collision, &[("n", n)], seed);
            certs.add(
                format!("7-c-n{n}-s{seed}"),
                &roundtrip("collision->ekr", None, &src)?,
            );
            let src = gen(Kind::Ekr, &[("n", n)], seed);
            certs.add(
                format!("7-e-n{n}-s{seed}"),
                &roundtrip("ekr->collision", None, &src)?,
            );
            ok += 2;
        }
    }
    // disjoint first pair
    let src = ekr_table(2, &[(1, 2), (3, 0), (1, 1), (2, 1)]);
    let cert = roundtrip("ekr->collision", None, &src)?;
    ensure!(
        cert == Certificate::EkrDisjoint(0, 1),
        "disjoint table gave {cert:?}"
    );
    // two sets equal to {a, c}: the colliding pair forces a probe
    let zero_zero = ekr_table(2, &[(0, 1), (1, 2), (0, 2), (0, 2)]);
    let covering = ekr_table(
        3,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (1, 6),
        ],
    );
    let mut sets = vec![(0, 1), (1, 2)];
    sets.extend([3, 4, 5, 6, 7, 3].map(|d| (1, d)));
    let star = ekr_table(3, &sets);
    let mut pulled = 0;
    for (name, src) in [
        ("zero-zero", &zero_zero),
        ("covering", &covering),
        ("star", &star),
    ] {
        let all = every_target("ekr->collision", src)?;
        ensure!(!all.is_empty(), "{name}: no target certificates");
        pulled += all.len();
        certs.add(
            format!("7-{name}"),
            &roundtrip("ekr->collision", None, src)?,
        );
    }
    let star_cert = roundtrip("ekr->collision", None, &star)?;
    ensure!(
        star_cert == Certificate::EkrDup(2, 7),
        "star table gave {star_cert:?}"
    );
    Ok(format!(
        "{ok}/350 round trips; constructed tables: immediate, {pulled} probe pullbacks"
    ))
}

fn hierarchy(certs: &mut Certs) -> Check {
    let mut ok = 0;
    for n in 2..=3u64 {
        for seed in 0..10 {
            let mut run = |label: &str, chain: &str, src: Instance| -> Result<(), String> {
                let cert = roundtrip(chain, None, &src)?;
                certs.add(format!("8-{label}-n{n}-s{seed}"), &cert);
                ok += 1;
                Ok(())
            };
            run(
                "bad2",
                "collision->bad2coloring",
                gen(Kind::Collision, &[("n", n)], seed),
            )?;
            run(
                "mantel",
                "bad_coloring->turan",
                gen(Kind::BadColoring, &[("k", 2), ("n", n)], seed),
            )?;
            run(
                "chain",
                "collision->bad2coloring,bad_coloring->turan",
                gen(Kind::Collision, &[("n", n)], seed),
            )?;
            for k in [2, 3] {
                run(
                    &format!("lift{k}"),
                    "bad_coloring->lift",
                    gen(Kind::BadColoring, &[("k", k), ("n", n)], seed),
                )?;
            }
            run(
                "turan2",
                "turan->lift",
                gen(Kind::Turan, &[("k", 2), ("n", n)], seed),
            )?;
            run(
                "kset1",
                "bad_kset->lift",
                gen(Kind::BadKSet, &[("k", 1), ("n", n)], seed),
            )?;
        }
    }
    for k in 2..=6usize {
        for n in 1..=6usize {
            let side = 1u64 << n;
            let pairs = |k: usize| (k * (k - 1) / 2) as u64;
            ensure!(
                edge_count(k, n) == pairs(k) * side * side + 1,
                "edge count k={k} n={n}"
            );
            ensure!(
                pairs(k) * side * side + 1 + k as u64 * side * side
                    == pairs(k + 1) * side * side + 1,
                "identity k={k} n={n}"
            );
        }
    }
    Ok(format!(
        "{ok}/140 round trips; edge-count identity holds for k=2..6, n=1..6"
    ))
}

fn short_choice(certs: &mut Certs) -> Check {
    let mut solved = 0;
    for n in 2..=10 {
        for seed in 0..25 {
            let inst = gen(Kind::ShortChoice, &[("n", n)], seed);
            let cert = Solver::Minority
                .solve(&inst, SolveBudget::default())
                .map_err(|e| format!("n={n} seed={seed}: {e}"))?;
            ensure!(verify(&inst, &cert).accepted, "n={n} seed={seed}: rejected");
            certs.add(format!("9-sc-n{n}-s{seed}"), &cert);
            solved += 1;
        }
    }
    let mut holes = 0;
    for n in 2..=8 {
        for seed in 0..25 {
            let src = gen(Kind::Empty, &[("n", n)], seed);
            let Instance::Empty(e) = &src else {
                unreachable!()
            };
            let cert = roundtrip("empty->short_choice", None, &src)?;
            let Certificate::EmptyHole(h) = cert else {
                return Err(format!("n={n} seed={seed}: {cert:?}"));
            };
            ensure!(
                h < e.range_size(),
                "n={n} seed={seed}: hole {h} out of range"
            );
            ensure!(
                (0..e.domain_size()).all(|x| e.f.call(x) != h),
                "n={n} seed={seed}: {h} is hit"
            );
            certs.add(format!("9-e-n{n}-s{seed}"), &cert);
            holes += 1;
        }
    }
    Ok(format!(
        "minority solver {solved}/225; {holes}/175 holes confirmed exhaustively"
    ))
}

/// Largest set of pairwise equidistant points in `{0,1}^m`.
fn max_equidistant(m: usize) -> usize {
    fn grow(points: &mut Vec<u64>, next: u64, m: usize, dist: u32, best: &mut usize) {
        *best = (*best).max(points.len());
        for p in next..1u64 << m {
            if points.iter().all(|&q| (p ^ q).count_ones() == dist) {
                points.push(p);
                grow(points, p + 1, m, dist, best);
                points.pop();
            }
        }
    }
    let mut best = 0;
    for dist in 1..=m as u32 {
        grow(&mut Vec::new(), 0, m, dist, &mut best);
    }
    best
}

fn hamming(certs: &mut Certs) -> Check {
    let mut sizes = Vec::new();
    for m in 2..=4 {
        let best = max_equidistant(m);
        ensure!(best < m + 2, "m={m}: {best} equidistant points");
        sizes.push(best.to_string());
    }
    let mut ok = 0;
    for (n, m) in [(4u64, 2u64), (5, 2), (6, 3)] {
        for seed in 0..10 {
            let src = gen(Kind::WeakCollision, &[("n", n), ("m", m)], seed);
            let cert = roundtrip(
                "weak_collision->ramsey_hamming",
                Some(Solver::BruteForce),
                &src,
            )?;
            certs.add(format!("10-n{n}-m{m}-s{seed}"), &cert);
            ok += 1;
        }
    }
    Ok(format!(
        "largest equidistant sets for m=2,3,4: {}; {ok}/30 round trips",
        sizes.join(",")
    ))
}

fn schur(certs: &mut Certs) -> Check {
    let mut triples = 0;
    let parity = gen_flavor(Kind::WeakSchur, &[("r", 2), ("width", 4)], "parity");
    let sources = (0..25)
        .map(|seed| gen(Kind::WeakSchur, &[("r", 2), ("width", 4)], seed))
        .chain(std::iter::once(parity));
    for (i, src) in sources.enumerate() {
        let Instance::WeakSchur(s) = &src else {
            unreachable!()
        };
        for cert in every_target("weak_schur->ramsey", &src)? {
            let Certificate::SchurTriple(a, b) = cert else {
                return Err(format!("source {i}: {cert:?}"));
            };
            ensure!(
                s.color(a) == s.color(b) && s.color(b) == s.color(a + b),
                "source {i}: ({a}, {b})"
            );
            triples += 1;
        }
        certs.add(
            format!("11-{i}"),
            &roundtrip("weak_schur->ramsey", Some(Solver::BruteForce), &src)?,
        );
    }
    Ok(format!(
        "{triples} pulled-back triples monochromatic across 26 colorings"
    ))
}

const CRITERIA: [fn(&mut Certs) -> Check; 11] = [
    long_choice_totality,
    collision_round_trip,
    weak_collision_unary,
    ramsey,
    sunflower,
    konig,
    ekr,
    hierarchy,
    short_choice,
    hamming,
    schur,
];

fn run(f: fn(&mut Certs) -> Check, certs: &mut Certs) -> Check {
    catch_unwind(AssertUnwindSafe(|| f(certs))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn determinism(first: &Certs) -> Check {
    let mut again = Certs::default();
    for f in CRITERIA {
        run(f, &mut again)?;
    }
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, certs) in dirs.iter().zip([first, &again]) {
        for (label, text) in &certs.0 {
            fs::write(dir.path().join(format!("{label}.json")), text).unwrap();
        }
    }
    ensure!(
        first.0.len() == again.0.len(),
        "{} vs {} files",
        first.0.len(),
        again.0.len()
    );
    for label in first.0.keys() {
        let name = format!("{label}.json");
        let a = fs::read(dirs[0].path().join(&name)).unwrap();
        let b =
            fs::read(dirs[1].path().join(&name)).map_err(|_| format!("{name} missing on rerun"))?;
        ensure!(a == b, "{name} differs");
    }
    Ok(format!(
        "{} certificate files byte-identical across two runs",
        first.0.len()
    ))
}

#[test]
fn acceptance_criteria() {
    let mut out = std::io::stdout();
    let mut certs = Certs::default();
    let mut failed = Vec::new();
    let mut report = |i: usize, result: Check| {
        let line = match &result {
            Ok(detail) => format!("criterion {i}: PASS: {detail}"),
            Err(detail) => format!("criterion {i}: FAIL: {detail}"),
        };
        writeln!(out, "{line}").unwrap();
        if result.is_err() {
            failed.push(i);
        }
    };
    for (i, f) in CRITERIA.into_iter().enumerate() {
        report(i + 1, run(f, &mut certs));
    }
    report(12, determinism(&certs));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
