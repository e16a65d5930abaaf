use std::collections::BTreeSet;

use longchoice_core::problems::{
    edge_count, verify, BadColoringInstance, BadKSetInstance, Certificate, CollisionInstance,
    EkrInstance, EmptyInstance, Instance, KonigCert, KonigInstance, LongChoiceInstance,
    LongChoiceVariant, Ramsey2Instance, RamseyRInstance, SunflowerInstance, TuranInstance,
    WeakCollisionInstance, WeakSchurInstance,
};
use longchoice_core::reductions::{
    lookup, pullback_verified, IntervalState, Outcome, RangeTracker, Reduction, NAMES,
};
use longchoice_core::solvers::{
    all_certificates, trace_short_choice_minority, SolveBudget, Solver,
};
use longchoice_core::Function;
use proptest::prelude::*;
use serde_json::Value;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded pseudo-random function; tabulated when narrow enough.
fn table(seed: u64, input: usize, output: usize) -> Function {
    if input <= 16 {
        Function::tabulate(input, output, |x| mix(seed ^ mix(x))).unwrap()
    } else {
        Function::from_u64_fn("hashed", input, output, move |x| mix(seed ^ mix(x)))
    }
}

fn collision(seed: u64, n: usize) -> Instance {
    CollisionInstance::new(n, table(seed, n, n)).unwrap().into()
}

fn collision_table(n: usize, values: Vec<u64>) -> Instance {
    CollisionInstance::new(n, Function::from_table(n, values).unwrap())
        .unwrap()
        .into()
}

fn reduction(name: &str) -> Box<dyn Reduction> {
    lookup(name).unwrap()
}

fn forward(r: &dyn Reduction, src: &Instance) -> (Instance, Value) {
    match r.forward(src).unwrap() {
        Outcome::Reduced { target, aux } => (target, aux),
        Outcome::Immediate(c) => panic!("{}: unexpected immediate {c:?}", r.name()),
    }
}

/// Forward, solve, pull back; the result is verified on the source.
fn round_trip(r: &dyn Reduction, src: &Instance, solver: Option<Solver>) -> Certificate {
    match r.forward(src).unwrap() {
        Outcome::Immediate(c) => {
            assert!(
                verify(src, &c).accepted,
                "{}: immediate {c:?} rejected",
                r.name()
            );
            c
        }
        Outcome::Reduced { target, aux } => {
            let solver = solver.unwrap_or_else(|| Solver::default_for(target.kind()));
            let cert = solver.solve(&target, SolveBudget::default()).unwrap();
            assert!(verify(&target, &cert).accepted);
            pullback_verified(r, src, &aux, &cert)
                .unwrap_or_else(|e| panic!("{}: {e}", r.name()))
                .certificate
        }
    }
}

/// Pulls back every accepted target certificate (up to `limit`).
fn every_target(r: &dyn Reduction, src: &Instance, limit: usize) -> usize {
    let Outcome::Reduced { target, aux } = r.forward(src).unwrap() else {
        return 0;
    };
    let certs = all_certificates(&target, SolveBudget::default(), limit).unwrap();
    for c in &certs {
        pullback_verified(r, src, &aux, c).unwrap_or_else(|e| panic!("{}: {c:?}: {e}", r.name()));
    }
    certs.len()
}

#[test]
fn registry_is_complete() {
    let mut seen = BTreeSet::new();
    for name in NAMES {
        let r = lookup(name).unwrap();
        assert_eq!(r.name(), name);
        seen.insert(name);
    }
    assert_eq!(seen.len(), NAMES.len());
    assert!(lookup("collision->nowhere").is_none());
}

#[test]
fn wrong_source_kind_is_rejected() {
    let r = reduction("collision->long_choice");
    let src: Instance = EmptyInstance::new(2, Function::constant(2, 2, 0))
        .unwrap()
        .into();
    assert_eq!(r.forward(&src).unwrap_err().code(), "KIND_MISMATCH");
}

#[test]
fn collision_to_long_choice_round_trips() {
    let r = reduction("collision->long_choice");
    for n in 2..=7 {
        for seed in 0..10 {
            round_trip(r.as_ref(), &collision(seed, n), None);
        }
    }
    for seed in 0..5 {
        assert!(every_target(r.as_ref(), &collision(seed, 3), 200) > 0);
    }
}

#[test]
fn identity_collision_pulls_back_to_zero() {
    let src = collision_table(2, vec![0, 1, 2, 3]);
    let r = reduction("collision->long_choice");
    let (target, aux) = forward(r.as_ref(), &src);
    let certs = all_certificates(&target, SolveBudget::default(), usize::MAX).unwrap();
    assert!(!certs.is_empty());
    for c in certs {
        let back = pullback_verified(r.as_ref(), &src, &aux, &c).unwrap();
        assert_eq!(back.certificate, Certificate::Zero(0));
    }
}

#[test]
fn interval_bookkeeping_on_collision_free_prefixes() {
    // a permutation of [1, 2^n - 1] padded with a zero image has collision-free prefixes
    for n in 3..=7 {
        let r = reduction("collision->long_choice");
        for seed in 0..5 {
            let src = collision(seed, n);
            let (target, _) = forward(r.as_ref(), &src);
            let Instance::Collision(c) = &src else {
                unreachable!()
            };
            let cert = Solver::Majority
                .solve(&target, SolveBudget::default())
                .unwrap();
            let Certificate::ChoiceSeq(seq) = cert else {
                unreachable!()
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
                    assert!(state.bookkeeping_holds(n), "n={n} seed={seed} len={len}");
                }
            }
        }
    }
}

#[test]
fn weak_collision_to_unary_pairs_last_two() {
    let r = reduction("weak_collision->unary_long_choice");
    for n in 3..=9 {
        for seed in 0..8 {
            let m = n - 1 - (seed as usize % 2).min(n - 2);
            let src: Instance = WeakCollisionInstance::new(n, m, table(seed, n, m))
                .unwrap()
                .into();
            let (target, _) = forward(r.as_ref(), &src);
            let Certificate::ChoiceSeq(seq) = Solver::Majority
                .solve(&target, SolveBudget::default())
                .unwrap()
            else {
                unreachable!()
            };
            let back = round_trip(r.as_ref(), &src, None);
            assert_eq!(back, Certificate::Collision(seq[n - 1], seq[n]));
        }
    }
}

#[test]
fn ramsey2_to_long_choice() {
    let r = reduction("ramsey2->long_choice");
    for n in 2..=4 {
        for seed in 0..10 {
            let src: Instance = Ramsey2Instance::new(n, table(seed, 4 * n, 1))
                .unwrap()
                .into();
            let (target, _) = forward(r.as_ref(), &src);
            let Instance::LongChoice(lc) = &target else {
                unreachable!()
            };
            assert_eq!(lc.n, 2 * n);
            assert!(matches!(lc.variant, LongChoiceVariant::Binary(_)));
            let cert = round_trip(r.as_ref(), &src, None);
            assert!(matches!(cert, Certificate::Clique { ref nodes, .. } if nodes.len() == n));
        }
    }
    let mono: Instance = Ramsey2Instance::new(3, Function::constant(12, 1, 1))
        .unwrap()
        .into();
    assert_eq!(
        round_trip(r.as_ref(), &mono, None),
        Certificate::Clique {
            color: 1,
            nodes: vec![0, 1, 2]
        }
    );
}

#[test]
fn ramsey_r_reads_the_right_color_bit() {
    let r = reduction("ramsey_r->long_choice");
    // color(a, b) = (a + b) mod 4 for a < b
    let color = Function::from_args_fn("sum", 12, 2, 2, |a| (a[0] + a[1]) & 3);
    let src: Instance = RamseyRInstance::new(4, 2, 12, color).unwrap().into();
    let (target, _) = forward(r.as_ref(), &src);
    let Instance::LongChoice(lc) = &target else {
        unreachable!()
    };
    let LongChoiceVariant::Binary(ks) = &lc.variant else {
        unreachable!()
    };
    assert_eq!(ks[3], 2);
    // P_3 reads bit 1 of color(a_2, x): prefix a_2 = 1, x = 2 gives color 3
    let prefix = [7, 9, 1, 5];
    assert!(lc.predicate(3, &prefix, 2));
    assert!(!lc.predicate(3, &prefix, 4));
    for seed in 0..10 {
        let src: Instance = RamseyRInstance::new(4, 2, 12, table(seed, 24, 2))
            .unwrap()
            .into();
        round_trip(r.as_ref(), &src, None);
    }
}

#[test]
fn ramsey_width_too_narrow_is_a_precondition_error() {
    let r = reduction("ramsey_r->long_choice");
    let src: Instance = RamseyRInstance::new(4, 2, 8, Function::constant(16, 2, 0))
        .unwrap()
        .into();
    assert_eq!(r.forward(&src).unwrap_err().code(), "PRECONDITION");
}

fn sunflower(seed: u64) -> Instance {
    SunflowerInstance::new(2, 8, 8, table(seed, 8, 16))
        .unwrap()
        .into()
}

#[test]
fn sunflower_to_ramsey() {
    let r = reduction("sunflower->ramsey");
    for seed in 0..10 {
        let cert = round_trip(r.as_ref(), &sunflower(seed), Some(Solver::BruteForce));
        if let Certificate::Sunflower(idx) = cert {
            assert_eq!(idx.len(), 4);
        }
    }
    // F(i) = {2i, 2i+1}: pairwise disjoint, so a sunflower with an empty core
    let f = Function::from_u64_fn("pairs", 8, 16, |i| {
        ((2 * i) & 0xff) | ((2 * i + 1) & 0xff) << 8
    });
    let src: Instance = SunflowerInstance::new(2, 8, 8, f).unwrap().into();
    assert!(matches!(
        round_trip(r.as_ref(), &src, Some(Solver::BruteForce)),
        Certificate::Sunflower(_)
    ));
}

#[test]
fn sunflower_duplicates_pull_back_as_duplicates() {
    let r = reduction("sunflower->ramsey");
    // every slot holds {1, 2}
    let src: Instance = SunflowerInstance::new(2, 4, 4, Function::constant(4, 8, 0x21))
        .unwrap()
        .into();
    let (target, aux) = forward(r.as_ref(), &src);
    let cert = Solver::BruteForce
        .solve(&target, SolveBudget::default())
        .unwrap();
    let back = r.pullback(&src, &aux, &cert).unwrap().certificate;
    assert_eq!(back, Certificate::SunflowerDup(0, 1));
}

#[test]
fn collision_to_konig() {
    let r = reduction("collision->konig");
    for n in 2..=6 {
        for seed in 0..10 {
            round_trip(r.as_ref(), &collision(seed, n), None);
        }
    }
    for seed in 0..4 {
        every_target(r.as_ref(), &collision(seed, 3), 100);
    }
}

#[test]
fn konig_construction_fills_the_interval() {
    let r = reduction("collision->konig");
    for n in 2..=6 {
        let (target, _) = forward(r.as_ref(), &collision(n as u64, n));
        let Instance::Konig(t) = &target else {
            unreachable!()
        };
        let lo = (1u64 << (n - 1)) - 1;
        let hi = (1u64 << n) - 1;
        let inside = (1..t.nodes())
            .filter(|&s| (lo..=hi).contains(&t.parent_node(s)))
            .count();
        assert_eq!(inside as u64, (1u64 << n) + 1);
    }
    // n=2, C(1)=2: node 5 plays heap node 5 with parent 2 on the left
    let src = collision_table(2, vec![3, 2, 1, 1]);
    let (target, _) = forward(r.as_ref(), &src);
    let Instance::Konig(t) = &target else {
        unreachable!()
    };
    assert_eq!(t.parent_of(5), (2, 0));
}

fn heap(n: usize) -> Instance {
    let parent = Function::tabulate(n, n + 1, move |x| {
        if x == 0 {
            0
        } else {
            ((x - 1) / 2) | ((x + 1) % 2) << n
        }
    })
    .unwrap();
    KonigInstance::new(n, parent, 0).unwrap().into()
}

#[test]
fn konig_to_collision() {
    let r = reduction("konig->collision");
    for n in 2..=6 {
        for seed in 0..10 {
            let src: Instance = KonigInstance::new(n, table(seed, n, n + 1), mix(seed) % (1 << n))
                .unwrap()
                .into();
            round_trip(r.as_ref(), &src, None);
            if n <= 3 {
                every_target(r.as_ref(), &src, 100);
            }
        }
    }
    let src = heap(3);
    let (target, _) = forward(r.as_ref(), &src);
    let Instance::Collision(c) = &target else {
        unreachable!()
    };
    assert_eq!(
        (0..7).map(|i| c.f.call(i)).collect::<Vec<_>>(),
        (1..8).collect::<Vec<_>>()
    );
    let certs = all_certificates(&target, SolveBudget::default(), usize::MAX).unwrap();
    assert_eq!(certs, vec![Certificate::Zero(7)]);
    assert_eq!(
        round_trip(r.as_ref(), &src, None),
        Certificate::Konig(KonigCert::LongPath(7))
    );
}

#[test]
fn collision_to_ekr_has_no_disjoint_pairs() {
    let r = reduction("collision->ekr");
    for n in 2..=6 {
        for seed in 0..10 {
            let src = collision(seed, n);
            round_trip(r.as_ref(), &src, None);
            let (target, _) = forward(r.as_ref(), &src);
            let Instance::Ekr(e) = &target else {
                unreachable!()
            };
            let sets: Vec<_> = (0..e.indices()).map(|i| e.pair(i)).collect();
            for (i, &(a, b)) in sets.iter().enumerate() {
                for &(c, d) in &sets[i + 1..] {
                    assert!(a == c || a == d || b == c || b == d);
                }
            }
        }
    }
    let back = round_trip(
        reduction("collision->ekr").as_ref(),
        &collision_table(2, vec![1, 2, 3, 0]),
        None,
    );
    assert_eq!(back, Certificate::Zero(3));
}

fn ekr(n: usize, sets: &[(u64, u64)]) -> Instance {
    let f = Function::from_table(2 * n, sets.iter().map(|&(a, b)| a | b << n).collect()).unwrap();
    EkrInstance::new(n, f).unwrap().into()
}

#[test]
fn ekr_to_collision() {
    let r = reduction("ekr->collision");
    for n in 2..=6 {
        for seed in 0..10 {
            let src: Instance = EkrInstance::new(n, table(seed, n, 2 * n)).unwrap().into();
            round_trip(r.as_ref(), &src, None);
        }
    }
    // disjoint first pair answers immediately
    let src = ekr(2, &[(1, 2), (3, 0), (1, 1), (2, 1)]);
    assert!(matches!(
        r.forward(&src).unwrap(),
        Outcome::Immediate(Certificate::EkrDisjoint(0, 1))
    ));
    // F(0) = {0,1}, F(1) = {1,2}, every other set {1, d} with one d repeated
    let mut sets = vec![(0, 1), (1, 2)];
    sets.extend([3, 4, 5, 6, 7, 3].map(|d| (1, d)));
    let src = ekr(3, &sets);
    assert!(every_target(r.as_ref(), &src, usize::MAX) > 0);
    assert_eq!(
        round_trip(r.as_ref(), &src, None),
        Certificate::EkrDup(2, 7)
    );
}

#[test]
fn ekr_covering_case_probes_another_index() {
    let r = reduction("ekr->collision");
    // a=0, b=1, c=2; two sets equal {a, c}; the probe set {1, 3} meets both
    let src = ekr(2, &[(0, 1), (1, 2), (0, 2), (0, 2)]);
    assert!(every_target(r.as_ref(), &src, usize::MAX) > 0);
    // probe set {0, 1} meets {a, c}; sets {a, c} and {b, 3} are disjoint
    let src = ekr(
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
    assert!(every_target(r.as_ref(), &src, usize::MAX) > 0);
    for seed in 0..40 {
        let mut sets: Vec<(u64, u64)> = vec![(0, 1), (1, 2)];
        sets.extend((2..8).map(|i| {
            let h = mix(seed * 8 + i);
            [(0, 2), (1, h % 8), (h % 8, (h >> 3) % 8)][(h >> 6) as usize % 3]
        }));
        every_target(r.as_ref(), &ekr(3, &sets), usize::MAX);
    }
}

fn bad2(seed: u64, n: usize) -> Instance {
    let (target, _) = forward(
        reduction("collision->bad2coloring").as_ref(),
        &collision(seed, n),
    );
    target
}

#[test]
fn collision_to_bad2coloring() {
    let r = reduction("collision->bad2coloring");
    for n in 1..=3 {
        for seed in 0..10 {
            round_trip(r.as_ref(), &collision(seed, n), None);
        }
    }
    every_target(r.as_ref(), &collision(3, 2), 200);
    let zero = collision_table(2, vec![0; 4]);
    let (target, aux) = forward(r.as_ref(), &zero);
    let back = pullback_verified(r.as_ref(), &zero, &aux, &Certificate::EdgeDup(6, 16)).unwrap();
    assert!(verify(&target, &Certificate::EdgeDup(6, 16)).accepted);
    assert_eq!(back.certificate, Certificate::Zero(1));
    assert_eq!(every_target(r.as_ref(), &zero, usize::MAX), 17 * 16 / 2);
}

#[test]
fn bad_coloring_hierarchy() {
    let to_turan = reduction("bad_coloring->turan");
    let lift = reduction("bad_coloring->lift");
    let lift_turan = reduction("turan->lift");
    for n in 1..=2 {
        for seed in 0..6 {
            let g2 = bad2(seed, n);
            round_trip(to_turan.as_ref(), &g2, None);
            round_trip(lift.as_ref(), &g2, None);
            let (g3, _) = forward(lift.as_ref(), &g2);
            round_trip(lift.as_ref(), &g3, None);
            let Instance::BadColoring(b) = &g2 else {
                unreachable!()
            };
            let t2: Instance = TuranInstance::new(2, n, b.edges.edges.clone())
                .unwrap()
                .into();
            round_trip(lift_turan.as_ref(), &t2, None);
        }
    }
    for k in 2..6 {
        for n in 1..5 {
            let block = (k as u64) << (2 * n);
            assert_eq!(edge_count(k, n) + block, edge_count(k + 1, n));
        }
    }
}

#[test]
fn random_colorings_lift_and_reduce() {
    for seed in 0..8 {
        let (k, n) = (2 + seed as usize % 2, 1);
        let count = edge_count(k, n);
        let w = longchoice_core::problems::node_width(k, n);
        let iw = longchoice_core::problems::index_width(count);
        let nodes = (k as u64) << n;
        let edges = Function::tabulate(iw, 2 * w, |i| {
            let h = mix(seed ^ mix(i));
            (h % nodes) | ((h >> 20) % nodes) << w
        })
        .unwrap();
        let colors = table(seed, w, k.next_power_of_two().trailing_zeros() as usize);
        let src: Instance = BadColoringInstance::new(k, n, edges.clone(), colors)
            .unwrap()
            .into();
        round_trip(reduction("bad_coloring->lift").as_ref(), &src, None);
        every_target(reduction("bad_coloring->turan").as_ref(), &src, 100);
        let t: Instance = TuranInstance::new(k, n, edges).unwrap().into();
        every_target(reduction("turan->lift").as_ref(), &t, 50);
    }
}

#[test]
fn bad_kset_chain() {
    let base = reduction("collision->bad_kset");
    let lift = reduction("bad_kset->lift");
    for n in 1..=4 {
        for seed in 0..8 {
            let src = collision(seed, n);
            round_trip(base.as_ref(), &src, None);
            let (k1, _) = forward(base.as_ref(), &src);
            round_trip(lift.as_ref(), &k1, None);
            if n <= 2 {
                every_target(lift.as_ref(), &k1, usize::MAX);
            }
        }
    }
    // out-of-range members in a random 2-set system
    for seed in 0..10 {
        let n = 2;
        let w = longchoice_core::problems::node_width(2, n);
        let src: Instance = BadKSetInstance::new(
            2,
            n,
            table(seed, BadKSetInstance::index_width_for(2, n), 2 * w),
            table(seed + 1, w, 1),
        )
        .unwrap()
        .into();
        every_target(lift.as_ref(), &src, 300);
    }
}

fn empty(seed: u64, n: usize) -> Instance {
    let f = Function::tabulate(n, n, |x| mix(seed ^ mix(x)) % ((1 << n) - 1)).unwrap();
    EmptyInstance::new(n, f).unwrap().into()
}

#[test]
fn empty_to_short_choice() {
    let r = reduction("empty->short_choice");
    for n in 2..=7 {
        for seed in 0..8 {
            let src = empty(seed, n);
            round_trip(r.as_ref(), &src, None);
            let (target, _) = forward(r.as_ref(), &src);
            let Instance::ShortChoice(sc) = &target else {
                unreachable!()
            };
            let Instance::Empty(e) = &src else {
                unreachable!()
            };
            let trace = trace_short_choice_minority(sc, SolveBudget::default()).unwrap();
            let images: Vec<u64> = trace.prefix.iter().map(|&a| e.f.call(a)).collect();
            for len in 1..=images.len() {
                let t = RangeTracker::build(n, &images[..len]);
                assert!(t.size() + 2 >= 1 << (n - (len - 1)), "n={n} seed={seed}");
            }
        }
        every_target(r.as_ref(), &empty(n as u64, n), 50);
    }
    let src: Instance = EmptyInstance::new(2, Function::from_table(2, vec![0, 1, 3, 3]).unwrap())
        .unwrap()
        .into();
    let (target, aux) = forward(r.as_ref(), &src);
    for c in all_certificates(&target, SolveBudget::default(), usize::MAX).unwrap() {
        let back = pullback_verified(r.as_ref(), &src, &aux, &c).unwrap();
        assert_eq!(back.certificate, Certificate::EmptyHole(2));
    }
}

/// Largest set of pairwise equidistant points in `{0,1}^m`, by exhaustive search.
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

#[test]
fn equidistance_bound() {
    for m in 2..=4 {
        let best = max_equidistant(m);
        assert!(best < m + 2, "m={m}: {best} equidistant points");
        assert!(best >= m, "m={m}");
    }
}

#[test]
fn weak_collision_to_hamming() {
    let r = reduction("weak_collision->ramsey_hamming");
    for (n, m) in [(4, 2), (5, 2), (6, 3)] {
        for seed in 0..6 {
            let src: Instance = WeakCollisionInstance::new(n, m, table(seed, n, m))
                .unwrap()
                .into();
            let cert = round_trip(r.as_ref(), &src, Some(Solver::BruteForce));
            assert!(matches!(cert, Certificate::Collision(..)));
        }
    }
    let constant: Instance = WeakCollisionInstance::new(4, 2, Function::constant(4, 2, 1))
        .unwrap()
        .into();
    assert_eq!(
        round_trip(r.as_ref(), &constant, Some(Solver::BruteForce)),
        Certificate::Collision(0, 1)
    );
    let narrow: Instance = WeakCollisionInstance::new(3, 2, Function::constant(3, 2, 1))
        .unwrap()
        .into();
    assert_eq!(r.forward(&narrow).unwrap_err().code(), "PRECONDITION");
}

#[test]
fn weak_schur_to_ramsey() {
    let r = reduction("weak_schur->ramsey");
    let parity = Function::from_u64_fn("parity", 4, 1, |v| (v + 1) & 1);
    let src: Instance = WeakSchurInstance::new(2, 4, parity).unwrap().into();
    let (target, aux) = forward(r.as_ref(), &src);
    let Instance::WeakSchur(s) = &src else {
        unreachable!()
    };
    for c in all_certificates(&target, SolveBudget::default(), usize::MAX).unwrap() {
        let back = pullback_verified(r.as_ref(), &src, &aux, &c)
            .unwrap()
            .certificate;
        let Certificate::SchurTriple(a, b) = back else {
            unreachable!()
        };
        assert!(s.color(a) == s.color(b) && s.color(b) == s.color(a + b));
    }
    for seed in 0..10 {
        let src: Instance = WeakSchurInstance::new(2, 4, table(seed, 4, 1))
            .unwrap()
            .into();
        round_trip(r.as_ref(), &src, Some(Solver::BruteForce));
        let src: Instance = WeakSchurInstance::new(3, 4, table(seed, 4, 2))
            .unwrap()
            .into();
        round_trip(r.as_ref(), &src, Some(Solver::BruteForce));
    }
    let single: Instance = WeakSchurInstance::new(1, 3, Function::constant(3, 0, 0))
        .unwrap()
        .into();
    assert_eq!(
        round_trip(r.as_ref(), &single, None),
        Certificate::SchurTriple(1, 1)
    );
}

#[test]
fn unconstrain_swaps_start() {
    let r = reduction("constrained_long_choice->long_choice");
    for n in 2..=7 {
        for seed in 0..8 {
            let preds = (0..n - 1)
                .map(|i| table(seed ^ (i as u64) << 32, (i + 2) * n, 1))
                .collect();
            let a0 = mix(seed) % (1 << n);
            let src: Instance =
                LongChoiceInstance::new(n, LongChoiceVariant::Constrained(a0), preds)
                    .unwrap()
                    .into();
            let back = round_trip(r.as_ref(), &src, None);
            let Certificate::ChoiceSeq(seq) = back else {
                unreachable!()
            };
            assert_eq!(seq[0], a0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn collision_reductions_round_trip(seed in any::<u64>(), n in 2usize..6) {
        let src = collision(seed, n);
        for name in [
            "collision->long_choice",
            "collision->konig",
            "collision->ekr",
            "collision->bad2coloring",
            "collision->bad_kset",
        ] {
            let cert = round_trip(reduction(name).as_ref(), &src, None);
            prop_assert!(verify(&src, &cert).accepted);
        }
    }
}
