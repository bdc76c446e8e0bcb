//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test -p kampen-cli --test acceptance -- --nocapture`).
//! Known-answer instances are cross-checked against independent oracles
//! that share no code with the decision pipeline.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kampen_core::complex::{complete_bipartite, full_simplex, simplex_skeleton, VertexId};
use kampen_core::deljoin::{is_in_simplicial_deleted_join, retract_point, JoinPoint};
use kampen_core::delprod::{act, boundary, DeletedProduct, Permutation, ProductCell};
use kampen_core::genmaps::{
    assemble_cocycle, sample_map_generic, verify_cocycle, verify_equivariance,
};
use kampen_core::linalg::Rat;
use kampen_core::obstruction::{
    class_vanishes, smith_normal_form, verify_witness, ClassDecision, IntegerMatrix,
};
use kampen_core::verdict::{decide, CertificateReport, DecideOptions, Outcome, Regime};

fn opts(r: usize, d: usize, seed: u64) -> DecideOptions {
    DecideOptions {
        r,
        d,
        seed,
        source: None,
    }
}

/// Exact orientation of an ordered point triple in the integer plane.
fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

/// Proper crossing test for closed segments in general position.
fn segments_cross(p: [(i64, i64); 2], q: [(i64, i64); 2]) -> bool {
    orient(p[0], p[1], q[0]) * orient(p[0], p[1], q[1]) < 0
        && orient(q[0], q[1], p[0]) * orient(q[0], q[1], p[1]) < 0
}

#[test]
fn criterion_1_k5_in_the_plane() {
    let started = Instant::now();
    let k5 = simplex_skeleton(4, 1);
    let report = decide(&k5, &opts(2, 2, 1)).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
    let ob = report.obstruction.as_ref().unwrap();
    assert!(matches!(
        ob.certificate,
        CertificateReport::Nonvanishing { .. }
    ));
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");

    // Independent oracle: every generic straight-line drawing of K_5 has an
    // odd number of crossings between disjoint edge pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let edges: Vec<(usize, usize)> = (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .collect();
    for _ in 0..100 {
        let points: Vec<(i64, i64)> = loop {
            let pts: Vec<(i64, i64)> = (0..5)
                .map(|_| {
                    (
                        (rng.next_u32() & 0xFFFFF) as i64,
                        (rng.next_u32() & 0xFFFFF) as i64,
                    )
                })
                .collect();
            let degenerate = (0..5).any(|a| {
                (a + 1..5).any(|b| {
                    pts[a] == pts[b] || (b + 1..5).any(|c| orient(pts[a], pts[b], pts[c]) == 0)
                })
            });
            if !degenerate {
                break pts;
            }
        };
        let mut crossings = 0usize;
        for (i, &(a, b)) in edges.iter().enumerate() {
            for &(c, d) in &edges[i + 1..] {
                if a != c && a != d && b != c && b != d {
                    let pe = [points[a], points[b]];
                    let qe = [points[c], points[d]];
                    if segments_cross(pe, qe) {
                        crossings += 1;
                    }
                }
            }
        }
        assert_eq!(crossings % 2, 1, "crossing parity must be odd");
    }
    println!("acceptance 1 PASS: K_5 r=2 d=2 not almost embeddable ({elapsed:?}), parity oracle odd in 100/100 drawings");
}

#[test]
fn criterion_2_k33_in_the_plane() {
    let started = Instant::now();
    let k33 = complete_bipartite(3, 3);
    let report = decide(&k33, &opts(2, 2, 1)).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("acceptance 2 PASS: K_3,3 r=2 d=2 not almost embeddable ({elapsed:?})");
}

#[test]
fn criterion_3_van_kampen_flores() {
    let started = Instant::now();
    let k = simplex_skeleton(6, 2);
    let x = DeletedProduct::build_range(&k, 2, 3, 5).unwrap();
    assert_eq!(x.cells(4).len(), 140, "ordered critical cells");
    let report = decide(&k, &opts(2, 4, 1)).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("acceptance 3 PASS: skeleton(D6,2) r=2 d=4 not almost embeddable ({elapsed:?})");
}

#[test]
fn criterion_4_tverberg_instances() {
    for (r, d, limit_s) in [(2usize, 1usize, 60u64), (2, 2, 60), (3, 1, 60), (3, 2, 120)] {
        let n = (d + 1) * (r - 1);
        let k = full_simplex(n);
        let started = Instant::now();
        let report = decide(&k, &opts(r, d, 1)).unwrap();
        let elapsed = started.elapsed();
        assert_eq!(
            report.verdict,
            Outcome::NotAlmostREmbeddable,
            "sigma^{n} r={r} d={d}"
        );
        if (r, d) == (3, 2) {
            assert_eq!(report.obstruction.as_ref().unwrap().critical_orbits, 301);
        }
        assert!(
            elapsed < Duration::from_secs(limit_s),
            "sigma^{n} took {elapsed:?}"
        );
        println!("acceptance 4 PASS: sigma^{n} r={r} d={d} not almost embeddable ({elapsed:?})");
    }
}

#[test]
fn criterion_5_k5_in_three_space() {
    let started = Instant::now();
    let k5 = simplex_skeleton(4, 1);
    let report = decide(&k5, &opts(2, 3, 1)).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(report.verdict, Outcome::AlmostREmbeddable);
    assert_eq!(report.regime, Regime::TrivialMapExists);
    assert!(report.checks.metastable, "2*3 >= 3*1 + 3");
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("acceptance 5 PASS: K_5 r=2 d=3 almost embeddable via trivial map + metastable ({elapsed:?})");
}

fn boundary_squared_vanishes(c: &ProductCell) -> bool {
    let mut acc: BTreeMap<ProductCell, i64> = BTreeMap::new();
    for (facet, s1) in boundary(c).terms {
        for (ff, s2) in boundary(&facet).terms {
            *acc.entry(ff).or_insert(0) += (s1 * s2) as i64;
        }
    }
    acc.values().all(|&v| v == 0)
}

fn random_join_point(rng: &mut ChaCha8Rng, r: usize) -> JoinPoint {
    let base = full_simplex(3);
    loop {
        let mut factors: Vec<BTreeMap<VertexId, Rat>> = vec![BTreeMap::new(); r];
        let mut total = Rat::new(0.into(), 1.into());
        for f in factors.iter_mut() {
            let support = 1 + rng.next_u32() % 3;
            for _ in 0..support {
                let v = VertexId(rng.next_u32() % 4);
                let w = Rat::new((1 + rng.next_u32() % 40).into(), 1.into());
                *f.entry(v).or_insert_with(|| Rat::new(0.into(), 1.into())) += &w;
                total += &w;
            }
        }
        for f in factors.iter_mut() {
            for c in f.values_mut() {
                *c /= &total;
            }
        }
        let p = JoinPoint::new(factors, &base).unwrap();
        if retract_point(&p).is_ok() {
            return p;
        }
    }
}

#[test]
fn criterion_6_exact_invariant_suite() {
    // Boundary squared vanishes, exhaustively.
    let k5 = simplex_skeleton(4, 1);
    let x_k5 = DeletedProduct::build(&k5, 2).unwrap();
    let s4 = full_simplex(4);
    let x_s4 = DeletedProduct::build(&s4, 3).unwrap();
    assert!(x_k5.all_cells().all(boundary_squared_vanishes));
    assert!(x_s4.all_cells().all(boundary_squared_vanishes));

    // Action freeness, exhaustively.
    for cell in x_s4.all_cells() {
        for pi in Permutation::all(3) {
            if !pi.is_identity() {
                assert_ne!(act(&pi, cell), *cell);
            }
        }
    }

    // Cocycle condition and equivariance law on sampled maps, including
    // instances whose deleted product reaches one above the critical
    // dimension (where the condition is nonvacuous).
    for (base, x, d) in [(&k5, &x_k5, 2usize), (&k5, &x_k5, 1), (&s4, &x_s4, 1)] {
        for seed in [1u64, 2] {
            let f = sample_map_generic(base, x, d, seed).unwrap();
            let c = assemble_cocycle(&f, x).unwrap();
            assert!(verify_cocycle(&c, x), "delta c = 0 (d={d} seed={seed})");
            assert!(verify_equivariance(&c), "equivariance (d={d} seed={seed})");
        }
    }

    // Retraction: idempotence, fixed points, equivariance on 200 random
    // points, exact rational equality throughout.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E77);
    for i in 0..200 {
        let r = if i % 2 == 0 { 2 } else { 3 };
        let p = random_join_point(&mut rng, r);
        let q = retract_point(&p).unwrap();
        assert!(is_in_simplicial_deleted_join(&q));
        assert_eq!(retract_point(&q).unwrap(), q, "idempotence / fixed point");
        assert!(q.total_mass().is_one());
        for pi in Permutation::all(r) {
            assert_eq!(retract_point(&p.permute(&pi)).unwrap(), q.permute(&pi));
        }
    }

    // Smith normal form certification on 100 random sparse matrices up to
    // 50x80: U A V = D exactly, divisibility chain along the diagonal, and
    // a modular unimodularity spot-check on the transforms.
    const P: u64 = (1 << 61) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x514F);
    for trial in 0..100 {
        let rows = 5 + (rng.next_u32() % 46) as usize;
        let cols = 5 + (rng.next_u32() % 76) as usize;
        let mut a = IntegerMatrix::zero(rows, cols);
        for i in 0..rows {
            for _ in 0..4 {
                let j = (rng.next_u32() as usize) % cols;
                let mag = (1 + rng.next_u32() % 2) as i64;
                let v = if rng.next_u32() % 2 == 0 { mag } else { -mag };
                a.set(i, j, v.into());
            }
        }
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d, "UAV = D, trial {trial}");
        assert!(snf.d.is_diagonal());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !num_traits::Zero::is_zero(&w[1]) {
                assert!(
                    !num_traits::Zero::is_zero(&w[0]) && w[1].is_multiple_of(&w[0]),
                    "divisibility chain, trial {trial}"
                );
            }
        }
        assert!(diag.iter().all(|v| !v.is_negative()));
        for m in [&snf.u, &snf.v] {
            let dm = m.determinant_mod(P);
            assert!(
                dm == 1 || dm == P - 1,
                "transform determinant, trial {trial}"
            );
        }
    }
    println!("acceptance 6 PASS: exact invariant suite (dd=0, delta c=0, equivariance, freeness, retraction x200, SNF x100)");
}

#[test]
fn criterion_7_finger_move_invariance() {
    let k5 = simplex_skeleton(4, 1);
    let x_k5 = DeletedProduct::build(&k5, 2).unwrap();
    let s4 = full_simplex(4);
    let x_s4 = DeletedProduct::build(&s4, 3).unwrap();
    for pair in 0..10u64 {
        let (s1, s2) = (2 * pair + 1, 2 * pair + 2);

        let c1 = assemble_cocycle(&sample_map_generic(&k5, &x_k5, 2, s1).unwrap(), &x_k5).unwrap();
        let c2 = assemble_cocycle(&sample_map_generic(&k5, &x_k5, 2, s2).unwrap(), &x_k5).unwrap();
        let diff = c1.difference(&c2);
        match class_vanishes(&x_k5, &diff).unwrap() {
            ClassDecision::Vanishes(w) => assert!(verify_witness(&x_k5, &diff, &w)),
            _ => panic!("K_5 seeds {s1}/{s2}: difference must be a coboundary"),
        }

        let c1 = assemble_cocycle(&sample_map_generic(&s4, &x_s4, 1, s1).unwrap(), &x_s4).unwrap();
        let c2 = assemble_cocycle(&sample_map_generic(&s4, &x_s4, 1, s2).unwrap(), &x_s4).unwrap();
        let diff = c1.difference(&c2);
        match class_vanishes(&x_s4, &diff).unwrap() {
            ClassDecision::Vanishes(w) => assert!(verify_witness(&x_s4, &diff, &w)),
            _ => panic!("sigma^4 seeds {s1}/{s2}: difference must be a coboundary"),
        }
    }
    println!("acceptance 7 PASS: cocycle differences over 10 seed pairs are verified equivariant coboundaries");
}

#[test]
fn criterion_8_byte_identical_reports() {
    // Library level: identical options give byte-identical reports once the
    // wall-clock block is stripped.
    let k5 = simplex_skeleton(4, 1);
    let mut a = decide(&k5, &opts(2, 2, 77)).unwrap();
    let mut b = decide(&k5, &opts(2, 2, 77)).unwrap();
    a.strip_timings();
    b.strip_timings();
    assert_eq!(a.to_json(), b.to_json());

    // Binary level: two runs of `decide` with equal seeds and flags.
    let dir = std::env::temp_dir().join("kampen-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("k5.cplx");
    std::fs::write(&input, k5.serialize()).unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_kampen"))
            .args([
                "decide",
                input.to_str().unwrap(),
                "--r",
                "2",
                "--d",
                "2",
                "--seed",
                "7",
                "--format",
                "json",
                "--no-timings",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "reports must be byte-identical");
    let parsed: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(parsed["verdict"], "NotAlmostREmbeddable");
    println!("acceptance 8 PASS: equal seeds give byte-identical JSON reports");
}

/// Extra corroboration for the sigma^4 Tverberg instance: over a small
/// integer grid, every injective placement of the five vertices on the line
/// admits three pairwise disjoint faces with a common point, so no almost
/// 3-embedding can come from such maps.
#[test]
fn tverberg_grid_oracle_for_sigma4() {
    // Three blocks of an injective 5-point configuration with intersecting
    // convex hulls always exist; verify exhaustively over all 5-subsets of
    // a 10-point grid (the property depends only on the value multiset).
    fn blocks_intersect(values: &[i64]) -> bool {
        // Partition {0..4} into 3 nonempty blocks; hulls are intervals.
        fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
            // assignment vector a with max(a)+1 == k
            let mut out = Vec::new();
            let mut a = vec![0usize; n];
            loop {
                if a.iter().copied().max().unwrap() + 1 == k {
                    out.push(a.clone());
                }
                let mut i = n - 1;
                loop {
                    a[i] += 1;
                    if a[i] <= k - 1 {
                        break;
                    }
                    a[i] = 0;
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                }
            }
        }
        for assignment in partitions(values.len(), 3) {
            let mut lo = [i64::MAX; 3];
            let mut hi = [i64::MIN; 3];
            for (i, &b) in assignment.iter().enumerate() {
                lo[b] = lo[b].min(values[i]);
                hi[b] = hi[b].max(values[i]);
            }
            let max_lo = lo.iter().max().unwrap();
            let min_hi = hi.iter().min().unwrap();
            if max_lo <= min_hi {
                return true;
            }
        }
        false
    }

    let grid: Vec<i64> = (0..10).collect();
    let mut subset = [0usize; 5];
    fn rec(
        grid: &[i64],
        start: usize,
        depth: usize,
        subset: &mut [usize; 5],
        check: &dyn Fn(&[i64]) -> bool,
    ) {
        if depth == 5 {
            let values: Vec<i64> = subset.iter().map(|&i| grid[i]).collect();
            assert!(check(&values), "no Tverberg partition for {values:?}");
            return;
        }
        for i in start..grid.len() {
            subset[depth] = i;
            rec(grid, i + 1, depth + 1, subset, check);
        }
    }
    rec(&grid, 0, 0, &mut subset, &blocks_intersect);
    println!("oracle PASS: every injective grid placement of sigma^4 has a triple point");
}
