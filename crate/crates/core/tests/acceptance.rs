//! Acceptance suite: one PASS/FAIL line per criterion, with the tolerances
//! pinned below. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use nashreduce_core::gadget::{
    lift_circuit_values, standard_kinds, sweep, GadgetCircuit, SweepConfig,
};
use nashreduce_core::io::{game_from_json, game_to_json, mapping_to_json, profile_from_json, profile_to_json, MappingFile};
use nashreduce_core::mult::{
    beta_for, build_mult_robust, build_mult_robust_unchecked, build_mult_unary, unary_size,
    unary_tau, Construction,
};
use nashreduce_core::random;
use nashreduce_core::rational::{format, int, ratio, within, Rational};
use nashreduce_core::reduction::{bimatrixify, recover_from_bimatrix, recover_full, reduce_full_with_budget};
use nashreduce_core::solver::{
    bimatrix_grid, block_masses, lift_to_bimatrix, support_enumeration, LiftMode,
};
use nashreduce_core::verify::{verify_wsne, verify_wsne_clamped};
use nashreduce_core::{AnyGame, BimatrixGame, Game, MixedProfile, SparseMatrix};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Two free inputs feeding one multiplication gadget.
fn mult_circuit(construction: Construction, eps: &Rational) -> (GadgetCircuit, usize, usize, usize) {
    let mut c = GadgetCircuit::new();
    let a = c.add_input("a");
    let b = c.add_input("b");
    let out = match construction {
        Construction::UnaryPoly => build_mult_unary(&mut c, a, b, eps),
        Construction::BinaryLog => build_mult_robust(&mut c, a, b, eps),
    }
    .expect("multiplier builds");
    (c, a.player, b.player, out.player)
}

/// Lifts the circuit at `(p1, p2)`, verifies it with the inputs clamped and
/// returns the output value.
fn run_mult(
    (c, a, b, out): &(GadgetCircuit, usize, usize, usize),
    game: &nashreduce_core::PolymatrixGame,
    p1: &Rational,
    p2: &Rational,
    eps: &Rational,
) -> Result<Rational, String> {
    let inputs = BTreeMap::from([(*a, p1.clone()), (*b, p2.clone())]);
    let profile = lift_circuit_values(c, &inputs).map_err(err)?;
    let clamped = [*a, *b].into_iter().collect();
    let report = verify_wsne_clamped(game, &profile, eps, &clamped).map_err(err)?;
    check(report.passed(), || {
        format!("lifted profile at ({}, {}) fails at eps; players {:?}", format(p1), format(p2), report.failing_players())
    })?;
    Ok(profile.strategy(*out).value().clone())
}

fn criterion_1() -> Outcome {
    let config = SweepConfig::new(ratio(1, 20), ratio(1, 20), ratio(1, 100));
    let mut outcomes = 0;
    let kinds = standard_kinds();
    for kind in &kinds {
        let report = sweep(kind, &config).map_err(err)?;
        check(report.passed(), || {
            format!(
                "{}: {} violations, {} empty cases, first {:?}",
                kind.name(),
                report.violation_count,
                report.empty_cases,
                report.violations.first()
            )
        })?;
        outcomes += report.outcomes;
    }
    Ok(format!("{} kinds, {outcomes} accepted outcomes, 0 violations", kinds.len()))
}

fn criterion_2() -> Outcome {
    let eps = ratio(1, 100);
    let tau = unary_tau(&eps);
    check(tau == ratio(3, 100), || "tau != 3/100".into())?;
    let p1 = int(7) * &tau + &eps / int(4);
    let p2 = int(3) * &tau - &eps / int(8);
    let circuit = mult_circuit(Construction::UnaryPoly, &eps);
    let game = circuit.0.combine().map_err(err)?;
    let p = run_mult(&circuit, &game, &p1, &p2, &eps)?;
    let bound = int(19) * &eps;
    check(within(&p, &(&p1 * &p2), &bound), || {
        format!("output {} not within 19 eps of {}", format(&p), format(&(&p1 * &p2)))
    })?;
    let twelve = int(12) * &tau * &tau;
    Ok(format!(
        "p = {} ; p1 p2 = {} ; 12 tau^2 = {} ; |p - 12 tau^2| = {}",
        format(&p),
        format(&(&p1 * &p2)),
        format(&twelve),
        format(&(&p - &twelve).abs())
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut summary = Vec::new();
    for (construction, eps) in [
        (Construction::UnaryPoly, ratio(1, 100)),
        (Construction::BinaryLog, ratio(1, 1_000_000)),
    ] {
        let circuit = mult_circuit(construction, &eps);
        let game = circuit.0.combine().map_err(err)?;
        let mut worst = int(0);
        for _ in 0..100 {
            let p1 = ratio(rng.gen_range(0..=10_000), 10_000);
            let p2 = ratio(rng.gen_range(0..=10_000), 10_000);
            let p = run_mult(&circuit, &game, &p1, &p2, &eps)?;
            let gap = (&p - &p1 * &p2).abs();
            let ok = match construction {
                Construction::UnaryPoly => gap <= int(19) * &eps,
                // 3 sqrt(eps), compared by squaring.
                Construction::BinaryLog => &gap * &gap <= int(9) * &eps,
            };
            check(ok, || {
                format!("{}: |p - p1 p2| = {} at ({}, {})", construction.name(), format(&gap), format(&p1), format(&p2))
            })?;
            worst = worst.max(gap);
        }
        summary.push(format!(
            "{} worst |p - p1 p2| = {:.3e}",
            construction.name(),
            nashreduce_core::rational::approx(&worst)
        ));
    }
    Ok(summary.join("; "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let eps_m = ratio(3, 10);
    for trial in 0..20 {
        let poly = random::polymatrix_game(&mut rng, &[2, 2, 2], 10).map_err(err)?;
        let red = bimatrixify(&poly, &eps_m).map_err(err)?;
        check(red.params.eps_2 == Some(ratio(1, 20)), || "eps_2 != 1/20".into())?;
        check(red.params.alpha == Some(int(1440)), || "alpha != 1440".into())?;
        let nash = support_enumeration(&red.game).map_err(err)?;
        let recovered = recover_from_bimatrix(&red.game, &nash.profile, &red.mapping).map_err(err)?;
        let report = verify_wsne(&poly, &recovered, &eps_m).map_err(err)?;
        check(report.passed(), || format!("game {trial}: recovered profile fails at eps_m"))?;
    }
    Ok("20/20 recovered profiles verify at eps_m = 3/10".into())
}

fn imitation_game(rng: &mut ChaCha8Rng, n: usize, blocks: Option<(&[usize], &Rational)>) -> BimatrixGame {
    let mut a = SparseMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a.set(r, c, random::unit_rational(rng, 10));
        }
    }
    let mut g = match blocks {
        Some((sizes, alpha)) => {
            let mut start = 0;
            for &s in sizes {
                for r in start..start + s {
                    for c in start..start + s {
                        a.set(r, c, -alpha.clone());
                    }
                }
                start += s;
            }
            BimatrixGame::new(a, SparseMatrix::identity(n)).unwrap()
        }
        None => BimatrixGame::new(a, SparseMatrix::identity(n)).unwrap(),
    };
    if let Some((sizes, alpha)) = blocks {
        g = g.with_blocks(sizes.to_vec(), Some(alpha.clone())).unwrap();
    }
    g
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let step = ratio(1, 50);
    let (mut imitation, mut uniform) = (0u128, 0u128);
    for n in 2..=4usize {
        for eps in [ratio(1, n as i64), ratio(1, 2 * n as i64)] {
            for _ in 0..3 {
                let g = imitation_game(&mut rng, n, None);
                let grid = bimatrix_grid(&g, &eps, &step, 1_000_000).map_err(err)?;
                for &(r, c) in &grid.pairs {
                    let (x, y) = (&grid.rows[r], &grid.cols[c]);
                    check(y.support & !x.support == 0, || {
                        format!("N={n}: support(y) {:b} not inside support(x) {:b}", y.support, x.support)
                    })?;
                }
                imitation += grid.count();
            }
        }
    }
    let partitions: [&[usize]; 5] = [&[1, 1], &[1, 2], &[1, 1, 1], &[2, 2], &[1, 1, 2]];
    for sizes in partitions {
        let n: usize = sizes.iter().sum();
        let m = sizes.len() as i64;
        for eps in [ratio(1, n as i64), ratio(1, 2 * n as i64)] {
            let alpha = int(8 * m * m) / &eps;
            let bound = (int(1) + &eps) / &alpha;
            for _ in 0..3 {
                let g = imitation_game(&mut rng, n, Some((sizes, &alpha)));
                let grid = bimatrix_grid(&g, &eps, &step, 1_000_000).map_err(err)?;
                let mut checked_cols = BTreeMap::new();
                for &(r, c) in &grid.pairs {
                    let (x, y) = (&grid.rows[r], &grid.cols[c]);
                    check(y.support & !x.support == 0, || format!("blocks {sizes:?}: support(y) not inside support(x)"))?;
                    if checked_cols.insert(c, ()).is_none() {
                        for s in &y.members {
                            let masses = block_masses(s, sizes);
                            for a in &masses {
                                for b in &masses {
                                    check(within(a, b, &bound), || {
                                        format!("blocks {sizes:?}: masses {} and {} differ by more than {}", format(a), format(b), format(&bound))
                                    })?;
                                }
                            }
                        }
                    }
                }
                uniform += grid.count();
            }
        }
    }
    Ok(format!(
        "{imitation} imitation and {uniform} block-uniform grid equilibria, 0 violations"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let nash = [1, 0, 1];
    let game = random::pure_nash_game(&mut rng, &[2, 2, 2], &nash, 20).map_err(err)?;
    let source = MixedProfile::pure(&[2, 2, 2], &nash);
    check(verify_wsne(&game, &source, &int(0)).map_err(err)?.passed(), || "test game lacks its pure Nash".into())?;

    let red = reduce_full_with_budget(&game, &ratio(9, 10), Construction::BinaryLog, 10_000_000).map_err(err)?;
    let p = &red.params;
    check(p.eps_m == ratio(1, 100_000) && p.eps_m_capped == Some(true), || {
        format!("eps_m = {} (capped {:?}), expected the 1/100000 cap", format(&p.eps_m), p.eps_m_capped)
    })?;
    let eps_2 = p.eps_2.clone().ok_or("no eps_2")?;

    let poly_profile = red.lift(&source).map_err(err)?;
    let poly_report = verify_wsne(&red.linearization.game, &poly_profile, &p.eps_m).map_err(err)?;
    check(poly_report.passed(), || format!("lifted polymatrix profile fails: {:?}", poly_report.failing_players()))?;

    let g2 = &red.bimatrix.game;
    let pair = lift_to_bimatrix(g2, &poly_profile, LiftMode::Balanced).map_err(err)?;
    let report = verify_wsne(g2, &pair, &eps_2).map_err(err)?;
    check(report.passed(), || format!("bimatrix witness fails at eps_2; realized {}", format(&report.realized_eps())))?;
    let normalized = red.bimatrix.normalized_game();
    let eps_2n = p.eps_2_normalized.clone().ok_or("no normalized eps_2")?;
    check(verify_wsne(&normalized, &pair, &eps_2n).map_err(err)?.passed(), || "normalized witness fails".into())?;

    let recovered = recover_full(&red.mapping, &pair).map_err(err)?;
    check(recovered == source, || "recovered profile differs from the pure Nash".into())?;
    Ok(format!(
        "eps_m = 1/100000 (eps0 branch), {} polymatrix players, N = {}, witness realized eps = {:.3e} <= eps_2 = {:.3e}",
        red.linearization.game.num_players(),
        g2.size(),
        nashreduce_core::rational::approx(&report.realized_eps()),
        nashreduce_core::rational::approx(&eps_2)
    ))
}

fn players_added(build: impl FnOnce(&mut GadgetCircuit, nashreduce_core::gadget::Wire, nashreduce_core::gadget::Wire)) -> usize {
    let mut c = GadgetCircuit::new();
    let a = c.add_input("a");
    let b = c.add_input("b");
    let before = c.num_players();
    build(&mut c, a, b);
    c.num_players() - before
}

fn criterion_7() -> Outcome {
    let mut unary = Vec::new();
    for den in [20, 40, 80] {
        let eps = ratio(1, den);
        let built = players_added(|c, a, b| {
            build_mult_unary(c, a, b, &eps).unwrap();
        });
        check(built == unary_size(&eps).map_err(err)?, || format!("unary size formula disagrees at 1/{den}"))?;
        unary.push(built);
    }
    check(unary == vec![65, 226, 785], || format!("unary sizes {unary:?}"))?;
    for w in unary.windows(2) {
        let r = w[1] as f64 / w[0] as f64;
        check((3.2..=4.8).contains(&r), || format!("unary growth ratio {r:.3} outside [3.2, 4.8]"))?;
    }

    let mut log = Vec::new();
    for e in [4u32, 6, 8] {
        let eps = Rational::new(1.into(), num_bigint::BigInt::from(10u64.pow(e)));
        let beta = beta_for(&eps).map_err(err)?;
        let built = players_added(|c, a, b| {
            build_mult_robust_unchecked(c, a, b, &eps).unwrap();
        });
        log.push((beta as i64, built as i64));
    }
    check(log.iter().map(|p| p.0).collect::<Vec<_>>() == vec![7, 10, 14], || format!("betas {log:?}"))?;
    let slope = |(b0, s0): (i64, i64), (b1, s1): (i64, i64)| ratio(s1 - s0, b1 - b0);
    check(slope(log[0], log[1]) == slope(log[1], log[2]), || format!("log sizes {log:?} are not affine in beta"))?;
    Ok(format!(
        "unary {unary:?} (ratios {:.2}, {:.2}); log (beta, players) {log:?}, slope {}",
        unary[1] as f64 / unary[0] as f64,
        unary[2] as f64 / unary[1] as f64,
        format(&slope(log[0], log[1]))
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let round_trip = |g: AnyGame| -> Result<(), String> {
        let text = game_to_json(&g).map_err(err)?;
        let back = game_from_json(&text).map_err(err)?;
        check(back == g, || format!("{} game changed in a round trip", g.class_name()))?;
        check(game_to_json(&back).map_err(err)? == text, || "re-serialization differs".into())
    };
    for _ in 0..50 {
        let k = rng.gen_range(2..=3);
        let counts: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        round_trip(AnyGame::Normal(random::normal_game(&mut rng, &counts, 12).map_err(err)?))?;
        let counts: Vec<usize> = (0..rng.gen_range(2..=4)).map(|_| rng.gen_range(2..=3)).collect();
        let poly = random::polymatrix_game(&mut rng, &counts, 12).map_err(err)?;
        round_trip(AnyGame::Polymatrix(poly.clone()))?;
        let bi = if rng.gen_bool(0.5) {
            bimatrixify(&poly, &ratio(1, 10)).map_err(err)?.game
        } else {
            let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            random::bimatrix_game(&mut rng, rows, cols, 12).map_err(err)?
        };
        round_trip(AnyGame::Bimatrix(bi))?;
        let profile = random::profile(&mut rng, &counts, 30).map_err(err)?;
        let text = profile_to_json(&profile).map_err(err)?;
        check(profile_from_json(&text).map_err(err)? == profile, || "profile changed in a round trip".into())?;
    }

    let game = random::pure_nash_game(&mut rng, &[2, 2, 2], &[0, 1, 1], 20).map_err(err)?;
    let emit = || -> Result<(String, String), String> {
        let red = reduce_full_with_budget(&game, &ratio(9, 10), Construction::BinaryLog, 10_000_000).map_err(err)?;
        Ok((
            game_to_json(&AnyGame::Bimatrix(red.bimatrix.game.clone())).map_err(err)?,
            mapping_to_json(&MappingFile::new(red.mapping, red.params)).map_err(err)?,
        ))
    };
    let first = emit()?;
    let second = emit()?;
    check(first == second, || "two reductions of the same game differ".into())?;
    Ok(format!(
        "150 games and 50 profiles round-trip; reduction output ({} bytes) byte-identical across runs",
        first.0.len() + first.1.len()
    ))
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (1, "gadget guarantee sweep (eps 1/20, inputs 1/20, grid 1/100)", Duration::from_secs(300), criterion_1),
        (2, "unary multiplier worked example at eps 1/100", Duration::from_secs(60), criterion_2),
        (3, "multiplier envelopes: unary 19 eps, log 3 sqrt(eps)", Duration::from_secs(300), criterion_3),
        (4, "bimatrix round trip at eps_m 3/10 (20 games)", Duration::from_secs(30), criterion_4),
        (5, "imitation and block-uniform grid enumeration (step 1/50)", Duration::from_secs(300), criterion_5),
        (6, "end-to-end pure-Nash pipeline, log construction, eps_k 9/10", Duration::from_secs(120), criterion_6),
        (7, "size scaling of both multipliers", Duration::from_secs(300), criterion_7),
        (8, "serialization round trip and determinism", Duration::from_secs(300), criterion_8),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {name} [{elapsed:.1?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id}: {name} [{elapsed:.1?}] {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
