use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use nashreduce_core::gadget::{build_kind, catalog, kind_from_name, standard_kinds, sweep, GadgetCircuit, GadgetKind, SweepConfig};
use nashreduce_core::io::{read_game, read_mapping, read_profile, write_game, write_mapping, write_profile, MappingFile};
use nashreduce_core::mult::{beta_for, Construction};
use nashreduce_core::rational::{approx, display, parse};
use nashreduce_core::reduction::{bimatrixify, linearize, reduce_full, Stage};
use nashreduce_core::solver::{brute_force_normal_nash, grid_enumerate, support_enumeration, GridConfig};
use nashreduce_core::verify::{verify_wsne_clamped, VerificationReport};
use nashreduce_core::{random as gen, AnyGame, Error, Game, MixedProfile, Rational};
use rand::SeedableRng;

use crate::{
    ClassArg, ConstructionArg, GadgetCommand, MethodArg, RandomArgs, RecoverArgs, ReduceArgs, SolveArgs, StageArg,
    VerifyArgs,
};

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::Io(_)) => 2,
        Some(Error::BudgetExceeded { .. }) => 4,
        Some(Error::ZeroBlockMass { .. }) => 5,
        Some(_) => 3,
        None => 2,
    }
}

fn rational(text: &str, flag: &str) -> Result<Rational> {
    parse(text).with_context(|| format!("--{flag}"))
}

fn construction(c: ConstructionArg) -> Construction {
    match c {
        ConstructionArg::Unary => Construction::UnaryPoly,
        ConstructionArg::Log => Construction::BinaryLog,
    }
}

fn show_profile(p: &MixedProfile, decimals: bool) -> String {
    let body: Vec<String> = p
        .strategies()
        .iter()
        .map(|s| {
            let probs: Vec<String> = s
                .probs()
                .iter()
                .map(|r| {
                    if decimals {
                        format!("{:.6}", approx(r))
                    } else {
                        display(r)
                    }
                })
                .collect();
            format!("({})", probs.join(","))
        })
        .collect();
    format!("({})", body.join(","))
}

fn print_report(label: &str, report: &VerificationReport) {
    println!(
        "{label}: {} at eps {} (realized {})",
        if report.passed() { "PASS" } else { "FAIL" },
        display(&report.eps),
        display(&report.realized_eps())
    );
    let failing = report.failing_players();
    if !failing.is_empty() {
        let shown: Vec<String> = failing.iter().take(10).map(ToString::to_string).collect();
        println!("  failing players: {}{}", shown.join(", "), if failing.len() > 10 { ", ..." } else { "" });
    }
}

fn write_ledger(text: &str, path: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(path) = path {
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn reduce(a: ReduceArgs) -> Result<ExitCode> {
    let input = read_game(&a.input)?;
    let c = construction(a.construction);
    let eps_k = || -> Result<Rational> {
        let text = a.eps_k.as_deref().ok_or_else(|| Error::InvalidParameter("--eps-k is required".into()))?;
        rational(text, "eps-k")
    };
    let normal = || match &input {
        AnyGame::Normal(g) => Ok(g),
        other => Err(Error::InvalidParameter(format!(
            "this stage needs a normal-form game, got a {} game",
            other.class_name()
        ))),
    };
    let (game, mut mapping, params) = match a.stage {
        StageArg::Linearize => {
            let r = linearize(normal()?, &eps_k()?, c)?;
            (AnyGame::Polymatrix(r.game), r.mapping, r.params)
        }
        StageArg::Bimatrix => {
            let AnyGame::Polymatrix(g) = &input else {
                return Err(Error::InvalidParameter("the bimatrix stage needs a polymatrix game".into()).into());
            };
            let text = a.eps_m.as_deref().ok_or_else(|| Error::InvalidParameter("--eps-m is required".into()))?;
            let r = bimatrixify(g, &rational(text, "eps-m")?)?;
            let game = if a.normalize { r.normalized_game() } else { r.game.clone() };
            let mapping = if a.normalize { r.normalized_mapping() } else { r.mapping };
            (AnyGame::Bimatrix(game), mapping, r.params)
        }
        StageArg::Full => {
            let r = reduce_full(normal()?, &eps_k()?, c)?;
            let mut mapping = r.mapping;
            let game = if a.normalize {
                mapping.normalization = r.bimatrix.normalized_mapping().normalization;
                r.bimatrix.normalized_game()
            } else {
                r.bimatrix.game
            };
            (AnyGame::Bimatrix(game), mapping, r.params)
        }
    };
    if !matches!(a.stage, StageArg::Bimatrix | StageArg::Full) {
        mapping.normalization = None;
    }
    write_game(&a.out_game, &game)?;
    write_mapping(&a.out_mapping, &MappingFile::new(mapping, params.clone()))?;
    let mut ledger = format!(
        "stage                {}\nplayers              {}\nstrategies           {}\n",
        match a.stage {
            StageArg::Linearize => "linearize",
            StageArg::Bimatrix => "bimatrix",
            StageArg::Full => "full",
        },
        game.num_players(),
        game.strategy_counts().iter().sum::<usize>()
    );
    ledger.push_str(&params.report());
    write_ledger(&ledger, a.ledger.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn recover(a: RecoverArgs) -> Result<ExitCode> {
    let source = read_game(&a.source)?;
    let target = read_game(&a.game)?;
    let file = read_mapping(&a.mapping)?;
    let profile = read_profile(&a.profile)?;
    let mapping = &file.mapping;
    if target.strategy_counts() != mapping.target_counts.as_slice() {
        return Err(Error::MappingMismatch("the game does not match the mapping's target".into()).into());
    }
    if source.strategy_counts() != mapping.source_counts.as_slice() {
        return Err(Error::MappingMismatch("the source game does not match the mapping".into()).into());
    }
    let normalized = mapping.normalization.is_some();
    let target_eps = file.params.target_eps(normalized).clone();
    let input_report = verify_wsne_clamped(&target, &profile, &target_eps, &BTreeSet::new())?;
    print_report("input profile", &input_report);

    let recovered = mapping.recover(&profile)?;
    write_profile(&a.out, &recovered)?;
    let eps = match &a.eps {
        Some(t) => rational(t, "eps")?,
        None => file.params.source_eps().clone(),
    };
    println!("stage: {}", mapping.stage.name());
    println!("recovered: {}", show_profile(&recovered, false));
    let report = verify_wsne_clamped(&source, &recovered, &eps, &BTreeSet::new())?;
    print_report("recovered profile", &report);
    if mapping.stage == Stage::Linearize && !input_report.passed() {
        println!("note: the input was not an equilibrium, so no guarantee applies");
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let game = read_game(&a.game)?;
    let profile = read_profile(&a.profile)?;
    let eps = rational(&a.eps, "eps")?;
    let clamped: BTreeSet<usize> = a.clamp.into_iter().collect();
    let report = verify_wsne_clamped(&game, &profile, &eps, &clamped)?;
    print_report("profile", &report);
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn solve(a: SolveArgs) -> Result<ExitCode> {
    let game = read_game(&a.game)?;
    let step = rational(&a.step, "step")?;
    let (profile, certificate) = match a.method {
        MethodArg::SupportEnum => {
            let AnyGame::Bimatrix(g) = &game else {
                return Err(Error::InvalidParameter("support enumeration needs a bimatrix game".into()).into());
            };
            let r = support_enumeration(g)?;
            let eps = r.certified_eps();
            (r.profile, eps)
        }
        MethodArg::BruteForce => {
            let AnyGame::Normal(g) = &game else {
                return Err(Error::InvalidParameter("brute force needs a normal-form game".into()).into());
            };
            let r = brute_force_normal_nash(g, &step)?;
            let eps = r.certified_eps();
            (r.profile, eps)
        }
        MethodArg::Grid => {
            let eps = rational(&a.eps, "eps")?;
            let mut found = grid_enumerate(&game, &GridConfig::new(eps.clone(), step))?;
            match found.next().transpose()? {
                Some(p) => (p, eps),
                None => {
                    println!("no grid profile is an equilibrium at eps {}", display(&eps));
                    return Ok(ExitCode::from(1));
                }
            }
        }
    };
    println!("{}", show_profile(&profile, false));
    if a.approx {
        println!("~ {}", show_profile(&profile, true));
    }
    println!("certified eps: {}", display(&certificate));
    if let Some(out) = &a.out {
        write_profile(out, &profile)?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn gadget(cmd: GadgetCommand) -> Result<ExitCode> {
    match cmd {
        GadgetCommand::List => {
            for e in catalog() {
                println!("{:<13} params: {:<14} inputs: {:<10} size: {:<10} {}", e.name, e.parameters, e.inputs, e.size, e.guarantee);
            }
            Ok(ExitCode::SUCCESS)
        }
        GadgetCommand::BuildMult { construction: c, eps, out } => {
            let eps = rational(&eps, "eps")?;
            let c = construction(c);
            let kind = match c {
                Construction::UnaryPoly => GadgetKind::MultUnary(eps.clone()),
                Construction::BinaryLog => GadgetKind::MultRobust(eps.clone()),
            };
            let mut circuit = GadgetCircuit::new();
            let a = circuit.add_input("a");
            let b = circuit.add_input("b");
            build_kind(&mut circuit, &kind, &[a, b])?;
            let game = circuit.combine()?;
            println!("construction: {}", c.name());
            println!("eps: {}", display(&eps));
            if c == Construction::BinaryLog {
                println!("beta: {}", beta_for(&eps)?);
            }
            println!("players added: {}", circuit.num_players() - 2);
            println!("gadgets: {}", circuit.gadgets().len());
            println!("edges: {}", game.edges().len());
            if let Some(out) = out {
                write_game(&out, &AnyGame::Polymatrix(game))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        GadgetCommand::Test { name, eps, grid, input_grid, zeta, arity, beta } => {
            let eps = rational(&eps, "eps")?;
            let grid = rational(&grid, "grid")?;
            let input_step = match input_grid {
                Some(t) => rational(&t, "input-grid")?,
                None => eps.clone(),
            };
            let kinds = if name == "all" {
                standard_kinds()
            } else {
                let zeta = zeta.as_deref().map(|t| rational(t, "zeta")).transpose()?;
                vec![kind_from_name(&name, zeta, arity, beta, Some(eps.clone()))?]
            };
            let config = SweepConfig::new(eps, input_step, grid);
            println!("{:<24} {:>8} {:>10} {:>6} {:>10}  result", "gadget", "cases", "outcomes", "empty", "violations");
            let mut all = true;
            for kind in &kinds {
                let r = sweep(kind, &config)?;
                all &= r.passed();
                println!(
                    "{:<24} {:>8} {:>10} {:>6} {:>10}  {}",
                    kind.to_string(),
                    r.input_cases,
                    r.outcomes,
                    r.empty_cases,
                    r.violation_count,
                    if r.passed() { "PASS" } else { "FAIL" }
                );
                for v in &r.violations {
                    println!("    {v:?}");
                }
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

pub fn random(a: RandomArgs) -> Result<ExitCode> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    if a.den <= 0 {
        bail!(Error::InvalidParameter("--den must be positive".into()));
    }
    let game = match a.class {
        ClassArg::Normal => match &a.pure_nash {
            Some(nash) => AnyGame::Normal(gen::pure_nash_game(&mut rng, &a.strategies, nash, a.den)?),
            None => AnyGame::Normal(gen::normal_game(&mut rng, &a.strategies, a.den)?),
        },
        ClassArg::Polymatrix => AnyGame::Polymatrix(gen::polymatrix_game(&mut rng, &a.strategies, a.den)?),
        ClassArg::Bimatrix => {
            let [rows, cols] = a.strategies[..] else {
                return Err(anyhow!(Error::InvalidParameter("a bimatrix game needs two strategy counts".into())));
            };
            AnyGame::Bimatrix(gen::bimatrix_game(&mut rng, rows, cols, a.den)?)
        }
    };
    write_game(&a.out, &game)?;
    Ok(ExitCode::SUCCESS)
}
