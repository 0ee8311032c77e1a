//! End-to-end acceptance run over the bundled fixtures.
//!
//! Prints one `PASS`/`FAIL` line per criterion and exits nonzero if any
//! criterion fails. Run with `cargo test -p k3rigid --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use k3rigid::{
    build_action, cmd_check_map, cmd_classify, cmd_dot, cmd_genus_equal, cmd_lattice, cmd_rigidity, load_graph,
    parse_surface_file, read_file, render, ActionReport, RigidityCommand, RigidityReport,
};
use k3rigid_core::funfield::{build_named_maps, FunctionField, Point, SurfaceMap, DEFAULT_MAX_ORDER};
use k3rigid_core::polyring::{gcd_free_basis, uni_gcd};
use k3rigid_core::rigidity::{propagate, Anchor, CurveState, GraphAction, PointKind, RigidityError};
use k3rigid_core::{Rational, TFun, UniPoly};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn runner_config(cases: u32) -> Config {
    Config { cases, failure_persistence: None, ..Config::default() }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn census(command: RigidityCommand) -> Result<ActionReport, String> {
    match cmd_rigidity(&fixture("k3_order16.graph"), &command).map_err(err)? {
        RigidityReport::Action(r) => Ok(r),
        RigidityReport::Enumerate(_) => Err("expected a single action".into()),
    }
}

fn named_maps() -> Result<(std::sync::Arc<FunctionField>, k3rigid_core::funfield::NamedMaps), String> {
    let file = parse_surface_file("k3_order16.toml", &read_file(&fixture("k3_order16.toml")).map_err(err)?).map_err(err)?;
    let ff = file.function_field();
    let maps = build_named_maps(&ff).map_err(err)?;
    Ok((ff, maps))
}

fn fiber_inventory() -> Outcome {
    let r = cmd_classify(&fixture("k3_order16.toml"), false).map_err(err)?;
    let counts: Vec<(&str, usize)> = r.singular_fibers.iter().map(|(k, n)| (k.as_str(), *n)).collect();
    ensure!(counts == [("III", 5), ("III*", 1)], "singular fibers {counts:?}");
    ensure!(r.euler_total == 24, "Euler total {}", r.euler_total);
    ensure!(r.k3, "not reported as K3");
    Ok(())
}

fn sigma_verification() -> Outcome {
    let r = cmd_check_map(&fixture("k3_order16.toml"), "sigma").map_err(err)?;
    ensure!(r.well_defined, "sigma is not a morphism: {:?}", r.residual);
    ensure!(r.ambient_scalar.as_deref() == Some("z^2"), "ambient scalar {:?}", r.ambient_scalar);
    ensure!(r.omega_exponent == Some(1), "omega factor {:?}", r.omega_factor);
    ensure!(r.order == Some(16), "order {:?}", r.order);
    ensure!(r.omega_order == Some(16) && r.primitive == Some(true), "not primitive");
    Ok(())
}

fn group_law() -> Outcome {
    let (ff, maps) = named_maps()?;
    let origin = Point::Affine(TFun::zero(), TFun::zero());
    let t = SurfaceMap::translation(ff.clone(), &origin).map_err(err)?;
    let printed = SurfaceMap::parse(ff.clone(), ["(y^2-x^3)/x^2", "(x^3*y-y^3)/x^3", "t"]).map_err(err)?;
    ensure!(t == printed, "translation {t} differs from the printed map {printed}");
    ensure!(t.formulas() == printed.formulas(), "normalized formulas differ");
    let e = ff.generic_fiber();
    ensure!(e.contains(&origin), "(0, 0) is not on the generic fiber");
    ensure!(e.mul(&origin, 2) == Point::Zero, "(0, 0) is not 2-torsion");
    let st = maps.sigma.compose(&t).map_err(err)?;
    let ts = t.compose(&maps.sigma).map_err(err)?;
    ensure!(st == ts, "sigma and the translation do not commute");
    Ok(())
}

fn factorization_identity() -> Outcome {
    let (_, maps) = named_maps()?;
    let s2 = maps.sigma.power(2).map_err(err)?;
    ensure!(maps.sigma_ast.power(2).map_err(err)? == s2, "sigma_ast^2 != sigma^2");
    ensure!(maps.sigma_ast_matches_printed, "sigma_ast differs from its printed formulas");
    let tau = maps.sigma.compose(&maps.sigma_ast.inverse(DEFAULT_MAX_ORDER).map_err(err)?).map_err(err)?;
    ensure!(tau == maps.translation, "sigma o sigma_ast^-1 is {tau}");
    ensure!(tau.order(DEFAULT_MAX_ORDER).map_err(err)? == 2, "tau does not have order 2");
    ensure!(tau.omega_factor().map_err(err)?.is_one(), "tau is not symplectic");
    let r = cmd_check_map(&fixture("k3_order16.toml"), "tau").map_err(err)?;
    ensure!(r.order == Some(2) && r.symplectic == Some(true), "check-map tau: {r:?}");
    Ok(())
}

fn rigidity_censuses() -> Outcome {
    let cases = [
        (RigidityCommand::Census { action: "sigma".into() }, (10, 1)),
        (RigidityCommand::Census { action: "sigma_ast".into() }, (4, 0)),
        (RigidityCommand::Census { action: "tau".into() }, (8, 0)),
        (RigidityCommand::Power { action: "sigma".into(), m: 2 }, (10, 1)),
        (RigidityCommand::Compose { left: "sigma".into(), right: "inv(sigma_ast)".into() }, (8, 0)),
    ];
    for (cmd, want) in cases {
        let r = census(cmd.clone())?;
        ensure!((r.isolated_points, r.k) == want, "{}: N = {}, k = {}, expected {want:?}", r.action, r.isolated_points, r.k);
    }
    Ok(())
}

fn lemma_uniqueness() -> Outcome {
    let g = fixture("k3_order16.graph");
    let cmd = RigidityCommand::Enumerate { n: 16, c: 1, filter: Some((10, 1)), jobs: 4 };
    let RigidityReport::Enumerate(r) = cmd_rigidity(&g, &cmd).map_err(err)? else {
        return Err("expected an enumeration".into());
    };
    ensure!(r.classes == 1, "{} classes", r.classes);
    let file = load_graph(&g).map_err(err)?;
    let degree6: Vec<&str> =
        (0..file.config.len()).filter(|&v| file.config.degree(v) == 6).map(|v| file.config.name(v)).collect();
    ensure!(degree6.len() == 2, "degree-6 curves {degree6:?}");
    for name in degree6 {
        let curve = r.representatives[0].stable_curves.iter().find(|s| s.curve == name);
        let Some(curve) = curve else { return Err(format!("{name} is not stable")) };
        let mut ws: Vec<u32> = curve.weights.iter().map(|p| p.weight).collect();
        ws.sort();
        ensure!(ws == [4, 12], "{name} has weights {ws:?}");
    }
    Ok(())
}

fn lattice_identity() -> Outcome {
    ensure!(cmd_genus_equal("U+D8+D4", "U(2)+E8+D4").map_err(err)?.genus_equal, "U+D8+D4 and U(2)+E8+D4 differ");
    let g = cmd_lattice(&fixture("k3_order16.graph")).map_err(err)?;
    ensure!(g.rank == 14, "rank {}", g.rank);
    ensure!(g.signature == (1, 13), "signature {:?}", g.signature);
    ensure!(g.invariant_factors == ["2", "2", "2", "2"], "invariant factors {:?}", g.invariant_factors);
    let model = cmd_lattice("U(2)+D4+E8").map_err(err)?;
    ensure!((model.rank, model.signature, &model.invariant_factors) == (g.rank, g.signature, &g.invariant_factors), "model {model:?}");
    ensure!(cmd_genus_equal(&fixture("k3_order16.graph"), "U(2)+D4+E8").map_err(err)?.genus_equal, "discriminant forms differ");
    Ok(())
}

fn fixture_actions() -> Result<(k3rigid_core::rigidity::GraphFile, Vec<(String, GraphAction)>), String> {
    let file = load_graph(&fixture("k3_order16.graph")).map_err(err)?;
    let mut actions = Vec::new();
    for spec in &file.actions {
        let a = build_action(&file, &spec.name).map_err(err)?;
        for m in 2..=4 {
            actions.push((format!("{}^{m}", spec.name), a.power(&file.config, m).map_err(err)?));
        }
        actions.push((spec.name.clone(), a));
    }
    let tau = build_action(&file, "sigma").map_err(err)?.compose(&build_action(&file, "inv(sigma_ast)").map_err(err)?, &file.config);
    actions.push(("sigma o inv(sigma_ast)".into(), tau.map_err(err)?));
    Ok((file, actions))
}

fn property_suites() -> Outcome {
    let (file, actions) = fixture_actions()?;
    let config = &file.config;

    // anchor independence: every single flag either reproduces the action
    // or leaves some stable component unanchored
    for spec in &file.actions {
        let a = spec.build(config).map_err(err)?;
        let mut reproduced = 0;
        for anchor in a.flags(config) {
            match propagate(config, &spec.perm, spec.n, spec.c, &[anchor]) {
                Ok(again) => {
                    ensure!(again == a, "{}: anchor {anchor:?} gives a different action", spec.name);
                    reproduced += 1;
                }
                Err(RigidityError::Unanchored { .. }) => {}
                Err(e) => return Err(format!("{}: anchor {anchor:?}: {e}", spec.name)),
            }
        }
        ensure!(reproduced > 0 || a.flags(config).is_empty(), "{}: no single anchor suffices", spec.name);
    }
    let mut runner = TestRunner::new(runner_config(64));
    runner
        .run(&(0..file.actions.len(), any::<u64>()), |(i, mask)| {
            let spec = &file.actions[i];
            let a = spec.build(config).unwrap();
            let subset: Vec<Anchor> =
                a.flags(config).into_iter().enumerate().filter(|(j, _)| mask >> (j % 64) & 1 == 1).map(|(_, f)| f).collect();
            if let Ok(again) = propagate(config, &spec.perm, spec.n, spec.c, &subset) {
                prop_assert_eq!(again, a);
            }
            Ok(())
        })
        .map_err(err)?;

    // volume rule at every fixed point of every fixture action
    for (name, a) in &actions {
        let (n, c) = (a.n(), a.c());
        for item in a.census(config).items {
            if item.kind == PointKind::TransverseIntersection {
                let sum: u32 = item.weights.iter().map(|(_, w)| w).sum();
                ensure!(sum % n == c, "{name} at {}: weights sum to {sum}, c = {c}", item.location);
            }
        }
        for (curve, s) in a.states().iter().enumerate() {
            if let CurveState::Rotating([(_, w1), (_, w2)]) = s {
                ensure!((w1 + w2) % n == 0, "{name}: {} has weights {w1}, {w2}", config.name(curve));
            }
        }
    }

    // omega-factor multiplicativity over all fixture map pairs
    let (_, maps) = named_maps()?;
    let all = [&maps.sigma, &maps.translation, &maps.sigma_ast, &maps.tau];
    for f in all {
        for g in all {
            let fg = f.compose(g).map_err(err)?;
            let lhs = fg.omega_factor().map_err(err)?;
            let rhs = f.omega_factor().map_err(err)? * g.omega_factor().map_err(err)?;
            ensure!(lhs == rhs, "omega({f} o {g}) = {lhs}, product {rhs}");
        }
    }

    // gcd-free basis reconstruction on random polynomials
    let poly = prop::collection::vec(-3i64..=3, 1..5).prop_map(|cs| UniPoly::<Rational>::from_i64s(&cs));
    let mut runner = TestRunner::new(runner_config(128));
    runner
        .run(&(prop::collection::vec(poly.clone(), 1..4), poly), |(ps, extra)| {
            let inputs: Vec<UniPoly<Rational>> =
                ps.iter().map(|p| &(p * &extra) * p).filter(|p| !p.is_zero()).collect();
            if inputs.is_empty() {
                return Ok(());
            }
            let basis = gcd_free_basis(&inputs).unwrap();
            for (j, p) in inputs.iter().enumerate() {
                let rebuilt = basis.iter().fold(UniPoly::one(), |acc, (f, e)| &acc * &f.pow(e[j]));
                prop_assert_eq!(p.monic(), rebuilt);
            }
            for (i, (f, _)) in basis.iter().enumerate() {
                for (g, _) in &basis[i + 1..] {
                    prop_assert!(uni_gcd(f, g).is_constant());
                }
            }
            Ok(())
        })
        .map_err(err)?;

    // byte-stable DOT and report regeneration
    let g = fixture("k3_order16.graph");
    for name in ["sigma", "sigma_ast", "tau"] {
        let dot = cmd_dot(&g, Some(name)).map_err(err)?;
        ensure!(dot == cmd_dot(&g, Some(name)).map_err(err)?, "{name}: DOT differs between runs");
        let golden = read_file(&fixture(&format!("expected/{name}.dot"))).map_err(err)?;
        ensure!(dot == golden, "{name}: DOT differs from fixtures/expected/{name}.dot");
        let report = render(&cmd_rigidity(&g, &RigidityCommand::Census { action: name.into() }).map_err(err)?, false);
        let golden = read_file(&fixture(&format!("expected/{name}.census.txt"))).map_err(err)?;
        ensure!(report == golden, "{name}: census report differs from the stored one");
    }
    let report = render(&cmd_classify(&fixture("k3_order16.toml"), false).map_err(err)?, false);
    ensure!(report == read_file(&fixture("expected/k3_order16.classify.txt")).map_err(err)?, "classify report differs");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("fiber inventory", fiber_inventory),
        ("sigma verification", sigma_verification),
        ("group law", group_law),
        ("factorization identity", factorization_identity),
        ("rigidity censuses", rigidity_censuses),
        ("uniqueness of the (10, 1) action", lemma_uniqueness),
        ("lattice identity", lattice_identity),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {title}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
