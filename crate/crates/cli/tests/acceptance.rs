use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use episteme::calculus::axioms::{factivity, gnum};
use episteme::calculus::catalog::{formula_of, term_of};
use episteme::calculus::{check_proof, parse_proof_file, Enumerator, Justification, SchemaId, TheorySpec, Verdict};
use episteme::demo::factivity_samples;
use episteme::enumvm::{apply, fixed_point, fixed_point_classical, IndexExpr, Nat, Prog, Registry, Template};
use episteme::machines::{audit_factivity, make_know_all, make_know_nothing, make_self_knowing_machine, SlashEval, TruthValue3};
use episteme::selfref::{arithmetic, build_diagonal, diag_fn};
use episteme::syntax::{decode_formula, encode_formula, substitute, Formula};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn episteme(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_episteme")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("`episteme {}` exited {:?}: {}", args.join(" "), out.status.code(), String::from_utf8_lossy(&out.stderr).trim()));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn refutation_reproduces() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (_, star) = make_self_knowing_machine();
    let mut slowest = Duration::ZERO;
    for e in [0, 7, star] {
        let path = dir.path().join(format!("refute-{e}.proof"));
        let path = path.to_str().unwrap();
        let start = Instant::now();
        episteme(&["refute", "--e", &e.to_string(), "-o", path])?;
        let out = episteme(&["check", path])?;
        let took = start.elapsed();
        ensure(out.trim() == "ACCEPT", || format!("e={e}: {out}"))?;
        ensure(took <= Duration::from_secs(10), || format!("e={e} took {took:?}"))?;
        slowest = slowest.max(took);
        let out = episteme(&["check", path, "--mutants", "20", "--seed", &e.to_string()])?;
        ensure(out.contains("mutants rejected: 20/20"), || format!("e={e}: {out}"))?;
    }
    Ok(format!("e in {{0, 7, {star}}} accepted, slowest {slowest:.2?}; 60/60 mutants rejected"))
}

fn knowledge_of_factivity_is_needed() -> Outcome {
    let mut sites = vec![];
    for e in [0, 7] {
        let text = episteme(&["refute", "--e", &e.to_string()])?;
        let file = parse_proof_file(&text).map_err(|err| err.to_string())?;
        let theory = file.theory.ok_or("proof file has no theory")?.without(SchemaId::KFactivity);
        match check_proof(&file.proof, &theory) {
            Verdict::Reject { step, .. } => {
                let just = &file.proof.steps[step].just;
                ensure(*just == Justification::axiom(SchemaId::KFactivity), || format!("e={e}: rejected at {step} ({just:?})"))?;
                let uses = file.proof.steps.iter().filter(|s| s.just == Justification::axiom(SchemaId::KFactivity)).count();
                ensure(uses == 1, || format!("e={e}: {uses} KFactivity steps"))?;
                sites.push(step + 1);
            }
            Verdict::Accept => return Err(format!("e={e}: accepted without KFactivity")),
        }
    }
    Ok(format!("rejected at the single KFactivity step (steps {sites:?})"))
}

fn diagonal_lemma() -> Outcome {
    let theory = arithmetic();
    for e in [0, 1, 2, 7, 42] {
        let r = build_diagonal(e);
        let v = check_proof(&r.equiv_proof, &theory);
        ensure(v.is_accept(), || format!("e={e}: {v}"))?;
        ensure(diag_fn(&encode_formula(&r.theta)) == encode_formula(&r.phi), || format!("e={e}: diag mismatch"))?;
    }
    Ok("e in {0, 1, 2, 7, 42}: equivalences accepted, diag identity holds".into())
}

fn random_prog(rng: &mut ChaCha8Rng, depth: u32) -> Prog {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        if rng.gen_bool(0.3) {
            return Prog::RunIndex(IndexExpr::Param);
        }
        let n = rng.gen_range(0..4);
        let items = (0..n)
            .map(|_| if rng.gen_bool(0.25) { Nat::Param } else { Nat::lit(rng.gen_range(0u32..40)) })
            .collect();
        return Prog::Emit(items);
    }
    let small = Nat::lit(rng.gen_range(0u32..3));
    match rng.gen_range(0..3) {
        0 => Prog::interleave(random_prog(rng, depth - 1), random_prog(rng, depth - 1)),
        1 => Prog::map_pair(small, random_prog(rng, depth - 1)),
        _ => Prog::section(small, random_prog(rng, depth - 1)),
    }
}

fn small_part(xs: &[BigUint]) -> BTreeSet<BigUint> {
    xs.iter().filter(|x| **x <= BigUint::from(50u32)).cloned().collect()
}

/// The first rung from which `W_a` and `W_b` agree on elements up to 50 at
/// every higher rung.
fn threshold(reg: &Registry, a: u64, b: u64, rungs: &[u64]) -> Option<u64> {
    let (mut ra, mut rb) = (reg.runner(a).ok()?, reg.runner(b).ok()?);
    let mut from = None;
    for &n in rungs {
        ra.advance_to(reg, n);
        rb.advance_to(reg, n);
        if small_part(ra.emitted()) == small_part(rb.emitted()) {
            from.get_or_insert(n);
        } else {
            from = None;
        }
    }
    from
}

fn recursion_theorem() -> Outcome {
    let rungs = [250, 1000, 4000];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0;
    for i in 0..20 {
        let f = Template::new(random_prog(&mut rng, 3));
        let mut reg = Registry::new();
        let selfish = fixed_point(&mut reg, &f);
        let classical = fixed_point_classical(&mut reg, &f).map_err(|e| e.to_string())?;
        for e in [selfish, classical] {
            let fe = apply(&mut reg, &f, e).map_err(|e| e.to_string())?;
            match threshold(&reg, e, fe, &rungs) {
                Some(n) if n < *rungs.last().unwrap() => worst = worst.max(n),
                _ => return Err(format!("template {i} ({:?}): W_{e} and W_{fe} still differ", f.prog())),
            }
        }
    }
    Ok(format!("20 templates, both constructions agree from budget {worst} on"))
}

fn self_knowing_machine() -> Outcome {
    const PREFIX: usize = 50;
    let (machine, star) = make_self_knowing_machine();
    let reg = machine.registry();
    let mut run = reg.runner(star).map_err(|e| e.to_string())?;
    run.advance_until(&reg, 4 * PREFIX, 1_000_000);
    let vm: Vec<BigUint> = run.emitted().to_vec();
    let mut direct = Enumerator::new(TheorySpec::sigma_prime(star));
    direct.run_until_len(4 * PREFIX, 1_000_000);
    let theory: Vec<BigUint> = direct.stream().map(encode_formula).collect();
    ensure(vm.len() >= 4 * PREFIX && theory.len() >= 4 * PREFIX, || "streams too short".into())?;
    let (vm_set, theory_set): (HashSet<_>, HashSet<_>) = (vm.iter().collect(), theory.iter().collect());
    ensure(theory[..PREFIX].iter().all(|c| vm_set.contains(c)), || "theory prefix not in run".into())?;
    ensure(vm[..PREFIX].iter().all(|c| theory_set.contains(c)), || "run prefix not in theory".into())?;

    let stream: HashSet<Formula> = machine.knowledge(1000).into_iter().collect();
    let samples: Vec<Formula> = std::iter::once(24).chain(0..9).map(formula_of).collect();
    for psi in &samples {
        let g = gnum(psi.clone(), star);
        ensure(stream.contains(&g), || format!("missing GNum instance for {psi}"))?;
        ensure(stream.contains(&Formula::know(g)), || format!("missing KGNum instance for {psi}"))?;
    }
    Ok(format!("e* = {star}: {PREFIX}-prefixes contained both ways; GNum/KGNum for {} samples", samples.len()))
}

fn slash_machine() -> Outcome {
    let mut s = SlashEval::new(TheorySpec::sigma_slash());
    s.advance(10_000);
    let instances = factivity_samples(s.enumerator());
    ensure(instances.len() >= 10, || format!("only {} Factivity instances", instances.len()))?;
    let mut kof = 0;
    for psi in &instances {
        let inst = factivity(psi.clone());
        let v = s.eval(&inst, 10_000).map_err(|e| e.to_string())?;
        ensure(v != TruthValue3::False, || format!("{inst} is false"))?;
        if s.eval(&Formula::know(inst.clone()), 10_000) == Ok(TruthValue3::True) {
            kof += 1;
        }
    }
    ensure(kof >= 10, || format!("only {kof} Knowledge of Factivity samples"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let budgets = [0, 100, 1000, 10_000];
    for _ in 0..200 {
        let mut phi = formula_of(rng.gen_range(0..1u64 << 20)).closure();
        if rng.gen_bool(0.3) {
            phi = Formula::know(phi);
        }
        let mut last = TruthValue3::Unknown;
        for b in budgets {
            let v = s.eval(&phi, b).map_err(|e| e.to_string())?;
            ensure(!last.is_decided() || v == last, || format!("{phi}: {last} then {v} at {b}"))?;
            last = v;
        }
    }

    let provable: Vec<Formula> = s
        .enumerator()
        .stream()
        .filter(|f| f.is_sentence())
        .cloned()
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|f| s.eval(f, 10_000) == Ok(TruthValue3::True))
        .take(30)
        .collect();
    ensure(provable.len() == 30, || format!("only {} decided provable samples", provable.len()))?;
    for phi in &provable {
        let k = s.eval(&Formula::know(phi.clone()), 10_000).map_err(|e| e.to_string())?;
        ensure(k == TruthValue3::True, || format!("K({phi}) is {k}"))?;
    }
    let mut converse = 0;
    for _ in 0..200 {
        let phi = formula_of(rng.gen_range(0..1u64 << 12)).closure();
        if s.eval(&Formula::know(phi.clone()), 10_000) == Ok(TruthValue3::True) {
            ensure(s.enumerator().contains(&phi), || format!("K({phi}) true but not in stream"))?;
            converse += 1;
        }
    }
    Ok(format!("{} Factivity instances, {kof} KoF, monotone on 200 sentences, alignment on 30 (+{converse} converse)", instances.len()))
}

fn codec_and_substitution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let random_formula = |rng: &mut ChaCha8Rng| formula_of(rng.gen_range(0..1u64 << 40));
    for _ in 0..1000 {
        let f = random_formula(&mut rng);
        let back = decode_formula(&encode_formula(&f)).map_err(|e| e.to_string())?;
        ensure(back == f, || format!("round trip failed for {f}"))?;
    }
    let mut seen: HashMap<BigUint, Formula> = HashMap::new();
    for _ in 0..10_000 {
        let f = random_formula(&mut rng);
        if let Some(g) = seen.insert(encode_formula(&f), f.clone()) {
            ensure(g == f, || format!("collision: {g} and {f}"))?;
        }
    }
    for _ in 0..1000 {
        let k = Formula::know(random_formula(&mut rng));
        let x = rng.gen_range(0..8);
        let t = term_of(rng.gen_range(0..1u64 << 16));
        ensure(substitute(&k, x, &t) == k, || format!("{k} changed under x{x} := {t}"))?;
    }
    Ok(format!("1000 round trips, {} distinct codes, 1000 opacity checks", seen.len()))
}

fn audits() -> Outcome {
    let all = audit_factivity(&make_know_all(), 100);
    ensure(all.iter().any(|v| v.value == TruthValue3::False), || "know-all has no violation".into())?;
    ensure(audit_factivity(&make_know_nothing(), 1000).is_empty(), || "know-nothing violates".into())?;
    let (machine, _) = make_self_knowing_machine();
    let found = audit_factivity(&machine, 1000);
    ensure(found.is_empty(), || format!("self-knowing machine: {}", found[0].formula))?;
    Ok(format!("know-all: {} violations in 100 entries; others clean at 1000", all.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("refutation reproduction", 40, refutation_reproduces),
        ("knowledge of factivity is necessary", 20, knowledge_of_factivity_is_needed),
        ("diagonal lemma", 5, diagonal_lemma),
        ("recursion theorem", 30, recursion_theorem),
        ("self-knowing machine", 60, self_knowing_machine),
        ("slash machine", 60, slash_machine),
        ("codec and substitution", 10, codec_and_substitution),
        ("audits", 10, audits),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            ensure(took <= Duration::from_secs(*limit), || format!("took {took:.2?}, limit {limit} s")).map(|_| msg)
        });
        match result {
            Ok(msg) => println!("criterion {}: PASS [{took:.2?}] {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL [{took:.2?}] {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
