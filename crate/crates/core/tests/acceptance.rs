//! Acceptance suite. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::result::Result;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resprove_core::corpus::{exhaustive_mll, random_mll_sequent, random_provable, CorpusBounds};
use resprove_core::search::ResourceTree;
use resprove_core::verify::{recheck_resource_proof, recheck_tree};
use resprove_core::*;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const STRATEGIES: [Strategy; 5] = [
    Strategy::Lazy,
    Strategy::Eager,
    Strategy::Intermediate { n: 2, order: BatchOrder::DepthFirst },
    Strategy::Intermediate { n: 2, order: BatchOrder::Interleaved },
    Strategy::FactFirst,
];

fn seq(text: &str, logic: Logic) -> PlainSequent {
    parse_sequent(text, logic).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn proof_of(text: &str, logic: Logic, st: Strategy) -> Result<ResourceProof, String> {
    let r = prove_with(&seq(text, logic), logic, st).map_err(|e| e.to_string())?;
    match r.outcome {
        Outcome::Proved(p) => Ok(*p),
        Outcome::NotProved(why) => Err(format!("{text} not proved under {st} ({why:?})")),
    }
}

/// A hand-written plain proof: (sequent, rule, premises).
struct Tree(&'static str, RuleId, Vec<Tree>);

fn build(t: &Tree, logic: Logic) -> PlainNode {
    PlainNode {
        sequent: seq(t.0, logic),
        rule: t.1,
        children: t.2.iter().map(|c| build(c, logic)).collect(),
    }
}

fn printed(t: Tree, logic: Logic) -> PlainProof {
    PlainProof { logic, root: build(&t, logic) }
}

/// For each antecedent item (or top slot) of `child`, the variable from
/// `fresh` in its expression, keyed by the item's formula text.
fn role_vars(child: &Sequent, fresh: &[Var]) -> Vec<(String, Var)> {
    let find = |e: &BoolExpr| e.literals().iter().map(|l| l.var).find(|v| fresh.contains(v));
    match child {
        Sequent::Ll(s) => s
            .ante
            .iter()
            .filter_map(|a| find(&a.expr).map(|v| (a.formula.to_string(), v)))
            .collect(),
        Sequent::Bi(s) => s
            .ante
            .children()
            .iter()
            .filter_map(|b| {
                let name = b.formula().map_or_else(|| "bunch".to_string(), |f| f.to_string());
                find(&b.expr).map(|v| (name, v))
            })
            .collect(),
    }
}

fn bit(p: &ResourceProof, v: Var) -> u8 {
    p.assignment.get(v).map_or(9, u8::from)
}

/// `x1.~y2 = 0` with the worked example's variable names resolved through `names`.
fn named_eq(text: &str, names: &BTreeMap<&str, Var>) -> Constraint {
    let (lhs, rhs) = text.split_once('=').unwrap();
    let lits = lhs.trim().split('.').map(|t| {
        let (neg, name) = t.strip_prefix('~').map_or((false, t), |n| (true, n));
        let v = names[name];
        if neg {
            Literal::neg(v)
        } else {
            Literal::pos(v)
        }
    });
    Constraint::new(BoolExpr::from_literals(lits), rhs.trim() == "1")
}

/// Leaf constraints with endsequent variables (all 1) dropped; trivial
/// equations removed.
fn leaf_store(p: &ResourceProof) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    p.tree.walk(&mut |t: &ResourceTree| {
        if t.children.is_empty() {
            for c in &t.emitted {
                let lits: Vec<Literal> =
                    c.expr.literals().iter().copied().filter(|l| !p.endsequent_vars.contains(&l.var)).collect();
                let e = if c.expr.is_zero() { BoolExpr::zero() } else { BoolExpr::from_literals(lits) };
                if !(e.is_one() && c.target) {
                    out.insert(Constraint::new(e, c.target).to_string());
                }
            }
        }
    });
    out
}

const MLL_EQUATIONS: [&str; 16] = [
    "x1.y1 = 1", "x2.y2 = 0", "x3.y3 = 0", "x4.y4 = 0",
    "~x1.z1 = 0", "~x2.z2 = 1", "~x3.z3 = 0", "~x4.z4 = 0",
    "x1.~y1 = 0", "x2.~y2 = 0", "x3.~y3 = 1", "x4.~y4 = 0",
    "~x1.~z1 = 0", "~x2.~z2 = 0", "~x3.~z3 = 0", "~x4.~z4 = 1",
];

/// Names x1..x4, y1..y4, z1..z4 by role in the two-level ⊗R proof.
fn mll_roles(p: &ResourceProof) -> Result<BTreeMap<&'static str, Var>, String> {
    const X: [&str; 4] = ["x1", "x2", "x3", "x4"];
    const Y: [&str; 4] = ["y1", "y2", "y3", "y4"];
    const Z: [&str; 4] = ["z1", "z2", "z3", "z4"];
    let root = &p.tree;
    ensure!(root.rule.rule == RuleId::TensorR && root.children.len() == 2, "root is {}", root.rule);
    let mut names = BTreeMap::new();
    for (i, v) in root.fresh.iter().take(4).enumerate() {
        names.insert(X[i], *v);
    }
    for child in &root.children {
        ensure!(child.rule.rule == RuleId::TensorR, "premise rule {}", child.rule);
        // the premise carrying x1 positively is the left one of the worked example
        let Sequent::Ll(s) = &child.sequent else { return Err("not linear".into()) };
        let left = s.ante[0].expr.literals().contains(&Literal::pos(names["x1"]));
        let set = if left { Y } else { Z };
        for (i, v) in child.fresh.iter().take(4).enumerate() {
            names.insert(set[i], *v);
        }
    }
    ensure!(names.len() == 12, "found {} role variables", names.len());
    Ok(names)
}

fn criterion_01() -> Check {
    let text = "p,p,q,q |- (p*q)*(p*q)";
    let p = proof_of(text, Logic::Mll, Strategy::Eager)?;
    let names = mll_roles(&p)?;
    let expected: Vec<Constraint> = MLL_EQUATIONS.iter().map(|e| named_eq(e, &names)).collect();
    let expected_set: BTreeSet<String> = expected.iter().map(Constraint::to_string).collect();
    ensure!(leaf_store(&p) == expected_set, "store differs from the 16 equations: {:?}", leaf_store(&p));
    for c in &expected {
        ensure!(c.holds(&p.assignment).map_err(|e| e.to_string())?, "eager solution violates {c}");
    }
    let expected = [
        ("x1", 1), ("x2", 0), ("x3", 1), ("x4", 0),
        ("y1", 1), ("y2", 0), ("y3", 0), ("y4", 0),
        ("z1", 0), ("z2", 1), ("z3", 0), ("z4", 0),
    ];
    for (n, b) in expected {
        ensure!(bit(&p, names[n]) == b, "{n} = {} but expected {b}", bit(&p, names[n]));
    }
    for st in [Strategy::Lazy, STRATEGIES[2], STRATEGIES[3]] {
        let q = proof_of(text, Logic::Mll, st)?;
        let names = mll_roles(&q)?;
        for e in MLL_EQUATIONS {
            let c = named_eq(e, &names);
            ensure!(c.holds(&q.assignment).map_err(|e| e.to_string())?, "{st} solution violates {e}");
        }
        ensure!(recheck_resource_proof(&q).is_ok(), "{st} proof does not recheck");
    }
    Ok("16 equations, core x1..z4 exact; lazy, n=2, n=2:interleaved satisfy the store".into())
}

fn criterion_02() -> Check {
    let s = seq("p*q, r |- p*q", Logic::Mll);
    for st in STRATEGIES {
        let r = prove_with(&s, Logic::Mll, st).map_err(|e| e.to_string())?;
        ensure!(!r.outcome.is_proved(), "proved under {st}");
        if st == Strategy::Eager {
            ensure!(r.stats.final_checks > 0, "eager never solved its final store");
            ensure!(
                r.stats.final_unsat == r.stats.final_checks,
                "{} of {} final stores unsat",
                r.stats.final_unsat,
                r.stats.final_checks
            );
        }
    }
    Ok("not proved under 5 strategies; eager final stores all unsat".into())
}

// every closed derivation of `s` up to `depth` rule applications, as the
// list of constraints it emits
fn closures(s: &Sequent, alloc: &mut VarAllocator, depth: usize) -> Vec<Vec<Constraint>> {
    let mut out = Vec::new();
    if depth == 0 {
        return out;
    }
    for inst in calculus::applicable(s, calculus::CalculusOptions::default()) {
        let Ok(app) = calculus::apply(s, &inst, alloc) else { continue };
        let mut partial = vec![app.emitted.clone()];
        for prem in &app.premises {
            let mut next = Vec::new();
            for sub in closures(prem, alloc, depth - 1) {
                for acc in &partial {
                    next.push(acc.iter().chain(&sub).cloned().collect());
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

fn criterion_03() -> Check {
    let s = seq("p*q |- p*q", Logic::Mll);
    for st in STRATEGIES {
        let mut cfg = SearchConfig::with_strategy(st);
        cfg.root_rule = Some(RuleInstance::new(RuleId::TensorR, Principal::Succ(0)));
        let r = prove(&s, Logic::Mll, &cfg).map_err(|e| e.to_string())?;
        ensure!(matches!(r.outcome, Outcome::NotProved(FailReason::Exhausted)), "{st}: {:?}", r.outcome.is_proved());
    }
    // independent enumeration of every Axiom pairing below a forced right-first ⊗R
    let mut alloc = VarAllocator::new();
    let (root, vars) = search::tag_endsequent(&s, &mut alloc);
    let mut base: Vec<Constraint> = vars.iter().map(|v| Constraint::new(BoolExpr::var(*v), true)).collect();
    let app = calculus::apply(&root, &RuleInstance::new(RuleId::TensorR, Principal::Succ(0)), &mut alloc)
        .map_err(|e| e.to_string())?;
    base.extend(app.emitted);
    let left = closures(&app.premises[0], &mut alloc, 3);
    let right = closures(&app.premises[1], &mut alloc, 3);
    let mut pairings = 0;
    for a in &left {
        for b in &right {
            let all: Vec<Constraint> = base.iter().chain(a).chain(b).cloned().collect();
            ensure!(!compact_sat(&all), "a pairing is satisfiable: {all:?}");
            pairings += 1;
        }
    }
    ensure!(pairings > 0, "no closed derivations found for the premises");
    // without the forced order the sequent is provable
    proof_of("p*q |- p*q", Logic::Mll, Strategy::Eager)?;
    Ok(format!("not proved under 5 strategies; {pairings} axiom pairing(s), all unsat"))
}

fn criterion_04() -> Check {
    let text = "p,q,q |- (p*q)+(p*q*q)";
    let p = proof_of(text, Logic::Pll, Strategy::Lazy)?;
    let root = &p.tree;
    ensure!(root.rule.rule == RuleId::PlusR, "root is {}", root.rule);
    let x = root.fresh[0];
    let outer = &root.children[0];
    ensure!(outer.rule.rule == RuleId::TensorR, "under ⊕R: {}", outer.rule);
    let ys: Vec<u8> = outer.fresh.iter().take(3).map(|v| bit(&p, *v)).collect();
    let inner = outer.children.iter().find(|c| c.rule.rule == RuleId::TensorR).ok_or("no inner ⊗R")?;
    let zs: Vec<u8> = inner.fresh.iter().take(3).map(|v| bit(&p, *v)).collect();
    ensure!(bit(&p, x) == 0, "x = {}", bit(&p, x));
    ensure!(ys == [1, 1, 0], "y = {ys:?}");
    ensure!(zs == [1, 0, 0], "z = {zs:?}");

    let plain = extract(&p).map_err(|e| e.to_string())?;
    ensure!(check_proof(&plain, Logic::Pll), "extraction rejected: {:?}", validate(&plain, Logic::Pll));
    ensure!(plain.root.rule == RuleId::PlusR, "extracted root {}", plain.root.rule);
    ensure!(
        plain.root.children[0].sequent == seq("p, q, q |- p*q*q", Logic::Pll),
        "⊕R kept {}",
        plain.root.children[0].sequent
    );
    let mut leaves: Vec<String> = plain.root.leaves().iter().map(|l| l.sequent.to_string()).collect();
    leaves.sort();
    ensure!(leaves == ["p |- p", "q |- q", "q |- q"], "leaves {leaves:?}");
    use RuleId::*;
    let expected = printed(
        Tree(text, PlusR, vec![Tree(
            "p, q, q |- p*q*q",
            TensorR,
            vec![
                Tree("p, q |- p*q", TensorR, vec![Tree("p |- p", Axiom, vec![]), Tree("q |- q", Axiom, vec![])]),
                Tree("q |- q", Axiom, vec![]),
            ],
        )]),
        Logic::Pll,
    );
    ensure!(plain.same_up_to_order(&expected), "differs from the printed proof:\n{plain}");
    Ok("x=0, y=110, z=100; ⊕R picks the right disjunct; checked".into())
}

fn bi_example() -> PlainProof {
    use RuleId::*;
    printed(
        Tree("(r,(p;t),p -* q); s |- q * r", WandL, vec![
            Tree("(p;t) |- p", W, vec![Tree("p |- p", Axiom, vec![])]),
            Tree("(r, q); s |- q * r", W, vec![Tree(
                "r, q |- q * r",
                StarR,
                vec![Tree("q |- q", Axiom, vec![]), Tree("r |- r", Axiom, vec![])],
            )]),
        ]),
        Logic::Bi,
    )
}

fn criterion_05() -> Check {
    let p = proof_of("(r,(p;t),p -* q); s |- q * r", Logic::Bi, Strategy::Lazy)?;
    let mut wand = None;
    let mut star = None;
    p.tree.walk(&mut |t: &ResourceTree| match t.rule.rule {
        RuleId::WandL => wand = Some(t),
        RuleId::StarR => star = Some(t),
        _ => {}
    });
    let (wand, star) = (wand.ok_or("no −∗L")?, star.ok_or("no ∗R")?);
    let xs: BTreeMap<String, Var> = role_vars(&wand.children[0].sequent, &wand.fresh).into_iter().collect();
    let ys: BTreeMap<String, Var> = role_vars(&star.children[0].sequent, &star.fresh).into_iter().collect();
    let got = [bit(&p, xs["r"]), bit(&p, xs["bunch"]), bit(&p, ys["r"]), bit(&p, ys["q"])];
    ensure!(got == [0, 1, 0, 1], "x1 x2 y1 y3 = {got:?}");
    let plain = extract(&p).map_err(|e| e.to_string())?;
    ensure!(check_proof(&plain, Logic::Bi), "{:?}", validate(&plain, Logic::Bi));
    ensure!(plain.same_up_to_order(&bi_example()), "differs from the printed LBI proof:\n{plain}");

    let p2 = proof_of("r,(s;t) |- r*s", Logic::Bi, Strategy::Lazy)?;
    ensure!(p2.tree.rule.rule == RuleId::StarR, "root {}", p2.tree.rule);
    let v: BTreeMap<String, Var> = role_vars(&p2.tree.children[0].sequent, &p2.tree.fresh).into_iter().collect();
    ensure!((bit(&p2, v["r"]), bit(&p2, v["bunch"])) == (1, 0), "x, y = {}, {}", bit(&p2, v["r"]), bit(&p2, v["bunch"]));
    let plain2 = extract(&p2).map_err(|e| e.to_string())?;
    ensure!(check_proof(&plain2, Logic::Bi), "{:?}", validate(&plain2, Logic::Bi));

    let p3 = proof_of("(r,(p;t),p -* q); s |- (q*r) /\\ s", Logic::Bi, Strategy::Lazy)?;
    ensure!(p3.tree.rule.rule == RuleId::AndR && p3.tree.emitted.is_empty(), "root {}", p3.tree.rule);
    let mut right_fresh = 0;
    p3.tree.children[1].walk(&mut |t: &ResourceTree| right_fresh += t.fresh.len());
    ensure!(right_fresh == 0, "right conjunct branch introduced {right_fresh} variables");
    let plain3 = extract(&p3).map_err(|e| e.to_string())?;
    ensure!(check_proof(&plain3, Logic::Bi), "{:?}", validate(&plain3, Logic::Bi));
    let mut with_and = bi_example();
    with_and.root = PlainNode {
        sequent: seq("(r,(p;t),p -* q); s |- (q*r) /\\ s", Logic::Bi),
        rule: RuleId::AndR,
        children: vec![
            with_and.root,
            build(&Tree("(r,(p;t),p -* q); s |- s", RuleId::W, vec![Tree("s |- s", RuleId::Axiom, vec![])]), Logic::Bi),
        ],
    };
    ensure!(plain3.same_up_to_order(&with_and), "∧R proof differs:\n{plain3}");
    Ok("x1=0 x2=1 y1=0 y3=1 and x=1 y=0; both printed LBI proofs match; ∧R adds no variables".into())
}

fn criterion_06() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut parts = Vec::new();
    for logic in [Logic::Mll, Logic::Pll, Logic::Bi] {
        let (mut checked, mut limit_hits, mut tries) = (0, 0, 0);
        while checked < 200 {
            tries += 1;
            ensure!(tries < 400, "{logic}: only {checked} proofs in {tries} attempts");
            let s = random_provable(&mut rng, logic, 3, 4, 8);
            let r = prove_with(&s, logic, Strategy::Lazy).map_err(|e| e.to_string())?;
            let Some(p) = r.outcome.proof() else {
                ensure!(
                    matches!(r.outcome, Outcome::NotProved(FailReason::Budget)),
                    "{logic}: provable {s} reported unprovable"
                );
                limit_hits += 1;
                continue;
            };
            recheck_resource_proof(p).map_err(|e| format!("{logic} {s}: {e}"))?;
            let plain = extract(p).map_err(|e| format!("{logic} {s}: {e}"))?;
            ensure!(plain.endsequent().equivalent(&s), "{logic}: extracted endsequent {} for {s}", plain.endsequent());
            ensure!(check_proof(&plain, logic), "{logic} {s}: {:?}", validate(&plain, logic));
            checked += 1;
        }
        parts.push(format!("{logic} {checked}/{checked} checked ({limit_hits} over budget)"));
    }
    Ok(parts.join(", "))
}

/// Results for the criterion 7 corpus: oracle verdict, then one verdict
/// per strategy (lazy, eager, n=2, fact-first).
struct CorpusRun {
    exhaustive: usize,
    rows: Vec<(PlainSequent, bool, [Option<bool>; 4])>,
}

fn corpus_run() -> CorpusRun {
    let bounds = CorpusBounds::default();
    let mut corpus = exhaustive_mll(&bounds);
    let exhaustive = corpus.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    corpus.extend((0..500).map(|_| random_mll_sequent(&mut rng, 2, 10, BRUTE_FORCE_BOUND)));
    let strategies = [Strategy::Lazy, Strategy::Eager, Strategy::intermediate(2), Strategy::FactFirst];
    let rows = corpus
        .into_iter()
        .map(|s| {
            let oracle = brute_force_prove(&s, BRUTE_FORCE_BOUND).expect("corpus respects the oracle bound");
            let verdicts = strategies.map(|st| match prove_with(&s, Logic::Mll, st).expect("corpus is MLL").outcome {
                Outcome::Proved(_) => Some(true),
                Outcome::NotProved(FailReason::Exhausted) => Some(false),
                Outcome::NotProved(FailReason::Budget) => None,
            });
            (s, oracle, verdicts)
        })
        .collect();
    CorpusRun { exhaustive, rows }
}

fn criterion_07(run: &CorpusRun) -> Check {
    let mut provable = 0;
    for (s, oracle, v) in &run.rows {
        ensure!(v[0] == Some(*oracle), "{s}: prove says {:?}, oracle {oracle}", v[0]);
        provable += usize::from(*oracle);
    }
    Ok(format!(
        "{} exhaustive + {} random sequents, {provable} provable, 100% agreement",
        run.exhaustive,
        run.rows.len() - run.exhaustive
    ))
}

fn criterion_08(run: &CorpusRun) -> Check {
    for (s, _, v) in &run.rows {
        ensure!(v.iter().all(|x| x.is_some() && *x == v[0]), "{s}: lazy/eager/n=2/fact-first = {v:?}");
    }
    Ok(format!("{} sequents x 4 strategies identical", run.rows.len()))
}

// truth-table oracle, written against the raw products
fn table_sat(cs: &[Constraint], nvars: u32) -> bool {
    (0u32..1 << nvars).any(|bits| {
        cs.iter().all(|c| {
            let value = !c.expr.is_zero()
                && c.expr.literals().iter().all(|l| ((bits >> (l.var.0 - 1)) & 1 == 1) == l.positive);
            value == c.target
        })
    })
}

// renumbers the variables of `cs` to 1..=k before the truth table
fn compact_sat(cs: &[Constraint]) -> bool {
    let used: BTreeSet<Var> = cs.iter().flat_map(|c| c.expr.literals().iter().map(|l| l.var)).collect();
    let index: BTreeMap<Var, u32> = used.iter().zip(1..).map(|(v, i)| (*v, i)).collect();
    let renamed: Vec<Constraint> = cs
        .iter()
        .map(|c| {
            let e = if c.expr.is_zero() {
                BoolExpr::zero()
            } else {
                BoolExpr::from_literals(c.expr.literals().iter().map(|l| Literal { var: Var(index[&l.var]), ..*l }))
            };
            Constraint::new(e, c.target)
        })
        .collect();
    table_sat(&renamed, used.len() as u32)
}

fn criterion_09() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..1000 {
        let nvars = rng.gen_range(1..=12u32);
        let ncons = rng.gen_range(0..=20);
        let cs: Vec<Constraint> = (0..ncons)
            .map(|_| {
                let len = rng.gen_range(0..=3);
                let e = if rng.gen_ratio(1, 30) {
                    BoolExpr::zero()
                } else {
                    BoolExpr::from_literals((0..len).map(|_| {
                        let v = Var(rng.gen_range(1..=nvars));
                        if rng.gen_bool(0.5) {
                            Literal::pos(v)
                        } else {
                            Literal::neg(v)
                        }
                    }))
                };
                Constraint::new(e, rng.gen_bool(0.4))
            })
            .collect();
        let mut store = ConstraintStore::new();
        for c in &cs {
            store.add(c.clone());
        }
        let expected = table_sat(&cs, nvars);
        let got = store.solve(false);
        ensure!(got.is_some() == expected, "solve {:?} vs table {expected} on {cs:?}", got.is_some());
        if let Some(a) = got {
            for c in &cs {
                ensure!(c.holds(&a) == Ok(true), "assignment {a} violates {c}");
            }
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    Ok(format!("1000 stores ({sat} sat, {unsat} unsat) agree with the truth table"))
}

fn criterion_10() -> Check {
    let examples = [
        ("p,p,q,q |- (p*q)*(p*q)", Logic::Mll, Strategy::Eager, "r -o s"),
        ("p*q |- p*q", Logic::Mll, Strategy::Lazy, "~r"),
        ("p,q,q |- (p*q)+(p*q*q)", Logic::Pll, Strategy::Lazy, "!r"),
        ("(r,(p;t),p -* q); s |- q * r", Logic::Bi, Strategy::Lazy, "u * v"),
        ("r,(s;t) |- r*s", Logic::Bi, Strategy::Lazy, "u"),
        ("(r,(p;t),p -* q); s |- (q*r) /\\ s", Logic::Bi, Strategy::Lazy, "u -> v"),
    ];
    let mut injections = 0;
    for (text, logic, st, junk) in examples {
        let p = proof_of(text, logic, st)?;
        let base = extract(&p).map_err(|e| e.to_string())?;
        let junk = parse_formula(junk, logic).map_err(|e| e.to_string())?;
        for at in 0..p.tree.size() {
            let q = inject_zero(&p, at, junk.clone()).map_err(|e| format!("{text} at {at}: {e}"))?;
            let sub = q.tree.node(at).ok_or("no such node")?;
            recheck_tree(sub).map_err(|e| format!("{text} at {at}: {e}"))?;
            for c in q.tree.constraints() {
                ensure!(c.holds(&q.assignment) == Ok(true), "{text} at {at}: {c} fails");
            }
            let got = extract(&q).map_err(|e| format!("{text} at {at}: {e}"))?;
            ensure!(got == base, "{text}: injecting at node {at} changed the extraction:\n{got}");
            injections += 1;
        }
    }
    Ok(format!("{injections} injections over 6 examples, extraction unchanged"))
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, r: Check| {
        match r {
            Ok(detail) => println!("criterion {n:02} {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:02} {name}: FAIL ({why})");
            }
        }
    };
    report(1, "MLL worked example", criterion_01());
    report(2, "unprovability", criterion_02());
    report(3, "right-first refutation", criterion_03());
    report(4, "PLL worked example", criterion_04());
    report(5, "BI worked examples", criterion_05());
    report(6, "soundness of extraction", criterion_06());
    let run = corpus_run();
    report(7, "oracle agreement", criterion_07(&run));
    report(8, "strategy agreement", criterion_08(&run));
    report(9, "solver oracle", criterion_09());
    report(10, "zero injection", criterion_10());
    println!("acceptance: {} of 10 passed in {:.1?}", 10 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
