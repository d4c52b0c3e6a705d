use proptest::prelude::*;
use rand::SeedableRng;
use resprove_core::Strategy as Search;
use rand_chacha::ChaCha8Rng;

use resprove_core::corpus::{random_mll_sequent, random_provable};
use resprove_core::{
    brute_force_prove, check_proof, extract, prove, prove_with, truth_table_sat, BoolExpr, Constraint, ConstraintStore,
    FailReason, Formula, Literal, Logic, Outcome, PlainNode, PlainProof, PlainSequent, RuleId, SearchConfig, Var,
    BRUTE_FORCE_BOUND,
};

fn literal() -> impl Strategy<Value = Literal> {
    (1u32..=8, any::<bool>()).prop_map(|(v, pos)| if pos { Literal::pos(Var(v)) } else { Literal::neg(Var(v)) })
}

fn constraint() -> impl Strategy<Value = Constraint> {
    (prop::collection::vec(literal(), 0..=3), any::<bool>(), 0u8..20)
        .prop_map(|(lits, target, z)| {
            let e = if z == 0 { BoolExpr::zero() } else { BoolExpr::from_literals(lits) };
            Constraint::new(e, target)
        })
}

fn proved(seed: u64, logic: Logic) -> Option<PlainProof> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_provable(&mut rng, logic, 3, 3, 6);
    let r = prove_with(&s, logic, Search::Lazy).ok()?;
    extract(r.outcome.proof()?).ok()
}

fn leaves(n: &PlainNode, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n.children.is_empty() {
        out.push(path.clone());
    }
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        leaves(c, path, out);
        path.pop();
    }
}

fn branching(n: &PlainNode, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n.children.len() > 1 {
        out.push(path.clone());
    }
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        branching(c, path, out);
        path.pop();
    }
}

fn at<'a>(n: &'a mut PlainNode, path: &[usize]) -> &'a mut PlainNode {
    path.iter().fold(n, |n, i| &mut n.children[*i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn store_agrees_with_truth_table(cs in prop::collection::vec(constraint(), 0..12)) {
        let mut store = ConstraintStore::new();
        store.add_all(&cs);
        let got = store.solve(false);
        prop_assert_eq!(got.is_some(), truth_table_sat(&cs).is_some());
        if let Some(a) = got {
            for c in &cs {
                prop_assert_eq!(c.holds(&a).ok(), Some(true));
            }
        }
    }

    #[test]
    fn push_pop_restores_consistency(base in prop::collection::vec(constraint(), 0..6), extra in prop::collection::vec(constraint(), 0..6)) {
        let mut store = ConstraintStore::new();
        store.add_all(&base);
        let before = store.check_sat();
        store.push();
        store.add_all(&extra);
        store.pop().unwrap();
        prop_assert_eq!(store.check_sat(), before);
        prop_assert_eq!(store.constraints(), &base[..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn strategies_agree_with_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_mll_sequent(&mut rng, 2, 6, BRUTE_FORCE_BOUND);
        let oracle = brute_force_prove(&s, BRUTE_FORCE_BOUND).unwrap();
        for st in [
            Search::Lazy,
            Search::Eager,
            Search::intermediate(1),
            Search::intermediate(3),
            Search::FactFirst,
        ] {
            let r = prove_with(&s, Logic::Mll, st).unwrap();
            prop_assert_eq!(r.outcome.is_proved(), oracle, "{} under {}", s, st);
        }
    }

    #[test]
    fn larger_budget_keeps_proofs(seed in any::<u64>(), budget in 1usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_mll_sequent(&mut rng, 2, 6, BRUTE_FORCE_BOUND);
        let run = |b: usize| {
            let mut cfg = SearchConfig::with_strategy(Search::Lazy);
            cfg.limits.node_budget = b;
            prove(&s, Logic::Mll, &cfg).unwrap().outcome
        };
        let small = run(budget);
        let large = run(budget * 4);
        if small.is_proved() {
            prop_assert!(large.is_proved());
        }
        if matches!(small, Outcome::NotProved(FailReason::Exhausted)) {
            prop_assert!(!large.is_proved());
        }
    }

    #[test]
    fn checker_rejects_mutations(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        for logic in [Logic::Mll, Logic::Pll, Logic::Bi] {
            let Some(p) = proved(seed, logic) else { continue };
            prop_assert!(check_proof(&p, logic));

            // a leaf whose succedent no longer matches
            let mut ls = Vec::new();
            leaves(&p.root, &mut Vec::new(), &mut ls);
            let mut q = p.clone();
            let leaf = at(&mut q.root, pick.get(&ls));
            // these close whatever the succedent is
            if matches!(leaf.rule, RuleId::ZeroL | RuleId::TopR | RuleId::FalseL) {
                continue;
            }
            match &mut leaf.sequent {
                PlainSequent::Ll { succ, .. } => *succ = vec![Formula::atom("zz")],
                PlainSequent::Bi { succ, .. } => *succ = Formula::atom("zz"),
            }
            prop_assert!(!check_proof(&q, logic), "flipped leaf accepted in {}", p);

            // a branching rule with a premise missing
            let mut bs = Vec::new();
            branching(&p.root, &mut Vec::new(), &mut bs);
            if !bs.is_empty() {
                let mut q = p.clone();
                at(&mut q.root, pick.get(&bs)).children.pop();
                prop_assert!(!check_proof(&q, logic), "dropped premise accepted in {}", p);
            }
        }
    }
}

#[test]
fn generator_feeds_the_mutation_test() {
    for logic in [Logic::Mll, Logic::Pll, Logic::Bi] {
        let found = (0..40).filter(|s| proved(*s, logic).is_some()).count();
        assert!(found >= 30, "{logic}: only {found} of 40 seeds proved");
    }
}
