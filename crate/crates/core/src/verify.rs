//! Independent oracles: a rule checker for plain MLL, PLL and LBI proofs,
//! a brute-force MLL prover, and a re-check of resource proofs.

use std::collections::HashMap;

use crate::boolexpr::{Replay, Var, VarAllocator};
use crate::bunch::{comma_join, coherent_equal, semi_join, Bunch, BunchNode};
use crate::calculus::{self, RuleId};
use crate::error::{Error, Result};
use crate::extract::{endsequent_check, PlainNode, PlainProof};
use crate::formula::{BinOp, Constant, Formula, Logic, UnOp};
use crate::search::{ResourceProof, ResourceTree};
use crate::sequent::{multiset_eq, PlainSequent};

/// A rejected node: its position (child indices from the root) and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: String,
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "node [{}]: {}", path.join("."), self.reason)
    }
}

/// True iff every node of `p` is a correct instance of a rule of `logic`.
pub fn check_proof(p: &PlainProof, logic: Logic) -> bool {
    validate(p, logic).is_ok()
}

/// Like [`check_proof`] but says where and why a proof is rejected.
pub fn validate(p: &PlainProof, logic: Logic) -> std::result::Result<(), CheckFailure> {
    if p.logic != logic {
        return Err(CheckFailure {
            path: vec![],
            reason: format!("proof is for {}, not {}", p.logic, logic),
        });
    }
    let mut path = Vec::new();
    validate_node(&p.root, logic, &mut path)
}

fn validate_node(n: &PlainNode, logic: Logic, path: &mut Vec<usize>) -> std::result::Result<(), CheckFailure> {
    let fail = |path: &Vec<usize>, reason: String| CheckFailure { path: path.clone(), reason };
    if !n.sequent.fits(logic) {
        return Err(fail(path, format!("{} is not a {logic} sequent", n.sequent)));
    }
    let ok = match (&n.sequent, logic) {
        (PlainSequent::Ll { ante, succ }, Logic::Mll | Logic::Pll) => check_ll(n.rule, ante, succ, &n.children, logic),
        (PlainSequent::Bi { ante, succ }, Logic::Bi) => check_bi(n.rule, ante, succ, &n.children),
        _ => Err("sequent shape does not match the logic".to_string()),
    };
    ok.map_err(|r| fail(path, format!("{} by {}: {r}", n.sequent, n.rule.name())))?;
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        validate_node(c, logic, path)?;
        path.pop();
    }
    Ok(())
}

type Check = std::result::Result<(), String>;

fn ll_parts(n: &PlainNode) -> Option<(&[Formula], &[Formula])> {
    match &n.sequent {
        PlainSequent::Ll { ante, succ } => Some((ante, succ)),
        _ => None,
    }
}

fn without(v: &[Formula], i: usize) -> Vec<Formula> {
    let mut v = v.to_vec();
    v.remove(i);
    v
}

fn with(v: &[Formula], add: &[Formula]) -> Vec<Formula> {
    let mut v = v.to_vec();
    v.extend_from_slice(add);
    v
}

/// Removes one copy of each of `take` from `from`, if all are present.
fn minus(from: &[Formula], take: &[Formula]) -> Option<Vec<Formula>> {
    let mut v = from.to_vec();
    for t in take {
        let i = v.iter().position(|x| x == t)?;
        v.remove(i);
    }
    Some(v)
}

fn mll_rule(r: RuleId) -> bool {
    use RuleId::*;
    matches!(
        r,
        Axiom | BotL | BotR | OneL | OneR | ParL | ParR | TensorL | TensorR | LolliL | LolliR | NegL | NegR
    )
}

fn pll_rule(r: RuleId) -> bool {
    use RuleId::*;
    mll_rule(r)
        || matches!(
            r,
            ZeroL | TopR | PlusL | PlusR | WithL | WithR | BangL | BangR | QuestL | QuestR | WeakBangL | WeakQuestR | ContrBangL | ContrQuestR
        )
}

fn check_ll(rule: RuleId, ante: &[Formula], succ: &[Formula], kids: &[PlainNode], logic: Logic) -> Check {
    use RuleId::*;
    let allowed = if logic == Logic::Mll { mll_rule(rule) } else { pll_rule(rule) };
    if !allowed {
        return Err(format!("not a {logic} rule"));
    }
    let prem: Vec<(&[Formula], &[Formula])> = kids.iter().map(|k| ll_parts(k).ok_or("premise is not linear")).collect::<std::result::Result<_, _>>()?;
    let arity = match rule {
        Axiom | BotL | OneR | ZeroL | TopR => 0,
        TensorR | ParL | LolliL | WithR | PlusL => 2,
        _ => 1,
    };
    if prem.len() != arity {
        return Err(format!("expected {arity} premises, found {}", prem.len()));
    }
    let same = |a: &[Formula], s: &[Formula], p: (&[Formula], &[Formula])| multiset_eq(a, p.0) && multiset_eq(s, p.1);
    let bin = |f: &Formula, op: BinOp| match f {
        Formula::Binary(o, l, r) if *o == op => Some(((**l).clone(), (**r).clone())),
        _ => None,
    };
    let un = |f: &Formula, op: UnOp| match f {
        Formula::Unary(o, g) if *o == op => Some((**g).clone()),
        _ => None,
    };
    let konst = |f: &Formula, c: Constant| *f == Formula::Const(c);
    let left = |pred: &dyn Fn(usize, &Formula) -> bool| ante.iter().enumerate().any(|(i, f)| pred(i, f));
    let right = |pred: &dyn Fn(usize, &Formula) -> bool| succ.iter().enumerate().any(|(i, f)| pred(i, f));
    // splits: the two premises' side contexts must add up to the conclusion's
    let split = |ctx_a: &[Formula], ctx_s: &[Formula], p1: (&[Formula], &[Formula]), add1: (&[Formula], &[Formula]), p2: (&[Formula], &[Formula]), add2: (&[Formula], &[Formula])| -> bool {
        let (Some(a1), Some(s1), Some(a2), Some(s2)) = (minus(p1.0, add1.0), minus(p1.1, add1.1), minus(p2.0, add2.0), minus(p2.1, add2.1)) else {
            return false;
        };
        multiset_eq(&with(&a1, &a2), ctx_a) && multiset_eq(&with(&s1, &s2), ctx_s)
    };
    let all_bang = |v: &[Formula]| v.iter().all(|f| matches!(f, Formula::Unary(UnOp::Bang, _)));
    let all_quest = |v: &[Formula]| v.iter().all(|f| matches!(f, Formula::Unary(UnOp::Quest, _)));

    let ok = match rule {
        Axiom => ante.len() == 1 && succ.len() == 1 && ante[0] == succ[0] && ante[0].is_atom(),
        BotL => ante.len() == 1 && succ.is_empty() && konst(&ante[0], Constant::Bottom),
        OneR => ante.is_empty() && succ.len() == 1 && konst(&succ[0], Constant::One),
        ZeroL => ante.iter().any(|f| konst(f, Constant::Zero)),
        TopR => succ.iter().any(|f| konst(f, Constant::Top)),
        OneL => left(&|i, f| konst(f, Constant::One) && same(&without(ante, i), succ, prem[0])),
        BotR => right(&|i, f| konst(f, Constant::Bottom) && same(ante, &without(succ, i), prem[0])),
        TensorL => left(&|i, f| bin(f, BinOp::Tensor).is_some_and(|(a, b)| same(&with(&without(ante, i), &[a, b]), succ, prem[0]))),
        ParR => right(&|i, f| bin(f, BinOp::Par).is_some_and(|(a, b)| same(ante, &with(&without(succ, i), &[a, b]), prem[0]))),
        LolliR => right(&|i, f| {
            bin(f, BinOp::Lolli).is_some_and(|(a, b)| same(&with(ante, &[a]), &with(&without(succ, i), &[b]), prem[0]))
        }),
        NegL => left(&|i, f| un(f, UnOp::Neg).is_some_and(|a| same(&without(ante, i), &with(succ, &[a]), prem[0]))),
        NegR => right(&|i, f| un(f, UnOp::Neg).is_some_and(|a| same(&with(ante, &[a]), &without(succ, i), prem[0]))),
        TensorR => right(&|i, f| {
            bin(f, BinOp::Tensor).is_some_and(|(a, b)| {
                split(ante, &without(succ, i), prem[0], (&[], &[a]), prem[1], (&[], &[b]))
            })
        }),
        ParL => left(&|i, f| {
            bin(f, BinOp::Par).is_some_and(|(a, b)| split(&without(ante, i), succ, prem[0], (&[a], &[]), prem[1], (&[b], &[])))
        }),
        LolliL => left(&|i, f| {
            bin(f, BinOp::Lolli).is_some_and(|(a, b)| split(&without(ante, i), succ, prem[0], (&[], &[a]), prem[1], (&[b], &[])))
        }),
        WithR => right(&|i, f| {
            bin(f, BinOp::With).is_some_and(|(a, b)| {
                let rest = without(succ, i);
                same(ante, &with(&rest, &[a]), prem[0]) && same(ante, &with(&rest, &[b]), prem[1])
            })
        }),
        PlusL => left(&|i, f| {
            bin(f, BinOp::Plus).is_some_and(|(a, b)| {
                let rest = without(ante, i);
                same(&with(&rest, &[a]), succ, prem[0]) && same(&with(&rest, &[b]), succ, prem[1])
            })
        }),
        PlusR => right(&|i, f| {
            bin(f, BinOp::Plus).is_some_and(|(a, b)| {
                let rest = without(succ, i);
                same(ante, &with(&rest, &[a]), prem[0]) || same(ante, &with(&rest, &[b]), prem[0])
            })
        }),
        WithL => left(&|i, f| {
            bin(f, BinOp::With).is_some_and(|(a, b)| {
                let rest = without(ante, i);
                same(&with(&rest, &[a]), succ, prem[0]) || same(&with(&rest, &[b]), succ, prem[0])
            })
        }),
        BangL => left(&|i, f| un(f, UnOp::Bang).is_some_and(|a| same(&with(&without(ante, i), &[a]), succ, prem[0]))),
        QuestR => right(&|i, f| un(f, UnOp::Quest).is_some_and(|a| same(ante, &with(&without(succ, i), &[a]), prem[0]))),
        BangR => right(&|i, f| {
            let rest = without(succ, i);
            all_bang(ante) && all_quest(&rest) && un(f, UnOp::Bang).is_some_and(|a| same(ante, &with(&rest, &[a]), prem[0]))
        }),
        QuestL => left(&|i, f| {
            let rest = without(ante, i);
            all_bang(&rest) && all_quest(succ) && un(f, UnOp::Quest).is_some_and(|a| same(&with(&rest, &[a]), succ, prem[0]))
        }),
        WeakBangL => left(&|i, f| un(f, UnOp::Bang).is_some() && same(&without(ante, i), succ, prem[0])),
        WeakQuestR => right(&|i, f| un(f, UnOp::Quest).is_some() && same(ante, &without(succ, i), prem[0])),
        ContrBangL => left(&|_, f| un(f, UnOp::Bang).is_some() && same(&with(ante, &[f.clone()]), succ, prem[0])),
        ContrQuestR => right(&|_, f| un(f, UnOp::Quest).is_some() && same(ante, &with(succ, &[f.clone()]), prem[0])),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err("no principal formula makes this a valid instance".into())
    }
}

fn bi_parts(n: &PlainNode) -> Option<(&Bunch, &Formula)> {
    match &n.sequent {
        PlainSequent::Bi { ante, succ } => Some((ante, succ)),
        _ => None,
    }
}

fn comma_children(b: &Bunch) -> Vec<Bunch> {
    match &b.node {
        BunchNode::EmpM => vec![],
        BunchNode::Comma(c) => c.clone(),
        _ => vec![b.clone()],
    }
}

fn semi_children(b: &Bunch) -> Vec<Bunch> {
    match &b.node {
        BunchNode::EmpA => vec![],
        BunchNode::Semi(c) => c.clone(),
        _ => vec![b.clone()],
    }
}

/// Order-preserving sub-lists picked by each bitmask in `0..2^n`.
fn subsets(items: &[Bunch]) -> impl Iterator<Item = (Vec<Bunch>, Vec<Bunch>)> + '_ {
    let n = items.len().min(16);
    (0u32..1 << n).map(move |mask| {
        let mut inn = Vec::new();
        let mut out = Vec::new();
        for (i, b) in items.iter().enumerate() {
            if i < 16 && mask >> i & 1 == 1 {
                inn.push(b.clone());
            } else {
                out.push(b.clone());
            }
        }
        (inn, out)
    })
}

fn bi_rule(r: RuleId) -> bool {
    use RuleId::*;
    matches!(
        r,
        Axiom | W | C | E | IL | IR | TrueL | TrueR | FalseL | WandL | WandR | StarL | StarR | ImpL | ImpR | AndL | AndR | OrL | OrR
    )
}

fn check_bi(rule: RuleId, x: &Bunch, chi: &Formula, kids: &[PlainNode]) -> Check {
    use RuleId::*;
    if !bi_rule(rule) {
        return Err("not an LBI rule".into());
    }
    if !annotation_free(x) {
        return Err("plain bunch carries annotations".into());
    }
    let prem: Vec<(&Bunch, &Formula)> = kids.iter().map(|k| bi_parts(k).ok_or("premise is not a BI sequent")).collect::<std::result::Result<_, _>>()?;
    let arity = match rule {
        Axiom | IR | TrueR | FalseL => 0,
        StarR | WandL | ImpL | AndR | OrL => 2,
        _ => 1,
    };
    if prem.len() != arity {
        return Err(format!("expected {arity} premises, found {}", prem.len()));
    }
    let leaves = x.leaves();
    let at_leaf = |pred: &dyn Fn(&[usize], &Formula) -> bool| leaves.iter().any(|(a, f)| pred(a, f));
    let put = |addr: &[usize], b: Bunch| x.replace_raw(addr, b).ok();
    let halves = |f: &Formula, op: BinOp| match f {
        Formula::Binary(o, l, r) if *o == op => Some(((**l).clone(), (**r).clone())),
        _ => None,
    };
    let is = |p: (&Bunch, &Formula), b: &Bunch, s: &Formula| p.0 == b && p.1 == s;
    let lf = Bunch::leaf;

    let ok = match rule {
        Axiom => x.formula() == Some(chi),
        IR => x.node == BunchNode::EmpM && *chi == Formula::Const(Constant::I),
        TrueR => x.node == BunchNode::EmpA && *chi == Formula::Const(Constant::True),
        FalseL => at_leaf(&|_, f| *f == Formula::Const(Constant::False)),
        E => *prem[0].1 == *chi && coherent_equal(x, prem[0].0),
        IL | TrueL => {
            let (k, unit) = if rule == IL {
                (Constant::I, Bunch::emp_m())
            } else {
                (Constant::True, Bunch::emp_a())
            };
            at_leaf(&|a, f| *f == Formula::Const(k) && put(a, unit.clone()).is_some_and(|y| is(prem[0], &y, chi)))
        }
        StarL | AndL => {
            let op = if rule == StarL { BinOp::Star } else { BinOp::And };
            at_leaf(&|a, f| {
                halves(f, op).is_some_and(|(l, r)| {
                    let pair = vec![lf(l), lf(r)];
                    let b = if rule == StarL { Bunch::comma(pair) } else { Bunch::semi(pair) };
                    put(a, b).is_some_and(|y| is(prem[0], &y, chi))
                })
            })
        }
        OrL => at_leaf(&|a, f| {
            halves(f, BinOp::Or).is_some_and(|(l, r)| {
                put(a, lf(l)).is_some_and(|y| is(prem[0], &y, chi)) && put(a, lf(r)).is_some_and(|y| is(prem[1], &y, chi))
            })
        }),
        C => x.addresses().iter().any(|a| {
            let d = x.get(a).unwrap().clone();
            put(a, Bunch::semi(vec![d.clone(), d])).is_some_and(|y| is(prem[0], &y, chi))
        }),
        W => x.addresses().iter().any(|a| {
            let node = x.get(a).unwrap();
            node.is_semi()
                && subsets(node.children()).any(|(keep, _)| {
                    !keep.is_empty()
                        && keep.len() < node.children().len()
                        && put(a, semi_join(keep)).is_some_and(|y| is(prem[0], &y, chi))
                })
        }),
        WandR => halves(chi, BinOp::Wand).is_some_and(|(l, r)| {
            let mut items = comma_children(x);
            items.push(lf(l));
            is(prem[0], &comma_join(items), &r)
        }),
        ImpR => halves(chi, BinOp::Imp).is_some_and(|(l, r)| {
            let mut items = semi_children(x);
            items.push(lf(l));
            is(prem[0], &semi_join(items), &r)
        }),
        AndR => halves(chi, BinOp::And).is_some_and(|(l, r)| is(prem[0], x, &l) && is(prem[1], x, &r)),
        OrR => halves(chi, BinOp::Or).is_some_and(|(l, r)| is(prem[0], x, &l) || is(prem[0], x, &r)),
        StarR => halves(chi, BinOp::Star).is_some_and(|(l, r)| {
            subsets(&comma_children(x)).any(|(a, b)| is(prem[0], &comma_join(a), &l) && is(prem[1], &comma_join(b), &r))
        }),
        WandL => at_leaf(&|a, f| {
            halves(f, BinOp::Wand).is_some_and(|(phi, psi)| {
                if !(*prem[0].1 == phi && *prem[1].1 == *chi) {
                    return false;
                }
                // Γ empty: the wand simply becomes ψ
                if *prem[0].0 == Bunch::emp_m() && put(a, lf(psi.clone())).is_some_and(|y| y == *prem[1].0) {
                    return true;
                }
                let Some((me, parent_addr)) = a.split_last() else { return false };
                let parent = x.get(parent_addr).unwrap();
                if !parent.is_comma() {
                    return false;
                }
                let others: Vec<usize> = (0..parent.children().len()).filter(|i| i != me).collect();
                (0u32..1 << others.len().min(16)).any(|mask| {
                    let picked = |i: usize| others.iter().position(|o| *o == i).is_some_and(|k| mask >> k & 1 == 1);
                    let gamma: Vec<Bunch> = others.iter().filter(|i| picked(**i)).map(|i| parent.children()[*i].clone()).collect();
                    if comma_join(gamma) != *prem[0].0 {
                        return false;
                    }
                    // ψ takes the wand's place among the siblings left behind
                    let rest: Vec<Bunch> = parent
                        .children()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !picked(*i))
                        .map(|(i, b)| if i == *me { lf(psi.clone()) } else { b.clone() })
                        .collect();
                    put(parent_addr, comma_join(rest)).is_some_and(|y| y == *prem[1].0)
                })
            })
        }),
        ImpL => at_leaf(&|a, f| {
            halves(f, BinOp::Imp).is_some_and(|(phi, psi)| {
                if !(*prem[0].1 == phi && *prem[1].1 == *chi) {
                    return false;
                }
                if !put(a, lf(psi.clone())).is_some_and(|y| y == *prem[1].0) {
                    return false;
                }
                if *prem[0].0 == Bunch::emp_a() {
                    return true;
                }
                let Some((me, parent_addr)) = a.split_last() else { return false };
                let parent = x.get(parent_addr).unwrap();
                parent.is_semi() && {
                    let others: Vec<Bunch> = parent.children().iter().enumerate().filter(|(i, _)| i != me).map(|(_, b)| b.clone()).collect();
                    let found = subsets(&others).any(|(gamma, _)| semi_join(gamma) == *prem[0].0);
                    found
                }
            })
        }),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err("no principal makes this a valid instance".into())
    }
}

fn annotation_free(b: &Bunch) -> bool {
    b.expr.is_one() && b.children().iter().all(annotation_free)
}

/// Default size bound for [`brute_force_prove`].
pub const BRUTE_FORCE_BOUND: usize = 14;

/// Exhaustive MLL provability: tries every rule on every formula and every
/// context split. Fails if the sequent is bigger than `bound` symbols.
pub fn brute_force_prove(seq: &PlainSequent, bound: usize) -> Result<bool> {
    let (ante, succ) = match seq {
        PlainSequent::Ll { ante, succ } => (ante, succ),
        _ => return Err(Error::Malformed("the brute-force oracle covers MLL only".into())),
    };
    if !seq.fits(Logic::Mll) {
        return Err(Error::Malformed("the brute-force oracle covers MLL only".into()));
    }
    let size = seq.size();
    if size > bound {
        return Err(Error::SizeBound { size, bound });
    }
    let mut memo = HashMap::new();
    Ok(bf(ante.clone(), succ.clone(), &mut memo))
}

type Key = (Vec<Formula>, Vec<Formula>);

fn bf(mut ante: Vec<Formula>, mut succ: Vec<Formula>, memo: &mut HashMap<Key, bool>) -> bool {
    ante.sort();
    succ.sort();
    let key = (ante, succ);
    if let Some(b) = memo.get(&key) {
        return *b;
    }
    let r = bf_step(&key.0, &key.1, memo);
    memo.insert(key, r);
    r
}

type Split = (Vec<Formula>, Vec<Formula>, Vec<Formula>, Vec<Formula>);

/// Every way to divide the side formulas between two premises.
fn splits(ctx_a: &[Formula], ctx_s: &[Formula]) -> Vec<Split> {
    let n = ctx_a.len() + ctx_s.len();
    (0u32..1 << n)
        .map(|mask| {
            let (mut a1, mut a2, mut s1, mut s2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for (i, f) in ctx_a.iter().enumerate() {
                if mask >> i & 1 == 1 { a1.push(f.clone()) } else { a2.push(f.clone()) }
            }
            for (j, f) in ctx_s.iter().enumerate() {
                if mask >> (ctx_a.len() + j) & 1 == 1 { s1.push(f.clone()) } else { s2.push(f.clone()) }
            }
            (a1, s1, a2, s2)
        })
        .collect()
}

fn bf_step(ante: &[Formula], succ: &[Formula], memo: &mut HashMap<Key, bool>) -> bool {
    use Constant::*;
    if ante.len() == 1 && succ.len() == 1 && ante[0] == succ[0] && ante[0].is_atom() {
        return true;
    }
    if ante.is_empty() && succ == [Formula::Const(One)] {
        return true;
    }
    if succ.is_empty() && ante == [Formula::Const(Bottom)] {
        return true;
    }
    for i in 0..ante.len() {
        let rest = without(ante, i);
        let ok = match &ante[i] {
            Formula::Const(One) => bf(rest, succ.to_vec(), memo),
            Formula::Binary(BinOp::Tensor, a, b) => bf(with(&rest, &[(**a).clone(), (**b).clone()]), succ.to_vec(), memo),
            Formula::Unary(UnOp::Neg, a) => bf(rest, with(succ, &[(**a).clone()]), memo),
            Formula::Binary(BinOp::Par, a, b) => splits(&rest, succ).into_iter().any(|(a1, s1, a2, s2)| {
                bf(with(&a1, &[(**a).clone()]), s1, memo) && bf(with(&a2, &[(**b).clone()]), s2, memo)
            }),
            Formula::Binary(BinOp::Lolli, a, b) => splits(&rest, succ).into_iter().any(|(a1, s1, a2, s2)| {
                bf(a1, with(&s1, &[(**a).clone()]), memo) && bf(with(&a2, &[(**b).clone()]), s2, memo)
            }),
            _ => false,
        };
        if ok {
            return true;
        }
    }
    for j in 0..succ.len() {
        let rest = without(succ, j);
        let ok = match &succ[j] {
            Formula::Const(Bottom) => bf(ante.to_vec(), rest, memo),
            Formula::Binary(BinOp::Par, a, b) => bf(ante.to_vec(), with(&rest, &[(**a).clone(), (**b).clone()]), memo),
            Formula::Binary(BinOp::Lolli, a, b) => bf(with(ante, &[(**a).clone()]), with(&rest, &[(**b).clone()]), memo),
            Formula::Unary(UnOp::Neg, a) => bf(with(ante, &[(**a).clone()]), rest, memo),
            Formula::Binary(BinOp::Tensor, a, b) => splits(ante, &rest).into_iter().any(|(a1, s1, a2, s2)| {
                bf(a1, with(&s1, &[(**a).clone()]), memo) && bf(a2, with(&s2, &[(**b).clone()]), memo)
            }),
            _ => false,
        };
        if ok {
            return true;
        }
    }
    false
}

/// Replays every rule application of `p` with its recorded variables and
/// confirms the premises, the constraints, and the assignment.
pub fn recheck_resource_proof(p: &ResourceProof) -> std::result::Result<(), String> {
    let tree_vars = p.tree.vars();
    if let Some(v) = tree_vars.iter().find(|v| p.assignment.get(**v).is_none()) {
        return Err(format!("assignment is not total: {v} is missing"));
    }
    recheck_tree(&p.tree)?;
    for c in p.constraints() {
        match c.holds(&p.assignment) {
            Ok(true) => {}
            Ok(false) => return Err(format!("constraint {c} fails")),
            Err(e) => return Err(e.to_string()),
        }
    }
    match endsequent_check(p) {
        Ok(true) => Ok(()),
        Ok(false) => Err("an endsequent variable or principal expression is 0".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Replays every rule of `t` and compares premises and constraints, without
/// looking at any assignment.
pub fn recheck_tree(t: &ResourceTree) -> std::result::Result<(), String> {
    let mut spare = VarAllocator::new();
    spare.rewind(Var(u32::MAX / 2));
    let app = calculus::apply(&t.sequent, &t.rule, &mut Replay::new(&t.fresh, &mut spare)).map_err(|e| e.to_string())?;
    if app.fresh != t.fresh {
        return Err(format!("{} at {} used other fresh variables", t.rule, t.sequent));
    }
    if app.emitted != t.emitted {
        return Err(format!("{} at {} emits different constraints", t.rule, t.sequent));
    }
    let recorded: Vec<_> = t.children.iter().map(|c| &c.sequent).collect();
    if app.premises.iter().collect::<Vec<_>>() != recorded {
        return Err(format!("{} at {} has different premises", t.rule, t.sequent));
    }
    t.children.iter().try_for_each(recheck_tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::extract;
    use crate::parse::parse_sequent;
    use crate::search::{prove, SearchConfig, Strategy};

    fn found(s: &str, logic: Logic) -> ResourceProof {
        let r = prove(&parse_sequent(s, logic).unwrap(), logic, &SearchConfig::with_strategy(Strategy::Lazy)).unwrap();
        r.outcome.proof().expect("provable").clone()
    }

    #[test]
    fn extracted_examples_check() {
        for (s, l) in [
            ("p, p, q, q |- (p * q) * (p * q)", Logic::Mll),
            ("p -o q, p |- q", Logic::Mll),
            ("p, q, q |- (p * q) + (p * q * q)", Logic::Pll),
            ("!p |- p * p", Logic::Pll),
            ("(r, (p; t), p -* q); s |- q * r", Logic::Bi),
            ("r, (s; t) |- r * s", Logic::Bi),
            ("(r, (p; t), p -* q); s |- (q * r) /\\ s", Logic::Bi),
        ] {
            let p = found(s, l);
            recheck_resource_proof(&p).unwrap();
            let plain = extract(&p).unwrap();
            validate(&plain, l).unwrap_or_else(|e| panic!("{s}: {e}\n{plain}"));
        }
    }

    #[test]
    fn wrong_axiom_is_rejected() {
        let leaf = PlainNode::leaf(parse_sequent("p |- q", Logic::Mll).unwrap(), RuleId::Axiom);
        assert!(!check_proof(&PlainProof { logic: Logic::Mll, root: leaf }, Logic::Mll));
    }

    #[test]
    fn brute_force_examples() {
        let bf = |s: &str| brute_force_prove(&parse_sequent(s, Logic::Mll).unwrap(), BRUTE_FORCE_BOUND).unwrap();
        assert!(bf("p, q |- p * q"));
        assert!(!bf("p * q, r |- p * q"));
        assert!(bf("p |- p # bot"));
        assert!(bf("|- 1"));
        assert!(!bf("|-"));
        let big = parse_sequent("p * p * p * p * p, q |- q * p * p * p * p * p", Logic::Mll).unwrap();
        assert!(matches!(brute_force_prove(&big, 14), Err(Error::SizeBound { .. })));
    }
}
