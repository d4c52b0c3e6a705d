//! Plain proofs read off a resource proof by deleting every formula whose
//! expression evaluates to 0.
//!
//! Multiset contexts need nothing beyond restriction. BI antecedents are
//! trees, so each plain rule instance is rebuilt syntactically from the
//! restricted conclusion; wherever that differs from the restricted
//! premise an explicit E step bridges the two.

use std::fmt;

use crate::boolexpr::{Assignment, BoolExpr, Replay, Var, VarAllocator};
use crate::bunch::{comma_join, semi_join, Bunch, BunchAddress, BunchNode};
use crate::calculus::{self, Principal, RuleId, RuleInstance};
use crate::context::AnnFormula;
use crate::error::{Error, Result};
use crate::formula::{Formula, Logic};
use crate::search::{ResourceProof, ResourceTree};
use crate::sequent::{BiSequent, LlSequent, PlainSequent, Sequent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainNode {
    pub sequent: PlainSequent,
    pub rule: RuleId,
    pub children: Vec<PlainNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainProof {
    pub logic: Logic,
    pub root: PlainNode,
}

impl PlainNode {
    pub fn leaf(sequent: PlainSequent, rule: RuleId) -> PlainNode {
        PlainNode {
            sequent,
            rule,
            children: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PlainNode::size).sum::<usize>()
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a PlainNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    /// Leaves of the tree, left to right.
    pub fn leaves(&self) -> Vec<&PlainNode> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.children.is_empty() {
                out.push(n)
            }
        });
        out
    }

    fn normalized(&self) -> PlainNode {
        if self.rule == RuleId::E && self.children.len() == 1 {
            return self.children[0].normalized();
        }
        PlainNode {
            sequent: self.sequent.normalized(),
            rule: self.rule,
            children: self.children.iter().map(PlainNode::normalized).collect(),
        }
    }

    // text form with children sorted, for comparisons up to premise order
    fn shape(&self) -> String {
        let mut kids: Vec<String> = self.children.iter().map(PlainNode::shape).collect();
        kids.sort();
        format!("{} [{}] ({})", self.sequent, self.rule.name(), kids.join(" | "))
    }

    fn render(&self, depth: usize, unicode: bool, out: &mut String) {
        let name = if unicode { self.rule.symbol() } else { self.rule.name() };
        out.push_str(&format!("{}{}   [{}]\n", "  ".repeat(depth), self.sequent.format(unicode), name));
        for c in &self.children {
            c.render(depth + 1, unicode, out);
        }
    }
}

impl PlainProof {
    pub fn endsequent(&self) -> &PlainSequent {
        &self.root.sequent
    }

    /// Drops E steps and canonicalizes every sequent.
    pub fn normalized(&self) -> PlainProof {
        PlainProof {
            logic: self.logic,
            root: self.root.normalized(),
        }
    }

    /// Equality after normalization, ignoring the order of premises.
    pub fn same_up_to_order(&self, other: &PlainProof) -> bool {
        self.logic == other.logic && self.normalized().root.shape() == other.normalized().root.shape()
    }

    /// Indented rendering, conclusion first, premises below and indented.
    pub fn render(&self, unicode: bool) -> String {
        let mut s = String::new();
        self.root.render(0, unicode, &mut s);
        s
    }
}

impl fmt::Display for PlainProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

/// True iff every endsequent variable and every principal expression is
/// 1 under the proof's assignment. Unassigned variables are an error.
pub fn endsequent_check(p: &ResourceProof) -> Result<bool> {
    for v in &p.endsequent_vars {
        match p.assignment.get(*v) {
            None => return Err(Error::Unassigned(*v)),
            Some(false) => return Ok(false),
            Some(true) => {}
        }
    }
    let mut result = Ok(true);
    p.tree.walk(&mut |t| {
        if let Ok(true) = result {
            if let Some(e) = t.principal_expr() {
                result = e.evaluate(&p.assignment);
            }
        }
    });
    result
}

/// The plain proof corresponding to `p` under its assignment.
pub fn extract(p: &ResourceProof) -> Result<PlainProof> {
    if !endsequent_check(p)? {
        return Err(Error::Extract("an endsequent variable or principal expression is 0".into()));
    }
    let a = &p.assignment;
    let root = match p.logic {
        Logic::Mll | Logic::Pll => extract_ll(&p.tree, a)?,
        Logic::Bi => {
            let node = extract_bi(&p.tree, a)?;
            bridge(p.goal.clone(), node)?
        }
    };
    Ok(PlainProof { logic: p.logic, root })
}

fn extract_ll(t: &ResourceTree, a: &Assignment) -> Result<PlainNode> {
    let sequent = t.sequent.restrict(a)?;
    let children = t.children.iter().map(|c| extract_ll(c, a)).collect::<Result<Vec<_>>>()?;
    if t.rule.rule == RuleId::BangLC {
        // Γ, !φ, φ ⊢ Δ  ⟶  Γ, !φ, !φ ⊢ Δ  ⟶  Γ, !φ ⊢ Δ
        let (ante, succ) = match &sequent {
            PlainSequent::Ll { ante, succ } => (ante.clone(), succ.clone()),
            _ => unreachable!(),
        };
        let bang = match (&t.sequent, &t.rule.principal) {
            (Sequent::Ll(s), Principal::Ante(i)) => s.ante[*i].formula.clone(),
            _ => return Err(Error::Extract("malformed combined contraction".into())),
        };
        let mut doubled = ante;
        doubled.push(bang);
        let mid = PlainNode {
            sequent: PlainSequent::Ll { ante: doubled, succ },
            rule: RuleId::BangL,
            children,
        };
        return Ok(PlainNode {
            sequent,
            rule: RuleId::ContrBangL,
            children: vec![mid],
        });
    }
    Ok(PlainNode {
        sequent,
        rule: t.rule.rule,
        children,
    })
}

fn bi_parts(t: &ResourceTree) -> (&Bunch, &Formula) {
    match &t.sequent {
        Sequent::Bi(s) => (&s.ante, &s.succ),
        _ => unreachable!("BI tree holds BI sequents"),
    }
}

fn restricted(b: &Bunch, a: &Assignment) -> Result<Bunch> {
    Ok(b.restrict_raw(a)?.unwrap_or_else(Bunch::emp_m))
}

/// The restriction of `b` with the node at `path` replaced by `hole`.
/// Every node on the path must survive.
fn ctx_restrict(b: &Bunch, path: &[usize], hole: Bunch, a: &Assignment) -> Result<Bunch> {
    let Some((first, rest)) = path.split_first() else {
        return Ok(hole);
    };
    if !b.expr.evaluate(a)? {
        return Err(Error::Extract("principal lies below a deleted bunch".into()));
    }
    let mut kept = Vec::new();
    for (i, c) in b.children().iter().enumerate() {
        if i == *first {
            kept.push(ctx_restrict(c, rest, hole.clone(), a)?);
        } else if let Some(r) = c.restrict_raw(a)? {
            kept.push(r);
        }
    }
    Ok(if b.is_comma() { comma_join(kept) } else { semi_join(kept) })
}

fn plain_bi(ante: Bunch, succ: &Formula) -> PlainSequent {
    PlainSequent::Bi {
        ante,
        succ: succ.clone(),
    }
}

/// Puts `node` below a conclusion `want`, adding an E step if needed.
fn bridge(want: PlainSequent, node: PlainNode) -> Result<PlainNode> {
    if want == node.sequent {
        return Ok(node);
    }
    if !want.equivalent(&node.sequent) {
        return Err(Error::Extract(format!(
            "premise {} is not equivalent to {}",
            want, node.sequent
        )));
    }
    Ok(PlainNode {
        sequent: want,
        rule: RuleId::E,
        children: vec![node],
    })
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

/// Splits the children of a tagged comma by the value of each child's
/// variable. Zero-tagged children carry no variable and go nowhere.
fn split_by_tag(children: &[Bunch], skip: Option<usize>, vars: &[Var], a: &Assignment) -> Result<(Vec<Bunch>, Vec<Bunch>)> {
    let mut it = vars.iter();
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (i, c) in children.iter().enumerate() {
        if Some(i) == skip || c.expr.is_zero() {
            continue;
        }
        let v = *it.next().ok_or(Error::TagArity {
            expected: vars.len() + 1,
            found: vars.len(),
        })?;
        let Some(r) = c.restrict_raw(a)? else { continue };
        match a.get(v) {
            Some(true) => left.push(r),
            Some(false) => right.push(r),
            None => return Err(Error::Unassigned(v)),
        }
    }
    Ok((left, right))
}

fn extract_bi(t: &ResourceTree, a: &Assignment) -> Result<PlainNode> {
    use RuleId::*;
    let (ante, succ) = bi_parts(t);
    let x = restricted(ante, a)?;
    let conclusion = plain_bi(x.clone(), succ);
    let kids = t.children.iter().map(|c| extract_bi(c, a)).collect::<Result<Vec<_>>>()?;
    let node = |rule, wants: Vec<Bunch>, succs: Vec<Formula>, kids: Vec<PlainNode>| -> Result<PlainNode> {
        let children = wants
            .into_iter()
            .zip(succs)
            .zip(kids)
            .map(|((w, s), k)| bridge(plain_bi(w, &s), k))
            .collect::<Result<Vec<_>>>()?;
        Ok(PlainNode {
            sequent: plain_bi(x.clone(), succ),
            rule,
            children,
        })
    };
    let child_succ = |i: usize| bi_parts(&t.children[i]).1.clone();
    let at = |p: &Principal| -> Result<BunchAddress> {
        match p {
            Principal::At(a) => Ok(a.clone()),
            _ => Err(Error::Extract(format!("{} needs an address", t.rule))),
        }
    };
    let leaf_formula = |addr: &BunchAddress| -> Result<Formula> {
        ante.get(addr)
            .and_then(Bunch::formula)
            .cloned()
            .ok_or_else(|| Error::BadAddress(addr.clone()))
    };
    let halves = |f: &Formula| -> Result<(Formula, Formula)> {
        match f {
            Formula::Binary(_, l, r) => Ok(((**l).clone(), (**r).clone())),
            _ => Err(Error::Extract(format!("{f} is not binary"))),
        }
    };

    match t.rule.rule {
        Axiom | FalseL | TrueR | IR => Ok(PlainNode::leaf(conclusion, t.rule.rule)),
        W => match &t.rule.principal {
            Principal::Keep { at, keep } => {
                let slot = ante.get(at).ok_or_else(|| Error::BadAddress(at.clone()))?;
                let kept = slot.children()[*keep].clone();
                let hole = restricted(&kept, a)?;
                let y = ctx_restrict(ante, at, hole, a)?;
                let child = kids.into_iter().next().unwrap();
                if y == x {
                    // nothing else in the slot survived
                    return bridge(conclusion, child);
                }
                node(W, vec![y], vec![succ.clone()], vec![child])
            }
            Principal::ToUnit => {
                let child = kids.into_iter().next().unwrap();
                if x == Bunch::emp_a() {
                    return bridge(conclusion, child);
                }
                let padded = Bunch::semi(vec![x.clone(), Bunch::emp_a()]);
                let weak = PlainNode {
                    sequent: plain_bi(padded.clone(), succ),
                    rule: W,
                    children: vec![bridge(plain_bi(Bunch::emp_a(), succ), child)?],
                };
                Ok(PlainNode {
                    sequent: conclusion,
                    rule: E,
                    children: vec![weak],
                })
            }
            _ => Err(Error::Extract("bad weakening principal".into())),
        },
        C | IL | TrueL | StarL | AndL | OrL => {
            let addr = at(&t.rule.principal)?;
            let f = leaf_formula(&addr)?;
            let holes: Vec<Bunch> = match t.rule.rule {
                C => vec![Bunch::semi(vec![Bunch::leaf(f.clone()), Bunch::leaf(f)])],
                IL => vec![Bunch::emp_m()],
                TrueL => vec![Bunch::emp_a()],
                StarL => {
                    let (l, r) = halves(&f)?;
                    vec![Bunch::comma(vec![Bunch::leaf(l), Bunch::leaf(r)])]
                }
                AndL => {
                    let (l, r) = halves(&f)?;
                    vec![Bunch::semi(vec![Bunch::leaf(l), Bunch::leaf(r)])]
                }
                _ => {
                    let (l, r) = halves(&f)?;
                    vec![Bunch::leaf(l), Bunch::leaf(r)]
                }
            };
            let wants = holes
                .into_iter()
                .map(|h| ctx_restrict(ante, &addr, h, a))
                .collect::<Result<Vec<_>>>()?;
            let succs = vec![succ.clone(); wants.len()];
            node(t.rule.rule, wants, succs, kids)
        }
        WandR | ImpR => {
            let (l, _) = halves(succ)?;
            let y = if t.rule.rule == WandR {
                let mut items = comma_children(&x);
                items.push(Bunch::leaf(l));
                comma_join(items)
            } else {
                let mut items = semi_children(&x);
                items.push(Bunch::leaf(l));
                semi_join(items)
            };
            node(t.rule.rule, vec![y], vec![child_succ(0)], kids)
        }
        AndR => node(AndR, vec![x.clone(), x.clone()], vec![child_succ(0), child_succ(1)], kids),
        OrR => node(OrR, vec![x.clone()], vec![child_succ(0)], kids),
        StarR => {
            let (l, r) = split_by_tag(ante.children(), None, &t.fresh, a)?;
            node(StarR, vec![comma_join(l), comma_join(r)], vec![child_succ(0), child_succ(1)], kids)
        }
        WandL | ImpL => {
            let addr = at(&t.rule.principal)?;
            let f = leaf_formula(&addr)?;
            let (_, psi) = halves(&f)?;
            let (me, parent_addr) = addr.split_last().unwrap();
            let parent = ante.get(parent_addr).ok_or_else(|| Error::BadAddress(addr.clone()))?;
            let (y1, y2) = if t.rule.rule == WandL {
                if parent.is_comma() {
                    let (gamma, _) = split_by_tag(parent.children(), Some(*me), &t.fresh, a)?;
                    // rebuild the parent without Γ and with ψ in the wand's place
                    let mut it = t.fresh.iter();
                    let mut rest = Vec::new();
                    for (i, c) in parent.children().iter().enumerate() {
                        if i == *me {
                            rest.push(Bunch::leaf(psi.clone()));
                            continue;
                        }
                        if c.expr.is_zero() {
                            continue;
                        }
                        let v = *it.next().unwrap();
                        if a.get(v) == Some(false) {
                            if let Some(r) = c.restrict_raw(a)? {
                                rest.push(r);
                            }
                        }
                    }
                    (comma_join(gamma), ctx_restrict(ante, parent_addr, comma_join(rest), a)?)
                } else {
                    (Bunch::emp_m(), ctx_restrict(ante, &addr, Bunch::leaf(psi), a)?)
                }
            } else {
                let y1 = if parent.is_semi() {
                    let mut sibs = Vec::new();
                    for (i, c) in parent.children().iter().enumerate() {
                        if i != *me {
                            if let Some(r) = c.restrict_raw(a)? {
                                sibs.push(r);
                            }
                        }
                    }
                    semi_join(sibs)
                } else {
                    Bunch::emp_a()
                };
                (y1, ctx_restrict(ante, &addr, Bunch::leaf(psi), a)?)
            };
            node(t.rule.rule, vec![y1, y2], vec![child_succ(0), child_succ(1)], kids)
        }
        r => Err(Error::Extract(format!("rule {r} does not belong to BI"))),
    }
}

/// Adds `junk[0]` to the sequent of the node at preorder index `at` and
/// replays the subtree above it with the same fresh variables. The
/// assignment is unchanged. Ancestors are left as they were, so only the
/// subtree at `at` is a derivation of the weakened sequent.
pub fn inject_zero(p: &ResourceProof, at: usize, junk: Formula) -> Result<ResourceProof> {
    let mut counter = 0;
    let tree = inject_at(&p.tree, at, &junk, &mut counter)?;
    Ok(ResourceProof {
        tree,
        ..p.clone()
    })
}

fn inject_at(t: &ResourceTree, at: usize, junk: &Formula, counter: &mut usize) -> Result<ResourceTree> {
    if *counter == at {
        let seq = match &t.sequent {
            Sequent::Ll(s) => {
                let mut ante = s.ante.clone();
                ante.push(AnnFormula::new(junk.clone(), BoolExpr::zero()));
                Sequent::Ll(LlSequent {
                    ante,
                    succ: s.succ.clone(),
                })
            }
            Sequent::Bi(s) => {
                let mut slots = s.ante.children().to_vec();
                slots.push(Bunch::leaf(junk.clone()).with_expr(BoolExpr::zero()));
                Sequent::Bi(BiSequent {
                    ante: Bunch::comma(slots).canonical_root(),
                    succ: s.succ.clone(),
                })
            }
        };
        *counter += t.size();
        return replay(t, seq);
    }
    *counter += 1;
    let children = t
        .children
        .iter()
        .map(|c| inject_at(c, at, junk, counter))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResourceTree {
        children,
        ..t.clone()
    })
}

/// Re-applies the rules of `t` starting from `seq`, which must contain
/// every item of `t.sequent` (possibly at other positions).
fn replay(t: &ResourceTree, seq: Sequent) -> Result<ResourceTree> {
    let principal = relocate(&t.sequent, &seq, &t.rule.principal)?;
    let inst = RuleInstance::new(t.rule.rule, principal);
    let mut spare = VarAllocator::new();
    spare.rewind(Var(u32::MAX / 2));
    let app = calculus::apply(&seq, &inst, &mut Replay::new(&t.fresh, &mut spare))?;
    if app.fresh != t.fresh || app.premises.len() != t.children.len() {
        return Err(Error::Extract("replay diverged from the recorded derivation".into()));
    }
    let children = app
        .premises
        .into_iter()
        .zip(&t.children)
        .map(|(p, c)| replay(c, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResourceTree {
        sequent: seq,
        rule: inst,
        emitted: app.emitted,
        fresh: app.fresh,
        children,
    })
}

/// Finds in `new` the item that `p` names in `old`: same value, same
/// rank among equal values.
pub fn relocate(old: &Sequent, new: &Sequent, p: &Principal) -> Result<Principal> {
    let lost = || Error::Extract(format!("cannot relocate principal {p}"));
    let nth = |items: &[AnnFormula], want: &[AnnFormula], i: usize| -> Result<usize> {
        let target = items.get(i).ok_or_else(lost)?;
        let rank = items[..i].iter().filter(|x| *x == target).count();
        want.iter()
            .enumerate()
            .filter(|(_, x)| *x == target)
            .nth(rank)
            .map(|(j, _)| j)
            .ok_or_else(lost)
    };
    let addr = |ob: &Bunch, nb: &Bunch, at: &BunchAddress| -> Result<BunchAddress> {
        let target = ob.get(at).ok_or_else(lost)?;
        let olds = ob.addresses();
        let rank = olds
            .iter()
            .take_while(|x| *x != at)
            .filter(|x| ob.get(x) == Some(target) && x.len() == at.len())
            .count();
        nb.addresses()
            .into_iter()
            .filter(|x| nb.get(x) == Some(target) && x.len() == at.len())
            .nth(rank)
            .ok_or_else(lost)
    };
    Ok(match (old, new, p) {
        (Sequent::Ll(o), Sequent::Ll(n), Principal::Ante(i)) => Principal::Ante(nth(&o.ante, &n.ante, *i)?),
        (Sequent::Ll(o), Sequent::Ll(n), Principal::Succ(i)) => Principal::Succ(nth(&o.succ, &n.succ, *i)?),
        (Sequent::Ll(o), Sequent::Ll(n), Principal::Pair { ante, succ }) => Principal::Pair {
            ante: nth(&o.ante, &n.ante, *ante)?,
            succ: nth(&o.succ, &n.succ, *succ)?,
        },
        (Sequent::Bi(o), Sequent::Bi(n), Principal::At(at)) => Principal::At(addr(&o.ante, &n.ante, at)?),
        (Sequent::Bi(o), Sequent::Bi(n), Principal::Keep { at, keep }) => Principal::Keep {
            at: addr(&o.ante, &n.ante, at)?,
            keep: *keep,
        },
        (_, _, q) => q.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;
    use crate::search::{prove, SearchConfig, Strategy};

    fn proof(s: &str, logic: Logic) -> ResourceProof {
        let r = prove(&parse_sequent(s, logic).unwrap(), logic, &SearchConfig::with_strategy(Strategy::Lazy)).unwrap();
        r.outcome.proof().expect("provable").clone()
    }

    #[test]
    fn pll_example_extracts() {
        let p = proof("p, q, q |- (p * q) + (p * q * q)", Logic::Pll);
        let plain = extract(&p).unwrap();
        assert_eq!(plain.root.rule, RuleId::PlusR);
        assert_eq!(plain.root.children[0].sequent.to_string(), "p, q, q |- p * q * q");
        let leaves: Vec<String> = plain.root.leaves().iter().map(|l| l.sequent.to_string()).collect();
        assert_eq!(leaves, vec!["p |- p", "q |- q", "q |- q"]);
    }

    #[test]
    fn bi_example_extracts() {
        let p = proof("(r, (p; t), p -* q); s |- q * r", Logic::Bi);
        let plain = extract(&p).unwrap();
        assert_eq!(plain.endsequent().to_string(), "(r, (p; t), p -* q); s |- q * r");
        let rules: Vec<RuleId> = {
            let mut v = Vec::new();
            plain.root.walk(&mut |n| v.push(n.rule));
            v
        };
        assert!(rules.contains(&RuleId::WandL) && rules.contains(&RuleId::StarR) && rules.contains(&RuleId::W));
    }

    #[test]
    fn junk_does_not_change_extraction() {
        for (s, l) in [
            ("p, p, q, q |- (p * q) * (p * q)", Logic::Mll),
            ("p, q, q |- (p * q) + (p * q * q)", Logic::Pll),
            ("(r, (p; t), p -* q); s |- q * r", Logic::Bi),
        ] {
            let p = proof(s, l);
            let base = extract(&p).unwrap();
            for at in 0..p.tree.size() {
                let q = inject_zero(&p, at, Formula::atom("junk")).unwrap();
                assert_eq!(extract(&q).unwrap(), base, "{s} at node {at}");
            }
        }
    }

    #[test]
    fn flipped_endsequent_variable_fails_the_check() {
        let mut p = proof("p, q |- p * q", Logic::Mll);
        assert!(endsequent_check(&p).unwrap());
        p.assignment.set(p.endsequent_vars[0], false);
        assert!(!endsequent_check(&p).unwrap());
        p.assignment = Assignment::new();
        assert!(endsequent_check(&p).is_err());
    }
}
