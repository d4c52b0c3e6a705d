//! The resource rule sets for MLL, PLL and BI.
//!
//! [`applicable`] lists every rule instance whose conclusion matches a
//! sequent; [`apply`] builds the premises and the equations the instance
//! emits. The principal formula's expression is always constrained to 1.

use std::fmt;
use std::str::FromStr;

use crate::boolexpr::{BoolExpr, Constraint, Fresh, Literal, Var};
use crate::bunch::{tag_bunch, tag_bunch_complement, Bunch, BunchAddress, BunchNode};
use crate::context::{ll_slot_count, AnnFormula};
use crate::error::{Error, Result};
use crate::formula::{BinOp, Constant, Formula, UnOp};
use crate::sequent::{BiSequent, LlSequent, Sequent};

macro_rules! rules {
    ($($id:ident => $sym:expr),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleId { $($id),* }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$id),*];

            /// ASCII name, used in JSON.
            pub fn name(self) -> &'static str {
                match self { $(RuleId::$id => stringify!($id)),* }
            }

            /// Conventional symbolic name.
            pub fn symbol(self) -> &'static str {
                match self { $(RuleId::$id => $sym),* }
            }
        }
    };
}

rules! {
    Axiom => "Axiom",
    BotL => "⊥L",
    BotR => "⊥R",
    OneL => "1L",
    OneR => "1R",
    ParL => "⅋L",
    ParR => "⅋R",
    TensorL => "⊗L",
    TensorR => "⊗R",
    LolliL => "⊸L",
    LolliR => "⊸R",
    NegL => "L⊥",
    NegR => "R⊥",
    ZeroL => "0L",
    TopR => "⊤R",
    PlusL => "⊕L",
    PlusR => "⊕R",
    WithL => "&L",
    WithR => "&R",
    BangL => "!L",
    BangR => "!R",
    QuestL => "?L",
    QuestR => "?R",
    WeakBangL => "W!L",
    WeakQuestR => "W?R",
    ContrBangL => "C!L",
    ContrQuestR => "C?R",
    BangLC => "!L+C!L",
    W => "W",
    C => "C",
    E => "E",
    IL => "IL",
    IR => "IR",
    TrueL => "1L",
    TrueR => "1R",
    FalseL => "⊥L",
    WandL => "−∗L",
    WandR => "−∗R",
    StarL => "∗L",
    StarR => "∗R",
    ImpL => "→L",
    ImpR => "→R",
    AndL => "∧L",
    AndR => "∧R",
    OrL => "∨L",
    OrR => "∨R",
}

impl RuleId {
    /// Rules that close a branch.
    pub fn is_leaf(self) -> bool {
        use RuleId::*;
        matches!(self, Axiom | BotL | OneR | ZeroL | TopR | IR | TrueR | FalseL)
    }

    /// Rules that split the context between two premises.
    pub fn is_split(self) -> bool {
        use RuleId::*;
        matches!(self, TensorR | ParL | LolliL | StarR | WandL)
    }

    pub fn is_contraction(self) -> bool {
        use RuleId::*;
        matches!(self, C | ContrBangL | ContrQuestR | BangLC)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown rule '{s}'")))
    }
}

/// Where a rule instance acts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Principal {
    None,
    Ante(usize),
    Succ(usize),
    /// Axiom pairing of an antecedent and a succedent atom.
    Pair { ante: usize, succ: usize },
    /// A node of the BI antecedent.
    At(BunchAddress),
    /// BI weakening of a top-level `;` slot down to one child.
    Keep { at: BunchAddress, keep: usize },
    /// BI weakening of the whole antecedent to the additive unit.
    ToUnit,
    /// Which disjunct ∨R keeps.
    Choice(usize),
}

fn fmt_addr(a: &[usize]) -> String {
    a.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

fn parse_addr(s: &str) -> Result<BunchAddress> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|p| p.parse::<usize>().map_err(|_| Error::Malformed(format!("bad address '{s}'"))))
        .collect()
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Principal::None => f.write_str("none"),
            Principal::Ante(i) => write!(f, "ante:{i}"),
            Principal::Succ(i) => write!(f, "succ:{i}"),
            Principal::Pair { ante, succ } => write!(f, "ante:{ante},succ:{succ}"),
            Principal::At(a) => write!(f, "at:{}", fmt_addr(a)),
            Principal::Keep { at, keep } => write!(f, "keep:{}/{keep}", fmt_addr(at)),
            Principal::ToUnit => f.write_str("unit"),
            Principal::Choice(i) => write!(f, "choice:{i}"),
        }
    }
}

impl FromStr for Principal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad principal '{s}'"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if s == "none" {
            return Ok(Principal::None);
        }
        if s == "unit" {
            return Ok(Principal::ToUnit);
        }
        if let Some((a, b)) = s.split_once(",succ:") {
            let a = a.strip_prefix("ante:").ok_or_else(bad)?;
            return Ok(Principal::Pair { ante: num(a)?, succ: num(b)? });
        }
        if let Some(r) = s.strip_prefix("ante:") {
            return Ok(Principal::Ante(num(r)?));
        }
        if let Some(r) = s.strip_prefix("succ:") {
            return Ok(Principal::Succ(num(r)?));
        }
        if let Some(r) = s.strip_prefix("at:") {
            return Ok(Principal::At(parse_addr(r)?));
        }
        if let Some(r) = s.strip_prefix("keep:") {
            let (a, k) = r.split_once('/').ok_or_else(bad)?;
            return Ok(Principal::Keep { at: parse_addr(a)?, keep: num(k)? });
        }
        if let Some(r) = s.strip_prefix("choice:") {
            return Ok(Principal::Choice(num(r)?));
        }
        Err(bad())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub principal: Principal,
}

impl RuleInstance {
    pub fn new(rule: RuleId, principal: Principal) -> RuleInstance {
        RuleInstance { rule, principal }
    }
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.rule, self.principal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApplication {
    pub premises: Vec<Sequent>,
    pub emitted: Vec<Constraint>,
    pub fresh: Vec<Var>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CalculusOptions {
    /// Offer the combined dereliction-plus-contraction rule for `!` on the left.
    pub combined_bang: bool,
}

/// Every rule instance whose conclusion matches `seq`.
pub fn applicable(seq: &Sequent, opts: CalculusOptions) -> Vec<RuleInstance> {
    match seq {
        Sequent::Ll(s) => applicable_ll(s, opts),
        Sequent::Bi(s) => applicable_bi(s),
    }
}

fn applicable_ll(s: &LlSequent, opts: CalculusOptions) -> Vec<RuleInstance> {
    use RuleId::*;
    let mut out = Vec::new();
    let mut push = |r, p| out.push(RuleInstance::new(r, p));
    for (i, a) in s.ante.iter().enumerate() {
        let p = || Principal::Ante(i);
        match &a.formula {
            Formula::Atom(_) => {
                for (j, b) in s.succ.iter().enumerate() {
                    if b.formula == a.formula {
                        push(Axiom, Principal::Pair { ante: i, succ: j });
                    }
                }
            }
            Formula::Const(Constant::Bottom) => push(BotL, p()),
            Formula::Const(Constant::One) => push(OneL, p()),
            Formula::Const(Constant::Zero) => push(ZeroL, p()),
            Formula::Binary(BinOp::Par, ..) => push(ParL, p()),
            Formula::Binary(BinOp::Tensor, ..) => push(TensorL, p()),
            Formula::Binary(BinOp::Lolli, ..) => push(LolliL, p()),
            Formula::Binary(BinOp::With, ..) => push(WithL, p()),
            Formula::Binary(BinOp::Plus, ..) => push(PlusL, p()),
            Formula::Unary(UnOp::Neg, _) => push(NegL, p()),
            Formula::Unary(UnOp::Bang, _) => {
                push(BangL, p());
                push(WeakBangL, p());
                push(ContrBangL, p());
                if opts.combined_bang {
                    push(BangLC, p());
                }
            }
            Formula::Unary(UnOp::Quest, _) => push(QuestL, p()),
            _ => {}
        }
    }
    for (j, b) in s.succ.iter().enumerate() {
        let p = || Principal::Succ(j);
        match &b.formula {
            Formula::Const(Constant::Bottom) => push(BotR, p()),
            Formula::Const(Constant::One) => push(OneR, p()),
            Formula::Const(Constant::Top) => push(TopR, p()),
            Formula::Binary(BinOp::Par, ..) => push(ParR, p()),
            Formula::Binary(BinOp::Tensor, ..) => push(TensorR, p()),
            Formula::Binary(BinOp::Lolli, ..) => push(LolliR, p()),
            Formula::Binary(BinOp::With, ..) => push(WithR, p()),
            Formula::Binary(BinOp::Plus, ..) => push(PlusR, p()),
            Formula::Unary(UnOp::Neg, _) => push(NegR, p()),
            Formula::Unary(UnOp::Quest, _) => {
                push(QuestR, p());
                push(WeakQuestR, p());
                push(ContrQuestR, p());
            }
            Formula::Unary(UnOp::Bang, _) => push(BangR, p()),
            _ => {}
        }
    }
    out
}

fn applicable_bi(s: &BiSequent) -> Vec<RuleInstance> {
    use RuleId::*;
    let mut out = Vec::new();
    let slots = s.ante.children();
    for (i, slot) in slots.iter().enumerate() {
        match &slot.node {
            BunchNode::Leaf(f) if *f == s.succ => out.push(RuleInstance::new(Axiom, Principal::At(vec![i]))),
            BunchNode::Leaf(Formula::Const(Constant::False)) => {
                out.push(RuleInstance::new(FalseL, Principal::At(vec![i])))
            }
            BunchNode::EmpA if s.succ == Formula::Const(Constant::True) => {
                out.push(RuleInstance::new(TrueR, Principal::At(vec![i])))
            }
            _ => {}
        }
    }
    if s.succ == Formula::Const(Constant::I) {
        out.push(RuleInstance::new(IR, Principal::None));
    }
    for (addr, f) in s.ante.leaves() {
        let at = || Principal::At(addr.clone());
        match f {
            Formula::Binary(BinOp::Star, ..) => out.push(RuleInstance::new(StarL, at())),
            Formula::Binary(BinOp::And, ..) => out.push(RuleInstance::new(AndL, at())),
            Formula::Binary(BinOp::Or, ..) => out.push(RuleInstance::new(OrL, at())),
            Formula::Binary(BinOp::Wand, ..) => out.push(RuleInstance::new(WandL, at())),
            Formula::Binary(BinOp::Imp, ..) => out.push(RuleInstance::new(ImpL, at())),
            Formula::Const(Constant::I) => out.push(RuleInstance::new(IL, at())),
            Formula::Const(Constant::True) => out.push(RuleInstance::new(TrueL, at())),
            _ => {}
        }
        if !f.is_atom() && !matches!(f, Formula::Const(_)) {
            out.push(RuleInstance::new(C, at()));
        }
    }
    match &s.succ {
        Formula::Binary(BinOp::Star, ..) => out.push(RuleInstance::new(StarR, Principal::None)),
        Formula::Binary(BinOp::Wand, ..) => out.push(RuleInstance::new(WandR, Principal::None)),
        Formula::Binary(BinOp::Imp, ..) => out.push(RuleInstance::new(ImpR, Principal::None)),
        Formula::Binary(BinOp::And, ..) => out.push(RuleInstance::new(AndR, Principal::None)),
        Formula::Binary(BinOp::Or, ..) => {
            out.push(RuleInstance::new(OrR, Principal::Choice(0)));
            out.push(RuleInstance::new(OrR, Principal::Choice(1)));
        }
        _ => {}
    }
    for (i, slot) in slots.iter().enumerate() {
        if slot.is_semi() {
            for k in 0..slot.children().len() {
                out.push(RuleInstance::new(W, Principal::Keep { at: vec![i], keep: k }));
            }
        }
    }
    if s.succ == Formula::Const(Constant::True)
        && !(slots.len() == 1 && slots[0].node == BunchNode::EmpA && slots[0].expr.is_one())
    {
        out.push(RuleInstance::new(W, Principal::ToUnit));
    }
    out
}

/// Applies `inst` to `seq`, drawing fresh variables from `fresh`.
pub fn apply(seq: &Sequent, inst: &RuleInstance, fresh: &mut impl Fresh) -> Result<RuleApplication> {
    match seq {
        Sequent::Ll(s) => apply_ll(s, inst, fresh),
        Sequent::Bi(s) => apply_bi(s, inst, fresh),
    }
}

fn mismatch(inst: &RuleInstance, reason: impl Into<String>) -> Error {
    Error::RuleMismatch {
        rule: format!("{inst}"),
        reason: reason.into(),
    }
}

fn one(e: &BoolExpr) -> Constraint {
    Constraint::one(e.clone())
}

fn zero(e: &BoolExpr) -> Constraint {
    Constraint::zero(e.clone())
}

/// Tags every item except `skip`, returning the tagged list and variables.
fn tag_except(ctx: &[AnnFormula], skip: Option<usize>, fresh: &mut impl Fresh) -> (Vec<AnnFormula>, Vec<Var>) {
    let mut vars = Vec::new();
    let out = ctx
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if Some(i) == skip || a.expr.is_zero() {
                a.clone()
            } else {
                let v = fresh.fresh();
                vars.push(v);
                a.times(Literal::pos(v))
            }
        })
        .collect();
    (out, vars)
}

/// Negates a tagging made by [`tag_except`].
fn untag_complement(tagged: &[AnnFormula], base: &[AnnFormula], skip: Option<usize>, vars: &[Var]) -> Vec<AnnFormula> {
    let mut it = vars.iter();
    base.iter()
        .zip(tagged)
        .enumerate()
        .map(|(i, (b, _))| {
            if Some(i) == skip || b.expr.is_zero() {
                b.clone()
            } else {
                b.times(Literal::neg(*it.next().unwrap()))
            }
        })
        .collect()
}

fn split_ll(
    ctx: &[AnnFormula],
    skip: Option<usize>,
    fresh: &mut impl Fresh,
) -> (Vec<AnnFormula>, Vec<AnnFormula>, Vec<Var>) {
    let (pos, vars) = tag_except(ctx, skip, fresh);
    let neg = untag_complement(&pos, ctx, skip, &vars);
    (pos, neg, vars)
}

fn ll(ante: Vec<AnnFormula>, succ: Vec<AnnFormula>) -> Sequent {
    Sequent::Ll(LlSequent { ante, succ })
}

fn children(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Binary(_, a, b) => Some(((**a).clone(), (**b).clone())),
        _ => None,
    }
}

fn apply_ll(s: &LlSequent, inst: &RuleInstance, fresh: &mut impl Fresh) -> Result<RuleApplication> {
    use RuleId::*;
    let done = |premises, emitted, fresh| Ok(RuleApplication { premises, emitted, fresh });

    if let (Axiom, Principal::Pair { ante, succ }) = (inst.rule, &inst.principal) {
        let a = s.ante.get(*ante).ok_or_else(|| mismatch(inst, "no such antecedent item"))?;
        let b = s.succ.get(*succ).ok_or_else(|| mismatch(inst, "no such succedent item"))?;
        if !a.formula.is_atom() || a.formula != b.formula {
            return Err(mismatch(inst, "axiom needs the same atom on both sides"));
        }
        let mut emitted = vec![one(&a.expr), one(&b.expr)];
        emitted.extend(s.ante.iter().enumerate().filter(|(i, _)| i != ante).map(|(_, x)| zero(&x.expr)));
        emitted.extend(s.succ.iter().enumerate().filter(|(j, _)| j != succ).map(|(_, x)| zero(&x.expr)));
        return done(vec![], emitted, vec![]);
    }

    let (left, idx) = match inst.principal {
        Principal::Ante(i) => (true, i),
        Principal::Succ(j) => (false, j),
        _ => return Err(mismatch(inst, "expected an antecedent or succedent position")),
    };
    let side = if left { &s.ante } else { &s.succ };
    let p = side.get(idx).ok_or_else(|| mismatch(inst, "position out of range"))?;
    let e = p.expr.clone();
    let f = &p.formula;
    let want = |ok: bool| if ok { Ok(()) } else { Err(mismatch(inst, format!("principal is {f}"))) };
    let mut emitted = vec![one(&e)];
    let others_zero = |emitted: &mut Vec<Constraint>| {
        for (i, x) in s.ante.iter().enumerate() {
            if !(left && i == idx) {
                emitted.push(zero(&x.expr));
            }
        }
        for (j, x) in s.succ.iter().enumerate() {
            if !(!left && j == idx) {
                emitted.push(zero(&x.expr));
            }
        }
    };
    let removed = |v: &[AnnFormula]| {
        let mut v = v.to_vec();
        v.remove(idx);
        v
    };
    let replaced = |v: &[AnnFormula], with: Vec<AnnFormula>| {
        let mut v = v.to_vec();
        v.splice(idx..=idx, with);
        v
    };
    let ann = |g: Formula| AnnFormula::new(g, e.clone());

    match (inst.rule, left) {
        (BotL, true) | (OneR, false) => {
            let k = if left { Constant::Bottom } else { Constant::One };
            want(*f == Formula::Const(k))?;
            others_zero(&mut emitted);
            done(vec![], emitted, vec![])
        }
        (ZeroL, true) | (TopR, false) => {
            let k = if left { Constant::Zero } else { Constant::Top };
            want(*f == Formula::Const(k))?;
            done(vec![], emitted, vec![])
        }
        (OneL, true) | (BotR, false) => {
            let k = if left { Constant::One } else { Constant::Bottom };
            want(*f == Formula::Const(k))?;
            let prem = if left {
                ll(removed(&s.ante), s.succ.clone())
            } else {
                ll(s.ante.clone(), removed(&s.succ))
            };
            done(vec![prem], emitted, vec![])
        }
        (TensorL, true) | (ParR, false) => {
            let op = if left { BinOp::Tensor } else { BinOp::Par };
            want(matches!(f, Formula::Binary(o, ..) if *o == op))?;
            let (a, b) = children(f).unwrap();
            let prem = if left {
                ll(replaced(&s.ante, vec![ann(a), ann(b)]), s.succ.clone())
            } else {
                ll(s.ante.clone(), replaced(&s.succ, vec![ann(a), ann(b)]))
            };
            done(vec![prem], emitted, vec![])
        }
        (LolliR, false) => {
            want(matches!(f, Formula::Binary(BinOp::Lolli, ..)))?;
            let (a, b) = children(f).unwrap();
            let mut ante = s.ante.clone();
            ante.push(ann(a));
            done(vec![ll(ante, replaced(&s.succ, vec![ann(b)]))], emitted, vec![])
        }
        (NegL, true) | (NegR, false) => {
            let inner = match f {
                Formula::Unary(UnOp::Neg, g) => (**g).clone(),
                _ => return Err(mismatch(inst, "principal is not a negation")),
            };
            let prem = if left {
                let mut succ = s.succ.clone();
                succ.push(ann(inner));
                ll(removed(&s.ante), succ)
            } else {
                let mut ante = s.ante.clone();
                ante.push(ann(inner));
                ll(ante, removed(&s.succ))
            };
            done(vec![prem], emitted, vec![])
        }
        (TensorR, false) => {
            want(matches!(f, Formula::Binary(BinOp::Tensor, ..)))?;
            let (a, b) = children(f).unwrap();
            let (av, an, mut vars) = split_ll(&s.ante, None, fresh);
            let (sw, sn, wvars) = split_ll(&s.succ, Some(idx), fresh);
            vars.extend(wvars);
            let mut s1 = sw;
            s1[idx] = ann(a);
            let mut s2 = sn;
            s2[idx] = ann(b);
            done(vec![ll(av, s1), ll(an, s2)], emitted, vars)
        }
        (ParL, true) | (LolliL, true) => {
            let op = if inst.rule == ParL { BinOp::Par } else { BinOp::Lolli };
            want(matches!(f, Formula::Binary(o, ..) if *o == op))?;
            let (a, b) = children(f).unwrap();
            let (av, an, mut vars) = split_ll(&s.ante, Some(idx), fresh);
            let (sw, sn, wvars) = split_ll(&s.succ, None, fresh);
            vars.extend(wvars);
            let p2 = ll(
                {
                    let mut v = an;
                    v[idx] = ann(b);
                    v
                },
                sn,
            );
            let p1 = if op == BinOp::Par {
                let mut v = av;
                v[idx] = ann(a);
                ll(v, sw)
            } else {
                let mut v = av;
                v.remove(idx);
                let mut succ = vec![ann(a)];
                succ.extend(sw);
                ll(v, succ)
            };
            done(vec![p1, p2], emitted, vars)
        }
        (PlusR, false) | (WithL, true) => {
            let op = if left { BinOp::With } else { BinOp::Plus };
            want(matches!(f, Formula::Binary(o, ..) if *o == op))?;
            let (a, b) = children(f).unwrap();
            let x = fresh.fresh();
            let items = vec![
                AnnFormula::new(a, e.product(Literal::pos(x))),
                AnnFormula::new(b, e.product(Literal::neg(x))),
            ];
            let prem = if left {
                ll(replaced(&s.ante, items), s.succ.clone())
            } else {
                ll(s.ante.clone(), replaced(&s.succ, items))
            };
            done(vec![prem], emitted, vec![x])
        }
        (WithR, false) | (PlusL, true) => {
            let op = if left { BinOp::Plus } else { BinOp::With };
            want(matches!(f, Formula::Binary(o, ..) if *o == op))?;
            let (a, b) = children(f).unwrap();
            let prems = [a, b]
                .into_iter()
                .map(|g| {
                    if left {
                        ll(replaced(&s.ante, vec![ann(g)]), s.succ.clone())
                    } else {
                        ll(s.ante.clone(), replaced(&s.succ, vec![ann(g)]))
                    }
                })
                .collect();
            done(prems, emitted, vec![])
        }
        (BangL, true) | (QuestR, false) | (BangR, false) | (QuestL, true) => {
            let op = match inst.rule {
                BangL | BangR => UnOp::Bang,
                _ => UnOp::Quest,
            };
            let inner = match f {
                Formula::Unary(o, g) if *o == op => (**g).clone(),
                _ => return Err(mismatch(inst, format!("principal is {f}"))),
            };
            if matches!(inst.rule, BangR | QuestL) {
                // the promotion context must be !Γ ⊢ ?Δ; anything else has to be absent
                for (i, x) in s.ante.iter().enumerate() {
                    if !(left && i == idx) && !matches!(x.formula, Formula::Unary(UnOp::Bang, _)) {
                        emitted.push(zero(&x.expr));
                    }
                }
                for (j, x) in s.succ.iter().enumerate() {
                    if !(!left && j == idx) && !matches!(x.formula, Formula::Unary(UnOp::Quest, _)) {
                        emitted.push(zero(&x.expr));
                    }
                }
            }
            let prem = if left {
                ll(replaced(&s.ante, vec![ann(inner)]), s.succ.clone())
            } else {
                ll(s.ante.clone(), replaced(&s.succ, vec![ann(inner)]))
            };
            done(vec![prem], emitted, vec![])
        }
        (WeakBangL, true) | (WeakQuestR, false) | (ContrBangL, true) | (ContrQuestR, false) | (BangLC, true) => {
            let op = if left { UnOp::Bang } else { UnOp::Quest };
            let inner = match f {
                Formula::Unary(o, g) if *o == op => (**g).clone(),
                _ => return Err(mismatch(inst, format!("principal is {f}"))),
            };
            let with = match inst.rule {
                WeakBangL | WeakQuestR => vec![],
                ContrBangL | ContrQuestR => vec![p.clone(), p.clone()],
                _ => vec![p.clone(), ann(inner)],
            };
            let prem = if left {
                ll(replaced(&s.ante, with), s.succ.clone())
            } else {
                ll(s.ante.clone(), replaced(&s.succ, with))
            };
            done(vec![prem], emitted, vec![])
        }
        _ => Err(mismatch(inst, "rule does not belong to the linear calculi on this side")),
    }
}

/// True iff every live antecedent formula is `!`-prefixed and every live
/// succedent formula other than the principal is `?`-prefixed. Items
/// whose expression `eval` reports as 0 are ignored.
pub fn modal_guard(s: &LlSequent, principal: &Principal, eval: impl Fn(&BoolExpr) -> Option<bool>) -> bool {
    let live = |x: &AnnFormula| eval(&x.expr) != Some(false);
    let ante_ok = s.ante.iter().enumerate().all(|(i, x)| {
        *principal == Principal::Ante(i) || !live(x) || matches!(x.formula, Formula::Unary(UnOp::Bang, _))
    });
    let succ_ok = s.succ.iter().enumerate().all(|(j, x)| {
        *principal == Principal::Succ(j) || !live(x) || matches!(x.formula, Formula::Unary(UnOp::Quest, _))
    });
    ante_ok && succ_ok
}

fn bi(ante: Bunch, succ: Formula) -> Sequent {
    Sequent::Bi(BiSequent { ante, succ })
}

fn apply_bi(s: &BiSequent, inst: &RuleInstance, fresh: &mut impl Fresh) -> Result<RuleApplication> {
    use RuleId::*;
    let root = &s.ante;
    let slots = root.children();
    let done = |premises, emitted, fresh| Ok(RuleApplication { premises, emitted, fresh });
    let addr = match &inst.principal {
        Principal::At(a) => Some(a.clone()),
        _ => None,
    };
    let node = |a: &BunchAddress| root.get(a).ok_or_else(|| Error::BadAddress(a.clone()));

    match (inst.rule, &inst.principal) {
        (Axiom | FalseL | TrueR, Principal::At(a)) if a.len() == 1 => {
            let slot = node(a)?;
            let ok = match inst.rule {
                Axiom => slot.formula() == Some(&s.succ),
                FalseL => slot.formula() == Some(&Formula::Const(Constant::False)),
                _ => slot.node == BunchNode::EmpA && s.succ == Formula::Const(Constant::True),
            };
            if !ok {
                return Err(mismatch(inst, "slot does not match the rule"));
            }
            let mut emitted = vec![one(&slot.expr)];
            emitted.extend(slots.iter().enumerate().filter(|(i, _)| *i != a[0]).map(|(_, x)| zero(&x.expr)));
            done(vec![], emitted, vec![])
        }
        (IR, Principal::None) => {
            if s.succ != Formula::Const(Constant::I) {
                return Err(mismatch(inst, "succedent is not I"));
            }
            done(vec![], slots.iter().map(|x| zero(&x.expr)).collect(), vec![])
        }
        (W, Principal::Keep { at, keep }) if at.len() == 1 => {
            let slot = node(at)?;
            if !slot.is_semi() {
                return Err(mismatch(inst, "slot is not a ';' bunch"));
            }
            let kept = slot
                .children()
                .get(*keep)
                .ok_or_else(|| mismatch(inst, "no such child"))?
                .clone()
                .times(&slot.expr);
            let emitted = vec![one(&kept.expr)];
            done(vec![bi(root.replace(at, kept)?, s.succ.clone())], emitted, vec![])
        }
        (W, Principal::ToUnit) => {
            if s.succ != Formula::Const(Constant::True) {
                return Err(mismatch(inst, "weakening to the unit needs succedent 1"));
            }
            done(vec![bi(Bunch::emp_a().canonical_root(), s.succ.clone())], vec![], vec![])
        }
        (C | IL | TrueL | StarL | AndL | OrL | WandL | ImpL, Principal::At(a)) if !a.is_empty() => {
            let leaf = node(a)?;
            let f = leaf.formula().ok_or_else(|| mismatch(inst, "principal is not a formula"))?.clone();
            let e = leaf.expr.clone();
            let eff = root.effective_expr(a)?;
            let emitted = vec![one(&eff)];
            let lf = |g: Formula| Bunch::leaf(g).with_expr(e.clone());
            let put = |with: Bunch| -> Result<Sequent> { Ok(bi(root.replace(a, with)?, s.succ.clone())) };
            let shape = |op: BinOp| -> Result<(Formula, Formula)> {
                match &f {
                    Formula::Binary(o, x, y) if *o == op => Ok(((**x).clone(), (**y).clone())),
                    _ => Err(mismatch(inst, format!("principal is {f}"))),
                }
            };
            match inst.rule {
                C => {
                    if f.is_atom() || matches!(f, Formula::Const(_)) {
                        return Err(mismatch(inst, "contraction is only offered on compound formulas"));
                    }
                    let twin = Bunch::semi(vec![Bunch::leaf(f.clone()), Bunch::leaf(f.clone())]).with_expr(e.clone());
                    done(vec![put(twin)?], emitted, vec![])
                }
                IL | TrueL => {
                    let (k, unit) = if inst.rule == IL {
                        (Constant::I, BunchNode::EmpM)
                    } else {
                        (Constant::True, BunchNode::EmpA)
                    };
                    if f != Formula::Const(k) {
                        return Err(mismatch(inst, format!("principal is {f}")));
                    }
                    done(vec![put(Bunch::new(unit).with_expr(e.clone()))?], emitted, vec![])
                }
                StarL | AndL => {
                    let (x, y) = shape(if inst.rule == StarL { BinOp::Star } else { BinOp::And })?;
                    let pair = vec![Bunch::leaf(x), Bunch::leaf(y)];
                    let b = if inst.rule == StarL { Bunch::comma(pair) } else { Bunch::semi(pair) };
                    done(vec![put(b.with_expr(e.clone()))?], emitted, vec![])
                }
                OrL => {
                    let (x, y) = shape(BinOp::Or)?;
                    done(vec![put(lf(x))?, put(lf(y))?], emitted, vec![])
                }
                WandL => {
                    let (x, y) = shape(BinOp::Wand)?;
                    let parent_addr = &a[..a.len() - 1];
                    let parent = node(&parent_addr.to_vec())?;
                    if !parent.is_comma() {
                        let p1 = bi(Bunch::comma(vec![]).canonical_root(), x);
                        return done(vec![p1, put(lf(y))?], emitted, vec![]);
                    }
                    let me = *a.last().unwrap();
                    let peff = root.effective_expr(parent_addr)?;
                    let siblings: Vec<Bunch> = parent
                        .children()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != me)
                        .map(|(_, b)| b.clone())
                        .collect();
                    let gamma = Bunch::comma(siblings.clone());
                    let (tagged, vars) = tag_bunch(&gamma, fresh);
                    let comp = tag_bunch_complement(&gamma, &vars)?;
                    let p1_ante = Bunch::comma(tagged.children().iter().map(|b| b.clone().times(&peff)).collect());
                    let p1 = bi(p1_ante.canonical_root(), x);
                    let mut rest: Vec<Bunch> = comp.children().to_vec();
                    rest.push(lf(y));
                    let new_parent = Bunch::comma(rest).with_expr(parent.expr.clone());
                    let p2 = bi(root.replace(parent_addr, new_parent)?, s.succ.clone());
                    done(vec![p1, p2], emitted, vars)
                }
                ImpL => {
                    let (x, y) = shape(BinOp::Imp)?;
                    let parent_addr = &a[..a.len() - 1];
                    let parent = node(&parent_addr.to_vec())?;
                    let p1 = if parent.is_semi() {
                        let me = *a.last().unwrap();
                        let peff = root.effective_expr(parent_addr)?;
                        let siblings: Vec<Bunch> = parent
                            .children()
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != me)
                            .map(|(_, b)| b.clone())
                            .collect();
                        bi(Bunch::semi(siblings).with_expr(peff).canonical_root(), x)
                    } else {
                        bi(Bunch::emp_a().canonical_root(), x)
                    };
                    done(vec![p1, put(lf(y))?], emitted, vec![])
                }
                _ => unreachable!(),
            }
        }
        (WandR | ImpR | AndR | OrR | StarR, _) => {
            let (op, x, y) = match &s.succ {
                Formula::Binary(op, x, y) => (*op, (**x).clone(), (**y).clone()),
                _ => return Err(mismatch(inst, "succedent is not compound")),
            };
            let expected = match inst.rule {
                WandR => BinOp::Wand,
                ImpR => BinOp::Imp,
                AndR => BinOp::And,
                OrR => BinOp::Or,
                _ => BinOp::Star,
            };
            if op != expected {
                return Err(mismatch(inst, format!("succedent is {}", s.succ)));
            }
            match (inst.rule, &inst.principal) {
                (WandR, Principal::None) => {
                    let mut items = slots.to_vec();
                    items.push(Bunch::leaf(x));
                    done(vec![bi(Bunch::comma(items).canonical_root(), y)], vec![], vec![])
                }
                (ImpR, Principal::None) => {
                    let inner = Bunch::semi(vec![root.clone(), Bunch::leaf(x)]);
                    done(vec![bi(inner.canonical_root(), y)], vec![], vec![])
                }
                (AndR, Principal::None) => done(vec![bi(root.clone(), x), bi(root.clone(), y)], vec![], vec![]),
                (OrR, Principal::Choice(k)) if *k < 2 => {
                    let g = if *k == 0 { x } else { y };
                    done(vec![bi(root.clone(), g)], vec![], vec![])
                }
                (StarR, Principal::None) => {
                    let (tagged, vars) = tag_bunch(root, fresh);
                    let comp = tag_bunch_complement(root, &vars)?;
                    done(
                        vec![bi(tagged.canonical_root(), x), bi(comp.canonical_root(), y)],
                        vec![],
                        vars,
                    )
                }
                _ => Err(mismatch(inst, "bad principal for a right rule")),
            }
        }
        _ => {
            let _ = addr;
            Err(mismatch(inst, "rule does not belong to the BI calculus in this form"))
        }
    }
}

/// Number of variables a split rule would tag on `seq`.
pub fn split_arity(seq: &Sequent, inst: &RuleInstance) -> usize {
    match (seq, &inst.principal) {
        (Sequent::Ll(s), Principal::Succ(_)) => ll_slot_count(&s.ante) + ll_slot_count(&s.succ) - 1,
        (Sequent::Ll(s), Principal::Ante(_)) => ll_slot_count(&s.ante) - 1 + ll_slot_count(&s.succ),
        (Sequent::Bi(s), _) => crate::bunch::slot_count(&s.ante),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolexpr::VarAllocator;
    use crate::formula::Logic;
    use crate::parse::parse_resource_sequent;

    fn seq(s: &str, l: Logic) -> Sequent {
        parse_resource_sequent(s, l).unwrap()
    }

    fn strs(cs: &[Constraint]) -> Vec<String> {
        cs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn axiom_emits_one_constraint_per_item() {
        let s = seq("p[x1.x5], p[x2.x6], q[x3.x7], q[x4.x8] |- p", Logic::Mll);
        let inst = RuleInstance::new(RuleId::Axiom, Principal::Pair { ante: 0, succ: 0 });
        let app = apply(&s, &inst, &mut VarAllocator::new()).unwrap();
        assert!(app.premises.is_empty());
        assert_eq!(
            strs(&app.emitted),
            vec!["x1.x5 = 1", "1 = 1", "x2.x6 = 0", "x3.x7 = 0", "x4.x8 = 0"]
        );
    }

    #[test]
    fn tensor_right_tags_and_complements() {
        let s = seq("p, p, q, q |- p * q", Logic::Mll);
        let mut alloc = VarAllocator::new();
        let app = apply(&s, &RuleInstance::new(RuleId::TensorR, Principal::Succ(0)), &mut alloc).unwrap();
        assert_eq!(app.fresh.len(), 4);
        assert_eq!(app.premises[0].to_string(), "p[x1], p[x2], q[x3], q[x4] |- p");
        assert_eq!(app.premises[1].to_string(), "p[~x1], p[~x2], q[~x3], q[~x4] |- q");
        assert_eq!(strs(&app.emitted), vec!["1 = 1"]);
    }

    #[test]
    fn applicable_lists_both_sides() {
        let s = seq("(p * q)[x1] |- (p * q)[x2]", Logic::Mll);
        let rules: Vec<RuleId> = applicable(&s, CalculusOptions::default()).iter().map(|i| i.rule).collect();
        assert_eq!(rules, vec![RuleId::TensorL, RuleId::TensorR]);
    }

    #[test]
    fn plus_right_introduces_a_choice_variable() {
        let s = seq("p, q, q |- (p * q) + (p * q * q)", Logic::Pll);
        let mut alloc = VarAllocator::new();
        let app = apply(&s, &RuleInstance::new(RuleId::PlusR, Principal::Succ(0)), &mut alloc).unwrap();
        assert_eq!(app.premises[0].to_string(), "p, q, q |- (p * q)[x1], (p * q * q)[~x1]");
    }

    #[test]
    fn promotion_zeroes_non_modal_context() {
        let s = seq("!p[x1], r[x2] |- !q", Logic::Pll);
        let app = apply(&s, &RuleInstance::new(RuleId::BangR, Principal::Succ(0)), &mut VarAllocator::new()).unwrap();
        assert_eq!(strs(&app.emitted), vec!["1 = 1", "x2 = 0"]);
        if let Sequent::Ll(l) = &s {
            assert!(!modal_guard(l, &Principal::Succ(0), |_| None));
            assert!(modal_guard(l, &Principal::Succ(0), |e| (e.to_string() == "x2").then_some(false)));
        }
        let t = seq("p |- !q", Logic::Pll);
        if let Sequent::Ll(l) = &t {
            assert!(!modal_guard(l, &Principal::Succ(0), |_| None));
        }
        let u = seq("!p |- !q", Logic::Pll);
        if let Sequent::Ll(l) = &u {
            assert!(modal_guard(l, &Principal::Succ(0), |_| None));
        }
    }

    #[test]
    fn wand_left_uses_the_multiplicative_siblings() {
        let s = seq("p, (q; (r, s, t -* u)) |- v", Logic::Bi);
        let wand = match &s {
            Sequent::Bi(b) => b.ante.leaves().into_iter().find(|(_, f)| !f.is_atom()).unwrap().0,
            _ => unreachable!(),
        };
        let mut alloc = VarAllocator::new();
        let app = apply(&s, &RuleInstance::new(RuleId::WandL, Principal::At(wand)), &mut alloc).unwrap();
        assert_eq!(app.premises[0].to_string(), "r[x1], s[x2] |- t");
        assert_eq!(app.premises[1].to_string(), "p, (q; (r[~x1], s[~x2], u)) |- v");
    }

    #[test]
    fn star_right_tags_slots() {
        let s = seq("r, (s; t) |- r * s", Logic::Bi);
        let mut alloc = VarAllocator::new();
        let app = apply(&s, &RuleInstance::new(RuleId::StarR, Principal::None), &mut alloc).unwrap();
        assert_eq!(app.premises[0].to_string(), "r[x1], (s; t)[x2] |- r");
        assert_eq!(app.premises[1].to_string(), "r[~x1], (s; t)[~x2] |- s");
    }

    #[test]
    fn weakening_keeps_one_child() {
        let s = seq("r[~x1], (s; t)[~x2] |- s", Logic::Bi);
        let inst = applicable(&s, CalculusOptions::default())
            .into_iter()
            .find(|i| i.rule == RuleId::W && matches!(i.principal, Principal::Keep { keep: 0, .. }))
            .unwrap();
        let app = apply(&s, &inst, &mut VarAllocator::new()).unwrap();
        assert_eq!(app.premises[0].to_string(), "r[~x1], s[~x2] |- s");
        assert_eq!(strs(&app.emitted), vec!["~x2 = 1"]);
    }

    #[test]
    fn principal_text_round_trip() {
        for p in [
            Principal::None,
            Principal::Ante(3),
            Principal::Succ(0),
            Principal::Pair { ante: 1, succ: 2 },
            Principal::At(vec![]),
            Principal::At(vec![0, 2]),
            Principal::Keep { at: vec![1], keep: 0 },
            Principal::ToUnit,
            Principal::Choice(1),
        ] {
            assert_eq!(p.to_string().parse::<Principal>().unwrap(), p);
        }
        for r in RuleId::ALL {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), *r);
        }
    }
}
