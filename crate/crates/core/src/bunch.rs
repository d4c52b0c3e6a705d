//! BI bunches with a Boolean expression on every node.
//!
//! Resource bunches are kept canonical: no comma directly under a comma,
//! no semicolon directly under a semicolon, units absorbed by their own
//! constructor and children sorted. The same type doubles as the plain,
//! order-preserving bunch used in extracted proofs, where every expression
//! is 1 and nothing is normalized unless asked.

use std::fmt;

use crate::boolexpr::{Assignment, BoolExpr, Fresh, Literal, Var};
use crate::error::{Error, Result};
use crate::formula::Formula;

pub type BunchAddress = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BunchNode {
    Leaf(Formula),
    EmpM,
    EmpA,
    Comma(Vec<Bunch>),
    Semi(Vec<Bunch>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bunch {
    pub node: BunchNode,
    pub expr: BoolExpr,
}

impl Bunch {
    pub fn new(node: BunchNode) -> Bunch {
        Bunch {
            node,
            expr: BoolExpr::one(),
        }
    }

    pub fn leaf(f: Formula) -> Bunch {
        Bunch::new(BunchNode::Leaf(f))
    }

    pub fn emp_m() -> Bunch {
        Bunch::new(BunchNode::EmpM)
    }

    pub fn emp_a() -> Bunch {
        Bunch::new(BunchNode::EmpA)
    }

    pub fn comma(children: Vec<Bunch>) -> Bunch {
        Bunch::new(BunchNode::Comma(children))
    }

    pub fn semi(children: Vec<Bunch>) -> Bunch {
        Bunch::new(BunchNode::Semi(children))
    }

    pub fn with_expr(mut self, e: BoolExpr) -> Bunch {
        self.expr = e;
        self
    }

    /// Multiplies this node's own expression by `e`.
    pub fn times(mut self, e: &BoolExpr) -> Bunch {
        self.expr = self.expr.mul(e);
        self
    }

    pub fn children(&self) -> &[Bunch] {
        match &self.node {
            BunchNode::Comma(c) | BunchNode::Semi(c) => c,
            _ => &[],
        }
    }

    pub fn is_comma(&self) -> bool {
        matches!(self.node, BunchNode::Comma(_))
    }

    pub fn is_semi(&self) -> bool {
        matches!(self.node, BunchNode::Semi(_))
    }

    pub fn formula(&self) -> Option<&Formula> {
        match &self.node {
            BunchNode::Leaf(f) => Some(f),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Bunch::size).sum::<usize>()
    }

    /// Connectives plus atoms over all leaves.
    pub fn formula_size(&self) -> usize {
        match &self.node {
            BunchNode::Leaf(f) => f.size(),
            _ => self.children().iter().map(Bunch::formula_size).sum(),
        }
    }

    pub fn leaves(&self) -> Vec<(BunchAddress, &Formula)> {
        let mut out = Vec::new();
        self.walk(&mut Vec::new(), &mut |addr, b| {
            if let BunchNode::Leaf(f) = &b.node {
                out.push((addr.to_vec(), f));
            }
        });
        out
    }

    /// Pre-order traversal with addresses.
    pub fn walk<'a>(&'a self, addr: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &'a Bunch)) {
        f(addr, self);
        for (i, c) in self.children().iter().enumerate() {
            addr.push(i);
            c.walk(addr, f);
            addr.pop();
        }
    }

    pub fn addresses(&self) -> Vec<BunchAddress> {
        let mut out = Vec::new();
        self.walk(&mut Vec::new(), &mut |a, _| out.push(a.to_vec()));
        out
    }

    pub fn get(&self, addr: &[usize]) -> Option<&Bunch> {
        match addr.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i)?.get(rest),
        }
    }

    fn get_mut(&mut self, addr: &[usize]) -> Option<&mut Bunch> {
        match addr.split_first() {
            None => Some(self),
            Some((i, rest)) => match &mut self.node {
                BunchNode::Comma(c) | BunchNode::Semi(c) => c.get_mut(*i)?.get_mut(rest),
                _ => None,
            },
        }
    }

    /// Product of the expressions from the root down to `addr`.
    pub fn effective_expr(&self, addr: &[usize]) -> Result<BoolExpr> {
        let mut e = self.expr.clone();
        let mut cur = self;
        for i in addr {
            cur = cur
                .children()
                .get(*i)
                .ok_or_else(|| Error::BadAddress(addr.to_vec()))?;
            e = e.mul(&cur.expr);
        }
        Ok(e)
    }

    /// Syntactic substitution at `addr`; no normalization.
    pub fn replace_raw(&self, addr: &[usize], with: Bunch) -> Result<Bunch> {
        let mut out = self.clone();
        *out.get_mut(addr).ok_or_else(|| Error::BadAddress(addr.to_vec()))? = with;
        Ok(out)
    }

    /// Substitution followed by canonicalization. The root stays a comma
    /// when it was one.
    pub fn replace(&self, addr: &[usize], with: Bunch) -> Result<Bunch> {
        let out = self.replace_raw(addr, with)?;
        Ok(if self.is_comma() && self.expr.is_one() {
            out.canonical_root()
        } else {
            out.canonical()
        })
    }

    /// Walks up while the parent is a comma.
    pub fn max_mult_superbunch(&self, at: &[usize]) -> Result<BunchAddress> {
        self.get(at).ok_or_else(|| Error::BadAddress(at.to_vec()))?;
        let mut addr = at.to_vec();
        while let Some((_, parent)) = addr.split_last() {
            if self.get(parent).is_some_and(Bunch::is_comma) {
                addr.pop();
            } else {
                break;
            }
        }
        Ok(addr)
    }

    /// Canonical form under the commutative monoid laws for `,` and `;`.
    pub fn canonical(&self) -> Bunch {
        canon(self.clone(), false)
    }

    /// Canonical form that keeps a comma at the root, so the top-level
    /// slots of a resource antecedent are always its children.
    pub fn canonical_root(&self) -> Bunch {
        let top = if self.is_comma() && self.expr.is_one() {
            self.clone()
        } else {
            Bunch::comma(vec![self.clone()])
        };
        canon(top, true)
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Deletes every node whose own expression is 0 under `a` and returns
    /// the canonical plain bunch, or `None` when the whole bunch goes.
    pub fn restrict(&self, a: &Assignment) -> Result<Option<Bunch>> {
        Ok(self.restrict_raw(a)?.map(|b| b.canonical()))
    }

    /// Like [`Bunch::restrict`] but keeps the surviving structure as is,
    /// apart from replacing emptied composites by their unit.
    pub fn restrict_raw(&self, a: &Assignment) -> Result<Option<Bunch>> {
        if !self.expr.evaluate(a)? {
            return Ok(None);
        }
        Ok(Some(match &self.node {
            BunchNode::Comma(ch) => {
                let kept = ch
                    .iter()
                    .map(|c| c.restrict_raw(a))
                    .collect::<Result<Vec<_>>>()?;
                comma_join(kept.into_iter().flatten().collect())
            }
            BunchNode::Semi(ch) => {
                let kept = ch
                    .iter()
                    .map(|c| c.restrict_raw(a))
                    .collect::<Result<Vec<_>>>()?;
                semi_join(kept.into_iter().flatten().collect())
            }
            other => Bunch::new(other.clone()),
        }))
    }

    /// Clears every expression to 1.
    pub fn erase(&self) -> Bunch {
        let node = match &self.node {
            BunchNode::Comma(c) => BunchNode::Comma(c.iter().map(Bunch::erase).collect()),
            BunchNode::Semi(c) => BunchNode::Semi(c.iter().map(Bunch::erase).collect()),
            other => other.clone(),
        };
        Bunch::new(node)
    }

    /// Pushes every expression down to the leaves and units.
    pub fn push_exprs(&self) -> Bunch {
        fn go(b: &Bunch, acc: &BoolExpr) -> Bunch {
            let e = acc.mul(&b.expr);
            match &b.node {
                BunchNode::Comma(c) => Bunch::comma(c.iter().map(|x| go(x, &e)).collect()),
                BunchNode::Semi(c) => Bunch::semi(c.iter().map(|x| go(x, &e)).collect()),
                other => Bunch::new(other.clone()).with_expr(e),
            }
        }
        go(self, &BoolExpr::one())
    }

    /// All variables mentioned in expressions.
    pub fn vars(&self, out: &mut Vec<Var>) {
        out.extend(self.expr.vars());
        for c in self.children() {
            c.vars(out);
        }
    }

    pub fn exprs(&self, out: &mut Vec<BoolExpr>) {
        out.push(self.expr.clone());
        for c in self.children() {
            c.exprs(out);
        }
    }

    fn write(&self, out: &mut String, nested: bool, unicode: bool) {
        let annotated = !self.expr.is_one();
        match &self.node {
            BunchNode::Leaf(f) => {
                let text = if unicode { f.pretty() } else { f.format() };
                if annotated && matches!(f, Formula::Binary(..)) {
                    out.push('(');
                    out.push_str(&text);
                    out.push(')');
                } else {
                    out.push_str(&text);
                }
            }
            BunchNode::EmpM => out.push_str(if unicode { "∅m" } else { "emp_m" }),
            BunchNode::EmpA => out.push_str(if unicode { "∅a" } else { "emp_a" }),
            BunchNode::Comma(c) | BunchNode::Semi(c) => {
                let sep = if self.is_comma() { ", " } else { "; " };
                let parens = nested || annotated;
                if parens {
                    out.push('(');
                }
                for (i, ch) in c.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    ch.write(out, true, unicode);
                }
                if parens {
                    out.push(')');
                }
            }
        }
        if annotated {
            out.push('[');
            out.push_str(&self.expr.to_string());
            out.push(']');
        }
    }

    /// Parseable text form.
    pub fn format(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, false, false);
        s
    }

    pub fn pretty(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, false, true);
        s
    }
}

impl fmt::Display for Bunch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// The comma of `items`: the unit for none, the item itself for one.
pub fn comma_join(mut items: Vec<Bunch>) -> Bunch {
    match items.len() {
        0 => Bunch::emp_m(),
        1 => items.pop().unwrap(),
        _ => Bunch::comma(items),
    }
}

/// The semicolon of `items`: the unit for none, the item itself for one.
pub fn semi_join(mut items: Vec<Bunch>) -> Bunch {
    match items.len() {
        0 => Bunch::emp_a(),
        1 => items.pop().unwrap(),
        _ => Bunch::semi(items),
    }
}

fn canon(b: Bunch, keep_comma: bool) -> Bunch {
    let Bunch { node, expr } = b;
    let (children, comma) = match node {
        BunchNode::Comma(c) => (c, true),
        BunchNode::Semi(c) => (c, false),
        leafish => return Bunch { node: leafish, expr },
    };
    let mut out: Vec<Bunch> = Vec::with_capacity(children.len());
    for c in children {
        let c = canon(c, false);
        match c.node {
            BunchNode::Comma(gc) if comma => {
                out.extend(gc.into_iter().map(|g| g.times(&c.expr)));
            }
            BunchNode::Semi(gc) if !comma => {
                out.extend(gc.into_iter().map(|g| g.times(&c.expr)));
            }
            BunchNode::EmpM if comma => {}
            BunchNode::EmpA if !comma => {}
            node => out.push(Bunch { node, expr: c.expr }),
        }
    }
    out.sort();
    if keep_comma {
        return Bunch {
            node: BunchNode::Comma(out),
            expr,
        };
    }
    match out.len() {
        0 => Bunch {
            node: if comma { BunchNode::EmpM } else { BunchNode::EmpA },
            expr,
        },
        // collapsing is only sound when the child carries no tag of its
        // own; otherwise deleting it would not match deleting the parent
        1 if out[0].expr.is_one() => {
            let only = out.pop().unwrap();
            Bunch {
                node: only.node,
                expr,
            }
        }
        _ => Bunch {
            node: if comma {
                BunchNode::Comma(out)
            } else {
                BunchNode::Semi(out)
            },
            expr,
        },
    }
}

/// Coherent equivalence: equality of canonical forms.
pub fn coherent_equal(a: &Bunch, b: &Bunch) -> bool {
    a.canonical() == b.canonical()
}

/// Γ.V: one fresh variable per multiplicative slot. A comma distributes
/// over its children; anything else is a single slot. Slots whose own
/// expression is already the constant 0 get no variable.
pub fn tag_bunch(b: &Bunch, fresh: &mut impl Fresh) -> (Bunch, Vec<Var>) {
    let mut vars = Vec::new();
    let out = tag_with(b, &mut |_| {
        let v = fresh.fresh();
        vars.push(v);
        Some(Literal::pos(v))
    });
    (out, vars)
}

/// The same tagging as [`tag_bunch`] with every variable negated.
pub fn tag_bunch_complement(b: &Bunch, vars: &[Var]) -> Result<Bunch> {
    let slots = slot_count(b);
    if slots != vars.len() {
        return Err(Error::TagArity {
            expected: slots,
            found: vars.len(),
        });
    }
    let mut it = vars.iter();
    Ok(tag_with(b, &mut |_| it.next().map(|v| Literal::neg(*v))))
}

/// Tags with the given literal polarity using an existing variable list.
pub fn tag_bunch_using(b: &Bunch, vars: &[Var], positive: bool) -> Result<Bunch> {
    let slots = slot_count(b);
    if slots != vars.len() {
        return Err(Error::TagArity {
            expected: slots,
            found: vars.len(),
        });
    }
    let mut it = vars.iter();
    Ok(tag_with(b, &mut |_| it.next().map(|v| Literal { var: *v, positive })))
}

pub fn slot_count(b: &Bunch) -> usize {
    match &b.node {
        BunchNode::Comma(c) if !b.expr.is_zero() => c.iter().map(slot_count).sum(),
        _ if b.expr.is_zero() => 0,
        _ => 1,
    }
}

fn tag_with(b: &Bunch, lit: &mut impl FnMut(&Bunch) -> Option<Literal>) -> Bunch {
    if b.expr.is_zero() {
        return b.clone();
    }
    match &b.node {
        BunchNode::Comma(c) => Bunch {
            node: BunchNode::Comma(c.iter().map(|x| tag_with(x, lit)).collect()),
            expr: b.expr.clone(),
        },
        _ => {
            let l = lit(b).expect("slot count checked");
            let mut out = b.clone();
            out.expr = out.expr.product(l);
            out
        }
    }
}
