//! Annotated formulas and the multiset contexts of the linear calculi.

use std::fmt;

use crate::boolexpr::{Assignment, BoolExpr, Fresh, Literal, Var};
use crate::error::{Error, Result};
use crate::formula::Formula;

/// φ[e].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnFormula {
    pub formula: Formula,
    pub expr: BoolExpr,
}

impl AnnFormula {
    pub fn new(formula: Formula, expr: BoolExpr) -> AnnFormula {
        AnnFormula { formula, expr }
    }

    pub fn plain(formula: Formula) -> AnnFormula {
        AnnFormula::new(formula, BoolExpr::one())
    }

    pub fn times(&self, l: Literal) -> AnnFormula {
        AnnFormula::new(self.formula.clone(), self.expr.product(l))
    }

    pub fn with_formula(&self, f: Formula) -> AnnFormula {
        AnnFormula::new(f, self.expr.clone())
    }

    pub fn format(&self, unicode: bool) -> String {
        let text = if unicode {
            self.formula.pretty()
        } else {
            self.formula.format()
        };
        if self.expr.is_one() {
            text
        } else if matches!(self.formula, Formula::Binary(..)) {
            format!("({text})[{}]", self.expr)
        } else {
            format!("{text}[{}]", self.expr)
        }
    }
}

impl fmt::Display for AnnFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(false))
    }
}

/// Γ.V for a multiset context. Items whose expression is already the
/// constant 0 need no variable and are left alone.
pub fn tag_ll(ctx: &[AnnFormula], fresh: &mut impl Fresh) -> (Vec<AnnFormula>, Vec<Var>) {
    let mut vars = Vec::new();
    let out = ctx
        .iter()
        .map(|a| {
            if a.expr.is_zero() {
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

/// Number of items that [`tag_ll`] would give a variable.
pub fn ll_slot_count(ctx: &[AnnFormula]) -> usize {
    ctx.iter().filter(|a| !a.expr.is_zero()).count()
}

/// Re-applies a tagging produced by [`tag_ll`], with the given polarity.
pub fn tag_ll_using(ctx: &[AnnFormula], vars: &[Var], positive: bool) -> Result<Vec<AnnFormula>> {
    let slots = ll_slot_count(ctx);
    if slots != vars.len() {
        return Err(Error::TagArity {
            expected: slots,
            found: vars.len(),
        });
    }
    let mut it = vars.iter();
    Ok(ctx
        .iter()
        .map(|a| {
            if a.expr.is_zero() {
                a.clone()
            } else {
                a.times(Literal {
                    var: *it.next().unwrap(),
                    positive,
                })
            }
        })
        .collect())
}

/// Γ[I]¹: the formulas whose expression evaluates to 1.
pub fn restrict_ll(ctx: &[AnnFormula], a: &Assignment) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for item in ctx {
        if item.expr.evaluate(a)? {
            out.push(item.formula.clone());
        }
    }
    Ok(out)
}

pub fn format_ll(ctx: &[AnnFormula], unicode: bool) -> String {
    ctx.iter()
        .map(|a| a.format(unicode))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolexpr::VarAllocator;
    use proptest::prelude::*;

    fn item(name: &str, e: &str) -> AnnFormula {
        AnnFormula::new(Formula::atom(name), e.parse().unwrap())
    }

    #[test]
    fn tagging_examples() {
        let mut alloc = VarAllocator::new();
        let (t, v) = tag_ll(&[item("p", "1"), item("q", "1")], &mut alloc);
        assert_eq!(format_ll(&t, false), "p[x1], q[x2]");
        assert_eq!(v, vec![Var(1), Var(2)]);
        let (t2, _) = tag_ll(&t[..1], &mut alloc);
        assert_eq!(format_ll(&t2, false), "p[x1.x3]");
        let (e, ev) = tag_ll(&[], &mut alloc);
        assert!(e.is_empty() && ev.is_empty());
        let (z, zv) = tag_ll(&[item("r", "0")], &mut alloc);
        assert_eq!(format_ll(&z, false), "r[0]");
        assert!(zv.is_empty());
    }

    #[test]
    fn restriction_keeps_ones() {
        let ctx = [item("p", "x1"), item("q", "x2")];
        let a: Assignment = [(Var(1), true), (Var(2), false)].into_iter().collect();
        assert_eq!(restrict_ll(&ctx, &a).unwrap(), vec![Formula::atom("p")]);
    }

    proptest! {
        // the two premises of a split see every surviving item exactly once
        #[test]
        fn split_partitions_context(n in 0usize..7, bits in any::<u64>()) {
            let ctx: Vec<AnnFormula> = (0..n).map(|i| item(&format!("a{i}"), "1")).collect();
            let mut alloc = VarAllocator::new();
            let (left, vars) = tag_ll(&ctx, &mut alloc);
            let right = tag_ll_using(&ctx, &vars, false).unwrap();
            let a: Assignment = vars.iter().enumerate().map(|(i, v)| (*v, bits >> i & 1 == 1)).collect();
            let mut both = restrict_ll(&left, &a).unwrap();
            both.extend(restrict_ll(&right, &a).unwrap());
            both.sort();
            let mut all = restrict_ll(&ctx, &a).unwrap();
            all.sort();
            prop_assert_eq!(both, all);
        }
    }
}
