//! Plain and annotated sequents.

use std::fmt;

use crate::boolexpr::{Assignment, BoolExpr, Var};
use crate::bunch::Bunch;
use crate::context::{format_ll, restrict_ll, AnnFormula};
use crate::error::Result;
use crate::formula::{Formula, Logic};

/// Γ ⊢ Δ with annotated multisets on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LlSequent {
    pub ante: Vec<AnnFormula>,
    pub succ: Vec<AnnFormula>,
}

/// Γ ⊢ φ with an annotated bunch whose root is always a comma.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiSequent {
    pub ante: Bunch,
    pub succ: Formula,
}

/// A resource sequent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sequent {
    Ll(LlSequent),
    Bi(BiSequent),
}

/// A sequent without annotations. BI bunches keep their written shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlainSequent {
    Ll { ante: Vec<Formula>, succ: Vec<Formula> },
    Bi { ante: Bunch, succ: Formula },
}

impl Sequent {
    pub fn exprs(&self) -> Vec<BoolExpr> {
        match self {
            Sequent::Ll(s) => s.ante.iter().chain(&s.succ).map(|a| a.expr.clone()).collect(),
            Sequent::Bi(s) => {
                let mut out = Vec::new();
                s.ante.exprs(&mut out);
                out
            }
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.exprs().iter().flat_map(|e| e.vars().collect::<Vec<_>>()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Δ[I]¹ on both sides.
    pub fn restrict(&self, a: &Assignment) -> Result<PlainSequent> {
        Ok(match self {
            Sequent::Ll(s) => PlainSequent::Ll {
                ante: restrict_ll(&s.ante, a)?,
                succ: restrict_ll(&s.succ, a)?,
            },
            Sequent::Bi(s) => PlainSequent::Bi {
                ante: s.ante.restrict(a)?.unwrap_or_else(Bunch::emp_m),
                succ: s.succ.clone(),
            },
        })
    }

    pub fn format(&self, unicode: bool) -> String {
        let turnstile = if unicode { "⊢" } else { "|-" };
        match self {
            Sequent::Ll(s) => join_sides(&format_ll(&s.ante, unicode), turnstile, &format_ll(&s.succ, unicode)),
            Sequent::Bi(s) => {
                let ante = if s.ante.children().is_empty() && s.ante.is_comma() {
                    if unicode { "∅m".to_string() } else { "emp_m".to_string() }
                } else if unicode {
                    s.ante.pretty()
                } else {
                    s.ante.format()
                };
                let succ = if unicode { s.succ.pretty() } else { s.succ.format() };
                join_sides(&ante, turnstile, &succ)
            }
        }
    }
}

fn join_sides(a: &str, t: &str, b: &str) -> String {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => t.to_string(),
        (true, false) => format!("{t} {b}"),
        (false, true) => format!("{a} {t}"),
        (false, false) => format!("{a} {t} {b}"),
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(false))
    }
}

impl PlainSequent {
    /// The resource sequent with every expression 1.
    pub fn to_resource(&self) -> Sequent {
        match self {
            PlainSequent::Ll { ante, succ } => Sequent::Ll(LlSequent {
                ante: ante.iter().cloned().map(AnnFormula::plain).collect(),
                succ: succ.iter().cloned().map(AnnFormula::plain).collect(),
            }),
            PlainSequent::Bi { ante, succ } => Sequent::Bi(BiSequent {
                ante: ante.canonical_root(),
                succ: succ.clone(),
            }),
        }
    }

    pub fn is_bi(&self) -> bool {
        matches!(self, PlainSequent::Bi { .. })
    }

    pub fn formulas(&self) -> Vec<Formula> {
        match self {
            PlainSequent::Ll { ante, succ } => ante.iter().chain(succ).cloned().collect(),
            PlainSequent::Bi { ante, succ } => {
                let mut v: Vec<Formula> = ante.leaves().into_iter().map(|(_, f)| f.clone()).collect();
                v.push(succ.clone());
                v
            }
        }
    }

    /// Connectives over the whole sequent.
    pub fn connectives(&self) -> usize {
        self.formulas().iter().map(Formula::connectives).sum()
    }

    pub fn size(&self) -> usize {
        self.formulas().iter().map(Formula::size).sum()
    }

    /// True when every formula belongs to `logic` and the shape matches.
    pub fn fits(&self, logic: Logic) -> bool {
        self.is_bi() == (logic == Logic::Bi) && self.formulas().iter().all(|f| f.in_logic(logic))
    }

    /// Equality up to multiset order (LL) or coherent equivalence (BI).
    pub fn equivalent(&self, other: &PlainSequent) -> bool {
        match (self, other) {
            (PlainSequent::Ll { ante: a1, succ: s1 }, PlainSequent::Ll { ante: a2, succ: s2 }) => {
                multiset_eq(a1, a2) && multiset_eq(s1, s2)
            }
            (PlainSequent::Bi { ante: a1, succ: s1 }, PlainSequent::Bi { ante: a2, succ: s2 }) => {
                s1 == s2 && crate::bunch::coherent_equal(a1, a2)
            }
            _ => false,
        }
    }

    /// Canonical representative: sorted lists, canonical bunch.
    pub fn normalized(&self) -> PlainSequent {
        match self {
            PlainSequent::Ll { ante, succ } => {
                let mut a = ante.clone();
                let mut s = succ.clone();
                a.sort();
                s.sort();
                PlainSequent::Ll { ante: a, succ: s }
            }
            PlainSequent::Bi { ante, succ } => PlainSequent::Bi {
                ante: ante.canonical(),
                succ: succ.clone(),
            },
        }
    }

    pub fn format(&self, unicode: bool) -> String {
        let turnstile = if unicode { "⊢" } else { "|-" };
        let list = |fs: &[Formula]| {
            fs.iter()
                .map(|f| if unicode { f.pretty() } else { f.format() })
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            PlainSequent::Ll { ante, succ } => join_sides(&list(ante), turnstile, &list(succ)),
            PlainSequent::Bi { ante, succ } => {
                let a = if unicode { ante.pretty() } else { ante.format() };
                let s = if unicode { succ.pretty() } else { succ.format() };
                join_sides(&a, turnstile, &s)
            }
        }
    }
}

impl fmt::Display for PlainSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(false))
    }
}

pub fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort();
    y.sort();
    x == y
}
