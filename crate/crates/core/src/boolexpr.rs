//! Boolean product expressions and the equations built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A Boolean variable. Printed as `x<id>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Var) -> Literal {
        Literal { var, positive: true }
    }

    pub fn neg(var: Var) -> Literal {
        Literal { var, positive: false }
    }

    pub fn negate(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Dense index used by watch lists.
    pub fn code(self) -> usize {
        self.var.0 as usize * 2 + self.positive as usize
    }

    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "~{}", self.var)
        }
    }
}

/// A product of literals, or the constant 0.
///
/// `Prod(vec![])` is the constant 1. Products are kept sorted by variable
/// with no repeats; a product containing `x` and `~x` is `Zero`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolExpr {
    Zero,
    Prod(Vec<Literal>),
}

impl Default for BoolExpr {
    fn default() -> Self {
        BoolExpr::one()
    }
}

impl BoolExpr {
    pub fn one() -> BoolExpr {
        BoolExpr::Prod(Vec::new())
    }

    pub fn zero() -> BoolExpr {
        BoolExpr::Zero
    }

    pub fn constant(bit: bool) -> BoolExpr {
        if bit {
            BoolExpr::one()
        } else {
            BoolExpr::Zero
        }
    }

    pub fn lit(l: Literal) -> BoolExpr {
        BoolExpr::Prod(vec![l])
    }

    pub fn var(v: Var) -> BoolExpr {
        BoolExpr::lit(Literal::pos(v))
    }

    /// Builds a normalized product from arbitrary literals.
    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> BoolExpr {
        lits.into_iter().fold(BoolExpr::one(), |e, l| e.product(l))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, BoolExpr::Prod(v) if v.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BoolExpr::Zero)
    }

    pub fn literals(&self) -> &[Literal] {
        match self {
            BoolExpr::Zero => &[],
            BoolExpr::Prod(v) => v,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals().iter().map(|l| l.var)
    }

    /// Multiplies by one literal, keeping the normal form.
    pub fn product(&self, lit: Literal) -> BoolExpr {
        match self {
            BoolExpr::Zero => BoolExpr::Zero,
            BoolExpr::Prod(v) => match v.binary_search_by_key(&lit.var, |l| l.var) {
                Ok(i) if v[i].positive == lit.positive => self.clone(),
                Ok(_) => BoolExpr::Zero,
                Err(i) => {
                    let mut v = v.clone();
                    v.insert(i, lit);
                    BoolExpr::Prod(v)
                }
            },
        }
    }

    pub fn mul(&self, other: &BoolExpr) -> BoolExpr {
        match other {
            BoolExpr::Zero => BoolExpr::Zero,
            BoolExpr::Prod(v) => v.iter().fold(self.clone(), |e, l| e.product(*l)),
        }
    }

    /// Value under a partial valuation, if already determined.
    pub fn eval_partial(&self, value: impl Fn(Var) -> Option<bool>) -> Option<bool> {
        match self {
            BoolExpr::Zero => Some(false),
            BoolExpr::Prod(v) => {
                let mut unknown = false;
                for l in v {
                    match value(l.var) {
                        Some(b) if !l.eval(b) => return Some(false),
                        Some(_) => {}
                        None => unknown = true,
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
        }
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        match self {
            BoolExpr::Zero => Ok(false),
            BoolExpr::Prod(v) => {
                let mut out = true;
                for l in v {
                    let b = a.get(l.var).ok_or(Error::Unassigned(l.var))?;
                    out &= l.eval(b);
                }
                Ok(out)
            }
        }
    }
}

impl From<Literal> for BoolExpr {
    fn from(l: Literal) -> Self {
        BoolExpr::lit(l)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Zero => f.write_str("0"),
            BoolExpr::Prod(v) if v.is_empty() => f.write_str("1"),
            BoolExpr::Prod(v) => {
                for (i, l) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for BoolExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |msg: &str| Error::Syntax {
            pos: 0,
            msg: format!("{msg} in expression '{t}'"),
        };
        match t {
            "0" => return Ok(BoolExpr::Zero),
            "1" => return Ok(BoolExpr::one()),
            "" => return Err(bad("empty expression")),
            _ => {}
        }
        let mut e = BoolExpr::one();
        for part in t.split('.') {
            let part = part.trim();
            let (positive, rest) = match part.strip_prefix('~') {
                Some(r) => (false, r),
                None => (true, part),
            };
            let id = rest
                .strip_prefix('x')
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| bad("bad literal"))?;
            e = e.product(Literal { var: Var(id), positive });
        }
        Ok(e)
    }
}

/// The equation `expr = target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub expr: BoolExpr,
    pub target: bool,
}

impl Constraint {
    pub fn new(expr: BoolExpr, target: bool) -> Constraint {
        Constraint { expr, target }
    }

    pub fn one(expr: BoolExpr) -> Constraint {
        Constraint::new(expr, true)
    }

    pub fn zero(expr: BoolExpr) -> Constraint {
        Constraint::new(expr, false)
    }

    pub fn holds(&self, a: &Assignment) -> Result<bool> {
        Ok(self.expr.evaluate(a)? == self.target)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.expr, self.target as u8)
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: format!("missing '=' in constraint '{s}'"),
        })?;
        let target = match rhs.trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("constraint target must be 0 or 1, got '{other}'"),
                })
            }
        };
        Ok(Constraint::new(lhs.parse()?, target))
    }
}

/// One constraint per line, in the `x1.~x2 = 0` format.
pub fn dump_constraints(cs: &[Constraint]) -> String {
    cs.iter().map(|c| format!("{c}\n")).collect()
}

/// Inverse of [`dump_constraints`]; blank lines and `#` comments are skipped.
pub fn parse_constraints(text: &str) -> Result<Vec<Constraint>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

/// A (possibly partial) map from variables to bits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.map.get(&v).copied()
    }

    pub fn set(&mut self, v: Var, b: bool) {
        self.map.insert(v, b);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.map.iter().map(|(v, b)| (*v, *b))
    }

    pub fn is_total_on(&self, vars: impl IntoIterator<Item = Var>) -> bool {
        vars.into_iter().all(|v| self.map.contains_key(&v))
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Var, bool)>>(iter: T) -> Self {
        Assignment {
            map: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={}", b as u8)?;
        }
        Ok(())
    }
}

/// Source of fresh variables.
pub trait Fresh {
    fn fresh(&mut self) -> Var;

    fn fresh_vars(&mut self, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.fresh()).collect()
    }
}

/// Issues strictly increasing variable ids, starting at 1.
#[derive(Clone, Debug)]
pub struct VarAllocator {
    next: u32,
}

impl Default for VarAllocator {
    fn default() -> Self {
        VarAllocator { next: 1 }
    }
}

impl VarAllocator {
    pub fn new() -> VarAllocator {
        VarAllocator::default()
    }

    /// All variables issued so far.
    pub fn issued(&self) -> impl Iterator<Item = Var> {
        (1..self.next).map(Var)
    }

    pub fn peek(&self) -> Var {
        Var(self.next)
    }

    /// Forgets every variable from `next` on, so it will be issued again.
    pub fn rewind(&mut self, next: Var) {
        self.next = next.0.max(1);
    }
}

impl Fresh for VarAllocator {
    fn fresh(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }
}

/// Replays a recorded list of variables, failing over to an allocator
/// when the list runs out.
pub struct Replay<'a> {
    recorded: std::slice::Iter<'a, Var>,
    fallback: &'a mut VarAllocator,
}

impl<'a> Replay<'a> {
    pub fn new(recorded: &'a [Var], fallback: &'a mut VarAllocator) -> Replay<'a> {
        Replay {
            recorded: recorded.iter(),
            fallback,
        }
    }
}

impl Fresh for Replay<'_> {
    fn fresh(&mut self) -> Var {
        match self.recorded.next() {
            Some(v) => *v,
            None => self.fallback.fresh(),
        }
    }
}

/// Negates every variable of `vars`, preserving order.
pub fn complement_set(vars: &[Var]) -> Vec<Literal> {
    vars.iter().map(|v| Literal::neg(*v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: u32) -> Literal {
        Literal::pos(Var(i))
    }

    #[test]
    fn product_normalizes() {
        let e = BoolExpr::lit(x(1).negate()).product(Literal::pos(Var(101)));
        assert_eq!(e.to_string(), "~x1.x101");
        assert_eq!(BoolExpr::one().product(x(3)), BoolExpr::var(Var(3)));
        assert!(BoolExpr::var(Var(2)).product(x(2).negate()).is_zero());
        assert_eq!(BoolExpr::var(Var(2)).product(x(2)), BoolExpr::var(Var(2)));
    }

    #[test]
    fn allocator_is_monotone() {
        let mut a = VarAllocator::new();
        assert!(a.fresh_vars(0).is_empty());
        let first = a.fresh_vars(2);
        let second = a.fresh_vars(2);
        assert_eq!(first, vec![Var(1), Var(2)]);
        assert_eq!(second, vec![Var(3), Var(4)]);
    }

    #[test]
    fn complement_preserves_order() {
        assert_eq!(complement_set(&[Var(1), Var(2)]), vec![x(1).negate(), x(2).negate()]);
        assert!(complement_set(&[]).is_empty());
    }

    #[test]
    fn evaluation() {
        let e: BoolExpr = "x1.~x2".parse().unwrap();
        let a: Assignment = [(Var(1), true), (Var(2), false)].into_iter().collect();
        assert!(e.evaluate(&a).unwrap());
        let b: Assignment = [(Var(1), true), (Var(2), true)].into_iter().collect();
        assert!(!e.evaluate(&b).unwrap());
        let partial: Assignment = [(Var(1), true)].into_iter().collect();
        assert_eq!(e.evaluate(&partial), Err(Error::Unassigned(Var(2))));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "1", "x3", "~x3", "x1.~x2"] {
            assert_eq!(s.parse::<BoolExpr>().unwrap().to_string(), s);
        }
        let cs = parse_constraints("x1.~x2 = 0\n# note\n\nx3 = 1\n").unwrap();
        assert_eq!(dump_constraints(&cs), "x1.~x2 = 0\nx3 = 1\n");
        assert!("x1 = 2".parse::<Constraint>().is_err());
        assert!("y1 = 0".parse::<Constraint>().is_err());
    }

    fn lit_strategy() -> impl Strategy<Value = Literal> {
        (1u32..=6, any::<bool>()).prop_map(|(v, p)| Literal { var: Var(v), positive: p })
    }

    proptest! {
        // normalization never changes the value of the product as written
        #[test]
        fn normalization_is_sound(lits in prop::collection::vec(lit_strategy(), 0..8)) {
            let e = BoolExpr::from_literals(lits.iter().copied());
            for bits in 0u32..64 {
                let a: Assignment = (1..=6).map(|i| (Var(i), bits >> (i - 1) & 1 == 1)).collect();
                let direct = lits.iter().all(|l| l.eval(a.get(l.var).unwrap()));
                prop_assert_eq!(e.evaluate(&a).unwrap(), direct);
            }
        }

        #[test]
        fn complement_is_involution(vars in prop::collection::vec(1u32..50, 0..6)) {
            let vs: Vec<Var> = vars.into_iter().map(Var).collect();
            let twice: Vec<Literal> = complement_set(&vs).into_iter().map(Literal::negate).collect();
            prop_assert_eq!(twice, vs.iter().map(|v| Literal::pos(*v)).collect::<Vec<_>>());
        }

        #[test]
        fn display_parse_round_trip(lits in prop::collection::vec(lit_strategy(), 0..6)) {
            let e = BoolExpr::from_literals(lits);
            prop_assert_eq!(e.to_string().parse::<BoolExpr>().unwrap(), e);
        }
    }
}
