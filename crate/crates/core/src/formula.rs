//! Formula syntax for MLL, PLL and BI.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// The logic a formula or sequent belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Logic {
    #[serde(rename = "mll")]
    Mll,
    #[serde(rename = "pll")]
    Pll,
    #[serde(rename = "bi")]
    Bi,
}

impl Logic {
    pub fn is_linear(self) -> bool {
        matches!(self, Logic::Mll | Logic::Pll)
    }

    pub fn name(self) -> &'static str {
        match self {
            Logic::Mll => "mll",
            Logic::Pll => "pll",
            Logic::Bi => "bi",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Mll => "MLL",
            Logic::Pll => "PLL",
            Logic::Bi => "BI",
        })
    }
}

impl std::str::FromStr for Logic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mll" => Ok(Logic::Mll),
            "pll" => Ok(Logic::Pll),
            "bi" => Ok(Logic::Bi),
            other => Err(format!("unknown logic '{other}'")),
        }
    }
}

/// Binary connectives of all three logics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Tensor,
    Par,
    Lolli,
    With,
    Plus,
    Star,
    Wand,
    And,
    Or,
    Imp,
}

/// Unary connectives (linear only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Bang,
    Quest,
    Neg,
}

/// Nullary connectives. `I`, `True` and `False` are the BI units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    One,
    Bottom,
    Zero,
    Top,
    I,
    True,
    False,
}

impl BinOp {
    pub fn token(self) -> &'static str {
        match self {
            BinOp::Tensor | BinOp::Star => "*",
            BinOp::Par => "#",
            BinOp::Lolli => "-o",
            BinOp::With => "&",
            BinOp::Plus => "+",
            BinOp::Wand => "-*",
            BinOp::And => "/\\",
            BinOp::Or => "\\/",
            BinOp::Imp => "->",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Tensor => "⊗",
            BinOp::Par => "⅋",
            BinOp::Lolli => "⊸",
            BinOp::With => "&",
            BinOp::Plus => "⊕",
            BinOp::Star => "∗",
            BinOp::Wand => "−∗",
            BinOp::And => "∧",
            BinOp::Or => "∨",
            BinOp::Imp => "→",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Tensor | BinOp::With | BinOp::Star | BinOp::And => 3,
            BinOp::Par | BinOp::Plus | BinOp::Or => 2,
            BinOp::Lolli | BinOp::Wand | BinOp::Imp => 1,
        }
    }

    pub fn in_logic(self, logic: Logic) -> bool {
        match logic {
            Logic::Mll => matches!(self, BinOp::Tensor | BinOp::Par | BinOp::Lolli),
            Logic::Pll => matches!(
                self,
                BinOp::Tensor | BinOp::Par | BinOp::Lolli | BinOp::With | BinOp::Plus
            ),
            Logic::Bi => matches!(
                self,
                BinOp::Star | BinOp::Wand | BinOp::And | BinOp::Or | BinOp::Imp
            ),
        }
    }
}

impl UnOp {
    pub fn token(self) -> &'static str {
        match self {
            UnOp::Bang => "!",
            UnOp::Quest => "?",
            UnOp::Neg => "~",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Bang => "!",
            UnOp::Quest => "?",
            UnOp::Neg => "⊥",
        }
    }

    pub fn in_logic(self, logic: Logic) -> bool {
        match logic {
            Logic::Mll => self == UnOp::Neg,
            Logic::Pll => true,
            Logic::Bi => false,
        }
    }
}

impl Constant {
    pub fn token(self) -> &'static str {
        match self {
            Constant::One | Constant::True => "1",
            Constant::Bottom | Constant::False => "bot",
            Constant::Zero => "0",
            Constant::Top => "top",
            Constant::I => "I",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Constant::One => "𝟏",
            Constant::Bottom => "⊥",
            Constant::Zero => "𝟎",
            Constant::Top => "⊤",
            Constant::I => "I",
            Constant::True => "1",
            Constant::False => "⊥",
        }
    }

    pub fn in_logic(self, logic: Logic) -> bool {
        match logic {
            Logic::Mll => matches!(self, Constant::One | Constant::Bottom),
            Logic::Pll => matches!(
                self,
                Constant::One | Constant::Bottom | Constant::Zero | Constant::Top
            ),
            Logic::Bi => matches!(self, Constant::I | Constant::True | Constant::False),
        }
    }
}

/// A formula. Children are shared, so cloning is cheap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Const(Constant),
    Unary(UnOp, Arc<Formula>),
    Binary(BinOp, Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn unary(op: UnOp, a: Formula) -> Formula {
        Formula::Unary(op, Arc::new(a))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        Formula::Binary(op, Arc::new(a), Arc::new(b))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of connectives, counting units as nullary connectives.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Const(_) => 1,
            Formula::Unary(_, a) => 1 + a.connectives(),
            Formula::Binary(_, a, b) => 1 + a.connectives() + b.connectives(),
        }
    }

    /// Connectives plus atom occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Const(_) => 1,
            Formula::Unary(_, a) => 1 + a.size(),
            Formula::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when every connective in the formula belongs to `logic`.
    pub fn in_logic(&self, logic: Logic) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Const(c) => c.in_logic(logic),
            Formula::Unary(op, a) => op.in_logic(logic) && a.in_logic(logic),
            Formula::Binary(op, a, b) => op.in_logic(logic) && a.in_logic(logic) && b.in_logic(logic),
        }
    }

    /// First connective (by symbol) that is outside `logic`, if any.
    pub fn foreign_connective(&self, logic: Logic) -> Option<&'static str> {
        match self {
            Formula::Atom(_) => None,
            Formula::Const(c) => (!c.in_logic(logic)).then(|| c.symbol()),
            Formula::Unary(op, a) => {
                if op.in_logic(logic) {
                    a.foreign_connective(logic)
                } else {
                    Some(op.symbol())
                }
            }
            Formula::Binary(op, a, b) => {
                if op.in_logic(logic) {
                    a.foreign_connective(logic).or_else(|| b.foreign_connective(logic))
                } else {
                    Some(op.symbol())
                }
            }
        }
    }

    pub fn atoms(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Formula::Atom(a) => out.push(a.clone()),
            Formula::Const(_) => {}
            Formula::Unary(_, a) => a.atoms(out),
            Formula::Binary(_, a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Binary(op, _, _) => op.precedence(),
            _ => 4,
        }
    }

    /// Renders the formula as parseable text with minimal parentheses.
    pub fn format(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, false);
        s
    }

    /// Same layout as [`Formula::format`] but with Unicode connectives.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, true);
        s
    }

    fn write(&self, out: &mut String, unicode: bool) {
        match self {
            Formula::Atom(a) => out.push_str(a),
            Formula::Const(c) => out.push_str(if unicode { c.symbol() } else { c.token() }),
            Formula::Unary(op, a) => {
                out.push_str(if unicode { op.symbol() } else { op.token() });
                a.write_child(out, a.precedence() < 4, unicode);
            }
            Formula::Binary(op, a, b) => {
                let p = op.precedence();
                // left-associative: a left child at the same level needs no parens
                a.write_child(out, a.precedence() < p, unicode);
                out.push(' ');
                out.push_str(if unicode { op.symbol() } else { op.token() });
                out.push(' ');
                b.write_child(out, b.precedence() <= p, unicode);
            }
        }
    }

    fn write_child(&self, out: &mut String, parens: bool, unicode: bool) {
        if parens {
            out.push('(');
            self.write(out, unicode);
            out.push(')');
        } else {
            self.write(out, unicode);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn format_minimal_parens() {
        let t = Formula::binary(BinOp::Tensor, a("p"), Formula::binary(BinOp::Tensor, a("q"), a("q")));
        assert_eq!(t.format(), "p * (q * q)");
        let l = Formula::binary(BinOp::Tensor, Formula::binary(BinOp::Tensor, a("p"), a("q")), a("q"));
        assert_eq!(l.format(), "p * q * q");
        let b = Formula::unary(UnOp::Bang, a("p"));
        assert_eq!(b.format(), "!p");
        let nb = Formula::unary(UnOp::Neg, Formula::binary(BinOp::Par, a("p"), a("q")));
        assert_eq!(nb.format(), "~(p # q)");
        let mix = Formula::binary(BinOp::Par, Formula::binary(BinOp::Lolli, a("p"), a("q")), a("r"));
        assert_eq!(mix.format(), "(p -o q) # r");
    }

    #[test]
    fn logic_membership() {
        let plus = Formula::binary(BinOp::Plus, a("p"), a("q"));
        assert!(!plus.in_logic(Logic::Mll));
        assert!(plus.in_logic(Logic::Pll));
        assert_eq!(plus.foreign_connective(Logic::Mll), Some("⊕"));
        let star = Formula::binary(BinOp::Star, a("p"), a("q"));
        assert!(star.in_logic(Logic::Bi));
        assert!(!star.in_logic(Logic::Mll));
    }

    #[test]
    fn sizes() {
        let f = Formula::binary(BinOp::Tensor, a("p"), Formula::Const(Constant::One));
        assert_eq!(f.connectives(), 2);
        assert_eq!(f.size(), 3);
    }
}
