//! Text grammar for formulas, contexts, bunches and sequents.
//!
//! Binary connectives are left-associative with precedence
//! `* & /\` above `# + \/` above `-o -* ->`; prefix operators bind tightest.
//! Bunch items are separated by `,` or `;`; mixing the two at one level
//! needs parentheses. Any item may carry an annotation `[x1.~x2]`.

use crate::boolexpr::BoolExpr;
use crate::bunch::{comma_join, semi_join, Bunch};
use crate::context::AnnFormula;
use crate::error::{Error, Result};
use crate::formula::{BinOp, Constant, Formula, Logic, UnOp};
use crate::sequent::{BiSequent, LlSequent, PlainSequent, Sequent};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Atom(String),
    Word(&'static str),
    Op(&'static str),
    LParen,
    RParen,
    Comma,
    Semi,
    Turnstile,
    Annot(String),
    Eof,
}

struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, len: usize, i: &mut usize| {
            out.push(Token { tok, pos });
            *i += len;
        };
        match c {
            _ if c.is_whitespace() => i += 1,
            '(' => push(Tok::LParen, 1, &mut i),
            ')' => push(Tok::RParen, 1, &mut i),
            ',' => push(Tok::Comma, 1, &mut i),
            ';' => push(Tok::Semi, 1, &mut i),
            '*' => push(Tok::Op("*"), 1, &mut i),
            '#' => push(Tok::Op("#"), 1, &mut i),
            '&' => push(Tok::Op("&"), 1, &mut i),
            '+' => push(Tok::Op("+"), 1, &mut i),
            '!' => push(Tok::Op("!"), 1, &mut i),
            '?' => push(Tok::Op("?"), 1, &mut i),
            '~' => push(Tok::Op("~"), 1, &mut i),
            '|' if next == Some('-') => push(Tok::Turnstile, 2, &mut i),
            '-' if next == Some('o') => push(Tok::Op("-o"), 2, &mut i),
            '-' if next == Some('*') => push(Tok::Op("-*"), 2, &mut i),
            '-' if next == Some('>') => push(Tok::Op("->"), 2, &mut i),
            '/' if next == Some('\\') => push(Tok::Op("/\\"), 2, &mut i),
            '\\' if next == Some('/') => push(Tok::Op("\\/"), 2, &mut i),
            '[' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| syntax(pos, "unterminated annotation"))?;
                let body: String = chars[i + 1..i + close].iter().collect();
                push(Tok::Annot(body), close + 1, &mut i);
            }
            '0' | '1' => {
                if next.is_some_and(|n| n.is_alphanumeric() || n == '_') {
                    return Err(syntax(pos, "unexpected character after unit"));
                }
                push(Tok::Word(if c == '0' { "0" } else { "1" }), 1, &mut i);
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                let word: String = chars[i..i + len].iter().collect();
                let tok = match word.as_str() {
                    "bot" => Tok::Word("bot"),
                    "top" => Tok::Word("top"),
                    "I" => Tok::Word("I"),
                    "emp_m" => Tok::Word("emp_m"),
                    "emp_a" => Tok::Word("emp_a"),
                    w if w.starts_with(|c: char| c.is_ascii_lowercase()) => Tok::Atom(word),
                    _ => return Err(syntax(pos, format!("'{word}' is not an atom (atoms start with a lowercase letter)"))),
                };
                push(tok, len, &mut i);
            }
            _ => return Err(syntax(pos, format!("unexpected character '{c}'"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: chars.len() + 1,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    logic: Logic,
}

impl Parser {
    fn new(text: &str, logic: Logic) -> Result<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            logic,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn gate(&self, connective: &str, ok: bool, pos: usize) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::NotInLogic {
                connective: connective.to_string(),
                logic: self.logic,
                pos,
            })
        }
    }

    fn binop(&self, tok: &str) -> Option<BinOp> {
        let bi = self.logic == Logic::Bi;
        Some(match tok {
            "*" if bi => BinOp::Star,
            "*" => BinOp::Tensor,
            "#" => BinOp::Par,
            "-o" => BinOp::Lolli,
            "&" => BinOp::With,
            "+" => BinOp::Plus,
            "-*" => BinOp::Wand,
            "/\\" => BinOp::And,
            "\\/" => BinOp::Or,
            "->" => BinOp::Imp,
            _ => return None,
        })
    }

    fn formula(&mut self, min_prec: u8) -> Result<Formula> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let op = match self.peek() {
                Tok::Op(t) => match self.binop(t) {
                    Some(op) => op,
                    None => break,
                },
                _ => break,
            };
            let p = op.precedence();
            if p < min_prec {
                break;
            }
            self.gate(op.symbol(), op.in_logic(self.logic), pos)?;
            self.bump();
            let rhs = self.formula(p + 1)?;
            lhs = Formula::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.bump() {
            Tok::Op(t) if matches!(t, "!" | "?" | "~") => {
                let op = match t {
                    "!" => UnOp::Bang,
                    "?" => UnOp::Quest,
                    _ => UnOp::Neg,
                };
                self.gate(op.symbol(), op.in_logic(self.logic), pos)?;
                Ok(Formula::unary(op, self.unary()?))
            }
            Tok::LParen => {
                let f = self.formula(0)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Atom(a) => Ok(Formula::atom(&a)),
            Tok::Word(w) if !matches!(w, "emp_m" | "emp_a") => {
                let bi = self.logic == Logic::Bi;
                let c = match w {
                    "1" if bi => Constant::True,
                    "1" => Constant::One,
                    "bot" if bi => Constant::False,
                    "bot" => Constant::Bottom,
                    "0" => Constant::Zero,
                    "top" => Constant::Top,
                    _ => Constant::I,
                };
                self.gate(c.symbol(), c.in_logic(self.logic), pos)?;
                Ok(Formula::Const(c))
            }
            Tok::Eof => Err(syntax(pos, "unexpected end of input, expected a formula")),
            _ => Err(syntax(pos, "expected a formula")),
        }
    }

    fn annotation(&mut self) -> Result<BoolExpr> {
        if let Tok::Annot(body) = self.peek().clone() {
            let pos = self.pos();
            self.bump();
            body.parse::<BoolExpr>().map_err(|e| match e {
                Error::Syntax { msg, .. } => Error::Syntax { pos, msg },
                other => other,
            })
        } else {
            Ok(BoolExpr::one())
        }
    }

    fn ll_list(&mut self, stop: &Tok) -> Result<Vec<AnnFormula>> {
        let mut out = Vec::new();
        if self.peek() == stop {
            return Ok(out);
        }
        loop {
            let f = self.formula(0)?;
            let e = self.annotation()?;
            out.push(AnnFormula::new(f, e));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn at_item_end(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Comma | Tok::Semi | Tok::RParen | Tok::Turnstile | Tok::Eof | Tok::Annot(_)
        )
    }

    fn bunch_item(&mut self) -> Result<Bunch> {
        let start = self.at;
        let item = match self.peek() {
            Tok::Word("emp_m") => {
                self.bump();
                Bunch::emp_m()
            }
            Tok::Word("emp_a") => {
                self.bump();
                Bunch::emp_a()
            }
            Tok::LParen => match self.formula(0) {
                Ok(f) if self.at_item_end() => Bunch::leaf(f),
                _ => {
                    self.at = start;
                    self.bump();
                    let b = self.bunch()?;
                    self.expect(Tok::RParen, "')'")?;
                    b
                }
            },
            _ => Bunch::leaf(self.formula(0)?),
        };
        let e = self.annotation()?;
        Ok(item.with_expr(e))
    }

    fn bunch(&mut self) -> Result<Bunch> {
        let first = self.bunch_item()?;
        let sep = self.peek().clone();
        if sep != Tok::Comma && sep != Tok::Semi {
            return Ok(first);
        }
        let mut items = vec![first];
        while matches!(self.peek(), Tok::Comma | Tok::Semi) {
            if *self.peek() != sep {
                return Err(syntax(self.pos(), "mixing ',' and ';' needs parentheses"));
            }
            self.bump();
            items.push(self.bunch_item()?);
        }
        Ok(if sep == Tok::Comma {
            comma_join(items)
        } else {
            semi_join(items)
        })
    }

    fn end(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(syntax(self.pos(), "unexpected trailing input"))
        }
    }
}

pub fn parse_formula(text: &str, logic: Logic) -> Result<Formula> {
    let mut p = Parser::new(text, logic)?;
    let f = p.formula(0)?;
    p.end()?;
    Ok(f)
}

/// Parses a bunch keeping its written shape (no normalization).
pub fn parse_bunch(text: &str, logic: Logic) -> Result<Bunch> {
    let mut p = Parser::new(text, logic)?;
    if *p.peek() == Tok::Eof {
        return Ok(Bunch::emp_m());
    }
    let b = p.bunch()?;
    p.end()?;
    Ok(b)
}

/// Parses `ante |- succ`, allowing annotations.
pub fn parse_resource_sequent(text: &str, logic: Logic) -> Result<Sequent> {
    let mut p = Parser::new(text, logic)?;
    if logic == Logic::Bi {
        let ante = if *p.peek() == Tok::Turnstile {
            Bunch::emp_m()
        } else {
            p.bunch()?
        };
        p.expect(Tok::Turnstile, "'|-'")?;
        let succ = p.ll_list(&Tok::Eof)?;
        p.end()?;
        if succ.len() != 1 {
            return Err(Error::BiSuccedent(succ.len()));
        }
        Ok(Sequent::Bi(BiSequent {
            ante: ante.canonical_root(),
            succ: succ.into_iter().next().unwrap().formula,
        }))
    } else {
        let ante = p.ll_list(&Tok::Turnstile)?;
        p.expect(Tok::Turnstile, "'|-'")?;
        let succ = p.ll_list(&Tok::Eof)?;
        p.end()?;
        Ok(Sequent::Ll(LlSequent { ante, succ }))
    }
}

/// Parses a plain sequent. BI bunches keep their written shape.
pub fn parse_sequent(text: &str, logic: Logic) -> Result<PlainSequent> {
    let mut p = Parser::new(text, logic)?;
    let no_annot = |p: &Parser, e: &BoolExpr| {
        if e.is_one() {
            Ok(())
        } else {
            Err(syntax(p.pos(), "annotations are not allowed in a plain sequent"))
        }
    };
    if logic == Logic::Bi {
        let ante = if *p.peek() == Tok::Turnstile {
            Bunch::emp_m()
        } else {
            p.bunch()?
        };
        let mut exprs = Vec::new();
        ante.exprs(&mut exprs);
        for e in &exprs {
            no_annot(&p, e)?;
        }
        p.expect(Tok::Turnstile, "'|-'")?;
        let succ = p.ll_list(&Tok::Eof)?;
        p.end()?;
        if succ.len() != 1 {
            return Err(Error::BiSuccedent(succ.len()));
        }
        no_annot(&p, &succ[0].expr)?;
        Ok(PlainSequent::Bi {
            ante,
            succ: succ.into_iter().next().unwrap().formula,
        })
    } else {
        let ante = p.ll_list(&Tok::Turnstile)?;
        p.expect(Tok::Turnstile, "'|-'")?;
        let succ = p.ll_list(&Tok::Eof)?;
        p.end()?;
        for a in ante.iter().chain(&succ) {
            no_annot(&p, &a.expr)?;
        }
        Ok(PlainSequent::Ll {
            ante: ante.into_iter().map(|a| a.formula).collect(),
            succ: succ.into_iter().map(|a| a.formula).collect(),
        })
    }
}
