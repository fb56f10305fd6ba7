//! Boolean switching functions over positional gate inputs.
//!
//! Inputs are named `A`, `B`, `C`, ... by position. The text syntax uses
//! `!x` or `x'` for NOT, `&` for AND, `|` for OR and `^` for XOR, with
//! precedence NOT > AND > OR > XOR, plus the constants `0` and `1`.

use std::fmt;

use thiserror::Error;

use super::MAX_ARITY;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected character {found:?} at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unknown input variable {0:?}")]
    UnknownVariable(char),
}

pub fn var(index: usize) -> Expr {
    Expr::Var(index)
}

pub fn not(e: Expr) -> Expr {
    Expr::Not(Box::new(e))
}

pub fn and(a: Expr, b: Expr) -> Expr {
    Expr::And(Box::new(a), Box::new(b))
}

pub fn or(a: Expr, b: Expr) -> Expr {
    Expr::Or(Box::new(a), Box::new(b))
}

pub fn xor(a: Expr, b: Expr) -> Expr {
    Expr::Xor(Box::new(a), Box::new(b))
}

/// Display name of the input at `index` (`0 -> A`).
pub fn var_name(index: usize) -> char {
    (b'A' + index as u8) as char
}

impl Expr {
    /// Evaluates against a packed input word, input 0 being the most
    /// significant of `arity` bits.
    pub fn eval(&self, word: u32, arity: usize) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => (word >> (arity - 1 - i)) & 1 == 1,
            Expr::Not(e) => !e.eval(word, arity),
            Expr::And(a, b) => a.eval(word, arity) && b.eval(word, arity),
            Expr::Or(a, b) => a.eval(word, arity) || b.eval(word, arity),
            Expr::Xor(a, b) => a.eval(word, arity) ^ b.eval(word, arity),
        }
    }

    /// Highest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Not(e) => e.max_var(),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        let mut p = Parser {
            chars: text.char_indices().collect(),
            pos: 0,
        };
        let e = p.xor_expr()?;
        p.skip_ws();
        match p.peek() {
            None => Ok(e),
            Some((offset, found)) => Err(ExprError::Unexpected { found, offset }),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Xor(..) => 0,
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(_) | Expr::Var(_) | Expr::Const(_) => 3,
        }
    }

    fn fmt_child(&self, child: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() < self.precedence() {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(b) => write!(f, "{}", *b as u8),
            Expr::Var(i) => write!(f, "{}", var_name(*i)),
            Expr::Not(e) => {
                f.write_str("!")?;
                self.fmt_child(e, f)
            }
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => {
                let op = match self {
                    Expr::And(..) => " & ",
                    Expr::Or(..) => " | ",
                    _ => " ^ ",
                };
                self.fmt_child(a, f)?;
                f.write_str(op)?;
                // Right operands at equal precedence get parens so the
                // left-associative parse reproduces the same tree.
                if b.precedence() <= self.precedence() {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, want: char) -> bool {
        if matches!(self.peek(), Some((_, c)) if c == want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn xor_expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.or_expr()?;
        while self.eat('^') {
            lhs = xor(lhs, self.or_expr()?);
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.and_expr()?;
        while self.eat('|') {
            lhs = or(lhs, self.and_expr()?);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.eat('&') {
            lhs = and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        let mut e = if self.eat('!') {
            not(self.unary()?)
        } else {
            self.atom()?
        };
        while self.eat('\'') {
            e = not(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (offset, c) = self.peek().ok_or(ExprError::UnexpectedEnd)?;
        self.pos += 1;
        match c {
            '(' => {
                let e = self.xor_expr()?;
                if self.eat(')') {
                    Ok(e)
                } else {
                    match self.peek() {
                        Some((offset, found)) => Err(ExprError::Unexpected { found, offset }),
                        None => Err(ExprError::UnexpectedEnd),
                    }
                }
            }
            '0' => Ok(Expr::Const(false)),
            '1' => Ok(Expr::Const(true)),
            c if c.is_ascii_uppercase() => {
                let index = (c as u8 - b'A') as usize;
                if index >= MAX_ARITY {
                    Err(ExprError::UnknownVariable(c))
                } else {
                    Ok(Expr::Var(index))
                }
            }
            found => Err(ExprError::Unexpected { found, offset }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Expr {
        var(0)
    }
    fn b() -> Expr {
        var(1)
    }
    fn c() -> Expr {
        var(2)
    }

    #[test]
    fn precedence_and_postfix_not() {
        assert_eq!(Expr::parse("A ^ B & C").unwrap(), xor(a(), and(b(), c())));
        assert_eq!(Expr::parse("A | B ^ C").unwrap(), xor(or(a(), b()), c()));
        assert_eq!(Expr::parse("A'&B").unwrap(), and(not(a()), b()));
        assert_eq!(Expr::parse("!(A|B)").unwrap(), not(or(a(), b())));
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(
            Expr::parse("A + B"),
            Err(ExprError::Unexpected {
                found: '+',
                offset: 2
            })
        );
        assert_eq!(Expr::parse("(A"), Err(ExprError::UnexpectedEnd));
        assert_eq!(Expr::parse("A &"), Err(ExprError::UnexpectedEnd));
        assert_eq!(Expr::parse("Z"), Err(ExprError::UnknownVariable('Z')));
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for text in [
            "A ^ B ^ C",
            "A ^ (B ^ C)",
            "(A ^ B) & C ^ A & B ^ D",
            "!A & !C ^ !B",
            "D ^ C & (A | B)",
            "!(A & B)",
            "1 ^ A",
        ] {
            let e = Expr::parse(text).unwrap();
            assert_eq!(Expr::parse(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }

    #[test]
    fn eval_uses_msb_first_positions() {
        // word 0b100 for arity 3 sets A only
        assert!(a().eval(0b100, 3));
        assert!(!b().eval(0b100, 3));
        assert!(c().eval(0b001, 3));
    }
}
