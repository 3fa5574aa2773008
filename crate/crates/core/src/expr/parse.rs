use super::{Ast, BinOp};
use crate::error::{Error, Result};
use crate::exact::Integer;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(Integer),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    DotDot,
    Invalid(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Invalid(c) => format!("{c:?}"),
            Tok::End => "end of input".into(),
            other => format!("'{}'", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::DotDot => "..",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Vec<Spanned> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (start_line, start_col) = (line, column);
        let push = |tok: Tok, len: usize, out: &mut Vec<Spanned>| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            len
        };
        let len = match ch {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => 1,
            '0'..='9' => {
                let end = (i..chars.len()).find(|&j| !chars[j].is_ascii_digit()).unwrap_or(chars.len());
                let digits: String = chars[i..end].iter().collect();
                push(Tok::Int(digits.parse().expect("ascii digits")), end - i, &mut out)
            }
            c if c.is_ascii_alphabetic() => {
                let end = (i..chars.len())
                    .find(|&j| !(chars[j].is_ascii_alphanumeric() || chars[j] == '_'))
                    .unwrap_or(chars.len());
                push(Tok::Ident(chars[i..end].iter().collect()), end - i, &mut out)
            }
            '.' if chars.get(i + 1) == Some(&'.') => push(Tok::DotDot, 2, &mut out),
            '+' => push(Tok::Plus, 1, &mut out),
            '-' => push(Tok::Minus, 1, &mut out),
            '*' => push(Tok::Star, 1, &mut out),
            '/' => push(Tok::Slash, 1, &mut out),
            '^' => push(Tok::Caret, 1, &mut out),
            '(' => push(Tok::LParen, 1, &mut out),
            ')' => push(Tok::RParen, 1, &mut out),
            ',' => push(Tok::Comma, 1, &mut out),
            '=' => push(Tok::Eq, 1, &mut out),
            c => push(Tok::Invalid(c), 1, &mut out),
        };
        i += len;
        column += len;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    // token kinds tried at `expected_at`, for error messages
    expected: Vec<&'static str>,
    expected_at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn expect_here(&mut self, what: &'static str) {
        if self.expected_at != self.pos {
            self.expected.clear();
            self.expected_at = self.pos;
        }
        if !self.expected.contains(&what) {
            self.expected.push(what);
        }
    }

    /// Consumes `tok` if it is next.
    fn eat(&mut self, tok: Tok) -> bool {
        let name = match tok {
            Tok::Plus => "'+'",
            Tok::Minus => "'-'",
            Tok::Star => "'*'",
            Tok::Slash => "'/'",
            Tok::Caret => "'^'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Comma => "','",
            Tok::Eq => "'='",
            Tok::DotDot => "'..'",
            Tok::End => "end of input",
            _ => unreachable!("only punctuation is matched by kind"),
        };
        self.expect_here(name);
        if *self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self) -> Error {
        let at = &self.toks[self.pos];
        let expected = if self.expected_at == self.pos {
            self.expected.iter().map(|s| s.to_string()).collect()
        } else {
            Vec::new()
        };
        Error::Syntax {
            line: at.line,
            column: at.column,
            found: at.tok.describe(),
            expected,
        }
    }

    fn require(&mut self, tok: Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.expect_here("identifier");
        if let Tok::Ident(name) = self.peek().clone() {
            self.pos += 1;
            Some(name)
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(Tok::Plus) {
                BinOp::Add
            } else if self.eat(Tok::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(Tok::Star) {
                BinOp::Mul
            } else if self.eat(Tok::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(Tok::Minus) {
            Ok(Ast::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat(Tok::Caret) {
            let exp = self.unary()?;
            Ok(Ast::Binary(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        self.expect_here("integer");
        if let Tok::Int(n) = self.peek().clone() {
            self.pos += 1;
            return Ok(Ast::Int(n));
        }
        if self.eat(Tok::LParen) {
            let inner = self.expr()?;
            self.require(Tok::RParen)?;
            return Ok(inner);
        }
        let Some(name) = self.ident() else {
            return Err(self.error());
        };
        if !self.eat(Tok::LParen) {
            return Ok(Ast::Var(name));
        }
        if name == "sum" {
            let Some(var) = self.ident() else {
                return Err(self.error());
            };
            self.require(Tok::Eq)?;
            let lo = self.expr()?;
            self.require(Tok::DotDot)?;
            let hi = self.expr()?;
            self.require(Tok::Comma)?;
            let body = self.expr()?;
            self.require(Tok::RParen)?;
            return Ok(Ast::Sum {
                var,
                lo: Box::new(lo),
                hi: Box::new(hi),
                body: Box::new(body),
            });
        }
        let mut args = Vec::new();
        if !self.eat(Tok::RParen) {
            loop {
                args.push(self.expr()?);
                if self.eat(Tok::RParen) {
                    break;
                }
                self.require(Tok::Comma)?;
            }
        }
        Ok(Ast::Call(name, args))
    }
}

/// Parses a whole expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Ast> {
    let mut p = Parser {
        toks: lex(src),
        pos: 0,
        expected: Vec::new(),
        expected_at: usize::MAX,
    };
    let ast = p.expr()?;
    p.require(Tok::End)?;
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax(src: &str) -> (usize, usize, String, Vec<String>) {
        match parse(src) {
            Err(Error::Syntax {
                line,
                column,
                found,
                expected,
            }) => (line, column, found, expected),
            other => panic!("{src:?} gave {other:?}"),
        }
    }

    #[test]
    fn error_at_second_operator() {
        let (line, column, found, expected) = syntax("1 + * 2");
        assert_eq!((line, column), (1, 5));
        assert_eq!(found, "'*'");
        for e in ["integer", "'('", "identifier", "'-'"] {
            assert!(expected.contains(&e.to_string()), "{expected:?}");
        }
    }

    #[test]
    fn error_positions_across_lines() {
        let (line, column, _, expected) = syntax("sum(k = 0..3,\n  k ^ )");
        assert_eq!((line, column), (2, 7));
        assert!(expected.contains(&"'-'".to_string()));
        let (_, _, found, expected) = syntax("S(3, 2");
        assert_eq!(found, "end of input");
        assert!(expected.contains(&"')'".to_string()) && expected.contains(&"','".to_string()));
        let (_, column, found, _) = syntax("2 # 3");
        assert_eq!((column, found.as_str()), (3, "'#'"));
    }

    #[test]
    fn sum_requires_its_shape() {
        assert!(parse("sum(k=0..3, k)").is_ok());
        let (_, _, _, expected) = syntax("sum(k, k)");
        assert_eq!(expected, vec!["'='"]);
        let (_, _, _, expected) = syntax("sum(k=0, k)");
        assert!(expected.contains(&"'..'".to_string()));
        assert!(parse("sum(1=0..3, k)").is_err());
        // `sum` without parentheses is an ordinary variable
        assert_eq!(parse("sum").unwrap(), Ast::Var("sum".into()));
    }

    #[test]
    fn single_dot_is_rejected() {
        assert!(parse("1.5").is_err());
        assert!(parse("0 .. 1").is_err());
    }
}
