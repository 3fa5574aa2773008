//! A small expression language over exact rationals.
//!
//! ```text
//! expr  := term (("+"|"-") term)*
//! term  := unary (("*"|"/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" unary)?
//! atom  := INT | IDENT "(" args? ")" | IDENT | "(" expr ")"
//!        | "sum" "(" IDENT "=" expr ".." expr "," expr ")"
//! ```
//!
//! There are no fractional literals: `/` is always division, so `1/2`
//! is the quotient of two integers.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial_rational, int_pow, Integer, Rational};
use crate::seq::{power_sum, SeqContext};

pub use parse::parse;

/// Largest number of terms a single `sum` may iterate over.
pub const MAX_SUM_TERMS: u64 = 1_000_000;
/// Largest index accepted by the sequence built-ins.
pub const MAX_INDEX: usize = 1_000;
/// Largest exponent accepted by `^`.
pub const MAX_EXPONENT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Int(Integer),
    /// Not produced by the parser; printed as the quotient it equals.
    Rat(Rational),
    Var(String),
    Neg(Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
    Call(String, Vec<Ast>),
    Sum {
        var: String,
        lo: Box<Ast>,
        hi: Box<Ast>,
        body: Box<Ast>,
    },
}

impl Ast {
    /// Variables not bound by an enclosing `sum`.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Ast::Int(_) | Ast::Rat(_) => {}
            Ast::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Ast::Neg(a) => a.collect_free(bound, out),
            Ast::Binary(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Ast::Call(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Ast::Sum { var, lo, hi, body } => {
                lo.collect_free(bound, out);
                hi.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    // Binding strength of the node's outermost construct:
    // 1 sums, 2 products, 3 negation, 4 powers, 5 atoms.
    fn precedence(&self) -> u8 {
        match self {
            Ast::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Ast::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Ast::Neg(_) => 3,
            Ast::Binary(BinOp::Pow, ..) => 4,
            Ast::Int(n) if n.is_negative() => 3,
            Ast::Rat(q) if q.is_negative() => 3,
            Ast::Rat(q) if !q.is_integer() => 2,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_bare(f)?;
            return write!(f, ")");
        }
        self.write_bare(f)
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Int(n) if n.is_negative() => {
                write!(f, "-")?;
                Ast::Int(-n).write_at(f, 3)
            }
            Ast::Int(n) => write!(f, "{n}"),
            Ast::Rat(q) => {
                let magnitude = if q.is_integer() {
                    Ast::Int(q.numer().abs())
                } else {
                    Ast::Binary(
                        BinOp::Div,
                        Box::new(Ast::Int(q.numer().abs())),
                        Box::new(Ast::Int(q.denom().clone())),
                    )
                };
                if q.is_negative() {
                    Ast::Neg(Box::new(magnitude)).write_bare(f)
                } else {
                    magnitude.write_bare(f)
                }
            }
            Ast::Var(v) => write!(f, "{v}"),
            Ast::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Ast::Binary(op, a, b) => {
                let (sym, left, right) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    BinOp::Pow => ("^", 5, 3),
                };
                a.write_at(f, left)?;
                write!(f, "{sym}")?;
                b.write_at(f, right)
            }
            Ast::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.write_at(f, 1)?;
                }
                write!(f, ")")
            }
            Ast::Sum { var, lo, hi, body } => {
                write!(f, "sum({var} = ")?;
                lo.write_at(f, 1)?;
                write!(f, "..")?;
                hi.write_at(f, 1)?;
                write!(f, ", ")?;
                body.write_at(f, 1)?;
                write!(f, ")")
            }
        }
    }
}

/// Prints with the minimum parentheses needed to parse back to the same tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 1)
    }
}

/// Variable bindings plus the sequence tables built-ins read from.
#[derive(Clone, Debug)]
pub struct Env<'a> {
    ctx: &'a SeqContext,
    bindings: BTreeMap<String, Rational>,
}

impl<'a> Env<'a> {
    pub fn new(ctx: &'a SeqContext) -> Self {
        Env {
            ctx,
            bindings: BTreeMap::new(),
        }
    }

    pub fn bind(mut self, name: impl Into<String>, value: Rational) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: Rational) {
        self.bindings.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.bindings.get(name)
    }
}

/// Built-in functions and their arities.
pub const BUILTINS: &[(&str, usize)] = &[
    ("S", 2),
    ("s", 2),
    ("C", 2),
    ("fact", 1),
    ("H", 1),
    ("h", 2),
    ("B", 1),
    ("Bplus", 1),
    ("E", 1),
    ("D", 1),
    ("bell", 1),
    ("fubini", 1),
    ("M", 2),
    ("powsum", 2),
];

fn index(name: &str, q: &Rational) -> Result<usize> {
    bounded_index(name, q, MAX_INDEX)
}

fn bounded_index(name: &str, q: &Rational, cap: usize) -> Result<usize> {
    if !q.is_integer() || q.is_negative() {
        return Err(Error::Domain(format!(
            "{name} expects a nonnegative integer, got {}",
            crate::exact::format_rational(q)
        )));
    }
    match q.to_integer().to_usize() {
        Some(i) if i <= cap => Ok(i),
        _ => Err(Error::Domain(format!("{name} argument exceeds {cap}"))),
    }
}

fn integer_bound(q: &Rational) -> Result<Integer> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::Domain(format!(
            "summation bound {} is not an integer",
            crate::exact::format_rational(q)
        )))
    }
}

fn call(ctx: &SeqContext, name: &str, args: &[Rational]) -> Result<Rational> {
    let z = Rational::from_integer;
    let idx = |i: usize| index(name, &args[i]);
    Ok(match name {
        "S" => z(ctx.stirling2(idx(0)?, idx(1)?)),
        "s" => z(ctx.stirling1(idx(0)?, idx(1)?)),
        "C" => {
            if !args[1].is_integer() {
                return Err(Error::Domain("C expects an integer lower index".into()));
            }
            if args[1].is_negative() {
                Rational::zero()
            } else {
                binomial_rational(&args[0], idx(1)?)
            }
        }
        "fact" => z(ctx.factorial(idx(0)?)),
        "H" => ctx.harmonic(idx(0)?),
        "h" => ctx.hyperharmonic(idx(0)?, idx(1)?),
        "B" => ctx.bernoulli(idx(0)?),
        "Bplus" => ctx.bernoulli_plus(idx(0)?),
        "E" => ctx.euler_number(idx(0)?),
        "D" => z(ctx.derangement(idx(0)?)),
        "bell" => z(ctx.bell(idx(0)?)),
        "fubini" => z(ctx.fubini(idx(0)?)),
        "M" => z(ctx.moment_direct(idx(0)?, idx(1)?)),
        "powsum" => z(power_sum(idx(0)?, idx(1)?)),
        _ => return Err(Error::UnknownFunction(name.to_string())),
    })
}

fn eval_in(ast: &Ast, env: &Env<'_>, locals: &mut Vec<(String, Rational)>) -> Result<Rational> {
    match ast {
        Ast::Int(n) => Ok(Rational::from_integer(n.clone())),
        Ast::Rat(q) => Ok(q.clone()),
        Ast::Var(v) => locals
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, q)| q)
            .or_else(|| env.get(v))
            .cloned()
            .ok_or_else(|| Error::UnboundVariable(v.clone())),
        Ast::Neg(a) => Ok(-eval_in(a, env, locals)?),
        Ast::Binary(op, a, b) => {
            let x = eval_in(a, env, locals)?;
            let y = eval_in(b, env, locals)?;
            match op {
                BinOp::Add => Ok(x + y),
                BinOp::Sub => Ok(x - y),
                BinOp::Mul => Ok(x * y),
                BinOp::Div if y.is_zero() => Err(Error::DivisionByZero),
                BinOp::Div => Ok(x / y),
                BinOp::Pow => Ok(int_pow(&x, bounded_index("^", &y, MAX_EXPONENT)? as u32)),
            }
        }
        Ast::Call(name, args) => {
            let arity = BUILTINS
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, a)| *a)
                .ok_or_else(|| Error::UnknownFunction(name.clone()))?;
            if args.len() != arity {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let values = args
                .iter()
                .map(|a| eval_in(a, env, locals))
                .collect::<Result<Vec<_>>>()?;
            call(env.ctx, name, &values)
        }
        Ast::Sum { var, lo, hi, body } => {
            let lo = integer_bound(&eval_in(lo, env, locals)?)?;
            let hi = integer_bound(&eval_in(hi, env, locals)?)?;
            if lo > hi {
                return Ok(Rational::zero());
            }
            let count = &hi - &lo + Integer::one();
            if count > Integer::from(MAX_SUM_TERMS) {
                return Err(Error::SumTooLarge(count.to_string(), MAX_SUM_TERMS));
            }
            let mut acc = Rational::zero();
            let mut k = lo;
            while k <= hi {
                locals.push((var.clone(), Rational::from_integer(k.clone())));
                let term = eval_in(body, env, locals);
                locals.pop();
                acc += term?;
                k += 1;
            }
            Ok(acc)
        }
    }
}

pub fn eval(ast: &Ast, env: &Env<'_>) -> Result<Rational> {
    eval_in(ast, env, &mut Vec::new())
}

pub fn eval_str(src: &str, env: &Env<'_>) -> Result<Rational> {
    eval(&parse(src)?, env)
}
