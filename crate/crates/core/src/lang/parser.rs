//! Recursive-descent parser for pGCL text.
//!
//! Sequencing binds loosest (`;` or newline), then the binary choices
//! `P <p> Q` and `P |^| Q` (left-associative), then single statements.
//! Assignment right-hand sides, choice probabilities and the operands of
//! `:in e1 <p> e2` are read at additive level so that `<` and `>` are free
//! to delimit the probability; parenthesise a comparison to use it there.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::expr::{BinOp, Expr, VarRef};
use super::lexer::{tokenize, Tok, Token};
use super::program::{DistExpr, Program};
use super::space::{StateSpace, Value, VarDomain};
use super::{LangError, ParseError};
use crate::rational::{is_probability, Rational};

/// Named rational parameters, substituted as literals while parsing.
pub type Params = BTreeMap<String, Rational>;

/// A parsed source file: its declared state space and its program.
#[derive(Debug, Clone)]
pub struct Source {
    pub space: StateSpace,
    pub params: Params,
    pub program: Program,
}

/// Parses a program against an existing state space.
pub fn parse(text: &str, space: &StateSpace) -> Result<Program, LangError> {
    parse_with(text, space, &Params::new())
}

pub fn parse_with(text: &str, space: &StateSpace, params: &Params) -> Result<Program, LangError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0, space, params };
    p.program()
}

pub fn parse_expr(text: &str, space: &StateSpace, params: &Params) -> Result<Expr, LangError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0, space, params };
    p.skip_newlines();
    let e = p.expr()?;
    p.skip_newlines();
    p.expect(Tok::Eof)?;
    Ok(e)
}

/// Parses `var x in {..}` / `param p = ..` header lines followed by a
/// program. Entries in `overrides` replace header parameter values and may
/// introduce parameters the header does not mention.
pub fn parse_source(text: &str, overrides: &Params) -> Result<Source, LangError> {
    let toks = tokenize(text)?;
    let mut header = Header { toks: &toks, pos: 0, domains: Vec::new(), params: Params::new() };
    header.run()?;
    let Header { pos, domains, mut params, .. } = header;
    for (k, v) in overrides {
        params.insert(k.clone(), v.clone());
    }
    let space = StateSpace::new(domains)?;
    for name in params.keys() {
        if space.var_index(name).is_some() {
            return Err(LangError::Syntax(ParseError {
                line: 1,
                col: 1,
                message: format!("`{name}` is declared both as a variable and as a parameter"),
            }));
        }
    }
    let program = {
        let mut p = Parser { toks: &toks, pos, space: &space, params: &params };
        p.program()?
    };
    Ok(Source { space, params, program })
}

struct Header<'a> {
    toks: &'a [Token],
    pos: usize,
    domains: Vec<VarDomain>,
    params: Params,
}

impl Header<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err(&self, message: impl Into<String>) -> LangError {
        let t = &self.toks[self.pos];
        LangError::Syntax(ParseError { line: t.line, col: t.col, message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LangError> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn ident(&mut self) -> Result<String, LangError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            other => Err(self.err(format!("expected a name, found {}", other.describe()))),
        }
    }

    fn number(&mut self) -> Result<Rational, LangError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.pos += 1;
        }
        match self.peek().clone() {
            Tok::Number(r) => {
                self.pos += 1;
                Ok(if negative { -r } else { r })
            }
            other => Err(self.err(format!("expected a number, found {}", other.describe()))),
        }
    }

    fn run(&mut self) -> Result<(), LangError> {
        loop {
            while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                self.pos += 1;
            }
            match self.peek() {
                Tok::Ident(w) if w == "var" => {
                    self.pos += 1;
                    let name = self.ident()?;
                    match self.peek() {
                        Tok::Ident(w) if w == "in" => self.pos += 1,
                        _ => return Err(self.err("expected `in` after the variable name")),
                    }
                    self.expect(Tok::LBrace)?;
                    let values = self.values()?;
                    self.expect(Tok::RBrace)?;
                    self.domains.push(VarDomain::new(name, values)?);
                }
                Tok::Ident(w) if w == "param" => {
                    self.pos += 1;
                    let name = self.ident()?;
                    self.expect(Tok::Eq)?;
                    let value = self.number()?;
                    self.params.insert(name, value);
                }
                _ => return Ok(()),
            }
        }
    }

    fn values(&mut self) -> Result<Vec<Value>, LangError> {
        let mut out = Vec::new();
        loop {
            if let Tok::Ident(name) = self.peek().clone() {
                self.pos += 1;
                out.push(Value::sym(&name));
            } else {
                let lo = self.number()?;
                if *self.peek() == Tok::DotDot {
                    self.pos += 1;
                    let hi = self.number()?;
                    let (Some(a), Some(b)) = (int_of(&lo), int_of(&hi)) else {
                        return Err(self.err("ranges `a..b` need integer bounds"));
                    };
                    out.extend((a..=b).map(|k| Value::Num(Rational::from_integer(BigInt::from(k)))));
                } else {
                    out.push(Value::Num(lo));
                }
            }
            if *self.peek() == Tok::Comma {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

fn int_of(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    space: &'a StateSpace,
    params: &'a Params,
}

const TERMINATORS: [&str; 5] = ["OD", "FI", "ELSE", "THEN", "DO"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn err(&self, message: impl Into<String>) -> LangError {
        let t = self.here();
        LangError::Syntax(ParseError { line: t.line, col: t.col, message: message.into() })
    }

    fn unexpected(&self, wanted: &str) -> LangError {
        self.err(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LangError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), LangError> {
        if self.is_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.pos += 1;
        }
    }

    /// Token after any run of newlines, without consuming them.
    fn peek_past_newlines(&self) -> &Tok {
        let mut i = self.pos;
        while self.toks[i].tok == Tok::Newline {
            i += 1;
        }
        &self.toks[i].tok
    }

    fn starts_statement(&self) -> bool {
        match self.peek() {
            Tok::Ident(w) => !TERMINATORS.contains(&w.as_str()),
            Tok::LParen | Tok::LBrace => true,
            _ => false,
        }
    }

    fn program(&mut self) -> Result<Program, LangError> {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.pos += 1;
        }
        if *self.peek() == Tok::Eof {
            return Err(self.err("empty program"));
        }
        let p = self.seq()?;
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.pos += 1;
        }
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of program"));
        }
        Ok(p)
    }

    fn seq(&mut self) -> Result<Program, LangError> {
        let mut parts = vec![self.choice()?];
        loop {
            let mut separated = false;
            while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                self.pos += 1;
                separated = true;
            }
            if separated && self.starts_statement() {
                parts.push(self.choice()?);
            } else {
                break;
            }
        }
        Ok(Program::seq(parts))
    }

    fn choice(&mut self) -> Result<Program, LangError> {
        let mut left = self.statement()?;
        loop {
            match self.peek_past_newlines() {
                Tok::Lt => {
                    self.skip_newlines();
                    self.advance();
                    let p = self.probability()?;
                    self.expect(Tok::Gt)?;
                    self.skip_newlines();
                    let right = self.statement()?;
                    left = Program::ProbChoice(p, Box::new(left), Box::new(right));
                }
                Tok::Demon => {
                    self.skip_newlines();
                    self.advance();
                    self.skip_newlines();
                    let right = self.statement()?;
                    left = Program::DemonChoice(Box::new(left), Box::new(right));
                }
                _ => return Ok(left),
            }
        }
    }

    /// A probability position; literal values are range-checked here.
    fn probability(&mut self) -> Result<Expr, LangError> {
        let t = self.here().clone();
        let p = self.arith()?;
        if let Expr::Num(r) = &p {
            if !is_probability(r) {
                return Err(LangError::MalformedLiteral(ParseError {
                    line: t.line,
                    col: t.col,
                    message: format!("probability {} is outside [0, 1]", crate::rational::format_literal(r)),
                }));
            }
        }
        Ok(p)
    }

    fn statement(&mut self) -> Result<Program, LangError> {
        match self.peek().clone() {
            Tok::Ident(w) if w == "SKIP" => {
                self.advance();
                Ok(Program::Skip)
            }
            Tok::Ident(w) if w == "ABORT" => {
                self.advance();
                Ok(Program::Abort)
            }
            Tok::Ident(w) if w == "IF" => {
                self.advance();
                self.if_statement()
            }
            Tok::Ident(w) if w == "WHILE" => {
                self.advance();
                let guard = self.expr()?;
                self.skip_newlines();
                self.expect_keyword("DO")?;
                self.skip_newlines();
                let body = self.seq()?;
                self.skip_newlines();
                self.expect_keyword("OD")?;
                Ok(Program::While(guard, Box::new(body)))
            }
            Tok::LParen => {
                self.advance();
                self.skip_newlines();
                let p = self.seq()?;
                while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                    self.pos += 1;
                }
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::LBrace => {
                self.advance();
                let pred = self.expr()?;
                self.expect(Tok::RBrace)?;
                Ok(Program::Assert(pred))
            }
            Tok::Ident(_) => self.assignment(),
            _ => Err(self.unexpected("a statement")),
        }
    }

    fn if_statement(&mut self) -> Result<Program, LangError> {
        let guard = self.expr()?;
        if self.eat(&Tok::Arrow) {
            self.skip_newlines();
            let mut branches = vec![(guard, self.seq()?)];
            loop {
                while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                    self.pos += 1;
                }
                if self.eat(&Tok::Box) {
                    let g = self.expr()?;
                    self.expect(Tok::Arrow)?;
                    self.skip_newlines();
                    branches.push((g, self.seq()?));
                } else if self.is_keyword("FI") {
                    self.advance();
                    return Ok(Program::GuardedIf(branches));
                } else {
                    return Err(self.unexpected("`[]` or `FI`"));
                }
            }
        }
        self.skip_newlines();
        self.expect_keyword("THEN")?;
        self.skip_newlines();
        let then_branch = self.choice()?;
        let else_branch = if matches!(self.peek_past_newlines(), Tok::Ident(w) if w == "ELSE") {
            self.skip_newlines();
            self.advance();
            self.skip_newlines();
            self.choice()?
        } else {
            Program::Skip
        };
        let (a, b) = (Box::new(then_branch), Box::new(else_branch));
        Ok(if guard.is_boolean() { Program::IfBool(guard, a, b) } else { Program::IfProb(guard, a, b) })
    }

    fn target(&mut self) -> Result<VarRef, LangError> {
        let t = self.here().clone();
        let Tok::Ident(name) = t.tok.clone() else {
            return Err(self.unexpected("a variable"));
        };
        self.advance();
        match VarRef::new(self.space, &name) {
            Some(v) => Ok(v),
            None if self.params.contains_key(&name) || self.space.is_token(&name) => Err(LangError::Syntax(ParseError {
                line: t.line,
                col: t.col,
                message: format!("`{name}` is not a variable and cannot be assigned"),
            })),
            None => Err(LangError::Undeclared { name, line: t.line, col: t.col }),
        }
    }

    fn assignment(&mut self) -> Result<Program, LangError> {
        let mut vars = vec![self.target()?];
        while self.eat(&Tok::Comma) {
            vars.push(self.target()?);
        }
        match self.advance() {
            Tok::Assign => {
                let mut exprs = vec![self.arith()?];
                while self.eat(&Tok::Comma) {
                    exprs.push(self.arith()?);
                }
                if exprs.len() != vars.len() {
                    return Err(self.err(format!("{} variables but {} expressions", vars.len(), exprs.len())));
                }
                for (i, v) in vars.iter().enumerate() {
                    if vars[..i].iter().any(|w| w.slot == v.slot) {
                        return Err(self.err(format!("`{}` assigned twice", v.name)));
                    }
                }
                Ok(Program::Assign(vars.into_iter().zip(exprs).collect()))
            }
            Tok::SuchThat => {
                let pred = self.expr()?;
                Ok(Program::SuchThat(vars, pred))
            }
            Tok::In if vars.len() == 1 => {
                let x = vars.pop().unwrap();
                if self.eat(&Tok::LBrace) {
                    let mut set = vec![self.expr()?];
                    while self.eat(&Tok::Comma) {
                        set.push(self.expr()?);
                    }
                    self.expect(Tok::RBrace)?;
                    return Ok(Program::ChooseFromSet(x, set));
                }
                let e1 = self.arith()?;
                if self.eat(&Tok::Lt) {
                    let p = self.probability()?;
                    self.expect(Tok::Gt)?;
                    let e2 = self.arith()?;
                    Ok(Program::ProbAssign(x, e1, p, e2))
                } else if self.eat(&Tok::Demon) {
                    let e2 = self.arith()?;
                    Ok(Program::DemonAssign(x, e1, e2))
                } else {
                    Err(self.unexpected("`<p>` or `|^|`"))
                }
            }
            Tok::Dist if vars.len() == 1 => {
                let x = vars.pop().unwrap();
                self.expect(Tok::LBracket)?;
                let mut arms = Vec::new();
                loop {
                    let e = self.arith()?;
                    self.expect(Tok::Colon)?;
                    let p = self.probability()?;
                    arms.push((e, p));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBracket)?;
                Ok(Program::ChooseFromDist(x, DistExpr { arms }))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("`:=`, `:in`, `:suchthat` or `:dist`"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut left = self.conj()?;
        while self.eat(&Tok::Or) {
            let right = self.conj()?;
            left = Expr::bin(BinOp::Or, left, right);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Expr, LangError> {
        let mut left = self.comparison()?;
        while self.eat(&Tok::And) {
            let right = self.comparison()?;
            left = Expr::bin(BinOp::And, left, right);
        }
        Ok(left)
    }

    /// `a < b < c` reads as `a < b & b < c`.
    fn comparison(&mut self) -> Result<Expr, LangError> {
        let first = self.arith()?;
        let mut links: Vec<Expr> = Vec::new();
        let mut left = first.clone();
        let mut result = first;
        loop {
            let op = match self.peek() {
                Tok::Eq => BinOp::Eq,
                Tok::Ne => BinOp::Ne,
                Tok::Lt => BinOp::Lt,
                Tok::Le => BinOp::Le,
                Tok::Gt => BinOp::Gt,
                Tok::Ge => BinOp::Ge,
                _ => break,
            };
            self.advance();
            let right = self.arith()?;
            links.push(Expr::bin(op, left, right.clone()));
            left = right;
        }
        if !links.is_empty() {
            let mut it = links.into_iter();
            result = it.next().unwrap();
            for link in it {
                result = Expr::bin(BinOp::And, result, link);
            }
        }
        Ok(result)
    }

    fn arith(&mut self) -> Result<Expr, LangError> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(left),
            };
            self.advance();
            let right = self.term()?;
            left = Expr::bin(op, left, right);
        }
    }

    fn term(&mut self) -> Result<Expr, LangError> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(left),
            };
            self.advance();
            let right = self.unary()?;
            left = Expr::bin(op, left, right);
        }
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        match self.peek() {
            Tok::Minus => {
                self.advance();
                if let Tok::Number(r) = self.peek().clone() {
                    self.advance();
                    return Ok(Expr::Num(-r));
                }
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Not => {
                self.advance();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, LangError> {
        let t = self.here().clone();
        match t.tok {
            Tok::Number(r) => {
                self.advance();
                Ok(Expr::Num(r))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::iverson(e))
            }
            Tok::Ident(name) => {
                self.advance();
                match name.as_str() {
                    "true" | "True" => return Ok(Expr::Bool(true)),
                    "false" | "False" => return Ok(Expr::Bool(false)),
                    "min" | "max" if *self.peek() == Tok::LParen && self.space.var_index(&name).is_none() => {
                        self.advance();
                        let a = self.expr()?;
                        self.expect(Tok::Comma)?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen)?;
                        let op = if name == "min" { BinOp::Min } else { BinOp::Max };
                        return Ok(Expr::bin(op, a, b));
                    }
                    _ => {}
                }
                if let Some(v) = VarRef::new(self.space, &name) {
                    Ok(Expr::Var(v))
                } else if let Some(r) = self.params.get(&name) {
                    Ok(Expr::Num(r.clone()))
                } else if self.space.is_token(&name) {
                    Ok(Expr::Sym(name.as_str().into()))
                } else if TERMINATORS.contains(&name.as_str()) {
                    self.pos -= 1;
                    Err(self.unexpected("an expression"))
                } else {
                    Err(LangError::Undeclared { name, line: t.line, col: t.col })
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dyadic_grid, rat};

    fn coins() -> StateSpace {
        StateSpace::new(vec![
            VarDomain::tokens("x", &["H", "T"]).unwrap(),
            VarDomain::tokens("c1", &["H", "T"]).unwrap(),
            VarDomain::tokens("c2", &["H", "T"]).unwrap(),
        ])
        .unwrap()
    }

    fn pqr() -> StateSpace {
        StateSpace::new(vec![
            VarDomain::numeric("p", dyadic_grid()).unwrap(),
            VarDomain::numeric("q", dyadic_grid()).unwrap(),
            VarDomain::numeric("r", dyadic_grid()).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn probabilistic_assignment() {
        let s = coins();
        let p = parse("x := H <0.5> x := T", &s).unwrap();
        assert!(matches!(p, Program::ProbChoice(..)));
        let p = parse("x :in H <0.5> T", &s).unwrap();
        let x = VarRef::new(&s, "x").unwrap();
        assert_eq!(p, Program::ProbAssign(x, Expr::Sym("H".into()), Expr::Num(rat(1, 2)), Expr::Sym("T".into())));
    }

    #[test]
    fn guarded_if_of_split_step() {
        let s = pqr();
        let p = parse("IF p <= 1/2 -> q,r := 0, 2*p [] p >= 1/2 -> q,r := 2*p-1, 1 FI", &s).unwrap();
        let Program::GuardedIf(branches) = p else { panic!() };
        assert_eq!(branches.len(), 2);
        assert!(matches!(&branches[0].1, Program::Assign(pairs) if pairs.len() == 2));
    }

    #[test]
    fn loop_with_chained_guard() {
        let s = pqr();
        let text = "WHILE 0 < p < 1 DO\n  p :in q <1/2> r\nOD";
        let p = parse(text, &s).unwrap();
        let Program::While(g, _) = &p else { panic!() };
        assert_eq!(g.to_string(), "0 < p & p < 1");
        assert_eq!(parse("WHILE 0 < p & p < 1 DO p :in q <1/2> r OD", &s).unwrap(), p);
    }

    #[test]
    fn precedence_of_sequence_and_choice() {
        let s = coins();
        let p = parse("c1:=H <1/2> c1:=T; c2:=H |^| c2:=T", &s).unwrap();
        let Program::Seq(parts) = p else { panic!() };
        assert!(matches!(parts[0], Program::ProbChoice(..)));
        assert!(matches!(parts[1], Program::DemonChoice(..)));
    }

    #[test]
    fn errors_carry_positions() {
        let s = coins();
        match parse("x := H\ny := T", &s) {
            Err(LangError::Undeclared { name, line, col }) => assert_eq!((name.as_str(), line, col), ("y", 2, 1)),
            other => panic!("{other:?}"),
        }
        match parse("x := H;\n  x :=", &s) {
            Err(LangError::Syntax(e)) => assert_eq!(e.line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x := H <3/2> x := T", &s), Err(LangError::MalformedLiteral(_))));
        assert!(matches!(parse("x := H <1.2.3> x := T", &s), Err(LangError::Syntax(_) | LangError::MalformedLiteral(_))));
        assert!(matches!(parse("H := x", &s), Err(LangError::Syntax(_))));
    }

    #[test]
    fn header_and_params() {
        let src = "var x in {0..2}\nvar c in {H, T}\nparam p = 3/8\n\nx :in 1 <p> 0";
        let parsed = parse_source(src, &Params::new()).unwrap();
        assert_eq!(parsed.space.len(), 6);
        let Program::ProbAssign(_, _, p, _) = &parsed.program else { panic!() };
        assert_eq!(*p, Expr::Num(rat(3, 8)));
        let mut over = Params::new();
        over.insert("p".into(), rat(1, 3));
        let parsed = parse_source(src, &over).unwrap();
        let Program::ProbAssign(_, _, p, _) = &parsed.program else { panic!() };
        assert_eq!(*p, Expr::Num(rat(1, 3)));
    }

    #[test]
    fn other_statement_forms() {
        let s = pqr();
        for text in [
            "SKIP",
            "ABORT",
            "{ p = (q + r) / 2 }",
            "p :in {0, 1/2, 1}",
            "q, r :suchthat p = (q + r) / 2",
            "p :dist [0: 1/4, 1/2: 1/4, 1: 1/2]",
            "p :in q |^| r",
            "IF p < 1/2 THEN q := 0 ELSE q := 1",
            "IF 1/3 THEN (q := 0; r := 0) ELSE SKIP",
            "IF [p = 0] THEN q := 0",
        ] {
            parse(text, &s).unwrap_or_else(|e| panic!("{text}: {e}"));
        }
        assert!(matches!(parse("IF 1/3 THEN q := 0 ELSE SKIP", &s).unwrap(), Program::IfProb(..)));
    }
}
