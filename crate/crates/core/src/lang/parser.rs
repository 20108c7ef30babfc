use super::ast::{Atom, Formula, Inner};
use super::lexer::{tokenize, Tok};
use super::validate::validate;
use crate::error::{Error, Result};
use crate::model::{is_ident, is_value_token, Context, Intervention, Signature, Value};

/// Shared Boolean structure of formulas and inner formulas.
trait Connectives: Sized {
    fn not(self) -> Self;
    fn and(self, other: Self) -> Self;
    fn or(self, other: Self) -> Self;
    fn implies(self, other: Self) -> Self;
    fn iff(self, other: Self) -> Self;
}

macro_rules! connectives {
    ($t:ty) => {
        impl Connectives for $t {
            fn not(self) -> Self {
                <$t>::not(self)
            }
            fn and(self, other: Self) -> Self {
                <$t>::and(self, other)
            }
            fn or(self, other: Self) -> Self {
                <$t>::or(self, other)
            }
            fn implies(self, other: Self) -> Self {
                <$t>::implies(self, other)
            }
            fn iff(self, other: Self) -> Self {
                <$t>::iff(self, other)
            }
        }
    };
}

connectives!(Formula);
connectives!(Inner);

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type Unit<T> = fn(&mut Parser) -> Result<T>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, t: Tok, expected: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn iff<T: Connectives>(&mut self, unit: Unit<T>) -> Result<T> {
        let mut lhs = self.imp(unit)?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.imp(unit)?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn imp<T: Connectives>(&mut self, unit: Unit<T>) -> Result<T> {
        let lhs = self.or(unit)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.imp(unit)?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or<T: Connectives>(&mut self, unit: Unit<T>) -> Result<T> {
        let mut lhs = self.and(unit)?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.and(unit)?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and<T: Connectives>(&mut self, unit: Unit<T>) -> Result<T> {
        let mut lhs = self.unary(unit)?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary(unit)?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary<T: Connectives>(&mut self, unit: Unit<T>) -> Result<T> {
        if self.eat(&Tok::Bang) {
            Ok(self.unary(unit)?.not())
        } else {
            unit(self)
        }
    }

    fn formula_base(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let f = self.iff(Parser::formula_base)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::LBracket => {
                self.bump();
                let iv = self.setlist(Tok::RBracket, "`]`")?;
                let inner = self.unary(Parser::inner_base)?;
                Ok(Formula::boxed(iv, inner))
            }
            Tok::Lt => {
                self.bump();
                let iv = self.setlist(Tok::Gt, "`>`")?;
                let inner = self.unary(Parser::inner_base)?;
                Ok(Formula::diamond(iv, inner))
            }
            _ => self.fail("`!`, `(`, `[` or `<`"),
        }
    }

    fn setlist(&mut self, close: Tok, close_desc: &str) -> Result<Intervention> {
        if self.eat(&close) {
            return Ok(Intervention::empty());
        }
        if self.peek() == &Tok::Word("true".into()) {
            self.bump();
            self.expect(close, close_desc)?;
            return Ok(Intervention::empty());
        }
        let mut settings = Vec::new();
        loop {
            let name = self.ident()?;
            self.expect(Tok::Assign, "`<-`")?;
            let value = self.value()?;
            settings.push((name, value));
            if self.eat(&Tok::Semi) {
                continue;
            }
            self.expect(close, &format!("`;` or {close_desc}"))?;
            return Ok(Intervention { settings });
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Tok::Word(w) if is_ident(w) => {
                let w = w.clone();
                self.bump();
                Ok(w)
            }
            _ => self.fail("a variable name"),
        }
    }

    fn value(&mut self) -> Result<Value> {
        match self.peek() {
            Tok::Word(w) if is_value_token(w) => {
                let v = Value::from(w.as_str());
                self.bump();
                Ok(v)
            }
            _ => self.fail("a value"),
        }
    }

    fn context(&mut self) -> Result<Context> {
        self.expect(Tok::LParen, "`(`")?;
        let mut values = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(Context::new(values));
        }
        loop {
            values.push(self.value()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
            return Ok(Context::new(values));
        }
    }

    fn inner_base(&mut self) -> Result<Inner> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff(Parser::inner_base)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.bump();
                let ctx = self.context()?;
                Ok(if w == "true" {
                    Inner::True(ctx)
                } else {
                    Inner::False(ctx)
                })
            }
            Tok::Word(w) if is_ident(&w) => {
                self.bump();
                let ctx = self.context()?;
                let negated = match self.bump() {
                    Tok::Eq => false,
                    Tok::Neq => true,
                    _ => {
                        self.pos -= 1;
                        return self.fail("`=` or `!=`");
                    }
                };
                let value = self.value()?;
                let atom = Inner::Atom(Atom { var: w, ctx, value });
                Ok(if negated { atom.not() } else { atom })
            }
            _ => self.fail("an atom, `!` or `(`"),
        }
    }
}

/// Parses concrete syntax without consulting a signature.
pub fn parse_unchecked(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.iff(Parser::formula_base)?;
    if p.peek() != &Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(f)
}

/// Parses a formula and validates every name, value and context against
/// `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let f = parse_unchecked(text)?;
    validate(&f, sig)?;
    Ok(f)
}
