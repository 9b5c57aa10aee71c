use std::fmt;

use thiserror::Error;

use super::{CompleteState, PropositionId};

/// Propositional formula over indexed propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(PropositionId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(p: PropositionId) -> Self {
        Formula::Var(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn holds_in(&self, state: CompleteState) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(p) => state.is_affirmative(*p),
            Formula::Not(f) => !f.holds_in(state),
            Formula::And(a, b) => a.holds_in(state) && b.holds_in(state),
            Formula::Or(a, b) => a.holds_in(state) || b.holds_in(state),
        }
    }

    /// Highest proposition index referenced, if any.
    pub fn max_proposition(&self) -> Option<PropositionId> {
        match self {
            Formula::Const(_) => None,
            Formula::Var(p) => Some(*p),
            Formula::Not(f) => f.max_proposition(),
            Formula::And(a, b) | Formula::Or(a, b) => a.max_proposition().max(b.max_proposition()),
        }
    }

    /// Parses `!`/`¬`/`not`, `&`/`∧`/`and`, `|`/`∨`/`or`, parentheses,
    /// `true`/`false` and proposition names drawn from `names`. Names of the
    /// form `p<k>` are accepted as indices when `names` does not list them.
    pub fn parse(src: &str, names: &[String]) -> Result<Formula, FormulaParseError> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0, names };
        let f = parser.or()?;
        match parser.tokens.get(parser.pos) {
            None => Ok(f),
            Some(t) => Err(FormulaParseError::Unexpected(t.to_string())),
        }
    }

    pub fn label_with(&self, names: &[String]) -> String {
        self.render(names, 0)
    }

    fn render(&self, names: &[String], parent: u8) -> String {
        match self {
            Formula::Const(true) => "true".into(),
            Formula::Const(false) => "false".into(),
            Formula::Var(p) => names.get(p.0).cloned().unwrap_or_else(|| p.to_string()),
            Formula::Not(f) => format!("¬{}", f.render(names, 3)),
            Formula::And(a, b) => wrap(format!("{}∧{}", a.render(names, 2), b.render(names, 2)), parent > 2),
            Formula::Or(a, b) => wrap(format!("{}∨{}", a.render(names, 1), b.render(names, 1)), parent > 1),
        }
    }
}

fn wrap(s: String, paren: bool) -> String {
    if paren {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label_with(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaParseError {
    #[error("unexpected character {0:?}")]
    BadChar(char),
    #[error("unexpected token {0:?}")]
    Unexpected(String),
    #[error("unexpected end of formula")]
    Eof,
    #[error("unknown proposition {0:?}")]
    UnknownName(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Not,
    And,
    Or,
    Open,
    Close,
    Ident(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Not => f.write_str("¬"),
            Token::And => f.write_str("∧"),
            Token::Or => f.write_str("∨"),
            Token::Open => f.write_str("("),
            Token::Close => f.write_str(")"),
            Token::Ident(s) => f.write_str(s),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>, FormulaParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '!' | '¬' | '~' => {
                chars.next();
                out.push(Token::Not);
            }
            '&' | '∧' => {
                chars.next();
                out.push(Token::And);
            }
            '|' | '∨' => {
                chars.next();
                out.push(Token::Or);
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(match ident.as_str() {
                    "not" => Token::Not,
                    "and" => Token::And,
                    "or" => Token::Or,
                    _ => Token::Ident(ident),
                });
            }
            other => return Err(FormulaParseError::BadChar(other)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, FormulaParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(FormulaParseError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn or(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        match self.next()? {
            Token::Not => Ok(Formula::not(self.unary()?)),
            Token::Open => {
                let f = self.or()?;
                match self.next()? {
                    Token::Close => Ok(f),
                    t => Err(FormulaParseError::Unexpected(t.to_string())),
                }
            }
            Token::Ident(name) => self.resolve(name),
            t => Err(FormulaParseError::Unexpected(t.to_string())),
        }
    }

    fn resolve(&self, name: String) -> Result<Formula, FormulaParseError> {
        if let Some(k) = self.names.iter().position(|n| *n == name) {
            return Ok(Formula::Var(PropositionId(k)));
        }
        match name.as_str() {
            "true" => return Ok(Formula::Const(true)),
            "false" => return Ok(Formula::Const(false)),
            _ => {}
        }
        name.strip_prefix('p')
            .and_then(|digits| digits.parse::<usize>().ok())
            .map(|k| Formula::Var(PropositionId(k)))
            .ok_or(FormulaParseError::UnknownName(name))
    }
}
