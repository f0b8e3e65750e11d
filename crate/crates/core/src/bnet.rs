//! Reader and writer for the BooleanNet (`.bnet`) text format.
//!
//! One rule per line, `target, expression`. Expressions use `!`, `&`, `|`,
//! parentheses and the constants `0`/`1`; `!` binds tighter than `&`, which
//! binds tighter than `|`. Blank lines and `#` comments are skipped, and a
//! leading `targets, factors` header line is ignored.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{BooleanNetwork, ComponentId, Expr};

/// Parses a BooleanNet document.
pub fn parse_booleannet(text: &str) -> Result<BooleanNetwork> {
    let mut rules: Vec<(usize, &str, &str)> = Vec::new();
    let mut seen_content = false;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let Some((target, expr)) = line.split_once(',') else {
            return Err(syntax(lineno, "expected `target, expression`"));
        };
        let (target, expr) = (target.trim(), expr.trim());
        let header = !seen_content
            && target.eq_ignore_ascii_case("targets")
            && expr.eq_ignore_ascii_case("factors");
        seen_content = true;
        if header {
            continue;
        }
        if !ComponentId::is_valid(target) {
            return Err(syntax(
                lineno,
                &format!("invalid component name `{target}`"),
            ));
        }
        if expr.is_empty() {
            return Err(syntax(lineno, "missing expression"));
        }
        rules.push((lineno, target, expr));
    }

    let mut net = BooleanNetwork::new();
    for (_, target, _) in &rules {
        net.declare(target)?;
    }
    for (i, (lineno, _, text)) in rules.iter().enumerate() {
        let expr = parse_expression(text, |v| net.index_of(v).ok()).map_err(|e| match e {
            Error::Syntax { message, .. } => Error::Syntax {
                line: *lineno,
                message,
            },
            other => other,
        })?;
        net.set_rule(i, expr);
    }
    Ok(net)
}

/// Writes a network in BooleanNet format, one line per component in
/// declaration order.
pub fn serialize_booleannet(net: &BooleanNetwork) -> String {
    let mut out = String::new();
    for i in 0..net.len() {
        out.push_str(net.name(i));
        out.push_str(", ");
        out.push_str(&format_expression(net, net.rule(i)));
        out.push('\n');
    }
    out
}

impl FromStr for BooleanNetwork {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_booleannet(s)
    }
}

/// Renders an expression with the component names of `net`, using the
/// fewest parentheses the precedence rules allow.
pub fn format_expression(net: &BooleanNetwork, expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(net, expr, Prec::Or, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Or,
    And,
    Not,
}

fn write_expr(net: &BooleanNetwork, expr: &Expr, ctx: Prec, out: &mut String) {
    match expr {
        Expr::Const(b) => out.push(if *b { '1' } else { '0' }),
        Expr::Var(i) => out.push_str(net.name(*i)),
        Expr::Not(e) => {
            out.push('!');
            write_expr(net, e, Prec::Not, out);
        }
        Expr::And(es) | Expr::Or(es) => {
            let (prec, op) = if matches!(expr, Expr::And(_)) {
                (Prec::And, '&')
            } else {
                (Prec::Or, '|')
            };
            let paren = ctx > prec;
            if paren {
                out.push('(');
            }
            for (k, e) in es.iter().enumerate() {
                if k > 0 {
                    out.push(op);
                }
                write_expr(net, e, prec, out);
            }
            if paren {
                out.push(')');
            }
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn syntax(line: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Ident(&'a str),
    Const(bool),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token<'_>>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let single = match c {
            b' ' | b'\t' | b'\r' => {
                pos += 1;
                continue;
            }
            b'!' => Some(Token::Not),
            b'&' => Some(Token::And),
            b'|' => Some(Token::Or),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push(tok);
            pos += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            let word = &text[start..pos];
            tokens.push(match word {
                "0" => Token::Const(false),
                "1" => Token::Const(true),
                _ if ComponentId::is_valid(word) => Token::Ident(word),
                _ => return Err(syntax(0, &format!("invalid identifier `{word}`"))),
            });
            continue;
        }
        let ch = text[pos..].chars().next().unwrap();
        return Err(syntax(0, &format!("unexpected character `{ch}`")));
    }
    Ok(tokens)
}

/// Parses a single expression. `resolve` maps variable names to component
/// indices; unresolved names yield [`Error::Undeclared`]. Syntax errors
/// carry line 0 and are relocated by the caller.
pub(crate) fn parse_expression(
    text: &str,
    resolve: impl Fn(&str) -> Option<usize>,
) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        resolve: &resolve,
    };
    let expr = parser.disjunction()?;
    if parser.pos != tokens.len() {
        return Err(syntax(0, &format!("unexpected {:?}", tokens[parser.pos])));
    }
    Ok(expr)
}

struct Parser<'t, 'a, R> {
    tokens: &'t [Token<'a>],
    pos: usize,
    resolve: &'t R,
}

impl<'t, 'a, R: Fn(&str) -> Option<usize>> Parser<'t, 'a, R> {
    fn peek(&self) -> Option<&'t Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn disjunction(&mut self) -> Result<Expr> {
        let mut terms = vec![self.conjunction()?];
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            terms.push(self.conjunction()?);
        }
        Ok(Expr::or(terms))
    }

    fn conjunction(&mut self) -> Result<Expr> {
        let mut terms = vec![self.unary()?];
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            terms.push(self.unary()?);
        }
        Ok(Expr::and(terms))
    }

    fn unary(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Token::Not) => Ok(Expr::not(self.unary()?)),
            Some(Token::LParen) => {
                let e = self.disjunction()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(syntax(0, "missing `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Token::Const(b)) => Ok(Expr::Const(b)),
            Some(Token::Ident(name)) => (self.resolve)(name)
                .map(Expr::Var)
                .ok_or_else(|| Error::Undeclared(name.to_string())),
            Some(other) => Err(syntax(0, &format!("unexpected {other:?}"))),
            None => Err(syntax(0, "unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Configuration;

    const EXAMPLE1: &str = "A, B\nB, !A\nC, !A&B";

    #[test]
    fn parses_example1() {
        let f = parse_booleannet(EXAMPLE1).unwrap();
        assert_eq!(f.len(), 3);
        let names: Vec<&str> = f.names().iter().map(|n| n.as_str()).collect();
        assert_eq!(names, ["A", "B", "C"]);
        assert_eq!(f.rule(0), &Expr::Var(1));
        assert_eq!(f.rule(1), &Expr::not(Expr::Var(0)));
        assert_eq!(
            f.rule(2),
            &Expr::And(vec![Expr::not(Expr::Var(0)), Expr::Var(1)])
        );
    }

    #[test]
    fn serializes_example1() {
        let f = parse_booleannet(EXAMPLE1).unwrap();
        assert_eq!(serialize_booleannet(&f), "A, B\nB, !A\nC, !A&B\n");
    }

    #[test]
    fn empty_input() {
        let f = parse_booleannet("").unwrap();
        assert!(f.is_empty());
        assert_eq!(serialize_booleannet(&f), "");
    }

    #[test]
    fn undeclared_variable() {
        assert_eq!(
            parse_booleannet("A, B"),
            Err(Error::Undeclared("B".to_string()))
        );
    }

    #[test]
    fn duplicate_component() {
        assert_eq!(
            parse_booleannet("A, 1\nA, 0"),
            Err(Error::Duplicate("A".to_string()))
        );
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_booleannet("A, 1\n\nB, A &\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
        let err = parse_booleannet("A 1").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_booleannet("A, (A").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_booleannet("A, A ^ A").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_booleannet("2A, 1").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
    }

    #[test]
    fn header_comments_and_whitespace() {
        let text = "targets, factors\n# comment\n\n  A ,\tB | C  # trailing\nB,1\nC , !( A& B)\n";
        let f = parse_booleannet(text).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(serialize_booleannet(&f), "A, B|C\nB, 1\nC, !(A&B)\n");
    }

    #[test]
    fn precedence() {
        let f = parse_booleannet("a, a | b & !c\nb, b\nc, c").unwrap();
        // a | (b & !c)
        for x in Configuration::all(3) {
            let (a, b, c) = (x.get(0), x.get(1), x.get(2));
            assert_eq!(f.evaluate_local(0, &x), a || (b && !c));
        }
        let g = parse_booleannet("a, (a | b) & !c\nb, b\nc, c").unwrap();
        assert_eq!(serialize_booleannet(&g).lines().next(), Some("a, (a|b)&!c"));
        let h = parse_booleannet("a, !!a\nb, !(a|b)&c\nc, !c").unwrap();
        let text = serialize_booleannet(&h);
        assert!(parse_booleannet(&text).unwrap().semantically_equal(&h));
    }
}
