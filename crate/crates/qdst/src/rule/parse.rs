//! Recursive-descent parser for rule text.

use crate::error::{Error, Result};
use crate::rule::RuleExpr;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Amp,
    Pipe,
    Caret,
    Tilde,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("identifier `{name}`"),
            Token::Amp => "`&`".to_string(),
            Token::Pipe => "`|`".to_string(),
            Token::Caret => "`^`".to_string(),
            Token::Tilde => "`~`".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
            b'&' => {
                tokens.push((pos, Token::Amp));
                pos += 1;
            }
            b'|' => {
                tokens.push((pos, Token::Pipe));
                pos += 1;
            }
            b'^' => {
                tokens.push((pos, Token::Caret));
                pos += 1;
            }
            b'~' => {
                tokens.push((pos, Token::Tilde));
                pos += 1;
            }
            b'(' => {
                tokens.push((pos, Token::LParen));
                pos += 1;
            }
            b')' => {
                tokens.push((pos, Token::RParen));
                pos += 1;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                tokens.push((start, Token::Ident(text[start..pos].to_string())));
            }
            other => {
                return Err(Error::RuleSyntax {
                    position: pos,
                    message: format!("unexpected character `{}`", other as char),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.cursor)
    }

    fn advance(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    // expr := term (("|" | "^") term)*
    fn expr(&mut self) -> Result<RuleExpr> {
        let mut acc = self.term()?;
        while let Some((_, token)) = self.peek() {
            match token {
                Token::Pipe => {
                    self.advance();
                    let rhs = self.term()?;
                    // flatten `a | b | c` chains into one n-ary node
                    acc = match acc {
                        RuleExpr::Or(mut children) => {
                            children.push(rhs);
                            RuleExpr::Or(children)
                        }
                        other => RuleExpr::Or(vec![other, rhs]),
                    };
                }
                Token::Caret => {
                    self.advance();
                    let rhs = self.term()?;
                    acc = RuleExpr::Xor(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor ("&" factor)*
    fn term(&mut self) -> Result<RuleExpr> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some((_, Token::Amp))) {
            self.advance();
            let rhs = self.factor()?;
            acc = match acc {
                RuleExpr::And(mut children) => {
                    children.push(rhs);
                    RuleExpr::And(children)
                }
                other => RuleExpr::And(vec![other, rhs]),
            };
        }
        Ok(acc)
    }

    // factor := "~" factor | "(" expr ")" | identifier
    fn factor(&mut self) -> Result<RuleExpr> {
        match self.advance() {
            Some((_, Token::Tilde)) => Ok(RuleExpr::Not(Box::new(self.factor()?))),
            Some((_, Token::LParen)) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((position, token)) => Err(Error::RuleSyntax {
                        position,
                        message: format!("expected `)`, found {}", token.describe()),
                    }),
                    None => Err(Error::RuleSyntax {
                        position: self.end,
                        message: "expected `)`, found end of rule".to_string(),
                    }),
                }
            }
            Some((_, Token::Ident(name))) => Ok(RuleExpr::Var(name)),
            Some((position, token)) => Err(Error::RuleSyntax {
                position,
                message: format!(
                    "expected a source name, `~` or `(`, found {}",
                    token.describe()
                ),
            }),
            None => Err(Error::RuleSyntax {
                position: self.end,
                message: "expected a source name, `~` or `(`, found end of rule".to_string(),
            }),
        }
    }
}

pub(crate) fn parse(text: &str) -> Result<RuleExpr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if let Some((position, token)) = parser.peek() {
        return Err(Error::RuleSyntax {
            position: *position,
            message: format!("unexpected {} after the rule", token.describe()),
        });
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> RuleExpr {
        RuleExpr::Var(name.to_string())
    }

    #[test]
    fn parses_nary_chains() {
        assert_eq!(
            parse("m1 & m2 & m3").unwrap(),
            RuleExpr::And(vec![var("m1"), var("m2"), var("m3")])
        );
        assert_eq!(
            parse("m1 | m2 | m3").unwrap(),
            RuleExpr::Or(vec![var("m1"), var("m2"), var("m3")])
        );
    }

    #[test]
    fn xor_is_left_associative_and_binary() {
        assert_eq!(
            parse("m1 ^ m2 ^ m3").unwrap(),
            RuleExpr::Xor(
                Box::new(RuleExpr::Xor(Box::new(var("m1")), Box::new(var("m2")))),
                Box::new(var("m3"))
            )
        );
    }

    #[test]
    fn precedence_not_over_and_over_or() {
        // ~a & b | c  ==  ((~a) & b) | c
        assert_eq!(
            parse("~a & b | c").unwrap(),
            RuleExpr::Or(vec![
                RuleExpr::And(vec![RuleExpr::Not(Box::new(var("a"))), var("b")]),
                var("c"),
            ])
        );
        // a | b ^ c  ==  (a | b) ^ c (equal precedence, left-associative)
        assert_eq!(
            parse("a | b ^ c").unwrap(),
            RuleExpr::Xor(
                Box::new(RuleExpr::Or(vec![var("a"), var("b")])),
                Box::new(var("c"))
            )
        );
    }

    #[test]
    fn parentheses_override_precedence_and_are_kept() {
        assert_eq!(
            parse("a & (b | c)").unwrap(),
            RuleExpr::And(vec![var("a"), RuleExpr::Or(vec![var("b"), var("c")])])
        );
        // grouping survives even when semantically redundant
        assert_eq!(
            parse("a & (b & c)").unwrap(),
            RuleExpr::And(vec![var("a"), RuleExpr::And(vec![var("b"), var("c")])])
        );
    }

    #[test]
    fn double_negation_parses_verbatim() {
        assert_eq!(
            parse("~~m1").unwrap(),
            RuleExpr::Not(Box::new(RuleExpr::Not(Box::new(var("m1")))))
        );
    }

    #[test]
    fn customized_rule_shape() {
        assert_eq!(
            parse("(~(m1 & m2)) & (m2 | m3)").unwrap(),
            RuleExpr::And(vec![
                RuleExpr::Not(Box::new(RuleExpr::And(vec![var("m1"), var("m2")]))),
                RuleExpr::Or(vec![var("m2"), var("m3")]),
            ])
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("m1 &") {
            Err(Error::RuleSyntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("(m1 | m2") {
            Err(Error::RuleSyntax { position, message }) => {
                assert_eq!(position, 8);
                assert!(message.contains("expected `)`"), "{message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("m1 m2") {
            Err(Error::RuleSyntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("m1 + m2") {
            Err(Error::RuleSyntax { position, message }) => {
                assert_eq!(position, 3);
                assert!(message.contains("unexpected character"), "{message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse("").is_err());
        assert!(parse("()").is_err());
    }
}
