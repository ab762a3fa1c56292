//! Parser for the family expression language.
//!
//! ```text
//! expr    := and ("or" and)*
//! and     := primary ("and" primary)*
//! primary := "(" expr ")" | "S" | "C" | "M" | "ALL"
//!          | "forb" "(" [graph ("," graph)*] ")"
//!          | "bforb" "(" graph "," int ")"
//!          | "H" "(" int "," int ")"
//!          | "P" "(" expr ("," expr)* ")"
//!          | "iota" "(" graph ")" | "apex" "(" expr ")" | "co" "(" expr ")"
//!          | "du" "(" expr "," expr ")" | "join" "(" expr "," expr ")"
//! graph   := name | "g6:" graph6
//! ```

use crate::error::{Error, Result};
use crate::family::expr::{named_graph, FamilyExpr};
use crate::graph::{Bigraph, Graph};
use crate::graph6;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Word(String),
    Int(usize),
    G6(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::G6(s) => format!("`g6:{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            _ if text[i..].starts_with("g6:") => {
                i += 3;
                let body = i;
                while i < bytes.len() && (63..=126).contains(&bytes[i]) {
                    i += 1;
                }
                out.push((Tok::G6(text[body..i].to_string()), start));
                continue;
            }
            _ if c.is_ascii_alphanumeric() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = if word.bytes().all(|b| b.is_ascii_digit()) {
                    Tok::Int(word.parse().map_err(|_| Error::Parse {
                        pos: start,
                        expected: "an integer that fits in a machine word".into(),
                        found: format!("`{word}`"),
                    })?)
                } else {
                    Tok::Word(word.to_string())
                };
                out.push((tok, start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    pos: start,
                    expected: "a name, integer, `(`, `)` or `,`".into(),
                    found: format!("`{ch}`"),
                });
            }
        }
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn expr(&mut self) -> Result<FamilyExpr> {
        let mut lhs = self.conjunction()?;
        while self.is_word("or") {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = FamilyExpr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<FamilyExpr> {
        let mut lhs = self.primary()?;
        while self.is_word("and") {
            self.bump();
            let rhs = self.primary()?;
            lhs = FamilyExpr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn int(&mut self) -> Result<usize> {
        match self.peek() {
            Tok::Int(i) => {
                let i = *i;
                self.bump();
                Ok(i)
            }
            _ => self.fail("an integer"),
        }
    }

    fn graph(&mut self) -> Result<Graph> {
        match self.peek().clone() {
            Tok::G6(s) => {
                let pos = self.pos();
                self.bump();
                graph6::decode(&s).map_err(|e| Error::Parse {
                    pos,
                    expected: "a valid graph6 string".into(),
                    found: e.to_string(),
                })
            }
            Tok::Word(w) => {
                let pos = self.pos();
                self.bump();
                named_graph(&w).ok_or(Error::UnknownName { name: w, pos })
            }
            _ => self.fail("a graph name or `g6:` literal"),
        }
    }

    fn primary(&mut self) -> Result<FamilyExpr> {
        let (tok, pos) = match self.peek() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::Word(_) => self.bump(),
            _ => return self.fail("a family expression"),
        };
        let Tok::Word(word) = tok else { unreachable!() };
        let simple = match word.as_str() {
            "S" => Some(FamilyExpr::Edgeless),
            "C" => Some(FamilyExpr::Complete),
            "M" => Some(FamilyExpr::Matchings),
            "ALL" => Some(FamilyExpr::All),
            _ => None,
        };
        if let Some(e) = simple {
            return Ok(e);
        }
        if !matches!(word.as_str(), "forb" | "bforb" | "H" | "P" | "iota" | "apex" | "co" | "du" | "join") {
            return Err(Error::UnknownName { name: word, pos });
        }
        self.expect(Tok::LParen)?;
        let e = match word.as_str() {
            "forb" => {
                let mut gs = Vec::new();
                if *self.peek() != Tok::RParen {
                    gs.push(self.graph()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        gs.push(self.graph()?);
                    }
                }
                FamilyExpr::Forb(gs)
            }
            "bforb" => {
                let g = self.graph()?;
                self.expect(Tok::Comma)?;
                let at = self.pos();
                let a = self.int()?;
                let j = Bigraph::from_graph(&g, a).map_err(|e| Error::Parse {
                    pos: at,
                    expected: "a left-side size within the graph".into(),
                    found: e.to_string(),
                })?;
                FamilyExpr::ForbBigraph(j)
            }
            "H" => {
                let s = self.int()?;
                self.expect(Tok::Comma)?;
                let t = self.int()?;
                FamilyExpr::hst(s, t)
            }
            "P" => {
                let mut fs = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    fs.push(self.expr()?);
                }
                FamilyExpr::Partition(fs)
            }
            "iota" => FamilyExpr::Iota(self.graph()?),
            "apex" => {
                let inner = self.expr()?;
                FamilyExpr::apex(inner).map_err(|_| Error::Parse {
                    pos,
                    expected: "an apex-free argument".into(),
                    found: "a nested `apex`".into(),
                })?
            }
            "co" => FamilyExpr::complement(self.expr()?),
            _ => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                if word == "du" {
                    FamilyExpr::disjoint_union(a, b)
                } else {
                    FamilyExpr::join(a, b)
                }
            }
        };
        self.expect(Tok::RParen)?;
        Ok(e)
    }
}

/// Parses a family expression.
pub fn parse_family(text: &str) -> Result<FamilyExpr> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.fail("`and`, `or` or end of input");
    }
    Ok(e)
}

impl std::str::FromStr for FamilyExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_family(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_family("forb(K3)").unwrap(), FamilyExpr::Forb(vec![Graph::complete(3).unwrap()]));
        assert_eq!(
            parse_family("P(M, C)").unwrap(),
            FamilyExpr::Partition(vec![FamilyExpr::Matchings, FamilyExpr::Complete])
        );
        assert_eq!(parse_family("H(2,1)").unwrap(), FamilyExpr::hst(2, 1));
    }

    #[test]
    fn precedence_and_round_trip() {
        let e = parse_family("S or C and M or ALL").unwrap();
        let expect = FamilyExpr::or(
            FamilyExpr::or(FamilyExpr::Edgeless, FamilyExpr::and(FamilyExpr::Complete, FamilyExpr::Matchings)),
            FamilyExpr::All,
        );
        assert_eq!(e, expect);
        for text in [
            "forb(K3, C5, 2K2, g6:DQc)",
            "S and (C or M)",
            "S or (C or M)",
            "co(apex(C)) and P(M, du(C, C), join(S, iota(P4)))",
            "bforb(K22, 2)",
            "forb()",
        ] {
            let e = parse_family(text).unwrap();
            assert_eq!(parse_family(&e.to_string()).unwrap(), e, "{text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_family("forb(K3,)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
        match parse_family("forb(Q9)") {
            Err(Error::UnknownName { name, pos }) => {
                assert_eq!(name, "Q9");
                assert_eq!(pos, 5);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_family("Z"), Err(Error::UnknownName { .. })));
        assert!(matches!(parse_family("S S"), Err(Error::Parse { .. })));
        assert!(matches!(parse_family("apex(apex(C))"), Err(Error::Parse { .. })));
        assert!(matches!(parse_family("H(1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_family("S $"), Err(Error::Parse { pos: 2, .. })));
    }
}
