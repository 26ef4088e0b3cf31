//! Hand-rolled lexer and recursive-descent parser for the query grammar.

use crate::decimal::Decimal;
use crate::schema::AttrName;

use super::{Literal, QueryError, QueryExpr};

const KEYWORDS: &[&str] = &[
    "shift", "project", "union", "meet", "otimes", "residuum", "cross", "join", "on", "select",
    "selectc", "where",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Keyword(&'static str),
    Number(Decimal),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Tilde,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Keyword(k) => format!("keyword {k:?}"),
            Tok::Number(d) => format!("number {d}"),
            Tok::Str(s) => format!("string '{s}'"),
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::LBracket => "'['".to_string(),
            Tok::RBracket => "']'".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Tilde => "'~'".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> QueryError {
    QueryError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, QueryError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '[' => {
                bump(&mut chars);
                Tok::LBracket
            }
            ']' => {
                bump(&mut chars);
                Tok::RBracket
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            '~' => {
                bump(&mut chars);
                Tok::Tilde
            }
            '\'' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        Some('\'') => {
                            bump(&mut chars);
                            break;
                        }
                        Some('\n') | None => {
                            return Err(syntax(tline, tcol, "unterminated string literal"))
                        }
                        Some(_) => s.push(bump(&mut chars)),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut s = String::new();
                s.push(bump(&mut chars));
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '.' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let d: Decimal = s
                    .parse()
                    .map_err(|e| syntax(tline, tcol, format!("bad number {s:?}: {e}")))?;
                Tok::Number(d)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                s.push(bump(&mut chars));
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                match KEYWORDS.iter().find(|k| **k == s) {
                    Some(k) => Tok::Keyword(k),
                    None => Tok::Ident(s),
                }
            }
            other => {
                return Err(syntax(tline, tcol, format!("unexpected character {other:?}")));
            }
        };
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn next(&mut self, what: &str) -> Result<Spanned, QueryError> {
        let (line, col) = self.here();
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(line, col, format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), QueryError> {
        let t = self.next(what)?;
        if t.tok == tok {
            Ok(())
        } else {
            Err(syntax(
                t.line,
                t.col,
                format!("expected {what}, found {}", t.tok.describe()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<AttrName, QueryError> {
        let t = self.next(what)?;
        match t.tok {
            Tok::Ident(s) => {
                AttrName::new(&s).map_err(|e| syntax(t.line, t.col, e.to_string()))
            }
            other => Err(syntax(
                t.line,
                t.col,
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    fn expr(&mut self) -> Result<QueryExpr, QueryError> {
        let t = self.next("expression")?;
        match t.tok {
            Tok::Ident(name) => Ok(QueryExpr::Table(name)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Keyword("shift") => {
                let d = self.degree()?;
                let e = self.expr()?;
                Ok(QueryExpr::Shift {
                    degree: d,
                    expr: Box::new(e),
                })
            }
            Tok::Keyword("project") => {
                self.expect(Tok::LBracket, "'['")?;
                let mut attrs = vec![self.ident("attribute name")?];
                loop {
                    let t = self.next("',' or ']'")?;
                    match t.tok {
                        Tok::Comma => attrs.push(self.ident("attribute name")?),
                        Tok::RBracket => break,
                        other => {
                            return Err(syntax(
                                t.line,
                                t.col,
                                format!("expected ',' or ']', found {}", other.describe()),
                            ))
                        }
                    }
                }
                let e = self.expr()?;
                Ok(QueryExpr::Project {
                    attrs,
                    expr: Box::new(e),
                })
            }
            Tok::Keyword(kw @ ("union" | "meet" | "otimes" | "residuum" | "cross")) => {
                let (a, b) = self.pair()?;
                let (a, b) = (Box::new(a), Box::new(b));
                Ok(match kw {
                    "union" => QueryExpr::Union(a, b),
                    "meet" => QueryExpr::Meet(a, b),
                    "otimes" => QueryExpr::OTimes(a, b),
                    "residuum" => QueryExpr::Residuum(a, b),
                    _ => QueryExpr::Cross(a, b),
                })
            }
            Tok::Keyword("join") => {
                let (a, b) = self.pair()?;
                self.expect(Tok::Keyword("on"), "'on'")?;
                let p = self.ident("join attribute")?;
                self.expect(Tok::Tilde, "'~'")?;
                let q = self.ident("join attribute")?;
                Ok(QueryExpr::Join {
                    left: Box::new(a),
                    right: Box::new(b),
                    p,
                    q,
                })
            }
            Tok::Keyword(kw @ ("select" | "selectc")) => {
                let e = self.expr()?;
                self.expect(Tok::Keyword("where"), "'where'")?;
                let attr = self.ident("attribute name")?;
                self.expect(Tok::Tilde, "'~'")?;
                let rhs = self.next("literal or attribute name")?;
                match (kw, rhs.tok) {
                    ("select", Tok::Ident(q)) => {
                        let q = AttrName::new(&q)
                            .map_err(|e| syntax(rhs.line, rhs.col, e.to_string()))?;
                        Ok(QueryExpr::SelectAttr {
                            expr: Box::new(e),
                            p: attr,
                            q,
                        })
                    }
                    ("selectc", Tok::Ident(_)) => Err(syntax(
                        rhs.line,
                        rhs.col,
                        "closure selection compares against a literal, not an attribute",
                    )),
                    (_, Tok::Str(s)) => Ok(self.make_select(kw, e, attr, Literal::Text(s))),
                    (_, Tok::Number(d)) => Ok(self.make_select(kw, e, attr, Literal::Num(d))),
                    (_, other) => Err(syntax(
                        rhs.line,
                        rhs.col,
                        format!(
                            "expected literal or attribute name, found {}",
                            other.describe()
                        ),
                    )),
                }
            }
            other => Err(syntax(
                t.line,
                t.col,
                format!("expected expression, found {}", other.describe()),
            )),
        }
    }

    fn make_select(
        &self,
        kw: &str,
        expr: QueryExpr,
        attr: AttrName,
        value: Literal,
    ) -> QueryExpr {
        let expr = Box::new(expr);
        if kw == "selectc" {
            QueryExpr::SelectClosure { expr, attr, value }
        } else {
            QueryExpr::SelectVal { expr, attr, value }
        }
    }

    fn pair(&mut self) -> Result<(QueryExpr, QueryExpr), QueryError> {
        self.expect(Tok::LParen, "'('")?;
        let a = self.expr()?;
        self.expect(Tok::Comma, "','")?;
        let b = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok((a, b))
    }

    fn degree(&mut self) -> Result<Decimal, QueryError> {
        let t = self.next("degree literal")?;
        match t.tok {
            Tok::Number(d) => {
                if d.is_negative() || d > Decimal::one() {
                    Err(syntax(
                        t.line,
                        t.col,
                        format!("degree literal {d} out of [0, 1]"),
                    ))
                } else {
                    Ok(d)
                }
            }
            other => Err(syntax(
                t.line,
                t.col,
                format!("expected degree literal, found {}", other.describe()),
            )),
        }
    }
}

/// Parses a query. Chain-lattice exactness of degree literals is checked at
/// evaluation time, when the lattice is known.
pub fn parse(text: &str) -> Result<QueryExpr, QueryError> {
    let toks = lex(text)?;
    let end = text.lines().count().max(1);
    let end = (end, text.lines().last().map(|l| l.len() + 1).unwrap_or(1));
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(syntax(
            t.line,
            t.col,
            format!("unexpected {} after complete query", t.tok.describe()),
        ));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attr(s: &str) -> AttrName {
        AttrName::new(s).unwrap()
    }

    #[test]
    fn parses_spec_examples() {
        assert_eq!(
            parse("project [LOCATION] houses").unwrap(),
            QueryExpr::Project {
                attrs: vec![attr("LOCATION")],
                expr: Box::new(QueryExpr::Table("houses".into())),
            }
        );

        let j = parse("join (houses, customers) on PRICE ~ BUDGET").unwrap();
        assert_eq!(
            j,
            QueryExpr::Join {
                left: Box::new(QueryExpr::Table("houses".into())),
                right: Box::new(QueryExpr::Table("customers".into())),
                p: attr("PRICE"),
                q: attr("BUDGET"),
            }
        );

        // parenthesized grouping dissolves
        let nested = parse("project [AGENT, NAME] (join (houses, customers) on PRICE ~ BUDGET)")
            .unwrap();
        match nested {
            QueryExpr::Project { attrs, expr } => {
                assert_eq!(attrs, vec![attr("AGENT"), attr("NAME")]);
                assert_eq!(*expr, j);
            }
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn degree_literals_are_range_checked() {
        assert!(parse("shift 0.8 houses").is_ok());
        assert!(parse("shift 1 houses").is_ok());
        assert!(parse("shift 0 houses").is_ok());
        let err = parse("shift 1.5 houses").unwrap_err();
        match err {
            QueryError::Syntax { line, col, message } => {
                assert_eq!((line, col), (1, 7));
                assert!(message.contains("out of [0, 1]"), "{message}");
            }
            other => panic!("unexpected error: {other:?}"),
        }
        assert!(parse("shift -0.1 houses").is_err());
    }

    #[test]
    fn select_variants() {
        let v = parse("select houses where LOCATION ~ 'Vestal'").unwrap();
        assert!(matches!(v, QueryExpr::SelectVal { .. }));

        let n = parse("select houses where PRICE ~ 228500").unwrap();
        match n {
            QueryExpr::SelectVal { value, .. } => {
                assert_eq!(value, Literal::Num("228500".parse().unwrap()))
            }
            other => panic!("unexpected parse: {other:?}"),
        }

        let a = parse("select t where A ~ B").unwrap();
        assert!(matches!(a, QueryExpr::SelectAttr { .. }));

        let c = parse("selectc houses where LOCATION ~ 'Vestal'").unwrap();
        assert!(matches!(c, QueryExpr::SelectClosure { .. }));

        // the closure variant never takes an attribute on the right
        assert!(parse("selectc t where A ~ B").is_err());
    }

    #[test]
    fn keywords_are_reserved() {
        assert!(parse("select").is_err());
        assert!(parse("union (select, t)").is_err());
        // keyword as bare table name fails
        assert!(parse("where").is_err());
    }

    #[test]
    fn error_positions_are_line_and_column() {
        let err = parse("union (a,\n  !b)").unwrap_err();
        match err {
            QueryError::Syntax { line, col, .. } => assert_eq!((line, col), (2, 3)),
            other => panic!("unexpected error: {other:?}"),
        }

        let err = parse("union (a, b) extra").unwrap_err();
        match err {
            QueryError::Syntax { message, .. } => {
                assert!(message.contains("after complete query"), "{message}")
            }
            other => panic!("unexpected error: {other:?}"),
        }

        let err = parse("union (a").unwrap_err();
        match err {
            QueryError::Syntax { message, .. } => {
                assert!(message.contains("end of input"), "{message}")
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn strings_must_terminate() {
        assert!(parse("select t where A ~ 'oops").is_err());
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse("union(x,y)").unwrap();
        let b = parse("  union ( x ,\n\t y ) ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn print_parse_round_trip() {
        let corpus = [
            "houses",
            "union (a, b)",
            "meet (a, union (b, c))",
            "otimes (a, b)",
            "residuum (a, b)",
            "cross (a, b)",
            "join (a, b) on P ~ Q",
            "shift 0.8 a",
            "shift 0 shift 1 a",
            "project [A] a",
            "project [A, B, C] join (a, b) on P ~ Q",
            "select a where Y ~ 'text with spaces'",
            "select a where Y ~ 0.5",
            "select a where P ~ Q",
            "selectc a where Y ~ 'v'",
            "shift 0.25 select cross (a, b) where P ~ Q",
            "project [A] (union ((a), (b)))",
        ];
        for text in corpus {
            let ast = parse(text).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed)
                .unwrap_or_else(|e| panic!("printed form {printed:?} failed to parse: {e}"));
            assert_eq!(reparsed, ast, "round trip failed for {text:?}");
        }
    }
}
