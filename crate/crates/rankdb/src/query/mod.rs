//! Query language over named ranked data tables.
//!
//! The concrete syntax is prefix-style and whitespace-insensitive:
//!
//! ```text
//! expr     := table | unary | binary | select | project | "(" expr ")" ;
//! table    := IDENT ;
//! unary    := "shift" DEGREE expr ;
//! project  := "project" "[" IDENT ("," IDENT)* "]" expr ;
//! binary   := ("union" | "meet" | "otimes" | "residuum" | "cross") "(" expr "," expr ")"
//!           | "join" "(" expr "," expr ")" "on" IDENT "~" IDENT ;
//! select   := ("select" | "selectc") expr "where" IDENT "~" (LITERAL | IDENT) ;
//! DEGREE   := decimal numeral in [0,1] ;
//! LITERAL  := single-quoted string or decimal numeral ;
//! ```
//!
//! `select … where A ~ B` with two identifiers is attribute–attribute
//! selection; `selectc` is the similarity-closure variant and requires a
//! literal. Parenthesized expressions are grouping only and do not appear
//! in the tree, so printing an expression and reparsing it gives back an
//! equal tree.

mod bound;
mod eval;
mod parser;

pub use bound::{propagate_bound, verify_bound, SensitivityBound, TraceEntry, VerifyReport};
pub use eval::{evaluate, EvalContext};
pub use parser::parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::decimal::Decimal;
use crate::lattice::LatticeError;
use crate::rdt::{OpError, OpErrorKind};
use crate::schema::{AttrName, Domains, RelationScheme, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("in {node}: {source}")]
    Op { node: String, source: OpError },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl QueryError {
    fn op(node: &QueryExpr, source: OpError) -> Self {
        QueryError::Op {
            node: node.label(),
            source,
        }
    }
}

/// A literal in select conditions: quoted text or a decimal numeral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Text(String),
    Num(Decimal),
}

impl Literal {
    pub fn to_value(&self) -> Value {
        match self {
            Literal::Text(s) => Value::Text(s.clone()),
            Literal::Num(d) => Value::Num(*d),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Text(s) => write!(f, "'{s}'"),
            Literal::Num(d) => write!(f, "{d}"),
        }
    }
}

/// Abstract syntax of a query.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryExpr {
    Table(String),
    Union(Box<QueryExpr>, Box<QueryExpr>),
    Meet(Box<QueryExpr>, Box<QueryExpr>),
    OTimes(Box<QueryExpr>, Box<QueryExpr>),
    Residuum(Box<QueryExpr>, Box<QueryExpr>),
    Cross(Box<QueryExpr>, Box<QueryExpr>),
    Join {
        left: Box<QueryExpr>,
        right: Box<QueryExpr>,
        p: AttrName,
        q: AttrName,
    },
    Shift {
        degree: Decimal,
        expr: Box<QueryExpr>,
    },
    Project {
        attrs: Vec<AttrName>,
        expr: Box<QueryExpr>,
    },
    SelectVal {
        expr: Box<QueryExpr>,
        attr: AttrName,
        value: Literal,
    },
    SelectAttr {
        expr: Box<QueryExpr>,
        p: AttrName,
        q: AttrName,
    },
    SelectClosure {
        expr: Box<QueryExpr>,
        attr: AttrName,
        value: Literal,
    },
}

impl QueryExpr {
    /// Short node description for error messages and bound traces.
    pub fn label(&self) -> String {
        match self {
            QueryExpr::Table(n) => format!("table {n}"),
            QueryExpr::Union(..) => "union".to_string(),
            QueryExpr::Meet(..) => "meet".to_string(),
            QueryExpr::OTimes(..) => "otimes".to_string(),
            QueryExpr::Residuum(..) => "residuum".to_string(),
            QueryExpr::Cross(..) => "cross".to_string(),
            QueryExpr::Join { p, q, .. } => format!("join on {p} ~ {q}"),
            QueryExpr::Shift { degree, .. } => format!("shift {degree}"),
            QueryExpr::Project { attrs, .. } => {
                let names: Vec<&str> = attrs.iter().map(|a| a.as_str()).collect();
                format!("project [{}]", names.join(", "))
            }
            QueryExpr::SelectVal { attr, value, .. } => format!("select {attr} ~ {value}"),
            QueryExpr::SelectAttr { p, q, .. } => format!("select {p} ~ {q}"),
            QueryExpr::SelectClosure { attr, value, .. } => {
                format!("selectc {attr} ~ {value}")
            }
        }
    }

    /// Table names referenced by the expression, in first-occurrence order.
    pub fn table_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            QueryExpr::Table(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            QueryExpr::Union(a, b)
            | QueryExpr::Meet(a, b)
            | QueryExpr::OTimes(a, b)
            | QueryExpr::Residuum(a, b)
            | QueryExpr::Cross(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            QueryExpr::Join { left, right, .. } => {
                left.collect_refs(out);
                right.collect_refs(out);
            }
            QueryExpr::Shift { expr, .. }
            | QueryExpr::Project { expr, .. }
            | QueryExpr::SelectVal { expr, .. }
            | QueryExpr::SelectAttr { expr, .. }
            | QueryExpr::SelectClosure { expr, .. } => expr.collect_refs(out),
        }
    }

    /// True when the plan contains a closure selection, whose sensitivity
    /// guarantee is stated for the tuple-based measure only.
    pub fn has_closure_select(&self) -> bool {
        match self {
            QueryExpr::SelectClosure { .. } => true,
            QueryExpr::Table(_) => false,
            QueryExpr::Union(a, b)
            | QueryExpr::Meet(a, b)
            | QueryExpr::OTimes(a, b)
            | QueryExpr::Residuum(a, b)
            | QueryExpr::Cross(a, b) => a.has_closure_select() || b.has_closure_select(),
            QueryExpr::Join { left, right, .. } => {
                left.has_closure_select() || right.has_closure_select()
            }
            QueryExpr::Shift { expr, .. }
            | QueryExpr::Project { expr, .. }
            | QueryExpr::SelectVal { expr, .. }
            | QueryExpr::SelectAttr { expr, .. } => expr.has_closure_select(),
        }
    }

    /// Derives the result scheme, checking the structural preconditions the
    /// evaluator would enforce (scheme equality, disjointness, membership).
    pub fn derive_scheme(
        &self,
        schemes: &BTreeMap<String, RelationScheme>,
        domains: &Domains,
    ) -> Result<RelationScheme, QueryError> {
        match self {
            QueryExpr::Table(n) => schemes
                .get(n)
                .cloned()
                .ok_or_else(|| QueryError::UnknownTable(n.clone())),
            QueryExpr::Union(a, b)
            | QueryExpr::Meet(a, b)
            | QueryExpr::OTimes(a, b)
            | QueryExpr::Residuum(a, b) => {
                let sa = a.derive_scheme(schemes, domains)?;
                let sb = b.derive_scheme(schemes, domains)?;
                if sa != sb {
                    return Err(QueryError::op(
                        self,
                        OpError::new(
                            OpErrorKind::SchemeMismatch,
                            format!("schemes differ: {{{sa}}} vs {{{sb}}}"),
                        ),
                    ));
                }
                Ok(sa)
            }
            QueryExpr::Cross(a, b) => {
                let sa = a.derive_scheme(schemes, domains)?;
                let sb = b.derive_scheme(schemes, domains)?;
                if !sa.is_disjoint(&sb) {
                    return Err(QueryError::op(
                        self,
                        OpError::new(
                            OpErrorKind::SchemesNotDisjoint,
                            format!("schemes {{{sa}}} and {{{sb}}} overlap"),
                        ),
                    ));
                }
                Ok(sa.union(&sb))
            }
            QueryExpr::Join { left, right, p, q } => {
                let sa = left.derive_scheme(schemes, domains)?;
                let sb = right.derive_scheme(schemes, domains)?;
                if !sa.is_disjoint(&sb) {
                    return Err(QueryError::op(
                        self,
                        OpError::new(
                            OpErrorKind::SchemesNotDisjoint,
                            format!("schemes {{{sa}}} and {{{sb}}} overlap"),
                        ),
                    ));
                }
                for (attr, side) in [(p, &sa), (q, &sb)] {
                    if !side.contains(attr) {
                        return Err(QueryError::op(
                            self,
                            OpError::new(
                                OpErrorKind::AttributeNotInScheme,
                                format!("join attribute {attr} is not in scheme {{{side}}}"),
                            ),
                        ));
                    }
                }
                self.check_shared_domain(domains, p, q)?;
                Ok(sa.union(&sb))
            }
            QueryExpr::Shift { expr, .. } => expr.derive_scheme(schemes, domains),
            QueryExpr::Project { attrs, expr } => {
                let s = expr.derive_scheme(schemes, domains)?;
                for a in attrs {
                    if !s.contains(a) {
                        return Err(QueryError::op(
                            self,
                            OpError::new(
                                OpErrorKind::AttributeNotInScheme,
                                format!("projection attribute {a} is not in scheme {{{s}}}"),
                            ),
                        ));
                    }
                }
                Ok(RelationScheme::new(attrs.iter().cloned()))
            }
            QueryExpr::SelectVal { expr, attr, .. }
            | QueryExpr::SelectClosure { expr, attr, .. } => {
                let s = expr.derive_scheme(schemes, domains)?;
                if !s.contains(attr) {
                    return Err(QueryError::op(
                        self,
                        OpError::new(
                            OpErrorKind::AttributeNotInScheme,
                            format!("selection attribute {attr} is not in scheme {{{s}}}"),
                        ),
                    ));
                }
                Ok(s)
            }
            QueryExpr::SelectAttr { expr, p, q } => {
                let s = expr.derive_scheme(schemes, domains)?;
                for attr in [p, q] {
                    if !s.contains(attr) {
                        return Err(QueryError::op(
                            self,
                            OpError::new(
                                OpErrorKind::AttributeNotInScheme,
                                format!("selection attribute {attr} is not in scheme {{{s}}}"),
                            ),
                        ));
                    }
                }
                self.check_shared_domain(domains, p, q)?;
                Ok(s)
            }
        }
    }

    fn check_shared_domain(
        &self,
        domains: &Domains,
        p: &AttrName,
        q: &AttrName,
    ) -> Result<(), QueryError> {
        let shared = domains
            .share_domain(p, q)
            .map_err(|e| QueryError::op(self, e.into()))?;
        if shared {
            Ok(())
        } else {
            Err(QueryError::op(
                self,
                OpError::new(
                    OpErrorKind::MissingSimilarity,
                    format!("attributes {p} and {q} have different domains"),
                ),
            ))
        }
    }
}

impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryExpr::Table(n) => f.write_str(n),
            QueryExpr::Union(a, b) => write!(f, "union({a}, {b})"),
            QueryExpr::Meet(a, b) => write!(f, "meet({a}, {b})"),
            QueryExpr::OTimes(a, b) => write!(f, "otimes({a}, {b})"),
            QueryExpr::Residuum(a, b) => write!(f, "residuum({a}, {b})"),
            QueryExpr::Cross(a, b) => write!(f, "cross({a}, {b})"),
            QueryExpr::Join { left, right, p, q } => {
                write!(f, "join({left}, {right}) on {p} ~ {q}")
            }
            QueryExpr::Shift { degree, expr } => write!(f, "shift {degree} {expr}"),
            QueryExpr::Project { attrs, expr } => {
                let names: Vec<&str> = attrs.iter().map(|a| a.as_str()).collect();
                write!(f, "project [{}] {expr}", names.join(", "))
            }
            QueryExpr::SelectVal { expr, attr, value } => {
                write!(f, "select {expr} where {attr} ~ {value}")
            }
            QueryExpr::SelectAttr { expr, p, q } => {
                write!(f, "select {expr} where {p} ~ {q}")
            }
            QueryExpr::SelectClosure { expr, attr, value } => {
                write!(f, "selectc {expr} where {attr} ~ {value}")
            }
        }
    }
}
