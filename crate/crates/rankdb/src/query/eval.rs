//! Structural evaluation of query expressions against named tables.

use std::collections::BTreeMap;

use crate::lattice::Lattice;
use crate::rdt::{CandidateMode, CombineKind, RankedDataTable};
use crate::schema::{Domains, RelationScheme};

use super::{QueryError, QueryExpr};

/// Everything evaluation needs besides the expression itself.
#[derive(Clone, Copy)]
pub struct EvalContext<'a> {
    pub lattice: Lattice,
    pub domains: &'a Domains,
    pub tables: &'a BTreeMap<String, RankedDataTable>,
    /// Candidate range of closure selections.
    pub closure_mode: CandidateMode,
}

impl<'a> EvalContext<'a> {
    pub fn new(
        lattice: Lattice,
        domains: &'a Domains,
        tables: &'a BTreeMap<String, RankedDataTable>,
    ) -> Self {
        EvalContext {
            lattice,
            domains,
            tables,
            closure_mode: CandidateMode::Support,
        }
    }

    pub fn with_closure_mode(mut self, mode: CandidateMode) -> Self {
        self.closure_mode = mode;
        self
    }
}

/// Evaluates the expression by structural recursion over the table
/// operations.
pub fn evaluate(e: &QueryExpr, ctx: &EvalContext) -> Result<RankedDataTable, QueryError> {
    let wrap = |r: Result<RankedDataTable, crate::rdt::OpError>| {
        r.map_err(|err| QueryError::op(e, err))
    };
    match e {
        QueryExpr::Table(name) => ctx
            .tables
            .get(name)
            .cloned()
            .ok_or_else(|| QueryError::UnknownTable(name.clone())),
        QueryExpr::Union(a, b) => {
            let (ta, tb) = (evaluate(a, ctx)?, evaluate(b, ctx)?);
            wrap(ta.combine(CombineKind::Union, &tb))
        }
        QueryExpr::Meet(a, b) => {
            let (ta, tb) = (evaluate(a, ctx)?, evaluate(b, ctx)?);
            wrap(ta.combine(CombineKind::Meet, &tb))
        }
        QueryExpr::OTimes(a, b) => {
            let (ta, tb) = (evaluate(a, ctx)?, evaluate(b, ctx)?);
            wrap(ta.combine(CombineKind::OTimes, &tb))
        }
        QueryExpr::Residuum(a, b) => {
            let (ta, tb) = (evaluate(a, ctx)?, evaluate(b, ctx)?);
            wrap(ta.combine(CombineKind::ResiduumCw, &tb))
        }
        QueryExpr::Cross(a, b) => {
            let (ta, tb) = (evaluate(a, ctx)?, evaluate(b, ctx)?);
            wrap(ta.cartesian(&tb))
        }
        QueryExpr::Join { left, right, p, q } => {
            let (ta, tb) = (evaluate(left, ctx)?, evaluate(right, ctx)?);
            wrap(ta.join_sim(ctx.domains, &tb, p, q))
        }
        QueryExpr::Shift { degree, expr } => {
            let t = evaluate(expr, ctx)?;
            let a = ctx.lattice.degree_from_decimal(degree)?;
            wrap(t.a_shift(a))
        }
        QueryExpr::Project { attrs, expr } => {
            let t = evaluate(expr, ctx)?;
            wrap(t.project(&RelationScheme::new(attrs.iter().cloned())))
        }
        QueryExpr::SelectVal { expr, attr, value } => {
            let t = evaluate(expr, ctx)?;
            wrap(t.select_sim(ctx.domains, attr, &value.to_value()))
        }
        QueryExpr::SelectAttr { expr, p, q } => {
            let t = evaluate(expr, ctx)?;
            wrap(t.select_attr(ctx.domains, p, q))
        }
        QueryExpr::SelectClosure { expr, attr, value } => {
            let t = evaluate(expr, ctx)?;
            wrap(t.select_closure(ctx.domains, attr, &value.to_value(), ctx.closure_mode))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Degree;
    use crate::query::parse;
    use crate::schema::{AttrName, DomainWithSimilarity, SimTable, Tuple, Value, ValueKind};

    fn attr(s: &str) -> AttrName {
        AttrName::new(s).unwrap()
    }

    fn luk() -> Lattice {
        Lattice::lukasiewicz()
    }

    fn d(l: &Lattice, v: f64) -> Degree {
        l.degree(v).unwrap()
    }

    struct Fixture {
        lattice: Lattice,
        domains: Domains,
        tables: BTreeMap<String, RankedDataTable>,
    }

    impl Fixture {
        fn ctx(&self) -> EvalContext<'_> {
            EvalContext::new(self.lattice, &self.domains, &self.tables)
        }
    }

    /// Two small listings and one customer table, mirroring the running
    /// example: CITY with a table similarity, PRICE/BUDGET on one ramp.
    fn fixture() -> Fixture {
        let l = luk();
        let mut domains = Domains::new();
        let mut sim = SimTable::new();
        sim.insert(
            "city",
            &l,
            Value::text("Vestal"),
            Value::text("Endicott"),
            d(&l, 0.7),
        )
        .unwrap();
        domains
            .add_domain(DomainWithSimilarity::table("city", ValueKind::Text, sim))
            .unwrap();
        domains
            .add_domain(DomainWithSimilarity::ramp("money", "100".parse().unwrap()).unwrap())
            .unwrap();
        domains
            .add_domain(DomainWithSimilarity::identity("name", ValueKind::Text))
            .unwrap();
        domains.bind(attr("CITY"), "city").unwrap();
        domains.bind(attr("PRICE"), "money").unwrap();
        domains.bind(attr("BUDGET"), "money").unwrap();
        domains.bind(attr("NAME"), "name").unwrap();

        let houses = RankedDataTable::new(
            l,
            crate::schema::RelationScheme::new([attr("CITY"), attr("PRICE")]),
            [
                (
                    Tuple::new([
                        (attr("CITY"), Value::text("Vestal")),
                        (attr("PRICE"), Value::num("10")),
                    ]),
                    d(&l, 0.9),
                ),
                (
                    Tuple::new([
                        (attr("CITY"), Value::text("Endicott")),
                        (attr("PRICE"), Value::num("30")),
                    ]),
                    d(&l, 0.6),
                ),
            ],
            l.bot(),
        )
        .unwrap();
        let customers = RankedDataTable::new(
            l,
            crate::schema::RelationScheme::new([attr("NAME"), attr("BUDGET")]),
            [(
                Tuple::new([
                    (attr("NAME"), Value::text("Grant")),
                    (attr("BUDGET"), Value::num("40")),
                ]),
                l.top(),
            )],
            l.bot(),
        )
        .unwrap();

        let mut tables = BTreeMap::new();
        tables.insert("houses".to_string(), houses);
        tables.insert("customers".to_string(), customers);
        Fixture {
            lattice: l,
            domains,
            tables,
        }
    }

    #[test]
    fn evaluates_each_node_kind() {
        let fx = fixture();
        let ctx = fx.ctx();
        let run = |q: &str| evaluate(&parse(q).unwrap(), &ctx).unwrap();

        assert_eq!(run("houses"), fx.tables["houses"]);
        assert_eq!(run("union (houses, houses)"), fx.tables["houses"]);
        assert_eq!(run("meet (houses, houses)"), fx.tables["houses"]);

        let o = run("otimes (houses, houses)");
        let vestal = Tuple::new([
            (attr("CITY"), Value::text("Vestal")),
            (attr("PRICE"), Value::num("10")),
        ]);
        assert!((o.rank_of(&vestal).unwrap().to_f64() - 0.8).abs() < 1e-12);

        let r = run("residuum (houses, houses)");
        assert_eq!(r.default_rank(), fx.lattice.top());
        assert_eq!(r.support_size(), 0);

        let s = run("shift 0.8 houses");
        assert_eq!(s.rank_of(&vestal).unwrap().to_f64(), 1.0);

        let p = run("project [CITY] houses");
        assert_eq!(p.support_size(), 2);

        let sel = run("select houses where CITY ~ 'Vestal'");
        assert!((sel
            .rank_of(&Tuple::new([
                (attr("CITY"), Value::text("Endicott")),
                (attr("PRICE"), Value::num("30")),
            ]))
            .unwrap()
            .to_f64()
            - 0.3)
            .abs()
            < 1e-12);

        let j = run("join (houses, customers) on PRICE ~ BUDGET");
        assert_eq!(j.support_size(), 2);
        let c = run("cross (houses, customers)");
        assert_eq!(c.support_size(), 2);
        let sa = run("select cross (houses, customers) where PRICE ~ BUDGET");
        assert_eq!(j, sa);

        let cl = run("selectc houses where CITY ~ 'Vestal'");
        assert_eq!(cl.support_size(), 2);
    }

    #[test]
    fn evaluation_errors_carry_the_node() {
        let fx = fixture();
        let ctx = fx.ctx();
        let err = evaluate(&parse("project [CITY] nowhere").unwrap(), &ctx).unwrap_err();
        assert_eq!(err, QueryError::UnknownTable("nowhere".to_string()));

        let err = evaluate(&parse("union (houses, customers)").unwrap(), &ctx).unwrap_err();
        match err {
            QueryError::Op { node, .. } => assert_eq!(node, "union"),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn chain_lattice_rejects_off_chain_shift_literals() {
        let chain = Lattice::chain(2).unwrap();
        let domains = Domains::new();
        let mut tables = BTreeMap::new();
        tables.insert(
            "t".to_string(),
            RankedDataTable::empty(chain, crate::schema::RelationScheme::new([attr("A")])),
        );
        let ctx = EvalContext::new(chain, &domains, &tables);
        assert!(evaluate(&parse("shift 0.5 t").unwrap(), &ctx).is_ok());
        let err = evaluate(&parse("shift 0.3 t").unwrap(), &ctx).unwrap_err();
        assert!(matches!(err, QueryError::Lattice(_)));
    }

    #[test]
    fn scheme_derivation_agrees_with_evaluation() {
        let fx = fixture();
        let ctx = fx.ctx();
        let schemes: BTreeMap<String, crate::schema::RelationScheme> = fx
            .tables
            .iter()
            .map(|(n, t)| (n.clone(), t.scheme().clone()))
            .collect();
        for q in [
            "houses",
            "union (houses, houses)",
            "project [CITY] houses",
            "join (houses, customers) on PRICE ~ BUDGET",
            "select houses where CITY ~ 'Vestal'",
            "shift 0.5 residuum (houses, houses)",
        ] {
            let e = parse(q).unwrap();
            let derived = e.derive_scheme(&schemes, &fx.domains).unwrap();
            let evaluated = evaluate(&e, &ctx).unwrap();
            assert_eq!(&derived, evaluated.scheme(), "scheme mismatch for {q}");
        }
    }
}
