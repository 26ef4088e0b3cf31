//! Sensitivity bounds: how similar must query results be, given how
//! similar the inputs are.
//!
//! Replacing each input table by one similar to it at least to a known
//! degree changes the query result by a bounded amount. The propagator
//! composes one rule per node: combinations and shifts keep similarity at
//! the meet or ⊗ of their inputs' guarantees; projection and selection
//! pass it through unchanged. The residuum rule uses the ⊗ combination,
//! which holds in every residuated lattice and is conservative. Closure
//! selection passes the bound through with the caveat that its guarantee
//! is stated for the tuple-based measure.

use std::collections::BTreeMap;

use crate::lattice::{Degree, Lattice};
use crate::similarity::{table_similarity, ComparisonConfig};

use super::eval::{evaluate, EvalContext};
use super::{QueryError, QueryExpr};

/// One propagation step: which rule fired at a node and what it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub node: String,
    pub rule: String,
    pub inputs: Vec<Degree>,
    pub output: Degree,
}

/// The guaranteed similarity of results, with the per-node derivation.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityBound {
    pub value: Degree,
    pub trace: Vec<TraceEntry>,
    /// Set when the plan contains a closure selection: the guarantee then
    /// holds for the tuple-based similarity measure.
    pub tuple_based_only: bool,
}

/// Composes the per-node preservation rules bottom-up. Tables without an
/// assumption are taken to be unchanged (degree 1).
pub fn propagate_bound(
    e: &QueryExpr,
    lattice: Lattice,
    assumptions: &BTreeMap<String, Degree>,
) -> Result<SensitivityBound, QueryError> {
    for d in assumptions.values() {
        lattice.check_degree(*d)?;
    }
    let mut trace = Vec::new();
    let value = walk(e, lattice, assumptions, &mut trace)?;
    Ok(SensitivityBound {
        value,
        trace,
        tuple_based_only: e.has_closure_select(),
    })
}

fn walk(
    e: &QueryExpr,
    l: Lattice,
    assumptions: &BTreeMap<String, Degree>,
    trace: &mut Vec<TraceEntry>,
) -> Result<Degree, QueryError> {
    let (rule, inputs, output): (&str, Vec<Degree>, Degree) = match e {
        QueryExpr::Table(name) => {
            let b = assumptions.get(name).copied().unwrap_or(l.top());
            ("assumed input similarity", vec![], b)
        }
        QueryExpr::Union(a, b) | QueryExpr::Meet(a, b) => {
            let ba = walk(a, l, assumptions, trace)?;
            let bb = walk(b, l, assumptions, trace)?;
            ("meet of input bounds", vec![ba, bb], l.meet(ba, bb)?)
        }
        QueryExpr::OTimes(a, b) | QueryExpr::Cross(a, b) => {
            let ba = walk(a, l, assumptions, trace)?;
            let bb = walk(b, l, assumptions, trace)?;
            ("product of input bounds", vec![ba, bb], l.tnorm(ba, bb)?)
        }
        QueryExpr::Join { left, right, .. } => {
            let ba = walk(left, l, assumptions, trace)?;
            let bb = walk(right, l, assumptions, trace)?;
            ("product of input bounds", vec![ba, bb], l.tnorm(ba, bb)?)
        }
        QueryExpr::Residuum(a, b) => {
            let ba = walk(a, l, assumptions, trace)?;
            let bb = walk(b, l, assumptions, trace)?;
            (
                "product of input bounds (conservative)",
                vec![ba, bb],
                l.tnorm(ba, bb)?,
            )
        }
        QueryExpr::Shift { expr, .. }
        | QueryExpr::Project { expr, .. }
        | QueryExpr::SelectVal { expr, .. }
        | QueryExpr::SelectAttr { expr, .. } => {
            let b = walk(expr, l, assumptions, trace)?;
            ("bound passes through", vec![b], b)
        }
        QueryExpr::SelectClosure { expr, .. } => {
            let b = walk(expr, l, assumptions, trace)?;
            ("bound passes through (tuple-based measure)", vec![b], b)
        }
    };
    trace.push(TraceEntry {
        node: e.label(),
        rule: rule.to_string(),
        inputs,
        output,
    });
    Ok(output)
}

/// Outcome of checking a propagated bound against two actual catalogs.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub bound: SensitivityBound,
    /// Similarity of the two evaluation results, by the measure named in
    /// `measure`.
    pub actual: Degree,
    pub measure: ComparisonConfig,
    pub holds: bool,
}

impl VerifyReport {
    /// Slack between the observed similarity and the guarantee.
    pub fn slack(&self) -> f64 {
        self.actual.to_f64() - self.bound.value.to_f64()
    }
}

/// Evaluates the expression under both catalogs, measures the similarity
/// of the results, and compares it with the propagated bound. Plans with
/// closure selections are measured tuple-based, all others rank-based.
pub fn verify_bound(
    e: &QueryExpr,
    ctx1: &EvalContext,
    ctx2: &EvalContext,
    assumptions: &BTreeMap<String, Degree>,
) -> Result<VerifyReport, QueryError> {
    let bound = propagate_bound(e, ctx1.lattice, assumptions)?;
    let r1 = evaluate(e, ctx1)?;
    let r2 = evaluate(e, ctx2)?;
    let measure = if bound.tuple_based_only {
        ComparisonConfig::tuple_based()
    } else {
        ComparisonConfig::rank_based()
    };
    let actual = table_similarity(ctx1.domains, &r1, &r2, measure)
        .map_err(|err| QueryError::op(e, err))?;
    let holds = ctx1.lattice.leq(bound.value, actual)?;
    Ok(VerifyReport {
        bound,
        actual,
        measure,
        holds,
    })
}
