//! Brute-force reference implementations over fully enumerated universes.
//!
//! `Dense` stores a total rank map over every tuple of its scheme, so each
//! operation can follow its defining formula with no support bookkeeping.
//! `CrispRel` is a plain relation for the two-element case.

use std::collections::{BTreeMap, BTreeSet};

use crate::lattice::{Degree, Hedge, Lattice};
use crate::query::QueryExpr;
use crate::rdt::{CandidateMode, CombineKind, OpError, OpErrorKind, RankedDataTable};
use crate::schema::{
    hedged_tuple_similarity, AttrName, Domains, RelationScheme, Tuple, Value,
};

/// A total rank assignment over the enumerated universe of a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    lattice: Lattice,
    scheme: RelationScheme,
    map: BTreeMap<Tuple, Degree>,
}

fn enumerate(domains: &Domains, scheme: &RelationScheme) -> Result<Vec<Tuple>, OpError> {
    domains.enumerate_tuples(scheme).ok_or_else(|| {
        OpError::new(
            OpErrorKind::NotEnumerable,
            format!("the oracle needs finitely enumerable domains for {{{scheme}}}"),
        )
    })
}

/// Total rank map of a table, defaults folded in.
pub fn dense_of(table: &RankedDataTable, domains: &Domains) -> Result<Dense, OpError> {
    let mut map = BTreeMap::new();
    for t in enumerate(domains, table.scheme())? {
        let r = table.rank_of(&t)?;
        map.insert(t, r);
    }
    Ok(Dense {
        lattice: table.lattice(),
        scheme: table.scheme().clone(),
        map,
    })
}

impl Dense {
    pub fn scheme(&self) -> &RelationScheme {
        &self.scheme
    }

    pub fn rank(&self, t: &Tuple) -> Degree {
        self.map
            .get(t)
            .copied()
            .expect("dense maps are total over their universe")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, Degree)> {
        self.map.iter().map(|(t, r)| (t, *r))
    }

    fn same_shape(&self, other: &Dense) -> Result<(), OpError> {
        if self.lattice != other.lattice {
            return Err(OpError::new(
                OpErrorKind::LatticeMismatch,
                "oracle operands use different lattices",
            ));
        }
        if self.scheme != other.scheme {
            return Err(OpError::new(
                OpErrorKind::SchemeMismatch,
                format!("oracle operands over {{{}}} and {{{}}}", self.scheme, other.scheme),
            ));
        }
        Ok(())
    }

    pub fn combine(&self, kind: CombineKind, other: &Dense) -> Result<Dense, OpError> {
        self.same_shape(other)?;
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for (t, a) in self.iter() {
            let b = other.rank(t);
            let r = match kind {
                CombineKind::Union => l.join(a, b)?,
                CombineKind::Meet => l.meet(a, b)?,
                CombineKind::OTimes => l.tnorm(a, b)?,
                CombineKind::ResiduumCw => l.residuum(a, b)?,
            };
            map.insert(t.clone(), r);
        }
        Ok(Dense {
            lattice: l,
            scheme: self.scheme.clone(),
            map,
        })
    }

    pub fn shift(&self, a: Degree) -> Result<Dense, OpError> {
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for (t, r) in self.iter() {
            map.insert(t.clone(), l.residuum(a, r)?);
        }
        Ok(Dense {
            lattice: l,
            scheme: self.scheme.clone(),
            map,
        })
    }

    pub fn project(&self, domains: &Domains, target: &RelationScheme) -> Result<Dense, OpError> {
        if !target.is_subset(&self.scheme) {
            return Err(OpError::new(
                OpErrorKind::AttributeNotInScheme,
                format!("{{{target}}} is not contained in {{{}}}", self.scheme),
            ));
        }
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for s in enumerate(domains, target)? {
            let mut sup = l.bot();
            for (t, r) in self.iter() {
                if t.restrict(target) == s {
                    sup = l.join(sup, r)?;
                }
            }
            map.insert(s, sup);
        }
        Ok(Dense {
            lattice: l,
            scheme: target.clone(),
            map,
        })
    }

    pub fn select_sim(&self, domains: &Domains, y: &AttrName, d: &Value) -> Result<Dense, OpError> {
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for (t, r) in self.iter() {
            let v = t.get(y).ok_or_else(|| {
                OpError::new(
                    OpErrorKind::AttributeNotInScheme,
                    format!("attribute {y} is not in scheme {{{}}}", self.scheme),
                )
            })?;
            let s = domains.similarity(&l, y, v, d)?;
            map.insert(t.clone(), l.tnorm(r, s)?);
        }
        Ok(Dense {
            lattice: l,
            scheme: self.scheme.clone(),
            map,
        })
    }

    pub fn select_attr(
        &self,
        domains: &Domains,
        p: &AttrName,
        q: &AttrName,
    ) -> Result<Dense, OpError> {
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for (t, r) in self.iter() {
            let (u, v) = match (t.get(p), t.get(q)) {
                (Some(u), Some(v)) => (u, v),
                _ => {
                    return Err(OpError::new(
                        OpErrorKind::AttributeNotInScheme,
                        format!("{p} and {q} must both be in {{{}}}", self.scheme),
                    ))
                }
            };
            let s = domains.similarity(&l, p, u, v)?;
            map.insert(t.clone(), l.tnorm(r, s)?);
        }
        Ok(Dense {
            lattice: l,
            scheme: self.scheme.clone(),
            map,
        })
    }

    pub fn cross(&self, other: &Dense) -> Result<Dense, OpError> {
        if self.lattice != other.lattice {
            return Err(OpError::new(
                OpErrorKind::LatticeMismatch,
                "oracle operands use different lattices",
            ));
        }
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for (t1, r1) in self.iter() {
            for (t2, r2) in other.iter() {
                map.insert(t1.concat(t2)?, l.tnorm(r1, r2)?);
            }
        }
        Ok(Dense {
            lattice: l,
            scheme: self.scheme.union(&other.scheme),
            map,
        })
    }

    pub fn join(
        &self,
        domains: &Domains,
        other: &Dense,
        p: &AttrName,
        q: &AttrName,
    ) -> Result<Dense, OpError> {
        self.cross(other)?.select_attr(domains, p, q)
    }

    pub fn select_closure(
        &self,
        domains: &Domains,
        y: &AttrName,
        d: &Value,
        mode: CandidateMode,
    ) -> Result<Dense, OpError> {
        let l = self.lattice;
        let mut map = BTreeMap::new();
        for (t, own) in self.iter() {
            let in_candidates = match mode {
                CandidateMode::Full => true,
                CandidateMode::Support => own != l.bot(),
            };
            let rank = if in_candidates {
                let mut sup = l.bot();
                for (t2, r2) in self.iter() {
                    let sim = hedged_tuple_similarity(&l, domains, Hedge::Identity, t2, t)?;
                    sup = l.join(sup, l.tnorm(r2, sim)?)?;
                }
                let v = t.get(y).ok_or_else(|| {
                    OpError::new(
                        OpErrorKind::AttributeNotInScheme,
                        format!("attribute {y} is not in scheme {{{}}}", self.scheme),
                    )
                })?;
                l.tnorm(sup, domains.similarity(&l, y, v, d)?)?
            } else {
                l.bot()
            };
            map.insert(t.clone(), rank);
        }
        Ok(Dense {
            lattice: l,
            scheme: self.scheme.clone(),
            map,
        })
    }
}

/// Evaluates a query over dense tables by the defining formulas.
pub fn oracle_eval(
    e: &QueryExpr,
    lattice: Lattice,
    domains: &Domains,
    tables: &BTreeMap<String, Dense>,
    closure_mode: CandidateMode,
) -> Result<Dense, OpError> {
    let go = |sub: &QueryExpr| oracle_eval(sub, lattice, domains, tables, closure_mode);
    match e {
        QueryExpr::Table(name) => tables.get(name).cloned().ok_or_else(|| {
            OpError::new(OpErrorKind::InvalidValue, format!("unknown table {name}"))
        }),
        QueryExpr::Union(a, b) => go(a)?.combine(CombineKind::Union, &go(b)?),
        QueryExpr::Meet(a, b) => go(a)?.combine(CombineKind::Meet, &go(b)?),
        QueryExpr::OTimes(a, b) => go(a)?.combine(CombineKind::OTimes, &go(b)?),
        QueryExpr::Residuum(a, b) => go(a)?.combine(CombineKind::ResiduumCw, &go(b)?),
        QueryExpr::Cross(a, b) => go(a)?.cross(&go(b)?),
        QueryExpr::Join { left, right, p, q } => go(left)?.join(domains, &go(right)?, p, q),
        QueryExpr::Shift { degree, expr } => {
            let a = lattice.degree_from_decimal(degree)?;
            go(expr)?.shift(a)
        }
        QueryExpr::Project { attrs, expr } => {
            go(expr)?.project(domains, &RelationScheme::new(attrs.iter().cloned()))
        }
        QueryExpr::SelectVal { expr, attr, value } => {
            go(expr)?.select_sim(domains, attr, &value.to_value())
        }
        QueryExpr::SelectAttr { expr, p, q } => go(expr)?.select_attr(domains, p, q),
        QueryExpr::SelectClosure { expr, attr, value } => {
            go(expr)?.select_closure(domains, attr, &value.to_value(), closure_mode)
        }
    }
}

/// Which degree of containment or similarity to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Rank-based containment: infimum of pointwise residua.
    Subsethood,
    /// Rank-based similarity: containment both ways.
    Similarity,
    /// Tuple-based containment: each ranked tuple must have a similar
    /// counterpart.
    TupleSubsethood,
    /// Tuple-based containment both ways.
    TupleSimilarity,
    /// Tuple-based containment with a hedge on the tuple similarities.
    Hedged(Hedge),
}

fn tuple_sub(
    domains: &Domains,
    d1: &Dense,
    d2: &Dense,
    hedge: Hedge,
) -> Result<Degree, OpError> {
    let l = d1.lattice;
    let mut acc = l.top();
    for (t, r1) in d1.iter() {
        let mut sup = l.bot();
        for (t2, r2) in d2.iter() {
            let sim = hedged_tuple_similarity(&l, domains, hedge, t, t2)?;
            sup = l.join(sup, l.tnorm(r2, sim)?)?;
        }
        acc = l.meet(acc, l.residuum(r1, sup)?)?;
    }
    Ok(acc)
}

/// Containment and similarity measures by their defining formulas, with
/// every infimum and supremum taken over the whole universe.
pub fn oracle_measure(
    kind: MeasureKind,
    domains: &Domains,
    d1: &Dense,
    d2: &Dense,
) -> Result<Degree, OpError> {
    d1.same_shape(d2)?;
    let l = d1.lattice;
    match kind {
        MeasureKind::Subsethood => {
            let mut acc = l.top();
            for (t, r1) in d1.iter() {
                acc = l.meet(acc, l.residuum(r1, d2.rank(t))?)?;
            }
            Ok(acc)
        }
        MeasureKind::Similarity => {
            let fwd = oracle_measure(MeasureKind::Subsethood, domains, d1, d2)?;
            let bwd = oracle_measure(MeasureKind::Subsethood, domains, d2, d1)?;
            Ok(l.meet(fwd, bwd)?)
        }
        MeasureKind::TupleSubsethood => tuple_sub(domains, d1, d2, Hedge::Identity),
        MeasureKind::TupleSimilarity => {
            let fwd = tuple_sub(domains, d1, d2, Hedge::Identity)?;
            let bwd = tuple_sub(domains, d2, d1, Hedge::Identity)?;
            Ok(l.meet(fwd, bwd)?)
        }
        MeasureKind::Hedged(h) => tuple_sub(domains, d1, d2, h),
    }
}

/// A classical relation: a set of tuples over a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrispRel {
    pub scheme: RelationScheme,
    pub rows: BTreeSet<Tuple>,
}

impl CrispRel {
    /// Reads off the tuples with rank 1. Every rank in the enumerated
    /// universe must be 0 or 1.
    pub fn from_table(table: &RankedDataTable, domains: &Domains) -> Result<CrispRel, OpError> {
        let l = table.lattice();
        let mut rows = BTreeSet::new();
        for t in enumerate(domains, table.scheme())? {
            let r = table.rank_of(&t)?;
            if r == l.top() {
                rows.insert(t);
            } else if r != l.bot() {
                return Err(OpError::new(
                    OpErrorKind::InvalidValue,
                    format!("rank {r} is not crisp"),
                ));
            }
        }
        Ok(CrispRel {
            scheme: table.scheme().clone(),
            rows,
        })
    }
}

/// Textbook relational algebra over sets. Degenerate cases: meet and
/// product both become intersection, the residuum becomes complement-or,
/// a 0-shift returns the full universe, and the closure selection under
/// identity similarities is an equality selection.
pub fn classical_eval(
    e: &QueryExpr,
    domains: &Domains,
    tables: &BTreeMap<String, CrispRel>,
) -> Result<CrispRel, OpError> {
    let go = |sub: &QueryExpr| classical_eval(sub, domains, tables);
    let filtered = |r: CrispRel, keep: &dyn Fn(&Tuple) -> bool| CrispRel {
        scheme: r.scheme.clone(),
        rows: r.rows.iter().filter(|t| keep(t)).cloned().collect(),
    };
    match e {
        QueryExpr::Table(name) => tables.get(name).cloned().ok_or_else(|| {
            OpError::new(OpErrorKind::InvalidValue, format!("unknown table {name}"))
        }),
        QueryExpr::Union(a, b) => {
            let (a, b) = (go(a)?, go(b)?);
            Ok(CrispRel {
                scheme: a.scheme.clone(),
                rows: a.rows.union(&b.rows).cloned().collect(),
            })
        }
        QueryExpr::Meet(a, b) | QueryExpr::OTimes(a, b) => {
            let (a, b) = (go(a)?, go(b)?);
            Ok(CrispRel {
                scheme: a.scheme.clone(),
                rows: a.rows.intersection(&b.rows).cloned().collect(),
            })
        }
        QueryExpr::Residuum(a, b) => {
            let (a, b) = (go(a)?, go(b)?);
            let rows = enumerate(domains, &a.scheme)?
                .into_iter()
                .filter(|t| !a.rows.contains(t) || b.rows.contains(t))
                .collect();
            Ok(CrispRel {
                scheme: a.scheme,
                rows,
            })
        }
        QueryExpr::Cross(a, b) => {
            let (a, b) = (go(a)?, go(b)?);
            let mut rows = BTreeSet::new();
            for t1 in &a.rows {
                for t2 in &b.rows {
                    rows.insert(t1.concat(t2)?);
                }
            }
            Ok(CrispRel {
                scheme: a.scheme.union(&b.scheme),
                rows,
            })
        }
        QueryExpr::Join { left, right, p, q } => {
            let joined = classical_eval(
                &QueryExpr::Cross(left.clone(), right.clone()),
                domains,
                tables,
            )?;
            Ok(filtered(joined, &|t| t.get(p) == t.get(q)))
        }
        QueryExpr::Shift { degree, expr } => {
            let child = go(expr)?;
            if degree.to_f64() == 1.0 {
                Ok(child)
            } else if degree.to_f64() == 0.0 {
                Ok(CrispRel {
                    rows: enumerate(domains, &child.scheme)?.into_iter().collect(),
                    scheme: child.scheme,
                })
            } else {
                Err(OpError::new(
                    OpErrorKind::InvalidValue,
                    format!("shift degree {degree} is not crisp"),
                ))
            }
        }
        QueryExpr::Project { attrs, expr } => {
            let child = go(expr)?;
            let target = RelationScheme::new(attrs.iter().cloned());
            Ok(CrispRel {
                rows: child.rows.iter().map(|t| t.restrict(&target)).collect(),
                scheme: target,
            })
        }
        QueryExpr::SelectVal { expr, attr, value }
        | QueryExpr::SelectClosure { expr, attr, value } => {
            let child = go(expr)?;
            let v = value.to_value();
            Ok(filtered(child, &|t| t.get(attr) == Some(&v)))
        }
        QueryExpr::SelectAttr { expr, p, q } => {
            let child = go(expr)?;
            Ok(filtered(child, &|t| t.get(p) == t.get(q)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{gen_rdt, GenSpec};

    #[test]
    fn dense_roundtrips_ranks() {
        let g = gen_rdt(&GenSpec {
            chain: 5,
            seed: 11,
            ..Default::default()
        })
        .unwrap();
        let dense = dense_of(&g.table, &g.env.domains).unwrap();
        assert_eq!(dense.map.len(), g.env.universe().len());
        for (t, r) in dense.iter() {
            assert_eq!(g.table.rank_of(t).unwrap(), r);
        }
    }

    #[test]
    fn dense_union_matches_engine_on_a_spot_check() {
        let spec = GenSpec {
            chain: 6,
            rows: 4,
            seed: 21,
            ..Default::default()
        };
        let g = gen_rdt(&spec).unwrap();
        let h = gen_rdt(&GenSpec { seed: 22, ..spec }).unwrap();
        let d1 = dense_of(&g.table, &g.env.domains).unwrap();
        let d2 = dense_of(&h.table, &g.env.domains).unwrap();
        let engine = g
            .table
            .combine(crate::rdt::CombineKind::Union, &h.table)
            .unwrap();
        let oracle = d1.combine(CombineKind::Union, &d2).unwrap();
        assert_eq!(dense_of(&engine, &g.env.domains).unwrap(), oracle);
    }

    #[test]
    fn crisp_conversion_rejects_intermediate_ranks() {
        let g = gen_rdt(&GenSpec {
            chain: 3,
            seed: 4,
            ..Default::default()
        })
        .unwrap();
        // chain(3) tables almost surely carry a rank strictly between 0 and 1
        let has_mid = g
            .table
            .support()
            .any(|(_, r)| r != g.table.lattice().top());
        if has_mid {
            assert!(CrispRel::from_table(&g.table, &g.env.domains).is_err());
        }
    }
}
