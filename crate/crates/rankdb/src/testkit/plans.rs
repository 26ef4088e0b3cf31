//! Random query plans over a small fixed catalog.
//!
//! The catalog has two value domains and four attributes (A and B over
//! one domain, C and D over the other), so generated plans can exercise
//! joins and attribute selections. Plans track which subtrees are
//! guaranteed a zero default rank and only place operations where their
//! preconditions hold.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::decimal::Decimal;
use crate::lattice::Lattice;
use crate::query::{Literal, QueryExpr};
use crate::rdt::RankedDataTable;
use crate::schema::{
    AttrName, DomainWithSimilarity, Domains, RelationScheme, Value, ValueKind,
};

use super::{attr, chain_size, gen_sim_table, gen_table_over, perturb_table, transitivize};

/// Which operations a generated plan may contain.
///
/// `TupleSafe` restricts to operations that preserve tuple-based
/// containment: union, cartesian product, projection, and closure
/// selection. Plain selections and joins are excluded because replacing a
/// tuple by a similar one can change their result more than the measured
/// distance allows; closure selections compensate, but only over
/// transitive similarities, so `TupleSafe` catalogs must be generated
/// with `transitive = true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanFragment {
    Full,
    TupleSafe,
}

/// A lattice, domain registry, and named base tables for plan evaluation.
#[derive(Debug, Clone)]
pub struct PlanEnv {
    pub lattice: Lattice,
    pub domains: Domains,
    pub tables: BTreeMap<String, RankedDataTable>,
}

impl PlanEnv {
    fn base_schemes(&self) -> Vec<RelationScheme> {
        let mut out: Vec<RelationScheme> = Vec::new();
        for t in self.tables.values() {
            if !out.contains(t.scheme()) {
                out.push(t.scheme().clone());
            }
        }
        out
    }

    fn values_of(&self, a: &AttrName) -> Vec<Value> {
        let single = RelationScheme::new([a.clone()]);
        self.domains
            .enumerate_tuples(&single)
            .expect("plan domains are enumerable")
            .into_iter()
            .map(|t| t.get(a).expect("tuple over the singleton scheme").clone())
            .collect()
    }
}

// both domains range over the shared value pool v0, v1, v2
fn fresh_domain(
    rng: &mut ChaCha8Rng,
    lattice: &Lattice,
    id: &str,
    transitive: bool,
) -> DomainWithSimilarity {
    let mut sim = gen_sim_table(rng, lattice, 3, false);
    if transitive {
        sim = transitivize(&sim, lattice);
    }
    DomainWithSimilarity::table(id, ValueKind::Text, sim)
        .with_values((0..3).map(super::value))
}

/// A catalog over two domains: base tables named `ta {A}`, `tb {B}`,
/// `tac {A, C}`, `tbd {B, D}`, where A and B share one domain and C and D
/// the other.
pub fn gen_plan_env(rng: &mut ChaCha8Rng, chain: u32, transitive: bool) -> PlanEnv {
    let lattice = Lattice::chain(chain).expect("positive chain size");
    let mut domains = Domains::new();
    domains
        .add_domain(fresh_domain(rng, &lattice, "dom_m", transitive))
        .expect("fresh domain id");
    domains
        .add_domain(fresh_domain(rng, &lattice, "dom_n", transitive))
        .expect("fresh domain id");
    for (a, dom) in [("A", "dom_m"), ("B", "dom_m"), ("C", "dom_n"), ("D", "dom_n")] {
        domains.bind(attr(a), dom).expect("bound");
    }
    let schemes = [
        ("ta", vec!["A"]),
        ("tb", vec!["B"]),
        ("tac", vec!["A", "C"]),
        ("tbd", vec!["B", "D"]),
    ];
    let mut tables = BTreeMap::new();
    for (name, attrs) in schemes {
        let scheme = RelationScheme::new(attrs.into_iter().map(attr));
        let rows = if scheme.len() == 1 { 2 } else { 3 };
        let t = gen_table_over(rng, lattice, &domains, &scheme, rows)
            .expect("catalog universes are large enough");
        tables.insert(name.to_string(), t);
    }
    PlanEnv {
        lattice,
        domains,
        tables,
    }
}

/// A catalog and a perturbed copy of it, sharing lattice and domains.
pub fn gen_catalog_pair(
    rng: &mut ChaCha8Rng,
    chain: u32,
    transitive: bool,
) -> (PlanEnv, BTreeMap<String, RankedDataTable>) {
    let env = gen_plan_env(rng, chain, transitive);
    let other = env
        .tables
        .iter()
        .map(|(n, t)| (n.clone(), perturb_table(rng, &env.domains, t)))
        .collect();
    (env, other)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Prod {
    Leaf,
    Union,
    Meet,
    OTimes,
    Residuum,
    Shift,
    Cross,
    Join,
    Project,
    SelectVal,
    SelectAttr,
    SelectClosure,
}

const FULL_PRODS: &[Prod] = &[
    Prod::Leaf,
    Prod::Union,
    Prod::Meet,
    Prod::OTimes,
    Prod::Residuum,
    Prod::Shift,
    Prod::Cross,
    Prod::Join,
    Prod::Project,
    Prod::SelectVal,
    Prod::SelectAttr,
];

const TUPLE_SAFE_PRODS: &[Prod] = &[
    Prod::Leaf,
    Prod::Union,
    Prod::Cross,
    Prod::Project,
    Prod::SelectClosure,
];

/// `k/n` as an exact decimal, when `n` divides a power of ten.
fn chain_decimal(n: u32, k: u32) -> Option<Decimal> {
    let mut pow: i64 = 1;
    for scale in 0..=9u8 {
        if pow % i64::from(n) == 0 {
            return Some(Decimal::new(i64::from(k) * (pow / i64::from(n)), scale));
        }
        pow *= 10;
    }
    None
}

type Generated = (QueryExpr, RelationScheme, bool);

/// Random plan over the catalog. Plans in the `Full` fragment may end in
/// tables with nonzero defaults; `TupleSafe` plans always have zero
/// defaults, as tuple-based comparison requires.
pub fn gen_plan(
    rng: &mut ChaCha8Rng,
    env: &PlanEnv,
    depth: usize,
    fragment: PlanFragment,
) -> QueryExpr {
    let need_zd = fragment == PlanFragment::TupleSafe;
    gen(rng, env, depth, None, need_zd, fragment)
        .expect("unconstrained generation always finds a base table")
        .0
}

fn leaf(rng: &mut ChaCha8Rng, env: &PlanEnv, want: Option<&RelationScheme>) -> Option<Generated> {
    let names: Vec<&String> = env
        .tables
        .iter()
        .filter(|(_, t)| want.is_none_or(|s| t.scheme() == s))
        .map(|(n, _)| n)
        .collect();
    let name = names.choose(rng)?;
    let scheme = env.tables[*name].scheme().clone();
    Some((QueryExpr::Table((*name).clone()), scheme, true))
}

fn gen(
    rng: &mut ChaCha8Rng,
    env: &PlanEnv,
    depth: usize,
    want: Option<&RelationScheme>,
    need_zd: bool,
    fragment: PlanFragment,
) -> Option<Generated> {
    if depth == 0 {
        return leaf(rng, env, want);
    }
    let mut prods: Vec<Prod> = match fragment {
        PlanFragment::Full => FULL_PRODS.to_vec(),
        PlanFragment::TupleSafe => TUPLE_SAFE_PRODS.to_vec(),
    };
    prods.shuffle(rng);
    for p in prods {
        if let Some(out) = try_prod(p, rng, env, depth, want, need_zd, fragment) {
            return Some(out);
        }
    }
    leaf(rng, env, want)
}

fn try_prod(
    p: Prod,
    rng: &mut ChaCha8Rng,
    env: &PlanEnv,
    depth: usize,
    want: Option<&RelationScheme>,
    need_zd: bool,
    fragment: PlanFragment,
) -> Option<Generated> {
    let sub = depth - 1;
    match p {
        Prod::Leaf => leaf(rng, env, want),
        Prod::Union | Prod::Meet | Prod::OTimes => {
            let (e1, s1, z1) = gen(rng, env, sub, want, need_zd, fragment)?;
            let (e2, z2) = match gen(rng, env, sub, Some(&s1), need_zd, fragment) {
                Some((e2, _, z2)) => (e2, z2),
                None => (e1.clone(), z1),
            };
            let (a, b) = (Box::new(e1), Box::new(e2));
            let e = match p {
                Prod::Union => QueryExpr::Union(a, b),
                Prod::Meet => QueryExpr::Meet(a, b),
                _ => QueryExpr::OTimes(a, b),
            };
            Some((e, s1, z1 && z2))
        }
        Prod::Residuum => {
            if need_zd {
                return None;
            }
            let (e1, s1, _) = gen(rng, env, sub, want, false, fragment)?;
            let (e2, _) = match gen(rng, env, sub, Some(&s1), false, fragment) {
                Some((e2, _, z2)) => (e2, z2),
                None => (e1.clone(), true),
            };
            Some((
                QueryExpr::Residuum(Box::new(e1), Box::new(e2)),
                s1,
                false,
            ))
        }
        Prod::Shift => {
            if need_zd {
                return None;
            }
            let n = chain_size(&env.lattice);
            let k = rng.gen_range(0..=n);
            let degree = chain_decimal(n, k)?;
            let (e1, s1, z1) = gen(rng, env, sub, want, false, fragment)?;
            Some((
                QueryExpr::Shift {
                    degree,
                    expr: Box::new(e1),
                },
                s1,
                z1 && k == n,
            ))
        }
        Prod::Cross | Prod::Join => {
            if want.is_some() {
                return None;
            }
            let (e1, s1, _) = gen(rng, env, sub, None, true, fragment)?;
            let disjoint: Vec<RelationScheme> = env
                .base_schemes()
                .into_iter()
                .filter(|b| b.is_disjoint(&s1))
                .collect();
            let b = disjoint.choose(rng)?.clone();
            let (e2, s2, _) = gen(rng, env, sub, Some(&b), true, fragment)?;
            let scheme = s1.union(&s2);
            if p == Prod::Join {
                let mut pairs = Vec::new();
                for pa in s1.attrs() {
                    for qa in s2.attrs() {
                        if env.domains.share_domain(pa, qa).unwrap_or(false) {
                            pairs.push((pa.clone(), qa.clone()));
                        }
                    }
                }
                if let Some((pa, qa)) = pairs.choose(rng) {
                    return Some((
                        QueryExpr::Join {
                            left: Box::new(e1),
                            right: Box::new(e2),
                            p: pa.clone(),
                            q: qa.clone(),
                        },
                        scheme,
                        true,
                    ));
                }
            }
            Some((
                QueryExpr::Cross(Box::new(e1), Box::new(e2)),
                scheme,
                true,
            ))
        }
        Prod::Project => match want {
            None => {
                let (e1, s1, _) = gen(rng, env, sub, None, true, fragment)?;
                let mut kept: Vec<AttrName> =
                    s1.attrs().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                if kept.is_empty() {
                    let all: Vec<&AttrName> = s1.attrs().collect();
                    kept.push((*all.choose(rng)?).clone());
                }
                let scheme = RelationScheme::new(kept.iter().cloned());
                Some((
                    QueryExpr::Project {
                        attrs: kept,
                        expr: Box::new(e1),
                    },
                    scheme,
                    true,
                ))
            }
            Some(s) => {
                let supers: Vec<RelationScheme> = env
                    .base_schemes()
                    .into_iter()
                    .filter(|b| s.is_subset(b))
                    .collect();
                let b = supers.choose(rng)?.clone();
                let (e1, _, _) = gen(rng, env, sub, Some(&b), true, fragment)?;
                Some((
                    QueryExpr::Project {
                        attrs: s.attrs().cloned().collect(),
                        expr: Box::new(e1),
                    },
                    s.clone(),
                    true,
                ))
            }
        },
        Prod::SelectVal | Prod::SelectClosure => {
            let (e1, s1, _) = gen(rng, env, sub, want, true, fragment)?;
            let attrs: Vec<&AttrName> = s1.attrs().collect();
            let y = (*attrs.choose(rng)?).clone();
            let values = env.values_of(&y);
            let v = values.choose(rng)?.clone();
            let value = match v {
                Value::Text(s) => Literal::Text(s),
                Value::Num(d) => Literal::Num(d),
            };
            let e = if p == Prod::SelectVal {
                QueryExpr::SelectVal {
                    expr: Box::new(e1),
                    attr: y,
                    value,
                }
            } else {
                QueryExpr::SelectClosure {
                    expr: Box::new(e1),
                    attr: y,
                    value,
                }
            };
            Some((e, s1, true))
        }
        Prod::SelectAttr => {
            let (e1, s1, z1) = gen(rng, env, sub, want, true, fragment)?;
            let mut pairs = Vec::new();
            let attrs: Vec<&AttrName> = s1.attrs().collect();
            for (i, pa) in attrs.iter().enumerate() {
                for qa in attrs.iter().skip(i + 1) {
                    if env.domains.share_domain(pa, qa).unwrap_or(false) {
                        pairs.push(((*pa).clone(), (*qa).clone()));
                    }
                }
            }
            match pairs.choose(rng) {
                Some((pa, qa)) => Some((
                    QueryExpr::SelectAttr {
                        expr: Box::new(e1),
                        p: pa.clone(),
                        q: qa.clone(),
                    },
                    s1,
                    true,
                )),
                None => Some((e1, s1, z1)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::{evaluate, parse, EvalContext};
    use crate::rdt::CandidateMode;
    use rand::SeedableRng;

    #[test]
    fn generated_full_plans_evaluate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let env = gen_plan_env(&mut rng, 10, false);
        let ctx = EvalContext::new(env.lattice, &env.domains, &env.tables);
        for _ in 0..200 {
            let plan = gen_plan(&mut rng, &env, 4, PlanFragment::Full);
            let printed = plan.to_string();
            evaluate(&plan, &ctx).unwrap_or_else(|e| panic!("{printed}: {e}"));
            // the printed form parses back to the same plan
            assert_eq!(parse(&printed).unwrap(), plan);
        }
    }

    #[test]
    fn generated_tuple_safe_plans_stay_in_fragment() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let env = gen_plan_env(&mut rng, 10, true);
        let ctx = EvalContext::new(env.lattice, &env.domains, &env.tables)
            .with_closure_mode(CandidateMode::Full);
        for _ in 0..200 {
            let plan = gen_plan(&mut rng, &env, 4, PlanFragment::TupleSafe);
            let printed = plan.to_string();
            for banned in ["meet", "otimes", "residuum", "shift", "join", "select "] {
                assert!(
                    !printed.contains(banned),
                    "tuple-safe plan contains {banned}: {printed}"
                );
            }
            let out = evaluate(&plan, &ctx).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(out.default_rank(), env.lattice.bot());
        }
    }

    #[test]
    fn chain_decimals_are_exact() {
        for (n, k, text) in [(20, 7, "0.35"), (10, 3, "0.3"), (1, 1, "1"), (4, 1, "0.25")] {
            let d = chain_decimal(n, k).unwrap();
            assert_eq!(d.to_f64(), text.parse::<f64>().unwrap());
        }
        assert!(chain_decimal(3, 1).is_none());
    }

    #[test]
    fn catalog_pairs_share_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (env, other) = gen_catalog_pair(&mut rng, 10, false);
        assert_eq!(env.tables.len(), other.len());
        for (name, t) in &env.tables {
            assert_eq!(other[name].scheme(), t.scheme());
        }
    }
}
