//! Callable property suites with replayable failure reports.
//!
//! Every suite is deterministic in its seed; a failure line names the
//! violated relation and the instance, so rerunning the suite with the
//! same arguments reproduces it exactly.

use std::collections::BTreeMap;
use std::fmt;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Degree, Hedge, Lattice};
use crate::query::{evaluate, parse, propagate_bound, verify_bound, EvalContext, QueryError};
use crate::rdt::{CandidateMode, CombineKind, RankedDataTable};
use crate::schema::{
    DomainWithSimilarity, Domains, RelationScheme, Tuple, ValueKind,
};
use crate::similarity::{subsethood, table_similarity, ComparisonConfig};

use super::oracle::{
    classical_eval, dense_of, oracle_eval, oracle_measure, CrispRel, Dense, MeasureKind,
};
use super::plans::{gen_catalog_pair, gen_plan, gen_plan_env, PlanEnv, PlanFragment};
use super::{attr, gen_sim_table, gen_table_over, perturb_table, transitivize, value};

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, seed: u64) -> Self {
        SuiteReport {
            name,
            seed,
            instances: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "PASS {}: {} instances, seed {}",
                self.name, self.instances, self.seed
            )
        } else {
            format!(
                "FAIL {}: {} violations in {} instances, seed {}",
                self.name,
                self.failures.len(),
                self.instances,
                self.seed
            )
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary())?;
        for line in self.failures.iter().take(5) {
            write!(f, "\n  {line}")?;
        }
        if self.failures.len() > 5 {
            write!(f, "\n  ... and {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

fn tuple_brief(t: &Tuple) -> String {
    let parts: Vec<String> = t.iter().map(|(a, v)| format!("{a}={v}")).collect();
    format!("({})", parts.join(", "))
}

fn brief(t: &RankedDataTable) -> String {
    let rows: Vec<String> = t
        .support()
        .map(|(tu, r)| format!("{}:{r}", tuple_brief(tu)))
        .collect();
    format!("{{{}}} default {}", rows.join(", "), t.default_rank())
}

/// Exhaustive adjointness on small chains, tolerance-checked adjointness
/// on the real-valued carriers: `a (x) b <= c` iff `a <= b -> c`.
pub fn adjointness_suite(seed: u64, random_per_kind: usize) -> SuiteReport {
    let mut report = SuiteReport::new("adjointness", seed);
    for n in [1u32, 2, 5, 12] {
        let l = Lattice::chain(n).expect("positive chain size");
        let degrees = l.enumerate().expect("chains enumerate");
        for &a in &degrees {
            for &b in &degrees {
                for &c in &degrees {
                    report.instances += 1;
                    let ab = l.tnorm(a, b).unwrap();
                    let fwd = l.leq(ab, c).unwrap();
                    let bwd = l.leq(a, l.residuum(b, c).unwrap()).unwrap();
                    if fwd != bwd {
                        report.failures.push(format!(
                            "chain({n}): adjointness fails at a={a} b={b} c={c}"
                        ));
                    }
                }
            }
        }
    }
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for l in [Lattice::lukasiewicz(), Lattice::goedel(), Lattice::product()] {
        for _ in 0..random_per_kind {
            report.instances += 1;
            let a = rng.gen::<f64>();
            let b = rng.gen::<f64>();
            let c = rng.gen::<f64>();
            let da = l.degree(a).unwrap();
            let db = l.degree(b).unwrap();
            let dc = l.degree(c).unwrap();
            let ab = l.tnorm(da, db).unwrap().to_f64();
            let res = l.residuum(db, dc).unwrap().to_f64();
            if ab <= c && a > res + TOL {
                report.failures.push(format!(
                    "{:?}: a (x) b <= c but a > b -> c + {TOL}: a={a} b={b} c={c} res={res}",
                    l.kind()
                ));
            }
            if a <= res && ab > c + TOL {
                report.failures.push(format!(
                    "{:?}: a <= b -> c but a (x) b > c + {TOL}: a={a} b={b} c={c} ab={ab}",
                    l.kind()
                ));
            }
        }
    }
    report
}

/// One shared domain over three values, attributes A and B in a pair
/// scheme and C in a singleton, all comparable with each other.
struct PairEnv {
    lattice: Lattice,
    domains: Domains,
    ab: RelationScheme,
    c: RelationScheme,
}

fn pair_env(rng: &mut ChaCha8Rng, chain: u32, transitive: bool, separating: bool) -> PairEnv {
    let lattice = Lattice::chain(chain).expect("positive chain size");
    let mut sim = gen_sim_table(rng, &lattice, 3, separating);
    if transitive {
        sim = transitivize(&sim, &lattice);
    }
    let dom = DomainWithSimilarity::table("dom_m", ValueKind::Text, sim)
        .with_values((0..3).map(value));
    let mut domains = Domains::new();
    domains.add_domain(dom).expect("fresh domain id");
    for a in ["A", "B", "C"] {
        domains.bind(attr(a), "dom_m").expect("bound");
    }
    PairEnv {
        lattice,
        domains,
        ab: RelationScheme::new([attr("A"), attr("B")]),
        c: RelationScheme::new([attr("C")]),
    }
}

/// Every preservation law of the comparison measures, on exact chain
/// arithmetic: operations applied to similar tables stay at least as
/// similar as the combined input similarities.
pub fn preservation_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("preservation", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = ComparisonConfig::rank_based();
    let tuple = ComparisonConfig::tuple_based();
    for i in 0..instances {
        report.instances += 1;
        let env = pair_env(&mut rng, 20, false, false);
        let l = env.lattice;
        let d1 = gen_table_over(&mut rng, l, &env.domains, &env.ab, 3).unwrap();
        let d1p = perturb_table(&mut rng, &env.domains, &d1);
        let d2 = gen_table_over(&mut rng, l, &env.domains, &env.ab, 3).unwrap();
        let d2p = perturb_table(&mut rng, &env.domains, &d2);
        let dc = gen_table_over(&mut rng, l, &env.domains, &env.c, 2).unwrap();
        let dcp = perturb_table(&mut rng, &env.domains, &dc);

        let s = |x: &RankedDataTable, y: &RankedDataTable| {
            subsethood(&env.domains, x, y, rank).unwrap()
        };
        let e = |x: &RankedDataTable, y: &RankedDataTable| {
            table_similarity(&env.domains, x, y, rank).unwrap()
        };
        let st = |x: &RankedDataTable, y: &RankedDataTable| {
            subsethood(&env.domains, x, y, tuple).unwrap()
        };

        let mut check = |name: &str, lhs: Degree, rhs: Degree, detail: &str| {
            if !l.leq(lhs, rhs).unwrap() {
                report.failures.push(format!(
                    "instance {i}: {name}: {lhs} > {rhs} where {detail}"
                ));
            }
        };
        let ctx = |tables: &[&RankedDataTable]| {
            tables
                .iter()
                .map(|t| brief(t))
                .collect::<Vec<_>>()
                .join("; ")
        };

        // containment bounds for every operation
        for (kind, name) in [
            (CombineKind::Union, "union"),
            (CombineKind::Meet, "meet"),
            (CombineKind::OTimes, "otimes"),
        ] {
            let o1 = d1.combine(kind, &d2).unwrap();
            let o2 = d1p.combine(kind, &d2p).unwrap();
            let glue = if kind == CombineKind::OTimes {
                l.tnorm(s(&d1, &d1p), s(&d2, &d2p)).unwrap()
            } else {
                l.meet(s(&d1, &d1p), s(&d2, &d2p)).unwrap()
            };
            check(
                &format!("{name} keeps rank containment"),
                glue,
                s(&o1, &o2),
                &ctx(&[&d1, &d1p, &d2, &d2p]),
            );
            let eglue = if kind == CombineKind::OTimes {
                l.tnorm(e(&d1, &d1p), e(&d2, &d2p)).unwrap()
            } else {
                l.meet(e(&d1, &d1p), e(&d2, &d2p)).unwrap()
            };
            check(
                &format!("{name} keeps rank similarity"),
                eglue,
                e(&o1, &o2),
                &ctx(&[&d1, &d1p, &d2, &d2p]),
            );
        }

        let r1 = d1.combine(CombineKind::ResiduumCw, &d2).unwrap();
        let r2 = d1p.combine(CombineKind::ResiduumCw, &d2p).unwrap();
        check(
            "residuum keeps rank similarity",
            l.tnorm(e(&d1, &d1p), e(&d2, &d2p)).unwrap(),
            e(&r1, &r2),
            &ctx(&[&d1, &d1p, &d2, &d2p]),
        );

        let a = l.chain_degree(rng.gen_range(0..=20)).unwrap();
        check(
            "shift keeps rank containment",
            s(&d1, &d1p),
            s(&d1.a_shift(a).unwrap(), &d1p.a_shift(a).unwrap()),
            &ctx(&[&d1, &d1p]),
        );

        let pa = RelationScheme::new([attr("A")]);
        check(
            "projection keeps rank containment",
            s(&d1, &d1p),
            s(&d1.project(&pa).unwrap(), &d1p.project(&pa).unwrap()),
            &ctx(&[&d1, &d1p]),
        );

        let dv = value(rng.gen_range(0..3));
        check(
            "value selection keeps rank containment",
            s(&d1, &d1p),
            s(
                &d1.select_sim(&env.domains, &attr("A"), &dv).unwrap(),
                &d1p.select_sim(&env.domains, &attr("A"), &dv).unwrap(),
            ),
            &ctx(&[&d1, &d1p]),
        );

        check(
            "attribute selection keeps rank containment",
            s(&d1, &d1p),
            s(
                &d1.select_attr(&env.domains, &attr("A"), &attr("B")).unwrap(),
                &d1p.select_attr(&env.domains, &attr("A"), &attr("B")).unwrap(),
            ),
            &ctx(&[&d1, &d1p]),
        );

        let x1 = d1.cartesian(&dc).unwrap();
        let x2 = d1p.cartesian(&dcp).unwrap();
        check(
            "product keeps rank containment",
            l.tnorm(s(&d1, &d1p), s(&dc, &dcp)).unwrap(),
            s(&x1, &x2),
            &ctx(&[&d1, &d1p, &dc, &dcp]),
        );

        let j1 = d1.join_sim(&env.domains, &dc, &attr("A"), &attr("C")).unwrap();
        let j2 = d1p.join_sim(&env.domains, &dcp, &attr("A"), &attr("C")).unwrap();
        check(
            "join keeps rank similarity",
            l.tnorm(e(&d1, &d1p), e(&dc, &dcp)).unwrap(),
            e(&j1, &j2),
            &ctx(&[&d1, &d1p, &dc, &dcp]),
        );

        // tuple-based containment bounds for the compatible operations
        check(
            "union keeps tuple containment",
            l.meet(st(&d1, &d1p), st(&d2, &d2p)).unwrap(),
            st(&d1.combine(CombineKind::Union, &d2).unwrap(),
               &d1p.combine(CombineKind::Union, &d2p).unwrap()),
            &ctx(&[&d1, &d1p, &d2, &d2p]),
        );
        check(
            "product keeps tuple containment",
            l.tnorm(st(&d1, &d1p), st(&dc, &dcp)).unwrap(),
            st(&x1, &x2),
            &ctx(&[&d1, &d1p, &dc, &dcp]),
        );
        check(
            "projection keeps tuple containment",
            st(&d1, &d1p),
            st(&d1.project(&pa).unwrap(), &d1p.project(&pa).unwrap()),
            &ctx(&[&d1, &d1p]),
        );

        // closure selection needs transitive similarities
        let envt = pair_env(&mut rng, 20, true, false);
        let t1 = gen_table_over(&mut rng, l, &envt.domains, &envt.ab, 3).unwrap();
        let t1p = perturb_table(&mut rng, &envt.domains, &t1);
        let stt = |x: &RankedDataTable, y: &RankedDataTable| {
            subsethood(&envt.domains, x, y, tuple).unwrap()
        };
        let c1 = t1
            .select_closure(&envt.domains, &attr("A"), &dv, CandidateMode::Full)
            .unwrap();
        let c2 = t1p
            .select_closure(&envt.domains, &attr("A"), &dv, CandidateMode::Full)
            .unwrap();
        let lhs = stt(&t1, &t1p);
        let rhs = stt(&c1, &c2);
        if !l.leq(lhs, rhs).unwrap() {
            report.failures.push(format!(
                "instance {i}: closure selection keeps tuple containment: {lhs} > {rhs} where {}",
                ctx(&[&t1, &t1p])
            ));
        }
    }
    report
}

fn dense_tables(
    env: &PlanEnv,
    tables: &BTreeMap<String, RankedDataTable>,
) -> BTreeMap<String, Dense> {
    tables
        .iter()
        .map(|(n, t)| (n.clone(), dense_of(t, &env.domains).unwrap()))
        .collect()
}

/// Engine results equal full-enumeration oracle results: evaluation of
/// random plans, and every comparison measure on random table pairs.
pub fn oracle_equivalence_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("oracle-equivalence", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        report.instances += 1;
        let (env, other) = gen_catalog_pair(&mut rng, 12, false);
        let l = env.lattice;
        let dense = dense_tables(&env, &env.tables);

        let mode = if i % 2 == 0 {
            CandidateMode::Support
        } else {
            CandidateMode::Full
        };
        for fragment in [PlanFragment::Full, PlanFragment::TupleSafe] {
            let plan = gen_plan(&mut rng, &env, 3, fragment);
            let ctx = EvalContext::new(l, &env.domains, &env.tables).with_closure_mode(mode);
            let engine = match evaluate(&plan, &ctx) {
                Ok(t) => t,
                Err(err) => {
                    report
                        .failures
                        .push(format!("instance {i}: `{plan}` fails to evaluate: {err}"));
                    continue;
                }
            };
            let oracle = oracle_eval(&plan, l, &env.domains, &dense, mode).unwrap();
            let engine_dense = dense_of(&engine, &env.domains).unwrap();
            if engine_dense != oracle {
                report.failures.push(format!(
                    "instance {i}: engine and oracle disagree on `{plan}` (closure mode {mode:?})"
                ));
            }
        }

        // measures on original-vs-perturbed pairs, including shifted
        // tables with nonzero defaults for the rank-based measures
        for (name, t1) in &env.tables {
            let t2 = &other[name];
            let o1 = dense_of(t1, &env.domains).unwrap();
            let o2 = dense_of(t2, &env.domains).unwrap();
            let checks: Vec<(&str, Degree, Degree)> = vec![
                (
                    "rank containment",
                    subsethood(&env.domains, t1, t2, ComparisonConfig::rank_based()).unwrap(),
                    oracle_measure(MeasureKind::Subsethood, &env.domains, &o1, &o2).unwrap(),
                ),
                (
                    "rank containment (full enumeration)",
                    subsethood(
                        &env.domains,
                        t1,
                        t2,
                        ComparisonConfig::rank_based().with_full_enumeration(),
                    )
                    .unwrap(),
                    oracle_measure(MeasureKind::Subsethood, &env.domains, &o1, &o2).unwrap(),
                ),
                (
                    "rank similarity",
                    table_similarity(&env.domains, t1, t2, ComparisonConfig::rank_based())
                        .unwrap(),
                    oracle_measure(MeasureKind::Similarity, &env.domains, &o1, &o2).unwrap(),
                ),
                (
                    "tuple containment",
                    subsethood(&env.domains, t1, t2, ComparisonConfig::tuple_based()).unwrap(),
                    oracle_measure(MeasureKind::TupleSubsethood, &env.domains, &o1, &o2)
                        .unwrap(),
                ),
                (
                    "tuple similarity",
                    table_similarity(&env.domains, t1, t2, ComparisonConfig::tuple_based())
                        .unwrap(),
                    oracle_measure(MeasureKind::TupleSimilarity, &env.domains, &o1, &o2)
                        .unwrap(),
                ),
                (
                    "hedged containment (identity)",
                    subsethood(
                        &env.domains,
                        t1,
                        t2,
                        ComparisonConfig::hedged(Hedge::Identity),
                    )
                    .unwrap(),
                    oracle_measure(
                        MeasureKind::Hedged(Hedge::Identity),
                        &env.domains,
                        &o1,
                        &o2,
                    )
                    .unwrap(),
                ),
                (
                    "hedged containment (globalization)",
                    subsethood(
                        &env.domains,
                        t1,
                        t2,
                        ComparisonConfig::hedged(Hedge::Globalization),
                    )
                    .unwrap(),
                    oracle_measure(
                        MeasureKind::Hedged(Hedge::Globalization),
                        &env.domains,
                        &o1,
                        &o2,
                    )
                    .unwrap(),
                ),
            ];
            for (what, engine, oracle) in checks {
                if engine != oracle {
                    report.failures.push(format!(
                        "instance {i}: {what} on {name}: engine {engine} oracle {oracle}"
                    ));
                }
            }

            let a = l.chain_degree(rng.gen_range(0..=12)).unwrap();
            let s1 = t1.a_shift(a).unwrap();
            let s2 = t2.a_shift(a).unwrap();
            let engine = subsethood(&env.domains, &s1, &s2, ComparisonConfig::rank_based())
                .unwrap();
            let oracle = oracle_measure(
                MeasureKind::Subsethood,
                &env.domains,
                &dense_of(&s1, &env.domains).unwrap(),
                &dense_of(&s2, &env.domains).unwrap(),
            )
            .unwrap();
            if engine != oracle {
                report.failures.push(format!(
                    "instance {i}: rank containment on {a}-shifted {name}: engine {engine} oracle {oracle}"
                ));
            }
        }
    }
    report
}

/// The hedged measure specializes: identity hedge gives the tuple-based
/// measure; globalization over separating similarities gives the
/// rank-based one.
pub fn specialization_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("hedge-specialization", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        report.instances += 1;
        let env = pair_env(&mut rng, 12, false, false);
        let l = env.lattice;
        let d1 = gen_table_over(&mut rng, l, &env.domains, &env.ab, 3).unwrap();
        let d2 = perturb_table(&mut rng, &env.domains, &d1);
        let hedged = subsethood(
            &env.domains,
            &d1,
            &d2,
            ComparisonConfig::hedged(Hedge::Identity),
        )
        .unwrap();
        let tuple =
            subsethood(&env.domains, &d1, &d2, ComparisonConfig::tuple_based()).unwrap();
        if hedged != tuple {
            report.failures.push(format!(
                "instance {i}: identity hedge {hedged} differs from tuple measure {tuple} on {} vs {}",
                brief(&d1),
                brief(&d2)
            ));
        }

        let envs = pair_env(&mut rng, 12, false, true);
        let d1 = gen_table_over(&mut rng, l, &envs.domains, &envs.ab, 3).unwrap();
        let d2 = perturb_table(&mut rng, &envs.domains, &d1);
        let hedged = subsethood(
            &envs.domains,
            &d1,
            &d2,
            ComparisonConfig::hedged(Hedge::Globalization),
        )
        .unwrap();
        let rank =
            subsethood(&envs.domains, &d1, &d2, ComparisonConfig::rank_based()).unwrap();
        if hedged != rank {
            report.failures.push(format!(
                "instance {i}: globalization {hedged} differs from rank measure {rank} on {} vs {}",
                brief(&d1),
                brief(&d2)
            ));
        }
    }
    report
}

/// Containment is a quasiorder and similarity an equivalence in degree:
/// reflexivity, `(x)`-transitivity, and symmetry of the similarity, with
/// the tuple-based forms over transitive similarities.
pub fn lemma_quasiorder_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("quasiorder", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = ComparisonConfig::rank_based();
    let tuple = ComparisonConfig::tuple_based();
    for i in 0..instances {
        report.instances += 1;
        let env = pair_env(&mut rng, 12, true, false);
        let l = env.lattice;
        let d1 = gen_table_over(&mut rng, l, &env.domains, &env.ab, 3).unwrap();
        let d2 = perturb_table(&mut rng, &env.domains, &d1);
        let d3 = perturb_table(&mut rng, &env.domains, &d2);
        for (what, cfg) in [("rank", rank), ("tuple", tuple)] {
            let refl = subsethood(&env.domains, &d1, &d1, cfg).unwrap();
            if refl != l.top() {
                report
                    .failures
                    .push(format!("instance {i}: {what} containment not reflexive: {refl}"));
            }
            let s12 = subsethood(&env.domains, &d1, &d2, cfg).unwrap();
            let s23 = subsethood(&env.domains, &d2, &d3, cfg).unwrap();
            let s13 = subsethood(&env.domains, &d1, &d3, cfg).unwrap();
            if !l.leq(l.tnorm(s12, s23).unwrap(), s13).unwrap() {
                report.failures.push(format!(
                    "instance {i}: {what} containment not (x)-transitive: {s12} (x) {s23} > {s13} on {}; {}; {}",
                    brief(&d1), brief(&d2), brief(&d3)
                ));
            }
            let e12 = table_similarity(&env.domains, &d1, &d2, cfg).unwrap();
            let e21 = table_similarity(&env.domains, &d2, &d1, cfg).unwrap();
            if e12 != e21 {
                report.failures.push(format!(
                    "instance {i}: {what} similarity not symmetric: {e12} vs {e21}"
                ));
            }
        }
    }
    report
}

fn boolean_env(rng: &mut ChaCha8Rng) -> PlanEnv {
    let lattice = Lattice::chain(1).expect("two-element chain");
    let mut domains = Domains::new();
    for id in ["dom_m", "dom_n"] {
        domains
            .add_domain(
                DomainWithSimilarity::identity(id, ValueKind::Text)
                    .with_values((0..3).map(value)),
            )
            .expect("fresh domain id");
    }
    for (a, dom) in [("A", "dom_m"), ("B", "dom_m"), ("C", "dom_n"), ("D", "dom_n")] {
        domains.bind(attr(a), dom).expect("bound");
    }
    let mut tables = BTreeMap::new();
    for (name, attrs) in [
        ("ta", vec!["A"]),
        ("tb", vec!["B"]),
        ("tac", vec!["A", "C"]),
        ("tbd", vec!["B", "D"]),
    ] {
        let scheme = RelationScheme::new(attrs.into_iter().map(attr));
        let rows = if scheme.len() == 1 { 2 } else { 3 };
        tables.insert(
            name.to_string(),
            gen_table_over(rng, lattice, &domains, &scheme, rows).unwrap(),
        );
    }
    PlanEnv {
        lattice,
        domains,
        tables,
    }
}

/// On the two-element chain with identity similarities, every query
/// evaluates exactly as classical relational algebra over sets.
pub fn boolean_degeneration_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("boolean-degeneration", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        report.instances += 1;
        let env = boolean_env(&mut rng);
        let crisp: BTreeMap<String, CrispRel> = env
            .tables
            .iter()
            .map(|(n, t)| (n.clone(), CrispRel::from_table(t, &env.domains).unwrap()))
            .collect();
        for fragment in [PlanFragment::Full, PlanFragment::TupleSafe] {
            let plan = gen_plan(&mut rng, &env, 4, fragment);
            let ctx = EvalContext::new(env.lattice, &env.domains, &env.tables)
                .with_closure_mode(CandidateMode::Full);
            let engine = match evaluate(&plan, &ctx) {
                Ok(t) => t,
                Err(err) => {
                    report
                        .failures
                        .push(format!("instance {i}: `{plan}` fails to evaluate: {err}"));
                    continue;
                }
            };
            let engine_crisp = match CrispRel::from_table(&engine, &env.domains) {
                Ok(r) => r,
                Err(err) => {
                    report.failures.push(format!(
                        "instance {i}: `{plan}` left a non-crisp rank on the two-element chain: {err}"
                    ));
                    continue;
                }
            };
            let classical = classical_eval(&plan, &env.domains, &crisp).unwrap();
            if engine_crisp != classical {
                report.failures.push(format!(
                    "instance {i}: `{plan}`: engine rows {:?} classical rows {:?}",
                    engine_crisp.rows.len(),
                    classical.rows.len()
                ));
            }
        }
    }
    report
}

/// Printing and reparsing is the identity on generated plans, and syntax
/// errors carry exact line and column positions.
pub fn parser_roundtrip_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("parser-roundtrip", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env = gen_plan_env(&mut rng, 10, false);
    for fragment in [PlanFragment::Full, PlanFragment::TupleSafe] {
        for _ in 0..30 {
            report.instances += 1;
            let plan = gen_plan(&mut rng, &env, 4, fragment);
            let printed = plan.to_string();
            match parse(&printed) {
                Ok(back) if back == plan => {}
                Ok(_) => report
                    .failures
                    .push(format!("`{printed}` reparses to a different plan")),
                Err(err) => report
                    .failures
                    .push(format!("`{printed}` does not reparse: {err}")),
            }
        }
    }
    // malformed inputs are rejected with exact positions
    let cases: [(&str, usize, usize); 3] = [
        ("shift 1.5 houses", 1, 7),
        ("union (a,\n  !b)", 2, 3),
        ("select t where Y ~ 'open", 1, 20),
    ];
    for (text, line, col) in cases {
        report.instances += 1;
        match parse(text) {
            Err(QueryError::Syntax { line: l, col: c, .. }) if (l, c) == (line, col) => {}
            Err(QueryError::Syntax { line: l, col: c, .. }) => report.failures.push(format!(
                "{text:?}: expected error at {line}:{col}, got {l}:{c}"
            )),
            other => report
                .failures
                .push(format!("{text:?}: expected a syntax error, got {other:?}")),
        }
    }
    report
}

/// Propagated bounds are sound: for random catalog pairs and plans, the
/// measured similarity of the two results is at least the bound computed
/// from the per-table assumptions.
pub fn propagator_soundness_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("bound-soundness", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        for fragment in [PlanFragment::Full, PlanFragment::TupleSafe] {
            report.instances += 1;
            let transitive = fragment == PlanFragment::TupleSafe;
            let (env, other) = gen_catalog_pair(&mut rng, 20, transitive);
            let plan = gen_plan(&mut rng, &env, 4, fragment);
            let cfg = if plan.has_closure_select() {
                ComparisonConfig::tuple_based()
            } else {
                ComparisonConfig::rank_based()
            };
            let assumptions: BTreeMap<String, Degree> = plan
                .table_refs()
                .iter()
                .map(|n| {
                    let sim =
                        table_similarity(&env.domains, &env.tables[*n], &other[*n], cfg)
                            .unwrap();
                    (n.to_string(), sim)
                })
                .collect();
            let ctx1 = EvalContext::new(env.lattice, &env.domains, &env.tables)
                .with_closure_mode(CandidateMode::Full);
            let ctx2 = EvalContext::new(env.lattice, &env.domains, &other)
                .with_closure_mode(CandidateMode::Full);
            match verify_bound(&plan, &ctx1, &ctx2, &assumptions) {
                Ok(r) if r.holds => {}
                Ok(r) => report.failures.push(format!(
                    "instance {i}: `{plan}`: bound {} exceeds actual {} (assumptions {:?})",
                    r.bound.value,
                    r.actual,
                    assumptions
                        .iter()
                        .map(|(n, d)| format!("{n}={d}"))
                        .collect::<Vec<_>>()
                )),
                Err(err) => report
                    .failures
                    .push(format!("instance {i}: `{plan}` fails to verify: {err}")),
            }
        }
    }
    report
}

/// Raising any assumption never lowers the propagated bound.
pub fn propagator_monotonicity_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::new("bound-monotonicity", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        report.instances += 1;
        let env = gen_plan_env(&mut rng, 10, false);
        let fragment = if i % 2 == 0 {
            PlanFragment::Full
        } else {
            PlanFragment::TupleSafe
        };
        let plan = gen_plan(&mut rng, &env, 4, fragment);
        let l = env.lattice;
        let mut low = BTreeMap::new();
        let mut high = BTreeMap::new();
        for name in plan.table_refs() {
            let k = rng.gen_range(0..=10u32);
            let k2 = rng.gen_range(k..=10u32);
            low.insert(name.to_string(), l.chain_degree(k).unwrap());
            high.insert(name.to_string(), l.chain_degree(k2).unwrap());
        }
        let bl = propagate_bound(&plan, l, &low).unwrap();
        let bh = propagate_bound(&plan, l, &high).unwrap();
        if !l.leq(bl.value, bh.value).unwrap() {
            report.failures.push(format!(
                "instance {i}: `{plan}`: bound {} under {:?} exceeds bound {} under {:?}",
                bl.value, low, bh.value, high
            ));
        }
    }
    report
}

/// Every suite at a size suitable for an interactive check.
pub fn all_suites(seed: u64) -> Vec<SuiteReport> {
    vec![
        adjointness_suite(seed, 1000),
        preservation_suite(seed, 100),
        oracle_equivalence_suite(seed, 60),
        specialization_suite(seed, 80),
        lemma_quasiorder_suite(seed, 80),
        boolean_degeneration_suite(seed, 50),
        parser_roundtrip_suite(seed),
        propagator_soundness_suite(seed, 60),
        propagator_monotonicity_suite(seed, 80),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_a_smoke_seed() {
        for report in all_suites(7) {
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn reports_render_failures() {
        let mut r = SuiteReport::new("demo", 3);
        r.instances = 2;
        assert!(r.passed());
        assert_eq!(r.summary(), "PASS demo: 2 instances, seed 3");
        r.failures.push("first".to_string());
        assert!(!r.passed());
        assert!(r.to_string().contains("FAIL demo"));
        assert!(r.to_string().contains("\n  first"));
    }
}
