//! Graded subsethood and similarity of whole tables.
//!
//! The rank-based degree compares tables tuple by tuple; the tuple-based
//! degree lets a tuple be covered by any similar tuple of the other table.
//! Both arise from one hedge-parameterized measure: the identity hedge
//! gives the tuple-based degree, globalization (with separating attribute
//! similarities) gives the rank-based one.
//!
//! All infima and suprema over the infinite tuple universe reduce exactly
//! to finite support sets: rank-based comparison adds one constant
//! default-vs-default term, and the tuple-based modes require zero
//! defaults, making off-support terms vacuous.

use crate::lattice::{Degree, Hedge, Lattice};
use crate::rdt::{OpError, OpErrorKind, RankedDataTable};
use crate::schema::{tuple_similarity, Domains};

/// Which inclusion measure to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComparisonMode {
    /// Tuplewise `D1(t) → D2(t)`.
    #[default]
    RankBased,
    /// `D1(t) → sup over t' of D2(t') ⊗ (t ≈ t')`.
    TupleBased,
    /// As tuple-based with the similarity stressed by a hedge.
    Hedged(Hedge),
}

/// Where the outer infimum ranges: the supports (exact, see module docs)
/// or a full enumeration of finite domains (for cross-checks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Enumeration {
    #[default]
    SupportUnion,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComparisonConfig {
    pub mode: ComparisonMode,
    pub enumeration: Enumeration,
}

impl ComparisonConfig {
    pub fn rank_based() -> Self {
        ComparisonConfig::default()
    }

    pub fn tuple_based() -> Self {
        ComparisonConfig {
            mode: ComparisonMode::TupleBased,
            ..Default::default()
        }
    }

    pub fn hedged(h: Hedge) -> Self {
        ComparisonConfig {
            mode: ComparisonMode::Hedged(h),
            ..Default::default()
        }
    }

    pub fn with_full_enumeration(mut self) -> Self {
        self.enumeration = Enumeration::Full;
        self
    }
}

fn require_comparable(d1: &RankedDataTable, d2: &RankedDataTable) -> Result<Lattice, OpError> {
    if d1.lattice() != d2.lattice() {
        return Err(OpError::new(
            OpErrorKind::LatticeMismatch,
            format!(
                "tables live in different lattices: {} vs {}",
                d1.lattice().kind(),
                d2.lattice().kind()
            ),
        ));
    }
    if d1.scheme() != d2.scheme() {
        return Err(OpError::new(
            OpErrorKind::SchemeMismatch,
            format!("schemes differ: {{{}}} vs {{{}}}", d1.scheme(), d2.scheme()),
        ));
    }
    Ok(d1.lattice())
}

/// The degree to which `d1` is included in `d2`.
pub fn subsethood(
    domains: &Domains,
    d1: &RankedDataTable,
    d2: &RankedDataTable,
    cfg: ComparisonConfig,
) -> Result<Degree, OpError> {
    let l = require_comparable(d1, d2)?;
    let hedge = match cfg.mode {
        ComparisonMode::RankBased => {
            return rank_based_subsethood(domains, &l, d1, d2, cfg.enumeration)
        }
        ComparisonMode::TupleBased => Hedge::Identity,
        ComparisonMode::Hedged(h) => h,
    };
    for t in [d1, d2] {
        if t.default_rank() != l.bot() {
            return Err(OpError::new(
                OpErrorKind::NonzeroDefaultUnsupported,
                format!(
                    "tuple-based comparison needs zero off-support ranks, table has default {}",
                    t.default_rank()
                ),
            ));
        }
    }
    let outer: Vec<_> = match cfg.enumeration {
        Enumeration::SupportUnion => d1.support().map(|(t, r)| (t.clone(), r)).collect(),
        Enumeration::Full => enumerate_or_err(domains, d1.scheme())?
            .into_iter()
            .map(|t| {
                let r = d1.rank_of(&t).expect("enumerated tuple conforms");
                (t, r)
            })
            .collect(),
    };
    let mut acc = l.top();
    for (t, r1) in outer {
        let mut sup = l.bot();
        for (t2, r2) in d2.support() {
            let s = tuple_similarity(&l, domains, &t, t2)?;
            let s = l.hedge(hedge, s)?;
            sup = l.join(sup, l.tnorm(r2, s)?)?;
        }
        acc = l.meet(acc, l.residuum(r1, sup)?)?;
    }
    Ok(acc)
}

fn rank_based_subsethood(
    domains: &Domains,
    l: &Lattice,
    d1: &RankedDataTable,
    d2: &RankedDataTable,
    enumeration: Enumeration,
) -> Result<Degree, OpError> {
    let mut acc = match enumeration {
        // one constant term covers every off-support tuple
        Enumeration::SupportUnion => l.residuum(d1.default_rank(), d2.default_rank())?,
        Enumeration::Full => l.top(),
    };
    let tuples: Vec<_> = match enumeration {
        Enumeration::SupportUnion => {
            let mut seen: Vec<_> = d1.support().map(|(t, _)| t.clone()).collect();
            for (t, _) in d2.support() {
                if !seen.contains(t) {
                    seen.push(t.clone());
                }
            }
            seen
        }
        Enumeration::Full => enumerate_or_err(domains, d1.scheme())?,
    };
    for t in tuples {
        let r1 = d1.rank_of(&t)?;
        let r2 = d2.rank_of(&t)?;
        acc = l.meet(acc, l.residuum(r1, r2)?)?;
    }
    Ok(acc)
}

/// The degree to which two tables are similar: the meet of the two
/// directed subsethood degrees.
pub fn table_similarity(
    domains: &Domains,
    d1: &RankedDataTable,
    d2: &RankedDataTable,
    cfg: ComparisonConfig,
) -> Result<Degree, OpError> {
    let l = require_comparable(d1, d2)?;
    let s12 = subsethood(domains, d1, d2, cfg)?;
    let s21 = subsethood(domains, d2, d1, cfg)?;
    Ok(l.meet(s12, s21)?)
}

fn enumerate_or_err(
    domains: &Domains,
    scheme: &crate::schema::RelationScheme,
) -> Result<Vec<crate::schema::Tuple>, OpError> {
    domains.enumerate_tuples(scheme).ok_or_else(|| {
        OpError::new(
            OpErrorKind::NotEnumerable,
            format!("full enumeration needs finitely enumerable domains for {{{scheme}}}"),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::schema::{
        AttrName, DomainWithSimilarity, RelationScheme, SimTable, Tuple, Value, ValueKind,
    };

    fn attr(s: &str) -> AttrName {
        AttrName::new(s).unwrap()
    }

    fn luk() -> Lattice {
        Lattice::lukasiewicz()
    }

    fn d(l: &Lattice, v: f64) -> Degree {
        l.degree(v).unwrap()
    }

    fn money_domains() -> Domains {
        let mut doms = Domains::new();
        doms.add_domain(DomainWithSimilarity::ramp("money", "100".parse().unwrap()).unwrap())
            .unwrap();
        doms.add_domain(DomainWithSimilarity::identity("city", ValueKind::Text))
            .unwrap();
        doms.bind(attr("PRICE"), "money").unwrap();
        doms.bind(attr("CITY"), "city").unwrap();
        doms
    }

    fn city_price(l: &Lattice, rows: &[(&str, &str, f64)]) -> RankedDataTable {
        RankedDataTable::new(
            *l,
            RelationScheme::new([attr("CITY"), attr("PRICE")]),
            rows.iter().map(|(c, p, r)| {
                (
                    Tuple::new([
                        (attr("CITY"), Value::text(c)),
                        (attr("PRICE"), Value::num(p)),
                    ]),
                    d(l, *r),
                )
            }),
            l.bot(),
        )
        .unwrap()
    }

    #[test]
    fn subsethood_is_reflexive_in_every_mode() {
        let l = luk();
        let doms = money_domains();
        let t = city_price(&l, &[("Vestal", "10", 0.9), ("Endicott", "30", 0.6)]);
        for cfg in [
            ComparisonConfig::rank_based(),
            ComparisonConfig::tuple_based(),
            ComparisonConfig::hedged(Hedge::Globalization),
        ] {
            assert_eq!(subsethood(&doms, &t, &t, cfg).unwrap(), l.top());
            assert_eq!(table_similarity(&doms, &t, &t, cfg).unwrap(), l.top());
        }
    }

    #[test]
    fn empty_table_is_included_everywhere() {
        let l = luk();
        let doms = money_domains();
        let t = city_price(&l, &[("Vestal", "10", 0.9)]);
        let empty = RankedDataTable::empty(l, t.scheme().clone());
        assert_eq!(
            subsethood(&doms, &empty, &t, ComparisonConfig::rank_based()).unwrap(),
            l.top()
        );
    }

    #[test]
    fn price_shift_separates_rank_and_tuple_modes() {
        let l = luk();
        let doms = money_domains();
        let d1 = city_price(&l, &[("Vestal", "10", 0.9)]);
        let d1p = city_price(&l, &[("Vestal", "11", 0.9)]);

        // rank-based: the moved tuple is simply gone, 0.9 → 0 = 0.1
        let s = subsethood(&doms, &d1, &d1p, ComparisonConfig::rank_based()).unwrap();
        assert!((s.to_f64() - 0.1).abs() < 1e-12);

        // tuple-based: a one-dollar-similar tuple covers it, 0.9 → 0.9 ⊗ 0.99
        let s = subsethood(&doms, &d1, &d1p, ComparisonConfig::tuple_based()).unwrap();
        assert!((s.to_f64() - 0.99).abs() < 1e-12);
    }

    #[test]
    fn rank_based_handles_nonzero_defaults() {
        let l = luk();
        let doms = money_domains();
        let t = city_price(&l, &[("Vestal", "10", 0.9)]);
        let shifted = t.a_shift(d(&l, 0.6)).unwrap();
        // every off-support tuple contributes default → 0 = 0.6
        let s = subsethood(&doms, &shifted, &t, ComparisonConfig::rank_based()).unwrap();
        assert!((s.to_f64() - 0.6).abs() < 1e-12);

        // tuple-based modes reject nonzero defaults
        let err = subsethood(&doms, &shifted, &t, ComparisonConfig::tuple_based()).unwrap_err();
        assert_eq!(err.kind, OpErrorKind::NonzeroDefaultUnsupported);
    }

    #[test]
    fn pointwise_similarity_example() {
        let l = luk();
        let doms = Domains::new();
        let scheme = RelationScheme::new([attr("K")]);
        let mk = |rows: &[(&str, f64)]| {
            RankedDataTable::new(
                l,
                scheme.clone(),
                rows.iter()
                    .map(|(k, r)| (Tuple::new([(attr("K"), Value::text(k))]), d(&l, *r))),
                l.bot(),
            )
            .unwrap()
        };
        let d1 = mk(&[("x", 0.9), ("y", 0.6)]);
        let d2 = mk(&[("x", 0.8), ("y", 0.7)]);
        let e = table_similarity(&doms, &d1, &d2, ComparisonConfig::rank_based()).unwrap();
        assert!((e.to_f64() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn e_is_meet_of_both_directions() {
        let l = luk();
        let doms = money_domains();
        let d1 = city_price(&l, &[("Vestal", "10", 0.9), ("Endicott", "30", 0.4)]);
        let d2 = city_price(&l, &[("Vestal", "10", 0.7), ("Endicott", "35", 0.4)]);
        for cfg in [ComparisonConfig::rank_based(), ComparisonConfig::tuple_based()] {
            let e = table_similarity(&doms, &d1, &d2, cfg).unwrap();
            let s12 = subsethood(&doms, &d1, &d2, cfg).unwrap();
            let s21 = subsethood(&doms, &d2, &d1, cfg).unwrap();
            assert_eq!(e, l.meet(s12, s21).unwrap());
        }
    }

    #[test]
    fn rank_based_bounds_tuple_based() {
        let l = luk();
        let doms = money_domains();
        let d1 = city_price(&l, &[("Vestal", "10", 0.9), ("Endicott", "30", 0.4)]);
        let d2 = city_price(&l, &[("Vestal", "12", 0.8)]);
        let s = subsethood(&doms, &d1, &d2, ComparisonConfig::rank_based()).unwrap();
        let sh = subsethood(&doms, &d1, &d2, ComparisonConfig::tuple_based()).unwrap();
        assert!(l.leq(s, sh).unwrap());
    }

    #[test]
    fn hedge_specializations() {
        let l = luk();
        // identity-similarity domains are separating, so globalization
        // must reproduce the rank-based degree
        let mut doms = Domains::new();
        doms.add_domain(
            DomainWithSimilarity::identity("k", ValueKind::Text)
                .with_values([Value::text("x"), Value::text("y"), Value::text("z")]),
        )
        .unwrap();
        doms.bind(attr("K"), "k").unwrap();
        let scheme = RelationScheme::new([attr("K")]);
        let mk = |rows: &[(&str, f64)]| {
            RankedDataTable::new(
                l,
                scheme.clone(),
                rows.iter()
                    .map(|(k, r)| (Tuple::new([(attr("K"), Value::text(k))]), d(&l, *r))),
                l.bot(),
            )
            .unwrap()
        };
        let d1 = mk(&[("x", 0.9), ("y", 0.6)]);
        let d2 = mk(&[("x", 0.8), ("z", 0.5)]);

        let glob = subsethood(&doms, &d1, &d2, ComparisonConfig::hedged(Hedge::Globalization))
            .unwrap();
        let rank = subsethood(&doms, &d1, &d2, ComparisonConfig::rank_based()).unwrap();
        assert_eq!(glob, rank);

        let ident =
            subsethood(&doms, &d1, &d2, ComparisonConfig::hedged(Hedge::Identity)).unwrap();
        let tuple = subsethood(&doms, &d1, &d2, ComparisonConfig::tuple_based()).unwrap();
        assert_eq!(ident, tuple);
    }

    #[test]
    fn full_enumeration_agrees_with_support_computation() {
        let l = luk();
        let mut doms = Domains::new();
        let mut sim = SimTable::new();
        sim.insert("k", &l, Value::text("x"), Value::text("y"), d(&l, 0.5))
            .unwrap();
        doms.add_domain(
            DomainWithSimilarity::table("k", ValueKind::Text, sim)
                .with_values([Value::text("z")]),
        )
        .unwrap();
        doms.bind(attr("K"), "k").unwrap();
        let scheme = RelationScheme::new([attr("K")]);
        let mk = |rows: &[(&str, f64)]| {
            RankedDataTable::new(
                l,
                scheme.clone(),
                rows.iter()
                    .map(|(k, r)| (Tuple::new([(attr("K"), Value::text(k))]), d(&l, *r))),
                l.bot(),
            )
            .unwrap()
        };
        let d1 = mk(&[("x", 0.9)]);
        let d2 = mk(&[("y", 0.7), ("z", 0.2)]);
        for cfg in [ComparisonConfig::rank_based(), ComparisonConfig::tuple_based()] {
            let support = subsethood(&doms, &d1, &d2, cfg).unwrap();
            let full = subsethood(&doms, &d1, &d2, cfg.with_full_enumeration()).unwrap();
            assert_eq!(support, full);
        }
    }

    #[test]
    fn mismatched_tables_are_rejected() {
        let l = luk();
        let doms = money_domains();
        let t = city_price(&l, &[("Vestal", "10", 0.9)]);
        let other = RankedDataTable::empty(l, RelationScheme::new([attr("K")]));
        assert_eq!(
            subsethood(&doms, &t, &other, ComparisonConfig::rank_based())
                .unwrap_err()
                .kind,
            OpErrorKind::SchemeMismatch
        );
        let chain = Lattice::chain(2).unwrap();
        let cheap = RankedDataTable::empty(chain, t.scheme().clone());
        assert_eq!(
            subsethood(&doms, &t, &cheap, ComparisonConfig::rank_based())
                .unwrap_err()
                .kind,
            OpErrorKind::LatticeMismatch
        );
    }
}
