//! Ranked data tables and their relational operations.
//!
//! A ranked data table maps tuples over a fixed relation scheme to degrees
//! of a residuated lattice. Tables are kept in canonical form: a finite map
//! of stored rows plus a `default_rank` for every other tuple, with no
//! stored rank equal to the default. Off-support ranks are constant, which
//! keeps shifts exact without materializing infinite tables; operations
//! whose off-support image would be tuple-dependent (selections, products,
//! joins) reject tables with a nonzero default instead of truncating.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{Degree, Lattice, LatticeError};
use crate::schema::{tuple_similarity, Domains, RelationScheme, SchemaError, Tuple, Value};
use crate::schema::AttrName;

/// Why a table operation was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpErrorKind {
    SchemeMismatch,
    SchemesNotDisjoint,
    LatticeMismatch,
    MissingSimilarity,
    NonzeroDefaultUnsupported,
    AttributeNotInScheme,
    NotEnumerable,
    InvalidValue,
}

impl fmt::Display for OpErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OpErrorKind::SchemeMismatch => "scheme_mismatch",
            OpErrorKind::SchemesNotDisjoint => "schemes_not_disjoint",
            OpErrorKind::LatticeMismatch => "lattice_mismatch",
            OpErrorKind::MissingSimilarity => "missing_similarity",
            OpErrorKind::NonzeroDefaultUnsupported => "nonzero_default_unsupported",
            OpErrorKind::AttributeNotInScheme => "attribute_not_in_scheme",
            OpErrorKind::NotEnumerable => "not_enumerable",
            OpErrorKind::InvalidValue => "invalid_value",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{kind}: {detail}")]
pub struct OpError {
    pub kind: OpErrorKind,
    pub detail: String,
}

impl OpError {
    pub fn new(kind: OpErrorKind, detail: impl Into<String>) -> Self {
        OpError {
            kind,
            detail: detail.into(),
        }
    }
}

impl From<SchemaError> for OpError {
    fn from(e: SchemaError) -> Self {
        let kind = match &e {
            SchemaError::UnboundAttribute(_) | SchemaError::UnknownDomain(_) => {
                OpErrorKind::MissingSimilarity
            }
            SchemaError::SchemesNotDisjoint(_) => OpErrorKind::SchemesNotDisjoint,
            SchemaError::SchemeMismatch { .. } | SchemaError::BadAttributeName(_) => {
                OpErrorKind::SchemeMismatch
            }
            SchemaError::Lattice(LatticeError::CarrierMismatch { .. }) => {
                OpErrorKind::LatticeMismatch
            }
            _ => OpErrorKind::InvalidValue,
        };
        OpError::new(kind, e.to_string())
    }
}

impl From<LatticeError> for OpError {
    fn from(e: LatticeError) -> Self {
        let kind = match &e {
            LatticeError::CarrierMismatch { .. } => OpErrorKind::LatticeMismatch,
            _ => OpErrorKind::InvalidValue,
        };
        OpError::new(kind, e.to_string())
    }
}

/// Pointwise combination connective for same-scheme tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineKind {
    Union,
    Meet,
    OTimes,
    ResiduumCw,
}

impl fmt::Display for CombineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CombineKind::Union => "union",
            CombineKind::Meet => "meet",
            CombineKind::OTimes => "otimes",
            CombineKind::ResiduumCw => "residuum",
        };
        f.write_str(s)
    }
}

/// Candidate range for closure selection: stored rows only, or every tuple
/// of the (finitely enumerable) domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateMode {
    #[default]
    Support,
    Full,
}

impl FromStr for CandidateMode {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "support" => Ok(CandidateMode::Support),
            "full" => Ok(CandidateMode::Full),
            other => Err(OpError::new(
                OpErrorKind::InvalidValue,
                format!("unknown candidate mode {other:?}: expected support or full"),
            )),
        }
    }
}

/// A ranked data table: finite rows plus a constant off-support rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedDataTable {
    lattice: Lattice,
    scheme: RelationScheme,
    rows: BTreeMap<Tuple, Degree>,
    default_rank: Degree,
}

impl RankedDataTable {
    /// Builds a table in canonical form. Tuples must conform to the scheme,
    /// ranks to the lattice; duplicated tuples are rejected.
    pub fn new<I: IntoIterator<Item = (Tuple, Degree)>>(
        lattice: Lattice,
        scheme: RelationScheme,
        rows: I,
        default_rank: Degree,
    ) -> Result<Self, OpError> {
        lattice.check_degree(default_rank)?;
        let mut map = BTreeMap::new();
        for (t, r) in rows {
            t.conforms_to(&scheme)?;
            lattice.check_degree(r)?;
            if map.insert(t.clone(), r).is_some() {
                return Err(OpError::new(
                    OpErrorKind::SchemeMismatch,
                    format!("duplicate tuple {t}"),
                ));
            }
        }
        map.retain(|_, r| *r != default_rank);
        Ok(RankedDataTable {
            lattice,
            scheme,
            rows: map,
            default_rank,
        })
    }

    pub fn empty(lattice: Lattice, scheme: RelationScheme) -> Self {
        RankedDataTable {
            lattice,
            scheme,
            rows: BTreeMap::new(),
            default_rank: lattice.bot(),
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn scheme(&self) -> &RelationScheme {
        &self.scheme
    }

    pub fn default_rank(&self) -> Degree {
        self.default_rank
    }

    /// Stored rows in deterministic tuple order.
    pub fn support(&self) -> impl Iterator<Item = (&Tuple, Degree)> {
        self.rows.iter().map(|(t, r)| (t, *r))
    }

    pub fn support_size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.default_rank == self.lattice.bot()
    }

    /// The rank of a tuple: stored, or the default.
    pub fn rank_of(&self, t: &Tuple) -> Result<Degree, OpError> {
        t.conforms_to(&self.scheme)?;
        Ok(self.rows.get(t).copied().unwrap_or(self.default_rank))
    }

    fn require_same_shape(&self, other: &RankedDataTable) -> Result<(), OpError> {
        if self.lattice != other.lattice {
            return Err(OpError::new(
                OpErrorKind::LatticeMismatch,
                format!(
                    "tables live in different lattices: {} vs {}",
                    self.lattice.kind(),
                    other.lattice.kind()
                ),
            ));
        }
        if self.scheme != other.scheme {
            return Err(OpError::new(
                OpErrorKind::SchemeMismatch,
                format!(
                    "schemes differ: {{{}}} vs {{{}}}",
                    self.scheme, other.scheme
                ),
            ));
        }
        Ok(())
    }

    fn require_zero_default(&self, op: &str) -> Result<(), OpError> {
        if self.default_rank != self.lattice.bot() {
            return Err(OpError::new(
                OpErrorKind::NonzeroDefaultUnsupported,
                format!(
                    "{op} needs a zero off-support rank, table has default {}",
                    self.default_rank
                ),
            ));
        }
        Ok(())
    }

    /// Pointwise ∨ / ∧ / ⊗ / → over the union of supports; the defaults are
    /// combined with the same connective.
    pub fn combine(&self, kind: CombineKind, other: &RankedDataTable) -> Result<Self, OpError> {
        self.require_same_shape(other)?;
        let l = self.lattice;
        let apply = |a: Degree, b: Degree| match kind {
            CombineKind::Union => l.join(a, b),
            CombineKind::Meet => l.meet(a, b),
            CombineKind::OTimes => l.tnorm(a, b),
            CombineKind::ResiduumCw => l.residuum(a, b),
        };
        let default = apply(self.default_rank, other.default_rank)?;
        let mut rows = BTreeMap::new();
        for t in self.rows.keys().chain(other.rows.keys()) {
            if rows.contains_key(t) {
                continue;
            }
            let r = apply(self.rank_of(t)?, other.rank_of(t)?)?;
            rows.insert(t.clone(), r);
        }
        rows.retain(|_, r| *r != default);
        Ok(RankedDataTable {
            lattice: l,
            scheme: self.scheme.clone(),
            rows,
            default_rank: default,
        })
    }

    /// The shift `a → D`, applied to stored ranks and the default alike.
    pub fn a_shift(&self, a: Degree) -> Result<Self, OpError> {
        let l = self.lattice;
        l.check_degree(a)?;
        let default = l.residuum(a, self.default_rank)?;
        let mut rows = BTreeMap::new();
        for (t, r) in &self.rows {
            rows.insert(t.clone(), l.residuum(a, *r)?);
        }
        rows.retain(|_, r| *r != default);
        Ok(RankedDataTable {
            lattice: l,
            scheme: self.scheme.clone(),
            rows,
            default_rank: default,
        })
    }

    /// Projection onto a sub-scheme: each output rank is the supremum of
    /// the ranks of stored extensions, joined with the default (eliminated
    /// domains are treated as inexhaustible).
    pub fn project(&self, target: &RelationScheme) -> Result<Self, OpError> {
        if !target.is_subset(&self.scheme) {
            let extra = target.difference(&self.scheme);
            return Err(OpError::new(
                OpErrorKind::AttributeNotInScheme,
                format!("projection attributes {{{extra}}} are not in scheme {{{}}}", self.scheme),
            ));
        }
        let l = self.lattice;
        let mut rows: BTreeMap<Tuple, Degree> = BTreeMap::new();
        for (t, r) in &self.rows {
            let key = t.restrict(target);
            let acc = match rows.get(&key) {
                Some(prev) => l.join(*prev, *r)?,
                None => *r,
            };
            rows.insert(key, acc);
        }
        for r in rows.values_mut() {
            *r = l.join(*r, self.default_rank)?;
        }
        rows.retain(|_, r| *r != self.default_rank);
        Ok(RankedDataTable {
            lattice: l,
            scheme: target.clone(),
            rows,
            default_rank: self.default_rank,
        })
    }

    /// Similarity-based selection: each rank is multiplied by how similar
    /// the row's `y`-value is to `d`.
    pub fn select_sim(
        &self,
        domains: &Domains,
        y: &AttrName,
        d: &Value,
    ) -> Result<Self, OpError> {
        self.require_zero_default("similarity selection")?;
        if !self.scheme.contains(y) {
            return Err(OpError::new(
                OpErrorKind::AttributeNotInScheme,
                format!("attribute {y} is not in scheme {{{}}}", self.scheme),
            ));
        }
        let l = self.lattice;
        let mut rows = BTreeMap::new();
        for (t, r) in &self.rows {
            let v = t.get(y).expect("row conforms to scheme");
            let s = domains.similarity(&l, y, v, d)?;
            let rank = l.tnorm(*r, s)?;
            if rank != l.bot() {
                rows.insert(t.clone(), rank);
            }
        }
        Ok(RankedDataTable {
            lattice: l,
            scheme: self.scheme.clone(),
            rows,
            default_rank: l.bot(),
        })
    }

    /// Attribute–attribute selection: ranks are multiplied by the similarity
    /// of the row's `p`- and `q`-values, which must share one domain.
    pub fn select_attr(
        &self,
        domains: &Domains,
        p: &AttrName,
        q: &AttrName,
    ) -> Result<Self, OpError> {
        self.require_zero_default("attribute selection")?;
        for a in [p, q] {
            if !self.scheme.contains(a) {
                return Err(OpError::new(
                    OpErrorKind::AttributeNotInScheme,
                    format!("attribute {a} is not in scheme {{{}}}", self.scheme),
                ));
            }
        }
        if !domains.share_domain(p, q)? {
            return Err(OpError::new(
                OpErrorKind::MissingSimilarity,
                format!("attributes {p} and {q} are bound to different domains"),
            ));
        }
        let l = self.lattice;
        let mut rows = BTreeMap::new();
        for (t, r) in &self.rows {
            let u = t.get(p).expect("row conforms to scheme");
            let v = t.get(q).expect("row conforms to scheme");
            let s = domains.similarity(&l, p, u, v)?;
            let rank = l.tnorm(*r, s)?;
            if rank != l.bot() {
                rows.insert(t.clone(), rank);
            }
        }
        Ok(RankedDataTable {
            lattice: l,
            scheme: self.scheme.clone(),
            rows,
            default_rank: l.bot(),
        })
    }

    /// Cartesian product over disjoint schemes; concatenated rows get the
    /// ⊗ of the constituent ranks.
    pub fn cartesian(&self, other: &RankedDataTable) -> Result<Self, OpError> {
        if self.lattice != other.lattice {
            return Err(OpError::new(
                OpErrorKind::LatticeMismatch,
                format!(
                    "tables live in different lattices: {} vs {}",
                    self.lattice.kind(),
                    other.lattice.kind()
                ),
            ));
        }
        if !self.scheme.is_disjoint(&other.scheme) {
            let shared: Vec<String> = self
                .scheme
                .attrs()
                .filter(|a| other.scheme.contains(a))
                .map(|a| a.to_string())
                .collect();
            return Err(OpError::new(
                OpErrorKind::SchemesNotDisjoint,
                format!("schemes share attributes {}", shared.join(", ")),
            ));
        }
        self.require_zero_default("Cartesian product")?;
        other.require_zero_default("Cartesian product")?;
        let l = self.lattice;
        let mut rows = BTreeMap::new();
        for (s, rs) in &self.rows {
            for (t, rt) in &other.rows {
                let rank = l.tnorm(*rs, *rt)?;
                if rank != l.bot() {
                    rows.insert(s.concat(t)?, rank);
                }
            }
        }
        Ok(RankedDataTable {
            lattice: l,
            scheme: self.scheme.union(&other.scheme),
            rows,
            default_rank: l.bot(),
        })
    }

    /// Similarity-based θ-join: the product filtered by `p ≈ q`.
    pub fn join_sim(
        &self,
        domains: &Domains,
        other: &RankedDataTable,
        p: &AttrName,
        q: &AttrName,
    ) -> Result<Self, OpError> {
        if !self.scheme.contains(p) {
            return Err(OpError::new(
                OpErrorKind::AttributeNotInScheme,
                format!("join attribute {p} is not in scheme {{{}}}", self.scheme),
            ));
        }
        if !other.scheme.contains(q) {
            return Err(OpError::new(
                OpErrorKind::AttributeNotInScheme,
                format!("join attribute {q} is not in scheme {{{}}}", other.scheme),
            ));
        }
        self.cartesian(other)?.select_attr(domains, p, q)
    }

    /// Closure selection: every candidate tuple receives the supremum of
    /// `D(t') ⊗ (t' ≈ t)` over stored rows, multiplied by `t(y) ≈ d`. In
    /// support mode candidates are the stored rows; in full mode they are
    /// all tuples of the scheme's (finitely enumerable) domains.
    pub fn select_closure(
        &self,
        domains: &Domains,
        y: &AttrName,
        d: &Value,
        mode: CandidateMode,
    ) -> Result<Self, OpError> {
        self.require_zero_default("closure selection")?;
        if !self.scheme.contains(y) {
            return Err(OpError::new(
                OpErrorKind::AttributeNotInScheme,
                format!("attribute {y} is not in scheme {{{}}}", self.scheme),
            ));
        }
        let l = self.lattice;
        let candidates: Vec<Tuple> = match mode {
            CandidateMode::Support => self.rows.keys().cloned().collect(),
            CandidateMode::Full => domains.enumerate_tuples(&self.scheme).ok_or_else(|| {
                OpError::new(
                    OpErrorKind::NotEnumerable,
                    format!(
                        "full candidate mode needs finitely enumerable domains for {{{}}}",
                        self.scheme
                    ),
                )
            })?,
        };
        let mut rows = BTreeMap::new();
        for t in candidates {
            let mut sup = l.bot();
            for (t2, r) in &self.rows {
                let sim = tuple_similarity(&l, domains, t2, &t)?;
                sup = l.join(sup, l.tnorm(*r, sim)?)?;
            }
            let v = t.get(y).expect("candidate conforms to scheme");
            let s = domains.similarity(&l, y, v, d)?;
            let rank = l.tnorm(sup, s)?;
            if rank != l.bot() {
                rows.insert(t, rank);
            }
        }
        Ok(RankedDataTable {
            lattice: l,
            scheme: self.scheme.clone(),
            rows,
            default_rank: l.bot(),
        })
    }
}
