//! Relation schemes, domains with similarities, and tuples.
//!
//! A domain pairs a value universe with a reflexive, symmetric similarity
//! relation ranked in the governing lattice. Three similarity shapes are
//! supported: strict identity, an explicit table of graded pairs, and a ramp
//! `max(1 - |u - v|/K, 0)` over numeric values. Attributes are bound to
//! domains through a [`Domains`] registry shared by all tables of a catalog.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::decimal::Decimal;
use crate::lattice::{Degree, Hedge, Lattice, LatticeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemaError {
    #[error("invalid attribute name {0:?}: expected letters, digits, underscore")]
    BadAttributeName(String),
    #[error("attribute {0} is not bound to any domain")]
    UnboundAttribute(String),
    #[error("unknown domain {0:?}")]
    UnknownDomain(String),
    #[error("duplicate domain id {0:?}")]
    DuplicateDomain(String),
    #[error("value {value} does not match domain {domain} of kind {kind}")]
    ValueKindMismatch {
        value: String,
        domain: String,
        kind: ValueKind,
    },
    #[error("ramp similarity requires a numeric domain and K > 0 (domain {0})")]
    BadRamp(String),
    #[error("similarity table of domain {domain} lists diagonal entry ({value}) below 1")]
    ReflexivityViolation { domain: String, value: String },
    #[error("similarity table of domain {domain} lists ({u}, {v}) with conflicting degrees")]
    AsymmetricPair { domain: String, u: String, v: String },
    #[error("schemes overlap on {0}")]
    SchemesNotDisjoint(String),
    #[error("tuple does not fit scheme {{{expected}}}: {detail}")]
    SchemeMismatch { expected: String, detail: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A validated attribute name: letters, digits and underscores.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrName(String);

impl AttrName {
    pub fn new(name: &str) -> Result<Self, SchemaError> {
        let ok = !name.is_empty()
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !name.chars().next().unwrap().is_ascii_digit();
        if ok {
            Ok(AttrName(name.to_string()))
        } else {
            Err(SchemaError::BadAttributeName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AttrName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for AttrName {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttrName::new(s)
    }
}

/// A finite set of attributes. Set semantics: order never matters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationScheme(BTreeSet<AttrName>);

impl RelationScheme {
    pub fn new<I: IntoIterator<Item = AttrName>>(attrs: I) -> Self {
        RelationScheme(attrs.into_iter().collect())
    }

    pub fn empty() -> Self {
        RelationScheme(BTreeSet::new())
    }

    pub fn attrs(&self) -> impl Iterator<Item = &AttrName> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &AttrName) -> bool {
        self.0.contains(a)
    }

    pub fn is_subset(&self, other: &RelationScheme) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &RelationScheme) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &RelationScheme) -> RelationScheme {
        RelationScheme(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &RelationScheme) -> RelationScheme {
        RelationScheme(self.0.difference(&other.0).cloned().collect())
    }
}

impl fmt::Display for RelationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|a| a.as_str()).collect();
        write!(f, "{}", names.join(", "))
    }
}

/// A domain value: text or an exact decimal number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Text(String),
    Num(Decimal),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Text(_) => ValueKind::Text,
            Value::Num(_) => ValueKind::Number,
        }
    }

    pub fn text(s: &str) -> Value {
        Value::Text(s.to_string())
    }

    pub fn num(s: &str) -> Value {
        Value::Num(s.parse().expect("valid decimal literal"))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Text(s) => f.write_str(s),
            Value::Num(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Text,
    Number,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueKind::Text => f.write_str("text"),
            ValueKind::Number => f.write_str("number"),
        }
    }
}

/// How a domain grades the similarity of its values.
#[derive(Debug, Clone, PartialEq)]
pub enum SimilaritySpec {
    /// `u ≈ v = 1` iff `u = v`, else 0.
    Identity,
    /// Explicit graded pairs; the diagonal is implicitly 1 and unlisted
    /// pairs default to 0.
    Table(SimTable),
    /// `u ≈ v = max(1 - |u - v|/K, 0)` over numeric values.
    Ramp { k: Decimal },
}

/// Symmetric table of similarity degrees, stored with canonically ordered
/// keys so each unordered pair appears once.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimTable {
    pairs: BTreeMap<(Value, Value), Degree>,
}

impl SimTable {
    pub fn new() -> Self {
        SimTable::default()
    }

    /// Inserts `u ≈ v = degree`. Duplicate or conflicting entries for the
    /// same unordered pair are rejected; diagonal entries must be 1.
    pub fn insert(
        &mut self,
        domain: &str,
        lattice: &Lattice,
        u: Value,
        v: Value,
        degree: Degree,
    ) -> Result<(), SchemaError> {
        if u == v {
            if degree != lattice.top() {
                return Err(SchemaError::ReflexivityViolation {
                    domain: domain.to_string(),
                    value: u.to_string(),
                });
            }
            return Ok(());
        }
        let key = if u <= v { (u, v) } else { (v, u) };
        match self.pairs.get(&key) {
            Some(existing) if *existing != degree => Err(SchemaError::AsymmetricPair {
                domain: domain.to_string(),
                u: key.0.to_string(),
                v: key.1.to_string(),
            }),
            _ => {
                self.pairs.insert(key, degree);
                Ok(())
            }
        }
    }

    pub fn get(&self, lattice: &Lattice, u: &Value, v: &Value) -> Degree {
        if u == v {
            return lattice.top();
        }
        let key = if u <= v {
            (u.clone(), v.clone())
        } else {
            (v.clone(), u.clone())
        };
        self.pairs.get(&key).copied().unwrap_or_else(|| lattice.bot())
    }

    pub fn values(&self) -> BTreeSet<Value> {
        self.pairs
            .keys()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Value, Value), &Degree)> {
        self.pairs.iter()
    }
}

/// A value domain together with its similarity relation.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainWithSimilarity {
    pub id: String,
    pub value_kind: ValueKind,
    pub spec: SimilaritySpec,
    /// Explicit finite universe for full-enumeration operations. For table
    /// similarities the values mentioned in pairs are always included.
    pub values: Option<BTreeSet<Value>>,
}

impl DomainWithSimilarity {
    pub fn identity(id: &str, kind: ValueKind) -> Self {
        DomainWithSimilarity {
            id: id.to_string(),
            value_kind: kind,
            spec: SimilaritySpec::Identity,
            values: None,
        }
    }

    pub fn ramp(id: &str, k: Decimal) -> Result<Self, SchemaError> {
        if k.is_negative() || k == Decimal::zero() {
            return Err(SchemaError::BadRamp(id.to_string()));
        }
        Ok(DomainWithSimilarity {
            id: id.to_string(),
            value_kind: ValueKind::Number,
            spec: SimilaritySpec::Ramp { k },
            values: None,
        })
    }

    pub fn table(id: &str, kind: ValueKind, table: SimTable) -> Self {
        let values = table.values();
        DomainWithSimilarity {
            id: id.to_string(),
            value_kind: kind,
            spec: SimilaritySpec::Table(table),
            values: Some(values),
        }
    }

    pub fn with_values<I: IntoIterator<Item = Value>>(mut self, vals: I) -> Self {
        let mut set = self.values.take().unwrap_or_default();
        set.extend(vals);
        self.values = Some(set);
        self
    }

    pub fn check_value(&self, v: &Value) -> Result<(), SchemaError> {
        if v.kind() != self.value_kind {
            return Err(SchemaError::ValueKindMismatch {
                value: v.to_string(),
                domain: self.id.clone(),
                kind: self.value_kind,
            });
        }
        Ok(())
    }

    /// The similarity degree `u ≈ v`.
    pub fn similarity(
        &self,
        lattice: &Lattice,
        u: &Value,
        v: &Value,
    ) -> Result<Degree, SchemaError> {
        self.check_value(u)?;
        self.check_value(v)?;
        match &self.spec {
            SimilaritySpec::Identity => Ok(if u == v { lattice.top() } else { lattice.bot() }),
            SimilaritySpec::Table(t) => Ok(t.get(lattice, u, v)),
            SimilaritySpec::Ramp { k } => {
                let (du, dv) = match (u, v) {
                    (Value::Num(a), Value::Num(b)) => (a, b),
                    _ => unreachable!("check_value enforces numeric kind"),
                };
                let dist = du.abs_diff(dv).to_f64();
                let s = (1.0 - dist / k.to_f64()).max(0.0);
                Ok(lattice.degree(s)?)
            }
        }
    }

    /// Finite universe of this domain, when one is declared. Ramps are never
    /// enumerable.
    pub fn enumerable_values(&self) -> Option<&BTreeSet<Value>> {
        match self.spec {
            SimilaritySpec::Ramp { .. } => None,
            _ => self.values.as_ref(),
        }
    }

    /// Checks reflexivity and symmetry by construction, and reports whether
    /// the similarity is ⊗-transitive and separating where that is decidable.
    pub fn validate(&self, lattice: &Lattice) -> ValidationReport {
        let mut report = ValidationReport {
            domain: self.id.clone(),
            reflexive: true,
            symmetric: true,
            transitive: None,
            separating: None,
            problems: Vec::new(),
        };
        match &self.spec {
            SimilaritySpec::Identity => {
                report.transitive = Some(true);
                report.separating = Some(true);
            }
            SimilaritySpec::Ramp { k } => {
                // antitone scaling of |u - v|; < 1 whenever u ≠ v, so
                // separating for every finite positive K
                report.separating = Some(!k.is_negative() && *k != Decimal::zero());
                report.transitive = None; // not decidable over an infinite carrier
            }
            SimilaritySpec::Table(t) => {
                let values: Vec<Value> = match &self.values {
                    Some(vs) => vs.iter().cloned().collect(),
                    None => t.values().into_iter().collect(),
                };
                let mut transitive = true;
                for a in &values {
                    for b in &values {
                        for c in &values {
                            let ab = t.get(lattice, a, b);
                            let bc = t.get(lattice, b, c);
                            let ac = t.get(lattice, a, c);
                            let lhs = lattice
                                .tnorm(ab, bc)
                                .expect("table degrees share the lattice");
                            if !lattice.leq(lhs, ac).unwrap() {
                                transitive = false;
                                report.problems.push(format!(
                                    "not transitive: ({a} ~ {b}) x ({b} ~ {c}) = {lhs} > {ac} = ({a} ~ {c})"
                                ));
                            }
                        }
                    }
                }
                report.transitive = Some(transitive);
                let separating = t
                    .iter()
                    .all(|((u, v), d)| u == v || *d != lattice.top());
                report.separating = Some(separating);
            }
        }
        report
    }
}

/// Result of validating one domain's similarity.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub domain: String,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: Option<bool>,
    pub separating: Option<bool>,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.reflexive && self.symmetric
    }
}

/// Registry binding attributes to domains. One per catalog.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Domains {
    domains: BTreeMap<String, DomainWithSimilarity>,
    bindings: BTreeMap<AttrName, String>,
}

impl Domains {
    pub fn new() -> Self {
        Domains::default()
    }

    pub fn add_domain(&mut self, d: DomainWithSimilarity) -> Result<(), SchemaError> {
        if self.domains.contains_key(&d.id) {
            return Err(SchemaError::DuplicateDomain(d.id));
        }
        self.domains.insert(d.id.clone(), d);
        Ok(())
    }

    pub fn bind(&mut self, attr: AttrName, domain_id: &str) -> Result<(), SchemaError> {
        if !self.domains.contains_key(domain_id) {
            return Err(SchemaError::UnknownDomain(domain_id.to_string()));
        }
        self.bindings.insert(attr, domain_id.to_string());
        Ok(())
    }

    pub fn domain_ids(&self) -> impl Iterator<Item = &str> {
        self.domains.keys().map(|s| s.as_str())
    }

    pub fn domain(&self, id: &str) -> Option<&DomainWithSimilarity> {
        self.domains.get(id)
    }

    pub fn domain_of(&self, attr: &AttrName) -> Result<&DomainWithSimilarity, SchemaError> {
        let id = self
            .bindings
            .get(attr)
            .ok_or_else(|| SchemaError::UnboundAttribute(attr.to_string()))?;
        self.domains
            .get(id)
            .ok_or_else(|| SchemaError::UnknownDomain(id.clone()))
    }

    pub fn is_bound(&self, attr: &AttrName) -> bool {
        self.bindings.contains_key(attr)
    }

    pub fn share_domain(&self, p: &AttrName, q: &AttrName) -> Result<bool, SchemaError> {
        Ok(self.domain_of(p)?.id == self.domain_of(q)?.id)
    }

    /// Similarity of two values of the attribute's domain.
    pub fn similarity(
        &self,
        lattice: &Lattice,
        attr: &AttrName,
        u: &Value,
        v: &Value,
    ) -> Result<Degree, SchemaError> {
        self.domain_of(attr)?.similarity(lattice, u, v)
    }

    pub fn validate_all(&self, lattice: &Lattice) -> Vec<ValidationReport> {
        self.domains.values().map(|d| d.validate(lattice)).collect()
    }

    /// Every tuple over the scheme, when all involved domains declare a
    /// finite universe. `None` if any domain is not enumerable.
    pub fn enumerate_tuples(&self, scheme: &RelationScheme) -> Option<Vec<Tuple>> {
        let mut per_attr: Vec<(AttrName, Vec<Value>)> = Vec::new();
        for attr in scheme.attrs() {
            let dom = self.domain_of(attr).ok()?;
            let vals = dom.enumerable_values()?;
            per_attr.push((attr.clone(), vals.iter().cloned().collect()));
        }
        let mut tuples = vec![Tuple::empty()];
        for (attr, vals) in per_attr {
            let mut next = Vec::with_capacity(tuples.len() * vals.len());
            for t in &tuples {
                for v in &vals {
                    let mut ext = t.clone();
                    ext.values.insert(attr.clone(), v.clone());
                    next.push(ext);
                }
            }
            tuples = next;
        }
        Some(tuples)
    }
}

/// A tuple over a relation scheme: one value per attribute.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tuple {
    values: BTreeMap<AttrName, Value>,
}

impl Tuple {
    pub fn empty() -> Self {
        Tuple::default()
    }

    pub fn new<I: IntoIterator<Item = (AttrName, Value)>>(pairs: I) -> Self {
        Tuple {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn scheme(&self) -> RelationScheme {
        RelationScheme(self.values.keys().cloned().collect())
    }

    pub fn get(&self, attr: &AttrName) -> Option<&Value> {
        self.values.get(attr)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AttrName, &Value)> {
        self.values.iter()
    }

    pub fn conforms_to(&self, scheme: &RelationScheme) -> Result<(), SchemaError> {
        if self.scheme() == *scheme {
            Ok(())
        } else {
            Err(SchemaError::SchemeMismatch {
                expected: scheme.to_string(),
                detail: format!("tuple has attributes {{{}}}", self.scheme()),
            })
        }
    }

    /// Restriction of the tuple to a sub-scheme.
    pub fn restrict(&self, scheme: &RelationScheme) -> Tuple {
        Tuple {
            values: self
                .values
                .iter()
                .filter(|(a, _)| scheme.contains(a))
                .map(|(a, v)| (a.clone(), v.clone()))
                .collect(),
        }
    }

    /// Concatenation of tuples over disjoint schemes.
    pub fn concat(&self, other: &Tuple) -> Result<Tuple, SchemaError> {
        for attr in other.values.keys() {
            if self.values.contains_key(attr) {
                return Err(SchemaError::SchemesNotDisjoint(attr.to_string()));
            }
        }
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|(a, v)| (a.clone(), v.clone())));
        Ok(Tuple { values })
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(a, v)| format!("{a}: {v}"))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `t ≈ t'`: the infimum over the scheme of per-attribute similarities,
/// optionally stressed by a hedge.
pub fn tuple_similarity(
    lattice: &Lattice,
    domains: &Domains,
    t: &Tuple,
    t2: &Tuple,
) -> Result<Degree, SchemaError> {
    if t.scheme() != t2.scheme() {
        return Err(SchemaError::SchemeMismatch {
            expected: t.scheme().to_string(),
            detail: format!("second tuple has attributes {{{}}}", t2.scheme()),
        });
    }
    let mut acc = lattice.top();
    for (attr, u) in t.iter() {
        let v = t2.get(attr).expect("schemes match");
        let s = domains.similarity(lattice, attr, u, v)?;
        acc = lattice.meet(acc, s)?;
    }
    Ok(acc)
}

/// `(t ≈ t')*` for a chosen hedge.
pub fn hedged_tuple_similarity(
    lattice: &Lattice,
    domains: &Domains,
    hedge: Hedge,
    t: &Tuple,
    t2: &Tuple,
) -> Result<Degree, SchemaError> {
    let s = tuple_similarity(lattice, domains, t, t2)?;
    Ok(lattice.hedge(hedge, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attr(s: &str) -> AttrName {
        AttrName::new(s).unwrap()
    }

    fn luk() -> Lattice {
        Lattice::lukasiewicz()
    }

    #[test]
    fn attribute_names_validate() {
        assert!(AttrName::new("PRICE").is_ok());
        assert!(AttrName::new("sq_ft2").is_ok());
        assert!(AttrName::new("").is_err());
        assert!(AttrName::new("no spaces").is_err());
        assert!(AttrName::new("2fast").is_err());
    }

    #[test]
    fn identity_similarity() {
        let l = luk();
        let d = DomainWithSimilarity::identity("house_id", ValueKind::Number);
        let v = Value::num("138");
        assert_eq!(d.similarity(&l, &v, &v).unwrap(), l.top());
        assert_eq!(
            d.similarity(&l, &v, &Value::num("140")).unwrap(),
            l.bot()
        );
        assert!(d.similarity(&l, &v, &Value::text("x")).is_err());
    }

    #[test]
    fn ramp_similarity() {
        let l = luk();
        let d = DomainWithSimilarity::ramp("money", "100".parse().unwrap()).unwrap();
        let s = d
            .similarity(&l, &Value::num("10"), &Value::num("40"))
            .unwrap();
        assert!((s.to_f64() - 0.7).abs() < 1e-12);
        // beyond K the ramp floors at 0
        assert_eq!(
            d.similarity(&l, &Value::num("0"), &Value::num("500")).unwrap(),
            l.bot()
        );
        assert!(DomainWithSimilarity::ramp("bad", "0".parse().unwrap()).is_err());
    }

    #[test]
    fn ramp_is_antitone_in_distance() {
        let l = luk();
        let d = DomainWithSimilarity::ramp("money", "100".parse().unwrap()).unwrap();
        let base = Value::num("50");
        let mut last = f64::INFINITY;
        for v in ["50", "60", "75", "100", "140", "200"] {
            let s = d.similarity(&l, &base, &Value::num(v)).unwrap().to_f64();
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn table_similarity_symmetry_completion() {
        let l = luk();
        let mut t = SimTable::new();
        t.insert(
            "city",
            &l,
            Value::text("Vestal"),
            Value::text("Endicott"),
            l.degree(0.7).unwrap(),
        )
        .unwrap();
        let d = DomainWithSimilarity::table("city", ValueKind::Text, t);
        let s = d
            .similarity(&l, &Value::text("Endicott"), &Value::text("Vestal"))
            .unwrap();
        assert_eq!(s, l.degree(0.7).unwrap());
        // unlisted pairs default to 0, diagonal to 1
        assert_eq!(
            d.similarity(&l, &Value::text("Vestal"), &Value::text("Nowhere"))
                .unwrap(),
            l.bot()
        );
        assert_eq!(
            d.similarity(&l, &Value::text("Vestal"), &Value::text("Vestal"))
                .unwrap(),
            l.top()
        );
    }

    #[test]
    fn validation_reports() {
        let l = luk();
        let ident = DomainWithSimilarity::identity("id", ValueKind::Text);
        let rep = ident.validate(&l);
        assert!(rep.is_valid());
        assert_eq!(rep.transitive, Some(true));
        assert_eq!(rep.separating, Some(true));

        // 0.9 (x) 0.9 = 0.8 > 0.2 breaks transitivity under Lukasiewicz
        let mut t = SimTable::new();
        let a = Value::text("a");
        let b = Value::text("b");
        let c = Value::text("c");
        t.insert("d", &l, a.clone(), b.clone(), l.degree(0.9).unwrap())
            .unwrap();
        t.insert("d", &l, b.clone(), c.clone(), l.degree(0.9).unwrap())
            .unwrap();
        t.insert("d", &l, a.clone(), c.clone(), l.degree(0.2).unwrap())
            .unwrap();
        let d = DomainWithSimilarity::table("d", ValueKind::Text, t);
        let rep = d.validate(&l);
        assert!(rep.is_valid());
        assert_eq!(rep.transitive, Some(false));

        // diagonal below 1 is a reflexivity error at construction
        let mut bad = SimTable::new();
        let err = bad.insert("d", &l, a.clone(), a.clone(), l.degree(0.5).unwrap());
        assert!(matches!(err, Err(SchemaError::ReflexivityViolation { .. })));

        // conflicting orientations of one pair are rejected
        let mut asym = SimTable::new();
        asym.insert("d", &l, a.clone(), b.clone(), l.degree(0.9).unwrap())
            .unwrap();
        let err = asym.insert("d", &l, b, a, l.degree(0.8).unwrap());
        assert!(matches!(err, Err(SchemaError::AsymmetricPair { .. })));
    }

    #[test]
    fn tuple_concat_examples() {
        let r = Tuple::new([(attr("CITY"), Value::text("Vestal"))]);
        let s = Tuple::new([(attr("NAME"), Value::text("Grant"))]);
        let rs = r.concat(&s).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.get(&attr("CITY")), Some(&Value::text("Vestal")));
        assert_eq!(rs.get(&attr("NAME")), Some(&Value::text("Grant")));

        assert_eq!(Tuple::empty().concat(&s).unwrap(), s);

        let a1 = Tuple::new([(attr("A"), Value::num("1"))]);
        let a2 = Tuple::new([(attr("A"), Value::num("2"))]);
        assert!(matches!(
            a1.concat(&a2),
            Err(SchemaError::SchemesNotDisjoint(_))
        ));
    }

    fn city_price_domains(l: &Lattice) -> Domains {
        let mut doms = Domains::new();
        doms.add_domain(DomainWithSimilarity::identity("city", ValueKind::Text))
            .unwrap();
        doms.add_domain(DomainWithSimilarity::ramp("money", "100".parse().unwrap()).unwrap())
            .unwrap();
        doms.bind(attr("CITY"), "city").unwrap();
        doms.bind(attr("PRICE"), "money").unwrap();
        let _ = l;
        doms
    }

    #[test]
    fn tuple_similarity_examples() {
        let l = luk();
        let doms = city_price_domains(&l);
        let t = Tuple::new([
            (attr("CITY"), Value::text("Vestal")),
            (attr("PRICE"), Value::num("10")),
        ]);
        assert_eq!(tuple_similarity(&l, &doms, &t, &t).unwrap(), l.top());

        let t2 = Tuple::new([
            (attr("CITY"), Value::text("Vestal")),
            (attr("PRICE"), Value::num("11")),
        ]);
        let s = tuple_similarity(&l, &doms, &t, &t2).unwrap();
        assert!((s.to_f64() - 0.99).abs() < 1e-12);

        // a zero component absorbs the infimum
        let t3 = Tuple::new([
            (attr("CITY"), Value::text("Elsewhere")),
            (attr("PRICE"), Value::num("10")),
        ]);
        assert_eq!(tuple_similarity(&l, &doms, &t, &t3).unwrap(), l.bot());

        let short = Tuple::new([(attr("CITY"), Value::text("Vestal"))]);
        assert!(tuple_similarity(&l, &doms, &t, &short).is_err());
    }

    #[test]
    fn enumerate_tuples_over_finite_domains() {
        let l = luk();
        let mut doms = Domains::new();
        let mut t = SimTable::new();
        t.insert("ab", &l, Value::text("a"), Value::text("b"), l.degree(0.5).unwrap())
            .unwrap();
        doms.add_domain(DomainWithSimilarity::table("ab", ValueKind::Text, t))
            .unwrap();
        doms.add_domain(
            DomainWithSimilarity::identity("xy", ValueKind::Text)
                .with_values([Value::text("x"), Value::text("y"), Value::text("z")]),
        )
        .unwrap();
        doms.bind(attr("P"), "ab").unwrap();
        doms.bind(attr("Q"), "xy").unwrap();
        let scheme = RelationScheme::new([attr("P"), attr("Q")]);
        let tuples = doms.enumerate_tuples(&scheme).unwrap();
        assert_eq!(tuples.len(), 6);

        // ramps are never enumerable
        let mut doms2 = Domains::new();
        doms2
            .add_domain(DomainWithSimilarity::ramp("m", "10".parse().unwrap()).unwrap())
            .unwrap();
        doms2.bind(attr("P"), "m").unwrap();
        let scheme2 = RelationScheme::new([attr("P")]);
        assert!(doms2.enumerate_tuples(&scheme2).is_none());
    }
}
