//! Complete residuated lattices as the structure of ranks.
//!
//! A lattice `⟨L, ∧, ∨, ⊗, →, 0, 1⟩` supplies the infimum, supremum,
//! multiplication (t-norm) and its adjoint residuum over a carrier of truth
//! degrees. Four carriers are shipped:
//!
//! * `lukasiewicz` — `[0,1]` with `a ⊗ b = max(a+b-1, 0)`, `a → b = min(1-a+b, 1)`
//! * `goedel`      — `[0,1]` with `a ⊗ b = min(a, b)`, `a → b = 1` if `a ≤ b` else `b`
//! * `product`     — `[0,1]` with `a ⊗ b = a·b`, `a → b = 1` if `a ≤ b` else `b/a`
//! * `chain(n)`    — `{0, 1/n, …, 1}` with Łukasiewicz operations, which are
//!   closed on the chain and evaluate in exact integer arithmetic
//!
//! Degrees remember which carrier they belong to; operations refuse operands
//! from a different lattice instance.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::decimal::Decimal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degree {degree} does not belong to the {lattice} carrier")]
    CarrierMismatch { degree: String, lattice: String },
    #[error("degree {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("degree {0} is not an exact multiple of 1/{1}")]
    NotOnChain(String, u32),
    #[error("chain size must be at least 1")]
    EmptyChain,
    #[error("unknown lattice kind {0:?}")]
    UnknownKind(String),
}

/// Which residuated lattice governs a set of ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    Lukasiewicz,
    Goedel,
    Product,
    Chain(u32),
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Lukasiewicz => write!(f, "lukasiewicz"),
            LatticeKind::Goedel => write!(f, "goedel"),
            LatticeKind::Product => write!(f, "product"),
            LatticeKind::Chain(n) => write!(f, "chain({n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Repr {
    Real(f64),
    Chain { num: u32, den: u32 },
}

/// An element of a lattice carrier.
///
/// Real degrees are 64-bit floats in `[0, 1]`; chain degrees are exact
/// numerators `k` of `k/n`. Degrees are only constructed through a
/// [`Lattice`], which guarantees carrier membership.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degree(Repr);

// no NaN by construction: constructors validate, operations stay in [0, 1]
impl Eq for Degree {}

impl Degree {
    pub fn to_f64(&self) -> f64 {
        match self.0 {
            Repr::Real(v) => v,
            Repr::Chain { num, den } => num as f64 / den as f64,
        }
    }

    /// Compares two degrees of the same carrier. `None` when the carriers
    /// differ, mirroring the mixing rule of the operations.
    pub fn partial_cmp_same_carrier(&self, other: &Degree) -> Option<std::cmp::Ordering> {
        match (self.0, other.0) {
            (Repr::Real(a), Repr::Real(b)) => a.partial_cmp(&b),
            (Repr::Chain { num: a, den: n }, Repr::Chain { num: b, den: m }) if n == m => {
                Some(a.cmp(&b))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Real(v) => write!(f, "{v}"),
            Repr::Chain { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

/// A truth-stressing hedge, a unary operation on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hedge {
    #[default]
    Identity,
    /// `1 ↦ 1`, everything below 1 collapses to 0.
    Globalization,
}

impl FromStr for Hedge {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(Hedge::Identity),
            "globalization" => Ok(Hedge::Globalization),
            other => Err(format!("unknown hedge {other:?}")),
        }
    }
}

/// A complete residuated lattice instance.
///
/// Immutable and `Copy`; all operations are pure, so instances can be shared
/// and sent across threads freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    kind: LatticeKind,
}

impl Lattice {
    pub fn new(kind: LatticeKind) -> Result<Self, LatticeError> {
        if let LatticeKind::Chain(0) = kind {
            return Err(LatticeError::EmptyChain);
        }
        Ok(Lattice { kind })
    }

    pub fn lukasiewicz() -> Self {
        Lattice {
            kind: LatticeKind::Lukasiewicz,
        }
    }

    pub fn goedel() -> Self {
        Lattice {
            kind: LatticeKind::Goedel,
        }
    }

    pub fn product() -> Self {
        Lattice {
            kind: LatticeKind::Product,
        }
    }

    pub fn chain(n: u32) -> Result<Self, LatticeError> {
        Lattice::new(LatticeKind::Chain(n))
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn bot(&self) -> Degree {
        match self.kind {
            LatticeKind::Chain(n) => Degree(Repr::Chain { num: 0, den: n }),
            _ => Degree(Repr::Real(0.0)),
        }
    }

    pub fn top(&self) -> Degree {
        match self.kind {
            LatticeKind::Chain(n) => Degree(Repr::Chain { num: n, den: n }),
            _ => Degree(Repr::Real(1.0)),
        }
    }

    /// Constructs a degree from a float. Only valid for the `[0,1]` carriers.
    pub fn degree(&self, v: f64) -> Result<Degree, LatticeError> {
        match self.kind {
            LatticeKind::Chain(n) => Err(LatticeError::CarrierMismatch {
                degree: v.to_string(),
                lattice: LatticeKind::Chain(n).to_string(),
            }),
            _ => {
                if !(0.0..=1.0).contains(&v) {
                    return Err(LatticeError::OutOfRange(v.to_string()));
                }
                Ok(Degree(Repr::Real(v)))
            }
        }
    }

    /// Constructs the chain degree `k/n`. Only valid for chain carriers.
    pub fn chain_degree(&self, k: u32) -> Result<Degree, LatticeError> {
        match self.kind {
            LatticeKind::Chain(n) => {
                if k > n {
                    Err(LatticeError::OutOfRange(format!("{k}/{n}")))
                } else {
                    Ok(Degree(Repr::Chain { num: k, den: n }))
                }
            }
            other => Err(LatticeError::CarrierMismatch {
                degree: format!("{k} (chain numerator)"),
                lattice: other.to_string(),
            }),
        }
    }

    /// Parses a decimal literal into a carrier degree. On chains the literal
    /// must be an exact multiple of `1/n`; nothing is silently rounded.
    pub fn degree_from_decimal(&self, d: &Decimal) -> Result<Degree, LatticeError> {
        if d.is_negative() || *d > Decimal::one() {
            return Err(LatticeError::OutOfRange(d.to_string()));
        }
        match self.kind {
            LatticeKind::Chain(n) => match d.as_chain_numerator(n) {
                Some(k) => Ok(Degree(Repr::Chain { num: k, den: n })),
                None => Err(LatticeError::NotOnChain(d.to_string(), n)),
            },
            _ => Ok(Degree(Repr::Real(d.to_f64()))),
        }
    }

    /// All carrier elements, for exhaustive law checks. Chains only.
    pub fn enumerate(&self) -> Option<Vec<Degree>> {
        match self.kind {
            LatticeKind::Chain(n) => {
                Some((0..=n).map(|k| Degree(Repr::Chain { num: k, den: n })).collect())
            }
            _ => None,
        }
    }

    fn check(&self, d: Degree) -> Result<(), LatticeError> {
        let ok = match (self.kind, d.0) {
            (LatticeKind::Chain(n), Repr::Chain { den, num }) => den == n && num <= n,
            (LatticeKind::Chain(_), Repr::Real(_)) => false,
            (_, Repr::Real(v)) => (0.0..=1.0).contains(&v),
            (_, Repr::Chain { .. }) => false,
        };
        if ok {
            Ok(())
        } else {
            Err(LatticeError::CarrierMismatch {
                degree: d.to_string(),
                lattice: self.kind.to_string(),
            })
        }
    }

    fn check2(&self, a: Degree, b: Degree) -> Result<(), LatticeError> {
        self.check(a)?;
        self.check(b)
    }

    /// Validates that a degree belongs to this carrier.
    pub fn check_degree(&self, d: Degree) -> Result<(), LatticeError> {
        self.check(d)
    }

    pub fn leq(&self, a: Degree, b: Degree) -> Result<bool, LatticeError> {
        self.check2(a, b)?;
        Ok(match (a.0, b.0) {
            (Repr::Real(x), Repr::Real(y)) => x <= y,
            (Repr::Chain { num: x, .. }, Repr::Chain { num: y, .. }) => x <= y,
            _ => unreachable!("check2 rules out mixed representations"),
        })
    }

    pub fn meet(&self, a: Degree, b: Degree) -> Result<Degree, LatticeError> {
        self.check2(a, b)?;
        Ok(if self.leq(a, b)? { a } else { b })
    }

    pub fn join(&self, a: Degree, b: Degree) -> Result<Degree, LatticeError> {
        self.check2(a, b)?;
        Ok(if self.leq(a, b)? { b } else { a })
    }

    pub fn tnorm(&self, a: Degree, b: Degree) -> Result<Degree, LatticeError> {
        self.check2(a, b)?;
        Ok(match (self.kind, a.0, b.0) {
            (LatticeKind::Lukasiewicz, Repr::Real(x), Repr::Real(y)) => {
                // top is exactly neutral; the formula would add an ulp of noise
                Degree(Repr::Real(if x == 1.0 {
                    y
                } else if y == 1.0 {
                    x
                } else {
                    (x + y - 1.0).max(0.0)
                }))
            }
            (LatticeKind::Goedel, Repr::Real(x), Repr::Real(y)) => Degree(Repr::Real(x.min(y))),
            (LatticeKind::Product, Repr::Real(x), Repr::Real(y)) => Degree(Repr::Real(x * y)),
            (LatticeKind::Chain(n), Repr::Chain { num: x, .. }, Repr::Chain { num: y, .. }) => {
                Degree(Repr::Chain {
                    num: (x + y).saturating_sub(n),
                    den: n,
                })
            }
            _ => unreachable!("check2 rules out mixed representations"),
        })
    }

    pub fn residuum(&self, a: Degree, b: Degree) -> Result<Degree, LatticeError> {
        self.check2(a, b)?;
        Ok(match (self.kind, a.0, b.0) {
            (LatticeKind::Lukasiewicz, Repr::Real(x), Repr::Real(y)) => {
                // x <= y gives exactly 1 without float noise
                Degree(Repr::Real(if x <= y { 1.0 } else { (1.0 - x + y).min(1.0) }))
            }
            (LatticeKind::Goedel, Repr::Real(x), Repr::Real(y)) => {
                Degree(Repr::Real(if x <= y { 1.0 } else { y }))
            }
            (LatticeKind::Product, Repr::Real(x), Repr::Real(y)) => {
                // x = 0 falls under x <= y, so 0 → b = 1 as the supremum
                // definition requires
                Degree(Repr::Real(if x <= y { 1.0 } else { y / x }))
            }
            (LatticeKind::Chain(n), Repr::Chain { num: x, .. }, Repr::Chain { num: y, .. }) => {
                Degree(Repr::Chain {
                    num: (n - x + y).min(n),
                    den: n,
                })
            }
            _ => unreachable!("check2 rules out mixed representations"),
        })
    }

    /// `a ↔ b = (a → b) ∧ (b → a)`.
    pub fn biresiduum(&self, a: Degree, b: Degree) -> Result<Degree, LatticeError> {
        let ab = self.residuum(a, b)?;
        let ba = self.residuum(b, a)?;
        self.meet(ab, ba)
    }

    pub fn hedge(&self, h: Hedge, a: Degree) -> Result<Degree, LatticeError> {
        self.check(a)?;
        Ok(match h {
            Hedge::Identity => a,
            Hedge::Globalization => {
                if a == self.top() {
                    self.top()
                } else {
                    self.bot()
                }
            }
        })
    }

    /// Infimum of an iterator of degrees; `top` for the empty family.
    pub fn inf<I: IntoIterator<Item = Degree>>(&self, items: I) -> Result<Degree, LatticeError> {
        let mut acc = self.top();
        for d in items {
            acc = self.meet(acc, d)?;
        }
        Ok(acc)
    }

    /// Supremum of an iterator of degrees; `bot` for the empty family.
    pub fn sup<I: IntoIterator<Item = Degree>>(&self, items: I) -> Result<Degree, LatticeError> {
        let mut acc = self.bot();
        for d in items {
            acc = self.join(acc, d)?;
        }
        Ok(acc)
    }
}

impl FromStr for LatticeKind {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lukasiewicz" => Ok(LatticeKind::Lukasiewicz),
            "goedel" | "godel" => Ok(LatticeKind::Goedel),
            "product" => Ok(LatticeKind::Product),
            "chain" => Err(LatticeError::UnknownKind(
                "chain requires a size, e.g. chain(4)".into(),
            )),
            other => {
                if let Some(n) = other
                    .strip_prefix("chain(")
                    .and_then(|r| r.strip_suffix(')'))
                {
                    let n: u32 = n
                        .parse()
                        .map_err(|_| LatticeError::UnknownKind(other.to_string()))?;
                    if n == 0 {
                        return Err(LatticeError::EmptyChain);
                    }
                    Ok(LatticeKind::Chain(n))
                } else {
                    Err(LatticeError::UnknownKind(other.to_string()))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn luk() -> Lattice {
        Lattice::lukasiewicz()
    }

    fn d(l: &Lattice, v: f64) -> Degree {
        l.degree(v).unwrap()
    }

    #[test]
    fn tnorm_examples() {
        let l = luk();
        assert!((l.tnorm(d(&l, 0.93), d(&l, 0.98)).unwrap().to_f64() - 0.91).abs() < 1e-12);
        // 1 is neutral in every lattice
        for lat in [luk(), Lattice::goedel(), Lattice::product()] {
            let a = d(&lat, 0.42);
            assert_eq!(lat.tnorm(a, lat.top()).unwrap(), a);
        }
        let g = Lattice::goedel();
        assert_eq!(g.tnorm(d(&g, 0.4), d(&g, 0.7)).unwrap().to_f64(), 0.4);
    }

    #[test]
    fn residuum_examples() {
        let l = luk();
        assert!((l.residuum(d(&l, 0.9), d(&l, 0.7)).unwrap().to_f64() - 0.8).abs() < 1e-12);
        // a ≤ b gives a → b = 1
        for lat in [luk(), Lattice::goedel(), Lattice::product()] {
            assert_eq!(
                lat.residuum(d(&lat, 0.2), d(&lat, 0.9)).unwrap(),
                lat.top()
            );
        }
        let p = Lattice::product();
        assert!((p.residuum(d(&p, 0.8), d(&p, 0.2)).unwrap().to_f64() - 0.25).abs() < 1e-12);
        assert_eq!(p.residuum(p.bot(), d(&p, 0.3)).unwrap(), p.top());
    }

    #[test]
    fn biresiduum_examples() {
        let l = luk();
        assert!((l.biresiduum(d(&l, 0.89), d(&l, 0.91)).unwrap().to_f64() - 0.98).abs() < 1e-12);
        assert_eq!(l.biresiduum(d(&l, 0.37), d(&l, 0.37)).unwrap(), l.top());
        assert!((l.biresiduum(d(&l, 0.5), d(&l, 0.0)).unwrap().to_f64() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hedge_examples() {
        let l = luk();
        assert_eq!(l.hedge(Hedge::Identity, d(&l, 0.7)).unwrap(), d(&l, 0.7));
        assert_eq!(l.hedge(Hedge::Globalization, l.top()).unwrap(), l.top());
        assert_eq!(l.hedge(Hedge::Globalization, d(&l, 0.999)).unwrap(), l.bot());
    }

    #[test]
    fn chain_carrier_is_closed_and_exact() {
        let c = Lattice::chain(2).unwrap();
        let half = c.chain_degree(1).unwrap();
        assert_eq!(c.tnorm(half, half).unwrap(), c.bot());
        let all = c.enumerate().unwrap();
        assert_eq!(all.len(), 3);
        for &a in &all {
            for &b in &all {
                // both operations land back on the chain
                c.tnorm(a, b).unwrap();
                c.residuum(a, b).unwrap();
            }
        }
        assert!(Lattice::chain(0).is_err());
    }

    #[test]
    fn residuum_of_self_is_top() {
        let l = luk();
        let a = l.degree_from_decimal(&"0.3".parse().unwrap()).unwrap();
        assert_eq!(l.residuum(a, a).unwrap(), l.top());
    }

    #[test]
    fn mixed_lattice_operands_are_rejected() {
        let l = luk();
        let c5 = Lattice::chain(5).unwrap();
        let c7 = Lattice::chain(7).unwrap();
        let real = d(&l, 0.5);
        let on5 = c5.chain_degree(2).unwrap();
        let on7 = c7.chain_degree(2).unwrap();
        assert!(matches!(
            l.tnorm(real, on5),
            Err(LatticeError::CarrierMismatch { .. })
        ));
        assert!(matches!(
            c5.residuum(on5, on7),
            Err(LatticeError::CarrierMismatch { .. })
        ));
        assert!(matches!(
            c5.meet(on5, real),
            Err(LatticeError::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn degree_literals_respect_the_carrier() {
        let c = Lattice::chain(4).unwrap();
        assert!(c.degree_from_decimal(&"0.75".parse().unwrap()).is_ok());
        assert!(matches!(
            c.degree_from_decimal(&"0.3".parse().unwrap()),
            Err(LatticeError::NotOnChain(..))
        ));
        let l = luk();
        assert!(matches!(
            l.degree_from_decimal(&"1.5".parse().unwrap()),
            Err(LatticeError::OutOfRange(..))
        ));
    }

    fn float_lattices() -> Vec<Lattice> {
        vec![luk(), Lattice::goedel(), Lattice::product()]
    }

    fn sample_degrees(l: &Lattice) -> Vec<Degree> {
        [0.0, 0.1, 0.25, 0.37, 0.5, 0.66, 0.75, 0.9, 0.98, 1.0]
            .iter()
            .map(|&v| d(l, v))
            .collect()
    }

    #[test]
    fn adjointness_on_samples() {
        // exhaustive on a chain
        let c = Lattice::chain(12).unwrap();
        let all = c.enumerate().unwrap();
        for &a in &all {
            for &b in &all {
                for &x in &all {
                    let lhs = c.leq(c.tnorm(a, b).unwrap(), x).unwrap();
                    let rhs = c.leq(a, c.residuum(b, x).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "adjointness failed at {a}, {b}, {x}");
                }
            }
        }
        // tolerance-robust on float carriers
        for l in float_lattices() {
            let s = sample_degrees(&l);
            for &a in &s {
                for &b in &s {
                    for &x in &s {
                        let prod = l.tnorm(a, b).unwrap().to_f64();
                        let res = l.residuum(b, x).unwrap().to_f64();
                        if prod <= x.to_f64() - TOL {
                            assert!(a.to_f64() <= res + TOL);
                        }
                        if a.to_f64() <= res - TOL {
                            assert!(prod <= x.to_f64() + TOL);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn graded_modus_ponens_sound() {
        for l in float_lattices() {
            let s = sample_degrees(&l);
            for &a in &s {
                for &b in &s {
                    let mp = l.tnorm(a, l.residuum(a, b).unwrap()).unwrap();
                    assert!(mp.to_f64() <= b.to_f64() + TOL);
                }
            }
        }
    }

    #[test]
    fn residuum_monotonicity() {
        for l in float_lattices() {
            let s = sample_degrees(&l);
            for i in 0..s.len() {
                for j in i..s.len() {
                    // s[i] <= s[j]
                    for &c in &s {
                        // antitone in the first argument
                        let hi = l.residuum(s[i], c).unwrap().to_f64();
                        let lo = l.residuum(s[j], c).unwrap().to_f64();
                        assert!(lo <= hi + TOL);
                        // monotone in the second
                        let lo2 = l.residuum(c, s[i]).unwrap().to_f64();
                        let hi2 = l.residuum(c, s[j]).unwrap().to_f64();
                        assert!(lo2 <= hi2 + TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn currying_law() {
        // a → (b → c) = (a ⊗ b) → c; exact on chains
        let ch = Lattice::chain(9).unwrap();
        let all = ch.enumerate().unwrap();
        for &a in &all {
            for &b in &all {
                for &c in &all {
                    let lhs = ch.residuum(a, ch.residuum(b, c).unwrap()).unwrap();
                    let rhs = ch.residuum(ch.tnorm(a, b).unwrap(), c).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        for l in float_lattices() {
            let s = sample_degrees(&l);
            for &a in &s {
                for &b in &s {
                    for &c in &s {
                        let lhs = l.residuum(a, l.residuum(b, c).unwrap()).unwrap().to_f64();
                        let rhs = l.residuum(l.tnorm(a, b).unwrap(), c).unwrap().to_f64();
                        assert!((lhs - rhs).abs() < TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn monoid_and_lattice_laws_on_chain() {
        let c = Lattice::chain(6).unwrap();
        let all = c.enumerate().unwrap();
        for &a in &all {
            assert_eq!(c.tnorm(a, c.top()).unwrap(), a);
            assert_eq!(c.meet(a, a).unwrap(), a);
            assert_eq!(c.join(a, a).unwrap(), a);
            for &b in &all {
                assert_eq!(c.tnorm(a, b).unwrap(), c.tnorm(b, a).unwrap());
                assert_eq!(c.meet(a, b).unwrap(), c.meet(b, a).unwrap());
                // absorption
                assert_eq!(c.meet(a, c.join(a, b).unwrap()).unwrap(), a);
                assert_eq!(c.join(a, c.meet(a, b).unwrap()).unwrap(), a);
                for &x in &all {
                    let l = c.tnorm(c.tnorm(a, b).unwrap(), x).unwrap();
                    let r = c.tnorm(a, c.tnorm(b, x).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn hedge_axioms() {
        let c = Lattice::chain(8).unwrap();
        let all = c.enumerate().unwrap();
        for h in [Hedge::Identity, Hedge::Globalization] {
            assert_eq!(c.hedge(h, c.top()).unwrap(), c.top());
            for &a in &all {
                let ha = c.hedge(h, a).unwrap();
                // a* ≤ a and idempotence
                assert!(c.leq(ha, a).unwrap());
                assert_eq!(c.hedge(h, ha).unwrap(), ha);
                for &b in &all {
                    if c.leq(a, b).unwrap() {
                        assert!(c.leq(ha, c.hedge(h, b).unwrap()).unwrap());
                    }
                    // a* ⊗ b* ≤ (a ⊗ b)*
                    let lhs = c.tnorm(ha, c.hedge(h, b).unwrap()).unwrap();
                    let rhs = c.hedge(h, c.tnorm(a, b).unwrap()).unwrap();
                    assert!(c.leq(lhs, rhs).unwrap());
                }
            }
        }
    }

    #[test]
    fn biresiduum_detects_equality_on_chains() {
        let c = Lattice::chain(10).unwrap();
        let all = c.enumerate().unwrap();
        for &a in &all {
            for &b in &all {
                let eq = c.biresiduum(a, b).unwrap() == c.top();
                assert_eq!(eq, a == b);
                assert_eq!(
                    c.biresiduum(a, b).unwrap(),
                    c.biresiduum(b, a).unwrap()
                );
            }
        }
    }
}
