//! Decision procedures for ring-theoretic properties of semigroup rings
//! `D[Γ]`, driven by descriptors of `D` and `Γ`.
//!
//! Every verdict carries a certificate: an ordered list of steps, each naming
//! a rule, the statement it rests on, the inputs it used and its outcome. The
//! answer is the three-valued conjunction of the step outcomes, and every
//! step can be re-evaluated from its recorded inputs.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::affine::AffineSumMonoid;
use crate::arith::is_prime;
use crate::groups::{
    is_type_000, is_type_000_except_p, ChainScheme, ExceptPWitness, TorsionFreeGroupDescriptor, TypeWitness,
};
use crate::numon::NumericalMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u64),
    #[error("inconsistent flags: {0}")]
    InconsistentFlags(String),
    #[error("a field of characteristic 0 is infinite")]
    FiniteCharacteristicZero,
}

/// Three-valued truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::Unknown, _) | (_, Truth::Unknown) => Truth::Unknown,
            _ => Truth::True,
        }
    }

    pub fn all<I: IntoIterator<Item = Truth>>(it: I) -> Truth {
        it.into_iter().fold(Truth::True, Truth::and)
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl Serialize for Truth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Truth::True => s.serialize_bool(true),
            Truth::False => s.serialize_bool(false),
            Truth::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        })
    }
}

/// A property flag. `Attested` counts as true but records that the fact was
/// supplied rather than derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    True,
    False,
    Attested,
    Unknown,
}

impl Flag {
    pub fn truth(self) -> Truth {
        match self {
            Flag::True | Flag::Attested => Truth::True,
            Flag::False => Truth::False,
            Flag::Unknown => Truth::Unknown,
        }
    }

    fn holds(self) -> bool {
        self.truth() == Truth::True
    }
}

impl From<bool> for Flag {
    fn from(b: bool) -> Self {
        if b {
            Flag::True
        } else {
            Flag::False
        }
    }
}

impl Serialize for Flag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Flag::True => s.serialize_bool(true),
            Flag::False => s.serialize_bool(false),
            Flag::Attested => s.serialize_str("attested"),
            Flag::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for Flag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bool(bool),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Bool(b) => Ok(b.into()),
            Raw::Str(s) => match s.as_str() {
                "true" => Ok(Flag::True),
                "false" => Ok(Flag::False),
                "attested" => Ok(Flag::Attested),
                "unknown" => Ok(Flag::Unknown),
                other => Err(serde::de::Error::custom(format!("invalid flag {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    WeaklyKrull,
    Umt,
    Gcd,
    WeaklyFactorial,
    GeneralizedKrull,
}

/// `premise ⇒ conclusion` for both domains and monoids.
const IMPLICATIONS: [(Property, Property); 4] = [
    (Property::WeaklyFactorial, Property::WeaklyKrull),
    (Property::Gcd, Property::Umt),
    (Property::GeneralizedKrull, Property::WeaklyKrull),
    (Property::GeneralizedKrull, Property::Umt),
];

trait PropertyFlags {
    fn get(&self, p: Property) -> Flag;
    fn set(&mut self, p: Property, f: Flag);

    /// Propagate the implications, upgrading unknown conclusions and
    /// rejecting a false conclusion of a holding premise.
    fn close(&mut self) -> Result<(), DecideError> {
        loop {
            let mut changed = false;
            for (a, b) in IMPLICATIONS {
                let (fa, fb) = (self.get(a), self.get(b));
                if !fa.holds() {
                    continue;
                }
                match fb {
                    Flag::False => {
                        return Err(DecideError::InconsistentFlags(format!("{a:?} holds but {b:?} is false")))
                    }
                    Flag::Unknown => {
                        self.set(b, if fa == Flag::True { Flag::True } else { Flag::Attested });
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainFlags {
    /// `None` when unknown.
    pub characteristic: Option<u64>,
    pub is_field: Flag,
    pub weakly_krull: Flag,
    pub umt: Flag,
    pub gcd: Flag,
    pub weakly_factorial: Flag,
    pub generalized_krull: Flag,
    pub mori: Flag,
    pub conductor_nonzero: Flag,
}

impl PropertyFlags for DomainFlags {
    fn get(&self, p: Property) -> Flag {
        match p {
            Property::WeaklyKrull => self.weakly_krull,
            Property::Umt => self.umt,
            Property::Gcd => self.gcd,
            Property::WeaklyFactorial => self.weakly_factorial,
            Property::GeneralizedKrull => self.generalized_krull,
        }
    }

    fn set(&mut self, p: Property, f: Flag) {
        match p {
            Property::WeaklyKrull => self.weakly_krull = f,
            Property::Umt => self.umt = f,
            Property::Gcd => self.gcd = f,
            Property::WeaklyFactorial => self.weakly_factorial = f,
            Property::GeneralizedKrull => self.generalized_krull = f,
        }
    }
}

impl DomainFlags {
    fn field(characteristic: u64) -> Self {
        Self {
            characteristic: Some(characteristic),
            is_field: Flag::True,
            weakly_krull: Flag::True,
            umt: Flag::True,
            gcd: Flag::True,
            weakly_factorial: Flag::True,
            generalized_krull: Flag::True,
            mori: Flag::True,
            conductor_nonzero: Flag::True,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    PrimeField {
        p: u64,
    },
    SymbolicField {
        characteristic: u64,
        infinite: bool,
        pseudo_hilbertian: bool,
    },
    IntegersZ,
    /// An order in a number field: one-dimensional noetherian with nonzero
    /// conductor, whose localizations have Krull integral closures.
    OrderInNumberField {
        label: String,
    },
    Custom,
}

/// An integral domain `D`, by kind and property flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DomainRaw")]
pub struct DomainDescriptor {
    #[serde(flatten)]
    kind: DomainKind,
    flags: DomainFlags,
}

#[derive(Deserialize)]
struct DomainRaw {
    #[serde(flatten)]
    kind: DomainKind,
    flags: Option<DomainFlags>,
}

impl TryFrom<DomainRaw> for DomainDescriptor {
    type Error = DecideError;
    fn try_from(r: DomainRaw) -> Result<Self, DecideError> {
        let built = match (&r.kind, r.flags.clone()) {
            (DomainKind::Custom, Some(f)) => return Self::custom(f),
            (DomainKind::Custom, None) => {
                return Err(DecideError::InconsistentFlags("a custom domain needs explicit flags".into()))
            }
            (DomainKind::PrimeField { p }, _) => Self::prime_field(*p)?,
            (DomainKind::SymbolicField { characteristic, infinite, pseudo_hilbertian }, _) => {
                Self::symbolic_field(*characteristic, *infinite, *pseudo_hilbertian)?
            }
            (DomainKind::IntegersZ, _) => Self::integers(),
            (DomainKind::OrderInNumberField { label }, _) => Self::order_in_number_field(label),
        };
        match r.flags {
            Some(f) if f != built.flags => {
                Err(DecideError::InconsistentFlags("flags of a built-in kind differ from its derived flags".into()))
            }
            _ => Ok(built),
        }
    }
}

fn check_characteristic(c: u64) -> Result<(), DecideError> {
    if c == 0 || is_prime(c) {
        Ok(())
    } else {
        Err(DecideError::InvalidCharacteristic(c))
    }
}

impl DomainDescriptor {
    pub fn prime_field(p: u64) -> Result<Self, DecideError> {
        if !is_prime(p) {
            return Err(DecideError::InvalidCharacteristic(p));
        }
        Ok(Self { kind: DomainKind::PrimeField { p }, flags: DomainFlags::field(p) })
    }

    pub fn symbolic_field(characteristic: u64, infinite: bool, pseudo_hilbertian: bool) -> Result<Self, DecideError> {
        check_characteristic(characteristic)?;
        if characteristic == 0 && !infinite {
            return Err(DecideError::FiniteCharacteristicZero);
        }
        Ok(Self {
            kind: DomainKind::SymbolicField { characteristic, infinite, pseudo_hilbertian },
            flags: DomainFlags::field(characteristic),
        })
    }

    /// `Z`: a principal ideal domain, hence factorial, Krull and UMT.
    pub fn integers() -> Self {
        Self {
            kind: DomainKind::IntegersZ,
            flags: DomainFlags {
                characteristic: Some(0),
                is_field: Flag::False,
                weakly_krull: Flag::True,
                umt: Flag::True,
                gcd: Flag::True,
                weakly_factorial: Flag::True,
                generalized_krull: Flag::True,
                mori: Flag::True,
                conductor_nonzero: Flag::True,
            },
        }
    }

    pub fn order_in_number_field(label: &str) -> Self {
        Self {
            kind: DomainKind::OrderInNumberField { label: label.to_owned() },
            flags: DomainFlags {
                characteristic: Some(0),
                is_field: Flag::False,
                weakly_krull: Flag::Attested,
                umt: Flag::Attested,
                gcd: Flag::Unknown,
                weakly_factorial: Flag::Unknown,
                generalized_krull: Flag::Unknown,
                mori: Flag::True,
                conductor_nonzero: Flag::True,
            },
        }
    }

    /// Explicit flags, closed under the standard implications
    /// (weakly factorial ⇒ weakly Krull, GCD ⇒ UMT, generalized Krull ⇒
    /// weakly Krull UMT). A field flag forces the field convention.
    pub fn custom(mut flags: DomainFlags) -> Result<Self, DecideError> {
        if let Some(c) = flags.characteristic {
            check_characteristic(c)?;
        }
        if flags.is_field.holds() {
            let all = [flags.weakly_krull, flags.umt, flags.gcd, flags.weakly_factorial, flags.generalized_krull];
            if all.contains(&Flag::False) {
                return Err(DecideError::InconsistentFlags("a field cannot fail a ring property".into()));
            }
            let mut f = DomainFlags::field(0);
            f.characteristic = flags.characteristic;
            f.is_field = flags.is_field;
            flags = f;
        }
        flags.close()?;
        Ok(Self { kind: DomainKind::Custom, flags })
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn flags(&self) -> &DomainFlags {
        &self.flags
    }

    pub fn characteristic(&self) -> Option<u64> {
        self.flags.characteristic
    }

    pub fn is_field(&self) -> Flag {
        self.flags.is_field
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonoidFlags {
    pub weakly_krull: Flag,
    pub umt: Flag,
    pub gcd: Flag,
    pub weakly_factorial: Flag,
    pub generalized_krull: Flag,
}

impl PropertyFlags for MonoidFlags {
    fn get(&self, p: Property) -> Flag {
        match p {
            Property::WeaklyKrull => self.weakly_krull,
            Property::Umt => self.umt,
            Property::Gcd => self.gcd,
            Property::WeaklyFactorial => self.weakly_factorial,
            Property::GeneralizedKrull => self.generalized_krull,
        }
    }

    fn set(&mut self, p: Property, f: Flag) {
        match p {
            Property::WeaklyKrull => self.weakly_krull = f,
            Property::Umt => self.umt = f,
            Property::Gcd => self.gcd = f,
            Property::WeaklyFactorial => self.weakly_factorial = f,
            Property::GeneralizedKrull => self.generalized_krull = f,
        }
    }
}

/// A torsion-free monoid `Γ` with quotient group `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "MonoidRaw")]
pub enum MonoidDescriptor {
    Numerical { monoid: NumericalMonoid },
    AffineSum { monoid: AffineSumMonoid },
    Custom { flags: MonoidFlags, group: TorsionFreeGroupDescriptor },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MonoidRaw {
    Numerical { monoid: NumericalMonoid },
    AffineSum { monoid: AffineSumMonoid },
    Custom { flags: MonoidFlags, group: TorsionFreeGroupDescriptor },
}

impl TryFrom<MonoidRaw> for MonoidDescriptor {
    type Error = DecideError;
    fn try_from(r: MonoidRaw) -> Result<Self, DecideError> {
        Ok(match r {
            MonoidRaw::Numerical { monoid } => Self::Numerical { monoid },
            MonoidRaw::AffineSum { monoid } => Self::AffineSum { monoid },
            MonoidRaw::Custom { flags, group } => Self::custom(flags, group)?,
        })
    }
}

/// Why a derived monoid flag is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonoidWitness {
    /// A gap `g` with `2g, 3g` in the component: not root-closed.
    NotRootClosed { component: usize, gap: u64 },
    /// Neither `a − b` nor `b − a` lies in the component.
    NonValuationPair { component: usize, a: u64, b: u64 },
}

impl MonoidDescriptor {
    pub fn numerical(monoid: NumericalMonoid) -> Self {
        Self::Numerical { monoid }
    }

    pub fn custom(mut flags: MonoidFlags, group: TorsionFreeGroupDescriptor) -> Result<Self, DecideError> {
        flags.close()?;
        Ok(Self::Custom { flags, group })
    }

    fn components(&self) -> Option<&[NumericalMonoid]> {
        match self {
            Self::Numerical { monoid } => Some(std::slice::from_ref(monoid)),
            Self::AffineSum { monoid } => Some(monoid.components()),
            Self::Custom { .. } => None,
        }
    }

    /// Quotient group: `Z` or `Z^n` for the computational kinds.
    pub fn group(&self) -> TorsionFreeGroupDescriptor {
        match self {
            Self::Custom { group, .. } => group.clone(),
            _ => TorsionFreeGroupDescriptor::free(self.components().map_or(1, <[_]>::len)),
        }
    }

    /// Flags; for numerical and affine kinds they are computed. Each
    /// component is primary, hence weakly Krull UMT and weakly factorial; GCD
    /// and generalized Krull both force root-closedness, which only `N_0`
    /// has.
    pub fn flags(&self) -> MonoidFlags {
        match self {
            Self::Custom { flags, .. } => flags.clone(),
            _ => {
                let all_n0 = self.components().unwrap_or_default().iter().all(NumericalMonoid::is_naturals);
                MonoidFlags {
                    weakly_krull: Flag::True,
                    umt: Flag::True,
                    gcd: all_n0.into(),
                    weakly_factorial: Flag::True,
                    generalized_krull: all_n0.into(),
                }
            }
        }
    }

    pub fn witness(&self, p: Property) -> Option<MonoidWitness> {
        let comps = self.components()?;
        match p {
            Property::Gcd => comps.iter().enumerate().find_map(|(i, s)| {
                s.seminormality_witness().map(|gap| MonoidWitness::NotRootClosed { component: i, gap })
            }),
            Property::GeneralizedKrull => comps.iter().enumerate().find_map(|(i, s)| {
                s.non_valuation_pair().map(|(a, b)| MonoidWitness::NonValuationPair { component: i, a, b })
            }),
            _ => None,
        }
    }
}

/// Statements the rules rest on.
pub mod citation {
    pub const FIELD_CONVENTION: &str =
        "a field has no height-one primes and is accepted as a weakly Krull UMT-domain (also GCD, weakly factorial, generalized Krull); the statement is trivial when D is a field";
    pub const MAIN_THEOREM: &str =
        "D[Γ] is weakly Krull iff D is a weakly Krull UMT-domain, Γ is a weakly Krull UMT-monoid and K[G] is weakly Krull";
    pub const GROUP_RING: &str =
        "K[G] is weakly Krull iff G is of type (0,0,0,...) when char K = 0, resp. of type (0,0,0,...) except p when char K = p > 0";
    pub const NUMERICAL: &str =
        "for a numerical monoid Γ, D[Γ] is weakly Krull iff D is a weakly Krull UMT-domain: Γ \\ {0} is its unique nonempty prime ideal, N_0 is its valuation root closure and K[Z] is factorial";
    pub const WFD: &str =
        "D[Γ] is weakly factorial iff D is a weakly factorial GCD-domain, Γ is a weakly factorial GCD-monoid and G is of type (0,0,0,...) (except p in characteristic p)";
    pub const GENERALIZED_KRULL: &str =
        "D[Γ] is generalized Krull iff D is generalized Krull, Γ is a generalized Krull monoid and G is of type (0,0,0,...) (except p in characteristic p)";
    pub const DOMAIN_FLAG: &str = "property of D as recorded in its descriptor";
    pub const MONOID_NUMERICAL: &str =
        "a numerical monoid (or a finite sum of them) is weakly Krull, UMT and weakly factorial; GCD and generalized Krull monoids are root-closed, and N_0 is the only root-closed numerical monoid";
    pub const MONOID_FLAG: &str = "property of Γ as recorded in its descriptor";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum GroupTypeWitness {
    Type000 { witness: TypeWitness<ChainScheme> },
    Type000ExceptP { p: u64, witness: TypeWitness<ExceptPWitness> },
}

/// A rule with the inputs it consumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `D` is a field; the listed properties hold by convention.
    FieldConvention {
        properties: Vec<Property>,
    },
    DomainProperty {
        property: Property,
        flag: Flag,
    },
    /// A numerical `Γ` contributes nothing beyond the condition on `D`.
    NumericalMonoid {
        monoid: NumericalMonoid,
    },
    MonoidProperty {
        property: Property,
        monoid: MonoidDescriptor,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<MonoidWitness>,
    },
    /// Type `(0,0,0,…)` (characteristic 0) or type `(0,0,0,…)` except `p`.
    GroupType {
        characteristic: Option<u64>,
        group: TorsionFreeGroupDescriptor,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<GroupTypeWitness>,
    },
}

impl Rule {
    /// Recompute the outcome from the recorded inputs.
    pub fn evaluate(&self) -> Truth {
        match self {
            Rule::FieldConvention { .. } | Rule::NumericalMonoid { .. } => Truth::True,
            Rule::DomainProperty { flag, .. } => flag.truth(),
            Rule::MonoidProperty { property, monoid, .. } => monoid.flags().get(*property).truth(),
            Rule::GroupType { characteristic, group, .. } => group_type(*characteristic, group).0,
        }
    }
}

fn group_type(characteristic: Option<u64>, g: &TorsionFreeGroupDescriptor) -> (Truth, Option<GroupTypeWitness>) {
    match characteristic {
        None => (Truth::Unknown, None),
        Some(0) => {
            let c = is_type_000(g);
            (c.holds.into(), c.witness.map(|witness| GroupTypeWitness::Type000 { witness }))
        }
        Some(p) => match is_type_000_except_p(g, p) {
            Ok(c) => (c.holds.into(), c.witness.map(|witness| GroupTypeWitness::Type000ExceptP { p, witness })),
            Err(_) => (Truth::Unknown, None),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    #[serde(flatten)]
    pub rule: Rule,
    pub citation: String,
    pub result: Truth,
}

impl Step {
    fn new(rule: Rule, citation: &str) -> Self {
        let result = rule.evaluate();
        Self { rule, citation: citation.to_owned(), result }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    GroupRingWeaklyKrull,
    WeaklyKrull,
    WeaklyFactorial,
    GeneralizedKrull,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub question: Question,
    pub answer: Truth,
    /// Statement the conjunction of the steps decides.
    pub theorem: String,
    pub certificate: Vec<Step>,
}

impl Verdict {
    fn conclude(question: Question, theorem: &str, certificate: Vec<Step>) -> Self {
        let answer = Truth::all(certificate.iter().map(|s| s.result));
        Self { question, answer, theorem: theorem.to_owned(), certificate }
    }

    /// Re-evaluates every step and the conjunction.
    pub fn replay(&self) -> bool {
        self.certificate.iter().all(|s| s.rule.evaluate() == s.result)
            && Truth::all(self.certificate.iter().map(|s| s.rule.evaluate())) == self.answer
    }

    pub fn uses_rule(&self, pred: impl Fn(&Rule) -> bool) -> bool {
        self.certificate.iter().any(|s| pred(&s.rule))
    }
}

fn group_step(characteristic: Option<u64>, group: TorsionFreeGroupDescriptor) -> Step {
    let witness = group_type(characteristic, &group).1;
    Step::new(Rule::GroupType { characteristic, group, witness }, citation::GROUP_RING)
}

fn domain_steps(d: &DomainDescriptor, props: &[Property]) -> Vec<Step> {
    if d.is_field() == Flag::True {
        return vec![Step::new(Rule::FieldConvention { properties: props.to_vec() }, citation::FIELD_CONVENTION)];
    }
    props
        .iter()
        .map(|&p| Step::new(Rule::DomainProperty { property: p, flag: d.flags.get(p) }, citation::DOMAIN_FLAG))
        .collect()
}

fn monoid_steps(g: &MonoidDescriptor, props: &[Property]) -> Vec<Step> {
    let cite = match g {
        MonoidDescriptor::Custom { .. } => citation::MONOID_FLAG,
        _ => citation::MONOID_NUMERICAL,
    };
    props
        .iter()
        .map(|&p| Step::new(Rule::MonoidProperty { property: p, monoid: g.clone(), witness: g.witness(p) }, cite))
        .collect()
}

/// `K[G]` weakly Krull for a field `K` of the given characteristic.
pub fn kg_weakly_krull(characteristic: u64, g: &TorsionFreeGroupDescriptor) -> Result<Verdict, DecideError> {
    check_characteristic(characteristic)?;
    Ok(Verdict::conclude(
        Question::GroupRingWeaklyKrull,
        citation::GROUP_RING,
        vec![group_step(Some(characteristic), g.clone())],
    ))
}

/// `D[Γ]` weakly Krull.
pub fn decide_weakly_krull(d: &DomainDescriptor, g: &MonoidDescriptor) -> Verdict {
    let mut steps = domain_steps(d, &[Property::WeaklyKrull, Property::Umt]);
    if let MonoidDescriptor::Numerical { monoid } = g {
        steps.push(Step::new(Rule::NumericalMonoid { monoid: monoid.clone() }, citation::NUMERICAL));
        return Verdict::conclude(Question::WeaklyKrull, citation::NUMERICAL, steps);
    }
    steps.extend(monoid_steps(g, &[Property::WeaklyKrull, Property::Umt]));
    steps.push(group_step(d.characteristic(), g.group()));
    Verdict::conclude(Question::WeaklyKrull, citation::MAIN_THEOREM, steps)
}

/// `D[Γ]` weakly factorial.
pub fn decide_wfd(d: &DomainDescriptor, g: &MonoidDescriptor) -> Verdict {
    let props = [Property::WeaklyFactorial, Property::Gcd];
    let mut steps = domain_steps(d, &props);
    steps.extend(monoid_steps(g, &props));
    steps.push(group_step(d.characteristic(), g.group()));
    Verdict::conclude(Question::WeaklyFactorial, citation::WFD, steps)
}

/// `D[Γ]` generalized Krull.
pub fn decide_generalized_krull(d: &DomainDescriptor, g: &MonoidDescriptor) -> Verdict {
    let props = [Property::GeneralizedKrull];
    let mut steps = domain_steps(d, &props);
    steps.extend(monoid_steps(g, &props));
    steps.push(group_step(d.characteristic(), g.group()));
    Verdict::conclude(Question::GeneralizedKrull, citation::GENERALIZED_KRULL, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Cap, DefaultClass, Rank1GroupDescriptor};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn s(g: &[u64]) -> NumericalMonoid {
        NumericalMonoid::from_generators(g).unwrap()
    }

    fn half_powers() -> TorsionFreeGroupDescriptor {
        TorsionFreeGroupDescriptor::rank1(Rank1GroupDescriptor::p_power_fractions(2).unwrap())
    }

    fn custom_group_monoid(g: TorsionFreeGroupDescriptor) -> MonoidDescriptor {
        let t = Flag::True;
        let u = Flag::Unknown;
        MonoidDescriptor::custom(
            MonoidFlags { weakly_krull: t, umt: t, gcd: u, weakly_factorial: u, generalized_krull: u },
            g,
        )
        .unwrap()
    }

    fn flags_all(f: Flag) -> DomainFlags {
        DomainFlags {
            characteristic: Some(0),
            is_field: Flag::False,
            weakly_krull: f,
            umt: f,
            gcd: f,
            weakly_factorial: f,
            generalized_krull: f,
            mori: f,
            conductor_nonzero: f,
        }
    }

    #[test]
    fn truth_table() {
        use Truth::*;
        assert_eq!(True.and(Unknown), Unknown);
        assert_eq!(Unknown.and(False), False);
        assert_eq!(Truth::all([]), True);
    }

    #[test]
    fn group_ring_examples() {
        assert_eq!(kg_weakly_krull(0, &TorsionFreeGroupDescriptor::free(1)).unwrap().answer, Truth::True);
        assert_eq!(kg_weakly_krull(2, &half_powers()).unwrap().answer, Truth::True);
        let v = kg_weakly_krull(0, &half_powers()).unwrap();
        assert_eq!(v.answer, Truth::False);
        assert!(v.replay());
        assert_eq!(kg_weakly_krull(3, &half_powers()).unwrap().answer, Truth::False);
        assert_eq!(kg_weakly_krull(4, &half_powers()), Err(DecideError::InvalidCharacteristic(4)));
    }

    #[test]
    fn weakly_krull_examples() {
        let v = decide_weakly_krull(&DomainDescriptor::integers(), &MonoidDescriptor::numerical(s(&[2, 3])));
        assert_eq!(v.answer, Truth::True);
        assert!(v.uses_rule(|r| matches!(r, Rule::NumericalMonoid { .. })));
        assert_eq!(v.theorem, citation::NUMERICAL);

        let g = custom_group_monoid(half_powers());
        let v = decide_weakly_krull(&DomainDescriptor::prime_field(2).unwrap(), &g);
        assert_eq!(v.answer, Truth::True);
        assert!(v.uses_rule(|r| matches!(r, Rule::FieldConvention { .. })));

        let q = DomainDescriptor::symbolic_field(0, true, true).unwrap();
        let v = decide_weakly_krull(&q, &g);
        assert_eq!(v.answer, Truth::False);
        assert!(v.replay());
    }

    #[test]
    fn wfd_examples() {
        let z = DomainDescriptor::integers();
        assert_eq!(decide_wfd(&z, &MonoidDescriptor::numerical(NumericalMonoid::naturals())).answer, Truth::True);
        let v = decide_wfd(&z, &MonoidDescriptor::numerical(s(&[2, 3])));
        assert_eq!(v.answer, Truth::False);
        assert!(v.uses_rule(|r| matches!(
            r,
            Rule::MonoidProperty {
                property: Property::Gcd,
                witness: Some(MonoidWitness::NotRootClosed { component: 0, gap: 1 }),
                ..
            }
        )));
        let mut f = flags_all(Flag::True);
        f.gcd = Flag::Unknown;
        f.weakly_factorial = Flag::Unknown;
        f.generalized_krull = Flag::Unknown;
        let d = DomainDescriptor::custom(f).unwrap();
        assert_eq!(decide_wfd(&d, &MonoidDescriptor::numerical(NumericalMonoid::naturals())).answer, Truth::Unknown);
    }

    #[test]
    fn generalized_krull_examples() {
        let f3 = DomainDescriptor::prime_field(3).unwrap();
        let n0 = MonoidDescriptor::numerical(NumericalMonoid::naturals());
        assert_eq!(decide_generalized_krull(&f3, &n0).answer, Truth::True);
        let v = decide_generalized_krull(&f3, &MonoidDescriptor::numerical(s(&[2, 3])));
        assert_eq!(v.answer, Truth::False);
        assert!(v.uses_rule(|r| matches!(
            r,
            Rule::MonoidProperty { witness: Some(MonoidWitness::NonValuationPair { a: 2, b: 3, .. }), .. }
        )));
        let mut f = flags_all(Flag::Unknown);
        f.generalized_krull = Flag::Attested;
        let d = DomainDescriptor::custom(f).unwrap();
        assert_eq!(d.flags().weakly_krull, Flag::Attested);
        assert_eq!(decide_generalized_krull(&d, &n0).answer, Truth::True);
    }

    #[test]
    fn unknown_characteristic_propagates() {
        let mut f = flags_all(Flag::True);
        f.characteristic = None;
        let d = DomainDescriptor::custom(f).unwrap();
        let g = custom_group_monoid(TorsionFreeGroupDescriptor::free(2));
        assert_eq!(decide_weakly_krull(&d, &g).answer, Truth::Unknown);
        assert_eq!(decide_weakly_krull(&d, &MonoidDescriptor::numerical(s(&[3, 5]))).answer, Truth::True);
    }

    #[test]
    fn flag_closure() {
        let mut f = flags_all(Flag::Unknown);
        f.weakly_factorial = Flag::True;
        f.weakly_krull = Flag::False;
        assert!(matches!(DomainDescriptor::custom(f), Err(DecideError::InconsistentFlags(_))));
        let mut f = flags_all(Flag::Unknown);
        f.gcd = Flag::True;
        assert_eq!(DomainDescriptor::custom(f).unwrap().flags().umt, Flag::True);
        let mut f = flags_all(Flag::Unknown);
        f.characteristic = Some(6);
        assert_eq!(DomainDescriptor::custom(f), Err(DecideError::InvalidCharacteristic(6)));
        assert!(DomainDescriptor::symbolic_field(0, false, false).is_err());
    }

    #[test]
    fn affine_sums() {
        let z = DomainDescriptor::integers();
        let g = MonoidDescriptor::AffineSum { monoid: AffineSumMonoid::direct_sum(vec![s(&[2, 3]), s(&[1])]).unwrap() };
        assert_eq!(decide_weakly_krull(&z, &g).answer, Truth::True);
        assert_eq!(decide_wfd(&z, &g).answer, Truth::False);
        let n2 = MonoidDescriptor::AffineSum { monoid: AffineSumMonoid::direct_sum(vec![s(&[1]), s(&[1])]).unwrap() };
        assert_eq!(decide_wfd(&z, &n2).answer, Truth::True);
        assert_eq!(decide_generalized_krull(&z, &n2).answer, Truth::True);
    }

    #[test]
    fn symbolic_class_group_in_characteristic_p() {
        let c = Rank1GroupDescriptor::new(
            BTreeMap::from([(5, Cap::Infinite)]),
            DefaultClass::SymbolicInfiniteClass { cap: Cap::Finite(1), complement_infinite: true },
        )
        .unwrap();
        let g = custom_group_monoid(TorsionFreeGroupDescriptor::rank1(c));
        assert_eq!(decide_weakly_krull(&DomainDescriptor::prime_field(5).unwrap(), &g).answer, Truth::True);
        assert_eq!(decide_weakly_krull(&DomainDescriptor::prime_field(3).unwrap(), &g).answer, Truth::False);
        let q = DomainDescriptor::symbolic_field(0, true, true).unwrap();
        assert_eq!(decide_weakly_krull(&q, &g).answer, Truth::False);
    }

    fn arb_flag() -> impl Strategy<Value = Flag> {
        prop_oneof![Just(Flag::True), Just(Flag::False), Just(Flag::Attested), Just(Flag::Unknown)]
    }

    fn arb_domain() -> impl Strategy<Value = DomainDescriptor> {
        let custom = (
            prop::collection::vec(arb_flag(), 5),
            prop_oneof![Just(None), Just(Some(0u64)), Just(Some(2)), Just(Some(3))],
        )
            .prop_filter_map("consistent", |(f, c)| {
                DomainDescriptor::custom(DomainFlags {
                    characteristic: c,
                    is_field: Flag::False,
                    weakly_krull: f[0],
                    umt: f[1],
                    gcd: f[2],
                    weakly_factorial: f[3],
                    generalized_krull: f[4],
                    mori: Flag::Unknown,
                    conductor_nonzero: Flag::Unknown,
                })
                .ok()
            });
        prop_oneof![
            Just(DomainDescriptor::integers()),
            Just(DomainDescriptor::order_in_number_field("Z[sqrt(-3)]")),
            (prop_oneof![Just(2u64), Just(3), Just(5)]).prop_map(|p| DomainDescriptor::prime_field(p).unwrap()),
            Just(DomainDescriptor::symbolic_field(0, true, true).unwrap()),
            custom,
        ]
    }

    fn arb_group() -> impl Strategy<Value = TorsionFreeGroupDescriptor> {
        let cap = prop_oneof![(0u32..3).prop_map(Cap::Finite), Just(Cap::Infinite)];
        let class = prop_oneof![
            Just(DefaultClass::AllOthersCapZero),
            (prop_oneof![(1u32..3).prop_map(Cap::Finite), Just(Cap::Infinite)], any::<bool>()).prop_map(
                |(cap, complement_infinite)| DefaultClass::SymbolicInfiniteClass { cap, complement_infinite }
            ),
        ];
        let comp = (prop::collection::btree_map(prop_oneof![Just(2u64), Just(3), Just(5)], cap, 0..3), class)
            .prop_map(|(e, c)| Rank1GroupDescriptor::new(e, c).unwrap());
        prop::collection::vec(comp, 1..3).prop_map(|c| TorsionFreeGroupDescriptor::new(c).unwrap())
    }

    fn arb_monoid() -> impl Strategy<Value = MonoidDescriptor> {
        let numerical = prop::collection::vec(2u64..9, 1..3).prop_map(|mut g| {
            g.push(11);
            MonoidDescriptor::numerical(s(&g))
        });
        let custom = (prop::collection::vec(arb_flag(), 5), arb_group()).prop_filter_map("consistent", |(f, g)| {
            MonoidDescriptor::custom(
                MonoidFlags {
                    weakly_krull: f[0],
                    umt: f[1],
                    gcd: f[2],
                    weakly_factorial: f[3],
                    generalized_krull: f[4],
                },
                g,
            )
            .ok()
        });
        prop_oneof![numerical, Just(MonoidDescriptor::numerical(NumericalMonoid::naturals())), custom]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn wfd_implies_weakly_krull(d in arb_domain(), g in arb_monoid()) {
            let w = decide_wfd(&d, &g);
            let k = decide_weakly_krull(&d, &g);
            prop_assert!(w.replay() && k.replay());
            if w.answer == Truth::True {
                prop_assert_eq!(k.answer, Truth::True);
            }
            let gk = decide_generalized_krull(&d, &g);
            prop_assert!(gk.replay());
            if gk.answer == Truth::True {
                prop_assert_eq!(k.answer, Truth::True);
            }
        }

        #[test]
        fn weakly_krull_implies_group_ring(d in arb_domain(), g in arb_monoid()) {
            let k = decide_weakly_krull(&d, &g);
            if k.answer == Truth::True {
                if let Some(c) = d.characteristic() {
                    prop_assert_eq!(kg_weakly_krull(c, &g.group()).unwrap().answer, Truth::True);
                }
            }
        }
    }
}
