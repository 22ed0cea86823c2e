//! Interleaving certificates and their checker.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::morphism::{same_object, ComponentDoc, DeltaMorphism};
use super::object::PersistentObject;
use crate::category::{Category, CategoryTag};
use crate::error::{Error, Result};
use crate::grades::Grade;

pub const CERTIFICATE_FORMAT: &str = "interleaving-certificate/v1";

/// An `(ε, δ)`-interleaving candidate: `f: X ->_ε Y` and `g: Y ->_δ X`.
#[derive(Clone, Debug)]
pub struct Interleaving<C: Category> {
    f: DeltaMorphism<C>,
    g: DeltaMorphism<C>,
}

/// Which of the four conditions a certificate fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `f` is not natural.
    NaturalityF,
    /// `g` is not natural.
    NaturalityG,
    /// `g^ε ∘ f = S_{0,ε+δ}(id_X)` fails.
    TriangleX,
    /// `f^δ ∘ g = S_{0,ε+δ}(id_Y)` fails.
    TriangleY,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::NaturalityF => "f is natural",
            Condition::NaturalityG => "g is natural",
            Condition::TriangleX => "g^eps . f = S_{0,eps+delta}(id_X)",
            Condition::TriangleY => "f^delta . g = S_{0,eps+delta}(id_Y)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub grade: Grade,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavingReport {
    pub valid: bool,
    pub epsilon: Grade,
    pub delta: Grade,
    pub violation: Option<Violation>,
}

impl<C: Category> Interleaving<C> {
    pub fn new(f: DeltaMorphism<C>, g: DeltaMorphism<C>) -> Result<Self> {
        if !same_object(f.source(), g.target()) {
            return Err(Error::ObjectMismatch("source of f differs from target of g".into()));
        }
        if !same_object(f.target(), g.source()) {
            return Err(Error::ObjectMismatch("target of f differs from source of g".into()));
        }
        Ok(Interleaving { f, g })
    }

    /// `(S_{0,δ}(id_X), S_{0,δ}(id_X))`, a δ-interleaving of `X` with itself.
    pub fn self_interleaving(x: Arc<PersistentObject<C>>, delta: &Grade) -> Result<Self> {
        let s = DeltaMorphism::shifted_identity(x, delta)?;
        Ok(Interleaving { f: s.clone(), g: s })
    }

    pub fn f(&self) -> &DeltaMorphism<C> {
        &self.f
    }

    pub fn g(&self) -> &DeltaMorphism<C> {
        &self.g
    }

    pub fn x(&self) -> &Arc<PersistentObject<C>> {
        self.f.source()
    }

    pub fn y(&self) -> &Arc<PersistentObject<C>> {
        self.f.target()
    }

    pub fn epsilon(&self) -> &Grade {
        self.f.shift()
    }

    pub fn delta(&self) -> &Grade {
        self.g.shift()
    }

    /// Checks naturality of both morphisms and both triangle identities,
    /// reporting the first failure.
    pub fn check(&self) -> Result<InterleavingReport> {
        let report = |violation: Option<Violation>| InterleavingReport {
            valid: violation.is_none(),
            epsilon: self.epsilon().clone(),
            delta: self.delta().clone(),
            violation,
        };
        for (m, condition) in [(&self.f, Condition::NaturalityF), (&self.g, Condition::NaturalityG)] {
            match m.check_naturality() {
                Ok(()) => {}
                Err(Error::NotNatural { grade, .. }) => return Ok(report(Some(Violation { condition, grade }))),
                Err(e) => return Err(e),
            }
        }
        let total = self.epsilon().add(self.delta())?;
        let gf = self.f.then(&self.g)?;
        if let Some(grade) = gf.first_difference(&DeltaMorphism::shifted_identity(self.x().clone(), &total)?)? {
            return Ok(report(Some(Violation { condition: Condition::TriangleX, grade })));
        }
        let fg = self.g.then(&self.f)?;
        if let Some(grade) = fg.first_difference(&DeltaMorphism::shifted_identity(self.y().clone(), &total)?)? {
            return Ok(report(Some(Violation { condition: Condition::TriangleY, grade })));
        }
        Ok(report(None))
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.check()?.valid)
    }

    /// The same pair read as a `(δ, ε)`-interleaving of `Y` with `X`.
    pub fn reversed(&self) -> Self {
        Interleaving { f: self.g.clone(), g: self.f.clone() }
    }

    /// `(S_{ε,ε'}(f), S_{δ,δ'}(g))` for `ε <= ε'`, `δ <= δ'`.
    pub fn widen(&self, epsilon: &Grade, delta: &Grade) -> Result<Self> {
        Ok(Interleaving { f: self.f.shift_to(epsilon)?, g: self.g.shift_to(delta)? })
    }

    /// Composes `X ~(ε₁,ε₂)~ Y` with `Y ~(δ₁,δ₂)~ Z` into `X ~(ε₁+δ₁, ε₂+δ₂)~ Z`.
    pub fn compose(&self, other: &Interleaving<C>) -> Result<Self> {
        if !same_object(self.y(), other.x()) {
            return Err(Error::ObjectMismatch("middle objects of the two interleavings differ".into()));
        }
        let f = self.f.then(&other.f)?;
        let g = other.g.then(&self.g)?;
        Ok(Interleaving { f, g })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
struct CertificateDoc<C: Category> {
    format: String,
    category: CategoryTag,
    epsilon: Grade,
    delta: Grade,
    x: PersistentObject<C>,
    y: PersistentObject<C>,
    f_components: Vec<ComponentDoc<C>>,
    g_components: Vec<ComponentDoc<C>>,
}

impl<C: Category> Serialize for Interleaving<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateDoc::<C> {
            format: CERTIFICATE_FORMAT.into(),
            category: C::TAG,
            epsilon: self.epsilon().clone(),
            delta: self.delta().clone(),
            x: (**self.x()).clone(),
            y: (**self.y()).clone(),
            f_components: self.f.component_docs(),
            g_components: self.g.component_docs(),
        }
        .serialize(s)
    }
}

impl<'de, C: Category> Deserialize<'de> for Interleaving<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = CertificateDoc::<C>::deserialize(d)?;
        if doc.format != CERTIFICATE_FORMAT {
            return Err(D::Error::custom(format!("unsupported format {:?}", doc.format)));
        }
        if doc.category != C::TAG {
            return Err(D::Error::custom(format!("expected category {}, found {}", C::TAG, doc.category)));
        }
        let x = Arc::new(doc.x);
        let y = Arc::new(doc.y);
        let f = DeltaMorphism::from_docs(x.clone(), y.clone(), doc.epsilon, doc.f_components).map_err(D::Error::custom)?;
        let g = DeltaMorphism::from_docs(y.clone(), x.clone(), doc.delta, doc.g_components).map_err(D::Error::custom)?;
        Interleaving::new(f.with_endpoints(x.clone(), y.clone()), g.with_endpoints(y, x)).map_err(D::Error::custom)
    }
}
