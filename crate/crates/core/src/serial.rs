//! JSON documents for specifications, rotations and classification reports.
//!
//! Documents always hold `f64`; conversion to and from a generic scalar happens at the edges.
//! Generators are referenced by label inside a named standard algebra, so a document is
//! readable without the code that wrote it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::builder::{ClassLevel, ClassSpec, CsaOperators, CsaPolynomial, ProjectorSpec};
use crate::detector::{Certificate, ClassificationReport, EigenRecord, LevelReport, Verdict};
use crate::error::{Error, Result};
use crate::group::MfRotation;
use crate::ops::{AlgebraBasis, Family};
use crate::scalar::{lit, to_f64, Real};

/// Names accepted by [`AlgebraBasis::by_name`].
pub const ALGEBRA_NAMES: [&str; 4] = ["u", "so", "so-odd", "su2"];

/// Finds the standard algebra whose generators and labels match `basis`.
pub fn algebra_name<T: Real>(basis: &AlgebraBasis<T>) -> Result<&'static str> {
    ALGEBRA_NAMES
        .into_iter()
        .find(|name| {
            AlgebraBasis::<T>::by_name(name, basis.family(), basis.modes())
                .is_ok_and(|b| b.labels() == basis.labels() && b.csa_dim() == basis.csa_dim())
        })
        .ok_or_else(|| Error::Invalid("rotation basis is not a standard algebra".into()))
}

/// Default algebra for a family.
pub fn default_algebra(family: Family) -> &'static str {
    match family {
        Family::Fermionic => "u",
        Family::Majorana => "so",
        Family::Pauli => "su2",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub generator: String,
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationDoc {
    pub algebra: String,
    pub family: Family,
    pub modes: usize,
    pub factors: Vec<FactorDoc>,
}

/// One monomial of a CSA polynomial: product of the listed CSA elements (0-based, repeats
/// allowed), times the coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub monomial: Vec<usize>,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectorDoc {
    /// `(k, v)`: C_k = v.
    Fixed(Vec<(usize, f64)>),
    Tuples(Vec<Vec<f64>>),
}

/// Which CSA the tuples refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CsaKind {
    /// Occupations n_p, or z_k for qubits.
    Standard,
    /// The hermitian CSA -i C_k of the algebra.
    Algebra,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub function: Vec<TermDoc>,
    pub rotation: Vec<FactorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projector: Option<ProjectorDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub family: Family,
    pub modes: usize,
    pub algebra: String,
    #[serde(default = "standard_csa")]
    pub csa: CsaKind,
    pub levels: Vec<LevelDoc>,
}

fn standard_csa() -> CsaKind {
    CsaKind::Standard
}

fn factors_doc<T: Real>(r: &MfRotation<T>) -> Vec<FactorDoc> {
    r.factors()
        .iter()
        .map(|&(k, angle)| FactorDoc {
            generator: r.basis().label(k).to_string(),
            angle: to_f64(angle),
        })
        .collect()
}

fn rotation_from<T: Real>(basis: &Arc<AlgebraBasis<T>>, factors: &[FactorDoc]) -> Result<MfRotation<T>> {
    let pairs: Vec<(&str, T)> = factors.iter().map(|f| (f.generator.as_str(), lit(f.angle))).collect();
    MfRotation::from_labels(basis.clone(), &pairs)
}

fn terms_doc<T: Real>(f: &CsaPolynomial<T>) -> Vec<TermDoc> {
    f.terms()
        .map(|(m, c)| TermDoc {
            monomial: m.clone(),
            coefficient: to_f64(*c),
        })
        .collect()
}

fn polynomial_from<T: Real>(terms: &[TermDoc]) -> CsaPolynomial<T> {
    let mut f = CsaPolynomial::zero();
    for t in terms {
        f.add_term(&t.monomial, lit(t.coefficient));
    }
    f
}

fn tuple_doc<T: Real>(t: &[T]) -> Vec<f64> {
    t.iter().map(|&v| to_f64(v)).collect()
}

fn projector_doc<T: Real>(p: &ProjectorSpec<T>) -> ProjectorDoc {
    match p {
        ProjectorSpec::Fixed(f) => ProjectorDoc::Fixed(f.iter().map(|&(k, v)| (k, to_f64(v))).collect()),
        ProjectorSpec::Tuples(t) => ProjectorDoc::Tuples(t.iter().map(|t| tuple_doc(t)).collect()),
    }
}

fn projector_from<T: Real>(p: &ProjectorDoc) -> ProjectorSpec<T> {
    match p {
        ProjectorDoc::Fixed(f) => ProjectorSpec::Fixed(f.iter().map(|&(k, v)| (k, lit(v))).collect()),
        ProjectorDoc::Tuples(t) => {
            ProjectorSpec::Tuples(t.iter().map(|t| t.iter().map(|&v| lit(v)).collect()).collect())
        }
    }
}

impl RotationDoc {
    pub fn from_rotation<T: Real>(r: &MfRotation<T>) -> Result<Self> {
        let basis = r.basis();
        Ok(RotationDoc {
            algebra: algebra_name(basis)?.to_string(),
            family: basis.family(),
            modes: basis.modes(),
            factors: factors_doc(r),
        })
    }

    pub fn to_rotation<T: Real>(&self) -> Result<MfRotation<T>> {
        let basis = Arc::new(AlgebraBasis::by_name(&self.algebra, self.family, self.modes)?);
        rotation_from(&basis, &self.factors)
    }
}

impl SpecDoc {
    pub fn from_spec<T: Real>(spec: &ClassSpec<T>) -> Result<Self> {
        let first = spec
            .levels
            .first()
            .ok_or_else(|| Error::Invalid("specification without levels".into()))?;
        let basis = first.rotation.basis();
        let standard = CsaOperators::<T>::standard(spec.family(), spec.modes());
        let csa = if spec.csa.labels() == standard.labels() {
            CsaKind::Standard
        } else {
            CsaKind::Algebra
        };
        Ok(SpecDoc {
            family: spec.family(),
            modes: spec.modes(),
            algebra: algebra_name(basis)?.to_string(),
            csa,
            levels: spec
                .levels
                .iter()
                .map(|l| LevelDoc {
                    function: terms_doc(&l.function),
                    rotation: factors_doc(&l.rotation),
                    projector: l.projector.as_ref().map(projector_doc),
                })
                .collect(),
        })
    }

    pub fn to_spec<T: Real>(&self) -> Result<ClassSpec<T>> {
        let basis = Arc::new(AlgebraBasis::by_name(&self.algebra, self.family, self.modes)?);
        let csa = match self.csa {
            CsaKind::Standard => CsaOperators::standard(self.family, self.modes),
            CsaKind::Algebra => CsaOperators::from_basis(&basis)?,
        };
        let levels = self
            .levels
            .iter()
            .map(|l| {
                Ok(ClassLevel {
                    function: polynomial_from(&l.function),
                    rotation: rotation_from(&basis, &l.rotation)?,
                    projector: l.projector.as_ref().map(projector_from),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassSpec { csa, levels })
    }

    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictDoc {
    Class { k: usize },
    Partial { mf: usize, dim: usize },
    NotMfSolvable { optimizer_limited: bool },
    Inconclusive { level: usize },
}

impl From<&Verdict> for VerdictDoc {
    fn from(v: &Verdict) -> Self {
        match *v {
            Verdict::Class(k) => VerdictDoc::Class { k },
            Verdict::Partial { mf, dim } => VerdictDoc::Partial { mf, dim },
            Verdict::NotMfSolvable { optimizer_limited } => VerdictDoc::NotMfSolvable { optimizer_limited },
            Verdict::Inconclusive { level } => VerdictDoc::Inconclusive { level },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReportDoc {
    /// U_i of the level.
    pub rotation: Vec<FactorDoc>,
    pub states: Vec<usize>,
    /// CSA tuples selected by P_i.
    pub projector: Vec<Vec<f64>>,
    pub function: Vec<TermDoc>,
    pub restarts: usize,
    pub max_variance: f64,
    pub strategy: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenDoc {
    pub energy: f64,
    pub tuple: Option<Vec<f64>>,
    pub level: Option<usize>,
    pub basis_index: Option<usize>,
    pub variance: f64,
    pub is_mf: bool,
    pub mf_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub norm: f64,
    pub max_variance: f64,
    pub max_mf_defect: f64,
    pub reconstruction_error: Option<f64>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub verdict: VerdictDoc,
    pub algebra: String,
    pub levels: Vec<LevelReportDoc>,
    pub spec: Option<SpecDoc>,
    pub eigenstates: Vec<EigenDoc>,
    pub certificate: CertificateDoc,
    pub oracle_override: bool,
    pub restarts: usize,
    pub notes: Vec<String>,
}

fn level_doc<T: Real>(l: &LevelReport<T>, csa: &CsaOperators<T>) -> LevelReportDoc {
    LevelReportDoc {
        rotation: factors_doc(&l.rotation),
        states: l.states.clone(),
        projector: l.states.iter().map(|&j| tuple_doc(&csa.tuple(j))).collect(),
        function: terms_doc(&l.function),
        restarts: l.restarts,
        max_variance: to_f64(l.max_variance),
        strategy: l.strategy.to_string(),
    }
}

fn eigen_doc<T: Real>(e: &EigenRecord<T>) -> EigenDoc {
    EigenDoc {
        energy: to_f64(e.energy),
        tuple: e.tuple.as_ref().map(|t| tuple_doc(t)),
        level: e.level,
        basis_index: e.basis_index,
        variance: to_f64(e.variance),
        is_mf: e.is_mf,
        mf_defect: to_f64(e.mf_defect),
    }
}

fn certificate_doc<T: Real>(c: &Certificate<T>) -> CertificateDoc {
    CertificateDoc {
        norm: to_f64(c.norm),
        max_variance: to_f64(c.max_variance),
        max_mf_defect: to_f64(c.max_mf_defect),
        reconstruction_error: c.reconstruction_error.map(to_f64),
        certified: c.certified,
    }
}

impl ReportDoc {
    pub fn from_report<T: Real>(r: &ClassificationReport<T>, basis: &AlgebraBasis<T>) -> Result<Self> {
        let csa = match &r.spec {
            Some(s) => s.csa.clone(),
            None => CsaOperators::from_basis(basis)?,
        };
        Ok(ReportDoc {
            verdict: (&r.verdict).into(),
            algebra: algebra_name(basis)?.to_string(),
            levels: r.levels.iter().map(|l| level_doc(l, &csa)).collect(),
            spec: r.spec.as_ref().map(SpecDoc::from_spec).transpose()?,
            eigenstates: r.eigenstates.iter().map(eigen_doc).collect(),
            certificate: certificate_doc(&r.certificate),
            oracle_override: r.oracle_override,
            restarts: r.restarts,
            notes: r.notes.clone(),
        })
    }
}
