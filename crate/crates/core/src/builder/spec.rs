//! Class-K mean-field-solvable Hamiltonians from (F_i, P_i, U_i) data.

use nalgebra::{DMatrix, DVector};

use super::csa::{lowdin_factor, lowdin_polynomial, same_tuple, CsaOperators, CsaPolynomial};
use crate::error::{Error, Result};
use crate::group::{rotation_matrix, MfRotation};
use crate::ops::{Family, OperatorPolynomial};
use crate::rep::to_matrix;
use crate::scalar::{cabs, cre, lit, to_f64, Cplx, Real};

/// Tolerance for the [U_{i+1}, P_j] = 0 check in the matrix representation.
pub const COMMUTATION_TOL: f64 = 1e-10;

/// A set of CSA eigenvalue tuples.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectorSpec<T: Real> {
    /// Tuples with C_k = v for every listed `(k, v)`.
    Fixed(Vec<(usize, T)>),
    /// An explicit list of tuples.
    Tuples(Vec<Vec<T>>),
}

impl<T: Real> ProjectorSpec<T> {
    pub fn contains(&self, tuple: &[T]) -> bool {
        match self {
            ProjectorSpec::Fixed(fixed) => fixed
                .iter()
                .all(|&(k, v)| k < tuple.len() && same_tuple(&[tuple[k]], &[v])),
            ProjectorSpec::Tuples(list) => list.iter().any(|t| same_tuple(t, tuple)),
        }
    }

    /// Sum of Löwdin projectors over the selected tuples.
    pub fn polynomial(&self, csa: &CsaOperators<T>) -> Result<CsaPolynomial<T>> {
        match self {
            ProjectorSpec::Fixed(fixed) => {
                let mut out = CsaPolynomial::constant(T::one());
                for &(k, v) in fixed {
                    if k >= csa.len() {
                        return Err(Error::Invalid(format!(
                            "projector constrains CSA element {k} but only {} exist",
                            csa.len()
                        )));
                    }
                    out = out.multiply(&lowdin_factor(csa, k, v)?);
                }
                Ok(out.reduced(csa))
            }
            ProjectorSpec::Tuples(list) => {
                let mut out = CsaPolynomial::zero();
                for t in list {
                    out = out.try_add(&lowdin_polynomial(csa, t)?);
                }
                Ok(out.reduced(csa))
            }
        }
    }

    /// Indicator over the computational basis.
    pub fn mask(&self, csa: &CsaOperators<T>) -> Result<Vec<bool>> {
        if let ProjectorSpec::Tuples(list) = self {
            for t in list {
                csa.check_tuple(t)?;
            }
        }
        Ok(csa.tuples()?.iter().map(|t| self.contains(t)).collect())
    }
}

/// One level of a class-K specification. The projector is absent on the last level.
#[derive(Clone, Debug)]
pub struct ClassLevel<T: Real> {
    pub function: CsaPolynomial<T>,
    pub rotation: MfRotation<T>,
    pub projector: Option<ProjectorSpec<T>>,
}

/// Recursive description
/// inner(i) = F_i P_i + U_{i+1}^dag inner(i+1) U_{i+1} (1 - P_i), H = U_1^dag inner(1) U_1.
#[derive(Clone, Debug)]
pub struct ClassSpec<T: Real> {
    pub csa: CsaOperators<T>,
    pub levels: Vec<ClassLevel<T>>,
}

/// An eigenvector predicted by a specification.
#[derive(Clone, Debug)]
pub struct SpecEigenstate<T: Real> {
    /// 1-based level whose F gives the energy.
    pub level: usize,
    pub tuple: Vec<T>,
    pub basis_index: usize,
    pub energy: T,
    /// V_J |C_J> with V_J = U_1^dag ... U_level^dag.
    pub vector: DVector<Cplx<T>>,
}

impl<T: Real> ClassSpec<T> {
    pub fn class(&self) -> usize {
        self.levels.len()
    }

    pub fn family(&self) -> Family {
        self.csa.family()
    }

    pub fn modes(&self) -> usize {
        self.csa.modes()
    }

    /// Basis-state masks of P_1..P_{K-1}, after checking the chain structure.
    pub fn projector_masks(&self) -> Result<Vec<Vec<bool>>> {
        let k = self.levels.len();
        if k == 0 {
            return Err(Error::Invalid("a class specification needs at least one level".into()));
        }
        let mut masks: Vec<Vec<bool>> = Vec::with_capacity(k.saturating_sub(1));
        for (i, level) in self.levels.iter().enumerate() {
            match (&level.projector, i + 1 == k) {
                (Some(_), true) => {
                    return Err(Error::Constraint {
                        level: i + 1,
                        detail: "the last level takes the whole remaining subspace and has no projector".into(),
                    })
                }
                (None, false) => {
                    return Err(Error::Constraint {
                        level: i + 1,
                        detail: "every level but the last needs a projector".into(),
                    })
                }
                (None, true) => {}
                (Some(p), false) => {
                    let mask = p.mask(&self.csa).map_err(|e| Error::Constraint {
                        level: i + 1,
                        detail: e.to_string(),
                    })?;
                    for (j, earlier) in masks.iter().enumerate() {
                        if let Some(state) = (0..mask.len()).find(|&s| mask[s] && earlier[s]) {
                            return Err(Error::Constraint {
                                level: i + 1,
                                detail: format!(
                                    "P_{} overlaps P_{} on basis state {state}; projectors must lie in the earlier complements",
                                    i + 1,
                                    j + 1
                                ),
                            });
                        }
                    }
                    masks.push(mask);
                }
            }
        }
        Ok(masks)
    }

    /// Checks that every U_{i+1} commutes with P_1..P_i in the matrix representation. The
    /// error names the generators of U_{i+1} that do not commute.
    pub fn validate(&self) -> Result<()> {
        let masks = self.projector_masks()?;
        let modes = self.modes();
        for (i, level) in self.levels.iter().enumerate().skip(1) {
            if level.rotation.basis().family() != self.family() {
                return Err(Error::Constraint {
                    level: i + 1,
                    detail: "rotation is over a different operator family".into(),
                });
            }
            if level.rotation.is_empty() {
                continue;
            }
            let u = rotation_matrix(&level.rotation, modes)?;
            for (j, mask) in masks.iter().take(i).enumerate() {
                if mask_commutator(&u, mask) <= lit(COMMUTATION_TOL) {
                    continue;
                }
                let mut offending = Vec::new();
                for g in level.rotation.active_generators() {
                    let a = to_matrix(level.rotation.basis().generator(g), modes)?.matrix;
                    if mask_commutator(&a, mask) > lit(COMMUTATION_TOL) {
                        offending.push(level.rotation.basis().label(g).to_string());
                    }
                }
                return Err(Error::Constraint {
                    level: i + 1,
                    detail: format!(
                        "U_{} does not commute with P_{}; offending generators: {}",
                        i + 1,
                        j + 1,
                        offending.join(", ")
                    ),
                });
            }
        }
        if let Some(level) = self.levels.first() {
            if level.rotation.basis().family() != self.family() {
                return Err(Error::Constraint {
                    level: 1,
                    detail: "rotation is over a different operator family".into(),
                });
            }
        }
        Ok(())
    }

    /// Eigenvectors V_J|C_J> with energies F_level(C_J), one per basis state.
    pub fn eigenstates(&self) -> Result<Vec<SpecEigenstate<T>>> {
        self.validate()?;
        let masks = self.projector_masks()?;
        let modes = self.modes();
        let dim = 1usize << modes;
        let tuples = self.csa.tuples()?;
        let mut owner = vec![self.levels.len(); dim];
        for (i, mask) in masks.iter().enumerate().rev() {
            for (s, &m) in mask.iter().enumerate() {
                if m {
                    owner[s] = i + 1;
                }
            }
        }
        // cumulative U_1^dag ... U_i^dag
        let mut cumulative = Vec::with_capacity(self.levels.len());
        let mut acc = DMatrix::<Cplx<T>>::identity(dim, dim);
        for level in &self.levels {
            acc *= rotation_matrix(&level.rotation, modes)?.adjoint();
            cumulative.push(acc.clone());
        }
        Ok((0..dim)
            .map(|s| {
                let level = owner[s];
                SpecEigenstate {
                    level,
                    tuple: tuples[s].clone(),
                    basis_index: s,
                    energy: self.levels[level - 1].function.evaluate(&tuples[s]),
                    vector: cumulative[level - 1].column(s).into_owned(),
                }
            })
            .collect())
    }

    /// H = sum_J E_J V_J|C_J><C_J|V_J^dag, assembled from the predicted eigenpairs.
    pub fn spectral_matrix(&self) -> Result<DMatrix<Cplx<T>>> {
        let states = self.eigenstates()?;
        let dim = 1usize << self.modes();
        let mut h = DMatrix::<Cplx<T>>::zeros(dim, dim);
        for s in &states {
            h += &s.vector * s.vector.adjoint() * cre(s.energy);
        }
        Ok(h)
    }

    /// Largest deviation of <C_J|V_J^dag V_I|C_I> from delta_JI.
    pub fn orthogonality_defect(&self) -> Result<T> {
        let states = self.eigenstates()?;
        let dim = states.len();
        let v = DMatrix::from_columns(&states.iter().map(|s| s.vector.clone()).collect::<Vec<_>>());
        let gram = v.adjoint() * v;
        let id = DMatrix::<Cplx<T>>::identity(dim, dim);
        Ok((gram - id).iter().fold(T::zero(), |m, z| m.max(cabs(*z))))
    }
}

/// max |[M, P]| for a diagonal 0/1 projector P.
fn mask_commutator<T: Real>(m: &DMatrix<Cplx<T>>, mask: &[bool]) -> T {
    let mut worst = T::zero();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if mask[r] != mask[c] {
                worst = worst.max(cabs(m[(r, c)]));
            }
        }
    }
    worst
}

/// H = U^dag F(C) U.
pub fn build_class1<T: Real>(
    f: &CsaPolynomial<T>,
    u: &MfRotation<T>,
    csa: &CsaOperators<T>,
) -> Result<OperatorPolynomial<T>> {
    u.apply(&f.to_operator(csa)?)
}

/// H = U_1^dag (F_1 P_1 + U_2^dag F_2 U_2 (1 - P_1)) U_1.
pub fn build_class2<T: Real>(
    f1: &CsaPolynomial<T>,
    f2: &CsaPolynomial<T>,
    p1: &ProjectorSpec<T>,
    u1: &MfRotation<T>,
    u2: &MfRotation<T>,
    csa: &CsaOperators<T>,
) -> Result<OperatorPolynomial<T>> {
    let spec = ClassSpec {
        csa: csa.clone(),
        levels: vec![
            ClassLevel {
                function: f1.clone(),
                rotation: u1.clone(),
                projector: Some(p1.clone()),
            },
            ClassLevel {
                function: f2.clone(),
                rotation: u2.clone(),
                projector: None,
            },
        ],
    };
    build_class_k(&spec)
}

/// Symbolic class-K construction by the recursive substitution
/// F_i -> F_i P_i + U_{i+1}^dag F_{i+1} U_{i+1} (1 - P_i).
pub fn build_class_k<T: Real>(spec: &ClassSpec<T>) -> Result<OperatorPolynomial<T>> {
    spec.validate()?;
    let csa = &spec.csa;
    let (family, modes) = (csa.family(), csa.modes());
    let identity = OperatorPolynomial::identity(family, modes);
    let last = spec.levels.last().expect("validated non-empty");
    let mut inner = last.function.to_operator(csa)?;
    for i in (0..spec.levels.len() - 1).rev() {
        let level = &spec.levels[i];
        let projector = level
            .projector
            .as_ref()
            .expect("validated")
            .polynomial(csa)?
            .to_operator(csa)?;
        let complement = identity.try_sub(&projector)?;
        let rotated = spec.levels[i + 1].rotation.apply(&inner)?;
        let kept = level.function.to_operator(csa)?.multiply(&projector)?;
        inner = kept.try_add(&rotated.multiply(&complement)?)?;
    }
    let h = spec.levels[0].rotation.apply(&inner)?;
    Ok(h.hermitian_part().chop(lit(1e-12)))
}

impl<T: Real> std::fmt::Display for ClassSpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, level) in self.levels.iter().enumerate() {
            writeln!(f, "level {}: F = {}", i + 1, level.function.display(&self.csa))?;
            for &(k, t) in level.rotation.factors() {
                writeln!(f, "  U {} {}", level.rotation.basis().label(k), to_f64(t))?;
            }
            if let Some(p) = &level.projector {
                writeln!(f, "  P {p:?}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::AlgebraBasis;
    use std::sync::Arc;

    #[test]
    fn identity_rotation_gives_f() {
        let csa = CsaOperators::<f64>::occupations(Family::Fermionic, 2).unwrap();
        let f = CsaPolynomial::quadratic(&[(0, 1, 2.0)]);
        let u = MfRotation::identity(Arc::new(AlgebraBasis::unitary(2)));
        let h = build_class1(&f, &u, &csa).unwrap();
        assert!(h.approx_eq(&f.to_operator(&csa).unwrap(), 1e-14));
    }

    #[test]
    fn overlapping_projectors_rejected() {
        let csa = CsaOperators::<f64>::occupations(Family::Fermionic, 2).unwrap();
        let basis = Arc::new(AlgebraBasis::unitary(2));
        let level = |p: Option<ProjectorSpec<f64>>| ClassLevel {
            function: CsaPolynomial::linear(&[1.0, 2.0]),
            rotation: MfRotation::identity(basis.clone()),
            projector: p,
        };
        let spec = ClassSpec {
            csa,
            levels: vec![
                level(Some(ProjectorSpec::Fixed(vec![(0, 1.0)]))),
                level(Some(ProjectorSpec::Fixed(vec![(1, 1.0)]))),
                level(None),
            ],
        };
        assert!(matches!(build_class_k(&spec), Err(Error::Constraint { level: 2, .. })));
    }
}
