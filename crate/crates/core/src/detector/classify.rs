//! Level-by-level search for the class-K structure of a Hamiltonian.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;

use super::search::{
    column_variances, eigen_columns, lm_options, mask_commutator, matrix_for, single_column, spectral_norm,
    ColumnProblem,
};
use crate::builder::{build_class_k, ClassLevel, ClassSpec, CsaOperators, CsaPolynomial, ProjectorSpec};
use crate::error::Result;
use crate::group::{matrix_distance, GeneratorMatrices, MfRotation};
use crate::ops::{AlgebraBasis, OperatorPolynomial};
use crate::optim::{levenberg_marquardt, random_angles, rng};
use crate::rep::{hermitian_eigen, mf_state_check, to_matrix, variance};
use crate::scalar::{cre, lit, Cplx, Real};

#[derive(Clone, Debug)]
pub struct DetectorOptions {
    /// Random restarts per optimization.
    pub budget: usize,
    pub seed: u64,
    /// Zero-variance threshold relative to ||H||^2.
    pub tol_variance: f64,
}

impl Default for DetectorOptions {
    fn default() -> Self {
        DetectorOptions {
            budget: 32,
            seed: 0,
            tol_variance: 1e-8,
        }
    }
}

/// Relative tolerance of the reconstruction certificate.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Every eigenstate is reached by K levels of MF rotations.
    Class(usize),
    /// `mf` of the `dim` eigenstates are MF states.
    Partial { mf: usize, dim: usize },
    /// No zero-variance MF state was found and the exact eigenvectors confirm none exists.
    /// Always reported as optimizer-limited.
    NotMfSolvable { optimizer_limited: bool },
    /// The search stalled at `level` although the exact remaining eigenvectors are all MF, or
    /// the reconstruction certificate failed.
    Inconclusive { level: usize },
}

/// What one level found.
#[derive(Clone, Debug)]
pub struct LevelReport<T: Real> {
    /// U_i in the convention H = U_1^dag (...) U_1.
    pub rotation: MfRotation<T>,
    /// Basis states of P_i.
    pub states: Vec<usize>,
    pub function: CsaPolynomial<T>,
    /// Starts spent by the optimizer on this level.
    pub restarts: usize,
    /// Largest variance among the level's states, in the level frame.
    pub max_variance: T,
    /// Which strategy found the level: identity, full, or greedy.
    pub strategy: &'static str,
}

/// One eigenstate in the report.
#[derive(Clone, Debug)]
pub struct EigenRecord<T: Real> {
    pub energy: T,
    /// CSA eigenvalue tuple of the reference basis state (levels only).
    pub tuple: Option<Vec<T>>,
    /// Level whose rotation V_J produced the state; `None` for exact eigenvectors from the
    /// oracle cross-check.
    pub level: Option<usize>,
    pub basis_index: Option<usize>,
    /// Variance on the dense Hamiltonian.
    pub variance: T,
    pub is_mf: bool,
    pub mf_defect: T,
}

#[derive(Clone, Debug)]
pub struct Certificate<T: Real> {
    /// Largest absolute eigenvalue.
    pub norm: T,
    /// Largest variance over the claimed MF eigenstates.
    pub max_variance: T,
    pub max_mf_defect: T,
    /// ||build(spec) - H||_max for class verdicts.
    pub reconstruction_error: Option<T>,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport<T: Real> {
    pub verdict: Verdict,
    pub levels: Vec<LevelReport<T>>,
    /// Rebuildable specification for class verdicts.
    pub spec: Option<ClassSpec<T>>,
    pub eigenstates: Vec<EigenRecord<T>>,
    pub certificate: Certificate<T>,
    /// The exact-eigenvector check changed the optimizer's conclusion.
    pub oracle_override: bool,
    pub restarts: usize,
    pub notes: Vec<String>,
}

impl<T: Real> ClassificationReport<T> {
    pub fn class(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Class(k) => Some(k),
            _ => None,
        }
    }

    pub fn mf_count(&self) -> usize {
        self.eigenstates.iter().filter(|e| e.is_mf).count()
    }
}

struct Engine<'a, T: Real> {
    h0: DMatrix<Cplx<T>>,
    norm: T,
    gm: GeneratorMatrices<T>,
    basis: Arc<AlgebraBasis<T>>,
    csa: CsaOperators<T>,
    opts: &'a DetectorOptions,
    gen: ChaCha8Rng,
    restarts: usize,
}

struct Found<T: Real> {
    gens: Vec<usize>,
    angles: Vec<T>,
    states: Vec<usize>,
    restarts: usize,
    strategy: &'static str,
}

impl<T: Real> Engine<'_, T> {
    fn threshold(&self) -> T {
        lit::<T>(self.opts.tol_variance) * self.norm * self.norm
    }

    fn unitary(&self, gens: &[usize], x: &[T]) -> DMatrix<Cplx<T>> {
        let factors: Vec<(usize, T)> = gens.iter().copied().zip(x.iter().copied()).collect();
        self.gm.rotation(&factors)
    }

    fn covered(&self, h: &DMatrix<Cplx<T>>, gens: &[usize], x: &[T], active: &[usize]) -> Vec<usize> {
        eigen_columns(h, &self.unitary(gens, x), active, self.threshold())
    }

    /// LM over a column set; returns angles when every column reaches zero variance.
    fn fit(&mut self, h: &DMatrix<Cplx<T>>, gens: &[usize], cols: Vec<usize>, x0: &[T]) -> Option<Vec<T>> {
        self.restarts += 1;
        let threshold = self.threshold();
        let mut problem = ColumnProblem {
            h,
            gm: &self.gm,
            gens,
            cols: cols.clone(),
        };
        let out = levenberg_marquardt(&mut problem, x0, &lm_options(self.norm));
        let v = problem.unitary(&out.x);
        column_variances(h, &v, &cols)
            .iter()
            .all(|(_, var, _)| *var <= threshold)
            .then_some(out.x)
    }

    /// Finds a rotation with as many active basis states as possible mapped onto eigenvectors.
    fn search_level(&mut self, h: &DMatrix<Cplx<T>>, gens: &[usize], active: &[usize]) -> Found<T> {
        let start = self.restarts;
        let n = gens.len();
        let zero = vec![T::zero(); n];
        let mut best = Found {
            gens: gens.to_vec(),
            angles: zero.clone(),
            states: self.covered(h, gens, &zero, active),
            restarts: 0,
            strategy: "identity",
        };
        if best.states.len() == active.len() || n == 0 {
            best.restarts = self.restarts - start;
            return best;
        }
        // every active state at once
        let full_starts = self.opts.budget.div_ceil(4).max(1);
        for attempt in 0..full_starts {
            let x0 = if attempt == 0 { zero.clone() } else { random_angles(&mut self.gen, n) };
            if let Some(x) = self.fit(h, gens, active.to_vec(), &x0) {
                best = Found {
                    gens: gens.to_vec(),
                    states: self.covered(h, gens, &x, active),
                    angles: x,
                    restarts: 0,
                    strategy: "full",
                };
                best.restarts = self.restarts - start;
                return best;
            }
        }
        // seed one state, then extend one state at a time
        let mut tried: Vec<bool> = vec![false; h.nrows()];
        for &seed in active {
            if best.states.len() == active.len() {
                break;
            }
            if tried[seed] {
                continue;
            }
            tried[seed] = true;
            self.restarts += 1;
            let found = single_column(
                h,
                &self.gm,
                gens,
                seed,
                None,
                self.opts.budget,
                self.norm,
                self.opts.tol_variance,
                &mut self.gen,
            );
            let mut x = match found {
                Ok((x, used)) => {
                    self.restarts += used - 1;
                    x
                }
                Err((_, used)) => {
                    self.restarts += used - 1;
                    continue;
                }
            };
            let mut set = self.covered(h, gens, &x, active);
            if !set.contains(&seed) {
                continue;
            }
            for &j in active {
                if set.contains(&j) {
                    continue;
                }
                let mut cols = set.clone();
                cols.push(j);
                let mut accepted = None;
                for attempt in 0..3 {
                    let x0 = if attempt == 0 { x.clone() } else { random_angles(&mut self.gen, n) };
                    if let Some(y) = self.fit(h, gens, cols.clone(), &x0) {
                        accepted = Some(y);
                        break;
                    }
                }
                if let Some(y) = accepted {
                    let grown = self.covered(h, gens, &y, active);
                    if cols.iter().all(|c| grown.contains(c)) {
                        x = y;
                        set = grown;
                    }
                }
            }
            for &s in &set {
                tried[s] = true;
            }
            if set.len() > best.states.len() {
                best = Found {
                    gens: gens.to_vec(),
                    angles: x,
                    states: set,
                    restarts: 0,
                    strategy: "greedy",
                };
            }
        }
        best.restarts = self.restarts - start;
        best
    }
}

/// Decides whether `h` is class-K MF-solvable, partially MF-solvable or not MF-solvable over
/// the rotations generated by `basis`, and certifies the answer against exact diagonalization.
pub fn classify<T: Real>(
    h: &OperatorPolynomial<T>,
    basis: Arc<AlgebraBasis<T>>,
    opts: &DetectorOptions,
) -> Result<ClassificationReport<T>> {
    let h0 = matrix_for(h, &basis)?;
    let modes = basis.modes();
    let dim = h0.nrows();
    let norm = spectral_norm(&h0);
    let mut engine = Engine {
        gm: GeneratorMatrices::new(&basis, modes)?,
        csa: CsaOperators::from_basis(&basis)?,
        h0,
        norm,
        basis: basis.clone(),
        opts,
        gen: rng(opts.seed),
        restarts: 0,
    };
    let tuples = engine.csa.tuples()?;
    let mut active: Vec<usize> = (0..dim).collect();
    let mut masks: Vec<Vec<bool>> = Vec::new();
    let mut levels: Vec<LevelReport<T>> = Vec::new();
    let mut h_cur = engine.h0.clone();
    // V_1 V_2 ... V_i
    let mut cumulative = DMatrix::<Cplx<T>>::identity(dim, dim);
    let mut eigenstates = Vec::new();
    let mut notes = Vec::new();
    let mut stuck = false;

    while !active.is_empty() {
        let gens: Vec<usize> = (0..basis.dim())
            .filter(|&k| {
                masks
                    .iter()
                    .all(|m| mask_commutator(&engine.gm.matrices[k], m) <= lit(1e-10))
            })
            .collect();
        let found = engine.search_level(&h_cur, &gens, &active);
        if found.states.is_empty() {
            stuck = true;
            break;
        }
        let v = engine.unitary(&found.gens, &found.angles);
        let vars = column_variances(&h_cur, &v, &found.states);
        let max_variance = vars.iter().fold(T::zero(), |m, v| m.max(v.1));
        let values: Vec<(Vec<T>, T)> = vars.iter().map(|&(j, _, e)| (tuples[j].clone(), e)).collect();
        let function = CsaPolynomial::interpolate(&engine.csa, &values)?;
        let v_rot = MfRotation::new(
            basis.clone(),
            found.gens.iter().copied().zip(found.angles.iter().copied()).collect(),
        )?;
        cumulative = &cumulative * &v;
        let level_index = levels.len() + 1;
        for &(j, _, e) in &vars {
            let psi = cumulative.column(j).into_owned();
            let check = mf_state_check(&psi, basis.family(), modes)?;
            eigenstates.push(EigenRecord {
                energy: e,
                tuple: Some(tuples[j].clone()),
                level: Some(level_index),
                basis_index: Some(j),
                variance: variance(&engine.h0, &psi)?,
                is_mf: check.is_mf,
                mf_defect: check.defect,
            });
        }
        h_cur = v.adjoint() * &h_cur * &v;
        let mut mask = vec![false; dim];
        for &j in &found.states {
            mask[j] = true;
        }
        active.retain(|j| !mask[*j]);
        masks.push(mask);
        levels.push(LevelReport {
            rotation: v_rot.inverse(),
            states: found.states,
            function,
            restarts: found.restarts,
            max_variance,
            strategy: found.strategy,
        });
    }

    let mut verdict;
    let mut oracle_override = false;
    let mut spec = None;
    let mut reconstruction_error = None;
    if stuck {
        // exact eigenvectors of the remaining block, in the original frame
        let remaining = remaining_eigenvectors(&engine, &h_cur, &cumulative, &active)?;
        let mut mf_found = 0;
        for (e, psi) in remaining {
            let check = mf_state_check(&psi, basis.family(), modes)?;
            if check.is_mf {
                mf_found += 1;
            }
            eigenstates.push(EigenRecord {
                energy: e,
                tuple: None,
                level: None,
                basis_index: None,
                variance: variance(&engine.h0, &psi)?,
                is_mf: check.is_mf,
                mf_defect: check.defect,
            });
        }
        let covered = dim - active.len();
        let level = levels.len() + 1;
        verdict = if mf_found == active.len() {
            oracle_override = true;
            notes.push(format!(
                "the optimizer found no MF state at level {level}, but all {} remaining exact eigenvectors are MF states",
                active.len()
            ));
            Verdict::Inconclusive { level }
        } else if covered + mf_found == 0 {
            Verdict::NotMfSolvable {
                optimizer_limited: true,
            }
        } else {
            if mf_found > 0 {
                oracle_override = true;
                notes.push(format!(
                    "{mf_found} MF eigenvectors found by exact diagonalization beyond level {}",
                    levels.len()
                ));
            }
            Verdict::Partial {
                mf: covered + mf_found,
                dim,
            }
        };
    } else {
        verdict = Verdict::Class(levels.len());
        let built = build_spec(&engine.csa, &levels)?;
        let rebuilt = to_matrix(&build_class_k(&built)?, modes)?.matrix;
        let err = matrix_distance(&rebuilt, &engine.h0);
        reconstruction_error = Some(err);
        if err > lit::<T>(RECONSTRUCTION_TOL) * engine.norm.max(T::one()) {
            notes.push(format!(
                "rebuilding from the discovered levels misses H by {:.3e}",
                crate::scalar::to_f64(err)
            ));
            verdict = Verdict::Inconclusive { level: levels.len() };
        }
        spec = Some(built);
    }

    let claimed: Vec<&EigenRecord<T>> = eigenstates.iter().filter(|e| e.level.is_some()).collect();
    let max_variance = claimed.iter().fold(T::zero(), |m, e| m.max(e.variance));
    let max_mf_defect = claimed.iter().fold(T::zero(), |m, e| m.max(e.mf_defect));
    let certified = claimed
        .iter()
        .all(|e| e.is_mf && e.variance <= engine.threshold().max(lit(1e-24)))
        && !matches!(verdict, Verdict::Inconclusive { .. });
    Ok(ClassificationReport {
        verdict,
        levels,
        spec,
        eigenstates,
        certificate: Certificate {
            norm: engine.norm,
            max_variance,
            max_mf_defect,
            reconstruction_error,
            certified,
        },
        oracle_override,
        restarts: engine.restarts,
        notes,
    })
}

fn build_spec<T: Real>(csa: &CsaOperators<T>, levels: &[LevelReport<T>]) -> Result<ClassSpec<T>> {
    let tuples = csa.tuples()?;
    let k = levels.len();
    Ok(ClassSpec {
        csa: csa.clone(),
        levels: levels
            .iter()
            .enumerate()
            .map(|(i, l)| ClassLevel {
                function: l.function.clone(),
                rotation: l.rotation.clone(),
                projector: (i + 1 < k)
                    .then(|| ProjectorSpec::Tuples(l.states.iter().map(|&j| tuples[j].clone()).collect())),
            })
            .collect(),
    })
}

/// Exact eigenvectors of the active block of `h_cur`, mapped back by `cumulative`. Degenerate
/// eigenspaces are split by a generic combination of the CSA operators so that vectors of
/// definite CSA sector are tested.
fn remaining_eigenvectors<T: Real>(
    engine: &Engine<'_, T>,
    h_cur: &DMatrix<Cplx<T>>,
    cumulative: &DMatrix<Cplx<T>>,
    active: &[usize],
) -> Result<Vec<(T, DVector<Cplx<T>>)>> {
    let m = active.len();
    let block = DMatrix::from_fn(m, m, |r, c| h_cur[(active[r], active[c])]);
    let eig = hermitian_eigen(&block);
    let dim = h_cur.nrows();
    let embed = |v: DVector<Cplx<T>>| {
        let mut full = DVector::<Cplx<T>>::zeros(dim);
        for (r, &j) in active.iter().enumerate() {
            full[j] = v[r];
        }
        cumulative * full
    };
    let mut generic = DMatrix::<Cplx<T>>::zeros(dim, dim);
    for (k, op) in engine.csa.operators().iter().enumerate() {
        let w = lit::<T>(((k + 2) as f64).ln() + 0.1);
        generic += to_matrix(op, engine.basis.modes())?.matrix * cre(w);
    }
    let mut out = Vec::with_capacity(m);
    for group in eig.degeneracy_groups() {
        let vecs: Vec<DVector<Cplx<T>>> = group.clone().map(|c| embed(eig.vector(c))).collect();
        if vecs.len() == 1 {
            out.push((eig.values[group.start], vecs.into_iter().next().expect("one")));
            continue;
        }
        let q = DMatrix::from_columns(&vecs);
        let projected = q.adjoint() * &generic * &q;
        let inner = hermitian_eigen(&projected);
        for c in 0..vecs.len() {
            out.push((eig.values[group.start], &q * inner.vector(c)));
        }
    }
    Ok(out)
}
