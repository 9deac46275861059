//! Finite Lie algebras of anti-hermitian operator polynomials.

use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_traits::One;

use super::poly::OperatorPolynomial;
use super::string::{Axis, Factor, Family};
use super::transform::{fermionic_from_majorana, jordan_wigner, majorana_from_fermionic};
use crate::error::{Error, Result};
use crate::scalar::{abs, cabs, cim, cre, lit, Cplx, Real};

/// Default dimension cap for [`AlgebraBasis::lie_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 512;

const INDEPENDENCE_TOL: f64 = 1e-10;
const SYMBOL_CAP: usize = 2048;

/// Whether coefficients are read over the reals (compact form) or the complex extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    RealCompact,
    ComplexExtension,
}

/// Anti-hermitian generators A_k closed under commutation, with structure constants
/// `[A_i, A_j] = sum_k xi_ij^k A_k`. The first `csa_dim()` generators span the Cartan subalgebra.
#[derive(Clone, Debug)]
pub struct AlgebraBasis<T: Real> {
    family: Family,
    modes: usize,
    generators: Vec<OperatorPolynomial<T>>,
    labels: Vec<String>,
    xi: Vec<T>,
    max_imag: T,
    csa: usize,
    field: Field,
    gram_chol: DMatrix<Cplx<T>>,
    hs_gram: OnceLock<DMatrix<T>>,
    symbols: OnceLock<std::result::Result<Arc<SymbolModule<T>>, String>>,
}

impl<T: Real> AlgebraBasis<T> {
    /// Builds a basis from generators that are already closed. The first `csa` generators
    /// must pairwise commute.
    pub fn from_generators(
        generators: Vec<OperatorPolynomial<T>>,
        labels: Vec<String>,
        csa: usize,
    ) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Invalid("empty generator list".into()))?;
        let family = first.family();
        let modes = generators.iter().map(OperatorPolynomial::modes).max().unwrap_or(0);
        let generators: Vec<_> = generators
            .into_iter()
            .map(|g| g.with_modes(modes))
            .collect::<Result<_>>()?;
        if labels.len() != generators.len() {
            return Err(Error::Invalid("one label per generator required".into()));
        }
        for (g, l) in generators.iter().zip(&labels) {
            if g.family() != family {
                return Err(Error::FamilyMismatch {
                    left: family,
                    right: g.family(),
                });
            }
            if !g.is_antihermitian() {
                return Err(Error::NotAntiHermitian(l.clone()));
            }
        }
        let n = generators.len();
        let mut gram = DMatrix::<Cplx<T>>::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] = generators[a].complex_dot(&generators[b]);
            }
        }
        let gram_chol = gram
            .cholesky()
            .ok_or_else(|| Error::Invalid("generators are linearly dependent".into()))?
            .l();
        let mut basis = AlgebraBasis {
            family,
            modes,
            generators,
            labels,
            xi: vec![T::zero(); n * n * n],
            max_imag: T::zero(),
            csa,
            field: Field::RealCompact,
            gram_chol,
            hs_gram: OnceLock::new(),
            symbols: OnceLock::new(),
        };
        basis.compute_structure_constants()?;
        for i in 0..csa {
            for j in 0..csa {
                if (0..n).any(|k| abs(basis.structure_constant(i, j, k)) > lit(1e-10)) {
                    return Err(Error::CsaNotMaximal(format!(
                        "{} and {} do not commute",
                        basis.labels[i], basis.labels[j]
                    )));
                }
            }
        }
        Ok(basis)
    }

    fn compute_structure_constants(&mut self) -> Result<()> {
        let n = self.generators.len();
        let mut max_imag = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let c = self.generators[i].commutator(&self.generators[j])?;
                let coords = self.complex_coordinates(&c).map_err(|_| {
                    Error::OutsideEnvelope(format!(
                        "[{}, {}] is not in the span of the generators",
                        self.labels[i], self.labels[j]
                    ))
                })?;
                for k in 0..n {
                    let x = coords[k];
                    max_imag = max_imag.max(abs(x.im));
                    self.xi[(i * n + j) * n + k] = x.re;
                    self.xi[(j * n + i) * n + k] = -x.re;
                }
            }
        }
        self.max_imag = max_imag;
        Ok(())
    }

    /// Closes `seed` under commutation. Each seed element must be anti-hermitian.
    pub fn lie_closure(seed: &[OperatorPolynomial<T>], cap: usize) -> Result<Self> {
        let first = seed
            .first()
            .ok_or_else(|| Error::Invalid("empty seed".into()))?;
        let family = first.family();
        let modes = seed.iter().map(OperatorPolynomial::modes).max().unwrap_or(0);
        let mut span = Span::default();
        let mut elements: Vec<OperatorPolynomial<T>> = Vec::new();
        for (k, s) in seed.iter().enumerate() {
            if s.family() != family {
                return Err(Error::FamilyMismatch {
                    left: family,
                    right: s.family(),
                });
            }
            if !s.is_antihermitian() {
                return Err(Error::NotAntiHermitian(format!("seed element {}", k + 1)));
            }
            let s = s.with_modes(modes)?;
            if span.insert(&s) {
                elements.push(s);
            }
        }
        let mut done = 0;
        while done < elements.len() {
            let current = elements[done].clone();
            for j in 0..done {
                let c = elements[j].commutator(&current)?;
                if span.insert(&c) {
                    elements.push(c);
                    if elements.len() > cap {
                        return Err(Error::ClosureCap(cap));
                    }
                }
            }
            done += 1;
        }
        let labels = (1..=elements.len()).map(|k| format!("A{k}")).collect();
        let raw = AlgebraBasis::from_generators(elements, labels, 0)?;
        raw.with_default_csa()
    }

    /// Re-bases the algebra with a maximal abelian subalgebra in front. Standard Cartan
    /// candidates are used where they lie in the span; the set is then extended through the
    /// centralizer until it is maximal.
    pub fn with_default_csa(&self) -> Result<Self> {
        let n = self.dim();
        let mut chosen: Vec<(OperatorPolynomial<T>, String)> = Vec::new();
        let mut chosen_coords: Vec<DVector<T>> = Vec::new();
        let mut span = Span::default();
        let try_add = |p: OperatorPolynomial<T>,
                       label: String,
                       chosen: &mut Vec<(OperatorPolynomial<T>, String)>,
                       coords: &mut Vec<DVector<T>>,
                       span: &mut Span<T>|
         -> Result<()> {
            let Ok(c) = self.real_coordinates(&p) else {
                return Ok(());
            };
            for (q, _) in chosen.iter() {
                if !q.commutator(&p)?.is_zero() {
                    return Ok(());
                }
            }
            if span.insert(&p) {
                chosen.push((p, label));
                coords.push(c);
            }
            Ok(())
        };
        for (p, label) in default_csa_candidates::<T>(self.family, self.modes) {
            try_add(p, label, &mut chosen, &mut chosen_coords, &mut span)?;
        }
        if chosen.is_empty() {
            let g = self.generators[0].clone();
            let l = self.labels[0].clone();
            try_add(g, l, &mut chosen, &mut chosen_coords, &mut span)?;
        }
        // Extend through the centralizer of the current abelian set.
        let mut extra = 1;
        loop {
            let stacked = {
                let mats: Vec<DMatrix<T>> = chosen_coords.iter().map(|c| self.ad_of(c)).collect();
                let mut m = DMatrix::<T>::zeros(n * mats.len().max(1), n);
                for (b, a) in mats.iter().enumerate() {
                    m.view_mut((b * n, 0), (n, n)).copy_from(a);
                }
                m
            };
            let null = null_space(&stacked, lit(1e-9));
            let mut added = false;
            for v in null {
                let p = self.element(&v);
                let before = chosen.len();
                try_add(
                    p,
                    format!("C{extra}"),
                    &mut chosen,
                    &mut chosen_coords,
                    &mut span,
                )?;
                if chosen.len() > before {
                    extra += 1;
                    added = true;
                    break;
                }
            }
            if !added {
                break;
            }
        }
        let r = chosen.len();
        let mut gens: Vec<OperatorPolynomial<T>> = Vec::with_capacity(n);
        let mut labels: Vec<String> = Vec::with_capacity(n);
        for (p, l) in chosen {
            gens.push(p);
            labels.push(l);
        }
        for (g, l) in self.generators.iter().zip(&self.labels) {
            if gens.len() == n {
                break;
            }
            if span.insert(g) {
                gens.push(g.clone());
                labels.push(l.clone());
            }
        }
        AlgebraBasis::from_generators(gens, labels, r)
    }

    /// u(N) in fermionic form: iE(p,p), then kappa(p,q) = (E^p_q - E^q_p)/2 and
    /// kappa'(p,q) = i(E^p_q + E^q_p)/2 for p < q.
    pub fn unitary(modes: usize) -> Self {
        let mut gens = Vec::new();
        let mut labels = Vec::new();
        let i = OperatorPolynomial::<T>::i();
        for p in 1..=modes {
            gens.push(OperatorPolynomial::number(modes, p).scale(i));
            labels.push(format!("iE({p},{p})"));
        }
        for p in 1..=modes {
            for q in (p + 1)..=modes {
                gens.push(kappa(modes, p, q));
                labels.push(format!("kappa({p},{q})"));
                gens.push(kappa_prime(modes, p, q));
                labels.push(format!("kappa'({p},{q})"));
            }
        }
        AlgebraBasis::from_generators(gens, labels, modes).expect("u(N) is closed")
    }

    /// so(2N) in Majorana form, S(j,k) = g_j g_k / 2, with S(2p-1,2p) as the CSA.
    pub fn orthogonal_even(modes: usize) -> Self {
        let (gens, labels) = so_generators::<T>(modes, false);
        AlgebraBasis::from_generators(gens, labels, modes).expect("so(2N) is closed")
    }

    /// so(2N+1) in Majorana form: the so(2N) generators plus S(j,0) = -i g_j / 2, which keeps
    /// [S_ij, S_kl] = d_jk S_il + d_il S_jk - d_ik S_jl - d_jl S_ik with index 0 included.
    pub fn orthogonal_odd(modes: usize) -> Self {
        let (gens, labels) = so_generators::<T>(modes, true);
        AlgebraBasis::from_generators(gens, labels, modes).expect("so(2N+1) is closed")
    }

    /// Direct sum of N copies of su(2): iz(k), then ix(k), iy(k).
    pub fn su2_sum(qubits: usize) -> Self {
        let i = OperatorPolynomial::<T>::i();
        let mut gens = Vec::new();
        let mut labels = Vec::new();
        for k in 1..=qubits {
            gens.push(OperatorPolynomial::pauli(qubits, k, Axis::Z).scale(i));
            labels.push(format!("iz({k})"));
        }
        for k in 1..=qubits {
            for axis in [Axis::X, Axis::Y] {
                gens.push(OperatorPolynomial::pauli(qubits, k, axis).scale(i));
                labels.push(format!("i{}({k})", axis.symbol()));
            }
        }
        AlgebraBasis::from_generators(gens, labels, qubits).expect("su(2)^N is closed")
    }

    /// Default basis for a family: u(N), so(2N) or su(2)^N.
    pub fn standard(family: Family, modes: usize) -> Self {
        match family {
            Family::Fermionic => Self::unitary(modes),
            Family::Majorana => Self::orthogonal_even(modes),
            Family::Pauli => Self::su2_sum(modes),
        }
    }

    /// Looks up a standard basis by name (`u`, `so`, `so-odd`, `su2`).
    pub fn by_name(name: &str, family: Family, modes: usize) -> Result<Self> {
        let b = match name {
            "u" => Self::unitary(modes),
            "so" => Self::orthogonal_even(modes),
            "so-odd" => Self::orthogonal_odd(modes),
            "su2" => Self::su2_sum(modes),
            other => return Err(Error::Invalid(format!("unknown algebra `{other}`"))),
        };
        b.in_family(family)
    }

    /// The same algebra with every generator rewritten in another operator family.
    pub fn in_family(&self, family: Family) -> Result<Self> {
        if family == self.family {
            return Ok(self.clone());
        }
        let map = |p: &OperatorPolynomial<T>| -> Result<OperatorPolynomial<T>> {
            match (self.family, family) {
                (Family::Majorana, Family::Fermionic) => fermionic_from_majorana(p),
                (Family::Fermionic, Family::Majorana) => majorana_from_fermionic(p),
                (Family::Fermionic | Family::Majorana, Family::Pauli) => jordan_wigner(p),
                (from, to) => Err(Error::FamilyMismatch { left: to, right: from }),
            }
        };
        let gens = self.generators.iter().map(map).collect::<Result<Vec<_>>>()?;
        AlgebraBasis::from_generators(gens, self.labels.clone(), self.csa)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Marks the basis as read over the complex extension.
    pub fn complexified(&self) -> Self {
        let mut b = self.clone();
        b.field = Field::ComplexExtension;
        b
    }

    pub fn generators(&self) -> &[OperatorPolynomial<T>] {
        &self.generators
    }

    pub fn generator(&self, k: usize) -> &OperatorPolynomial<T> {
        &self.generators[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn csa_dim(&self) -> usize {
        self.csa
    }

    pub fn csa_indices(&self) -> std::ops::Range<usize> {
        0..self.csa
    }

    pub fn csa_elements(&self) -> &[OperatorPolynomial<T>] {
        &self.generators[..self.csa]
    }

    /// Hermitian CSA operators -i C_k.
    pub fn csa_hermitian(&self) -> Vec<OperatorPolynomial<T>> {
        self.csa_elements().iter().map(|c| c.scale(cim(-T::one()))).collect()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> T {
        let n = self.dim();
        self.xi[(i * n + j) * n + k]
    }

    /// Largest imaginary part met while expanding commutators in the basis.
    pub fn max_structure_imag(&self) -> T {
        self.max_imag
    }

    /// Matrix of ad(A_i) on coordinates: column j holds the coordinates of [A_i, A_j].
    pub fn ad_matrix(&self, i: usize) -> DMatrix<T> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |k, j| self.structure_constant(i, j, k))
    }

    /// ad of the element with coordinates `c`.
    pub fn ad_of(&self, c: &DVector<T>) -> DMatrix<T> {
        let n = self.dim();
        let mut m = DMatrix::<T>::zeros(n, n);
        for (i, &ci) in c.iter().enumerate() {
            if ci != T::zero() {
                m += self.ad_matrix(i) * ci;
            }
        }
        m
    }

    /// Largest violation of the Jacobi identity over all generator triples.
    pub fn jacobi_defect(&self) -> T {
        let n = self.dim();
        let ad: Vec<DMatrix<T>> = (0..n).map(|i| self.ad_matrix(i)).collect();
        let mut worst = T::zero();
        // ad is a representation: ad([A_i, A_j]) = [ad_i, ad_j].
        for i in 0..n {
            for j in (i + 1)..n {
                let mut lhs = DMatrix::<T>::zeros(n, n);
                for k in 0..n {
                    let x = self.structure_constant(i, j, k);
                    if x != T::zero() {
                        lhs += &ad[k] * x;
                    }
                }
                let rhs = &ad[i] * &ad[j] - &ad[j] * &ad[i];
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// Expansion coefficients in the generator basis (complex least squares).
    pub fn complex_coordinates(&self, p: &OperatorPolynomial<T>) -> Result<DVector<Cplx<T>>> {
        if p.family() != self.family {
            return Err(Error::FamilyMismatch {
                left: self.family,
                right: p.family(),
            });
        }
        let n = self.dim();
        let b = DVector::from_fn(n, |a, _| self.generators[a].complex_dot(p));
        let l = &self.gram_chol;
        let y = l
            .solve_lower_triangular(&b)
            .ok_or_else(|| Error::Invalid("singular Gram matrix".into()))?;
        let x = l
            .adjoint()
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Invalid("singular Gram matrix".into()))?;
        let mut residual = p.clone();
        for (k, g) in self.generators.iter().enumerate() {
            residual.axpy(-x[k], g);
        }
        let scale = p.coefficient_norm().max(T::one());
        if residual.coefficient_norm() > scale * lit(1e-8) {
            return Err(Error::OutsideEnvelope(format!(
                "element is not a linear combination of the {} generators",
                n
            )));
        }
        Ok(x)
    }

    /// Real coordinates of an element of the compact algebra.
    pub fn real_coordinates(&self, p: &OperatorPolynomial<T>) -> Result<DVector<T>> {
        let c = self.complex_coordinates(p)?;
        let scale = c.iter().map(|z| cabs(*z)).fold(T::one(), |a, b| a.max(b));
        if c.iter().any(|z| abs(z.im) > scale * lit(1e-8)) {
            return Err(Error::NotAntiHermitian(
                "element has imaginary coordinates".into(),
            ));
        }
        Ok(c.map(|z| z.re))
    }

    /// Sum_k c_k A_k.
    pub fn element(&self, c: &DVector<T>) -> OperatorPolynomial<T> {
        let mut out = OperatorPolynomial::zero(self.family, self.modes);
        for (k, &ck) in c.iter().enumerate() {
            if ck != T::zero() {
                out.axpy(cre(ck), &self.generators[k]);
            }
        }
        out
    }

    /// Sum_k c_k A_k with complex coefficients.
    pub fn complex_element(&self, c: &DVector<Cplx<T>>) -> OperatorPolynomial<T> {
        let mut out = OperatorPolynomial::zero(self.family, self.modes);
        for (k, &ck) in c.iter().enumerate() {
            out.axpy(ck, &self.generators[k]);
        }
        out
    }

    /// Hilbert-Schmidt metric Re Tr(A_i^dag A_j) / 2^N. It is ad-invariant, so every ad
    /// matrix is antisymmetric in this metric.
    pub fn hs_gram(&self) -> &DMatrix<T> {
        self.hs_gram.get_or_init(|| {
            let vecs: Vec<OperatorPolynomial<T>> = self
                .generators
                .iter()
                .map(|g| match self.family {
                    Family::Fermionic => majorana_from_fermionic(g).expect("fermionic generator"),
                    _ => g.clone(),
                })
                .collect();
            let n = vecs.len();
            DMatrix::from_fn(n, n, |a, b| vecs[a].real_dot(&vecs[b]))
        })
    }

    /// Linear span of the elementary symbols closed under ad of every generator.
    pub(crate) fn symbol_module(&self) -> Result<Arc<SymbolModule<T>>> {
        self.symbols
            .get_or_init(|| SymbolModule::build(self).map(Arc::new).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::OutsideEnvelope)
    }
}

fn kappa<T: Real>(modes: usize, p: usize, q: usize) -> OperatorPolynomial<T> {
    (&OperatorPolynomial::excitation(modes, p, q) - &OperatorPolynomial::excitation(modes, q, p))
        .scale_real(lit(0.5))
}

fn kappa_prime<T: Real>(modes: usize, p: usize, q: usize) -> OperatorPolynomial<T> {
    (&OperatorPolynomial::excitation(modes, p, q) + &OperatorPolynomial::excitation(modes, q, p))
        .scale(cim(lit(0.5)))
}

fn so_generators<T: Real>(modes: usize, odd: bool) -> (Vec<OperatorPolynomial<T>>, Vec<String>) {
    let pair = |j: usize, k: usize| -> OperatorPolynomial<T> {
        OperatorPolynomial::monomial(
            Family::Majorana,
            modes,
            &[Factor::Majorana(j), Factor::Majorana(k)],
            cre(lit(0.5)),
        )
        .expect("index in range")
    };
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for p in 1..=modes {
        gens.push(pair(2 * p - 1, 2 * p));
        labels.push(format!("S({},{})", 2 * p - 1, 2 * p));
    }
    for j in 1..=2 * modes {
        for k in (j + 1)..=2 * modes {
            if j % 2 == 1 && k == j + 1 {
                continue;
            }
            gens.push(pair(j, k));
            labels.push(format!("S({j},{k})"));
        }
    }
    if odd {
        for j in 1..=2 * modes {
            gens.push(OperatorPolynomial::majorana(modes, j).scale(cim(lit(-0.5))));
            labels.push(format!("S({j},0)"));
        }
    }
    (gens, labels)
}

fn default_csa_candidates<T: Real>(family: Family, modes: usize) -> Vec<(OperatorPolynomial<T>, String)> {
    let i = OperatorPolynomial::<T>::i();
    let mut out = Vec::new();
    match family {
        Family::Fermionic => {
            for p in 1..=modes {
                out.push((OperatorPolynomial::number(modes, p).scale(i), format!("iE({p},{p})")));
            }
            for p in 1..=modes {
                let one = OperatorPolynomial::identity(Family::Fermionic, modes);
                let g = (&one - &OperatorPolynomial::number(modes, p).scale_real(lit(2.0)))
                    .scale(cim(lit(0.5)));
                out.push((g, format!("S({},{})", 2 * p - 1, 2 * p)));
            }
        }
        Family::Majorana => {
            for p in 1..=modes {
                let g = OperatorPolynomial::monomial(
                    family,
                    modes,
                    &[Factor::Majorana(2 * p - 1), Factor::Majorana(2 * p)],
                    cre(lit(0.5)),
                )
                .expect("index in range");
                out.push((g, format!("S({},{})", 2 * p - 1, 2 * p)));
            }
        }
        Family::Pauli => {
            for k in 1..=modes {
                out.push((OperatorPolynomial::pauli(modes, k, Axis::Z).scale(i), format!("iz({k})")));
            }
        }
    }
    out
}

/// Real orthonormal set for incremental independence tests.
struct Span<T: Real> {
    basis: Vec<OperatorPolynomial<T>>,
}

impl<T: Real> Default for Span<T> {
    fn default() -> Self {
        Span { basis: Vec::new() }
    }
}

impl<T: Real> Span<T> {
    /// Adds `p` if it is independent of the span over the reals; reports whether it was added.
    fn insert(&mut self, p: &OperatorPolynomial<T>) -> bool {
        let norm = p.coefficient_norm();
        if norm == T::zero() {
            return false;
        }
        let mut r = p.clone();
        // Two passes of Gram-Schmidt keep the set orthonormal to working precision.
        for _ in 0..2 {
            for q in &self.basis {
                let d = q.real_dot(&r);
                r.axpy(cre(-d), q);
            }
        }
        let rn = r.coefficient_norm();
        if rn <= norm * lit(INDEPENDENCE_TOL) {
            return false;
        }
        self.basis.push(r.scale_real(T::one() / rn));
        true
    }
}

/// Orthonormal null-space vectors of `m` (relative singular-value cutoff).
pub(crate) fn null_space<T: Real>(m: &DMatrix<T>, rel_tol: T) -> Vec<DVector<T>> {
    let n = m.ncols();
    // Work with the n x n normal matrix so the SVD always yields n right singular vectors.
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(T::zero(), |a, &b| a.max(abs(b)));
    let cutoff = (rel_tol * max).max(T::default_epsilon() * lit(1e3));
    let mut idx: Vec<usize> = (0..n).filter(|&k| abs(eig.eigenvalues[k]) <= cutoff).collect();
    idx.sort_unstable();
    idx.into_iter()
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect()
}

/// Complex span W of the elementary symbols of a family, closed under ad of the generators,
/// with the matrices of every ad(A_k) on an orthonormal basis of W.
#[derive(Debug)]
pub(crate) struct SymbolModule<T: Real> {
    pub elements: Vec<OperatorPolynomial<T>>,
    pub ad: Vec<DMatrix<Cplx<T>>>,
    pub symbols: Vec<(Factor, DVector<Cplx<T>>)>,
}

impl<T: Real> SymbolModule<T> {
    fn build(basis: &AlgebraBasis<T>) -> Result<Self> {
        let family = basis.family;
        let modes = basis.modes;
        let symbols: Vec<Factor> = match family {
            Family::Fermionic => (1..=modes)
                .flat_map(|p| [Factor::annihilate(p), Factor::create(p)])
                .collect(),
            Family::Majorana => (1..=2 * modes).map(Factor::Majorana).collect(),
            Family::Pauli => (1..=modes)
                .flat_map(|k| Axis::ALL.map(|axis| Factor::Pauli { qubit: k, axis }))
                .collect(),
        };
        let mut elements: Vec<OperatorPolynomial<T>> = Vec::new();
        let insert = |p: &OperatorPolynomial<T>, elements: &mut Vec<OperatorPolynomial<T>>| {
            let norm = p.coefficient_norm();
            if norm == T::zero() {
                return;
            }
            let mut r = p.clone();
            for _ in 0..2 {
                for q in elements.iter() {
                    let d = q.complex_dot(&r);
                    r.axpy(-d, q);
                }
            }
            let rn = r.coefficient_norm();
            if rn > norm * lit(INDEPENDENCE_TOL) {
                elements.push(r.scale_real(T::one() / rn));
            }
        };
        for &s in &symbols {
            let p = OperatorPolynomial::monomial(family, modes, &[s], Cplx::one())?;
            insert(&p, &mut elements);
        }
        let mut k = 0;
        while k < elements.len() {
            let w = elements[k].clone();
            for g in &basis.generators {
                let c = g.commutator(&w)?;
                insert(&c, &mut elements);
                if elements.len() > SYMBOL_CAP {
                    return Err(Error::OutsideEnvelope(format!(
                        "symbol module exceeds {SYMBOL_CAP} dimensions"
                    )));
                }
            }
            k += 1;
        }
        let d = elements.len();
        let ad = basis
            .generators
            .iter()
            .map(|g| -> Result<DMatrix<Cplx<T>>> {
                let mut m = DMatrix::<Cplx<T>>::zeros(d, d);
                for j in 0..d {
                    let c = g.commutator(&elements[j])?;
                    for i in 0..d {
                        m[(i, j)] = elements[i].complex_dot(&c);
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let symbols = symbols
            .into_iter()
            .map(|s| {
                let p = OperatorPolynomial::monomial(family, modes, &[s], Cplx::one())
                    .expect("symbol in range");
                let v = DVector::from_fn(d, |i, _| elements[i].complex_dot(&p));
                (s, v)
            })
            .collect();
        Ok(SymbolModule {
            elements,
            ad,
            symbols,
        })
    }

    pub fn coordinates_of(&self, f: &Factor) -> &DVector<Cplx<T>> {
        &self
            .symbols
            .iter()
            .find(|(s, _)| s == f)
            .expect("symbol registered")
            .1
    }
}
