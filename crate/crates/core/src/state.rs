//! Pure and mixed states of distinguishable particles, bosons and fermions.
//!
//! Bosonic and fermionic states are always stored embedded in the full
//! `⊗^L C^N` space; occupation and Slater labels only exist at construction.

use nalgebra::{DMatrix, SymmetricEigen};
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;
use crate::tensor::{
    apply_local_operator, apply_site_permutation, apply_total_symmetrizer, bipartite_matrix,
    permutations_with_sign, Amplitudes, DensityMatrix, Parity, ParticleKind, SitePermutation,
    SubsetMask, SystemShape, C64, ONE,
};

/// Tolerance for normalization, symmetry and density-matrix validation.
pub const STATE_TOL: f64 = 1e-10;

/// Mode occupations `n_1 … n_N` of a bosonic basis ket.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OccupationVector(Vec<usize>);

impl OccupationVector {
    pub fn new(counts: Vec<usize>, particles: usize) -> Result<Self> {
        let total: usize = counts.iter().sum();
        if total != particles {
            return Err(Error::Validation(format!(
                "occupations {counts:?} sum to {total}, expected L={particles}"
            )));
        }
        Ok(Self(counts))
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// Every occupation vector with `particles` bosons in `modes` modes.
    pub fn enumerate(particles: usize, modes: usize) -> Vec<Self> {
        fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<OccupationVector>) {
            if slots == 1 {
                cur.push(left);
                out.push(OccupationVector(cur.clone()));
                cur.pop();
                return;
            }
            for k in (0..=left).rev() {
                cur.push(k);
                rec(left - k, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(particles, modes, &mut Vec::new(), &mut out);
        out
    }
}

/// Strictly increasing 0-based orbital labels of a Slater determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlaterIndex(Vec<usize>);

impl SlaterIndex {
    pub fn new(orbitals: Vec<usize>, shape: &SystemShape) -> Result<Self> {
        if orbitals.len() != shape.particles() {
            return Err(Error::Validation(format!(
                "Slater index {orbitals:?} needs {} orbitals",
                shape.particles()
            )));
        }
        if orbitals.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(format!(
                "Slater index {orbitals:?} is not strictly increasing"
            )));
        }
        if orbitals.iter().any(|&o| o >= shape.modes()) {
            return Err(Error::Validation(format!(
                "Slater index {orbitals:?} exceeds N={}",
                shape.modes()
            )));
        }
        Ok(Self(orbitals))
    }

    pub fn orbitals(&self) -> &[usize] {
        &self.0
    }

    /// Every L-subset of `0..N` in lexicographic order.
    pub fn enumerate(particles: usize, modes: usize) -> Vec<Self> {
        fn rec(
            start: usize,
            left: usize,
            modes: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<SlaterIndex>,
        ) {
            if left == 0 {
                out.push(SlaterIndex(cur.clone()));
                return;
            }
            for o in start..=modes - left {
                cur.push(o);
                rec(o + 1, left - 1, modes, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if particles <= modes {
            rec(0, particles, modes, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Normalized pure state stored over `⊗^L C^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    shape: SystemShape,
    amps: Amplitudes,
}

impl PureState {
    /// Validates dimension, normalization and the kind's permutation symmetry.
    pub fn new(shape: SystemShape, amps: Amplitudes) -> Result<Self> {
        if amps.modes() != shape.modes() || amps.sites() != shape.particles() {
            return Err(Error::Shape(format!(
                "amplitudes over {}^{} do not match N={}, L={}",
                amps.modes(),
                amps.sites(),
                shape.modes(),
                shape.particles()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!("state norm {norm} is not 1")));
        }
        check_kind(&amps, shape.kind())?;
        Ok(Self { shape, amps })
    }

    pub(crate) fn new_unchecked(shape: SystemShape, amps: Amplitudes) -> Self {
        Self { shape, amps }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn kind(&self) -> ParticleKind {
        self.shape.kind()
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        let v = self.amps.as_slice();
        DensityMatrix::from_fn(v.len(), v.len(), |a, b| v[a] * v[b].conj())
    }

    /// `|ψ⟩ ⊗ |ψ⟩` on `2L` sites.
    pub fn two_copy(&self) -> Amplitudes {
        self.amps.tensor(&self.amps).expect("same N")
    }

    /// Tensor product of `L` normalized single-particle vectors.
    pub fn product_state(vectors: &[Vec<C64>]) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::Validation("product state needs at least one factor".into()))?;
        let modes = first.len();
        let shape = SystemShape::new(ParticleKind::Distinguishable, vectors.len(), modes)?;
        let mut amps = Amplitudes::new(modes, 0, vec![ONE])?;
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != modes {
                return Err(Error::Shape(format!(
                    "factor {k} has dimension {}, expected {modes}",
                    v.len()
                )));
            }
            let factor = Amplitudes::new(modes, 1, v.clone())?;
            let n = factor.norm();
            if (n - 1.0).abs() > STATE_TOL {
                return Err(Error::Validation(format!("factor {k} has norm {n}")));
            }
            amps = amps.tensor(&factor)?;
        }
        Ok(Self { shape, amps })
    }

    /// `|φ⟩^{⊗L}` as a bosonic state.
    pub fn condensate(particles: usize, phi: &[C64]) -> Result<Self> {
        let product = Self::product_state(&vec![phi.to_vec(); particles])?;
        let shape = product.shape.with_kind(ParticleKind::Boson)?;
        Ok(Self {
            shape,
            amps: product.amps,
        })
    }

    /// Superposition of normalized symmetrized occupation kets, then
    /// globally normalized.
    pub fn bosonic_state(shape: SystemShape, terms: &[(OccupationVector, C64)]) -> Result<Self> {
        if shape.kind() != ParticleKind::Boson {
            return Err(Error::Kind(format!(
                "bosonic_state needs kind boson, got {}",
                shape.kind()
            )));
        }
        if terms.is_empty() {
            return Err(Error::Validation("empty occupation map".into()));
        }
        let mut acc = Amplitudes::zeros(shape.modes(), shape.particles())?;
        for (occ, amp) in terms {
            let ket = occupation_ket(&shape, occ)?;
            acc.axpy(*amp, &ket);
        }
        let amps = acc.normalized()?;
        Ok(Self::new_unchecked(shape, amps))
    }

    /// Superposition of Slater kets `(1/√L!) Σ_σ sgn σ |i_σ(1) … i_σ(L)⟩`,
    /// then globally normalized.
    pub fn slater_state(shape: SystemShape, terms: &[(SlaterIndex, C64)]) -> Result<Self> {
        if shape.kind() != ParticleKind::Fermion {
            return Err(Error::Kind(format!(
                "slater_state needs kind fermion, got {}",
                shape.kind()
            )));
        }
        if terms.is_empty() {
            return Err(Error::Validation("empty Slater map".into()));
        }
        let mut acc = Amplitudes::zeros(shape.modes(), shape.particles())?;
        for (idx, amp) in terms {
            let ket = slater_ket(&shape, idx)?;
            acc.axpy(*amp, &ket);
        }
        let amps = acc.normalized()?;
        Ok(Self::new_unchecked(shape, amps))
    }

    /// Slater determinant of `L` orthonormal orbitals.
    pub fn slater_from_orbitals(orbitals: &[Vec<C64>]) -> Result<Self> {
        let product = Self::product_state(orbitals)?;
        let shape = product.shape.with_kind(ParticleKind::Fermion)?;
        let l = shape.particles();
        for a in 0..l {
            for b in a + 1..l {
                let ov: C64 = orbitals[a]
                    .iter()
                    .zip(&orbitals[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if ov.norm() > STATE_TOL {
                    return Err(Error::Validation(format!(
                        "orbitals {a} and {b} are not orthogonal"
                    )));
                }
            }
        }
        let anti =
            apply_total_symmetrizer(&product.amps, SubsetMask::full(l), Parity::Antisymmetric)?;
        Ok(Self::new_unchecked(shape, anti.normalized()?))
    }

    /// Haar-random state on the kind's subspace, deterministic in `seed`.
    pub fn random(shape: SystemShape, seed: u64) -> Result<Self> {
        Self::random_with(shape, &mut rng::seeded(seed))
    }

    pub fn random_with(shape: SystemShape, rng: &mut rng::StateRng) -> Result<Self> {
        match shape.kind() {
            ParticleKind::Distinguishable => {
                let v = rng::haar_vector(shape.hilbert_dim(), rng);
                Ok(Self::new_unchecked(
                    shape,
                    Amplitudes::new(shape.modes(), shape.particles(), v)?,
                ))
            }
            ParticleKind::Boson => {
                let terms: Vec<_> = OccupationVector::enumerate(shape.particles(), shape.modes())
                    .into_iter()
                    .map(|o| (o, rng::complex_gaussian(rng)))
                    .collect();
                Self::bosonic_state(shape, &terms)
            }
            ParticleKind::Fermion => {
                let terms: Vec<_> = SlaterIndex::enumerate(shape.particles(), shape.modes())
                    .into_iter()
                    .map(|s| (s, rng::complex_gaussian(rng)))
                    .collect();
                Self::slater_state(shape, &terms)
            }
        }
    }

    /// Random coherent state of the kind: a product state, a condensate or
    /// a Slater determinant built from Haar-random single-particle data.
    pub fn random_coherent(shape: SystemShape, seed: u64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        let (l, n) = (shape.particles(), shape.modes());
        match shape.kind() {
            ParticleKind::Distinguishable => {
                let vs: Vec<_> = (0..l).map(|_| rng::haar_vector(n, &mut rng)).collect();
                Self::product_state(&vs)
            }
            ParticleKind::Boson => Self::condensate(l, &rng::haar_vector(n, &mut rng)),
            ParticleKind::Fermion => {
                let u = rng::haar_unitary(n, &mut rng);
                let orbitals: Vec<Vec<C64>> = (0..l)
                    .map(|j| u.column(j).iter().copied().collect())
                    .collect();
                Self::slater_from_orbitals(&orbitals)
            }
        }
    }

    /// `(U_1 ⊗ … ⊗ U_L) |ψ⟩`. Passing the same unitary for every site keeps
    /// bosonic and fermionic symmetry.
    pub fn apply_local(&self, unitaries: &[DMatrix<C64>]) -> Result<Self> {
        if unitaries.len() != self.shape.particles() {
            return Err(Error::Shape(format!(
                "need {} local operators, got {}",
                self.shape.particles(),
                unitaries.len()
            )));
        }
        let mut v = self.amps.clone();
        for (site, u) in unitaries.iter().enumerate() {
            v = apply_local_operator(&v, site, u)?;
        }
        Ok(Self {
            shape: self.shape,
            amps: v,
        })
    }

    /// Same amplitudes reinterpreted as another kind, re-validated.
    pub fn as_kind(&self, kind: ParticleKind) -> Result<Self> {
        Self::new(self.shape.with_kind(kind)?, self.amps.clone())
    }
}

/// Normalized symmetrization of the product ket with occupations `occ`.
fn occupation_ket(shape: &SystemShape, occ: &OccupationVector) -> Result<Amplitudes> {
    if occ.counts().len() != shape.modes() {
        return Err(Error::Validation(format!(
            "occupation vector {:?} has {} modes, expected N={}",
            occ.counts(),
            occ.counts().len(),
            shape.modes()
        )));
    }
    if occ.counts().iter().sum::<usize>() != shape.particles() {
        return Err(Error::Validation(format!(
            "occupations {:?} do not sum to L={}",
            occ.counts(),
            shape.particles()
        )));
    }
    let digits: Vec<usize> = occ
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n))
        .collect();
    let product = Amplitudes::basis(shape.modes(), &digits)?;
    let sym = apply_total_symmetrizer(
        &product,
        SubsetMask::full(shape.particles()),
        Parity::Symmetric,
    )?;
    // √(L!/∏ n_i!)
    let ln_fact = |k: usize| (1..=k).map(|x| (x as f64).ln()).sum::<f64>();
    let log_coef =
        0.5 * (ln_fact(shape.particles()) - occ.counts().iter().map(|&n| ln_fact(n)).sum::<f64>());
    Ok(sym.scaled(C64::new(log_coef.exp(), 0.0)))
}

fn slater_ket(shape: &SystemShape, idx: &SlaterIndex) -> Result<Amplitudes> {
    let l = shape.particles();
    let orbitals = SlaterIndex::new(idx.orbitals().to_vec(), shape)?;
    let mut ket = Amplitudes::zeros(shape.modes(), l)?;
    let norm = 1.0 / (permutations_with_sign(l).len() as f64).sqrt();
    let mut digits = vec![0; l];
    for (p, sign) in permutations_with_sign(l) {
        for (k, &pk) in p.iter().enumerate() {
            digits[k] = orbitals.orbitals()[pk];
        }
        let at = ket.index_of(&digits)?;
        ket.as_mut_slice()[at] = C64::new(f64::from(sign) * norm, 0.0);
    }
    Ok(ket)
}

/// Rejects states lacking the permutation symmetry their kind requires.
fn check_kind(amps: &Amplitudes, kind: ParticleKind) -> Result<()> {
    let diag = symmetry_deviations(amps);
    match kind {
        ParticleKind::Boson if diag.0 > STATE_TOL => Err(Error::Kind(format!(
            "bosonic state deviates from permutation symmetry by {:.3e}",
            diag.0
        ))),
        ParticleKind::Fermion if diag.1 > STATE_TOL => Err(Error::Kind(format!(
            "fermionic state deviates from antisymmetry by {:.3e}",
            diag.1
        ))),
        _ => Ok(()),
    }
}

/// Max over adjacent transpositions of `‖τv − v‖` and `‖τv + v‖`.
fn symmetry_deviations(amps: &Amplitudes) -> (f64, f64) {
    let m = amps.sites();
    let mut sym: f64 = 0.0;
    let mut asym: f64 = 0.0;
    for k in 0..m.saturating_sub(1) {
        let t = SitePermutation::transposition(m, k, k + 1).expect("in range");
        let w = apply_site_permutation(amps, &t).expect("same sites");
        sym = sym.max(w.distance(amps));
        let neg = amps.clone().scaled(C64::new(-1.0, 0.0));
        asym = asym.max(w.distance(&neg));
    }
    (sym, asym)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    /// No exchange constraint applies (a single site).
    Distinguishable,
    Boson,
    Fermion,
    MixedSymmetry,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SymmetryDiagnosis {
    pub symmetric_deviation: f64,
    pub antisymmetric_deviation: f64,
    pub class: SymmetryClass,
}

/// Classifies `amps` by its behaviour under adjacent site transpositions.
pub fn symmetry_kind_check(amps: &Amplitudes) -> SymmetryDiagnosis {
    let (s, a) = symmetry_deviations(amps);
    let class = match (s <= STATE_TOL, a <= STATE_TOL) {
        (true, true) => SymmetryClass::Distinguishable,
        (true, false) => SymmetryClass::Boson,
        (false, true) => SymmetryClass::Fermion,
        (false, false) => SymmetryClass::MixedSymmetry,
    };
    SymmetryDiagnosis {
        symmetric_deviation: s,
        antisymmetric_deviation: a,
        class,
    }
}

/// Singular values of `ψ` across the cut `{site} | rest`, nonincreasing.
pub fn schmidt_coefficients(psi: &PureState, site: usize) -> Result<Vec<f64>> {
    let l = psi.shape.particles();
    if site >= l {
        return Err(Error::Shape(format!("site {site} out of range 0..{l}")));
    }
    if l == 1 {
        return Ok(vec![1.0]);
    }
    let m = bipartite_matrix(&psi.amps, SubsetMask::from_sites(&[site], l)?)?;
    let mut s: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Projector onto the kind's subspace applied to every column of `m`.
fn project_columns(shape: &SystemShape, m: &DensityMatrix) -> Result<DensityMatrix> {
    let parity = match shape.kind() {
        ParticleKind::Distinguishable => return Ok(m.clone()),
        ParticleKind::Boson => Parity::Symmetric,
        ParticleKind::Fermion => Parity::Antisymmetric,
    };
    let l = shape.particles();
    let mut out = DensityMatrix::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        let col = Amplitudes::new(shape.modes(), l, m.column(j).iter().copied().collect())?;
        let p = apply_total_symmetrizer(&col, SubsetMask::full(l), parity)?;
        for (i, z) in p.as_slice().iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    Ok(out)
}

/// Density matrix over `⊗^L C^N`: Hermitian, PSD, unit trace and, for
/// bosons/fermions, supported on `Sym^L` / `∧^L`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    shape: SystemShape,
    rho: DensityMatrix,
}

impl MixedState {
    pub fn new(shape: SystemShape, rho: DensityMatrix) -> Result<Self> {
        let d = shape.hilbert_dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::Shape(format!(
                "density matrix is {}x{}, expected {d}x{d}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm = (&rho - rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > STATE_TOL {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian ({herm:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::Validation(format!("trace {tr} is not 1")));
        }
        let min_eig = SymmetricEigen::new(rho.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::Validation(format!(
                "density matrix has eigenvalue {min_eig:.3e}"
            )));
        }
        if shape.kind() != ParticleKind::Distinguishable {
            let leak = (&rho - project_columns(&shape, &rho)?)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if leak > STATE_TOL {
                return Err(Error::Support(format!(
                    "{} density matrix leaks {leak:.3e} outside its subspace",
                    shape.kind()
                )));
            }
        }
        Ok(Self { shape, rho })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            shape: psi.shape,
            rho: psi.density(),
        }
    }

    /// `Σ_i p_i |ψ_i⟩⟨ψ_i|`, validated.
    pub fn from_ensemble(weights: &[f64], states: &[PureState]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Validation("empty ensemble".into()))?;
        if weights.len() != states.len() {
            return Err(Error::Validation(
                "weights and states differ in length".into(),
            ));
        }
        let d = first.shape.hilbert_dim();
        let mut rho = DensityMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            if s.shape != first.shape {
                return Err(Error::Shape("ensemble members differ in shape".into()));
            }
            if *w < 0.0 {
                return Err(Error::Validation(format!("negative weight {w}")));
            }
            rho += s.density().scale(*w);
        }
        Self::new(first.shape, rho)
    }

    /// Normalized projector onto the kind's subspace.
    pub fn maximally_mixed(shape: SystemShape) -> Result<Self> {
        let d = shape.hilbert_dim();
        let q = project_columns(&shape, &DensityMatrix::identity(d, d))?;
        let tr = q.trace().re;
        Self::new(shape, q.scale(1.0 / tr))
    }

    /// `ρ = Σ w_i |ψ_i⟩⟨ψ_i|` with `rank` Haar vectors on the kind's
    /// subspace and flat-Dirichlet weights.
    pub fn random(shape: SystemShape, rank: usize, seed: u64) -> Result<Self> {
        let cap = subspace_dim(&shape);
        if rank == 0 || rank > cap {
            return Err(Error::Parameter(format!("rank {rank} outside 1..={cap}")));
        }
        let mut rng = rng::seeded(seed);
        let states = (0..rank)
            .map(|_| PureState::random_with(shape, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        // flat Dirichlet: normalized Exp(1) draws
        let raw: Vec<f64> = (0..rank).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let d = shape.hilbert_dim();
        let mut rho = DensityMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(&states) {
            rho += s.density().scale(*w);
        }
        // symmetrize away round-off before validation
        let rho = (&rho + rho.adjoint()).scale(0.5);
        let tr = rho.trace().re;
        Self::new(shape, rho.scale(1.0 / tr))
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn kind(&self) -> ParticleKind {
        self.shape.kind()
    }

    pub fn matrix(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        crate::tensor::purity(&self.rho)
    }

    /// Eigenvalues (nonincreasing) and matching eigenvectors as columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = SymmetricEigen::new(self.rho.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = DMatrix::from_fn(self.rho.nrows(), order.len(), |i, j| {
            eig.eigenvectors[(i, order[j])]
        });
        (vals, vecs)
    }
}

/// Dimension of `⊗^L C^N`, `Sym^L C^N` or `∧^L C^N`.
pub fn subspace_dim(shape: &SystemShape) -> usize {
    let (l, n) = (shape.particles(), shape.modes());
    match shape.kind() {
        ParticleKind::Distinguishable => shape.hilbert_dim(),
        ParticleKind::Boson => binomial(n + l - 1, l),
        ParticleKind::Fermion => binomial(n, l),
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Standard states used across examples and tests.
pub mod named {
    use super::*;

    fn basis_state(kind: ParticleKind, modes: usize, terms: &[(&[usize], f64)]) -> PureState {
        let l = terms[0].0.len();
        let shape = SystemShape::new(kind, l, modes).expect("valid shape");
        let mut v = Amplitudes::zeros(modes, l).expect("valid dims");
        for (digits, a) in terms {
            let at = v.index_of(digits).expect("in range");
            v.as_mut_slice()[at] += C64::new(*a, 0.0);
        }
        PureState::new(shape, v.normalized().expect("nonzero")).expect("valid state")
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> PureState {
        basis_state(
            ParticleKind::Distinguishable,
            2,
            &[(&[0, 0], 1.0), (&[1, 1], 1.0)],
        )
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on `l` qubits.
    pub fn ghz(l: usize) -> PureState {
        let zeros = vec![0; l];
        let ones = vec![1; l];
        basis_state(
            ParticleKind::Distinguishable,
            2,
            &[(&zeros, 1.0), (&ones, 1.0)],
        )
    }

    /// W state on `l` qubits, declared bosonic.
    pub fn w_state(l: usize) -> PureState {
        let shape = SystemShape::new(ParticleKind::Boson, l, 2).expect("valid shape");
        let occ = OccupationVector::new(vec![l - 1, 1], l).expect("sums to l");
        PureState::bosonic_state(shape, &[(occ, ONE)]).expect("valid")
    }

    /// `p |Φ⁺⟩⟨Φ⁺| + (1 − p) I/4`.
    pub fn werner(p: f64) -> Result<MixedState> {
        let b = bell();
        let id = DensityMatrix::identity(4, 4).scale(0.25);
        MixedState::new(b.shape(), b.density().scale(p) + id.scale(1.0 - p))
    }

    /// `(|12⟩ − |21⟩ + |34⟩ − |43⟩)/2` with 1-based orbital labels (L=2, N=4).
    pub fn fermion_pair_superposition() -> PureState {
        let shape = SystemShape::new(ParticleKind::Fermion, 2, 4).expect("valid shape");
        let a = SlaterIndex::new(vec![0, 1], &shape).expect("valid");
        let b = SlaterIndex::new(vec![2, 3], &shape).expect("valid");
        PureState::slater_state(shape, &[(a, ONE), (b, ONE)]).expect("valid")
    }

    pub fn slater(shape: SystemShape, orbitals: &[usize]) -> Result<PureState> {
        let idx = SlaterIndex::new(orbitals.to_vec(), &shape)?;
        PureState::slater_state(shape, &[(idx, ONE)])
    }
}
