//! Two-copy operators `P_d`, `P_b`, `P_f`, `P⁻`, `V`, `Ṽ`: matrix-free
//! application, expectation values, dense materialization and health checks.
//!
//! `P_b` and `P_f` act on the embedded pair space `Sym^L ⊗ Sym^L` or
//! `∧^L ⊗ ∧^L`. They are applied as the compression `Q P⁺ Q` (times `α` for
//! fermions), `Q` being the (anti)symmetrizer on both copies; this is the
//! operator every expectation value on the pair space sees.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{MixedState, PureState};
use crate::tensor::{
    apply_copy_swap, apply_product_symmetrizer, apply_total_symmetrizer, linear_entropy_pure,
    Amplitudes, DensityMatrix, Parity, ParticleKind, SubsetMask, SystemShape, C64, ONE, ZERO,
};

/// Largest two-copy dimension `N^(2L)` materialized by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Every health defect must stay at or below this.
pub const HEALTH_TOL: f64 = 1e-10;

/// `(L, N)` points checked by default.
pub const HEALTH_GRID: [(usize, usize); 5] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectorTag {
    Pd,
    Pb,
    Pf,
    Pminus,
    V,
    Vtilde,
}

impl ProjectorTag {
    pub fn is_projector(self) -> bool {
        !matches!(self, ProjectorTag::V | ProjectorTag::Vtilde)
    }
}

/// Symbolic two-copy operator on `⊗^{2L} C^N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectorSpec {
    pub tag: ProjectorTag,
    #[serde(skip)]
    shape: SystemShape,
    /// `2^L/(L+1)` for `Pf` and `Vtilde`, 1 otherwise.
    pub alpha: f64,
}

impl ProjectorSpec {
    pub fn new(tag: ProjectorTag, shape: SystemShape) -> Result<Self> {
        let need = match tag {
            ProjectorTag::Pb => Some(ParticleKind::Boson),
            ProjectorTag::Pf | ProjectorTag::Vtilde => Some(ParticleKind::Fermion),
            _ => None,
        };
        if let Some(kind) = need {
            if shape.kind() != kind {
                return Err(Error::Kind(format!(
                    "{tag:?} needs kind {kind}, got {}",
                    shape.kind()
                )));
            }
        }
        let alpha = match tag {
            ProjectorTag::Pf | ProjectorTag::Vtilde => shape.alpha(),
            _ => 1.0,
        };
        Ok(Self { tag, shape, alpha })
    }

    /// The natural two-copy projector for the shape's kind.
    pub fn for_kind(shape: SystemShape) -> Result<Self> {
        let tag = match shape.kind() {
            ParticleKind::Distinguishable => ProjectorTag::Pd,
            ParticleKind::Boson => ProjectorTag::Pb,
            ParticleKind::Fermion => ProjectorTag::Pf,
        };
        Self::new(tag, shape)
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    /// Matrix-free application to a vector on `2L` sites.
    pub fn apply(&self, v: &Amplitudes) -> Result<Amplitudes> {
        let l = self.shape.particles();
        if v.sites() != 2 * l || v.modes() != self.shape.modes() {
            return Err(Error::Shape(format!(
                "operator acts on {}^{}, vector lives on {}^{}",
                self.shape.modes(),
                2 * l,
                v.modes(),
                v.sites()
            )));
        }
        let tail = 2.0 * (1.0 - 0.5f64.powi(l as i32));
        match self.tag {
            ProjectorTag::Pd => apply_product_symmetrizer(v),
            ProjectorTag::Pb | ProjectorTag::Pf => {
                let q = apply_pair_projector(v, self.shape.kind())?;
                let p = apply_product_symmetrizer(&q)?;
                Ok(apply_pair_projector(&p, self.shape.kind())?.scaled(C64::new(self.alpha, 0.0)))
            }
            ProjectorTag::Pminus => apply_copy_antisymmetrizer(v),
            ProjectorTag::V | ProjectorTag::Vtilde => {
                // Q (I − α P⁺ − α·2(1−2^{-L}) P⁻) Q
                let kind = self.shape.kind();
                let q = apply_pair_projector(v, kind)?;
                let mut out = q.clone();
                out.axpy(C64::new(-self.alpha, 0.0), &apply_product_symmetrizer(&q)?);
                out.axpy(
                    C64::new(-self.alpha * tail, 0.0),
                    &apply_copy_antisymmetrizer(&q)?,
                );
                apply_pair_projector(&out, kind)
            }
        }
    }
}

/// `(v − W_full v)/2`, the antisymmetrizer under exchange of the two copies.
pub fn apply_copy_antisymmetrizer(v: &Amplitudes) -> Result<Amplitudes> {
    let l = v.sites() / 2;
    let swapped = apply_copy_swap(v, SubsetMask::full(l))?;
    let mut out = v.clone();
    out.axpy(C64::new(-1.0, 0.0), &swapped);
    Ok(out.scaled(C64::new(0.5, 0.0)))
}

/// `Q = P^{sym/asym}_{1..L} ∘ P^{sym/asym}_{1'..L'}` for bosons/fermions,
/// identity for distinguishable particles.
pub fn apply_pair_projector(v: &Amplitudes, kind: ParticleKind) -> Result<Amplitudes> {
    let parity = match kind {
        ParticleKind::Distinguishable => return Ok(v.clone()),
        ParticleKind::Boson => Parity::Symmetric,
        ParticleKind::Fermion => Parity::Antisymmetric,
    };
    let m = v.sites();
    let l = m / 2;
    let first = SubsetMask::new((1u64 << l) - 1, m)?;
    let second = SubsetMask::new(((1u64 << l) - 1) << l, m)?;
    let w = apply_total_symmetrizer(v, first, parity)?;
    apply_total_symmetrizer(&w, second, parity)
}

/// `1 − ⟨ψψ|P⁺_{11'}∘…∘P⁺_{LL'}|ψψ⟩ = 2^{-L} Σ_S (1 − tr ρ_S²)` from
/// subset linear entropies.
pub fn pd_deficit(psi: &Amplitudes) -> Result<f64> {
    let l = psi.sites();
    let mut acc = 0.0;
    for mask in SubsetMask::all(l) {
        acc += linear_entropy_pure(psi, mask)?;
    }
    Ok(acc * 0.5f64.powi(l as i32))
}

/// `⟨ψψ|P_d|ψψ⟩` from subset purities.
pub fn expect_pd(psi: &PureState) -> Result<f64> {
    Ok(1.0 - pd_deficit(psi.amplitudes())?)
}

/// `⟨ψψ|P_d|ψψ⟩` by applying the operator to the two-copy vector.
pub fn expect_pd_two_copy(psi: &PureState) -> Result<f64> {
    let v = psi.two_copy();
    let p = apply_product_symmetrizer(&v)?;
    Ok(v.inner(&p).re)
}

fn require_kind(psi: &PureState, kind: ParticleKind) -> Result<()> {
    if psi.kind() != kind {
        return Err(Error::Kind(format!(
            "expected a {kind} state, got {}",
            psi.kind()
        )));
    }
    // re-validate rather than trusting the declared kind
    PureState::new(psi.shape(), psi.amplitudes().clone()).map(|_| ())
}

/// `⟨ψψ|P_b|ψψ⟩`, equal to `⟨ψψ|P_d|ψψ⟩` on symmetric input.
pub fn expect_pb(psi: &PureState) -> Result<f64> {
    require_kind(psi, ParticleKind::Boson)?;
    expect_pd(psi)
}

/// `⟨ψψ|P_f|ψψ⟩ = α ⟨ψψ|P_d|ψψ⟩` on antisymmetric input.
pub fn expect_pf(psi: &PureState) -> Result<f64> {
    require_kind(psi, ParticleKind::Fermion)?;
    Ok(psi.shape().alpha() * expect_pd(psi)?)
}

/// `tr((ρ⊗ρ) P⁻) = (1 − tr ρ²)/2`.
pub fn expect_pminus(rho: &MixedState) -> f64 {
    (1.0 - rho.purity()) / 2.0
}

/// `⟨ψψ|M|ψψ⟩` through the matrix-free operator.
pub fn expect_two_copy(spec: &ProjectorSpec, psi: &PureState) -> Result<f64> {
    let v = psi.two_copy();
    Ok(v.inner(&spec.apply(&v)?).re)
}

/// `‖(Q − M)|ψψ⟩‖` for a two-copy projector `M ≤ Q`; its square is
/// `1 − ⟨ψψ|M|ψψ⟩` with no cancellation near coherent states.
pub fn two_copy_residual(spec: &ProjectorSpec, psi: &PureState) -> Result<f64> {
    let v = psi.two_copy();
    let p = spec.apply(&v)?;
    Ok(v.distance(&p))
}

fn check_cap(shape: &SystemShape, cap: usize) -> Result<usize> {
    let required = shape.two_copy_dim();
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(required)
}

/// Column-by-column materialization of `f` on the two-copy space.
fn materialize_with<F>(shape: &SystemShape, cap: usize, f: F) -> Result<DMatrix<C64>>
where
    F: Fn(&Amplitudes) -> Result<Amplitudes> + Sync,
{
    let dim = check_cap(shape, cap)?;
    let (n, m) = (shape.modes(), 2 * shape.particles());
    let columns = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut e = vec![ZERO; dim];
            e[j] = ONE;
            f(&Amplitudes::new(n, m, e)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = DMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.as_slice().iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    Ok(out)
}

/// Explicit matrix of `spec` on `⊗^{2L} C^N`, refused above `cap`.
pub fn materialize_dense(spec: &ProjectorSpec, cap: usize) -> Result<DMatrix<C64>> {
    materialize_with(&spec.shape, cap, |v| spec.apply(v))
}

/// Dense `Q` for the shape's kind.
pub fn materialize_pair_projector(shape: &SystemShape, cap: usize) -> Result<DMatrix<C64>> {
    let kind = shape.kind();
    materialize_with(shape, cap, |v| apply_pair_projector(v, kind))
}

/// `tr((ρ⊗ρ) M)` with `ρ⊗ρ` formed explicitly.
pub fn two_copy_expectation_dense(rho: &DensityMatrix, m: &DMatrix<C64>) -> Result<f64> {
    let d = rho.nrows();
    if m.nrows() != d * d || m.ncols() != d * d {
        return Err(Error::Shape(format!(
            "two-copy operator is {}x{}, expected {}x{}",
            m.nrows(),
            m.ncols(),
            d * d,
            d * d
        )));
    }
    let rr = rho.kronecker(rho);
    Ok((rr * m).trace().re)
}

#[derive(Clone, Debug, Serialize)]
pub struct HealthReport {
    pub tag: ProjectorTag,
    pub kind: ParticleKind,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    pub alpha: f64,
    /// `‖M² − M‖_F`
    pub idempotence_defect: f64,
    /// `‖M − M†‖_F`
    pub hermiticity_defect: f64,
    /// `‖M v − v‖` for `v = |ψ₀⟩⊗|ψ₀⟩`, `ψ₀` the highest-weight coherent
    /// state; `None` for `P⁻`, which annihilates it.
    pub highest_weight_defect: Option<f64>,
    /// `‖(1 − Q) M Q‖_F`
    pub subspace_defect: f64,
    pub passed: bool,
}

impl HealthReport {
    pub fn max_defect(&self) -> f64 {
        [
            self.idempotence_defect,
            self.hermiticity_defect,
            self.highest_weight_defect.unwrap_or(0.0),
            self.subspace_defect,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Highest-weight coherent state: `|e₁⟩^{⊗L}` for distinguishable particles
/// and bosons, the Slater determinant on `e₁ … e_L` for fermions.
pub fn highest_weight_state(shape: SystemShape) -> Result<PureState> {
    let (l, n) = (shape.particles(), shape.modes());
    match shape.kind() {
        ParticleKind::Fermion => crate::state::named::slater(shape, &(0..l).collect::<Vec<_>>()),
        kind => {
            let amps = Amplitudes::basis(n, &vec![0; l])?;
            PureState::new(shape.with_kind(kind)?, amps)
        }
    }
}

fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense check that `spec` is an orthogonal projector that fixes the
/// highest-weight pair and preserves the kind's pair space.
pub fn projector_healthcheck(spec: &ProjectorSpec, cap: usize) -> Result<HealthReport> {
    if !spec.tag.is_projector() {
        return Err(Error::Parameter(format!(
            "{:?} is not a projector",
            spec.tag
        )));
    }
    let m = materialize_dense(spec, cap)?;
    let idempotence_defect = frobenius(&(&m * &m - &m));
    let hermiticity_defect = frobenius(&(&m - m.adjoint()));

    let highest_weight_defect = if spec.tag == ProjectorTag::Pminus {
        None
    } else {
        let v = highest_weight_state(spec.shape)?.two_copy();
        Some(v.distance(&spec.apply(&v)?))
    };

    let subspace_defect = if spec.shape.kind() == ParticleKind::Distinguishable {
        0.0
    } else {
        let q = materialize_pair_projector(&spec.shape, cap)?;
        let mq = &m * &q;
        frobenius(&(&mq - &q * &mq))
    };

    let mut report = HealthReport {
        tag: spec.tag,
        kind: spec.shape.kind(),
        particles: spec.shape.particles(),
        modes: spec.shape.modes(),
        alpha: spec.alpha,
        idempotence_defect,
        hermiticity_defect,
        highest_weight_defect,
        subspace_defect,
        passed: false,
    };
    report.passed = report.max_defect() <= HEALTH_TOL;
    Ok(report)
}

/// Every applicable `(tag, L, N)` of the default grid: `Pd` everywhere,
/// `Pb` everywhere, `Pf` where `N ≥ L`.
pub fn default_health_specs() -> Vec<ProjectorSpec> {
    let mut specs = Vec::new();
    for (l, n) in HEALTH_GRID {
        for (kind, tag) in [
            (ParticleKind::Distinguishable, ProjectorTag::Pd),
            (ParticleKind::Boson, ProjectorTag::Pb),
            (ParticleKind::Fermion, ProjectorTag::Pf),
        ] {
            if let Ok(shape) = SystemShape::new(kind, l, n) {
                specs.push(ProjectorSpec::new(tag, shape).expect("tag matches kind"));
            }
        }
    }
    specs
}

/// Runs [`projector_healthcheck`] over `specs` in parallel, results in input order.
pub fn run_healthchecks(specs: &[ProjectorSpec], cap: usize) -> Result<Vec<HealthReport>> {
    specs
        .par_iter()
        .map(|s| projector_healthcheck(s, cap))
        .collect()
}
