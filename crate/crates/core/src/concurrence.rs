//! Generalized concurrences of pure states, coherence tests, single-site
//! bipartition values and the invariant variance.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projector::{
    materialize_dense, pd_deficit, two_copy_residual, ProjectorSpec, ProjectorTag,
    DEFAULT_DENSE_CAP,
};
use crate::state::PureState;
use crate::tensor::{
    apply_local_operator, linear_entropy_pure, Amplitudes, ParticleKind, SubsetMask, C64,
};

/// Default coherence tolerance on `C` (not `C²`).
pub const COHERENCE_TOL: f64 = 1e-7;

/// Negative radicands down to this are round-off and clip to zero.
pub const RADICAND_CLIP: f64 = -1e-10;

/// Fermionic two-copy vectors up to this dimension use the residual path
/// by default.
const TWO_COPY_BUDGET: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Subset purities of the single copy.
    Purity,
    /// Matrix-free operator on `|ψ⟩|ψ⟩`.
    TwoCopy,
    /// Explicit operator matrix, subject to the dense cap.
    Dense,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Purity => "purity",
            Method::TwoCopy => "two-copy",
            Method::Dense => "dense",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "purity" => Ok(Method::Purity),
            "two-copy" => Ok(Method::TwoCopy),
            "dense" => Ok(Method::Dense),
            other => Err(Error::Validation(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConcurrenceResult {
    pub value: f64,
    pub kind: ParticleKind,
    /// `⟨ψψ|P|ψψ⟩` for the kind's projector (`α`-scaled for fermions).
    pub expectation: f64,
    pub method: Method,
}

/// `C_d`, `C_b` or `C_f` depending on the state's kind.
///
/// Distinguishable and bosonic states use the purity path. Fermionic states
/// use the two-copy residual `‖(Q − P_f)|ψψ⟩‖`, which stays exact near
/// Slater determinants where `1 − α⟨P_d⟩` cancels to round-off.
pub fn concurrence_pure(psi: &PureState) -> Result<ConcurrenceResult> {
    concurrence_with(psi, default_method(psi), DEFAULT_DENSE_CAP)
}

/// Concurrence along an explicit evaluation path.
pub fn concurrence_with(
    psi: &PureState,
    method: Method,
    dense_cap: usize,
) -> Result<ConcurrenceResult> {
    // the declared kind is re-checked, not trusted
    let psi = PureState::new(psi.shape(), psi.amplitudes().clone())?;
    evaluate(&psi, method, dense_cap)
}

/// Default-path concurrence of a state already known to respect its kind.
pub(crate) fn concurrence_trusted(psi: &PureState) -> Result<f64> {
    Ok(evaluate(psi, default_method(psi), DEFAULT_DENSE_CAP)?.value)
}

fn default_method(psi: &PureState) -> Method {
    match psi.kind() {
        ParticleKind::Fermion if psi.shape().two_copy_dim() <= TWO_COPY_BUDGET => Method::TwoCopy,
        _ => Method::Purity,
    }
}

fn evaluate(psi: &PureState, method: Method, dense_cap: usize) -> Result<ConcurrenceResult> {
    let kind = psi.kind();
    let alpha = if kind == ParticleKind::Fermion {
        psi.shape().alpha()
    } else {
        1.0
    };
    match method {
        Method::Purity => {
            let deficit = pd_deficit(psi.amplitudes())?;
            // 1 − α(1 − D) = αD − (α − 1)
            let radicand = alpha * deficit - (alpha - 1.0);
            finish(radicand, kind, alpha * (1.0 - deficit), method)
        }
        Method::TwoCopy => {
            let spec = residual_spec(psi)?;
            let value = two_copy_residual(&spec, psi)?;
            Ok(ConcurrenceResult {
                value,
                kind,
                expectation: 1.0 - value * value,
                method,
            })
        }
        Method::Dense => {
            let spec = residual_spec(psi)?;
            let m = materialize_dense(&spec, dense_cap)?;
            let v = nalgebra::DVector::from_column_slice(psi.two_copy().as_slice());
            let expectation = (v.adjoint() * m * &v)[(0, 0)].re;
            finish(1.0 - expectation, kind, expectation, method)
        }
    }
}

/// Projector whose residual on `|ψψ⟩` is the concurrence: `P_d` for
/// distinguishable particles and bosons, `P_f` for fermions.
fn residual_spec(psi: &PureState) -> Result<ProjectorSpec> {
    match psi.kind() {
        ParticleKind::Fermion => ProjectorSpec::new(ProjectorTag::Pf, psi.shape()),
        _ => ProjectorSpec::new(ProjectorTag::Pd, psi.shape()),
    }
}

fn finish(
    radicand: f64,
    kind: ParticleKind,
    expectation: f64,
    method: Method,
) -> Result<ConcurrenceResult> {
    if radicand < RADICAND_CLIP {
        return Err(Error::Integrity(format!(
            "concurrence radicand {radicand:.3e} is below the round-off window"
        )));
    }
    Ok(ConcurrenceResult {
        value: radicand.max(0.0).sqrt(),
        kind,
        expectation,
        method,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceVerdict {
    pub coherent: bool,
    pub concurrence: f64,
    pub tolerance: f64,
    pub bipartition_values: Vec<f64>,
}

/// Coherent iff the concurrence is at most `tol`.
pub fn is_coherent(psi: &PureState, tol: f64) -> Result<CoherenceVerdict> {
    let c = concurrence_pure(psi)?;
    let bipartition_values = (0..psi.shape().particles())
        .map(|i| bipartition_value(psi, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceVerdict {
        coherent: c.value <= tol,
        concurrence: c.value,
        tolerance: tol,
        bipartition_values,
    })
}

/// `1 − ⟨ψψ|P⁺_{ii'}|ψψ⟩ = (1 − tr ρ_i²)/2`; zero iff site `i` factors out.
pub fn bipartition_value(psi: &PureState, site: usize) -> Result<f64> {
    let l = psi.shape().particles();
    if site >= l {
        return Err(Error::Shape(format!("site {site} out of range 0..{l}")));
    }
    let keep = SubsetMask::from_sites(&[site], l)?;
    Ok(linear_entropy_pure(psi.amplitudes(), keep)? / 2.0)
}

/// Generalized Gell-Mann matrices, normalized `tr(X_a X_b) = 2 δ_ab`.
pub fn gell_mann(n: usize) -> Vec<DMatrix<C64>> {
    let mut out = Vec::with_capacity(n * n - 1);
    let re = |x: f64| C64::new(x, 0.0);
    for j in 0..n {
        for k in j + 1..n {
            let mut s = DMatrix::zeros(n, n);
            s[(j, k)] = re(1.0);
            s[(k, j)] = re(1.0);
            out.push(s);
            let mut a = DMatrix::zeros(n, n);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            out.push(a);
        }
    }
    for l in 1..n {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = DMatrix::zeros(n, n);
        for j in 0..l {
            d[(j, j)] = re(scale);
        }
        d[(l, l)] = re(-(l as f64) * scale);
        out.push(d);
    }
    out
}

/// `Σ_a (⟨X_a²⟩ − ⟨X_a⟩²)` over the Gell-Mann basis.
pub fn invariant_variance(psi: &PureState) -> Result<f64> {
    invariant_variance_with_basis(psi, &gell_mann(psi.shape().modes()))
}

/// Invariant variance over a caller-supplied Hermitian generator basis.
/// Generators act site by site for distinguishable particles and as
/// `Σ_i X^{(i)}` for bosons and fermions.
pub fn invariant_variance_with_basis(psi: &PureState, basis: &[DMatrix<C64>]) -> Result<f64> {
    let v = psi.amplitudes();
    let l = psi.shape().particles();
    let moment = |w: &Amplitudes| w.norm_sqr() - v.inner(w).re.powi(2);
    let mut total = 0.0;
    for x in basis {
        match psi.kind() {
            ParticleKind::Distinguishable => {
                for site in 0..l {
                    total += moment(&apply_local_operator(v, site, x)?);
                }
            }
            _ => {
                let mut w = apply_local_operator(v, 0, x)?;
                for site in 1..l {
                    w.add_assign(&apply_local_operator(v, site, x)?);
                }
                total += moment(&w);
            }
        }
    }
    Ok(total)
}
