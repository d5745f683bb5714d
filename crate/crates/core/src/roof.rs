//! Upper estimates of the convex roof `inf Σ p_j C(ψ_j)` over decompositions
//! of a mixed state.
//!
//! Every size-`m` decomposition of `ρ = Σ_k λ_k |e_k⟩⟨e_k|` is
//! `|φ_j⟩ = Σ_k U_jk √λ_k |e_k⟩` for an `m×r` isometry `U`. Restarts draw `U`
//! from the Haar measure and polish it with pairwise Givens rotations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrence::{concurrence_pure, concurrence_trusted};
use crate::error::{Error, Result};
use crate::io::StateFile;
use crate::rng;
use crate::state::{MixedState, PureState};
use crate::tensor::{
    apply_total_symmetrizer, Amplitudes, DensityMatrix, Parity, ParticleKind, SubsetMask,
    SystemShape, C64,
};

/// Upper limit on the ensemble size `m`.
pub const MAX_ENSEMBLE: usize = 256;

/// Eigenvalues at or below this are outside the support.
pub const RANK_TOL: f64 = 1e-12;

/// Members lighter than this are dropped from reported decompositions.
const WEIGHT_FLOOR: f64 = 1e-20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoofOptions {
    /// `m`; `None` means `2r`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Sweep limit per restart.
    pub max_iters: usize,
    /// Convergence threshold on the per-sweep value change.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 32,
            max_iters: 500,
            tol: 1e-8,
            seed: 0,
        }
    }
}

/// Positive weights summing to 1 and normalized states of one shape.
#[derive(Clone, Debug)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::Validation(
                "decomposition needs matching nonempty weights and states".into(),
            ));
        }
        if weights.iter().any(|w| w.is_nan() || *w <= 0.0) {
            return Err(Error::Validation(
                "decomposition weights must be positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "decomposition weights sum to {total}"
            )));
        }
        let shape = states[0].shape();
        if states.iter().any(|s| s.shape() != shape) {
            return Err(Error::Shape("decomposition members differ in shape".into()));
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_j |ψ_j⟩⟨ψ_j|`.
    pub fn density(&self) -> DensityMatrix {
        let d = self.states[0].shape().hilbert_dim();
        self.weights
            .iter()
            .zip(&self.states)
            .fold(DensityMatrix::zeros(d, d), |acc, (w, s)| {
                acc + s.density().scale(*w)
            })
    }

    /// Frobenius distance to `ρ`.
    pub fn reconstruction_error(&self, rho: &MixedState) -> f64 {
        (self.density() - rho.matrix()).norm()
    }

    /// `Σ p_j C(ψ_j)` with each member validated.
    pub fn average_concurrence(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (w, s) in self.weights.iter().zip(&self.states) {
            acc += w * concurrence_pure(s)?.value;
        }
        Ok(acc)
    }
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            weights: &'a [f64],
            states: Vec<StateFile>,
        }
        Repr {
            weights: &self.weights,
            states: self.states.iter().map(StateFile::from_state).collect(),
        }
        .serialize(serializer)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoofEstimate {
    /// Upper bound on the convex roof; not claimed optimal.
    pub value: f64,
    pub decomposition: Decomposition,
    pub restarts_used: usize,
    /// Whether the winning restart met the tolerance within `max_iters`.
    pub converged: bool,
}

struct Restart {
    value: f64,
    members: Vec<Amplitudes>,
    converged: bool,
}

/// Best decomposition found over `opts.restarts` seeded restarts.
///
/// Restart `k` draws from stream `k` of `opts.seed`, so the value never
/// increases when `restarts` grows.
pub fn convex_roof_upper(rho: &MixedState, opts: &RoofOptions) -> Result<RoofEstimate> {
    if opts.restarts == 0 {
        return Err(Error::Parameter("restarts must be at least 1".into()));
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::Parameter(format!(
            "tolerance {} must be positive",
            opts.tol
        )));
    }
    let shape = rho.shape();
    let ensemble = weighted_eigenvectors(rho)?;
    let r = ensemble.len();
    let m = match opts.ensemble_size {
        Some(m) if m < r => {
            return Err(Error::Parameter(format!(
                "ensemble size {m} is below rank {r}"
            )))
        }
        Some(m) if m > MAX_ENSEMBLE => {
            return Err(Error::Parameter(format!(
                "ensemble size {m} exceeds {MAX_ENSEMBLE}"
            )))
        }
        Some(m) => m,
        None => (2 * r).min(MAX_ENSEMBLE).max(r),
    };

    let runs = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng::split(opts.seed, k as u64);
            let u = rng::haar_unitary(m, &mut rng);
            let members = (0..m)
                .map(|j| {
                    let mut phi = Amplitudes::zeros(shape.modes(), shape.particles())?;
                    for (c, w) in ensemble.iter().enumerate() {
                        phi.axpy(u[(j, c)], w);
                    }
                    Ok(phi)
                })
                .collect::<Result<Vec<_>>>()?;
            polish(shape, members, opts)
        })
        .collect::<Result<Vec<_>>>()?;

    // lowest value, ties to the lowest restart index
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    let decomposition = finalize(shape, &best.members)?;
    let value = decomposition.average_concurrence()?;
    Ok(RoofEstimate {
        value,
        decomposition,
        restarts_used: opts.restarts,
        converged: best.converged,
    })
}

/// `√λ_k |e_k⟩` for the support of `ρ`, projected onto the kind's subspace.
fn weighted_eigenvectors(rho: &MixedState) -> Result<Vec<Amplitudes>> {
    let shape = rho.shape();
    let (vals, vecs) = rho.eigen();
    let parity = match shape.kind() {
        ParticleKind::Distinguishable => None,
        ParticleKind::Boson => Some(Parity::Symmetric),
        ParticleKind::Fermion => Some(Parity::Antisymmetric),
    };
    vals.iter()
        .enumerate()
        .take_while(|(_, &l)| l > RANK_TOL)
        .map(|(k, &l)| {
            let col: Vec<C64> = vecs.column(k).iter().map(|z| z * l.sqrt()).collect();
            let v = Amplitudes::new(shape.modes(), shape.particles(), col)?;
            match parity {
                // eigenvectors of tiny eigenvalues can leak out of the subspace
                Some(p) => apply_total_symmetrizer(&v, SubsetMask::full(shape.particles()), p),
                None => Ok(v),
            }
        })
        .collect()
}

/// `‖φ‖² C(φ/‖φ‖)`.
fn contribution(shape: SystemShape, phi: &Amplitudes) -> Result<f64> {
    let p = phi.norm_sqr();
    if p < WEIGHT_FLOOR {
        return Ok(0.0);
    }
    let psi = PureState::new_unchecked(shape, phi.clone().scaled(C64::new(1.0 / p.sqrt(), 0.0)));
    Ok(p * concurrence_trusted(&psi)?)
}

/// `(cos θ a − e^{-iχ} sin θ b, e^{iχ} sin θ a + cos θ b)`.
fn rotate(a: &Amplitudes, b: &Amplitudes, theta: f64, chi: f64) -> (Amplitudes, Amplitudes) {
    let (s, c) = theta.sin_cos();
    let ph = C64::from_polar(1.0, chi);
    let mut x = a.clone().scaled(C64::new(c, 0.0));
    x.axpy(-ph.conj() * s, b);
    let mut y = b.clone().scaled(C64::new(c, 0.0));
    y.axpy(ph * s, a);
    (x, y)
}

fn polish(shape: SystemShape, mut members: Vec<Amplitudes>, opts: &RoofOptions) -> Result<Restart> {
    let m = members.len();
    let mut costs = members
        .iter()
        .map(|phi| contribution(shape, phi))
        .collect::<Result<Vec<_>>>()?;
    let mut total: f64 = costs.iter().sum();
    let mut step = std::f64::consts::FRAC_PI_4;
    let mut converged = m < 2;
    let half_pi = std::f64::consts::FRAC_PI_2;
    for _ in 0..opts.max_iters {
        if converged {
            break;
        }
        let before = total;
        let mut improved = false;
        for j in 0..m {
            for k in j + 1..m {
                let mut best: Option<(f64, Amplitudes, Amplitudes, f64, f64)> = None;
                for (theta, chi) in [(step, 0.0), (-step, 0.0), (step, half_pi), (-step, half_pi)] {
                    let (x, y) = rotate(&members[j], &members[k], theta, chi);
                    let (cx, cy) = (contribution(shape, &x)?, contribution(shape, &y)?);
                    let gain = costs[j] + costs[k] - cx - cy;
                    if gain > 0.0 && best.as_ref().is_none_or(|b| gain > b.0) {
                        best = Some((gain, x, y, cx, cy));
                    }
                }
                if let Some((_, x, y, cx, cy)) = best {
                    members[j] = x;
                    members[k] = y;
                    costs[j] = cx;
                    costs[k] = cy;
                    improved = true;
                }
            }
        }
        total = costs.iter().sum();
        if improved {
            converged = before - total < opts.tol;
        } else {
            step *= 0.5;
            converged = step < opts.tol;
        }
    }
    Ok(Restart {
        value: total,
        members,
        converged,
    })
}

fn finalize(shape: SystemShape, members: &[Amplitudes]) -> Result<Decomposition> {
    let kept: Vec<(f64, &Amplitudes)> = members
        .iter()
        .map(|phi| (phi.norm_sqr(), phi))
        .filter(|(p, _)| *p >= WEIGHT_FLOOR)
        .collect();
    let total: f64 = kept.iter().map(|(p, _)| p).sum();
    let mut weights = Vec::with_capacity(kept.len());
    let mut states = Vec::with_capacity(kept.len());
    for (p, phi) in kept {
        weights.push(p / total);
        states.push(PureState::new(shape, phi.clone().normalized()?)?);
    }
    Decomposition::new(weights, states)
}
