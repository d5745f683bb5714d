//! Two-copy witnesses that bound the concurrence of mixed states from below.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::projector::{
    materialize_dense, two_copy_expectation_dense, ProjectorSpec, ProjectorTag,
};
use crate::state::MixedState;
use crate::tensor::{subset_purity, ParticleKind, SubsetMask, C64};

/// How `lower_bound` was derived from `witness`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundForm {
    /// `√max(0, w)`.
    SquareRoot,
    /// Positive root of `C(1 + 2√(α−1) C) = w`.
    FermionicQuadratic,
}

impl std::fmt::Display for BoundForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundForm::SquareRoot => "square-root",
            BoundForm::FermionicQuadratic => "fermionic-quadratic",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundReport {
    pub kind: ParticleKind,
    /// `tr(ρ⊗ρ W)`.
    pub witness: f64,
    pub lower_bound: f64,
    /// `witness > 0`.
    pub detected: bool,
    pub form: BoundForm,
}

/// `tr(ρ⊗ρ P_d) = 2^{-L} Σ_S tr ρ_S²`, the empty subset contributing 1.
pub fn product_symmetrizer_expectation(rho: &MixedState) -> Result<f64> {
    let shape = rho.shape();
    let l = shape.particles();
    let mut acc = 0.0;
    for mask in SubsetMask::all(l) {
        acc += if mask.is_empty() {
            1.0
        } else {
            subset_purity(rho.matrix(), shape.modes(), mask)?
        };
    }
    Ok(acc * 0.5f64.powi(l as i32))
}

fn tail(l: usize) -> f64 {
    1.0 - 0.5f64.powi(l as i32)
}

/// `tr(ρ⊗ρ V)` with `V = I − P_d − 2(1−2^{-L}) P⁻`, kind-agnostic.
fn distinguishable_witness(rho: &MixedState) -> Result<f64> {
    let l = rho.shape().particles();
    let pd = product_symmetrizer_expectation(rho)?;
    Ok(1.0 - pd - tail(l) * (1.0 - rho.purity()))
}

fn revalidate(rho: &MixedState) -> Result<()> {
    MixedState::new(rho.shape(), rho.matrix().clone()).map(|_| ())
}

/// Lower bound on `C_d` for distinguishable particles.
pub fn mb_bound(rho: &MixedState) -> Result<BoundReport> {
    if rho.kind() != ParticleKind::Distinguishable {
        return Err(Error::Kind(format!(
            "mb_bound expects distinguishable particles, got {}",
            rho.kind()
        )));
    }
    square_root_report(rho.kind(), distinguishable_witness(rho)?)
}

/// Lower bound on `C_b`: the distinguishable witness on symmetric support.
pub fn mb_bound_bosonic(rho: &MixedState) -> Result<BoundReport> {
    if rho.kind() != ParticleKind::Boson {
        return Err(Error::Kind(format!(
            "mb_bound_bosonic expects bosons, got {}",
            rho.kind()
        )));
    }
    revalidate(rho)?;
    square_root_report(rho.kind(), distinguishable_witness(rho)?)
}

fn square_root_report(kind: ParticleKind, witness: f64) -> Result<BoundReport> {
    Ok(BoundReport {
        kind,
        witness,
        lower_bound: witness.max(0.0).sqrt(),
        detected: witness > 0.0,
        form: BoundForm::SquareRoot,
    })
}

/// `tr(ρ⊗ρ Ṽ)` with `Ṽ = (I − P_f) − 2α(1−2^{-L}) P⁻` on antisymmetric support.
pub fn fermionic_detection(rho: &MixedState) -> Result<BoundReport> {
    if rho.kind() != ParticleKind::Fermion {
        return Err(Error::Kind(format!(
            "fermionic_detection expects fermions, got {}",
            rho.kind()
        )));
    }
    revalidate(rho)?;
    let shape = rho.shape();
    let alpha = shape.alpha();
    let pd = product_symmetrizer_expectation(rho)?;
    let witness = 1.0 - alpha * pd - alpha * tail(shape.particles()) * (1.0 - rho.purity());
    Ok(BoundReport {
        kind: ParticleKind::Fermion,
        witness,
        lower_bound: fermionic_root(witness, alpha),
        detected: witness > 0.0,
        form: BoundForm::FermionicQuadratic,
    })
}

/// Nonnegative `C` with `C(1 + 2√(α−1) C) = w`, zero for `w ≤ 0`.
pub fn fermionic_root(witness: f64, alpha: f64) -> f64 {
    if witness <= 0.0 {
        return 0.0;
    }
    let a = 2.0 * (alpha - 1.0).max(0.0).sqrt();
    if a == 0.0 {
        return witness;
    }
    // 2w / (1 + √(1 + 4aw)) avoids cancellation for small w
    2.0 * witness / (1.0 + (1.0 + 4.0 * a * witness).sqrt())
}

/// Kind-appropriate witness.
pub fn witness_bound(rho: &MixedState) -> Result<BoundReport> {
    match rho.kind() {
        ParticleKind::Distinguishable => mb_bound(rho),
        ParticleKind::Boson => mb_bound_bosonic(rho),
        ParticleKind::Fermion => fermionic_detection(rho),
    }
}

/// Witness by forming `ρ⊗ρ` and the witness operator explicitly.
pub fn witness_dense(rho: &MixedState, dense_cap: usize) -> Result<f64> {
    let tag = match rho.kind() {
        ParticleKind::Fermion => ProjectorTag::Vtilde,
        _ => ProjectorTag::V,
    };
    let m = materialize_dense(&ProjectorSpec::new(tag, rho.shape())?, dense_cap)?;
    two_copy_expectation_dense(rho.matrix(), &m)
}

/// Lower bound on `C_f` from any lower bound `f` on `C_d`.
pub fn fermionic_lower_from_distinguishable(f: f64, particles: usize) -> f64 {
    let alpha = crate::tensor::alpha(particles);
    (alpha.sqrt() * f - (alpha - 1.0).sqrt()).max(0.0)
}

/// Half the Wootters concurrence of a two-qubit state.
pub fn wootters_oracle(rho: &MixedState) -> Result<f64> {
    let shape = rho.shape();
    if shape.kind() != ParticleKind::Distinguishable || shape.particles() != 2 || shape.modes() != 2
    {
        return Err(Error::Shape(
            "the Wootters oracle needs two distinguishable qubits".into(),
        ));
    }
    let r = rho.matrix();
    let flip = DMatrix::from_fn(4, 4, |i, j| {
        // σ_y ⊗ σ_y has entries −1, 1, 1, −1 on the anti-diagonal
        if i + j == 3 {
            C64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let tilde = &flip * r.conjugate() * &flip;
    let eig = r.clone().symmetric_eigen();
    let sqrt_diag =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|x| C64::new(x.max(0.0).sqrt(), 0.0)));
    let sqrt_rho = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.adjoint();
    let m = &sqrt_rho * tilde * &sqrt_rho;
    let m = (&m + m.adjoint()).scale(0.5);
    let mut mu: Vec<f64> = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::concurrence_pure;
    use crate::projector::DEFAULT_DENSE_CAP;
    use crate::state::{named, PureState};
    use crate::tensor::SystemShape;

    fn shape(kind: ParticleKind, l: usize, n: usize) -> SystemShape {
        SystemShape::new(kind, l, n).unwrap()
    }

    #[test]
    fn distinguishable_examples() {
        let bell = mb_bound(&MixedState::from_pure(&named::bell())).unwrap();
        assert!((bell.witness - 0.25).abs() < 1e-12);
        let mixed =
            MixedState::maximally_mixed(shape(ParticleKind::Distinguishable, 2, 2)).unwrap();
        let r = mb_bound(&mixed).unwrap();
        assert!((r.witness + 0.125).abs() < 1e-12 && !r.detected && r.lower_bound == 0.0);
        let w = mb_bound(&named::werner(0.8).unwrap()).unwrap();
        assert!((w.witness - 0.115).abs() < 1e-12);
        assert!((w.lower_bound - 0.33912).abs() < 1e-5);
    }

    #[test]
    fn werner_closed_form_and_dense() {
        for p in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
            let rho = named::werner(p).unwrap();
            let w = mb_bound(&rho).unwrap().witness;
            assert!((w - (3.0 * p * p - 1.0) / 8.0).abs() < 1e-12);
            assert!((w - witness_dense(&rho, DEFAULT_DENSE_CAP).unwrap()).abs() < 1e-10);
            let oracle = wootters_oracle(&rho).unwrap();
            assert!((oracle - ((3.0 * p - 1.0) / 4.0).max(0.0)).abs() < 1e-10);
            assert!(w.max(0.0).sqrt() <= oracle + 1e-12);
        }
    }

    #[test]
    fn wootters_examples() {
        let bell = wootters_oracle(&MixedState::from_pure(&named::bell())).unwrap();
        assert!((bell - 0.5).abs() < 1e-10);
        let i4 = MixedState::maximally_mixed(shape(ParticleKind::Distinguishable, 2, 2)).unwrap();
        assert!(wootters_oracle(&i4).unwrap().abs() < 1e-12);
        // pure states: Wootters/2 equals the pure concurrence
        for seed in 0..10 {
            let psi = PureState::random(shape(ParticleKind::Distinguishable, 2, 2), seed).unwrap();
            let c = concurrence_pure(&psi).unwrap().value;
            let o = wootters_oracle(&MixedState::from_pure(&psi)).unwrap();
            assert!((c - o).abs() < 1e-7, "{c} {o}");
        }
        let ghz = MixedState::from_pure(&named::ghz(3));
        assert!(matches!(wootters_oracle(&ghz), Err(Error::Shape(_))));
    }

    #[test]
    fn bosonic_examples() {
        let s = shape(ParticleKind::Boson, 3, 2);
        let phi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let cond = PureState::condensate(3, &phi).unwrap();
        let r = mb_bound_bosonic(&MixedState::from_pure(&cond)).unwrap();
        assert!(r.witness.abs() < 1e-12);
        let w = named::w_state(3);
        let r = mb_bound_bosonic(&MixedState::from_pure(&w)).unwrap();
        assert!((r.witness - 1.0 / 3.0).abs() < 1e-12);
        let e1 = PureState::condensate(3, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let mix = MixedState::from_ensemble(&[0.5, 0.5], &[e1, w]).unwrap();
        assert_eq!(mix.shape(), s);
        let a = mb_bound_bosonic(&mix).unwrap().witness;
        let b = witness_dense(&mix, DEFAULT_DENSE_CAP).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn fermionic_examples() {
        let s = shape(ParticleKind::Fermion, 2, 4);
        let slater = MixedState::from_pure(&named::slater(s, &[0, 1]).unwrap());
        assert!(fermionic_detection(&slater).unwrap().witness.abs() < 1e-12);
        let pair = named::fermion_pair_superposition();
        let r = fermionic_detection(&MixedState::from_pure(&pair)).unwrap();
        assert!((r.witness - 1.0 / 6.0).abs() < 1e-12 && r.detected);
        assert!(
            (r.witness - witness_dense(&MixedState::from_pure(&pair), DEFAULT_DENSE_CAP).unwrap())
                .abs()
                < 1e-10
        );
        // the implied bound solves the quadratic
        let a = 2.0 * (s.alpha() - 1.0).sqrt();
        assert!((r.lower_bound * (1.0 + a * r.lower_bound) - r.witness).abs() < 1e-14);
        let mix = MixedState::from_ensemble(
            &[0.5, 0.5],
            &[
                named::slater(s, &[0, 1]).unwrap(),
                named::slater(s, &[2, 3]).unwrap(),
            ],
        )
        .unwrap();
        let r = fermionic_detection(&mix).unwrap();
        assert!(!r.detected && (r.witness + 1.0 / 6.0).abs() < 1e-12);
        assert!((r.witness - witness_dense(&mix, DEFAULT_DENSE_CAP).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let bell = MixedState::from_pure(&named::bell());
        assert!(matches!(fermionic_detection(&bell), Err(Error::Kind(_))));
        assert!(matches!(mb_bound_bosonic(&bell), Err(Error::Kind(_))));
        let w = MixedState::from_pure(&named::w_state(3));
        assert!(matches!(mb_bound(&w), Err(Error::Kind(_))));
    }

    #[test]
    fn fermionic_lower_examples() {
        assert_eq!(fermionic_lower_from_distinguishable(0.0, 2), 0.0);
        let v = fermionic_lower_from_distinguishable(3f64.sqrt() / 2.0, 2);
        assert!((v - (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-12);
        let a = crate::tensor::alpha(3);
        assert!(fermionic_lower_from_distinguishable(((a - 1.0) / a).sqrt(), 3).abs() < 1e-15);
    }

    #[test]
    fn root_edge_cases() {
        assert_eq!(fermionic_root(-1.0, 4.0 / 3.0), 0.0);
        assert_eq!(fermionic_root(0.3, 1.0), 0.3);
    }

    #[test]
    fn pure_collapse_random() {
        for (kind, l, n) in [
            (ParticleKind::Distinguishable, 3, 2),
            (ParticleKind::Boson, 2, 3),
            (ParticleKind::Fermion, 2, 4),
            (ParticleKind::Fermion, 3, 4),
        ] {
            for seed in 0..5 {
                let psi = PureState::random(shape(kind, l, n), seed).unwrap();
                let c = concurrence_pure(&psi).unwrap().value;
                let w = witness_bound(&MixedState::from_pure(&psi)).unwrap().witness;
                assert!((w - c * c).abs() < 1e-10, "{kind} {w} {}", c * c);
            }
        }
    }
}
