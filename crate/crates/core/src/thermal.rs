//! Gibbs thermal state of the coupled pair and its X-state scalar elements.
//!
//! The state is always built from the spectral sum
//! rho = sum_i p_i |psi_i><psi_i| with Boltzmann weights
//! p_i = exp(-(E_i - E_min)/T) / sum_j exp(-(E_j - E_min)/T); the ground
//! energy is subtracted before exponentiating so the weights stay finite at
//! any positive temperature. The construction is exactly trace-one and
//! positive semidefinite, and it reproduces the X sparsity pattern
//!
//! ```text
//!     [ x  0  0  eta ]
//!     [ 0  z  d  0   ]      (d = delta)
//!     [ 0  d  z  0   ]
//!     [ eta 0 0  y   ]
//! ```
//!
//! with exact zeros off the pattern.

use crate::error::{Error, Result};
use crate::linalg::{mat_add4, mat_mul4, mat_scale4, outer4, trace4, Mat4, ZERO4};
use crate::model::{eigensystem, ModelParams};

/// 4x4 real symmetric density matrix (Hermitian, unit trace, PSD).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub matrix: Mat4,
}

impl DensityMatrix {
    pub fn trace(&self) -> f64 {
        trace4(&self.matrix)
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        trace4(&mat_mul4(&self.matrix, &self.matrix))
    }
}

/// The five scalars of the X-state together with the inverse temperature and
/// the partition function value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateElements {
    pub x: f64,
    pub z: f64,
    pub delta: f64,
    pub eta: f64,
    pub y: f64,
    pub beta: f64,
    pub partition: f64,
}

pub(crate) fn check_temperature(temp: f64) -> Result<()> {
    if !temp.is_finite() || temp <= 0.0 {
        return Err(Error::InvalidTemperature { value: temp });
    }
    Ok(())
}

/// Ground-subtracted Boltzmann weights over the model eigenbasis, in the
/// eigensystem ordering (-gamma, +gamma, -Delta, +Delta).
pub(crate) fn boltzmann_weights(params: &ModelParams, temp: f64) -> Result<[f64; 4]> {
    check_temperature(temp)?;
    let es = eigensystem(params);
    let ground = es.energies[2]; // -Delta is always the minimum
    let mut w = [0.0; 4];
    let mut norm = 0.0;
    for i in 0..4 {
        w[i] = libm::exp(-(es.energies[i] - ground) / temp);
        norm += w[i];
    }
    for wi in &mut w {
        *wi /= norm;
    }
    Ok(w)
}

/// Z = 2 cosh(gamma/T) + 2 cosh(Delta/T); always >= 4.
pub fn partition_function(params: &ModelParams, temp: f64) -> Result<f64> {
    check_temperature(temp)?;
    let beta = 1.0 / temp;
    Ok(2.0 * libm::cosh(beta * params.gamma) + 2.0 * libm::cosh(beta * params.delta()))
}

/// The Gibbs state at temperature `temp`, built from the spectral sum.
pub fn gibbs_state(params: &ModelParams, temp: f64) -> Result<DensityMatrix> {
    check_temperature(temp)?;
    if params.is_degenerate() {
        let mut m = ZERO4;
        for i in 0..4 {
            m[i][i] = 0.25;
        }
        return Ok(DensityMatrix { matrix: m });
    }
    let es = eigensystem(params);
    let p = boltzmann_weights(params, temp)?;
    let mut m = ZERO4;
    for i in 0..4 {
        m = mat_add4(&m, &mat_scale4(&outer4(&es.states[i]), p[i]));
    }
    Ok(DensityMatrix { matrix: m })
}

/// X-state scalars read off the Gibbs state: x = rho_11, z = rho_22,
/// delta = rho_23, eta = rho_14, y = rho_44 (1-based positions).
pub fn x_state_elements(params: &ModelParams, temp: f64) -> Result<XStateElements> {
    let rho = gibbs_state(params, temp)?;
    let m = &rho.matrix;
    Ok(XStateElements {
        x: m[0][0],
        z: m[1][1],
        delta: m[1][2],
        eta: m[0][3],
        y: m[3][3],
        beta: 1.0 / temp,
        partition: partition_function(params, temp)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        commutator4, expm4, identity4, jacobi_eigh, mat_scale4, max_abs4, max_abs_diff4,
    };
    use crate::model::build_hamiltonian;

    fn p(omega: f64, gamma: f64) -> ModelParams {
        ModelParams::new(omega, gamma).unwrap()
    }

    /// Independent construction: normalized expm(-(H - E_min I)/T), with the
    /// shift taken from a dense eigensolve so overflow cannot occur.
    fn gibbs_by_expm(params: &ModelParams, temp: f64) -> Mat4 {
        let h = build_hamiltonian(params).matrix;
        let (vals, _) = jacobi_eigh(&h);
        let mut shifted = h;
        for i in 0..4 {
            shifted[i][i] -= vals[0];
        }
        let e = expm4(&mat_scale4(&shifted, -1.0 / temp));
        mat_scale4(&e, 1.0 / trace4(&e))
    }

    #[test]
    fn partition_function_infinite_temperature_limit() {
        let z = partition_function(&p(1.0, 0.0), 1e8).unwrap();
        assert!((z - 4.0).abs() < 1e-8);
    }

    #[test]
    fn partition_function_decoupled_point() {
        // 2 + 2 cosh(1)
        let z = partition_function(&p(1.0, 0.0), 1.0).unwrap();
        assert!((z - 5.086_161_269_630_487).abs() < 1e-12);
        // cross-check against the trace of exp(-H/T) through the eigenvalues
        let (vals, _) = jacobi_eigh(&build_hamiltonian(&p(1.0, 0.0)).matrix);
        let direct: f64 = vals.iter().map(|e| (-e).exp()).sum();
        assert!((z - direct).abs() < 1e-12);
    }

    #[test]
    fn partition_function_generic_point_matches_trace_formula() {
        let params = p(1.0, 1.5);
        let temp = 0.5;
        let z = partition_function(&params, temp).unwrap();
        let (vals, _) = jacobi_eigh(&build_hamiltonian(&params).matrix);
        let direct: f64 = vals.iter().map(|e| (-e / temp).exp()).sum();
        assert!((z - direct).abs() / direct < 1e-14);
        assert!(z >= 4.0);
    }

    #[test]
    fn partition_function_rejects_nonpositive_temperature() {
        assert!(matches!(
            partition_function(&p(1.0, 0.0), 0.0),
            Err(Error::InvalidTemperature { .. })
        ));
        assert!(partition_function(&p(1.0, 0.0), -1.0).is_err());
        assert!(partition_function(&p(1.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn gibbs_state_infinite_temperature_is_maximally_mixed() {
        let rho = gibbs_state(&p(1.0, 1.5), 1e8).unwrap();
        assert!(max_abs_diff4(&rho.matrix, &mat_scale4(&identity4(), 0.25)) < 1e-7);
    }

    #[test]
    fn gibbs_state_spin_flip_symmetry_at_zero_omega() {
        let rho = gibbs_state(&p(0.0, 2.0), 1.0).unwrap();
        assert!((rho.matrix[0][0] - rho.matrix[3][3]).abs() < 1e-15);
    }

    #[test]
    fn gibbs_state_matches_matrix_exponential_oracle() {
        let rho = gibbs_state(&p(1.0, 1.5), 0.5).unwrap();
        let oracle = gibbs_by_expm(&p(1.0, 1.5), 0.5);
        assert!(max_abs_diff4(&rho.matrix, &oracle) < 1e-13);
    }

    #[test]
    fn gibbs_state_satisfies_density_matrix_invariants() {
        for &(o, g, t) in &[
            (1.0, 1.5, 0.5),
            (0.0, 2.0, 1.0),
            (3.0, 0.0, 0.05),
            (0.7, 0.7, 5.0),
        ] {
            let rho = gibbs_state(&p(o, g), t).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-12);
            assert!(rho.purity() <= 1.0 + 1e-12);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(rho.matrix[i][j], rho.matrix[j][i]);
                }
            }
            let (vals, _) = jacobi_eigh(&rho.matrix);
            assert!(vals[0] >= -1e-12);
            // commutes with H
            let h = build_hamiltonian(&p(o, g)).matrix;
            assert!(max_abs4(&commutator4(&rho.matrix, &h)) < 1e-12);
            // X pattern holds with exact zeros
            for &(i, j) in &[(0, 1), (0, 2), (1, 3), (2, 3)] {
                assert_eq!(rho.matrix[i][j], 0.0);
                assert_eq!(rho.matrix[j][i], 0.0);
            }
        }
    }

    #[test]
    fn gibbs_state_degenerate_params_return_maximally_mixed() {
        let rho = gibbs_state(&p(0.0, 0.0), 1.0).unwrap();
        assert_eq!(rho.matrix, mat_scale4(&identity4(), 0.25));
    }

    #[test]
    fn gibbs_state_ground_limit_projects_onto_lowest_state() {
        let params = p(1.0, 1.5);
        let rho = gibbs_state(&params, 1e-4).unwrap();
        let es = eigensystem(&params);
        let proj = outer4(&es.states[2]);
        assert!(max_abs_diff4(&rho.matrix, &proj) < 1e-12);
    }

    #[test]
    fn purity_nonincreasing_in_temperature() {
        for &(o, g) in &[(1.0, 1.5), (0.5, 0.0), (0.0, 2.0), (2.0, 2.0)] {
            let mut last = f64::INFINITY;
            for k in 0..40 {
                let t = 0.05 + 0.15 * k as f64;
                let pu = gibbs_state(&p(o, g), t).unwrap().purity();
                assert!(pu <= last + 1e-12, "purity rose at ({o},{g},{t})");
                last = pu;
            }
        }
    }

    #[test]
    fn x_elements_have_no_coherence_without_coupling() {
        let el = x_state_elements(&p(1.0, 0.0), 1.0).unwrap();
        assert_eq!(el.eta, 0.0);
    }

    #[test]
    fn x_elements_flat_limit() {
        let el = x_state_elements(&p(1.0, 1.5), 1e8).unwrap();
        assert!((el.x - 0.25).abs() < 1e-7);
        assert!((el.z - 0.25).abs() < 1e-7);
        assert!((el.y - 0.25).abs() < 1e-7);
        assert!(el.delta.abs() < 1e-7);
        assert!(el.eta.abs() < 1e-7);
    }

    #[test]
    fn x_elements_satisfy_structural_invariants() {
        for &(o, g, t) in &[
            (1.0, 1.5, 0.5),
            (0.5, 0.3, 2.0),
            (0.0, 2.0, 0.2),
            (2.0, 0.0, 1.0),
        ] {
            let el = x_state_elements(&p(o, g), t).unwrap();
            assert!((el.x + 2.0 * el.z + el.y - 1.0).abs() < 1e-12);
            // z +- delta are the two middle-block Boltzmann weights
            let w = boltzmann_weights(&p(o, g), t).unwrap();
            assert!((el.z + el.delta - w[0]).abs() < 1e-14);
            assert!((el.z - el.delta - w[1]).abs() < 1e-14);
            assert!(el.z + el.delta > 0.0);
            assert!(el.z - el.delta > 0.0);
            // outer block positivity
            assert!(el.x * el.y - el.eta * el.eta >= -1e-12);
            // partition function and beta round-trip
            assert!((el.beta - 1.0 / t).abs() < 1e-15);
            assert!(el.partition >= 4.0);
        }
    }

    #[test]
    fn x_elements_match_expm_oracle_at_generic_point() {
        let el = x_state_elements(&p(1.0, 1.5), 0.5).unwrap();
        let m = gibbs_by_expm(&p(1.0, 1.5), 0.5);
        assert!((el.x - m[0][0]).abs() < 1e-13);
        assert!((el.z - m[1][1]).abs() < 1e-13);
        assert!((el.delta - m[1][2]).abs() < 1e-13);
        assert!((el.eta - m[0][3]).abs() < 1e-13);
        assert!((el.y - m[3][3]).abs() < 1e-13);
    }
}
