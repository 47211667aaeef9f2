//! The two-qubit gravitational-cat Hamiltonian and its exact eigensystem.
//!
//! In the computational basis {|00>, |01>, |10>, |11>} the Hamiltonian is
//!
//! ```text
//!     [  omega   0       0      -gamma ]
//!     [  0       0      -gamma   0     ]
//!     [  0      -gamma   0       0     ]
//!     [ -gamma   0       0      -omega ]
//! ```
//!
//! with energy splitting `omega` and gravitational coupling `gamma`, both in
//! the same energy units (k_B = 1). The spectrum splits into a middle block
//! spanned by (|01> +- |10>)/sqrt(2) with energies -+gamma and an outer block
//! on {|00>, |11>} with energies -+Delta, Delta = sqrt(omega^2 + gamma^2).
//!
//! The outer-block eigenvectors are parametrized by the mixing angles
//! nu_plus = atan2(gamma, omega + Delta) and nu_minus = nu_plus - pi/2, which
//! keeps both angles finite and continuous through gamma -> 0 (where the
//! quotient form gamma / (omega - Delta) degenerates to 0/0) and pins the
//! limits nu_plus -> 0, nu_minus -> -pi/2 for omega > 0.

use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec4, ZERO4};

/// CODATA Newtonian constant of gravitation, m^3 kg^-1 s^-2.
pub const NEWTON_G: f64 = 6.674_30e-11;

/// The physical parameter pair (omega, gamma); temperature is passed to the
/// thermal operations separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub gamma: f64,
}

impl ModelParams {
    /// Validates that both parameters are finite and non-negative.
    pub fn new(omega: f64, gamma: f64) -> Result<Self> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
            });
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
            });
        }
        Ok(ModelParams { omega, gamma })
    }

    /// Both couplings vanish: the spectrum is fully degenerate.
    pub fn is_degenerate(&self) -> bool {
        self.omega == 0.0 && self.gamma == 0.0
    }

    /// Outer-block energy scale Delta = sqrt(omega^2 + gamma^2).
    pub fn delta(&self) -> f64 {
        libm::hypot(self.omega, self.gamma)
    }
}

/// The Hamiltonian as an explicit real symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian4 {
    pub matrix: Mat4,
}

/// Exact eigensystem of [`Hamiltonian4`].
///
/// Ordering: energies = (-gamma, +gamma, -Delta, +Delta) with states
/// psi_1 = (|01> + |10>)/sqrt(2), psi_2 = (|01> - |10>)/sqrt(2),
/// psi_3 = sin(nu_plus)|00> + cos(nu_plus)|11> (the ground state),
/// psi_4 = cos(nu_plus)|00> - sin(nu_plus)|11>; equivalently psi_3 carries
/// the angle -nu_minus and psi_4 the angle -nu_plus in the
/// cos(theta)|00> + sin(theta)|11> convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub energies: [f64; 4],
    /// Orthonormal eigenvectors; `states[i]` pairs with `energies[i]`.
    pub states: [Vec4; 4],
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// Delta = sqrt(omega^2 + gamma^2).
    pub delta: f64,
    /// Set when omega = gamma = 0 (all four energies vanish).
    pub degenerate: bool,
}

pub fn build_hamiltonian(params: &ModelParams) -> Hamiltonian4 {
    let mut m = ZERO4;
    m[0][0] = params.omega;
    m[3][3] = -params.omega;
    m[0][3] = -params.gamma;
    m[3][0] = -params.gamma;
    m[1][2] = -params.gamma;
    m[2][1] = -params.gamma;
    Hamiltonian4 { matrix: m }
}

pub fn eigensystem(params: &ModelParams) -> EigenSystem {
    let delta = params.delta();
    let nu_plus = libm::atan2(params.gamma, params.omega + delta);
    let nu_minus = nu_plus - core::f64::consts::FRAC_PI_2;

    if params.is_degenerate() {
        // All energies vanish; return the computational basis itself.
        let mut states = [[0.0; 4]; 4];
        for i in 0..4 {
            states[i][i] = 1.0;
        }
        return EigenSystem {
            energies: [0.0; 4],
            states,
            nu_plus,
            nu_minus,
            delta,
            degenerate: true,
        };
    }

    let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
    // half-angle closed forms for cos/sin(nu_plus); exact at gamma = 0
    let cp = libm::sqrt(0.5 * (1.0 + params.omega / delta));
    let sp = params.gamma / (2.0 * delta * cp);

    EigenSystem {
        energies: [-params.gamma, params.gamma, -delta, delta],
        states: [
            [0.0, inv_sqrt2, inv_sqrt2, 0.0],
            [0.0, inv_sqrt2, -inv_sqrt2, 0.0],
            [sp, 0.0, 0.0, cp],
            [cp, 0.0, 0.0, -sp],
        ],
        nu_plus,
        nu_minus,
        delta,
        degenerate: false,
    }
}

/// Gravitational coupling G m^2 / 2 (1/d - 1/d') in joules for two particles
/// of mass `mass_kg` at the separations `d_m` and `d_prime_m` (meters).
///
/// The sign follows the formula: `d_m > d_prime_m` yields a negative value.
/// Rescaling to model energy units is up to the caller.
pub fn coupling_from_geometry(mass_kg: f64, d_m: f64, d_prime_m: f64) -> Result<f64> {
    if !mass_kg.is_finite() || mass_kg <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "mass",
            value: mass_kg,
        });
    }
    if !d_m.is_finite() {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d_m,
        });
    }
    if !d_prime_m.is_finite() {
        return Err(Error::InvalidParameter {
            name: "d_prime",
            value: d_prime_m,
        });
    }
    if d_m == 0.0 {
        return Err(Error::DivisionByZero { name: "d" });
    }
    if d_prime_m == 0.0 {
        return Err(Error::DivisionByZero { name: "d_prime" });
    }
    Ok(NEWTON_G * mass_kg * mass_kg / 2.0 * (1.0 / d_m - 1.0 / d_prime_m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        jacobi_eigh, mat_add4, mat_scale4, mat_vec4, max_abs_diff4, outer4, ZERO4,
    };
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn hamiltonian_zero_params_is_zero_matrix() {
        let h = build_hamiltonian(&ModelParams::new(0.0, 0.0).unwrap());
        assert_eq!(h.matrix, ZERO4);
    }

    #[test]
    fn hamiltonian_decoupled_limit_is_diagonal() {
        let h = build_hamiltonian(&ModelParams::new(1.0, 0.0).unwrap());
        let expected: Mat4 = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        assert_eq!(h.matrix, expected);
    }

    #[test]
    fn hamiltonian_entries_follow_parameters() {
        let h = build_hamiltonian(&ModelParams::new(1.0, 1.5).unwrap());
        assert_eq!(h.matrix[0][0], 1.0);
        assert_eq!(h.matrix[0][3], -1.5);
        assert_eq!(h.matrix[3][0], -1.5);
        assert_eq!(h.matrix[1][2], -1.5);
        assert_eq!(h.matrix[3][3], -1.0);
        // symmetric
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h.matrix[i][j], h.matrix[j][i]);
            }
        }
    }

    #[test]
    fn params_reject_bad_inputs() {
        assert!(ModelParams::new(f64::NAN, 0.0).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
        assert!(ModelParams::new(-0.1, 0.0).is_err());
        assert!(ModelParams::new(0.0, -1.0).is_err());
    }

    #[test]
    fn eigensystem_decoupled_limit() {
        let es = eigensystem(&ModelParams::new(1.0, 0.0).unwrap());
        assert_eq!(es.energies, [0.0, 0.0, -1.0, 1.0]);
        assert_eq!(es.nu_plus, 0.0);
        assert!((es.nu_minus + FRAC_PI_2).abs() < 1e-15);
        assert!(!es.degenerate);
    }

    #[test]
    fn eigensystem_pure_coupling_limit() {
        let es = eigensystem(&ModelParams::new(0.0, 2.0).unwrap());
        assert_eq!(es.energies, [-2.0, 2.0, -2.0, 2.0]);
        assert!((es.nu_plus - core::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((es.nu_minus + core::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn eigensystem_generic_point_matches_dense_solver() {
        let p = ModelParams::new(1.0, 1.5).unwrap();
        let es = eigensystem(&p);
        assert!((es.delta - 1.802_775_637_731_994_6).abs() < 1e-15);
        assert!((es.energies[2] + 1.802_775_637_731_994_6).abs() < 1e-15);

        let h = build_hamiltonian(&p);
        let (vals, _) = jacobi_eigh(&h.matrix);
        let mut sorted = es.energies;
        sorted.sort_unstable_by(f64::total_cmp);
        for k in 0..4 {
            assert!((vals[k] - sorted[k]).abs() < 1e-12, "eigenvalue {k}");
        }
    }

    #[test]
    fn eigensystem_invariants_hold_on_samples() {
        let samples = [
            (0.0, 2.0),
            (1.0, 0.0),
            (1.0, 1.5),
            (0.3, 0.01),
            (2.7, 2.7),
            (0.05, 3.0),
        ];
        for &(omega, gamma) in &samples {
            let p = ModelParams::new(omega, gamma).unwrap();
            let es = eigensystem(&p);
            let h = build_hamiltonian(&p);

            // orthonormality
            for i in 0..4 {
                for j in 0..4 {
                    let d = crate::linalg::dot4(&es.states[i], &es.states[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-12, "({omega},{gamma}) <{i}|{j}>");
                }
            }
            // H psi = E psi relative to max(|E|, 1)
            let scale = es.delta.max(1.0);
            for i in 0..4 {
                let hv = mat_vec4(&h.matrix, &es.states[i]);
                for r in 0..4 {
                    let resid = (hv[r] - es.energies[i] * es.states[i][r]).abs();
                    assert!(resid / scale < 1e-10, "({omega},{gamma}) state {i}");
                }
            }
            // traceless spectrum
            let sum: f64 = es.energies.iter().sum();
            assert!(sum.abs() < 1e-12);
            // reconstruction sum_i E_i |psi_i><psi_i| = H
            let mut rec = ZERO4;
            for i in 0..4 {
                rec = mat_add4(&rec, &mat_scale4(&outer4(&es.states[i]), es.energies[i]));
            }
            assert!(max_abs_diff4(&rec, &h.matrix) < 1e-10);
            // angle orthogonality identity
            if gamma > 0.0 {
                let prod = es.nu_plus.tan() * es.nu_minus.tan();
                assert!((prod + 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn eigensystem_degenerate_case_flags_and_returns_basis() {
        let es = eigensystem(&ModelParams::new(0.0, 0.0).unwrap());
        assert!(es.degenerate);
        assert_eq!(es.energies, [0.0; 4]);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(es.states[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn coupling_zero_when_distances_equal() {
        assert_eq!(coupling_from_geometry(1.0, 3.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn coupling_matches_direct_substitution() {
        // m = 1 kg, d = 1 m, d' = 2 m: G/4 ~ 1.6685e-11 J
        let c = coupling_from_geometry(1.0, 1.0, 2.0).unwrap();
        assert_eq!(c, NEWTON_G / 4.0);
        assert!((c - 1.6685e-11).abs() / 1.6685e-11 < 1e-3);
    }

    #[test]
    fn coupling_antisymmetric_in_distance_swap() {
        let c = coupling_from_geometry(1.0, 2.0, 1.0).unwrap();
        assert_eq!(c, -NEWTON_G / 4.0);
        assert!(c < 0.0);
    }

    #[test]
    fn coupling_rejects_zero_distance() {
        assert!(matches!(
            coupling_from_geometry(1.0, 0.0, 1.0),
            Err(crate::Error::DivisionByZero { name: "d" })
        ));
        assert!(matches!(
            coupling_from_geometry(1.0, 1.0, 0.0),
            Err(crate::Error::DivisionByZero { name: "d_prime" })
        ));
        assert!(coupling_from_geometry(0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn delta_strictly_increases_in_both_parameters() {
        let grid = [0.1, 0.5, 1.0, 2.0, 2.9];
        for &o in &grid {
            for &g in &grid {
                let d0 = ModelParams::new(o, g).unwrap().delta();
                assert!(ModelParams::new(o + 0.05, g).unwrap().delta() > d0);
                assert!(ModelParams::new(o, g + 0.05).unwrap().delta() > d0);
            }
        }
    }
}
