//! Parameter derivatives of the Gibbs state, analytic and finite-difference.
//!
//! The analytic route differentiates the spectral sum directly: the Boltzmann
//! weights p_i(omega, gamma, T) and the eigenvector tilt factors
//! (omega/Delta, gamma/Delta) have closed-form derivatives, and the product
//! rule on sum_i p_i |psi_i><psi_i| assembles the matrix. The gamma -> 0
//! limit stays finite this way (the quotient form of the mixing angle
//! degenerates there but its derivative does not).
//!
//! The finite-difference route is an independent oracle: a plain central
//! difference of `gibbs_state` with a caller-chosen step.

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::model::{eigensystem, ModelParams};
use crate::thermal::{boltzmann_weights, check_temperature, gibbs_state};

/// Default central-difference step in model units.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Which coordinate of (gamma, omega, T) a derivative targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamTag {
    Gamma,
    Omega,
    Temperature,
}

impl ParamTag {
    pub fn name(&self) -> &'static str {
        match self {
            ParamTag::Gamma => "gamma",
            ParamTag::Omega => "omega",
            ParamTag::Temperature => "temp",
        }
    }
}

/// d rho / d xi, traceless and X-patterned like rho itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoDerivative {
    pub matrix: Mat4,
    pub wrt: ParamTag,
}

/// Weight derivatives d p_i / d xi in the eigensystem ordering.
fn weight_derivatives(params: &ModelParams, temp: f64, wrt: ParamTag) -> Result<[f64; 4]> {
    let es = eigensystem(params);
    let p = boltzmann_weights(params, temp)?;
    let beta = 1.0 / temp;
    let delta = es.delta;

    let dp = match wrt {
        ParamTag::Gamma | ParamTag::Omega => {
            let de: [f64; 4] = match wrt {
                ParamTag::Gamma => {
                    let r = if delta > 0.0 {
                        params.gamma / delta
                    } else {
                        0.0
                    };
                    [-1.0, 1.0, -r, r]
                }
                ParamTag::Omega => {
                    let r = if delta > 0.0 {
                        params.omega / delta
                    } else {
                        0.0
                    };
                    [0.0, 0.0, -r, r]
                }
                ParamTag::Temperature => unreachable!(),
            };
            let mean: f64 = (0..4).map(|i| p[i] * de[i]).sum();
            let mut dp = [0.0; 4];
            for i in 0..4 {
                dp[i] = -beta * p[i] * (de[i] - mean);
            }
            dp
        }
        ParamTag::Temperature => {
            let u: f64 = (0..4).map(|i| p[i] * es.energies[i]).sum();
            let mut dp = [0.0; 4];
            for i in 0..4 {
                dp[i] = p[i] * (es.energies[i] - u) / (temp * temp);
            }
            dp
        }
    };
    Ok(dp)
}

/// Derivatives of the double-angle factors c2 = omega/Delta, s2 = gamma/Delta
/// entering the outer-block projectors. Finite for gamma -> 0 with omega > 0;
/// undefined only at omega = gamma = 0.
fn double_angle_derivatives(params: &ModelParams, wrt: ParamTag) -> (f64, f64) {
    let (o, g) = (params.omega, params.gamma);
    let d = params.delta();
    let d3 = d * d * d;
    match wrt {
        ParamTag::Gamma => (-o * g / d3, o * o / d3),
        ParamTag::Omega => (g * g / d3, -o * g / d3),
        ParamTag::Temperature => (0.0, 0.0),
    }
}

/// Assemble d rho from weight derivatives and the projector derivatives.
///
/// In terms of c2 = omega/Delta and s2 = gamma/Delta the outer block of rho
/// is x = (p3 + p4)/2 - c2 (p3 - p4)/2, eta = s2 (p3 - p4)/2 and
/// y = (p3 + p4)/2 + c2 (p3 - p4)/2, so the product rule only needs
/// (dc2, ds2) alongside the weight derivatives.
fn assemble(params: &ModelParams, dp: &[f64; 4], p: &[f64; 4], dc2: f64, ds2: f64) -> Mat4 {
    let delta = params.delta();
    let (c2, s2) = if delta > 0.0 {
        (params.omega / delta, params.gamma / delta)
    } else {
        (0.0, 0.0)
    };
    let mut m = [[0.0; 4]; 4];

    // middle block on (|01>, |10>)
    let sym = 0.5 * (dp[0] + dp[1]);
    let asym = 0.5 * (dp[0] - dp[1]);
    m[1][1] = sym;
    m[2][2] = sym;
    m[1][2] = asym;
    m[2][1] = asym;

    // outer block on (|00>, |11>)
    let diff = p[2] - p[3];
    let d_sum = 0.5 * (dp[2] + dp[3]);
    let d_diff = dp[2] - dp[3];
    let d_tilt = 0.5 * (dc2 * diff + c2 * d_diff);
    m[0][0] = d_sum - d_tilt;
    m[3][3] = d_sum + d_tilt;
    m[0][3] = 0.5 * (ds2 * diff + s2 * d_diff);
    m[3][0] = m[0][3];
    m
}

/// Analytic derivative of the Gibbs state with respect to `wrt`.
pub fn d_rho(params: &ModelParams, temp: f64, wrt: ParamTag) -> Result<RhoDerivative> {
    check_temperature(temp)?;
    if params.is_degenerate() && wrt != ParamTag::Temperature {
        return Err(Error::DegenerateModel {
            context: "state derivative direction is undefined",
        });
    }
    let p = boltzmann_weights(params, temp)?;
    let dp = weight_derivatives(params, temp, wrt)?;
    let (dc2, ds2) = if params.is_degenerate() {
        (0.0, 0.0)
    } else {
        double_angle_derivatives(params, wrt)
    };
    Ok(RhoDerivative {
        matrix: assemble(params, &dp, &p, dc2, ds2),
        wrt,
    })
}

/// Analytic derivative with respect to the inverse temperature beta = 1/T,
/// written directly in the beta parametrization (not chained through T).
pub fn d_rho_wrt_beta(params: &ModelParams, temp: f64) -> Result<Mat4> {
    check_temperature(temp)?;
    let es = eigensystem(params);
    let p = boltzmann_weights(params, temp)?;
    let u: f64 = (0..4).map(|i| p[i] * es.energies[i]).sum();
    let mut dp = [0.0; 4];
    for i in 0..4 {
        dp[i] = p[i] * (u - es.energies[i]);
    }
    Ok(assemble(params, &dp, &p, 0.0, 0.0))
}

/// Central finite difference (rho(xi + h) - rho(xi - h)) / (2h).
pub fn d_rho_fd(params: &ModelParams, temp: f64, wrt: ParamTag, h: f64) -> Result<RhoDerivative> {
    check_temperature(temp)?;
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "h",
            value: h,
        });
    }
    let (plus, minus) = match wrt {
        ParamTag::Gamma => {
            if params.gamma - h < 0.0 {
                return Err(Error::StepOutOfDomain { name: "gamma", h });
            }
            (
                gibbs_state(&ModelParams::new(params.omega, params.gamma + h)?, temp)?,
                gibbs_state(&ModelParams::new(params.omega, params.gamma - h)?, temp)?,
            )
        }
        ParamTag::Omega => {
            if params.omega - h < 0.0 {
                return Err(Error::StepOutOfDomain { name: "omega", h });
            }
            (
                gibbs_state(&ModelParams::new(params.omega + h, params.gamma)?, temp)?,
                gibbs_state(&ModelParams::new(params.omega - h, params.gamma)?, temp)?,
            )
        }
        ParamTag::Temperature => {
            if temp - h <= 0.0 {
                return Err(Error::StepOutOfDomain { name: "temp", h });
            }
            (
                gibbs_state(params, temp + h)?,
                gibbs_state(params, temp - h)?,
            )
        }
    };
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (plus.matrix[i][j] - minus.matrix[i][j]) / (2.0 * h);
        }
    }
    Ok(RhoDerivative { matrix: m, wrt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        anticommutator4, mat_mul4, mat_scale4, mat_sub4, max_abs4, max_abs_diff4, trace4,
    };
    use crate::model::build_hamiltonian;

    fn p(omega: f64, gamma: f64) -> ModelParams {
        ModelParams::new(omega, gamma).unwrap()
    }

    #[test]
    fn analytic_matches_central_difference() {
        for &wrt in &[ParamTag::Gamma, ParamTag::Omega, ParamTag::Temperature] {
            let a = d_rho(&p(1.0, 0.5), 1.0, wrt).unwrap();
            let fd = d_rho_fd(&p(1.0, 0.5), 1.0, wrt, 1e-5).unwrap();
            assert!(max_abs_diff4(&a.matrix, &fd.matrix) < 1e-6, "{wrt:?}");
        }
    }

    #[test]
    fn flat_limit_kills_all_derivatives() {
        let a = d_rho(&p(1.0, 0.5), 1e8, ParamTag::Omega).unwrap();
        assert!(max_abs4(&a.matrix) <= 1e-7);
    }

    #[test]
    fn zero_omega_symmetry_survives_differentiation() {
        let a = d_rho(&p(0.0, 2.0), 1.0, ParamTag::Gamma).unwrap();
        assert!((a.matrix[0][0] - a.matrix[3][3]).abs() < 1e-14);
    }

    #[test]
    fn derivatives_are_traceless_and_x_patterned() {
        for &wrt in &[ParamTag::Gamma, ParamTag::Omega, ParamTag::Temperature] {
            for &(o, g, t) in &[(1.0, 1.5, 0.5), (0.5, 0.1, 2.0), (2.0, 2.0, 0.2)] {
                let a = d_rho(&p(o, g), t, wrt).unwrap();
                assert!(trace4(&a.matrix).abs() < 1e-10);
                for &(i, j) in &[(0, 1), (0, 2), (1, 3), (2, 3)] {
                    assert_eq!(a.matrix[i][j], 0.0);
                    assert_eq!(a.matrix[j][i], 0.0);
                }
                for i in 0..4 {
                    for j in 0..4 {
                        assert_eq!(a.matrix[i][j], a.matrix[j][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_derivative_finite_at_zero_coupling() {
        let a = d_rho(&p(1.0, 0.0), 1.0, ParamTag::Gamma).unwrap();
        assert!(a.matrix.iter().flatten().all(|v| v.is_finite()));
        // coherence must grow from zero at first order
        assert!(a.matrix[0][3].abs() > 1e-3);
    }

    #[test]
    fn degenerate_model_rejects_coupling_derivatives() {
        assert!(matches!(
            d_rho(&p(0.0, 0.0), 1.0, ParamTag::Gamma),
            Err(Error::DegenerateModel { .. })
        ));
    }

    #[test]
    fn fd_self_consistency_under_step_halving() {
        // the h = 1e-5 and h/2 estimates differ by no more than the h^2
        // truncation prediction (constant read off at coarse steps where
        // truncation dominates roundoff), with margin 4x plus a noise floor
        let c1 = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Gamma, 1e-3).unwrap();
        let c2 = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Gamma, 5e-4).unwrap();
        let truncation_constant = max_abs_diff4(&c1.matrix, &c2.matrix) / (0.75 * 1e-6);

        let base = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Gamma, 1e-5).unwrap();
        let half = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Gamma, 5e-6).unwrap();
        let diff = max_abs_diff4(&base.matrix, &half.matrix);
        let prediction = 0.75 * 1e-10 * truncation_constant;
        assert!(
            diff <= 4.0 * prediction + 1e-10,
            "diff {diff}, prediction {prediction}"
        );
    }

    #[test]
    fn richardson_decay_at_coarse_steps() {
        // truncation-dominated regime: residual drops ~4x per halving
        let f1 = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Temperature, 1e-3).unwrap();
        let f2 = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Temperature, 5e-4).unwrap();
        let f3 = d_rho_fd(&p(1.0, 1.5), 0.5, ParamTag::Temperature, 2.5e-4).unwrap();
        let r1 = max_abs_diff4(&f1.matrix, &f2.matrix);
        let r2 = max_abs_diff4(&f2.matrix, &f3.matrix);
        assert!(r1 >= 3.0 * r2, "r1 = {r1}, r2 = {r2}");
    }

    #[test]
    fn fd_temperature_flat_limit_is_zero() {
        let fd = d_rho_fd(&p(1.0, 1.5), 1e8, ParamTag::Temperature, 1.0).unwrap();
        assert!(max_abs4(&fd.matrix) < 1e-12);
    }

    #[test]
    fn fd_rejects_steps_leaving_domain() {
        assert!(matches!(
            d_rho_fd(&p(1.0, 0.5), 0.5, ParamTag::Temperature, 0.5),
            Err(Error::StepOutOfDomain { name: "temp", .. })
        ));
        assert!(matches!(
            d_rho_fd(&p(1.0, 1e-7), 0.5, ParamTag::Gamma, 1e-5),
            Err(Error::StepOutOfDomain { name: "gamma", .. })
        ));
    }

    #[test]
    fn gibbs_identity_links_beta_derivative_to_hamiltonian() {
        // d rho / d beta = -{H, rho}/2 + <H> rho, then d/dT = -(1/T^2) d/dbeta
        for &(o, g, t) in &[(1.0, 1.5, 0.5), (0.5, 0.2, 1.0), (2.0, 1.0, 0.3)] {
            let params = p(o, g);
            let h = build_hamiltonian(&params).matrix;
            let rho = gibbs_state(&params, t).unwrap().matrix;
            let mean_h = trace4(&mat_mul4(&h, &rho));
            let identity_rhs = mat_sub4(
                &mat_scale4(&rho, mean_h),
                &mat_scale4(&anticommutator4(&h, &rho), 0.5),
            );

            let d_beta = d_rho_wrt_beta(&params, t).unwrap();
            assert!(max_abs_diff4(&d_beta, &identity_rhs) < 1e-8);

            let d_t = d_rho(&params, t, ParamTag::Temperature).unwrap();
            let chained = mat_scale4(&d_beta, -1.0 / (t * t));
            assert!(max_abs_diff4(&d_t.matrix, &chained) < 1e-10);
        }
    }
}
