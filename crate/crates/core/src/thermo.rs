//! State functions and the four-stroke quantum Stirling cycle.
//!
//! The working medium is the coupled pair; the cycled control parameter is
//! the energy splitting omega (gamma is held fixed around the loop). The
//! cycle visits the corners A = (omega_a, t_hot), B = (omega_b, t_hot),
//! C = (omega_b, t_cold), D = (omega_a, t_cold):
//!
//! - A -> B isothermal at t_hot:   Q_AB = T_h (S_B - S_A)
//! - B -> C isochoric at omega_b:  Q_BC = U_C - U_B
//! - C -> D isothermal at t_cold:  Q_CD = T_c (S_D - S_C)
//! - D -> A isochoric at omega_a:  Q_DA = U_A - U_D
//!
//! Reservoir totals are Q_h = Q_AB + Q_DA and Q_c = Q_BC + Q_CD, the net
//! work is W = Q_h + Q_c (first law, dU = 0 over a closed loop), and the
//! efficiency eta = W / Q_h is reported only when Q_h > 0.

use crate::error::{Error, Result};
use crate::model::{eigensystem, ModelParams};
use crate::thermal::{boltzmann_weights, check_temperature};

/// Tolerance below which heats and work are treated as zero when
/// classifying the operating regime.
pub const REGIME_EPSILON: f64 = 1e-12;

/// Occupations, von Neumann entropy (nats) and internal energy at one
/// (omega, gamma, T) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub occupations: [f64; 4],
    pub entropy: f64,
    pub internal_energy: f64,
}

/// How a completed cycle exchanges energy with the two baths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// W > 0 and Q_h > 0: heat in, work out.
    Engine,
    /// W < 0 and Q_c > 0: work in, heat pumped from the cold bath.
    Refrigerator,
    Other,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Other => "other",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stroke heats, reservoir totals, work, and efficiency of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    pub q_ab: f64,
    pub q_bc: f64,
    pub q_cd: f64,
    pub q_da: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub work: f64,
    /// W / Q_h, present only in the engine regime.
    pub efficiency: Option<f64>,
    /// Carnot ceiling 1 - t_cold / t_hot.
    pub carnot: f64,
    pub regime: Regime,
}

/// Occupations P_n = e^{-E_n/T}/Z, entropy S = -sum P_n ln P_n and internal
/// energy U = sum P_n E_n (0 ln 0 = 0).
pub fn thermo_state(params: &ModelParams, temp: f64) -> Result<ThermoState> {
    let p = boltzmann_weights(params, temp)?;
    let es = eigensystem(params);
    let mut entropy = 0.0;
    let mut internal_energy = 0.0;
    for i in 0..4 {
        if p[i] > 0.0 {
            entropy -= p[i] * libm::log(p[i]);
        }
        internal_energy += p[i] * es.energies[i];
    }
    Ok(ThermoState {
        occupations: p,
        entropy,
        internal_energy,
    })
}

/// Carnot efficiency 1 - t_cold / t_hot. Equal temperatures give zero.
pub fn carnot(t_hot: f64, t_cold: f64) -> Result<f64> {
    check_temperature(t_cold)?;
    if !t_hot.is_finite() || t_hot < t_cold {
        return Err(Error::InvalidCycle { t_hot, t_cold });
    }
    Ok(1.0 - t_cold / t_hot)
}

fn check_coupling(value: f64, name: &'static str) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidParameter { name, value });
    }
    Ok(())
}

/// Run one Stirling cycle. Requires t_hot >= t_cold > 0; a single-temperature
/// loop (t_hot = t_cold) is legal and produces zero net work.
pub fn stirling_cycle(
    gamma: f64,
    omega_a: f64,
    omega_b: f64,
    t_hot: f64,
    t_cold: f64,
) -> Result<CycleResult> {
    check_coupling(gamma, "gamma")?;
    check_coupling(omega_a, "omega_a")?;
    check_coupling(omega_b, "omega_b")?;
    check_temperature(t_cold)?;
    if !t_hot.is_finite() || t_hot < t_cold {
        return Err(Error::InvalidCycle { t_hot, t_cold });
    }

    let pa = ModelParams::new(omega_a, gamma)?;
    let pb = ModelParams::new(omega_b, gamma)?;
    let a = thermo_state(&pa, t_hot)?;
    let b = thermo_state(&pb, t_hot)?;
    let c = thermo_state(&pb, t_cold)?;
    let d = thermo_state(&pa, t_cold)?;

    let q_ab = t_hot * (b.entropy - a.entropy);
    let q_bc = c.internal_energy - b.internal_energy;
    let q_cd = t_cold * (d.entropy - c.entropy);
    let q_da = a.internal_energy - d.internal_energy;

    let q_h = q_ab + q_da;
    let q_c = q_bc + q_cd;
    let work = q_h + q_c;

    let regime = if work > REGIME_EPSILON && q_h > REGIME_EPSILON {
        Regime::Engine
    } else if work < -REGIME_EPSILON && q_c > REGIME_EPSILON {
        Regime::Refrigerator
    } else {
        Regime::Other
    };
    // eta = W/Q_h is meaningful only when the cycle actually converts heat
    // into work; a degenerate loop with W = 0 still has Q_h > 0 but no
    // efficiency to speak of
    let efficiency = if regime == Regime::Engine {
        Some(work / q_h)
    } else {
        None
    };

    Ok(CycleResult {
        q_ab,
        q_bc,
        q_cd,
        q_da,
        q_h,
        q_c,
        work,
        efficiency,
        carnot: 1.0 - t_cold / t_hot,
        regime,
    })
}
