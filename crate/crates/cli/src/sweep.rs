//! Parameter sweeps: a linear (or log) grid along one axis, a fixed set of
//! remaining parameters, and a list of requested output columns.
//!
//! Rows are computed in parallel (capped by `GRAVCAT_THREADS`) but always
//! emitted in grid order. Points where a quantity is undefined emit empty
//! cells plus a value in the trailing `flag` column (`singular` when the
//! Fisher block cannot be inverted, `degenerate` when omega = gamma = 0
//! leaves the derivatives undefined). Estimation columns come from the
//! spectral Fisher route, which is stable over the whole supported domain.

use std::io::Write;

use gravcat_core::{
    bounds_report, compatibility, gibbs_state, qfim_spectral, stirling_cycle, thermo_state,
    x_state_elements, Error as CoreError, ModelParams, ParamTag,
};
use rayon::prelude::*;

use crate::error::CliError;
use crate::format::{csv_line, json_line, Cell, OutputFormat};

/// Hard ceiling on grid sizes.
pub const MAX_POINTS: usize = 100_000;

/// Default floor applied to temperature-axis grids.
pub const DEFAULT_TEMP_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Omega,
    Gamma,
    Temp,
    OmegaB,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Axis, CliError> {
        match s {
            "omega" => Ok(Axis::Omega),
            "gamma" => Ok(Axis::Gamma),
            "temp" => Ok(Axis::Temp),
            "omega-b" | "omega_b" => Ok(Axis::OmegaB),
            other => Err(CliError::usage(format!(
                "unknown axis `{other}` (expected omega, gamma, temp or omega-b)"
            ))),
        }
    }

    pub fn column(&self) -> &'static str {
        match self {
            Axis::Omega => "omega",
            Axis::Gamma => "gamma",
            Axis::Temp => "temp",
            Axis::OmegaB => "omega_b",
        }
    }
}

/// Estimation pair in CLI spelling: `gamma,temp`, `omega,temp`, `omega,gamma`.
pub fn parse_pair(s: &str) -> Result<(ParamTag, ParamTag), CliError> {
    match s {
        "gamma,temp" => Ok((ParamTag::Gamma, ParamTag::Temperature)),
        "omega,temp" => Ok((ParamTag::Omega, ParamTag::Temperature)),
        "omega,gamma" => Ok((ParamTag::Omega, ParamTag::Gamma)),
        other => Err(CliError::usage(format!(
            "unknown pair `{other}` (expected gamma,temp or omega,temp or omega,gamma)"
        ))),
    }
}

pub fn pair_label(pair: (ParamTag, ParamTag)) -> String {
    format!("{},{}", pair.0.name(), pair.1.name())
}

/// Output columns for state-mode sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateQuantity {
    Partition,
    ElX,
    ElZ,
    ElDelta,
    ElEta,
    ElY,
    Purity,
    Entropy,
    InternalEnergy,
    F11,
    F12,
    F22,
    DetF,
    VarSim1,
    VarSim2,
    VarInd1,
    VarInd2,
    GammaRatio,
    Compat,
}

impl StateQuantity {
    fn parse(s: &str) -> Option<StateQuantity> {
        Some(match s {
            "partition" => StateQuantity::Partition,
            "x" => StateQuantity::ElX,
            "z" => StateQuantity::ElZ,
            "delta" => StateQuantity::ElDelta,
            "eta" => StateQuantity::ElEta,
            "y" => StateQuantity::ElY,
            "purity" => StateQuantity::Purity,
            "entropy" => StateQuantity::Entropy,
            "internal_energy" => StateQuantity::InternalEnergy,
            "f11" => StateQuantity::F11,
            "f12" => StateQuantity::F12,
            "f22" => StateQuantity::F22,
            "det_f" => StateQuantity::DetF,
            "var_sim_1" => StateQuantity::VarSim1,
            "var_sim_2" => StateQuantity::VarSim2,
            "var_ind_1" => StateQuantity::VarInd1,
            "var_ind_2" => StateQuantity::VarInd2,
            "gamma_ratio" => StateQuantity::GammaRatio,
            "compat" => StateQuantity::Compat,
            _ => return None,
        })
    }

    fn column(&self) -> &'static str {
        match self {
            StateQuantity::Partition => "partition",
            StateQuantity::ElX => "x",
            StateQuantity::ElZ => "z",
            StateQuantity::ElDelta => "delta",
            StateQuantity::ElEta => "eta",
            StateQuantity::ElY => "y",
            StateQuantity::Purity => "purity",
            StateQuantity::Entropy => "entropy",
            StateQuantity::InternalEnergy => "internal_energy",
            StateQuantity::F11 => "f11",
            StateQuantity::F12 => "f12",
            StateQuantity::F22 => "f22",
            StateQuantity::DetF => "det_f",
            StateQuantity::VarSim1 => "var_sim_1",
            StateQuantity::VarSim2 => "var_sim_2",
            StateQuantity::VarInd1 => "var_ind_1",
            StateQuantity::VarInd2 => "var_ind_2",
            StateQuantity::GammaRatio => "gamma_ratio",
            StateQuantity::Compat => "compat",
        }
    }

    fn needs_estimation(&self) -> bool {
        matches!(
            self,
            StateQuantity::F11
                | StateQuantity::F12
                | StateQuantity::F22
                | StateQuantity::DetF
                | StateQuantity::VarSim1
                | StateQuantity::VarSim2
                | StateQuantity::VarInd1
                | StateQuantity::VarInd2
                | StateQuantity::GammaRatio
                | StateQuantity::Compat
        )
    }
}

/// Output columns for cycle-mode sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleQuantity {
    QAb,
    QBc,
    QCd,
    QDa,
    QH,
    QC,
    Work,
    Eta,
    EtaC,
    Regime,
}

impl CycleQuantity {
    fn parse(s: &str) -> Option<CycleQuantity> {
        Some(match s {
            "q_ab" => CycleQuantity::QAb,
            "q_bc" => CycleQuantity::QBc,
            "q_cd" => CycleQuantity::QCd,
            "q_da" => CycleQuantity::QDa,
            "q_h" => CycleQuantity::QH,
            "q_c" => CycleQuantity::QC,
            "w" => CycleQuantity::Work,
            "eta" => CycleQuantity::Eta,
            "eta_c" => CycleQuantity::EtaC,
            "regime" => CycleQuantity::Regime,
            _ => return None,
        })
    }

    fn column(&self) -> &'static str {
        match self {
            CycleQuantity::QAb => "q_ab",
            CycleQuantity::QBc => "q_bc",
            CycleQuantity::QCd => "q_cd",
            CycleQuantity::QDa => "q_da",
            CycleQuantity::QH => "q_h",
            CycleQuantity::QC => "q_c",
            CycleQuantity::Work => "w",
            CycleQuantity::Eta => "eta",
            CycleQuantity::EtaC => "eta_c",
            CycleQuantity::Regime => "regime",
        }
    }
}

/// Raw sweep request straight from the CLI flags (or a figure recipe).
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
    pub tmin: f64,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub temp: Option<f64>,
    pub omega_a: Option<f64>,
    pub omega_b: Option<f64>,
    pub t_hot: Option<f64>,
    pub t_cold: Option<f64>,
    pub pair: Option<(ParamTag, ParamTag)>,
    /// Comma-separated column names; `None` picks a default per mode.
    pub quantities: Option<String>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            axis: Axis::Temp,
            start: 0.05,
            stop: 2.0,
            points: 100,
            log: false,
            tmin: DEFAULT_TEMP_FLOOR,
            omega: None,
            gamma: None,
            temp: None,
            omega_a: None,
            omega_b: None,
            t_hot: None,
            t_cold: None,
            pair: None,
            quantities: None,
        }
    }
}

#[derive(Debug)]
enum Columns {
    State(Vec<StateQuantity>),
    Cycle(Vec<CycleQuantity>),
}

/// A validated sweep with its grid and resolved columns.
#[derive(Debug)]
pub struct ResolvedSweep {
    spec: SweepSpec,
    grid: Vec<f64>,
    columns: Columns,
}

fn require(value: Option<f64>, name: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::usage(format!("missing required parameter --{name}")))
}

pub fn resolve(mut spec: SweepSpec) -> Result<ResolvedSweep, CliError> {
    if spec.points < 2 {
        return Err(CliError::usage("points must be at least 2"));
    }
    if spec.points > MAX_POINTS {
        return Err(CliError::usage(format!(
            "points must be at most {MAX_POINTS}"
        )));
    }
    if spec.axis == Axis::Temp {
        spec.start = spec.start.max(spec.tmin);
    }
    if !(spec.start < spec.stop) {
        return Err(CliError::usage(format!(
            "start must be below stop (got start = {}, stop = {})",
            spec.start, spec.stop
        )));
    }
    if spec.log && spec.start <= 0.0 {
        return Err(CliError::usage("log spacing requires start > 0"));
    }

    let cycle_mode = spec.axis == Axis::OmegaB
        || spec.omega_a.is_some()
        || spec.t_hot.is_some()
        || spec.t_cold.is_some();

    let columns = if cycle_mode {
        if spec.axis == Axis::Omega || spec.axis == Axis::Temp {
            return Err(CliError::usage(
                "cycle sweeps accept the axes omega-b or gamma (omega and temp are ambiguous over a cycle)",
            ));
        }
        // presence checks; values are validated by the first cycle call
        require(spec.t_hot, "t-hot")?;
        require(spec.t_cold, "t-cold")?;
        require(spec.omega_a, "omega-a")?;
        if spec.axis != Axis::Gamma {
            require(spec.gamma, "gamma")?;
        }
        if spec.axis != Axis::OmegaB {
            require(spec.omega_b, "omega-b")?;
        }
        let names = spec
            .quantities
            .clone()
            .unwrap_or_else(|| "q_h,q_c,w,eta,eta_c".to_string());
        let mut qs = Vec::new();
        for name in names.split(',') {
            let q = CycleQuantity::parse(name)
                .ok_or_else(|| CliError::usage(format!("unknown cycle quantity `{name}`")))?;
            qs.push(q);
        }
        Columns::Cycle(qs)
    } else {
        if spec.axis != Axis::Omega {
            require(spec.omega, "omega")?;
        }
        if spec.axis != Axis::Gamma {
            require(spec.gamma, "gamma")?;
        }
        if spec.axis != Axis::Temp {
            require(spec.temp, "temp")?;
        }
        let names = spec.quantities.clone().unwrap_or_else(|| {
            if spec.pair.is_some() {
                "var_sim_1,var_sim_2,var_ind_1,var_ind_2,gamma_ratio".to_string()
            } else {
                "partition,entropy,internal_energy,purity".to_string()
            }
        });
        let mut qs = Vec::new();
        for name in names.split(',') {
            let q = StateQuantity::parse(name)
                .ok_or_else(|| CliError::usage(format!("unknown quantity `{name}`")))?;
            if q.needs_estimation() && spec.pair.is_none() {
                return Err(CliError::usage(format!(
                    "quantity `{name}` needs --pair to pick the parameter pair"
                )));
            }
            qs.push(q);
        }
        Columns::State(qs)
    };

    let grid = if spec.log {
        let (la, lb) = (spec.start.ln(), spec.stop.ln());
        (0..spec.points)
            .map(|k| (la + (lb - la) * k as f64 / (spec.points - 1) as f64).exp())
            .collect()
    } else {
        (0..spec.points)
            .map(|k| spec.start + (spec.stop - spec.start) * k as f64 / (spec.points - 1) as f64)
            .collect()
    };

    Ok(ResolvedSweep {
        spec,
        grid,
        columns,
    })
}

fn flag_cell(flag: &str) -> Cell {
    if flag.is_empty() {
        Cell::Empty
    } else {
        Cell::Text(flag.to_string())
    }
}

fn state_row(
    spec: &SweepSpec,
    qs: &[StateQuantity],
    axis_value: f64,
) -> Result<(Vec<Cell>, String), CliError> {
    let omega = if spec.axis == Axis::Omega {
        axis_value
    } else {
        spec.omega.unwrap()
    };
    let gamma = if spec.axis == Axis::Gamma {
        axis_value
    } else {
        spec.gamma.unwrap()
    };
    let temp = if spec.axis == Axis::Temp {
        axis_value
    } else {
        spec.temp.unwrap()
    };
    let params = ModelParams::new(omega, gamma)?;

    let mut flag = String::new();
    let needs_est = qs.iter().any(|q| q.needs_estimation());

    let els = x_state_elements(&params, temp)?;
    let st = thermo_state(&params, temp)?;
    let purity = gibbs_state(&params, temp)?.purity();

    let mut block = None;
    let mut bounds = None;
    if needs_est {
        let pair = spec.pair.expect("validated in resolve()");
        match qfim_spectral(&params, temp, pair) {
            Ok(b) => {
                match bounds_report(&b) {
                    Ok(r) => bounds = Some(r),
                    Err(
                        CoreError::UnidentifiablePair { .. }
                        | CoreError::UninformativeParameter { .. },
                    ) => flag = "singular".to_string(),
                    Err(e) => return Err(e.into()),
                }
                block = Some(b);
            }
            Err(CoreError::DegenerateModel { .. }) => flag = "degenerate".to_string(),
            Err(e) => return Err(e.into()),
        }
    }

    let mut cells = Vec::with_capacity(qs.len());
    for q in qs {
        let cell = match q {
            StateQuantity::Partition => Cell::Num(els.partition),
            StateQuantity::ElX => Cell::Num(els.x),
            StateQuantity::ElZ => Cell::Num(els.z),
            StateQuantity::ElDelta => Cell::Num(els.delta),
            StateQuantity::ElEta => Cell::Num(els.eta),
            StateQuantity::ElY => Cell::Num(els.y),
            StateQuantity::Purity => Cell::Num(purity),
            StateQuantity::Entropy => Cell::Num(st.entropy),
            StateQuantity::InternalEnergy => Cell::Num(st.internal_energy),
            StateQuantity::F11 => block.map_or(Cell::Empty, |b| Cell::Num(b.f11)),
            StateQuantity::F12 => block.map_or(Cell::Empty, |b| Cell::Num(b.f12)),
            StateQuantity::F22 => block.map_or(Cell::Empty, |b| Cell::Num(b.f22)),
            StateQuantity::DetF => block.map_or(Cell::Empty, |b| Cell::Num(b.det)),
            StateQuantity::VarSim1 => bounds.map_or(Cell::Empty, |r| Cell::Num(r.var_sim_1)),
            StateQuantity::VarSim2 => bounds.map_or(Cell::Empty, |r| Cell::Num(r.var_sim_2)),
            StateQuantity::VarInd1 => bounds.map_or(Cell::Empty, |r| Cell::Num(r.var_ind_1)),
            StateQuantity::VarInd2 => bounds.map_or(Cell::Empty, |r| Cell::Num(r.var_ind_2)),
            StateQuantity::GammaRatio => bounds.map_or(Cell::Empty, |r| Cell::Num(r.gamma_ratio)),
            StateQuantity::Compat => {
                let pair = spec.pair.expect("validated in resolve()");
                match compatibility(&params, temp, pair) {
                    Ok(v) => Cell::Num(v),
                    Err(CoreError::SingularState { .. }) => {
                        if flag.is_empty() {
                            flag = "singular".to_string();
                        }
                        Cell::Empty
                    }
                    Err(CoreError::DegenerateModel { .. }) => {
                        if flag.is_empty() {
                            flag = "degenerate".to_string();
                        }
                        Cell::Empty
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        };
        cells.push(cell);
    }
    Ok((cells, flag))
}

fn cycle_row(
    spec: &SweepSpec,
    qs: &[CycleQuantity],
    axis_value: f64,
) -> Result<(Vec<Cell>, String), CliError> {
    let gamma = if spec.axis == Axis::Gamma {
        axis_value
    } else {
        spec.gamma.unwrap()
    };
    let omega_b = if spec.axis == Axis::OmegaB {
        axis_value
    } else {
        spec.omega_b.unwrap()
    };
    let cycle = stirling_cycle(
        gamma,
        spec.omega_a.unwrap(),
        omega_b,
        spec.t_hot.unwrap(),
        spec.t_cold.unwrap(),
    )?;

    let cells = qs
        .iter()
        .map(|q| match q {
            CycleQuantity::QAb => Cell::Num(cycle.q_ab),
            CycleQuantity::QBc => Cell::Num(cycle.q_bc),
            CycleQuantity::QCd => Cell::Num(cycle.q_cd),
            CycleQuantity::QDa => Cell::Num(cycle.q_da),
            CycleQuantity::QH => Cell::Num(cycle.q_h),
            CycleQuantity::QC => Cell::Num(cycle.q_c),
            CycleQuantity::Work => Cell::Num(cycle.work),
            CycleQuantity::Eta => cycle.efficiency.map_or(Cell::Empty, Cell::Num),
            CycleQuantity::EtaC => Cell::Num(cycle.carnot),
            CycleQuantity::Regime => Cell::Text(cycle.regime.as_str().to_string()),
        })
        .collect();
    Ok((cells, String::new()))
}

impl ResolvedSweep {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.spec.axis.column().to_string()];
        match &self.columns {
            Columns::State(qs) => h.extend(qs.iter().map(|q| q.column().to_string())),
            Columns::Cycle(qs) => h.extend(qs.iter().map(|q| q.column().to_string())),
        }
        h.push("flag".to_string());
        h
    }

    pub fn rows(&self) -> Result<Vec<Vec<Cell>>, CliError> {
        let results: Vec<Result<Vec<Cell>, CliError>> = self
            .grid
            .par_iter()
            .map(|&axis_value| {
                let (cells, flag) = match &self.columns {
                    Columns::State(qs) => state_row(&self.spec, qs, axis_value)?,
                    Columns::Cycle(qs) => cycle_row(&self.spec, qs, axis_value)?,
                };
                let mut row = Vec::with_capacity(cells.len() + 2);
                row.push(Cell::Num(axis_value));
                row.extend(cells);
                row.push(flag_cell(&flag));
                Ok(row)
            })
            .collect();
        results.into_iter().collect()
    }
}

/// Run a sweep and stream it to `out` in the requested format.
pub fn run_sweep(
    spec: SweepSpec,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let resolved = resolve(spec)?;
    let header = resolved.header();
    let rows = resolved.rows()?;
    match format {
        OutputFormat::Csv => {
            out.write_all(header.join(",").as_bytes())?;
            out.write_all(b"\n")?;
            for row in &rows {
                out.write_all(csv_line(row).as_bytes())?;
            }
        }
        OutputFormat::JsonLines => {
            for row in &rows {
                out.write_all(json_line(&header, row).as_bytes())?;
            }
        }
    }
    Ok(())
}
