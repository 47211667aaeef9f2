//! Catalogued sweep recipes ("figures"): each id expands to one sweep per
//! series value and writes `figure<id>_<series>.csv` files with the axis and
//! value columns for that family.
//!
//! The fixed parameters of every recipe are data here and are pinned by a
//! literal table in the test suite. A few ids carry a disambiguation note
//! where the family's advertised series parameter would collide with its
//! sweep axis; the note states the parameters actually used.

use std::io::Write;
use std::path::{Path, PathBuf};

use gravcat_core::ParamTag;

use crate::error::CliError;
use crate::format::OutputFormat;
use crate::sweep::{run_sweep, Axis, SweepSpec, DEFAULT_TEMP_FLOOR};

#[derive(Debug, Clone)]
pub struct FigureRecipe {
    pub id: &'static str,
    pub description: &'static str,
    /// Extra context printed alongside the parameters; empty when the recipe
    /// is unambiguous.
    pub note: &'static str,
    pub axis: Axis,
    pub range: (f64, f64, usize),
    pub pair: Option<(ParamTag, ParamTag)>,
    /// Comma-separated output columns passed to the sweep.
    pub quantities: &'static str,
    /// Caption-pinned fixed parameters (name, value).
    pub fixed: &'static [(&'static str, f64)],
    /// The parameter that labels the curves, one sweep per value.
    pub series_param: &'static str,
    pub series_values: &'static [f64],
}

const GT: (ParamTag, ParamTag) = (ParamTag::Gamma, ParamTag::Temperature);
const OT: (ParamTag, ParamTag) = (ParamTag::Omega, ParamTag::Temperature);
const OG: (ParamTag, ParamTag) = (ParamTag::Omega, ParamTag::Gamma);

const T_AXIS: (f64, f64, usize) = (0.01, 2.0, 200);
const G_AXIS: (f64, f64, usize) = (0.0, 3.0, 200);
const O_AXIS: (f64, f64, usize) = (0.0, 3.0, 200);
const WB_AXIS: (f64, f64, usize) = (0.1, 3.0, 200);
const WB_AXIS_WIDE: (f64, f64, usize) = (0.1, 5.0, 200);

const GAMMAS: &[f64] = &[0.5, 1.0, 1.5, 2.0];
const GAMMAS_SMALL: &[f64] = &[0.5, 1.0, 2.0];
const OMEGAS: &[f64] = &[1.0, 2.0, 3.0];
const TEMPS: &[f64] = &[0.1, 0.2, 0.5, 1.0];
const STATE_GAMMAS: &[f64] = &[0.5, 1.0, 2.0, 3.0];
const STATE_TEMPS: &[f64] = &[0.1, 0.5, 1.0, 2.0];
const CYCLE_GAMMAS: &[f64] = &[1.0, 2.0, 3.0];

/// All known figure recipes in id order.
#[rustfmt::skip]
pub fn registry() -> Vec<FigureRecipe> {
    let est = |id, description, pair, quantities, axis, range, fixed, series_param, series_values| {
        FigureRecipe {
            id,
            description,
            note: "",
            axis,
            range,
            pair: Some(pair),
            quantities,
            fixed,
            series_param,
            series_values,
        }
    };
    let mut v = vec![
        // pair (gamma, temp): simultaneous variances, individual variances, ratio
        est("1a", "Var(temp) simultaneous vs temp", GT, "var_sim_2", Axis::Temp, T_AXIS, &[("omega", 1.0)], "gamma", GAMMAS),
        est("1b", "Var(temp) simultaneous vs temp", GT, "var_sim_2", Axis::Temp, T_AXIS, &[("gamma", 1.5)], "omega", OMEGAS),
        est("2a", "Var(gamma) simultaneous vs gamma", GT, "var_sim_1", Axis::Gamma, G_AXIS, &[("omega", 2.0)], "temp", TEMPS),
        est("2b", "Var(gamma) simultaneous vs gamma", GT, "var_sim_1", Axis::Gamma, G_AXIS, &[("temp", 0.1)], "omega", OMEGAS),
        est("3a", "Var(temp) individual vs temp", GT, "var_ind_2", Axis::Temp, T_AXIS, &[("omega", 1.0)], "gamma", GAMMAS),
        est("3b", "Var(temp) individual vs temp", GT, "var_ind_2", Axis::Temp, T_AXIS, &[("gamma", 1.5)], "omega", OMEGAS),
        est("4a", "Var(gamma) individual vs gamma", GT, "var_ind_1", Axis::Gamma, G_AXIS, &[("omega", 2.0)], "temp", TEMPS),
        est("4b", "Var(gamma) individual vs gamma", GT, "var_ind_1", Axis::Gamma, G_AXIS, &[("temp", 0.1)], "omega", OMEGAS),
        est("5a", "variance ratio (gamma,temp) vs temp", GT, "gamma_ratio", Axis::Temp, T_AXIS, &[("omega", 1.0)], "gamma", GAMMAS),
        est("5b", "variance ratio (gamma,temp) vs temp", GT, "gamma_ratio", Axis::Temp, T_AXIS, &[("gamma", 1.5)], "omega", OMEGAS),
        est("6a", "variance ratio (gamma,temp) vs gamma", GT, "gamma_ratio", Axis::Gamma, G_AXIS, &[("omega", 2.0)], "temp", TEMPS),
        est("6b", "variance ratio (gamma,temp) vs gamma", GT, "gamma_ratio", Axis::Gamma, G_AXIS, &[("temp", 0.1)], "omega", OMEGAS),
    ];

    // cycle heats and work vs omega_b
    v.push(FigureRecipe {
        id: "7a",
        description: "cycle heats and work vs omega_b",
        note: "",
        axis: Axis::OmegaB,
        range: WB_AXIS,
        pair: None,
        quantities: "q_h,q_c,w,eta,eta_c",
        fixed: &[("omega_a", 3.0), ("t_hot", 1.0), ("t_cold", 0.5)],
        series_param: "gamma",
        series_values: &[3.0],
    });
    v.push(FigureRecipe {
        id: "7b",
        description: "cycle heats and work vs omega_b",
        note: "",
        axis: Axis::OmegaB,
        range: WB_AXIS_WIDE,
        pair: None,
        quantities: "q_h,q_c,w,eta,eta_c",
        fixed: &[("omega_a", 5.0), ("t_hot", 1.0), ("t_cold", 0.25)],
        series_param: "gamma",
        series_values: &[3.0],
    });

    // entropy and internal energy families
    let state = |id, description, quantities, axis, range, fixed, series_param, series_values| {
        FigureRecipe {
            id,
            description,
            note: "",
            axis,
            range,
            pair: None,
            quantities,
            fixed,
            series_param,
            series_values,
        }
    };
    v.extend([
        state("8a", "entropy vs temp", "entropy", Axis::Temp, T_AXIS, &[("omega", 1.0)], "gamma", STATE_GAMMAS),
        state("8b", "entropy vs gamma", "entropy", Axis::Gamma, G_AXIS, &[("omega", 1.0)], "temp", STATE_TEMPS),
        state("9a", "internal energy vs temp", "internal_energy", Axis::Temp, T_AXIS, &[("omega", 1.0)], "gamma", STATE_GAMMAS),
        state("9b", "internal energy vs gamma", "internal_energy", Axis::Gamma, G_AXIS, &[("omega", 1.0)], "temp", STATE_TEMPS),
    ]);

    // engine efficiency vs omega_b
    v.push(FigureRecipe {
        id: "10a",
        description: "engine efficiency vs omega_b",
        note: "",
        axis: Axis::OmegaB,
        range: WB_AXIS,
        pair: None,
        quantities: "eta,eta_c",
        fixed: &[("omega_a", 3.0), ("t_hot", 1.0), ("t_cold", 0.5)],
        series_param: "gamma",
        series_values: CYCLE_GAMMAS,
    });
    v.push(FigureRecipe {
        id: "10b",
        description: "engine efficiency vs omega_b",
        note: "",
        axis: Axis::OmegaB,
        range: WB_AXIS,
        pair: None,
        quantities: "eta,eta_c",
        fixed: &[("omega_a", 3.0), ("t_hot", 1.0), ("t_cold", 0.25)],
        series_param: "gamma",
        series_values: CYCLE_GAMMAS,
    });

    // pair (omega, temp)
    v.extend([
        est("11a", "Var(omega) simultaneous vs omega", OT, "var_sim_1", Axis::Omega, O_AXIS, &[("gamma", 1.0)], "temp", TEMPS),
        est("11b", "Var(omega) simultaneous vs omega", OT, "var_sim_1", Axis::Omega, O_AXIS, &[("temp", 0.1)], "gamma", GAMMAS_SMALL),
        est("12a", "Var(temp) simultaneous vs temp", OT, "var_sim_2", Axis::Temp, T_AXIS, &[("gamma", 2.0)], "omega", OMEGAS),
        est("12b", "Var(temp) simultaneous vs temp", OT, "var_sim_2", Axis::Temp, T_AXIS, &[("omega", 1.5)], "gamma", GAMMAS_SMALL),
        est("13a", "Var(omega) individual vs omega", OT, "var_ind_1", Axis::Omega, O_AXIS, &[("gamma", 1.0)], "temp", TEMPS),
        est("13b", "Var(omega) individual vs omega", OT, "var_ind_1", Axis::Omega, O_AXIS, &[("temp", 0.1)], "gamma", GAMMAS_SMALL),
        est("14a", "Var(temp) individual vs temp", OT, "var_ind_2", Axis::Temp, T_AXIS, &[("gamma", 2.0)], "omega", OMEGAS),
        est("14b", "Var(temp) individual vs temp", OT, "var_ind_2", Axis::Temp, T_AXIS, &[("omega", 1.5)], "gamma", GAMMAS_SMALL),
        est("15a", "variance ratio (omega,temp) vs omega", OT, "gamma_ratio", Axis::Omega, O_AXIS, &[("gamma", 1.0)], "temp", TEMPS),
        est("15b", "variance ratio (omega,temp) vs omega", OT, "gamma_ratio", Axis::Omega, O_AXIS, &[("temp", 0.1)], "gamma", GAMMAS_SMALL),
        est("16a", "variance ratio (omega,temp) vs temp", OT, "gamma_ratio", Axis::Temp, T_AXIS, &[("gamma", 2.0)], "omega", OMEGAS),
        est("16b", "variance ratio (omega,temp) vs temp", OT, "gamma_ratio", Axis::Temp, T_AXIS, &[("omega", 1.0)], "gamma", GAMMAS_SMALL),
    ]);

    // pair (omega, gamma)
    v.extend([
        est("17a", "Var(gamma) simultaneous vs gamma", OG, "var_sim_2", Axis::Gamma, G_AXIS, &[("temp", 0.2)], "omega", OMEGAS),
        est("17b", "Var(gamma) simultaneous vs gamma", OG, "var_sim_2", Axis::Gamma, G_AXIS, &[("omega", 2.0)], "temp", TEMPS),
        est("18a", "Var(omega) simultaneous vs omega", OG, "var_sim_1", Axis::Omega, O_AXIS, &[("temp", 0.2)], "gamma", GAMMAS_SMALL),
        est("18b", "Var(omega) simultaneous vs omega", OG, "var_sim_1", Axis::Omega, O_AXIS, &[("gamma", 2.0)], "temp", TEMPS),
        est("19a", "Var(gamma) individual vs gamma", OG, "var_ind_2", Axis::Gamma, G_AXIS, &[("temp", 0.2)], "omega", OMEGAS),
        est("19b", "Var(gamma) individual vs gamma", OG, "var_ind_2", Axis::Gamma, G_AXIS, &[("omega", 2.0)], "temp", TEMPS),
        est("20a", "Var(omega) individual vs omega", OG, "var_ind_1", Axis::Omega, O_AXIS, &[("temp", 0.2)], "gamma", GAMMAS_SMALL),
        est("20b", "Var(omega) individual vs omega", OG, "var_ind_1", Axis::Omega, O_AXIS, &[("gamma", 2.0)], "temp", TEMPS),
        est("21a", "variance ratio (omega,gamma) vs gamma", OG, "gamma_ratio", Axis::Gamma, G_AXIS, &[("temp", 0.2)], "omega", OMEGAS),
        est("21b", "variance ratio (omega,gamma) vs gamma", OG, "gamma_ratio", Axis::Gamma, G_AXIS, &[("omega", 2.0)], "temp", TEMPS),
        est("22a", "variance ratio (omega,gamma) vs omega", OG, "gamma_ratio", Axis::Omega, O_AXIS, &[("temp", 0.2)], "gamma", GAMMAS_SMALL),
        est("22b", "variance ratio (omega,gamma) vs omega", OG, "gamma_ratio", Axis::Omega, O_AXIS, &[("gamma", 2.0)], "temp", TEMPS),
    ]);

    // ids whose advertised series parameter collides with the sweep axis;
    // the curve parameter actually used is recorded here
    for recipe in &mut v {
        recipe.note = match recipe.id {
            "13b" => "series disambiguation: curves are labeled by gamma at fixed temp = 0.1",
            "15a" => "series disambiguation: curves are labeled by temp at fixed gamma = 1",
            "17b" => "series disambiguation: curves are labeled by temp at fixed omega = 2",
            "20b" => "series disambiguation: curves are labeled by temp at fixed gamma = 2",
            "22b" => "series disambiguation: curves are labeled by temp at fixed gamma = 2",
            _ => "",
        };
    }
    v
}

fn value_label(v: f64) -> String {
    if v == v.trunc() {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn apply(spec: &mut SweepSpec, name: &str, value: f64) {
    match name {
        "omega" => spec.omega = Some(value),
        "gamma" => spec.gamma = Some(value),
        "temp" => spec.temp = Some(value),
        "omega_a" => spec.omega_a = Some(value),
        "omega_b" => spec.omega_b = Some(value),
        "t_hot" => spec.t_hot = Some(value),
        "t_cold" => spec.t_cold = Some(value),
        other => unreachable!("unknown recipe parameter {other}"),
    }
}

impl FigureRecipe {
    /// One (label, sweep) per series value.
    pub fn series(&self) -> Vec<(String, SweepSpec)> {
        self.series_values
            .iter()
            .map(|&value| {
                let mut spec = SweepSpec {
                    axis: self.axis,
                    start: self.range.0,
                    stop: self.range.1,
                    points: self.range.2,
                    log: false,
                    tmin: DEFAULT_TEMP_FLOOR,
                    pair: self.pair,
                    quantities: Some(self.quantities.to_string()),
                    ..SweepSpec::default()
                };
                for &(name, v) in self.fixed {
                    apply(&mut spec, name, v);
                }
                apply(&mut spec, self.series_param, value);
                (format!("{}{}", self.series_param, value_label(value)), spec)
            })
            .collect()
    }

    pub fn parameter_summary(&self) -> String {
        let fixed: Vec<String> = self
            .fixed
            .iter()
            .map(|(n, v)| format!("{n} = {v}"))
            .collect();
        let series: Vec<String> = self.series_values.iter().map(|v| format!("{v}")).collect();
        format!(
            "axis {} in [{}, {}] x{}; fixed {}; series {} in {{{}}}",
            self.axis.column(),
            self.range.0,
            self.range.1,
            self.range.2,
            fixed.join(", "),
            self.series_param,
            series.join(", ")
        )
    }
}

pub fn find(id: &str) -> Result<FigureRecipe, CliError> {
    let all = registry();
    if let Some(r) = all.iter().find(|r| r.id == id) {
        return Ok(r.clone());
    }
    let ids: Vec<&str> = all.iter().map(|r| r.id).collect();
    Err(CliError::usage(format!(
        "unknown figure id `{id}`; known ids: {}",
        ids.join(", ")
    )))
}

/// Write every series CSV of figure `id` into `outdir`; logs one line per
/// file to `log`.
pub fn run_figure(id: &str, outdir: &Path, log: &mut dyn Write) -> Result<Vec<PathBuf>, CliError> {
    let recipe = find(id)?;
    std::fs::create_dir_all(outdir)?;
    writeln!(log, "figure {}: {}", recipe.id, recipe.description)?;
    writeln!(log, "  {}", recipe.parameter_summary())?;
    if !recipe.note.is_empty() {
        writeln!(log, "  {}", recipe.note)?;
    }
    let mut written = Vec::new();
    for (label, spec) in recipe.series() {
        let path = outdir.join(format!("figure{}_{}.csv", recipe.id, label));
        let mut file = std::fs::File::create(&path)?;
        run_sweep(spec, OutputFormat::Csv, &mut file)?;
        writeln!(log, "  wrote {}", path.display())?;
        written.push(path);
    }
    Ok(written)
}
