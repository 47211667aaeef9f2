//! Grid-based cross-validation of the thermal state, the derivatives, and
//! the Fisher routes. The CLI crate's acceptance suite runs the same checks
//! at full scale; here the grids are the crate-level contract.

use gravcat_core::linalg::{
    anticommutator4, expm4, jacobi_eigh, mat_mul4, mat_scale4, mat_sub4, max_abs4, max_abs_diff4,
    trace4, Mat4,
};
use gravcat_core::{
    build_hamiltonian, d_rho, d_rho_fd, gibbs_state, qfim_integral, qfim_spectral, qfim_vectorized,
    sld, ModelParams, ParamTag, QfimBlock,
};

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (a.ln() + (b.ln() - a.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Normalized exp(-(H - E_min)/T) with the shift from a dense eigensolve.
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
fn spectral_state_matches_matrix_exponential_on_grid() {
    let mut worst = 0.0_f64;
    for &omega in &linspace(0.0, 3.0, 10) {
        for &gamma in &linspace(0.0, 3.0, 10) {
            for &temp in &logspace(0.05, 5.0, 10) {
                let params = ModelParams::new(omega, gamma).unwrap();
                let rho = gibbs_state(&params, temp).unwrap();
                let oracle = gibbs_by_expm(&params, temp);
                worst = worst.max(max_abs_diff4(&rho.matrix, &oracle));
            }
        }
    }
    assert!(worst <= 1e-10, "worst entrywise gap {worst:e}");
}

#[test]
fn analytic_derivatives_match_finite_differences_on_grid() {
    let mut worst = 0.0_f64;
    for &omega in &linspace(0.1, 3.0, 10) {
        for &gamma in &linspace(0.1, 3.0, 10) {
            for &temp in &linspace(0.1, 3.0, 10) {
                let params = ModelParams::new(omega, gamma).unwrap();
                for wrt in [ParamTag::Gamma, ParamTag::Omega, ParamTag::Temperature] {
                    let a = d_rho(&params, temp, wrt).unwrap();
                    let fd = d_rho_fd(&params, temp, wrt, 1e-5).unwrap();
                    worst = worst.max(max_abs_diff4(&a.matrix, &fd.matrix));
                    assert!(trace4(&a.matrix).abs() <= 1e-10);
                }
            }
        }
    }
    assert!(worst <= 1e-6, "worst analytic-vs-fd gap {worst:e}");
}

fn rel_gap(a: &QfimBlock, b: &QfimBlock) -> f64 {
    let g = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
    g(a.f11, b.f11).max(g(a.f12, b.f12)).max(g(a.f22, b.f22))
}

#[test]
fn fisher_routes_agree_on_coarse_grid() {
    let pairs = [
        (ParamTag::Gamma, ParamTag::Temperature),
        (ParamTag::Omega, ParamTag::Temperature),
        (ParamTag::Omega, ParamTag::Gamma),
    ];
    let mut compared = 0;
    for &omega in &linspace(0.2, 3.0, 5) {
        for &gamma in &linspace(0.2, 3.0, 5) {
            for &temp in &[0.4, 1.0, 2.5] {
                let params = ModelParams::new(omega, gamma).unwrap();
                for &pair in &pairs {
                    let s = qfim_spectral(&params, temp, pair).unwrap();
                    let i = qfim_integral(&params, temp, pair, None).unwrap();
                    assert!(
                        rel_gap(&s, &i) <= 1e-10,
                        "spec vs int at ({omega},{gamma},{temp})"
                    );
                    if let Ok(v) = qfim_vectorized(&params, temp, pair) {
                        assert!(
                            rel_gap(&v, &s) <= 1e-9,
                            "vec vs spec at ({omega},{gamma},{temp})"
                        );
                        compared += 1;
                    }
                }
            }
        }
    }
    assert!(
        compared > 150,
        "vectorized route compared at only {compared} points"
    );
}

#[test]
fn sld_defining_relation_on_coarse_grid() {
    for &omega in &linspace(0.2, 3.0, 5) {
        for &gamma in &linspace(0.2, 3.0, 5) {
            for &temp in &[0.4, 1.0, 2.5] {
                let params = ModelParams::new(omega, gamma).unwrap();
                let rho = gibbs_state(&params, temp).unwrap();
                for wrt in [ParamTag::Gamma, ParamTag::Omega, ParamTag::Temperature] {
                    let l = sld(&params, temp, wrt).unwrap();
                    let d = d_rho(&params, temp, wrt).unwrap();
                    let resid = mat_sub4(
                        &mat_scale4(&d.matrix, 2.0),
                        &anticommutator4(&l.matrix, &rho.matrix),
                    );
                    assert!(max_abs4(&resid) <= 1e-9);
                    let tr = trace4(&mat_mul4(&rho.matrix, &l.matrix));
                    assert!(tr.abs() <= 1e-10);
                }
            }
        }
    }
}
