//! Quantum Fisher information matrix and SLD operators by three routes.
//!
//! For a parameter pair (xi_1, xi_2) the 2x2 Fisher block is computed by
//!
//! 1. the vectorized route: F_ij = 2 vec[d_i rho]^T R^{-1} vec[d_j rho] with
//!    the superoperator R = rho^T (x) I + I (x) rho, solved through a
//!    Cholesky factorization (no explicit inverse is ever formed);
//! 2. the spectral route: F_ij = 2 sum_{mn} <m|d_i rho|n><n|d_j rho|m> /
//!    (p_m + p_n) over the closed-form model eigenbasis, skipping terms with
//!    p_m + p_n below the rank floor;
//! 3. the integral route: F_ij = 2 int_0^inf Tr[e^{-rho t} d_i rho e^{-rho t}
//!    d_j rho] dt, reduced per eigenpair of a dense numerical
//!    eigendecomposition of rho (each mode integrates to 1/(p_m + p_n)), or
//!    evaluated by adaptive quadrature of the matrix-exponential integrand.
//!
//! Routes 1-3 share no eigeninformation: route 1 never diagonalizes anything,
//! route 2 uses the analytic eigenvectors, route 3 a Jacobi eigensolve of the
//! assembled density matrix (or none at all under quadrature). Their mutual
//! agreement is the crate's main correctness check.
//!
//! The factor-2 normalization is the one consistent with the single-parameter
//! reduction F = Tr(rho L^2) and with the spectral form; the tests pin this.
//!
//! The SLD operator solves 2 d rho = L rho + rho L. It has three
//! constructions of its own: the vectorized solve ([`sld`]), the spectral
//! sum ([`sld_spectral`], stable at any temperature), and a closed-form
//! X-state template ([`sld_closed_form`]) obtained by solving the 2x2 block
//! equations symbolically.

use crate::calculus::{d_rho, ParamTag};
use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, cholesky_solve, dot16, expm4, jacobi_eigh, mat_mul4, mat_scale4, trace4, Mat16, Mat4,
    Vec16, Vec4,
};
use crate::model::{eigensystem, ModelParams};
use crate::thermal::{boltzmann_weights, gibbs_state, x_state_elements, DensityMatrix};

/// Condition-number ceiling beyond which the vectorized route refuses to
/// solve rather than silently regularize.
pub const COND_LIMIT: f64 = 1e12;

/// Gibbs-weight pairs with p_m + p_n at or below this floor are treated as
/// rank-deficient and skipped in the spectral sums.
pub const WEIGHT_FLOOR: f64 = 1e-14;

/// Column-stacked vectorization: columns concatenated top to bottom, left to
/// right, so component c*4 + r holds entry (r, c).
pub fn vec4(m: &Mat4) -> Vec16 {
    let mut v = [0.0; 16];
    for c in 0..4 {
        for r in 0..4 {
            v[c * 4 + r] = m[r][c];
        }
    }
    v
}

/// Inverse of [`vec4`].
pub fn unvec4(v: &Vec16) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for c in 0..4 {
        for r in 0..4 {
            m[r][c] = v[c * 4 + r];
        }
    }
    m
}

/// The superoperator R = rho^T (x) I + I (x) rho together with its spectrum
/// and condition estimate.
#[derive(Debug, Clone)]
pub struct SuperR {
    pub matrix: Mat16,
    /// Ascending eigenvalues; exactly the pairwise sums p_m + p_n of the
    /// eigenvalues of rho.
    pub eigenvalues: [f64; 16],
    /// lambda_max / lambda_min (infinite when the smallest eigenvalue is not
    /// positive).
    pub cond: f64,
}

impl SuperR {
    pub fn new(rho: &DensityMatrix) -> SuperR {
        let r = &rho.matrix;
        let mut m = [[0.0; 16]; 16];
        for c1 in 0..4 {
            for r1 in 0..4 {
                for c2 in 0..4 {
                    for r2 in 0..4 {
                        let mut v = 0.0;
                        if r1 == r2 {
                            v += r[c2][c1]; // rho^T block factor
                        }
                        if c1 == c2 {
                            v += r[r1][r2];
                        }
                        m[c1 * 4 + r1][c2 * 4 + r2] = v;
                    }
                }
            }
        }
        let (eigenvalues, _) = jacobi_eigh(&m);
        let cond = if eigenvalues[0] > 0.0 {
            eigenvalues[15] / eigenvalues[0]
        } else {
            f64::INFINITY
        };
        SuperR {
            matrix: m,
            eigenvalues,
            cond,
        }
    }
}

/// Which computation produced a Fisher block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Vectorized,
    Spectral,
    IntegralClosedForm,
    IntegralQuadrature,
}

/// 2x2 Fisher information block for an ordered parameter pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfimBlock {
    pub pair: (ParamTag, ParamTag),
    pub f11: f64,
    pub f12: f64,
    pub f22: f64,
    pub det: f64,
    pub route: Route,
}

impl QfimBlock {
    fn new(pair: (ParamTag, ParamTag), f11: f64, f12: f64, f22: f64, route: Route) -> QfimBlock {
        QfimBlock {
            pair,
            f11,
            f12,
            f22,
            det: f11 * f22 - f12 * f12,
            route,
        }
    }
}

/// Symmetric logarithmic derivative operator for one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SldOperator {
    pub matrix: Mat4,
    pub wrt: ParamTag,
}

fn singular_state_error(params: &ModelParams, temp: f64, cond: f64) -> Error {
    // the offending eigenvalue pair of R is (m, m) for the smallest weight
    let m = match boltzmann_weights(params, temp) {
        Ok(w) => {
            let mut arg = 0;
            for i in 1..4 {
                if w[i] < w[arg] {
                    arg = i;
                }
            }
            arg
        }
        Err(_) => 0,
    };
    Error::SingularState { cond, m, n: m }
}

/// Vectorized-route Fisher block. Errors with [`Error::SingularState`] when
/// cond(R) exceeds [`COND_LIMIT`].
pub fn qfim_vectorized(
    params: &ModelParams,
    temp: f64,
    pair: (ParamTag, ParamTag),
) -> Result<QfimBlock> {
    let rho = gibbs_state(params, temp)?;
    let r = SuperR::new(&rho);
    if r.cond > COND_LIMIT {
        return Err(singular_state_error(params, temp, r.cond));
    }
    let d1 = d_rho(params, temp, pair.0)?;
    let d2 = d_rho(params, temp, pair.1)?;
    let b1 = vec4(&d1.matrix);
    let b2 = vec4(&d2.matrix);
    let l = cholesky(&r.matrix).ok_or(singular_state_error(params, temp, r.cond))?;
    let y1 = cholesky_solve(&l, &b1);
    let y2 = cholesky_solve(&l, &b2);
    Ok(QfimBlock::new(
        pair,
        2.0 * dot16(&b1, &y1),
        2.0 * dot16(&b1, &y2),
        2.0 * dot16(&b2, &y2),
        Route::Vectorized,
    ))
}

/// Project a symmetric matrix onto an orthonormal basis given as rows.
fn project(m: &Mat4, basis: &[Vec4; 4]) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += basis[i][a] * m[a][b] * basis[j][b];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

fn pair_sum_fisher(m1: &Mat4, m2: &Mat4, p: &[f64; 4]) -> (f64, f64, f64) {
    let (mut f11, mut f12, mut f22) = (0.0, 0.0, 0.0);
    for m in 0..4 {
        for n in 0..4 {
            let denom = p[m] + p[n];
            if denom <= WEIGHT_FLOOR {
                continue;
            }
            f11 += m1[m][n] * m1[n][m] / denom;
            f12 += m1[m][n] * m2[n][m] / denom;
            f22 += m2[m][n] * m2[n][m] / denom;
        }
    }
    (2.0 * f11, 2.0 * f12, 2.0 * f22)
}

/// Spectral-route Fisher block over the closed-form model eigenbasis.
pub fn qfim_spectral(
    params: &ModelParams,
    temp: f64,
    pair: (ParamTag, ParamTag),
) -> Result<QfimBlock> {
    let es = eigensystem(params);
    let p = boltzmann_weights(params, temp)?;
    let d1 = d_rho(params, temp, pair.0)?;
    let d2 = d_rho(params, temp, pair.1)?;
    let m1 = project(&d1.matrix, &es.states);
    let m2 = project(&d2.matrix, &es.states);
    let (f11, f12, f22) = pair_sum_fisher(&m1, &m2, &p);
    Ok(QfimBlock::new(pair, f11, f12, f22, Route::Spectral))
}

/// Tolerance settings for the quadrature variant of the integral route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            max_depth: 32,
        }
    }
}

/// Integral-route Fisher block.
///
/// With `quadrature = None` the integral is reduced in closed form per
/// eigenpair of a dense numerical eigendecomposition of rho (each decay mode
/// contributes 1/(p_m + p_n)). With a config, the matrix-exponential
/// integrand is integrated by adaptive Simpson quadrature instead.
pub fn qfim_integral(
    params: &ModelParams,
    temp: f64,
    pair: (ParamTag, ParamTag),
    quadrature: Option<QuadratureConfig>,
) -> Result<QfimBlock> {
    let rho = gibbs_state(params, temp)?;
    let d1 = d_rho(params, temp, pair.0)?;
    let d2 = d_rho(params, temp, pair.1)?;
    let (vals, vecs) = jacobi_eigh(&rho.matrix);

    match quadrature {
        None => {
            let mut basis = [[0.0; 4]; 4];
            for k in 0..4 {
                for r in 0..4 {
                    basis[k][r] = vecs[r][k];
                }
            }
            let m1 = project(&d1.matrix, &basis);
            let m2 = project(&d2.matrix, &basis);
            let (f11, f12, f22) = pair_sum_fisher(&m1, &m2, &vals);
            Ok(QfimBlock::new(
                pair,
                f11,
                f12,
                f22,
                Route::IntegralClosedForm,
            ))
        }
        Some(cfg) => {
            let (f11, f12, f22) =
                integral_by_quadrature(&rho.matrix, &d1.matrix, &d2.matrix, vals[0], cfg)?;
            Ok(QfimBlock::new(
                pair,
                f11,
                f12,
                f22,
                Route::IntegralQuadrature,
            ))
        }
    }
}

type Triple = [f64; 3];

fn integrand(rho: &Mat4, d1: &Mat4, d2: &Mat4, t: f64) -> Triple {
    let e = expm4(&mat_scale4(rho, -t));
    let m1 = mat_mul4(&e, d1);
    let m2 = mat_mul4(&e, d2);
    [
        2.0 * trace4(&mat_mul4(&m1, &m1)),
        2.0 * trace4(&mat_mul4(&m1, &m2)),
        2.0 * trace4(&mat_mul4(&m2, &m2)),
    ]
}

fn tri_add(a: &Triple, b: &Triple) -> Triple {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn simpson(fa: &Triple, fm: &Triple, fb: &Triple, h: f64) -> Triple {
    let mut s = [0.0; 3];
    for i in 0..3 {
        s[i] = (fa[i] + 4.0 * fm[i] + fb[i]) * h / 6.0;
    }
    s
}

struct QuadState<'a> {
    rho: &'a Mat4,
    d1: &'a Mat4,
    d2: &'a Mat4,
    max_depth: u32,
    achieved: Triple,
}

fn adaptive(
    st: &mut QuadState<'_>,
    a: f64,
    b: f64,
    fa: Triple,
    fm: Triple,
    fb: Triple,
    whole: Triple,
    tol: Triple,
    depth: u32,
) -> Triple {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = integrand(st.rho, st.d1, st.d2, lm);
    let frm = integrand(st.rho, st.d1, st.d2, rm);
    let left = simpson(&fa, &flm, &fm, m - a);
    let right = simpson(&fm, &frm, &fb, b - m);
    let both = tri_add(&left, &right);

    let mut err = [0.0; 3];
    let mut converged = true;
    for i in 0..3 {
        err[i] = libm::fabs(both[i] - whole[i]) / 15.0;
        if err[i] > tol[i] {
            converged = false;
        }
    }
    if converged || depth >= st.max_depth {
        if depth >= st.max_depth && !converged {
            st.achieved = tri_add(&st.achieved, &err);
        }
        let mut s = [0.0; 3];
        for i in 0..3 {
            s[i] = both[i] + (both[i] - whole[i]) / 15.0;
        }
        return s;
    }
    let half = [tol[0] * 0.5, tol[1] * 0.5, tol[2] * 0.5];
    let l = adaptive(st, a, m, fa, flm, fm, left, half, depth + 1);
    let r = adaptive(st, m, b, fm, frm, fb, right, half, depth + 1);
    tri_add(&l, &r)
}

fn integral_by_quadrature(
    rho: &Mat4,
    d1: &Mat4,
    d2: &Mat4,
    min_weight: f64,
    cfg: QuadratureConfig,
) -> Result<(f64, f64, f64)> {
    // slowest decay mode is e^{-2 p_min t}; cut where it reaches e^{-40}
    let rate = (2.0 * min_weight).max(1e-7);
    let t_max = 40.0 / rate;

    // geometric panels [0,1], [1,2], [2,4], ... resolve the multi-scale decay
    let mut edges = [0.0; 64];
    let mut n_edges = 1;
    let mut t = 1.0_f64.min(t_max);
    loop {
        edges[n_edges] = t.min(t_max);
        n_edges += 1;
        if t >= t_max || n_edges == 64 {
            edges[n_edges - 1] = t_max;
            break;
        }
        t *= 2.0;
    }

    // first pass: per-panel Simpson gives the magnitude used for the budget
    let mut scale: f64 = 1e-300;
    for k in 1..n_edges {
        let (a, b) = (edges[k - 1], edges[k]);
        let fa = integrand(rho, d1, d2, a);
        let fm = integrand(rho, d1, d2, 0.5 * (a + b));
        let fb = integrand(rho, d1, d2, b);
        let s = simpson(&fa, &fm, &fb, b - a);
        for v in &s {
            scale = scale.max(libm::fabs(*v));
        }
    }

    let panel_tol = cfg.rel_tol * scale / (n_edges - 1) as f64;
    let tol = [panel_tol; 3];
    let mut st = QuadState {
        rho,
        d1,
        d2,
        max_depth: cfg.max_depth,
        achieved: [0.0; 3],
    };
    let mut out = [0.0; 3];
    for k in 1..n_edges {
        let (a, b) = (edges[k - 1], edges[k]);
        let fa = integrand(rho, d1, d2, a);
        let fm = integrand(rho, d1, d2, 0.5 * (a + b));
        let fb = integrand(rho, d1, d2, b);
        let whole = simpson(&fa, &fm, &fb, b - a);
        let part = adaptive(&mut st, a, b, fa, fm, fb, whole, tol, 0);
        out = tri_add(&out, &part);
    }

    let worst = st.achieved[0].max(st.achieved[1]).max(st.achieved[2]);
    if worst > cfg.rel_tol * scale {
        return Err(Error::QuadratureAccuracy {
            achieved: worst / scale,
            requested: cfg.rel_tol,
        });
    }
    Ok((out[0], out[1], out[2]))
}

/// SLD via the vectorized solve L = unvec(2 R^{-1} vec[d rho]).
pub fn sld(params: &ModelParams, temp: f64, wrt: ParamTag) -> Result<SldOperator> {
    let rho = gibbs_state(params, temp)?;
    let r = SuperR::new(&rho);
    if r.cond > COND_LIMIT {
        return Err(singular_state_error(params, temp, r.cond));
    }
    let d = d_rho(params, temp, wrt)?;
    let l = cholesky(&r.matrix).ok_or(singular_state_error(params, temp, r.cond))?;
    let b = vec4(&d.matrix);
    let mut y = cholesky_solve(&l, &b);
    for v in &mut y {
        *v *= 2.0;
    }
    Ok(SldOperator {
        matrix: unvec4(&y),
        wrt,
    })
}

/// SLD via the spectral sum L = 2 sum_{mn} <m|d rho|n> / (p_m + p_n)
/// |m><n| over the model eigenbasis, with rank-deficient pairs skipped.
///
/// Unlike the vectorized solve this stays well-conditioned at arbitrarily
/// low temperature: the skipped components pair vanishing weights with
/// matrix elements of d rho that vanish at the same rate.
pub fn sld_spectral(params: &ModelParams, temp: f64, wrt: ParamTag) -> Result<SldOperator> {
    let es = eigensystem(params);
    let p = boltzmann_weights(params, temp)?;
    let d = d_rho(params, temp, wrt)?;
    let m = project(&d.matrix, &es.states);
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let denom = p[a] + p[b];
            if denom <= WEIGHT_FLOOR {
                continue;
            }
            let coeff = 2.0 * m[a][b] / denom;
            for r in 0..4 {
                for c in 0..4 {
                    out[r][c] += coeff * es.states[a][r] * es.states[b][c];
                }
            }
        }
    }
    Ok(SldOperator { matrix: out, wrt })
}

/// SLD from the closed-form X-state template.
///
/// Solving 2 d rho = L rho + rho L block by block for an X-patterned rho with
/// outer block [[x, eta], [eta, y]] and middle block [[z, d], [d, z]] gives
///
/// ```text
/// L_11 = [(y(x+y) - eta^2) x' + eta^2 y' - 2 eta y eta'] / D
/// L_44 = [(x(x+y) - eta^2) y' + eta^2 x' - 2 eta x eta'] / D
/// L_14 = [2 x y eta' - eta (y x' + x y')] / D
/// L_22 = L_33 = (z z' - d d') / (z^2 - d^2)
/// L_23 = (z d' - d z') / (z^2 - d^2)
/// ```
///
/// with D = (x + y)(x y - eta^2); both denominators are positive block
/// determinants for T > 0 but cancel catastrophically once x y - eta^2
/// drops toward machine precision, so this template is a cross-check, not
/// the production route.
pub fn sld_closed_form(params: &ModelParams, temp: f64, wrt: ParamTag) -> Result<SldOperator> {
    let el = x_state_elements(params, temp)?;
    let d = d_rho(params, temp, wrt)?;
    let (dx, dz, dd, de, dy) = (
        d.matrix[0][0],
        d.matrix[1][1],
        d.matrix[1][2],
        d.matrix[0][3],
        d.matrix[3][3],
    );
    let (x, z, dl, eta, y) = (el.x, el.z, el.delta, el.eta, el.y);

    let outer_den = (x + y) * (x * y - eta * eta);
    let mid_den = z * z - dl * dl;

    let l11 = ((y * (x + y) - eta * eta) * dx + eta * eta * dy - 2.0 * eta * y * de) / outer_den;
    let l44 = ((x * (x + y) - eta * eta) * dy + eta * eta * dx - 2.0 * eta * x * de) / outer_den;
    let l14 = (2.0 * x * y * de - eta * (y * dx + x * dy)) / outer_den;
    let l22 = (z * dz - dl * dd) / mid_den;
    let l23 = (z * dd - dl * dz) / mid_den;

    let mut m = [[0.0; 4]; 4];
    m[0][0] = l11;
    m[3][3] = l44;
    m[0][3] = l14;
    m[3][0] = l14;
    m[1][1] = l22;
    m[2][2] = l22;
    m[1][2] = l23;
    m[2][1] = l23;
    Ok(SldOperator { matrix: m, wrt })
}

/// Tr(rho [L_i, L_j]) as a signed real.
///
/// All operators in this model are real symmetric, so the value vanishes
/// identically up to roundoff; anything above ~1e-9 signals a numerical
/// problem upstream.
pub fn compatibility(params: &ModelParams, temp: f64, pair: (ParamTag, ParamTag)) -> Result<f64> {
    let rho = gibbs_state(params, temp)?;
    let l1 = sld(params, temp, pair.0)?;
    let l2 = sld(params, temp, pair.1)?;
    let ab = mat_mul4(&l1.matrix, &l2.matrix);
    let ba = mat_mul4(&l2.matrix, &l1.matrix);
    let mut v = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            v += rho.matrix[i][j] * (ab[j][i] - ba[j][i]);
        }
    }
    Ok(v)
}
