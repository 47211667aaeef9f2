//! Dense kernels for the small fixed-size matrices used throughout the crate.
//!
//! Everything here is plain `f64` on the stack: 4x4 for states and operators,
//! 16x16 for superoperators. The eigensolver is cyclic Jacobi (adequate and
//! robust at these sizes), the SPD solver is an unpivoted Cholesky, and the
//! matrix exponential is Padé scaling-and-squaring. No allocation, no
//! external linear-algebra dependency.

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Vec16 = [f64; 16];
pub type Mat16 = [[f64; 16]; 16];

pub const ZERO4: Mat4 = [[0.0; 4]; 4];

pub fn identity4() -> Mat4 {
    let mut m = ZERO4;
    for i in 0..4 {
        m[i][i] = 1.0;
    }
    m
}

pub fn mat_add4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = a[i][j] + b[i][j];
        }
    }
    c
}

pub fn mat_sub4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = a[i][j] - b[i][j];
        }
    }
    c
}

pub fn mat_scale4(a: &Mat4, s: f64) -> Mat4 {
    let mut c = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = a[i][j] * s;
        }
    }
    c
}

pub fn mat_mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = ZERO4;
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..4 {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn mat_vec4(a: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

pub fn trace4(a: &Mat4) -> f64 {
    a[0][0] + a[1][1] + a[2][2] + a[3][3]
}

pub fn transpose4(a: &Mat4) -> Mat4 {
    let mut c = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = a[j][i];
        }
    }
    c
}

/// v v^T outer product.
pub fn outer4(v: &Vec4) -> Mat4 {
    let mut m = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = v[i] * v[j];
        }
    }
    m
}

pub fn dot4(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn max_abs4(a: &Mat4) -> f64 {
    let mut m = 0.0;
    for row in a {
        for &v in row {
            let av = libm::fabs(v);
            if av > m {
                m = av;
            }
        }
    }
    m
}

pub fn max_abs_diff4(a: &Mat4, b: &Mat4) -> f64 {
    max_abs4(&mat_sub4(a, b))
}

pub fn anticommutator4(a: &Mat4, b: &Mat4) -> Mat4 {
    mat_add4(&mat_mul4(a, b), &mat_mul4(b, a))
}

pub fn commutator4(a: &Mat4, b: &Mat4) -> Mat4 {
    mat_sub4(&mat_mul4(a, b), &mat_mul4(b, a))
}

pub fn dot16(a: &Vec16, b: &Vec16) -> f64 {
    let mut s = 0.0;
    for i in 0..16 {
        s += a[i] * b[i];
    }
    s
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// the COLUMNS of the second result (`vecs[row][k]` is component `row` of
/// eigenvector `k`).
pub fn jacobi_eigh<const N: usize>(m: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut a = *m;
    let mut v = [[0.0; N]; N];
    for i in 0..N {
        v[i][i] = 1.0;
    }

    let mut norm_sq = 0.0;
    for i in 0..N {
        for j in 0..N {
            norm_sq += a[i][j] * a[i][j];
        }
    }
    let stop = 1e-30 * norm_sq.max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let mut off_sq = 0.0;
        for i in 0..N {
            for j in (i + 1)..N {
                off_sq += 2.0 * a[i][j] * a[i][j];
            }
        }
        if off_sq <= stop {
            break;
        }
        for p in 0..N - 1 {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;

                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..N {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut vals = [0.0; N];
    for i in 0..N {
        vals[i] = a[i][i];
    }
    // selection sort keeps eigenvectors attached to their eigenvalues
    for i in 0..N {
        let mut k = i;
        for j in (i + 1)..N {
            if vals[j] < vals[k] {
                k = j;
            }
        }
        if k != i {
            vals.swap(i, k);
            for row in v.iter_mut() {
                row.swap(i, k);
            }
        }
    }
    (vals, v)
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// or `None` when a pivot is not strictly positive.
pub fn cholesky<const N: usize>(a: &[[f64; N]; N]) -> Option<[[f64; N]; N]> {
    let mut l = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = libm::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solve (L L^T) x = b given the Cholesky factor L.
pub fn cholesky_solve<const N: usize>(l: &[[f64; N]; N], b: &[f64; N]) -> [f64; N] {
    let mut y = [0.0; N];
    for i in 0..N {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = [0.0; N];
    for i in (0..N).rev() {
        let mut s = y[i];
        for k in (i + 1)..N {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Solve A X = B for 4x4 A and B by Gaussian elimination with partial
/// pivoting. Used by the Padé step of [`expm4`].
fn solve4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = *a;
    let mut x = *b;
    for col in 0..4 {
        let mut piv = col;
        for r in (col + 1)..4 {
            if libm::fabs(m[r][col]) > libm::fabs(m[piv][col]) {
                piv = r;
            }
        }
        if piv != col {
            m.swap(col, piv);
            x.swap(col, piv);
        }
        let d = m[col][col];
        for r in 0..4 {
            if r == col {
                continue;
            }
            let f = m[r][col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..4 {
                m[r][c] -= f * m[col][c];
            }
            for c in 0..4 {
                x[r][c] -= f * x[col][c];
            }
        }
    }
    for r in 0..4 {
        let d = m[r][r];
        for c in 0..4 {
            x[r][c] /= d;
        }
    }
    x
}

/// Matrix exponential by [7/7] Padé approximation with scaling and squaring.
pub fn expm4(a: &Mat4) -> Mat4 {
    // degree-7 Padé coefficients
    const B: [f64; 8] = [
        17_297_280.0,
        8_648_640.0,
        1_995_840.0,
        277_200.0,
        25_200.0,
        1_512.0,
        56.0,
        1.0,
    ];

    let mut norm: f64 = 0.0;
    for row in a {
        let mut rs = 0.0;
        for &v in row {
            rs += libm::fabs(v);
        }
        norm = norm.max(rs);
    }

    let mut s = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 && s < 64 {
        scaled_norm *= 0.5;
        s += 1;
    }
    let scale = libm::exp2(-(s as f64));
    let x = mat_scale4(a, scale);

    let x2 = mat_mul4(&x, &x);
    let x4 = mat_mul4(&x2, &x2);
    let x6 = mat_mul4(&x2, &x4);

    // u = x (b7 x6 + b5 x4 + b3 x2 + b1 I), v = b6 x6 + b4 x4 + b2 x2 + b0 I
    let mut even = mat_scale4(&x6, B[6]);
    even = mat_add4(&even, &mat_scale4(&x4, B[4]));
    even = mat_add4(&even, &mat_scale4(&x2, B[2]));
    even = mat_add4(&even, &mat_scale4(&identity4(), B[0]));

    let mut odd = mat_scale4(&x6, B[7]);
    odd = mat_add4(&odd, &mat_scale4(&x4, B[5]));
    odd = mat_add4(&odd, &mat_scale4(&x2, B[3]));
    odd = mat_add4(&odd, &mat_scale4(&identity4(), B[1]));
    let u = mat_mul4(&x, &odd);

    // (v - u)^{-1} (v + u)
    let num = mat_add4(&even, &u);
    let den = mat_sub4(&even, &u);
    let mut e = solve4(&den, &num);

    for _ in 0..s {
        e = mat_mul4(&e, &e);
    }
    e
}
