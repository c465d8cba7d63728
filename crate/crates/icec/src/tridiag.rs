//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! eigenvalues in a window, inverse iteration for the eigenvectors.
//!
//! The radial Hamiltonians here are tridiagonal with nonzero off-diagonals,
//! so every eigenvalue is simple and bisection plus inverse iteration is
//! robust without any reorthogonalization.

/// Number of eigenvalues of T strictly below `x` (Sturm count via the
/// shifted LDLᵀ recurrence).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let denom = if q.abs() < f64::MIN_POSITIVE.sqrt() {
            // graze past an exact pivot breakdown
            f64::MIN_POSITIVE.sqrt().copysign(if q < 0.0 { -1.0 } else { 1.0 })
        } else {
            q
        };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin bounds for the spectrum.
fn spectrum_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < n - 1 {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// All eigenvalues of the symmetric tridiagonal matrix in (lo, hi], ascending.
pub fn eigenvalues_in_window(diag: &[f64], off: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    assert_eq!(off.len() + 1, diag.len());
    let (glo, ghi) = spectrum_bounds(diag, off);
    let lo = lo.max(glo - 1.0);
    let hi = hi.min(ghi + 1.0);
    if hi <= lo {
        return Vec::new();
    }
    let k_lo = count_below(diag, off, lo);
    let k_hi = count_below(diag, off, hi);
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
    let mut out = Vec::with_capacity(k_hi.saturating_sub(k_lo));
    for k in k_lo..k_hi {
        // bisect for the (k+1)-th eigenvalue
        let (mut a, mut b) = (lo, hi);
        while b - a > 1e-14 * scale + 1e-15 * (a.abs() + b.abs()) {
            let mid = 0.5 * (a + b);
            if count_below(diag, off, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Solve (T − λ I) x = b in place by the Thomas algorithm with pivot
/// regularization; the near-singularity at an eigenvalue is exactly what
/// drives inverse iteration toward the eigenvector.
fn solve_shifted(diag: &[f64], off: &[f64], lambda: f64, b: &mut [f64]) {
    let n = diag.len();
    let eps = 1e-300;
    let mut c_prime = vec![0.0; n];
    let mut d0 = diag[0] - lambda;
    if d0.abs() < eps {
        d0 = eps;
    }
    c_prime[0] = off.first().copied().unwrap_or(0.0) / d0;
    b[0] /= d0;
    for i in 1..n {
        let m = {
            let denom = (diag[i] - lambda) - off[i - 1] * c_prime[i - 1];
            if denom.abs() < eps {
                eps.copysign(denom)
            } else {
                denom
            }
        };
        if i < n - 1 {
            c_prime[i] = off[i] / m;
        }
        b[i] = (b[i] - off[i - 1] * b[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        b[i] -= c_prime[i] * b[i + 1];
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Eigenvector of the simple eigenvalue `lambda` by inverse iteration,
/// normalized in the plain l² sense.
pub fn eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    // deterministic pseudo-random start so no eigenvector is orthogonal to it
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = (i as u64).wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        solve_shifted(diag, off, lambda, &mut v);
        normalize(&mut v);
    }
    // fix the sign convention: first substantial component positive
    if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-8) {
        if lead < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
    v
}
