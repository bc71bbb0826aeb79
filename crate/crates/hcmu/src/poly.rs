//! Dense complex polynomials and a small pivoted linear solver.
//!
//! Coefficients are stored ascending: `p[k]` multiplies `z^k`. Sizes here are
//! tiny (degrees below ~30, linear systems below ~30 unknowns), so the
//! implementations favor clarity and determinism over asymptotics.

use num_complex::Complex64;

/// Durand-Kerner iteration limit.
const ROOT_ITERS: usize = 500;
/// Root update tolerance, relative to 1 + |root|.
const ROOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum PolyError {
    /// Leading coefficient is (numerically) zero.
    ZeroLeading,
    /// Root iteration failed to settle within the iteration budget.
    RootsDiverged { last_update: f64 },
    /// Linear system is singular to working precision.
    SingularSystem,
}

impl std::fmt::Display for PolyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolyError::ZeroLeading => write!(f, "zero-leading-coefficient"),
            PolyError::RootsDiverged { last_update } => {
                write!(f, "roots-diverged: last update {last_update:.3e}")
            }
            PolyError::SingularSystem => write!(f, "singular-system"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Horner evaluation.
pub fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

pub fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    if p.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a + s*b`, padding with zeros as needed.
pub fn add_scaled(a: &[Complex64], s: Complex64, b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[..a.len()].copy_from_slice(a);
    for (o, &y) in out.iter_mut().zip(b.iter()) {
        *o += s * y;
    }
    out
}

/// Monic polynomial with the given roots.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        p = mul(&p, &[-r, Complex64::new(1.0, 0.0)]);
    }
    p
}

/// Coefficient of `z^k`, zero beyond the stored degree.
pub fn coeff(p: &[Complex64], k: usize) -> Complex64 {
    p.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
}

/// All roots, via Durand-Kerner from a fixed spiral start, polished by two
/// Newton steps per root. Deterministic for a given input.
///
/// # Errors
/// `ZeroLeading` for an identically-degenerate leading coefficient;
/// `RootsDiverged` when the simultaneous iteration fails to settle.
pub fn roots(p: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
    let n = p.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p[n];
    if lead.norm() < 1e-300 {
        return Err(PolyError::ZeroLeading);
    }
    let monic: Vec<Complex64> = p.iter().map(|&c| c / lead).collect();
    let dmonic = derivative(&monic);

    // Spiral start: distinct moduli and angles, never real-axis symmetric.
    let base = Complex64::new(0.4, 0.9);
    let mut x: Vec<Complex64> = (0..n).map(|k| base.powu(k as u32 + 1)).collect();
    let mut last_update = f64::INFINITY;
    for _ in 0..ROOT_ITERS {
        last_update = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= x[i] - x[j];
                }
            }
            if denom.norm() < 1e-300 {
                // Coincident iterates: nudge deterministically.
                x[i] += Complex64::new(1e-8, 2e-8);
                last_update = f64::INFINITY;
                continue;
            }
            let step = eval(&monic, x[i]) / denom;
            x[i] -= step;
            let rel = step.norm() / (1.0 + x[i].norm());
            if rel > last_update {
                last_update = rel;
            }
        }
        if last_update <= ROOT_TOL {
            break;
        }
    }
    if last_update > 1e-6 {
        return Err(PolyError::RootsDiverged { last_update });
    }
    for xi in &mut x {
        for _ in 0..2 {
            let d = eval(&dmonic, *xi);
            if d.norm() > 1e-300 {
                let step = eval(&monic, *xi) / d;
                if step.norm() < 1e-3 {
                    *xi -= step;
                }
            }
        }
    }
    x.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(x)
}

/// Solves the dense complex system `A x = b` in place by partial-pivoted
/// Gaussian elimination. `a` is row-major `n x n`.
///
/// # Errors
/// `SingularSystem` when a pivot falls below working precision.
pub fn solve_dense(a: &mut [Complex64], b: &mut [Complex64]) -> Result<(), PolyError> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for row in col + 1..n {
            let v = a[row * n + col].norm();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best < 1e-14 {
            return Err(PolyError::SingularSystem);
        }
        if piv != col {
            for k in col..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor.norm() == 0.0 {
                continue;
            }
            a[row * n + col] = Complex64::new(0.0, 0.0);
            for k in col + 1..n {
                let v = a[col * n + k];
                a[row * n + k] -= factor * v;
            }
            let rhs = b[col];
            b[row] -= factor * rhs;
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }
    Ok(())
}
