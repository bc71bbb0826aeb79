//! Character 1-forms: meromorphic 1-forms with real residues realizing an
//! admissible singularity profile on the sphere.
//!
//! A form is represented by the monic polynomials of its max-side and
//! min-side pole locations plus the numerator scale. Construction solves the
//! coefficientwise numerator identity for each case; one-minimum and
//! cusp cases reduce to a triangular recurrence, the rest run damped Newton
//! with seeded restarts.

use crate::classify::{self, AngleSpec, ExtremalProfile, Role};
use crate::poly;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Numerator identity residual bound, relative to `|c|`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Same-side residues must agree, and their ratio must match lambda, to this.
pub const EQUAL_RESIDUE_TOL: f64 = 1e-8;
/// Residue-sum bound relative to the residue magnitude scale.
pub const RESIDUE_SUM_TOL: f64 = 1e-12;
/// Minimum pairwise separation of poles, and of poles from saddle points.
pub const DISTINCT_ROOT_TOL: f64 = 1e-6;
/// Newton restart budget.
pub const MAX_RESTARTS: u32 = 32;

fn c_re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Point on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

/// Simple pole of the form, with its prescribed real residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub location: SpherePoint,
    pub residue: f64,
    /// Side of the curvature range the pole sits on (`Max`, `Min`, `Cusp`).
    pub side: Role,
    /// Cone-angle factor: 1 at smooth extrema, `alpha`/`beta` at singular ones.
    pub theta: f64,
}

/// Zero of the form (a saddle point of the curvature).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub location: Complex64,
    pub order: u32,
}

/// Gauge fixing for the solve: one pinned min-side pole plus the product of
/// the max-side pole locations. (When no finite min-side pole exists the pin
/// applies to the singular minimum.)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeSpec {
    pub q_pin: Complex64,
    pub p_product: Complex64,
}

impl Default for GaugeSpec {
    fn default() -> Self {
        GaugeSpec {
            q_pin: c_re(-1.0),
            p_product: c_re(2.0),
        }
    }
}

/// A constructed (or user-supplied) character 1-form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneFormModel {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub i1: u32,
    pub i2: u32,
    pub role1: Role,
    pub role2: Role,
    pub case_label: String,
    pub lambda: Option<f64>,
    pub sigma: f64,
    /// Cusp-regime scale (the minimum curvature value); `None` when conical.
    pub mu: Option<f64>,
    /// Max-side finite pole locations; a singular extremal pole comes last.
    pub p_roots: Vec<Complex64>,
    /// Min-side finite pole locations; a singular extremal pole comes last.
    pub q_roots: Vec<Complex64>,
    /// Location of the singular extremal pole, when the profile has one.
    pub singular_root: Option<Complex64>,
    pub zeros: Vec<Zero>,
    pub poles: Vec<Pole>,
    /// Numerator identity constant (the finite-pole residue for footballs).
    pub c: Complex64,
    pub gauge: GaugeSpec,
    pub seed: u64,
    pub residual: f64,
}

impl OneFormModel {
    /// Monic polynomial over the max-side finite poles.
    pub fn p_coeffs(&self) -> Vec<Complex64> {
        poly::from_roots(&self.p_roots)
    }

    /// Monic polynomial over the min-side finite poles.
    pub fn q_coeffs(&self) -> Vec<Complex64> {
        poly::from_roots(&self.q_roots)
    }

    /// Finite poles with residues, in `poles` order.
    pub fn finite_poles(&self) -> Vec<(Complex64, f64)> {
        self.poles
            .iter()
            .filter_map(|p| match p.location {
                SpherePoint::Finite(z) => Some((z, p.residue)),
                SpherePoint::Infinity => None,
            })
            .collect()
    }

    /// Residue at infinity, when the form has a pole there.
    pub fn infinity_residue(&self) -> Option<f64> {
        self.poles.iter().find_map(|p| match p.location {
            SpherePoint::Infinity => Some(p.residue),
            SpherePoint::Finite(_) => None,
        })
    }

    /// The rational coefficient function `w(z)` with `omega = w(z) dz`,
    /// evaluated by exact partial fractions over the finite poles.
    pub fn w_at(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, r) in self.finite_poles() {
            acc += c_re(r) / (z - p);
        }
        acc
    }

    /// Whether the profile carries a saddle point (a zero of the form).
    pub fn has_saddle(&self) -> bool {
        self.role1 == Role::Saddle || self.role2 == Role::Saddle
    }
}

/// Construction failures.
#[derive(Debug, Clone, PartialEq)]
pub enum OneFormError {
    InvalidProfile(String),
    /// Angle exactly 1: the form degenerates to the smooth sphere.
    NonSingular,
    NoConvergence { best_residual: f64 },
    DegenerateSolution { min_separation: f64 },
}

impl fmt::Display for OneFormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneFormError::InvalidProfile(msg) => write!(f, "invalid-profile: {msg}"),
            OneFormError::NonSingular => {
                write!(f, "non-singular: angle 1 gives the smooth sphere")
            }
            OneFormError::NoConvergence { best_residual } => {
                write!(f, "no-convergence: best residual {best_residual:.3e}")
            }
            OneFormError::DegenerateSolution { min_separation } => {
                write!(f, "degenerate-solution: pole separation {min_separation:.3e}")
            }
        }
    }
}

impl std::error::Error for OneFormError {}

/// Residue ratio forced by the residue-sum identity for the profile.
///
/// # Errors
/// `InvalidProfile` when the min-side residue count vanishes (cusp profiles,
/// whose ratio degenerates, and malformed inputs).
pub fn lambda_of(profile: &ExtremalProfile, angles: &AngleSpec) -> Result<f64, OneFormError> {
    check_profile_angles(profile, angles)?;
    if profile.has_cusp() {
        return Err(OneFormError::InvalidProfile(
            "cusp profile: residue ratio degenerates".to_string(),
        ));
    }
    let (i1, i2) = (f64::from(profile.i1), f64::from(profile.i2));
    let max_side;
    let min_side;
    match (profile.angle_of_role(Role::Max), profile.angle_of_role(Role::Min)) {
        (Some(a), Some(b)) => {
            max_side = a;
            min_side = b;
        }
        (Some(a), None) => {
            max_side = i1 + a;
            min_side = i2;
        }
        (None, Some(b)) => {
            max_side = i1;
            min_side = i2 + b;
        }
        (None, None) => {
            max_side = i1;
            min_side = i2;
        }
    }
    if min_side <= 0.0 || max_side <= 0.0 {
        return Err(OneFormError::InvalidProfile(format!(
            "degenerate residue counts: max side {max_side}, min side {min_side}"
        )));
    }
    Ok(-max_side / min_side)
}

/// Default conical normalization: the maximum curvature value is 1 and the
/// minimum follows from the residue ratio.
pub fn curvature_bounds_for(lambda: f64) -> (f64, f64) {
    (1.0, -(lambda + 2.0) / (2.0 * lambda + 1.0))
}

/// Smooth max-side residue for curvature bounds `(k1, k2)`.
pub fn sigma_for(k1: f64, k2: f64) -> f64 {
    -3.0 / ((k1 - k2) * (k2 + 2.0 * k1))
}

/// One-form of the two-extremal-point (football) metric with a conical
/// singularity of angle `2*pi*alpha` at infinity: a simple pole at 0 and one
/// at infinity. For `alpha > 1` the singularity is the maximum (finite-pole
/// residue `-sigma*alpha`); for `alpha < 1` it is the minimum (finite-pole
/// residue `sigma`).
pub fn football_form(alpha: f64, sigma: f64) -> Result<OneFormModel, OneFormError> {
    if alpha <= 0.0 {
        return Err(OneFormError::InvalidProfile(format!(
            "football angle must be positive, got {alpha}"
        )));
    }
    if (alpha - 1.0).abs() <= classify::INTEGER_ANGLE_TOL {
        return Err(OneFormError::NonSingular);
    }
    let origin = SpherePoint::Finite(Complex64::new(0.0, 0.0));
    let (lambda, poles, role1, p_roots, q_roots) = if alpha > 1.0 {
        // Singular maximum at infinity; the smooth minimum sits at 0.
        let lambda = -alpha;
        let poles = vec![
            Pole {
                location: origin,
                residue: sigma * lambda,
                side: Role::Min,
                theta: 1.0,
            },
            Pole {
                location: SpherePoint::Infinity,
                residue: sigma * alpha,
                side: Role::Max,
                theta: alpha,
            },
        ];
        (lambda, poles, Role::Max, vec![], vec![Complex64::new(0.0, 0.0)])
    } else {
        // Singular minimum at infinity; the smooth maximum sits at 0.
        let lambda = -1.0 / alpha;
        let poles = vec![
            Pole {
                location: origin,
                residue: sigma,
                side: Role::Max,
                theta: 1.0,
            },
            Pole {
                location: SpherePoint::Infinity,
                residue: sigma * lambda * alpha,
                side: Role::Min,
                theta: alpha,
            },
        ];
        (lambda, poles, Role::Min, vec![Complex64::new(0.0, 0.0)], vec![])
    };
    let c = c_re(poles[0].residue);
    Ok(OneFormModel {
        alpha,
        beta: None,
        i1: u32::from(alpha <= 1.0),
        i2: u32::from(alpha > 1.0),
        role1,
        role2: Role::Absent,
        case_label: "1.5(1)".to_string(),
        lambda: Some(lambda),
        sigma,
        mu: None,
        p_roots,
        q_roots,
        singular_root: None,
        zeros: vec![],
        poles,
        c,
        gauge: GaugeSpec::default(),
        seed: 0,
        residual: 0.0,
    })
}

/// Football with a cusp: conical maximum of angle `2*pi*alpha` at 0, cusp at
/// infinity. `mu < 0` is the minimum curvature value; the finite-pole residue
/// is `-alpha/(3 mu^2)`.
pub fn cusp_football_form(alpha: f64, mu: f64) -> Result<OneFormModel, OneFormError> {
    if alpha <= 0.0 || mu >= 0.0 {
        return Err(OneFormError::InvalidProfile(format!(
            "cusp football needs alpha > 0 and mu < 0, got alpha {alpha}, mu {mu}"
        )));
    }
    if (alpha - 1.0).abs() <= classify::INTEGER_ANGLE_TOL {
        return Err(OneFormError::NonSingular);
    }
    let sigma = -1.0 / (3.0 * mu * mu);
    let r0 = sigma * alpha;
    let poles = vec![
        Pole {
            location: SpherePoint::Finite(Complex64::new(0.0, 0.0)),
            residue: r0,
            side: Role::Max,
            theta: alpha,
        },
        Pole {
            location: SpherePoint::Infinity,
            residue: -r0,
            side: Role::Cusp,
            theta: 0.0,
        },
    ];
    Ok(OneFormModel {
        alpha,
        beta: Some(0.0),
        i1: 0,
        i2: 0,
        role1: Role::Max,
        role2: Role::Cusp,
        case_label: "1.6(cusp-max)".to_string(),
        lambda: None,
        sigma,
        mu: Some(mu),
        p_roots: vec![Complex64::new(0.0, 0.0)],
        q_roots: vec![],
        singular_root: Some(Complex64::new(0.0, 0.0)),
        zeros: vec![],
        poles,
        c: c_re(r0),
        gauge: GaugeSpec::default(),
        seed: 0,
        residual: 0.0,
    })
}

/// Internal case discriminant for saddle solves.
#[derive(Debug, Clone, Copy, PartialEq)]
enum SaddleCase {
    /// One saddle, all extrema smooth: `I1 + I2 = alpha + 1`.
    Pure { s_angle: u32 },
    /// Two saddles at 0 and 1: `I1 + I2 = alpha + beta`.
    TwoSaddle { s0: u32, s1: u32 },
    /// Saddle at 0 plus a singular maximum: `I1 + I2 = s_angle`.
    MaxBeta { s_angle: u32, e_angle: f64 },
    /// Saddle at 0 plus a singular minimum: `I1 + I2 = s_angle`.
    MinBeta { s_angle: u32, e_angle: f64 },
    /// Saddle at 0 plus a cusp at infinity: `I1 = s_angle`, `I2 = 0`.
    CuspSaddle { s_angle: u32 },
}

fn int_angle(x: f64, what: &str) -> Result<u32, OneFormError> {
    classify::as_integer(x)
        .ok_or_else(|| OneFormError::InvalidProfile(format!("{what} angle {x} must be an integer")))
}

fn check_profile_angles(
    profile: &ExtremalProfile,
    angles: &AngleSpec,
) -> Result<(), OneFormError> {
    let ok = (profile.alpha - angles.alpha).abs() <= classify::INTEGER_ANGLE_TOL
        && match (profile.beta, angles.beta) {
            (None, None) => true,
            (Some(pb), Some(ab)) => (pb - ab).abs() <= classify::INTEGER_ANGLE_TOL,
            _ => false,
        };
    if ok {
        Ok(())
    } else {
        Err(OneFormError::InvalidProfile(
            "profile angles disagree with the prescription".to_string(),
        ))
    }
}

/// Checks the profile against the classification for its angles.
fn require_admissible(profile: &ExtremalProfile, angles: &AngleSpec) -> Result<(), OneFormError> {
    let listed = match angles.beta {
        None => classify::classify_one(angles.alpha),
        Some(b) => classify::classify_two(angles.alpha, b),
    }
    .map_err(|e| OneFormError::InvalidProfile(e.to_string()))?;
    let hit = listed.iter().any(|p| {
        p.i1 == profile.i1
            && p.i2 == profile.i2
            && p.role1 == profile.role1
            && p.role2 == profile.role2
    });
    if hit {
        Ok(())
    } else {
        Err(OneFormError::InvalidProfile(format!(
            "profile (i1={}, i2={}, roles {}/{}) is not admissible for these angles",
            profile.i1, profile.i2, profile.role1, profile.role2
        )))
    }
}

fn saddle_case(profile: &ExtremalProfile) -> Result<SaddleCase, OneFormError> {
    let roles = (profile.role1, profile.role2);
    match roles {
        (Role::Saddle, Role::Absent) => Ok(SaddleCase::Pure {
            s_angle: int_angle(profile.alpha, "saddle")?,
        }),
        (Role::Saddle, Role::Saddle) => Ok(SaddleCase::TwoSaddle {
            s0: int_angle(profile.alpha, "saddle")?,
            s1: int_angle(profile.beta.unwrap_or(f64::NAN), "saddle")?,
        }),
        (Role::Saddle, Role::Max) | (Role::Max, Role::Saddle) => {
            let (s, e) = split_angles(profile, Role::Max)?;
            Ok(SaddleCase::MaxBeta {
                s_angle: s,
                e_angle: e,
            })
        }
        (Role::Saddle, Role::Min) | (Role::Min, Role::Saddle) => {
            let (s, e) = split_angles(profile, Role::Min)?;
            Ok(SaddleCase::MinBeta {
                s_angle: s,
                e_angle: e,
            })
        }
        (Role::Saddle, Role::Cusp) | (Role::Cusp, Role::Saddle) => {
            let (s, _) = split_angles(profile, Role::Cusp)?;
            Ok(SaddleCase::CuspSaddle { s_angle: s })
        }
        _ => Err(OneFormError::InvalidProfile(format!(
            "profile has no saddle (roles {}/{}); use the football constructors",
            profile.role1, profile.role2
        ))),
    }
}

fn split_angles(profile: &ExtremalProfile, partner: Role) -> Result<(u32, f64), OneFormError> {
    let s_angle = profile
        .angle_of_role(Role::Saddle)
        .ok_or_else(|| OneFormError::InvalidProfile("missing saddle angle".to_string()))?;
    let e_angle = profile
        .angle_of_role(partner)
        .ok_or_else(|| OneFormError::InvalidProfile("missing partner angle".to_string()))?;
    Ok((int_angle(s_angle, "saddle")?, e_angle))
}

/// Numerator target `T(z)` for a case: `z^(s0-1)` or `z^(s0-1) (z-1)^(s1-1)`.
fn target_poly(s0: u32, s1: Option<u32>) -> Vec<Complex64> {
    let mut t = vec![Complex64::new(0.0, 0.0); (s0 - 1) as usize];
    t.push(c_re(1.0));
    if let Some(s1) = s1 {
        let shifted = poly::from_roots(&vec![c_re(1.0); (s1 - 1) as usize]);
        t = poly::mul(&t, &shifted);
    }
    t
}

/// Solves `P'(z - b) - m P = c T` for monic `P` of degree `m` with
/// `P(0) = p0`, by the downward coefficient recurrence; returns `(P, c)`.
fn linear_pole_solve(
    m: u32,
    b: Complex64,
    t: &[Complex64],
    p0: Complex64,
) -> Result<(Vec<Complex64>, Complex64), OneFormError> {
    let m_us = m as usize;
    debug_assert!(t.len() <= m_us);
    // w solves the recurrence with c = 1; the solution is P = (z-b)^m + c w.
    let mut w = vec![Complex64::new(0.0, 0.0); m_us + 1];
    for k in (0..m_us).rev() {
        let kf = k as f64;
        w[k] = (b * c_re(kf + 1.0) * w[k + 1] + poly::coeff(t, k)) / c_re(kf - f64::from(m));
    }
    if w[0].norm() < 1e-14 {
        return Err(OneFormError::NoConvergence {
            best_residual: f64::INFINITY,
        });
    }
    let base = poly::from_roots(&vec![b; m_us]);
    let c = (p0 - base[0]) / w[0];
    let p = poly::add_scaled(&base, c, &w);
    Ok((p, c))
}

/// Per-case numerator polynomial from the pole polynomials. `beta` is unused
/// for pure-saddle cases.
fn case_numerator(case: &CasePolys) -> Vec<Complex64> {
    match case {
        CasePolys::Saddle { p, q, i1, i2 } => {
            let n1 = poly::mul(&poly::derivative(p), q);
            let n2 = poly::mul(p, &poly::derivative(q));
            poly::add_scaled(
                &n1.iter().map(|&x| x * c_re(*i2)).collect::<Vec<_>>(),
                c_re(-*i1),
                &n2,
            )
        }
        CasePolys::MaxBeta { a, s, q, i1, i2, beta } => {
            let asq = poly::mul(&poly::mul(&poly::derivative(a), s), q);
            let aq = poly::mul(a, q);
            let asq2 = poly::mul(&poly::mul(a, s), &poly::derivative(q));
            let mut n: Vec<Complex64> = asq.iter().map(|&x| x * c_re(*i2)).collect();
            n = poly::add_scaled(&n, c_re(i2 * beta), &aq);
            poly::add_scaled(&n, c_re(-(i1 + beta)), &asq2)
        }
        CasePolys::MinBeta { a, t, q, i1, i2, beta } => {
            let aqt = poly::mul(&poly::mul(&poly::derivative(a), q), t);
            let aq = poly::mul(a, q);
            let aq2t = poly::mul(&poly::mul(a, &poly::derivative(q)), t);
            let mut n: Vec<Complex64> = aqt.iter().map(|&x| x * c_re(i2 + beta)).collect();
            n = poly::add_scaled(&n, c_re(-i1 * beta), &aq);
            poly::add_scaled(&n, c_re(-*i1), &aq2t)
        }
    }
}

enum CasePolys {
    Saddle {
        p: Vec<Complex64>,
        q: Vec<Complex64>,
        i1: f64,
        i2: f64,
    },
    MaxBeta {
        a: Vec<Complex64>,
        s: Vec<Complex64>,
        q: Vec<Complex64>,
        i1: f64,
        i2: f64,
        beta: f64,
    },
    MinBeta {
        a: Vec<Complex64>,
        t: Vec<Complex64>,
        q: Vec<Complex64>,
        i1: f64,
        i2: f64,
        beta: f64,
    },
}

/// Square Newton system for one construction case.
struct NewtonSystem {
    case: SaddleCase,
    i1: usize,
    i2: usize,
    beta: f64,
    t: Vec<Complex64>,
    p0_fixed: Complex64,
    q_pin: Complex64,
    p_product: Complex64,
}

impl NewtonSystem {
    fn unknown_count(&self) -> usize {
        match self.case {
            SaddleCase::Pure { .. } | SaddleCase::TwoSaddle { .. } => self.i1 - 1 + self.i2 - 1,
            SaddleCase::MaxBeta { .. } => self.i1 + 1 + self.i2 - 1,
            SaddleCase::MinBeta { .. } => self.i1 - 1 + 1 + self.i2 - 1,
            SaddleCase::CuspSaddle { .. } => 0,
        }
    }

    fn equation_count(&self) -> usize {
        let dt = self.t.len() - 1;
        match self.case {
            SaddleCase::MaxBeta { .. } => dt + 1,
            _ => dt,
        }
    }

    /// Monic `z^j`-basis polynomial of the pinned-factor family
    /// `(z - q_pin) z^j`.
    fn q_basis(&self, j: usize) -> Vec<Complex64> {
        let mut e = vec![Complex64::new(0.0, 0.0); j + 2];
        e[j] = -self.q_pin;
        e[j + 1] = c_re(1.0);
        e
    }

    fn unpack(&self, x: &[Complex64]) -> CasePolys {
        let (i1f, i2f) = (self.i1 as f64, self.i2 as f64);
        match self.case {
            SaddleCase::Pure { .. } | SaddleCase::TwoSaddle { .. } => {
                let mut p = vec![Complex64::new(0.0, 0.0); self.i1 + 1];
                p[0] = self.p0_fixed;
                p[1..self.i1].copy_from_slice(&x[..self.i1 - 1]);
                p[self.i1] = c_re(1.0);
                let mut qt = vec![Complex64::new(0.0, 0.0); self.i2];
                qt[..self.i2 - 1].copy_from_slice(&x[self.i1 - 1..]);
                qt[self.i2 - 1] = c_re(1.0);
                let q = poly::mul(&[-self.q_pin, c_re(1.0)], &qt);
                CasePolys::Saddle {
                    p,
                    q,
                    i1: i1f,
                    i2: i2f,
                }
            }
            SaddleCase::MaxBeta { .. } => {
                let mut a = vec![Complex64::new(0.0, 0.0); self.i1 + 1];
                a[..self.i1].copy_from_slice(&x[..self.i1]);
                a[self.i1] = c_re(1.0);
                let astar = x[self.i1];
                let s = vec![-astar, c_re(1.0)];
                let mut qt = vec![Complex64::new(0.0, 0.0); self.i2];
                qt[..self.i2 - 1].copy_from_slice(&x[self.i1 + 1..]);
                qt[self.i2 - 1] = c_re(1.0);
                let q = poly::mul(&[-self.q_pin, c_re(1.0)], &qt);
                CasePolys::MaxBeta {
                    a,
                    s,
                    q,
                    i1: i1f,
                    i2: i2f,
                    beta: self.beta,
                }
            }
            SaddleCase::MinBeta { .. } => {
                let mut a = vec![Complex64::new(0.0, 0.0); self.i1 + 1];
                a[0] = self.p0_fixed;
                a[1..self.i1].copy_from_slice(&x[..self.i1 - 1]);
                a[self.i1] = c_re(1.0);
                let bstar = x[self.i1 - 1];
                let t = vec![-bstar, c_re(1.0)];
                let mut qt = vec![Complex64::new(0.0, 0.0); self.i2];
                qt[..self.i2 - 1].copy_from_slice(&x[self.i1..]);
                qt[self.i2 - 1] = c_re(1.0);
                let q = poly::mul(&[-self.q_pin, c_re(1.0)], &qt);
                CasePolys::MinBeta {
                    a,
                    t,
                    q,
                    i1: i1f,
                    i2: i2f,
                    beta: self.beta,
                }
            }
            SaddleCase::CuspSaddle { .. } => unreachable!("cusp saddle is closed-form"),
        }
    }

    /// Residual vector and the identity constant `c`.
    fn residual(&self, x: &[Complex64]) -> (Vec<Complex64>, Complex64) {
        let polys = self.unpack(x);
        let n = case_numerator(&polys);
        let dt = self.t.len() - 1;
        let c = poly::coeff(&n, dt);
        let mut r: Vec<Complex64> = (0..dt).map(|k| poly::coeff(&n, k) - c * self.t[k]).collect();
        if let SaddleCase::MaxBeta { .. } = self.case {
            if let CasePolys::MaxBeta { a, s, .. } = &polys {
                let sign = if self.i1 % 2 == 0 { 1.0 } else { -1.0 };
                let astar = -s[0];
                r.push(c_re(sign) * a[0] * astar - self.p_product);
            }
        }
        (r, c)
    }

    /// Exact Jacobian column for unknown `j`: the derivative of the numerator
    /// polynomial in direction `j`, folded through the `c` elimination.
    fn jacobian(&self, x: &[Complex64]) -> Vec<Complex64> {
        let polys = self.unpack(x);
        let dt = self.t.len() - 1;
        let rows = self.equation_count();
        let cols = self.unknown_count();
        let mut jac = vec![Complex64::new(0.0, 0.0); rows * cols];
        let set_col = |col: usize, dn: &[Complex64], extra_row: Complex64, jac: &mut Vec<Complex64>| {
            let dc = poly::coeff(dn, dt);
            for k in 0..dt {
                jac[k * cols + col] = poly::coeff(dn, k) - dc * self.t[k];
            }
            if rows > dt {
                jac[dt * cols + col] = extra_row;
            }
        };
        match &polys {
            CasePolys::Saddle { p, q, i1, i2 } => {
                let dq = poly::derivative(q);
                for j in 1..self.i1 {
                    // dP = z^j.
                    let mut zj = vec![Complex64::new(0.0, 0.0); j + 1];
                    zj[j] = c_re(1.0);
                    let dzj = poly::derivative(&zj);
                    let dn = poly::add_scaled(
                        &poly::mul(&dzj, q).iter().map(|&v| v * c_re(*i2)).collect::<Vec<_>>(),
                        c_re(-*i1),
                        &poly::mul(&zj, &dq),
                    );
                    set_col(j - 1, &dn, Complex64::new(0.0, 0.0), &mut jac);
                }
                let dp = poly::derivative(p);
                for j in 0..self.i2 - 1 {
                    let e = self.q_basis(j);
                    let de = poly::derivative(&e);
                    let dn = poly::add_scaled(
                        &poly::mul(&dp, &e).iter().map(|&v| v * c_re(*i2)).collect::<Vec<_>>(),
                        c_re(-*i1),
                        &poly::mul(p, &de),
                    );
                    set_col(self.i1 - 1 + j, &dn, Complex64::new(0.0, 0.0), &mut jac);
                }
            }
            CasePolys::MaxBeta { a, s, q, i1, i2, beta } => {
                let da = poly::derivative(a);
                let dq = poly::derivative(q);
                let sq = poly::mul(s, q);
                let sdq = poly::mul(s, &dq);
                let sign = if self.i1 % 2 == 0 { 1.0 } else { -1.0 };
                let astar = -s[0];
                for j in 0..self.i1 {
                    let mut zj = vec![Complex64::new(0.0, 0.0); j + 1];
                    zj[j] = c_re(1.0);
                    let dzj = poly::derivative(&zj);
                    let mut dn: Vec<Complex64> = poly::mul(&dzj, &sq)
                        .iter()
                        .map(|&v| v * c_re(*i2))
                        .collect();
                    dn = poly::add_scaled(&dn, c_re(i2 * beta), &poly::mul(&zj, q));
                    dn = poly::add_scaled(&dn, c_re(-(i1 + beta)), &poly::mul(&zj, &sdq));
                    let extra = if j == 0 { c_re(sign) * astar } else { Complex64::new(0.0, 0.0) };
                    set_col(j, &dn, extra, &mut jac);
                }
                {
                    // d a*: s varies by -1.
                    let mut dn: Vec<Complex64> = poly::mul(&da, q)
                        .iter()
                        .map(|&v| v * c_re(-*i2))
                        .collect();
                    dn = poly::add_scaled(&dn, c_re(i1 + beta), &poly::mul(a, &dq));
                    set_col(self.i1, &dn, c_re(sign) * a[0], &mut jac);
                }
                let das = poly::mul(&da, s);
                let as_ = poly::mul(a, s);
                for j in 0..self.i2 - 1 {
                    let e = self.q_basis(j);
                    let de = poly::derivative(&e);
                    let mut dn: Vec<Complex64> = poly::mul(&das, &e)
                        .iter()
                        .map(|&v| v * c_re(*i2))
                        .collect();
                    dn = poly::add_scaled(&dn, c_re(i2 * beta), &poly::mul(a, &e));
                    dn = poly::add_scaled(&dn, c_re(-(i1 + beta)), &poly::mul(&as_, &de));
                    set_col(self.i1 + 1 + j, &dn, Complex64::new(0.0, 0.0), &mut jac);
                }
            }
            CasePolys::MinBeta { a, t, q, i1, i2, beta } => {
                let da = poly::derivative(a);
                let dq = poly::derivative(q);
                let qt = poly::mul(q, t);
                let dqt = poly::mul(&dq, t);
                for j in 1..self.i1 {
                    let mut zj = vec![Complex64::new(0.0, 0.0); j + 1];
                    zj[j] = c_re(1.0);
                    let dzj = poly::derivative(&zj);
                    let mut dn: Vec<Complex64> = poly::mul(&dzj, &qt)
                        .iter()
                        .map(|&v| v * c_re(i2 + beta))
                        .collect();
                    dn = poly::add_scaled(&dn, c_re(-i1 * beta), &poly::mul(&zj, q));
                    dn = poly::add_scaled(&dn, c_re(-*i1), &poly::mul(&zj, &dqt));
                    set_col(j - 1, &dn, Complex64::new(0.0, 0.0), &mut jac);
                }
                {
                    // d b*: t varies by -1.
                    let mut dn: Vec<Complex64> = poly::mul(&da, q)
                        .iter()
                        .map(|&v| v * c_re(-(i2 + beta)))
                        .collect();
                    dn = poly::add_scaled(&dn, c_re(*i1), &poly::mul(a, &dq));
                    set_col(self.i1 - 1, &dn, Complex64::new(0.0, 0.0), &mut jac);
                }
                let dat = poly::mul(&da, t);
                let at = poly::mul(a, t);
                for j in 0..self.i2 - 1 {
                    let e = self.q_basis(j);
                    let de = poly::derivative(&e);
                    let mut dn: Vec<Complex64> = poly::mul(&dat, &e)
                        .iter()
                        .map(|&v| v * c_re(i2 + beta))
                        .collect();
                    dn = poly::add_scaled(&dn, c_re(-i1 * beta), &poly::mul(a, &e));
                    dn = poly::add_scaled(&dn, c_re(-*i1), &poly::mul(&at, &de));
                    set_col(self.i1 + j, &dn, Complex64::new(0.0, 0.0), &mut jac);
                }
            }
        }
        jac
    }
}

fn residual_norm(r: &[Complex64], c: Complex64) -> f64 {
    let scale = c.norm().max(1e-30);
    r.iter().map(|v| v.norm()).fold(0.0, f64::max) / scale
}

/// Constructs the 1-form for a saddle-bearing admissible profile.
///
/// The gauge pins one finite min-side pole at `gauge.q_pin` (the singular
/// minimum when no smooth one exists) and the product of the max-side pole
/// locations at `gauge.p_product`. The solve is deterministic in `seed`.
///
/// # Errors
/// `InvalidProfile` for non-admissible or saddle-free profiles;
/// `NoConvergence` after the restart budget; `DegenerateSolution` when every
/// converged candidate has colliding poles.
pub fn solve_saddle_form(
    profile: &ExtremalProfile,
    angles: &AngleSpec,
    gauge: &GaugeSpec,
    seed: u64,
) -> Result<OneFormModel, OneFormError> {
    check_profile_angles(profile, angles)?;
    require_admissible(profile, angles)?;
    let case = saddle_case(profile)?;
    let (i1, i2) = (profile.i1 as usize, profile.i2 as usize);

    if let SaddleCase::CuspSaddle { s_angle } = case {
        return cusp_saddle_form(profile, s_angle, gauge, seed);
    }

    let lambda = lambda_of(profile, angles)?;
    let (k1, k2) = curvature_bounds_for(lambda);
    let sigma = sigma_for(k1, k2);

    let (t, beta) = match case {
        SaddleCase::Pure { s_angle } => (target_poly(s_angle, None), 0.0),
        SaddleCase::TwoSaddle { s0, s1 } => (target_poly(s0, Some(s1)), 0.0),
        SaddleCase::MaxBeta { s_angle, e_angle } | SaddleCase::MinBeta { s_angle, e_angle } => {
            (target_poly(s_angle, None), e_angle)
        }
        SaddleCase::CuspSaddle { .. } => unreachable!(),
    };

    let sign = if i1 % 2 == 0 { 1.0 } else { -1.0 };
    let p0_fixed = c_re(sign) * gauge.p_product;

    // Closed-form paths: the identity is linear in the max-side polynomial.
    match case {
        SaddleCase::Pure { .. } | SaddleCase::TwoSaddle { .. } if i2 == 1 => {
            let (p, c) = linear_pole_solve(i1 as u32, gauge.q_pin, &t, p0_fixed)?;
            let q = vec![-gauge.q_pin, c_re(1.0)];
            return assemble_saddle_model(profile, case, gauge, seed, sigma, lambda, p, q, None, c);
        }
        SaddleCase::MinBeta { .. } if i2 == 0 => {
            // beta * (A'(z-b*) - I1 A) = c z^(alpha-1), with b* pinned.
            let (a, c_tilde) = linear_pole_solve(i1 as u32, gauge.q_pin, &t, p0_fixed)?;
            let c = c_re(beta) * c_tilde;
            let q = vec![c_re(1.0)];
            return assemble_saddle_model(
                profile,
                case,
                gauge,
                seed,
                sigma,
                lambda,
                a,
                q,
                Some(gauge.q_pin),
                c,
            );
        }
        _ => {}
    }

    let system = NewtonSystem {
        case,
        i1,
        i2,
        beta,
        t: t.clone(),
        p0_fixed,
        q_pin: gauge.q_pin,
        p_product: gauge.p_product,
    };
    debug_assert_eq!(system.unknown_count(), system.equation_count());

    let mut best_residual = f64::INFINITY;
    let mut best_separation: Option<f64> = None;
    for restart in 0..MAX_RESTARTS {
        let x0 = initial_guess(&system, gauge, seed, restart);
        if let Some((x, c, res)) = newton_run(&system, x0) {
            if res > RESIDUAL_TOL {
                best_residual = best_residual.min(res);
                continue;
            }
            let polys = system.unpack(&x);
            let (pfull, qfull, special) = match polys {
                CasePolys::Saddle { p, q, .. } => (p, q, None),
                CasePolys::MaxBeta { a, s, q, .. } => (a, q, Some(-s[0])),
                CasePolys::MinBeta { a, t, q, .. } => (a, q, Some(-t[0])),
            };
            match assemble_saddle_model(
                profile, case, gauge, seed, sigma, lambda, pfull, qfull, special, c,
            ) {
                Ok(model) => return Ok(model),
                Err(OneFormError::DegenerateSolution { min_separation }) => {
                    best_separation = Some(
                        best_separation.map_or(min_separation, |b: f64| b.max(min_separation)),
                    );
                    best_residual = best_residual.min(res);
                }
                Err(OneFormError::NoConvergence { best_residual: br }) => {
                    best_residual = best_residual.min(br.min(res));
                }
                Err(e) => return Err(e),
            }
        }
    }
    match best_separation {
        Some(min_separation) if best_residual <= RESIDUAL_TOL => {
            Err(OneFormError::DegenerateSolution { min_separation })
        }
        _ => Err(OneFormError::NoConvergence { best_residual }),
    }
}

fn sample_point(rng: &mut ChaCha8Rng, avoid_one: bool) -> Complex64 {
    loop {
        let r = rng.gen_range(0.5..2.0);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(r, th);
        if avoid_one && (z - c_re(1.0)).norm() < 0.15 {
            continue;
        }
        return z;
    }
}

fn initial_guess(system: &NewtonSystem, gauge: &GaugeSpec, seed: u64, restart: u32) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed.wrapping_add(u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    );
    let avoid_one = matches!(system.case, SaddleCase::TwoSaddle { .. });
    let qt_roots: Vec<Complex64> = (0..system.i2.saturating_sub(1))
        .map(|_| sample_point(&mut rng, avoid_one))
        .collect();
    let qt = poly::from_roots(&qt_roots);
    match system.case {
        SaddleCase::Pure { .. } | SaddleCase::TwoSaddle { .. } | SaddleCase::MinBeta { .. } => {
            let mut proots: Vec<Complex64> = (0..system.i1)
                .map(|_| sample_point(&mut rng, avoid_one))
                .collect();
            // Rescale so the product matches the gauge (constant term fixed).
            let prod: Complex64 = proots.iter().product();
            let f = (gauge.p_product / prod).powf(1.0 / system.i1 as f64);
            for r in &mut proots {
                *r *= f;
            }
            let p = poly::from_roots(&proots);
            let mut x = Vec::with_capacity(system.unknown_count());
            x.extend_from_slice(&p[1..system.i1]);
            if let SaddleCase::MinBeta { .. } = system.case {
                x.push(sample_point(&mut rng, avoid_one));
            }
            x.extend_from_slice(&qt[..system.i2.saturating_sub(1)]);
            x
        }
        SaddleCase::MaxBeta { .. } => {
            let aroots: Vec<Complex64> = (0..system.i1)
                .map(|_| sample_point(&mut rng, avoid_one))
                .collect();
            let a = poly::from_roots(&aroots);
            let mut x = Vec::with_capacity(system.unknown_count());
            x.extend_from_slice(&a[..system.i1]);
            x.push(sample_point(&mut rng, avoid_one));
            x.extend_from_slice(&qt[..system.i2.saturating_sub(1)]);
            x
        }
        SaddleCase::CuspSaddle { .. } => unreachable!(),
    }
}

/// Damped Newton iteration; returns the converged unknowns, constant, and
/// relative residual, or `None` on stagnation.
fn newton_run(
    system: &NewtonSystem,
    mut x: Vec<Complex64>,
) -> Option<(Vec<Complex64>, Complex64, f64)> {
    let n = x.len();
    if n == 0 {
        let (r, c) = system.residual(&x);
        return Some((x, c, residual_norm(&r, c)));
    }
    let (mut r, mut c) = system.residual(&x);
    let mut rn = residual_norm(&r, c);
    for _ in 0..80 {
        if rn <= 1e-13 {
            break;
        }
        let mut jac = system.jacobian(&x);
        let mut step = r.clone();
        if poly::solve_dense(&mut jac, &mut step).is_err() {
            return None;
        }
        let mut t = 1.0f64;
        let mut improved = false;
        for _ in 0..12 {
            let trial: Vec<Complex64> = x
                .iter()
                .zip(&step)
                .map(|(&xi, &si)| xi - c_re(t) * si)
                .collect();
            let (tr, tc) = system.residual(&trial);
            let trn = residual_norm(&tr, tc);
            if trn < rn {
                x = trial;
                r = tr;
                c = tc;
                rn = trn;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Some((x, c, rn))
}

/// Builds the model from solved polynomials: extracts roots, enforces the
/// separation constraints, and attaches the prescribed residue pattern.
#[allow(clippy::too_many_arguments)]
fn assemble_saddle_model(
    profile: &ExtremalProfile,
    case: SaddleCase,
    gauge: &GaugeSpec,
    seed: u64,
    sigma: f64,
    lambda: f64,
    p_smooth: Vec<Complex64>,
    q_smooth: Vec<Complex64>,
    special: Option<Complex64>,
    c: Complex64,
) -> Result<OneFormModel, OneFormError> {
    let a_roots = poly::roots(&p_smooth).map_err(|_| OneFormError::NoConvergence {
        best_residual: f64::INFINITY,
    })?;
    let q_roots_smooth = poly::roots(&q_smooth).map_err(|_| OneFormError::NoConvergence {
        best_residual: f64::INFINITY,
    })?;

    let mut p_roots = a_roots.clone();
    let mut q_roots = q_roots_smooth.clone();
    let mut singular_root = None;
    match case {
        SaddleCase::MaxBeta { .. } => {
            let astar = special.expect("max-beta carries a*");
            p_roots.push(astar);
            singular_root = Some(astar);
        }
        SaddleCase::MinBeta { .. } => {
            let bstar = special.expect("min-beta carries b*");
            q_roots.push(bstar);
            singular_root = Some(bstar);
        }
        _ => {}
    }

    // Separation: all poles pairwise, and against the saddle points.
    let mut saddle_pts = vec![Complex64::new(0.0, 0.0)];
    if let SaddleCase::TwoSaddle { .. } = case {
        saddle_pts.push(c_re(1.0));
    }
    let all: Vec<Complex64> = p_roots.iter().chain(q_roots.iter()).copied().collect();
    let mut min_sep = f64::INFINITY;
    for (i, &zi) in all.iter().enumerate() {
        for &zj in &all[i + 1..] {
            min_sep = min_sep.min((zi - zj).norm());
        }
        for &s in &saddle_pts {
            min_sep = min_sep.min((zi - s).norm());
        }
    }
    if min_sep < DISTINCT_ROOT_TOL {
        return Err(OneFormError::DegenerateSolution {
            min_separation: min_sep,
        });
    }

    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    match case {
        SaddleCase::Pure { s_angle } => {
            zeros.push(Zero {
                location: Complex64::new(0.0, 0.0),
                order: s_angle - 1,
            });
        }
        SaddleCase::TwoSaddle { s0, s1 } => {
            zeros.push(Zero {
                location: Complex64::new(0.0, 0.0),
                order: s0 - 1,
            });
            zeros.push(Zero {
                location: c_re(1.0),
                order: s1 - 1,
            });
        }
        SaddleCase::MaxBeta { s_angle, .. } | SaddleCase::MinBeta { s_angle, .. } => {
            zeros.push(Zero {
                location: Complex64::new(0.0, 0.0),
                order: s_angle - 1,
            });
        }
        SaddleCase::CuspSaddle { .. } => unreachable!(),
    }
    for &z in &a_roots {
        poles.push(Pole {
            location: SpherePoint::Finite(z),
            residue: sigma,
            side: Role::Max,
            theta: 1.0,
        });
    }
    for &z in &q_roots_smooth {
        poles.push(Pole {
            location: SpherePoint::Finite(z),
            residue: sigma * lambda,
            side: Role::Min,
            theta: 1.0,
        });
    }
    match case {
        SaddleCase::MaxBeta { e_angle, .. } => {
            poles.push(Pole {
                location: SpherePoint::Finite(singular_root.unwrap()),
                residue: sigma * e_angle,
                side: Role::Max,
                theta: e_angle,
            });
        }
        SaddleCase::MinBeta { e_angle, .. } => {
            poles.push(Pole {
                location: SpherePoint::Finite(singular_root.unwrap()),
                residue: sigma * lambda * e_angle,
                side: Role::Min,
                theta: e_angle,
            });
        }
        _ => {}
    }

    let mut model = OneFormModel {
        alpha: profile.alpha,
        beta: profile.beta,
        i1: profile.i1,
        i2: profile.i2,
        role1: profile.role1,
        role2: profile.role2,
        case_label: profile.case_label.clone(),
        lambda: Some(lambda),
        sigma,
        mu: None,
        p_roots,
        q_roots,
        singular_root,
        zeros,
        poles,
        c,
        gauge: *gauge,
        seed,
        residual: 0.0,
    };
    model.residual = numerator_residual(&model);
    if model.residual > RESIDUAL_TOL {
        return Err(OneFormError::NoConvergence {
            best_residual: model.residual,
        });
    }
    Ok(model)
}

/// Saddle of integer angle at 0, cusp at infinity: `A(z) = z^alpha + a0`
/// with the constant pinned by the max-side product gauge.
fn cusp_saddle_form(
    profile: &ExtremalProfile,
    s_angle: u32,
    gauge: &GaugeSpec,
    seed: u64,
) -> Result<OneFormModel, OneFormError> {
    let mu = -1.0;
    let sigma = -1.0 / (3.0 * mu * mu);
    let alpha = s_angle;
    let sign = if alpha % 2 == 0 { 1.0 } else { -1.0 };
    let a0 = c_re(sign) * gauge.p_product;
    let mut a = vec![Complex64::new(0.0, 0.0); alpha as usize + 1];
    a[0] = a0;
    a[alpha as usize] = c_re(1.0);
    let roots = poly::roots(&a).map_err(|_| OneFormError::NoConvergence {
        best_residual: f64::INFINITY,
    })?;
    let mut min_sep = f64::INFINITY;
    for (i, &zi) in roots.iter().enumerate() {
        min_sep = min_sep.min(zi.norm());
        for &zj in &roots[i + 1..] {
            min_sep = min_sep.min((zi - zj).norm());
        }
    }
    if min_sep < DISTINCT_ROOT_TOL {
        return Err(OneFormError::DegenerateSolution {
            min_separation: min_sep,
        });
    }
    let mut poles: Vec<Pole> = roots
        .iter()
        .map(|&z| Pole {
            location: SpherePoint::Finite(z),
            residue: sigma,
            side: Role::Max,
            theta: 1.0,
        })
        .collect();
    poles.push(Pole {
        location: SpherePoint::Infinity,
        residue: -sigma * f64::from(alpha),
        side: Role::Cusp,
        theta: 0.0,
    });
    let c = c_re(sigma * f64::from(alpha));
    let mut model = OneFormModel {
        alpha: profile.alpha,
        beta: profile.beta,
        i1: profile.i1,
        i2: profile.i2,
        role1: profile.role1,
        role2: profile.role2,
        case_label: profile.case_label.clone(),
        lambda: None,
        sigma,
        mu: Some(mu),
        p_roots: roots,
        q_roots: vec![],
        singular_root: None,
        zeros: vec![Zero {
            location: Complex64::new(0.0, 0.0),
            order: alpha - 1,
        }],
        poles,
        c,
        gauge: *gauge,
        seed,
        residual: 0.0,
    };
    model.residual = numerator_residual(&model);
    Ok(model)
}

/// Constructs the form for any admissible profile: footballs dispatch to the
/// closed-form constructors, saddle-bearing profiles to the solver.
pub fn construct(
    profile: &ExtremalProfile,
    angles: &AngleSpec,
    gauge: &GaugeSpec,
    seed: u64,
) -> Result<OneFormModel, OneFormError> {
    if profile.n_saddles() > 0 {
        return solve_saddle_form(profile, angles, gauge, seed);
    }
    check_profile_angles(profile, angles)?;
    require_admissible(profile, angles)?;
    if profile.has_cusp() {
        let conical = profile
            .angle_of_role(Role::Max)
            .ok_or_else(|| OneFormError::InvalidProfile("cusp pair without maximum".to_string()))?;
        return cusp_football_form(conical, -1.0);
    }
    match profile.role2 {
        Role::Absent => {
            let lambda = lambda_of(profile, angles)?;
            let (k1, k2) = curvature_bounds_for(lambda);
            football_form(profile.alpha, sigma_for(k1, k2))
        }
        _ => {
            // Two conical extremal points: the larger angle is the maximum;
            // the finite pole at 0 carries the smaller one.
            let lambda = lambda_of(profile, angles)?;
            let (k1, k2) = curvature_bounds_for(lambda);
            let hi = profile
                .angle_of_role(Role::Max)
                .ok_or_else(|| OneFormError::InvalidProfile("missing maximum angle".to_string()))?;
            let lo = profile
                .angle_of_role(Role::Min)
                .ok_or_else(|| OneFormError::InvalidProfile("missing minimum angle".to_string()))?;
            let sigma = sigma_for(k1, k2);
            let mut model = football_form(hi / lo, sigma)?;
            // Rescale the pattern to carry the true angles: residues are
            // sigma*theta / sigma*lambda*theta with theta the actual angles.
            model.alpha = profile.alpha;
            model.beta = profile.beta;
            model.i1 = profile.i1;
            model.i2 = profile.i2;
            model.role1 = profile.role1;
            model.role2 = profile.role2;
            model.case_label = profile.case_label.clone();
            model.lambda = Some(lambda);
            model.singular_root = Some(Complex64::new(0.0, 0.0));
            let origin = SpherePoint::Finite(Complex64::new(0.0, 0.0));
            model.poles = vec![
                Pole {
                    location: origin,
                    residue: sigma * lambda * lo,
                    side: Role::Min,
                    theta: lo,
                },
                Pole {
                    location: SpherePoint::Infinity,
                    residue: sigma * hi,
                    side: Role::Max,
                    theta: hi,
                },
            ];
            model.c = c_re(model.poles[0].residue);
            Ok(model)
        }
    }
}

/// Rebuilds the case numerator from the model's polynomials and measures the
/// worst coefficient deviation from `c * T`, relative to `|c|`.
pub fn numerator_residual(model: &OneFormModel) -> f64 {
    if !model.has_saddle() {
        return 0.0;
    }
    let (n, c, t) = model_numerator(model);
    let scale = c.norm().max(1e-30);
    let len = n.len().max(t.len());
    let mut worst = 0.0f64;
    for k in 0..len {
        let dev = (poly::coeff(&n, k) - c * poly::coeff(&t, k)).norm() / scale;
        worst = worst.max(dev);
    }
    worst
}

/// The case numerator `N`, the stored constant `c`, and the target `T`.
fn model_numerator(model: &OneFormModel) -> (Vec<Complex64>, Complex64, Vec<Complex64>) {
    let s_angle = model
        .angle_of_saddle()
        .expect("saddle models carry a saddle angle");
    let i1 = f64::from(model.i1);
    let i2 = f64::from(model.i2);
    if model.role1 == Role::Cusp || model.role2 == Role::Cusp {
        // N = -(1/(3 mu^2)) A' = c T with c = sigma*alpha.
        let a = model.p_coeffs();
        let da = poly::derivative(&a);
        let n: Vec<Complex64> = da.iter().map(|&v| v * c_re(model.sigma)).collect();
        return (n, model.c, target_poly(s_angle, None));
    }
    let two_saddle = model.role1 == Role::Saddle && model.role2 == Role::Saddle;
    if two_saddle {
        let s1 = classify::as_integer(model.beta.unwrap_or(f64::NAN)).unwrap_or(1);
        let t = target_poly(s_angle, Some(s1));
        let polys = CasePolys::Saddle {
            p: model.p_coeffs(),
            q: model.q_coeffs(),
            i1,
            i2,
        };
        return (case_numerator(&polys), model.c, t);
    }
    let t = target_poly(s_angle, None);
    let partner = if model.role1 == Role::Saddle {
        model.role2
    } else {
        model.role1
    };
    match partner {
        Role::Absent => {
            let polys = CasePolys::Saddle {
                p: model.p_coeffs(),
                q: model.q_coeffs(),
                i1,
                i2,
            };
            (case_numerator(&polys), model.c, t)
        }
        Role::Max => {
            let astar = model.singular_root.expect("singular max recorded");
            let a = poly::from_roots(&model.p_roots[..model.p_roots.len() - 1]);
            let polys = CasePolys::MaxBeta {
                a,
                s: vec![-astar, c_re(1.0)],
                q: model.q_coeffs(),
                i1,
                i2,
                beta: model.partner_angle(),
            };
            (case_numerator(&polys), model.c, t)
        }
        Role::Min => {
            let bstar = model.singular_root.expect("singular min recorded");
            let q = poly::from_roots(&model.q_roots[..model.q_roots.len() - 1]);
            let polys = CasePolys::MinBeta {
                a: model.p_coeffs(),
                t: vec![-bstar, c_re(1.0)],
                q,
                i1,
                i2,
                beta: model.partner_angle(),
            };
            (case_numerator(&polys), model.c, t)
        }
        _ => unreachable!("partner of a saddle is absent, max, min, or cusp"),
    }
}

impl OneFormModel {
    fn angle_of_saddle(&self) -> Option<u32> {
        if self.role1 == Role::Saddle {
            classify::as_integer(self.alpha)
        } else if self.role2 == Role::Saddle {
            classify::as_integer(self.beta?)
        } else {
            None
        }
    }

    fn partner_angle(&self) -> f64 {
        if self.role1 == Role::Saddle {
            self.beta.unwrap_or(0.0)
        } else {
            self.alpha
        }
    }
}

/// Outcome of checking a model against its prescribed residue pattern and
/// the defining numerator identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Per-pole (prescribed, recomputed) residues, in `poles` order; the
    /// recomputed value at infinity balances the finite ones.
    pub residues: Vec<(f64, f64)>,
    /// Largest imaginary part seen in a recomputed residue.
    pub max_imag: f64,
    /// Worst deviation of same-side smooth residues from each other.
    pub equal_residue_dev: f64,
    /// Deviation of the min/max residue ratio from lambda.
    pub lambda_dev: f64,
    /// |sum of residues| relative to the residue magnitude scale.
    pub residue_sum: f64,
    /// Coefficientwise numerator identity residual relative to |c|.
    pub numerator_residual: f64,
    /// Numerator vanishing at the saddle points to the prescribed orders.
    pub zero_orders_ok: bool,
    /// Every recomputed residue within the pattern tolerance of prescription.
    pub pattern_ok: bool,
    pub pass: bool,
}

/// Recomputes residues from the rational representation (no contours) and
/// checks the pattern, the residue sum, and the numerator identity.
pub fn verify_form(model: &OneFormModel) -> VerificationReport {
    let finite: Vec<(Complex64, f64)> = model.finite_poles();
    let mut computed: Vec<Complex64> = Vec::with_capacity(model.poles.len());
    if model.has_saddle() {
        // Residue at p: C * T(p) / D'(p), D the monic product of pole factors.
        let (_, c, t) = model_numerator(model);
        let scale_c = rational_scale(model, c);
        let locs: Vec<Complex64> = finite.iter().map(|f| f.0).collect();
        for p in &model.poles {
            match p.location {
                SpherePoint::Finite(z) => {
                    let mut dprime = Complex64::new(1.0, 0.0);
                    for &other in &locs {
                        if (other - z).norm() > 0.0 {
                            dprime *= z - other;
                        }
                    }
                    computed.push(scale_c * poly::eval(&t, z) / dprime);
                }
                SpherePoint::Infinity => {
                    let s: Complex64 = computed.iter().sum();
                    computed.push(-s);
                }
            }
        }
        // An infinity pole listed before finite ones would balance nothing;
        // our constructions always list it last.
    } else {
        // Footballs: residue at 0 is c; infinity balances it.
        computed.push(model.c);
        computed.push(-model.c);
    }

    let max_imag = computed.iter().map(|r| r.im.abs()).fold(0.0, f64::max);
    let residues: Vec<(f64, f64)> = model
        .poles
        .iter()
        .zip(&computed)
        .map(|(p, r)| (p.residue, r.re))
        .collect();

    let pattern_dev = residues
        .iter()
        .map(|(want, got)| (want - got).abs())
        .fold(0.0, f64::max)
        .max(max_imag);
    let pattern_ok = pattern_dev <= EQUAL_RESIDUE_TOL;

    // Smooth same-side agreement and the lambda ratio.
    let side_vals = |side: Role| -> Vec<f64> {
        model
            .poles
            .iter()
            .zip(&computed)
            .filter(|(p, _)| p.side == side && (p.theta - 1.0).abs() < 1e-12)
            .map(|(_, r)| r.re)
            .collect()
    };
    let maxs = side_vals(Role::Max);
    let mins = side_vals(Role::Min);
    let spread = |v: &[f64]| -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    };
    let equal_residue_dev = spread(&maxs).max(spread(&mins));
    let lambda_dev = match (model.lambda, maxs.first(), mins.first()) {
        (Some(l), Some(&ma), Some(&mi)) => (mi / ma - l).abs(),
        _ => 0.0,
    };

    let sum: f64 = computed.iter().map(|r| r.re).sum();
    let scale = computed
        .iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max)
        .max(1e-30);
    let residue_sum = sum.abs() / scale;

    let numerator_residual = numerator_residual(model);
    let zero_orders_ok = zero_orders_hold(model);

    let pass = pattern_ok
        && equal_residue_dev <= EQUAL_RESIDUE_TOL
        && lambda_dev <= EQUAL_RESIDUE_TOL
        && residue_sum <= RESIDUE_SUM_TOL
        && numerator_residual <= RESIDUAL_TOL
        && zero_orders_ok;

    VerificationReport {
        residues,
        max_imag,
        equal_residue_dev,
        lambda_dev,
        residue_sum,
        numerator_residual,
        zero_orders_ok,
        pattern_ok,
        pass,
    }
}

/// Numerator derivative vanishing at each saddle point up to its order.
fn zero_orders_hold(model: &OneFormModel) -> bool {
    if !model.has_saddle() {
        return true;
    }
    let (n, c, _) = model_numerator(model);
    let scale = c.norm().max(1e-30);
    for zero in &model.zeros {
        let mut shifted = n.clone();
        // Taylor coefficients at the zero location by repeated deflation.
        for k in 0..zero.order as usize {
            let val = poly::eval(&shifted, zero.location);
            if val.norm() / scale > EQUAL_RESIDUE_TOL {
                return false;
            }
            shifted = deflate_at(&shifted, zero.location);
            let _ = k;
        }
    }
    true
}

/// Synthetic division by `(z - z0)`, dropping the (checked) remainder.
fn deflate_at(p: &[Complex64], z0: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len().saturating_sub(1)];
    let mut carry = Complex64::new(0.0, 0.0);
    for k in (0..p.len() - 1).rev() {
        carry = p[k + 1] + carry * z0;
        out[k] = carry;
    }
    out
}

fn rational_scale(model: &OneFormModel, c: Complex64) -> Complex64 {
    if model.role1 == Role::Cusp || model.role2 == Role::Cusp {
        // omega = sigma A'/A = c T / A directly.
        return c;
    }
    let partner = if model.role1 == Role::Saddle {
        model.role2
    } else {
        model.role1
    };
    let denom = match partner {
        Role::Min => f64::from(model.i2) + model.partner_angle(),
        _ => f64::from(model.i2),
    };
    c_re(model.sigma / denom) * c
}
