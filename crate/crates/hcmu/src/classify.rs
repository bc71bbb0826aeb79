//! Admissible singularity configurations on the marked sphere.
//!
//! A configuration prescribes one or two singular points with cone angles
//! `2*pi*alpha` (and `2*pi*beta`), assigns each singularity a role with
//! respect to the curvature function (saddle, maximum, minimum, or cusp),
//! and counts the smooth extremal points. Admissibility is decided by the
//! residue-ratio constraint `lambda < -1` together with the divisibility
//! conditions coming from branched-cover realizability.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Tolerance for deciding whether a floating-point angle parameter is an
/// integer (selects the integer vs. non-integer classification branch).
pub const INTEGER_ANGLE_TOL: f64 = 1e-9;

/// Role of a singular point relative to the curvature function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Zero of the character form; the curvature takes an interior value.
    Saddle,
    /// Pole on the maximum side (negative residue).
    Max,
    /// Pole on the minimum side (positive residue).
    Min,
    /// Cusp point; always a minimum, with the curvature ratio degenerate.
    Cusp,
    /// Placeholder for the second slot of one-singularity configurations.
    Absent,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Saddle => "saddle",
            Role::Max => "max",
            Role::Min => "min",
            Role::Cusp => "cusp",
            Role::Absent => "absent",
        };
        f.write_str(s)
    }
}

/// Prescribed singular-angle parameters. An angle of `0` encodes a cusp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSpec {
    /// Cone angle divided by `2*pi` at the first singularity.
    pub alpha: f64,
    /// Cone angle divided by `2*pi` at the second singularity, if present.
    pub beta: Option<f64>,
}

impl AngleSpec {
    pub fn one(alpha: f64) -> Self {
        AngleSpec { alpha, beta: None }
    }

    pub fn two(alpha: f64, beta: f64) -> Self {
        AngleSpec {
            alpha,
            beta: Some(beta),
        }
    }
}

/// One admissible configuration: counts of smooth extrema, the role of each
/// singularity, and the residue ratio it forces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalProfile {
    pub alpha: f64,
    pub beta: Option<f64>,
    /// Number of smooth maximum points (singular maxima not counted).
    pub i1: u32,
    /// Number of smooth minimum points (singular minima not counted).
    pub i2: u32,
    pub role1: Role,
    pub role2: Role,
    /// Residue ratio between minimum-side and maximum-side poles; always
    /// `< -1`. `None` in the cusp regime, where the ratio degenerates.
    pub lambda: Option<f64>,
    /// Classification clause that admitted this profile, e.g. `"1.6(3-2)"`.
    pub case_label: String,
}

impl ExtremalProfile {
    /// Total number of singular points (one or two).
    pub fn n_singular(&self) -> u32 {
        if self.role2 == Role::Absent {
            1
        } else {
            2
        }
    }

    /// Number of singularities that are saddle points.
    pub fn n_saddles(&self) -> u32 {
        let mut j = 0;
        if self.role1 == Role::Saddle {
            j += 1;
        }
        if self.role2 == Role::Saddle {
            j += 1;
        }
        j
    }

    /// True if any singularity is a cusp (degenerate curvature ratio).
    pub fn has_cusp(&self) -> bool {
        self.role1 == Role::Cusp || self.role2 == Role::Cusp
    }

    /// Angle parameter of the singularity filling the given role, if any.
    pub fn angle_of_role(&self, role: Role) -> Option<f64> {
        if self.role1 == role {
            Some(self.alpha)
        } else if self.role2 == role {
            self.beta
        } else {
            None
        }
    }
}

/// Rejection reasons for angle prescriptions.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifyError {
    /// Angle is negative or equals 1 (a smooth point, not a singularity).
    InvalidAngle(f64),
    /// Two cusps prescribed; no metric of finite area and energy exists.
    NoMetric,
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::InvalidAngle(a) => {
                write!(f, "invalid-angle: {a} (angles must be >= 0 and != 1)")
            }
            ClassifyError::NoMetric => {
                write!(f, "no-metric: two cusp singularities admit no metric")
            }
        }
    }
}

impl std::error::Error for ClassifyError {}

/// Returns `Some(n)` when `x` is within [`INTEGER_ANGLE_TOL`] of the
/// non-negative integer `n`.
pub fn as_integer(x: f64) -> Option<u32> {
    let r = x.round();
    if r >= 0.0 && (x - r).abs() <= INTEGER_ANGLE_TOL {
        Some(r as u32)
    } else {
        None
    }
}

fn is_cusp_angle(x: f64) -> bool {
    x.abs() <= INTEGER_ANGLE_TOL
}

fn is_unit_angle(x: f64) -> bool {
    (x - 1.0).abs() <= INTEGER_ANGLE_TOL
}

fn check_angle(x: f64) -> Result<(), ClassifyError> {
    if x < -INTEGER_ANGLE_TOL || is_unit_angle(x) {
        Err(ClassifyError::InvalidAngle(x))
    } else {
        Ok(())
    }
}

/// All admissible configurations with a single singularity of angle
/// `2*pi*alpha`. The extremal-point configuration comes first, then saddle
/// configurations by decreasing `i1`.
pub fn classify_one(alpha: f64) -> Result<Vec<ExtremalProfile>, ClassifyError> {
    check_angle(alpha)?;
    let mut out = Vec::new();

    if is_cusp_angle(alpha) {
        // The cusp is the minimum; one smooth maximum balances it.
        out.push(ExtremalProfile {
            alpha: 0.0,
            beta: None,
            i1: 1,
            i2: 0,
            role1: Role::Cusp,
            role2: Role::Absent,
            lambda: None,
            case_label: "1.5(1)".to_string(),
        });
        return Ok(out);
    }

    if alpha > 1.0 {
        out.push(ExtremalProfile {
            alpha,
            beta: None,
            i1: 0,
            i2: 1,
            role1: Role::Max,
            role2: Role::Absent,
            lambda: Some(-alpha),
            case_label: "1.5(1)".to_string(),
        });
    } else {
        out.push(ExtremalProfile {
            alpha,
            beta: None,
            i1: 1,
            i2: 0,
            role1: Role::Min,
            role2: Role::Absent,
            lambda: Some(-1.0 / alpha),
            case_label: "1.5(1)".to_string(),
        });
    }

    if let Some(a) = as_integer(alpha) {
        if a >= 2 {
            // i2 ascending gives i1 = a + 1 - i2 descending.
            for i2 in 1..=(a + 1) / 2 {
                let i1 = a + 1 - i2;
                if i1 <= i2 {
                    break;
                }
                let admissible = i2 == 1 || i1 % i2 != 0;
                if admissible {
                    let label = if i2 == 1 { "1.5(2-1)" } else { "1.5(2-2)" };
                    out.push(ExtremalProfile {
                        alpha,
                        beta: None,
                        i1,
                        i2,
                        role1: Role::Saddle,
                        role2: Role::Absent,
                        lambda: Some(-(i1 as f64) / i2 as f64),
                        case_label: label.to_string(),
                    });
                }
            }
        }
    }

    Ok(out)
}

/// All admissible configurations with two singularities of angles
/// `2*pi*alpha` and `2*pi*beta`. Order: football, then saddle-plus-extremal
/// configurations (first singularity as the saddle first, maximum partner
/// before minimum partner, decreasing `i1`), then both-saddle configurations
/// by decreasing `i1`. Cusp prescriptions (`alpha` or `beta` zero) yield the
/// cusp-football and, for integer conical angle, the saddle-with-cusp case.
/// Minimum partners of non-integer angle carry a degree bound that excludes
/// splittings whose residue ratios integrate to a rational map of too low a
/// degree (only the bare ratio inequality applies at integer-free ratios).
pub fn classify_two(alpha: f64, beta: f64) -> Result<Vec<ExtremalProfile>, ClassifyError> {
    check_angle(alpha)?;
    check_angle(beta)?;
    let a_cusp = is_cusp_angle(alpha);
    let b_cusp = is_cusp_angle(beta);
    if a_cusp && b_cusp {
        return Err(ClassifyError::NoMetric);
    }

    let mut out = Vec::new();

    if a_cusp || b_cusp {
        // One conical point paired with one cusp. The conical point is the
        // maximum in the football case; for integer conical angle it may
        // instead be a saddle over `alpha` smooth maxima.
        let conical = if a_cusp { beta } else { alpha };
        let mk = |i1: u32, i2: u32, conical_role: Role, label: &str| {
            let (role1, role2) = if a_cusp {
                (Role::Cusp, conical_role)
            } else {
                (conical_role, Role::Cusp)
            };
            ExtremalProfile {
                alpha,
                beta: Some(beta),
                i1,
                i2,
                role1,
                role2,
                lambda: None,
                case_label: label.to_string(),
            }
        };
        out.push(mk(0, 0, Role::Max, "1.6(cusp-max)"));
        if let Some(c) = as_integer(conical) {
            if c >= 2 {
                out.push(mk(c, 0, Role::Saddle, "1.6(cusp-saddle)"));
            }
        }
        return Ok(out);
    }

    // Case (1): both singularities extremal (football). Requires distinct
    // angles; the larger angle sits at the maximum.
    if (alpha - beta).abs() > INTEGER_ANGLE_TOL {
        let (role1, role2, lam) = if alpha > beta {
            (Role::Max, Role::Min, -alpha / beta)
        } else {
            (Role::Min, Role::Max, -beta / alpha)
        };
        out.push(ExtremalProfile {
            alpha,
            beta: Some(beta),
            i1: 0,
            i2: 0,
            role1,
            role2,
            lambda: Some(lam),
            case_label: "1.6(1)".to_string(),
        });
    }

    // Case (2): one saddle, one extremal point.
    saddle_extremal_profiles(alpha, beta, true, &mut out);
    saddle_extremal_profiles(beta, alpha, false, &mut out);

    // Case (3): both saddles.
    if let (Some(a), Some(b)) = (as_integer(alpha), as_integer(beta)) {
        if a >= 2 && b >= 2 {
            let total = a + b;
            for i2 in 1..=total / 2 {
                let i1 = total - i2;
                if i1 <= i2 {
                    break;
                }
                let label = if i2 == 1 {
                    "1.6(3-1)"
                } else if i1 % i2 == 0 {
                    if i1 >= a.max(b) {
                        "1.6(3-2)"
                    } else {
                        continue;
                    }
                } else {
                    "1.6(3-3)"
                };
                out.push(ExtremalProfile {
                    alpha,
                    beta: Some(beta),
                    i1,
                    i2,
                    role1: Role::Saddle,
                    role2: Role::Saddle,
                    lambda: Some(-(i1 as f64) / i2 as f64),
                    case_label: label.to_string(),
                });
            }
        }
    }

    Ok(out)
}

/// Emits the case-(2) profiles with `s_angle` as the saddle and `e_angle` at
/// the extremal singularity. `saddle_first` records which prescribed slot the
/// saddle occupies. Maximum-partner profiles precede minimum-partner ones,
/// each by decreasing `i1`.
fn saddle_extremal_profiles(
    s_angle: f64,
    e_angle: f64,
    saddle_first: bool,
    out: &mut Vec<ExtremalProfile>,
) {
    let a = match as_integer(s_angle) {
        Some(a) if a >= 2 => a,
        _ => return,
    };
    let beta_int = as_integer(e_angle).filter(|&b| b >= 2);
    let (alpha, beta) = if saddle_first {
        (s_angle, e_angle)
    } else {
        (e_angle, s_angle)
    };
    let mk = |i1: u32, i2: u32, partner: Role, lam: f64, label: String| {
        let (role1, role2) = if saddle_first {
            (Role::Saddle, partner)
        } else {
            (partner, Role::Saddle)
        };
        ExtremalProfile {
            alpha,
            beta: Some(beta),
            i1,
            i2,
            role1,
            role2,
            lambda: Some(lam),
            case_label: label,
        }
    };

    // Singular point at a maximum: i2 >= 1 smooth minima.
    for i2 in 1..=a {
        let i1 = a - i2;
        if (i1 as f64) + e_angle <= i2 as f64 {
            continue;
        }
        let (ok, label) = match beta_int {
            Some(b) => {
                if i2 == 1 {
                    (true, "1.6(A-1)(a-1-1)")
                } else if (i1 + b) % i2 != 0 {
                    (true, "1.6(A-1)(a-1-3)")
                } else if i1 + b > a - 1 {
                    (true, "1.6(A-1)(a-1-2)")
                } else {
                    (false, "")
                }
            }
            None => (true, "1.6(B-1)"),
        };
        if ok {
            let lam = -((i1 as f64) + e_angle) / i2 as f64;
            out.push(mk(i1, i2, Role::Max, lam, label.to_string()));
        }
    }

    // Singular point at a minimum: i1 >= 1 smooth maxima.
    for i2 in 0..a {
        let i1 = a - i2;
        if (i1 as f64) <= (i2 as f64) + e_angle {
            break;
        }
        let (ok, label) = match beta_int {
            Some(b) => {
                if i2 == 0 {
                    (true, "1.6(A-2)(a-2-1)")
                } else {
                    let db = i2 + b;
                    let g = num_integer::gcd(db, i1);
                    let ok = i1 % db != 0 && u64::from(db) * u64::from(i1) > u64::from(a - 1) * u64::from(g);
                    (ok, "1.6(A-2)(a-2-2)")
                }
            }
            None => (min_partner_admissible(i1, i2, a, e_angle), "1.6(B-2)"),
        };
        if ok {
            let lam = -(i1 as f64) / ((i2 as f64) + e_angle);
            out.push(mk(i1, i2, Role::Min, lam, label.to_string()));
        }
    }
}

/// Existence test for a saddle with a non-integer singular minimum of angle
/// `beta` and `i2 >= 1` smooth minima. The candidate 1-form has residue
/// ratios in `Q` whenever `beta` is rational (every float is), so a suitable
/// multiple integrates to a global rational map; its degree
/// `i1*(i2+beta)/gcd(i2+beta, i1)` must exceed the zero order `a-1` at the
/// saddle, otherwise no form exists. With the exact dyadic value
/// `i2 + beta = p/2^k` the bound reads `p*i1 > (a-1)*gcd(p, i1*2^k)`; it also
/// subsumes the integer-ratio case (there it reduces to `i1 > a-1`, which
/// fails whenever `i2 >= 1`).
fn min_partner_admissible(i1: u32, i2: u32, a: u32, beta: f64) -> bool {
    if i2 == 0 {
        return true;
    }
    let mut x = f64::from(i2) + beta;
    let mut k = 0u32;
    while x.fract() != 0.0 {
        if k >= 60 {
            // p exceeds 2^60 while gcd(p, i1*2^k) = gcd(p, i1) <= i1, so the
            // degree bound p*i1 > (a-1)*gcd holds outright.
            return true;
        }
        x *= 2.0;
        k += 1;
    }
    let p = x as u128;
    let q = 1u128 << k;
    let g = num_integer::gcd(p, u128::from(i1) * q);
    p * u128::from(i1) > u128::from(a - 1) * g
}

/// Left-hand side of the obstruction identity
/// `sum_saddles(1 - alpha_j) + (N - J) + S`; equals 2 exactly for every
/// admissible configuration on the sphere.
pub fn check_obstruction(profile: &ExtremalProfile, angles: &AngleSpec) -> i64 {
    let mut saddle_sum: i64 = 0;
    let mut j: i64 = 0;
    if profile.role1 == Role::Saddle {
        saddle_sum += 1 - angles.alpha.round() as i64;
        j += 1;
    }
    if profile.role2 == Role::Saddle {
        let b = angles.beta.expect("saddle role in second slot requires beta");
        saddle_sum += 1 - b.round() as i64;
        j += 1;
    }
    let n = i64::from(profile.n_singular());
    let s = i64::from(profile.i1 + profile.i2);
    saddle_sum + (n - j) + s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn saddle_pairs(profiles: &[ExtremalProfile]) -> Vec<(u32, u32)> {
        profiles
            .iter()
            .filter(|p| p.n_saddles() > 0)
            .map(|p| (p.i1, p.i2))
            .collect()
    }

    #[test]
    fn one_singularity_small_angle_is_minimum() {
        let ps = classify_one(0.5).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].role1, Role::Min);
        assert_eq!((ps[0].i1, ps[0].i2), (1, 0));
        assert_eq!(ps[0].lambda, Some(-2.0));
    }

    #[test]
    fn one_singularity_alpha_four() {
        let ps = classify_one(4.0).unwrap();
        assert_eq!(ps[0].role1, Role::Max);
        assert_eq!(saddle_pairs(&ps), vec![(4, 1), (3, 2)]);
    }

    #[test]
    fn one_singularity_alpha_five_rejects_divisible() {
        let ps = classify_one(5.0).unwrap();
        // (4,2) rejected because 2 divides 4.
        assert_eq!(saddle_pairs(&ps), vec![(5, 1)]);
    }

    #[test]
    fn unit_angle_rejected() {
        assert_eq!(classify_one(1.0), Err(ClassifyError::InvalidAngle(1.0)));
        assert!(classify_one(-0.5).is_err());
        assert!(classify_two(1.0, 3.0).is_err());
    }

    #[test]
    fn cusp_single() {
        let ps = classify_one(0.0).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].role1, Role::Cusp);
        assert_eq!(ps[0].lambda, None);
        assert_eq!((ps[0].i1, ps[0].i2), (1, 0));
    }

    #[test]
    fn football_needs_distinct_angles() {
        let ps = classify_two(2.5, 1.5).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].role1, Role::Max);
        assert_eq!(ps[0].role2, Role::Min);
        assert_eq!(ps[0].lambda, Some(-2.5 / 1.5));

        assert!(classify_two(2.5, 2.5).unwrap().is_empty());
    }

    #[test]
    fn two_saddles_three_three() {
        let ps = classify_two(3.0, 3.0).unwrap();
        let both: Vec<_> = ps.iter().filter(|p| p.n_saddles() == 2).collect();
        let pairs: Vec<_> = both.iter().map(|p| (p.i1, p.i2)).collect();
        // (5,1) by clause (3-1); (4,2) by (3-2) since 2 | 4 and 4 >= 3;
        // (3,3) fails i1 > i2.
        assert_eq!(pairs, vec![(5, 1), (4, 2)]);
        assert_eq!(both[0].case_label, "1.6(3-1)");
        assert_eq!(both[1].case_label, "1.6(3-2)");
    }

    #[test]
    fn saddle_three_with_max_two() {
        let ps = classify_two(3.0, 2.0).unwrap();
        let max_side: Vec<_> = ps
            .iter()
            .filter(|p| p.role1 == Role::Saddle && p.role2 == Role::Max)
            .map(|p| (p.i1, p.i2))
            .collect();
        // (0,3) is rejected: i1 + beta = 2 <= i2 = 3 violates lambda < -1.
        assert_eq!(max_side, vec![(2, 1), (1, 2)]);
    }

    #[test]
    fn fractional_minimum_partner_degree_bound() {
        // alpha=4, beta=0.5 at a minimum: (4,0) survives (closed form), but
        // (3,1) must go: i2+beta = 3/2, and i1*(i2+beta)/gcd = 3*3/2/(3/2)
        // ... the scaled residues (1,1,1,-1,-2) integrate to a degree-3
        // rational map, which cannot carry the order-4 critical point.
        let min_side: Vec<_> = classify_two(4.0, 0.5)
            .unwrap()
            .into_iter()
            .filter(|p| p.role2 == Role::Min && p.n_saddles() > 0)
            .map(|p| (p.i1, p.i2))
            .collect();
        assert_eq!(min_side, vec![(4, 0)]);

        // beta=1.5 clears the bound for the same splitting: 5/2 * 3 = 7.5
        // against (4-1) * gcd(5/2, 3) = 3 * 1/2.
        let min_side: Vec<_> = classify_two(4.0, 1.5)
            .unwrap()
            .into_iter()
            .filter(|p| p.role2 == Role::Min && p.n_saddles() > 0)
            .map(|p| (p.i1, p.i2))
            .collect();
        assert_eq!(min_side, vec![(4, 0), (3, 1)]);

        assert!(min_partner_admissible(3, 1, 4, 1.5));
        assert!(!min_partner_admissible(3, 1, 4, 0.5));
        // Integer-ratio splitting: i1/(i2+beta) = 5/2.5 = 2 forces exclusion.
        assert!(!min_partner_admissible(5, 2, 7, 0.5));
        // Tiny dyadic tail behaves as an irrational angle: no bound bites.
        assert!(min_partner_admissible(3, 1, 4, 0.5 + 1e-13));
    }

    #[test]
    fn cusp_pair_cases() {
        let ps = classify_two(2.0, 0.0).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].case_label, "1.6(cusp-max)");
        assert_eq!((ps[0].role1, ps[0].role2), (Role::Max, Role::Cusp));
        assert_eq!(ps[1].case_label, "1.6(cusp-saddle)");
        assert_eq!((ps[1].i1, ps[1].i2), (2, 0));
        assert!(ps.iter().all(|p| p.lambda.is_none()));

        // Non-integer conical angle: football only.
        let ps = classify_two(0.0, 0.7).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!((ps[0].role1, ps[0].role2), (Role::Cusp, Role::Max));

        assert_eq!(classify_two(0.0, 0.0), Err(ClassifyError::NoMetric));
    }

    #[test]
    fn obstruction_is_two_on_examples() {
        // One saddle of angle 4: S = 5, N = J = 1.
        let angles = AngleSpec::one(4.0);
        for p in classify_one(4.0).unwrap() {
            assert_eq!(check_obstruction(&p, &angles), 2);
        }
        // Two saddles of angle 2 each: (1-2)+(1-2)+0+4 = 2.
        let angles = AngleSpec::two(2.0, 2.0);
        for p in classify_two(2.0, 2.0).unwrap() {
            assert_eq!(check_obstruction(&p, &angles), 2);
        }
        // Mixed saddle + maximum.
        let angles = AngleSpec::two(3.0, 2.0);
        for p in classify_two(3.0, 2.0).unwrap() {
            assert_eq!(check_obstruction(&p, &angles), 2);
        }
        // Cusp cases: the cusp contributes to N but not to the saddle sum.
        let angles = AngleSpec::one(0.0);
        for p in classify_one(0.0).unwrap() {
            assert_eq!(check_obstruction(&p, &angles), 2);
        }
        let angles = AngleSpec::two(2.0, 0.0);
        for p in classify_two(2.0, 0.0).unwrap() {
            assert_eq!(check_obstruction(&p, &angles), 2);
        }
    }

    #[test]
    fn every_emitted_lambda_is_below_minus_one() {
        for a in [0.3, 0.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.5, 7.0] {
            for p in classify_one(a).unwrap() {
                if let Some(l) = p.lambda {
                    assert!(l < -1.0, "classify_one({a}): lambda {l} for {p:?}");
                }
            }
            for b in [0.3, 0.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.5, 7.0] {
                for p in classify_two(a, b).unwrap() {
                    if let Some(l) = p.lambda {
                        assert!(l < -1.0, "classify_two({a},{b}): lambda {l} for {p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn obstruction_is_two_everywhere() {
        for a in 2..=12u32 {
            let angles = AngleSpec::one(a as f64);
            for p in classify_one(a as f64).unwrap() {
                assert_eq!(check_obstruction(&p, &angles), 2, "{p:?}");
            }
            for b in 2..=12u32 {
                let angles = AngleSpec::two(a as f64, b as f64);
                for p in classify_two(a as f64, b as f64).unwrap() {
                    assert_eq!(check_obstruction(&p, &angles), 2, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn deterministic_order() {
        let a = classify_two(4.0, 3.0).unwrap();
        let b = classify_two(4.0, 3.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn profile_json_round_trip() {
        for p in classify_two(3.0, 2.0).unwrap() {
            let s = serde_json::to_string(&p).unwrap();
            let q: ExtremalProfile = serde_json::from_str(&s).unwrap();
            assert_eq!(p, q);
        }
    }
}
