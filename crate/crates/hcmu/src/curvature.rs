//! Metric reconstruction from a character 1-form: the curvature profile `F`,
//! its stable inversion, and two-chart evaluation of the curvature `K(z)`
//! and the metric density `rho(z)`.
//!
//! The curvature satisfies `F(K(z)) = phi(z) + c0` with `phi` the log
//! potential of the form, and the density is `rho = 4 g3(K) |w|^2` where
//! `g3` is the depressed cubic vanishing at the curvature bounds.

use crate::oneform::OneFormModel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Inversion residual bound: `|F(K) - u| <= INVERT_TOL * (1 + |u|)`.
pub const INVERT_TOL: f64 = 1e-12;
/// Chart-1 disk radius of the two-chart atlas; chart 2 is `w = 1/z`.
pub const CHART_RADIUS: f64 = 1.2;

/// Coordinate chart on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// The finite plane coordinate `z`.
    Plane,
    /// The reciprocal coordinate `w = 1/z` around infinity.
    Reciprocal,
}

/// Failures while building or evaluating metric data.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureError {
    InvalidBounds(String),
    Domain(String),
    NoConvergence(String),
}

impl fmt::Display for CurvatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureError::InvalidBounds(m) => write!(f, "invalid-bounds: {m}"),
            CurvatureError::Domain(m) => write!(f, "domain: {m}"),
            CurvatureError::NoConvergence(m) => write!(f, "no-convergence: {m}"),
        }
    }
}

impl std::error::Error for CurvatureError {}

/// Curvature range of the metric: an open interval with simple log ends
/// (conical regime) or a double root at the minimum (cusp regime).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurvatureRange {
    Conical { k1: f64, k2: f64 },
    Cusp { mu: f64 },
}

/// Curvature value and the log-space gaps to the two ends of the range,
/// valid even when the linear gap underflows.
#[derive(Debug, Clone, Copy)]
pub struct GapPoint {
    pub k: f64,
    /// `ln(hi - k)`.
    pub ln_gap_hi: f64,
    /// `ln(k - lo)`.
    pub ln_gap_lo: f64,
}

enum End {
    Hi,
    Lo,
}

impl CurvatureRange {
    /// Upper end of the curvature range.
    pub fn hi(&self) -> f64 {
        match *self {
            CurvatureRange::Conical { k1, .. } => k1,
            CurvatureRange::Cusp { mu } => -2.0 * mu,
        }
    }

    /// Lower end of the curvature range.
    pub fn lo(&self) -> f64 {
        match *self {
            CurvatureRange::Conical { k2, .. } => k2,
            CurvatureRange::Cusp { mu } => mu,
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.hi() + self.lo())
    }

    pub fn is_cusp(&self) -> bool {
        matches!(self, CurvatureRange::Cusp { .. })
    }

    /// Partial-fraction coefficients of `1/(K-k1)(K-k2)(K+k1+k2)` in the
    /// conical regime.
    fn conical_abc(&self) -> (f64, f64, f64) {
        match *self {
            CurvatureRange::Conical { k1, k2 } => {
                let a = 1.0 / ((k1 - k2) * (2.0 * k1 + k2));
                let b = 1.0 / ((k2 - k1) * (k1 + 2.0 * k2));
                let c = 1.0 / ((2.0 * k1 + k2) * (k1 + 2.0 * k2));
                (a, b, c)
            }
            CurvatureRange::Cusp { .. } => unreachable!("conical coefficients"),
        }
    }

    /// The cubic `g3(K) = -(K - hi)(K - lo)(K + hi + lo)/3`, positive on the
    /// open range. In the cusp regime the two lower roots coincide at `mu`.
    pub fn g3(&self, k: f64) -> f64 {
        match *self {
            CurvatureRange::Conical { k1, k2 } => {
                -(k - k1) * (k - k2) * (k + k1 + k2) / 3.0
            }
            CurvatureRange::Cusp { mu } => -(k + 2.0 * mu) * (k - mu) * (k - mu) / 3.0,
        }
    }

    /// The curvature profile `F`, an increasing bijection from the open
    /// range onto the reals with `F' = 1/g3`.
    pub fn f_eval(&self, k: f64) -> f64 {
        match *self {
            CurvatureRange::Conical { k1, k2 } => {
                let (a, b, c) = self.conical_abc();
                -3.0 * (a * (k1 - k).ln() + b * (k - k2).ln() + c * (k + k1 + k2).ln())
            }
            CurvatureRange::Cusp { mu } => {
                let g = k - mu;
                (g / (-2.0 * mu - k)).ln() / (3.0 * mu * mu) + 1.0 / (mu * g)
            }
        }
    }

    /// `F` evaluated from a gap representation, stable at extreme values.
    pub fn f_from_gaps(&self, p: &GapPoint) -> f64 {
        match *self {
            CurvatureRange::Conical { .. } => {
                let (a, b, c) = self.conical_abc();
                -3.0 * (a * p.ln_gap_hi + b * p.ln_gap_lo + c * self.third_factor(p).ln())
            }
            CurvatureRange::Cusp { mu } => {
                (p.ln_gap_lo - p.ln_gap_hi) / (3.0 * mu * mu) + (-p.ln_gap_lo).exp() / mu
            }
        }
    }

    /// The factor `K + k1 + k2` computed from whichever gap is stable.
    fn third_factor(&self, p: &GapPoint) -> f64 {
        match *self {
            CurvatureRange::Conical { k1, k2 } => {
                if p.ln_gap_hi <= p.ln_gap_lo {
                    2.0 * k1 + k2 - p.ln_gap_hi.exp()
                } else {
                    k1 + 2.0 * k2 + p.ln_gap_lo.exp()
                }
            }
            CurvatureRange::Cusp { .. } => unreachable!("conical third factor"),
        }
    }

    /// `ln g3(K)` from a gap representation.
    pub fn log_g3_from_gaps(&self, p: &GapPoint) -> f64 {
        match self {
            CurvatureRange::Conical { .. } => {
                p.ln_gap_hi + p.ln_gap_lo + self.third_factor(p).ln() - 3.0f64.ln()
            }
            CurvatureRange::Cusp { .. } => {
                p.ln_gap_hi + 2.0 * p.ln_gap_lo - 3.0f64.ln()
            }
        }
    }

    /// `F` restricted to one end, as a function of `l = ln(gap)`; returns
    /// the value and its `l`-derivative. Stable for arbitrarily small gaps.
    fn f_of_gap(&self, end: &End, l: f64) -> (f64, f64) {
        let g = l.exp();
        match (*self, end) {
            (CurvatureRange::Conical { k1, k2 }, End::Hi) => {
                let (a, b, c) = self.conical_abc();
                let span = k1 - k2;
                let c3 = 2.0 * k1 + k2;
                let v = -3.0 * (a * l + b * (span - g).ln() + c * (c3 - g).ln());
                let dv = -3.0 * (a + b * (-g) / (span - g) + c * (-g) / (c3 - g));
                (v, dv)
            }
            (CurvatureRange::Conical { k1, k2 }, End::Lo) => {
                let (a, b, c) = self.conical_abc();
                let span = k1 - k2;
                let c3 = k1 + 2.0 * k2;
                let v = -3.0 * (a * (span - g).ln() + b * l + c * (c3 + g).ln());
                let dv = -3.0 * (a * (-g) / (span - g) + b + c * g / (c3 + g));
                (v, dv)
            }
            (CurvatureRange::Cusp { mu }, End::Hi) => {
                // K = -2 mu - g, so K - mu = -3 mu - g.
                let klo = -3.0 * mu - g;
                let v = (klo.ln() - l) / (3.0 * mu * mu) + 1.0 / (mu * klo);
                let dv = (-g / klo - 1.0) / (3.0 * mu * mu) + g / (mu * klo * klo);
                (v, dv)
            }
            (CurvatureRange::Cusp { mu }, End::Lo) => {
                // K = mu + g, so -2 mu - K = -3 mu - g.
                let khi = -3.0 * mu - g;
                let v = (l - khi.ln()) / (3.0 * mu * mu) + (-l).exp() / mu;
                let dv = (1.0 + g / khi) / (3.0 * mu * mu) - (-l).exp() / mu;
                (v, dv)
            }
        }
    }

    /// Inverts `F` in log-gap space: safeguarded Newton bracketed between
    /// the midpoint and the approached end.
    pub fn f_invert_with_gaps(&self, u: f64) -> GapPoint {
        let hi = self.hi();
        let lo = self.lo();
        let span = hi - lo;
        if u == f64::INFINITY {
            return GapPoint {
                k: hi,
                ln_gap_hi: f64::NEG_INFINITY,
                ln_gap_lo: span.ln(),
            };
        }
        if u == f64::NEG_INFINITY {
            return GapPoint {
                k: lo,
                ln_gap_hi: span.ln(),
                ln_gap_lo: f64::NEG_INFINITY,
            };
        }
        let end = if u >= self.f_eval(self.mid()) {
            End::Hi
        } else {
            End::Lo
        };
        let l_cap = (0.5 * span).ln();
        // Expand a bracket downward from the midpoint gap.
        let mut l_in = l_cap; // value on the midpoint side of u
        let mut l_out = l_cap - 1.0;
        let mut step = 1.0;
        for _ in 0..200 {
            let (v, _) = self.f_of_gap(&end, l_out);
            let past = match end {
                End::Hi => v >= u,
                End::Lo => v <= u,
            };
            if past {
                break;
            }
            l_in = l_out;
            step *= 2.0;
            l_out -= step;
        }
        let (mut la, mut lb) = (l_out.min(l_in), l_out.max(l_in));
        let mut l = 0.5 * (la + lb);
        for _ in 0..100 {
            let (v, dv) = self.f_of_gap(&end, l);
            if (v - u).abs() <= 0.5 * INVERT_TOL * (1.0 + u.abs()) {
                break;
            }
            // Maintain the bracket: F is monotone in l with a fixed sign
            // per end (decreasing toward Hi, increasing toward Lo), so the
            // la side always carries the same sign of v - u.
            let la_side = match end {
                End::Hi => v > u,
                End::Lo => v < u,
            };
            if la_side {
                la = l;
            } else {
                lb = l;
            }
            let lnext = l - (v - u) / dv;
            l = if dv != 0.0 && lnext > la && lnext < lb {
                lnext
            } else {
                0.5 * (la + lb)
            };
            if lb - la < 1e-16 * (1.0 + l.abs()) {
                break;
            }
        }
        match end {
            End::Hi => {
                let g = l.exp();
                GapPoint {
                    k: hi - g,
                    ln_gap_hi: l,
                    ln_gap_lo: span.ln() + (-g / span).ln_1p(),
                }
            }
            End::Lo => {
                let g = l.exp();
                GapPoint {
                    k: lo + g,
                    ln_gap_hi: span.ln() + (-g / span).ln_1p(),
                    ln_gap_lo: l,
                }
            }
        }
    }

    /// Inverts `F`: the curvature value with `|F(K) - u| <= tol * (1+|u|)`.
    pub fn f_invert(&self, u: f64) -> f64 {
        self.f_invert_with_gaps(u).k
    }
}

/// A metric determined by a character 1-form, a curvature range, and the
/// base-point normalization `F(K(z0)) = F(k0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricModel {
    pub form: OneFormModel,
    pub range: CurvatureRange,
    pub z0: Complex64,
    pub k0: f64,
    /// `F(k0) - phi(z0)`, so that `K(z) = F^{-1}(phi(z) + c0)`.
    pub c0: f64,
}

impl MetricModel {
    /// Builds the metric with the default base point: the node of a grid
    /// over the chart-1 disk farthest from all poles and zeros, normalized
    /// to the midpoint curvature there.
    ///
    /// # Errors
    /// `InvalidBounds` when the form's scale data is inconsistent or the
    /// derived curvature bounds leave the admissible regime.
    pub fn new(form: OneFormModel) -> Result<Self, CurvatureError> {
        let z0 = default_base_point(&form);
        let range = range_from_form(&form)?;
        let k0 = range.mid();
        Ok(Self::assemble(form, range, z0, k0))
    }

    /// Builds the metric with an explicit base point and curvature value.
    ///
    /// # Errors
    /// `InvalidBounds` as for [`MetricModel::new`]; `Domain` when `k0` lies
    /// outside the open curvature range.
    pub fn with_base(form: OneFormModel, z0: Complex64, k0: f64) -> Result<Self, CurvatureError> {
        let range = range_from_form(&form)?;
        if k0 <= range.lo() || k0 >= range.hi() {
            return Err(CurvatureError::Domain(format!(
                "base curvature {k0} outside ({}, {})",
                range.lo(),
                range.hi()
            )));
        }
        Ok(Self::assemble(form, range, z0, k0))
    }

    fn assemble(form: OneFormModel, range: CurvatureRange, z0: Complex64, k0: f64) -> Self {
        let mut model = MetricModel {
            form,
            range,
            z0,
            k0,
            c0: 0.0,
        };
        model.c0 = range.f_eval(k0) - model.phi_at(z0, Chart::Plane);
        model
    }

    /// The log potential `2 sum_j r_j ln|. - p_j|` in the given chart.
    pub fn phi_at(&self, z: Complex64, chart: Chart) -> f64 {
        let mut acc = 0.0;
        match chart {
            Chart::Plane => {
                for (p, r) in self.form.finite_poles() {
                    acc += 2.0 * r * (z - p).norm().ln();
                }
            }
            Chart::Reciprocal => {
                for (p, r) in self.form.finite_poles() {
                    acc += 2.0 * r * (Complex64::new(1.0, 0.0) - p * z).norm().ln();
                }
                if let Some(r_inf) = self.form.infinity_residue() {
                    acc += 2.0 * r_inf * z.norm().ln();
                }
            }
        }
        acc
    }

    /// The coefficient of the form in the given chart:
    /// `w2(w) = -w1(1/w)/w^2`, evaluated stably through the pole data.
    pub fn w_coeff_at(&self, z: Complex64, chart: Chart) -> Complex64 {
        match chart {
            Chart::Plane => self.form.w_at(z),
            Chart::Reciprocal => {
                let one = Complex64::new(1.0, 0.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for (p, r) in self.form.finite_poles() {
                    acc -= Complex64::new(r, 0.0) * p / (one - p * z);
                }
                if let Some(r_inf) = self.form.infinity_residue() {
                    // Polar inverse: the plain quotient squares |z| in its
                    // denominator, which underflows for very small |z|.
                    acc += Complex64::from_polar(r_inf / z.norm(), -z.arg());
                }
                acc
            }
        }
    }

    /// Curvature with both end gaps, in log space.
    pub fn gaps_at(&self, z: Complex64, chart: Chart) -> GapPoint {
        self.range.f_invert_with_gaps(self.phi_at(z, chart) + self.c0)
    }

    /// The curvature value `K` at a point.
    pub fn curvature_at(&self, z: Complex64, chart: Chart) -> f64 {
        self.gaps_at(z, chart).k
    }

    /// `ln rho` in the given chart; the chart-2 value includes the
    /// coordinate-change factor. Not defined exactly at poles and zeros.
    pub fn log_density_at(&self, z: Complex64, chart: Chart) -> f64 {
        let gaps = self.gaps_at(z, chart);
        let w = self.w_coeff_at(z, chart);
        4.0f64.ln() + self.range.log_g3_from_gaps(&gaps) + 2.0 * w.norm().ln()
    }

    /// The metric density `rho` in the given chart.
    pub fn density_at(&self, z: Complex64, chart: Chart) -> f64 {
        self.log_density_at(z, chart).exp()
    }

    /// Homothety: scales the curvature range by `t > 0` (and the metric by
    /// `1/t`), preserving the conformal structure and all cone angles.
    ///
    /// # Errors
    /// `Domain` when `t` is not a positive finite number.
    pub fn rescaled(&self, t: f64) -> Result<MetricModel, CurvatureError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CurvatureError::Domain(format!(
                "homothety factor must be positive and finite, got {t}"
            )));
        }
        let mut form = self.form.clone();
        form.sigma /= t * t;
        for p in &mut form.poles {
            p.residue /= t * t;
        }
        if let Some(mu) = form.mu.as_mut() {
            *mu *= t;
        }
        // The numerator identity constant is scale-free for saddle solves;
        // footballs and cusp models tie c to the residue scale.
        if !form.has_saddle() || form.mu.is_some() {
            form.c /= Complex64::new(t * t, 0.0);
        }
        let range = match self.range {
            CurvatureRange::Conical { k1, k2 } => CurvatureRange::Conical {
                k1: t * k1,
                k2: t * k2,
            },
            CurvatureRange::Cusp { mu } => CurvatureRange::Cusp { mu: t * mu },
        };
        Ok(MetricModel {
            form,
            range,
            z0: self.z0,
            k0: t * self.k0,
            c0: self.c0 / (t * t),
        })
    }
}

/// Recovers the curvature bounds from the form's scale data.
fn range_from_form(form: &OneFormModel) -> Result<CurvatureRange, CurvatureError> {
    if let Some(mu) = form.mu {
        if mu >= 0.0 {
            return Err(CurvatureError::InvalidBounds(format!(
                "cusp scale must be negative, got {mu}"
            )));
        }
        let expect = -1.0 / (3.0 * mu * mu);
        if (form.sigma - expect).abs() > 1e-12 * expect.abs() {
            return Err(CurvatureError::InvalidBounds(format!(
                "sigma {} inconsistent with cusp scale {mu}",
                form.sigma
            )));
        }
        return Ok(CurvatureRange::Cusp { mu });
    }
    let lambda = form.lambda.ok_or_else(|| {
        CurvatureError::InvalidBounds("conical form without a residue ratio".to_string())
    })?;
    if lambda >= -1.0 {
        return Err(CurvatureError::InvalidBounds(format!(
            "residue ratio must be below -1, got {lambda}"
        )));
    }
    if form.sigma >= 0.0 {
        return Err(CurvatureError::InvalidBounds(format!(
            "max-side residue must be negative, got {}",
            form.sigma
        )));
    }
    // Bounds ratio from lambda, absolute scale from sigma.
    let u = -(lambda + 2.0) / (2.0 * lambda + 1.0);
    let sigma_unit = -3.0 / ((1.0 - u) * (u + 2.0));
    let t = (sigma_unit / form.sigma).sqrt();
    let (k1, k2) = (t, t * u);
    if !(k1 > k2) || 2.0 * k1 + k2 <= 0.0 || k1 + 2.0 * k2 <= 0.0 {
        return Err(CurvatureError::InvalidBounds(format!(
            "bounds ({k1}, {k2}) leave the admissible regime"
        )));
    }
    Ok(CurvatureRange::Conical { k1, k2 })
}

/// Grid node in the chart-1 disk farthest from every pole and zero.
fn default_base_point(form: &OneFormModel) -> Complex64 {
    let mut features: Vec<Complex64> = form.finite_poles().iter().map(|f| f.0).collect();
    features.extend(form.zeros.iter().map(|z| z.location));
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_score = f64::NEG_INFINITY;
    let n = 25;
    for iy in 0..n {
        for ix in 0..n {
            let z = Complex64::new(
                -CHART_RADIUS + 2.0 * CHART_RADIUS * ix as f64 / (n - 1) as f64,
                -CHART_RADIUS + 2.0 * CHART_RADIUS * iy as f64 / (n - 1) as f64,
            );
            if z.norm() > CHART_RADIUS {
                continue;
            }
            let score = features
                .iter()
                .map(|&p| (z - p).norm())
                .fold(f64::INFINITY, f64::min);
            if score > best_score {
                best_score = score;
                best = z;
            }
        }
    }
    best
}

/// Geometric parameters of a two-extremal-point metric with a conical
/// maximum of angle `2 pi alpha` and prescribed total area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FootballGeometry {
    pub alpha: f64,
    pub k1: f64,
    pub k2: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub area: f64,
}

/// Exact area of the two-extremal-point metric with bounds `(k1, k2)` and a
/// singular maximum of angle `2 pi alpha`: `4 pi R (k1 - k2)` for the
/// finite-pole residue `R`.
pub fn football_area(alpha: f64, k1: f64, k2: f64) -> f64 {
    let lambda = -alpha;
    let sigma = -3.0 / ((k1 - k2) * (k2 + 2.0 * k1));
    4.0 * std::f64::consts::PI * (sigma * lambda) * (k1 - k2)
}

/// Solves for the curvature bounds of the football with conical maximum of
/// angle `2 pi alpha > 2 pi` and the given total area.
///
/// # Errors
/// `Domain` for `alpha <= 1` or a non-positive area.
pub fn solve_football_params(alpha: f64, area: f64) -> Result<FootballGeometry, CurvatureError> {
    if alpha <= 1.0 {
        return Err(CurvatureError::Domain(format!(
            "conical maximum needs angle factor above 1, got {alpha}"
        )));
    }
    if !(area > 0.0) || !area.is_finite() {
        return Err(CurvatureError::Domain(format!(
            "area must be positive and finite, got {area}"
        )));
    }
    // At k1 = 1 the bounds ratio is fixed by lambda = -alpha; the area then
    // scales as 1/t under (k1, k2) -> (t k1, t k2).
    let k2_unit = (2.0 - alpha) / (2.0 * alpha - 1.0);
    let area_unit = football_area(alpha, 1.0, k2_unit);
    let t = area_unit / area;
    let (k1, k2) = (t, t * k2_unit);
    let sigma = -3.0 / ((k1 - k2) * (k2 + 2.0 * k1));
    Ok(FootballGeometry {
        alpha,
        k1,
        k2,
        lambda: -alpha,
        sigma,
        area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_one, classify_two, AngleSpec, Role};
    use crate::oneform::{
        cusp_football_form, football_form, solve_saddle_form, GaugeSpec,
    };

    fn fixture_model() -> MetricModel {
        let ps = classify_one(2.0).unwrap();
        let profile = ps
            .iter()
            .find(|p| p.i1 == 2 && p.i2 == 1)
            .cloned()
            .unwrap();
        let angles = AngleSpec::one(2.0);
        let form = solve_saddle_form(&profile, &angles, &GaugeSpec::default(), 7).unwrap();
        MetricModel::new(form).unwrap()
    }

    #[test]
    fn profile_fixed_value() {
        let range = CurvatureRange::Conical { k1: 1.0, k2: 0.0 };
        let want = -1.5 * 3.0f64.ln();
        assert!((range.f_eval(0.5) - want).abs() < 1e-14);
        assert!((range.f_eval(0.5) + 1.647918).abs() < 1e-6);
    }

    #[test]
    fn profile_matches_quadrature() {
        // F(b) - F(a) equals the integral of 1/g3 (Simpson).
        for range in [
            CurvatureRange::Conical { k1: 1.0, k2: -0.3 },
            CurvatureRange::Cusp { mu: -1.0 },
        ] {
            let (a, b) = match range {
                CurvatureRange::Conical { .. } => (0.2, 0.8),
                CurvatureRange::Cusp { .. } => (-0.5, 1.5),
            };
            let n = 20_000;
            let h = (b - a) / n as f64;
            let mut acc = 1.0 / range.g3(a) + 1.0 / range.g3(b);
            for i in 1..n {
                let k = a + i as f64 * h;
                let wgt = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += wgt / range.g3(k);
            }
            acc *= h / 3.0;
            let diff = range.f_eval(b) - range.f_eval(a);
            assert!(
                (acc - diff).abs() < 1e-9 * (1.0 + diff.abs()),
                "{range:?}: quadrature {acc} vs profile {diff}"
            );
        }
    }

    #[test]
    fn profile_derivative_is_reciprocal_cubic() {
        let range = CurvatureRange::Conical { k1: 1.2, k2: -0.4 };
        for k in [-0.2, 0.1, 0.5, 0.9, 1.1] {
            let h = 1e-6;
            let fd = (range.f_eval(k + h) - range.f_eval(k - h)) / (2.0 * h);
            let want = 1.0 / range.g3(k);
            assert!(
                (fd - want).abs() < 1e-5 * (1.0 + want.abs()),
                "k = {k}: {fd} vs {want}"
            );
        }
        let cusp = CurvatureRange::Cusp { mu: -0.8 };
        for k in [-0.5, 0.0, 0.7, 1.4] {
            let h = 1e-6;
            let fd = (cusp.f_eval(k + h) - cusp.f_eval(k - h)) / (2.0 * h);
            let want = 1.0 / cusp.g3(k);
            assert!((fd - want).abs() < 1e-4 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn inversion_round_trips() {
        for range in [
            CurvatureRange::Conical { k1: 1.0, k2: 0.0 },
            CurvatureRange::Conical { k1: 1.3, k2: -0.45 },
            CurvatureRange::Cusp { mu: -1.0 },
        ] {
            for u in [
                -1e6, -3e4, -500.0, -40.0, -3.0, -1e-3, 0.0, 1e-3, 2.0, 40.0, 500.0, 3e4, 1e6,
            ] {
                let gp = range.f_invert_with_gaps(u);
                assert!(gp.k > range.lo() - 1e-12 && gp.k < range.hi() + 1e-12);
                let back = range.f_from_gaps(&gp);
                assert!(
                    (back - u).abs() <= INVERT_TOL * (1.0 + u.abs()),
                    "{range:?} u = {u}: back {back}"
                );
                // Values with healthy end gaps also round-trip through the
                // plain evaluation; deeper ones need the gap form, which is
                // the point of carrying it.
                if u.abs() <= 3.0 {
                    let direct = range.f_eval(gp.k);
                    assert!((direct - u).abs() <= 1e-10 * (1.0 + u.abs()));
                }
            }
        }
    }

    #[test]
    fn gaps_are_consistent() {
        let range = CurvatureRange::Conical { k1: 1.0, k2: 0.0 };
        let gp = range.f_invert_with_gaps(3.0);
        let span = range.hi() - range.lo();
        let total = gp.ln_gap_hi.exp() + gp.ln_gap_lo.exp();
        assert!((total - span).abs() < 1e-14);
        // Deep value: the small gap underflows in linear space but the log
        // representation stays exact.
        let gp = range.f_invert_with_gaps(2e4);
        assert!(gp.ln_gap_hi < -1e4);
        assert!(gp.k == range.hi());
        assert!((gp.ln_gap_lo - span.ln()).abs() < 1e-14);
    }

    #[test]
    fn fixture_metric_basics() {
        let m = fixture_model();
        assert!((m.curvature_at(m.z0, Chart::Plane) - m.k0).abs() < 1e-10);
        let (k1, k2) = match m.range {
            CurvatureRange::Conical { k1, k2 } => (k1, k2),
            CurvatureRange::Cusp { .. } => unreachable!(),
        };
        assert!((k1 - 1.0).abs() < 1e-12 && k2.abs() < 1e-12);
        for i in 0..12 {
            let th = std::f64::consts::TAU * i as f64 / 12.0;
            let z = Complex64::from_polar(0.7, th);
            let k = m.curvature_at(z, Chart::Plane);
            assert!(k > k2 && k < k1, "K({z}) = {k}");
            assert!(m.density_at(z, Chart::Plane) > 0.0);
        }
    }

    #[test]
    fn charts_agree_on_the_overlap() {
        let models = [
            fixture_model(),
            {
                let ps = classify_two(2.0, 0.0).unwrap();
                let profile = ps
                    .iter()
                    .find(|p| p.role1 == Role::Saddle || p.role2 == Role::Saddle)
                    .cloned()
                    .unwrap();
                let angles = AngleSpec::two(2.0, 0.0);
                let form =
                    solve_saddle_form(&profile, &angles, &GaugeSpec::default(), 0).unwrap();
                MetricModel::new(form).unwrap()
            },
        ];
        for m in &models {
            for i in 0..8 {
                let th = std::f64::consts::TAU * (i as f64 + 0.3) / 8.0;
                let z = Complex64::from_polar(1.05, th);
                let w = Complex64::new(1.0, 0.0) / z;
                let k1v = m.curvature_at(z, Chart::Plane);
                let k2v = m.curvature_at(w, Chart::Reciprocal);
                assert!((k1v - k2v).abs() < 1e-10, "K mismatch: {k1v} vs {k2v}");
                let l1 = m.log_density_at(z, Chart::Plane);
                let l2 = m.log_density_at(w, Chart::Reciprocal);
                // rho1(z) = rho2(1/z) / |z|^4.
                let want = l2 - 4.0 * z.norm().ln();
                assert!((l1 - want).abs() < 1e-9, "ln rho mismatch: {l1} vs {want}");
            }
        }
    }

    #[test]
    fn curvature_solves_the_metric_equation() {
        // K = -Laplacian(ln rho) / (2 rho) at generic points.
        let m = fixture_model();
        let h = 1e-4;
        for z in [Complex64::new(0.35, 0.4), Complex64::new(-0.5, 0.62)] {
            let l = |dz: Complex64| m.log_density_at(z + dz, Chart::Plane);
            let lap = (l(Complex64::new(h, 0.0))
                + l(Complex64::new(-h, 0.0))
                + l(Complex64::new(0.0, h))
                + l(Complex64::new(0.0, -h))
                - 4.0 * l(Complex64::new(0.0, 0.0)))
                / (h * h);
            let rho = m.density_at(z, Chart::Plane);
            let k_fd = -lap / (2.0 * rho);
            let k = m.curvature_at(z, Chart::Plane);
            assert!(
                (k_fd - k).abs() < 1e-4 * (1.0 + k.abs()),
                "at {z}: finite-difference {k_fd} vs profile {k}"
            );
        }
    }

    #[test]
    fn density_exponents_at_special_points() {
        let m = fixture_model();
        // Smooth maximum pole: rho approaches a positive constant.
        let p = m.form.p_roots[0];
        let l1 = m.log_density_at(p + Complex64::new(1e-4, 0.0), Chart::Plane);
        let l2 = m.log_density_at(p + Complex64::new(1e-5, 0.0), Chart::Plane);
        assert!(
            (l1 - l2).abs() / 10.0f64.ln() < 0.02,
            "smooth pole slope: {}",
            (l1 - l2) / 10.0f64.ln()
        );
        // Saddle of angle 2 at the origin: rho ~ r^2, slope 2(alpha-1) = 2.
        let l1 = m.log_density_at(Complex64::new(1e-4, 1e-4), Chart::Plane);
        let l2 = m.log_density_at(Complex64::new(1e-5, 1e-5), Chart::Plane);
        let slope = (l1 - l2) / 10.0f64.ln();
        assert!((slope - 2.0).abs() < 0.02, "saddle slope {slope}");
    }

    #[test]
    fn homothety_scales_curvature_and_density() {
        let m = fixture_model();
        let t = 2.5;
        let mt = m.rescaled(t).unwrap();
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.8, 0.5)] {
            let k = m.curvature_at(z, Chart::Plane);
            let kt = mt.curvature_at(z, Chart::Plane);
            assert!((kt - t * k).abs() < 1e-9 * (1.0 + k.abs()), "{kt} vs {}", t * k);
            let dl = mt.log_density_at(z, Chart::Plane) - m.log_density_at(z, Chart::Plane);
            assert!((dl + t.ln()).abs() < 1e-9, "density shift {dl}");
        }
        assert!(m.rescaled(-1.0).is_err());
    }

    #[test]
    fn football_area_matches_radial_quadrature() {
        // One conical maximum of angle 3: area = 4 pi (2*3 - 1) at k1 = 1.
        let alpha = 3.0;
        let geom = solve_football_params(alpha, football_area(alpha, 1.0, (2.0 - alpha) / (2.0 * alpha - 1.0))).unwrap();
        assert!((geom.k1 - 1.0).abs() < 1e-12);
        let form = football_form(alpha, geom.sigma).unwrap();
        let m = MetricModel::new(form).unwrap();
        // Radial symmetry: area = 2 pi int rho(r) r dr, in s = ln r.
        let (s0, s1, n) = (-16.0, 16.0, 8000);
        let h = (s1 - s0) / n as f64;
        let integrand = |s: f64| {
            let z = Complex64::from_polar(s.exp(), 0.37);
            let r = s.exp();
            m.density_at(z, Chart::Plane) * r * r
        };
        let mut acc = integrand(s0) + integrand(s1);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * integrand(s0 + i as f64 * h);
        }
        let area = std::f64::consts::TAU * acc * h / 3.0;
        let want = 4.0 * std::f64::consts::PI * (2.0 * alpha - 1.0);
        assert!(
            (area - want).abs() < 1e-5 * want,
            "quadrature {area} vs exact {want}"
        );
        assert!((geom.area - want).abs() < 1e-12 * want);
    }

    #[test]
    fn football_params_scale_with_area() {
        let g1 = solve_football_params(2.0, 12.0 * std::f64::consts::PI).unwrap();
        assert!((g1.k1 - 1.0).abs() < 1e-12);
        assert!(g1.k2.abs() < 1e-12);
        let g2 = solve_football_params(2.0, 6.0 * std::f64::consts::PI).unwrap();
        assert!((g2.k1 - 2.0).abs() < 1e-12);
        assert!(solve_football_params(1.0, 5.0).is_err());
        assert!(solve_football_params(2.0, -1.0).is_err());
    }

    #[test]
    fn cusp_metric_density_shape() {
        // Near the cusp the density behaves like 1/(r ln r)^2 (up to the
        // scale -1/mu), so ln rho + 2 ln r + 2 ln(-ln r) is nearly constant.
        let form = cusp_football_form(2.0, -1.0).unwrap();
        let m = MetricModel::new(form).unwrap();
        // The cusp sits at infinity: probe in the reciprocal chart.
        let vals: Vec<f64> = [1e-4, 1e-5, 1e-6]
            .iter()
            .map(|&r| {
                let w = Complex64::from_polar(r, 1.1);
                m.log_density_at(w, Chart::Reciprocal) + 2.0 * r.ln() + 2.0 * (-r.ln()).ln()
            })
            .collect();
        assert!((vals[0] - vals[1]).abs() < 0.2, "{vals:?}");
        assert!((vals[1] - vals[2]).abs() < 0.1, "{vals:?}");
    }

    #[test]
    fn inconsistent_scale_data_is_rejected() {
        let mut form = football_form(2.0, -0.5).unwrap();
        form.sigma = 0.5;
        assert!(matches!(
            MetricModel::new(form),
            Err(CurvatureError::InvalidBounds(_))
        ));
        let mut form = cusp_football_form(2.0, -1.0).unwrap();
        form.mu = Some(-2.0);
        assert!(MetricModel::new(form).is_err());
        let mut form = football_form(2.0, -0.5).unwrap();
        form.lambda = None;
        assert!(MetricModel::new(form).is_err());
    }

    #[test]
    fn base_point_is_deterministic_and_clear() {
        let m1 = fixture_model();
        let m2 = fixture_model();
        assert_eq!(m1.z0, m2.z0);
        let mut features: Vec<Complex64> =
            m1.form.finite_poles().iter().map(|f| f.0).collect();
        features.extend(m1.form.zeros.iter().map(|z| z.location));
        let clearance = features
            .iter()
            .map(|&p| (m1.z0 - p).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(clearance > 0.3, "clearance {clearance}");
    }
}
