use super::{annulus_l2_sq, boundary_modulus_sq, cross_term_l2, mode_operator_norm, NormKind, RegimeRecipe, Weighting};
use crate::error::{Error, Result};
use crate::helmholtz::{
    solve_mode_dirichlet, AnnulusSpec, CutoffProfile, Frequency, ModeIndex, RadialGridFunction,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// One sweep: what to measure, for which modes, on which grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: NormKind,
    pub recipe: RegimeRecipe,
    pub alpha: f64,
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub cutoff: CutoffProfile,
    #[serde(default)]
    pub weighting: Weighting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub lambda: f64,
    pub l: u32,
    pub nu: f64,
    pub snap_error: f64,
    pub measurement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// largest `|log m - (intercept + slope log λ)|`
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub points: Vec<SweepPoint>,
    /// frequencies refused by the recipe, with the reason
    pub dropped: Vec<(f64, String)>,
    pub fit: PowerFit,
}

/// Least-squares line through `(ln λ, ln m)`.
pub fn fit_power_law(lambdas: &[f64], measurements: &[f64]) -> Result<PowerFit> {
    if lambdas.len() != measurements.len() || lambdas.len() < 2 {
        return Err(Error::Invalid("a power-law fit needs two or more paired points".into()));
    }
    if let Some((&l, _)) = lambdas.iter().zip(measurements).find(|(_, &m)| !(m > 0.0 && m.is_finite())) {
        return Err(Error::Measurement { lambda: l, reason: "measurement is not a positive finite number".into() });
    }
    let x: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let y: Vec<f64> = measurements.iter().map(|m| m.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("power-law fit needs distinct frequencies".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).abs()).fold(0.0, f64::max);
    Ok(PowerFit { slope, intercept, max_residual })
}

/// One measurement of `kind` for `mode` at `lambda`.
pub fn measure(
    kind: NormKind,
    mode: ModeIndex,
    lambda: Frequency,
    alpha: f64,
    cutoff: CutoffProfile,
    weighting: Weighting,
) -> Result<f64> {
    let nu = mode.nu();
    if kind == NormKind::HankelModulusSqAtBoundary {
        return boundary_modulus_sq(nu, lambda);
    }
    let spec = AnnulusSpec::new(alpha, lambda, cutoff)?;
    match kind {
        NormKind::HankelL2Sq => annulus_l2_sq(nu, lambda, &spec),
        NormKind::CrossTermL2 => cross_term_l2(nu, lambda, &spec),
        NormKind::OperatorNorm => Ok(mode_operator_norm(mode, lambda, &spec, weighting)?.value),
        NormKind::SolutionNorm => {
            let f = RadialGridFunction::sample(&spec, |_| Complex64::new(1.0, 0.0))?;
            let w = solve_mode_dirichlet(mode, lambda, &f, &spec)?;
            let chi_f = RadialGridFunction::sample(&spec, |r| Complex64::new(spec.chi(r), 0.0))?;
            Ok(w.l2_norm() / chi_f.l2_norm(&spec))
        }
        NormKind::HankelModulusSqAtBoundary => unreachable!(),
    }
}

/// Measures every grid frequency (in parallel, gathered in grid order) and
/// fits a power law.
pub fn sweep_and_fit(spec: &SweepSpec) -> Result<SweepResult> {
    sweep_with_progress(spec, |_| {})
}

/// As [`sweep_and_fit`], calling `progress` with each finished point.
pub fn sweep_with_progress<P>(spec: &SweepSpec, progress: P) -> Result<SweepResult>
where
    P: Fn(&SweepPoint) + Sync,
{
    if spec.lambdas.len() < 5 {
        return Err(Error::Invalid(format!("a sweep needs at least 5 frequencies, got {}", spec.lambdas.len())));
    }
    if spec.lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Invalid("sweep frequencies must be strictly increasing".into()));
    }
    spec.recipe.validate()?;
    for &l in &spec.lambdas {
        Frequency::for_scaling(l)?;
    }

    let mut points = Vec::new();
    let mut dropped = Vec::new();
    let mut todo = Vec::new();
    for &lam in &spec.lambdas {
        match spec.recipe.order(lam) {
            Ok(s) => todo.push((lam, s)),
            Err(Error::Measurement { reason, .. }) => dropped.push((lam, reason)),
            Err(e) => return Err(e),
        }
    }
    let measured: Vec<Result<SweepPoint>> = todo
        .par_iter()
        .map(|&(lam, snapped)| {
            let m = measure(spec.kind, snapped.mode, Frequency::for_scaling(lam)?, spec.alpha, spec.cutoff, spec.weighting)
                .map_err(|e| Error::Measurement { lambda: lam, reason: e.to_string() })?;
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::Measurement { lambda: lam, reason: format!("measurement {m} is not positive") });
            }
            let p = SweepPoint {
                lambda: lam,
                l: snapped.mode.l,
                nu: snapped.mode.nu().value(),
                snap_error: snapped.snap_error,
                measurement: m,
            };
            progress(&p);
            Ok(p)
        })
        .collect();
    for r in measured {
        points.push(r?);
    }
    if points.len() < 5 {
        return Err(Error::Invalid(format!("only {} usable frequencies after snapping", points.len())));
    }
    let lams: Vec<f64> = points.iter().map(|p| p.lambda).collect();
    let ms: Vec<f64> = points.iter().map(|p| p.measurement).collect();
    let fit = fit_power_law(&lams, &ms)?;
    Ok(SweepResult { spec: spec.clone(), points, dropped, fit })
}

impl SweepResult {
    /// `lambda,measurement,log_lambda,log_measurement`, nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,measurement,log_lambda,log_measurement\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{:.8e},{:.8e},{:.8e},{:.8e}",
                p.lambda,
                p.measurement,
                p.lambda.ln(),
                p.measurement.ln()
            );
        }
        out
    }

    /// Log–log plot of the measurements with the fitted line.
    pub fn to_svg(&self, title: &str) -> String {
        let (w, h, pad) = (640.0, 420.0, 60.0);
        let xs: Vec<f64> = self.points.iter().map(|p| p.lambda.log2()).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.measurement.log2()).collect();
        let fit_y = |x: f64| (self.fit.intercept + self.fit.slope * x * std::f64::consts::LN_2) / std::f64::consts::LN_2;
        let (x0, x1) = bounds(&xs);
        let all_y: Vec<f64> = ys.iter().copied().chain([fit_y(x0), fit_y(x1)]).collect();
        let (y0, y1) = bounds(&all_y);
        let px = |x: f64| pad + (x - x0) / (x1 - x0).max(1e-12) * (w - 2.0 * pad);
        let py = |y: f64| h - pad - (y - y0) / (y1 - y0).max(1e-12) * (h - 2.0 * pad);
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<path d="M{pad} {pad} V{} H{}" fill="none" stroke="black"/>"#,
            h - pad,
            w - pad
        );
        let _ = writeln!(s, r#"<text x="{pad}" y="30" font-family="sans-serif" font-size="14">{}</text>"#, escape(title));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">log2 lambda</text>"#,
            w / 2.0,
            h - 15.0
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">log2 measurement</text>"#,
            h / 2.0,
            h / 2.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="1.5"/>"#,
            px(x0),
            py(fit_y(x0)),
            px(x1),
            py(fit_y(x1))
        );
        for (x, y) in xs.iter().zip(&ys) {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="firebrick"/>"#, px(*x), py(*y));
        }
        for x in xs.iter() {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{x:.0}</text>"#,
                px(*x),
                h - pad + 15.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">slope {:.4}</text>"#,
            w - pad,
            pad - 10.0,
            self.fit.slope
        );
        s.push_str("</svg>\n");
        s
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
