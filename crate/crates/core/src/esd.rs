//! Empirical spectral distributions, the limit laws, and distances between them.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matpoly::{finite_eigenvalues, MatrixPolynomial, PolyError};

#[derive(Debug, thiserror::Error)]
pub enum EsdError {
    #[error("empirical spectral distribution has no points")]
    Empty,
    #[error("invalid distribution: {0}")]
    Invalid(String),
    #[error("cannot merge distributions: {0}")]
    Mismatch(String),
    #[error("no point lies outside the exclusion radius {0}")]
    AllExcluded(f64),
    #[error("bin counts must be at least 1 (radial {radial}, angular {angular})")]
    BadBins { radial: usize, angular: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceMeta {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
}

/// Uniform atomic measure on a multiset of (already scaled) eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSpectralDistribution {
    points: Vec<Complex64>,
    scale: f64,
    meta: SourceMeta,
}

impl EmpiricalSpectralDistribution {
    /// Checks `|points| = n·k·trials` and `scale > 0`.
    pub fn from_points(points: Vec<Complex64>, scale: f64, meta: SourceMeta) -> Result<Self, EsdError> {
        if points.is_empty() {
            return Err(EsdError::Empty);
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(EsdError::Invalid(format!("scale must be positive, got {scale}")));
        }
        let expected = meta.n * meta.k * meta.trials;
        if points.len() != expected {
            return Err(EsdError::Invalid(format!(
                "{} points but n*k*trials = {expected}",
                points.len()
            )));
        }
        if points.iter().any(|z| !z.is_finite()) {
            return Err(EsdError::Invalid("non-finite point".into()));
        }
        Ok(Self { points, scale, meta })
    }

    /// A distribution over arbitrary points (`n = len`, `k = trials = 1`, unit scale).
    pub fn from_samples(points: Vec<Complex64>) -> Result<Self, EsdError> {
        let meta = SourceMeta {
            n: points.len(),
            k: 1,
            trials: 1,
        };
        Self::from_points(points, 1.0, meta)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn meta(&self) -> SourceMeta {
        self.meta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Same metadata, points multiplied by `factor`.
    pub fn map_points(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            points: self.points.iter().map(|&z| f(z)).collect(),
            ..self.clone()
        }
    }

    /// CSV with header `re,im`, one point per line. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "re,im")?;
        for z in &self.points {
            writeln!(w, "{},{}", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Read `re,im` CSV points.
pub fn read_points_csv<R: BufRead>(r: R) -> Result<Vec<Complex64>, EsdError> {
    let mut points = Vec::new();
    let mut lines = r.lines().enumerate();
    match lines.next() {
        Some((_, header)) => {
            let header = header?;
            if header.trim() != "re,im" {
                return Err(EsdError::Parse {
                    line: 1,
                    message: format!("expected header `re,im`, found `{}`", header.trim()),
                });
            }
        }
        None => {
            return Err(EsdError::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    for (idx, line) in lines {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64, EsdError> {
            let s = s.ok_or_else(|| EsdError::Parse {
                line: line_no,
                message: "expected two columns".into(),
            })?;
            s.trim().parse::<f64>().map_err(|e| EsdError::Parse {
                line: line_no,
                message: format!("`{}`: {e}", s.trim()),
            })
        };
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(EsdError::Parse {
                line: line_no,
                message: "expected two columns".into(),
            });
        }
        points.push(Complex64::new(re, im));
    }
    if points.is_empty() {
        return Err(EsdError::Empty);
    }
    Ok(points)
}

/// Scaled finite eigenvalues of `p`: `scale · λᵢ(P)`.
pub fn esd_of_polynomial(p: &MatrixPolynomial, scale: f64) -> Result<EmpiricalSpectralDistribution, EsdError> {
    let spectrum = finite_eigenvalues(p)?;
    let points = spectrum.eigenvalues.into_iter().map(|z| z * scale).collect();
    EmpiricalSpectralDistribution::from_points(
        points,
        scale,
        SourceMeta {
            n: p.n(),
            k: p.k(),
            trials: 1,
        },
    )
}

/// Multiset union of realizations sharing `(n, k)` and scale.
pub fn merge(esds: &[EmpiricalSpectralDistribution]) -> Result<EmpiricalSpectralDistribution, EsdError> {
    let first = esds.first().ok_or(EsdError::Empty)?;
    let mut points = Vec::with_capacity(esds.iter().map(|e| e.len()).sum());
    let mut trials = 0;
    for e in esds {
        if (e.meta.n, e.meta.k) != (first.meta.n, first.meta.k) {
            return Err(EsdError::Mismatch(format!(
                "(n, k) = ({}, {}) vs ({}, {})",
                e.meta.n, e.meta.k, first.meta.n, first.meta.k
            )));
        }
        if e.scale != first.scale {
            return Err(EsdError::Mismatch(format!("scale {} vs {}", e.scale, first.scale)));
        }
        points.extend_from_slice(&e.points);
        trials += e.meta.trials;
    }
    EmpiricalSpectralDistribution::from_points(points, first.scale, SourceMeta { trials, ..first.meta })
}

/// Rotation-invariant limit measures supported in the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum LimitLaw {
    /// `(k−1)/k · δ₀ + 1/k · uniform(unit disc)`.
    DiscMixture { k: usize },
    /// Uniform measure on the unit circle.
    UnitCircle,
    /// Uniform measure on the unit disc.
    UnitDisc,
}

impl LimitLaw {
    pub fn disc_mixture(k: usize) -> Result<Self, EsdError> {
        if k == 0 {
            return Err(EsdError::Invalid("disc mixture needs k >= 1".into()));
        }
        Ok(Self::DiscMixture { k })
    }

    /// `P(|Z| ≤ r)`.
    pub fn radial_cdf(&self, r: f64) -> f64 {
        if r < 0.0 {
            return 0.0;
        }
        let disc = r.min(1.0).powi(2);
        match *self {
            LimitLaw::DiscMixture { k } => {
                let k = k as f64;
                (k - 1.0) / k + disc / k
            }
            LimitLaw::UnitDisc => disc,
            LimitLaw::UnitCircle => {
                if r >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(|Z| < r)`.
    pub fn radial_cdf_left(&self, r: f64) -> f64 {
        match *self {
            LimitLaw::DiscMixture { .. } if r <= 0.0 => 0.0,
            LimitLaw::UnitCircle if r <= 1.0 => 0.0,
            _ => self.radial_cdf(r),
        }
    }

    /// Mass of the annulus `{a < |z| ≤ b}`, or `{|z| ≤ b}` when `a ≤ 0`.
    pub fn annulus_mass(&self, a: f64, b: f64) -> f64 {
        if a <= 0.0 {
            self.radial_cdf(b)
        } else {
            (self.radial_cdf(b) - self.radial_cdf(a)).max(0.0)
        }
    }
}

/// `P_emp(|Z| ≤ r)`.
pub fn empirical_radial_cdf(esd: &EmpiricalSpectralDistribution, r: f64) -> f64 {
    let inside = esd.points.iter().filter(|z| z.norm() <= r).count();
    inside as f64 / esd.len() as f64
}

/// One-sample Kolmogorov–Smirnov distance between the point moduli and the
/// radial law, `sup_r |F_emp(r) − F(r)|`, evaluated exactly at the sample
/// radii (both one-sided limits, ties grouped).
///
/// Against a law with an atom (the origin for the disc mixture, the circle
/// itself for the unit circle) this stays at the atom's mass until sample
/// points land exactly on it, so it does not shrink as finite-size spectra
/// approach the limit. [`radial_ks_beyond`] restricts the supremum to radii
/// past a cutoff.
pub fn radial_ks(esd: &EmpiricalSpectralDistribution, law: &LimitLaw) -> f64 {
    radial_ks_beyond(esd, law, f64::NEG_INFINITY)
}

/// [`radial_ks`] with the supremum taken over `r ≥ r_min` only.
pub fn radial_ks_beyond(esd: &EmpiricalSpectralDistribution, law: &LimitLaw, r_min: f64) -> f64 {
    let mut radii: Vec<f64> = esd.points.iter().map(|z| z.norm()).collect();
    radii.sort_by(f64::total_cmp);
    let n = radii.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < radii.len() {
        let r = radii[i];
        let mut j = i;
        while j < radii.len() && radii[j] == r {
            j += 1;
        }
        if r >= r_min {
            let below = i as f64 / n;
            let at = j as f64 / n;
            d = d
                .max((at - law.radial_cdf(r)).abs())
                .max((below - law.radial_cdf_left(r)).abs());
        }
        i = j;
    }
    d.clamp(0.0, 1.0)
}

/// `arg(z) / 2π` mapped into `[0, 1)`.
fn unit_angle(z: Complex64) -> f64 {
    let u = z.arg() / (2.0 * PI);
    let u = if u < 0.0 { u + 1.0 } else { u };
    if u >= 1.0 {
        0.0
    } else {
        u
    }
}

/// Circular (Kuiper) Kolmogorov–Smirnov distance `D⁺ + D⁻` between the
/// angles of the points with `|z| > exclusion_radius` and the uniform law
/// on the circle. Unlike the linear KS statistic it does not depend on where
/// the angle origin is placed, so a global rotation of the points leaves it
/// unchanged. A single point gives 1.
pub fn angular_ks(esd: &EmpiricalSpectralDistribution, exclusion_radius: f64) -> Result<f64, EsdError> {
    let mut u: Vec<f64> = esd
        .points
        .iter()
        .filter(|z| z.norm() > exclusion_radius)
        .map(|&z| unit_angle(z))
        .collect();
    if u.is_empty() {
        return Err(EsdError::AllExcluded(exclusion_radius));
    }
    Ok(kuiper_uniform(&mut u))
}

/// Kuiper statistic of samples in `[0, 1)` against the uniform CDF. Sorts in place.
pub(crate) fn kuiper_uniform(u: &mut [f64]) -> f64 {
    u.sort_by(f64::total_cmp);
    let m = u.len() as f64;
    let (mut d_plus, mut d_minus): (f64, f64) = (0.0, 0.0);
    for (i, &x) in u.iter().enumerate() {
        d_plus = d_plus.max((i + 1) as f64 / m - x);
        d_minus = d_minus.max(x - i as f64 / m);
    }
    (d_plus + d_minus).clamp(0.0, 1.0)
}

/// Linear one-sample KS statistic of `samples` against a continuous CDF. Sorts in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let m = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / m - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max)
}

/// Largest `|empirical − law|` cell mass over an annulus × sector grid on
/// the disc of radius `max(1, max |z|)`. Radial cells are `(a, b]` with the
/// innermost one closed at 0, so the atom at the origin and the unit circle
/// fall in well-defined cells.
pub fn annulus_sector_discrepancy(
    esd: &EmpiricalSpectralDistribution,
    law: &LimitLaw,
    radial_bins: usize,
    angular_bins: usize,
) -> Result<f64, EsdError> {
    if radial_bins == 0 || angular_bins == 0 {
        return Err(EsdError::BadBins {
            radial: radial_bins,
            angular: angular_bins,
        });
    }
    let outer = esd.max_modulus().max(1.0);
    let edge = |b: usize| outer * b as f64 / radial_bins as f64;
    let mut counts = vec![0usize; radial_bins * angular_bins];
    for &z in &esd.points {
        let r = z.norm();
        let mut rb = 0;
        while rb + 1 < radial_bins && r > edge(rb + 1) {
            rb += 1;
        }
        let ab = ((unit_angle(z) * angular_bins as f64) as usize).min(angular_bins - 1);
        counts[rb * angular_bins + ab] += 1;
    }
    let total = esd.len() as f64;
    let mut worst: f64 = 0.0;
    for rb in 0..radial_bins {
        let law_mass = law.annulus_mass(if rb == 0 { 0.0 } else { edge(rb) }, edge(rb + 1)) / angular_bins as f64;
        for ab in 0..angular_bins {
            let emp = counts[rb * angular_bins + ab] as f64 / total;
            worst = worst.max((emp - law_mass).abs());
        }
    }
    Ok(worst.clamp(0.0, 1.0))
}

/// Fraction of points with `|z| ≤ radius`, a finite-size proxy for the atom at 0.
pub fn atom_mass(esd: &EmpiricalSpectralDistribution, radius: f64) -> f64 {
    empirical_radial_cdf(esd, radius)
}

/// Fraction of points with `inner ≤ |z| ≤ outer`.
pub fn annulus_fraction(esd: &EmpiricalSpectralDistribution, inner: f64, outer: f64) -> f64 {
    let hits = esd
        .points
        .iter()
        .filter(|z| {
            let r = z.norm();
            r >= inner && r <= outer
        })
        .count();
    hits as f64 / esd.len() as f64
}

/// Knobs for [`distance_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSettings {
    pub atom_radius: f64,
    pub exclusion_radius: f64,
    pub radial_bins: usize,
    pub angular_bins: usize,
}

impl Default for DistanceSettings {
    fn default() -> Self {
        Self {
            atom_radius: 0.2,
            exclusion_radius: 0.5,
            radial_bins: 8,
            angular_bins: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub radial_ks: f64,
    /// [`radial_ks_beyond`] at `atom_radius`.
    pub radial_ks_beyond_atom: f64,
    pub angular_ks: f64,
    pub discrepancy: f64,
    pub atom_mass_observed: f64,
    pub atom_radius: f64,
}

pub fn distance_report(
    esd: &EmpiricalSpectralDistribution,
    law: &LimitLaw,
    settings: &DistanceSettings,
) -> Result<DistanceReport, EsdError> {
    Ok(DistanceReport {
        radial_ks: radial_ks(esd, law),
        radial_ks_beyond_atom: radial_ks_beyond(esd, law, settings.atom_radius),
        angular_ks: angular_ks(esd, settings.exclusion_radius)?,
        discrepancy: annulus_sector_discrepancy(esd, law, settings.radial_bins, settings.angular_bins)?,
        atom_mass_observed: atom_mass(esd, settings.atom_radius),
        atom_radius: settings.atom_radius,
    })
}
