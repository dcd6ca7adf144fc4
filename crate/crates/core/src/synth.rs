//! Rotating-Gaussians generator with analytic ground truth.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field_io::{GridSpec, TimeVaryingField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSpec {
    pub amplitude: f64,
    /// Standard deviation in world units; must be positive.
    pub sigma: f64,
    /// Orbit radius around the domain center, in world units.
    pub radius: f64,
    /// Angle at `t = 0`, radians.
    pub phase: f64,
    /// Angular velocity, radians per time step.
    pub omega: f64,
}

impl GaussianSpec {
    pub fn center(&self, origin: (f64, f64), t: usize) -> (f64, f64) {
        let a = self.phase + self.omega * t as f64;
        (origin.0 + self.radius * a.cos(), origin.1 + self.radius * a.sin())
    }
}

fn domain_center(spec: &GridSpec) -> (f64, f64) {
    spec.slice_spec().center()
}

/// `f_t(p) = sum_k A_k exp(-|p - c_k(t)|^2 / (2 sigma_k^2)) + noise_amp * eta(p, t)`
/// with `eta` uniform in `[-1, 1]`, deterministic in `seed`.
pub fn rotating_gaussians(
    spec: &GridSpec,
    gaussians: &[GaussianSpec],
    noise_amp: f64,
    seed: u64,
) -> Result<TimeVaryingField> {
    spec.validate()?;
    if let Some(g) = gaussians.iter().find(|g| g.sigma.is_nan() || g.sigma <= 0.0) {
        return Err(Error::Config(format!("gaussian sigma must be > 0, got {}", g.sigma)));
    }
    if noise_amp.is_nan() || noise_amp < 0.0 {
        return Err(Error::Config(format!("noise amplitude must be >= 0, got {noise_amp}")));
    }
    let slice = spec.slice_spec();
    let center = domain_center(spec);
    let n = slice.vertex_count();
    let steps = crate::par_map(spec.timesteps, |t| {
        let centers: Vec<(f64, f64)> = gaussians.iter().map(|g| g.center(center, t)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        (0..n)
            .map(|v| {
                let (x, y) = slice.vertex_position(v);
                let mut f = 0.0;
                for (g, c) in gaussians.iter().zip(&centers) {
                    let d2 = (x - c.0).powi(2) + (y - c.1).powi(2);
                    f += g.amplitude * (-d2 / (2.0 * g.sigma * g.sigma)).exp();
                }
                if noise_amp > 0.0 {
                    f += noise_amp * rng.random_range(-1.0..=1.0);
                }
                f
            })
            .collect::<Vec<f64>>()
    });
    TimeVaryingField::new(*spec, steps.concat())
}

/// Sampled centers `(x, y, t)` of every Gaussian, one polyline per Gaussian.
pub fn ground_truth_tracks(gaussians: &[GaussianSpec], spec: &GridSpec) -> Vec<Vec<(f64, f64, f64)>> {
    let center = domain_center(spec);
    gaussians
        .iter()
        .map(|g| {
            (0..spec.timesteps)
                .map(|t| {
                    let (x, y) = g.center(center, t);
                    (x, y, t as f64 * spec.time_spacing)
                })
                .collect()
        })
        .collect()
}

/// A named generator configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthPreset {
    pub name: String,
    pub spec: GridSpec,
    pub gaussians: Vec<GaussianSpec>,
    pub noise_amp: f64,
    /// Orbit radius of the pair midpoints, the ground truth for the spiral tracks.
    pub orbit_radius: f64,
}

pub const PRESET_NAMES: [&str; 3] = [
    "rotating-gaussians",
    "rotating-gaussians-noisy",
    "rotating-gaussians-small",
];

/// Peak amplitude of the orbiting Gaussians in the built-in presets.
pub const PRESET_AMPLITUDE: f64 = 1.0;

impl SynthPreset {
    /// Two radial pairs of Gaussians on opposite sides of the center, one full
    /// revolution over the run, plus a shallow broad well at the center.
    fn rotating(name: &str, width: usize, height: usize, timesteps: usize, noise_amp: f64) -> Self {
        let (orbit, half_gap, sigma) = (16.0, 3.0, 2.5);
        let omega = 2.0 * PI / 300.0;
        let bump = |radius: f64, phase: f64| GaussianSpec {
            amplitude: PRESET_AMPLITUDE,
            sigma,
            radius,
            phase,
            omega,
        };
        let mut gaussians = Vec::new();
        for phase in [0.0, PI] {
            gaussians.push(bump(orbit - half_gap, phase));
            gaussians.push(bump(orbit + half_gap, phase));
        }
        gaussians.push(GaussianSpec {
            amplitude: -0.2,
            sigma: 12.0,
            radius: 0.0,
            phase: 0.0,
            omega: 0.0,
        });
        let mut spec = GridSpec::new(width, height, timesteps).expect("preset sizes are valid");
        // keep the 63 x 63 world box of the 64 x 64 reference grid
        spec.spacing = (63.0 / (width - 1) as f64, 63.0 / (height - 1) as f64);
        Self {
            name: name.to_string(),
            spec,
            gaussians,
            noise_amp,
            orbit_radius: orbit,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "rotating-gaussians" => Ok(Self::rotating(name, 64, 64, 300, 0.0)),
            "rotating-gaussians-noisy" => Ok(Self::rotating(name, 64, 64, 300, 0.05 * PRESET_AMPLITUDE)),
            "rotating-gaussians-small" => Ok(Self::rotating(name, 16, 16, 8, 0.0)),
            other => Err(Error::Config(format!(
                "unknown synth preset `{other}` (expected one of {})",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    /// Same world geometry sampled on a different grid or run length.
    pub fn resized(&self, width: usize, height: usize, timesteps: usize) -> Result<Self> {
        let mut spec = GridSpec::new(width, height, timesteps)?;
        let world = (
            self.spec.spacing.0 * (self.spec.width - 1) as f64,
            self.spec.spacing.1 * (self.spec.height - 1) as f64,
        );
        spec.spacing = (world.0 / (width - 1) as f64, world.1 / (height - 1) as f64);
        spec.origin = self.spec.origin;
        spec.time_spacing = self.spec.time_spacing;
        Ok(Self { spec, ..self.clone() })
    }

    pub fn generate(&self, seed: u64) -> Result<TimeVaryingField> {
        rotating_gaussians(&self.spec, &self.gaussians, self.noise_amp, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_critical::{critical_points, CriticalKind};

    fn single(radius: f64, omega: f64) -> GaussianSpec {
        GaussianSpec {
            amplitude: 1.0,
            sigma: 3.0,
            radius,
            phase: 0.3,
            omega,
        }
    }

    #[test]
    fn static_gaussian_is_unimodal() {
        let spec = GridSpec::new(33, 33, 3).unwrap();
        let f = rotating_gaussians(&spec, &[single(0.0, 0.0)], 0.0, 1).unwrap();
        for t in 0..3 {
            let cps = critical_points(&f.slice(t).unwrap(), t);
            let maxima = cps.iter().filter(|c| c.kind == CriticalKind::Maximum).count();
            assert_eq!(maxima, 1);
        }
    }

    #[test]
    fn argmax_follows_the_analytic_center() {
        let spec = GridSpec::new(48, 48, 40).unwrap();
        let g = single(12.0, 2.0 * PI / 40.0);
        let f = rotating_gaussians(&spec, &[g], 0.0, 0).unwrap();
        let truth = &ground_truth_tracks(&[g], &spec)[0];
        for (t, c) in truth.iter().enumerate() {
            let s = f.slice_values(t).unwrap();
            let v = (0..s.len()).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap();
            let (x, y) = spec.slice_spec().vertex_position(v);
            assert!(
                (x - c.0).abs() <= 1.0 && (y - c.1).abs() <= 1.0,
                "t = {t}"
            );
        }
    }

    #[test]
    fn noise_is_seeded() {
        let spec = GridSpec::new(8, 8, 4).unwrap();
        let a = rotating_gaussians(&spec, &[single(1.0, 0.1)], 0.1, 7).unwrap();
        let b = rotating_gaussians(&spec, &[single(1.0, 0.1)], 0.1, 7).unwrap();
        let c = rotating_gaussians(&spec, &[single(1.0, 0.1)], 0.1, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let clean = rotating_gaussians(&spec, &[single(1.0, 0.1)], 0.0, 7).unwrap();
        assert!(a.values().iter().zip(clean.values()).all(|(x, y)| (x - y).abs() <= 0.1));
    }

    #[test]
    fn ground_truth_shapes() {
        let spec = GridSpec::new(9, 9, 300).unwrap();
        let still = ground_truth_tracks(&[single(2.0, 0.0)], &spec);
        assert!(still[0].iter().all(|p| p.0 == still[0][0].0 && p.1 == still[0][0].1));
        let centered = ground_truth_tracks(&[single(0.0, 1.0)], &spec);
        assert!(centered[0].iter().all(|p| (p.0, p.1) == (4.0, 4.0)));
        // one revolution over 300 steps: the angle at t advances by 2 pi t / 300
        let g = single(3.0, 2.0 * PI / 300.0);
        let spiral = &ground_truth_tracks(&[g], &spec)[0];
        let back = g.center((4.0, 4.0), 300);
        assert!((back.0 - spiral[0].0).abs() < 1e-9 && (back.1 - spiral[0].1).abs() < 1e-9);
        assert_eq!(spiral.len(), 300);
    }

    #[test]
    fn invalid_sigma_is_rejected() {
        let spec = GridSpec::new(5, 5, 2).unwrap();
        let mut g = single(0.0, 0.0);
        g.sigma = 0.0;
        assert!(rotating_gaussians(&spec, &[g], 0.0, 0).is_err());
    }

    #[test]
    fn presets_resolve() {
        for name in PRESET_NAMES {
            let p = SynthPreset::by_name(name).unwrap();
            assert!(p.spec.validate().is_ok());
        }
        assert!(SynthPreset::by_name("nope").is_err());
        let p = SynthPreset::by_name("rotating-gaussians")
            .unwrap()
            .resized(127, 64, 10)
            .unwrap();
        assert_eq!(p.spec.spacing.0, 0.5);
    }
}
