//! Two-sided geometric noise and threshold-crossing times.
//!
//! `Geom(gamma)` is the integer distribution with
//! `Pr[k] = (gamma - 1) / (gamma + 1) * gamma^{-|k|}` for `gamma > 1`.
//! Adding `Geom(exp(eps / delta))` to a quantity with sensitivity `delta`
//! releases it with privacy parameter `eps`.

use rand::Rng;

use crate::{Error, Result};

/// Parameter of a two-sided geometric distribution; `gamma > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomParam {
    gamma: f64,
    ln_gamma: f64,
}

impl GeomParam {
    pub fn new(gamma: f64) -> Result<GeomParam> {
        if !gamma.is_finite() || gamma <= 1.0 {
            return Err(Error::Domain(format!(
                "geometric parameter must be finite and > 1, got {gamma}"
            )));
        }
        Ok(GeomParam {
            gamma,
            ln_gamma: gamma.ln(),
        })
    }

    /// `Geom(exp(eps))`: the scale used to release a sensitivity-1 count
    /// with privacy parameter `eps`.
    pub fn from_epsilon(eps: f64) -> Result<GeomParam> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::Domain(format!(
                "noise epsilon must be finite and positive, got {eps}"
            )));
        }
        GeomParam::new(eps.exp())
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }

    pub fn pmf(self, k: i64) -> f64 {
        let k = k.unsigned_abs() as f64;
        (self.gamma - 1.0) / (self.gamma + 1.0) * (-k * self.ln_gamma).exp()
    }

    /// `Pr[X > s]` in closed form:
    /// `gamma^{-s} / (gamma + 1)` for `s >= 0`, and by symmetry
    /// `1 - gamma^{s+1} / (gamma + 1)` for `s < 0`.
    pub fn tail_above(self, s: i64) -> f64 {
        if s >= 0 {
            (-(s as f64) * self.ln_gamma).exp() / (self.gamma + 1.0)
        } else {
            1.0 - ((s + 1) as f64 * self.ln_gamma).exp() / (self.gamma + 1.0)
        }
    }

    /// Inverse-CDF sampler: one uniform picks the magnitude, one the sign.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> i64 {
        let u: f64 = rng.random();
        // Magnitude CDF: Pr[|X| <= j] = 1 - 2 gamma^{-j} / (gamma + 1).
        let c = (1.0 - u) * (self.gamma + 1.0) / 2.0;
        let magnitude = if c >= 1.0 {
            0
        } else {
            let x = -c.ln() / self.ln_gamma;
            (x.floor() as i64).saturating_add(1)
        };
        if magnitude == 0 {
            0
        } else if rng.random::<bool>() {
            magnitude
        } else {
            -magnitude
        }
    }
}

/// Releases `value` (sensitivity `sensitivity`) with parameter `epsilon` by
/// adding `Geom(exp(epsilon / sensitivity))` noise.
pub fn geometric_mechanism<R: Rng + ?Sized>(
    value: i64,
    sensitivity: u32,
    epsilon: f64,
    rng: &mut R,
) -> Result<i64> {
    if sensitivity == 0 {
        return Err(Error::Domain("sensitivity must be at least 1".into()));
    }
    let p = GeomParam::from_epsilon(epsilon / sensitivity as f64)?;
    Ok(value.saturating_add(p.sample(rng)))
}

/// Index of the first success in a sequence of independent checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingTime {
    /// The k-th upcoming check succeeds, `k >= 1`.
    At(u64),
    /// The per-check success probability underflows to zero.
    Never,
}

/// Samples how many more per-step checks of the form
/// `cnt + persistent_noise + N > threshold` (fresh `N ~ Geom` each step) run
/// until the first success, assuming `cnt` and `persistent_noise` stay fixed.
/// Each check succeeds independently with `q = Pr[N > s]` where
/// `s = threshold - cnt - persistent_noise`, so the result is geometric
/// with parameter `q`; the closed-form tail replaces step-by-step simulation.
pub fn sample_crossing_time<R: Rng + ?Sized>(
    cnt: i64,
    persistent_noise: i64,
    threshold: i64,
    p: GeomParam,
    rng: &mut R,
) -> CrossingTime {
    let s = threshold
        .saturating_sub(cnt)
        .saturating_sub(persistent_noise);
    let q = p.tail_above(s);
    if q <= 0.0 {
        return CrossingTime::Never;
    }
    if q >= 1.0 {
        return CrossingTime::At(1);
    }
    let u: f64 = rng.random();
    // Smallest t with 1 - (1-q)^t > u.
    let t = ((-u).ln_1p() / (-q).ln_1p()).floor() as u64;
    CrossingTime::At(t.saturating_add(1))
}

/// Stand-in generator for code paths that must not draw randomness; any
/// actual draw panics. Lets the noiseless variants share the sampling
/// signatures while staying provably deterministic.
pub(crate) struct NoRng;

impl rand::RngCore for NoRng {
    fn next_u32(&mut self) -> u32 {
        unreachable!("noiseless paths draw no randomness")
    }

    fn next_u64(&mut self) -> u64 {
        unreachable!("noiseless paths draw no randomness")
    }

    fn fill_bytes(&mut self, _dest: &mut [u8]) {
        unreachable!("noiseless paths draw no randomness")
    }
}
