//! Seeded randomness and symmetric stable (Levy) sampling.
//!
//! Every stochastic component in the crate draws from a [`RandomSource`].
//! Sources are reproducible from a 64-bit seed, and child sources for
//! independent runs are derived from `(seed, index)` alone, so run `r` of an
//! experiment gets the same stream no matter which worker executes it.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RngError {
    #[error("invalid range: lo ({lo}) must be strictly below hi ({hi})")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// SplitMix64 finalizer, used to decorrelate derived seeds.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed of child `index` of `seed`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

/// A deterministic single-owner random stream.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent child stream; a pure function of `(self.seed(), index)`,
    /// unaffected by how much of the parent stream has been consumed.
    pub fn child(&self, index: u64) -> Self {
        Self::new(child_seed(self.seed, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64, RngError> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(RngError::InvalidRange { lo, hi });
        }
        Ok(self.rng.random_range(lo..hi))
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn gaussian(&mut self, mean: f64, std: f64) -> Result<f64, RngError> {
        if std.is_nan() || std < 0.0 {
            return Err(RngError::InvalidParameter(format!(
                "standard deviation must be non-negative, got {std}"
            )));
        }
        let z: f64 = StandardNormal.sample(&mut self.rng);
        Ok(mean + std * z)
    }

    /// One draw from the symmetric stable law `S(lambda, 0, scale)` using the
    /// Chambers-Mallows-Stuck transform.
    ///
    /// `lambda = 2` gives a normal with variance `2 * scale^2` and
    /// `lambda = 1` gives a Cauchy with the given scale.
    pub fn sample_stable(&mut self, params: StableParams) -> f64 {
        // V on the open interval (-pi/2, pi/2); a zero unit draw would land on
        // the endpoint, where cos(V) = 0.
        let mut u = self.unit();
        while u == 0.0 {
            u = self.unit();
        }
        let v = PI * u - FRAC_PI_2;
        let lambda = params.lambda;
        let x = if lambda == 1.0 {
            v.tan()
        } else {
            let w: f64 = Exp1.sample(&mut self.rng);
            let lv = lambda * v;
            lv.sin() / v.cos().powf(1.0 / lambda)
                * ((v - lv).cos() / w).powf((1.0 - lambda) / lambda)
        };
        params.scale * x
    }

    /// `d` independent stable draws, in coordinate order.
    pub fn sample_stable_vector(
        &mut self,
        params: StableParams,
        d: usize,
    ) -> Result<Vec<f64>, RngError> {
        if d == 0 {
            return Err(RngError::InvalidParameter(
                "vector length must be at least 1".into(),
            ));
        }
        Ok((0..d).map(|_| self.sample_stable(params)).collect())
    }
}

/// Stability index and scale of a symmetric stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    lambda: f64,
    scale: f64,
}

impl StableParams {
    pub fn new(lambda: f64, scale: f64) -> Result<Self, RngError> {
        if !(lambda > 0.0 && lambda <= 2.0) {
            return Err(RngError::InvalidParameter(format!(
                "stability index must lie in (0, 2], got {lambda}"
            )));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(RngError::InvalidParameter(format!(
                "scale must be positive, got {scale}"
            )));
        }
        Ok(Self { lambda, scale })
    }

    /// Unit-scale law with the given stability index.
    pub fn standard(lambda: f64) -> Result<Self, RngError> {
        Self::new(lambda, 1.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl Default for StableParams {
    fn default() -> Self {
        Self {
            lambda: 1.5,
            scale: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        assert_eq!(a.uniform(0.0, 1.0).unwrap(), b.uniform(0.0, 1.0).unwrap());
        assert_eq!(a.uniform(0.0, 1.0).unwrap(), b.uniform(0.0, 1.0).unwrap());
        assert_eq!(a.gaussian(0.0, 1.0).unwrap(), b.gaussian(0.0, 1.0).unwrap());
    }

    #[test]
    fn child_is_pure_in_seed_and_index() {
        let mut parent = RandomSource::new(99);
        let before = parent.child(3);
        let _ = parent.unit();
        let after = parent.child(3);
        assert_eq!(before.seed(), after.seed());
        assert_ne!(parent.child(3).seed(), parent.child(4).seed());
    }

    #[test]
    fn empty_range_rejected() {
        let mut src = RandomSource::new(1);
        assert_eq!(
            src.uniform(5.0, 5.0),
            Err(RngError::InvalidRange { lo: 5.0, hi: 5.0 })
        );
        assert!(src.uniform(6.0, 5.0).is_err());
        assert!(src.uniform(f64::NAN, 5.0).is_err());
    }

    #[test]
    fn uniform_mean() {
        let mut src = RandomSource::new(11);
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = src.uniform(0.0, 1.0).unwrap();
            assert!((0.0..1.0).contains(&u));
            sum += u;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.002);
    }

    #[test]
    fn gaussian_zero_std_is_mean() {
        let mut src = RandomSource::new(3);
        assert_eq!(src.gaussian(4.25, 0.0).unwrap(), 4.25);
        assert!(src.gaussian(0.0, -1.0).is_err());
    }

    #[test]
    fn gaussian_variance() {
        let mut src = RandomSource::new(5);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| src.gaussian(0.0, 1.0).unwrap()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn stable_params_validation() {
        assert!(StableParams::new(0.0, 1.0).is_err());
        assert!(StableParams::new(2.5, 1.0).is_err());
        assert!(StableParams::new(1.5, 0.0).is_err());
        assert!(StableParams::new(2.0, 1.0).is_ok());
        assert_eq!(StableParams::default().lambda(), 1.5);
    }

    #[test]
    fn cauchy_half_mass_inside_unit() {
        let mut src = RandomSource::new(21);
        let p = StableParams::standard(1.0).unwrap();
        let n = 1_000_000;
        let inside = (0..n).filter(|_| src.sample_stable(p).abs() <= 1.0).count();
        assert!((inside as f64 / n as f64 - 0.5).abs() < 0.003);
    }

    #[test]
    fn index_two_has_variance_two() {
        let mut src = RandomSource::new(22);
        let p = StableParams::standard(2.0).unwrap();
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| src.sample_stable(p)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 2.0).abs() < 0.03, "variance {var}");
    }

    #[test]
    fn vector_of_one_matches_scalar() {
        let p = StableParams::default();
        let mut a = RandomSource::new(8);
        let mut b = RandomSource::new(8);
        assert_eq!(
            a.sample_stable_vector(p, 1).unwrap(),
            vec![b.sample_stable(p)]
        );
        assert!(a.sample_stable_vector(p, 0).is_err());
    }

    #[test]
    fn vector_replays() {
        let p = StableParams::default();
        let a = RandomSource::new(9).sample_stable_vector(p, 10).unwrap();
        let b = RandomSource::new(9).sample_stable_vector(p, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coordinate_medians_near_zero() {
        let p = StableParams::default();
        let mut src = RandomSource::new(10);
        let n = 100_000;
        let d = 4;
        let mut cols = (0..d).map(|_| Vec::with_capacity(n)).collect::<Vec<_>>();
        for _ in 0..n {
            for (c, x) in cols.iter_mut().zip(src.sample_stable_vector(p, d).unwrap()) {
                c.push(x);
            }
        }
        for mut c in cols {
            c.sort_by(f64::total_cmp);
            let median = 0.5 * (c[n / 2 - 1] + c[n / 2]);
            assert!(median.abs() < 0.01, "median {median}");
        }
    }

    #[test]
    fn scale_multiplies_the_draw() {
        let mut a = RandomSource::new(12);
        let mut b = RandomSource::new(12);
        let x = a.sample_stable(StableParams::new(1.5, 1.0).unwrap());
        let y = b.sample_stable(StableParams::new(1.5, 3.0).unwrap());
        assert!((3.0 * x - y).abs() <= 1e-12 * y.abs().max(1.0));
    }
}
