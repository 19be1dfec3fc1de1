use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Weight initialization scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    /// U(−x, x) with x = √(6 / (fan_in + fan_out)).
    #[default]
    Xavier,
    /// U(−0.1, 0.1).
    UniformSmall,
}

pub const UNIFORM_SMALL_BOUND: f64 = 0.1;

/// Xavier (Glorot) uniform bound √(6 / (fan_in + fan_out)).
pub fn xavier_bound(fan_in: usize, fan_out: usize) -> Result<f64> {
    let fans = fan_in + fan_out;
    if fans == 0 {
        return Err(Error::InvalidInput("Xavier init needs fan_in + fan_out > 0".into()));
    }
    Ok((6.0 / fans as f64).sqrt())
}

/// `count` draws from U(−x, x), x = √(6 / (fan_in + fan_out)), seeded.
pub fn xavier_init<T: Real>(fan_in: usize, fan_out: usize, count: usize, seed: u64) -> Result<Vec<T>> {
    let mut rng = crate::rng::stage_rng(seed, crate::rng::Stage::QnnInit);
    xavier_sample(fan_in, fan_out, count, &mut rng)
}

pub(crate) fn xavier_sample<T: Real, R: Rng>(
    fan_in: usize,
    fan_out: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<T>> {
    let bound = xavier_bound(fan_in, fan_out)?;
    Ok(uniform_sample(bound, count, rng))
}

pub(crate) fn uniform_sample<T: Real, R: Rng>(bound: f64, count: usize, rng: &mut R) -> Vec<T> {
    let dist = Uniform::new(-bound, bound).expect("bound is positive and finite");
    (0..count).map(|_| T::lit(dist.sample(rng))).collect()
}
