//! Volumes: exact for polytopes (cone decomposition), Monte Carlo otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest ambient dimension for exact volume.
pub const EXACT_DIM_LIMIT: usize = 6;
/// Largest vertex count for exact volume.
pub const EXACT_VERTEX_LIMIT: usize = 200;
/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Samples per deterministic block; each block has its own RNG stream.
const BLOCK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeMethod {
    /// Exact for polytopes within the caps, Monte Carlo for oracles.
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeEstimate {
    pub value: Scalar,
    /// Standard error; zero for exact and float polytope volumes.
    pub std_error: f64,
    pub samples: u64,
}

pub fn volume(body: &ConvexBody, method: VolumeMethod, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    match (method, body) {
        (VolumeMethod::MonteCarlo, _) | (VolumeMethod::Auto, ConvexBody::Oracle(_)) => {
            monte_carlo_volume(body, samples, seed, 0)
        }
        (_, ConvexBody::Polytope(p)) => {
            let dim = p.float().dim();
            if dim > EXACT_DIM_LIMIT || p.float().vertices().len() > EXACT_VERTEX_LIMIT {
                if method == VolumeMethod::Auto {
                    return monte_carlo_volume(body, samples, seed, 0);
                }
                return Err(Error::Capability(format!(
                    "exact volume is limited to dimension {EXACT_DIM_LIMIT} and {EXACT_VERTEX_LIMIT} vertices"
                )));
            }
            let value = match p.exact() {
                Some(e) => Scalar::Exact(e.volume()),
                None => Scalar::Float(p.float().volume()),
            };
            Ok(VolumeEstimate { value, std_error: 0.0, samples: 0 })
        }
        (VolumeMethod::Exact, ConvexBody::Oracle(_)) => {
            Err(Error::Capability("exact volume needs a polytope".into()))
        }
    }
}

fn block_hits(body: &ConvexBody, bbox: &[(f64, f64)], seed: u64, block: u64, count: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut x = vec![0.0; bbox.len()];
    let mut hits = 0;
    for _ in 0..count {
        for (xi, (lo, hi)) in x.iter_mut().zip(bbox) {
            *xi = rng.gen_range(*lo..*hi);
        }
        if body.gauge(&x) <= 1.0 {
            hits += 1;
        }
    }
    hits
}

/// Rejection sampling in the bounding box.
///
/// Samples are split into fixed blocks, each drawn from its own stream of a
/// seeded ChaCha generator, so the estimate does not depend on how blocks are
/// grouped into shards. `shards = 0` lets rayon schedule blocks freely.
pub fn monte_carlo_volume(body: &ConvexBody, samples: u64, seed: u64, shards: usize) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::Config("Monte Carlo volume needs at least one sample".into()));
    }
    let bbox = body.bounding_box();
    let box_volume: f64 = bbox.iter().map(|(lo, hi)| hi - lo).product();
    let blocks = samples.div_ceil(BLOCK);
    let block_len = |b: u64| if b + 1 == blocks { samples - b * BLOCK } else { BLOCK };
    let hits: u64 = if shards == 0 {
        (0..blocks).into_par_iter().map(|b| block_hits(body, &bbox, seed, b, block_len(b))).sum()
    } else {
        let per = blocks.div_ceil(shards as u64);
        (0..shards as u64)
            .into_par_iter()
            .map(|s| {
                (s * per..((s + 1) * per).min(blocks)).map(|b| block_hits(body, &bbox, seed, b, block_len(b))).sum::<u64>()
            })
            .sum()
    };
    let frac = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        value: Scalar::Float(box_volume * frac),
        std_error: box_volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn cube(dim: usize) -> ConvexBody {
        let pts: Vec<Vec<i64>> =
            (0..1 << dim).map(|k: usize| (0..dim).map(|i| if k >> i & 1 == 1 { 1 } else { -1 }).collect()).collect();
        ConvexBody::from_int_points(dim, &pts).unwrap()
    }

    #[test]
    fn exact_examples() {
        for n in 1..=4 {
            let v = volume(&cube(n), VolumeMethod::Exact, 0, 0).unwrap();
            assert_eq!(v.value, Scalar::Exact(Rational::from_integer((1i64 << n).into())));
        }
        let c3 = cube(3).polar_dual().unwrap();
        assert_eq!(volume(&c3, VolumeMethod::Auto, 0, 0).unwrap().value, Scalar::ratio(4, 3));
    }

    #[test]
    fn zero_samples_is_config_error() {
        assert!(matches!(monte_carlo_volume(&ConvexBody::ball(2, 1.0), 0, 1, 0), Err(Error::Config(_))));
    }

    #[test]
    fn oracle_exact_is_capability_error() {
        assert!(matches!(volume(&ConvexBody::ball(2, 1.0), VolumeMethod::Exact, 0, 0), Err(Error::Capability(_))));
    }

    #[test]
    fn shard_count_does_not_change_estimate() {
        let b = ConvexBody::ball(3, 1.0);
        let a = monte_carlo_volume(&b, 100_000, 42, 0).unwrap();
        let c = monte_carlo_volume(&b, 100_000, 42, 3).unwrap();
        let d = monte_carlo_volume(&b, 100_000, 42, 7).unwrap();
        assert_eq!(a.value, c.value);
        assert_eq!(a.value, d.value);
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        assert!((a.value.to_f64() - exact).abs() < 4.0 * a.std_error);
    }
}
