//! Shared helpers for the integration tests: seeded random distributions and
//! the reference region vectors.
#![allow(dead_code)]

use ordinal_peer::{make_distribution, OrdinalDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponential weights with roughly 20% of the categories zeroed, so that
/// both dense and sparse vectors are exercised.
pub fn random_dist(rng: &mut ChaCha8Rng, n: usize) -> OrdinalDistribution {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random::<f64>() < 0.2 {
                    0.0
                } else {
                    -(1.0 - rng.random::<f64>()).ln()
                }
            })
            .collect();
        if w.iter().sum::<f64>() > 0.0 {
            return make_distribution(&w).unwrap();
        }
    }
}

pub fn dist(v: &[f64]) -> OrdinalDistribution {
    make_distribution(v).unwrap()
}

pub const EAST_ARNHEM: [f64; 10] = [0.659, 0.0, 0.0, 0.0, 0.0, 0.0, 0.032, 0.122, 0.167, 0.02];
pub const KU_RING_GAI: [f64; 10] = [0.0, 0.0, 0.0, 0.0, 0.004, 0.01, 0.021, 0.038, 0.170, 0.757];
pub const WEST_TORRENS: [f64; 10] = [0.0120, 0.0493, 0.1825, 0.2891, 0.1522, 0.0896, 0.0771, 0.0597, 0.0839, 0.0045];
pub const DALY_TIWI_WEST_ARNHEM: [f64; 10] = [0.8159, 0.0792, 0.0234, 0.0232, 0.0, 0.0, 0.0, 0.0578, 0.0, 0.0];
/// Synthetic vectors fitted to the reference summary statistics of regions
/// whose full vectors are not available.
pub const WEST_ARNHEM: [f64; 10] = [0.7781, 0.1543, 0.0006, 0.0008, 0.0056, 0.001, 0.0187, 0.032, 0.0017, 0.0072];
pub const SOUTH_CANBERRA: [f64; 10] = [0.0407, 0.0211, 0.0068, 0.0221, 0.0314, 0.0551, 0.0515, 0.0676, 0.0625, 0.6412];
pub const WESTON_CREEK: [f64; 10] = [0.0, 0.0, 0.0123, 0.0608, 0.0593, 0.0593, 0.0632, 0.2864, 0.0628, 0.3959];
pub const LAKE_MACQUARIE_EAST: [f64; 10] =
    [0.0945, 0.0994, 0.0744, 0.0994, 0.0999, 0.1106, 0.1321, 0.1107, 0.0874, 0.0916];
pub const AUBURN: [f64; 10] = [0.1602, 0.3758, 0.1434, 0.1268, 0.0683, 0.0575, 0.0254, 0.0153, 0.0102, 0.0171];

pub const FIXTURE_CSV: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/regions_fixture.csv");
