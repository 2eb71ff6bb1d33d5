//! Shared fixtures for the criterion benches.

use afvlasov::{AfSlice, SimConfig, Simulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random periodic slice with `n` cells, fixed seed.
pub fn random_slice(n: usize) -> AfSlice {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let interfaces = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let averages = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    AfSlice::new(interfaces, averages)
}

/// Random point lattice of `2 n` values, fixed seed.
pub fn random_points(n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64 + 1);
    (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Weak Landau simulation at `n x n` together with its base step.
pub fn weak_landau(n: usize) -> (Simulation, f64) {
    let cfg = SimConfig::weak_landau()
        .with_resolution(n)
        .expect("power-of-two resolution");
    let dt = cfg.base_dt();
    (Simulation::new(&cfg).expect("preset is valid"), dt)
}
