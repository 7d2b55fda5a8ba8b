//! Per-person parameter jitter: every profile field is drawn uniformly
//! between its bounds. Thresholds are sampled via the gaps (d1, d2-d1,
//! d3-d2) instead of directly, so d1 < d2 < d3 holds by construction and
//! no rejection loop is needed.

use rand::Rng;

use super::InteractionProfile;

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    // lo + u * (hi - lo) returns lo exactly when the interval is degenerate.
    lo + rng.random::<f64>() * (hi - lo)
}

/// Draw one profile between `min` and `max` (fieldwise). Deterministic
/// given the generator state; draw order is gaps, forces, viscosities.
pub fn sample_profile<R: Rng>(
    min: &InteractionProfile,
    max: &InteractionProfile,
    rng: &mut R,
) -> InteractionProfile {
    let g1 = uniform(rng, min.d1, max.d1);
    let g2 = uniform(rng, min.d2 - min.d1, max.d2 - max.d1);
    let g3 = uniform(rng, min.d3 - min.d2, max.d3 - max.d2);
    let d1 = g1;
    let d2 = d1 + g2;
    let d3 = d2 + g3;
    InteractionProfile {
        d1,
        d2,
        d3,
        f1: uniform(rng, min.f1, max.f1),
        f2: uniform(rng, min.f2, max.f2),
        z_a: uniform(rng, min.z_a, max.z_a),
        z_b: uniform(rng, min.z_b, max.z_b),
        z_c: uniform(rng, min.z_c, max.z_c),
    }
}
