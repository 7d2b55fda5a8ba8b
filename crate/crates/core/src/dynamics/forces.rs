//! Visco-elastic force laws.
//!
//! The repulsive interaction is a continuous piecewise-linear curve through
//! the knots (d1, f1), (d2, f2), (d3, 0), zero beyond d3, and a much
//! stiffer linear continuation inside d1 so zone C is effectively
//! impenetrable at walking speeds. The dissipative term applies a per-zone
//! viscosity to the radial closing speed, clamped at zero so separation is
//! never resisted into attraction.

use crate::math::Vec2;
use crate::scene::{InteractionProfile, ParticleKind, ParticleState, TargetSpec};

/// Effective profile governing one interacting pair.
pub type PairLaw = InteractionProfile;

/// Amplification of the zone-C slope over the zone-B slope.
pub const DEFAULT_ZONE_C_AMPLIFICATION: f64 = 10.0;

/// Distance stand-in when two particles coincide exactly.
pub const COINCIDENT_EPSILON: f64 = 1e-6;

/// Tunables that are fixed per run rather than per scene.
#[derive(Debug, Clone, Copy)]
pub struct SimParams {
    pub zone_c_amplification: f64,
    /// Use the norm of the relative velocity in the dissipative term
    /// instead of the clamped radial closing speed.
    pub literal_damping: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            zone_c_amplification: DEFAULT_ZONE_C_AMPLIFICATION,
            literal_damping: false,
        }
    }
}

/// Slope of the inner (zone C) segment.
pub fn zone_c_slope(law: &PairLaw, c_amp: f64) -> f64 {
    c_amp * (law.f1 - law.f2) / (law.d2 - law.d1)
}

/// Repulsion magnitude at separation `dist`; continuous everywhere and
/// exactly zero for `dist >= d3`.
pub fn elastic_magnitude(law: &PairLaw, dist: f64, c_amp: f64) -> f64 {
    debug_assert!(dist >= 0.0);
    if dist >= law.d3 {
        0.0
    } else if dist >= law.d2 {
        law.f2 * (law.d3 - dist) / (law.d3 - law.d2)
    } else if dist >= law.d1 {
        law.f2 + (law.f1 - law.f2) * (law.d2 - dist) / (law.d2 - law.d1)
    } else {
        law.f1 + (law.d1 - dist) * zone_c_slope(law, c_amp)
    }
}

/// Viscosity of the zone containing `dist`.
pub fn zone_viscosity(law: &PairLaw, dist: f64) -> f64 {
    if dist < law.d1 {
        law.z_c
    } else if dist < law.d2 {
        law.z_b
    } else {
        law.z_a
    }
}

/// Pair law: person-person pairs take the fieldwise mean of their
/// profiles; a fixed particle dictates its own envelope verbatim.
pub fn combine_profiles(a: &ParticleState, b: &ParticleState) -> PairLaw {
    debug_assert!(
        !(a.kind == ParticleKind::Fixed && b.kind == ParticleKind::Fixed),
        "fixed-fixed pairs are never evaluated"
    );
    match (a.kind, b.kind) {
        (_, ParticleKind::Fixed) => b.profile,
        (ParticleKind::Fixed, _) => a.profile,
        _ => InteractionProfile::mean(&a.profile, &b.profile),
    }
}

/// Force exerted on `this` by `other` under `law`. Zero for separations at
/// or beyond d3. Coincident positions fall back to a deterministic unit
/// direction from the id pair with the distance clamped to
/// [`COINCIDENT_EPSILON`], which keeps the step finite and antisymmetric.
pub fn pair_force(
    this: &ParticleState,
    other: &ParticleState,
    law: &PairLaw,
    params: &SimParams,
) -> Vec2 {
    let delta = this.pos - other.pos;
    let raw_dist = delta.norm();
    let (u, dist) = if raw_dist == 0.0 {
        (separation_fallback_dir(this.id, other.id), COINCIDENT_EPSILON)
    } else {
        (delta / raw_dist, raw_dist)
    };
    if dist >= law.d3 {
        return Vec2::ZERO;
    }
    let elastic = elastic_magnitude(law, dist, params.zone_c_amplification);
    let speed_term = if params.literal_damping {
        (this.vel - other.vel).norm()
    } else {
        // Radial closing speed: positive while approaching, clamped so
        // receding pairs feel no viscous push.
        (this.vel - other.vel).dot(-u).max(0.0)
    };
    (elastic + zone_viscosity(law, dist) * speed_term) * u
}

/// Saturated visco-elastic attraction toward a target. The elastic pull is
/// capped at `f_sat`, so against the damping `z_t` a free walker settles at
/// speed `f_sat / z_t`.
pub fn target_force(p: &ParticleState, t: &TargetSpec) -> Vec2 {
    let delta = t.pos - p.pos;
    let dist = delta.norm();
    let elastic = if dist > 0.0 {
        (delta / dist) * (t.k_t * dist).min(t.f_sat)
    } else {
        Vec2::ZERO
    };
    elastic - p.vel * t.z_t
}

/// Deterministic symmetry-breaking direction for exactly coincident
/// particles: hashed from the unordered id pair, negated for the higher id
/// so action-reaction still holds bitwise.
fn separation_fallback_dir(this_id: u64, other_id: u64) -> Vec2 {
    let lo = this_id.min(other_id);
    let hi = this_id.max(other_id);
    let h = splitmix64(splitmix64(lo).wrapping_add(hi));
    let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
    let dir = Vec2::new(angle.cos(), angle.sin());
    if this_id < other_id {
        dir
    } else {
        -dir
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{default_profile, Phase, TargetId};

    fn law_13560() -> PairLaw {
        default_profile() // d1=1, d2=3, d3=5, f1=60, f2=6
    }

    fn person(id: u64, pos: Vec2, vel: Vec2) -> ParticleState {
        ParticleState {
            id,
            kind: ParticleKind::Person,
            pos,
            vel,
            profile: default_profile(),
            target: Some(TargetId(0)),
            phase: Phase::Active,
        }
    }

    #[test]
    fn zero_beyond_and_at_the_outer_threshold() {
        let law = law_13560();
        assert_eq!(elastic_magnitude(&law, 6.0, 10.0), 0.0);
        assert_eq!(elastic_magnitude(&law, 5.0, 10.0), 0.0);
    }

    #[test]
    fn knot_interpolation_matches_hand_values() {
        let law = law_13560();
        // Between (3, 6) and (5, 0): dist 4 -> 3.
        assert!((elastic_magnitude(&law, 4.0, 10.0) - 3.0).abs() < 1e-12);
        // Between (1, 60) and (3, 6): dist 2 -> 33.
        assert!((elastic_magnitude(&law, 2.0, 10.0) - 33.0).abs() < 1e-12);
        // Zone C with c_amp = 10: K_C = 10 * 54 / 2 = 270; 60 + 0.1 * 270 = 87.
        assert!((elastic_magnitude(&law, 0.9, 10.0) - 87.0).abs() < 1e-12);
    }

    #[test]
    fn continuity_at_every_knot() {
        let law = law_13560();
        let c_amp = 10.0;
        let slope_max = zone_c_slope(&law, c_amp);
        let eps = 1e-9;
        for knot in [law.d1, law.d2, law.d3] {
            let below = elastic_magnitude(&law, knot - eps, c_amp);
            let above = elastic_magnitude(&law, knot + eps, c_amp);
            assert!(
                (below - above).abs() <= slope_max * 2.0 * eps,
                "discontinuity at {knot}: {below} vs {above}"
            );
        }
    }

    #[test]
    fn combine_mean_and_fixed_override() {
        let a = person(0, Vec2::ZERO, Vec2::ZERO);
        let mut b = person(1, Vec2::new(1.0, 0.0), Vec2::ZERO);
        assert_eq!(combine_profiles(&a, &b), a.profile);

        b.profile.d1 = 2.0;
        assert_eq!(combine_profiles(&a, &b).d1, 1.5);

        let mut wall = person(2, Vec2::new(2.0, 0.0), Vec2::ZERO);
        wall.kind = ParticleKind::Fixed;
        wall.target = None;
        wall.profile.f1 = 99.0;
        assert_eq!(combine_profiles(&a, &wall), wall.profile);
        assert_eq!(combine_profiles(&wall, &a), wall.profile);
    }

    #[test]
    fn no_force_beyond_d3_whatever_the_velocities() {
        let law = law_13560();
        let a = person(0, Vec2::ZERO, Vec2::new(5.0, 0.0));
        let b = person(1, Vec2::new(law.d3 + 1.0, 0.0), Vec2::new(-5.0, 0.0));
        assert_eq!(pair_force(&a, &b, &law, &SimParams::default()), Vec2::ZERO);
    }

    #[test]
    fn action_reaction_is_bitwise() {
        let law = law_13560();
        let a = person(0, Vec2::new(0.3, -0.7), Vec2::new(0.9, 0.1));
        let b = person(1, Vec2::new(1.8, 1.1), Vec2::new(-0.4, -0.6));
        let params = SimParams::default();
        let fab = pair_force(&a, &b, &law, &params);
        let fba = pair_force(&b, &a, &law, &params);
        assert_eq!((fab + fba).to_bits(), Vec2::ZERO.to_bits());
    }

    #[test]
    fn closing_pair_in_zone_b_matches_hand_value() {
        let law = law_13560();
        // dist 2 (zone B, z_b = 2), radial closing speed 1.5: 33 + 3 = 36.
        let a = person(0, Vec2::ZERO, Vec2::new(0.75, 0.0));
        let b = person(1, Vec2::new(2.0, 0.0), Vec2::new(-0.75, 0.0));
        let f = pair_force(&a, &b, &law, &SimParams::default());
        assert!((f.norm() - 36.0).abs() < 1e-12);
        assert!(f.x < 0.0, "repulsion must push a away from b");
    }

    #[test]
    fn separating_pair_feels_no_viscous_term() {
        let law = law_13560();
        let a = person(0, Vec2::ZERO, Vec2::new(-1.0, 0.0));
        let b = person(1, Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.0));
        let f = pair_force(&a, &b, &law, &SimParams::default());
        assert!((f.norm() - 33.0).abs() < 1e-12);
    }

    #[test]
    fn literal_damping_uses_the_velocity_norm() {
        let law = law_13560();
        let params = SimParams {
            literal_damping: true,
            ..SimParams::default()
        };
        // Same separating pair: |v_rel| = 2, so 33 + 2*2 = 37.
        let a = person(0, Vec2::ZERO, Vec2::new(-1.0, 0.0));
        let b = person(1, Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.0));
        let f = pair_force(&a, &b, &law, &params);
        assert!((f.norm() - 37.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_positions_fall_back_deterministically() {
        let law = law_13560();
        let a = person(4, Vec2::new(1.0, 1.0), Vec2::ZERO);
        let b = person(9, Vec2::new(1.0, 1.0), Vec2::ZERO);
        let params = SimParams::default();
        let fab = pair_force(&a, &b, &law, &params);
        let fba = pair_force(&b, &a, &law, &params);
        assert!(fab.norm() > 0.0);
        assert!(fab.is_finite() && fba.is_finite());
        assert_eq!((fab + fba).to_bits(), Vec2::ZERO.to_bits());
        assert_eq!(fab, pair_force(&a, &b, &law, &params));
    }

    #[test]
    fn target_force_at_rest_on_target_is_zero() {
        let t = TargetSpec {
            id: "T".into(),
            pos: Vec2::new(2.0, 3.0),
            k_t: 1.0,
            z_t: 2.0,
            f_sat: 3.0,
            r_capture: 1.0,
            v_capture: 0.5,
        };
        let p = person(0, t.pos, Vec2::ZERO);
        assert_eq!(target_force(&p, &t), Vec2::ZERO);
    }

    #[test]
    fn unsaturated_target_force_is_a_plain_spring() {
        let t = TargetSpec {
            id: "T".into(),
            pos: Vec2::new(0.5, 0.0),
            k_t: 1.0,
            z_t: 2.0,
            f_sat: 3.0,
            r_capture: 1.0,
            v_capture: 0.5,
        };
        let p = person(0, Vec2::ZERO, Vec2::ZERO);
        let f = target_force(&p, &t);
        assert!((f.x - 0.5).abs() < 1e-15 && f.y == 0.0);
    }

    #[test]
    fn saturation_sets_the_free_speed() {
        let t = TargetSpec {
            id: "T".into(),
            pos: Vec2::new(1000.0, 0.0),
            k_t: 1.0,
            z_t: 2.0,
            f_sat: 3.0,
            r_capture: 1.0,
            v_capture: 0.5,
        };
        // At v = f_sat / z_t toward the target the net force vanishes.
        let p = person(0, Vec2::ZERO, Vec2::new(1.5, 0.0));
        let f = target_force(&p, &t);
        assert!(f.norm() < 1e-12);
    }
}
