//! Scene validation: every violation carries a machine-readable code and a
//! path into the scene, so callers can print or match on them.

use super::{InteractionProfile, Scene};
use crate::dynamics::{stable_dt_limit, stiffest_zone_c_slope};

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub code: &'static str,
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.path, self.message)
    }
}

fn violation(code: &'static str, path: String, message: String) -> Violation {
    Violation {
        code,
        path,
        message,
    }
}

/// Returns an empty list iff every domain invariant holds and `dt` is below
/// the integrator stability bound for the stiffest profile in the scene.
pub fn validate_scene(scene: &Scene) -> Vec<Violation> {
    let mut out = Vec::new();

    check_finite(
        &mut out,
        "bounds",
        &[
            ("cx", scene.bounds.cx),
            ("cy", scene.bounds.cy),
            ("w", scene.bounds.w),
            ("h", scene.bounds.h),
        ],
    );
    if !(scene.bounds.w > 0.0) || !(scene.bounds.h > 0.0) {
        out.push(violation(
            "bounds.size",
            "bounds".into(),
            format!("bounds must have positive size, got {}x{}", scene.bounds.w, scene.bounds.h),
        ));
    }

    if !(scene.dt > 0.0) || !scene.dt.is_finite() {
        out.push(violation(
            "simulation.dt-nonpositive",
            "simulation.dt".into(),
            format!("dt must be a positive finite number, got {}", scene.dt),
        ));
    }
    if !(scene.duration > 0.0) || !scene.duration.is_finite() {
        out.push(violation(
            "simulation.duration-nonpositive",
            "simulation.duration".into(),
            format!("duration must be a positive finite number, got {}", scene.duration),
        ));
    }
    if scene.output_stride == 0 {
        out.push(violation(
            "simulation.stride-zero",
            "simulation.output_stride".into(),
            "output_stride must be at least 1".into(),
        ));
    }

    for (i, o) in scene.obstacles.iter().enumerate() {
        let path = format!("obstacles[{i}]");
        check_finite(
            &mut out,
            &path,
            &[
                ("cx", o.center.x),
                ("cy", o.center.y),
                ("w", o.width),
                ("h", o.height),
                ("angle", o.angle),
                ("spacing", o.spacing),
            ],
        );
        if !(o.width > 0.0) || !(o.height > 0.0) {
            out.push(violation(
                "obstacle.size",
                path.clone(),
                format!("obstacle must have positive size, got {}x{}", o.width, o.height),
            ));
        }
        if !(o.spacing > 0.0) {
            out.push(violation(
                "obstacle.spacing",
                format!("{path}.spacing"),
                format!("spacing must be positive, got {}", o.spacing),
            ));
        }
        check_profile(&mut out, &format!("{path}.profile"), &o.profile);
    }

    for (i, t) in scene.targets.iter().enumerate() {
        let path = format!("targets[{i}]");
        check_finite(
            &mut out,
            &path,
            &[
                ("x", t.pos.x),
                ("y", t.pos.y),
                ("k_t", t.k_t),
                ("z_t", t.z_t),
                ("f_sat", t.f_sat),
                ("r_capture", t.r_capture),
                ("v_capture", t.v_capture),
            ],
        );
        for (name, v) in [
            ("k_t", t.k_t),
            ("z_t", t.z_t),
            ("f_sat", t.f_sat),
            ("r_capture", t.r_capture),
        ] {
            if !(v > 0.0) {
                out.push(violation(
                    "target.param-nonpositive",
                    format!("{path}.{name}"),
                    format!("{name} must be positive, got {v}"),
                ));
            }
        }
    }

    for (i, inj) in scene.injectors.iter().enumerate() {
        let path = format!("injectors[{i}]");
        check_finite(
            &mut out,
            &path,
            &[
                ("x", inj.center.x),
                ("y", inj.center.y),
                ("radius", inj.radius),
                ("rate", inj.rate),
            ],
        );
        if !(inj.rate > 0.0) {
            out.push(violation(
                "injector.rate-nonpositive",
                format!("{path}.rate"),
                format!("rate must be positive, got {}", inj.rate),
            ));
        }
        if !(inj.radius >= 0.0) {
            out.push(violation(
                "injector.radius-negative",
                format!("{path}.radius"),
                format!("radius must be non-negative, got {}", inj.radius),
            ));
        }
        if inj.target.0 >= scene.targets.len() {
            out.push(violation(
                "injector.target-unresolved",
                format!("{path}.target_id"),
                format!("target index {} out of range", inj.target.0),
            ));
        }
        check_profile(&mut out, &format!("{path}.profile_min"), &inj.profile_min);
        check_profile(&mut out, &format!("{path}.profile_max"), &inj.profile_max);
        check_profile_bounds(&mut out, &path, &inj.profile_min, &inj.profile_max);
    }

    // Every sampled pair law must stay integrable at this dt.
    if scene.dt > 0.0 && scene.dt.is_finite() {
        let stiffest = stiffest_zone_c_slope(scene);
        if stiffest > 0.0 {
            let limit = stable_dt_limit(stiffest);
            if scene.dt >= limit {
                out.push(violation(
                    "simulation.dt-unstable",
                    "simulation.dt".into(),
                    format!(
                        "dt = {} exceeds the stability limit {:.4} for the stiffest zone-C slope {:.1}",
                        scene.dt, limit, stiffest
                    ),
                ));
            }
        }
    }

    out
}

fn check_finite(out: &mut Vec<Violation>, path: &str, fields: &[(&str, f64)]) {
    for (name, v) in fields {
        if !v.is_finite() {
            out.push(violation(
                "value.non-finite",
                format!("{path}.{name}"),
                format!("{name} must be finite, got {v}"),
            ));
        }
    }
}

fn check_profile(out: &mut Vec<Violation>, path: &str, p: &InteractionProfile) {
    if !p.all_finite() {
        out.push(violation(
            "profile.non-finite",
            path.to_string(),
            "profile fields must all be finite".into(),
        ));
        return;
    }
    if !(0.0 < p.d1 && p.d1 < p.d2 && p.d2 < p.d3) {
        out.push(violation(
            "profile.threshold-order",
            path.to_string(),
            format!("thresholds must satisfy 0 < d1 < d2 < d3, got {} / {} / {}", p.d1, p.d2, p.d3),
        ));
    }
    if !(p.f1 > p.f2 && p.f2 > 0.0) {
        out.push(violation(
            "profile.force-order",
            path.to_string(),
            format!("knot forces must satisfy f1 > f2 > 0, got {} / {}", p.f1, p.f2),
        ));
    }
    if !(p.z_a >= 0.0 && p.z_b >= 0.0 && p.z_c >= 0.0) {
        out.push(violation(
            "profile.viscosity-negative",
            path.to_string(),
            format!("viscosities must be non-negative, got {} / {} / {}", p.z_a, p.z_b, p.z_c),
        ));
    }
}

/// Bounds checks beyond per-profile validity: min <= max fieldwise, the
/// three gap ranges well-formed, and the force knots separated so every
/// sample keeps f1 > f2.
fn check_profile_bounds(
    out: &mut Vec<Violation>,
    path: &str,
    min: &InteractionProfile,
    max: &InteractionProfile,
) {
    if !(min.all_finite() && max.all_finite()) {
        return; // already reported per profile
    }
    let fieldwise = [
        (min.d1, max.d1),
        (min.d2, max.d2),
        (min.d3, max.d3),
        (min.f1, max.f1),
        (min.f2, max.f2),
        (min.z_a, max.z_a),
        (min.z_b, max.z_b),
        (min.z_c, max.z_c),
    ];
    if fieldwise.iter().any(|(lo, hi)| lo > hi) {
        out.push(violation(
            "profile.bounds-order",
            path.to_string(),
            "profile_min must be <= profile_max fieldwise".into(),
        ));
    }
    let gaps_ok = (max.d2 - max.d1) >= (min.d2 - min.d1) && (max.d3 - max.d2) >= (min.d3 - min.d2);
    if !gaps_ok {
        out.push(violation(
            "profile.bounds-order",
            path.to_string(),
            "threshold gap ranges of profile_min/profile_max are inverted".into(),
        ));
    }
    if !(min.f1 > max.f2) {
        out.push(violation(
            "profile.force-order",
            path.to_string(),
            format!(
                "sampled f1 (>= {}) must always exceed sampled f2 (<= {})",
                min.f1, max.f2
            ),
        ));
    }
}
