//! Strict JSON scene-document parsing.
//!
//! The document schema mirrors the `Scene` type; unknown keys are rejected
//! and every error names the offending path.

use serde::Deserialize;

use super::{
    default_profile, default_profile_bounds, InjectorSpec, InteractionProfile, ObstacleSpec, Rect,
    Scene, TargetId, TargetSpec, DEFAULT_CAPTURE_RADIUS, DEFAULT_CAPTURE_SPEED, DEFAULT_DT,
    DEFAULT_OUTPUT_STRIDE, DEFAULT_SEED, DEFAULT_TARGET_DAMPING, DEFAULT_TARGET_SATURATION,
    DEFAULT_TARGET_STIFFNESS,
};
use crate::math::Vec2;

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("reference error at {path}: no target with id \"{target}\"")]
    Reference { path: String, target: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    bounds: RawRect,
    simulation: RawSimulation,
    #[serde(default)]
    targets: Vec<RawTarget>,
    #[serde(default)]
    injectors: Vec<RawInjector>,
    #[serde(default)]
    obstacles: Vec<RawObstacle>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRect {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    #[serde(default = "d_dt")]
    dt: f64,
    duration: f64,
    #[serde(default = "d_seed")]
    seed: u64,
    #[serde(default = "d_stride")]
    output_stride: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    id: String,
    x: f64,
    y: f64,
    #[serde(default = "d_kt")]
    k_t: f64,
    #[serde(default = "d_zt")]
    z_t: f64,
    #[serde(default = "d_fsat")]
    f_sat: f64,
    #[serde(default = "d_rcap")]
    r_capture: f64,
    #[serde(default = "d_vcap")]
    v_capture: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInjector {
    id: String,
    x: f64,
    y: f64,
    #[serde(default)]
    radius: f64,
    count: u32,
    rate: f64,
    target_id: String,
    profile_min: Option<RawProfile>,
    profile_max: Option<RawProfile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObstacle {
    id: String,
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    #[serde(default)]
    angle_deg: f64,
    #[serde(default = "d_spacing")]
    spacing: f64,
    profile: Option<RawProfile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    d1: f64,
    d2: f64,
    d3: f64,
    f1: f64,
    f2: f64,
    z_a: f64,
    z_b: f64,
    z_c: f64,
}

fn d_dt() -> f64 {
    DEFAULT_DT
}
fn d_seed() -> u64 {
    DEFAULT_SEED
}
fn d_stride() -> u32 {
    DEFAULT_OUTPUT_STRIDE
}
fn d_kt() -> f64 {
    DEFAULT_TARGET_STIFFNESS
}
fn d_zt() -> f64 {
    DEFAULT_TARGET_DAMPING
}
fn d_fsat() -> f64 {
    DEFAULT_TARGET_SATURATION
}
fn d_rcap() -> f64 {
    DEFAULT_CAPTURE_RADIUS
}
fn d_vcap() -> f64 {
    DEFAULT_CAPTURE_SPEED
}
fn d_spacing() -> f64 {
    2.0
}

impl From<&RawProfile> for InteractionProfile {
    fn from(p: &RawProfile) -> Self {
        InteractionProfile {
            d1: p.d1,
            d2: p.d2,
            d3: p.d3,
            f1: p.f1,
            f2: p.f2,
            z_a: p.z_a,
            z_b: p.z_b,
            z_c: p.z_c,
        }
    }
}

/// Parse a scene document. Identical bytes always yield a structurally
/// identical `Scene`; defaults are filled for omitted optional keys.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScene = serde_path_to_error::deserialize(de).map_err(classify)?;

    let targets: Vec<TargetSpec> = raw
        .targets
        .iter()
        .map(|t| TargetSpec {
            id: t.id.clone(),
            pos: Vec2::new(t.x, t.y),
            k_t: t.k_t,
            z_t: t.z_t,
            f_sat: t.f_sat,
            r_capture: t.r_capture,
            v_capture: t.v_capture,
        })
        .collect();

    for (i, t) in targets.iter().enumerate() {
        if targets[..i].iter().any(|p| p.id == t.id) {
            return Err(SceneError::Schema {
                path: format!("targets[{i}].id"),
                message: format!("duplicate target id \"{}\"", t.id),
            });
        }
    }

    let mut injectors = Vec::with_capacity(raw.injectors.len());
    for (i, inj) in raw.injectors.iter().enumerate() {
        let target = targets
            .iter()
            .position(|t| t.id == inj.target_id)
            .map(TargetId)
            .ok_or_else(|| SceneError::Reference {
                path: format!("injectors[{i}].target_id"),
                target: inj.target_id.clone(),
            })?;
        let (dmin, dmax) = default_profile_bounds();
        injectors.push(InjectorSpec {
            id: inj.id.clone(),
            center: Vec2::new(inj.x, inj.y),
            radius: inj.radius,
            count: inj.count,
            rate: inj.rate,
            target,
            profile_min: inj.profile_min.as_ref().map(Into::into).unwrap_or(dmin),
            profile_max: inj.profile_max.as_ref().map(Into::into).unwrap_or(dmax),
        });
    }

    let obstacles = raw
        .obstacles
        .iter()
        .map(|o| ObstacleSpec {
            id: o.id.clone(),
            center: Vec2::new(o.cx, o.cy),
            width: o.w,
            height: o.h,
            angle: o.angle_deg.to_radians(),
            spacing: o.spacing,
            profile: o.profile.as_ref().map(Into::into).unwrap_or_else(default_profile),
        })
        .collect();

    Ok(Scene {
        bounds: Rect {
            cx: raw.bounds.cx,
            cy: raw.bounds.cy,
            w: raw.bounds.w,
            h: raw.bounds.h,
        },
        obstacles,
        injectors,
        targets,
        dt: raw.simulation.dt,
        duration: raw.simulation.duration,
        seed: raw.simulation.seed,
        output_stride: raw.simulation.output_stride,
    })
}

/// Split serde failures into syntax vs schema errors, folding the field
/// named by serde's message into the path so e.g. a missing `duration`
/// reports at `simulation.duration`.
fn classify(err: serde_path_to_error::Error<serde_json::Error>) -> SceneError {
    use serde_json::error::Category;
    let inner = err.inner();
    match inner.classify() {
        Category::Io | Category::Syntax | Category::Eof => SceneError::Syntax(inner.to_string()),
        Category::Data => {
            let mut path = err.path().to_string();
            let message = trim_location(&inner.to_string());
            if let Some(field) = quoted_field(&message) {
                if path == "." {
                    path = field;
                } else {
                    path = format!("{path}.{field}");
                }
            } else if path == "." {
                path = "<document>".to_string();
            }
            SceneError::Schema { path, message }
        }
    }
}

fn trim_location(msg: &str) -> String {
    match msg.find(" at line ") {
        Some(idx) => msg[..idx].to_string(),
        None => msg.to_string(),
    }
}

fn quoted_field(msg: &str) -> Option<String> {
    let is_field_msg = msg.starts_with("missing field") || msg.starts_with("unknown field");
    if !is_field_msg {
        return None;
    }
    let start = msg.find('`')? + 1;
    let end = msg[start..].find('`')? + start;
    Some(msg[start..end].to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{validate_scene, DEFAULT_DT};

    const MINIMAL: &str = r#"{
        "bounds": {"cx": 0, "cy": 0, "w": 50, "h": 50},
        "simulation": {"duration": 10, "seed": 1},
        "targets": [{"id": "T1", "x": 20, "y": 0}],
        "injectors": [{"id": "I1", "x": -20, "y": 0, "count": 1, "rate": 1, "target_id": "T1"}]
    }"#;

    #[test]
    fn minimal_document_fills_defaults() {
        let scene = parse_scene(MINIMAL).unwrap();
        assert_eq!(scene.injectors.len(), 1);
        assert_eq!(scene.targets.len(), 1);
        assert!(scene.obstacles.is_empty());
        assert_eq!(scene.dt, DEFAULT_DT);
        assert_eq!(scene.output_stride, 1);
        assert_eq!(scene.injectors[0].radius, 0.0);
        let (dmin, dmax) = super::default_profile_bounds();
        assert_eq!(scene.injectors[0].profile_min, dmin);
        assert_eq!(scene.injectors[0].profile_max, dmax);
        assert!(validate_scene(&scene).is_empty());
    }

    #[test]
    fn missing_required_key_names_path() {
        let doc = r#"{
            "bounds": {"cx": 0, "cy": 0, "w": 50, "h": 50},
            "simulation": {"dt": 0.05, "seed": 1}
        }"#;
        let err = parse_scene(doc).unwrap_err();
        match err {
            SceneError::Schema { path, .. } => assert_eq!(path, "simulation.duration"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn unresolvable_target_reference() {
        let doc = MINIMAL.replace("\"target_id\": \"T1\"", "\"target_id\": \"T9\"");
        let err = parse_scene(&doc).unwrap_err();
        match err {
            SceneError::Reference { path, target } => {
                assert_eq!(path, "injectors[0].target_id");
                assert_eq!(target, "T9");
            }
            other => panic!("expected reference error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        let doc = MINIMAL.replace("\"duration\": 10", "\"duration\": 10, \"gravity\": 9.8");
        let err = parse_scene(&doc).unwrap_err();
        match err {
            SceneError::Schema { path, .. } => assert_eq!(path, "simulation.gravity"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_a_syntax_error() {
        let err = parse_scene("{\"bounds\": ").unwrap_err();
        assert!(matches!(err, SceneError::Syntax(_)));
    }

    #[test]
    fn parsing_is_deterministic() {
        let a = parse_scene(MINIMAL).unwrap();
        let b = parse_scene(MINIMAL).unwrap();
        assert_eq!(a, b);
    }
}
