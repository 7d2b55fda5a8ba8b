//! World state and the fixed-timestep integrator.
//!
//! One step is: gather forces from the previous frame for every person,
//! apply a semi-implicit Euler update, spawn due injections, then mark
//! arrivals. Per-particle force accumulation always runs in ascending
//! neighbor-id order into a private slot, so results are bit-identical
//! regardless of the rayon thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::forces::{combine_profiles, pair_force, target_force, SimParams};
use crate::analysis::{FrameRecord, TrajectoryFrame};
use crate::math::Vec2;
use crate::neighborhood::{brute_force_within, SpatialGrid};
use crate::scene::{
    build_obstacle_particles, sample_profile, ParticleKind, ParticleState, Phase, Scene, TargetId,
};

/// Unit person mass; fixed particles are immovable and never integrated.
pub const PERSON_MASS: f64 = 1.0;

/// Largest dt the semi-implicit Euler step tolerates against a linear
/// repulsion of slope `k` (per unit mass): the undamped stability limit
/// `dt * sqrt(k) < 2`.
pub fn stable_dt_limit(stiffest_slope: f64) -> f64 {
    2.0 * (PERSON_MASS / stiffest_slope).sqrt()
}

/// Worst-case zone-C slope over everything the scene can produce: obstacle
/// profiles verbatim and the stiffest combination any injector can sample
/// (largest f1, smallest f2, narrowest d1..d2 gap).
pub fn stiffest_zone_c_slope(scene: &Scene) -> f64 {
    let c_amp = SimParams::default().zone_c_amplification;
    let mut stiffest = 0.0f64;
    for o in &scene.obstacles {
        let gap = o.profile.d2 - o.profile.d1;
        if gap > 0.0 {
            stiffest = stiffest.max(c_amp * (o.profile.f1 - o.profile.f2) / gap);
        }
    }
    for i in &scene.injectors {
        let gap = i.profile_min.d2 - i.profile_min.d1;
        if gap > 0.0 {
            stiffest = stiffest.max(c_amp * (i.profile_max.f1 - i.profile_min.f2) / gap);
        }
    }
    stiffest
}

/// Broad-phase selection; `BruteForce` exists so tests can prove the grid
/// changes nothing, bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborStrategy {
    #[default]
    Grid,
    BruteForce,
}

#[derive(Debug, thiserror::Error)]
#[error("non-finite state for particle {id} at step {step} (dt too large for the stiffest interaction?)")]
pub struct NumericalInstability {
    pub id: u64,
    pub step: u64,
}

#[derive(Debug, Clone)]
struct InjectorState {
    spawned: u32,
}

/// Complete simulation state. Particle list is ascending by id, ids are
/// dense and never reused, and time is always `step_index * dt` exactly.
pub struct World {
    step_index: u64,
    dt: f64,
    particles: Vec<ParticleState>,
    injector_states: Vec<InjectorState>,
    rng: ChaCha8Rng,
    cell_size: f64,
    params: SimParams,
    neighbor_strategy: NeighborStrategy,
}

impl World {
    pub fn new(scene: &Scene, params: SimParams) -> World {
        let mut world = World {
            step_index: 0,
            dt: scene.dt,
            particles: Vec::new(),
            injector_states: scene
                .injectors
                .iter()
                .map(|_| InjectorState { spawned: 0 })
                .collect(),
            rng: ChaCha8Rng::seed_from_u64(scene.seed),
            cell_size: scene.max_interaction_range(),
            params,
            neighbor_strategy: NeighborStrategy::Grid,
        };
        for spec in &scene.obstacles {
            let first_id = world.particles.len() as u64;
            world
                .particles
                .extend(build_obstacle_particles(spec, first_id));
        }
        world.inject(scene);
        world
    }

    pub fn with_neighbor_strategy(mut self, strategy: NeighborStrategy) -> World {
        self.neighbor_strategy = strategy;
        self
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.dt
    }

    pub fn particles(&self) -> &[ParticleState] {
        &self.particles
    }

    pub fn persons_spawned(&self) -> u64 {
        self.particles
            .iter()
            .filter(|p| p.kind == ParticleKind::Person)
            .count() as u64
    }

    /// Advance the world by one step of `scene.dt`.
    pub fn step(&mut self, scene: &Scene) -> Result<(), NumericalInstability> {
        let forces = self.gather_forces(scene);

        let dt = self.dt;
        let next_step = self.step_index + 1;
        let mut bad: Option<u64> = None;
        for (p, f) in self.particles.iter_mut().zip(&forces) {
            if p.kind != ParticleKind::Person {
                continue;
            }
            p.vel += *f * (dt / PERSON_MASS);
            p.pos += p.vel * dt;
            if bad.is_none() && !(p.pos.is_finite() && p.vel.is_finite()) {
                bad = Some(p.id);
            }
        }
        if let Some(id) = bad {
            return Err(NumericalInstability {
                id,
                step: next_step,
            });
        }
        self.step_index = next_step;

        self.inject(scene);
        self.mark_arrivals(scene);
        Ok(())
    }

    /// Forces on every particle, computed purely from the previous frame.
    fn gather_forces(&self, scene: &Scene) -> Vec<Vec2> {
        let positions: Vec<(u64, Vec2)> =
            self.particles.iter().map(|p| (p.id, p.pos)).collect();
        let radius = self.cell_size;

        let grid = match self.neighbor_strategy {
            NeighborStrategy::Grid => Some(SpatialGrid::rebuild(&positions, radius)),
            NeighborStrategy::BruteForce => None,
        };

        self.particles
            .par_iter()
            .map_init(Vec::new, |scratch: &mut Vec<u64>, p| {
                if p.kind != ParticleKind::Person {
                    return Vec2::ZERO;
                }
                match &grid {
                    Some(grid) => {
                        grid.neighbors_within_into(p.pos, radius, p.id, scratch)
                            .expect("cell size covers every interaction range");
                    }
                    None => {
                        *scratch = brute_force_within(&positions, p.pos, radius, p.id);
                    }
                }
                self.force_on(p, scratch, scene)
            })
            .collect()
    }

    /// Sum of pair forces over the candidate ids (ascending) plus the
    /// target attraction. Pairs at or beyond their own d3 are skipped.
    fn force_on(&self, p: &ParticleState, candidates: &[u64], scene: &Scene) -> Vec2 {
        let mut total = Vec2::ZERO;
        for &other_id in candidates {
            // Ids are dense: particle index == id.
            let other = &self.particles[other_id as usize];
            debug_assert_eq!(other.id, other_id);
            let law = combine_profiles(p, other);
            total += pair_force(p, other, &law, &self.params);
        }
        if let Some(TargetId(t)) = p.target {
            total += target_force(p, &scene.targets[t]);
        }
        total
    }

    /// Spawn every due injection. Injector `k`-th person is due at
    /// `t_k = k / rate` from simulation start; injectors are processed in
    /// scene order so ids ascend globally.
    fn inject(&mut self, scene: &Scene) {
        let now = self.time();
        for (spec, state) in scene.injectors.iter().zip(&mut self.injector_states) {
            while state.spawned < spec.count && state.spawned as f64 / spec.rate <= now {
                let r = spec.radius * self.rng.random::<f64>().sqrt();
                let angle = self.rng.random::<f64>() * std::f64::consts::TAU;
                let pos = spec.center + Vec2::new(r * angle.cos(), r * angle.sin());
                let profile =
                    sample_profile(&spec.profile_min, &spec.profile_max, &mut self.rng);
                let id = self.particles.len() as u64;
                self.particles.push(ParticleState {
                    id,
                    kind: ParticleKind::Person,
                    pos,
                    vel: Vec2::ZERO,
                    profile,
                    target: Some(spec.target),
                    phase: Phase::Active,
                });
                state.spawned += 1;
            }
        }
    }

    /// A person close enough to its target and slow enough transitions to
    /// `Arrived`. It keeps moving and interacting as a quasi-static
    /// obstacle; only the metrics distinguish it.
    fn mark_arrivals(&mut self, scene: &Scene) {
        for p in &mut self.particles {
            if p.kind != ParticleKind::Person || p.phase != Phase::Active {
                continue;
            }
            let Some(TargetId(t)) = p.target else {
                continue;
            };
            let target = &scene.targets[t];
            if (target.pos - p.pos).norm() < target.r_capture && p.vel.norm() < target.v_capture {
                p.phase = Phase::Arrived;
            }
        }
    }

    /// Snapshot of the current state.
    pub fn frame(&self) -> TrajectoryFrame {
        TrajectoryFrame {
            step_index: self.step_index,
            time: self.time(),
            records: self
                .particles
                .iter()
                .map(|p| FrameRecord {
                    id: p.id,
                    kind: p.kind,
                    pos: p.pos,
                    vel: p.vel,
                    phase: p.phase,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunStats {
    pub steps: u64,
    pub persons_spawned: u64,
    pub frames_emitted: u64,
}

/// Run a scene to completion, handing each emitted frame (step 0 and then
/// every `output_stride` steps) to `on_frame`.
pub fn run_scene(
    scene: &Scene,
    params: SimParams,
    mut on_frame: impl FnMut(&TrajectoryFrame),
) -> Result<RunStats, NumericalInstability> {
    run_scene_with_strategy(scene, params, NeighborStrategy::Grid, &mut on_frame)
}

pub fn run_scene_with_strategy(
    scene: &Scene,
    params: SimParams,
    strategy: NeighborStrategy,
    on_frame: &mut dyn FnMut(&TrajectoryFrame),
) -> Result<RunStats, NumericalInstability> {
    let mut world = World::new(scene, params).with_neighbor_strategy(strategy);
    let steps = scene.step_count();
    let stride = scene.output_stride.max(1) as u64;

    let mut frames_emitted = 1;
    on_frame(&world.frame());
    for s in 1..=steps {
        world.step(scene)?;
        if s % stride == 0 {
            on_frame(&world.frame());
            frames_emitted += 1;
        }
    }
    Ok(RunStats {
        steps,
        persons_spawned: world.persons_spawned(),
        frames_emitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{default_profile, InjectorSpec, Rect, TargetSpec};

    fn empty_scene() -> Scene {
        Scene {
            bounds: Rect {
                cx: 0.0,
                cy: 0.0,
                w: 100.0,
                h: 100.0,
            },
            obstacles: vec![],
            injectors: vec![],
            targets: vec![],
            dt: 0.05,
            duration: 1.0,
            seed: 0,
            output_stride: 1,
        }
    }

    fn injector(count: u32, rate: f64, radius: f64) -> InjectorSpec {
        InjectorSpec {
            id: "I".into(),
            center: Vec2::new(3.0, -2.0),
            radius,
            count,
            rate,
            target: TargetId(0),
            profile_min: default_profile(),
            profile_max: default_profile(),
        }
    }

    fn far_target() -> TargetSpec {
        TargetSpec {
            id: "T".into(),
            pos: Vec2::new(500.0, 0.0),
            k_t: 1.0,
            z_t: 2.0,
            f_sat: 3.0,
            r_capture: 2.0,
            v_capture: 0.5,
        }
    }

    #[test]
    fn free_particle_advances_by_vel_dt_exactly() {
        let scene = empty_scene();
        let mut world = World::new(&scene, SimParams::default());
        world.particles.push(ParticleState {
            id: 0,
            kind: ParticleKind::Person,
            pos: Vec2::new(1.0, 2.0),
            vel: Vec2::new(0.3, -0.4),
            profile: default_profile(),
            target: None,
            phase: Phase::Active,
        });
        for _ in 0..50 {
            let before = world.particles[0].clone();
            world.step(&scene).unwrap();
            let after = &world.particles[0];
            assert_eq!(after.vel.to_bits(), before.vel.to_bits());
            let expected = before.pos + before.vel * scene.dt;
            assert_eq!(after.pos.to_bits(), expected.to_bits());
        }
    }

    #[test]
    fn injection_schedule_is_k_over_rate() {
        let mut scene = empty_scene();
        scene.targets.push(far_target());
        scene.injectors.push(injector(5, 2.0, 0.0));
        let mut world = World::new(&scene, SimParams::default());

        // k-th spawn due at k / rate: 0.0, 0.5, 1.0, 1.5, 2.0 s.
        let mut spawn_steps = vec![(world.persons_spawned(), world.time())];
        for _ in 0..45 {
            world.step(&scene).unwrap();
            let n = world.persons_spawned();
            if n != spawn_steps.last().unwrap().0 {
                spawn_steps.push((n, world.time()));
            }
        }
        let times: Vec<f64> = spawn_steps.iter().map(|&(_, t)| t).collect();
        assert_eq!(times, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(world.persons_spawned(), 5);
    }

    #[test]
    fn zero_count_injector_spawns_nothing() {
        let mut scene = empty_scene();
        scene.targets.push(far_target());
        scene.injectors.push(injector(0, 2.0, 1.0));
        let mut world = World::new(&scene, SimParams::default());
        for _ in 0..20 {
            world.step(&scene).unwrap();
        }
        assert_eq!(world.persons_spawned(), 0);
    }

    #[test]
    fn zero_radius_spawns_exactly_at_center() {
        let mut scene = empty_scene();
        scene.targets.push(far_target());
        scene.injectors.push(injector(3, 100.0, 0.0));
        let world = World::new(&scene, SimParams::default());
        // rate 100 at dt 0.05: all three due within the first step window.
        assert!(world.persons_spawned() >= 1);
        for p in world.particles() {
            assert_eq!(p.pos.to_bits(), scene.injectors[0].center.to_bits());
        }
    }

    #[test]
    fn time_is_step_index_times_dt() {
        let mut scene = empty_scene();
        scene.dt = 0.1;
        let mut world = World::new(&scene, SimParams::default());
        for _ in 0..1000 {
            world.step(&scene).unwrap();
        }
        assert_eq!(world.time().to_bits(), (1000.0_f64 * 0.1).to_bits());
    }

    #[test]
    fn arrival_flips_phase_once_close_and_slow() {
        let mut scene = empty_scene();
        scene.targets.push(TargetSpec {
            pos: Vec2::new(4.0, 0.0),
            ..far_target()
        });
        scene.injectors.push(injector(1, 10.0, 0.0));
        scene.duration = 30.0;
        let mut world = World::new(&scene, SimParams::default());
        let mut arrived_at = None;
        for s in 1..=600 {
            world.step(&scene).unwrap();
            let person = world
                .particles()
                .iter()
                .find(|p| p.kind == ParticleKind::Person)
                .unwrap();
            if person.phase == Phase::Arrived {
                arrived_at = Some(s);
                break;
            }
        }
        let s = arrived_at.expect("person should arrive at a nearby target");
        assert!(s > 1);
        // Still present and still a living obstacle afterwards.
        world.step(&scene).unwrap();
        assert_eq!(world.persons_spawned(), 1);
    }

    #[test]
    fn runs_are_bit_identical_across_thread_counts() {
        let mut scene = empty_scene();
        scene.targets.push(far_target());
        scene.injectors.push(injector(20, 20.0, 2.0));
        scene.duration = 5.0;
        scene.seed = 42;

        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let mut frames = Vec::new();
                run_scene(&scene, SimParams::default(), |f| frames.push(f.clone())).unwrap();
                frames
            })
        };

        let a = run(1);
        let b = run(4);
        assert_eq!(a.len(), b.len());
        for (fa, fb) in a.iter().zip(&b) {
            assert_eq!(fa.records.len(), fb.records.len());
            for (ra, rb) in fa.records.iter().zip(&fb.records) {
                assert_eq!(ra.pos.to_bits(), rb.pos.to_bits());
                assert_eq!(ra.vel.to_bits(), rb.vel.to_bits());
                assert_eq!(ra.phase, rb.phase);
            }
        }
    }
}
