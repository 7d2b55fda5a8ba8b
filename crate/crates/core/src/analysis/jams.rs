//! Jam detection: connected clusters of slow, still-walking persons.
//! Arrived persons are excluded — they are quasi-static obstacles parked at
//! their target, not an accumulation that can grow and dissolve.

use crate::math::Vec2;
use crate::scene::Phase;

use super::TrajectoryFrame;

/// A connected group of at least three near-stationary persons.
#[derive(Debug, Clone, PartialEq)]
pub struct JamCluster {
    /// Member ids, ascending.
    pub members: Vec<u64>,
    pub centroid: Vec2,
    pub size: usize,
    /// Elongation of the member cloud: sqrt of the covariance eigenvalue
    /// ratio. High values indicate a queue rather than a blob.
    pub aspect_ratio: f64,
}

impl JamCluster {
    pub fn is_queue(&self, aspect_threshold: f64) -> bool {
        self.aspect_ratio >= aspect_threshold
    }
}

/// Clusters of active persons slower than `v_jam`, linked by chains of
/// pairwise distances below `r_link`; only components of size >= 3 are
/// reported. Output is ordered by smallest member id and is invariant to
/// the record order of the input frame.
pub fn detect_jams(frame: &TrajectoryFrame, v_jam: f64, r_link: f64) -> Vec<JamCluster> {
    assert!(v_jam > 0.0 && r_link > 0.0);
    let mut slow: Vec<(u64, Vec2)> = frame
        .persons()
        .filter(|r| r.phase == Phase::Active && r.vel.norm() < v_jam)
        .map(|r| (r.id, r.pos))
        .collect();
    slow.sort_unstable_by_key(|&(id, _)| id);

    let n = slow.len();
    let r2 = r_link * r_link;
    let mut component = vec![usize::MAX; n];
    let mut clusters = Vec::new();

    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let comp = clusters.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        component[start] = comp;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if component[j] == usize::MAX && (slow[i].1 - slow[j].1).norm_squared() < r2 {
                    component[j] = comp;
                    stack.push(j);
                }
            }
        }
        if members.len() >= 3 {
            members.sort_unstable();
            let positions: Vec<Vec2> = members.iter().map(|&i| slow[i].1).collect();
            let centroid = positions
                .iter()
                .fold(Vec2::ZERO, |acc, &p| acc + p)
                / positions.len() as f64;
            clusters.push(JamCluster {
                members: members.iter().map(|&i| slow[i].0).collect(),
                size: positions.len(),
                centroid,
                aspect_ratio: aspect_ratio(&positions, centroid),
            });
        }
    }
    clusters.sort_by_key(|c| c.members[0]);
    clusters
}

/// sqrt(lambda_max / lambda_min) of the 2x2 position covariance;
/// infinity for degenerate (collinear) clouds.
fn aspect_ratio(positions: &[Vec2], centroid: Vec2) -> f64 {
    let n = positions.len() as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in positions {
        let d = *p - centroid;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    sxx /= n;
    sxy /= n;
    syy /= n;
    let trace = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let disc = (trace * trace / 4.0 - det).max(0.0).sqrt();
    let l_max = trace / 2.0 + disc;
    let l_min = trace / 2.0 - disc;
    if l_min <= 0.0 {
        f64::INFINITY
    } else {
        (l_max / l_min).sqrt()
    }
}
