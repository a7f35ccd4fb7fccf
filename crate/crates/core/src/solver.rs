//! 3-terminal minimal network solvers.
//!
//! The planar Fermat point comes from Weiszfeld iteration, the spherical one
//! from Riemannian gradient descent on the distance-sum `h(x) = sum_i
//! dist(x, P_i)` with Armijo backtracking along `exp_x(-t grad h)`. Both
//! share the degenerate-vertex classification (an interior angle at or past
//! 120 degrees puts the junction on that vertex) and the 120-degree
//! certification of converged junctions.

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::network::{EmbeddedNetwork, Point};
use crate::sphere::{
    exp_map, geodesic_distance, spherical_angle, unit_tangent_toward, GeodesicBall, SpherePoint,
    TangentVec,
};
use log::debug;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// 120 degrees: the degenerate-vertex threshold and junction angle.
pub const TRIPLE_ANGLE: f64 = 2.0 * PI / 3.0;

/// Residual bound a converged non-degenerate junction must satisfy.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// Window around the 120-degree threshold reported as a boundary case.
pub const BOUNDARY_CASE_TOL: f64 = 1e-12;

/// Iterates closer than this to a terminal take the degenerate branch
/// instead of dividing by a near-zero distance.
const TERMINAL_GUARD: f64 = 1e-9;

/// Below this predicted Armijo decrease the function difference is under
/// the f64 resolution of `h`; acceptance falls back to a gradient-norm
/// contraction test.
const FP_DECREASE_FLOOR: f64 = 1e-15;

const MAX_BACKTRACKS: usize = 60;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolverConfig {
    pub grad_tol: f64,
    pub max_iters: usize,
    pub step_init: f64,
    pub armijo_c: f64,
    pub backtrack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grad_tol: 1e-10,
            max_iters: 10_000,
            step_init: 1.0,
            armijo_c: 1e-4,
            backtrack: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grad_tol <= 0.0
            || self.max_iters == 0
            || self.step_init <= 0.0
            || self.armijo_c <= 0.0
            || !(self.backtrack > 0.0 && self.backtrack < 1.0)
        {
            return Err(Error::ParamOutOfRange(format!("solver config {self:?}")));
        }
        Ok(())
    }
}

/// One of the three terminals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminal {
    A,
    B,
    C,
}

impl Terminal {
    pub const ALL: [Terminal; 3] = [Terminal::A, Terminal::B, Terminal::C];

    pub fn index(&self) -> usize {
        match self {
            Terminal::A => 0,
            Terminal::B => 1,
            Terminal::C => 2,
        }
    }

    pub fn others(&self) -> [Terminal; 2] {
        match self {
            Terminal::A => [Terminal::B, Terminal::C],
            Terminal::B => [Terminal::A, Terminal::C],
            Terminal::C => [Terminal::A, Terminal::B],
        }
    }
}

/// Result of a 3-terminal solve.
#[derive(Clone, Debug)]
pub struct SteinerResult {
    pub junction: Point,
    pub degenerate_at: Option<Terminal>,
    pub network: EmbeddedNetwork,
    /// Norm of the inward unit-tangent sum at the junction.
    pub tangent_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// 120-degree certification of a junction against its three terminals.
#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    /// `|tau_SA + tau_SB + tau_SC|` (two tangents in the degenerate case).
    pub residual: f64,
    /// Pairwise angles between the inward tangents: `(AB, BC, CA)` order for
    /// an interior junction; the triangle's interior angles at `A, B, C` in
    /// the degenerate case.
    pub angles: Vec<f64>,
    pub degenerate: Option<DegenerateCertification>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateCertification {
    pub vertex: Terminal,
    /// Angle between the two network edges at the degenerate vertex.
    pub vertex_angle: f64,
    /// `vertex_angle >= 2 pi / 3` (within the boundary window).
    pub meets_angle_condition: bool,
    /// Set when the angle sits within `BOUNDARY_CASE_TOL` of the threshold.
    pub boundary_case: bool,
}

fn unit_towards(from: &Point, to: &Point) -> Result<[f64; 3]> {
    match (from, to) {
        (Point::Sphere(p), Point::Sphere(q)) => {
            let t = unit_tangent_toward(p, q)?;
            Ok([t.vec().x, t.vec().y, t.vec().z])
        }
        (Point::Plane(p), Point::Plane(q)) => {
            let d = (*q - *p).normalized().ok_or(Error::DirectionUndefined)?;
            Ok([d.x, d.y, 0.0])
        }
        _ => Err(Error::SpaceMismatch("mixed-space certification".into())),
    }
}

fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
}

/// Interior angle of the terminal triangle at each vertex.
fn triangle_angles(terminals: &[Point; 3]) -> Result<[f64; 3]> {
    let mut angles = [0.0; 3];
    for i in 0..3 {
        let u = unit_towards(&terminals[i], &terminals[(i + 1) % 3])?;
        let v = unit_towards(&terminals[i], &terminals[(i + 2) % 3])?;
        angles[i] = angle_between(u, v);
    }
    Ok(angles)
}

/// Reports the tangent-sum residual and pairwise angles of a junction, or
/// the vertex-angle condition when the junction coincides with a terminal.
pub fn certify_junction(junction: &Point, terminals: &[Point; 3], tol: f64) -> Result<CertificationReport> {
    // Degenerate branch: junction on a terminal.
    for (i, t) in terminals.iter().enumerate() {
        if junction.approx_eq(t, 1e-12) {
            let vertex = Terminal::ALL[i];
            let [o1, o2] = vertex.others();
            let u = unit_towards(t, &terminals[o1.index()])?;
            let v = unit_towards(t, &terminals[o2.index()])?;
            let vertex_angle = angle_between(u, v);
            let residual = {
                let s = [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
                (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
            };
            let boundary_case = (vertex_angle - TRIPLE_ANGLE).abs() <= BOUNDARY_CASE_TOL;
            let meets = vertex_angle >= TRIPLE_ANGLE - BOUNDARY_CASE_TOL;
            return Ok(CertificationReport {
                residual,
                angles: triangle_angles(terminals)?.to_vec(),
                degenerate: Some(DegenerateCertification {
                    vertex,
                    vertex_angle,
                    meets_angle_condition: meets,
                    boundary_case,
                }),
                tol,
                pass: meets,
            });
        }
    }

    let ta = unit_towards(junction, &terminals[0])?;
    let tb = unit_towards(junction, &terminals[1])?;
    let tc = unit_towards(junction, &terminals[2])?;
    let s = [
        ta[0] + tb[0] + tc[0],
        ta[1] + tb[1] + tc[1],
        ta[2] + tb[2] + tc[2],
    ];
    let residual = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    let angles = vec![
        angle_between(ta, tb),
        angle_between(tb, tc),
        angle_between(tc, ta),
    ];
    let pass = residual < tol && angles.iter().all(|a| (a - TRIPLE_ANGLE).abs() < tol);
    Ok(CertificationReport {
        residual,
        angles,
        degenerate: None,
        tol,
        pass,
    })
}

pub mod planar {
    use super::*;

    /// `h(x) = |x - A| + |x - B| + |x - C|`.
    pub fn distance_sum(x: Vec2, terminals: &[Vec2; 3]) -> f64 {
        terminals.iter().map(|t| x.distance(*t)).sum()
    }

    /// `grad h(x) = -sum_i (P_i - x)/|P_i - x|`; errors at a terminal.
    pub fn distance_sum_gradient(x: Vec2, terminals: &[Vec2; 3]) -> Result<Vec2> {
        let mut g = Vec2::ZERO;
        for t in terminals {
            let d = (*t - x).normalized().ok_or_else(|| {
                Error::NonsmoothPoint("distance-sum gradient at a terminal".into())
            })?;
            g += -d;
        }
        Ok(g)
    }

    fn terminal_points(terminals: &[Vec2; 3]) -> [Point; 3] {
        [
            Point::Plane(terminals[0]),
            Point::Plane(terminals[1]),
            Point::Plane(terminals[2]),
        ]
    }

    fn degenerate_result(
        vertex: Terminal,
        terminals: &[Vec2; 3],
        iterations: usize,
    ) -> Result<SteinerResult> {
        let [o1, o2] = vertex.others();
        let v = terminals[vertex.index()];
        let network = EmbeddedNetwork::two_edge(
            Point::Plane(v),
            [
                Point::Plane(terminals[o1.index()]),
                Point::Plane(terminals[o2.index()]),
            ],
        )?;
        let cert = certify_junction(&Point::Plane(v), &terminal_points(terminals), RESIDUAL_BOUND)?;
        Ok(SteinerResult {
            junction: Point::Plane(v),
            degenerate_at: Some(vertex),
            network,
            tangent_residual: cert.residual,
            iterations,
            converged: true,
        })
    }

    /// Planar 3-terminal solve: degenerate-vertex classification, then
    /// Weiszfeld iteration `x <- sum(P_i/d_i) / sum(1/d_i)` from the
    /// centroid until the step shrinks below `grad_tol`.
    pub fn solve(terminals: &[Vec2; 3], cfg: &SolverConfig) -> Result<SteinerResult> {
        cfg.validate()?;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if terminals[i].distance(terminals[j]) < 1e-12 {
                    return Err(Error::SolverFailure("terminals coincide".into()));
                }
            }
        }

        // Degenerate classification; collinear triples land here with an
        // angle of pi at the middle terminal.
        let pts = terminal_points(terminals);
        let angles = triangle_angles(&pts)?;
        let mut argmax = 0;
        for i in 1..3 {
            if angles[i] > angles[argmax] {
                argmax = i;
            }
        }
        if angles[argmax] >= TRIPLE_ANGLE {
            return degenerate_result(Terminal::ALL[argmax], terminals, 0);
        }

        let mut x = (terminals[0] + terminals[1] + terminals[2]) * (1.0 / 3.0);
        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.max_iters {
            iterations += 1;
            // Terminal-collision guard.
            let mut collided = None;
            for (i, t) in terminals.iter().enumerate() {
                if x.distance(*t) < TERMINAL_GUARD {
                    collided = Some(i);
                }
            }
            if let Some(i) = collided {
                if angles[i] >= TRIPLE_ANGLE - BOUNDARY_CASE_TOL {
                    return degenerate_result(Terminal::ALL[i], terminals, iterations);
                }
                // Not optimal here: push toward the interior and continue.
                let [o1, o2] = Terminal::ALL[i].others();
                let away = (terminals[o1.index()] - terminals[i]) + (terminals[o2.index()] - terminals[i]);
                x = terminals[i] + away.normalized().ok_or(Error::DirectionUndefined)? * 1e-6;
                continue;
            }
            let mut num = Vec2::ZERO;
            let mut den = 0.0;
            for t in terminals {
                let d = x.distance(*t);
                num += *t * (1.0 / d);
                den += 1.0 / d;
            }
            let next = num * (1.0 / den);
            let step = x.distance(next);
            x = next;
            if step < cfg.grad_tol {
                converged = true;
                break;
            }
        }

        let residual = distance_sum_gradient(x, terminals)?.norm();
        let network = EmbeddedNetwork::star(
            Point::Plane(x),
            vec![
                Point::Plane(terminals[0]),
                Point::Plane(terminals[1]),
                Point::Plane(terminals[2]),
            ],
        )?;
        debug!(
            "planar solve: {iterations} iterations, residual {residual:.3e}, converged {converged}"
        );
        Ok(SteinerResult {
            junction: Point::Plane(x),
            degenerate_at: None,
            network,
            tangent_residual: residual,
            iterations,
            converged: converged && residual < RESIDUAL_BOUND,
        })
    }
}

pub mod spherical {
    use super::*;

    /// `h(x) = dist(x, A) + dist(x, B) + dist(x, C)`; errors when `x` is
    /// antipodal to a terminal.
    pub fn distance_sum(x: &SpherePoint, terminals: &[SpherePoint; 3]) -> Result<f64> {
        let mut h = 0.0;
        for t in terminals {
            if x.antipodal_to(t) {
                return Err(Error::CutLocus);
            }
            h += geodesic_distance(x, t);
        }
        Ok(h)
    }

    /// Riemannian gradient `-sum_i tau_i` where `tau_i` is the unit tangent
    /// at `x` toward terminal `i`; errors within `1e-12` of a terminal.
    pub fn distance_sum_gradient(
        x: &SpherePoint,
        terminals: &[SpherePoint; 3],
    ) -> Result<TangentVec> {
        let mut g = TangentVec::zero(*x);
        for t in terminals {
            if x.approx_eq(t, 1e-12) {
                return Err(Error::NonsmoothPoint("distance-sum gradient at a terminal".into()));
            }
            let tau = unit_tangent_toward(x, t)?;
            g = g.try_add(&tau.scaled(-1.0))?;
        }
        Ok(g)
    }

    fn terminal_points(terminals: &[SpherePoint; 3]) -> [Point; 3] {
        [
            Point::Sphere(terminals[0]),
            Point::Sphere(terminals[1]),
            Point::Sphere(terminals[2]),
        ]
    }

    fn degenerate_result(
        vertex: Terminal,
        terminals: &[SpherePoint; 3],
        iterations: usize,
    ) -> Result<SteinerResult> {
        let [o1, o2] = vertex.others();
        let v = terminals[vertex.index()];
        let network = EmbeddedNetwork::two_edge(
            Point::Sphere(v),
            [
                Point::Sphere(terminals[o1.index()]),
                Point::Sphere(terminals[o2.index()]),
            ],
        )?;
        let cert = certify_junction(
            &Point::Sphere(v),
            &terminal_points(terminals),
            RESIDUAL_BOUND,
        )?;
        Ok(SteinerResult {
            junction: Point::Sphere(v),
            degenerate_at: Some(vertex),
            network,
            tangent_residual: cert.residual,
            iterations,
            converged: true,
        })
    }

    /// Spherical 3-terminal solve inside a geodesic ball.
    ///
    /// In strict mode the ball must satisfy the cap-area admissibility bound
    /// `radius < arccos(5/6)`; pass `strict_radius = false` to override.
    pub fn solve(
        terminals: &[SpherePoint; 3],
        ball: &GeodesicBall,
        cfg: &SolverConfig,
        strict_radius: bool,
    ) -> Result<SteinerResult> {
        solve_with_trace(terminals, ball, cfg, strict_radius, None)
    }

    /// Like [`solve`], optionally recording `h` at every accepted iterate.
    pub fn solve_with_trace(
        terminals: &[SpherePoint; 3],
        ball: &GeodesicBall,
        cfg: &SolverConfig,
        strict_radius: bool,
        mut trace: Option<&mut Vec<f64>>,
    ) -> Result<SteinerResult> {
        cfg.validate()?;
        if strict_radius {
            ball.require_admissible()?;
        }
        for i in 0..3 {
            if !ball.contains(&terminals[i]) {
                return Err(Error::InvalidNetwork(format!(
                    "terminal {i} lies outside the geodesic ball"
                )));
            }
            for j in (i + 1)..3 {
                if terminals[i].approx_eq(&terminals[j], 1e-12) {
                    return Err(Error::SolverFailure("terminals coincide".into()));
                }
            }
        }

        // Degenerate classification via the spherical vertex angles.
        let mut angles = [0.0; 3];
        for i in 0..3 {
            angles[i] = spherical_angle(
                &terminals[i],
                &terminals[(i + 1) % 3],
                &terminals[(i + 2) % 3],
            )?;
        }
        let mut argmax = 0;
        for i in 1..3 {
            if angles[i] > angles[argmax] {
                argmax = i;
            }
        }
        if angles[argmax] >= TRIPLE_ANGLE {
            return degenerate_result(Terminal::ALL[argmax], terminals, 0);
        }

        // Normalized Euclidean centroid: inside the ball by convexity and
        // never a terminal for non-degenerate configurations.
        let mut x = SpherePoint::project(
            terminals[0].coords() + terminals[1].coords() + terminals[2].coords(),
        )?;
        let mut h = distance_sum(&x, terminals)?;
        if let Some(t) = trace.as_deref_mut() {
            t.push(h);
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.max_iters {
            iterations += 1;

            let mut collided = None;
            for (i, t) in terminals.iter().enumerate() {
                if x.approx_eq(t, TERMINAL_GUARD) {
                    collided = Some(i);
                }
            }
            if let Some(i) = collided {
                if angles[i] >= TRIPLE_ANGLE - BOUNDARY_CASE_TOL {
                    return degenerate_result(Terminal::ALL[i], terminals, iterations);
                }
                let [o1, o2] = Terminal::ALL[i].others();
                let away = unit_tangent_toward(&terminals[i], &terminals[o1.index()])?
                    .try_add(&unit_tangent_toward(&terminals[i], &terminals[o2.index()])?)?;
                x = exp_map(&away.normalized()?.scaled(1e-6))?;
                h = distance_sum(&x, terminals)?;
                continue;
            }

            let grad = distance_sum_gradient(&x, terminals)?;
            let gn = grad.norm();
            if gn < cfg.grad_tol {
                converged = true;
                break;
            }
            let dir = grad.scaled(-1.0);

            // Armijo backtracking along exp_x(t * dir). Once the predicted
            // decrease c*t*|g|^2 falls under the f64 resolution of h, the
            // function comparison is noise; accept on a strict gradient-norm
            // contraction instead.
            let mut t = cfg.step_init;
            let mut accepted = false;
            for _ in 0..MAX_BACKTRACKS {
                let candidate = exp_map(&dir.scaled(t))?;
                let h_new = distance_sum(&candidate, terminals)?;
                let predicted = cfg.armijo_c * t * gn * gn;
                let ok = if predicted >= FP_DECREASE_FLOOR * h.max(1.0) {
                    h_new <= h - predicted
                } else {
                    match distance_sum_gradient(&candidate, terminals) {
                        Ok(g_new) => g_new.norm() <= gn * (1.0 - cfg.armijo_c * t),
                        Err(_) => false,
                    }
                };
                if ok {
                    x = candidate;
                    h = h_new;
                    accepted = true;
                    break;
                }
                t *= cfg.backtrack;
            }
            if !accepted {
                debug!("spherical solve: line search stalled at iteration {iterations}");
                break;
            }
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(h);
            }
            if geodesic_distance(&ball.center(), &x) > ball.radius() + 1e-12 {
                return Err(Error::LeftGeodesicBall);
            }
        }

        let residual = distance_sum_gradient(&x, terminals)?.norm();
        let network = EmbeddedNetwork::star(
            Point::Sphere(x),
            vec![
                Point::Sphere(terminals[0]),
                Point::Sphere(terminals[1]),
                Point::Sphere(terminals[2]),
            ],
        )?;
        debug!(
            "spherical solve: {iterations} iterations, residual {residual:.3e}, converged {converged}"
        );
        Ok(SteinerResult {
            junction: Point::Sphere(x),
            degenerate_at: None,
            network,
            tangent_residual: residual,
            iterations,
            converged: converged && residual < RESIDUAL_BOUND,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hex::generators;
    use crate::sphere::{random_unit_tangent, tangent_from_frame};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn equilateral_planar() -> [Vec2; 3] {
        let g = generators();
        [g.g1, g.g2, g.g3]
    }

    fn equilateral_spherical(polar: f64) -> [SpherePoint; 3] {
        [
            SpherePoint::from_polar(polar, 0.0),
            SpherePoint::from_polar(polar, 2.0 * PI / 3.0),
            SpherePoint::from_polar(polar, 4.0 * PI / 3.0),
        ]
    }

    #[test]
    fn planar_distance_sum_examples() {
        let t = equilateral_planar();
        assert!((planar::distance_sum(Vec2::ZERO, &t) - 3.0).abs() < 1e-14);
        let at_a = planar::distance_sum(t[0], &t);
        assert!((at_a - (t[0].distance(t[1]) + t[0].distance(t[2]))).abs() < 1e-14);
    }

    #[test]
    fn spherical_distance_sum_examples() {
        let t = equilateral_spherical(0.3);
        let h = spherical::distance_sum(&SpherePoint::north_pole(), &t).unwrap();
        assert!((h - 0.9).abs() < 1e-13);
        let at_a = spherical::distance_sum(&t[0], &t).unwrap();
        let expect = geodesic_distance(&t[0], &t[1]) + geodesic_distance(&t[0], &t[2]);
        assert!((at_a - expect).abs() < 1e-13);
    }

    #[test]
    fn gradients_vanish_at_symmetric_center() {
        let t = equilateral_planar();
        assert!(planar::distance_sum_gradient(Vec2::ZERO, &t).unwrap().norm() < 1e-14);
        let ts = equilateral_spherical(0.3);
        let g = spherical::distance_sum_gradient(&SpherePoint::north_pole(), &ts).unwrap();
        assert!(g.norm() < 1e-14);
    }

    #[test]
    fn planar_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let t = [
            Vec2::new(0.2, -0.1),
            Vec2::new(1.3, 0.4),
            Vec2::new(-0.5, 1.1),
        ];
        let eps = 1e-6;
        for _ in 0..100 {
            let x = Vec2::new(rng.gen_range(-1.0..1.5), rng.gen_range(-1.0..1.5));
            if t.iter().any(|p| x.distance(*p) < 1e-2) {
                continue;
            }
            let g = planar::distance_sum_gradient(x, &t).unwrap();
            let fd = Vec2::new(
                (planar::distance_sum(x + Vec2::new(eps, 0.0), &t)
                    - planar::distance_sum(x - Vec2::new(eps, 0.0), &t))
                    / (2.0 * eps),
                (planar::distance_sum(x + Vec2::new(0.0, eps), &t)
                    - planar::distance_sum(x - Vec2::new(0.0, eps), &t))
                    / (2.0 * eps),
            );
            assert!((g - fd).norm() <= 1e-6 * g.norm().max(1.0));
        }
    }

    #[test]
    fn spherical_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let t = equilateral_spherical(0.35);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let eps = 1e-6;
        let mut tested = 0;
        while tested < 100 {
            let x = ball.sample_uniform(&mut rng);
            if t.iter().any(|p| x.approx_eq(p, 1e-2)) {
                continue;
            }
            let g = spherical::distance_sum_gradient(&x, &t).unwrap();
            let w = random_unit_tangent(&x, &mut rng);
            let plus = exp_map(&w.scaled(eps)).unwrap();
            let minus = exp_map(&w.scaled(-eps)).unwrap();
            let fd = (spherical::distance_sum(&plus, &t).unwrap()
                - spherical::distance_sum(&minus, &t).unwrap())
                / (2.0 * eps);
            let directional = g.dot(&w);
            assert!(
                (fd - directional).abs() <= 1e-6 * directional.abs().max(1.0),
                "fd {fd} vs grad {directional}"
            );
            tested += 1;
        }
    }

    #[test]
    fn planar_solve_equilateral() {
        let t = equilateral_planar();
        let r = planar::solve(&t, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.degenerate_at.is_none());
        assert!(r.junction.as_plane().unwrap().norm() < 1e-9);
        assert!((crate::network::network_length(&r.network) - 3.0).abs() < 1e-9);
        assert!(r.tangent_residual < 1e-8);
    }

    #[test]
    fn planar_solve_degenerate_obtuse() {
        // Angle at A between B=(1,0) and C=(-0.5,0.1) is ~168.7 degrees.
        let t = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(-0.5, 0.1)];
        let r = planar::solve(&t, &SolverConfig::default()).unwrap();
        assert_eq!(r.degenerate_at, Some(Terminal::A));
        assert!(r.junction.as_plane().unwrap().distance(t[0]) < 1e-15);
        assert_eq!(r.network.edge_count(), 2);

        // Brute-force oracle: grid minimization of h lands at A.
        let mut best = (f64::INFINITY, Vec2::ZERO);
        for i in 0..200 {
            for j in 0..200 {
                let x = Vec2::new(-0.6 + 1.7 * i as f64 / 199.0, -0.5 + 1.0 * j as f64 / 199.0);
                let h = planar::distance_sum(x, &t);
                if h < best.0 {
                    best = (h, x);
                }
            }
        }
        assert!(best.1.distance(t[0]) < 0.02);
    }

    #[test]
    fn planar_solve_matches_grid_oracle() {
        let t = [Vec2::new(0.0, 0.0), Vec2::new(4.0, 0.0), Vec2::new(2.0, 3.0)];
        let r = planar::solve(&t, &SolverConfig::default()).unwrap();
        let x = r.junction.as_plane().unwrap();

        // 400x400 grid over the bounding box, then local refinement.
        let mut best = (f64::INFINITY, Vec2::ZERO);
        for i in 0..400 {
            for j in 0..400 {
                let p = Vec2::new(4.0 * i as f64 / 399.0, 3.0 * j as f64 / 399.0);
                let h = planar::distance_sum(p, &t);
                if h < best.0 {
                    best = (h, p);
                }
            }
        }
        let mut step = 4.0 / 399.0;
        let mut p = best.1;
        while step > 1e-10 {
            let mut improved = false;
            for (dx, dy) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let q = p + Vec2::new(dx, dy);
                let h = planar::distance_sum(q, &t);
                if h < best.0 {
                    best = (h, q);
                    p = q;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        assert!(x.distance(p) < 1e-6, "solver {x:?} vs oracle {p:?}");
    }

    #[test]
    fn planar_collinear_terminals_degenerate() {
        let t = [Vec2::new(-1.0, 0.0), Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0)];
        let r = planar::solve(&t, &SolverConfig::default()).unwrap();
        assert_eq!(r.degenerate_at, Some(Terminal::B));
    }

    #[test]
    fn spherical_solve_equilateral() {
        let t = equilateral_spherical(0.3);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let r = spherical::solve(&t, &ball, &SolverConfig::default(), true).unwrap();
        assert!(r.converged);
        let j = r.junction.as_sphere().unwrap();
        assert!(geodesic_distance(&j, &SpherePoint::north_pole()) < 1e-8);
        assert!((crate::network::network_length(&r.network) - 0.9).abs() < 1e-10);
        let cert = certify_junction(
            &r.junction,
            &[
                Point::Sphere(t[0]),
                Point::Sphere(t[1]),
                Point::Sphere(t[2]),
            ],
            1e-8,
        )
        .unwrap();
        assert!(cert.pass, "{cert:?}");
        for a in &cert.angles {
            assert!((a - TRIPLE_ANGLE).abs() < 1e-8);
        }
    }

    #[test]
    fn spherical_solve_generic_converges_and_descends() {
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let t = [
            SpherePoint::from_polar(0.31, 0.4),
            SpherePoint::from_polar(0.44, 2.5),
            SpherePoint::from_polar(0.22, 4.3),
        ];
        let mut trace = Vec::new();
        let r = spherical::solve_with_trace(
            &t,
            &ball,
            &SolverConfig::default(),
            true,
            Some(&mut trace),
        )
        .unwrap();
        assert!(r.converged, "residual {}", r.tangent_residual);
        assert!(r.tangent_residual < 1e-8);
        // Monotone descent within f64 resolution of h.
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-14);
        }
        // Junction no worse than the corners and a sampled sweep.
        let h_junction = spherical::distance_sum(&r.junction.as_sphere().unwrap(), &t).unwrap();
        for v in &t {
            assert!(h_junction <= spherical::distance_sum(v, &t).unwrap() + 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let x = ball.sample_uniform(&mut rng);
            assert!(h_junction <= spherical::distance_sum(&x, &t).unwrap() + 1e-9);
        }
    }

    #[test]
    fn spherical_solve_strict_radius_rejects() {
        let t = equilateral_spherical(0.3);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.6).unwrap();
        assert!(matches!(
            spherical::solve(&t, &ball, &SolverConfig::default(), true),
            Err(Error::InadmissibleRadius { .. })
        ));
        // Override succeeds.
        let r = spherical::solve(&t, &ball, &SolverConfig::default(), false).unwrap();
        assert!(r.converged);
    }

    #[test]
    fn spherical_solve_degenerate_obtuse() {
        // Flat triangle: B and C nearly opposite across A.
        let p0 = SpherePoint::north_pole();
        let a = exp_map(&tangent_from_frame(&p0, 0.0, 0.0).scaled(0.0)).unwrap();
        let b = exp_map(&tangent_from_frame(&p0, 0.3, 0.02)).unwrap();
        let c = exp_map(&tangent_from_frame(&p0, -0.3, 0.02)).unwrap();
        let ball = GeodesicBall::new(p0, 0.5).unwrap();
        let r = spherical::solve(&[a, b, c], &ball, &SolverConfig::default(), true).unwrap();
        assert_eq!(r.degenerate_at, Some(Terminal::A));
        assert!(r.junction.as_sphere().unwrap().approx_eq(&a, 1e-15));
        let cert = certify_junction(
            &r.junction,
            &[Point::Sphere(a), Point::Sphere(b), Point::Sphere(c)],
            1e-8,
        )
        .unwrap();
        let deg = cert.degenerate.expect("degenerate certification");
        assert!(deg.meets_angle_condition);
        assert!(deg.vertex_angle >= TRIPLE_ANGLE);
    }

    #[test]
    fn certification_fails_off_center() {
        let t = equilateral_planar();
        let pts = [
            Point::Plane(t[0]),
            Point::Plane(t[1]),
            Point::Plane(t[2]),
        ];
        let good = certify_junction(&Point::Plane(Vec2::ZERO), &pts, 1e-8).unwrap();
        assert!(good.pass);
        assert!(good.residual < 1e-15);
        for a in &good.angles {
            assert!((a - TRIPLE_ANGLE).abs() < 1e-15);
        }
        // Perturbed toward A by 1e-3.
        let bad = certify_junction(&Point::Plane(Vec2::new(1e-3, 0.0)), &pts, 1e-8).unwrap();
        assert!(!bad.pass);
        assert!(bad.residual > 1e-4);
    }
}
