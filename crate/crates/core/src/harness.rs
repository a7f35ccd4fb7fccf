//! Empirical minimality certification.
//!
//! Samples competitor networks with the same terminals inside the geodesic
//! ball and compares lengths against the solved network; verifies the
//! calibrated-current inequality chain `M(T) = T(omega) = S(omega) <=
//! M(S) * comass(omega)` for planar competitors with exactly matched lattice
//! boundary; and cross-checks the solver against an independent grid-search
//! oracle in normal coordinates.

use crate::error::{Error, Result};
use crate::hex::{comass, GroupElement, MatrixForm};
use crate::linalg::Vec2;
use crate::network::{
    current_boundary, current_mass, evaluate_current, network_length, EmbeddedNetwork, Point,
    RectifiableCurrent, SpaceTag,
};
use crate::solver::{self, SolverConfig, Terminal};
use crate::sphere::{
    exp_map, geodesic_distance, log_map, random_unit_tangent, tangent_from_frame, GeodesicBall,
    SpherePoint,
};
use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Competitor lengths below `reference - VIOLATION_TOL` count as violations
/// (after a dense re-check); this separates counterexamples from numerical
/// noise.
pub const VIOLATION_TOL: f64 = 1e-9;

const BALL_SAMPLES_PER_EDGE: usize = 100;
const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CompetitorKind {
    /// Y-network with the junction pushed away from the solved one by a
    /// random tangent of norm at most `radius`.
    PerturbedJunction { radius: f64 },
    /// Y-network with the junction uniform in the ball.
    RandomJunction,
    /// Two geodesics through the given middle terminal.
    PathTopology { middle: Terminal },
    /// Tree with two random interior junctions: A-J1, B-J1, J1-J2, J2-C.
    TwoJunctionTree,
    /// The solved Y with each edge replaced by a piecewise-geodesic
    /// polyline with perturbed knots.
    Polyline { segments_per_edge: usize, jitter: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CompetitorSpec {
    #[serde(flatten)]
    pub kind: CompetitorKind,
    pub seed: u64,
}

/// Deterministic competitor generation: the network is a function of the
/// spec alone (the reference junction is re-derived by the solver when a
/// kind needs it).
pub fn generate_competitor(
    spec: &CompetitorSpec,
    a: &SpherePoint,
    b: &SpherePoint,
    c: &SpherePoint,
    ball: &GeodesicBall,
) -> Result<EmbeddedNetwork> {
    let needs_junction = matches!(
        spec.kind,
        CompetitorKind::PerturbedJunction { .. } | CompetitorKind::Polyline { .. }
    );
    let junction = if needs_junction {
        let r = solver::spherical::solve(&[*a, *b, *c], ball, &SolverConfig::default(), false)?;
        Some(r.junction.as_sphere()?)
    } else {
        None
    };
    generate_competitor_with_junction(spec, a, b, c, ball, junction)
}

fn generate_competitor_with_junction(
    spec: &CompetitorSpec,
    a: &SpherePoint,
    b: &SpherePoint,
    c: &SpherePoint,
    ball: &GeodesicBall,
    reference_junction: Option<SpherePoint>,
) -> Result<EmbeddedNetwork> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let terminals = [*a, *b, *c];
    match &spec.kind {
        CompetitorKind::PerturbedJunction { radius } => {
            let s = reference_junction.ok_or_else(|| {
                Error::GenerationFailed("perturbed-junction kind needs a reference junction".into())
            })?;
            for _ in 0..MAX_ATTEMPTS {
                let dir = random_unit_tangent(&s, &mut rng);
                let r = radius * rng.gen::<f64>();
                let j = exp_map(&dir.scaled(r))?;
                if terminals.iter().any(|t| j.approx_eq(t, 1e-9)) {
                    continue;
                }
                let net = star_network(&j, &terminals)?;
                if network_in_ball(&net, ball) {
                    return Ok(net);
                }
            }
            Err(Error::GenerationFailed(
                "perturbed junction left the ball after 1000 attempts".into(),
            ))
        }
        CompetitorKind::RandomJunction => {
            for _ in 0..MAX_ATTEMPTS {
                let j = ball.sample_uniform(&mut rng);
                if terminals.iter().any(|t| j.approx_eq(t, 1e-9)) {
                    continue;
                }
                let net = star_network(&j, &terminals)?;
                if network_in_ball(&net, ball) {
                    return Ok(net);
                }
            }
            Err(Error::GenerationFailed(
                "random junction sampling failed after 1000 attempts".into(),
            ))
        }
        CompetitorKind::PathTopology { middle } => {
            let order = match middle {
                Terminal::B => [0usize, 1, 2],
                Terminal::A => [1, 0, 2],
                Terminal::C => [0, 2, 1],
            };
            let pts: Vec<Point> = order.iter().map(|&i| Point::Sphere(terminals[i])).collect();
            // All three are terminals; the middle one is a pass-through.
            let net = EmbeddedNetwork::from_vertices(pts, &[(0, 1), (1, 2)], vec![0, 1, 2])?;
            if !network_in_ball(&net, ball) {
                return Err(Error::GenerationFailed("path topology exits the ball".into()));
            }
            Ok(net)
        }
        CompetitorKind::TwoJunctionTree => {
            for _ in 0..MAX_ATTEMPTS {
                let j1 = ball.sample_uniform(&mut rng);
                let j2 = ball.sample_uniform(&mut rng);
                if j1.approx_eq(&j2, 1e-9)
                    || terminals
                        .iter()
                        .any(|t| j1.approx_eq(t, 1e-9) || j2.approx_eq(t, 1e-9))
                {
                    continue;
                }
                let pts = vec![
                    Point::Sphere(terminals[0]),
                    Point::Sphere(terminals[1]),
                    Point::Sphere(terminals[2]),
                    Point::Sphere(j1),
                    Point::Sphere(j2),
                ];
                let net = EmbeddedNetwork::from_vertices(
                    pts,
                    &[(0, 3), (1, 3), (3, 4), (4, 2)],
                    vec![0, 1, 2],
                )?;
                if network_in_ball(&net, ball) {
                    return Ok(net);
                }
            }
            Err(Error::GenerationFailed(
                "two-junction tree sampling failed after 1000 attempts".into(),
            ))
        }
        CompetitorKind::Polyline {
            segments_per_edge,
            jitter,
        } => {
            let s = reference_junction.ok_or_else(|| {
                Error::GenerationFailed("polyline kind needs a reference junction".into())
            })?;
            let k = (*segments_per_edge).max(1);
            'attempt: for _ in 0..MAX_ATTEMPTS {
                let mut points = vec![Point::Sphere(s)];
                let mut edges: Vec<(usize, usize)> = Vec::new();
                let mut terminals_idx = Vec::new();
                for t in &terminals {
                    let arc = crate::sphere::GeodesicArc::new(s, *t)?;
                    let mut prev = 0usize; // junction vertex index
                    for seg in 1..k {
                        let tt = seg as f64 / k as f64;
                        let base = arc.point_at(tt)?;
                        let dir = random_unit_tangent(&base, &mut rng);
                        let r = jitter * rng.gen::<f64>();
                        let knot = exp_map(&dir.scaled(r))?;
                        if !ball.contains(&knot) {
                            continue 'attempt;
                        }
                        points.push(Point::Sphere(knot));
                        edges.push((prev, points.len() - 1));
                        prev = points.len() - 1;
                    }
                    points.push(Point::Sphere(*t));
                    edges.push((prev, points.len() - 1));
                    terminals_idx.push(points.len() - 1);
                }
                let net = EmbeddedNetwork::from_vertices(points, &edges, terminals_idx)?;
                if network_in_ball(&net, ball) {
                    return Ok(net);
                }
            }
            Err(Error::GenerationFailed(
                "polyline sampling left the ball after 1000 attempts".into(),
            ))
        }
    }
}

fn star_network(junction: &SpherePoint, terminals: &[SpherePoint; 3]) -> Result<EmbeddedNetwork> {
    EmbeddedNetwork::star(
        Point::Sphere(*junction),
        terminals.iter().map(|&t| Point::Sphere(t)).collect(),
    )
}

/// Ball membership checked at the vertices and 100 samples per edge.
pub fn network_in_ball(net: &EmbeddedNetwork, ball: &GeodesicBall) -> bool {
    for c in 0..net.class_count() {
        if let Point::Sphere(p) = net.class_point(c) {
            if !ball.contains(&p) {
                return false;
            }
        }
    }
    for curve in net.curves() {
        for k in 0..BALL_SAMPLES_PER_EDGE {
            let t = (k as f64 + 0.5) / BALL_SAMPLES_PER_EDGE as f64;
            if let Ok(Point::Sphere(p)) = curve.point_at(t) {
                if !ball.contains(&p) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub spec: CompetitorSpec,
    pub competitor_length: f64,
    /// Length recomputed by dense polyline sampling (10x density).
    pub dense_length: f64,
    pub reference_length: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramBucket {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub reference_length: f64,
    pub competitors_tested: usize,
    pub min_competitor_length: f64,
    pub violations: Vec<Violation>,
    pub margin_histogram: Vec<HistogramBucket>,
}

fn histogram_edges() -> Vec<(Option<f64>, Option<f64>)> {
    let cuts = [0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1e-1, 1.0];
    let mut edges = vec![(None, Some(cuts[0]))];
    for w in cuts.windows(2) {
        edges.push((Some(w[0]), Some(w[1])));
    }
    edges.push((Some(cuts[cuts.len() - 1]), None));
    edges
}

/// Dense polyline length oracle for violation re-checks; chord segments are
/// converted by `2 asin(c/2)`, which keeps precision on short pieces.
fn dense_length(net: &EmbeddedNetwork) -> f64 {
    let n = 10 * BALL_SAMPLES_PER_EDGE;
    let mut total = 0.0;
    for curve in net.curves() {
        let mut prev = curve.point_at(0.0).expect("in range");
        for k in 1..=n {
            let p = curve.point_at(k as f64 / n as f64).expect("in range");
            total += match (&prev, &p) {
                (Point::Sphere(a), Point::Sphere(b)) => {
                    let chord = a.coords().distance(b.coords());
                    2.0 * (chord / 2.0).asin()
                }
                _ => prev.distance(&p).expect("same space"),
            };
            prev = p;
        }
    }
    total
}

/// Runs every competitor spec against the reference network and reports
/// lengths, violations, and the margin histogram.
pub fn compare_lengths(
    reference: &EmbeddedNetwork,
    specs: &[CompetitorSpec],
    ball: &GeodesicBall,
) -> Result<ComparisonReport> {
    if reference.space() != SpaceTag::Sphere {
        return Err(Error::SpaceMismatch("length comparison runs on the sphere".into()));
    }
    let terminal_points = reference.terminal_points();
    if terminal_points.len() != 3 {
        return Err(Error::InvalidNetwork("reference must have three terminals".into()));
    }
    let a = terminal_points[0].as_sphere()?;
    let b = terminal_points[1].as_sphere()?;
    let c = terminal_points[2].as_sphere()?;
    // Junction of the solved reference: the class of maximum degree (the
    // degenerate two-edge case degrades to the obtuse terminal).
    let junction_class = (0..reference.class_count())
        .max_by_key(|&cl| reference.graph().degree(cl))
        .expect("nonempty network");
    let junction = reference.class_point(junction_class).as_sphere()?;

    let reference_length = network_length(reference);
    let edges = histogram_edges();
    let mut buckets = vec![0usize; edges.len()];
    let mut min_len = f64::INFINITY;
    let mut violations = Vec::new();

    for spec in specs {
        let net = generate_competitor_with_junction(spec, &a, &b, &c, ball, Some(junction))?;
        let len = network_length(&net);
        min_len = min_len.min(len);
        let margin = len - reference_length;
        let idx = edges
            .iter()
            .position(|(lo, hi)| {
                lo.map_or(true, |l| margin >= l) && hi.map_or(true, |h| margin < h)
            })
            .unwrap_or(edges.len() - 1);
        buckets[idx] += 1;
        if len < reference_length - VIOLATION_TOL {
            let dense = dense_length(&net);
            if dense < reference_length - VIOLATION_TOL {
                violations.push(Violation {
                    spec: spec.clone(),
                    competitor_length: len,
                    dense_length: dense,
                    reference_length,
                });
            }
        }
    }

    debug!(
        "compare_lengths: {} competitors, min {:.12}, reference {:.12}",
        specs.len(),
        min_len,
        reference_length
    );
    Ok(ComparisonReport {
        reference_length,
        competitors_tested: specs.len(),
        min_competitor_length: min_len,
        violations,
        margin_histogram: edges
            .into_iter()
            .zip(buckets)
            .map(|((lo, hi), count)| HistogramBucket { lo, hi, count })
            .collect(),
    })
}

/// A balanced default sweep: all five kinds, seeds derived from `base_seed`.
pub fn default_specs(count: usize, base_seed: u64, ball: &GeodesicBall) -> Vec<CompetitorSpec> {
    let mut specs = Vec::with_capacity(count);
    for i in 0..count {
        let seed = base_seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(i as u64);
        let kind = match i % 5 {
            0 => CompetitorKind::PerturbedJunction {
                radius: 0.25 * ball.radius(),
            },
            1 => CompetitorKind::RandomJunction,
            2 => CompetitorKind::PathTopology {
                middle: [Terminal::A, Terminal::B, Terminal::C][(i / 5) % 3],
            },
            3 => CompetitorKind::TwoJunctionTree,
            _ => CompetitorKind::Polyline {
                segments_per_edge: 2 + (i / 5) % 3,
                jitter: 0.05 * ball.radius(),
            },
        };
        specs.push(CompetitorSpec { kind, seed });
    }
    specs
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop41Row {
    pub mass: f64,
    pub eval: f64,
    pub stokes_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop41Report {
    pub t_mass: f64,
    pub t_eval: f64,
    pub form_comass: f64,
    /// `|T(omega) - M(T)|`: the integrated calibration condition.
    pub calibration_identity_deviation: f64,
    pub competitors_tested: usize,
    pub max_stokes_deviation: f64,
    pub max_duality_violation: f64,
    pub min_mass_margin: f64,
    pub pass: bool,
}

/// Verifies the inequality chain of the calibrated planar current against
/// competitors with exactly matched lattice boundary:
/// (i) `T(omega) = M(T)`, (ii) `S(omega) = T(omega)` (the testable Stokes
/// identity), (iii) `S(omega) <= M(S) comass(omega)`, hence
/// `M(T) <= M(S)`.
pub fn verify_prop41_planar(
    t: &RectifiableCurrent,
    form: &MatrixForm,
    competitors: &[RectifiableCurrent],
) -> Result<(Prop41Report, Vec<Prop41Row>)> {
    let t_boundary = current_boundary(t);
    let t_mass = current_mass(t);
    let t_eval = evaluate_current(t, form)?;
    let form_comass = comass(form);
    let identity_dev = (t_eval - t_mass).abs();

    let mut rows = Vec::with_capacity(competitors.len());
    let mut max_stokes: f64 = 0.0;
    let mut max_duality: f64 = 0.0;
    let mut min_margin = f64::INFINITY;
    for s in competitors {
        if !current_boundary(s).same_as(&t_boundary) {
            return Err(Error::NotCompetitor(
                "competitor boundary does not match the calibrated current".into(),
            ));
        }
        let mass = current_mass(s);
        let eval = evaluate_current(s, form)?;
        let stokes_deviation = (eval - t_eval).abs();
        max_stokes = max_stokes.max(stokes_deviation);
        max_duality = max_duality.max(eval - mass * form_comass);
        min_margin = min_margin.min(mass - t_mass);
        rows.push(Prop41Row {
            mass,
            eval,
            stokes_deviation,
        });
    }

    let pass = identity_dev <= 1e-10
        && max_stokes <= 1e-9
        && max_duality <= 1e-9
        && min_margin >= -2e-9;
    Ok((
        Prop41Report {
            t_mass,
            t_eval,
            form_comass,
            calibration_identity_deviation: identity_dev,
            competitors_tested: competitors.len(),
            max_stokes_deviation: max_stokes,
            max_duality_violation: max_duality,
            min_mass_margin: min_margin,
            pass,
        },
        rows,
    ))
}

/// Builds planar competitor currents whose boundary matches `t` exactly in
/// the lattice: path topologies with multiplicities solved from the boundary
/// equations, single- and double-knot reroutes, and anchored loops with
/// constant multiplicity.
pub fn planar_competitors_matching_boundary(
    t: &RectifiableCurrent,
    count: usize,
    base_seed: u64,
) -> Result<Vec<RectifiableCurrent>> {
    if t.network().space() != SpaceTag::Plane {
        return Err(Error::SpaceMismatch("boundary-matched competitors are planar".into()));
    }
    let terminals = t.network().terminal_points();
    if terminals.len() != 3 {
        return Err(Error::InvalidNetwork("expected three terminals".into()));
    }
    let chain = current_boundary(t);
    let coeffs: Vec<GroupElement> = terminals.iter().map(|p| chain.coefficient_at(p)).collect();
    let pts: Vec<Vec2> = terminals
        .iter()
        .map(|p| p.as_plane())
        .collect::<Result<_>>()?;
    let scale = pts
        .iter()
        .flat_map(|p| pts.iter().map(move |q| p.distance(*q)))
        .fold(0.0f64, f64::max);

    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(
            base_seed ^ (i as u64).wrapping_mul(0xD134_2543_DE82_EF95),
        );
        let current = match i % 5 {
            0 => path_current(&pts, &coeffs, [0, 1, 2])?,
            1 => path_current(&pts, &coeffs, [1, 0, 2])?,
            2 => path_current(&pts, &coeffs, [0, 2, 1])?,
            3 => rerouted_current(t, scale, &mut rng)?,
            _ => loop_added_current(t, scale, &mut rng)?,
        };
        out.push(current);
    }
    Ok(out)
}

/// Path through `order = [first, middle, last]` with multiplicities solved
/// from the boundary equations: `theta_1 = -c_first`, `theta_2 = c_last`;
/// the middle coefficient then matches automatically because the three
/// boundary coefficients sum to zero.
fn path_current(
    pts: &[Vec2],
    coeffs: &[GroupElement],
    order: [usize; 3],
) -> Result<RectifiableCurrent> {
    let points: Vec<Point> = order.iter().map(|&i| Point::Plane(pts[i])).collect();
    let net = EmbeddedNetwork::from_vertices(points, &[(0, 1), (1, 2)], vec![0, 1, 2])?;
    let theta1 = -coeffs[order[0]];
    let theta2 = coeffs[order[2]];
    RectifiableCurrent::new(net, vec![true, true], vec![theta1, theta2])
}

/// The calibrated current with one or two random edges rerouted through
/// interior knots carrying the same multiplicity; the boundary telescopes
/// back to the original.
fn rerouted_current(
    t: &RectifiableCurrent,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<RectifiableCurrent> {
    let net = t.network();
    let mut points: Vec<Point> = (0..net.class_count()).map(|c| net.class_point(c)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut orientations = Vec::new();
    let mut multiplicities = Vec::new();
    let reroute_edge = rng.gen_range(0..net.edge_count());
    let knots = 1 + rng.gen_range(0..2usize);
    for e in 0..net.edge_count() {
        let (from, to) = net.graph().edge_classes(e);
        if e != reroute_edge {
            edges.push((from, to));
            orientations.push(t.orientations()[e]);
            multiplicities.push(t.multiplicities()[e]);
            continue;
        }
        let a = net.class_point(from).as_plane()?;
        let b = net.class_point(to).as_plane()?;
        let mut prev = from;
        for k in 1..=knots {
            let tt = k as f64 / (knots + 1) as f64;
            let jitter = Vec2::new(
                rng.gen_range(-0.2..0.2) * scale,
                rng.gen_range(-0.2..0.2) * scale,
            );
            let m = a + (b - a) * tt + jitter;
            points.push(Point::Plane(m));
            let idx = points.len() - 1;
            edges.push((prev, idx));
            orientations.push(t.orientations()[e]);
            multiplicities.push(t.multiplicities()[e]);
            prev = idx;
        }
        edges.push((prev, to));
        orientations.push(t.orientations()[e]);
        multiplicities.push(t.multiplicities()[e]);
    }
    let network = EmbeddedNetwork::from_vertices(points, &edges, net.terminals().to_vec())?;
    RectifiableCurrent::new(network, orientations, multiplicities)
}

/// The calibrated current plus a closed triangle loop anchored at a
/// terminal, carrying a constant multiplicity: the loop's boundary
/// telescopes to zero, so the total boundary is unchanged.
fn loop_added_current(
    t: &RectifiableCurrent,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<RectifiableCurrent> {
    let net = t.network();
    let mut points: Vec<Point> = (0..net.class_count()).map(|c| net.class_point(c)).collect();
    let mut edges: Vec<(usize, usize)> = (0..net.edge_count())
        .map(|e| net.graph().edge_classes(e))
        .collect();
    let mut orientations = t.orientations().to_vec();
    let mut multiplicities = t.multiplicities().to_vec();

    let anchor = net.terminals()[rng.gen_range(0..net.terminals().len())];
    let base = net.class_point(anchor).as_plane()?;
    let p1 = base
        + Vec2::new(
            rng.gen_range(0.1..0.4) * scale,
            rng.gen_range(-0.3..0.3) * scale,
        );
    let p2 = base
        + Vec2::new(
            rng.gen_range(-0.4..-0.1) * scale,
            rng.gen_range(-0.3..0.3) * scale,
        );
    points.push(Point::Plane(p1));
    points.push(Point::Plane(p2));
    let i1 = points.len() - 2;
    let i2 = points.len() - 1;
    let theta = loop {
        let m = rng.gen_range(-2i64..=2);
        let n = rng.gen_range(-2i64..=2);
        if m != 0 || n != 0 {
            break GroupElement::new(m, n);
        }
    };
    for (u, v) in [(anchor, i1), (i1, i2), (i2, anchor)] {
        edges.push((u, v));
        orientations.push(true);
        multiplicities.push(theta);
    }
    let network = EmbeddedNetwork::from_vertices(points, &edges, net.terminals().to_vec())?;
    RectifiableCurrent::new(network, orientations, multiplicities)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub resolution: usize,
    pub refined_junction: [f64; 3],
    pub refined_length: f64,
    /// Path lengths through middles A, B, C.
    pub path_lengths: [f64; 3],
    pub best_length: f64,
    pub best_kind: String,
    pub solver_length: f64,
    pub solver_junction: [f64; 3],
    pub solver_degenerate: Option<Terminal>,
    pub junction_distance: f64,
    pub length_gap: f64,
    pub agreement_tol: f64,
    pub agrees: bool,
}

/// Independent oracle: exhaustive grid search for the best single-junction
/// network over a `resolution x resolution` grid in normal coordinates on
/// the ball, locally refined by a shrinking compass search; also evaluates
/// the three path topologies; reports the best network and agreement with
/// the solver within twice the grid cell diameter.
pub fn oracle_global_check(
    a: &SpherePoint,
    b: &SpherePoint,
    c: &SpherePoint,
    ball: &GeodesicBall,
    resolution: usize,
) -> Result<OracleReport> {
    if resolution < 2 {
        return Err(Error::ParamOutOfRange("oracle resolution must be >= 2".into()));
    }
    let terminals = [*a, *b, *c];
    let radius = ball.radius();
    let center = ball.center();
    let h = |x: &SpherePoint| -> f64 {
        terminals.iter().map(|t| geodesic_distance(x, t)).sum()
    };

    // Grid sweep in normal coordinates, seeded with the terminals so that
    // degenerate optima are exactly representable.
    let mut best_u = (0.0f64, 0.0f64);
    let mut best_h = f64::INFINITY;
    for t in &terminals {
        let v = log_map(&center, t)?;
        let (u1, u2) = crate::sphere::tangent_to_frame(&v);
        let value = h(t);
        if value < best_h {
            best_h = value;
            best_u = (u1, u2);
        }
    }
    let cell = 2.0 * radius / (resolution - 1) as f64;
    for i in 0..resolution {
        for j in 0..resolution {
            let u1 = -radius + cell * i as f64;
            let u2 = -radius + cell * j as f64;
            if (u1 * u1 + u2 * u2).sqrt() >= radius {
                continue;
            }
            let x = exp_map(&tangent_from_frame(&center, u1, u2))?;
            let value = h(&x);
            if value < best_h {
                best_h = value;
                best_u = (u1, u2);
            }
        }
    }

    // Shrinking compass refinement in the chart.
    let eval = |u1: f64, u2: f64| -> Result<f64> {
        let r = (u1 * u1 + u2 * u2).sqrt();
        if r >= radius {
            return Ok(f64::INFINITY);
        }
        Ok(h(&exp_map(&tangent_from_frame(&center, u1, u2))?))
    };
    let (mut u1, mut u2) = best_u;
    let mut step = cell;
    while step > 1e-9 {
        let mut improved = false;
        for (d1, d2) in [
            (step, 0.0),
            (-step, 0.0),
            (0.0, step),
            (0.0, -step),
            (step, step),
            (step, -step),
            (-step, step),
            (-step, -step),
        ] {
            let v = eval(u1 + d1, u2 + d2)?;
            if v < best_h {
                best_h = v;
                u1 += d1;
                u2 += d2;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let refined = exp_map(&tangent_from_frame(&center, u1, u2))?;
    let refined_length = best_h;

    let path_lengths = [
        geodesic_distance(b, a) + geodesic_distance(a, c), // middle A
        geodesic_distance(a, b) + geodesic_distance(b, c), // middle B
        geodesic_distance(a, c) + geodesic_distance(c, b), // middle C
    ];
    let mut best_length = refined_length;
    let mut best_kind = "single-junction".to_string();
    for (k, (len, name)) in path_lengths
        .iter()
        .zip(["path-middle-a", "path-middle-b", "path-middle-c"])
        .enumerate()
    {
        let _ = k;
        if *len < best_length {
            best_length = *len;
            best_kind = name.to_string();
        }
    }

    let solved = solver::spherical::solve(&terminals, ball, &SolverConfig::default(), false)?;
    let solver_junction = solved.junction.as_sphere()?;
    let solver_length = network_length(&solved.network);
    let junction_distance = geodesic_distance(&solver_junction, &refined);
    let length_gap = (solver_length - best_length).abs();
    let agreement_tol = 2.0 * cell * std::f64::consts::SQRT_2;
    let agrees = length_gap <= agreement_tol;

    Ok(OracleReport {
        resolution,
        refined_junction: refined.coords().into(),
        refined_length,
        path_lengths,
        best_length,
        best_kind,
        solver_length,
        solver_junction: solver_junction.coords().into(),
        solver_degenerate: solved.degenerate_at,
        junction_distance,
        length_gap,
        agreement_tol,
        agrees,
    })
}

/// Helper shared by calibration-style experiments: the spherical junction
/// excess `h(exp_S(eps w)) - h(S)` for a perturbation direction `w`.
pub fn junction_excess(
    terminals: &[SpherePoint; 3],
    junction: &SpherePoint,
    direction: &crate::sphere::TangentVec,
    eps: f64,
) -> Result<f64> {
    let moved = exp_map(&direction.scaled(eps))?;
    Ok(solver::spherical::distance_sum(&moved, terminals)?
        - solver::spherical::distance_sum(junction, terminals)?)
}
