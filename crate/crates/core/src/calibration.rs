//! Explicit calibrations and numerical verification of the calibration
//! axioms.
//!
//! Planar case: the constant identity matrix form, checked through the
//! hexagonal dual norm. Spherical case: the scalar Lipschitz form `df` of
//! `f(x) = max_i (r_i - d_i(x))`, where `r_i` is the junction-to-terminal
//! distance and `d_i` the distance to terminal `i`. Off the ridge set (where
//! two branches tie) `f` is smooth with unit gradient pointing at the active
//! terminal.
//!
//! Closedness is verified through loop integrals and path independence
//! rather than a symbolic exterior derivative: the form is only Lipschitz
//! globally, and vanishing loop integrals are the assertable content of
//! Stokes' theorem at that regularity.

use crate::error::{Error, Result};
use crate::hex::{comass, group_norm, unit_elements, MatrixForm};
use crate::network::{EmbeddedNetwork, Point, RectifiableCurrent, SpaceTag};
use crate::quad;
use crate::sphere::{
    geodesic_distance, polyline_length, random_unit_tangent, unit_tangent_toward, GeodesicArc,
    GeodesicBall, SpherePoint, TangentVec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Two branch values closer than this are reported as a tie (a ridge point).
pub const TIE_TOL: f64 = 1e-12;

/// Default half-width of the ridge exclusion band used when sampling loops.
pub const RIDGE_BAND: f64 = 1e-3;

/// Tolerance of the planar extremal condition at quadrature nodes.
pub const PLANAR_EXTREMAL_TOL: f64 = 1e-12;

/// Minimum pair separation for the Lipschitz ratio test; below it the ratio
/// is dominated by floating-point noise in `f`.
const MIN_PAIR_SEPARATION: f64 = 1e-3;

/// Which branch of the max attains the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ActiveBranch {
    A,
    B,
    C,
    Tie,
}

/// The branch calibration data: three terminals, the junction, and the
/// junction-to-terminal radii. All three branches vanish at the junction.
#[derive(Clone, Debug)]
pub struct BranchCalibration {
    terminals: [SpherePoint; 3],
    junction: SpherePoint,
    radii: [f64; 3],
}

impl BranchCalibration {
    pub fn new(junction: SpherePoint, terminals: [SpherePoint; 3]) -> Result<Self> {
        let mut radii = [0.0; 3];
        for i in 0..3 {
            if junction.antipodal_to(&terminals[i]) {
                return Err(Error::CutLocus);
            }
            for j in (i + 1)..3 {
                if terminals[i].approx_eq(&terminals[j], 1e-12) {
                    return Err(Error::InvalidNetwork("terminals coincide".into()));
                }
            }
            radii[i] = geodesic_distance(&junction, &terminals[i]);
        }
        Ok(BranchCalibration {
            terminals,
            junction,
            radii,
        })
    }

    /// Calibration with explicitly chosen radii; used to probe how the
    /// axiom suite reacts to tampered data.
    pub fn with_radii(
        junction: SpherePoint,
        terminals: [SpherePoint; 3],
        radii: [f64; 3],
    ) -> Result<Self> {
        let mut cal = BranchCalibration::new(junction, terminals)?;
        cal.radii = radii;
        Ok(cal)
    }

    /// Extracts junction and terminals from a solved spherical Y-network.
    pub fn from_network(net: &EmbeddedNetwork) -> Result<Self> {
        if net.space() != SpaceTag::Sphere {
            return Err(Error::SpaceMismatch("branch calibration lives on the sphere".into()));
        }
        let junctions = net.junction_classes();
        if junctions.len() != 1 || net.terminals().len() != 3 {
            return Err(Error::InvalidNetwork(
                "expected a Y-network with one junction and three terminals".into(),
            ));
        }
        let junction = net.class_point(junctions[0]).as_sphere()?;
        let t = net.terminal_points();
        BranchCalibration::new(
            junction,
            [t[0].as_sphere()?, t[1].as_sphere()?, t[2].as_sphere()?],
        )
    }

    pub fn junction(&self) -> SpherePoint {
        self.junction
    }

    pub fn terminals(&self) -> &[SpherePoint; 3] {
        &self.terminals
    }

    pub fn radii(&self) -> [f64; 3] {
        self.radii
    }

    /// The three branch values `r_i - d_i(x)`.
    pub fn branch_values(&self, x: &SpherePoint) -> Result<[f64; 3]> {
        let mut vals = [0.0; 3];
        for i in 0..3 {
            if x.antipodal_to(&self.terminals[i]) {
                return Err(Error::CutLocus);
            }
            vals[i] = self.radii[i] - geodesic_distance(x, &self.terminals[i]);
        }
        Ok(vals)
    }

    fn top_two(vals: &[f64; 3]) -> (usize, f64, f64) {
        let mut top = 0;
        for i in 1..3 {
            if vals[i] > vals[top] {
                top = i;
            }
        }
        let second = (0..3)
            .filter(|&i| i != top)
            .map(|i| vals[i])
            .fold(f64::NEG_INFINITY, f64::max);
        (top, vals[top], second)
    }

    /// `f(x) = max_i (r_i - d_i(x))` with the attaining branch, or `Tie`
    /// when the top two branches are within `TIE_TOL`.
    pub fn f_value(&self, x: &SpherePoint) -> Result<(f64, ActiveBranch)> {
        let vals = self.branch_values(x)?;
        let (top, v_top, v_second) = Self::top_two(&vals);
        let branch = if v_top - v_second < TIE_TOL {
            ActiveBranch::Tie
        } else {
            [ActiveBranch::A, ActiveBranch::B, ActiveBranch::C][top]
        };
        Ok((v_top, branch))
    }

    /// Index of the branch attaining the max (ties broken by index); this is
    /// the almost-everywhere semantics quadrature relies on.
    pub fn active_branch_index(&self, x: &SpherePoint) -> Result<usize> {
        let vals = self.branch_values(x)?;
        Ok(Self::top_two(&vals).0)
    }

    /// Lower bound for the distance from `x` to the ridge set: half the gap
    /// between the top two branch values (each branch is 1-Lipschitz).
    pub fn ridge_margin(&self, x: &SpherePoint) -> Result<f64> {
        let vals = self.branch_values(x)?;
        let (_, v_top, v_second) = Self::top_two(&vals);
        Ok((v_top - v_second) / 2.0)
    }

    /// Riemannian gradient of `f` at a smooth point: the unit tangent toward
    /// the active terminal. Errors on the ridge and at the terminal itself.
    pub fn f_gradient(&self, x: &SpherePoint) -> Result<TangentVec> {
        let vals = self.branch_values(x)?;
        let (top, v_top, v_second) = Self::top_two(&vals);
        if v_top - v_second < TIE_TOL {
            return Err(Error::NonsmoothPoint("ridge point: active branch is not unique".into()));
        }
        if x.approx_eq(&self.terminals[top], 1e-12) {
            return Err(Error::NonsmoothPoint("distance function is singular at its terminal".into()));
        }
        unit_tangent_toward(x, &self.terminals[top])
    }

    /// `df(v)` through the top branch, defined almost everywhere (ties take
    /// the lowest branch index; they form a measure-zero set along curves).
    pub fn df(&self, x: &SpherePoint, v: &TangentVec) -> Result<f64> {
        let top = self.active_branch_index(x)?;
        let grad = unit_tangent_toward(x, &self.terminals[top])?;
        Ok(grad.dot(v))
    }

    /// Line integral of `df` along a geodesic arc, splitting at active-branch
    /// switches so each quadrature piece sees a smooth integrand.
    pub fn integrate_df_along_arc(&self, arc: &GeodesicArc) -> Result<f64> {
        let len = arc.length();
        if len < 1e-300 {
            return Ok(0.0);
        }
        let cuts = self.branch_switch_params(arc)?;
        let mut total = 0.0;
        let mut t0 = 0.0;
        for t1 in cuts.into_iter().chain(std::iter::once(1.0)) {
            if t1 - t0 < 1e-13 {
                t0 = t1;
                continue;
            }
            let piece = quad::integrate_adaptive(
                |t| {
                    let x = arc.point_at(t).expect("in range");
                    let tau = arc.unit_tangent_at(t).expect("in range");
                    self.df(&x, &tau).expect("interior point") * len
                },
                t0,
                t1,
                1e-11,
                len * (t1 - t0),
            )?;
            total += piece;
            t0 = t1;
        }
        Ok(total)
    }

    /// Parameters in `(0, 1)` where the active branch switches along the
    /// arc, located by probing 64 midpoints and bisecting each sign change
    /// of the competing branch difference.
    fn branch_switch_params(&self, arc: &GeodesicArc) -> Result<Vec<f64>> {
        let probes = 64;
        let branch_at = |t: f64| -> Result<usize> {
            self.active_branch_index(&arc.point_at(t)?)
        };
        let mut cuts = Vec::new();
        let mut prev_t = 0.5 / probes as f64;
        let mut prev_b = branch_at(prev_t)?;
        for k in 1..probes {
            let t = (k as f64 + 0.5) / probes as f64;
            let b = branch_at(t)?;
            if b != prev_b {
                // diff(t) = val[prev_b] - val[b]: positive at prev_t,
                // negative at t.
                let diff = |t: f64| -> Result<f64> {
                    let vals = self.branch_values(&arc.point_at(t)?)?;
                    Ok(vals[prev_b] - vals[b])
                };
                let mut lo = prev_t;
                let mut hi = t;
                if diff(lo)? > 0.0 && diff(hi)? < 0.0 {
                    for _ in 0..80 {
                        let mid = 0.5 * (lo + hi);
                        if diff(mid)? > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    cuts.push(0.5 * (lo + hi));
                } else {
                    // Multiple switches inside one probe interval; fall back
                    // to the midpoint, which adaptive doubling then absorbs.
                    cuts.push(0.5 * (prev_t + t));
                }
                prev_b = b;
            }
            prev_t = t;
        }
        Ok(cuts)
    }

    /// Line integral of `df` along a piecewise-geodesic path.
    pub fn integrate_df_along_path(&self, points: &[SpherePoint]) -> Result<f64> {
        let mut total = 0.0;
        for w in points.windows(2) {
            if w[0].approx_eq(&w[1], 1e-14) {
                continue;
            }
            let arc = GeodesicArc::new(w[0], w[1])?;
            total += self.integrate_df_along_arc(&arc)?;
        }
        Ok(total)
    }

    /// The Y-network of this calibration: junction joined to the terminals.
    pub fn network(&self) -> Result<EmbeddedNetwork> {
        EmbeddedNetwork::star(
            Point::Sphere(self.junction),
            self.terminals.iter().map(|&t| Point::Sphere(t)).collect(),
        )
    }
}

/// The scalar 1-form `df` of a branch calibration, as an evaluator that is
/// linear in the tangent argument at every smooth point.
pub struct BranchOneForm<'a> {
    cal: &'a BranchCalibration,
}

impl<'a> BranchOneForm<'a> {
    pub fn new(cal: &'a BranchCalibration) -> Self {
        BranchOneForm { cal }
    }

    pub fn eval(&self, x: &SpherePoint, v: &TangentVec) -> Result<f64> {
        let grad = self.cal.f_gradient(x)?;
        Ok(grad.dot(v))
    }

    /// Smooth-domain predicate: off the ridge and away from the terminals.
    pub fn is_smooth_at(&self, x: &SpherePoint) -> bool {
        self.cal.f_gradient(x).is_ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessReport {
    /// Exactly closed by construction (constant planar form).
    pub exact: bool,
    pub loops_tested: usize,
    /// Max of `|loop integral| / loop length`.
    pub max_loop_integral_per_length: f64,
    pub path_pairs_tested: usize,
    pub max_path_difference: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComassReport {
    pub pairs_tested: usize,
    /// Spherical mode: max Lipschitz ratio `|f(x)-f(y)| / d(x,y)` over
    /// well-separated pairs. Planar mode: the hexagonal dual-norm comass.
    pub max_lipschitz_ratio: f64,
    /// Pairs violating `|f(x)-f(y)| <= d(x,y) + 1e-12` (any separation).
    pub absolute_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationConditionReport {
    pub edge_samples: usize,
    pub max_deviation_from_1: f64,
    /// Interior edge samples where a branch other than the edge's own
    /// terminal attains the max or a foreign branch is non-negative.
    pub foreign_branch_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RidgeClearanceReport {
    /// Min ridge margin over edge samples at parameter `t >= 0.05`.
    pub min_margin_away_from_junction: f64,
    /// The ridge meets the network edges only at the junction end.
    pub except_at_junction: bool,
    pub band: f64,
}

/// Combined report of the three calibration axioms plus ridge clearance.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub mode: String,
    pub closedness: ClosednessReport,
    pub comass: ComassReport,
    pub calibration_condition: CalibrationConditionReport,
    pub ridge_clearance: Option<RidgeClearanceReport>,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub pass: bool,
}

fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    // Per-sample generator so results do not depend on evaluation order.
    ChaCha8Rng::seed_from_u64(
        seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9),
    )
}

/// Verifies the three calibration axioms of the spherical branch form on
/// its Y-network inside the given ball.
///
/// Closedness: `samples/100` random in-cell loops (piecewise-geodesic
/// polygons clear of the ridge band) plus as many same-endpoint path pairs.
/// Comass: `samples` Lipschitz pairs. Calibration condition: `samples/100`
/// points per edge. Also reports ridge clearance along the edges.
pub fn verify_axioms_spherical(
    cal: &BranchCalibration,
    net: &EmbeddedNetwork,
    ball: &GeodesicBall,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    verify_axioms_spherical_with_band(cal, net, ball, samples, tol, seed, RIDGE_BAND)
}

pub fn verify_axioms_spherical_with_band(
    cal: &BranchCalibration,
    net: &EmbeddedNetwork,
    ball: &GeodesicBall,
    samples: usize,
    tol: f64,
    seed: u64,
    band: f64,
) -> Result<AxiomReport> {
    if samples == 0 || tol <= 0.0 {
        return Err(Error::ParamOutOfRange("samples and tol must be positive".into()));
    }
    check_network_matches(cal, net)?;
    for t in cal.terminals() {
        if !ball.contains(t) {
            return Err(Error::InvalidNetwork("terminal outside the ball".into()));
        }
    }
    if !ball.contains(&cal.junction()) {
        return Err(Error::InvalidNetwork("junction outside the ball".into()));
    }

    let loops = (samples / 100).max(8);
    let per_edge = (samples / 100).max(16);

    // Axiom 1: closedness via loop integrals and path independence.
    let mut max_loop = 0.0f64;
    for i in 0..loops {
        let mut rng = sample_rng(seed, 1, i as u64);
        let (center, rho) = sample_smooth_disk(cal, ball, band, &mut rng)?;
        let k = 3 + (rng.gen_range(0u32..3)) as usize;
        let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut verts: Vec<SpherePoint> = Vec::with_capacity(k + 1);
        for a in &angles {
            let r = rho * rng.gen_range(0.3..1.0);
            let dir = tangent_at_angle(&center, *a);
            verts.push(crate::sphere::exp_map(&dir.scaled(r))?);
        }
        verts.push(verts[0]);
        let integral = cal.integrate_df_along_path(&verts)?;
        let length = polyline_length(&verts);
        if length > 1e-9 {
            max_loop = max_loop.max(integral.abs() / length);
        }
    }

    let mut max_path_diff = 0.0f64;
    for i in 0..loops {
        let mut rng = sample_rng(seed, 2, i as u64);
        let (center, rho) = sample_smooth_disk(cal, ball, band, &mut rng)?;
        let d1 = tangent_at_angle(&center, rng.gen_range(0.0..std::f64::consts::TAU));
        let d2 = tangent_at_angle(&center, rng.gen_range(0.0..std::f64::consts::TAU));
        let d3 = tangent_at_angle(&center, rng.gen_range(0.0..std::f64::consts::TAU));
        let p = crate::sphere::exp_map(&d1.scaled(rho * 0.9))?;
        let q = crate::sphere::exp_map(&d2.scaled(rho * 0.9))?;
        let mid = crate::sphere::exp_map(&d3.scaled(rho * 0.9))?;
        if p.approx_eq(&q, 1e-9) {
            continue;
        }
        let direct = cal.integrate_df_along_path(&[p, q])?;
        let detour = cal.integrate_df_along_path(&[p, mid, q])?;
        max_path_diff = max_path_diff.max((direct - detour).abs());
    }

    // Axiom 2: 1-Lipschitz bound as the comass statement.
    let mut max_ratio = 0.0f64;
    let mut absolute_violations = 0usize;
    let mut ratio_pairs = 0usize;
    let mut i = 0u64;
    while ratio_pairs < samples {
        let mut rng = sample_rng(seed, 3, i);
        i += 1;
        let x = ball.sample_uniform(&mut rng);
        let y = ball.sample_uniform(&mut rng);
        let d = geodesic_distance(&x, &y);
        let df = (cal.f_value(&x)?.0 - cal.f_value(&y)?.0).abs();
        if df > d + 1e-12 {
            absolute_violations += 1;
        }
        if d >= MIN_PAIR_SEPARATION {
            max_ratio = max_ratio.max(df / d);
            ratio_pairs += 1;
        }
        if i > 20 * samples as u64 {
            break;
        }
    }

    // Axiom 3: df(tau) = 1 along each edge, tau oriented junction->terminal.
    let mut max_dev = 0.0f64;
    let mut foreign = 0usize;
    let mut edge_samples = 0usize;
    for (e, terminal) in cal.terminals().iter().enumerate() {
        let arc = GeodesicArc::new(cal.junction(), *terminal)?;
        for k in 0..per_edge {
            let mut rng = sample_rng(seed, 4 + e as u64, k as u64);
            let t = rng.gen_range(0.001..0.999);
            let x = arc.point_at(t)?;
            let tau = arc.unit_tangent_at(t)?;
            let vals = cal.branch_values(&x)?;
            let top = BranchCalibration::top_two(&vals).0;
            if top != e || (0..3).any(|j| j != e && vals[j] >= 0.0) {
                foreign += 1;
            }
            let grad = unit_tangent_toward(&x, &cal.terminals()[top])?;
            max_dev = max_dev.max((grad.dot(&tau) - 1.0).abs());
            edge_samples += 1;
        }
    }

    // Ridge clearance along the edges.
    let mut min_margin = f64::INFINITY;
    let mut near_junction_shrinks = true;
    for terminal in cal.terminals() {
        let arc = GeodesicArc::new(cal.junction(), *terminal)?;
        for k in 0..100 {
            let t = 0.05 + 0.95 * (k as f64 + 0.5) / 100.0;
            min_margin = min_margin.min(cal.ridge_margin(&arc.point_at(t)?)?);
        }
        // Approaching the junction the margin must shrink toward 0: the
        // ridge meets the edge exactly there.
        let m_near = cal.ridge_margin(&arc.point_at(0.001)?)?;
        let m_far = cal.ridge_margin(&arc.point_at(0.05)?)?;
        if !(m_near < m_far) {
            near_junction_shrinks = false;
        }
    }
    let except_at_junction = min_margin > 0.0 && near_junction_shrinks;

    let closedness = ClosednessReport {
        exact: false,
        loops_tested: loops,
        max_loop_integral_per_length: max_loop,
        path_pairs_tested: loops,
        max_path_difference: max_path_diff,
    };
    let comass_report = ComassReport {
        pairs_tested: ratio_pairs,
        max_lipschitz_ratio: max_ratio,
        absolute_violations,
    };
    let calibration_condition = CalibrationConditionReport {
        edge_samples,
        max_deviation_from_1: max_dev,
        foreign_branch_violations: foreign,
    };
    let ridge = RidgeClearanceReport {
        min_margin_away_from_junction: min_margin,
        except_at_junction,
        band,
    };
    let pass = closedness.max_loop_integral_per_length < tol
        && closedness.max_path_difference < tol.max(1e-8)
        && comass_report.absolute_violations == 0
        && comass_report.max_lipschitz_ratio <= 1.0 + 1e-12
        && calibration_condition.max_deviation_from_1 < tol
        && calibration_condition.foreign_branch_violations == 0
        && ridge.except_at_junction;
    Ok(AxiomReport {
        mode: "spherical-branch".into(),
        closedness,
        comass: comass_report,
        calibration_condition,
        ridge_clearance: Some(ridge),
        samples,
        tol,
        seed,
        pass,
    })
}

fn check_network_matches(cal: &BranchCalibration, net: &EmbeddedNetwork) -> Result<()> {
    if net.space() != SpaceTag::Sphere {
        return Err(Error::SpaceMismatch("expected a spherical network".into()));
    }
    let junctions = net.junction_classes();
    if junctions.len() != 1 || net.terminals().len() != 3 || net.edge_count() != 3 {
        return Err(Error::InvalidNetwork("expected a 3-edge Y-network".into()));
    }
    let j = net.class_point(junctions[0]);
    if !j.approx_eq(&Point::Sphere(cal.junction()), 1e-10) {
        return Err(Error::InvalidNetwork("network junction differs from the calibration".into()));
    }
    for t in net.terminal_points() {
        if !cal
            .terminals()
            .iter()
            .any(|ct| t.approx_eq(&Point::Sphere(*ct), 1e-10))
        {
            return Err(Error::InvalidNetwork(
                "network terminal differs from the calibration".into(),
            ));
        }
    }
    Ok(())
}

/// Samples a center whose ridge margin exceeds the band, returning the
/// center and a disk radius within which the form stays smooth and inside
/// the ball.
fn sample_smooth_disk<R: Rng>(
    cal: &BranchCalibration,
    ball: &GeodesicBall,
    band: f64,
    rng: &mut R,
) -> Result<(SpherePoint, f64)> {
    for _ in 0..1000 {
        let center = ball.sample_uniform(rng);
        let margin = cal.ridge_margin(&center)?;
        let to_boundary = ball.radius() - geodesic_distance(&ball.center(), &center);
        let rho = (0.8 * (margin - band)).min(0.05).min(0.8 * to_boundary);
        // Keep clear of the terminals, where f is nonsmooth.
        let near_terminal = cal
            .terminals()
            .iter()
            .any(|t| geodesic_distance(&center, t) < rho + 1e-3);
        if margin > band * 1.5 && rho > band && !near_terminal {
            return Ok((center, rho));
        }
    }
    Err(Error::GenerationFailed(
        "could not find a smooth sampling disk clear of the ridge band".into(),
    ))
}

fn tangent_at_angle(p: &SpherePoint, angle: f64) -> TangentVec {
    let (e1, e2) = crate::sphere::tangent_frame(p);
    let (s, c) = angle.sin_cos();
    TangentVec::project(*p, e1 * c + e2 * s)
}

/// Verifies the constant identity form as a calibration of an aligned
/// planar lattice current: exact closedness, hexagonal comass `<= 1`, and
/// the extremal condition `<omega(tau), theta> = ||theta||` at quadrature
/// nodes on every edge. Misalignments surface as a failing extremal
/// condition.
pub fn verify_planar_id_calibration(t: &RectifiableCurrent) -> Result<AxiomReport> {
    if t.network().space() != SpaceTag::Plane {
        return Err(Error::SpaceMismatch("identity calibration is planar".into()));
    }
    let omega = MatrixForm::identity();
    let comass_value = comass(&omega);

    let (nodes, _) = quad::gauss_legendre(quad::PANEL_NODES);
    let mut max_dev = 0.0f64;
    let mut edge_samples = 0usize;
    for e in 0..t.network().edge_count() {
        let theta = t.multiplicities()[e];
        let (a, b) = t.oriented_segment(e)?;
        let tau = (b - a).normalized().ok_or(Error::DirectionUndefined)?;
        let target = group_norm(theta);
        for x in &nodes {
            let _s = 0.5 * (x + 1.0); // node position along the edge
            let pairing = omega.apply(tau).dot(theta.vector());
            max_dev = max_dev.max((pairing - target).abs());
            edge_samples += 1;
        }
    }

    let closedness = ClosednessReport {
        exact: true,
        loops_tested: 0,
        max_loop_integral_per_length: 0.0,
        path_pairs_tested: 0,
        max_path_difference: 0.0,
    };
    let comass_report = ComassReport {
        pairs_tested: unit_elements().len(),
        max_lipschitz_ratio: comass_value,
        absolute_violations: 0,
    };
    let calibration_condition = CalibrationConditionReport {
        edge_samples,
        max_deviation_from_1: max_dev,
        foreign_branch_violations: 0,
    };
    let pass = comass_value <= 1.0 + PLANAR_EXTREMAL_TOL && max_dev <= PLANAR_EXTREMAL_TOL;
    Ok(AxiomReport {
        mode: "planar-identity".into(),
        closedness,
        comass: comass_report,
        calibration_condition,
        ridge_clearance: None,
        samples: edge_samples,
        tol: PLANAR_EXTREMAL_TOL,
        seed: 0,
        pass,
    })
}

/// Euclidean (operator-norm) comass of a constant matrix form, as in the
/// covector definition that measures values with the Euclidean norm. For
/// the identity both this and the hexagonal dual comass equal 1.
pub fn euclidean_comass(m: &MatrixForm) -> f64 {
    let a = m.entries[0][0];
    let b = m.entries[0][1];
    let c = m.entries[1][0];
    let d = m.entries[1][1];
    let e = (a + d) / 2.0;
    let f = (a - d) / 2.0;
    let g = (b + c) / 2.0;
    let h = (b - c) / 2.0;
    (e * e + h * h).sqrt() + (f * f + g * g).sqrt()
}

/// Convenience: random piecewise-geodesic curve between two fixed endpoints,
/// staying inside the ball; used for per-edge minimality experiments.
pub fn random_path_between<R: Rng>(
    from: &SpherePoint,
    to: &SpherePoint,
    ball: &GeodesicBall,
    knots: usize,
    jitter: f64,
    rng: &mut R,
) -> Result<Vec<SpherePoint>> {
    let arc = GeodesicArc::new(*from, *to)?;
    'attempt: for _ in 0..1000 {
        let mut pts = vec![*from];
        for k in 1..=knots {
            let t = k as f64 / (knots + 1) as f64;
            let base = arc.point_at(t)?;
            let dir = random_unit_tangent(&base, rng);
            let r = jitter * rng.gen::<f64>();
            let p = crate::sphere::exp_map(&dir.scaled(r))?;
            if !ball.contains(&p) {
                continue 'attempt;
            }
            pts.push(p);
        }
        pts.push(*to);
        return Ok(pts);
    }
    Err(Error::GenerationFailed("path sampling left the ball repeatedly".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec2;
    use crate::solver::{spherical, SolverConfig};
    use std::f64::consts::PI;

    fn equilateral_cal(polar: f64) -> BranchCalibration {
        let terminals = [
            SpherePoint::from_polar(polar, 0.0),
            SpherePoint::from_polar(polar, 2.0 * PI / 3.0),
            SpherePoint::from_polar(polar, 4.0 * PI / 3.0),
        ];
        BranchCalibration::new(SpherePoint::north_pole(), terminals).unwrap()
    }

    #[test]
    fn f_value_examples() {
        let cal = equilateral_cal(0.3);
        let (at_s, branch) = cal.f_value(&cal.junction()).unwrap();
        assert!(at_s.abs() < 1e-15);
        assert_eq!(branch, ActiveBranch::Tie);

        let (at_a, branch) = cal.f_value(&cal.terminals()[0]).unwrap();
        assert!((at_a - 0.3).abs() < 1e-14);
        assert_eq!(branch, ActiveBranch::A);

        // Midpoint of edge SA: value r_A/2, branch A, others negative.
        let arc = GeodesicArc::new(cal.junction(), cal.terminals()[0]).unwrap();
        let mid = arc.point_at(0.5).unwrap();
        let (v, branch) = cal.f_value(&mid).unwrap();
        assert!((v - 0.15).abs() < 1e-13);
        assert_eq!(branch, ActiveBranch::A);
        let vals = cal.branch_values(&mid).unwrap();
        assert!(vals[1] < 0.0 && vals[2] < 0.0);
    }

    #[test]
    fn f_gradient_unit_and_edge_condition() {
        let cal = equilateral_cal(0.3);
        let arc = GeodesicArc::new(cal.junction(), cal.terminals()[0]).unwrap();
        for k in 1..20 {
            let t = k as f64 / 20.0;
            let x = arc.point_at(t).unwrap();
            let g = cal.f_gradient(&x).unwrap();
            assert!((g.norm() - 1.0).abs() < 1e-12);
            let tau = arc.unit_tangent_at(t).unwrap();
            assert!((g.dot(&tau) - 1.0).abs() < 1e-12);
        }
        // Junction is a ridge point.
        assert!(matches!(
            cal.f_gradient(&cal.junction()),
            Err(Error::NonsmoothPoint(_))
        ));
    }

    #[test]
    fn f_gradient_matches_finite_differences() {
        use rand::SeedableRng;
        let cal = equilateral_cal(0.35);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let eps = 1e-6;
        let mut tested = 0;
        while tested < 100 {
            let x = ball.sample_uniform(&mut rng);
            if cal.ridge_margin(&x).unwrap() < 1e-3 {
                continue;
            }
            if cal.terminals().iter().any(|t| x.approx_eq(t, 1e-2)) {
                continue;
            }
            let g = cal.f_gradient(&x).unwrap();
            let w = random_unit_tangent(&x, &mut rng);
            let plus = crate::sphere::exp_map(&w.scaled(eps)).unwrap();
            let minus = crate::sphere::exp_map(&w.scaled(-eps)).unwrap();
            let fd = (cal.f_value(&plus).unwrap().0 - cal.f_value(&minus).unwrap().0) / (2.0 * eps);
            let directional = g.dot(&w);
            assert!((fd - directional).abs() <= 1e-5 * directional.abs().max(1.0));
            tested += 1;
        }
    }

    #[test]
    fn one_form_is_linear_in_tangent() {
        let cal = equilateral_cal(0.3);
        let form = BranchOneForm::new(&cal);
        let arc = GeodesicArc::new(cal.junction(), cal.terminals()[1]).unwrap();
        let x = arc.point_at(0.37).unwrap();
        let (e1, e2) = crate::sphere::tangent_frame(&x);
        let u = TangentVec::project(x, e1 * 0.8 + e2 * (-0.1));
        let v = TangentVec::project(x, e1 * (-0.3) + e2 * 0.9);
        let sum = u.try_add(&v).unwrap();
        let lhs = form.eval(&x, &sum).unwrap();
        let rhs = form.eval(&x, &u).unwrap() + form.eval(&x, &v).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        let scaled = form.eval(&x, &u.scaled(2.5)).unwrap();
        assert!((scaled - 2.5 * form.eval(&x, &u).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn telescoping_along_edges() {
        let cal = equilateral_cal(0.3);
        for (i, t) in cal.terminals().iter().enumerate() {
            let arc = GeodesicArc::new(cal.junction(), *t).unwrap();
            let integral = cal.integrate_df_along_arc(&arc).unwrap();
            assert!(
                (integral - cal.radii()[i]).abs() < 1e-10,
                "edge {i}: integral {integral} vs radius {}",
                cal.radii()[i]
            );
        }
    }

    #[test]
    fn path_integral_is_endpoint_difference_across_ridges() {
        use rand::SeedableRng;
        let cal = equilateral_cal(0.3);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        // Paths from terminal B to terminal A wander through several cells.
        for knots in 1..=4 {
            let path = random_path_between(
                &cal.terminals()[1],
                &cal.terminals()[0],
                &ball,
                knots,
                0.1,
                &mut rng,
            )
            .unwrap();
            // f(A) - f(B) = r_A - r_B; the radii are well-conditioned where
            // evaluating f exactly at a terminal is not (acos near 1).
            let integral = cal.integrate_df_along_path(&path).unwrap();
            let expect = cal.radii()[0] - cal.radii()[1];
            assert!(
                (integral - expect).abs() < 1e-8,
                "knots {knots}: {integral} vs {expect}"
            );
        }
    }

    #[test]
    fn axiom_suite_passes_on_equilateral() {
        let cal = equilateral_cal(0.3);
        let net = cal.network().unwrap();
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let report = verify_axioms_spherical(&cal, &net, &ball, 2000, 1e-9, 42).unwrap();
        assert!(report.pass, "{report:#?}");
        assert!(report.comass.max_lipschitz_ratio <= 1.0 + 1e-12);
        assert!(report.calibration_condition.max_deviation_from_1 < 1e-9);
    }

    #[test]
    fn axiom_suite_detects_tampered_radii() {
        let cal = equilateral_cal(0.3);
        let mut radii = cal.radii();
        radii[0] += 0.01;
        let tampered =
            BranchCalibration::with_radii(cal.junction(), *cal.terminals(), radii).unwrap();
        let net = cal.network().unwrap();
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let report = verify_axioms_spherical(&tampered, &net, &ball, 2000, 1e-9, 42).unwrap();
        assert!(!report.pass);
        // The inflated branch invades the other edges near the junction.
        assert!(
            report.calibration_condition.foreign_branch_violations > 0
                || report.calibration_condition.max_deviation_from_1 > 1e-9
        );
    }

    #[test]
    fn moved_junction_fails_certification_not_axioms() {
        // A junction displaced by 0.01 still yields a self-consistent branch
        // form whose three axioms hold (they calibrate each edge, not the
        // junction balance); what breaks is the 120-degree certification and
        // the tangent-balance condition of the network itself. Verification
        // pipelines gate on both.
        let cal = equilateral_cal(0.3);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let moved = crate::sphere::exp_map(
            &crate::sphere::tangent_from_frame(&SpherePoint::north_pole(), 0.01, 0.0),
        )
        .unwrap();
        let bad_cal = BranchCalibration::new(moved, *cal.terminals()).unwrap();
        let bad_net = bad_cal.network().unwrap();

        let report = verify_axioms_spherical(&bad_cal, &bad_net, &ball, 2000, 1e-9, 42).unwrap();
        assert!(report.pass, "axioms hold for the self-consistent form");

        let t = cal.terminals();
        let cert = crate::solver::certify_junction(
            &Point::Sphere(moved),
            &[
                Point::Sphere(t[0]),
                Point::Sphere(t[1]),
                Point::Sphere(t[2]),
            ],
            1e-8,
        )
        .unwrap();
        assert!(!cert.pass);
        assert!(cert.residual > 1e-3);
        let validation = crate::network::validate_minimal_network(&bad_net);
        assert!(!validation.tangents_balance);
    }

    #[test]
    fn planar_identity_calibration_passes_and_fails() {
        use crate::hex::generators;
        use crate::network::{build_steiner_current, EmbeddedNetwork};

        let g = generators();
        let net = EmbeddedNetwork::star(
            Point::Plane(Vec2::ZERO),
            vec![Point::Plane(g.g1), Point::Plane(g.g2), Point::Plane(g.g3)],
        )
        .unwrap();
        let aligned = build_steiner_current(&net).unwrap();
        let report = verify_planar_id_calibration(&aligned.current).unwrap();
        assert!(report.pass, "{report:#?}");
        assert!((report.comass.max_lipschitz_ratio - 1.0).abs() < 1e-12);
        assert!(report.closedness.exact);

        // Sign flip on the g1 edge: extremal condition gives -1.
        let mut mults = aligned.current.multiplicities().to_vec();
        mults[0] = -mults[0];
        let flipped = aligned.current.with_multiplicities(mults).unwrap();
        let report = verify_planar_id_calibration(&flipped).unwrap();
        assert!(!report.pass);
        assert!((report.calibration_condition.max_deviation_from_1 - 2.0).abs() < 1e-12);

        // Edge rotated 10 degrees off its generator: deviation 1 - cos(10deg).
        let phi = 10.0f64.to_radians();
        let rotated_net = EmbeddedNetwork::star(
            Point::Plane(Vec2::ZERO),
            vec![
                Point::Plane(g.g1.rotated(phi)),
                Point::Plane(g.g2),
                Point::Plane(g.g3),
            ],
        )
        .unwrap();
        let t = crate::network::RectifiableCurrent::new(
            rotated_net,
            vec![true; 3],
            aligned.current.multiplicities().to_vec(),
        )
        .unwrap();
        let report = verify_planar_id_calibration(&t).unwrap();
        assert!(!report.pass);
        assert!(
            (report.calibration_condition.max_deviation_from_1 - (1.0 - phi.cos())).abs() < 1e-12
        );
    }

    #[test]
    fn euclidean_comass_matches_angle_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        assert!((euclidean_comass(&MatrixForm::identity()) - 1.0).abs() < 1e-15);
        for _ in 0..50 {
            let m = MatrixForm::new([
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            ]);
            let mut scanned: f64 = 0.0;
            for k in 0..3600 {
                let a = k as f64 * 2.0 * PI / 3600.0;
                let nu = Vec2::new(a.cos(), a.sin());
                scanned = scanned.max(m.apply(nu).norm());
            }
            assert!(scanned <= euclidean_comass(&m) + 1e-12);
            assert!(euclidean_comass(&m) - scanned < 1e-5);
        }
    }

    #[test]
    fn solver_network_feeds_calibration() {
        let terminals = [
            SpherePoint::from_polar(0.31, 0.4),
            SpherePoint::from_polar(0.44, 2.5),
            SpherePoint::from_polar(0.22, 4.3),
        ];
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        let r = spherical::solve(&terminals, &ball, &SolverConfig::default(), true).unwrap();
        let cal = BranchCalibration::from_network(&r.network).unwrap();
        let report = verify_axioms_spherical(&cal, &r.network, &ball, 2000, 1e-8, 7).unwrap();
        assert!(report.pass, "{report:#?}");
    }
}
