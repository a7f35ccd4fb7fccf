//! Networks and 1-rectifiable currents with lattice coefficients.
//!
//! An abstract graph is a set of elementary edges whose endpoints are glued
//! by an equivalence relation; an embedded network realizes each edge as a
//! geodesic arc (sphere) or straight segment (plane). Currents decorate the
//! edges with an orientation and a lattice multiplicity and support mass,
//! boundary, and evaluation against planar matrix-valued forms.

pub mod schema;

use crate::error::{Error, Result};
use crate::hex::{group_norm, GroupElement, MatrixForm};
use crate::linalg::Vec2;
use crate::quad;
use crate::sphere::{geodesic_distance, unit_tangent_toward, GeodesicArc, SpherePoint};
use serde::{Deserialize, Serialize};

/// Two embedded points closer than this are treated as the same vertex when
/// collecting boundary atoms or checking endpoint consistency.
pub const POINT_MERGE_TOL: f64 = 1e-10;

/// Arc-length resolution of the sampled interior-disjointness check.
pub const DISJOINTNESS_RESOLUTION: f64 = 1e-3;

/// Closest-approach threshold below which edge interiors are considered to
/// intersect.
pub const DISJOINTNESS_THRESHOLD: f64 = 1e-8;

/// Default tolerance on the inward-tangent sum at a triple junction.
pub const TANGENT_BALANCE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    Sphere,
    Plane,
}

/// A point of either ambient space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Sphere(SpherePoint),
    Plane(Vec2),
}

impl Point {
    pub fn space(&self) -> SpaceTag {
        match self {
            Point::Sphere(_) => SpaceTag::Sphere,
            Point::Plane(_) => SpaceTag::Plane,
        }
    }

    pub fn distance(&self, other: &Point) -> Result<f64> {
        match (self, other) {
            (Point::Sphere(a), Point::Sphere(b)) => Ok(geodesic_distance(a, b)),
            (Point::Plane(a), Point::Plane(b)) => Ok(a.distance(*b)),
            _ => Err(Error::SpaceMismatch("distance between sphere and plane points".into())),
        }
    }

    /// Point-identity test. On the sphere this compares chordal distance,
    /// which resolves coincident points to machine precision where the
    /// arccos-based geodesic distance bottoms out near 1e-8.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        match (self, other) {
            (Point::Sphere(a), Point::Sphere(b)) => a.approx_eq(b, tol),
            (Point::Plane(a), Point::Plane(b)) => a.distance(*b) <= tol,
            _ => false,
        }
    }

    pub fn as_sphere(&self) -> Result<SpherePoint> {
        match self {
            Point::Sphere(p) => Ok(*p),
            Point::Plane(_) => Err(Error::SpaceMismatch("expected a sphere point".into())),
        }
    }

    pub fn as_plane(&self) -> Result<Vec2> {
        match self {
            Point::Plane(p) => Ok(*p),
            Point::Sphere(_) => Err(Error::SpaceMismatch("expected a plane point".into())),
        }
    }
}

/// One endpoint of an elementary edge: `end` is 0 at the tail, 1 at the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndpointId {
    pub edge: usize,
    pub end: u8,
}

/// An abstract connected graph: `edge_count` elementary edges whose `2N`
/// endpoints are partitioned into vertex classes.
#[derive(Clone, Debug)]
pub struct AbstractGraph {
    edge_count: usize,
    vertex_classes: Vec<Vec<EndpointId>>,
    class_of: Vec<[usize; 2]>,
}

impl AbstractGraph {
    pub fn new(edge_count: usize, vertex_classes: Vec<Vec<EndpointId>>) -> Result<Self> {
        if edge_count == 0 {
            return Err(Error::InvalidGraph("graph has no edges".into()));
        }
        let mut class_of = vec![[usize::MAX; 2]; edge_count];
        for (c, members) in vertex_classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidGraph(format!("vertex class {c} is empty")));
            }
            for ep in members {
                if ep.edge >= edge_count || ep.end > 1 {
                    return Err(Error::InvalidGraph(format!(
                        "endpoint ({}, {}) out of range",
                        ep.end, ep.edge
                    )));
                }
                if class_of[ep.edge][ep.end as usize] != usize::MAX {
                    return Err(Error::InvalidGraph(format!(
                        "endpoint ({}, {}) appears in more than one class",
                        ep.end, ep.edge
                    )));
                }
                class_of[ep.edge][ep.end as usize] = c;
            }
        }
        for (e, ends) in class_of.iter().enumerate() {
            if ends[0] == usize::MAX || ends[1] == usize::MAX {
                return Err(Error::InvalidGraph(format!(
                    "edge {e} has an endpoint missing from the partition"
                )));
            }
        }
        let graph = AbstractGraph {
            edge_count,
            vertex_classes,
            class_of,
        };
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(graph)
    }

    /// Builds the graph from per-edge class pairs `(from, to)`.
    pub fn from_edge_classes(class_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut classes: Vec<Vec<EndpointId>> = vec![Vec::new(); class_count];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= class_count || b >= class_count {
                return Err(Error::InvalidGraph(format!("edge {e} references a missing vertex")));
            }
            classes[a].push(EndpointId { edge: e, end: 0 });
            classes[b].push(EndpointId { edge: e, end: 1 });
        }
        AbstractGraph::new(edges.len(), classes)
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn class_count(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn class_members(&self, class: usize) -> &[EndpointId] {
        &self.vertex_classes[class]
    }

    pub fn degree(&self, class: usize) -> usize {
        self.vertex_classes[class].len()
    }

    /// Class of the given endpoint of an edge.
    pub fn class_of(&self, edge: usize, end: u8) -> usize {
        self.class_of[edge][end as usize]
    }

    pub fn edge_classes(&self, edge: usize) -> (usize, usize) {
        (self.class_of[edge][0], self.class_of[edge][1])
    }

    fn is_connected(&self) -> bool {
        let n = self.class_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for ep in &self.vertex_classes[c] {
                let other = self.class_of[ep.edge][1 - ep.end as usize];
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Geometry of a single embedded edge.
#[derive(Clone, Debug)]
pub enum EdgeCurve {
    Geodesic(GeodesicArc),
    Segment { start: Vec2, end: Vec2 },
}

impl EdgeCurve {
    pub fn from_endpoints(a: &Point, b: &Point) -> Result<Self> {
        match (a, b) {
            (Point::Sphere(p), Point::Sphere(q)) => Ok(EdgeCurve::Geodesic(GeodesicArc::new(*p, *q)?)),
            (Point::Plane(p), Point::Plane(q)) => Ok(EdgeCurve::Segment { start: *p, end: *q }),
            _ => Err(Error::SpaceMismatch("edge endpoints in different spaces".into())),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            EdgeCurve::Geodesic(arc) => arc.length(),
            EdgeCurve::Segment { start, end } => start.distance(*end),
        }
    }

    pub fn start_point(&self) -> Point {
        match self {
            EdgeCurve::Geodesic(arc) => Point::Sphere(arc.start()),
            EdgeCurve::Segment { start, .. } => Point::Plane(*start),
        }
    }

    pub fn end_point(&self) -> Point {
        match self {
            EdgeCurve::Geodesic(arc) => Point::Sphere(arc.end()),
            EdgeCurve::Segment { end, .. } => Point::Plane(*end),
        }
    }

    pub fn point_at(&self, t: f64) -> Result<Point> {
        match self {
            EdgeCurve::Geodesic(arc) => Ok(Point::Sphere(arc.point_at(t)?)),
            EdgeCurve::Segment { start, end } => {
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::ParamOutOfRange(format!("segment parameter {t}")));
                }
                Ok(Point::Plane(*start + (*end - *start) * t))
            }
        }
    }
}

/// An embedded network: an abstract graph, one curve per edge, and the
/// designated terminal classes. All endpoints of a vertex class embed to the
/// same point (within `POINT_MERGE_TOL`).
#[derive(Clone, Debug)]
pub struct EmbeddedNetwork {
    graph: AbstractGraph,
    curves: Vec<EdgeCurve>,
    space: SpaceTag,
    class_points: Vec<Point>,
    terminals: Vec<usize>,
}

impl EmbeddedNetwork {
    /// Builds a network from per-class embedded points, class-index edge
    /// pairs, and the designated terminal classes.
    pub fn from_vertices(
        points: Vec<Point>,
        edges: &[(usize, usize)],
        terminals: Vec<usize>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidNetwork("network has no vertices".into()));
        }
        let space = points[0].space();
        if points.iter().any(|p| p.space() != space) {
            return Err(Error::SpaceMismatch("mixed sphere and plane vertices".into()));
        }
        let graph = AbstractGraph::from_edge_classes(points.len(), edges)?;
        let mut curves = Vec::with_capacity(edges.len());
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(Error::InvalidNetwork(format!(
                    "edge {e} has coincident endpoint classes"
                )));
            }
            if points[a].approx_eq(&points[b], 1e-12) {
                return Err(Error::InvalidNetwork(format!(
                    "edge {e} embeds with coincident endpoints"
                )));
            }
            curves.push(EdgeCurve::from_endpoints(&points[a], &points[b])?);
        }
        let mut seen = vec![false; points.len()];
        for &t in &terminals {
            if t >= points.len() {
                return Err(Error::InvalidNetwork(format!("terminal class {t} out of range")));
            }
            if seen[t] {
                return Err(Error::InvalidNetwork(format!("terminal class {t} listed twice")));
            }
            seen[t] = true;
        }
        Ok(EmbeddedNetwork {
            graph,
            curves,
            space,
            class_points: points,
            terminals,
        })
    }

    /// Star network: one central vertex joined to each leaf; the leaves are
    /// the terminals.
    pub fn star(center: Point, leaves: Vec<Point>) -> Result<Self> {
        let n = leaves.len();
        let mut points = vec![center];
        points.extend(leaves);
        let edges: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
        EmbeddedNetwork::from_vertices(points, &edges, (1..=n).collect())
    }

    /// The two-edge network of a degenerate solve: the junction coincides
    /// with a terminal, which keeps its terminal designation.
    pub fn two_edge(vertex: Point, others: [Point; 2]) -> Result<Self> {
        EmbeddedNetwork::from_vertices(
            vec![vertex, others[0], others[1]],
            &[(0, 1), (0, 2)],
            vec![0, 1, 2],
        )
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn graph(&self) -> &AbstractGraph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.curves.len()
    }

    pub fn curve(&self, edge: usize) -> &EdgeCurve {
        &self.curves[edge]
    }

    pub fn curves(&self) -> &[EdgeCurve] {
        &self.curves
    }

    pub fn class_count(&self) -> usize {
        self.class_points.len()
    }

    pub fn class_point(&self, class: usize) -> Point {
        self.class_points[class]
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn terminal_points(&self) -> Vec<Point> {
        self.terminals.iter().map(|&t| self.class_points[t]).collect()
    }

    pub fn junction_classes(&self) -> Vec<usize> {
        (0..self.class_count())
            .filter(|c| !self.terminals.contains(c))
            .collect()
    }
}

/// Total length of the network: the sum of per-edge geodesic or Euclidean
/// lengths.
pub fn network_length(net: &EmbeddedNetwork) -> f64 {
    net.curves().iter().map(|c| c.length()).sum()
}

/// Per-condition report of the minimal-network conditions (a)-(e).
#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    /// (a) every edge is a nondegenerate segment/geodesic.
    pub embedded_nondegenerate: bool,
    /// (b) pairwise edge interiors stay separated.
    pub interiors_disjoint: bool,
    /// (c) the two endpoints of each elementary edge are distinct.
    pub endpoints_distinct: bool,
    /// (d) every interior junction has order exactly 3.
    pub junctions_order_three: bool,
    /// (e) unit inward tangents sum to ~0 at every order-3 junction.
    pub tangents_balance: bool,
    pub max_tangent_residual: f64,
    pub min_interior_separation: f64,
    pub tangent_tol: f64,
    pub separation_threshold: f64,
}

impl MinimalityReport {
    pub fn all_pass(&self) -> bool {
        self.embedded_nondegenerate
            && self.interiors_disjoint
            && self.endpoints_distinct
            && self.junctions_order_three
            && self.tangents_balance
    }
}

/// Unit inward tangent of an edge at one of its endpoint classes, as an
/// ambient 3-vector (sphere) or 2-vector padded with zero (plane).
fn inward_tangent(net: &EmbeddedNetwork, edge: usize, at_class: usize) -> Result<[f64; 3]> {
    let (from, to) = net.graph().edge_classes(edge);
    let (base, other) = if at_class == from {
        (net.class_point(from), net.class_point(to))
    } else if at_class == to {
        (net.class_point(to), net.class_point(from))
    } else {
        return Err(Error::InvalidNetwork(format!(
            "edge {edge} is not incident to class {at_class}"
        )));
    };
    match (base, other) {
        (Point::Sphere(p), Point::Sphere(q)) => {
            let t = unit_tangent_toward(&p, &q)?;
            Ok([t.vec().x, t.vec().y, t.vec().z])
        }
        (Point::Plane(p), Point::Plane(q)) => {
            let d = (q - p).normalized().ok_or(Error::DirectionUndefined)?;
            Ok([d.x, d.y, 0.0])
        }
        _ => Err(Error::SpaceMismatch("mixed-space edge".into())),
    }
}

/// Checks the minimal-network conditions (a)-(e) of the embedded network
/// with the default tolerances.
pub fn validate_minimal_network(net: &EmbeddedNetwork) -> MinimalityReport {
    validate_minimal_network_with(net, TANGENT_BALANCE_TOL, DISJOINTNESS_THRESHOLD)
}

pub fn validate_minimal_network_with(
    net: &EmbeddedNetwork,
    tangent_tol: f64,
    separation_threshold: f64,
) -> MinimalityReport {
    // (a) nondegenerate edges (embedded as segments/geodesics by construction).
    let embedded_nondegenerate = net.curves().iter().all(|c| c.length() > 1e-12);

    // (c) endpoint classes of each edge are distinct.
    let endpoints_distinct = (0..net.edge_count()).all(|e| {
        let (a, b) = net.graph().edge_classes(e);
        a != b
    });

    // (d) interior (non-terminal) junctions have order exactly 3.
    let junctions_order_three = net
        .junction_classes()
        .iter()
        .all(|&c| net.graph().degree(c) == 3);

    // (e) inward tangents balance at every order-3 junction.
    let mut max_tangent_residual: f64 = 0.0;
    let mut tangents_balance = true;
    for c in 0..net.class_count() {
        if net.graph().degree(c) != 3 {
            continue;
        }
        let mut sum = [0.0f64; 3];
        let mut ok = true;
        for ep in net.graph().class_members(c) {
            match inward_tangent(net, ep.edge, c) {
                Ok(t) => {
                    sum[0] += t[0];
                    sum[1] += t[1];
                    sum[2] += t[2];
                }
                Err(_) => ok = false,
            }
        }
        let residual = (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt();
        max_tangent_residual = max_tangent_residual.max(residual);
        if !ok || residual >= tangent_tol {
            tangents_balance = false;
        }
    }

    // (b) sampled pairwise closest approach of edge interiors.
    let min_interior_separation = min_pairwise_interior_separation(net);
    let interiors_disjoint = min_interior_separation > separation_threshold;

    MinimalityReport {
        embedded_nondegenerate,
        interiors_disjoint,
        endpoints_distinct,
        junctions_order_three,
        tangents_balance,
        max_tangent_residual,
        min_interior_separation,
        tangent_tol,
        separation_threshold,
    }
}

fn pair_distance(net: &EmbeddedNetwork, e1: usize, t1: f64, e2: usize, t2: f64) -> f64 {
    let a = net.curve(e1).point_at(t1.clamp(0.0, 1.0)).expect("in range");
    let b = net.curve(e2).point_at(t2.clamp(0.0, 1.0)).expect("in range");
    a.distance(&b).expect("same space")
}

/// Minimum closest approach over all edge pairs, sampling interiors at the
/// documented resolution and locally refining the best sampled pair so that
/// transversal crossings are also driven to ~0.
fn min_pairwise_interior_separation(net: &EmbeddedNetwork) -> f64 {
    let n_samples = (1.0 / DISJOINTNESS_RESOLUTION) as usize - 1; // interior grid
    // Samples near a shared vertex are excluded: edges meeting at a vertex
    // legitimately approach each other there.
    let exclusion = 5.0 * DISJOINTNESS_RESOLUTION;

    let params: Vec<f64> = (1..=n_samples)
        .map(|i| i as f64 * DISJOINTNESS_RESOLUTION)
        .collect();
    let sampled: Vec<Vec<Point>> = (0..net.edge_count())
        .map(|e| {
            params
                .iter()
                .map(|&t| net.curve(e).point_at(t).expect("in range"))
                .collect()
        })
        .collect();

    let mut min_sep = f64::INFINITY;
    for e1 in 0..net.edge_count() {
        for e2 in (e1 + 1)..net.edge_count() {
            let (a1, b1) = net.graph().edge_classes(e1);
            let (a2, b2) = net.graph().edge_classes(e2);
            // Parameter windows excluded near shared vertices.
            let excl1_lo = a1 == a2 || a1 == b2;
            let excl1_hi = b1 == a2 || b1 == b2;
            let excl2_lo = a2 == a1 || a2 == b1;
            let excl2_hi = b2 == a1 || b2 == b1;

            let lo1 = if excl1_lo { exclusion } else { 0.0 };
            let hi1 = if excl1_hi { 1.0 - exclusion } else { 1.0 };
            let lo2 = if excl2_lo { exclusion } else { 0.0 };
            let hi2 = if excl2_hi { 1.0 - exclusion } else { 1.0 };

            let mut best = f64::INFINITY;
            let mut best_pair = (0.5, 0.5);
            for (i, t1) in params.iter().enumerate() {
                if *t1 < lo1 || *t1 > hi1 {
                    continue;
                }
                for (j, t2) in params.iter().enumerate() {
                    if *t2 < lo2 || *t2 > hi2 {
                        continue;
                    }
                    let d = sampled[e1][i].distance(&sampled[e2][j]).expect("same space");
                    if d < best {
                        best = d;
                        best_pair = (*t1, *t2);
                    }
                }
            }
            if !best.is_finite() {
                continue;
            }
            // Local refinement by shrinking compass search in (t1, t2).
            let (mut t1, mut t2) = best_pair;
            let mut step = DISJOINTNESS_RESOLUTION;
            while step > 1e-12 {
                let mut improved = false;
                for (dt1, dt2) in [
                    (step, 0.0),
                    (-step, 0.0),
                    (0.0, step),
                    (0.0, -step),
                    (step, step),
                    (step, -step),
                    (-step, step),
                    (-step, -step),
                ] {
                    let c1 = (t1 + dt1).clamp(lo1, hi1);
                    let c2 = (t2 + dt2).clamp(lo2, hi2);
                    let d = pair_distance(net, e1, c1, e2, c2);
                    if d < best {
                        best = d;
                        t1 = c1;
                        t2 = c2;
                        improved = true;
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
            min_sep = min_sep.min(best);
        }
    }
    min_sep
}

/// A 1-rectifiable current with coefficients in the lattice: per-edge
/// orientation (`true` keeps the stored start-to-end direction) and a
/// constant lattice multiplicity on each edge interior. Values at junction
/// points never enter mass or boundary computations.
#[derive(Clone, Debug)]
pub struct RectifiableCurrent {
    network: EmbeddedNetwork,
    orientations: Vec<bool>,
    multiplicities: Vec<GroupElement>,
}

impl RectifiableCurrent {
    pub fn new(
        network: EmbeddedNetwork,
        orientations: Vec<bool>,
        multiplicities: Vec<GroupElement>,
    ) -> Result<Self> {
        if orientations.len() != network.edge_count() || multiplicities.len() != network.edge_count()
        {
            return Err(Error::InvalidNetwork(
                "orientation/multiplicity count does not match edge count".into(),
            ));
        }
        Ok(RectifiableCurrent {
            network,
            orientations,
            multiplicities,
        })
    }

    pub fn network(&self) -> &EmbeddedNetwork {
        &self.network
    }

    pub fn orientations(&self) -> &[bool] {
        &self.orientations
    }

    pub fn multiplicities(&self) -> &[GroupElement] {
        &self.multiplicities
    }

    /// Endpoint classes of an edge in oriented order `(tail, head)`.
    pub fn oriented_classes(&self, edge: usize) -> (usize, usize) {
        let (a, b) = self.network.graph().edge_classes(edge);
        if self.orientations[edge] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Oriented planar endpoints of an edge.
    pub fn oriented_segment(&self, edge: usize) -> Result<(Vec2, Vec2)> {
        let (tail, head) = self.oriented_classes(edge);
        Ok((
            self.network.class_point(tail).as_plane()?,
            self.network.class_point(head).as_plane()?,
        ))
    }

    /// Same network and orientations with every multiplicity mapped.
    pub fn with_multiplicities(&self, multiplicities: Vec<GroupElement>) -> Result<Self> {
        RectifiableCurrent::new(self.network.clone(), self.orientations.clone(), multiplicities)
    }
}

/// Mass of the current: `sum_e ||theta_e|| * length_e` with the hexagonal
/// norm on multiplicities.
pub fn current_mass(t: &RectifiableCurrent) -> f64 {
    t.network()
        .curves()
        .iter()
        .zip(t.multiplicities())
        .map(|(c, &m)| group_norm(m) * c.length())
        .sum()
}

/// A 0-chain of lattice-valued atoms; points with zero coefficient are
/// dropped. Coefficient arithmetic is exact; point identity merges within
/// `POINT_MERGE_TOL`.
#[derive(Clone, Debug, Default)]
pub struct BoundaryChain {
    atoms: Vec<(Point, GroupElement)>,
}

impl BoundaryChain {
    pub fn new() -> Self {
        BoundaryChain { atoms: Vec::new() }
    }

    pub fn add(&mut self, point: Point, coeff: GroupElement) {
        if coeff.is_zero() {
            return;
        }
        for (p, c) in self.atoms.iter_mut() {
            if p.approx_eq(&point, POINT_MERGE_TOL) {
                *c = *c + coeff;
                return;
            }
        }
        self.atoms.push((point, coeff));
    }

    fn prune(&mut self) {
        self.atoms.retain(|(_, c)| !c.is_zero());
    }

    pub fn atoms(&self) -> &[(Point, GroupElement)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn coefficient_at(&self, point: &Point) -> GroupElement {
        for (p, c) in &self.atoms {
            if p.approx_eq(point, POINT_MERGE_TOL) {
                return *c;
            }
        }
        GroupElement::ZERO
    }

    /// Exact lattice equality of the two chains (points matched within
    /// `POINT_MERGE_TOL`).
    pub fn same_as(&self, other: &BoundaryChain) -> bool {
        self.atoms
            .iter()
            .all(|(p, c)| other.coefficient_at(p) == *c)
            && other
                .atoms
                .iter()
                .all(|(p, c)| self.coefficient_at(p) == *c)
    }
}

/// Boundary of a current: `+theta` at each oriented head, `-theta` at each
/// tail, summed exactly in the lattice.
pub fn current_boundary(t: &RectifiableCurrent) -> BoundaryChain {
    let mut chain = BoundaryChain::new();
    for e in 0..t.network().edge_count() {
        let theta = t.multiplicities()[e];
        if theta.is_zero() {
            continue;
        }
        let (tail, head) = t.oriented_classes(e);
        chain.add(t.network().class_point(head), theta);
        chain.add(t.network().class_point(tail), -theta);
    }
    chain.prune();
    chain
}

/// An R^2-valued 1-form on the plane, evaluated pointwise on a direction.
pub trait PlanarForm {
    fn value(&self, x: Vec2, tangent: Vec2) -> Vec2;
}

impl PlanarForm for MatrixForm {
    fn value(&self, _x: Vec2, tangent: Vec2) -> Vec2 {
        self.apply(tangent)
    }
}

/// Evaluates a planar current against an R^2-valued form:
/// `sum_e int_0^L <omega(x(s), tau), theta> ds` by adaptive composite
/// Gauss-Legendre quadrature (interior nodes only).
pub fn evaluate_current<F: PlanarForm + ?Sized>(t: &RectifiableCurrent, form: &F) -> Result<f64> {
    if t.network().space() != SpaceTag::Plane {
        return Err(Error::SpaceMismatch(
            "R^2-valued current evaluation is planar-only".into(),
        ));
    }
    let mut total = 0.0;
    for e in 0..t.network().edge_count() {
        let theta = t.multiplicities()[e];
        if theta.is_zero() {
            continue;
        }
        let (a, b) = t.oriented_segment(e)?;
        let len = a.distance(b);
        let tau = (b - a).normalized().ok_or(Error::DirectionUndefined)?;
        let theta_vec = theta.vector();
        let scale = (len * group_norm(theta)).max(1e-12);
        total += quad::integrate_adaptive(
            |s| form.value(a + tau * s, tau).dot(theta_vec),
            0.0,
            len,
            1e-10,
            scale,
        )?;
    }
    Ok(total)
}

/// The rigid motion `x -> rotate(x - translation, rotation)` applied when
/// aligning a planar network with the lattice generators.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RigidMotion2 {
    pub rotation: f64,
    pub translation: Vec2,
}

impl RigidMotion2 {
    pub fn identity() -> Self {
        RigidMotion2 {
            rotation: 0.0,
            translation: Vec2::ZERO,
        }
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        (x - self.translation).rotated(self.rotation)
    }
}

/// The aligned current produced by [`build_steiner_current`] together with
/// the rigid motion that aligned it.
#[derive(Clone, Debug)]
pub struct AlignedCurrent {
    pub current: RectifiableCurrent,
    pub motion: RigidMotion2,
}

/// Builds the canonical lattice current of a planar 3-terminal Y-network:
/// translates the junction to the origin, rotates the edges onto the
/// generators `g1, g2, g3` (choosing the smallest rotation angle), and
/// assigns each edge its matching generator as multiplicity, oriented from
/// the junction outward.
pub fn build_steiner_current(net: &EmbeddedNetwork) -> Result<AlignedCurrent> {
    if net.space() != SpaceTag::Plane {
        return Err(Error::SpaceMismatch("lattice alignment is planar-only".into()));
    }
    if net.edge_count() != 3 {
        return Err(Error::NotMinimalNetwork(format!(
            "expected a 3-edge Y-network, found {} edges",
            net.edge_count()
        )));
    }
    let report = validate_minimal_network(net);
    if !report.all_pass() {
        return Err(Error::NotMinimalNetwork(format!(
            "minimal-network conditions failed: {report:?}"
        )));
    }
    let junctions: Vec<usize> = (0..net.class_count())
        .filter(|&c| net.graph().degree(c) == 3)
        .collect();
    if junctions.len() != 1 {
        return Err(Error::NotMinimalNetwork(
            "expected exactly one order-3 junction".into(),
        ));
    }
    let junction = junctions[0];
    let s = net.class_point(junction).as_plane()?;

    // Outward unit direction of each edge at the junction.
    let mut dirs = Vec::with_capacity(3);
    let mut terminal_class = Vec::with_capacity(3);
    for e in 0..3 {
        let (a, b) = net.graph().edge_classes(e);
        let t_class = if a == junction { b } else { a };
        let t = net.class_point(t_class).as_plane()?;
        dirs.push((t - s).normalized().ok_or(Error::DirectionUndefined)?);
        terminal_class.push(t_class);
    }

    let gens = crate::hex::generators();
    let gen_vecs = [gens.g1, gens.g2, gens.g3];
    let gen_elems = [
        GroupElement::new(1, 0),
        GroupElement::new(0, 1),
        GroupElement::new(-1, -1),
    ];

    // Candidate rotations map dirs[0] onto one of the generators; take the
    // smallest |angle| that yields a perfect matching of all three edges.
    let mut candidates: Vec<f64> = gen_vecs
        .iter()
        .map(|g| {
            let mut phi = g.angle() - dirs[0].angle();
            while phi > std::f64::consts::PI {
                phi -= 2.0 * std::f64::consts::PI;
            }
            while phi <= -std::f64::consts::PI {
                phi += 2.0 * std::f64::consts::PI;
            }
            phi
        })
        .collect();
    candidates.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());

    for phi in candidates {
        let mut matched = [usize::MAX; 3];
        let mut used = [false; 3];
        let mut ok = true;
        for (e, d) in dirs.iter().enumerate() {
            let rotated = d.rotated(phi);
            let mut found = usize::MAX;
            for (gi, g) in gen_vecs.iter().enumerate() {
                if !used[gi] && rotated.distance(*g) < 1e-9 {
                    found = gi;
                    break;
                }
            }
            if found == usize::MAX {
                ok = false;
                break;
            }
            used[found] = true;
            matched[e] = found;
        }
        if !ok {
            continue;
        }
        let motion = RigidMotion2 {
            rotation: phi,
            translation: s,
        };
        // Rebuild the network in aligned coordinates with the same classes.
        let points: Vec<Point> = (0..net.class_count())
            .map(|c| Point::Plane(motion.apply(net.class_point(c).as_plane().expect("planar"))))
            .collect();
        let edges: Vec<(usize, usize)> = (0..3).map(|e| net.graph().edge_classes(e)).collect();
        let aligned = EmbeddedNetwork::from_vertices(points, &edges, net.terminals().to_vec())?;
        let orientations: Vec<bool> = (0..3)
            .map(|e| net.graph().edge_classes(e).0 == junction)
            .collect();
        let multiplicities: Vec<GroupElement> = (0..3).map(|e| gen_elems[matched[e]]).collect();
        let current = RectifiableCurrent::new(aligned, orientations, multiplicities)?;
        return Ok(AlignedCurrent { current, motion });
    }

    Err(Error::NotMinimalNetwork(
        "edges are not mutually at 120 degrees".into(),
    ))
}
