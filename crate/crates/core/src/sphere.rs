//! Exact-formula geometry on the standard unit sphere: points, tangent
//! vectors, exponential/logarithm maps, geodesic arcs and balls, spherical
//! trigonometry, and the admissibility bound used by the solver.
//!
//! Points are stored as ambient unit 3-vectors; every formula reduces to
//! inner products, which avoids pole singularities entirely. Inner products
//! are clamped into `[-1, 1]` before `acos` to guard against `1 + 1e-16`
//! rounding.

use crate::error::{Error, Result};
use crate::linalg::{Rot3, Vec3};
use rand::Rng;
use std::f64::consts::PI;

/// Below this inner product two points are treated as antipodal and the log
/// map is refused; the direction is numerically meaningless past it.
pub const ANTIPODAL_DOT_THRESHOLD: f64 = -1.0 + 1e-9;

/// Tolerance for normalizing a tangent vector; shorter vectors have no
/// usable direction.
pub const ZERO_TANGENT_TOL: f64 = 1e-12;

const SPHERE_NORM_TOL: f64 = 1e-9;
const TANGENT_DOT_TOL: f64 = 1e-12;

/// A point of the unit sphere, stored as a unit vector in ambient 3-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    /// Accepts a vector whose norm deviates from 1 by at most `1e-9` and
    /// normalizes it exactly.
    pub fn new(coords: Vec3) -> Result<Self> {
        let norm = coords.norm();
        if (norm - 1.0).abs() > SPHERE_NORM_TOL {
            return Err(Error::NotOnSphere { norm });
        }
        Ok(SpherePoint(coords * (1.0 / norm)))
    }

    /// Radially projects an arbitrary nonzero vector onto the sphere.
    pub fn project(v: Vec3) -> Result<Self> {
        match v.normalized() {
            Some(u) => Ok(SpherePoint(u)),
            None => Err(Error::DirectionUndefined),
        }
    }

    pub fn coords(&self) -> Vec3 {
        self.0
    }

    pub fn north_pole() -> Self {
        SpherePoint(Vec3::new(0.0, 0.0, 1.0))
    }

    /// Point at the given polar angle from the north pole and azimuth from
    /// the +x meridian (both radians).
    pub fn from_polar(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        SpherePoint(Vec3::new(sp * ca, sp * sa, cp))
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.0.dot(other.0)
    }

    pub fn antipodal_to(&self, other: &SpherePoint) -> bool {
        self.dot(other) <= ANTIPODAL_DOT_THRESHOLD
    }

    /// Euclidean (chordal) closeness test.
    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        self.0.distance(other.0) <= tol
    }

    pub fn rotated(&self, r: &Rot3) -> SpherePoint {
        // A rotation keeps the norm at 1 up to rounding; renormalize anyway.
        SpherePoint(r.apply(self.0).normalized().expect("rotation preserves norm"))
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(-self.0)
    }
}

/// A tangent vector of the sphere: a base point plus an ambient vector
/// orthogonal to it (within 1e-12 at construction; stored exactly
/// orthogonalized).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVec {
    base: SpherePoint,
    vec: Vec3,
}

impl TangentVec {
    pub fn new(base: SpherePoint, vec: Vec3) -> Result<Self> {
        let dot = base.coords().dot(vec);
        if dot.abs() > TANGENT_DOT_TOL * vec.norm().max(1.0) {
            return Err(Error::NotTangent { dot });
        }
        Ok(TangentVec {
            base,
            vec: vec - base.coords() * dot,
        })
    }

    /// Removes the normal component unconditionally.
    pub fn project(base: SpherePoint, vec: Vec3) -> Self {
        let dot = base.coords().dot(vec);
        TangentVec {
            base,
            vec: vec - base.coords() * dot,
        }
    }

    pub fn zero(base: SpherePoint) -> Self {
        TangentVec { base, vec: Vec3::ZERO }
    }

    pub fn base(&self) -> SpherePoint {
        self.base
    }

    pub fn vec(&self) -> Vec3 {
        self.vec
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        TangentVec {
            base: self.base,
            vec: self.vec * s,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < ZERO_TANGENT_TOL {
            return Err(Error::DirectionUndefined);
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Sum of two tangent vectors at the same base point.
    pub fn try_add(&self, other: &TangentVec) -> Result<Self> {
        if !self.base.approx_eq(&other.base, 1e-12) {
            return Err(Error::SpaceMismatch(
                "tangent vectors have different base points".into(),
            ));
        }
        Ok(TangentVec {
            base: self.base,
            vec: self.vec + other.vec,
        })
    }

    pub fn dot(&self, other: &TangentVec) -> f64 {
        self.vec.dot(other.vec)
    }

    pub fn rotated(&self, r: &Rot3) -> TangentVec {
        TangentVec::project(self.base.rotated(r), r.apply(self.vec))
    }
}

/// Geodesic distance in radians: `arccos(clamp(<p, q>, -1, 1))`.
/// Defined for every pair; antipodal points are at distance pi.
pub fn geodesic_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    p.dot(q).clamp(-1.0, 1.0).acos()
}

/// Exponential map: `cos|v| p + sin|v| v/|v|`. Errors for `|v| >= pi`.
pub fn exp_map(v: &TangentVec) -> Result<SpherePoint> {
    let n = v.norm();
    if n >= PI {
        return Err(Error::OutsideInjectivityRadius { norm: n });
    }
    if n < 1e-300 {
        return Ok(v.base());
    }
    let (s, c) = n.sin_cos();
    let p = v.base().coords();
    let u = v.vec() * (1.0 / n);
    SpherePoint::project(p * c + u * s)
}

/// Logarithm map: the tangent vector at `p` of length `dist(p, q)` pointing
/// toward `q`. Errors for antipodal pairs; returns the zero vector for p = q.
pub fn log_map(p: &SpherePoint, q: &SpherePoint) -> Result<TangentVec> {
    let c = p.dot(q);
    if c <= ANTIPODAL_DOT_THRESHOLD {
        return Err(Error::CutLocus);
    }
    let theta = c.clamp(-1.0, 1.0).acos();
    let w = q.coords() - p.coords() * c;
    let wn = w.norm();
    if wn < ZERO_TANGENT_TOL {
        return Ok(TangentVec::zero(*p));
    }
    Ok(TangentVec::project(*p, w * (theta / wn)))
}

/// Unit tangent vector at `p` pointing toward `q`; equals the normalized
/// projection `(q - <p,q> p) / |q - <p,q> p|`.
pub fn unit_tangent_toward(p: &SpherePoint, q: &SpherePoint) -> Result<TangentVec> {
    let c = p.dot(q);
    if c <= ANTIPODAL_DOT_THRESHOLD {
        return Err(Error::CutLocus);
    }
    let w = q.coords() - p.coords() * c;
    let wn = w.norm();
    if wn < ZERO_TANGENT_TOL {
        return Err(Error::DirectionUndefined);
    }
    Ok(TangentVec::project(*p, w * (1.0 / wn)))
}

/// Angle at `vertex` between the geodesics toward `a` and toward `b`,
/// in `[0, pi]`.
pub fn spherical_angle(vertex: &SpherePoint, a: &SpherePoint, b: &SpherePoint) -> Result<f64> {
    let ta = unit_tangent_toward(vertex, a)?;
    let tb = unit_tangent_toward(vertex, b)?;
    Ok(ta.dot(&tb).clamp(-1.0, 1.0).acos())
}

/// The largest geodesic-ball radius satisfying the cap-area constraint
/// `2 pi (1 - cos R) < pi / 3`, i.e. `arccos(5/6)`.
pub fn max_admissible_radius() -> f64 {
    (5.0 / 6.0f64).acos()
}

/// Area of the spherical cap of the given radius on the unit sphere.
pub fn cap_area(radius: f64) -> f64 {
    2.0 * PI * (1.0 - radius.cos())
}

/// A minimizing geodesic arc between two non-antipodal points, parameterized
/// by `t in [0, 1]` with constant speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicArc {
    start: SpherePoint,
    end: SpherePoint,
    length: f64,
}

impl GeodesicArc {
    pub fn new(start: SpherePoint, end: SpherePoint) -> Result<Self> {
        if start.antipodal_to(&end) {
            return Err(Error::CutLocus);
        }
        Ok(GeodesicArc {
            start,
            end,
            length: geodesic_distance(&start, &end),
        })
    }

    pub fn start(&self) -> SpherePoint {
        self.start
    }

    pub fn end(&self) -> SpherePoint {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn point_at(&self, t: f64) -> Result<SpherePoint> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParamOutOfRange(format!("arc parameter {t} not in [0, 1]")));
        }
        if self.length < ZERO_TANGENT_TOL {
            return Ok(self.start);
        }
        let v = log_map(&self.start, &self.end)?;
        exp_map(&v.scaled(t))
    }

    /// Unit tangent of the arc at parameter `t`, pointing from start to end.
    ///
    /// For the unit-speed geodesic `g(s) = cos(s) p + sin(s) u` this is
    /// `g'(s) = -sin(s) p + cos(s) u`.
    pub fn unit_tangent_at(&self, t: f64) -> Result<TangentVec> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParamOutOfRange(format!("arc parameter {t} not in [0, 1]")));
        }
        let u = unit_tangent_toward(&self.start, &self.end)?;
        let s = t * self.length;
        let (sn, cs) = s.sin_cos();
        let point = SpherePoint::project(self.start.coords() * cs + u.vec() * sn)?;
        Ok(TangentVec::project(point, self.start.coords() * (-sn) + u.vec() * cs))
    }

    /// Direction of the arc at its start point.
    pub fn direction_at_start(&self) -> Result<TangentVec> {
        unit_tangent_toward(&self.start, &self.end)
    }
}

/// Point on an arc at parameter `t in [0, 1]`.
pub fn arc_point(arc: &GeodesicArc, t: f64) -> Result<SpherePoint> {
    arc.point_at(t)
}

/// An open geodesic ball with radius in `(0, pi/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicBall {
    center: SpherePoint,
    radius: f64,
}

impl GeodesicBall {
    pub fn new(center: SpherePoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < PI / 2.0) {
            return Err(Error::InvalidRadius { radius });
        }
        Ok(GeodesicBall { center, radius })
    }

    pub fn center(&self) -> SpherePoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Cap-area admissibility: `2 pi (1 - cos R) < pi / 3`, equivalently
    /// `R < arccos(5/6)`.
    pub fn is_admissible(&self) -> bool {
        cap_area(self.radius) < PI / 3.0
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::InadmissibleRadius {
                radius: self.radius,
                bound: max_admissible_radius(),
            })
        }
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        geodesic_distance(&self.center, p) <= self.radius
    }

    pub fn contains_with_margin(&self, p: &SpherePoint, margin: f64) -> bool {
        geodesic_distance(&self.center, p) <= self.radius - margin
    }

    /// Area-uniform sample of the closed ball.
    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> SpherePoint {
        let c: f64 = rng.gen_range(self.radius.cos()..=1.0);
        let polar = c.clamp(-1.0, 1.0).acos();
        let azimuth = rng.gen_range(0.0..2.0 * PI);
        let (e1, e2) = tangent_frame(&self.center);
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        SpherePoint::project(self.center.coords() * cp + (e1 * ca + e2 * sa) * sp)
            .expect("cap sample is a unit vector")
    }
}

/// An orthonormal basis of the tangent plane at `p`.
pub fn tangent_frame(p: &SpherePoint) -> (Vec3, Vec3) {
    let n = p.coords();
    let helper = if n.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let e1 = n.cross(helper).normalized().expect("helper not parallel");
    let e2 = n.cross(e1);
    (e1, e2)
}

/// Tangent vector at `p` with frame coordinates `(u1, u2)` in the
/// `tangent_frame(p)` basis. This is the chart used by grid oracles.
pub fn tangent_from_frame(p: &SpherePoint, u1: f64, u2: f64) -> TangentVec {
    let (e1, e2) = tangent_frame(p);
    TangentVec::project(*p, e1 * u1 + e2 * u2)
}

/// Frame coordinates of a tangent vector in the `tangent_frame` basis.
pub fn tangent_to_frame(v: &TangentVec) -> (f64, f64) {
    let (e1, e2) = tangent_frame(&v.base());
    (v.vec().dot(e1), v.vec().dot(e2))
}

/// Uniform random point of the whole sphere (Archimedes cylindrical map).
pub fn random_sphere_point<R: Rng>(rng: &mut R) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = phi.sin_cos();
    SpherePoint::project(Vec3::new(r * c, r * s, z)).expect("unit by construction")
}

/// Uniform random unit tangent direction at `p`.
pub fn random_unit_tangent<R: Rng>(p: &SpherePoint, rng: &mut R) -> TangentVec {
    let phi = rng.gen_range(0.0..2.0 * PI);
    let (e1, e2) = tangent_frame(p);
    let (s, c) = phi.sin_cos();
    TangentVec::project(*p, e1 * c + e2 * s)
}

/// Total geodesic length of a polyline through the given points.
pub fn polyline_length(points: &[SpherePoint]) -> f64 {
    points
        .windows(2)
        .map(|w| geodesic_distance(&w[0], &w[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(Vec3::new(x, y, z)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let np = SpherePoint::north_pole();
        assert_eq!(geodesic_distance(&np, &np), 0.0);
        assert!((geodesic_distance(&np, &p(1.0, 0.0, 0.0)) - PI / 2.0).abs() < 1e-15);
        assert!((geodesic_distance(&p(1.0, 0.0, 0.0), &p(-1.0, 0.0, 0.0)) - PI).abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_off_sphere() {
        assert!(SpherePoint::new(Vec3::new(1.1, 0.0, 0.0)).is_err());
        // Within the 1e-9 normalization window.
        assert!(SpherePoint::new(Vec3::new(1.0 + 1e-10, 0.0, 0.0)).is_ok());
    }

    #[test]
    fn exp_map_examples() {
        let np = SpherePoint::north_pole();
        let zero = TangentVec::zero(np);
        assert!(exp_map(&zero).unwrap().approx_eq(&np, 1e-15));

        let v = TangentVec::new(np, Vec3::new(PI / 2.0, 0.0, 0.0)).unwrap();
        let q = exp_map(&v).unwrap();
        assert!(q.approx_eq(&p(1.0, 0.0, 0.0), 1e-12));

        let too_long = TangentVec::new(np, Vec3::new(PI, 0.0, 0.0)).unwrap();
        assert!(matches!(
            exp_map(&too_long),
            Err(Error::OutsideInjectivityRadius { .. })
        ));
    }

    #[test]
    fn log_map_examples() {
        let np = SpherePoint::north_pole();
        let v = log_map(&np, &np).unwrap();
        assert_eq!(v.norm(), 0.0);

        let v = log_map(&np, &p(1.0, 0.0, 0.0)).unwrap();
        assert!(v.vec().distance(Vec3::new(PI / 2.0, 0.0, 0.0)) < 1e-12);

        assert!(matches!(
            log_map(&p(1.0, 0.0, 0.0), &p(-1.0, 0.0, 0.0)),
            Err(Error::CutLocus)
        ));
    }

    #[test]
    fn exp_log_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = random_sphere_point(&mut rng);
            let b = random_sphere_point(&mut rng);
            if a.antipodal_to(&b) {
                continue;
            }
            let v = log_map(&a, &b).unwrap();
            assert!((v.norm() - geodesic_distance(&a, &b)).abs() < 1e-12);
            let back = exp_map(&v).unwrap();
            assert!(back.approx_eq(&b, 1e-12));
        }
    }

    #[test]
    fn unit_tangent_matches_projection_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = random_sphere_point(&mut rng);
            let b = random_sphere_point(&mut rng);
            if a.antipodal_to(&b) || a.approx_eq(&b, 1e-9) {
                continue;
            }
            let t = unit_tangent_toward(&a, &b).unwrap();
            assert!((t.norm() - 1.0).abs() < 1e-12);
            let c = a.dot(&b);
            let w = (b.coords() - a.coords() * c).normalized().unwrap();
            assert!(t.vec().distance(w) < 1e-12);
        }
    }

    #[test]
    fn unit_tangent_rejects_coincident() {
        let np = SpherePoint::north_pole();
        assert!(matches!(
            unit_tangent_toward(&np, &np),
            Err(Error::DirectionUndefined)
        ));
    }

    #[test]
    fn arc_point_examples() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        let arc = GeodesicArc::new(a, b).unwrap();
        assert!(arc.point_at(0.0).unwrap().approx_eq(&a, 1e-15));
        assert!(arc.point_at(1.0).unwrap().approx_eq(&b, 1e-12));
        let mid = arc.point_at(0.5).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!(mid.approx_eq(&p(s, s, 0.0), 1e-12));
        assert!(arc.point_at(1.5).is_err());
    }

    #[test]
    fn arc_constant_speed() {
        let arc = GeodesicArc::new(p(1.0, 0.0, 0.0), SpherePoint::from_polar(0.4, 1.1)).unwrap();
        let h = 1e-3;
        for i in 0..40 {
            let t = i as f64 / 41.0;
            let d = geodesic_distance(
                &arc.point_at(t).unwrap(),
                &arc.point_at(t + h).unwrap(),
            );
            assert!((d - h * arc.length()).abs() < 1e-10);
        }
    }

    #[test]
    fn arc_tangent_is_unit_and_consistent() {
        let arc = GeodesicArc::new(SpherePoint::from_polar(0.3, 0.2), SpherePoint::from_polar(0.5, 2.0)).unwrap();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let tv = arc.unit_tangent_at(t).unwrap();
            assert!((tv.norm() - 1.0).abs() < 1e-12);
            assert!(tv.base().approx_eq(&arc.point_at(t).unwrap(), 1e-12));
            // Finite-difference direction check.
            if t < 1.0 {
                let h = 1e-6;
                let fd = (arc.point_at(t + h).unwrap().coords() - arc.point_at(t).unwrap().coords())
                    * (1.0 / (h * arc.length()));
                assert!(tv.vec().distance(fd) < 1e-5);
            }
        }
    }

    #[test]
    fn spherical_angle_examples() {
        let np = SpherePoint::north_pole();
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        assert!((spherical_angle(&np, &a, &b).unwrap() - PI / 2.0).abs() < 1e-12);

        // Nearly antipodal pair seen from the pole: rotate (-1,0,0) by 1e-3
        // about z, so the meridians toward the two points open pi - 1e-3.
        let c = SpherePoint::new(Vec3::new(-(1e-3f64).cos(), -(1e-3f64).sin(), 0.0)).unwrap();
        let ta = unit_tangent_toward(&np, &a).unwrap();
        let tc = unit_tangent_toward(&np, &c).unwrap();
        let oracle = ta.dot(&tc).clamp(-1.0, 1.0).acos();
        let got = spherical_angle(&np, &a, &c).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - (PI - 1e-3)).abs() < 1e-9);
    }

    #[test]
    fn equilateral_triangle_angles_exceed_plane() {
        // Equilateral spherical triangle at polar angle 0.3: the three
        // vertex angles agree by symmetry and exceed the planar pi/3.
        let verts: Vec<SpherePoint> = (0..3)
            .map(|k| SpherePoint::from_polar(0.3, 2.0 * PI * k as f64 / 3.0))
            .collect();
        let ang0 = spherical_angle(&verts[0], &verts[1], &verts[2]).unwrap();
        let ang1 = spherical_angle(&verts[1], &verts[2], &verts[0]).unwrap();
        let ang2 = spherical_angle(&verts[2], &verts[0], &verts[1]).unwrap();
        assert!((ang0 - ang1).abs() < 1e-12);
        assert!((ang1 - ang2).abs() < 1e-12);
        assert!(ang0 > PI / 3.0);

        // Law-of-cosines oracle for the same angle.
        let side = geodesic_distance(&verts[0], &verts[1]);
        let cos_angle = (side.cos() - side.cos() * side.cos()) / (side.sin() * side.sin());
        assert!((ang0 - cos_angle.clamp(-1.0, 1.0).acos()).abs() < 1e-10);
    }

    #[test]
    fn law_of_cosines_closure_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut tested = 0;
        while tested < 200 {
            let a = random_sphere_point(&mut rng);
            let b = random_sphere_point(&mut rng);
            let c = random_sphere_point(&mut rng);
            let ab = geodesic_distance(&a, &b);
            let ac = geodesic_distance(&a, &c);
            let bc = geodesic_distance(&b, &c);
            if ab >= PI / 2.0 || ac >= PI / 2.0 || bc >= PI / 2.0 {
                continue;
            }
            if ab < 1e-3 || ac < 1e-3 {
                continue;
            }
            let angle = spherical_angle(&a, &b, &c).unwrap();
            let rebuilt = (ab.cos() * ac.cos() + ab.sin() * ac.sin() * angle.cos())
                .clamp(-1.0, 1.0)
                .acos();
            assert!((rebuilt - bc).abs() < 1e-10);
            tested += 1;
        }
    }

    #[test]
    fn admissible_radius_bound() {
        let r = max_admissible_radius();
        assert!((r - (5.0 / 6.0f64).acos()).abs() < 1e-15);
        assert!((cap_area(r) - PI / 3.0).abs() < 1e-12);
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.5).unwrap();
        assert!(ball.is_admissible());
        let ball = GeodesicBall::new(SpherePoint::north_pole(), 0.6).unwrap();
        assert!(!ball.is_admissible());
        assert!(matches!(
            ball.require_admissible(),
            Err(Error::InadmissibleRadius { .. })
        ));
    }

    #[test]
    fn ball_radius_range() {
        assert!(GeodesicBall::new(SpherePoint::north_pole(), 0.0).is_err());
        assert!(GeodesicBall::new(SpherePoint::north_pole(), PI / 2.0).is_err());
    }

    #[test]
    fn ball_sampling_stays_inside() {
        let ball = GeodesicBall::new(SpherePoint::from_polar(0.9, 2.2), 0.45).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let q = ball.sample_uniform(&mut rng);
            assert!(ball.contains(&q));
        }
    }

    #[test]
    fn so3_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let axis = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let r = match Rot3::from_axis_angle(axis, rng.gen_range(0.0..PI)) {
                Some(r) => r,
                None => continue,
            };
            let a = random_sphere_point(&mut rng);
            let b = random_sphere_point(&mut rng);
            assert!(
                (geodesic_distance(&a.rotated(&r), &b.rotated(&r)) - geodesic_distance(&a, &b))
                    .abs()
                    < 1e-12
            );
            if !a.antipodal_to(&b) {
                let v = log_map(&a, &b).unwrap();
                let lhs = exp_map(&v).unwrap().rotated(&r);
                let rhs = exp_map(&v.rotated(&r)).unwrap();
                assert!(lhs.approx_eq(&rhs, 1e-12));
            }
        }
    }

    #[test]
    fn triangle_inequality_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = random_sphere_point(&mut rng);
            let b = random_sphere_point(&mut rng);
            let c = random_sphere_point(&mut rng);
            assert!(
                geodesic_distance(&a, &c)
                    <= geodesic_distance(&a, &b) + geodesic_distance(&b, &c) + 1e-12
            );
        }
    }
}
