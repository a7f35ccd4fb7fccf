//! The discrete planar lattice spanned by three unit generators at mutual
//! 120 degrees, the hexagonal norm whose unit ball has the six vectors
//! `{±g1, ±g2, ±g3}` as extreme points, and the dual (comass) norm for
//! constant 2x2-matrix-valued 1-forms.
//!
//! Generator orientation is fixed at `g1 = (1, 0)`; callers rotate their
//! configurations onto the lattice, never the other way around.

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The three unit generators: `g1 + g2 + g3 = 0`, pairwise at 120 degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Generators {
    pub g1: Vec2,
    pub g2: Vec2,
    pub g3: Vec2,
}

pub fn generators() -> Generators {
    Generators {
        g1: Vec2::new(1.0, 0.0),
        g2: Vec2::new(-0.5, SQRT3 / 2.0),
        g3: Vec2::new(-0.5, -SQRT3 / 2.0),
    }
}

/// Lattice element `m*g1 + n*g2`, stored as exact integers so that group
/// arithmetic (and boundary cancellation downstream) is never tolerance
/// based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub m: i64,
    pub n: i64,
}

impl GroupElement {
    pub const ZERO: GroupElement = GroupElement { m: 0, n: 0 };

    pub fn new(m: i64, n: i64) -> Self {
        GroupElement { m, n }
    }

    /// The ambient vector `m*g1 + n*g2`.
    pub fn vector(&self) -> Vec2 {
        let g = generators();
        g.g1 * self.m as f64 + g.g2 * self.n as f64
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0 && self.n == 0
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: GroupElement) -> GroupElement {
        GroupElement::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: GroupElement) -> GroupElement {
        GroupElement::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement::new(-self.m, -self.n)
    }
}

/// The six lattice elements of unit hexagonal norm: `±g1, ±g2, ±g3`.
pub fn unit_elements() -> [GroupElement; 6] {
    [
        GroupElement::new(1, 0),
        GroupElement::new(0, 1),
        GroupElement::new(-1, -1),
        GroupElement::new(-1, 0),
        GroupElement::new(0, -1),
        GroupElement::new(1, 1),
    ]
}

/// Hexagon vertices in counterclockwise order, one every 60 degrees:
/// `g1, -g3, g2, -g1, g3, -g2`.
fn hex_vertices() -> [Vec2; 6] {
    let g = generators();
    [g.g1, -g.g3, g.g2, -g.g1, g.g3, -g.g2]
}

/// The Minkowski functional of the hexagon with vertices `±g1, ±g2, ±g3`.
///
/// The input is decomposed over the two hexagon vertices adjacent to its
/// sector (one of six 60-degree sectors); the norm is the coefficient sum.
pub fn hex_norm(v: Vec2) -> f64 {
    if v.x == 0.0 && v.y == 0.0 {
        return 0.0;
    }
    let mut ang = v.angle();
    if ang < 0.0 {
        ang += 2.0 * PI;
    }
    let mut k = (ang / (PI / 3.0)).floor() as usize;
    if k > 5 {
        k = 5;
    }
    let verts = hex_vertices();
    let u0 = verts[k];
    let u1 = verts[(k + 1) % 6];
    let det = u0.cross(u1); // sin(60 deg) = sqrt(3)/2 for every adjacent pair
    let a = v.cross(u1) / det;
    let b = u0.cross(v) / det;
    a + b
}

/// Hexagonal norm of a lattice element.
pub fn group_norm(e: GroupElement) -> f64 {
    hex_norm(e.vector())
}

/// A constant R^2-valued 1-form on the plane: `omega(nu) = entries * nu`.
/// Being constant, its exterior derivative vanishes identically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixForm {
    /// Row-major 2x2 matrix.
    pub entries: [[f64; 2]; 2],
}

impl MatrixForm {
    pub fn new(entries: [[f64; 2]; 2]) -> Self {
        MatrixForm { entries }
    }

    pub fn identity() -> Self {
        MatrixForm::new([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn zero() -> Self {
        MatrixForm::new([[0.0, 0.0], [0.0, 0.0]])
    }

    /// `entries * v`.
    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.entries[0][0] * v.x + self.entries[0][1] * v.y,
            self.entries[1][0] * v.x + self.entries[1][1] * v.y,
        )
    }

    /// `entries^T * v`.
    pub fn transpose_apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.entries[0][0] * v.x + self.entries[1][0] * v.y,
            self.entries[0][1] * v.x + self.entries[1][1] * v.y,
        )
    }

    pub fn scaled(&self, s: f64) -> Self {
        MatrixForm::new([
            [self.entries[0][0] * s, self.entries[0][1] * s],
            [self.entries[1][0] * s, self.entries[1][1] * s],
        ])
    }

    pub fn plus(&self, other: &MatrixForm) -> Self {
        MatrixForm::new([
            [
                self.entries[0][0] + other.entries[0][0],
                self.entries[0][1] + other.entries[0][1],
            ],
            [
                self.entries[1][0] + other.entries[1][0],
                self.entries[1][1] + other.entries[1][1],
            ],
        ])
    }
}

/// `<omega(nu), e>` for a unit direction `nu` and a lattice element `e`.
pub fn dual_pairing(form: &MatrixForm, nu: Vec2, e: GroupElement) -> Result<f64> {
    let n = nu.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm: n });
    }
    Ok(form.apply(nu).dot(e.vector()))
}

/// Dual-norm comass of a constant matrix form:
/// `sup |<omega(nu), g>|` over unit Euclidean `nu` and the six unit-norm
/// lattice elements `g`.
///
/// For fixed `g` the extremizing direction is `nu = omega^T g / |omega^T g|`,
/// so the supremum is `max_i |omega^T g_i|` in closed form.
pub fn comass(form: &MatrixForm) -> f64 {
    let g = generators();
    [g.g1, g.g2, g.g3]
        .iter()
        .map(|&gi| form.transpose_apply(gi).norm())
        .fold(0.0, f64::max)
}
