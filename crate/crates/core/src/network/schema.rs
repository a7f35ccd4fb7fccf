//! JSON interchange schema for networks.
//!
//! ```json
//! {
//!   "space": "sphere" | "plane",
//!   "vertices": [{"id": "A", "coords": [x, y, z]}, ...],
//!   "edges": [{"from": "S", "to": "A"}, ...],
//!   "terminals": ["A", "B", "C"],
//!   "junctions": ["S"],
//!   "ball": {"center": [x, y, z], "radius": 0.5}   // optional, sphere only
//! }
//! ```
//!
//! Sphere coordinates are unit 3-vectors (validated on load) or
//! `{"lon": deg, "lat": deg}` pairs, normalized on load; 3-vectors are
//! canonical on output. Plane coordinates are 2-vectors.

use super::{EmbeddedNetwork, Point, SpaceTag};
use crate::error::{Error, Result};
use crate::linalg::{Vec2, Vec3};
use crate::sphere::{GeodesicBall, SpherePoint};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkFile {
    pub space: SpaceTag,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub terminals: Vec<String>,
    pub junctions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<BallRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    pub coords: CoordRecord,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallRecord {
    pub center: CoordRecord,
    pub radius: f64,
}

/// Either raw components (`[x, y]` / `[x, y, z]`) or longitude/latitude in
/// degrees (sphere only).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordRecord {
    Components(Vec<f64>),
    LonLat { lon: f64, lat: f64 },
}

impl CoordRecord {
    pub fn to_point(&self, space: SpaceTag) -> Result<Point> {
        match (self, space) {
            (CoordRecord::Components(c), SpaceTag::Sphere) => {
                if c.len() != 3 {
                    return Err(Error::Schema(format!(
                        "sphere coordinates need 3 components, got {}",
                        c.len()
                    )));
                }
                Ok(Point::Sphere(SpherePoint::new(Vec3::new(c[0], c[1], c[2]))?))
            }
            (CoordRecord::Components(c), SpaceTag::Plane) => {
                if c.len() != 2 {
                    return Err(Error::Schema(format!(
                        "plane coordinates need 2 components, got {}",
                        c.len()
                    )));
                }
                Ok(Point::Plane(Vec2::new(c[0], c[1])))
            }
            (CoordRecord::LonLat { lon, lat }, SpaceTag::Sphere) => {
                let lon = lon.to_radians();
                let lat = lat.to_radians();
                let (slat, clat) = lat.sin_cos();
                let (slon, clon) = lon.sin_cos();
                Ok(Point::Sphere(SpherePoint::new(Vec3::new(
                    clat * clon,
                    clat * slon,
                    slat,
                ))?))
            }
            (CoordRecord::LonLat { .. }, SpaceTag::Plane) => Err(Error::Schema(
                "lon/lat coordinates are only valid on the sphere".into(),
            )),
        }
    }

    pub fn from_point(p: &Point) -> Self {
        match p {
            Point::Sphere(sp) => {
                let c = sp.coords();
                CoordRecord::Components(vec![c.x, c.y, c.z])
            }
            Point::Plane(v) => CoordRecord::Components(vec![v.x, v.y]),
        }
    }
}

/// The network plus any ball and the per-class vertex ids recovered from a
/// file.
#[derive(Clone, Debug)]
pub struct LoadedNetwork {
    pub network: EmbeddedNetwork,
    pub ball: Option<GeodesicBall>,
    pub ids: Vec<String>,
}

pub fn to_network(file: &NetworkFile) -> Result<LoadedNetwork> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut points = Vec::with_capacity(file.vertices.len());
    let mut ids = Vec::with_capacity(file.vertices.len());
    for (i, v) in file.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            return Err(Error::Schema(format!("duplicate vertex id {:?}", v.id)));
        }
        points.push(v.coords.to_point(file.space)?);
        ids.push(v.id.clone());
    }
    let lookup = |id: &str| -> Result<usize> {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Schema(format!("unknown vertex id {id:?}")))
    };
    let mut edges = Vec::with_capacity(file.edges.len());
    for e in &file.edges {
        edges.push((lookup(&e.from)?, lookup(&e.to)?));
    }
    let mut terminals = Vec::with_capacity(file.terminals.len());
    for t in &file.terminals {
        terminals.push(lookup(t)?);
    }
    for j in &file.junctions {
        let c = lookup(j)?;
        if terminals.contains(&c) {
            return Err(Error::Schema(format!(
                "vertex {j:?} listed as both terminal and junction"
            )));
        }
    }
    let network = EmbeddedNetwork::from_vertices(points, &edges, terminals)?;
    let ball = match (&file.ball, file.space) {
        (Some(b), SpaceTag::Sphere) => {
            let center = b.center.to_point(SpaceTag::Sphere)?.as_sphere()?;
            Some(GeodesicBall::new(center, b.radius)?)
        }
        (Some(_), SpaceTag::Plane) => {
            return Err(Error::Schema("plane networks carry no geodesic ball".into()))
        }
        (None, _) => None,
    };
    Ok(LoadedNetwork { network, ball, ids })
}

pub fn from_network(
    net: &EmbeddedNetwork,
    ids: &[String],
    ball: Option<&GeodesicBall>,
) -> Result<NetworkFile> {
    if ids.len() != net.class_count() {
        return Err(Error::Schema(format!(
            "expected {} vertex ids, got {}",
            net.class_count(),
            ids.len()
        )));
    }
    let vertices = (0..net.class_count())
        .map(|c| VertexRecord {
            id: ids[c].clone(),
            coords: CoordRecord::from_point(&net.class_point(c)),
        })
        .collect();
    let edges = (0..net.edge_count())
        .map(|e| {
            let (a, b) = net.graph().edge_classes(e);
            EdgeRecord {
                from: ids[a].clone(),
                to: ids[b].clone(),
            }
        })
        .collect();
    let terminals = net.terminals().iter().map(|&t| ids[t].clone()).collect();
    let junctions = net.junction_classes().iter().map(|&j| ids[j].clone()).collect();
    let ball = ball.map(|b| BallRecord {
        center: CoordRecord::from_point(&Point::Sphere(b.center())),
        radius: b.radius(),
    });
    Ok(NetworkFile {
        space: net.space(),
        vertices,
        edges,
        terminals,
        junctions,
        ball,
    })
}

/// Default vertex ids: terminals `T0, T1, ...` in listed order, remaining
/// classes `J0, J1, ...`.
pub fn default_ids(net: &EmbeddedNetwork) -> Vec<String> {
    let mut ids = vec![String::new(); net.class_count()];
    for (k, &t) in net.terminals().iter().enumerate() {
        ids[t] = format!("T{k}");
    }
    let mut j = 0;
    for c in 0..net.class_count() {
        if ids[c].is_empty() {
            ids[c] = format!("J{j}");
            j += 1;
        }
    }
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::network_length;

    #[test]
    fn round_trip_sphere_network() {
        let json = r#"{
            "space": "sphere",
            "vertices": [
                {"id": "S", "coords": [0.0, 0.0, 1.0]},
                {"id": "A", "coords": {"lon": 0.0, "lat": 60.0}},
                {"id": "B", "coords": {"lon": 120.0, "lat": 60.0}},
                {"id": "C", "coords": {"lon": 240.0, "lat": 60.0}}
            ],
            "edges": [
                {"from": "S", "to": "A"},
                {"from": "S", "to": "B"},
                {"from": "S", "to": "C"}
            ],
            "terminals": ["A", "B", "C"],
            "junctions": ["S"],
            "ball": {"center": [0.0, 0.0, 1.0], "radius": 0.55}
        }"#;
        let file: NetworkFile = serde_json::from_str(json).unwrap();
        let loaded = to_network(&file).unwrap();
        assert_eq!(loaded.network.edge_count(), 3);
        assert!(loaded.ball.is_some());
        // Polar angle 30 degrees from the pole, three edges.
        let expect = 3.0 * 30.0f64.to_radians();
        assert!((network_length(&loaded.network) - expect).abs() < 1e-12);

        let out = from_network(&loaded.network, &loaded.ids, loaded.ball.as_ref()).unwrap();
        let reloaded = to_network(&out).unwrap();
        assert!((network_length(&reloaded.network) - expect).abs() < 1e-12);
        // Canonical output is unit 3-vectors.
        assert!(matches!(
            out.vertices[1].coords,
            CoordRecord::Components(ref c) if c.len() == 3
        ));
    }

    #[test]
    fn rejects_bad_records() {
        let bad_unit = r#"{
            "space": "sphere",
            "vertices": [
                {"id": "A", "coords": [0.0, 0.0, 2.0]},
                {"id": "B", "coords": [1.0, 0.0, 0.0]}
            ],
            "edges": [{"from": "A", "to": "B"}],
            "terminals": ["A", "B"],
            "junctions": []
        }"#;
        let file: NetworkFile = serde_json::from_str(bad_unit).unwrap();
        assert!(to_network(&file).is_err());

        let unknown_id = r#"{
            "space": "plane",
            "vertices": [
                {"id": "A", "coords": [0.0, 0.0]},
                {"id": "B", "coords": [1.0, 0.0]}
            ],
            "edges": [{"from": "A", "to": "Z"}],
            "terminals": ["A", "B"],
            "junctions": []
        }"#;
        let file: NetworkFile = serde_json::from_str(unknown_id).unwrap();
        assert!(matches!(to_network(&file), Err(Error::Schema(_))));
    }

    #[test]
    fn deterministic_serialization() {
        let net = EmbeddedNetwork::from_vertices(
            vec![
                Point::Plane(Vec2::new(0.0, 0.0)),
                Point::Plane(Vec2::new(1.0, 0.25)),
            ],
            &[(0, 1)],
            vec![0, 1],
        )
        .unwrap();
        let ids = default_ids(&net);
        let f1 = from_network(&net, &ids, None).unwrap();
        let f2 = from_network(&net, &ids, None).unwrap();
        assert_eq!(
            serde_json::to_string(&f1).unwrap(),
            serde_json::to_string(&f2).unwrap()
        );
    }
}
