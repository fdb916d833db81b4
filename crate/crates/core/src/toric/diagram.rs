use std::collections::BTreeMap;

use serde_json::Value;

use super::{cross, gcd, Point, ToricError};

/// A convex lattice polygon with a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDiagram {
    /// Vertices, counterclockwise, starting at the lexicographically smallest.
    pub vertices: Vec<Point>,
    /// Counterclockwise triangles, in input order.
    pub triangles: Vec<[Point; 3]>,
}

/// The diagram block of a configuration file, before validation.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramInput {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[Point; 3]>,
    /// Lattice point to value text (a number or a parameter name).
    pub coefficients: BTreeMap<Point, String>,
}

fn lattice_coord(v: &Value) -> Result<i64, ToricError> {
    if let Some(i) = v.as_i64() {
        return Ok(i);
    }
    if let Some(f) = v.as_f64() {
        if f.fract() == 0.0 && f.abs() < 1e15 {
            return Ok(f as i64);
        }
        return Err(ToricError::NonLatticeVertex(format!("coordinate {f} is not an integer")));
    }
    if let Some(s) = v.as_str() {
        return s
            .trim()
            .parse::<i64>()
            .map_err(|_| ToricError::NonLatticeVertex(format!("coordinate '{s}' is not an integer")));
    }
    Err(ToricError::Malformed(format!("expected a coordinate, got {v}")))
}

fn point(v: &Value) -> Result<Point, ToricError> {
    match v.as_array() {
        Some(a) if a.len() == 2 => Ok((lattice_coord(&a[0])?, lattice_coord(&a[1])?)),
        _ => Err(ToricError::Malformed(format!("expected [x, y], got {v}"))),
    }
}

impl DiagramInput {
    pub fn from_json(v: &Value) -> Result<Self, ToricError> {
        let verts = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| ToricError::Malformed("missing \"vertices\" array".into()))?;
        let vertices = verts.iter().map(point).collect::<Result<Vec<_>, _>>()?;
        let tris = v
            .get("triangles")
            .and_then(Value::as_array)
            .ok_or_else(|| ToricError::Malformed("missing \"triangles\" array".into()))?;
        let mut triangles = Vec::new();
        for t in tris {
            let t = t
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| ToricError::Malformed(format!("triangle must list 3 points, got {t}")))?;
            triangles.push([point(&t[0])?, point(&t[1])?, point(&t[2])?]);
        }
        let mut coefficients = BTreeMap::new();
        if let Some(c) = v.get("coefficients") {
            let obj = c
                .as_object()
                .ok_or_else(|| ToricError::Malformed("\"coefficients\" must be an object".into()))?;
            for (k, val) in obj {
                let (m, n) = k
                    .split_once(',')
                    .ok_or_else(|| ToricError::Malformed(format!("coefficient key '{k}' is not \"m,n\"")))?;
                let m = m.trim().parse::<i64>();
                let n = n.trim().parse::<i64>();
                let (m, n) = match (m, n) {
                    (Ok(m), Ok(n)) => (m, n),
                    _ => return Err(ToricError::NonLatticeVertex(format!("coefficient key '{k}'"))),
                };
                let text = match val {
                    Value::String(s) => s.clone(),
                    Value::Number(x) => x.to_string(),
                    other => {
                        return Err(ToricError::BadCoefficient(format!(
                            "coefficient at {k} must be a number or a name, got {other}"
                        )))
                    }
                };
                coefficients.insert((m, n), text);
            }
        }
        Ok(DiagramInput {
            vertices,
            triangles,
            coefficients,
        })
    }

    pub fn validate(&self) -> Result<ToricDiagram, ToricError> {
        validate_diagram(&self.vertices, &self.triangles)
    }
}

/// Strict convex hull (no collinear points), counterclockwise, starting at the
/// lexicographically smallest point.
fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed-interior disjointness of two counterclockwise triangles via
/// separating axes along their edges.
fn interiors_overlap(a: &[Point; 3], b: &[Point; 3]) -> bool {
    for tri in [a, b] {
        for i in 0..3 {
            let (p, q) = (tri[i], tri[(i + 1) % 3]);
            // Outward normal of a counterclockwise edge.
            let n = (q.1 - p.1, p.0 - q.0);
            let proj = |t: &[Point; 3]| {
                let v: Vec<i64> = t.iter().map(|r| r.0 * n.0 + r.1 * n.1).collect();
                (*v.iter().min().unwrap(), *v.iter().max().unwrap())
            };
            let (amin, amax) = proj(a);
            let (bmin, bmax) = proj(b);
            if amax <= bmin || bmax <= amin {
                return false;
            }
        }
    }
    true
}

pub fn validate_diagram(vertices: &[Point], triangles: &[[Point; 3]]) -> Result<ToricDiagram, ToricError> {
    let mut uniq = vertices.to_vec();
    uniq.sort();
    uniq.dedup();
    if uniq.len() != vertices.len() {
        return Err(ToricError::Malformed("repeated polytope vertex".into()));
    }
    if vertices.len() < 3 {
        return Err(ToricError::NonConvexPolytope("fewer than 3 vertices".into()));
    }
    let hull = convex_hull(vertices);
    if hull.len() < 3 {
        return Err(ToricError::NonConvexPolytope("vertices are collinear".into()));
    }
    if hull.len() != vertices.len() {
        return Err(ToricError::NonConvexPolytope(
            "listed points are not the vertices of a strictly convex polygon".into(),
        ));
    }
    let d = ToricDiagram {
        vertices: hull,
        triangles: Vec::new(),
    };
    let mut tris = Vec::with_capacity(triangles.len());
    for (i, t) in triangles.iter().enumerate() {
        let c = cross(t[0], t[1], t[2]);
        if c == 0 {
            return Err(ToricError::DegenerateTriangle(i));
        }
        let t = if c > 0 { *t } else { [t[0], t[2], t[1]] };
        if !t.iter().all(|&p| d.contains(p)) {
            return Err(ToricError::TriangleOutsidePolytope(i));
        }
        tris.push(t);
    }
    for i in 0..tris.len() {
        for j in i + 1..tris.len() {
            if interiors_overlap(&tris[i], &tris[j]) {
                return Err(ToricError::TriangulationOverlap(i, j));
            }
        }
    }
    let covered: i64 = tris.iter().map(|t| cross(t[0], t[1], t[2])).sum();
    let total = d.area2();
    if covered != total {
        return Err(ToricError::TriangulationGap { covered, total });
    }
    Ok(ToricDiagram {
        vertices: d.vertices,
        triangles: tris,
    })
}

impl ToricDiagram {
    /// Twice the area (shoelace).
    pub fn area2(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum()
    }

    /// Boundary edges in counterclockwise order.
    pub fn edges(&self) -> Vec<[Point; 2]> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| [self.vertices[i], self.vertices[(i + 1) % n]])
            .collect()
    }

    /// Closed polygon membership.
    pub fn contains(&self, p: Point) -> bool {
        self.edges().iter().all(|e| cross(e[0], e[1], p) >= 0)
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.contains(p) && self.edges().iter().any(|e| cross(e[0], e[1], p) == 0)
    }

    /// `P ∩ Z^2`, sorted.
    pub fn lattice_points(&self) -> Vec<Point> {
        let xmin = self.vertices.iter().map(|p| p.0).min().unwrap_or(0);
        let xmax = self.vertices.iter().map(|p| p.0).max().unwrap_or(0);
        let ymin = self.vertices.iter().map(|p| p.1).min().unwrap_or(0);
        let ymax = self.vertices.iter().map(|p| p.1).max().unwrap_or(0);
        let mut out = Vec::new();
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                if self.contains((x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn interior_points(&self) -> Vec<Point> {
        self.lattice_points()
            .into_iter()
            .filter(|&p| !self.on_boundary(p))
            .collect()
    }

    pub fn boundary_points(&self) -> Vec<Point> {
        self.lattice_points()
            .into_iter()
            .filter(|&p| self.on_boundary(p))
            .collect()
    }

    /// The boundary edge with endpoints `{a, b}` in either order, oriented
    /// counterclockwise.
    pub fn find_edge(&self, a: Point, b: Point) -> Option<[Point; 2]> {
        self.edges()
            .into_iter()
            .find(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a))
    }

    /// Number of lattice segments on a boundary edge.
    pub fn edge_multiplicity(e: &[Point; 2]) -> i64 {
        gcd(e[1].0 - e[0].0, e[1].1 - e[0].1)
    }

    /// Outward primitive normal of a counterclockwise boundary edge.
    pub fn outward_normal(e: &[Point; 2]) -> Point {
        let (dx, dy) = (e[1].0 - e[0].0, e[1].1 - e[0].1);
        let g = gcd(dx, dy);
        (dy / g, -dx / g)
    }

    /// Index of the lexicographically smallest triangle (vertices sorted).
    pub fn default_gauge(&self) -> usize {
        let key = |t: &[Point; 3]| {
            let mut v = t.to_vec();
            v.sort();
            v
        };
        (0..self.triangles.len())
            .min_by_key(|&i| key(&self.triangles[i]))
            .unwrap_or(0)
    }

    /// Every triangle has area 1/2.
    pub fn is_unimodular(&self) -> bool {
        self.triangles.iter().all(|t| cross(t[0], t[1], t[2]) == 1)
    }

    /// Distinct lattice points used as triangle vertices.
    pub fn triangulation_vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.triangles.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    }
}
