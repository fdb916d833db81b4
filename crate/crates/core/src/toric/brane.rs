use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::algebra::Scalar;

use super::{validate_diagram, MirrorPolynomial, Point, ToricDiagram, ToricError};

/// An affine lattice map `p ↦ M p + t` with `det M = 1` that moves a chosen
/// boundary edge of `P` to the segment `{0} × [0, m]`, with `P` in `x ≥ 0`.
///
/// In these coordinates the brane divisor is `X = 0` and the `m` punctures on
/// it are the roots of `H(0, Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraneFrame {
    /// The edge in the original coordinates, counterclockwise.
    pub edge: [Point; 2],
    pub m: i64,
    pub matrix: [[i64; 2]; 2],
    pub translation: Point,
}

impl BraneFrame {
    pub fn apply(&self, p: Point) -> Point {
        let [[a, b], [c, d]] = self.matrix;
        (a * p.0 + b * p.1 + self.translation.0, c * p.0 + d * p.1 + self.translation.1)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == [[1, 0], [0, 1]] && self.translation == (0, 0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "edge": [[self.edge[0].0, self.edge[0].1], [self.edge[1].0, self.edge[1].1]],
            "m": self.m,
            "matrix": self.matrix,
            "translation": [self.translation.0, self.translation.1],
        })
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// The edge with outward normal `(-1, 0)` if there is one, else the first
/// counterclockwise edge.
pub fn default_brane_edge(d: &ToricDiagram) -> [Point; 2] {
    let edges = d.edges();
    edges
        .iter()
        .copied()
        .find(|e| ToricDiagram::outward_normal(e) == (-1, 0))
        .unwrap_or(edges[0])
}

pub fn brane_frame(d: &ToricDiagram, edge: [Point; 2]) -> Result<BraneFrame, ToricError> {
    let edge = d.find_edge(edge[0], edge[1]).ok_or_else(|| {
        ToricError::Malformed(format!("{:?}-{:?} is not a boundary edge of P", edge[0], edge[1]))
    })?;
    let m = ToricDiagram::edge_multiplicity(&edge);
    let e = ((edge[1].0 - edge[0].0) / m, (edge[1].1 - edge[0].1) / m);
    let nu = ToricDiagram::outward_normal(&edge);
    // det[e w] = e.0 w.1 - e.1 w.0 = 1
    let (g, x, y) = ext_gcd(e.0, -e.1);
    debug_assert_eq!(g, 1);
    let w0 = (y, x);
    debug_assert_eq!(e.0 * w0.1 - e.1 * w0.0, 1);
    // Shear w0 + k e towards the inward normal.
    let target = (-nu.0, -nu.1);
    let ee = (e.0 * e.0 + e.1 * e.1) as f64;
    let proj = ((target.0 - w0.0) * e.0 + (target.1 - w0.1) * e.1) as f64 / ee;
    let (k0, k1) = (proj.floor() as i64, proj.ceil() as i64);
    let dist = |k: i64| {
        let w = (w0.0 + k * e.0, w0.1 + k * e.1);
        (w.0 - target.0).pow(2) + (w.1 - target.1).pow(2)
    };
    let k = if dist(k1) < dist(k0) { k1 } else { k0 };
    let w = (w0.0 + k * e.0, w0.1 + k * e.1);
    // [e w]^{-1} = [[w.1, -w.0], [-e.1, e.0]]; M = R [e w]^{-1} with R = [[0,1],[-1,0]].
    let inv = [[w.1, -w.0], [-e.1, e.0]];
    let matrix = [[inv[1][0], inv[1][1]], [-inv[0][0], -inv[0][1]]];
    let low = edge[1];
    let ml = (matrix[0][0] * low.0 + matrix[0][1] * low.1, matrix[1][0] * low.0 + matrix[1][1] * low.1);
    Ok(BraneFrame {
        edge,
        m,
        matrix,
        translation: (-ml.0, -ml.1),
    })
}

/// The diagram in brane-adapted coordinates.
pub fn transform_diagram(d: &ToricDiagram, f: &BraneFrame) -> Result<ToricDiagram, ToricError> {
    let verts: Vec<Point> = d.vertices.iter().map(|&p| f.apply(p)).collect();
    let tris: Vec<[Point; 3]> = d
        .triangles
        .iter()
        .map(|t| [f.apply(t[0]), f.apply(t[1]), f.apply(t[2])])
        .collect();
    validate_diagram(&verts, &tris)
}

/// `H` in brane-adapted coordinates: the exponent lattice is mapped by the
/// frame, which amounts to a monomial change of variables on `(C*)²` times
/// an overall monomial.
pub fn transform_polynomial<F: Scalar>(h: &MirrorPolynomial<F>, f: &BraneFrame) -> MirrorPolynomial<F> {
    let terms: BTreeMap<Point, F> = h.terms.iter().map(|(&p, c)| (f.apply(p), c.clone())).collect();
    let mut gauge = h.gauge.map(|p| f.apply(p));
    gauge.sort();
    MirrorPolynomial { terms, gauge }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn c3_default_edge_is_identity() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let e = default_brane_edge(&d);
        assert_eq!(e, [(0, 1), (0, 0)]);
        let f = brane_frame(&d, e).unwrap();
        assert!(f.is_identity());
        assert_eq!(f.m, 1);
    }

    #[test]
    fn horizontal_conifold_edge_becomes_vertical() {
        let d = validate_diagram(
            &[(0, 0), (1, 0), (1, 1), (0, 1)],
            &[[(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 1), (0, 1)]],
        )
        .unwrap();
        let f = brane_frame(&d, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(f.apply((0, 0)), (0, 1));
        assert_eq!(f.apply((1, 0)), (0, 0));
        let t = transform_diagram(&d, &f).unwrap();
        assert!(t.vertices.iter().all(|p| p.0 >= 0));
        assert_eq!(default_brane_edge(&t), [(0, 1), (0, 0)]);
    }

    proptest! {
        #[test]
        fn frame_maps_any_edge_to_the_left_side(
            a in 1i64..4, b in 1i64..4, c in 1i64..4, pick in 0usize..4
        ) {
            // A lattice quadrilateral (0,0),(a,0),(a+c,b+c)... kept convex by construction.
            let verts = [(0, 0), (a, 0), (a + c, b), (0, b + c)];
            let d = match validate_diagram(&verts, &[[verts[0], verts[1], verts[2]], [verts[0], verts[2], verts[3]]]) {
                Ok(d) => d,
                Err(_) => return Ok(()),
            };
            let edges = d.edges();
            let e = edges[pick % edges.len()];
            let f = brane_frame(&d, e).unwrap();
            prop_assert_eq!(f.matrix[0][0] * f.matrix[1][1] - f.matrix[0][1] * f.matrix[1][0], 1);
            let t = transform_diagram(&d, &f).unwrap();
            prop_assert!(t.vertices.iter().all(|p| p.0 >= 0));
            prop_assert_eq!(f.apply(e[1]), (0, 0));
            prop_assert_eq!(f.apply(e[0]), (0, f.m));
            prop_assert_eq!(ToricDiagram::outward_normal(&[f.apply(e[0]), f.apply(e[1])]), (-1, 0));
        }
    }
}
