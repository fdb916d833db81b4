use serde::Serialize;

use super::{ToricDiagram, ToricError};

/// Combinatorial invariants of a toric diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ToricCounts {
    /// Rays of the fan beyond the first three.
    pub p: i64,
    /// Lattice points of `P` not used by the triangulation.
    pub s: i64,
    /// Interior lattice points (genus of the mirror curve).
    pub fg: i64,
    /// Boundary lattice points (punctures of the mirror curve).
    pub fn_: i64,
    /// Twice the area of `P`.
    pub chi: i64,
}

impl ToricCounts {
    /// Euler characteristic of the punctured mirror curve.
    pub fn curve_euler_characteristic(&self) -> i64 {
        2 - 2 * self.fg - self.fn_
    }

    /// Number of ramification points of a Morse `X̂` on the mirror curve.
    pub fn expected_ramification(&self) -> i64 {
        2 * self.fg - 2 + self.fn_
    }
}

pub fn counts(d: &ToricDiagram) -> Result<ToricCounts, ToricError> {
    let lattice = d.lattice_points().len() as i64;
    let fn_ = d.boundary_points().len() as i64;
    let fg = d.interior_points().len() as i64;
    let p = d.triangulation_vertices().len() as i64 - 3;
    let s = lattice - 3 - p;
    let chi = d.area2();
    let c = ToricCounts { p, s, fg, fn_, chi };
    if p < 0 || s < 0 || fn_ < 3 {
        return Err(ToricError::IdentityViolation(format!("{c:?} has a negative count")));
    }
    if chi != 1 + p + s + fg {
        return Err(ToricError::IdentityViolation(format!("chi != 1 + p + s + fg for {c:?}")));
    }
    if chi != 2 * fg - 2 + fn_ {
        return Err(ToricError::IdentityViolation(format!("chi != 2fg - 2 + fn for {c:?}")));
    }
    // Pick: A = fg + fn/2 - 1, i.e. 2A = 2fg + fn - 2.
    if chi != 2 * fg + fn_ - 2 {
        return Err(ToricError::IdentityViolation(format!("Pick's theorem fails for {c:?}")));
    }
    if c.curve_euler_characteristic() != -chi {
        return Err(ToricError::IdentityViolation(format!("chi(C) != -chi for {c:?}")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::validate_diagram;

    #[test]
    fn c3_counts() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let c = counts(&d).unwrap();
        assert_eq!(c, ToricCounts { p: 0, s: 0, fg: 0, fn_: 3, chi: 1 });
    }

    #[test]
    fn conifold_counts() {
        let d = validate_diagram(
            &[(0, 0), (1, 0), (1, 1), (0, 1)],
            &[[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)]],
        )
        .unwrap();
        assert_eq!(counts(&d).unwrap(), ToricCounts { p: 1, s: 0, fg: 0, fn_: 4, chi: 2 });
    }

    #[test]
    fn c3_z3_counts() {
        let d = validate_diagram(&[(1, 0), (0, 1), (-1, -1)], &[[(1, 0), (0, 1), (-1, -1)]]).unwrap();
        assert_eq!(counts(&d).unwrap(), ToricCounts { p: 0, s: 1, fg: 1, fn_: 3, chi: 3 });
    }
}
