//! Lattice counts of a few toric diagrams and the identity chain they satisfy.

use remodel::toric::{counts, validate_diagram};

fn main() {
    let diagrams = [
        ("C^3", vec![(0, 0), (1, 0), (0, 1)], vec![[(0, 0), (1, 0), (0, 1)]]),
        (
            "conifold",
            vec![(0, 0), (1, 0), (1, 1), (0, 1)],
            vec![[(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 1), (0, 1)]],
        ),
        (
            "local P^2",
            vec![(-1, -1), (1, 0), (0, 1)],
            vec![
                [(-1, -1), (1, 0), (0, 0)],
                [(1, 0), (0, 1), (0, 0)],
                [(0, 1), (-1, -1), (0, 0)],
            ],
        ),
    ];
    for (name, vertices, triangles) in diagrams {
        let d = validate_diagram(&vertices, &triangles).expect("valid diagram");
        let c = counts(&d).expect("counts");
        println!(
            "{name:10} p={} s={} g={} n={} 2Area={}  chi(curve)={} ramification={}",
            c.p,
            c.s,
            c.fg,
            c.fn_,
            c.chi,
            c.curve_euler_characteristic(),
            c.expected_ramification()
        );
    }
}
