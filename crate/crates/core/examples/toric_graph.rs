//! The trivalent graph dual to a triangulated toric diagram.

use remodel::toric::{emit_toric_graph, validate_diagram};

fn main() {
    let d = validate_diagram(
        &[(0, 0), (2, 0), (0, 2)],
        &[
            [(0, 0), (1, 0), (0, 1)],
            [(1, 0), (2, 0), (1, 1)],
            [(0, 1), (1, 1), (0, 2)],
            [(1, 0), (1, 1), (0, 1)],
        ],
    )
    .unwrap();
    let g = emit_toric_graph(&d);
    println!("trivalent: {}", g.is_trivalent());
    println!("{:#}", g.to_json());
}
