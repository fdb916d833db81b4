//! Critical points of the framed coordinate for C^3 and the conifold.

use remodel::algebra::{Prec, Scalar, C, Q};
use remodel::cli::selftest::{C3_F1, CONIFOLD_F1};
use remodel::curve::CurveConfig;

fn main() {
    for f in [1, 2, 3, -2, -1, 0] {
        let text = C3_F1.replace("\"framing\": 1", &format!("\"framing\": {f}"));
        match CurveConfig::from_str(&text).unwrap().build::<Q>(&()) {
            Ok(curve) => {
                let pts: Vec<String> = curve.critical.iter().map(|c| c.to_string()).collect();
                println!("C^3 f={f:2}: {pts:?}");
            }
            Err(e) => println!("C^3 f={f:2}: {e}"),
        }
    }
    let curve = CurveConfig::from_str(CONIFOLD_F1).unwrap().build::<C>(&Prec(128)).unwrap();
    for c in &curve.critical {
        println!("conifold f=1 (q = 1/10): {}", c.render());
    }
}
