//! Point evaluation of a correlator, checked for symmetry under swapping arguments.

use remodel::algebra::Q;
use remodel::cli::selftest::C3_F1;
use remodel::curve::CurveConfig;
use remodel::recursion::{OmegaTable, RecursionConfig};

fn main() {
    let curve = CurveConfig::from_str(C3_F1).unwrap().build::<Q>(&()).unwrap();
    let mut t = OmegaTable::new(curve, RecursionConfig::default());
    let (a, b, c) = (Q::new(1, 3), Q::new(2, 7), Q::new(-5, 4));
    let v1 = t.evaluate(0, 3, &[a.clone(), b.clone(), c.clone()]).unwrap();
    let v2 = t.evaluate(0, 3, &[c, a.clone(), b]).unwrap();
    println!("omega_{{0,3}}(1/3, 2/7, -5/4) = {v1}");
    println!("omega_{{0,3}}(-5/4, 1/3, 2/7) = {v2}");
    println!("omega_{{1,1}}(1/3) = {}", t.evaluate(1, 1, &[a]).unwrap());
}
