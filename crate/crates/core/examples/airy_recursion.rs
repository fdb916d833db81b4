//! Correlators of the Airy curve x = z^2, y = z, compared with intersection numbers.

use remodel::algebra::Q;
use remodel::cli::selftest::{airy_reference, AIRY};
use remodel::curve::CurveConfig;
use remodel::recursion::{OmegaTable, RecursionConfig};

fn main() {
    let curve = CurveConfig::from_str(AIRY).unwrap().build::<Q>(&()).unwrap();
    let mut table = OmegaTable::new(curve, RecursionConfig::default());
    for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5)] {
        let pp = table.principal_parts(g, n).unwrap();
        println!("omega_{{{g},{n}}}:");
        for (poles, c) in pp {
            let orders: Vec<u32> = poles.iter().map(|p| p.1).collect();
            println!("  {c:>10} * prod dz_i / z_i^k_i, k = {orders:?}");
        }
    }
    println!("tabulated:");
    for ((g, n), key, want) in airy_reference() {
        let got = table.principal_parts(g, n).unwrap()[&key].clone();
        println!("  ({g},{n}) {:?}: {got} (expected {want})", key.iter().map(|p| p.1).collect::<Vec<_>>());
    }
}
