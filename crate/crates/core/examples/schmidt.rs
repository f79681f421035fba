// Schmidt number of pure states from the kernel variety `V^0`.

use detvar::invariants::{recover_product_factors, schmidt_number};
use detvar::io::read_state;
use detvar::random::{pure_state_with_schmidt_rank, seeded_rng};
use detvar::RankPolicy;

pub fn run_example() -> detvar::Result<()> {
    let policy = RankPolicy::default();
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    for name in ["bell.json", "product_3x3.json", "schmidt3_4x4.json"] {
        let v = read_state(format!("{fixtures}/{name}"))?.pure(&policy)?;
        let rep = schmidt_number(&v, &policy);
        println!("{name:<20} d = {}  v0_dim = {:?}", rep.d, rep.v0_dim);
    }

    let mut rng = seeded_rng(7);
    let v = pure_state_with_schmidt_rank(3, 5, 1, &mut rng);
    if let Some((a, b)) = recover_product_factors(&v, &policy) {
        let rebuilt = detvar::PureState::product(&a, &b)?;
        println!(
            "product factors recovered, fidelity {:.15}",
            v.fidelity(&rebuilt)
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("schmidt example");
}
