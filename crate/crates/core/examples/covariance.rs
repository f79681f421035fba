// Local-unitary covariance: `V_A^k(Tρ)` is the pushforward of `V_A^k(ρ)`.

use detvar::invariants::{check_covariance, CovarianceOptions, LocalUnitary};
use detvar::io::read_state;
use detvar::random::seeded_rng;
use detvar::RankPolicy;

pub fn run_example() -> detvar::Result<()> {
    let rho = read_state(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/rank2_2x3.json"
    ))?
    .density()?;
    let t = LocalUnitary::haar(rho.dim_a(), rho.dim_b(), &mut seeded_rng(1));
    let opts = CovarianceOptions {
        samples: 300,
        ..CovarianceOptions::default()
    };
    for k in 0..rho.dim_b() {
        let rep = check_covariance(&rho, &t, k, &opts, &RankPolicy::default())?;
        println!(
            "k = {k}: agree {} disagree {} near-threshold {} (min margin {:.2e})",
            rep.agree, rep.disagree, rep.near_threshold, rep.min_margin
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("covariance example");
}
