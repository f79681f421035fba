// Linearity diagnostic: separable mixtures versus a curved variety.

use detvar::factor::{factor_into_linear_forms, FactorOptions};
use detvar::io::read_state;
use detvar::linearity::{linearity_diagnostic, LinearityOptions};
use detvar::poly::MultiPoly;
use detvar::{Complex64, RankPolicy};

pub fn run_example() -> detvar::Result<()> {
    let policy = RankPolicy::default();
    let opts = LinearityOptions::default();
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

    // r_1 r_2 - r_3^2 has no linear factor.
    let conic = MultiPoly::from_terms(
        3,
        2,
        vec![
            (vec![1, 1, 0], Complex64::from(1.0)),
            (vec![0, 0, 2], Complex64::from(-1.0)),
        ],
    )?;
    let res = factor_into_linear_forms(&conic, &FactorOptions::default())?;
    println!(
        "r1 r2 - r3^2: {:?} ({} certificate planes)",
        res.status,
        res.certificate.len()
    );

    for (name, k) in [("separable_2x2.json", 1), ("conic_3x2.json", 1)] {
        let st = read_state(format!("{fixtures}/{name}"))?;
        let rep = linearity_diagnostic(&st.density()?, &st.ensemble(&policy)?, k, &opts)?;
        println!("{name}: {:?}", rep.verdict);
        if let Some(w) = rep.witness {
            println!(
                "  midpoint rank {} > {k}, deviations {:.3e} / {:.3e}",
                w.midpoint_rank, w.deviation, w.deviation_half
            );
        }
    }
    Ok(())
}

fn main() {
    run_example().expect("linearity example");
}
