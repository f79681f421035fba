// Partial-transpose cross-check.

use detvar::io::read_state;
use detvar::ppt::ppt_test;

pub fn run_example() -> detvar::Result<()> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    for name in [
        "bell.json",
        "maximally_mixed_2x3.json",
        "separable_2x2.json",
        "conic_3x2.json",
        "isotropic_3x3.json",
    ] {
        let rep = ppt_test(&read_state(format!("{fixtures}/{name}"))?.density()?);
        println!(
            "{name:<26} {:?}  min eigenvalue {:+.6}  exact = {}",
            rep.verdict, rep.min_eigenvalue, rep.exact
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("ppt example");
}
