// `M(r)` along a projective line, as CSV for plotting.

use detvar::io::read_state;
use detvar::slice::{slice_csv, slice_line, LineSpec};
use detvar::{Complex64, RankPolicy};

pub fn run_example() -> detvar::Result<()> {
    let st = read_state(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/separable_2x2.json"
    ))?;
    let rho = st.density()?;
    let one = Complex64::from(1.0);
    let zero = Complex64::from(0.0);
    let line = LineSpec {
        p: vec![one, zero],
        q: vec![zero, one],
        phi: 0.0,
    };
    let rows = slice_line(&rho, 1, &line, 9, &RankPolicy::default())?;
    print!("{}", slice_csv(&rows));
    Ok(())
}

fn main() {
    run_example().expect("slice example");
}
