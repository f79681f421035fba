// Exact minors of the holomorphic pencil and the separable structure check.

use detvar::minors::{pencil_minor_polys, separable_minor_structure, MinorCaps};
use detvar::random::{product_ensemble, pure_state, seeded_rng};
use detvar::PencilBlocks;

pub fn run_example() -> detvar::Result<()> {
    let caps = MinorCaps::default();
    let mut rng = seeded_rng(5);

    // For a pure state the 1x1 minors are the linear forms Σ_i a_ij r_i.
    let v = pure_state(2, 3, &mut rng);
    let minors = pencil_minor_polys(&PencilBlocks::from_ensemble(&v.to_ensemble()), 0, &caps)?;
    for mi in &minors {
        println!("row {:?}: {}", mi.rows, serde_json::to_string(&mi.poly)?);
    }

    // Separable mixtures: every minor is det(B_RS) times a product of forms.
    let pe = product_ensemble(3, 3, 3, &mut rng);
    for k in 0..3 {
        let rep = separable_minor_structure(&pe, k, &caps)?;
        println!(
            "k = {k}: {} minors, max residual {:.1e}, holds = {}",
            rep.minors_checked,
            rep.max_residual,
            rep.holds()
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("minors example");
}
