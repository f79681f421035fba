// Membership of points in `V_A^k` and `V_B^k`.

use detvar::invariants::{member_va, member_vb};
use detvar::random::{ensemble_through_point, projective_point, seeded_rng};
use detvar::state::density_from_ensemble;
use detvar::{DensityMatrix, ProjectivePoint, RankPolicy};

pub fn run_example() -> detvar::Result<()> {
    let policy = RankPolicy::default();
    let mut rng = seeded_rng(3);

    // The maximally mixed state has M(r) = |r|^2 I / mn: V^k is empty.
    let mm = DensityMatrix::maximally_mixed(3, 3);
    let r = projective_point(3, &mut rng);
    let res = member_va(&mm, &r, 2, &policy)?;
    println!(
        "maximally mixed, k = 2: member = {}, rank = {}",
        res.member, res.rank
    );

    // A state whose pencil drops rank at a chosen point.
    let target = projective_point(3, &mut rng);
    let e = ensemble_through_point(3, 3, 4, 1, &target, &mut rng);
    let rho = density_from_ensemble(&e)?;
    for k in 0..3 {
        let res = member_va(&rho, &target, k, &policy)?;
        println!(
            "planted point, k = {k}: member = {}, rank = {}, margin = {:.3e}",
            res.member, res.rank, res.margin
        );
    }
    let res = member_vb(&rho, &ProjectivePoint::basis(3, 0), 2, &policy)?;
    println!("V_B^2 at e_0: member = {}", res.member);
    Ok(())
}

fn main() {
    run_example().expect("membership example");
}
