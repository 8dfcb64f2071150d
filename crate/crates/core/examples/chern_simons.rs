//! Three-dimensional Chern–Simons with gauge and diffeomorphism ghosts.

use jetvar::models::chern_simons;
use jetvar::models::su2_constants;

fn main() -> jetvar::Result<()> {
    let model = chern_simons(su2_constants());
    let checks = [
        ("identities", model.check_noether_identities()?),
        ("gauge operator", model.check_gauge_operator()?),
        ("gauge condition", model.check_gauge_condition()?),
        ("BRST nilpotency", model.check_brst_nilpotency()?),
        ("master equation", model.check_master_equation()?),
    ];
    for (name, residual) in checks {
        match residual {
            None => println!("{name:16} ok"),
            Some(r) => println!("{name:16} residual {r}"),
        }
    }
    Ok(())
}
