//! Analytic head gradients against central finite differences.

use quasienergy::{grad_check, EnergyModel, HeadSpec};

fn main() -> quasienergy::Result<()> {
    for head in [
        HeadSpec::SumReluAsym { epsilon: 0.01 },
        HeadSpec::MaxReluAsym { epsilon: 0.01 },
        HeadSpec::SymmetricL2 { scale: 1.0 },
    ] {
        for dim in [1, 8, 32] {
            let m = EnergyModel::init(4, dim, head, 0)?;
            let err = grad_check(&m, 100, 1e-5, 1)?;
            println!("{head:?} dim {dim:>2}: worst relative error {err:.2e}");
        }
    }
    Ok(())
}
