//! Refining an effort field toward the continuum. Coarse cell `(x, y)`
//! corresponds to fine cell `(2x, 2y)`; on spatially uniform fields the
//! energy between corresponding cells is the same at every level.

use quasienergy::{all_pairs_energy, lift_effort_field, refine_field, EffortField};

fn main() -> quasienergy::Result<()> {
    for (name, mut field) in [
        ("uniform effort 2", EffortField::uniform(3, 2, 1.0, 2.0)?),
        ("wind (0.5, 0)", EffortField::wind(3, 2, 1.0, (0.5, 0.0))?),
    ] {
        println!("{name}");
        let (w0, h0) = (field.width(), field.height());
        for level in 0..4 {
            let (w, h) = (field.width(), field.height());
            let table = all_pairs_energy(&lift_effort_field(&field))?;
            let far = field.cell((w0 - 1) << level, (h0 - 1) << level);
            println!(
                "  level {level}: {w}x{h} grid, spacing {:<6} E(origin -> (2,1)) = {}, back = {}",
                field.delta(),
                table.get(0, far),
                table.get(far, 0)
            );
            field = refine_field(&field);
        }
    }
    Ok(())
}
