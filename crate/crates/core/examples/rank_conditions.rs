//! Individual and pairwise full rank under public monitoring.

use infoshare::conditions::{self, Evidence, SignalMatrix, Theorem};
use infoshare::{ActionProfile, GameSpec};

fn main() -> infoshare::Result<()> {
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.8, 0.2, 0.9)?;
    let r = ActionProfile::all(3, true);

    let m = SignalMatrix::public_for_firm(&spec, 0, &r)?;
    println!("firm 1 signal matrix at {r} (columns {:?})", m.col_labels);
    for (label, row) in m.row_labels.iter().zip(&m.rows) {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.3}")).collect();
        println!("  {label}: {}", cells.join(" "));
    }

    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let rep = conditions::pairwise_full_rank(&spec, i, j, &r)?;
        if let Evidence::Rank { computed, required, .. } = rep.evidence[0] {
            println!("pair ({},{}): rank {computed} of {required}", i + 1, j + 1);
        }
    }

    // equal accuracies make signals uninformative
    let mut blind = spec.clone();
    blind.alpha = 0.3;
    blind.epsilon = 0.3;
    let rep = conditions::individual_full_rank(&blind, 0, &r)?;
    println!("alpha = epsilon: individual full rank holds? {}", rep.holds);

    let report = conditions::theorem_preconditions(&spec, Theorem::Flm)?;
    println!("public-monitoring folk theorem preconditions hold? {}", report.holds);
    Ok(())
}
