//! Conditions for the private-monitoring folk theorem with communication.

use infoshare::conditions::{self, Evidence, Theorem};
use infoshare::GameSpec;

fn main() -> infoshare::Result<()> {
    for n in [3, 4] {
        let spec = GameSpec::linear(n, 1.0, 1.0, 0.9, 0.1, 0.9)?;
        let report = conditions::theorem_preconditions(&spec, Theorem::Km)?;
        println!("N={n}: {} sub-checks, all hold: {}", report.sub_reports.len(), report.holds);
    }

    let spec = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9)?;
    let c1 = conditions::check_c1(&spec, 0)?;
    for e in &c1.evidence {
        if let Evidence::Deviation { deviator, sup_distance, bit_gap, .. } = e {
            println!("C1, firm {deviator} deviates: sup distance {sup_distance:.4}, largest bit gap {bit_gap:.4}");
        }
    }
    let r = "111".parse()?;
    let c3 = conditions::check_c3(&spec, 0, 1, &r)?;
    if let Evidence::Segments { cosine: Some(c), .. } = c3.evidence[0] {
        println!("C3 at 111 for firms 1,2: cosine between deviation directions {c:.4}");
    }

    // two firms leave nobody to testify
    let duo = GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, 0.9)?;
    match conditions::check_c2(&duo, 0, 1, &"11".parse()?) {
        Err(e) => println!("N=2: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
