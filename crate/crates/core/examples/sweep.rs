//! How the punishment after a one-sided alarm shrinks as monitoring improves.

use infoshare::decomposition::{self, Direction};
use infoshare::GameSpec;

fn main() -> infoshare::Result<()> {
    let d = Direction::new(vec![1.0, 1.0])?;
    let alphas: Vec<f64> = (0..5).map(|k| 0.6 + 0.08 * k as f64).collect();
    let epsilons: Vec<f64> = (0..5).map(|k| 0.05 + 0.08 * k as f64).collect();

    print!("alpha\\eps");
    for e in &epsilons {
        print!("{e:>9.2}");
    }
    println!();
    for &a in &alphas {
        print!("{a:>9.2}");
        for &e in &epsilons {
            let spec = GameSpec::linear(2, 3.0, 1.0, a, e, 0.9)?;
            let g = decomposition::table2_closed_form(&spec, &d)?.gamma_bar[1][0];
            print!("{g:>9.3}");
        }
        println!();
    }
    Ok(())
}
