//! Continuation payoffs enforcing mutual disclosure on a half-space.

use infoshare::decomposition::{self, Direction};
use infoshare::{ActionProfile, GameSpec};

fn main() -> infoshare::Result<()> {
    let spec = GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, 0.9)?;
    let r = ActionProfile::all(2, true);

    for lambda in [vec![1.0, 1.0], vec![1.0, 2.0], vec![2.0, 1.0]] {
        let d = Direction::new(lambda.clone())?;
        let closed = decomposition::table2_closed_form(&spec, &d)?;
        let solved = decomposition::solve_enforceability(&spec, &r, &d, false)?
            .map()
            .expect("mutual disclosure is enforceable off the axes");
        println!("lambda = {lambda:?}");
        print!("{}", solved.to_csv());
        let diff = closed
            .gamma_bar
            .iter()
            .flatten()
            .zip(solved.gamma_bar.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("closed form agrees to {diff:.1e}\n");
    }

    let map = decomposition::table2_closed_form(&spec, &Direction::new(vec![1.0, 1.0])?)?;
    let check = decomposition::verify_decomposition(&spec, &[2.0, 2.0], &r, &map, 0.9)?;
    println!("v = (2,2) at delta = 0.9: equality residual {:?}, incentive slack {:?}", check.equality_residual, check.ic_slack);

    for lambda in [[1.0, 1.0], [1.0, 0.0], [0.0, -1.0]] {
        let ks = decomposition::k_star(&spec, &Direction::new(lambda.to_vec())?)?;
        println!("k*({lambda:?}) = {:.4} via {}", ks.map.k_star_unnormalized(), ks.best_action);
    }
    Ok(())
}
