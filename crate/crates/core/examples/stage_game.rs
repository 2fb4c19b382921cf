//! Payoffs, assumptions, minmax and the feasible set of a linear game.

use infoshare::{ActionProfile, GameSpec};

fn main() -> infoshare::Result<()> {
    let spec = GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, 0.9)?;

    println!("profile  payoffs");
    for r in ActionProfile::enumerate(2) {
        println!("{r}       {:?}", spec.profile_payoff(&r));
    }

    let rep = spec.check_assumptions();
    println!("A1 {}  A2 {}  A2' {}", rep.a1_holds, rep.a2_holds, rep.a2prime_holds);

    let mm = spec.minmax(0)?;
    println!("minmax profile {} with value {}", mm.profile, mm.value);

    let hull = spec.feasible_hull(true)?;
    println!("individually rational feasible set:");
    for v in &hull.vertices {
        println!("  ({:.4}, {:.4})", v[0], v[1]);
    }

    // more firms: welfare grows with every extra discloser when G > L/(N-1)
    let big = GameSpec::linear(5, 0.5, 1.0, 0.9, 0.1, 0.9)?;
    let welfare: Vec<f64> = (0..=5).map(|x| big.social_welfare(x)).collect::<Result<_, _>>()?;
    println!("welfare by number of disclosers (N=5): {welfare:?}");
    Ok(())
}
