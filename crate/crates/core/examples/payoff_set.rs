//! Limit equilibrium payoff set as an intersection of maximal half-spaces.

use infoshare::decomposition;
use infoshare::GameSpec;

fn main() -> infoshare::Result<()> {
    let spec = GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, 0.9)?;
    for n in [8, 36, 360] {
        let set = decomposition::ppe_payoff_set(&spec, n)?;
        let poly = set.polygon_vertices.as_ref().expect("two firms give a polygon");
        println!(
            "{n:>3} directions: {} vertices, Hausdorff distance to the feasible set {:.2e}",
            poly.len(),
            set.discretization_error.unwrap_or(f64::NAN)
        );
    }
    let set = decomposition::ppe_payoff_set(&spec, 360)?;
    print!("{}", set.vertices_csv());

    // three firms: half-spaces only
    let three = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9)?;
    let set = decomposition::ppe_payoff_set_seeded(&three, 50, 1)?;
    let tightest = set.halfspaces.iter().map(|h| h.k).fold(f64::INFINITY, f64::min);
    println!("N=3: {} half-spaces, smallest bound {tightest:.4}", set.halfspaces.len());
    Ok(())
}
