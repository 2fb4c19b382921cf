//! Repeated play: baseline strategies, Monte Carlo, and the promise automaton.

use infoshare::decomposition::Direction;
use infoshare::engine::{self, AlwaysDisclose, PromiseAutomaton, SignalTrigger, Strategy};
use infoshare::monitoring::MonitoringMode;
use infoshare::{Error, GameSpec};

fn main() -> infoshare::Result<()> {
    let spec = GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, 0.95)?;

    for k in [1, 5, 20] {
        let mc = engine::monte_carlo(
            &spec,
            |_| vec![Box::new(SignalTrigger::new(Some(k))) as Box<dyn Strategy>, Box::new(SignalTrigger::new(Some(k)))],
            500,
            400,
            1,
            MonitoringMode::Public,
        )?;
        println!("trigger after {k:>2} alarms: mean {:.4} (se {:.4})", mc.mean[0], mc.std_error[0]);
    }

    let mut s: Vec<Box<dyn Strategy>> = vec![Box::new(AlwaysDisclose), Box::new(AlwaysDisclose)];
    let trace = engine::run_episode(&spec, &mut s, 5, 3, MonitoringMode::Public)?;
    print!("{}", trace.to_csv());

    // three firms talking after private observations
    let three = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.95)?;
    let mut s: Vec<Box<dyn Strategy>> = (0..3)
        .map(|_| Box::new(engine::truthful_report_strategy(SignalTrigger::new(Some(4)))) as Box<dyn Strategy>)
        .collect();
    let trace = engine::run_episode(&three, &mut s, 200, 3, MonitoringMode::Private)?;
    println!("private monitoring, 3 firms: discounted payoff {:?}", trace.discounted_average());

    // a promise at a vertex of the feasible set cannot absorb any bad signal
    let lambda = Direction::new(vec![1.0, 1.0])?;
    for (v0, delta) in [([1.0, 1.5], 0.999), ([2.0, 2.0], 0.99)] {
        let spec = spec.clone().with_discount(delta)?;
        let p = PromiseAutomaton::new(&spec, v0.to_vec(), lambda.clone())?;
        let mut s: Vec<Box<dyn Strategy>> = vec![Box::new(p.clone()), Box::new(p)];
        match engine::run_episode(&spec, &mut s, 2000, 9, MonitoringMode::Public) {
            Ok(t) => println!("promise {v0:?}, delta {delta}: ran {} periods", t.horizon()),
            Err(Error::DiscountTooSmall { period, min_delta }) => {
                println!("promise {v0:?}, delta {delta}: left the feasible set in period {period} (needs delta >= {min_delta:.10})")
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
