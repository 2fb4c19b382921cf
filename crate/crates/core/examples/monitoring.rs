//! Public and private signal laws, and seeded sampling.

use infoshare::monitoring::{self, MonitoringMode, PublicSignal, SignalRealization};
use infoshare::{ActionProfile, GameSpec};

fn main() -> infoshare::Result<()> {
    let spec = GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, 0.9)?;

    for r in ["11", "01", "00"] {
        let r: ActionProfile = r.parse()?;
        let probs = monitoring::public_signal_distribution(&spec, &r).probs()?;
        let cols: Vec<String> = probs
            .iter()
            .enumerate()
            .map(|(b, p)| format!("{}={p:.4}", bits(&PublicSignal::from_index(b, 2))))
            .collect();
        println!("r={r}: {}", cols.join("  "));
    }

    // empirical check against the exact law
    let r: ActionProfile = "11".parse()?;
    let n = 50_000;
    let hits = (0..n)
        .filter(|&t| monitoring::sample_public(spec.public_accuracy(), &r, 42, t).index() == 3)
        .count();
    println!("P(b=11 | r=11) ~ {:.4} over {n} draws (exact 0.81)", hits as f64 / n as f64);

    // private beliefs: each firm observes every other firm
    let three = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9)?;
    let r: ActionProfile = "101".parse()?;
    if let SignalRealization::Private(m) = monitoring::sample_signals(&three, &r, 42, 0, MonitoringMode::Private) {
        for i in 0..3 {
            println!("firm {} believes {:?}", i + 1, m.row(i));
        }
    }
    let cross = monitoring::cross_observation_reduction(&three, &r, 1, &[])?;
    println!("a random tester flags firm 2 with probability {}", cross.bit_zero_prob(0));
    Ok(())
}

fn bits(s: &PublicSignal) -> String {
    s.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}
