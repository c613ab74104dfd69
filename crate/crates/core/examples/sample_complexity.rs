// Sample sizes for the scenario program at several violation levels.

use swc_robust::{binomial_violation_bound, min_samples_exact, sample_complexity, SwcError};

pub fn run() -> Result<(), SwcError> {
    let (beta, d) = (0.001, 4);
    println!("{:>8} {:>8} {:>8} {:>12}", "eps", "N", "exact", "tail at N");
    for eps in [0.3, 0.2, 0.1, 0.05, 0.01] {
        let n = sample_complexity(eps, beta, d)?;
        let exact = min_samples_exact(eps, beta, d)?;
        let tail = binomial_violation_bound(n, eps, d)?;
        println!("{eps:>8} {n:>8} {exact:>8} {tail:>12.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
