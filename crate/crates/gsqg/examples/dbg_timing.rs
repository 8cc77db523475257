//! Scratch timing probe.

use std::time::Instant;

use gsqg::grid::GridSpec;
use gsqg::pseudosolution::{evaluate_pseudosolution, PseudoParams};
use gsqg::radial::{construct_f1, construct_f2, QuadratureSpec};
use gsqg::solver::{integrate, SolverConfig};

fn main() {
    let spec = QuadratureSpec::default();
    let t0 = Instant::now();
    let core = construct_f1(0.5, 2.2, 0.25, 2.0, 0.45, &spec).unwrap();
    println!("construct_f1: {:?}  r_ck = {:.4}", t0.elapsed(), core.r_ck);
    let t0 = Instant::now();
    let f2 = construct_f2(&core, 0.25, &spec).unwrap();
    println!("construct_f2: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let p = PseudoParams::build(&core, f2, 8, &spec).unwrap();
    println!("params: {:?}", t0.elapsed());

    let grid = GridSpec::new(512, 12.0 * p.r_ck).unwrap();
    let t0 = Instant::now();
    let theta0 = evaluate_pseudosolution(&p, 0.0, &grid).unwrap();
    println!("evaluate: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let config = SolverConfig::new(0.4, 0.01, usize::MAX).unwrap();
    let (_, diag) = integrate(&theta0, &config, 0.5, &[]).unwrap();
    println!(
        "integrate to 0.01: {:?}  checkpoints {}  max_v {:.3}",
        t0.elapsed(),
        diag.times.len(),
        diag.max_velocity.last().unwrap()
    );
}
