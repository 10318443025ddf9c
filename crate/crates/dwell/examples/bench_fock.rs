use dwell::fock::{evolve_fock, extract_covariance};
use dwell::params::ModelParams;
use std::time::Instant;

fn main() {
    // criterion-9 scale
    let p = ModelParams::symmetric(0.0, 2.0, 1.0, 1.0, 2.0).unwrap();
    let t0 = Instant::now();
    let traj = evolve_fock(&p, 30, 5.0, 0.25).unwrap();
    println!("cutoff 30, t=5, dt_out=0.25: {:.2?} ({} samples, tail {:.2e}, safe {})",
        t0.elapsed(), traj.samples.len(), traj.max_tail_mass, traj.truncation_safe);
    let g = extract_covariance(&traj.samples.last().unwrap().1).unwrap();
    println!("final cov s11 = {:.6}", g.cov.matrix()[(0,0)]);

    // criterion-10 scale (one U value)
    let p = ModelParams::new(4.0, 2.0, 3.0, 1.0, 1.0, 1.0, 2.0).unwrap();
    let t0 = Instant::now();
    let traj = evolve_fock(&p, 25, 25.0, 12.5).unwrap();
    println!("cutoff 25, U=3, t=25: {:.2?} (tail {:.2e})", t0.elapsed(), traj.max_tail_mass);
    let g = extract_covariance(&traj.samples.last().unwrap().1).unwrap();
    println!("final cov s11 = {:.6}", g.cov.matrix()[(0,0)]);
}
