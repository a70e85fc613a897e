use std::time::Instant;
use stofde::covariance::{variogram_full, VariogramGrid};
use stofde::she_benchmark;

fn main() {
    let p = she_benchmark();
    for &(dt, dx) in &[(0.5f64, 0.0f64), (0.0, 0.5), (0.25, 0.5), (0.02, 0.04)] {
        let t0 = Instant::now();
        let v = variogram_full(dt, &[dx], &p, 1e-6);
        println!(
            "direct dt={dt} dx={dx}: {:?} in {:.3}s",
            v.map(|x| x.value),
            t0.elapsed().as_secs_f64()
        );
    }
    let t0 = Instant::now();
    let grid = VariogramGrid::new(&p).unwrap();
    println!("grid build: {:.3}s", t0.elapsed().as_secs_f64());
    let t0 = Instant::now();
    let mut acc = 0.0;
    for i in 1..=64 {
        for j in 0..=16 {
            acc += grid.eval(i as f64 / 64.0, &[j as f64 / 8.0]).unwrap().value;
        }
    }
    println!("grid 1088 evals: {:.3}s (acc={acc:.3})", t0.elapsed().as_secs_f64());
}
